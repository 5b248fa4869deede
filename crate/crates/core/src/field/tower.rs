use std::collections::HashMap;
use std::sync::OnceLock;

use super::{make_field, AdditiveSolver, FieldElement, FieldError, FieldSpec, Level, MAX_T};

/// F_{q²} together with F_{q⁴} and a fixed embedding between them.
///
/// The embedding sends the generator of F_{q²} to the numerically smallest
/// root of the F_{q²} modulus inside F_{q⁴}.
#[derive(Debug)]
pub struct FieldTower {
    t: u32,
    base: FieldSpec,
    quartic: FieldSpec,
    embed_table: Vec<FieldElement>,
    restrict_table: HashMap<u32, FieldElement>,
}

/// Cached tower for `t`.
pub fn tower(t: u32) -> Result<&'static FieldTower, FieldError> {
    static TOWERS: [OnceLock<Result<FieldTower, FieldError>>; MAX_T as usize] =
        [const { OnceLock::new() }; MAX_T as usize];
    if !(1..=MAX_T).contains(&t) {
        return Err(FieldError::UnsupportedT(t));
    }
    TOWERS[t as usize - 1]
        .get_or_init(|| FieldTower::build(t))
        .as_ref()
        .map_err(Clone::clone)
}

impl FieldTower {
    fn build(t: u32) -> Result<FieldTower, FieldError> {
        let base = make_field(t, Level::Base)?;
        let quartic = make_field(t, Level::Quartic)?;
        let sub_degree = base.degree();
        // F_{q²} inside F_{q⁴} is the kernel of u ↦ u^(q²) + u.
        let fixed = AdditiveSolver::new(quartic, &[(sub_degree, quartic.one()), (0, quartic.one())]);
        let root = fixed
            .kernel()
            .into_iter()
            .find(|&r| quartic.eval_gf2_poly(base.modulus(), r).is_zero())
            .expect("modulus of F_q² splits in F_q⁴");
        let powers: Vec<FieldElement> = (0..sub_degree)
            .scan(quartic.one(), |acc, _| {
                let cur = *acc;
                *acc = quartic.mul(*acc, root);
                Some(cur)
            })
            .collect();
        let embed_table: Vec<FieldElement> = base
            .elements()
            .map(|a| {
                powers
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| a.bits() >> i & 1 == 1)
                    .fold(quartic.zero(), |acc, (_, &p)| quartic.add(acc, p))
            })
            .collect();
        let restrict_table = base
            .elements()
            .map(|a| (embed_table[a.bits() as usize].bits(), a))
            .collect();
        Ok(FieldTower {
            t,
            base,
            quartic,
            embed_table,
            restrict_table,
        })
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn q(&self) -> u64 {
        1 << self.t
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn quartic(&self) -> &FieldSpec {
        &self.quartic
    }

    pub fn field(&self, level: Level) -> &FieldSpec {
        match level {
            Level::Base => &self.base,
            Level::Quartic => &self.quartic,
        }
    }

    /// Level of an element, judged by its degree tag.
    pub fn level_of(&self, a: FieldElement) -> Option<Level> {
        if self.base.contains(a) {
            Some(Level::Base)
        } else if self.quartic.contains(a) {
            Some(Level::Quartic)
        } else {
            None
        }
    }

    pub fn embed(&self, a: FieldElement) -> FieldElement {
        assert!(self.base.contains(a), "embed expects an F_q² element");
        self.embed_table[a.bits() as usize]
    }

    /// Move an F_{q²} element (or an element already at `level`) to `level`.
    pub fn lift(&self, a: FieldElement, level: Level) -> FieldElement {
        match (self.level_of(a), level) {
            (Some(Level::Base), Level::Quartic) => self.embed(a),
            (Some(l), target) if l == target => a,
            _ => panic!("cannot move {a:?} to level {}", level.index()),
        }
    }

    /// Inverse of `embed`, defined on the image only.
    pub fn restrict(&self, a: FieldElement) -> Option<FieldElement> {
        if self.base.contains(a) {
            return Some(a);
        }
        self.restrict_table.get(&a.bits()).copied()
    }

    /// u ↦ u^(q²), the Frobenius relative to F_{q²}.
    pub fn frobenius_q2(&self, a: FieldElement) -> FieldElement {
        match self.level_of(a) {
            Some(Level::Base) => a,
            Some(Level::Quartic) => self.quartic.frobenius_power(a, 2 * self.t),
            None => panic!("element {a:?} outside the tower"),
        }
    }
}
