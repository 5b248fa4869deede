use std::collections::BTreeMap;

use crate::field::{FieldElement, FieldSpec, FieldTower, Level};
use crate::series::binomial_mod2;

/// One monomial c·x^i·y^j.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub x_exp: u32,
    pub y_exp: u32,
    pub coeff: FieldElement,
}

/// Sparse bivariate polynomial over F_{q²}, keyed by (x-exponent, y-exponent).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    field: FieldSpec,
    terms: BTreeMap<(u32, u32), FieldElement>,
}

impl Polynomial {
    pub fn zero(field: FieldSpec) -> Polynomial {
        Polynomial {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(field: FieldSpec, terms: impl IntoIterator<Item = (u32, u32, FieldElement)>) -> Polynomial {
        let mut p = Polynomial::zero(field);
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert(self.field.zero());
        *entry = self.field.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> FieldElement {
        self.terms.get(&(i, j)).copied().unwrap_or(self.field.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms
            .iter()
            .map(|(&(x_exp, y_exp), &coeff)| Term { x_exp, y_exp, coeff })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    /// Evaluate at a point whose coordinates live at `level`; coefficients are
    /// embedded as needed. Returns `None` on a level mismatch.
    pub fn evaluate(&self, tower: &FieldTower, x: FieldElement, y: FieldElement, level: Level) -> Option<FieldElement> {
        let f = tower.field(level);
        if !f.contains(x) || !f.contains(y) {
            return None;
        }
        Some(self.terms().fold(f.zero(), |acc, t| {
            let c = tower.lift(t.coeff, level);
            let m = f.mul(f.pow(x, t.x_exp as u64), f.pow(y, t.y_exp as u64));
            f.add(acc, f.mul(c, m))
        }))
    }

    /// Sum of the terms not involving y, evaluated at x.
    pub fn evaluate_x_part(&self, tower: &FieldTower, x: FieldElement, level: Level) -> FieldElement {
        let f = tower.field(level);
        self.terms().filter(|t| t.y_exp == 0).fold(f.zero(), |acc, t| {
            f.add(acc, f.mul(tower.lift(t.coeff, level), f.pow(x, t.x_exp as u64)))
        })
    }

    pub fn partial_x(&self) -> Polynomial {
        Polynomial::from_terms(
            self.field,
            self.terms()
                .filter(|t| t.x_exp % 2 == 1)
                .map(|t| (t.x_exp - 1, t.y_exp, t.coeff)),
        )
    }

    pub fn partial_y(&self) -> Polynomial {
        Polynomial::from_terms(
            self.field,
            self.terms()
                .filter(|t| t.y_exp % 2 == 1)
                .map(|t| (t.x_exp, t.y_exp - 1, t.coeff)),
        )
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: FieldElement) -> Polynomial {
        let f = self.field;
        Polynomial::from_terms(f, self.terms().map(|t| (t.x_exp, t.y_exp, f.mul(t.coeff, c))))
    }

    /// F(cx·x, cy·y).
    pub fn scale_variables(&self, cx: FieldElement, cy: FieldElement) -> Polynomial {
        let f = self.field;
        Polynomial::from_terms(
            f,
            self.terms().map(|t| {
                let w = f.mul(f.pow(cx, t.x_exp as u64), f.pow(cy, t.y_exp as u64));
                (t.x_exp, t.y_exp, f.mul(t.coeff, w))
            }),
        )
    }

    /// F(x, y + c·x^e), expanded with binomials mod 2.
    pub fn shift_y(&self, c: FieldElement, e: u32) -> Polynomial {
        let f = self.field;
        let mut out = Polynomial::zero(f);
        for t in self.terms() {
            for k in 0..=t.y_exp {
                if !binomial_mod2(t.y_exp as u64, k as u64) {
                    continue;
                }
                let r = t.y_exp - k;
                out.add_term(t.x_exp + e * r, k, f.mul(t.coeff, f.pow(c, r as u64)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::tower;

    #[test]
    fn shift_matches_pointwise_substitution() {
        let tw = tower(2).unwrap();
        let f = *tw.base();
        let g = f.generator();
        let p = Polynomial::from_terms(f, [(5, 0, f.one()), (0, 2, g), (0, 1, f.one()), (1, 3, g)]);
        let c = f.pow(g, 7);
        for e in 0..2 {
            let shifted = p.shift_y(c, e);
            for x in f.elements() {
                for y in f.elements() {
                    let y2 = f.add(y, f.mul(c, f.pow(x, e as u64)));
                    assert_eq!(
                        shifted.evaluate(tw, x, y, Level::Base),
                        p.evaluate(tw, x, y2, Level::Base)
                    );
                }
            }
        }
    }

    #[test]
    fn partials_annihilate_even_exponents() {
        let f = *tower(2).unwrap().base();
        let p = Polynomial::from_terms(f, [(5, 0, f.one()), (0, 2, f.one()), (0, 1, f.one())]);
        assert_eq!(p.partial_y(), Polynomial::from_terms(f, [(0, 0, f.one())]));
        assert_eq!(p.partial_x(), Polynomial::from_terms(f, [(4, 0, f.one())]));
    }

    #[test]
    fn cancelling_terms_are_dropped() {
        let f = *tower(1).unwrap().base();
        let mut p = Polynomial::zero(f);
        p.add_term(1, 1, f.one());
        p.add_term(1, 1, f.one());
        assert!(p.is_empty());
    }

    #[test]
    fn evaluate_rejects_level_mismatch() {
        let tw = tower(2).unwrap();
        let f = *tw.base();
        let p = Polynomial::from_terms(f, [(1, 0, f.one())]);
        assert!(p.evaluate(tw, tw.quartic().one(), f.one(), Level::Base).is_none());
    }
}
