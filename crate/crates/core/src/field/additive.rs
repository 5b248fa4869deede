use super::{FieldElement, FieldError, FieldSpec};

/// Solver for L(u) = c where L(u) = ∑ c_k u^(2^k) is GF(2)-linear.
///
/// The map is stored as an XOR basis of its image, each basis vector tagged
/// with the input combination producing it; inputs that reduce to zero span
/// the kernel.
#[derive(Clone, Debug)]
pub struct AdditiveSolver {
    field: FieldSpec,
    terms: Vec<(u32, FieldElement)>,
    /// (image vector, preimage combination), indexed by leading bit.
    basis: Vec<Option<(u32, u32)>>,
    kernel: Vec<u32>,
}

impl AdditiveSolver {
    /// `terms` are (k, c_k) pairs meaning c_k·u^(2^k).
    pub fn new(field: FieldSpec, terms: &[(u32, FieldElement)]) -> AdditiveSolver {
        let m = field.degree();
        let mut solver = AdditiveSolver {
            field,
            terms: terms.to_vec(),
            basis: vec![None; m as usize],
            kernel: Vec::new(),
        };
        for j in 0..m {
            let image = solver.apply(field.element(1 << j)).bits();
            let (rest, comb) = solver.reduce(image, 1 << j);
            if rest == 0 {
                solver.kernel.push(comb);
            } else {
                let lead = 31 - rest.leading_zeros();
                solver.basis[lead as usize] = Some((rest, comb));
            }
        }
        solver
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn apply(&self, u: FieldElement) -> FieldElement {
        let f = &self.field;
        self.terms
            .iter()
            .fold(f.zero(), |acc, &(k, c)| f.add(acc, f.mul(c, f.frobenius_power(u, k))))
    }

    fn reduce(&self, mut v: u32, mut comb: u32) -> (u32, u32) {
        for lead in (0..self.basis.len()).rev() {
            if v >> lead & 1 == 1 {
                if let Some((b, c)) = self.basis[lead] {
                    v ^= b;
                    comb ^= c;
                }
            }
        }
        (v, comb)
    }

    pub fn kernel_dimension(&self) -> usize {
        self.kernel.len()
    }

    /// One solution, or `None` when `c` is outside the image.
    pub fn particular(&self, c: FieldElement) -> Option<FieldElement> {
        let (rest, comb) = self.reduce(c.bits(), 0);
        (rest == 0).then(|| self.field.element(comb))
    }

    /// Kernel elements in increasing mask order.
    pub fn kernel(&self) -> Vec<FieldElement> {
        let mut out: Vec<u32> = (0u32..1 << self.kernel.len())
            .map(|sel| {
                self.kernel
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| sel >> i & 1 == 1)
                    .fold(0, |acc, (_, &v)| acc ^ v)
            })
            .collect();
        out.sort_unstable();
        out.into_iter().map(|b| self.field.element(b)).collect()
    }

    /// Full solution coset of L(u) = c, sorted by mask.
    pub fn solve(&self, c: FieldElement) -> Vec<FieldElement> {
        let Some(p) = self.particular(c) else {
            return Vec::new();
        };
        let mut out: Vec<FieldElement> = self.kernel().into_iter().map(|k| self.field.add(k, p)).collect();
        out.sort_unstable();
        out
    }
}

/// All u with u² + u = c.
pub fn solve_artin_schreier(field: &FieldSpec, c: FieldElement) -> Vec<FieldElement> {
    AdditiveSolver::new(*field, &[(1, field.one()), (0, field.one())]).solve(c)
}

/// All α in `field` with ∑_{i=1}^t a_i α^(q/2^i) = b, where `coeffs` = a_1..a_t.
pub fn linearized_solve(
    field: &FieldSpec,
    coeffs: &[FieldElement],
    b: FieldElement,
) -> Result<Vec<FieldElement>, FieldError> {
    if coeffs.iter().all(|a| a.is_zero()) {
        return Err(FieldError::ZeroCoefficients);
    }
    let t = coeffs.len() as u32;
    let terms: Vec<(u32, FieldElement)> = coeffs.iter().enumerate().map(|(i, &a)| (t - 1 - i as u32, a)).collect();
    Ok(AdditiveSolver::new(*field, &terms).solve(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, Level};
    use proptest::prelude::*;

    fn brute_force(f: &FieldSpec, coeffs: &[FieldElement], b: FieldElement) -> Vec<FieldElement> {
        let t = coeffs.len() as u32;
        f.elements()
            .filter(|&u| {
                let v = coeffs.iter().enumerate().fold(f.zero(), |acc, (i, &a)| {
                    f.add(acc, f.mul(a, f.pow(u, 1 << (t - 1 - i as u32))))
                });
                v == b
            })
            .collect()
    }

    #[test]
    fn artin_schreier_at_zero() {
        let f = make_field(2, Level::Base).unwrap();
        assert_eq!(solve_artin_schreier(&f, f.zero()), vec![f.zero(), f.one()]);
    }

    #[test]
    fn artin_schreier_matches_trace() {
        let f = make_field(2, Level::Base).unwrap();
        let g5 = f.pow(f.generator(), 5);
        assert_eq!(solve_artin_schreier(&f, g5).len(), 2);
        for c in f.elements() {
            let brute: Vec<_> = f.elements().filter(|&u| f.add(f.square(u), u) == c).collect();
            let sols = solve_artin_schreier(&f, c);
            assert_eq!(sols, brute);
            assert_eq!(sols.len(), if f.absolute_trace(c) == 0 { 2 } else { 0 });
        }
    }

    #[test]
    fn linearized_small_cases() {
        let f16 = make_field(2, Level::Base).unwrap();
        let one = f16.one();
        assert_eq!(
            linearized_solve(&f16, &[one, one], f16.zero()).unwrap(),
            vec![f16.zero(), one]
        );
        for b in f16.elements().filter(|&b| f16.absolute_trace(b) == 1) {
            assert!(linearized_solve(&f16, &[one, one], b).unwrap().is_empty());
            assert!(brute_force(&f16, &[one, one], b).is_empty());
        }
        let f64_ = make_field(3, Level::Base).unwrap();
        let o = f64_.one();
        let kernel = linearized_solve(&f64_, &[o, o, o], f64_.zero()).unwrap();
        assert_eq!(kernel, brute_force(&f64_, &[o, o, o], f64_.zero()));
        // α⁴+α²+α vanishes on the trace-zero part of F_8 ⊂ F_64
        assert_eq!(kernel.len(), 4);
        assert_eq!(
            linearized_solve(&f64_, &[f64_.zero(); 3], o),
            Err(FieldError::ZeroCoefficients)
        );
    }

    proptest! {
        #[test]
        fn linearized_solutions_satisfy_equation(
            t in 2u32..=4,
            raw in proptest::collection::vec(any::<u32>(), 4),
            rhs in any::<u32>(),
        ) {
            let f = make_field(t, Level::Base).unwrap();
            let mask = f.size() as u32 - 1;
            let mut coeffs: Vec<_> = raw.iter().take(t as usize).map(|&r| f.element(r & mask)).collect();
            if coeffs.iter().all(|c| c.is_zero()) {
                coeffs[0] = f.one();
            }
            let b = f.element(rhs & mask);
            let sols = linearized_solve(&f, &coeffs, b).unwrap();
            prop_assert_eq!(&sols, &brute_force(&f, &coeffs, b));
        }

        #[test]
        fn artin_schreier_pairs(t in 1u32..=5, rhs in any::<u32>()) {
            let f = make_field(t, Level::Quartic).unwrap();
            let c = f.element(rhs & (f.size() as u32 - 1));
            let sols = solve_artin_schreier(&f, c);
            prop_assert!(sols.is_empty() || sols.len() == 2);
            if sols.len() == 2 {
                prop_assert_eq!(f.add(sols[0], sols[1]), f.one());
                for u in sols {
                    prop_assert_eq!(f.add(f.square(u), u), c);
                }
            }
        }
    }
}
