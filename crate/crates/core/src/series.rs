//! Truncated power series in a local parameter τ and Hasse derivatives.

use std::fmt;

use crate::field::{FieldElement, FieldSpec};

/// binom(n, k) mod 2 by Lucas: odd iff every bit of k is a bit of n.
pub fn binomial_mod2(n: u64, k: u64) -> bool {
    k <= n && (k & n) == k
}

/// Compare `binomial_mod2` with Pascal's rule mod 2 for all n < `n_max`.
pub fn lucas_matches_pascal(n_max: usize) -> bool {
    let mut row = vec![true];
    for n in 0..n_max {
        if (0..=n).any(|k| row[k] != binomial_mod2(n as u64, k as u64)) {
            return false;
        }
        let mut next = vec![true; n + 2];
        for k in 1..=n {
            next[k] = row[k - 1] ^ row[k];
        }
        row = next;
    }
    true
}

/// ∑ c_n τ^(n+offset) + O(τ^precision), with `coeffs[0] ≠ 0` whenever
/// `coeffs` is nonempty and `precision = offset + coeffs.len()`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    field: FieldSpec,
    offset: usize,
    coeffs: Vec<FieldElement>,
}

impl TruncatedSeries {
    /// Coefficients of τ^0, τ^1, ..., known modulo τ^precision. Entries past
    /// `precision` are dropped; missing entries are zero.
    pub fn new(field: FieldSpec, dense: &[FieldElement], precision: usize) -> TruncatedSeries {
        let mut offset = 0;
        while offset < precision && dense.get(offset).is_none_or(|c| c.is_zero()) {
            offset += 1;
        }
        let coeffs = (offset..precision)
            .map(|n| dense.get(n).copied().unwrap_or(field.zero()))
            .collect();
        TruncatedSeries { field, offset, coeffs }
    }

    pub fn zero(field: FieldSpec, precision: usize) -> TruncatedSeries {
        TruncatedSeries::new(field, &[], precision)
    }

    pub fn constant(field: FieldSpec, c: FieldElement, precision: usize) -> TruncatedSeries {
        TruncatedSeries::new(field, &[c], precision)
    }

    /// c + τ.
    pub fn shifted_parameter(field: FieldSpec, c: FieldElement, precision: usize) -> TruncatedSeries {
        TruncatedSeries::new(field, &[c, field.one()], precision)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn precision(&self) -> usize {
        self.offset + self.coeffs.len()
    }

    /// Coefficient of τ^n, or `None` past the precision.
    pub fn coeff(&self, n: usize) -> Option<FieldElement> {
        if n >= self.precision() {
            None
        } else if n < self.offset {
            Some(self.field.zero())
        } else {
            Some(self.coeffs[n - self.offset])
        }
    }

    /// Coefficients of τ^0 .. τ^(precision−1).
    pub fn dense(&self) -> Vec<FieldElement> {
        (0..self.precision()).map(|n| self.coeff(n).unwrap()).collect()
    }

    /// `None` when every known coefficient vanishes.
    pub fn valuation(&self) -> Option<usize> {
        (!self.coeffs.is_empty()).then_some(self.offset)
    }

    /// All known coefficients are zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, precision: usize) -> TruncatedSeries {
        TruncatedSeries::new(self.field, &self.dense(), precision.min(self.precision()))
    }

    /// Read the stored coefficients as an exact polynomial and extend the
    /// precision with zeros.
    pub fn padded(&self, precision: usize) -> TruncatedSeries {
        TruncatedSeries::new(self.field, &self.dense(), precision.max(self.precision()))
    }

    /// Equal on every coefficient both operands know.
    pub fn agrees(&self, other: &TruncatedSeries) -> bool {
        let p = self.precision().min(other.precision());
        (0..p).all(|n| self.coeff(n) == other.coeff(n))
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let f = self.field;
        let p = self.precision().min(other.precision());
        let dense: Vec<_> = (0..p)
            .map(|n| f.add(self.coeff(n).unwrap(), other.coeff(n).unwrap()))
            .collect();
        TruncatedSeries::new(f, &dense, p)
    }

    pub fn scale(&self, c: FieldElement) -> TruncatedSeries {
        let dense: Vec<_> = self.dense().into_iter().map(|a| self.field.mul(a, c)).collect();
        TruncatedSeries::new(self.field, &dense, self.precision())
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let f = self.field;
        let p = (self.offset + other.precision()).min(other.offset + self.precision());
        let base = self.offset + other.offset;
        let mut dense = vec![f.zero(); p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let n = base + i + j;
                if n >= p {
                    break;
                }
                dense[n] = f.add(dense[n], f.mul(a, b));
            }
        }
        TruncatedSeries::new(f, &dense, p)
    }

    /// In characteristic 2 squaring is additive, so the error term squares too
    /// and the precision doubles.
    pub fn square(&self) -> TruncatedSeries {
        let f = self.field;
        let p = 2 * self.precision();
        let mut dense = vec![f.zero(); p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            dense[2 * (self.offset + i)] = f.square(a);
        }
        TruncatedSeries::new(f, &dense, p)
    }

    pub fn pow(&self, mut e: u64) -> TruncatedSeries {
        if e == 0 {
            return TruncatedSeries::constant(self.field, self.field.one(), self.precision());
        }
        let mut base = self.clone();
        let mut acc: Option<TruncatedSeries> = None;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.square();
        }
        acc.expect("e > 0")
    }

    /// Multiplicative inverse; `None` unless the constant term is nonzero.
    pub fn inverse(&self) -> Option<TruncatedSeries> {
        let f = self.field;
        if self.offset != 0 || self.coeffs.is_empty() {
            return None;
        }
        let p = self.precision();
        let c0_inv = f.inv(self.coeffs[0]).ok()?;
        let mut out = vec![f.zero(); p];
        out[0] = c0_inv;
        for n in 1..p {
            let s = (1..=n).fold(f.zero(), |acc, k| f.add(acc, f.mul(self.coeffs[k], out[n - k])));
            out[n] = f.mul(s, c0_inv);
        }
        Some(TruncatedSeries::new(f, &out, p))
    }

    /// D^i(∑ c_n τ^n) = ∑ binom(n, i) c_n τ^(n−i).
    pub fn hasse_derivative(&self, i: usize) -> TruncatedSeries {
        let f = self.field;
        let p = self.precision().saturating_sub(i);
        let dense: Vec<_> = (0..p)
            .map(|m| {
                let n = m + i;
                match self.coeff(n) {
                    Some(c) if binomial_mod2(n as u64, i as u64) => c,
                    _ => f.zero(),
                }
            })
            .collect();
        TruncatedSeries::new(f, &dense, p)
    }
}

impl fmt::Display for TruncatedSeries {
    /// `v + [c_0, c_1, ...] mod τ^N`, N the absolute precision.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hex: Vec<String> = self.coeffs.iter().map(|c| c.to_hex()).collect();
        write!(f, "{} + [{}] mod τ^{}", self.offset, hex.join(", "), self.precision())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, Level};
    use proptest::prelude::*;

    fn f16() -> FieldSpec {
        make_field(2, Level::Base).unwrap()
    }

    fn monomial(f: FieldSpec, n: usize, prec: usize) -> TruncatedSeries {
        let mut d = vec![f.zero(); n + 1];
        d[n] = f.one();
        TruncatedSeries::new(f, &d, prec)
    }

    #[test]
    fn lucas_small_values() {
        assert!(binomial_mod2(5, 1));
        assert!(!binomial_mod2(5, 2));
        assert!(binomial_mod2(6, 2));
        assert!(!binomial_mod2(2, 3));
        assert!(lucas_matches_pascal(64));
    }

    #[test]
    fn hasse_on_monomials() {
        let f = f16();
        let t5 = monomial(f, 5, 20);
        assert!(t5.hasse_derivative(1).agrees(&monomial(f, 4, 19)));
        assert!(t5.hasse_derivative(2).is_zero());
        let t6 = monomial(f, 6, 20);
        assert!(t6.hasse_derivative(2).agrees(&monomial(f, 4, 18)));
        assert_eq!(t6.hasse_derivative(2).precision(), 18);
        // D²(τ·τ⁵) = D¹(τ)·D¹(τ⁵)
        let t1 = monomial(f, 1, 20);
        let lhs = t1.mul(&t5).hasse_derivative(2);
        let rhs = t1.hasse_derivative(1).mul(&t5.hasse_derivative(1));
        assert!(lhs.agrees(&rhs));
        assert_eq!(lhs.valuation(), Some(4));
    }

    #[test]
    fn precision_is_conservative() {
        let f = f16();
        let a = TruncatedSeries::new(f, &[f.zero(), f.one()], 5);
        let b = TruncatedSeries::new(f, &[f.one()], 3);
        assert_eq!(a.mul(&b).precision(), 4);
        assert_eq!(a.add(&b).precision(), 3);
        assert_eq!(a.square().precision(), 10);
        let z = TruncatedSeries::zero(f, 7);
        assert_eq!(z.valuation(), None);
        assert_eq!(z.mul(&a).precision(), 8);
        assert_eq!(format!("{a}"), "1 + [1, 0, 0, 0] mod τ^5");
    }

    #[test]
    fn inverse_roundtrip() {
        let f = f16();
        let g = f.generator();
        let s = TruncatedSeries::new(f, &[g, f.one(), f.zero(), g], 10);
        let inv = s.inverse().unwrap();
        let one = TruncatedSeries::constant(f, f.one(), 10);
        assert!(s.mul(&inv).agrees(&one));
        assert!(monomial(f, 1, 5).inverse().is_none());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let f = f16();
        let s = TruncatedSeries::new(f, &[f.generator(), f.one(), f.generator()], 12);
        let mut acc = TruncatedSeries::constant(f, f.one(), 12);
        for e in 0..7 {
            assert!(s.pow(e).agrees(&acc), "e = {e}");
            acc = acc.mul(&s);
        }
    }

    fn arb_series() -> impl Strategy<Value = (Vec<u32>, usize, usize)> {
        (proptest::collection::vec(0u32..16, 8..24), 0usize..3, 0usize..6)
    }

    proptest! {
        #[test]
        fn hasse_chain_rule((raw, off, i) in arb_series(), j in 0usize..6) {
            let f = f16();
            let mut dense = vec![f.zero(); off];
            dense.extend(raw.iter().map(|&b| f.element(b)));
            let s = TruncatedSeries::new(f, &dense, dense.len());
            let lhs = s.hasse_derivative(j).hasse_derivative(i);
            let rhs = s.hasse_derivative(i + j);
            if binomial_mod2((i + j) as u64, i as u64) {
                prop_assert!(lhs.agrees(&rhs));
            } else {
                prop_assert!(lhs.is_zero());
            }
        }
    }
}
