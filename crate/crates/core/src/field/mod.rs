//! Binary field arithmetic for the tower F_q ⊂ F_{q²} ⊂ F_{q⁴}, q = 2^t.
//!
//! Elements are bit masks of polynomials over GF(2) reduced modulo a fixed
//! irreducible polynomial read from a built-in table (`moduli.txt`). The
//! subfield F_q is never materialised separately: it is the fixed field of
//! the q-power map inside F_{q²}.

mod additive;
mod tower;

pub use additive::{linearized_solve, solve_artin_schreier, AdditiveSolver};
pub use tower::{tower, FieldTower};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use rand::Rng;
use thiserror::Error;

const MODULUS_TABLE: &str = include_str!("../moduli.txt");

/// Largest supported `t` (q = 32).
pub const MAX_T: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("unsupported t = {0} (expected 1..={MAX_T})")]
    UnsupportedT(u32),
    #[error("no modulus of degree {0} in the built-in table")]
    MissingModulus(u32),
    #[error("table modulus {modulus:#x} of degree {degree} is reducible")]
    NotIrreducible { degree: u32, modulus: u64 },
    #[error("elements belong to different fields (degree {left} vs {right})")]
    Mismatch { left: u32, right: u32 },
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("{sub} does not divide the field degree {degree}")]
    NotDivisor { sub: u32, degree: u32 },
    #[error("invalid element encoding {0:?}")]
    Parse(String),
    #[error("coefficient list is empty or all zero")]
    ZeroCoefficients,
}

/// Tower level: 1 is F_{q²}, 2 is F_{q⁴}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Base,
    Quartic,
}

impl Level {
    pub fn index(self) -> u8 {
        match self {
            Level::Base => 1,
            Level::Quartic => 2,
        }
    }

    pub fn from_index(i: u8) -> Option<Level> {
        match i {
            1 => Some(Level::Base),
            2 => Some(Level::Quartic),
            _ => None,
        }
    }

    /// Field degree over GF(2) at this level.
    pub fn degree(self, t: u32) -> u32 {
        match self {
            Level::Base => 2 * t,
            Level::Quartic => 4 * t,
        }
    }
}

/// An element of GF(2^m). The degree tag catches elements from different
/// fields being combined.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    bits: u32,
    degree: u8,
}

impl FieldElement {
    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn degree(self) -> u32 {
        self.degree as u32
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn is_one(self) -> bool {
        self.bits == 1
    }

    /// Fixed-width lowercase hex, ⌈m/4⌉ digits.
    pub fn to_hex(self) -> String {
        let width = (self.degree as usize).div_ceil(4);
        format!("{:0width$x}", self.bits, width = width)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}):{}", self.degree, self.to_hex())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// GF(2^m) with its table modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    t: u32,
    degree: u32,
    modulus: u64,
}

fn modulus_table() -> &'static BTreeMap<u32, u64> {
    static TABLE: OnceLock<BTreeMap<u32, u64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        MODULUS_TABLE
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                let (m, hex) = l.split_once(':').expect("malformed modulus table line");
                let m: u32 = m.trim().parse().expect("malformed modulus degree");
                let mask = u64::from_str_radix(hex.trim(), 16).expect("malformed modulus mask");
                (m, mask)
            })
            .collect()
    })
}

/// The built-in table as (degree, mask) pairs.
pub fn modulus_entries() -> Vec<(u32, u64)> {
    modulus_table().iter().map(|(&m, &p)| (m, p)).collect()
}

fn poly_degree(p: u64) -> u32 {
    63 - p.leading_zeros()
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree 1..=deg/2.
pub fn is_irreducible(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let m = poly_degree(p);
    for d in 1..=m / 2 {
        for f in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_rem(p, f) == 0 {
                return false;
            }
        }
    }
    true
}

/// Build GF(2^{2t}) (`Level::Base`) or GF(2^{4t}) (`Level::Quartic`).
pub fn make_field(t: u32, level: Level) -> Result<FieldSpec, FieldError> {
    if !(1..=MAX_T).contains(&t) {
        return Err(FieldError::UnsupportedT(t));
    }
    FieldSpec::with_degree(t, level.degree(t))
}

impl FieldSpec {
    fn with_degree(t: u32, degree: u32) -> Result<FieldSpec, FieldError> {
        let modulus = *modulus_table().get(&degree).ok_or(FieldError::MissingModulus(degree))?;
        if poly_degree(modulus) != degree || !is_irreducible(modulus) {
            return Err(FieldError::NotIrreducible { degree, modulus });
        }
        Ok(FieldSpec { t, degree, modulus })
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// q = 2^t of the tower this field belongs to.
    pub fn q(&self) -> u64 {
        1 << self.t
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn size(&self) -> u64 {
        1 << self.degree
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            bits: 0,
            degree: self.degree as u8,
        }
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// The class of z, a root of the modulus.
    pub fn generator(&self) -> FieldElement {
        self.element(2)
    }

    /// Panics if `bits` does not fit in the field.
    pub fn element(&self, bits: u32) -> FieldElement {
        assert!(
            (bits as u64) < self.size(),
            "mask {bits:#x} out of range for GF(2^{})",
            self.degree
        );
        FieldElement {
            bits,
            degree: self.degree as u8,
        }
    }

    pub fn try_element(&self, bits: u64) -> Result<FieldElement, FieldError> {
        if bits < self.size() {
            Ok(self.element(bits as u32))
        } else {
            Err(FieldError::Parse(format!("{bits:#x}")))
        }
    }

    pub fn parse_hex(&self, s: &str) -> Result<FieldElement, FieldError> {
        let s = s.trim();
        let s = s.strip_prefix("0x").unwrap_or(s);
        let bits = u64::from_str_radix(s, 16).map_err(|_| FieldError::Parse(s.to_string()))?;
        self.try_element(bits)
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.degree as u32 == self.degree
    }

    fn check(&self, a: FieldElement) -> Result<(), FieldError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(FieldError::Mismatch {
                left: self.degree,
                right: a.degree(),
            })
        }
    }

    /// All elements in increasing mask order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size() as u32).map(move |b| self.element(b))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.element(rng.gen_range(0..self.size() as u32))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.element(rng.gen_range(1..self.size() as u32))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        FieldElement {
            bits: a.bits ^ b.bits,
            degree: self.degree as u8,
        }
    }

    pub fn try_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// Shift-and-add carry-less product followed by reduction.
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        assert!(
            self.contains(a) && self.contains(b),
            "field mismatch: GF(2^{}) * GF(2^{}) in GF(2^{})",
            a.degree,
            b.degree,
            self.degree
        );
        let mut acc: u64 = 0;
        let mut x = a.bits as u64;
        let mut y = b.bits;
        while y != 0 {
            if y & 1 == 1 {
                acc ^= x;
            }
            x <<= 1;
            y >>= 1;
        }
        FieldElement {
            bits: self.reduce(acc),
            degree: self.degree as u8,
        }
    }

    fn reduce(&self, mut v: u64) -> u32 {
        let m = self.degree;
        let mut top = 2 * m;
        while top > m {
            top -= 1;
            if v >> top & 1 == 1 {
                v ^= self.modulus << (top - m);
            }
        }
        v as u32
    }

    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// a^(2^m - 2).
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(a, self.size() - 2))
    }

    /// a^(2^k), by k squarings (k reduced mod m).
    pub fn frobenius_power(&self, a: FieldElement, k: u32) -> FieldElement {
        (0..k % self.degree).fold(a, |acc, _| self.square(acc))
    }

    /// a ↦ a^(q^k) for q = 2^t.
    pub fn q_power(&self, a: FieldElement, k: u32) -> FieldElement {
        self.frobenius_power(a, self.t * k)
    }

    pub fn is_in_subfield(&self, a: FieldElement, sub_degree: u32) -> Result<bool, FieldError> {
        if sub_degree == 0 || !self.degree.is_multiple_of(sub_degree) {
            return Err(FieldError::NotDivisor {
                sub: sub_degree,
                degree: self.degree,
            });
        }
        Ok(self.frobenius_power(a, sub_degree) == a)
    }

    /// Absolute trace to GF(2), as 0 or 1.
    pub fn absolute_trace(&self, a: FieldElement) -> u32 {
        let mut acc = a;
        let mut cur = a;
        for _ in 1..self.degree {
            cur = self.square(cur);
            acc = self.add(acc, cur);
        }
        debug_assert!(acc.bits <= 1);
        acc.bits
    }

    /// Norm to the subfield of degree `sub_degree`.
    pub fn norm(&self, a: FieldElement, sub_degree: u32) -> Result<FieldElement, FieldError> {
        if sub_degree == 0 || !self.degree.is_multiple_of(sub_degree) {
            return Err(FieldError::NotDivisor {
                sub: sub_degree,
                degree: self.degree,
            });
        }
        let mut acc = self.one();
        let mut cur = a;
        for _ in 0..self.degree / sub_degree {
            acc = self.mul(acc, cur);
            cur = self.frobenius_power(cur, sub_degree);
        }
        Ok(acc)
    }

    /// Evaluate a GF(2)-polynomial given as a bit mask at `a`.
    pub fn eval_gf2_poly(&self, poly: u64, a: FieldElement) -> FieldElement {
        if poly == 0 {
            return self.zero();
        }
        (0..=poly_degree(poly)).rev().fold(self.zero(), |acc, i| {
            let acc = self.mul(acc, a);
            if poly >> i & 1 == 1 {
                self.add(acc, self.one())
            } else {
                acc
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Irreducibility via "no roots, no quadratic factor" for degree ≤ 5
    /// and exhaustive trial division otherwise; independent of `is_irreducible`.
    fn naive_irreducible(p: u64) -> bool {
        let m = poly_degree(p);
        // multiply every pair of polynomials with degree sum m
        for d in 1..m {
            for f in (1u64 << d)..(1u64 << (d + 1)) {
                for g in (1u64 << (m - d))..(1u64 << (m - d + 1)) {
                    let mut prod = 0u64;
                    for i in 0..=d {
                        if f >> i & 1 == 1 {
                            prod ^= g << i;
                        }
                    }
                    if prod == p {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn small_moduli() {
        let f4 = make_field(1, Level::Base).unwrap();
        assert_eq!(f4.modulus(), 0b111);
        let f16 = make_field(2, Level::Base).unwrap();
        assert_eq!(f16.modulus(), 0b10011);
        assert!(naive_irreducible(0b10011));
        // no roots in GF(2) and not divisible by z²+z+1
        assert_eq!(poly_rem(0b10011, 0b10), 1);
        assert_eq!(poly_rem(0b10011, 0b11), 1);
        assert_ne!(poly_rem(0b10011, 0b111), 0);
        let f256 = make_field(2, Level::Quartic).unwrap();
        assert_eq!(f256.degree(), 8);
        assert!(naive_irreducible(f256.modulus()));
    }

    #[test]
    fn table_follows_selection_rule() {
        for (m, mask) in modulus_entries() {
            assert_eq!(poly_degree(mask), m);
            assert!(is_irreducible(mask));
            if m <= 12 {
                assert!(naive_irreducible(mask));
            }
            let weight = mask.count_ones();
            let best = ((1u64 << m)..(1u64 << (m + 1)))
                .filter(|&p| p & 1 == 1 && p.count_ones() <= weight && is_irreducible(p))
                .min_by_key(|&p| (p.count_ones(), p))
                .unwrap();
            assert_eq!(best, mask, "degree {m}");
        }
    }

    #[test]
    fn unsupported_t() {
        assert_eq!(make_field(0, Level::Base), Err(FieldError::UnsupportedT(0)));
        assert_eq!(make_field(6, Level::Base), Err(FieldError::UnsupportedT(6)));
    }

    #[test]
    fn gf4_products() {
        let f = make_field(1, Level::Base).unwrap();
        let w = f.generator();
        let w1 = f.add(w, f.one());
        assert_eq!(f.mul(w, w), w1);
        assert_eq!(f.inv(w).unwrap(), w1);
        assert_eq!(f.inv(f.one()).unwrap(), f.one());
        assert_eq!(f.inv(f.zero()), Err(FieldError::ZeroInverse));
    }

    #[test]
    fn mismatched_fields_rejected() {
        let a = make_field(2, Level::Base).unwrap();
        let b = make_field(2, Level::Quartic).unwrap();
        let err = a.try_mul(a.one(), b.one()).unwrap_err();
        assert_eq!(err, FieldError::Mismatch { left: 4, right: 8 });
    }

    #[test]
    fn frobenius_on_f4_inside_f16() {
        let f = make_field(2, Level::Base).unwrap();
        let g = f.generator();
        // γ has order 15
        assert_eq!(f.pow(g, 15), f.one());
        assert_ne!(f.pow(g, 5), f.one());
        let g5 = f.pow(g, 5);
        assert_eq!(f.frobenius_power(g5, 2), g5);
        for a in f.elements() {
            assert_eq!(f.frobenius_power(a, 4), a);
        }
        for b in [f.zero(), f.one()] {
            for k in 0..9 {
                assert_eq!(f.frobenius_power(b, k), b);
            }
        }
    }

    #[test]
    fn subfield_sizes() {
        for (t, level) in [
            (2, Level::Base),
            (2, Level::Quartic),
            (3, Level::Quartic),
            (4, Level::Quartic),
        ] {
            let f = make_field(t, level).unwrap();
            for d in 1..=f.degree() {
                if !f.degree().is_multiple_of(d) {
                    assert!(f.is_in_subfield(f.one(), d).is_err());
                    continue;
                }
                let n = f.elements().filter(|&a| f.is_in_subfield(a, d).unwrap()).count();
                assert_eq!(n as u64, 1 << d);
            }
        }
    }

    #[test]
    fn trace_and_norm() {
        let f = make_field(2, Level::Base).unwrap();
        let ones = f.elements().filter(|&a| f.absolute_trace(a) == 1).count();
        assert_eq!(ones, 8);
        let g5 = f.pow(f.generator(), 5);
        assert_eq!(f.absolute_trace(g5), 0);
        for a in f.elements() {
            let n = f.norm(a, 2).unwrap();
            assert!(f.is_in_subfield(n, 2).unwrap());
            assert_eq!(n, f.pow(a, 5));
        }
    }

    #[test]
    fn hex_roundtrip_is_fixed_width() {
        let f = make_field(3, Level::Base).unwrap();
        assert_eq!(f.element(5).to_hex(), "05");
        assert_eq!(f.parse_hex("3f").unwrap(), f.element(0x3f));
        assert!(f.parse_hex("40").is_err());
        let f20 = make_field(5, Level::Quartic).unwrap();
        assert_eq!(f20.one().to_hex(), "00001");
    }

    #[test]
    fn field_axioms_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in 1..=MAX_T {
            for level in [Level::Base, Level::Quartic] {
                let f = make_field(t, level).unwrap();
                for _ in 0..1000 {
                    let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.add(a, a), f.zero());
                    assert_eq!(f.mul(a, f.one()), a);
                    let qa = f.q_power(a, 1);
                    let qb = f.q_power(b, 1);
                    assert_eq!(f.q_power(f.add(a, b), 1), f.add(qa, qb));
                    assert_eq!(f.q_power(f.mul(a, b), 1), f.mul(qa, qb));
                    if !a.is_zero() {
                        assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                    }
                }
            }
        }
    }
}
