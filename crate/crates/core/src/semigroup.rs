//! Numerical semigroups and the Weierstrass semigroup at the point at
//! infinity of the built-in curves.

use serde::Serialize;
use thiserror::Error;

use crate::census::{count_rational, CensusError};
use crate::curve::{Family, PlaneCurve};
use crate::field::Level;
use crate::orders::{OrderClass, OrderData};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("no generators given")]
    Empty,
    #[error("0 is not a valid generator")]
    ZeroGenerator,
    #[error("generators have gcd {0}; the complement is infinite")]
    NotCoprime(u64),
    #[error("bound {0} is below the conductor; membership has not stabilized")]
    BoundTooSmall(u64),
}

/// The submonoid of (ℕ, +) generated by `generators`, tabulated on 0..=bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalSemigroup {
    generators: Vec<u64>,
    bound: u64,
    members: Vec<bool>,
    conductor: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl NumericalSemigroup {
    pub fn new(generators: &[u64], bound: u64) -> Result<NumericalSemigroup, SemigroupError> {
        if generators.is_empty() {
            return Err(SemigroupError::Empty);
        }
        if generators.contains(&0) {
            return Err(SemigroupError::ZeroGenerator);
        }
        let d = generators.iter().fold(0, |acc, &g| gcd(acc, g));
        if d != 1 {
            return Err(SemigroupError::NotCoprime(d));
        }
        let mut gens = generators.to_vec();
        gens.sort_unstable();
        gens.dedup();

        let mut members = vec![false; bound as usize + 1];
        members[0] = true;
        for s in 1..=bound as usize {
            members[s] = gens.iter().any(|&g| g as usize <= s && members[s - g as usize]);
        }
        // once min(gens) consecutive members appear, adding min(gens) fills
        // everything above; require such a run ending at the bound
        let m = gens[0];
        if bound + 1 < m || (bound + 1 - m..=bound).any(|s| !members[s as usize]) {
            return Err(SemigroupError::BoundTooSmall(bound));
        }
        let conductor = (0..=bound as usize)
            .rev()
            .find(|&s| !members[s])
            .map_or(0, |s| s as u64 + 1);
        Ok(NumericalSemigroup {
            generators: gens,
            bound,
            members,
            conductor,
        })
    }

    /// Default bound 2·max(generator)², past the conductor of any
    /// two-generator semigroup with those generators.
    pub fn generated(generators: &[u64]) -> Result<NumericalSemigroup, SemigroupError> {
        let max = generators.iter().copied().max().unwrap_or(1);
        NumericalSemigroup::new(generators, (2 * max * max).max(2))
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.conductor || self.members[n as usize]
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Largest gap, `None` for ℕ itself.
    pub fn frobenius_number(&self) -> Option<u64> {
        self.conductor.checked_sub(1)
    }

    pub fn gaps(&self) -> Vec<u64> {
        (1..self.conductor).filter(|&n| !self.members[n as usize]).collect()
    }

    /// Smallest positive member.
    pub fn multiplicity(&self) -> u64 {
        self.generators[0]
    }

    /// Members s ≤ d.
    pub fn members_up_to(&self, d: u64) -> Vec<u64> {
        (0..=d).filter(|&n| self.contains(n)).collect()
    }
}

pub fn genus_of(s: &NumericalSemigroup) -> u64 {
    s.gaps().len() as u64
}

/// Projective dimension of |dP| when `s` is the Weierstrass semigroup at P.
pub fn dim_from_semigroup(s: &NumericalSemigroup, d: u64) -> u64 {
    s.members_up_to(d).len() as u64 - 1
}

/// Two-sided check that H(P₀) = ⟨pole(x), pole(y)⟩.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeierstrassReport {
    pub generators: Vec<u64>,
    pub gaps: Vec<u64>,
    /// gaps of the monomial semigroup
    pub semigroup_genus: u64,
    pub rational_points: u64,
    /// (#X(F_{q²}) − q² − 1)/2q, the genus forced by a maximal count
    pub census_genus: Option<u64>,
    /// the declared genus of the model
    pub model_genus: u64,
    pub equal: bool,
}

/// The pole orders of x and y at P₀ generate a subsemigroup of H(P₀) with at
/// least as many gaps as H(P₀) has; equality follows when the gap count
/// matches the genus read off the maximal point count.
pub fn weierstrass_at_infinity(curve: &PlaneCurve) -> Result<WeierstrassReport, CensusError> {
    let inf = curve.infinity();
    let s = NumericalSemigroup::generated(&[inf.x_pole, inf.y_pole]).expect("pole orders of x and y are coprime");
    let q = curve.q();
    let n = count_rational(curve, Level::Base)?;
    let excess = n.checked_sub(q * q + 1).filter(|e| e % (2 * q) == 0);
    let census_genus = excess.map(|e| e / (2 * q));
    let g = genus_of(&s);
    Ok(WeierstrassReport {
        generators: s.generators().to_vec(),
        gaps: s.gaps(),
        semigroup_genus: g,
        rational_points: n,
        census_genus,
        model_genus: curve.genus(),
        equal: census_genus == Some(g) && curve.genus() == g,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationEntry {
    pub point: serde_json::Value,
    pub class: OrderClass,
    pub orders: Vec<u64>,
    /// q + 1 − j₂
    pub m1: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub q: u64,
    pub entries: Vec<ClassificationEntry>,
    /// every m₁ is q − 1 or q/2
    pub all_in_classes: bool,
    /// P₀ is the only sampled point with m₁ = q/2
    pub only_p0_half: bool,
    pub passed: bool,
}

/// Read m₁(P) = q + 1 − j₂ from order data at rational points.
pub fn semigroup_classification_check(curve: &PlaneCurve, data: &[OrderData]) -> ClassificationReport {
    let q = curve.q();
    let entries: Vec<_> = data
        .iter()
        .filter(|d| d.class != OrderClass::NonRational)
        .map(|d| ClassificationEntry {
            point: d.point.to_json(),
            class: d.class,
            orders: d.orders.to_vec(),
            m1: q + 1 - d.orders[2],
        })
        .collect();
    let all_in_classes = entries.iter().all(|e| e.m1 == q - 1 || e.m1 == q / 2);
    let only_p0_half =
        curve.family() != Family::Hermitian && entries.iter().all(|e| (e.m1 == q / 2) == (e.class == OrderClass::AtP0));
    ClassificationReport {
        q,
        entries,
        all_in_classes,
        only_p0_half,
        passed: all_in_classes && only_p0_half,
    }
}

/// m₁(P₀): the smallest positive pole order at P₀.
pub fn m1_at_infinity(curve: &PlaneCurve) -> u64 {
    let inf = curve.infinity();
    NumericalSemigroup::generated(&[inf.x_pole, inf.y_pole])
        .expect("coprime pole orders")
        .multiplicity()
}
