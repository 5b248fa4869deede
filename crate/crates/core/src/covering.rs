//! The double cover π: H → X, (v, u) ↦ (v, u² + u), from the Hermitian curve
//! onto the trace curve, with deck involution (v, u) ↦ (v, u + 1).

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::census::{count_rational, enumerate_points, sample_affine_points, CensusError, CurvePoint, PointClass};
use crate::curve::{hermitian, trace_curve, CurveError, PlaneCurve};
use crate::field::{solve_artin_schreier, Level};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error("point is not on the Hermitian curve")]
    NotOnSource,
    #[error("point is not an affine point of the trace curve")]
    NotOnTarget,
    #[error("image {0} fails the trace equation")]
    ImageOffCurve(String),
}

/// GF(2)[u] polynomials of degree < 128 as bit masks.
fn clmul(a: u128, b: u128) -> u128 {
    (0..128).filter(|i| b >> i & 1 == 1).fold(0, |acc, i| acc ^ (a << i))
}

/// Expand ∑_{i=1..t} (u² + u)^{q/2^i} by repeated multiplication in GF(2)[u]
/// and compare with u^q + u. Needs 2q < 128.
pub fn additive_identity_symbolic(t: u32) -> bool {
    let q = 1u32 << t;
    assert!(2 * q < 128, "symbolic check limited to q <= 32");
    let base = 0b110u128;
    let lhs = (1..=t).fold(0u128, |acc, i| {
        let e = q >> i;
        acc ^ (0..e).fold(1u128, |p, _| clmul(p, base))
    });
    lhs == (1u128 << q) | 0b10
}

pub struct Cover {
    pub source: PlaneCurve,
    pub target: PlaneCurve,
}

impl Cover {
    pub fn new(t: u32) -> Result<Cover, CoverError> {
        Ok(Cover {
            source: hermitian(t)?,
            target: trace_curve(t)?,
        })
    }

    pub fn t(&self) -> u32 {
        self.source.t()
    }

    pub fn apply(&self, p: CurvePoint) -> Result<CurvePoint, CoverError> {
        if !p.lies_on(&self.source) {
            return Err(CoverError::NotOnSource);
        }
        let image = match p {
            CurvePoint::Affine { x, y, level } => {
                let f = self.source.field(level);
                CurvePoint::affine(x, f.add(f.square(y), y), level)
            }
            inf => inf,
        };
        if !image.lies_on(&self.target) {
            return Err(CoverError::ImageOffCurve(image.to_json().to_string()));
        }
        Ok(image)
    }

    /// (v, u) ↦ (v, u + 1); fixes the point at infinity.
    pub fn involution(&self, p: CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Affine { x, y, level } => {
                let f = self.source.field(level);
                CurvePoint::affine(x, f.add(y, f.one()), level)
            }
            inf => inf,
        }
    }

    /// Preimages of an affine target point with coordinates at `level`.
    pub fn fiber(&self, p: CurvePoint, level: Level) -> Result<Vec<CurvePoint>, CoverError> {
        let CurvePoint::Affine { x, y, level: pl } = p else {
            return Err(CoverError::NotOnTarget);
        };
        if !p.lies_on(&self.target) {
            return Err(CoverError::NotOnTarget);
        }
        let tw = self.target.tower();
        if pl == Level::Quartic && level == Level::Base {
            match (tw.restrict(x), tw.restrict(y)) {
                (Some(x), Some(y)) => return self.fiber(CurvePoint::affine(x, y, Level::Base), level),
                _ => return Ok(Vec::new()),
            }
        }
        let (x, y) = (tw.lift(x, level), tw.lift(y, level));
        Ok(solve_artin_schreier(tw.field(level), y)
            .into_iter()
            .map(|u| CurvePoint::affine(x, u, level))
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverCounts {
    pub hermitian: u64,
    pub trace: u64,
    /// 2#X = #H + 1
    pub relation_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RiemannHurwitz {
    pub g_hermitian: u64,
    pub g_trace: u64,
    /// (2g_H − 2) − 2(2g_X − 2)
    pub different_degree: i64,
    pub expected: i64,
    pub holds: bool,
}

pub fn riemann_hurwitz(t: u32) -> RiemannHurwitz {
    let q = 1i64 << t;
    let gh = q * (q - 1) / 2;
    let gx = q * (q - 2) / 4;
    let d = (2 * gh - 2) - 2 * (2 * gx - 2);
    RiemannHurwitz {
        g_hermitian: gh as u64,
        g_trace: gx as u64,
        different_degree: d,
        expected: q + 2,
        holds: d == q + 2,
    }
}

pub fn cover_counts(t: u32) -> Result<CoverCounts, CoverError> {
    let h = count_rational(&hermitian(t)?, Level::Base)?;
    let x = count_rational(&trace_curve(t)?, Level::Base)?;
    Ok(CoverCounts {
        hermitian: h,
        trace: x,
        relation_holds: 2 * x == h + 1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityChecks {
    /// S(u² + u) = u^q + u in GF(2)[u]
    pub symbolic: bool,
    pub source_points: usize,
    pub image_membership: bool,
    /// π∘τ = π and τ(P) ∈ H
    pub involution_commutes: bool,
    pub no_affine_fixed_points: bool,
    /// every rational point of X is hit by a point of H(F_{q⁴}); exhaustive
    /// runs at level 2 only
    pub surjective_on_rational: Option<bool>,
}

impl IdentityChecks {
    pub fn all(&self) -> bool {
        self.symbolic
            && self.image_membership
            && self.involution_commutes
            && self.no_affine_fixed_points
            && self.surjective_on_rational != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub t: u32,
    pub level: u8,
    pub mode: String,
    pub counts: CoverCounts,
    pub identity_checks: IdentityChecks,
    /// fiber size over `level` → number of affine rational targets
    pub fiber_histogram: BTreeMap<usize, usize>,
    /// affine rational targets with no rational preimage
    pub inert_rational_targets: usize,
    pub riemann_hurwitz: RiemannHurwitz,
    pub passed: bool,
}

pub enum Replay {
    Exhaustive,
    Sampled(usize),
}

fn check_points(cover: &Cover, points: &[CurvePoint]) -> (bool, bool, bool) {
    points
        .par_iter()
        .map(|&p| {
            let img = cover.apply(p);
            let tp = cover.involution(p);
            let membership = img.is_ok();
            let commutes = tp.lies_on(&cover.source) && cover.apply(tp).ok() == img.ok();
            let free = matches!(p, CurvePoint::Infinity { .. }) || tp != p;
            (membership, commutes, free)
        })
        .reduce(|| (true, true, true), |a, b| (a.0 && b.0, a.1 && b.1, a.2 && b.2))
}

/// Counts, identity replays over source points at `level`, the fiber
/// histogram over the rational affine points of X, and Riemann–Hurwitz.
pub fn covering_census_check<R: Rng + ?Sized>(
    t: u32,
    level: Level,
    replay: Replay,
    rng: &mut R,
) -> Result<CoverReport, CoverError> {
    let cover = Cover::new(t)?;
    let counts = cover_counts(t)?;
    let (mode, points) = match replay {
        Replay::Exhaustive => ("exhaustive".to_string(), enumerate_points(&cover.source, level)?),
        Replay::Sampled(n) => {
            let mut pts = sample_affine_points(&cover.source, level, PointClass::Rational, n, rng)?;
            if level == Level::Quartic {
                // the Hermitian curve is maximal, so F_{q⁴} adds no new points
                pts.extend(
                    sample_affine_points(&cover.source, level, PointClass::NonRational, n, rng).unwrap_or_default(),
                );
            }
            (format!("sampled({n})"), pts)
        }
    };
    let (image_membership, involution_commutes, no_affine_fixed_points) = check_points(&cover, &points);

    let targets: Vec<_> = enumerate_points(&cover.target, Level::Base)?
        .into_iter()
        .filter(|p| matches!(p, CurvePoint::Affine { .. }))
        .collect();
    let mut fiber_histogram = BTreeMap::new();
    let mut inert = 0;
    for &p in &targets {
        *fiber_histogram.entry(cover.fiber(p, level)?.len()).or_insert(0) += 1;
        if cover.fiber(p, Level::Base)?.is_empty() {
            inert += 1;
        }
    }

    let surjective_on_rational = (level == Level::Quartic && matches!(replay, Replay::Exhaustive)).then(|| {
        let hit: std::collections::BTreeSet<_> = points.iter().filter_map(|&p| cover.apply(p).ok()).collect();
        let tw = cover.target.tower();
        targets.iter().all(|p| {
            let CurvePoint::Affine { x, y, .. } = *p else {
                unreachable!()
            };
            hit.contains(&CurvePoint::affine(tw.embed(x), tw.embed(y), Level::Quartic))
        })
    });

    let identity_checks = IdentityChecks {
        symbolic: additive_identity_symbolic(t),
        source_points: points.len(),
        image_membership,
        involution_commutes,
        no_affine_fixed_points,
        surjective_on_rational,
    };
    let rh = riemann_hurwitz(t);
    let passed = counts.relation_holds && identity_checks.all() && rh.holds && fiber_histogram.keys().all(|&k| k == 2);
    Ok(CoverReport {
        t,
        level: level.index(),
        mode,
        counts,
        identity_checks,
        fiber_histogram,
        inert_rational_targets: inert,
        riemann_hurwitz: rh,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn symbolic_identity() {
        for t in 1..=5 {
            assert!(additive_identity_symbolic(t), "t = {t}");
        }
        // (u² + u)² + (u² + u) = u⁴ + u
        assert_eq!(clmul(0b110, 0b110) ^ 0b110, 0b10010);
    }

    #[test]
    fn origin_and_its_fiber() {
        let c = Cover::new(2).unwrap();
        let f = c.source.field(Level::Base);
        let o = CurvePoint::affine(f.zero(), f.zero(), Level::Base);
        assert_eq!(c.apply(o).unwrap(), o);
        let fib = c.fiber(o, Level::Base).unwrap();
        assert_eq!(fib, vec![o, CurvePoint::affine(f.zero(), f.one(), Level::Base)]);
        let off = CurvePoint::affine(f.one(), f.zero(), Level::Base);
        assert_eq!(c.apply(off), Err(CoverError::NotOnSource));
    }

    #[test]
    fn fibers_are_involution_orbits() {
        let c = Cover::new(3).unwrap();
        for p in enumerate_points(&c.source, Level::Base).unwrap() {
            let CurvePoint::Affine { .. } = p else { continue };
            let fib = c.fiber(c.apply(p).unwrap(), Level::Base).unwrap();
            let mut orbit = vec![p, c.involution(p)];
            orbit.sort();
            assert_eq!(fib, orbit);
        }
    }

    #[test]
    fn census_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for t in [2, 3] {
            let r = covering_census_check(t, Level::Base, Replay::Exhaustive, &mut rng).unwrap();
            assert!(r.passed, "{r:?}");
            let q = 1u64 << t;
            assert_eq!((r.counts.hermitian, r.counts.trace), (q * q * q + 1, q * q * q / 2 + 1));
            assert_eq!(r.inert_rational_targets, 0);
            assert_eq!(r.fiber_histogram, BTreeMap::from([(2, (q * q * q / 2) as usize)]));
        }
        let r = covering_census_check(2, Level::Quartic, Replay::Exhaustive, &mut rng).unwrap();
        assert_eq!(r.identity_checks.surjective_on_rational, Some(true));
        assert!(r.passed);
    }

    #[test]
    fn sampled_replay_at_q16() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = covering_census_check(4, Level::Base, Replay::Sampled(200), &mut rng).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.identity_checks.source_points, 200);
    }

    #[test]
    fn riemann_hurwitz_arithmetic() {
        let r = riemann_hurwitz(2);
        assert_eq!((r.g_hermitian, r.g_trace, r.different_degree), (6, 2, 6));
        for t in 2..=5 {
            assert!(riemann_hurwitz(t).holds);
        }
    }
}
