//! Rational points over F_{q²} and F_{q⁴}, Hasse–Weil maximality and the
//! genus bounds for maximal curves.

use std::collections::BTreeSet;

use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::curve::{CurveError, PlaneCurve};
use crate::field::{AdditiveSolver, FieldElement, FieldTower, Level};

/// Largest field degree for which a full census is attempted.
pub const MAX_CENSUS_DEGREE: u32 = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error(
        "full census over GF(2^{0}) exceeds the enumeration ceiling (degree <= {MAX_CENSUS_DEGREE}); sample instead"
    )]
    SizeLimit(u32),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("could not find {wanted} points of the requested class after {attempts} attempts")]
    SamplingExhausted { wanted: usize, attempts: usize },
}

/// A point of the smooth model: affine, tagged with the tower level its
/// coordinates live in, or one of the declared points over x = ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Affine {
        x: FieldElement,
        y: FieldElement,
        level: Level,
    },
    Infinity {
        index: u32,
    },
}

impl CurvePoint {
    pub fn affine(x: FieldElement, y: FieldElement, level: Level) -> CurvePoint {
        CurvePoint::Affine { x, y, level }
    }

    pub fn coords(&self) -> Option<(FieldElement, FieldElement)> {
        match *self {
            CurvePoint::Affine { x, y, .. } => Some((x, y)),
            CurvePoint::Infinity { .. } => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match *self {
            CurvePoint::Affine { x, y, level } => serde_json::json!({
                "x": x.to_hex(),
                "y": y.to_hex(),
                "level": level.index(),
            }),
            CurvePoint::Infinity { index } => serde_json::json!({ "infinity": index }),
        }
    }

    /// Whether the point is on `curve`. Infinite points are accepted when
    /// their index is covered by the declared descriptor.
    pub fn lies_on(&self, curve: &PlaneCurve) -> bool {
        match *self {
            CurvePoint::Affine { x, y, level } => curve.contains(x, y, level),
            CurvePoint::Infinity { index } => index < curve.infinity().points,
        }
    }
}

/// Rational vs non-rational relative to F_{q²}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointClass {
    Rational,
    NonRational,
}

/// (x, y) ↦ (x^{q²}, y^{q²}).
pub fn frobenius_point(tower: &FieldTower, p: CurvePoint) -> CurvePoint {
    match p {
        CurvePoint::Affine { x, y, level } => CurvePoint::Affine {
            x: tower.frobenius_q2(x),
            y: tower.frobenius_q2(y),
            level,
        },
        inf => inf,
    }
}

pub fn is_rational(tower: &FieldTower, p: CurvePoint) -> bool {
    frobenius_point(tower, p) == p
}

pub fn classify_point(tower: &FieldTower, p: CurvePoint) -> PointClass {
    if is_rational(tower, p) {
        PointClass::Rational
    } else {
        PointClass::NonRational
    }
}

/// Solves F(x, y) = 0 for y at fixed x. Uses the GF(2)-linear structure of
/// the y-part when available, and scans all y otherwise.
struct FiberSolver<'a> {
    curve: &'a PlaneCurve,
    level: Level,
    additive: Option<AdditiveSolver>,
}

impl<'a> FiberSolver<'a> {
    fn new(curve: &'a PlaneCurve, level: Level) -> FiberSolver<'a> {
        let tw = curve.tower();
        let additive = curve.additive_y_terms().map(|terms| {
            let lifted: Vec<_> = terms.iter().map(|&(k, c)| (k, tw.lift(c, level))).collect();
            AdditiveSolver::new(*tw.field(level), &lifted)
        });
        FiberSolver { curve, level, additive }
    }

    fn ys(&self, x: FieldElement) -> Vec<FieldElement> {
        let tw = self.curve.tower();
        match &self.additive {
            Some(solver) => solver.solve(self.curve.polynomial().evaluate_x_part(tw, x, self.level)),
            None => tw
                .field(self.level)
                .elements()
                .filter(|&y| self.curve.contains(x, y, self.level))
                .collect(),
        }
    }
}

fn check_size(curve: &PlaneCurve, level: Level) -> Result<(), CensusError> {
    let m = level.degree(curve.t());
    if m > MAX_CENSUS_DEGREE {
        Err(CensusError::SizeLimit(m))
    } else {
        Ok(())
    }
}

fn infinite_points(curve: &PlaneCurve) -> impl Iterator<Item = CurvePoint> {
    (0..curve.infinity().points).map(|index| CurvePoint::Infinity { index })
}

/// Affine points with x-mask in `xs`, in (x, y) order.
pub fn enumerate_slice(
    curve: &PlaneCurve,
    level: Level,
    xs: std::ops::Range<u32>,
) -> Result<Vec<CurvePoint>, CensusError> {
    check_size(curve, level)?;
    let field = *curve.tower().field(level);
    let solver = FiberSolver::new(curve, level);
    Ok(xs
        .flat_map(|xb| {
            let x = field.element(xb);
            solver
                .ys(x)
                .into_iter()
                .map(move |y| CurvePoint::Affine { x, y, level })
        })
        .collect())
}

/// Every point over the level's field, affine points first in (x, y) order,
/// then the declared points at infinity.
pub fn enumerate_points(curve: &PlaneCurve, level: Level) -> Result<Vec<CurvePoint>, CensusError> {
    check_size(curve, level)?;
    let field = *curve.tower().field(level);
    let size = field.size() as u32;
    let chunk = (size / 64).max(1);
    let slices: Vec<_> = (0..size)
        .step_by(chunk as usize)
        .map(|s| s..(s + chunk).min(size))
        .collect();
    let parts: Vec<Vec<CurvePoint>> = slices
        .into_par_iter()
        .map(|r| enumerate_slice(curve, level, r))
        .collect::<Result<_, _>>()?;
    let mut pts: Vec<CurvePoint> = parts.into_iter().flatten().collect();
    pts.extend(infinite_points(curve));
    Ok(pts)
}

/// Brute-force census over all coordinate pairs; an independent check of
/// `enumerate_points` for small fields.
pub fn enumerate_points_exhaustive(curve: &PlaneCurve, level: Level) -> Result<Vec<CurvePoint>, CensusError> {
    let m = level.degree(curve.t());
    if m > 12 {
        return Err(CensusError::SizeLimit(m));
    }
    let field = *curve.tower().field(level);
    let mut pts: Vec<CurvePoint> = field
        .elements()
        .flat_map(|x| field.elements().map(move |y| (x, y)))
        .filter(|&(x, y)| curve.contains(x, y, level))
        .map(|(x, y)| CurvePoint::Affine { x, y, level })
        .collect();
    pts.extend(infinite_points(curve));
    Ok(pts)
}

pub fn count_rational(curve: &PlaneCurve, level: Level) -> Result<u64, CensusError> {
    check_size(curve, level)?;
    let field = *curve.tower().field(level);
    let solver = FiberSolver::new(curve, level);
    let affine: u64 = (0..field.size() as u32)
        .into_par_iter()
        .map(|xb| solver.ys(field.element(xb)).len() as u64)
        .sum();
    Ok(affine + curve.infinity().points as u64)
}

/// q² + 1 + 2qg.
pub fn hasse_weil_max(q: u64, g: u64) -> u64 {
    q * q + 1 + 2 * q * g
}

pub fn is_maximal(curve: &PlaneCurve, g: u64) -> Result<bool, CensusError> {
    Ok(count_rational(curve, Level::Base)? == hasse_weil_max(curve.q(), g))
}

/// Right-hand side of the bound on 2g for a maximal curve whose canonical
/// system |(q+1)P₀| has projective dimension n + 1.
pub fn genus_bounds(q: u64, n: u64) -> Ratio<i64> {
    assert!(n >= 1, "n must be positive");
    let (q, n) = (q as i64, n as i64);
    let num = (2 * q - n) * (2 * q - n);
    if n % 2 == 0 {
        Ratio::new(num, 4 * n)
    } else {
        Ratio::new(num - 1, 4 * n)
    }
}

/// q(q−1)/2, the Hermitian genus.
pub fn g1(q: u64) -> u64 {
    q * (q - 1) / 2
}

/// ⌊(q−1)²/4⌋; equals q(q−2)/4 when q is even.
pub fn g2(q: u64) -> u64 {
    let g = (q - 1) * (q - 1) / 4;
    if q.is_multiple_of(2) {
        assert_eq!(g, q * (q - 2) / 4);
    }
    g
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub q: u64,
    pub family: &'static str,
    pub level: u8,
    pub count: u64,
    pub genus: u64,
    pub expected: u64,
    pub maximal: bool,
}

/// Count at `level` and compare with the Hasse–Weil maximum for `g`. At
/// level 2 the comparison is with the bound over F_{q⁴}.
pub fn census(curve: &PlaneCurve, level: Level, g: u64) -> Result<CensusReport, CensusError> {
    let count = count_rational(curve, level)?;
    let q = curve.q();
    let expected = match level {
        Level::Base => hasse_weil_max(q, g),
        // F_{q⁴}-points of an F_{q²}-maximal curve: q⁴ + 1 − 2q²g
        Level::Quartic => q.pow(4) + 1 - 2 * q * q * g,
    };
    Ok(CensusReport {
        q,
        family: curve.family().label(),
        level: level.index(),
        count,
        genus: g,
        expected,
        maximal: count == expected,
    })
}

/// Distinct random affine points of the given class at `level`, drawn by
/// choosing x at random and solving for y.
pub fn sample_affine_points<R: Rng + ?Sized>(
    curve: &PlaneCurve,
    level: Level,
    class: PointClass,
    count: usize,
    rng: &mut R,
) -> Result<Vec<CurvePoint>, CensusError> {
    let tw = curve.tower();
    let field = *tw.field(level);
    let solver = FiberSolver::new(curve, level);
    let mut out = BTreeSet::new();
    let attempts = 200 * count.max(1) + 1000;
    for _ in 0..attempts {
        if out.len() == count {
            break;
        }
        let x = field.random(rng);
        let ys = solver.ys(x);
        if ys.is_empty() {
            continue;
        }
        let y = ys[rng.gen_range(0..ys.len())];
        let p = CurvePoint::Affine { x, y, level };
        if classify_point(tw, p) == class {
            out.insert(p);
        }
    }
    if out.len() < count {
        return Err(CensusError::SamplingExhausted {
            wanted: count,
            attempts,
        });
    }
    Ok(out.into_iter().collect())
}
