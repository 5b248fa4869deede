//! Order sequences of the linear system spanned by 1, x, x², y, the
//! Frobenius identity behind its Frobenius orders, and the Stöhr–Voloch
//! ramification degree.

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::census::{classify_point, sample_affine_points, CensusError, CurvePoint, PointClass};
use crate::curve::{Family, PlaneCurve};
use crate::field::{FieldTower, Level};
use crate::local::{expand_y_at, LocalError};
use crate::semigroup::m1_at_infinity;
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdersError {
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error("precision {got} is insufficient (need at least {needed})")]
    InsufficientPrecision { got: usize, needed: usize },
    #[error("only {found} of 4 pivots found below τ^{precision}; retry with a larger precision")]
    PivotsNotFound { precision: usize, found: usize },
    #[error("{0}")]
    Precondition(String),
    #[error("order invariant violated: {0}")]
    Invariant(String),
    #[error("evidence check failed: {0}")]
    Evidence(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BasisFunction {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "x")]
    X,
    #[serde(rename = "x^2")]
    X2,
    #[serde(rename = "y")]
    Y,
}

/// Coordinates (1 : x : x² : y) of the morphism attached to |(q+1)P₀|.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearSystemBasis {
    pub functions: Vec<BasisFunction>,
}

impl LinearSystemBasis {
    pub fn standard() -> LinearSystemBasis {
        LinearSystemBasis {
            functions: vec![
                BasisFunction::One,
                BasisFunction::X,
                BasisFunction::X2,
                BasisFunction::Y,
            ],
        }
    }

    /// The same functions in another order; `perm` must be a permutation of 0..4.
    pub fn permuted(perm: [usize; 4]) -> LinearSystemBasis {
        let std = LinearSystemBasis::standard().functions;
        let mut seen = [false; 4];
        for &i in &perm {
            assert!(!std::mem::replace(&mut seen[i], true), "not a permutation: {perm:?}");
        }
        LinearSystemBasis {
            functions: perm.iter().map(|&i| std[i]).collect(),
        }
    }

    pub fn dimension(&self) -> u64 {
        self.functions.len() as u64 - 1
    }

    /// Degree of the system, q + 1.
    pub fn degree(curve: &PlaneCurve) -> u64 {
        curve.q() + 1
    }

    /// Pole orders at P₀ of each function.
    pub fn pole_orders(&self, curve: &PlaneCurve) -> Vec<u64> {
        let inf = curve.infinity();
        self.functions
            .iter()
            .map(|f| match f {
                BasisFunction::One => 0,
                BasisFunction::X => inf.x_pole,
                BasisFunction::X2 => 2 * inf.x_pole,
                BasisFunction::Y => inf.y_pole,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OrderClass {
    #[serde(rename = "at-P0")]
    AtP0,
    #[serde(rename = "rational")]
    Rational,
    #[serde(rename = "non-rational")]
    NonRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderData {
    pub point: CurvePoint,
    pub orders: [u64; 4],
    pub class: OrderClass,
}

impl OrderData {
    fn new(point: CurvePoint, mut orders: Vec<u64>, class: OrderClass) -> Result<OrderData, OrdersError> {
        orders.sort_unstable();
        orders.dedup();
        let orders: [u64; 4] = orders
            .try_into()
            .map_err(|o: Vec<u64>| OrdersError::Invariant(format!("orders {o:?} are not 4 distinct values")))?;
        if orders[0] != 0 || orders[1] != 1 {
            return Err(OrdersError::Invariant(format!("orders {orders:?} do not start 0, 1")));
        }
        Ok(OrderData { point, orders, class })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "point": self.point.to_json(),
            "orders": self.orders,
            "class": self.class,
        })
    }
}

fn basis_series(
    f: BasisFunction,
    tw: &FieldTower,
    level: Level,
    x0: crate::field::FieldElement,
    y: &TruncatedSeries,
) -> TruncatedSeries {
    let field = *tw.field(level);
    let n = y.precision();
    let x = TruncatedSeries::shifted_parameter(field, x0, n);
    match f {
        BasisFunction::One => TruncatedSeries::constant(field, field.one(), n),
        BasisFunction::X => x,
        BasisFunction::X2 => x.square().truncate(n),
        BasisFunction::Y => y.clone(),
    }
}

/// Pivot columns of the row echelon form of `rows`, one per row, or the
/// number found when some row reduces to zero.
fn echelon_pivots(rows: Vec<TruncatedSeries>) -> Result<Vec<u64>, usize> {
    let mut reduced: Vec<(usize, TruncatedSeries)> = Vec::new();
    for mut row in rows {
        loop {
            let Some(v) = row.valuation() else {
                return Err(reduced.len());
            };
            match reduced.iter().find(|(p, _)| *p == v) {
                None => {
                    reduced.push((v, row));
                    break;
                }
                Some((_, piv)) => {
                    let f = *row.field();
                    let c = f.mul(row.coeff(v).unwrap(), f.inv(piv.coeff(v).unwrap()).unwrap());
                    row = row.add(&piv.scale(c));
                }
            }
        }
    }
    Ok(reduced.into_iter().map(|(p, _)| p as u64).collect())
}

fn point_class(curve: &PlaneCurve, p: CurvePoint) -> OrderClass {
    match classify_point(curve.tower(), p) {
        PointClass::Rational => OrderClass::Rational,
        PointClass::NonRational => OrderClass::NonRational,
    }
}

pub fn dp_orders(curve: &PlaneCurve, p: CurvePoint, n: usize) -> Result<OrderData, OrdersError> {
    dp_orders_with_basis(curve, p, n, &LinearSystemBasis::standard())
}

/// (D, P)-orders at an affine point: the attained valuations v_P(f) for f in
/// the span of the basis, read off as echelon pivots of the expansions.
pub fn dp_orders_with_basis(
    curve: &PlaneCurve,
    p: CurvePoint,
    n: usize,
    basis: &LinearSystemBasis,
) -> Result<OrderData, OrdersError> {
    let q = curve.q() as usize;
    if n < q + 3 {
        return Err(OrdersError::InsufficientPrecision { got: n, needed: q + 3 });
    }
    let CurvePoint::Affine { x, level, .. } = p else {
        return Err(OrdersError::Precondition("dp_orders needs an affine point".into()));
    };
    let y = expand_y_at(curve, p, n)?;
    let tw = curve.tower();
    let rows = basis
        .functions
        .iter()
        .map(|&f| basis_series(f, tw, level, x, &y))
        .collect();
    let pivots = echelon_pivots(rows).map_err(|found| OrdersError::PivotsNotFound { precision: n, found })?;
    OrderData::new(p, pivots, point_class(curve, p))
}

/// Orders at P₀, from the pole orders of the basis functions and, as a
/// cross-check, from m₁(P₀) as {0, 1, q + 1 − m₁, q + 1}.
pub fn dp_orders_at_infinity(curve: &PlaneCurve) -> Result<OrderData, OrdersError> {
    if !curve.family().is_trace() {
        return Err(OrdersError::Precondition(format!(
            "orders at P0 are defined here for the trace family only; the {} system has dimension 2",
            curve.family().label()
        )));
    }
    let d = LinearSystemBasis::degree(curve);
    let from_poles: Vec<u64> = LinearSystemBasis::standard()
        .pole_orders(curve)
        .into_iter()
        .map(|m| d - m)
        .collect();
    let m1 = m1_at_infinity(curve);
    let from_semigroup = OrderData::new(
        CurvePoint::Infinity { index: 0 },
        vec![0, 1, d - m1, d],
        OrderClass::AtP0,
    )?;
    let direct = OrderData::new(CurvePoint::Infinity { index: 0 }, from_poles, OrderClass::AtP0)?;
    if direct != from_semigroup {
        return Err(OrdersError::Invariant(format!(
            "pole orders give {:?} but m1 gives {:?}",
            direct.orders, from_semigroup.orders
        )));
    }
    Ok(direct)
}

/// Precision for the Frobenius identity: the default 2q + 8, capped below q².
pub fn frobenius_precision(q: u64) -> usize {
    (2 * q as usize + 8).min((q * q) as usize - 1)
}

/// y + y^{q²} + (x + x^{q²})·Dy + (x² + x^{2q²})·D²y as a series at P, with
/// y^{q²} and x^{q²} replaced by their constant terms (valid below τ^{q²}).
/// Takes Dy and D²y explicitly so callers can perturb them.
pub fn frobenius_residual(
    tw: &FieldTower,
    level: Level,
    x0: crate::field::FieldElement,
    y: &TruncatedSeries,
    dy: &TruncatedSeries,
    d2y: &TruncatedSeries,
) -> TruncatedSeries {
    let f = *tw.field(level);
    let n = y.precision();
    let y0 = y.coeff(0).unwrap();
    let x = TruncatedSeries::shifted_parameter(f, x0, n);
    let xq2 = tw.frobenius_q2(x0);
    let c = |v| TruncatedSeries::constant(f, v, n);
    y.add(&c(tw.frobenius_q2(y0)))
        .add(&x.add(&c(xq2)).mul(dy))
        .add(&x.square().truncate(n).add(&c(f.square(xq2))).mul(d2y))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrobeniusCheck {
    pub point: serde_json::Value,
    pub precision: usize,
    /// the residual is known modulo τ^modulus
    pub modulus: usize,
    pub residual: String,
    pub vanishes: bool,
}

pub fn frobenius_identity_check(curve: &PlaneCurve, p: CurvePoint, n: usize) -> Result<FrobeniusCheck, OrdersError> {
    if !matches!(curve.family(), Family::TraceStandard | Family::Hermitian) {
        return Err(OrdersError::Precondition(format!(
            "the identity is stated for the standard models, not {}",
            curve.family().label()
        )));
    }
    let q = curve.q() as usize;
    if n >= q * q {
        return Err(OrdersError::Precondition(format!(
            "precision {n} must stay below q² = {}",
            q * q
        )));
    }
    if n < q + 3 {
        return Err(OrdersError::InsufficientPrecision { got: n, needed: q + 3 });
    }
    let CurvePoint::Affine { x, level, .. } = p else {
        return Err(OrdersError::Precondition(
            "the identity is checked at affine points".into(),
        ));
    };
    let y = expand_y_at(curve, p, n)?;
    let r = frobenius_residual(
        curve.tower(),
        level,
        x,
        &y,
        &y.hasse_derivative(1),
        &y.hasse_derivative(2),
    )
    .truncate(n - 2);
    Ok(FrobeniusCheck {
        point: p.to_json(),
        precision: n,
        modulus: r.precision(),
        vanishes: r.is_zero() && r.precision() == n - 2,
        residual: r.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub point: serde_json::Value,
    pub check: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrobeniusOrders {
    pub q: u64,
    /// D-orders at a general point
    pub epsilon: Vec<u64>,
    pub nu: Vec<u64>,
    pub evidence: Vec<Evidence>,
}

/// Frobenius orders of the system on the standard trace curve. At sampled
/// rational and non-rational points, checks that D^i y vanishes for
/// 3 ≤ i ≤ q − 1, that the Frobenius identity holds (so ε₂ = 2 is not a
/// Frobenius order), and that the general orders are 0, 1, 2, q.
pub fn frobenius_orders<R: Rng + ?Sized>(
    curve: &PlaneCurve,
    sample_size: usize,
    rng: &mut R,
) -> Result<FrobeniusOrders, OrdersError> {
    if curve.family() != Family::TraceStandard {
        return Err(OrdersError::Precondition(
            "frobenius_orders needs the standard trace curve".into(),
        ));
    }
    if sample_size == 0 {
        return Err(OrdersError::Precondition("sample size must be positive".into()));
    }
    let q = curve.q();
    let n = frobenius_precision(q);
    // the trace curve has q³/2 affine rational points
    let rational = sample_size.min((q * q * q / 2) as usize);
    let mut points = sample_affine_points(curve, Level::Base, PointClass::Rational, rational, rng)?;
    points.extend(sample_affine_points(
        curve,
        Level::Quartic,
        PointClass::NonRational,
        sample_size,
        rng,
    )?);
    let general = vec![0, 1, 2, q];
    let mut evidence = Vec::new();
    for p in points {
        let y = expand_y_at(curve, p, n)?;
        let vanish = (3..q as usize).all(|i| y.hasse_derivative(i).is_zero());
        evidence.push(Evidence {
            point: p.to_json(),
            check: format!("D^i y = 0 for 3 <= i <= {}", q - 1),
            passed: vanish,
        });
        let fc = frobenius_identity_check(curve, p, n)?;
        evidence.push(Evidence {
            point: p.to_json(),
            check: format!("frobenius identity mod τ^{}", fc.modulus),
            passed: fc.vanishes,
        });
        let od = dp_orders(curve, p, n)?;
        if od.class == OrderClass::NonRational {
            evidence.push(Evidence {
                point: p.to_json(),
                check: "orders at a non-rational point are 0, 1, 2, q".into(),
                passed: od.orders.to_vec() == general,
            });
        }
    }
    if let Some(bad) = evidence.iter().find(|e| !e.passed) {
        return Err(OrdersError::Evidence(format!("{} at {}", bad.check, bad.point)));
    }
    Ok(FrobeniusOrders {
        q,
        epsilon: general,
        nu: vec![0, 1, q],
        evidence,
    })
}

/// (∑ ε_i)(2g − 2) + (n + 1)d, the degree of the ramification divisor of an
/// n-dimensional system of degree d with orders ε.
pub fn sv_ramification_degree(eps: &[u64], g: u64, n: u64, d: u64) -> Result<i64, OrdersError> {
    if eps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(OrdersError::Precondition("orders must be strictly increasing".into()));
    }
    if eps.len() as u64 != n + 1 {
        return Err(OrdersError::Precondition(format!(
            "expected {} orders, got {}",
            n + 1,
            eps.len()
        )));
    }
    let s: i64 = eps.iter().map(|&e| e as i64).sum();
    Ok(s * (2 * g as i64 - 2) + (n as i64 + 1) * d as i64)
}

/// The q = 4 count: 36(2g − 2) + c = deg R = 2#X(F_16) = 2(4(2g − 2) + 25),
/// reduced to 28(2g − 2) = 50 − c.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamificationInstance {
    pub constant: i64,
    /// right side of 28(2g − 2) = 50 − c
    pub reduced_rhs: i64,
    /// non-negative even values of 2g − 2 solving the equation
    pub solutions: Vec<i64>,
}

pub fn ramification_instance(constant: i64) -> RamificationInstance {
    let rhs = 50 - constant;
    let solutions = (0..=200)
        .step_by(2)
        .filter(|&k: &i64| 36 * k + constant == 2 * (4 * k + 25))
        .collect();
    RamificationInstance {
        constant,
        reduced_rhs: rhs,
        solutions,
    }
}

/// The constant as printed (40) and the value of (n + 1)d for n = 8, d = 10.
pub fn ramification_instances() -> [RamificationInstance; 2] {
    [ramification_instance(40), ramification_instance(9 * 10)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::enumerate_points;
    use crate::curve::{hermitian, trace_curve};
    use crate::field::tower;
    use crate::local::default_precision;
    use crate::semigroup::{dim_from_semigroup, semigroup_classification_check, NumericalSemigroup};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn rational_affine(curve: &PlaneCurve) -> Vec<CurvePoint> {
        enumerate_points(curve, Level::Base)
            .unwrap()
            .into_iter()
            .filter(|p| matches!(p, CurvePoint::Affine { .. }))
            .collect()
    }

    /// All valuations v_P(c₀ + c₁x + c₂x² + c₃y) over nonzero tuples from F_{q²}.
    fn brute_force_orders(curve: &PlaneCurve, p: CurvePoint, n: usize) -> BTreeSet<u64> {
        let CurvePoint::Affine { x, level, .. } = p else {
            unreachable!()
        };
        let tw = curve.tower();
        let f = curve.field(Level::Base);
        let y = expand_y_at(curve, p, n).unwrap();
        let fns: Vec<_> = LinearSystemBasis::standard()
            .functions
            .iter()
            .map(|&b| basis_series(b, tw, level, x, &y).dense())
            .collect();
        let elems: Vec<_> = f.elements().collect();
        let mut out = BTreeSet::new();
        let size = elems.len();
        for idx in 1..size.pow(4) {
            let c = [
                idx % size,
                idx / size % size,
                idx / size / size % size,
                idx / size / size / size,
            ];
            let v = (0..n).find(|&k| {
                let s = (0..4).fold(f.zero(), |acc, i| f.add(acc, f.mul(elems[c[i]], fns[i][k])));
                !s.is_zero()
            });
            out.insert(v.expect("basis functions are independent mod τ^n") as u64);
        }
        out
    }

    #[test]
    fn trace_orders_at_origin() {
        let c = trace_curve(2).unwrap();
        let f = c.field(Level::Base);
        let o = dp_orders(&c, CurvePoint::affine(f.zero(), f.zero(), Level::Base), 16).unwrap();
        assert_eq!(o.orders, [0, 1, 2, 5]);
        assert_eq!(o.class, OrderClass::Rational);
    }

    #[test]
    fn orders_by_point_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for t in [2, 3] {
            let c = trace_curve(t).unwrap();
            let q = c.q();
            let n = default_precision(q);
            for p in rational_affine(&c).into_iter().take(60) {
                assert_eq!(dp_orders(&c, p, n).unwrap().orders, [0, 1, 2, q + 1]);
            }
            for p in sample_affine_points(&c, Level::Quartic, PointClass::NonRational, 30, &mut rng).unwrap() {
                let o = dp_orders(&c, p, n).unwrap();
                assert_eq!((o.orders, o.class), ([0, 1, 2, q], OrderClass::NonRational));
            }
        }
    }

    #[test]
    fn pivot_stability() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let c = trace_curve(3).unwrap();
        let perms = [[0, 1, 2, 3], [3, 2, 1, 0], [1, 3, 0, 2], [2, 0, 3, 1]];
        let mut pts = sample_affine_points(&c, Level::Base, PointClass::Rational, 5, &mut rng).unwrap();
        pts.extend(sample_affine_points(&c, Level::Quartic, PointClass::NonRational, 5, &mut rng).unwrap());
        for p in pts {
            let reference = dp_orders(&c, p, 11).unwrap();
            for n in 11..30 {
                for perm in perms {
                    let o = dp_orders_with_basis(&c, p, n, &LinearSystemBasis::permuted(perm)).unwrap();
                    assert_eq!(o, reference);
                }
            }
        }
    }

    #[test]
    fn precision_errors_are_distinct() {
        let c = trace_curve(2).unwrap();
        let f = c.field(Level::Base);
        let origin = CurvePoint::affine(f.zero(), f.zero(), Level::Base);
        assert_eq!(
            dp_orders(&c, origin, 6),
            Err(OrdersError::InsufficientPrecision { got: 6, needed: 7 })
        );
        // the fourth pivot sits at 5, so τ^5 cannot see it
        let rows = LinearSystemBasis::standard()
            .functions
            .iter()
            .map(|&b| {
                basis_series(
                    b,
                    c.tower(),
                    Level::Base,
                    f.zero(),
                    &expand_y_at(&c, origin, 5).unwrap(),
                )
            })
            .collect();
        assert_eq!(echelon_pivots(rows), Err(3));
    }

    #[test]
    fn hermitian_orders_match_brute_force() {
        let c = hermitian(2).unwrap();
        for p in rational_affine(&c).into_iter().step_by(11) {
            let o = dp_orders(&c, p, 16).unwrap();
            let oracle: Vec<u64> = brute_force_orders(&c, p, 16).into_iter().collect();
            assert_eq!(o.orders.to_vec(), oracle);
        }
    }

    #[test]
    fn trace_orders_match_brute_force() {
        let c = trace_curve(2).unwrap();
        for p in rational_affine(&c).into_iter().step_by(13) {
            let oracle: Vec<u64> = brute_force_orders(&c, p, 16).into_iter().collect();
            assert_eq!(dp_orders(&c, p, 16).unwrap().orders.to_vec(), oracle);
        }
    }

    #[test]
    fn orders_at_infinity() {
        assert_eq!(
            dp_orders_at_infinity(&trace_curve(2).unwrap()).unwrap().orders,
            [0, 1, 3, 5]
        );
        assert_eq!(
            dp_orders_at_infinity(&trace_curve(3).unwrap()).unwrap().orders,
            [0, 1, 5, 9]
        );
        assert_eq!(
            dp_orders_at_infinity(&trace_curve(4).unwrap()).unwrap().orders,
            [0, 1, 9, 17]
        );
        assert!(matches!(
            dp_orders_at_infinity(&hermitian(2).unwrap()),
            Err(OrdersError::Precondition(_))
        ));
    }

    #[test]
    fn dimension_matches_semigroup_count() {
        for t in 2..=5 {
            let c = trace_curve(t).unwrap();
            let inf = c.infinity();
            let s = NumericalSemigroup::generated(&[inf.x_pole, inf.y_pole]).unwrap();
            let d = LinearSystemBasis::degree(&c);
            assert_eq!(dim_from_semigroup(&s, d), LinearSystemBasis::standard().dimension());
        }
    }

    #[test]
    fn frobenius_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for t in [2, 3] {
            for c in [trace_curve(t).unwrap(), hermitian(t).unwrap()] {
                let n = frobenius_precision(c.q());
                let mut pts = sample_affine_points(&c, Level::Base, PointClass::Rational, 20, &mut rng).unwrap();
                if c.family() == Family::TraceStandard {
                    pts.extend(
                        sample_affine_points(&c, Level::Quartic, PointClass::NonRational, 20, &mut rng).unwrap(),
                    );
                }
                for p in pts {
                    let r = frobenius_identity_check(&c, p, n).unwrap();
                    assert!(r.vanishes, "{r:?}");
                    assert_eq!(r.modulus, n - 2);
                }
            }
        }
    }

    #[test]
    fn frobenius_negative_control() {
        let c = trace_curve(3).unwrap();
        let tw = tower(3).unwrap();
        let f = *tw.base();
        let origin = CurvePoint::affine(f.zero(), f.zero(), Level::Base);
        let y = expand_y_at(&c, origin, 24).unwrap();
        let d2 = y.hasse_derivative(2);
        let bumped = d2.add(&TruncatedSeries::constant(f, f.one(), d2.precision()));
        let r = frobenius_residual(tw, Level::Base, f.zero(), &y, &y.hasse_derivative(1), &bumped);
        assert!(!r.is_zero());
        let r = frobenius_residual(tw, Level::Base, f.zero(), &y, &y.hasse_derivative(1), &d2);
        assert!(r.is_zero());
    }

    #[test]
    fn frobenius_preconditions() {
        let c = trace_curve(2).unwrap();
        let f = c.field(Level::Base);
        let origin = CurvePoint::affine(f.zero(), f.zero(), Level::Base);
        assert!(matches!(
            frobenius_identity_check(&c, origin, 16),
            Err(OrdersError::Precondition(_))
        ));
        assert!(matches!(
            frobenius_identity_check(&c, origin, 5),
            Err(OrdersError::InsufficientPrecision { .. })
        ));
        assert_eq!(frobenius_precision(4), 15);
        assert_eq!(frobenius_precision(8), 24);
    }

    #[test]
    fn frobenius_order_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for t in 2..=4 {
            let r = frobenius_orders(&trace_curve(t).unwrap(), 8, &mut rng).unwrap();
            assert_eq!(r.nu, vec![0, 1, 1 << t]);
            assert!(r.evidence.len() >= 16 * 2);
        }
        assert!(frobenius_orders(&hermitian(2).unwrap(), 4, &mut rng).is_err());
    }

    #[test]
    fn classification_from_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for t in [2, 3] {
            let c = trace_curve(t).unwrap();
            let n = default_precision(c.q());
            let mut data: Vec<_> = sample_affine_points(&c, Level::Base, PointClass::Rational, 20, &mut rng)
                .unwrap()
                .into_iter()
                .map(|p| dp_orders(&c, p, n).unwrap())
                .collect();
            data.push(dp_orders_at_infinity(&c).unwrap());
            let r = semigroup_classification_check(&c, &data);
            assert!(r.passed, "{r:?}");
            let q = c.q();
            assert_eq!(r.entries.iter().filter(|e| e.m1 == q - 1).count(), 20);
        }
    }

    #[test]
    fn ramification_degree() {
        let eps: Vec<u64> = (0..=8).collect();
        assert_eq!(sv_ramification_degree(&eps, 2, 8, 10), Ok(162));
        assert_eq!(sv_ramification_degree(&[0, 1], 0, 1, 7), Ok(12));
        assert!(sv_ramification_degree(&[0, 2, 1], 0, 2, 1).is_err());
        let [literal, general] = ramification_instances();
        assert_eq!((literal.reduced_rhs, general.reduced_rhs), (10, -40));
        assert!(literal.solutions.is_empty() && general.solutions.is_empty());
    }
}
