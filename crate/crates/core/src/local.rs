//! Local expansions y(τ), τ = x − x(P), at affine points and the Hasse
//! derivative identities they satisfy.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::census::CurvePoint;
use crate::curve::{Family, PlaneCurve, Polynomial};
use crate::field::{FieldElement, FieldSpec, FieldTower, Level};
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalError {
    #[error("expansions are only available at affine points")]
    NotAffine,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("∂F/∂y vanishes at the point")]
    Singular,
    #[error("precision {got} is insufficient (need at least {needed})")]
    InsufficientPrecision { got: usize, needed: usize },
    #[error("{0}")]
    Precondition(String),
}

/// Default series length 2q + 8.
pub fn default_precision(q: u64) -> usize {
    2 * q as usize + 8
}

/// F(X, Y) for series X, Y, truncated to the operands' precision.
pub fn evaluate_on_series(
    poly: &Polynomial,
    tower: &FieldTower,
    level: Level,
    x: &TruncatedSeries,
    y: &TruncatedSeries,
) -> TruncatedSeries {
    let f = *tower.field(level);
    let prec = x.precision().min(y.precision());
    let mut xp: BTreeMap<u32, TruncatedSeries> = BTreeMap::new();
    let mut yp: BTreeMap<u32, TruncatedSeries> = BTreeMap::new();
    let mut acc = TruncatedSeries::zero(f, prec);
    for tm in poly.terms() {
        let xs = xp.entry(tm.x_exp).or_insert_with(|| x.pow(tm.x_exp as u64)).clone();
        let ys = yp.entry(tm.y_exp).or_insert_with(|| y.pow(tm.y_exp as u64)).clone();
        let c = tower.lift(tm.coeff, level);
        acc = acc.add(&xs.mul(&ys).scale(c));
    }
    acc.truncate(prec)
}

fn affine(curve: &PlaneCurve, p: CurvePoint) -> Result<(FieldElement, FieldElement, Level), LocalError> {
    let CurvePoint::Affine { x, y, level } = p else {
        return Err(LocalError::NotAffine);
    };
    if !curve.contains(x, y, level) {
        return Err(LocalError::NotOnCurve);
    }
    Ok((x, y, level))
}

/// The unique y(τ) with y(0) = y(P) and F(x(P) + τ, y(τ)) ≡ 0 mod τ^N, by
/// Newton iteration doubling the precision each round.
pub fn expand_y_at(curve: &PlaneCurve, p: CurvePoint, n: usize) -> Result<TruncatedSeries, LocalError> {
    if n == 0 {
        return Err(LocalError::InsufficientPrecision { got: 0, needed: 1 });
    }
    let (x0, y0, level) = affine(curve, p)?;
    let tw = curve.tower();
    let f = *tw.field(level);
    let fy = curve.partial_y();
    let fy_at_p = fy.evaluate(tw, x0, y0, level).expect("level checked");
    if fy_at_p.is_zero() {
        return Err(LocalError::Singular);
    }
    let poly = curve.polynomial();
    let mut y = TruncatedSeries::constant(f, y0, 1);
    let mut prec = 1;
    while prec < n {
        prec = (2 * prec).min(n);
        let xs = TruncatedSeries::shifted_parameter(f, x0, prec);
        let ys = y.padded(prec);
        let residual = evaluate_on_series(poly, tw, level, &xs, &ys);
        let slope = evaluate_on_series(&fy, tw, level, &xs, &ys)
            .inverse()
            .ok_or(LocalError::Singular)?;
        y = ys.add(&residual.mul(&slope)).truncate(prec);
    }
    Ok(y.padded(n).truncate(n))
}

/// F(x(P) + τ, y(τ)), for residual checks on an expansion.
pub fn residual(curve: &PlaneCurve, p: CurvePoint, y: &TruncatedSeries) -> Result<TruncatedSeries, LocalError> {
    let (x0, _, level) = affine(curve, p)?;
    let tw = curve.tower();
    let xs = TruncatedSeries::shifted_parameter(*tw.field(level), x0, y.precision());
    Ok(evaluate_on_series(curve.polynomial(), tw, level, &xs, y))
}

/// Pass/fail for the Hasse derivative laws on random series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HIdentityReport {
    pub instances: usize,
    /// D^i(z + w) = D^i z + D^i w
    pub h1: bool,
    /// D^i(zw) = ∑_j D^(i−j)(z) D^j(w)
    pub h2: bool,
    /// D^i(z^(2j)) = (D^(i/2) z^j)² for even i, 0 for odd i
    pub h3: bool,
    /// D^i(z^q') = (D^(i/q') z)^q' when q' | i, 0 otherwise; keyed by q'
    pub h3_prime: BTreeMap<u64, bool>,
}

impl HIdentityReport {
    pub fn all(&self) -> bool {
        self.h1 && self.h2 && self.h3 && self.h3_prime.values().all(|&b| b)
    }
}

fn random_series<R: Rng + ?Sized>(f: &FieldSpec, rng: &mut R) -> TruncatedSeries {
    let offset = rng.gen_range(0..3);
    let len = rng.gen_range(12..28);
    let mut dense = vec![f.zero(); offset];
    dense.extend((0..len).map(|_| f.random(rng)));
    TruncatedSeries::new(*f, &dense, offset + len)
}

fn power_of_two_power(z: &TruncatedSeries, qp: u64) -> TruncatedSeries {
    (0..qp.trailing_zeros()).fold(z.clone(), |acc, _| acc.square())
}

/// Check H1, H2, H3 and H3' (q' ∈ {2, 4, 8}) on `count` random instances each.
pub fn check_h_identities<R: Rng + ?Sized>(field: &FieldSpec, count: usize, rng: &mut R) -> HIdentityReport {
    let f = field;
    let mut h1 = true;
    let mut h2 = true;
    let mut h3 = true;
    let mut h3_prime: BTreeMap<u64, bool> = [2, 4, 8].into_iter().map(|q| (q, true)).collect();
    for _ in 0..count {
        let z = random_series(f, rng);
        let w = random_series(f, rng);
        let i = rng.gen_range(0..10);

        let lhs = z.add(&w).hasse_derivative(i);
        h1 &= lhs.agrees(&z.hasse_derivative(i).add(&w.hasse_derivative(i)));

        let lhs = z.mul(&w).hasse_derivative(i);
        let rhs = (1..=i).fold(z.hasse_derivative(i).mul(&w), |acc, j| {
            acc.add(&z.hasse_derivative(i - j).mul(&w.hasse_derivative(j)))
        });
        h2 &= lhs.precision() > 0 && lhs.agrees(&rhs);

        let j = rng.gen_range(1..4);
        let zj = z.pow(j);
        let lhs = zj.square().hasse_derivative(i);
        h3 &= if i % 2 == 0 {
            lhs.agrees(&zj.hasse_derivative(i / 2).square())
        } else {
            lhs.is_zero()
        };

        for (&qp, ok) in h3_prime.iter_mut() {
            let i = rng.gen_range(0..3 * qp as usize);
            let lhs = power_of_two_power(&z, qp).hasse_derivative(i);
            *ok &= if i % qp as usize == 0 {
                lhs.agrees(&power_of_two_power(&z.hasse_derivative(i / qp as usize), qp))
            } else {
                lhs.is_zero()
            };
        }
    }
    HIdentityReport {
        instances: count,
        h1,
        h2,
        h3,
        h3_prime,
    }
}

/// Series identities for y on a trace-form curve ∑ a_i y^(q/2^i) + b = x^(q+1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivativeFacts {
    pub precision: usize,
    /// a_t·Dy = x^q
    pub dy_matches: bool,
    /// a_t³·D²y = a_{t−1}·x^(2q)
    pub d2y_matches: bool,
    /// inclusive range of i with D^i y ≡ 0 checked
    pub vanishing_range: (usize, usize),
    pub vanishing_ok: bool,
    /// v_{P₀}(Dy) from Dy = x^q and the pole order of x
    pub dy_valuation_at_infinity: i64,
    /// the same value as v(dy/dt) − v(dx/dt) with v(dx/dt) = 2g − 2
    pub dy_valuation_via_differentials: i64,
    /// 2g − 2 = q²/2 − q − 2
    pub canonical_degree_identity: bool,
}

impl DerivativeFacts {
    pub fn all(&self) -> bool {
        self.dy_matches
            && self.d2y_matches
            && self.vanishing_ok
            && self.dy_valuation_at_infinity == self.dy_valuation_via_differentials
            && self.canonical_degree_identity
    }
}

pub fn verify_derivative_facts(curve: &PlaneCurve, p: CurvePoint, n: usize) -> Result<DerivativeFacts, LocalError> {
    if !matches!(curve.family(), Family::TraceStandard | Family::TraceForm) {
        return Err(LocalError::Precondition(format!(
            "derivative facts apply to the trace family, not {}",
            curve.family().label()
        )));
    }
    let t = curve.t();
    if t < 2 {
        return Err(LocalError::Precondition("needs t >= 2".into()));
    }
    let q = curve.q() as usize;
    if n <= q + 2 {
        return Err(LocalError::InsufficientPrecision { got: n, needed: q + 3 });
    }
    let (x0, _, level) = affine(curve, p)?;
    let tw = curve.tower();
    let f = *tw.field(level);
    let coeffs = curve.trace_coefficients().expect("trace family");
    let a_t = tw.lift(coeffs.a[t as usize - 1], level);
    let a_tm1 = tw.lift(coeffs.a[t as usize - 2], level);
    let a_t_inv = f.inv(a_t).expect("a_t is nonzero on a smooth trace-form model");

    let y = expand_y_at(curve, p, n)?;
    let xs = TruncatedSeries::shifted_parameter(f, x0, n);
    let xq = power_of_two_power(&xs, q as u64);
    let dy = y.hasse_derivative(1);
    let dy_matches = dy.agrees(&xq.scale(a_t_inv));
    let d2y = y.hasse_derivative(2);
    let d2_coeff = f.mul(a_tm1, f.pow(a_t_inv, 3));
    let d2y_matches = d2y.agrees(&xq.square().scale(d2_coeff));
    let upper = (q - 1).min(n - 1);
    let vanishing_ok = (3..=upper).all(|i| y.hasse_derivative(i).is_zero());

    let inf = curve.infinity();
    let g = curve.genus() as i64;
    let qi = q as i64;
    Ok(DerivativeFacts {
        precision: n,
        dy_matches,
        d2y_matches,
        vanishing_range: (3, upper),
        vanishing_ok,
        dy_valuation_at_infinity: -(qi * inf.x_pole as i64),
        dy_valuation_via_differentials: -(inf.y_pole as i64 + 1) - (2 * g - 2),
        canonical_degree_identity: 2 * g - 2 == qi * qi / 2 - qi - 2,
    })
}
