//! Plane models of the Hermitian and trace curves over F_{q²}, the
//! trace-form families used as normalization inputs, and the coordinate
//! changes that carry them back to the standard model.

mod normalize;
mod poly;

pub use normalize::{
    fact0_identities, normalization_round_trip, normalize, random_record, CoordinateChange, Fact0Report,
    IsomorphismRecord, RoundTripReport,
};
pub use poly::{Polynomial, Term};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{tower, FieldElement, FieldError, FieldSpec, FieldTower, Level};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("leading coefficient a_1 must be nonzero")]
    ZeroLeadingCoefficient,
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("coefficient {0:?} is not an element of F_q²")]
    ForeignCoefficient(FieldElement),
    #[error("a_t must be 1 (apply scale-y first)")]
    TopCoefficientNotOne,
    #[error("operation needs t >= 2, got t = {0}")]
    TooSmall(u32),
    #[error("polynomial is not of trace form x^(q+1) + ∑ a_i y^(q/2^i) + ∑ b_i x^(q/2^i) + b_0")]
    NotTraceShape,
    #[error("curve is outside the F_q²-isomorphism class of the trace curve: {0}")]
    NotInClass(String),
    #[error("no α in F_q² solves ∑ a_i α^(q/2^i) = b")]
    NoAlpha,
    #[error("point coordinates do not belong to level {0}")]
    LevelMismatch(u8),
    #[error("family {0} does not support this operation")]
    UnsupportedFamily(&'static str),
    #[error("coordinate change {0} has a zero scale constant")]
    ZeroScale(&'static str),
    #[error("malformed curve description: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Hermitian,
    TraceStandard,
    TraceForm,
    TraceFormExtended,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::Hermitian => "hermitian",
            Family::TraceStandard => "trace-standard",
            Family::TraceForm => "trace-form",
            Family::TraceFormExtended => "trace-form-extended",
        }
    }

    pub fn from_label(s: &str) -> Option<Family> {
        [
            Family::Hermitian,
            Family::TraceStandard,
            Family::TraceForm,
            Family::TraceFormExtended,
        ]
        .into_iter()
        .find(|f| f.label() == s)
    }

    pub fn is_trace(self) -> bool {
        !matches!(self, Family::Hermitian)
    }
}

/// Declared data for the points over x = ∞. Not computed: both families have a
/// single rational point there, with the pole orders listed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InfinityDescriptor {
    pub points: u32,
    pub rational: bool,
    pub x_pole: u64,
    pub y_pole: u64,
}

/// Coefficients of x^(q+1) + ∑ a_i y^(q/2^i) + ∑ b_i x^(q/2^i) + b_0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceCoefficients {
    /// a_1..a_t
    pub a: Vec<FieldElement>,
    /// b_0..b_t
    pub b: Vec<FieldElement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneCurve {
    t: u32,
    family: Family,
    poly: Polynomial,
    infinity: InfinityDescriptor,
}

fn checked_tower(t: u32) -> Result<&'static FieldTower, CurveError> {
    Ok(tower(t)?)
}

fn infinity_for(family: Family, q: u64) -> InfinityDescriptor {
    InfinityDescriptor {
        points: 1,
        rational: true,
        x_pole: if family == Family::Hermitian { q } else { q / 2 },
        y_pole: q + 1,
    }
}

/// y^q + y + x^(q+1) over F_{q²}.
pub fn hermitian(t: u32) -> Result<PlaneCurve, CurveError> {
    let tw = checked_tower(t)?;
    let f = *tw.base();
    let q = tw.q() as u32;
    let poly = Polynomial::from_terms(f, [(q + 1, 0, f.one()), (0, q, f.one()), (0, 1, f.one())]);
    Ok(PlaneCurve::with_family(t, Family::Hermitian, poly))
}

/// ∑_{i=1}^t y^(q/2^i) + x^(q+1) over F_{q²}.
pub fn trace_curve(t: u32) -> Result<PlaneCurve, CurveError> {
    let f = *checked_tower(t)?.base();
    let ones = vec![f.one(); t as usize];
    let mut c = trace_form(&ones, f.zero())?;
    c.family = Family::TraceStandard;
    Ok(c)
}

/// ∑ a_i y^(q/2^i) + b = x^(q+1).
pub fn trace_form(a: &[FieldElement], b: FieldElement) -> Result<PlaneCurve, CurveError> {
    let t = a.len() as u32;
    let f = *checked_tower(t)?.base();
    let mut bs = vec![f.zero(); t as usize + 1];
    bs[0] = b;
    let mut c = trace_form_extended(a, &bs)?;
    c.family = classify(t, &c.poly).unwrap_or(Family::TraceForm);
    if c.family == Family::TraceFormExtended {
        c.family = Family::TraceForm;
    }
    Ok(c)
}

/// x^(q+1) + ∑ a_i y^(q/2^i) + ∑_{i≥1} b_i x^(q/2^i) + b_0 = 0.
pub fn trace_form_extended(a: &[FieldElement], b: &[FieldElement]) -> Result<PlaneCurve, CurveError> {
    let t = a.len() as u32;
    let tw = checked_tower(t)?;
    let f = *tw.base();
    if b.len() != a.len() + 1 {
        return Err(CurveError::CoefficientCount {
            expected: a.len() + 1,
            got: b.len(),
        });
    }
    if let Some(&c) = a.iter().chain(b).find(|c| !f.contains(**c)) {
        return Err(CurveError::ForeignCoefficient(c));
    }
    if a[0].is_zero() {
        return Err(CurveError::ZeroLeadingCoefficient);
    }
    let q = tw.q() as u32;
    let mut poly = Polynomial::from_terms(f, [(q + 1, 0, f.one()), (0, 0, b[0])]);
    for i in 1..=t {
        let e = q >> i;
        poly.add_term(0, e, a[i as usize - 1]);
        poly.add_term(e, 0, b[i as usize]);
    }
    let family = classify(t, &poly).unwrap_or(Family::TraceFormExtended);
    Ok(PlaneCurve::with_family(t, family, poly))
}

/// Family of a polynomial, if it has one of the supported shapes.
pub fn classify(t: u32, poly: &Polynomial) -> Option<Family> {
    let q = 1u32 << t;
    let f = *poly.field();
    let herm = Polynomial::from_terms(f, [(q + 1, 0, f.one()), (0, q, f.one()), (0, 1, f.one())]);
    if *poly == herm {
        return Some(Family::Hermitian);
    }
    let coeffs = trace_coefficients(t, poly)?;
    if poly.coeff(q + 1, 0) != f.one() {
        return None;
    }
    let extended = coeffs.b[1..].iter().any(|b| !b.is_zero());
    if extended {
        return Some(Family::TraceFormExtended);
    }
    if coeffs.a.iter().all(|a| a.is_one()) && coeffs.b[0].is_zero() {
        Some(Family::TraceStandard)
    } else {
        Some(Family::TraceForm)
    }
}

/// Read trace-form coefficients after dividing by the x^(q+1) coefficient.
pub fn trace_coefficients(t: u32, poly: &Polynomial) -> Option<TraceCoefficients> {
    let q = 1u32 << t;
    let f = *poly.field();
    let lead = poly.coeff(q + 1, 0);
    let scale = f.inv(lead).ok()?;
    let allowed = |i: u32, j: u32| {
        (i, j) == (q + 1, 0)
            || (i, j) == (0, 0)
            || (i == 0 && j.is_power_of_two() && j <= q / 2)
            || (j == 0 && i.is_power_of_two() && i <= q / 2)
    };
    if poly.terms().any(|tm| !allowed(tm.x_exp, tm.y_exp)) {
        return None;
    }
    let a: Vec<_> = (1..=t).map(|i| f.mul(poly.coeff(0, q >> i), scale)).collect();
    if a[0].is_zero() {
        return None;
    }
    let b: Vec<_> = (0..=t)
        .map(|i| {
            let c = if i == 0 {
                poly.coeff(0, 0)
            } else {
                poly.coeff(q >> i, 0)
            };
            f.mul(c, scale)
        })
        .collect();
    Some(TraceCoefficients { a, b })
}

impl PlaneCurve {
    fn with_family(t: u32, family: Family, poly: Polynomial) -> PlaneCurve {
        PlaneCurve {
            t,
            family,
            poly,
            infinity: infinity_for(family, 1 << t),
        }
    }

    /// Wrap a polynomial, deriving the family from its shape.
    pub fn from_polynomial(t: u32, poly: Polynomial) -> Result<PlaneCurve, CurveError> {
        let tw = checked_tower(t)?;
        if poly.field() != tw.base() {
            return Err(CurveError::Malformed("coefficient field is not F_q²".into()));
        }
        let family = classify(t, &poly).ok_or(CurveError::NotTraceShape)?;
        Ok(PlaneCurve::with_family(t, family, poly))
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn q(&self) -> u64 {
        1 << self.t
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn infinity(&self) -> InfinityDescriptor {
        self.infinity
    }

    pub fn tower(&self) -> &'static FieldTower {
        tower(self.t).expect("curve built with a valid t")
    }

    pub fn field(&self, level: Level) -> FieldSpec {
        *self.tower().field(level)
    }

    pub fn trace_coefficients(&self) -> Option<TraceCoefficients> {
        trace_coefficients(self.t, &self.poly)
    }

    /// Genus of the smooth model for the two named families.
    pub fn genus(&self) -> u64 {
        let q = self.q();
        match self.family {
            Family::Hermitian => q * (q - 1) / 2,
            _ => q * (q - 2) / 4,
        }
    }

    pub fn evaluate(&self, x: FieldElement, y: FieldElement, level: Level) -> Result<FieldElement, CurveError> {
        self.poly
            .evaluate(self.tower(), x, y, level)
            .ok_or(CurveError::LevelMismatch(level.index()))
    }

    pub fn contains(&self, x: FieldElement, y: FieldElement, level: Level) -> bool {
        matches!(self.evaluate(x, y, level), Ok(v) if v.is_zero())
    }

    pub fn partial_x(&self) -> Polynomial {
        self.poly.partial_x()
    }

    pub fn partial_y(&self) -> Polynomial {
        self.poly.partial_y()
    }

    /// The y-part as additive terms (k, c) meaning c·y^(2^k), when every
    /// y-monomial is a constant times a power-of-two power of y.
    pub fn additive_y_terms(&self) -> Option<Vec<(u32, FieldElement)>> {
        let mut out = Vec::new();
        for tm in self.poly.terms().filter(|tm| tm.y_exp > 0) {
            if tm.x_exp != 0 || !tm.y_exp.is_power_of_two() {
                return None;
            }
            out.push((tm.y_exp.trailing_zeros(), tm.coeff));
        }
        Some(out)
    }

    pub fn to_json(&self) -> CurveJson {
        CurveJson {
            q: self.q(),
            family: self.family.label().to_string(),
            terms: self
                .poly
                .terms()
                .map(|tm| (tm.x_exp, tm.y_exp, tm.coeff.to_hex()))
                .collect(),
        }
    }

    pub fn from_json(json: &CurveJson) -> Result<PlaneCurve, CurveError> {
        if !json.q.is_power_of_two() || json.q < 2 {
            return Err(CurveError::Malformed(format!("q = {} is not a power of two", json.q)));
        }
        let t = json.q.trailing_zeros();
        let f = *checked_tower(t)?.base();
        let mut poly = Polynomial::zero(f);
        for (i, j, hex) in &json.terms {
            poly.add_term(*i, *j, f.parse_hex(hex)?);
        }
        let declared = Family::from_label(&json.family)
            .ok_or_else(|| CurveError::Malformed(format!("unknown family {:?}", json.family)))?;
        let curve = PlaneCurve::from_polynomial(t, poly)?;
        if curve.family != declared {
            return Err(CurveError::Malformed(format!(
                "declared family {} but terms describe {}",
                declared.label(),
                curve.family.label()
            )));
        }
        Ok(curve)
    }
}

/// Serialized curve: `{q, family, terms: [[i, j, hex-coeff], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub q: u64,
    pub family: String,
    pub terms: Vec<(u32, u32, String)>,
}
