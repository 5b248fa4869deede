use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{trace_curve, CurveError, Family, PlaneCurve, TraceCoefficients};
use crate::census::CurvePoint;
use crate::field::{linearized_solve, FieldElement, FieldSpec, FieldTower, Level};

/// A single invertible change of coordinates, acting on points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordinateChange {
    /// (x, y) ↦ (x, c·y)
    ScaleY(FieldElement),
    /// (x, y) ↦ (x, y + α)
    TranslateY(FieldElement),
    /// (x, y) ↦ (x, b·x + y)
    Shear(FieldElement),
    /// (x, y) ↦ (c·x, y)
    ScaleX(FieldElement),
}

impl CoordinateChange {
    pub fn kind(&self) -> &'static str {
        match self {
            CoordinateChange::ScaleY(_) => "scale-y",
            CoordinateChange::TranslateY(_) => "translate-y",
            CoordinateChange::Shear(_) => "shear",
            CoordinateChange::ScaleX(_) => "scale-x",
        }
    }

    pub fn constant(&self) -> FieldElement {
        match *self {
            CoordinateChange::ScaleY(c)
            | CoordinateChange::TranslateY(c)
            | CoordinateChange::Shear(c)
            | CoordinateChange::ScaleX(c) => c,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            CoordinateChange::ScaleY(c) | CoordinateChange::ScaleX(c) => c.is_one(),
            CoordinateChange::TranslateY(c) | CoordinateChange::Shear(c) => c.is_zero(),
        }
    }

    fn from_parts(kind: &str, c: FieldElement) -> Result<CoordinateChange, CurveError> {
        Ok(match kind {
            "scale-y" => CoordinateChange::ScaleY(c),
            "translate-y" => CoordinateChange::TranslateY(c),
            "shear" => CoordinateChange::Shear(c),
            "scale-x" => CoordinateChange::ScaleX(c),
            other => return Err(CurveError::Malformed(format!("unknown coordinate change {other:?}"))),
        })
    }

    pub fn inverse(&self, field: &FieldSpec) -> CoordinateChange {
        match *self {
            CoordinateChange::ScaleY(c) => CoordinateChange::ScaleY(field.inv(c).expect("nonzero scale")),
            CoordinateChange::ScaleX(c) => CoordinateChange::ScaleX(field.inv(c).expect("nonzero scale")),
            other => other,
        }
    }

    fn map_coords(
        &self,
        tower: &FieldTower,
        x: FieldElement,
        y: FieldElement,
        level: Level,
    ) -> (FieldElement, FieldElement) {
        let f = tower.field(level);
        let c = tower.lift(self.constant(), level);
        match self {
            CoordinateChange::ScaleY(_) => (x, f.mul(c, y)),
            CoordinateChange::TranslateY(_) => (x, f.add(y, c)),
            CoordinateChange::Shear(_) => (x, f.add(f.mul(c, x), y)),
            CoordinateChange::ScaleX(_) => (f.mul(c, x), y),
        }
    }

    /// Polynomial of the image curve: F ∘ φ⁻¹.
    fn pull_back(&self, poly: &super::Polynomial) -> super::Polynomial {
        let f = *poly.field();
        let c = self.constant();
        match self {
            CoordinateChange::ScaleY(_) => poly.scale_variables(f.one(), f.inv(c).expect("nonzero scale")),
            CoordinateChange::ScaleX(_) => poly.scale_variables(f.inv(c).expect("nonzero scale"), f.one()),
            CoordinateChange::TranslateY(_) => poly.shift_y(c, 0),
            CoordinateChange::Shear(_) => poly.shift_y(c, 1),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ChangeJson {
    kind: String,
    constant: String,
}

/// Ordered list of coordinate changes; the first entry is applied first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IsomorphismRecord {
    steps: Vec<CoordinateChange>,
}

impl IsomorphismRecord {
    pub fn new(steps: Vec<CoordinateChange>) -> Result<IsomorphismRecord, CurveError> {
        for s in &steps {
            if matches!(s, CoordinateChange::ScaleX(_) | CoordinateChange::ScaleY(_)) && s.constant().is_zero() {
                return Err(CurveError::ZeroScale(s.kind()));
            }
        }
        Ok(IsomorphismRecord { steps })
    }

    pub fn steps(&self) -> &[CoordinateChange] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    fn push(&mut self, step: CoordinateChange) {
        if !step.is_identity() {
            self.steps.push(step);
        }
    }

    pub fn inverse(&self, field: &FieldSpec) -> IsomorphismRecord {
        IsomorphismRecord {
            steps: self.steps.iter().rev().map(|s| s.inverse(field)).collect(),
        }
    }

    pub fn then(mut self, other: &IsomorphismRecord) -> IsomorphismRecord {
        self.steps.extend_from_slice(&other.steps);
        self
    }

    pub fn apply_point(&self, tower: &FieldTower, p: CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity { .. } => p,
            CurvePoint::Affine { x, y, level } => {
                let (x, y) = self
                    .steps
                    .iter()
                    .fold((x, y), |(x, y), s| s.map_coords(tower, x, y, level));
                CurvePoint::Affine { x, y, level }
            }
        }
    }

    /// The image curve, rescaled so the x^(q+1) coefficient is 1.
    pub fn apply_curve(&self, curve: &PlaneCurve) -> Result<PlaneCurve, CurveError> {
        if !curve.family().is_trace() {
            return Err(CurveError::UnsupportedFamily(curve.family().label()));
        }
        let poly = self
            .steps
            .iter()
            .fold(curve.polynomial().clone(), |p, s| s.pull_back(&p));
        PlaneCurve::from_polynomial(curve.t(), monic(curve.q(), poly)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let list: Vec<ChangeJson> = self
            .steps
            .iter()
            .map(|s| ChangeJson {
                kind: s.kind().to_string(),
                constant: s.constant().to_hex(),
            })
            .collect();
        serde_json::to_value(list).expect("plain data serializes")
    }

    pub fn from_json(field: &FieldSpec, value: &serde_json::Value) -> Result<IsomorphismRecord, CurveError> {
        let list: Vec<ChangeJson> =
            serde_json::from_value(value.clone()).map_err(|e| CurveError::Malformed(e.to_string()))?;
        let steps = list
            .iter()
            .map(|c| CoordinateChange::from_parts(&c.kind, field.parse_hex(&c.constant)?))
            .collect::<Result<Vec<_>, _>>()?;
        IsomorphismRecord::new(steps)
    }
}

fn monic(q: u64, poly: super::Polynomial) -> Result<super::Polynomial, CurveError> {
    let f = *poly.field();
    let lead = poly.coeff(q as u32 + 1, 0);
    let inv = f.inv(lead).map_err(|_| CurveError::NotTraceShape)?;
    Ok(poly.scale(inv))
}

/// Truth values of the coefficient identities forced on a trace-form model
/// with a_t = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fact0Report {
    /// 1 + a_{t−1}·a_1^(2q) = 0
    pub i: bool,
    /// 1 + a_{t−1}·a_1² = 0
    pub ii: bool,
    /// a_i + a_{t−1}·a_{i+1}² = 0 for i = 1..t−1
    pub iii: bool,
    /// a_i^q + a_{t−1}·a_{i+1}^(2q) = 0 for i = 1..t−1
    pub iv: bool,
    /// b + b^q + a_{t−1}(b² + b^(2q)) = 0
    pub v: bool,
}

impl Fact0Report {
    pub fn all(&self) -> bool {
        self.i && self.ii && self.iii && self.iv && self.v
    }
}

pub fn fact0_identities(field: &FieldSpec, a: &[FieldElement], b: FieldElement) -> Result<Fact0Report, CurveError> {
    let f = field;
    let t = a.len() as u32;
    if t < 2 {
        return Err(CurveError::TooSmall(t));
    }
    if !a[t as usize - 1].is_one() {
        return Err(CurveError::TopCoefficientNotOne);
    }
    let a_tm1 = a[t as usize - 2];
    let qp = |v: FieldElement| f.q_power(v, 1);
    let one = f.one();
    let i = f.add(one, f.mul(a_tm1, f.square(qp(a[0])))).is_zero();
    let ii = f.add(one, f.mul(a_tm1, f.square(a[0]))).is_zero();
    let iii = (0..t as usize - 1).all(|k| f.add(a[k], f.mul(a_tm1, f.square(a[k + 1]))).is_zero());
    let iv = (0..t as usize - 1).all(|k| f.add(qp(a[k]), f.mul(a_tm1, f.square(qp(a[k + 1])))).is_zero());
    let bq = qp(b);
    let v = f
        .add(f.add(b, bq), f.mul(a_tm1, f.add(f.square(b), f.square(bq))))
        .is_zero();
    Ok(Fact0Report { i, ii, iii, iv, v })
}

fn step(
    curve: &PlaneCurve,
    change: CoordinateChange,
    record: &mut IsomorphismRecord,
) -> Result<PlaneCurve, CurveError> {
    if change.is_identity() {
        return Ok(curve.clone());
    }
    let single = IsomorphismRecord::new(vec![change])?;
    let next = single.apply_curve(curve)?;
    record.push(change);
    Ok(next)
}

fn coefficients(curve: &PlaneCurve) -> Result<TraceCoefficients, CurveError> {
    curve.trace_coefficients().ok_or(CurveError::NotTraceShape)
}

/// Carry a trace-form (or extended trace-form) model to the standard trace
/// curve over F_{q²}, recording the coordinate changes used.
///
/// Order: scale-y to make a_t = 1, shear by b_t to clear the x^(q/2^i) terms,
/// translate-y by the smallest α with ∑ a_i α^(q/2^i) = b_0, then scale-x
/// by a_1⁻¹ and scale-y by a_{t−1}.
pub fn normalize(curve: &PlaneCurve) -> Result<(PlaneCurve, IsomorphismRecord), CurveError> {
    if !curve.family().is_trace() {
        return Err(CurveError::UnsupportedFamily(curve.family().label()));
    }
    let t = curve.t();
    if t < 2 {
        return Err(CurveError::TooSmall(t));
    }
    let f = curve.field(Level::Base);
    let q = curve.q();
    let mut record = IsomorphismRecord::default();

    let c = coefficients(curve)?;
    let mut cur = step(curve, CoordinateChange::ScaleY(c.a[t as usize - 1]), &mut record)?;

    if cur.family() == Family::TraceFormExtended {
        let c = coefficients(&cur)?;
        let bt = c.b[t as usize];
        for i in 1..=t as usize {
            let expect = f.mul(c.a[i - 1], f.pow(bt, q >> i));
            if c.b[i] != expect {
                return Err(CurveError::NotInClass(format!(
                    "b_{i} = {} but a_{i}·b_t^(q/2^{i}) = {}",
                    c.b[i], expect
                )));
            }
        }
        cur = step(&cur, CoordinateChange::Shear(bt), &mut record)?;
    }

    let c = coefficients(&cur)?;
    let report = fact0_identities(&f, &c.a, c.b[0])?;
    if !report.all() {
        return Err(CurveError::NotInClass(format!("coefficient identities {report:?}")));
    }
    let alpha = *linearized_solve(&f, &c.a, c.b[0])?.first().ok_or(CurveError::NoAlpha)?;
    cur = step(&cur, CoordinateChange::TranslateY(alpha), &mut record)?;

    let a1_inv = f.inv(c.a[0])?;
    cur = step(&cur, CoordinateChange::ScaleX(a1_inv), &mut record)?;
    cur = step(&cur, CoordinateChange::ScaleY(c.a[t as usize - 2]), &mut record)?;

    let standard = trace_curve(t)?;
    if cur.polynomial() != standard.polynomial() {
        return Err(CurveError::NotInClass(
            "reduced model differs from the trace curve".into(),
        ));
    }
    Ok((standard, record))
}

/// A random record of one to five steps with constants in F_{q²}. Every such
/// record carries the standard trace curve to a model `normalize` accepts.
pub fn random_record<R: Rng + ?Sized>(f: &FieldSpec, rng: &mut R) -> IsomorphismRecord {
    let len = rng.gen_range(1..=5);
    let steps = (0..len)
        .map(|_| match rng.gen_range(0..4) {
            0 => CoordinateChange::ScaleY(f.random_nonzero(rng)),
            1 => CoordinateChange::TranslateY(f.random(rng)),
            2 => CoordinateChange::Shear(f.random(rng)),
            _ => CoordinateChange::ScaleX(f.random_nonzero(rng)),
        })
        .collect();
    IsomorphismRecord::new(steps).expect("scales are nonzero")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundTripReport {
    pub t: u32,
    pub trials: usize,
    /// records whose image normalized back to the trace curve
    pub recovered: usize,
    /// the returned record maps the source points onto the trace curve's
    pub points_replayed: usize,
    /// every translate-y constant lies in F_{q²}
    pub alpha_in_base: bool,
    pub fact0_standard: bool,
    pub passed: bool,
}

/// Push the trace curve through `trials` random records, normalize each
/// image and replay the returned record on F_{q²}-points.
pub fn normalization_round_trip<R: Rng + ?Sized>(
    t: u32,
    trials: usize,
    rng: &mut R,
) -> Result<RoundTripReport, crate::census::CensusError> {
    let std = trace_curve(t)?;
    let tw = std.tower();
    let f = *tw.base();
    let mut pts = crate::census::enumerate_points(&std, Level::Base)?;
    pts.sort();
    let fact0_standard = fact0_identities(&f, &vec![f.one(); t as usize], f.zero())?.all();
    let (mut recovered, mut replayed, mut alpha_in_base) = (0, 0, true);
    for _ in 0..trials {
        let source = random_record(&f, rng).apply_curve(&std)?;
        let Ok((out, back)) = normalize(&source) else { continue };
        if out != std {
            continue;
        }
        recovered += 1;
        alpha_in_base &= back
            .steps()
            .iter()
            .all(|s| !matches!(s, CoordinateChange::TranslateY(a) if !f.contains(*a)));
        let mut images: Vec<_> = crate::census::enumerate_points(&source, Level::Base)?
            .into_iter()
            .map(|p| back.apply_point(tw, p))
            .collect();
        images.sort();
        if images == pts {
            replayed += 1;
        }
    }
    Ok(RoundTripReport {
        t,
        trials,
        recovered,
        points_replayed: replayed,
        alpha_in_base,
        fact0_standard,
        passed: recovered == trials && replayed == trials && alpha_in_base && fact0_standard,
    })
}
