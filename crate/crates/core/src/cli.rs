//! Command-line front end. Every subcommand prints one JSON document (or a
//! table rendering of it) and exits 0 when its checks pass, 1 when a check
//! fails and 2 on a bad invocation.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::census::{census, enumerate_points, sample_affine_points, CurvePoint, PointClass, MAX_CENSUS_DEGREE};
use crate::covering::{covering_census_check, Replay};
use crate::curve::{hermitian, normalization_round_trip, normalize, trace_curve, CurveJson, PlaneCurve};
use crate::field::{is_irreducible, tower, Level, MAX_T};
use crate::local::{check_h_identities, default_precision, expand_y_at, residual, verify_derivative_facts};
use crate::orders::{
    dp_orders, dp_orders_at_infinity, frobenius_identity_check, frobenius_orders, frobenius_precision,
    ramification_instances, OrderData,
};
use crate::semigroup::{
    dim_from_semigroup, genus_of, semigroup_classification_check, weierstrass_at_infinity, NumericalSemigroup,
};
use crate::series::lucas_matches_pascal;

pub const SCHEMA: u64 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "maxcurves",
    version,
    about = "Exact checks on maximal curves over binary fields"
)]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Seed for all random sampling
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveName {
    Hermitian,
    Trace,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, value_enum, default_value = "trace")]
    pub curve: CurveName,
    /// q = 2^t
    #[arg(long)]
    pub t: u32,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Affine point as HEX,HEX
    #[arg(long)]
    pub point: String,
    /// 1 for F_{q²}, 2 for F_{q⁴}
    #[arg(long, default_value_t = 1)]
    pub level: u8,
    /// Series length; defaults to 2q + 8
    #[arg(long)]
    pub precision: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moduli and sizes of F_{q²} and F_{q⁴}
    FieldInfo {
        #[arg(long)]
        t: u32,
    },
    /// Count points at a tower level
    Count {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 1)]
        level: u8,
        /// Include the sorted point list
        #[arg(long)]
        points: bool,
    },
    /// Compare the count with the Hasse–Weil maximum
    VerifyMaximal {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 1)]
        level: u8,
    },
    /// Local expansion of y at a point
    Expand {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        point: PointArgs,
    },
    /// (D, P)-orders at a point, or at P0 with --point inf
    Orders {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Frobenius identity and Frobenius orders on sampled points
    FrobeniusCheck {
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Gaps, genus and dimensions of a numerical semigroup
    Semigroup {
        #[arg(long, value_delimiter = ',', required = true)]
        generators: Vec<u64>,
        #[arg(long)]
        bound: Option<u64>,
        /// Degrees d for dim |dP|; defaults to max(generators) and twice that
        #[arg(long, value_delimiter = ',')]
        dims: Vec<u64>,
    },
    /// Normalize a curve JSON file, or round-trip random records
    Normalize {
        #[arg(long)]
        t: u32,
        /// Curve JSON to normalize ("-" for stdin)
        #[arg(long)]
        input: Option<String>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Hermitian double cover of the trace curve
    CoverCheck {
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 1)]
        level: u8,
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Every check for one t
    FullSuite {
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

/// Wrong invocation, as opposed to a failed check.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl<E: std::fmt::Display> From<E> for ConfigError {
    fn from(e: E) -> Self {
        ConfigError(e.to_string())
    }
}

pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

fn outcome(report: Value, passed: bool) -> Result<Outcome, ConfigError> {
    Ok(Outcome { report, passed })
}

fn check_t(t: u32) -> Result<(), ConfigError> {
    if !(1..=MAX_T).contains(&t) {
        return Err(ConfigError(format!("t must lie in [1, {MAX_T}], got {t}")));
    }
    Ok(())
}

fn parse_level(l: u8) -> Result<Level, ConfigError> {
    Level::from_index(l).ok_or_else(|| ConfigError(format!("level must be 1 or 2, got {l}")))
}

fn build_curve(args: &CurveArgs) -> Result<PlaneCurve, ConfigError> {
    check_t(args.t)?;
    Ok(match args.curve {
        CurveName::Hermitian => hermitian(args.t)?,
        CurveName::Trace => trace_curve(args.t)?,
    })
}

fn parse_point(curve: &PlaneCurve, s: &str, level: Level) -> Result<CurvePoint, ConfigError> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(CurvePoint::Infinity { index: 0 });
    }
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| ConfigError(format!("point must be HEX,HEX, got {s:?}")))?;
    let f = curve.field(level);
    let p = CurvePoint::affine(f.parse_hex(x.trim())?, f.parse_hex(y.trim())?, level);
    if !p.lies_on(curve) {
        return Err(ConfigError(format!("({x}, {y}) is not on the curve")));
    }
    Ok(p)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn field_info(t: u32) -> Result<Outcome, ConfigError> {
    check_t(t)?;
    let tw = tower(t)?;
    let levels: Vec<Value> = [Level::Base, Level::Quartic]
        .into_iter()
        .map(|l| {
            let f = tw.field(l);
            json!({
                "level": l.index(),
                "degree": f.degree(),
                "size": f.size(),
                "modulus": format!("{:x}", f.modulus()),
                "irreducible": is_irreducible(f.modulus()),
            })
        })
        .collect();
    let g = tw.base().generator();
    let img = tw.embed(g);
    let passed = levels.iter().all(|l| l["irreducible"] == json!(true)) && tw.restrict(img) == Some(g);
    outcome(
        json!({
            "t": t,
            "q": tw.q(),
            "levels": levels,
            "embedding": { "generator": g.to_hex(), "image": img.to_hex() },
        }),
        passed,
    )
}

fn count(args: &CurveArgs, level: u8, points: bool) -> Result<Outcome, ConfigError> {
    let curve = build_curve(args)?;
    let level = parse_level(level)?;
    let r = census(&curve, level, curve.genus())?;
    let mut v = to_value(&r);
    if points {
        let pts: Vec<Value> = enumerate_points(&curve, level)?.iter().map(|p| p.to_json()).collect();
        v["points"] = Value::Array(pts);
    }
    outcome(v, true)
}

fn verify_maximal(args: &CurveArgs, level: u8) -> Result<Outcome, ConfigError> {
    let curve = build_curve(args)?;
    let r = census(&curve, parse_level(level)?, curve.genus())?;
    let passed = r.maximal;
    outcome(to_value(&r), passed)
}

fn expand(args: &CurveArgs, pa: &PointArgs) -> Result<Outcome, ConfigError> {
    let curve = build_curve(args)?;
    let level = parse_level(pa.level)?;
    let p = parse_point(&curve, &pa.point, level)?;
    let n = pa.precision.unwrap_or(default_precision(curve.q()));
    let y = expand_y_at(&curve, p, n)?;
    let r = residual(&curve, p, &y)?;
    let ok = r.is_zero() && r.precision() == n;
    let mut v = json!({
        "point": p.to_json(),
        "precision": n,
        "series": y.to_string(),
        "residual_zero": ok,
    });
    if curve.family().is_trace() && curve.t() >= 2 && n > curve.q() as usize + 2 {
        v["derivative_facts"] = to_value(&verify_derivative_facts(&curve, p, n)?);
    }
    let passed = ok && v.get("derivative_facts").is_none_or(|d| d["dy_matches"] == json!(true));
    outcome(v, passed)
}

fn orders(args: &CurveArgs, pa: &PointArgs) -> Result<Outcome, ConfigError> {
    let curve = build_curve(args)?;
    let level = parse_level(pa.level)?;
    let p = parse_point(&curve, &pa.point, level)?;
    let d = match p {
        CurvePoint::Infinity { .. } => dp_orders_at_infinity(&curve)?,
        _ => dp_orders(&curve, p, pa.precision.unwrap_or(default_precision(curve.q())))?,
    };
    outcome(d.to_json(), true)
}

fn frobenius_check(t: u32, samples: usize, rng: &mut ChaCha8Rng) -> Result<Outcome, ConfigError> {
    check_t(t)?;
    let curve = trace_curve(t)?;
    match frobenius_orders(&curve, samples, rng) {
        Ok(r) => outcome(to_value(&r), r.nu == vec![0, 1, curve.q()]),
        Err(crate::orders::OrdersError::Evidence(e)) => outcome(json!({ "failed": e }), false),
        Err(e) => Err(e.into()),
    }
}

fn semigroup(generators: &[u64], bound: Option<u64>, dims: &[u64]) -> Result<Outcome, ConfigError> {
    let s = match bound {
        Some(b) => NumericalSemigroup::new(generators, b)?,
        None => NumericalSemigroup::generated(generators)?,
    };
    let max = s.generators().iter().copied().max().unwrap_or(1);
    let ds: Vec<u64> = if dims.is_empty() {
        vec![max, 2 * max]
    } else {
        dims.to_vec()
    };
    let dims: BTreeMap<String, u64> = ds.iter().map(|&d| (d.to_string(), dim_from_semigroup(&s, d))).collect();
    outcome(
        json!({
            "generators": s.generators(),
            "gaps": s.gaps(),
            "genus": genus_of(&s),
            "conductor": s.conductor(),
            "dims": dims,
        }),
        true,
    )
}

fn read_input(path: &str) -> Result<String, ConfigError> {
    if path == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn normalize_cmd(t: u32, input: Option<&str>, samples: usize, rng: &mut ChaCha8Rng) -> Result<Outcome, ConfigError> {
    check_t(t)?;
    match input {
        Some(path) => {
            let json: CurveJson = serde_json::from_str(&read_input(path)?)?;
            let curve = PlaneCurve::from_json(&json)?;
            if curve.t() != t {
                return Err(ConfigError(format!("input curve has q = {}, not 2^{t}", curve.q())));
            }
            match normalize(&curve) {
                Ok((out, rec)) => outcome(
                    json!({ "input": to_value(&json), "record": rec.to_json(), "normalized": to_value(&out.to_json()) }),
                    true,
                ),
                Err(e) => outcome(json!({ "input": to_value(&json), "error": e.to_string() }), false),
            }
        }
        None => {
            let r = normalization_round_trip(t, samples, rng)?;
            let passed = r.passed;
            outcome(to_value(&r), passed)
        }
    }
}

fn cover_check(
    t: u32,
    level: u8,
    exhaustive: bool,
    samples: Option<usize>,
    rng: &mut ChaCha8Rng,
) -> Result<Outcome, ConfigError> {
    check_t(t)?;
    let level = parse_level(level)?;
    let replay = match (exhaustive, samples) {
        (_, Some(n)) => Replay::Sampled(n),
        (true, None) => Replay::Exhaustive,
        // exhaustive when the source census fits, sampled otherwise
        (false, None) if level.degree(t) <= MAX_CENSUS_DEGREE => Replay::Exhaustive,
        (false, None) => Replay::Sampled(50),
    };
    let r = covering_census_check(t, level, replay, rng)?;
    let passed = r.passed;
    outcome(to_value(&r), passed)
}

struct Suite {
    checks: Vec<Value>,
}

impl Suite {
    fn record(&mut self, name: &str, passed: bool, detail: Value) {
        self.checks
            .push(json!({ "name": name, "passed": passed, "detail": detail }));
    }

    fn run(&mut self, name: &str, f: impl FnOnce() -> Result<Outcome, ConfigError>) {
        match f() {
            Ok(o) => self.record(name, o.passed, o.report),
            Err(e) => self.record(name, false, json!({ "error": e.0 })),
        }
    }
}

fn order_sweep(curve: &PlaneCurve, samples: usize, rng: &mut ChaCha8Rng) -> Result<Outcome, ConfigError> {
    let q = curve.q();
    let n = default_precision(q);
    let rational = sample_affine_points(
        curve,
        Level::Base,
        PointClass::Rational,
        samples.min(q as usize * q as usize * q as usize / 2),
        rng,
    )?;
    let non_rational = sample_affine_points(curve, Level::Quartic, PointClass::NonRational, samples, rng)?;
    let mut data: Vec<OrderData> = Vec::new();
    for &p in rational.iter().chain(&non_rational) {
        data.push(dp_orders(curve, p, n)?);
    }
    let at_inf = dp_orders_at_infinity(curve)?;
    let rat_ok = data[..rational.len()].iter().all(|d| d.orders == [0, 1, 2, q + 1]);
    let non_ok = data[rational.len()..].iter().all(|d| d.orders == [0, 1, 2, q]);
    let inf_ok = at_inf.orders == [0, 1, q / 2 + 1, q + 1];
    data.push(at_inf.clone());
    let classification = semigroup_classification_check(curve, &data);
    outcome(
        json!({
            "rational_points": rational.len(),
            "rational_orders_ok": rat_ok,
            "non_rational_points": non_rational.len(),
            "non_rational_orders_ok": non_ok,
            "at_infinity": at_inf.to_json(),
            "classification_ok": classification.passed,
        }),
        rat_ok && non_ok && inf_ok && classification.passed,
    )
}

fn full_suite(t: u32, samples: usize, rng: &mut ChaCha8Rng) -> Result<Outcome, ConfigError> {
    check_t(t)?;
    if t < 2 {
        return Err(ConfigError("full-suite needs t >= 2".into()));
    }
    let q = 1u64 << t;
    let mut s = Suite { checks: Vec::new() };
    s.run("field-info", || field_info(t));
    for curve in [CurveName::Hermitian, CurveName::Trace] {
        let args = CurveArgs { curve, t };
        let name = format!(
            "verify-maximal/{}",
            if curve == CurveName::Trace {
                "trace"
            } else {
                "hermitian"
            }
        );
        s.run(&name, || verify_maximal(&args, 1));
    }
    s.run("weierstrass-semigroup", || {
        let r = weierstrass_at_infinity(&trace_curve(t)?)?;
        let sg = NumericalSemigroup::new(&[q / 2, q + 1], 4 * q * q)?;
        let dims_ok = dim_from_semigroup(&sg, q + 1) == 3 && dim_from_semigroup(&sg, 2 * q + 2) == 8;
        let passed = r.equal && dims_ok;
        outcome(json!({ "report": to_value(&r), "dims_ok": dims_ok }), passed)
    });
    s.run("orders", || order_sweep(&trace_curve(t)?, samples, rng));
    s.run("frobenius", || frobenius_check(t, samples, rng));
    s.run("derivative-facts", || {
        let curve = trace_curve(t)?;
        let n = default_precision(q);
        let pts = sample_affine_points(&curve, Level::Quartic, PointClass::NonRational, samples, rng)?;
        let mut ok = true;
        for p in &pts {
            ok &= verify_derivative_facts(&curve, *p, n)?.all();
        }
        outcome(json!({ "points": pts.len(), "all": ok }), ok)
    });
    s.run("frobenius-identity-hermitian", || {
        let curve = hermitian(t)?;
        let pts = sample_affine_points(&curve, Level::Base, PointClass::Rational, samples, rng)?;
        let mut ok = true;
        for p in &pts {
            ok &= frobenius_identity_check(&curve, *p, frobenius_precision(q))?.vanishes;
        }
        outcome(json!({ "points": pts.len(), "all": ok }), ok)
    });
    s.run("hasse-identities", || {
        let r = check_h_identities(tower(t)?.base(), 1000, rng);
        let lucas = lucas_matches_pascal(64);
        let passed = r.all() && lucas;
        outcome(json!({ "identities": to_value(&r), "lucas_pascal": lucas }), passed)
    });
    s.run("normalize", || normalize_cmd(t, None, samples.max(1), rng));
    s.run("cover-check", || cover_check(t, 1, false, None, rng));
    s.run("ramification-instance", || {
        let r = ramification_instances();
        let passed = r.iter().all(|i| i.solutions.is_empty());
        outcome(to_value(&r), passed)
    });
    let passed = s.checks.iter().all(|c| c["passed"] == json!(true));
    outcome(json!({ "t": t, "checks": s.checks }), passed)
}

fn dispatch(cli: &Cli) -> Result<Outcome, ConfigError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    match &cli.command {
        Command::FieldInfo { t } => field_info(*t),
        Command::Count { curve, level, points } => count(curve, *level, *points),
        Command::VerifyMaximal { curve, level } => verify_maximal(curve, *level),
        Command::Expand { curve, point } => expand(curve, point),
        Command::Orders { curve, point } => orders(curve, point),
        Command::FrobeniusCheck { t, samples } => frobenius_check(*t, *samples, &mut rng),
        Command::Semigroup {
            generators,
            bound,
            dims,
        } => semigroup(generators, *bound, dims),
        Command::Normalize { t, input, samples } => normalize_cmd(*t, input.as_deref(), *samples, &mut rng),
        Command::CoverCheck {
            t,
            level,
            exhaustive,
            samples,
        } => cover_check(*t, *level, *exhaustive, *samples, &mut rng),
        Command::FullSuite { t, samples } => full_suite(*t, *samples, &mut rng),
    }
}

fn render_table(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, val) in m {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                render_table(val, &key, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for (i, val) in a.iter().enumerate() {
                render_table(val, &format!("{prefix}[{i}]"), out);
            }
        }
        other => {
            let s = match other {
                Value::String(s) => s.clone(),
                _ => other.to_string(),
            };
            out.push_str(&format!("{prefix:<40} {s}\n"));
        }
    }
}

/// Parse `args`, run the command and write the report to `out`. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let mut report = o.report;
            if let Value::Object(m) = &mut report {
                m.insert("schema".into(), json!(SCHEMA));
                m.insert("passed".into(), json!(o.passed));
            }
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report).expect("json") + "\n",
                Format::Table => {
                    let mut s = String::new();
                    render_table(&report, "", &mut s);
                    s
                }
            };
            let _ = out.write_all(text.as_bytes());
            if o.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.0);
            2
        }
    }
}
