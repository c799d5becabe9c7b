//! Command pipelines behind the `geomq` binary and their JSON reports.
//!
//! Reports are deterministic: identical spec, command and seed give
//! byte-identical output whatever the execution mode, because per-point work
//! is collected in index order.

use serde::Serialize;
use serde_json::{json, Value};

use crate::circulant::{q_independent, CirculantMetric, TangentVec};
use crate::classify::{class_check, classify_region, ClassReport, DEFAULT_CLASS_TOL};
use crate::curvature::{
    closed_form_components, curvature_from_jet, relative_tensor_deviation, Christoffel, SymmetryResiduals, COMPONENTS,
};
use crate::error::{GeomError, Result};
use crate::exec::{map_indexed, Execution};
use crate::expr::Point;
use crate::sampling::{sample_points, Rng64, Sampler, RNG_ALGORITHM};
use crate::sectional::{
    coefficient_identity_residuals, coeffs_for_cos, monotonicity_scan, q_section_report, sectional_curvature,
    theorem2_report, Check, QSectionReport, Theorem2Report,
};
use crate::spec::ManifoldSpec;

pub const SCHEMA_VERSION: u32 = 1;

pub const THEOREM1_TOL: f64 = 1e-8;
pub const Q_SECTION_IDENTITY_TOL: f64 = 1e-9;
pub const THEOREM2_TOL: f64 = 1e-6;
pub const SPECIAL_CASE_TOL: f64 = 1e-8;
pub const COEFFICIENT_ALGEBRA_TOL: f64 = 1e-12;
pub const TENSOR_IDENTITY_TOL: f64 = 1e-9;
pub const INVERSE_TOL: f64 = 1e-12;
pub const CLOSED_FORM_R1212_TOL: f64 = 1e-8;
pub const EXAMPLE_POINT_TOL: f64 = 1e-10;

/// The point used by `verify-example`.
pub const EXAMPLE_POINT: Point = Point::new(1.0, -1.0, -0.5);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum What {
    G,
    Gamma,
    Riemann,
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Eval {
        point: Point,
        what: What,
    },
    Classify {
        sampler: Sampler,
        tol: f64,
    },
    Sectional {
        point: Point,
        vector: TangentVec,
        with: Option<TangentVec>,
    },
    VerifyExample,
    Theorems {
        trials: usize,
        seed: u64,
    },
}

impl Command {
    /// Canonical command line (without output options).
    pub fn echo(&self, spec_name: &str) -> String {
        let triple = |c: [f64; 3]| format!("{},{},{}", c[0], c[1], c[2]);
        match self {
            Command::Eval { point, what } => {
                let w = match what {
                    What::G => "g",
                    What::Gamma => "gamma",
                    What::Riemann => "riemann",
                    What::All => "all",
                };
                format!("eval --spec {spec_name} --point {} --what {w}", triple(point.0))
            }
            Command::Classify { sampler, tol } => match sampler {
                Sampler::Random { count, seed } => {
                    format!("classify --spec {spec_name} --samples {count} --seed {seed} --tol {tol:e}")
                }
                Sampler::Grid { n } => {
                    format!(
                        "classify --spec {spec_name} --grid {}x{}x{} --tol {tol:e}",
                        n[0], n[1], n[2]
                    )
                }
            },
            Command::Sectional { point, vector, with } => {
                let mut s = format!(
                    "sectional --spec {spec_name} --point {} --vector {}",
                    triple(point.0),
                    triple(vector.0)
                );
                if let Some(w) = with {
                    s.push_str(&format!(" --with {}", triple(w.0)));
                }
                s
            }
            Command::VerifyExample => "verify-example".to_string(),
            Command::Theorems { trials, seed } => {
                format!("theorems --spec {spec_name} --trials {trials} --seed {seed}")
            }
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Command::Classify {
                sampler: Sampler::Random { seed, .. },
                ..
            }
            | Command::Theorems { seed, .. } => Some(*seed),
            Command::VerifyExample => Some(VERIFY_SEED),
            _ => None,
        }
    }
}

const VERIFY_SEED: u64 = 0;
const VERIFY_SAMPLES: usize = 200;

/// A named pass/fail judgement with its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl NamedCheck {
    /// Passes when `value <= tol`.
    pub fn at_most(name: impl Into<String>, value: f64, tol: f64) -> Self {
        NamedCheck {
            name: name.into(),
            value,
            tol,
            pass: value <= tol,
        }
    }

    /// Passes when `value > tol`.
    pub fn above(name: impl Into<String>, value: f64, tol: f64) -> Self {
        NamedCheck {
            name: name.into(),
            value,
            tol,
            pass: value > tol,
        }
    }

    fn from_check(name: impl Into<String>, c: Check) -> Self {
        NamedCheck {
            name: name.into(),
            value: c.residual,
            tol: c.tol,
            pass: c.pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub failed: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub spec_name: String,
    pub spec_hash: String,
    pub spec: ManifoldSpec,
    pub seed: Option<u64>,
    pub rng: &'static str,
    pub results: Value,
    pub checks: Vec<NamedCheck>,
    pub verdict: Verdict,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.verdict.pass {
            0
        } else {
            1
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serialisable")
}

/// Execute `cmd` against `spec`. Domain and usage problems are errors;
/// mathematical failures are reported through the verdict.
pub fn run(cmd: &Command, spec_name: &str, spec: &ManifoldSpec, exec: Execution) -> Result<RunReport> {
    let (spec_name, spec) = match cmd {
        Command::VerifyExample => ("paper-example".to_string(), ManifoldSpec::paper_example()),
        _ => (spec_name.to_string(), spec.clone()),
    };
    let m = spec.metric()?;
    let mut checks = Vec::new();
    let results = match cmd {
        Command::Eval { point, what } => run_eval(&m, point, *what, &mut checks)?,
        Command::Classify { sampler, tol } => run_classify(&m, &spec, sampler, *tol, exec, &mut checks)?,
        Command::Sectional { point, vector, with } => run_sectional(&m, point, vector, with.as_ref(), &mut checks)?,
        Command::VerifyExample => run_verify_example(&m, &spec, exec, &mut checks)?,
        Command::Theorems { trials, seed } => run_theorems(&m, &spec, *trials, *seed, exec, &mut checks)?,
    };
    let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
    Ok(RunReport {
        schema: SCHEMA_VERSION,
        command: cmd.echo(&spec_name),
        spec_hash: spec.hash(),
        spec_name,
        spec,
        seed: cmd.seed(),
        rng: RNG_ALGORITHM,
        results,
        verdict: Verdict {
            pass: failed.is_empty(),
            failed,
        },
        checks,
    })
}

/// `max |G G^-1 - I|`.
pub fn inverse_residual(g: &crate::circulant::MetricAtPoint) -> f64 {
    let (gm, gi) = (g.matrix(), g.inverse());
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let v: f64 = (0..3).map(|k| gm[i][k] * gi[k][j]).sum();
            worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}

fn christoffel_asymmetry(c: &Christoffel) -> f64 {
    let mut worst = 0.0f64;
    for h in 0..3 {
        for i in 0..3 {
            for k in 0..3 {
                worst = worst.max((c.gamma[h][i][k] - c.gamma[h][k][i]).abs());
            }
        }
    }
    worst
}

fn identity_checks(prefix: &str, s: &SymmetryResiduals, checks: &mut Vec<NamedCheck>) {
    checks.push(NamedCheck::at_most(
        format!("{prefix}antisymmetry_first_pair"),
        s.antisym_first,
        TENSOR_IDENTITY_TOL,
    ));
    checks.push(NamedCheck::at_most(
        format!("{prefix}antisymmetry_last_pair"),
        s.antisym_last,
        TENSOR_IDENTITY_TOL,
    ));
    checks.push(NamedCheck::at_most(
        format!("{prefix}pair_symmetry"),
        s.pair_symmetry,
        TENSOR_IDENTITY_TOL,
    ));
    checks.push(NamedCheck::at_most(
        format!("{prefix}first_bianchi"),
        s.first_bianchi,
        TENSOR_IDENTITY_TOL,
    ));
}

fn run_eval(m: &CirculantMetric, p: &Point, what: What, checks: &mut Vec<NamedCheck>) -> Result<Value> {
    let jet = m.jet(p)?;
    let mut out = serde_json::Map::new();
    out.insert("point".into(), to_value(p));
    if matches!(what, What::G | What::All) {
        let g = jet.g;
        let inv = inverse_residual(&g);
        checks.push(NamedCheck::at_most("g_times_inverse_is_identity", inv, INVERSE_TOL));
        out.insert(
            "metric".into(),
            json!({ "a": g.a, "b": g.b, "d": g.d, "g": g.matrix(), "g_inverse": g.inverse() }),
        );
    }
    if matches!(what, What::Gamma | What::All) {
        let c = crate::curvature::christoffel_at(m, p)?;
        checks.push(NamedCheck::at_most(
            "christoffel_symmetric",
            christoffel_asymmetry(&c),
            0.0,
        ));
        out.insert(
            "christoffel".into(),
            json!({ "index_order": "gamma[h][i][k]", "gamma": c.gamma }),
        );
    }
    if matches!(what, What::Riemann | What::All) {
        let (r13, r4) = curvature_from_jet(&jet);
        let ids = r4.identity_residuals();
        identity_checks("riemann_", &ids, checks);
        let closed = closed_form_components(m, p)?;
        let components: serde_json::Map<String, Value> = COMPONENTS
            .iter()
            .zip(r4.components())
            .map(|((name, _), v)| (name.to_string(), json!(v)))
            .collect();
        out.insert(
            "riemann".into(),
            json!({
                "index_order": "r4[i][j][k][u] = R(e_i, e_j, e_k, e_u); r13[h][i][j][k] = R^h_ijk",
                "components": components,
                "r4": r4.r,
                "r13": r13.r,
                "identity_residuals": ids,
                "closed_form": closed,
            }),
        );
        let class = class_check(m, p, DEFAULT_CLASS_TOL)?;
        checks.push(NamedCheck::at_most(
            "class_flags_consistent",
            if class.consistent() { 0.0 } else { 1.0 },
            0.0,
        ));
        out.insert("class".into(), to_value(&class));
    }
    Ok(Value::Object(out))
}

fn run_classify(
    m: &CirculantMetric,
    spec: &ManifoldSpec,
    sampler: &Sampler,
    tol: f64,
    exec: Execution,
    checks: &mut Vec<NamedCheck>,
) -> Result<Value> {
    let rep = classify_region(m, sampler, &spec.sample_box, tol, exec)?;
    checks.push(NamedCheck::at_most(
        "inconsistent_points",
        rep.counts.inconsistent as f64,
        0.0,
    ));
    checks.push(NamedCheck::at_most(
        "v2_formulation_gap",
        rep.worst.v2_formulation_gap,
        1e-12,
    ));
    let fractions = json!({
        "parallel": rep.fraction(rep.counts.parallel),
        "v1": rep.fraction(rep.counts.v1),
        "v2": rep.fraction(rep.counts.v2),
        "flat": rep.fraction(rep.counts.flat),
    });
    let mut v = to_value(&rep);
    v["fractions"] = fractions;
    Ok(v)
}

fn run_sectional(
    m: &CirculantMetric,
    p: &Point,
    x: &TangentVec,
    with: Option<&TangentVec>,
    checks: &mut Vec<NamedCheck>,
) -> Result<Value> {
    let jet = m.jet(p)?;
    let (_, r) = curvature_from_jet(&jet);
    let class = class_check(m, p, DEFAULT_CLASS_TOL)?;
    let sections = q_section_report(&r, &jet.g, *p, x, THEOREM1_TOL, Q_SECTION_IDENTITY_TOL)?;
    if class.v2 {
        checks.push(NamedCheck::from_check("theorem1_mu_equal", sections.mu_equal));
        checks.push(NamedCheck::from_check("theorem1_dopl", sections.dopl_equal));
        checks.push(NamedCheck::from_check("theorem1_dop2", sections.dop2_equal));
    }
    let pair = match with {
        Some(w) => Some(json!({ "y": w, "mu": sectional_curvature(&r, &jet.g, x, w)? })),
        None => None,
    };
    Ok(json!({
        "point": p,
        "in_v2": class.v2,
        "v2_residual": class.residuals.v2,
        "v2_tol": class.tol,
        "theorem1_applies": class.v2,
        "q_sections": sections,
        "pair": pair,
    }))
}

fn run_verify_example(
    m: &CirculantMetric,
    spec: &ManifoldSpec,
    exec: Execution,
    checks: &mut Vec<NamedCheck>,
) -> Result<Value> {
    let p = EXAMPLE_POINT;
    let jet = m.jet(&p)?;
    let (_, r4) = curvature_from_jet(&jet);
    let r1212 = r4.get([0, 1, 0, 1]);
    checks.push(NamedCheck::at_most(
        "r1212_at_example_point_equals_minus_one_ninth",
        (r1212 + 1.0 / 9.0).abs(),
        EXAMPLE_POINT_TOL,
    ));

    let sample = sample_points(
        m,
        &Sampler::Random {
            count: VERIFY_SAMPLES,
            seed: VERIFY_SEED,
        },
        &spec.sample_box,
    )?;
    let rows: Vec<Result<(f64, f64, ClassReport)>> = map_indexed(sample.points.len(), exec, |i| {
        let q = sample.points[i];
        let (_, r) = curvature_from_jet(&m.jet(&q)?);
        let got = r.get([0, 1, 0, 1]);
        let want = example_r1212(&q);
        Ok((
            (got - want).abs() / want.abs(),
            got,
            class_check(m, &q, DEFAULT_CLASS_TOL)?,
        ))
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let worst_closed = rows.iter().fold(0.0f64, |w, r| w.max(r.0));
    let min_abs_r1212 = rows.iter().fold(f64::INFINITY, |w, r| w.min(r.1.abs()));
    let worst_system = rows.iter().fold(0.0f64, |w, r| w.max(r.2.residuals.component_system));
    let worst_v2 = rows.iter().fold(0.0f64, |w, r| w.max(r.2.residuals.v2));
    let v2_count = rows.iter().filter(|r| r.2.v2).count();
    let parallel_count = rows.iter().filter(|r| r.2.parallel).count();
    checks.push(NamedCheck::at_most(
        "r1212_closed_expression_max_rel_dev",
        worst_closed,
        CLOSED_FORM_R1212_TOL,
    ));
    checks.push(NamedCheck::above("min_abs_r1212_not_flat", min_abs_r1212, 1e-3));

    let class = class_check(m, &p, DEFAULT_CLASS_TOL)?;
    checks.push(NamedCheck::at_most(
        "v2_component_system_residual",
        worst_system,
        DEFAULT_CLASS_TOL,
    ));
    checks.push(NamedCheck::at_most("v2_tensor_residual", worst_v2, DEFAULT_CLASS_TOL));
    checks.push(NamedCheck::above(
        "parallel_residual_nonzero",
        class.residuals.parallel,
        DEFAULT_CLASS_TOL,
    ));
    let closed = closed_form_components(m, &p)?;
    let components: serde_json::Map<String, Value> = COMPONENTS
        .iter()
        .zip(r4.components())
        .map(|((name, _), v)| (name.to_string(), json!(v)))
        .collect();
    Ok(json!({
        "point": p,
        "r1212": r1212,
        "components": components,
        "class_at_point": class,
        "closed_form_at_point": closed,
        "samples": sample.points.len(),
        "sample_counts": { "v2": v2_count, "parallel": parallel_count },
        "r1212_closed_expression_max_rel_dev": worst_closed,
        "min_abs_r1212": min_abs_r1212,
        "max_component_system_residual": worst_system,
        "max_v2_residual": worst_v2,
    }))
}

/// `(2X1 + X2 + X3) / ((X2 + X3)(6X1 + 2X2 + 2X3))`.
pub fn example_r1212(p: &Point) -> f64 {
    let [x1, x2, x3] = p.0;
    (2.0 * x1 + x2 + x3) / ((x2 + x3) * (6.0 * x1 + 2.0 * x2 + 2.0 * x3))
}

/// Inputs drawn for one theorem trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialDraw {
    pub point: Point,
    pub x: TangentVec,
    pub coeffs: [f64; 3],
}

const TRIAL_ATTEMPTS: usize = 100_000;

/// Draw an admitted point, a q-independent vector and a unit coefficient
/// triple with `alpha + beta + gamma` away from zero.
pub fn draw_trial(m: &CirculantMetric, spec: &ManifoldSpec, seed: u64, index: u64) -> Result<TrialDraw> {
    let mut rng = Rng64::for_trial(seed, index);
    let mut attempts = 0;
    let point = loop {
        attempts += 1;
        if attempts > TRIAL_ATTEMPTS {
            return Err(GeomError::EmptySample { attempts });
        }
        let p = rng.point_in(&spec.sample_box);
        if m.admits(&p, crate::sampling::DOMAIN_MARGIN) {
            break p;
        }
    };
    let unit = |rng: &mut Rng64| -> [f64; 3] { std::array::from_fn(|_| rng.range(-1.0, 1.0)) };
    let x = loop {
        let v = TangentVec(unit(&mut rng));
        let s: f64 = v.0.iter().sum();
        if q_independent(&v) && s.abs() > 1e-3 && v.euclid_norm() > 1e-3 {
            break v;
        }
    };
    let coeffs = loop {
        let c = unit(&mut rng);
        let n = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(1e-3..=1.0).contains(&n) {
            continue;
        }
        let c = c.map(|v| v / n);
        // keep 1 + cos(phi) = 3 (a+b+c)^2 / 2 away from zero
        if (c[0] + c[1] + c[2]).abs() > 1e-3 {
            break c;
        }
    };
    Ok(TrialDraw { point, x, coeffs })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    pub index: usize,
    pub draw: TrialDraw,
    pub in_v2: bool,
    pub v2_residual: f64,
    pub theorem1: QSectionReport,
    pub theorem2: Theorem2Report,
}

pub fn run_trial(m: &CirculantMetric, draw: &TrialDraw, index: usize) -> Result<TrialResult> {
    let jet = m.jet(&draw.point)?;
    let (_, r) = curvature_from_jet(&jet);
    let v2_residual = crate::classify::v2_residual(&r);
    Ok(TrialResult {
        index,
        draw: *draw,
        in_v2: v2_residual <= DEFAULT_CLASS_TOL,
        v2_residual,
        theorem1: q_section_report(&r, &jet.g, draw.point, &draw.x, THEOREM1_TOL, Q_SECTION_IDENTITY_TOL)?,
        theorem2: theorem2_report(&r, &jet.g, draw.point, draw.coeffs, THEOREM2_TOL)?,
    })
}

fn run_theorems(
    m: &CirculantMetric,
    spec: &ManifoldSpec,
    trials: usize,
    seed: u64,
    exec: Execution,
    checks: &mut Vec<NamedCheck>,
) -> Result<Value> {
    if trials == 0 {
        return Err(GeomError::InvalidSpec("--trials must be positive".into()));
    }
    let results = map_indexed(trials, exec, |i| {
        let draw = draw_trial(m, spec, seed, i as u64)?;
        run_trial(m, &draw, i)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let max = |f: &dyn Fn(&TrialResult) -> f64| results.iter().fold(0.0f64, |w, t| w.max(f(t)));
    let not_in_v2 = results.iter().filter(|t| !t.in_v2).count();
    checks.push(NamedCheck::at_most("trials_outside_v2", not_in_v2 as f64, 0.0));
    checks.push(NamedCheck::at_most(
        "theorem1_mu_equal",
        max(&|t| t.theorem1.mu_equal.residual),
        THEOREM1_TOL,
    ));
    checks.push(NamedCheck::at_most(
        "theorem1_dopl",
        max(&|t| t.theorem1.dopl_equal.residual),
        Q_SECTION_IDENTITY_TOL,
    ));
    checks.push(NamedCheck::at_most(
        "theorem1_dop2",
        max(&|t| t.theorem1.dop2_equal.residual),
        Q_SECTION_IDENTITY_TOL,
    ));
    let stage_names = [
        "qu_image",
        "metric_coefficients",
        "coefficient_identities",
        "expansion_six_term",
        "expansion_two_term",
        "mu_ratio",
        "mu_mixed",
        "mu_reference",
    ];
    for (k, name) in stage_names.iter().enumerate() {
        checks.push(NamedCheck::at_most(
            format!("theorem2_{name}"),
            max(&|t| t.theorem2.stages.all()[k].residual),
            THEOREM2_TOL,
        ));
    }

    // special angles at the first trial point
    let first = results[0].draw.point;
    let jet = m.jet(&first)?;
    let (_, r) = curvature_from_jet(&jet);
    let half = theorem2_report(&r, &jet.g, first, coeffs_for_cos(0.5, 1.0), THEOREM2_TOL)?;
    let right = theorem2_report(&r, &jet.g, first, coeffs_for_cos(0.0, 1.0), THEOREM2_TOL)?;
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    let half_dev = if half.mu_u == half.mu_y {
        0.0
    } else {
        rel(half.mu_u, half.mu_y)
    };
    let right_dev = if right.mu_u == right.mu_x {
        0.0
    } else {
        rel(right.mu_u, right.mu_x)
    };
    checks.push(NamedCheck::at_most(
        "cos_half_reduces_to_mu_y",
        half_dev,
        SPECIAL_CASE_TOL,
    ));
    checks.push(NamedCheck::at_most(
        "cos_zero_reduces_to_mu_x",
        right_dev,
        SPECIAL_CASE_TOL,
    ));

    // metric-free coefficient algebra
    let mut rng = Rng64::new(seed);
    let mut worst_alg = 0.0f64;
    for _ in 0..1000 {
        let c: [f64; 3] = std::array::from_fn(|_| rng.range(-1.0, 1.0));
        let n = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        let (a, b) = coefficient_identity_residuals(c.map(|v| v / n));
        worst_alg = worst_alg.max(a.abs()).max(b.abs());
    }
    checks.push(NamedCheck::at_most(
        "coefficient_algebra",
        worst_alg,
        COEFFICIENT_ALGEBRA_TOL,
    ));

    let monotonicity = match monotonicity_scan(m, &first, 1000, seed) {
        Ok(rep) => {
            checks.push(NamedCheck::from_check("equal_angle_equal_curvature", rep.equal_angle));
            checks.push(NamedCheck::at_most(
                "monotone_in_angle",
                if rep.monotone { 0.0 } else { 1.0 },
                0.0,
            ));
            to_value(&rep)
        }
        Err(GeomError::NotInV2 { residual, tol }) => {
            json!({ "skipped": "not in V2", "v2_residual": residual, "tol": tol })
        }
        Err(e) => return Err(e),
    };

    Ok(json!({
        "trials": results,
        "special_cases": { "cos_half": half, "cos_zero": right },
        "coefficient_algebra_max_residual": worst_alg,
        "monotonicity": monotonicity,
    }))
}

/// Relative deviation between analytic and finite-difference curvature at
/// `p`, relative to `max |R|` (floor `1e-12`).
pub fn oracle_deviation(m: &CirculantMetric, p: &Point, h: f64) -> Result<f64> {
    let (_, analytic) = crate::curvature::curvature_at(m, p)?;
    let fd = crate::curvature::fd_curvature_oracle(m, p, h)?;
    Ok(relative_tensor_deviation(&analytic, &fd, 1e-12))
}
