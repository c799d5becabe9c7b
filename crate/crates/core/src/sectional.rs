//! Sectional curvature of q-sections `{x, qx}`, `{qx, q^2 x}`, `{q^2 x, x}`.
//!
//! For a point of `V2` and a q-independent `x` the three q-section
//! curvatures coincide. With an orthonormal q-base `{x, qx, q^2 x}` and a
//! reference vector `y` with `angle(y, qy) = pi/3`, every admissible `u`
//! with `angle(u, qu) = phi` satisfies
//!
//! ```text
//! mu(u, qu) = (1 - 2 cos phi)/(1 + cos phi) mu(x, qx) + 3 cos phi/(1 + cos phi) mu(y, qy)
//! ```
//!
//! The checks here evaluate both sides numerically, along with each
//! intermediate identity of the derivation.

use serde::Serialize;

use crate::circulant::{angle_with_q, orthonormal_q_base, q_independent, CirculantMetric, MetricAtPoint, TangentVec};
use crate::classify::{v2_residual, DEFAULT_CLASS_TOL};
use crate::curvature::{curvature_from_jet, Curv4};
use crate::error::{GeomError, Result};
use crate::expr::Point;
use crate::sampling::Rng64;

/// Relative threshold below which a section is treated as degenerate.
pub const DEGENERATE_SECTION_TOL: f64 = 1e-12;
/// Smallest admissible `1 + cos phi`.
pub const DEGENERATE_ANGLE_TOL: f64 = 1e-9;
/// Fraction of the natural curvature scale used as the floor of relative
/// residuals.
const SCALE_FLOOR: f64 = 1e-6;

/// A residual together with the tolerance it was judged against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(residual: f64, tol: f64) -> Self {
        Check {
            residual,
            tol,
            pass: residual <= tol,
        }
    }
}

/// `mu(x, y) = R(x, y, x, y) / (g(x,x) g(y,y) - g(x,y)^2)`.
pub fn sectional_curvature(r: &Curv4, g: &MetricAtPoint, x: &TangentVec, y: &TangentVec) -> Result<f64> {
    let (xx, yy, xy) = (g.norm_sq(x), g.norm_sq(y), g.inner(x, y));
    let den = xx * yy - xy * xy;
    if den.is_nan() || den <= DEGENERATE_SECTION_TOL * xx * yy {
        return Err(GeomError::DegenerateSection);
    }
    Ok(r.eval(x, y, x, y) / den)
}

fn spread(vals: &[f64]) -> f64 {
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

fn max_abs(vals: &[f64]) -> f64 {
    vals.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// `spread / max(max |v|, floor)`; zero when all values are equal.
fn relative_spread(vals: &[f64], floor: f64) -> f64 {
    let s = spread(vals);
    if s == 0.0 {
        0.0
    } else {
        s / max_abs(vals).max(floor).max(f64::MIN_POSITIVE)
    }
}

/// Natural magnitude of `R` contracted with four copies of `x`.
fn contraction_scale(r: &Curv4, x: &TangentVec) -> f64 {
    r.max_abs() * x.euclid_norm().powi(4)
}

fn ensure_v2(r: &Curv4) -> Result<()> {
    let residual = v2_residual(r);
    if residual > DEFAULT_CLASS_TOL {
        return Err(GeomError::NotInV2 {
            residual,
            tol: DEFAULT_CLASS_TOL,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QSectionReport {
    pub point: Point,
    pub x: TangentVec,
    pub phi: f64,
    pub cos_phi: f64,
    pub phi_in_range: bool,
    /// `mu(x, qx), mu(qx, q^2 x), mu(q^2 x, x)`.
    pub mu: [f64; 3],
    /// `R(x, qx, x, q^2 x)`.
    pub mixed_term: f64,
    /// `R(x,qx,x,qx), R(x,q^2x,x,q^2x), R(qx,q^2x,qx,q^2x)`.
    pub dopl: [f64; 3],
    /// `R(x,qx,q^2x,x), R(qx,q^2x,x,qx), R(q^2x,x,qx,q^2x)`.
    pub dop2: [f64; 3],
    pub mu_equal: Check,
    pub dopl_equal: Check,
    pub dop2_equal: Check,
}

impl QSectionReport {
    pub fn pass(&self) -> bool {
        self.mu_equal.pass && self.dopl_equal.pass && self.dop2_equal.pass
    }
}

/// q-section curvatures at a point without checking class membership.
///
/// `tol` is applied to the three `mu` values; the two curvature-tensor
/// identities use `dop_tol`.
pub fn q_section_report(
    r: &Curv4,
    g: &MetricAtPoint,
    point: Point,
    x: &TangentVec,
    tol: f64,
    dop_tol: f64,
) -> Result<QSectionReport> {
    if x.is_zero() {
        return Err(GeomError::ZeroVector);
    }
    if !q_independent(x) {
        return Err(GeomError::DependentVector);
    }
    let (qx, q2x) = (x.q(), x.q2());
    let angle = angle_with_q(g, x)?;
    let mu = [
        sectional_curvature(r, g, x, &qx)?,
        sectional_curvature(r, g, &qx, &q2x)?,
        sectional_curvature(r, g, &q2x, x)?,
    ];
    let dopl = [
        r.eval(x, &qx, x, &qx),
        r.eval(x, &q2x, x, &q2x),
        r.eval(&qx, &q2x, &qx, &q2x),
    ];
    let dop2 = [
        r.eval(x, &qx, &q2x, x),
        r.eval(&qx, &q2x, x, &qx),
        r.eval(&q2x, x, &qx, &q2x),
    ];
    let scale = contraction_scale(r, x);
    let xx = g.norm_sq(x);
    let mu_floor = SCALE_FLOOR * scale / (xx * xx);
    Ok(QSectionReport {
        point,
        x: *x,
        phi: angle.phi,
        cos_phi: angle.cos_phi,
        phi_in_range: angle.in_range,
        mu,
        mixed_term: r.eval(x, &qx, x, &q2x),
        dopl,
        dop2,
        mu_equal: Check::new(relative_spread(&mu, mu_floor), tol),
        dopl_equal: Check::new(relative_spread(&dopl, SCALE_FLOOR * scale), dop_tol),
        dop2_equal: Check::new(relative_spread(&dop2, SCALE_FLOOR * scale), dop_tol),
    })
}

/// Equal q-section curvature check: requires the point to be in `V2` and `x` to satisfy the
/// independence condition. The two tensor identities are held to `tol / 10`.
pub fn theorem1_check(m: &CirculantMetric, p: &Point, x: &TangentVec, tol: f64) -> Result<QSectionReport> {
    let jet = m.jet(p)?;
    let (_, r) = curvature_from_jet(&jet);
    ensure_v2(&r)?;
    q_section_report(&r, &jet.g, *p, x, tol, tol / 10.0)
}

/// q-base coefficients `(alpha, beta, gamma)` with `alpha^2 + beta^2 + gamma^2 = 1`
/// and `alpha beta + beta gamma + gamma alpha = cos_phi`. `theta` rotates the
/// component orthogonal to `(1, 1, 1)`, giving different triples with the
/// same angle.
pub fn coeffs_for_cos(cos_phi: f64, theta: f64) -> [f64; 3] {
    let t = ((1.0 + 2.0 * cos_phi) / 3.0).clamp(0.0, 1.0).sqrt();
    let perp = (1.0 - t * t).max(0.0).sqrt();
    let s2 = std::f64::consts::SQRT_2;
    let s6 = 6f64.sqrt();
    let n1 = [1.0 / s2, -1.0 / s2, 0.0];
    let n2 = [1.0 / s6, 1.0 / s6, -2.0 / s6];
    let axis = t / 3f64.sqrt();
    std::array::from_fn(|i| axis + perp * (theta.cos() * n1[i] + theta.sin() * n2[i]))
}

/// The two normalised-coefficient identities: returns
/// `(sum (a^2 - bc)^2 - (1 - c^2), sum_cyc (a^2 - bc)(c^2 - ab) - (c^2 - c))`
/// with `c = ab + bc + ca`, for a triple already normalised to unit length.
pub fn coefficient_identity_residuals([al, be, ga]: [f64; 3]) -> (f64, f64) {
    let c = al * be + be * ga + ga * al;
    let p = al * al - be * ga;
    let q = ga * ga - al * be;
    let r = be * be - al * ga;
    let squares = p * p + q * q + r * r;
    let products = p * q + q * r + p * r;
    (squares - (1.0 - c * c), products - (c * c - c))
}

fn combine(b: &[TangentVec; 3], c: [f64; 3]) -> TangentVec {
    c[0] * b[0] + c[1] * b[1] + c[2] * b[2]
}

/// Residuals of each step leading to the `mu(u, qu)` formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem2Stages {
    /// `qu = gamma x + alpha qx + beta q^2 x`.
    pub qu_image: Check,
    /// `g(u,u) = a^2+b^2+c^2`, `g(u,qu) = ab+bc+ca`.
    pub metric_coefficients: Check,
    /// Both normalised-coefficient identities.
    pub coefficient_identities: Check,
    /// Six-term multilinear expansion of `R(u,qu,u,qu)`.
    pub expansion_six_term: Check,
    /// Two-term form after applying the q-section identities.
    pub expansion_two_term: Check,
    /// `mu(u,qu)` as a ratio of coefficient sums.
    pub mu_ratio: Check,
    /// `mu(u,qu) = mu(x,qx) + 2cos/(1+cos) R(x,qx,x,q^2x)`.
    pub mu_mixed: Check,
    /// The final formula in terms of `mu(x,qx)` and `mu(y,qy)`.
    pub mu_reference: Check,
}

impl Theorem2Stages {
    pub fn all(&self) -> [Check; 8] {
        [
            self.qu_image,
            self.metric_coefficients,
            self.coefficient_identities,
            self.expansion_six_term,
            self.expansion_two_term,
            self.mu_ratio,
            self.mu_mixed,
            self.mu_reference,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem2Report {
    pub point: Point,
    /// Normalised `(alpha, beta, gamma)`.
    pub coeffs: [f64; 3],
    pub base_x: TangentVec,
    pub u: TangentVec,
    pub y: TangentVec,
    pub phi: f64,
    pub cos_phi: f64,
    pub mu_u: f64,
    pub mu_x: f64,
    pub mu_y: f64,
    /// `R(x, qx, x, q^2 x)`.
    pub mixed_term: f64,
    /// `mu(x,qx)` weight `(1 - 2cos)/(1 + cos)` and `mu(y,qy)` weight `3cos/(1 + cos)`.
    pub weights: [f64; 2],
    pub rhs: f64,
    /// Residual of the mixed-term step with `+R(x,qx,x,q^2x)` and with
    /// `+R(x,qx,q^2x,x)`; the smaller one names the reconciling sign.
    pub mixed_sign_residuals: [f64; 2],
    pub stages: Theorem2Stages,
}

impl Theorem2Report {
    pub fn pass(&self) -> bool {
        self.stages.all().iter().all(|c| c.pass)
    }
}

/// Reference coefficients for `y`: `cos angle(y, qy) = 1/2`.
pub const REFERENCE_THETA: f64 = 0.0;

pub fn theorem2_check(m: &CirculantMetric, p: &Point, u_coeffs: [f64; 3], tol: f64) -> Result<Theorem2Report> {
    let jet = m.jet(p)?;
    let (_, r) = curvature_from_jet(&jet);
    ensure_v2(&r)?;
    theorem2_report(&r, &jet.g, *p, u_coeffs, tol)
}

/// Stages of the `mu(u, qu)` formula at a point without checking class membership.
pub fn theorem2_report(
    r: &Curv4,
    g: &MetricAtPoint,
    point: Point,
    u_coeffs: [f64; 3],
    tol: f64,
) -> Result<Theorem2Report> {
    let norm = u_coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(GeomError::ZeroVector);
    }
    let coeffs = u_coeffs.map(|c| c / norm);
    let [al, be, ga] = coeffs;

    let x = orthonormal_q_base(g)?;
    let base = [x, x.q(), x.q2()];
    let u = combine(&base, coeffs);
    if !q_independent(&u) {
        return Err(GeomError::DependentVector);
    }
    let angle = angle_with_q(g, &u)?;
    let c = angle.cos_phi;
    if 1.0 + c < DEGENERATE_ANGLE_TOL {
        return Err(GeomError::DegenerateAngle(1.0 + c));
    }
    let qu = u.q();

    // (i) image of u under q in the q-base
    let qu_coeffs = combine(&base, [ga, al, be]);
    let qu_image = (qu - qu_coeffs).max_abs() / u.max_abs();

    // (ii) metric in coefficients
    let c_alg = al * be + be * ga + ga * al;
    let metric_coefficients = (g.norm_sq(&u) - 1.0).abs().max((g.inner(&u, &qu) - c_alg).abs());

    // (iii) coefficient algebra
    let (id1, id2) = coefficient_identity_residuals(coeffs);
    let coefficient_identities = id1.abs().max(id2.abs());

    // (iv) expansions of R(u, qu, u, qu)
    let (bx, bqx, bq2x) = (&base[0], &base[1], &base[2]);
    let w1 = al * al - be * ga;
    let w2 = ga * ga - al * be;
    let w3 = be * be - al * ga;
    let direct = r.eval(&u, &qu, &u, &qu);
    let r_x_qx = r.eval(bx, bqx, bx, bqx);
    let r_mixed_dop2 = r.eval(bx, bqx, bq2x, bx);
    let six = w1 * w1 * r_x_qx
        + w2 * w2 * r.eval(bx, bq2x, bx, bq2x)
        + w3 * w3 * r.eval(bqx, bq2x, bqx, bq2x)
        + 2.0 * w1 * w2 * r_mixed_dop2
        + 2.0 * w2 * w3 * r.eval(bq2x, bx, bqx, bq2x)
        + 2.0 * w1 * w3 * r.eval(bx, bqx, bqx, bq2x);
    let s1 = w1 * w1 + w2 * w2 + w3 * w3;
    let s2 = w1 * w2 + w2 * w3 + w1 * w3;
    let two = s1 * r_x_qx + 2.0 * s2 * r_mixed_dop2;
    let scale = contraction_scale(r, bx);
    let floor = SCALE_FLOOR * scale;
    let rel = |a: f64, b: f64| relative_spread(&[a, b], floor);

    // (v) sectional curvatures
    let mu_u = sectional_curvature(r, g, &u, &qu)?;
    let mu_x = sectional_curvature(r, g, bx, bqx)?;
    let den = 1.0 - c_alg * c_alg;
    let mu_ratio_value = s1 / den * mu_x + 2.0 * s2 / den * r_mixed_dop2;
    let mixed_term = r.eval(bx, bqx, bx, bq2x);
    let k = 2.0 * c / (1.0 + c);
    let mu_mixed_value = mu_x + k * mixed_term;
    let mixed_sign_residuals = [rel(mu_u, mu_mixed_value), rel(mu_u, mu_x + k * r_mixed_dop2)];

    // (vi) final formula through the pi/3 reference vector
    let y = combine(&base, coeffs_for_cos(0.5, REFERENCE_THETA));
    let mu_y = sectional_curvature(r, g, &y, &y.q())?;
    let weights = [(1.0 - 2.0 * c) / (1.0 + c), 3.0 * c / (1.0 + c)];
    let rhs = weights[0] * mu_x + weights[1] * mu_y;

    let stages = Theorem2Stages {
        qu_image: Check::new(qu_image, tol),
        metric_coefficients: Check::new(metric_coefficients, tol),
        coefficient_identities: Check::new(coefficient_identities, tol),
        expansion_six_term: Check::new(rel(direct, six), tol),
        expansion_two_term: Check::new(rel(direct, two), tol),
        mu_ratio: Check::new(rel(mu_u, mu_ratio_value), tol),
        mu_mixed: Check::new(mixed_sign_residuals[0], tol),
        mu_reference: Check::new(rel(mu_u, rhs), tol),
    };
    Ok(Theorem2Report {
        point,
        coeffs,
        base_x: x,
        u,
        y,
        phi: angle.phi,
        cos_phi: c,
        mu_u,
        mu_x,
        mu_y,
        mixed_term,
        weights,
        rhs,
        mixed_sign_residuals,
        stages,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
    Constant,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub phi: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub point: Point,
    pub samples: usize,
    pub bins: usize,
    /// `(mean phi, mean mu)` of every non-empty bin, ordered by `phi`.
    pub binned: Vec<ScanRow>,
    /// Largest relative `mu` gap between two vectors with the same angle.
    pub equal_angle: Check,
    pub direction: Direction,
    /// Direction implied by the sign of `R(x, qx, x, q^2 x)`.
    pub expected_direction: Direction,
    pub mixed_term: f64,
    pub monotone: bool,
}

pub const MONOTONICITY_BINS: usize = 50;
pub const EQUAL_ANGLE_TOL: f64 = 1e-6;

/// Sample `u` over the unit coefficient sphere, bin `mu(u, qu)` by
/// `phi = angle(u, qu)` and check that equal angles give equal curvature and
/// that the binned curve is monotone.
pub fn monotonicity_scan(m: &CirculantMetric, p: &Point, samples: usize, seed: u64) -> Result<MonotonicityReport> {
    let jet = m.jet(p)?;
    let (_, r) = curvature_from_jet(&jet);
    ensure_v2(&r)?;
    let g = jet.g;
    let x = orthonormal_q_base(&g)?;
    let base = [x, x.q(), x.q2()];
    let mut rng = Rng64::new(seed);

    let mut rows = Vec::with_capacity(samples);
    let mut worst_gap = 0.0f64;
    let floor = SCALE_FLOOR * contraction_scale(&r, &x);
    while rows.len() < samples {
        let c: [f64; 3] = std::array::from_fn(|_| rng.range(-1.0, 1.0));
        let n2: f64 = c.iter().map(|v| v * v).sum();
        if !(1e-6..=1.0).contains(&n2) {
            continue;
        }
        let u = combine(&base, c.map(|v| v / n2.sqrt()));
        if !q_independent(&u) {
            continue;
        }
        let ang = angle_with_q(&g, &u)?;
        if 1.0 + ang.cos_phi < 1e-6 {
            continue;
        }
        let mu = sectional_curvature(&r, &g, &u, &u.q())?;
        // a second vector with the same angle
        let w = combine(
            &base,
            coeffs_for_cos(ang.cos_phi, rng.range(0.0, std::f64::consts::TAU)),
        );
        if q_independent(&w) {
            let mu_w = sectional_curvature(&r, &g, &w, &w.q())?;
            worst_gap = worst_gap.max(relative_spread(&[mu, mu_w], floor));
        }
        rows.push(ScanRow { phi: ang.phi, mu });
    }

    let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
        (lo.min(r.phi), hi.max(r.phi))
    });
    let width = (hi - lo) / MONOTONICITY_BINS as f64;
    let mut acc = vec![(0.0, 0.0, 0usize); MONOTONICITY_BINS];
    for row in &rows {
        let b = if width > 0.0 {
            (((row.phi - lo) / width) as usize).min(MONOTONICITY_BINS - 1)
        } else {
            0
        };
        acc[b].0 += row.phi;
        acc[b].1 += row.mu;
        acc[b].2 += 1;
    }
    let binned: Vec<ScanRow> = acc
        .iter()
        .filter(|b| b.2 > 0)
        .map(|&(sp, sm, n)| ScanRow {
            phi: sp / n as f64,
            mu: sm / n as f64,
        })
        .collect();

    let mu_scale = max_abs(&binned.iter().map(|b| b.mu).collect::<Vec<_>>()).max(floor);
    let step_tol = 1e-9 * mu_scale;
    let (mut up, mut down) = (false, false);
    for w in binned.windows(2) {
        let d = w[1].mu - w[0].mu;
        if d > step_tol {
            up = true;
        } else if d < -step_tol {
            down = true;
        }
    }
    let direction = match (up, down) {
        (true, false) => Direction::Increasing,
        (false, true) => Direction::Decreasing,
        (false, false) => Direction::Constant,
        (true, true) => Direction::Mixed,
    };
    // mu = mu_x + 2c/(1+c) K and c decreases with phi
    let mixed_term = r.eval(&base[0], &base[1], &base[0], &base[2]);
    let expected_direction = if mixed_term.abs() <= floor {
        Direction::Constant
    } else if mixed_term > 0.0 {
        Direction::Decreasing
    } else {
        Direction::Increasing
    };
    Ok(MonotonicityReport {
        point: *p,
        samples,
        bins: MONOTONICITY_BINS,
        binned,
        equal_angle: Check::new(worst_gap, EQUAL_ANGLE_TOL),
        direction,
        expected_direction,
        mixed_term,
        monotone: direction != Direction::Mixed,
    })
}
