//! The circulant metric `g = circ(A, B, B)`, its inverse, and the circulant
//! affinor `q` with `q^3 = id`.
//!
//! `q` acts on coordinates as the cyclic shift `(x1, x2, x3) -> (x3, x1, x2)`,
//! so it maps `e1 -> e2 -> e3 -> e1`. Because `g` is circulant it commutes
//! with this shift, which gives `g(qx, qy) = g(x, y)`.

use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::expr::{Axis, Expr, Point};

/// Relative tolerance for the cubic independence test and q-fixed vectors.
pub const INDEPENDENCE_TOL: f64 = 1e-12;

/// A pair of scalar fields `(A, B)` together with the strict inequalities
/// (`expr > 0`) that carve out the coordinate neighbourhood.
///
/// First and second partials of `A` and `B` are derived once at
/// construction.
#[derive(Debug, Clone)]
pub struct CirculantMetric {
    a: Expr,
    b: Expr,
    constraints: Vec<Expr>,
    da: [Expr; 3],
    db: [Expr; 3],
    dda: [[Expr; 3]; 3],
    ddb: [[Expr; 3]; 3],
}

/// Values and partial derivatives of `A` and `B` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricJet {
    pub g: MetricAtPoint,
    pub da: [f64; 3],
    pub db: [f64; 3],
    pub dda: [[f64; 3]; 3],
    pub ddb: [[f64; 3]; 3],
}

fn first_partials(e: &Expr) -> [Expr; 3] {
    Axis::ALL.map(|ax| e.diff(ax))
}

fn second_partials(first: &[Expr; 3]) -> [[Expr; 3]; 3] {
    // differentiate along the smaller axis second so both orders share a tree
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
            first[lo].diff(Axis::from_index(hi))
        })
    })
}

fn eval3(es: &[Expr; 3], p: &Point) -> Result<[f64; 3]> {
    Ok([es[0].eval(p)?, es[1].eval(p)?, es[2].eval(p)?])
}

impl CirculantMetric {
    pub fn new(a: Expr, b: Expr, constraints: Vec<Expr>) -> Self {
        let da = first_partials(&a);
        let db = first_partials(&b);
        let dda = second_partials(&da);
        let ddb = second_partials(&db);
        CirculantMetric {
            a,
            b,
            constraints,
            da,
            db,
            dda,
            ddb,
        }
    }

    /// Constant coefficients; flat.
    pub fn constant(a: f64, b: f64) -> Self {
        Self::new(Expr::Const(a), Expr::Const(b), Vec::new())
    }

    pub fn a(&self) -> &Expr {
        &self.a
    }

    pub fn b(&self) -> &Expr {
        &self.b
    }

    pub fn constraints(&self) -> &[Expr] {
        &self.constraints
    }

    /// Exact symbolic partial `A_i`.
    pub fn a_partial(&self, axis: Axis) -> &Expr {
        &self.da[axis.index()]
    }

    pub fn b_partial(&self, axis: Axis) -> &Expr {
        &self.db[axis.index()]
    }

    /// True when every constraint exceeds `margin` and `A - B`, `B` do too.
    pub fn admits(&self, p: &Point, margin: f64) -> bool {
        self.check_domain(p, margin).is_ok()
    }

    fn check_domain(&self, p: &Point, margin: f64) -> Result<MetricAtPoint> {
        let violation = |reason: String| GeomError::DomainViolation { point: p.0, reason };
        if !p.is_finite() {
            return Err(violation("non-finite coordinate".into()));
        }
        for c in &self.constraints {
            let v = c.eval(p).map_err(|e| violation(e.to_string()))?;
            if v <= margin {
                return Err(violation(format!("constraint `{c} > 0` fails (value {v})")));
            }
        }
        let a = self.a.eval(p).map_err(|e| violation(e.to_string()))?;
        let b = self.b.eval(p).map_err(|e| violation(e.to_string()))?;
        if b <= margin {
            return Err(violation(format!("B = {b} is not positive")));
        }
        if a - b <= margin {
            return Err(violation(format!("A = {a} does not exceed B = {b}")));
        }
        MetricAtPoint::new(a, b).map_err(|e| violation(e.to_string()))
    }

    /// Evaluate `(A, B, D)` at `p`.
    pub fn metric_at(&self, p: &Point) -> Result<MetricAtPoint> {
        self.check_domain(p, 0.0)
    }

    /// Values with first and second partials at `p`.
    pub fn jet(&self, p: &Point) -> Result<MetricJet> {
        let g = self.metric_at(p)?;
        let mut dda = [[0.0; 3]; 3];
        let mut ddb = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                dda[i][j] = self.dda[i][j].eval(p)?;
                ddb[i][j] = self.ddb[i][j].eval(p)?;
            }
        }
        Ok(MetricJet {
            g,
            da: eval3(&self.da, p)?,
            db: eval3(&self.db, p)?,
            dda,
            ddb,
        })
    }
}

impl MetricJet {
    /// `d_c g_ij`.
    pub fn dg(&self, c: usize, i: usize, j: usize) -> f64 {
        if i == j {
            self.da[c]
        } else {
            self.db[c]
        }
    }

    /// `d_c d_e g_ij`.
    pub fn ddg(&self, c: usize, e: usize, i: usize, j: usize) -> f64 {
        if i == j {
            self.dda[c][e]
        } else {
            self.ddb[c][e]
        }
    }
}

/// The metric evaluated at a point: `a = A(p)`, `b = B(p)` and
/// `d = (a - b)(a + 2b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricAtPoint {
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

impl MetricAtPoint {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b <= 0.0 || a <= b {
            return Err(GeomError::DomainViolation {
                point: [f64::NAN; 3],
                reason: format!("need A > B > 0, got A = {a}, B = {b}"),
            });
        }
        Ok(MetricAtPoint {
            a,
            b,
            d: (a - b) * (a + 2.0 * b),
        })
    }

    /// `g_ij`.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| if i == j { self.a } else { self.b }))
    }

    /// `g^ij = circ(a + b, -b, -b) / d`.
    pub fn inverse(&self) -> [[f64; 3]; 3] {
        let diag = (self.a + self.b) / self.d;
        let off = -self.b / self.d;
        std::array::from_fn(|i| std::array::from_fn(|j| if i == j { diag } else { off }))
    }

    pub fn inner(&self, u: &TangentVec, v: &TangentVec) -> f64 {
        let (u, v) = (u.0, v.0);
        let su: f64 = u.iter().sum();
        let sv: f64 = v.iter().sum();
        let dot: f64 = u.iter().zip(v).map(|(x, y)| x * y).sum();
        // a * dot + b * (su * sv - dot)
        (self.a - self.b) * dot + self.b * su * sv
    }

    pub fn norm_sq(&self, u: &TangentVec) -> f64 {
        self.inner(u, u)
    }

    /// Lower an index: `v_j = g_ij v^i`.
    pub fn lower(&self, v: &TangentVec) -> [f64; 3] {
        let s: f64 = v.0.iter().sum();
        v.0.map(|c| (self.a - self.b) * c + self.b * s)
    }
}

/// Tangent vector components in the coordinate basis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, serde::Deserialize)]
pub struct TangentVec(pub [f64; 3]);

impl TangentVec {
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        TangentVec([x1, x2, x3])
    }

    pub fn basis(i: usize) -> Self {
        let mut c = [0.0; 3];
        c[i] = 1.0;
        TangentVec(c)
    }

    /// `qx = (x3, x1, x2)`.
    pub fn q(&self) -> TangentVec {
        apply_q(self)
    }

    /// `q^2 x = (x2, x3, x1)`.
    pub fn q2(&self) -> TangentVec {
        let [x1, x2, x3] = self.0;
        TangentVec([x2, x3, x1])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn euclid_norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

impl Add for TangentVec {
    type Output = TangentVec;
    fn add(self, o: TangentVec) -> TangentVec {
        TangentVec(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for TangentVec {
    type Output = TangentVec;
    fn sub(self, o: TangentVec) -> TangentVec {
        TangentVec(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for TangentVec {
    type Output = TangentVec;
    fn neg(self) -> TangentVec {
        TangentVec(self.0.map(|c| -c))
    }
}

impl Mul<TangentVec> for f64 {
    type Output = TangentVec;
    fn mul(self, v: TangentVec) -> TangentVec {
        TangentVec(v.0.map(|c| self * c))
    }
}

/// The matrix of `q` acting on column vectors: `(qx)^a = Q[a][b] x^b`.
pub const Q_MATRIX: [[i32; 3]; 3] = [[0, 0, 1], [1, 0, 0], [0, 1, 0]];

/// Integer matrix product, used to check `q^3 = E` exactly.
pub fn int_matmul(l: &[[i32; 3]; 3], r: &[[i32; 3]; 3]) -> [[i32; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| l[i][k] * r[k][j]).sum()))
}

pub fn apply_q(x: &TangentVec) -> TangentVec {
    let [x1, x2, x3] = x.0;
    TangentVec([x3, x1, x2])
}

/// True iff `x, qx, q^2 x` are linearly independent, i.e.
/// `3 x1 x2 x3 != x1^3 + x2^3 + x3^3` (up to [`INDEPENDENCE_TOL`] relative).
pub fn q_independent(x: &TangentVec) -> bool {
    let [x1, x2, x3] = x.0;
    let cubes = x1 * x1 * x1 + x2 * x2 * x2 + x3 * x3 * x3;
    let triple = 3.0 * x1 * x2 * x3;
    let scale = x1.abs().powi(3) + x2.abs().powi(3) + x3.abs().powi(3) + triple.abs();
    (cubes - triple).abs() > INDEPENDENCE_TOL * scale
}

/// Angle between `x` and `qx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QAngle {
    pub phi: f64,
    pub cos_phi: f64,
    /// `phi` lies in the open interval `(0, 2pi/3)`. False is a range warning.
    pub in_range: bool,
}

pub fn angle_with_q(g: &MetricAtPoint, x: &TangentVec) -> Result<QAngle> {
    let xx = g.norm_sq(x);
    if x.is_zero() || xx <= 0.0 {
        return Err(GeomError::ZeroVector);
    }
    let qx = x.q();
    let cos_phi = (g.inner(x, &qx) / xx).clamp(-1.0, 1.0);
    debug_assert!({
        let full = g.inner(x, &qx) / (xx * g.norm_sq(&qx)).sqrt();
        (full.clamp(-1.0, 1.0) - cos_phi).abs() <= 1e-12
    });
    let phi = cos_phi.acos();
    let in_range = phi > 0.0 && phi < 2.0 * std::f64::consts::FRAC_PI_3;
    Ok(QAngle { phi, cos_phi, in_range })
}

const Q_BASE_SEED: u64 = 0x6765_6f6d_715f_6261;
const Q_BASE_STARTS: usize = 16;
const Q_BASE_ITERS: usize = 60;
const Q_BASE_TOL: f64 = 1e-14;

/// Find `x` with `g(x, x) = 1` and `g(x, qx) = 0`, so that `{x, qx, q^2 x}`
/// is an orthonormal q-base.
///
/// Damped Gauss-Newton with minimum-norm steps on the two constraints, from
/// seeded random starts (deterministic across calls).
pub fn orthonormal_q_base(g: &MetricAtPoint) -> Result<TangentVec> {
    let mut rng = SplitMix64::seed_from_u64(Q_BASE_SEED);
    let mut best = f64::INFINITY;
    for _ in 0..Q_BASE_STARTS {
        let start = TangentVec(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
        if start.is_zero() {
            continue;
        }
        if let Some((x, res)) = newton_q_base(g, start) {
            if res <= Q_BASE_TOL && q_independent(&x) {
                return Ok(x);
            }
            best = best.min(res);
        }
    }
    Err(GeomError::SolveFailure {
        starts: Q_BASE_STARTS,
        residual: best,
    })
}

fn q_base_residual(g: &MetricAtPoint, x: &TangentVec) -> [f64; 2] {
    [g.norm_sq(x) - 1.0, g.inner(x, &x.q())]
}

fn newton_q_base(g: &MetricAtPoint, start: TangentVec) -> Option<(TangentVec, f64)> {
    let norm = |f: [f64; 2]| f[0].abs().max(f[1].abs());
    let mut x = (1.0 / g.norm_sq(&start).sqrt()) * start;
    let mut f = q_base_residual(g, &x);
    for _ in 0..Q_BASE_ITERS {
        if norm(f) <= Q_BASE_TOL {
            break;
        }
        // grad g(x,x) = 2Gx ; grad g(x,qx) = G(qx + q^2 x)
        let j0 = 2.0 * TangentVec(g.lower(&x));
        let j1 = TangentVec(g.lower(&(x.q() + x.q2())));
        let dot = |u: &TangentVec, v: &TangentVec| u.0.iter().zip(v.0).map(|(a, b)| a * b).sum::<f64>();
        let (m00, m01, m11) = (dot(&j0, &j0), dot(&j0, &j1), dot(&j1, &j1));
        let det = m00 * m11 - m01 * m01;
        if det.abs() <= 1e-300 {
            return None;
        }
        // minimum-norm step: -J^T (J J^T)^{-1} f
        let w0 = (m11 * f[0] - m01 * f[1]) / det;
        let w1 = (-m01 * f[0] + m00 * f[1]) / det;
        let step = -(w0 * j0 + w1 * j1);
        let mut t = 1.0;
        loop {
            let cand = x + t * step;
            let fc = q_base_residual(g, &cand);
            if norm(fc) < norm(f) || t < 1e-6 {
                x = cand;
                f = fc;
                break;
            }
            t *= 0.5;
        }
    }
    let r = norm(f);
    r.is_finite().then_some((x, r))
}
