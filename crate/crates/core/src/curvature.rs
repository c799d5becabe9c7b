//! Levi-Civita connection and Riemann curvature of a circulant metric.
//!
//! Index conventions:
//!
//! * [`Christoffel`]: `gamma[h][i][k]` is `Γ^h_ik`, symmetric in `(i, k)`.
//! * [`Curv13`]: `r[h][i][j][k]` is `R^h_ijk = ∂_j Γ^h_ik - ∂_k Γ^h_ij
//!   + Γ^t_ik Γ^h_tj - Γ^t_ij Γ^h_tk`, the `h`-component of
//!   `R(e_j, e_k) e_i`.
//! * [`Curv4`]: `r[i][j][k][u]` is `R(e_i, e_j, e_k, e_u) = g(R(e_i, e_j) e_k, e_u)
//!   = R^a_kij g_au`, so the multilinear form is
//!   `R(x, y, z, u) = r[i][j][k][l] x^i y^j z^k u^l`.
//!
//! The analytic path uses exact partials of `A` and `B`. The finite
//! difference oracle ([`fd_curvature_oracle`]) differentiates the metric
//! numerically and assembles the tensor from `R(X, Y)Z = ∇_X ∇_Y Z - ∇_Y ∇_X Z`
//! on coordinate fields, sharing no code with the analytic path beyond
//! expression evaluation.

use serde::Serialize;

use crate::circulant::{CirculantMetric, MetricAtPoint, MetricJet, TangentVec, Q_MATRIX};
use crate::error::{GeomError, Result};
use crate::expr::{fd_partial, Axis, Point};

pub type Tensor3 = [[[f64; 3]; 3]; 3];
pub type Tensor4 = [[[[f64; 3]; 3]; 3]; 3];

/// Default step for the nested finite-difference curvature oracle.
pub const FD_CURVATURE_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Christoffel {
    pub gamma: Tensor3,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Curv13 {
    pub r: Tensor4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Curv4 {
    pub r: Tensor4,
}

impl Christoffel {
    pub fn max_abs(&self) -> f64 {
        self.gamma.iter().flatten().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn christoffel_from(ginv: &[[f64; 3]; 3], dg: impl Fn(usize, usize, usize) -> f64) -> Tensor3 {
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for h in 0..3 {
        for i in 0..3 {
            for k in i..3 {
                let s: f64 = (0..3)
                    .map(|a| ginv[h][a] * (dg(i, a, k) + dg(k, a, i) - dg(a, i, k)))
                    .sum();
                gamma[h][i][k] = 0.5 * s;
                gamma[h][k][i] = 0.5 * s;
            }
        }
    }
    gamma
}

fn christoffel_from_jet(jet: &MetricJet) -> Tensor3 {
    christoffel_from(&jet.g.inverse(), |c, i, j| jet.dg(c, i, j))
}

/// Christoffel symbols from the exact partials `A_i`, `B_i`.
pub fn christoffel_at(m: &CirculantMetric, p: &Point) -> Result<Christoffel> {
    let jet = m.jet(p)?;
    Ok(Christoffel {
        gamma: christoffel_from_jet(&jet),
    })
}

/// `∂_j Γ^h_ik`, indexed `[j][h][i][k]`, from the jet.
fn christoffel_derivative(jet: &MetricJet) -> Tensor4 {
    let ginv = jet.g.inverse();
    // ∂_j g^ha = -g^hb (∂_j g_bc) g^ca
    let mut dginv = [[[0.0; 3]; 3]; 3];
    for (j, dgj) in dginv.iter_mut().enumerate() {
        for h in 0..3 {
            for a in 0..3 {
                let mut s = 0.0;
                for b in 0..3 {
                    for c in 0..3 {
                        s += ginv[h][b] * jet.dg(j, b, c) * ginv[c][a];
                    }
                }
                dgj[h][a] = -s;
            }
        }
    }
    let mut out = [[[[0.0; 3]; 3]; 3]; 3];
    for j in 0..3 {
        for h in 0..3 {
            for i in 0..3 {
                for k in i..3 {
                    let mut s = 0.0;
                    for a in 0..3 {
                        let t = jet.dg(i, a, k) + jet.dg(k, a, i) - jet.dg(a, i, k);
                        let dt = jet.ddg(j, i, a, k) + jet.ddg(j, k, a, i) - jet.ddg(j, a, i, k);
                        s += dginv[j][h][a] * t + ginv[h][a] * dt;
                    }
                    out[j][h][i][k] = 0.5 * s;
                    out[j][h][k][i] = 0.5 * s;
                }
            }
        }
    }
    out
}

fn curv13_from(gamma: &Tensor3, dgamma: &Tensor4) -> Tensor4 {
    let mut r = [[[[0.0; 3]; 3]; 3]; 3];
    for h in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let mut s = dgamma[j][h][i][k] - dgamma[k][h][i][j];
                    for t in 0..3 {
                        s += gamma[t][i][k] * gamma[h][t][j] - gamma[t][i][j] * gamma[h][t][k];
                    }
                    r[h][i][j][k] = s;
                }
            }
        }
    }
    r
}

/// Lower `R^a_kij` with `g_au` into `R(e_i, e_j, e_k, e_u)`.
fn lower_curvature(r13: &Tensor4, g: &[[f64; 3]; 3]) -> Tensor4 {
    let mut r4 = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for u in 0..3 {
                    r4[i][j][k][u] = (0..3).map(|a| r13[a][k][i][j] * g[a][u]).sum();
                }
            }
        }
    }
    r4
}

/// Analytic curvature tensors at `p`.
pub fn curvature_at(m: &CirculantMetric, p: &Point) -> Result<(Curv13, Curv4)> {
    let jet = m.jet(p)?;
    Ok(curvature_from_jet(&jet))
}

pub fn curvature_from_jet(jet: &MetricJet) -> (Curv13, Curv4) {
    let gamma = christoffel_from_jet(jet);
    let dgamma = christoffel_derivative(jet);
    let r13 = curv13_from(&gamma, &dgamma);
    let r4 = lower_curvature(&r13, &jet.g.matrix());
    (Curv13 { r: r13 }, Curv4 { r: r4 })
}

/// Bivector index pairs `(1,2), (1,3), (2,3)` (zero-based).
const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Component names and index tuples, in the order used by
/// [`Curv4::components`]: `R1212, R1313, R2323, R1213, R1223, R1323`.
pub const COMPONENTS: [(&str, [usize; 4]); 6] = [
    ("R1212", [0, 1, 0, 1]),
    ("R1313", [0, 2, 0, 2]),
    ("R2323", [1, 2, 1, 2]),
    ("R1213", [0, 1, 0, 2]),
    ("R1223", [0, 1, 1, 2]),
    ("R1323", [0, 2, 1, 2]),
];

impl Curv4 {
    pub fn zero() -> Self {
        Curv4 {
            r: [[[[0.0; 3]; 3]; 3]; 3],
        }
    }

    pub fn get(&self, idx: [usize; 4]) -> f64 {
        self.r[idx[0]][idx[1]][idx[2]][idx[3]]
    }

    /// `R(x, y, z, u)` by full multilinear contraction.
    pub fn eval(&self, x: &TangentVec, y: &TangentVec, z: &TangentVec, u: &TangentVec) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let xy = x.0[i] * y.0[j];
                if xy == 0.0 {
                    continue;
                }
                for k in 0..3 {
                    for l in 0..3 {
                        s += self.r[i][j][k][l] * xy * z.0[k] * u.0[l];
                    }
                }
            }
        }
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.r
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// The six independent components, ordered as in [`COMPONENTS`].
    pub fn components(&self) -> [f64; 6] {
        COMPONENTS.map(|(_, idx)| self.get(idx))
    }

    /// Rebuild the full tensor from the six independent components using the
    /// antisymmetries and pair symmetry (complete in dimension 3).
    pub fn from_components(c: [f64; 6]) -> Self {
        // symmetric 3x3 matrix over bivectors (12), (13), (23)
        let m = [[c[0], c[3], c[4]], [c[3], c[1], c[5]], [c[4], c[5], c[2]]];
        let bivector = |i: usize, j: usize| -> Option<(usize, f64)> {
            if i == j {
                return None;
            }
            let (lo, hi, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
            let idx = PAIRS.iter().position(|&p| p == (lo, hi)).unwrap();
            Some((idx, sign))
        };
        let mut r = [[[[0.0; 3]; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        if let (Some((p, sp)), Some((q, sq))) = (bivector(i, j), bivector(k, l)) {
                            r[i][j][k][l] = sp * sq * m[p][q];
                        }
                    }
                }
            }
        }
        Curv4 { r }
    }

    /// Transform every slot by `q`: `(q^*R)(x,y,z,u) = R(qx, qy, qz, qu)`,
    /// by full contraction with the matrix of `q`. `slots` selects which of
    /// the four arguments are transformed.
    pub fn pullback_q(&self, slots: [bool; 4]) -> Curv4 {
        let q = |on: bool, a: usize, k: usize| -> f64 {
            if on {
                Q_MATRIX[a][k] as f64
            } else if a == k {
                1.0
            } else {
                0.0
            }
        };
        let mut out = [[[[0.0; 3]; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let mut s = 0.0;
                        for a in 0..3 {
                            let fa = q(slots[0], a, i);
                            if fa == 0.0 {
                                continue;
                            }
                            for b in 0..3 {
                                let fb = q(slots[1], b, j);
                                if fb == 0.0 {
                                    continue;
                                }
                                for c in 0..3 {
                                    let fc = q(slots[2], c, k);
                                    if fc == 0.0 {
                                        continue;
                                    }
                                    for d in 0..3 {
                                        s += fa * fb * fc * q(slots[3], d, l) * self.r[a][b][c][d];
                                    }
                                }
                            }
                        }
                        out[i][j][k][l] = s;
                    }
                }
            }
        }
        Curv4 { r: out }
    }

    /// Same as `pullback_q([true; 4])` but by relabelling indices:
    /// `q e_k = e_{k+1 mod 3}`.
    pub fn cyclic_shift(&self) -> Curv4 {
        let s = |i: usize| (i + 1) % 3;
        let mut out = [[[[0.0; 3]; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        out[i][j][k][l] = self.r[s(i)][s(j)][s(k)][s(l)];
                    }
                }
            }
        }
        Curv4 { r: out }
    }

    /// Largest absolute entrywise difference.
    pub fn max_diff(&self, other: &Curv4) -> f64 {
        let mut m: f64 = 0.0;
        for (a, b) in self
            .r
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .zip(other.r.iter().flatten().flatten().flatten())
        {
            m = m.max((a - b).abs());
        }
        m
    }

    /// Worst violations of the algebraic curvature identities, relative to
    /// `max |R|` (absolute when the tensor vanishes).
    pub fn identity_residuals(&self) -> SymmetryResiduals {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let rel = |v: f64| if self.max_abs() == 0.0 { v } else { v / scale };
        let mut res = SymmetryResiduals::default();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for u in 0..3 {
                        let r = self.r[i][j][k][u];
                        res.antisym_first = res.antisym_first.max(rel((r + self.r[j][i][k][u]).abs()));
                        res.antisym_last = res.antisym_last.max(rel((r + self.r[i][j][u][k]).abs()));
                        res.pair_symmetry = res.pair_symmetry.max(rel((r - self.r[k][u][i][j]).abs()));
                        let bianchi = r + self.r[j][k][i][u] + self.r[k][i][j][u];
                        res.first_bianchi = res.first_bianchi.max(rel(bianchi.abs()));
                    }
                }
            }
        }
        res
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct SymmetryResiduals {
    pub antisym_first: f64,
    pub antisym_last: f64,
    pub pair_symmetry: f64,
    pub first_bianchi: f64,
}

impl SymmetryResiduals {
    pub fn max(&self) -> f64 {
        self.antisym_first
            .max(self.antisym_last)
            .max(self.pair_symmetry)
            .max(self.first_bianchi)
    }
}

/// Evaluate the six printed closed-form components from `A_i, B_i, A_ij,
/// B_ij` and `D`. Mismatched `(...]` delimiters are read as one balanced
/// bracket and a stray trailing `)` is dropped.
pub fn closed_form_values(jet: &MetricJet) -> [f64; 6] {
    let MetricAtPoint { a, b, d } = jet.g;
    let [a1, a2, a3] = jet.da;
    let [b1, b2, b3] = jet.db;
    let aa = |i: usize, j: usize| jet.dda[i - 1][j - 1];
    let bb = |i: usize, j: usize| jet.ddb[i - 1][j - 1];
    let p = (a + b) / (4.0 * d);
    let q = b / (4.0 * d);

    let r1212 = 0.5 * (2.0 * bb(2, 1) - aa(1, 1) - aa(2, 2))
        + p * (2.0 * a3 * b2 - a3 * a3 + (b1 - b2 - b3) * (b1 + b2 - b3))
        - q * (2.0 * a1 * (b1 + b2 - b3) - 2.0 * b2 * (b1 + b2 - b3) - 2.0 * a1 * a3 + 2.0 * a3 * b2);

    let r1313 = 0.5 * (2.0 * bb(3, 1) - aa(1, 1) - aa(3, 3))
        + p * (2.0 * a2 * b3 - a2 * a2 + (-b1 + b2 + b3) * (-b1 + b2 - b3))
        - q * (2.0 * a1 * (b1 - b2 + b3) - 2.0 * b3 * (b1 - b2 + b3) - 2.0 * a1 * a2 + 2.0 * a2 * b3);

    let r2323 = 0.5 * (2.0 * bb(2, 3) - aa(2, 2) - aa(3, 3))
        + p * (2.0 * b3 * a1 - a1 * a1 + (b1 - b2 + b3) * (b1 - b2 - b3))
        - q * (2.0 * a2 * (-b1 + b2 + b3) - 2.0 * b3 * (-b1 + b2 + b3) - 2.0 * a1 * a2 + 2.0 * a1 * b3);

    let r1213 = 0.5 * (bb(2, 1) + bb(3, 1) - bb(1, 1) - aa(2, 3))
        + p * (a1 * (b2 - b3 + b1) + 2.0 * b3 * (-b1 - b2 + b3) + a2 * a3)
        - q * (a1 * a1 + a2 * a2 + a3 * a3 + 2.0 * a1 * (a2 - b3) - 2.0 * a2 * b3 - 2.0 * a3 * (b1 - b3)
            + (b1 - b2 - b3) * (b1 + b2 - b3));

    let r1223 = 0.5 * (bb(2, 2) - bb(1, 2) - bb(2, 3) + aa(1, 3))
        + p * (a2 * (b2 + b3 - b1) - (2.0 * b3 - a1) * (2.0 * b2 - a3))
        - q * (-a1 * a1 + a2 * a2 + a3 * a3 + 2.0 * a1 * (b2 + b3) + 2.0 * a2 * (b2 - b3) + 2.0 * a3 * (b3 - b1)
            - 4.0 * b2 * b3
            + (b1 + b2 - b3) * (b1 - b2 - b3));

    let r1323 = 0.5 * (bb(2, 3) - bb(3, 3) + bb(1, 3) - aa(1, 2))
        + p * ((2.0 * b2 - a1) * (2.0 * b3 - a2) - a3 * (-b1 + b2 + b3))
        - q * (a1 * a1 - a2 * a2 - a3 * a3 - 2.0 * a1 * (b2 + b3)
            + 2.0 * a2 * (b1 - b2)
            + 2.0 * a3 * (b2 - b3)
            + 4.0 * b2 * b3
            + (-b1 + b2 + b3) * (b1 - b2 + b3));

    [r1212, r1313, r2323, r1213, r1223, r1323]
}

/// Closed-form components next to the analytic pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormReport {
    pub closed_form: [f64; 6],
    pub pipeline: [f64; 6],
    /// `|closed - pipeline| / max(|pipeline|, 1e-12)` per component.
    pub deviation: [f64; 6],
    /// Same, against the negated pipeline (opposite sign convention).
    pub deviation_negated: [f64; 6],
}

impl ClosedFormReport {
    pub fn matches(&self, tol: f64) -> [bool; 6] {
        self.deviation.map(|d| d <= tol)
    }
}

pub fn closed_form_components(m: &CirculantMetric, p: &Point) -> Result<ClosedFormReport> {
    let jet = m.jet(p)?;
    let closed = closed_form_values(&jet);
    let pipeline = curvature_from_jet(&jet).1.components();
    let dev = |sign: f64| -> [f64; 6] {
        std::array::from_fn(|i| (closed[i] - sign * pipeline[i]).abs() / pipeline[i].abs().max(1e-12))
    };
    Ok(ClosedFormReport {
        closed_form: closed,
        pipeline,
        deviation: dev(1.0),
        deviation_negated: dev(-1.0),
    })
}

/// Christoffel symbols from central differences of the metric components.
pub fn fd_christoffel(m: &CirculantMetric, p: &Point, h: f64) -> Result<Christoffel> {
    let g = m.metric_at(p)?;
    let mut da = [0.0; 3];
    let mut db = [0.0; 3];
    for ax in Axis::ALL {
        check_stencil(m, p, ax, h)?;
        da[ax.index()] = fd_partial(m.a(), p, ax, h)?;
        db[ax.index()] = fd_partial(m.b(), p, ax, h)?;
    }
    let dg = |c: usize, i: usize, j: usize| if i == j { da[c] } else { db[c] };
    Ok(Christoffel {
        gamma: christoffel_from(&g.inverse(), dg),
    })
}

fn check_stencil(m: &CirculantMetric, p: &Point, ax: Axis, h: f64) -> Result<()> {
    for t in [h, -h] {
        m.metric_at(&p.shifted(ax, t)).map_err(|e| match e {
            GeomError::DomainViolation { reason, .. } => GeomError::DomainViolation {
                point: p.0,
                reason: format!("finite-difference stencil leaves the domain: {reason}"),
            },
            e => e,
        })?;
    }
    Ok(())
}

/// Curvature by nested central differences: `Γ` from differenced metric
/// components, `∂Γ` from differenced `Γ`, then
/// `R(e_i, e_j) e_k = ∇_i ∇_j e_k - ∇_j ∇_i e_k`, lowered with `g(p)`.
///
/// Needs `p ± 2h e_i` inside the domain.
pub fn fd_curvature_oracle(m: &CirculantMetric, p: &Point, h: f64) -> Result<Curv4> {
    let g = m.metric_at(p)?;
    let gamma = fd_christoffel(m, p, h)?.gamma;
    // dgamma[c][h][i][k] = ∂_c Γ^h_ik
    let mut dgamma = [[[[0.0; 3]; 3]; 3]; 3];
    for ax in Axis::ALL {
        let fwd = fd_christoffel(m, &p.shifted(ax, h), h)?.gamma;
        let bwd = fd_christoffel(m, &p.shifted(ax, -h), h)?.gamma;
        for hh in 0..3 {
            for i in 0..3 {
                for k in 0..3 {
                    dgamma[ax.index()][hh][i][k] = (fwd[hh][i][k] - bwd[hh][i][k]) / (2.0 * h);
                }
            }
        }
    }
    let gm = g.matrix();
    let mut r = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                // ∇_i (Γ^t_jk e_t) = (∂_i Γ^h_jk + Γ^t_jk Γ^h_it) e_h
                let mut v = [0.0; 3];
                for (hh, vh) in v.iter_mut().enumerate() {
                    let mut s = dgamma[i][hh][j][k] - dgamma[j][hh][i][k];
                    for t in 0..3 {
                        s += gamma[t][j][k] * gamma[hh][i][t] - gamma[t][i][k] * gamma[hh][j][t];
                    }
                    *vh = s;
                }
                for u in 0..3 {
                    r[i][j][k][u] = (0..3).map(|hh| v[hh] * gm[hh][u]).sum();
                }
            }
        }
    }
    Ok(Curv4 { r })
}

/// `max |a - b| / max(max |a|, floor)`.
pub fn relative_tensor_deviation(analytic: &Curv4, other: &Curv4, floor: f64) -> f64 {
    analytic.max_diff(other) / analytic.max_abs().max(floor)
}
