//! Pointwise and sampled membership in the parallel class, `V1` and `V2`.
//!
//! * parallel: `grad A = grad B · S`, `S = [[-1,1,1],[1,-1,1],[1,1,-1]]`
//!   (row vector times matrix).
//! * `V1`: `R(x, y, qz, qu) = R(x, y, z, u)`.
//! * `V2`: `R(qx, qy, qz, qu) = R(x, y, z, u)`; equivalently the component
//!   system `R1212 = R1313 = R2323`, `R1213 = R1323 = -R1223`.
//!
//! Curvature residuals are relative to `max |R|` at the point, with an
//! absolute floor of [`RESIDUAL_FLOOR`] for (near-)flat points.

use serde::Serialize;

use crate::circulant::CirculantMetric;
use crate::curvature::{curvature_from_jet, Curv4};
use crate::error::Result;
use crate::exec::{map_slice, Execution};
use crate::expr::Point;
use crate::sampling::{sample_points, SampleBox, Sampler};

pub const DEFAULT_CLASS_TOL: f64 = 1e-8;
pub const RESIDUAL_FLOOR: f64 = 1e-12;
const FLAT_TOL: f64 = 1e-10;

pub const S_MATRIX: [[f64; 3]; 3] = [[-1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [1.0, 1.0, -1.0]];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParallelCheck {
    pub holds: bool,
    pub residual: f64,
    pub grad_a: [f64; 3],
    pub grad_b_s: [f64; 3],
}

pub fn parallel_check(m: &CirculantMetric, p: &Point, tol: f64) -> Result<ParallelCheck> {
    let jet = m.jet(p)?;
    Ok(parallel_from(jet.da, jet.db, tol))
}

fn parallel_from(grad_a: [f64; 3], grad_b: [f64; 3], tol: f64) -> ParallelCheck {
    let grad_b_s: [f64; 3] = std::array::from_fn(|j| (0..3).map(|i| grad_b[i] * S_MATRIX[i][j]).sum());
    let scale = 1.0 + grad_a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let dev = (0..3).fold(0.0f64, |m, j| m.max((grad_a[j] - grad_b_s[j]).abs()));
    let residual = dev / scale;
    ParallelCheck {
        holds: residual <= tol,
        residual,
        grad_a,
        grad_b_s,
    }
}

/// Residuals behind each flag of a [`ClassReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassResiduals {
    pub parallel: f64,
    pub v1: f64,
    /// Full q-contraction in all four slots.
    pub v2: f64,
    /// Same condition by cyclic index relabelling.
    pub v2_shift: f64,
    /// The explicit six-component system.
    pub component_system: f64,
    pub max_abs_curvature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassReport {
    pub point: Point,
    pub parallel: bool,
    pub v1: bool,
    pub v2: bool,
    pub flat: bool,
    pub component_system: bool,
    pub tol: f64,
    pub flat_tol: f64,
    pub residuals: ClassResiduals,
}

impl ClassReport {
    /// Internal consistency: `v1 => v2`, both `V2` formulations agree, and
    /// the component system agrees with the tensor test.
    pub fn consistent(&self) -> bool {
        (!self.v1 || self.v2)
            && (self.residuals.v2 - self.residuals.v2_shift).abs() <= 1e-12
            && self.component_system == self.v2
    }
}

fn relative(dev: f64, scale: f64) -> f64 {
    dev / scale.max(RESIDUAL_FLOOR)
}

/// Residual of the component system, relative to the curvature scale.
pub fn component_system_residual(r: &Curv4) -> f64 {
    let [r1212, r1313, r2323, r1213, r1223, r1323] = r.components();
    let dev = [r1212 - r1313, r1313 - r2323, r1213 - r1323, r1323 + r1223]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    relative(dev, r.max_abs())
}

pub fn v1_residual(r: &Curv4) -> f64 {
    relative(r.pullback_q([false, false, true, true]).max_diff(r), r.max_abs())
}

pub fn v2_residual(r: &Curv4) -> f64 {
    relative(r.pullback_q([true; 4]).max_diff(r), r.max_abs())
}

pub fn v2_shift_residual(r: &Curv4) -> f64 {
    relative(r.cyclic_shift().max_diff(r), r.max_abs())
}

pub fn class_check(m: &CirculantMetric, p: &Point, tol: f64) -> Result<ClassReport> {
    let jet = m.jet(p)?;
    let (_, r) = curvature_from_jet(&jet);
    let par = parallel_from(jet.da, jet.db, tol);
    let residuals = ClassResiduals {
        parallel: par.residual,
        v1: v1_residual(&r),
        v2: v2_residual(&r),
        v2_shift: v2_shift_residual(&r),
        component_system: component_system_residual(&r),
        max_abs_curvature: r.max_abs(),
    };
    let flat_tol = FLAT_TOL * (1.0 + jet.g.a.abs() + jet.g.b.abs());
    Ok(ClassReport {
        point: *p,
        parallel: par.holds,
        v1: residuals.v1 <= tol,
        v2: residuals.v2 <= tol,
        flat: residuals.max_abs_curvature <= flat_tol,
        component_system: residuals.component_system <= tol,
        tol,
        flat_tol,
        residuals,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ClassCounts {
    pub parallel: usize,
    pub v1: usize,
    pub v2: usize,
    pub flat: usize,
    pub inconsistent: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct WorstResiduals {
    pub parallel: f64,
    pub v1: f64,
    pub v2: f64,
    pub component_system: f64,
    pub v2_formulation_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionReport {
    pub sampler: Sampler,
    pub attempts: usize,
    pub admitted: usize,
    pub tol: f64,
    pub counts: ClassCounts,
    pub worst: WorstResiduals,
    pub points: Vec<ClassReport>,
}

impl RegionReport {
    pub fn fraction(&self, count: usize) -> f64 {
        count as f64 / self.admitted as f64
    }
}

/// Classify every admitted sample point. Deterministic for a fixed sampler.
pub fn classify_region(
    m: &CirculantMetric,
    sampler: &Sampler,
    bx: &SampleBox,
    tol: f64,
    exec: Execution,
) -> Result<RegionReport> {
    let sample = sample_points(m, sampler, bx)?;
    let reports = map_slice(&sample.points, exec, |p| class_check(m, p, tol))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut counts = ClassCounts::default();
    let mut worst = WorstResiduals::default();
    for r in &reports {
        counts.parallel += r.parallel as usize;
        counts.v1 += r.v1 as usize;
        counts.v2 += r.v2 as usize;
        counts.flat += r.flat as usize;
        counts.inconsistent += !r.consistent() as usize;
        worst.parallel = worst.parallel.max(r.residuals.parallel);
        worst.v1 = worst.v1.max(r.residuals.v1);
        worst.v2 = worst.v2.max(r.residuals.v2);
        worst.component_system = worst.component_system.max(r.residuals.component_system);
        worst.v2_formulation_gap = worst
            .v2_formulation_gap
            .max((r.residuals.v2 - r.residuals.v2_shift).abs());
    }
    Ok(RegionReport {
        sampler: *sampler,
        attempts: sample.attempts,
        admitted: reports.len(),
        tol,
        counts,
        worst,
        points: reports,
    })
}
