//! Positivity of qutrit states through the characteristic polynomial.
//!
//! For a unit-trace Hermitian 3x3 matrix, `det(xI - rho) = x^3 - a1 x^2 +
//! a2 x - a3` with `a1 = 1`, `2 a2 = 1 - Tr rho^2`, `6 a3 = 1 - 3 Tr rho^2 +
//! 2 Tr rho^3`. The matrix is positive semidefinite iff `a2, a3 >= 0`. In
//! weight/angle coordinates `a2 >= 0` is the unit ball, while `a3` is the
//! trigonometric polynomial [`a3_closed_form`]:
//!
//! ```text
//! 27 a3 = 1 - 3|n|^2 + 2 sum n_i^3 cos 3t_i
//!         - 6 n1 n3 n4 cos(t1 - t3 - t4)
//!         + 6 n1 n2 n3 cos(t1 - t2 + t3 - pi/3)
//!         + 6 n2 n3 n4 cos(t2 + t3 - t4 + pi/3)
//!         + 6 n1 n2 n4 cos(t1 + t2 + t4 + pi/3)
//! ```
//!
//! Throughout, "reduced" values mean `27 a3`, the bracket above.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bloch_param::{BlochParams, PolarParams};
use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;

/// Default positivity tolerance on `a3` and on eigenvalues.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Coefficients of `det(xI - rho) = sum_j (-1)^j a_j x^(3-j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharCoeffs {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

/// Coefficients from the power traces `Tr rho^k`.
pub fn char_coeffs(rho: &ComplexMatrix) -> Result<CharCoeffs> {
    if rho.dim() != 3 {
        return Err(Error::NotAState(format!("expected 3x3, got {0}x{0}", rho.dim())));
    }
    let herm = rho.hermitian_deviation();
    if herm > 1e-10 {
        return Err(Error::NotAState(format!("not Hermitian (deviation {herm:e})")));
    }
    let t1 = rho.trace().re;
    if (t1 - 1.0).abs() > 1e-10 {
        return Err(Error::NotAState(format!("trace {t1} differs from 1")));
    }
    let rho2 = rho * rho;
    let t2 = rho2.trace().re;
    let t3 = rho2.trace_product(rho).re;
    let a2 = (t1 * t1 - t2) / 2.0;
    let a3 = (t1.powi(3) - 3.0 * t1 * t2 + 2.0 * t3) / 6.0;
    debug_assert!((a3 - rho.det().re).abs() < 1e-10);
    Ok(CharCoeffs { a0: 1.0, a1: t1, a2, a3 })
}

/// `a3` as a trigonometric polynomial in the weights and angles.
pub fn a3_closed_form(p: &BlochParams) -> f64 {
    A3Terms::new(p.n).reduced(&p.theta) / 27.0
}

/// `27 a3` for the given weights and angles. Same polynomial as
/// [`a3_closed_form`], without requiring canonical angles.
pub fn a3_reduced(n: [f64; 4], theta: [f64; 4]) -> f64 {
    A3Terms::new(n).reduced(&theta)
}

/// Physical iff inside the unit ball and `a3 >= -tol`.
pub fn is_physical(p: &BlochParams, tol: f64) -> bool {
    p.norm_sq() <= 1.0 + tol && a3_closed_form(p) >= -tol
}

/// Smallest eigenvalue of the density matrix of `p`.
pub fn min_eigenvalue(p: &BlochParams) -> f64 {
    p.to_density().herm_eigvals(1e-10).expect("parametrized matrices are Hermitian")[0]
}

/// The polynomial split into its pieces: `base + sum cube_i cos 3t_i +
/// sum K_t cos(s_t . theta + offset_t)`.
#[derive(Debug, Clone)]
struct A3Terms {
    base: f64,
    cube: [f64; 4],
    cross: [CrossTerm; 4],
}

#[derive(Debug, Clone, Copy)]
struct CrossTerm {
    weight: f64,
    signs: [i32; 4],
    offset: f64,
}

impl A3Terms {
    fn new(n: [f64; 4]) -> Self {
        let [n1, n2, n3, n4] = n;
        let base = 1.0 - 3.0 * n.iter().map(|x| x * x).sum::<f64>();
        let cube = n.map(|x| 2.0 * x * x * x);
        let cross = [
            CrossTerm { weight: -6.0 * n1 * n3 * n4, signs: [1, 0, -1, -1], offset: 0.0 },
            CrossTerm { weight: 6.0 * n1 * n2 * n3, signs: [1, -1, 1, 0], offset: -PI / 3.0 },
            CrossTerm { weight: 6.0 * n2 * n3 * n4, signs: [0, 1, 1, -1], offset: PI / 3.0 },
            CrossTerm { weight: 6.0 * n1 * n2 * n4, signs: [1, 1, 0, 1], offset: PI / 3.0 },
        ];
        Self { base, cube, cross }
    }

    fn reduced(&self, th: &[f64; 4]) -> f64 {
        let mut v = self.base;
        for i in 0..4 {
            if self.cube[i] != 0.0 {
                v += self.cube[i] * (3.0 * th[i]).cos();
            }
        }
        for t in &self.cross {
            if t.weight != 0.0 {
                let arg: f64 = (0..4).map(|i| t.signs[i] as f64 * th[i]).sum::<f64>() + t.offset;
                v += t.weight * arg.cos();
            }
        }
        v
    }

    /// Bound on `reduced` over all angles.
    fn upper_bound(&self) -> f64 {
        self.base
            + self.cube.iter().map(|c| c.abs()).sum::<f64>()
            + self.cross.iter().map(|t| t.weight.abs()).sum::<f64>()
    }
}

/// Settings for maximizing `a3` over the angles at a fixed weight point.
///
/// Each free angle (one whose weight is nonzero) is sampled at
/// `grid_steps + 1` points spanning `[0, pi]`; with `refine` the best grid
/// point is polished by coordinate ascent (at most 200 sweeps, step halved
/// whenever a sweep gains less than `1e-12`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleSearch {
    pub grid_steps: usize,
    pub refine: bool,
}

impl Default for AngleSearch {
    fn default() -> Self {
        Self { grid_steps: 48, refine: true }
    }
}

/// Best angles found and the corresponding `a3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleOptimum {
    pub a3: f64,
    pub theta: [f64; 4],
}

impl AngleOptimum {
    pub fn reduced(&self) -> f64 {
        27.0 * self.a3
    }
}

/// Maximum of `a3` over `theta in [0, pi]^4` at the weight point `n`.
pub fn max_a3_over_angles(n: [f64; 4], search: &AngleSearch) -> AngleOptimum {
    run_search(n, search, None)
}

/// Whether some choice of angles makes the weight point `n` a physical state.
pub fn is_point_physical(n: [f64; 4], grid_steps: usize, refine: bool) -> Result<bool> {
    if grid_steps == 0 {
        return Err(Error::InvalidInput("grid_steps must be positive".into()));
    }
    let norm_sq: f64 = n.iter().map(|x| x * x).sum();
    if norm_sq > 1.0 + 1e-12 {
        return Err(Error::OutsideSphere { norm: norm_sq.sqrt() });
    }
    let threshold = -27.0 * POSITIVITY_TOL;
    if A3Terms::new(n).upper_bound() < threshold {
        return Ok(false);
    }
    let best = run_search(n, &AngleSearch { grid_steps, refine }, Some(threshold));
    Ok(best.reduced() >= threshold)
}

fn run_search(n: [f64; 4], search: &AngleSearch, stop_at: Option<f64>) -> AngleOptimum {
    let terms = A3Terms::new(n);
    let free: Vec<usize> = (0..4).filter(|&i| n[i] != 0.0).collect();
    let steps = search.grid_steps.max(1);
    let h = PI / steps as f64;

    // Lookup tables: cos(3 j h) and, per cross term, cos(k h + offset) for the
    // integer combination k = s . j in [-3 steps, 3 steps].
    let cos3: Vec<f64> = (0..=steps).map(|j| (3.0 * j as f64 * h).cos()).collect();
    let span = 3 * steps as i64;
    let cross_tables: Vec<Vec<f64>> = terms
        .cross
        .iter()
        .map(|t| (-span..=span).map(|k| (k as f64 * h + t.offset).cos()).collect())
        .collect();

    let eval_grid = |j: &[usize; 4]| -> f64 {
        let mut v = terms.base;
        for &i in &free {
            v += terms.cube[i] * cos3[j[i]];
        }
        for (t, table) in terms.cross.iter().zip(&cross_tables) {
            if t.weight != 0.0 {
                let k: i64 = (0..4).map(|i| t.signs[i] as i64 * j[i] as i64).sum();
                v += t.weight * table[(k + span) as usize];
            }
        }
        v
    };

    let mut j = [0usize; 4];
    let mut best_val = eval_grid(&j);
    let mut best_j = j;
    let done = |v: f64| stop_at.is_some_and(|s| v >= s);
    if !free.is_empty() && !done(best_val) {
        'grid: loop {
            // Odometer over the free angles.
            let mut pos = 0;
            loop {
                if pos == free.len() {
                    break 'grid;
                }
                let i = free[pos];
                if j[i] < steps {
                    j[i] += 1;
                    break;
                }
                j[i] = 0;
                pos += 1;
            }
            let v = eval_grid(&j);
            if v > best_val {
                best_val = v;
                best_j = j;
                if done(v) {
                    break;
                }
            }
        }
    }

    let mut theta = best_j.map(|k| k as f64 * h);
    let mut value = best_val;
    if search.refine && !free.is_empty() && !done(value) {
        let mut step = h;
        for _ in 0..200 {
            let before = value;
            for &i in &free {
                for dir in [1.0, -1.0] {
                    let mut cand = theta;
                    cand[i] = (theta[i] + dir * step).clamp(0.0, PI);
                    let v = terms.reduced(&cand);
                    if v > value {
                        value = v;
                        theta = cand;
                    }
                }
            }
            if value - before < 1e-12 {
                step *= 0.5;
                if step < 1e-12 {
                    break;
                }
            }
            if done(value) {
                break;
            }
        }
    }
    AngleOptimum { a3: value / 27.0, theta }
}

/// Where a weight vector sits relative to the rank shells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// `r = 1`: pure states.
    Surface,
    /// `0.5 <= r < 1`: rank 2 or 3 depending on the angles.
    Shell,
    /// `r < 0.5`: always full rank.
    Core,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    /// Count of eigenvalues above the tolerance.
    pub rank: usize,
    pub region: Region,
    /// Whether `rank` is one the region allows.
    pub consistent: bool,
}

pub fn rank_classify(p: &BlochParams, tol: f64) -> Result<RankReport> {
    if !is_physical(p, tol) {
        return Err(Error::NotPhysical);
    }
    let eigs = p.to_density().herm_eigvals(1e-10)?;
    let rank = eigs.iter().filter(|&&x| x > tol).count();
    let r = p.radius();
    let region = if (r - 1.0).abs() <= tol {
        Region::Surface
    } else if r < 0.5 {
        Region::Core
    } else {
        Region::Shell
    };
    let consistent = match region {
        Region::Surface => rank == 1,
        Region::Core => rank == 3,
        Region::Shell => rank == 2 || rank == 3,
    };
    Ok(RankReport { rank, region, consistent })
}

/// `a3` in polar weight coordinates, split as `27 a3 = 1 - 3r^2 + 2 r^3 F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct A3Polar {
    pub a3: f64,
    /// `27 a3`.
    pub reduced: f64,
    /// The angular factor `F`, in `[-1, 1]`; zero at the origin.
    pub f: f64,
}

pub fn a3_polar(r: f64, zeta: [f64; 3], theta: [f64; 4]) -> A3Polar {
    let n = PolarParams::new(r, zeta).weights();
    let reduced = a3_reduced(n, theta);
    let f = if r == 0.0 { 0.0 } else { (reduced - 1.0 + 3.0 * r * r) / (2.0 * r.powi(3)) };
    A3Polar { a3: reduced / 27.0, reduced, f }
}
