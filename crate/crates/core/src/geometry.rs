//! Overlaps, distances and basis relations in weight/angle coordinates.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bloch_param::BlochParams;
use crate::ensembles::haar_unitary;
use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;
use crate::positivity::{is_physical, POSITIVITY_TOL};

/// Purity gate for the pure-state criteria.
pub const PURE_TOL: f64 = 1e-8;

/// Parameters of the pure state `|psi><psi|`; the ket is normalized first.
pub fn ket_params(ket: &[Complex64; 3]) -> Result<BlochParams> {
    let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::InvalidInput("ket must be finite and nonzero".into()));
    }
    let v: Vec<Complex64> = ket.iter().map(|z| z / norm).collect();
    BlochParams::from_density(&ComplexMatrix::outer(&v), 1e-10)
}

fn raw_overlap(a: &BlochParams, b: &BlochParams) -> f64 {
    let s: f64 = (0..4).map(|i| a.n[i] * b.n[i] * (a.theta[i] - b.theta[i]).cos()).sum();
    (1.0 + 2.0 * s) / 3.0
}

/// `Tr(rho_a rho_b) = (1 + 2 sum n_ai n_bi cos(theta_ai - theta_bi)) / 3`.
pub fn overlap(a: &BlochParams, b: &BlochParams) -> Result<f64> {
    if !is_physical(a, POSITIVITY_TOL) || !is_physical(b, POSITIVITY_TOL) {
        return Err(Error::NotPhysical);
    }
    Ok(raw_overlap(a, b))
}

fn require_pure(p: &BlochParams) -> Result<()> {
    let purity = p.purity();
    if (purity - 1.0).abs() > PURE_TOL {
        return Err(Error::NotPure { purity });
    }
    Ok(())
}

/// Overlap of two pure states together with the reduced forms of the
/// orthogonality and unbiasedness conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairDiagnostics {
    pub overlap: f64,
    /// `n_a . n_b`.
    pub weight_dot: f64,
    /// `cos(theta_ai - theta_bi)` when it is the same for every `i`
    /// (within `1e-12`). Then `overlap = (1 + 2 c n_a . n_b)/3`: with
    /// `c = 1` orthogonality reads `n_a . n_b = cos(2 pi/3)`, and any `c`
    /// gives unbiasedness iff the weight vectors are orthogonal.
    pub common_cos: Option<f64>,
}

impl PairDiagnostics {
    /// `n_a . n_b - cos(2 pi/3)` when all angle differences vanish.
    pub fn reduced_orthogonality_gap(&self) -> Option<f64> {
        match self.common_cos {
            Some(c) if (c - 1.0).abs() < 1e-12 => Some(self.weight_dot - (2.0 * PI / 3.0).cos()),
            _ => None,
        }
    }
}

pub fn pair_diagnostics(a: &BlochParams, b: &BlochParams) -> Result<PairDiagnostics> {
    require_pure(a)?;
    require_pure(b)?;
    let cosines: Vec<f64> = (0..4).map(|i| (a.theta[i] - b.theta[i]).cos()).collect();
    let common = cosines.iter().all(|c| (c - cosines[0]).abs() < 1e-12).then_some(cosines[0]);
    Ok(PairDiagnostics {
        overlap: raw_overlap(a, b),
        weight_dot: (0..4).map(|i| a.n[i] * b.n[i]).sum(),
        common_cos: common,
    })
}

pub fn is_orthogonal(a: &BlochParams, b: &BlochParams, tol: f64) -> Result<bool> {
    Ok(pair_diagnostics(a, b)?.overlap <= tol)
}

pub fn is_mub_pair(a: &BlochParams, b: &BlochParams, tol: f64) -> Result<bool> {
    Ok((pair_diagnostics(a, b)?.overlap - 1.0 / 3.0).abs() <= tol)
}

/// `sqrt(Tr (rho_a - rho_b)^2)`.
pub fn hs_distance(a: &BlochParams, b: &BlochParams) -> f64 {
    let s: f64 = (0..4)
        .map(|i| a.n[i] * a.n[i] + b.n[i] * b.n[i] - 2.0 * a.n[i] * b.n[i] * (a.theta[i] - b.theta[i]).cos())
        .sum();
    (2.0 / 3.0 * s.max(0.0)).sqrt()
}

/// How the weight vectors of two basis kets relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairRelation {
    SamePoint,
    Antipodal,
    Neither,
}

const RELATION_TOL: f64 = 1e-8;

/// Relation between two weight vectors and the distance to the closest of
/// "same", "antipodal" and "same up to per-component sign".
///
/// The sign of each weight is fixed only by the canonical angle range, so
/// two kets whose weights agree in modulus are counted as the same point.
pub fn classify_pair(a: &[f64; 4], b: &[f64; 4]) -> (PairRelation, f64) {
    let dist = |f: &dyn Fn(f64, f64) -> f64| (0..4).map(|i| f(a[i], b[i])).fold(0.0, f64::max);
    let same = dist(&|x, y| (x - y).abs());
    let anti = dist(&|x, y| (x + y).abs());
    let moduli = dist(&|x, y| (x.abs() - y.abs()).abs());
    let relation = if same <= RELATION_TOL {
        PairRelation::SamePoint
    } else if anti <= RELATION_TOL {
        PairRelation::Antipodal
    } else if moduli <= RELATION_TOL {
        PairRelation::SamePoint
    } else {
        PairRelation::Neither
    };
    (relation, same.min(anti).min(moduli))
}

/// Pairwise relations inside one orthonormal basis, in the order
/// (0,1), (0,2), (1,2).
pub fn basis_relations(kets: &[[Complex64; 3]; 3]) -> Result<[(PairRelation, f64); 3]> {
    let p = [ket_params(&kets[0])?, ket_params(&kets[1])?, ket_params(&kets[2])?];
    Ok([classify_pair(&p[0].n, &p[1].n), classify_pair(&p[0].n, &p[2].n), classify_pair(&p[1].n, &p[2].n)])
}

/// Counts over all ket pairs of all sampled bases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub trials: usize,
    pub same_point: usize,
    pub antipodal: usize,
    pub neither: usize,
    /// Largest distance, over all pairs, to the nearest of the three
    /// relations.
    pub worst_deviation: f64,
}

/// Samples Haar-random orthonormal bases and records how the weight points
/// of their kets relate. Purely observational.
pub fn conjecture1_explore(trials: usize, seed: u64) -> Result<ConjectureReport> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = ConjectureReport { trials, same_point: 0, antipodal: 0, neither: 0, worst_deviation: 0.0 };
    for _ in 0..trials {
        let u = haar_unitary(&mut rng, 3);
        let kets: [[Complex64; 3]; 3] = std::array::from_fn(|j| std::array::from_fn(|i| u[(i, j)]));
        for (rel, dev) in basis_relations(&kets)? {
            match rel {
                PairRelation::SamePoint => rep.same_point += 1,
                PairRelation::Antipodal => rep.antipodal += 1,
                PairRelation::Neither => rep.neither += 1,
            }
            rep.worst_deviation = rep.worst_deviation.max(dev);
        }
    }
    Ok(rep)
}
