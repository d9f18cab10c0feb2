//! Random qutrit states from the Hilbert-Schmidt and Bures ensembles, and the
//! densities of those ensembles on the eigenvalue simplex and in Bloch
//! coordinates.
//!
//! All densities are unnormalized (constants set to 1).
//!
//! ```
//! use qutrit_bloch::ensembles::{hs_density_simplex, sample_hs};
//! use rand::SeedableRng;
//!
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let s = sample_hs(&mut rng);
//! assert!((s.eigs.iter().sum::<f64>() - 1.0).abs() < 1e-10);
//! assert!((hs_density_simplex(&[0.5, 0.3, 0.2]).unwrap() - 3.6e-5).abs() < 1e-18);
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bloch_param::{BlochParams, PolarParams};
use crate::error::{Error, Result};
use crate::gellmann;
use crate::matcore::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Hs,
    Bures,
}

/// One random state with its derived quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSample {
    pub rho: ComplexMatrix,
    /// Ascending.
    pub eigs: [f64; 3],
    pub bloch: BlochParams,
    pub r: f64,
    pub det: f64,
    pub measure: Measure,
}

impl EnsembleSample {
    pub fn purity(&self) -> f64 {
        self.eigs.iter().map(|x| x * x).sum()
    }
}

/// Square matrix of independent standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let data = (0..d * d)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect();
    ComplexMatrix::new(d, data).expect("Gaussian samples are finite")
}

/// Haar-distributed unitary: Gram-Schmidt on the columns of a Ginibre
/// matrix, which leaves the triangular factor with a positive diagonal.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = ginibre(rng, d);
    let mut cols: Vec<Vec<Complex64>> = (0..d).map(|j| (0..d).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..d {
        for k in 0..j {
            let proj: Complex64 = (0..d).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..d {
                let v = cols[k][i];
                cols[j][i] -= proj * v;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    let mut u = ComplexMatrix::zeros(d);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    u
}

fn finish(m: ComplexMatrix, measure: Measure) -> EnsembleSample {
    let herm = (&m + &m.adjoint()).scale_real(0.5);
    let rho = herm.scale_real(1.0 / herm.trace().re);
    let e = rho.herm_eigvals(1e-10).expect("sampled matrix is Hermitian");
    let bloch = BlochParams::from_density(&rho, 1e-9).expect("sampled matrix is a state");
    EnsembleSample {
        eigs: [e[0], e[1], e[2]],
        r: bloch.radius(),
        det: rho.det().re,
        bloch,
        rho,
        measure,
    }
}

/// `rho = G G^dagger / Tr(G G^dagger)` with `G` Ginibre.
pub fn sample_hs<R: Rng + ?Sized>(rng: &mut R) -> EnsembleSample {
    let g = ginibre(rng, 3);
    finish(&g * &g.adjoint(), Measure::Hs)
}

/// `rho ~ (I + U) G G^dagger (I + U^dagger)` with `U` Haar and `G` Ginibre.
pub fn sample_bures<R: Rng + ?Sized>(rng: &mut R) -> EnsembleSample {
    let u = haar_unitary(rng, 3);
    let g = ginibre(rng, 3);
    let a = &(&ComplexMatrix::identity(3) + &u) * &g;
    finish(&a * &a.adjoint(), Measure::Bures)
}

pub fn sample<R: Rng + ?Sized>(rng: &mut R, measure: Measure) -> EnsembleSample {
    match measure {
        Measure::Hs => sample_hs(rng),
        Measure::Bures => sample_bures(rng),
    }
}

/// `prod_{j<k} (l_j - l_k)^2`.
pub fn discriminant(eigs: &[f64; 3]) -> f64 {
    let [a, b, c] = *eigs;
    ((a - b) * (a - c) * (b - c)).powi(2)
}

fn check_simplex(eigs: &[f64]) -> Result<[f64; 3]> {
    let e: [f64; 3] = eigs
        .try_into()
        .map_err(|_| Error::InvalidInput(format!("expected 3 eigenvalues, got {}", eigs.len())))?;
    if e.iter().any(|x| !x.is_finite() || *x < -1e-10) || (e.iter().sum::<f64>() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidInput(format!("{e:?} is not on the probability simplex")));
    }
    Ok(e)
}

/// Hilbert-Schmidt density on the simplex, `prod (l_j - l_k)^2`.
pub fn hs_density_simplex(eigs: &[f64]) -> Result<f64> {
    Ok(discriminant(&check_simplex(eigs)?))
}

/// Bures density on the simplex,
/// `prod (l_j - l_k)^2 / (l_j + l_k)` divided by `sqrt(l_1 l_2 l_3)`.
pub fn bures_density_simplex(eigs: &[f64]) -> Result<f64> {
    let e = check_simplex(eigs)?;
    if e.iter().any(|&x| x <= 0.0) {
        return Err(Error::DegenerateBures(format!("eigenvalue {} is not positive", e[0].min(e[1]).min(e[2]))));
    }
    let sums = (e[0] + e[1]) * (e[0] + e[2]) * (e[1] + e[2]);
    Ok(discriminant(&e) / ((e[0] * e[1] * e[2]).sqrt() * sums))
}

/// `((r-1)^2(2r+1) - 27D)((r+1)^2(2r-1) + 27D)`, which equals 27 times the
/// eigenvalue discriminant when `D` is the determinant of a state with
/// weight radius `r`.
pub fn hw_numerator(r: f64, det: f64) -> f64 {
    ((r - 1.0).powi(2) * (2.0 * r + 1.0) - 27.0 * det) * ((r + 1.0).powi(2) * (2.0 * r - 1.0) + 27.0 * det)
}

/// `Det(rho)` at polar weights `(r, zeta)` and angles `theta`.
pub fn det_at(r: f64, zeta: [f64; 3], theta: [f64; 4]) -> f64 {
    BlochParams::from_polar(&PolarParams::new(r, zeta), theta).to_density().det().re
}

/// Hilbert-Schmidt density in weight/angle coordinates,
/// `numerator / (27 r^3)`.
pub fn hs_density_bloch(r: f64, zeta: [f64; 3], theta: [f64; 4]) -> Result<f64> {
    if r == 0.0 {
        return Err(Error::OriginSingularity);
    }
    let d = det_at(r, zeta, theta);
    Ok(hw_numerator(r, d) / (27.0 * r.powi(3)))
}

/// Bures density in weight/angle coordinates,
/// `numerator / (27 r^3 ((1 - r^2)/3 - D) sqrt(D))`.
///
/// With `signed` set, `sqrt(D)` is replaced by `sgn(D) sqrt(|D|)` and no
/// degeneracy error is raised, so the sign of the result tracks the sign of
/// the determinant.
pub fn bures_density_bloch(r: f64, zeta: [f64; 3], theta: [f64; 4], signed: bool) -> Result<f64> {
    if r == 0.0 {
        return Err(Error::OriginSingularity);
    }
    let d = det_at(r, zeta, theta);
    let gap = (1.0 - r * r) / 3.0 - d;
    let root = if signed {
        d.signum() * d.abs().sqrt()
    } else {
        if d <= 0.0 {
            return Err(Error::DegenerateBures(format!("Det(rho) = {d:e}")));
        }
        if gap <= 0.0 {
            return Err(Error::DegenerateBures(format!("(1 - r^2)/3 - Det(rho) = {gap:e}")));
        }
        d.sqrt()
    };
    Ok(hw_numerator(r, d) / (27.0 * r.powi(3) * gap * root))
}

/// Uniform on the qubit ball: `3 / (4 pi)`.
pub fn qubit_hs_density(_r: f64) -> f64 {
    3.0 / (4.0 * PI)
}

/// `4 / (pi sqrt(1 - r^2))`.
pub fn qubit_bures_density(r: f64) -> f64 {
    4.0 / (PI * (1.0 - r * r).sqrt())
}

/// Largest relative errors of the closed-form identities over random
/// states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub samples: usize,
    /// States kept after dropping near-degenerate spectra.
    pub used: usize,
    /// `prod (l_j + l_k) = (1 - r^2)/3 - Det`.
    pub pair_sums: f64,
    /// `prod l = Det`.
    pub determinant: f64,
    /// `hw_numerator / 27 = prod (l_j - l_k)^2`.
    pub hs_numerator: f64,
    /// Gell-Mann numerator `= prod (l_j - l_k)^2`.
    pub gm_numerator: f64,
    /// `3 - r_g^2 - 9 Det = 9 prod (l_j + l_k)`.
    pub gm_pair_sums: f64,
}

impl IdentityReport {
    pub fn max_error(&self) -> f64 {
        [self.pair_sums, self.determinant, self.hs_numerator, self.gm_numerator, self.gm_pair_sums]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

/// Draw `sample_count` Hilbert-Schmidt states and check the identities
/// against eigenvalue-based values. Spectra with discriminant below `1e-14`
/// are skipped.
pub fn identity_checks<R: Rng + ?Sized>(sample_count: usize, rng: &mut R) -> IdentityReport {
    let mut rep = IdentityReport {
        samples: sample_count,
        used: 0,
        pair_sums: 0.0,
        determinant: 0.0,
        hs_numerator: 0.0,
        gm_numerator: 0.0,
        gm_pair_sums: 0.0,
    };
    for _ in 0..sample_count {
        let s = sample_hs(rng);
        let e = s.eigs;
        let disc = discriminant(&e);
        if disc < 1e-14 {
            continue;
        }
        rep.used += 1;
        let pairs = (e[0] + e[1]) * (e[0] + e[2]) * (e[1] + e[2]);
        let prod = e[0] * e[1] * e[2];
        let gm = gellmann::to_gm(&s.rho).expect("sample is a state");
        let upd = |slot: &mut f64, v: f64| *slot = slot.max(v);
        upd(&mut rep.pair_sums, rel_err((1.0 - s.r * s.r) / 3.0 - s.det, pairs));
        upd(&mut rep.determinant, rel_err(s.det, prod));
        upd(&mut rep.hs_numerator, rel_err(hw_numerator(s.r, s.det) / 27.0, disc));
        upd(&mut rep.gm_numerator, rel_err(gellmann::gm_numerator(gm.r_g, s.det), disc));
        upd(&mut rep.gm_pair_sums, rel_err(3.0 - gm.r_g * gm.r_g - 9.0 * s.det, 9.0 * pairs));
    }
    rep
}
