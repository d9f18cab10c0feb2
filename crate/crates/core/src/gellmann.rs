//! Gell-Mann coordinates for qutrits.
//!
//! The basis is the standard `L1..L8` ordering: symmetric off-diagonal
//! (`L1`, `L4`, `L6`), antisymmetric off-diagonal (`L2`, `L5`, `L7`) and
//! diagonal (`L3 = diag(1,-1,0)`, `L8 = diag(1,1,-2)/sqrt 3`), with
//! `Tr(Li Lj) = 2 delta_ij`. States are written `rho = (I + sum g_i L_i)/3`,
//! so `g_i = (3/2) Tr(L_i rho)` and `Tr rho^2 = (3 + 2 r_g^2)/9`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;

pub fn gm_basis() -> [ComplexMatrix; 8] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let sym = |i: usize, j: usize| {
        let mut m = ComplexMatrix::zeros(3);
        m[(i, j)] = c(1.0, 0.0);
        m[(j, i)] = c(1.0, 0.0);
        m
    };
    let asym = |i: usize, j: usize| {
        let mut m = ComplexMatrix::zeros(3);
        m[(i, j)] = c(0.0, -1.0);
        m[(j, i)] = c(0.0, 1.0);
        m
    };
    let s3 = 1.0 / 3f64.sqrt();
    let mut l8 = ComplexMatrix::zeros(3);
    l8[(0, 0)] = c(s3, 0.0);
    l8[(1, 1)] = c(s3, 0.0);
    l8[(2, 2)] = c(-2.0 * s3, 0.0);
    [
        sym(0, 1),
        asym(0, 1),
        ComplexMatrix::from_diag(&[1.0, -1.0, 0.0]),
        sym(0, 2),
        asym(0, 2),
        sym(1, 2),
        asym(1, 2),
        l8,
    ]
}

/// Eight-component Gell-Mann Bloch vector and its length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GmBloch {
    pub g: [f64; 8],
    pub r_g: f64,
}

impl GmBloch {
    pub fn new(g: [f64; 8]) -> Self {
        Self { g, r_g: g.iter().map(|x| x * x).sum::<f64>().sqrt() }
    }
}

pub fn to_gm(rho: &ComplexMatrix) -> Result<GmBloch> {
    if rho.dim() != 3 {
        return Err(Error::NotAState(format!("expected 3x3, got {0}x{0}", rho.dim())));
    }
    let herm = rho.hermitian_deviation();
    if herm > 1e-10 {
        return Err(Error::NotAState(format!("not Hermitian (deviation {herm:e})")));
    }
    let tr = rho.trace().re;
    if (tr - 1.0).abs() > 1e-10 {
        return Err(Error::NotAState(format!("trace {tr} differs from 1")));
    }
    let basis = gm_basis();
    Ok(GmBloch::new(std::array::from_fn(|i| 1.5 * basis[i].trace_product(rho).re)))
}

/// `(I + sum g_i L_i)/3`. Positivity is not checked.
pub fn from_gm(g: &[f64; 8]) -> ComplexMatrix {
    let basis = gm_basis();
    let mut m = ComplexMatrix::identity(3);
    for (gi, li) in g.iter().zip(basis.iter()) {
        m = &m + &li.scale_real(*gi);
    }
    m.scale_real(1.0 / 3.0)
}

/// `(r^2 - 3)^2 (4r^2 - 3)/729 + (2 - 2r^2 - 27D) D`, equal to the eigenvalue
/// discriminant `prod (l_j - l_k)^2` of a state with Gell-Mann radius `r`
/// and determinant `D`.
pub fn gm_numerator(r: f64, det: f64) -> f64 {
    let r2 = r * r;
    (r2 - 3.0).powi(2) * (4.0 * r2 - 3.0) / 729.0 + (2.0 - 2.0 * r2 - 27.0 * det) * det
}

/// Hilbert-Schmidt density in Gell-Mann coordinates, `numerator / r^7`.
pub fn hs_density_gm(g: &[f64; 8]) -> Result<f64> {
    let b = GmBloch::new(*g);
    if b.r_g == 0.0 {
        return Err(Error::OriginSingularity);
    }
    let d = from_gm(g).det().re;
    Ok(gm_numerator(b.r_g, d) / b.r_g.powi(7))
}

/// Bures density in Gell-Mann coordinates,
/// `numerator / (r^7 (3 - r^2 - 9D) sqrt(D))`. `signed` behaves as in
/// [`bures_density_bloch`](crate::ensembles::bures_density_bloch).
pub fn bures_density_gm(g: &[f64; 8], signed: bool) -> Result<f64> {
    let b = GmBloch::new(*g);
    if b.r_g == 0.0 {
        return Err(Error::OriginSingularity);
    }
    let d = from_gm(g).det().re;
    let gap = 3.0 - b.r_g * b.r_g - 9.0 * d;
    let root = if signed {
        d.signum() * d.abs().sqrt()
    } else {
        if d <= 0.0 {
            return Err(Error::DegenerateBures(format!("Det(rho) = {d:e}")));
        }
        if gap <= 0.0 {
            return Err(Error::DegenerateBures(format!("3 - r^2 - 9 Det(rho) = {gap:e}")));
        }
        d.sqrt()
    };
    Ok(gm_numerator(b.r_g, d) / (b.r_g.powi(7) * gap * root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{discriminant, sample_hs};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn basis_properties() {
        let b = gm_basis();
        assert_eq!(b[2], ComplexMatrix::from_diag(&[1.0, -1.0, 0.0]));
        for (i, li) in b.iter().enumerate() {
            assert_eq!(li.hermitian_deviation(), 0.0);
            assert!(li.trace().norm() < 1e-15);
            for (j, lj) in b.iter().enumerate() {
                let want = if i == j { 2.0 } else { 0.0 };
                assert!((li.trace_product(lj) - want).norm() < 1e-14, "({i}, {j})");
            }
        }
    }

    #[test]
    fn coordinate_examples() {
        let mixed = to_gm(&ComplexMatrix::identity(3).scale_real(1.0 / 3.0)).unwrap();
        assert!(mixed.g.iter().all(|x| x.abs() < 1e-15));
        let zero = to_gm(&ComplexMatrix::from_diag(&[1.0, 0.0, 0.0])).unwrap();
        for (i, x) in zero.g.iter().enumerate() {
            assert_eq!(x.abs() > 1e-12, i == 2 || i == 7, "component {i}");
        }
        assert!((zero.r_g - 3f64.sqrt()).abs() < 1e-14);
        assert!(gm_numerator(zero.r_g, 0.0).abs() < 1e-14);
        assert!(to_gm(&ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn round_trip_and_cross_checks() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..1000 {
            let s = sample_hs(&mut rng);
            let gm = to_gm(&s.rho).unwrap();
            let back = from_gm(&gm.g);
            assert!(back.max_abs_diff(&s.rho) < 1e-12);
            let purity = s.rho.trace_product(&s.rho).re;
            assert!((purity - (3.0 + 2.0 * gm.r_g * gm.r_g) / 9.0).abs() < 1e-12);
            assert!(gm.r_g <= 3f64.sqrt() + 1e-12);
            assert!((back.det().re - s.det).abs() < 1e-10);
            let e = back.herm_eigvals(1e-10).unwrap();
            assert!(e.iter().zip(&s.eigs).all(|(a, b)| (a - b).abs() < 1e-10));
            let disc = discriminant(&s.eigs);
            if disc > 1e-14 {
                assert!((gm_numerator(gm.r_g, s.det) - disc).abs() <= 1e-8 * disc);
                let bures = bures_density_gm(&gm.g, false).unwrap();
                assert!(bures > 0.0);
            }
            assert!(hs_density_gm(&gm.g).unwrap() >= 0.0);
        }
    }

    #[test]
    fn origin_and_sign() {
        assert_eq!(hs_density_gm(&[0.0; 8]), Err(Error::OriginSingularity));
        // diag(2.6, -0.6, 1)/3: one negative eigenvalue.
        let mut g = [0.0; 8];
        g[2] = 1.6;
        let d = from_gm(&g).det().re;
        assert!(d < 0.0);
        assert!(bures_density_gm(&g, true).unwrap() < 0.0);
        assert!(matches!(bures_density_gm(&g, false), Err(Error::DegenerateBures(_))));
    }
}
