//! Eight-parameter description of a qutrit: four signed weights and four
//! angles.
//!
//! Expanding `rho = (1/3) sum_pq b_pq U_pq` in the Heisenberg-Weyl basis, the
//! eight nontrivial coefficients pair up inside the four commuting classes:
//!
//! | weight | coefficient            | partner                                   |
//! |--------|------------------------|-------------------------------------------|
//! | `n1`   | `b01 = n1 e^{i t1}`    | `b02 = conj(b01)`                         |
//! | `n2`   | `b10 = n2 e^{i t2}`    | `b20 = conj(b10)`                         |
//! | `n3`   | `b12 = n3 e^{i t3}`    | `b21 = conj(b12) e^{2 pi i / 3}`          |
//! | `n4`   | `b22 = n4 e^{i t4}`    | `b11 = conj(b22) e^{pi i / 3}`            |
//!
//! Angles are kept in `[0, pi)` with signed weights, using
//! `n e^{i t} = (-n) e^{i (t - pi)}`. That makes the weight vector a point of
//! the closed unit ball in four dimensions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hw_basis::qutrit_weyl;
use crate::matcore::ComplexMatrix;

/// Slack allowed on `sum n_i^2 <= 1` by [`BlochParams::new`].
pub const BALL_SLACK: f64 = 1e-9;

const TWO_PI_3: f64 = 2.0 * PI / 3.0;

/// Weights and angles of a qutrit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochParams {
    pub n: [f64; 4],
    pub theta: [f64; 4],
}

/// Brings `(n, theta)` to canonical form: `theta` in `[0, pi)`, sign moved
/// into the weight, and `theta = 0` whenever `n = 0`.
pub fn canonical_pair(n: f64, theta: f64) -> (f64, f64) {
    if n == 0.0 {
        return (0.0, 0.0);
    }
    let mut t = theta.rem_euclid(2.0 * PI);
    if t >= 2.0 * PI {
        t -= 2.0 * PI;
    }
    if t >= PI {
        let flipped = t - PI;
        // rem_euclid can land a hair below 2 pi.
        if flipped >= PI {
            (n, 0.0)
        } else {
            (-n, flipped)
        }
    } else {
        (n, t)
    }
}

impl BlochParams {
    /// Validated constructor: finite values, `|n_i| <= 1`, `|n|^2 <= 1`
    /// (with [`BALL_SLACK`]). Angles are canonicalized.
    pub fn new(n: [f64; 4], theta: [f64; 4]) -> Result<Self> {
        if n.iter().chain(&theta).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("Bloch parameters must be finite".into()));
        }
        if n.iter().any(|x| x.abs() > 1.0 + BALL_SLACK) {
            return Err(Error::InvalidInput("weights must lie in [-1, 1]".into()));
        }
        let p = Self::from_raw(n, theta);
        if p.norm_sq() > 1.0 + BALL_SLACK {
            return Err(Error::OutsideSphere { norm: p.radius() });
        }
        Ok(p)
    }

    /// Canonicalizes angles without checking the unit-ball condition, for
    /// probing points outside the state space.
    pub fn from_raw(n: [f64; 4], theta: [f64; 4]) -> Self {
        let mut out = Self { n, theta };
        for i in 0..4 {
            let (ni, ti) = canonical_pair(n[i], theta[i]);
            out.n[i] = ni;
            out.theta[i] = ti;
        }
        out
    }

    /// The maximally mixed state.
    pub fn center() -> Self {
        Self { n: [0.0; 4], theta: [0.0; 4] }
    }

    pub fn norm_sq(&self) -> f64 {
        self.n.iter().map(|x| x * x).sum()
    }

    /// Length `r` of the weight vector.
    pub fn radius(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `Tr rho^2 = (1 + 2 |n|^2) / 3`.
    pub fn purity(&self) -> f64 {
        (1.0 + 2.0 * self.norm_sq()) / 3.0
    }

    /// The eight complex coefficients `b_pq`, indexed `[p][q]`, with
    /// `b_00 = 1`.
    pub fn coefficients(&self) -> [[Complex64; 3]; 3] {
        let [n1, n2, n3, n4] = self.n;
        let [t1, t2, t3, t4] = self.theta;
        let e = |r: f64, t: f64| Complex64::from_polar(r, t);
        let mut b = [[Complex64::new(0.0, 0.0); 3]; 3];
        b[0][0] = Complex64::new(1.0, 0.0);
        b[0][1] = e(n1, t1);
        b[0][2] = e(n1, -t1);
        b[1][0] = e(n2, t2);
        b[2][0] = e(n2, -t2);
        b[1][2] = e(n3, t3);
        b[2][1] = e(n3, -(t3 - TWO_PI_3));
        b[2][2] = e(n4, t4);
        b[1][1] = e(n4, -(t4 - PI / 3.0));
        b
    }

    /// The 3x3 density matrix written out entry by entry. Hermitian with unit
    /// trace; positivity is not implied.
    pub fn to_density(&self) -> ComplexMatrix {
        let [n1, n2, n3, n4] = self.n;
        let [t1, t2, t3, t4] = self.theta;
        let e = |r: f64, t: f64| Complex64::from_polar(r, t);
        let c = TWO_PI_3;
        let sqrt3 = 3f64.sqrt();
        let d0 = Complex64::new(1.0 + 2.0 * n2 * t2.cos(), 0.0);
        let d1 = Complex64::new(1.0 - n2 * t2.cos() - sqrt3 * n2 * t2.sin(), 0.0);
        let d2 = Complex64::new(1.0 - n2 * t2.cos() + sqrt3 * n2 * t2.sin(), 0.0);
        let m01 = e(n1, t1) + e(n3, -t3) + e(n4, -t4);
        let m02 = e(n1, -t1) + e(n3, t3 - c) + e(n4, t4 + c);
        let m12 = e(n1, t1) + e(n3, -(t3 + c)) + e(n4, -(t4 - c));
        let rows = [[d0, m01, m02], [m01.conj(), d1, m12], [m02.conj(), m12.conj(), d2]];
        let data = rows.iter().flatten().map(|z| z / 3.0).collect();
        ComplexMatrix::new(3, data).expect("finite parameters give finite entries")
    }

    /// Inverse of [`BlochParams::to_density`]: reads `b01, b10, b12, b22`
    /// and checks the partner coefficients against the pairing table.
    pub fn from_density(rho: &ComplexMatrix, tol: f64) -> Result<Self> {
        if rho.dim() != 3 {
            return Err(Error::NotAState(format!("expected a 3x3 matrix, got {0}x{0}", rho.dim())));
        }
        let herm = rho.hermitian_deviation();
        if herm > tol {
            return Err(Error::NotAState(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = rho.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::NotAState(format!("trace {tr} differs from 1")));
        }
        let b = hw_coefficients(rho);
        let partners = [
            (b[0][2], b[0][1].conj()),
            (b[2][0], b[1][0].conj()),
            (b[2][1], b[1][2].conj() * Complex64::from_polar(1.0, TWO_PI_3)),
            (b[1][1], b[2][2].conj() * Complex64::from_polar(1.0, PI / 3.0)),
        ];
        let deviation = partners.iter().map(|(a, w)| (a - w).norm()).fold(0.0, f64::max);
        if deviation > tol {
            return Err(Error::PairingViolation { deviation });
        }
        let mut n = [0.0; 4];
        let mut theta = [0.0; 4];
        for (i, z) in [b[0][1], b[1][0], b[1][2], b[2][2]].into_iter().enumerate() {
            let r = z.norm();
            let t = if r < 1e-14 { 0.0 } else { z.arg() };
            let (ni, ti) = canonical_pair(r, t);
            n[i] = ni;
            theta[i] = ti;
        }
        Ok(Self { n, theta })
    }

    pub fn to_polar(&self) -> PolarParams {
        PolarParams::from_weights(self.n)
    }

    /// Weights from polar coordinates, paired with the given angles.
    pub fn from_polar(pp: &PolarParams, theta: [f64; 4]) -> Self {
        Self::from_raw(pp.weights(), theta)
    }
}

/// `b_pq = Tr(rho U_pq^dagger)` for all nine operators, indexed `[p][q]`.
pub fn hw_coefficients(rho: &ComplexMatrix) -> [[Complex64; 3]; 3] {
    let ops = qutrit_weyl();
    let mut b = [[Complex64::new(0.0, 0.0); 3]; 3];
    for p in 0..3 {
        for q in 0..3 {
            b[p][q] = rho.trace_product(&ops[p][q].adjoint());
        }
    }
    b
}

/// Four-dimensional spherical coordinates of the weight vector:
/// `n1 = r cos z1`, `n2 = r sin z1 cos z2`, `n3 = r sin z1 sin z2 cos z3`,
/// `n4 = r sin z1 sin z2 sin z3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarParams {
    pub r: f64,
    pub zeta: [f64; 3],
}

impl PolarParams {
    pub fn new(r: f64, zeta: [f64; 3]) -> Self {
        Self { r, zeta }
    }

    /// Inverse transform. `zeta1, zeta2` land in `[0, pi]`, `zeta3` in
    /// `(-pi, pi]`; the origin maps to all-zero angles.
    pub fn from_weights(n: [f64; 4]) -> Self {
        let [n1, n2, n3, n4] = n;
        let r = n.iter().map(|x| x * x).sum::<f64>().sqrt();
        let z1 = (n2 * n2 + n3 * n3 + n4 * n4).sqrt().atan2(n1);
        let z2 = (n3 * n3 + n4 * n4).sqrt().atan2(n2);
        let z3 = n4.atan2(n3);
        Self { r, zeta: [z1, z2, z3] }
    }

    pub fn weights(&self) -> [f64; 4] {
        let [z1, z2, z3] = self.zeta;
        let r = self.r;
        [
            r * z1.cos(),
            r * z1.sin() * z2.cos(),
            r * z1.sin() * z2.sin() * z3.cos(),
            r * z1.sin() * z2.sin() * z3.sin(),
        ]
    }
}

/// JSON state document: a matrix as nested `[re, im]` pairs, Bloch
/// parameters, or both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bloch: Option<BlochParams>,
}

impl StateDocument {
    /// A document carrying both representations of `p`.
    pub fn from_params(p: &BlochParams) -> Self {
        Self { matrix: Some(matrix_to_pairs(&p.to_density())), bloch: Some(*p) }
    }

    /// A document carrying both representations of `rho`.
    pub fn from_matrix(rho: &ComplexMatrix, tol: f64) -> Result<Self> {
        let p = BlochParams::from_density(rho, tol)?;
        Ok(Self { matrix: Some(matrix_to_pairs(rho)), bloch: Some(p) })
    }

    /// Resolves the document to a matrix and its parameters. The matrix wins
    /// when both are present.
    pub fn resolve(&self, tol: f64) -> Result<(ComplexMatrix, BlochParams)> {
        match (&self.matrix, &self.bloch) {
            (Some(m), _) => {
                let rho = pairs_to_matrix(m)?;
                let p = BlochParams::from_density(&rho, tol)?;
                Ok((rho, p))
            }
            (None, Some(b)) => {
                let p = BlochParams::new(b.n, b.theta)?;
                Ok((p.to_density(), p))
            }
            (None, None) => Err(Error::InvalidInput("state document needs \"matrix\" or \"bloch\"".into())),
        }
    }
}

pub fn matrix_to_pairs(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    m.rows().into_iter().map(|r| r.into_iter().map(|z| [z.re, z.im]).collect()).collect()
}

pub fn pairs_to_matrix(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<Complex64>> =
        rows.iter().map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect();
    ComplexMatrix::from_rows(&rows)
}
