//! Unital qutrit channels that are diagonal in the displacement basis.
//!
//! Such a channel multiplies each coefficient `b_pq` by `lambda_pq`. Keeping
//! Hermiticity pairs the eigenvalues as
//!
//! ```text
//! l01 = l1 e^{i f1}   l02 = l1 e^{-i f1}
//! l10 = l2 e^{i f2}   l20 = l2 e^{-i f2}
//! l12 = l3 e^{i f3}   l21 = l3 e^{-i f3}
//! l22 = l4 e^{i f4}   l11 = l4 e^{-i f4}
//! ```
//!
//! so in weight/angle coordinates the channel is `n_i -> l_i n_i`,
//! `theta_i -> theta_i + f_i`. With all `f_i = 0` complete positivity is
//! the five linear inequalities of [`polytope_check`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch_param::BlochParams;
use crate::hw_basis::qutrit_weyl;
use crate::matcore::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitalMap {
    /// May be negative, which is the same as a phase of `pi`.
    pub lambda: [f64; 4],
    pub phi: [f64; 4],
}

impl UnitalMap {
    pub fn new(lambda: [f64; 4], phi: [f64; 4]) -> Self {
        Self { lambda, phi }
    }

    /// Zero phases.
    pub fn real(lambda: [f64; 4]) -> Self {
        Self { lambda, phi: [0.0; 4] }
    }

    pub fn identity() -> Self {
        Self::real([1.0; 4])
    }

    /// Multiplier `lambda_pq` of each displacement operator, indexed `[p][q]`.
    pub fn eigenvalues(&self) -> [[Complex64; 3]; 3] {
        let e = |i: usize, sign: f64| Complex64::from_polar(1.0, sign * self.phi[i]) * self.lambda[i];
        [
            [Complex64::new(1.0, 0.0), e(0, 1.0), e(0, -1.0)],
            [e(1, 1.0), e(3, -1.0), e(2, 1.0)],
            [e(1, -1.0), e(2, -1.0), e(3, 1.0)],
        ]
    }

    /// Action on weight/angle parameters.
    pub fn apply(&self, p: &BlochParams) -> BlochParams {
        BlochParams::from_raw(
            std::array::from_fn(|i| self.lambda[i] * p.n[i]),
            std::array::from_fn(|i| p.theta[i] + self.phi[i]),
        )
    }

    /// `Phi(X) = (1/3) sum_pq lambda_pq Tr(U_pq^dagger X) U_pq` on any 3x3 operator.
    pub fn channel_apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let ops = qutrit_weyl();
        let lam = self.eigenvalues();
        let mut out = ComplexMatrix::zeros(3);
        for p in 0..3 {
            for q in 0..3 {
                let coeff = lam[p][q] * ops[p][q].adjoint().trace_product(x) / 3.0;
                out = &out + &ops[p][q].scale(coeff);
            }
        }
        out
    }

    /// `C = sum_ij E_ij (x) Phi(E_ij)`.
    pub fn choi_matrix(&self) -> ComplexMatrix {
        let mut c = ComplexMatrix::zeros(9);
        for i in 0..3 {
            for j in 0..3 {
                let e = ComplexMatrix::unit(3, i, j);
                let block = e.kron(&self.channel_apply(&e)).expect("9x9 fits");
                c = &c + &block;
            }
        }
        c
    }

    pub fn choi_min_eigenvalue(&self) -> f64 {
        let c = self.choi_matrix();
        // Phases make the Choi matrix Hermitian only up to rounding.
        let c = (&c + &c.adjoint()).scale_real(0.5);
        c.herm_eigvals(1e-10).expect("Choi matrix is Hermitian")[0]
    }

    /// Completely positive iff the Choi matrix has no eigenvalue below `-tol`.
    pub fn is_cp(&self, tol: f64) -> bool {
        self.choi_min_eigenvalue() >= -tol
    }

    /// First `other`, then `self`.
    pub fn compose(&self, other: &UnitalMap) -> UnitalMap {
        UnitalMap {
            lambda: std::array::from_fn(|i| self.lambda[i] * other.lambda[i]),
            phi: std::array::from_fn(|i| self.phi[i] + other.phi[i]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolytopeCheck {
    pub inside: bool,
    pub slacks: [f64; 5],
}

/// The five complete-positivity inequalities for zero phases:
///
/// ```text
/// 1 + 2l1 - l2 - l3 - l4 >= 0    (and the three permutations)
/// 1 + 2(l1 + l2 + l3 + l4) >= 0
/// ```
pub fn polytope_check(lambda: &[f64; 4]) -> PolytopeCheck {
    let total: f64 = lambda.iter().sum();
    let mut slacks = [0.0; 5];
    for i in 0..4 {
        slacks[i] = 1.0 + 3.0 * lambda[i] - total;
    }
    slacks[4] = 1.0 + 2.0 * total;
    PolytopeCheck { inside: slacks.iter().all(|&s| s >= -1e-12), slacks }
}

pub fn polytope_vertices() -> [[f64; 4]; 5] {
    let h = -0.5;
    [[1.0, 1.0, 1.0, 1.0], [1.0, h, h, h], [h, 1.0, h, h], [h, h, 1.0, h], [h, h, h, 1.0]]
}

fn tight_set(v: &[f64; 4]) -> Vec<usize> {
    let s = polytope_check(v).slacks;
    (0..5).filter(|&k| s[k].abs() < 1e-12).collect()
}

/// Vertex pairs joined by an edge: pairs lying together on at least three
/// of the bounding hyperplanes (an edge of a 4-polytope is cut out by three
/// facets).
pub fn polytope_edges() -> Vec<(usize, usize)> {
    let verts = polytope_vertices();
    let tight: Vec<Vec<usize>> = verts.iter().map(tight_set).collect();
    let mut edges = Vec::new();
    for a in 0..verts.len() {
        for b in a + 1..verts.len() {
            let shared = tight[a].iter().filter(|k| tight[b].contains(k)).count();
            if shared >= 3 {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Euclidean lengths of [`polytope_edges`], ascending.
pub fn edge_lengths() -> Vec<f64> {
    let v = polytope_vertices();
    let mut out: Vec<f64> = polytope_edges()
        .into_iter()
        .map(|(a, b)| (0..4).map(|i| (v[a][i] - v[b][i]).powi(2)).sum::<f64>().sqrt())
        .collect();
    out.sort_by(f64::total_cmp);
    out
}
