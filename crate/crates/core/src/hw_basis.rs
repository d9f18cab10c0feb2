//! Heisenberg-Weyl displacement operators.
//!
//! For dimension `d` the operators are `U_pq = w^(-pq/2) Z^p X^q` with
//! `w = exp(2 pi i / d)`, `Z = diag(1, w, ..., w^(d-1))` and `X` the cyclic
//! shift with ones at `(i, i+1 mod d)`. The half-integer power is fixed as
//! `w^(1/2) = exp(i pi / d)`. In dimension 3 the nine matrices are also
//! written out by hand ([`qutrit_weyl`]); a unit test checks that the generic
//! formula reproduces them entry for entry.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;

/// Index pair `(p, q)` of a displacement operator, both reduced mod `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WeylIndex {
    pub p: usize,
    pub q: usize,
}

impl WeylIndex {
    pub fn new(p: usize, q: usize, d: usize) -> Self {
        Self { p: p % d, q: q % d }
    }

    pub fn is_identity(&self) -> bool {
        self.p == 0 && self.q == 0
    }
}

fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// The displacement operator `U_pq` in dimension `d` from the generic formula.
pub fn weyl_op(d: usize, idx: WeylIndex) -> ComplexMatrix {
    assert!(d >= 2, "dimension must be at least 2");
    let (p, q) = (idx.p % d, idx.q % d);
    let mut m = ComplexMatrix::zeros(d);
    let df = d as f64;
    // w^(-pq/2) = exp(-i pi p q / d).
    let prefactor = cis(-PI * (p * q) as f64 / df);
    for i in 0..d {
        // (Z^p X^q)_{i, i+q} = w^(p i).
        let phase = cis(2.0 * PI * ((p * i) % d) as f64 / df);
        m[(i, (i + q) % d)] = prefactor * phase;
    }
    m
}

/// The nine qutrit operators written out explicitly, indexed `[p][q]`.
pub fn qutrit_weyl() -> [[ComplexMatrix; 3]; 3] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let w = cis(2.0 * PI / 3.0);
    let w2 = cis(4.0 * PI / 3.0);
    let w_half = cis(PI / 3.0);
    let w_mhalf = cis(-PI / 3.0);
    let m = |rows: [[Complex64; 3]; 3]| {
        ComplexMatrix::from_rows(&rows.map(|r| r.to_vec())).expect("3x3 literal")
    };
    [
        [
            m([[one, z, z], [z, one, z], [z, z, one]]),
            m([[z, one, z], [z, z, one], [one, z, z]]),
            m([[z, z, one], [one, z, z], [z, one, z]]),
        ],
        [
            m([[one, z, z], [z, w, z], [z, z, w2]]),
            m([[z, w_mhalf, z], [z, z, w_half], [-one, z, z]]),
            m([[z, z, w2], [one, z, z], [z, w, z]]),
        ],
        [
            m([[one, z, z], [z, w2, z], [z, z, w]]),
            m([[z, w2, z], [z, z, w], [one, z, z]]),
            m([[z, z, w], [one, z, z], [z, w2, z]]),
        ],
    ]
}

/// `U_pq` for `d = 3`, taken from the explicit table.
pub fn qutrit_op(p: usize, q: usize) -> ComplexMatrix {
    qutrit_weyl()[p % 3][q % 3].clone()
}

/// `max |Tr(U_pq^dagger U_p'q') - d delta|` over all index pairs.
pub fn orthonormality_check(d: usize) -> f64 {
    let ops: Vec<ComplexMatrix> =
        (0..d).flat_map(|p| (0..d).map(move |q| WeylIndex { p, q })).map(|i| weyl_op(d, i)).collect();
    let mut worst: f64 = 0.0;
    for (a, ua) in ops.iter().enumerate() {
        let ua_dag = ua.adjoint();
        for (b, ub) in ops.iter().enumerate() {
            let expected = if a == b { d as f64 } else { 0.0 };
            let got = ua_dag.trace_product(ub);
            worst = worst.max((got - Complex64::new(expected, 0.0)).norm());
        }
    }
    worst
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// Partition of the non-identity operators into `d + 1` commuting classes of
/// `d - 1` members each.
///
/// Classes are grown greedily by direct commutator tests; members are sorted
/// lexicographically and classes are ordered by their smallest member.
pub fn commuting_classes(d: usize) -> Result<Vec<Vec<WeylIndex>>> {
    if !is_prime(d) {
        return Err(Error::NotPrime(d));
    }
    let indices: Vec<WeylIndex> = (0..d)
        .flat_map(|p| (0..d).map(move |q| WeylIndex { p, q }))
        .filter(|i| !i.is_identity())
        .collect();
    let ops: Vec<ComplexMatrix> = indices.iter().map(|&i| weyl_op(d, i)).collect();
    let commute = |a: usize, b: usize| commutator_norm(&ops[a], &ops[b]) <= 1e-12;

    let mut assigned = vec![false; indices.len()];
    let mut classes = Vec::new();
    for seed in 0..indices.len() {
        if assigned[seed] {
            continue;
        }
        let mut class = vec![seed];
        assigned[seed] = true;
        for cand in seed + 1..indices.len() {
            if !assigned[cand] && class.iter().all(|&m| commute(m, cand)) {
                class.push(cand);
                assigned[cand] = true;
            }
        }
        classes.push(class.into_iter().map(|k| indices[k]).collect::<Vec<_>>());
    }
    Ok(classes)
}

/// Frobenius norm of `AB - BA`.
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (&(a * b) - &(b * a)).norm()
}
