//! The four mutually unbiased qutrit bases built from two phases.
//!
//! A ket unbiased to the computational basis is `(1, e^{i delta}, e^{i gamma})/sqrt 3`.
//! Its weights are `n2 = 0` and `n1, n3, n4` given by the moduli of three
//! phase sums (see [`closed_form_params`]). Shifting `(delta, gamma)` by
//! `(+2pi/3, -2pi/3)` or `(-2pi/3, +2pi/3)` gives the orthonormal partners;
//! shifting `delta` alone by `2pi/3` or `4pi/3` moves to the next unbiased
//! basis, and the weight moduli permute cyclically.
//!
//! ```
//! use qutrit_bloch::mub::four_mubs;
//!
//! let fam = four_mubs(0.0, 0.0);
//! assert!((fam.weight_points[1][0] - 1.0).abs() < 1e-14);
//! assert!(fam.check().max_inter_deviation < 1e-12);
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch_param::{canonical_pair, BlochParams};
use crate::geometry::ket_params;

const TWO_PI_3: f64 = 2.0 * PI / 3.0;

fn cis(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

/// `(1, e^{i delta}, e^{i gamma}) / sqrt 3`.
pub fn ket_amplitudes(delta: f64, gamma: f64) -> [Complex64; 3] {
    let s = 1.0 / 3f64.sqrt();
    [Complex64::new(s, 0.0), cis(delta) * s, cis(gamma) * s]
}

/// Weights and angles of the ket at `(delta, gamma)` from the phase sums
///
/// ```text
/// 3 n1 e^{i t1} = e^{-i d} + e^{-i(g - d)} + e^{i g}
/// 3 n3 e^{i t3} = e^{i d} + w e^{-i g} + w^2 e^{i(g - d)}
/// 3 n4 e^{i t4} = e^{i d} + w^2 e^{-i g} + w e^{i(g - d)}
/// ```
///
/// with `w = e^{2 pi i/3}`, followed by canonicalization. A vanishing sum
/// gets angle 0.
pub fn closed_form_params(delta: f64, gamma: f64) -> BlochParams {
    let w = cis(TWO_PI_3);
    let w2 = cis(-TWO_PI_3);
    let sums = [
        cis(-delta) + cis(-(gamma - delta)) + cis(gamma),
        cis(delta) + w * cis(-gamma) + w2 * cis(gamma - delta),
        cis(delta) + w2 * cis(-gamma) + w * cis(gamma - delta),
    ];
    let mut n = [0.0; 4];
    let mut theta = [0.0; 4];
    for (slot, s) in [0, 2, 3].into_iter().zip(sums) {
        let m = s.norm() / 3.0;
        let t = if m < 1e-14 { 0.0 } else { s.arg() };
        let (ni, ti) = canonical_pair(m, t);
        n[slot] = ni;
        theta[slot] = ti;
    }
    BlochParams::from_raw(n, theta)
}

/// One ket with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MubKet {
    /// `[re, im]` per amplitude.
    pub amplitudes: [[f64; 2]; 3],
    pub bloch: BlochParams,
}

impl MubKet {
    pub fn from_amplitudes(amps: &[Complex64; 3]) -> Self {
        let bloch = ket_params(amps).expect("normalized ket");
        Self { amplitudes: amps.map(|z| [z.re, z.im]), bloch }
    }

    pub fn ket(&self) -> [Complex64; 3] {
        self.amplitudes.map(|[re, im]| Complex64::new(re, im))
    }
}

/// Amplitudes and parameters of the ket at `(delta, gamma)`; the parameters
/// are read back from the density matrix.
pub fn ket_from_angles(delta: f64, gamma: f64) -> MubKet {
    MubKet::from_amplitudes(&ket_amplitudes(delta, gamma))
}

/// The ket at `(delta, gamma)` and its two orthonormal partners, in shift
/// order 0, +2pi/3, -2pi/3 on `delta`.
pub fn onb_from_ket(delta: f64, gamma: f64) -> [[Complex64; 3]; 3] {
    [
        ket_amplitudes(delta, gamma),
        ket_amplitudes(delta + TWO_PI_3, gamma - TWO_PI_3),
        ket_amplitudes(delta - TWO_PI_3, gamma + TWO_PI_3),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MubBasis {
    pub label: String,
    pub kets: Vec<MubKet>,
}

/// The computational basis `Z` and the bases `N`, `P`, `Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MubFamily {
    pub delta: f64,
    pub gamma: f64,
    pub bases: Vec<MubBasis>,
    /// Weight moduli `|n_i|` shared by the kets of each basis. Moduli are
    /// used because the sign of a weight depends on the canonical angle
    /// range and can differ between kets at the same point.
    pub weight_points: [[f64; 4]; 4],
}

/// Largest deviations from the defining properties of a MUB family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MubCheck {
    pub max_norm_deviation: f64,
    /// Largest `|<a|b>|^2` between distinct kets of one basis.
    pub max_intra_overlap: f64,
    /// Largest `| |<a|b>|^2 - 1/3 |` across bases.
    pub max_inter_deviation: f64,
    /// Largest spread of the weight moduli inside one basis.
    pub max_weight_spread: f64,
    /// Distance of the `P` and `Q` weight points from the cyclic images of `N`.
    pub cyclic_deviation: f64,
}

fn inner(a: &[Complex64; 3], b: &[Complex64; 3]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn moduli(p: &BlochParams) -> [f64; 4] {
    p.n.map(f64::abs)
}

pub fn four_mubs(delta: f64, gamma: f64) -> MubFamily {
    let comp: [[Complex64; 3]; 3] = std::array::from_fn(|k| {
        std::array::from_fn(|i| if i == k { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    });
    let sets = [
        ("Z", comp),
        ("N", onb_from_ket(delta, gamma)),
        ("P", onb_from_ket(delta + TWO_PI_3, gamma)),
        ("Q", onb_from_ket(delta + 2.0 * TWO_PI_3, gamma)),
    ];
    let bases: Vec<MubBasis> = sets
        .iter()
        .map(|(label, kets)| MubBasis {
            label: label.to_string(),
            kets: kets.iter().map(MubKet::from_amplitudes).collect(),
        })
        .collect();
    let weight_points = std::array::from_fn(|b| moduli(&bases[b].kets[0].bloch));
    MubFamily { delta, gamma, bases, weight_points }
}

/// `(m1, 0, m3, m4) -> (m4, 0, m1, m3)`.
pub fn cycle_weights(m: &[f64; 4]) -> [f64; 4] {
    [m[3], m[1], m[0], m[2]]
}

impl MubFamily {
    pub fn check(&self) -> MubCheck {
        let kets: Vec<Vec<[Complex64; 3]>> =
            self.bases.iter().map(|b| b.kets.iter().map(MubKet::ket).collect()).collect();
        let mut c = MubCheck {
            max_norm_deviation: 0.0,
            max_intra_overlap: 0.0,
            max_inter_deviation: 0.0,
            max_weight_spread: 0.0,
            cyclic_deviation: 0.0,
        };
        for (bi, basis) in kets.iter().enumerate() {
            for (ki, a) in basis.iter().enumerate() {
                c.max_norm_deviation = c.max_norm_deviation.max((inner(a, a).re - 1.0).abs());
                for b in &basis[ki + 1..] {
                    c.max_intra_overlap = c.max_intra_overlap.max(inner(a, b).norm_sqr());
                }
                for other in &kets[bi + 1..] {
                    for b in other {
                        c.max_inter_deviation = c.max_inter_deviation.max((inner(a, b).norm_sqr() - 1.0 / 3.0).abs());
                    }
                }
            }
            let w0 = self.weight_points[bi];
            for k in &self.bases[bi].kets {
                let m = moduli(&k.bloch);
                let spread = (0..4).map(|i| (m[i] - w0[i]).abs()).fold(0.0, f64::max);
                c.max_weight_spread = c.max_weight_spread.max(spread);
            }
        }
        let dist = |a: [f64; 4], b: [f64; 4]| (0..4).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max);
        let p = cycle_weights(&self.weight_points[1]);
        let q = cycle_weights(&p);
        c.cyclic_deviation = dist(p, self.weight_points[2]).max(dist(q, self.weight_points[3]));
        c
    }
}
