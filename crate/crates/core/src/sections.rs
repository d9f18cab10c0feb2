//! Coordinate sections of the weight ball.
//!
//! A section keeps one, two or three weights and zeroes the rest. The one-
//! and two-dimensional sections look the same along every axis; the four
//! three-dimensional sections differ in their cross term.
//!
//! The one- and two-section functions return `6 a3`, i.e. `(2/9)(...)`; the
//! three-section function returns `a3` itself so that it can be compared
//! directly with [`a3_closed_form`](crate::positivity::a3_closed_form).

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::positivity::{a3_reduced, max_a3_over_angles, AngleSearch, POSITIVITY_TOL};

const TWO_PI_3: f64 = 2.0 * PI / 3.0;

/// `6 a3 = (2/9)(1 - 3n^2 + 2n^3 cos 3t)` on a one-dimensional section.
pub fn one_section_a3(n: f64, theta: f64) -> f64 {
    2.0 / 9.0 * (1.0 - 3.0 * n * n + 2.0 * n.powi(3) * (3.0 * theta).cos())
}

/// Half-width `zeta` of the allowed angle windows for `|n| > 1/2`.
pub fn window_half_width(n: f64) -> f64 {
    (-1.0 / (2.0 * n.abs())).clamp(-1.0, 1.0).acos() - TWO_PI_3
}

/// Closed intervals of `theta in [0, pi]` with `one_section_a3 >= 0`.
pub fn one_section_window(n: f64) -> Vec<(f64, f64)> {
    if n.abs() <= 0.5 {
        return vec![(0.0, PI)];
    }
    let z = window_half_width(n);
    if n > 0.0 {
        vec![(0.0, z), (TWO_PI_3 - z, TWO_PI_3 + z)]
    } else {
        vec![(PI / 3.0 - z, PI / 3.0 + z), (PI - z, PI)]
    }
}

/// Feasible angle windows found by splitting `[0, pi]` into `cells` equal
/// cells and keeping those on which `one_section_a3` reaches zero somewhere.
/// Adjacent feasible cells are merged.
pub fn one_section_window_grid(n: f64, cells: usize) -> Vec<(f64, f64)> {
    let h = PI / cells as f64;
    let best_cos = |a: f64, b: f64| -> f64 {
        // Extreme of cos 3t over [a, b] in the direction that helps n^3 cos 3t.
        let (ca, cb) = ((3.0 * a).cos(), (3.0 * b).cos());
        if n >= 0.0 {
            let k = (3.0 * b / (2.0 * PI)).floor();
            if k * 2.0 * PI >= 3.0 * a { 1.0 } else { ca.max(cb) }
        } else {
            let k = ((3.0 * b - PI) / (2.0 * PI)).floor();
            if k * 2.0 * PI + PI >= 3.0 * a { -1.0 } else { ca.min(cb) }
        }
    };
    let mut out: Vec<(f64, f64)> = Vec::new();
    for k in 0..cells {
        let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
        let top = 1.0 - 3.0 * n * n + 2.0 * n.powi(3) * best_cos(a, b);
        if top < -1e-12 {
            continue;
        }
        match out.last_mut() {
            Some(last) if (last.1 - a).abs() < 0.5 * h => last.1 = b,
            _ => out.push((a, b)),
        }
    }
    out
}

/// `6 a3` on the two-dimensional section spanned by weights `i` and `j`.
pub fn two_section_a3(ni: f64, nj: f64, thetai: f64, thetaj: f64) -> f64 {
    2.0 / 9.0
        * (1.0 - 3.0 * ni * ni - 3.0 * nj * nj
            + 2.0 * ni.powi(3) * (3.0 * thetai).cos()
            + 2.0 * nj.powi(3) * (3.0 * thetaj).cos())
}

/// Whether the weight point `(ni, nj)` admits angles with `a3 >= 0`.
pub fn two_section_point_ok(ni: f64, nj: f64) -> bool {
    two_section_margin(ni, nj) >= -1e-12
}

/// The angle-maximized bracket `1 - 3ni^2 - 3nj^2 + 2|ni|^3 + 2|nj|^3`.
pub fn two_section_margin(ni: f64, nj: f64) -> f64 {
    1.0 - 3.0 * ni * ni - 3.0 * nj * nj + 2.0 * ni.abs().powi(3) + 2.0 * nj.abs().powi(3)
}

/// Weight axes (1-based) kept by each of the four three-sections.
pub const THREE_SECTION_AXES: [[usize; 3]; 4] = [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]];

/// `a3` on three-section `which` (1..=4). `n` and `theta` follow the axis
/// order in [`THREE_SECTION_AXES`].
pub fn three_section_a3(which: usize, n: [f64; 3], theta: [f64; 3]) -> Result<f64> {
    if !(1..=4).contains(&which) {
        return Err(Error::BadSelector(which));
    }
    let [x, y, z] = n;
    let [a, b, c] = theta;
    let cross = match which {
        1 => 6.0 * x * y * z * (a - b + c - PI / 3.0).cos(),
        2 => 6.0 * x * y * z * (a + b + c + PI / 3.0).cos(),
        3 => -6.0 * x * y * z * (a - b - c).cos(),
        _ => 6.0 * x * y * z * (a + b - c + PI / 3.0).cos(),
    };
    let reduced = 1.0 - 3.0 * (x * x + y * y + z * z)
        + 2.0 * (x.powi(3) * (3.0 * a).cos() + y.powi(3) * (3.0 * b).cos() + z.powi(3) * (3.0 * c).cos())
        + cross;
    Ok(reduced / 27.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionKind {
    One,
    Two,
    Three,
}

impl SectionKind {
    pub fn dims(self) -> usize {
        match self {
            SectionKind::One => 1,
            SectionKind::Two => 2,
            SectionKind::Three => 3,
        }
    }
}

/// How the angles are treated at each weight grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaPolicy {
    /// One angle per section axis, held fixed.
    Fixed(Vec<f64>),
    /// Maximize `a3` over the section's angles.
    Maximize { grid_steps: usize, refine: bool },
    /// One-sections only: the angle becomes a second grid axis over `[0, pi]`.
    Sweep,
}

impl Default for ThetaPolicy {
    fn default() -> Self {
        let s = AngleSearch::default();
        ThetaPolicy::Maximize { grid_steps: s.grid_steps, refine: s.refine }
    }
}

/// A grid over a coordinate section. Each weight axis is sampled at
/// `resolution` evenly spaced points in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionSpec {
    pub kind: SectionKind,
    /// 1-based weight indices.
    pub axes: Vec<usize>,
    pub resolution: usize,
    pub theta_policy: ThetaPolicy,
}

impl SectionSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if self.axes.len() != self.kind.dims() {
            return bad(format!("{:?} section needs {} axes, got {}", self.kind, self.kind.dims(), self.axes.len()));
        }
        if self.axes.iter().any(|a| !(1..=4).contains(a)) {
            return bad("axes must be in 1..=4".into());
        }
        for (i, a) in self.axes.iter().enumerate() {
            if self.axes[..i].contains(a) {
                return bad(format!("axis {a} repeated"));
            }
        }
        if self.resolution < 2 {
            return bad("resolution must be at least 2".into());
        }
        match &self.theta_policy {
            ThetaPolicy::Fixed(t) if t.len() != self.axes.len() => {
                bad(format!("expected {} fixed angles, got {}", self.axes.len(), t.len()))
            }
            ThetaPolicy::Fixed(t) if t.iter().any(|x| !x.is_finite()) => bad("angles must be finite".into()),
            ThetaPolicy::Maximize { grid_steps: 0, .. } => bad("grid_steps must be positive".into()),
            ThetaPolicy::Sweep if self.kind != SectionKind::One => bad("sweep is only defined for one-sections".into()),
            _ => Ok(()),
        }
    }

    /// Column names of the scan table.
    pub fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = self.axes.iter().map(|a| format!("n{a}")).collect();
        if self.theta_policy == ThetaPolicy::Sweep {
            cols.push(format!("theta{}", self.axes[0]));
        }
        cols.push("feasible".into());
        cols.push("a3_max".into());
        cols
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub coords: Vec<f64>,
    pub feasible: bool,
    /// `a3` at the fixed angles, or its maximum over the angles. NaN for
    /// weight points outside the unit ball under the maximizing policy.
    pub a3_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub columns: Vec<String>,
    pub rows: Vec<ScanRow>,
}

impl ScanTable {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for c in &row.coords {
                out.push_str(&format!("{c:.16e},"));
            }
            out.push_str(&format!("{},{:.16e}\n", u8::from(row.feasible), row.a3_max));
        }
        out
    }
}

fn axis_point(k: usize, resolution: usize) -> f64 {
    -1.0 + 2.0 * k as f64 / (resolution - 1) as f64
}

/// Evaluate a section grid. Rows are in row-major order over the axes (the
/// last axis varies fastest); grid rows are processed in parallel.
pub fn scan(spec: &SectionSpec) -> Result<ScanTable> {
    spec.validate()?;
    let res = spec.resolution;
    let dims = spec.kind.dims();
    let sweep = spec.theta_policy == ThetaPolicy::Sweep;
    let inner: usize = res.pow((dims - 1) as u32) * if sweep { res } else { 1 };

    let rows: Vec<ScanRow> = (0..res)
        .into_par_iter()
        .flat_map_iter(|first| (0..inner).map(move |rest| (first, rest)))
        .map(|(first, rest)| {
            let mut idx = vec![first];
            let mut r = rest;
            let mut tail = Vec::new();
            for _ in 1..dims + usize::from(sweep) {
                tail.push(r % res);
                r /= res;
            }
            idx.extend(tail.into_iter().rev());
            evaluate_point(spec, &idx)
        })
        .collect();
    Ok(ScanTable { columns: spec.columns(), rows })
}

fn evaluate_point(spec: &SectionSpec, idx: &[usize]) -> ScanRow {
    let res = spec.resolution;
    let mut n = [0.0; 4];
    let mut coords = Vec::with_capacity(idx.len());
    for (k, &axis) in spec.axes.iter().enumerate() {
        let x = axis_point(idx[k], res);
        n[axis - 1] = x;
        coords.push(x);
    }
    let in_ball = n.iter().map(|x| x * x).sum::<f64>() <= 1.0 + 1e-12;
    let at_angles = |angles: &[f64]| {
        let mut theta = [0.0; 4];
        for (k, &axis) in spec.axes.iter().enumerate() {
            theta[axis - 1] = angles[k];
        }
        a3_reduced(n, theta) / 27.0
    };
    let a3 = match &spec.theta_policy {
        ThetaPolicy::Fixed(t) => at_angles(t),
        ThetaPolicy::Sweep => {
            let t = PI * idx[1] as f64 / (res - 1) as f64;
            coords.push(t);
            at_angles(&[t])
        }
        ThetaPolicy::Maximize { grid_steps, refine } => {
            if in_ball {
                max_a3_over_angles(n, &AngleSearch { grid_steps: *grid_steps, refine: *refine }).a3
            } else {
                f64::NAN
            }
        }
    };
    ScanRow { coords, feasible: in_ball && a3 >= -POSITIVITY_TOL, a3_max: a3 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch_param::BlochParams;
    use crate::positivity::a3_closed_form;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn one_section_examples() {
        assert!((one_section_a3(0.0, 1.234) - 2.0 / 9.0).abs() < 1e-16);
        assert!(one_section_a3(1.0, 0.0).abs() < 1e-15);
        assert!(one_section_a3(1.0, TWO_PI_3).abs() < 1e-15);
        assert_eq!(one_section_window(0.4), vec![(0.0, PI)]);
        let w = one_section_window(1.0);
        assert!(w[0].1.abs() < 1e-15 && (w[1].0 - TWO_PI_3).abs() < 1e-15 && (w[1].1 - TWO_PI_3).abs() < 1e-15);
        let z = window_half_width(0.6);
        assert!((z - 0.461512).abs() < 1e-6);
        assert!((one_section_a3(0.6, PI / 2.0) + 2.0 / 9.0 * 0.08).abs() < 1e-12);
        assert!(one_section_a3(0.6, TWO_PI_3) > 0.0);
    }

    #[test]
    fn half_width_matches_cubic_root_form() {
        for k in 1..=50 {
            let n = 0.5 + k as f64 / 100.0;
            let alt = ((3.0 * n * n - 1.0) / (2.0 * n.powi(3))).acos() / 3.0;
            assert!((window_half_width(n) - alt).abs() < 1e-7, "n = {n}");
        }
    }

    #[test]
    fn window_edges_are_roots() {
        for n in [0.55, 0.7, 0.85, -0.6, -0.95] {
            for (a, b) in one_section_window(n) {
                for t in [a, b] {
                    assert!(one_section_a3(n, t) > -1e-12, "n = {n}, t = {t}");
                }
                if b - a > 1e-6 {
                    assert!(one_section_a3(n, 0.5 * (a + b)) > 0.0);
                }
            }
            // Outside every window the value is negative.
            for k in 0..=1000 {
                let t = PI * k as f64 / 1000.0;
                let inside = one_section_window(n).iter().any(|&(a, b)| t >= a - 1e-12 && t <= b + 1e-12);
                assert_eq!(inside, one_section_a3(n, t) >= -1e-12, "n = {n}, t = {t}");
            }
        }
    }

    #[test]
    fn grid_windows_track_formula() {
        let h = PI / 1000.0;
        for n in [0.55, 0.8, 1.0, -0.7, -1.0] {
            let exact = one_section_window(n);
            let grid = one_section_window_grid(n, 1000);
            assert_eq!(exact.len(), grid.len(), "n = {n}: {grid:?}");
            for (e, g) in exact.iter().zip(&grid) {
                assert!((e.0 - g.0).abs() <= h && (e.1 - g.1).abs() <= h, "n = {n}: {e:?} vs {g:?}");
            }
        }
        assert_eq!(one_section_window_grid(0.3, 10), vec![(0.0, PI)]);
    }

    #[test]
    fn two_section_examples() {
        assert!(two_section_point_ok(0.5, 0.5));
        assert!(two_section_margin(0.5, 0.5).abs() < 1e-15);
        assert!((two_section_margin(0.6, 0.6) + 0.296).abs() < 1e-12);
        assert!(!two_section_point_ok(0.6, 0.6));
        assert!(two_section_a3(0.2, 0.3, PI / 2.0, PI / 5.0) > 0.0);
    }

    #[test]
    fn three_section_matches_full_expression() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for which in 1..=4 {
            for _ in 0..1000 {
                let n: [f64; 3] = std::array::from_fn(|_| rng.random_range(-0.6..0.6));
                let th: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.0..PI));
                let mut full_n = [0.0; 4];
                let mut full_t = [0.0; 4];
                for (k, &axis) in THREE_SECTION_AXES[which - 1].iter().enumerate() {
                    full_n[axis - 1] = n[k];
                    full_t[axis - 1] = th[k];
                }
                let full = a3_closed_form(&BlochParams::from_raw(full_n, full_t));
                // from_raw may shift angles by pi with a sign flip; the value is unchanged.
                assert!((three_section_a3(which, n, th).unwrap() - full).abs() < 1e-12);
            }
        }
        assert!((three_section_a3(1, [0.0; 3], [0.0; 3]).unwrap() - 1.0 / 27.0).abs() < 1e-17);
        assert!((6.0 * three_section_a3(3, [0.7, 0.0, 0.0], [0.4, 1.0, 2.0]).unwrap() - one_section_a3(0.7, 0.4)).abs() < 1e-15);
        assert_eq!(three_section_a3(0, [0.0; 3], [0.0; 3]), Err(Error::BadSelector(0)));
        assert_eq!(three_section_a3(5, [0.0; 3], [0.0; 3]), Err(Error::BadSelector(5)));
    }

    #[test]
    fn spec_validation() {
        let ok = SectionSpec { kind: SectionKind::Two, axes: vec![1, 3], resolution: 5, theta_policy: ThetaPolicy::default() };
        assert!(ok.validate().is_ok());
        let mut s = ok.clone();
        s.axes = vec![2, 2];
        assert!(s.validate().is_err());
        s.axes = vec![1];
        assert!(s.validate().is_err());
        s = ok.clone();
        s.resolution = 1;
        assert!(s.validate().is_err());
        s = ok.clone();
        s.theta_policy = ThetaPolicy::Sweep;
        assert!(s.validate().is_err());
        s = ok;
        s.theta_policy = ThetaPolicy::Fixed(vec![0.0]);
        assert!(s.validate().is_err());
    }

    #[test]
    fn small_scan_layout() {
        let spec = SectionSpec {
            kind: SectionKind::Two,
            axes: vec![2, 4],
            resolution: 3,
            theta_policy: ThetaPolicy::Fixed(vec![0.0, 0.0]),
        };
        let t = scan(&spec).unwrap();
        assert_eq!(t.columns, ["n2", "n4", "feasible", "a3_max"]);
        assert_eq!(t.rows.len(), 9);
        assert_eq!(t.rows[1].coords, vec![-1.0, 0.0]);
        assert_eq!(t.rows[3].coords, vec![0.0, -1.0]);
        assert!(t.rows[4].feasible && (t.rows[4].a3_max - 1.0 / 27.0).abs() < 1e-17);
        let csv = t.to_csv();
        assert!(csv.starts_with("n2,n4,feasible,a3_max\n"));
        assert_eq!(csv.lines().count(), 10);
        assert!(csv.lines().nth(5).unwrap().starts_with("0.0000000000000000e0,0.0000000000000000e0,1,"));
    }
}
