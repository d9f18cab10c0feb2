//! Acceptance run. Prints one line per criterion and exits non-zero unless
//! the failures are exactly the known ones in `EXPECTED_FAILURES`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use qutrit_bloch::ensembles::{
    bures_density_bloch, discriminant, hs_density_bloch, identity_checks, qubit_bures_density, qubit_hs_density,
    sample_bures, sample_hs,
};
use qutrit_bloch::geometry::overlap;
use qutrit_bloch::hw_basis::{orthonormality_check, qutrit_weyl};
use qutrit_bloch::mub::{cycle_weights, four_mubs};
use qutrit_bloch::positivity::{is_physical, is_point_physical, max_a3_over_angles, min_eigenvalue, AngleSearch};
use qutrit_bloch::sections::{one_section_a3, one_section_window, one_section_window_grid};
use qutrit_bloch::unital::{edge_lengths, polytope_check, polytope_vertices, UnitalMap};
use qutrit_bloch::BlochParams;

const SEED: u64 = 0xB10C;

/// The vertex set has five points each tight on four of the five facets, so
/// every pair shares three facets and the polytope has ten edges, not eight.
const EXPECTED_FAILURES: &[u32] = &[8];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c1_hw_basis() -> Outcome {
    let orth = [2, 3, 5].map(orthonormality_check);
    // Oracle: U_pq[i][i+q] = exp(2 pi i p i / 3 - i pi p q / 3).
    let ops = qutrit_weyl();
    let mut dev: f64 = 0.0;
    for p in 0..3 {
        for q in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let want = if j == (i + q) % 3 {
                        Complex64::from_polar(1.0, 2.0 * PI * (p * i) as f64 / 3.0 - PI * (p * q) as f64 / 3.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    dev = dev.max((ops[p][q][(i, j)] - want).norm());
                }
            }
        }
    }
    let pass = orth.iter().all(|&e| e <= 1e-12) && dev <= 1e-15;
    outcome(pass, format!("orthonormality {:.1e}/{:.1e}/{:.1e} (d=2,3,5), explicit table deviation {dev:.1e}", orth[0], orth[1], orth[2]))
}

fn c2_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut errors = 0;
    for _ in 0..100_000 {
        let rho = sample_hs(&mut rng).rho;
        match BlochParams::from_density(&rho, 1e-9) {
            Ok(p) => worst = worst.max(p.to_density().max_abs_diff(&rho)),
            Err(_) => errors += 1,
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-10 && errors == 0 && secs < 30.0,
        format!("100000 HS states, max deviation {worst:.1e}, {errors} conversion errors, {secs:.1} s"),
    )
}

fn random_params(rng: &mut ChaCha8Rng, max_r: f64) -> BlochParams {
    loop {
        let n: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let r2: f64 = n.iter().map(|x| x * x).sum();
        if r2 <= 1.0 && r2.sqrt() <= max_r {
            let theta = std::array::from_fn(|_| rng.random_range(0.0..PI));
            return BlochParams::new(n, theta).unwrap();
        }
    }
}

fn c3_positivity_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let tol = 1e-9;
    let (mut disagree, mut physical) = (0, 0);
    for _ in 0..100_000 {
        let p = random_params(&mut rng, 1.0);
        let by_a3 = is_physical(&p, tol);
        let by_eig = min_eigenvalue(&p) >= -tol;
        physical += by_eig as usize;
        disagree += (by_a3 != by_eig) as usize;
    }
    outcome(disagree == 0, format!("100000 draws ({physical} physical), {disagree} disagreements"))
}

fn c4_core_ball() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut bad = 0;
    for _ in 0..10_000 {
        let p = random_params(&mut rng, 0.5);
        bad += (!is_physical(&p, 1e-10)) as usize;
    }
    outcome(bad == 0, format!("10000 draws with r <= 0.5, {bad} non-physical"))
}

fn c5_witness() -> Outcome {
    let n = [0.6, 0.6, 0.0, 0.0];
    let feasible = is_point_physical(n, 48, true).unwrap();
    let best = max_a3_over_angles(n, &AngleSearch { grid_steps: 48, refine: true }).reduced();
    // Oracle: 1 - 3(0.36 + 0.36) + 2(0.216 + 0.216).
    let want = 1.0 - 3.0 * 0.72 + 2.0 * 0.432;
    outcome(
        !feasible && (best - want).abs() <= 1e-12,
        format!("feasible = {feasible}, max 27 a3 = {best:.15} (closed form {want:.15})"),
    )
}

fn c6_windows() -> Outcome {
    let cells = (PI / 1e-3).ceil() as usize;
    let h = PI / cells as f64;
    let mut worst: f64 = 0.0;
    let mut shape_ok = true;
    let mut pointwise_bad = 0;
    for k in 0..10 {
        let n = 0.55 + 0.05 * k as f64;
        let exact = one_section_window(n);
        let grid = one_section_window_grid(n, cells);
        if exact.len() != grid.len() {
            shape_ok = false;
            continue;
        }
        for (a, b) in exact.iter().zip(&grid) {
            worst = worst.max((a.0 - b.0).abs()).max((a.1 - b.1).abs());
        }
        // Direct sampling at cell centres, away from the window edges.
        for c in 0..cells {
            let t = (c as f64 + 0.5) * h;
            let near_edge = exact.iter().any(|w| (t - w.0).abs() < h || (t - w.1).abs() < h);
            let inside = exact.iter().any(|w| w.0 <= t && t <= w.1);
            if !near_edge && (one_section_a3(n, t) >= 0.0) != inside {
                pointwise_bad += 1;
            }
        }
    }
    outcome(
        shape_ok && worst <= h && pointwise_bad == 0,
        format!("n = 0.55..1.00, cell {h:.2e}, max endpoint gap {worst:.2e}, {pointwise_bad} pointwise mismatches"),
    )
}

fn c7_mubs() -> Outcome {
    let (mut inter, mut cyclic, mut internal): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..36 {
        for j in 0..36 {
            let (d, g) = (2.0 * PI * i as f64 / 36.0, 2.0 * PI * j as f64 / 36.0);
            let fam = four_mubs(d, g);
            let c = fam.check();
            internal = internal.max(c.max_inter_deviation).max(c.max_intra_overlap).max(c.max_norm_deviation);
            // Independent overlap path through the displacement expansion.
            for a in 0..4 {
                for b in a + 1..4 {
                    for ka in &fam.bases[a].kets {
                        for kb in &fam.bases[b].kets {
                            inter = inter.max((overlap(&ka.bloch, &kb.bloch).unwrap() - 1.0 / 3.0).abs());
                        }
                    }
                }
            }
            let [_, n, p, q] = fam.weight_points;
            for (from, to) in [(n, p), (p, q), (q, n)] {
                let img = cycle_weights(&from);
                cyclic = cyclic.max((0..4).map(|k| (img[k] - to[k]).abs()).fold(0.0, f64::max));
            }
        }
    }
    let origin = four_mubs(0.0, 0.0).weight_points;
    let mut axes_dev: f64 = 0.0;
    let mut used = [false; 4];
    for w in &origin {
        let k = (0..4).max_by(|&a, &b| w[a].abs().total_cmp(&w[b].abs())).unwrap();
        used[k] = true;
        for (m, x) in w.iter().enumerate() {
            axes_dev = axes_dev.max((x.abs() - if m == k { 1.0 } else { 0.0 }).abs());
        }
    }
    let distinct = used.iter().all(|&u| u);
    outcome(
        inter <= 1e-10 && internal <= 1e-10 && cyclic <= 1e-10 && distinct && axes_dev <= 1e-14,
        format!(
            "36x36 grid, overlap dev {inter:.1e}, family check {internal:.1e}, cyclic dev {cyclic:.1e}; \
             at (0,0) four distinct axes = {distinct}, deviation {axes_dev:.1e}"
        ),
    )
}

fn c8_unital() -> Outcome {
    let mut disagree = 0;
    let grid: Vec<f64> = (0..13).map(|k| -1.0 + k as f64 / 6.0).collect();
    for &a in &grid {
        for &b in &grid {
            for &c in &grid {
                for &d in &grid {
                    let l = [a, b, c, d];
                    if polytope_check(&l).inside != UnitalMap::real(l).is_cp(1e-9) {
                        disagree += 1;
                    }
                }
            }
        }
    }
    let vmin: Vec<f64> = polytope_vertices().iter().map(|v| UnitalMap::real(*v).choi_min_eigenvalue()).collect();
    let vertices_ok = vmin.iter().all(|e| e.abs() <= 1e-10);
    let got = edge_lengths();
    let mut want = vec![(9.0f64 / 2.0).sqrt(); 4];
    want.extend([(27.0f64 / 4.0).sqrt(); 4]);
    let edges_ok = got.len() == want.len() && got.iter().zip(&want).all(|(a, b)| (a - b).abs() < 1e-12);
    let short = got.iter().filter(|x| (*x - (4.5f64).sqrt()).abs() < 1e-12).count();
    let long = got.len() - short;
    outcome(
        disagree == 0 && vertices_ok && edges_ok,
        format!(
            "13^4 grid disagreements {disagree}; vertex min Choi eigenvalues within 1e-10 = {vertices_ok}; \
             edges found {} ({short} x sqrt(9/2), {long} x sqrt(27/4)), required 8 (4 + 4)",
            got.len()
        ),
    )
}

fn c9_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let rep = identity_checks(10_000, &mut rng);
    outcome(
        rep.max_error() < 1e-8 && rep.used > 9_000,
        format!(
            "{} of {} states used; rel. errors: pair sums {:.1e}, det {:.1e}, HW numerator {:.1e}, GM numerator {:.1e}, GM pair sums {:.1e}",
            rep.used, rep.samples, rep.pair_sums, rep.determinant, rep.hs_numerator, rep.gm_numerator, rep.gm_pair_sums
        ),
    )
}

fn c10_direction() -> Outcome {
    let zeta = [PI / 3.0, 0.0, PI / 7.0];
    let theta = [0.0; 4];
    let ratios: Vec<f64> =
        (0..=50).map(|k| 0.1 + 0.01 * k as f64).map(|r| hs_density_bloch(r, zeta, theta).unwrap() / r.powi(3)).collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let spread = (hi - lo) / hi.abs();
    let mut flips = Vec::new();
    let mut prev = bures_density_bloch(0.1, zeta, theta, true).unwrap().signum();
    for k in 1..=8900 {
        let r = 0.1 + 1e-4 * k as f64;
        let s = bures_density_bloch(r, zeta, theta, true).unwrap().signum();
        if s != prev {
            flips.push(r);
        }
        prev = s;
    }
    let first = flips.first().copied();
    let pass = spread <= 1e-6 && first.is_some_and(|r| r > 0.70 && r < 0.76);
    outcome(pass, format!("HS/r^3 relative spread {spread:.1e} on [0.1, 0.6]; Bures sign changes at r = {flips:.4?}"))
}

fn dirichlet(rng: &mut ChaCha8Rng, g: &Gamma<f64>) -> [f64; 3] {
    let x: [f64; 3] = std::array::from_fn(|_| g.sample(rng));
    let s: f64 = x.iter().sum();
    x.map(|v| v / s)
}

/// Fraction per bin with its variance, from plain samples.
fn plain_bins(values: &[Vec<usize>], bins: usize, per_sample: f64) -> Vec<(f64, f64)> {
    let n = values.len() as f64;
    (0..bins)
        .map(|b| {
            let xs: Vec<f64> = values.iter().map(|v| v.iter().filter(|&&k| k == b).count() as f64 / per_sample).collect();
            let m = xs.iter().sum::<f64>() / n;
            let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0) / n;
            (m, var)
        })
        .collect()
}

/// Self-normalized importance estimate of the same fractions.
fn weighted_bins(values: &[Vec<usize>], weights: &[f64], bins: usize, per_sample: f64) -> Vec<(f64, f64)> {
    let wsum: f64 = weights.iter().sum();
    (0..bins)
        .map(|b| {
            let xs: Vec<f64> = values.iter().map(|v| v.iter().filter(|&&k| k == b).count() as f64 / per_sample).collect();
            let m = xs.iter().zip(weights).map(|(x, w)| x * w).sum::<f64>() / wsum;
            let var = xs.iter().zip(weights).map(|(x, w)| (w * (x - m)).powi(2)).sum::<f64>() / (wsum * wsum);
            (m, var)
        })
        .collect()
}

fn worst_z(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let s = (x.1 + y.1).sqrt();
            if s == 0.0 { 0.0 } else { (x.0 - y.0).abs() / s }
        })
        .fold(0.0, f64::max)
}

fn bin_of(x: f64, lo: f64, hi: f64, bins: usize) -> usize {
    (((x - lo) / (hi - lo) * bins as f64).floor().max(0.0) as usize).min(bins - 1)
}

fn c11_samplers() -> Outcome {
    const N: usize = 100_000;
    const ORACLE: usize = 1_000_000;
    const BINS: usize = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 11);

    // Hilbert-Schmidt: mean purity and purity histogram.
    let hs: Vec<[f64; 3]> = (0..N).map(|_| sample_hs(&mut rng).eigs).collect();
    let purity = |e: &[f64; 3]| e.iter().map(|x| x * x).sum::<f64>();
    let mean_purity = hs.iter().map(purity).sum::<f64>() / N as f64;
    // Oracle: uniform simplex points weighted by the squared Vandermonde.
    let flat = Gamma::new(1.0, 1.0).unwrap();
    let mut o_vals = Vec::with_capacity(ORACLE);
    let mut o_w = Vec::with_capacity(ORACLE);
    let (mut wp, mut ws) = (0.0, 0.0);
    for _ in 0..ORACLE {
        let e = dirichlet(&mut rng, &flat);
        let w = discriminant(&e);
        wp += w * purity(&e);
        ws += w;
        o_vals.push(vec![bin_of(purity(&e), 1.0 / 3.0, 1.0, BINS)]);
        o_w.push(w);
    }
    let oracle_purity = wp / ws;
    let s_vals: Vec<Vec<usize>> = hs.iter().map(|e| vec![bin_of(purity(e), 1.0 / 3.0, 1.0, BINS)]).collect();
    let hs_z = worst_z(&plain_bins(&s_vals, BINS, 1.0), &weighted_bins(&o_vals, &o_w, BINS, 1.0));

    // Bures: pooled eigenvalue histogram against Dirichlet(1/2) draws, whose
    // density already supplies the 1/sqrt(prod l) factor.
    let half = Gamma::new(0.5, 1.0).unwrap();
    let bures: Vec<Vec<usize>> =
        (0..N).map(|_| sample_bures(&mut rng).eigs.iter().map(|&x| bin_of(x, 0.0, 1.0, BINS)).collect()).collect();
    let mut b_vals = Vec::with_capacity(ORACLE);
    let mut b_w = Vec::with_capacity(ORACLE);
    for _ in 0..ORACLE {
        let e = dirichlet(&mut rng, &half);
        let pairs = (e[0] + e[1]) * (e[0] + e[2]) * (e[1] + e[2]);
        b_w.push(discriminant(&e) / pairs);
        b_vals.push(e.iter().map(|&x| bin_of(x, 0.0, 1.0, BINS)).collect());
    }
    let bures_z = worst_z(&plain_bins(&bures, BINS, 3.0), &weighted_bins(&b_vals, &b_w, BINS, 3.0));

    let pass = (mean_purity - 0.6).abs() <= 0.01 && (oracle_purity - 0.6).abs() <= 0.01 && hs_z <= 3.0 && bures_z <= 3.0;
    outcome(
        pass,
        format!(
            "HS mean purity {mean_purity:.4} (oracle {oracle_purity:.4}); worst bin z: HS purity {hs_z:.2}, Bures eigenvalues {bures_z:.2}"
        ),
    )
}

fn c12_qubit() -> Outcome {
    let flat = [0.0, 0.3, 0.7, 1.0].iter().all(|&r| qubit_hs_density(r) == 3.0 / (4.0 * PI));
    let b0 = qubit_bures_density(0.0);
    outcome(flat && (b0 - 4.0 / PI).abs() < 1e-15, format!("HS constant = {flat}, Bures(0) = {b0:.15}"))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 12] = [
        (1, "displacement basis", c1_hw_basis),
        (2, "density round trip", c2_round_trip),
        (3, "positivity oracle", c3_positivity_oracle),
        (4, "radius one half", c4_core_ball),
        (5, "non-physical interior point", c5_witness),
        (6, "one-section windows", c6_windows),
        (7, "mutually unbiased bases", c7_mubs),
        (8, "unital polytope", c8_unital),
        (9, "density identities", c9_identities),
        (10, "directional densities", c10_direction),
        (11, "sampler statistics", c11_samplers),
        (12, "qubit densities", c12_qubit),
    ];
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        let o = run();
        let tag = match (o.pass, EXPECTED_FAILURES.contains(&id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("{tag:>12}  {id:>2}. {name}: {}", o.detail);
        if !o.pass {
            failed.push(id);
        }
    }
    println!("{} of 12 criteria pass", 12 - failed.len());
    if failed == EXPECTED_FAILURES {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome: failed {failed:?}, expected {EXPECTED_FAILURES:?}");
        ExitCode::FAILURE
    }
}
