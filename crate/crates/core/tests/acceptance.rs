//! One line per acceptance criterion; exits non-zero if any criterion fails.

mod common;

use std::time::Instant;

use heun_spectra_core::boundary::{jet_accessory_roots, jet_factor, BoundaryKind};
use heun_spectra_core::heun::*;
use heun_spectra_core::scalar::c64;
use heun_spectra_core::solver::*;
use heun_spectra_core::teukolsky::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn em(a: f64, l: i32, m: i32) -> PhysicalConfig<f64> {
    PhysicalConfig::electromagnetic(a, l, m).unwrap()
}

fn random_c(rng: &mut ChaCha8Rng, range: f64) -> Complex64 {
    c64(rng.gen_range(-range..range), rng.gen_range(-range..range))
}

/// Canonical parameters with every component uniform in the square `[-1, 1]²`
/// and `γ` at least `0.1` from the non-positive integers.
fn random_canonical(rng: &mut ChaCha8Rng) -> CanonicalHeunParams<f64> {
    loop {
        let g = random_c(rng, 1.0);
        if (g - c64(g.re.round().min(0.0), 0.0)).norm() < 0.1 {
            continue;
        }
        return CanonicalHeunParams::new(g, random_c(rng, 1.0), random_c(rng, 1.0), random_c(rng, 1.0), random_c(rng, 1.0));
    }
}

fn normalization_and_series() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_d, mut worst_r, mut bad_value) = (0.0f64, 0.0f64, 0);
    for _ in 0..1000 {
        let p = random_canonical(&mut rng);
        let at0 = eval_series(&p, c64(0.0, 0.0), 1e-15).unwrap();
        if at0.value != c64(1.0, 0.0) {
            bad_value += 1;
        }
        let expect = p.q / p.gamma;
        worst_d = worst_d.max((at0.derivative - expect).norm() / expect.norm().max(1.0));
        let z = Complex64::from_polar(rng.gen_range(0.0..0.5), rng.gen_range(-3.2..3.2));
        let v = eval_series(&p, z, 1e-15).unwrap();
        let (res, scale) = p.ode().residual(z, v.value, v.derivative, v.second_derivative);
        worst_r = worst_r.max(res.norm() / scale.max(1.0));
    }
    outcome(
        bad_value == 0 && worst_d <= 4.0 * f64::EPSILON && worst_r < 1e-8,
        format!("1000 sets: H(0) != 1 in {bad_value}, max |H'(0) - q/γ| {worst_d:.1e}, max residual {worst_r:.1e}"),
    )
}

fn convention_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst, mut over) = (0.0f64, 0);
    for _ in 0..1000 {
        let p = random_canonical(&mut rng);
        let m = canonical_to_maple(&p).unwrap();
        let gap = [SqrtBranch::Principal, SqrtBranch::Negated]
            .into_iter()
            .filter_map(|b| maple_to_canonical(&m, b).ok())
            .map(|q| {
                [
                    (p.gamma, q.gamma),
                    (p.delta, q.delta),
                    (p.epsilon, q.epsilon),
                    (p.alpha_beta, q.alpha_beta),
                    (p.q, q.q),
                ]
                .iter()
                .map(|(x, y)| (x - y).norm() / x.norm().max(1.0))
                .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(gap);
        if gap >= 1e-14 {
            over += 1;
        }
    }
    outcome(over == 0, format!("1000 sets: max deviation {worst:.1e}, {over} above 1e-14"))
}

fn eigenvalue_anchor() -> Outcome {
    let opts = SolverOptions::default();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for l in 1..=3 {
        let target = (l * (l + 1)) as f64;
        let guess = SpectralUnknowns::new(heun_spectra_core::oracle::eikonal_guess(l, 0, 0.5), c64(target + 0.3, 0.1));
        match solve_point(&em(0.0, l, 0), BoundaryKind::Qnm, guess, &opts) {
            Ok(p) => worst = worst.max((p.unk.e - target).norm()),
            Err(e) => failures.push(format!("l={l}: {e}")),
        }
    }
    outcome(
        failures.is_empty() && worst < 1e-8,
        format!("l=1..3: max |E - l(l+1)| {worst:.1e} {}", failures.join("; ")),
    )
}

fn schwarzschild_spectrum(l: i32, m: i32, n_max: usize) -> Vec<SpectralPoint<f64>> {
    enumerate_modes(&em(0.0, l, m), BoundaryKind::Qnm, n_max, &SeedGrid::default_for(0.5), &SolverOptions::default())
}

fn oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut missing = Vec::new();
    for l in [1, 2] {
        let modes = schwarzschild_spectrum(l, 0, 1);
        for n in 0..=1u32 {
            match modes.iter().find(|p| p.n == Some(n as usize)) {
                Some(p) => worst = worst.max((p.unk.omega - common::oracle_qnm(l, n)).norm()),
                None => missing.push(format!("l={l} n={n}")),
            }
        }
    }
    outcome(
        missing.is_empty() && worst < 1e-6,
        format!("l=1,2 n=0,1: max |Δω| {worst:.1e} {}", missing.join(" ")),
    )
}

fn m_decoupling() -> Outcome {
    let mut worst = 0.0f64;
    let mut mismatch = false;
    for l in [1, 2] {
        let (a, b) = (schwarzschild_spectrum(l, 0, 2), schwarzschild_spectrum(l, 1, 2));
        if a.len() != b.len() || a.is_empty() {
            mismatch = true;
            continue;
        }
        for (p, q) in a.iter().zip(&b) {
            worst = worst.max((p.unk.omega - q.unk.omega).norm());
        }
    }
    outcome(!mismatch && worst < 1e-8, format!("l=1,2 n≤2: max |ω(m=0) - ω(m=1)| {worst:.1e}"))
}

fn continuation() -> Outcome {
    let opts = SolverOptions::default();
    let guess = SpectralUnknowns::new(c64(0.5, 0.2), c64(2.0, 0.0));
    let run = || -> heun_spectra_core::Result<(f64, f64, f64, usize)> {
        let seed = solve_point(&em(0.0, 1, 1), BoundaryKind::Qnm, guess, &opts)?;
        let a_end = 0.8 * seed.cfg.mass;
        let coarse = continue_in_a(&seed, a_end, 0.05, &opts)?;
        let fine = continue_in_a(&seed, a_end, 0.025, &opts)?;
        let worst_res = coarse.points.iter().chain(&fine.points).map(|p| p.residual_norm).fold(0.0, f64::max);
        let mut step_gap = 0.0f64;
        let mut shared = 0;
        for p in &coarse.points {
            if let Some(q) = fine.points.iter().find(|q| (q.cfg.a - p.cfg.a).abs() < 1e-12) {
                step_gap = step_gap.max((p.unk.omega - q.unk.omega).norm());
                shared += 1;
            }
        }
        let back = continue_in_a(coarse.points.last().unwrap(), 0.0, 0.05, &opts)?;
        let ret = (back.points.last().unwrap().unk.omega - seed.unk.omega).norm();
        Ok((worst_res, step_gap, ret, shared))
    };
    match run() {
        Ok((res, gap, ret, shared)) => outcome(
            res < opts.root_tol && gap < 1e-7 && ret < 1e-6 && shared >= 2,
            format!("a: 0 → 0.8M: max residual {res:.1e}, da0 halved {gap:.1e} over {shared} shared nodes, reversal {ret:.1e}"),
        ),
        Err(e) => outcome(false, format!("track failed: {e}")),
    }
}

fn stability_filter_discriminates() -> Outcome {
    let opts = SolverOptions::default();
    let mut coarse = opts;
    coarse.numerics.r_far = 8.0;
    let under = enumerate_candidates(&em(0.0, 1, 0), BoundaryKind::Qnm, &SeedGrid::default_for(0.5), &coarse);
    let flagged = under.iter().filter(|p| p.stable == Some(false)).count();
    let mut unstable_oracle = Vec::new();
    for l in [1, 2] {
        for n in 0..=1u32 {
            let w = common::oracle_qnm(l, n);
            let guess = SpectralUnknowns::new(w, c64((l * (l + 1)) as f64, 0.0));
            let ok = solve_point(&em(0.0, l, 0), BoundaryKind::Qnm, guess, &opts)
                .map(|p| (p.unk.omega - w).norm() < 1e-6 && stability_filter(&p, &opts))
                .unwrap_or(false);
            if !ok {
                unstable_oracle.push(format!("l={l} n={n}"));
            }
        }
    }
    outcome(
        flagged >= 1 && unstable_oracle.is_empty(),
        format!(
            "r_far = 8M run: {flagged}/{} flagged unstable; oracle roots flagged unstable: {}",
            under.len(),
            if unstable_oracle.is_empty() { "none".to_string() } else { unstable_oracle.join(" ") }
        ),
    )
}

fn jet_conditions() -> Outcome {
    // Polynomiality over random Heun factors satisfying both conditions.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_tail = 0.0f64;
    let mut sets = 0;
    for n in 0..=3usize {
        for _ in 0..100 {
            let alpha = loop {
                let a = random_c(&mut rng, 1.0);
                if a.norm() > 0.1 {
                    break a;
                }
            };
            let (beta, gamma) = (random_c(&mut rng, 1.0), random_c(&mut rng, 1.0));
            let Ok(roots) = jet_accessory_roots(alpha, beta, gamma, n) else {
                return outcome(false, format!("accessory roots failed for N={n}"));
            };
            for p in roots {
                let c = p.ode().frobenius_coefficients(n + 30).unwrap();
                worst_tail = c[n + 1..].iter().map(|x| x.norm()).fold(worst_tail, f64::max);
                sets += 1;
            }
        }
    }

    // Jet and quasinormal roots at equal (l, m, a).
    let opts = SolverOptions::default();
    let grid = SeedGrid::default_for(0.5);
    let mut min_gap = f64::INFINITY;
    let mut jet_count = 0;
    for (l, m) in [(1, 0), (1, -1), (2, 0)] {
        let cfg = em(0.2, l, m);
        let jets = enumerate_candidates(&cfg, BoundaryKind::JetPrimary, &grid, &opts);
        let qnms = enumerate_candidates(&cfg, BoundaryKind::Qnm, &grid, &opts);
        jet_count += jets.len();
        for j in &jets {
            // The angular factor at a physical jet root is itself a polynomial.
            let f = jet_factor(&cfg).unwrap();
            let sol = tae_local_solution(&cfg, &j.unk, f.anchor, f.exps);
            let c = sol.heun_params.ode().frobenius_coefficients(f.degree + 30).unwrap();
            worst_tail = c[f.degree + 1..].iter().map(|x| x.norm()).fold(worst_tail, f64::max);
            for q in &qnms {
                min_gap = min_gap.min((j.unk.omega - q.unk.omega).norm());
            }
        }
    }
    outcome(
        worst_tail < 1e-13 && jet_count > 0 && min_gap > 1e-3,
        format!(
            "{sets} random factors + {jet_count} jet roots: max tail {worst_tail:.1e}; min jet-QNM distance {min_gap:.2e}"
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("normalization and series correctness", normalization_and_series),
        ("convention map round trip", convention_round_trip),
        ("angular eigenvalue anchor", eigenvalue_anchor),
        ("oracle equivalence", oracle_equivalence),
        ("m-decoupling at a = 0", m_decoupling),
        ("continuation in a", continuation),
        ("stability filter discriminates", stability_filter_discriminates),
        ("jet-mode conditions", jet_conditions),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {name}: {} ({:.1} s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
