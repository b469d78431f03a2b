mod common;

use heun_spectra_core::boundary::{spectral_residual, BoundaryKind, Numerics};
use heun_spectra_core::scalar::c64;
use heun_spectra_core::solver::*;
use heun_spectra_core::teukolsky::*;
use heun_spectra_core::Error;

fn em(a: f64, l: i32, m: i32) -> PhysicalConfig<f64> {
    PhysicalConfig::electromagnetic(a, l, m).unwrap()
}

fn fundamental(a: f64, m: i32) -> SpectralPoint<f64> {
    let guess = SpectralUnknowns::new(c64(0.5, 0.2), c64(2.0, 0.0));
    solve_point(&em(a, 1, m), BoundaryKind::Qnm, guess, &SolverOptions::default()).unwrap()
}

#[test]
fn fundamental_mode_at_zero_rotation() {
    let p = fundamental(0.0, 0);
    assert!((p.unk.e - c64(2.0, 0.0)).norm() < 1e-8);
    assert!((p.unk.omega - common::oracle_qnm(1, 0)).norm() < 1e-6);
    assert!(p.residual_norm < SolverOptions::<f64>::default().root_tol);
    assert!(p.diagnostics.condition.is_finite() && p.diagnostics.condition >= 1.0);
    assert_eq!(p.stable, None);
}

#[test]
fn azimuthal_number_decouples_without_rotation() {
    let (p0, p1) = (fundamental(0.0, 0), fundamental(0.0, 1));
    assert!((p0.unk.omega - p1.unk.omega).norm() < 1e-8);
}

#[test]
fn perturbed_guess_returns_to_the_root() {
    let p = fundamental(0.3, 1);
    let nudged = SpectralUnknowns::new(p.unk.omega + c64(1e-3, -1e-3), p.unk.e + c64(-1e-3, 0.0));
    let q = solve_point(&p.cfg, p.kind, nudged, &SolverOptions::default()).unwrap();
    assert!((q.unk.omega - p.unk.omega).norm() < 1e-10);
    assert!((q.unk.e - p.unk.e).norm() < 1e-10);
}

#[test]
fn root_certificate_from_fresh_evaluation() {
    let p = fundamental(0.35, -1);
    let r = spectral_residual(&p.cfg, &p.unk, p.kind, &Numerics::default()).unwrap();
    assert!(r.norm() < SolverOptions::<f64>::default().root_tol);
}

#[test]
fn forward_jacobian_agrees_with_central_differences() {
    let opts = SolverOptions {
        check_jacobian: true,
        ..SolverOptions::default()
    };
    let guess = SpectralUnknowns::new(c64(0.55, 0.15), c64(2.1, 0.0));
    let p = solve_point(&em(0.2, 1, 1), BoundaryKind::Qnm, guess, &opts).unwrap();
    let gap = p.diagnostics.jacobian_check.expect("checked");
    assert!(gap < 1e-4, "{gap:e}");
}

#[test]
fn invalid_guess_is_rejected() {
    let guess = SpectralUnknowns::new(c64(f64::NAN, 0.0), c64(2.0, 0.0));
    let r = solve_point(&em(0.0, 1, 0), BoundaryKind::Qnm, guess, &SolverOptions::default());
    assert!(matches!(r, Err(Error::NonFinite(_))));
}

#[test]
fn continuation_reaches_high_spin_and_returns() {
    let opts = SolverOptions::default();
    let seed = fundamental(0.0, 1);
    let track = continue_in_a(&seed, 0.4, 0.05, &opts).unwrap();
    let last = track.points.last().unwrap();
    assert!((last.cfg.a - 0.4).abs() < 1e-12);
    for w in track.points.windows(2) {
        assert!(w[1].cfg.a > w[0].cfg.a);
        assert!((w[1].unk.omega - w[0].unk.omega).norm() <= opts.jump_cap);
    }
    assert!(track.points.iter().all(|p| p.residual_norm < opts.root_tol));
    let back = continue_in_a(last, 0.0, 0.05, &opts).unwrap();
    let end = back.points.last().unwrap();
    assert!((end.unk.omega - seed.unk.omega).norm() < 1e-6);
}

#[test]
fn continuation_refuses_extremal_target() {
    let seed = fundamental(0.0, 0);
    assert!(continue_in_a(&seed, 0.5, 0.05, &SolverOptions::default()).is_err());
}

#[test]
fn stability_flags_oracle_root_and_is_idempotent() {
    let opts = SolverOptions::default();
    let p = fundamental(0.0, 0);
    assert!(stability_filter(&p, &opts));
    assert!(stability_filter(&p, &opts));
}

#[test]
fn truncated_far_boundary_produces_spurious_roots() {
    let mut opts = SolverOptions::default();
    opts.numerics.r_far = 8.0;
    let guess = SpectralUnknowns::new(c64(0.5, 0.18), c64(2.0, 0.0));
    let p = solve_point(&em(0.0, 1, 0), BoundaryKind::Qnm, guess, &opts).unwrap();
    assert!(!stability_filter(&p, &opts));
}

#[test]
fn empty_grid_gives_no_modes() {
    let grid = SeedGrid { seeds: vec![] };
    let out = enumerate_modes(&em(0.0, 1, 0), BoundaryKind::Qnm, 3, &grid, &SolverOptions::default());
    assert!(out.is_empty());
}

#[test]
fn duplicate_seeds_give_distinct_roots() {
    let grid = SeedGrid {
        seeds: vec![c64(0.5, 0.2); 4].into_iter().chain(vec![c64(0.4, 0.6); 3]).collect(),
    };
    let out = enumerate_modes(&em(0.0, 1, 0), BoundaryKind::Qnm, 5, &grid, &SolverOptions::default());
    assert_eq!(out.len(), 2);
    assert!((out[0].unk.omega - out[1].unk.omega).norm() > 1e-3);
    assert_eq!((out[0].n, out[1].n), (Some(0), Some(1)));
}

#[test]
fn three_lowest_schwarzschild_overtones() {
    let cfg = em(0.0, 1, 0);
    let modes = enumerate_modes(&cfg, BoundaryKind::Qnm, 2, &SeedGrid::default_for(0.5), &SolverOptions::default());
    assert_eq!(modes.len(), 3);
    for (i, p) in modes.iter().enumerate() {
        assert_eq!(p.n, Some(i));
        assert_eq!(p.stable, Some(true));
        assert!((p.unk.omega - common::oracle_qnm(1, i as u32)).norm() < 2e-6);
        for q in &modes[i + 1..] {
            assert!((p.unk.omega - q.unk.omega).norm() > 1e-3);
        }
    }
}

#[test]
fn seed_grid_shape() {
    let g = SeedGrid::<f64>::default_for(0.5);
    assert_eq!(g.seeds.len(), 300);
    assert_eq!(g.seeds[0], c64(0.1, 0.01));
    assert_eq!(g.seeds[299], c64(2.5, 1.5));
}
