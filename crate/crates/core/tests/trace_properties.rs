mod common;

use std::f64::consts::PI;

use common::random_decomposition;
use fio_nuclear::{
    discretize, factored_trace, kernel_diagonal_trace, nuclear_trace_formula, reconstruct_symbol, spectral_trace,
    spectral_trace_with, trace_report, CancelToken, Complex64, Decomposition, Error, Exponents, Grid, KernelAxes,
    KernelMatrix, PhaseFn, PhasePolynomial, Profile, SolverOptions, Symbol, Weighting,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: f64 = 1.618_033_988_749_895;

fn grid() -> Grid {
    Grid::new(8.0, 256).unwrap()
}

fn gaussian_pair(g: &Grid) -> Symbol {
    let d =
        Decomposition::from_profiles(g, &[(Profile::unit_gaussian(), Profile::unit_gaussian())], Exponents::default())
            .unwrap();
    Symbol::separable(d, PhaseFn::zero()).unwrap()
}

/// `sum_i sum_j exp(i phi - 2 pi i x xi) a dx dxi` straight from the definition.
fn direct_trace(phase: &PhaseFn, a: &Symbol, g: &Grid) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..g.size() {
        let x = g.x(i);
        for j in 0..g.size() {
            let xi = g.xi(j);
            acc += Complex64::cis(phase.eval(x, xi) - 2.0 * PI * x * xi) * a.eval(x, xi).unwrap();
        }
    }
    acc * g.dx() * g.dxi()
}

fn suite(g: &Grid) -> Vec<(PhaseFn, Symbol)> {
    let poly = PhaseFn::Polynomial(PhasePolynomial::from_terms(&[(1, 1, 2.0 * PI), (0, 2, 0.2), (1, 0, 0.5)]).unwrap());
    vec![
        (PhaseFn::KohnNirenberg, gaussian_pair(g)),
        (PhaseFn::KohnNirenberg, Symbol::product(Profile::indicator(-0.5, 0.5), Profile::indicator(-0.5, 0.5))),
        (
            PhaseFn::LinearShifted { shift: 0.0, offset: PI / 3.0 },
            Symbol::product(Profile::unit_gaussian(), Profile::unit_gaussian()),
        ),
        (
            PhaseFn::LinearShifted { shift: 0.7, offset: -0.2 },
            Symbol::product(Profile::random_packet(4, 3), Profile::unit_gaussian()),
        ),
        (poly.clone(), Symbol::product(Profile::hermite_gaussian(2), Profile::gaussian(1.0, 0.5, 1.3))),
        (
            PhaseFn::KohnNirenberg,
            reconstruct_symbol(&random_decomposition(g, 8, 4, Exponents::default()), &PhaseFn::zero()).unwrap(),
        ),
        (poly, reconstruct_symbol(&random_decomposition(g, 9, 3, Exponents::default()), &PhaseFn::zero()).unwrap()),
        (PhaseFn::KohnNirenberg, Symbol::zero()),
    ]
}

#[test]
fn formula_matches_definition_and_kernel_diagonal() {
    let g = grid();
    for (k, (phase, a)) in suite(&g).iter().enumerate() {
        let formula = nuclear_trace_formula(phase, a, &g).unwrap();
        let oracle = direct_trace(phase, a, &g);
        assert!((formula - oracle).norm() <= 1e-10 * (1.0 + oracle.norm()), "case {k}");
        let kernel = kernel_diagonal_trace(&discretize(phase, a, &g).unwrap()).unwrap();
        assert!((formula - kernel).norm() <= 1e-9, "case {k}: {formula} vs {kernel}");
    }
}

#[test]
fn eigen_sum_equals_matrix_trace() {
    let g = Grid::new(4.0, 128).unwrap();
    for (k, (phase, a)) in suite(&g).iter().enumerate() {
        let m = discretize(phase, a, &g).unwrap();
        let s = spectral_trace(&m).unwrap();
        let t = m.folded().operator_trace();
        assert!((s.eigen_sum - t).norm() <= 1e-8 * (1.0 + t.norm()), "case {k}");
        assert_eq!(s.eigenvalues.len(), 128);
        assert!(s.eigenvalues.windows(2).all(|w| w[0].norm() >= w[1].norm()));
    }
}

#[test]
fn permutation_similarity_leaves_eigen_sum() {
    let g = Grid::new(4.0, 128).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (phase, a) in suite(&g).into_iter().take(5) {
        let m = discretize(&phase, &a, &g).unwrap().folded();
        let mut perm: Vec<usize> = (0..128).collect();
        perm.shuffle(&mut rng);
        let entries = (0..128 * 128).map(|ij| m.get(perm[ij / 128], perm[ij % 128])).collect();
        let p = KernelMatrix::new(g, KernelAxes::SpatialSpatial, Weighting::Folded, entries).unwrap();
        let (s0, s1) = (spectral_trace(&m).unwrap(), spectral_trace(&p).unwrap());
        assert!((s0.eigen_sum - s1.eigen_sum).norm() <= 1e-10);
    }
}

#[test]
fn formula_is_linear_in_separable_symbols() {
    let g = grid();
    let phase = PhaseFn::LinearShifted { shift: 0.4, offset: 0.1 };
    for seed in 0..5u64 {
        let d1 = random_decomposition(&g, 40 + seed, 2, Exponents::default());
        let d2 = random_decomposition(&g, 80 + seed, 3, Exponents::default());
        let joined = Decomposition::new([d1.factors(), d2.factors()].concat(), Exponents::default()).unwrap();
        let t = |d: &Decomposition| {
            nuclear_trace_formula(&phase, &reconstruct_symbol(d, &PhaseFn::zero()).unwrap(), &g).unwrap()
        };
        assert!((t(&joined) - t(&d1) - t(&d2)).norm() <= 1e-8);
    }
}

#[test]
fn gaussian_pair_spectrum_is_golden() {
    // K(x, y) = exp(-pi x^2) exp(-pi (x - y)^2) has eigenvalues phi^{-(2k+1)}.
    let g = grid();
    let s = spectral_trace(&discretize(&PhaseFn::KohnNirenberg, &gaussian_pair(&g), &g).unwrap()).unwrap();
    for k in 0..4usize {
        let expect = GOLDEN.powi(-(2 * k as i32 + 1));
        assert!((s.eigenvalues[k] - expect).norm() <= 1e-8, "k={k}: {}", s.eigenvalues[k]);
    }
    assert!((s.eigen_sum - 1.0).norm() <= 1e-8);
}

#[test]
fn spectral_agreement_on_separable_symbols() {
    let g = grid();
    let kn = PhaseFn::KohnNirenberg;
    let cases: Vec<Symbol> = (0..4)
        .map(|s| {
            reconstruct_symbol(
                &random_decomposition(&g, 60 + s, 1 + s as usize, Exponents::default()),
                &PhaseFn::zero(),
            )
            .unwrap()
        })
        .chain([gaussian_pair(&g)])
        .collect();
    for a in &cases {
        let r = trace_report(&kn, a, &g, &Exponents::default(), &SolverOptions::default()).unwrap();
        assert!(r.applicability.spectral_formula_applies);
        assert!(r.factored_trace.is_some());
        assert!((r.formula_trace - r.eigen_sum).norm() <= 1e-4);
        assert!(r.max_discrepancy() <= 1e-4);
    }
}

#[test]
fn node_sums_converge_to_continuum_trace() {
    // A spatial factor narrower than the grid spacing: every trace route
    // shares the quadrature error, which shrinks as N doubles.
    let width = 0.05;
    let exact = width;
    let kn = PhaseFn::KohnNirenberg;
    let mut errors = Vec::new();
    for n in [256, 512] {
        let g = Grid::new(8.0, n).unwrap();
        let d = Decomposition::from_profiles(
            &g,
            &[(Profile::gaussian(1.0, 0.0, width), Profile::unit_gaussian())],
            Exponents::default(),
        )
        .unwrap();
        let a = Symbol::separable(d, PhaseFn::zero()).unwrap();
        let r = trace_report(&kn, &a, &g, &Exponents::default(), &SolverOptions::default()).unwrap();
        errors.push((r.formula_trace - exact).norm().max((r.eigen_sum - exact).norm()));
    }
    assert!(errors[1] * 4.0 <= errors[0], "{errors:?}");
}

#[test]
fn phase_offset_report() {
    let g = grid();
    let phase = PhaseFn::LinearShifted { shift: 0.0, offset: PI / 3.0 };
    let a = Symbol::product(Profile::unit_gaussian(), Profile::unit_gaussian());
    let r = trace_report(&phase, &a, &g, &Exponents::default(), &SolverOptions::default()).unwrap();
    let expect = Complex64::cis(PI / 3.0);
    for t in [r.formula_trace, r.kernel_trace, r.eigen_sum] {
        assert!((t - expect).norm() <= 1e-4);
    }
    assert!(r.factored_trace.is_none());
}

#[test]
fn factored_trace_needs_a_pairing() {
    let g = Grid::new(8.0, 64).unwrap();
    let d = random_decomposition(&g, 3, 2, Exponents::default());
    let sym = Symbol::separable(d, PhaseFn::zero()).unwrap();
    let sep = sym.as_separable().unwrap();
    let poly = PhaseFn::Polynomial(PhasePolynomial::from_terms(&[(2, 0, 1.0)]).unwrap());
    assert!(matches!(factored_trace(&poly, sep), Err(Error::PhaseRegime(_))));
}

#[test]
fn eigen_solve_can_be_cancelled_mid_flight() {
    let g = Grid::new(8.0, 512).unwrap();
    let m = discretize(
        &PhaseFn::KohnNirenberg,
        &Symbol::product(Profile::random_packet(2, 3), Profile::unit_gaussian()),
        &g,
    )
    .unwrap();
    let token = CancelToken::new();
    let trigger = token.clone();
    std::thread::spawn(move || {
        std::thread::sleep(std::time::Duration::from_millis(30));
        trigger.cancel();
    });
    let started = std::time::Instant::now();
    let result = spectral_trace_with(&m, &SolverOptions { max_iterations: None, cancel: Some(token) });
    assert_eq!(result, Err(Error::Cancelled));
    assert!(started.elapsed() < std::time::Duration::from_millis(500));
}
