//! Three independent routes to the trace of a discretized FIO.
//!
//! * the double integral of `exp(i phi - 2 pi i x xi) a` over the grid,
//! * the kernel diagonal `int K(x, x) dx` (and the factor pairing of a
//!   separable symbol),
//! * the sum of the eigenvalues of the weighted kernel matrix.
//!
//! The first two are the same finite sum reordered; the eigenvalue sum
//! equals the matrix trace up to eigen-solver round-off.

use std::cmp::Ordering;
use std::sync::mpsc;
use std::time::Duration;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cancel::CancelToken;
use crate::decomposition::Exponents;
use crate::error::{Error, Result};
use crate::fio::{amplitude_row, check_symbol_decay, discretize, KernelAxes, KernelMatrix, Pairing, Weighting};
use crate::grid::{Grid, Side};
use crate::phase::PhaseFn;
use crate::symbol::{SeparableSymbol, Symbol};
use crate::transform::{node_exp_sum, Sign};

/// Tolerance of the `1/r = 1 + |1/p - 1/2|` test.
pub const SPECTRAL_FORMULA_TOLERANCE: f64 = 1e-12;

/// `sum_i sum_j exp(i phi(x_i, xi_j) - 2 pi i x_i xi_j) a(x_i, xi_j) dx dxi`.
pub fn nuclear_trace_formula(phase: &PhaseFn, symbol: &Symbol, grid: &Grid) -> Result<Complex64> {
    phase.validate()?;
    symbol.validate()?;
    check_symbol_decay(symbol, grid)?;
    let rows = (0..grid.size())
        .into_par_iter()
        .map(|i| {
            let x = grid.x(i);
            let row = amplitude_row(phase, symbol, grid, i)?;
            Ok(row
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::cis(-2.0 * std::f64::consts::PI * x * grid.xi(j)))
                .sum::<Complex64>())
        })
        .collect::<Result<Vec<Complex64>>>()?;
    Ok(rows.into_iter().sum::<Complex64>() * grid.dx() * grid.dxi())
}

fn expect_operator(m: &KernelMatrix) -> Result<()> {
    match m.axes() {
        KernelAxes::SpatialSpatial => Ok(()),
        KernelAxes::SpatialFrequency => {
            Err(Error::domain("trace needs a kernel K(x, y) acting on one space, got an amplitude matrix"))
        }
    }
}

/// `sum_i K(x_i, x_i) dx`.
pub fn kernel_diagonal_trace(m: &KernelMatrix) -> Result<Complex64> {
    expect_operator(m)?;
    let grid = m.grid();
    let unfold = match m.weighting() {
        Weighting::Separate => 1.0,
        Weighting::Folded => 1.0 / m.column_spacing(),
    };
    Ok((0..m.size()).map(|i| m.get(i, i) * unfold).sum::<Complex64>() * grid.dx())
}

/// Trace from the factor pairs of a separable symbol.
///
/// When the operator phase exceeds the symbol phase by `2 pi x xi` the
/// kernel is `sum_k h_k(x) (F^-1 g_k)(x - y)`, whose diagonal pairs `h_k`
/// with `F^-1 g_k` at lag zero: `sum_k (int h_k)(int g_k)`. When the phases
/// coincide the kernel is `sum_k h_k(x) (F g_k)(y)` and the trace is
/// `sum_k int h_k F g_k`. Other phase combinations have no factor pairing.
pub fn factored_trace(phase: &PhaseFn, symbol: &SeparableSymbol) -> Result<Complex64> {
    let pairing = Pairing::of(phase, &symbol.phase).ok_or_else(|| {
        Error::PhaseRegime(
            "factor pairing needs the operator phase to equal the symbol phase or exceed it by 2 pi x xi".into(),
        )
    })?;
    let d = &symbol.decomposition;
    let grid = *d.grid();
    Ok(d.factors()
        .iter()
        .map(|pair| match pairing {
            Pairing::PseudoDifferential => pair.h.integral() * pair.g.integral(),
            Pairing::Aligned => {
                let ghat = node_exp_sum(&grid, pair.g.values(), Side::Frequency, Sign::Minus);
                pair.h.values().iter().zip(&ghat).map(|(h, v)| h * v).sum::<Complex64>() * grid.dx() * grid.dxi()
            }
        })
        .sum())
}

#[derive(Debug, Clone, Default)]
pub struct SolverOptions {
    /// Iteration cap of the Schur QR sweep; `None` picks `30 N`.
    pub max_iterations: Option<usize>,
    pub cancel: Option<CancelToken>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigen_sum: Complex64,
    /// Sorted by descending modulus, ties by real then imaginary part.
    pub eigenvalues: Vec<Complex64>,
}

fn solve_eigenvalues(matrix: nalgebra::DMatrix<Complex64>, max_iterations: usize) -> Result<Vec<Complex64>> {
    let n = matrix.nrows();
    let schur = nalgebra::Schur::try_new(matrix, f64::EPSILON, max_iterations).ok_or_else(|| {
        Error::Solver(format!(
            "complex Schur iteration did not converge within {max_iterations} sweeps on a {n}x{n} matrix"
        ))
    })?;
    let values = schur.eigenvalues().ok_or_else(|| Error::Solver("Schur form is not triangular".into()))?;
    Ok(values.iter().copied().collect())
}

fn by_descending_modulus(a: &Complex64, b: &Complex64) -> Ordering {
    b.norm().total_cmp(&a.norm()).then(b.re.total_cmp(&a.re)).then(b.im.total_cmp(&a.im))
}

/// Eigenvalues of the weighted operator matrix `K(x_i, y_j) dy`.
pub fn spectral_trace(m: &KernelMatrix) -> Result<Spectrum> {
    spectral_trace_with(m, &SolverOptions::default())
}

pub fn spectral_trace_with(m: &KernelMatrix, options: &SolverOptions) -> Result<Spectrum> {
    expect_operator(m)?;
    let matrix = m.folded().to_dmatrix();
    let max_iterations = options.max_iterations.unwrap_or(30 * m.size().max(1));
    let mut eigenvalues = match &options.cancel {
        None => solve_eigenvalues(matrix, max_iterations)?,
        Some(token) => {
            if token.is_cancelled() {
                return Err(Error::Cancelled);
            }
            // The solver itself cannot be interrupted; a detached worker
            // lets the caller walk away from it.
            let (tx, rx) = mpsc::channel();
            std::thread::spawn(move || {
                let _ = tx.send(solve_eigenvalues(matrix, max_iterations));
            });
            loop {
                match rx.recv_timeout(Duration::from_millis(20)) {
                    Ok(result) => break result?,
                    Err(mpsc::RecvTimeoutError::Timeout) if token.is_cancelled() => return Err(Error::Cancelled),
                    Err(mpsc::RecvTimeoutError::Timeout) => continue,
                    Err(mpsc::RecvTimeoutError::Disconnected) => {
                        return Err(Error::Solver("eigen-solver worker terminated".into()))
                    }
                }
            }
        }
    };
    eigenvalues.sort_by(by_descending_modulus);
    let eigen_sum = eigenvalues.iter().sum();
    Ok(Spectrum { eigen_sum, eigenvalues })
}

/// Whether the nuclear trace must agree with the spectral trace, i.e.
/// `1/r = 1 + |1/p - 1/2|`.
pub fn spectral_formula_applies(p: f64, r: f64) -> Result<bool> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::domain(format!("p = {p} must lie in (1, inf)")));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::domain(format!("r = {r} must lie in (0, 1]")));
    }
    Ok((1.0 / r - 1.0 - (1.0 / p - 0.5).abs()).abs() <= SPECTRAL_FORMULA_TOLERANCE)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Applicability {
    pub p: f64,
    pub r: f64,
    pub spectral_formula_applies: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Discrepancy {
    pub first: &'static str,
    pub second: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceReport {
    pub formula_trace: Complex64,
    pub kernel_trace: Complex64,
    pub factored_trace: Option<Complex64>,
    pub matrix_trace: Complex64,
    pub eigen_sum: Complex64,
    pub eigenvalues: Vec<Complex64>,
    pub pairwise_discrepancies: Vec<Discrepancy>,
    pub applicability: Applicability,
}

impl TraceReport {
    pub fn max_discrepancy(&self) -> f64 {
        self.pairwise_discrepancies.iter().map(|d| d.value).fold(0.0, f64::max)
    }
}

/// All traces of the FIO `(phase, symbol)` on `grid`.
///
/// The factored trace is present for separable symbols whose phase pairs
/// with the operator phase. The applicability flag refers to an operator
/// on `L^p` with `p = p1 = p2`.
pub fn trace_report(
    phase: &PhaseFn,
    symbol: &Symbol,
    grid: &Grid,
    exponents: &Exponents,
    solver: &SolverOptions,
) -> Result<TraceReport> {
    let formula_trace = nuclear_trace_formula(phase, symbol, grid)?;
    let kernel = discretize(phase, symbol, grid)?;
    let kernel_trace = kernel_diagonal_trace(&kernel)?;
    let factored_trace = match symbol.as_separable() {
        Some(sep) if Pairing::of(phase, &sep.phase).is_some() && sep.grid() == grid => {
            Some(factored_trace(phase, sep)?)
        }
        _ => None,
    };
    let matrix_trace = kernel.folded().operator_trace();
    let spectrum = spectral_trace_with(&kernel, solver)?;

    let mut named = vec![("formula", formula_trace), ("kernel", kernel_trace)];
    if let Some(t) = factored_trace {
        named.push(("factored", t));
    }
    named.push(("matrix", matrix_trace));
    named.push(("eigen_sum", spectrum.eigen_sum));
    let mut pairwise_discrepancies = Vec::new();
    for (a, (na, ta)) in named.iter().enumerate() {
        for (nb, tb) in &named[a + 1..] {
            pairwise_discrepancies.push(Discrepancy { first: na, second: nb, value: (ta - tb).norm() });
        }
    }

    let p = exponents.p1();
    let r = exponents.r();
    let applies = exponents.p1() == exponents.p2() && spectral_formula_applies(p, r)?;
    Ok(TraceReport {
        formula_trace,
        kernel_trace,
        factored_trace,
        matrix_trace,
        eigen_sum: spectrum.eigen_sum,
        eigenvalues: spectrum.eigenvalues,
        pairwise_discrepancies,
        applicability: Applicability { p, r, spectral_formula_applies: applies },
    })
}
