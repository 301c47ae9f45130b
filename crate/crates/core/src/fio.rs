//! Fourier integral operators
//! `F f(x) = int exp(i phi(x, xi)) a(x, xi) f^(xi) dxi` on a grid.
//!
//! Every operator is evaluated by the uniform node quadrature in `xi`. Three
//! routes exist and must agree: the dense route through the amplitude
//! `exp(i phi) a` and `f^`, the kernel matrix
//! `K(x, y) = int exp(i phi(x, xi) - 2 pi i y xi) a(x, xi) dxi`, and, for
//! separable symbols whose phase pairs cleanly with the operator phase, a
//! rank-`K` FFT route.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Grid, SampledFunction, Side};
use crate::phase::{PhaseFn, PhasePolynomial};
use crate::symbol::{SeparableSymbol, Symbol};
use crate::transform::{fourier_forward, fourier_inverse, node_exp_sum, Sign};

/// Largest tolerated `|integrand(x, +-xi_max)| * L`.
pub const TRUNCATION_BUDGET: f64 = 1e-8;

/// Tolerance for deciding that two polynomial phases coincide.
const PHASE_MATCH_TOLERANCE: f64 = 1e-12;

/// What the rows and columns of a [`KernelMatrix`] are indexed by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelAxes {
    /// `K(x_i, y_j)`, the Schwartz kernel of the operator.
    SpatialSpatial,
    /// `exp(i phi(x_i, xi_j)) a(x_i, xi_j)`, the kernel of `K_sigma`.
    SpatialFrequency,
}

/// Whether the column quadrature weight is already multiplied in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    Separate,
    Folded,
}

/// Dense `N x N` discretization of an integral operator, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    grid: Grid,
    axes: KernelAxes,
    weighting: Weighting,
    entries: Vec<Complex64>,
}

impl KernelMatrix {
    pub fn new(grid: Grid, axes: KernelAxes, weighting: Weighting, entries: Vec<Complex64>) -> Result<Self> {
        let n = grid.size();
        if entries.len() != n * n {
            return Err(Error::domain(format!("kernel matrix needs {} entries, got {}", n * n, entries.len())));
        }
        if entries.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::domain("kernel matrix entries must be finite"));
        }
        Ok(KernelMatrix { grid, axes, weighting, entries })
    }

    fn from_rows(grid: Grid, axes: KernelAxes, rows: Vec<Vec<Complex64>>) -> Result<Self> {
        Self::new(grid, axes, Weighting::Separate, rows.concat())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn axes(&self) -> KernelAxes {
        self.axes
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn size(&self) -> usize {
        self.grid.size()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.size() + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        let n = self.size();
        &self.entries[i * n..(i + 1) * n]
    }

    fn column_side(&self) -> Side {
        match self.axes {
            KernelAxes::SpatialSpatial => Side::Spatial,
            KernelAxes::SpatialFrequency => Side::Frequency,
        }
    }

    /// Quadrature weight of the column variable (`dy` or `dxi`).
    pub fn column_spacing(&self) -> f64 {
        self.grid.spacing(self.column_side())
    }

    /// The operator matrix with the column weight multiplied in.
    pub fn folded(&self) -> KernelMatrix {
        match self.weighting {
            Weighting::Folded => self.clone(),
            Weighting::Separate => {
                let w = self.column_spacing();
                KernelMatrix {
                    grid: self.grid,
                    axes: self.axes,
                    weighting: Weighting::Folded,
                    entries: self.entries.iter().map(|v| v * w).collect(),
                }
            }
        }
    }

    fn effective_weight(&self) -> f64 {
        match self.weighting {
            Weighting::Folded => 1.0,
            Weighting::Separate => self.column_spacing(),
        }
    }

    /// `(M f)(x_i) = sum_j M_ij f_j w`.
    pub fn apply(&self, f: &SampledFunction) -> Result<SampledFunction> {
        f.expect_side(self.column_side())?;
        if *f.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        let w = self.effective_weight();
        let values = (0..self.size())
            .into_par_iter()
            .map(|i| self.row(i).iter().zip(f.values()).map(|(m, v)| m * v).sum::<Complex64>() * w)
            .collect();
        SampledFunction::new(self.grid, Side::Spatial, values)
    }

    /// Trace of the weighted operator matrix.
    pub fn operator_trace(&self) -> Complex64 {
        (0..self.size()).map(|i| self.get(i, i)).sum::<Complex64>() * self.effective_weight()
    }

    /// Copy of the entries as a dense nalgebra matrix (weighting unchanged).
    pub fn to_dmatrix(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_row_slice(self.size(), self.size(), &self.entries)
    }
}

/// How a separable symbol's own phase sits against the operator phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// Operator phase minus symbol phase is `2 pi x xi`: the operator is the
    /// pseudo-differential operator with symbol `sum_k h_k(x) g_k(xi)`.
    PseudoDifferential,
    /// The phases coincide, so `exp(i phi) a = sum_k h_k(x) g_k(xi)`.
    Aligned,
}

impl Pairing {
    pub fn of(operator: &PhaseFn, symbol: &PhaseFn) -> Option<Pairing> {
        let residual = operator.as_polynomial().sub(&symbol.as_polynomial());
        if residual.approx_eq(&PhaseFn::KohnNirenberg.as_polynomial(), PHASE_MATCH_TOLERANCE) {
            Some(Pairing::PseudoDifferential)
        } else if residual.approx_eq(&PhasePolynomial::zero(), PHASE_MATCH_TOLERANCE) {
            Some(Pairing::Aligned)
        } else {
            None
        }
    }
}

/// `exp(i phi(x_i, xi_j)) a(x_i, xi_j)` for every frequency node.
pub(crate) fn amplitude_row(phase: &PhaseFn, symbol: &Symbol, grid: &Grid, i: usize) -> Result<Vec<Complex64>> {
    let x = grid.x(i);
    let mut row = symbol.node_row(grid, i)?;
    for (j, v) in row.iter_mut().enumerate() {
        *v *= Complex64::cis(phase.eval(x, grid.xi(j)));
    }
    Ok(row)
}

fn edge_tail(grid: &Grid, integrand: &[Complex64]) -> f64 {
    let edge = integrand[0].norm().max(integrand[integrand.len() - 1].norm());
    edge * grid.half_width()
}

fn check_tail(tail: f64) -> Result<()> {
    if tail > TRUNCATION_BUDGET || tail.is_nan() {
        Err(Error::Truncation { tail, budget: TRUNCATION_BUDGET })
    } else {
        Ok(())
    }
}

/// Rejects symbols that are still significant at the edge of the frequency
/// window for some spatial node.
pub fn check_symbol_decay(symbol: &Symbol, grid: &Grid) -> Result<()> {
    let tail = (0..grid.size())
        .into_par_iter()
        .map(|i| {
            let x = grid.x(i);
            let lo = symbol.eval(x, grid.xi(0))?;
            let hi = symbol.eval(x, grid.xi(grid.size() - 1))?;
            Ok(edge_tail(grid, &[lo, hi]))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    check_tail(tail)
}

fn validate_inputs(phase: &PhaseFn, symbol: &Symbol) -> Result<()> {
    phase.validate()?;
    symbol.validate()
}

/// `K(x, y) = sum_j exp(i phi(x, xi_j) - 2 pi i y xi_j) a(x, xi_j) dxi`.
pub fn kernel_eval(phase: &PhaseFn, symbol: &Symbol, grid: &Grid, x: f64, y: f64) -> Result<Complex64> {
    validate_inputs(phase, symbol)?;
    let l = grid.half_width();
    for t in [x, y] {
        if !(t >= -l && t < l) {
            return Err(Error::OutOfDomain { x, xi: y });
        }
    }
    let integrand = grid
        .frequency_nodes()
        .into_iter()
        .map(|xi| Ok(symbol.eval(x, xi)? * Complex64::cis(phase.eval(x, xi) - 2.0 * std::f64::consts::PI * y * xi)))
        .collect::<Result<Vec<_>>>()?;
    check_tail(edge_tail(grid, &integrand))?;
    Ok(integrand.iter().sum::<Complex64>() * grid.dxi())
}

/// Route used by [`apply_fio_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApplyPath {
    /// Fast route when available, dense otherwise.
    Auto,
    Dense,
    /// Rank-`K` FFT route; fails for symbols it cannot handle.
    Fast,
}

/// Applies the FIO to spatial samples, choosing the fast route when the
/// symbol is separable and pairs with the operator phase.
pub fn apply_fio(phase: &PhaseFn, symbol: &Symbol, f: &SampledFunction) -> Result<SampledFunction> {
    apply_fio_with(phase, symbol, f, ApplyPath::Auto)
}

pub fn apply_fio_with(
    phase: &PhaseFn,
    symbol: &Symbol,
    f: &SampledFunction,
    path: ApplyPath,
) -> Result<SampledFunction> {
    f.expect_side(Side::Spatial)?;
    validate_inputs(phase, symbol)?;
    let fhat = fourier_forward(f)?;
    let fast =
        symbol.as_separable().filter(|s| s.grid() == f.grid()).and_then(|s| Some((s, Pairing::of(phase, &s.phase)?)));
    match (path, fast) {
        (ApplyPath::Auto | ApplyPath::Fast, Some((sep, pairing))) => {
            check_integrand_decay(phase, symbol, &fhat)?;
            apply_separable(sep, pairing, &fhat)
        }
        (ApplyPath::Fast, None) => Err(Error::PhaseRegime(
            "fast application needs a separable symbol whose phase differs from the operator phase by 0 or 2 pi x xi"
                .into(),
        )),
        _ => apply_amplitude(phase, symbol, &fhat),
    }
}

fn check_integrand_decay(phase: &PhaseFn, symbol: &Symbol, fhat: &SampledFunction) -> Result<()> {
    let grid = fhat.grid();
    let n = grid.size();
    let (lo, hi) = (fhat.values()[0], fhat.values()[n - 1]);
    let tail = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = grid.x(i);
            let a0 = symbol.eval(x, grid.xi(0))? * Complex64::cis(phase.eval(x, grid.xi(0)));
            let a1 = symbol.eval(x, grid.xi(n - 1))? * Complex64::cis(phase.eval(x, grid.xi(n - 1)));
            Ok(edge_tail(grid, &[a0 * lo, a1 * hi]))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    check_tail(tail)
}

fn apply_separable(sep: &SeparableSymbol, pairing: Pairing, fhat: &SampledFunction) -> Result<SampledFunction> {
    let grid = *fhat.grid();
    let mut out = vec![Complex64::new(0.0, 0.0); grid.size()];
    for pair in sep.decomposition.factors() {
        match pairing {
            Pairing::PseudoDifferential => {
                // h_k * F^-1[g_k f^]
                let product: Vec<Complex64> = pair.g.values().iter().zip(fhat.values()).map(|(g, v)| g * v).collect();
                let inner = fourier_inverse(&SampledFunction::new(grid, Side::Frequency, product)?)?;
                for ((o, h), v) in out.iter_mut().zip(pair.h.values()).zip(inner.values()) {
                    *o += h * v;
                }
            }
            Pairing::Aligned => {
                // h_k * int g_k f^
                let coupling: Complex64 =
                    pair.g.values().iter().zip(fhat.values()).map(|(g, v)| g * v).sum::<Complex64>() * grid.dxi();
                for (o, h) in out.iter_mut().zip(pair.h.values()) {
                    *o += h * coupling;
                }
            }
        }
    }
    SampledFunction::new(grid, Side::Spatial, out)
}

/// `K_sigma g(x_i) = sum_j exp(i phi(x_i, xi_j)) a(x_i, xi_j) g(xi_j) dxi`:
/// the amplitude operator acting on frequency samples.
pub fn apply_amplitude(phase: &PhaseFn, symbol: &Symbol, g: &SampledFunction) -> Result<SampledFunction> {
    g.expect_side(Side::Frequency)?;
    validate_inputs(phase, symbol)?;
    check_integrand_decay(phase, symbol, g)?;
    let grid = *g.grid();
    let dxi = grid.dxi();
    let values = (0..grid.size())
        .into_par_iter()
        .map(|i| {
            let row = amplitude_row(phase, symbol, &grid, i)?;
            Ok(row.iter().zip(g.values()).map(|(a, v)| a * v).sum::<Complex64>() * dxi)
        })
        .collect::<Result<Vec<_>>>()?;
    SampledFunction::new(grid, Side::Spatial, values)
}

/// Kernel matrix `K(x_i, y_j)` with the `dy` weight kept separate.
pub fn discretize(phase: &PhaseFn, symbol: &Symbol, grid: &Grid) -> Result<KernelMatrix> {
    validate_inputs(phase, symbol)?;
    check_symbol_decay(symbol, grid)?;
    let dxi = grid.dxi();
    let rows = (0..grid.size())
        .into_par_iter()
        .map(|i| {
            let row: Vec<Complex64> = amplitude_row(phase, symbol, grid, i)?.into_iter().map(|v| v * dxi).collect();
            // K(x_i, y_m) = sum_j row_j exp(-2 pi i y_m xi_j)
            Ok(node_exp_sum(grid, &row, Side::Frequency, Sign::Minus))
        })
        .collect::<Result<Vec<_>>>()?;
    KernelMatrix::from_rows(*grid, KernelAxes::SpatialSpatial, rows)
}

/// Node matrix of the amplitude kernel `exp(i phi(x, xi)) a(x, xi)`.
pub fn amplitude_matrix(phase: &PhaseFn, symbol: &Symbol, grid: &Grid) -> Result<KernelMatrix> {
    validate_inputs(phase, symbol)?;
    let rows =
        (0..grid.size()).into_par_iter().map(|i| amplitude_row(phase, symbol, grid, i)).collect::<Result<Vec<_>>>()?;
    KernelMatrix::from_rows(*grid, KernelAxes::SpatialFrequency, rows)
}

/// Relative `L^2` distance `||a - b|| / ||a||`; absolute when `a = 0`.
pub fn relative_l2(reference: &SampledFunction, other: &SampledFunction) -> f64 {
    let diff: f64 = reference.values().iter().zip(other.values()).map(|(a, b)| (a - b).norm_sqr()).sum();
    let norm: f64 = reference.values().iter().map(|a| a.norm_sqr()).sum();
    if norm == 0.0 {
        (diff * reference.spacing()).sqrt()
    } else {
        (diff / norm).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    /// `F f` computed by [`apply_fio`].
    pub direct: SampledFunction,
    /// `K_sigma (F f)`.
    pub factored: SampledFunction,
    /// Relative `L^2` distance between the two.
    pub discrepancy: f64,
}

/// Evaluates `F f` directly and as `K_sigma` applied to the Fourier transform.
pub fn compose_factorization(phase: &PhaseFn, symbol: &Symbol, f: &SampledFunction) -> Result<Factorization> {
    let direct = apply_fio(phase, symbol, f)?;
    let factored = apply_amplitude(phase, symbol, &fourier_forward(f)?)?;
    let discrepancy = relative_l2(&direct, &factored);
    Ok(Factorization { direct, factored, discrepancy })
}
