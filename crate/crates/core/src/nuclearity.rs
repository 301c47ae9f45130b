//! Separable-decomposition criteria for `r`-nuclearity.
//!
//! A decomposition `exp(i phi) a = sum_k h_k(x) g_k(xi)` certifies the
//! operator when the factor norms are `r`-summable. On a finite grid we
//! measure the summability functional of a given decomposition, check how
//! well a decomposition reproduces a symbol, and extract the optimal
//! (Hilbert–Schmidt) decomposition of a kernel by SVD.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::decomposition::{Decomposition, Exponents, FactorPair};
use crate::error::{Error, Result};
use crate::fio::{KernelAxes, KernelMatrix, Weighting};
use crate::grid::{Grid, SampledFunction, Side};
use crate::phase::PhaseFn;
use crate::symbol::Symbol;
use crate::transform::{lp_norm, node_exp_sum, Sign};

/// Residual below which a decomposition certifies a symbol.
pub const DEFAULT_CERTIFICATION_TOLERANCE: f64 = 1e-8;

/// `sum_k ||g_k||_q^r ||h_k||_{p2}^r` where `q = p1` in the low regime and
/// `q = p1'` in the high regime.
pub fn e_r_functional(d: &Decomposition) -> Result<f64> {
    let ex = d.exponents();
    let q = ex.frequency_exponent();
    d.factors().iter().try_fold(0.0, |acc, pair| {
        let g = lp_norm(&pair.g, q)?;
        let h = lp_norm(&pair.h, ex.p2())?;
        Ok(acc + g.powf(ex.r()) * h.powf(ex.r()))
    })
}

/// The separable symbol `exp(-i phi) sum_k h_k g_k`.
pub fn reconstruct_symbol(d: &Decomposition, phase: &PhaseFn) -> Result<Symbol> {
    Symbol::separable(d.clone(), phase.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    CertifiedNuclear,
    Rejected,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verification {
    pub max_residual: f64,
    pub e_r_value: f64,
    pub verdict: Verdict,
}

/// Compares `a` with `exp(-i phi) sum_k h_k g_k` at every node pair of the
/// decomposition's grid.
pub fn verify_decomposition(a: &Symbol, d: &Decomposition, phase: &PhaseFn, tolerance: f64) -> Result<Verification> {
    phase.validate()?;
    a.validate()?;
    let grid = *d.grid();
    let max_residual = (0..grid.size())
        .into_par_iter()
        .map(|i| {
            let row = a.node_row(&grid, i)?;
            let x = grid.x(i);
            Ok(row
                .iter()
                .enumerate()
                .map(|(j, v)| (v - Complex64::cis(-phase.eval(x, grid.xi(j))) * d.node_sum(i, j)).norm())
                .fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let e_r_value = e_r_functional(d)?;
    let verdict =
        if max_residual <= tolerance && e_r_value.is_finite() { Verdict::CertifiedNuclear } else { Verdict::Rejected };
    Ok(Verification { max_residual, e_r_value, verdict })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub decomposition: Decomposition,
    /// All singular values of the quadrature-weighted kernel, descending.
    pub singular_values: Vec<f64>,
    /// `L^2` norm of kernel minus its rank-`K` reconstruction, measured
    /// directly on the nodes.
    pub residual_l2: f64,
    /// Largest nodewise deviation of the reconstruction.
    pub residual_max: f64,
}

impl Extraction {
    /// Optimal `L^2` residual for every rank `1..=N` from the singular values.
    pub fn residual_profile(&self) -> Vec<f64> {
        let s = &self.singular_values;
        (1..=s.len()).map(|k| s[k..].iter().map(|v| v * v).sum::<f64>().sqrt()).collect()
    }
}

/// Best rank-`K` factorization of a kernel matrix by SVD of its weighted
/// node matrix.
///
/// Singular vectors are scaled by the square roots of the quadrature
/// weights, so the factors are `L^2`-normalized up to `sqrt(s_k)` each and
/// the `r = 1, p = 2` functional equals the sum of the kept singular values.
/// A `K(x, y)` kernel has its `y` factors mapped to frequency factors through
/// the inverse of the `y`-quadrature of `exp(-2 pi i y xi)`, so both axes
/// produce a decomposition of the amplitude `exp(i phi) a`.
pub fn extract_decomposition(m: &KernelMatrix, rank: usize, exponents: Exponents) -> Result<Extraction> {
    let n = m.size();
    if rank == 0 || rank > n {
        return Err(Error::Rank { rank, size: n });
    }
    let grid: Grid = *m.grid();
    let col_h = m.column_spacing();
    let row_h = grid.dx();
    let unfold = match m.weighting() {
        Weighting::Separate => 1.0,
        Weighting::Folded => 1.0 / col_h,
    };
    let raw: Vec<Complex64> = m.entries().iter().map(|v| v * unfold).collect();
    let weight = (row_h * col_h).sqrt();
    let weighted = nalgebra::DMatrix::from_row_iterator(n, n, raw.iter().map(|v| v * weight));
    let svd = nalgebra::SVD::try_new(weighted, true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Solver("singular value decomposition did not converge".into()))?;
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V^H");
    let singular_values: Vec<f64> = svd.singular_values.iter().copied().collect();

    let mut spatial = Vec::with_capacity(rank);
    let mut column = Vec::with_capacity(rank);
    for (k, sk) in singular_values[..rank].iter().enumerate() {
        let mut uk: Vec<Complex64> = u.column(k).iter().copied().collect();
        let mut wk: Vec<Complex64> = v_t.row(k).iter().copied().collect();
        // Pin the phase: the largest-modulus entry of u_k becomes real positive.
        let pivot = uk
            .iter()
            .enumerate()
            .fold((0, -1.0), |(bi, bv), (i, v)| if v.norm() > bv { (i, v.norm()) } else { (bi, bv) })
            .0;
        let rot = if uk[pivot].norm() > 0.0 { uk[pivot].conj() / uk[pivot].norm() } else { Complex64::new(1.0, 0.0) };
        let root = sk.sqrt();
        uk.iter_mut().for_each(|v| *v = *v * rot * root / row_h.sqrt());
        wk.iter_mut().for_each(|v| *v = *v * rot.conj() * root / col_h.sqrt());
        spatial.push(uk);
        column.push(wk);
    }

    let mut residual_sq = 0.0;
    let mut residual_max: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let approx: Complex64 = (0..rank).map(|k| spatial[k][i] * column[k][j]).sum();
            let d = (raw[i * n + j] - approx).norm();
            residual_sq += d * d;
            residual_max = residual_max.max(d);
        }
    }
    let residual_l2 = (residual_sq * row_h * col_h).sqrt();

    let factors = spatial
        .into_iter()
        .zip(column)
        .map(|(h, c)| {
            let g = match m.axes() {
                KernelAxes::SpatialFrequency => c,
                KernelAxes::SpatialSpatial => {
                    // g(xi_j) = sum_m c(y_m) exp(2 pi i y_m xi_j) dy
                    node_exp_sum(&grid, &c, Side::Spatial, Sign::Plus).into_iter().map(|v| v * col_h).collect()
                }
            };
            Ok(FactorPair {
                h: SampledFunction::new(grid, Side::Spatial, h)?,
                g: SampledFunction::new(grid, Side::Frequency, g)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Extraction {
        decomposition: Decomposition::new(factors, exponents)?,
        singular_values,
        residual_l2,
        residual_max,
    })
}
