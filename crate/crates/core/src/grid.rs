//! Uniform discretization of the truncated line `[-L, L)` and of its dual
//! frequency window, plus complex samples living on either side.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Which variable a sampled function depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Spatial,
    Frequency,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Spatial => "spatial",
            Side::Frequency => "frequency",
        })
    }
}

/// `N` spatial nodes `x_i = -L + i dx` with `dx = 2L/N` and `N` frequency
/// nodes `xi_j = (j - N/2) / (2L)`.
///
/// The pairing satisfies `dx * dxi * N = 1`, which is what lets a length-`N`
/// FFT evaluate the continuous-convention Fourier sums exactly at the nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    half_width: f64,
    size: usize,
}

impl Grid {
    pub fn new(half_width: f64, size: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::domain(format!("half-width must be positive and finite, got {half_width}")));
        }
        if size < 2 || !size.is_multiple_of(2) {
            return Err(Error::domain(format!("grid size must be a positive even integer, got {size}")));
        }
        Ok(Grid { half_width, size })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.size as f64
    }

    pub fn dxi(&self) -> f64 {
        1.0 / (2.0 * self.half_width)
    }

    /// Node spacing of the given side.
    pub fn spacing(&self, side: Side) -> f64 {
        match side {
            Side::Spatial => self.dx(),
            Side::Frequency => self.dxi(),
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.dx()
    }

    pub fn xi(&self, j: usize) -> f64 {
        self.frequency_index(j) as f64 * self.dxi()
    }

    /// Signed frequency index `j - N/2` of the `j`-th frequency node.
    pub fn frequency_index(&self, j: usize) -> i64 {
        j as i64 - (self.size / 2) as i64
    }

    pub fn node(&self, side: Side, k: usize) -> f64 {
        match side {
            Side::Spatial => self.x(k),
            Side::Frequency => self.xi(k),
        }
    }

    pub fn nodes(&self, side: Side) -> Vec<f64> {
        (0..self.size).map(|k| self.node(side, k)).collect()
    }

    pub fn spatial_nodes(&self) -> Vec<f64> {
        self.nodes(Side::Spatial)
    }

    pub fn frequency_nodes(&self) -> Vec<f64> {
        self.nodes(Side::Frequency)
    }

    /// Index of the node closest to `t`, or `None` if `t` lies more than half
    /// a cell beyond the outermost nodes.
    pub fn nearest(&self, side: Side, t: f64) -> Option<usize> {
        if !t.is_finite() {
            return None;
        }
        let h = self.spacing(side);
        let first = self.node(side, 0);
        let k = ((t - first) / h).round();
        if k < 0.0 || k >= self.size as f64 {
            return None;
        }
        Some(k as usize)
    }

    /// Largest frequency magnitude represented on the grid, `N / (4L)`.
    pub fn frequency_extent(&self) -> f64 {
        (self.size / 2) as f64 * self.dxi()
    }
}

/// Complex samples of a function at the nodes of one side of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    side: Side,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: Grid, side: Side, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::domain(format!("expected {} samples, got {}", grid.size(), values.len())));
        }
        if let Some(k) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::domain(format!("sample {k} is not finite")));
        }
        Ok(SampledFunction { grid, side, values })
    }

    pub fn zeros(grid: Grid, side: Side) -> Self {
        SampledFunction { grid, side, values: vec![Complex64::new(0.0, 0.0); grid.size()] }
    }

    /// Samples `f` at every node of `side`.
    pub fn from_fn(grid: Grid, side: Side, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.nodes(side).into_iter().map(f).collect();
        Self::new(grid, side, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing(self.side)
    }

    pub(crate) fn expect_side(&self, side: Side) -> Result<()> {
        if self.side == side {
            Ok(())
        } else {
            Err(Error::SideMismatch { expected: side, found: self.side })
        }
    }

    /// Value at the node nearest to `t`.
    pub fn at(&self, t: f64) -> Option<Complex64> {
        self.grid.nearest(self.side, t).map(|k| self.values[k])
    }

    /// Pointwise `alpha * self + beta * other`.
    pub fn combine(&self, alpha: Complex64, other: &SampledFunction, beta: Complex64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        other.expect_side(self.side)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| alpha * a + beta * b).collect();
        Self::new(self.grid, self.side, values)
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        SampledFunction { grid: self.grid, side: self.side, values: self.values.iter().map(|v| alpha * v).collect() }
    }

    /// Quadrature of the samples, `sum_k f_k * h`.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.spacing()
    }
}
