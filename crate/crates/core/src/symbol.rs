//! Symbols `a(x, xi)`: closed-form products, separable decompositions
//! carrying their own phase prefactor, and node tables.

use num_complex::Complex64;

use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::grid::{Grid, Side};
use crate::phase::PhaseFn;
use crate::profile::Profile;

#[derive(Debug, Clone, PartialEq)]
pub enum PointwiseSymbol {
    Constant(Complex64),
    /// `spatial(x) * frequency(xi)`.
    Product {
        spatial: Profile,
        frequency: Profile,
    },
    Sum(Vec<PointwiseSymbol>),
}

impl PointwiseSymbol {
    pub fn product(spatial: Profile, frequency: Profile) -> Self {
        PointwiseSymbol::Product { spatial, frequency }
    }

    pub fn eval(&self, x: f64, xi: f64) -> Complex64 {
        match self {
            PointwiseSymbol::Constant(c) => *c,
            PointwiseSymbol::Product { spatial, frequency } => spatial.eval(x) * frequency.eval(xi),
            PointwiseSymbol::Sum(parts) => parts.iter().map(|p| p.eval(x, xi)).sum(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            PointwiseSymbol::Constant(c) if !(c.re.is_finite() && c.im.is_finite()) => {
                Err(Error::domain("constant symbol must be finite"))
            }
            PointwiseSymbol::Constant(_) => Ok(()),
            PointwiseSymbol::Product { spatial, frequency } => {
                spatial.validate()?;
                frequency.validate()
            }
            PointwiseSymbol::Sum(parts) => parts.iter().try_for_each(PointwiseSymbol::validate),
        }
    }
}

/// `a(x, xi) = exp(-i phase(x, xi)) * sum_k h_k(x) g_k(xi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableSymbol {
    pub decomposition: Decomposition,
    pub phase: PhaseFn,
}

impl SeparableSymbol {
    pub fn new(decomposition: Decomposition, phase: PhaseFn) -> Result<Self> {
        phase.validate()?;
        Ok(SeparableSymbol { decomposition, phase })
    }

    pub fn grid(&self) -> &Grid {
        self.decomposition.grid()
    }

    fn eval(&self, x: f64, xi: f64) -> Result<Complex64> {
        let grid = self.grid();
        match (grid.nearest(Side::Spatial, x), grid.nearest(Side::Frequency, xi)) {
            (Some(i), Some(j)) => Ok(self.eval_node(i, j, x, xi)),
            _ => Err(Error::OutOfDomain { x, xi }),
        }
    }

    fn eval_node(&self, i: usize, j: usize, x: f64, xi: f64) -> Complex64 {
        Complex64::cis(-self.phase.eval(x, xi)) * self.decomposition.node_sum(i, j)
    }
}

/// Node values `a(x_i, xi_j)` stored row-major by spatial index.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolTable {
    grid: Grid,
    values: Vec<Complex64>,
}

impl SymbolTable {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        let n = grid.size();
        if values.len() != n * n {
            return Err(Error::domain(format!("symbol table needs {} values, got {}", n * n, values.len())));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::domain("symbol table values must be finite"));
        }
        Ok(SymbolTable { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.grid.size() + j]
    }

    /// Copy with `delta` added at node `(i, j)`.
    pub fn perturbed(&self, i: usize, j: usize, delta: Complex64) -> Result<Self> {
        let n = self.grid.size();
        if i >= n || j >= n {
            return Err(Error::domain(format!("node ({i}, {j}) outside a {n}x{n} table")));
        }
        let mut values = self.values.clone();
        values[i * n + j] += delta;
        Self::new(self.grid, values)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    Pointwise(PointwiseSymbol),
    Separable(SeparableSymbol),
    Tabulated(SymbolTable),
}

impl Symbol {
    pub fn zero() -> Self {
        Symbol::Pointwise(PointwiseSymbol::Constant(Complex64::new(0.0, 0.0)))
    }

    pub fn constant(c: Complex64) -> Self {
        Symbol::Pointwise(PointwiseSymbol::Constant(c))
    }

    pub fn product(spatial: Profile, frequency: Profile) -> Self {
        Symbol::Pointwise(PointwiseSymbol::product(spatial, frequency))
    }

    pub fn separable(decomposition: Decomposition, phase: PhaseFn) -> Result<Self> {
        SeparableSymbol::new(decomposition, phase).map(Symbol::Separable)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Symbol::Pointwise(p) => p.validate(),
            Symbol::Separable(s) => s.phase.validate(),
            Symbol::Tabulated(_) => Ok(()),
        }
    }

    pub fn as_separable(&self) -> Option<&SeparableSymbol> {
        match self {
            Symbol::Separable(s) => Some(s),
            _ => None,
        }
    }

    /// The grid a sampled symbol lives on; `None` for closed-form symbols.
    pub fn native_grid(&self) -> Option<&Grid> {
        match self {
            Symbol::Pointwise(_) => None,
            Symbol::Separable(s) => Some(s.grid()),
            Symbol::Tabulated(t) => Some(t.grid()),
        }
    }

    /// `a(x, xi)`. Sampled symbols use the nearest grid node.
    pub fn eval(&self, x: f64, xi: f64) -> Result<Complex64> {
        match self {
            Symbol::Pointwise(p) => Ok(p.eval(x, xi)),
            Symbol::Separable(s) => s.eval(x, xi),
            Symbol::Tabulated(t) => match (t.grid.nearest(Side::Spatial, x), t.grid.nearest(Side::Frequency, xi)) {
                (Some(i), Some(j)) => Ok(t.get(i, j)),
                _ => Err(Error::OutOfDomain { x, xi }),
            },
        }
    }

    /// `a(x_i, xi_j)` for every frequency node `j` of `grid`.
    pub fn node_row(&self, grid: &Grid, i: usize) -> Result<Vec<Complex64>> {
        let x = grid.x(i);
        let n = grid.size();
        match self {
            Symbol::Separable(s) if s.grid() == grid => Ok((0..n).map(|j| s.eval_node(i, j, x, grid.xi(j))).collect()),
            Symbol::Tabulated(t) if t.grid() == grid => Ok((0..n).map(|j| t.get(i, j)).collect()),
            _ => (0..n).map(|j| self.eval(x, grid.xi(j))).collect(),
        }
    }

    /// Node values on `grid` as a table.
    pub fn tabulate(&self, grid: &Grid) -> Result<SymbolTable> {
        let mut values = Vec::with_capacity(grid.size() * grid.size());
        for i in 0..grid.size() {
            values.extend(self.node_row(grid, i)?);
        }
        SymbolTable::new(*grid, values)
    }
}

/// Free-function form of [`Symbol::eval`].
pub fn eval_symbol(symbol: &Symbol, x: f64, xi: f64) -> Result<Complex64> {
    symbol.eval(x, xi)
}
