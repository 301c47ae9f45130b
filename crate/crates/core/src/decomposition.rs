//! Finite separable decompositions `sum_k h_k(x) g_k(xi)` together with the
//! exponent regime used to measure them.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, SampledFunction, Side};
use crate::profile::Profile;

/// Which nuclearity criterion the exponents refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `1 < p1 <= 2`; frequency factors are measured in `L^{p1}`.
    Low,
    /// `2 <= p1 < inf`; frequency factors are measured in `L^{p1'}`.
    High,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Low => "low",
            Regime::High => "high",
        })
    }
}

/// Conjugate exponent `p' = p / (p - 1)`, with `1' = inf` and `inf' = 1`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    r: f64,
    p1: f64,
    p2: f64,
    regime: Regime,
}

impl Exponents {
    pub fn new(r: f64, p1: f64, p2: f64, regime: Regime) -> Result<Self> {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::Regime(format!("r = {r} violates 0<r≤1")));
        }
        if !(p2 >= 1.0 && p2.is_finite()) {
            return Err(Error::Regime(format!("p2 = {p2} violates 1≤p₂<∞")));
        }
        match regime {
            Regime::Low if !(p1 > 1.0 && p1 <= 2.0) => {
                Err(Error::Regime(format!("p1 = {p1} violates 1<p₁≤2 required by the low regime")))
            }
            Regime::High if !(p1 >= 2.0 && p1.is_finite()) => {
                Err(Error::Regime(format!("p1 = {p1} violates 2≤p₁<∞ required by the high regime")))
            }
            _ => Ok(Exponents { r, p1, p2, regime }),
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Exponent in which the frequency factors `g_k` are measured.
    pub fn frequency_exponent(&self) -> f64 {
        match self.regime {
            Regime::Low => self.p1,
            Regime::High => conjugate_exponent(self.p1),
        }
    }
}

impl Default for Exponents {
    /// `r = 1`, `p1 = p2 = 2`, low regime: the trace-class setting on `L^2`.
    fn default() -> Self {
        Exponents { r: 1.0, p1: 2.0, p2: 2.0, regime: Regime::Low }
    }
}

/// One term `h(x) g(xi)` of a decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorPair {
    pub h: SampledFunction,
    pub g: SampledFunction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    factors: Vec<FactorPair>,
    exponents: Exponents,
}

impl Decomposition {
    pub fn new(factors: Vec<FactorPair>, exponents: Exponents) -> Result<Self> {
        let first = factors.first().ok_or_else(|| Error::domain("a decomposition needs at least one factor pair"))?;
        let grid = *first.h.grid();
        for pair in &factors {
            pair.h.expect_side(Side::Spatial)?;
            pair.g.expect_side(Side::Frequency)?;
            if *pair.h.grid() != grid || *pair.g.grid() != grid {
                return Err(Error::GridMismatch);
            }
        }
        Ok(Decomposition { factors, exponents })
    }

    /// Samples each `(h, g)` profile pair on `grid`.
    pub fn from_profiles(grid: &Grid, pairs: &[(Profile, Profile)], exponents: Exponents) -> Result<Self> {
        let factors = pairs
            .iter()
            .map(|(h, g)| Ok(FactorPair { h: h.sample(grid, Side::Spatial)?, g: g.sample(grid, Side::Frequency)? }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors, exponents)
    }

    pub fn grid(&self) -> &Grid {
        self.factors[0].h.grid()
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[FactorPair] {
        &self.factors
    }

    pub fn exponents(&self) -> &Exponents {
        &self.exponents
    }

    pub fn with_exponents(&self, exponents: Exponents) -> Self {
        Decomposition { factors: self.factors.clone(), exponents }
    }

    /// The first `m` terms (at least one).
    pub fn truncated(&self, m: usize) -> Self {
        let m = m.clamp(1, self.rank());
        Decomposition { factors: self.factors[..m].to_vec(), exponents: self.exponents }
    }

    /// `sum_k h_k(x_i) g_k(xi_j)` at grid nodes.
    pub fn node_sum(&self, i: usize, j: usize) -> Complex64 {
        self.factors.iter().map(|p| p.h.values()[i] * p.g.values()[j]).sum()
    }
}
