//! Real phase functions `phi(x, xi)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Highest power of `x` or `xi` allowed in a polynomial phase.
pub const MAX_PHASE_DEGREE: usize = 3;

/// Coefficients `c[m][q]` of `sum c[m][q] x^m xi^q`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasePolynomial {
    coeffs: [[f64; MAX_PHASE_DEGREE + 1]; MAX_PHASE_DEGREE + 1],
}

impl PhasePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(coeffs: [[f64; MAX_PHASE_DEGREE + 1]; MAX_PHASE_DEGREE + 1]) -> Result<Self> {
        if coeffs.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::domain("phase coefficients must be finite"));
        }
        Ok(PhasePolynomial { coeffs })
    }

    /// Builds from `(m, q, c)` triples; repeated monomials accumulate.
    pub fn from_terms(terms: &[(usize, usize, f64)]) -> Result<Self> {
        let mut coeffs = [[0.0; MAX_PHASE_DEGREE + 1]; MAX_PHASE_DEGREE + 1];
        for &(m, q, c) in terms {
            if m > MAX_PHASE_DEGREE || q > MAX_PHASE_DEGREE {
                return Err(Error::domain(format!("phase monomial x^{m} xi^{q} exceeds degree {MAX_PHASE_DEGREE}")));
            }
            coeffs[m][q] += c;
        }
        Self::new(coeffs)
    }

    pub fn coeff(&self, m: usize, q: usize) -> f64 {
        self.coeffs[m][q]
    }

    pub fn eval(&self, x: f64, xi: f64) -> f64 {
        let mut acc = 0.0;
        for m in (0..=MAX_PHASE_DEGREE).rev() {
            let row = self.coeffs[m].iter().rev().fold(0.0, |a, c| a * xi + c);
            acc = acc * x + row;
        }
        acc
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs;
        for (row, orow) in coeffs.iter_mut().zip(&other.coeffs) {
            for (c, o) in row.iter_mut().zip(orow) {
                *c -= o;
            }
        }
        PhasePolynomial { coeffs }
    }

    /// True if every coefficient differs from `other`'s by at most `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.coeffs.iter().flatten().zip(other.coeffs.iter().flatten()).all(|(a, b)| (a - b).abs() <= tol)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PhaseFn {
    /// `2 pi x xi`: the operator reduces to a pseudo-differential operator.
    KohnNirenberg,
    /// `2 pi (x + shift) xi + offset`.
    LinearShifted {
        shift: f64,
        offset: f64,
    },
    Polynomial(PhasePolynomial),
}

impl PhaseFn {
    /// The phase that is identically zero.
    pub fn zero() -> Self {
        PhaseFn::Polynomial(PhasePolynomial::zero())
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PhaseFn::KohnNirenberg => Ok(()),
            PhaseFn::LinearShifted { shift, offset } => {
                if shift.is_finite() && offset.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain("phase shift and offset must be finite"))
                }
            }
            PhaseFn::Polynomial(p) => PhasePolynomial::new(p.coeffs).map(|_| ()),
        }
    }

    pub fn eval(&self, x: f64, xi: f64) -> f64 {
        match self {
            PhaseFn::KohnNirenberg => 2.0 * PI * x * xi,
            PhaseFn::LinearShifted { shift, offset } => 2.0 * PI * (x + shift) * xi + offset,
            PhaseFn::Polynomial(p) => p.eval(x, xi),
        }
    }

    pub fn is_kohn_nirenberg(&self) -> bool {
        matches!(self, PhaseFn::KohnNirenberg)
    }

    /// Every family is a polynomial of low degree; this is its coefficient form.
    pub fn as_polynomial(&self) -> PhasePolynomial {
        let mut c = [[0.0; MAX_PHASE_DEGREE + 1]; MAX_PHASE_DEGREE + 1];
        match self {
            PhaseFn::KohnNirenberg => c[1][1] = 2.0 * PI,
            PhaseFn::LinearShifted { shift, offset } => {
                c[1][1] = 2.0 * PI;
                c[0][1] = 2.0 * PI * shift;
                c[0][0] = *offset;
            }
            PhaseFn::Polynomial(p) => return *p,
        }
        PhasePolynomial { coeffs: c }
    }
}
