//! Closed parametric families of one-variable complex functions.
//!
//! These are the building blocks for test inputs `f`, for the factor
//! functions `h_k`, `g_k` of a decomposition and for product symbols. Every
//! family has a closed form, so its integrals and Fourier transforms are
//! known analytically.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{Grid, SampledFunction, Side};

#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Zero,
    Constant(Complex64),
    /// `amplitude * exp(-pi ((t - center) / width)^2) * exp(2 pi i frequency t)`.
    Gaussian {
        amplitude: Complex64,
        center: f64,
        width: f64,
        frequency: f64,
    },
    /// `amplitude` on `(lo, hi)`, zero outside, `amplitude / 2` at the two
    /// endpoints (the value a Fourier series converges to at a jump).
    Indicator {
        amplitude: Complex64,
        lo: f64,
        hi: f64,
    },
    /// `sum_m coeffs[m] t^m * exp(-pi (t / width)^2)`.
    PolyGaussian {
        coeffs: Vec<Complex64>,
        width: f64,
    },
    Sum(Vec<Profile>),
}

impl Profile {
    /// The unit Gaussian `exp(-pi t^2)`, which is its own Fourier transform.
    pub fn unit_gaussian() -> Self {
        Profile::gaussian(1.0, 0.0, 1.0)
    }

    pub fn gaussian(amplitude: f64, center: f64, width: f64) -> Self {
        Profile::Gaussian { amplitude: Complex64::new(amplitude, 0.0), center, width, frequency: 0.0 }
    }

    pub fn indicator(lo: f64, hi: f64) -> Self {
        Profile::Indicator { amplitude: Complex64::new(1.0, 0.0), lo, hi }
    }

    /// `H_n(sqrt(2 pi) t) exp(-pi t^2)` with the physicists' Hermite
    /// polynomial `H_n`; an eigenfunction of the Fourier transform with
    /// eigenvalue `(-i)^n`.
    pub fn hermite_gaussian(order: usize) -> Self {
        // H_{k+1}(u) = 2u H_k(u) - 2k H_{k-1}(u), coefficients in u.
        let mut prev = vec![1.0];
        let mut cur = vec![0.0, 2.0];
        if order == 0 {
            cur = prev.clone();
        } else {
            for k in 1..order {
                let mut next = vec![0.0; k + 2];
                for (m, c) in cur.iter().enumerate() {
                    next[m + 1] += 2.0 * c;
                }
                for (m, c) in prev.iter().enumerate() {
                    next[m] -= 2.0 * k as f64 * c;
                }
                prev = std::mem::replace(&mut cur, next);
            }
        }
        let s = (2.0 * PI).sqrt();
        let coeffs = cur.iter().enumerate().map(|(m, c)| Complex64::new(c * s.powi(m as i32), 0.0)).collect();
        Profile::PolyGaussian { coeffs, width: 1.0 }
    }

    /// A seeded sum of modulated Gaussian packets with complex amplitudes.
    ///
    /// Centers stay in `[-2, 2]`, widths in `[0.5, 1.5]` and modulation
    /// frequencies in `[-2, 2]`, so both the function and its transform
    /// are negligible at the edges of the default `L = 8, N = 256` grid.
    pub fn random_packet(seed: u64, terms: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let parts = (0..terms.max(1))
            .map(|_| Profile::Gaussian {
                amplitude: Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                center: rng.random_range(-2.0..2.0),
                width: rng.random_range(0.5..1.5),
                frequency: rng.random_range(-2.0..2.0),
            })
            .collect();
        Profile::Sum(parts)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64, what: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(format!("{what} must be finite")))
            }
        };
        let finite_c = |v: Complex64, what: &str| {
            if v.re.is_finite() && v.im.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(format!("{what} must be finite")))
            }
        };
        match self {
            Profile::Zero => Ok(()),
            Profile::Constant(c) => finite_c(*c, "constant"),
            Profile::Gaussian { amplitude, center, width, frequency } => {
                finite_c(*amplitude, "gaussian amplitude")?;
                finite(*center, "gaussian center")?;
                finite(*frequency, "gaussian frequency")?;
                if !(width.is_finite() && *width > 0.0) {
                    return Err(Error::domain(format!("gaussian width must be positive, got {width}")));
                }
                Ok(())
            }
            Profile::Indicator { amplitude, lo, hi } => {
                finite_c(*amplitude, "indicator amplitude")?;
                finite(*lo, "indicator lower end")?;
                finite(*hi, "indicator upper end")?;
                if lo >= hi {
                    return Err(Error::domain(format!("indicator interval [{lo}, {hi}] is empty")));
                }
                Ok(())
            }
            Profile::PolyGaussian { coeffs, width } => {
                for c in coeffs {
                    finite_c(*c, "polynomial coefficient")?;
                }
                if !(width.is_finite() && *width > 0.0) {
                    return Err(Error::domain(format!("gaussian width must be positive, got {width}")));
                }
                Ok(())
            }
            Profile::Sum(parts) => parts.iter().try_for_each(Profile::validate),
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        match self {
            Profile::Zero => Complex64::new(0.0, 0.0),
            Profile::Constant(c) => *c,
            Profile::Gaussian { amplitude, center, width, frequency } => {
                let u = (t - center) / width;
                amplitude * (-PI * u * u).exp() * Complex64::cis(2.0 * PI * frequency * t)
            }
            Profile::Indicator { amplitude, lo, hi } => {
                if t > *lo && t < *hi {
                    *amplitude
                } else if t == *lo || t == *hi {
                    amplitude * 0.5
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Profile::PolyGaussian { coeffs, width } => {
                let poly = coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c);
                let u = t / width;
                poly * (-PI * u * u).exp()
            }
            Profile::Sum(parts) => parts.iter().map(|p| p.eval(t)).sum(),
        }
    }

    /// Samples the profile at the nodes of one side of `grid`.
    pub fn sample(&self, grid: &Grid, side: Side) -> Result<SampledFunction> {
        self.validate()?;
        SampledFunction::from_fn(*grid, side, |t| self.eval(t))
    }
}

/// Free-function form of [`Profile::sample`].
pub fn sample(profile: &Profile, side: Side, grid: &Grid) -> Result<SampledFunction> {
    profile.sample(grid, side)
}
