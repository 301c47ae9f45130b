//! Fourier integral operators on a truncated line.
//!
//! An operator `F f(x) = int exp(i phi(x, xi)) a(x, xi) f^(xi) dxi` is given
//! by a [`PhaseFn`] and a [`Symbol`] and discretized on a [`Grid`]. The crate
//! applies such operators, checks separable decompositions of their
//! amplitudes and computes their trace by several independent routes.

pub mod cancel;
pub mod decomposition;
pub mod error;
pub mod fio;
pub mod grid;
pub mod nuclearity;
pub mod phase;
pub mod profile;
pub mod symbol;
pub mod trace;
pub mod transform;

pub use cancel::CancelToken;
pub use decomposition::{conjugate_exponent, Decomposition, Exponents, FactorPair, Regime};
pub use error::{Error, Result};
pub use fio::{
    amplitude_matrix, apply_amplitude, apply_fio, apply_fio_with, compose_factorization, discretize, kernel_eval,
    relative_l2, ApplyPath, Factorization, KernelAxes, KernelMatrix, Pairing, Weighting, TRUNCATION_BUDGET,
};
pub use grid::{Grid, SampledFunction, Side};
pub use nuclearity::{
    e_r_functional, extract_decomposition, reconstruct_symbol, verify_decomposition, Extraction, Verdict, Verification,
    DEFAULT_CERTIFICATION_TOLERANCE,
};
pub use phase::{PhaseFn, PhasePolynomial, MAX_PHASE_DEGREE};
pub use profile::{sample, Profile};
pub use symbol::{eval_symbol, PointwiseSymbol, SeparableSymbol, Symbol, SymbolTable};
pub use trace::{
    factored_trace, kernel_diagonal_trace, nuclear_trace_formula, spectral_formula_applies, spectral_trace,
    spectral_trace_with, trace_report, Applicability, Discrepancy, SolverOptions, Spectrum, TraceReport,
};
pub use transform::{fourier_forward, fourier_inverse, hausdorff_young_check, lp_norm, HausdorffYoung};

pub use num_complex::Complex64;
