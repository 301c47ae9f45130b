//! Continuous-convention Fourier transform on grid samples.
//!
//! With `(F f)(xi) = int exp(-2 pi i x xi) f(x) dx` discretized by the
//! uniform node sum, the product of a spatial and a frequency node is
//! `x_i xi_j = -j'/2 + i j'/N` where `j' = j - N/2`. Hence
//! `exp(s 2 pi i x_i xi_j) = (-1)^{j'} exp(s 2 pi i i j' / N)` and every node
//! sum is a length-`N` DFT with an alternating-sign twist.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::{Grid, SampledFunction, Side};

/// Sign of the exponent in `exp(sign * 2 pi i t s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Sign {
    Minus,
    Plus,
}

fn alternate(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Unweighted node sum `out_m = sum_n input_n exp(sign 2 pi i t_m s_n)`, where
/// `s_n` runs over the nodes of `from` and `t_m` over the opposite side.
pub(crate) fn node_exp_sum(grid: &Grid, input: &[Complex64], from: Side, sign: Sign) -> Vec<Complex64> {
    let n = grid.size();
    debug_assert_eq!(input.len(), n);
    let mut planner = FftPlanner::<f64>::new();
    let fft = match sign {
        Sign::Minus => planner.plan_fft_forward(n),
        Sign::Plus => planner.plan_fft_inverse(n),
    };
    let half = (n / 2) as i64;
    match from {
        Side::Spatial => {
            // out_j = (-1)^{j'} DFT(input)[j' mod N]
            let mut buf = input.to_vec();
            fft.process(&mut buf);
            (0..n)
                .map(|j| {
                    let jp = j as i64 - half;
                    buf[jp.rem_euclid(n as i64) as usize] * alternate(jp)
                })
                .collect()
        }
        Side::Frequency => {
            // out_i = DFT(c)[i] with c[j' mod N] = (-1)^{j'} input_j
            let mut buf = vec![Complex64::new(0.0, 0.0); n];
            for (j, v) in input.iter().enumerate() {
                let jp = j as i64 - half;
                buf[jp.rem_euclid(n as i64) as usize] = v * alternate(jp);
            }
            fft.process(&mut buf);
            buf
        }
    }
}

/// `(F f)(xi_j) = sum_i exp(-2 pi i x_i xi_j) f(x_i) dx`, evaluated by FFT.
pub fn fourier_forward(f: &SampledFunction) -> Result<SampledFunction> {
    f.expect_side(Side::Spatial)?;
    let grid = *f.grid();
    let dx = grid.dx();
    let values = node_exp_sum(&grid, f.values(), Side::Spatial, Sign::Minus).into_iter().map(|v| v * dx).collect();
    SampledFunction::new(grid, Side::Frequency, values)
}

/// `(F^-1 g)(x_i) = sum_j exp(2 pi i x_i xi_j) g(xi_j) dxi`; the exact
/// inverse of [`fourier_forward`] on the grid.
pub fn fourier_inverse(g: &SampledFunction) -> Result<SampledFunction> {
    g.expect_side(Side::Frequency)?;
    let grid = *g.grid();
    let dxi = grid.dxi();
    let values = node_exp_sum(&grid, g.values(), Side::Frequency, Sign::Plus).into_iter().map(|v| v * dxi).collect();
    SampledFunction::new(grid, Side::Spatial, values)
}

/// Quadrature `L^p` norm, `(sum |f_k|^p h)^{1/p}`; `p = f64::INFINITY` gives
/// the max norm.
pub fn lp_norm(f: &SampledFunction, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::domain(format!("L^p norm needs p >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(f.values().iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    let h = f.spacing();
    // Scale by the max modulus so large p does not overflow.
    let peak = f.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = f.values().iter().map(|v| (v.norm() / peak).powf(p)).sum();
    Ok(peak * (sum * h).powf(1.0 / p))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HausdorffYoung {
    /// `||F f||_{p'}`
    pub lhs: f64,
    /// `||f||_p`
    pub rhs: f64,
    pub holds: bool,
}

/// Relative slack allowed on the right-hand side of the inequality.
pub const HAUSDORFF_YOUNG_TOLERANCE: f64 = 1e-8;

/// Checks `||F f||_{p'} <= ||f||_p` for `1 < p <= 2`.
pub fn hausdorff_young_check(f: &SampledFunction, p: f64) -> Result<HausdorffYoung> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::domain(format!("Hausdorff-Young check needs 1 < p <= 2, got {p}")));
    }
    let p_conj = p / (p - 1.0);
    let lhs = lp_norm(&fourier_forward(f)?, p_conj)?;
    let rhs = lp_norm(f, p)?;
    Ok(HausdorffYoung { lhs, rhs, holds: lhs <= rhs + HAUSDORFF_YOUNG_TOLERANCE * rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Profile;

    fn grid() -> Grid {
        Grid::new(8.0, 256).unwrap()
    }

    fn max_err(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn gaussian_is_self_dual() {
        let g = grid();
        let f = Profile::unit_gaussian().sample(&g, Side::Spatial).unwrap();
        let fhat = fourier_forward(&f).unwrap();
        assert_eq!(fhat.side(), Side::Frequency);
        let expect = Profile::unit_gaussian().sample(&g, Side::Frequency).unwrap();
        assert!(max_err(fhat.values(), expect.values()) <= 1e-8);
        let back = fourier_inverse(&expect).unwrap();
        assert!(max_err(back.values(), f.values()) <= 1e-8);
    }

    #[test]
    fn zero_maps_to_zero() {
        let g = grid();
        let z = SampledFunction::zeros(g, Side::Spatial);
        assert!(fourier_forward(&z).unwrap().values().iter().all(|v| v.norm() == 0.0));
        let z = SampledFunction::zeros(g, Side::Frequency);
        assert!(fourier_inverse(&z).unwrap().values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn side_mismatch() {
        let g = grid();
        let z = SampledFunction::zeros(g, Side::Frequency);
        assert_eq!(
            fourier_forward(&z).unwrap_err(),
            Error::SideMismatch { expected: Side::Spatial, found: Side::Frequency }
        );
        let z = SampledFunction::zeros(g, Side::Spatial);
        assert!(matches!(fourier_inverse(&z), Err(Error::SideMismatch { .. })));
    }

    #[test]
    fn round_trip() {
        let g = grid();
        let f = Profile::random_packet(11, 4).sample(&g, Side::Spatial).unwrap();
        let back = fourier_inverse(&fourier_forward(&f).unwrap()).unwrap();
        let peak = lp_norm(&f, f64::INFINITY).unwrap();
        assert!(max_err(back.values(), f.values()) <= 1e-10 * peak);
    }

    #[test]
    fn gaussian_norms() {
        let f = Profile::unit_gaussian().sample(&grid(), Side::Spatial).unwrap();
        assert!((lp_norm(&f, 1.0).unwrap() - 1.0).abs() <= 1e-8);
        assert!((lp_norm(&f, 2.0).unwrap() - 2f64.powf(-0.25)).abs() <= 1e-8);
        assert!((lp_norm(&f, 2.0).unwrap() - 0.8408964).abs() <= 1e-7);
        assert_eq!(lp_norm(&f, f64::INFINITY).unwrap(), 1.0);
        let z = SampledFunction::zeros(grid(), Side::Spatial);
        for p in [1.0, 1.5, 2.0, 7.0, f64::INFINITY] {
            assert_eq!(lp_norm(&z, p).unwrap(), 0.0);
        }
        assert!(lp_norm(&f, 0.5).is_err());
        assert!(lp_norm(&f, f64::NAN).is_err());
    }

    #[test]
    fn hausdorff_young_endpoints() {
        let f = Profile::unit_gaussian().sample(&grid(), Side::Spatial).unwrap();
        let hy = hausdorff_young_check(&f, 2.0).unwrap();
        assert!(hy.holds);
        assert!((hy.lhs - hy.rhs).abs() <= 1e-12);

        // Nonnegative f: sup |f^| = f^(0) = int f, so the p -> 1 end is tight.
        let hy = hausdorff_young_check(&f, 1.01).unwrap();
        assert!(hy.holds, "{hy:?}");
        assert!(hy.lhs > 0.95 * hy.rhs, "{hy:?}");

        assert!(hausdorff_young_check(&f, 1.0).is_err());
        assert!(hausdorff_young_check(&f, 2.5).is_err());
    }
}
