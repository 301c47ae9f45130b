//! Oracles shared by the integration tests. Nothing here calls the FFT or
//! the crate's quadrature helpers.
#![allow(dead_code)]

use std::f64::consts::PI;

use fio_nuclear::{Complex64, Grid, SampledFunction, Side};

/// Direct O(N^2) evaluation of `sum_n input_n exp(sign 2 pi i t_m s_n) h`.
pub fn direct_transform(f: &SampledFunction, sign: f64) -> Vec<Complex64> {
    let grid = f.grid();
    let (from, to) = match f.side() {
        Side::Spatial => (Side::Spatial, Side::Frequency),
        Side::Frequency => (Side::Frequency, Side::Spatial),
    };
    let h = grid.spacing(from);
    (0..grid.size())
        .map(|m| {
            let t = grid.node(to, m);
            f.values()
                .iter()
                .enumerate()
                .map(|(n, v)| v * Complex64::cis(sign * 2.0 * PI * t * grid.node(from, n)))
                .sum::<Complex64>()
                * h
        })
        .collect()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_abs(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn default_grid() -> Grid {
    Grid::new(8.0, 256).unwrap()
}

/// Singular values of `sum_k h_k(x) g_k(xi)` in the weighted `L^2` sense,
/// from the eigenvalues of `(H^* H)(G^T conj(G))` for rank two.
pub fn rank_two_singular_values(h: [&SampledFunction; 2], g: [&SampledFunction; 2]) -> [f64; 2] {
    let gram = |a: &SampledFunction, b: &SampledFunction, conj_first: bool| -> Complex64 {
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| if conj_first { x.conj() * y } else { x * y.conj() })
            .sum::<Complex64>()
            * a.spacing()
    };
    // A = H G^T; A^* A has the same nonzero spectrum as (H^* H)(G^T G^bar).
    let mut hh = [[Complex64::new(0.0, 0.0); 2]; 2];
    let mut gg = [[Complex64::new(0.0, 0.0); 2]; 2];
    for k in 0..2 {
        for l in 0..2 {
            hh[k][l] = gram(h[k], h[l], true);
            gg[k][l] = gram(g[k], g[l], false);
        }
    }
    let mut p = [[Complex64::new(0.0, 0.0); 2]; 2];
    for k in 0..2 {
        for l in 0..2 {
            p[k][l] = hh[k][0] * gg[0][l] + hh[k][1] * gg[1][l];
        }
    }
    let tr = p[0][0] + p[1][1];
    let det = p[0][0] * p[1][1] - p[0][1] * p[1][0];
    let disc = (tr * tr - det * 4.0).sqrt();
    let l1 = ((tr + disc) / 2.0).re.max(0.0).sqrt();
    let l2 = ((tr - disc) / 2.0).re.max(0.0).sqrt();
    if l1 >= l2 {
        [l1, l2]
    } else {
        [l2, l1]
    }
}

/// Seeded decomposition built from wave packets; a fixture, not an oracle.
pub fn random_decomposition(
    grid: &Grid,
    seed: u64,
    rank: usize,
    exponents: fio_nuclear::Exponents,
) -> fio_nuclear::Decomposition {
    let pairs: Vec<_> = (0..rank as u64)
        .map(|k| {
            (
                fio_nuclear::Profile::random_packet(seed.wrapping_mul(1009).wrapping_add(2 * k), 2),
                fio_nuclear::Profile::random_packet(seed.wrapping_mul(1009).wrapping_add(2 * k + 1), 2),
            )
        })
        .collect();
    fio_nuclear::Decomposition::from_profiles(grid, &pairs, exponents).unwrap()
}

/// `sqrt(sum |a_ij - b_ij|^2 dx dxi)` between two node tables.
pub fn weighted_l2(grid: &Grid, a: &[Complex64], b: &[Complex64]) -> f64 {
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    (s * grid.dx() * grid.dxi()).sqrt()
}
