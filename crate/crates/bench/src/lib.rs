//! Fixtures shared by the benchmarks in `benches/`.

use fio_nuclear::{Decomposition, Exponents, Grid, PhaseFn, Profile, SampledFunction, Side, Symbol};

pub fn grid(n: usize) -> Grid {
    Grid::new(8.0, n).expect("valid benchmark grid")
}

pub fn input(grid: &Grid) -> SampledFunction {
    Profile::random_packet(1, 3).sample(grid, Side::Spatial).expect("finite samples")
}

/// A rank-`rank` separable symbol of seeded wave packets with zero own phase.
pub fn separable(grid: &Grid, rank: usize) -> Symbol {
    let pairs: Vec<_> = (0..rank as u64)
        .map(|k| (Profile::random_packet(10 + 2 * k, 2), Profile::random_packet(11 + 2 * k, 2)))
        .collect();
    let d = Decomposition::from_profiles(grid, &pairs, Exponents::default()).expect("factors share the grid");
    Symbol::separable(d, PhaseFn::zero()).expect("valid phase")
}
