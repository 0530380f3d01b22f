//! Deterministic test densities: Gaussians, balls, shells, Gaussian rings and
//! seeded random mixtures of those.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::RadialGrid;
use crate::math::exp;
use crate::profile::{ball_averages, cell_averages};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorpusOptions {
    pub n: usize,
    pub cells: usize,
    pub r_max: f64,
    pub random: usize,
    pub seed: u64,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        Self { n: 3, cells: 256, r_max: 8.0, random: 100, seed: 20_240_601 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub grid: RadialGrid,
    pub rho: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Gaussian { amp: f64, width: f64 },
    Ball { amp: f64, radius: f64 },
    Shell { amp: f64, inner: f64, outer: f64 },
    Ring { amp: f64, center: f64, width: f64 },
}

impl Piece {
    fn averages(self, grid: &RadialGrid, n: usize) -> Vec<f64> {
        match self {
            Piece::Gaussian { amp, width } => cell_averages(grid, n, |r| amp * exp(-(r / width) * (r / width))),
            Piece::Ball { amp, radius } => ball_averages(grid, n, amp, radius),
            Piece::Shell { amp, inner, outer } => {
                let big = ball_averages(grid, n, amp, outer);
                let small = ball_averages(grid, n, amp, inner);
                big.iter().zip(&small).map(|(a, b)| (a - b).max(0.0)).collect()
            }
            Piece::Ring { amp, center, width } => cell_averages(grid, n, |r| {
                let z = (r - center) / width;
                amp * exp(-z * z)
            }),
        }
    }

    fn label(self) -> String {
        match self {
            Piece::Gaussian { amp, width } => format!("gaussian(a={amp:.3},w={width:.3})"),
            Piece::Ball { amp, radius } => format!("ball(a={amp:.3},R={radius:.3})"),
            Piece::Shell { amp, inner, outer } => format!("shell(a={amp:.3},{inner:.3}<r<{outer:.3})"),
            Piece::Ring { amp, center, width } => format!("ring(a={amp:.3},r0={center:.3},w={width:.3})"),
        }
    }
}

fn entry(grid: &RadialGrid, n: usize, pieces: &[Piece]) -> CorpusEntry {
    let mut rho = alloc::vec![0.0; grid.cells()];
    let mut name = String::new();
    for (k, piece) in pieces.iter().enumerate() {
        for (acc, v) in rho.iter_mut().zip(piece.averages(grid, n)) {
            *acc += v;
        }
        if k > 0 {
            name.push('+');
        }
        name.push_str(&piece.label());
    }
    CorpusEntry { name, grid: *grid, rho }
}

fn random_piece(rng: &mut ChaCha8Rng) -> Piece {
    let amp = rng.random_range(0.1..3.0);
    match rng.random_range(0..4) {
        0 => Piece::Gaussian { amp, width: rng.random_range(0.2..1.5) },
        1 => Piece::Ball { amp, radius: rng.random_range(0.3..4.0) },
        2 => {
            let inner = rng.random_range(0.1..3.0);
            Piece::Shell { amp, inner, outer: inner + rng.random_range(0.2..2.0) }
        }
        _ => Piece::Ring { amp, center: rng.random_range(0.5..4.0), width: rng.random_range(0.15..0.8) },
    }
}

/// The bundled corpus: 12 Gaussians, 12 balls, 10 shells, 10 ring
/// mixtures and `options.random` seeded random mixtures, all supported well
/// inside `r_max` so tails are negligible.
pub fn corpus(options: &CorpusOptions) -> Vec<CorpusEntry> {
    let n = options.n;
    let grid = RadialGrid::new(options.r_max, options.cells).expect("corpus grid");
    let mut out = Vec::new();
    for amp in [0.5, 1.0, 2.0] {
        for width in [0.25, 0.5, 1.0, 1.5] {
            out.push(entry(&grid, n, &[Piece::Gaussian { amp, width }]));
        }
    }
    for amp in [0.5, 1.0, 3.0] {
        for radius in [0.5, 1.0, 2.0, 3.0] {
            out.push(entry(&grid, n, &[Piece::Ball { amp, radius }]));
        }
    }
    for amp in [1.0, 2.0] {
        for (inner, outer) in [(0.25, 0.5), (0.5, 1.0), (1.0, 2.0), (2.0, 3.0), (3.0, 4.0)] {
            out.push(entry(&grid, n, &[Piece::Shell { amp, inner, outer }]));
        }
    }
    for k in 0..10 {
        let c = 0.5 + 0.35 * k as f64;
        out.push(entry(
            &grid,
            n,
            &[
                Piece::Gaussian { amp: 1.0, width: 0.5 },
                Piece::Ring { amp: 0.5 + 0.1 * k as f64, center: c, width: 0.3 },
            ],
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    for _ in 0..options.random {
        let count = rng.random_range(1..=4);
        let pieces: Vec<Piece> = (0..count).map(|_| random_piece(&mut rng)).collect();
        out.push(entry(&grid, n, &pieces));
    }
    out
}
