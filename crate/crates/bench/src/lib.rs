//! Seeded instance generators shared by the benchmark targets. Everything
//! is deterministic in the seed so runs are comparable across machines.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use saddle_core::corpus::{gen_random_saddle, RandomSaddleSpec};
use saddle_core::{SaddleCase, SaddleProblem, SparseMatrix, SparseVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

pub fn random_sparse(
    rng: &mut ChaCha8Rng,
    nrows: usize,
    ncols: usize,
    density: f64,
) -> SparseMatrix {
    let mut triplets = Vec::new();
    for j in 0..ncols {
        for i in 0..nrows {
            if unit(rng) < density {
                triplets.push((i, j, unit(rng)));
            }
        }
    }
    SparseMatrix::from_triplets(nrows, ncols, &triplets).unwrap()
}

/// Diagonally dominant SPD matrix: `R + R^T + 2*dim*I`.
pub fn random_spd(rng: &mut ChaCha8Rng, dim: usize, density: f64) -> SparseMatrix {
    let r = random_sparse(rng, dim, dim, density);
    let sym = r.add_scaled(1.0, &r.transpose(), 1.0);
    sym.add_scaled(1.0, &SparseMatrix::identity(dim), 2.0 * dim as f64)
}

/// Full column rank n-by-m block: sparse noise plus a unit diagonal.
pub fn random_tall_full_rank(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    density: f64,
) -> SparseMatrix {
    assert!(m <= n);
    let mut triplets = Vec::new();
    for j in 0..m {
        for i in 0..n {
            if unit(rng) < density {
                triplets.push((i, j, unit(rng)));
            }
        }
        triplets.push((j, j, 1.0));
    }
    SparseMatrix::from_triplets(n, m, &triplets).unwrap()
}

pub fn random_skew(rng: &mut ChaCha8Rng, dim: usize, density: f64) -> SparseMatrix {
    let r = random_sparse(rng, dim, dim, density);
    r.add_scaled(1.0, &r.transpose(), -1.0)
}

/// Sparse vector with roughly `nnz` uniformly placed entries.
pub fn random_sparse_vector(rng: &mut ChaCha8Rng, dim: usize, nnz: usize) -> SparseVector {
    let entries: Vec<(usize, f64)> = (0..nnz)
        .map(|_| ((unit(rng) * dim as f64) as usize % dim, unit(rng) - 0.5))
        .collect();
    SparseVector::from_entries(dim, &entries).unwrap()
}

pub fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| unit(rng) - 0.5).collect()
}

/// Instance of the random generation recipe used by the benchmark CLI.
pub fn recipe_problem(n: usize, m: usize, seed: u64) -> SaddleProblem {
    let spec = RandomSaddleSpec {
        n,
        m,
        density: 0.01,
        xi: 0.1,
        seed,
    };
    gen_random_saddle(&spec).expect("recipe generation failed")
}

/// Well-posed random saddle problem of the requested case. The general
/// case scales B's columns so both conjugation bases stay compatible.
pub fn structured_problem(case: SaddleCase, seed: u64, n: usize, m: usize) -> SaddleProblem {
    let mut r = rng(seed);
    let spd = random_spd(&mut r, n, 0.15);
    let b = random_tall_full_rank(&mut r, n, m, 0.2);
    let f = random_vector(&mut r, n);
    let g = random_vector(&mut r, m);
    let (a, c) = match case {
        SaddleCase::Symmetric => (spd, b.clone()),
        SaddleCase::Generalized => (
            spd.add_scaled(1.0, &random_skew(&mut r, n, 0.15), 1.0),
            b.clone(),
        ),
        SaddleCase::General => {
            let a = spd.add_scaled(1.0, &random_skew(&mut r, n, 0.15), 1.0);
            let cols: Vec<_> = (0..m)
                .map(|j| {
                    let mut col = b.col_vector(j);
                    col.scale(0.5 + 1.5 * unit(&mut r));
                    col
                })
                .collect();
            (a, SparseMatrix::from_columns(n, &cols))
        }
    };
    SaddleProblem::new(a, b, c, f, g).expect("structured problem rejected")
}
