//! Seeded random saddle problems.
//!
//! Blocks are `xi`-scaled identity perturbations plus sparse random mass:
//! `A = xi*I + R(n,n)`, `B = xi*[I; 0] + R(n,m)`, and
//! `C^T = xi*[I 0] + R(m,n)`. Every entry of a random block is included
//! independently with probability `density` and drawn uniformly from
//! (0, 1). The right-hand side makes the all-ones vector an exact
//! solution.

use crate::scheme::{SaddleProblem, SchemeError};
use crate::sparse::SparseMatrix;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Recipe for one random saddle problem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomSaddleSpec {
    pub n: usize,
    pub m: usize,
    pub density: f64,
    pub xi: f64,
    pub seed: u64,
}

impl RandomSaddleSpec {
    pub fn validate(&self) -> Result<(), SchemeError> {
        if self.m > self.n {
            return Err(SchemeError::Shape(format!(
                "random spec needs m <= n, got n = {}, m = {}",
                self.n, self.m
            )));
        }
        if !(self.density >= 0.0 && self.density <= 1.0) {
            return Err(SchemeError::Shape(format!(
                "density must lie in [0, 1], got {}",
                self.density
            )));
        }
        Ok(())
    }
}

/// Uniform draw on [0, 1) from the top 53 bits, so the stream depends only
/// on the generator's `next_u64` sequence.
fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// One random block: independent per-entry inclusion, column-major draw
/// order, values uniform on (0, 1).
fn random_block(
    rng: &mut ChaCha8Rng,
    nrows: usize,
    ncols: usize,
    density: f64,
) -> Vec<(usize, usize, f64)> {
    let mut triplets = Vec::new();
    for j in 0..ncols {
        for i in 0..nrows {
            if unit_f64(rng) < density {
                triplets.push((i, j, unit_f64(rng)));
            }
        }
    }
    triplets
}

/// Builds the right-hand side for which the all-ones vector solves the
/// block system: `f = A*1 + B*1`, `g = -C^T*1`.
pub fn make_rhs(a: &SparseMatrix, b: &SparseMatrix, c: &SparseMatrix) -> (Vec<f64>, Vec<f64>) {
    let ones_n = vec![1.0; a.ncols()];
    let ones_m = vec![1.0; b.ncols()];
    let mut f = a.matvec(&ones_n);
    for (fi, bi) in f.iter_mut().zip(b.matvec(&ones_m)) {
        *fi += bi;
    }
    let g = c.matvec_transpose(&ones_n).iter().map(|v| -v).collect();
    (f, g)
}

/// Generates the blocks, the consistent right-hand side, and the case
/// label for one spec. Identical specs produce bit-identical problems:
/// the generator is seeded from `spec.seed` and consumed in a fixed order
/// (A's block, then B's, then C-transpose's).
pub fn gen_random_saddle(spec: &RandomSaddleSpec) -> Result<SaddleProblem, SchemeError> {
    spec.validate()?;
    let (n, m, xi) = (spec.n, spec.m, spec.xi);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut a_t = random_block(&mut rng, n, n, spec.density);
    for i in 0..n {
        a_t.push((i, i, xi));
    }
    let a = SparseMatrix::from_triplets(n, n, &a_t).expect("indices in range by construction");

    let mut b_t = random_block(&mut rng, n, m, spec.density);
    for i in 0..m {
        b_t.push((i, i, xi));
    }
    let b = SparseMatrix::from_triplets(n, m, &b_t).expect("indices in range by construction");

    // C^T is drawn as its own m-by-n block, then stored transposed.
    let mut ct_t = random_block(&mut rng, m, n, spec.density);
    for i in 0..m {
        ct_t.push((i, i, xi));
    }
    let c_triplets: Vec<(usize, usize, f64)> =
        ct_t.into_iter().map(|(i, j, v)| (j, i, v)).collect();
    let c =
        SparseMatrix::from_triplets(n, m, &c_triplets).expect("indices in range by construction");

    let (f, g) = make_rhs(&a, &b, &c);
    SaddleProblem::new(a, b, c, f, g)
}
