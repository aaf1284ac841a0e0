//! Seeded random instances for tests, benchmarks and the CLI.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ComplexMatrix, C64};

/// Standard complex Gaussian entry (real and imaginary parts `N(0, 1/2)`).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    // Box-Muller
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    let r = (-u1.ln()).sqrt();
    let phi = 2.0 * core::f64::consts::PI * u2;
    C64::new(r * phi.cos(), r * phi.sin())
}

pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    random_matrix(n, n, rng).hermitian_part()
}

/// Haar-ish unitary from Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_matrix(n, n, rng);
    let cols: Vec<ComplexMatrix> = (0..n).map(|j| g.col(j)).collect();
    let q = orthonormalize(&cols, n);
    let mut u = ComplexMatrix::zeros(n, n);
    for (j, v) in q.iter().enumerate() {
        u.set_col(j, v);
    }
    u
}

/// Random density matrix of the requested rank.
pub fn random_density<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_matrix(n, rank.max(1), rng);
    let rho = g.matmul(&g.adjoint());
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr).hermitian_part()
}

/// `count` Kraus operators `m × n` normalized so that `Σ K*K = 1_n`.
/// Needs `count · m >= n`, otherwise `Σ K*K` is singular.
pub fn random_kraus<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    count: usize,
    rng: &mut R,
) -> Vec<ComplexMatrix> {
    let raw: Vec<ComplexMatrix> = (0..count).map(|_| random_matrix(m, n, rng)).collect();
    let mut s = ComplexMatrix::zeros(n, n);
    for k in &raw {
        s += &k.adjoint().matmul(k);
    }
    // S^{-1/2}
    let e = super::hermitian_eig(&s.hermitian_part(), 1e-9).expect("Gram matrix is Hermitian");
    let inv_sqrt = e.apply(|l| C64::new(1.0 / l.sqrt(), 0.0));
    raw.iter().map(|k| k.matmul(&inv_sqrt)).collect()
}

/// Modified Gram-Schmidt (two passes), dropping vectors that are numerically
/// dependent on earlier ones. At most `limit` vectors are returned.
pub fn orthonormalize(vectors: &[ComplexMatrix], limit: usize) -> Vec<ComplexMatrix> {
    let mut basis: Vec<ComplexMatrix> = Vec::new();
    for v in vectors {
        if basis.len() >= limit {
            break;
        }
        let norm0 = v.frobenius_norm();
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let proj: C64 = b
                    .as_slice()
                    .iter()
                    .zip(w.as_slice())
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                w -= &b.scale(proj);
            }
        }
        let norm = w.frobenius_norm();
        if norm > 1e-8 * norm0.max(f64::MIN_POSITIVE) && norm > 0.0 {
            basis.push(w.scale_real(1.0 / norm));
        }
    }
    basis
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix_seeded(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    random_matrix(rows, cols, &mut rng_from_seed(seed))
}

pub fn random_hermitian_seeded(n: usize, seed: u64) -> ComplexMatrix {
    random_hermitian(n, &mut rng_from_seed(seed))
}
