//! Dense complex linear algebra kernel.

mod eig;
mod expm;
pub mod lu;
mod matrix;
pub mod random;

pub use eig::{hermitian_eig, HermitianEig};
pub use expm::{general_exponential, unitary_exponential};
pub use matrix::ComplexMatrix;

pub type C64 = num_complex::Complex64;

/// Default absolute tolerance for equality, Hermiticity and positivity
/// checks on unit-normalized inputs.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative cutoff below which eigenvalues count as zero in rank decisions.
pub const RANK_TOL: f64 = 1e-12;

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn vec(x: &ComplexMatrix) -> ComplexMatrix {
    x.vec()
}

pub fn unvec(v: &ComplexMatrix, rows: usize, cols: usize) -> crate::Result<ComplexMatrix> {
    ComplexMatrix::unvec(v, rows, cols)
}

/// Sum of singular values, from the eigenvalues of `A*A`.
pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    let gram = a.adjoint().matmul(a);
    // A*A is Hermitian by construction; symmetrize away roundoff
    match hermitian_eig(&gram.hermitian_part(), f64::INFINITY) {
        Ok(e) => e.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum(),
        Err(_) => f64::NAN,
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random::{random_matrix_seeded, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn kron_identities() {
        assert_eq!(
            kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)),
            ComplexMatrix::identity(4)
        );
        let p1 = ComplexMatrix::real_diag(&[0.0, 1.0]);
        let e21 = ComplexMatrix::unit(2, 2, 1, 0);
        let k = kron(&p1, &e21);
        assert_eq!(k, ComplexMatrix::unit(4, 4, 3, 2));
    }

    #[test]
    fn kron_mixed_product() {
        let [a, b, cc, d] = [0, 1, 2, 3].map(|s| random_matrix_seeded(2, 2, s));
        let lhs = kron(&a, &b).matmul(&kron(&cc, &d));
        let rhs = kron(&a.matmul(&cc), &b.matmul(&d));
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn vec_examples() {
        assert_eq!(
            vec(&ComplexMatrix::identity(2)).into_vec(),
            [c(1.0), c(0.0), c(0.0), c(1.0)]
        );
        let x = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(vec(&x).into_vec(), [c(1.0), c(3.0), c(2.0), c(4.0)]);
        let y = random_matrix_seeded(3, 2, 7);
        assert_eq!(unvec(&vec(&y), 3, 2).unwrap(), y);
        assert!(unvec(&vec(&y), 2, 2).is_err());
    }

    #[test]
    fn superoperator_convention() {
        // the matrix of X ↦ A X B is Bᵀ ⊗ A under column stacking
        let a = random_matrix_seeded(3, 2, 1);
        let x = random_matrix_seeded(2, 4, 2);
        let b = random_matrix_seeded(4, 3, 3);
        let direct = vec(&a.matmul(&x).matmul(&b));
        let via = kron(&b.transpose(), &a).matmul(&vec(&x));
        assert!(direct.approx_eq(&via, 1e-12));
    }

    #[test]
    fn trace_norm_examples() {
        let d = ComplexMatrix::real_diag(&[1.0, -2.0]);
        assert!((trace_norm(&d) - 3.0).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = random_unitary(5, &mut rng);
        assert!((trace_norm(&u) - 5.0).abs() < 1e-10);
        for seed in 0..10 {
            let a = random_matrix_seeded(3, 3, seed);
            assert!(a.frobenius_norm() <= trace_norm(&a) + 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_product_state() {
        let a = random_matrix_seeded(2, 2, 11);
        let b = ComplexMatrix::real_diag(&[0.25, 0.75, 0.0]);
        let pt = kron(&a, &b).partial_trace_second(3).unwrap();
        assert!(pt.approx_eq(&a, 1e-14));
    }
}
