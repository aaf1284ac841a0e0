//! Type-I Stinespring curves `t ↦ tr_K(e^{iHt}(· ⊗ ω)e^{−iHt})` with a
//! finite-dimensional ancilla `K = ℂ^m`.
//!
//! Derivatives at `t = 0` are computed exactly: the `q`-th derivative is
//! `X ↦ tr_K((i ad_H)^q (X ⊗ ω))`. From the second derivative one reads off
//! jump operators `V_{jk} = √(2 r_k) tr_{|g_k⟩⟨g_j|}(H)` with
//! `D₂ = −Σ Γ_{V_{jk}}`; conversely [`build_curve_from_lindblad`] builds a
//! curve whose first two derivatives are a prescribed GKSL generator.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use crate::channels::{kraus_from_choi, Channel};
use crate::gksl::{commutator_superop, dissipator, Generator, LindbladData};
use crate::numerics::random::{random_density, random_hermitian};
use crate::numerics::{
    hermitian_eig, unitary_exponential, ComplexMatrix, C64, DEFAULT_TOL, RANK_TOL,
};
use crate::{Error, Result};

/// Ancilla state with its spectral data.
#[derive(Clone, Debug, PartialEq)]
pub struct AncillaState {
    omega: ComplexMatrix,
    /// Positive eigenvalues `r_k`, descending.
    weights: Vec<f64>,
    /// Orthonormal basis of `ℂ^m` as columns; the first `weights.len()`
    /// columns are the `g_k`, the rest complete the basis.
    basis: ComplexMatrix,
}

impl AncillaState {
    /// Validates that `omega` is a density matrix and diagonalizes it.
    /// Eigenvalues at or below `RANK_TOL · λ_max` are treated as zero.
    pub fn new(omega: ComplexMatrix, tol: f64) -> Result<Self> {
        let eig = hermitian_eig(&omega, tol)?;
        let min_eigenvalue = eig.min_eigenvalue();
        if min_eigenvalue < -tol {
            return Err(Error::InvalidArgument(format!(
                "ancilla state is not positive semidefinite (minimum eigenvalue {min_eigenvalue:e})"
            )));
        }
        let tr = omega.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::InvalidArgument(format!(
                "ancilla state must have unit trace, got {tr}"
            )));
        }
        let m = omega.rows();
        let cutoff = RANK_TOL * eig.max_eigenvalue();
        let order: Vec<usize> = (0..m).rev().collect();
        let weights: Vec<f64> = order
            .iter()
            .map(|&k| eig.eigenvalues[k])
            .take_while(|&l| l > cutoff)
            .collect();
        let basis = ComplexMatrix::from_fn(m, m, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok(Self {
            omega,
            weights,
            basis,
        })
    }

    /// `|e_i⟩⟨e_i|` on `ℂ^m`, with the standard basis as completion.
    pub fn pure(m: usize, i: usize) -> Self {
        let mut basis = ComplexMatrix::identity(m);
        if i != 0 {
            // put e_i first
            let e0 = basis.col(0);
            let ei = basis.col(i);
            basis.set_col(0, &ei);
            basis.set_col(i, &e0);
        }
        Self {
            omega: ComplexMatrix::unit(m, m, i, i),
            weights: alloc::vec![1.0],
            basis,
        }
    }

    pub fn omega(&self) -> &ComplexMatrix {
        &self.omega
    }

    pub fn dim(&self) -> usize {
        self.omega.rows()
    }

    /// `rk(ω)`.
    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Completed orthonormal basis `{g_j}` as columns.
    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn basis_vector(&self, j: usize) -> ComplexMatrix {
        self.basis.col(j)
    }
}

/// `(n, H, ω)` with `H` Hermitian on `ℂ^n ⊗ ℂ^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct StinespringCurve {
    n: usize,
    h: ComplexMatrix,
    ancilla: AncillaState,
}

/// Jump operators read off the second derivative of a curve.
#[derive(Clone, Debug)]
pub struct JumpOperators {
    /// `V_{jk}` for `j` over the completed ancilla basis and `k` over the
    /// support of `ω`, ordered with `k` fastest.
    pub full: Vec<ComplexMatrix>,
    /// Kraus operators of `Ψ = 2 tr_K(H(· ⊗ ω)H)`; at most `n²` of them.
    pub reduced: Vec<ComplexMatrix>,
}

impl StinespringCurve {
    pub fn new(n: usize, h: ComplexMatrix, ancilla: AncillaState, tol: f64) -> Result<Self> {
        let m = ancilla.dim();
        if h.dims() != (n * m, n * m) {
            return Err(Error::DimensionMismatch(format!(
                "total Hamiltonian for n={n}, m={m} must be {0}x{0}, got {1}x{2}",
                n * m,
                h.rows(),
                h.cols()
            )));
        }
        if !h.is_hermitian(tol) {
            return Err(Error::NotHermitian {
                deviation: h.hermiticity_deviation(),
            });
        }
        Ok(Self { n, h, ancilla })
    }

    /// Random curve with `‖H‖_F = 1` and an ancilla state of the given rank.
    pub fn random<R: Rng + ?Sized>(n: usize, m: usize, rank: usize, rng: &mut R) -> Self {
        let h = random_hermitian(n * m, rng);
        let h = h.scale_real(1.0 / h.frobenius_norm());
        let omega = random_density(m, rank.clamp(1, m), rng);
        let ancilla = AncillaState::new(omega, DEFAULT_TOL).expect("random density is a state");
        Self { n, h, ancilla }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.ancilla.dim()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.h
    }

    pub fn ancilla(&self) -> &AncillaState {
        &self.ancilla
    }

    /// `Φ_t`, assembled from the Kraus operators
    /// `√r_k (1 ⊗ ⟨e_j|) e^{iHt} (1 ⊗ |g_k⟩)`.
    pub fn evaluate(&self, t: f64) -> Result<Channel> {
        let (n, m) = (self.n, self.m());
        let u = unitary_exponential(&self.h, t, DEFAULT_TOL)?;
        let mut superop = ComplexMatrix::zeros(n * n, n * n);
        for (k, &r) in self.ancilla.weights.iter().enumerate() {
            let g = self.ancilla.basis_vector(k);
            let sr = r.sqrt();
            for j in 0..m {
                let kraus = ComplexMatrix::from_fn(n, n, |a, b| {
                    (0..m)
                        .map(|c| u[(a * m + j, b * m + c)] * g[(c, 0)])
                        .sum::<C64>()
                        * sr
                });
                superop += &kraus.conj().kron(&kraus);
            }
        }
        Channel::from_superop(n, n, superop)
    }

    /// Exact `q`-th derivative at zero, `X ↦ tr_K((i ad_H)^q (X ⊗ ω))`.
    pub fn derivative_at_zero(&self, order: usize) -> Result<Generator> {
        if order == 0 {
            return Err(Error::InvalidArgument(
                "derivative order must be at least 1".into(),
            ));
        }
        let (n, m) = (self.n, self.m());
        let i = C64::new(0.0, 1.0);
        let superop = tabulate(n, |x| {
            let mut y = x.kron(&self.ancilla.omega);
            for _ in 0..order {
                y = self.h.commutator(&y).scale(i);
            }
            y.partial_trace_second(m).expect("dimensions factor")
        });
        Generator::from_superop(n, superop)
    }

    /// `tr_ω(H)`, the effective Hamiltonian behind the first derivative.
    pub fn effective_hamiltonian(&self) -> ComplexMatrix {
        operator_partial_trace(&self.h, &self.ancilla.omega).expect("dimensions factor")
    }

    /// `Ψ(A) = 2 tr_K(H (A ⊗ ω) H)`, the completely positive part of the
    /// second derivative.
    pub fn second_derivative_cp_part(&self) -> Channel {
        let m = self.m();
        Channel::from_linear_map(self.n, self.n, |a| {
            self.h
                .matmul(&a.kron(&self.ancilla.omega))
                .matmul(&self.h)
                .partial_trace_second(m)
                .expect("dimensions factor")
                .scale_real(2.0)
        })
    }

    /// `−tr_ω(H²)(·) − (·)tr_ω(H²) + Ψ`.
    pub fn second_derivative_closed_form(&self) -> Generator {
        let n = self.n;
        let h2 = operator_partial_trace(&self.h.matmul(&self.h), &self.ancilla.omega)
            .expect("dimensions factor");
        let id = ComplexMatrix::identity(n);
        let anti = &id.kron(&h2) + &h2.transpose().kron(&id);
        let superop = self.second_derivative_cp_part().superop() - &anti;
        Generator::from_superop(n, superop).expect("n² × n²")
    }

    /// Jump operators `V_{jk} = √(2 r_k) tr_{|g_k⟩⟨g_j|}(H)` over the
    /// completed basis, plus a reduced set of at most `n²` operators from the
    /// Kraus decomposition of `Ψ`. Both reproduce `D₂ = −Σ Γ_V`.
    pub fn extract_jump_operators(&self) -> Result<JumpOperators> {
        let m = self.m();
        let mut full = Vec::with_capacity(m * self.ancilla.rank());
        for j in 0..m {
            let gj = self.ancilla.basis_vector(j);
            for (k, &r) in self.ancilla.weights.iter().enumerate() {
                let gk = self.ancilla.basis_vector(k);
                let a = ComplexMatrix::outer(&gk, &gj);
                full.push(operator_partial_trace(&self.h, &a)?.scale_real((2.0 * r).sqrt()));
            }
        }
        let psi = self.second_derivative_cp_part();
        let scale = psi.superop().max_abs().max(1.0);
        let reduced =
            kraus_from_choi(&psi.choi(), self.n, self.n, DEFAULT_TOL * scale)?.into_operators();
        Ok(JumpOperators { full, reduced })
    }

    /// `‖Φ_t − (id + t D₁ + t²/2 D₂)‖_F` on superoperators.
    pub fn taylor_deviation(&self, t: f64) -> Result<f64> {
        let d1 = self.derivative_at_zero(1)?;
        let d2 = self.derivative_at_zero(2)?;
        taylor_remainder(&self.evaluate(t)?, &d1, &d2, t)
    }
}

/// `‖Φ − (id + t D₁ + t²/2 D₂)‖_F`.
pub fn taylor_remainder(phi: &Channel, d1: &Generator, d2: &Generator, t: f64) -> Result<f64> {
    let n = phi.in_dim();
    if d1.dim() != n || d2.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "derivatives act on {}x{} and {}x{} matrices, channel on {n}x{n}",
            d1.dim(),
            d1.dim(),
            d2.dim(),
            d2.dim()
        )));
    }
    let mut approx = ComplexMatrix::identity(n * n);
    approx += &d1.superop().scale_real(t);
    approx += &d2.superop().scale_real(0.5 * t * t);
    Ok(phi.superop().distance(&approx))
}

/// Sum of dissipators, `−Σ_V Γ_V`, as a generator on `n × n` matrices.
pub fn negative_dissipator_sum(n: usize, jumps: &[ComplexMatrix]) -> Generator {
    let mut acc = Generator::zero(n);
    for v in jumps {
        acc = acc.sub(&dissipator(v));
    }
    acc
}

/// `tr_A(B)`: the `n × n` matrix with `tr(tr_A(B) X) = tr(B (X ⊗ A))` for all
/// `X`. Entry `(j, k)` is `tr(A · B_{jk})` where `B_{jk}` is the `(j, k)`
/// ancilla block of `B`.
pub fn operator_partial_trace(b: &ComplexMatrix, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let m = a.rows();
    if !a.is_square() || !b.is_square() || m == 0 || !b.rows().is_multiple_of(m) {
        return Err(Error::DimensionMismatch(format!(
            "cannot take the partial trace of a {}x{} matrix against a {}x{} operator",
            b.rows(),
            b.cols(),
            a.rows(),
            a.cols()
        )));
    }
    let n = b.rows() / m;
    Ok(ComplexMatrix::from_fn(n, n, |j, k| {
        let mut s = C64::new(0.0, 0.0);
        for c in 0..m {
            for cp in 0..m {
                s += a[(cp, c)] * b[(j * m + c, k * m + cp)];
            }
        }
        s
    }))
}

/// Curve with ancilla `ℂ^{|J|+1}` in state `|e_1⟩⟨e_1|` and
/// `H = (1/√2) Σ_j (V_j ⊗ |e_{j+1}⟩⟨e_1| + V_j* ⊗ |e_1⟩⟨e_{j+1}|) − H₀ ⊗ |e_1⟩⟨e_1|`,
/// so that `D₁ = −i ad_{H₀}` and `D₂ = −Σ_j Γ_{V_j}`.
pub fn build_curve_from_lindblad(data: &LindbladData) -> StinespringCurve {
    let n = data.dim();
    let m = data.jumps().len() + 1;
    let inv_sqrt2 = core::f64::consts::FRAC_1_SQRT_2;
    let mut h = data
        .h0()
        .kron(&ComplexMatrix::unit(m, m, 0, 0))
        .scale_real(-1.0);
    for (j, v) in data.jumps().iter().enumerate() {
        h += &v
            .kron(&ComplexMatrix::unit(m, m, j + 1, 0))
            .scale_real(inv_sqrt2);
        h += &v
            .adjoint()
            .kron(&ComplexMatrix::unit(m, m, 0, j + 1))
            .scale_real(inv_sqrt2);
    }
    StinespringCurve {
        n,
        h,
        ancilla: AncillaState::pure(m, 0),
    }
}

/// `X ↦ i[K, X]` for Hermitian `K`.
pub fn hamiltonian_derivative(k: &ComplexMatrix) -> Generator {
    let n = k.rows();
    Generator::from_superop(n, commutator_superop(k).scale(C64::new(0.0, 1.0))).expect("n² × n²")
}

fn tabulate(n: usize, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> ComplexMatrix {
    let mut superop = ComplexMatrix::zeros(n * n, n * n);
    for k in 0..n {
        for j in 0..n {
            superop.set_col(k * n + j, &f(&ComplexMatrix::unit(n, n, j, k)).vec());
        }
    }
    superop
}
