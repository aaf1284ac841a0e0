//! GKSL generators `L = −i ad_H − Σ_j Γ_{V_j}` and the semigroups `e^{tL}`.

use alloc::format;
use alloc::vec::Vec;

use crate::channels::Channel;
use crate::numerics::{general_exponential, ComplexMatrix, C64};
use crate::{Error, Result};

/// Hermitian Hamiltonian plus a finite list of jump operators.
#[derive(Clone, Debug, PartialEq)]
pub struct LindbladData {
    h0: ComplexMatrix,
    jumps: Vec<ComplexMatrix>,
}

impl LindbladData {
    pub fn new(h0: ComplexMatrix, jumps: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        if !h0.is_square() {
            return Err(Error::NotSquare {
                rows: h0.rows(),
                cols: h0.cols(),
            });
        }
        if !h0.is_hermitian(tol) {
            return Err(Error::NotHermitian {
                deviation: h0.hermiticity_deviation(),
            });
        }
        let n = h0.rows();
        if let Some(v) = jumps.iter().find(|v| v.dims() != (n, n)) {
            return Err(Error::DimensionMismatch(format!(
                "jump operators must be {n}x{n}, found {}x{}",
                v.rows(),
                v.cols()
            )));
        }
        Ok(Self { h0, jumps })
    }

    pub fn dim(&self) -> usize {
        self.h0.rows()
    }

    pub fn h0(&self) -> &ComplexMatrix {
        &self.h0
    }

    pub fn jumps(&self) -> &[ComplexMatrix] {
        &self.jumps
    }
}

/// Superoperator of a (generally non-CP) linear map on `n × n` matrices,
/// used for generators and derivatives of channel curves.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    dim: usize,
    superop: ComplexMatrix,
}

impl Generator {
    pub fn from_superop(dim: usize, superop: ComplexMatrix) -> Result<Self> {
        if superop.dims() != (dim * dim, dim * dim) {
            return Err(Error::DimensionMismatch(format!(
                "generator on {dim}x{dim} matrices must be {0}x{0}, got {1}x{2}",
                dim * dim,
                superop.rows(),
                superop.cols()
            )));
        }
        Ok(Self { dim, superop })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            superop: ComplexMatrix::zeros(dim * dim, dim * dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn superop(&self) -> &ComplexMatrix {
        &self.superop
    }

    pub fn into_superop(self) -> ComplexMatrix {
        self.superop
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.dims() != (self.dim, self.dim) {
            return Err(Error::DimensionMismatch(format!(
                "generator acts on {0}x{0} matrices, got {1}x{2}",
                self.dim,
                x.rows(),
                x.cols()
            )));
        }
        ComplexMatrix::unvec(&self.superop.matmul(&x.vec()), self.dim, self.dim)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            superop: self.superop.scale(s),
        }
    }

    pub fn add(&self, other: &Generator) -> Self {
        Self {
            dim: self.dim,
            superop: &self.superop + &other.superop,
        }
    }

    pub fn sub(&self, other: &Generator) -> Self {
        Self {
            dim: self.dim,
            superop: &self.superop - &other.superop,
        }
    }

    /// Frobenius distance between superoperators.
    pub fn distance(&self, other: &Generator) -> f64 {
        self.superop.distance(&other.superop)
    }

    /// `max_{j,k} |tr L(|e_j⟩⟨e_k|)|`; zero for generators of trace
    /// preserving semigroups.
    pub fn trace_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev = 0.0_f64;
        for c in 0..n * n {
            let tr: C64 = (0..n).map(|a| self.superop[(a * n + a, c)]).sum();
            dev = dev.max(tr.norm());
        }
        dev
    }

    /// Largest violation of `L(X*) = L(X)*` over the matrix units.
    pub fn hermiticity_preservation_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev = 0.0_f64;
        for k in 0..n {
            for j in 0..n {
                let e = ComplexMatrix::unit(n, n, j, k);
                let lhs = self.apply(&e.adjoint()).expect("dims match");
                let rhs = self.apply(&e).expect("dims match").adjoint();
                dev = dev.max(lhs.distance(&rhs));
            }
        }
        dev
    }

    /// The channel `e^{tL}`; `t` must be non-negative.
    pub fn evolve(&self, t: f64) -> Result<Channel> {
        semigroup_evolve(self, t)
    }
}

/// Superoperator of `X ↦ [H, X]`, i.e. `1 ⊗ H − Hᵀ ⊗ 1`.
pub fn commutator_superop(h: &ComplexMatrix) -> ComplexMatrix {
    let id = ComplexMatrix::identity(h.rows());
    &id.kron(h) - &h.transpose().kron(&id)
}

/// `Γ_V : X ↦ ½(V*V X + X V*V) − V X V*`.
pub fn dissipator(v: &ComplexMatrix) -> Generator {
    let n = v.rows();
    let id = ComplexMatrix::identity(n);
    let vv = v.adjoint().matmul(v);
    let anti = (&id.kron(&vv) + &vv.transpose().kron(&id)).scale_real(0.5);
    Generator {
        dim: n,
        superop: &anti - &v.conj().kron(v),
    }
}

/// `L = −i ad_{H₀} − Σ_j Γ_{V_j}`.
pub fn generator(data: &LindbladData) -> Generator {
    let n = data.dim();
    let mut superop = commutator_superop(&data.h0).scale(C64::new(0.0, -1.0));
    for v in &data.jumps {
        superop -= dissipator(v).superop();
    }
    Generator { dim: n, superop }
}

/// `Φ_t = e^{tL}`.
pub fn semigroup_evolve(gen: &Generator, t: f64) -> Result<Channel> {
    if t.is_nan() || t < 0.0 || !t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "evolution time must be finite and non-negative, got {t}"
        )));
    }
    let superop = general_exponential(&gen.superop.scale_real(t))?;
    Channel::from_superop(gen.dim, gen.dim, superop)
}
