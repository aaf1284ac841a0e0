//! Channel representations and their interconversion.
//!
//! A [`Channel`] always carries its superoperator matrix (the matrix of
//! `vec(X) ↦ vec(Φ(X))`). The Choi matrix, Kraus operators and unitary
//! Stinespring dilations are computed from it, and each route back to a
//! `Channel` goes through the same superoperator.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use crate::numerics::random::{complex_gaussian, orthonormalize, rng_from_seed};
use crate::numerics::{hermitian_eig, lu, ComplexMatrix, C64, RANK_TOL};
use crate::{Error, Result};

/// Seed used to complete Stinespring isometries to unitaries.
pub const COMPLETION_SEED: u64 = 0x5eed_5717;

/// Linear map `ℂ^{n×n} → ℂ^{m×m}` stored as its `m² × n²` superoperator.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    in_dim: usize,
    out_dim: usize,
    superop: ComplexMatrix,
}

/// Outcome of the Choi positivity test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CpReport {
    pub completely_positive: bool,
    pub min_eigenvalue: f64,
}

impl Channel {
    pub fn from_superop(in_dim: usize, out_dim: usize, superop: ComplexMatrix) -> Result<Self> {
        if superop.dims() != (out_dim * out_dim, in_dim * in_dim) {
            return Err(Error::DimensionMismatch(format!(
                "superoperator for {in_dim} -> {out_dim} must be {}x{}, got {}x{}",
                out_dim * out_dim,
                in_dim * in_dim,
                superop.rows(),
                superop.cols()
            )));
        }
        Ok(Self {
            in_dim,
            out_dim,
            superop,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            in_dim: n,
            out_dim: n,
            superop: ComplexMatrix::identity(n * n),
        }
    }

    /// Tabulates a linear map by applying it to the matrix units.
    pub fn from_linear_map(
        in_dim: usize,
        out_dim: usize,
        f: impl Fn(&ComplexMatrix) -> ComplexMatrix,
    ) -> Self {
        let mut superop = ComplexMatrix::zeros(out_dim * out_dim, in_dim * in_dim);
        for k in 0..in_dim {
            for j in 0..in_dim {
                let out = f(&ComplexMatrix::unit(in_dim, in_dim, j, k));
                debug_assert_eq!(out.dims(), (out_dim, out_dim));
                superop.set_col(k * in_dim + j, &out.vec());
            }
        }
        Self {
            in_dim,
            out_dim,
            superop,
        }
    }

    /// `X ↦ U X U*`.
    pub fn unitary_conjugation(u: &ComplexMatrix) -> Self {
        Self {
            in_dim: u.cols(),
            out_dim: u.rows(),
            superop: u.conj().kron(u),
        }
    }

    /// `X ↦ Σ K_i X K_i*`.
    pub fn from_kraus(kraus: &KrausSet) -> Self {
        let (n, m) = (kraus.in_dim, kraus.out_dim);
        let mut superop = ComplexMatrix::zeros(m * m, n * n);
        for k in &kraus.operators {
            superop += &k.conj().kron(k);
        }
        Self {
            in_dim: n,
            out_dim: m,
            superop,
        }
    }

    /// Inverse of [`choi`](Self::choi).
    pub fn from_choi(choi: &ComplexMatrix, in_dim: usize, out_dim: usize) -> Result<Self> {
        let (n, m) = (in_dim, out_dim);
        if choi.dims() != (n * m, n * m) {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix for {n} -> {m} must be {0}x{0}, got {1}x{2}",
                n * m,
                choi.rows(),
                choi.cols()
            )));
        }
        let superop = ComplexMatrix::from_fn(m * m, n * n, |r, c| {
            let (a, b) = (r % m, r / m);
            let (j, k) = (c % n, c / n);
            choi[(j * m + a, k * m + b)]
        });
        Ok(Self {
            in_dim,
            out_dim,
            superop,
        })
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn superop(&self) -> &ComplexMatrix {
        &self.superop
    }

    pub fn into_superop(self) -> ComplexMatrix {
        self.superop
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.dims() != (self.in_dim, self.in_dim) {
            return Err(Error::DimensionMismatch(format!(
                "channel acts on {0}x{0} matrices, got {1}x{2}",
                self.in_dim,
                x.rows(),
                x.cols()
            )));
        }
        ComplexMatrix::unvec(&self.superop.matmul(&x.vec()), self.out_dim, self.out_dim)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Channel) -> Result<Channel> {
        if first.out_dim != self.in_dim {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.in_dim, self.out_dim, first.in_dim, first.out_dim
            )));
        }
        Ok(Channel {
            in_dim: first.in_dim,
            out_dim: self.out_dim,
            superop: self.superop.matmul(&first.superop),
        })
    }

    /// Inverse map, if the superoperator is invertible.
    pub fn inverse(&self) -> Result<Channel> {
        if self.in_dim != self.out_dim {
            return Err(Error::NotSquare {
                rows: self.superop.rows(),
                cols: self.superop.cols(),
            });
        }
        Ok(Channel {
            in_dim: self.in_dim,
            out_dim: self.out_dim,
            superop: lu::inverse(&self.superop)?,
        })
    }

    pub fn determinant(&self) -> Result<C64> {
        lu::determinant(&self.superop)
    }

    /// `C(Φ) = Σ_{j,k} |e_j⟩⟨e_k| ⊗ Φ(|e_j⟩⟨e_k|)`.
    pub fn choi(&self) -> ComplexMatrix {
        let (n, m) = (self.in_dim, self.out_dim);
        ComplexMatrix::from_fn(n * m, n * m, |r, c| {
            let (j, a) = (r / m, r % m);
            let (k, b) = (c / m, c % m);
            self.superop[(b * m + a, k * n + j)]
        })
    }

    pub fn is_completely_positive(&self, tol: f64) -> CpReport {
        let choi = self.choi();
        let min_eigenvalue = match hermitian_eig(&choi, tol) {
            Ok(e) => e.min_eigenvalue(),
            Err(_) => f64::NEG_INFINITY,
        };
        CpReport {
            completely_positive: min_eigenvalue >= -tol,
            min_eigenvalue,
        }
    }

    /// `max_{j,k} |tr Φ(|e_j⟩⟨e_k|) − δ_jk|`.
    pub fn trace_preservation_deviation(&self) -> f64 {
        let (n, m) = (self.in_dim, self.out_dim);
        let mut dev = 0.0_f64;
        for k in 0..n {
            for j in 0..n {
                let tr: C64 = (0..m).map(|a| self.superop[(a * m + a, k * n + j)]).sum();
                let target = if j == k { 1.0 } else { 0.0 };
                dev = dev.max((tr - target).norm());
            }
        }
        dev
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        self.trace_preservation_deviation() <= tol
    }

    /// Frobenius distance between superoperators; equals the Frobenius
    /// distance between Choi matrices.
    pub fn distance(&self, other: &Channel) -> f64 {
        self.superop.distance(&other.superop)
    }
}

/// Kraus operators `K_i : ℂ^n → ℂ^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    in_dim: usize,
    out_dim: usize,
    operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty Kraus set".into()))?;
        let (m, n) = first.dims();
        if let Some(bad) = operators.iter().find(|k| k.dims() != (m, n)) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operators must all be {m}x{n}, found {}x{}",
                bad.rows(),
                bad.cols()
            )));
        }
        Ok(Self {
            in_dim: n,
            out_dim: m,
            operators,
        })
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn into_operators(self) -> Vec<ComplexMatrix> {
        self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// `‖Σ K_i* K_i − 1_n‖_F`.
    pub fn trace_preservation_deviation(&self) -> f64 {
        let mut s = ComplexMatrix::zeros(self.in_dim, self.in_dim);
        for k in &self.operators {
            s += &k.adjoint().matmul(k);
        }
        s.distance(&ComplexMatrix::identity(self.in_dim))
    }

    pub fn channel(&self) -> Channel {
        Channel::from_kraus(self)
    }
}

/// `Φ = tr_{ℂ^{dℓ/m}}(U (· ⊗ |e_1⟩⟨e_1|) U*)` with `d = lcm(m, n)`.
///
/// Index layout of `ℂ^{dℓ}`: on the input side `ℂ^n ⊗ ℂ^{dℓ/n}`, on the
/// output side `ℂ^m ⊗ ℂ^{dℓ/m}`, both row-major. The fixed ancilla state is
/// the first basis vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StinespringDilation {
    in_dim: usize,
    out_dim: usize,
    d: usize,
    ell: usize,
    unitary: ComplexMatrix,
}

impl StinespringDilation {
    /// Index of the pure ancilla state `e_1`.
    pub const ANCILLA_MARKER: usize = 0;

    pub fn new(in_dim: usize, out_dim: usize, unitary: ComplexMatrix, tol: f64) -> Result<Self> {
        let d = lcm(in_dim, out_dim);
        if !unitary.is_square() || !unitary.rows().is_multiple_of(d) {
            return Err(Error::DimensionMismatch(format!(
                "dilation unitary must be square with size a multiple of lcm({in_dim}, {out_dim}) = {d}, got {}x{}",
                unitary.rows(),
                unitary.cols()
            )));
        }
        let deviation = unitary.unitarity_deviation();
        if deviation > tol * (unitary.rows() as f64).sqrt().max(1.0) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self {
            in_dim,
            out_dim,
            d,
            ell: unitary.rows() / d,
            unitary,
        })
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    /// Kraus operators read off the first block column of `U`;
    /// `(d/m)·ℓ` of them, some possibly zero.
    pub fn kraus(&self) -> KrausSet {
        let (n, m) = (self.in_dim, self.out_dim);
        let size = self.unitary.rows();
        let (in_pad, out_pad) = (size / n, size / m);
        let operators = (0..out_pad)
            .map(|r| {
                ComplexMatrix::from_fn(m, n, |y, x| self.unitary[(y * out_pad + r, x * in_pad)])
            })
            .collect();
        KrausSet {
            in_dim: n,
            out_dim: m,
            operators,
        }
    }

    /// Evaluates the dilation formula directly.
    pub fn channel(&self) -> Channel {
        let (n, m) = (self.in_dim, self.out_dim);
        let size = self.unitary.rows();
        let anc = ComplexMatrix::unit(
            size / n,
            size / n,
            Self::ANCILLA_MARKER,
            Self::ANCILLA_MARKER,
        );
        let u_adj = self.unitary.adjoint();
        Channel::from_linear_map(n, m, |x| {
            let rho = self.unitary.matmul(&x.kron(&anc)).matmul(&u_adj);
            rho.partial_trace_second(size / m)
                .expect("dimensions factor by construction")
        })
    }
}

/// Isometric dilation `V x = Σ_i K_i x ⊗ e_i` with `Φ = tr_ℓ(V · V*)`; valid
/// for any completely positive map.
#[derive(Clone, Debug, PartialEq)]
pub struct IsometricDilation {
    pub in_dim: usize,
    pub out_dim: usize,
    pub ell: usize,
    /// `mℓ × n`.
    pub isometry: ComplexMatrix,
}

impl IsometricDilation {
    pub fn channel(&self) -> Channel {
        let v_adj = self.isometry.adjoint();
        Channel::from_linear_map(self.in_dim, self.out_dim, |x| {
            self.isometry
                .matmul(x)
                .matmul(&v_adj)
                .partial_trace_second(self.ell)
                .expect("dimensions factor by construction")
        })
    }

    pub fn kraus(&self) -> KrausSet {
        let (n, m, l) = (self.in_dim, self.out_dim, self.ell);
        let operators = (0..l)
            .map(|i| ComplexMatrix::from_fn(m, n, |j, x| self.isometry[(j * l + i, x)]))
            .collect();
        KrausSet {
            in_dim: n,
            out_dim: m,
            operators,
        }
    }
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub fn choi_of(phi: &Channel) -> ComplexMatrix {
    phi.choi()
}

pub fn is_completely_positive(phi: &Channel, tol: f64) -> CpReport {
    phi.is_completely_positive(tol)
}

/// Kraus operators from the spectral decomposition of a PSD Choi matrix.
///
/// Eigenvalues at or below `RANK_TOL · λ_max` are dropped; a negative
/// eigenvalue below `-tol` is an error.
pub fn kraus_from_choi(
    choi: &ComplexMatrix,
    in_dim: usize,
    out_dim: usize,
    tol: f64,
) -> Result<KrausSet> {
    let (n, m) = (in_dim, out_dim);
    if choi.dims() != (n * m, n * m) {
        return Err(Error::DimensionMismatch(format!(
            "Choi matrix for {n} -> {m} must be {0}x{0}, got {1}x{2}",
            n * m,
            choi.rows(),
            choi.cols()
        )));
    }
    let eig = hermitian_eig(choi, tol)?;
    let min_eigenvalue = eig.min_eigenvalue();
    if min_eigenvalue < -tol * eig.max_eigenvalue().abs().max(1.0) {
        return Err(Error::NotCompletelyPositive { min_eigenvalue });
    }
    let cutoff = RANK_TOL * eig.max_eigenvalue().max(0.0);
    let mut operators: Vec<ComplexMatrix> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .rev()
        .filter(|&(_, &l)| l > cutoff)
        .map(|(k, &l)| {
            let psi = eig.eigenvector(k).scale_real(l.sqrt());
            ComplexMatrix::unvec(&psi, m, n).expect("length n·m")
        })
        .collect();
    if operators.is_empty() {
        // zero map
        operators.push(ComplexMatrix::zeros(m, n));
    }
    Ok(KrausSet {
        in_dim: n,
        out_dim: m,
        operators,
    })
}

/// Isometry `V x = Σ_i K_i x ⊗ e_i`.
pub fn isometry_from_kraus(kraus: &KrausSet) -> IsometricDilation {
    let (n, m, l) = (kraus.in_dim, kraus.out_dim, kraus.len());
    let isometry = ComplexMatrix::from_fn(m * l, n, |r, x| kraus.operators[r % l][(r / l, x)]);
    IsometricDilation {
        in_dim: n,
        out_dim: m,
        ell: l,
        isometry,
    }
}

/// Unitary Stinespring dilation of a trace-preserving Kraus set, completed
/// with the default seed.
pub fn stinespring_from_kraus(kraus: &KrausSet, tol: f64) -> Result<StinespringDilation> {
    stinespring_from_kraus_seeded(kraus, tol, COMPLETION_SEED)
}

/// Collects the Kraus operators in the first block column of a
/// `dℓ × dℓ` matrix (`d = lcm(m, n)`, `ℓ = ℓ'·d/n`) and fills the remaining
/// columns with an orthonormal completion of seeded random vectors.
///
/// The tensor layout of `ℂ^{dℓ}` is `ℂ^n ⊗ ℂ^{d/n} ⊗ ℂ^{ℓ'} ⊗ ℂ^{d/n}` on the
/// input side and `ℂ^m ⊗ ℂ^{d/m} ⊗ ℂ^{ℓ'} ⊗ ℂ^{d/n}` on the output side; the
/// isometric part is `Σ_{i,j} K_i ⊗ |e_1⟩⟨e_j| ⊗ |e_i⟩⟨e_1| ⊗ |e_j⟩⟨e_1|`.
pub fn stinespring_from_kraus_seeded(
    kraus: &KrausSet,
    tol: f64,
    seed: u64,
) -> Result<StinespringDilation> {
    let deviation = kraus.trace_preservation_deviation();
    if deviation > tol * (kraus.in_dim as f64).sqrt().max(1.0) {
        return Err(Error::NotTracePreserving { deviation });
    }
    let (n, m, lp) = (kraus.in_dim, kraus.out_dim, kraus.len());
    let d = lcm(m, n);
    let (dn, dm) = (d / n, d / m);
    let ell = lp * dn;
    let size = d * ell;

    let row_index = |y: usize, p: usize, i: usize, q: usize| ((y * dm + p) * lp + i) * dn + q;
    let col_index = |x: usize, j: usize, ip: usize, jp: usize| ((x * dn + j) * lp + ip) * dn + jp;

    let mut unitary = ComplexMatrix::zeros(size, size);
    let mut isometric_cols = Vec::with_capacity(d);
    for x in 0..n {
        for j in 0..dn {
            let c = col_index(x, j, 0, 0);
            isometric_cols.push(c);
            for (i, k) in kraus.operators.iter().enumerate() {
                for y in 0..m {
                    unitary[(row_index(y, 0, i, j), c)] = k[(y, x)];
                }
            }
        }
    }

    let prescribed: Vec<ComplexMatrix> = isometric_cols.iter().map(|&c| unitary.col(c)).collect();
    let mut rng = rng_from_seed(seed);
    let mut extra: Vec<ComplexMatrix> = Vec::new();
    while d + extra.len() < size {
        let mut candidates: Vec<ComplexMatrix> = prescribed.iter().chain(&extra).cloned().collect();
        for _ in d + extra.len()..size {
            candidates.push(random_vector(size, &mut rng));
        }
        // the prescribed columns are already orthonormal, so the first d
        // basis vectors reproduce them and everything after is new
        extra = orthonormalize(&candidates, size)
            .into_iter()
            .skip(d)
            .collect();
    }
    let free = (0..size).filter(|c| !isometric_cols.contains(c));
    for (c, v) in free.zip(&extra) {
        unitary.set_col(c, v);
    }

    let deviation = unitary.unitarity_deviation();
    if deviation > tol * (size as f64).sqrt().max(1.0) {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(StinespringDilation {
        in_dim: n,
        out_dim: m,
        d,
        ell,
        unitary,
    })
}

/// Kraus operators of a unitary dilation; checks unitarity first.
pub fn kraus_from_stinespring(dilation: &StinespringDilation, tol: f64) -> Result<KrausSet> {
    let deviation = dilation.unitary.unitarity_deviation();
    if deviation > tol * (dilation.unitary.rows() as f64).sqrt().max(1.0) {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(dilation.kraus())
}

fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, 1, |_, _| complex_gaussian(rng))
}
