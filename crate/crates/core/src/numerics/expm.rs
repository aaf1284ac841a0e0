//! Matrix exponentials.
//!
//! `general_exponential` is scaling and squaring with the degree-13 Padé
//! approximant (Higham 2005). `unitary_exponential` goes through the
//! Hermitian eigendecomposition instead, which keeps `e^{iHt}` unitary to
//! working precision for every `t`.

use super::{hermitian_eig, lu, ComplexMatrix, C64};
use crate::{Error, Result};

const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which the unscaled degree-13 approximant is accurate
/// to unit roundoff.
const THETA13: f64 = 5.371_920_351_148_152;

/// `e^m` by scaling and squaring.
pub fn general_exponential(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let norm = m.one_norm();
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a = m.scale_real(2.0_f64.powi(-s));

    let id = ComplexMatrix::identity(n);
    let a2 = a.matmul(&a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);
    let b = &PADE13;

    let lin = |c6: f64, c4: f64, c2: f64| -> ComplexMatrix {
        &(&a6.scale_real(c6) + &a4.scale_real(c4)) + &a2.scale_real(c2)
    };
    let mut u_inner = a6.matmul(&lin(b[13], b[11], b[9]));
    u_inner += &lin(b[7], b[5], b[3]);
    u_inner += &id.scale_real(b[1]);
    let u = a.matmul(&u_inner);

    let mut v = a6.matmul(&lin(b[12], b[10], b[8]));
    v += &lin(b[6], b[4], b[2]);
    v += &id.scale_real(b[0]);

    let mut r = lu::solve(&(&v - &u), &(&v + &u))?;
    for _ in 0..s {
        r = r.matmul(&r);
    }
    Ok(r)
}

/// `e^{iht}` for Hermitian `h`.
pub fn unitary_exponential(h: &ComplexMatrix, t: f64, tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h, tol)?;
    Ok(eig.apply(|l| C64::from_polar(1.0, l * t)))
}
