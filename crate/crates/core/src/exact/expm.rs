//! Matrix exponential by scaling and squaring with diagonal Padé approximants
//! of degree 3, 5, 7, 9 or 13, in the staged form of Higham (2005).
//!
//! No balancing is applied. Inputs here are small upper-triangular
//! subgenerators, for which it buys nothing.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

// Largest 1-norm for which the degree-m approximant is accurate to unit roundoff.
const THETA_3: f64 = 1.495_585_217_958_292e-2;
const THETA_5: f64 = 2.539_398_330_063_230e-1;
const THETA_7: f64 = 9.504_178_996_162_932e-1;
const THETA_9: f64 = 2.097_847_961_257_068e0;
const THETA_13: f64 = 5.371_920_351_148_152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17_297_280.0, 8_648_640.0, 1_995_840.0, 277_200.0, 25_200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
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

/// Maximum absolute column sum.
pub fn one_norm(a: &DMatrix<f64>) -> f64 {
    a.column_iter().map(|c| c.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp(A)` for a square matrix with finite entries.
pub fn matrix_exponential(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (rows, cols) = a.shape();
    if rows != cols || rows == 0 {
        return Err(Error::NonSquare { rows, cols });
    }
    for (idx, v) in a.iter().enumerate() {
        if !v.is_finite() {
            // column-major storage
            return Err(Error::NonFinite { row: idx % rows, col: idx / rows });
        }
    }
    if rows == 1 {
        return Ok(DMatrix::from_element(1, 1, a[(0, 0)].exp()));
    }

    let norm = one_norm(a);
    for (theta, coeffs) in [
        (THETA_3, &B3[..]),
        (THETA_5, &B5[..]),
        (THETA_7, &B7[..]),
        (THETA_9, &B9[..]),
    ] {
        if norm <= theta {
            return Ok(pade_low_order(a, coeffs));
        }
    }

    let squarings = if norm > THETA_13 { (norm / THETA_13).log2().ceil().max(0.0) as i32 } else { 0 };
    let scaled = a * 2f64.powi(-squarings);
    let mut result = pade_13(&scaled);
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// Solves `(V - U) X = (V + U)`.
fn pade_solve(u: DMatrix<f64>, v: DMatrix<f64>) -> DMatrix<f64> {
    let p = &v + &u;
    let q = v - u;
    q.lu().solve(&p).expect("Padé denominator is nonsingular for norms below theta")
}

fn pade_low_order(a: &DMatrix<f64>, b: &[f64]) -> DMatrix<f64> {
    let n = a.nrows();
    let ident = DMatrix::<f64>::identity(n, n);
    let a2 = a * a;
    // Even powers A^0, A^2, A^4, ...
    let mut powers = vec![ident.clone(), a2.clone()];
    while powers.len() * 2 < b.len() {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut u_inner = DMatrix::<f64>::zeros(n, n);
    let mut v = DMatrix::<f64>::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        v += p * b[2 * k];
        if 2 * k + 1 < b.len() {
            u_inner += p * b[2 * k + 1];
        }
    }
    let u = a * u_inner;
    pade_solve(u, v)
}

fn pade_13(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let ident = DMatrix::<f64>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &B13;

    let u_high = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]);
    let u = a * (u_high + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &ident * b[1]);
    let v_high = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]);
    let v = v_high + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &ident * b[0];
    pade_solve(u, v)
}
