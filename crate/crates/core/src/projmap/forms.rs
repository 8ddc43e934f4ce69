use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

/// Binary form as coefficients of `X^{d-i} Y^i`, `i = 0..=d`.
pub type Form = Vec<BigInt>;

pub fn form_mul(a: &[BigInt], b: &[BigInt]) -> Form {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `Σ c_i x^{d-i} y^i` by homogeneous Horner.
pub fn form_eval(c: &[BigInt], x: &BigInt, y: &BigInt) -> BigInt {
    let mut acc = c[0].clone();
    let mut yp = BigInt::from(1);
    for ci in &c[1..] {
        yp *= y;
        acc = acc * x + ci * &yp;
    }
    acc
}

pub fn form_eval_c(c: &[f64], x: Complex64, y: Complex64) -> Complex64 {
    let mut acc = Complex64::new(c[0], 0.0);
    let mut yp = Complex64::new(1.0, 0.0);
    for &ci in &c[1..] {
        yp *= y;
        acc = acc * x + yp * ci;
    }
    acc
}
