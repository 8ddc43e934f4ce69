//! Exact integer constants read off the Sylvester matrix and the Bezoutian.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::projmap::{bareiss_determinant, sylvester_matrix};

/// Row `k` of the adjugate of the Sylvester matrix, split into the coefficients of
/// `A_k` and `B_k` (degree `d−1` forms) with `A_k F₀ + B_k F₁ = Res · X^{2d−1−k} Y^k`.
pub fn adjugate_row(f0: &[BigInt], f1: &[BigInt], k: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    let s = sylvester_matrix(f0, f1);
    let n = s.len();
    let d = n / 2;
    let row: Vec<BigInt> = (0..n)
        .map(|j| {
            // adj[k][j] = (−1)^{j+k} det(S without row j and column k)
            let minor: Vec<Vec<BigInt>> = s
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != j)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != k)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let m = bareiss_determinant(minor);
            if (j + k) % 2 == 0 {
                m
            } else {
                -m
            }
        })
        .collect();
    (row[..d].to_vec(), row[d..].to_vec())
}

fn abs_sum(c: &[BigInt]) -> BigInt {
    c.iter().map(|x| x.abs()).sum()
}

/// `K = max_{k ∈ {0, 2d−1}} (Σ|A_k| + Σ|B_k|)`, so that `‖F(X)‖ ≥ |Res|/K · ‖X‖^d`.
pub fn adjugate_constant(f0: &[BigInt], f1: &[BigInt]) -> BigInt {
    let n = 2 * (f0.len() - 1);
    [0, n - 1]
        .iter()
        .map(|&k| {
            let (a, b) = adjugate_row(f0, f1, k);
            abs_sum(&a) + abs_sum(&b)
        })
        .max()
        .unwrap()
}

/// Coefficients `Q[a][b]` of `X₀^{d−1−a}X₁^a Y₀^{d−1−b}Y₁^b` in
/// `(F₀(X)F₁(Y) − F₁(X)F₀(Y)) / (X₀Y₁ − X₁Y₀)`.
pub fn bezoutian(f0: &[BigInt], f1: &[BigInt]) -> Vec<Vec<BigInt>> {
    let d = f0.len() - 1;
    let p = |a: usize, b: usize| &f0[a] * &f1[b] - &f1[a] * &f0[b];
    let mut q = vec![vec![BigInt::zero(); d]; d];
    for a in 0..d {
        for b in 1..=d {
            let prev = if a >= 1 && b < d {
                q[a - 1][b].clone()
            } else {
                BigInt::zero()
            };
            q[a][b - 1] = p(a, b) + prev;
        }
    }
    q
}

/// `Σ |Q[a][b]|`, so that `|Q(X,Y)| ≤ Bz · ‖X‖^{d−1}‖Y‖^{d−1}`.
pub fn bezoutian_constant(f0: &[BigInt], f1: &[BigInt]) -> BigInt {
    bezoutian(f0, f1).iter().flatten().map(|x| x.abs()).sum()
}

/// `max_i Σ_j |a_ij|`, so that `‖F(X)‖ ≤ S · ‖X‖^d`.
pub fn row_sum_constant(f0: &[BigInt], f1: &[BigInt]) -> BigInt {
    abs_sum(f0).max(abs_sum(f1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projmap::{form_eval, form_mul};

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn adjugate_identity_holds() {
        let f0 = ints(&[1, 3, -2]);
        let f1 = ints(&[2, 0, 5]);
        let res = bareiss_determinant(sylvester_matrix(&f0, &f1));
        for k in 0..4 {
            let (a, b) = adjugate_row(&f0, &f1, k);
            let lhs: Vec<BigInt> = form_mul(&a, &f0)
                .iter()
                .zip(form_mul(&b, &f1))
                .map(|(x, y)| x + y)
                .collect();
            let mut rhs = vec![BigInt::zero(); 4];
            rhs[k] = res.clone();
            assert_eq!(lhs, rhs, "row {k}");
        }
    }

    #[test]
    fn monomial_constants() {
        // X³ = X·F₀ and Y³ = Y·F₁
        let f0 = ints(&[1, 0, 0]);
        let f1 = ints(&[0, 0, 1]);
        assert_eq!(adjugate_constant(&f0, &f1), BigInt::from(1));
        assert_eq!(bezoutian_constant(&f0, &f1), BigInt::from(2));
    }

    #[test]
    fn bezoutian_divides() {
        let f0 = ints(&[2, -1, 0, 7]);
        let f1 = ints(&[1, 1, 3, -4]);
        let q = bezoutian(&f0, &f1);
        for (x0, x1, y0, y1) in [(1, 2, 3, 4), (-2, 5, 7, 1), (3, 0, 1, 9)] {
            let (x0, x1, y0, y1) = (
                BigInt::from(x0),
                BigInt::from(x1),
                BigInt::from(y0),
                BigInt::from(y1),
            );
            let lhs = form_eval(&f0, &x0, &x1) * form_eval(&f1, &y0, &y1)
                - form_eval(&f1, &x0, &x1) * form_eval(&f0, &y0, &y1);
            let mut qv = BigInt::zero();
            for a in 0..3 {
                for b in 0..3 {
                    qv += &q[a][b]
                        * num_traits::pow(x0.clone(), 2 - a)
                        * num_traits::pow(x1.clone(), a)
                        * num_traits::pow(y0.clone(), 2 - b)
                        * num_traits::pow(y1.clone(), b);
                }
            }
            assert_eq!(lhs, (&x0 * &y1 - &x1 * &y0) * qv);
        }
    }
}
