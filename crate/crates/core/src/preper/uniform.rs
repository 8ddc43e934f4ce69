use crate::error::{Error, Result};

/// Constants of the two height inequalities:
/// `h(X_t) ≥ C·h(t) − C′` and `h(X_t) ≤ C₁(δ − log δ/#E)(h(t) + C₂) + avg_E h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformBoundInputs {
    pub c: f64,
    pub c_prime: f64,
    pub c1: f64,
    pub c2: f64,
    /// Lower bound `ε` for `h(X_t)`.
    pub epsilon: f64,
    pub deg: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformBound {
    /// Points of height at most `ε/2` number at most `n`.
    pub n: u64,
    /// `B = C₁(4(C′ + C·C₂ + ε/2)/C + 2C₂)`.
    pub b: f64,
    /// `4B/ε · log(4B/ε)`, the bound when `h(t)` is below the threshold.
    pub branch_small_height: f64,
    /// `4C₁/C · log(2C₁/C)`, the bound when `h(t)` is above it.
    pub branch_large_height: f64,
    /// `δ = ε/(4B)`.
    pub delta_small_height: f64,
    /// `δ = C/(2C₁)`.
    pub delta_large_height: f64,
    /// `4(C′ + C·C₂ + ε/2)/C + C₂`.
    pub threshold: f64,
    /// True when the large-height branch attains the maximum.
    pub large_height_dominates: bool,
    /// `min(C, 1)`, the value of `C` used throughout.
    pub c_used: f64,
}

/// `N = ⌈max(4B/ε·log(4B/ε), 4C₁/C·log(2C₁/C))⌉ + deg`, with `C` replaced by `min(C, 1)`.
///
/// ```
/// use adelic::preper::{uniform_bound_calculator, UniformBoundInputs};
///
/// let r = uniform_bound_calculator(&UniformBoundInputs {
///     c: 1.0, c_prime: 0.0, c1: 1.0, c2: 0.0, epsilon: 1.0, deg: 2,
/// }).unwrap();
/// assert_eq!(r.n, 19);
/// assert_eq!(r.b, 2.0);
/// ```
pub fn uniform_bound_calculator(inputs: &UniformBoundInputs) -> Result<UniformBound> {
    let UniformBoundInputs {
        c,
        c_prime,
        c1,
        c2,
        epsilon,
        deg,
    } = *inputs;
    let finite = [c, c_prime, c1, c2, epsilon].iter().all(|x| x.is_finite());
    if !finite || !(c > 0.0) || !(c1 >= 1.0) || !(epsilon > 0.0) || c_prime < 0.0 || c2 < 0.0 {
        return Err(Error::invalid(
            "need C > 0, C' ≥ 0, C1 ≥ 1, C2 ≥ 0 and ε > 0, all finite",
        ));
    }
    let c = c.min(1.0);
    let core = 4.0 * (c_prime + c * c2 + epsilon / 2.0) / c;
    let b = c1 * (core + 2.0 * c2);
    let small = 4.0 * b / epsilon * (4.0 * b / epsilon).ln();
    let large = 4.0 * c1 / c * (2.0 * c1 / c).ln();
    let worst = small.max(large).max(0.0);
    Ok(UniformBound {
        n: worst.ceil() as u64 + deg,
        b,
        branch_small_height: small,
        branch_large_height: large,
        delta_small_height: epsilon / (4.0 * b),
        delta_large_height: c / (2.0 * c1),
        threshold: core + c2,
        large_height_dominates: large > small,
        c_used: c,
    })
}
