//! Counting sign twists of `PGL_2^n` whose unipotent part has no slope 0.

use super::monomial::{binomial, MonomialCrystal};

/// Largest `n` accepted by the exhaustive oracle.
pub const MAX_COUNT_N: usize = 24;

/// Closed form: `2^{n-1}` for odd `n`, `2^{n-1} - C(n-1, n/2)` for even `n`.
pub fn count_nu_formula(n: usize) -> u64 {
    assert!(n >= 1);
    let half = 1u64 << (n - 1);
    if n % 2 == 1 {
        half
    } else {
        half - binomial(n as u64 - 1, n as u64 / 2)
    }
}

/// Whether the twist `w` (bit `i` flips the root on entering factor `i`)
/// leaves every root orbit with a nonzero exponent sum.
pub fn twist_has_no_zero_slope(n: usize, w: u64) -> bool {
    let mut sign = 1i64;
    let mut sum = 0i64;
    for i in 0..n {
        sum += sign;
        if w >> ((i + 1) % n) & 1 == 1 {
            sign = -sign;
        }
    }
    // An odd number of flips glues the orbits of alpha and -alpha into a
    // single orbit of length 2n, whose exponents cancel.
    sign == 1 && sum != 0
}

/// Brute force over all `2^n` twists.
pub fn count_nu_oracle(n: usize) -> u64 {
    assert!((1..=MAX_COUNT_N).contains(&n));
    (0..1u64 << n).filter(|&w| twist_has_no_zero_slope(n, w)).count() as u64
}

/// `(formula, oracle)`.
pub fn count_nu(n: usize) -> (u64, u64) {
    (count_nu_formula(n), count_nu_oracle(n))
}

/// The adjoint root crystal of `PGL_2^n` twisted by `w`: labels
/// `(+alpha, i)` at `i` and `(-alpha, i)` at `n + i`.
pub fn twisted_a1_crystal(n: usize, w: u64) -> MonomialCrystal {
    let mut step = vec![0; 2 * n];
    let mut exp = vec![0; 2 * n];
    for i in 0..n {
        let j = (i + 1) % n;
        let flip = w >> j & 1 == 1;
        step[i] = if flip { n + j } else { j };
        step[n + i] = if flip { j } else { n + j };
        exp[i] = 1;
        exp[n + i] = -1;
    }
    MonomialCrystal::new(step, exp).expect("twist is a permutation")
}
