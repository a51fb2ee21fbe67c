//! Small integer helpers shared by the exact and floating-point formulas.

use num_bigint::BigInt;

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1u32), |acc, k| acc * k)
}

pub fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `(-1)^e` for any integer exponent.
pub fn sign_pow(e: i64) -> i32 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn sign_pow_f64(e: i64) -> f64 {
    f64::from(sign_pow(e))
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Levi-Civita symbol in three dimensions, 1-based axes.
pub fn levi_civita3(i: u8, j: u8, k: u8) -> i32 {
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1,
        _ => 0,
    }
}

/// Levi-Civita symbol in two dimensions, 1-based axes, `eps(1,2) = 1`.
pub fn levi_civita2(a: u8, b: u8) -> i32 {
    match (a, b) {
        (1, 2) => 1,
        (2, 1) => -1,
        _ => 0,
    }
}
