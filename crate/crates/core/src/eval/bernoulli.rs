//! Bernoulli numbers B_2..B_32 as exact-rational f64 values.

/// B_{2k} for k = 1..=16.
pub const BERNOULLI_EVEN: [f64; 16] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
];

/// Largest usable Bernoulli correction order (index k in B_{2k}).
pub const MAX_BERNOULLI_ORDER: usize = 15;

/// B_{2k} / (2k)! for k = 1..=16, computed once.
pub fn bernoulli_over_factorial(k: usize) -> f64 {
    debug_assert!((1..=16).contains(&k));
    let mut fact = 1.0f64;
    for i in 2..=(2 * k) {
        fact *= i as f64;
    }
    BERNOULLI_EVEN[k - 1] / fact
}
