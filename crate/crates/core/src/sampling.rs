//! Low-discrepancy point sets.

const PRIMES: [u32; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u32) -> f64 {
    let b64 = b as u64;
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % b64) as f64;
        i /= b64;
        f *= inv;
    }
    r
}

/// The `i`-th Halton point in `[0,1)^dim` (index starts at 1 to skip the origin).
pub fn halton(i: u64, dim: usize) -> Vec<f64> {
    assert!(dim <= PRIMES.len());
    (0..dim).map(|k| radical_inverse(i + 1, PRIMES[k])).collect()
}
