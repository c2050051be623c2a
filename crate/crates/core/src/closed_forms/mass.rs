use crate::error::{param, Result};
use crate::geometry::unit_ball_volume;

/// Total Monge-Ampère mass of the witness `x_n − x_n^a (1−r²)^b` over its bowl.
pub fn pn_total_mass(n: usize, p: f64) -> Result<f64> {
    if n < 2 {
        return param("dimension must be at least 2");
    }
    let nf = n as f64;
    if !(p > 0.0 && p < nf) {
        return param(format!("need 0 < p < n, got p = {p}, n = {n}"));
    }
    let a = 2.0 / (nf + p);
    let b = 1.0 - a;
    Ok(a * b * (2.0 * b).powi(n as i32 - 1) / (nf * a - 1.0) * unit_ball_volume(n - 1))
}

/// `α₀ = 1`, `α_{k+1} = (2 + q α_k)/n` for `k < k_max`.
pub fn bootstrap_sequence(n: usize, q: f64, k_max: usize) -> Result<Vec<f64>> {
    if n < 3 {
        return param("bootstrap needs n >= 3");
    }
    let nf = n as f64;
    if !(q >= 0.0 && q < nf - 2.0) {
        return param(format!("need 0 <= q < n - 2, got q = {q}"));
    }
    let mut out = Vec::with_capacity(k_max + 1);
    let mut a = 1.0;
    out.push(a);
    for _ in 0..k_max {
        a = (2.0 + q * a) / nf;
        out.push(a);
    }
    Ok(out)
}
