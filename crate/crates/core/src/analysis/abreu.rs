use crate::closed_forms::{verify_family_inequality, ClosedFormFunction};
use crate::error::{param, Result};
use crate::geometry::ConvexDomain;
use crate::linalg::det;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct AlphaCheck {
    pub alpha: f64,
    pub c_alpha: f64,
    /// Closed-form lower bound of `det D²v_α / x_n^{nα−2}` over `|x'| ≤ D`.
    pub det_factor_min: f64,
    pub sampled_violation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AbreuReport {
    pub n: usize,
    pub diam: f64,
    pub alphas: Vec<AlphaCheck>,
    pub matrix_trials: usize,
    /// Smallest `trace(AB) / (n (det A det B)^{1/n}) − 1` over the trials.
    pub matrix_min_slack: f64,
    /// Exponents reached by successive `β → β + 1/n` steps from `1/n`, ending at `(n−1)/n`.
    pub ladder: Vec<f64>,
    pub terminal_alpha: f64,
    pub pass: bool,
}

fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let g: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = (0..n).map(|k| g[i * n + k] * g[j * n + k]).sum::<f64>();
        }
        a[i * n + i] += 1e-3;
    }
    a
}

/// Comparison machinery of the Abreu bootstrap: barrier determinants on an α grid, the
/// trace–determinant inequality on random SPD pairs, and the exponent ladder.
pub fn abreu_bootstrap_check(n: usize, diam: f64) -> Result<AbreuReport> {
    abreu_bootstrap_check_with(n, diam, 10_000, 2_000, 7)
}

pub fn abreu_bootstrap_check_with(
    n: usize,
    diam: f64,
    trials: usize,
    samples: usize,
    seed: u64,
) -> Result<AbreuReport> {
    if n < 2 || !(diam > 0.0 && diam.is_finite()) {
        return param(format!("need n >= 2 and D > 0 (n = {n}, D = {diam})"));
    }
    let nf = n as f64;
    let lo = 2.0 / nf;
    let mut grid: Vec<f64> = (0..9).map(|k| lo + (1.0 - lo) * k as f64 / 8.0).collect();
    for k in 2..n {
        grid.push(k as f64 / nf);
    }
    grid.push(1.0);
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let side = diam / nf.sqrt();
    let cube = ConvexDomain::cuboid(&vec![0.0; n], &vec![side; n])?;
    let mut alphas = Vec::new();
    for &alpha in &grid {
        let f = ClosedFormFunction::abreu_comparison(cube.clone(), None, alpha)?;
        let c_alpha = match f.params() {
            crate::closed_forms::FamilyParams::AbreuComparison { c_alpha, .. } => *c_alpha,
            _ => unreachable!(),
        };
        let d = f.domain().diam();
        // det = 2^{n−1} x_n^{nα−2} [α(1−α)C_α − (α²+α)|x'|²]; the log form at α = 1 has
        // det = 2^{n−1} x_n^{n−2} (1 + 2D² − 2|x'|²).
        let factor = if alpha < 1.0 {
            2f64.powi(n as i32 - 1) * (alpha * (1.0 - alpha) * c_alpha - (alpha * alpha + alpha) * d * d)
        } else {
            2f64.powi(n as i32 - 1)
        };
        let rep = verify_family_inequality(&f, samples)?;
        alphas.push(AlphaCheck {
            alpha,
            c_alpha,
            det_factor_min: factor,
            sampled_violation: rep.max_violation,
            pass: factor >= 1.0 && rep.pass,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_slack = f64::INFINITY;
    for _ in 0..trials {
        let a = random_spd(&mut rng, n);
        let b = random_spd(&mut rng, n);
        let tr: f64 = (0..n).map(|i| (0..n).map(|k| a[i * n + k] * b[k * n + i]).sum::<f64>()).sum();
        let rhs = nf * (det(&a, n) * det(&b, n)).powf(1.0 / nf);
        min_slack = min_slack.min(tr / rhs - 1.0);
    }
    let mut ladder = Vec::new();
    let mut beta = 1.0 / nf;
    while beta < (nf - 1.0) / nf - 1e-12 {
        beta += 1.0 / nf;
        ladder.push(beta);
    }
    let pass = alphas.iter().all(|a| a.pass) && min_slack >= -1e-12 && ladder.len() == n - 2;
    Ok(AbreuReport {
        n,
        diam,
        alphas,
        matrix_trials: trials,
        matrix_min_slack: min_slack,
        ladder,
        terminal_alpha: 1.0,
        pass,
    })
}
