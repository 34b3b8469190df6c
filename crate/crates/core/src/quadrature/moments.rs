/// Moments `μ_k = ∫_0^1 s^k e^{-2σs} ds` for `k = 0..=k_max`.
///
/// Evaluated through the positive series
/// `μ_k = Σ_n k! (2σ)^n e^{-2σ} / (n+k+1)!`, which has no cancellation for any
/// `σ ≥ 0`. The textbook recurrence `μ_k = (k μ_{k-1} - e^{-2σ}) / (2σ)` loses
/// all accuracy for small `σ` and is only used as a test oracle.
pub fn exp_moments(sigma: f64, k_max: usize) -> Vec<f64> {
    assert!(sigma >= 0.0 && sigma.is_finite(), "sigma must be finite and non-negative");
    if sigma == 0.0 {
        return (0..=k_max).map(|k| 1.0 / (k as f64 + 1.0)).collect();
    }
    let x = 2.0 * sigma;
    let ln_x = x.ln();
    (0..=k_max)
        .map(|k| {
            let kf = k as f64;
            // ln of the n-th term including the e^{-x} prefactor
            let mut ln_term = -(kf + 1.0).ln() - x;
            let mut sum = 0.0;
            let mut n = 0usize;
            loop {
                let term = ln_term.exp();
                sum += term;
                n += 1;
                if (n as f64) > x && term < 1e-18 * sum {
                    break;
                }
                ln_term += ln_x - (n as f64 + kf + 1.0).ln();
            }
            sum
        })
        .collect()
}
