//! Modified Bessel function of the first kind, order zero.

/// I₀(x), relative accuracy better than 1e-14 over the real line.
///
/// Power series Σ (x²/4)ᵏ/(k!)² for |x| ≤ 40 (all terms positive, so no
/// cancellation), Hankel asymptotic expansion beyond.
pub fn bessel_i0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 40.0 {
        let q = 0.25 * ax * ax;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            term *= q / (k * k);
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
            k += 1.0;
        }
        sum
    } else {
        // e^x/√(2πx) Σ ((2k−1)!!)² / (k! (8x)^k)
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..30 {
            let odd = (2 * k - 1) as f64;
            term *= odd * odd / (k as f64 * 8.0 * ax);
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
        }
        libm::exp(ax) / libm::sqrt(2.0 * core::f64::consts::PI * ax) * sum
    }
}
