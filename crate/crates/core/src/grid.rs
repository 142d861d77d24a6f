//! Shared uniform-grid numerics: high-order difference stencils, cumulative
//! Simpson quadrature, and discrete norms.

use num_complex::Complex64;

/// Returns the common spacing if `xs` is uniformly spaced (relative tolerance
/// 1e-9), otherwise `None`. Needs at least two points.
pub(crate) fn uniform_spacing(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let h = xs[1] - xs[0];
    if h <= 0.0 {
        return None;
    }
    for w in xs.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs() {
            return None;
        }
    }
    Some(h)
}

/// Fourth-order central first derivative. Valid for indices `2..n-2`; the
/// output is aligned with the input and the two points at each edge are
/// filled with one-sided second-order differences.
pub(crate) fn derivative_4th(psi: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = psi.len();
    assert!(n >= 5, "need at least 5 samples");
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 2..n - 2 {
        out[i] = (-psi[i + 2] + 8.0 * psi[i + 1] - 8.0 * psi[i - 1] + psi[i - 2]) / (12.0 * h);
    }
    out[0] = (-3.0 * psi[0] + 4.0 * psi[1] - psi[2]) / (2.0 * h);
    out[1] = (psi[2] - psi[0]) / (2.0 * h);
    out[n - 2] = (psi[n - 1] - psi[n - 3]) / (2.0 * h);
    out[n - 1] = (3.0 * psi[n - 1] - 4.0 * psi[n - 2] + psi[n - 3]) / (2.0 * h);
    out
}

/// Relative L2 residual of `(-psi'' + v psi - e psi)` over the interior,
/// using the fourth-order five-point second-difference stencil.
pub(crate) fn hamiltonian_residual(
    psi: &[Complex64],
    v: &[Complex64],
    e: Complex64,
    h: f64,
) -> f64 {
    let n = psi.len();
    assert!(n >= 5, "need at least 5 samples");
    assert_eq!(v.len(), n);
    let mut res_sq = 0.0f64;
    let mut norm_sq = 0.0f64;
    for i in 2..n - 2 {
        let second = (-psi[i + 2] + 16.0 * psi[i + 1] - 30.0 * psi[i] + 16.0 * psi[i - 1]
            - psi[i - 2])
            / (12.0 * h * h);
        let r = -second + (v[i] - e) * psi[i];
        res_sq += r.norm_sqr();
        norm_sq += psi[i].norm_sqr();
    }
    if norm_sq == 0.0 {
        return 0.0;
    }
    (res_sq / norm_sq).sqrt()
}

/// Trapezoidal discrete L2 norm, `sqrt(h * sum w_i |psi_i|^2)`.
pub(crate) fn l2_norm(psi: &[Complex64], h: f64) -> f64 {
    let n = psi.len();
    if n == 0 {
        return 0.0;
    }
    let mut s = 0.0;
    for (i, p) in psi.iter().enumerate() {
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        s += w * p.norm_sqr();
    }
    (h * s).sqrt()
}

/// Cumulative integral of `f` from `xs[0]` on a uniform grid: composite
/// Simpson at even prefixes, odd prefixes closed by the four-point
/// Adams–Moulton rule (both exact on cubics).
pub(crate) fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n < 4 {
        out[1] = h * (f[0] + f[1]) / 2.0;
        if n == 3 {
            out[2] = h * (f[0] + 4.0 * f[1] + f[2]) / 3.0;
        }
        return out;
    }
    for i in (2..n).step_by(2) {
        out[i] = out[i - 2] + h * (f[i - 2] + 4.0 * f[i - 1] + f[i]) / 3.0;
    }
    // first interval: mirrored Adams-Moulton using the three points ahead
    out[1] = h * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0;
    for i in (3..n).step_by(2) {
        out[i] = out[i - 1] + h * (9.0 * f[i] + 19.0 * f[i - 1] - 5.0 * f[i - 2] + f[i - 3]) / 24.0;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cumulative_simpson_on_cubic_is_exact() {
        let n = 101;
        let h = 0.01;
        let f: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(3)).collect();
        let integral = cumulative_simpson(&f, h);
        for i in 0..n {
            let x = i as f64 * h;
            assert!(
                (integral[i] - x.powi(4) / 4.0).abs() < 1e-12,
                "at i={i}: {} vs {}",
                integral[i],
                x.powi(4) / 4.0
            );
        }
    }

    #[test]
    fn cumulative_simpson_fourth_order_on_transcendental() {
        let n = 1001;
        let h = 2.0 / (n as f64 - 1.0);
        let f: Vec<f64> = (0..n).map(|i| (i as f64 * h).sin().exp()).collect();
        let integral = cumulative_simpson(&f, h);
        // reference via a much finer trapezoid
        let fine = 400_000;
        let hf = 2.0 / fine as f64;
        let mut acc = 0.0;
        let mut reference = vec![0.0];
        for k in 0..fine {
            let a: f64 = (k as f64 * hf).sin().exp();
            let b: f64 = ((k + 1) as f64 * hf).sin().exp();
            acc += hf * (a + b) / 2.0;
            reference.push(acc);
        }
        for i in (0..n).step_by(97) {
            let x = i as f64 * h;
            let r = reference[(x / hf).round() as usize];
            assert!((integral[i] - r).abs() < 1e-8, "at x={x}");
        }
    }

    #[test]
    fn derivative_4th_matches_polynomial() {
        let n = 41;
        let h = 0.05;
        let xs: Vec<f64> = (0..n).map(|i| -1.0 + i as f64 * h).collect();
        let psi: Vec<Complex64> = xs
            .iter()
            .map(|&x| Complex64::new(x.powi(4), x.powi(3)))
            .collect();
        let d = derivative_4th(&psi, h);
        for i in 2..n - 2 {
            let x = xs[i];
            let want = Complex64::new(4.0 * x.powi(3), 3.0 * x * x);
            assert!((d[i] - want).norm() < 1e-10);
        }
    }

    #[test]
    fn uniform_spacing_detects_jitter() {
        assert!(uniform_spacing(&[0.0, 0.1, 0.2, 0.3]).is_some());
        assert!(uniform_spacing(&[0.0, 0.1, 0.25]).is_none());
    }
}
