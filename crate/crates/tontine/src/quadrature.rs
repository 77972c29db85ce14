//! Adaptive Simpson quadrature used by the moment functions.

/// Controls for the adaptive quadrature behind the exponential-moment
/// integrals.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub absolute_tolerance: f64,
    /// Primary integration window in years past the evaluation point.
    /// S(60) is about 1e-20 under the default mortality model, far below
    /// the default tolerance.
    pub truncation_horizon: f64,
    /// Maximum recursion depth of the adaptive subdivision.
    pub max_subdivisions: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            absolute_tolerance: 1e-10,
            truncation_horizon: 60.0,
            max_subdivisions: 60,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.absolute_tolerance > 0.0) {
            return Err(crate::TontineError::InvalidParameter(
                "quadrature tolerance must be positive".into(),
            ));
        }
        if !(self.truncation_horizon > 0.0) {
            return Err(crate::TontineError::InvalidParameter(
                "truncation horizon must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Copy with a tolerance scaled by `factor` (used by oracles that
    /// re-integrate at a tighter tolerance).
    pub fn with_tolerance(&self, tolerance: f64) -> Self {
        QuadratureConfig {
            absolute_tolerance: tolerance,
            ..*self
        }
    }
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
        + adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson integration of `f` over `[a, b]` to an absolute
/// tolerance. Returns NaN propagated from the integrand untouched, which
/// callers use for divergence detection.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fb = f(b);
    let fm = f(m);
    let whole = simpson(fa, fm, fb, b - a);
    adaptive_step(&f, a, fa, b, fb, m, fm, whole, tol, max_depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomial_exactly() {
        let v = adaptive_simpson(|x| x * x * x, 0.0, 2.0, 1e-12, 40);
        assert!((v - 4.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn integrates_exponential_decay() {
        let v = adaptive_simpson(|x| (-x).exp(), 0.0, 30.0, 1e-12, 50);
        assert!((v - (1.0 - (-30.0f64).exp())).abs() < 1e-10);
    }

    #[test]
    fn resolves_sharp_left_edge_spike() {
        // lambda * exp(-lambda x) with lambda = 1e4 integrates to ~1.
        let lam = 1e4;
        let v = adaptive_simpson(|x| lam * (-lam * x).exp(), 0.0, 1.0, 1e-10, 60);
        assert!((v - 1.0).abs() < 1e-8, "got {v}");
    }
}
