//! Makeham mortality law: hazard, survival, exponential moments of the
//! death time and of the auxiliary variable A, and death-time sampling.

use rand::Rng;

use crate::quadrature::{adaptive_simpson, QuadratureConfig};
use crate::{Result, TontineError};

/// Hard cap, in years past the evaluation point, before a slowly decaying
/// exponential-moment integral is declared divergent.
const EXTENSION_CAP: f64 = 400.0;
/// Chunk width used when extending an integral past the truncation horizon.
const EXTENSION_CHUNK: f64 = 10.0;

/// Makeham's Law: lambda(t) = A + B * C^(base_age + t) for t years past
/// `base_age`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MortalityModel {
    pub makeham_a: f64,
    pub makeham_b: f64,
    pub makeham_c: f64,
    pub base_age: f64,
}

/// Behaviour of the hazard rate as t grows, as seen through the
/// quadrature truncation horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HazardLimit {
    /// The age-dependent term is negligible over the working horizon; the
    /// hazard is effectively the constant carried here.
    EffectivelyConstant(f64),
    /// The hazard grows without bound (the generic Makeham case).
    Unbounded,
}

impl MortalityModel {
    /// Default parameterization: A = 2.2e-4, B = 2.7e-6, C = 1.124 from
    /// age 65.
    pub fn standard() -> Self {
        MortalityModel {
            makeham_a: 2.2e-4,
            makeham_b: 2.7e-6,
            makeham_c: 1.124,
            base_age: 65.0,
        }
    }

    pub fn new(makeham_a: f64, makeham_b: f64, makeham_c: f64, base_age: f64) -> Result<Self> {
        if !(makeham_a >= 0.0) {
            return Err(TontineError::InvalidParameter(
                "makeham_a must be nonnegative".into(),
            ));
        }
        if !(makeham_b > 0.0) {
            return Err(TontineError::InvalidParameter(
                "makeham_b must be positive".into(),
            ));
        }
        if !(makeham_c > 1.0) {
            return Err(TontineError::InvalidParameter(
                "makeham_c must exceed 1".into(),
            ));
        }
        if !(base_age > 0.0) {
            return Err(TontineError::InvalidParameter(
                "base_age must be positive".into(),
            ));
        }
        Ok(MortalityModel {
            makeham_a,
            makeham_b,
            makeham_c,
            base_age,
        })
    }

    /// lambda(t) = A + B * C^(base_age + t).
    pub fn force_of_mortality(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(self.hazard_unchecked(t))
    }

    #[inline]
    fn hazard_unchecked(&self, t: f64) -> f64 {
        self.makeham_a + self.makeham_b * ((self.base_age + t) * self.makeham_c.ln()).exp()
    }

    /// Closed form of int_0^t lambda(s) ds:
    /// A t + B C^base_age (C^t - 1) / ln C.
    pub fn integrated_hazard(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(self.cumulative_unchecked(t))
    }

    #[inline]
    fn cumulative_unchecked(&self, t: f64) -> f64 {
        let ln_c = self.makeham_c.ln();
        let gompertz = (self.base_age * ln_c).exp();
        self.makeham_a * t + self.makeham_b * gompertz * ((t * ln_c).exp() - 1.0) / ln_c
    }

    /// Survival function S(t) = exp(-int_0^t lambda).
    pub fn survival(&self, t: f64) -> Result<f64> {
        Ok((-self.integrated_hazard(t)?).exp())
    }

    /// Classifies the hazard's long-run behaviour. The growing term is
    /// treated as absent when its size at the truncation horizon is below
    /// 1e-8 of the constant term, which is how a near-zero B stands in
    /// for a constant-hazard model.
    pub fn hazard_limit(&self, quad: &QuadratureConfig) -> HazardLimit {
        let t = quad.truncation_horizon;
        let gompertz = self.makeham_b * ((self.base_age + t) * self.makeham_c.ln()).exp();
        if gompertz < 1e-8 * self.makeham_a {
            HazardLimit::EffectivelyConstant(self.hazard_unchecked(0.0))
        } else {
            HazardLimit::Unbounded
        }
    }

    /// E[e^{p (tau - t)} | tau > t]: the exponential moment of the
    /// remaining lifetime.
    ///
    /// Computed as int_t^inf e^{p(s-t)} lambda(s) exp(-(H(s)-H(t))) ds so
    /// the conditioning never divides by a vanishing S(t).
    pub fn mgf_tau(&self, p: f64, t: f64, quad: &QuadratureConfig) -> Result<f64> {
        self.check_time(t)?;
        quad.validate()?;
        self.exp_moment(p, t, 1.0, quad)
    }

    /// M_A(p) for the power-utility auxiliary variable A with tail
    /// P[A > t] = S(t)^(1 - gamma alpha), via its density
    /// (1 - gamma alpha) lambda(t) S(t)^(1 - gamma alpha).
    pub fn mgf_a_power(
        &self,
        p: f64,
        gamma: f64,
        alpha: f64,
        quad: &QuadratureConfig,
    ) -> Result<f64> {
        let expo = power_tail_exponent(gamma, alpha)?;
        quad.validate()?;
        self.exp_moment(p, 0.0, expo, quad)
    }

    /// E[A] = int_0^inf S(t)^(1 - gamma alpha) dt.
    pub fn expected_a_power(&self, gamma: f64, alpha: f64, quad: &QuadratureConfig) -> Result<f64> {
        let expo = power_tail_exponent(gamma, alpha)?;
        quad.validate()?;
        let f = |s: f64| (-expo * self.cumulative_unchecked(s)).exp();
        self.integrate_with_extension(f, 0.0, quad, |t_end| {
            // For a nondecreasing hazard, int_T^inf S^expo <= S(T)^expo / (expo lambda(T)).
            (-expo * self.cumulative_unchecked(t_end)).exp()
                / (expo * self.hazard_unchecked(t_end))
        })
    }

    /// M_A(p), p <= 0, for the log-utility auxiliary variable A with tail
    /// P[A > t] = S(t) (1 - ln S(t)). Uses the integration-by-parts
    /// identity M_A(p) = 1 + p int_0^inf e^{pt} S(t) (1 + H(t)) dt.
    pub fn mgf_a_log(&self, p: f64, quad: &QuadratureConfig) -> Result<f64> {
        if p > 0.0 {
            return Err(TontineError::InvalidParameter(
                "mgf_a_log requires p <= 0".into(),
            ));
        }
        quad.validate()?;
        if p == 0.0 {
            return Ok(1.0);
        }
        let f = |s: f64| {
            let h = self.cumulative_unchecked(s);
            (p * s - h).exp() * (1.0 + h)
        };
        let tail = self
            .integrate_with_extension(f, 0.0, quad, |t_end| {
                let h = self.cumulative_unchecked(t_end);
                // S (1+H) decays at least as fast as e^{-H/2} eventually;
                // the crude bound below is only used to decide when the
                // remaining mass is negligible.
                (p * t_end - 0.5 * h).exp() * (1.0 + h)
            })?;
        Ok(1.0 + p * tail)
    }

    /// kappa(p) = M_A(p) / (M_tau(p, 0) - M_A(p)) for the log-utility A.
    pub fn kappa(&self, p: f64, quad: &QuadratureConfig) -> Result<f64> {
        let m_a = self.mgf_a_log(p, quad)?;
        let m_tau = self.mgf_tau(p, 0.0, quad)?;
        let denominator = m_tau - m_a;
        if denominator.abs() <= quad.absolute_tolerance {
            return Err(TontineError::KappaUndefined { denominator });
        }
        Ok(m_a / denominator)
    }

    /// Inverse-CDF death-time sampling: solves H(t) = -ln(u) by bisection
    /// followed by a secant polish to 1e-10 years.
    pub fn sample_tau<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let u = u.max(f64::MIN_POSITIVE);
        self.invert_cumulative(-u.ln())
    }

    /// Solves H(t) = target for target >= 0. H is strictly increasing, so
    /// bisection over an expanding bracket always converges.
    pub fn invert_cumulative(&self, target: f64) -> f64 {
        if target <= 0.0 {
            return 0.0;
        }
        let mut hi = 1.0;
        while self.cumulative_unchecked(hi) < target {
            hi *= 2.0;
            if hi > 4096.0 {
                return hi;
            }
        }
        let mut lo = 0.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.cumulative_unchecked(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-8 {
                break;
            }
        }
        // Secant polish.
        let mut x0 = lo;
        let mut x1 = hi;
        let mut f0 = self.cumulative_unchecked(x0) - target;
        for _ in 0..8 {
            let f1 = self.cumulative_unchecked(x1) - target;
            if (f1 - f0).abs() < f64::MIN_POSITIVE {
                break;
            }
            let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
            x0 = x1;
            f0 = f1;
            x1 = x2.clamp(0.0, 4096.0);
            if (x1 - x0).abs() < 1e-10 {
                break;
            }
        }
        x1
    }

    /// int_t0^inf e^{p (s - t0)} expo lambda(s) exp(-expo (H(s) - H(t0))) ds.
    ///
    /// Shared by `mgf_tau` (expo = 1) and `mgf_a_power`
    /// (expo = 1 - gamma alpha).
    fn exp_moment(&self, p: f64, t0: f64, expo: f64, quad: &QuadratureConfig) -> Result<f64> {
        if p == 0.0 {
            return Ok(1.0);
        }
        let h0 = self.cumulative_unchecked(t0);
        let f = |s: f64| {
            (p * (s - t0) - expo * (self.cumulative_unchecked(s) - h0)).exp()
                * expo
                * self.hazard_unchecked(s)
        };
        self.integrate_with_extension(f, t0, quad, |t_end| {
            // Exact remainder when p <= 0:
            //   int_T^inf e^{p(s-t0)} expo lambda S^expo ds
            //     <= e^{p(T-t0)} exp(-expo (H(T)-H(t0))).
            // For p > 0 the same expression is only an indicator of the
            // remaining mass; the chunked extension below does the work.
            (p * (t_end - t0) - expo * (self.cumulative_unchecked(t_end) - h0)).exp()
        })
    }

    /// Integrates `f` over `[t0, t0 + truncation_horizon]`, then extends
    /// in fixed chunks until either the analytic tail bound or the last
    /// chunk drops below tolerance. Running past the hard cap, or any
    /// non-finite value, is reported as divergence.
    fn integrate_with_extension<F, B>(
        &self,
        f: F,
        t0: f64,
        quad: &QuadratureConfig,
        tail_bound: B,
    ) -> Result<f64>
    where
        F: Fn(f64) -> f64,
        B: Fn(f64) -> f64,
    {
        let tol = quad.absolute_tolerance;
        let mut t_end = t0 + quad.truncation_horizon;
        let mut total = adaptive_simpson(&f, t0, t_end, tol, quad.max_subdivisions);
        loop {
            if !total.is_finite() {
                return Err(TontineError::Divergent(format!(
                    "integral not finite by t = {t_end:.1}"
                )));
            }
            if tail_bound(t_end) < tol {
                return Ok(total);
            }
            if t_end - t0 >= EXTENSION_CAP {
                return Err(TontineError::Divergent(format!(
                    "tail estimate still exceeds tolerance at t = {t_end:.1}"
                )));
            }
            let next = t_end + EXTENSION_CHUNK;
            let chunk = adaptive_simpson(&f, t_end, next, tol, quad.max_subdivisions);
            total += chunk;
            t_end = next;
            if chunk.is_finite() && chunk.abs() < tol {
                return Ok(total);
            }
        }
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(t >= 0.0) {
            return Err(TontineError::InvalidParameter(format!(
                "time since base age must be nonnegative, got {t}"
            )));
        }
        Ok(())
    }
}

/// Tail exponent 1 - gamma alpha of the power-utility A; positivity is
/// the admissibility condition gamma < 1, alpha in [0, 1].
fn power_tail_exponent(gamma: f64, alpha: f64) -> Result<f64> {
    if !(gamma < 1.0) || gamma == 0.0 {
        return Err(TontineError::InvalidParameter(
            "power utility requires gamma < 1, gamma != 0".into(),
        ));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(TontineError::InvalidParameter(
            "tontine fraction alpha must lie in [0, 1]".into(),
        ));
    }
    let expo = 1.0 - gamma * alpha;
    if !(expo > 0.0) {
        return Err(TontineError::InvalidParameter(
            "1 - gamma alpha must be positive".into(),
        ));
    }
    Ok(expo)
}
