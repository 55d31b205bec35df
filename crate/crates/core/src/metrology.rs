//! Sensing figures of merit for the lattice spacing `d`.
//!
//! * FOM `= |∂ω_p/∂d| / σ_FWHM` of the targeted transmission feature.
//! * `F_MT = max_Δ (∂T/∂d)² / T`, intensity measurement on the transmitted port.
//! * `F_Q = 4(⟨∂ψ|∂ψ⟩ − |⟨ψ|∂ψ⟩|²)` for the guided output state
//!   `ψ = (r, t)/√p_g`.
//! * Cramér–Rao resolution `δd = 1/√(M F)`.
//!
//! Spacing derivatives are analytic (`∂M⁻¹ = −M⁻¹ ∂M M⁻¹`); every reported
//! maximum is cross-checked against Richardson-verified central differences.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::CouplingParams;
use crate::lattice::LatticeConfig;
use crate::numerics::linspace;
use crate::scattering::{
    locate_feature, polish_center, AmplitudeGradient, ScanPolicy, ScatterAmplitudes, Scatterer, SpectralFeature,
};
use crate::spectral::{eigenvalue_spacing_derivative, CollectiveMode, ModeTarget};

/// Transmissions at or below this are excluded from the `F_MT` maximum.
pub const EPS_T: f64 = 1e-12;
/// Guided probabilities at or below this make the output state undefined.
pub const EPS_PG: f64 = 1e-12;
/// Relative disagreement tolerated between derivative estimates.
pub const DERIVATIVE_TOL: f64 = 0.01;

/// Default spacing step for central differences.
pub fn derivative_step(spacing: f64) -> f64 {
    if spacing >= 0.1 {
        1e-6
    } else {
        1e-8
    }
}

/// Central difference at steps `h` and `h/2`, combined by Richardson
/// extrapolation once the two agree to [`DERIVATIVE_TOL`]. The step is
/// halved up to four times before giving up.
pub fn richardson<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut h = h;
    let mut last = f64::NAN;
    for _ in 0..5 {
        let d1 = (f(x + h)? - f(x - h)?) / (2.0 * h);
        let d2 = (f(x + 0.5 * h)? - f(x - 0.5 * h)?) / h;
        let rel = (d1 - d2).abs() / d2.abs().max(f64::MIN_POSITIVE);
        if rel <= DERIVATIVE_TOL || (d1 - d2).abs() <= 1e-300 {
            return Ok((4.0 * d2 - d1) / 3.0);
        }
        last = rel;
        h *= 0.5;
    }
    Err(Error::DerivativeUnconverged { rel_diff: last })
}

/// FOM together with its ingredients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FomResult {
    pub fom: f64,
    /// `∂ω_p/∂d` in Γ_1D/λ.
    pub slope: f64,
    pub feature: SpectralFeature,
    pub step: f64,
    /// `|∂J/∂d| / Γ` of the targeted eigenmode, a lineshape-free reference.
    pub mode_fom: f64,
}

/// Central-difference step for a feature of width `fwhm` drifting at
/// `slope` (Γ_1D/λ): the default, reduced so one step moves the feature by
/// at most a tenth of its width.
pub fn adaptive_step(spacing: f64, fwhm: f64, slope: f64) -> f64 {
    let h = derivative_step(spacing);
    if slope.abs() > 0.0 && fwhm > 0.0 {
        h.min(0.1 * fwhm / slope.abs())
    } else {
        h
    }
}

/// First-order drift of the targeted mode's shift with the spacing.
fn predicted_slope(scatterer: &Scatterer, mode: &CollectiveMode, spacing: f64) -> Result<f64> {
    Ok(eigenvalue_spacing_derivative(mode, scatterer.positions(), scatterer.params(), spacing)?.re)
}

/// Figure of merit of the targeted feature at the configured spacing.
///
/// The feature center at displaced spacings is re-polished as the root of
/// `∂T/∂Δ` next to its first-order predicted position, so the difference
/// quotient follows the same resonance.
pub fn fom(config: &LatticeConfig, params: &CouplingParams, target: ModeTarget, policy: &ScanPolicy) -> Result<FomResult> {
    let scatterer = Scatterer::from_config(config, *params)?;
    let base = locate_feature(&scatterer, target, policy)?;
    let feature = base.feature;
    let d0 = config.spacing;
    let predicted = predicted_slope(&scatterer, &base.mode, d0)?;
    let radius = 0.3 * feature.fwhm;
    let center_at = |d: f64| -> Result<f64> {
        if d == d0 {
            return Ok(feature.center);
        }
        let s = Scatterer::from_config(&config.with_spacing(d), *params)?;
        let guess = feature.center + predicted * (d - d0);
        polish_center(&s, guess, radius)?.ok_or(Error::FeatureNotFound { hint: guess })
    };
    let step = adaptive_step(d0, feature.fwhm, predicted);
    let slope = richardson(center_at, d0, step)?;
    Ok(FomResult {
        fom: slope.abs() / feature.fwhm,
        slope,
        feature,
        step,
        mode_fom: predicted.abs() / base.mode.decay,
    })
}

/// `(∂T/∂d)² / T` from one analytic gradient.
fn f_mt_point(g: &AmplitudeGradient) -> Option<f64> {
    let t = g.amplitudes.transmission();
    (t > EPS_T).then(|| g.d_transmission().powi(2) / t)
}

fn f_q_from(v: [Complex64; 2], dv: [Complex64; 2]) -> Result<f64> {
    let p = v[0].norm_sqr() + v[1].norm_sqr();
    if !(p > EPS_PG) {
        return Err(Error::GuidedProbabilityUnderflow(p));
    }
    let dnorm = dv[0].norm_sqr() + dv[1].norm_sqr();
    let overlap = v[0].conj() * dv[0] + v[1].conj() * dv[1];
    // projecting out ψ removes the normalization derivative as well
    Ok((4.0 * (dnorm / p - overlap.norm_sqr() / (p * p))).max(0.0))
}

fn f_q_point(g: &AmplitudeGradient) -> Result<f64> {
    f_q_from([g.amplitudes.r, g.amplitudes.t], [g.dr, g.dt])
}

/// Three-outcome (transmitted / reflected / lost) classical Fisher
/// information. A diagnostic beyond the transmission-only `F_MT`.
pub fn three_outcome_fi(g: &AmplitudeGradient) -> f64 {
    let a = &g.amplitudes;
    let dt = g.d_transmission();
    let dr = 2.0 * (a.r.conj() * g.dr).re;
    let dl = -(dt + dr);
    [(a.transmission(), dt), (a.reflection(), dr), (a.loss(), dl)]
        .iter()
        .filter(|(p, _)| *p > EPS_T)
        .map(|(p, dp)| dp * dp / p)
        .sum()
}

/// Scalar Fisher information and where it peaks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherPoint {
    pub value: f64,
    pub detuning: f64,
}

/// Grid policy for Fisher-information maxima.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherGrid {
    /// Refined window half-width in units of the feature FWHM.
    pub half_window: f64,
    pub refined_points: usize,
    /// Coarse scan spans every collective shift ± this many Γ_1D.
    pub coarse_margin: f64,
    pub coarse_points: usize,
}

impl Default for FisherGrid {
    fn default() -> Self {
        Self {
            half_window: 4.0,
            refined_points: 801,
            coarse_margin: 2.0,
            coarse_points: 1201,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quantity {
    Classical,
    Quantum,
}

struct FisherProblem {
    scatterer: Scatterer,
    config: LatticeConfig,
    params: CouplingParams,
    feature: SpectralFeature,
    shift_range: (f64, f64),
    step: f64,
}

impl FisherProblem {
    fn new(config: &LatticeConfig, params: &CouplingParams, target: ModeTarget, policy: &ScanPolicy) -> Result<Self> {
        let scatterer = Scatterer::from_config(config, *params)?;
        let located = locate_feature(&scatterer, target, policy)?;
        let h = crate::hamiltonian::build_h_eff(scatterer.positions(), params)?;
        let modes = crate::spectral::eigendecompose(&h)?;
        let (lo, hi) = modes
            .modes()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), m: &CollectiveMode| {
                (lo.min(m.shift), hi.max(m.shift))
            });
        let slope = predicted_slope(&scatterer, &located.mode, config.spacing)?;
        Ok(Self {
            step: adaptive_step(config.spacing, located.feature.fwhm, slope),
            scatterer,
            config: *config,
            params: *params,
            feature: located.feature,
            shift_range: (lo, hi),
        })
    }

    fn eval(&self, q: Quantity, delta: f64) -> Result<Option<f64>> {
        let g = self.scatterer.gradient(delta, self.config.spacing)?;
        Ok(match q {
            Quantity::Classical => f_mt_point(&g),
            Quantity::Quantum => {
                if g.amplitudes.p_g > EPS_PG {
                    Some(f_q_point(&g)?)
                } else {
                    None
                }
            }
        })
    }

    fn grid_max(&self, q: Quantity, grid: &[f64]) -> Result<Option<(usize, f64)>> {
        let mut best: Option<(usize, f64)> = None;
        for (i, &delta) in grid.iter().enumerate() {
            match self.eval(q, delta) {
                Ok(Some(v)) if v.is_finite() => {
                    // strict comparison: ties keep the lowest detuning
                    if best.is_none_or(|(_, b)| v > b) {
                        best = Some((i, v));
                    }
                }
                Ok(_) | Err(Error::SingularCoupling { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(best)
    }

    /// Golden-section refinement of a sampled maximum between its neighbours.
    fn refine(&self, q: Quantity, lo: f64, hi: f64) -> Result<FisherPoint> {
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let f = |x: f64| -> Result<f64> { Ok(self.eval(q, x)?.unwrap_or(f64::NEG_INFINITY)) };
        let (mut a, mut b) = (lo, hi);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (f(c)?, f(d)?);
        for _ in 0..60 {
            if (b - a).abs() <= 1e-13 * (1.0 + a.abs()) {
                break;
            }
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = f(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = f(d)?;
            }
        }
        let (x, v) = if fc >= fd { (c, fc) } else { (d, fd) };
        Ok(FisherPoint { value: v, detuning: x })
    }

    fn maximize(&self, q: Quantity, grid: &FisherGrid) -> Result<FisherPoint> {
        let w = grid.half_window * self.feature.fwhm;
        let refined = linspace(self.feature.center - w, self.feature.center + w, grid.refined_points.max(3));
        let coarse = linspace(
            self.shift_range.0 - grid.coarse_margin,
            self.shift_range.1 + grid.coarse_margin,
            grid.coarse_points.max(3),
        );
        let mut best: Option<FisherPoint> = None;
        for xs in [&refined, &coarse] {
            if let Some((i, _)) = self.grid_max(q, xs)? {
                let lo = xs[i.saturating_sub(1)];
                let hi = xs[(i + 1).min(xs.len() - 1)];
                let p = self.refine(q, lo, hi)?;
                if best.is_none_or(|b| p.value > b.value) {
                    best = Some(p);
                }
            }
        }
        let best = best.ok_or(Error::GuidedProbabilityUnderflow(0.0))?;
        self.verify(q, best)?;
        Ok(best)
    }

    /// Cross-checks the analytic value at the argmax against central differences.
    fn verify(&self, q: Quantity, p: FisherPoint) -> Result<()> {
        let fd = match q {
            Quantity::Classical => {
                classical_fi_fd(&self.config, &self.params, p.detuning, self.step)?
            }
            Quantity::Quantum => quantum_fi_fd(&self.config, &self.params, p.detuning, self.step)?,
        };
        let rel = (fd - p.value).abs() / p.value.abs().max(f64::MIN_POSITIVE);
        if rel > DERIVATIVE_TOL {
            return Err(Error::DerivativeUnconverged { rel_diff: rel });
        }
        Ok(())
    }
}

fn amplitudes_at(config: &LatticeConfig, params: &CouplingParams, spacing: f64, delta: f64) -> Result<ScatterAmplitudes> {
    Scatterer::from_config(&config.with_spacing(spacing), *params)?.amplitudes(delta)
}

/// `F_Q` at one detuning from the analytic amplitude derivatives.
pub fn quantum_fi(config: &LatticeConfig, params: &CouplingParams, detuning: f64) -> Result<f64> {
    let g = Scatterer::from_config(config, *params)?.gradient(detuning, config.spacing)?;
    f_q_point(&g)
}

/// `F_Q` at one detuning with the state derivative taken by Richardson
/// central differences of `(r, t)` in `d`.
pub fn quantum_fi_fd(config: &LatticeConfig, params: &CouplingParams, detuning: f64, step: f64) -> Result<f64> {
    let d0 = config.spacing;
    let a0 = amplitudes_at(config, params, d0, detuning)?;
    let v = [a0.r, a0.t];
    let mut h = step;
    let mut last = f64::NAN;
    let diff = |h: f64| -> Result<[Complex64; 2]> {
        let p = amplitudes_at(config, params, d0 + h, detuning)?;
        let m = amplitudes_at(config, params, d0 - h, detuning)?;
        Ok([(p.r - m.r) / (2.0 * h), (p.t - m.t) / (2.0 * h)])
    };
    for _ in 0..5 {
        let d1 = diff(h)?;
        let d2 = diff(0.5 * h)?;
        let scale = (d2[0].norm_sqr() + d2[1].norm_sqr()).sqrt();
        let err = ((d1[0] - d2[0]).norm_sqr() + (d1[1] - d2[1]).norm_sqr()).sqrt();
        if err <= DERIVATIVE_TOL * scale || scale == 0.0 {
            let dv = [(4.0 * d2[0] - d1[0]) / 3.0, (4.0 * d2[1] - d1[1]) / 3.0];
            return f_q_from(v, dv);
        }
        last = err / scale;
        h *= 0.5;
    }
    Err(Error::DerivativeUnconverged { rel_diff: last })
}

/// `F_MT` at one detuning from Richardson central differences of `T` in `d`.
pub fn classical_fi_fd(config: &LatticeConfig, params: &CouplingParams, detuning: f64, step: f64) -> Result<f64> {
    let t = amplitudes_at(config, params, config.spacing, detuning)?.transmission();
    let dt = richardson(
        |d| amplitudes_at(config, params, d, detuning).map(|a| a.transmission()),
        config.spacing,
        step,
    )?;
    Ok(dt * dt / t)
}

/// `F_MT` at one detuning; `None` where `T ≤ ε_T`.
pub fn classical_fi_at(config: &LatticeConfig, params: &CouplingParams, detuning: f64) -> Result<Option<f64>> {
    let g = Scatterer::from_config(config, *params)?.gradient(detuning, config.spacing)?;
    Ok(f_mt_point(&g))
}

/// `max_Δ (1/T)(∂T/∂d)²` over a refined window around the targeted feature
/// plus a coarse scan across the whole band.
pub fn classical_fi_transmission(
    config: &LatticeConfig,
    params: &CouplingParams,
    target: ModeTarget,
    grid: &FisherGrid,
) -> Result<FisherPoint> {
    FisherProblem::new(config, params, target, &ScanPolicy::default())?.maximize(Quantity::Classical, grid)
}

/// `F_Q` maximized over detuning with the same grid policy as
/// [`classical_fi_transmission`].
pub fn quantum_fi_max(
    config: &LatticeConfig,
    params: &CouplingParams,
    target: ModeTarget,
    grid: &FisherGrid,
) -> Result<FisherPoint> {
    FisherProblem::new(config, params, target, &ScanPolicy::default())?.maximize(Quantity::Quantum, grid)
}

/// Minimum resolvable displacement `1/√(M F)` in units of λ.
pub fn cramer_rao_min_dd(fisher: f64, measurements: u64) -> Result<f64> {
    if !(fisher.is_finite() && fisher > 0.0) {
        return Err(Error::NonPositive {
            what: "Fisher information",
            value: fisher,
        });
    }
    if measurements == 0 {
        return Err(Error::NonPositive {
            what: "measurement count",
            value: 0.0,
        });
    }
    Ok(1.0 / (measurements as f64 * fisher).sqrt())
}

/// Everything the sensing analysis reports for one array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FisherReport {
    /// λ⁻¹.
    pub fom: f64,
    /// λ⁻².
    pub f_mt: f64,
    pub f_mt_detuning: f64,
    /// λ⁻².
    pub f_q: f64,
    pub f_q_detuning: f64,
    /// `F_Q` evaluated at the `F_MT` argmax, for the pointwise bound.
    pub f_q_at_mt: f64,
    pub measurements: u64,
    /// Resolution from the larger of the two informations, λ.
    pub cramer_rao_dd: f64,
    /// Spacing step used by the finite-difference cross-checks, λ.
    pub step: f64,
}

pub fn fisher_report(
    config: &LatticeConfig,
    params: &CouplingParams,
    target: ModeTarget,
    grid: &FisherGrid,
    measurements: u64,
) -> Result<FisherReport> {
    let policy = ScanPolicy::default();
    let problem = FisherProblem::new(config, params, target, &policy)?;
    let fom = fom(config, params, target, &policy)?.fom;
    let mt = problem.maximize(Quantity::Classical, grid)?;
    let q = problem.maximize(Quantity::Quantum, grid)?;
    let f_q_at_mt = problem.eval(Quantity::Quantum, mt.detuning)?.unwrap_or(0.0);
    Ok(FisherReport {
        fom,
        f_mt: mt.value,
        f_mt_detuning: mt.detuning,
        f_q: q.value,
        f_q_detuning: q.detuning,
        f_q_at_mt,
        measurements,
        cramer_rao_dd: cramer_rao_min_dd(q.value.max(mt.value), measurements)?,
        step: problem.step,
    })
}

/// Power law `value ≈ prefactor · N^exponent` fitted in log-log space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub n_range: Vec<usize>,
}

/// Ordinary least squares on `(ln N, ln value)`.
pub fn fit_power_law(points: &[(usize, f64)]) -> Result<ScalingFit> {
    if points.len() < 5 {
        return Err(Error::InvalidConfig(format!(
            "power-law fit needs at least 5 points, got {}",
            points.len()
        )));
    }
    if let Some(&(_, v)) = points.iter().find(|(n, v)| !(*v > 0.0 && v.is_finite()) || *n == 0) {
        return Err(Error::NonPositive { what: "fit value", value: v });
    }
    let xs: Vec<f64> = points.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, v)| v.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidConfig("power-law fit needs distinct N values".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
    Ok(ScalingFit {
        exponent: slope,
        prefactor: intercept.exp(),
        r_squared,
        n_range: points.iter().map(|(n, _)| *n).collect(),
    })
}

/// Separate fits to the even-N and odd-N branches.
pub fn fit_per_parity(points: &[(usize, f64)]) -> Result<(ScalingFit, ScalingFit)> {
    let even: Vec<_> = points.iter().copied().filter(|(n, _)| n % 2 == 0).collect();
    let odd: Vec<_> = points.iter().copied().filter(|(n, _)| n % 2 == 1).collect();
    Ok((fit_power_law(&even)?, fit_power_law(&odd)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::gamma_deep_subwavelength;

    #[test]
    fn power_law_recovers_exact_exponents() {
        let pts: Vec<_> = (2..10).map(|n| (n, 7.0 * (n as f64).powi(3))).collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.exponent - 3.0).abs() < 1e-12);
        assert!((fit.prefactor - 7.0).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        let pts: Vec<_> = (2..10).map(|n| (n, 0.3 * (n as f64).powi(-3))).collect();
        assert!((fit_power_law(&pts).unwrap().exponent + 3.0).abs() < 1e-12);
    }

    #[test]
    fn power_law_rejects_bad_input() {
        assert!(fit_power_law(&[(1, 1.0), (2, 2.0), (3, 3.0), (4, 4.0)]).is_err());
        assert!(fit_power_law(&[(1, 1.0), (2, 2.0), (3, -3.0), (4, 4.0), (5, 5.0)]).is_err());
    }

    #[test]
    fn parity_branches_of_the_deep_formula() {
        // the bracket [1 ± cos θ_{N+1}] drifts with N, so the raw branches are
        // only roughly cubic; with it divided out they are exactly (N+1)⁻³
        let params = CouplingParams::new(0.1);
        let pts: Vec<_> = (10..=40)
            .map(|n| (n, gamma_deep_subwavelength(n, 0.02, 1, &params).unwrap().rate))
            .collect();
        let (even, odd) = fit_per_parity(&pts).unwrap();
        assert!((even.exponent + 3.0).abs() < 0.2, "{}", even.exponent);
        assert!((odd.exponent + 3.0).abs() < 0.2, "{}", odd.exponent);

        let stripped: Vec<_> = (4..=40)
            .map(|n| {
                let r = gamma_deep_subwavelength(n, 0.02, 1, &params).unwrap();
                let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                let bracket = 0.25 * (1.0 + sign * r.theta.cos())
                    + 0.025 * (1.0 + sign * crate::hamiltonian::fs_decay_kernel(r.theta));
                (n + 1, r.rate / bracket)
            })
            .collect();
        let (even, odd) = fit_per_parity(&stripped).unwrap();
        assert!((even.exponent + 3.0).abs() < 1e-9);
        assert!((odd.exponent + 3.0).abs() < 1e-9);
    }

    #[test]
    fn cramer_rao_scaling() {
        let a = cramer_rao_min_dd(1e6, 100).unwrap();
        assert!((a - 1e-4).abs() < 1e-18);
        assert!((cramer_rao_min_dd(4e6, 100).unwrap() - 0.5 * a).abs() < 1e-18);
        assert!(cramer_rao_min_dd(0.0, 100).is_err());
        assert!(cramer_rao_min_dd(1.0, 0).is_err());
    }

    #[test]
    fn richardson_differentiates_smooth_functions() {
        let d = richardson(|x| Ok(x.sin()), 0.4, 1e-3).unwrap();
        assert!((d - 0.4f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn fom_of_a_synthetic_linear_feature() {
        // ω_p(d) = 3 + 40 d with a fixed width of 0.2
        let (slope, fwhm) = (40.0, 0.2);
        let d0 = 0.25;
        let s = richardson(|d| Ok(3.0 + slope * d), d0, derivative_step(d0)).unwrap();
        assert!((s.abs() / fwhm / (slope / fwhm) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn single_lossless_atom_carries_no_information() {
        let cfg = LatticeConfig::uniform(1, 0.25);
        let params = CouplingParams::new(0.0);
        for delta in [-0.7, 0.0, 0.4] {
            let f = classical_fi_at(&cfg, &params, delta).unwrap().unwrap_or(0.0);
            assert!(f < 1e-20, "{f}");
        }
    }

    #[test]
    fn far_detuned_state_is_spacing_independent() {
        let cfg = LatticeConfig::uniform(6, 0.25);
        let params = CouplingParams::new(0.1);
        let far = quantum_fi(&cfg, &params, 1e3).unwrap();
        let on = quantum_fi_max(&cfg, &params, ModeTarget::MostSubradiant, &FisherGrid::default()).unwrap();
        assert!(far <= 1e-6 * on.value, "{far} vs {}", on.value);
    }

    #[test]
    fn qfi_ignores_global_phase() {
        let v = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.5)];
        let dv = [Complex64::new(1.1, -0.4), Complex64::new(0.2, 0.9)];
        let base = f_q_from(v, dv).unwrap();
        // ψ → e^{iφ(d)}ψ adds iφ'ψ to the derivative
        let phi = Complex64::from_polar(1.0, 0.7);
        let dphi = Complex64::new(0.0, 2.3);
        let v2 = [phi * v[0], phi * v[1]];
        let dv2 = [phi * (dv[0] + dphi * v[0]), phi * (dv[1] + dphi * v[1])];
        assert!((f_q_from(v2, dv2).unwrap() - base).abs() < 1e-12 * base);
    }

    #[test]
    fn qfi_routes_agree() {
        let params = CouplingParams::new(0.1);
        for (n, d) in [(2usize, 0.02), (5, 0.02), (4, 0.25)] {
            let cfg = LatticeConfig::uniform(n, d);
            let p = quantum_fi_max(&cfg, &params, ModeTarget::for_spacing(d), &FisherGrid::default()).unwrap();
            let fd = quantum_fi_fd(&cfg, &params, p.detuning, 1e-3 * derivative_step(d)).unwrap();
            assert!((fd / p.value - 1.0).abs() < 0.01, "N={n} d={d}: {fd} vs {}", p.value);
        }
    }

    #[test]
    fn classical_information_is_bounded_by_quantum() {
        let params = CouplingParams::new(0.1);
        for (n, d) in [(3usize, 0.25), (6, 0.25), (3, 0.02), (6, 0.02)] {
            let cfg = LatticeConfig::uniform(n, d);
            let r = fisher_report(&cfg, &params, ModeTarget::for_spacing(d), &FisherGrid::default(), 100).unwrap();
            assert!(r.f_mt <= r.f_q * (1.0 + 1e-6), "N={n} d={d}: {} > {}", r.f_mt, r.f_q);
            assert!(r.f_mt <= r.f_q_at_mt * (1.0 + 1e-6));
            assert!(r.fom > 0.0 && r.f_mt > 0.0 && r.f_q > 0.0);
        }
    }

    #[test]
    fn fom_grows_with_atom_number() {
        let params = CouplingParams::new(0.1);
        let policy = ScanPolicy::default();
        let a = fom(&LatticeConfig::uniform(5, 0.25), &params, ModeTarget::MostSubradiant, &policy).unwrap();
        let b = fom(&LatticeConfig::uniform(10, 0.25), &params, ModeTarget::MostSubradiant, &policy).unwrap();
        assert!(b.fom > 4.0 * a.fom);
    }
}
