//! Strict experiment configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::CouplingParams;
use crate::scattering::ScanPolicy;
use crate::spectral::ModeTarget;

/// Largest array accepted from a config.
pub const MAX_ATOMS: usize = 400;
/// Largest frequency grid accepted from a config.
pub const MAX_GRID: usize = 10_000;
/// Largest disorder ensemble accepted from a config.
pub const MAX_REALIZATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    DecayScaling,
    Spectrum,
    Shift,
    FomSweep,
    FisherSweep,
    DisorderEnsemble,
    ResolveDd,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::DecayScaling => "decay_scaling",
            Self::Spectrum => "spectrum",
            Self::Shift => "shift",
            Self::FomSweep => "fom_sweep",
            Self::FisherSweep => "fisher_sweep",
            Self::DisorderEnsemble => "disorder_ensemble",
            Self::ResolveDd => "resolve_dd",
        }
    }
}

/// Which collective mode a spectral feature is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetChoice {
    /// Most subradiant mode for `d ≥ 0.1λ`, lowest-shift mode below.
    #[default]
    Auto,
    MostSubradiant,
    LowestShift,
}

impl TargetChoice {
    pub fn resolve(self, spacing: f64) -> ModeTarget {
        match self {
            Self::Auto => ModeTarget::for_spacing(spacing),
            Self::MostSubradiant => ModeTarget::MostSubradiant,
            Self::LowestShift => ModeTarget::LowestShift,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsConfig {
    /// Lattice spacings in λ.
    #[serde(default = "default_spacings")]
    pub spacings: Vec<f64>,
    /// Nonguided decay rates γ in Γ_1D.
    #[serde(default = "default_gammas")]
    pub gammas: Vec<f64>,
    /// Optional ω₀/Γ_1D; enables the non-Markovian phase `ωr/c`.
    #[serde(default)]
    pub carrier: Option<f64>,
    #[serde(default)]
    pub target: TargetChoice,
}

fn default_spacings() -> Vec<f64> {
    vec![0.25]
}

fn default_gammas() -> Vec<f64> {
    vec![0.1]
}

impl Default for PhysicsConfig {
    fn default() -> Self {
        Self {
            spacings: default_spacings(),
            gammas: default_gammas(),
            carrier: None,
            target: TargetChoice::Auto,
        }
    }
}

impl PhysicsConfig {
    pub fn params(&self, gamma: f64) -> CouplingParams {
        let p = CouplingParams::new(gamma);
        match self.carrier {
            Some(w0) => p.with_carrier(w0),
            None => p,
        }
    }
}

/// One explicit (N, d) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub n_atoms: usize,
    pub spacing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Explicit atom numbers.
    #[serde(default)]
    pub n_atoms: Option<Vec<usize>>,
    /// Inclusive range `[lo, hi]`, alternative to `n_atoms`.
    #[serde(default)]
    pub n_range: Option<[usize; 2]>,
    /// Explicit (N, d) pairs; used by `resolve_dd` instead of the product.
    #[serde(default)]
    pub cases: Option<Vec<Case>>,
    /// Spacing displacement δd per entry of `physics.spacings`, in λ.
    #[serde(default)]
    pub delta_d: Option<Vec<f64>>,
    /// Refined window half-width in hinted linewidths.
    #[serde(default = "default_half_window")]
    pub half_window: f64,
    /// Points in the refined window.
    #[serde(default = "default_points")]
    pub points: usize,
    /// Absolute detuning window `[lo, hi]` in Γ_1D for `spectrum`.
    #[serde(default)]
    pub detuning: Option<[f64; 2]>,
    /// Independent detections M for the Cramér–Rao bound.
    #[serde(default = "default_measurements")]
    pub measurements: u64,
}

fn default_half_window() -> f64 {
    15.0
}

fn default_points() -> usize {
    601
}

fn default_measurements() -> u64 {
    100
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_atoms: None,
            n_range: None,
            cases: None,
            delta_d: None,
            half_window: default_half_window(),
            points: default_points(),
            detuning: None,
            measurements: default_measurements(),
        }
    }
}

impl SweepConfig {
    pub fn atom_numbers(&self) -> Vec<usize> {
        match (&self.n_atoms, self.n_range) {
            (Some(list), _) => list.clone(),
            (None, Some([lo, hi])) => (lo..=hi).collect(),
            (None, None) => vec![10],
        }
    }

    pub fn scan_policy(&self) -> ScanPolicy {
        ScanPolicy {
            half_window: self.half_window,
            points: self.points,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderConfig {
    /// Displacement amplitude as a fraction of the spacing (`u/d`).
    #[serde(default)]
    pub fraction: f64,
    #[serde(default = "default_realizations")]
    pub realizations: usize,
    #[serde(default)]
    pub base_seed: u64,
}

fn default_realizations() -> usize {
    20
}

impl Default for DisorderConfig {
    fn default() -> Self {
        Self {
            fraction: 0.0,
            realizations: default_realizations(),
            base_seed: 0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub dir: Option<PathBuf>,
    /// Table names overriding the defaults, in emission order.
    #[serde(default)]
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub kind: Option<ExperimentKind>,
    #[serde(default)]
    pub physics: PhysicsConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub disorder: DisorderConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| invalid(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::InvalidConfig(m) => invalid(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// δd paired with each spacing: configured, or `−10⁻³λ` at `d ≥ 0.1λ`
    /// and `−10⁻⁵λ` below.
    pub fn delta_d(&self) -> Vec<f64> {
        match &self.sweep.delta_d {
            Some(v) => v.clone(),
            None => self
                .physics
                .spacings
                .iter()
                .map(|&d| if d >= 0.1 { -1e-3 } else { -1e-5 })
                .collect(),
        }
    }

    /// Explicit cases, or every (N, d) combination in spacing-major order.
    pub fn cases(&self) -> Vec<Case> {
        match &self.sweep.cases {
            Some(c) => c.clone(),
            None => self
                .physics
                .spacings
                .iter()
                .flat_map(|&spacing| {
                    self.sweep
                        .atom_numbers()
                        .into_iter()
                        .map(move |n_atoms| Case { n_atoms, spacing })
                })
                .collect(),
        }
    }

    /// Checks every field; nothing is computed on an invalid config.
    pub fn validate(&self, kind: ExperimentKind) -> Result<()> {
        if let Some(k) = self.kind {
            if k != kind {
                return Err(invalid(format!(
                    "config declares kind '{}' but '{}' was requested",
                    k.name(),
                    kind.name()
                )));
            }
        }
        let p = &self.physics;
        if p.spacings.is_empty() {
            return Err(invalid("physics.spacings is empty"));
        }
        for &d in &p.spacings {
            if !(d.is_finite() && d > 0.0) {
                return Err(invalid(format!("spacing must be positive, got {d}")));
            }
        }
        if p.gammas.is_empty() {
            return Err(invalid("physics.gammas is empty"));
        }
        for &g in &p.gammas {
            p.params(g).validate()?;
        }

        let s = &self.sweep;
        if s.n_atoms.is_some() && s.n_range.is_some() {
            return Err(invalid("give either sweep.n_atoms or sweep.n_range, not both"));
        }
        if let Some([lo, hi]) = s.n_range {
            if lo == 0 || hi < lo {
                return Err(invalid(format!("sweep.n_range [{lo}, {hi}] is empty or starts at 0")));
            }
        }
        let ns = s.atom_numbers();
        if ns.is_empty() {
            return Err(invalid("sweep.n_atoms is empty"));
        }
        let all_n = ns.iter().copied().chain(s.cases.iter().flatten().map(|c| c.n_atoms));
        for n in all_n {
            if n == 0 || n > MAX_ATOMS {
                return Err(invalid(format!("atom number {n} outside 1..={MAX_ATOMS}")));
            }
        }
        for c in s.cases.iter().flatten() {
            if !(c.spacing.is_finite() && c.spacing > 0.0) {
                return Err(invalid(format!("case spacing must be positive, got {}", c.spacing)));
            }
        }
        if let Some(dd) = &s.delta_d {
            if dd.len() != p.spacings.len() {
                return Err(invalid(format!(
                    "sweep.delta_d has {} entries for {} spacings",
                    dd.len(),
                    p.spacings.len()
                )));
            }
            if let Some(&bad) = dd.iter().find(|x| !x.is_finite()) {
                return Err(invalid(format!("sweep.delta_d entry {bad} is not finite")));
            }
            for (&d, &x) in p.spacings.iter().zip(dd) {
                if d + x <= 0.0 {
                    return Err(invalid(format!("spacing {d} displaced by {x} is not positive")));
                }
            }
        }
        if !(s.half_window.is_finite() && s.half_window >= 10.0) {
            return Err(invalid(format!(
                "sweep.half_window must be at least 10 linewidths, got {}",
                s.half_window
            )));
        }
        if s.points < 400 || s.points > MAX_GRID {
            return Err(invalid(format!("sweep.points must lie in 400..={MAX_GRID}, got {}", s.points)));
        }
        if let Some([lo, hi]) = s.detuning {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(invalid(format!("sweep.detuning [{lo}, {hi}] is not an increasing window")));
            }
        }
        if s.measurements == 0 {
            return Err(invalid("sweep.measurements must be at least 1"));
        }

        let d = &self.disorder;
        if !(d.fraction.is_finite() && (0.0..0.5).contains(&d.fraction)) {
            return Err(invalid(format!("disorder.fraction must lie in [0, 0.5), got {}", d.fraction)));
        }
        if kind == ExperimentKind::DisorderEnsemble && !(2..=MAX_REALIZATIONS).contains(&d.realizations) {
            return Err(invalid(format!(
                "disorder.realizations must lie in 2..={MAX_REALIZATIONS}, got {}",
                d.realizations
            )));
        }
        if let Some(names) = &self.output.names {
            for name in names {
                let ok = !name.is_empty()
                    && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.');
                if !ok {
                    return Err(invalid(format!("output name '{name}' is not a plain file stem")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let cfg = ExperimentConfig::from_toml(
            r#"
            kind = "decay_scaling"
            [physics]
            spacings = [0.25, 0.1, 0.02]
            gammas = [0.0, 0.1]
            [sweep]
            n_range = [8, 100]
            [output]
            names = ["fig1b", "fig1c"]
            "#,
        )
        .unwrap();
        cfg.validate(ExperimentKind::DecayScaling).unwrap();
        assert_eq!(cfg.sweep.atom_numbers().len(), 93);
        assert_eq!(cfg.cases().len(), 279);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(ExperimentConfig::from_toml("[physics]\nspacing = 0.25\n").is_err());
        assert!(ExperimentConfig::from_toml("colour = 1\n").is_err());
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            "[physics]\nspacings = [-0.1]\n",
            "[physics]\ngammas = [-1.0]\n",
            "[sweep]\nn_atoms = [0]\n",
            "[sweep]\nn_atoms = [3]\nn_range = [1, 4]\n",
            "[sweep]\npoints = 10\n",
            "[sweep]\ndelta_d = [1e-3, 1e-3]\n",
            "[disorder]\nfraction = 0.7\n",
            "[output]\nnames = [\"../x\"]\n",
        ];
        for text in bad {
            let cfg = ExperimentConfig::from_toml(text).unwrap();
            assert!(cfg.validate(ExperimentKind::Shift).is_err(), "{text}");
        }
    }

    #[test]
    fn kind_must_match_the_request() {
        let cfg = ExperimentConfig::from_toml("kind = \"shift\"\n").unwrap();
        assert!(cfg.validate(ExperimentKind::Shift).is_ok());
        assert!(cfg.validate(ExperimentKind::Spectrum).is_err());
    }

    #[test]
    fn default_displacements_follow_the_spacing() {
        let cfg = ExperimentConfig::from_toml("[physics]\nspacings = [0.25, 0.02]\n").unwrap();
        assert_eq!(cfg.delta_d(), vec![-1e-3, -1e-5]);
    }
}
