//! One runner per experiment kind. Rows come out in config order regardless
//! of how many worker threads evaluate them.

use serde_json::json;

use super::config::{ExperimentConfig, ExperimentKind};
use super::table::{Cell, ResultTable};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_h_eff, CouplingParams};
use crate::lattice::{build_positions, LatticeConfig};
use crate::metrology::{cramer_rao_min_dd, fisher_report, fit_power_law, fom, FisherGrid, ScalingFit};
use crate::numerics::linspace;
use crate::scattering::{locate_feature, spectral_shift, Scatterer};
use crate::spectral::{decay_split, eigendecompose, gamma_deep_subwavelength, gamma_ideal};

/// Order-preserving map, parallel when the `parallel` feature is on.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Number of tables a run emits, for validating `output.names`.
pub fn table_count(kind: ExperimentKind, cfg: &ExperimentConfig) -> usize {
    match kind {
        ExperimentKind::DecayScaling => cfg.physics.gammas.len(),
        ExperimentKind::Shift | ExperimentKind::DisorderEnsemble => 2,
        _ => 1,
    }
}

fn default_names(kind: ExperimentKind, cfg: &ExperimentConfig) -> Vec<String> {
    match kind {
        ExperimentKind::DecayScaling => cfg.physics.gammas.iter().map(|g| format!("decay_gamma_{g}")).collect(),
        ExperimentKind::Spectrum => vec!["spectrum".into()],
        ExperimentKind::Shift => vec!["shift".into(), "shift_spectra".into()],
        ExperimentKind::FomSweep => vec!["fom".into()],
        ExperimentKind::FisherSweep => vec!["fisher".into()],
        ExperimentKind::DisorderEnsemble => vec!["disorder".into(), "disorder_summary".into()],
        ExperimentKind::ResolveDd => vec!["resolve_dd".into()],
    }
}

/// Validates `cfg` for `kind` and runs it.
pub fn run(kind: ExperimentKind, cfg: &ExperimentConfig) -> Result<Vec<ResultTable>> {
    cfg.validate(kind)?;
    let names = match &cfg.output.names {
        Some(n) if n.len() != table_count(kind, cfg) => {
            return Err(Error::InvalidConfig(format!(
                "output.names has {} entries but {} emits {} tables",
                n.len(),
                kind.name(),
                table_count(kind, cfg)
            )))
        }
        Some(n) => n.clone(),
        None => default_names(kind, cfg),
    };
    log::info!("running {} with {} case(s)", kind.name(), cfg.cases().len());
    let mut tables = match kind {
        ExperimentKind::DecayScaling => run_decay_scaling(cfg)?,
        ExperimentKind::Spectrum => vec![run_spectrum(cfg)?],
        ExperimentKind::Shift => run_shift_experiment(cfg)?,
        ExperimentKind::FomSweep => vec![run_fom_sweep(cfg)?],
        ExperimentKind::FisherSweep => vec![run_fisher_sweep(cfg)?],
        ExperimentKind::DisorderEnsemble => run_disorder_ensemble(cfg)?,
        ExperimentKind::ResolveDd => vec![run_resolve_dd(cfg)?],
    };
    for (t, name) in tables.iter_mut().zip(names) {
        t.name = name;
    }
    Ok(tables)
}

fn fit_json(fit: &Result<ScalingFit>) -> serde_json::Value {
    match fit {
        Ok(f) => json!({"exponent": f.exponent, "prefactor": f.prefactor, "r_squared": f.r_squared, "n": f.n_range}),
        Err(e) => json!({"error": e.to_string()}),
    }
}

fn parity_json(points: &[(usize, f64)]) -> serde_json::Value {
    let even: Vec<_> = points.iter().copied().filter(|(n, _)| n % 2 == 0).collect();
    let odd: Vec<_> = points.iter().copied().filter(|(n, _)| n % 2 == 1).collect();
    json!({"all": fit_json(&fit_power_law(points)), "even": fit_json(&fit_power_law(&even)), "odd": fit_json(&fit_power_law(&odd))})
}

fn status(r: &Result<impl Sized>) -> Cell {
    match r {
        Ok(_) => "ok".into(),
        Err(e) => format!("error: {e}").into(),
    }
}

#[derive(Debug, Clone, Copy)]
struct Job {
    spacing: f64,
    gamma: f64,
    n: usize,
}

fn jobs(cfg: &ExperimentConfig) -> Vec<Job> {
    let mut out = Vec::new();
    for &spacing in &cfg.physics.spacings {
        for &gamma in &cfg.physics.gammas {
            for n in cfg.sweep.atom_numbers() {
                out.push(Job { spacing, gamma, n });
            }
        }
    }
    out
}

fn params(cfg: &ExperimentConfig, gamma: f64) -> CouplingParams {
    cfg.physics.params(gamma)
}

struct DecayRow {
    shift: f64,
    decay: f64,
    guided: f64,
    free_space: f64,
}

fn decay_row(job: &Job, p: &CouplingParams) -> Result<DecayRow> {
    let pos = build_positions(&LatticeConfig::uniform(job.n, job.spacing))?;
    let modes = eigendecompose(&build_h_eff(&pos, p)?)?;
    let m = modes.most_subradiant();
    let split = decay_split(m, &pos, p);
    Ok(DecayRow {
        shift: m.shift,
        decay: m.decay,
        guided: split.guided,
        free_space: split.free_space,
    })
}

/// Most-subradiant decay rate against both closed forms, one table per γ.
pub fn run_decay_scaling(cfg: &ExperimentConfig) -> Result<Vec<ResultTable>> {
    let mut tables = Vec::new();
    for &gamma in &cfg.physics.gammas {
        let p = params(cfg, gamma);
        let js: Vec<Job> = jobs(cfg).into_iter().filter(|j| j.gamma == gamma).collect();
        let rows = par_map(&js, |j| decay_row(j, &p));
        let mut t = ResultTable::new(
            "",
            &[
                ("spacing", "lambda"),
                ("n_atoms", ""),
                ("gamma_fs", "Gamma_1D"),
                ("shift", "Gamma_1D"),
                ("gamma_min", "Gamma_1D"),
                ("gamma_guided", "Gamma_1D"),
                ("gamma_free_space", "Gamma_1D"),
                ("gamma_ideal", "Gamma_1D"),
                ("gamma_deep", "Gamma_1D"),
                ("rel_dev_ideal", ""),
                ("rel_dev_deep", ""),
                ("status", ""),
            ],
        );
        let mut failures = 0usize;
        for &spacing in &cfg.physics.spacings {
            if spacing > 0.05 && spacing <= 0.1 {
                log::warn!("deep-subwavelength closed form evaluated at d = {spacing}λ, outside d ≤ 0.05λ");
            }
            let mut points = Vec::new();
            for (j, r) in js.iter().zip(&rows).filter(|(j, _)| j.spacing == spacing) {
                let ideal = gamma_ideal(j.n, j.spacing, 1).ok();
                let deep = if j.spacing <= 0.1 && j.n >= 2 {
                    gamma_deep_subwavelength(j.n, j.spacing, 1, &p).ok().map(|g| g.rate)
                } else {
                    None
                };
                let (num, row_tail): (Option<f64>, [Cell; 4]) = match r {
                    Ok(r) => (
                        Some(r.decay),
                        [r.shift.into(), r.decay.into(), r.guided.into(), r.free_space.into()],
                    ),
                    Err(_) => {
                        failures += 1;
                        (None, [Cell::Missing, Cell::Missing, Cell::Missing, Cell::Missing])
                    }
                };
                if let Some(v) = num {
                    points.push((j.n, v));
                }
                let dev = |a: Option<f64>| match (num, a) {
                    (Some(x), Some(y)) if y > 0.0 => Cell::Float(x / y - 1.0),
                    _ => Cell::Missing,
                };
                let [c0, c1, c2, c3] = row_tail;
                t.push(vec![
                    spacing.into(),
                    j.n.into(),
                    gamma.into(),
                    c0,
                    c1,
                    c2,
                    c3,
                    ideal.into(),
                    deep.into(),
                    dev(ideal),
                    dev(deep),
                    status(r),
                ]);
            }
            t.note(&format!("fit_spacing_{spacing}"), parity_json(&points));
        }
        t.note("failed_rows", failures);
        tables.push(t);
    }
    Ok(tables)
}

/// Transmission, reflection and loss spectra around the targeted feature
/// (or across a fixed detuning window).
pub fn run_spectrum(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let js = jobs(cfg);
    let traces = par_map(&js, |j| -> Result<_> {
        let p = params(cfg, j.gamma);
        let s = Scatterer::from_config(&LatticeConfig::uniform(j.n, j.spacing), p)?;
        let grid = match cfg.sweep.detuning {
            Some([lo, hi]) => linspace(lo, hi, cfg.sweep.points),
            None => {
                let target = cfg.physics.target.resolve(j.spacing);
                let modes = eigendecompose(&build_h_eff(s.positions(), &p)?)?;
                let m = modes.select(target);
                let w = cfg.sweep.half_window * m.decay;
                linspace(m.shift - w, m.shift + w, cfg.sweep.points)
            }
        };
        let mut out = Vec::with_capacity(grid.len());
        for &x in &grid {
            out.push((x, s.amplitudes(x)?));
        }
        let feature = locate_feature(&s, cfg.physics.target.resolve(j.spacing), &cfg.sweep.scan_policy()).ok();
        Ok((out, feature))
    });
    let mut t = ResultTable::new(
        "",
        &[
            ("spacing", "lambda"),
            ("gamma_fs", "Gamma_1D"),
            ("n_atoms", ""),
            ("detuning", "Gamma_1D"),
            ("transmission", ""),
            ("reflection_flux", ""),
            ("one_minus_t", ""),
            ("loss", ""),
        ],
    );
    let mut features = Vec::new();
    for (j, tr) in js.iter().zip(traces) {
        let (points, feature) = tr?;
        for (x, a) in points {
            t.push(vec![
                j.spacing.into(),
                j.gamma.into(),
                j.n.into(),
                x.into(),
                a.transmission().into(),
                a.reflection().into(),
                (1.0 - a.transmission()).into(),
                a.loss().into(),
            ]);
        }
        features.push(json!({
            "spacing": j.spacing, "gamma_fs": j.gamma, "n_atoms": j.n,
            "feature": feature.map(|f| json!({"center": f.feature.center, "fwhm": f.feature.fwhm, "kind": f.feature.kind, "height": f.feature.height})),
        }));
    }
    t.note("features", features);
    Ok(t)
}

/// Spectral shift under `d → d + δd`, plus paired spectra for plotting.
pub fn run_shift_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultTable>> {
    let dd = cfg.delta_d();
    let js = jobs(cfg);
    let policy = cfg.sweep.scan_policy();
    let results = par_map(&js, |j| -> Result<_> {
        let i = cfg.physics.spacings.iter().position(|&d| d == j.spacing).unwrap_or(0);
        let delta_d = dd[i];
        let p = params(cfg, j.gamma);
        let lattice = LatticeConfig::uniform(j.n, j.spacing);
        let target = cfg.physics.target.resolve(j.spacing);
        let m = spectral_shift(&lattice, &p, delta_d, target, &policy)?;
        // common window covering both features
        let pad = 10.0 * m.fwhm.max(m.perturbed_fwhm);
        let grid = linspace(
            m.center.min(m.perturbed_center) - pad,
            m.center.max(m.perturbed_center) + pad,
            cfg.sweep.points,
        );
        let a = Scatterer::from_config(&lattice, p)?;
        let b = Scatterer::from_config(&lattice.with_spacing(j.spacing + delta_d), p)?;
        let mut spectra = Vec::with_capacity(grid.len());
        for &x in &grid {
            spectra.push((x, a.amplitudes(x)?.transmission(), b.amplitudes(x)?.transmission()));
        }
        Ok((delta_d, m, spectra))
    });
    let mut t = ResultTable::new(
        "",
        &[
            ("spacing", "lambda"),
            ("delta_d", "lambda"),
            ("gamma_fs", "Gamma_1D"),
            ("n_atoms", ""),
            ("center", "Gamma_1D"),
            ("perturbed_center", "Gamma_1D"),
            ("shift", "Gamma_1D"),
            ("fwhm", "Gamma_1D"),
            ("perturbed_fwhm", "Gamma_1D"),
            ("shift_over_fwhm", ""),
            ("kind", ""),
        ],
    );
    let mut s = ResultTable::new(
        "",
        &[
            ("spacing", "lambda"),
            ("delta_d", "lambda"),
            ("gamma_fs", "Gamma_1D"),
            ("n_atoms", ""),
            ("detuning", "Gamma_1D"),
            ("transmission", ""),
            ("transmission_perturbed", ""),
        ],
    );
    for (j, r) in js.iter().zip(results) {
        let (delta_d, m, spectra) = r?;
        t.push(vec![
            j.spacing.into(),
            delta_d.into(),
            j.gamma.into(),
            j.n.into(),
            m.center.into(),
            m.perturbed_center.into(),
            m.shift.into(),
            m.fwhm.into(),
            m.perturbed_fwhm.into(),
            (m.shift / m.fwhm).into(),
            serde_json::to_value(m.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default().into(),
        ]);
        for (x, ta, tb) in spectra {
            s.push(vec![j.spacing.into(), delta_d.into(), j.gamma.into(), j.n.into(), x.into(), ta.into(), tb.into()]);
        }
    }
    Ok(vec![t, s])
}

/// FOM per atom number with power-law fits.
pub fn run_fom_sweep(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let js = jobs(cfg);
    let policy = cfg.sweep.scan_policy();
    let results = par_map(&js, |j| {
        fom(
            &LatticeConfig::uniform(j.n, j.spacing),
            &params(cfg, j.gamma),
            cfg.physics.target.resolve(j.spacing),
            &policy,
        )
    });
    let mut t = ResultTable::new(
        "",
        &[
            ("spacing", "lambda"),
            ("gamma_fs", "Gamma_1D"),
            ("n_atoms", ""),
            ("fom", "1/lambda"),
            ("slope", "Gamma_1D/lambda"),
            ("fwhm", "Gamma_1D"),
            ("center", "Gamma_1D"),
            ("mode_fom", "1/lambda"),
            ("step", "lambda"),
            ("kind", ""),
        ],
    );
    let mut points: Vec<(f64, f64, Vec<(usize, f64)>, Vec<(usize, f64)>)> = Vec::new();
    for (j, r) in js.iter().zip(results) {
        let f = r?;
        t.push(vec![
            j.spacing.into(),
            j.gamma.into(),
            j.n.into(),
            f.fom.into(),
            f.slope.into(),
            f.feature.fwhm.into(),
            f.feature.center.into(),
            f.mode_fom.into(),
            f.step.into(),
            serde_json::to_value(f.feature.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default().into(),
        ]);
        match points.iter_mut().find(|(d, g, _, _)| *d == j.spacing && *g == j.gamma) {
            Some(entry) => {
                entry.2.push((j.n, f.fom));
                entry.3.push((j.n, f.mode_fom));
            }
            None => points.push((j.spacing, j.gamma, vec![(j.n, f.fom)], vec![(j.n, f.mode_fom)])),
        }
    }
    for (d, g, pts, mode_pts) in points {
        t.note(&format!("fit_spacing_{d}_gamma_{g}"), parity_json(&pts));
        t.note(&format!("mode_fit_spacing_{d}_gamma_{g}"), parity_json(&mode_pts));
    }
    Ok(t)
}

/// Classical and quantum Fisher information per atom number.
pub fn run_fisher_sweep(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let js = jobs(cfg);
    let grid = FisherGrid::default();
    let results = par_map(&js, |j| {
        fisher_report(
            &LatticeConfig::uniform(j.n, j.spacing),
            &params(cfg, j.gamma),
            cfg.physics.target.resolve(j.spacing),
            &grid,
            cfg.sweep.measurements,
        )
    });
    let mut t = ResultTable::new(
        "",
        &[
            ("spacing", "lambda"),
            ("gamma_fs", "Gamma_1D"),
            ("n_atoms", ""),
            ("f_mt", "1/lambda^2"),
            ("f_mt_detuning", "Gamma_1D"),
            ("f_q", "1/lambda^2"),
            ("f_q_detuning", "Gamma_1D"),
            ("f_q_at_f_mt_detuning", "1/lambda^2"),
            ("f_mt_over_f_q", ""),
            ("fom", "1/lambda"),
            ("measurements", ""),
            ("cramer_rao_dd", "lambda"),
        ],
    );
    let mut series: Vec<(f64, f64, Vec<(usize, f64)>, Vec<(usize, f64)>)> = Vec::new();
    for (j, r) in js.iter().zip(results) {
        let f = r?;
        t.push(vec![
            j.spacing.into(),
            j.gamma.into(),
            j.n.into(),
            f.f_mt.into(),
            f.f_mt_detuning.into(),
            f.f_q.into(),
            f.f_q_detuning.into(),
            f.f_q_at_mt.into(),
            (f.f_mt / f.f_q).into(),
            f.fom.into(),
            f.measurements.into(),
            f.cramer_rao_dd.into(),
        ]);
        match series.iter_mut().find(|(d, g, _, _)| *d == j.spacing && *g == j.gamma) {
            Some(e) => {
                e.2.push((j.n, f.f_mt));
                e.3.push((j.n, f.f_q));
            }
            None => series.push((j.spacing, j.gamma, vec![(j.n, f.f_mt)], vec![(j.n, f.f_q)])),
        }
    }
    for (d, g, mt, q) in series {
        t.note(&format!("f_mt_fit_spacing_{d}_gamma_{g}"), parity_json(&mt));
        t.note(&format!("f_q_fit_spacing_{d}_gamma_{g}"), parity_json(&q));
    }
    Ok(t)
}

/// Mean, sample standard deviation, min and max.
pub fn ensemble_stats(values: &[f64]) -> Option<(f64, f64, f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Some((mean, var.sqrt(), min, max))
}

/// FOM over seeded disorder realizations; lost features are censored rows.
pub fn run_disorder_ensemble(cfg: &ExperimentConfig) -> Result<Vec<ResultTable>> {
    let dis = &cfg.disorder;
    let policy = cfg.sweep.scan_policy();
    let mut work = Vec::new();
    for j in jobs(cfg) {
        for k in 0..dis.realizations {
            work.push((j, k, dis.base_seed.wrapping_add(k as u64)));
        }
    }
    let results = par_map(&work, |(j, _, seed)| {
        fom(
            &LatticeConfig::uniform(j.n, j.spacing).with_disorder(dis.fraction, *seed),
            &params(cfg, j.gamma),
            cfg.physics.target.resolve(j.spacing),
            &policy,
        )
    });
    let mut rows = ResultTable::new(
        "",
        &[
            ("spacing", "lambda"),
            ("gamma_fs", "Gamma_1D"),
            ("n_atoms", ""),
            ("disorder_fraction", ""),
            ("realization", ""),
            ("seed", ""),
            ("fom", "1/lambda"),
            ("fwhm", "Gamma_1D"),
            ("center", "Gamma_1D"),
            ("status", ""),
        ],
    );
    let mut summary = ResultTable::new(
        "",
        &[
            ("spacing", "lambda"),
            ("gamma_fs", "Gamma_1D"),
            ("n_atoms", ""),
            ("realizations_ok", ""),
            ("realizations_censored", ""),
            ("fom_mean", "1/lambda"),
            ("fom_std", "1/lambda"),
            ("fom_min", "1/lambda"),
            ("fom_max", "1/lambda"),
            ("relative_spread", ""),
        ],
    );
    let mut censored_total = 0usize;
    let mut means: Vec<(f64, f64, Vec<(usize, f64)>)> = Vec::new();
    for chunk in work.iter().zip(&results).collect::<Vec<_>>().chunks(dis.realizations.max(1)) {
        let j = chunk[0].0 .0;
        let mut ok = Vec::new();
        for ((_, k, seed), r) in chunk {
            match r {
                Ok(f) => {
                    ok.push(f.fom);
                    rows.push(vec![
                        j.spacing.into(),
                        j.gamma.into(),
                        j.n.into(),
                        dis.fraction.into(),
                        (*k).into(),
                        (*seed).into(),
                        f.fom.into(),
                        f.feature.fwhm.into(),
                        f.feature.center.into(),
                        "ok".into(),
                    ]);
                }
                Err(e) => {
                    censored_total += 1;
                    log::warn!("censored realization seed {seed} at N={} d={}: {e}", j.n, j.spacing);
                    rows.push(vec![
                        j.spacing.into(),
                        j.gamma.into(),
                        j.n.into(),
                        dis.fraction.into(),
                        (*k).into(),
                        (*seed).into(),
                        Cell::Missing,
                        Cell::Missing,
                        Cell::Missing,
                        format!("censored: {e}").into(),
                    ]);
                }
            }
        }
        let stats = ensemble_stats(&ok);
        let censored = chunk.len() - ok.len();
        let (mean, std, min, max) = stats.map_or((None, None, None, None), |(a, b, c, d)| (Some(a), Some(b), Some(c), Some(d)));
        summary.push(vec![
            j.spacing.into(),
            j.gamma.into(),
            j.n.into(),
            ok.len().into(),
            censored.into(),
            mean.into(),
            std.into(),
            min.into(),
            max.into(),
            stats.map(|(m, s, _, _)| s / m).into(),
        ]);
        if let Some(m) = mean {
            match means.iter_mut().find(|(d, g, _)| *d == j.spacing && *g == j.gamma) {
                Some(e) => e.2.push((j.n, m)),
                None => means.push((j.spacing, j.gamma, vec![(j.n, m)])),
            }
        }
    }
    for (d, g, pts) in means {
        summary.note(&format!("mean_fit_spacing_{d}_gamma_{g}"), parity_json(&pts));
    }
    summary.note("censored_realizations", censored_total);
    rows.note("censored_realizations", censored_total);
    Ok(vec![rows, summary])
}

/// Cramér–Rao resolution for explicit (N, d) cases.
pub fn run_resolve_dd(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut work = Vec::new();
    for c in cfg.cases() {
        for &gamma in &cfg.physics.gammas {
            work.push((c, gamma));
        }
    }
    let m = cfg.sweep.measurements;
    let results = par_map(&work, |(c, gamma)| {
        fisher_report(
            &LatticeConfig::uniform(c.n_atoms, c.spacing),
            &params(cfg, *gamma),
            cfg.physics.target.resolve(c.spacing),
            &FisherGrid::default(),
            m,
        )
    });
    let mut t = ResultTable::new(
        "",
        &[
            ("n_atoms", ""),
            ("spacing", "lambda"),
            ("gamma_fs", "Gamma_1D"),
            ("f_mt", "1/lambda^2"),
            ("f_q", "1/lambda^2"),
            ("measurements", ""),
            ("dd_from_f_mt", "lambda"),
            ("dd_from_f_q", "lambda"),
        ],
    );
    for ((c, gamma), r) in work.iter().zip(results) {
        let f = r?;
        t.push(vec![
            c.n_atoms.into(),
            c.spacing.into(),
            (*gamma).into(),
            f.f_mt.into(),
            f.f_q.into(),
            m.into(),
            cramer_rao_min_dd(f.f_mt, m)?.into(),
            cramer_rao_min_dd(f.f_q, m)?.into(),
        ]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml(text).unwrap()
    }

    #[test]
    fn decay_scaling_emits_one_table_per_gamma() {
        let c = cfg("[physics]\nspacings = [0.25, 0.02]\ngammas = [0.0, 0.1]\n[sweep]\nn_range = [4, 10]\n[output]\nnames = [\"fig1b\", \"fig1c\"]\n");
        let t = run(ExperimentKind::DecayScaling, &c).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].name, "fig1b");
        assert_eq!(t[1].rows.len(), 14);
        let deep = t[0].column("gamma_deep").unwrap();
        assert!(deep[0].is_none() && deep[7].is_some());
    }

    #[test]
    fn names_must_match_table_count() {
        let c = cfg("[physics]\ngammas = [0.0, 0.1]\n[output]\nnames = [\"only\"]\n");
        assert!(matches!(run(ExperimentKind::DecayScaling, &c), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn zero_displacement_has_zero_shift() {
        let c = cfg("[sweep]\nn_atoms = [6]\ndelta_d = [0.0]\n");
        let t = run(ExperimentKind::Shift, &c).unwrap();
        assert_eq!(t[0].column("shift").unwrap()[0], Some(0.0));
        assert!(t[1].rows.len() >= 400);
    }

    #[test]
    fn clean_ensemble_has_no_spread() {
        let c = cfg("[sweep]\nn_atoms = [6]\n[disorder]\nfraction = 0.0\nrealizations = 3\n");
        let t = run(ExperimentKind::DisorderEnsemble, &c).unwrap();
        assert_eq!(t[0].rows.len(), 3);
        assert_eq!(t[1].column("fom_std").unwrap()[0], Some(0.0));
    }

    #[test]
    fn disordered_ensemble_varies_and_is_reproducible() {
        let c = cfg("[sweep]\nn_atoms = [6]\n[disorder]\nfraction = 0.05\nrealizations = 4\nbase_seed = 9\n");
        let a = run(ExperimentKind::DisorderEnsemble, &c).unwrap();
        let b = run(ExperimentKind::DisorderEnsemble, &c).unwrap();
        assert_eq!(a[0].to_csv().unwrap(), b[0].to_csv().unwrap());
        assert!(a[1].column("fom_std").unwrap()[0].unwrap() > 0.0);
    }

    #[test]
    fn stats_of_a_small_sample() {
        let (m, s, lo, hi) = ensemble_stats(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((m, s, lo, hi), (2.0, 1.0, 1.0, 3.0));
        assert!(ensemble_stats(&[]).is_none());
    }
}
