//! Browser bindings. Every export returns a flat `Float64Array` with a fixed
//! stride so the page can plot it without a serialization layer; errors come
//! back as JS exceptions carrying the core error message.

use subrad_core::hamiltonian::{build_h_eff, CouplingParams};
use subrad_core::lattice::{build_positions, LatticeConfig};
use subrad_core::linspace;
use subrad_core::scattering::{locate_feature, ScanPolicy, Scatterer};
use subrad_core::spectral::{eigendecompose, gamma_deep_subwavelength, gamma_ideal, ModeSet, ModeTarget};
use wasm_bindgen::prelude::*;

/// Caps so a slider cannot lock up the tab.
const MAX_ATOMS: usize = 200;
const MAX_POINTS: usize = 4000;

type Out = Result<Vec<f64>, String>;

fn export(r: Out) -> Result<Vec<f64>, JsError> {
    r.map_err(|m| JsError::new(&m))
}

/// Spectrum around the tracked feature, stride 4:
/// `[detuning, T, R, loss]`. The window spans `half_window` decay rates of
/// the targeted mode on each side of its shift.
#[wasm_bindgen]
pub fn spectrum(n: usize, spacing: f64, gamma: f64, half_window: f64, points: usize) -> Result<Vec<f64>, JsError> {
    export(spectrum_impl(n, spacing, gamma, half_window, points))
}

/// Collective modes sorted by decay, stride 2: `[shift, decay]`.
#[wasm_bindgen]
pub fn modes(n: usize, spacing: f64, gamma: f64) -> Result<Vec<f64>, JsError> {
    export(modes_impl(n, spacing, gamma))
}

/// Smallest decay rate for `N = n_min..=n_max`, stride 4:
/// `[N, numeric, ideal closed form, deep-subwavelength closed form]`.
/// A closed form outside its regime is `NaN`.
#[wasm_bindgen]
pub fn decay_scaling(spacing: f64, gamma: f64, n_min: usize, n_max: usize) -> Result<Vec<f64>, JsError> {
    export(decay_scaling_impl(spacing, gamma, n_min, n_max))
}

/// `[center, fwhm]` of the tracked feature.
#[wasm_bindgen]
pub fn feature(n: usize, spacing: f64, gamma: f64) -> Result<Vec<f64>, JsError> {
    export(feature_impl(n, spacing, gamma))
}

fn check_atoms(n: usize) -> Result<(), String> {
    if n == 0 || n > MAX_ATOMS {
        return Err(format!("N must be in 1..={MAX_ATOMS}, got {n}"));
    }
    Ok(())
}

fn mode_set(n: usize, spacing: f64, p: &CouplingParams) -> Result<ModeSet, String> {
    check_atoms(n)?;
    let pos = build_positions(&LatticeConfig::uniform(n, spacing)).map_err(|e| e.to_string())?;
    let h = build_h_eff(&pos, p).map_err(|e| e.to_string())?;
    eigendecompose(&h).map_err(|e| e.to_string())
}

fn spectrum_impl(n: usize, spacing: f64, gamma: f64, half_window: f64, points: usize) -> Out {
    if !(2..=MAX_POINTS).contains(&points) || !(half_window > 0.0) {
        return Err(format!("need 2..={MAX_POINTS} points and a positive window"));
    }
    let p = CouplingParams::new(gamma);
    let set = mode_set(n, spacing, &p)?;
    let m = set.select(ModeTarget::for_spacing(spacing));
    let s = Scatterer::from_config(&LatticeConfig::uniform(n, spacing), p).map_err(|e| e.to_string())?;
    let w = half_window * m.decay.max(1e-9);
    let mut out = Vec::with_capacity(4 * points);
    for x in linspace(m.shift - w, m.shift + w, points) {
        let a = s.amplitudes(x).map_err(|e| e.to_string())?;
        out.extend([x, a.transmission(), a.reflection(), a.loss()]);
    }
    Ok(out)
}

fn modes_impl(n: usize, spacing: f64, gamma: f64) -> Out {
    let set = mode_set(n, spacing, &CouplingParams::new(gamma))?;
    let mut m: Vec<(f64, f64)> = set.modes().iter().map(|m| (m.shift, m.decay)).collect();
    m.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(m.into_iter().flat_map(|(s, g)| [s, g]).collect())
}

fn decay_scaling_impl(spacing: f64, gamma: f64, n_min: usize, n_max: usize) -> Out {
    check_atoms(n_max)?;
    if n_min < 2 || n_min > n_max {
        return Err("need 2 <= n_min <= n_max".into());
    }
    let p = CouplingParams::new(gamma);
    let mut out = Vec::with_capacity(4 * (n_max - n_min + 1));
    for n in n_min..=n_max {
        let numeric = mode_set(n, spacing, &p)?.most_subradiant().decay;
        let ideal = gamma_ideal(n, spacing, 1).unwrap_or(f64::NAN);
        let deep = gamma_deep_subwavelength(n, spacing, 1, &p).map_or(f64::NAN, |g| g.rate);
        out.extend([n as f64, numeric, ideal, deep]);
    }
    Ok(out)
}

fn feature_impl(n: usize, spacing: f64, gamma: f64) -> Out {
    check_atoms(n)?;
    let s = Scatterer::from_config(&LatticeConfig::uniform(n, spacing), CouplingParams::new(gamma))
        .map_err(|e| e.to_string())?;
    let f = locate_feature(&s, ModeTarget::for_spacing(spacing), &ScanPolicy::default()).map_err(|e| e.to_string())?;
    Ok(vec![f.feature.center, f.feature.fwhm])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_conserves_flux() {
        let v = spectrum_impl(10, 0.25, 0.1, 10.0, 51).unwrap();
        assert_eq!(v.len(), 4 * 51);
        for row in v.chunks(4) {
            assert!((row[1] + row[2] + row[3] - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn modes_sorted_by_decay() {
        let v = modes_impl(12, 0.25, 0.1).unwrap();
        assert_eq!(v.len(), 24);
        assert!(v.chunks(2).zip(v.chunks(2).skip(1)).all(|(a, b)| a[1] <= b[1]));
    }

    #[test]
    fn decay_scaling_rows() {
        let v = decay_scaling_impl(0.25, 0.0, 8, 12).unwrap();
        assert_eq!(v.len(), 20);
        assert!(v[3].is_nan());
        assert!((v[1] / v[2] - 1.0).abs() < 0.15);
    }

    #[test]
    fn bad_input_is_an_error() {
        assert!(spectrum_impl(0, 0.25, 0.1, 10.0, 51).is_err());
        assert!(decay_scaling_impl(0.25, 0.0, 9, 8).is_err());
        assert!(feature_impl(MAX_ATOMS + 1, 0.25, 0.1).is_err());
    }
}
