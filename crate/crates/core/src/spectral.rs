//! Collective modes of the effective Hamiltonian.
//!
//! Eigenvalues are written `λ_ξ = J_ξ − iΓ_ξ/2`: `J_ξ` is the collective
//! frequency shift and `Γ_ξ` the decay rate. Modes are returned sorted by
//! decay so index 0 is always the most subradiant one.

use std::f64::consts::PI;

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{build_m_spacing_derivative, fs_decay_kernel, CouplingParams, EffectiveHamiltonian, K0};
use crate::lattice::AtomPositions;

/// Relative residual bound every returned eigenpair must satisfy.
pub const RESIDUAL_GATE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveMode {
    pub shift: f64,
    pub decay: f64,
    /// Right eigenvector with unit 2-norm; largest component real positive.
    pub vector: Vec<Complex64>,
    /// `‖H v − λ v‖₂`.
    pub residual: f64,
}

impl CollectiveMode {
    pub fn eigenvalue(&self) -> Complex64 {
        Complex64::new(self.shift, -0.5 * self.decay)
    }
}

#[derive(Debug, Clone)]
pub struct ModeSet {
    modes: Vec<CollectiveMode>,
}

impl ModeSet {
    pub fn modes(&self) -> &[CollectiveMode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn most_subradiant(&self) -> &CollectiveMode {
        &self.modes[0]
    }

    /// Mode with the smallest collective shift `J`.
    pub fn lowest_shift(&self) -> &CollectiveMode {
        self.modes
            .iter()
            .min_by(|a, b| a.shift.total_cmp(&b.shift))
            .expect("mode set is never empty")
    }

    pub fn select(&self, target: ModeTarget) -> &CollectiveMode {
        match target {
            ModeTarget::MostSubradiant => self.most_subradiant(),
            ModeTarget::LowestShift => self.lowest_shift(),
        }
    }

    pub fn eigenvalue_sum(&self) -> Complex64 {
        self.modes.iter().map(CollectiveMode::eigenvalue).sum()
    }

    pub fn decay_sum(&self) -> f64 {
        self.modes.iter().map(|m| m.decay).sum()
    }
}

/// Which collective mode a spectral feature is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeTarget {
    /// Smallest decay rate.
    MostSubradiant,
    /// Smallest shift: the leftmost (band-edge) mode of a deep-subwavelength array.
    LowestShift,
}

impl ModeTarget {
    /// Below λ/10 the most subradiant state sits at the lower band edge and
    /// the leftmost feature is tracked; above it the minimum-decay mode is.
    pub fn for_spacing(spacing: f64) -> Self {
        if spacing < 0.1 {
            ModeTarget::LowestShift
        } else {
            ModeTarget::MostSubradiant
        }
    }
}

/// Guided and free-space parts of one mode's decay rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecaySplit {
    pub guided: f64,
    pub free_space: f64,
    /// `−2 Im⟨φ|H_eff|φ⟩` with the normalized right eigenvector.
    pub total: f64,
}

/// All `N` eigenpairs of H_eff, residual-gated and sorted by decay.
pub fn eigendecompose(h: &EffectiveHamiltonian) -> Result<ModeSet> {
    let m = h.matrix();
    let n = h.dim();
    let evd = m
        .eigen()
        .map_err(|e| Error::EigenSolver(format!("{e:?}")))?;
    let values = evd.S().column_vector();
    let vectors = evd.U();
    let bound = RESIDUAL_GATE * h.norm().max(f64::MIN_POSITIVE);

    let mut modes = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = values[k];
        let mut v: Vec<Complex64> = (0..n).map(|i| vectors[(i, k)]).collect();
        normalize_with_phase(&mut v);
        let residual = residual(m, lambda, &v);
        if !(residual <= bound) {
            return Err(Error::Residual {
                index: k,
                residual,
                bound,
            });
        }
        modes.push(CollectiveMode {
            shift: lambda.re,
            decay: -2.0 * lambda.im,
            vector: v,
            residual,
        });
    }

    let pos = h.positions();
    let spacing = nominal_spacing(pos);
    modes.sort_by(|a, b| {
        a.decay
            .total_cmp(&b.decay)
            .then(a.shift.total_cmp(&b.shift))
            .then_with(|| {
                let xa = ansatz_overlap(a, pos, spacing).0;
                let xb = ansatz_overlap(b, pos, spacing).0;
                xa.cmp(&xb)
            })
    });
    Ok(ModeSet { modes })
}

fn normalize_with_phase(v: &mut [Complex64]) {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = if pivot.norm() > 0.0 {
        pivot.conj() / pivot.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    for c in v.iter_mut() {
        *c = *c * phase / norm;
    }
}

fn residual(m: &Mat<Complex64>, lambda: Complex64, v: &[Complex64]) -> f64 {
    let n = v.len();
    let mut acc = 0.0;
    for i in 0..n {
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..n {
            row += m[(i, j)] * v[j];
        }
        acc += (row - lambda * v[i]).norm_sqr();
    }
    acc.sqrt()
}

/// Mean nearest-neighbour distance, i.e. `d` for a lattice drawn around `j·d`.
pub fn nominal_spacing(pos: &AtomPositions) -> f64 {
    let z = pos.as_slice();
    if z.len() < 2 {
        return z.first().copied().unwrap_or(1.0).abs().max(f64::MIN_POSITIVE);
    }
    (z[z.len() - 1] - z[0]) / (z.len() - 1) as f64
}

/// Splits a mode's decay into the guided part `Γ_1D|Σ_j c_j e^{ik₀z_j}|²`
/// and the free-space part `γ Σ_jl c_j* c_l K_fs(k₀|z_j − z_l|)`.
///
/// The guided expression counts one propagation direction; it equals the
/// two-sided emission for mirror-symmetric modes, which is what the
/// `guided + free_space = total` identity relies on.
pub fn decay_split(mode: &CollectiveMode, pos: &AtomPositions, params: &CouplingParams) -> DecaySplit {
    let z = pos.as_slice();
    let c = &mode.vector;
    let amplitude: Complex64 = c
        .iter()
        .zip(z)
        .map(|(cj, zj)| cj * Complex64::from_polar(1.0, K0 * zj))
        .sum();
    let guided = params.gamma_1d * amplitude.norm_sqr();

    let mut fs = Complex64::new(0.0, 0.0);
    for (j, (cj, zj)) in c.iter().zip(z).enumerate() {
        for (l, (cl, zl)) in c.iter().zip(z).enumerate() {
            let k = if j == l { 1.0 } else { fs_decay_kernel(K0 * (zj - zl).abs()) };
            fs += cj.conj() * cl * k;
        }
    }
    let free_space = params.gamma_fs * fs.re;

    let h = crate::hamiltonian::build_h_eff(pos, params)
        .expect("positions and params already validated by the caller");
    let m = h.matrix();
    let mut expectation = Complex64::new(0.0, 0.0);
    for j in 0..c.len() {
        for l in 0..c.len() {
            expectation += c[j].conj() * m[(j, l)] * c[l];
        }
    }
    DecaySplit {
        guided,
        free_space,
        total: -2.0 * expectation.im,
    }
}

/// Ideal-waveguide estimate of the `ξ`-th subradiant decay rate, in Γ_1D:
/// `(1/2)(π²ξ²/N³) sin²(k₀d/2)/cos⁴(k₀d/2)`.
pub fn gamma_ideal(n_atoms: usize, spacing: f64, xi: usize) -> Result<f64> {
    if n_atoms < 2 {
        return Err(Error::OutOfRegime(format!("needs N >= 2, got {n_atoms}")));
    }
    if xi < 1 {
        return Err(Error::OutOfRegime("mode index starts at 1".into()));
    }
    if !(spacing > 0.0 && spacing < 0.5) {
        return Err(Error::OutOfRegime(format!(
            "needs 0 < d < λ/2, got d = {spacing}λ"
        )));
    }
    let half = 0.5 * K0 * spacing;
    let (s, c) = half.sin_cos();
    let n = n_atoms as f64;
    let xi = xi as f64;
    Ok(0.5 * PI * PI * xi * xi / (n * n * n) * s * s / (c * c * c * c))
}

/// Deep-subwavelength estimate together with the boundary phase `θ_{N+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeepSubwavelengthRate {
    pub rate: f64,
    /// `θ_{N+1} = (N+1)k₀d`.
    pub theta: f64,
}

/// Parity-resolved estimate
/// `π²ξ²/(N+1)³ · {(Γ_1D/4)[1 + (−1)^{N+1} cos θ] + (γ/4)[1 + (−1)^{N+1} K_fs(θ)]}`.
///
/// Valid for `d ≪ λ`; spacings above λ/10 are rejected and above λ/20 a
/// warning is logged.
pub fn gamma_deep_subwavelength(
    n_atoms: usize,
    spacing: f64,
    xi: usize,
    params: &CouplingParams,
) -> Result<DeepSubwavelengthRate> {
    if n_atoms < 2 {
        return Err(Error::OutOfRegime(format!("needs N >= 2, got {n_atoms}")));
    }
    if xi < 1 {
        return Err(Error::OutOfRegime("mode index starts at 1".into()));
    }
    if !(spacing > 0.0 && spacing <= 0.1) {
        return Err(Error::OutOfRegime(format!(
            "deep-subwavelength formula needs d <= 0.1λ, got {spacing}λ"
        )));
    }
    if spacing > 0.05 {
        log::debug!("deep-subwavelength formula used at d = {spacing}λ > 0.05λ");
    }
    let np1 = (n_atoms + 1) as f64;
    let theta = np1 * K0 * spacing;
    // (−1)^{N+1}
    let sign = if n_atoms % 2 == 1 { 1.0 } else { -1.0 };
    let guided = 0.25 * params.gamma_1d * (1.0 + sign * theta.cos());
    let free = 0.25 * params.gamma_fs * (1.0 + sign * fs_decay_kernel(theta));
    let xi = xi as f64;
    Ok(DeepSubwavelengthRate {
        rate: PI * PI * xi * xi / (np1 * np1 * np1) * (guided + free),
        theta,
    })
}

/// First-order response `∂λ/∂d` of one eigenvalue to a uniform dilation.
///
/// `H` is complex symmetric, so the left eigenvector is the transpose of the
/// right one and `∂λ = vᵀ(∂H)v / vᵀv`.
pub fn eigenvalue_spacing_derivative(
    mode: &CollectiveMode,
    pos: &AtomPositions,
    params: &CouplingParams,
    spacing: f64,
) -> Result<Complex64> {
    // M = i(H − Δ) so ∂H = −i ∂M
    let dm = build_m_spacing_derivative(pos, params, mode.shift, spacing)?;
    let v = &mode.vector;
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = Complex64::new(0.0, 0.0);
    for j in 0..v.len() {
        den += v[j] * v[j];
        for l in 0..v.len() {
            num += v[j] * dm[(j, l)] * v[l];
        }
    }
    if den.norm() < 1e-12 {
        return Err(Error::EigenSolver("self-orthogonal eigenvector at an exceptional point".into()));
    }
    Ok(-Complex64::i() * num / den)
}

/// Where the minimum-decay mode sits in the shift ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubradiantLocation {
    /// Rank (0-based) of the most subradiant mode when modes are ordered by `J`.
    pub shift_rank: usize,
    /// Whether it is also the mode with the smallest `J`.
    pub at_lower_edge: bool,
    /// Whether the lower-edge placement is expected at this spacing (d < λ/10).
    pub edge_expected: bool,
}

pub fn most_subradiant_location(modes: &ModeSet, spacing: f64) -> Result<SubradiantLocation> {
    if modes.len() < 3 {
        return Err(Error::OutOfRegime(format!(
            "band-edge diagnostics need N >= 3, got {}",
            modes.len()
        )));
    }
    let target = modes.most_subradiant();
    let shift_rank = modes
        .modes()
        .iter()
        .filter(|m| m.shift < target.shift)
        .count();
    Ok(SubradiantLocation {
        shift_rank,
        at_lower_edge: shift_rank == 0,
        edge_expected: spacing < 0.1,
    })
}

/// Standing-wave ansatz `√(2/(N+1)) sin(πξj/(N+1)) e^{ik z_j}` on the band-edge
/// carrier `k = π/d`, renormalized on the actual positions.
pub fn band_edge_ansatz(pos: &AtomPositions, spacing: f64, xi: usize) -> Vec<Complex64> {
    let z = pos.as_slice();
    let n = z.len();
    let k = PI / spacing;
    let mut v: Vec<Complex64> = z
        .iter()
        .enumerate()
        .map(|(idx, zj)| {
            let j = (idx + 1) as f64;
            let envelope = (PI * xi as f64 * j / (n + 1) as f64).sin();
            Complex64::from_polar(envelope, k * zj)
        })
        .collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|c| *c /= norm);
    }
    v
}

/// Best-matching ansatz index `ξ` and its overlap `|⟨ansatz|φ⟩|`.
pub fn ansatz_overlap(mode: &CollectiveMode, pos: &AtomPositions, spacing: f64) -> (usize, f64) {
    let n = pos.len();
    let mut best = (1, -1.0);
    for xi in 1..=n {
        let a = band_edge_ansatz(pos, spacing, xi);
        let ov: Complex64 = a.iter().zip(&mode.vector).map(|(x, y)| x.conj() * y).sum();
        if ov.norm() > best.1 + 1e-12 {
            best = (xi, ov.norm());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::build_h_eff;
    use crate::lattice::{build_positions, LatticeConfig};

    fn modes_for(n: usize, d: f64, gamma: f64) -> (AtomPositions, EffectiveHamiltonian, ModeSet) {
        let pos = build_positions(&LatticeConfig::uniform(n, d)).unwrap();
        let h = build_h_eff(&pos, &CouplingParams::new(gamma)).unwrap();
        let modes = eigendecompose(&h).unwrap();
        (pos, h, modes)
    }

    #[test]
    fn single_atom_mode() {
        let (_, _, modes) = modes_for(1, 0.25, 0.1);
        let m = modes.most_subradiant();
        assert!(m.shift.abs() < 1e-15);
        assert!((m.decay - 1.1).abs() < 1e-14);
    }

    #[test]
    fn quarter_wave_pair_closed_form() {
        // eigenvalues of [[-i/2, 1/2], [1/2, -i/2]] are ±1/2 − i/2
        let (_, _, modes) = modes_for(2, 0.25, 0.0);
        let mut shifts: Vec<f64> = modes.modes().iter().map(|m| m.shift).collect();
        shifts.sort_by(f64::total_cmp);
        assert!((shifts[0] + 0.5).abs() < 1e-12);
        assert!((shifts[1] - 0.5).abs() < 1e-12);
        for m in modes.modes() {
            assert!((m.decay - 1.0).abs() < 1e-12);
        }
    }

    /// Roots of the characteristic cubic λ³ + aλ² + bλ + c by Durand–Kerner.
    fn cubic_roots(h: &Mat<Complex64>) -> Vec<Complex64> {
        let m = |i: usize, j: usize| h[(i, j)];
        let tr = m(0, 0) + m(1, 1) + m(2, 2);
        let minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)
            + m(1, 1) * m(2, 2)
            - m(1, 2) * m(2, 1);
        let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
            - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
        let p = |x: Complex64| x * x * x - tr * x * x + minors * x - det;
        let mut roots = vec![
            Complex64::new(0.4, 0.9),
            Complex64::new(0.4, 0.9).powu(2),
            Complex64::new(0.4, 0.9).powu(3),
        ];
        let scale = 1.0 + tr.norm();
        for r in roots.iter_mut() {
            *r *= scale;
        }
        for _ in 0..500 {
            for i in 0..3 {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..3 {
                    if i != j {
                        denom *= roots[i] - roots[j];
                    }
                }
                let step = p(roots[i]) / denom;
                roots[i] -= step;
            }
        }
        roots
    }

    fn assert_matches_roots(modes: &ModeSet, roots: &[Complex64], tol: f64) {
        for m in modes.modes() {
            let best = roots
                .iter()
                .map(|r| (r - m.eigenvalue()).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(best < tol, "eigenvalue {} unmatched ({best:e})", m.eigenvalue());
        }
    }

    #[test]
    fn three_atom_eigenvalues_match_cubic_roots() {
        for (d, gamma, frac, seed) in [(0.25, 0.0, 0.0, 0), (0.02, 0.1, 0.0, 0), (0.13, 0.3, 0.2, 9), (0.07, 1.0, 0.4, 2)] {
            let pos = build_positions(&LatticeConfig::uniform(3, d).with_disorder(frac, seed)).unwrap();
            let h = build_h_eff(&pos, &CouplingParams::new(gamma)).unwrap();
            let modes = eigendecompose(&h).unwrap();
            let roots = cubic_roots(h.matrix());
            assert_matches_roots(&modes, &roots, 1e-9 * (1.0 + h.norm()));
        }
    }

    #[test]
    fn lossless_three_atoms_location_matches_cubic() {
        let (_, h, modes) = modes_for(3, 0.1, 0.0);
        let roots = cubic_roots(h.matrix());
        assert_matches_roots(&modes, &roots, 1e-9);
        let min_decay = roots.iter().map(|r| -2.0 * r.im).fold(f64::INFINITY, f64::min);
        assert!((modes.most_subradiant().decay - min_decay).abs() < 1e-9);
        let loc = most_subradiant_location(&modes, 0.1).unwrap();
        let below = roots
            .iter()
            .filter(|r| r.re < modes.most_subradiant().shift - 1e-12)
            .count();
        assert_eq!(loc.shift_rank, below);
    }

    #[test]
    fn modes_are_sorted_normalized_and_gated() {
        let (_, h, modes) = modes_for(25, 0.25, 0.1);
        assert_eq!(modes.len(), 25);
        for w in modes.modes().windows(2) {
            assert!(w[0].decay <= w[1].decay);
        }
        for m in modes.modes() {
            let norm: f64 = m.vector.iter().map(|c| c.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            assert!(m.residual <= RESIDUAL_GATE * h.norm());
            assert!(m.decay > 0.0);
        }
        let trace = h.trace();
        assert!((modes.decay_sum() + 2.0 * trace.im).abs() < 1e-8 * trace.norm());
        assert!((modes.eigenvalue_sum() - trace).norm() < 1e-9 * trace.norm());
    }

    #[test]
    fn split_of_single_atom() {
        let (pos, _, modes) = modes_for(1, 0.25, 0.1);
        let s = decay_split(modes.most_subradiant(), &pos, &CouplingParams::new(0.1));
        assert!((s.guided - 1.0).abs() < 1e-14);
        assert!((s.free_space - 0.1).abs() < 1e-14);
    }

    #[test]
    fn lossless_split_tracks_eigen_decay() {
        let params = CouplingParams::new(0.0);
        let mut prev = f64::INFINITY;
        for n in [10usize, 20, 40] {
            let (pos, _, modes) = modes_for(n, 0.1, 0.0);
            let m = modes.most_subradiant();
            let s = decay_split(m, &pos, &params);
            assert_eq!(s.free_space, 0.0);
            let rel = (s.guided / m.decay - 1.0).abs();
            assert!(rel < 0.05, "N={n}: rel {rel}");
            assert!(rel <= prev + 1e-9);
            prev = rel;
        }
    }

    #[test]
    fn phase_matched_mode_is_superradiant() {
        let pos = build_positions(&LatticeConfig::uniform(6, 0.25)).unwrap();
        let n = pos.len() as f64;
        let vector: Vec<Complex64> = pos
            .as_slice()
            .iter()
            .map(|z| Complex64::from_polar(1.0 / n.sqrt(), -K0 * z))
            .collect();
        let mode = CollectiveMode {
            shift: 0.0,
            decay: 0.0,
            vector,
            residual: 0.0,
        };
        let s = decay_split(&mode, &pos, &CouplingParams::new(0.0));
        assert!((s.guided - n).abs() < 1e-12);
    }

    #[test]
    fn split_sums_to_expectation_for_symmetric_modes() {
        for (n, d) in [(10usize, 0.25), (11, 0.02), (16, 0.1)] {
            let params = CouplingParams::new(0.1);
            let (pos, _, modes) = modes_for(n, d, 0.1);
            for m in modes.modes().iter().take(4) {
                let s = decay_split(m, &pos, &params);
                let sum = s.guided + s.free_space;
                assert!((sum - s.total).abs() <= 1e-8 * s.total.abs().max(1e-12), "{sum} vs {}", s.total);
            }
        }
    }

    #[test]
    fn ideal_formula_values() {
        let g = gamma_ideal(10, 0.25, 1).unwrap();
        assert!((g - PI * PI / 1000.0).abs() < 1e-15);
        assert!((g - 9.8696e-3).abs() < 1e-7);
        let ratio = gamma_ideal(30, 0.2, 1).unwrap() / gamma_ideal(30, 0.2, 2).unwrap();
        assert!((ratio - 0.25).abs() < 1e-15);
        let drop = gamma_ideal(12, 0.3, 1).unwrap() / gamma_ideal(24, 0.3, 1).unwrap();
        assert!((drop - 8.0).abs() < 1e-12);
        assert!(gamma_ideal(10, 0.5, 1).is_err());
        assert!(gamma_ideal(1, 0.25, 1).is_err());
    }

    #[test]
    fn ideal_formula_tracks_numerics() {
        let (_, _, m10) = modes_for(10, 0.25, 0.0);
        let rel10 = m10.most_subradiant().decay / gamma_ideal(10, 0.25, 1).unwrap() - 1.0;
        assert!(rel10.abs() < 0.10, "{rel10}");
        let (_, _, m50) = modes_for(50, 0.25, 0.0);
        let rel50 = m50.most_subradiant().decay / gamma_ideal(50, 0.25, 1).unwrap() - 1.0;
        assert!(rel50.abs() < 0.02, "{rel50}");
    }

    #[test]
    fn deep_formula_limits_and_parity() {
        let params = CouplingParams::new(0.0);
        // θ → 0, N odd: (π²/(N+1)³)(Γ_1D/2)
        let r = gamma_deep_subwavelength(9, 1e-9, 1, &params).unwrap();
        assert!((r.rate - PI * PI / 1000.0 * 0.5).abs() < 1e-12);
        // N even at θ → 0: the guided bracket vanishes
        let r = gamma_deep_subwavelength(10, 1e-9, 1, &params).unwrap();
        assert!(r.rate.abs() < 1e-12);
        assert!((r.theta - 11.0 * K0 * 1e-9).abs() < 1e-20);
        // the interference term flips sign under N → N+1
        let p = CouplingParams::new(0.1);
        let bracket = |n: usize| {
            let r = gamma_deep_subwavelength(n, 0.02, 1, &p).unwrap();
            let np1 = (n + 1) as f64;
            r.rate * np1.powi(3) / (PI * PI)
        };
        let theta10 = 11.0 * K0 * 0.02;
        let b10 = bracket(10);
        let flat = 0.25 * (1.0 + 0.1);
        let interference = -0.25 * (theta10.cos() + 0.1 * fs_decay_kernel(theta10));
        assert!((b10 - (flat + interference)).abs() < 1e-14);
        assert!(gamma_deep_subwavelength(10, 0.25, 1, &p).is_err());
    }

    #[test]
    fn deep_subwavelength_subradiant_mode_is_leftmost() {
        let (_, _, modes) = modes_for(10, 0.02, 0.1);
        let loc = most_subradiant_location(&modes, 0.02).unwrap();
        assert!(loc.at_lower_edge && loc.edge_expected);
    }

    #[test]
    fn quarter_wave_subradiant_mode_leaves_the_edge() {
        let (_, _, modes) = modes_for(20, 0.25, 0.1);
        let loc = most_subradiant_location(&modes, 0.25).unwrap();
        assert!(!loc.at_lower_edge);
        assert!(loc.shift_rank > 2 && loc.shift_rank < 18, "rank {}", loc.shift_rank);
        assert!(most_subradiant_location(&modes_for(2, 0.25, 0.1).2, 0.25).is_err());
    }

    #[test]
    fn band_edge_ansatz_captures_the_subradiant_mode() {
        for n in [20usize, 40, 80] {
            let (pos, _, modes) = modes_for(n, 0.25, 0.0);
            let (_, ov) = ansatz_overlap(modes.most_subradiant(), &pos, 0.25);
            assert!(ov >= 0.99, "N={n}: overlap {ov}");
        }
    }

    #[test]
    fn eigenvalue_slope_matches_finite_differences() {
        use crate::hamiltonian::build_h_eff;
        use crate::lattice::{build_positions, LatticeConfig};
        let params = CouplingParams::new(0.1);
        for (n, d) in [(6usize, 0.25), (7, 0.02)] {
            let at = |d: f64| {
                let pos = build_positions(&LatticeConfig::uniform(n, d)).unwrap();
                eigendecompose(&build_h_eff(&pos, &params).unwrap()).unwrap()
            };
            let modes = at(d);
            let mode = modes.lowest_shift();
            let pos = build_positions(&LatticeConfig::uniform(n, d)).unwrap();
            let an = eigenvalue_spacing_derivative(mode, &pos, &params, d).unwrap();
            let h = 1e-7;
            let fd = (at(d + h).lowest_shift().eigenvalue() - at(d - h).lowest_shift().eigenvalue()) / (2.0 * h);
            assert!((an - fd).norm() < 1e-5 * an.norm(), "{an} vs {fd}");
        }
    }
}
