//! Dipole-dipole kernels, the effective non-Hermitian Hamiltonian of the
//! single-excitation sector, and the frequency-dependent coupling matrix.
//!
//! Internal units: rates and detunings in Γ_1D, lengths in λ, so the
//! resonant wavenumber is `k₀ = 2π`. Dipoles are perpendicular to the
//! waveguide axis.

use std::f64::consts::PI;

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::AtomPositions;

/// Resonant wavenumber in units of 1/λ.
pub const K0: f64 = 2.0 * PI;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Decay rates and the optional carrier frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    /// Guided-mode decay rate; 1 in internal units.
    pub gamma_1d: f64,
    /// Free-space (nonguided) decay rate γ.
    pub gamma_fs: f64,
    /// ω₀/Γ_1D. `None` is the Markovian limit where the propagation phase is
    /// evaluated at k₀ for every probe frequency.
    pub carrier: Option<f64>,
}

impl Default for CouplingParams {
    fn default() -> Self {
        Self::new(0.0)
    }
}

impl CouplingParams {
    /// Markovian coupling with Γ_1D = 1 and the given free-space rate.
    pub fn new(gamma_fs: f64) -> Self {
        Self {
            gamma_1d: 1.0,
            gamma_fs,
            carrier: None,
        }
    }

    pub fn with_carrier(mut self, omega0_over_gamma: f64) -> Self {
        self.carrier = Some(omega0_over_gamma);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_1d.is_finite() && self.gamma_1d > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "gamma_1d must be positive, got {}",
                self.gamma_1d
            )));
        }
        if !(self.gamma_fs.is_finite() && self.gamma_fs >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "gamma_fs must be nonnegative, got {}",
                self.gamma_fs
            )));
        }
        if let Some(w0) = self.carrier {
            if !(w0.is_finite() && w0 > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "carrier frequency must be positive, got {w0}"
                )));
            }
        }
        Ok(())
    }

    /// Dimensionless phase `k₀d` for a spacing in units of λ.
    pub fn k0d(spacing: f64) -> f64 {
        K0 * spacing
    }

    /// Ratio ω/ω₀ at a detuning; exactly 1 in the Markovian limit.
    pub fn phase_scale(&self, detuning: f64) -> f64 {
        match self.carrier {
            Some(w0) => 1.0 + detuning / w0,
            None => 1.0,
        }
    }
}

/// Shape of the free-space dipole coupling without the γ prefactor and
/// without the propagation phase: `(3/4)[-i/x + 1/x² + i/x³]`.
pub fn free_space_kernel(x: f64) -> Result<Complex64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::KernelDomain(x));
    }
    Ok(free_space_shape(x))
}

#[inline]
fn free_space_shape(x: f64) -> Complex64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let inv3 = inv2 * inv;
    0.75 * Complex64::new(inv2, inv3 - inv)
}

#[inline]
fn free_space_shape_derivative(x: f64) -> Complex64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let inv3 = inv2 * inv;
    let inv4 = inv2 * inv2;
    0.75 * Complex64::new(-2.0 * inv3, inv2 - 3.0 * inv4)
}

/// Free-space decay kernel `(3/2)[sin x/x + cos x/x² − sin x/x³]`.
///
/// Below `x = 0.5` the closed form loses digits to cancellation, so the
/// even power series is summed instead; `K(0) = 1`.
pub fn fs_decay_kernel(x: f64) -> f64 {
    let x = x.abs();
    if x < 0.5 {
        // (3/2) Σ_k (-x²)^k [1/(2k+1)! − 1/(2k+2)! + 1/(2k+3)!]
        let x2 = x * x;
        let mut sum = 0.0;
        let mut power = 1.0;
        for k in 0..12 {
            let f1 = 1.0 / factorial(2 * k + 1);
            let f2 = f1 / (2 * k + 2) as f64;
            let f3 = f2 / (2 * k + 3) as f64;
            let term = power * (f1 - f2 + f3);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            power *= -x2;
        }
        1.5 * sum
    } else {
        let (s, c) = x.sin_cos();
        1.5 * (s / x + c / (x * x) - s / (x * x * x))
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Off-diagonal pair coupling `(Γ_1D/2 + γ·V(x)) e^{i s x}` evaluated at `x = k₀ z`.
#[inline]
fn pair_coupling(params: &CouplingParams, x: f64, phase_scale: f64) -> Complex64 {
    let amp = 0.5 * params.gamma_1d + params.gamma_fs * free_space_shape(x);
    amp * Complex64::from_polar(1.0, phase_scale * x)
}

/// d/dx of [`pair_coupling`].
#[inline]
fn pair_coupling_dx(params: &CouplingParams, x: f64, phase_scale: f64) -> Complex64 {
    let amp = 0.5 * params.gamma_1d + params.gamma_fs * free_space_shape(x);
    let damp = params.gamma_fs * free_space_shape_derivative(x);
    (damp + I * phase_scale * amp) * Complex64::from_polar(1.0, phase_scale * x)
}

/// H_eff in the single-excitation basis `{|e_j⟩}`, rotating frame at ω₀.
#[derive(Debug, Clone)]
pub struct EffectiveHamiltonian {
    matrix: Mat<Complex64>,
    params: CouplingParams,
    positions: AtomPositions,
}

impl EffectiveHamiltonian {
    pub fn matrix(&self) -> &Mat<Complex64> {
        &self.matrix
    }

    pub fn params(&self) -> &CouplingParams {
        &self.params
    }

    pub fn positions(&self) -> &AtomPositions {
        &self.positions
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|j| self.matrix[(j, j)]).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        frobenius(&self.matrix)
    }

    pub fn get(&self, j: usize, l: usize) -> Complex64 {
        self.matrix[(j, l)]
    }
}

pub(crate) fn frobenius(m: &Mat<Complex64>) -> f64 {
    let mut acc = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            acc += m[(i, j)].norm_sqr();
        }
    }
    acc.sqrt()
}

fn check_separation(first: usize, second: usize, z: f64) -> Result<()> {
    if z == 0.0 {
        return Err(Error::CoincidentAtoms {
            first: first + 1,
            second: second + 1,
        });
    }
    Ok(())
}

/// Assembles `H_jl = -i(Γ_1D/2 + V_jl) e^{ik₀z_jl}` with the diagonal fixed to
/// `-i(Γ_1D + γ)/2` (Lamb shift absorbed into ω₀).
pub fn build_h_eff(pos: &AtomPositions, params: &CouplingParams) -> Result<EffectiveHamiltonian> {
    params.validate()?;
    let z = pos.as_slice();
    let n = z.len();
    let diag = Complex64::new(0.0, -0.5 * (params.gamma_1d + params.gamma_fs));
    let mut matrix = Mat::<Complex64>::zeros(n, n);
    for j in 0..n {
        matrix[(j, j)] = diag;
        for l in (j + 1)..n {
            let sep = (z[j] - z[l]).abs();
            check_separation(j, l, sep)?;
            let h = -I * pair_coupling(params, K0 * sep, 1.0);
            matrix[(j, l)] = h;
            matrix[(l, j)] = h;
        }
    }
    Ok(EffectiveHamiltonian {
        matrix,
        params: *params,
        positions: pos.clone(),
    })
}

/// Coupling matrix `M(ω)` of the scattering problem at detuning `Δ = ω − ω₀`.
#[derive(Debug, Clone)]
pub struct CouplingMatrix {
    pub matrix: Mat<Complex64>,
    pub detuning: f64,
}

/// `M_jl = (Γ_1D/2 + V_jl) e^{iωz_jl/c} − iΔ δ_jl`, diagonal `(Γ_1D + γ)/2 − iΔ`.
///
/// With a carrier frequency set, the propagation phase uses `ω = ω₀ + Δ`;
/// the free-space shape stays at k₀. In the Markovian limit
/// `M = i(H_eff − Δ𝟙)`.
pub fn build_m(pos: &AtomPositions, params: &CouplingParams, detuning: f64) -> Result<CouplingMatrix> {
    params.validate()?;
    let z = pos.as_slice();
    let n = z.len();
    let scale = params.phase_scale(detuning);
    let diag = Complex64::new(0.5 * (params.gamma_1d + params.gamma_fs), -detuning);
    let mut matrix = Mat::<Complex64>::zeros(n, n);
    for j in 0..n {
        matrix[(j, j)] = diag;
        for l in (j + 1)..n {
            let sep = (z[j] - z[l]).abs();
            check_separation(j, l, sep)?;
            let m = pair_coupling(params, K0 * sep, scale);
            matrix[(j, l)] = m;
            matrix[(l, j)] = m;
        }
    }
    Ok(CouplingMatrix { matrix, detuning })
}

/// `∂M/∂d` when every position scales with the spacing (`∂z_j/∂d = z_j/d`).
pub fn build_m_spacing_derivative(
    pos: &AtomPositions,
    params: &CouplingParams,
    detuning: f64,
    spacing: f64,
) -> Result<Mat<Complex64>> {
    params.validate()?;
    let z = pos.as_slice();
    let n = z.len();
    let scale = params.phase_scale(detuning);
    let mut out = Mat::<Complex64>::zeros(n, n);
    for j in 0..n {
        for l in (j + 1)..n {
            let sep = (z[j] - z[l]).abs();
            check_separation(j, l, sep)?;
            let dx_dd = K0 * sep / spacing;
            let m = pair_coupling_dx(params, K0 * sep, scale) * dx_dd;
            out[(j, l)] = m;
            out[(l, j)] = m;
        }
    }
    Ok(out)
}
