//! One-dimensional emitter geometry.
//!
//! Lengths are in units of the transition wavelength λ. Atoms are indexed
//! `j = 1..=N` and sit nominally at `z_j = j·d`; positional disorder displaces
//! each one by `u·ξ_j` with `ξ_j` uniform on `[-1, 1]` and `u` given as a
//! fraction of the spacing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometry of the array plus the seed for its disorder draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub n_atoms: usize,
    /// Nominal spacing `d / λ`.
    pub spacing: f64,
    /// Disorder amplitude as a fraction of the spacing (`u / d`).
    pub disorder: f64,
    pub seed: u64,
}

impl LatticeConfig {
    /// Clean lattice with no disorder.
    pub fn uniform(n_atoms: usize, spacing: f64) -> Self {
        Self {
            n_atoms,
            spacing,
            disorder: 0.0,
            seed: 0,
        }
    }

    pub fn with_disorder(mut self, fraction: f64, seed: u64) -> Self {
        self.disorder = fraction;
        self.seed = seed;
        self
    }

    /// Same atoms and disorder draw, rescaled to a new nominal spacing.
    ///
    /// Because the displacement amplitude is a fixed fraction of `d`, every
    /// position scales linearly with the spacing for a given seed.
    pub fn with_spacing(mut self, spacing: f64) -> Self {
        self.spacing = spacing;
        self
    }

    pub fn with_atoms(mut self, n_atoms: usize) -> Self {
        self.n_atoms = n_atoms;
        self
    }

    /// Absolute displacement amplitude `u` in units of λ.
    pub fn amplitude(&self) -> f64 {
        self.disorder * self.spacing
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_atoms == 0 {
            return Err(Error::InvalidConfig("n_atoms must be at least 1".into()));
        }
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "spacing must be positive, got {}",
                self.spacing
            )));
        }
        if !(self.disorder.is_finite() && self.disorder >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "disorder amplitude must be nonnegative, got {}",
                self.disorder
            )));
        }
        // u < d/2 keeps neighbours ordered and distinct
        if self.disorder >= 0.5 {
            return Err(Error::InvalidConfig(format!(
                "disorder amplitude must be below half the spacing, got {}·d",
                self.disorder
            )));
        }
        Ok(())
    }
}

/// Ordered atom coordinates `z_1 < z_2 < ... < z_N` in units of λ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomPositions {
    positions: Vec<f64>,
}

impl AtomPositions {
    /// Wraps explicit coordinates, checking they are finite and strictly increasing.
    pub fn new(positions: Vec<f64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidConfig("at least one atom is required".into()));
        }
        if let Some(z) = positions.iter().find(|z| !z.is_finite()) {
            return Err(Error::InvalidConfig(format!("non-finite position {z}")));
        }
        for (j, w) in positions.windows(2).enumerate() {
            if w[1] <= w[0] {
                if w[1] == w[0] {
                    return Err(Error::CoincidentAtoms {
                        first: j + 1,
                        second: j + 2,
                    });
                }
                return Err(Error::InvalidConfig(format!(
                    "positions must be strictly increasing (z_{} = {} >= z_{} = {})",
                    j + 1,
                    w[0],
                    j + 2,
                    w[1]
                )));
            }
        }
        Ok(Self { positions })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Positions shifted by a constant offset.
    pub fn translated(&self, offset: f64) -> Self {
        Self {
            positions: self.positions.iter().map(|z| z + offset).collect(),
        }
    }

    /// Mirror image `z_j -> -z_{N+1-j}`, i.e. injection from the other end.
    pub fn mirrored(&self) -> Self {
        Self {
            positions: self.positions.iter().rev().map(|z| -z).collect(),
        }
    }
}

/// Draws the atom positions `z_j = j·d + u·ξ_j`.
pub fn build_positions(config: &LatticeConfig) -> Result<AtomPositions> {
    config.validate()?;
    let d = config.spacing;
    let nominal = (1..=config.n_atoms).map(|j| j as f64 * d);
    let positions: Vec<f64> = if config.disorder == 0.0 {
        nominal.collect()
    } else {
        let u = config.amplitude();
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        nominal
            .map(|z| z + u * rng.random_range(-1.0..=1.0))
            .collect()
    };
    AtomPositions::new(positions)
}

/// Symmetric matrix of separations `z_jl = |z_j - z_l|`, row-major.
pub fn pairwise_separations(pos: &AtomPositions) -> Vec<Vec<f64>> {
    let z = pos.as_slice();
    z.iter()
        .map(|zj| z.iter().map(|zl| (zj - zl).abs()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_lattice_sits_on_multiples_of_d() {
        let pos = build_positions(&LatticeConfig::uniform(3, 0.25)).unwrap();
        assert_eq!(pos.as_slice(), &[0.25, 0.5, 0.75]);
    }

    #[test]
    fn two_atom_separation() {
        let pos = build_positions(&LatticeConfig::uniform(2, 0.02)).unwrap();
        let s = pairwise_separations(&pos);
        assert!((s[0][1] - 0.02).abs() < 1e-15);
        assert_eq!(s[0][0], 0.0);
    }

    #[test]
    fn separation_matrix_of_a_pair() {
        let pos = AtomPositions::new(vec![0.25, 0.5]).unwrap();
        assert_eq!(pairwise_separations(&pos), vec![vec![0.0, 0.25], vec![0.25, 0.0]]);
    }

    #[test]
    fn end_to_end_separation() {
        let pos = build_positions(&LatticeConfig::uniform(4, 0.1)).unwrap();
        let s = pairwise_separations(&pos);
        assert!((s[0][3] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn disorder_stays_within_amplitude() {
        // 10^4 seeded draws of a 10-atom array
        let base = LatticeConfig::uniform(10, 0.25).with_disorder(0.05, 0);
        let u = base.amplitude();
        for seed in 0..1000u64 {
            let cfg = LatticeConfig { seed, ..base };
            let pos = build_positions(&cfg).unwrap();
            for (j, z) in pos.as_slice().iter().enumerate() {
                let nominal = (j + 1) as f64 * cfg.spacing;
                assert!((z - nominal).abs() <= u * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn seeded_draws_are_reproducible() {
        let cfg = LatticeConfig::uniform(12, 0.02).with_disorder(0.05, 42);
        assert_eq!(build_positions(&cfg).unwrap(), build_positions(&cfg).unwrap());
        let other = build_positions(&LatticeConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(build_positions(&cfg).unwrap(), other);
    }

    #[test]
    fn spacing_rescales_the_whole_draw() {
        let cfg = LatticeConfig::uniform(8, 0.25).with_disorder(0.05, 7);
        let a = build_positions(&cfg).unwrap();
        let b = build_positions(&cfg.with_spacing(0.5)).unwrap();
        for (za, zb) in a.as_slice().iter().zip(b.as_slice()) {
            assert!((2.0 * za - zb).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_invalid_configs() {
        assert!(build_positions(&LatticeConfig::uniform(0, 0.25)).is_err());
        assert!(build_positions(&LatticeConfig::uniform(3, 0.0)).is_err());
        assert!(build_positions(&LatticeConfig::uniform(3, -0.1)).is_err());
        assert!(build_positions(&LatticeConfig::uniform(3, 0.25).with_disorder(0.5, 1)).is_err());
        assert!(build_positions(&LatticeConfig::uniform(3, 0.25).with_disorder(-0.1, 1)).is_err());
    }

    #[test]
    fn explicit_positions_must_increase() {
        assert!(matches!(
            AtomPositions::new(vec![0.1, 0.1]),
            Err(Error::CoincidentAtoms { first: 1, second: 2 })
        ));
        assert!(AtomPositions::new(vec![0.2, 0.1]).is_err());
        assert!(AtomPositions::new(vec![]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn translation_leaves_separations_unchanged(
                n in 1usize..12,
                d in 0.01f64..0.5,
                frac in 0.0f64..0.45,
                seed in any::<u64>(),
                shift in -10.0f64..10.0,
            ) {
                let pos = build_positions(&LatticeConfig::uniform(n, d).with_disorder(frac, seed)).unwrap();
                let a = pairwise_separations(&pos);
                let b = pairwise_separations(&pos.translated(shift));
                for (ra, rb) in a.iter().zip(&b) {
                    for (x, y) in ra.iter().zip(rb) {
                        prop_assert!((x - y).abs() <= 1e-12 * (1.0 + shift.abs()));
                    }
                }
                for j in 0..n {
                    prop_assert_eq!(a[j][j], 0.0);
                    for l in 0..n {
                        prop_assert_eq!(a[j][l], a[l][j]);
                    }
                }
            }

            #[test]
            fn disordered_positions_are_strictly_increasing(
                n in 2usize..30,
                frac in 0.0f64..0.49,
                seed in any::<u64>(),
            ) {
                let pos = build_positions(&LatticeConfig::uniform(n, 0.02).with_disorder(frac, seed)).unwrap();
                prop_assert!(pos.as_slice().windows(2).all(|w| w[1] > w[0]));
            }
        }
    }
}
