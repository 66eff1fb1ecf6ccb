//! Closed-form level formulas: 3D and 2D hydrogen, the Madelung-consistent
//! screened spectrum, and the quantized fish-eye coupling laws that serve as
//! analytic oracles for the shooting solver.
//!
//! Units are Hartree-like (ħ = m = 1) with the electron charge configurable;
//! the screened-spectrum constant w is user-settable and defaults to 1, so
//! only ordering, degeneracy and Z-scaling of those levels are meaningful.

use crate::error::{Error, Result};
use crate::sturm::FisheyeGamma;

/// Radial/orbital index pair; the principal quantum number is derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LevelIndex {
    pub n_r: u32,
    pub l: u32,
}

impl LevelIndex {
    pub fn new(n_r: u32, l: u32) -> Self {
        Self { n_r, l }
    }

    /// n̂ = n_r + l + 1.
    pub fn n_hat(&self) -> u32 {
        self.n_r + self.l + 1
    }
}

/// Charge and unit choices shared by the level formulas.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumParams {
    pub z: u32,
    pub e: f64,
    pub w: f64,
}

impl SpectrumParams {
    pub fn new(z: u32, e: f64, w: f64) -> Result<Self> {
        if z < 1 {
            return Err(Error::Domain(format!("atomic number Z ≥ 1 (got {z})")));
        }
        if w <= 0.0 {
            return Err(Error::Domain(format!("spectrum constant w > 0 (got {w})")));
        }
        Ok(Self { z, e, w })
    }

    pub fn hydrogen(z: u32) -> Self {
        Self { z, e: 1.0, w: 1.0 }
    }

    fn ze2(&self) -> f64 {
        f64::from(self.z) * self.e * self.e
    }
}

impl Default for SpectrumParams {
    fn default() -> Self {
        Self::hydrogen(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumModel {
    Hydrogen3d,
    Hydrogen2d,
    Tietz,
}

/// E_n = -(Ze²)²/(2n²); level n is n²-fold degenerate (spin excluded).
pub fn hydrogen_level_3d(params: &SpectrumParams, n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain(format!(
            "principal quantum number n ≥ 1 (got {n})"
        )));
    }
    let ze2 = params.ze2();
    let nf = f64::from(n);
    Ok(-(ze2 * ze2) / (2.0 * nf * nf))
}

/// 2D spectrum E_l = -(Ze²)²/(l+1/2)².
pub fn hydrogen_level_2d(params: &SpectrumParams, l: u32) -> f64 {
    let ze2 = params.ze2();
    let half = f64::from(l) + 0.5;
    -(ze2 * ze2) / (half * half)
}

/// Screened (Tietz-model) level E = -Z^{7/3} e⁴ / (w (n̂+l)²).
///
/// The energy depends on the index only through n̂+l, so equal-key levels
/// are computed along an identical arithmetic path and compare bit-equal.
pub fn tietz_level(params: &SpectrumParams, idx: LevelIndex) -> f64 {
    tietz_level_by_key(params, idx.n_hat() + idx.l)
}

fn tietz_level_by_key(params: &SpectrumParams, key: u32) -> f64 {
    let kf = f64::from(key);
    let e2 = params.e * params.e;
    -f64::from(params.z).powf(7.0 / 3.0) * e2 * e2 / (params.w * kf * kf)
}

/// Quantized coupling of the zero-energy fish-eye Sturmian problem.
///
/// Derived by substituting u = r^{l+1}(1+r^{2γ})^{-σ} C_{n_r}^{μ}(ξ) with
/// ξ = (1-r^{2γ})/(1+r^{2γ}) into the radial equation:
///  γ = 1  : σ = l+1/2,  μ = l+1,      β = (2N+1)(2N+3), N = n_r + l
///  γ = 1/2: σ = 2l+1,   μ = 2l+3/2,   β = (M+1)(M+2),  M = n_r + 2l
/// The shooting solver is the numerical arbiter for both forms.
pub fn fisheye_coupling_law(gamma: FisheyeGamma, idx: LevelIndex) -> f64 {
    match gamma {
        FisheyeGamma::One => {
            let n = f64::from(idx.n_r + idx.l);
            (2.0 * n + 1.0) * (2.0 * n + 3.0)
        }
        FisheyeGamma::Half => {
            let m = f64::from(idx.n_r + 2 * idx.l);
            (m + 1.0) * (m + 2.0)
        }
    }
}

/// One entry of an energy-ordered level listing.
#[derive(Debug, Clone, Copy)]
pub struct Level {
    pub index: LevelIndex,
    pub energy: f64,
    pub group_key: u32,
}

/// The lowest `count` levels of the chosen model, sorted ascending in
/// energy. Hydrogen models list one entry per level (their quantum number
/// alone fixes the energy); the tietz model lists (n̂, l) orbitals with the
/// Madelung tie-break (equal n̂+l ordered by ascending n̂).
pub fn level_ordering(
    params: &SpectrumParams,
    model: SpectrumModel,
    count: usize,
) -> Result<Vec<Level>> {
    if count < 1 {
        return Err(Error::Domain(format!("level count ≥ 1 (got {count})")));
    }
    let mut out = Vec::with_capacity(count);
    match model {
        SpectrumModel::Hydrogen3d => {
            for n in 1..=count as u32 {
                out.push(Level {
                    index: LevelIndex::new(n - 1, 0),
                    energy: hydrogen_level_3d(params, n)?,
                    group_key: n,
                });
            }
        }
        SpectrumModel::Hydrogen2d => {
            for l in 0..count as u32 {
                out.push(Level {
                    index: LevelIndex::new(0, l),
                    energy: hydrogen_level_2d(params, l),
                    group_key: l + 1,
                });
            }
        }
        SpectrumModel::Tietz => {
            let mut key = 1u32;
            'outer: loop {
                // orbitals with n̂ + l = key, ascending n̂ (l = key - n̂ ≤ n̂-1)
                let n_hat_min = key / 2 + 1;
                for n_hat in n_hat_min..=key {
                    let l = key - n_hat;
                    let idx = LevelIndex::new(n_hat - l - 1, l);
                    out.push(Level {
                        index: idx,
                        energy: tietz_level(params, idx),
                        group_key: key,
                    });
                    if out.len() == count {
                        break 'outer;
                    }
                }
                key += 1;
            }
        }
    }
    Ok(out)
}
