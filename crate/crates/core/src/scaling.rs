//! Finite-size sweeps of the Floquet-vs-static spectral difference and
//! power-law fits in `1/N`.

use crate::doubling::{compare_spectra, double_poles, static_spectrum_ssh, static_spectrum_wd, EnergySpectrum};
use crate::domain_wall::{
    floquet_wall_quasienergies, build_ssh_wall, build_wd_wall, ssh_weak_wall_site, DomainWallProfile, WallModel,
};
use crate::error::{Error, Result};
use crate::floquet::floquet_quasienergies;
use crate::lattice::{BoundaryCondition, DriveParams};

/// Sizes swept by default, `N = 100, 200, ..., 900`.
pub const DEFAULT_SIZES: [usize; 9] = [100, 200, 300, 400, 500, 600, 700, 800, 900];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalingConfig {
    /// Open chains on both sides.
    Open,
    /// Open chains with a sign flip of `eta` in the middle.
    DomainWall,
    /// Periodic chains; the metric vanishes up to roundoff. Used as a control.
    Periodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StaticTarget {
    Ssh,
    WilsonDirac,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRun {
    pub sizes: Vec<usize>,
    pub metric_values: Vec<f64>,
    pub config: ScalingConfig,
    pub eta: f64,
    pub target: StaticTarget,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawFit {
    /// `a` in `metric = prefactor * N^-a`.
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
}

fn validate_sizes(sizes: &[usize]) -> Result<()> {
    if sizes.is_empty() {
        return Err(Error::TooFewPoints { got: 0, min: 1 });
    }
    if let Some(&n) = sizes.iter().find(|&&n| n % 4 != 0 || n == 0) {
        return Err(Error::NotMultipleOfFour { n });
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("sizes must be strictly increasing".into()));
    }
    Ok(())
}

/// Spectral difference between the Floquet chain of `n_cells` cells and the
/// doubled poles of its static partner, for one configuration.
pub fn spectral_difference(config: ScalingConfig, eta: f64, target: StaticTarget, n_cells: usize) -> Result<f64> {
    if n_cells % 4 != 0 {
        return Err(Error::NotMultipleOfFour { n: n_cells });
    }
    let (floquet, energies) = match config {
        ScalingConfig::Open | ScalingConfig::Periodic => {
            let bc = if config == ScalingConfig::Open { BoundaryCondition::Open } else { BoundaryCondition::Periodic };
            let params = DriveParams::on_line(eta, n_cells, bc)?;
            let energies = match target {
                StaticTarget::Ssh => static_spectrum_ssh(eta, n_cells, bc)?,
                StaticTarget::WilsonDirac => static_spectrum_wd(eta, n_cells, bc)?,
            };
            (floquet_quasienergies(&params)?, energies)
        }
        ScalingConfig::DomainWall => {
            let floquet = DomainWallProfile::symmetric(WallModel::Floquet, eta, 2 * n_cells);
            let h = match target {
                StaticTarget::Ssh => build_ssh_wall(
                    &DomainWallProfile::symmetric(WallModel::Ssh, eta, n_cells)
                        .with_wall_position(ssh_weak_wall_site(eta, n_cells)),
                )?,
                StaticTarget::WilsonDirac => {
                    build_wd_wall(&DomainWallProfile::symmetric(WallModel::WilsonDirac, eta, n_cells / 2))?
                }
            };
            (floquet_wall_quasienergies(&floquet)?, EnergySpectrum::from_unsorted(h.eigenvalues()?))
        }
    };
    compare_spectra(double_poles(&energies)?.values(), floquet.values())
}

/// Runs [`spectral_difference`] over `sizes` (Floquet cell counts).
pub fn run_scaling(config: ScalingConfig, eta: f64, target: StaticTarget, sizes: &[usize]) -> Result<ScalingRun> {
    validate_sizes(sizes)?;
    let metric_values = sizes
        .iter()
        .map(|&n| spectral_difference(config, eta, target, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScalingRun { sizes: sizes.to_vec(), metric_values, config, eta, target })
}

/// Ordinary least squares of `ln metric` against `ln(1/N)`.
pub fn fit_power_law(run: &ScalingRun) -> Result<PowerLawFit> {
    if run.sizes.len() != run.metric_values.len() {
        return Err(Error::LengthMismatch { left: run.sizes.len(), right: run.metric_values.len() });
    }
    if run.sizes.len() < 4 {
        return Err(Error::TooFewPoints { got: run.sizes.len(), min: 4 });
    }
    if let Some((&size, &value)) = run.sizes.iter().zip(&run.metric_values).find(|(_, &m)| !(m > 0.0)) {
        return Err(Error::NonPositive { size, value });
    }
    let xs: Vec<f64> = run.sizes.iter().map(|&n| -(n as f64).ln()).collect();
    let ys: Vec<f64> = run.metric_values.iter().map(|m| m.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    Ok(PowerLawFit { exponent: slope, prefactor: intercept.exp(), r_squared })
}
