//! Domain walls in `eta` for the Floquet, SSH and Wilson-Dirac chains.
//!
//! A wall at site `w` splits the chain into a left region (sites `< w`) and
//! a right region (sites `>= w`). Bonds `(a, a+1)` with `a < w` belong to the
//! left region, so the bond straddling the wall takes the left value.

use std::f64::consts::FRAC_PI_4;
use std::ops::RangeInclusive;

use faer::c64;

use crate::doubling::{ssh_couplings, wd_couplings, Branch};
use crate::error::{Error, Result};
use crate::floquet::{drive_quasienergies, floquet_operator, QuasienergySpectrum, UnitaryOperator};
use crate::lattice::{
    build_h0, build_h1_scaled, build_wd_profile, nearest_neighbour_chain, ssh_bulk_gap, wd_bulk_gap,
    BoundaryCondition, DriveParams, HermitianOperator,
};
use crate::linalg::{expectation, localize, site_weights};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WallModel {
    Floquet,
    Ssh,
    WilsonDirac,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DomainWallProfile {
    pub model: WallModel,
    pub eta_left: f64,
    pub eta_right: f64,
    /// First site of the right region.
    pub wall_position: usize,
    /// Number of lattice sites (not basis states) of the chain.
    pub size: usize,
}

impl DomainWallProfile {
    /// Wall at the middle of a `size`-site chain.
    pub fn new(model: WallModel, eta_left: f64, eta_right: f64, size: usize) -> Self {
        Self { model, eta_left, eta_right, wall_position: size / 2, size }
    }

    /// `eta_right = -eta_left`.
    pub fn symmetric(model: WallModel, eta_left: f64, size: usize) -> Self {
        Self::new(model, eta_left, -eta_left, size)
    }

    pub fn with_wall_position(self, wall_position: usize) -> Self {
        Self { wall_position, ..self }
    }

    fn validate(&self, model: WallModel) -> Result<()> {
        if self.model != model {
            return Err(Error::InvalidParameter(format!(
                "profile is for {:?}, expected {:?}",
                self.model, model
            )));
        }
        for eta in [self.eta_left, self.eta_right] {
            if !(eta.abs() <= FRAC_PI_4 + 1e-12) {
                return Err(Error::InvalidParameter(format!("|eta| = {} exceeds pi/4", eta.abs())));
            }
        }
        if self.size < 4 {
            return Err(Error::Dimension { got: self.size, min: 4 });
        }
        if self.wall_position == 0 || self.wall_position >= self.size {
            return Err(Error::InvalidParameter(format!(
                "wall position {} must lie strictly inside the {}-site chain",
                self.wall_position, self.size
            )));
        }
        Ok(())
    }

    fn eta_at(&self, site: usize) -> f64 {
        if site < self.wall_position {
            self.eta_left
        } else {
            self.eta_right
        }
    }
}

/// Floquet chain on the `theta0 = pi/4` line with `theta1 = pi/4 + eta_left`
/// and an open boundary. Right of the wall the `H1` hopping drops from 2 to
/// `2 (pi/4 + eta_right) / (pi/4 + eta_left)`, which for `eta_right = -eta_left`
/// is `2 (pi/4 - eta) / (pi/4 + eta)`.
pub fn build_floquet_wall(profile: &DomainWallProfile) -> Result<UnitaryOperator> {
    let (h0, h1, theta0, theta1) = floquet_wall_generators(profile)?;
    floquet_operator(&h0, &h1, theta0, theta1)
}

/// Quasienergies of [`build_floquet_wall`] through the real-generator solver.
pub fn floquet_wall_quasienergies(profile: &DomainWallProfile) -> Result<QuasienergySpectrum> {
    let (h0, h1, theta0, theta1) = floquet_wall_generators(profile)?;
    drive_quasienergies(&h0, &h1, theta0, theta1)
}

fn floquet_wall_generators(
    profile: &DomainWallProfile,
) -> Result<(HermitianOperator, HermitianOperator, f64, f64)> {
    profile.validate(WallModel::Floquet)?;
    if profile.size % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "Floquet chain needs an even number of sites, got {}",
            profile.size
        )));
    }
    let theta1 = FRAC_PI_4 + profile.eta_left;
    if theta1 <= 0.0 {
        return Err(Error::InvalidParameter("eta_left = -pi/4 switches H1 off entirely".into()));
    }
    let params = DriveParams::new(FRAC_PI_4, theta1, profile.size / 2, BoundaryCondition::Open)?;
    let right = 2.0 * (FRAC_PI_4 + profile.eta_right) / theta1;
    let coefficients: Vec<f64> = (0..params.h1_bond_count())
        .map(|j| if 2 * j + 1 < profile.wall_position { 2.0 } else { right })
        .collect();
    Ok((build_h0(&params)?, build_h1_scaled(&params, &coefficients)?, params.theta0(), params.theta1()))
}

/// Open SSH chain with the `+`-branch couplings of `eta_left` and `eta_right`
/// on either side of the wall.
pub fn build_ssh_wall(profile: &DomainWallProfile) -> Result<HermitianOperator> {
    profile.validate(WallModel::Ssh)?;
    let couplings = (0..profile.size - 1)
        .map(|a| {
            let (u, v) = ssh_couplings(profile.eta_at(a), Branch::Plus)?;
            Ok(if a % 2 == 0 { v } else { u })
        })
        .collect::<Result<Vec<_>>>()?;
    nearest_neighbour_chain(profile.size, &couplings, BoundaryCondition::Open)
}

/// Wall site nearest the middle of a `size`-site SSH chain going from
/// `eta_left` to `-eta_left` at which both bonds touching the wall are weak.
///
/// A wall between two strong bonds binds a zero mode as well, but it also
/// forms a trimer whose outer states sit at `|E| > 1`, which no quasienergy
/// can reach through `asin`.
pub fn ssh_weak_wall_site(eta_left: f64, size: usize) -> usize {
    // + branch: odd bonds carry u, which is the strong one for eta > 0, so
    // the last left bond must be even (odd wall site) and vice versa
    let want_odd = eta_left > 0.0;
    let mid = size / 2;
    if (mid % 2 == 1) == want_odd {
        mid
    } else {
        mid + 1
    }
}

/// Open Wilson-Dirac chain with `m = -sin 2eta`, `R = (1 + sin 2eta)/2` on
/// each side of the wall.
pub fn build_wd_wall(profile: &DomainWallProfile) -> Result<HermitianOperator> {
    profile.validate(WallModel::WilsonDirac)?;
    let params = (0..profile.size)
        .map(|x| wd_couplings(profile.eta_at(x), Branch::Minus))
        .collect::<Result<Vec<_>>>()?;
    let (masses, wilson): (Vec<f64>, Vec<f64>) = params.into_iter().unzip();
    build_wd_profile(&masses, &wilson, BoundaryCondition::Open)
}

/// Smallest static half-gap on either side of the wall.
pub fn static_wall_gap(profile: &DomainWallProfile) -> Result<f64> {
    let gap = |eta: f64| -> Result<f64> {
        match profile.model {
            WallModel::Ssh | WallModel::Floquet => {
                let (u, v) = ssh_couplings(eta, Branch::Plus)?;
                Ok(ssh_bulk_gap(u, v))
            }
            WallModel::WilsonDirac => {
                let (m, r) = wd_couplings(eta, Branch::Minus)?;
                Ok(wd_bulk_gap(m, r))
            }
        }
    };
    Ok(gap(profile.eta_left)?.min(gap(profile.eta_right)?))
}

/// A state bound to a wall or an end, with per-site probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundState {
    pub energy: f64,
    /// Per-site probability, summing to 1.
    pub weights: Vec<f64>,
    pub xi_left: f64,
    pub xi_right: f64,
}

/// An in-gap eigenstate after separating degenerate partners by position.
#[derive(Clone, Debug)]
pub struct InGapState {
    pub energy: f64,
    /// Mean site index.
    pub center: f64,
    pub vector: Vec<c64>,
}

/// Eigenstates with `|E| < threshold`, rotated within that subspace so each
/// one is localised at a single wall or end.
pub fn in_gap_states(h: &HermitianOperator, orbitals_per_site: usize, threshold: f64) -> Result<Vec<InGapState>> {
    let (values, vecs) = h.eigh()?;
    let selected: Vec<Vec<c64>> = values
        .iter()
        .enumerate()
        .filter(|(_, e)| e.abs() < threshold)
        .map(|(l, _)| (0..h.dim()).map(|i| vecs[(i, l)]).collect())
        .collect();
    Ok(localize(&selected, orbitals_per_site)?
        .into_iter()
        .map(|s| InGapState { energy: expectation(h, &s.vector), center: s.center, vector: s.vector })
        .collect())
}

/// The in-gap state of a static wall Hamiltonian closest to the wall, with
/// fitted localisation lengths.
pub fn wall_bound_state(h: &HermitianOperator, profile: &DomainWallProfile) -> Result<BoundState> {
    let orbitals = match profile.model {
        WallModel::WilsonDirac => 2,
        _ => 1,
    };
    let threshold = 0.5 * static_wall_gap(profile)?;
    let wall = profile.wall_position as f64;
    let state = in_gap_states(h, orbitals, threshold)?
        .into_iter()
        .min_by(|a, b| (a.center - wall).abs().total_cmp(&(b.center - wall).abs()))
        .ok_or_else(|| Error::Fit("no in-gap state found".into()))?;
    let weights = site_weights(&state.vector, orbitals);
    let amplitudes: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let (xi_left, xi_right) = fit_localization_length(&amplitudes, profile.wall_position)?;
    Ok(BoundState { energy: state.energy, weights, xi_left, xi_right })
}

/// Per-site decay factors `1 + m/R` of the analytic zero mode to the right
/// and to the left of a wall with `eta_+ = -eta_- = eta`. A profile
/// `phi(x) = factor^x` decays in both directions when `0 < eta < pi/4`.
///
/// With `m = -sin 2eta`, `R = (1 + sin 2eta)/2` these are
/// `(1 - sin 2eta)/(1 + sin 2eta) = tan^2(pi/4 - eta)` and its reciprocal;
/// the tangent form avoids the cancellation in `1 - sin 2eta` near `pi/4`.
pub fn zero_mode_decay_factors(eta: f64) -> Result<(f64, f64)> {
    if !(eta.abs() <= FRAC_PI_4 + 1e-12) {
        return Err(Error::InvalidParameter(format!("|eta| = {} exceeds pi/4", eta.abs())));
    }
    let t = (FRAC_PI_4 - eta).tan();
    Ok((t * t, 1.0 / (t * t)))
}

/// Analytic zero mode `psi(x) = (1, 1)^T phi(x)` of the Wilson-Dirac wall,
/// with `phi(x) = (1 + m_+/R_+)^x` for `x >= 0` and `(1 + m_-/R_-)^x` for
/// `x < 0`, normalised over `x_range` (positions relative to the wall).
pub fn analytic_wd_zero_mode(eta: f64, x_range: RangeInclusive<i64>) -> Result<BoundState> {
    if !(eta > 0.0 && eta < FRAC_PI_4) {
        return Err(Error::EtaRange { eta });
    }
    let (right, left) = zero_mode_decay_factors(eta)?;
    let phi = |x: i64| if x >= 0 { right.powi(x as i32) } else { left.powi(x as i32) };
    // both spinor components carry phi
    let raw: Vec<f64> = x_range.map(|x| 2.0 * phi(x).powi(2)).collect();
    let total: f64 = raw.iter().sum();
    Ok(BoundState {
        energy: 0.0,
        weights: raw.into_iter().map(|w| w / total).collect(),
        xi_left: 1.0 / left.ln(),
        xi_right: -1.0 / right.ln(),
    })
}

/// `|(-i R gamma1 nabla + m - (R/2) nabla^2) psi|` of the analytic zero mode
/// at each `x` in `x_range`, with `m`, `R` taken at `x` (`+` side for
/// `x > 0`, `-` side for `x < 0`). The wall site `x = 0` is skipped.
pub fn zero_mode_eom_residuals(eta: f64, x_range: RangeInclusive<i64>) -> Result<Vec<(i64, f64)>> {
    if !(eta > 0.0 && eta < FRAC_PI_4) {
        return Err(Error::EtaRange { eta });
    }
    let (right, left) = zero_mode_decay_factors(eta)?;
    let phi = |x: i64| if x >= 0 { right.powi(x as i32) } else { left.powi(x as i32) };
    let i = c64::new(0.0, 1.0);
    let mut out = Vec::new();
    for x in x_range.filter(|&x| x != 0) {
        let (m, r) = wd_couplings(if x > 0 { eta } else { -eta }, Branch::Minus)?;
        let spinor = |y: i64| [c64::new(phi(y), 0.0); 2];
        let (prev, here, next) = (spinor(x - 1), spinor(x), spinor(x + 1));
        let mut residual = [c64::new(0.0, 0.0); 2];
        for s in 0..2 {
            // gamma1 = -i sigma_x mixes the two components
            let grad = (next[1 - s] - prev[1 - s]) * 0.5;
            let lap = next[s] + prev[s] - here[s] * 2.0;
            residual[s] = -i * r * (-i * grad) + here[s] * m - lap * (0.5 * r);
        }
        out.push((x, (residual[0].norm_sqr() + residual[1].norm_sqr()).sqrt()));
    }
    Ok(out)
}

/// Localisation lengths from least-squares fits of `ln |psi(x)|` against `x`
/// on each side of the wall.
///
/// Skips the two sites nearest the wall on each side, the tenth of the chain
/// nearest each end, and sites with amplitude at or below `1e-10`. Each side
/// needs at least four usable sites and a decaying profile.
pub fn fit_localization_length(amplitudes: &[f64], wall_position: usize) -> Result<(f64, f64)> {
    let n = amplitudes.len();
    let end_margin = n / 10;
    let usable = |x: usize| amplitudes[x] > 1e-10;
    let right: Vec<usize> = (wall_position + 2..n.saturating_sub(end_margin)).filter(|&x| usable(x)).collect();
    let left: Vec<usize> = (end_margin..wall_position.saturating_sub(2)).filter(|&x| usable(x)).collect();
    let slope = |sites: &[usize], side: &str| -> Result<f64> {
        if sites.len() < 4 {
            return Err(Error::Fit(format!("only {} usable sites {side} of the wall", sites.len())));
        }
        let xs: Vec<f64> = sites.iter().map(|&x| x as f64).collect();
        let ys: Vec<f64> = sites.iter().map(|&x| amplitudes[x].ln()).collect();
        Ok(least_squares_slope(&xs, &ys))
    };
    let slope_right = slope(&right, "right")?;
    let slope_left = slope(&left, "left")?;
    if !(slope_right < 0.0 && slope_left > 0.0) {
        return Err(Error::Fit(format!(
            "profile does not decay away from the wall (slopes {slope_left:.3e}, {slope_right:.3e})"
        )));
    }
    Ok((1.0 / slope_left, -1.0 / slope_right))
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::{build_floquet, eigenmodes};
    use crate::lattice::max_abs_diff;
    use crate::linalg::site_weights;
    use std::f64::consts::PI;

    const ETA: f64 = PI / 8.0;
    const XI: f64 = 0.567_297;

    #[test]
    fn floquet_wall_at_eta_zero_is_uniform() {
        let wall = build_floquet_wall(&DomainWallProfile::symmetric(WallModel::Floquet, 0.0, 40)).unwrap();
        let plain = build_floquet(&DriveParams::on_line(0.0, 20, BoundaryCondition::Open).unwrap()).unwrap();
        assert!(max_abs_diff(wall.matrix(), plain.matrix()) < 1e-14);
    }

    #[test]
    fn floquet_wall_right_coefficient() {
        let right: f64 = 2.0 * (FRAC_PI_4 - ETA) / (FRAC_PI_4 + ETA);
        assert!((right - 0.666_666_666_666_666_6).abs() < 1e-12);
    }

    #[test]
    fn floquet_wall_binds_modes_at_wall_and_left_end() {
        let n_cells = 200;
        let profile = DomainWallProfile::symmetric(WallModel::Floquet, ETA, 2 * n_cells);
        let u = build_floquet_wall(&profile).unwrap();
        let modes = eigenmodes(&u).unwrap();
        for target in [0.0, PI] {
            let near: Vec<Vec<c64>> = modes
                .iter()
                .filter(|m| crate::floquet::wrap_distance(m.quasienergy, target) < 0.05)
                .map(|m| m.vector.clone())
                .collect();
            assert_eq!(near.len(), 2, "modes near {target}");
            let located = localize(&near, 1).unwrap();
            assert!(located[0].center < 5.0, "end mode at {}", located[0].center);
            assert!((located[1].center - n_cells as f64).abs() < 5.0, "wall mode at {}", located[1].center);
        }
    }

    #[test]
    fn uniform_ssh_wall_is_plain_ssh() {
        let h = build_ssh_wall(&DomainWallProfile::new(WallModel::Ssh, 0.3, 0.3, 12)).unwrap();
        let (u, v) = ssh_couplings(0.3, Branch::Plus).unwrap();
        let plain = crate::lattice::build_ssh(&crate::lattice::SshParams::new(u, v, 6, BoundaryCondition::Open).unwrap())
            .unwrap();
        assert!(h.max_abs_diff(&plain) < 1e-15);
    }

    #[test]
    fn ssh_wall_binds_one_state_plus_one_end_state() {
        let profile = DomainWallProfile::new(WallModel::Ssh, -ETA, ETA, 200);
        let h = build_ssh_wall(&profile).unwrap();
        let states = in_gap_states(&h, 1, 0.5 * static_wall_gap(&profile).unwrap()).unwrap();
        assert_eq!(states.len(), 2);
        assert!((states[0].center - 100.0).abs() < 3.0);
        assert!(states[1].center > 195.0);
        let bound = wall_bound_state(&h, &profile).unwrap();
        assert!(bound.energy.abs() < 1e-10);
        assert!((bound.xi_left - bound.xi_right).abs() < 0.1 * bound.xi_right);
    }

    #[test]
    fn ssh_wall_energy_vanishes_at_large_n() {
        let profile = DomainWallProfile::new(WallModel::Ssh, -ETA, ETA, 400);
        let bound = wall_bound_state(&build_ssh_wall(&profile).unwrap(), &profile).unwrap();
        assert!(bound.energy.abs() < 1e-8);
    }

    #[test]
    fn weak_wall_site_keeps_energies_in_band() {
        for eta in [ETA, -ETA] {
            let site = ssh_weak_wall_site(eta, 100);
            let profile = DomainWallProfile::symmetric(WallModel::Ssh, eta, 100).with_wall_position(site);
            let energies = build_ssh_wall(&profile).unwrap().eigenvalues().unwrap();
            assert!(energies.iter().all(|e| e.abs() <= 1.0 + 1e-12), "eta {eta}");
            let strong = DomainWallProfile::symmetric(WallModel::Ssh, eta, 100).with_wall_position(site + 1);
            let energies = build_ssh_wall(&strong).unwrap().eigenvalues().unwrap();
            assert!(energies.iter().any(|e| e.abs() > 1.0));
        }
    }

    #[test]
    fn wd_wall_parameters() {
        let (m, r) = wd_couplings(ETA, Branch::Minus).unwrap();
        assert!((m + 0.707_106_781_186_547_5).abs() < 1e-12 && (r - 0.853_553_390_593_273_7).abs() < 1e-12);
        let (m, r) = wd_couplings(-ETA, Branch::Minus).unwrap();
        assert!((m - 0.707_106_781_186_547_5).abs() < 1e-12 && (r - 0.146_446_609_406_726_2).abs() < 1e-12);
    }

    #[test]
    fn uniform_massless_wd_wall() {
        let h = build_wd_wall(&DomainWallProfile::new(WallModel::WilsonDirac, 0.0, 0.0, 10)).unwrap();
        let plain = crate::lattice::build_wd(&crate::lattice::WdParams::new(0.0, 0.5, 10, BoundaryCondition::Open).unwrap())
            .unwrap();
        assert!(h.max_abs_diff(&plain) < 1e-15);
    }

    #[test]
    fn wd_wall_state_matches_analytic_length() {
        let profile = DomainWallProfile::symmetric(WallModel::WilsonDirac, -ETA, 200);
        let h = build_wd_wall(&profile).unwrap();
        let bound = wall_bound_state(&h, &profile).unwrap();
        assert!(bound.energy.abs() < 1e-10);
        assert!((bound.xi_right - XI).abs() < 0.05 * XI, "xi_right {}", bound.xi_right);
        assert!((bound.xi_left - XI).abs() < 0.05 * XI, "xi_left {}", bound.xi_left);
        assert!((bound.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn analytic_zero_mode_values() {
        let (right, left) = zero_mode_decay_factors(ETA).unwrap();
        assert!((right - 0.171_572_875_253_809_9).abs() < 1e-12);
        assert!((left - 5.828_427_124_746_19).abs() < 1e-12);
        let mode = analytic_wd_zero_mode(ETA, -30..=30).unwrap();
        assert!((mode.xi_right - XI).abs() < 1e-5);
        assert!((mode.xi_left - XI).abs() < 1e-5);
        assert_eq!(mode.energy, 0.0);
        assert!((mode.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(matches!(analytic_wd_zero_mode(0.0, -3..=3), Err(Error::EtaRange { .. })));
        assert!(matches!(analytic_wd_zero_mode(FRAC_PI_4, -3..=3), Err(Error::EtaRange { .. })));
    }

    #[test]
    fn analytic_zero_mode_delocalizes_at_transition() {
        let mode = analytic_wd_zero_mode(1e-6, -5..=5).unwrap();
        assert!(mode.xi_right > 1e5 && mode.xi_left > 1e5);
    }

    #[test]
    fn fit_recovers_synthetic_length() {
        let wall = 100;
        let amplitudes: Vec<f64> = (0..200).map(|x| (-((x as f64) - wall as f64).abs() / 2.0).exp()).collect();
        let (left, right) = fit_localization_length(&amplitudes, wall).unwrap();
        assert!((left - 2.0).abs() < 0.02 && (right - 2.0).abs() < 0.02);
    }

    #[test]
    fn fit_needs_data_on_both_sides() {
        let amplitudes: Vec<f64> = (0..40).map(|x| (-(x as f64)).exp()).collect();
        assert!(matches!(fit_localization_length(&amplitudes, 38), Err(Error::Fit(_))));
    }

    #[test]
    fn site_weights_of_spinor_sum_components() {
        let v = [c64::new(0.6, 0.0), c64::new(0.0, 0.8), c64::new(0.0, 0.0), c64::new(0.0, 0.0)];
        assert_eq!(site_weights(&v, 2), vec![1.0, 0.0]);
    }
}
