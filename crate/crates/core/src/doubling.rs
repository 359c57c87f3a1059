//! Map from the Floquet spectrum on the `theta0 = pi/4` line onto static
//! SSH and Wilson-Dirac chains whose discrete-time (time step `T`) pole
//! spectra reproduce it.
//!
//! Half of the quasienergies (`eps~`) are sine-transformed into static
//! energies `E = sin(eps~)`. Time discretisation then gives every `E` two
//! poles, `asin(E)` and `pi - asin(E)`, and the second set recovers the
//! discarded half of the Floquet spectrum.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::floquet::{analytic_dispersion_line, floquet_momenta, fold_phase, wrap_distance, QuasienergySpectrum};
use crate::lattice::{build_ssh, build_wd, BoundaryCondition, DriveParams, SshParams, WdParams};

/// Static energies within this distance of `+-1` are pinned to `+-1` before
/// taking `asin`, which is square-root ill-conditioned there.
pub const ASIN_EDGE_TOL: f64 = 1e-12;

/// Sorted static energies in units of `1/T`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergySpectrum {
    values: Vec<f64>,
}

impl EnergySpectrum {
    pub fn from_unsorted(values: impl IntoIterator<Item = f64>) -> Self {
        let mut values: Vec<f64> = values.into_iter().collect();
        values.sort_by(f64::total_cmp);
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Sorted discrete-time pole frequencies `p0 T` in `[-pi, pi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleSpectrum {
    values: Vec<f64>,
}

impl PoleSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Which root of the parameter equations to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta.abs() <= FRAC_PI_4 + 1e-12) {
        return Err(Error::InvalidParameter(format!("|eta| = {} exceeds pi/4", eta.abs())));
    }
    Ok(())
}

fn check_mod4(n: usize) -> Result<()> {
    if n % 4 != 0 {
        return Err(Error::NotMultipleOfFour { n });
    }
    Ok(())
}

/// The `eps~` half of the periodic spectrum: both bands at the momenta
/// `pi/4 <= k < 3pi/4`, i.e. `k = pi j / N` with `N/4 <= j < 3N/4`.
pub fn partition_tilde(params: &DriveParams) -> Result<QuasienergySpectrum> {
    if params.bc() != BoundaryCondition::Periodic {
        return Err(Error::InvalidParameter("the eps~ partition is defined for periodic chains".into()));
    }
    if (params.theta0() - FRAC_PI_4).abs() > 1e-12 {
        return Err(Error::NotOnLine { theta0: params.theta0() });
    }
    let n = params.n_cells();
    check_mod4(n)?;
    let eta = params.eta();
    let momenta = floquet_momenta(n);
    Ok(QuasienergySpectrum::from_unsorted(
        momenta[n / 4..3 * n / 4].iter().flat_map(|&k| analytic_dispersion_line(eta, k)),
    ))
}

/// `E = sin(eps~)`.
pub fn sine_transform(spec: &QuasienergySpectrum) -> EnergySpectrum {
    EnergySpectrum::from_unsorted(spec.values().iter().map(|e| e.sin()))
}

/// SSH couplings `u = (1 +- sin 2eta)/2`, `v = 1 - u`.
pub fn ssh_couplings(eta: f64, branch: Branch) -> Result<(f64, f64)> {
    check_eta(eta)?;
    let s = (2.0 * eta).sin();
    let u = match branch {
        Branch::Plus => 0.5 * (1.0 + s),
        Branch::Minus => 0.5 * (1.0 - s),
    };
    Ok((u, 1.0 - u))
}

/// Wilson-Dirac parameters `m = +-sin 2eta`, `R = 1/2 - m/2`.
pub fn wd_couplings(eta: f64, branch: Branch) -> Result<(f64, f64)> {
    check_eta(eta)?;
    let s = (2.0 * eta).sin();
    let m = match branch {
        Branch::Plus => s,
        Branch::Minus => -s,
    };
    Ok((m, 0.5 * (1.0 - m)))
}

pub fn solve_ssh_params(
    eta: f64,
    branch: Branch,
    n_cells: usize,
    bc: BoundaryCondition,
) -> Result<SshParams> {
    let (u, v) = ssh_couplings(eta, branch)?;
    SshParams::new(u, v, n_cells, bc)
}

pub fn solve_wd_params(eta: f64, branch: Branch, n_sites: usize, bc: BoundaryCondition) -> Result<WdParams> {
    let (m, r) = wd_couplings(eta, branch)?;
    WdParams::new(m, r, n_sites, bc)
}

/// The SSH chain matched to a Floquet chain of `floquet_cells` cells: `+`
/// branch (topological for `eta > 0`) on `floquet_cells` sites.
pub fn mapped_ssh_params(eta: f64, floquet_cells: usize, bc: BoundaryCondition) -> Result<SshParams> {
    check_mod4(floquet_cells)?;
    solve_ssh_params(eta, Branch::Plus, floquet_cells / 2, bc)
}

/// The Wilson-Dirac chain matched to a Floquet chain of `floquet_cells`
/// cells: `-` branch (edge modes for `eta > 0`) on `floquet_cells / 2` sites.
pub fn mapped_wd_params(eta: f64, floquet_cells: usize, bc: BoundaryCondition) -> Result<WdParams> {
    check_mod4(floquet_cells)?;
    solve_wd_params(eta, Branch::Minus, floquet_cells / 2, bc)
}

pub fn static_spectrum_ssh(eta: f64, floquet_cells: usize, bc: BoundaryCondition) -> Result<EnergySpectrum> {
    let h = build_ssh(&mapped_ssh_params(eta, floquet_cells, bc)?)?;
    Ok(EnergySpectrum::from_unsorted(h.eigenvalues()?))
}

pub fn static_spectrum_wd(eta: f64, floquet_cells: usize, bc: BoundaryCondition) -> Result<EnergySpectrum> {
    let h = build_wd(&mapped_wd_params(eta, floquet_cells, bc)?)?;
    Ok(EnergySpectrum::from_unsorted(h.eigenvalues()?))
}

/// Both discrete-time poles of every energy: `asin(E)` and `pi - asin(E)`,
/// folded into `[-pi, pi)`.
pub fn double_poles(spec: &EnergySpectrum) -> Result<PoleSpectrum> {
    let mut values = Vec::with_capacity(2 * spec.len());
    for &e in spec.values() {
        if !(e.abs() <= 1.0 + ASIN_EDGE_TOL) {
            return Err(Error::AsinDomain { value: e });
        }
        let e = if e.abs() >= 1.0 - ASIN_EDGE_TOL { e.signum() } else { e };
        let p = e.asin();
        values.push(fold_phase(p));
        values.push(fold_phase(PI - p));
    }
    values.sort_by(f64::total_cmp);
    Ok(PoleSpectrum { values })
}

/// Largest wrap-aware distance between two spectra compared as ordered lists.
///
/// Both are folded into `[-pi, pi)` and sorted. Sorting cuts the circle at
/// `-pi`, and a pair of states at `pi - d` and `-pi + d` can land on opposite
/// ends of the two lists, offsetting every later entry by one; the lists are
/// therefore compared under the cyclic shift that minimises the maximum
/// distance (the unshifted alignment whenever nothing straddles the cut).
pub fn compare_spectra(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    let sorted = |xs: &[f64]| {
        let mut v: Vec<f64> = xs.iter().copied().map(fold_phase).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let (a, b) = (sorted(a), sorted(b));
    let n = a.len();
    let shifted = |r: usize, bound: f64| {
        let mut worst = 0.0_f64;
        for j in 0..n {
            worst = worst.max(wrap_distance(a[j], b[(j + r) % n]));
            if worst >= bound {
                break;
            }
        }
        worst
    };
    let mut best = shifted(0, f64::INFINITY);
    // nearest shifts first; each pass bails out once it cannot beat `best`
    for r in 1..n {
        if best == 0.0 {
            break;
        }
        best = best.min(shifted(r, best)).min(shifted(n - r, best));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::{build_floquet, quasienergies};
    use std::f64::consts::FRAC_PI_2;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn partition_at_eta_pi_over_8() {
        let p = DriveParams::on_line(PI / 8.0, 8, BoundaryCondition::Periodic).unwrap();
        let tilde = partition_tilde(&p).unwrap();
        // k = pi/4, 3pi/8, pi/2, 5pi/8 -> eps = pi/2, pi/3, pi/4, pi/3
        let third = PI / 3.0;
        let expected = [-FRAC_PI_2, -third, -third, -FRAC_PI_4, FRAC_PI_4, third, third, FRAC_PI_2];
        assert!(close(tilde.values(), &expected, 1e-12), "{:?}", tilde.values());
    }

    #[test]
    fn partition_at_gap_closure_contains_zero() {
        let p = DriveParams::on_line(0.0, 8, BoundaryCondition::Periodic).unwrap();
        let tilde = partition_tilde(&p).unwrap();
        assert!(tilde.values().iter().any(|e| e.abs() < 1e-7));
    }

    #[test]
    fn partition_rejects_bad_input() {
        let off = DriveParams::new(0.3, 0.5, 8, BoundaryCondition::Periodic).unwrap();
        assert!(matches!(partition_tilde(&off), Err(Error::NotOnLine { .. })));
        let odd = DriveParams::on_line(0.1, 6, BoundaryCondition::Periodic).unwrap();
        assert!(matches!(partition_tilde(&odd), Err(Error::NotMultipleOfFour { n: 6 })));
    }

    #[test]
    fn partition_and_complement_fill_the_spectrum() {
        let p = DriveParams::on_line(0.2, 16, BoundaryCondition::Periodic).unwrap();
        let tilde = partition_tilde(&p).unwrap();
        let full = quasienergies(&build_floquet(&p).unwrap()).unwrap();
        let mut union: Vec<f64> = tilde.values().to_vec();
        union.extend(tilde.values().iter().map(|e| PI - e));
        assert!(compare_spectra(&union, full.values()).unwrap() < 1e-10);
    }

    #[test]
    fn sine_transform_examples() {
        let zero = sine_transform(&QuasienergySpectrum::from_unsorted([0.0]));
        assert_eq!(zero.values(), &[0.0]);
        let halves = sine_transform(&QuasienergySpectrum::from_unsorted([-FRAC_PI_2, FRAC_PI_2]));
        assert!(close(halves.values(), &[-1.0, 1.0], 1e-15));
        let quarters = sine_transform(&QuasienergySpectrum::from_unsorted([-FRAC_PI_4, FRAC_PI_4]));
        assert!(close(quarters.values(), &[-S, S], 1e-15));
    }

    #[test]
    fn ssh_branches() {
        let (u, v) = ssh_couplings(PI / 8.0, Branch::Plus).unwrap();
        assert!((u - 0.853_553_390_593_273_7).abs() < 1e-12 && (v - 0.146_446_609_406_726_2).abs() < 1e-12);
        let (u, v) = ssh_couplings(PI / 8.0, Branch::Minus).unwrap();
        assert!((u - 0.146_446_609_406_726_2).abs() < 1e-12 && (v - 0.853_553_390_593_273_7).abs() < 1e-12);
        for branch in [Branch::Plus, Branch::Minus] {
            assert_eq!(ssh_couplings(0.0, branch).unwrap(), (0.5, 0.5));
        }
        assert!(ssh_couplings(1.0, Branch::Plus).is_err());
    }

    #[test]
    fn wd_branches() {
        let (m, r) = wd_couplings(PI / 8.0, Branch::Minus).unwrap();
        assert!((m + S).abs() < 1e-12 && (r - 0.853_553_390_593_273_7).abs() < 1e-12);
        let (m, r) = wd_couplings(PI / 8.0, Branch::Plus).unwrap();
        assert!((m - S).abs() < 1e-12 && (r - 0.146_446_609_406_726_2).abs() < 1e-12);
        assert_eq!(wd_couplings(0.0, Branch::Minus).unwrap(), (0.0, 0.5));
    }

    #[test]
    fn pole_doubling_examples() {
        let zero = double_poles(&EnergySpectrum::from_unsorted([0.0])).unwrap();
        assert_eq!(zero.values(), &[-PI, 0.0]);
        let up = double_poles(&EnergySpectrum::from_unsorted([S])).unwrap();
        assert!(close(up.values(), &[FRAC_PI_4, 3.0 * FRAC_PI_4], 1e-15));
        let down = double_poles(&EnergySpectrum::from_unsorted([-S])).unwrap();
        assert!(close(down.values(), &[-3.0 * FRAC_PI_4, -FRAC_PI_4], 1e-15));
    }

    #[test]
    fn pole_doubling_at_band_edge_duplicates() {
        let edge = double_poles(&EnergySpectrum::from_unsorted([1.0 - 2e-16, -1.0])).unwrap();
        assert_eq!(edge.values(), &[-FRAC_PI_2, -FRAC_PI_2, FRAC_PI_2, FRAC_PI_2]);
        let clamped = double_poles(&EnergySpectrum::from_unsorted([1.0 + 5e-13])).unwrap();
        assert_eq!(clamped.values(), &[FRAC_PI_2, FRAC_PI_2]);
        assert!(matches!(
            double_poles(&EnergySpectrum::from_unsorted([1.01])),
            Err(Error::AsinDomain { .. })
        ));
    }

    #[test]
    fn compare_is_wrap_aware() {
        assert_eq!(compare_spectra(&[0.1, 0.2], &[0.1, 0.2]).unwrap(), 0.0);
        // pi - 1e-13 folds onto -pi, so it lines up with -pi
        assert!(compare_spectra(&[-PI, 0.0], &[0.0, PI - 1e-13]).unwrap() < 1e-12);
        assert!(matches!(compare_spectra(&[0.0], &[]), Err(Error::LengthMismatch { .. })));
        // a pair split across the cut must not shift the rest of the list
        let a = [-PI + 1e-9, -1.0, 0.5, 2.0];
        let b = [-1.0, 0.5, 2.0, PI - 1e-9];
        assert!(compare_spectra(&a, &b).unwrap() < 3e-9);
        assert!((compare_spectra(&[-1.0, 1.0], &[-1.0, 1.5]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mapped_static_spectra_at_eta_pi_over_8() {
        let eta = PI / 8.0;
        let p = DriveParams::on_line(eta, 8, BoundaryCondition::Periodic).unwrap();
        let target = sine_transform(&partition_tilde(&p).unwrap());
        let ssh = static_spectrum_ssh(eta, 8, BoundaryCondition::Periodic).unwrap();
        let wd = static_spectrum_wd(eta, 8, BoundaryCondition::Periodic).unwrap();
        assert_eq!(ssh.len(), 8);
        assert_eq!(wd.len(), 8);
        assert!(close(ssh.values(), target.values(), 1e-10));
        assert!(close(wd.values(), target.values(), 1e-10));
    }

    #[test]
    fn static_spectra_are_gapless_at_eta_zero() {
        let ssh = static_spectrum_ssh(0.0, 8, BoundaryCondition::Periodic).unwrap();
        let wd = static_spectrum_wd(0.0, 8, BoundaryCondition::Periodic).unwrap();
        assert!(ssh.values().iter().any(|e| e.abs() < 1e-12));
        assert!(wd.values().iter().any(|e| e.abs() < 1e-12));
        assert!(matches!(static_spectrum_ssh(0.1, 6, BoundaryCondition::Periodic), Err(Error::NotMultipleOfFour { .. })));
    }

    #[test]
    fn round_trip_at_n8() {
        let eta = PI / 8.0;
        let p = DriveParams::on_line(eta, 8, BoundaryCondition::Periodic).unwrap();
        let floquet = quasienergies(&build_floquet(&p).unwrap()).unwrap();
        let poles = double_poles(&static_spectrum_ssh(eta, 8, BoundaryCondition::Periodic).unwrap()).unwrap();
        assert!(compare_spectra(poles.values(), floquet.values()).unwrap() < 1e-10);
    }
}
