//! Floquet operator, quasienergy spectra and phase classification.
//!
//! Quasienergies are dimensionless (`epsilon * T`) and live on the half-open
//! interval `[-pi, pi)`. They are defined through `U_F = exp(-i H_F)`, so an
//! eigenvalue `lambda` of `U_F` has quasienergy `-arg(lambda)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use faer::{c64, Mat, MatRef, Side};

use crate::doubling::compare_spectra;
use crate::error::{Error, Result};
use crate::lattice::{build_h0, build_h1, BoundaryCondition, DriveParams, HermitianOperator};
use crate::linalg::{edge_weight, ipr, normalize, propagator, unitarity_error};

pub const UNITARITY_TOL: f64 = 1e-10;

/// Values this close below `pi` are folded onto `-pi`.
pub const FOLD_TOL: f64 = 1e-12;

/// Eigenvalue moduli may deviate from 1 by this much before the operator is
/// rejected as non-unitary.
const MODULUS_TOL: f64 = 1e-6;

/// Default quasienergy window around 0 and pi for boundary modes.
pub const DEFAULT_TOL_MODE: f64 = 0.05;

/// Default minimum weight on the outer tenth of the chain for a boundary mode.
pub const DEFAULT_MIN_EDGE_WEIGHT: f64 = 0.5;

/// Folds a phase into `[-pi, pi)`.
pub fn fold_phase(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y >= PI - FOLD_TOL {
        -PI
    } else {
        y
    }
}

/// Distance on the circle of quasienergies.
pub fn wrap_distance(a: f64, b: f64) -> f64 {
    let d = (fold_phase(a) - fold_phase(b)).abs();
    d.min(TAU - d)
}

#[derive(Clone, Debug)]
pub struct UnitaryOperator {
    matrix: Mat<c64>,
}

impl UnitaryOperator {
    pub fn new(matrix: Mat<c64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidParameter(format!(
                "unitary must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let deviation = unitarity_error(matrix.as_ref());
        if !(deviation < UNITARITY_TOL) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.matrix.as_ref()
    }

    pub fn unitarity_error(&self) -> f64 {
        unitarity_error(self.matrix.as_ref())
    }
}

/// Sorted quasienergies in `[-pi, pi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasienergySpectrum {
    values: Vec<f64>,
}

impl QuasienergySpectrum {
    /// Folds every value into `[-pi, pi)` and sorts.
    pub fn from_unsorted(values: impl IntoIterator<Item = f64>) -> Self {
        let mut values: Vec<f64> = values.into_iter().map(fold_phase).collect();
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

/// `U_F = exp(-i H1 theta1) exp(-i H0 theta0)`.
pub fn build_floquet(params: &DriveParams) -> Result<UnitaryOperator> {
    let h0 = build_h0(params)?;
    let h1 = build_h1(params)?;
    floquet_operator(&h0, &h1, params.theta0(), params.theta1())
}

/// Two-step Floquet operator for arbitrary first and second generators.
pub fn floquet_operator(
    h0: &HermitianOperator,
    h1: &HermitianOperator,
    theta0: f64,
    theta1: f64,
) -> Result<UnitaryOperator> {
    if h0.dim() != h1.dim() {
        return Err(Error::InvalidParameter(format!(
            "generators have different dimensions ({} vs {})",
            h0.dim(),
            h1.dim()
        )));
    }
    let first = propagator(h0, theta0)?;
    let second = propagator(h1, theta1)?;
    UnitaryOperator::new(&second * &first)
}

fn checked_phase(lambda: c64) -> Result<f64> {
    let modulus = lambda.norm();
    if (modulus - 1.0).abs() > MODULUS_TOL {
        return Err(Error::NotUnitary { deviation: (modulus - 1.0).abs() });
    }
    Ok(fold_phase(-lambda.arg()))
}

/// Quasienergies from a dense non-Hermitian eigensolve of `u`.
pub fn quasienergies(u: &UnitaryOperator) -> Result<QuasienergySpectrum> {
    let eigenvalues = u.matrix().eigenvalues()?;
    let phases = eigenvalues.into_iter().map(checked_phase).collect::<Result<Vec<_>>>()?;
    Ok(QuasienergySpectrum::from_unsorted(phases))
}

/// Quasienergies of the two-step drive generated by `h0` and `h1`.
///
/// For real generators the symmetrised step `A B A`, with
/// `A = exp(-i theta0 H0 / 2)` and `B = exp(-i theta1 H1)`, is unitarily
/// equivalent to `U_F` and complex symmetric. Its real and imaginary parts
/// are then commuting real symmetric matrices, so one real symmetric
/// eigensolve of `Re + alpha Im` (generic `alpha`) diagonalises both and
/// gives `lambda = c + i s` from Rayleigh quotients. That is several times
/// cheaper than a general complex eigensolve. If the generators are complex,
/// or any recovered `|lambda|` strays from 1 (an accidental near-degeneracy
/// of `Re + alpha Im` mixing eigenvectors), the general solver is used.
pub fn drive_quasienergies(
    h0: &HermitianOperator,
    h1: &HermitianOperator,
    theta0: f64,
    theta1: f64,
) -> Result<QuasienergySpectrum> {
    let general = || quasienergies(&floquet_operator(h0, h1, theta0, theta1)?);
    let is_real = |h: &HermitianOperator| {
        let m = h.matrix();
        (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| m[(i, j)].im == 0.0))
    };
    if h0.dim() != h1.dim() || !is_real(h0) || !is_real(h1) {
        return general();
    }
    let half = propagator(h0, 0.5 * theta0)?;
    let step = propagator(h1, theta1)?;
    let symmetric = &half * &step * &half;
    let n = symmetric.nrows();
    let re = Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (symmetric[(i, j)].re + symmetric[(j, i)].re));
    let im = Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (symmetric[(i, j)].im + symmetric[(j, i)].im));
    const ALPHA: f64 = 0.618_033_988_749_894_8;
    let mixed = &re + &im * ALPHA;
    let evd = mixed.self_adjoint_eigen(Side::Lower)?;
    let q = evd.U();
    let (re_q, im_q) = (&re * q, &im * q);
    let mut phases = Vec::with_capacity(n);
    for l in 0..n {
        let (mut c, mut s) = (0.0, 0.0);
        for i in 0..n {
            c += q[(i, l)] * re_q[(i, l)];
            s += q[(i, l)] * im_q[(i, l)];
        }
        if (c.hypot(s) - 1.0).abs() > UNITARITY_TOL {
            return general();
        }
        phases.push(fold_phase(-s.atan2(c)));
    }
    Ok(QuasienergySpectrum::from_unsorted(phases))
}

/// [`drive_quasienergies`] for the uniform chain.
pub fn floquet_quasienergies(params: &DriveParams) -> Result<QuasienergySpectrum> {
    drive_quasienergies(&build_h0(params)?, &build_h1(params)?, params.theta0(), params.theta1())
}

/// A Floquet eigenstate with its folded quasienergy.
#[derive(Clone, Debug)]
pub struct Eigenmode {
    pub quasienergy: f64,
    /// Normalised eigenvector.
    pub vector: Vec<c64>,
}

/// Quasienergies together with normalised eigenvectors, in solver order.
pub fn eigenmodes(u: &UnitaryOperator) -> Result<Vec<Eigenmode>> {
    let evd = u.matrix().eigen()?;
    let vecs = evd.U();
    let values = evd.S();
    (0..u.dim())
        .map(|l| {
            let quasienergy = checked_phase(values.column_vector()[l])?;
            let mut vector: Vec<c64> = (0..u.dim()).map(|i| vecs[(i, l)]).collect();
            normalize(&mut vector);
            Ok(Eigenmode { quasienergy, vector })
        })
        .collect()
}

/// Both bands `[-eps, +eps]` of the bulk Floquet spectrum at momentum `k`,
/// anywhere in the `(theta0, theta1)` plane:
///
/// `cos eps = [cos(2k-2a-2b) + 2cos(2a-2b) - cos(2k+2a-2b) - cos(2k-2a+2b)
///             + 2cos(2a+2b) + cos(2k+2a+2b)] / 4`
///
/// with `a = theta0`, `b = theta1`. This collapses to
/// `cos 2a cos 2b - sin 2a sin 2b cos 2k`.
///
/// `arccos` loses half the digits near the band edges, so the angle is taken
/// with `atan2` against `sin eps`, the length of the Pauli-vector part of the
/// product of the two rotations.
pub fn analytic_dispersion_general(theta0: f64, theta1: f64, k: f64) -> Result<[f64; 2]> {
    let (a, b) = (2.0 * theta0, 2.0 * theta1);
    let q = 2.0 * k;
    let cos_eps = 0.25
        * ((q - a - b).cos() + 2.0 * (a - b).cos() - (q + a - b).cos() - (q - a + b).cos()
            + 2.0 * (a + b).cos()
            + (q + a + b).cos());
    if !(cos_eps.abs() <= 1.0 + 1e-12) {
        return Err(Error::Domain { value: cos_eps });
    }
    let sin_eps = (b.cos() * a.sin() + a.cos() * b.sin() * q.cos()).hypot(b.sin() * q.sin());
    let eps = sin_eps.atan2(cos_eps);
    Ok([-eps, eps])
}

/// Both bands on the `theta0 = pi/4` line: `eps(k) = +-arccos(-cos 2eta cos 2k)`.
pub fn analytic_dispersion_line(eta: f64, k: f64) -> [f64; 2] {
    let (s, c) = (2.0 * eta).sin_cos();
    let q = 2.0 * k;
    let eps = s.hypot(c * q.sin()).atan2(-c * q.cos());
    [-eps, eps]
}

/// PBC Floquet momenta `k = pi j / N`.
pub fn floquet_momenta(n_cells: usize) -> Vec<f64> {
    (0..n_cells).map(|j| PI * j as f64 / n_cells as f64).collect()
}

/// The bulk spectrum on the periodic momentum grid, from the closed form.
pub fn analytic_spectrum(params: &DriveParams) -> Result<QuasienergySpectrum> {
    let mut values = Vec::with_capacity(params.n_sites());
    for k in floquet_momenta(params.n_cells()) {
        values.extend(analytic_dispersion_general(params.theta0(), params.theta1(), k)?);
    }
    Ok(QuasienergySpectrum::from_unsorted(values))
}

/// Half-gaps of the infinite chain: distance of the bulk bands from 0 and from pi.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BulkGaps {
    pub zero: f64,
    pub pi: f64,
}

/// `cos eps(k)` is affine in `cos 2k`, so the band edges sit at `k = 0` and `k = pi/2`.
pub fn bulk_gaps(theta0: f64, theta1: f64) -> Result<BulkGaps> {
    let at_zero = analytic_dispersion_general(theta0, theta1, 0.0)?[1];
    let at_half = analytic_dispersion_general(theta0, theta1, FRAC_PI_2)?[1];
    Ok(BulkGaps { zero: at_zero.min(at_half), pi: PI - at_zero.max(at_half) })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PiPairing {
    pub holds: bool,
    /// Largest distance between the spectrum and its image under `eps -> pi - eps`.
    pub mismatch: f64,
}

/// Checks that the multiset `{pi - eps}` equals `{eps}` within `tol`.
pub fn check_pi_pairing(spec: &QuasienergySpectrum, tol: f64) -> PiPairing {
    let partners: Vec<f64> = spec.values().iter().map(|e| PI - e).collect();
    // equal lengths by construction
    let mismatch = compare_spectra(spec.values(), &partners).unwrap_or(f64::INFINITY);
    PiPairing { holds: mismatch <= tol, mismatch }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModeKind {
    Zero,
    Pi,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeModeReport {
    pub kind: ModeKind,
    pub quasienergy: f64,
    pub ipr: f64,
    pub edge_weight: f64,
}

/// Boundary modes of the open chain: eigenstates within `tol_mode` of
/// quasienergy 0 or pi carrying at least `min_edge_weight` of their weight on
/// the outer tenth of the chain.
pub fn find_edge_modes(
    params: &DriveParams,
    tol_mode: f64,
    min_edge_weight: f64,
) -> Result<Vec<EdgeModeReport>> {
    if params.bc() != BoundaryCondition::Open {
        return Err(Error::InvalidParameter("edge modes need open boundaries".into()));
    }
    let u = build_floquet(params)?;
    let mut reports: Vec<EdgeModeReport> = eigenmodes(&u)?
        .into_iter()
        .filter_map(|mode| {
            let eps = mode.quasienergy;
            let kind = if eps.abs() < tol_mode {
                ModeKind::Zero
            } else if (PI - eps.abs()).abs() < tol_mode {
                ModeKind::Pi
            } else {
                return None;
            };
            let weight = edge_weight(&mode.vector, 1);
            (weight >= min_edge_weight).then(|| EdgeModeReport {
                kind,
                quasienergy: eps,
                ipr: ipr(&mode.vector),
                edge_weight: weight,
            })
        })
        .collect();
    reports.sort_by(|a, b| a.quasienergy.total_cmp(&b.quasienergy));
    Ok(reports)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Trivial,
    Zero,
    Pi,
    ZeroPi,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Trivial => "Trivial",
            Phase::Zero => "Zero",
            Phase::Pi => "Pi",
            Phase::ZeroPi => "ZeroPi",
        }
    }

    /// Expected phase of a point strictly inside one of the four regions cut
    /// out by the gap-closing lines `theta0 = theta1` and `theta0 + theta1 = pi/2`.
    pub fn region_of(theta0: f64, theta1: f64) -> Phase {
        let below_diagonal = theta1 < theta0;
        let below_anti = theta0 + theta1 < FRAC_PI_2;
        match (below_diagonal, below_anti) {
            (true, true) => Phase::Trivial,
            (false, true) => Phase::Zero,
            (true, false) => Phase::Pi,
            (false, false) => Phase::ZeroPi,
        }
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhaseLabel {
    pub label: Phase,
    pub n_zero_modes: usize,
    pub n_pi_modes: usize,
}

impl PhaseLabel {
    pub fn from_counts(n_zero_modes: usize, n_pi_modes: usize) -> Result<Self> {
        let label = match (n_zero_modes, n_pi_modes) {
            (0, 0) => Phase::Trivial,
            (z, 0) if z >= 2 => Phase::Zero,
            (0, p) if p >= 2 => Phase::Pi,
            (z, p) if z >= 2 && p >= 2 => Phase::ZeroPi,
            (n_zero, n_pi) => return Err(Error::UnpairedModes { n_zero, n_pi }),
        };
        Ok(Self { label, n_zero_modes, n_pi_modes })
    }
}

pub fn count_modes(reports: &[EdgeModeReport]) -> (usize, usize) {
    let zero = reports.iter().filter(|r| r.kind == ModeKind::Zero).count();
    (zero, reports.len() - zero)
}

/// Labels a drive point by its boundary modes, always on the open chain.
///
/// Refuses points where either bulk half-gap is below `4 * tol_mode`.
pub fn classify_phase(params: &DriveParams) -> Result<PhaseLabel> {
    let gaps = bulk_gaps(params.theta0(), params.theta1())?;
    if gaps.zero.min(gaps.pi) < 4.0 * DEFAULT_TOL_MODE {
        return Err(Error::Gapless { gap_zero: gaps.zero, gap_pi: gaps.pi });
    }
    let open = params.with_bc(BoundaryCondition::Open);
    let reports = find_edge_modes(&open, DEFAULT_TOL_MODE, DEFAULT_MIN_EDGE_WEIGHT)?;
    let (n_zero, n_pi) = count_modes(&reports);
    PhaseLabel::from_counts(n_zero, n_pi)
}

/// Evenly spaced drive phases spanning `[margin, pi/2 - margin]`.
pub fn phase_grid(points: usize, margin: f64) -> Vec<f64> {
    let span = FRAC_PI_2 - 2.0 * margin;
    match points {
        0 => Vec::new(),
        1 => vec![FRAC_PI_4],
        _ => (0..points).map(|i| margin + span * i as f64 / (points - 1) as f64).collect(),
    }
}
