//! Single-particle lattice Hamiltonians.
//!
//! Every model here is a one-dimensional chain with nearest-neighbour
//! couplings, stored as a dense complex matrix over sites `0..L` in physical
//! order (sublattice A on even sites, B on odd sites). Time is measured in
//! units of the drive period, so all couplings are in units of `1/T`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use faer::{c64, Mat, MatRef, Side};

use crate::error::{Error, Result};

/// Entrywise tolerance on `|M - M^dagger|`.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Slack allowed on the drive-phase window so grid endpoints computed in
/// floating point are not rejected.
const WINDOW_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    /// Site `L` is identified with site `0`.
    Periodic,
    Open,
}

/// Configuration of the two-step drive `U_F = exp(-i H1 theta1) exp(-i H0 theta0)`.
///
/// `theta0 = t0/T` and `theta1 = t1/T`; the chain has `2 * n_cells` sites.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveParams {
    theta0: f64,
    theta1: f64,
    n_cells: usize,
    bc: BoundaryCondition,
}

impl DriveParams {
    pub fn new(theta0: f64, theta1: f64, n_cells: usize, bc: BoundaryCondition) -> Result<Self> {
        for (name, value) in [("theta0", theta0), ("theta1", theta1)] {
            if !value.is_finite() || value < -WINDOW_SLACK || value > FRAC_PI_2 + WINDOW_SLACK {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {value} must lie in [0, pi/2]"
                )));
            }
        }
        if n_cells < 2 {
            return Err(Error::Dimension { got: 2 * n_cells, min: 4 });
        }
        Ok(Self { theta0, theta1, n_cells, bc })
    }

    /// A point on the `theta0 = pi/4` line with `theta1 = pi/4 + eta`.
    pub fn on_line(eta: f64, n_cells: usize, bc: BoundaryCondition) -> Result<Self> {
        Self::new(FRAC_PI_4, FRAC_PI_4 + eta, n_cells, bc)
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_sites(&self) -> usize {
        2 * self.n_cells
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    /// Distance `theta1 - pi/4` from the gap closure on the `theta0 = pi/4` line.
    pub fn eta(&self) -> f64 {
        self.theta1 - FRAC_PI_4
    }

    pub fn with_bc(self, bc: BoundaryCondition) -> Self {
        Self { bc, ..self }
    }

    /// Number of `H1` bonds: `N` with periodic boundaries, `N - 1` with open ones.
    pub fn h1_bond_count(&self) -> usize {
        match self.bc {
            BoundaryCondition::Periodic => self.n_cells,
            BoundaryCondition::Open => self.n_cells - 1,
        }
    }
}

/// Static SSH chain: intra-cell hopping `v` on bonds `(2j, 2j+1)`, inter-cell
/// hopping `u` on bonds `(2j+1, 2j+2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SshParams {
    u: f64,
    v: f64,
    n_cells: usize,
    bc: BoundaryCondition,
}

impl SshParams {
    pub fn new(u: f64, v: f64, n_cells: usize, bc: BoundaryCondition) -> Result<Self> {
        if !(u.is_finite() && v.is_finite() && u >= 0.0 && v >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "SSH couplings must be non-negative, got u = {u}, v = {v}"
            )));
        }
        if n_cells == 0 {
            return Err(Error::Dimension { got: 0, min: 2 });
        }
        Ok(Self { u, v, n_cells, bc })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_sites(&self) -> usize {
        2 * self.n_cells
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }
}

/// Wilson-Dirac chain with mass `m` and Wilson parameter `r`; every site
/// carries a two-component spinor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WdParams {
    m: f64,
    r: f64,
    n_sites: usize,
    bc: BoundaryCondition,
}

impl WdParams {
    pub fn new(m: f64, r: f64, n_sites: usize, bc: BoundaryCondition) -> Result<Self> {
        if !(m.is_finite() && r.is_finite() && r >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Wilson-Dirac parameters need finite m and r >= 0, got m = {m}, r = {r}"
            )));
        }
        Ok(Self { m, r, n_sites, bc })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }
}

/// Dense single-particle Hamiltonian, Hermitian to [`HERMITICITY_TOL`].
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    matrix: Mat<c64>,
}

impl HermitianOperator {
    pub fn new(matrix: Mat<c64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidParameter(format!(
                "Hamiltonian must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let err = hermiticity_error(matrix.as_ref());
        if err >= HERMITICITY_TOL {
            return Err(Error::InvalidParameter(format!(
                "matrix is not Hermitian (max |M - M^dagger| = {err:.3e})"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.matrix.as_ref()
    }

    pub fn into_matrix(self) -> Mat<c64> {
        self.matrix
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(self.matrix.as_ref())
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.matrix.self_adjoint_eigenvalues(Side::Lower)?)
    }

    /// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
    pub fn eigh(&self) -> Result<(Vec<f64>, Mat<c64>)> {
        let evd = self.matrix.self_adjoint_eigen(Side::Lower)?;
        let values = evd.S().column_vector().iter().map(|z| z.re).collect();
        Ok((values, evd.U().to_owned()))
    }

    /// Largest entrywise `|self - other|`; infinite when dimensions differ.
    pub fn max_abs_diff(&self, other: &HermitianOperator) -> f64 {
        max_abs_diff(self.matrix(), other.matrix())
    }
}

pub(crate) fn hermiticity_error(m: MatRef<'_, c64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn max_abs_diff(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> f64 {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return f64::INFINITY;
    }
    let mut worst = 0.0_f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

/// Real nearest-neighbour chain on `n_sites` sites.
///
/// `couplings[a]` is the hopping on bond `(a, a + 1)`. Open chains take
/// `n_sites - 1` couplings; periodic chains take `n_sites`, the last one
/// being the wrap-around bond `(n_sites - 1, 0)`. Bonds landing on the same
/// matrix entry (periodic chains of two sites) add up.
pub fn nearest_neighbour_chain(
    n_sites: usize,
    couplings: &[f64],
    bc: BoundaryCondition,
) -> Result<HermitianOperator> {
    if n_sites < 2 {
        return Err(Error::Dimension { got: n_sites, min: 2 });
    }
    let expected = match bc {
        BoundaryCondition::Periodic => n_sites,
        BoundaryCondition::Open => n_sites - 1,
    };
    if couplings.len() != expected {
        return Err(Error::ProfileLength { expected, got: couplings.len() });
    }
    let mut m = Mat::<c64>::zeros(n_sites, n_sites);
    for (a, &t) in couplings.iter().enumerate() {
        let b = (a + 1) % n_sites;
        m[(a, b)] += c64::new(t, 0.0);
        m[(b, a)] += c64::new(t, 0.0);
    }
    HermitianOperator::new(m)
}

/// `H0 = 2 sum_j (a_{2j}^dagger a_{2j+1} + h.c.)`; identical for both boundary conditions.
pub fn build_h0(params: &DriveParams) -> Result<HermitianOperator> {
    let couplings: Vec<f64> = (0..params.n_sites() - 1)
        .map(|a| if a % 2 == 0 { 2.0 } else { 0.0 })
        .collect();
    nearest_neighbour_chain(params.n_sites(), &couplings, BoundaryCondition::Open)
}

/// `H1 = 2 sum_j (a_{2j+1}^dagger a_{2j+2} + h.c.)`. With open boundaries the
/// end sites `0` and `2N - 1` carry no `H1` bond.
pub fn build_h1(params: &DriveParams) -> Result<HermitianOperator> {
    build_h1_scaled(params, &vec![2.0; params.h1_bond_count()])
}

/// `H1` with bond `j` (sites `2j+1`, `2j+2`) carrying `profile[j]` instead of 2.
pub fn build_h1_scaled(params: &DriveParams, profile: &[f64]) -> Result<HermitianOperator> {
    let expected = params.h1_bond_count();
    if profile.len() != expected {
        return Err(Error::ProfileLength { expected, got: profile.len() });
    }
    let n_sites = params.n_sites();
    let mut couplings = vec![0.0; n_sites];
    for (j, &c) in profile.iter().enumerate() {
        couplings[2 * j + 1] = c;
    }
    if params.bc() == BoundaryCondition::Open {
        couplings.pop();
    }
    nearest_neighbour_chain(n_sites, &couplings, params.bc())
}

/// `H_SSH = (u/2) H1 + (v/2) H0`.
pub fn build_ssh(params: &SshParams) -> Result<HermitianOperator> {
    let n_sites = params.n_sites();
    let n_bonds = match params.bc() {
        BoundaryCondition::Periodic => n_sites,
        BoundaryCondition::Open => n_sites - 1,
    };
    let couplings: Vec<f64> = (0..n_bonds)
        .map(|a| if a % 2 == 0 { params.v() } else { params.u() })
        .collect();
    nearest_neighbour_chain(n_sites, &couplings, params.bc())
}

/// Wilson-Dirac Hamiltonian `h = gamma0 [R gamma1 (-i nabla) - (R/2) nabla^2 + m]`
/// with `gamma0 = sigma_y`, `gamma1 = -i sigma_x`.
pub fn build_wd(params: &WdParams) -> Result<HermitianOperator> {
    let n = params.n_sites();
    build_wd_profile(&vec![params.m(); n], &vec![params.r(); n], params.bc())
}

/// Wilson-Dirac Hamiltonian with site-dependent mass and Wilson parameter.
///
/// Spinor component `s` of site `x` is basis index `2x + s`. Substituting the
/// gamma matrices gives `h = -R sigma_z (x) (-i nabla) + sigma_y (x) (m - (R/2) nabla^2)`,
/// so each site carries `(m + R) sigma_y` and each bond `(x, x+1)` the block
/// `(i R/2) sigma_z - (R/2) sigma_y`. Bonds use the mean of the two site
/// values of `R`. The `-2` diagonal of `nabla^2` is kept on every site, also
/// at open ends.
pub fn build_wd_profile(
    masses: &[f64],
    wilson: &[f64],
    bc: BoundaryCondition,
) -> Result<HermitianOperator> {
    let n = masses.len();
    if n < 2 {
        return Err(Error::Dimension { got: n, min: 2 });
    }
    if wilson.len() != n {
        return Err(Error::ProfileLength { expected: n, got: wilson.len() });
    }
    let i = c64::new(0.0, 1.0);
    let mut h = Mat::<c64>::zeros(2 * n, 2 * n);
    for x in 0..n {
        // (m + R) sigma_y
        let d = masses[x] + wilson[x];
        h[(2 * x, 2 * x + 1)] += -i * d;
        h[(2 * x + 1, 2 * x)] += i * d;
    }
    let n_bonds = match bc {
        BoundaryCondition::Periodic => n,
        BoundaryCondition::Open => n - 1,
    };
    for x in 0..n_bonds {
        let y = (x + 1) % n;
        let r = 0.5 * (wilson[x] + wilson[y]);
        // (i r/2) sigma_z - (r/2) sigma_y = (i r/2) [[1, 1], [-1, -1]]
        let half = i * (0.5 * r);
        let block = [[half, half], [-half, -half]];
        for (s, row) in block.iter().enumerate() {
            for (t, &z) in row.iter().enumerate() {
                h[(2 * x + s, 2 * y + t)] += z;
                h[(2 * y + t, 2 * x + s)] += z.conj();
            }
        }
    }
    HermitianOperator::new(h)
}

/// PBC SSH band `E(k) = sqrt(u^2 + v^2 + 2uv cos 2k)` (upper branch).
pub fn ssh_dispersion(u: f64, v: f64, k: f64) -> f64 {
    (u * u + v * v + 2.0 * u * v * (2.0 * k).cos()).max(0.0).sqrt()
}

/// PBC SSH momenta `k = pi j / n_cells`, `j = 0..n_cells`.
pub fn ssh_momenta(n_cells: usize) -> Vec<f64> {
    (0..n_cells).map(|j| std::f64::consts::PI * j as f64 / n_cells as f64).collect()
}

/// PBC Wilson-Dirac band `E(p) = sqrt(R^2 sin^2 p + (m + R(1 - cos p))^2)` (upper branch).
pub fn wd_dispersion(m: f64, r: f64, p: f64) -> f64 {
    let mass = m + r * (1.0 - p.cos());
    (r * r * p.sin().powi(2) + mass * mass).sqrt()
}

/// PBC Wilson-Dirac momenta `p = 2 pi j / n_sites`, folded into `[-pi, pi)`
/// and sorted. For even `n_sites` this is `p = 2 pi j / n_sites - pi`.
pub fn wd_momenta(n_sites: usize) -> Vec<f64> {
    use std::f64::consts::{PI, TAU};
    let mut p: Vec<f64> = (0..n_sites)
        .map(|j| TAU * j as f64 / n_sites as f64)
        .map(|p| if p >= PI { p - TAU } else { p })
        .collect();
    p.sort_by(f64::total_cmp);
    p
}

/// Smallest `|E|` of the infinite SSH chain.
pub fn ssh_bulk_gap(u: f64, v: f64) -> f64 {
    (u - v).abs()
}

/// Smallest `|E|` of the infinite Wilson-Dirac chain. `E(p)^2` is affine in
/// `cos p`, so the minimum sits at `p = 0` (`|m|`) or `p = pi` (`|m + 2R|`).
pub fn wd_bulk_gap(m: f64, r: f64) -> f64 {
    m.abs().min((m + 2.0 * r).abs())
}

/// Chiral operator `Gamma` with `Gamma H Gamma = -H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chirality {
    /// `diag(+1, -1, +1, ...)`, for bipartite hopping chains.
    Sublattice,
    /// `sigma_x` on every two-component site, for the Wilson-Dirac chain.
    SpinorX,
}

/// `max |Gamma H Gamma + H|`.
pub fn chiral_symmetry_error(h: &HermitianOperator, gamma: Chirality) -> f64 {
    let m = h.matrix();
    let n = h.dim();
    // Gamma maps basis index i to partner(i) with sign sign(i)
    let (partner, sign): (fn(usize) -> usize, fn(usize) -> f64) = match gamma {
        Chirality::Sublattice => (|i| i, |i| if i % 2 == 0 { 1.0 } else { -1.0 }),
        Chirality::SpinorX => (|i| i ^ 1, |_| 1.0),
    };
    let mut worst = 0.0_f64;
    for j in 0..n {
        for i in 0..n {
            let conjugated = m[(partner(i), partner(j))] * (sign(i) * sign(j));
            worst = worst.max((conjugated + m[(i, j)]).norm());
        }
    }
    worst
}
