use std::f64::consts::FRAC_PI_4;
use std::fmt;

use floquet_lattice::domain_wall::{
    analytic_wd_zero_mode, build_ssh_wall, build_wd_wall, in_gap_states, ssh_weak_wall_site, static_wall_gap,
    wall_bound_state, DomainWallProfile, WallModel,
};
use floquet_lattice::doubling::{
    compare_spectra, double_poles, mapped_ssh_params, mapped_wd_params, partition_tilde, sine_transform,
    static_spectrum_ssh, static_spectrum_wd, EnergySpectrum,
};
use floquet_lattice::floquet::{analytic_spectrum, build_floquet, classify_phase, phase_grid, quasienergies};
use floquet_lattice::lattice::DriveParams;
use floquet_lattice::scaling::{fit_power_law, run_scaling, ScalingConfig, StaticTarget};
use floquet_lattice::{BoundaryCondition, Error};

use crate::output::{Cell, Table};
use crate::{Bc, Config, Target};

/// Same tolerance the doubling map applies to `theta0 = pi/4`.
const LINE_TOL: f64 = 1e-12;

#[derive(Debug)]
pub enum Failure {
    Lib(Error),
    Invalid(String),
    Io(std::io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) if e.is_numerical() => 3,
            Failure::Lib(_) | Failure::Invalid(_) => 2,
            Failure::Io(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Invalid(msg) => f.write_str(msg),
            Failure::Io(e) => write!(f, "cannot write output: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = Result<Table, Failure>;

fn bc_name(bc: Bc) -> &'static str {
    match bc {
        Bc::Pbc => "pbc",
        Bc::Obc => "obc",
    }
}

fn target_name(target: Target) -> &'static str {
    match target {
        Target::Ssh => "ssh",
        Target::Wd => "wd",
    }
}

fn static_energies(target: Target, eta: f64, cells: usize, bc: BoundaryCondition) -> Result<EnergySpectrum, Error> {
    match target {
        Target::Ssh => static_spectrum_ssh(eta, cells, bc),
        Target::Wd => static_spectrum_wd(eta, cells, bc),
    }
}

/// Cheap checks that the mapped static chain can be built at all.
fn check_mapping(target: Target, eta: f64, cells: usize, bc: BoundaryCondition) -> Result<(), Error> {
    match target {
        Target::Ssh => mapped_ssh_params(eta, cells, bc).map(drop),
        Target::Wd => mapped_wd_params(eta, cells, bc).map(drop),
    }
}

fn column(values: &[f64], row: usize) -> Cell {
    Cell::opt(values.get(row).copied())
}

pub fn spectrum(theta0: f64, theta1: f64, cells: usize, bc: Bc, map: Option<Target>) -> CmdResult {
    let params = DriveParams::new(theta0, theta1, cells, bc.into())?;
    if let Some(target) = map {
        if (theta0 - FRAC_PI_4).abs() > LINE_TOL {
            return Err(Error::NotOnLine { theta0 }.into());
        }
        check_mapping(target, params.eta(), cells, bc.into())?;
    }

    let mut columns = vec!["index", "quasienergy", "analytic"];
    if map.is_some() {
        columns.push("pole");
    }
    let mut table = Table::new("spectrum", columns);
    table.param("theta0", theta0).param("theta1", theta1).param("cells", cells).param("bc", bc_name(bc));
    table.param("map", map.map_or("none", target_name));

    let u = build_floquet(&params)?;
    let spec = quasienergies(&u)?;
    let analytic = match bc {
        Bc::Pbc => analytic_spectrum(&params)?.values().to_vec(),
        Bc::Obc => Vec::new(),
    };
    let poles = match map {
        Some(target) => double_poles(&static_energies(target, params.eta(), cells, bc.into())?)?.values().to_vec(),
        None => Vec::new(),
    };
    for (i, &eps) in spec.values().iter().enumerate() {
        let mut row = vec![Cell::Int(i), Cell::Num(eps), column(&analytic, i)];
        if map.is_some() {
            row.push(column(&poles, i));
        }
        table.push(row);
    }

    table.summarize("unitarity_error", u.unitarity_error());
    if !analytic.is_empty() {
        table.summarize("analytic_metric", compare_spectra(&analytic, spec.values())?);
    }
    if map.is_some() {
        table.summarize("metric", compare_spectra(&poles, spec.values())?);
    }
    Ok(table)
}

pub fn phase_diagram(grid: usize, cells: usize, margin: f64) -> CmdResult {
    if grid < 4 {
        return Err(Failure::Invalid(format!("--grid must be at least 4, got {grid}")));
    }
    if !(0.0..FRAC_PI_4).contains(&margin) {
        return Err(Failure::Invalid(format!("--margin must lie in [0, pi/4), got {margin}")));
    }
    DriveParams::new(FRAC_PI_4, FRAC_PI_4, cells, BoundaryCondition::Open)?;

    let mut table = Table::new("phase-diagram", vec!["theta0", "theta1", "label", "n_zero", "n_pi"]);
    table.param("grid", grid).param("cells", cells).param("margin", margin).param("bc", "obc");

    let thetas = phase_grid(grid, margin);
    let mut labels: Vec<&'static str> = Vec::new();
    let mut boundary = 0;
    for &theta0 in &thetas {
        for &theta1 in &thetas {
            let (label, counts) = match classify_phase(&DriveParams::new(theta0, theta1, cells, BoundaryCondition::Open)?) {
                Ok(phase) => (phase.label.name(), Some((phase.n_zero_modes, phase.n_pi_modes))),
                Err(Error::Gapless { .. }) => {
                    boundary += 1;
                    ("BOUNDARY", None)
                }
                // an odd number of modes at 0 or pi; report it rather than guess
                Err(Error::UnpairedModes { n_zero, n_pi }) => ("UNRESOLVED", Some((n_zero, n_pi))),
                Err(e) => return Err(e.into()),
            };
            if counts.is_some() && !labels.contains(&label) {
                labels.push(label);
            }
            let (z, p) = counts.map_or((Cell::Blank, Cell::Blank), |(z, p)| (Cell::Int(z), Cell::Int(p)));
            table.push(vec![theta0.into(), theta1.into(), label.into(), z, p]);
        }
    }
    table.summarize("distinct_labels", labels.len()).summarize("boundary_points", boundary);
    Ok(table)
}

pub fn map(eta: f64, cells: usize, target: Target, bc: Bc) -> CmdResult {
    let drive = DriveParams::on_line(eta, cells, bc.into())?;
    let mut table =
        Table::new("map", vec!["index", "eps_tilde", "sine_energy", "static_energy", "pole", "floquet"]);
    table.param("eta", eta).param("cells", cells).param("target", target_name(target)).param("bc", bc_name(bc));
    match target {
        Target::Ssh => {
            let p = mapped_ssh_params(eta, cells, bc.into())?;
            table.summarize("u", p.u()).summarize("v", p.v()).summarize("static_sites", p.n_sites());
        }
        Target::Wd => {
            let p = mapped_wd_params(eta, cells, bc.into())?;
            table.summarize("m", p.m()).summarize("R", p.r()).summarize("static_sites", p.n_sites());
        }
    }

    // the eps~ half of the spectrum only exists on the periodic chain
    let tilde = match bc {
        Bc::Pbc => Some(partition_tilde(&drive)?),
        Bc::Obc => None,
    };
    let sine = tilde.as_ref().map(sine_transform);
    let energies = static_energies(target, eta, cells, bc.into())?;
    let poles = double_poles(&energies)?;
    let floquet = quasienergies(&build_floquet(&drive)?)?;

    let tilde_values = tilde.as_ref().map_or(&[][..], |t| t.values());
    let sine_values = sine.as_ref().map_or(&[][..], |s| s.values());
    for i in 0..floquet.len().max(poles.len()) {
        table.push(vec![
            Cell::Int(i),
            column(tilde_values, i),
            column(sine_values, i),
            column(energies.values(), i),
            column(poles.values(), i),
            column(floquet.values(), i),
        ]);
    }

    if let Some(sine) = &sine {
        table.summarize("tilde_metric", compare_spectra(double_poles(sine)?.values(), floquet.values())?);
    }
    table.summarize("metric", compare_spectra(poles.values(), floquet.values())?);
    Ok(table)
}

pub fn domainwall(eta: f64, cells: usize, target: Target) -> CmdResult {
    if !(eta != 0.0 && eta.abs() < FRAC_PI_4) {
        return Err(Failure::Invalid(format!("--eta must satisfy 0 < |eta| < pi/4, got {eta}")));
    }
    if cells % 4 != 0 {
        return Err(Error::NotMultipleOfFour { n: cells }.into());
    }
    // eta_left = -eta, eta_right = +eta: for eta > 0 the topological side
    // (m < 0) sits right of the wall
    let (profile, h, orbitals) = match target {
        Target::Ssh => {
            let profile = DomainWallProfile::new(WallModel::Ssh, -eta, eta, cells)
                .with_wall_position(ssh_weak_wall_site(-eta, cells));
            (profile, build_ssh_wall(&profile)?, 1)
        }
        Target::Wd => {
            let profile = DomainWallProfile::new(WallModel::WilsonDirac, -eta, eta, cells / 2);
            (profile, build_wd_wall(&profile)?, 2)
        }
    };

    let mut table = Table::new(
        "domainwall",
        vec!["state", "kind", "center", "energy", "xi_left", "xi_right", "analytic_xi"],
    );
    table.param("eta", eta).param("cells", cells).param("target", target_name(target));
    table.param("eta_left", profile.eta_left).param("eta_right", profile.eta_right);
    table.param("sites", profile.size).param("wall_site", profile.wall_position);

    let gap = static_wall_gap(&profile)?;
    let mut states = in_gap_states(&h, orbitals, 0.5 * gap)?;
    states.sort_by(|a, b| a.center.total_cmp(&b.center));
    let bound = wall_bound_state(&h, &profile)?;
    // the wall is mirror-symmetric in |eta|, so the closed form applies to both signs
    let analytic = match target {
        Target::Wd => Some(analytic_wd_zero_mode(eta.abs(), -20..=20)?.xi_right),
        Target::Ssh => None,
    };

    let wall = profile.wall_position as f64;
    let nearest = states
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| (a.center - wall).abs().total_cmp(&(b.center - wall).abs()))
        .map(|(i, _)| i);
    for (i, state) in states.iter().enumerate() {
        let at_wall = Some(i) == nearest;
        let xi = |x: f64| if at_wall { Cell::Num(x) } else { Cell::Blank };
        table.push(vec![
            Cell::Int(i),
            Cell::from(if at_wall { "wall" } else { "end" }),
            state.center.into(),
            state.energy.into(),
            xi(bound.xi_left),
            xi(bound.xi_right),
            if at_wall { Cell::opt(analytic) } else { Cell::Blank },
        ]);
    }

    table.summarize("half_gap", gap).summarize("bound_energy", bound.energy);
    table.summarize("xi_left", bound.xi_left).summarize("xi_right", bound.xi_right);
    if let Some(xi) = analytic {
        table.summarize("analytic_xi", xi);
        table.summarize("relative_error", (bound.xi_right - xi).abs() / xi);
    }
    Ok(table)
}

pub fn scaling(config: Config, eta: f64, target: Target, sizes: &[usize]) -> CmdResult {
    const MIN_POINTS: usize = 4;
    if sizes.len() < MIN_POINTS {
        return Err(Error::TooFewPoints { got: sizes.len(), min: MIN_POINTS }.into());
    }
    check_mapping(target, eta, sizes[0], BoundaryCondition::Open)?;
    let (config_enum, config_name) = match config {
        Config::Obc => (ScalingConfig::Open, "obc"),
        Config::Dw => (ScalingConfig::DomainWall, "dw"),
        Config::Pbc => (ScalingConfig::Periodic, "pbc"),
    };
    let static_target = match target {
        Target::Ssh => StaticTarget::Ssh,
        Target::Wd => StaticTarget::WilsonDirac,
    };

    let mut table = Table::new("scaling", vec!["N", "metric"]);
    let size_list = sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    table.param("config", config_name).param("eta", eta).param("target", target_name(target));
    table.param("sizes", size_list.as_str());

    let run = run_scaling(config_enum, eta, static_target, sizes)?;
    for (&n, &metric) in run.sizes.iter().zip(&run.metric_values) {
        table.push(vec![Cell::Int(n), Cell::Num(metric)]);
    }
    if config_enum == ScalingConfig::Periodic {
        // roundoff only; a power law through it means nothing
        let worst = run.metric_values.iter().copied().fold(0.0, f64::max);
        table.summarize("max_metric", worst);
    } else {
        let fit = fit_power_law(&run)?;
        table.summarize("exponent", fit.exponent).summarize("prefactor", fit.prefactor);
        table.summarize("r_squared", fit.r_squared);
    }
    Ok(table)
}
