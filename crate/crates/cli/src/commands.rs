//! One table builder per subcommand.

use dwell_core::bloch::{density_matrix_continuum, density_matrix_normalized, SolveOptions};
use dwell_core::spectrum::{eigenfunction, energy_continuum};
use dwell_core::thermo::{
    mean_energy, mean_energy_by_difference, partition_continuum_closed, partition_continuum_sum,
    partition_discrete, partition_theta, Cutoff,
};
use dwell_core::{DensitySolverRegistry, LatticeSpec, PartitionRegistry, Spectrum, TwoLevelModel};

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::table::Table;

/// Relative step of the central difference behind the continuum mean energy.
const MEAN_ENERGY_STEP: f64 = 1e-4;

pub fn run(config: &RunConfig) -> Result<Table, CliError> {
    match config.command {
        Command::Spectrum => spectrum(config),
        Command::Wavefunction => wavefunction(config),
        Command::DensityMatrix => density_matrix(config),
        Command::Partition => partition(config),
        Command::MeanEnergy => mean_energies(config),
        Command::HeatCapacity => heat_capacity(config),
        Command::Converge => converge(config),
    }
}

fn build_spectrum(config: &RunConfig, spacings: usize) -> Result<Spectrum, CliError> {
    let lattice = LatticeSpec::with_width(spacings, config.width)?;
    Ok(Spectrum::new(lattice, config.particle()))
}

/// Sweep grid, or the single thermal value given on the command line.
fn betas(config: &RunConfig) -> Vec<f64> {
    match config.sweep {
        Some(s) => s.values(),
        None => vec![config
            .beta()
            .expect("thermal input checked when the config was resolved")],
    }
}

fn spectrum(config: &RunConfig) -> Result<Table, CliError> {
    let s = build_spectrum(config, config.spacings)?;
    let mut t = Table::new(&["n_E", "e_tilde", "E", "E_continuum", "rel_error"]);
    for m in s.modes() {
        let cont = energy_continuum(m.n_e, config.width, s.particle())?;
        t.push(vec![
            m.n_e.into(),
            m.e_tilde.into(),
            m.energy.into(),
            cont.into(),
            ((m.energy - cont).abs() / cont).into(),
        ]);
    }
    Ok(t)
}

fn wavefunction(config: &RunConfig) -> Result<Table, CliError> {
    let s = build_spectrum(config, config.spacings)?;
    let mode = s.mode(config.n_e)?;
    let psi = eigenfunction(mode, s.lattice());
    let mut t = Table::new(&["n", "x_n", "psi"]);
    for (n, v) in psi.values().iter().enumerate() {
        t.push(vec![n.into(), s.lattice().position(n).into(), (*v).into()]);
    }
    Ok(t)
}

fn density_matrix(config: &RunConfig) -> Result<Table, CliError> {
    let s = build_spectrum(config, config.spacings)?;
    let beta = betas(config)[0];
    let registry = DensitySolverRegistry::builtin();
    let solver = registry
        .get(&config.solver)
        .ok_or_else(|| CliError::config(format!("unknown --solver '{}'", config.solver)))?;
    let mut dm = solver.solve(
        &s,
        beta,
        &SolveOptions {
            steps: config.steps,
        },
    )?;
    if config.normalized {
        let z = partition_discrete(&s, beta)?.z;
        dm = density_matrix_normalized(&dm, z)?;
    }
    let mut t = Table::new(&["n", "n_prime", "rho"]);
    for n in 0..=config.spacings {
        for m in 0..=config.spacings {
            t.push(vec![n.into(), m.into(), dm.get(n, m).into()]);
        }
    }
    Ok(t)
}

fn partition(config: &RunConfig) -> Result<Table, CliError> {
    let s = build_spectrum(config, config.spacings)?;
    let registry = PartitionRegistry::builtin();
    let name = config.method.as_deref().unwrap_or("discrete_sum");
    let method = registry
        .get(name)
        .ok_or_else(|| CliError::config(format!("unknown --method '{name}'")))?;
    let (w, p) = (config.width, s.particle());
    let mut t = Table::new(&[
        "beta",
        "Z_discrete",
        "Z_continuum_sum",
        "Z_closed",
        "Z_theta",
        "F",
    ]);
    for beta in betas(config) {
        let f = method
            .partition(&s, beta)?
            .free_energy
            .expect("beta is positive here");
        t.push(vec![
            beta.into(),
            partition_discrete(&s, beta)?.z.into(),
            partition_continuum_sum(w, p, beta, Cutoff::Auto)?.z.into(),
            partition_continuum_closed(w, p, beta)?.z.into(),
            partition_theta(w, p, beta)?.z.into(),
            f.into(),
        ]);
    }
    Ok(t)
}

/// The continuum column differentiates `ln Z` of `--method`, `continuum_closed` by default.
fn mean_energies(config: &RunConfig) -> Result<Table, CliError> {
    let s = build_spectrum(config, config.spacings)?;
    let registry = PartitionRegistry::builtin();
    let name = config.method.as_deref().unwrap_or("continuum_closed");
    let method = registry
        .get(name)
        .ok_or_else(|| CliError::config(format!("unknown --method '{name}'")))?;
    let mut t = Table::new(&["beta", "H_mean_discrete", "H_mean_continuum"]);
    for beta in betas(config) {
        t.push(vec![
            beta.into(),
            mean_energy(&s, beta)?.into(),
            mean_energy_by_difference(method, &s, beta, MEAN_ENERGY_STEP)?.into(),
        ]);
    }
    Ok(t)
}

fn heat_capacity(config: &RunConfig) -> Result<Table, CliError> {
    let s = build_spectrum(config, config.spacings)?;
    let model = TwoLevelModel::from_spectrum(&s, config.k_b)?;
    let temperatures = match (config.sweep, config.temperature) {
        (Some(sweep), _) => sweep.values(),
        (None, Some(temp)) => vec![temp],
        (None, None) => betas(config)
            .into_iter()
            .map(|b| 1.0 / (config.k_b * b))
            .collect(),
    };
    let mut t = Table::new(&["T", "x", "Cv_over_R"]);
    for temp in temperatures {
        t.push(vec![
            temp.into(),
            (model.theta_char / temp).into(),
            model.heat_capacity(temp)?.into(),
        ]);
    }
    Ok(t)
}

fn relative(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs()
}

/// Lattices `N, 2N - 1, 4N - 3, ...` at fixed width. `Z` and `rho` rows need a thermal input;
/// `rho` is taken at the sites nearest `L/3` and `L/2`.
fn converge(config: &RunConfig) -> Result<Table, CliError> {
    let mut t = Table::new(&["N", "quantity", "value", "error_vs_continuum"]);
    let beta = config.beta();
    let mut spacings = config.spacings;
    for _ in 0..config.levels {
        let s = build_spectrum(config, spacings)?;
        let p = s.particle();
        let e1 = s.mode(1)?.energy;
        let e1_cont = energy_continuum(1, config.width, p)?;
        t.push(vec![
            spacings.into(),
            "E1".into(),
            e1.into(),
            relative(e1, e1_cont).into(),
        ]);

        if let Some(beta) = beta {
            let z = partition_discrete(&s, beta)?.z;
            let z_cont = partition_continuum_sum(config.width, p, beta, Cutoff::Auto)?.z;
            t.push(vec![
                spacings.into(),
                "Z".into(),
                z.into(),
                relative(z, z_cont).into(),
            ]);

            let lattice = s.lattice();
            let n = lattice.nearest_site(config.width / 3.0);
            let m = lattice.nearest_site(config.width / 2.0);
            let rho = dwell_core::bloch::density_matrix_spectral(&s, beta)?.get(n, m);
            let rho_cont =
                density_matrix_continuum(lattice.position(n), lattice.position(m), beta, p)?;
            t.push(vec![
                spacings.into(),
                "rho".into(),
                rho.into(),
                relative(rho, rho_cont).into(),
            ]);
        }
        spacings = 2 * spacings - 1;
    }
    Ok(t)
}

/// Renders `table` in the configured format.
pub fn render(config: &RunConfig, table: &Table) -> String {
    match config.format {
        crate::config::OutputFormat::Csv => table.to_csv(),
        crate::config::OutputFormat::Json => {
            let echo = serde_json::to_value(config).expect("config always serializes");
            table.to_json(echo, config.unit_mode)
        }
    }
}
