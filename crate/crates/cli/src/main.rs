//! Batch front end: parse a run configuration, orchestrate system
//! generation, polytope analysis, root finding, and the scripted
//! experiments, and emit stamped CSV/JSON artifacts.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 capacity limit
//! hit, 3 numerical failure.

use ccpoly::ccgen::{
    bezout_bounds, generate_residual_system, newton_polytope, surrogate_generators,
    GeneratedSystem, SurrogateKind,
};
use ccpoly::cluster::TruncationScheme;
use ccpoly::fock::{hamiltonian_from_matrix, FockOperator, MatrixFile, SpinOrbitalBasis};
use ccpoly::polytope::{f_vector, facet_intersection_graph, mixed_volume, PolytopeError};
use ccpoly::solve::{
    ccs_trajectory_experiment, classify_root, config_hash, default_epsilon_grid, fci_eigensolve,
    homotopy_solve_all, perturbation_experiment, random_sector_hamiltonian, ExperimentReport,
    HomotopyConfig, RootClass,
};
use clap::{Args, Parser, Subcommand};
use num::complex::Complex64;
use num::ToPrimitive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ccpoly", version, about = "Coupled-cluster polynomial workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the projected residual system and the Bezout bound table.
    Generate(SystemArgs),
    /// Newton polytopes, f-vectors, facet graphs, and the mixed volume.
    Polytope(SystemArgs),
    /// Full homotopy root census with classification against the spectrum.
    Solve(SystemArgs),
    /// Run a scripted experiment: ccs-trajectory, newton-perturb, or
    /// homotopy-census.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct SystemArgs {
    /// Electron count N.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Spin-orbital count K.
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Truncation scheme: ccs, ccsd, or full.
    #[arg(long, default_value = "ccsd")]
    scheme: String,
    /// Sector-matrix JSON file; omitted means a seeded random Hamiltonian.
    #[arg(long)]
    hamiltonian: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment name.
    name: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Spectral-gap parameter of the model Hamiltonian (ccs-trajectory).
    #[arg(long, default_value_t = 1.0 / 12.0)]
    gamma: f64,
    /// Perturbation radii (newton-perturb).
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.6, 1.0, 2.0])]
    radii: Vec<f64>,
    /// Perturbation samples per radius (newton-perturb).
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value = "ccsd")]
    scheme: String,
    #[arg(long)]
    hamiltonian: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

enum CliError {
    Usage(String),
    Capacity(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Capacity(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Capacity(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<PolytopeError> for CliError {
    fn from(e: PolytopeError) -> Self {
        match e {
            PolytopeError::DimensionCap { .. }
            | PolytopeError::FacetCap { .. }
            | PolytopeError::MixedVolumeArity { .. } => CliError::Capacity(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successful exits.
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(&args),
        Command::Polytope(args) => cmd_polytope(&args),
        Command::Solve(args) => cmd_solve(&args),
        Command::Experiment(args) => cmd_experiment(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn parse_scheme(name: &str, n: usize) -> Result<TruncationScheme, CliError> {
    match name {
        "ccs" => Ok(TruncationScheme::ccs(n)),
        "ccsd" => Ok(TruncationScheme::ccsd(n)),
        "full" => Ok(TruncationScheme::full(n)),
        other => Err(CliError::Usage(format!(
            "unknown scheme '{other}' (expected ccs, ccsd, or full)"
        ))),
    }
}

fn basis_for(n: usize, k: usize) -> Result<SpinOrbitalBasis, CliError> {
    SpinOrbitalBasis::new(k, n).map_err(|e| CliError::Usage(e.to_string()))
}

fn load_hamiltonian(
    basis: SpinOrbitalBasis,
    path: Option<&Path>,
    seed: u64,
) -> Result<FockOperator<f64>, CliError> {
    let Some(path) = path else {
        return Ok(random_sector_hamiltonian(basis, seed));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let file: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("bad matrix file {}: {e}", path.display())))?;
    if file.k != basis.k || file.n != basis.n {
        return Err(CliError::Usage(format!(
            "matrix file is for N={}, K={} but the run requests N={}, K={}",
            file.n, file.k, basis.n, basis.k
        )));
    }
    let d = basis.sector_dim();
    if file.entries.len() != d * d {
        return Err(CliError::Usage(format!(
            "matrix file has {} entries, expected {}",
            file.entries.len(),
            d * d
        )));
    }
    let entries: Vec<Vec<f64>> =
        (0..d).map(|i| file.entries[i * d..(i + 1) * d].to_vec()).collect();
    hamiltonian_from_matrix(entries, basis).map_err(|e| CliError::Usage(e.to_string()))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn system_params(args: &SystemArgs) -> serde_json::Value {
    serde_json::json!({
        "n": args.n,
        "k": args.k,
        "scheme": args.scheme,
        "hamiltonian": args.hamiltonian.as_ref().map(|p| p.display().to_string()),
        "seed": args.seed,
    })
}

/// Wrap a JSON payload with the version/seed/config-hash stamp every output
/// file carries.
fn stamped(payload: serde_json::Value, seed: u64, params: &serde_json::Value) -> String {
    let doc = serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "config_hash": config_hash(params),
        "payload": payload,
    });
    serde_json::to_string_pretty(&doc).expect("serializable")
}

fn build_system(args: &SystemArgs) -> Result<GeneratedSystem<f64>, CliError> {
    let basis = basis_for(args.n, args.k)?;
    let scheme = parse_scheme(&args.scheme, args.n)?;
    let h = load_hamiltonian(basis, args.hamiltonian.as_deref(), args.seed)?;
    Ok(generate_residual_system(&h, &scheme))
}

fn cmd_generate(args: &SystemArgs) -> Result<(), CliError> {
    let generated = build_system(args)?;
    let params = system_params(args);
    let system_json: serde_json::Value =
        serde_json::from_str(&generated.system.to_json()).expect("valid JSON");
    write_file(&args.out, "system.json", &stamped(system_json, args.seed, &params))?;

    let singles = generated.system.variables.iter().filter(|v| v.rank() == 1).count();
    let doubles = generated.system.variables.iter().filter(|v| v.rank() == 2).count();
    let bounds = bezout_bounds(singles, doubles);
    let mut report = ExperimentReport::new(
        "bezout-bounds",
        args.seed,
        params,
        vec!["naive".into(), "refined".into(), "quadratic".into()],
    );
    report.push_row(vec![bounds.naive.to_f64().unwrap_or(f64::NAN), bounds.refined.to_f64().unwrap_or(f64::NAN), bounds.quadratic.to_f64().unwrap_or(f64::NAN)]);
    write_file(&args.out, "bounds.csv", &report.to_csv())
}

fn cmd_polytope(args: &SystemArgs) -> Result<(), CliError> {
    let generated = build_system(args)?;
    let params = system_params(args);
    let mut polytopes = Vec::new();
    for (i, eq) in generated.system.equations.iter().enumerate() {
        match newton_polytope(eq) {
            Ok(p) => {
                let payload: serde_json::Value =
                    serde_json::from_str(&p.to_json()).expect("valid JSON");
                write_file(
                    &args.out,
                    &format!("polytope_{i}.json"),
                    &stamped(payload, args.seed, &params),
                )?;
                polytopes.push(p);
            }
            Err(e @ PolytopeError::DimensionCap { .. }) => {
                // Beyond the exact-hull cap: fall back to the surrogate
                // generator sets, which scale to arbitrary dimension.
                println!("exact hulls skipped: {e}");
                let basis = basis_for(args.n, args.k)?;
                let payload = serde_json::json!({
                    "singles_generators": surrogate_generators(basis, SurrogateKind::Singles),
                    "doubles_generators": surrogate_generators(basis, SurrogateKind::Doubles),
                });
                write_file(&args.out, "surrogates.json", &stamped(payload, args.seed, &params))?;
                println!("mixed volume skipped: exact hulls unavailable at this size");
                return Ok(());
            }
            Err(e) => return Err(e.into()),
        }
    }

    let mut fv_report = ExperimentReport::new(
        "f-vectors",
        args.seed,
        params.clone(),
        vec!["equation".into(), "dimension".into(), "count".into()],
    );
    let mut graph_report = ExperimentReport::new(
        "facet-graph",
        args.seed,
        params.clone(),
        vec!["equation".into(), "facet_a".into(), "facet_b".into(), "dim".into()],
    );
    for (i, p) in polytopes.iter().enumerate() {
        let fv = f_vector(p)?;
        for (d, count) in fv.0.iter().enumerate() {
            fv_report.push_row(vec![i as f64, d as f64, *count as f64]);
        }
        let graph = facet_intersection_graph(p);
        for (a, b, dim) in graph.edges {
            graph_report.push_row(vec![i as f64, a as f64, b as f64, dim as f64]);
        }
    }
    write_file(&args.out, "fvectors.csv", &fv_report.to_csv())?;
    write_file(&args.out, "facet_graph.csv", &graph_report.to_csv())?;

    match mixed_volume(&polytopes) {
        Ok(mv) => {
            let singles = generated.system.variables.iter().filter(|v| v.rank() == 1).count();
            let doubles = generated.system.variables.iter().filter(|v| v.rank() == 2).count();
            let bounds = bezout_bounds(singles, doubles);
            let mut report = ExperimentReport::new(
                "mixed-volume",
                args.seed,
                params,
                vec![
                    "mixed_volume".into(),
                    "quadratic".into(),
                    "refined".into(),
                    "naive".into(),
                ],
            );
            let mv = mv.to_f64().unwrap_or(f64::NAN);
            report.push_row(vec![
                mv,
                bounds.quadratic.to_f64().unwrap_or(f64::NAN),
                bounds.refined.to_f64().unwrap_or(f64::NAN),
                bounds.naive.to_f64().unwrap_or(f64::NAN),
            ]);
            write_file(&args.out, "mixed_volume.csv", &report.to_csv())?;
        }
        Err(e @ PolytopeError::MixedVolumeArity { .. })
        | Err(e @ PolytopeError::DimensionCap { .. }) => {
            println!("mixed volume skipped: {e}");
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn class_code(class: RootClass) -> f64 {
    match class {
        RootClass::RealPhysical => 0.0,
        RootClass::RealUnphysical => 1.0,
        RootClass::Complex => 2.0,
    }
}

fn census_report(
    generated: &GeneratedSystem<f64>,
    h: &FockOperator<f64>,
    seed: u64,
    params: serde_json::Value,
) -> (ExperimentReport, Vec<Vec<Complex64>>) {
    let sys = generated.system.to_complex();
    let energy = generated.energy.to_complex();
    let eig = fci_eigensolve(h);
    let census = homotopy_solve_all(&sys, &HomotopyConfig { seed, ..Default::default() });
    let mut report = ExperimentReport::new(
        "homotopy-census",
        seed,
        params,
        vec![
            "root".into(),
            "energy_re".into(),
            "energy_im".into(),
            "residual_inf".into(),
            "class".into(),
        ],
    );
    for (i, root) in census.roots.iter().enumerate() {
        let e = energy.eval(root);
        let residual =
            sys.eval(root).iter().map(|v| v.norm()).fold(0.0, f64::max);
        let class = classify_root(root, e, &eig.values, eig.width());
        report.push_row(vec![i as f64, e.re, e.im, residual, class_code(class)]);
    }
    (report, census.roots)
}

fn cmd_solve(args: &SystemArgs) -> Result<(), CliError> {
    let basis = basis_for(args.n, args.k)?;
    let scheme = parse_scheme(&args.scheme, args.n)?;
    let h = load_hamiltonian(basis, args.hamiltonian.as_deref(), args.seed)?;
    let generated = generate_residual_system(&h, &scheme);
    let params = system_params(args);
    let (report, roots) = census_report(&generated, &h, args.seed, params.clone());
    if report.rows.is_empty() {
        return Err(CliError::Numerical("no roots found".into()));
    }
    write_file(&args.out, "roots.csv", &report.to_csv())?;
    let amplitudes: Vec<Vec<[f64; 2]>> = roots
        .iter()
        .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
        .collect();
    let payload = serde_json::json!({
        "report": serde_json::from_str::<serde_json::Value>(&report.to_json()).expect("valid"),
        "amplitudes": amplitudes,
    });
    write_file(&args.out, "roots.json", &stamped(payload, args.seed, &params))
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<(), CliError> {
    match args.name.as_str() {
        "ccs-trajectory" => run_ccs_trajectory(args),
        "newton-perturb" => run_newton_perturb(args),
        "homotopy-census" => run_homotopy_census(args),
        other => Err(CliError::Usage(format!(
            "unknown experiment '{other}' (valid: ccs-trajectory, newton-perturb, homotopy-census)"
        ))),
    }
}

fn run_ccs_trajectory(args: &ExperimentArgs) -> Result<(), CliError> {
    let grid = default_epsilon_grid();
    let traj = ccs_trajectory_experiment(args.gamma, &grid, args.seed);
    let params = serde_json::json!({
        "gamma": args.gamma,
        "grid_len": grid.len(),
        "grid_max": grid.last().copied(),
        "seed": args.seed,
    });
    // Branch rows carry non-negative ids; rows with id -(i+1) carry the i-th
    // exact eigenvalue at that grid point.
    let mut report = ExperimentReport::new(
        "ccs-trajectory",
        args.seed,
        params,
        vec!["epsilon".into(), "branch".into(), "energy_re".into(), "energy_im".into()],
    );
    for (b, branch) in traj.branches.iter().enumerate() {
        for (offset, point) in branch.points.iter().enumerate() {
            let eps = traj.epsilons[branch.start + offset];
            report.push_row(vec![eps, b as f64, point.energy.re, point.energy.im]);
        }
    }
    for (g, spectrum) in traj.fci_spectra.iter().enumerate() {
        for (i, value) in spectrum.iter().enumerate() {
            report.push_row(vec![traj.epsilons[g], -(i as f64 + 1.0), *value, 0.0]);
        }
    }
    write_file(&args.out, "ccs_trajectory.csv", &report.to_csv())?;
    write_file(&args.out, "ccs_trajectory.json", &report.to_json())
}

fn run_newton_perturb(args: &ExperimentArgs) -> Result<(), CliError> {
    let report = perturbation_experiment(args.seed, &args.radii, args.samples).ok_or_else(
        || CliError::Numerical("no instance met the acceptance test within 1000 draws".into()),
    )?;
    let params = serde_json::json!({
        "seed": args.seed,
        "radii": args.radii,
        "samples": args.samples,
    });
    let mut trials = ExperimentReport::new(
        "newton-perturb-trials",
        args.seed,
        params.clone(),
        vec![
            "radius".into(),
            "sample".into(),
            "converged".into(),
            "iterations".into(),
            "distance".into(),
            "class".into(),
        ],
    );
    let mut summary = ExperimentReport::new(
        "newton-perturb-summary",
        args.seed,
        params,
        vec![
            "radius".into(),
            "attempts".into(),
            "successes".into(),
            "rate".into(),
            "other_root".into(),
            "real_unphysical".into(),
        ],
    );
    for outcome in &report.outcomes {
        for (s, trial) in outcome.trials.iter().enumerate() {
            trials.push_row(vec![
                outcome.radius,
                s as f64,
                f64::from(u8::from(trial.converged)),
                trial.iterations as f64,
                trial.distance,
                trial.class.map_or(-1.0, class_code),
            ]);
        }
        summary.push_row(vec![
            outcome.radius,
            outcome.attempts as f64,
            outcome.successes as f64,
            outcome.rate(),
            outcome.other_root as f64,
            outcome.real_unphysical as f64,
        ]);
    }
    write_file(&args.out, "newton_perturb_trials.csv", &trials.to_csv())?;
    write_file(&args.out, "newton_perturb_summary.csv", &summary.to_csv())?;
    write_file(&args.out, "newton_perturb.json", &summary.to_json())
}

fn run_homotopy_census(args: &ExperimentArgs) -> Result<(), CliError> {
    let basis = basis_for(args.n, args.k)?;
    let scheme = parse_scheme(&args.scheme, args.n)?;
    let h = load_hamiltonian(basis, args.hamiltonian.as_deref(), args.seed)?;
    let generated = generate_residual_system(&h, &scheme);
    let params = serde_json::json!({
        "n": args.n,
        "k": args.k,
        "scheme": args.scheme,
        "hamiltonian": args.hamiltonian.as_ref().map(|p| p.display().to_string()),
        "seed": args.seed,
    });
    let (report, _) = census_report(&generated, &h, args.seed, params);
    write_file(&args.out, "census.csv", &report.to_csv())?;
    write_file(&args.out, "census.json", &report.to_json())
}
