//! Command-line front end: each subcommand reads a JSON config (flags
//! override it), runs one experiment, writes `<output>.csv` and
//! `<output>.json`, and prints one pass/fail line per check.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage/config error.

use clap::{Args, Parser, Subcommand};
use kml::harness::config::{CSpec, GridCfg, RunConfig};
use kml::harness::experiments;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "kml", version, about = "Mass-constrained Kirchhoff minimization laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute (or load from cache) the ground-state profile Q_p
    GroundState(CommonArgs),
    /// Tabulate closed-form predictions (m_c, i0, mu_c) over a mass sweep
    TheoryTable(CommonArgs),
    /// Run the constrained gradient flow at a single mass
    Minimize(CommonArgs),
    /// Continuation sweep of the flow over an ascending mass list
    Sweep(CommonArgs),
    /// Large-mass concentration study against the rescaled ground state
    Concentrate(CommonArgs),
    /// Energy along the dilated cutoff profile in the unbounded regime
    Blowup(CommonArgs),
    /// Vanishing-energy limit along a descending mass list
    SmallMass(CommonArgs),
    /// Sharp-interpolation fuzz: ratio <= 1 over random smooth fields
    GnCheck(CommonArgs),
    /// Fast invariant battery; nonzero exit on any failed check
    Verify(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; flags below override its entries
    #[arg(long)]
    config: Option<PathBuf>,

    /// spatial dimension
    #[arg(long = "N", value_name = "DIM")]
    dim: Option<usize>,

    /// nonlinearity exponent
    #[arg(long)]
    p: Option<f64>,

    #[arg(long)]
    a: Option<f64>,

    #[arg(long)]
    b: Option<f64>,

    /// mass (or comma-separated list)
    #[arg(long, value_name = "C[,C...]", allow_hyphen_values = false)]
    c: Option<String>,

    /// geometric mass sweep start:stop:count
    #[arg(long, value_name = "START:STOP:COUNT")]
    c_geom: Option<String>,

    /// potential kind: zero | harmonic | power | tabulated
    #[arg(long)]
    potential: Option<String>,

    /// harmonic coefficient in V = omega |x|^2
    #[arg(long)]
    omega: Option<f64>,

    /// path of a tabulated potential (V-TABLE v1)
    #[arg(long)]
    potential_path: Option<PathBuf>,

    /// grid geometry: line | radial
    #[arg(long)]
    geometry: Option<String>,

    /// grid half-width (line) or radius (radial)
    #[arg(long)]
    extent: Option<f64>,

    /// number of grid nodes
    #[arg(long)]
    grid_n: Option<usize>,

    /// flow tolerance on the projected gradient
    #[arg(long)]
    tol: Option<f64>,

    #[arg(long)]
    max_iter: Option<usize>,

    /// flow initialization: gaussian | theory_profile
    #[arg(long)]
    init: Option<String>,

    /// proceed outside the existence region (exploratory)
    #[arg(long)]
    allow_outside_existence: bool,

    /// output base path (writes BASE.csv and BASE.json)
    #[arg(long, short)]
    output: Option<PathBuf>,

    #[arg(long)]
    seed: Option<u64>,

    /// ground-state cache directory
    #[arg(long)]
    cache_dir: Option<PathBuf>,

    /// number of random fields for fuzz-style runs
    #[arg(long)]
    count: Option<usize>,
}

fn parse_c_list(s: &str) -> Result<CSpec, String> {
    let items: Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let items = items.map_err(|e| format!("bad mass list `{s}`: {e}"))?;
    Ok(if items.len() == 1 { CSpec::Scalar(items[0]) } else { CSpec::List(items) })
}

fn parse_c_geom(s: &str) -> Result<CSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected start:stop:count, got `{s}`"));
    }
    let start = parts[0].parse::<f64>().map_err(|e| e.to_string())?;
    let stop = parts[1].parse::<f64>().map_err(|e| e.to_string())?;
    let count = parts[2].parse::<usize>().map_err(|e| e.to_string())?;
    Ok(CSpec::Geom { geom: (start, stop, count) })
}

fn build_config(args: &CommonArgs) -> Result<RunConfig, String> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::from_file(path).map_err(|e| e.to_string())?,
        None => {
            let (dim, p) = match (args.dim, args.p) {
                (Some(d), Some(p)) => (d, p),
                _ => return Err("without --config, both --N and --p are required".into()),
            };
            RunConfig {
                experiment: None,
                params: kml::harness::config::ParamsCfg { a: 1.0, b: 1.0, p, dim },
                c: CSpec::default(),
                potential: Default::default(),
                grid: None,
                flow: Default::default(),
                output: None,
                seed: 42,
                cache_dir: None,
                t_grid: None,
                floor: None,
                count: None,
            }
        }
    };
    if let Some(d) = args.dim {
        cfg.params.dim = d;
    }
    if let Some(p) = args.p {
        cfg.params.p = p;
    }
    if let Some(a) = args.a {
        cfg.params.a = a;
    }
    if let Some(b) = args.b {
        cfg.params.b = b;
    }
    if let Some(c) = &args.c {
        cfg.c = parse_c_list(c)?;
    }
    if let Some(cg) = &args.c_geom {
        cfg.c = parse_c_geom(cg)?;
    }
    if let Some(kind) = &args.potential {
        cfg.potential.kind = kind.clone();
    }
    if let Some(omega) = args.omega {
        cfg.potential.omega = Some(omega);
    }
    if let Some(path) = &args.potential_path {
        cfg.potential.path = Some(path.clone());
    }
    if args.geometry.is_some() || args.extent.is_some() || args.grid_n.is_some() {
        let current = cfg.grid.clone();
        let geometry = args
            .geometry
            .clone()
            .or_else(|| current.as_ref().map(|g| g.geometry.clone()))
            .unwrap_or_else(|| if cfg.params.dim == 1 { "line".into() } else { "radial".into() });
        let extent = args
            .extent
            .or_else(|| current.as_ref().map(|g| g.extent))
            .unwrap_or(40.0);
        let n = args.grid_n.or_else(|| current.as_ref().map(|g| g.n)).unwrap_or(1601);
        cfg.grid = Some(GridCfg { geometry, extent, n });
    }
    if let Some(tol) = args.tol {
        cfg.flow.tol = tol;
    }
    if let Some(mi) = args.max_iter {
        cfg.flow.max_iter = mi;
    }
    if let Some(init) = &args.init {
        cfg.flow.init = init.clone();
    }
    if args.allow_outside_existence {
        cfg.flow.allow_outside_existence = true;
    }
    if let Some(out) = &args.output {
        cfg.output = Some(out.clone());
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = &args.cache_dir {
        cfg.cache_dir = Some(dir.clone());
    }
    if let Some(count) = args.count {
        cfg.count = Some(count);
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Command::GroundState(a) => ("ground-state", a),
        Command::TheoryTable(a) => ("theory-table", a),
        Command::Minimize(a) => ("minimize", a),
        Command::Sweep(a) => ("sweep", a),
        Command::Concentrate(a) => ("concentrate", a),
        Command::Blowup(a) => ("blowup", a),
        Command::SmallMass(a) => ("small-mass", a),
        Command::GnCheck(a) => ("gn-check", a),
        Command::Verify(a) => ("verify", a),
    };

    let cfg = match build_config(args) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("config error: {msg}");
            return ExitCode::from(2);
        }
    };
    // a config file may pin its experiment; the subcommand must agree
    if let Some(exp) = &cfg.experiment {
        if exp != name {
            eprintln!("config error: config is for experiment `{exp}`, subcommand is `{name}`");
            return ExitCode::from(2);
        }
    }

    let report = match experiments::run(name, &cfg) {
        Ok(report) => report,
        Err(kml::Error::Config(msg)) => {
            eprintln!("config error: {msg}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };

    report.print_checks();
    if let Some(base) = &cfg.output {
        if let Err(e) = report.write(base) {
            eprintln!("error writing output: {e}");
            return ExitCode::from(1);
        }
        println!(
            "wrote {}.csv and {}.json ({} rows)",
            base.display(),
            base.display(),
            report.rows.len()
        );
    } else {
        print!("{}", report.csv());
    }

    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
