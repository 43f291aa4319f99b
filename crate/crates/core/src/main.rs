use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use couette_nsp::dynamics::{integrate_mode, oracle_zero_inviscid};
use couette_nsp::harness::csv::write_table;
use couette_nsp::harness::scenario::exit_code;
use couette_nsp::harness::sweep::write_sweep;
use couette_nsp::harness::{run_scenario, sweep_nu, verify_suite, write_outputs, ScenarioConfig, Suite};
use couette_nsp::{Error, Mode, ModeState, PhysParams, Result, Species};

#[derive(Parser)]
#[command(name = "couette-nsp", version, about = "Linearized NSP perturbations of Couette flow")]
struct Cli {
    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Overrides the config seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (defaults to all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write energy.csv / observables.csv
    Simulate { config: PathBuf },
    /// Run a property suite
    Verify {
        config: PathBuf,
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Run the scenario for each viscosity and write sweep.csv
    Sweep {
        config: PathBuf,
        /// Comma-separated viscosities
        #[arg(long, value_delimiter = ',', required = true)]
        nu: Vec<f64>,
    },
    /// Compare against a closed-form solution: electron-zero or ion-zero
    Oracle { case: String },
}

fn load(path: &Path, seed: Option<u64>) -> Result<ScenarioConfig> {
    let mut c = ScenarioConfig::from_file(path)?;
    if let Some(s) = seed {
        c.seed = s;
    }
    c.validate()?;
    Ok(c)
}

fn oracle(case: &str, out: &Path) -> Result<bool> {
    let species = match case {
        "electron-zero" => Species::Electron,
        "ion-zero" => Species::Ion,
        other => return Err(Error::InvalidParameter(format!("unknown oracle case `{other}`"))),
    };
    let p = PhysParams::new(species, 0.0, 0.0, 1.0)?;
    let y0 = ModeState::real(1.0, 0.0, 0.0);
    let samples: Vec<f64> = (1..=500).map(|i| i as f64 * 0.1).collect();
    let tr = integrate_mode(y0, Mode::new(0, 1.0), &p, 50.0, 1e-12, 1e-14, &samples)?;
    let mut rows = Vec::with_capacity(tr.len());
    let mut worst = 0.0f64;
    for (t, s) in tr.times.iter().zip(&tr.states) {
        let exact = oracle_zero_inviscid(species, 1.0, 1.0, y0, *t)?;
        let err = (s.pi - exact.pi).norm();
        worst = worst.max(err);
        rows.push(vec![*t, s.pi.re, exact.pi.re, err]);
    }
    let header = ["t", "eta", "eta_exact", "abs_err"].map(String::from);
    let meta = vec![format!("oracle={case} xi=1 mach=1 nu=0 lambda=0"), format!("max_err={worst:e}")];
    write_table(&out.join("oracle.csv"), &meta, &header, &rows)?;
    println!("{case}: max |eta - eta_exact| = {worst:e}");
    Ok(worst <= 1e-8)
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.cmd {
        Command::Simulate { config } => {
            let c = load(config, cli.seed)?;
            let out = run_scenario(&c)?;
            write_outputs(&out, &cli.out)?;
            for (name, fit) in out.energy.columns.iter().zip(&out.energy.fits) {
                if let Some(f) = fit {
                    println!("{name}: rate {:e} prefactor {:e} residual {:e}", f.rate, f.prefactor, f.residual);
                }
            }
            Ok(true)
        }
        Command::Verify { config, suite } => {
            let c = load(config, cli.seed)?;
            let suite: Suite = suite.parse()?;
            let rep = verify_suite(&c, suite)?;
            print!("{}", rep.render(20));
            Ok(rep.passed())
        }
        Command::Sweep { config, nu } => {
            let c = load(config, cli.seed)?;
            let table = sweep_nu(&c, nu)?;
            write_sweep(&table, &c, &cli.out.join("sweep.csv"))?;
            for r in &table.rows {
                println!(
                    "nu={:e} G={:e} G*nu^(1/6)={:e} envelope*nu^(1/2)={:e}",
                    r.nu, r.growth, r.growth_scaled, r.envelope_scaled
                );
            }
            if let Some(s) = table.growth_slope {
                println!("log-log slope of G: {s:.4}");
            }
            Ok(true)
        }
        Command::Oracle { case } => oracle(case, &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
