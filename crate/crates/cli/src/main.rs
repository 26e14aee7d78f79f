use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use fiberforce::consts::C;
use fiberforce::emission::GuidedSet;
use fiberforce::fiber::FiberSpec;
use fiberforce::scan::scenarios::{find, scenarios};
use fiberforce::scan::{run_scan, write_tables, Output, ScanConfig, ScanError, SiteCache};

/// Radiation forces on a two-level atom near an ultrathin optical fiber.
#[derive(Parser)]
#[command(name = "fiberforce", version)]
struct Cli {
    /// Worker threads; 1 keeps runs bit-reproducible across machines.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Guided modes and their dispersion at the transition wavelength.
    Modes {
        /// Take fiber and wavelength from a scan configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 350e-9)]
        radius_m: f64,
        #[arg(long, default_value_t = 1.4537)]
        n1: f64,
        #[arg(long, default_value_t = 1.0)]
        n2: f64,
        #[arg(long, default_value_t = 780e-9)]
        wavelength_m: f64,
    },
    /// Decay rates over the grid of a scan configuration.
    Rates {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a scan configuration.
    Scan {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a bundled figure scenario (`fig2` … `fig21`, a panel such as
    /// `fig5b`, or `all`).
    Scenario {
        name: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Print the resolved configuration instead of running.
        #[arg(long)]
        dump_config: bool,
    },
    /// List the bundled scenarios.
    ListScenarios,
}

fn exit_code(e: &ScanError) -> u8 {
    match e {
        ScanError::Config(_) => 2,
        ScanError::Numerical { .. } | ScanError::Io(_) => 3,
    }
}

fn read_config(path: &Path) -> Result<ScanConfig, ScanError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScanError::Config(format!("{}: {e}", path.display())))?;
    ScanConfig::from_toml(&text)
}

fn modes(fiber: FiberSpec, wavelength: f64) -> Result<(), ScanError> {
    let omega = 2.0 * std::f64::consts::PI * C / wavelength;
    let set = GuidedSet::solve(&fiber, omega).map_err(|source| ScanError::Numerical {
        point: format!("wavelength {wavelength:e} m"),
        source,
    })?;
    println!("# V = {:.6}", fiber.v_number(omega));
    println!("mode,beta_rad_per_m,n_eff,beta_prime_s_per_m,n_group");
    for m in &set.modes {
        let k = omega / C;
        println!(
            "{},{:.8e},{:.8e},{:.8e},{:.8e}",
            m.order,
            m.beta,
            m.beta / k,
            m.beta_prime,
            m.beta_prime * C
        );
    }
    Ok(())
}

fn run_panels(panels: &[ScanConfig], out: &Path, cache: &SiteCache) -> Result<(), ScanError> {
    for p in panels {
        let t0 = Instant::now();
        let tables = run_scan(p, cache)?;
        write_tables(out, &tables)?;
        for t in &tables {
            eprintln!("wrote {}", out.join(&t.file_name).display());
        }
        eprintln!("{}: {:.1} s", p.name, t0.elapsed().as_secs_f64());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), ScanError> {
    let cache = SiteCache::new();
    match cli.command {
        Command::Modes {
            config,
            radius_m,
            n1,
            n2,
            wavelength_m,
        } => {
            let (fiber, wavelength) = match config {
                Some(path) => {
                    let cfg = read_config(&path)?;
                    (cfg.fiber_spec()?, cfg.atom.wavelength_m)
                }
                None => (
                    FiberSpec::new(radius_m, n1, n2).map_err(|e| ScanError::Config(e.to_string()))?,
                    wavelength_m,
                ),
            };
            if !(wavelength > 0.0 && wavelength.is_finite()) {
                return Err(ScanError::Config(format!("wavelength {wavelength} m")));
            }
            modes(fiber, wavelength)
        }
        Command::Rates { config, out } => {
            let mut cfg = read_config(&config)?;
            cfg.outputs = vec![Output::Rates];
            run_panels(&[cfg], &out, &cache)
        }
        Command::Scan { config, out } => run_panels(&[read_config(&config)?], &out, &cache),
        Command::Scenario {
            name,
            out,
            dump_config,
        } => {
            let panels: Vec<ScanConfig> = if name == "all" {
                scenarios().into_iter().flat_map(|s| s.panels).collect()
            } else {
                find(&name).ok_or_else(|| ScanError::Config(format!("unknown scenario {name:?}")))?
            };
            if dump_config {
                for p in &panels {
                    println!("{}", p.to_toml());
                }
                return Ok(());
            }
            let t0 = Instant::now();
            run_panels(&panels, &out, &cache)?;
            eprintln!("total: {:.1} s", t0.elapsed().as_secs_f64());
            Ok(())
        }
        Command::ListScenarios => {
            for s in scenarios() {
                let panels: Vec<&str> = s.panels.iter().map(|p| p.name.as_str()).collect();
                let files: Vec<String> = s
                    .panels
                    .iter()
                    .flat_map(|p| p.outputs.iter().map(move |o| format!("{}_{}.csv", p.name, o.name())))
                    .collect();
                println!("{:<6} {}", s.name, s.summary);
                println!("       panels: {}; files: {}", panels.join(", "), files.join(", "));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build_global() {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(3);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
