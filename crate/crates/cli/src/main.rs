use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gapscope::config::{ConfigError, ExperimentConfig, ModelConfig, SweepParameter};
use gapscope::manifest::Manifest;
use gapscope::runner::{oracle_rows, refined_grid, run_experiment, BenchRow, RunOptions};
use gapscope::{csvio, plot};

/// Largest system for which `run` also writes a refined benchmark curve.
const BENCH_QUBITS: usize = 10;

#[derive(Parser)]
#[command(name = "gapscope", version, about = "Energy-gap estimation from simulated time series")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct ConfigArg {
    /// Config or manifest JSON file.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// Built-in preset: ising-paper or molecule-paper.
    #[arg(long)]
    preset: Option<String>,
}

impl ConfigArg {
    fn load(&self) -> Result<ExperimentConfig, ConfigError> {
        match (&self.config, &self.preset) {
            (Some(p), _) => ExperimentConfig::load(p),
            (None, Some(name)) => ExperimentConfig::from_preset(name),
            (None, None) => unreachable!("clap requires one"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotMode {
    Sweep,
    Waves,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a sweep and write CSV tables, plots and a manifest.
    Run {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Write the native circuit of the first sweep point here.
        #[arg(long)]
        dump_circuit: Option<PathBuf>,
    },
    /// Exact gaps from dense diagonalization.
    Oracle {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(short, long)]
        output: PathBuf,
        /// Also report |⟨Ω_j|O|Ω_i⟩|.
        #[arg(long)]
        amplitude: bool,
        /// Extra points between consecutive sweep values.
        #[arg(long, default_value_t = 0)]
        refine: usize,
    },
    /// Render an SVG from CSV outputs.
    Plot {
        #[arg(long, value_enum, default_value = "sweep")]
        mode: PlotMode,
        /// Estimates CSV (sweep mode).
        #[arg(long)]
        est: Option<PathBuf>,
        /// Benchmark CSV (sweep mode).
        #[arg(long)]
        bench: Option<PathBuf>,
        /// Series CSV (waves mode).
        #[arg(long)]
        series: Option<PathBuf>,
        /// Curves CSV (waves mode).
        #[arg(long)]
        curves: Option<PathBuf>,
        /// Config whose bands are shaded.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a config and print the resolved form.
    Validate {
        #[command(flatten)]
        config: ConfigArg,
    },
}

#[derive(Debug)]
enum Failure {
    Config(ConfigError),
    Other(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

macro_rules! other {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Other(e.to_string())
            }
        }
    )*};
}
other!(std::io::Error, csvio::CsvError, gapscope::core::GapError, serde_json::Error);

fn xlabel(cfg: Option<&ExperimentConfig>) -> &'static str {
    match cfg.map(|c| c.sweep.parameter) {
        Some(SweepParameter::BondLengthAngstrom) => "bond length (Å)",
        _ => "h3 / J1",
    }
}

fn write_file(dir: &Path, name: &str, bytes: &[u8], manifest: &mut Manifest) -> Result<(), Failure> {
    std::fs::write(dir.join(name), bytes)?;
    manifest.record_output(name, bytes);
    Ok(())
}

fn run(config: &ConfigArg, seed: Option<u64>, out_dir: &Path, dump: Option<&Path>) -> Result<bool, Failure> {
    let mut cfg = config.load()?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    std::fs::create_dir_all(out_dir)?;
    let out = run_experiment(&cfg, RunOptions { dump_circuit: dump.is_some() })?;
    for w in &out.warnings {
        log::warn!("{w}");
    }

    let n = out.points.iter().find_map(|p| p.n_qubits);
    let xs: Vec<f64> = out.rows.iter().map(|r| r.sweep_value).collect();
    let bench_xs = match (&cfg.model, n) {
        (ModelConfig::Ising { .. }, Some(n)) if n <= BENCH_QUBITS => refined_grid(&xs, 3),
        _ => xs.clone(),
    };
    let bench: Vec<BenchRow> = match n {
        Some(n) if n <= gapscope::core::pauli::max_dense_qubits() => match oracle_rows(&cfg, &bench_xs, false) {
            Ok(b) => b,
            Err(e) => {
                log::warn!("benchmark curve skipped: {e}");
                Vec::new()
            }
        },
        _ => Vec::new(),
    };

    let o = &cfg.output;
    let mut manifest = Manifest::new(&out);
    let mut buf = Vec::new();
    csvio::write_estimates(&mut buf, &out.rows)?;
    write_file(out_dir, &o.csv, &buf, &mut manifest)?;
    buf.clear();
    csvio::write_series(&mut buf, &out.series)?;
    write_file(out_dir, &o.series_csv, &buf, &mut manifest)?;
    buf.clear();
    csvio::write_curves(&mut buf, &out.curves)?;
    write_file(out_dir, &o.curves_csv, &buf, &mut manifest)?;
    buf.clear();
    csvio::write_bench(&mut buf, &bench)?;
    write_file(out_dir, &o.benchmark_csv, &buf, &mut manifest)?;
    let svg = plot::sweep_svg(&out.rows, &bench, &cfg.bands, xlabel(Some(&cfg)));
    write_file(out_dir, &o.plot, svg.as_bytes(), &mut manifest)?;
    let svg = plot::waves_svg(&out.series, &out.curves);
    write_file(out_dir, &o.waves_plot, svg.as_bytes(), &mut manifest)?;

    if let Some(path) = dump {
        match &out.circuit {
            Some(Ok(c)) => std::fs::write(path, c.dump())?,
            Some(Err(e)) => log::warn!("circuit dump skipped: {e}"),
            None => log::warn!("circuit dump skipped: first point failed before compilation"),
        }
    }
    manifest.write(&out_dir.join(&o.manifest))?;

    let failed = out.failed();
    eprintln!(
        "{} points, {} failed; outputs in {}",
        out.rows.len(),
        failed,
        out_dir.display()
    );
    for r in out.rows.iter().filter(|r| !r.is_ok()) {
        eprintln!("  {}: {}", r.sweep_value, r.error.as_deref().unwrap_or("unknown error"));
    }
    Ok(failed == 0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result: Result<bool, Failure> = (|| match cli.cmd {
        Cmd::Run { config, seed, out_dir, dump_circuit } => run(&config, seed, &out_dir, dump_circuit.as_deref()),
        Cmd::Oracle { config, output, amplitude, refine } => {
            let cfg = config.load()?;
            let xs = refined_grid(&cfg.sweep_values()?, refine);
            let rows = oracle_rows(&cfg, &xs, amplitude)?;
            csvio::write_bench(csvio::create(&output)?, &rows)?;
            Ok(true)
        }
        Cmd::Plot { mode, est, bench, series, curves, config, output } => {
            let cfg = config.as_deref().map(ExperimentConfig::load).transpose()?;
            let svg = match mode {
                PlotMode::Sweep => {
                    let est = est.ok_or_else(|| Failure::Other("sweep mode needs --est".into()))?;
                    let rows = csvio::read_estimates(csvio::open(&est)?)?;
                    let bench = match bench {
                        Some(p) => csvio::read_bench(csvio::open(&p)?)?,
                        None => Vec::new(),
                    };
                    let bands = cfg.as_ref().map(|c| c.bands.clone()).unwrap_or_default();
                    plot::sweep_svg(&rows, &bench, &bands, xlabel(cfg.as_ref()))
                }
                PlotMode::Waves => {
                    let series = series.ok_or_else(|| Failure::Other("waves mode needs --series".into()))?;
                    let s = csvio::read_series(csvio::open(&series)?)?;
                    let c = match curves {
                        Some(p) => csvio::read_curves(csvio::open(&p)?)?,
                        None => Vec::new(),
                    };
                    plot::waves_svg(&s, &c)
                }
            };
            std::fs::write(&output, svg)?;
            Ok(true)
        }
        Cmd::Validate { config } => {
            let cfg = config.load()?;
            println!("{}", serde_json::to_string_pretty(&cfg.to_value())?);
            if cfg.budget() != gapscope::config::PAPER_BUDGET {
                eprintln!("note: Trotter budget {} differs from the reference {}", cfg.budget(), gapscope::config::PAPER_BUDGET);
            }
            Ok(true)
        }
    })();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
