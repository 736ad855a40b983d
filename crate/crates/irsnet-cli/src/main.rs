use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use irsnet_cli::fig5::{run_fig5, Fig5Config};
use irsnet_cli::fig6::{run_fig6, Fig6Config};
use irsnet_cli::fig7::{run_fig7, snr_grid, Fig7Config};
use irsnet_cli::fig8::{run_fig8, Fig8Config};
use irsnet_cli::output::{coord, sidecar_path, write_row, Metadata};
use irsnet_cli::scenario_run::run_scenario;
use irsnet_cli::validate::run_validate;
use irsnet_cli::{CliError, Result};

/// Reflecting-surface network experiments: capacity surfaces, Monte-Carlo
/// scheme comparisons, topology bound grids, scenario evaluation and the
/// oracle validation suite.
#[derive(Parser)]
#[command(name = "irsnet", version, about)]
struct Cli {
    /// Scenario config file (TOML); required by `scenario`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output CSV path; a `.meta.json` sidecar is written next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for all randomized experiments.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SnrGridArgs {
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    snr_min_db: f64,
    #[arg(long, default_value_t = 40.0, allow_hyphen_values = true)]
    snr_max_db: f64,
    #[arg(long, default_value_t = 1.0)]
    snr_step_db: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Two-pair capacity over the second pair's angular position.
    Fig5 {
        #[arg(long, default_value_t = 4)]
        elements: usize,
        /// Array length in wavelengths (elements * spacing).
        #[arg(long, default_value_t = 2.0)]
        relative_length: f64,
        #[arg(long, default_value_t = 30.0)]
        fixed_aoa_deg: f64,
        #[arg(long, default_value_t = 135.0)]
        fixed_aod_deg: f64,
        #[arg(long, default_value_t = 0.25)]
        grid_step_deg: f64,
        #[arg(long, default_value_t = 10.0)]
        snr_db: f64,
    },
    /// Monte-Carlo sum-rates of three weighting schemes vs element count.
    Fig6 {
        #[arg(long, default_value_t = 4)]
        pairs: usize,
        #[arg(long, value_delimiter = ',', default_value = "4,8,9,12,16,25,36")]
        elements: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        snr_db: f64,
        /// Draw direction cosines uniformly instead of angles.
        #[arg(long)]
        uniform_in_cos: bool,
    },
    /// Chain vs isolated-surface sum-rate bounds over SNR.
    Fig7 {
        #[arg(long, default_value_t = 6)]
        elements: usize,
        #[arg(long, value_delimiter = ',', default_value = "4,8")]
        surfaces: Vec<usize>,
        /// Power loss per inter-surface edge, dB.
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        edge_loss_db: f64,
        #[command(flatten)]
        snr: SnrGridArgs,
    },
    /// Complete-graph equal-path-decomposition bounds over SNR.
    Fig8 {
        #[arg(long, default_value_t = 6)]
        elements: usize,
        /// Cases as `<surfaces>x<path length>`.
        #[arg(long, value_delimiter = ',', default_value = "4x2,4x4,6x2,6x4,6x6")]
        cases: Vec<String>,
        #[command(flatten)]
        snr: SnrGridArgs,
    },
    /// Evaluate a scenario config: per-order channels and rates.
    Scenario,
    /// Run the oracle validation suite; nonzero exit on any failure.
    Validate,
}

fn open_out(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn finish<W: Write>(mut w: W, path: &Path) -> Result<()> {
    w.flush()
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_meta<C: serde::Serialize, X: serde::Serialize>(
    meta: &Metadata<C, X>,
    out: &Path,
) -> Result<()> {
    let path = sidecar_path(out, ".meta.json");
    meta.write_to(&path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse_case(text: &str) -> Result<(usize, usize)> {
    let mut parts = text.split('x');
    let k = parts.next().and_then(|s| s.parse().ok());
    let tau = parts.next().and_then(|s| s.parse().ok());
    match (k, tau, parts.next()) {
        (Some(k), Some(tau), None) => Ok((k, tau)),
        _ => Err(CliError::Config(format!(
            "case '{text}' is not of the form <surfaces>x<path length>"
        ))),
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Fig5 {
            elements,
            relative_length,
            fixed_aoa_deg,
            fixed_aod_deg,
            grid_step_deg,
            snr_db,
        } => {
            let cfg = Fig5Config {
                elements,
                relative_length,
                fixed_aoa_deg,
                fixed_aod_deg,
                grid_step_deg,
                snr_db,
            };
            let out = cli.out.unwrap_or_else(|| PathBuf::from("fig5.csv"));
            let mut w = open_out(&out)?;
            let result = run_fig5(&cfg, &mut w)?;
            finish(w, &out)?;

            let optima_path = sidecar_path(&out, ".optima.csv");
            let mut ow = open_out(&optima_path)?;
            write_row(&mut ow, &["alpha_deg".into(), "beta_deg".into()])?;
            for (a, b) in &result.optima_deg {
                write_row(&mut ow, &[coord(*a), coord(*b)])?;
            }
            finish(ow, &optima_path)?;

            let meta = Metadata::new(
                "fig5",
                None,
                "angles in degrees, capacity in bits",
                cfg,
                serde_json::json!({ "optima_deg": result.optima_deg }),
            );
            write_meta(&meta, &out)?;
            Ok(0)
        }
        Command::Fig6 {
            pairs,
            elements,
            trials,
            snr_db,
            uniform_in_cos,
        } => {
            let cfg = Fig6Config {
                pairs,
                element_grid: elements,
                trials,
                seed: cli.seed,
                snr_db,
                uniform_in_cos,
            };
            let out = cli.out.unwrap_or_else(|| PathBuf::from("fig6.csv"));
            let mut w = open_out(&out)?;
            let rows = run_fig6(&cfg, &mut w)?;
            finish(w, &out)?;
            let meta = Metadata::new(
                "fig6",
                Some(cli.seed),
                "rates in bits, residuals in absolute gain",
                cfg,
                serde_json::json!({ "rows": rows }),
            );
            write_meta(&meta, &out)?;
            Ok(0)
        }
        Command::Fig7 {
            elements,
            surfaces,
            edge_loss_db,
            snr,
        } => {
            let cfg = Fig7Config {
                elements,
                surface_counts: surfaces,
                snr_db_grid: snr_grid(snr.snr_min_db, snr.snr_max_db, snr.snr_step_db)?,
                edge_loss_db,
            };
            let out = cli.out.unwrap_or_else(|| PathBuf::from("fig7.csv"));
            let mut w = open_out(&out)?;
            run_fig7(&cfg, &mut w)?;
            finish(w, &out)?;
            let meta = Metadata::new(
                "fig7",
                None,
                "snr and edge loss in dB, bounds in bits",
                cfg,
                serde_json::json!({}),
            );
            write_meta(&meta, &out)?;
            Ok(0)
        }
        Command::Fig8 {
            elements,
            cases,
            snr,
        } => {
            let parsed: Result<Vec<(usize, usize)>> = cases.iter().map(|c| parse_case(c)).collect();
            let cfg = Fig8Config {
                elements,
                cases: parsed?,
                snr_db_grid: snr_grid(snr.snr_min_db, snr.snr_max_db, snr.snr_step_db)?,
            };
            let out = cli.out.unwrap_or_else(|| PathBuf::from("fig8.csv"));
            let mut w = open_out(&out)?;
            let cells = run_fig8(&cfg, &mut w)?;
            finish(w, &out)?;
            let path_counts: Vec<_> = cells
                .iter()
                .map(|c| (c.surfaces, c.tau, c.n_tau))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let meta = Metadata::new(
                "fig8",
                None,
                "snr in dB, bounds in bits",
                cfg,
                serde_json::json!({ "path_counts": path_counts }),
            );
            write_meta(&meta, &out)?;
            Ok(0)
        }
        Command::Scenario => {
            let config_path = cli
                .config
                .ok_or_else(|| CliError::Config("scenario requires --config <path>".into()))?;
            let text = std::fs::read_to_string(&config_path)
                .map_err(|e| CliError::Io(format!("{}: {e}", config_path.display())))?;
            let out = cli.out.unwrap_or_else(|| PathBuf::from("scenario.csv"));
            let mut w = open_out(&out)?;
            let summary = run_scenario(&text, &mut w)?;
            finish(w, &out)?;
            let meta = Metadata::new(
                "scenario",
                None,
                "channel entries linear, rates in bits",
                serde_json::json!({ "config_path": config_path.display().to_string() }),
                serde_json::json!({ "summary": summary }),
            );
            write_meta(&meta, &out)?;
            println!(
                "capacity {:.6} bits, sum rate {:.6} bits over {} pairs",
                summary.capacity_bits, summary.sum_rate_bits, summary.pairs
            );
            Ok(0)
        }
        Command::Validate => {
            let report = run_validate(cli.seed);
            let rendered = report.render();
            print!("{rendered}");
            if let Some(out) = cli.out {
                std::fs::write(&out, &rendered)
                    .map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // Thread count never affects results, only wall time; a pre-existing
        // global pool is fine.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
