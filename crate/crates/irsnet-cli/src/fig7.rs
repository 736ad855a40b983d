//! Chain-versus-isolated sum-rate bounds over an SNR grid, lossless and with
//! a per-edge power loss on the cascaded route.

use std::io::Write;

use serde::Serialize;

use irsnet::{bound_lg_with_edge_loss, bound_ng, RateParams};

use crate::output::{coord, num, write_row};
use crate::{CliError, Result};

#[derive(Debug, Clone, Serialize)]
pub struct Fig7Config {
    pub elements: usize,
    pub surface_counts: Vec<usize>,
    pub snr_db_grid: Vec<f64>,
    /// Power loss per inter-surface edge in dB (0 rows are always emitted).
    pub edge_loss_db: f64,
}

impl Fig7Config {
    pub fn with_snr_range(elements: usize, surface_counts: Vec<usize>, edge_loss_db: f64) -> Self {
        Fig7Config {
            elements,
            surface_counts,
            snr_db_grid: default_snr_grid(),
            edge_loss_db,
        }
    }
}

impl Default for Fig7Config {
    fn default() -> Self {
        Fig7Config::with_snr_range(6, vec![4, 8], 10.0)
    }
}

/// The default plotting range; the low end keeps the lossless crossover
/// between the two bounds inside the grid.
pub fn default_snr_grid() -> Vec<f64> {
    (-10..=40).map(|db| db as f64).collect()
}

pub fn snr_grid(min_db: f64, max_db: f64, step_db: f64) -> Result<Vec<f64>> {
    if step_db <= 0.0 || max_db < min_db {
        return Err(CliError::Config(format!(
            "invalid SNR grid {min_db}..{max_db} step {step_db}"
        )));
    }
    let n = ((max_db - min_db) / step_db).round() as usize;
    Ok((0..=n).map(|i| min_db + i as f64 * step_db).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct Fig7Cell {
    pub surfaces: usize,
    pub snr_db: f64,
    pub edge_loss_db: f64,
    pub bound_lg_bits: f64,
    pub bound_ng_bits: f64,
}

pub fn run_fig7<W: Write>(cfg: &Fig7Config, out: &mut W) -> Result<Vec<Fig7Cell>> {
    if cfg.snr_db_grid.is_empty() || cfg.surface_counts.is_empty() {
        return Err(CliError::Config("fig7 grids must be non-empty".into()));
    }
    let mut losses = vec![0.0];
    if cfg.edge_loss_db != 0.0 {
        losses.push(cfg.edge_loss_db);
    }

    let mut cells = Vec::new();
    for &k in &cfg.surface_counts {
        for &loss_db in &losses {
            let edge_power_loss = 10f64.powf(-loss_db / 10.0);
            for &snr_db in &cfg.snr_db_grid {
                let params = RateParams::from_snr_db(snr_db)?;
                let lg = bound_lg_with_edge_loss(cfg.elements, k, &params, edge_power_loss);
                let ng = bound_ng(cfg.elements, k, cfg.elements, &params)?;
                cells.push(Fig7Cell {
                    surfaces: k,
                    snr_db,
                    edge_loss_db: loss_db,
                    bound_lg_bits: lg,
                    bound_ng_bits: ng,
                });
            }
        }
    }

    write_row(
        out,
        &[
            "surfaces".into(),
            "snr_db".into(),
            "edge_loss_db".into(),
            "bound_lg_bits".into(),
            "bound_ng_bits".into(),
        ],
    )?;
    for c in &cells {
        write_row(
            out,
            &[
                c.surfaces.to_string(),
                coord(c.snr_db),
                coord(c.edge_loss_db),
                num(c.bound_lg_bits),
                num(c.bound_ng_bits),
            ],
        )?;
    }
    Ok(cells)
}
