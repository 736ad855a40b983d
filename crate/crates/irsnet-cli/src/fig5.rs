//! Capacity-versus-position surface: one pair fixed and matched, the second
//! pair swept over the whole angular grid. Peaks of the surface land on the
//! analytically enumerated companion positions.

use std::io::Write;

use ndarray::Array2;
use rayon::prelude::*;
use serde::Serialize;

use irsnet::{
    logdet_capacity, mrc_weights, optimal_positions, single_irs_channel, Angle, RateParams,
    TransceiverPair, UlaSurface,
};

use crate::output::{coord, num, write_row};
use crate::{CliError, Result};

#[derive(Debug, Clone, Serialize)]
pub struct Fig5Config {
    pub elements: usize,
    pub relative_length: f64,
    pub fixed_aoa_deg: f64,
    pub fixed_aod_deg: f64,
    pub grid_step_deg: f64,
    pub snr_db: f64,
}

impl Default for Fig5Config {
    fn default() -> Self {
        Fig5Config {
            elements: 4,
            relative_length: 2.0,
            fixed_aoa_deg: 30.0,
            fixed_aod_deg: 135.0,
            grid_step_deg: 0.25,
            snr_db: 10.0,
        }
    }
}

pub struct Fig5Output {
    /// Swept grid coordinates (identical for both axes).
    pub grid_deg: Vec<f64>,
    /// Capacity in bits at `(aoa, aod) = (grid[i], grid[j])`, indexed `(i, j)`.
    pub capacity: Array2<f64>,
    /// Companion positions (aoa_deg, aod_deg) the matched weights also serve.
    pub optima_deg: Vec<(f64, f64)>,
}

pub fn run_fig5<W: Write>(cfg: &Fig5Config, out: &mut W) -> Result<Fig5Output> {
    let steps = 180.0 / cfg.grid_step_deg;
    if cfg.grid_step_deg <= 0.0 || (steps - steps.round()).abs() > 1e-9 {
        return Err(CliError::Config(format!(
            "grid_step_deg {} does not divide the 0..180 degree range",
            cfg.grid_step_deg
        )));
    }
    let spacing = cfg.relative_length / cfg.elements as f64;
    let surface = UlaSurface::new(cfg.elements, spacing)?;
    let fixed = TransceiverPair::new(
        Angle::from_degrees(cfg.fixed_aoa_deg)?,
        Angle::from_degrees(cfg.fixed_aod_deg)?,
    );
    let weights = mrc_weights(&fixed, &surface, None).weights;
    let params = RateParams::from_snr_db(cfg.snr_db)?;

    let n = steps.round() as usize - 1; // interior points only
    let grid_deg: Vec<f64> = (1..=n).map(|i| i as f64 * cfg.grid_step_deg).collect();

    let rows: Vec<Vec<f64>> = grid_deg
        .par_iter()
        .map(|&aoa_deg| {
            let aoa = Angle::from_degrees(aoa_deg).expect("grid angle");
            grid_deg
                .iter()
                .map(|&aod_deg| {
                    let aod = Angle::from_degrees(aod_deg).expect("grid angle");
                    let second = TransceiverPair::new(aoa, aod);
                    let ch = single_irs_channel(&surface, &weights, &[fixed, second])
                        .expect("channel assembly");
                    logdet_capacity(ch.matrix(), &params).expect("capacity")
                })
                .collect()
        })
        .collect();

    let mut capacity = Array2::zeros((n, n));
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            capacity[(i, j)] = v;
        }
    }

    write_row(
        out,
        &[
            "alpha_deg".into(),
            "beta_deg".into(),
            "capacity_bits".into(),
        ],
    )?;
    for (i, &aoa_deg) in grid_deg.iter().enumerate() {
        for (j, &aod_deg) in grid_deg.iter().enumerate() {
            write_row(
                out,
                &[coord(aoa_deg), coord(aod_deg), num(capacity[(i, j)])],
            )?;
        }
    }

    let optima_deg = optimal_positions(&fixed, &surface)
        .into_iter()
        .map(|(a, b)| (a.degrees(), b.degrees()))
        .collect();

    Ok(Fig5Output {
        grid_deg,
        capacity,
        optima_deg,
    })
}

/// Strict local maxima of the surface (greater than all 8 neighbours),
/// merged within `merge_cells` so one physical peak is reported once,
/// sorted by value descending.
pub fn local_maxima(output: &Fig5Output, merge_cells: usize) -> Vec<(f64, f64, f64)> {
    let n = output.grid_deg.len();
    let cap = &output.capacity;
    let mut peaks: Vec<(usize, usize, f64)> = Vec::new();
    for i in 1..n.saturating_sub(1) {
        for j in 1..n.saturating_sub(1) {
            let v = cap[(i, j)];
            let mut is_max = true;
            'scan: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let u = cap[((i as i64 + di) as usize, (j as i64 + dj) as usize)];
                    if u >= v {
                        is_max = false;
                        break 'scan;
                    }
                }
            }
            if is_max {
                peaks.push((i, j, v));
            }
        }
    }
    peaks.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap());
    let mut merged: Vec<(usize, usize, f64)> = Vec::new();
    for p in peaks {
        let close = merged.iter().any(|q| {
            (p.0 as i64 - q.0 as i64).unsigned_abs() as usize <= merge_cells
                && (p.1 as i64 - q.1 as i64).unsigned_abs() as usize <= merge_cells
        });
        if !close {
            merged.push(p);
        }
    }
    merged
        .into_iter()
        .map(|(i, j, v)| (output.grid_deg[i], output.grid_deg[j], v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_a_step_that_does_not_divide_the_range() {
        let cfg = Fig5Config {
            grid_step_deg: 0.7,
            ..Fig5Config::default()
        };
        assert!(run_fig5(&cfg, &mut Vec::new()).is_err());
    }

    #[test]
    fn doubling_the_length_doubles_the_emitted_optima() {
        let cfg = Fig5Config {
            elements: 8,
            relative_length: 4.0,
            grid_step_deg: 2.0,
            ..Fig5Config::default()
        };
        let out = run_fig5(&cfg, &mut Vec::new()).unwrap();
        assert_eq!(out.optima_deg.len(), 7);
    }

    #[test]
    fn more_elements_same_length_moves_the_peaks_up_not_around() {
        let coarse = Fig5Config {
            grid_step_deg: 1.0,
            ..Fig5Config::default()
        };
        let dense = Fig5Config {
            elements: 64,
            grid_step_deg: 1.0,
            ..Fig5Config::default()
        };
        let small = run_fig5(&coarse, &mut Vec::new()).unwrap();
        let large = run_fig5(&dense, &mut Vec::new()).unwrap();
        // Same companion positions...
        assert_eq!(small.optima_deg.len(), large.optima_deg.len());
        for (a, b) in small.optima_deg.iter().zip(large.optima_deg.iter()) {
            assert!((a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9);
        }
        // ...but a stronger surface at them.
        let peak_small = local_maxima(&small, 4)[0].2;
        let peak_large = local_maxima(&large, 4)[0].2;
        assert!(peak_large > peak_small + 5.0);
    }
}
