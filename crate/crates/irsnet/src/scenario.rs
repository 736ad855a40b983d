//! Plain-text scenario configs (TOML) describing a whole network: surfaces,
//! links, transceiver attachments, per-surface weights, cutoff and powers.
//! Surface and pair indices are 1-based in configs.
//!
//! ```toml
//! max_order = 2
//! tx_power = 1.0
//! noise_power = 1.0
//!
//! [[surfaces]]
//! elements = 4
//! spacing = 0.5
//!
//! [[surfaces]]
//! elements = 4
//! spacing = 0.5
//!
//! [[links]]
//! from = 1
//! to = 2
//! departure_deg = 40.0
//! arrival_deg = 70.0
//! loss_db = 10.0
//!
//! [[pairs]]
//! entry = 1
//! entry_deg = 30.0
//! exit = 2
//! exit_deg = 135.0
//!
//! [[weights]]
//! kind = "mrc"
//! in_deg = 30.0
//! out_deg = 40.0
//!
//! [[weights]]
//! kind = "ones"
//! ```

use serde::Deserialize;

use crate::array::{Angle, UlaSurface};
use crate::beamforming::{mrc_weights, random_weights, TransceiverPair};
use crate::capacity::RateParams;
use crate::channel::{edge_amplitude_from_loss_db, InterIrsLink, WeightVector};
use crate::error::{Error, Result};
use crate::network::{AttachedPair, NetworkScenario};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioConfig {
    max_order: usize,
    #[serde(default)]
    tx_power: Option<f64>,
    #[serde(default)]
    tx_power_dbm: Option<f64>,
    noise_power: f64,
    surfaces: Vec<SurfaceConfig>,
    #[serde(default)]
    links: Vec<LinkConfig>,
    pairs: Vec<PairConfig>,
    weights: Vec<WeightConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceConfig {
    elements: usize,
    spacing: f64,
    #[serde(default)]
    path_loss: Option<f64>,
    #[serde(default)]
    wavelength: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkConfig {
    from: usize,
    to: usize,
    departure_deg: f64,
    arrival_deg: f64,
    #[serde(default)]
    distance: Option<f64>,
    #[serde(default)]
    loss_db: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairConfig {
    entry: usize,
    entry_deg: f64,
    exit: usize,
    exit_deg: f64,
    #[serde(default)]
    power: Option<f64>,
    #[serde(default)]
    power_dbm: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum WeightConfig {
    /// Zero phase on every element.
    Ones,
    /// Phase-aligned for the given arrival/departure directions.
    Mrc { in_deg: f64, out_deg: f64 },
    /// Seeded uniform random phases.
    Random { seed: u64 },
    /// Explicit per-element phases in degrees.
    PhasesDeg { values: Vec<f64> },
}

fn field_err(field: String, reason: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {reason}"))
}

fn angle_deg(field: String, value: f64) -> Result<Angle> {
    Angle::from_degrees(value).map_err(|e| field_err(field, e))
}

fn linear_power(
    field_linear: &str,
    linear: Option<f64>,
    dbm: Option<f64>,
    default: f64,
) -> Result<f64> {
    match (linear, dbm) {
        (Some(_), Some(_)) => Err(field_err(
            field_linear.to_string(),
            "give either the linear value or the dBm value, not both",
        )),
        (Some(p), None) => {
            if p.is_finite() && p >= 0.0 {
                Ok(p)
            } else {
                Err(field_err(
                    field_linear.to_string(),
                    format!("must be finite and non-negative, got {p}"),
                ))
            }
        }
        (None, Some(db)) => Ok(10f64.powf(db / 10.0)),
        (None, None) => Ok(default),
    }
}

/// Parse a scenario config from TOML text. Errors name the offending field.
pub fn parse_scenario(text: &str) -> Result<NetworkScenario> {
    let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;

    let k = cfg.surfaces.len();
    if k == 0 {
        return Err(field_err(
            "surfaces".into(),
            "at least one surface required",
        ));
    }

    let mut surfaces = Vec::with_capacity(k);
    for (i, s) in cfg.surfaces.iter().enumerate() {
        let mut surface = UlaSurface::new(s.elements, s.spacing)
            .map_err(|e| field_err(format!("surfaces[{i}]"), e))?;
        if let Some(l) = s.path_loss {
            surface = surface
                .with_path_loss(l)
                .map_err(|e| field_err(format!("surfaces[{i}].path_loss"), e))?;
        }
        if let Some(w) = s.wavelength {
            surface = surface
                .with_wavelength(w)
                .map_err(|e| field_err(format!("surfaces[{i}].wavelength"), e))?;
        }
        surfaces.push(surface);
    }

    let surface_index = |field: String, one_based: usize| -> Result<usize> {
        if (1..=k).contains(&one_based) {
            Ok(one_based - 1)
        } else {
            Err(field_err(
                field,
                format!("surface index {one_based} out of range 1..={k}"),
            ))
        }
    };

    let mut transceivers = Vec::with_capacity(cfg.pairs.len());
    for (i, p) in cfg.pairs.iter().enumerate() {
        let entry = surface_index(format!("pairs[{i}].entry"), p.entry)?;
        let exit = surface_index(format!("pairs[{i}].exit"), p.exit)?;
        let aoa = angle_deg(format!("pairs[{i}].entry_deg"), p.entry_deg)?;
        let aod = angle_deg(format!("pairs[{i}].exit_deg"), p.exit_deg)?;
        let power = linear_power(&format!("pairs[{i}].power"), p.power, p.power_dbm, 1.0)?;
        let pair = TransceiverPair::new(aoa, aod)
            .with_power(power)
            .map_err(|e| field_err(format!("pairs[{i}].power"), e))?;
        transceivers.push(AttachedPair {
            pair,
            entry_surface: entry,
            exit_surface: exit,
        });
    }

    if cfg.weights.len() != k {
        return Err(field_err(
            "weights".into(),
            format!("{} entries for {k} surfaces", cfg.weights.len()),
        ));
    }
    let mut weights = Vec::with_capacity(k);
    for (i, w) in cfg.weights.iter().enumerate() {
        let surface = &surfaces[i];
        let m = surface.element_count();
        let built = match w {
            WeightConfig::Ones => WeightVector::ones(m),
            WeightConfig::Mrc { in_deg, out_deg } => {
                let aoa = angle_deg(format!("weights[{i}].in_deg"), *in_deg)?;
                let aod = angle_deg(format!("weights[{i}].out_deg"), *out_deg)?;
                let served = TransceiverPair::new(aoa, aod);
                mrc_weights(&served, surface, None).weights
            }
            WeightConfig::Random { seed } => random_weights(m, *seed),
            WeightConfig::PhasesDeg { values } => {
                if values.len() != m {
                    return Err(field_err(
                        format!("weights[{i}].values"),
                        format!("{} phases for {m} elements", values.len()),
                    ));
                }
                let rad: Vec<f64> = values.iter().map(|v| v.to_radians()).collect();
                WeightVector::from_phases(&rad)
            }
        };
        weights.push(built);
    }

    let power = linear_power("tx_power", cfg.tx_power, cfg.tx_power_dbm, 1.0)?;
    let rate =
        RateParams::new(power, cfg.noise_power).map_err(|e| field_err("noise_power".into(), e))?;

    let mut scenario = NetworkScenario::new(surfaces, transceivers, weights, cfg.max_order, rate)
        .map_err(|e| field_err("scenario".into(), e))?;

    for (i, l) in cfg.links.iter().enumerate() {
        let from = surface_index(format!("links[{i}].from"), l.from)?;
        let to = surface_index(format!("links[{i}].to"), l.to)?;
        let departure = angle_deg(format!("links[{i}].departure_deg"), l.departure_deg)?;
        let arrival = angle_deg(format!("links[{i}].arrival_deg"), l.arrival_deg)?;
        let distance = l.distance.unwrap_or(100.0);
        let mut link = InterIrsLink::new(departure, arrival, distance)
            .map_err(|e| field_err(format!("links[{i}].distance"), e))?;
        if let Some(db) = l.loss_db {
            link = link
                .with_edge_amplitude(edge_amplitude_from_loss_db(db))
                .map_err(|e| field_err(format!("links[{i}].loss_db"), e))?;
        }
        scenario
            .add_link(from, to, link)
            .map_err(|e| field_err(format!("links[{i}]"), e))?;
    }

    Ok(scenario)
}
