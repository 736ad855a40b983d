//! Evaluate a TOML scenario config: emit every order component of the
//! network channel plus the total, and summarize the rates it supports.

use std::io::Write;

use serde::Serialize;

use irsnet::{logdet_capacity, network_channel, parse_scenario, sinr_sum_rate};

use crate::output::{num, write_row};
use crate::Result;

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioSummary {
    pub surfaces: usize,
    pub pairs: usize,
    pub max_order: usize,
    pub capacity_bits: f64,
    pub sum_rate_bits: f64,
    pub per_user_bits: Vec<f64>,
}

pub fn run_scenario<W: Write>(toml_text: &str, out: &mut W) -> Result<ScenarioSummary> {
    let scenario = parse_scenario(toml_text)?;
    let channel = network_channel(&scenario)?;

    write_row(
        out,
        &[
            "component".into(),
            "rx".into(),
            "tx".into(),
            "re".into(),
            "im".into(),
            "magnitude".into(),
        ],
    )?;
    let n = channel.pair_count();
    for (gamma, h) in channel.orders() {
        for i in 0..n {
            for u in 0..n {
                let z = h[(i, u)];
                write_row(
                    out,
                    &[
                        gamma.to_string(),
                        (i + 1).to_string(),
                        (u + 1).to_string(),
                        num(z.re),
                        num(z.im),
                        num(z.norm()),
                    ],
                )?;
            }
        }
    }
    let total = channel.matrix();
    for i in 0..n {
        for u in 0..n {
            let z = total[(i, u)];
            write_row(
                out,
                &[
                    "total".into(),
                    (i + 1).to_string(),
                    (u + 1).to_string(),
                    num(z.re),
                    num(z.im),
                    num(z.norm()),
                ],
            )?;
        }
    }

    let params = scenario.rate();
    let capacity_bits = logdet_capacity(total, &params)?;
    let (per_user_bits, sum_rate_bits) = sinr_sum_rate(total, &params)?;
    Ok(ScenarioSummary {
        surfaces: scenario.surface_count(),
        pairs: n,
        max_order: scenario.max_order(),
        capacity_bits,
        sum_rate_bits,
        per_user_bits,
    })
}
