//! Multi-order network channel: enumerate the surface-index sequences of all
//! cascaded paths of a given reflection order and sum their contributions.
//!
//! A path of order `gamma` visits `gamma` surfaces; consecutive surfaces must
//! differ and must be joined by a link, while revisiting a surface later in
//! the sequence is allowed (repeated bouncing between two facing surfaces).
//! The network channel truncates the order at the scenario cutoff, beyond
//! which path components are assumed to sink below the noise floor.

use std::collections::{BTreeMap, BTreeSet};

use ndarray::s;

use crate::array::{steering_vector, UlaSurface};
use crate::beamforming::TransceiverPair;
use crate::capacity::RateParams;
use crate::channel::{inter_irs_channel_farfield, InterIrsLink, WeightVector};
use crate::error::{Error, Result};
use crate::linalg::CMat;

/// All surface-index sequences of the cascaded paths of one reflection order,
/// in lexicographic order. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMatrix {
    order: usize,
    rows: Vec<Vec<usize>>,
}

impl IndexMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }
}

/// Rows of the index matrix over a complete topology, with revisits:
/// `K * (K-1)^(gamma-1)`.
pub fn index_rows_with_revisit(k: usize, gamma: usize) -> usize {
    if gamma == 0 {
        return 0;
    }
    k * (k.saturating_sub(1)).pow(gamma as u32 - 1)
}

/// Rows without revisits: the partial permutations `K! / (K-gamma)!`.
pub fn index_rows_without_revisit(k: usize, gamma: usize) -> usize {
    if gamma > k {
        return 0;
    }
    ((k - gamma + 1)..=k).product()
}

/// Enumerate the index matrix of order `gamma` over `k` surfaces.
///
/// `edges` restricts consecutive hops to the given directed pairs; `None`
/// means a complete topology. With `allow_revisit` a surface may appear again
/// after at least one other surface in between; without it every entry is
/// distinct. An empty result is valid (e.g. `gamma > k` without revisits).
pub fn index_matrix(
    k: usize,
    gamma: usize,
    allow_revisit: bool,
    edges: Option<&BTreeSet<(usize, usize)>>,
) -> IndexMatrix {
    assert!(
        k >= 1 && gamma >= 1,
        "index matrix needs k >= 1, gamma >= 1"
    );
    let mut rows = Vec::new();
    let mut seq = Vec::with_capacity(gamma);
    extend_sequences(k, gamma, allow_revisit, edges, &mut seq, &mut rows);
    IndexMatrix { order: gamma, rows }
}

fn extend_sequences(
    k: usize,
    gamma: usize,
    allow_revisit: bool,
    edges: Option<&BTreeSet<(usize, usize)>>,
    seq: &mut Vec<usize>,
    rows: &mut Vec<Vec<usize>>,
) {
    if seq.len() == gamma {
        rows.push(seq.clone());
        return;
    }
    for next in 0..k {
        if let Some(&prev) = seq.last() {
            if next == prev {
                continue;
            }
            if let Some(set) = edges {
                if !set.contains(&(prev, next)) {
                    continue;
                }
            }
            if !allow_revisit && seq.contains(&next) {
                continue;
            }
        }
        seq.push(next);
        extend_sequences(k, gamma, allow_revisit, edges, seq, rows);
        seq.pop();
    }
}

/// A transceiver pair attached to the network: the transmitter injects at
/// `entry_surface` with the pair's arrival angle, the receiver listens at
/// `exit_surface` with the pair's departure angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttachedPair {
    pub pair: TransceiverPair,
    pub entry_surface: usize,
    pub exit_surface: usize,
}

/// A network of weighted surfaces, symmetric inter-surface links, and
/// attached transceiver pairs, with a reflection-order cutoff.
#[derive(Debug, Clone)]
pub struct NetworkScenario {
    surfaces: Vec<UlaSurface>,
    links: BTreeMap<(usize, usize), InterIrsLink>,
    transceivers: Vec<AttachedPair>,
    weights: Vec<WeightVector>,
    max_order: usize,
    rate: RateParams,
}

impl NetworkScenario {
    pub fn new(
        surfaces: Vec<UlaSurface>,
        transceivers: Vec<AttachedPair>,
        weights: Vec<WeightVector>,
        max_order: usize,
        rate: RateParams,
    ) -> Result<Self> {
        if surfaces.is_empty() {
            return Err(Error::InvalidParameter {
                name: "surfaces",
                reason: "at least one surface is required".into(),
            });
        }
        if max_order < 1 {
            return Err(Error::InvalidParameter {
                name: "max_order",
                reason: "reflection-order cutoff must be at least 1".into(),
            });
        }
        if weights.len() != surfaces.len() {
            return Err(Error::DimensionMismatch {
                context: "per-surface weights",
                expected: surfaces.len(),
                got: weights.len(),
            });
        }
        for (k, (s, w)) in surfaces.iter().zip(weights.iter()).enumerate() {
            if w.len() != s.element_count() {
                return Err(Error::InvalidParameter {
                    name: "weights",
                    reason: format!(
                        "surface {k} has {} elements but its weight vector has {}",
                        s.element_count(),
                        w.len()
                    ),
                });
            }
        }
        if transceivers.is_empty() {
            return Err(Error::InvalidParameter {
                name: "transceivers",
                reason: "at least one transceiver pair is required".into(),
            });
        }
        for (i, t) in transceivers.iter().enumerate() {
            if t.entry_surface >= surfaces.len() || t.exit_surface >= surfaces.len() {
                return Err(Error::InvalidParameter {
                    name: "transceivers",
                    reason: format!(
                        "pair {i} references a surface outside 0..{}",
                        surfaces.len()
                    ),
                });
            }
        }
        Ok(NetworkScenario {
            surfaces,
            links: BTreeMap::new(),
            transceivers,
            weights,
            max_order,
            rate,
        })
    }

    /// Register a link between two surfaces. Both traversal directions are
    /// inserted; the reverse direction swaps departure and arrival so the two
    /// channel matrices are transposes of each other.
    pub fn add_link(&mut self, from: usize, to: usize, link: InterIrsLink) -> Result<()> {
        let k = self.surfaces.len();
        if from >= k || to >= k {
            return Err(Error::InvalidParameter {
                name: "link",
                reason: format!("surface index out of range 0..{k}"),
            });
        }
        if from == to {
            return Err(Error::InvalidParameter {
                name: "link",
                reason: "a surface cannot link to itself".into(),
            });
        }
        if self.links.contains_key(&(from, to)) || self.links.contains_key(&(to, from)) {
            return Err(Error::InvalidParameter {
                name: "link",
                reason: format!("link between {from} and {to} is already defined"),
            });
        }
        self.links.insert((from, to), link);
        self.links.insert((to, from), link.reversed());
        Ok(())
    }

    pub fn surface_count(&self) -> usize {
        self.surfaces.len()
    }

    pub fn surfaces(&self) -> &[UlaSurface] {
        &self.surfaces
    }

    pub fn transceivers(&self) -> &[AttachedPair] {
        &self.transceivers
    }

    pub fn weights(&self) -> &[WeightVector] {
        &self.weights
    }

    pub fn set_weights(&mut self, weights: Vec<WeightVector>) -> Result<()> {
        if weights.len() != self.surfaces.len() {
            return Err(Error::DimensionMismatch {
                context: "per-surface weights",
                expected: self.surfaces.len(),
                got: weights.len(),
            });
        }
        self.weights = weights;
        Ok(())
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn rate(&self) -> RateParams {
        self.rate
    }

    pub fn link(&self, from: usize, to: usize) -> Option<&InterIrsLink> {
        self.links.get(&(from, to))
    }

    pub fn links(&self) -> &BTreeMap<(usize, usize), InterIrsLink> {
        &self.links
    }

    /// Directed edge set of the link topology.
    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.links.keys().copied().collect()
    }

    /// Scale every link's edge amplitude, e.g. to sweep path loss.
    pub fn scale_edge_amplitudes(&mut self, factor: f64) {
        for link in self.links.values_mut() {
            link.edge_amplitude *= factor;
        }
    }

    /// Arrival-side steering matrix of one surface: column `u` holds the
    /// steering vector of pair `u`'s transmitter if it enters here, else 0.
    fn a_in(&self, k: usize) -> CMat {
        let m = self.surfaces[k].element_count();
        let n = self.transceivers.len();
        let mut a = CMat::zeros((m, n));
        for (u, t) in self.transceivers.iter().enumerate() {
            if t.entry_surface == k {
                let col = steering_vector(t.pair.aoa, &self.surfaces[k]);
                a.slice_mut(s![.., u]).assign(&col);
            }
        }
        a
    }

    /// Departure-side steering matrix, masked by exit attachment.
    fn a_out(&self, k: usize) -> CMat {
        let m = self.surfaces[k].element_count();
        let n = self.transceivers.len();
        let mut a = CMat::zeros((m, n));
        for (u, t) in self.transceivers.iter().enumerate() {
            if t.exit_surface == k {
                let col = steering_vector(t.pair.aod, &self.surfaces[k]);
                a.slice_mut(s![.., u]).assign(&col);
            }
        }
        a
    }

    /// One reflection off surface `k`: rows scaled by the reflection
    /// coefficients and the surface path-loss factor.
    fn reflect(&self, k: usize, field: &mut CMat) {
        let w = self.weights[k].as_vec();
        let l = self.surfaces[k].path_loss();
        for (mut row, coeff) in field.rows_mut().into_iter().zip(w.iter()) {
            let scale = coeff * l;
            row.mapv_inplace(|z| z * scale);
        }
    }
}

/// End-to-end channel with its per-order decomposition retained.
#[derive(Debug, Clone)]
pub struct EffectiveChannel {
    matrix: CMat,
    by_order: Vec<(usize, CMat)>,
}

impl EffectiveChannel {
    /// Build from per-order components; the total is their sum.
    pub fn from_orders(by_order: Vec<(usize, CMat)>) -> Self {
        assert!(
            !by_order.is_empty(),
            "at least one order component required"
        );
        let mut matrix = CMat::zeros(by_order[0].1.dim());
        for (_, h) in &by_order {
            matrix += h;
        }
        EffectiveChannel { matrix, by_order }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn orders(&self) -> &[(usize, CMat)] {
        &self.by_order
    }

    pub fn order_component(&self, gamma: usize) -> Option<&CMat> {
        self.by_order
            .iter()
            .find(|(g, _)| *g == gamma)
            .map(|(_, h)| h)
    }

    pub fn pair_count(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Channel contributed by all cascaded paths of exactly `gamma` reflections.
///
/// Each index-matrix row adds the product of its hops: inject through the
/// first surface's arrival matrix, reflect, propagate across each link,
/// reflect again, and project out through the last surface's departure
/// matrix. A pair only feeds columns of sequences starting at its entry
/// surface and rows of sequences ending at its exit surface.
pub fn network_channel_order(scenario: &NetworkScenario, gamma: usize) -> Result<CMat> {
    let k = scenario.surface_count();
    let n = scenario.transceivers().len();
    let edges = scenario.edge_set();
    let sequences = index_matrix(k, gamma, true, Some(&edges));

    // Hop channels and attachment matrices are shared across sequences.
    let mut hop_cache: BTreeMap<(usize, usize), CMat> = BTreeMap::new();
    for &(a, b) in &edges {
        let link = scenario
            .link(a, b)
            .ok_or(Error::MissingLink { from: a, to: b })?;
        let e = inter_irs_channel_farfield(link, &scenario.surfaces()[a], &scenario.surfaces()[b]);
        hop_cache.insert((a, b), e);
    }
    let a_in: Vec<CMat> = (0..k).map(|i| scenario.a_in(i)).collect();
    let a_out: Vec<CMat> = (0..k).map(|i| scenario.a_out(i)).collect();

    let mut h = CMat::zeros((n, n));
    for row in sequences.rows() {
        let first = row[0];
        let mut field = a_in[first].clone();
        scenario.reflect(first, &mut field);
        for hop in row.windows(2) {
            let (from, to) = (hop[0], hop[1]);
            let e = hop_cache
                .get(&(from, to))
                .ok_or(Error::MissingLink { from, to })?;
            field = e.dot(&field);
            scenario.reflect(to, &mut field);
        }
        let last = *row.last().unwrap();
        h = h + a_out[last].t().dot(&field);
    }
    Ok(h)
}

/// Total network channel: the sum of all order components up to the cutoff,
/// with each component retained for diagnostics.
pub fn network_channel(scenario: &NetworkScenario) -> Result<EffectiveChannel> {
    let mut by_order = Vec::with_capacity(scenario.max_order());
    for gamma in 1..=scenario.max_order() {
        by_order.push((gamma, network_channel_order(scenario, gamma)?));
    }
    Ok(EffectiveChannel::from_orders(by_order))
}
