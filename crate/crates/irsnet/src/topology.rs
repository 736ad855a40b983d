//! Surface-network graph shapes, their closed-form sum-rate bounds, and the
//! edge-disjoint decomposition of complete graphs into equal-length paths.
//!
//! Nodes are surfaces, edges are inter-surface line-of-sight channels. Three
//! reference shapes matter: a chain (one long cascaded route plus first-order
//! side pairs), the complete graph (every pair of surfaces linked), and the
//! edgeless graph (isolated surfaces, first-order service only).

use std::collections::{BTreeMap, BTreeSet};

use crate::array::{Angle, UlaSurface};
use crate::beamforming::{mrc_weights, TransceiverPair};
use crate::capacity::{single_irs_bound, RateParams};
use crate::channel::InterIrsLink;
use crate::error::{Error, Result};
use crate::network::{network_channel, AttachedPair, NetworkScenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Linear,
    Complete,
    Null,
    Custom,
}

/// Undirected graph over `node_count` surfaces; edges stored as ordered
/// pairs `(a, b)` with `a < b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkGraph {
    node_count: usize,
    edges: BTreeSet<(usize, usize)>,
    kind: GraphKind,
}

impl NetworkGraph {
    pub fn linear(node_count: usize) -> Self {
        let edges = (0..node_count.saturating_sub(1))
            .map(|i| (i, i + 1))
            .collect();
        NetworkGraph {
            node_count,
            edges,
            kind: GraphKind::Linear,
        }
    }

    pub fn complete(node_count: usize) -> Self {
        let mut edges = BTreeSet::new();
        for a in 0..node_count {
            for b in (a + 1)..node_count {
                edges.insert((a, b));
            }
        }
        NetworkGraph {
            node_count,
            edges,
            kind: GraphKind::Complete,
        }
    }

    pub fn null(node_count: usize) -> Self {
        NetworkGraph {
            node_count,
            edges: BTreeSet::new(),
            kind: GraphKind::Null,
        }
    }

    pub fn custom(node_count: usize, edges: BTreeSet<(usize, usize)>) -> Result<Self> {
        for &(a, b) in &edges {
            if a >= b || b >= node_count {
                return Err(Error::InvalidParameter {
                    name: "edges",
                    reason: format!(
                        "edge ({a}, {b}) is not an ordered pair within 0..{node_count}"
                    ),
                });
            }
        }
        Ok(NetworkGraph {
            node_count,
            edges,
            kind: GraphKind::Custom,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// Directed edge set (both traversal directions).
    pub fn directed_edges(&self) -> BTreeSet<(usize, usize)> {
        self.edges
            .iter()
            .flat_map(|&(a, b)| [(a, b), (b, a)])
            .collect()
    }
}

/// Chain-network sum-rate upper bound: one pair rides the full cascade with
/// power gain `M^(2K)`, and each of the `K` surfaces additionally serves
/// `M - 1` first-order pairs at power gain `M^2`.
pub fn bound_lg(elements: usize, k: usize, params: &RateParams) -> f64 {
    bound_lg_with_edge_loss(elements, k, params, 1.0)
}

/// Chain bound with a per-edge power-loss factor on the cascaded route: the
/// `K`-surface path crosses `K - 1` inter-surface edges, so its received SNR
/// scales by `loss^(K-1)`. First-order pairs touch no inter-surface edge.
pub fn bound_lg_with_edge_loss(
    elements: usize,
    k: usize,
    params: &RateParams,
    edge_power_loss: f64,
) -> f64 {
    let m = elements as f64;
    let snr = params.snr();
    let cascade_gain = m.powi(2 * k as i32) * edge_power_loss.powi(k as i32 - 1);
    let side_pairs = (k * elements.saturating_sub(1)) as f64;
    (1.0 + snr * cascade_gain).log2() + side_pairs * (1.0 + snr * m * m).log2()
}

/// Complete-graph bound for an arbitrary mix of path lengths: `counts` maps a
/// path length (surfaces per path) to the number of pairs served at that
/// length. Returns the bound in bits and the total pair count.
pub fn bound_cg_general(
    elements: usize,
    counts: &BTreeMap<usize, usize>,
    params: &RateParams,
) -> (f64, usize) {
    let m = elements as f64;
    let snr = params.snr();
    let mut bits = 0.0;
    let mut pairs = 0;
    for (&gamma, &n_gamma) in counts {
        bits += n_gamma as f64 * (1.0 + snr * m.powi(2 * gamma as i32)).log2();
        pairs += n_gamma;
    }
    (bits, pairs)
}

/// Equal-length decomposition bound of a complete graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgEqualBound {
    pub bits: f64,
    /// Number of `tau`-surface paths in the decomposition.
    pub n_tau: usize,
    /// Pairs served when the bound is reached.
    pub supported_pairs: usize,
}

/// Sum-rate bound when the complete graph on `k` surfaces is decomposed into
/// edge-disjoint paths of `tau` surfaces each. With `include_first_order`,
/// the element budget left on each surface serves additional first-order
/// pairs (`K*M - N_tau*tau` of them) at power gain `M^2`.
pub fn bound_cg_equal(
    elements: usize,
    k: usize,
    tau: usize,
    params: &RateParams,
    include_first_order: bool,
) -> Result<CgEqualBound> {
    let n_tau = equal_path_count(k, tau)?;
    let m = elements as f64;
    let snr = params.snr();
    let cascade = n_tau as f64 * (1.0 + snr * m.powi(2 * tau as i32)).log2();
    if include_first_order {
        let first_order_pairs = k * elements - n_tau * tau;
        let bits = cascade + first_order_pairs as f64 * (1.0 + snr * m * m).log2();
        Ok(CgEqualBound {
            bits,
            n_tau,
            supported_pairs: first_order_pairs + n_tau,
        })
    } else {
        Ok(CgEqualBound {
            bits: cascade,
            n_tau,
            supported_pairs: n_tau,
        })
    }
}

/// Edgeless-network bound: `k` isolated surfaces each serving `pairs_per_irs`
/// first-order pairs, a plain `k`-fold scaling of the single-surface bound.
pub fn bound_ng(
    elements: usize,
    k: usize,
    pairs_per_irs: usize,
    params: &RateParams,
) -> Result<f64> {
    Ok(k as f64 * single_irs_bound(elements, pairs_per_irs, params)?)
}

/// `N_tau = K(K-1) / (2(tau-1))`, the number of `tau`-surface paths in an
/// equal decomposition; errors unless it is a positive integer and the paths
/// fit (`tau <= K`). Integrality is necessary and sufficient for an
/// edge-disjoint decomposition of the complete graph to exist.
pub fn equal_path_count(k: usize, tau: usize) -> Result<usize> {
    if tau < 2 {
        return Err(Error::DecompositionInfeasible {
            k,
            tau,
            reason: "paths must span at least two surfaces".into(),
        });
    }
    if tau > k {
        return Err(Error::DecompositionInfeasible {
            k,
            tau,
            reason: format!("simple paths of {tau} surfaces do not fit in {k} nodes"),
        });
    }
    let total_edges = k * (k - 1) / 2;
    let per_path = tau - 1;
    if !total_edges.is_multiple_of(per_path) {
        return Err(Error::DecompositionInfeasible {
            k,
            tau,
            reason: format!("{total_edges} edges are not divisible into paths of {per_path} edges"),
        });
    }
    Ok(total_edges / per_path)
}

/// An explicit edge-disjoint cover of the complete graph by equal-length
/// simple paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionPlan {
    tau: usize,
    paths: Vec<Vec<usize>>,
}

impl DecompositionPlan {
    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn paths(&self) -> &[Vec<usize>] {
        &self.paths
    }

    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    /// Structural validity: every path simple with `tau` nodes, all paths
    /// pairwise edge-disjoint, and their union exactly the complete graph's
    /// edge set.
    pub fn verify(&self, node_count: usize) -> Result<()> {
        let expected = equal_path_count(node_count, self.tau)?;
        if self.paths.len() != expected {
            return Err(Error::InvalidParameter {
                name: "plan",
                reason: format!("{} paths, expected {expected}", self.paths.len()),
            });
        }
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        for path in &self.paths {
            if path.len() != self.tau {
                return Err(Error::InvalidParameter {
                    name: "plan",
                    reason: format!("path {path:?} does not span {} surfaces", self.tau),
                });
            }
            let distinct: BTreeSet<usize> = path.iter().copied().collect();
            if distinct.len() != path.len() || path.iter().any(|&v| v >= node_count) {
                return Err(Error::InvalidParameter {
                    name: "plan",
                    reason: format!("path {path:?} revisits or leaves the graph"),
                });
            }
            for hop in path.windows(2) {
                let e = (hop[0].min(hop[1]), hop[0].max(hop[1]));
                if !seen.insert(e) {
                    return Err(Error::InvalidParameter {
                        name: "plan",
                        reason: format!("edge {e:?} is covered twice"),
                    });
                }
            }
        }
        let full = NetworkGraph::complete(node_count);
        if &seen != full.edges() {
            return Err(Error::InvalidParameter {
                name: "plan",
                reason: "paths do not cover every edge of the complete graph".into(),
            });
        }
        Ok(())
    }

    /// One path per line, nodes 1-based and dash-separated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for path in &self.paths {
            let line: Vec<String> = path.iter().map(|v| (v + 1).to_string()).collect();
            out.push_str(&line.join("-"));
            out.push('\n');
        }
        out
    }
}

/// Decompose the complete graph on `k` nodes into edge-disjoint simple paths
/// of `tau` nodes each, by backtracking over the lexicographically smallest
/// uncovered edge. Deterministic in `(k, tau)`.
pub fn decompose_complete_graph(k: usize, tau: usize) -> Result<DecompositionPlan> {
    let n_tau = equal_path_count(k, tau)?;
    let mut remaining = NetworkGraph::complete(k).edges().clone();
    let mut acc: Vec<Vec<usize>> = Vec::with_capacity(n_tau);
    if search_cover(k, tau, &mut remaining, &mut acc) {
        Ok(DecompositionPlan { tau, paths: acc })
    } else {
        // Integrality guarantees existence; reaching this is a logic error.
        Err(Error::SearchExhausted { k, tau })
    }
}

fn search_cover(
    k: usize,
    tau: usize,
    remaining: &mut BTreeSet<(usize, usize)>,
    acc: &mut Vec<Vec<usize>>,
) -> bool {
    let anchor = match remaining.iter().next() {
        None => return true,
        Some(&e) => e,
    };
    // Build candidate paths through the anchor edge: extend `left` nodes
    // before it and the rest after. Keeping the anchor's orientation fixed
    // enumerates each undirected path exactly once.
    for left in 0..=(tau - 2) {
        let right = tau - 2 - left;
        let mut head = vec![anchor.0, anchor.1];
        if try_extensions(k, left, right, &mut head, remaining, acc, tau) {
            return true;
        }
    }
    false
}

/// Grow `left` nodes at the front, then `right` nodes at the back of `path`,
/// recursing into the cover search whenever a full path is assembled.
fn try_extensions(
    k: usize,
    left: usize,
    right: usize,
    path: &mut Vec<usize>,
    remaining: &mut BTreeSet<(usize, usize)>,
    acc: &mut Vec<Vec<usize>>,
    tau: usize,
) -> bool {
    if left == 0 && right == 0 {
        let edges: Vec<(usize, usize)> = path
            .windows(2)
            .map(|h| (h[0].min(h[1]), h[0].max(h[1])))
            .collect();
        for e in &edges {
            remaining.remove(e);
        }
        acc.push(path.clone());
        if search_cover(k, tau, remaining, acc) {
            return true;
        }
        acc.pop();
        for e in &edges {
            remaining.insert(*e);
        }
        return false;
    }
    if left > 0 {
        let front = path[0];
        for v in 0..k {
            let e = (v.min(front), v.max(front));
            if v != front && !path.contains(&v) && remaining.contains(&e) {
                path.insert(0, v);
                if try_extensions(k, left - 1, right, path, remaining, acc, tau) {
                    return true;
                }
                path.remove(0);
            }
        }
        return false;
    }
    let back = *path.last().unwrap();
    for v in 0..k {
        let e = (v.min(back), v.max(back));
        if v != back && !path.contains(&v) && remaining.contains(&e) {
            path.push(v);
            if try_extensions(k, left, right - 1, path, remaining, acc, tau) {
                return true;
            }
            path.pop();
        }
    }
    false
}

/// Build a chain network of `k` identical surfaces with one end-to-end pair
/// and optional first-order side pairs, every surface weighted to align its
/// own incoming/outgoing directions. Cutoff equals the chain length, so the
/// end pair is reached by exactly one cascaded route.
#[allow(clippy::too_many_arguments)]
pub fn lg_scenario(
    elements: usize,
    k: usize,
    end_pair: TransceiverPair,
    hop_departure: Angle,
    hop_arrival: Angle,
    edge_amplitude: f64,
    side_pairs: &[(usize, TransceiverPair)],
    rate: RateParams,
) -> Result<NetworkScenario> {
    let surface = UlaSurface::new(elements, 0.5)?;
    let surfaces = vec![surface.clone(); k];

    let mut transceivers = vec![AttachedPair {
        pair: end_pair,
        entry_surface: 0,
        exit_surface: k - 1,
    }];
    for &(surface_idx, pair) in side_pairs {
        if surface_idx >= k {
            return Err(Error::InvalidParameter {
                name: "side_pairs",
                reason: format!("surface index {surface_idx} out of range 0..{k}"),
            });
        }
        transceivers.push(AttachedPair {
            pair,
            entry_surface: surface_idx,
            exit_surface: surface_idx,
        });
    }

    let mut weights = Vec::with_capacity(k);
    for i in 0..k {
        let inbound = if i == 0 { end_pair.aoa } else { hop_arrival };
        let outbound = if i == k - 1 {
            end_pair.aod
        } else {
            hop_departure
        };
        let served = TransceiverPair::new(inbound, outbound);
        weights.push(mrc_weights(&served, &surface, None).weights);
    }

    let mut scenario = NetworkScenario::new(surfaces, transceivers, weights, k, rate)?;
    for i in 0..k.saturating_sub(1) {
        let link = InterIrsLink::new(hop_departure, hop_arrival, 100.0)?
            .with_edge_amplitude(edge_amplitude)?;
        scenario.add_link(i, i + 1, link)?;
    }
    Ok(scenario)
}

/// Amplitude gains `|H_ii|` of every pair in a chain scenario, from the full
/// network channel. With aligned weights the end pair's gain is
/// `M^K * edge_amplitude^(K-1) * path_loss^K`.
pub fn lg_channel_check(scenario: &NetworkScenario) -> Result<Vec<f64>> {
    let ch = network_channel(scenario)?;
    let h = ch.matrix();
    Ok((0..h.nrows()).map(|i| h[(i, i)].norm()).collect())
}
