//! Weight design for a single surface: phase-aligned (matched) weights for
//! one served pair, the enumeration of companion positions that ride the
//! same weights interference-free, a constrained least-squares solver that
//! trades surface elements for nulled cross-gains, zero-forcing decoding as
//! a receiver-side benchmark, and seeded random phase weights.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::array::{combined_steering, Angle, UlaSurface};
use crate::capacity::RateParams;
use crate::channel::WeightVector;
use crate::error::{Error, Result};
use crate::linalg::{default_rcond, min_norm_solve, svd, CMat, CVec};

/// One single-antenna transmitter/receiver pair served by a surface:
/// the transmitter is seen under `aoa`, the receiver under `aod`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransceiverPair {
    pub aoa: Angle,
    pub aod: Angle,
    pub power: f64,
}

impl TransceiverPair {
    pub fn new(aoa: Angle, aod: Angle) -> Self {
        TransceiverPair {
            aoa,
            aod,
            power: 1.0,
        }
    }

    pub fn with_power(mut self, power: f64) -> Result<Self> {
        if !(power.is_finite() && power >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "power",
                reason: format!("must be finite and non-negative, got {power}"),
            });
        }
        self.power = power;
        Ok(self)
    }
}

/// Phase-aligned weight design for one pair: element `m` carries the phase
/// `-zeta * 2*pi*spacing * m`, which cancels the pair's combined steering
/// phase so all element contributions add coherently.
#[derive(Debug, Clone)]
pub struct MrcDesign {
    /// Alignment factor `-cos(aoa) - cos(aod) + n/spacing`.
    pub zeta: f64,
    /// The integer `n` of the phase-wrap ambiguity; 0 is the canonical pick.
    pub offset: i64,
    pub weights: WeightVector,
}

/// Matched (maximum-ratio) weights for `pair` on `surface`.
///
/// Any integer `offset` yields the full gain `M * path_loss`; `None` selects
/// the canonical 0 (which minimizes `|zeta + cos(aoa) + cos(aod)|`).
pub fn mrc_weights(pair: &TransceiverPair, surface: &UlaSurface, offset: Option<i64>) -> MrcDesign {
    let n = offset.unwrap_or(0);
    let dr = surface.spacing_wavelengths();
    let zeta = -pair.aoa.cos() - pair.aod.cos() + n as f64 / dr;
    let step = -zeta * 2.0 * std::f64::consts::PI * dr;
    let phases: Vec<f64> = (0..surface.element_count())
        .map(|m| step * m as f64)
        .collect();
    MrcDesign {
        zeta,
        offset: n,
        weights: WeightVector::from_phases(&phases),
    }
}

/// All positions `(aoa, aod)` that the matched weights of `fixed` serve at
/// full gain while both cross-gains against `fixed` vanish, sorted by `aod`.
///
/// Candidates sit on the null grid of the array pattern (cosine offsets of
/// `j / L` from the served pair, `j` not a multiple of `M`), paired so the
/// alignment constraint `cos(aoa) + cos(aod) + zeta = 0 (mod 1/spacing)`
/// holds. Empty when `L <= 1`: the pattern then has no interior nulls.
pub fn optimal_positions(fixed: &TransceiverPair, surface: &UlaSurface) -> Vec<(Angle, Angle)> {
    let dr = surface.spacing_wavelengths();
    let len = surface.relative_length();
    let m = surface.element_count() as i64;
    if len <= 1.0 {
        return Vec::new();
    }
    let zeta = -fixed.aoa.cos() - fixed.aod.cos();

    let cos_in_range = |x: f64| x.abs() <= 1.0 + 1e-12;
    let clamp_acos = |x: f64| Angle::from_radians(x.clamp(-1.0, 1.0).acos()).unwrap();

    let mut found: Vec<(Angle, Angle)> = Vec::new();
    let j_lo = (len * (-1.0 - fixed.aod.cos())).floor() as i64;
    let j_hi = (len * (1.0 - fixed.aod.cos())).ceil() as i64;
    for j in j_lo..=j_hi {
        if j.rem_euclid(m) == 0 {
            // Pattern peaks, including the served pair itself.
            continue;
        }
        let cos_aod = j as f64 / len + fixed.aod.cos();
        if !cos_in_range(cos_aod) {
            continue;
        }
        // Alignment constraint fixes cos(aoa) up to whole pattern periods.
        let base = -zeta - cos_aod;
        let t_lo = (dr * (-1.0 - base)).floor() as i64;
        let t_hi = (dr * (1.0 - base)).ceil() as i64;
        for t in t_lo..=t_hi {
            let cos_aoa = base + t as f64 / dr;
            if !cos_in_range(cos_aoa) {
                continue;
            }
            let candidate = (clamp_acos(cos_aoa), clamp_acos(cos_aod));
            let duplicate = found.iter().any(|(a, b)| {
                (a.radians() - candidate.0.radians()).abs() < 1e-9
                    && (b.radians() - candidate.1.radians()).abs() < 1e-9
            });
            if !duplicate {
                found.push(candidate);
            }
        }
    }
    found.sort_by(|x, y| x.1.radians().partial_cmp(&y.1.radians()).unwrap());
    found
}

/// Result of the constrained interference-nulling weight design.
#[derive(Debug, Clone)]
pub struct InterferenceFreeSolution {
    /// Minimum-norm solution of the gain/null constraint system. Generally
    /// not unit-modulus.
    pub weights: WeightVector,
    /// Worst absolute constraint violation of `weights`.
    pub residual: f64,
    /// Whether the element budget admits an exact solution (`M >= N^2`).
    pub feasible: bool,
    /// `weights` with every entry projected to its phase, and the constraint
    /// violation that projection costs.
    pub phase_only_weights: WeightVector,
    pub phase_only_residual: f64,
}

/// Weights that give each pair its desired gain while nulling every
/// cross-pair combination, via minimum-norm least squares over the `N^2`
/// constraints. With fewer than `N^2` elements the exact solution does not
/// exist and the least-squares residual quantifies the leftover
/// interference.
///
/// `responses` are the desired own-gains per pair; `None` uses the full
/// matched gain `M` for all pairs.
pub fn interference_free_weights(
    pairs: &[TransceiverPair],
    surface: &UlaSurface,
    responses: Option<&[Complex64]>,
) -> Result<InterferenceFreeSolution> {
    let n = pairs.len();
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "pairs",
            reason: "at least one transceiver pair is required".into(),
        });
    }
    if let Some(r) = responses {
        if r.len() != n {
            return Err(Error::DimensionMismatch {
                context: "desired responses",
                expected: n,
                got: r.len(),
            });
        }
    }
    let m = surface.element_count();
    let n_constraints = n * n;
    let default_gain = Complex64::new(m as f64, 0.0);

    let mut a = CMat::zeros((n_constraints, m));
    let mut f = CVec::zeros(n_constraints);
    for (v, rx) in pairs.iter().enumerate() {
        for (u, tx) in pairs.iter().enumerate() {
            let row = v * n + u;
            let pattern = combined_steering(rx.aod, tx.aoa, surface);
            for (col, z) in pattern.iter().enumerate() {
                a[(row, col)] = *z;
            }
            if u == v {
                f[row] = responses.map_or(default_gain, |r| r[v]);
            }
        }
    }

    let rcond = default_rcond(n_constraints, m);
    let (w, rank) = min_norm_solve(&a, &f, rcond)?;
    let residual = constraint_residual(&a, &w, &f);
    let feasible = m >= n_constraints;
    if feasible && rank < n_constraints && residual > 1e-8 {
        return Err(Error::RankDeficient {
            rank,
            constraints: n_constraints,
            residual,
        });
    }

    let weights = WeightVector::new(w)?;
    let phase_only_weights = weights.phase_only();
    let phase_only_residual = {
        let pw: CVec = phase_only_weights.as_vec().clone();
        constraint_residual(&a, &pw, &f)
    };
    Ok(InterferenceFreeSolution {
        weights,
        residual,
        feasible,
        phase_only_weights,
        phase_only_residual,
    })
}

fn constraint_residual(a: &CMat, w: &CVec, f: &CVec) -> f64 {
    let achieved = a.dot(w);
    achieved
        .iter()
        .zip(f.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Per-user rates of zero-forcing joint decoding on channel `h`:
/// `log2(1 + P / (N0 * [(H H^H)^-1]_ii))`, using the pseudo-inverse when the
/// channel is singular. Users whose signal dimension falls into the left
/// null space get rate 0.
pub fn zf_decode(h: &CMat, params: &RateParams) -> Result<Vec<f64>> {
    let (rows, cols) = h.dim();
    if rows != cols {
        return Err(Error::DimensionMismatch {
            context: "zero-forcing channel",
            expected: rows,
            got: cols,
        });
    }
    let dec = svd(h);
    let rank = dec.rank(default_rcond(rows, cols));
    let snr = params.snr();
    let mut rates = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut coverage = 0.0;
        let mut noise_gain = 0.0;
        for k in 0..rank {
            let p = dec.u[(i, k)].norm_sqr();
            coverage += p;
            noise_gain += p / (dec.sigma[k] * dec.sigma[k]);
        }
        if coverage < 1.0 - 1e-9 || noise_gain == 0.0 {
            rates.push(0.0);
        } else {
            rates.push((1.0 + snr / noise_gain).log2());
        }
    }
    Ok(rates)
}

/// Unit-modulus weights with phases drawn i.i.d. uniform on `(0, 2*pi]`,
/// reproducible under `seed`.
pub fn random_weights(element_count: usize, seed: u64) -> WeightVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phases: Vec<f64> = (0..element_count)
        .map(|_| (1.0 - rng.gen::<f64>()) * std::f64::consts::TAU)
        .collect();
    WeightVector::from_phases(&phases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cis;
    use proptest::prelude::*;
    use rand::Rng;

    fn deg(v: f64) -> Angle {
        Angle::from_degrees(v).unwrap()
    }

    fn surf(m: usize, dr: f64) -> UlaSurface {
        UlaSurface::new(m, dr).unwrap()
    }

    fn pair(aoa: f64, aod: f64) -> TransceiverPair {
        TransceiverPair::new(deg(aoa), deg(aod))
    }

    fn own_gain(w: &WeightVector, p: &TransceiverPair, s: &UlaSurface) -> f64 {
        w.response(&combined_steering(p.aod, p.aoa, s))
            .unwrap()
            .norm()
    }

    #[test]
    fn mrc_broadside_is_all_ones() {
        let s = surf(4, 0.5);
        let d = mrc_weights(&pair(90.0, 90.0), &s, None);
        assert!(d.zeta.abs() < 1e-15);
        for z in d.weights.as_vec().iter() {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        assert!((own_gain(&d.weights, &pair(90.0, 90.0), &s) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn mrc_matches_reference_alignment_factor() {
        let s = surf(4, 0.5);
        let p = pair(30.0, 135.0);
        let d = mrc_weights(&p, &s, None);
        assert!((d.zeta - (-0.158919)).abs() < 1e-6);
        assert!((own_gain(&d.weights, &p, &s) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn mrc_gain_is_invariant_to_the_phase_wrap_offset() {
        let s = surf(8, 0.5);
        let p = pair(30.0, 135.0);
        let g0 = own_gain(&mrc_weights(&p, &s, Some(0)).weights, &p, &s);
        let g1 = own_gain(&mrc_weights(&p, &s, Some(1)).weights, &p, &s);
        assert!((g0 - 8.0).abs() < 1e-10);
        assert!((g1 - 8.0).abs() < 1e-10);
    }

    #[test]
    fn optimal_positions_reference_triple() {
        let s = surf(4, 0.5); // L = 2
        let fixed = pair(30.0, 135.0);
        let got = optimal_positions(&fixed, &s);
        let expected = [(68.53, 101.95), (97.70, 72.97), (129.34, 37.54)];
        assert_eq!(got.len(), 3);
        for (alpha, beta) in &expected {
            assert!(
                got.iter().any(|(a, b)| {
                    (a.degrees() - alpha).abs() < 0.05 && (b.degrees() - beta).abs() < 0.05
                }),
                "missing position ({alpha}, {beta}); got {:?}",
                got.iter()
                    .map(|(a, b)| (a.degrees(), b.degrees()))
                    .collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn doubling_length_doubles_the_positions() {
        let fixed = pair(30.0, 135.0);
        let got = optimal_positions(&fixed, &surf(8, 0.5)); // L = 4
        assert_eq!(got.len(), 7);
    }

    #[test]
    fn positions_depend_on_length_not_element_count() {
        let fixed = pair(30.0, 135.0);
        let coarse = optimal_positions(&fixed, &surf(4, 0.5));
        let dense = optimal_positions(&fixed, &surf(64, 2.0 / 64.0)); // same L = 2
        assert_eq!(coarse.len(), dense.len());
        for (c, d) in coarse.iter().zip(dense.iter()) {
            assert!((c.0.degrees() - d.0.degrees()).abs() < 1e-6);
            assert!((c.1.degrees() - d.1.degrees()).abs() < 1e-6);
        }
    }

    #[test]
    fn short_array_has_no_companion_positions() {
        assert!(optimal_positions(&pair(40.0, 120.0), &surf(2, 0.4)).is_empty());
    }

    #[test]
    fn companion_positions_share_weights_and_null_mutually() {
        let s = surf(4, 0.5);
        let fixed = pair(30.0, 135.0);
        let w = mrc_weights(&fixed, &s, None).weights;
        for (alpha, beta) in optimal_positions(&fixed, &s) {
            let other = TransceiverPair::new(alpha, beta);
            assert!((own_gain(&w, &other, &s) - 4.0).abs() < 1e-9);
            let cross_rx = w
                .response(&combined_steering(other.aod, fixed.aoa, &s))
                .unwrap()
                .norm();
            let cross_tx = w
                .response(&combined_steering(fixed.aod, other.aoa, &s))
                .unwrap()
                .norm();
            assert!(cross_rx < 1e-9, "receive-side leak {cross_rx}");
            assert!(cross_tx < 1e-9, "transmit-side leak {cross_tx}");
        }
    }

    #[test]
    fn single_pair_constraint_reduces_to_matched_direction() {
        let s = surf(6, 0.5);
        let p = pair(50.0, 140.0);
        let sol = interference_free_weights(&[p], &s, None).unwrap();
        assert!(sol.feasible);
        assert!(sol.residual < 1e-10);
        // Normalized to total power M, the solution recovers the full gain.
        let w = sol.weights.as_vec();
        let scale = (6.0 / w.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
        let scaled: CVec = w.iter().map(|z| z * scale).collect();
        let gain = scaled
            .iter()
            .zip(combined_steering(p.aod, p.aoa, &s).iter())
            .map(|(a, b)| a * b)
            .sum::<Complex64>()
            .norm();
        assert!((gain - 6.0).abs() < 1e-9);
    }

    #[test]
    fn boundary_element_budget_solves_exactly() {
        let s = surf(4, 0.5);
        let ps = [pair(41.0, 133.0), pair(76.0, 58.0)];
        let sol = interference_free_weights(&ps, &s, None).unwrap();
        assert!(sol.feasible);
        assert!(sol.residual < 1e-10, "residual {}", sol.residual);
        // The projection to pure phases costs accuracy; both numbers exist.
        assert!(sol.phase_only_residual >= sol.residual);
        assert!(sol.weights.max_modulus_deviation() > 1e-6);
        assert!(sol.phase_only_weights.max_modulus_deviation() < 1e-12);
    }

    #[test]
    fn under_provisioned_surface_leaves_interference() {
        let mut residuals: Vec<f64> = (0..100)
            .map(|trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(1000 + trial);
                let ps: Vec<TransceiverPair> = (0..4)
                    .map(|_| {
                        pair(
                            rng.gen::<f64>() * 179.0 + 0.5,
                            rng.gen::<f64>() * 179.0 + 0.5,
                        )
                    })
                    .collect();
                interference_free_weights(&ps, &surf(9, 0.5), None)
                    .unwrap()
                    .residual
            })
            .collect();
        residuals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = residuals[residuals.len() / 2];
        assert!(median > 1e-3, "median residual {median}");
    }

    #[test]
    fn coincident_pairs_are_rank_deficient() {
        let s = surf(9, 0.5);
        let p = pair(60.0, 120.0);
        let err = interference_free_weights(&[p, p], &s, None);
        assert!(matches!(err, Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn zf_diagonal_channel() {
        let m = 4.0f64;
        let h = CMat::eye(3).mapv(|z| z * m * m);
        let rates = zf_decode(&h, &RateParams::new(2.0, 1.0).unwrap()).unwrap();
        let expected = (1.0 + 2.0 * m.powi(4)).log2();
        for r in rates {
            assert!((r - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn zf_zero_channel_gives_zero_rates() {
        let h = CMat::zeros((3, 3));
        let rates = zf_decode(&h, &RateParams::new(1.0, 1.0).unwrap()).unwrap();
        assert!(rates.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn zf_nullspace_user_gets_zero_rate() {
        let mut h = CMat::zeros((2, 2));
        h[(0, 0)] = Complex64::new(2.0, 0.0);
        let params = RateParams::new(1.0, 1.0).unwrap();
        let rates = zf_decode(&h, &params).unwrap();
        assert!((rates[0] - (1.0 + 4.0f64).log2()).abs() < 1e-12);
        assert_eq!(rates[1], 0.0);
    }

    #[test]
    fn zf_matches_explicit_two_by_two_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut cx = || Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        let h = CMat::from_shape_fn((2, 2), |_| cx());
        let params = RateParams::new(3.0, 0.5).unwrap();
        let rates = zf_decode(&h, &params).unwrap();

        // (H H^H)^{-1} via the explicit 2x2 inverse.
        let g00: Complex64 = h.row(0).iter().map(|z| z * z.conj()).sum();
        let g01: Complex64 = h
            .row(0)
            .iter()
            .zip(h.row(1).iter())
            .map(|(a, b)| a * b.conj())
            .sum();
        let g11: Complex64 = h.row(1).iter().map(|z| z * z.conj()).sum();
        let det = g00 * g11 - g01 * g01.conj();
        let inv00 = (g11 / det).re;
        let inv11 = (g00 / det).re;
        let expected = [
            (1.0 + params.snr() / inv00).log2(),
            (1.0 + params.snr() / inv11).log2(),
        ];
        for (r, e) in rates.iter().zip(expected.iter()) {
            assert!((r - e).abs() < 1e-9, "got {r}, expected {e}");
        }
    }

    #[test]
    fn random_weights_are_reproducible_and_unit_modulus() {
        let a = random_weights(16, 42);
        let b = random_weights(16, 42);
        let c = random_weights(16, 43);
        assert_eq!(a.as_vec(), b.as_vec());
        assert!(a
            .as_vec()
            .iter()
            .zip(c.as_vec().iter())
            .any(|(x, y)| (x - y).norm() > 1e-9));
        assert!(a.max_modulus_deviation() < 1e-12);
    }

    proptest! {
        #[test]
        fn mrc_reaches_the_coherent_bound(aoa in 0.0f64..=180.0, aod in 0.0f64..=180.0, m in 2usize..24) {
            let s = surf(m, 0.5);
            let p = pair(aoa, aod);
            let d = mrc_weights(&p, &s, None);
            prop_assert!((own_gain(&d.weights, &p, &s) - m as f64).abs() < 1e-10);
        }

        #[test]
        fn no_phase_pattern_beats_the_matched_gain(
            aoa in 1.0f64..179.0,
            aod in 1.0f64..179.0,
            seed in 0u64..1000,
        ) {
            let s = surf(8, 0.5);
            let p = pair(aoa, aod);
            let competitor = {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let phases: Vec<f64> = (0..8).map(|_| rng.gen::<f64>() * std::f64::consts::TAU).collect();
                WeightVector::from_phases(&phases)
            };
            prop_assert!(own_gain(&competitor, &p, &s) <= 8.0 + 1e-10);
        }
    }

    // Keep `cis` linked into this module's tests for phase sanity checks.
    #[test]
    fn mrc_weight_phase_progression() {
        let s = surf(4, 0.5);
        let p = pair(30.0, 135.0);
        let d = mrc_weights(&p, &s, None);
        let step = -d.zeta * std::f64::consts::PI; // -zeta * 2*pi*dr with dr = 0.5
        for (m, z) in d.weights.as_vec().iter().enumerate() {
            assert!((z - cis(step * m as f64)).norm() < 1e-12);
        }
    }
}
