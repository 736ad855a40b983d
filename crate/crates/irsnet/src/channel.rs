//! Single-surface multi-user channel assembly and the surface-to-surface
//! channel in both exact-geometry and far-field rank-one forms.
//!
//! Convention: a surface with reflection coefficients `w` turns an incident
//! per-element pattern `a` into the scalar gain `sum_m w_m * a_m`. Stored
//! weight vectors are therefore the per-element reflection coefficients
//! themselves; aligning them against a combined steering vector means giving
//! `w_m` the opposite phase of `a_m`.

use num_complex::Complex64;

use crate::array::{steering_vector, Angle, UlaSurface};
use crate::beamforming::TransceiverPair;
use crate::error::{Error, Result};
use crate::linalg::{cis, ensure_finite_vec, CMat, CVec};
use crate::network::EffectiveChannel;

/// Per-element reflection coefficients of one surface.
///
/// Phase-only designs keep every entry on the unit circle; constrained
/// least-squares solutions generally do not, and callers that care can ask
/// [`WeightVector::max_modulus_deviation`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    w: CVec,
}

impl WeightVector {
    pub fn new(w: CVec) -> Result<Self> {
        ensure_finite_vec(&w, "weight vector")?;
        Ok(WeightVector { w })
    }

    /// All-ones weights (zero phase on every element).
    pub fn ones(len: usize) -> Self {
        WeightVector {
            w: CVec::from_elem(len, Complex64::new(1.0, 0.0)),
        }
    }

    /// Unit-modulus weights from per-element phases in radians.
    pub fn from_phases(phases: &[f64]) -> Self {
        WeightVector {
            w: phases.iter().map(|&p| cis(p)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn as_vec(&self) -> &CVec {
        &self.w
    }

    /// Gain this weight pattern produces on a per-element pattern:
    /// `sum_m w_m * pattern_m`.
    pub fn response(&self, pattern: &CVec) -> Result<Complex64> {
        if pattern.len() != self.w.len() {
            return Err(Error::DimensionMismatch {
                context: "weight response",
                expected: self.w.len(),
                got: pattern.len(),
            });
        }
        Ok(self.w.iter().zip(pattern.iter()).map(|(w, a)| w * a).sum())
    }

    /// Largest deviation of any entry's modulus from 1.
    pub fn max_modulus_deviation(&self) -> f64 {
        self.w
            .iter()
            .map(|z| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Project every entry onto the unit circle, keeping only its phase.
    /// Zero entries map to 1.
    pub fn phase_only(&self) -> WeightVector {
        WeightVector {
            w: self
                .w
                .iter()
                .map(|z| {
                    if z.norm() == 0.0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        z / z.norm()
                    }
                })
                .collect(),
        }
    }
}

/// Amplitude factor equivalent to a power loss in dB (10 dB -> 10^(-0.5)).
pub fn edge_amplitude_from_loss_db(loss_db: f64) -> f64 {
    10f64.powf(-loss_db / 20.0)
}

/// Directed line-of-sight link between two surfaces.
///
/// `departure` is the departure angle at the source surface, `arrival` the
/// arrival angle at the destination, both measured against the respective
/// array axis; `distance_m` is the first-element-to-first-element distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterIrsLink {
    pub departure: Angle,
    pub arrival: Angle,
    pub distance_m: f64,
    pub edge_amplitude: f64,
}

impl InterIrsLink {
    pub fn new(departure: Angle, arrival: Angle, distance_m: f64) -> Result<Self> {
        if !(distance_m.is_finite() && distance_m > 0.0) {
            return Err(Error::InvalidParameter {
                name: "distance_m",
                reason: format!("must be finite and positive, got {distance_m}"),
            });
        }
        Ok(InterIrsLink {
            departure,
            arrival,
            distance_m,
            edge_amplitude: 1.0,
        })
    }

    pub fn with_edge_amplitude(mut self, edge_amplitude: f64) -> Result<Self> {
        if !(edge_amplitude.is_finite() && edge_amplitude >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "edge_amplitude",
                reason: format!("must be finite and non-negative, got {edge_amplitude}"),
            });
        }
        self.edge_amplitude = edge_amplitude;
        Ok(self)
    }

    /// Dihedral angle between the two array axes.
    pub fn dihedral(&self) -> f64 {
        self.arrival.radians() - self.departure.radians()
    }

    /// The same physical link traversed in the opposite direction.
    pub fn reversed(&self) -> InterIrsLink {
        InterIrsLink {
            departure: self.arrival,
            arrival: self.departure,
            distance_m: self.distance_m,
            edge_amplitude: self.edge_amplitude,
        }
    }

    /// Derive link geometry from the two surface poses: angles are measured
    /// from each array axis to the line joining the first elements.
    pub fn between_poses(src: &UlaSurface, dst: &UlaSurface) -> Result<Self> {
        let [sx, sy] = src.pose().position;
        let [dx, dy] = dst.pose().position;
        let (ex, ey) = (dx - sx, dy - sy);
        let distance = ex.hypot(ey);
        if distance <= 0.0 {
            return Err(Error::Geometry(
                "surfaces share the same first-element position".into(),
            ));
        }
        let line = ey.atan2(ex);
        let wrap = |x: f64| {
            let mut v = x % (2.0 * std::f64::consts::PI);
            if v < 0.0 {
                v += 2.0 * std::f64::consts::PI;
            }
            v
        };
        let departure = Angle::from_radians(wrap(line - src.pose().orientation_rad))?;
        let arrival = Angle::from_radians(wrap(line - dst.pose().orientation_rad))?;
        InterIrsLink::new(departure, arrival, distance)
    }
}

/// End-to-end channel of one surface serving `pairs`: entry `(i, u)` is the
/// gain from transmitter `u` to receiver `i` through the weighted surface.
pub fn single_irs_channel(
    surface: &UlaSurface,
    weights: &WeightVector,
    pairs: &[TransceiverPair],
) -> Result<EffectiveChannel> {
    if weights.len() != surface.element_count() {
        return Err(Error::DimensionMismatch {
            context: "single surface weights",
            expected: surface.element_count(),
            got: weights.len(),
        });
    }
    if pairs.is_empty() {
        return Err(Error::InvalidParameter {
            name: "pairs",
            reason: "at least one transceiver pair is required".into(),
        });
    }
    let n = pairs.len();
    let mut h = CMat::zeros((n, n));
    for (i, rx) in pairs.iter().enumerate() {
        for (u, tx) in pairs.iter().enumerate() {
            let pattern = crate::array::combined_steering(rx.aod, tx.aoa, surface);
            h[(i, u)] = weights.response(&pattern)?;
        }
    }
    Ok(EffectiveChannel::from_orders(vec![(1, h)]))
}

/// Far-field channel between two surfaces: the rank-one outer product of the
/// arrival steering vector at the destination and the departure steering
/// vector at the source, scaled by the per-traversal edge amplitude. The
/// constant propagation phase over `distance_m` is dropped.
pub fn inter_irs_channel_farfield(link: &InterIrsLink, src: &UlaSurface, dst: &UlaSurface) -> CMat {
    let a_arr = steering_vector(link.arrival, dst);
    let a_dep = steering_vector(link.departure, src);
    let amp = Complex64::new(link.edge_amplitude, 0.0);
    CMat::from_shape_fn((dst.element_count(), src.element_count()), |(j, i)| {
        amp * a_arr[j] * a_dep[i]
    })
}

/// Element-to-element channel between two surfaces from the exact planar
/// geometry, without any far-field approximation: entry `(j, i)` is
/// `exp(-j * 2*pi/lambda * D_ji)` for the true element distance `D_ji`,
/// scaled by the edge amplitude.
///
/// Unlike the far-field form this keeps absolute propagation phases, and its
/// far-field limit is the complex conjugate of [`inter_irs_channel_farfield`]
/// times a constant phase (element phases accumulate with opposite sign as
/// the distance shrinks toward the reference element).
pub fn inter_irs_channel_exact(
    link: &InterIrsLink,
    src: &UlaSurface,
    dst: &UlaSurface,
) -> Result<CMat> {
    if (src.wavelength_m() - dst.wavelength_m()).abs() > 1e-12 * src.wavelength_m() {
        return Err(Error::InvalidParameter {
            name: "wavelength_m",
            reason: "source and destination surfaces must share the carrier wavelength".into(),
        });
    }
    let lambda = src.wavelength_m();
    let k = 2.0 * std::f64::consts::PI / lambda;
    let mu = link.dihedral();
    let eps = link.arrival.radians();
    let d_src = src.spacing_m();
    let d_dst = dst.spacing_m();
    let amp = Complex64::new(link.edge_amplitude, 0.0);

    // Destination-array frame: destination element j sits at (j*d_dst, 0);
    // the source's first element is distance_m away at angle `arrival`, and
    // the source array extends along the dihedral direction.
    let mut e = CMat::zeros((dst.element_count(), src.element_count()));
    for i in 0..src.element_count() {
        let da = i as f64 * d_src;
        let sx = link.distance_m * eps.cos() - da * mu.cos();
        let sy = link.distance_m * eps.sin() - da * mu.sin();
        if sy <= 0.0 {
            return Err(Error::Geometry(format!(
                "source element {i} is not in front of the destination array (transverse offset {sy:.3e} m)"
            )));
        }
        for j in 0..dst.element_count() {
            let dx = sx - j as f64 * d_dst;
            let dist = dx.hypot(sy);
            if dist < 1e-9 * lambda {
                return Err(Error::Geometry(format!(
                    "elements {i} (source) and {j} (destination) coincide"
                )));
            }
            e[(j, i)] = amp * cis(-k * dist);
        }
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::Pose;
    use crate::linalg::{inner, singular_values, svd, vec_norm};
    use proptest::prelude::*;

    fn deg(v: f64) -> Angle {
        Angle::from_degrees(v).unwrap()
    }

    fn surf(m: usize, dr: f64) -> UlaSurface {
        UlaSurface::new(m, dr).unwrap()
    }

    #[test]
    fn weight_vector_rejects_non_finite() {
        let bad = CVec::from_elem(2, Complex64::new(f64::NAN, 0.0));
        assert!(WeightVector::new(bad).is_err());
    }

    #[test]
    fn response_checks_dimensions() {
        let w = WeightVector::ones(4);
        let short = CVec::from_elem(3, Complex64::new(1.0, 0.0));
        assert!(w.response(&short).is_err());
    }

    #[test]
    fn single_pair_all_ones_broadside_gain_is_element_count() {
        let s = surf(4, 0.5);
        let pair = TransceiverPair::new(deg(90.0), deg(90.0));
        let ch = single_irs_channel(&s, &WeightVector::ones(4), &[pair]).unwrap();
        let h = ch.matrix();
        assert!((h[(0, 0)] - Complex64::new(4.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn mrc_weights_reach_full_gain_with_path_loss() {
        let s = surf(8, 0.5).with_path_loss(0.5).unwrap();
        let pair = TransceiverPair::new(deg(30.0), deg(135.0));
        let design = crate::beamforming::mrc_weights(&pair, &s, None);
        let ch = single_irs_channel(&s, &design.weights, &[pair]).unwrap();
        assert!((ch.matrix()[(0, 0)].norm() - 8.0 * 0.5).abs() < 1e-12);
    }

    #[test]
    fn farfield_broadside_is_flat() {
        let link = InterIrsLink::new(deg(90.0), deg(90.0), 100.0)
            .unwrap()
            .with_edge_amplitude(0.5)
            .unwrap();
        let e = inter_irs_channel_farfield(&link, &surf(3, 0.5), &surf(2, 0.5));
        assert_eq!(e.dim(), (2, 3));
        for z in e.iter() {
            assert!((z - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn farfield_is_rank_one() {
        let link = InterIrsLink::new(deg(40.0), deg(110.0), 50.0).unwrap();
        let e = inter_irs_channel_farfield(&link, &surf(8, 0.5), &surf(6, 0.4));
        let s = singular_values(&e);
        assert!(s[1] < 1e-12 * s[0]);
    }

    #[test]
    fn farfield_transpose_identity() {
        let link = InterIrsLink::new(deg(35.0), deg(120.0), 80.0).unwrap();
        let src = surf(5, 0.5);
        let dst = surf(7, 0.5);
        let fwd = inter_irs_channel_farfield(&link, &src, &dst);
        let back = inter_irs_channel_farfield(&link.reversed(), &dst, &src);
        for i in 0..7 {
            for j in 0..5 {
                assert!((fwd[(i, j)] - back[(j, i)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_single_elements_is_plain_phase() {
        let link = InterIrsLink::new(deg(60.0), deg(100.0), 25.0).unwrap();
        let e = inter_irs_channel_exact(&link, &surf(1, 0.5), &surf(1, 0.5)).unwrap();
        let k = 2.0 * std::f64::consts::PI;
        assert!((e[(0, 0)] - cis(-k * 25.0)).norm() < 1e-9);
    }

    #[test]
    fn exact_rejects_intersecting_geometry() {
        // Arrival nearly grazing with a long source array makes elements
        // cross the destination's array line.
        let link = InterIrsLink::new(deg(10.0), deg(11.0), 2.0).unwrap();
        let res = inter_irs_channel_exact(&link, &surf(64, 0.5), &surf(4, 0.5));
        assert!(res.is_err());
    }

    #[test]
    fn exact_becomes_rank_one_in_the_far_field() {
        let src = surf(16, 0.5);
        let dst = surf(16, 0.5);
        let far = InterIrsLink::new(deg(50.0), deg(95.0), 1e4).unwrap();
        let e = inter_irs_channel_exact(&far, &src, &dst).unwrap();
        let s = singular_values(&e);
        assert!(s[1] / s[0] < 1e-2, "sigma ratio {}", s[1] / s[0]);

        // Principal left singular vector aligns with the (conjugated)
        // arrival steering vector.
        let dec = svd(&e);
        let u1: CVec = dec.u.column(0).to_owned();
        let a = steering_vector(deg(95.0), &dst).mapv(|z| z.conj());
        let alignment = inner(&u1, &a).norm() / vec_norm(&a);
        assert!(alignment > 0.999, "alignment {alignment}");
    }

    #[test]
    fn exact_rank_ratio_shrinks_with_distance() {
        let src = surf(16, 0.5);
        let dst = surf(16, 0.5);
        let mut last = f64::INFINITY;
        for exp in [2, 3, 4, 5] {
            let d = 10f64.powi(exp);
            let link = InterIrsLink::new(deg(50.0), deg(95.0), d).unwrap();
            let s = singular_values(&inter_irs_channel_exact(&link, &src, &dst).unwrap());
            let ratio = s[1] / s[0];
            assert!(ratio <= last + 1e-15, "not monotone at 1e{exp}");
            last = ratio;
        }
    }

    #[test]
    fn link_from_poses_matches_manual_geometry() {
        let src = surf(4, 0.5).with_pose(Pose {
            position: [0.0, 0.0],
            orientation_rad: 0.0,
        });
        let dst = surf(4, 0.5).with_pose(Pose {
            position: [30.0, 40.0],
            orientation_rad: 0.3,
        });
        let link = InterIrsLink::between_poses(&src, &dst).unwrap();
        assert!((link.distance_m - 50.0).abs() < 1e-12);
        let line = (40f64 / 30.0).atan();
        assert!((link.departure.radians() - line).abs() < 1e-12);
        assert!((link.arrival.radians() - (line - 0.3)).abs() < 1e-12);
        assert!((link.dihedral() - (-0.3)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn farfield_second_singular_value_vanishes(
            dep in 5.0f64..175.0,
            arr in 5.0f64..175.0,
            m_src in 2usize..12,
            m_dst in 2usize..12,
        ) {
            let link = InterIrsLink::new(deg(dep), deg(arr), 10.0).unwrap();
            let e = inter_irs_channel_farfield(&link, &surf(m_src, 0.5), &surf(m_dst, 0.5));
            let s = singular_values(&e);
            prop_assert!(s[1] <= 1e-12 * s[0]);
        }
    }
}
