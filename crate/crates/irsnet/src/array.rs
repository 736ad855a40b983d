//! Uniform linear array geometry: steering vectors, combined steering
//! vectors, and the angular response pattern with its nulls and period.
//!
//! Element `m` (0-based) of a steering vector carries the phase
//! `-2*pi*spacing*cos(phi)*m`, so the first element is always 1. The combined
//! steering vector of an arrival/departure angle pair is the entrywise
//! product of the two steering vectors scaled by the surface path-loss
//! factor: it is the effective per-element channel of one reflected hop.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{cis, CVec};

/// Azimuth angle in radians, restricted to the front half-space `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle(f64);

impl Angle {
    pub fn from_radians(value: f64) -> Result<Self> {
        if value.is_finite() && (0.0..=PI).contains(&value) {
            Ok(Angle(value))
        } else {
            Err(Error::InvalidAngle { value_rad: value })
        }
    }

    pub fn from_degrees(value: f64) -> Result<Self> {
        Self::from_radians(value.to_radians())
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }

    pub fn cos(self) -> f64 {
        self.0.cos()
    }
}

/// Position (meters) and boresight orientation (radians) of a surface in the
/// plane. Only used to derive inter-surface link geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub position: [f64; 2],
    pub orientation_rad: f64,
}

impl Default for Pose {
    fn default() -> Self {
        Pose {
            position: [0.0, 0.0],
            orientation_rad: 0.0,
        }
    }
}

/// One reflecting surface: a uniform linear array of programmable elements.
#[derive(Debug, Clone, PartialEq)]
pub struct UlaSurface {
    element_count: usize,
    spacing_wavelengths: f64,
    path_loss: f64,
    wavelength_m: f64,
    pose: Pose,
}

impl UlaSurface {
    /// Surface with `element_count` elements at `spacing_wavelengths` spacing
    /// (in carrier wavelengths), unit path loss and unit wavelength.
    pub fn new(element_count: usize, spacing_wavelengths: f64) -> Result<Self> {
        if element_count < 1 {
            return Err(Error::InvalidParameter {
                name: "element_count",
                reason: "must be at least 1".into(),
            });
        }
        if !(spacing_wavelengths.is_finite() && spacing_wavelengths > 0.0) {
            return Err(Error::InvalidParameter {
                name: "spacing_wavelengths",
                reason: format!("must be finite and positive, got {spacing_wavelengths}"),
            });
        }
        Ok(UlaSurface {
            element_count,
            spacing_wavelengths,
            path_loss: 1.0,
            wavelength_m: 1.0,
            pose: Pose::default(),
        })
    }

    /// Amplitude path-loss factor applied once per reflection off this surface.
    pub fn with_path_loss(mut self, path_loss: f64) -> Result<Self> {
        if !(path_loss.is_finite() && path_loss >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "path_loss",
                reason: format!("must be finite and non-negative, got {path_loss}"),
            });
        }
        self.path_loss = path_loss;
        Ok(self)
    }

    /// Carrier wavelength in meters; only exact inter-surface geometry uses it.
    pub fn with_wavelength(mut self, wavelength_m: f64) -> Result<Self> {
        if !(wavelength_m.is_finite() && wavelength_m > 0.0) {
            return Err(Error::InvalidParameter {
                name: "wavelength_m",
                reason: format!("must be finite and positive, got {wavelength_m}"),
            });
        }
        self.wavelength_m = wavelength_m;
        Ok(self)
    }

    pub fn with_pose(mut self, pose: Pose) -> Self {
        self.pose = pose;
        self
    }

    pub fn element_count(&self) -> usize {
        self.element_count
    }

    pub fn spacing_wavelengths(&self) -> f64 {
        self.spacing_wavelengths
    }

    pub fn path_loss(&self) -> f64 {
        self.path_loss
    }

    pub fn wavelength_m(&self) -> f64 {
        self.wavelength_m
    }

    pub fn pose(&self) -> Pose {
        self.pose
    }

    /// Relative array length `L = M * spacing`, in wavelengths.
    pub fn relative_length(&self) -> f64 {
        self.element_count as f64 * self.spacing_wavelengths
    }

    /// Element spacing in meters.
    pub fn spacing_m(&self) -> f64 {
        self.spacing_wavelengths * self.wavelength_m
    }
}

/// Steering vector of a plane wave at angle `phi`: element `m` is
/// `exp(-j * 2*pi * spacing * cos(phi) * m)`.
pub fn steering_vector(phi: Angle, surface: &UlaSurface) -> CVec {
    let step = -2.0 * PI * surface.spacing_wavelengths() * phi.cos();
    CVec::from_shape_fn(surface.element_count(), |m| cis(step * m as f64))
}

/// Combined steering vector of a departure/arrival pair: the entrywise
/// product of the two steering vectors, scaled by the surface path loss.
pub fn combined_steering(phi_out: Angle, phi_in: Angle, surface: &UlaSurface) -> CVec {
    let step = -2.0 * PI * surface.spacing_wavelengths() * (phi_out.cos() + phi_in.cos());
    let l = Complex64::new(surface.path_loss(), 0.0);
    CVec::from_shape_fn(surface.element_count(), |m| l * cis(step * m as f64))
}

/// Array response at the angular-domain coordinate `f_cc` (a sum or
/// difference of direction cosines plus any alignment offset), evaluated by
/// direct geometric-series summation:
/// `sum_{m=0}^{M-1} exp(-j * 2*pi * spacing * f_cc * m)`.
///
/// The pattern is periodic in `f_cc` with period `1/spacing` and has nulls
/// spaced `1/L` apart; the summation stays exact at the removable
/// singularities where the sin-ratio form degenerates.
pub fn beampattern(f_cc: f64, surface: &UlaSurface) -> Complex64 {
    let step = -2.0 * PI * surface.spacing_wavelengths() * f_cc;
    (0..surface.element_count())
        .map(|m| cis(step * m as f64))
        .sum()
}

/// Magnitude of the pattern via the sin-ratio form
/// `|sin(pi f_cc L) / sin(pi f_cc L / M)|`, with the removable singularities
/// patched to `M`. Cross-check companion to [`beampattern`].
pub fn beampattern_magnitude_closed_form(f_cc: f64, surface: &UlaSurface) -> f64 {
    let l = surface.relative_length();
    let m = surface.element_count() as f64;
    let denom_arg = PI * f_cc * l / m;
    let denom = denom_arg.sin();
    if denom.abs() < 1e-12 {
        m
    } else {
        ((PI * f_cc * l).sin() / denom).abs()
    }
}
