//! JSON run configuration and its conversion into core types.

use num_complex::Complex64;
use riemann_scatter_core::geometry::{CurveConfig, ExteriorMapPoly, DEFAULT_KAPPA_MAX};
use riemann_scatter_core::torus::TorusConfig;
use serde::{Deserialize, Serialize};

/// Default operator truncation `N`.
pub const DEFAULT_TRUNCATION: usize = 24;
/// Default boundary quadrature size `M`.
pub const DEFAULT_QUADRATURE: usize = 512;

/// A complex number written either as a bare real number or as an `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexValue {
    pub fn to_complex(self) -> Complex64 {
        match self {
            ComplexValue::Real(x) => Complex64::new(x, 0.0),
            ComplexValue::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        if z.im == 0.0 {
            ComplexValue::Real(z.re)
        } else {
            ComplexValue::Pair([z.re, z.im])
        }
    }
}

/// Separating curve of a genus-zero configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    UnitCircle,
    Concentric {
        r: f64,
        #[serde(rename = "R")]
        big_r: f64,
    },
    ExteriorPoly {
        #[serde(default = "zero_complex")]
        b0: ComplexValue,
        #[serde(default)]
        tail: Vec<ComplexValue>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kappa_max: Option<f64>,
    },
}

fn zero_complex() -> ComplexValue {
    ComplexValue::Real(0.0)
}

impl CurveSpec {
    /// Core configuration; validity is checked separately by the certificate.
    pub fn to_core(&self) -> CurveConfig {
        match self {
            CurveSpec::UnitCircle => CurveConfig::UnitCircle,
            CurveSpec::Concentric { r, big_r } => CurveConfig::ConcentricAnnulus { r: *r, big_r: *big_r },
            CurveSpec::ExteriorPoly { b0, tail, kappa_max } => {
                CurveConfig::ExteriorPolyCurve(ExteriorMapPoly::with_kappa(
                    b0.to_complex(),
                    tail.iter().map(|b| b.to_complex()).collect(),
                    kappa_max.unwrap_or(DEFAULT_KAPPA_MAX),
                ))
            }
        }
    }

    /// Joukowski map `z + c/z`.
    pub fn joukowski(c: f64) -> Self {
        CurveSpec::ExteriorPoly {
            b0: zero_complex(),
            tail: vec![ComplexValue::Real(c)],
            kappa_max: None,
        }
    }
}

/// Strip configuration on the square torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusSpec {
    #[serde(default = "default_y1")]
    pub y1: f64,
    #[serde(default = "default_y2")]
    pub y2: f64,
    #[serde(default = "default_modes")]
    pub modes: usize,
    #[serde(default = "default_cutoff")]
    pub lattice_cutoff: usize,
}

fn default_y1() -> f64 {
    TorusConfig::default().y1
}
fn default_y2() -> f64 {
    TorusConfig::default().y2
}
fn default_modes() -> usize {
    TorusConfig::default().modes
}
fn default_cutoff() -> usize {
    TorusConfig::default().lattice_cutoff
}

impl Default for TorusSpec {
    fn default() -> Self {
        let d = TorusConfig::default();
        Self {
            y1: d.y1,
            y2: d.y2,
            modes: d.modes,
            lattice_cutoff: d.lattice_cutoff,
        }
    }
}

impl TorusSpec {
    pub fn to_core(&self) -> TorusConfig {
        TorusConfig {
            y1: self.y1,
            y2: self.y2,
            modes: self.modes,
            lattice_cutoff: self.lattice_cutoff,
        }
    }
}

/// Per-check tolerance overrides. Unset entries fall back to the built-in values.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadratic: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjoint: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jump: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub greens: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitarity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scatter: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bvp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus: Option<f64>,
}

/// Top-level run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus: Option<TorusSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl RunConfig {
    /// Parses a configuration from JSON text.
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Truncation after applying an optional command-line override.
    pub fn truncation_or(&self, flag: Option<usize>) -> usize {
        flag.or(self.truncation).unwrap_or(DEFAULT_TRUNCATION)
    }

    /// Quadrature size after applying an optional command-line override.
    pub fn quadrature_or(&self, flag: Option<usize>) -> usize {
        flag.or(self.quadrature).unwrap_or(DEFAULT_QUADRATURE)
    }
}
