//! Parameter sweeps written as CSV.

use clap::ValueEnum;
use riemann_scatter_core::geometry::CurveConfig;
use riemann_scatter_core::linalg::spectral_norm;
use riemann_scatter_core::scattering::{build_scattering_genus0, index_estimate, period_map, DEFAULT_INDEX_THRESHOLD};
use riemann_scatter_core::schiffer::{build_blocks, Method};
use riemann_scatter_core::torus::{build_mode_operators, torus_identity_suite, TorusConfig};
use riemann_scatter_core::ScatterError;

use crate::config::{ComplexValue, CurveSpec, RunConfig, TorusSpec};
use crate::CliError;

/// CSV header of a sweep.
pub const SWEEP_HEADER: &str = "param_value,grunsky_norm,unitarity_residual,upsilon_norm,index_ker,index_coker";

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    /// Real Joukowski parameter of `z + c/z`; replaces the curve.
    C,
    /// Certificate margin; rescales the tail of the map or the inner radius.
    Margin,
    /// Truncation `N`.
    #[value(name = "N")]
    N,
    /// Upper slice height of the torus strip.
    Y2,
}

/// One row of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub param_value: f64,
    /// `‖T₂₂‖`, the norm of the Grunsky operator on a single curve.
    pub grunsky_norm: f64,
    pub unitarity_residual: f64,
    /// `‖Υ‖ = ‖T₁₁‖`.
    pub upsilon_norm: f64,
    pub index_ker: usize,
    pub index_coker: usize,
}

impl SweepRow {
    fn csv(&self, param: SweepParam) -> String {
        let value = if param == SweepParam::N {
            format!("{}", self.param_value as usize)
        } else {
            format!("{:?}", self.param_value)
        };
        // Debug formatting is the shortest round-trip form and switches to exponents for tiny values
        format!(
            "{value},{:?},{:?},{:?},{},{}",
            self.grunsky_norm, self.unitarity_residual, self.upsilon_norm, self.index_ker, self.index_coker
        )
    }
}

/// Parses a comma-separated grid; an empty string is an empty grid.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| CliError::Parse(format!("grid value {s:?}: {e}")))
        })
        .collect()
}

fn lift(e: ScatterError) -> CliError {
    match e {
        ScatterError::NonConvergent { .. } => CliError::NonConvergent(e),
        ScatterError::InvalidConfig(_) => CliError::Invalid(e),
        other => CliError::Core(other),
    }
}

fn invalid(msg: String) -> CliError {
    CliError::Invalid(ScatterError::InvalidConfig(msg))
}

fn curve_row(param_value: f64, cfg: &CurveConfig, n: usize) -> Result<SweepRow, CliError> {
    riemann_scatter_core::geometry::validate_config(cfg).map_err(lift)?;
    let blocks = build_blocks(cfg, n, Method::Series, 0).map_err(lift)?;
    let s = build_scattering_genus0(cfg, n).map_err(lift)?;
    let p = period_map(cfg, n).map_err(lift)?;
    let idx = index_estimate(cfg, n, DEFAULT_INDEX_THRESHOLD).map_err(lift)?;
    Ok(SweepRow {
        param_value,
        grunsky_norm: spectral_norm(&blocks.t22.matrix),
        unitarity_residual: s.unitarity_residual,
        upsilon_norm: p.upsilon_norm,
        index_ker: idx.ker,
        index_coker: idx.coker,
    })
}

fn torus_row(param_value: f64, t: &TorusConfig) -> Result<SweepRow, CliError> {
    let rep = torus_identity_suite(t).map_err(lift)?;
    let kmax = t.modes as i64;
    let mut t22: f64 = 0.0;
    let mut t11: f64 = 0.0;
    for k in -kmax..=kmax {
        let m = build_mode_operators(t, k).map_err(lift)?;
        t22 = t22.max(m.t22[(0, 0)].norm());
        t11 = t11.max(m.t11[(0, 0)].norm());
    }
    Ok(SweepRow {
        param_value,
        grunsky_norm: t22,
        unitarity_residual: rep.max_unitarity(),
        upsilon_norm: t11,
        index_ker: rep.index.ker,
        index_coker: rep.index.coker,
    })
}

fn with_margin(spec: &CurveSpec, margin: f64) -> Result<CurveSpec, CliError> {
    match spec {
        CurveSpec::UnitCircle => Err(invalid("the unit circle has a fixed margin".into())),
        CurveSpec::Concentric { big_r, .. } => Ok(CurveSpec::Concentric {
            r: (1.0 - margin) * big_r,
            big_r: *big_r,
        }),
        CurveSpec::ExteriorPoly { b0, tail, kappa_max } => {
            let sum: f64 = tail
                .iter()
                .enumerate()
                .map(|(i, b)| (i + 1) as f64 * b.to_complex().norm())
                .sum();
            if sum == 0.0 {
                return Err(invalid("the margin of the identity map cannot be changed".into()));
            }
            let scale = (1.0 - margin) / sum;
            Ok(CurveSpec::ExteriorPoly {
                b0: *b0,
                tail: tail
                    .iter()
                    .map(|b| ComplexValue::from(b.to_complex() * scale))
                    .collect(),
                kappa_max: *kappa_max,
            })
        }
    }
}

/// Computes one row per grid value.
pub fn sweep_rows(
    cfg: &RunConfig,
    param: SweepParam,
    grid: &[f64],
    truncation: Option<usize>,
) -> Result<Vec<SweepRow>, CliError> {
    let n = cfg.truncation_or(truncation);
    let curve = || {
        cfg.curve
            .clone()
            .ok_or_else(|| invalid("this sweep needs a curve section".into()))
    };
    grid.iter()
        .map(|&v| match param {
            SweepParam::C => curve_row(v, &CurveSpec::joukowski(v).to_core(), n),
            SweepParam::Margin => curve_row(v, &with_margin(&curve()?, v)?.to_core(), n),
            SweepParam::N => {
                if !(v >= 1.0 && v.fract() == 0.0) {
                    return Err(invalid(format!("truncation {v} is not a positive integer")));
                }
                curve_row(v, &curve()?.to_core(), v as usize)
            }
            SweepParam::Y2 => {
                let base = cfg.torus.unwrap_or_default();
                let t = TorusSpec { y2: v, ..base }.to_core();
                t.validate().map_err(lift)?;
                torus_row(v, &t)
            }
        })
        .collect()
}

/// Renders rows as CSV with a header and LF line endings.
pub fn to_csv(param: SweepParam, rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv(param));
        out.push('\n');
    }
    out
}
