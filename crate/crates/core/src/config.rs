//! TOML run configuration and on-disk formats: grid fields as flat CSV
//! (header `i,j,k,value`, index-major) with a JSON sidecar carrying the
//! lattice and tail parameters. Configuration is working-precision `f64`.

use crate::collision::QuadratureSpec;
use crate::error::{Error, Result};
use crate::model::{DensityFunction, DensityKind, GridField, ModelParams};
use crate::solver::{OperatorForm, SolverConfig};
use crate::vec3::Vec3;
use crate::verifier::SweepSpec;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct ModelConfig {
    pub gamma: f64,
    pub s: f64,
    #[serde(default = "one")]
    pub c_b: f64,
    #[serde(default = "default_theta_min")]
    pub theta_min: f64,
}

fn one() -> f64 {
    1.0
}

fn default_theta_min() -> f64 {
    1e-2
}

impl ModelConfig {
    pub fn build(&self) -> Result<ModelParams<f64>> {
        ModelParams::new(self.gamma, self.s, self.c_b, self.theta_min)
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct DensityConfig {
    pub kind: String,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default)]
    pub center: [f64; 3],
    #[serde(default = "default_exponent")]
    pub exponent: f64,
    #[serde(default = "one")]
    pub radius: f64,
    #[serde(default = "one")]
    pub height: f64,
    #[serde(default)]
    pub offset: [f64; 3],
    #[serde(default)]
    pub path: Option<String>,
    #[serde(default)]
    pub tail_amplitude: f64,
    #[serde(default = "default_tail_exponent")]
    pub tail_exponent: f64,
}

fn default_exponent() -> f64 {
    8.0
}

fn default_tail_exponent() -> f64 {
    40.0
}

impl DensityConfig {
    pub fn build(&self, base_dir: &Path) -> Result<DensityFunction<f64>> {
        let c = Vec3(self.center);
        match self.kind.as_str() {
            "maxwellian" => {
                let mut m = DensityFunction::maxwellian();
                if let DensityKind::Analytic(crate::model::AnalyticField::Maxwellian {
                    amplitude,
                    center,
                }) = &mut m.kind
                {
                    *amplitude = self.amplitude;
                    *center = c;
                }
                Ok(m)
            }
            "bimodal" => Ok(DensityFunction::bimodal_maxwellian(Vec3(self.offset))),
            "inverse-power" => Ok(DensityFunction::inverse_power(self.exponent)),
            "ball" => Ok(DensityFunction::ball_indicator(c, self.radius, self.height)),
            "mollified-ball" => Ok(DensityFunction::mollified_ball(
                c,
                self.radius,
                self.height,
            )),
            "grid" => {
                let rel = self.path.as_deref().ok_or_else(|| {
                    Error::Config("grid density needs `path` to the CSV field".into())
                })?;
                read_grid_density(&base_dir.join(rel))
            }
            other => Err(Error::Config(format!("unknown density kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(default)]
pub struct QuadConfig {
    pub n_theta: usize,
    pub n_phi: usize,
    pub n_vstar_radial: usize,
    pub n_vstar_angular: usize,
    pub plane_radial_nodes: usize,
    pub plane_angular_nodes: usize,
    pub r_max: f64,
    pub pv_inner_radius: f64,
    pub tail_nodes: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        let q = QuadratureSpec::<f64>::desk();
        QuadConfig {
            n_theta: q.n_theta,
            n_phi: q.n_phi,
            n_vstar_radial: q.n_vstar_radial,
            n_vstar_angular: q.n_vstar_angular,
            plane_radial_nodes: q.plane_radial_nodes,
            plane_angular_nodes: q.plane_angular_nodes,
            r_max: q.r_max,
            pv_inner_radius: q.pv_inner_radius,
            tail_nodes: q.tail_nodes,
        }
    }
}

impl QuadConfig {
    pub fn build(&self) -> Result<QuadratureSpec<f64>> {
        let spec = QuadratureSpec {
            n_theta: self.n_theta,
            n_phi: self.n_phi,
            n_vstar_radial: self.n_vstar_radial,
            n_vstar_angular: self.n_vstar_angular,
            plane_radial_nodes: self.plane_radial_nodes,
            plane_angular_nodes: self.plane_angular_nodes,
            r_max: self.r_max,
            pv_inner_radius: self.pv_inner_radius,
            tail_nodes: self.tail_nodes,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(default)]
pub struct SweepConfig {
    pub seed: u64,
    pub v0_samples: Vec<f64>,
    pub r_samples: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            seed: 42,
            v0_samples: vec![4.0, 8.0, 16.0],
            r_samples: vec![0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0],
        }
    }
}

impl SweepConfig {
    pub fn build(&self) -> SweepSpec<f64> {
        let mut s = SweepSpec::with_seed(self.seed);
        s.v0_samples = self.v0_samples.clone();
        s.r_samples = self.r_samples.clone();
        s
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(default)]
pub struct VerifyConfig {
    pub q0: f64,
    pub q: f64,
    pub p: f64,
    pub q_conv: f64,
    pub alpha: f64,
    pub beta: f64,
    pub q1: f64,
    pub q2: f64,
    pub lower_delta: f64,
    pub lower_r: f64,
    pub lower_vm: [f64; 3],
    pub v0: f64,
    pub gaussian_alpha: f64,
    pub interp_samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            q0: 5.0,
            q: 5.0,
            p: -1.0,
            q_conv: 6.0,
            alpha: 0.5,
            beta: 0.3,
            q1: 6.0,
            q2: 4.0,
            lower_delta: 1.0,
            lower_r: 1.0,
            lower_vm: [0.0; 3],
            v0: 8.0,
            gaussian_alpha: 1.0,
            interp_samples: 60,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(default)]
pub struct SolverSection {
    pub grid_l: f64,
    pub grid_n: usize,
    pub dt: Option<f64>,
    pub t_end: f64,
    pub monitor_qs: Vec<f64>,
    pub operator_form: String,
    pub negativity_tol: f64,
    /// "density" uses [density]; "mollified" mollifies it first.
    pub initial: String,
    pub epsilon: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            grid_l: 6.0,
            grid_n: 12,
            dt: None,
            t_end: 0.1,
            monitor_qs: vec![5.0, 6.0, 8.0],
            operator_form: "sigma".into(),
            negativity_tol: 1e-4,
            initial: "density".into(),
            epsilon: 0.5,
        }
    }
}

impl SolverSection {
    pub fn build(&self, quad: &QuadConfig) -> Result<SolverConfig<f64>> {
        let operator_form = match self.operator_form.as_str() {
            "sigma" => OperatorForm::Sigma,
            "carleman_split" | "carleman-split" => OperatorForm::CarlemanSplit,
            other => {
                return Err(Error::Config(format!(
                    "unknown operator form `{other}` (sigma | carleman_split)"
                )))
            }
        };
        Ok(SolverConfig {
            grid_l: self.grid_l,
            grid_n: self.grid_n,
            dt: self.dt,
            t_end: self.t_end,
            quad: quad.build()?,
            monitor_qs: self.monitor_qs.clone(),
            operator_form,
            negativity_tol: self.negativity_tol,
        })
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(default)]
pub struct BarrierSection {
    pub q_base: f64,
    pub q_targets: Vec<f64>,
    pub c0: Option<f64>,
    pub eta: f64,
    pub v0: [f64; 3],
}

impl Default for BarrierSection {
    fn default() -> Self {
        BarrierSection {
            q_base: 5.0,
            q_targets: vec![5.0, 6.0, 8.0],
            c0: None,
            eta: 0.1,
            v0: [0.0; 3],
        }
    }
}

/// Full run configuration.
#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub density: DensityConfig,
    #[serde(default)]
    pub quad: QuadConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub barrier: BarrierSection,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{e}")))
    }
}

/// Sidecar schema for grid CSV files.
#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct GridSidecar {
    pub l: f64,
    pub n: usize,
    pub tail_amplitude: f64,
    pub tail_exponent: f64,
}

/// Write a grid density as `<path>` (CSV, header `i,j,k,value`) plus
/// `<path>.json` sidecar.
pub fn write_grid_density(path: &Path, f: &DensityFunction<f64>) -> Result<()> {
    let g = match &f.kind {
        DensityKind::Grid(g) => g,
        _ => return Err(Error::Input("only grid densities can be written".into())),
    };
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "i,j,k,value")?;
    for i in 0..g.n {
        for j in 0..g.n {
            for k in 0..g.n {
                writeln!(out, "{i},{j},{k},{}", g.value_at([i, j, k]))?;
            }
        }
    }
    let sidecar = GridSidecar {
        l: g.l,
        n: g.n,
        tail_amplitude: f.tail_amplitude,
        tail_exponent: f.tail_exponent,
    };
    let json_path = sidecar_path(path);
    std::fs::write(
        json_path,
        serde_json::to_string_pretty(&sidecar).expect("sidecar serializes"),
    )?;
    Ok(())
}

fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(".json");
    std::path::PathBuf::from(p)
}

/// Read a grid density from CSV + sidecar.
pub fn read_grid_density(path: &Path) -> Result<DensityFunction<f64>> {
    let sidecar: GridSidecar = serde_json::from_str(
        &std::fs::read_to_string(sidecar_path(path))
            .map_err(|e| Error::Config(format!("missing sidecar for {}: {e}", path.display())))?,
    )
    .map_err(|e| Error::Config(format!("bad sidecar: {e}")))?;
    let text = std::fs::read_to_string(path)?;
    let n = sidecar.n;
    let mut values = vec![0.0f64; n * n * n];
    let mut seen = 0usize;
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 {
            if line.trim() != "i,j,k,value" {
                return Err(Error::Config("grid CSV must start with i,j,k,value".into()));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let mut next_idx = || -> Result<usize> {
            parts
                .next()
                .and_then(|t| t.trim().parse().ok())
                .ok_or_else(|| Error::Config(format!("bad grid CSV line {}", lineno + 1)))
        };
        let (i, j, k) = (next_idx()?, next_idx()?, next_idx()?);
        let value: f64 = parts
            .next()
            .and_then(|t| t.trim().parse().ok())
            .ok_or_else(|| Error::Config(format!("bad grid CSV value at line {}", lineno + 1)))?;
        if i >= n || j >= n || k >= n {
            return Err(Error::Config(format!(
                "grid index out of range at line {}",
                lineno + 1
            )));
        }
        values[(i * n + j) * n + k] = value;
        seen += 1;
    }
    if seen != n * n * n {
        return Err(Error::Config(format!(
            "grid CSV has {seen} rows, expected {}",
            n * n * n
        )));
    }
    DensityFunction::new(
        DensityKind::Grid(GridField {
            l: sidecar.l,
            n,
            values,
        }),
        sidecar.tail_amplitude,
        sidecar.tail_exponent,
    )
}
