//! Scenario files.
//!
//! A scenario is a TOML document with the sections `transition`, `sample`,
//! `timescales`, `frame`, `grid`, `channels`, `pumps`, `boundary` and
//! `output`. Keys are checked against a fixed schema, so a misspelt physics
//! parameter is an error instead of a silent default. A top-level
//! `preset = "<name>"` starts from a built-in scenario; keys given in the
//! document then override the preset's.

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use relmaser_core::params::SPEED_OF_LIGHT;
use relmaser_core::params::{superradiance_time_rest, TransitionSpec};
use relmaser_core::relativity::{FrameVelocity, MAX_OFFSET_FRACTION};
use relmaser_core::solver::{fundamental_velocity_step, ChannelSpec, PumpSpec, Scenario, Solver};

use crate::error::ConfigError;
use crate::presets;

/// Default time steps per observer-frame superradiance time.
pub const DEFAULT_STEPS_PER_TR: f64 = 50.0;
/// Default number of z points.
pub const DEFAULT_N_Z: usize = 500;
/// Default floor of log-scale plots (W/m²).
pub const DEFAULT_LOG_FLOOR: f64 = 1e-30;

const SCHEMA: &[(&str, &[&str])] = &[
    (
        "",
        &[
            "preset",
            "name",
            "transition",
            "sample",
            "timescales",
            "frame",
            "grid",
            "channels",
            "pumps",
            "boundary",
            "output",
        ],
    ),
    ("transition", &["preset", "lambda", "gamma_sp"]),
    ("sample", &["length", "ntot"]),
    ("timescales", &["t1", "t2"]),
    ("frame", &["beta"]),
    ("grid", &["n_z", "n_tau", "steps_per_tr", "tau_max"]),
    ("channels", &["k", "ntot"]),
    ("pumps", &["lambda_n", "lambda_p"]),
    ("boundary", &["intensity"]),
    (
        "output",
        &[
            "dir",
            "stem",
            "snapshot_times",
            "record_stride",
            "plot",
            "log_floor",
            "threads",
        ],
    ),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlotStyle {
    Linear,
    Log,
}

impl PlotStyle {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "linear" => Some(PlotStyle::Linear),
            "log" => Some(PlotStyle::Log),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionConfig {
    /// λ′ (m).
    pub lambda: f64,
    /// Γ′ (1/s).
    pub gamma_sp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    /// L′ (m).
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimescalesConfig {
    /// T₁′ (s).
    pub t1: f64,
    /// T₂′ (s).
    pub t2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameConfig {
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub n_z: usize,
    pub n_tau: usize,
    /// Rest-frame duration τ_max′ (s).
    pub tau_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    /// Offset in units of dv′ = λ′/τ_max′.
    pub k: i64,
    /// n′ₜ of the channel (1/m³).
    pub ntot: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PumpsConfig {
    /// Λₙ (1/(m³ s)); absent means n′₀ᵥ/T₁.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_n: Option<f64>,
    /// Λₚ (C/(m² s)); absent means n′₀ᵥ d′ sinθ₀/T₂.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_p: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryConfig {
    /// I₀ at z = 0 (W/m²).
    pub intensity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    pub stem: String,
    /// Observer-frame retarded times (s).
    pub snapshot_times: Vec<f64>,
    pub record_stride: usize,
    pub plot: PlotStyle,
    /// W/m².
    pub log_floor: f64,
    pub threads: usize,
}

/// A fully resolved and validated scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub transition: TransitionConfig,
    pub sample: SampleConfig,
    pub timescales: TimescalesConfig,
    pub frame: FrameConfig,
    pub grid: GridConfig,
    pub channels: Vec<ChannelConfig>,
    pub pumps: PumpsConfig,
    pub boundary: BoundaryConfig,
    pub output: OutputConfig,
}

impl ScenarioConfig {
    /// Writes the resolved scenario as a document that parses back to
    /// the same values.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config serializes")
    }

    pub fn transition_spec(&self) -> TransitionSpec {
        TransitionSpec::new(self.transition.lambda, self.transition.gamma_sp)
            .expect("validated transition")
    }

    /// dv′ = λ′/τ_max′ (m/s).
    pub fn dv_step(&self) -> f64 {
        fundamental_velocity_step(self.transition.lambda, self.grid.tau_max)
    }

    pub fn total_density(&self) -> f64 {
        self.channels.iter().map(|c| c.ntot).sum()
    }

    pub fn to_scenario(&self) -> Scenario {
        Scenario {
            name: self.name.clone(),
            transition: self.transition_spec(),
            length_rest: self.sample.length,
            t1_rest: self.timescales.t1,
            t2_rest: self.timescales.t2,
            frame: FrameVelocity::new(self.frame.beta).expect("validated beta"),
            n_z: self.grid.n_z,
            n_tau: self.grid.n_tau,
            tau_max_rest: self.grid.tau_max,
            channels: self
                .channels
                .iter()
                .map(|c| ChannelSpec {
                    k: c.k,
                    inversion_density_rest: c.ntot,
                })
                .collect(),
            pumps: PumpSpec {
                lambda_n: self.pumps.lambda_n,
                lambda_p: self.pumps.lambda_p,
            },
            boundary_intensity: self.boundary.intensity,
            record_stride: self.output.record_stride,
            snapshot_times: self.output.snapshot_times.clone(),
            threads: self.output.threads,
        }
    }
}

/// Parses and validates a scenario document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::Syntax {
            message: e.message().to_string(),
            line: e.span().map(|s| line_of(text, s.start)),
        })?;
    check_keys(&table)?;
    let merged = match table.get("preset") {
        None => table,
        Some(v) => {
            let name = v
                .as_str()
                .ok_or_else(|| constraint("preset", "must be a string"))?;
            let base = presets::document(name).ok_or_else(|| {
                constraint(
                    "preset",
                    format!("unknown preset `{name}`; see `preset list`"),
                )
            })?;
            let mut base: Table = base.parse().expect("built-in preset parses");
            base.remove("preset");
            let mut user = table;
            user.remove("preset");
            merge(&mut base, user);
            base
        }
    };
    resolve(&merged)
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn constraint(key: &str, constraint: impl Into<String>) -> ConfigError {
    ConfigError::Constraint {
        key: key.to_string(),
        constraint: constraint.into(),
    }
}

fn allowed(section: &str) -> &'static [&'static str] {
    SCHEMA
        .iter()
        .find(|(s, _)| *s == section)
        .map(|(_, k)| *k)
        .unwrap_or(&[])
}

fn check_keys(table: &Table) -> Result<(), ConfigError> {
    for (key, value) in table {
        if !allowed("").contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey { key: key.clone() });
        }
        let section_keys = allowed(key);
        let check_table = |t: &Table, prefix: &str| -> Result<(), ConfigError> {
            for k in t.keys() {
                if !section_keys.contains(&k.as_str()) {
                    return Err(ConfigError::UnknownKey {
                        key: format!("{prefix}.{k}"),
                    });
                }
            }
            Ok(())
        };
        match (key.as_str(), value) {
            ("channels", Value::Array(items)) => {
                for (i, item) in items.iter().enumerate() {
                    match item {
                        Value::Table(t) => check_table(t, &format!("channels[{i}]"))?,
                        _ => return Err(constraint(&format!("channels[{i}]"), "must be a table")),
                    }
                }
            }
            ("channels", _) => return Err(constraint("channels", "must be an array of tables")),
            ("preset" | "name", _) => {}
            (_, Value::Table(t)) => check_table(t, key)?,
            (_, _) => return Err(constraint(key, "must be a table")),
        }
    }
    Ok(())
}

/// Overlays `over` onto `base`; tables merge key by key, everything else
/// (arrays included) replaces.
fn merge(base: &mut Table, over: Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(Value::Table(b)), Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

struct Reader<'a> {
    root: &'a Table,
}

impl<'a> Reader<'a> {
    fn get(&self, section: &str, key: &str) -> Option<&'a Value> {
        self.root
            .get(section)
            .and_then(Value::as_table)
            .and_then(|t| t.get(key))
    }

    fn f64_opt(&self, section: &str, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(section, key)
            .map(|v| as_f64(v, &format!("{section}.{key}")))
            .transpose()
    }

    fn f64_req(&self, section: &str, key: &str) -> Result<f64, ConfigError> {
        self.f64_opt(section, key)?
            .ok_or_else(|| constraint(&format!("{section}.{key}"), "is required"))
    }

    fn usize_opt(&self, section: &str, key: &str) -> Result<Option<usize>, ConfigError> {
        self.get(section, key)
            .map(|v| as_usize(v, &format!("{section}.{key}")))
            .transpose()
    }

    fn str_opt(&self, section: &str, key: &str) -> Result<Option<&'a str>, ConfigError> {
        self.get(section, key)
            .map(|v| {
                v.as_str()
                    .ok_or_else(|| constraint(&format!("{section}.{key}"), "must be a string"))
            })
            .transpose()
    }
}

fn as_f64(v: &Value, key: &str) -> Result<f64, ConfigError> {
    let x = match v {
        Value::Float(x) => *x,
        Value::Integer(i) => *i as f64,
        _ => return Err(constraint(key, "must be a number")),
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(constraint(key, "must be finite"))
    }
}

fn as_usize(v: &Value, key: &str) -> Result<usize, ConfigError> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as usize),
        Value::Integer(_) => Err(constraint(key, "must be >= 0")),
        _ => Err(constraint(key, "must be an integer")),
    }
}

fn require(ok: bool, key: &str, what: &str) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(constraint(key, what))
    }
}

fn resolve(root: &Table) -> Result<ScenarioConfig, ConfigError> {
    let r = Reader { root };
    let name = match root.get("name") {
        None => "run".to_string(),
        Some(v) => v
            .as_str()
            .ok_or_else(|| constraint("name", "must be a string"))?
            .to_string(),
    };
    require(!name.is_empty(), "name", "must not be empty")?;

    let base = match r.str_opt("transition", "preset")? {
        None | Some("oh1612") => TransitionSpec::oh_1612(),
        Some(other) => {
            return Err(constraint(
                "transition.preset",
                format!("unknown transition `{other}`; known: oh1612"),
            ))
        }
    };
    let lambda = r
        .f64_opt("transition", "lambda")?
        .unwrap_or(base.lambda_rest);
    let gamma_sp = r
        .f64_opt("transition", "gamma_sp")?
        .unwrap_or(base.gamma_sp_rest);
    require(lambda > 0.0, "transition.lambda", "must be > 0")?;
    require(gamma_sp > 0.0, "transition.gamma_sp", "must be > 0")?;

    let length = r.f64_req("sample", "length")?;
    require(length > 0.0, "sample.length", "must be > 0")?;

    let t1 = r.f64_req("timescales", "t1")?;
    let t2 = r.f64_req("timescales", "t2")?;
    require(t2 > 0.0, "timescales.t2", "must be > 0")?;
    require(t1 >= t2, "timescales.t1", "must be >= timescales.t2")?;

    let beta = r.f64_opt("frame", "beta")?.unwrap_or(0.0);
    require(beta.abs() < 1.0, "frame.beta", "|beta| < 1")?;

    let channels = match (root.get("channels"), r.f64_opt("sample", "ntot")?) {
        (Some(_), Some(_)) => {
            return Err(constraint(
                "sample.ntot",
                "conflicts with [[channels]]; give one or the other",
            ))
        }
        (None, None) => {
            return Err(constraint(
                "sample.ntot",
                "is required when no [[channels]] are given",
            ))
        }
        (None, Some(ntot)) => vec![ChannelConfig { k: 0, ntot }],
        (Some(Value::Array(items)), None) => {
            let mut out = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                let t = item.as_table().expect("checked");
                let key = |k: &str| format!("channels[{i}].{k}");
                let k = match t.get("k") {
                    Some(Value::Integer(k)) => *k,
                    Some(_) => return Err(constraint(&key("k"), "must be an integer")),
                    None => return Err(constraint(&key("k"), "is required")),
                };
                let ntot = as_f64(
                    t.get("ntot")
                        .ok_or_else(|| constraint(&key("ntot"), "is required"))?,
                    &key("ntot"),
                )?;
                require(ntot >= 0.0, &key("ntot"), "must be >= 0")?;
                out.push(ChannelConfig { k, ntot });
            }
            out
        }
        (Some(_), None) => unreachable!("checked"),
    };
    require(
        !channels.is_empty(),
        "channels",
        "at least one channel is required",
    )?;
    let ntot: f64 = channels.iter().map(|c| c.ntot).sum();
    require(ntot > 0.0, "sample.ntot", "total density must be > 0")?;
    if channels.len() == 1 {
        require(ntot > 0.0, "sample.ntot", "must be > 0")?;
    }

    let tau_max = r.f64_req("grid", "tau_max")?;
    require(tau_max > 0.0, "grid.tau_max", "must be > 0")?;
    let n_z = r.usize_opt("grid", "n_z")?.unwrap_or(DEFAULT_N_Z);
    require(n_z >= 2, "grid.n_z", "must be >= 2")?;
    let tr_rest = superradiance_time_rest(lambda, ntot, length, gamma_sp)
        .map_err(|e| constraint("sample", e.to_string()))?;
    let n_tau = match (
        r.usize_opt("grid", "n_tau")?,
        r.f64_opt("grid", "steps_per_tr")?,
    ) {
        (Some(_), Some(_)) => {
            return Err(constraint(
                "grid.steps_per_tr",
                "conflicts with grid.n_tau; give one or the other",
            ))
        }
        (Some(n), None) => n,
        (None, spt) => {
            let spt = spt.unwrap_or(DEFAULT_STEPS_PER_TR);
            require(spt > 0.0, "grid.steps_per_tr", "must be > 0")?;
            (tau_max / tr_rest * spt).ceil() as usize + 1
        }
    };
    require(n_tau >= 2, "grid.n_tau", "must be >= 2")?;
    // Time steps are frame-invariant in units of T_R, so the rest-frame
    // ratios decide the step-size rule.
    let dtau = tau_max / (n_tau - 1) as f64 / tr_rest;
    require(
        dtau <= 1.0 / 50.0 * (1.0 + 1e-12),
        "grid.n_tau",
        "time step must be <= T_R/50",
    )?;
    require(
        dtau * tr_rest / t2 <= 1.0 / 50.0 * (1.0 + 1e-12),
        "grid.n_tau",
        "time step must be <= T2/50",
    )?;

    let dv = fundamental_velocity_step(lambda, tau_max);
    let omega = 2.0 * core::f64::consts::PI * SPEED_OF_LIGHT / lambda;
    for (i, c) in channels.iter().enumerate() {
        let offset = c.k as f64 * dv;
        require(
            offset.abs() < MAX_OFFSET_FRACTION * SPEED_OF_LIGHT,
            &format!("channels[{i}].k"),
            "|k dv'| < 0.01 c",
        )?;
        let beat = omega / SPEED_OF_LIGHT * offset.abs() * tr_rest * dtau;
        require(
            beat <= 0.1 * (1.0 + 1e-12),
            &format!("channels[{i}].k"),
            "time step times channel detuning must be <= 0.1",
        )?;
    }

    let pumps = PumpsConfig {
        lambda_n: r.f64_opt("pumps", "lambda_n")?,
        lambda_p: r.f64_opt("pumps", "lambda_p")?,
    };
    if let Some(v) = pumps.lambda_n {
        require(v >= 0.0, "pumps.lambda_n", "must be >= 0")?;
    }
    if let Some(v) = pumps.lambda_p {
        require(v >= 0.0, "pumps.lambda_p", "must be >= 0")?;
    }

    let intensity = r.f64_opt("boundary", "intensity")?.unwrap_or(0.0);
    require(intensity >= 0.0, "boundary.intensity", "must be >= 0")?;

    let snapshot_times = match r.get("output", "snapshot_times") {
        None => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, v)| as_f64(v, &format!("output.snapshot_times[{i}]")))
            .collect::<Result<_, _>>()?,
        Some(_) => {
            return Err(constraint(
                "output.snapshot_times",
                "must be an array of numbers",
            ))
        }
    };
    let observer_tau_max = tau_max * FrameVelocity::new(beta).expect("checked").time_factor();
    for (i, t) in snapshot_times.iter().enumerate() {
        require(
            *t >= 0.0 && *t <= observer_tau_max * (1.0 + 1e-12),
            &format!("output.snapshot_times[{i}]"),
            "must lie in [0, observer-frame tau_max]",
        )?;
    }
    let plot = match r.str_opt("output", "plot")? {
        None => PlotStyle::Linear,
        Some(s) => PlotStyle::parse(s)
            .ok_or_else(|| constraint("output.plot", "must be \"linear\" or \"log\""))?,
    };
    let log_floor = r
        .f64_opt("output", "log_floor")?
        .unwrap_or(DEFAULT_LOG_FLOOR);
    require(log_floor > 0.0, "output.log_floor", "must be > 0")?;
    let record_stride = r.usize_opt("output", "record_stride")?.unwrap_or(1);
    require(record_stride >= 1, "output.record_stride", "must be >= 1")?;
    let threads = r.usize_opt("output", "threads")?.unwrap_or(1);
    require(threads >= 1, "output.threads", "must be >= 1")?;
    let stem = r
        .str_opt("output", "stem")?
        .map(str::to_string)
        .unwrap_or_else(|| name.clone());
    require(
        !stem.is_empty() && !stem.contains(['/', '\\']),
        "output.stem",
        "must be a non-empty file name without separators",
    )?;

    let config = ScenarioConfig {
        name,
        transition: TransitionConfig { lambda, gamma_sp },
        sample: SampleConfig { length },
        timescales: TimescalesConfig { t1, t2 },
        frame: FrameConfig { beta },
        grid: GridConfig {
            n_z,
            n_tau,
            tau_max,
        },
        channels,
        pumps,
        boundary: BoundaryConfig { intensity },
        output: OutputConfig {
            dir: r.str_opt("output", "dir")?.map(str::to_string),
            stem,
            snapshot_times,
            record_stride,
            plot,
            log_floor,
            threads,
        },
    };
    // Backstop: the solver performs its own checks on the exact grid.
    let setup = config
        .to_scenario()
        .resolve()
        .map_err(|e| constraint("scenario", e.to_string()))?;
    Solver::new(setup).map_err(|e| constraint("scenario", e.to_string()))?;
    Ok(config)
}
