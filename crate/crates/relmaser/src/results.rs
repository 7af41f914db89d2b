//! Result files: endfire CSV, channel and snapshot CSVs, JSON metadata.
//!
//! Floating-point values are written as `{:.16e}` (17 significant digits),
//! which reads back to the identical `f64`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use relmaser_core::solver::{DerivedParameters, EndfireSample, SimulationResult};
use relmaser_core::Complex64;
use serde::Serialize;
use serde_json::value::RawValue;

use crate::config::ScenarioConfig;
use crate::error::AppError;

/// Version of the CSV column contract and the metadata layout.
pub const SCHEMA_VERSION: u32 = 1;

pub const ENDFIRE_HEADER: &str = "tau_s,intensity_W_m2,E_re_V_m,E_im_V_m,intensity_norm";
pub const CHANNEL_HEADER: &str = "channel,tau_s,mean_inversion_m3,max_polarization_C_m2";

/// Paths of every file written for one run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OutputPaths {
    pub endfire: PathBuf,
    pub metadata: PathBuf,
    pub channels: PathBuf,
    pub snapshots: Vec<PathBuf>,
    pub plot: Option<PathBuf>,
}

impl OutputPaths {
    pub fn new(dir: &Path, stem: &str) -> Self {
        OutputPaths {
            endfire: dir.join(format!("{stem}.csv")),
            metadata: dir.join(format!("{stem}.json")),
            channels: dir.join(format!("{stem}_channels.csv")),
            snapshots: Vec::new(),
            plot: None,
        }
    }

    pub fn all(&self) -> Vec<&Path> {
        let mut v = vec![
            self.endfire.as_path(),
            self.metadata.as_path(),
            self.channels.as_path(),
        ];
        v.extend(self.snapshots.iter().map(PathBuf::as_path));
        v.extend(self.plot.as_deref());
        v
    }
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> Result<BufWriter<File>, AppError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| AppError::io(parent, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| AppError::io(path, e))
}

/// Writes the endfire series with a normalized-intensity column.
pub fn write_endfire_csv(series: &[EndfireSample], path: &Path) -> Result<(), AppError> {
    let peak = series.iter().map(|s| s.intensity).fold(0.0, f64::max);
    let io = |e| AppError::io(path, e);
    let mut w = create(path)?;
    writeln!(w, "{ENDFIRE_HEADER}").map_err(io)?;
    for s in series {
        let norm = if peak > 0.0 { s.intensity / peak } else { 0.0 };
        writeln!(
            w,
            "{},{},{},{},{}",
            sci(s.tau),
            sci(s.intensity),
            sci(s.field.re),
            sci(s.field.im),
            sci(norm)
        )
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Reads an endfire CSV written by [`write_endfire_csv`].
pub fn read_endfire_csv(path: &Path) -> Result<Vec<EndfireSample>, AppError> {
    let file = File::open(path).map_err(|e| AppError::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let bad =
        |line: usize, what: &str| AppError::Format(format!("{}:{line}: {what}", path.display()));
    match lines.next() {
        Some(Ok(h)) if h == ENDFIRE_HEADER => {}
        Some(Err(e)) => return Err(AppError::io(path, e)),
        _ => return Err(bad(1, "missing or unexpected header")),
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| AppError::io(path, e))?;
        let values: Vec<f64> = line
            .split(',')
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| bad(i + 2, "unparsable number"))?;
        if values.len() != 5 {
            return Err(bad(i + 2, "expected 5 columns"));
        }
        out.push(EndfireSample {
            tau: values[0],
            intensity: values[1],
            field: Complex64::new(values[2], values[3]),
        });
    }
    Ok(out)
}

fn write_channels_csv(result: &SimulationResult, path: &Path) -> Result<(), AppError> {
    let io = |e| AppError::io(path, e);
    let mut w = create(path)?;
    writeln!(w, "{CHANNEL_HEADER}").map_err(io)?;
    for (c, series) in result.channel_summaries.iter().enumerate() {
        for s in series {
            writeln!(
                w,
                "{c},{},{},{}",
                sci(s.tau),
                sci(s.mean_inversion),
                sci(s.max_polarization)
            )
            .map_err(io)?;
        }
    }
    w.flush().map_err(io)
}

fn write_snapshot_csv(
    result: &SimulationResult,
    index: usize,
    path: &Path,
) -> Result<(), AppError> {
    let snap = &result.snapshots[index];
    let io = |e| AppError::io(path, e);
    let mut w = create(path)?;
    write!(w, "# tau_s = {}\nz_m,field_abs_V_m", sci(snap.tau)).map_err(io)?;
    for c in 0..snap.inversion.len() {
        write!(w, ",inversion_{c}_m3,polarization_abs_{c}_C_m2").map_err(io)?;
    }
    writeln!(w).map_err(io)?;
    for j in 0..snap.z.len() {
        write!(w, "{},{}", sci(snap.z[j]), sci(snap.field_abs[j])).map_err(io)?;
        for c in 0..snap.inversion.len() {
            write!(
                w,
                ",{},{}",
                sci(snap.inversion[c][j]),
                sci(snap.polarization_abs[c][j])
            )
            .map_err(io)?;
        }
        writeln!(w).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// A number written in 17-significant-digit scientific notation; non-finite
/// values become `null`.
#[derive(Debug, Clone, Copy)]
struct Sci(f64);

impl Serialize for Sci {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            RawValue::from_string(sci(self.0))
                .map_err(serde::ser::Error::custom)?
                .serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

#[derive(Serialize)]
struct Quantity {
    value: Sci,
    unit: &'static str,
}

fn q(value: f64, unit: &'static str) -> Quantity {
    Quantity {
        value: Sci(value),
        unit,
    }
}

fn derived_entries(d: &DerivedParameters) -> Vec<(&'static str, Quantity)> {
    vec![
        ("beta", q(d.beta, "1")),
        ("gamma", q(d.gamma, "1")),
        ("omega_rest", q(d.omega_rest, "rad/s")),
        ("omega_observer", q(d.omega_observer, "rad/s")),
        ("dipole", q(d.dipole, "C m")),
        ("length_rest", q(d.length_rest, "m")),
        ("length_observer", q(d.length_observer, "m")),
        (
            "inversion_density_rest",
            q(d.inversion_density_rest, "1/m^3"),
        ),
        ("particle_count", q(d.particle_count, "1")),
        ("tipping_angle", q(d.tipping_angle, "rad")),
        ("tr_rest", q(d.tr_rest, "s")),
        ("tr_observer", q(d.tr_observer, "s")),
        ("t1_observer", q(d.t1_observer, "s")),
        ("t2_observer", q(d.t2_observer, "s")),
        ("alpha_rest", q(d.alpha_rest, "1/m")),
        ("alpha_observer", q(d.alpha_observer, "1/m")),
        (
            "saturation_intensity_rest",
            q(d.saturation_intensity_rest, "W/m^2"),
        ),
        (
            "saturation_intensity_observer",
            q(d.saturation_intensity_observer, "W/m^2"),
        ),
        ("dtau", q(d.dtau, "s")),
        ("dz", q(d.dz, "m")),
        ("coupling", q(d.coupling, "1")),
    ]
}

struct Derived<'a>(&'a DerivedParameters);

impl Serialize for Derived<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let entries = derived_entries(self.0);
        let mut map = s.serialize_map(Some(entries.len()))?;
        for (k, v) in &entries {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct Peak {
    tau: Quantity,
    intensity: Quantity,
}

#[derive(Serialize)]
struct ChannelMeta {
    k: i64,
    ntot: Quantity,
    dv_rest: Quantity,
}

#[derive(Serialize)]
struct Files {
    endfire: String,
    channels: String,
    snapshots: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    plot: Option<String>,
}

#[derive(Serialize)]
struct Metadata<'a> {
    schema_version: u32,
    name: &'a str,
    endfire_columns: Vec<&'static str>,
    samples: usize,
    derived: Derived<'a>,
    superradiant: bool,
    dv_step: Quantity,
    channels: Vec<ChannelMeta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    peak: Option<Peak>,
    svea_ratio: Sci,
    svea_warning: bool,
    files: Files,
    config: &'a ScenarioConfig,
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Renders the JSON metadata document.
pub fn metadata_json(
    result: &SimulationResult,
    config: &ScenarioConfig,
    paths: &OutputPaths,
) -> Result<String, AppError> {
    let dv = config.dv_step();
    let meta = Metadata {
        schema_version: SCHEMA_VERSION,
        name: &config.name,
        endfire_columns: ENDFIRE_HEADER.split(',').collect(),
        samples: result.endfire.len(),
        derived: Derived(&result.metadata),
        superradiant: result.metadata.superradiant,
        dv_step: q(dv, "m/s"),
        channels: config
            .channels
            .iter()
            .map(|c| ChannelMeta {
                k: c.k,
                ntot: q(c.ntot, "1/m^3"),
                dv_rest: q(c.k as f64 * dv, "m/s"),
            })
            .collect(),
        peak: result.peak().map(|(_, s)| Peak {
            tau: q(s.tau, "s"),
            intensity: q(s.intensity, "W/m^2"),
        }),
        svea_ratio: Sci(result.svea_ratio),
        svea_warning: result.svea_warning(),
        files: Files {
            endfire: file_name(&paths.endfire),
            channels: file_name(&paths.channels),
            snapshots: paths.snapshots.iter().map(|p| file_name(p)).collect(),
            plot: paths.plot.as_deref().map(file_name),
        },
        config,
    };
    let mut text =
        serde_json::to_string_pretty(&meta).map_err(|e| AppError::Format(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// Writes every CSV and the metadata sidecar into `dir`, returning the paths.
/// The plot path, if any, is recorded in the metadata but not written here.
pub fn write_results(
    result: &SimulationResult,
    config: &ScenarioConfig,
    dir: &Path,
    plot: Option<PathBuf>,
) -> Result<OutputPaths, AppError> {
    let stem = &config.output.stem;
    let mut paths = OutputPaths::new(dir, stem);
    paths.plot = plot;
    write_endfire_csv(&result.endfire, &paths.endfire)?;
    write_channels_csv(result, &paths.channels)?;
    for i in 0..result.snapshots.len() {
        let p = dir.join(format!("{stem}_snapshot_{i}.csv"));
        write_snapshot_csv(result, i, &p)?;
        paths.snapshots.push(p);
    }
    let text = metadata_json(result, config, &paths)?;
    let mut w = create(&paths.metadata)?;
    w.write_all(text.as_bytes())
        .map_err(|e| AppError::io(&paths.metadata, e))?;
    w.flush().map_err(|e| AppError::io(&paths.metadata, e))?;
    Ok(paths)
}
