use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use cbc_core::metrics::BoundsReport;
use cbc_core::schemes::{SchemeConfig, SchemeKind};
use serde::Serialize;
use serde_json::Value;

/// 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Serialize)]
pub struct SchemeParams {
    pub label: String,
    pub kind: &'static str,
    pub beta: f64,
    pub epsilon: f64,
    pub c_teno: f64,
    pub q_teno: u32,
    pub ct: Option<f64>,
    pub d: [f64; 3],
    pub clip_slope: f64,
    pub z_power: u32,
}

impl From<&SchemeConfig> for SchemeParams {
    fn from(c: &SchemeConfig) -> Self {
        SchemeParams {
            label: c.label(),
            kind: match c.kind {
                SchemeKind::Upwind1 => "upwind",
                SchemeKind::ThincOriginal => "thinc",
                SchemeKind::ThincClipped => "thinc-clipped",
                SchemeKind::WenoJs5 => "weno-js",
                SchemeKind::WenoZ5 => "weno-z",
                SchemeKind::Teno5 => "teno",
            },
            beta: c.beta,
            epsilon: c.epsilon,
            c_teno: c.c_teno,
            q_teno: c.q_teno,
            ct: c.ct,
            d: c.d,
            clip_slope: c.clip_slope,
            z_power: c.z_power,
        }
    }
}

#[derive(Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub version: &'static str,
    pub scheme: SchemeParams,
    pub parameters: BTreeMap<&'static str, Value>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &'static str, scheme: &SchemeConfig) -> Self {
        RunManifest {
            command,
            version: env!("CARGO_PKG_VERSION"),
            scheme: scheme.into(),
            parameters: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &'static str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key, value.into());
        self
    }
}

/// Sibling of `path` with its extension replaced.
pub fn sibling(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

/// `run.csv` -> `run_<tag>.csv`
pub fn tagged(path: &Path, tag: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{tag}"),
    };
    path.with_file_name(name)
}

pub fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Writes each file, then the manifest listing them, next to `anchor`.
pub fn write_all(
    anchor: &Path,
    files: &[(PathBuf, String)],
    manifest: &mut RunManifest,
) -> io::Result<()> {
    for (path, body) in files {
        fs::write(path, body)?;
        manifest.outputs.push(file_name(path));
    }
    let mpath = sibling(anchor, "manifest.json");
    manifest.outputs.push(file_name(&mpath));
    let mut text = serde_json::to_string_pretty(manifest).map_err(io::Error::other)?;
    text.push('\n');
    fs::write(mpath, text)
}

/// Bounds report as `key=value` lines, without comment markers.
pub fn report_lines(r: &BoundsReport, tol: f64, x: impl Fn(usize) -> String) -> Vec<String> {
    let mut out = vec![
        format!("bounded={}", r.bounded),
        format!("lower_bound={}", num(r.lower_bound)),
        format!("upper_bound={}", num(r.upper_bound)),
        format!("tol={}", num(tol)),
        format!("max_overshoot={}", num(r.max_overshoot)),
        format!("max_undershoot={}", num(r.max_undershoot)),
        format!("violating_cells={}", r.violating_cells.len()),
    ];
    for c in &r.violating_cells {
        let phi = c.phi_c.map(num).unwrap_or_else(|| "none".into());
        out.push(format!(
            "violation cell={} {} excess={} phi_tilde_c={}",
            c.index,
            x(c.index),
            num(c.excess),
            phi
        ));
    }
    out
}

pub fn commented(lines: &[String]) -> String {
    lines.iter().map(|l| format!("# {l}\n")).collect()
}

pub fn nvd_plot(csv: &str, label: &str, c_max: f64) -> String {
    format!(
        "set datafile separator ','\n\
         set key top left\n\
         set xrange [0:1]\n\
         set yrange [0:1.2]\n\
         set xlabel 'normalised cell value'\n\
         set ylabel 'normalised face value'\n\
         plot '{csv}' using 1:2 skip 1 with lines lw 2 title '{label}', \\\n\
         \x20    x dt 2 title 'upwind', \\\n\
         \x20    1 dt 3 title 'unity', \\\n\
         \x20    x/{c_max} dt 4 title 'slope at c_max'\n"
    )
}

pub fn advect_plot(csv: &str, label: &str, cfl: f64) -> String {
    format!(
        "set datafile separator ','\n\
         set key top right\n\
         set xlabel 'x'\n\
         set ylabel 'phi'\n\
         set title '{label}, CFL={cfl}'\n\
         plot '{csv}' using 1:3 skip 1 with lines dt 2 title 'exact', \\\n\
         \x20    '{csv}' using 1:2 skip 1 with points pt 6 title '{label}'\n"
    )
}

pub fn zalesak_plot(csv: &str, label: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set size square\n\
         set xrange [0:1]\n\
         set yrange [0:1]\n\
         set title '{label}'\n\
         set palette defined (0 'white', 1 'black')\n\
         plot '{csv}' using 1:2:3 skip 1 with image notitle\n"
    )
}

pub fn oracle_plot(csv: &str, label: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set xlabel 'normalised cell value'\n\
         set ylabel 'CFL number'\n\
         set title '{label}: one-step excursion'\n\
         set logscale cb\n\
         plot '{csv}' using 2:1:(column(7) > column(8) ? column(7) : column(8)) skip 1 \\\n\
         \x20    with points pt 5 palette notitle\n"
    )
}
