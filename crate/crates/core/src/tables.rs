//! Result tables for external plotting, and the run manifest.
//!
//! Tables are comma separated with a header row, one record per
//! newline-terminated line. Reals are written in plain decimal with six
//! digits after the point. Formatting depends only on the result, so the
//! same result always produces byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use crate::config::to_config_text;
use crate::engine::{ExperimentResult, SchemeResult};
use crate::error::{Result, SimError};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const MANIFEST_FILE: &str = "manifest.txt";

pub const CDF_HEADER: &str = "scheme,users_per_sector,seed,is_edge,sinr_db,cdf";
pub const HISTOGRAM_HEADER: &str =
    "scheme,users_per_sector,seed,is_edge,bin_low_db,bin_high_db,count";
pub const SUMMARY_HEADER: &str = "scheme,users_per_sector,seed,drops,samples,eta_edge,eta_edge_per_user,eta_area,median_sinr_db,median_edge_sinr_db,blocked";

fn real(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        // avoid "-0.000000"
        let s = format!("{x:.6}");
        if s.trim_start_matches('-')
            .chars()
            .all(|c| c == '0' || c == '.')
        {
            s.trim_start_matches('-').to_string()
        } else {
            s
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub file: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunManifest {
    pub config_path: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub tool_version: String,
    pub timestamp: u64,
    pub config_echo: String,
    pub files: Vec<ManifestEntry>,
}

impl RunManifest {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "tool = racnsim {}", self.tool_version);
        let _ = writeln!(out, "timestamp = {}", self.timestamp);
        let _ = writeln!(
            out,
            "config_path = {}",
            self.config_path
                .as_ref()
                .map_or("-".into(), |p| p.display().to_string())
        );
        let _ = writeln!(out, "out_dir = {}", self.out_dir.display());
        out.push_str("[config]\n");
        out.push_str(&self.config_echo);
        out.push_str("[files]\n");
        for f in &self.files {
            let _ = writeln!(out, "{}  {}", f.sha256, f.file);
        }
        out
    }

    /// Reads the `[files]` section of a manifest.
    pub fn read_entries(path: &Path) -> Result<Vec<ManifestEntry>> {
        let text = fs::read_to_string(path)?;
        let mut in_files = false;
        let mut entries = Vec::new();
        for line in text.lines() {
            if line == "[files]" {
                in_files = true;
                continue;
            }
            if in_files {
                let (sha, file) = line.split_once("  ").ok_or_else(|| {
                    SimError::InvalidParameter(format!("bad manifest line '{line}'"))
                })?;
                entries.push(ManifestEntry {
                    file: file.to_string(),
                    sha256: sha.to_string(),
                });
            }
        }
        Ok(entries)
    }

    /// Files in `dir` whose checksum no longer matches the manifest.
    pub fn verify(dir: &Path) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for e in RunManifest::read_entries(&dir.join(MANIFEST_FILE))? {
            match fs::read(dir.join(&e.file)) {
                Ok(bytes) if sha256_hex(&bytes) == e.sha256 => {}
                _ => bad.push(e.file),
            }
        }
        Ok(bad)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn stem(e: &SchemeResult) -> String {
    format!("{}_u{}", e.scheme, e.users_per_sector)
}

pub fn cdf_table(e: &SchemeResult, seed: u64, edge: bool) -> Result<String> {
    let values = if edge {
        e.report.edge_sinr_db()
    } else {
        e.report.sinr_db()
    };
    let mut out = format!("{CDF_HEADER}\n");
    if values.is_empty() {
        return Ok(out);
    }
    for (v, f) in crate::metrics::cdf(&values)? {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            e.scheme,
            e.users_per_sector,
            seed,
            u8::from(edge),
            real(v),
            real(f)
        );
    }
    Ok(out)
}

pub fn histogram_table(e: &SchemeResult, seed: u64, bin_width_db: f64) -> Result<String> {
    let mut out = format!("{HISTOGRAM_HEADER}\n");
    for (lo, count) in e.report.edge_histogram(bin_width_db)? {
        let _ = writeln!(
            out,
            "{},{},{},1,{},{},{}",
            e.scheme,
            e.users_per_sector,
            seed,
            real(lo),
            real(lo + bin_width_db),
            count
        );
    }
    Ok(out)
}

pub fn summary_table(result: &ExperimentResult) -> String {
    let seed = result.config.master_seed;
    let mut out = format!("{SUMMARY_HEADER}\n");
    for e in &result.entries {
        let r = &e.report;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            e.scheme,
            e.users_per_sector,
            seed,
            r.per_drop.len(),
            r.samples.len(),
            real(r.edge_spectral_efficiency),
            real(r.edge_spectral_efficiency_per_user),
            real(r.area_spectral_efficiency),
            real(r.median_sinr_db().unwrap_or(f64::NAN)),
            real(r.median_edge_sinr_db().unwrap_or(f64::NAN)),
            r.blocked_count
        );
    }
    out
}

/// Writes three tables per (scheme, density), the summary and the manifest.
pub fn write_tables(
    result: &ExperimentResult,
    out_dir: &Path,
    config_path: Option<&Path>,
) -> Result<RunManifest> {
    if result.entries.is_empty() {
        return Err(SimError::InvalidParameter(
            "nothing to write: empty result".into(),
        ));
    }
    fs::create_dir_all(out_dir)?;
    let seed = result.config.master_seed;
    let mut files: Vec<(String, String)> = Vec::new();
    for e in &result.entries {
        let s = stem(e);
        files.push((format!("{s}_cdf_all.csv"), cdf_table(e, seed, false)?));
        files.push((format!("{s}_cdf_edge.csv"), cdf_table(e, seed, true)?));
        files.push((
            format!("{s}_hist_edge.csv"),
            histogram_table(e, seed, result.config.histogram_bin_db)?,
        ));
    }
    files.push((SUMMARY_FILE.to_string(), summary_table(result)));

    let mut entries = Vec::with_capacity(files.len());
    for (name, body) in files {
        fs::write(out_dir.join(&name), body.as_bytes())?;
        entries.push(ManifestEntry {
            file: name,
            sha256: sha256_hex(body.as_bytes()),
        });
    }
    let manifest = RunManifest {
        config_path: config_path.map(Path::to_path_buf),
        out_dir: out_dir.to_path_buf(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        config_echo: to_config_text(&result.config),
        files: entries,
    };
    fs::write(out_dir.join(MANIFEST_FILE), manifest.render())?;
    Ok(manifest)
}

/// One row of a summary table.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub scheme: String,
    pub users_per_sector: usize,
    pub seed: u64,
    pub drops: usize,
    pub samples: usize,
    pub eta_edge: f64,
    pub eta_edge_per_user: f64,
    pub eta_area: f64,
    pub median_sinr_db: f64,
    pub median_edge_sinr_db: f64,
    pub blocked: usize,
}

pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    if lines.next() != Some(SUMMARY_HEADER) {
        return Err(SimError::InvalidParameter(format!(
            "{} is not a summary table",
            path.display()
        )));
    }
    let bad = |line: &str| SimError::InvalidParameter(format!("bad summary row '{line}'"));
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 11 {
                return Err(bad(line));
            }
            let p = |i: usize| f[i].parse::<f64>().map_err(|_| bad(line));
            let u = |i: usize| f[i].parse::<u64>().map_err(|_| bad(line));
            Ok(SummaryRow {
                scheme: f[0].to_string(),
                users_per_sector: u(1)? as usize,
                seed: u(2)?,
                drops: u(3)? as usize,
                samples: u(4)? as usize,
                eta_edge: p(5)?,
                eta_edge_per_user: p(6)?,
                eta_area: p(7)?,
                median_sinr_db: p(8)?,
                median_edge_sinr_db: p(9)?,
                blocked: u(10)? as usize,
            })
        })
        .collect()
}
