//! Serialization of zeros, curves, strips, reports, and the run manifest.
//!
//! Numbers in the CSV are printed with 17 significant digits so that a
//! round-trip through text is lossless for f64.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::strips::StripRecord;
use crate::trace::{CurveKind, TracedCurve};
use crate::zeros::ZeroRecord;

/// 17 significant digits: lossless f64 round-trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn zeros_csv(zeros: &[ZeroRecord]) -> String {
    let mut out = String::from("t,sigma,residual,local_order,curve_id\n");
    for z in zeros {
        let id = z.owning_curve.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(z.t),
            fmt_f64(z.sigma),
            fmt_f64(z.residual),
            z.local_order,
            id
        ));
    }
    out
}

/// Parse the zeros CSV back into records (round-trip check and re-import).
pub fn zeros_from_csv(text: &str) -> Result<Vec<ZeroRecord>, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty csv")?;
    if header != "t,sigma,residual,local_order,curve_id" {
        return Err(format!("unexpected header: {header}"));
    }
    let mut out = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 5 {
            return Err(format!("bad row: {line}"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| format!("{e}: {s}"));
        out.push(ZeroRecord {
            t: num(parts[0])?,
            sigma: num(parts[1])?,
            residual: num(parts[2])?,
            local_order: parts[3].parse().map_err(|e| format!("{e}"))?,
            owning_curve: if parts[4].is_empty() {
                None
            } else {
                Some(parts[4].parse().map_err(|e| format!("{e}"))?)
            },
            method: crate::zeros::ZeroMethod::CurveBisection,
            anomalous: false,
        });
    }
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct CurveExport {
    pub id: u32,
    pub kind: String,
    pub strip: Option<usize>,
    pub samples: Vec<[f64; 4]>,
}

fn kind_label(kind: &CurveKind) -> String {
    match kind {
        CurveKind::PreimageBelowOne => "gamma".into(),
        CurveKind::PreimageAboveOne => "gamma_prime".into(),
        CurveKind::CirclePreimage { radius } => format!("circle_{}", fmt_f64(*radius)),
    }
}

pub fn curve_export(curve: &TracedCurve) -> CurveExport {
    CurveExport {
        id: curve.id,
        kind: kind_label(&curve.kind),
        strip: curve.strip_index,
        samples: curve
            .samples
            .iter()
            .map(|sm| [sm.s.re, sm.s.im, sm.z.re, sm.z.im])
            .collect(),
    }
}

pub fn curves_json(curves: &[TracedCurve]) -> String {
    let exports: Vec<CurveExport> = curves.iter().map(curve_export).collect();
    serde_json::to_string_pretty(&exports).expect("curve serialization cannot fail")
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StripsExport {
    /// m-type → count over complete strips: the census headline.
    pub histogram: BTreeMap<usize, usize>,
    pub total_zeros: usize,
    pub strips: Vec<StripRecord>,
}

pub fn strips_json(strips: &[StripRecord], total_zeros: usize) -> String {
    let doc = StripsExport {
        histogram: crate::strips::m_type_histogram(strips),
        total_zeros,
        strips: strips.to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("strip serialization cannot fail")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, detail: detail.into() }
    }
}

/// One PASS/FAIL line per check.
pub fn report_text(checks: &[CheckResult]) -> String {
    let mut out = String::new();
    for ck in checks {
        let verdict = if ck.pass { "PASS" } else { "FAIL" };
        out.push_str(&format!("{verdict} {}: {}\n", ck.name, ck.detail));
    }
    out
}

pub fn report_json(checks: &[CheckResult]) -> String {
    serde_json::to_string_pretty(checks).expect("report serialization cannot fail")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config: BTreeMap<String, String>,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub verdicts: Vec<CheckResult>,
    /// file name → sha256 of its contents
    pub file_digests: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(config: BTreeMap<String, String>) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            started_unix_ms: now_ms(),
            finished_unix_ms: 0,
            verdicts: Vec::new(),
            file_digests: BTreeMap::new(),
        }
    }

    pub fn record_file(&mut self, name: &str, contents: &[u8]) {
        self.file_digests.insert(name.to_string(), sha256_hex(contents));
    }

    pub fn finish(&mut self) -> String {
        self.finished_unix_ms = now_ms();
        serde_json::to_string_pretty(self).expect("manifest serialization cannot fail")
    }
}

fn now_ms() -> u128 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}
