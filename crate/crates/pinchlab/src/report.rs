//! Report assembly and serialization: a run produces one [`RunReport`],
//! emitted as JSON (schema below, stable field names) or as per-point CSV
//! rows with 17-significant-digit, locale-independent numbers.
//!
//! Determinism contract: with the same seed and configuration the entire
//! report is byte-identical except for `timestamp` and `runtime_seconds`,
//! which [`strip_volatile`] removes before comparisons.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{PinchError, Result};
use crate::harness::{CertificateSummary, PointVerdict, PropEllReport, Tolerances};

/// Output format for report files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = PinchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(PinchError::BadParameter(format!(
                "unknown format {other:?}; expected json or csv"
            ))),
        }
    }
}

/// Complete outcome of one certification run.
///
/// Field order is the serialization order; `timestamp` stays last so the
/// one volatile-by-design field is visually separated from the certified
/// content.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool_version: String,
    pub example: String,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub samples: usize,
    pub tolerances: Tolerances,
    pub certificates: Vec<CertificateSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prop_ell: Option<PropEllReport>,
    pub points: Vec<PointVerdict>,
    pub overall_pass: bool,
    /// What kind of claim the run makes (hypotheses and pointwise
    /// structure only, never topological conclusions).
    pub note: String,
    pub runtime_seconds: f64,
    /// Unix seconds at report creation; excluded from the determinism
    /// contract.
    pub timestamp: u64,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| PinchError::ReportIo(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// Per-point CSV: one row per sampled point, optional column groups
    /// included only when the run produced them.
    pub fn to_csv(&self) -> String {
        let has_theta = self.points.iter().any(|p| !p.theta_margins.is_empty());
        let theta_ps: Vec<usize> = self
            .points
            .first()
            .map(|p| p.theta_margins.iter().map(|tm| tm.p).collect())
            .unwrap_or_default();
        let has_iso = self.points.iter().any(|p| p.iso_min.is_some());
        let has_spectra = self.points.iter().any(|p| p.mu_sd.is_some());
        let has_equality = self.points.iter().any(|p| p.equality_residual.is_some());

        let mut header = vec![
            "id".to_string(),
            "k_min".to_string(),
            "h".to_string(),
            "c".to_string(),
            "bound".to_string(),
            "star_margin".to_string(),
            "search_gap".to_string(),
        ];
        if has_theta {
            for p in &theta_ps {
                header.push(format!("theta_margin_p{p}"));
            }
        }
        if has_iso {
            header.push("iso_min".to_string());
        }
        if has_spectra {
            for k in 1..=3 {
                header.push(format!("mu_sd_{k}"));
            }
            for k in 1..=3 {
                header.push(format!("mu_asd_{k}"));
            }
            header.push("min_eig".to_string());
        }
        if has_equality {
            header.push("equality_residual".to_string());
        }
        header.push("pass".to_string());

        let mut out = header.join(",");
        out.push('\n');
        for p in &self.points {
            let mut row = vec![
                p.id.to_string(),
                format_float(p.k_min),
                format_float(p.h),
                format_float(p.c),
                format_float(p.bound),
                format_float(p.star_margin),
                format_float(p.search_gap),
            ];
            if has_theta {
                for want in &theta_ps {
                    let v = p.theta_margins.iter().find(|tm| tm.p == *want);
                    row.push(v.map_or(String::new(), |tm| format_float(tm.margin)));
                }
            }
            if has_iso {
                row.push(p.iso_min.map_or(String::new(), format_float));
            }
            if has_spectra {
                for k in 0..3 {
                    row.push(p.mu_sd.map_or(String::new(), |m| format_float(m[k])));
                }
                for k in 0..3 {
                    row.push(p.mu_asd.map_or(String::new(), |m| format_float(m[k])));
                }
                row.push(match (p.mu_sd, p.mu_asd) {
                    (Some(sd), Some(asd)) => format_float(sd[0].min(asd[0])),
                    _ => String::new(),
                });
            }
            if has_equality {
                row.push(p.equality_residual.map_or(String::new(), format_float));
            }
            row.push(if p.pass.values().all(|v| *v) { "1" } else { "0" }.to_string());
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn render(&self, format: ReportFormat) -> Result<String> {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Csv => Ok(self.to_csv()),
        }
    }

    pub fn write(&self, path: &Path, format: ReportFormat) -> Result<()> {
        let content = self.render(format)?;
        std::fs::write(path, content)
            .map_err(|e| PinchError::ReportIo(format!("{}: {e}", path.display())))
    }
}

/// 17 significant digits, `.` decimal separator, no locale dependence.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Drop the fields excluded from the byte-determinism contract
/// (`timestamp` and `runtime_seconds`) from a JSON report, returning a
/// canonical string for comparison.
pub fn strip_volatile(json: &str) -> Result<String> {
    let mut value: serde_json::Value =
        serde_json::from_str(json).map_err(|e| PinchError::ReportIo(e.to_string()))?;
    if let Some(obj) = value.as_object_mut() {
        obj.remove("timestamp");
        obj.remove("runtime_seconds");
    }
    serde_json::to_string(&value).map_err(|e| PinchError::ReportIo(e.to_string()))
}

/// Unix seconds right now, for the report's volatile timestamp field.
pub fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::ThetaMargin;

    fn sample_report() -> RunReport {
        let mut pass = BTreeMap::new();
        pass.insert("star".to_string(), true);
        RunReport {
            tool_version: "0.0.0-test".to_string(),
            example: "sphere".to_string(),
            params: BTreeMap::from([("n".to_string(), "4".to_string())]),
            seed: 7,
            samples: 1,
            tolerances: Tolerances::for_charts(),
            certificates: vec![CertificateSummary {
                name: "star".to_string(),
                worst_margin: 2.0 / 3.0,
                worst_point: 0,
                pass: true,
            }],
            prop_ell: None,
            points: vec![PointVerdict {
                id: 0,
                coords: vec![0.5; 4],
                k_min: 1.0,
                h: 1.0,
                c: 0.0,
                bound: 1.0 / 3.0,
                star_margin: 2.0 / 3.0,
                search_gap: 1e-12,
                theta_margins: vec![ThetaMargin { p: 2, margin: 4.0 }],
                iso_min: Some(4.0),
                mu_sd: Some([4.0, 4.0, 4.0]),
                mu_asd: Some([4.0, 4.0, 4.0]),
                equality_residual: None,
                pass,
            }],
            overall_pass: true,
            note: "hypothesis-level certificate".to_string(),
            runtime_seconds: 0.25,
            timestamp: 1_755_000_000,
        }
    }

    #[test]
    fn json_fields_appear_in_schema_order_with_timestamp_last() {
        let json = sample_report().to_json().unwrap();
        let order = [
            "\"tool_version\"",
            "\"example\"",
            "\"params\"",
            "\"seed\"",
            "\"samples\"",
            "\"tolerances\"",
            "\"certificates\"",
            "\"points\"",
            "\"overall_pass\"",
            "\"runtime_seconds\"",
            "\"timestamp\"",
        ];
        let mut last = 0;
        for key in order {
            let pos = json.find(key).unwrap_or_else(|| panic!("missing {key}"));
            assert!(pos > last, "{key} out of order");
            last = pos;
        }
    }

    #[test]
    fn csv_rows_use_seventeen_significant_digits() {
        assert_eq!(format_float(1.0 / 3.0), "3.3333333333333331e-1");
        assert_eq!(format_float(-0.125), "-1.2500000000000000e-1");
        let csv = sample_report().to_csv();
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("id,k_min,h,c,bound,star_margin,search_gap"));
        assert!(header.contains("theta_margin_p2"));
        assert!(header.contains("mu_sd_1") && header.contains("mu_asd_3"));
        assert!(header.contains("min_eig"));
        assert!(!header.contains("equality_residual"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("0,1.0000000000000000e0,"));
        assert!(row.ends_with(",1"));
    }

    #[test]
    fn volatile_fields_are_stripped_for_comparisons() {
        let report = sample_report();
        let mut other = report.clone();
        other.runtime_seconds = 99.0;
        other.timestamp = 1;
        assert_ne!(report.to_json().unwrap(), other.to_json().unwrap());
        assert_eq!(
            strip_volatile(&report.to_json().unwrap()).unwrap(),
            strip_volatile(&other.to_json().unwrap()).unwrap()
        );
        assert!(!strip_volatile(&report.to_json().unwrap()).unwrap().contains("timestamp"));
    }

    #[test]
    fn format_parsing() {
        assert_eq!("json".parse::<ReportFormat>().unwrap(), ReportFormat::Json);
        assert_eq!("csv".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
        assert!("yaml".parse::<ReportFormat>().is_err());
    }
}
