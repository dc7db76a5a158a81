//! CSV, JSON and SVG report output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{median, BenchError, Measurement, Scenario, CIRCUIT_KEY};

pub const CSV_HEADER: [&str; 6] = ["scenario", "parameter", "repetition", "wall_time_ms", "key", "value"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Svg,
}

impl FromStr for ReportFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "svg" => Ok(Self::Svg),
            _ => Err(BenchError::Usage(format!("unknown report format {s:?}"))),
        }
    }
}

/// One `time` row per measurement, then one row per aux key in key order. The
/// `time` row's value is the wall time in milliseconds with nanosecond digits.
pub fn to_csv(ms: &[Measurement]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for m in ms {
        let head = [m.scenario.to_string(), m.parameter.to_string(), m.repetition.to_string(), m.wall_time_ms.to_string()];
        let time = format!("{}.{:06}", m.wall_time_ns / 1_000_000, m.wall_time_ns % 1_000_000);
        w.write_record(head.iter().map(String::as_str).chain(["time", time.as_str()])).expect("in-memory write");
        for (k, v) in &m.aux {
            let v = v.to_string();
            w.write_record(head.iter().map(String::as_str).chain([k.as_str(), v.as_str()])).expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv of utf-8 input")
}

pub fn to_json(ms: &[Measurement]) -> String {
    let mut s = serde_json::to_string_pretty(ms).expect("measurements serialize");
    s.push('\n');
    s
}

/// Median per parameter of the plotted value, one series per circuit.
fn series(ms: &[Measurement], scenario: Scenario) -> BTreeMap<String, Vec<(u64, f64)>> {
    let mut groups: BTreeMap<String, BTreeMap<u64, Vec<u64>>> = BTreeMap::new();
    for m in ms.iter().filter(|m| m.scenario == scenario && !m.is_refusal()) {
        let name = m.aux.get(CIRCUIT_KEY).map_or_else(|| scenario.to_string(), |c| c.to_string());
        // cost charts plot gas per transaction (in thousandths), everything else time
        let value = if scenario == Scenario::Cost {
            m.aux.get("gas_per_tx").and_then(|v| v.to_string().parse::<f64>().ok()).map(|g| (g * 1000.0) as u64)
        } else {
            Some(m.wall_time_ns)
        };
        if let Some(v) = value {
            groups.entry(name).or_default().entry(m.parameter).or_default().push(v);
        }
    }
    let scale = if scenario == Scenario::Cost { 1e3 } else { 1e6 };
    groups
        .into_iter()
        .map(|(name, by_param)| {
            let pts = by_param.into_iter().map(|(p, v)| (p, median(v) as f64 / scale)).collect();
            (name, pts)
        })
        .collect()
}

/// A line chart of medians over the scenario's parameters, or `None` when the
/// scenario has no (non-refused) measurements.
pub fn to_svg(ms: &[Measurement], scenario: Scenario) -> Option<String> {
    let series = series(ms, scenario);
    if series.is_empty() {
        return None;
    }
    let (w, h, left, right, top, bottom) = (640.0, 400.0, 80.0, 20.0, 40.0, 50.0);
    let params: Vec<u64> = {
        let mut p: Vec<u64> = series.values().flatten().map(|(p, _)| *p).collect();
        p.sort_unstable();
        p.dedup();
        p
    };
    let y_max = series.values().flatten().map(|(_, v)| *v).fold(0.0, f64::max).max(1e-9) * 1.1;
    let x_of = |p: u64| {
        let i = params.iter().position(|q| *q == p).expect("collected above") as f64;
        let span = (params.len().max(2) - 1) as f64;
        left + (w - left - right) * if params.len() == 1 { 0.5 } else { i / span }
    };
    let y_of = |v: f64| top + (h - top - bottom) * (1.0 - v / y_max);
    let unit = if scenario == Scenario::Cost { "gas per tx" } else { "median wall time (ms)" };
    let x_label = match scenario {
        Scenario::Tau => "n",
        _ => "batch size m (0 = independent of m)",
    };

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{scenario}</text>"#, w / 2.0);
    let _ = writeln!(
        s,
        r#"<line x1="{left}" y1="{}" x2="{}" y2="{}" stroke="black"/><line x1="{left}" y1="{top}" x2="{left}" y2="{}" stroke="black"/>"#,
        h - bottom,
        w - right,
        h - bottom,
        h - bottom
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{x_label}</text>"#, w / 2.0, h - 12.0);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {})">{unit}</text>"#,
        h / 2.0,
        h / 2.0
    );
    for k in 0..=4 {
        let v = y_max * k as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="end">{v:.3}</text>"#, left - 6.0, y_of(v) + 3.0);
    }
    for p in &params {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{}" font-family="sans-serif" font-size="10" text-anchor="middle">{p}</text>"#, x_of(*p), h - bottom + 14.0);
    }
    const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts.iter().map(|(p, v)| format!("{:.1},{:.1}", x_of(*p), y_of(*v))).collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, path.join(" "));
        for (p, v) in pts {
            let _ = writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}"/>"#, x_of(*p), y_of(*v));
        }
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" fill="{color}">{name}</text>"#, left + 10.0, top + 14.0 * (i + 1) as f64);
    }
    s.push_str("</svg>\n");
    Some(s)
}

/// Writes `report.csv`, `report.json` and/or one `<scenario>.svg` per scenario into
/// `dir`. With `no_timing` both time fields are zeroed first, for golden files.
pub fn emit_report(
    ms: &[Measurement],
    formats: &[ReportFormat],
    dir: &Path,
    no_timing: bool,
) -> Result<Vec<PathBuf>, BenchError> {
    if ms.is_empty() {
        return Err(BenchError::Usage("no measurements to report".into()));
    }
    let owned: Vec<Measurement>;
    let ms = if no_timing {
        owned = ms.iter().cloned().map(Measurement::without_timing).collect();
        &owned[..]
    } else {
        ms
    };
    std::fs::create_dir_all(dir).map_err(|e| BenchError::Io(format!("{}: {e}", dir.display())))?;
    let write = |name: String, body: String| -> Result<PathBuf, BenchError> {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| BenchError::Io(format!("{}: {e}", path.display())))?;
        Ok(path)
    };
    let mut out = Vec::new();
    for f in formats {
        match f {
            ReportFormat::Csv => out.push(write("report.csv".into(), to_csv(ms))?),
            ReportFormat::Json => out.push(write("report.json".into(), to_json(ms))?),
            ReportFormat::Svg => {
                for sc in Scenario::ALL {
                    if let Some(svg) = to_svg(ms, sc) {
                        out.push(write(format!("{sc}.svg"), svg)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    fn sample() -> Vec<Measurement> {
        vec![
            Measurement::new(Scenario::Compile, 4, 0, Duration::from_micros(1500)).with(CIRCUIT_KEY, "batch").with("constraints", 10u64),
            Measurement::new(Scenario::Compile, 8, 0, Duration::from_micros(2500)).with(CIRCUIT_KEY, "batch").with("constraints", 20u64),
            Measurement::new(Scenario::Verify, 4, 0, Duration::from_nanos(2_183_921)),
        ]
    }

    #[test]
    fn csv_rows_and_time_column() {
        let csv = to_csv(&sample());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "scenario,parameter,repetition,wall_time_ms,key,value");
        // 3 records, aux counts 2, 2, 0
        assert_eq!(lines.len(), 1 + 3 + 2 + 2);
        assert_eq!(lines[1], "compile,4,0,1,time,1.500000");
        assert_eq!(lines[2], "compile,4,0,1,circuit,batch");
        assert_eq!(lines[7], "verify,4,0,2,time,2.183921");
    }

    #[test]
    fn json_roundtrip_and_svg() {
        let ms = sample();
        let back: Vec<Measurement> = serde_json::from_str(&to_json(&ms)).unwrap();
        assert_eq!(back, ms);
        assert!(to_svg(&ms, Scenario::Compile).unwrap().contains("<polyline"));
        assert!(to_svg(&ms, Scenario::Tau).is_none());
    }

    #[test]
    fn emit_rejects_empty_and_zeroes_timing() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(emit_report(&[], &[ReportFormat::Csv], dir.path(), false), Err(BenchError::Usage(_))));
        let paths = emit_report(&sample(), &[ReportFormat::Csv, ReportFormat::Svg], dir.path(), true).unwrap();
        assert_eq!(paths.len(), 3);
        let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
        assert!(csv.contains("compile,4,0,0,time,0.000000"));
        let bad = dir.path().join("report.csv").join("x");
        assert!(matches!(emit_report(&sample(), &[ReportFormat::Json], &bad, false), Err(BenchError::Io(_))));
    }
}
