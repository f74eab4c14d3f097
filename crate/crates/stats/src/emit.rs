//! Report emission: `stats.json` plus one plot-ready CSV per series and
//! histogram.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::StatsError;
use crate::report::StatsReport;

pub const STATS_FILE: &str = "stats.json";

fn write_text(path: &Path, text: &str) -> Result<(), StatsError> {
    let mut file = fs::File::create(path).map_err(|e| StatsError::Io { path: path.display().to_string(), source: e })?;
    file.write_all(text.as_bytes())
        .map_err(|e| StatsError::Io { path: path.display().to_string(), source: e })?;
    Ok(())
}

/// Writes the report and its per-series/per-histogram CSVs into `dir`,
/// returning every file written.
pub fn write_report(dir: &Path, report: &StatsReport) -> Result<Vec<PathBuf>, StatsError> {
    fs::create_dir_all(dir).map_err(|e| StatsError::Io { path: dir.display().to_string(), source: e })?;
    let mut written = Vec::new();

    let json_path = dir.join(STATS_FILE);
    write_text(&json_path, &report.to_json_string()?)?;
    written.push(json_path);

    for (name, points) in &report.series {
        let path = dir.join(format!("series_{name}.csv"));
        let mut text = String::from("key,value\n");
        for (key, value) in points {
            text.push_str(&format!("{key},{value}\n"));
        }
        write_text(&path, &text)?;
        written.push(path);
    }
    for (name, buckets) in &report.histograms {
        let path = dir.join(format!("hist_{name}.csv"));
        let mut text = String::from("bucket,count\n");
        for (bucket, count) in buckets {
            text.push_str(&format!("{bucket},{count}\n"));
        }
        write_text(&path, &text)?;
        written.push(path);
    }
    Ok(written)
}
