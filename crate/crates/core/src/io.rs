// SPDX-License-Identifier: MIT OR Apache-2.0

//! CSV input and JSON/CSV output.

use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::DetectorConfig;
use crate::detector::{DetectionResult, Diagnostic};
use crate::error::{Error, Result};
use crate::series::SeriesData;
use crate::simgen::SimOutput;
use crate::wbs::PathEntry;

/// Column choice for CSV input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColumnSelector {
    /// Header name.
    Name(String),
    /// 0-based column index.
    Index(usize),
}

impl FromStr for ColumnSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::invalid("empty column selector"));
        }
        Ok(match s.parse::<usize>() {
            Ok(i) => Self::Index(i),
            Err(_) => Self::Name(s.to_string()),
        })
    }
}

fn parse_cell(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Reads one numeric column from CSV text.
///
/// A first row whose selected cell is not a number is taken as a header.
/// Without a selector the first numeric column of the first data row is used.
pub fn read_series<R: Read>(input: R, column: Option<&ColumnSelector>) -> Result<SeriesData> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut records = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        records.push((line, rec));
    }
    let Some((_, first)) = records.first() else {
        return Err(Error::invalid("input contains no data"));
    };

    let first_is_numeric = first.iter().any(|c| parse_cell(c).is_some());
    let (col, has_header) = match column {
        Some(ColumnSelector::Name(name)) => {
            let idx = first
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| Error::invalid(format!("no column named '{name}' in header")))?;
            (idx, true)
        }
        Some(ColumnSelector::Index(i)) => {
            let header = first.get(*i).is_some_and(|c| parse_cell(c).is_none());
            (*i, header)
        }
        None => {
            let header = !first_is_numeric;
            let probe = if header {
                records.get(1).map(|r| &r.1)
            } else {
                Some(first)
            };
            let idx = probe
                .and_then(|r| r.iter().position(|c| parse_cell(c).is_some()))
                .ok_or_else(|| Error::invalid("no numeric column found"))?;
            (idx, header)
        }
    };

    let values = records
        .iter()
        .skip(usize::from(has_header))
        .map(|(line, rec)| {
            let cell = rec.get(col).ok_or_else(|| Error::Parse {
                line: *line,
                message: format!("row has no column {col}"),
            })?;
            parse_cell(cell).ok_or_else(|| Error::Parse {
                line: *line,
                message: format!("'{cell}' is not a finite number"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SeriesData::new(values)
}

/// Selected model as written to JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectedReport {
    pub locations: Vec<usize>,
    pub p_hat: usize,
    pub alpha: Vec<f64>,
    pub levels: Vec<f64>,
    pub refined: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub flags: Vec<Diagnostic>,
}

/// Stable JSON layout of a detection run. Locations are 1-based indices of
/// the last observation before each change.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectReport {
    pub n: usize,
    pub config: DetectorConfig,
    /// Leading `Q` path entries.
    pub path: Vec<PathEntry>,
    pub models: Vec<Vec<usize>>,
    pub selected: SelectedReport,
    /// Final estimates: refined locations when refinement is on.
    pub changepoints: Vec<usize>,
    pub diagnostics: DiagnosticsReport,
}

impl From<&DetectionResult> for DetectReport {
    fn from(r: &DetectionResult) -> Self {
        let top = r.config.max_candidates.min(r.path.len());
        Self {
            n: r.n,
            config: r.config.clone(),
            path: r.path.entries[..top].to_vec(),
            models: r.sequence.models.clone(),
            selected: SelectedReport {
                locations: r.model.locations.clone(),
                p_hat: r.model.p_hat,
                alpha: r.model.alpha.clone(),
                levels: r.model.levels.clone(),
                refined: r.refined.clone().unwrap_or_default(),
            },
            changepoints: r.change_points().to_vec(),
            diagnostics: DiagnosticsReport {
                flags: r.diagnostics.clone(),
            },
        }
    }
}

pub fn write_detect_json<W: Write>(mut out: W, r: &DetectionResult) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, &DetectReport::from(r))?;
    writeln!(out)?;
    Ok(())
}

/// One row per selected change point: `location,refined`. The `refined`
/// cell is empty when refinement is off.
pub fn write_detect_csv<W: Write>(out: W, r: &DetectionResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["location", "refined"])?;
    for (i, loc) in r.model.locations.iter().enumerate() {
        let refined = r
            .refined
            .as_ref()
            .map(|v| v[i].to_string())
            .unwrap_or_default();
        w.write_record([loc.to_string(), refined])?;
    }
    w.flush()?;
    Ok(())
}

/// Simulation CSV: column `x`, plus `f` and `is_cp` when `with_truth`.
/// `is_cp` marks the last observation before each change.
pub fn write_simulation_csv<W: Write>(out: W, sim: &SimOutput, with_truth: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if with_truth {
        w.write_record(["x", "f", "is_cp"])?;
    } else {
        w.write_record(["x"])?;
    }
    let mut cps = sim.truth.iter().peekable();
    for (i, (x, f)) in sim.x.values().iter().zip(&sim.f).enumerate() {
        if with_truth {
            let is_cp = cps.next_if(|&&c| c == i + 1).is_some();
            w.write_record([x.to_string(), f.to_string(), u8::from(is_cp).to_string()])?;
        } else {
            w.write_record([x.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simgen::{simulate, SimModel, SimSpec};

    fn read(text: &str, col: Option<&str>) -> Result<Vec<f64>> {
        let sel = col.map(|c| c.parse().unwrap());
        read_series(text.as_bytes(), sel.as_ref()).map(|s| s.values().to_vec())
    }

    #[test]
    fn header_is_optional() {
        assert_eq!(read("1\n2\n3\n", None).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(read("x\n1\n2\n", None).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn column_by_name_and_index() {
        let text = "date,y,z\n2020,1.5,7\n2021,2.5,8\n";
        assert_eq!(read(text, Some("z")).unwrap(), vec![7.0, 8.0]);
        assert_eq!(read(text, Some("1")).unwrap(), vec![1.5, 2.5]);
        assert_eq!(read(text, None).unwrap(), vec![2020.0, 2021.0]);
        assert!(read(text, Some("w")).is_err());
    }

    #[test]
    fn first_numeric_column_skips_labels() {
        assert_eq!(read("name,v\na,1\nb,2\n", None).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn bad_row_reports_its_line() {
        match read("x\n1\n2\noops\n", None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            read("1\nnan\n", None),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn simulation_csv_marks_truth() {
        let sim = simulate(&SimSpec::new(SimModel::M3, 1)).unwrap();
        let mut buf = Vec::new();
        write_simulation_csv(&mut buf, &sim, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,f,is_cp");
        assert_eq!(lines.len(), 151);
        let marked: Vec<usize> = lines[1..]
            .iter()
            .enumerate()
            .filter(|(_, l)| l.ends_with(",1"))
            .map(|(i, _)| i + 1)
            .collect();
        assert_eq!(marked, vec![50, 100]);
        let back = read(&text, Some("x")).unwrap();
        assert_eq!(back, sim.x.values());
    }
}
