//! Run artifacts:
//!
//! - `samples.csv`: `scheme,trial,sum_rate_bps_hz,selected_user,flag`, one
//!   row per (trial, scheme); `selected_user` is 0-based and empty when not
//!   applicable.
//! - `cdf_<SCHEME>.dat`: `rate_bps_hz cdf` per line after a `#` header.
//! - `summary.json`: percentiles per scheme plus the full [`RunSpec`].

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::runspec::RunSpec;
use super::stats::{CdfSummary, Percentiles, PERCENTILE_CONVENTION};
use crate::error::{Error, Result};
use crate::schemes::{RateSample, SampleFlag, SchemeId};

pub const SAMPLES_FILE: &str = "samples.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const SAMPLES_HEADER: [&str; 5] = [
    "scheme",
    "trial",
    "sum_rate_bps_hz",
    "selected_user",
    "flag",
];

pub fn cdf_file_name(scheme: SchemeId) -> String {
    format!("cdf_{scheme}.dat")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeSummary {
    pub scheme: SchemeId,
    pub n_samples: usize,
    pub n_uncertified: usize,
    pub mean: f64,
    pub percentiles: Percentiles,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub percentile_convention: String,
    pub schemes: Vec<SchemeSummary>,
    pub run_spec: RunSpec,
}

impl RunSummary {
    pub fn scheme(&self, id: SchemeId) -> Option<&SchemeSummary> {
        self.schemes.iter().find(|s| s.scheme == id)
    }
}

/// Paths of the files written by [`emit_outputs`].
#[derive(Debug, Clone)]
pub struct OutputPaths {
    pub samples: PathBuf,
    pub summary: PathBuf,
    pub cdfs: Vec<PathBuf>,
}

pub fn build_summary(
    samples: &[RateSample],
    summaries: &[CdfSummary],
    spec: &RunSpec,
) -> RunSummary {
    RunSummary {
        percentile_convention: PERCENTILE_CONVENTION.to_string(),
        schemes: summaries
            .iter()
            .map(|s| SchemeSummary {
                scheme: s.scheme,
                n_samples: s.sorted_samples.len(),
                n_uncertified: samples
                    .iter()
                    .filter(|r| r.scheme == s.scheme && r.flag == SampleFlag::Uncertified)
                    .count(),
                mean: s.mean(),
                percentiles: s.percentiles,
            })
            .collect(),
        run_spec: spec.clone(),
    }
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

pub fn write_samples_csv(path: &Path, samples: &[RateSample]) -> Result<()> {
    let csv_err = |e| Error::Csv {
        path: path.to_path_buf(),
        source: e,
    };
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(SAMPLES_HEADER).map_err(csv_err)?;
    for s in samples {
        let user = s.selected_user.map(|u| u.to_string()).unwrap_or_default();
        w.write_record([
            s.scheme.as_str(),
            &s.trial.to_string(),
            &s.sum_rate_bps_hz.to_string(),
            &user,
            s.flag.as_str(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_samples_csv(path: &Path) -> Result<Vec<RateSample>> {
    let csv_err = |e| Error::Csv {
        path: path.to_path_buf(),
        source: e,
    };
    let bad =
        |line: usize, what: &str| Error::invalid(format!("{}:{line}: {what}", path.display()));
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.iter().ne(SAMPLES_HEADER.iter().copied()) {
        return Err(bad(1, "unexpected header"));
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let line = i + 2;
        let field = |j: usize| rec.get(j).ok_or_else(|| bad(line, "missing column"));
        out.push(RateSample {
            scheme: field(0)?.parse()?,
            trial: field(1)?
                .parse()
                .map_err(|_| bad(line, "bad trial index"))?,
            sum_rate_bps_hz: field(2)?.parse().map_err(|_| bad(line, "bad rate"))?,
            selected_user: match field(3)? {
                "" => None,
                u => Some(u.parse().map_err(|_| bad(line, "bad selected_user"))?),
            },
            flag: field(4)?.parse()?,
        });
    }
    Ok(out)
}

pub fn write_cdf(path: &Path, summary: &CdfSummary) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "# rate_bps_hz cdf").map_err(io)?;
    for (x, p) in summary.cdf_points() {
        writeln!(w, "{x} {p}").map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Reads a CDF file back as `(rate, cdf)` pairs.
pub fn read_cdf(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            let mut it = l.split_whitespace().map(str::parse::<f64>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(x)), Some(Ok(p)), None) => Ok((x, p)),
                _ => Err(Error::invalid(format!(
                    "{}:{}: malformed CDF line",
                    path.display(),
                    i + 1
                ))),
            }
        })
        .collect()
}

pub fn load_summary(path: &Path) -> Result<RunSummary> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Json {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Writes all run artifacts into `spec.output_dir`, creating it if needed.
pub fn emit_outputs(
    samples: &[RateSample],
    summaries: &[CdfSummary],
    spec: &RunSpec,
) -> Result<OutputPaths> {
    let dir = &spec.output_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let samples_path = dir.join(SAMPLES_FILE);
    write_samples_csv(&samples_path, samples)?;

    let mut cdfs = Vec::with_capacity(summaries.len());
    for s in summaries {
        let path = dir.join(cdf_file_name(s.scheme));
        write_cdf(&path, s)?;
        cdfs.push(path);
    }

    let summary_path = dir.join(SUMMARY_FILE);
    let summary = build_summary(samples, summaries, spec);
    let text = serde_json::to_string_pretty(&summary).map_err(|e| Error::Json {
        path: summary_path.clone(),
        source: e,
    })?;
    fs::write(&summary_path, text + "\n").map_err(|e| Error::io(&summary_path, e))?;

    Ok(OutputPaths {
        samples: samples_path,
        summary: summary_path,
        cdfs,
    })
}
