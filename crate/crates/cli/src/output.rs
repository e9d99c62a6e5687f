//! Report, summary, corpus and plot-data files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use cir_core::tiem::TiemId;
use cir_stats::{classify_significance, RegressionModel, Significance};
use serde_json::Value;

use crate::error::Result;
use crate::pipeline::{CorpusData, RunOutcome};
use crate::scenario::{Nature, ScenarioReport};

pub const SIGNIFICANT_DIGITS: usize = 12;

pub const PLOT_FILES: [&str; 5] =
    ["significance_counts.csv", "nature_by_tiem.csv", "outliers_by_tiem.csv", "cc_by_tiem.csv", "r2_by_topology.csv"];

pub fn round_sig(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v).parse().unwrap_or(v)
}

/// Number text for CSV cells; empty for missing values.
pub fn num(v: Option<f64>) -> String {
    match v {
        None => String::new(),
        Some(v) if v.is_nan() => "NaN".into(),
        Some(v) if v.is_infinite() => if v > 0.0 { "inf" } else { "-inf" }.into(),
        Some(v) => {
            let r = round_sig(v);
            if r != 0.0 && !(1e-4..1e15).contains(&r.abs()) {
                format!("{r:e}")
            } else {
                r.to_string()
            }
        }
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round_sig(x))) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

pub fn report_json(report: &ScenarioReport) -> Result<String> {
    let mut v = serde_json::to_value(report)?;
    round_value(&mut v);
    let mut text = serde_json::to_string_pretty(&v)?;
    text.push('\n');
    Ok(text)
}

pub fn corpus_file_name(corpus: &CorpusData) -> String {
    format!("corpus_{}_{}.csv", corpus.topology.label(), corpus.ca_type.key())
}

pub fn write_corpus_csv<W: Write>(corpus: &CorpusData, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["ca_id", "generator", "tid", "cdal", "cxls", "calm", "nat_mbps"]).map_err(csv_err)?;
    for r in &corpus.rows {
        let t = r.ties;
        w.write_record([
            r.ca_id.to_string(),
            r.generator.name().to_string(),
            num(Some(t.tid)),
            num(Some(t.cdal)),
            num(Some(t.cxls)),
            num(Some(t.calm)),
            num(Some(r.nat_mbps)),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> crate::CirError {
    crate::CirError::Io(std::io::Error::other(e))
}

struct Table {
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self { rows: vec![header.iter().map(|s| s.to_string()).collect()] }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn save(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn model_cells(m: Option<&RegressionModel>) -> Vec<String> {
    vec![
        m.map_or(String::new(), |m| m.degree.to_string()),
        num(m.map(|m| m.adj_r_squared)),
        num(m.map(|m| m.r_squared)),
        num(m.map(|m| m.model_p_value)),
        m.map_or(String::new(), |m| m.outlier_count.to_string()),
    ]
}

fn summary_table(outcome: &RunOutcome) -> Table {
    let mut t = Table::new(&[
        "ts_id",
        "topology",
        "ca_type",
        "metric",
        "direction",
        "status",
        "corpus_size",
        "label",
        "nature",
        "brm_degree",
        "brm_adj_r2",
        "brm_r2",
        "brm_model_p",
        "brm_outliers",
        "arm_degree",
        "arm_adj_r2",
        "arm_r2",
        "arm_model_p",
        "arm_outliers",
        "survivors",
        "cc",
    ]);
    for (spec, r) in &outcome.results {
        let mut row = vec![
            spec.id.to_string(),
            spec.topology.label().into(),
            spec.ca_type.label().into(),
            spec.metric.name().into(),
            spec.direction.name().into(),
        ];
        match r {
            Ok(rep) => {
                row.extend(["ok".to_string(), rep.corpus_size.to_string()]);
                row.extend([rep.label.code().to_string(), rep.nature.label().to_string()]);
                row.extend(model_cells(rep.verdict.brm.as_ref()));
                row.extend(model_cells(rep.verdict.arm.as_ref()));
                row.extend([rep.verdict.survivor_count.to_string(), num(rep.cc)]);
            }
            Err(e) => {
                row.push(format!("error: {e}"));
                row.extend(std::iter::repeat_n(String::new(), 15));
            }
        }
        t.push(row);
    }
    t
}

fn significance_table(reports: &[&ScenarioReport]) -> Table {
    let mut t = Table::new(&["model", "HSS", "SS", "NSS", "none"]);
    let bands = [Significance::Highly, Significance::Significant, Significance::NotSignificant];
    let brm: Vec<Option<Significance>> = reports.iter().map(|r| Some(r.label)).collect();
    let arm: Vec<Option<Significance>> = reports
        .iter()
        .map(|r| r.verdict.arm.as_ref().and_then(|m| classify_significance(m.model_p_value).ok()))
        .collect();
    for (name, labels) in [("BRM", brm), ("ARM", arm)] {
        let mut row = vec![name.to_string()];
        row.extend(bands.iter().map(|b| labels.iter().filter(|l| **l == Some(*b)).count().to_string()));
        row.push(labels.iter().filter(|l| l.is_none()).count().to_string());
        t.push(row);
    }
    t
}

fn nature_table(reports: &[&ScenarioReport]) -> Table {
    let mut t = Table::new(&["tiem", "Linear", "Quadratic", "Polynomial", "None"]);
    for metric in TiemId::ALL {
        let mine: Vec<_> = reports.iter().filter(|r| r.spec.metric == metric).collect();
        let mut row = vec![metric.name().to_string()];
        for n in [Nature::Linear, Nature::Quadratic, Nature::Polynomial, Nature::None] {
            row.push(mine.iter().filter(|r| r.nature == n).count().to_string());
        }
        t.push(row);
    }
    t
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn outlier_table(reports: &[&ScenarioReport]) -> Table {
    let mut t = Table::new(&["tiem", "scenarios", "mean_brm_outliers", "mean_arm_outliers"]);
    for metric in TiemId::ALL {
        let mine: Vec<_> = reports.iter().filter(|r| r.spec.metric == metric).collect();
        let of = |pick: fn(&ScenarioReport) -> Option<&RegressionModel>| {
            mean(mine.iter().filter_map(|r| pick(r)).map(|m| m.outlier_count as f64))
        };
        t.push(vec![
            metric.name().to_string(),
            mine.len().to_string(),
            num(of(|r| r.verdict.brm.as_ref())),
            num(of(|r| r.verdict.arm.as_ref())),
        ]);
    }
    t
}

fn cc_table(reports: &[&ScenarioReport]) -> Table {
    let mut t = Table::new(&["ts_id", "tiem", "topology", "ca_type", "direction", "model", "cc"]);
    for r in reports {
        for (name, m) in [("BRM", &r.verdict.brm), ("ARM", &r.verdict.arm)] {
            if let Some(m) = m.as_ref().filter(|m| m.degree == 1) {
                t.push(vec![
                    r.spec.id.to_string(),
                    r.spec.metric.name().into(),
                    r.spec.topology.label().into(),
                    r.spec.ca_type.label().into(),
                    r.spec.direction.name().into(),
                    name.into(),
                    num(m.pearson_cc),
                ]);
            }
        }
    }
    t
}

fn r2_table(reports: &[&ScenarioReport]) -> Table {
    let mut t = Table::new(&["topology", "ts_id", "tiem", "ca_type", "direction", "brm_r2", "arm_r2"]);
    let mut sorted: Vec<_> = reports.to_vec();
    sorted.sort_by_key(|r| (r.spec.topology, r.spec.id));
    for r in sorted {
        t.push(vec![
            r.spec.topology.label().into(),
            r.spec.id.to_string(),
            r.spec.metric.name().into(),
            r.spec.ca_type.label().into(),
            r.spec.direction.name().into(),
            num(r.verdict.brm.as_ref().map(|m| m.r_squared)),
            num(r.verdict.arm.as_ref().map(|m| m.r_squared)),
        ]);
    }
    t
}

/// Writes every artifact of a run below `dir` and returns the paths written.
pub fn write_outputs(outcome: &RunOutcome, dir: &Path) -> Result<Vec<PathBuf>> {
    let plots = dir.join("plots");
    fs::create_dir_all(&plots)?;
    let mut written = Vec::new();
    for corpus in outcome.corpora.iter().flatten() {
        let path = dir.join(corpus_file_name(corpus));
        write_corpus_csv(corpus, fs::File::create(&path)?)?;
        written.push(path);
    }
    for report in outcome.reports() {
        let path = dir.join(format!("report_TS{}.json", report.spec.id));
        fs::write(&path, report_json(report)?)?;
        written.push(path);
    }
    let path = dir.join("summary.csv");
    summary_table(outcome).save(&path)?;
    written.push(path);
    let reports: Vec<&ScenarioReport> = outcome.reports().collect();
    let tables = [
        significance_table(&reports),
        nature_table(&reports),
        outlier_table(&reports),
        cc_table(&reports),
        r2_table(&reports),
    ];
    for (name, table) in PLOT_FILES.iter().zip(tables) {
        let path = plots.join(name);
        table.save(&path)?;
        written.push(path);
    }
    Ok(written)
}
