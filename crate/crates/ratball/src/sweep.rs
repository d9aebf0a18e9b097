//! Parallel sweeps, CSV rows, witness files and the audit report.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;
use ratball_core::classify::{
    sweep_row, theorem_audit, AuditReport, ClassifyOptions, FamilyForm, FamilyPredicate, SweepRange, SweepRow,
    Verdict,
};
use serde::Serialize;

use crate::formats::{write_json, WitnessFile};

/// A row plus its wall time.
#[derive(Clone, Debug)]
pub struct TimedRow {
    pub row: SweepRow,
    pub ms: f64,
}

/// Same rows, same order as the sequential sweep, for any worker count.
pub fn parallel_sweep(range: &SweepRange, opts: &ClassifyOptions, workers: usize) -> Result<Vec<TimedRow>> {
    let specs = range.specs();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    pool.install(|| {
        specs
            .par_iter()
            .map(|s| {
                let t = Instant::now();
                let row = sweep_row(s, opts).map_err(|e| anyhow::anyhow!("{}: {}", s, e))?;
                Ok(TimedRow { row, ms: t.elapsed().as_secs_f64() * 1e3 })
            })
            .collect()
    })
}

pub fn witness_name(r: &SweepRow) -> String {
    format!("witnesses/w_{}_{}_{}_{}_{}.json", r.p1, r.a1, r.p2, r.a2, r.n)
}

#[derive(Serialize)]
struct CsvRow<'a> {
    p1: u64,
    a1: u64,
    p2: u64,
    a2: u64,
    n: i64,
    #[serde(rename = "N")]
    big_n: i64,
    rank: Option<usize>,
    verdict: &'a str,
    witness_file: String,
    nodes: u64,
    ms: Option<String>,
}

/// The sweep table; `ms` stays empty unless `timing` is set so that
/// reruns produce identical bytes.
pub fn rows_to_csv(rows: &[TimedRow], timing: bool) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for t in rows {
        let r = &t.row;
        w.serialize(CsvRow {
            p1: r.p1,
            a1: r.a1,
            p2: r.p2,
            a2: r.a2,
            n: r.n,
            big_n: r.big_n,
            rank: r.rank,
            verdict: r.verdict.label(),
            witness_file: if r.verdict.passes() { witness_name(r) } else { String::new() },
            nodes: r.nodes,
            ms: timing.then(|| format!("{:.3}", t.ms)),
        })?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Writes one witness file per passing row under `dir`.
pub fn write_witnesses(dir: &Path, rows: &[TimedRow]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for t in rows {
        if let Verdict::ObstructionPasses(m) = &t.row.verdict {
            let path = dir.join(witness_name(&t.row));
            write_json(&path, &WitnessFile::from_matrix(m))?;
            out.push(path);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TupleJson {
    pub p1: u64,
    pub a1: u64,
    pub p2: u64,
    pub a2: u64,
    pub n: i64,
}

impl From<(u64, u64, u64, u64, i64)> for TupleJson {
    fn from((p1, a1, p2, a2, n): (u64, u64, u64, u64, i64)) -> Self {
        TupleJson { p1, a1, p2, a2, n }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisagreementJson {
    #[serde(flatten)]
    pub tuple: TupleJson,
    pub predicted: &'static str,
    pub verdict: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditJson {
    pub family_form: String,
    pub rows: usize,
    pub agreements: usize,
    pub skipped: usize,
    pub perfect: bool,
    pub passes: Vec<TupleJson>,
    pub indeterminate: Vec<TupleJson>,
    pub disagreements: Vec<DisagreementJson>,
}

pub fn audit(rows: &[TimedRow], form: FamilyForm) -> (AuditReport, AuditJson) {
    let plain: Vec<SweepRow> = rows.iter().map(|t| t.row.clone()).collect();
    let rep = theorem_audit(&plain, FamilyPredicate::new(form));
    let json = AuditJson {
        family_form: form.to_string(),
        rows: plain.len(),
        agreements: rep.agreements,
        skipped: rep.skipped,
        perfect: rep.is_perfect(),
        passes: plain.iter().filter(|r| r.verdict.passes()).map(|r| r.key().into()).collect(),
        indeterminate: rep.indeterminate.iter().map(|&k| k.into()).collect(),
        disagreements: rep
            .disagreements
            .iter()
            .map(|d| DisagreementJson {
                tuple: d.tuple.into(),
                predicted: if d.predicted_pass { "passes" } else { "fails" },
                verdict: d.verdict,
            })
            .collect(),
    };
    (rep, json)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
