//! Record streams and their aggregation: JSON-lines per trial, CSV of
//! per-size means, and the bridge from either form to a scaling fit.

use std::collections::BTreeMap;
use std::io::Write;

use anyhow::{bail, Context};
use qsearch_core::{fit_exponent, AlgorithmId, Metric, RunReport, ScalingFit};

pub const CSV_HEADER: &str = "algorithm,n,trials,metric,mean,stddev";

type MetricExtractor = fn(&RunReport) -> u64;

/// Metrics exported per aggregate row, in output order.
const EXPORTED_METRICS: [(&str, MetricExtractor); 5] = [
    ("queries", |r| r.ledger.queries()),
    ("time_steps", |r| r.ledger.time_steps()),
    ("memory_registers", |r| r.ledger.memory_registers()),
    ("processors", |r| r.ledger.processors()),
    ("hardware", |r| r.ledger.hardware()),
];

fn metric_column(metric: Metric) -> &'static str {
    match metric {
        Metric::Queries => "queries",
        Metric::TimeSteps | Metric::WallTime => "time_steps",
        Metric::Hardware => "hardware",
    }
}

/// One aggregated cell: an algorithm at one size, one metric.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub algorithm: String,
    pub n: u64,
    pub trials: u64,
    pub metric: String,
    pub mean: f64,
    pub stddev: f64,
}

pub fn write_jsonl<W: Write>(mut w: W, records: &[RunReport]) -> anyhow::Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl(text: &str) -> anyhow::Result<Vec<RunReport>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| serde_json::from_str(l).with_context(|| format!("record on line {}", i + 1)))
        .collect()
}

fn mean_and_stddev(values: &[u64]) -> (f64, f64) {
    let count = values.len() as f64;
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / count;
    let stddev = if values.len() < 2 {
        0.0
    } else {
        let var = values
            .iter()
            .map(|&v| (v as f64 - mean).powi(2))
            .sum::<f64>()
            / (count - 1.0);
        var.sqrt()
    };
    (mean, stddev)
}

/// Groups records by (algorithm, n) and summarizes every exported metric.
pub fn aggregate(records: &[RunReport]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<(String, u64), Vec<&RunReport>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.algorithm.name().to_string(), r.n))
            .or_default()
            .push(r);
    }
    let mut rows = Vec::new();
    for ((algorithm, n), group) in groups {
        for (metric, extract) in EXPORTED_METRICS {
            let values: Vec<u64> = group.iter().map(|r| extract(r)).collect();
            let (mean, stddev) = mean_and_stddev(&values);
            rows.push(AggregateRow {
                algorithm: algorithm.clone(),
                n,
                trials: group.len() as u64,
                metric: metric.to_string(),
                mean,
                stddev,
            });
        }
    }
    rows
}

/// Writes aggregate rows as CSV. Means use the shortest round-tripping
/// float form, so re-reading reproduces them bit-exactly.
pub fn write_csv<W: Write>(mut w: W, rows: &[AggregateRow]) -> anyhow::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.algorithm, r.n, r.trials, r.metric, r.mean, r.stddev
        )?;
    }
    Ok(())
}

pub fn read_csv(text: &str) -> anyhow::Result<Vec<AggregateRow>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => bail!("expected CSV header `{CSV_HEADER}`, got {other:?}"),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                bail!("row {}: expected 6 fields, got {}", i + 2, fields.len());
            }
            Ok(AggregateRow {
                algorithm: fields[0].to_string(),
                n: fields[1]
                    .parse()
                    .with_context(|| format!("row {}: n", i + 2))?,
                trials: fields[2]
                    .parse()
                    .with_context(|| format!("row {}: trials", i + 2))?,
                metric: fields[3].to_string(),
                mean: fields[4]
                    .parse()
                    .with_context(|| format!("row {}: mean", i + 2))?,
                stddev: fields[5]
                    .parse()
                    .with_context(|| format!("row {}: stddev", i + 2))?,
            })
        })
        .collect()
}

/// Per-algorithm (n, mean) points for one metric, from trial records.
pub fn points_from_records(
    records: &[RunReport],
    metric: Metric,
) -> BTreeMap<String, Vec<(f64, f64)>> {
    let rows = aggregate(records);
    points_from_rows(&rows, metric)
}

/// Per-algorithm (n, mean) points for one metric, from aggregate rows.
pub fn points_from_rows(
    rows: &[AggregateRow],
    metric: Metric,
) -> BTreeMap<String, Vec<(f64, f64)>> {
    let column = metric_column(metric);
    let mut out: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.metric == column) {
        out.entry(r.algorithm.clone())
            .or_default()
            .push((r.n as f64, r.mean));
    }
    for pts in out.values_mut() {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    out
}

/// Fits one algorithm's points.
pub fn fit_points(metric: Metric, points: &[(f64, f64)]) -> anyhow::Result<ScalingFit> {
    Ok(fit_exponent(metric, points)?)
}

/// Convenience used by the reproduction pipeline: run-and-fit one metric
/// for one algorithm's records.
pub fn fit_records(
    records: &[RunReport],
    algorithm: AlgorithmId,
    metric: Metric,
) -> anyhow::Result<ScalingFit> {
    let by_alg = points_from_records(records, metric);
    let points = by_alg
        .get(algorithm.name())
        .with_context(|| format!("no records for {algorithm}"))?;
    fit_points(metric, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsearch_core::{gen_two_to_one, run_algorithm, RunConfig};

    fn sample_records() -> Vec<RunReport> {
        let mut records = Vec::new();
        for n in [8u64, 16, 32] {
            for seed in 0..4 {
                let inst = gen_two_to_one(n, n, seed).unwrap();
                records.push(
                    run_algorithm(
                        AlgorithmId::ClassicalBirthday,
                        &inst,
                        seed,
                        &RunConfig::default(),
                    )
                    .unwrap(),
                );
            }
        }
        records
    }

    #[test]
    fn jsonl_round_trip_preserves_records() {
        let records = sample_records();
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &records).unwrap();
        let back = read_jsonl(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back.len(), records.len());
        for (a, b) in records.iter().zip(&back) {
            assert_eq!(a.ledger, b.ledger);
            assert_eq!(a.answer, b.answer);
            assert_eq!(a.n, b.n);
        }
    }

    #[test]
    fn csv_round_trip_produces_identical_fits() {
        let records = sample_records();
        let rows = aggregate(&records);
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let back = read_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(rows, back);

        for metric in [Metric::Queries, Metric::TimeSteps, Metric::Hardware] {
            let from_records = points_from_records(&records, metric);
            let from_csv = points_from_rows(&back, metric);
            assert_eq!(from_records, from_csv);
            let f1 = fit_points(metric, &from_records["classical-birthday"]).unwrap();
            let f2 = fit_points(metric, &from_csv["classical-birthday"]).unwrap();
            assert_eq!(f1.exponent.to_bits(), f2.exponent.to_bits());
        }
    }
}
