//! Experiment persistence: CSV solution dumps, a JSON summary, and a
//! dependency-free static SVG plot of a 2-D run.
//!
//! All files are written to a temporary sibling and renamed into place so
//! no output is ever left partially written, and all formatting is
//! deterministic: identical reports give byte-identical files.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::engine::{RunReport, Solution};
use crate::error::{Error, Result};
use crate::objective::ObjectiveSpec;

/// Experiment-level fields echoed into the JSON summary.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentMeta {
    pub function: String,
    pub dim: usize,
    pub m: usize,
    pub sigma: f64,
    pub iterations: usize,
    pub repetitions: usize,
    pub seed: u64,
}

#[derive(Serialize)]
struct RepSummary {
    distinct_optima: usize,
    global_found: bool,
    eval_count: u64,
    lp_size: usize,
    p_size: usize,
}

#[derive(Serialize)]
struct Aggregate {
    min_distinct_optima: usize,
    median_distinct_optima: f64,
    max_distinct_optima: usize,
    fraction_global_found: f64,
}

#[derive(Serialize)]
struct Summary<'a> {
    #[serde(flatten)]
    meta: &'a ExperimentMeta,
    reps: Vec<RepSummary>,
    aggregate: Aggregate,
}

/// 17 significant digits: enough for exact f64 round-trips, so downstream
/// tooling can reconstruct every coordinate bit-for-bit.
fn full_precision(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Writes every solution of every repetition as CSV with header
/// `rep,pop,x1,...,xn,f`, rows ordered by (rep, pop, id) where pop is
/// `LP` or `P`.
pub fn write_csv(reports: &[RunReport], dim: usize, path: &Path) -> Result<()> {
    if reports.is_empty() {
        return Err(Error::InvalidConfig("no reports to write".into()));
    }
    let mut out = String::from("rep,pop");
    for i in 1..=dim {
        out.push_str(&format!(",x{i}"));
    }
    out.push_str(",f\n");

    let mut row = |rep: usize, pop: &str, s: &Solution| {
        out.push_str(&format!("{rep},{pop}"));
        for c in s.point.as_slice() {
            out.push(',');
            out.push_str(&full_precision(*c));
        }
        out.push(',');
        out.push_str(&full_precision(s.value));
        out.push('\n');
    };

    let mut ordered: Vec<&RunReport> = reports.iter().collect();
    ordered.sort_by_key(|r| r.repetition);
    for report in ordered {
        // "LP" sorts before "P".
        for section in [("LP", &report.final_archive), ("P", &report.final_population)] {
            let mut solutions: Vec<&Solution> = section.1.iter().collect();
            solutions.sort_by_key(|s| s.id);
            for s in solutions {
                row(report.repetition, section.0, s);
            }
        }
    }
    write_atomic(path, out.as_bytes())
}

/// Writes the JSON summary: experiment fields, one entry per repetition,
/// and min/median/max distinct-optima plus the fraction of repetitions
/// that found the global optimum.
pub fn write_json_summary(
    meta: &ExperimentMeta,
    reports: &[RunReport],
    path: &Path,
) -> Result<()> {
    if reports.is_empty() {
        return Err(Error::InvalidConfig("no reports to write".into()));
    }
    let mut ordered: Vec<&RunReport> = reports.iter().collect();
    ordered.sort_by_key(|r| r.repetition);

    let reps: Vec<RepSummary> = ordered
        .iter()
        .map(|r| RepSummary {
            distinct_optima: r.distinct_optima,
            global_found: r.global_found,
            eval_count: r.eval_count,
            lp_size: r.final_archive.len(),
            p_size: r.final_population.len(),
        })
        .collect();

    let mut counts: Vec<usize> = reps.iter().map(|r| r.distinct_optima).collect();
    counts.sort_unstable();
    let median = if counts.len() % 2 == 1 {
        counts[counts.len() / 2] as f64
    } else {
        (counts[counts.len() / 2 - 1] + counts[counts.len() / 2]) as f64 / 2.0
    };
    let aggregate = Aggregate {
        min_distinct_optima: counts[0],
        median_distinct_optima: median,
        max_distinct_optima: *counts.last().unwrap(),
        fraction_global_found: reps.iter().filter(|r| r.global_found).count() as f64
            / reps.len() as f64,
    };

    let summary = Summary {
        meta,
        reps,
        aggregate,
    };
    let mut json = serde_json::to_string_pretty(&summary)
        .map_err(|e| Error::InvalidConfig(format!("summary serialization failed: {e}")))?;
    json.push('\n');
    write_atomic(path, json.as_bytes())
}

/// Writes a standalone SVG of a 2-D run: a `grid x grid` heatmap of the
/// objective over its bounds in linear grayscale (sampled minimum black,
/// maximum white), archived optima as filled circles, active solutions as
/// hollow circles, and the bounds on the axes. The circle count is
/// exactly `|P| + |LP|`.
pub fn emit_plot(
    report: &RunReport,
    spec: &ObjectiveSpec,
    grid: usize,
    path: &Path,
) -> Result<()> {
    if spec.dim() != 2 {
        return Err(Error::InvalidConfig(format!(
            "plot emission requires dim = 2, got {}",
            spec.dim()
        )));
    }
    if grid < 16 {
        return Err(Error::InvalidConfig("plot grid must be at least 16".into()));
    }

    const MARGIN_LEFT: f64 = 60.0;
    const MARGIN_BOTTOM: f64 = 45.0;
    const MARGIN_TOP: f64 = 30.0;
    const MARGIN_RIGHT: f64 = 15.0;
    const PLOT: f64 = 560.0;
    let width = MARGIN_LEFT + PLOT + MARGIN_RIGHT;
    let height = MARGIN_TOP + PLOT + MARGIN_BOTTOM;

    let b = spec.bounds();
    let (x_lo, x_hi) = (b.lower()[0], b.upper()[0]);
    let (y_lo, y_hi) = (b.lower()[1], b.upper()[1]);
    let to_px = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * PLOT;
    let to_py = |y: f64| MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * PLOT;

    // Sample the objective at cell centers.
    let mut values = Vec::with_capacity(grid * grid);
    let mut vmin = f64::INFINITY;
    let mut vmax = f64::NEG_INFINITY;
    for row in 0..grid {
        for col in 0..grid {
            let x = x_lo + (col as f64 + 0.5) / grid as f64 * (x_hi - x_lo);
            let y = y_hi - (row as f64 + 0.5) / grid as f64 * (y_hi - y_lo);
            let v = spec.evaluate(&crate::objective::Point::new_unchecked(vec![x, y]))?;
            vmin = vmin.min(v);
            vmax = vmax.max(v);
            values.push(v);
        }
    }
    let span = if vmax > vmin { vmax - vmin } else { 1.0 };

    let mut svg = String::with_capacity(values.len() * 64);
    svg.push_str(r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    svg.push('\n');
    svg.push_str(&format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<text x="{}" y="18" font-family="sans-serif" font-size="14" text-anchor="middle">{} rep {}: |LP|={} |P|={}</text>"#,
        MARGIN_LEFT + PLOT / 2.0,
        spec.name(),
        report.repetition,
        report.final_archive.len(),
        report.final_population.len(),
    ));
    svg.push('\n');

    let cell = PLOT / grid as f64;
    for row in 0..grid {
        for col in 0..grid {
            let t = (values[row * grid + col] - vmin) / span;
            let shade = (255.0 * t).round() as u8;
            svg.push_str(&format!(
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb({shade},{shade},{shade})"/>"#,
                MARGIN_LEFT + col as f64 * cell,
                MARGIN_TOP + row as f64 * cell,
                cell + 0.01,
                cell + 0.01,
            ));
            svg.push('\n');
        }
    }

    svg.push_str(&format!(
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{PLOT}" height="{PLOT}" fill="none" stroke="black" stroke-width="1"/>"#
    ));
    svg.push('\n');
    for (value, px, py, anchor) in [
        (x_lo, to_px(x_lo), MARGIN_TOP + PLOT + 18.0, "middle"),
        (x_hi, to_px(x_hi), MARGIN_TOP + PLOT + 18.0, "middle"),
        (y_lo, MARGIN_LEFT - 8.0, to_py(y_lo) + 4.0, "end"),
        (y_hi, MARGIN_LEFT - 8.0, to_py(y_hi) + 4.0, "end"),
    ] {
        svg.push_str(&format!(
            r#"<text x="{px:.2}" y="{py:.2}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{value}</text>"#
        ));
        svg.push('\n');
    }
    svg.push_str(&format!(
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">x1</text>"#,
        MARGIN_LEFT + PLOT / 2.0,
        MARGIN_TOP + PLOT + 36.0,
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<text x="14" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">x2</text>"#,
        MARGIN_TOP + PLOT / 2.0,
    ));
    svg.push('\n');

    // Markers: archived optima filled, active solutions hollow. These are
    // the only circle elements in the file.
    for s in &report.final_archive {
        svg.push_str(&format!(
            r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="#d62728"/>"##,
            to_px(s.point[0]),
            to_py(s.point[1]),
        ));
        svg.push('\n');
    }
    for s in &report.final_population {
        svg.push_str(&format!(
            r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="none" stroke="#1f77b4" stroke-width="1.5"/>"##,
            to_px(s.point[0]),
            to_py(s.point[1]),
        ));
        svg.push('\n');
    }
    svg.push_str("</svg>\n");

    write_atomic(path, svg.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{IterationRecord, Solution};
    use crate::objective::{make_benchmark, Point};

    fn report_with(solutions_p: Vec<Solution>, solutions_lp: Vec<Solution>) -> RunReport {
        RunReport {
            repetition: 0,
            final_population: solutions_p,
            final_archive: solutions_lp,
            eval_count: 42,
            per_iteration: vec![IterationRecord {
                iter: 1,
                p_size: 1,
                lp_size: 1,
                best_value: 0.0,
            }],
            distinct_optima: 1,
            global_found: true,
        }
    }

    fn sol(coords: Vec<f64>, value: f64, id: u64) -> Solution {
        Solution {
            point: Point::new(coords).unwrap(),
            value,
            id,
        }
    }

    fn meta() -> ExperimentMeta {
        ExperimentMeta {
            function: "rastrigin".into(),
            dim: 2,
            m: 10,
            sigma: 0.9,
            iterations: 5,
            repetitions: 1,
            seed: 1,
        }
    }

    #[test]
    fn csv_layout_and_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("solutions.csv");
        let p = vec![sol(vec![1.0 / 3.0, -0.1], 2.5e-17, 7)];
        let lp = vec![sol(vec![0.0, 0.0], 0.0, 3)];
        let report = report_with(p.clone(), lp.clone());
        write_csv(&[report], 2, &path).unwrap();

        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "rep,pop,x1,x2,f");
        let lp_row = lines.next().unwrap();
        assert!(lp_row.starts_with("0,LP,"), "LP rows come first: {lp_row}");
        let p_row = lines.next().unwrap();
        assert!(p_row.starts_with("0,P,"));
        assert!(lines.next().is_none());

        // Round-trip exactness of every numeric field.
        for (row, expected) in [(lp_row, &lp[0]), (p_row, &p[0])] {
            let fields: Vec<&str> = row.split(',').collect();
            assert_eq!(fields.len(), 5);
            for (i, c) in expected.point.as_slice().iter().enumerate() {
                let parsed: f64 = fields[2 + i].parse().unwrap();
                assert_eq!(parsed.to_bits(), c.to_bits());
            }
            let parsed: f64 = fields[4].parse().unwrap();
            assert_eq!(parsed.to_bits(), expected.value.to_bits());
        }
    }

    #[test]
    fn csv_rejects_empty_reports() {
        let dir = tempfile::tempdir().unwrap();
        assert!(write_csv(&[], 2, &dir.path().join("x.csv")).is_err());
    }

    #[test]
    fn json_summary_shape() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("summary.json");
        let report = report_with(vec![sol(vec![0.1, 0.2], 1.0, 1)], vec![]);
        write_json_summary(&meta(), &[report], &path).unwrap();
        let parsed: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(parsed["function"], "rastrigin");
        assert_eq!(parsed["reps"].as_array().unwrap().len(), 1);
        assert_eq!(parsed["reps"][0]["distinct_optima"], 1);
        assert_eq!(parsed["reps"][0]["global_found"], true);
        assert_eq!(parsed["aggregate"]["min_distinct_optima"], 1);
        assert_eq!(parsed["aggregate"]["fraction_global_found"], 1.0);
    }

    #[test]
    fn json_aggregate_orders_min_median_max() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("summary.json");
        let mut reports = Vec::new();
        for (rep, distinct) in [9usize, 11, 10, 12].into_iter().enumerate() {
            let mut r = report_with(vec![sol(vec![0.0, 0.0], 0.0, rep as u64)], vec![]);
            r.repetition = rep;
            r.distinct_optima = distinct;
            reports.push(r);
        }
        write_json_summary(&meta(), &reports, &path).unwrap();
        let parsed: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        let agg = &parsed["aggregate"];
        assert_eq!(agg["min_distinct_optima"], 9);
        assert_eq!(agg["median_distinct_optima"], 10.5);
        assert_eq!(agg["max_distinct_optima"], 12);
    }

    #[test]
    fn plot_is_wellformed_with_matching_marker_count() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("plot_rep0.svg");
        let spec = make_benchmark("rastrigin", 2, None).unwrap();
        let p = vec![
            sol(vec![1.0, 1.0], 2.0, 1),
            sol(vec![-1.0, 2.0], 7.0, 2),
        ];
        let lp = vec![sol(vec![0.0, 0.0], 0.0, 0)];
        let report = report_with(p, lp);
        emit_plot(&report, &spec, 16, &path).unwrap();

        let text = fs::read_to_string(&path).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        let circles = doc
            .descendants()
            .filter(|n| n.has_tag_name("circle"))
            .count();
        assert_eq!(circles, 3);
        let rects = doc.descendants().filter(|n| n.has_tag_name("rect")).count();
        assert_eq!(rects, 16 * 16 + 1, "heatmap cells plus the border");
    }

    #[test]
    fn plot_rejects_non_2d() {
        let dir = tempfile::tempdir().unwrap();
        let spec = make_benchmark("rastrigin", 3, None).unwrap();
        let report = report_with(vec![sol(vec![0.0, 0.0, 0.0], 0.0, 0)], vec![]);
        assert!(emit_plot(&report, &spec, 16, &dir.path().join("p.svg")).is_err());
    }

    #[test]
    fn outputs_are_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let spec = make_benchmark("griewank", 2, None).unwrap();
        let report = report_with(
            vec![sol(vec![0.5, -0.25], 0.3, 1)],
            vec![sol(vec![0.0, 0.0], 0.0, 0)],
        );
        let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
        emit_plot(&report, &spec, 16, &a).unwrap();
        emit_plot(&report, &spec, 16, &b).unwrap();
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

        let (ca, cb) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
        write_csv(&[report.clone()], 2, &ca).unwrap();
        write_csv(&[report], 2, &cb).unwrap();
        assert_eq!(fs::read(&ca).unwrap(), fs::read(&cb).unwrap());
    }
}
