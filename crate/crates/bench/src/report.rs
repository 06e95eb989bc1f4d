use std::io;
use std::path::Path;

use lkgain::GainKind;

use crate::harness::{HarnessError, RunReport};

pub const HEADER: [&str; 9] = [
    "Problem",
    "Policy",
    "Candidates",
    "CostMin",
    "CostAvg",
    "GapMin",
    "GapAvg",
    "TimeAvg",
    "TimeAvgRatio",
];

/// `100 * (t - t_strict) / t_strict`; negative means faster than strict.
pub fn time_ratio(time: f64, strict_time: f64) -> f64 {
    100.0 * (time - strict_time) / strict_time
}

fn baseline<'a>(reports: &'a [RunReport], r: &RunReport) -> Option<&'a RunReport> {
    reports
        .iter()
        .find(|b| b.policy == GainKind::Strict && b.problem == r.problem && b.candidates == r.candidates)
}

fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    v.map(|x| format!("{x:.digits$}")).unwrap_or_default()
}

pub fn write_report_to<W: io::Write>(reports: &[RunReport], out: W) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new().delimiter(b';').from_writer(out);
    w.write_record(HEADER)?;
    for r in reports {
        let ratio = baseline(reports, r).and_then(|b| {
            let t = b.time_avg();
            (t > 0.0).then(|| time_ratio(r.time_avg(), t))
        });
        w.write_record([
            r.problem.clone(),
            r.policy.to_string(),
            r.candidates.to_string(),
            r.cost_min().to_string(),
            format!("{:.2}", r.cost_avg()),
            fmt_opt(r.gap_min(), 3),
            fmt_opt(r.gap_avg(), 3),
            format!("{:.3}", r.time_avg()),
            fmt_opt(ratio, 1),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_report(reports: &[RunReport], path: &Path) -> Result<(), HarnessError> {
    let file = std::fs::File::create(path)?;
    write_report_to(reports, io::BufWriter::new(file))
}
