//! CSV and JSON serialization. CSV floats carry 17 significant digits,
//! missing values are empty fields.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bounds::BoundReport;
use crate::ensemble::TrialOutcome;
use crate::linalg::C64;

/// `{:.16e}`: 17 significant digits, round-trip safe.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub const BOUNDS_HEADER: &str = "bound_id,applicable,lhs,rhs,slack";

pub fn bounds_csv(report: &BoundReport) -> String {
    let mut out = String::from(BOUNDS_HEADER);
    out.push('\n');
    for r in &report.records {
        let _ = writeln!(out, "{},{},{},{},{}", r.bound_id, r.applicable, fmt_f64(r.lhs), fmt_opt(r.rhs), fmt_opt(r.slack));
    }
    out
}

pub const ENSEMBLE_HEADER: &str = "trial,seed,n0,n1,disposition,v_over_d,d,norm_v,bound_id,applicable,lhs,rhs,slack";

/// One row per bound of the trial, without header.
pub fn ensemble_rows(t: &TrialOutcome) -> String {
    let mut out = String::new();
    for r in &t.bounds.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            t.index,
            t.seed,
            t.config.n0,
            t.config.n1,
            t.config.disposition,
            fmt_f64(t.config.v_over_d),
            fmt_f64(t.d),
            fmt_f64(t.norm_v),
            r.bound_id,
            r.applicable,
            fmt_f64(r.lhs),
            fmt_opt(r.rhs),
            fmt_opt(r.slack)
        );
    }
    out
}

pub fn ensemble_csv<'a>(trials: impl IntoIterator<Item = &'a TrialOutcome>) -> String {
    let mut out = String::from(ENSEMBLE_HEADER);
    out.push('\n');
    for t in trials {
        out.push_str(&ensemble_rows(t));
    }
    out
}

pub const QNR_HEADER: &str = "re,im,source";

/// Point cloud with a source tag per point (`qnr`, `nr`, `spectrum`, ...).
pub fn points_csv<'a>(groups: impl IntoIterator<Item = (&'a str, &'a [C64])>) -> String {
    let mut out = String::from(QNR_HEADER);
    out.push('\n');
    for (source, points) in groups {
        for z in points {
            let _ = writeln!(out, "{},{},{}", fmt_f64(z.re), fmt_f64(z.im), source);
        }
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}
