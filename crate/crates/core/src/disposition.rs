//! Mutual position of two finite real point sets.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::set_distance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DispositionKind {
    Generic,
    /// `conv(set_i)` misses the other set: set `i` lies in a gap of the other.
    GapOf(usize),
    /// The convex hulls are disjoint.
    Subordinated,
}

impl fmt::Display for DispositionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DispositionKind::Generic => write!(f, "generic"),
            DispositionKind::GapOf(i) => write!(f, "gap_of({i})"),
            DispositionKind::Subordinated => write!(f, "subordinated"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Disposition {
    pub kind: DispositionKind,
    pub d: f64,
    /// Index of the set lying in a gap of the other, for `GapOf`.
    pub which_inner: Option<usize>,
}

impl Disposition {
    /// True when set `i` lies in a gap of the other one (also for subordinated sets).
    pub fn is_gap_of(&self, i: usize) -> bool {
        match self.kind {
            DispositionKind::Subordinated => true,
            DispositionKind::GapOf(j) => i == j,
            DispositionKind::Generic => false,
        }
    }

    /// One of the sets lies in a gap of the other.
    pub fn has_gap(&self) -> bool {
        self.kind != DispositionKind::Generic
    }

    pub fn is_subordinated(&self) -> bool {
        self.kind == DispositionKind::Subordinated
    }
}

fn hull(set: &[f64]) -> (f64, f64) {
    let lo = set.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = set.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

fn scale(set0: &[f64], set1: &[f64]) -> f64 {
    set0.iter().chain(set1).fold(0.0f64, |m, x| m.max(x.abs()))
}

fn check_disjoint(set0: &[f64], set1: &[f64], same_point: f64) -> Result<f64> {
    if set0.is_empty() || set1.is_empty() {
        return Err(Error::InvalidInput("spectral sets must be nonempty".into()));
    }
    if set0.iter().chain(set1).any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("spectral sets must be finite".into()));
    }
    let d = set_distance(set0, set1);
    if d <= same_point * (1.0 + scale(set0, set1)) {
        return Err(Error::SetsIntersect { distance: d });
    }
    Ok(d)
}

/// `conv(inner) ∩ outer = ∅`.
fn lies_in_gap(inner: &[f64], outer: &[f64]) -> bool {
    let (lo, hi) = hull(inner);
    outer.iter().all(|&x| x < lo || x > hi)
}

/// Classifies two point sets, reporting the strongest applicable kind.
pub fn classify_disposition(set0: &[f64], set1: &[f64], same_point: f64) -> Result<Disposition> {
    let d = check_disjoint(set0, set1, same_point)?;
    let (lo0, hi0) = hull(set0);
    let (lo1, hi1) = hull(set1);
    let (kind, which_inner) = if hi0 < lo1 || hi1 < lo0 {
        (DispositionKind::Subordinated, None)
    } else if lies_in_gap(set0, set1) {
        (DispositionKind::GapOf(0), Some(0))
    } else if lies_in_gap(set1, set0) {
        (DispositionKind::GapOf(1), Some(1))
    } else {
        (DispositionKind::Generic, None)
    };
    Ok(Disposition { kind, d, which_inner })
}

/// Maximal open intervals free of both sets whose endpoints lie in different sets.
pub fn enumerate_separating_gaps(set0: &[f64], set1: &[f64], same_point: f64) -> Result<Vec<(f64, f64)>> {
    check_disjoint(set0, set1, same_point)?;
    let mut points: Vec<(f64, usize)> =
        set0.iter().map(|&x| (x, 0)).chain(set1.iter().map(|&x| (x, 1))).collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(points
        .windows(2)
        .filter(|w| w[0].1 != w[1].1 && w[0].0 < w[1].0)
        .map(|w| (w[0].0, w[1].0))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn classifies_worked_sets() {
        let s3 = 3f64.sqrt();
        let a = classify_disposition(&[-4.0, 2.0 + s3], &[0.0], TOL).unwrap();
        assert_eq!(a.kind, DispositionKind::GapOf(1));
        assert!((a.d - (2.0 + s3)).abs() < 1e-15);

        let b = classify_disposition(&[0.0], &[-2.0, 2.0], TOL).unwrap();
        assert_eq!(b.kind, DispositionKind::GapOf(0));
        assert_eq!(b.d, 2.0);

        let c = classify_disposition(&[-0.8], &[0.8], TOL).unwrap();
        assert_eq!(c.kind, DispositionKind::Subordinated);
        assert!(c.is_gap_of(0) && c.is_gap_of(1));
        assert!((c.d - 1.6).abs() < 1e-15);

        let g = classify_disposition(&[0.0, 2.0], &[1.0, 3.0], TOL).unwrap();
        assert_eq!(g.kind, DispositionKind::Generic);
    }

    #[test]
    fn intersecting_sets_are_rejected() {
        let e = classify_disposition(&[0.0, 1.0], &[1.0], TOL).unwrap_err();
        assert_eq!(e.name(), "SetsIntersect");
        assert!(classify_disposition(&[0.0], &[1e-13], TOL).is_err());
    }

    #[test]
    fn separating_gaps() {
        assert_eq!(
            enumerate_separating_gaps(&[0.0, 2.0], &[1.0, 3.0], TOL).unwrap(),
            vec![(0.0, 1.0), (1.0, 2.0), (2.0, 3.0)]
        );
        assert_eq!(enumerate_separating_gaps(&[0.0, 1.0], &[5.0], TOL).unwrap(), vec![(1.0, 5.0)]);
        assert_eq!(enumerate_separating_gaps(&[0.0], &[1.0, 2.0], TOL).unwrap(), vec![(0.0, 1.0)]);
    }
}
