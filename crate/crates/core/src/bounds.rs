//! Angle and angular-operator bounds: evaluation of right-hand sides and
//! comparison with measured quantities.
//!
//! Bound identifiers:
//!
//! | id | measured | right-hand side | applicable when |
//! |----|----------|-----------------|-----------------|
//! | `apriori_tanh` | tan | `tanh(artanh(2v/d)/2)` | one of `sigma0`, `sigma1` in a gap of the other, `v < d/2` |
//! | `apriori_sin2` | sin2 | `2v/d` | as above |
//! | `semi_tan_generic_i{0,1}` | tan | `(pi/2) v / delta_i` | `delta_i > 0` |
//! | `semi_tan_gap_i{0,1}` | tan | `v / delta_i` | one of `sigma_i`, `sigma'_{1-i}` in a gap of the other |
//! | `post_tan_generic` | tan | `(pi/2) v / delta_hat` | `delta_hat > 0` |
//! | `post_tan_gap` | tan | `v / sqrt(delta_hat^2 + v^2)` | `conv(sigma'_i)` misses `sigma'_{1-i}` for some `i` |
//! | `post_tan2_subordinated` | tan2 | `2v / delta_hat` | `sigma'0`, `sigma'1` subordinated |
//! | `k_semi_generic` | norm K | `(pi/2) ||B|| / dist(spec Z0, spec A1)` | distance positive |
//! | `k_semi_gap` | norm K | `||B|| / dist(spec Z0, spec A1)` | one set in a gap of the other |
//! | `k_post_generic` | norm K | `(pi/2) ||B|| / dist(spec Z0, spec Z1)` | distance positive |
//! | `k_post_gap` | norm K | `||B|| / sqrt(delta^2 + ||B||^2)` | `conv(spec Z0)` misses `spec Z1` |
//! | `k_post_subordinated` | norm K | `tan(arctan(2||B|| / delta)/2)` | spectra of `Z0`, `Z1` subordinated |
//! | `apriori_tan_generic` | tan | `(pi/2) tan(arcsin(2v/d)/2)` | `v < d/2` |
//! | `apriori_tan_gap` | tan | `tan(arcsin(2v/d)/2)` | additionally a gap disposition of `sigma0`, `sigma1` |
//! | `apriori_tan_pi` | tan | `tan(arcsin(pi v/d)/2)` | `v < d/pi` |
//! | `apriori_tan_post_gap` | tan | `v / sqrt(d^2 - 3v^2)` | `v < d/2` and the `post_tan_gap` disposition |
//! | `apriori_tan_post_generic` | tan | `(pi/2) v / sqrt(d^2 - 4v^2)` | `v < d/2` |
//!
//! Here `v = ||V||`, `sigma_i` are the spectra of the diagonal blocks and
//! `sigma'_i` the perturbed spectral components.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::angles::AngleReport;
use crate::disposition::{classify_disposition, enumerate_separating_gaps, Disposition};
use crate::error::{Error, Result};
use crate::instance::BlockInstance;
use crate::linalg::set_distance;
use crate::riccati::RiccatiSolution;
use crate::tolerance::Tolerances;

/// Quantity a bound controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Tan,
    Sin2,
    Tan2,
    NormK,
}

/// `tanh(artanh(x)/2) = tan(arcsin(x)/2) = x / (1 + sqrt(1 - x^2))` for `x` in `[0, 1]`.
pub fn tan_half_arcsin(x: f64) -> f64 {
    x / (1.0 + (1.0 - x * x).max(0.0).sqrt())
}

/// `tan(arctan(y)/2) = y / (1 + sqrt(1 + y^2))`.
pub fn tan_half_arctan(y: f64) -> f64 {
    y / (1.0 + (1.0 + y * y).sqrt())
}

/// Distances and dispositions the catalogue is parameterized by.
#[derive(Debug, Clone, Default)]
pub struct BoundInputs {
    pub norm_v: f64,
    /// `dist(sigma0, sigma1)`.
    pub d: f64,
    /// `delta_i = dist(sigma_i, sigma'_{1-i})`.
    pub delta: [f64; 2],
    /// `dist(sigma'0, sigma'1)`.
    pub delta_hat: f64,
    /// Disposition of `(sigma0, sigma1)`; `None` when the sets meet.
    pub unperturbed: Option<Disposition>,
    /// Disposition of `(sigma_i, sigma'_{1-i})`.
    pub semi: [Option<Disposition>; 2],
    /// Disposition of `(sigma'0, sigma'1)`.
    pub perturbed: Option<Disposition>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogueEntry {
    pub id: &'static str,
    pub quantity: Quantity,
    /// `None` when the hypotheses fail.
    pub rhs: Option<f64>,
    pub disposition_used: Option<String>,
}

fn entry(id: &'static str, quantity: Quantity, rhs: Option<f64>, disp: Option<&Disposition>) -> CatalogueEntry {
    CatalogueEntry { id, quantity, rhs, disposition_used: disp.map(|d| d.kind.to_string()) }
}

fn positive(x: f64) -> Option<f64> {
    (x > 0.0 && x.is_finite()).then_some(x)
}

/// Every right-hand side, with inapplicable ones reported as `None`.
pub fn bound_catalogue(inp: &BoundInputs) -> Vec<CatalogueEntry> {
    let v = inp.norm_v;
    let mut out = Vec::with_capacity(20);

    let d = inp.unperturbed.map(|disp| disp.d).and_then(positive);
    let gap_a = inp.unperturbed.filter(|disp| disp.has_gap());
    let x = d.map(|d| 2.0 * v / d);
    let small = x.filter(|&x| x < 1.0);

    out.push(entry(
        "apriori_tanh",
        Quantity::Tan,
        gap_a.and(small).map(tan_half_arcsin),
        gap_a.as_ref(),
    ));
    out.push(entry("apriori_sin2", Quantity::Sin2, gap_a.and(small), gap_a.as_ref()));

    const SEMI_GENERIC: [&str; 2] = ["semi_tan_generic_i0", "semi_tan_generic_i1"];
    const SEMI_GAP: [&str; 2] = ["semi_tan_gap_i0", "semi_tan_gap_i1"];
    for i in 0..2 {
        let delta = inp.semi[i].map(|disp| disp.d).and_then(positive);
        out.push(entry(SEMI_GENERIC[i], Quantity::Tan, delta.map(|dl| FRAC_PI_2 * v / dl), inp.semi[i].as_ref()));
        let gap = inp.semi[i].filter(|disp| disp.has_gap());
        out.push(entry(SEMI_GAP[i], Quantity::Tan, gap.and(delta).map(|dl| v / dl), gap.as_ref()));
    }

    let dh = inp.perturbed.map(|disp| disp.d).and_then(positive);
    let post_gap = inp.perturbed.filter(|disp| disp.has_gap());
    let post_sub = inp.perturbed.filter(|disp| disp.is_subordinated());
    out.push(entry("post_tan_generic", Quantity::Tan, dh.map(|dh| FRAC_PI_2 * v / dh), inp.perturbed.as_ref()));
    out.push(entry(
        "post_tan_gap",
        Quantity::Tan,
        post_gap.and(dh).map(|dh| v / (dh * dh + v * v).sqrt()),
        post_gap.as_ref(),
    ));
    out.push(entry(
        "post_tan2_subordinated",
        Quantity::Tan2,
        post_sub.and(dh).map(|dh| 2.0 * v / dh),
        post_sub.as_ref(),
    ));

    // Angular-operator forms: ||B|| = v, spec Z0 = sigma'0, spec Z1 = sigma'1.
    let delta_za = inp.semi[1].map(|disp| disp.d).and_then(positive);
    let gap_za = inp.semi[1].filter(|disp| disp.has_gap());
    out.push(entry("k_semi_generic", Quantity::NormK, delta_za.map(|dl| FRAC_PI_2 * v / dl), inp.semi[1].as_ref()));
    out.push(entry("k_semi_gap", Quantity::NormK, gap_za.and(delta_za).map(|dl| v / dl), gap_za.as_ref()));
    out.push(entry("k_post_generic", Quantity::NormK, dh.map(|dh| FRAC_PI_2 * v / dh), inp.perturbed.as_ref()));
    let z0_inner = inp.perturbed.filter(|disp| disp.is_gap_of(0));
    out.push(entry(
        "k_post_gap",
        Quantity::NormK,
        z0_inner.and(dh).map(|dh| v / (dh * dh + v * v).sqrt()),
        z0_inner.as_ref(),
    ));
    out.push(entry(
        "k_post_subordinated",
        Quantity::NormK,
        post_sub.and(dh).map(|dh| tan_half_arctan(2.0 * v / dh)),
        post_sub.as_ref(),
    ));

    out.push(entry(
        "apriori_tan_generic",
        Quantity::Tan,
        small.map(|x| FRAC_PI_2 * tan_half_arcsin(x)),
        inp.unperturbed.as_ref(),
    ));
    out.push(entry("apriori_tan_gap", Quantity::Tan, gap_a.and(small).map(tan_half_arcsin), gap_a.as_ref()));
    let xpi = d.map(|d| PI * v / d).filter(|&x| x < 1.0);
    out.push(entry("apriori_tan_pi", Quantity::Tan, xpi.map(tan_half_arcsin), inp.unperturbed.as_ref()));
    out.push(entry(
        "apriori_tan_post_gap",
        Quantity::Tan,
        post_gap.and(small).and(d).map(|d| v / (d * d - 3.0 * v * v).sqrt()),
        post_gap.as_ref(),
    ));
    out.push(entry(
        "apriori_tan_post_generic",
        Quantity::Tan,
        small.and(d).map(|d| FRAC_PI_2 * v / (d * d - 4.0 * v * v).sqrt()),
        inp.unperturbed.as_ref(),
    ));
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundRecord {
    pub bound_id: &'static str,
    pub quantity: Quantity,
    pub applicable: bool,
    pub lhs: f64,
    pub rhs: Option<f64>,
    /// `rhs - lhs` for applicable bounds.
    pub slack: Option<f64>,
    pub disposition_used: Option<String>,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub records: Vec<BoundRecord>,
    pub d: f64,
    pub delta0: f64,
    pub delta1: f64,
    pub delta_hat: f64,
    pub norm_v: f64,
    pub unperturbed_disposition: Option<String>,
    pub perturbed_disposition: Option<String>,
}

impl BoundReport {
    pub fn all_hold(&self) -> bool {
        self.records.iter().all(|r| r.holds)
    }

    /// Smallest slack over applicable bounds; `+inf` when none applies.
    pub fn min_slack(&self) -> f64 {
        self.records.iter().filter_map(|r| r.slack).fold(f64::INFINITY, f64::min)
    }

    pub fn record(&self, id: &str) -> Option<&BoundRecord> {
        self.records.iter().find(|r| r.bound_id == id)
    }
}

/// Gathers distances and dispositions from a solved instance.
pub fn bound_inputs(inst: &BlockInstance, sol: &RiccatiSolution, tol: &Tolerances) -> BoundInputs {
    let s0 = inst.sigma0();
    let s1 = inst.sigma1();
    let p0 = &sol.sigma0_prime;
    let p1 = &sol.sigma1_prime;
    let classify = |a: &[f64], b: &[f64]| classify_disposition(a, b, tol.same_point).ok();
    BoundInputs {
        norm_v: inst.norm_v(),
        d: set_distance(&s0, &s1),
        delta: [set_distance(&s0, p1), set_distance(&s1, p0)],
        delta_hat: set_distance(p0, p1),
        unperturbed: classify(&s0, &s1),
        semi: [classify(&s0, p1), classify(&s1, p0)],
        perturbed: classify(p0, p1),
    }
}

/// Evaluates the catalogue on a solved instance against the measured angles.
pub fn check_bounds(
    inst: &BlockInstance,
    sol: &RiccatiSolution,
    angles: &AngleReport,
    tol: &Tolerances,
) -> Result<BoundReport> {
    let inputs = bound_inputs(inst, sol, tol);
    let records = bound_catalogue(&inputs)
        .into_iter()
        .map(|e| {
            let lhs = match e.quantity {
                Quantity::Tan => angles.norm_tan,
                Quantity::Sin2 => angles.norm_sin2,
                Quantity::Tan2 => angles.norm_tan2,
                Quantity::NormK => sol.norm_k,
            };
            let slack = e.rhs.map(|r| r - lhs);
            BoundRecord {
                bound_id: e.id,
                quantity: e.quantity,
                applicable: e.rhs.is_some(),
                lhs,
                rhs: e.rhs,
                slack,
                disposition_used: e.disposition_used,
                holds: slack.is_none_or(|s| s >= -tol.slack),
            }
        })
        .collect();
    Ok(BoundReport {
        records,
        d: inputs.d,
        delta0: inputs.delta[0],
        delta1: inputs.delta[1],
        delta_hat: inputs.delta_hat,
        norm_v: inputs.norm_v,
        unperturbed_disposition: inputs.unperturbed.map(|d| d.kind.to_string()),
        perturbed_disposition: inputs.perturbed.map(|d| d.kind.to_string()),
    })
}

/// Sufficient conditions for a similarity to a self-adjoint operator:
/// `v < d/pi`, or `v < d/2` with a finite sum of inverse separating-gap lengths.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TsuffRecord {
    pub cond_i: bool,
    pub cond_ii: bool,
    pub gap_sum: f64,
}

pub fn tsuff_check_sets(sigma0: &[f64], sigma1: &[f64], norm_v: f64, tol: &Tolerances) -> Result<TsuffRecord> {
    let gaps = enumerate_separating_gaps(sigma0, sigma1, tol.same_point)?;
    let d = set_distance(sigma0, sigma1);
    let gap_sum = gaps.iter().map(|(a, b)| 1.0 / (b - a)).sum::<f64>();
    Ok(TsuffRecord { cond_i: norm_v < d / PI, cond_ii: norm_v < d / 2.0 && gap_sum.is_finite(), gap_sum })
}

pub fn tsuff_check(inst: &BlockInstance, tol: &Tolerances) -> Result<TsuffRecord> {
    tsuff_check_sets(&inst.sigma0(), &inst.sigma1(), inst.norm_v(), tol)
}

/// Lower bound `sqrt(d^2 - 4v^2)` for the separation of the perturbed components.
pub fn apriori_deltahat_lower(norm_v: f64, d: f64) -> Result<f64> {
    if !(2.0 * norm_v <= d) {
        return Err(Error::TooLargePerturbation(format!("||V|| = {norm_v} exceeds d/2 = {}", d / 2.0)));
    }
    Ok((d * d - 4.0 * norm_v * norm_v).max(0.0).sqrt())
}
