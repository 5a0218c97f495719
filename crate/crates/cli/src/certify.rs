//! The non-perversity certificate: rank conditions on the intersection form
//! and the interval condition on the constrained Deodhar expansion.

use std::collections::BTreeMap;
use std::time::Instant;

use hecke_cert::coxeter::Permutation;
use hecke_cert::demazure::{intersection_vector, DemazureExpr, IntersectionFormReport};
use hecke_cert::spherical::{expansion_from_tally, interval_condition_check};
use hecke_cert::subexpr::tally;
use hecke_cert::IntLaurent;
use serde::Serialize;

use crate::word_data::{census, Census, Instance};
use crate::CliError;

/// Failing cosets listed in full up to this many.
pub const MAX_LISTED_FAILURES: usize = 100;

pub const SKIPPED_NO_WORD: &str = "skipped: no word data";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordSummary {
    pub n: usize,
    pub length: usize,
    pub free_positions: usize,
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
    pub x: Permutation,
    pub w: Permutation,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalFailure {
    pub coset: Permutation,
    pub coefficient: IntLaurent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalSummary {
    /// `"pass"`, `"fail"` or [`SKIPPED_NO_WORD`]
    pub status: String,
    pub subexpressions: Option<u64>,
    pub endpoints: Option<usize>,
    pub cosets_checked: Option<usize>,
    pub failures_total: usize,
    pub failures: Vec<IntervalFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub intersection_form: IntersectionFormReport,
    /// rank 1 over `Q` and rank 0 over `F_p`
    pub rank_condition: bool,
    pub word: Option<WordSummary>,
    pub census: Option<Census>,
    /// Defect counts of the allowed subexpressions ending in the coset of `x`.
    pub histogram_at_x: Option<BTreeMap<i64, u64>>,
    pub interval: IntervalSummary,
    pub verdict: bool,
}

/// Wall-clock timings in milliseconds, reported apart from the payload.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Timing {
    pub threads: usize,
    pub intersection_form_ms: u128,
    pub enumeration_ms: u128,
    pub interval_ms: u128,
    pub total_ms: u128,
}

pub fn certify(
    expr: &DemazureExpr,
    prime: u64,
    instance: Option<&Instance>,
    threads: usize,
) -> Result<(CertificateReport, Timing), CliError> {
    let start = Instant::now();
    let mut timing = Timing {
        threads,
        ..Timing::default()
    };

    let form = intersection_vector(expr, prime)?;
    let rank_condition = form.rank_over_q == 1 && form.rank_over_p == 0;
    timing.intersection_form_ms = start.elapsed().as_millis();

    let Some(inst) = instance else {
        timing.total_ms = start.elapsed().as_millis();
        let interval = IntervalSummary {
            status: SKIPPED_NO_WORD.into(),
            subexpressions: None,
            endpoints: None,
            cosets_checked: None,
            failures_total: 0,
            failures: Vec::new(),
        };
        let report = CertificateReport {
            intersection_form: form,
            rank_condition,
            word: None,
            census: None,
            histogram_at_x: None,
            interval,
            verdict: false,
        };
        return Ok((report, timing));
    };

    let t0 = Instant::now();
    let t = tally(&inst.word, &inst.a, &inst.constraint, threads)?;
    if t.visited() as u128 != inst.constraint.count() {
        return Err(CliError::Internal(format!(
            "visited {} subexpressions, expected {}",
            t.visited(),
            inst.constraint.count()
        )));
    }
    timing.enumeration_ms = t0.elapsed().as_millis();

    let t1 = Instant::now();
    let expansion = expansion_from_tally(&t, &inst.a);
    let report = interval_condition_check(&expansion, &inst.x, &inst.w)?;
    timing.interval_ms = t1.elapsed().as_millis();

    let failures: Vec<IntervalFailure> = report
        .failures()
        .map(|e| IntervalFailure {
            coset: e.coset.clone(),
            coefficient: e.coefficient.clone(),
        })
        .collect();
    let interval = IntervalSummary {
        status: if report.pass { "pass" } else { "fail" }.into(),
        subexpressions: Some(t.visited()),
        endpoints: Some(expansion.terms().count()),
        cosets_checked: Some(report.entries.len()),
        failures_total: failures.len(),
        failures: failures.into_iter().take(MAX_LISTED_FAILURES).collect(),
    };
    let summary = WordSummary {
        n: inst.word.rank(),
        length: inst.word.len(),
        free_positions: inst.constraint.free_positions().len(),
        a: inst.a.indices().collect(),
        b: inst.b.indices().collect(),
        x: inst.x.clone(),
        w: inst.w.clone(),
        degree: inst.degree,
    };
    let verdict = rank_condition && report.pass;
    timing.total_ms = start.elapsed().as_millis();
    let report = CertificateReport {
        intersection_form: form,
        rank_condition,
        word: Some(summary),
        census: Some(census(inst)),
        histogram_at_x: Some(t.histogram(Some(&inst.x))),
        interval,
        verdict,
    };
    Ok((report, timing))
}
