//! Typed against untyped conversion on generated well-typed queries.

use std::fmt::Write as _;

use serde::Serialize;

use super::{shrink, Gen, GenConfig, Instance};
use crate::conv_typed::conv_tm_in;
use crate::conv_untyped::uconv_in;
use crate::session::{Session, VerdictKind};
use crate::syntax::{Context, Term};

pub const DIFF_FUEL: u64 = 100_000;

/// Verdicts and fuel consumption of one query under both algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiffRecord {
    pub idx: usize,
    pub typed: VerdictKind,
    pub untyped: VerdictKind,
    pub fuel_typed: u64,
    pub fuel_untyped: u64,
}

impl DiffRecord {
    pub fn exhausted(&self) -> bool {
        self.typed == VerdictKind::OutOfFuel || self.untyped == VerdictKind::OutOfFuel
    }

    pub fn agrees(&self) -> bool {
        !self.exhausted() && self.typed == self.untyped
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    /// The query, minimised.
    pub query: Instance,
    /// The query as generated.
    pub original: Instance,
    pub typed: VerdictKind,
    pub untyped: VerdictKind,
    /// Configuration seed and stream that regenerate the query.
    pub seed: u64,
    pub stream: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffReport {
    pub total: usize,
    pub agreements: usize,
    pub disagreements: Vec<Disagreement>,
    pub fuel_exhausted: usize,
    /// One record per query, in index order.
    pub records: Vec<DiffRecord>,
}

#[derive(Serialize)]
struct Summary {
    total: usize,
    agreements: usize,
    disagreements: usize,
    #[serde(rename = "fuelExhausted")]
    fuel_exhausted: usize,
}

impl DiffReport {
    pub fn exhausted_rate(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.fuel_exhausted as f64 / self.total as f64
        }
    }

    /// `idx, verdictTyped, verdictUntyped, fuelUsedTyped, fuelUsedUntyped`
    /// per query, then a JSON summary line.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            writeln!(
                out,
                "{}, {}, {}, {}, {}",
                r.idx, r.typed, r.untyped, r.fuel_typed, r.fuel_untyped
            )
            .expect("writing to a string");
        }
        let summary = Summary {
            total: self.total,
            agreements: self.agreements,
            disagreements: self.disagreements.len(),
            fuel_exhausted: self.fuel_exhausted,
        };
        out.push_str(&serde_json::to_string(&summary).expect("plain counters serialize"));
        out.push('\n');
        out
    }
}

/// Runs both algorithms on `t == u : a` in `g`, each with `fuel`.
pub fn diff_one(g: &Context, a: &Term, t: &Term, u: &Term, fuel: u64) -> DiffRecord {
    let mut s = Session::new(fuel);
    let typed = conv_tm_in(&mut s, g, a, t, u).kind();
    let fuel_typed = s.fuel_used();
    let mut s = Session::new(fuel);
    let untyped = uconv_in(&mut s, t, u).kind();
    let fuel_untyped = s.fuel_used();
    DiffRecord {
        idx: 0,
        typed,
        untyped,
        fuel_typed,
        fuel_untyped,
    }
}

fn diff_instance(q: &Instance) -> DiffRecord {
    diff_one(&q.ctx, &q.ty, &q.terms[0], &q.terms[1], DIFF_FUEL)
}

/// Generates `n` conversion queries and compares the two algorithms on each.
/// Query `i` is drawn from stream `i` of `cfg.seed`.
pub fn diff_run(n: usize, cfg: &GenConfig) -> DiffReport {
    let mut report = DiffReport {
        total: n,
        ..DiffReport::default()
    };
    for idx in 0..n {
        let q = Gen::new(cfg, idx as u64).conv_query();
        let mut r = diff_instance(&q);
        r.idx = idx;
        report.records.push(r);
        if r.exhausted() {
            report.fuel_exhausted += 1;
        } else if r.agrees() {
            report.agreements += 1;
        } else {
            let min = shrink(&q, &mut |c| {
                let r = diff_instance(c);
                !r.exhausted() && !r.agrees()
            });
            let m = diff_instance(&min);
            report.disagreements.push(Disagreement {
                query: min,
                original: q,
                typed: m.typed,
                untyped: m.untyped,
                seed: cfg.seed,
                stream: idx as u64,
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_at_function_type_agrees() {
        let g = Context::from_entries(vec![Term::arrow(Term::Nat, Term::Nat)]);
        let a = Term::arrow(Term::Nat, Term::Nat);
        let r = diff_one(&g, &a, &Term::Var(0), &Term::Var(0), DIFF_FUEL);
        assert_eq!((r.typed, r.untyped), (VerdictKind::Accept, VerdictKind::Accept));
        // η-expansion costs the typed side extra steps.
        assert!(r.fuel_typed > r.fuel_untyped);
    }

    #[test]
    fn zero_against_one_agrees_on_reject() {
        let g = Context::new();
        let r = diff_one(&g, &Term::Nat, &Term::Zero, &Term::succ(Term::Zero), DIFF_FUEL);
        assert_eq!((r.typed, r.untyped), (VerdictKind::Reject, VerdictKind::Reject));
    }

    #[test]
    fn serialization_lists_records_then_summary() {
        let report = diff_run(3, &GenConfig::default());
        let text = report.serialize();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("0, "));
        assert_eq!(lines[0].split(", ").count(), 5);
        let summary: serde_json::Value = serde_json::from_str(lines[3]).unwrap();
        assert_eq!(summary["total"], 3);
        assert!(summary.get("fuelExhausted").is_some());
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = GenConfig::with_seed(11);
        assert_eq!(diff_run(20, &cfg), diff_run(20, &cfg));
    }
}
