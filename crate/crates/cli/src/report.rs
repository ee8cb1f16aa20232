use std::fmt::Write as _;

use hk_core::bounds::{BoundEntry, BoundInputs, RefEntry};
use hk_core::estimate::{EstimateResult, Fraction, Method};
use hk_core::frobenius::{HKSample, SampleTiming, SplittingSample};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub engine_version: String,
    pub cache_hits: u64,
    pub cache_misses: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Multiplicity {
    /// `e(I)`, the stable `d`-th difference of `n -> λ(R/I^n)`.
    pub value: u64,
    /// Least-squares estimate on the tail of the same series.
    pub fitted: f64,
    pub fit_residual: f64,
    pub powers: Vec<(u32, u64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FsigSummary {
    pub sop: String,
    pub samples: Vec<SplittingSample>,
    pub s: f64,
    pub s_rational: Option<Fraction>,
    pub method: Method,
    /// `s` from the reference table, when the ring is recognized.
    pub reference: Option<Fraction>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub problem: String,
    pub dimension: usize,
    pub embedding_dimension: usize,
    pub series: Vec<HKSample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<EstimateResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<Multiplicity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_inputs: Option<BoundInputs>,
    #[serde(default)]
    pub bounds: Vec<BoundEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<RefEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fsig: Option<FsigSummary>,
    #[serde(default)]
    pub notes: Vec<String>,
    pub timing: Vec<SampleTiming>,
    pub provenance: Provenance,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    /// The report with timing and cache counters cleared: the part that is
    /// a function of the input alone.
    pub fn deterministic(&self) -> Report {
        let mut r = self.clone();
        r.timing.clear();
        r.provenance.cache_hits = 0;
        r.provenance.cache_misses = 0;
        r
    }

    /// `e,q,colength` rows (or `e,q,a_q` for F-signature reports).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.fsig {
            Some(f) => {
                out.push_str("e,q,a_q\n");
                for s in &f.samples {
                    let _ = writeln!(out, "{},{},{}", s.e, s.q, s.a_q);
                }
            }
            None => {
                out.push_str("e,q,colength\n");
                for s in &self.series {
                    let _ = writeln!(out, "{},{},{}", s.e, s.q, s.colength);
                }
            }
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.problem);
        let _ = writeln!(
            out,
            "dimension {}, embedding dimension {}",
            self.dimension, self.embedding_dimension
        );
        if !self.series.is_empty() {
            let d = self.dimension as i32;
            let _ = writeln!(out, "\n{:>3} {:>12} {:>14} {:>12}", "e", "q", "colength", "colength/q^d");
            for s in &self.series {
                let _ = writeln!(
                    out,
                    "{:>3} {:>12} {:>14} {:>12.6}",
                    s.e,
                    s.q,
                    s.colength,
                    s.colength as f64 / (s.q as f64).powi(d)
                );
            }
        }
        if let Some(est) = &self.estimate {
            let exact = est.alpha_rational.map(|f| format!(" = {f}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "\ne_HK ~ {:.6}{exact}  ({}, residual {:.3e})",
                est.alpha, est.method, est.residual
            );
        }
        if let Some(m) = &self.multiplicity {
            let _ = writeln!(out, "e = {} (fit {:.4})", m.value, m.fitted);
        }
        if let Some(r) = &self.reference {
            let s = r.s.map(|s| format!(", s = {s}")).unwrap_or_default();
            let _ = writeln!(out, "reference {}: e_HK = {}{s}", r.id, r.e_hk);
        }
        if let Some(f) = &self.fsig {
            let _ = writeln!(out, "\nsop ({})", f.sop);
            let _ = writeln!(out, "{:>3} {:>12} {:>14}", "e", "q", "a_q");
            for s in &f.samples {
                let _ = writeln!(out, "{:>3} {:>12} {:>14}", s.e, s.q, s.a_q);
            }
            let exact = f.s_rational.map(|x| format!(" = {x}")).unwrap_or_default();
            let _ = writeln!(out, "s ~ {:.6}{exact}  ({})", f.s, f.method);
        }
        if !self.bounds.is_empty() {
            let _ = writeln!(out, "\n{}", bounds_table(&self.bounds));
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

pub fn bounds_table(entries: &[BoundEntry]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<28} {:>12} {:>10}  {:<10} note", "bound", "value", "exact", "status");
    for b in entries {
        let (value, exact) = match &b.value {
            Some(v) => (format!("{:.6}", v.value), v.exact.map(|f| f.to_string()).unwrap_or_default()),
            None => (String::new(), String::new()),
        };
        let status = match (b.applicable, b.informational, b.satisfied) {
            (false, _, _) => "n/a",
            (true, true, Some(true)) => "info:ok",
            (true, true, Some(false)) => "info:below",
            (true, false, Some(true)) => "ok",
            (true, false, Some(false)) => "VIOLATED",
            (true, _, None) => "",
        };
        let _ = writeln!(out, "{:<28} {:>12} {:>10}  {:<10} {}", b.name, value, exact, status, b.note);
    }
    out.trim_end().to_string()
}
