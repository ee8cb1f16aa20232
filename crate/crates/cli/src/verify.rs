//! Runs every fixture and compares it with its expected values.

use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use hk_core::bounds::lookup;
use hk_core::frobenius::DEFAULT_SAMPLE_TIMEOUT;
use hk_core::polyfield::OrderKind;
use hk_core::presentation::parse;

use crate::cache::FileCache;
use crate::fixture::{self, parse_fraction, Fixture};
use crate::pipeline::{compute_problem, fsig_problem, parse_problem, CliError, RunOptions};
use crate::report::Report;

/// Bounds that a regular ring must fall below.
const NON_REGULAR_BOUNDS: [&str; 3] = ["blickle-enescu", "aberbach-enescu", "celikbas-dao-huneke-zhang"];

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub fixture: String,
    pub name: String,
    /// `None` for report-only lines.
    pub passed: Option<bool>,
    pub detail: String,
}

impl Check {
    fn new(fixture: &str, name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            fixture: fixture.into(),
            name: name.into(),
            passed: Some(passed),
            detail: detail.into(),
        }
    }

    pub fn line(&self) -> String {
        let tag = match self.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "INFO",
        };
        format!("{tag} {:<22} {:<14} {}", self.fixture, self.name, self.detail)
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub filter: Option<String>,
    pub budget: Option<Duration>,
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct VerifySummary {
    pub checks: Vec<Check>,
}

impl VerifySummary {
    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.passed == Some(false)).collect()
    }

    pub fn into_result(self) -> Result<VerifySummary, CliError> {
        let failed = self.failures();
        if failed.is_empty() {
            return Ok(self);
        }
        let mut ids: Vec<&str> = failed.iter().map(|c| c.fixture.as_str()).collect();
        ids.dedup();
        Err(CliError::Verify(format!("{} check(s) failed in: {}", failed.len(), ids.join(", "))))
    }
}

/// Runs the fixtures in `dir`, writing one line per check to `out`.
pub fn verify(dir: &Path, opts: &VerifyOptions, cache: Option<&FileCache>, out: &mut dyn Write) -> Result<VerifySummary, CliError> {
    let start = Instant::now();
    let paths = fixture::list_dir(dir).map_err(CliError::Validation)?;
    let mut summary = VerifySummary::default();
    let mut selected = 0;
    for path in &paths {
        let id = fixture::fixture_id(path);
        let fx = match fixture::load(path) {
            Ok(f) => f,
            Err(err) => {
                if opts.filter.as_deref().is_none_or(|f| id.contains(f)) {
                    selected += 1;
                    emit(&mut summary, out, Check::new(&id, "load", false, err));
                }
                continue;
            }
        };
        if let Some(f) = &opts.filter {
            if !fx.matches(f) {
                continue;
            }
        }
        selected += 1;
        let remaining = match opts.budget {
            Some(b) => match b.checked_sub(start.elapsed()) {
                Some(r) if !r.is_zero() => Some(r),
                _ => {
                    emit(
                        &mut summary,
                        out,
                        Check::new(&id, "budget", false, format!("budget of {}s exhausted", b.as_secs_f64())),
                    );
                    continue;
                }
            },
            None => None,
        };
        let run = RunOptions {
            e_max: Some(fx.expected.e_max),
            order: OrderKind::DegRevLex,
            workers: opts.workers,
            timeout: Some(remaining.map_or(DEFAULT_SAMPLE_TIMEOUT, |r| r.min(DEFAULT_SAMPLE_TIMEOUT))),
            ..RunOptions::default()
        };
        for check in check_fixture(&fx, &run, cache) {
            emit(&mut summary, out, check);
        }
    }
    if selected == 0 {
        return Err(CliError::Validation(format!("no fixture in {} matches the filter", dir.display())));
    }
    let failed = summary.failures().len();
    let _ = writeln!(
        out,
        "{} checks, {} failed, {:.1}s",
        summary.checks.iter().filter(|c| c.passed.is_some()).count(),
        failed,
        start.elapsed().as_secs_f64()
    );
    Ok(summary)
}

fn emit(summary: &mut VerifySummary, out: &mut dyn Write, check: Check) {
    let _ = writeln!(out, "{}", check.line());
    summary.checks.push(check);
}

/// All checks for one fixture.
pub fn check_fixture(fx: &Fixture, run: &RunOptions, cache: Option<&FileCache>) -> Vec<Check> {
    let id = fx.id.as_str();
    let exp = &fx.expected;
    let mut out = Vec::new();

    let prob = match parse_problem(&fx.text, run.order) {
        Ok(p) => p,
        Err(err) => return vec![Check::new(id, "parse", false, err.to_string())],
    };
    let canonical = prob.to_string();
    let round = parse(&canonical).map(|p| p.to_string());
    out.push(Check::new(
        id,
        "roundtrip",
        round.as_deref() == Ok(canonical.as_str()),
        canonical.clone(),
    ));

    let report = match compute_problem(&prob, run, cache) {
        Ok(r) => r,
        Err(err) => {
            out.push(Check::new(id, "compute", false, err.to_string()));
            return out;
        }
    };
    out.push(Check::new(
        id,
        "dimension",
        report.dimension == exp.dimension,
        format!("{} (expected {})", report.dimension, exp.dimension),
    ));
    let got: Vec<u64> = report.series.iter().map(|s| s.colength).collect();
    if let Some(want) = &exp.colengths {
        out.push(Check::new(id, "colengths", &got == want, format!("{got:?}")));
    }
    out.push(kunz_check(id, &report, exp.regular));
    if let Some(m) = exp.multiplicity {
        let value = report.multiplicity.as_ref().map(|m| m.value);
        out.push(Check::new(
            id,
            "multiplicity",
            value == Some(m),
            format!("{value:?} (expected {m})"),
        ));
    }

    let est = report.estimate.as_ref().expect("compute reports carry an estimate");
    if exp.report_only {
        let conj = exp.conjectured.map(|c| format!(", conjectured {c:.6}")).unwrap_or_default();
        out.push(Check {
            fixture: id.into(),
            name: "e_hk".into(),
            passed: None,
            detail: format!("{:.6} ({}){conj}", est.alpha, est.method),
        });
        return out;
    }

    if let Some(want) = exp.e_hk.as_deref() {
        match parse_fraction(want) {
            Some(w) => {
                let err = (est.alpha - w.value()).abs();
                let tol = exp.tolerance.max(1e-12);
                out.push(Check::new(
                    id,
                    "e_hk",
                    err <= tol,
                    format!("{:.6} vs {w} (|diff| {err:.2e}, tol {:.0e})", est.alpha, exp.tolerance),
                ));
                if exp.exact {
                    let got = est.alpha_rational;
                    out.push(Check::new(
                        id,
                        "rational",
                        got == Some(w),
                        format!("{} vs {w}", got.map_or("none".into(), |f| f.to_string())),
                    ));
                }
            }
            None => out.push(Check::new(id, "e_hk", false, format!("expected value `{want}` is not a fraction"))),
        }
    }

    if let Some(r) = &exp.reference {
        let table = lookup(r);
        let table_ok = match (&table, exp.e_hk.as_deref().and_then(parse_fraction)) {
            (Some(t), Some(w)) => t.e_hk == w,
            _ => false,
        };
        let recognized = report.reference.as_ref().map(|x| x.id.as_str());
        out.push(Check::new(
            id,
            "reference",
            table_ok && recognized == Some(r.as_str()),
            format!(
                "table {} = {}, recognized as {}",
                r,
                table.map_or("?".into(), |t| t.e_hk.to_string()),
                recognized.unwrap_or("nothing")
            ),
        ));
    }

    if exp.regular {
        let above: Vec<String> = report
            .bounds
            .iter()
            .filter(|b| NON_REGULAR_BOUNDS.contains(&b.name.as_str()))
            .filter_map(|b| b.value.as_ref().filter(|v| est.alpha >= v.value).map(|_| b.name.clone()))
            .collect();
        out.push(Check::new(
            id,
            "bounds",
            above.is_empty() && !report.bounds.is_empty(),
            if above.is_empty() {
                "below every non-regular bound".into()
            } else {
                format!("not below: {}", above.join(", "))
            },
        ));
    } else {
        let violated: Vec<String> = report.bounds.iter().filter(|b| !b.ok()).map(|b| b.name.clone()).collect();
        let applied = report.bounds.iter().filter(|b| b.applicable && !b.informational).count();
        out.push(Check::new(
            id,
            "bounds",
            violated.is_empty() && applied > 0,
            if violated.is_empty() {
                format!("{applied} applicable bounds hold")
            } else {
                format!("violated: {}", violated.join(", "))
            },
        ));
    }

    if let Some(f) = &exp.fsig {
        let frun = RunOptions {
            e_max: Some(f.e_max),
            ..run.clone()
        };
        match (fsig_problem(&prob, &f.sop, &frun, cache), parse_fraction(&f.s)) {
            (Ok(r), Some(want)) => {
                let s = r.fsig.as_ref().expect("fsig report").s;
                let err = (s - want.value()).abs();
                out.push(Check::new(
                    id,
                    "fsig",
                    err <= f.tolerance.max(1e-12),
                    format!("{s:.6} vs {want} (tol {:.0e})", f.tolerance),
                ));
            }
            (Err(err), _) => out.push(Check::new(id, "fsig", false, err.to_string())),
            (_, None) => out.push(Check::new(id, "fsig", false, format!("expected value `{}` is not a fraction", f.s))),
        }
    }
    out
}

/// `λ(R/m^[q]) >= q^d` at every sample, with equality everywhere exactly
/// when the ring is regular.
fn kunz_check(id: &str, report: &Report, regular: bool) -> Check {
    let d = report.dimension as u32;
    let mut equal = true;
    let mut below = Vec::new();
    for s in &report.series {
        let qd = (s.q as u128).pow(d);
        let l = s.colength as u128;
        if l < qd {
            below.push(s.e);
        }
        if s.e >= 1 && l != qd {
            equal = false;
        }
    }
    let passed = below.is_empty() && equal == regular;
    let detail = match (below.is_empty(), equal) {
        (false, _) => format!("below q^d at e = {below:?}"),
        (true, true) => "colength = q^d at every e".to_string(),
        (true, false) => "colength > q^d".to_string(),
    };
    Check::new(id, "kunz", passed, detail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::corpus_dir;
    use std::fs;

    #[test]
    fn filter_selects_kunz_fixtures() {
        let mut out = Vec::new();
        let opts = VerifyOptions {
            filter: Some("kunz".into()),
            ..VerifyOptions::default()
        };
        let summary = verify(&corpus_dir(), &opts, None, &mut out).unwrap();
        assert!(summary.failures().is_empty(), "{}", String::from_utf8_lossy(&out));
        assert!(summary.checks.iter().all(|c| c.fixture.starts_with("kunz_")));
        assert!(summary.checks.iter().any(|c| c.name == "kunz"));
    }

    #[test]
    fn corrupted_value_names_fixture() {
        let dir = tempfile::tempdir().unwrap();
        let src = corpus_dir();
        for ext in ["hk", "json"] {
            fs::copy(src.join(format!("ade_a1_p5.{ext}")), dir.path().join(format!("ade_a1_p5.{ext}"))).unwrap();
        }
        let json = dir.path().join("ade_a1_p5.json");
        let text = fs::read_to_string(&json).unwrap().replace("\"3/2\"", "\"8/5\"");
        fs::write(&json, text).unwrap();
        let mut out = Vec::new();
        let err = verify(dir.path(), &VerifyOptions::default(), None, &mut out)
            .unwrap()
            .into_result()
            .unwrap_err();
        assert_eq!(err.exit_code(), 4);
        assert!(err.to_string().contains("ade_a1_p5"), "{err}");
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("FAIL ade_a1_p5"), "{text}");
    }

    #[test]
    fn unreadable_expectation_fails() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("broken.hk"), "p=5; vars=x; quotient=[]; ideal=[x];").unwrap();
        fs::write(dir.path().join("broken.json"), "{").unwrap();
        let mut out = Vec::new();
        let summary = verify(dir.path(), &VerifyOptions::default(), None, &mut out).unwrap();
        assert_eq!(summary.failures().len(), 1);
        assert_eq!(summary.failures()[0].name, "load");
    }

    #[test]
    fn exhausted_budget_fails() {
        let mut out = Vec::new();
        let opts = VerifyOptions {
            filter: Some("kunz_d1".into()),
            budget: Some(Duration::ZERO),
            workers: None,
        };
        let summary = verify(&corpus_dir(), &opts, None, &mut out).unwrap();
        assert!(summary.failures().iter().all(|c| c.name == "budget"));
        assert_eq!(summary.failures().len(), 2);
    }
}
