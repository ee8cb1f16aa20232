//! The computations behind the subcommands, returning reports or errors
//! tagged with the exit code they map to.

use std::sync::Arc;
use std::time::Duration;

use hk_core::bounds::{closed_form_bounds, reference_values, BoundInputs, BoundReport, RefEntry};
use hk_core::estimate::{
    estimate_ehk, estimate_fsignature, estimate_hs_multiplicity, rational_reconstruct, EstimateResult, DEFAULT_MAX_DEN,
};
use hk_core::frobenius::{
    default_e_max, hk_series, ordinary_power_series, splitting_series, FrobeniusError, GorensteinSop, SeriesOptions, DEFAULT_MAX_COLENGTH,
    DEFAULT_SAMPLE_TIMEOUT,
};
use hk_core::groebner::{variables, GroebnerBasis};
use hk_core::polyfield::OrderKind;
use hk_core::presentation::{parse_with_order, validate_origin_primary, OriginError, ParsedProblem, RingPresentation};
use hk_core::ENGINE_VERSION;
use thiserror::Error;

use crate::cache::FileCache;
use crate::report::{FsigSummary, Multiplicity, Provenance, Report};

/// Slack allowed between an estimate and a lower bound it must exceed.
pub const BOUND_SLACK: f64 = 1e-2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("{0}")]
    Verify(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Verify(_) => 4,
        }
    }
}

impl From<FrobeniusError> for CliError {
    fn from(err: FrobeniusError) -> Self {
        if err.is_resource() || err == FrobeniusError::Cancelled {
            CliError::Resource(err.to_string())
        } else {
            CliError::Validation(err.to_string())
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub e_max: Option<u32>,
    pub order: OrderKind,
    pub workers: Option<usize>,
    pub max_colength: u64,
    pub timeout: Option<Duration>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            e_max: None,
            order: OrderKind::DegRevLex,
            workers: None,
            max_colength: DEFAULT_MAX_COLENGTH,
            timeout: Some(DEFAULT_SAMPLE_TIMEOUT),
        }
    }
}

impl RunOptions {
    fn series<'a>(&self, cache: Option<&'a FileCache>) -> SeriesOptions<'a> {
        SeriesOptions {
            max_colength: self.max_colength,
            timeout: self.timeout,
            workers: self.workers,
            cache: cache.map(|c| c as _),
        }
    }
}

pub fn parse_problem(text: &str, order: OrderKind) -> Result<ParsedProblem, CliError> {
    parse_with_order(text, order).map_err(|e| CliError::Parse(e.to_string()))
}

fn provenance(cache: Option<&FileCache>) -> Provenance {
    Provenance {
        engine_version: ENGINE_VERSION.to_string(),
        cache_hits: cache.map_or(0, FileCache::hits),
        cache_misses: cache.map_or(0, FileCache::misses),
    }
}

/// Whether `I + defining` contains every variable.
pub fn is_maximal(prob: &ParsedProblem) -> bool {
    let ring = prob.ring.ring();
    let gb = GroebnerBasis::new(ring, &prob.ideal.with_defining());
    variables(ring).iter().all(|x| gb.contains(x))
}

/// The reference entry whose equation is the defining equation of `ring`
/// up to renaming variables in order, when the ideal is the maximal ideal.
pub fn recognize(prob: &ParsedProblem) -> Option<RefEntry> {
    let ring = &prob.ring;
    if !is_maximal(prob) {
        return None;
    }
    let names = match ring.nvars() {
        3 => "x,y,z",
        4 => "X,Y,Z,W",
        _ => return None,
    };
    let ours = canonical_defining(ring);
    reference_values().into_iter().find(|r| {
        if ring.characteristic() < r.min_p {
            return false;
        }
        let text = format!(
            "p={}; vars={names}; quotient=[{}]; ideal=[{names}]",
            ring.characteristic(),
            r.equation
        );
        parse_with_order(&text, ring.order_kind()).is_ok_and(|p| canonical_defining(&p.ring) == ours)
    })
}

fn canonical_defining(ring: &RingPresentation) -> Vec<String> {
    let mut out: Vec<String> = ring.defining().iter().map(|f| f.monic().to_string()).collect();
    out.sort();
    out
}

/// `e(I)`: computes `λ(R/I^n)` until the `d`-th difference has been
/// constant three times in a row.
pub fn multiplicity(prob: &ParsedProblem, opts: &SeriesOptions<'_>) -> Result<Multiplicity, CliError> {
    let d = prob.ring.dimension();
    let mut n_max = d as u32 + 4;
    loop {
        let powers = ordinary_power_series(prob, n_max, opts)?;
        let mut diffs: Vec<i128> = std::iter::once(0).chain(powers.iter().map(|&(_, l)| l as i128)).collect();
        for _ in 0..d {
            diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
        }
        let tail = &diffs[diffs.len() - 3..];
        if tail.iter().all(|&x| x == tail[0]) && tail[0] > 0 {
            let (fitted, fit_residual) = estimate_hs_multiplicity(&powers, d).map_err(|e| CliError::Validation(e.to_string()))?;
            return Ok(Multiplicity {
                value: tail[0] as u64,
                fitted,
                fit_residual,
                powers,
            });
        }
        if n_max >= 32 {
            return Err(CliError::Resource(format!("Hilbert-Samuel function not stable by n = {n_max}")));
        }
        n_max *= 2;
    }
}

pub fn bound_report(inputs: BoundInputs, e_hk: Option<f64>) -> BoundReport {
    let mut report = closed_form_bounds(inputs);
    if let Some(a) = e_hk {
        report.evaluate(a, BOUND_SLACK);
    }
    report
}

/// Runs `sample` to the requested depth, or to the default depth for `d`
/// lowered past any `e` whose colength exceeds the cap. The note says where
/// a default depth was cut short.
fn sample_to_depth<T>(
    requested: Option<u32>,
    d: usize,
    sample: impl Fn(u32) -> Result<T, FrobeniusError>,
) -> Result<(T, Option<String>), CliError> {
    let Some(e_max) = requested else {
        let mut e_max = default_e_max(d);
        let mut note = None;
        loop {
            match sample(e_max) {
                Err(FrobeniusError::ColengthCap { e, cap, .. }) if e >= 3 => {
                    e_max = e - 1;
                    note = Some(format!("default depth lowered to e={e_max}: e={e} exceeds the colength cap {cap}"));
                }
                other => return Ok((other?, note)),
            }
        }
    };
    if e_max == 0 {
        return Err(CliError::Validation("e_max must be at least 1".into()));
    }
    Ok((sample(e_max)?, None))
}

pub fn compute(text: &str, opts: &RunOptions, cache: Option<&FileCache>) -> Result<Report, CliError> {
    let prob = parse_problem(text, opts.order)?;
    compute_problem(&prob, opts, cache)
}

pub fn compute_problem(prob: &ParsedProblem, opts: &RunOptions, cache: Option<&FileCache>) -> Result<Report, CliError> {
    validate_origin_primary(&prob.ideal).map_err(|e| match e {
        OriginError::Groebner(g) => CliError::Resource(g.to_string()),
        other => CliError::Validation(other.to_string()),
    })?;
    let d = prob.ring.dimension();
    let sopts = opts.series(cache);
    let (series, depth_note) = sample_to_depth(opts.e_max.or(prob.params.e_max), d, |e| hk_series(prob, e, &sopts))?;
    let estimate = estimate_ehk(&series.samples, d).map_err(|e| CliError::Validation(e.to_string()))?;
    let t = prob.ring.embedding_dimension();
    let mut notes: Vec<String> = depth_note.into_iter().collect();
    if d >= 2 && t > d {
        notes.push("heuristic: the extrapolation assumes the two-term asymptotic of normal rings; normality is not verified".into());
    }

    let maximal = is_maximal(prob);
    let (mult, bound_inputs, bounds) = if maximal {
        match multiplicity(prob, &sopts) {
            Ok(m) => {
                let inputs = BoundInputs {
                    d,
                    p: prob.ring.characteristic(),
                    e: m.value,
                    t: t as u64,
                    hypersurface: t == d + 1,
                };
                let bounds = bound_report(inputs, Some(estimate.alpha)).entries;
                (Some(m), Some(inputs), bounds)
            }
            Err(err) => {
                notes.push(format!("multiplicity unavailable ({err}); bounds skipped"));
                (None, None, Vec::new())
            }
        }
    } else {
        notes.push("bounds apply to the maximal ideal only; skipped".into());
        (None, None, Vec::new())
    };

    Ok(Report {
        problem: prob.to_string(),
        dimension: d,
        embedding_dimension: t,
        series: series.samples,
        estimate: Some(estimate),
        multiplicity: mult,
        bound_inputs,
        bounds,
        reference: recognize(prob),
        fsig: None,
        notes,
        timing: series.timing,
        provenance: provenance(cache),
    })
}

pub fn fsig(text: &str, sop: &str, opts: &RunOptions, cache: Option<&FileCache>) -> Result<Report, CliError> {
    let prob = parse_problem(text, opts.order)?;
    fsig_problem(&prob, sop, opts, cache)
}

pub fn fsig_problem(prob: &ParsedProblem, sop: &str, opts: &RunOptions, cache: Option<&FileCache>) -> Result<Report, CliError> {
    let ring: &Arc<RingPresentation> = &prob.ring;
    let gens = ring.parse_polys(sop).map_err(|e| CliError::Parse(format!("sop: {e}")))?;
    let j = GorensteinSop::verify(ring, gens)?;
    let d = ring.dimension();
    let sopts = opts.series(cache);
    let (samples, depth_note) = sample_to_depth(opts.e_max.or(prob.params.e_max), d, |e| splitting_series(&j, e, &sopts))?;
    let (s, method) = estimate_fsignature(&samples, d).map_err(|e| CliError::Validation(e.to_string()))?;
    let reference = recognize(prob);
    let sop_text = j
        .sop
        .generators()
        .iter()
        .map(|f| ring.display_poly(f).to_string())
        .collect::<Vec<_>>()
        .join(", ");
    Ok(Report {
        problem: prob.to_string(),
        dimension: d,
        embedding_dimension: ring.embedding_dimension(),
        series: Vec::new(),
        estimate: None,
        multiplicity: None,
        bound_inputs: None,
        bounds: Vec::new(),
        fsig: Some(FsigSummary {
            sop: sop_text,
            samples,
            s,
            s_rational: rational_reconstruct(s, DEFAULT_MAX_DEN, EstimateResult::tolerance(0.0, 1, d)),
            method,
            reference: reference.as_ref().and_then(|r| r.s),
        }),
        reference,
        notes: depth_note.into_iter().collect(),
        timing: Vec::new(),
        provenance: provenance(cache),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hk_core::estimate::Fraction;

    const A1: &str = "p=5; vars=x,y,z; quotient=[x*y + z^2]; ideal=[x,y,z]";

    fn opts(e: u32) -> RunOptions {
        RunOptions {
            e_max: Some(e),
            ..RunOptions::default()
        }
    }

    #[test]
    fn a1_report() {
        let r = compute(A1, &opts(3), None).unwrap();
        let est = r.estimate.as_ref().unwrap();
        assert_eq!(est.alpha_rational, Some(Fraction::new(3, 2)));
        assert_eq!(r.multiplicity.as_ref().unwrap().value, 2);
        assert_eq!(r.reference.as_ref().unwrap().id, "A1");
        assert!(r.bounds.iter().all(|b| b.ok()));
        let wy = r.bounds.iter().find(|b| b.name == "watanabe-yoshida-dim2").unwrap();
        assert_eq!(wy.value.as_ref().unwrap().exact, Some(Fraction::new(3, 2)));
        assert_eq!(wy.satisfied, Some(true));
    }

    #[test]
    fn regular_report() {
        let r = compute("p=5; vars=x,y; quotient=[]; ideal=[x,y]", &opts(3), None).unwrap();
        assert_eq!(r.estimate.as_ref().unwrap().alpha_rational, Some(Fraction::new(1, 1)));
        let kunz = r.bounds.iter().find(|b| b.name == "kunz").unwrap();
        assert_eq!(kunz.note, "regular: Kunz equality");
        assert!(r.reference.is_none());
    }

    #[test]
    fn exit_codes() {
        let err = compute("p=5; vars=x,y; quotient=[]; ideal=[x,", &opts(1), None).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("line 1"), "{err}");
        let err = compute("p=5; vars=x,y; quotient=[]; ideal=[x]", &opts(1), None).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let capped = RunOptions {
            max_colength: 100,
            ..opts(3)
        };
        assert_eq!(compute(A1, &capped, None).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn default_depth_stays_under_the_cap() {
        let small = RunOptions {
            max_colength: 2000,
            ..RunOptions::default()
        };
        let r = compute(A1, &small, None).unwrap();
        assert_eq!(r.series.len(), 3);
        assert!(r.notes[0].contains("lowered to e=2"), "{:?}", r.notes);
        let f = fsig(A1, "x + y, z", &small, None).unwrap();
        assert_eq!(f.fsig.unwrap().samples.len(), 2);
        // an explicit depth is never lowered
        assert_eq!(compute(A1, &opts(3), None).unwrap().series.len(), 4);
        let explicit = RunOptions { e_max: Some(3), ..small };
        assert_eq!(compute(A1, &explicit, None).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn fsig_reports() {
        let r = fsig(A1, "x+y, z", &opts(3), None).unwrap();
        let f = r.fsig.unwrap();
        assert!((f.s - 0.5).abs() < 0.05);
        assert_eq!(f.reference, Some(Fraction::new(1, 2)));
        let r = fsig("p=5; vars=x,y; quotient=[]; ideal=[x,y]", "x, y", &opts(3), None).unwrap();
        let f = r.fsig.unwrap();
        assert_eq!(f.s, 1.0);
        assert_eq!(f.s_rational, Some(Fraction::new(1, 1)));
        let err = fsig(A1, "x, x", &opts(2), None).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("not a system of parameters"), "{err}");
    }

    #[test]
    fn recognizes_renamed_variables() {
        let prob = parse_problem("p=7; vars=a,b,c; quotient=[a^2 + b^3 + c^4]; ideal=[a,b,c]", OrderKind::DegRevLex).unwrap();
        assert_eq!(recognize(&prob).unwrap().id, "E6");
        let low_p = parse_problem("p=3; vars=a,b,c; quotient=[a^2 + b^3 + c^4]; ideal=[a,b,c]", OrderKind::DegRevLex).unwrap();
        assert_eq!(recognize(&low_p), None);
    }

    #[test]
    fn multiplicities() {
        let so = SeriesOptions::default();
        for (text, e) in [
            ("p=5; vars=x,y; quotient=[]; ideal=[x,y]", 1),
            (A1, 2),
            ("p=5; vars=x,y; quotient=[x^5 - y^5]; ideal=[x,y]", 5),
            ("p=5; vars=a,b,c,d; quotient=[a^4+b^4+c^4+d^4]; ideal=[a,b,c,d]", 4),
        ] {
            let prob = parse_problem(text, OrderKind::DegRevLex).unwrap();
            let m = multiplicity(&prob, &so).unwrap();
            assert_eq!(m.value, e, "{text}");
            assert!((m.fitted - e as f64).abs() < 0.05, "{text}: {}", m.fitted);
        }
    }
}
