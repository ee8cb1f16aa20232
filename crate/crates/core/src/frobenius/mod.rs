//! Frobenius powers `I^[q]` and the length functions built from them: the
//! Hilbert-Kunz function, lengths of ordinary powers, and splitting numbers
//! of Gorenstein rings.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groebner::{ideal_colon_ideal, is_gorenstein_artinian, variables, Colength, GroebnerBasis, GroebnerError, Limits};
use crate::polyfield::{Poly, PolyError};
use crate::presentation::{validate_origin_primary_with, IdealSpec, OriginError, ParsedProblem, RingPresentation};

pub const DEFAULT_MAX_COLENGTH: u64 = 10_000_000;
pub const DEFAULT_SAMPLE_TIMEOUT: Duration = Duration::from_secs(600);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrobeniusError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Origin(#[from] OriginError),
    #[error("e={e}: infinite colength")]
    InfiniteColength { e: u32 },
    #[error("e={e}: colength at least {at_least} exceeds the cap {cap}")]
    ColengthCap { e: u32, at_least: u64, cap: u64 },
    #[error("e={e}: q = p^e overflows")]
    QOverflow { e: u32 },
    #[error("e={e}: sample exceeded its time limit")]
    Timeout { e: u32 },
    #[error("computation cancelled")]
    Cancelled,
    #[error("not a system of parameters: {0}")]
    NotSystemOfParameters(String),
    #[error("R/J is not Gorenstein: its socle has dimension {socle}")]
    NotGorenstein { socle: u64 },
    #[error(transparent)]
    Groebner(GroebnerError),
}

impl FrobeniusError {
    fn at(e: u32, err: GroebnerError) -> Self {
        match err {
            GroebnerError::Timeout => FrobeniusError::Timeout { e },
            GroebnerError::Cancelled => FrobeniusError::Cancelled,
            GroebnerError::InfiniteColength => FrobeniusError::InfiniteColength { e },
            other => FrobeniusError::Groebner(other),
        }
    }

    /// True for failures caused by the size or time caps.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            FrobeniusError::ColengthCap { .. } | FrobeniusError::Timeout { .. } | FrobeniusError::QOverflow { .. }
        )
    }
}

/// Exact colength `λ(R/(I^[q] + defining))` at `q = p^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HKSample {
    pub e: u32,
    pub q: u64,
    pub colength: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleTiming {
    pub e: u32,
    pub seconds: f64,
    pub cached: bool,
}

#[derive(Clone, Debug)]
pub struct HKSeries {
    pub problem: ParsedProblem,
    pub dimension: usize,
    pub samples: Vec<HKSample>,
    pub timing: Vec<SampleTiming>,
}

/// `a_q = λ(R/J^[q]) - λ(R/(J:m)^[q])` for a Gorenstein parameter ideal `J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingSample {
    pub e: u32,
    pub q: u64,
    pub a_q: u64,
}

/// Persistent store for colengths, keyed by [`sample_key`].
pub trait ColengthCache: Sync {
    fn fetch(&self, key: &str) -> Option<u64>;
    fn store(&self, key: &str, colength: u64);
}

#[derive(Clone, Copy)]
pub struct SeriesOptions<'a> {
    pub max_colength: u64,
    pub timeout: Option<Duration>,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    pub cache: Option<&'a dyn ColengthCache>,
}

impl Default for SeriesOptions<'_> {
    fn default() -> Self {
        SeriesOptions {
            max_colength: DEFAULT_MAX_COLENGTH,
            timeout: Some(DEFAULT_SAMPLE_TIMEOUT),
            workers: None,
            cache: None,
        }
    }
}

/// Largest `e` sampled when none is requested, by Krull dimension.
pub fn default_e_max(d: usize) -> u32 {
    match d {
        0 | 1 => 9,
        2 => 5,
        3 => 3,
        _ => 2,
    }
}

/// `p^e`, or `None` on overflow.
pub fn q_of(p: u64, e: u32) -> Option<u64> {
    p.checked_pow(e)
}

/// The ideal generated by the `q`-th powers of the given generators.
pub fn bracket_power(ideal: &IdealSpec, q: u64) -> Result<IdealSpec, PolyError> {
    let gens = ideal
        .generators()
        .iter()
        .map(|f| f.frobenius(q))
        .collect::<Result<Vec<Poly>, _>>()?;
    Ok(IdealSpec::new(ideal.ring(), gens).expect("Frobenius keeps constant terms zero"))
}

/// Canonical text identifying the colength of `I^[p^e]` in its ring under
/// its monomial order.
pub fn sample_key(ideal: &IdealSpec, e: u32) -> String {
    let ring = ideal.ring();
    let list = |polys: &[Poly]| -> String {
        polys
            .iter()
            .map(|f| ring.display_poly(f).to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    format!(
        "p={}; vars={}; quotient=[{}]; ideal=[{}]; order={}; e={}",
        ring.characteristic(),
        ring.names().join(","),
        list(ring.defining()),
        list(ideal.generators()),
        ring.order_kind(),
        e
    )
}

fn limits_for<'a>(opts: &SeriesOptions<'_>, cancel: &'a AtomicBool) -> Limits<'a> {
    Limits {
        deadline: opts.timeout.map(|t| Instant::now() + t),
        cancel: Some(cancel),
    }
}

/// Colength of `I^[p^e] + defining`, through the cache when one is given.
fn bracket_colength(
    ideal: &IdealSpec,
    e: u32,
    dimension: usize,
    opts: &SeriesOptions<'_>,
    cancel: &AtomicBool,
) -> Result<(u64, bool), FrobeniusError> {
    let ring = ideal.ring();
    let p = ring.characteristic();
    let q = q_of(p, e).ok_or(FrobeniusError::QOverflow { e })?;
    // Kunz: λ(R/I^[q]) >= λ(R/m^[q]) >= q^d
    let floor = q.checked_pow(dimension as u32).unwrap_or(u64::MAX);
    if floor > opts.max_colength {
        return Err(FrobeniusError::ColengthCap {
            e,
            at_least: floor,
            cap: opts.max_colength,
        });
    }
    let key = opts.cache.map(|_| sample_key(ideal, e));
    if let (Some(cache), Some(key)) = (opts.cache, &key) {
        if let Some(len) = cache.fetch(key) {
            return Ok((len, true));
        }
    }
    let mut gens = bracket_power(ideal, q)?.generators().to_vec();
    gens.extend(ring.defining().iter().cloned());
    let limits = limits_for(opts, cancel);
    let gb = GroebnerBasis::with_limits(ring.ring(), &gens, &limits).map_err(|err| FrobeniusError::at(e, err))?;
    let Colength::Finite(len) = gb.colength() else {
        return Err(FrobeniusError::InfiniteColength { e });
    };
    if len > opts.max_colength {
        return Err(FrobeniusError::ColengthCap {
            e,
            at_least: len,
            cap: opts.max_colength,
        });
    }
    if let (Some(cache), Some(key)) = (opts.cache, &key) {
        cache.store(key, len);
    }
    Ok((len, false))
}

/// Runs `task` for every `e` in `es` on the worker pool. The first failure
/// cancels the remaining tasks; results come back in input order, and the
/// reported error is the first genuine (non-cancellation) one by `e`.
fn run_parallel<T, F>(es: &[u32], workers: Option<usize>, cancel: &AtomicBool, task: F) -> Result<Vec<T>, FrobeniusError>
where
    T: Send,
    F: Fn(u32) -> Result<T, FrobeniusError> + Sync + Send,
{
    let run = || -> Vec<Result<T, FrobeniusError>> {
        es.par_iter()
            .map(|&e| {
                if cancel.load(Ordering::Relaxed) {
                    return Err(FrobeniusError::Cancelled);
                }
                let r = task(e);
                if r.is_err() {
                    cancel.store(true, Ordering::Relaxed);
                }
                r
            })
            .collect()
    };
    let results = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    };
    let mut out = Vec::with_capacity(results.len());
    let mut first_err: Option<FrobeniusError> = None;
    for r in results {
        match r {
            Ok(v) => out.push(v),
            Err(FrobeniusError::Cancelled) => first_err = first_err.or(Some(FrobeniusError::Cancelled)),
            Err(err) => {
                if matches!(first_err, None | Some(FrobeniusError::Cancelled)) {
                    first_err = Some(err);
                }
            }
        }
    }
    match first_err {
        Some(err) => Err(err),
        None => Ok(out),
    }
}

fn validate(ideal: &IdealSpec, opts: &SeriesOptions<'_>, cancel: &AtomicBool) -> Result<(), FrobeniusError> {
    match validate_origin_primary_with(ideal, &limits_for(opts, cancel)) {
        Ok(_) => Ok(()),
        Err(OriginError::Groebner(err)) => Err(FrobeniusError::at(0, err)),
        Err(err) => Err(err.into()),
    }
}

/// Samples `e -> λ(R/I^[p^e])` for `e = 0..=e_max`, one task per `e`.
pub fn hk_series(prob: &ParsedProblem, e_max: u32, opts: &SeriesOptions<'_>) -> Result<HKSeries, FrobeniusError> {
    hk_series_cancellable(prob, e_max, opts, &AtomicBool::new(false))
}

/// As [`hk_series`], stopping early once `cancel` is raised.
pub fn hk_series_cancellable(
    prob: &ParsedProblem,
    e_max: u32,
    opts: &SeriesOptions<'_>,
    cancel: &AtomicBool,
) -> Result<HKSeries, FrobeniusError> {
    validate(&prob.ideal, opts, cancel)?;
    let d = prob.ring.dimension();
    let p = prob.ring.characteristic();
    let es: Vec<u32> = (0..=e_max).collect();
    let results = run_parallel(&es, opts.workers, cancel, |e| {
        let start = Instant::now();
        let (colength, cached) = bracket_colength(&prob.ideal, e, d, opts, cancel)?;
        let sample = HKSample { e, q: p.pow(e), colength };
        let timing = SampleTiming {
            e,
            seconds: start.elapsed().as_secs_f64(),
            cached,
        };
        Ok((sample, timing))
    })?;
    let (samples, timing) = results.into_iter().unzip();
    Ok(HKSeries {
        problem: prob.clone(),
        dimension: d,
        samples,
        timing,
    })
}

/// `(n, λ(R/I^n))` for `n = 1..=n_max`, building `I^n + defining` from a
/// Groebner basis of `I^{n-1} + defining` times the generators of `I`.
pub fn ordinary_power_series(prob: &ParsedProblem, n_max: u32, opts: &SeriesOptions<'_>) -> Result<Vec<(u32, u64)>, FrobeniusError> {
    let cancel = AtomicBool::new(false);
    validate(&prob.ideal, opts, &cancel)?;
    let ring = prob.ring.ring();
    let defining = prob.ring.defining();
    let gens = prob.ideal.generators();
    let mut out = Vec::new();
    let mut current: Vec<Poly> = Vec::new();
    for n in 1..=n_max {
        let mut next: Vec<Poly> = if n == 1 {
            gens.to_vec()
        } else {
            current.iter().flat_map(|g| gens.iter().map(move |h| g * h)).collect()
        };
        next.extend(defining.iter().cloned());
        let gb = GroebnerBasis::with_limits(ring, &next, &limits_for(opts, &cancel)).map_err(|err| FrobeniusError::at(n, err))?;
        let Colength::Finite(len) = gb.colength() else {
            return Err(FrobeniusError::InfiniteColength { e: n });
        };
        if len > opts.max_colength {
            return Err(FrobeniusError::ColengthCap {
                e: n,
                at_least: len,
                cap: opts.max_colength,
            });
        }
        out.push((n, len));
        current = gb.gens().to_vec();
    }
    Ok(out)
}

/// A parameter ideal `J` checked to be a system of parameters with `R/J`
/// artinian Gorenstein, together with `J : m` (`None` when `J = m`, so
/// that `J : m` is the unit ideal).
#[derive(Clone, Debug)]
pub struct GorensteinSop {
    pub sop: IdealSpec,
    pub socle_ideal: Option<IdealSpec>,
    pub colength: u64,
}

impl GorensteinSop {
    pub fn verify(ring: &Arc<RingPresentation>, gens: Vec<Poly>) -> Result<Self, FrobeniusError> {
        let d = ring.dimension();
        if gens.len() != d {
            return Err(FrobeniusError::NotSystemOfParameters(format!(
                "{} generators given, the ring has dimension {d}",
                gens.len()
            )));
        }
        let sop = IdealSpec::new(ring, gens).map_err(|err| FrobeniusError::NotSystemOfParameters(err.to_string()))?;
        let cert = match validate_origin_primary_with(&sop, &Limits::none()) {
            Ok(c) => c,
            Err(OriginError::InfiniteColength) => return Err(FrobeniusError::NotSystemOfParameters("R/J has infinite length".into())),
            Err(err) => return Err(FrobeniusError::NotSystemOfParameters(err.to_string())),
        };
        let jgb = GroebnerBasis::new(ring.ring(), &sop.with_defining());
        let maximal = variables(ring.ring());
        let limits = Limits::none();
        if !is_gorenstein_artinian(&jgb, &maximal, &limits).map_err(FrobeniusError::Groebner)? {
            let colon = ideal_colon_ideal(&jgb, &maximal, &limits).map_err(FrobeniusError::Groebner)?;
            let small = colon.colength().finite().expect("contains J");
            return Err(FrobeniusError::NotGorenstein {
                socle: cert.colength - small,
            });
        }
        let colon = ideal_colon_ideal(&jgb, &maximal, &limits).map_err(FrobeniusError::Groebner)?;
        let socle_ideal =
            (!colon.is_unit_ideal()).then(|| IdealSpec::new(ring, colon.gens().to_vec()).expect("proper colon ideals lie in m"));
        Ok(GorensteinSop {
            sop,
            socle_ideal,
            colength: cert.colength,
        })
    }
}

/// `a_q` at a single `e`.
pub fn splitting_number_gorenstein(j: &GorensteinSop, e: u32, opts: &SeriesOptions<'_>) -> Result<SplittingSample, FrobeniusError> {
    let cancel = AtomicBool::new(false);
    splitting_sample(j, e, opts, &cancel)
}

fn splitting_sample(j: &GorensteinSop, e: u32, opts: &SeriesOptions<'_>, cancel: &AtomicBool) -> Result<SplittingSample, FrobeniusError> {
    let ring = j.sop.ring();
    let d = ring.dimension();
    let (big, _) = bracket_colength(&j.sop, e, d, opts, cancel)?;
    let small = match &j.socle_ideal {
        Some(ideal) => bracket_colength(ideal, e, 0, opts, cancel)?.0,
        None => 0,
    };
    Ok(SplittingSample {
        e,
        q: ring.characteristic().pow(e),
        a_q: big - small,
    })
}

/// `a_q` for `e = 1..=e_max`, one task per `e`.
pub fn splitting_series(j: &GorensteinSop, e_max: u32, opts: &SeriesOptions<'_>) -> Result<Vec<SplittingSample>, FrobeniusError> {
    let cancel = AtomicBool::new(false);
    let es: Vec<u32> = (1..=e_max).collect();
    run_parallel(&es, opts.workers, &cancel, |e| splitting_sample(j, e, opts, &cancel))
}
