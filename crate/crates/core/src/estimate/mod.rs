//! Extrapolation of limits from exact samples: the Hilbert-Kunz
//! multiplicity, the Hilbert-Samuel multiplicity and the F-signature, plus
//! rational reconstruction of the estimates.

mod rational;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frobenius::{HKSample, SplittingSample};

pub use rational::{rational_reconstruct, Fraction, DEFAULT_MAX_DEN};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EstimateError {
    #[error("no sample with e >= 1")]
    NoUsableSample,
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
}

/// Model used for the extrapolation.
///
/// * `Ratio`: `λ_E / q_E^d`.
/// * `TwoPoint`: `λ = α q^d + β q^(d-1)` through the last two samples.
/// * `Geometric`: `λ/q^d = α + B r^e` through the last three samples.
/// * `Periodic`: the two-point model with `β` depending on the parity of
///   `e`, through the last two samples of equal parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Ratio,
    TwoPoint,
    Geometric,
    Periodic,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Ratio => "ratio",
            Method::TwoPoint => "two-point",
            Method::Geometric => "geometric",
            Method::Periodic => "periodic",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub alpha: f64,
    pub beta: Option<f64>,
    pub alpha_rational: Option<Fraction>,
    pub method: Method,
    /// Largest deviation `|model(e) - λ_e|` over the samples with `e >= 1`.
    pub residual: f64,
    /// Normalized error of each candidate model when predicting the last
    /// sample from the earlier ones.
    pub holdout: Vec<(Method, f64)>,
    pub e_hs: Option<f64>,
    pub fsignature: Option<f64>,
}

impl EstimateResult {
    /// Reconstruction tolerance `max(10 * residual / q_E^d, 1e-6)`.
    pub fn tolerance(residual: f64, q_last: u64, d: usize) -> f64 {
        (10.0 * residual / (q_last as f64).powi(d as i32)).max(1e-6)
    }
}

fn rat(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn qpow(q: u64, d: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(q).pow(d as u32))
}

/// `λ/q^d` as an exact rational.
fn normalized(s: &HKSample, d: usize) -> BigRational {
    rat(s.colength) / qpow(s.q, d)
}

/// A fitted model that can evaluate `λ` at any sample.
enum Fit {
    Ratio {
        alpha: BigRational,
    },
    TwoPoint {
        alpha: BigRational,
        beta: BigRational,
    },
    Geometric {
        alpha: BigRational,
        anchor: (u32, BigRational),
        r: BigRational,
    },
    Periodic {
        alpha: BigRational,
        betas: [Option<BigRational>; 2],
    },
}

impl Fit {
    fn alpha(&self) -> &BigRational {
        match self {
            Fit::Ratio { alpha } | Fit::TwoPoint { alpha, .. } | Fit::Geometric { alpha, .. } | Fit::Periodic { alpha, .. } => alpha,
        }
    }

    fn method(&self) -> Method {
        match self {
            Fit::Ratio { .. } => Method::Ratio,
            Fit::TwoPoint { .. } => Method::TwoPoint,
            Fit::Geometric { .. } => Method::Geometric,
            Fit::Periodic { .. } => Method::Periodic,
        }
    }

    /// Predicted `λ/q^d` at `(e, q)`.
    fn predict(&self, e: u32, q: u64) -> Option<BigRational> {
        let qr = rat(q);
        match self {
            Fit::Ratio { alpha } => Some(alpha.clone()),
            Fit::TwoPoint { alpha, beta } => Some(alpha + beta / qr),
            Fit::Geometric { alpha, anchor, r } => {
                let (e0, c0) = anchor;
                let k = e as i32 - *e0 as i32;
                if r.is_zero() && k < 0 {
                    return None;
                }
                Some(alpha + (c0 - alpha) * pow_signed(r, k))
            }
            Fit::Periodic { alpha, betas } => betas[(e % 2) as usize].as_ref().map(|b| alpha + b / qr),
        }
    }
}

fn pow_signed(r: &BigRational, k: i32) -> BigRational {
    let base = if k < 0 { r.recip() } else { r.clone() };
    let mut out = BigRational::one();
    for _ in 0..k.unsigned_abs() {
        out *= &base;
    }
    out
}

/// `α, β` with `c_i = α + β / q_i` at two samples.
fn solve_two(a: &HKSample, b: &HKSample, d: usize) -> (BigRational, BigRational) {
    let (ca, cb) = (normalized(a, d), normalized(b, d));
    let (ia, ib) = (rat(a.q).recip(), rat(b.q).recip());
    let beta = (&ca - &cb) / (&ia - &ib);
    let alpha = ca - &beta * ia;
    (alpha, beta)
}

fn fit_two_point(window: &[HKSample], d: usize) -> Option<Fit> {
    let n = window.len();
    if n < 2 {
        return None;
    }
    let (a, b) = (&window[n - 2], &window[n - 1]);
    if a.e == 0 || b.e != a.e + 1 {
        return None;
    }
    let (alpha, beta) = solve_two(a, b, d);
    Some(Fit::TwoPoint { alpha, beta })
}

fn fit_geometric(window: &[HKSample], d: usize) -> Option<Fit> {
    let n = window.len();
    if n < 3 {
        return None;
    }
    let s = &window[n - 3..];
    if s[1].e != s[0].e + 1 || s[2].e != s[1].e + 1 {
        return None;
    }
    let c: Vec<BigRational> = s.iter().map(|x| normalized(x, d)).collect();
    let (d1, d2) = (&c[1] - &c[0], &c[2] - &c[1]);
    let anchor = (s[2].e, c[2].clone());
    if d1.is_zero() {
        return d2.is_zero().then(|| Fit::Geometric {
            alpha: c[2].clone(),
            anchor,
            r: BigRational::zero(),
        });
    }
    let r = &d2 / &d1;
    if r.abs() >= BigRational::one() {
        return None;
    }
    let alpha = &c[2] + &d2 * &r / (BigRational::one() - &r);
    Some(Fit::Geometric { alpha, anchor, r })
}

fn fit_periodic(window: &[HKSample], d: usize) -> Option<Fit> {
    let n = window.len();
    if n < 3 {
        return None;
    }
    let (a, b) = (&window[n - 3], &window[n - 1]);
    if a.e == 0 || b.e != a.e + 2 || window[n - 2].e != a.e + 1 {
        return None;
    }
    let (alpha, beta_b) = solve_two(a, b, d);
    let mid = &window[n - 2];
    let beta_mid = (normalized(mid, d) - &alpha) * rat(mid.q);
    let mut betas: [Option<BigRational>; 2] = [None, None];
    betas[(b.e % 2) as usize] = Some(beta_b);
    betas[(mid.e % 2) as usize] = Some(beta_mid);
    Some(Fit::Periodic { alpha, betas })
}

type Fitter = fn(&[HKSample], usize) -> Option<Fit>;

const FITTERS: [Fitter; 3] = [fit_two_point, fit_geometric, fit_periodic];

/// Largest `|model - λ|` over samples with `e >= 1` where the model is
/// defined, in colength units.
fn residual(fit: &Fit, samples: &[HKSample], d: usize) -> f64 {
    samples
        .iter()
        .filter(|s| s.e >= 1)
        .filter_map(|s| {
            fit.predict(s.e, s.q)
                .map(|c| to_f64(&((c - normalized(s, d)) * qpow(s.q, d)).abs()))
        })
        .fold(0.0, f64::max)
}

/// Estimates `e_HK = lim λ_e / q^d` from consecutive samples.
///
/// Each model that can be fitted to the samples before the last one
/// predicts the last sample; the model with the smallest prediction error
/// is refitted to the full series. Ties go to the simpler model, so exact
/// series such as regular rings are reported as two-point fits. When no
/// model can be held out, the richest model that fits is used, falling
/// back to the ratio of the last sample.
pub fn estimate_ehk(samples: &[HKSample], d: usize) -> Result<EstimateResult, EstimateError> {
    let last = samples.iter().rev().find(|s| s.e >= 1).ok_or(EstimateError::NoUsableSample)?;
    let n = samples.len();

    let mut holdout: Vec<(Method, f64)> = Vec::new();
    let mut best: Option<(BigRational, Fitter)> = None;
    for fitter in FITTERS {
        if fitter(samples, d).is_none() {
            continue;
        }
        let Some(fit) = fitter(&samples[..n - 1], d) else {
            continue;
        };
        let Some(pred) = fit.predict(last.e, last.q) else {
            continue;
        };
        let err = (pred - normalized(last, d)).abs();
        holdout.push((fit.method(), to_f64(&err)));
        if best.as_ref().is_none_or(|(b, _)| err < *b) {
            best = Some((err, fitter));
        }
    }

    let fit = match best {
        Some((_, fitter)) => fitter(samples, d),
        None => fit_geometric(samples, d).or_else(|| fit_two_point(samples, d)),
    }
    .unwrap_or_else(|| Fit::Ratio {
        alpha: normalized(last, d),
    });

    let beta = match &fit {
        Fit::TwoPoint { beta, .. } => Some(to_f64(beta)),
        Fit::Periodic { betas, .. } => betas[(last.e % 2) as usize].as_ref().map(to_f64),
        _ => fit_two_point(samples, d).map(|f| match f {
            Fit::TwoPoint { beta, .. } => to_f64(&beta),
            _ => unreachable!(),
        }),
    };
    let alpha = to_f64(fit.alpha());
    let residual = residual(&fit, samples, d);
    let tol = EstimateResult::tolerance(residual, last.q, d);
    Ok(EstimateResult {
        alpha,
        beta,
        alpha_rational: rational_reconstruct(alpha, DEFAULT_MAX_DEN, tol),
        method: fit.method(),
        residual,
        holdout,
        e_hs: None,
        fsignature: None,
    })
}

/// Least-squares fit of a degree-`d` polynomial to the last `d + 2` points
/// of `n -> λ(R/I^n)`; returns `d!` times the leading coefficient and the
/// largest absolute deviation of the fit.
pub fn estimate_hs_multiplicity(powers: &[(u32, u64)], d: usize) -> Result<(f64, f64), EstimateError> {
    let need = d + 2;
    if powers.len() < need {
        return Err(EstimateError::TooFewPoints { need, got: powers.len() });
    }
    let tail = &powers[powers.len() - need..];
    let k = d + 1;
    // normal equations A^T A c = A^T y with A[i][j] = n_i^j
    let rows: Vec<Vec<BigRational>> = tail
        .iter()
        .map(|&(n, _)| (0..k).map(|j| rat(n as u64).pow(j as i32)).collect())
        .collect();
    let ys: Vec<BigRational> = tail.iter().map(|&(_, l)| rat(l)).collect();
    let mut m: Vec<Vec<BigRational>> = (0..k)
        .map(|a| {
            let mut row: Vec<BigRational> = (0..k).map(|b| rows.iter().map(|r| &r[a] * &r[b]).sum()).collect();
            row.push(rows.iter().zip(&ys).map(|(r, y)| &r[a] * y).sum());
            row
        })
        .collect();
    let coeffs = solve(&mut m);
    let lead = &coeffs[d];
    let fact: u64 = (1..=d as u64).product();
    let resid = rows
        .iter()
        .zip(&ys)
        .map(|(r, y)| {
            let v: BigRational = r.iter().zip(&coeffs).map(|(a, c)| a * c).sum();
            to_f64(&(v - y).abs())
        })
        .fold(0.0, f64::max);
    Ok((to_f64(&(lead * rat(fact))), resid))
}

/// Gauss-Jordan elimination on an augmented nonsingular system.
fn solve(m: &mut [Vec<BigRational>]) -> Vec<BigRational> {
    let k = m.len();
    for col in 0..k {
        let piv = (col..k).find(|&r| !m[r][col].is_zero()).expect("nonsingular system");
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (v, p) in m[r].iter_mut().zip(pivot_row) {
                    *v -= &factor * p;
                }
            }
        }
    }
    m.iter().map(|row| row[k].clone()).collect()
}

/// F-signature estimate: two-point fit `a_q = s q^d + c q^(d-1)` on the last
/// two consecutive samples, else `a_q / q^d` of the last sample.
pub fn estimate_fsignature(samples: &[SplittingSample], d: usize) -> Result<(f64, Method), EstimateError> {
    let as_hk: Vec<HKSample> = samples
        .iter()
        .map(|s| HKSample {
            e: s.e,
            q: s.q,
            colength: s.a_q,
        })
        .collect();
    let last = as_hk.iter().rev().find(|s| s.e >= 1).ok_or(EstimateError::NoUsableSample)?;
    Ok(match fit_two_point(&as_hk, d) {
        Some(fit) => (to_f64(fit.alpha()), Method::TwoPoint),
        None => (to_f64(&normalized(last, d)), Method::Ratio),
    })
}
