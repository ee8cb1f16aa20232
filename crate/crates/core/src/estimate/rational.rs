use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

pub const DEFAULT_MAX_DEN: u64 = 10_000;

/// A fraction `num/den` in lowest terms with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fraction {
    pub num: i64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let g = (num.unsigned_abs()).gcd(&den).max(1);
        Fraction {
            num: num / g as i64,
            den: den / g,
        }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// First continued-fraction convergent of `x` with denominator at most
/// `max_den` lying within `tol` of `x`.
pub fn rational_reconstruct(x: f64, max_den: u64, tol: f64) -> Option<Fraction> {
    if !x.is_finite() || max_den == 0 {
        return None;
    }
    // convergents h_k / k_k from h_k = a_k h_{k-1} + h_{k-2}
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    let mut rest = x;
    loop {
        let a = rest.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let a = a as i128;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > max_den as i128 {
            return None;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= tol {
            return i64::try_from(h2).ok().map(|n| Fraction::new(n, k2 as u64));
        }
        let frac = rest - a as f64;
        if frac < 1e-12 {
            return None;
        }
        rest = 1.0 / frac;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
}
