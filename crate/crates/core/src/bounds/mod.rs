//! Closed-form lower bounds for Hilbert-Kunz multiplicities and the table
//! of known values they are checked against.

mod reference;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::estimate::Fraction;

pub use reference::{lookup, reference_values, veronese_ehk, RefEntry};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn factorial(d: usize) -> BigInt {
    (1..=d as u64).map(BigInt::from).product()
}

/// Converts an exact rational to a [`Fraction`] when it fits in machine
/// integers.
pub fn to_fraction(x: &BigRational) -> Option<Fraction> {
    Some(Fraction::new(x.numer().to_i64()?, x.denom().to_u64()?))
}

/// `v_s = vol{x in [0,1]^d : x_1 + ... + x_d <= s}`, exactly:
/// `(1/d!) sum_{k <= floor(s)} (-1)^k C(d,k) (s-k)^d`, clamped to `[0, 1]`.
pub fn volume_vs(d: usize, s: &BigRational) -> BigRational {
    if s.is_negative() {
        return BigRational::zero();
    }
    let d_r = int(d as i64);
    if *s >= d_r {
        return BigRational::one();
    }
    let top = s.floor().to_integer().to_usize().unwrap_or(d).min(d);
    let mut sum = BigRational::zero();
    for k in 0..=top {
        let term = BigRational::from_integer(binomial(BigInt::from(d), BigInt::from(k))) * (s - int(k as i64)).pow(d as i32);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let v = sum / BigRational::from_integer(factorial(d));
    v.clamp(BigRational::zero(), BigRational::one())
}

/// `v_s` in floating point, for irrational `s`.
pub fn volume_vs_f64(d: usize, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= d as f64 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 0..=(s.floor() as usize).min(d) {
        let c = binomial(d as u64, k as u64) as f64;
        let term = c * (s - k as f64).powi(d as i32);
        sum += if k % 2 == 0 { term } else { -term };
    }
    let fact: f64 = (1..=d).map(|i| i as f64).product();
    (sum / fact).clamp(0.0, 1.0)
}

/// `beta_{d+1} = v_{(d+1)/2} - v_{(d-1)/2}`: the share of the unit cube
/// between the two middle slices. For `d = 0` the cube is a point.
pub fn beta_hypersurface(d: usize) -> BigRational {
    if d == 0 {
        return BigRational::one();
    }
    let half = |n: i64| BigRational::new(BigInt::from(n), BigInt::from(2));
    volume_vs(d, &half(d as i64 + 1)) - volume_vs(d, &half(d as i64 - 1))
}

/// `e * (v_s - r (s-1)^d / d!)`.
pub fn wy_volume_bound(e: u64, d: usize, r: u64, s: &BigRational) -> BigRational {
    let tail = int(r as i64) * (s - BigRational::one()).pow(d as i32) / BigRational::from_integer(factorial(d));
    int(e as i64) * (volume_vs(d, s) - tail)
}

/// The largest [`wy_volume_bound`] over `s = 1, 1 + 1/64, ..., 2`, with the
/// maximizing `s` (the smallest one on ties).
pub fn wy_volume_bound_best(e: u64, d: usize, r: u64) -> (BigRational, BigRational) {
    (0..=64)
        .map(|k| {
            let s = BigRational::new(BigInt::from(64 + k), BigInt::from(64));
            let v = wy_volume_bound(e, d, r, &s);
            (s, v)
        })
        .fold(None, |best: Option<(BigRational, BigRational)>, (s, v)| match best {
            Some((bs, bv)) if bv >= v => Some((bs, bv)),
            _ => Some((s, v)),
        })
        .expect("non-empty grid")
}

/// `a_d`, the `d`-th Taylor coefficient of `sec x + tan x`, as `Z_d / d!`
/// with the zigzag numbers `Z_d` from the boustrophedon triangle.
pub fn sectan_coefficient(d: usize) -> BigRational {
    BigRational::new(zigzag(d), factorial(d))
}

/// Euler zigzag number `Z_n` (1, 1, 1, 2, 5, 16, 61, ...).
pub fn zigzag(n: usize) -> BigInt {
    let mut row = vec![BigInt::one()];
    for i in 1..=n {
        let mut next = Vec::with_capacity(i + 1);
        next.push(BigInt::zero());
        for k in 1..=i {
            let v = &next[k - 1] + &row[i - k];
            next.push(v);
        }
        row = next;
    }
    row.pop().expect("non-empty row")
}

/// A bound's value: exact when the formula is rational.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: f64,
    pub exact: Option<Fraction>,
}

impl BoundValue {
    fn exact(x: &BigRational) -> Self {
        BoundValue {
            value: x.to_f64().unwrap_or(f64::NAN),
            exact: to_fraction(x),
        }
    }

    fn real(value: f64) -> Self {
        BoundValue { value, exact: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub value: Option<BoundValue>,
    pub applicable: bool,
    /// Conjectural bounds are reported but never count as failures.
    pub informational: bool,
    pub satisfied: Option<bool>,
    pub note: String,
}

impl BoundEntry {
    fn applicable(name: &str, value: BoundValue, note: impl Into<String>) -> Self {
        BoundEntry {
            name: name.into(),
            value: Some(value),
            applicable: true,
            informational: false,
            satisfied: None,
            note: note.into(),
        }
    }

    fn inapplicable(name: &str, value: Option<BoundValue>, note: impl Into<String>) -> Self {
        BoundEntry {
            name: name.into(),
            value,
            applicable: false,
            informational: false,
            satisfied: None,
            note: note.into(),
        }
    }

    /// True unless an applicable, non-informational bound is violated.
    pub fn ok(&self) -> bool {
        !self.applicable || self.informational || self.satisfied != Some(false)
    }
}

/// What the bounds are evaluated from: dimension, characteristic,
/// multiplicity `e(R)`, generator count `t` of the maximal ideal, and
/// whether the ring is a hypersurface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub d: usize,
    pub p: u64,
    pub e: u64,
    pub t: u64,
    pub hypersurface: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub inputs: BoundInputs,
    pub entries: Vec<BoundEntry>,
}

/// Every closed-form lower bound on `e_HK(R)`, with applicability decided
/// from the inputs. Bounds that need hypotheses the engine cannot check
/// are listed as inapplicable with the reason.
pub fn closed_form_bounds(inp: BoundInputs) -> BoundReport {
    let BoundInputs { d, p, e, t, hypersurface } = inp;
    let one = BigRational::one();
    let fact = BigRational::from_integer(factorial(d));
    let singular = e > 1;
    let mut out = Vec::new();

    out.push(BoundEntry::applicable(
        "kunz",
        BoundValue::exact(&one),
        if e == 1 {
            "regular: Kunz equality"
        } else {
            "e_HK >= 1, with equality only for regular rings"
        },
    ));

    let be = &one + (int(p as i64).pow(d as i32) * &fact).recip();
    out.push(if singular {
        BoundEntry::applicable("blickle-enescu", BoundValue::exact(&be), "strict inequality for non-regular rings")
    } else {
        BoundEntry::inapplicable("blickle-enescu", Some(BoundValue::exact(&be)), "requires a non-regular ring")
    });

    let wy2 = int(e as i64 + 1) / int(2);
    out.push(if d == 2 && singular {
        BoundEntry::applicable("watanabe-yoshida-dim2", BoundValue::exact(&wy2), "(e+1)/2; assumes Cohen-Macaulay")
    } else {
        BoundEntry::inapplicable("watanabe-yoshida-dim2", None, "requires dimension 2 and e > 1")
    });

    if d >= 1 && t >= 1 {
        let (s, v) = wy_volume_bound_best(e, d, t);
        let note = format!("r = mu(m) = {t} as an upper bound for mu(m/J*); best s = {s} on the 1/64 grid");
        out.push(if singular {
            BoundEntry::applicable("watanabe-yoshida-volume", BoundValue::exact(&v), note)
        } else {
            BoundEntry::inapplicable("watanabe-yoshida-volume", Some(BoundValue::exact(&v)), "requires e > 1")
        });
    }

    if hypersurface {
        let b = beta_hypersurface(d) * int(e as i64);
        out.push(BoundEntry::applicable(
            "hypersurface-volume",
            BoundValue::exact(&b),
            "beta_{d+1} * e for hypersurfaces",
        ));
    } else {
        out.push(BoundEntry::inapplicable("hypersurface-volume", None, "requires a hypersurface"));
    }

    if d >= 2 {
        let di = d as i64;
        let base = &fact * int(di - 1) + &one;
        let ae = &one + (int(di) * base.pow(d as i32)).recip();
        out.push(if singular {
            BoundEntry::applicable("aberbach-enescu", BoundValue::exact(&ae), "non-regular, d >= 2")
        } else {
            BoundEntry::inapplicable("aberbach-enescu", Some(BoundValue::exact(&ae)), "requires a non-regular ring")
        });
    } else {
        out.push(BoundEntry::inapplicable("aberbach-enescu", None, "requires d >= 2"));
    }

    let cdhz = &one + (&fact * int(d as i64).pow(d as i32)).recip();
    out.push(if singular {
        BoundEntry::applicable("celikbas-dao-huneke-zhang", BoundValue::exact(&cdhz), "1 + 1/(d! d^d) for e > 1")
    } else {
        BoundEntry::inapplicable("celikbas-dao-huneke-zhang", Some(BoundValue::exact(&cdhz)), "requires e > 1")
    });

    if d >= 2 && t >= 2 {
        let hanes = hanes_bound(e, d, t);
        out.push(BoundEntry::applicable("hanes", hanes, format!("t = {t} generators")));
    } else {
        out.push(BoundEntry::inapplicable("hanes", None, "requires d >= 2 and t >= 2"));
    }

    if hypersurface && d >= 3 {
        let v = int(e as i64) * int(2).pow(d as i32 - 1) / &fact;
        out.push(BoundEntry::applicable(
            "hanes-hypersurface",
            BoundValue::exact(&v),
            "e 2^(d-1)/d! for hypersurfaces, d >= 3",
        ));
    } else {
        out.push(BoundEntry::inapplicable(
            "hanes-hypersurface",
            None,
            "requires a hypersurface with d >= 3",
        ));
    }

    let gor = (e > 1).then(|| BoundValue::exact(&(&one + int(e as i64 - 1).recip())));
    out.push(BoundEntry::inapplicable(
        "gorenstein-non-f-rational",
        gor,
        "requires a Gorenstein ring that is not F-rational, which is not checked",
    ));

    let mut conj = BoundEntry::applicable(
        "sec-tan-conjecture",
        BoundValue::exact(&(&one + sectan_coefficient(d))),
        "conjectural: 1 + a_d for non-regular rings; informational only",
    );
    conj.informational = true;
    conj.applicable = singular;
    out.push(conj);

    BoundReport { inputs: inp, entries: out }
}

/// `(e/d!) t / (t^(1/(d-1)) - 1)^(d-1)`, exact when `t` is a perfect
/// `(d-1)`-th power.
fn hanes_bound(e: u64, d: usize, t: u64) -> BoundValue {
    let k = (d - 1) as u32;
    let root = (t as f64).powf(1.0 / k as f64).round() as u64;
    let fact = BigRational::from_integer(factorial(d));
    if root.checked_pow(k) == Some(t) && root > 1 {
        let denom = int(root as i64 - 1).pow(k as i32);
        BoundValue::exact(&(int(e as i64) / fact * int(t as i64) / denom))
    } else {
        let fact = fact.to_f64().unwrap_or(f64::INFINITY);
        let v = e as f64 / fact * t as f64 / ((t as f64).powf(1.0 / k as f64) - 1.0).powi(k as i32);
        BoundValue::real(v)
    }
}

impl BoundReport {
    /// Marks each applicable entry as satisfied iff `alpha >= value - slack`.
    pub fn evaluate(&mut self, alpha: f64, slack: f64) {
        for entry in &mut self.entries {
            if let (true, Some(v)) = (entry.applicable, &entry.value) {
                entry.satisfied = Some(alpha >= v.value - slack);
            }
        }
    }

    pub fn all_ok(&self) -> bool {
        self.entries.iter().all(BoundEntry::ok)
    }

    pub fn get(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}
