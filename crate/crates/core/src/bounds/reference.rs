use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::estimate::Fraction;

/// A ring with a known Hilbert-Kunz multiplicity (and F-signature, when
/// known), valid in characteristic `p >= min_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefEntry {
    pub id: String,
    pub equation: String,
    pub e_hk: Fraction,
    pub s: Option<Fraction>,
    pub min_p: u64,
}

fn entry(id: String, equation: impl Into<String>, e_hk: Fraction, s: Option<Fraction>, min_p: u64) -> RefEntry {
    RefEntry {
        id,
        equation: equation.into(),
        e_hk,
        s,
        min_p,
    }
}

/// Rational double point of type `G` with `order = |G|`: `e_HK = 2 - 1/|G|`,
/// `s = 1/|G|`.
fn ade(id: String, equation: String, order: u64, min_p: u64) -> RefEntry {
    let e_hk = Fraction::new(2 * order as i64 - 1, order);
    entry(id, equation, e_hk, Some(Fraction::new(1, order)), min_p)
}

/// `(1/r) C(d+r-1, d)` for the `r`-th Veronese subring of `k[x_1..x_d]`:
/// the colength of `(x_1..x_d)^r` divided by the rank `r`.
pub fn veronese_ehk(d: u64, r: u64) -> Option<Fraction> {
    if d == 0 || r == 0 {
        return None;
    }
    let c = binomial(BigInt::from(d + r - 1), BigInt::from(d)).to_i64()?;
    Some(Fraction::new(c, r))
}

/// Looks up a ring id: `A<n>` (n >= 1), `D<n>` (n >= 4), `E6`, `E7`, `E8`,
/// `quadric_rank1..3`, `cubic_smooth`, `cubic_nodal`, `veronese_d<d>_r<r>`.
pub fn lookup(id: &str) -> Option<RefEntry> {
    let num = |s: &str| s.parse::<u64>().ok();
    if let Some(n) = id.strip_prefix('A').and_then(num) {
        return (n >= 1).then(|| ade(id.into(), format!("x*y + z^{}", n + 1), n + 1, 2));
    }
    if let Some(n) = id.strip_prefix('D').and_then(num) {
        return (n >= 4).then(|| ade(id.into(), format!("x^2 + y*z^2 + y^{}", n - 1), 4 * (n - 2), 3));
    }
    if let Some(rest) = id.strip_prefix("veronese_d") {
        let (d, r) = rest.split_once("_r")?;
        let (d, r) = (num(d)?, num(r)?);
        return veronese_ehk(d, r).map(|v| entry(id.into(), format!("k[x_1..x_{d}]^({r})"), v, None, 2));
    }
    let e = match id {
        "E6" => ade(id.into(), "x^2 + y^3 + z^4".into(), 24, 5),
        "E7" => ade(id.into(), "x^2 + y^3 + y*z^3".into(), 48, 5),
        "E8" => ade(id.into(), "x^2 + y^3 + z^5".into(), 120, 7),
        "quadric_rank1" => entry(id.into(), "X^2", Fraction::new(2, 1), None, 3),
        "quadric_rank2" => entry(id.into(), "X^2 - Y*Z", Fraction::new(3, 2), None, 3),
        "quadric_rank3" => entry(id.into(), "X*Y - Z*W", Fraction::new(4, 3), None, 3),
        "cubic_smooth" => entry(id.into(), "x^3 + y^3 + z^3", Fraction::new(9, 4), None, 5),
        "cubic_nodal" => entry(id.into(), "x^3 + y^3 + x*y*z", Fraction::new(7, 3), None, 5),
        _ => return None,
    };
    Some(e)
}

/// The static table: the ADE series for small `n`, the exceptional types,
/// the quadrics in four variables, the cubic cones and a few Veronese rings.
pub fn reference_values() -> Vec<RefEntry> {
    let mut ids: Vec<String> = (1..=8).map(|n| format!("A{n}")).collect();
    ids.extend((4..=8).map(|n| format!("D{n}")));
    ids.extend(
        [
            "E6",
            "E7",
            "E8",
            "quadric_rank1",
            "quadric_rank2",
            "quadric_rank3",
            "cubic_smooth",
            "cubic_nodal",
        ]
        .map(String::from),
    );
    ids.extend(["veronese_d2_r2", "veronese_d2_r3", "veronese_d3_r2"].map(String::from));
    ids.iter().map(|id| lookup(id).expect("table id")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        assert_eq!(lookup("E8").unwrap().e_hk, Fraction::new(239, 120));
        assert_eq!(lookup("quadric_rank3").unwrap().e_hk, Fraction::new(4, 3));
        assert_eq!(lookup("A2").unwrap().s, Some(Fraction::new(1, 3)));
        assert_eq!(lookup("A1").unwrap().e_hk, Fraction::new(3, 2));
        assert_eq!(lookup("D4").unwrap().e_hk, Fraction::new(15, 8));
        assert_eq!(lookup("D5").unwrap().s, Some(Fraction::new(1, 12)));
        assert_eq!(lookup("E6").unwrap().e_hk, Fraction::new(47, 24));
        assert_eq!(lookup("E7").unwrap().min_p, 5);
        assert_eq!(lookup("E8").unwrap().min_p, 7);
        assert_eq!(lookup("D3"), None);
        assert_eq!(lookup("A0"), None);
        assert_eq!(lookup("F4"), None);
    }

    #[test]
    fn veronese() {
        // the quadric cone is the second Veronese of k[x,y]
        assert_eq!(lookup("veronese_d2_r2").unwrap().e_hk, lookup("A1").unwrap().e_hk);
        for r in 1..10 {
            assert_eq!(veronese_ehk(2, r), Some(Fraction::new(r as i64 + 1, 2)));
        }
        assert_eq!(veronese_ehk(3, 2), Some(Fraction::new(2, 1)));
        assert_eq!(veronese_ehk(1, 5), Some(Fraction::new(1, 1)));
    }

    #[test]
    fn table_is_complete() {
        let all = reference_values();
        assert!(all.iter().all(|e| lookup(&e.id).as_ref() == Some(e)));
        assert!(all.iter().any(|e| e.id == "cubic_nodal"));
    }
}
