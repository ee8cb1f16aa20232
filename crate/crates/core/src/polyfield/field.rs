use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::PolyError;

/// Largest supported characteristic.
pub const MAX_PRIME: u64 = 1 << 31;

/// The prime field F_p. Residues are stored as `u64` in `[0, p)`; with
/// `p <= 2^31` every product of two residues fits in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, PolyError> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(PolyError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn from_u64(&self, v: u64) -> u64 {
        v % self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Result<u64, PolyError> {
        if a.is_multiple_of(self.p) {
            return Err(PolyError::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.p as i64, (a % self.p) as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        Ok(self.from_i64(t0))
    }

    /// Symmetric representative in `(-p/2, p/2]`, used for printing.
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn elem(&self, v: i64) -> FieldElem {
        FieldElem {
            value: self.from_i64(v),
            field: *self,
        }
    }
}

/// A residue together with its field, for callers that want checked
/// element-level arithmetic. Polynomials store bare residues instead.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    value: u64,
    field: PrimeField,
}

impl FieldElem {
    pub fn new(value: i64, field: PrimeField) -> Self {
        field.elem(value)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.field.p
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &FieldElem) -> Result<(), PolyError> {
        if self.field != other.field {
            return Err(PolyError::ModulusMismatch(self.field.p, other.field.p));
        }
        Ok(())
    }

    pub fn checked_add(self, other: FieldElem) -> Result<FieldElem, PolyError> {
        self.check(&other)?;
        Ok(FieldElem {
            value: self.field.add(self.value, other.value),
            field: self.field,
        })
    }

    pub fn checked_sub(self, other: FieldElem) -> Result<FieldElem, PolyError> {
        self.check(&other)?;
        Ok(FieldElem {
            value: self.field.sub(self.value, other.value),
            field: self.field,
        })
    }

    pub fn checked_mul(self, other: FieldElem) -> Result<FieldElem, PolyError> {
        self.check(&other)?;
        Ok(FieldElem {
            value: self.field.mul(self.value, other.value),
            field: self.field,
        })
    }

    pub fn inv(self) -> Result<FieldElem, PolyError> {
        Ok(FieldElem {
            value: self.field.inv(self.value)?,
            field: self.field,
        })
    }

    pub fn pow(self, exp: u64) -> FieldElem {
        FieldElem {
            value: self.field.pow(self.value, exp),
            field: self.field,
        }
    }
}

// The operator impls panic on mismatched moduli; use the `checked_*`
// methods when operands come from different sources.
impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: FieldElem) -> FieldElem {
        self.checked_add(rhs).expect("field modulus mismatch")
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: FieldElem) -> FieldElem {
        self.checked_sub(rhs).expect("field modulus mismatch")
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: FieldElem) -> FieldElem {
        self.checked_mul(rhs).expect("field modulus mismatch")
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.field.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!((f5.elem(3) + f5.elem(4)).value(), 2);
        assert_eq!(f5.elem(2).inv().unwrap().value(), 3);
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!((f7.elem(6) * f7.elem(6)).value(), 1);
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f5 = PrimeField::new(5).unwrap();
        assert!(matches!(f5.elem(0).inv(), Err(PolyError::ZeroInverse)));
        assert!(matches!(f5.elem(10).inv(), Err(PolyError::ZeroInverse)));
    }

    #[test]
    fn rejects_composites_and_oversized() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(0).is_err());
        assert!(PrimeField::new(2_147_483_647).is_ok());
        assert!(PrimeField::new((1 << 31) + 11).is_err());
    }

    #[test]
    fn inverses_are_inverses() {
        for p in [2u64, 3, 5, 7, 101, 65_537] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p.min(500) {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn mismatched_moduli() {
        let a = PrimeField::new(5).unwrap().elem(1);
        let b = PrimeField::new(7).unwrap().elem(1);
        assert!(matches!(a.checked_add(b), Err(PolyError::ModulusMismatch(5, 7))));
    }
}
