use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{Monomial, MonomialOrder, PolyError, PrimeField};

/// The ambient ring `F_p[x_1..x_n]` together with the active monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: PrimeField,
    nvars: usize,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new(field: PrimeField, nvars: usize, order: MonomialOrder) -> Arc<Self> {
        assert_eq!(order.nvars(), nvars, "order defined on wrong variable count");
        Arc::new(PolyRing { field, nvars, order })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn with_order(&self, order: MonomialOrder) -> Arc<Self> {
        PolyRing::new(self.field, self.nvars, order)
    }
}

pub type Term = (Monomial, u64);

/// A polynomial over F_p, stored as terms strictly descending in the ring's
/// monomial order with no zero coefficients. The zero polynomial has no terms.
#[derive(Clone)]
pub struct Poly {
    ring: Arc<PolyRing>,
    terms: Vec<Term>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly {}

#[inline]
fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Poly {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Poly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: i64) -> Self {
        let c = ring.field.from_i64(c);
        Self::monomial(ring, Monomial::one(ring.nvars), c)
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, 1)
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        Self::monomial(ring, Monomial::var_power(ring.nvars, i, 1), 1)
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: u64) -> Self {
        debug_assert_eq!(m.nvars(), ring.nvars);
        let c = c % ring.field.characteristic();
        Poly {
            ring: ring.clone(),
            terms: if c == 0 { Vec::new() } else { vec![(m, c)] },
        }
    }

    /// Builds a polynomial from terms in any order, merging duplicates.
    pub fn from_terms(ring: &Arc<PolyRing>, mut terms: Vec<Term>) -> Self {
        let field = ring.field;
        let order = &ring.order;
        terms.sort_by(|a, b| order.compare(&b.0, &a.0));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let c = c % field.characteristic();
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = field.add(last.1, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Poly {
            ring: ring.clone(),
            terms: out,
        }
    }

    /// Trusted constructor: `terms` must already be canonical.
    pub(crate) fn from_sorted(ring: &Arc<PolyRing>, terms: Vec<Term>) -> Self {
        let p = Poly { ring: ring.clone(), terms };
        debug_assert!(p.is_canonical());
        p
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<u64> {
        self.terms.first().map(|t| t.1)
    }

    pub fn constant_term(&self) -> u64 {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => *c,
            _ => 0,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.degree() == w[1].0.degree())
    }

    /// Checks the storage invariant: strictly descending, no zero coefficients.
    pub fn is_canonical(&self) -> bool {
        let p = self.ring.field.characteristic();
        self.terms.iter().all(|(m, c)| *c != 0 && *c < p && m.nvars() == self.ring.nvars)
            && self
                .terms
                .windows(2)
                .all(|w| self.ring.order.compare(&w[0].0, &w[1].0) == Ordering::Greater)
    }

    fn check_ring(&self, other: &Poly) -> Result<(), PolyError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(PolyError::AmbientMismatch)
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        Ok(self.add_scaled(other, 1))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        let minus_one = self.ring.field.neg(1);
        Ok(self.add_scaled(other, minus_one))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// `self + c * other`.
    pub(crate) fn add_scaled(&self, other: &Poly, c: u64) -> Poly {
        let field = self.ring.field;
        let order = &self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match order.compare(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let v = field.mul(b[j].1, c);
                    if v != 0 {
                        out.push((b[j].0.clone(), v));
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let v = field.add(a[i].1, field.mul(b[j].1, c));
                    if v != 0 {
                        out.push((a[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let v = field.mul(t.1, c);
            if v != 0 {
                out.push((t.0.clone(), v));
            }
        }
        Poly::from_sorted(&self.ring, out)
    }

    pub fn scale(&self, c: u64) -> Poly {
        let field = self.ring.field;
        let c = c % field.characteristic();
        if c == 0 {
            return Poly::zero(&self.ring);
        }
        Poly::from_sorted(&self.ring, self.terms.iter().map(|(m, a)| (m.clone(), field.mul(*a, c))).collect())
    }

    /// `c * m * self`; multiplying by a monomial preserves the term order.
    pub fn mul_term(&self, m: &Monomial, c: u64) -> Poly {
        let field = self.ring.field;
        let c = c % field.characteristic();
        if c == 0 {
            return Poly::zero(&self.ring);
        }
        Poly::from_sorted(&self.ring, self.terms.iter().map(|(t, a)| (t.mul(m), field.mul(*a, c))).collect())
    }

    pub(crate) fn mul_unchecked(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ring);
        }
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return big.mul_term(m, *c);
        }
        let field = self.ring.field;
        let mut raw = Vec::with_capacity(self.len() * other.len());
        for (ma, ca) in &small.terms {
            for (mb, cb) in &big.terms {
                raw.push((ma.mul(mb), field.mul(*ca, *cb)));
            }
        }
        Poly::from_terms(&self.ring, raw)
    }

    pub fn pow(&self, mut n: u64) -> Poly {
        let mut acc = Poly::one(&self.ring);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// `f^q` for `q` a power of the characteristic: exponents are multiplied
    /// by `q` and coefficients are fixed (Fermat), so no expansion happens.
    pub fn frobenius(&self, q: u64) -> Result<Poly, PolyError> {
        let p = self.ring.field.characteristic();
        if !is_power_of(q, p) {
            return Err(PolyError::NotPowerOfP { q, p });
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let scaled = m.scale(q).ok_or(PolyError::ExponentOverflow)?;
            terms.push((scaled, *c));
        }
        // Scaling exponents uniformly is order preserving for every
        // supported order, so the result is already sorted.
        Ok(Poly::from_sorted(&self.ring, terms))
    }

    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            None | Some(1) => self.clone(),
            Some(c) => {
                let inv = self.ring.field.inv(c).expect("nonzero leading coefficient");
                self.scale(inv)
            }
        }
    }

    /// Re-sorts the same polynomial under another order on the same variables.
    pub fn reorder(&self, ring: &Arc<PolyRing>) -> Result<Poly, PolyError> {
        if ring.field != self.ring.field || ring.nvars != self.ring.nvars {
            return Err(PolyError::AmbientMismatch);
        }
        Ok(Poly::from_terms(ring, self.terms.clone()))
    }

    /// Image under `x_i -> x_{i+k}` in a ring with `k` extra leading variables.
    pub(crate) fn prepend_vars(&self, ring: &Arc<PolyRing>, k: usize) -> Poly {
        debug_assert_eq!(ring.nvars, self.ring.nvars + k);
        Poly::from_terms(ring, self.terms.iter().map(|(m, c)| (m.prepend_zeros(k), *c)).collect())
    }

    /// Inverse of `prepend_vars`; `None` if a dropped variable occurs.
    pub(crate) fn drop_vars(&self, ring: &Arc<PolyRing>, k: usize) -> Option<Poly> {
        if self.terms.iter().any(|(m, _)| m.exps()[..k].iter().any(|&a| a > 0)) {
            return None;
        }
        Some(Poly::from_terms(
            ring,
            self.terms.iter().map(|(m, c)| (m.drop_front(k), *c)).collect(),
        ))
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.terms.first()?;
        let field = self.ring.field;
        let inv = field.inv(*lc).ok()?;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first() {
            let qm = lm.quotient_of(m)?;
            let qc = field.mul(*c, inv);
            rem = rem.add_scaled(&divisor.mul_term(&qm, qc), field.neg(1));
            quot.push((qm, qc));
        }
        Some(Poly::from_sorted(&self.ring, quot))
    }

    /// Formats with the given variable names (`x1, x2, ...` if `None`).
    pub fn display_with<'a>(&'a self, names: Option<&'a [String]>) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

pub fn is_power_of(q: u64, p: u64) -> bool {
    if q == 0 || p < 2 {
        return false;
    }
    let mut x = q;
    while x.is_multiple_of(p) {
        x /= p;
    }
    x == 1
}

/// Returns `e` with `p^e = q`, if any.
pub fn log_base(q: u64, p: u64) -> Option<u32> {
    if !is_power_of(q, p) {
        return None;
    }
    let (mut x, mut e) = (q, 0);
    while x > 1 {
        x /= p;
        e += 1;
    }
    Some(e)
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: Option<&'a [String]>,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly = self.poly;
        if poly.is_zero() {
            return f.write_str("0");
        }
        let field = poly.ring.field;
        for (k, (m, c)) in poly.terms.iter().enumerate() {
            let s = field.signed(*c);
            let mag = s.unsigned_abs();
            if k == 0 {
                if s < 0 {
                    f.write_str("-")?;
                }
            } else if s < 0 {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mut first = true;
            if mag != 1 || m.is_one() {
                write!(f, "{mag}")?;
                first = false;
            }
            for (i, &a) in m.exps().iter().enumerate() {
                if a == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                match self.names {
                    Some(names) => f.write_str(&names[i])?,
                    None => write!(f, "x{}", i + 1)?,
                }
                if a > 1 {
                    write!(f, "^{a}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(None))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(None))
    }
}

// Operator impls panic on ambient mismatch, like slice indexing does on
// out-of-range access. The `checked_*` methods report it as an error.
impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomials from different rings")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomials from different rings")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomials from different rings")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(self.ring.field.neg(1))
    }
}
