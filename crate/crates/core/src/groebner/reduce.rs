use std::cmp::Ordering;
use std::sync::Arc;

use crate::polyfield::{Monomial, Poly, PolyRing, Term};

/// Geometric bucket accumulator for a polynomial under reduction. Bucket `i`
/// holds at most `4^(i+1)` terms, so adding a reducer costs time roughly
/// proportional to the reducer's length rather than the accumulator's.
///
/// Buckets keep their terms in *ascending* order so the leading term of
/// each bucket sits at the back.
pub(crate) struct GeoBucket<'r> {
    ring: &'r PolyRing,
    buckets: Vec<Vec<Term>>,
}

fn capacity(i: usize) -> usize {
    4usize << (2 * i)
}

impl<'r> GeoBucket<'r> {
    pub(crate) fn new(ring: &'r PolyRing) -> Self {
        GeoBucket { ring, buckets: Vec::new() }
    }

    /// Adds canonical (descending) terms.
    pub(crate) fn add_sorted(&mut self, mut terms: Vec<Term>) {
        terms.reverse();
        self.add_ascending(terms);
    }

    /// Adds `c * m * terms` for canonical `terms`.
    pub(crate) fn add_multiple(&mut self, terms: &[Term], m: &Monomial, c: u64) {
        let field = self.ring.field();
        let scaled: Vec<Term> = terms.iter().rev().map(|(t, a)| (t.mul(m), field.mul(*a, c))).collect();
        self.add_ascending(scaled);
    }

    fn add_ascending(&mut self, terms: Vec<Term>) {
        if terms.is_empty() {
            return;
        }
        let mut i = 0;
        while capacity(i) < terms.len() {
            i += 1;
        }
        let mut incoming = terms;
        loop {
            if self.buckets.len() <= i {
                self.buckets.resize_with(i + 1, Vec::new);
            }
            let existing = std::mem::take(&mut self.buckets[i]);
            let merged = if existing.is_empty() {
                incoming
            } else {
                merge_ascending(self.ring, existing, incoming)
            };
            if merged.len() <= capacity(i) {
                self.buckets[i] = merged;
                return;
            }
            incoming = merged;
            i += 1;
        }
    }

    /// Removes and returns the leading term of the accumulated polynomial.
    pub(crate) fn pop_leading(&mut self) -> Option<Term> {
        let order = self.ring.order();
        let field = self.ring.field();
        loop {
            let mut best: Option<usize> = None;
            for (i, b) in self.buckets.iter().enumerate() {
                let Some(t) = b.last() else { continue };
                best = match best {
                    Some(j) if order.compare(&t.0, &self.buckets[j].last().unwrap().0) != Ordering::Greater => Some(j),
                    _ => Some(i),
                };
            }
            let j = best?;
            let (m, mut c) = self.buckets[j].pop().unwrap();
            for (i, b) in self.buckets.iter_mut().enumerate() {
                if i == j {
                    continue;
                }
                if matches!(b.last(), Some(t) if t.0 == m) {
                    c = field.add(c, b.pop().unwrap().1);
                }
            }
            if c != 0 {
                return Some((m, c));
            }
        }
    }
}

fn merge_ascending(ring: &PolyRing, a: Vec<Term>, b: Vec<Term>) -> Vec<Term> {
    let order = ring.order();
    let field = ring.field();
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.into_iter().peekable();
    let mut ib = b.into_iter().peekable();
    loop {
        let ord = match (ia.peek(), ib.peek()) {
            (Some(x), Some(y)) => order.compare(&x.0, &y.0),
            (Some(_), None) => {
                out.extend(ia);
                break;
            }
            (None, Some(_)) => {
                out.extend(ib);
                break;
            }
            (None, None) => break,
        };
        match ord {
            Ordering::Less => out.push(ia.next().unwrap()),
            Ordering::Greater => out.push(ib.next().unwrap()),
            Ordering::Equal => {
                let (m, c1) = ia.next().unwrap();
                let (_, c2) = ib.next().unwrap();
                let c = field.add(c1, c2);
                if c != 0 {
                    out.push((m, c));
                }
            }
        }
    }
    out
}

/// Monic polynomials used as reducers, with cached leading-monomial masks.
pub(crate) struct Reducers<'a> {
    polys: Vec<&'a Poly>,
    masks: Vec<u64>,
}

impl<'a> Reducers<'a> {
    pub(crate) fn new(polys: impl IntoIterator<Item = &'a Poly>) -> Self {
        let polys: Vec<&Poly> = polys.into_iter().filter(|p| !p.is_zero()).collect();
        debug_assert!(polys.iter().all(|p| p.leading_coeff() == Some(1)));
        let masks = polys.iter().map(|p| p.leading_monomial().unwrap().divmask()).collect();
        Reducers { polys, masks }
    }

    #[inline]
    pub(crate) fn find(&self, m: &Monomial) -> Option<&'a Poly> {
        let mask = m.divmask();
        self.polys
            .iter()
            .zip(&self.masks)
            .find(|(p, &pm)| pm & !mask == 0 && p.leading_monomial().unwrap().divides(m))
            .map(|(p, _)| *p)
    }
}

/// Fully reduces the accumulated polynomial against monic `reducers`.
pub(crate) fn reduce_bucket(ring: &Arc<PolyRing>, mut acc: GeoBucket<'_>, reducers: &Reducers<'_>) -> Poly {
    let p = ring.field().characteristic();
    let mut rest: Vec<Term> = Vec::new();
    while let Some((m, c)) = acc.pop_leading() {
        match reducers.find(&m) {
            Some(g) => {
                let u = g.leading_monomial().unwrap().quotient_of(&m).unwrap();
                acc.add_multiple(&g.terms()[1..], &u, p - c);
            }
            None => rest.push((m, c)),
        }
    }
    Poly::from_sorted(ring, rest)
}

pub(crate) fn reduce_poly(f: &Poly, reducers: &Reducers<'_>) -> Poly {
    let ring = f.ring().clone();
    let mut acc = GeoBucket::new(&ring);
    acc.add_sorted(f.terms().to_vec());
    reduce_bucket(&ring, acc, reducers)
}
