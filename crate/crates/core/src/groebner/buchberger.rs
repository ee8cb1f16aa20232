use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::Arc;
use std::time::Instant;

use crate::polyfield::{Monomial, Poly, PolyRing};

use super::reduce::{reduce_bucket, reduce_poly, GeoBucket, Reducers};
use super::GroebnerError;

/// Wall-clock and cancellation limits for a Groebner computation.
#[derive(Clone, Copy, Default)]
pub struct Limits<'a> {
    pub deadline: Option<Instant>,
    pub cancel: Option<&'a AtomicBool>,
}

impl Limits<'_> {
    pub fn none() -> Self {
        Limits::default()
    }

    pub(crate) fn check(&self) -> Result<(), GroebnerError> {
        if let Some(flag) = self.cancel {
            if flag.load(AtomicOrdering::Relaxed) {
                return Err(GroebnerError::Cancelled);
            }
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() >= deadline {
                return Err(GroebnerError::Timeout);
            }
        }
        Ok(())
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct State<'r> {
    ring: &'r Arc<PolyRing>,
    basis: Vec<Poly>,
    lms: Vec<Monomial>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl State<'_> {
    fn reducers(&self) -> Reducers<'_> {
        Reducers::new(self.basis.iter().zip(&self.active).filter(|(_, &a)| a).map(|(p, _)| p))
    }

    fn insert(&mut self, h: Poly) {
        let h = h.monic();
        let hl = h.leading_monomial().unwrap().clone();
        let hi = self.basis.len();

        // Gebauer-Moeller: among the new pairs keep those whose lcm is not
        // a proper multiple of another new pair's lcm (coprime pairs are
        // kept for this test, then dropped by the product criterion).
        let mut cands: Vec<(usize, Monomial)> = (0..hi).filter(|&g| self.active[g]).map(|g| (g, hl.lcm(&self.lms[g]))).collect();
        cands.reverse();
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        while let Some((g1, l1)) = cands.pop() {
            let coprime = hl.is_coprime(&self.lms[g1]);
            let dominated = cands.iter().any(|(_, l2)| l2.divides(&l1)) || kept.iter().any(|(_, l2, _)| l2.divides(&l1));
            if coprime || !dominated {
                kept.push((g1, l1, coprime));
            }
        }

        let lms = &self.lms;
        self.pairs
            .retain(|pr| !(hl.divides(&pr.lcm) && lms[pr.i].lcm(&hl) != pr.lcm && lms[pr.j].lcm(&hl) != pr.lcm));
        self.pairs.extend(
            kept.into_iter()
                .filter(|(_, _, coprime)| !coprime)
                .map(|(g, lcm, _)| Pair { i: g, j: hi, lcm }),
        );

        for g in 0..hi {
            if self.active[g] && hl.divides(&self.lms[g]) {
                self.active[g] = false;
            }
        }
        self.basis.push(h);
        self.lms.push(hl);
        self.active.push(true);
    }

    /// Normal selection: smallest lcm degree, then smallest pair indices.
    fn select(&mut self) -> Option<Pair> {
        let k = self
            .pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, p)| (p.lcm.degree(), p.i, p.j))
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(k))
    }

    fn s_poly_remainder(&self, pair: &Pair) -> Poly {
        let ring: &PolyRing = self.ring;
        let (f, g) = (&self.basis[pair.i], &self.basis[pair.j]);
        let u = self.lms[pair.i].quotient_of(&pair.lcm).unwrap();
        let v = self.lms[pair.j].quotient_of(&pair.lcm).unwrap();
        let p = ring.field().characteristic();
        let mut acc = GeoBucket::new(ring);
        acc.add_multiple(&f.terms()[1..], &u, 1);
        acc.add_multiple(&g.terms()[1..], &v, p - 1);
        reduce_bucket(self.ring, acc, &self.reducers())
    }
}

/// Reduced Groebner basis of the ideal generated by `gens`, sorted by
/// ascending leading monomial. Deterministic for a given input sequence.
pub(crate) fn reduced_basis(ring: &Arc<PolyRing>, gens: &[Poly], limits: &Limits<'_>) -> Result<Vec<Poly>, GroebnerError> {
    let order = ring.order();
    let mut inputs: Vec<&Poly> = gens.iter().filter(|g| !g.is_zero()).collect();
    inputs.sort_by(|a, b| {
        order
            .compare(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
            .then_with(|| a.len().cmp(&b.len()))
    });

    let mut state = State {
        ring,
        basis: Vec::new(),
        lms: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    for g in inputs {
        limits.check()?;
        let h = reduce_poly(g, &state.reducers());
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(vec![Poly::one(ring)]);
        }
        state.insert(h);
    }

    while let Some(pair) = state.select() {
        limits.check()?;
        let h = state.s_poly_remainder(&pair);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(vec![Poly::one(ring)]);
        }
        state.insert(h);
    }

    let mut minimal: Vec<Poly> = state
        .basis
        .into_iter()
        .zip(state.active)
        .filter(|(_, a)| *a)
        .map(|(p, _)| p)
        .collect();
    minimal.sort_by(|a, b| order.compare(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));

    // Tail-reduce every element against the others; leading monomials form
    // an antichain, so the leading terms are untouched.
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        limits.check()?;
        let reducers = Reducers::new(minimal.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, p)| p));
        let lead = minimal[k].terms()[0].clone();
        let tail = Poly::from_sorted(ring, minimal[k].terms()[1..].to_vec());
        let tail = reduce_poly(&tail, &reducers);
        let mut terms = Vec::with_capacity(tail.len() + 1);
        terms.push(lead);
        terms.extend(tail.terms().iter().cloned());
        reduced.push(Poly::from_sorted(ring, terms));
    }
    debug_assert!(reduced
        .windows(2)
        .all(|w| order.compare(w[0].leading_monomial().unwrap(), w[1].leading_monomial().unwrap()) == Ordering::Less));
    Ok(reduced)
}
