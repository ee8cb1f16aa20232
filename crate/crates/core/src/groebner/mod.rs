//! Buchberger's algorithm over F_p and what is built on it: normal forms,
//! ideal membership, colon ideals, Krull dimension and colengths.

mod buchberger;
mod ideal;
mod reduce;
mod staircase;

use std::sync::Arc;

use thiserror::Error;

use crate::polyfield::{Monomial, Poly, PolyRing};

pub use buchberger::Limits;
pub use ideal::{ideal_colon_ideal, ideal_quotient, intersect, is_gorenstein_artinian, variables};
pub use staircase::{Colength, Staircase};

use reduce::{reduce_poly, Reducers};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("the ideal is the unit ideal")]
    UnitIdeal,
    #[error("colon by the zero polynomial")]
    ZeroDivisor,
    #[error("colon by an empty generator list")]
    EmptyColon,
    #[error("quotient has infinite colength")]
    InfiniteColength,
    #[error("Groebner computation exceeded its time limit")]
    Timeout,
    #[error("Groebner computation cancelled")]
    Cancelled,
    #[error("polynomials belong to different rings")]
    AmbientMismatch,
}

/// A reduced Groebner basis: monic generators sorted by ascending leading
/// monomial, plus the staircase of their leading monomials.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    gens: Vec<Poly>,
    staircase: Staircase,
}

impl GroebnerBasis {
    /// Runs Buchberger's algorithm. An empty or all-zero input yields the
    /// zero ideal.
    pub fn new(ring: &Arc<PolyRing>, gens: &[Poly]) -> Self {
        Self::with_limits(ring, gens, &Limits::none()).expect("no limits set")
    }

    pub fn with_limits(ring: &Arc<PolyRing>, gens: &[Poly], limits: &Limits<'_>) -> Result<Self, GroebnerError> {
        if gens.iter().any(|g| **g.ring() != **ring) {
            return Err(GroebnerError::AmbientMismatch);
        }
        let gens = buchberger::reduced_basis(ring, gens, limits)?;
        Ok(Self::from_reduced(ring, gens))
    }

    fn from_reduced(ring: &Arc<PolyRing>, gens: Vec<Poly>) -> Self {
        let staircase = Staircase::new(ring.nvars(), gens.iter().map(|g| g.leading_monomial().unwrap().clone()));
        GroebnerBasis {
            ring: ring.clone(),
            gens,
            staircase,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.gens.iter().map(|g| g.leading_monomial().unwrap())
    }

    pub fn staircase(&self) -> &Staircase {
        &self.staircase
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_constant()
    }

    /// Remainder of `f` on division by the basis; unique for a reduced basis.
    pub fn normal_form(&self, f: &Poly) -> Poly {
        reduce_poly(f, &Reducers::new(self.gens.iter()))
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.normal_form(f).is_zero()
    }

    /// True iff every generator of `other` lies in this ideal.
    pub fn contains_ideal(&self, other: &GroebnerBasis) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    /// F_p-dimension of `F_p[x]/I` by counting standard monomials.
    pub fn colength(&self) -> Colength {
        self.staircase.colength()
    }

    /// Krull dimension of `F_p[x]/I`: the largest set of variables none of
    /// whose subsets supports a leading monomial.
    pub fn krull_dimension(&self) -> Result<usize, GroebnerError> {
        if self.is_unit_ideal() {
            return Err(GroebnerError::UnitIdeal);
        }
        let n = self.ring.nvars();
        let supports: Vec<u64> = self.staircase.corners().iter().map(|m| m.divmask()).collect();
        assert!(n <= 64, "independent-set search limited to 64 variables");
        let mut best = 0;
        for set in 0u64..(1u64 << n) {
            let size = set.count_ones() as usize;
            if size > best && supports.iter().all(|&s| s & !set != 0) {
                best = size;
            }
        }
        Ok(best)
    }

    /// Every S-polynomial of the basis reduces to zero (Buchberger's
    /// criterion, checked from scratch).
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        for i in 0..self.gens.len() {
            for j in i + 1..self.gens.len() {
                if !self.normal_form(&s_polynomial(&self.gens[i], &self.gens[j])).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// No leading monomial divides any term of another generator, and every
    /// generator is monic.
    pub fn is_reduced(&self) -> bool {
        self.gens.iter().enumerate().all(|(i, g)| {
            g.leading_coeff() == Some(1)
                && self
                    .gens
                    .iter()
                    .enumerate()
                    .all(|(j, h)| i == j || !g.terms().iter().any(|(m, _)| h.leading_monomial().unwrap().divides(m)))
        })
    }
}

/// `lcm/lt(f) * f - lcm/lt(g) * g` with leading coefficients normalized.
pub fn s_polynomial(f: &Poly, g: &Poly) -> Poly {
    let (fm, gm) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
    let lcm = fm.lcm(gm);
    let field = f.ring().field();
    let fa = f.mul_term(&fm.quotient_of(&lcm).unwrap(), field.inv(f.leading_coeff().unwrap()).unwrap());
    let ga = g.mul_term(&gm.quotient_of(&lcm).unwrap(), field.inv(g.leading_coeff().unwrap()).unwrap());
    &fa - &ga
}
