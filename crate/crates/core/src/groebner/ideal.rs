use std::sync::Arc;

use crate::polyfield::{MonomialOrder, OrderKind, Poly, PolyRing};

use super::{Colength, GroebnerBasis, GroebnerError, Limits};

/// Groebner basis of `I ∩ J` by eliminating `t` from `t*I + (1-t)*J`.
pub fn intersect(ring: &Arc<PolyRing>, i_gens: &[Poly], j_gens: &[Poly], limits: &Limits<'_>) -> Result<GroebnerBasis, GroebnerError> {
    let n = ring.nvars();
    let ext = PolyRing::new(ring.field(), n + 1, MonomialOrder::elimination(1, OrderKind::DegRevLex, n));
    let t = Poly::var(&ext, 0);
    let one_minus_t = &Poly::one(&ext) - &t;
    let mut gens: Vec<Poly> = Vec::with_capacity(i_gens.len() + j_gens.len());
    gens.extend(i_gens.iter().map(|f| &t * &f.prepend_vars(&ext, 1)));
    gens.extend(j_gens.iter().map(|g| &one_minus_t * &g.prepend_vars(&ext, 1)));
    let gb = GroebnerBasis::with_limits(&ext, &gens, limits)?;
    let kept: Vec<Poly> = gb.gens().iter().filter_map(|g| g.drop_vars(ring, 1)).collect();
    GroebnerBasis::with_limits(ring, &kept, limits)
}

/// `I : f = { g : g f ∈ I }`, computed as `(I ∩ (f)) / f`.
pub fn ideal_quotient(ideal: &GroebnerBasis, f: &Poly, limits: &Limits<'_>) -> Result<GroebnerBasis, GroebnerError> {
    let ring = ideal.ring();
    if **f.ring() != **ring {
        return Err(GroebnerError::AmbientMismatch);
    }
    if f.is_zero() {
        return Err(GroebnerError::ZeroDivisor);
    }
    if f.is_constant() {
        return Ok(ideal.clone());
    }
    if ideal.is_zero_ideal() {
        return Ok(ideal.clone());
    }
    let meet = intersect(ring, ideal.gens(), std::slice::from_ref(f), limits)?;
    let quotients: Vec<Poly> = meet
        .gens()
        .iter()
        .map(|g| g.div_exact(f).expect("elements of (f) are divisible by f"))
        .collect();
    GroebnerBasis::with_limits(ring, &quotients, limits)
}

/// `I : J = ∩_k (I : J_k)`.
pub fn ideal_colon_ideal(ideal: &GroebnerBasis, j_gens: &[Poly], limits: &Limits<'_>) -> Result<GroebnerBasis, GroebnerError> {
    if j_gens.is_empty() {
        return Err(GroebnerError::EmptyColon);
    }
    let ring = ideal.ring();
    let mut acc: Option<GroebnerBasis> = None;
    for g in j_gens.iter().filter(|g| !g.is_zero()) {
        let q = ideal_quotient(ideal, g, limits)?;
        acc = Some(match acc {
            None => q,
            Some(prev) => intersect(ring, prev.gens(), q.gens(), limits)?,
        });
    }
    // all generators zero: I : (0) is the whole ring
    Ok(acc.unwrap_or_else(|| GroebnerBasis::new(ring, &[Poly::one(ring)])))
}

/// Artinian Gorenstein test for `F_p[x]/J`: its socle `(J : m)/J` is one
/// dimensional, i.e. `colength(J) - colength(J : m) = 1`.
pub fn is_gorenstein_artinian(j_plus_defining: &GroebnerBasis, maximal: &[Poly], limits: &Limits<'_>) -> Result<bool, GroebnerError> {
    let Colength::Finite(big) = j_plus_defining.colength() else {
        return Err(GroebnerError::InfiniteColength);
    };
    let colon = ideal_colon_ideal(j_plus_defining, maximal, limits)?;
    let Colength::Finite(small) = colon.colength() else {
        return Err(GroebnerError::InfiniteColength);
    };
    Ok(big.checked_sub(small) == Some(1))
}

/// Generators `x_1, ..., x_n` of the homogeneous maximal ideal.
pub fn variables(ring: &Arc<PolyRing>) -> Vec<Poly> {
    (0..ring.nvars()).map(|i| Poly::var(ring, i)).collect()
}
