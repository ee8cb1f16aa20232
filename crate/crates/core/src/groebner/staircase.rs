use std::fmt;

use serde::{Deserialize, Serialize};

use crate::polyfield::Monomial;

/// F_p-dimension of a quotient ring: finite, or infinite when the ideal is
/// not zero-dimensional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Colength {
    Finite(u64),
    Infinite,
}

impl Colength {
    pub fn finite(self) -> Option<u64> {
        match self {
            Colength::Finite(n) => Some(n),
            Colength::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Colength::Finite(_))
    }
}

impl fmt::Display for Colength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colength::Finite(n) => write!(f, "{n}"),
            Colength::Infinite => f.write_str("infinite"),
        }
    }
}

/// Minimal generators of a monomial ideal, typically the leading-term ideal
/// of a Groebner basis. Standard monomials are the lattice points under it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Staircase {
    nvars: usize,
    corners: Vec<Monomial>,
}

impl Staircase {
    /// Builds the staircase of the monomial ideal generated by `gens`,
    /// discarding non-minimal generators.
    pub fn new(nvars: usize, gens: impl IntoIterator<Item = Monomial>) -> Self {
        let gens: Vec<Vec<u32>> = gens.into_iter().map(|m| m.exps().to_vec()).collect();
        debug_assert!(gens.iter().all(|g| g.len() == nvars));
        let corners = minimalize(gens).into_iter().map(Monomial::new).collect();
        Staircase { nvars, corners }
    }

    pub fn corners(&self) -> &[Monomial] {
        &self.corners
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Smallest `a` with `x_i^a` in the ideal, if any.
    pub fn pure_power(&self, i: usize) -> Option<u32> {
        self.corners
            .iter()
            .filter_map(|m| match m.as_pure_power() {
                Some((j, a)) if j == i => Some(a),
                _ => None,
            })
            .min()
            .or_else(|| self.corners.iter().any(|m| m.is_one()).then_some(0))
    }

    /// True iff every variable has a pure power among the corners.
    pub fn is_zero_dimensional(&self) -> bool {
        (0..self.nvars).all(|i| self.pure_power(i).is_some())
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.corners.iter().any(|c| c.divides(m))
    }

    /// Number of standard monomials, counted by slicing along the last
    /// variable: between consecutive corner exponents of that variable the
    /// projected staircase is constant, so each slab is counted once.
    pub fn colength(&self) -> Colength {
        if !self.is_zero_dimensional() {
            return Colength::Infinite;
        }
        let gens: Vec<Vec<u32>> = self.corners.iter().map(|m| m.exps().to_vec()).collect();
        Colength::Finite(count(&gens, self.nvars) as u64)
    }

    /// Enumerates all standard monomials. Only sensible for small colengths.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        let bounds: Vec<u32> = (0..self.nvars).map(|i| self.pure_power(i)).collect::<Option<_>>()?;
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.nvars];
        if bounds.contains(&0) {
            return Some(out);
        }
        loop {
            let m = Monomial::new(cur.iter().copied());
            if self.is_standard(&m) {
                out.push(m);
            }
            let mut k = 0;
            loop {
                if k == self.nvars {
                    return Some(out);
                }
                cur[k] += 1;
                if cur[k] < bounds[k] {
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
        }
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minimalize(mut gens: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    gens.sort_by_key(|g| (g.iter().map(|&a| a as u64).sum::<u64>(), g.clone()));
    gens.dedup();
    let mut out: Vec<Vec<u32>> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| divides(h, &g)) {
            out.push(g);
        }
    }
    out
}

/// Standard monomials of the ideal generated by `gens` (exponent vectors on
/// the first `n` coordinates). Assumes every variable has a pure power.
fn count(gens: &[Vec<u32>], n: usize) -> u128 {
    if gens.iter().any(|g| g[..n].iter().all(|&a| a == 0)) {
        return 0;
    }
    if n == 0 {
        return 1;
    }
    let last = n - 1;
    if n == 1 {
        return gens.iter().map(|g| g[0]).min().unwrap_or(0) as u128;
    }
    let bound = gens
        .iter()
        .filter(|g| g[..last].iter().all(|&a| a == 0))
        .map(|g| g[last])
        .min()
        .expect("zero-dimensional staircase");
    let mut cuts: Vec<u32> = gens.iter().map(|g| g[last]).filter(|&a| a < bound).collect();
    cuts.push(0);
    cuts.push(bound);
    cuts.sort_unstable();
    cuts.dedup();

    let mut total = 0u128;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let slab: Vec<Vec<u32>> = gens.iter().filter(|g| g[last] <= lo).map(|g| g[..last].to_vec()).collect();
        let slab = minimalize(slab);
        total += (hi - lo) as u128 * count(&slab, last);
    }
    total
}
