use std::fmt;

use smallvec::SmallVec;

/// Exponent storage. Rings with at most seven variables (including the
/// auxiliary elimination variable) never touch the heap.
pub type Exponents = SmallVec<[u32; 7]>;

/// A power product `x_1^{a_1} ... x_n^{a_n}` with its total degree cached.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    deg: u32,
    exps: Exponents,
}

impl Monomial {
    pub fn new(exps: impl IntoIterator<Item = u32>) -> Self {
        let exps: Exponents = exps.into_iter().collect();
        let deg = exps.iter().sum();
        Monomial { deg, exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            deg: 0,
            exps: SmallVec::from_elem(0, nvars),
        }
    }

    /// `x_i^e` in a ring with `nvars` variables.
    pub fn var_power(nvars: usize, i: usize, e: u32) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[i] = e;
        m.deg = e;
        m
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    #[inline]
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            deg: self.deg + other.deg,
            exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect(),
        }
    }

    /// True if `self` divides `other`.
    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            deg: other.deg - self.deg,
            exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| b - a).collect(),
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.exps.iter().zip(other.exps.iter()).map(|(a, b)| *a.max(b)))
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Every exponent multiplied by `k`; `None` on `u32` overflow.
    pub fn scale(&self, k: u64) -> Option<Monomial> {
        let k: u32 = k.try_into().ok()?;
        let mut exps = Exponents::with_capacity(self.exps.len());
        for &a in &self.exps {
            exps.push(a.checked_mul(k)?);
        }
        let deg = self.deg.checked_mul(k)?;
        Some(Monomial { deg, exps })
    }

    /// Indices of variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, &a)| a > 0).map(|(i, _)| i)
    }

    /// If this is a pure power `x_i^a` with `a > 0`, returns `(i, a)`.
    pub fn as_pure_power(&self) -> Option<(usize, u32)> {
        let mut found = None;
        for (i, &a) in self.exps.iter().enumerate() {
            if a > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, a));
            }
        }
        found
    }

    /// Inserts `k` zero exponents at the front.
    pub(crate) fn prepend_zeros(&self, k: usize) -> Monomial {
        let mut exps = Exponents::from_elem(0, k);
        exps.extend_from_slice(&self.exps);
        Monomial { deg: self.deg, exps }
    }

    /// Drops the first `k` exponents, which must be zero.
    pub(crate) fn drop_front(&self, k: usize) -> Monomial {
        debug_assert!(self.exps[..k].iter().all(|&a| a == 0));
        Monomial {
            deg: self.deg,
            exps: self.exps[k..].iter().copied().collect(),
        }
    }

    /// Bit `i` set iff variable `i % 64` occurs; a cheap divisibility filter.
    #[inline]
    pub(crate) fn divmask(&self) -> u64 {
        let mut mask = 0u64;
        for (i, &a) in self.exps.iter().enumerate() {
            if a > 0 {
                mask |= 1 << (i % 64);
            }
        }
        mask
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}
