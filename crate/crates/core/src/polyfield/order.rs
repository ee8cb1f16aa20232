use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Monomial, PolyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    DegRevLex,
    DegLex,
    Lex,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::DegRevLex => "degrevlex",
            OrderKind::DegLex => "deglex",
            OrderKind::Lex => "lex",
        })
    }
}

impl FromStr for OrderKind {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        match s {
            "degrevlex" | "grevlex" => Ok(OrderKind::DegRevLex),
            "deglex" | "grlex" => Ok(OrderKind::DegLex),
            "lex" => Ok(OrderKind::Lex),
            other => Err(PolyError::UnknownOrder(other.to_string())),
        }
    }
}

/// A monomial order: a kind plus a variable priority (most significant
/// variable first). An optional leading block of `elim` variables is
/// compared first by degrevlex, giving an elimination order for that block.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    priority: Arc<[usize]>,
    elim: usize,
    identity: bool,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, nvars: usize) -> Self {
        MonomialOrder {
            kind,
            priority: (0..nvars).collect(),
            elim: 0,
            identity: true,
        }
    }

    pub fn degrevlex(nvars: usize) -> Self {
        Self::new(OrderKind::DegRevLex, nvars)
    }

    /// Order with an explicit variable priority, most significant first.
    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Result<Self, PolyError> {
        let n = priority.len();
        let mut seen = vec![false; n];
        for &i in &priority {
            if i >= n || seen[i] {
                return Err(PolyError::BadPriority(priority.clone()));
            }
            seen[i] = true;
        }
        let identity = priority.iter().enumerate().all(|(k, &i)| k == i);
        Ok(MonomialOrder {
            kind,
            priority: priority.into(),
            elim: 0,
            identity,
        })
    }

    /// Block order on `block + nvars` variables: the first `block` variables
    /// are eliminated, the rest are ordered by `kind`.
    pub fn elimination(block: usize, kind: OrderKind, nvars: usize) -> Self {
        MonomialOrder {
            kind,
            priority: (0..block + nvars).collect(),
            elim: block,
            identity: true,
        }
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn nvars(&self) -> usize {
        self.priority.len()
    }

    pub fn eliminated(&self) -> usize {
        self.elim
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    #[inline]
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), b.nvars());
        if self.elim == 0 && self.identity {
            return compare_plain(self.kind, a, b);
        }
        let (head, tail) = self.priority.split_at(self.elim);
        if !head.is_empty() {
            let ord = compare_indexed(OrderKind::DegRevLex, a.exps(), b.exps(), head);
            if ord != Ordering::Equal {
                return ord;
            }
        }
        compare_indexed(self.kind, a.exps(), b.exps(), tail)
    }
}

#[inline]
fn compare_plain(kind: OrderKind, a: &Monomial, b: &Monomial) -> Ordering {
    let (ea, eb) = (a.exps(), b.exps());
    match kind {
        OrderKind::DegRevLex => a.degree().cmp(&b.degree()).then_with(|| {
            for (x, y) in ea.iter().zip(eb.iter()).rev() {
                if x != y {
                    return y.cmp(x);
                }
            }
            Ordering::Equal
        }),
        OrderKind::DegLex => a.degree().cmp(&b.degree()).then_with(|| ea.cmp(eb)),
        OrderKind::Lex => ea.cmp(eb),
    }
}

fn compare_indexed(kind: OrderKind, a: &[u32], b: &[u32], idx: &[usize]) -> Ordering {
    let deg = |e: &[u32]| idx.iter().map(|&i| e[i] as u64).sum::<u64>();
    match kind {
        OrderKind::DegRevLex => deg(a).cmp(&deg(b)).then_with(|| {
            for &i in idx.iter().rev() {
                if a[i] != b[i] {
                    return b[i].cmp(&a[i]);
                }
            }
            Ordering::Equal
        }),
        OrderKind::DegLex => deg(a).cmp(&deg(b)).then_with(|| lex(a, b, idx)),
        OrderKind::Lex => lex(a, b, idx),
    }
}

fn lex(a: &[u32], b: &[u32], idx: &[usize]) -> Ordering {
    for &i in idx {
        if a[i] != b[i] {
            return a[i].cmp(&b[i]);
        }
    }
    Ordering::Equal
}

impl fmt::Debug for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.identity {
            write!(f, "{:?}", &self.priority[..])?;
        }
        if self.elim > 0 {
            write!(f, "[elim {}]", self.elim)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.iter().copied())
    }

    #[test]
    fn textbook_comparisons() {
        let drl = MonomialOrder::degrevlex(3);
        assert_eq!(drl.compare(&m(&[2, 0, 0]), &m(&[1, 1, 0])), Ordering::Greater);
        assert_eq!(drl.compare(&m(&[1, 1, 1]), &m(&[1, 1, 1])), Ordering::Equal);
        // x*z^2 < y^3 in degrevlex, x*z^2 > y^3 in deglex
        assert_eq!(drl.compare(&m(&[1, 0, 2]), &m(&[0, 3, 0])), Ordering::Less);
        let dl = MonomialOrder::new(OrderKind::DegLex, 3);
        assert_eq!(dl.compare(&m(&[1, 0, 2]), &m(&[0, 3, 0])), Ordering::Greater);
        let lex = MonomialOrder::new(OrderKind::Lex, 3);
        assert_eq!(lex.compare(&m(&[0, 5, 0]), &m(&[1, 0, 0])), Ordering::Less);
    }

    #[test]
    fn priority_permutes_variables() {
        // z > y > x
        let lex = MonomialOrder::with_priority(OrderKind::Lex, vec![2, 1, 0]).unwrap();
        assert_eq!(lex.compare(&m(&[5, 0, 0]), &m(&[0, 0, 1])), Ordering::Less);
        assert!(MonomialOrder::with_priority(OrderKind::Lex, vec![0, 0, 1]).is_err());
    }

    #[test]
    fn elimination_block_dominates() {
        let ord = MonomialOrder::elimination(1, OrderKind::DegRevLex, 2);
        assert_eq!(ord.compare(&m(&[1, 0, 0]), &m(&[0, 9, 9])), Ordering::Greater);
        assert_eq!(ord.compare(&m(&[0, 2, 0]), &m(&[0, 1, 1])), Ordering::Greater);
    }
}
