use std::collections::BTreeMap;

use hk_core::polyfield::Poly;

/// `dim F_p[x]/(gens)` for an ideal containing `x_i^{box_i}`, by linear
/// algebra in `F_p[x]/(x_i^{box_i})`: the box size minus the rank of all
/// products `monomial * generator` truncated to the box.
pub fn colength_by_rank(p: u64, gens: &[Poly], bounds: &[u32]) -> u64 {
    let n = bounds.len();
    let index = |e: &[u32]| -> Option<usize> {
        let mut k = 0usize;
        for i in 0..n {
            if e[i] >= bounds[i] {
                return None;
            }
            k = k * bounds[i] as usize + e[i] as usize;
        }
        Some(k)
    };
    let size: usize = bounds.iter().map(|&b| b as usize).product();
    let mut box_monos = vec![vec![0u32; n]];
    for i in 0..n {
        box_monos = box_monos
            .into_iter()
            .flat_map(|m| {
                (0..bounds[i]).map(move |a| {
                    let mut m = m.clone();
                    m[i] = a;
                    m
                })
            })
            .collect();
    }
    let inv = |a: u64| -> u64 {
        let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    // pivot column -> row normalized to leading coefficient 1
    let mut pivots: BTreeMap<usize, BTreeMap<usize, u64>> = BTreeMap::new();
    for g in gens {
        for m in &box_monos {
            let mut row: BTreeMap<usize, u64> = BTreeMap::new();
            for (mono, c) in g.terms() {
                let e: Vec<u32> = mono.exps().iter().zip(m).map(|(a, b)| a + b).collect();
                if let Some(k) = index(&e) {
                    *row.entry(k).or_insert(0) += c;
                }
            }
            row.values_mut().for_each(|c| *c %= p);
            row.retain(|_, c| *c != 0);
            while let Some((&lead, &c)) = row.iter().next() {
                match pivots.get(&lead) {
                    Some(prow) => {
                        for (&k, &v) in prow {
                            let e = row.entry(k).or_insert(0);
                            *e = (*e + p - c * v % p) % p;
                        }
                        row.retain(|_, c| *c != 0);
                    }
                    None => {
                        let ic = inv(c);
                        row.values_mut().for_each(|v| *v = *v * ic % p);
                        pivots.insert(lead, row);
                        break;
                    }
                }
            }
        }
    }
    (size - pivots.len()) as u64
}
