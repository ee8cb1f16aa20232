mod common;

use std::sync::Arc;

use common::oracle::colength_by_rank;
use hk_core::groebner::{ideal_colon_ideal, ideal_quotient, s_polynomial, variables, Colength, GroebnerBasis, Limits};
use hk_core::polyfield::{Monomial, MonomialOrder, OrderKind, Poly, PolyRing, PrimeField};
use hk_core::presentation::ParsedProblem;
use proptest::prelude::*;

fn ring(p: u64, n: usize, kind: OrderKind) -> Arc<PolyRing> {
    PolyRing::new(PrimeField::new(p).unwrap(), n, MonomialOrder::new(kind, n))
}

fn terms(n: usize, deg: u32) -> impl Strategy<Value = Vec<(Vec<u32>, u64)>> {
    prop::collection::vec((prop::collection::vec(0..=deg, n), 1u64..1000), 1..4)
        .prop_map(move |ts| ts.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= deg).collect())
}

fn build(r: &Arc<PolyRing>, ts: &[(Vec<u32>, u64)]) -> Poly {
    Poly::from_terms(r, ts.iter().map(|(e, c)| (Monomial::new(e.iter().copied()), *c)).collect())
}

/// Every S-pair reduces to zero and every input generator lies in the ideal.
fn check_basis(gb: &GroebnerBasis, input: &[Poly]) -> Result<(), String> {
    let gens = gb.gens();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let nf = gb.normal_form(&s_polynomial(&gens[i], &gens[j]));
            if !nf.is_zero() {
                return Err(format!("S({i},{j}) reduces to {nf}"));
            }
        }
    }
    if let Some(f) = input.iter().find(|f| !gb.normal_form(f).is_zero()) {
        return Err(format!("generator {f} not reduced to zero"));
    }
    if !gb.satisfies_buchberger_criterion() || !gb.is_reduced() {
        return Err("basis fails its own criterion".into());
    }
    Ok(())
}

/// `m^[q] + defining` for a fixture.
fn bracket_ideal(prob: &ParsedProblem, q: u64) -> Vec<Poly> {
    let r = prob.ring.ring();
    let mut gens: Vec<Poly> = variables(r).iter().map(|x| x.pow(q)).collect();
    gens.extend(prob.ring.defining().iter().cloned());
    gens
}

#[test]
fn fixture_bases_satisfy_buchberger() {
    for fx in common::fixtures() {
        let p = fx.problem.ring.characteristic();
        for e in 0..=fx.e_max.min(2) {
            let gens = bracket_ideal(&fx.problem, p.pow(e));
            let gb = GroebnerBasis::new(fx.problem.ring.ring(), &gens);
            if let Err(msg) = check_basis(&gb, &gens) {
                panic!("{} e={e}: {msg}", fx.id);
            }
        }
    }
}

#[test]
fn fixture_colengths_are_order_invariant() {
    for fx in common::fixtures() {
        let p = fx.problem.ring.characteristic();
        for e in 1..=fx.e_max.min(2) {
            let q = p.pow(e);
            let lens: Vec<Colength> = [OrderKind::DegRevLex, OrderKind::DegLex, OrderKind::Lex]
                .into_iter()
                .map(|kind| {
                    let prob = fx.problem.with_order(kind);
                    GroebnerBasis::new(prob.ring.ring(), &bracket_ideal(&prob, q)).colength()
                })
                .collect();
            assert!(lens.iter().all(|l| *l == lens[0]), "{} e={e}: {lens:?}", fx.id);
        }
    }
}

#[test]
fn fixture_colengths_match_linear_algebra() {
    let mut checked = 0;
    for fx in common::fixtures() {
        let p = fx.problem.ring.characteristic();
        let n = fx.problem.ring.nvars() as u32;
        for e in 1..=fx.e_max {
            let q = p.pow(e);
            if q.pow(n) > 2500 {
                break;
            }
            let gens = bracket_ideal(&fx.problem, q);
            let gb = GroebnerBasis::new(fx.problem.ring.ring(), &gens);
            let Colength::Finite(len) = gb.colength() else {
                panic!("{}: infinite", fx.id)
            };
            if len > 5000 {
                continue;
            }
            let bounds = vec![q as u32; n as usize];
            assert_eq!(len, colength_by_rank(p, &gens, &bounds), "{} e={e}", fx.id);
            let listed = gb.staircase().standard_monomials().unwrap();
            assert_eq!(listed.len() as u64, len, "{} e={e}", fx.id);
            checked += 1;
        }
    }
    assert!(checked >= 20, "only {checked} cases small enough");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_bases_satisfy_buchberger(
        p in prop::sample::select(vec![2u64, 3, 5, 7, 101]),
        kind in prop::sample::select(vec![OrderKind::DegRevLex, OrderKind::DegLex, OrderKind::Lex]),
        polys in prop::collection::vec(terms(3, 3), 1..4),
    ) {
        let r = ring(p, 3, kind);
        let gens: Vec<Poly> = polys.iter().map(|t| build(&r, t)).filter(|f| !f.is_zero()).collect();
        let gb = GroebnerBasis::new(&r, &gens);
        prop_assert!(check_basis(&gb, &gens).is_ok(), "{:?}", check_basis(&gb, &gens));
    }

    #[test]
    fn random_colengths_agree(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        box_exps in prop::collection::vec(1u32..5, 3),
        polys in prop::collection::vec(terms(3, 3), 0..3),
    ) {
        let orders = [OrderKind::DegRevLex, OrderKind::DegLex, OrderKind::Lex];
        let mut lens = Vec::new();
        for kind in orders {
            let r = ring(p, 3, kind);
            let mut gens: Vec<Poly> = polys.iter().map(|t| build(&r, t)).collect();
            gens.extend((0..3).map(|i| Poly::var(&r, i).pow(box_exps[i] as u64)));
            lens.push(GroebnerBasis::new(&r, &gens).colength());
        }
        prop_assert!(lens.iter().all(|l| *l == lens[0]), "{:?}", lens);
        let r = ring(p, 3, OrderKind::DegRevLex);
        let mut gens: Vec<Poly> = polys.iter().map(|t| build(&r, t)).collect();
        gens.extend((0..3).map(|i| Poly::var(&r, i).pow(box_exps[i] as u64)));
        prop_assert_eq!(lens[0], Colength::Finite(colength_by_rank(p, &gens, &box_exps)));
    }

    #[test]
    fn larger_ideals_have_smaller_colength(
        p in prop::sample::select(vec![2u64, 3, 5]),
        box_exps in prop::collection::vec(1u32..5, 3),
        polys in prop::collection::vec(terms(3, 3), 0..3),
        extra in terms(3, 2),
    ) {
        let r = ring(p, 3, OrderKind::DegRevLex);
        let mut small: Vec<Poly> = polys.iter().map(|t| build(&r, t)).collect();
        small.extend((0..3).map(|i| Poly::var(&r, i).pow(box_exps[i] as u64)));
        let mut big = small.clone();
        big.push(build(&r, &extra));
        let (ci, cj) = (GroebnerBasis::new(&r, &small).colength(), GroebnerBasis::new(&r, &big).colength());
        prop_assert!(cj.finite().unwrap() <= ci.finite().unwrap());
    }

    #[test]
    fn quotients_are_sound(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        polys in prop::collection::vec(terms(3, 3), 1..3),
        f in terms(3, 2),
    ) {
        let r = ring(p, 3, OrderKind::DegRevLex);
        let gens: Vec<Poly> = polys.iter().map(|t| build(&r, t)).collect();
        let gb = GroebnerBasis::new(&r, &gens);
        let f = build(&r, &f);
        prop_assume!(!f.is_zero());
        let colon = ideal_quotient(&gb, &f, &Limits::none()).unwrap();
        for g in colon.gens() {
            prop_assert!(gb.normal_form(&(g * &f)).is_zero(), "{} * {} not in I", g, f);
        }
        // I is contained in I : f
        for g in gb.gens() {
            prop_assert!(colon.contains(g));
        }
        let colon_m = ideal_colon_ideal(&gb, &variables(&r), &Limits::none()).unwrap();
        for g in colon_m.gens() {
            for x in variables(&r) {
                prop_assert!(gb.contains(&(g * &x)));
            }
        }
    }
}
