//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.
//! Expected values are written out here rather than read from the fixture
//! corpus, so a corrupted corpus cannot make this target pass.

#[path = "../../core/tests/common/oracle.rs"]
mod oracle;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use hk_cli::fixture::{corpus_dir, load_dir, Fixture};
use hk_cli::pipeline::{compute_problem, fsig_problem, parse_problem, RunOptions, BOUND_SLACK};
use hk_cli::report::Report;
use hk_core::bounds::beta_hypersurface;
use hk_core::estimate::Fraction;
use hk_core::frobenius::{bracket_power, hk_series, SeriesOptions};
use hk_core::groebner::{s_polynomial, variables, Colength, GroebnerBasis};
use hk_core::polyfield::{Monomial, MonomialOrder, OrderKind, Poly, PolyRing, PrimeField};
use hk_core::presentation::{IdealSpec, ParsedProblem};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&Corpus) -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

struct Corpus(Vec<Fixture>);

impl Corpus {
    fn get(&self, id: &str) -> Result<&Fixture, String> {
        self.0.iter().find(|f| f.id == id).ok_or_else(|| format!("fixture {id} missing"))
    }

    fn problem(&self, id: &str) -> Result<ParsedProblem, String> {
        parse_problem(&self.get(id)?.text, OrderKind::DegRevLex).map_err(|e| format!("{id}: {e}"))
    }

    fn compute(&self, id: &str, e_max: u32) -> Result<Report, String> {
        let opts = RunOptions {
            e_max: Some(e_max),
            ..RunOptions::default()
        };
        compute_problem(&self.problem(id)?, &opts, None).map_err(|e| format!("{id}: {e}"))
    }

    fn fsig(&self, id: &str, sop: &str, e_max: u32) -> Result<Report, String> {
        let opts = RunOptions {
            e_max: Some(e_max),
            ..RunOptions::default()
        };
        fsig_problem(&self.problem(id)?, sop, &opts, None).map_err(|e| format!("{id}: {e}"))
    }
}

fn alpha(report: &Report) -> f64 {
    report.estimate.as_ref().map_or(f64::NAN, |e| e.alpha)
}

fn rational(report: &Report) -> Option<Fraction> {
    report.estimate.as_ref().and_then(|e| e.alpha_rational)
}

/// `alpha` within `tol` of `num/den`, and optionally reconstructed exactly.
fn close(corpus: &Corpus, id: &str, e_max: u32, num: i64, den: u64, tol: f64, exact: bool) -> Outcome {
    let r = corpus.compute(id, e_max)?;
    let a = alpha(&r);
    let want = Fraction::new(num, den);
    ensure!((a - want.value()).abs() <= tol, "{id}: alpha {a:.6} vs {want} (tol {tol})");
    if exact {
        ensure!(rational(&r) == Some(want), "{id}: reconstructed {:?}, want {want}", rational(&r));
    }
    Ok(format!("{id} {a:.5}"))
}

fn kunz_equality(c: &Corpus) -> Outcome {
    let mut n = 0;
    for d in 1..=4u32 {
        for p in [2u64, 5] {
            let id = format!("kunz_d{d}_p{p}");
            let e_max = if d <= 2 { 3 } else { 2 };
            let r = c.compute(&id, e_max)?;
            ensure!(r.series.len() == e_max as usize + 1, "{id}: {} samples", r.series.len());
            for s in &r.series {
                ensure!(s.colength == s.q.pow(d), "{id} e={}: {} != q^{d}", s.e, s.colength);
            }
            n += 1;
        }
    }
    Ok(format!("{n} regular rings, λ = q^d exactly"))
}

fn periodicity(c: &Corpus) -> Outcome {
    let id = "periodic_x5y5_p2";
    let r = c.compute(id, 8)?;
    for s in r.series.iter().filter(|s| s.e >= 1) {
        let want = 5 * s.q - if s.e % 2 == 1 { 6 } else { 4 };
        ensure!(s.colength == want, "e={}: {} != {want}", s.e, s.colength);
    }
    ensure!((alpha(&r) - 5.0).abs() <= 1e-2, "alpha {}", alpha(&r));
    let e = r.multiplicity.as_ref().map(|m| m.value);
    ensure!(e == Some(5), "e(I) = {e:?}");
    Ok(format!("e ≤ 8 exact, alpha {:.5}, e(I) = 5", alpha(&r)))
}

fn fermat_quartic(c: &Corpus) -> Outcome {
    let id = "fermat_quartic_p5";
    let r = c.compute(id, 2)?;
    let lens: Vec<u64> = r.series.iter().map(|s| s.colength).collect();
    ensure!(lens[1..] == [339, 43017], "colengths {lens:?}");
    let a = alpha(&r);
    ensure!((a - 168.0 / 61.0).abs() <= 5e-3, "alpha {a}");
    ensure!(rational(&r) == Some(Fraction::new(168, 61)), "reconstructed {:?}", rational(&r));
    Ok(format!("339, 43017; alpha {a:.6} -> 168/61"))
}

fn quadrics(c: &Corpus) -> Outcome {
    let mut parts = Vec::new();
    for (id, num, den) in [("quadric_rank1_p7", 2, 1), ("quadric_rank2_p7", 3, 2), ("quadric_rank3_p7", 4, 3)] {
        parts.push(close(c, id, 2, num, den, 2e-2, true)?);
    }
    Ok(parts.join(", "))
}

fn ade(c: &Corpus) -> Outcome {
    let mut parts = Vec::new();
    for (id, n) in [("ade_a1_p5", 1), ("ade_a2_p5", 2), ("ade_a3_p5", 3)] {
        parts.push(close(c, id, 4, 2 * (n + 1) - 1, n as u64 + 1, 2e-2, true)?);
    }
    parts.push(close(c, "ade_d4_p7", 3, 15, 8, 2e-2, false)?);
    parts.push(close(c, "ade_e6_p7", 3, 47, 24, 2e-2, false)?);
    Ok(parts.join(", "))
}

fn cubics(c: &Corpus) -> Outcome {
    let smooth = close(c, "cubic_smooth_p7", 3, 9, 4, 3e-2, false)?;
    let nodal = close(c, "cubic_nodal_p7", 3, 7, 3, 3e-2, false)?;
    Ok(format!("{smooth}, {nodal}"))
}

fn fsignature(c: &Corpus) -> Outcome {
    let a1 = c.fsig("ade_a1_p5", "x + y, z", 4)?;
    let s = a1.fsig.as_ref().ok_or("no fsig summary")?.s;
    ensure!((s - 0.5).abs() <= 5e-2, "A1: s = {s}");
    let reg = c.fsig("kunz_d2_p5", "x, y", 3)?;
    let f = reg.fsig.as_ref().ok_or("no fsig summary")?;
    ensure!(f.s == 1.0, "regular: s = {}", f.s);
    for sample in &f.samples {
        ensure!(sample.a_q == sample.q * sample.q, "regular e={}: a_q = {}", sample.e, sample.a_q);
    }
    Ok(format!("A1 s = {s:.5}, regular s = 1"))
}

fn beta_table(_: &Corpus) -> Outcome {
    let printed = [(1, 1), (1, 1), (3, 4), (2, 3), (115, 192), (11, 20)];
    for (d, (n, m)) in printed.into_iter().enumerate() {
        let want = BigRational::new(BigInt::from(n), BigInt::from(m));
        ensure!(beta_hypersurface(d) == want, "d={d}: {} != {want}", beta_hypersurface(d));
    }
    Ok("β_0..β_5 = 1, 1, 3/4, 2/3, 115/192, 11/20".into())
}

fn bound_consistency(c: &Corpus) -> Outcome {
    let mut checked = 0;
    for fx in c.0.iter().filter(|f| !f.expected.regular) {
        let r = c.compute(&fx.id, fx.expected.e_max)?;
        let a = alpha(&r);
        for b in r.bounds.iter().filter(|b| b.applicable && !b.informational) {
            let v = b.value.as_ref().map_or(f64::NAN, |v| v.value);
            ensure!(a >= v - BOUND_SLACK, "{}: alpha {a:.5} below {} = {v:.5}", fx.id, b.name);
            checked += 1;
        }
    }
    let a1 = c.compute("ade_a1_p5", 4)?;
    let wy = a1
        .bounds
        .iter()
        .find(|b| b.name == "watanabe-yoshida-dim2")
        .and_then(|b| b.value.as_ref())
        .ok_or("A1: no dim-2 bound")?;
    ensure!(wy.exact == Some(Fraction::new(3, 2)), "A1: (e+1)/2 = {:?}", wy.exact);
    ensure!((alpha(&a1) - 1.5).abs() <= 2e-2, "A1: alpha {} does not attain 3/2", alpha(&a1));
    Ok(format!("{checked} applicable bounds hold; A1 attains (e+1)/2 = 3/2"))
}

fn bracket_ideal(prob: &ParsedProblem, q: u64) -> Vec<Poly> {
    let mut gens: Vec<Poly> = variables(prob.ring.ring()).iter().map(|x| x.pow(q)).collect();
    gens.extend(prob.ring.defining().iter().cloned());
    gens
}

fn square_of_maximal(prob: &ParsedProblem) -> ParsedProblem {
    let gens = prob.ring.maximal_ideal().generators().to_vec();
    let sq = (0..gens.len())
        .flat_map(|i| (i..gens.len()).map(move |j| (i, j)))
        .map(|(i, j)| &gens[i] * &gens[j])
        .collect();
    ParsedProblem::new(IdealSpec::new(&prob.ring, sq).unwrap())
}

fn colengths(prob: &ParsedProblem, e_max: u32) -> Vec<u64> {
    hk_series(prob, e_max, &SeriesOptions::default())
        .unwrap()
        .samples
        .iter()
        .map(|s| s.colength)
        .collect()
}

fn random_poly(r: &std::sync::Arc<PolyRing>, rng: &mut StdRng) -> Poly {
    let n = r.nvars();
    let terms = (0..rng.gen_range(0..6))
        .map(|_| {
            let mut e = vec![0u32; n];
            for _ in 0..rng.gen_range(0..=4) {
                e[rng.gen_range(0..n)] += 1;
            }
            (Monomial::new(e), rng.gen_range(0..1000))
        })
        .collect();
    Poly::from_terms(r, terms)
}

fn properties(c: &Corpus) -> Outcome {
    let (mut spairs, mut orders, mut brute, mut filtrations, mut brackets) = (0, 0, 0, 0, 0);
    for fx in &c.0 {
        let prob = c.problem(&fx.id)?;
        let p = prob.ring.characteristic();
        let n = prob.ring.nvars() as u32;
        for e in 0..=fx.expected.e_max.min(2) {
            let q = p.pow(e);
            let gens = bracket_ideal(&prob, q);
            let gb = GroebnerBasis::new(prob.ring.ring(), &gens);
            let g = gb.gens();
            for i in 0..g.len() {
                for j in i + 1..g.len() {
                    ensure!(
                        gb.normal_form(&s_polynomial(&g[i], &g[j])).is_zero(),
                        "{} e={e}: S({i},{j}) ≠ 0",
                        fx.id
                    );
                    spairs += 1;
                }
            }
            ensure!(gens.iter().all(|f| gb.contains(f)), "{} e={e}: generator outside basis", fx.id);
            let len = gb.colength();
            for kind in [OrderKind::DegLex, OrderKind::Lex] {
                let other = prob.with_order(kind);
                let l = GroebnerBasis::new(other.ring.ring(), &bracket_ideal(&other, q)).colength();
                ensure!(l == len, "{} e={e}: {kind:?} gives {l:?}, degrevlex {len:?}", fx.id);
                orders += 1;
            }
            if let Colength::Finite(l) = len {
                if e >= 1 && l <= 5000 && q.pow(n) <= 2500 {
                    let by_rank = oracle::colength_by_rank(p, &gens, &vec![q as u32; n as usize]);
                    ensure!(l == by_rank, "{} e={e}: {l} vs brute force {by_rank}", fx.id);
                    brute += 1;
                }
            }
        }

        let m = colengths(&prob, fx.expected.e_max.min(3));
        let sq = square_of_maximal(&prob);
        let len_i = colengths(&sq, 0)[0];
        let e_max = (0..m.len()).take_while(|&e| len_i * m[e] <= 2_000_000).last().unwrap_or(0) as u32;
        let i = colengths(&sq, e_max);
        for e in 0..=e_max as usize {
            ensure!(i[e] <= (len_i - m[0]) * m[e] + m[e], "{} e={e}: filtration inequality", fx.id);
            ensure!(i[e] <= len_i * m[e], "{} e={e}: colength product inequality", fx.id);
            filtrations += 1;
        }

        let basis = |ideal: &IdealSpec| GroebnerBasis::new(prob.ring.ring(), &ideal.with_defining()).gens().to_vec();
        for ideal in [prob.ideal.clone(), sq.ideal] {
            let twice = bracket_power(&bracket_power(&ideal, p).unwrap(), p).unwrap();
            ensure!(
                basis(&twice) == basis(&bracket_power(&ideal, p * p).unwrap()),
                "{}: (I^[p])^[p] ≠ I^[p²]",
                fx.id
            );
            brackets += 1;
        }
    }

    let mut rng = StdRng::seed_from_u64(0x4b554e5a);
    for k in 0..500 {
        let p = [2u64, 3, 5, 7][k % 4];
        let r = PolyRing::new(PrimeField::new(p).unwrap(), 3, MonomialOrder::degrevlex(3));
        let (f, g) = (random_poly(&r, &mut rng), random_poly(&r, &mut rng));
        let q = p.pow(rng.gen_range(1..3));
        let fq = f.frobenius(q).unwrap();
        let gq = g.frobenius(q).unwrap();
        ensure!(
            (&f + &g).frobenius(q).unwrap() == &fq + &gq,
            "(f+g)^q ≠ f^q + g^q for f = {f}, g = {g}, q = {q}"
        );
        ensure!(
            (&f * &g).frobenius(q).unwrap() == &fq * &gq,
            "(fg)^q ≠ f^q g^q for f = {f}, g = {g}, q = {q}"
        );
    }
    ensure!(brute >= 20, "only {brute} brute-force comparisons");
    Ok(format!(
        "{spairs} S-pairs, {orders} order swaps, {brute} brute-force, {filtrations} filtration samples, {brackets} bracket compositions, 500 Frobenius pairs"
    ))
}

fn main() -> ExitCode {
    let corpus = match load_dir(&corpus_dir()) {
        Ok(f) => Corpus(f),
        Err(e) => {
            println!("FAIL corpus: {e}");
            return ExitCode::FAILURE;
        }
    };
    let criteria: [Criterion; 10] = [
        ("kunz-equality", kunz_equality),
        ("dimension-one-periodicity", periodicity),
        ("fermat-quartic", fermat_quartic),
        ("quadrics", quadrics),
        ("ade-table", ade),
        ("cubic-cones", cubics),
        ("f-signature", fsignature),
        ("volume-table", beta_table),
        ("bound-consistency", bound_consistency),
        ("property-suites", properties),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| check(&corpus))).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
