mod common;

use hk_core::estimate::estimate_hs_multiplicity;
use hk_core::frobenius::{bracket_power, hk_series, ordinary_power_series, splitting_series, GorensteinSop, SeriesOptions};
use hk_core::groebner::GroebnerBasis;
use hk_core::polyfield::Poly;
use hk_core::presentation::{validate_origin_primary, IdealSpec, ParsedProblem};

fn opts() -> SeriesOptions<'static> {
    SeriesOptions::default()
}

fn colengths(prob: &ParsedProblem, e_max: u32) -> Vec<u64> {
    hk_series(prob, e_max, &opts())
        .unwrap()
        .samples
        .iter()
        .map(|s| s.colength)
        .collect()
}

/// `m^2` in the fixture's ring.
fn square_of_maximal(prob: &ParsedProblem) -> ParsedProblem {
    let m = prob.ring.maximal_ideal();
    let gens = m.generators();
    let mut sq: Vec<Poly> = Vec::new();
    for i in 0..gens.len() {
        for j in i..gens.len() {
            sq.push(&gens[i] * &gens[j]);
        }
    }
    ParsedProblem::new(IdealSpec::new(&prob.ring, sq).unwrap())
}

fn reduced_basis(ideal: &IdealSpec) -> Vec<Poly> {
    GroebnerBasis::new(ideal.ring().ring(), &ideal.with_defining()).gens().to_vec()
}

#[test]
fn iterated_bracket_powers_compose() {
    for fx in common::fixtures() {
        let p = fx.problem.ring.characteristic();
        for ideal in [fx.problem.ideal.clone(), square_of_maximal(&fx.problem).ideal] {
            let once = reduced_basis(&bracket_power(&bracket_power(&ideal, p).unwrap(), p).unwrap());
            let direct = reduced_basis(&bracket_power(&ideal, p * p).unwrap());
            assert_eq!(once, direct, "{}", fx.id);
        }
    }
}

#[test]
fn bracket_powers_of_maximal_ideal_are_origin_primary() {
    for fx in common::fixtures() {
        let p = fx.problem.ring.characteristic();
        for e in 0..=fx.e_max.min(3) {
            let ideal = bracket_power(&fx.problem.ideal, p.pow(e)).unwrap();
            validate_origin_primary(&ideal).unwrap_or_else(|err| panic!("{} e={e}: {err}", fx.id));
        }
    }
}

#[test]
fn kunz_inequality_is_exact() {
    for fx in common::fixtures() {
        let s = hk_series(&fx.problem, fx.e_max, &opts()).unwrap();
        let d = s.dimension as u32;
        for sample in &s.samples {
            let qd = sample.q.pow(d);
            assert!(sample.colength >= qd, "{} e={}", fx.id, sample.e);
            if sample.e >= 1 {
                assert_eq!(sample.colength == qd, fx.regular, "{} e={}", fx.id, sample.e);
            }
        }
    }
}

/// For `I = m^2 ⊆ J = m`:
/// `λ(R/I^[q]) <= λ(J/I) λ(R/m^[q]) + λ(R/J^[q])` and, taking `J = R`,
/// `λ(R/I^[q]) <= λ(R/I) λ(R/m^[q])`.
#[test]
fn filtration_inequalities_hold_at_every_sample() {
    for fx in common::fixtures() {
        let m = colengths(&fx.problem, fx.e_max.min(3));
        let sq = square_of_maximal(&fx.problem);
        let len_i = colengths(&sq, 0)[0];
        let len_j = m[0];
        // the product bound caps the work for I^[q]
        let e_max = (0..m.len()).take_while(|&e| len_i * m[e] <= 2_000_000).last().unwrap() as u32;
        let i = colengths(&sq, e_max);
        for e in 0..=e_max as usize {
            assert!(i[e] <= (len_i - len_j) * m[e] + m[e], "{} e={e}: filtration", fx.id);
            assert!(i[e] <= len_i * m[e], "{} e={e}: product inequality", fx.id);
        }
    }
}

#[test]
fn last_ratio_lies_in_the_multiplicity_sandwich() {
    for fx in common::fixtures() {
        let s = hk_series(&fx.problem, fx.e_max, &opts()).unwrap();
        let d = s.dimension;
        let powers = ordinary_power_series(&fx.problem, 10.max(d as u32 + 6), &opts()).unwrap();
        let (e, _) = estimate_hs_multiplicity(&powers, d).unwrap();
        let last = s.samples.last().unwrap();
        let ratio = last.colength as f64 / (last.q as f64).powi(d as i32);
        let fact: f64 = (1..=d).map(|k| k as f64).product();
        assert!(ratio >= e / fact - 0.1 && ratio <= e + 0.1, "{}: ratio {ratio}, e {e}", fx.id);
    }
}

#[test]
fn splitting_numbers_are_bounded() {
    let mut seen = 0;
    for fx in common::fixtures() {
        let Some((sop, e_max)) = &fx.sop else { continue };
        let ring = &fx.problem.ring;
        let j = GorensteinSop::verify(ring, ring.parse_polys(sop).unwrap()).unwrap();
        let a = splitting_series(&j, *e_max, &opts()).unwrap();
        let m = colengths(&fx.problem, *e_max);
        let d = ring.dimension() as u32;
        for s in &a {
            assert!(s.a_q <= s.q.pow(d), "{} e={}", fx.id, s.e);
            assert!(s.a_q <= m[s.e as usize], "{} e={}", fx.id, s.e);
        }
        seen += 1;
    }
    assert!(seen >= 7);
}
