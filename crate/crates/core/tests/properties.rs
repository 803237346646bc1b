mod common;

use common::{brute_count, brute_monomials};
use hyperbound::bounds::{ine1_step, BoundProblem};
use hyperbound::cli;
use hyperbound::rational::{int, rat};
use hyperbound::singularities::{hj_expand, reid_tai, resolve_surface_cyclic, QuotientSingularity, SingularityClass};
use hyperbound::stability::{monomial_basis, torus_separation_index};
use hyperbound::surface::{contracted_ks2, discrepancies, is_negative_definite, CurveConfig};
use hyperbound::wspace::{count_monomials, quasi_smooth_with_support, Hypersurface, WeightVector};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

fn hypersurface() -> impl Strategy<Value = Hypersurface> {
    (prop::collection::vec(1u64..=7, 3..=5), 1u64..=6).prop_filter_map("general type", |(mut w, extra)| {
        w.sort();
        let d = w.iter().sum::<u64>() + extra;
        Hypersurface::from_weights(&w, d).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn count_matches_enumeration(w in prop::collection::vec(1u64..=12, 1..=5), m in 0u64..=60) {
        let got = count_monomials(&WeightVector::new(w.clone()).unwrap(), m);
        prop_assert_eq!(got, BigUint::from(brute_count(&w, m)));
    }

    #[test]
    fn volume_times_weights(h in hypersurface()) {
        let n = h.dim() as u32;
        let prod: u64 = h.weights().iter().product();
        let v = h.volume().unwrap();
        prop_assert_eq!(v * int(prod as i64), int((h.degree() as i64) * h.amplitude().pow(n)));
    }

    #[test]
    fn pure_power_keeps_quasi_smoothness(
        w in prop::collection::vec(1u64..=5, 3..=4),
        d in 4u64..=20,
        mask in any::<u64>(),
        pick in any::<prop::sample::Index>(),
    ) {
        let all = brute_monomials(&w, d);
        let support: Vec<Vec<u64>> =
            all.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, e)| e.clone()).collect();
        let i = pick.index(w.len());
        if d % w[i] == 0 && quasi_smooth_with_support(w.len(), &support) {
            let mut more = support.clone();
            let mut e = vec![0; w.len()];
            e[i] = d / w[i];
            more.push(e);
            prop_assert!(quasi_smooth_with_support(w.len(), &more));
        }
    }

    #[test]
    fn basis_matches_count(h in hypersurface(), m in 1u64..=4) {
        let basis = monomial_basis(&h, m).unwrap();
        let count = count_monomials(h.ambient(), basis.degree);
        prop_assert_eq!(BigUint::from(basis.exponents.len()), count);
        prop_assert!(basis.exponents.iter().all(|e| e.iter().zip(h.weights()).map(|(a, b)| a * b).sum::<u64>() == basis.degree));
        let idx = torus_separation_index(&basis, h.ambient());
        prop_assert!(basis.exponents.len() > 1 || idx == 0);
    }

    #[test]
    fn ine1_never_decreases(n in 2u64..=40, num in 1i64..=40, den in 1i64..=80, dm in 0u64..=60) {
        let p = BoundProblem::corank_one(n).unwrap().with_xi(rat(num, den));
        let m = p.first_m() + dm;
        if let Ok(v) = ine1_step(&p, m) {
            prop_assert!(v >= p.xi);
        }
    }

    #[test]
    fn chain_contraction(chain in prop::collection::vec(-6i64..=-2, 1..=6)) {
        let labels: Vec<String> = (0..chain.len()).map(|i| format!("E{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let cfg = CurveConfig::chain(&refs, &chain).unwrap();
        prop_assert!(is_negative_definite(&cfg));
        let a = discrepancies(&cfg).unwrap();
        let m = cfg.matrix();
        for i in 0..chain.len() {
            let lhs: hyperbound::Rational = (0..chain.len()).map(|j| &a[j] * int(m[i][j])).sum();
            prop_assert_eq!(lhs, int(-2 - chain[i]));
        }
        let res = contracted_ks2(&int(0), &cfg).unwrap();
        prop_assert!(res.correction <= int(0));
        prop_assert!(res.ks_squared >= int(0));
    }

    #[test]
    fn report_json_round_trips(n in 2i64..=30) {
        let out = cli::run(["hyperbound", "--format", "json", "bounds", &n.to_string(), "--trace"]);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        prop_assert_eq!(hyperbound::report::render_value_json(&v), out.stdout.clone());
        let text = cli::run(["hyperbound", "bounds", &n.to_string(), "--trace"]).stdout;
        for c in v["checks"].as_array().unwrap() {
            let verdict = if c["pass"].as_bool().unwrap() { "PASS" } else { "FAIL" };
            let line = format!("{verdict} {}:", c["id"].as_str().unwrap());
            prop_assert!(text.contains(&line), "missing {}", line);
        }
    }
}

#[test]
fn continued_fraction_round_trip() {
    for p in 2..=500i64 {
        for q in 1..p {
            if p.gcd(&q) != 1 {
                continue;
            }
            let e = hj_expand(p, q).unwrap();
            assert!(e.0.iter().all(|&b| b >= 2), "{p}/{q}: {:?}", e.0);
            assert_eq!(e.evaluate(), rat(p, q));
        }
    }
}

#[test]
fn minimal_resolutions_have_nonpositive_discrepancies() {
    for r in 2..=80u64 {
        for q in 1..r {
            if r.gcd(&q) != 1 {
                continue;
            }
            let res = resolve_surface_cyclic(&QuotientSingularity::new(r, &[1, q])).unwrap();
            assert!(res.discrepancies.iter().all(|a| *a <= int(0) && *a > int(-1)), "1/{r}(1,{q})");
        }
        assert_eq!(reid_tai(&QuotientSingularity::new(r, &[1, r - 1])), SingularityClass::Canonical);
    }
}

#[test]
fn smith_index_is_unimodular_invariant() {
    let w = WeightVector::new(vec![1, 1, 2, 3]).unwrap();
    let exps = brute_monomials(w.weights(), 6);
    let map = hyperbound::stability::MonomialMap { degree: 6, exponents: exps.clone() };
    let mut rev = exps;
    rev.reverse();
    let map_rev = hyperbound::stability::MonomialMap { degree: 6, exponents: rev };
    assert_eq!(torus_separation_index(&map, &w), torus_separation_index(&map_rev, &w));
    assert!(!BigInt::from(torus_separation_index(&map, &w)).is_zero());
}
