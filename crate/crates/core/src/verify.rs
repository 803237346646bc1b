//! The full verification suite behind `verify-paper`: catalog families plus
//! the bound, schedule, surface and resolution sweeps. One check per family
//! and invariant, or per sweep, aggregated over its parameter range.

use crate::bounds::{closed_form_r, closed_form_v, optimize_xi, paper_schedule, BoundProblem, DEFAULT_ROUNDS, DEFAULT_WINDOW};
use crate::catalog::{Catalog, CatalogEntry};
use crate::rational::{int, to_canonical, Rational};
use crate::report::{Check, Report};
use crate::singularities::{hj_expand, resolve_surface_cyclic, reid_tai, singular_strata, QuotientSingularity, SingularityClass};
use crate::stability::{estimate_rs, Status};
use crate::surface::{build_extremal_config, discrepancies, is_negative_definite, min_surface_volume, noether_check, surface_ks2, volume_lower_bound_via_surface, CurveConfig};
use crate::wspace::Hypersurface;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::collections::BTreeMap;

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Per-instance results keyed by invariant name: `(expected, computed)`.
type Outcomes = BTreeMap<&'static str, (String, String)>;

fn instance_outcomes(f: &CatalogEntry, k: i64) -> Outcomes {
    let mut out = Outcomes::new();
    let h = match f.instantiate(k) {
        Ok(h) => h,
        Err(e) => {
            out.insert("instantiate", ("ok".into(), e.to_string()));
            return out;
        }
    };
    let e = &f.expect;
    out.insert("quasi_smooth", ("true".into(), (h.well_formed() && h.quasi_smooth()).to_string()));
    if let Some(p) = &e.dimension {
        out.insert("dimension", (p.eval(k).to_string(), h.dim().to_string()));
    }
    if let Some(p) = &e.amplitude {
        out.insert("amplitude", (p.eval(k).to_string(), h.amplitude().to_string()));
    }
    if let Some(r) = &e.volume {
        let exp = r.eval(k).map(|x| to_canonical(&x)).unwrap_or_else(|e| e.to_string());
        let got = h.volume().map(|x| to_canonical(&x)).unwrap_or_else(|e| e.to_string());
        out.insert("volume", (exp, got));
    }
    let pg = h.geometric_genus().value;
    if let Some(p) = &e.geometric_genus {
        out.insert("geometric_genus", (p.eval(k).to_string(), pg.to_string()));
    }
    if let Some(p) = &e.canonical_dimension {
        let got = h.canonical_image_dimension().map(|d| d.value.to_string()).unwrap_or_else(|e| e.to_string());
        out.insert("canonical_dimension", (p.eval(k).to_string(), got));
    }
    if e.stability_index.is_some() || e.nonbirational_at.is_some() {
        let target = e.stability_index.as_ref().map_or(0, |p| p.eval(k)).max(e.nonbirational_at.as_ref().map_or(0, |p| p.eval(k)));
        match estimate_rs(&h, target as u64 + 3) {
            Ok(est) => {
                if let Some(p) = &e.stability_index {
                    let got = match (est.r_lower, est.r_upper) {
                        (lo, Some(hi)) if lo == hi => lo.to_string(),
                        (lo, hi) => format!("[{lo},{}]", hi.map_or("?".into(), |x| x.to_string())),
                    };
                    out.insert("stability_index", (p.eval(k).to_string(), got));
                }
                if let Some(p) = &e.nonbirational_at {
                    let m = p.eval(k) as u64;
                    let got = est.verdict(m).map_or("missing".into(), |v| v.status.to_string());
                    out.insert("nonbirational_at", (Status::NonBirational.to_string(), got));
                }
            }
            Err(err) => {
                out.insert("stability_index", ("estimate".into(), err.to_string()));
            }
        }
    }
    let strata = singular_strata(&h);
    if let Some(list) = &e.noncanonical {
        let mut exp: Vec<String> =
            list.iter().filter(|s| s.applies(k)).map(|s| s.eval(k).map(|q| q.to_string()).unwrap_or_else(|e| e.to_string())).collect();
        exp.sort();
        let mut got: Vec<String> = strata
            .iter()
            .filter(|s| s.verdict == Some(SingularityClass::NonCanonical))
            .filter_map(|s| s.transverse.as_ref().map(QuotientSingularity::to_string))
            .collect();
        got.sort();
        out.insert("noncanonical", (format!("[{}]", exp.join(";")), format!("[{}]", got.join(";"))));
    }
    if let Some(w) = e.at_worst {
        let ok = strata
            .iter()
            .filter_map(|s| s.verdict)
            .filter(|&c| c != SingularityClass::NonCanonical)
            .all(|c| w.admits(c));
        out.insert("at_worst", ("true".into(), ok.to_string()));
    }
    if let Some(p) = &e.extremal_dimension {
        let n = p.eval(k);
        let noether = min_surface_volume(n).map(|v| v == int(2 * pg_i64(&pg) - 4) && noether_check(&v, pg_i64(&pg)));
        out.insert("noether_line", ("true".into(), noether.map_or_else(|e| e.to_string(), |b| b.to_string())));
        let ks2 = surface_ks2(n).map(|x| to_canonical(&x)).unwrap_or_else(|e| e.to_string());
        let vol = h.volume().map(|x| to_canonical(&x)).unwrap_or_else(|e| e.to_string());
        out.insert("contracted_ks2", (ks2, vol));
    }
    out
}

fn pg_i64(x: &num_bigint::BigUint) -> i64 {
    num_traits::ToPrimitive::to_i64(x).unwrap_or(i64::MAX)
}

fn catalog_checks(catalog: &Catalog, k_max: Option<i64>) -> Vec<Check> {
    let jobs: Vec<(usize, i64)> = catalog
        .families
        .iter()
        .enumerate()
        .flat_map(|(i, f)| f.ks(k_max).map(move |k| (i, k)))
        .collect();
    let results: Vec<(usize, i64, Outcomes)> =
        jobs.par_iter().map(|&(i, k)| (i, k, instance_outcomes(&catalog.families[i], k))).collect();
    let mut grouped: BTreeMap<(usize, &'static str), Vec<(i64, String, String)>> = BTreeMap::new();
    for (i, k, outs) in results {
        for (name, (e, c)) in outs {
            grouped.entry((i, name)).or_default().push((k, e, c));
        }
    }
    grouped
        .into_iter()
        .map(|((i, name), rows)| {
            let f = &catalog.families[i];
            let lo = rows.first().map_or(0, |r| r.0);
            let hi = rows.last().map_or(0, |r| r.0);
            let exp: Vec<&str> = rows.iter().map(|r| r.1.as_str()).collect();
            let got: Vec<&str> = rows.iter().map(|r| r.2.as_str()).collect();
            Check::compare(format!("catalog.{}.{name}", f.name), format!("k={lo}..={hi}"), join(&exp), join(&got))
        })
        .collect()
}

fn bound_checks(n_max: u64) -> Vec<Check> {
    let ns: Vec<u64> = (2..=n_max).collect();
    let rows: Vec<(String, String, String, String, bool)> = ns
        .par_iter()
        .map(|&n| {
            let ni = n as i64;
            let t = optimize_xi(&BoundProblem::corank_one(n).unwrap(), DEFAULT_WINDOW, DEFAULT_ROUNDS);
            let ev = to_canonical(&closed_form_v(ni, ni - 1).unwrap());
            let er = closed_form_r(ni, ni - 1).unwrap().to_string();
            let full = BoundProblem::full_dimension(n).unwrap();
            let full_ok = crate::bounds::volume_bound(&full) == int(2) && crate::bounds::rs_upper_bound(&full) == n + 2;
            (format!("{ev}|{er}"), format!("{}|{}", to_canonical(&t.final_xi), t.rs_upper), ev, er, full_ok)
        })
        .collect();
    let range = format!("n=2..={n_max}");
    vec![
        Check::compare(
            "bounds.corank_one",
            range.clone(),
            join(&rows.iter().map(|r| r.0.clone()).collect::<Vec<_>>()),
            join(&rows.iter().map(|r| r.1.clone()).collect::<Vec<_>>()),
        ),
        Check::holds("bounds.full_dimension", range, rows.iter().all(|r| r.4)),
    ]
}

fn schedule_checks(k_max: i64) -> Vec<Check> {
    let mut checks = Vec::new();
    let cases: [(&str, i64, fn(i64) -> Vec<Rational>); 3] = [
        ("n2mod3", 2, |k| vec![Rational::new(8.into(), (9 * k + 8).into()), Rational::new(32.into(), (33 * k + 32).into())]),
        ("n1mod3", 1, |k| vec![Rational::new(8.into(), (9 * k + 5).into()), Rational::new(2.into(), (2 * k + 1).into())]),
        ("n0mod3", 0, |k| {
            let mut v = vec![Rational::new(8.into(), (9 * k + 2).into()), Rational::new(4.into(), (4 * k + 1).into())];
            v.extend((5..=crate::bounds::TAIL_END).map(|t| Rational::new(t.into(), (t * k + 1).into())));
            v
        }),
    ];
    for (name, r, shown) in cases {
        let mut ok = true;
        let mut first_bad = String::new();
        for k in 1..=k_max {
            let n = (3 * k + r) as u64;
            let t = paper_schedule(n).unwrap();
            let disp = t.displayed();
            let fine = t.verified()
                && shown(k).iter().all(|x| disp.contains(x))
                && t.final_xi == closed_form_v(n as i64, n as i64 - 1).unwrap();
            if !fine && ok {
                first_bad = format!("k={k}");
            }
            ok &= fine;
        }
        let mut c = Check::holds(format!("schedule.{name}"), format!("k=1..={k_max}"), ok);
        if !ok {
            c.computed = format!("false at {first_bad}");
        }
        checks.push(c);
    }
    checks
}

fn surface_checks(n_max: i64) -> Vec<Check> {
    let ns: Vec<i64> = (3..=n_max).collect();
    let expected = |n: i64| -> Rational {
        let a = int((n - 1) * (n - 1));
        match n % 3 {
            2 => int(3) * a / int(n + 1),
            1 => int(6) * a / int(2 * n + 1),
            _ => int(3) * a / int(n),
        }
    };
    let exp: Vec<String> = ns.iter().map(|&n| to_canonical(&expected(n))).collect();
    let got: Vec<String> = ns.iter().map(|&n| to_canonical(&surface_ks2(n).unwrap())).collect();
    let vols = ns.iter().all(|&n| volume_lower_bound_via_surface(n).unwrap() == closed_form_v(n, n - 1).unwrap());
    let negdef = ns.iter().all(|&n| is_negative_definite(&build_extremal_config(n).unwrap()));
    // the non-simple configurations for n = 3k with V.E = 2 contracted alongside E
    let alt = ns.iter().filter(|&&n| n % 3 == 0).all(|&n| {
        let k = n / 3;
        let e = -(k + 1);
        let kz2 = min_surface_volume(n).unwrap();
        let simple = crate::surface::contracted_ks2(&kz2, &build_extremal_config(n).unwrap()).unwrap().ks_squared;
        alternative_configs(e).iter().all(|c| crate::surface::contracted_ks2(&kz2, c).is_ok_and(|r| r.ks_squared >= simple))
    });
    let range = format!("n=3..={n_max}");
    vec![
        Check::compare("surface.contracted_ks2", range.clone(), join(&exp), join(&got)),
        Check::holds("surface.matches_closed_form", range.clone(), vols),
        Check::holds("surface.negative_definite", range.clone(), negdef),
        Check::holds("surface.alternative_trees", range, alt),
    ]
}

/// Trees with `V.E = 2` beyond the simple one: `E` between `V1` and `V2`
/// with a pendant `(-2)`-curve on `V2`, or with a fork of two `(-2)`-curves
/// at `V1`.
pub fn alternative_configs(e_self: i64) -> Vec<CurveConfig> {
    let chain = CurveConfig::chain(&["V1", "E", "V2", "V3"], &[-2, e_self, -2, -2]).unwrap();
    let curves = ["E", "V1", "V2", "V3", "V4"]
        .iter()
        .zip([e_self, -2, -2, -2, -2])
        .map(|(l, s)| crate::surface::Curve { label: l.to_string(), self_intersection: s, genus: 0 })
        .collect();
    let mut m = vec![vec![0; 5]; 5];
    for (i, j) in [(0, 1), (0, 2), (1, 3), (1, 4)] {
        m[i][j] = 1;
        m[j][i] = 1;
    }
    vec![chain, CurveConfig::new(curves, m).unwrap()]
}

fn resolution_checks(k_max: i64) -> Vec<Check> {
    let ks: Vec<i64> = (1..=k_max).collect();
    let a = ks.iter().all(|&k| hj_expand(2 * k + 1, k + 1).is_ok_and(|e| e.0 == vec![2, k + 1]));
    let b = ks.iter().all(|&k| hj_expand(4 * k, 2 * k + 1).is_ok_and(|e| e.0 == vec![2, k + 1, 2]));
    let mut residual_ok = true;
    for &k in &ks {
        for q in [QuotientSingularity::new(2 * k as u64 + 1, &[1, k as u64 + 1]), QuotientSingularity::new(4 * k as u64, &[1, 2 * k as u64 + 1]), QuotientSingularity::new(k as u64 + 1, &[1, 1])] {
            let res = resolve_surface_cyclic(&q).unwrap();
            if res.chain.is_empty() {
                continue;
            }
            let cfg = CurveConfig::chain(&vec!["E"; res.chain.len()], &res.chain).unwrap();
            residual_ok &= discrepancies(&cfg).is_ok_and(|d| d == res.discrepancies);
        }
    }
    let crepant = [QuotientSingularity::new(3, &[1, 2]), QuotientSingularity::new(4, &[1, 3])]
        .iter()
        .all(|q| reid_tai(q) == SingularityClass::Canonical && resolve_surface_cyclic(q).is_ok_and(|r| r.is_crepant()));
    let range = format!("k=1..={k_max}");
    vec![
        Check::holds("resolve.hj_2k+1", range.clone(), a),
        Check::holds("resolve.hj_4k", range.clone(), b),
        Check::holds("resolve.residual", range, residual_ok),
        Check::holds("resolve.crepant", "1/3(1,2),1/4(1,3)", crepant),
    ]
}

/// Exceptional curves of the contraction to the canonical surface, by the
/// residue of `n` mod 3, with a sample at `k = 2`.
pub fn exceptional_table() -> Value {
    let rows: Vec<Value> = [(2, "3k+2"), (1, "3k+1"), (0, "3k")]
        .iter()
        .map(|&(r, label)| {
            let n = 6 + r;
            let cfg = build_extremal_config(n).unwrap();
            let a = discrepancies(&cfg).unwrap();
            let curves: Vec<Value> = cfg
                .curves()
                .iter()
                .zip(&a)
                .map(|(c, x)| json!({"label": c.label, "self_intersection_k2": c.self_intersection, "discrepancy_k2": to_canonical(x)}))
                .collect();
            json!({
                "n": format!("n = {label}"),
                "e_squared": "-(k+1)",
                "v_dot_e": 2 - r,
                "curves": curves,
                "ks2_k2": to_canonical(&surface_ks2(n).unwrap()),
            })
        })
        .collect();
    Value::Array(rows)
}

pub fn verify_paper(catalog: &Catalog, k_max: Option<i64>) -> Report {
    let kk = k_max.unwrap_or(10).max(1);
    let n_max = (3 * kk + 2).min(59) as u64;
    let mut report = Report::new(
        "verify-paper",
        json!({
            "families": catalog.families.iter().map(|f| f.name.clone()).collect::<Vec<_>>(),
            "k_max": k_max,
            "exceptional_curves": exceptional_table(),
        }),
    );
    report.extend(catalog_checks(catalog, k_max));
    report.extend(bound_checks(n_max));
    report.extend(schedule_checks(kk.min(10)));
    report.extend(surface_checks(n_max as i64));
    report.extend(resolution_checks((5 * kk).min(50)));
    report
}

/// Hypersurface of a family at `k`, for callers outside the suite.
pub fn instance(catalog: &Catalog, name: &str, k: i64) -> Option<Hypersurface> {
    catalog.families.iter().find(|f| f.name == name).and_then(|f| f.instantiate(k).ok())
}
