//! Acceptance criteria 1–10. Runs without the test harness so every criterion
//! prints exactly one PASS/FAIL line; exits nonzero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use clawbench::baselines::{exact_mwis, greedy_mwis};
use clawbench::construction::{bcc, build_lemma_graph, verify_lemma_bounds, ConstructionParams};
use clawbench::experiments::run_appendix_a;
use clawbench::invariants::{chromatic_number, clique_number, independence_number, is_k_claw_free, max_claw};
use clawbench::ramsey::{catalog_entries, catalog_witness, is_ramsey_witness, search_ramsey, RamseyQuery};
use clawbench::rational::{int, ratio};
use clawbench::relax::{
    edge_lp, lp_solve_exact, moments_from_distribution, projection, qstab_bad_point, qstab_feasible, qstab_optimum,
    sa_feasible, sa_optimum, sos_check, uniform_pseudo_moment, DEFAULT_LP_VARS,
};
use clawbench::{Graph, Limits, Rational, VertexWeights};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;

fn lim() -> Limits {
    Limits::default()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lemma_params(p: usize) -> ConstructionParams {
    ConstructionParams {
        k: 4,
        p,
        tau: 3,
        h: Graph::cycle(5),
    }
}

fn criterion_1() -> Outcome {
    for p in 1..=3 {
        let params = lemma_params(p);
        let (g, labels) = build_lemma_graph(&params).map_err(|e| e.to_string())?;
        let report = verify_lemma_bounds(&g, &labels, &params, &lim()).map_err(|e| e.to_string())?;
        ensure(report.all_pass(), || format!("p={p}: {:?}", report.claims))?;
        ensure(report.claims.len() == 5, || {
            format!("p={p}: {} claims", report.claims.len())
        })?;
        if g.vertex_count() > 20 {
            continue;
        }
        // independent recomputation of the bounds
        let a = common::alpha(&g);
        let ah = common::alpha(&params.h);
        ensure(p * ah <= a && a < 3 * p * ah, || format!("p={p}: α={a} vs α(H)={ah}"))?;
        ensure(common::omega(&g) <= 9, || format!("p={p}: ω > 9"))?;
        ensure(common::max_claw(&g) < 4, || format!("p={p}: induced 4-claw"))?;
    }
    Ok("k=4, τ=3, H=C5, p=1..3: all five claims pass".into())
}

fn criterion_2() -> Outcome {
    let eighteen = build_lemma_graph(&lemma_params(2)).map_err(|e| e.to_string())?.0;
    let cases = [
        ("C5", Graph::cycle(5), 1),
        ("C5", Graph::cycle(5), 2),
        ("Paley(17)", Graph::paley(17).unwrap(), 1),
        ("construction n=18", eighteen, 1),
    ];
    let mut checked = 0;
    for (name, g, ell) in cases {
        let omega = common::omega(&g);
        let y = uniform_pseudo_moment(&g, ell, Some(omega), &lim()).map_err(|e| e.to_string())?;
        ensure(
            *y.get(&[0]).unwrap() == Rational::new(1.into(), (omega + ell).into()),
            || format!("{name}: wrong singleton value"),
        )?;
        let check = sa_feasible(&y, ell, &g, &lim()).map_err(|e| e.to_string())?;
        ensure(check.feasible && check.violation.is_none(), || {
            format!("{name} ℓ={ell}: {:?}", check.violation)
        })?;
        checked += check.constraints_checked;
    }
    Ok(format!(
        "uniform point feasible in all 4 cases, {checked} constraints checked"
    ))
}

fn criterion_3() -> Outcome {
    let g = Graph::paley(17).unwrap();
    let (alpha, omega, ell) = (common::alpha(&g), common::omega(&g), 1);
    ensure((alpha, omega) == (3, 3), || format!("α, ω = {alpha}, {omega}"))?;
    let bound = Rational::new(17.into(), (alpha * (omega + ell)).into());
    ensure(bound == ratio(17, 12), || format!("bound expression {bound}"))?;
    let (opt, y) = sa_optimum(&g, ell, DEFAULT_LP_VARS, &lim()).map_err(|e| e.to_string())?;
    ensure(opt >= ratio(17, 4), || format!("optimum {opt} < 17/4"))?;
    // the optimal moments must pass the independent constraint checker
    let check = sa_feasible(&y, ell, &g, &lim()).map_err(|e| e.to_string())?;
    ensure(check.feasible, || {
        format!("optimal moments infeasible: {:?}", check.violation)
    })?;
    let objective: Rational = (0..17).map(|v| y.get(&[v]).unwrap().clone()).sum();
    ensure(objective == opt, || format!("moment objective {objective} ≠ {opt}"))?;
    let gap = &opt / int(alpha as i64);
    ensure(gap >= bound, || format!("gap {gap} < {bound}"))?;
    Ok(format!("SA⁺_1(Paley(17)) = {opt}, realized gap {gap} ≥ 17/12"))
}

fn criterion_4() -> Outcome {
    let g = Graph::paley(17).unwrap();
    let x = qstab_bad_point(&g, 4, &lim()).map_err(|e| e.to_string())?;
    ensure(qstab_feasible(&x, &g, &lim()).unwrap().is_none(), || {
        "Paley(17) point infeasible".into()
    })?;
    ensure(x.objective(None) == ratio(17, 4), || {
        format!("objective {}", x.objective(None))
    })?;
    ensure(common::alpha(&g) == 3, || "α(Paley(17)) ≠ 3".into())?;
    let mut ratios = Vec::new();
    for (s, t) in catalog_entries().into_iter().filter(|&(s, _)| s >= 3) {
        let h = catalog_witness(s, t).unwrap();
        let r = run_appendix_a(&h, &format!("catalog({s},{t})"), t, &lim()).map_err(|e| e.to_string())?;
        ensure(r.qstab_feasible, || format!("({s},{t}): point infeasible"))?;
        let expected = Rational::new(h.vertex_count().into(), (t * common::alpha(&h)).into());
        ensure(r.ratio == expected, || {
            format!("({s},{t}): ratio {} ≠ {expected}", r.ratio)
        })?;
        ratios.push(format!("({s},{t}) {}", r.ratio));
    }
    Ok(format!(
        "Paley(17) objective 17/4 vs α=3; catalog ratios {}",
        ratios.join(", ")
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = common::rng(5);
    let mut graphs: Vec<Graph> = (1..=3)
        .map(|p| build_lemma_graph(&lemma_params(p)).unwrap().0)
        .collect();
    let mut rejected = 0;
    while graphs.len() < 203 {
        let n = rng.gen_range(1..=20);
        let p = rng.gen_range(0.3..0.95);
        let g = Graph::random(n, p, &mut rng);
        if is_k_claw_free(&g, 4, &lim()).unwrap() {
            graphs.push(g);
        } else {
            rejected += 1;
        }
    }
    for (i, g) in graphs.iter().enumerate() {
        let n = g.vertex_count();
        let w = VertexWeights::new((0..n).map(|_| common::random_weight(&mut rng, 10, 6)).collect()).unwrap();
        let greedy = greedy_mwis(g, &w).unwrap();
        let exact = exact_mwis(g, &w, &lim()).unwrap();
        ensure(g.is_independent(&greedy.set) && g.is_independent(&exact.set), || {
            format!("graph {i}: dependent set")
        })?;
        if n <= 16 {
            ensure(exact.weight == common::mwis(g, w.as_slice()), || {
                format!("graph {i}: exact ≠ brute force")
            })?;
        }
        ensure(int(3) * &greedy.weight >= exact.weight, || {
            format!("graph {i}: 3·{} < {}", greedy.weight, exact.weight)
        })?;
    }
    Ok(format!(
        "{} graphs ({rejected} samples rejected), 3·greedy ≥ exact throughout",
        graphs.len()
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = common::rng(6);
    for i in 0..100 {
        let n = rng.gen_range(1..=10);
        let h1 = Graph::random(n, rng.gen_range(0.1..0.9), &mut rng);
        let h2 = Graph::random(n, rng.gen_range(0.1..0.9), &mut rng);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let d = bcc(&h1, &h2, &perm).unwrap();
        let claw = max_claw(&d, &lim()).unwrap().size;
        ensure(claw == common::max_claw(&d), || {
            format!("triple {i}: claw solver disagrees")
        })?;
        let (a1, a2) = (common::alpha(&h1), common::alpha(&h2));
        ensure(claw <= a1.min(a2), || {
            format!("triple {i}: claw {claw} > min({a1}, {a2})")
        })?;
        let w = common::omega(&d);
        let (w1, w2) = (common::omega(&h1), common::omega(&h2));
        ensure(w <= w1 + w2 + 1, || format!("triple {i}: ω {w} > {w1}+{w2}+1"))?;
    }
    Ok("100 triples, both bounds hold".into())
}

fn criterion_7() -> Outcome {
    let mut rng = common::rng(7);
    let mut worst = f64::INFINITY;
    for i in 0..100 {
        let g = common::random_graph(&mut rng, 1, 8);
        let n = g.vertex_count();
        let count = rng.gen_range(1..=5);
        let mut supports = Vec::new();
        let mut weights = Vec::new();
        for _ in 0..count {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut set: Vec<usize> = Vec::new();
            for v in order {
                if rng.gen_bool(0.7) && set.iter().all(|&u| !g.has_edge(u, v)) {
                    set.push(v);
                }
            }
            supports.push(set);
            weights.push(rng.gen_range(1..=9i64));
        }
        let total: i64 = weights.iter().sum();
        let dist: Vec<(Vec<usize>, Rational)> = supports
            .into_iter()
            .zip(weights)
            .map(|(s, w)| (s, ratio(w, total)))
            .collect();
        let z = moments_from_distribution(&g, &dist, 2).map_err(|e| e.to_string())?;
        let report = sos_check(&z, 2, &g, 1e-9).map_err(|e| e.to_string())?;
        ensure(report.passed, || format!("distribution {i}: {:?}", report.worst()))?;
        if let Some(m) = report.worst() {
            worst = worst.min(m.min_eigenvalue);
        }
        let x = projection(&z, n).map_err(|e| e.to_string())?;
        ensure(qstab_feasible(&x, &g, &lim()).unwrap().is_none(), || {
            format!("distribution {i}: projection outside QSTAB")
        })?;
    }
    Ok(format!(
        "100 distributions pass at level 2 (smallest eigenvalue {worst:.2e})"
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = common::rng(8);
    for i in 0..30 {
        let g = common::random_graph(&mut rng, 2, 9);
        let alpha = int(common::alpha(&g) as i64);
        let sa: Vec<Rational> = (0..=2)
            .map(|ell| sa_optimum(&g, ell, DEFAULT_LP_VARS, &lim()).map(|r| r.0))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let qstab = qstab_optimum(&g, None, &lim()).map_err(|e| e.to_string())?.0;
        let edge = lp_solve_exact(&edge_lp(&g, None).unwrap())
            .optimum
            .ok_or("edge LP has no optimum")?;
        let chain = [&alpha, &sa[2], &sa[1], &sa[0]];
        ensure(chain.windows(2).all(|w| w[0] <= w[1]), || {
            format!("graph {i}: α={alpha} SA2={} SA1={} SA0={}", sa[2], sa[1], sa[0])
        })?;
        ensure(sa[0] == qstab, || format!("graph {i}: SA0 {} ≠ QSTAB {qstab}", sa[0]))?;
        ensure(qstab <= edge, || format!("graph {i}: QSTAB {qstab} > edge LP {edge}"))?;
    }
    Ok("30 graphs, α ≤ SA⁺_2 ≤ SA⁺_1 ≤ SA⁺_0 = QSTAB ≤ edge LP".into())
}

fn criterion_9() -> Outcome {
    let mut rng = common::rng(9);
    for i in 0..200 {
        let g = common::random_graph(&mut rng, 0, 10);
        let got = (
            independence_number(&g, &lim()).unwrap().0,
            clique_number(&g, &lim()).unwrap().0,
            chromatic_number(&g, &lim()).unwrap().0,
            max_claw(&g, &lim()).unwrap().size,
        );
        let want = (
            common::alpha(&g),
            common::omega(&g),
            common::chi(&g),
            common::max_claw(&g),
        );
        ensure(got == want, || format!("graph {i} {g:?}: {got:?} ≠ {want:?}"))?;
    }
    Ok("200 graphs, (α, ω, χ, max claw) match enumeration".into())
}

fn criterion_10() -> Outcome {
    for (s, t) in [(3, 3), (3, 4), (3, 5), (4, 4)] {
        let g = catalog_witness(s, t).ok_or(format!("no catalog entry ({s},{t})"))?;
        ensure(is_ramsey_witness(&g, s, t, &lim()).unwrap(), || {
            format!("({s},{t}) fails")
        })?;
        ensure(common::alpha(&g) < s && common::omega(&g) < t, || {
            format!("({s},{t}) fails enumeration")
        })?;
    }
    let query = |n| RamseyQuery {
        s: 3,
        t: 3,
        n,
        seed: 1,
        budget: 10_000,
    };
    let found = search_ramsey(&query(5))
        .unwrap()
        .ok_or("no (3,3) witness on 5 vertices")?;
    ensure(common::alpha(&found) < 3 && common::omega(&found) < 3, || {
        "search result is not a witness".into()
    })?;
    ensure(search_ramsey(&query(6)).unwrap().is_none(), || {
        "found a (3,3) witness on 6 vertices".into()
    })?;
    Ok("catalog (3,3), (3,4), (3,5), (4,4) verified; search finds n=5, none for n=6".into())
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failures = 0;
    for (id, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2}: PASS ({secs:.1}s) {detail}"),
            Err(detail) => {
                failures += 1;
                println!("criterion {id:>2}: FAIL ({secs:.1}s) {detail}");
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
