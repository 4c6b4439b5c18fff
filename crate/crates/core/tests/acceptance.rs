//! Acceptance suite: one PASS/FAIL line per criterion. All comparisons are
//! exact (tolerance 0); the suite exits non-zero if any criterion fails.

mod common;

use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;

use common::{neg, trivial, Finite};
use hypertate::cli::scenarios::DEMOS;
use hypertate::cli::spec::{validate, Options, Settings};
use hypertate::formation::{check_class_formation, formation_window, fundamental_class, norm_group_table, reciprocity_map};
use hypertate::gcomplexes::{concentrate, shift, GComplex};
use hypertate::gmodules::{finite_field_units, regular_module, trivial_cyclic, DEFAULT_FIELD_CAP};
use hypertate::groups::{direct_product, make_cyclic, symmetric_group, FiniteGroup, DEFAULT_MAX_ORDER};
use hypertate::linalg::{reduce_map, IntMatrix};
use hypertate::resolutions::{build_complete_resolution, Engine, DEFAULT_BAR_CAP};
use hypertate::tate::{cone_les_check, cone_window, nakayama_window, tate_nakayama_check, window_for, Cohomology, TateClass};

/// Tolerance for every comparison below: results are exact integers.
const TOLERANCE: u32 = 0;
const DETERMINISM_RUNS: usize = 3;

type Outcome = Result<String, String>;

fn cohomology(c: &GComplex, range: (i64, i64), engine: Engine) -> Cohomology {
    let g = c.group().clone();
    let (lo, hi) = c.effective_support().unwrap_or((0, 0));
    let n = window_for((lo - range.1 - 1, hi - range.0 + 1)).max(formation_window(c.effective_support()));
    let x = build_complete_resolution(&g, n, engine.resolve(&g), DEFAULT_BAR_CAP).unwrap();
    Cohomology::new(&x, c).unwrap()
}

fn invariants(c: &GComplex, range: (i64, i64), engine: Engine) -> Vec<Vec<BigInt>> {
    let t = cohomology(c, range, engine).groups(range).unwrap();
    (range.0..=range.1).map(|q| t.invariants(q)).collect()
}

fn order(inv: &[BigInt]) -> BigInt {
    inv.iter().product()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn demo_objects() -> Vec<(&'static str, Arc<FiniteGroup>, GComplex)> {
    DEMOS
        .iter()
        .map(|d| {
            let spec = d.spec();
            let settings = Settings::resolve(&spec.options, &Options::default());
            let (g, c) = validate(&spec, &settings).unwrap();
            (d.name, g, c)
        })
        .collect()
}

/// Finite modules used by the brute-force comparison, beyond those in the demos.
fn extra_modules() -> Vec<(String, Finite)> {
    let v4 = || direct_product(&make_cyclic(2), &make_cyclic(2));
    vec![
        ("Z/2 on Z/4 by -1".into(), Finite::new(make_cyclic(2), 4, 1, &[(1, neg(1))])),
        ("Z/2 swapping (Z/3)^2".into(), Finite::new(make_cyclic(2), 3, 2, &[(1, vec![vec![0, 1], vec![1, 0]])])),
        ("Z/3 on Z/3".into(), trivial(make_cyclic(3), 3)),
        ("Z/3 on Z/9".into(), trivial(make_cyclic(3), 9)),
        ("Z/4 on Z/4 by -1".into(), Finite::new(make_cyclic(4), 4, 1, &[(1, neg(1))])),
        ("Z/4 unipotent on (Z/2)^2".into(), Finite::new(make_cyclic(4), 2, 2, &[(1, vec![vec![1, 1], vec![0, 1]])])),
        ("V4 on Z/2".into(), trivial(v4(), 2)),
        ("V4 on Z/4".into(), trivial(v4(), 4)),
        (
            "V4 unipotent on (Z/2)^2".into(),
            Finite::new(v4(), 2, 2, &[(1, vec![vec![1, 1], vec![0, 1]]), (2, vec![vec![1, 0], vec![0, 1]])]),
        ),
    ]
}

/// Every finite module of the suite with `|G| <= 4`, `|M| <= 9`.
fn brute_force_suite() -> Vec<(String, Finite)> {
    let mut out = Vec::new();
    for (name, g, c) in demo_objects() {
        if g.order() > 4 || c.effective_support() != Some((0, 0)) {
            continue;
        }
        if let Some(f) = Finite::from_module(&c.term(0)) {
            if f.size() <= 9 {
                out.push((name.to_string(), f));
            }
        }
    }
    out.extend(extra_modules());
    out
}

fn classical_pattern() -> Outcome {
    let mut checked = 0;
    for n in [2usize, 3, 4, 6] {
        let g = Arc::new(make_cyclic(n));
        let c = concentrate(&trivial_cyclic(&g, 0), 0);
        let bar = invariants(&c, (-4, 4), Engine::Bar);
        let periodic = invariants(&c, (-4, 4), Engine::Periodic);
        ensure(bar == periodic, || format!("engines disagree for Z/{n}"))?;
        for (i, inv) in bar.iter().enumerate() {
            let q = i as i64 - 4;
            let want = if q % 2 == 0 { vec![BigInt::from(n)] } else { vec![] };
            ensure(*inv == want, || format!("Z/{n}, q = {q}: got {inv:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (n, q) values, bar = periodic"))
}

fn cohomological_triviality() -> Outcome {
    let groups = [make_cyclic(2), make_cyclic(4), direct_product(&make_cyclic(2), &make_cyclic(2)), symmetric_group(3)];
    for g in groups {
        let g = Arc::new(g);
        let c = concentrate(&regular_module(&g), 0);
        for engine in [Engine::Auto, Engine::Bar] {
            let inv = invariants(&c, (-3, 3), engine);
            ensure(inv.iter().all(Vec::is_empty), || format!("|G| = {}: {inv:?}", g.order()))?;
        }
    }
    Ok("Z/2, Z/4, Z/2xZ/2, S3 over q in [-3,3]".into())
}

fn ordinary_agreement() -> Outcome {
    let suite = brute_force_suite();
    for (name, f) in &suite {
        let c = concentrate(&f.module(), 0);
        let inv = invariants(&c, (-1, 2), Engine::Auto);
        let want = [f.h_minus1(), f.h0(), f.h1(), f.h2()].map(BigInt::from);
        let got: Vec<BigInt> = inv.iter().map(|i| order(i)).collect();
        ensure(got == want, || format!("{name}: engine {got:?}, brute force {want:?}"))?;
    }
    Ok(format!("{} modules at q = -1, 0, 1, 2", suite.len()))
}

fn shift_identity() -> Outcome {
    let mut count = 0;
    for (name, _, c) in demo_objects() {
        let base = invariants(&c, (-4, 5), Engine::Auto);
        for n in -2i64..=2 {
            let shifted = invariants(&shift(&c, n), (-2, 3), Engine::Auto);
            for (i, inv) in shifted.iter().enumerate() {
                let q = i as i64 - 2;
                ensure(*inv == base[(q + n + 4) as usize], || format!("{name}: n = {n}, q = {q}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} degree comparisons"))
}

fn hilbert_90() -> Outcome {
    for (p, f, n) in [(2u64, 1u32, 2u32), (3, 1, 2), (2, 1, 3)] {
        let m = finite_field_units(p, f, n, DEFAULT_FIELD_CAP).unwrap();
        let inv = invariants(&concentrate(&m, 0), (1, 1), Engine::Auto);
        ensure(inv[0].is_empty(), || format!("F_{}^{n}: H^1 = {:?}", p.pow(f), inv[0]))?;
    }
    let mut herbrand = 0;
    let demos = demo_objects().into_iter().filter_map(|(name, g, c)| {
        let finite = (c.lo()..=c.hi()).all(|j| c.term(j).abelian_group().is_finite());
        (g.is_cyclic() && finite).then(|| (name.to_string(), c))
    });
    let extra = extra_modules().into_iter().filter(|(_, f)| f.g.is_cyclic()).map(|(n, f)| (n, concentrate(&f.module(), 0)));
    for (name, c) in demos.chain(extra) {
        let inv = invariants(&c, (0, 1), Engine::Auto);
        ensure(order(&inv[0]) == order(&inv[1]), || format!("{name}: |H^0| = {}, |H^1| = {}", order(&inv[0]), order(&inv[1])))?;
        herbrand += 1;
    }
    Ok(format!("H^1 = 0 for F4, F9, F8; Herbrand quotient 1 on {herbrand} finite modules"))
}

fn tate_nakayama() -> Outcome {
    let range = (-2, 3);
    for n in [2usize, 3, 4, 6] {
        let g = Arc::new(make_cyclic(n));
        let c = concentrate(&trivial_cyclic(&g, 0), 0);
        let coh = cohomology(&c, (-(nakayama_window(Some((0, 0)), range) as i64), 0), Engine::Periodic);
        let f = check_class_formation(&coh, DEFAULT_MAX_ORDER).map_err(|e| e.to_string())?;
        let u = fundamental_class(&f).map_err(|e| format!("Z/{n}: {e}"))?;
        let r = tate_nakayama_check(&coh, &u, range, DEFAULT_MAX_ORDER).map_err(|e| e.to_string())?;
        ensure(r.hypothesis_i && r.hypothesis_ii, || format!("Z/{n}: hypotheses rejected"))?;
        ensure(r.degrees.len() == 6 && r.degrees.iter().all(|d| d.isomorphism), || format!("Z/{n}: cup not an isomorphism"))?;
    }
    let klein = Arc::new(direct_product(&make_cyclic(2), &make_cyclic(2)));
    let s3 = Arc::new(symmetric_group(3));
    let counterexamples = [
        ("Klein-four on Z", concentrate(&trivial_cyclic(&klein, 0), 0)),
        ("S3 on Z[S3]", concentrate(&regular_module(&s3), 0)),
        ("Z/2 on F4*", concentrate(&finite_field_units(2, 1, 2, DEFAULT_FIELD_CAP).unwrap(), 0)),
    ];
    for (name, c) in counterexamples {
        let n = nakayama_window(c.effective_support(), range) as i64;
        let coh = cohomology(&c, (-n, 0), Engine::Auto);
        let t2 = coh.groups((2, 2)).unwrap();
        let a = if t2.group(2).ngens() > 0 { t2.generator(2, 0) } else { TateClass::zero(t2.group(2), 2) };
        let r = tate_nakayama_check(&coh, &a, range, DEFAULT_MAX_ORDER).map_err(|e| e.to_string())?;
        let at = r.first_failure.as_ref().map(|(h, _)| h.as_str());
        ensure(!r.conclusion && at == Some("(ii)"), || format!("{name}: first failure {at:?}"))?;
    }
    Ok("cup with u is an isomorphism for Z/2, Z/3, Z/4, Z/6; three counterexamples rejected at (ii)".into())
}

fn class_formation() -> Outcome {
    for n in [2usize, 3, 4, 6] {
        let g = Arc::new(make_cyclic(n));
        let c = concentrate(&trivial_cyclic(&g, 0), 0);
        let coh = cohomology(&c, (-2, 2), Engine::Periodic);
        let f = check_class_formation(&coh, DEFAULT_MAX_ORDER).map_err(|e| e.to_string())?;
        ensure(f.passes(), || format!("Z/{n}: {:?}", f.first_obstruction))?;
        let u = fundamental_class(&f).map_err(|e| e.to_string())?;
        let rho = reciprocity_map(&coh, &u).map_err(|e| e.to_string())?;
        let zn = vec![BigInt::from(n)];
        ensure(rho.isomorphism && rho.source.invariants() == zn && rho.target.invariants() == zn, || {
            format!("Z/{n}: reciprocity {} -> {}", rho.source, rho.target)
        })?;
        if n == 4 {
            let rows = norm_group_table(&coh, &u, DEFAULT_MAX_ORDER).map_err(|e| e.to_string())?;
            ensure(rows.len() == 3 && rows.iter().all(|r| r.isomorphism && r.quotient == r.target), || {
                "Z/4 norm table mismatch".to_string()
            })?;
        }
    }
    Ok("C1-C3 and reciprocity iso for Z/2, Z/3, Z/4, Z/6; Z/4 norm table 3/3 rows".into())
}

fn cone_sequences() -> Outcome {
    let range = (-2, 2);
    let mut rows = 0;
    for (name, _, c) in demo_objects() {
        let n = cone_window(c.effective_support(), range) as i64;
        let coh = cohomology(&c, (-n, 0), Engine::Auto);
        for m in 1..=4u64 {
            let r = cone_les_check(&coh, m, range).map_err(|e| e.to_string())?;
            for d in &r.degrees {
                ensure(d.orders_match, || {
                    format!("{name}, m = {m}, i = {}: {:?} vs {:?} * {:?}", d.i, d.cone_order, d.quotient_order, d.torsion_order)
                })?;
                rows += 1;
            }
        }
    }
    Ok(format!("{rows} (scenario, m, i) triples"))
}

fn cor_res() -> Outcome {
    let range = (-2, 3);
    let mut pairs = 0;
    for (name, g, c) in demo_objects() {
        let coh = cohomology(&c, range, Engine::Auto);
        let subs = g.all_subgroups(DEFAULT_MAX_ORDER).map_err(|e| e.to_string())?;
        for u in &subs {
            let cu = coh.subgroup(u).unwrap();
            let tu = cu.groups(range).unwrap();
            for v in subs.iter().filter(|v| v.is_subgroup_of(u)) {
                let cv = cu.subgroup(v).unwrap();
                let tv = cv.groups(range).unwrap();
                let idx = BigInt::from(u.order() / v.order());
                for q in range.0..=range.1 {
                    let res = cu.restriction_map(&tu, &cv, &tv, q).unwrap();
                    let cor = cv.corestriction_map(&tv, &cu, &tu, q).unwrap();
                    let k = tu.group(q).ngens();
                    let lhs = reduce_map(&(&cor * &res), tu.group(q));
                    let rhs = reduce_map(&IntMatrix::scalar(k, idx.clone()), tu.group(q));
                    ensure(lhs == rhs, || format!("{name}: U = {:?}, V = {:?}, q = {q}", u.elements, v.elements))?;
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} subgroup pairs, q in [-2,3]"))
}

fn determinism() -> Outcome {
    for d in DEMOS {
        let mut outputs = Vec::new();
        for _ in 0..DETERMINISM_RUNS {
            let out = Command::new(env!("CARGO_BIN_EXE_hypertate"))
                .args(["demo", d.name, "--format", "json"])
                .output()
                .map_err(|e| e.to_string())?;
            ensure(out.status.success(), || format!("{}: exit {:?}", d.name, out.status.code()))?;
            outputs.push(out.stdout);
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("{}: outputs differ", d.name))?;
    }
    Ok(format!("{} demos x {DETERMINISM_RUNS} runs byte-identical", DEMOS.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("classical pattern for cyclic groups", classical_pattern),
        ("cohomological triviality of the regular module", cohomological_triviality),
        ("agreement with ordinary Tate cohomology", ordinary_agreement),
        ("shift identity", shift_identity),
        ("Hilbert 90 and Herbrand quotient", hilbert_90),
        ("Tate-Nakayama cup isomorphisms", tate_nakayama),
        ("class formation and reciprocity", class_formation),
        ("cone exact-sequence orders", cone_sequences),
        ("cor o res = index", cor_res),
        ("CLI determinism", determinism),
    ];
    println!("acceptance (tolerance {TOLERANCE}: exact)");
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
