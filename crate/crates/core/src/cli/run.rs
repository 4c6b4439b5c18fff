//! Runs a scenario and assembles its report.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use serde_json::{json, Value};

use super::spec::{big_json, validate, Analysis, ScenarioSpec, Settings};
use crate::error::{Error, Result};
use crate::formation::{
    check_class_formation, formation_window, fundamental_class, norm_group_table, reciprocity_map, FormationReport,
    Verdict,
};
use crate::linalg::{AbGroup, IntMatrix};
use crate::resolutions::{build_complete_resolution, validate_complete_resolution};
use crate::tate::{
    cone_les_check, cone_window, nakayama_window, tate_nakayama_check, window_for, Cohomology, TateClass,
};

/// A finished run: the deterministic JSON body plus wall-clock timings.
#[derive(Clone, Debug)]
pub struct Report {
    pub body: Value,
    pub timings: Vec<(String, Duration)>,
}

fn invariants(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(big_json).collect())
}

fn group_json(a: &AbGroup) -> Value {
    json!({
        "group": a.to_string(),
        "invariants": invariants(&a.invariants()),
        "order": a.order().map_or(Value::Null, |o| big_json(&o)),
    })
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| invariants(r)).collect())
}

fn class_json(c: &TateClass) -> Value {
    json!({
        "degree": c.degree,
        "coords": invariants(&c.coords),
        "order": c.order.as_ref().map_or(Value::Null, big_json),
    })
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Skipped => "skipped",
    }
}

/// Resolution window the requested analyses need.
pub fn required_window(spec: &ScenarioSpec, support: Option<(i64, i64)>, range: (i64, i64)) -> usize {
    let mut n = 1;
    for a in &spec.analyses {
        let w = match a {
            Analysis::Tate => match support {
                Some((lo, hi)) => window_for((lo - range.1 - 1, hi - range.0 + 1)),
                None => 1,
            },
            Analysis::Formation | Analysis::NormTable => formation_window(support),
            Analysis::TateNakayama => nakayama_window(support, range).max(formation_window(support)),
            Analysis::ConeLes { .. } => cone_window(support, range),
            Analysis::Resolution => 1,
        };
        n = n.max(w);
    }
    n
}

struct Ctx<'a> {
    coh: &'a Cohomology,
    settings: &'a Settings,
    formation: Option<FormationReport>,
}

impl Ctx<'_> {
    fn formation(&mut self) -> Result<&FormationReport> {
        if self.formation.is_none() {
            self.formation = Some(check_class_formation(self.coh, self.settings.max_order)?);
        }
        Ok(self.formation.as_ref().unwrap())
    }
}

pub fn run_scenario(spec: &ScenarioSpec, settings: &Settings) -> Result<Report> {
    let mut timings = Vec::new();
    let t0 = Instant::now();
    let (g, c) = validate(spec, settings)?;
    let support = c.effective_support();
    let need = required_window(spec, support, settings.range);
    if need > settings.window {
        let w = settings.window as i64;
        return Err(Error::WindowTooSmall { need_lo: -(need as i64), need_hi: need as i64, have_lo: -w, have_hi: w });
    }
    let engine = settings.engine.resolve(&g);
    let x = build_complete_resolution(&g, need, engine, settings.bar_cap)?;
    let coh = Cohomology::new(&x, &c)?;
    timings.push(("setup".to_string(), t0.elapsed()));

    let (ab, _) = g.abelianization();
    let terms: Vec<Value> = (c.lo()..=c.hi())
        .map(|j| json!({ "degree": j, "module": c.term(j).abelian_group().to_string() }))
        .collect();
    let mut body = json!({
        "scenario": spec.name.clone().unwrap_or_else(|| "unnamed".into()),
        "input": serde_json::to_value(spec).expect("specs serialize"),
        "settings": {
            "engine": engine.name(),
            "window": need,
            "window-limit": settings.window,
            "range": [settings.range.0, settings.range.1],
            "max-order": settings.max_order,
        },
        "group": {
            "order": g.order(),
            "abelian": g.is_abelian(),
            "cyclic": g.is_cyclic(),
            "abelianization": ab.to_string(),
        },
        "coefficients": {
            "support": support.map_or(Value::Null, |(a, b)| json!([a, b])),
            "terms": terms,
        },
    });
    let mut ctx = Ctx { coh: &coh, settings, formation: None };
    let mut out = Vec::new();
    for a in &spec.analyses {
        let t = Instant::now();
        let (name, v) = match a {
            Analysis::Tate => ("tate", tate(&ctx)?),
            Analysis::Formation => ("formation", formation(&mut ctx)?),
            Analysis::TateNakayama => ("tate-nakayama", nakayama(&mut ctx)?),
            Analysis::ConeLes { m } => ("cone-les", cone(&ctx, m)?),
            Analysis::NormTable => ("norm-table", norm_table(&mut ctx)?),
            Analysis::Resolution => ("resolution", resolution(&ctx)),
        };
        timings.push((name.to_string(), t.elapsed()));
        out.push(v);
    }
    body["analyses"] = Value::Array(out);
    Ok(Report { body, timings })
}

fn tate(ctx: &Ctx<'_>) -> Result<Value> {
    let range = ctx.settings.range;
    let t = ctx.coh.groups(range)?;
    let degrees: Vec<Value> = (range.0..=range.1)
        .map(|q| {
            let mut d = group_json(t.group(q));
            d["q"] = json!(q);
            d
        })
        .collect();
    let mut v = json!({
        "kind": "tate",
        "range": [range.0, range.1],
        "d-squared-zero": t.d_squared_zero(),
        "degrees": degrees,
    });
    let g = ctx.coh.group();
    if g.is_cyclic() && range.0 <= 0 && range.1 >= 1 {
        let (h0, h1) = (t.group(0).order(), t.group(1).order());
        if let (Some(a), Some(b)) = (h0, h1) {
            v["herbrand"] = json!({ "h0": big_json(&a), "h1": big_json(&b), "quotient-one": a == b });
        }
    }
    Ok(v)
}

fn formation(ctx: &mut Ctx<'_>) -> Result<Value> {
    let coh = ctx.coh;
    let r = ctx.formation()?.clone();
    let subgroups: Vec<Value> = r
        .subgroups
        .iter()
        .map(|s| {
            json!({
                "elements": s.elements,
                "order": s.order,
                "normal": s.normal,
                "h1": invariants(&s.h1),
                "h2": invariants(&s.h2),
                "c1": s.c1,
                "c2": s.c2,
            })
        })
        .collect();
    let c3 = json!({
        "verdict": verdict(r.c3.verdict),
        "k": r.c3.k,
        "candidates": r.c3.candidates,
        "witnesses": r.c3.witnesses,
        "unique": r.c3.witnesses == 1,
        "pairs-checked": r.c3.pairs.len(),
        "pairs-compatible": r.c3.pairs.iter().filter(|p| p.compatible).count(),
        "formulations-agree": r.c3.formulations_agree,
    });
    let mut v = json!({
        "kind": "formation",
        "verdict": if r.passes() { "pass" } else { "fail" },
        "first-obstruction": r.first_obstruction.as_ref().map_or(Value::Null, |o| json!({
            "axiom": o.axiom,
            "subgroup": o.subgroup,
        })),
        "c1": verdict(r.c1),
        "c2": verdict(r.c2),
        "c3": c3,
        "subgroups": subgroups,
        "fundamental-class": r.fundamental_class.as_ref().map_or(Value::Null, class_json),
        "convention": r.convention,
    });
    if r.passes() {
        let u = fundamental_class(&r)?;
        let rho = reciprocity_map(coh, &u)?;
        v["reciprocity"] = json!({
            "source": rho.source.to_string(),
            "target": rho.target.to_string(),
            "matrix": matrix_json(&rho.matrix),
            "injective": rho.injective,
            "surjective": rho.surjective,
            "isomorphism": rho.isomorphism,
            "density": rho.density,
        });
    }
    Ok(v)
}

fn nakayama(ctx: &mut Ctx<'_>) -> Result<Value> {
    let coh = ctx.coh;
    let range = ctx.settings.range;
    let max_order = ctx.settings.max_order;
    let f = ctx.formation()?.clone();
    let t2 = coh.groups((2, 2))?;
    let (a, source) = match fundamental_class(&f) {
        Ok(u) => (u, "fundamental class"),
        Err(_) if t2.group(2).ngens() > 0 => (t2.generator(2, 0), "first canonical generator"),
        Err(_) => (TateClass::zero(t2.group(2), 2), "zero class"),
    };
    let r = tate_nakayama_check(coh, &a, range, max_order)?;
    let subgroups: Vec<Value> = r
        .subgroups
        .iter()
        .map(|s| {
            json!({
                "elements": s.elements,
                "order": s.order,
                "h1": invariants(&s.h1),
                "h2": invariants(&s.h2),
                "restricted-order": s.restricted_order.as_ref().map_or(Value::Null, big_json),
                "i": s.condition_i,
                "ii": s.condition_ii,
            })
        })
        .collect();
    let degrees: Vec<Value> = r
        .degrees
        .iter()
        .map(|d| {
            json!({
                "q": d.q,
                "source": invariants(&d.source),
                "target": invariants(&d.target),
                "injective": d.injective,
                "surjective": d.surjective,
                "isomorphism": d.isomorphism,
            })
        })
        .collect();
    Ok(json!({
        "kind": "tate-nakayama",
        "class": class_json(&a),
        "class-source": source,
        "hypothesis-i": r.hypothesis_i,
        "hypothesis-ii": r.hypothesis_ii,
        "first-failure": r.first_failure.as_ref().map_or(Value::Null, |(h, s)| json!({ "hypothesis": h, "subgroup": s })),
        "subgroups": subgroups,
        "degrees": degrees,
        "conclusion": r.conclusion,
    }))
}

fn cone(ctx: &Ctx<'_>, ms: &[u64]) -> Result<Value> {
    let mut runs = Vec::new();
    for &m in ms {
        let r = cone_les_check(ctx.coh, m, ctx.settings.range)?;
        let degrees: Vec<Value> = r
            .degrees
            .iter()
            .map(|d| {
                json!({
                    "i": d.i,
                    "cone": invariants(&d.cone),
                    "cone-order": d.cone_order.as_ref().map_or(Value::Null, big_json),
                    "quotient-order": d.quotient_order.as_ref().map_or(Value::Null, big_json),
                    "torsion-order": d.torsion_order.as_ref().map_or(Value::Null, big_json),
                    "orders-match": d.orders_match,
                    "composite-zero": d.composite_zero,
                    "inclusion-image": d.inclusion_image_matches,
                    "projection-image": d.projection_image_matches,
                })
            })
            .collect();
        runs.push(json!({ "m": m, "all-pass": r.all_pass(), "degrees": degrees }));
    }
    Ok(json!({ "kind": "cone-les", "runs": runs }))
}

fn norm_table(ctx: &mut Ctx<'_>) -> Result<Value> {
    let coh = ctx.coh;
    let max_order = ctx.settings.max_order;
    let f = ctx.formation()?.clone();
    let u = match fundamental_class(&f) {
        Ok(u) => u,
        Err(e) => return Ok(json!({ "kind": "norm-table", "skipped": e.to_string() })),
    };
    let rows: Vec<Value> = norm_group_table(coh, &u, max_order)?
        .iter()
        .map(|r| {
            json!({
                "subgroup": r.subgroup,
                "order": r.order,
                "quotient": invariants(&r.quotient),
                "target": invariants(&r.target),
                "well-defined": r.well_defined,
                "surjective": r.surjective,
                "isomorphism": r.isomorphism,
            })
        })
        .collect();
    let all = rows.iter().all(|r| r["isomorphism"] == json!(true));
    Ok(json!({ "kind": "norm-table", "rows": rows, "all-isomorphisms": all }))
}

fn resolution(ctx: &Ctx<'_>) -> Value {
    let x = ctx.coh.resolution();
    let r = validate_complete_resolution(x);
    let degrees: Vec<Value> = r
        .degrees
        .iter()
        .map(|d| json!({ "degree": d.degree, "z-rank": d.z_rank, "composite-zero": d.composite_zero, "exact": d.exact }))
        .collect();
    json!({
        "kind": "resolution",
        "engine": r.engine,
        "window": [r.window.0, r.window.1],
        "method": r.method,
        "ranks": (r.window.0..=r.window.1).map(|k| x.rank(k)).collect::<Vec<_>>(),
        "degrees": degrees,
        "augmentation-exact": r.augmentation_exact,
        "coaugmentation-exact": r.coaugmentation_exact,
        "splice-factors": r.splice_factors,
        "all-pass": r.all_pass(),
    })
}

