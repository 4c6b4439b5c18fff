//! Class-formation axioms at finite level, fundamental classes, the
//! reciprocity map and norm-group tables.
//!
//! (C1) `Ĥ^1(H, C) = 0`, (C2) `Ĥ^2(H, C)` cyclic of order `|H|`, (C3) a family
//! of generators `u_H` with `res_{U→V}(u_U) = u_V`. The family is determined
//! by `u_G`; candidates `k·g` (`g` the canonical generator, `k` prime to
//! `|G|`) are tried in increasing `k`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::Subgroup;
use crate::linalg::{cokernel_of_columns, invert_iso, is_injective, is_surjective, reduce_map, AbGroup, IntMatrix};
use crate::tate::{cup_window, cup_with, restriction, window_for, Cohomology, TateClass, TateGroups};

/// Reported with every formation verdict.
pub const CONVENTION: &str =
    "generator family: least k prime to |G| with k·(canonical generator of H^2(G)) restricting to generators; a convention, not canonical";

pub const DENSITY: &str = "dense (finite level: surjective)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    fn of(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupVerdict {
    pub elements: Vec<usize>,
    pub order: usize,
    pub normal: bool,
    pub h1: Vec<BigInt>,
    pub h2: Vec<BigInt>,
    pub c1: bool,
    pub c2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairVerdict {
    /// Indices into [`FormationReport::subgroups`], `lower ≤ upper`.
    pub upper: usize,
    pub lower: usize,
    pub compatible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C3Report {
    pub verdict: Verdict,
    /// Multiplier of the canonical generator chosen for `u_G`.
    pub k: Option<u64>,
    pub candidates: usize,
    /// Number of admissible `k`; more than one means the family is not unique.
    pub witnesses: usize,
    /// `u_H` in canonical coordinates of `Ĥ^2(H)`, per subgroup.
    pub family: Vec<Vec<BigInt>>,
    pub pairs: Vec<PairVerdict>,
    /// The pairwise squares agree with restriction from the top.
    pub formulations_agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub axiom: &'static str,
    pub subgroup: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormationReport {
    pub group_order: usize,
    pub subgroups: Vec<SubgroupVerdict>,
    pub c1: Verdict,
    pub c2: Verdict,
    pub c3: C3Report,
    pub first_obstruction: Option<Obstruction>,
    pub fundamental_class: Option<TateClass>,
    pub convention: &'static str,
}

impl FormationReport {
    pub fn passes(&self) -> bool {
        self.first_obstruction.is_none()
    }
}

/// Window covering every computation of this module for coefficients on `support`.
pub fn formation_window(support: Option<(i64, i64)>) -> usize {
    let Some((lo, hi)) = support else { return 2 };
    let (a, b) = cup_window((lo, hi), 2, 0);
    window_for((a.min(lo - 3), b.max(hi + 3)))
}

fn ensure_whole(coh: &Cohomology) -> Result<()> {
    if coh.is_whole() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("formation checks run over the whole group".into()))
    }
}

struct Level {
    sub: Subgroup,
    coh: Cohomology,
    groups: TateGroups,
}

/// Checks (C1)–(C3) over all subgroups of order at most `max_order`.
pub fn check_class_formation(coh: &Cohomology, max_order: usize) -> Result<FormationReport> {
    ensure_whole(coh)?;
    let g = coh.parent().clone();
    let subs = g.all_subgroups(max_order)?;
    let mut levels = Vec::with_capacity(subs.len());
    let mut verdicts = Vec::with_capacity(subs.len());
    for h in subs {
        let ch = coh.subgroup(&h)?;
        let th = ch.groups((1, 2))?;
        let order = BigInt::from(h.order());
        verdicts.push(SubgroupVerdict {
            elements: h.elements.clone(),
            order: h.order(),
            normal: h.is_normal,
            h1: th.invariants(1),
            h2: th.invariants(2),
            c1: th.group(1).is_trivial(),
            c2: th.group(2).is_cyclic_of_order(&order),
        });
        levels.push(Level { sub: h, coh: ch, groups: th });
    }
    let c1 = Verdict::of(verdicts.iter().all(|v| v.c1));
    let c2 = Verdict::of(verdicts.iter().all(|v| v.c2));
    let mut first_obstruction = verdicts
        .iter()
        .find(|v| !v.c1)
        .map(|v| Obstruction { axiom: "C1", subgroup: v.elements.clone() })
        .or_else(|| verdicts.iter().find(|v| !v.c2).map(|v| Obstruction { axiom: "C2", subgroup: v.elements.clone() }));
    let mut c3 = C3Report {
        verdict: Verdict::Skipped,
        k: None,
        candidates: 0,
        witnesses: 0,
        family: vec![],
        pairs: vec![],
        formulations_agree: false,
    };
    let mut fundamental_class = None;
    if first_obstruction.is_none() {
        let top = levels.iter().position(|l| l.sub.order() == g.order()).expect("the whole group is listed");
        let (c3r, u) = search_family(&levels, top, g.order())?;
        if c3r.verdict == Verdict::Fail {
            first_obstruction = Some(Obstruction {
                axiom: "C3",
                subgroup: c3r
                    .pairs
                    .iter()
                    .find(|p| !p.compatible)
                    .map_or_else(|| g.whole().elements, |p| levels[p.lower].sub.elements.clone()),
            });
        }
        fundamental_class = u;
        c3 = c3r;
    }
    Ok(FormationReport {
        group_order: g.order(),
        subgroups: verdicts,
        c1,
        c2,
        c3,
        first_obstruction,
        fundamental_class,
        convention: CONVENTION,
    })
}

fn search_family(levels: &[Level], top: usize, n: usize) -> Result<(C3Report, Option<TateClass>)> {
    let t = &levels[top];
    let gen = t.groups.group(2).ngens();
    let res: Vec<IntMatrix> = levels
        .iter()
        .map(|l| t.coh.restriction_map(&t.groups, &l.coh, &l.groups, 2))
        .collect::<Result<_>>()?;
    let base: Vec<BigInt> = (0..gen).map(|_| BigInt::one()).collect();
    let ks: Vec<u64> = (1..=n as u64).filter(|k| k.gcd(&(n as u64)) == 1).collect();
    let mut witnesses = Vec::new();
    for &k in &ks {
        let u: Vec<BigInt> = base.iter().map(|x| x * k).collect();
        let ok = levels.iter().zip(&res).all(|(l, r)| {
            let c = TateClass::new(l.groups.group(2), 2, &r.mul_vec(&u));
            c.order == Some(BigInt::from(l.sub.order()))
        });
        if ok {
            witnesses.push(k);
        }
    }
    let Some(&k) = witnesses.first() else {
        let report = C3Report {
            verdict: Verdict::Fail,
            k: None,
            candidates: ks.len(),
            witnesses: 0,
            family: vec![],
            pairs: vec![],
            formulations_agree: true,
        };
        return Ok((report, None));
    };
    let u: Vec<BigInt> = base.iter().map(|x| x * k).collect();
    let family: Vec<Vec<BigInt>> = levels
        .iter()
        .zip(&res)
        .map(|(l, r)| l.groups.group(2).reduce(&r.mul_vec(&u)))
        .collect();
    let mut pairs = Vec::new();
    for (i, up) in levels.iter().enumerate() {
        for (j, low) in levels.iter().enumerate() {
            if i == j || !low.sub.is_subgroup_of(&up.sub) {
                continue;
            }
            let cu = up.groups.class(2, &family[i]);
            let r = restriction(&up.coh, &up.groups, &low.coh, &low.groups, &cu)?;
            pairs.push(PairVerdict { upper: i, lower: j, compatible: r.coords == family[j] });
        }
    }
    let all = pairs.iter().all(|p| p.compatible);
    let report = C3Report {
        verdict: Verdict::of(all),
        k: Some(k),
        candidates: ks.len(),
        witnesses: witnesses.len(),
        family,
        pairs,
        formulations_agree: all,
    };
    let class = TateClass::new(t.groups.group(2), 2, &u);
    Ok((report, Some(class)))
}

/// The fundamental class `u_G` of a passing report.
pub fn fundamental_class(report: &FormationReport) -> Result<TateClass> {
    match (&report.first_obstruction, &report.fundamental_class) {
        (None, Some(u)) => Ok(u.clone()),
        (Some(o), _) => Err(Error::InvalidArgument(format!("formation fails at ({}); no fundamental class", o.axiom))),
        (None, None) => Err(Error::Internal("passing report without a fundamental class".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reciprocity {
    /// `Ĥ^0(G, C)`.
    pub source: AbGroup,
    /// `G^ab`.
    pub target: AbGroup,
    /// `ρ: Ĥ^0(G, C) → G^ab` on canonical generators.
    pub matrix: IntMatrix,
    pub injective: bool,
    pub surjective: bool,
    pub isomorphism: bool,
    pub density: &'static str,
}

/// `ρ = (∪u ∘ θ)^{-1}` where `θ: G^ab ≅ Ĥ^{-2}(G, Z)`.
pub fn reciprocity_map(coh: &Cohomology, u: &TateClass) -> Result<Reciprocity> {
    ensure_whole(coh)?;
    let groups = coh.groups((0, 2))?;
    let integral = coh.integral();
    let zg = integral.groups((-2, -2))?;
    let theta = integral.theta(&zg)?;
    let cup = cup_with(coh, &groups, u, 0)?;
    let forward = reduce_map(&(&cup.matrix * &theta.matrix), &cup.target);
    let ab = theta.source.clone();
    let h0 = cup.target.clone();
    let matrix = invert_iso(&forward, &ab, &h0)
        .ok_or_else(|| Error::Internal("cup product with the fundamental class is not invertible".into()))?;
    let matrix = reduce_map(&matrix, &ab);
    Ok(Reciprocity {
        injective: is_injective(&matrix, &h0, &ab),
        surjective: is_surjective(&matrix, &h0, &ab),
        isomorphism: crate::linalg::is_isomorphism(&matrix, &h0, &ab),
        source: h0,
        target: ab,
        matrix,
        density: DENSITY,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormRow {
    pub subgroup: Vec<usize>,
    pub order: usize,
    /// `Ĥ^0(G, C) / cor Ĥ^0(V, C)`.
    pub quotient: Vec<BigInt>,
    /// `(G/V)^ab`.
    pub target: Vec<BigInt>,
    pub well_defined: bool,
    pub surjective: bool,
    pub isomorphism: bool,
}

/// For each normal `V`: `Ĥ^0(G, C)/cor Ĥ^0(V, C)` against `(G/V)^ab` through
/// the reciprocity map.
pub fn norm_group_table(coh: &Cohomology, u: &TateClass, max_order: usize) -> Result<Vec<NormRow>> {
    let rho = reciprocity_map(coh, u)?;
    let g = coh.parent().clone();
    let tg = coh.groups((0, 0))?;
    let h0 = tg.group(0);
    let mut rows = Vec::new();
    for v in g.all_subgroups(max_order)?.into_iter().filter(|v| v.is_normal) {
        let cv = coh.subgroup(&v)?;
        let tv = cv.groups((0, 0))?;
        let cor = cv.corestriction_map(&tv, coh, &tg, 0)?;
        let mut rel = h0.relators().columns();
        rel.extend(cor.columns());
        let quotient = cokernel_of_columns(h0.ngens(), &rel);
        // (G/V)^ab and the projection from G^ab
        let (q, proj) = g.quotient(&v)?;
        let (qab, qcoords) = q.abelianization();
        let lift = &rho.target.basis_lift;
        let mut pcols = Vec::with_capacity(lift.cols());
        for j in 0..lift.cols() {
            let mut acc = vec![BigInt::zero(); qab.ngens()];
            for (x, c) in lift.column(j).iter().enumerate() {
                if !c.is_zero() {
                    for (a, b) in acc.iter_mut().zip(&qcoords[proj[x]]) {
                        *a += c * b;
                    }
                }
            }
            pcols.push(qab.reduce(&acc));
        }
        let pi = IntMatrix::from_columns(qab.ngens(), &pcols);
        let psi = reduce_map(&(&pi * &rho.matrix), &qab);
        let well_defined = reduce_map(&(&psi * &cor), &qab).is_zero();
        let surjective = is_surjective(&psi, h0, &qab);
        let orders = quotient.order().is_some() && quotient.order() == qab.order();
        rows.push(NormRow {
            subgroup: v.elements.clone(),
            order: v.order(),
            quotient: quotient.invariants(),
            target: qab.invariants(),
            well_defined,
            surjective,
            isomorphism: well_defined && surjective && orders,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::gcomplexes::{concentrate, tensor_power_shifted};
    use crate::gmodules::{finite_field_units, trivial_cyclic};
    use crate::groups::{direct_product, make_cyclic, symmetric_group, FiniteGroup, DEFAULT_MAX_ORDER};
    use crate::resolutions::{build_complete_resolution, Engine, DEFAULT_BAR_CAP};

    fn integral(g: &Arc<FiniteGroup>) -> Cohomology {
        let c = concentrate(&trivial_cyclic(g, 0), 0);
        let x = build_complete_resolution(g, formation_window(Some((0, 0))), Engine::Auto.resolve(g), DEFAULT_BAR_CAP).unwrap();
        Cohomology::new(&x, &c).unwrap()
    }

    #[test]
    fn cyclic_groups_pass() {
        for n in [1usize, 2, 3, 4, 6] {
            let g = Arc::new(make_cyclic(n));
            let coh = integral(&g);
            let r = check_class_formation(&coh, DEFAULT_MAX_ORDER).unwrap();
            assert!(r.passes(), "n={n}: {:?}", r.first_obstruction);
            let u = fundamental_class(&r).unwrap();
            assert_eq!(u.order, Some(BigInt::from(n)));
            let rho = reciprocity_map(&coh, &u).unwrap();
            assert!(rho.isomorphism);
        }
    }

    #[test]
    fn failures_name_the_axiom() {
        let k4 = Arc::new(direct_product(&make_cyclic(2), &make_cyclic(2)));
        let r = check_class_formation(&integral(&k4), DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(r.first_obstruction.unwrap().axiom, "C2");
        let s3 = Arc::new(symmetric_group(3));
        let r = check_class_formation(&integral(&s3), DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(r.first_obstruction.unwrap().axiom, "C2");
        assert_eq!(r.c3.verdict, Verdict::Skipped);
    }

    #[test]
    fn hilbert_90_shift_fails_c2() {
        let m = finite_field_units(2, 1, 2, 1 << 20).unwrap();
        let g = m.group().clone();
        let c = tensor_power_shifted(&m, 1, 4096).unwrap();
        let x = build_complete_resolution(&g, formation_window(Some((1, 1))), Engine::Periodic, DEFAULT_BAR_CAP).unwrap();
        let coh = Cohomology::new(&x, &c).unwrap();
        let r = check_class_formation(&coh, DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(r.c1, Verdict::Pass);
        assert_eq!(r.first_obstruction.unwrap().axiom, "C2");
    }

    #[test]
    fn z4_norm_table() {
        let g = Arc::new(make_cyclic(4));
        let coh = integral(&g);
        let r = check_class_formation(&coh, DEFAULT_MAX_ORDER).unwrap();
        let u = fundamental_class(&r).unwrap();
        let rows = norm_group_table(&coh, &u, DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(rows.len(), 3);
        for row in &rows {
            assert!(row.isomorphism, "{row:?}");
            assert_eq!(row.quotient, row.target);
        }
        let orders: Vec<Vec<BigInt>> = rows.iter().map(|r| r.quotient.clone()).collect();
        assert_eq!(orders, vec![vec![BigInt::from(4)], vec![BigInt::from(2)], vec![]]);
    }
}
