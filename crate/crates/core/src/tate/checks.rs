//! Verification reports: the Tate–Nakayama criterion, the long exact
//! sequence of the cone of `×m`, and agreement with classical Tate groups.

use num_bigint::BigInt;

use super::{cup_window, cup_with, window_for, Cohomology, TateClass};
use crate::error::{Error, Result};
use crate::gcomplexes::{concentrate, cone_of_mult};
use crate::gmodules::GModule;
use crate::linalg::{image_order, is_injective, is_isomorphism, is_surjective, reduce_map, IntMatrix};
use crate::resolutions::CompleteResolution;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupHypotheses {
    pub elements: Vec<usize>,
    pub order: usize,
    pub h1: Vec<BigInt>,
    pub h2: Vec<BigInt>,
    /// Order of the restricted class in `Ĥ^2(H)`.
    pub restricted_order: Option<BigInt>,
    pub condition_i: bool,
    pub condition_ii: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CupDegree {
    pub q: i64,
    pub source: Vec<BigInt>,
    pub target: Vec<BigInt>,
    pub injective: bool,
    pub surjective: bool,
    pub isomorphism: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NakayamaReport {
    pub subgroups: Vec<SubgroupHypotheses>,
    pub hypothesis_i: bool,
    pub hypothesis_ii: bool,
    /// `"(i)"` or `"(ii)"` with the first failing subgroup, in subgroup order.
    pub first_failure: Option<(String, Vec<usize>)>,
    pub degrees: Vec<CupDegree>,
    pub conclusion: bool,
}

/// Window needed by [`tate_nakayama_check`] for coefficients supported on
/// `support` and cup degrees `range`.
pub fn nakayama_window(support: Option<(i64, i64)>, range: (i64, i64)) -> usize {
    let Some(sup) = support else { return 1 };
    let mut lo = sup.0 - 3;
    let mut hi = sup.1;
    for q in range.0..=range.1 {
        let (a, b) = cup_window(sup, 2, q);
        lo = lo.min(a);
        hi = hi.max(b);
    }
    window_for((lo, hi))
}

/// Checks (i) `Ĥ^1(H, C) = 0` and (ii) `res(a)` generates `Ĥ^2(H, C)` with
/// order `|H|` for every subgroup, then whether `∪a` is bijective in each
/// degree of `range`.
pub fn tate_nakayama_check(coh: &Cohomology, a: &TateClass, range: (i64, i64), max_order: usize) -> Result<NakayamaReport> {
    if !coh.is_whole() {
        return Err(Error::InvalidArgument("the criterion is stated over the whole group".into()));
    }
    if a.degree != 2 {
        return Err(Error::InvalidArgument(format!("the class must have degree 2, not {}", a.degree)));
    }
    let g = coh.parent().clone();
    let groups = coh.groups((range.0.min(1), range.1.max(2)))?;
    let mut subgroups = Vec::new();
    let mut first_failure = None;
    for h in g.all_subgroups(max_order)? {
        let ch = coh.subgroup(&h)?;
        let th = ch.groups((1, 2))?;
        let r = super::restriction(coh, &groups, &ch, &th, a)?;
        let order = BigInt::from(h.order());
        let condition_i = th.group(1).is_trivial();
        let condition_ii = th.group(2).is_cyclic_of_order(&order) && r.order.as_ref() == Some(&order);
        if first_failure.is_none() {
            if !condition_i {
                first_failure = Some(("(i)".to_string(), h.elements.clone()));
            } else if !condition_ii {
                first_failure = Some(("(ii)".to_string(), h.elements.clone()));
            }
        }
        subgroups.push(SubgroupHypotheses {
            elements: h.elements.clone(),
            order: h.order(),
            h1: th.invariants(1),
            h2: th.invariants(2),
            restricted_order: r.order,
            condition_i,
            condition_ii,
        });
    }
    let mut degrees = Vec::new();
    for q in range.0..=range.1 {
        let m = cup_with(coh, &groups, a, q)?;
        let injective = is_injective(&m.matrix, &m.source, &m.target);
        let surjective = is_surjective(&m.matrix, &m.source, &m.target);
        degrees.push(CupDegree {
            q,
            source: m.source.invariants(),
            target: m.target.invariants(),
            injective,
            surjective,
            isomorphism: is_isomorphism(&m.matrix, &m.source, &m.target),
        });
    }
    let hypothesis_i = subgroups.iter().all(|s| s.condition_i);
    let hypothesis_ii = subgroups.iter().all(|s| s.condition_ii);
    let conclusion = degrees.iter().all(|d| d.isomorphism);
    Ok(NakayamaReport { subgroups, hypothesis_i, hypothesis_ii, first_failure, degrees, conclusion })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDegree {
    pub i: i64,
    pub cone: Vec<BigInt>,
    pub cone_order: Option<BigInt>,
    /// `|Ĥ^i(C)/m|`.
    pub quotient_order: Option<BigInt>,
    /// `|_m Ĥ^{i+1}(C)|`.
    pub torsion_order: Option<BigInt>,
    pub orders_match: bool,
    pub composite_zero: bool,
    pub inclusion_image_matches: bool,
    pub projection_image_matches: bool,
}

impl ConeDegree {
    pub fn passes(&self) -> bool {
        self.orders_match && self.composite_zero && self.inclusion_image_matches && self.projection_image_matches
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeReport {
    pub m: u64,
    pub degrees: Vec<ConeDegree>,
}

impl ConeReport {
    pub fn all_pass(&self) -> bool {
        self.degrees.iter().all(ConeDegree::passes)
    }
}

/// Window needed by [`cone_les_check`].
pub fn cone_window(support: Option<(i64, i64)>, range: (i64, i64)) -> usize {
    let Some((lo, hi)) = support else { return 1 };
    window_for((lo - 1 - range.1 - 1, hi - range.0 + 1))
}

/// Verifies `0 → Ĥ^i(C)/m → Ĥ^i(cone) → _m Ĥ^{i+1}(C) → 0` for `i` in `range`.
pub fn cone_les_check(coh: &Cohomology, m: u64, range: (i64, i64)) -> Result<ConeReport> {
    if !coh.is_whole() {
        return Err(Error::InvalidArgument("cone checks run over the whole group".into()));
    }
    let c = coh.coefficients();
    let cone = cone_of_mult(c, m)?;
    let kc = coh.with_coefficients(&cone.complex)?;
    let renormalized = !cone.complex.is_normalized();
    let to_normal = |j: i64| {
        let t = cone.complex.term(j);
        if renormalized { t.normalize().to_normal } else { IntMatrix::identity(t.gens()) }
    };
    let from_normal = |j: i64| {
        let t = cone.complex.term(j);
        if renormalized { t.normalize().from_normal } else { IntMatrix::identity(t.gens()) }
    };
    let iota = |j: i64| match cone.inclusion(j) {
        Some(i) => &to_normal(j) * i,
        None => IntMatrix::zeros(kc.coefficients().term(j).gens(), c.term(j).gens()),
    };
    let pi = |j: i64| match cone.projection(j) {
        Some(p) => p * &from_normal(j),
        None => IntMatrix::zeros(c.term(j + 1).gens(), kc.coefficients().term(j).gens()),
    };
    let tc = coh.groups((range.0, range.1 + 1))?;
    let tk = kc.groups(range)?;
    let mb = BigInt::from(m);
    let mut degrees = Vec::new();
    for i in range.0..=range.1 {
        let hc = tc.group(i);
        let hc1 = tc.group(i + 1);
        let hk = tk.group(i);
        let quotient_order = hc.cokernel_of_mult_order(&mb);
        let torsion_order = hc1.killed_by(&mb);
        let cone_order = hk.order();
        let orders_match = match (&cone_order, &quotient_order, &torsion_order) {
            (Some(k), Some(a), Some(b)) => *k == a * b,
            _ => false,
        };
        let im = coh.push_map(&tc, &kc, &tk, i, 0, &iota)?;
        let pm = kc.push_map(&tk, coh, &tc, i, 1, &pi)?;
        let comp = reduce_map(&(&pm * &im), hc1);
        let composite_zero = comp.is_zero();
        let inclusion_image_matches = image_order(&im, hc, hk) == quotient_order;
        let projection_image_matches = image_order(&pm, hk, hc1) == torsion_order;
        degrees.push(ConeDegree {
            i,
            cone: hk.invariants(),
            cone_order,
            quotient_order,
            torsion_order,
            orders_match,
            composite_zero,
            inclusion_image_matches,
            projection_image_matches,
        });
    }
    Ok(ConeReport { m, degrees })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgreementReport {
    pub h0_hyper: Vec<BigInt>,
    pub h0_classical: Vec<BigInt>,
    pub hm1_hyper: Vec<BigInt>,
    pub hm1_classical: Vec<BigInt>,
    pub agree: bool,
}

/// Compares `Ĥ^0` and `Ĥ^{-1}` of `M` in degree 0 with `M^G / N M` and
/// `ker N / I_G M`.
pub fn classical_agreement(x: &CompleteResolution, m: &GModule) -> Result<AgreementReport> {
    let t = super::tate_hypercohomology(x, &concentrate(m, 0), (-1, 0))?;
    let h0_hyper = t.invariants(0);
    let hm1_hyper = t.invariants(-1);
    let h0_classical = m.fixed_mod_norm().invariants();
    let hm1_classical = m.norm_kernel_mod_augmentation().invariants();
    let agree = h0_hyper == h0_classical && hm1_hyper == hm1_classical;
    Ok(AgreementReport { h0_hyper, h0_classical, hm1_hyper, hm1_classical, agree })
}
