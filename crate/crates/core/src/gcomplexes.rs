//! Bounded cochain complexes of G-modules.
//!
//! Shift convention: `(C[n])^q = C^{n+q}` with differential `(-1)^n d`.
//! Cone of `×m`: `cone^q = C^{q+1} ⊕ C^q` with differential
//! `[[-d, 0], [m, d]]`, inclusion `y ↦ (0, y)`, projection `(x, y) ↦ x`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::gmodules::{restrict_module, tensor, trivial_cyclic, zero_module, GModule};
use crate::groups::{FiniteGroup, Subgroup};
use crate::linalg::IntMatrix;

pub const DEFAULT_TENSOR_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GComplex {
    group: Arc<FiniteGroup>,
    lo: i64,
    terms: Vec<GModule>,
    /// `diffs[i]` is `d^{lo+i}: C^{lo+i} → C^{lo+i+1}`.
    diffs: Vec<IntMatrix>,
}

/// The mapping cone of `×m` with the triangle maps
/// `C --m--> C --ι--> cone --π--> C[1]`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub complex: GComplex,
    pub m: u64,
    /// `inclusion(q)`: `C^q → cone^q`.
    inclusion: Vec<(i64, IntMatrix)>,
    /// `projection(q)`: `cone^q → C^{q+1}`.
    projection: Vec<(i64, IntMatrix)>,
}

impl Cone {
    pub fn inclusion(&self, q: i64) -> Option<&IntMatrix> {
        self.inclusion.iter().find(|(d, _)| *d == q).map(|(_, m)| m)
    }

    pub fn projection(&self, q: i64) -> Option<&IntMatrix> {
        self.projection.iter().find(|(d, _)| *d == q).map(|(_, m)| m)
    }
}

fn zero_mod(m: &IntMatrix, target: &GModule) -> bool {
    let q = target.abelian_group();
    m.columns().iter().all(|c| q.is_zero_element(&q.express(c)))
}

impl GComplex {
    /// Validated constructor: `terms[i]` sits in degree `lo + i`.
    pub fn new(group: Arc<FiniteGroup>, lo: i64, terms: Vec<GModule>, diffs: Vec<IntMatrix>) -> Result<GComplex> {
        let c = GComplex { group, lo, terms, diffs };
        c.validate()?;
        Ok(c)
    }

    fn new_unchecked(group: Arc<FiniteGroup>, lo: i64, terms: Vec<GModule>, diffs: Vec<IntMatrix>) -> GComplex {
        let c = GComplex { group, lo, terms, diffs };
        debug_assert!(c.validate().is_ok(), "{:?}", c.validate());
        c
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::InvalidComplex("a complex needs at least one term".into()));
        }
        if self.diffs.len() + 1 != self.terms.len() {
            return Err(Error::InvalidComplex(format!(
                "{} terms need {} differentials, got {}",
                self.terms.len(),
                self.terms.len() - 1,
                self.diffs.len()
            )));
        }
        for (i, t) in self.terms.iter().enumerate() {
            if *t.group() != self.group && **t.group() != *self.group {
                return Err(Error::GroupMismatch(format!("term in degree {} lives over another group", self.lo + i as i64)));
            }
        }
        for (i, d) in self.diffs.iter().enumerate() {
            let q = self.lo + i as i64;
            let (src, dst) = (&self.terms[i], &self.terms[i + 1]);
            if d.rows() != dst.gens() || d.cols() != src.gens() {
                return Err(Error::InvalidComplex(format!("d^{q} has shape {}x{}", d.rows(), d.cols())));
            }
            if !zero_mod(&(d * src.relators()), dst) {
                return Err(Error::InvalidComplex(format!("d^{q} does not respect relators")));
            }
            for g in self.group.elements() {
                let lhs = d * src.action(g);
                let rhs = dst.action(g) * d;
                if !zero_mod(&(&lhs - &rhs), dst) {
                    return Err(Error::InvalidComplex(format!("d^{q} is not equivariant at element {g}")));
                }
            }
            if i + 1 < self.diffs.len() && !zero_mod(&(&self.diffs[i + 1] * d), &self.terms[i + 2]) {
                return Err(Error::InvalidComplex(format!("d^{} ∘ d^{q} is nonzero", q + 1)));
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn support(&self) -> (i64, i64) {
        (self.lo(), self.hi())
    }

    /// Term in degree `q` (the zero module outside the support).
    pub fn term(&self, q: i64) -> GModule {
        if q < self.lo || q > self.hi() {
            return zero_module(&self.group);
        }
        self.terms[(q - self.lo) as usize].clone()
    }

    pub fn term_ref(&self, q: i64) -> Option<&GModule> {
        if q < self.lo || q > self.hi() {
            return None;
        }
        Some(&self.terms[(q - self.lo) as usize])
    }

    /// `d^q`, zero-shaped outside the support.
    pub fn differential(&self, q: i64) -> IntMatrix {
        if q >= self.lo && q < self.hi() {
            return self.diffs[(q - self.lo) as usize].clone();
        }
        IntMatrix::zeros(self.term(q + 1).gens(), self.term(q).gens())
    }

    /// Degrees whose terms are nonzero, trimmed support.
    pub fn effective_support(&self) -> Option<(i64, i64)> {
        let nz: Vec<i64> = (self.lo..=self.hi()).filter(|&q| !self.term(q).is_zero_module()).collect();
        Some((*nz.first()?, *nz.last()?))
    }

    /// Normalizes every term; differentials are conjugated accordingly.
    pub fn normalize(&self) -> GComplex {
        let nz: Vec<_> = self.terms.iter().map(GModule::normalize).collect();
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let m = &(&nz[i + 1].to_normal * d) * &nz[i].from_normal;
                let target = &nz[i + 1].module;
                let moduli = target.moduli();
                let mut m = m;
                for r in 0..m.rows() {
                    if moduli[r] != BigInt::from(0) {
                        for c in 0..m.cols() {
                            let v = m.get(r, c).mod_floor(&moduli[r]);
                            m.set(r, c, v);
                        }
                    }
                }
                m
            })
            .collect();
        GComplex::new_unchecked(self.group.clone(), self.lo, nz.into_iter().map(|n| n.module).collect(), diffs)
    }

    pub fn is_normalized(&self) -> bool {
        self.terms.iter().all(GModule::is_normalized)
    }

    pub fn restrict(&self, h: &Subgroup) -> GComplex {
        let terms: Vec<GModule> = self.terms.iter().map(|t| restrict_module(t, h)).collect();
        let group = terms[0].group().clone();
        let terms = terms
            .into_iter()
            .map(|t| GModule::new_unchecked(group.clone(), t.gens(), t.relators().clone(), t.actions().to_vec()))
            .collect();
        GComplex::new_unchecked(group, self.lo, terms, self.diffs.clone())
    }
}

pub fn concentrate(m: &GModule, q: i64) -> GComplex {
    GComplex::new_unchecked(m.group().clone(), q, vec![m.clone()], vec![])
}

pub fn shift(c: &GComplex, n: i64) -> GComplex {
    let diffs = if n % 2 == 0 { c.diffs.clone() } else { c.diffs.iter().map(|d| -d).collect() };
    GComplex::new_unchecked(c.group.clone(), c.lo - n, c.terms.clone(), diffs)
}

pub fn cone_of_mult(c: &GComplex, m: u64) -> Result<Cone> {
    if m == 0 {
        return Err(Error::InvalidArgument("cone of multiplication needs m >= 1".into()));
    }
    let mb = BigInt::from(m);
    let (lo, hi) = (c.lo - 1, c.hi());
    let mut terms = Vec::new();
    let mut inclusion = Vec::new();
    let mut projection = Vec::new();
    for q in lo..=hi {
        let (x, y) = (c.term(q + 1), c.term(q));
        let t = crate::gmodules::direct_sum(&x, &y);
        let (a, b) = (x.gens(), y.gens());
        let mut inc = IntMatrix::zeros(a + b, b);
        inc.paste(a, 0, &IntMatrix::identity(b));
        let mut proj = IntMatrix::zeros(a, a + b);
        proj.paste(0, 0, &IntMatrix::identity(a));
        inclusion.push((q, inc));
        projection.push((q, proj));
        terms.push(t);
    }
    let mut diffs = Vec::new();
    for q in lo..hi {
        // (x, y) ∈ C^{q+1} ⊕ C^q  ↦  (-d x, m x + d y) ∈ C^{q+2} ⊕ C^{q+1}
        let (a, b) = (c.term(q + 1).gens(), c.term(q).gens());
        let a2 = c.term(q + 2).gens();
        let mut d = IntMatrix::zeros(a2 + a, a + b);
        d.paste(0, 0, &-&c.differential(q + 1));
        d.paste(a2, 0, &IntMatrix::scalar(a, mb.clone()));
        d.paste(a2, a, &c.differential(q));
        diffs.push(d);
    }
    let complex = GComplex::new_unchecked(c.group.clone(), lo, terms, diffs);
    Ok(Cone { complex, m, inclusion, projection })
}

/// `M^{⊗n}` in degree `n`; `n = 0` gives trivial `Z` in degree 0.
pub fn tensor_power_shifted(m: &GModule, n: u32, cap: usize) -> Result<GComplex> {
    let g = m.group();
    if n == 0 {
        return Ok(concentrate(&trivial_cyclic(g, 0), 0));
    }
    let base = m.normalize().module;
    let size = (base.gens() as u128).checked_pow(n).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::CapExceeded { what: "tensor power generator count".into(), value: size, cap: cap as u128 });
    }
    let mut t = base.clone();
    for _ in 1..n {
        t = tensor(&t, &base)?;
    }
    Ok(concentrate(&t, n as i64))
}
