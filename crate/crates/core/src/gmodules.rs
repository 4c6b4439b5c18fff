//! Finitely generated modules over the integral group ring.
//!
//! A module is `Z^gens / span(relators)` together with one integer matrix
//! per group element acting on generator coordinates (column convention:
//! `g·x = action[g] · x`).

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groups::{make_cyclic, FiniteGroup, Subgroup};
use crate::linalg::lattice::kernel_lattice;
use crate::linalg::{cokernel_structure, homology_presented, image_structure, AbGroup, IntMatrix, Piece};

pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    group: Arc<FiniteGroup>,
    gens: usize,
    relators: IntMatrix,
    action: Vec<IntMatrix>,
}

/// A module with diagonal relators `diag(t_1, …, t_k)` on its first `k`
/// generators (each `t_i ≥ 2`, divisibility chain) and free remaining
/// generators, plus the coordinate change to and from the original
/// presentation.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub module: GModule,
    /// `gens' × gens`: original coordinates to normal coordinates.
    pub to_normal: IntMatrix,
    /// `gens × gens'`: lifts of the normal generators.
    pub from_normal: IntMatrix,
}

impl GModule {
    /// Validated constructor.
    pub fn new(group: Arc<FiniteGroup>, gens: usize, relators: IntMatrix, action: Vec<IntMatrix>) -> Result<GModule> {
        let m = GModule { group, gens, relators, action };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(group: Arc<FiniteGroup>, gens: usize, relators: IntMatrix, action: Vec<IntMatrix>) -> GModule {
        let m = GModule { group, gens, relators, action };
        debug_assert!(m.validate().is_ok(), "{:?}", m.validate());
        m
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relators(&self) -> &IntMatrix {
        &self.relators
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.action
    }

    /// The underlying abelian group with coordinates on the generators.
    pub fn abelian_group(&self) -> AbGroup {
        cokernel_structure(&self.relators)
    }

    pub fn order(&self) -> Option<BigInt> {
        self.abelian_group().order()
    }

    pub fn is_zero_module(&self) -> bool {
        self.abelian_group().is_trivial()
    }

    fn validate(&self) -> Result<()> {
        let n = self.group.order();
        if self.relators.rows() != self.gens {
            return Err(Error::InvalidModule(format!(
                "relator matrix has {} rows for {} generators",
                self.relators.rows(),
                self.gens
            )));
        }
        if self.action.len() != n {
            return Err(Error::InvalidModule(format!("{} action matrices for a group of order {n}", self.action.len())));
        }
        for (g, a) in self.action.iter().enumerate() {
            if a.rows() != self.gens || a.cols() != self.gens {
                return Err(Error::InvalidModule(format!("action matrix of element {g} is not {0}x{0}", self.gens)));
            }
        }
        let q = self.abelian_group();
        let zero_mod = |m: &IntMatrix| m.columns().iter().all(|c| q.is_zero_element(&q.express(c)));
        for (g, a) in self.action.iter().enumerate() {
            if !zero_mod(&(a * &self.relators)) {
                return Err(Error::InvalidModule(format!("action of element {g} does not preserve the relators")));
            }
        }
        let id = IntMatrix::identity(self.gens);
        if !zero_mod(&(&self.action[self.group.identity()] - &id)) {
            return Err(Error::InvalidModule("identity does not act trivially".into()));
        }
        for g in 0..n {
            for h in 0..n {
                let lhs = &self.action[g] * &self.action[h];
                if !zero_mod(&(&lhs - &self.action[self.group.mul(g, h)])) {
                    return Err(Error::InvalidModule(format!("action is not multiplicative at ({g},{h})")));
                }
            }
        }
        Ok(())
    }

    pub fn is_normalized(&self) -> bool {
        let k = self.relators.cols();
        if k > self.gens {
            return false;
        }
        for i in 0..self.gens {
            for j in 0..k {
                let x = self.relators.get(i, j);
                if i == j {
                    if *x < BigInt::from(2) {
                        return false;
                    }
                } else if !x.is_zero() {
                    return false;
                }
            }
        }
        (1..k).all(|i| (self.relators.get(i, i) % self.relators.get(i - 1, i - 1)).is_zero())
    }

    /// Moduli of the normal coordinates: `t_i` for torsion generators, `0`
    /// for free ones. Only meaningful on normalized modules.
    pub fn moduli(&self) -> Vec<BigInt> {
        debug_assert!(self.is_normalized());
        (0..self.gens)
            .map(|i| if i < self.relators.cols() { self.relators.get(i, i).clone() } else { BigInt::zero() })
            .collect()
    }

    /// Reduces coordinates of a normalized module.
    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        let m = self.moduli();
        x.iter().zip(&m).map(|(v, t)| if t.is_zero() { v.clone() } else { v.mod_floor(t) }).collect()
    }

    /// Diagonalizes the relators by SNF, dropping generators killed by unit
    /// invariant factors.
    pub fn normalize(&self) -> Normalized {
        if self.is_normalized() {
            return Normalized {
                module: self.clone(),
                to_normal: IntMatrix::identity(self.gens),
                from_normal: IntMatrix::identity(self.gens),
            };
        }
        let q = self.abelian_group();
        let p = q.coords.clone().expect("cokernel coordinates");
        let l = q.basis_lift.clone();
        let k = q.ngens();
        let mut relators = IntMatrix::zeros(k, q.torsion.len());
        for (i, t) in q.torsion.iter().enumerate() {
            relators.set(i, i, t.clone());
        }
        let moduli: Vec<BigInt> = (0..k).map(|i| q.torsion.get(i).cloned().unwrap_or_default()).collect();
        let action = self
            .action
            .iter()
            .map(|a| {
                let mut b = &(&p * a) * &l;
                for i in 0..k {
                    if !moduli[i].is_zero() {
                        for j in 0..k {
                            let v = b.get(i, j).mod_floor(&moduli[i]);
                            b.set(i, j, v);
                        }
                    }
                }
                b
            })
            .collect();
        Normalized {
            module: GModule::new_unchecked(self.group.clone(), k, relators, action),
            to_normal: p,
            from_normal: l,
        }
    }

    pub fn norm_endomorphism(&self) -> IntMatrix {
        let mut n = IntMatrix::zeros(self.gens, self.gens);
        for a in &self.action {
            n = &n + a;
        }
        n
    }

    /// Fixed points as a subgroup of the module; `basis_lift` is in the
    /// module's generator coordinates.
    pub fn fixed_points(&self) -> AbGroup {
        let nz = self.normalize();
        let m = &nz.module;
        let moduli = m.moduli();
        let id = IntMatrix::identity(m.gens);
        let mut rows = Vec::new();
        let mut row_moduli = Vec::new();
        for a in &m.action {
            let d = a - &id;
            for (i, r) in d.sparse_rows().into_iter().enumerate() {
                rows.push(r);
                row_moduli.push(moduli[i].clone());
            }
        }
        let k = kernel_lattice(m.gens, &rows, &row_moduli);
        let km = IntMatrix::from_columns(m.gens, &k.cols);
        let ab = AbGroup::from_invariants(
            &moduli.iter().filter(|t| !t.is_zero()).cloned().collect::<Vec<_>>(),
            moduli.iter().filter(|t| t.is_zero()).count(),
        );
        let img = image_structure(&km, &ab);
        let lift = &nz.from_normal * &(&km * &img.basis_lift);
        AbGroup { basis_lift: lift, coords: None, ..img }
    }

    /// `Ĥ^0`-style quotient: fixed points modulo the image of the norm.
    pub fn fixed_mod_norm(&self) -> AbGroup {
        let nz = self.normalize();
        let m = &nz.module;
        let fixed = m.fixed_points();
        let ab = AbGroup::from_invariants(
            &m.moduli().iter().filter(|t| !t.is_zero()).cloned().collect::<Vec<_>>(),
            m.moduli().iter().filter(|t| t.is_zero()).count(),
        );
        let norm = m.norm_endomorphism();
        // express fixed generators and norm images in fixed-point coordinates
        let mut gens = fixed.basis_lift.columns();
        let ngf = gens.len();
        gens.extend(norm.columns());
        let all = IntMatrix::from_columns(m.gens, &gens);
        let span = image_structure(&all, &ab);
        // span is generated by columns of `all`; quotient by the norm columns
        let mut rel_cols = Vec::new();
        let coords = span.coords.as_ref().expect("cokernel coordinates");
        for j in ngf..gens.len() {
            let mut e = vec![BigInt::zero(); gens.len()];
            e[j] = BigInt::one();
            rel_cols.push(coords.mul_vec(&e));
        }
        let mut rel = span.relators().columns();
        rel.extend(rel_cols);
        let quotient = crate::linalg::cokernel_of_columns(span.ngens(), &rel);
        let lift = &all * &(&span.basis_lift * &quotient.basis_lift);
        let lift = &nz.from_normal * &lift;
        AbGroup { basis_lift: lift, coords: None, ..quotient }
    }

    /// `Ĥ^{-1}`-style quotient: kernel of the norm modulo the augmentation
    /// submodule `I_G M`.
    pub fn norm_kernel_mod_augmentation(&self) -> AbGroup {
        let nz = self.normalize();
        let m = &nz.module;
        let moduli = m.moduli();
        let id = IntMatrix::identity(m.gens);
        let mut d_in = Vec::new();
        for a in &m.action {
            d_in.extend((a - &id).sparse_columns());
        }
        let rows = m.norm_endomorphism().sparse_rows();
        let relators: Vec<Vec<(usize, BigInt)>> = moduli
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.is_zero())
            .map(|(i, t)| vec![(i, t.clone())])
            .collect();
        let h = homology_presented(&Piece {
            dim: m.gens,
            d_in: &d_in,
            d_out_rows: &rows,
            out_moduli: &moduli,
            mid_relators: &relators,
        })
        .expect("the norm kills the augmentation submodule");
        let g = h.group;
        AbGroup { basis_lift: &nz.from_normal * &g.basis_lift, coords: None, ..g }
    }
}

pub fn zero_module(group: &Arc<FiniteGroup>) -> GModule {
    let n = group.order();
    GModule::new_unchecked(group.clone(), 0, IntMatrix::zeros(0, 0), vec![IntMatrix::zeros(0, 0); n])
}

/// `A` with trivial action, presented on its canonical generators.
pub fn trivial_module(group: &Arc<FiniteGroup>, a: &AbGroup) -> GModule {
    let k = a.ngens();
    let n = group.order();
    GModule::new_unchecked(group.clone(), k, a.relators(), vec![IntMatrix::identity(k); n])
}

/// Trivial `Z` (for `n = 0`) or `Z/n`.
pub fn trivial_cyclic(group: &Arc<FiniteGroup>, n: u64) -> GModule {
    trivial_module(group, &AbGroup::cyclic(n))
}

pub fn regular_module(group: &Arc<FiniteGroup>) -> GModule {
    let n = group.order();
    let action = (0..n)
        .map(|g| {
            let mut p = IntMatrix::zeros(n, n);
            for h in 0..n {
                p.set(group.mul(g, h), h, BigInt::one());
            }
            p
        })
        .collect();
    GModule::new_unchecked(group.clone(), n, IntMatrix::zeros(n, 0), action)
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// `F_{p^{fn}}^*` as a module over `Gal(F_{p^{fn}}/F_{p^f}) ≅ Z/n`, the
/// generator acting by the Frobenius `x ↦ x^{p^f}`.
pub fn finite_field_units(p: u64, f: u32, n: u32, cap: u64) -> Result<GModule> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if f == 0 || n == 0 {
        return Err(Error::InvalidArgument("field degrees must be positive".into()));
    }
    let size = (p as u128).checked_pow(f * n).filter(|&s| s <= cap as u128).ok_or(Error::CapExceeded {
        what: format!("field size {p}^{}", f * n),
        value: (p as u128).checked_pow(f * n).unwrap_or(u128::MAX),
        cap: cap as u128,
    })?;
    let modulus = BigInt::from(size - 1);
    let q = BigInt::from(p).pow(f);
    let group = Arc::new(make_cyclic(n as usize));
    let action = (0..n)
        .map(|k| IntMatrix::from_entries(1, 1, vec![q.modpow(&BigInt::from(k), &modulus)]))
        .collect();
    GModule::new(group, 1, IntMatrix::from_entries(1, 1, vec![modulus]), action)
}

/// `M ⊗_Z N` with diagonal action, normalized.
pub fn tensor(m: &GModule, n: &GModule) -> Result<GModule> {
    if m.group != n.group && *m.group != *n.group {
        return Err(Error::GroupMismatch("tensor factors over different groups".into()));
    }
    let a = m.normalize().module;
    let b = n.normalize().module;
    let (p, q) = (a.gens, b.gens);
    let rel = a.relators.kronecker(&IntMatrix::identity(q)).hstack(&IntMatrix::identity(p).kronecker(&b.relators));
    let action = a.action.iter().zip(&b.action).map(|(x, y)| x.kronecker(y)).collect();
    let t = GModule::new_unchecked(m.group.clone(), p * q, rel, action);
    Ok(t.normalize().module)
}

/// `Hom(M, Z)` with the contragredient action. Torsion modules are rejected.
pub fn dual_module(m: &GModule) -> Result<GModule> {
    let nz = m.normalize().module;
    if nz.relators.cols() > 0 {
        return Err(Error::InvalidModule("dual of a module with torsion".into()));
    }
    let g = &m.group;
    let action = (0..g.order()).map(|x| nz.action[g.inv(x)].transpose()).collect();
    Ok(GModule::new_unchecked(g.clone(), nz.gens, IntMatrix::zeros(nz.gens, 0), action))
}

/// The same presentation viewed over `H`, reindexed to `H`'s own table.
pub fn restrict_module(m: &GModule, h: &Subgroup) -> GModule {
    let sub = Arc::new(m.group.subgroup_as_group(h));
    let action = h.elements.iter().map(|&g| m.action[g].clone()).collect();
    GModule::new_unchecked(sub, m.gens, m.relators.clone(), action)
}

pub fn fixed_points(m: &GModule) -> AbGroup {
    m.fixed_points()
}

pub fn norm_endomorphism(m: &GModule) -> IntMatrix {
    m.norm_endomorphism()
}

/// Direct sum of two modules over the same group.
pub fn direct_sum(m: &GModule, n: &GModule) -> GModule {
    let action = m.action.iter().zip(&n.action).map(|(a, b)| a.direct_sum(b)).collect();
    GModule::new_unchecked(m.group.clone(), m.gens + n.gens, m.relators.direct_sum(&n.relators), action)
}
