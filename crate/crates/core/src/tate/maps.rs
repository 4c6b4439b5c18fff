//! Restriction, corestriction, maps induced by coefficient morphisms, and
//! the identification `Ĥ^{-2}(U, Z) ≅ U^ab`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Cohomology, TateClass, TateGroups};
use crate::error::{Error, Result};
use crate::linalg::lattice::ColumnSolver;
use crate::linalg::{is_isomorphism, AbGroup, IntMatrix};

fn check_nested(big: &Cohomology, small: &Cohomology) -> Result<()> {
    let same = big.parent().table() == small.parent().table()
        && big.parent_x.window() == small.parent_x.window()
        && big.parent_x.engine() == small.parent_x.engine();
    if !same {
        return Err(Error::GroupMismatch("cohomologies come from different resolutions".into()));
    }
    if !small.sub.is_subgroup_of(&big.sub) {
        return Err(Error::NotASubgroup("target is not contained in the source subgroup".into()));
    }
    Ok(())
}

/// For each `t_V` of the small transversal: `t_V = u·t_U` with `u ∈ U`.
fn split_transversal(big: &Cohomology, small: &Cohomology) -> Vec<(usize, usize)> {
    let g = big.parent();
    small
        .reps
        .iter()
        .map(|&tv| {
            big.reps
                .iter()
                .enumerate()
                .find_map(|(i, &tu)| {
                    let u = g.mul(tv, g.inv(tu));
                    big.sub.contains(u).then_some((i, u))
                })
                .expect("right transversal covers the group")
        })
        .collect()
}

fn apply_action(a: &IntMatrix, x: &[BigInt], out: &mut [BigInt]) {
    for (i2, o) in out.iter_mut().enumerate() {
        for (i, v) in x.iter().enumerate() {
            if !v.is_zero() {
                let c = a.get(i2, i);
                if !c.is_zero() {
                    *o += c * v;
                }
            }
        }
    }
}

impl Cohomology {
    /// Restriction of a degree-`q` cochain from this subgroup `U` to `V ≤ U`.
    pub fn restrict_cochain(&self, to: &Cohomology, q: i64, phi: &[BigInt]) -> Result<Vec<BigInt>> {
        check_nested(self, to)?;
        let src = self.layout(q)?;
        let dst = to.layout(q)?;
        let split = split_transversal(self, to);
        let (ku, kv) = (self.reps.len(), to.reps.len());
        let mut out = vec![BigInt::zero(); dst.dim()];
        for (bs, bd) in src.blocks.iter().zip(&dst.blocks) {
            let term = self.parent_coefficients().term_ref(bs.j).expect("support lies in the complex");
            let n = bs.n;
            let r = bs.rank / ku;
            for b in 0..r {
                for (tv, &(tu, u)) in split.iter().enumerate() {
                    let s = bs.offset + (b * ku + tu) * n;
                    let d = bd.offset + (b * kv + tv) * n;
                    apply_action(term.action(u), &phi[s..s + n], &mut out[d..d + n]);
                }
            }
        }
        dst.reduce(&mut out);
        Ok(out)
    }

    /// Corestriction of a degree-`q` cochain from this subgroup `V` to `U ≥ V`.
    pub fn corestrict_cochain(&self, to: &Cohomology, q: i64, phi: &[BigInt]) -> Result<Vec<BigInt>> {
        check_nested(to, self)?;
        let g = self.parent();
        let src = self.layout(q)?;
        let dst = to.layout(q)?;
        // left cosets s·V of V in U
        let mut left = Vec::new();
        let mut seen = vec![false; g.order()];
        for &s in &to.sub.elements {
            if !seen[s] {
                left.push(s);
                for &v in &self.sub.elements {
                    seen[g.mul(s, v)] = true;
                }
            }
        }
        let (kv, ku) = (self.reps.len(), to.reps.len());
        let mut out = vec![BigInt::zero(); dst.dim()];
        for (bs, bd) in src.blocks.iter().zip(&dst.blocks) {
            let term = self.parent_coefficients().term_ref(bs.j).expect("support lies in the complex");
            let n = bs.n;
            let r = bs.rank / kv;
            for (tu_i, &tu) in to.reps.iter().enumerate() {
                for &s in &left {
                    // s^{-1} t_U = v · t_V
                    let y = g.mul(g.inv(s), tu);
                    let (tv_i, v) = self
                        .reps
                        .iter()
                        .enumerate()
                        .find_map(|(i, &tv)| {
                            let v = g.mul(y, g.inv(tv));
                            self.sub.contains(v).then_some((i, v))
                        })
                        .expect("right transversal covers the group");
                    let a = term.action(g.mul(s, v));
                    for b in 0..r {
                        let si = bs.offset + (b * kv + tv_i) * n;
                        let di = bd.offset + (b * ku + tu_i) * n;
                        apply_action(a, &phi[si..si + n], &mut out[di..di + n]);
                    }
                }
            }
        }
        dst.reduce(&mut out);
        Ok(out)
    }

    /// Matrix of `res: Ĥ^q(U) → Ĥ^q(V)` on canonical generators.
    pub fn restriction_map(&self, mine: &TateGroups, to: &Cohomology, theirs: &TateGroups, q: i64) -> Result<IntMatrix> {
        let src = mine.require(q)?;
        let dst = theirs.require(q)?;
        let cols = (0..src.group().ngens())
            .map(|i| {
                let y = self.restrict_cochain(to, q, &mine.representative(q, &unit(src.group().ngens(), i)))?;
                theirs.class_of(q, &y).ok_or_else(|| Error::Internal("restricted cocycle is not a cocycle".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix::from_columns(dst.group().ngens(), &cols))
    }

    /// Matrix of `cor: Ĥ^q(V) → Ĥ^q(U)` on canonical generators.
    pub fn corestriction_map(&self, mine: &TateGroups, to: &Cohomology, theirs: &TateGroups, q: i64) -> Result<IntMatrix> {
        let src = mine.require(q)?;
        let dst = theirs.require(q)?;
        let cols = (0..src.group().ngens())
            .map(|i| {
                let y = self.corestrict_cochain(to, q, &mine.representative(q, &unit(src.group().ngens(), i)))?;
                theirs.class_of(q, &y).ok_or_else(|| Error::Internal("corestricted cocycle is not a cocycle".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix::from_columns(dst.group().ngens(), &cols))
    }

    /// Pushes a degree-`q` cochain along coefficient maps `f_j: C^j → C'^{j+shift}`
    /// given on normalized presentations; lands in degree `q + shift`.
    pub fn push_cochain(
        &self,
        to: &Cohomology,
        q: i64,
        shift: i64,
        f: &dyn Fn(i64) -> IntMatrix,
        phi: &[BigInt],
    ) -> Result<Vec<BigInt>> {
        let src = self.layout(q)?;
        let dst = to.layout(q + shift)?;
        let mut out = vec![BigInt::zero(); dst.dim()];
        for bs in &src.blocks {
            let Some(bd) = dst.block(bs.j + shift) else { continue };
            let m = f(bs.j);
            for b in 0..bs.rank {
                let s = bs.offset + b * bs.n;
                let d = bd.offset + b * bd.n;
                apply_action(&m, &phi[s..s + bs.n], &mut out[d..d + bd.n]);
            }
        }
        dst.reduce(&mut out);
        Ok(out)
    }

    /// Matrix of the map `Ĥ^q(C) → Ĥ^{q+shift}(C')` induced by coefficient maps.
    pub fn push_map(
        &self,
        mine: &TateGroups,
        to: &Cohomology,
        theirs: &TateGroups,
        q: i64,
        shift: i64,
        f: &dyn Fn(i64) -> IntMatrix,
    ) -> Result<IntMatrix> {
        let src = mine.require(q)?;
        let dst = theirs.require(q + shift)?;
        let cols = (0..src.group().ngens())
            .map(|i| {
                let y = self.push_cochain(to, q, shift, f, &mine.representative(q, &unit(src.group().ngens(), i)))?;
                theirs
                    .class_of(q + shift, &y)
                    .ok_or_else(|| Error::Internal("coefficient map does not preserve cocycles".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix::from_columns(dst.group().ngens(), &cols))
    }

    /// The identification `U^ab → Ĥ^{-2}(U, Z)`, `g ↦` the class of the
    /// coinvariant image of a solution of `δ y = g·y_0 - y_0`.
    ///
    /// `integral` must hold degree `-2` of [`Cohomology::integral`].
    pub fn theta(&self, integral: &TateGroups) -> Result<Theta> {
        let x = &self.x;
        self.check_window((-2, 1))?;
        let g = x.group();
        let n = g.order();
        let d = integral.require(-2)?;
        let aug = x.augmentation();
        let (b0, s) = aug
            .iter()
            .enumerate()
            .find_map(|(b, e)| (e.is_one() || (-e).is_one()).then(|| (b, e.clone())))
            .ok_or_else(|| Error::Unsupported("augmentation has no unit generator".into()))?;
        let delta = x.differential(-1);
        let dim = x.z_rank(0);
        let cols: Vec<Vec<BigInt>> = delta
            .z_columns(g)
            .iter()
            .map(|c| super::dense(dim, c))
            .collect();
        let solver = ColumnSolver::new(dim, &cols);
        let r1 = x.rank(-1);
        let mut images = Vec::with_capacity(n);
        for h in 0..n {
            let mut rhs = vec![BigInt::zero(); dim];
            rhs[b0 * n + h] += &s;
            rhs[b0 * n + g.identity()] -= &s;
            let y = solver
                .solve(&rhs)
                .ok_or_else(|| Error::Internal("augmentation kernel is not a boundary".into()))?;
            let mut c = vec![BigInt::zero(); d.layout().dim()];
            for beta in 0..r1 {
                for k in 0..n {
                    c[beta] += &y[beta * n + k];
                }
            }
            let class = integral
                .class_of(-2, &c)
                .ok_or_else(|| Error::Internal("coinvariant image is not a cocycle".into()))?;
            images.push(class);
        }
        let (ab, _) = g.abelianization();
        let target = d.group().clone();
        let img = IntMatrix::from_columns(target.ngens(), &images);
        let m = &img * &ab.basis_lift;
        let cols: Vec<Vec<BigInt>> = m.columns().iter().map(|c| target.reduce(c)).collect();
        let matrix = IntMatrix::from_columns(target.ngens(), &cols);
        let iso = is_isomorphism(&matrix, &ab, &target);
        Ok(Theta { source: ab, target, matrix, is_isomorphism: iso })
    }
}

/// `θ: U^ab → Ĥ^{-2}(U, Z)`.
#[derive(Clone, Debug)]
pub struct Theta {
    pub source: AbGroup,
    pub target: AbGroup,
    pub matrix: IntMatrix,
    pub is_isomorphism: bool,
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); n];
    e[i] = BigInt::one();
    e
}

fn map_class(m: &IntMatrix, target: &AbGroup, degree: i64, c: &TateClass) -> TateClass {
    TateClass::new(target, degree, &m.mul_vec(&c.coords))
}

/// `res_{U→V}` of a class.
pub fn restriction(
    from: &Cohomology,
    from_groups: &TateGroups,
    to: &Cohomology,
    to_groups: &TateGroups,
    class: &TateClass,
) -> Result<TateClass> {
    let m = from.restriction_map(from_groups, to, to_groups, class.degree)?;
    Ok(map_class(&m, to_groups.group(class.degree), class.degree, class))
}

/// `cor_{V→U}` of a class.
pub fn corestriction(
    from: &Cohomology,
    from_groups: &TateGroups,
    to: &Cohomology,
    to_groups: &TateGroups,
    class: &TateClass,
) -> Result<TateClass> {
    let m = from.corestriction_map(from_groups, to, to_groups, class.degree)?;
    Ok(map_class(&m, to_groups.group(class.degree), class.degree, class))
}
