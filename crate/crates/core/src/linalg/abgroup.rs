//! Finitely generated abelian groups in invariant-factor form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::lattice::{echelon_big, kernel_lattice, to_big_reduction, unit_reduce, ColumnSolver};
use super::matrix::IntMatrix;
use super::scalar::{exact, lift_vec, Checked};
use super::snf::{smith_big, to_matrix, Track};

/// `Z/t_1 ⊕ … ⊕ Z/t_k ⊕ Z^r` presented as a quotient of some ambient `Z^n`.
///
/// Canonical generators are ordered torsion first, then free. Column `i` of
/// `basis_lift` is an ambient vector representing generator `i`; row `i` of
/// `coords`, when present, is the coordinate functional for generator `i`.
/// Homology groups carry no global functional (see `Homology::class_of`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    pub basis_lift: IntMatrix,
    pub coords: Option<IntMatrix>,
}

impl AbGroup {
    /// The abstract group with the given invariants, presented on its own
    /// canonical generators.
    pub fn from_invariants(torsion: &[BigInt], free_rank: usize) -> AbGroup {
        let n = torsion.len() + free_rank;
        AbGroup {
            free_rank,
            torsion: torsion.to_vec(),
            basis_lift: IntMatrix::identity(n),
            coords: Some(IntMatrix::identity(n)),
        }
    }

    pub fn trivial() -> AbGroup {
        Self::from_invariants(&[], 0)
    }

    pub fn cyclic(n: u64) -> AbGroup {
        match n {
            0 => Self::from_invariants(&[], 1),
            1 => Self::trivial(),
            n => Self::from_invariants(&[BigInt::from(n)], 0),
        }
    }

    pub fn ngens(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis_lift.rows()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    /// `None` for infinite groups.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Torsion invariants followed by one `0` per free summand.
    pub fn invariants(&self) -> Vec<BigInt> {
        let mut v = self.torsion.clone();
        v.extend(std::iter::repeat_n(BigInt::zero(), self.free_rank));
        v
    }

    pub fn same_invariants(&self, other: &AbGroup) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }

    pub fn is_cyclic_of_order(&self, n: &BigInt) -> bool {
        if n.is_one() {
            return self.is_trivial();
        }
        self.free_rank == 0 && self.torsion.len() == 1 && &self.torsion[0] == n
    }

    /// Diagonal relator matrix on the canonical generators.
    pub fn relators(&self) -> IntMatrix {
        let k = self.torsion.len();
        let mut m = IntMatrix::zeros(self.ngens(), k);
        for (i, t) in self.torsion.iter().enumerate() {
            m.set(i, i, t.clone());
        }
        m
    }

    /// Reduces canonical coordinates into `[0, t_i)` on torsion summands.
    pub fn reduce(&self, c: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(c.len(), self.ngens());
        c.iter()
            .enumerate()
            .map(|(i, x)| match self.torsion.get(i) {
                Some(t) => x.mod_floor(t),
                None => x.clone(),
            })
            .collect()
    }

    /// Canonical coordinates of an ambient vector.
    pub fn express(&self, x: &[BigInt]) -> Vec<BigInt> {
        let c = self.coords.as_ref().expect("group has no ambient coordinate functionals");
        self.reduce(&c.mul_vec(x))
    }

    /// Ambient representative of canonical coordinates.
    pub fn lift(&self, c: &[BigInt]) -> Vec<BigInt> {
        self.basis_lift.mul_vec(c)
    }

    pub fn is_zero_element(&self, c: &[BigInt]) -> bool {
        self.reduce(c).iter().all(Zero::is_zero)
    }

    /// `None` when the element has infinite order.
    pub fn element_order(&self, c: &[BigInt]) -> Option<BigInt> {
        let c = self.reduce(c);
        let mut ord = BigInt::one();
        for (i, x) in c.iter().enumerate() {
            match self.torsion.get(i) {
                Some(t) => ord = ord.lcm(&(t / x.gcd(t))),
                None if !x.is_zero() => return None,
                None => {}
            }
        }
        Some(ord)
    }

    /// Number of elements killed by `k`; `None` if infinite (k = 0 on a
    /// group with free part).
    pub fn killed_by(&self, k: &BigInt) -> Option<BigInt> {
        if k.is_zero() {
            return self.order();
        }
        Some(self.torsion.iter().map(|t| t.gcd(k)).product())
    }

    /// Order of `A / kA`, `None` if infinite.
    pub fn cokernel_of_mult_order(&self, k: &BigInt) -> Option<BigInt> {
        if k.is_zero() {
            return self.order();
        }
        let k = k.abs();
        let tors: BigInt = self.torsion.iter().map(|t| t.gcd(&k)).product();
        Some(tors * num_traits::pow(k, self.free_rank))
    }

    /// Exponent of a finite group.
    pub fn exponent(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.last().cloned().unwrap_or_else(BigInt::one))
    }

    /// Enumerates all elements of a finite group in canonical coordinates,
    /// lexicographically.
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        assert!(self.is_finite(), "cannot enumerate an infinite group");
        let mut out = vec![vec![]];
        for t in &self.torsion {
            let mut next = Vec::new();
            for prefix in &out {
                let mut v = BigInt::zero();
                while &v < t {
                    let mut p: Vec<BigInt> = prefix.clone();
                    p.push(v.clone());
                    next.push(p);
                    v += 1;
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Structure of `Z^dim / span(columns)`.
pub(crate) fn cokernel_of_columns(dim: usize, columns: &[Vec<BigInt>]) -> AbGroup {
    let e = echelon_big(dim, columns, false);
    let red = exact(
        || {
            let cols: Vec<Vec<i64>> = e.cols.iter().map(|c| lift_vec(c)).collect::<Checked<_>>()?;
            Ok(to_big_reduction(unit_reduce(dim, cols, &e.pivots)?))
        },
        || unit_reduce(dim, e.cols.clone(), &e.pivots),
    );
    let k = red.survivors.len();
    let rest = IntMatrix::from_columns(k, &red.rest);
    let snf = smith_big(&rest, &Track { u: true, u_inv: true, v: false });
    let u = to_matrix(snf.u.unwrap(), k);
    let u_inv = to_matrix(snf.u_inv.unwrap(), k);

    // canonical generators: diagonal entries != 1, then rows past the diagonal
    let mut torsion = Vec::new();
    let mut chosen = Vec::new();
    let mut free = Vec::new();
    for i in 0..k {
        match snf.diag.get(i) {
            Some(d) if d.is_one() => {}
            Some(d) if !d.is_zero() => {
                torsion.push(d.clone());
                chosen.push(i);
            }
            _ => free.push(i),
        }
    }
    let free_rank = free.len();
    chosen.extend(free);

    let ngens = chosen.len();
    let mut basis_lift = IntMatrix::zeros(dim, ngens);
    let mut coords = IntMatrix::zeros(ngens, dim);
    for (g, &i) in chosen.iter().enumerate() {
        for (s, &row) in red.survivors.iter().enumerate() {
            basis_lift.set(row, g, u_inv.get(s, i).clone());
        }
        // pull the functional back through the substitutions, last step first
        let mut r = vec![BigInt::zero(); dim];
        for (s, &row) in red.survivors.iter().enumerate() {
            r[row] = u.get(i, s).clone();
        }
        for (p, c) in red.steps.iter().rev() {
            let dot: BigInt = c.iter().map(|(j, v)| &r[*j] * v).sum();
            if !dot.is_zero() {
                r[*p] -= dot;
            }
        }
        for (j, v) in r.into_iter().enumerate() {
            coords.set(g, j, v);
        }
    }
    AbGroup { free_rank, torsion, basis_lift, coords: Some(coords) }
}

/// Structure of `Z^rows / column-span(a)`.
pub fn cokernel_structure(a: &IntMatrix) -> AbGroup {
    cokernel_of_columns(a.rows(), &a.columns())
}

fn relator_columns(g: &AbGroup) -> Vec<Vec<BigInt>> {
    g.relators().columns()
}

/// Homomorphisms between groups are integer matrices on canonical
/// generators: column `j` holds the image of source generator `j`.
fn check_map(m: &IntMatrix, source: &AbGroup, target: &AbGroup) {
    assert_eq!(m.cols(), source.ngens(), "map width must match source generators");
    assert_eq!(m.rows(), target.ngens(), "map height must match target generators");
}

/// Structure of the subgroup of `target` generated by the columns of `m`,
/// with `basis_lift` in terms of the columns of `m`.
pub fn image_structure(m: &IntMatrix, target: &AbGroup) -> AbGroup {
    assert_eq!(m.rows(), target.ngens());
    let s = m.cols();
    let t = target.ngens();
    // relations among the generators: ker [m | D]
    let mut rows: Vec<Vec<(usize, BigInt)>> = m.sparse_rows();
    for (i, d) in target.torsion.iter().enumerate() {
        rows[i].push((s + i, d.clone()));
    }
    let ntors = target.torsion.len();
    let k = kernel_lattice(s + ntors, &rows, &vec![BigInt::zero(); t]);
    let rel: Vec<Vec<BigInt>> = k.cols.iter().map(|c| c[..s].to_vec()).collect();
    cokernel_of_columns(s, &rel)
}

pub fn image_order(m: &IntMatrix, source: &AbGroup, target: &AbGroup) -> Option<BigInt> {
    check_map(m, source, target);
    image_structure(m, target).order()
}

pub fn is_surjective(m: &IntMatrix, source: &AbGroup, target: &AbGroup) -> bool {
    check_map(m, source, target);
    let mut cols = m.columns();
    cols.extend(relator_columns(target));
    cokernel_of_columns(target.ngens(), &cols).is_trivial()
}

/// Kernel of `m` as a group, with `basis_lift` in source canonical
/// coordinates.
pub fn map_kernel(m: &IntMatrix, source: &AbGroup, target: &AbGroup) -> AbGroup {
    check_map(m, source, target);
    let s = source.ngens();
    let mut rows: Vec<Vec<(usize, BigInt)>> = m.sparse_rows();
    for (i, d) in target.torsion.iter().enumerate() {
        rows[i].push((s + i, d.clone()));
    }
    let ntors = target.torsion.len();
    let k = kernel_lattice(s + ntors, &rows, &vec![BigInt::zero(); target.ngens()]);
    let gens: Vec<Vec<BigInt>> = k.cols.iter().map(|c| c[..s].to_vec()).collect();
    let gm = IntMatrix::from_columns(s, &gens);
    let img = image_structure(&gm, source);
    let lift = &gm * &img.basis_lift;
    AbGroup { basis_lift: lift, coords: None, ..img }
}

pub fn is_injective(m: &IntMatrix, source: &AbGroup, target: &AbGroup) -> bool {
    map_kernel(m, source, target).is_trivial()
}

pub fn is_isomorphism(m: &IntMatrix, source: &AbGroup, target: &AbGroup) -> bool {
    source.same_invariants(target) && is_surjective(m, source, target) && is_injective(m, source, target)
}

/// A preimage of `b` (target canonical coordinates), reduced in the source.
pub fn preimage(m: &IntMatrix, source: &AbGroup, target: &AbGroup, b: &[BigInt]) -> Option<Vec<BigInt>> {
    check_map(m, source, target);
    let s = source.ngens();
    let mut cols = m.columns();
    cols.extend(relator_columns(target));
    let solver = ColumnSolver::new(target.ngens(), &cols);
    solver.solve(b).map(|y| source.reduce(&y[..s]))
}

/// Inverse matrix of an isomorphism.
pub fn invert_iso(m: &IntMatrix, source: &AbGroup, target: &AbGroup) -> Option<IntMatrix> {
    if !is_isomorphism(m, source, target) {
        return None;
    }
    let s = source.ngens();
    let mut cols = m.columns();
    cols.extend(relator_columns(target));
    let solver = ColumnSolver::new(target.ngens(), &cols);
    let mut inv = Vec::with_capacity(target.ngens());
    for i in 0..target.ngens() {
        let mut e = vec![BigInt::zero(); target.ngens()];
        e[i] = BigInt::one();
        let y = solver.solve(&e)?;
        inv.push(source.reduce(&y[..s]));
    }
    Some(IntMatrix::from_columns(s, &inv))
}

/// Reduces every column of a map matrix into canonical target form.
pub fn reduce_map(m: &IntMatrix, target: &AbGroup) -> IntMatrix {
    let cols: Vec<Vec<BigInt>> = m.columns().iter().map(|c| target.reduce(c)).collect();
    IntMatrix::from_columns(m.rows(), &cols)
}
