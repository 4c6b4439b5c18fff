//! Finite groups given by multiplication tables.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{cokernel_structure, AbGroup, IntMatrix};

pub const DEFAULT_MAX_ORDER: usize = 24;

/// A finite group on elements `0..order`. Validated on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

/// A subgroup, as a sorted set of element ids of its parent group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    pub elements: Vec<usize>,
    pub is_normal: bool,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }

    /// Position of `g` in `elements`, which is its id in the subgroup's own
    /// table (see [`FiniteGroup::subgroup_as_group`]).
    pub fn index_of(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }
}

pub fn make_cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1, "cyclic group of order 0");
    let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    FiniteGroup::from_table_unchecked(table)
}

pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let (a, b) = (g.order(), h.order());
    let mut table = vec![vec![0; a * b]; a * b];
    for x in 0..a * b {
        for y in 0..a * b {
            let (x1, x2) = (x / b, x % b);
            let (y1, y2) = (y / b, y % b);
            table[x][y] = g.mul(x1, y1) * b + h.mul(x2, y2);
        }
    }
    FiniteGroup::from_table_unchecked(table)
}

/// Symmetric group on `n` letters; permutations in lexicographic order,
/// `(σ·τ)(i) = σ(τ(i))`.
pub fn symmetric_group(n: usize) -> FiniteGroup {
    let perms = permutations(n);
    let index = |p: &Vec<usize>| perms.binary_search(p).expect("permutation listed");
    let table = perms
        .iter()
        .map(|s| perms.iter().map(|t| index(&t.iter().map(|&i| s[i]).collect())).collect())
        .collect();
    FiniteGroup::from_table_unchecked(table)
}

/// Dihedral group of order `2n`: element `r^k s^e` has id `k + n·e`.
pub fn dihedral_group(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let id = |k: usize, e: usize| k % n + n * e;
    let mut table = vec![vec![0; 2 * n]; 2 * n];
    for x in 0..2 * n {
        for y in 0..2 * n {
            let (k1, e1) = (x % n, x / n);
            let (k2, e2) = (y % n, y / n);
            // s r^k = r^{-k} s
            let k = if e1 == 0 { k1 + k2 } else { k1 + n - k2 };
            table[x][y] = id(k, (e1 + e2) % 2);
        }
    }
    FiniteGroup::from_table_unchecked(table)
}

/// Quaternion group of order 8: ids `0..4` are `1, i, -1, -i` and ids
/// `4..8` are `j, k, -j, -k` (`i^a j^e` with id `a + 4e`).
pub fn quaternion_group() -> FiniteGroup {
    let mut table = vec![vec![0; 8]; 8];
    for x in 0..8 {
        for y in 0..8 {
            let (a1, e1) = (x % 4, x / 4);
            let (a2, e2) = (y % 4, y / 4);
            // j i = i^{-1} j, j^2 = i^2
            let a = if e1 == 0 { a1 + a2 } else { a1 + 4 - a2 };
            let (a, e) = if e1 + e2 == 2 { (a + 2, 0) } else { (a, e1 + e2) };
            table[x][y] = a % 4 + 4 * e;
        }
    }
    FiniteGroup::from_table_unchecked(table)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q: Vec<usize> = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

pub fn from_table(table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
    FiniteGroup::from_table(table)
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedTable(format!("row {i} has length {}, expected {n}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::MalformedTable(format!("entry {x} in row {i} is not an element id")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or(Error::NoIdentity)?;
        let mut inverses = vec![0; n];
        for g in 0..n {
            inverses[g] = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or(Error::MissingInverse(g))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::NonAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, identity, inverses })
    }

    fn from_table_unchecked(table: Vec<Vec<usize>>) -> FiniteGroup {
        let n = table.len();
        let identity = (0..n).find(|&e| (0..n).all(|g| table[e][g] == g)).expect("identity");
        let inverses = (0..n)
            .map(|g| (0..n).find(|&h| table[g][h] == identity).expect("inverse"))
            .collect();
        let g = FiniteGroup { table, identity, inverses };
        debug_assert!(FiniteGroup::from_table(g.table.clone()).is_ok());
        g
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, g: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(g) } else { g };
        let mut r = self.identity;
        for _ in 0..k.unsigned_abs() {
            r = self.mul(r, base);
        }
        r
    }

    pub fn conjugate(&self, g: usize, by: usize) -> usize {
        self.mul(self.mul(by, g), self.inv(by))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// An element generating the group, if it is cyclic (least id first).
    pub fn cyclic_generator(&self) -> Option<usize> {
        self.elements().find(|&g| self.element_order(g) == self.order())
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator().is_some()
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elements: self.elements().collect(), is_normal: true }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![self.identity], is_normal: true }
    }

    fn closure(&self, start: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut set = start.clone();
        set.insert(self.identity);
        let mut queue: VecDeque<usize> = set.iter().copied().collect();
        let gens: Vec<usize> = start.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    fn normal(&self, elements: &[usize]) -> bool {
        let set: HashSet<usize> = elements.iter().copied().collect();
        elements
            .iter()
            .all(|&h| self.elements().all(|g| set.contains(&self.conjugate(h, g))))
    }

    pub fn subgroup_generated(&self, gens: &[usize]) -> Subgroup {
        let elements: Vec<usize> = self.closure(&gens.iter().copied().collect()).into_iter().collect();
        let is_normal = self.normal(&elements);
        Subgroup { elements, is_normal }
    }

    /// Validates that `elements` is closed under multiplication.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut e: Vec<usize> = elements.to_vec();
        e.sort_unstable();
        e.dedup();
        if e.iter().any(|&x| x >= self.order()) {
            return Err(Error::NotASubgroup("element id out of range".into()));
        }
        if !e.contains(&self.identity) {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        for &a in &e {
            for &b in &e {
                if e.binary_search(&self.mul(a, b)).is_err() {
                    return Err(Error::NotASubgroup(format!("{a}*{b} leaves the set")));
                }
            }
        }
        let is_normal = self.normal(&e);
        Ok(Subgroup { elements: e, is_normal })
    }

    /// Every subgroup exactly once, sorted by order then elements.
    pub fn all_subgroups(&self, max_order: usize) -> Result<Vec<Subgroup>> {
        if self.order() > max_order {
            return Err(Error::CapExceeded {
                what: "group order".into(),
                value: self.order() as u128,
                cap: max_order as u128,
            });
        }
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let start: Vec<usize> = vec![self.identity];
        seen.insert(start.clone());
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for g in self.elements() {
                if s.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens: BTreeSet<usize> = s.iter().copied().collect();
                gens.insert(g);
                let t: Vec<usize> = self.closure(&gens).into_iter().collect();
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        let mut subs: Vec<Subgroup> = seen
            .into_iter()
            .map(|e| {
                let is_normal = self.normal(&e);
                Subgroup { elements: e, is_normal }
            })
            .collect();
        subs.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
        Ok(subs)
    }

    /// One representative per left coset `gH`, identity first.
    pub fn coset_representatives(&self, h: &Subgroup) -> Vec<usize> {
        self.transversal(h, |g, x| self.mul(g, x))
    }

    /// One representative per right coset `Hg`, identity first.
    pub fn right_coset_representatives(&self, h: &Subgroup) -> Vec<usize> {
        self.transversal(h, |g, x| self.mul(x, g))
    }

    fn transversal(&self, h: &Subgroup, act: impl Fn(usize, usize) -> usize) -> Vec<usize> {
        let mut covered = vec![false; self.order()];
        let mut reps = Vec::new();
        let order = std::iter::once(self.identity).chain(self.elements().filter(|&g| g != self.identity));
        for g in order {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &x in &h.elements {
                covered[act(g, x)] = true;
            }
        }
        reps
    }

    /// `H` reindexed as a group on `0..|H|`; id `i` is `h.elements[i]`.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> FiniteGroup {
        let table = h
            .elements
            .iter()
            .map(|&a| h.elements.iter().map(|&b| h.index_of(self.mul(a, b)).expect("closed")).collect())
            .collect();
        FiniteGroup::from_table_unchecked(table)
    }

    /// `G/N` for normal `N`, with the projection of each element to its
    /// coset id. Coset ids follow [`FiniteGroup::coset_representatives`].
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
        if !n.is_normal {
            return Err(Error::NotASubgroup("quotient by a non-normal subgroup".into()));
        }
        let reps = self.coset_representatives(n);
        let mut proj = vec![0; self.order()];
        for (i, &r) in reps.iter().enumerate() {
            for &x in &n.elements {
                proj[self.mul(r, x)] = i;
            }
        }
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| proj[self.mul(a, b)]).collect())
            .collect();
        Ok((FiniteGroup::from_table_unchecked(table), proj))
    }

    pub fn commutator_subgroup(&self) -> Subgroup {
        let comms: Vec<usize> = self
            .elements()
            .flat_map(|a| {
                self.elements()
                    .map(move |b| (a, b))
            })
            .map(|(a, b)| self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b))))
            .collect();
        self.subgroup_generated(&comms)
    }

    /// `G^ab` in invariant-factor form, with the image of every element in
    /// canonical coordinates.
    pub fn abelianization(&self) -> (AbGroup, Vec<Vec<BigInt>>) {
        let n = self.order();
        // relators e_a + e_b - e_{ab}; they already force e_1 = 0
        let mut cols = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let mut c = vec![BigInt::zero(); n];
                c[a] += 1;
                c[b] += 1;
                c[self.mul(a, b)] -= 1;
                cols.push(c);
            }
        }
        let ab = cokernel_structure(&IntMatrix::from_columns(n, &cols));
        let proj = (0..n)
            .map(|g| {
                let mut e = vec![BigInt::zero(); n];
                e[g] = BigInt::from(1);
                ab.express(&e)
            })
            .collect();
        (ab, proj)
    }
}

pub fn all_subgroups(g: &FiniteGroup, max_order: usize) -> Result<Vec<Subgroup>> {
    g.all_subgroups(max_order)
}

pub fn abelianization(g: &FiniteGroup) -> (AbGroup, Vec<Vec<BigInt>>) {
    g.abelianization()
}

pub fn coset_representatives(g: &FiniteGroup, h: &Subgroup) -> Vec<usize> {
    g.coset_representatives(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orders(g: &FiniteGroup) -> Vec<usize> {
        g.all_subgroups(24).unwrap().iter().map(Subgroup::order).collect()
    }

    #[test]
    fn cyclic_subgroups() {
        assert_eq!(make_cyclic(1).order(), 1);
        assert_eq!(make_cyclic(4).mul(3, 2), 1);
        assert_eq!(orders(&make_cyclic(6)), vec![1, 2, 3, 6]);
        assert_eq!(orders(&make_cyclic(4)), vec![1, 2, 4]);
    }

    #[test]
    fn klein_and_s3() {
        let k = direct_product(&make_cyclic(2), &make_cyclic(2));
        assert_eq!(orders(&k), vec![1, 2, 2, 2, 4]);
        let s3 = symmetric_group(3);
        let subs = s3.all_subgroups(24).unwrap();
        assert_eq!(subs.len(), 6);
        let normal: Vec<usize> = subs.iter().filter(|s| s.is_normal).map(Subgroup::order).collect();
        assert_eq!(normal, vec![1, 3, 6]);
    }

    #[test]
    fn table_errors() {
        assert_eq!(from_table(vec![vec![0]]).unwrap().order(), 1);
        let mut t = symmetric_group(3).table().to_vec();
        assert!(from_table(t.clone()).is_ok());
        // swap two products outside the identity row and column
        let (x, y) = (t[1][2], t[1][3]);
        t[1][2] = y;
        t[1][3] = x;
        assert!(matches!(from_table(t), Err(Error::NonAssociative(..)) | Err(Error::MissingInverse(_))));
        assert_eq!(from_table(vec![vec![1, 1], vec![1, 1]]), Err(Error::NoIdentity));
        assert!(matches!(from_table(vec![vec![0, 1]]), Err(Error::MalformedTable(_))));
    }

    #[test]
    fn cosets() {
        let z4 = make_cyclic(4);
        let h = z4.subgroup(&[0, 2]).unwrap();
        assert_eq!(z4.coset_representatives(&h), vec![0, 1]);
        assert_eq!(z4.coset_representatives(&z4.whole()), vec![0]);
        let s3 = symmetric_group(3);
        let two = s3.all_subgroups(24).unwrap().into_iter().find(|s| s.order() == 2).unwrap();
        assert_eq!(s3.coset_representatives(&two).len(), 3);
    }

    #[test]
    fn abelianizations() {
        let (ab, proj) = make_cyclic(5).abelianization();
        assert_eq!(ab.torsion, vec![BigInt::from(5)]);
        assert_eq!(ab.element_order(&proj[1]), Some(BigInt::from(5)));
        let (ab, _) = symmetric_group(3).abelianization();
        assert_eq!(ab.torsion, vec![BigInt::from(2)]);
        let (ab, _) = direct_product(&make_cyclic(2), &make_cyclic(2)).abelianization();
        assert_eq!(ab.torsion, vec![BigInt::from(2), BigInt::from(2)]);
        let (ab, _) = direct_product(&make_cyclic(2), &make_cyclic(3)).abelianization();
        assert_eq!(ab.torsion, vec![BigInt::from(6)]);
        let (ab, _) = quaternion_group().abelianization();
        assert_eq!(ab.torsion, vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn quotients() {
        let z4 = make_cyclic(4);
        let h = z4.subgroup(&[0, 2]).unwrap();
        let (q, proj) = z4.quotient(&h).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj, vec![0, 1, 0, 1]);
        assert_eq!(dihedral_group(4).order(), 8);
        assert!(!dihedral_group(3).is_abelian());
    }
}
