//! Tate hypercohomology `Ĥ^q(G, C)` of a bounded complex, computed as the
//! cohomology of the total complex `T^q = ⊕_j Hom_G(X^{j-q}, C^j)` of a
//! complete resolution `X`.
//!
//! A cochain stores `φ_j(e_b) ∈ C^j` for every generator `e_b` of `X^{j-q}`,
//! blocks in increasing `j`, coordinate `offset + b·n_j + i`. The total
//! differential is `(Dφ)_j = d_C φ_{j-1} - (-1)^q φ_j ∘ δ`.
//!
//! Over a subgroup `U` the resolution is viewed as a `U`-resolution with
//! generators `t·e_b`, `t` running over the right transversal of `U`.

mod checks;
mod cup;
mod diagonal;
mod maps;

pub use checks::{
    classical_agreement, cone_les_check, cone_window, nakayama_window, tate_nakayama_check, AgreementReport, ConeDegree, ConeReport,
    CupDegree, NakayamaReport, SubgroupHypotheses,
};
pub use cup::{cup_window, cup_with, lift_cocycle, ChainLift, CupMap};
pub use diagonal::{cup_via_diagonal, diagonal_approximation, DiagonalApproximation};
pub use maps::{corestriction, restriction, Theta};

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gcomplexes::{concentrate, GComplex};
use crate::gmodules::trivial_cyclic;
use crate::groups::{FiniteGroup, Subgroup};
use crate::linalg::{homology_presented, AbGroup, Homology, IntMatrix, Piece};
use crate::resolutions::CompleteResolution;

pub(crate) type SparseCols = Vec<Vec<(usize, BigInt)>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Block {
    pub j: i64,
    pub k: i64,
    pub rank: usize,
    pub n: usize,
    pub offset: usize,
}

/// Coordinate layout of `T^q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub(crate) q: i64,
    pub(crate) blocks: Vec<Block>,
    dim: usize,
    moduli: Vec<BigInt>,
}

impl Layout {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Torsion order of each coordinate, zero for free ones.
    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    pub(crate) fn block(&self, j: i64) -> Option<&Block> {
        self.blocks.iter().find(|b| b.j == j)
    }

    pub(crate) fn reduce(&self, v: &mut [BigInt]) {
        for (x, m) in v.iter_mut().zip(&self.moduli) {
            if !m.is_zero() {
                *x = x.mod_floor(m);
            }
        }
    }
}

/// The data needed to compute `Ĥ^*(U, C)` for a subgroup `U ≤ G`.
#[derive(Clone, Debug)]
pub struct Cohomology {
    parent: Arc<FiniteGroup>,
    sub: Subgroup,
    reps: Vec<usize>,
    parent_x: Arc<CompleteResolution>,
    parent_c: Arc<GComplex>,
    x: CompleteResolution,
    c: GComplex,
    support: Vec<i64>,
}

fn same_group(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    a.table() == b.table()
}

impl Cohomology {
    /// Cohomology of the whole group. The coefficient complex is normalized.
    pub fn new(x: &CompleteResolution, c: &GComplex) -> Result<Cohomology> {
        if !same_group(x.group(), c.group()) {
            return Err(Error::GroupMismatch("resolution and coefficients live over different groups".into()));
        }
        let g = x.group().clone();
        let c = if c.is_normalized() { c.clone() } else { c.normalize() };
        let support = (c.lo()..=c.hi()).filter(|&j| !c.term(j).is_zero_module()).collect();
        Ok(Cohomology {
            sub: g.whole(),
            reps: vec![g.identity()],
            parent: g,
            parent_x: Arc::new(x.clone()),
            parent_c: Arc::new(c.clone()),
            x: x.clone(),
            c,
            support,
        })
    }

    /// The same coefficients over a subgroup `H` of the parent group.
    pub fn subgroup(&self, h: &Subgroup) -> Result<Cohomology> {
        let h = self.parent.subgroup(&h.elements)?;
        if h.order() == self.parent.order() {
            return Ok(Cohomology {
                sub: h,
                reps: vec![self.parent.identity()],
                x: (*self.parent_x).clone(),
                c: (*self.parent_c).clone(),
                ..self.clone()
            });
        }
        Ok(Cohomology {
            reps: self.parent.right_coset_representatives(&h),
            x: self.parent_x.restrict(&h),
            c: self.parent_c.restrict(&h),
            sub: h,
            ..self.clone()
        })
    }

    /// Trivial `Z` in degree 0 over the same resolution and subgroup.
    pub fn integral(&self) -> Cohomology {
        let z = concentrate(&trivial_cyclic(&self.parent, 0), 0);
        let whole = Cohomology {
            sub: self.parent.whole(),
            reps: vec![self.parent.identity()],
            parent: self.parent.clone(),
            parent_x: self.parent_x.clone(),
            parent_c: Arc::new(z.clone()),
            x: (*self.parent_x).clone(),
            c: z,
            support: vec![0],
        };
        if self.is_whole() {
            whole
        } else {
            Cohomology { x: self.x.clone(), c: whole.parent_c.restrict(&self.sub), sub: self.sub.clone(), reps: self.reps.clone(), ..whole }
        }
    }

    /// Other coefficients over the same resolution and subgroup.
    pub fn with_coefficients(&self, c: &GComplex) -> Result<Cohomology> {
        let whole = Cohomology::new(&self.parent_x, c)?;
        if self.is_whole() {
            Ok(whole)
        } else {
            whole.subgroup(&self.sub)
        }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    /// The group `U` on its own table.
    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.x.group()
    }

    pub fn subgroup_elements(&self) -> &Subgroup {
        &self.sub
    }

    pub fn is_whole(&self) -> bool {
        self.sub.order() == self.parent.order()
    }

    pub fn resolution(&self) -> &CompleteResolution {
        &self.x
    }

    pub fn parent_resolution(&self) -> &CompleteResolution {
        &self.parent_x
    }

    /// The normalized coefficient complex over `U`.
    pub fn coefficients(&self) -> &GComplex {
        &self.c
    }

    pub(crate) fn parent_coefficients(&self) -> &GComplex {
        &self.parent_c
    }

    /// Lowest and highest degree with a nonzero term.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.support.first()?, *self.support.last()?))
    }

    /// Resolution degrees touched when computing `Ĥ^q` for `q` in `range`.
    pub fn needed_degrees(&self, range: (i64, i64)) -> Option<(i64, i64)> {
        let (lo, hi) = self.support()?;
        Some((lo - range.1 - 1, hi - range.0 + 1))
    }

    pub(crate) fn check_window(&self, need: (i64, i64)) -> Result<()> {
        if self.x.covers(need.0, need.1) {
            return Ok(());
        }
        let (have_lo, have_hi) = self.x.window();
        Err(Error::WindowTooSmall { need_lo: need.0, need_hi: need.1, have_lo, have_hi })
    }

    pub fn layout(&self, q: i64) -> Result<Layout> {
        let mut blocks = Vec::new();
        let mut moduli = Vec::new();
        let mut offset = 0;
        for &j in &self.support {
            let k = j - q;
            self.check_window((k, k))?;
            let rank = self.x.rank(k);
            let term = self.c.term_ref(j).expect("support lies in the complex");
            let n = term.gens();
            let m = term.moduli();
            for _ in 0..rank {
                moduli.extend(m.iter().cloned());
            }
            blocks.push(Block { j, k, rank, n, offset });
            offset += rank * n;
        }
        Ok(Layout { q, blocks, dim: offset, moduli })
    }

    /// `D^q: T^q → T^{q+1}` as sparse columns, reduced in the target.
    pub fn differential(&self, q: i64) -> Result<SparseCols> {
        let src = self.layout(q)?;
        let dst = self.layout(q + 1)?;
        let mut cols: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); src.dim];
        let sign = if q.rem_euclid(2) == 0 { -BigInt::one() } else { BigInt::one() };
        for blk in &src.blocks {
            // d_C ∘ φ_j lands in block j+1
            if let Some(t) = dst.block(blk.j + 1) {
                let d = self.c.differential(blk.j);
                for b in 0..blk.rank {
                    for i in 0..blk.n {
                        let col = &mut cols[blk.offset + b * blk.n + i];
                        for i2 in 0..t.n {
                            let v = d.get(i2, i);
                            if !v.is_zero() {
                                col.push((t.offset + b * t.n + i2, v.clone()));
                            }
                        }
                    }
                }
            }
            // -(-1)^q φ_j ∘ δ^{k-1} lands in block j
            let t = dst.block(blk.j).expect("block j of T^{q+1}");
            let delta = self.x.differential(blk.k - 1);
            let term = self.c.term_ref(blk.j).expect("support lies in the complex");
            for (alpha, entries) in delta.entries.iter().enumerate() {
                for (beta, x, c) in entries {
                    let a = term.action(*x);
                    let coef = c * &sign;
                    for i in 0..blk.n {
                        let col = &mut cols[blk.offset + beta * blk.n + i];
                        for i2 in 0..t.n {
                            let v = a.get(i2, i);
                            if !v.is_zero() {
                                col.push((t.offset + alpha * t.n + i2, v * &coef));
                            }
                        }
                    }
                }
            }
        }
        Ok(cols.into_iter().map(|c| merge_reduce(c, dst.moduli())).collect())
    }

    /// Dense matrix of `D^q`.
    pub fn differential_matrix(&self, q: i64) -> Result<IntMatrix> {
        let cols = self.differential(q)?;
        let rows = self.layout(q + 1)?.dim;
        let dense: Vec<Vec<BigInt>> = cols.iter().map(|c| dense(rows, c)).collect();
        Ok(IntMatrix::from_columns(rows, &dense))
    }

    /// `Ĥ^q(U, C)` for `q_min ≤ q ≤ q_max`.
    pub fn groups(&self, range: (i64, i64)) -> Result<TateGroups> {
        let (q_min, q_max) = range;
        if q_min > q_max {
            return Err(Error::InvalidArgument(format!("empty degree range [{q_min}, {q_max}]")));
        }
        if let Some(need) = self.needed_degrees(range) {
            self.check_window(need)?;
        }
        let mut layouts = Vec::new();
        for q in q_min - 1..=q_max + 1 {
            layouts.push(self.layout(q)?);
        }
        let mut diffs = Vec::new();
        for q in q_min - 1..=q_max {
            diffs.push(self.differential(q)?);
        }
        let mut degrees = Vec::new();
        for (i, q) in (q_min..=q_max).enumerate() {
            let (d_in, d_out) = (&diffs[i], &diffs[i + 1]);
            let (mid, out) = (&layouts[i + 1], &layouts[i + 2]);
            if !composite_vanishes(d_out, d_in, out) {
                return Err(Error::NotAComplex(format!("total differential squares to a nonzero map at degree {q}")));
            }
            let rows = transpose(d_out, out.dim);
            let relators: SparseCols = mid
                .moduli
                .iter()
                .enumerate()
                .filter(|(_, m)| !m.is_zero())
                .map(|(i, m)| vec![(i, m.clone())])
                .collect();
            let homology = homology_presented(&Piece {
                dim: mid.dim,
                d_in,
                d_out_rows: &rows,
                out_moduli: &out.moduli,
                mid_relators: &relators,
            })?;
            degrees.push(TateDegree { q, homology, layout: mid.clone() });
        }
        Ok(TateGroups { range, degrees, d_squared_zero: true })
    }

    /// Applies `D^q` to a cochain.
    pub fn apply_differential(&self, q: i64, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let cols = self.differential(q)?;
        let dst = self.layout(q + 1)?;
        let mut y = vec![BigInt::zero(); dst.dim];
        for (c, v) in cols.iter().zip(x) {
            if v.is_zero() {
                continue;
            }
            for (i, a) in c {
                y[*i] += a * v;
            }
        }
        dst.reduce(&mut y);
        Ok(y)
    }
}

pub(crate) fn dense(n: usize, sparse: &[(usize, BigInt)]) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    for (i, x) in sparse {
        v[*i] += x;
    }
    v
}

pub(crate) fn merge_reduce(mut c: Vec<(usize, BigInt)>, moduli: &[BigInt]) -> Vec<(usize, BigInt)> {
    c.sort_by_key(|(i, _)| *i);
    let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(c.len());
    for (i, v) in c {
        match out.last_mut() {
            Some((j, w)) if *j == i => *w += v,
            _ => out.push((i, v)),
        }
    }
    for (i, v) in out.iter_mut() {
        let m = &moduli[*i];
        if !m.is_zero() {
            *v = v.mod_floor(m);
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

fn transpose(cols: &SparseCols, rows: usize) -> SparseCols {
    let mut out = vec![Vec::new(); rows];
    for (j, c) in cols.iter().enumerate() {
        for (i, v) in c {
            out[*i].push((j, v.clone()));
        }
    }
    out
}

fn composite_vanishes(outer: &SparseCols, inner: &SparseCols, target: &Layout) -> bool {
    inner.iter().all(|c| {
        let mut acc = Vec::new();
        for (k, v) in c {
            for (i, w) in &outer[*k] {
                acc.push((*i, v * w));
            }
        }
        merge_reduce(acc, &target.moduli).is_empty()
    })
}

/// One degree of [`TateGroups`].
#[derive(Clone, Debug)]
pub struct TateDegree {
    pub q: i64,
    pub homology: Homology,
    layout: Layout,
}

impl TateDegree {
    pub fn group(&self) -> &AbGroup {
        &self.homology.group
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }
}

/// `Ĥ^q` over a range of degrees, in canonical form with cocycle lifts.
#[derive(Clone, Debug)]
pub struct TateGroups {
    range: (i64, i64),
    degrees: Vec<TateDegree>,
    /// Every `D^q ∘ D^{q-1}` used was audited to vanish.
    d_squared_zero: bool,
}

impl TateGroups {
    pub fn range(&self) -> (i64, i64) {
        self.range
    }

    pub fn degrees(&self) -> &[TateDegree] {
        &self.degrees
    }

    pub fn d_squared_zero(&self) -> bool {
        self.d_squared_zero
    }

    pub fn get(&self, q: i64) -> Option<&TateDegree> {
        self.degrees.iter().find(|d| d.q == q)
    }

    pub(crate) fn require(&self, q: i64) -> Result<&TateDegree> {
        self.get(q).ok_or_else(|| {
            Error::InvalidArgument(format!("degree {q} outside the computed range [{}, {}]", self.range.0, self.range.1))
        })
    }

    /// # Panics
    /// If `q` is outside the computed range.
    pub fn group(&self, q: i64) -> &AbGroup {
        &self.require(q).unwrap().homology.group
    }

    pub fn invariants(&self, q: i64) -> Vec<BigInt> {
        self.group(q).invariants()
    }

    /// A cocycle representing the class with canonical coordinates `coords`.
    pub fn representative(&self, q: i64, coords: &[BigInt]) -> Vec<BigInt> {
        let d = self.require(q).unwrap();
        let mut v = d.homology.representative(coords);
        d.layout.reduce(&mut v);
        v
    }

    /// Canonical coordinates of a cocycle's class; `None` for non-cocycles.
    pub fn class_of(&self, q: i64, cochain: &[BigInt]) -> Option<Vec<BigInt>> {
        let d = self.get(q)?;
        if cochain.len() != d.layout.dim {
            return None;
        }
        d.homology.class_of(cochain)
    }

    pub fn class(&self, q: i64, coords: &[BigInt]) -> TateClass {
        TateClass::new(self.group(q), q, coords)
    }

    pub fn generator(&self, q: i64, i: usize) -> TateClass {
        let g = self.group(q);
        let mut e = vec![BigInt::zero(); g.ngens()];
        e[i] = BigInt::one();
        TateClass::new(g, q, &e)
    }

    pub fn all_finite(&self) -> bool {
        self.degrees.iter().all(|d| d.homology.group.is_finite())
    }
}

/// A class in `Ĥ^q` in canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TateClass {
    pub degree: i64,
    pub coords: Vec<BigInt>,
    /// `None` for elements of infinite order.
    pub order: Option<BigInt>,
}

impl TateClass {
    pub fn new(group: &AbGroup, degree: i64, coords: &[BigInt]) -> TateClass {
        let coords = group.reduce(coords);
        let order = group.element_order(&coords);
        TateClass { degree, coords, order }
    }

    pub fn zero(group: &AbGroup, degree: i64) -> TateClass {
        TateClass::new(group, degree, &vec![BigInt::zero(); group.ngens()])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, group: &AbGroup, k: &BigInt) -> TateClass {
        let c: Vec<BigInt> = self.coords.iter().map(|x| x * k).collect();
        TateClass::new(group, self.degree, &c)
    }
}

/// `Ĥ^q(G, C)` for `q` in `range`.
pub fn tate_hypercohomology(x: &CompleteResolution, c: &GComplex, range: (i64, i64)) -> Result<TateGroups> {
    Cohomology::new(x, c)?.groups(range)
}

/// `Ĥ^q(H, C)` for a subgroup `H`, using the `G`-resolution viewed over `H`.
pub fn tate_hypercohomology_subgroup(
    x: &CompleteResolution,
    c: &GComplex,
    h: &Subgroup,
    range: (i64, i64),
) -> Result<TateGroups> {
    Cohomology::new(x, c)?.subgroup(h)?.groups(range)
}

/// Smallest symmetric window `N` with `[-N, N]` covering `needed`.
pub fn window_for(needed: (i64, i64)) -> usize {
    needed.0.unsigned_abs().max(needed.1.unsigned_abs()).max(1) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcomplexes::shift;
    use crate::gmodules::{finite_field_units, regular_module};
    use crate::groups::make_cyclic;
    use crate::resolutions::{build_complete_resolution, Engine, DEFAULT_BAR_CAP};

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn z(g: &Arc<FiniteGroup>) -> GComplex {
        concentrate(&trivial_cyclic(g, 0), 0)
    }

    #[test]
    fn cyclic_integral_pattern() {
        for n in [2usize, 3, 4, 6] {
            let g = Arc::new(make_cyclic(n));
            let x = build_complete_resolution(&g, 6, Engine::Periodic, DEFAULT_BAR_CAP).unwrap();
            let t = tate_hypercohomology(&x, &z(&g), (-4, 4)).unwrap();
            assert!(t.d_squared_zero());
            for q in -4..=4 {
                let want = if q % 2 == 0 { vec![b(n as i64)] } else { vec![] };
                assert_eq!(t.invariants(q), want, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn bar_agrees_with_periodic() {
        let g = Arc::new(make_cyclic(3));
        let x = build_complete_resolution(&g, 4, Engine::Bar, DEFAULT_BAR_CAP).unwrap();
        let t = tate_hypercohomology(&x, &z(&g), (-2, 2)).unwrap();
        for q in -2..=2 {
            let want = if q % 2 == 0 { vec![b(3)] } else { vec![] };
            assert_eq!(t.invariants(q), want);
        }
    }

    #[test]
    fn regular_module_is_acyclic() {
        let g = Arc::new(make_cyclic(4));
        let x = build_complete_resolution(&g, 4, Engine::Periodic, DEFAULT_BAR_CAP).unwrap();
        let t = tate_hypercohomology(&x, &concentrate(&regular_module(&g), 0), (-2, 2)).unwrap();
        assert!((-2..=2).all(|q| t.group(q).is_trivial()));
    }

    #[test]
    fn hilbert_90_small() {
        let m = finite_field_units(2, 1, 2, 1 << 20).unwrap();
        let g = m.group().clone();
        let x = build_complete_resolution(&g, 3, Engine::Periodic, DEFAULT_BAR_CAP).unwrap();
        let t = tate_hypercohomology(&x, &concentrate(&m, 0), (0, 1)).unwrap();
        assert!(t.group(0).is_trivial());
        assert!(t.group(1).is_trivial());
    }

    #[test]
    fn window_shortfall_is_reported() {
        let g = Arc::new(make_cyclic(2));
        let x = build_complete_resolution(&g, 2, Engine::Periodic, DEFAULT_BAR_CAP).unwrap();
        let r = tate_hypercohomology(&x, &z(&g), (-4, 4));
        assert!(matches!(r, Err(Error::WindowTooSmall { .. })));
    }

    #[test]
    fn shift_moves_degrees() {
        let g = Arc::new(make_cyclic(2));
        let x = build_complete_resolution(&g, 6, Engine::Periodic, DEFAULT_BAR_CAP).unwrap();
        let m = finite_field_units(3, 1, 2, 1 << 20).unwrap();
        let _ = m;
        let c = z(&g);
        let base = tate_hypercohomology(&x, &c, (-3, 4)).unwrap();
        for n in [-1i64, 1, 2] {
            let s = tate_hypercohomology(&x, &shift(&c, n), (-2, 2)).unwrap();
            for q in -2..=2 {
                assert_eq!(s.invariants(q), base.invariants(q + n));
            }
        }
    }

    #[test]
    fn representatives_are_cocycles() {
        let g = Arc::new(make_cyclic(4));
        let x = build_complete_resolution(&g, 4, Engine::Periodic, DEFAULT_BAR_CAP).unwrap();
        let coh = Cohomology::new(&x, &z(&g)).unwrap();
        let t = coh.groups((-2, 2)).unwrap();
        let r = t.representative(2, &[b(1)]);
        assert!(coh.apply_differential(2, &r).unwrap().iter().all(Zero::is_zero));
        assert_eq!(t.class_of(2, &r), Some(vec![b(1)]));
        assert_eq!(t.generator(2, 0).order, Some(b(4)));
    }
}
