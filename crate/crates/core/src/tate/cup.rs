//! Cup products through chain-map lifts of integral cocycles.
//!
//! A cocycle `f ∈ Hom_U(X^{-p}, Z)` lifts to maps `F^k: X^k → X^{k+p}` with
//! `ε F^{-p} = f` and `δ F^k = (-1)^p F^{k+1} δ`; then `a ∪ f` is represented
//! by `a ∘ F`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::maps::unit;
use super::{dense, Cohomology, TateClass, TateGroups};
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::linalg::lattice::ColumnSolver;
use crate::linalg::{AbGroup, IntMatrix};
use crate::resolutions::{CompleteResolution, ZGMatrix};

/// Largest dense system `unknowns × equations` solved for one lifting step.
const LIFT_CAP: u128 = 40_000_000;

/// The maps `F^k: X^k → X^{k+p}` for `k` in a range.
#[derive(Clone, Debug)]
pub struct ChainLift {
    pub p: i64,
    maps: BTreeMap<i64, ZGMatrix>,
}

impl ChainLift {
    pub fn component(&self, k: i64) -> Option<&ZGMatrix> {
        self.maps.get(&k)
    }

    pub fn degrees(&self) -> (i64, i64) {
        (*self.maps.keys().next().unwrap(), *self.maps.keys().next_back().unwrap())
    }

    /// Rechecks `δ F^k = (-1)^p F^{k+1} δ` on consecutive components.
    pub fn commutes(&self, x: &CompleteResolution) -> bool {
        let g = x.group();
        let sign = if self.p.rem_euclid(2) == 0 { BigInt::from(1) } else { BigInt::from(-1) };
        self.maps.iter().zip(self.maps.iter().skip(1)).all(|((&k, f), (_, f1))| {
            let lhs = x.differential(k + self.p).compose(f, g);
            let rhs = f1.compose(x.differential(k), g);
            let rhs = ZGMatrix::new(rhs.rows, rhs.cols, rhs.entries.iter().map(|c| c.iter().map(|(b, h, v)| (*b, *h, v * &sign)).collect()).collect());
            lhs == rhs
        })
    }
}

fn z_vector(col: &[(usize, usize, BigInt)], n: usize, rank: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); rank * n];
    for (b, h, c) in col {
        v[b * n + h] += c;
    }
    v
}

fn to_column(y: &[BigInt], n: usize) -> Vec<(usize, usize, BigInt)> {
    y.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i / n, i % n, v.clone()))
        .collect()
}

fn cap_check(unknowns: usize, equations: usize) -> Result<()> {
    let size = unknowns as u128 * equations as u128;
    if size > LIFT_CAP {
        return Err(Error::CapExceeded { what: "chain-lift system size".into(), value: size, cap: LIFT_CAP });
    }
    Ok(())
}

/// Lifts `f ∈ Hom_U(X^{-p}, Z)` (values on generators) to a chain map
/// covering source degrees `range`.
pub fn lift_cocycle(x: &CompleteResolution, f: &[BigInt], p: i64, range: (i64, i64)) -> Result<ChainLift> {
    let g: &FiniteGroup = x.group();
    let n = g.order();
    let k_lo = range.0.min(-p);
    let k_hi = range.1.max(-p);
    let (w_lo, w_hi) = x.window();
    let need = (k_lo.min(k_lo + p), k_hi.max(k_hi + p));
    if need.0 < w_lo || need.1 > w_hi {
        return Err(Error::WindowTooSmall { need_lo: need.0, need_hi: need.1, have_lo: w_lo, have_hi: w_hi });
    }
    if f.len() != x.rank(-p) {
        return Err(Error::Dimension(format!("cocycle has {} values, X^{} has rank {}", f.len(), -p, x.rank(-p))));
    }
    let sign = if p.rem_euclid(2) == 0 { BigInt::from(1) } else { BigInt::from(-1) };
    let aug = x.augmentation();
    let b0 = aug
        .iter()
        .position(|e| *e == BigInt::from(1) || *e == BigInt::from(-1))
        .ok_or_else(|| Error::Unsupported("augmentation has no unit generator".into()))?;
    let mut maps = BTreeMap::new();
    let f0: Vec<Vec<(usize, usize, BigInt)>> = f
        .iter()
        .map(|v| {
            let c = v * &aug[b0];
            if c.is_zero() { vec![] } else { vec![(b0, g.identity(), c)] }
        })
        .collect();
    maps.insert(-p, ZGMatrix::new(x.rank(0), x.rank(-p), f0));

    // left: δ^{k+p} F^k(e_α) = (-1)^p F^{k+1}(δ^k e_α)
    for k in (k_lo..-p).rev() {
        let tgt = k + p;
        let d = x.differential(tgt);
        let dim = x.z_rank(tgt + 1);
        cap_check(x.z_rank(tgt), dim)?;
        let cols: Vec<Vec<BigInt>> = d.z_columns(g).iter().map(|c| dense(dim, c)).collect();
        let solver = ColumnSolver::new(dim, &cols);
        let next = &maps[&(k + 1)];
        let dk = x.differential(k);
        let mut out = Vec::with_capacity(x.rank(k));
        for col in &dk.entries {
            let v = z_vector(col, n, x.rank(k + 1));
            let w: Vec<BigInt> = ZGMatrix::apply(next, g, &v).into_iter().map(|t| t * &sign).collect();
            let y = solver.solve(&w).ok_or_else(|| Error::Internal(format!("no left lift at degree {k}")))?;
            out.push(to_column(&y, n));
        }
        maps.insert(k, ZGMatrix::new(x.rank(tgt), x.rank(k), out));
    }

    // right: Σ c·g·Y_β = (-1)^p δ^{k+p-1} F^{k-1}(e_α) over the columns of δ^{k-1}
    for k in -p + 1..=k_hi {
        let tgt = k + p;
        let zr = x.z_rank(tgt);
        let rk = x.rank(k);
        let rprev = x.rank(k - 1);
        cap_check(rk * zr, rprev * zr)?;
        let dprev = x.differential(k - 1);
        let rows = rprev * zr;
        let mut cols = vec![vec![BigInt::zero(); rows]; rk * zr];
        for (alpha, entries) in dprev.entries.iter().enumerate() {
            for (beta, h, c) in entries {
                for z in 0..zr {
                    let (b, y) = (z / n, z % n);
                    let r = alpha * zr + b * n + g.mul(*h, y);
                    cols[beta * zr + z][r] += c;
                }
            }
        }
        let solver = ColumnSolver::new(rows, &cols);
        let prev = &maps[&(k - 1)];
        let dt = x.differential(tgt - 1);
        let mut rhs = Vec::with_capacity(rows);
        for col in &prev.entries {
            let v = z_vector(col, n, x.rank(tgt - 1));
            rhs.extend(dt.apply(g, &v).into_iter().map(|t| t * &sign));
        }
        let y = solver.solve(&rhs).ok_or_else(|| Error::Internal(format!("no right lift at degree {k}")))?;
        let out = (0..rk).map(|beta| to_column(&y[beta * zr..(beta + 1) * zr], n)).collect();
        maps.insert(k, ZGMatrix::new(x.rank(tgt), rk, out));
    }
    Ok(ChainLift { p, maps })
}

/// Resolution degrees needed to cup a degree-`s` class with `Ĥ^{q-s}(U, Z)`.
pub fn cup_window(support: (i64, i64), s: i64, q: i64) -> (i64, i64) {
    let (lo, hi) = support;
    let p = q - s;
    let k_lo = (lo - q).min(-p);
    let k_hi = (hi - q).max(-p);
    let lows = [lo - q - 1, lo - s - 1, -p - 1, k_lo, k_lo + p];
    let highs = [hi - q + 1, hi - s + 1, -p + 1, k_hi, k_hi + p];
    (*lows.iter().min().unwrap(), *highs.iter().max().unwrap())
}

/// `x ↦ x ∪ a` from `Ĥ^{q-s}(U, Z)` to `Ĥ^q(U, C)`.
#[derive(Clone, Debug)]
pub struct CupMap {
    pub q: i64,
    pub source: AbGroup,
    pub target: AbGroup,
    pub matrix: IntMatrix,
}

impl Cohomology {
    /// Composes a degree-`s` cochain with a chain lift of degree `p`.
    pub fn compose_lift(&self, a: &[BigInt], s: i64, lift: &ChainLift) -> Result<Vec<BigInt>> {
        let q = s + lift.p;
        let src = self.layout(s)?;
        let dst = self.layout(q)?;
        let mut out = vec![BigInt::zero(); dst.dim()];
        for bd in &dst.blocks {
            let ba = src.block(bd.j).expect("same support");
            let f = lift
                .component(bd.k)
                .ok_or_else(|| Error::Internal(format!("chain lift lacks degree {}", bd.k)))?;
            let term = self.coefficients().term_ref(bd.j).expect("support lies in the complex");
            for (alpha, entries) in f.entries.iter().enumerate() {
                for (beta, h, c) in entries {
                    let a_beta = &a[ba.offset + beta * ba.n..ba.offset + (beta + 1) * ba.n];
                    let act = term.action(*h);
                    for i2 in 0..bd.n {
                        let mut acc = BigInt::zero();
                        for (i, v) in a_beta.iter().enumerate() {
                            if !v.is_zero() {
                                acc += act.get(i2, i) * v;
                            }
                        }
                        out[bd.offset + alpha * bd.n + i2] += acc * c;
                    }
                }
            }
        }
        dst.reduce(&mut out);
        Ok(out)
    }

    /// Cup product with a cochain `a` of degree `s` as a map on cohomology.
    pub fn cup_with_cochain(&self, groups: &TateGroups, a: &[BigInt], s: i64, q: i64) -> Result<CupMap> {
        let (lo, hi) = self.support().unwrap_or_default();
        if hi - lo > 1 {
            return Err(Error::Unsupported(format!(
                "cup products need coefficients in at most two adjacent degrees, found support [{lo}, {hi}]"
            )));
        }
        let need = cup_window((lo, hi), s, q);
        self.check_window(need)?;
        let p = q - s;
        let target = groups.require(q)?.group().clone();
        let integral = self.integral();
        let zg = integral.groups((p, p))?;
        let source = zg.group(p).clone();
        let mut cols = Vec::with_capacity(source.ngens());
        for i in 0..source.ngens() {
            let f = zg.representative(p, &unit(source.ngens(), i));
            let lift = lift_cocycle(&self.x, &f, p, (lo - q, hi - q))?;
            let y = self.compose_lift(a, s, &lift)?;
            let c = groups
                .class_of(q, &y)
                .ok_or_else(|| Error::Internal("cup product of cocycles is not a cocycle".into()))?;
            cols.push(c);
        }
        Ok(CupMap { q, matrix: IntMatrix::from_columns(target.ngens(), &cols), source, target })
    }
}

/// `Ĥ^{q-s}(U, Z) → Ĥ^q(U, C)`, `x ↦ x ∪ a`, for a class `a` of degree `s`.
/// `groups` must contain degrees `s` and `q`.
pub fn cup_with(coh: &Cohomology, groups: &TateGroups, a: &TateClass, q: i64) -> Result<CupMap> {
    groups.require(a.degree)?;
    let rep = groups.representative(a.degree, &a.coords);
    coh.cup_with_cochain(groups, &rep, a.degree, q)
}
