//! Diagonal approximation `P → P ⊗ P` on the resolution half of a complete
//! resolution (`P_i = X^{-i}`), with the diagonal action on tensor products.
//!
//! The Z-basis of `P_i ⊗ P_j` is `u ⊗ v` for Z-basis vectors `u`, `v`,
//! indexed `u·rank_Z(P_j) + v`; degree `n` stacks the blocks `(i, n-i)` for
//! `i = 0..=n`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::maps::unit;
use super::{Cohomology, CupMap, TateClass, TateGroups};
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::linalg::lattice::ColumnSolver;
use crate::linalg::IntMatrix;
use crate::resolutions::CompleteResolution;

const DIAGONAL_CAP: u128 = 40_000_000;

#[derive(Clone, Debug)]
pub struct DiagonalApproximation {
    depth: usize,
    zr: Vec<usize>,
    /// `components[n][α]`: `Δ_n(e_α)` as a Z-vector over degree-`n` blocks.
    components: Vec<Vec<Vec<BigInt>>>,
}

fn offsets(zr: &[usize], n: usize) -> Vec<usize> {
    let mut off = Vec::with_capacity(n + 2);
    let mut acc = 0;
    for i in 0..=n {
        off.push(acc);
        acc += zr[i] * zr[n - i];
    }
    off.push(acc);
    off
}

/// Action of `h` on a Z-index of a free module.
fn act(g: &FiniteGroup, h: usize, u: usize) -> usize {
    let n = g.order();
    (u / n) * n + g.mul(h, u % n)
}

impl DiagonalApproximation {
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `Δ_n(e_α)` restricted to the block `P_i ⊗ P_{n-i}`, as a
    /// `rank_Z(P_i) × rank_Z(P_{n-i})` coefficient matrix.
    pub fn block(&self, n: usize, alpha: usize, i: usize) -> IntMatrix {
        let off = offsets(&self.zr, n);
        let (a, b) = (self.zr[i], self.zr[n - i]);
        let v = &self.components[n][alpha][off[i]..off[i + 1]];
        IntMatrix::from_entries(a, b, v.to_vec())
    }

    pub fn component(&self, n: usize, alpha: usize) -> &[BigInt] {
        &self.components[n][alpha]
    }

    /// Rechecks the augmentation normalization and the chain-map equations.
    pub fn verify(&self, x: &CompleteResolution) -> bool {
        let g = x.group();
        let ord = g.order();
        let eps = x.augmentation();
        // (ε ⊗ ε) Δ_0 = ε
        let ok0 = self.components[0].iter().enumerate().all(|(alpha, v)| {
            let mut s = BigInt::zero();
            for (idx, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    let (u, w) = (idx / self.zr[0], idx % self.zr[0]);
                    s += c * &eps[u / ord] * &eps[w / ord];
                }
            }
            s == eps[alpha]
        });
        ok0 && (1..=self.depth).all(|n| {
            let d = x.differential(-(n as i64));
            self.components[n].iter().enumerate().all(|(alpha, v)| {
                let lhs = tensor_differential(x, &self.zr, n, v);
                let rhs = self.image_of(g, n - 1, &d.entries[alpha]);
                lhs == rhs
            })
        })
    }

    /// `Δ_n` applied to `Σ c·h·e_β`.
    fn image_of(&self, g: &FiniteGroup, n: usize, col: &[(usize, usize, BigInt)]) -> Vec<BigInt> {
        let off = offsets(&self.zr, n);
        let mut out = vec![BigInt::zero(); off[n + 1]];
        for (beta, h, c) in col {
            let v = &self.components[n][*beta];
            for i in 0..=n {
                let w = self.zr[n - i];
                for idx in off[i]..off[i + 1] {
                    let x = &v[idx];
                    if x.is_zero() {
                        continue;
                    }
                    let (u, t) = ((idx - off[i]) / w, (idx - off[i]) % w);
                    out[off[i] + act(g, *h, u) * w + act(g, *h, t)] += x * c;
                }
            }
        }
        out
    }
}

/// `d(u ⊗ v) = du ⊗ v + (-1)^i u ⊗ dv` on a degree-`n` Z-vector.
fn tensor_differential(x: &CompleteResolution, zr: &[usize], n: usize, v: &[BigInt]) -> Vec<BigInt> {
    let g = x.group();
    let src = offsets(zr, n);
    let dst = offsets(zr, n - 1);
    let mut out = vec![BigInt::zero(); dst[n]];
    let zc: Vec<Vec<Vec<(usize, BigInt)>>> =
        (0..=n).map(|i| if i == 0 { vec![] } else { x.differential(-(i as i64)).z_columns(g) }).collect();
    for i in 0..=n {
        let j = n - i;
        let w = zr[j];
        for idx in src[i]..src[i + 1] {
            let c = &v[idx];
            if c.is_zero() {
                continue;
            }
            let (u, t) = ((idx - src[i]) / w, (idx - src[i]) % w);
            if i >= 1 {
                for (u2, a) in &zc[i][u] {
                    out[dst[i - 1] + u2 * w + t] += a * c;
                }
            }
            if j >= 1 {
                let w2 = zr[j - 1];
                let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                for (t2, a) in &zc[j][t] {
                    out[dst[i] + u * w2 + t2] += a * c * &sign;
                }
            }
        }
    }
    out
}

/// Components `Δ_0, …, Δ_depth`, found by integer solving and audited.
pub fn diagonal_approximation(x: &CompleteResolution, depth: usize) -> Result<DiagonalApproximation> {
    let (lo, _) = x.window();
    if (depth as i64) + 1 > -lo {
        return Err(Error::WindowTooSmall { need_lo: -(depth as i64) - 1, need_hi: 0, have_lo: lo, have_hi: -lo });
    }
    let g = x.group();
    let ord = g.order();
    let zr: Vec<usize> = (0..=depth).map(|i| x.z_rank(-(i as i64))).collect();
    let eps = x.augmentation();
    let b0 = eps
        .iter()
        .position(|e| e.is_one())
        .ok_or_else(|| Error::Unsupported("augmentation has no generator with value 1".into()))?;
    let id = g.identity();
    let c0: Vec<Vec<BigInt>> = (0..x.rank(0))
        .map(|a| {
            let mut v = vec![BigInt::zero(); zr[0] * zr[0]];
            if eps[a].is_one() {
                v[(a * ord + id) * zr[0] + a * ord + id] = BigInt::one();
            } else {
                v[(b0 * ord + id) * zr[0] + b0 * ord + id] = eps[a].clone();
            }
            v
        })
        .collect();
    let mut diag = DiagonalApproximation { depth, zr: zr.clone(), components: vec![c0] };
    for n in 1..=depth {
        let src = offsets(&zr, n);
        let dst = offsets(&zr, n - 1);
        let size = src[n + 1] as u128 * dst[n] as u128;
        if size > DIAGONAL_CAP {
            return Err(Error::CapExceeded { what: "diagonal lifting system".into(), value: size, cap: DIAGONAL_CAP });
        }
        let cols: Vec<Vec<BigInt>> =
            (0..src[n + 1]).map(|i| tensor_differential(x, &zr, n, &unit(src[n + 1], i))).collect();
        let solver = ColumnSolver::new(dst[n], &cols);
        let d = x.differential(-(n as i64));
        let mut comps = Vec::with_capacity(d.cols);
        for col in &d.entries {
            let rhs = diag.image_of(g, n - 1, col);
            let y = solver
                .solve(&rhs)
                .ok_or_else(|| Error::Internal(format!("no diagonal lift in degree {n}")))?;
            comps.push(y);
        }
        diag.components.push(comps);
    }
    if !diag.verify(x) {
        return Err(Error::Internal("diagonal approximation fails its audit".into()));
    }
    Ok(diag)
}

/// `x ↦ x ∪ a` on ordinary cohomology (`q - s ≥ 0`, `s ≥ 0`) through the
/// diagonal, for coefficients concentrated in degree 0.
pub fn cup_via_diagonal(
    coh: &Cohomology,
    groups: &TateGroups,
    diag: &DiagonalApproximation,
    a: &TateClass,
    q: i64,
) -> Result<CupMap> {
    let s = a.degree;
    let p = q - s;
    if s < 0 || p < 0 {
        return Err(Error::Unsupported("the diagonal realizes cup products in nonnegative degrees only".into()));
    }
    if coh.support().is_some_and(|sup| sup != (0, 0)) {
        return Err(Error::Unsupported("diagonal cup products need coefficients in degree 0".into()));
    }
    if q as usize > diag.depth() {
        return Err(Error::InvalidArgument(format!("diagonal depth {} is below degree {q}", diag.depth())));
    }
    let x = coh.resolution();
    let g = x.group();
    let target = groups.require(q)?.group().clone();
    let rep = groups.representative(s, &a.coords);
    let integral = coh.integral();
    let zg = integral.groups((p, p))?;
    let source = zg.group(p).clone();
    let la = coh.layout(s)?;
    let lq = coh.layout(q)?;
    let m = la.blocks.first().map_or(0, |b| b.n);
    let term = coh.coefficients().term(0);
    let (pu, su) = (p as usize, s as usize);
    let off = offsets(&diag.zr, q as usize);
    let w = diag.zr[su];
    let ord = g.order();
    let mut cols = Vec::with_capacity(source.ngens());
    for gen in 0..source.ngens() {
        let f = zg.representative(p, &unit(source.ngens(), gen));
        let mut out = vec![BigInt::zero(); lq.dim()];
        for alpha in 0..x.rank(-q) {
            let v = &diag.components[q as usize][alpha];
            for idx in off[pu]..off[pu + 1] {
                let c = &v[idx];
                if c.is_zero() {
                    continue;
                }
                let (u, t) = ((idx - off[pu]) / w, (idx - off[pu]) % w);
                let fu = &f[u / ord];
                if fu.is_zero() {
                    continue;
                }
                let (b, h) = (t / ord, t % ord);
                let ab = &rep[b * m..(b + 1) * m];
                let act = term.action(h);
                for i2 in 0..m {
                    let mut acc = BigInt::zero();
                    for (i, y) in ab.iter().enumerate() {
                        acc += act.get(i2, i) * y;
                    }
                    out[alpha * m + i2] += acc * c * fu;
                }
            }
        }
        lq.reduce(&mut out);
        let class = groups
            .class_of(q, &out)
            .ok_or_else(|| Error::Internal("diagonal cup product is not a cocycle".into()))?;
        cols.push(class);
    }
    Ok(CupMap { q, matrix: IntMatrix::from_columns(target.ngens(), &cols), source, target })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::gcomplexes::concentrate;
    use crate::gmodules::trivial_cyclic;
    use crate::groups::make_cyclic;
    use crate::resolutions::{build_complete_resolution, Engine, DEFAULT_BAR_CAP};
    use crate::tate::cup_with;

    #[test]
    fn degree_zero_is_generator_squared() {
        let g = Arc::new(make_cyclic(3));
        let x = build_complete_resolution(&g, 3, Engine::Periodic, DEFAULT_BAR_CAP).unwrap();
        let d = diagonal_approximation(&x, 2).unwrap();
        let b = d.block(0, 0, 0);
        assert_eq!(b.get(0, 0), &BigInt::one());
        assert_eq!(b.entries().iter().filter(|v| !v.is_zero()).count(), 1);
    }

    #[test]
    fn z2_periodic_depth_four() {
        let g = Arc::new(make_cyclic(2));
        let x = build_complete_resolution(&g, 5, Engine::Periodic, DEFAULT_BAR_CAP).unwrap();
        let d = diagonal_approximation(&x, 4).unwrap();
        assert!(d.verify(&x));
        for n in 0..=4 {
            assert!(d.component(n, 0).iter().all(|v| v.magnitude() <= &1u32.into()), "degree {n}");
        }
    }

    #[test]
    fn trivial_group_components() {
        let g = Arc::new(make_cyclic(1));
        let x = build_complete_resolution(&g, 3, Engine::Periodic, DEFAULT_BAR_CAP).unwrap();
        let d = diagonal_approximation(&x, 2).unwrap();
        assert!(d.verify(&x));
    }

    #[test]
    fn agrees_with_chain_lifts_up_to_sign() {
        for n in [2usize, 3, 4] {
            let g = Arc::new(make_cyclic(n));
            let x = build_complete_resolution(&g, 6, Engine::Periodic, DEFAULT_BAR_CAP).unwrap();
            let coh = Cohomology::new(&x, &concentrate(&trivial_cyclic(&g, 0), 0)).unwrap();
            let t = coh.groups((0, 4)).unwrap();
            let d = diagonal_approximation(&x, 4).unwrap();
            let a = t.generator(2, 0);
            for q in [2i64, 3, 4] {
                let m1 = cup_with(&coh, &t, &a, q).unwrap();
                let m2 = cup_via_diagonal(&coh, &t, &d, &a, q).unwrap();
                let neg = crate::linalg::reduce_map(&-&m2.matrix, &m2.target);
                assert!(m1.matrix == m2.matrix || m1.matrix == neg, "n={n} q={q}");
            }
        }
    }
}
