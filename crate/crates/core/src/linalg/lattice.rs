//! Column-echelon lattices, integer kernels and linear-system solving.

use num_bigint::BigInt;

use super::scalar::{big_vec, exact, lift_sparse, lift_vec, Checked, Scalar};

/// Reduces the nonzero `vals[members]` to a single nonzero entry by
/// repeated floor-division steps against the entry of least absolute value.
/// `op(i, p, q)` must apply `column_i -= q * column_p` to whatever payload
/// the caller tracks. Returns the surviving index.
fn gcd_reduce<S: Scalar>(
    vals: &mut [S],
    members: &mut Vec<usize>,
    mut op: impl FnMut(usize, usize, &S) -> Checked<()>,
) -> Checked<Option<usize>> {
    members.retain(|&i| !vals[i].is_zero());
    loop {
        if members.is_empty() {
            return Ok(None);
        }
        let mut p = members[0];
        for &i in members.iter() {
            if vals[i].abs_cmp(&vals[p]).is_lt() {
                p = i;
            }
        }
        if members.len() == 1 {
            return Ok(Some(p));
        }
        let pv = vals[p].clone();
        for &i in members.iter() {
            if i == p {
                continue;
            }
            let q = vals[i].div_floor(&pv)?;
            vals[i].sub_mul(&q, &pv)?;
            op(i, p, &q)?;
        }
        members.retain(|&i| !vals[i].is_zero());
    }
}

fn axpy<S: Scalar>(x: &mut [S], q: &S, y: &[S]) -> Checked<()> {
    for (a, b) in x.iter_mut().zip(y) {
        a.sub_mul(q, b)?;
    }
    Ok(())
}

fn pair_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &T) {
    assert_ne!(i, j);
    if i < j {
        let (a, b) = v.split_at_mut(j);
        (&mut a[i], &b[0])
    } else {
        let (a, b) = v.split_at_mut(i);
        (&mut b[0], &a[j])
    }
}

/// A lattice basis in column-echelon form: column `j` is zero above row
/// `pivots[j]`, positive at it, and the pivot rows strictly increase.
#[derive(Clone, Debug)]
pub(crate) struct Echelon<S> {
    pub dim: usize,
    pub cols: Vec<Vec<S>>,
    pub pivots: Vec<usize>,
    /// When tracked: `cols[j] = Σ_i coefs[j][i] · generator_i`.
    pub coefs: Option<Vec<Vec<S>>>,
}

impl<S: Scalar> Echelon<S> {
    pub fn new(dim: usize, gens: Vec<Vec<S>>, track: bool) -> Checked<Self> {
        let ngens = gens.len();
        let mut active: Vec<(Vec<S>, Vec<S>)> = gens
            .into_iter()
            .enumerate()
            .map(|(i, g)| {
                let mut c = Vec::new();
                if track {
                    c = vec![S::zero(); ngens];
                    c[i] = S::from_i64(1);
                }
                (g, c)
            })
            .filter(|(g, _)| g.iter().any(|x| !x.is_zero()))
            .collect();
        let mut cols = Vec::new();
        let mut coefs = Vec::new();
        let mut pivots = Vec::new();
        for r in 0..dim {
            if active.is_empty() {
                break;
            }
            let mut vals: Vec<S> = active.iter().map(|(g, _)| g[r].clone()).collect();
            let mut members: Vec<usize> = (0..active.len()).collect();
            let piv = gcd_reduce(&mut vals, &mut members, |i, p, q| {
                let (ti, sp) = pair_mut(&mut active, i, p);
                axpy(&mut ti.0[r..], q, &sp.0[r..])?;
                if track {
                    axpy(&mut ti.1, q, &sp.1)?;
                }
                Ok(())
            })?;
            if let Some(p) = piv {
                let (mut g, mut c) = active.swap_remove(p);
                if g[r].is_negative() {
                    for x in g.iter_mut().chain(c.iter_mut()) {
                        *x = x.neg()?;
                    }
                }
                cols.push(g);
                coefs.push(c);
                pivots.push(r);
            }
            active.retain(|(g, _)| g[r + 1..].iter().any(|x| !x.is_zero()));
        }
        Ok(Echelon { dim, cols, pivots, coefs: track.then_some(coefs) })
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    /// Coordinates of `x` in this basis, if `x` lies in the lattice.
    pub fn solve(&self, x: &[S]) -> Checked<Option<Vec<S>>> {
        let mut r = x.to_vec();
        let mut y = Vec::with_capacity(self.cols.len());
        let mut clean = 0;
        for (c, &p) in self.cols.iter().zip(&self.pivots) {
            if r[clean..p].iter().any(|v| !v.is_zero()) {
                return Ok(None);
            }
            clean = p + 1;
            if r[p].is_zero() {
                y.push(S::zero());
                continue;
            }
            let q = r[p].div_floor(&c[p])?;
            let check = q.mul(&c[p])?;
            if check != r[p] {
                return Ok(None);
            }
            axpy(&mut r[p..], &q, &c[p..])?;
            y.push(q);
        }
        if r.iter().any(|v| !v.is_zero()) {
            return Ok(None);
        }
        Ok(Some(y))
    }

    /// Solves `Σ z_i · generator_i = x` using the tracked coefficients.
    pub fn solve_generators(&self, x: &[S]) -> Checked<Option<Vec<S>>> {
        let coefs = self.coefs.as_ref().expect("echelon built without tracking");
        let Some(y) = self.solve(x)? else { return Ok(None) };
        let n = coefs.first().map_or(0, Vec::len);
        let mut z = vec![S::zero(); n];
        for (yj, c) in y.iter().zip(coefs) {
            let neg = yj.neg()?;
            axpy(&mut z, &neg, c)?;
        }
        Ok(Some(z))
    }

    pub fn to_big(&self) -> Echelon<BigInt> {
        Echelon {
            dim: self.dim,
            cols: self.cols.iter().map(|c| big_vec(c)).collect(),
            pivots: self.pivots.clone(),
            coefs: self.coefs.as_ref().map(|cs| cs.iter().map(|c| big_vec(c)).collect()),
        }
    }
}

/// Lattice basis of `{x ∈ Z^n : row_r · x ≡ 0 (mod moduli[r])}`; a zero
/// modulus means exact equality.
pub(crate) fn kernel<S: Scalar>(
    n: usize,
    rows: &[Vec<(usize, S)>],
    moduli: &[S],
) -> Checked<Vec<Vec<S>>> {
    assert_eq!(rows.len(), moduli.len());
    let mut cols: Vec<Vec<S>> = (0..n)
        .map(|i| {
            let mut v = vec![S::zero(); n];
            v[i] = S::from_i64(1);
            v
        })
        .collect();
    for (row, m) in rows.iter().zip(moduli) {
        if cols.is_empty() {
            break;
        }
        let mut vals = Vec::with_capacity(cols.len() + 1);
        for x in &cols {
            let mut acc = S::zero();
            for (j, a) in row {
                if !x[*j].is_zero() {
                    acc = acc.add(&a.mul(&x[*j])?)?;
                }
            }
            if !m.is_zero() {
                acc = acc.modulo(m)?;
            }
            vals.push(acc);
        }
        if vals.iter().all(Scalar::is_zero) {
            continue;
        }
        // the relator column m·e_r enters with zero x-part
        let pseudo = cols.len();
        let mut pseudo_x: Option<Vec<S>> = None;
        let mut members: Vec<usize> = (0..cols.len()).collect();
        if !m.is_zero() {
            vals.push(m.clone());
            members.push(pseudo);
        }
        let piv = gcd_reduce(&mut vals, &mut members, |i, p, q| {
            if p == pseudo {
                return match &pseudo_x {
                    Some(px) => axpy(&mut cols[i], q, px),
                    None => Ok(()),
                };
            }
            if i == pseudo {
                let px = pseudo_x.get_or_insert_with(|| vec![S::zero(); n]);
                return axpy(px, q, &cols[p]);
            }
            let (ti, sp) = pair_mut(&mut cols, i, p);
            axpy(ti, q, sp)
        })?;
        let piv = piv.expect("a nonzero value survives reduction");
        if piv != pseudo {
            cols.swap_remove(piv);
        }
        if let Some(px) = pseudo_x {
            if piv != pseudo && px.iter().any(|v| !v.is_zero()) {
                cols.push(px);
            }
        }
    }
    Ok(cols)
}

/// Big-integer front end for [`kernel`] returning a lattice basis in
/// column-echelon form.
pub(crate) fn kernel_lattice(
    n: usize,
    rows: &[Vec<(usize, BigInt)>],
    moduli: &[BigInt],
) -> Echelon<BigInt> {
    exact(
        || {
            let r = lift_sparse::<i64>(rows)?;
            let m = lift_vec::<i64>(moduli)?;
            let k = kernel(n, &r, &m)?;
            Ok(Echelon::new(n, k, false)?.to_big())
        },
        || {
            let k = kernel(n, rows, moduli)?;
            Echelon::new(n, k, false)
        },
    )
}

pub(crate) fn echelon_big(dim: usize, gens: &[Vec<BigInt>], track: bool) -> Echelon<BigInt> {
    exact(
        || {
            let g: Vec<Vec<i64>> = gens.iter().map(|v| lift_vec(v)).collect::<Checked<_>>()?;
            Ok(Echelon::new(dim, g, track)?.to_big())
        },
        || Echelon::new(dim, gens.to_vec(), track),
    )
}

/// Integer solutions of `A y = b` for a matrix given by its columns.
pub(crate) struct ColumnSolver {
    echelon: Echelon<BigInt>,
    ncols: usize,
}

impl ColumnSolver {
    pub fn new(dim: usize, columns: &[Vec<BigInt>]) -> Self {
        ColumnSolver { echelon: echelon_big(dim, columns, true), ncols: columns.len() }
    }

    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let e = &self.echelon;
        let mut y = exact(
            || {
                let small = Echelon::<i64> {
                    dim: e.dim,
                    cols: e.cols.iter().map(|c| lift_vec(c)).collect::<Checked<_>>()?,
                    pivots: e.pivots.clone(),
                    coefs: Some(
                        e.coefs.as_ref().unwrap().iter().map(|c| lift_vec(c)).collect::<Checked<_>>()?,
                    ),
                };
                Ok(small.solve_generators(&lift_vec::<i64>(b)?)?.map(|v| big_vec(&v)))
            },
            || e.solve_generators(b),
        )?;
        // an all-zero matrix tracks no coefficients
        y.resize(self.ncols, BigInt::from(0));
        Some(y)
    }
}

/// Eliminates unit pivots of an echelon basis: `steps` record `x <- x - x[p] c`
/// substitutions, the remaining relators live on the surviving rows.
pub(crate) struct UnitReduction<S> {
    pub steps: Vec<(usize, Vec<(usize, S)>)>,
    pub survivors: Vec<usize>,
    pub rest: Vec<Vec<S>>,
}

pub(crate) fn unit_reduce<S: Scalar>(dim: usize, mut cols: Vec<Vec<S>>, pivots: &[usize]) -> Checked<UnitReduction<S>> {
    let mut eliminated = vec![false; dim];
    let mut steps = Vec::new();
    let mut dead = vec![false; cols.len()];
    for j in (0..cols.len()).rev() {
        let p = pivots[j];
        if !cols[j][p].is_one() {
            continue;
        }
        let c = cols[j].clone();
        for (i, other) in cols.iter_mut().enumerate().take(j) {
            if dead[i] || other[p].is_zero() {
                continue;
            }
            let q = other[p].clone();
            for (a, b) in other.iter_mut().zip(&c) {
                a.sub_mul(&q, b)?;
            }
        }
        dead[j] = true;
        eliminated[p] = true;
        let sparse = c
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .collect();
        steps.push((p, sparse));
    }
    let survivors: Vec<usize> = (0..dim).filter(|&i| !eliminated[i]).collect();
    let rest = cols
        .into_iter()
        .zip(dead)
        .filter(|(_, d)| !d)
        .map(|(c, _)| survivors.iter().map(|&i| c[i].clone()).collect())
        .collect();
    Ok(UnitReduction { steps, survivors, rest })
}

pub(crate) fn to_big_reduction<S: Scalar>(r: UnitReduction<S>) -> UnitReduction<BigInt> {
    UnitReduction {
        steps: r
            .steps
            .into_iter()
            .map(|(p, c)| (p, c.into_iter().map(|(i, v)| (i, v.to_big())).collect()))
            .collect(),
        survivors: r.survivors,
        rest: r.rest.iter().map(|c| big_vec(c)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    proptest::proptest! {
        #[test]
        fn kernel_matches_brute_force(
            n in 1usize..=3,
            rows in proptest::collection::vec(
                (proptest::collection::vec(-4i64..=4, 3), 0i64..=5),
                1..=3,
            ),
        ) {
            let sparse: Vec<Vec<(usize, BigInt)>> = rows
                .iter()
                .map(|(r, _)| (0..n).filter(|&j| r[j] != 0).map(|j| (j, BigInt::from(r[j]))).collect())
                .collect();
            let moduli: Vec<BigInt> = rows.iter().map(|&(_, m)| BigInt::from(m)).collect();
            let lattice = kernel_lattice(n, &sparse, &moduli);
            let b = 6i64;
            let width = (2 * b + 1) as usize;
            for code in 0..width.pow(n as u32) {
                let mut c = code;
                let x: Vec<i64> = (0..n).map(|_| { let d = (c % width) as i64 - b; c /= width; d }).collect();
                let inside = rows.iter().all(|(r, m)| {
                    let v: i64 = (0..n).map(|j| r[j] * x[j]).sum();
                    if *m == 0 { v == 0 } else { v.rem_euclid(*m) == 0 }
                });
                let member = lattice.solve(&big(&x)).unwrap().is_some();
                proptest::prop_assert_eq!(inside, member, "x = {:?}", x);
            }
        }
    }

    #[test]
    fn echelon_membership() {
        let e = echelon_big(2, &[big(&[2, 0]), big(&[0, 3])], false);
        assert!(e.solve(&big(&[4, 9])).unwrap().is_some());
        assert!(e.solve(&big(&[1, 0])).unwrap().is_none());
        let e = echelon_big(3, &[big(&[2, 4, 6]), big(&[3, 6, 9])], false);
        assert_eq!(e.rank(), 1);
        assert_eq!(e.cols[0], big(&[1, 2, 3]));
    }

    #[test]
    fn kernel_with_moduli() {
        // x + y ≡ 0 (mod 3)
        let rows = vec![vec![(0, BigInt::from(1)), (1, BigInt::from(1))]];
        let k = kernel_lattice(2, &rows, &[BigInt::from(3)]);
        assert_eq!(k.rank(), 2);
        assert!(k.solve(&big(&[1, 2])).unwrap().is_some());
        assert!(k.solve(&big(&[1, 0])).unwrap().is_none());
        assert!(k.solve(&big(&[3, 0])).unwrap().is_some());
    }

    #[test]
    fn exact_kernel() {
        // [0, 2] on Z^2
        let rows = vec![vec![(1, BigInt::from(2))]];
        let k = kernel_lattice(2, &rows, &[BigInt::from(0)]);
        assert_eq!(k.rank(), 1);
        assert_eq!(k.cols[0], big(&[1, 0]));
    }

    #[test]
    fn solver() {
        let s = ColumnSolver::new(2, &[big(&[2, 1]), big(&[0, 3])]);
        let y = s.solve(&big(&[4, 5])).unwrap();
        assert_eq!(y, big(&[2, 1]));
        assert!(s.solve(&big(&[1, 0])).is_none());
    }
}
