//! Smith normal form with optional transform tracking.

use num_bigint::BigInt;

use super::matrix::IntMatrix;
use super::scalar::{big_vec, exact, lift_vec, Checked, Scalar};

pub(crate) struct Track {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
}

pub(crate) struct SnfParts<S> {
    pub diag: Vec<S>,
    pub u: Option<Vec<Vec<S>>>,
    pub u_inv: Option<Vec<Vec<S>>>,
    pub v: Option<Vec<Vec<S>>>,
}

fn identity<S: Scalar>(n: usize) -> Vec<Vec<S>> {
    (0..n)
        .map(|i| {
            let mut r = vec![S::zero(); n];
            r[i] = S::from_i64(1);
            r
        })
        .collect()
}

fn row_sub<S: Scalar>(m: &mut [Vec<S>], i: usize, t: usize, q: &S) -> Checked<()> {
    let (src, dst) = if i < t {
        let (a, b) = m.split_at_mut(t);
        (&b[0], &mut a[i])
    } else {
        let (a, b) = m.split_at_mut(i);
        (&a[t], &mut b[0])
    };
    for (x, y) in dst.iter_mut().zip(src.iter()) {
        x.sub_mul(q, y)?;
    }
    Ok(())
}

fn col_sub<S: Scalar>(m: &mut [Vec<S>], j: usize, t: usize, q: &S) -> Checked<()> {
    for row in m.iter_mut() {
        if !row[t].is_zero() {
            let y = row[t].clone();
            row[j].sub_mul(q, &y)?;
        }
    }
    Ok(())
}

fn swap_cols<S>(m: &mut [Vec<S>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// Diagonalises `a` in place. Pivot: least absolute value among the
/// remaining entries, first in row-major order on ties.
pub(crate) fn smith<S: Scalar>(mut a: Vec<Vec<S>>, cols: usize, track: &Track) -> Checked<SnfParts<S>> {
    let rows = a.len();
    let mut u = track.u.then(|| identity::<S>(rows));
    let mut u_inv = track.u_inv.then(|| identity::<S>(rows));
    let mut v = track.v.then(|| identity::<S>(cols));
    let n = rows.min(cols);
    let mut diag = Vec::with_capacity(n);

    // row_i -= q row_t, mirrored on U and U^{-1}
    macro_rules! row_op {
        ($i:expr, $t:expr, $q:expr) => {{
            row_sub(&mut a, $i, $t, $q)?;
            if let Some(u) = u.as_mut() {
                row_sub(u, $i, $t, $q)?;
            }
            if let Some(ui) = u_inv.as_mut() {
                let nq = $q.neg()?;
                col_sub(ui, $t, $i, &nq)?;
            }
        }};
    }
    macro_rules! col_op {
        ($j:expr, $t:expr, $q:expr) => {{
            col_sub(&mut a, $j, $t, $q)?;
            if let Some(v) = v.as_mut() {
                col_sub(v, $j, $t, $q)?;
            }
        }};
    }

    'outer: for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if a[i][j].abs_cmp(&a[bi][bj]).is_ge() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'outer };
            if pi != t {
                a.swap(pi, t);
                if let Some(u) = u.as_mut() {
                    u.swap(pi, t);
                }
                if let Some(ui) = u_inv.as_mut() {
                    swap_cols(ui, pi, t);
                }
            }
            if pj != t {
                swap_cols(&mut a, pj, t);
                if let Some(v) = v.as_mut() {
                    swap_cols(v, pj, t);
                }
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&p)?;
                    row_op!(i, t, &q);
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&p)?;
                    col_op!(j, t, &q);
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !a[i][j].is_zero() && !a[i][j].modulo(&p)?.is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                // row_t += row_i brings the offending entry into the pivot row
                Some(i) => {
                    let m1 = S::from_i64(-1);
                    row_op!(t, i, &m1);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = x.neg()?;
            }
            if let Some(u) = u.as_mut() {
                for x in u[t].iter_mut() {
                    *x = x.neg()?;
                }
            }
            if let Some(ui) = u_inv.as_mut() {
                for row in ui.iter_mut() {
                    row[t] = row[t].neg()?;
                }
            }
        }
        diag.push(a[t][t].clone());
    }
    while diag.len() < n {
        diag.push(S::zero());
    }
    Ok(SnfParts { diag, u, u_inv, v })
}

pub(crate) fn smith_big(a: &IntMatrix, track: &Track) -> SnfParts<BigInt> {
    let rows = a.to_rows();
    let cols = a.cols();
    let conv = |m: Option<Vec<Vec<i64>>>| m.map(|m| m.iter().map(|r| big_vec(r)).collect());
    exact(
        || {
            let small: Vec<Vec<i64>> = rows.iter().map(|r| lift_vec(r)).collect::<Checked<_>>()?;
            let p = smith(small, cols, track)?;
            Ok(SnfParts { diag: big_vec(&p.diag), u: conv(p.u), u_inv: conv(p.u_inv), v: conv(p.v) })
        },
        || smith(rows.clone(), cols, track),
    )
}

pub(crate) fn to_matrix(m: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
    let r = m.len();
    IntMatrix::from_entries(r, cols, m.into_iter().flatten().collect())
}

/// `U · A · V = S` with `S` diagonal, `d_1 | d_2 | …`, zeros trailing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub diagonal: Vec<BigInt>,
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let p = smith_big(a, &Track { u: true, u_inv: false, v: true });
    let s = IntMatrix::diagonal(a.rows(), a.cols(), &p.diag);
    SnfResult {
        u: to_matrix(p.u.unwrap(), a.rows()),
        s,
        v: to_matrix(p.v.unwrap(), a.cols()),
        diagonal: p.diag,
    }
}
