//! Homology of a three-term piece of a complex of presented abelian groups.

use num_bigint::BigInt;

use super::abgroup::{cokernel_of_columns, AbGroup};
use super::lattice::{kernel, Echelon};
use super::scalar::{big_vec, exact, lift_sparse, lift_vec, Checked, Scalar};
use super::matrix::IntMatrix;
use crate::error::Error;

/// `ker(d_out) / im(d_in)` with lifting data.
///
/// `group.basis_lift` holds ambient cycle representatives of the canonical
/// generators; [`Homology::class_of`] maps an ambient cycle back.
#[derive(Clone, Debug)]
pub struct Homology {
    pub group: AbGroup,
    cycles: Echelon<BigInt>,
    // canonical coordinates as functionals on cycle-basis coordinates
    cycle_coords: IntMatrix,
}

/// Input for [`homology_presented`]: the middle term is `Z^dim / span(mid_relators)`
/// and the target term is `Z^m / diag(out_moduli)` (zero = free summand).
pub(crate) struct Piece<'a> {
    pub dim: usize,
    pub d_in: &'a [Vec<(usize, BigInt)>],
    pub d_out_rows: &'a [Vec<(usize, BigInt)>],
    pub out_moduli: &'a [BigInt],
    pub mid_relators: &'a [Vec<(usize, BigInt)>],
}

type Solved = Option<(Echelon<BigInt>, Vec<Vec<BigInt>>)>;

fn cycles_and_relations<S: Scalar>(
    dim: usize,
    d_in: &[Vec<(usize, S)>],
    rows: &[Vec<(usize, S)>],
    moduli: &[S],
    mid: &[Vec<(usize, S)>],
) -> Checked<Solved> {
    let k = kernel(dim, rows, moduli)?;
    let cycles = Echelon::new(dim, k, false)?;
    let mut rels = Vec::with_capacity(d_in.len() + mid.len());
    let mut v = vec![S::zero(); dim];
    for b in d_in.iter().chain(mid) {
        if b.iter().all(|(_, x)| x.is_zero()) {
            continue;
        }
        v.iter_mut().for_each(|x| *x = S::zero());
        for (i, x) in b {
            v[*i] = v[*i].add(x)?;
        }
        match cycles.solve(&v)? {
            Some(y) => rels.push(big_vec(&y)),
            None => return Ok(None),
        }
    }
    Ok(Some((cycles.to_big(), rels)))
}

pub(crate) fn homology_presented(p: &Piece<'_>) -> Result<Homology, Error> {
    let solved = exact(
        || {
            cycles_and_relations::<i64>(
                p.dim,
                &lift_sparse(p.d_in)?,
                &lift_sparse(p.d_out_rows)?,
                &lift_vec(p.out_moduli)?,
                &lift_sparse(p.mid_relators)?,
            )
        },
        || cycles_and_relations(p.dim, p.d_in, p.d_out_rows, p.out_moduli, p.mid_relators),
    );
    let Some((cycles, rels)) = solved else {
        return Err(Error::NotAComplex(
            "an incoming boundary is not a cycle of the outgoing differential".into(),
        ));
    };
    let q = cokernel_of_columns(cycles.rank(), &rels);
    let basis = IntMatrix::from_columns(p.dim, &cycles.cols);
    let lift = &basis * &q.basis_lift;
    Ok(Homology {
        group: AbGroup { free_rank: q.free_rank, torsion: q.torsion, basis_lift: lift, coords: None },
        cycles,
        cycle_coords: q.coords.expect("cokernels carry coordinates"),
    })
}

impl Homology {
    pub fn ambient_dim(&self) -> usize {
        self.cycles.dim
    }

    /// Canonical coordinates of the class of `x`, or `None` if `x` is not a
    /// cycle.
    pub fn class_of(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.cycles.solve(x).ok()??;
        Some(self.group.reduce(&self.cycle_coords.mul_vec(&y)))
    }

    pub fn is_cycle(&self, x: &[BigInt]) -> bool {
        matches!(self.cycles.solve(x), Ok(Some(_)))
    }

    /// Ambient representative of a class given in canonical coordinates.
    pub fn representative(&self, c: &[BigInt]) -> Vec<BigInt> {
        self.group.lift(c)
    }

    pub fn generator(&self, i: usize) -> Vec<BigInt> {
        self.group.basis_lift.column(i)
    }
}

/// Homology of `Z^n --d_out--> Z^m` modulo the image of `d_in: Z^a -> Z^n`.
///
/// Rejects inputs with `d_out · d_in ≠ 0`.
pub fn homology_at(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<Homology, Error> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::Dimension(format!(
            "d_in has {} rows but d_out has {} columns",
            d_in.rows(),
            d_out.cols()
        )));
    }
    if !(d_out * d_in).is_zero() {
        return Err(Error::NotAComplex("d_out * d_in is nonzero".into()));
    }
    let rows = d_out.sparse_rows();
    let cols = d_in.sparse_columns();
    homology_presented(&Piece {
        dim: d_in.rows(),
        d_in: &cols,
        d_out_rows: &rows,
        out_moduli: &vec![BigInt::from(0); d_out.rows()],
        mid_relators: &[],
    })
}
