//! Chains inside the Peirce-2 corner of a matrix tripotent.

use super::diagonal::{diagonal_chain, INVARIANT_TOL};
use crate::corner::Corner;
use crate::error::{Error, Result};
use crate::linalg::{kron_identity2, normal_eig, real_orthogonal_spectral, symplectic_eigenbasis, CMatrix, C64};
use crate::triples::MatrixForm;

/// Determinant of `y` relative to the corner unit.
pub(crate) fn corner_invariant(c: &Corner, y: &CMatrix) -> C64 {
    y.determinant() / c.unit.determinant()
}

pub(crate) fn invariant_admissible(form: MatrixForm, iota: C64) -> bool {
    let one = C64::new(1.0, 0.0);
    match form {
        MatrixForm::Antisymmetric => (iota - one).norm() <= INVARIANT_TOL,
        _ => (iota - one).norm() <= INVARIANT_TOL || (iota + one).norm() <= INVARIANT_TOL,
    }
}

/// Self-adjoint-order chain from the corner unitary `y` to the corner unit,
/// in corner coordinates, endpoints included.
///
/// `y` is moved to diagonal position by a unit-fixing automorphism of the
/// corner (unitary conjugation, real orthogonal congruence, or the block-scalar
/// frame of the quaternionic picture), the diagonal chain is built there and
/// transported back.
pub(crate) fn corner_chain(c: &Corner, y: &CMatrix, tol: f64) -> Result<Vec<CMatrix>> {
    let iota = corner_invariant(c, y);
    if !invariant_admissible(c.form, iota) {
        return Err(Error::InvariantObstruction(format!("relative determinant {iota:.6} is not admissible")));
    }
    let mut chain: Vec<CMatrix> = match c.form {
        MatrixForm::General => {
            let spec = normal_eig(y, tol)?;
            let s = &spec.basis;
            let sa = s.adjoint();
            diagonal_chain(&spec.values)?.into_iter().map(|x| s * x * &sa).collect()
        }
        MatrixForm::Symmetric => {
            let rs = real_orthogonal_spectral(y, tol)?;
            let q = rs.q_complex();
            let qt = q.transpose();
            diagonal_chain(&rs.phases)?.into_iter().map(|x| c.form.project(&(&q * x * &qt))).collect()
        }
        MatrixForm::Antisymmetric => {
            let e0 = &c.unit;
            let z = y * e0.adjoint();
            let sb = symplectic_eigenbasis(&z, e0, tol)?;
            let b = &sb.basis;
            let ba = b.adjoint();
            diagonal_chain(&sb.values)?
                .into_iter()
                .map(|x| c.form.project(&(b * kron_identity2(&x) * &ba * e0)))
                .collect()
        }
    };
    chain[0] = y.clone();
    let last = chain.len() - 1;
    if last > 0 {
        chain[last] = c.unit.clone();
    }
    Ok(chain)
}
