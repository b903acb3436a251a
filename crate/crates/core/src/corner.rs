//! Isometric identification of the Peirce-2 space of a matrix tripotent `e`
//! with a square matrix algebra in which `e` becomes a standard unit.
//!
//! With `L`, `R` having orthonormal columns, `x ↦ L* x R` carries E₂(e) onto
//! k×k matrices of the same family and preserves the triple product, and
//! `y ↦ L y R*` inverts it on E₂(e).

use crate::error::{Error, Result};
use crate::linalg::{
    antisymmetric_factor, conj, orthonormal_complement, svd, symmetric_factor, symplectic_unit, CMatrix, C64,
};
use crate::triples::MatrixForm;

#[derive(Debug, Clone)]
pub(crate) struct Corner {
    pub l: CMatrix,
    pub r: CMatrix,
    pub form: MatrixForm,
    /// Image of `e`: `I` for general and symmetric corners, `blockdiag(J, …)`
    /// for antisymmetric ones.
    pub unit: CMatrix,
}

impl Corner {
    pub fn of(e: &CMatrix, form: MatrixForm, tol: f64) -> Result<Corner> {
        let (l, r) = match form {
            MatrixForm::General => {
                let s = svd(e, tol)?;
                let k = s.rank(0.5);
                (s.u.columns(0, k).into_owned(), s.v.columns(0, k).into_owned())
            }
            MatrixForm::Symmetric => {
                let c = symmetric_factor(e, tol)?;
                let r = conj(&c);
                (c, r)
            }
            MatrixForm::Antisymmetric => {
                let c = antisymmetric_factor(e, tol)?;
                let r = conj(&c);
                (c, r)
            }
        };
        let k = l.ncols();
        let unit = match form {
            MatrixForm::Antisymmetric => symplectic_unit(k / 2),
            _ => CMatrix::identity(k, k),
        };
        Ok(Corner { l, r, form, unit })
    }

    pub fn size(&self) -> usize {
        self.l.ncols()
    }

    pub fn to(&self, x: &CMatrix) -> CMatrix {
        self.form.project(&(self.l.adjoint() * x * &self.r))
    }

    pub fn from(&self, y: &CMatrix) -> CMatrix {
        self.form.project(&(&self.l * y * self.r.adjoint()))
    }
}

/// Extends a partial isometry `y` of the given family (square) to a unitary of
/// the same family, placing `β` times a standard unit on the complement.
///
/// Returns the unitary and the size of the complement block, so
/// `det = β^size · (det of the unscaled completion)`.
pub(crate) fn complete(y: &CMatrix, form: MatrixForm, beta: C64, tol: f64) -> Result<(CMatrix, usize)> {
    let n = y.nrows();
    let (block, size) = match form {
        MatrixForm::General => {
            let s = svd(y, tol)?;
            let k = s.rank(0.5);
            let uc = s.u.columns(k, n - k).into_owned();
            let vc = s.v.columns(k, n - k).into_owned();
            (&uc * vc.adjoint(), n - k)
        }
        MatrixForm::Symmetric => {
            let c = symmetric_factor(y, tol)?;
            let w = orthonormal_complement(&c);
            (&w * w.transpose(), w.ncols())
        }
        MatrixForm::Antisymmetric => {
            let c = antisymmetric_factor(y, tol)?;
            let w = orthonormal_complement(&c);
            if w.ncols() % 2 == 1 {
                return Err(Error::NoUnitaryExists(format!("odd complement of size {}", w.ncols())));
            }
            (&w * symplectic_unit(w.ncols() / 2) * w.transpose(), w.ncols())
        }
    };
    let v = form.project(&(y + block * beta));
    let residual = (&v * v.adjoint() - CMatrix::identity(n, n)).norm();
    if residual > 1e3 * tol.max(1e-12) * (n as f64).max(1.0) {
        return Err(Error::CompletionFailed { residual });
    }
    Ok((v, size))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, from_rows, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn general_corner_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = random_unitary(&mut rng, 4);
        let v = random_unitary(&mut rng, 3);
        let e = u.columns(0, 2) * v.columns(0, 2).adjoint();
        let c = Corner::of(&e, MatrixForm::General, 1e-9).unwrap();
        assert_eq!(c.size(), 2);
        assert!((c.to(&e) - CMatrix::identity(2, 2)).norm() < 1e-12);
        let y = random_unitary(&mut rng, 2);
        assert!((c.to(&c.from(&y)) - &y).norm() < 1e-12);
    }

    #[test]
    fn symmetric_and_antisymmetric_units() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = random_unitary(&mut rng, 5);
        let e = w.columns(0, 3) * w.columns(0, 3).transpose();
        let c = Corner::of(&e, MatrixForm::Symmetric, 1e-9).unwrap();
        assert!((c.to(&e) - &c.unit).norm() < 1e-10);
        assert!((c.from(&c.unit) - &e).norm() < 1e-10);

        let e = w.columns(0, 4) * symplectic_unit(2) * w.columns(0, 4).transpose();
        let c = Corner::of(&e, MatrixForm::Antisymmetric, 1e-9).unwrap();
        assert_eq!(c.size(), 4);
        assert!((c.to(&e) - &c.unit).norm() < 1e-10);
    }

    #[test]
    fn completion_scales_determinant() {
        let one = c64(1., 0.);
        let beta = c64(0., 1.);
        let y = from_rows(&[vec![one, c64(0., 0.)], vec![c64(0., 0.), c64(0., 0.)]]);
        for form in [MatrixForm::General, MatrixForm::Symmetric] {
            let (v1, _) = complete(&y, form, one, 1e-9).unwrap();
            let (v, size) = complete(&y, form, beta, 1e-9).unwrap();
            assert_eq!(size, 1);
            assert!((v.determinant() - beta * v1.determinant()).norm() < 1e-12);
            assert!((v[(0, 0)] - one).norm() < 1e-12);
        }

        let j = symplectic_unit(1);
        let mut y = CMatrix::zeros(4, 4);
        y.view_mut((0, 0), (2, 2)).copy_from(&j);
        let (v1, _) = complete(&y, MatrixForm::Antisymmetric, one, 1e-9).unwrap();
        let (v, size) = complete(&y, MatrixForm::Antisymmetric, beta, 1e-9).unwrap();
        assert_eq!(size, 2);
        assert!((v.determinant() - beta * beta * v1.determinant()).norm() < 1e-12);
    }
}
