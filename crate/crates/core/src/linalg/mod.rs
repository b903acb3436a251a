//! Dense complex linear algebra: spectral data of normal matrices, singular
//! value decompositions, and the canonical forms used to bring unitaries of the
//! symmetric and antisymmetric families into diagonal position.
//!
//! Matrices are `nalgebra` dynamic matrices over `Complex<f64>`. The Schur,
//! SVD and Hermitian eigen solvers come from `nalgebra`; everything built on
//! top of them lives here.

mod canonical;
mod spectral;

pub use canonical::{
    antisymmetric_factor, real_orthogonal_spectral, symmetric_factor, symplectic_eigenbasis,
    youla_canonical, AntisymmetricForm, RealSpectral, SymplecticBasis,
};
pub use spectral::{cluster_values, normal_eig, SpectralData};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

const MAX_SWEEPS: usize = 1_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not normal (commutator residual {residual:.3e})")]
    NotNormal { residual: f64 },
    #[error("eigen/singular value solver did not converge")]
    NoConvergence,
    #[error("matrix is not a symmetric unitary (residual {residual:.3e})")]
    NotSymmetricUnitary { residual: f64 },
    #[error("matrix is not an antisymmetric unitary (residual {residual:.3e})")]
    NotAntisymmetricUnitary { residual: f64 },
    #[error("matrix is not a {shape} partial isometry (residual {residual:.3e})")]
    NotPartialIsometry { shape: &'static str, residual: f64 },
    #[error("odd dimension {0} admits no antisymmetric unitary")]
    OddDimension(usize),
    #[error("matrix is not in the embedded quaternionic algebra (residual {residual:.3e})")]
    NotInEmbeddedAlgebra { residual: f64 },
    #[error("Gram-Schmidt breakdown while building a symplectic basis")]
    DegenerateBasis,
}

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Builds a matrix from row-major nested rows.
pub fn from_rows(rows: &[Vec<C64>]) -> CMatrix {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    CMatrix::from_fn(r, c, |i, j| rows[i][j])
}

pub fn from_real(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| c64(x, 0.0))
}

pub fn conj(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn ensure_square(m: &CMatrix) -> Result<usize, LinalgError> {
    if m.nrows() != m.ncols() {
        return Err(LinalgError::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if !is_finite(m) {
        return Err(LinalgError::NonFinite);
    }
    Ok(m.nrows())
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// max(‖m*m − I‖, ‖mm* − I‖) in Frobenius norm.
pub fn unitarity_residual(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let id = CMatrix::identity(n, n);
    let a = (m.adjoint() * m - &id).norm();
    let b = (m * m.adjoint() - &id).norm();
    a.max(b)
}

pub fn symmetric_part(m: &CMatrix) -> CMatrix {
    (m + m.transpose()).scale(0.5)
}

pub fn antisymmetric_part(m: &CMatrix) -> CMatrix {
    (m - m.transpose()).scale(0.5)
}

/// `blockdiag(J, …, J)` with `pairs` copies of J = [[0,1],[−1,0]].
pub fn symplectic_unit(pairs: usize) -> CMatrix {
    let mut m = CMatrix::zeros(2 * pairs, 2 * pairs);
    for k in 0..pairs {
        m[(2 * k, 2 * k + 1)] = c64(1.0, 0.0);
        m[(2 * k + 1, 2 * k)] = c64(-1.0, 0.0);
    }
    m
}

/// `m ⊗ I₂`: each entry becomes a scalar 2×2 block.
pub fn kron_identity2(m: &CMatrix) -> CMatrix {
    CMatrix::from_fn(2 * m.nrows(), 2 * m.ncols(), |i, j| {
        if i % 2 == j % 2 {
            m[(i / 2, j / 2)]
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

pub fn diagonal(values: &[C64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_column_slice(values))
}

/// Unit complex number with the phase of `z` (1 for z = 0).
pub fn phase_of(z: C64) -> C64 {
    let r = z.norm();
    if r == 0.0 {
        c64(1.0, 0.0)
    } else {
        z / r
    }
}

/// Thin singular value decomposition `A = U diag(σ) V*` with σ non-increasing.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    /// Number of singular values above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.singular_values.iter().filter(|&&s| s > threshold).count()
    }
}

pub fn svd(a: &CMatrix, tol: f64) -> Result<Svd, LinalgError> {
    if !is_finite(a) {
        return Err(LinalgError::NonFinite);
    }
    let (r, c) = a.shape();
    let k = r.min(c);
    if k == 0 {
        return Ok(Svd { u: CMatrix::zeros(r, 0), singular_values: vec![], v: CMatrix::zeros(c, 0) });
    }
    // nalgebra's complex SVD occasionally returns a visibly wrong factorization
    // (seen on rank-one symmetric 3x3 input), so every candidate is checked
    // and the adjoint and a Hermitian-eigen route serve as fallbacks.
    let limit = 1e3 * f64::EPSILON * a.norm().max(1.0) * (k as f64);
    let eps = (tol * 1e-6).max(f64::EPSILON);
    let candidates: [&dyn Fn() -> Option<Svd>; 3] = [
        &|| nalgebra_svd(a, eps),
        &|| nalgebra_svd(&a.adjoint(), eps).map(|s| Svd { u: s.v, singular_values: s.singular_values, v: s.u }),
        &|| gram_svd(a, tol),
    ];
    candidates
        .iter()
        .filter_map(|f| f())
        .find(|s| svd_residual(a, s) <= limit)
        .ok_or(LinalgError::NoConvergence)
}

fn svd_residual(a: &CMatrix, s: &Svd) -> f64 {
    let sigma = CMatrix::from_diagonal(&CVector::from_iterator(s.singular_values.len(), s.singular_values.iter().map(|&x| c64(x, 0.0))));
    let k = s.singular_values.len();
    let ortho = (s.u.adjoint() * &s.u - CMatrix::identity(k, k)).norm().max((s.v.adjoint() * &s.v - CMatrix::identity(k, k)).norm());
    (&s.u * sigma * s.v.adjoint() - a).norm().max(ortho)
}

/// Sorts the thin factors by non-increasing singular value.
fn sorted_svd(u: CMatrix, values: Vec<f64>, v: CMatrix) -> Svd {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    Svd {
        u: CMatrix::from_fn(u.nrows(), order.len(), |i, j| u[(i, order[j])]),
        singular_values: order.iter().map(|&i| values[i]).collect(),
        v: CMatrix::from_fn(v.nrows(), order.len(), |i, j| v[(i, order[j])]),
    }
}

fn nalgebra_svd(a: &CMatrix, eps: f64) -> Option<Svd> {
    let dec = nalgebra::SVD::try_new(a.clone(), true, true, eps, MAX_SWEEPS)?;
    let v = dec.v_t?.adjoint();
    Some(sorted_svd(dec.u?, dec.singular_values.iter().cloned().collect(), v))
}

/// SVD from the eigenvectors of the Gram matrix `A*A` (or `AA*` when `A` is
/// wide). Singular values are re-measured as `‖A vⱼ‖`, which keeps them
/// accurate in absolute terms even where the Gram eigenvalues are not.
fn gram_svd(a: &CMatrix, tol: f64) -> Option<Svd> {
    let (r, c) = a.shape();
    if r < c {
        return gram_svd(&a.adjoint(), tol).map(|s| Svd { u: s.v, singular_values: s.singular_values, v: s.u });
    }
    let g = a.adjoint() * a;
    let g = (&g + g.adjoint()) * c64(0.5, 0.0);
    let spec = normal_eig(&g, tol).ok()?;
    let values: Vec<f64> = (0..c).map(|j| (a * spec.basis.column(j)).norm()).collect();
    let s = sorted_svd(CMatrix::zeros(r, c), values, spec.basis);
    let floor = 1e-13 * s.singular_values.first().copied().unwrap_or(0.0).max(1.0);
    let mut cols: Vec<CVector> = Vec::with_capacity(c);
    for (j, &sigma) in s.singular_values.iter().enumerate() {
        if sigma > floor {
            let w = project_out(&(a * s.v.column(j) / c64(sigma, 0.0)), &cols);
            cols.push(w.normalize());
        }
    }
    let filled = cols.len();
    if filled < c {
        let basis = if cols.is_empty() { CMatrix::zeros(r, 0) } else { CMatrix::from_columns(&cols) };
        let extra = orthonormal_complement(&basis);
        cols.extend(extra.column_iter().take(c - filled).map(|col| col.into_owned()));
    }
    Some(Svd { u: CMatrix::from_columns(&cols), ..s })
}

/// Orthonormal basis (as columns) of the orthogonal complement of the span of
/// the orthonormal columns of `basis`, inside ℂⁿ.
///
/// Candidates are the standard basis vectors; at each step the one with the
/// largest remaining component is taken, which keeps the result deterministic
/// and well conditioned.
pub fn orthonormal_complement(basis: &CMatrix) -> CMatrix {
    let n = basis.nrows();
    let mut chosen: Vec<CVector> = (0..basis.ncols()).map(|j| basis.column(j).into_owned()).collect();
    let need = n.saturating_sub(chosen.len());
    let mut out = Vec::with_capacity(need);
    for _ in 0..need {
        let mut best: Option<(f64, CVector)> = None;
        for k in 0..n {
            let mut v = CVector::zeros(n);
            v[k] = c64(1.0, 0.0);
            let w = project_out(&v, &chosen);
            let norm = w.norm();
            if best.as_ref().map_or(true, |(b, _)| norm > *b + 1e-12) {
                best = Some((norm, w));
            }
        }
        let (norm, w) = best.expect("n > 0 when a complement vector is needed");
        let w = project_out(&(w / C64::from(norm)), &chosen);
        let w = w.normalize();
        chosen.push(w.clone());
        out.push(w);
    }
    if out.is_empty() {
        CMatrix::zeros(n, 0)
    } else {
        CMatrix::from_columns(&out)
    }
}

/// Removes from `v` its components along the orthonormal vectors `basis`.
pub fn project_out(v: &CVector, basis: &[CVector]) -> CVector {
    let mut w = v.clone();
    for b in basis {
        let coeff = b.dotc(&w);
        w -= b * coeff;
    }
    w
}

/// Complex Gaussian matrix with independent entries of unit variance.
pub fn random_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re * s, im * s)
    })
}

/// Haar-distributed unitary via QR of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = random_gaussian(rng, n, n);
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let ph = phase_of(r[(j, j)]);
        let mut col = q.column_mut(j);
        col *= ph;
    }
    q
}

/// Haar-distributed real orthogonal matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let mut col = q.column_mut(j);
            col *= -1.0;
        }
    }
    q
}

pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    C64::from_polar(1.0, t)
}
