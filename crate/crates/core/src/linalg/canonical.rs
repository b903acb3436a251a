//! Canonical forms under the congruences that preserve the symmetric and
//! antisymmetric matrix families.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};

use super::{
    antisymmetric_part, c64, cluster_values, conj, diagonal, ensure_square, from_real, normal_eig,
    phase_of, project_out, svd, symmetric_part, unitarity_residual, CMatrix, CVector, LinalgError,
    C64,
};

/// Real orthogonal `q` with `qᵗ S q = diag(phases)`.
#[derive(Debug, Clone)]
pub struct RealSpectral {
    pub q: DMatrix<f64>,
    pub phases: Vec<C64>,
}

impl RealSpectral {
    pub fn q_complex(&self) -> CMatrix {
        from_real(&self.q)
    }
}

/// Unitary `a` with `aᵗ V a = blockdiag(α₁J, …, αₙJ)`.
#[derive(Debug, Clone)]
pub struct AntisymmetricForm {
    pub a: CMatrix,
    pub block_phases: Vec<C64>,
}

/// Orthonormal basis `(ξ₁, σξ₁, ξ₂, σξ₂, …)` in which a member of the embedded
/// quaternionic algebra is block-scalar; `values[j]` is the eigenvalue of the
/// j-th pair.
#[derive(Debug, Clone)]
pub struct SymplecticBasis {
    pub basis: CMatrix,
    pub values: Vec<C64>,
}

/// Spectral decomposition of a symmetric unitary by a real orthogonal matrix.
///
/// `S = A + iB` with `A`, `B` real symmetric and commuting. They are
/// diagonalized jointly: each eigenspace of one is split by the other, and the
/// alternation continues until neither splits a block further.
pub fn real_orthogonal_spectral(s: &CMatrix, tol: f64) -> Result<RealSpectral, LinalgError> {
    let n = ensure_square(s)?;
    let scale = s.norm().max(1.0);
    let residual = (s - s.transpose()).norm().max(unitarity_residual(s));
    if residual > tol * scale {
        return Err(LinalgError::NotSymmetricUnitary { residual });
    }
    if n == 0 {
        return Ok(RealSpectral { q: DMatrix::zeros(0, 0), phases: vec![] });
    }
    let a = s.map(|z| z.re);
    let b = s.map(|z| z.im);
    let a = (&a + a.transpose()) * 0.5;
    let b = (&b + b.transpose()) * 0.5;
    let threshold = 10.0 * tol * scale;
    let q = refine(&[a, b], DMatrix::identity(n, n), 0, 0, threshold);

    let qc = from_real(&q);
    let d = qc.transpose() * s * &qc;
    let raw: Vec<C64> = (0..n).map(|i| d[(i, i)]).collect();
    let (order, _) = cluster_values(&raw, threshold);
    let mut q = DMatrix::from_fn(n, n, |i, j| q[(i, order[j])]);
    for j in 0..n {
        let col = q.column(j);
        let lead = col.iter().cloned().fold(0.0f64, |m, x| if x.abs() > m.abs() + 1e-12 { x } else { m });
        if lead < 0.0 {
            let mut c = q.column_mut(j);
            c *= -1.0;
        }
    }
    let phases = order.iter().map(|&k| raw[k]).collect();
    let out = RealSpectral { q, phases };

    let qc = out.q_complex();
    let off = (qc.transpose() * s * &qc - diagonal(&out.phases)).norm();
    if off > threshold {
        return Err(LinalgError::NoConvergence);
    }
    Ok(out)
}

fn refine(mats: &[DMatrix<f64>], basis: DMatrix<f64>, which: usize, stalls: usize, thr: f64) -> DMatrix<f64> {
    let k = basis.ncols();
    if k <= 1 || stalls >= mats.len() {
        return basis;
    }
    let next = (which + 1) % mats.len();
    let m = basis.transpose() * &mats[which] * &basis;
    let m = (&m + m.transpose()) * 0.5;
    let (values, vectors) = real_symmetric_eig(m);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| values[x].total_cmp(&values[y]));

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(g) if values[i] - values[g[0]] <= thr => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    if groups.len() == 1 {
        return refine(mats, basis, next, stalls + 1, thr);
    }
    let mut cols = Vec::with_capacity(k);
    for g in groups {
        let sub = DMatrix::from_fn(k, g.len(), |i, j| vectors[(i, g[j])]);
        let refined = refine(mats, &basis * sub, next, 0, thr);
        cols.extend(refined.column_iter().map(|c| c.into_owned()));
    }
    DMatrix::from_columns(&cols)
}

/// Eigenvalues and orthonormal eigenvectors of a real symmetric matrix.
///
/// `SymmetricEigen` can return inaccurate eigenvectors when eigenvalues
/// repeat, so the real Schur form (diagonal for symmetric input) comes first
/// and the result with the smaller reconstruction error wins.
fn real_symmetric_eig(m: DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let residual = |vals: &DVector<f64>, vecs: &DMatrix<f64>| {
        (vecs * DMatrix::from_diagonal(vals) * vecs.transpose() - &m).norm()
    };
    let schur = [f64::EPSILON, 1e-14, 1e-12]
        .into_iter()
        .find_map(|eps| Schur::try_new(m.clone(), eps, 10_000))
        .map(|s| {
            let (q, t) = s.unpack();
            (t.diagonal(), q)
        });
    let eig = SymmetricEigen::new(m.clone());
    let fallback = (eig.eigenvalues, eig.eigenvectors);
    match schur {
        Some(s) if residual(&s.0, &s.1) <= residual(&fallback.0, &fallback.1) => s,
        _ => fallback,
    }
}

fn conj_vec(v: &CVector) -> CVector {
    v.map(|z| z.conj())
}

fn argmax_abs(v: &CVector) -> usize {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].norm() > v[best].norm() + 1e-12 {
            best = i;
        }
    }
    best
}

/// Columns `a₁, a₂, …` spanning the initial space of an antisymmetric partial
/// isometry `v`, grouped in pairs with `aᵗ v a = blockdiag(αⱼJ)`.
///
/// The antilinear map ρ(x) = conj(v x) squares to −1 on the initial space, so
/// every unit vector x there pairs with ρ(x) ⟂ x. Pair partners are
/// `−α·conj(v a₁)` with α chosen to make the partner's largest entry real
/// positive, which reproduces already-canonical inputs exactly.
fn antisymmetric_pairing(v: &CMatrix) -> (CMatrix, Vec<C64>) {
    let n = v.nrows();
    let p = v.adjoint() * v;
    let pairs = (p.trace().re / 2.0).round().max(0.0) as usize;
    let mut chosen: Vec<CVector> = Vec::with_capacity(2 * pairs);
    let mut phases = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let mut best: Option<(f64, CVector)> = None;
        for k in 0..n {
            let w = project_out(&p.column(k).into_owned(), &chosen);
            let norm = w.norm();
            if best.as_ref().map_or(true, |(b, _)| norm > *b + 1e-12) {
                best = Some((norm, w));
            }
        }
        let (_, w) = best.expect("pairs > 0 implies n > 0");
        let a1 = w.normalize();
        let t = conj_vec(&(v * &a1));
        let alpha = -phase_of(t[argmax_abs(&t)]).conj();
        chosen.push(a1);
        let a2 = project_out(&(t * (-alpha)), &chosen).normalize();
        chosen.push(a2);
        phases.push(alpha);
    }
    let a = if chosen.is_empty() { CMatrix::zeros(n, 0) } else { CMatrix::from_columns(&chosen) };
    (a, phases)
}

/// Unitary congruence of an antisymmetric unitary to `blockdiag(αⱼJ)`.
///
/// The squared product of the block phases equals `det V` (the product itself
/// is a Pfaffian of `V` up to sign); when the raw pairing yields `det(A)² ≠ 1`
/// the last pair is rephased to restore that.
pub fn youla_canonical(v: &CMatrix, tol: f64) -> Result<AntisymmetricForm, LinalgError> {
    let n = ensure_square(v)?;
    if n % 2 == 1 {
        return Err(LinalgError::OddDimension(n));
    }
    let scale = v.norm().max(1.0);
    let residual = (v + v.transpose()).norm().max(unitarity_residual(v));
    if residual > tol * scale {
        return Err(LinalgError::NotAntisymmetricUnitary { residual });
    }
    let (mut a, mut phases) = antisymmetric_pairing(v);
    if a.ncols() != n {
        return Err(LinalgError::NoConvergence);
    }
    let d = a.determinant();
    if n > 0 && (d * d - c64(1.0, 0.0)).norm() > 1e-9 {
        let beta = phase_of(d).conj().sqrt();
        let last = phases.len() - 1;
        for c in [2 * last, 2 * last + 1] {
            let mut col = a.column_mut(c);
            col *= beta;
        }
        phases[last] *= beta * beta;
    }
    Ok(AntisymmetricForm { a, block_phases: phases })
}

fn partial_isometry_residual(e: &CMatrix) -> f64 {
    (e * e.adjoint() * e - e).norm()
}

/// `C` with orthonormal columns such that `e = C Cᵗ`, for a symmetric partial
/// isometry `e` (a Takagi factorization with unit singular values).
pub fn symmetric_factor(e: &CMatrix, tol: f64) -> Result<CMatrix, LinalgError> {
    let n = ensure_square(e)?;
    let scale = e.norm().max(1.0);
    let residual = (e - e.transpose()).norm().max(partial_isometry_residual(e));
    if residual > tol * scale {
        return Err(LinalgError::NotPartialIsometry { shape: "symmetric", residual });
    }
    let s = svd(e, tol)?;
    let k = s.rank(0.5);
    if k == 0 {
        return Ok(CMatrix::zeros(n, 0));
    }
    let ur = s.u.columns(0, k).into_owned();
    // On the range of e, ξ ↦ e·conj(ξ) is an antiunitary involution; in the
    // basis ur it is c ↦ m·conj(c) with m symmetric unitary.
    let m = symmetric_part(&(ur.adjoint() * e * conj(&ur)));
    let rs = real_orthogonal_spectral(&m, tol.max(1e-12) * 10.0)?;
    let theta: Vec<C64> = rs.phases.iter().map(|p| p.sqrt()).collect();
    Ok(ur * rs.q_complex() * diagonal(&theta))
}

/// `C` with orthonormal columns such that `e = C e₀ Cᵗ`, `e₀ = blockdiag(J, …, J)`,
/// for an antisymmetric partial isometry `e`.
pub fn antisymmetric_factor(e: &CMatrix, tol: f64) -> Result<CMatrix, LinalgError> {
    ensure_square(e)?;
    let scale = e.norm().max(1.0);
    let residual = (e + e.transpose()).norm().max(partial_isometry_residual(e));
    if residual > tol * scale {
        return Err(LinalgError::NotPartialIsometry { shape: "antisymmetric", residual });
    }
    let (mut a, phases) = antisymmetric_pairing(&antisymmetric_part(e));
    for (j, alpha) in phases.iter().enumerate() {
        let beta = alpha.conj().sqrt();
        for c in [2 * j, 2 * j + 1] {
            let mut col = a.column_mut(c);
            col *= beta;
        }
    }
    Ok(conj(&a))
}

/// Block-scalar basis for a unitary `y` of the embedded quaternionic algebra
/// `{x : xᵗ = e₀⁻¹ x e₀}`.
///
/// σ(ξ) = e₀·conj(ξ) is antiunitary with σ² = −1 and preserves every eigenspace
/// of `y`, so each eigenspace splits into orthonormal pairs (ξ, σξ).
pub fn symplectic_eigenbasis(y: &CMatrix, e0: &CMatrix, tol: f64) -> Result<SymplecticBasis, LinalgError> {
    let n = ensure_square(y)?;
    if e0.shape() != (n, n) {
        return Err(LinalgError::NotInEmbeddedAlgebra { residual: f64::INFINITY });
    }
    if n % 2 == 1 {
        return Err(LinalgError::OddDimension(n));
    }
    let scale = y.norm().max(1.0);
    let residual = (y.transpose() - e0.adjoint() * y * e0).norm();
    if residual > tol * scale {
        return Err(LinalgError::NotInEmbeddedAlgebra { residual });
    }
    let spec = normal_eig(y, tol)?;
    let leak_tol = 1e-6;
    let mut columns: Vec<CVector> = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n / 2);
    for (k, range) in spec.clusters.iter().enumerate() {
        if range.len() % 2 == 1 {
            return Err(LinalgError::DegenerateBasis);
        }
        let uc = spec.basis.columns(range.start, range.len()).into_owned();
        let proj = &uc * uc.adjoint();
        let mut local: Vec<CVector> = Vec::with_capacity(range.len());
        for _ in 0..range.len() / 2 {
            let mut best: Option<(f64, CVector)> = None;
            for j in 0..uc.ncols() {
                let w = project_out(&uc.column(j).into_owned(), &local);
                let norm = w.norm();
                if best.as_ref().map_or(true, |(b, _)| norm > *b + 1e-12) {
                    best = Some((norm, w));
                }
            }
            let (norm, w) = best.ok_or(LinalgError::DegenerateBasis)?;
            if norm < 0.5 {
                return Err(LinalgError::DegenerateBasis);
            }
            let xi = w.normalize();
            let eta = e0 * conj_vec(&xi);
            if (&eta - &proj * &eta).norm() > leak_tol {
                return Err(LinalgError::DegenerateBasis);
            }
            local.push(xi);
            let eta = project_out(&eta, &local);
            if eta.norm() < 0.5 {
                return Err(LinalgError::DegenerateBasis);
            }
            local.push(eta.normalize());
            values.push(spec.cluster_value(k));
        }
        columns.extend(local);
    }
    Ok(SymplecticBasis { basis: CMatrix::from_columns(&columns), values })
}
