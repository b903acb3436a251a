use std::f64::consts::TAU;
use std::ops::Range;

use nalgebra::Schur;

use super::{c64, ensure_square, CMatrix, LinalgError, C64, MAX_SWEEPS};

/// Unitary eigenbasis of a normal matrix with clustered eigenvalues.
///
/// `values[j]` belongs to column `j` of `basis`; each cluster is a contiguous
/// index range of values that agree within the clustering threshold.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub basis: CMatrix,
    pub values: Vec<C64>,
    pub clusters: Vec<Range<usize>>,
}

impl SpectralData {
    /// Mean of the values in cluster `k`.
    pub fn cluster_value(&self, k: usize) -> C64 {
        let r = self.clusters[k].clone();
        let len = r.len() as f64;
        self.values[r].iter().sum::<C64>() / len
    }

    /// `U f(Λ) U*`, with `f` evaluated once per cluster so equal eigenvalues
    /// always receive equal images.
    pub fn apply(&self, f: impl Fn(C64) -> C64) -> CMatrix {
        let n = self.basis.nrows();
        let mut d = vec![c64(0.0, 0.0); n];
        for k in 0..self.clusters.len() {
            let fv = f(self.cluster_value(k));
            for j in self.clusters[k].clone() {
                d[j] = fv;
            }
        }
        let scaled = CMatrix::from_fn(n, n, |i, j| self.basis[(i, j)] * d[j]);
        scaled * self.basis.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        let n = self.basis.nrows();
        let scaled = CMatrix::from_fn(n, n, |i, j| self.basis[(i, j)] * self.values[j]);
        scaled * self.basis.adjoint()
    }
}

fn sort_key(z: C64, threshold: f64) -> (f64, f64) {
    let r = z.norm();
    if r <= threshold {
        return (0.0, r);
    }
    let mut a = z.arg();
    if a < 0.0 {
        a += TAU;
    }
    // Values just below 2π belong with those just above 0.
    if TAU - a <= threshold / r {
        a = 0.0;
    }
    (a, r)
}

/// Groups `values` into clusters of points within `threshold` of the cluster's
/// first member, then orders clusters and members by (argument in [0, 2π),
/// magnitude).
///
/// Returns the permutation (new position → old index) and the cluster ranges
/// in the permuted order.
pub fn cluster_values(values: &[C64], threshold: f64) -> (Vec<usize>, Vec<Range<usize>>) {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    let key = |i: usize| sort_key(values[i], threshold);
    idx.sort_by(|&a, &b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal));

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &idx {
        match groups.iter_mut().find(|g| (values[g[0]] - values[i]).norm() <= threshold) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }

    let mut order = Vec::with_capacity(values.len());
    let mut clusters = Vec::with_capacity(groups.len());
    for g in groups {
        let start = order.len();
        order.extend(g);
        clusters.push(start..order.len());
    }
    (order, clusters)
}

/// Spectral decomposition of a normal matrix via the complex Schur form.
///
/// For a normal matrix the triangular Schur factor is diagonal, so the Schur
/// vectors are eigenvectors. Eigenvalues within `10·tol·max(1, ‖A‖)` are
/// clustered.
pub fn normal_eig(a: &CMatrix, tol: f64) -> Result<SpectralData, LinalgError> {
    let n = ensure_square(a)?;
    if n == 0 {
        return Ok(SpectralData { basis: a.clone(), values: vec![], clusters: vec![] });
    }
    let scale = a.norm().max(1.0);
    let commutator = (a * a.adjoint() - a.adjoint() * a).norm();
    if commutator > tol * scale * scale {
        return Err(LinalgError::NotNormal { residual: commutator });
    }
    // Schur stalls on nearly scalar input, which is also the easy case.
    let mu = a.trace() / C64::from(n as f64);
    if (a - CMatrix::identity(n, n) * mu).norm() <= tol * scale {
        return Ok(SpectralData { basis: CMatrix::identity(n, n), values: vec![mu; n], clusters: vec![0..n] });
    }
    // The reconstruction check below bounds what a looser deflation costs.
    let schur = [f64::EPSILON, 1e-14, 1e-12, tol * 1e-2]
        .into_iter()
        .find_map(|eps| Schur::try_new(a.clone(), eps, MAX_SWEEPS))
        .ok_or(LinalgError::NoConvergence)?;
    let (q, t) = schur.unpack();
    let raw: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let (order, clusters) = cluster_values(&raw, 10.0 * tol * scale);
    let basis = CMatrix::from_fn(n, n, |i, j| q[(i, order[j])]);
    let values = order.iter().map(|&k| raw[k]).collect();
    let out = SpectralData { basis, values, clusters };
    let residual = (out.reconstruct() - a).norm();
    if residual > 10.0 * tol * scale {
        return Err(LinalgError::NoConvergence);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_rows, random_unitary, unitarity_residual};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(x: f64) -> C64 {
        c64(x, 0.0)
    }

    #[test]
    fn identity_is_one_cluster() {
        let s = normal_eig(&CMatrix::identity(2, 2), 1e-9).unwrap();
        assert_eq!(s.clusters, vec![0..2]);
        assert!(s.values.iter().all(|v| (v - r(1.0)).norm() < 1e-14));
    }

    #[test]
    fn diagonal_phases_sorted_by_argument() {
        let a = from_rows(&[vec![c64(0., 1.), r(0.)], vec![r(0.), c64(0., -1.)]]);
        let s = normal_eig(&a, 1e-9).unwrap();
        assert!((s.values[0] - c64(0., 1.)).norm() < 1e-14);
        assert!((s.values[1] - c64(0., -1.)).norm() < 1e-14);
        // basis is a permutation/phase matrix
        for i in 0..2 {
            for j in 0..2 {
                let m = s.basis[(i, j)].norm();
                assert!(m < 1e-12 || (m - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn swap_symmetry_eigenvectors() {
        let a = from_rows(&[vec![r(0.), r(-1.)], vec![r(-1.), r(0.)]]);
        let s = normal_eig(&a, 1e-9).unwrap();
        // sorted: 1 (arg 0) then −1 (arg π)
        assert!((s.values[0] - r(1.)).norm() < 1e-12);
        assert!((s.values[1] - r(-1.)).norm() < 1e-12);
        let v = s.basis.column(0);
        // eigenvector for 1 is ∝ (1, −1)
        assert!((v[0] + v[1]).norm() < 1e-12);
        let w = s.basis.column(1);
        assert!((w[0] - w[1]).norm() < 1e-12);
    }

    #[test]
    fn random_unitaries_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..9 {
            let u = random_unitary(&mut rng, n);
            let s = normal_eig(&u, 1e-9).unwrap();
            assert!(unitarity_residual(&s.basis) < 1e-10);
            assert!((s.reconstruct() - &u).norm() < 1e-10);
        }
    }

    #[test]
    fn rejects_non_normal() {
        let a = from_rows(&[vec![r(0.), r(1.)], vec![r(0.), r(0.)]]);
        assert!(matches!(normal_eig(&a, 1e-9), Err(LinalgError::NotNormal { .. })));
    }

    #[test]
    fn clusters_wrap_around_zero_argument() {
        let eps = 1e-12;
        let vals = [C64::from_polar(1.0, -eps), c64(-1., 0.), C64::from_polar(1.0, eps)];
        let (order, clusters) = cluster_values(&vals, 1e-8);
        assert_eq!(clusters.len(), 2);
        assert_eq!(clusters[0].len(), 2);
        assert_eq!(order[2], 1);
    }
}
