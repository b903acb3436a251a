//! Helpers shared by the integration tests: random elements, and triple
//! products recomputed from their defining formulas.

#![allow(dead_code)]

use jbtriple::linalg::{c64, random_gaussian, CMatrix, CVector, C64};
use jbtriple::triples::{Element, Payload, SystemKind, TripleSystem};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn systems(names: &[&str]) -> Vec<TripleSystem> {
    names.iter().map(|n| system(n)).collect()
}

/// `M3`, `M2x3`, `M3s`, `M4a`, `Spin5`.
pub fn system(name: &str) -> TripleSystem {
    let num = |s: &str| s.parse::<usize>().unwrap_or_else(|_| panic!("bad system name {name}"));
    if let Some(d) = name.strip_prefix("Spin") {
        return TripleSystem::spin(num(d)).unwrap();
    }
    let body = name.strip_prefix('M').unwrap_or_else(|| panic!("bad system name {name}"));
    if let Some(n) = body.strip_suffix('s') {
        return TripleSystem::symmetric(num(n)).unwrap();
    }
    if let Some(n) = body.strip_suffix('a') {
        return TripleSystem::antisymmetric(num(n)).unwrap();
    }
    match body.split_once('x') {
        Some((r, c)) => TripleSystem::rectangular(num(r), num(c)).unwrap(),
        None => TripleSystem::square(num(body)).unwrap(),
    }
}

/// A Gaussian element of `sys` (not a tripotent).
pub fn random_element<R: Rng>(sys: &TripleSystem, rng: &mut R) -> Element {
    match sys.kind() {
        SystemKind::Spin { dim } => {
            let v = CVector::from_fn(dim, |_, _| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                c64(re, im)
            });
            Element::from_vector(*sys, v).unwrap()
        }
        kind => {
            let (r, c) = kind.shape();
            let form = kind.form().unwrap();
            Element::from_matrix(*sys, form.project(&random_gaussian(rng, r, c))).unwrap()
        }
    }
}

/// `{x,y,z}` recomputed from the defining formulas: `½(xy*z + zy*x)` for
/// matrices, `⟨x,y⟩z + ⟨z,y⟩x − ⟨x,z̄⟩ȳ` for spin factors.
pub fn oracle_product(x: &Element, y: &Element, z: &Element) -> Payload {
    match (x.payload(), y.payload(), z.payload()) {
        (Payload::Matrix(a), Payload::Matrix(b), Payload::Matrix(c)) => {
            Payload::Matrix((a * b.adjoint() * c + c * b.adjoint() * a) * c64(0.5, 0.0))
        }
        (Payload::Vector(a), Payload::Vector(b), Payload::Vector(c)) => {
            let ip = |p: &CVector, q: &CVector| -> C64 { p.iter().zip(q.iter()).map(|(s, t)| s * t.conj()).sum() };
            let bar = |p: &CVector| p.map(|s| s.conj());
            Payload::Vector(c * ip(a, b) + a * ip(c, b) - bar(b) * ip(a, &bar(c)))
        }
        _ => panic!("mixed payloads"),
    }
}

pub fn payload_distance(p: &Payload, q: &Payload) -> f64 {
    match (p, q) {
        (Payload::Matrix(a), Payload::Matrix(b)) => (a - b).norm(),
        (Payload::Vector(a), Payload::Vector(b)) => (a - b).norm(),
        _ => f64::INFINITY,
    }
}

/// Unitary with determinant `sign` (±1).
pub fn unitary_with_det<R: Rng>(rng: &mut R, n: usize, sign: f64) -> CMatrix {
    let u = jbtriple::linalg::random_unitary(rng, n);
    let d = u.determinant();
    let mut u = u * C64::from_polar(1.0, -d.arg() / n as f64);
    if sign < 0.0 {
        let mut col = u.column_mut(0);
        col *= c64(-1.0, 0.0);
    }
    u
}
