//! Finite-dimensional JB*-triples: rectangular, symmetric and antisymmetric
//! matrices with {a,b,c} = ½(ab*c + cb*a), and spin factors with
//! {x,y,z} = ⟨x,y⟩z + ⟨z,y⟩x − ⟨x,z̄⟩ȳ.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{antisymmetric_part, c64, conj, is_finite, operator_norm, symmetric_part, CMatrix, CVector, C64};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemKind {
    Rectangular { rows: usize, cols: usize },
    Symmetric { n: usize },
    Antisymmetric { n: usize },
    Spin { dim: usize },
}

/// Linear constraint defining a matrix family inside the full matrix space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixForm {
    General,
    Symmetric,
    Antisymmetric,
}

impl MatrixForm {
    pub fn project(self, m: &CMatrix) -> CMatrix {
        match self {
            MatrixForm::General => m.clone(),
            MatrixForm::Symmetric => symmetric_part(m),
            MatrixForm::Antisymmetric => antisymmetric_part(m),
        }
    }

    /// Distance from `m` to the family.
    pub fn residual(self, m: &CMatrix) -> f64 {
        match self {
            MatrixForm::General => 0.0,
            MatrixForm::Symmetric if m.is_square() => (m - m.transpose()).norm(),
            MatrixForm::Antisymmetric if m.is_square() => (m + m.transpose()).norm(),
            _ => f64::INFINITY,
        }
    }
}

impl SystemKind {
    pub fn form(&self) -> Option<MatrixForm> {
        match self {
            SystemKind::Rectangular { .. } => Some(MatrixForm::General),
            SystemKind::Symmetric { .. } => Some(MatrixForm::Symmetric),
            SystemKind::Antisymmetric { .. } => Some(MatrixForm::Antisymmetric),
            SystemKind::Spin { .. } => None,
        }
    }

    /// Payload shape; spin payloads are column vectors.
    pub fn shape(&self) -> (usize, usize) {
        match *self {
            SystemKind::Rectangular { rows, cols } => (rows, cols),
            SystemKind::Symmetric { n } | SystemKind::Antisymmetric { n } => (n, n),
            SystemKind::Spin { dim } => (dim, 1),
        }
    }

    pub fn is_spin(&self) -> bool {
        matches!(self, SystemKind::Spin { .. })
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SystemKind::Rectangular { rows, cols } if rows == cols => write!(f, "M{rows}"),
            SystemKind::Rectangular { rows, cols } => write!(f, "M{rows}x{cols}"),
            SystemKind::Symmetric { n } => write!(f, "(M{n})s"),
            SystemKind::Antisymmetric { n } => write!(f, "(M{n})a"),
            SystemKind::Spin { dim } => write!(f, "Spin({dim})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleSystem {
    kind: SystemKind,
    tol: f64,
}

impl TripleSystem {
    pub fn new(kind: SystemKind, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidSystem(format!("tolerance must be positive, got {tol}")));
        }
        let ok = match kind {
            SystemKind::Rectangular { rows, cols } => rows >= 1 && cols >= 1,
            SystemKind::Symmetric { n } => n >= 1,
            SystemKind::Antisymmetric { n } => n >= 3,
            SystemKind::Spin { dim } => dim >= 3,
        };
        if !ok {
            return Err(Error::InvalidSystem(format!("unsupported dimensions for {kind}")));
        }
        Ok(TripleSystem { kind, tol })
    }

    pub fn rectangular(rows: usize, cols: usize) -> Result<Self> {
        Self::new(SystemKind::Rectangular { rows, cols }, DEFAULT_TOL)
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::rectangular(n, n)
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        Self::new(SystemKind::Symmetric { n }, DEFAULT_TOL)
    }

    pub fn antisymmetric(n: usize) -> Result<Self> {
        Self::new(SystemKind::Antisymmetric { n }, DEFAULT_TOL)
    }

    pub fn spin(dim: usize) -> Result<Self> {
        Self::new(SystemKind::Spin { dim }, DEFAULT_TOL)
    }

    pub fn with_tolerance(self, tol: f64) -> Result<Self> {
        Self::new(self.kind, tol)
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Complex dimension.
    pub fn dim(&self) -> usize {
        match self.kind {
            SystemKind::Rectangular { rows, cols } => rows * cols,
            SystemKind::Symmetric { n } => n * (n + 1) / 2,
            SystemKind::Antisymmetric { n } => n * (n - 1) / 2,
            SystemKind::Spin { dim } => dim,
        }
    }

    /// Maximal cardinality of an orthogonal family of nonzero tripotents.
    pub fn rank(&self) -> usize {
        match self.kind {
            SystemKind::Rectangular { rows, cols } => rows.min(cols),
            SystemKind::Symmetric { n } => n,
            SystemKind::Antisymmetric { n } => n / 2,
            SystemKind::Spin { .. } => 2,
        }
    }

    pub fn has_unitaries(&self) -> bool {
        match self.kind {
            SystemKind::Rectangular { rows, cols } => rows == cols,
            SystemKind::Antisymmetric { n } => n % 2 == 0,
            SystemKind::Symmetric { .. } | SystemKind::Spin { .. } => true,
        }
    }

    /// Same underlying space; tolerances may differ.
    pub fn same_space(&self, other: &TripleSystem) -> bool {
        self.kind == other.kind
    }

    pub fn zero(&self) -> Element {
        let (r, c) = self.kind.shape();
        let payload = if self.kind.is_spin() {
            Payload::Vector(CVector::zeros(r))
        } else {
            Payload::Matrix(CMatrix::zeros(r, c))
        };
        Element { system: *self, payload }
    }

    /// Distinguished unitary: the identity for square and symmetric matrices,
    /// `blockdiag(J, …, J)` for even antisymmetric matrices, `(1, 0, …, 0)` for
    /// spin factors.
    pub fn standard_unitary(&self) -> Option<Element> {
        let payload = match self.kind {
            SystemKind::Rectangular { rows, cols } if rows == cols => Payload::Matrix(CMatrix::identity(rows, rows)),
            SystemKind::Symmetric { n } => Payload::Matrix(CMatrix::identity(n, n)),
            SystemKind::Antisymmetric { n } if n % 2 == 0 => Payload::Matrix(crate::linalg::symplectic_unit(n / 2)),
            SystemKind::Spin { dim } => {
                let mut v = CVector::zeros(dim);
                v[0] = c64(1.0, 0.0);
                Payload::Vector(v)
            }
            _ => return None,
        };
        Some(Element { system: *self, payload })
    }

    /// Orthonormal basis for the Hilbert-Schmidt (resp. ℓ²) inner product.
    pub fn basis(&self) -> Vec<Element> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let unit = |r: usize, c: usize, entries: &[(usize, usize, f64)]| {
            let mut m = CMatrix::zeros(r, c);
            for &(i, j, x) in entries {
                m[(i, j)] = c64(x, 0.0);
            }
            Payload::Matrix(m)
        };
        let payloads: Vec<Payload> = match self.kind {
            SystemKind::Rectangular { rows, cols } => {
                (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| unit(rows, cols, &[(i, j, 1.0)])).collect()
            }
            SystemKind::Symmetric { n } => {
                let mut out = Vec::with_capacity(self.dim());
                for i in 0..n {
                    for j in i..n {
                        out.push(if i == j { unit(n, n, &[(i, i, 1.0)]) } else { unit(n, n, &[(i, j, s), (j, i, s)]) });
                    }
                }
                out
            }
            SystemKind::Antisymmetric { n } => {
                let mut out = Vec::with_capacity(self.dim());
                for i in 0..n {
                    for j in i + 1..n {
                        out.push(unit(n, n, &[(i, j, s), (j, i, -s)]));
                    }
                }
                out
            }
            SystemKind::Spin { dim } => (0..dim)
                .map(|k| {
                    let mut v = CVector::zeros(dim);
                    v[k] = c64(1.0, 0.0);
                    Payload::Vector(v)
                })
                .collect(),
        };
        payloads.into_iter().map(|payload| Element { system: *self, payload }).collect()
    }

    /// Coordinates of `x` in [`TripleSystem::basis`]; complex linear in `x`.
    pub fn coordinates(&self, x: &Element) -> CVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match (&self.kind, &x.payload) {
            (SystemKind::Rectangular { rows, cols }, Payload::Matrix(m)) => {
                CVector::from_fn(rows * cols, |k, _| m[(k / cols, k % cols)])
            }
            (SystemKind::Symmetric { n }, Payload::Matrix(m)) => {
                let mut out = Vec::with_capacity(self.dim());
                for i in 0..*n {
                    for j in i..*n {
                        out.push(if i == j { m[(i, i)] } else { (m[(i, j)] + m[(j, i)]) * s });
                    }
                }
                CVector::from_vec(out)
            }
            (SystemKind::Antisymmetric { n }, Payload::Matrix(m)) => {
                let mut out = Vec::with_capacity(self.dim());
                for i in 0..*n {
                    for j in i + 1..*n {
                        out.push((m[(i, j)] - m[(j, i)]) * s);
                    }
                }
                CVector::from_vec(out)
            }
            (SystemKind::Spin { .. }, Payload::Vector(v)) => v.clone(),
            _ => unreachable!("element payload always matches its system"),
        }
    }
}

impl fmt::Display for TripleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Matrix(CMatrix),
    Vector(CVector),
}

/// A member of a [`TripleSystem`]. Membership is checked on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    system: TripleSystem,
    payload: Payload,
}

impl Element {
    pub fn from_matrix(system: TripleSystem, m: CMatrix) -> Result<Self> {
        let form = system.kind.form().ok_or(Error::SystemMismatch)?;
        let expected = system.kind.shape();
        if m.shape() != expected {
            return Err(Error::ShapeMismatch { expected, found: m.shape() });
        }
        if !is_finite(&m) {
            return Err(Error::Parse("non-finite matrix entry".into()));
        }
        let residual = form.residual(&m);
        if residual > system.tol * m.norm().max(1.0) {
            return Err(Error::MembershipViolation { system: system.to_string(), residual });
        }
        Ok(Element { system, payload: Payload::Matrix(form.project(&m)) })
    }

    pub fn from_vector(system: TripleSystem, v: CVector) -> Result<Self> {
        let SystemKind::Spin { dim } = system.kind else {
            return Err(Error::SystemMismatch);
        };
        if v.len() != dim {
            return Err(Error::ShapeMismatch { expected: (dim, 1), found: (v.len(), 1) });
        }
        if !v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Parse("non-finite vector entry".into()));
        }
        Ok(Element { system, payload: Payload::Vector(v) })
    }

    pub fn spin(system: TripleSystem, coords: &[C64]) -> Result<Self> {
        Self::from_vector(system, CVector::from_column_slice(coords))
    }

    /// Wraps a payload already known to lie in the family (up to roundoff),
    /// projecting away the roundoff.
    pub(crate) fn projected(system: TripleSystem, payload: Payload) -> Self {
        let payload = match (system.kind.form(), payload) {
            (Some(form), Payload::Matrix(m)) => Payload::Matrix(form.project(&m)),
            (_, p) => p,
        };
        Element { system, payload }
    }

    pub fn system(&self) -> &TripleSystem {
        &self.system
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn as_matrix(&self) -> Option<&CMatrix> {
        match &self.payload {
            Payload::Matrix(m) => Some(m),
            Payload::Vector(_) => None,
        }
    }

    pub fn as_vector(&self) -> Option<&CVector> {
        match &self.payload {
            Payload::Vector(v) => Some(v),
            Payload::Matrix(_) => None,
        }
    }

    /// Rebinds to a system with the same space (e.g. a different tolerance).
    pub fn with_system(mut self, system: TripleSystem) -> Result<Self> {
        if !self.system.same_space(&system) {
            return Err(Error::SystemMismatch);
        }
        self.system = system;
        Ok(self)
    }

    fn zip(&self, other: &Element, f: impl Fn(C64, C64) -> C64) -> Element {
        assert!(self.system.same_space(&other.system), "elements belong to different triple systems");
        let payload = match (&self.payload, &other.payload) {
            (Payload::Matrix(a), Payload::Matrix(b)) => Payload::Matrix(a.zip_map(b, f)),
            (Payload::Vector(a), Payload::Vector(b)) => Payload::Vector(a.zip_map(b, f)),
            _ => unreachable!("payload kind is fixed by the system"),
        };
        Element { system: self.system, payload }
    }

    fn map(&self, f: impl Fn(C64) -> C64) -> Element {
        let payload = match &self.payload {
            Payload::Matrix(a) => Payload::Matrix(a.map(f)),
            Payload::Vector(a) => Payload::Vector(a.map(f)),
        };
        Element { system: self.system, payload }
    }

    pub fn add(&self, other: &Element) -> Element {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: C64) -> Element {
        self.map(|a| a * s)
    }

    pub fn scale_real(&self, s: f64) -> Element {
        self.map(|a| a * s)
    }

    /// Entrywise (coordinatewise) complex conjugation; a conjugate-linear
    /// triple automorphism of every supported system.
    pub fn conjugate(&self) -> Element {
        self.map(|a| a.conj())
    }

    /// Hilbert-Schmidt (ℓ² for spin) inner product ⟨x, y⟩ = Σ xₖ conj(yₖ).
    pub fn inner(&self, other: &Element) -> C64 {
        self.entries().iter().zip(other.entries()).map(|(a, b)| a * b.conj()).sum()
    }

    /// Hilbert-Schmidt (ℓ²) norm, used for residuals.
    pub fn hs_norm(&self) -> f64 {
        match &self.payload {
            Payload::Matrix(m) => m.norm(),
            Payload::Vector(v) => v.norm(),
        }
    }

    /// JB*-norm: operator norm for matrices, the spin norm for spin factors.
    pub fn norm(&self) -> f64 {
        match &self.payload {
            Payload::Matrix(m) => operator_norm(m),
            Payload::Vector(v) => spin_norm_of(v),
        }
    }

    pub fn distance(&self, other: &Element) -> f64 {
        self.sub(other).hs_norm()
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> Vec<C64> {
        match &self.payload {
            Payload::Matrix(m) => (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]).collect(),
            Payload::Vector(v) => v.iter().cloned().collect(),
        }
    }
}

/// The ambient involutions of an element.
#[derive(Debug, Clone, PartialEq)]
pub struct Conjugations {
    pub conj: Payload,
    /// Matrix kinds only.
    pub transpose: Option<CMatrix>,
    /// Matrix kinds only.
    pub adjoint: Option<CMatrix>,
}

pub fn conjugations(x: &Element) -> Conjugations {
    match &x.payload {
        Payload::Matrix(m) => Conjugations {
            conj: Payload::Matrix(conj(m)),
            transpose: Some(m.transpose()),
            adjoint: Some(m.adjoint()),
        },
        Payload::Vector(v) => Conjugations { conj: Payload::Vector(v.map(|z| z.conj())), transpose: None, adjoint: None },
    }
}

fn spin_norm_of(v: &CVector) -> f64 {
    let xx = v.norm_squared();
    let xbar = v.dot(v).norm();
    let disc = (xx * xx - xbar * xbar).max(0.0);
    (xx + disc.sqrt()).sqrt()
}

/// ‖x‖ = √(⟨x,x⟩ + √(⟨x,x⟩² − |⟨x,x̄⟩|²)) in a spin factor.
pub fn spin_norm(x: &Element) -> Result<f64> {
    match &x.payload {
        Payload::Vector(v) => Ok(spin_norm_of(v)),
        Payload::Matrix(_) => Err(Error::SystemMismatch),
    }
}

/// {x, y, z} in the common system of the three elements.
pub fn triple_product(x: &Element, y: &Element, z: &Element) -> Result<Element> {
    if !(x.system.same_space(&y.system) && x.system.same_space(&z.system)) {
        return Err(Error::SystemMismatch);
    }
    Ok(tp(x, y, z))
}

/// Unchecked triple product; callers guarantee a common system.
pub(crate) fn tp(x: &Element, y: &Element, z: &Element) -> Element {
    let payload = match (&x.payload, &y.payload, &z.payload) {
        (Payload::Matrix(a), Payload::Matrix(b), Payload::Matrix(c)) => {
            let bs = b.adjoint();
            Payload::Matrix((a * &bs * c + c * &bs * a).scale(0.5))
        }
        (Payload::Vector(a), Payload::Vector(b), Payload::Vector(c)) => {
            // ⟨a,b⟩ = Σ aₖ conj(bₖ) = b.dotc(a); ⟨a, c̄⟩ = Σ aₖ cₖ = a.dot(c)
            let ab = b.dotc(a);
            let cb = b.dotc(c);
            let ac = a.dot(c);
            Payload::Vector(c * ab + a * cb - b.map(|z| z.conj()) * ac)
        }
        _ => unreachable!("payload kind is fixed by the system"),
    };
    Element::projected(x.system, payload)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_rows;

    fn r(x: f64) -> C64 {
        c64(x, 0.0)
    }

    #[test]
    fn system_validation() {
        assert!(TripleSystem::spin(2).is_err());
        assert!(TripleSystem::antisymmetric(2).is_err());
        assert!(TripleSystem::rectangular(0, 3).is_err());
        assert!(TripleSystem::square(2).unwrap().with_tolerance(-1.0).is_err());
        assert_eq!(TripleSystem::symmetric(4).unwrap().dim(), 10);
        assert_eq!(TripleSystem::antisymmetric(5).unwrap().rank(), 2);
    }

    #[test]
    fn identity_triple_product() {
        let sys = TripleSystem::square(2).unwrap();
        let i = Element::from_matrix(sys, CMatrix::identity(2, 2)).unwrap();
        assert_eq!(triple_product(&i, &i, &i).unwrap(), i);
    }

    #[test]
    fn spin_products() {
        let sys = TripleSystem::spin(3).unwrap();
        let x = Element::spin(sys, &[r(1.), r(0.), r(0.)]).unwrap();
        assert!(tp(&x, &x, &x).distance(&x) < 1e-15);
        let u = Element::spin(sys, &[r(0.5), c64(0., 0.5), r(0.)]).unwrap();
        assert!(tp(&u, &u, &u).distance(&u) < 1e-15);
    }

    #[test]
    fn spin_norm_values() {
        let sys = TripleSystem::spin(3).unwrap();
        let x = Element::spin(sys, &[r(1.), r(0.), r(0.)]).unwrap();
        assert!((spin_norm(&x).unwrap() - 1.0).abs() < 1e-15);
        let u = Element::spin(sys, &[r(0.5), c64(0., 0.5), r(0.)]).unwrap();
        assert!((spin_norm(&u).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(spin_norm(&sys.zero()).unwrap(), 0.0);
    }

    #[test]
    fn conjugation_examples() {
        let sys = TripleSystem::square(2).unwrap();
        let x = Element::from_matrix(sys, from_rows(&[vec![c64(0., 1.), r(0.)], vec![r(0.), c64(0., -1.)]])).unwrap();
        let c = conjugations(&x);
        let adj = from_rows(&[vec![c64(0., -1.), r(0.)], vec![r(0.), c64(0., 1.)]]);
        assert_eq!(c.adjoint.as_ref(), Some(&adj));
        assert_eq!(c.transpose.as_ref(), x.as_matrix());
        assert_eq!(c.conj, Payload::Matrix(adj));

        let n = Element::from_matrix(sys, from_rows(&[vec![r(0.), r(-1.)], vec![r(0.), r(0.)]])).unwrap();
        assert_eq!(conjugations(&n).adjoint.unwrap(), from_rows(&[vec![r(0.), r(0.)], vec![r(-1.), r(0.)]]));

        let spin = TripleSystem::spin(3).unwrap();
        let u = Element::spin(spin, &[r(0.5), c64(0., 0.5), r(0.)]).unwrap();
        assert_eq!(conjugations(&u).conj, Payload::Vector(CVector::from_vec(vec![r(0.5), c64(0., -0.5), r(0.)])));
    }

    #[test]
    fn membership_is_enforced() {
        let sys = TripleSystem::symmetric(2).unwrap();
        let j = from_rows(&[vec![r(0.), r(1.)], vec![r(-1.), r(0.)]]);
        assert!(matches!(Element::from_matrix(sys, j.clone()), Err(Error::MembershipViolation { .. })));
        let anti = TripleSystem::antisymmetric(3).unwrap();
        assert!(matches!(Element::from_matrix(anti, j), Err(Error::ShapeMismatch { .. })));
        let sq = TripleSystem::square(2).unwrap();
        let spin = TripleSystem::spin(3).unwrap();
        let a = sq.zero();
        let b = spin.zero();
        assert_eq!(triple_product(&a, &a, &b), Err(Error::SystemMismatch));
    }

    #[test]
    fn coordinates_are_orthonormal() {
        for sys in [
            TripleSystem::rectangular(2, 3).unwrap(),
            TripleSystem::symmetric(3).unwrap(),
            TripleSystem::antisymmetric(4).unwrap(),
            TripleSystem::spin(4).unwrap(),
        ] {
            let basis = sys.basis();
            assert_eq!(basis.len(), sys.dim());
            for (i, b) in basis.iter().enumerate() {
                let c = sys.coordinates(b);
                for (k, ck) in c.iter().enumerate() {
                    let want = if k == i { 1.0 } else { 0.0 };
                    assert!((ck - r(want)).norm() < 1e-15);
                }
            }
        }
    }
}
