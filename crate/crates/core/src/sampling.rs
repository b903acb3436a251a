//! Seeded generators of tripotent pairs `(u, e)` with prescribed structure,
//! used by the fuzzer and the test suites.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::corner::Corner;
use crate::error::{Error, Result};
use crate::linalg::{
    c64, diagonal, from_real, project_out, random_gaussian, random_orthogonal, random_phase, random_unitary,
    symplectic_unit, CMatrix, CVector, C64,
};
use crate::triples::{Element, MatrixForm, Payload, SystemKind, TripleSystem};
use crate::tripotents::{random_form_tripotent, random_tripotent_element, Tripotent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PairMode {
    /// Unrelated random tripotents of random ranks.
    Independent,
    /// `u` a random tripotent of the Peirce-2 space of `e`.
    InCorner,
    /// `u ≤ e`.
    Below,
    /// `u = p − q` with orthogonal `p, q ≤ e`.
    BelowH,
    /// A phase times a `BelowH` sample.
    BelowHc,
    /// `u` a diagonal partial isometry with phases in a frame of `e`.
    Normal,
    /// `u = ±e` or `u = αe`.
    Aligned,
    /// Two random unitaries (maximal rank when the system has none).
    BothUnitary,
}

impl PairMode {
    pub const ALL: [PairMode; 8] = [
        PairMode::Independent,
        PairMode::InCorner,
        PairMode::Below,
        PairMode::BelowH,
        PairMode::BelowHc,
        PairMode::Normal,
        PairMode::Aligned,
        PairMode::BothUnitary,
    ];
}

/// Haar-type unitary `B` with `B e₀ Bᵗ = e₀`, `e₀ = blockdiag(J, …, J)`.
///
/// Columns come in pairs `(ξ, −e₀·conj(ξ))`; the span of earlier columns is
/// invariant under ξ ↦ e₀·conj(ξ), so orthogonalizing each new ξ against it is
/// enough.
pub fn random_symplectic_unitary<R: Rng + ?Sized>(rng: &mut R, pairs: usize) -> CMatrix {
    let n = 2 * pairs;
    let e0 = symplectic_unit(pairs);
    let mut cols: Vec<CVector> = Vec::with_capacity(n);
    while cols.len() < n {
        let g = random_gaussian(rng, n, 1).column(0).into_owned();
        let xi = project_out(&g, &cols);
        if xi.norm() < 1e-6 {
            continue;
        }
        let xi = xi.normalize();
        let eta = -(&e0 * xi.map(|z| z.conj()));
        cols.push(xi);
        cols.push(eta);
    }
    CMatrix::from_columns(&cols)
}

/// `A(diag(d))` for a random unit-fixing automorphism `A` of the corner
/// family; antisymmetric corners use `diag(d) ⊗ J`.
fn structured<R: Rng + ?Sized>(form: MatrixForm, d: &[C64], rng: &mut R) -> CMatrix {
    let k = d.len();
    match form {
        MatrixForm::General => {
            let s = random_unitary(rng, k);
            &s * diagonal(d) * s.adjoint()
        }
        MatrixForm::Symmetric => {
            let q = from_real(&random_orthogonal(rng, k));
            &q * diagonal(d) * q.transpose()
        }
        MatrixForm::Antisymmetric => {
            let b = random_symplectic_unitary(rng, k);
            let mut blocks = symplectic_unit(k);
            for (j, &dj) in d.iter().enumerate() {
                blocks[(2 * j, 2 * j + 1)] *= dj;
                blocks[(2 * j + 1, 2 * j)] *= dj;
            }
            &b * blocks * b.transpose()
        }
    }
}

fn pick<R: Rng + ?Sized, T: Copy>(rng: &mut R, items: &[T]) -> T {
    *items.choose(rng).expect("non-empty choice")
}

/// A random unitary tripotent of `sys`.
pub fn random_unitary_tripotent<R: Rng + ?Sized>(sys: &TripleSystem, rng: &mut R) -> Result<Element> {
    if !sys.has_unitaries() {
        return Err(Error::NoUnitaryExists(sys.to_string()));
    }
    random_tripotent_element(sys, sys.rank(), rng)
}

/// A pair of random unitaries; with `admissible`, `u` is rotated by a scalar so
/// the hull invariant relating it to `e` is ±1 (+1 for antisymmetric systems).
pub fn unitary_pair<R: Rng + ?Sized>(sys: &TripleSystem, admissible: bool, rng: &mut R) -> Result<(Tripotent, Tripotent)> {
    let e = random_unitary_tripotent(sys, rng)?;
    let mut u = random_unitary_tripotent(sys, rng)?;
    if admissible {
        u = match (u.payload(), e.payload()) {
            (Payload::Matrix(a), Payload::Matrix(b)) => {
                let iota = a.determinant() / b.determinant();
                let n = a.nrows() as f64;
                let sign = match sys.kind() {
                    SystemKind::Antisymmetric { .. } => 0.0,
                    _ => pick(rng, &[0.0, std::f64::consts::PI]),
                };
                u.scale(C64::from_polar(1.0, (sign - iota.arg()) / n))
            }
            (Payload::Vector(a), Payload::Vector(b)) => {
                // u = δx, e = γy; replace δ by γ or iγ.
                let delta = a.dot(a).sqrt();
                let gamma = b.dot(b).sqrt();
                let turn = pick(rng, &[c64(1.0, 0.0), c64(0.0, 1.0)]);
                u.scale(gamma * turn / delta)
            }
            _ => unreachable!("payload kind is fixed by the system"),
        };
    }
    Ok((Tripotent::new(u)?, Tripotent::new(e)?))
}

/// A random pair `(u, e)` of the requested structure.
pub fn random_pair<R: Rng + ?Sized>(sys: &TripleSystem, mode: PairMode, rng: &mut R) -> Result<(Tripotent, Tripotent)> {
    let (u, e) = match sys.kind() {
        SystemKind::Spin { dim } => spin_pair(sys, dim, mode, rng),
        _ => matrix_pair(sys, mode, rng)?,
    };
    Ok((Tripotent::new(u)?, Tripotent::new(e)?))
}

fn matrix_pair<R: Rng + ?Sized>(sys: &TripleSystem, mode: PairMode, rng: &mut R) -> Result<(Element, Element)> {
    let max = sys.rank();
    match mode {
        PairMode::Independent => {
            let e = random_tripotent_element(sys, rng.gen_range(0..=max), rng)?;
            let u = random_tripotent_element(sys, rng.gen_range(0..=max), rng)?;
            return Ok((u, e));
        }
        PairMode::BothUnitary => {
            let e = random_tripotent_element(sys, max, rng)?;
            let u = random_tripotent_element(sys, max, rng)?;
            return Ok((u, e));
        }
        _ => {}
    }
    let e = random_tripotent_element(sys, rng.gen_range(1..=max), rng)?;
    let form = sys.kind().form().expect("matrix system");
    let c = Corner::of(e.as_matrix().expect("matrix payload"), form, sys.tol())?;
    let k = c.size();
    let kr = if form == MatrixForm::Antisymmetric { k / 2 } else { k };
    let one = c64(1.0, 0.0);
    let zero = c64(0.0, 0.0);
    let y = match mode {
        PairMode::InCorner => random_form_tripotent(form, k, k, rng.gen_range(0..=kr), rng),
        PairMode::Below => structured(form, &(0..kr).map(|_| pick(rng, &[zero, one])).collect::<Vec<_>>(), rng),
        PairMode::BelowH | PairMode::BelowHc => {
            let d: Vec<C64> = (0..kr).map(|_| pick(rng, &[zero, one, -one])).collect();
            let y = structured(form, &d, rng);
            if mode == PairMode::BelowHc {
                y * random_phase(rng)
            } else {
                y
            }
        }
        PairMode::Normal => {
            let d: Vec<C64> = (0..kr).map(|_| if rng.gen_bool(0.2) { zero } else { random_phase(rng) }).collect();
            structured(form, &d, rng)
        }
        PairMode::Aligned => {
            let phase = random_phase(rng);
            let s = pick(rng, &[one, -one, phase]);
            &c.unit * s
        }
        PairMode::Independent | PairMode::BothUnitary => unreachable!(),
    };
    let u = Element::projected(*sys, Payload::Matrix(c.from(&y)));
    Ok((u, e))
}

fn spin_pair<R: Rng + ?Sized>(sys: &TripleSystem, dim: usize, mode: PairMode, rng: &mut R) -> (Element, Element) {
    let wrap = |v: CVector| Element::projected(*sys, Payload::Vector(v));
    let random = |rank: usize, rng: &mut R| random_tripotent_element(sys, rank, rng).expect("rank ≤ 2");
    match mode {
        PairMode::Independent => {
            let e = random(rng.gen_range(0..=2), rng);
            let u = random(rng.gen_range(0..=2), rng);
            return (u, e);
        }
        PairMode::BothUnitary => {
            let e = random(2, rng);
            let u = random(2, rng);
            return (u, e);
        }
        _ => {}
    }
    let q = random_orthogonal(rng, dim);
    let y = q.column(0).map(|t| c64(t, 0.0));
    let w = q.column(1).map(|t| c64(t, 0.0));
    let beta = random_phase(rng);
    let i = c64(0.0, 1.0);
    let unitary_e = rng.gen_bool(0.7);
    let e = if unitary_e { &y * beta } else { (&y + &w * i) * (beta * 0.5) };
    let zero = CVector::zeros(dim);
    // Tripotents below e.
    let below = |rng: &mut R| -> CVector {
        let choices = if unitary_e { 4 } else { 2 };
        match rng.gen_range(0..choices) {
            0 => zero.clone(),
            1 => e.clone(),
            _ => {
                let s = pick(rng, &[1.0, -1.0]);
                (&y + &w * (i * s)) * (beta * 0.5)
            }
        }
    };
    let u = match mode {
        PairMode::InCorner | PairMode::Normal => {
            if unitary_e {
                let rank = if mode == PairMode::Normal { 1 } else { rng.gen_range(0..=2) };
                return (random(rank, rng), wrap(e));
            }
            if rng.gen_bool(0.2) {
                zero
            } else {
                &e * random_phase(rng)
            }
        }
        PairMode::Below => below(rng),
        PairMode::BelowH => below(rng) * c64(pick(rng, &[1.0, -1.0]), 0.0),
        PairMode::BelowHc => below(rng) * random_phase(rng),
        PairMode::Aligned => {
            let phase = random_phase(rng);
            let s = pick(rng, &[c64(1.0, 0.0), c64(-1.0, 0.0), phase]);
            &e * s
        }
        PairMode::Independent | PairMode::BothUnitary => unreachable!(),
    };
    (wrap(u), wrap(e))
}
