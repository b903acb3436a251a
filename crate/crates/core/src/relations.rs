//! The order-type relations between tripotents, their implication lattice,
//! and the shift automorphism carrying the unit of a matrix system to a given
//! unitary tripotent.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c64, normal_eig, phase_of, real_orthogonal_spectral, symplectic_unit, unitarity_residual, CMatrix, C64,
};
use crate::triples::{tp, Element, Payload, SystemKind, TripleSystem};
use crate::tripotents::{is_tripotent, Tripotent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationKind {
    #[serde(rename = "LE")]
    Le,
    #[serde(rename = "LE_R")]
    LeR,
    #[serde(rename = "LE_C")]
    LeC,
    #[serde(rename = "LE_H")]
    LeH,
    #[serde(rename = "LE_HC")]
    LeHc,
    #[serde(rename = "LE_N")]
    LeN,
    #[serde(rename = "LE_2")]
    Le2,
    #[serde(rename = "SIM_H")]
    SimH,
    #[serde(rename = "SIM_HC")]
    SimHc,
    #[serde(rename = "SIM_N")]
    SimN,
    #[serde(rename = "SIM_2")]
    Sim2,
}

impl RelationKind {
    pub const ALL: [RelationKind; 11] = [
        RelationKind::Le,
        RelationKind::LeR,
        RelationKind::LeC,
        RelationKind::LeH,
        RelationKind::LeHc,
        RelationKind::LeN,
        RelationKind::Le2,
        RelationKind::SimH,
        RelationKind::SimHc,
        RelationKind::SimN,
        RelationKind::Sim2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Le => "LE",
            RelationKind::LeR => "LE_R",
            RelationKind::LeC => "LE_C",
            RelationKind::LeH => "LE_H",
            RelationKind::LeHc => "LE_HC",
            RelationKind::LeN => "LE_N",
            RelationKind::Le2 => "LE_2",
            RelationKind::SimH => "SIM_H",
            RelationKind::SimHc => "SIM_HC",
            RelationKind::SimN => "SIM_N",
            RelationKind::Sim2 => "SIM_2",
        }
    }

    pub fn is_equivalence(self) -> bool {
        matches!(self, RelationKind::SimH | RelationKind::SimHc | RelationKind::SimN | RelationKind::Sim2)
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| *c != '_' && *c != '-').collect::<String>().to_ascii_uppercase();
        RelationKind::ALL
            .into_iter()
            .find(|k| k.name().replace('_', "") == key)
            .ok_or_else(|| Error::Parse(format!("unknown relation kind {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Complex unit α with αu ≤ e (LE_C) or αu ≤ₕ e (LE_HC).
    Phase(C64),
    /// Orthogonal projections of E₂(e) with u = p − q.
    Projections { p: Element, q: Element },
    /// The tripotent {u,u,e}.
    Tripotent(Element),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationVerdict {
    pub kind: RelationKind,
    pub holds: bool,
    pub residual: f64,
    pub witness: Option<Witness>,
}

/// Acceptance threshold for relation residuals between `u` and `e`.
pub(crate) fn threshold(u: &Element, e: &Element) -> f64 {
    let tol = u.system().tol().max(e.system().tol());
    tol * u.hs_norm().max(e.hs_norm()).max(1.0)
}

/// Least-squares `β` with `x ≈ βu`, and the residual max(‖x − βu‖, ||β| − 1|).
fn phase_fit(x: &Element, u: &Element) -> (C64, f64) {
    let nu = u.inner(u).re;
    let beta = x.inner(u) / nu;
    let lsq = x.distance(&u.scale(beta));
    (beta, lsq.max((beta.norm() - 1.0).abs()))
}

fn verdict(kind: RelationKind, residual: f64, thr: f64, witness: Option<Witness>) -> RelationVerdict {
    RelationVerdict { kind, holds: residual <= thr, residual, witness }
}

/// Decides `u R e` in the common system of `u` and `e`.
pub fn relate(kind: RelationKind, u: &Tripotent, e: &Tripotent) -> Result<RelationVerdict> {
    if !u.system().same_space(e.system()) {
        return Err(Error::SystemMismatch);
    }
    Ok(relate_elements(kind, u.element(), e.element()))
}

/// Relation predicates on elements already known to be tripotents.
pub(crate) fn relate_elements(kind: RelationKind, u: &Element, e: &Element) -> RelationVerdict {
    let thr = threshold(u, e);
    if u.hs_norm() <= thr {
        let witness = match kind {
            RelationKind::LeC | RelationKind::LeHc => Some(Witness::Phase(c64(1.0, 0.0))),
            _ => None,
        };
        // u = 0 is below everything; the equivalences still need e = 0.
        let residual = if kind.is_equivalence() { e.hs_norm() } else { u.hs_norm() };
        return verdict(kind, residual, thr, witness);
    }
    let ueu = || tp(u, e, u);
    let eue = || tp(e, u, e);
    let le2 = || tp(e, e, u).distance(u);
    let ge2 = || tp(u, u, e).distance(e);
    match kind {
        RelationKind::Le => verdict(kind, ueu().distance(u), thr, None),
        RelationKind::LeR => {
            let x = ueu();
            verdict(kind, x.distance(u).min(x.add(u).hs_norm()), thr, None)
        }
        RelationKind::LeC => {
            // {αu, e, αu} = αu ⟺ {u,e,u} = ᾱu
            let (beta, res) = phase_fit(&ueu(), u);
            verdict(kind, res, thr, Some(Witness::Phase(phase_of(beta).conj())))
        }
        RelationKind::LeH => {
            let x = eue();
            let res = x.distance(u);
            let q = ueu();
            let p = q.add(u).scale_real(0.5);
            let q = q.sub(u).scale_real(0.5);
            verdict(kind, res, thr, Some(Witness::Projections { p, q }))
        }
        RelationKind::LeHc => {
            // {e, αu, e} = αu ⟺ {e,u,e} = α²u
            let (gamma, res) = phase_fit(&eue(), u);
            verdict(kind, res, thr, Some(Witness::Phase(phase_of(gamma).sqrt())))
        }
        RelationKind::LeN => {
            let w = tp(u, u, e);
            let (_, tri) = is_tripotent(&w, u.system().tol());
            verdict(kind, le2().max(tri), thr, Some(Witness::Tripotent(w)))
        }
        RelationKind::Le2 => verdict(kind, le2(), thr, None),
        RelationKind::SimN | RelationKind::Sim2 => verdict(kind, le2().max(ge2()), thr, None),
        RelationKind::SimH => verdict(kind, eue().distance(u).max(le2()).max(ge2()), thr, None),
        RelationKind::SimHc => {
            let (gamma, res) = phase_fit(&eue(), u);
            verdict(kind, res.max(le2()).max(ge2()), thr, Some(Witness::Phase(phase_of(gamma).sqrt())))
        }
    }
}

/// Arrows `a ⟹ b` of the implication diagram, plus the equivalence-to-order
/// arrows and SIM_N ⟺ SIM_2.
pub const IMPLICATIONS: [(RelationKind, RelationKind); 14] = {
    use RelationKind::*;
    [
        (Le, LeR),
        (LeR, LeC),
        (LeC, LeHc),
        (LeR, LeH),
        (LeH, LeHc),
        (LeHc, LeN),
        (LeN, Le2),
        (SimH, SimHc),
        (SimHc, SimN),
        (SimN, Sim2),
        (Sim2, SimN),
        (SimH, LeH),
        (SimHc, LeHc),
        (Sim2, Le2),
    ]
};

#[derive(Debug, Clone)]
pub struct Audit {
    pub verdicts: Vec<RelationVerdict>,
    pub violations: Vec<(RelationKind, RelationKind)>,
}

impl Audit {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn holds(&self, kind: RelationKind) -> bool {
        self.verdicts.iter().any(|v| v.kind == kind && v.holds)
    }
}

/// Every relation verdict for `(u, e)` and the implication arrows they break.
pub fn audit(u: &Tripotent, e: &Tripotent) -> Result<Audit> {
    let verdicts = RelationKind::ALL.iter().map(|&k| relate(k, u, e)).collect::<Result<Vec<_>>>()?;
    let holds = |k: RelationKind| verdicts.iter().any(|v| v.kind == k && v.holds);
    let violations = IMPLICATIONS.iter().copied().filter(|&(a, b)| holds(a) && !holds(b)).collect();
    Ok(Audit { verdicts, violations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ShiftForm {
    /// Φ(x) = v x v.
    Symmetric,
    /// Φ(x) = v x vᵗ.
    Congruence,
}

/// Triple automorphism Φ of a matrix system with Φ(unit) = e.
#[derive(Debug, Clone)]
pub struct ShiftAutomorphism {
    system: TripleSystem,
    root: CMatrix,
    form: ShiftForm,
}

impl ShiftAutomorphism {
    /// The unitary `v`. For square and symmetric matrices `v² = e`; for
    /// antisymmetric ones `v` is the root of `e·e₀*` and `v e₀ vᵗ = e`.
    pub fn root(&self) -> &CMatrix {
        &self.root
    }

    pub fn system(&self) -> &TripleSystem {
        &self.system
    }

    /// The unit mapped onto `e`.
    pub fn unit(&self) -> Element {
        self.system.standard_unitary().expect("shift automorphisms exist only on unital systems")
    }

    fn check(&self, x: &Element) -> Result<CMatrix> {
        if !self.system.same_space(x.system()) {
            return Err(Error::SystemMismatch);
        }
        Ok(x.as_matrix().expect("matrix system").clone())
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        let m = self.check(x)?;
        let v = &self.root;
        let out = match self.form {
            ShiftForm::Symmetric => v * m * v,
            ShiftForm::Congruence => v * m * v.transpose(),
        };
        Ok(Element::projected(*x.system(), Payload::Matrix(out)))
    }

    pub fn inverse(&self, x: &Element) -> Result<Element> {
        let m = self.check(x)?;
        let vs = self.root.adjoint();
        let out = match self.form {
            ShiftForm::Symmetric => &vs * m * &vs,
            ShiftForm::Congruence => &vs * m * vs.transpose(),
        };
        Ok(Element::projected(*x.system(), Payload::Matrix(out)))
    }
}

/// Unitary square root by halving the principal phase of each eigenvalue
/// cluster.
fn principal_root(a: &CMatrix, tol: f64) -> Result<CMatrix> {
    let spec = normal_eig(a, tol)?;
    Ok(spec.apply(|z| phase_of(z).sqrt()))
}

pub fn shift_automorphism(e: &Tripotent) -> Result<ShiftAutomorphism> {
    let system = *e.system();
    let tol = system.tol();
    let m = match (system.kind(), e.element().payload()) {
        (SystemKind::Spin { .. }, _) => return Err(Error::UnsupportedFamily(system.to_string())),
        (_, Payload::Matrix(m)) => m.clone(),
        _ => unreachable!("matrix systems carry matrix payloads"),
    };
    if !e.is_unitary() || !m.is_square() {
        return Err(Error::NotUnitary);
    }
    let bound = 10.0 * tol * m.norm().max(1.0);
    let (root, form, residual) = match system.kind() {
        SystemKind::Rectangular { .. } => {
            let v = principal_root(&m, tol)?;
            let res = (&v * &v - &m).norm();
            (v, ShiftForm::Symmetric, res)
        }
        SystemKind::Symmetric { .. } => {
            let rs = real_orthogonal_spectral(&m, tol)?;
            let q = rs.q_complex();
            let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                rs.phases.len(),
                rs.phases.iter().map(|p| phase_of(*p).sqrt()),
            ));
            let v = &q * d * q.transpose();
            let res = (&v * &v - &m).norm().max((&v - v.transpose()).norm());
            (v, ShiftForm::Symmetric, res)
        }
        SystemKind::Antisymmetric { n } => {
            let e0 = symplectic_unit(n / 2);
            let y = &m * e0.adjoint();
            let v = principal_root(&y, tol)?;
            let membership = (v.transpose() - e0.adjoint() * &v * &e0).norm();
            let res = (&v * &e0 * v.transpose() - &m).norm().max(membership);
            (v, ShiftForm::Congruence, res)
        }
        SystemKind::Spin { .. } => unreachable!(),
    };
    if residual > bound || unitarity_residual(&root) > bound {
        return Err(Error::RootOutsideSystem { residual });
    }
    Ok(ShiftAutomorphism { system, root, form })
}
