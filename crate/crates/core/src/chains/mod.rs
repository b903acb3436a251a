//! Certificates for the transitive hulls ≤ₙ,ₜ, ~ₕ,ₜ, ≤ₕ,ₜ and ≤ₕ꜀,ₜ: explicit
//! chains of tripotents whose consecutive links are checked by the relation
//! predicates.
//!
//! Matrix chains are built in the Peirce-2 corner of the target `e` (see
//! [`crate::corner`]), where `e` is a standard unit and the determinant of the
//! corner image is the obstruction. Spin chains use the real-vector form of
//! spin unitaries.

mod diagonal;
mod matrix;
mod spin;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use diagonal::{diagonal_chain, INVARIANT_TOL};

use crate::corner::{complete, Corner};
use crate::error::{Error, Result};
use crate::linalg::{c64, svd, C64};
use crate::relations::{relate, relate_elements, threshold, RelationKind};
use crate::triples::{Element, Payload, SystemKind, TripleSystem};
use crate::tripotents::{is_tripotent, Tripotent};
use matrix::{corner_chain, corner_invariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Claim {
    #[serde(rename = "LE_NT")]
    LeNt,
    #[serde(rename = "SIM_HT")]
    SimHt,
    #[serde(rename = "LE_HT")]
    LeHt,
    #[serde(rename = "LE_HCT")]
    LeHct,
}

impl Claim {
    pub const ALL: [Claim; 4] = [Claim::LeNt, Claim::SimHt, Claim::LeHt, Claim::LeHct];

    pub fn name(self) -> &'static str {
        match self {
            Claim::LeNt => "LE_NT",
            Claim::SimHt => "SIM_HT",
            Claim::LeHt => "LE_HT",
            Claim::LeHct => "LE_HCT",
        }
    }

    /// Whether a link of kind `k` implies the relation whose hull is claimed.
    pub fn admits(self, k: RelationKind) -> bool {
        use RelationKind::*;
        match self {
            Claim::LeNt => !matches!(k, Le2),
            Claim::LeHct => matches!(k, Le | LeR | LeC | LeH | LeHc | SimH | SimHc),
            Claim::LeHt => matches!(k, Le | LeR | LeH | SimH),
            Claim::SimHt => k == SimH,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| *c != '_' && *c != '-').collect::<String>().to_ascii_uppercase();
        Claim::ALL
            .into_iter()
            .find(|c| c.name().replace('_', "") == key)
            .ok_or_else(|| Error::Parse(format!("unknown claim {s:?}")))
    }
}

/// A chain `links[0] R₀ links[1] R₁ … links[k]` witnessing `claim` between
/// `links[0]` and `links[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainCertificate {
    pub claim: Claim,
    pub system: TripleSystem,
    pub links: Vec<Element>,
    pub link_relations: Vec<RelationKind>,
    pub residuals: Vec<f64>,
    pub verified: bool,
}

impl ChainCertificate {
    /// Number of steps.
    pub fn length(&self) -> usize {
        self.link_relations.len()
    }

    pub fn source(&self) -> &Element {
        &self.links[0]
    }

    pub fn target(&self) -> &Element {
        self.links.last().expect("certificates have at least one node")
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateCheck {
    pub accepted: bool,
    pub link_residuals: Vec<f64>,
    pub max_residual: f64,
    pub problems: Vec<String>,
}

/// Independent re-check of a certificate: every node a tripotent of the named
/// system, every link admissible for the claim and satisfied.
pub fn verify_certificate(c: &ChainCertificate) -> CertificateCheck {
    let mut problems = Vec::new();
    let mut link_residuals = Vec::new();
    let mut max_residual: f64 = 0.0;
    if c.links.is_empty() {
        problems.push("certificate has no nodes".to_string());
    }
    if c.links.len() != c.link_relations.len() + 1 && !c.links.is_empty() {
        problems.push(format!("{} nodes but {} link relations", c.links.len(), c.link_relations.len()));
    }
    for (i, x) in c.links.iter().enumerate() {
        if !x.system().same_space(&c.system) {
            problems.push(format!("node {i} is not in {}", c.system));
            continue;
        }
        let (ok, res) = is_tripotent(x, c.system.tol());
        max_residual = max_residual.max(res);
        if !ok {
            problems.push(format!("node {i} is not a tripotent (residual {res:.3e})"));
        }
    }
    if problems.is_empty() {
        for (i, (w, &k)) in c.links.windows(2).zip(&c.link_relations).enumerate() {
            if !c.claim.admits(k) {
                problems.push(format!("link {i} uses {k}, which does not imply the claimed relation {}", c.claim));
            }
            let v = relate_elements(k, &w[0], &w[1]);
            link_residuals.push(v.residual);
            max_residual = max_residual.max(v.residual);
            if !v.holds {
                problems.push(format!("link {i} fails {k} (residual {:.3e})", v.residual));
            }
        }
    }
    CertificateCheck { accepted: problems.is_empty(), link_residuals, max_residual, problems }
}

fn finish(claim: Claim, nodes: Vec<Element>, rels: Vec<RelationKind>) -> Result<ChainCertificate> {
    debug_assert_eq!(nodes.len(), rels.len() + 1);
    let system = *nodes[0].system();
    let mut residuals = Vec::with_capacity(rels.len());
    for (i, x) in nodes.iter().enumerate() {
        let (ok, residual) = is_tripotent(x, system.tol());
        if !ok {
            return Err(Error::LinkVerificationFailed { index: i, residual });
        }
    }
    for (i, (w, &k)) in nodes.windows(2).zip(&rels).enumerate() {
        let v = relate_elements(k, &w[0], &w[1]);
        if !v.holds {
            return Err(Error::LinkVerificationFailed { index: i, residual: v.residual });
        }
        residuals.push(v.residual);
    }
    Ok(ChainCertificate { claim, system, links: nodes, link_relations: rels, residuals, verified: true })
}

/// Longest ~ₕ,ₜ chain the builders emit between unitaries: `2r − 1` for matrix
/// families of rank `r`, 3 for spin factors.
pub fn simht_length_bound(sys: &TripleSystem) -> usize {
    match sys.kind() {
        SystemKind::Spin { .. } => 3,
        _ => (2 * sys.rank()).saturating_sub(1),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InvariantFamily {
    /// det(e*u) = ±1
    Square,
    /// det u = ±det e
    Symmetric,
    /// det u = det e
    Antisymmetric,
    /// ⟨u,ū⟩ = ±⟨e,ē⟩
    Spin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HullInvariant {
    pub family: InvariantFamily,
    pub value_u: C64,
    pub value_e: C64,
    pub possible: bool,
}

impl HullInvariant {
    pub fn ratio(&self) -> C64 {
        self.value_u / self.value_e
    }
}

fn ensure_same(u: &Tripotent, e: &Tripotent) -> Result<()> {
    if u.system().same_space(e.system()) {
        Ok(())
    } else {
        Err(Error::SystemMismatch)
    }
}

/// Obstruction to `u ~ₕ,ₜ e` for unitaries `u`, `e`.
pub fn hull_invariant(u: &Tripotent, e: &Tripotent) -> Result<HullInvariant> {
    ensure_same(u, e)?;
    if !u.is_unitary() || !e.is_unitary() {
        return Err(Error::NotUnitary);
    }
    let one = c64(1.0, 0.0);
    let (family, value_u, value_e) = match (u.element().payload(), e.element().payload()) {
        (Payload::Matrix(a), Payload::Matrix(b)) => {
            let family = match u.system().kind() {
                SystemKind::Rectangular { .. } => InvariantFamily::Square,
                SystemKind::Symmetric { .. } => InvariantFamily::Symmetric,
                _ => InvariantFamily::Antisymmetric,
            };
            (family, a.determinant(), b.determinant())
        }
        (Payload::Vector(a), Payload::Vector(b)) => (InvariantFamily::Spin, a.dot(a), b.dot(b)),
        _ => return Err(Error::SystemMismatch),
    };
    let ratio = value_u / value_e;
    let plus = (ratio - one).norm() <= INVARIANT_TOL;
    let minus = (ratio + one).norm() <= INVARIANT_TOL;
    let possible = match family {
        InvariantFamily::Antisymmetric => plus,
        _ => plus || minus,
    };
    Ok(HullInvariant { family, value_u, value_e, possible })
}

fn require_le2(u: &Tripotent, e: &Tripotent) -> Result<()> {
    let v = relate(RelationKind::Le2, u, e)?;
    if v.holds {
        Ok(())
    } else {
        Err(Error::NotLe2 { residual: v.residual })
    }
}

fn coincide(u: &Tripotent, e: &Tripotent) -> bool {
    u.element().distance(e.element()) <= threshold(u.element(), e.element())
}

fn corner_of(e: &Tripotent) -> Result<Corner> {
    let sys = e.system();
    let form = sys.kind().form().expect("matrix system");
    Corner::of(e.element().as_matrix().expect("matrix payload"), form, sys.tol())
}

fn wrap(sys: &TripleSystem, m: nalgebra::DMatrix<C64>) -> Element {
    Element::projected(*sys, Payload::Matrix(m))
}

fn unitary_in_corner(c: &Corner, y: &nalgebra::DMatrix<C64>, tol: f64) -> Result<bool> {
    Ok(svd(y, tol)?.rank(0.5) == c.size())
}

/// Nodes of the ~ₕ chain from the corner unitary `y` (the image of `start`)
/// to the corner unit, mapped back to the system with exact endpoints.
fn lifted_chain(c: &Corner, y: &nalgebra::DMatrix<C64>, start: &Element, e: &Element) -> Result<Vec<Element>> {
    let sys = e.system();
    let chain = corner_chain(c, y, sys.tol())?;
    let mut nodes: Vec<Element> = chain.iter().map(|x| wrap(sys, c.from(x))).collect();
    nodes[0] = start.clone();
    let last = nodes.len() - 1;
    if last > 0 {
        nodes[last] = e.clone();
    } else if start.distance(e) > threshold(start, e) {
        nodes.push(e.clone());
    }
    Ok(nodes)
}

/// `u ≤ₙ,ₜ e` through `u ≤ w ~₂ e` with `w` a unitary of the Peirce-2 space of
/// `e` extending `u`.
pub fn cert_nt(u: &Tripotent, e: &Tripotent) -> Result<ChainCertificate> {
    ensure_same(u, e)?;
    require_le2(u, e)?;
    if coincide(u, e) {
        return finish(Claim::LeNt, vec![u.element().clone()], vec![]);
    }
    let w = match u.element().payload() {
        Payload::Matrix(_) => {
            let c = corner_of(e)?;
            let y = c.to(u.element().as_matrix().expect("matrix payload"));
            let (wc, _) = complete(&y, c.form, c64(1.0, 0.0), e.system().tol())?;
            wrap(e.system(), c.from(&wc))
        }
        Payload::Vector(_) => {
            if u.is_zero() {
                e.element().clone()
            } else if u.is_unitary() || !e.is_unitary() {
                u.element().clone()
            } else {
                u.element().add(&u.element().conjugate())
            }
        }
    };
    finish(Claim::LeNt, vec![u.element().clone(), w, e.element().clone()], vec![RelationKind::Le, RelationKind::Sim2])
}

/// `u ~ₕ,ₜ e` for unitaries, or the invariant obstruction.
pub fn cert_simht_unitary(u: &Tripotent, e: &Tripotent) -> Result<ChainCertificate> {
    let inv = hull_invariant(u, e)?;
    if !inv.possible {
        return Err(Error::InvariantObstruction(format!(
            "invariants {:.6} and {:.6} are not related",
            inv.value_u, inv.value_e
        )));
    }
    if coincide(u, e) {
        return finish(Claim::SimHt, vec![u.element().clone()], vec![]);
    }
    let nodes = match u.element().payload() {
        Payload::Matrix(m) => {
            let c = corner_of(e)?;
            lifted_chain(&c, &c.to(m), u.element(), e.element())?
        }
        Payload::Vector(_) => spin::simht_chain(u.element(), e.element())?,
    };
    let rels = vec![RelationKind::SimH; nodes.len() - 1];
    finish(Claim::SimHt, nodes, rels)
}

/// `u ≤ₕ,ₜ e` through `u ≤ v ~ₕ,ₜ e`.
pub fn cert_ht(u: &Tripotent, e: &Tripotent) -> Result<ChainCertificate> {
    ensure_same(u, e)?;
    require_le2(u, e)?;
    if coincide(u, e) {
        return finish(Claim::LeHt, vec![u.element().clone()], vec![]);
    }
    if u.is_zero() {
        return finish(Claim::LeHt, vec![u.element().clone(), e.element().clone()], vec![RelationKind::Le]);
    }
    let sys = e.system();
    let (nodes, rels) = match u.element().payload() {
        Payload::Matrix(m) => {
            let c = corner_of(e)?;
            let y = c.to(m);
            if unitary_in_corner(&c, &y, sys.tol())? {
                let nodes = lifted_chain(&c, &y, u.element(), e.element())?;
                let rels = vec![RelationKind::SimH; nodes.len() - 1];
                (nodes, rels)
            } else {
                // The completion block absorbs any determinant phase.
                let (w1, d) = complete(&y, c.form, c64(1.0, 0.0), sys.tol())?;
                let iota = corner_invariant(&c, &w1);
                let beta = C64::from_polar(1.0, -iota.arg() / d as f64);
                let (w, _) = complete(&y, c.form, beta, sys.tol())?;
                let v = wrap(sys, c.from(&w));
                let mut nodes = vec![u.element().clone()];
                nodes.extend(lifted_chain(&c, &w, &v, e.element())?);
                let mut rels = vec![RelationKind::Le];
                rels.extend(vec![RelationKind::SimH; nodes.len() - 2]);
                (nodes, rels)
            }
        }
        Payload::Vector(_) => {
            if e.is_unitary() {
                if u.is_unitary() {
                    let nodes = spin::simht_chain(u.element(), e.element())?;
                    let rels = vec![RelationKind::SimH; nodes.len() - 1];
                    (nodes, rels)
                } else {
                    let ev = e.element().as_vector().expect("spin payload");
                    let v = u.element().add(&u.element().conjugate().scale(ev.dot(ev)));
                    let mut nodes = vec![u.element().clone()];
                    nodes.extend(spin::simht_chain(&v, e.element())?);
                    let mut rels = vec![RelationKind::Le];
                    rels.extend(vec![RelationKind::SimH; nodes.len() - 2]);
                    (nodes, rels)
                }
            } else if relate_elements(RelationKind::SimH, u.element(), e.element()).holds {
                (vec![u.element().clone(), e.element().clone()], vec![RelationKind::SimH])
            } else {
                return Err(Error::InvariantObstruction(
                    "a nonzero multiple of a minimal tripotent is ≤ₕ,ₜ-below it only with a real sign".into(),
                ));
            }
        }
    };
    finish(Claim::LeHt, nodes, rels)
}

/// `u ≤ₕ꜀,ₜ e`, which in every supported system holds exactly when `u ≤₂ e`.
pub fn cert_hct(u: &Tripotent, e: &Tripotent) -> Result<ChainCertificate> {
    ensure_same(u, e)?;
    require_le2(u, e)?;
    if coincide(u, e) {
        return finish(Claim::LeHct, vec![u.element().clone()], vec![]);
    }
    if u.is_zero() {
        return finish(Claim::LeHct, vec![u.element().clone(), e.element().clone()], vec![RelationKind::Le]);
    }
    let sys = e.system();
    let (nodes, rels) = match u.element().payload() {
        Payload::Matrix(m) => {
            let c = corner_of(e)?;
            let y = c.to(m);
            if !unitary_in_corner(&c, &y, sys.tol())? {
                let mut cert = cert_ht(u, e)?;
                cert.claim = Claim::LeHct;
                return Ok(cert);
            }
            // Rotate u so its relative determinant is 1, then reuse the ~ₕ
            // chain of αu with its first link read as ~ₕ꜀ from u.
            let iota = corner_invariant(&c, &y);
            let alpha = C64::from_polar(1.0, -iota.arg() / c.size() as f64);
            let ya = &y * alpha;
            let start = u.element().scale(alpha);
            let mut nodes = lifted_chain(&c, &ya, &start, e.element())?;
            if nodes.len() == 1 {
                nodes.push(e.element().clone());
            }
            nodes[0] = u.element().clone();
            let mut rels = vec![RelationKind::SimH; nodes.len() - 1];
            rels[0] = RelationKind::SimHc;
            (nodes, rels)
        }
        Payload::Vector(_) => {
            if e.is_unitary() {
                spin::hct_chain_to_unitary(u.element(), e.element(), u.is_unitary())
            } else {
                (vec![u.element().clone(), e.element().clone()], vec![RelationKind::SimHc])
            }
        }
    };
    finish(Claim::LeHct, nodes, rels)
}
