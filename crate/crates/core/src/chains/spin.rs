//! Chains in spin factors, where unitaries are complex units times real unit
//! vectors and two such unitaries `αx`, `iαz` with `x ⊥ z` are ~ₕ-related.

use super::diagonal::INVARIANT_TOL;
use crate::error::{Error, Result};
use crate::linalg::{c64, project_out, CVector, C64};
use crate::relations::{relate_elements, RelationKind};
use crate::triples::{Element, Payload};

fn vector(x: &Element) -> &CVector {
    x.as_vector().expect("spin elements are vectors")
}

fn element_like(template: &Element, v: CVector) -> Element {
    Element::projected(*template.system(), Payload::Vector(v))
}

/// `u = αx` with `α` a complex unit and `x` a real unit vector.
fn real_form(u: &CVector) -> (C64, CVector) {
    let alpha = u.dot(u).sqrt();
    let alpha = alpha / alpha.norm();
    let x = (u * alpha.conj()).map(|z| c64(z.re, 0.0));
    (alpha, x)
}

/// A real unit vector orthogonal to the given real vectors.
fn orthogonal_real_unit(dim: usize, given: &[&CVector]) -> CVector {
    let mut basis: Vec<CVector> = Vec::new();
    for g in given {
        let w = project_out(g, &basis);
        if w.norm() > 1e-8 {
            basis.push(w.normalize());
        }
    }
    let mut best: Option<(f64, CVector)> = None;
    for k in 0..dim {
        let mut v = CVector::zeros(dim);
        v[k] = c64(1.0, 0.0);
        let w = project_out(&v, &basis);
        let n = w.norm();
        if best.as_ref().map_or(true, |(b, _)| n > *b + 1e-12) {
            best = Some((n, w));
        }
    }
    best.expect("spin factors have dimension at least 3").1.normalize()
}

enum Alignment {
    /// e = α y
    Real(CVector),
    /// e = iα y
    Imaginary(CVector),
}

fn align(alpha: C64, e: &CVector) -> Result<Alignment> {
    let ep = e * alpha.conj();
    let mu2 = ep.dot(&ep);
    if (mu2 - c64(1.0, 0.0)).norm() <= INVARIANT_TOL {
        Ok(Alignment::Real(ep.map(|z| c64(z.re, 0.0))))
    } else if (mu2 + c64(1.0, 0.0)).norm() <= INVARIANT_TOL {
        Ok(Alignment::Imaginary(ep.map(|z| c64(z.im, 0.0))))
    } else {
        Err(Error::InvariantObstruction(format!("relative bilinear invariant {mu2:.6} is not ±1")))
    }
}

/// ~ₕ chain between spin unitaries, nodes from `u` to `e`, at most 3 steps.
pub(crate) fn simht_chain(u: &Element, e: &Element) -> Result<Vec<Element>> {
    if u.distance(e) <= crate::relations::threshold(u, e) {
        return Ok(vec![u.clone()]);
    }
    if relate_elements(RelationKind::SimH, u, e).holds {
        return Ok(vec![u.clone(), e.clone()]);
    }
    let uv = vector(u);
    let dim = uv.len();
    let (alpha, x) = real_form(uv);
    let i = c64(0.0, 1.0);
    let nodes = match align(alpha, vector(e))? {
        Alignment::Real(y) => {
            let z1 = orthogonal_real_unit(dim, &[&x, &y]);
            vec![u.clone(), element_like(u, z1 * (i * alpha)), e.clone()]
        }
        Alignment::Imaginary(y) => {
            let z1 = orthogonal_real_unit(dim, &[&x, &y]);
            let z2 = orthogonal_real_unit(dim, &[&z1, &y]);
            vec![u.clone(), element_like(u, z1 * (i * alpha)), element_like(u, z2 * alpha), e.clone()]
        }
    };
    Ok(nodes)
}

/// ≤ₕ꜀,ₜ chain from `u` to the unitary `e`: `[u ≤ v]`, then `v ~ₕ꜀ w ~ₕ e`
/// unless a shorter route verifies directly.
pub(crate) fn hct_chain_to_unitary(u: &Element, e: &Element, u_unitary: bool) -> (Vec<Element>, Vec<RelationKind>) {
    let mut nodes = vec![u.clone()];
    let mut rels = Vec::new();
    let v = if u_unitary {
        u.clone()
    } else {
        let v = u.add(&u.conjugate());
        nodes.push(v.clone());
        rels.push(RelationKind::Le);
        v
    };
    if relate_elements(RelationKind::SimHc, &v, e).holds {
        nodes.push(e.clone());
        rels.push(RelationKind::SimHc);
        return (nodes, rels);
    }
    let (_, xv) = real_form(vector(&v));
    let (gamma, y) = real_form(vector(e));
    let z = orthogonal_real_unit(xv.len(), &[&xv, &y]);
    let w = element_like(u, z * (c64(0.0, 1.0) * gamma));
    nodes.push(w);
    rels.push(RelationKind::SimHc);
    nodes.push(e.clone());
    rels.push(RelationKind::SimH);
    (nodes, rels)
}
