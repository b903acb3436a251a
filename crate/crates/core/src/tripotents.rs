//! Tripotents: certification, Peirce projections, classification by Peirce
//! dimensions, random generation and unitary completion.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corner::complete;
use crate::error::{Error, Result};
use crate::linalg::{c64, random_orthogonal, random_phase, random_unitary, svd, symplectic_unit, CMatrix, CVector, C64};
use crate::triples::{tp, Element, MatrixForm, Payload, SystemKind, TripleSystem};

/// A singular value counts as 0 or 1 when it is this close.
pub const UNIT_SINGULAR_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    Zero,
    Minimal,
    Intermediate,
    CompleteNonUnitary,
    Unitary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeirceDims {
    pub d2: usize,
    pub d1: usize,
    pub d0: usize,
}

/// ‖{x,x,x} − x‖ and whether it is within `tol·max(1, ‖x‖)`.
pub fn is_tripotent(x: &Element, tol: f64) -> (bool, f64) {
    let residual = tp(x, x, x).distance(x);
    (residual <= tol * x.hs_norm().max(1.0), residual)
}

#[derive(Debug, Clone)]
pub struct Tripotent {
    element: Element,
    residual: f64,
    dims: PeirceDims,
    rank: usize,
    class: Classification,
}

impl Tripotent {
    /// Certifies `x` at the tolerance of its system.
    pub fn new(x: Element) -> Result<Self> {
        let (ok, residual) = is_tripotent(&x, x.system().tol());
        if !ok {
            return Err(Error::NotTripotent { residual });
        }
        let rank = triple_rank(&x)?;
        let dims = compute_peirce_dims(&x)?;
        let class = classify_dims(rank, dims);
        Ok(Tripotent { element: x, residual, dims, rank, class })
    }

    pub fn element(&self) -> &Element {
        &self.element
    }

    pub fn into_element(self) -> Element {
        self.element
    }

    pub fn system(&self) -> &TripleSystem {
        self.element.system()
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn peirce_dims(&self) -> PeirceDims {
        self.dims
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn classification(&self) -> Classification {
        self.class
    }

    pub fn is_unitary(&self) -> bool {
        self.class == Classification::Unitary
    }

    pub fn is_zero(&self) -> bool {
        self.class == Classification::Zero
    }

    /// L(u,u)x = {u,u,x}.
    pub fn l_apply(&self, x: &Element) -> Element {
        tp(&self.element, &self.element, x)
    }

    /// Q(u)x = {u,x,u}.
    pub fn q_apply(&self, x: &Element) -> Element {
        tp(&self.element, x, &self.element)
    }

    /// Matrix of the Peirce projector Pⱼ(u) in the coordinates of
    /// [`TripleSystem::basis`].
    pub fn projector_matrix(&self, j: u8) -> CMatrix {
        let l = l_matrix(&self.element);
        projector_from_l(&l, j)
    }
}

fn l_matrix(u: &Element) -> CMatrix {
    let sys = u.system();
    let basis = sys.basis();
    let cols: Vec<CVector> = match u.payload() {
        // {u,u,x} = ½(uu*x + xu*u); basis matrices have at most two nonzero
        // entries, so each image is a few scaled rows and columns.
        Payload::Matrix(m) => {
            let a = m * m.adjoint() * c64(0.5, 0.0);
            let b = m.adjoint() * m * c64(0.5, 0.0);
            basis
                .iter()
                .map(|e| {
                    let x = e.as_matrix().expect("matrix basis");
                    let mut y = CMatrix::zeros(x.nrows(), x.ncols());
                    for j in 0..x.ncols() {
                        for i in 0..x.nrows() {
                            let v = x[(i, j)];
                            if v != c64(0.0, 0.0) {
                                y.column_mut(j).axpy(v, &a.column(i), c64(1.0, 0.0));
                                let row = b.row(j) * v;
                                let mut target = y.row_mut(i);
                                target += row;
                            }
                        }
                    }
                    sys.coordinates(&Element::projected(*sys, Payload::Matrix(y)))
                })
                .collect()
        }
        Payload::Vector(_) => basis.iter().map(|b| sys.coordinates(&tp(u, u, b))).collect(),
    };
    CMatrix::from_columns(&cols)
}

fn projector_from_l(l: &CMatrix, j: u8) -> CMatrix {
    let n = l.nrows();
    let l2 = l * l;
    let id = CMatrix::identity(n, n);
    match j {
        2 => l2 * c64(2.0, 0.0) - l,
        1 => (l - l2) * c64(4.0, 0.0),
        0 => id - l * c64(3.0, 0.0) + l2 * c64(2.0, 0.0),
        _ => panic!("Peirce index must be 0, 1 or 2"),
    }
}

/// Pⱼ(u)x, evaluated through the polynomial formulas in L(u,u).
pub fn peirce_project(u: &Tripotent, j: u8, x: &Element) -> Result<Element> {
    if !u.system().same_space(x.system()) {
        return Err(Error::SystemMismatch);
    }
    let l = u.l_apply(x);
    let l2 = u.l_apply(&l);
    Ok(match j {
        2 => l2.scale_real(2.0).sub(&l),
        1 => l.sub(&l2).scale_real(4.0),
        0 => x.sub(&l.scale_real(3.0)).add(&l2.scale_real(2.0)),
        _ => return Err(Error::Config(format!("Peirce index must be 0, 1 or 2, got {j}"))),
    })
}

pub fn peirce_dims(u: &Tripotent) -> PeirceDims {
    u.dims
}

fn compute_peirce_dims(u: &Element) -> Result<PeirceDims> {
    let l = l_matrix(u);
    let tol = u.system().tol();
    // Idempotents have rank equal to trace: tr P₂ = 2 tr L² − tr L, etc. The
    // SVD is a fallback for traces that are not close to an integer.
    let n = l.nrows();
    let tr1 = l.trace();
    let tr2: C64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| l[(i, j)] * l[(j, i)]).sum();
    let dim = |j: u8| -> Result<usize> {
        let t = match j {
            2 => tr2 * 2.0 - tr1,
            1 => (tr1 - tr2) * 4.0,
            _ => c64(n as f64, 0.0) - tr1 * 3.0 + tr2 * 2.0,
        };
        if t.im.abs() < 1e-6 && (t.re - t.re.round()).abs() < 1e-6 && t.re > -0.5 {
            Ok(t.re.round() as usize)
        } else {
            Ok(svd(&projector_from_l(&l, j), tol)?.rank(0.5))
        }
    };
    Ok(PeirceDims { d2: dim(2)?, d1: dim(1)?, d0: dim(0)? })
}

fn triple_rank(x: &Element) -> Result<usize> {
    match x.payload() {
        Payload::Matrix(m) => {
            let s = svd(m, x.system().tol())?;
            for &v in &s.singular_values {
                if v.abs() > UNIT_SINGULAR_TOL && (v - 1.0).abs() > UNIT_SINGULAR_TOL {
                    return Err(Error::AmbiguousRank { value: v });
                }
            }
            let r = s.rank(0.5);
            Ok(match x.system().kind() {
                SystemKind::Antisymmetric { .. } => r / 2,
                _ => r,
            })
        }
        Payload::Vector(v) => {
            let sq = v.norm_squared();
            [0.0, 0.5, 1.0]
                .iter()
                .position(|&t| (sq - t).abs() <= UNIT_SINGULAR_TOL)
                .ok_or(Error::AmbiguousRank { value: sq.sqrt() })
        }
    }
}

fn classify_dims(rank: usize, d: PeirceDims) -> Classification {
    if rank == 0 {
        Classification::Zero
    } else if d.d1 == 0 && d.d0 == 0 {
        Classification::Unitary
    } else if d.d0 == 0 {
        Classification::CompleteNonUnitary
    } else if d.d2 == 1 {
        Classification::Minimal
    } else {
        Classification::Intermediate
    }
}

pub fn classify(u: &Tripotent) -> (Classification, usize) {
    (u.class, u.rank)
}

/// Seeded random tripotent of the requested rank.
pub fn random_tripotent(sys: &TripleSystem, rank: usize, seed: u64) -> Result<Tripotent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Tripotent::new(random_tripotent_element(sys, rank, &mut rng)?)
}

/// Uncertified random tripotent drawn from `rng`.
pub fn random_tripotent_element<R: Rng + ?Sized>(sys: &TripleSystem, rank: usize, rng: &mut R) -> Result<Element> {
    if rank > sys.rank() {
        return Err(Error::RankUnachievable { requested: rank, max: sys.rank() });
    }
    let payload = match sys.kind() {
        kind @ (SystemKind::Rectangular { .. } | SystemKind::Symmetric { .. } | SystemKind::Antisymmetric { .. }) => {
            let (rows, cols) = kind.shape();
            Payload::Matrix(random_form_tripotent(kind.form().expect("matrix kind"), rows, cols, rank, rng))
        }
        SystemKind::Spin { dim } => {
            let q = random_orthogonal(rng, dim);
            let alpha = random_phase(rng);
            let x = q.column(0).map(|t| c64(t, 0.0));
            let y = q.column(1).map(|t| c64(t, 0.0));
            Payload::Vector(match rank {
                0 => CVector::zeros(dim),
                1 => (x + y * c64(0.0, 1.0)) * (alpha * 0.5),
                _ => x * alpha,
            })
        }
    };
    Ok(Element::projected(*sys, payload))
}

/// Random tripotent of the given family: `U_r V_r*`, `W_r W_rᵗ`, or
/// `W_{2r} blockdiag(J, …) W_{2r}ᵗ` (rank counted in pairs) with Haar unitaries.
pub(crate) fn random_form_tripotent<R: Rng + ?Sized>(
    form: MatrixForm,
    rows: usize,
    cols: usize,
    rank: usize,
    rng: &mut R,
) -> CMatrix {
    match form {
        MatrixForm::General => {
            let u = random_unitary(rng, rows);
            let v = random_unitary(rng, cols);
            u.columns(0, rank) * v.columns(0, rank).adjoint()
        }
        MatrixForm::Symmetric => {
            let w = random_unitary(rng, rows);
            let wr = w.columns(0, rank);
            wr * wr.transpose()
        }
        MatrixForm::Antisymmetric => {
            let w = random_unitary(rng, rows);
            let wr = w.columns(0, 2 * rank);
            wr * symplectic_unit(rank) * wr.transpose()
        }
    }
}

/// A unitary tripotent `v` of the same system with `u ≤ v`.
pub fn unitary_extension(u: &Tripotent) -> Result<Tripotent> {
    let sys = *u.system();
    if !sys.has_unitaries() {
        return Err(Error::NoUnitaryExists(sys.to_string()));
    }
    if u.is_unitary() {
        return Ok(u.clone());
    }
    let v = match u.element().payload() {
        Payload::Matrix(m) => {
            let form = sys.kind().form().expect("matrix payload has a form");
            let (v, _) = complete(m, form, c64(1.0, 0.0), sys.tol())?;
            Element::projected(sys, Payload::Matrix(v))
        }
        Payload::Vector(_) if u.is_zero() => sys.standard_unitary().expect("spin factors have unitaries"),
        Payload::Vector(_) => u.element().add(&u.element().conjugate()),
    };
    let v = Tripotent::new(v)?;
    if !v.is_unitary() {
        return Err(Error::CompletionFailed { residual: f64::NAN });
    }
    let residual = tp(u.element(), v.element(), u.element()).distance(u.element());
    if residual > sys.tol() * 10.0 {
        return Err(Error::CompletionFailed { residual });
    }
    Ok(v)
}
