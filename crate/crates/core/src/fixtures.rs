//! Registry of hand-checked example configurations with their expected
//! verdicts, and a runner that recomputes every expectation.

use serde::Serialize;

use crate::chains::{cert_hct, cert_ht, cert_nt, cert_simht_unitary, verify_certificate, Claim};
use crate::error::Result;
use crate::linalg::{c64, CMatrix, C64};
use crate::relations::{relate, RelationKind};
use crate::triples::{tp, Element, TripleSystem};
use crate::tripotents::{classify, is_tripotent, peirce_project, Classification, Tripotent};

/// Residual bound for expectations that hold.
pub const FIXTURE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Expectation {
    /// `u R e` holds or fails.
    Relation { kind: RelationKind, u: &'static str, e: &'static str, holds: bool },
    /// The builder for `claim` produces a verified certificate from `u` to `e`.
    Chain { claim: Claim, u: &'static str, e: &'static str, feasible: bool },
    Class { x: &'static str, class: Classification },
    /// Whether `{u,u,e}` is a tripotent, and whether it lies below `e`.
    NormalPart { u: &'static str, e: &'static str, tripotent: bool, below: bool },
    /// `P_j(e) x` equals the named element.
    Peirce { x: &'static str, e: &'static str, j: u8, equals: &'static str },
}

#[derive(Debug, Clone)]
pub struct FixtureCase {
    pub id: &'static str,
    pub system: TripleSystem,
    pub elements: Vec<(&'static str, Element)>,
    pub expectations: Vec<Expectation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub expectation: Expectation,
    pub pass: bool,
    /// Residual of the positive statement (relation, certificate, identity);
    /// large when the statement is expected to fail.
    pub residual: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub id: &'static str,
    pub system: String,
    pub checks: Vec<CheckOutcome>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureReport {
    pub cases: Vec<CaseReport>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(CaseReport::passed)
    }

    pub fn check_count(&self) -> usize {
        self.cases.iter().map(|c| c.checks.len()).sum()
    }

    pub fn mismatches(&self) -> Vec<(&'static str, &CheckOutcome)> {
        self.cases.iter().flat_map(|c| c.checks.iter().filter(|k| !k.pass).map(move |k| (c.id, k))).collect()
    }

    /// Largest residual among expectations that were asserted to hold.
    pub fn max_positive_residual(&self) -> f64 {
        self.cases
            .iter()
            .flat_map(|c| &c.checks)
            .filter(|k| k.expectation.positive())
            .map(|k| k.residual)
            .fold(0.0, f64::max)
    }
}

impl Expectation {
    fn positive(&self) -> bool {
        match self {
            Expectation::Relation { holds, .. } => *holds,
            Expectation::Chain { feasible, .. } => *feasible,
            Expectation::NormalPart { tripotent, .. } => *tripotent,
            Expectation::Class { .. } | Expectation::Peirce { .. } => true,
        }
    }
}

fn r(x: f64) -> C64 {
    c64(x, 0.0)
}

fn im(x: f64) -> C64 {
    c64(0.0, x)
}

const O: C64 = C64 { re: 0.0, im: 0.0 };
const I: C64 = C64 { re: 1.0, im: 0.0 };

fn mat(sys: &TripleSystem, rows: &[&[C64]]) -> Element {
    let m = CMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    Element::from_matrix(*sys, m).expect("fixture matrices belong to their system")
}

fn vec3(sys: &TripleSystem, v: [C64; 3]) -> Element {
    Element::spin(*sys, &v).expect("fixture vectors belong to their system")
}

/// `x ↦ [[0, x], [−xᵗ, 0]]`, the embedding of M₂ into (M₄)ₐ.
fn embed_antisymmetric(sys: &TripleSystem, x: &Element) -> Element {
    let m = x.as_matrix().expect("matrix payload");
    let mut big = CMatrix::zeros(4, 4);
    big.view_mut((0, 2), (2, 2)).copy_from(m);
    big.view_mut((2, 0), (2, 2)).copy_from(&(-m.transpose()));
    Element::from_matrix(*sys, big).expect("embedding lands in (M4)a")
}

fn rel(kind: RelationKind, u: &'static str, e: &'static str, holds: bool) -> Expectation {
    Expectation::Relation { kind, u, e, holds }
}

/// `u R e` and `e R u` both fail.
fn incomparable(kind: RelationKind, u: &'static str, e: &'static str) -> [Expectation; 2] {
    [rel(kind, u, e, false), rel(kind, e, u, false)]
}

/// `u R e` and `e R u` both hold.
fn both(kind: RelationKind, u: &'static str, e: &'static str) -> [Expectation; 2] {
    [rel(kind, u, e, true), rel(kind, e, u, true)]
}

fn chain(claim: Claim, u: &'static str, e: &'static str, feasible: bool) -> Expectation {
    Expectation::Chain { claim, u, e, feasible }
}

fn case(id: &'static str, system: TripleSystem, elements: Vec<(&'static str, Element)>, groups: Vec<Vec<Expectation>>) -> FixtureCase {
    FixtureCase { id, system, elements, expectations: groups.into_iter().flatten().collect() }
}

/// `e = I`, `u = −σₓ`, `v = diag(i, −i)` in M₂.
fn leh_triple(sys: &TripleSystem) -> Vec<(&'static str, Element)> {
    vec![
        ("e", mat(sys, &[&[I, O], &[O, I]])),
        ("u", mat(sys, &[&[O, -I], &[-I, O]])),
        ("v", mat(sys, &[&[im(1.), O], &[O, im(-1.)]])),
    ]
}

pub fn fixture_cases() -> Vec<FixtureCase> {
    use RelationKind::*;
    let m2 = TripleSystem::square(2).expect("M2");
    let m3 = TripleSystem::square(3).expect("M3");
    let m2s = TripleSystem::symmetric(2).expect("(M2)s");
    let m4a = TripleSystem::antisymmetric(4).expect("(M4)a");
    let spin3 = TripleSystem::spin(3).expect("Spin(3)");
    let h = std::f64::consts::FRAC_1_SQRT_2;

    let lehc_b = vec![
        ("e", mat(&m2, &[&[I, O], &[O, I]])),
        ("u", mat(&m2, &[&[O, I], &[I, O]])),
        ("v", mat(&m2, &[&[r(h), r(-h)], &[r(h), r(h)]])),
    ];
    let len_c = vec![
        ("e", mat(&m2, &[&[I, O], &[O, I]])),
        ("u", mat(&m2, &[&[O, -I], &[-I, O]])),
        ("v", mat(&m2, &[&[O, -I], &[O, O]])),
    ];
    let embed = |els: &[(&'static str, Element)]| -> Vec<(&'static str, Element)> {
        els.iter().map(|(n, x)| (*n, embed_antisymmetric(&m4a, x))).collect()
    };

    vec![
        case(
            "leh-not-transitive",
            m2,
            leh_triple(&m2),
            vec![
                vec![rel(LeH, "u", "e", true), rel(LeH, "v", "u", true)],
                vec![rel(SimH, "v", "u", true), rel(SimH, "u", "e", true)],
                vec![rel(Sim2, "e", "u", true), rel(Sim2, "u", "v", true)],
                incomparable(LeH, "v", "e").to_vec(),
                vec![chain(Claim::SimHt, "v", "e", true)],
            ],
        ),
        case(
            "lehc-not-transitive-a",
            m2,
            leh_triple(&m2),
            vec![
                both(SimH, "e", "u").to_vec(),
                both(SimH, "u", "v").to_vec(),
                incomparable(LeH, "e", "v").to_vec(),
                both(SimHc, "e", "v").to_vec(),
            ],
        ),
        case(
            "lehc-not-transitive-b",
            m2,
            lehc_b,
            vec![
                vec![rel(Sim2, "e", "u", true), rel(Sim2, "u", "v", true)],
                vec![rel(LeH, "u", "e", true), rel(LeH, "v", "u", true)],
                both(SimH, "e", "u").to_vec(),
                both(SimH, "u", "v").to_vec(),
                incomparable(LeHc, "e", "v").to_vec(),
                vec![chain(Claim::SimHt, "v", "e", true), chain(Claim::LeHct, "v", "e", true)],
            ],
        ),
        case(
            "len-not-transitive-a",
            m2,
            vec![
                ("e", mat(&m2, &[&[I, O], &[O, O]])),
                ("u", mat(&m2, &[&[I, O], &[O, I]])),
                ("v", mat(&m2, &[&[r(h), r(h)], &[r(-h), r(h)]])),
            ],
            vec![
                vec![rel(Le2, "u", "e", false), rel(Le2, "v", "e", false)],
                vec![rel(LeN, "u", "e", false), rel(LeN, "v", "e", false)],
                vec![
                    Expectation::NormalPart { u: "u", e: "e", tripotent: true, below: true },
                    Expectation::NormalPart { u: "v", e: "e", tripotent: true, below: true },
                ],
            ],
        ),
        case(
            "len-not-transitive-b",
            m3,
            vec![
                ("e", mat(&m3, &[&[I, O, O], &[O, I, O], &[O, O, O]])),
                ("u", mat(&m3, &[&[O, -I, O], &[O, O, O], &[O, O, I]])),
                ("u2", mat(&m3, &[&[O, -I, O], &[O, O, O], &[O, O, O]])),
                ("w", mat(&m3, &[&[im(1.), O, O], &[O, I, O], &[O, O, im(-1.)]])),
                ("w2", mat(&m3, &[&[im(1.), O, O], &[O, I, O], &[O, O, O]])),
                ("zero", m3.zero()),
            ],
            vec![
                vec![
                    Expectation::Peirce { x: "u", e: "e", j: 1, equals: "zero" },
                    Expectation::Peirce { x: "u", e: "e", j: 2, equals: "u2" },
                    Expectation::NormalPart { u: "u", e: "e", tripotent: false, below: false },
                    rel(LeN, "u2", "e", false),
                ],
                vec![
                    Expectation::Peirce { x: "w", e: "e", j: 1, equals: "zero" },
                    Expectation::Peirce { x: "w", e: "e", j: 2, equals: "w2" },
                    Expectation::NormalPart { u: "w", e: "e", tripotent: true, below: true },
                    rel(LeN, "w2", "e", true),
                ],
            ],
        ),
        case(
            "len-not-transitive-c",
            m2,
            len_c.clone(),
            vec![
                both(SimH, "e", "u").to_vec(),
                vec![rel(Le, "v", "u", true), rel(LeN, "v", "e", false)],
                vec![Expectation::NormalPart { u: "v", e: "e", tripotent: false, below: false }],
            ],
        ),
        case(
            "m2s-b",
            m2s,
            vec![
                ("u", mat(&m2s, &[&[r(h), im(h)], &[im(h), r(h)]])),
                ("v", mat(&m2s, &[&[I, O], &[O, -I]])),
                ("e", mat(&m2s, &[&[I, O], &[O, I]])),
            ],
            vec![
                both(SimH, "u", "v").to_vec(),
                both(SimH, "v", "e").to_vec(),
                vec![rel(Sim2, "u", "e", true)],
                incomparable(LeHc, "u", "e").to_vec(),
                vec![chain(Claim::SimHt, "u", "e", true)],
            ],
        ),
        case(
            "m2s-c",
            m2s,
            vec![
                ("u", mat(&m2s, &[&[r(0.5), im(0.5)], &[im(0.5), r(-0.5)]])),
                ("e", mat(&m2s, &[&[I, O], &[O, I]])),
            ],
            vec![
                vec![Expectation::Class { x: "u", class: Classification::Minimal }],
                vec![rel(Le2, "u", "e", true), rel(LeN, "u", "e", false)],
                vec![chain(Claim::LeNt, "u", "e", true)],
            ],
        ),
        case(
            "m4a-a",
            m4a,
            vec![
                (
                    "e",
                    mat(&m4a, &[&[O, O, I, O], &[O, O, O, I], &[-I, O, O, O], &[O, -I, O, O]]),
                ),
                (
                    "u",
                    mat(&m4a, &[&[O, O, O, -I], &[O, O, -I, O], &[O, I, O, O], &[I, O, O, O]]),
                ),
                (
                    "v",
                    mat(
                        &m4a,
                        &[&[O, O, im(1.), O], &[O, O, O, im(-1.)], &[im(-1.), O, O, O], &[O, im(1.), O, O]],
                    ),
                ),
            ],
            vec![
                vec![
                    Expectation::Class { x: "e", class: Classification::Unitary },
                    Expectation::Class { x: "u", class: Classification::Unitary },
                    Expectation::Class { x: "v", class: Classification::Unitary },
                ],
                vec![rel(LeH, "u", "e", true), rel(LeH, "v", "u", true)],
                vec![rel(SimH, "u", "e", true), rel(SimH, "v", "u", true)],
                incomparable(LeH, "v", "e").to_vec(),
                vec![chain(Claim::SimHt, "v", "e", true)],
            ],
        ),
        case(
            "m4a-b",
            m4a,
            embed(&[
                ("e", mat(&m2, &[&[I, O], &[O, I]])),
                ("u", mat(&m2, &[&[O, I], &[I, O]])),
                ("v", mat(&m2, &[&[r(h), r(-h)], &[r(h), r(h)]])),
            ]),
            vec![
                both(SimH, "e", "u").to_vec(),
                both(SimH, "u", "v").to_vec(),
                incomparable(LeHc, "e", "v").to_vec(),
                vec![chain(Claim::SimHt, "v", "e", true)],
            ],
        ),
        case(
            "m4a-c",
            m4a,
            embed(&len_c),
            vec![
                both(SimH, "e", "u").to_vec(),
                vec![rel(Le, "v", "u", true), rel(LeN, "v", "e", false)],
            ],
        ),
        case(
            "spin-a",
            spin3,
            vec![
                ("x", vec3(&spin3, [r(0.5), im(0.5), O])),
                ("y", vec3(&spin3, [im(0.5), r(-0.5), O])),
            ],
            vec![
                vec![
                    Expectation::Class { x: "x", class: Classification::Minimal },
                    Expectation::Class { x: "y", class: Classification::Minimal },
                ],
                both(LeC, "y", "x").to_vec(),
                incomparable(LeH, "y", "x").to_vec(),
            ],
        ),
        case(
            "spin-b",
            spin3,
            vec![
                ("e", vec3(&spin3, [I, O, O])),
                ("u1", vec3(&spin3, [r(-0.5), im(0.5), O])),
                ("u2", vec3(&spin3, [im(0.5), r(0.5), O])),
                ("u3", vec3(&spin3, [O, im(0.5), r(0.5)])),
            ],
            vec![
                vec![
                    Expectation::Class { x: "e", class: Classification::Unitary },
                    Expectation::Class { x: "u1", class: Classification::Minimal },
                    Expectation::Class { x: "u2", class: Classification::Minimal },
                    Expectation::Class { x: "u3", class: Classification::Minimal },
                ],
                vec![rel(LeR, "u1", "e", true), rel(Le, "u1", "e", false)],
                vec![rel(LeN, "u2", "e", true), rel(LeH, "u2", "e", false)],
                vec![rel(LeN, "u3", "e", false), rel(Le2, "u3", "e", true)],
            ],
        ),
        case(
            "spin-c",
            spin3,
            vec![("u", vec3(&spin3, [I, O, O])), ("e", vec3(&spin3, [O, I, O]))],
            vec![
                incomparable(LeH, "u", "e").to_vec(),
                vec![chain(Claim::SimHt, "u", "e", true), chain(Claim::SimHt, "e", "u", true)],
            ],
        ),
        case(
            "spin-d",
            spin3,
            vec![("u", vec3(&spin3, [I, O, O])), ("e", vec3(&spin3, [r(h), r(h), O]))],
            vec![
                incomparable(LeHc, "u", "e").to_vec(),
                vec![chain(Claim::SimHt, "u", "e", true), chain(Claim::SimHt, "e", "u", true)],
            ],
        ),
        case(
            "distinguishing-a",
            m2,
            vec![
                ("e", mat(&m2, &[&[O, I], &[O, O]])),
                ("-e", mat(&m2, &[&[O, -I], &[O, O]])),
                ("ie", mat(&m2, &[&[O, im(1.)], &[O, O]])),
                ("-u", mat(&m2, &[&[-I, O], &[O, O]])),
                ("iu", mat(&m2, &[&[im(1.), O], &[O, O]])),
                ("u+v", mat(&m2, &[&[I, O], &[O, I]])),
            ],
            vec![
                both(LeR, "-e", "e").to_vec(),
                incomparable(Le, "-e", "e").to_vec(),
                both(LeC, "ie", "e").to_vec(),
                incomparable(LeR, "ie", "e").to_vec(),
                incomparable(LeH, "ie", "e").to_vec(),
                vec![rel(LeR, "-u", "u+v", true), rel(LeR, "u+v", "-u", false)],
                incomparable(Le, "-u", "u+v").to_vec(),
                vec![rel(LeC, "iu", "u+v", true), rel(LeC, "u+v", "iu", false)],
                incomparable(LeR, "iu", "u+v").to_vec(),
                incomparable(LeH, "iu", "u+v").to_vec(),
            ],
        ),
        case(
            "distinguishing-d",
            m3,
            vec![
                ("u-v", mat(&m3, &[&[I, O, O], &[O, -I, O], &[O, O, O]])),
                ("u+v", mat(&m3, &[&[I, O, O], &[O, I, O], &[O, O, O]])),
                ("i(u-v)", mat(&m3, &[&[im(1.), O, O], &[O, im(-1.), O], &[O, O, O]])),
                ("u+iv", mat(&m3, &[&[I, O, O], &[O, im(1.), O], &[O, O, O]])),
                ("u+v+w", mat(&m3, &[&[I, O, O], &[O, I, O], &[O, O, I]])),
            ],
            vec![
                both(SimH, "u-v", "u+v").to_vec(),
                incomparable(LeC, "u-v", "u+v").to_vec(),
                both(SimHc, "i(u-v)", "u+v").to_vec(),
                incomparable(LeH, "i(u-v)", "u+v").to_vec(),
                incomparable(LeC, "i(u-v)", "u+v").to_vec(),
                both(SimN, "u+iv", "u+v").to_vec(),
                incomparable(LeHc, "u+iv", "u+v").to_vec(),
                vec![rel(LeH, "u-v", "u+v+w", true), rel(LeH, "u+v+w", "u-v", false)],
                incomparable(LeC, "u-v", "u+v+w").to_vec(),
                vec![rel(LeHc, "i(u-v)", "u+v+w", true), rel(LeHc, "u+v+w", "i(u-v)", false)],
                incomparable(LeH, "i(u-v)", "u+v+w").to_vec(),
                incomparable(LeC, "i(u-v)", "u+v+w").to_vec(),
                vec![rel(LeN, "u+iv", "u+v+w", true), rel(LeN, "u+v+w", "u+iv", false)],
                incomparable(LeHc, "u+iv", "u+v+w").to_vec(),
            ],
        ),
        case(
            "distinguishing-e",
            m3,
            vec![
                ("e", mat(&m3, &[&[I, O, O], &[O, I, O], &[O, O, O]])),
                ("v", mat(&m3, &[&[im(1.), O, O], &[O, im(-1.), O], &[O, O, O]])),
                ("1", mat(&m3, &[&[I, O, O], &[O, I, O], &[O, O, I]])),
            ],
            vec![
                // e and v live in the upper corner, where they are unitary.
                vec![chain(Claim::LeHt, "e", "v", true), chain(Claim::LeHt, "v", "e", true)],
                incomparable(LeH, "e", "v").to_vec(),
                vec![chain(Claim::LeHt, "v", "1", true), chain(Claim::LeHt, "1", "v", false)],
                incomparable(LeH, "v", "1").to_vec(),
            ],
        ),
        case(
            "distinguishing-f",
            m2,
            len_c,
            vec![
                vec![chain(Claim::LeHt, "v", "e", true), chain(Claim::LeHt, "e", "v", false)],
                incomparable(LeN, "v", "e").to_vec(),
            ],
        ),
    ]
}

fn lookup<'a>(case: &'a FixtureCase, name: &str) -> &'a Element {
    &case.elements.iter().find(|(n, _)| *n == name).unwrap_or_else(|| panic!("{}: no element {name:?}", case.id)).1
}

fn tripotent(case: &FixtureCase, name: &str) -> Result<Tripotent> {
    Tripotent::new(lookup(case, name).clone())
}

fn build(claim: Claim, u: &Tripotent, e: &Tripotent) -> Result<crate::chains::ChainCertificate> {
    match claim {
        Claim::LeNt => cert_nt(u, e),
        Claim::SimHt => cert_simht_unitary(u, e),
        Claim::LeHt => cert_ht(u, e),
        Claim::LeHct => cert_hct(u, e),
    }
}

fn check(case: &FixtureCase, x: &Expectation) -> CheckOutcome {
    let outcome = |pass: bool, residual: f64, detail: String| CheckOutcome {
        expectation: x.clone(),
        pass,
        residual,
        detail,
    };
    let result = (|| -> Result<CheckOutcome> {
        Ok(match *x {
            Expectation::Relation { kind, u, e, holds } => {
                let v = relate(kind, &tripotent(case, u)?, &tripotent(case, e)?)?;
                let pass = v.holds == holds && (!holds || v.residual <= FIXTURE_TOL);
                outcome(pass, v.residual, format!("{u} {kind} {e}: {}", v.holds))
            }
            Expectation::Chain { claim, u, e, feasible } => {
                match build(claim, &tripotent(case, u)?, &tripotent(case, e)?) {
                    Ok(cert) => {
                        let chk = verify_certificate(&cert);
                        let ok = chk.accepted && chk.max_residual <= FIXTURE_TOL;
                        outcome(
                            ok == feasible,
                            chk.max_residual,
                            format!("{u} {claim} {e}: certificate of length {}", cert.length()),
                        )
                    }
                    Err(err) => outcome(!feasible, f64::INFINITY, format!("{u} {claim} {e}: {err}")),
                }
            }
            Expectation::Class { x: name, class } => {
                let (got, rank) = classify(&tripotent(case, name)?);
                let t = tripotent(case, name)?;
                outcome(got == class, t.residual(), format!("{name}: {got:?} of rank {rank}"))
            }
            Expectation::NormalPart { u, e, tripotent: want_trip, below } => {
                let (ut, et) = (lookup(case, u), lookup(case, e));
                let w = tp(ut, ut, et);
                let (is_trip, res) = is_tripotent(&w, FIXTURE_TOL);
                let is_below = is_trip && relate(RelationKind::Le, &Tripotent::new(w)?, &tripotent(case, e)?)?.holds;
                outcome(
                    is_trip == want_trip && is_below == below,
                    res,
                    format!("{{{u},{u},{e}}}: tripotent {is_trip}, below {e} {is_below}"),
                )
            }
            Expectation::Peirce { x: name, e, j, equals } => {
                let p = peirce_project(&tripotent(case, e)?, j, lookup(case, name))?;
                let d = p.distance(lookup(case, equals));
                outcome(d <= FIXTURE_TOL, d, format!("P{j}({e}) {name} vs {equals}: {d:.2e}"))
            }
        })
    })();
    result.unwrap_or_else(|err| outcome(false, f64::INFINITY, err.to_string()))
}

pub fn run_case(case: &FixtureCase) -> CaseReport {
    CaseReport {
        id: case.id,
        system: case.system.to_string(),
        checks: case.expectations.iter().map(|x| check(case, x)).collect(),
    }
}

pub fn run_fixture_suite() -> FixtureReport {
    FixtureReport { cases: fixture_cases().iter().map(run_case).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_passes() {
        let report = run_fixture_suite();
        for (id, m) in report.mismatches() {
            eprintln!("{id}: {:?} -> {}", m.expectation, m.detail);
        }
        assert!(report.passed());
        assert!(report.max_positive_residual() <= FIXTURE_TOL);
    }

    #[test]
    fn ids_are_unique() {
        let cases = fixture_cases();
        let mut ids: Vec<_> = cases.iter().map(|c| c.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), cases.len());
    }

    #[test]
    fn a_wrong_expectation_is_reported() {
        let mut case = fixture_cases().remove(0);
        case.expectations = vec![rel(RelationKind::LeH, "v", "e", true)];
        let report = run_case(&case);
        assert!(!report.passed());
        assert!(report.checks[0].residual > FIXTURE_TOL);
    }
}
