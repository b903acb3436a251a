//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use jbtriple::chains::{cert_hct, cert_ht, cert_nt, cert_simht_unitary, verify_certificate, ChainCertificate};
use jbtriple::fixtures::run_fixture_suite;
use jbtriple::fuzz::{fuzz, parse_families, FuzzConfig};
use jbtriple::linalg::{c64, random_gaussian, CMatrix, CVector, C64};
use jbtriple::relations::{relate, shift_automorphism, RelationKind};
use jbtriple::sampling::{random_pair, random_unitary_tripotent, unitary_pair, PairMode};
use jbtriple::triples::{triple_product, Element, Payload, SystemKind, TripleSystem};
use jbtriple::tripotents::{peirce_project, random_tripotent_element, Tripotent};
use jbtriple::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{oracle_product, payload_distance, random_element, systems, unitary_with_det};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng_for(tag: &str, sys: &TripleSystem, k: u64) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes().chain(sys.to_string().bytes()) {
        h = (h ^ b as u64).wrapping_mul(0x100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(h ^ k)
}

fn unitary_families() -> Vec<TripleSystem> {
    let mut out = Vec::new();
    for n in 2..=8 {
        out.push(TripleSystem::square(n).unwrap());
        out.push(TripleSystem::symmetric(n).unwrap());
        out.push(TripleSystem::antisymmetric(2 * n).unwrap());
    }
    for d in 3..=10 {
        out.push(TripleSystem::spin(d).unwrap());
    }
    out
}

fn structural_families() -> Vec<TripleSystem> {
    systems(&[
        "M1", "M2", "M3", "M4", "M2x3", "M3x2", "M2x4", "M2s", "M3s", "M4s", "M4a", "M5a", "M6a", "Spin3", "Spin4",
        "Spin6", "Spin9",
    ])
}

fn le2_families() -> Vec<TripleSystem> {
    systems(&[
        "M2", "M3", "M4", "M5", "M6", "M2x3", "M3x4", "M2s", "M3s", "M4s", "M5s", "M4a", "M6a", "M8a", "Spin3",
        "Spin4", "Spin6", "Spin9",
    ])
}

/// Whether the pair satisfies the determinant condition for a ~ₕ,ₜ chain,
/// computed directly from the payloads.
fn determinant_condition(u: &Element, e: &Element) -> bool {
    let near = |z: C64, w: C64| (z - w).norm() <= 1e-8;
    let one = c64(1.0, 0.0);
    match (u.system().kind(), u.payload(), e.payload()) {
        (SystemKind::Rectangular { .. }, Payload::Matrix(a), Payload::Matrix(b)) => {
            let d = (b.adjoint() * a).determinant();
            near(d, one) || near(d, -one)
        }
        (SystemKind::Symmetric { .. }, Payload::Matrix(a), Payload::Matrix(b)) => {
            let (da, db) = (a.determinant(), b.determinant());
            near(da, db) || near(da, -db)
        }
        (SystemKind::Antisymmetric { .. }, Payload::Matrix(a), Payload::Matrix(b)) => {
            near(a.determinant(), b.determinant())
        }
        (SystemKind::Spin { .. }, Payload::Vector(a), Payload::Vector(b)) => {
            let (qa, qb): (C64, C64) = (a.iter().map(|z| z * z).sum(), b.iter().map(|z| z * z).sum());
            near(qa, qb) || near(qa, -qb)
        }
        _ => panic!("unexpected payload"),
    }
}

fn expected_simht_bound(sys: &TripleSystem) -> usize {
    match sys.kind() {
        SystemKind::Spin { .. } => 3,
        SystemKind::Rectangular { rows, .. } | SystemKind::Symmetric { n: rows } => 2 * rows - 1,
        SystemKind::Antisymmetric { n } => 2 * (n / 2) - 1,
    }
}

fn accepted(c: &ChainCertificate) -> bool {
    let check = verify_certificate(c);
    check.accepted && check.max_residual <= 1e-9
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let report = run_fixture_suite();
    let elapsed = start.elapsed();
    let residual = report.max_positive_residual();
    let mismatches: Vec<String> =
        report.mismatches().iter().map(|(id, c)| format!("{id}: {}", c.detail)).collect();
    let pass = report.passed() && residual <= 1e-9 && elapsed < Duration::from_secs(5);
    let mut detail = format!(
        "{} cases, {} checks, max residual {residual:.1e}, {:.2}s",
        report.cases.len(),
        report.check_count(),
        elapsed.as_secs_f64()
    );
    if !mismatches.is_empty() {
        detail.push_str(&format!("; mismatches: {}", mismatches.join("; ")));
    }
    outcome(pass, detail)
}

#[derive(Default)]
struct UnitarySweep {
    pairs: usize,
    false_positive: Vec<String>,
    false_negative: Vec<String>,
    simht_too_long: Vec<String>,
    ht_too_long: Vec<String>,
    ht_unexpected: Vec<String>,
    simht_certificates: usize,
    ht_certificates: usize,
}

fn unitary_sweep(per_family: usize) -> (UnitarySweep, Duration) {
    let start = Instant::now();
    let mut s = UnitarySweep::default();
    for sys in unitary_families() {
        let bound = expected_simht_bound(&sys);
        for k in 0..per_family as u64 {
            let mut rng = rng_for("unitary", &sys, k);
            let admissible = rng.gen_bool(0.5);
            let (u, e) = unitary_pair(&sys, admissible, &mut rng).expect("unitary pair");
            s.pairs += 1;
            let expect = determinant_condition(u.element(), e.element());
            let tag = format!("{sys} #{k}");
            match cert_simht_unitary(&u, &e) {
                Ok(c) if accepted(&c) => {
                    s.simht_certificates += 1;
                    if !expect {
                        s.false_positive.push(tag.clone());
                    }
                    if c.length() > bound {
                        s.simht_too_long.push(format!("{tag}: {} > {bound}", c.length()));
                    }
                }
                Ok(_) => s.false_negative.push(format!("{tag}: certificate rejected")),
                Err(err) => {
                    if expect {
                        s.false_negative.push(format!("{tag}: {err}"));
                    }
                }
            }
            match cert_ht(&u, &e) {
                Ok(c) if accepted(&c) => {
                    s.ht_certificates += 1;
                    if c.length() > bound + 1 {
                        s.ht_too_long.push(format!("{tag}: {} > {}", c.length(), bound + 1));
                    }
                }
                Ok(_) => s.ht_unexpected.push(format!("{tag}: LE_HT certificate rejected")),
                Err(Error::InvariantObstruction(_)) => {}
                Err(err) => s.ht_unexpected.push(format!("{tag}: {err}")),
            }
        }
    }
    (s, start.elapsed())
}

fn criterion_2(s: &UnitarySweep, elapsed: Duration) -> Outcome {
    let pass = s.false_positive.is_empty() && s.false_negative.is_empty() && elapsed < Duration::from_secs(120);
    let mut detail = format!(
        "{} pairs, {} false positives, {} false negatives, {:.1}s",
        s.pairs,
        s.false_positive.len(),
        s.false_negative.len(),
        elapsed.as_secs_f64()
    );
    for f in s.false_positive.iter().chain(&s.false_negative).take(5) {
        detail.push_str(&format!("; {f}"));
    }
    outcome(pass, detail)
}

fn criterion_3(s: &UnitarySweep) -> Outcome {
    let mut too_long = s.simht_too_long.clone();
    too_long.extend(s.ht_too_long.iter().cloned());
    too_long.extend(s.ht_unexpected.iter().cloned());
    // LE_HT certificates below non-unitary corners, not reached by the unitary sweep.
    let mut corner = 0;
    for sys in unitary_families() {
        let bound = expected_simht_bound(&sys);
        for k in 0..50u64 {
            let mut rng = rng_for("corner", &sys, k);
            let (u, e) = random_pair(&sys, PairMode::InCorner, &mut rng).expect("corner pair");
            match cert_ht(&u, &e) {
                Ok(c) if accepted(&c) => {
                    corner += 1;
                    if c.length() > bound + 1 {
                        too_long.push(format!("{sys} corner #{k}: {} > {}", c.length(), bound + 1));
                    }
                }
                Ok(_) => too_long.push(format!("{sys} corner #{k}: certificate rejected")),
                Err(Error::InvariantObstruction(_)) => {}
                Err(err) => too_long.push(format!("{sys} corner #{k}: {err}")),
            }
        }
    }
    let mut detail = format!(
        "{} SIM_HT and {} LE_HT certificates within bounds, {} violations",
        s.simht_certificates,
        s.ht_certificates + corner,
        too_long.len()
    );
    for f in too_long.iter().take(5) {
        detail.push_str(&format!("; {f}"));
    }
    outcome(too_long.is_empty(), detail)
}

fn le2_pairs(sys: &TripleSystem, count: usize) -> Vec<(Tripotent, Tripotent)> {
    let mut out = Vec::with_capacity(count);
    let mut k = 0u64;
    while out.len() < count && k < 50 * count as u64 {
        let mut rng = rng_for("le2", sys, k);
        k += 1;
        let mode = PairMode::ALL[rng.gen_range(0..PairMode::ALL.len())];
        let Ok((u, e)) = random_pair(sys, mode, &mut rng) else { continue };
        if relate(RelationKind::Le2, &u, &e).map(|v| v.holds).unwrap_or(false) {
            out.push((u, e));
        }
    }
    out
}

fn criteria_4_5() -> (Outcome, Outcome) {
    let mut nt_pairs = 0;
    let mut nt_failures = Vec::new();
    let mut hct_pairs = 0;
    let mut hct_failures = Vec::new();
    for sys in le2_families() {
        let pairs = le2_pairs(&sys, 200);
        if pairs.len() < 200 {
            nt_failures.push(format!("{sys}: only {} LE_2 pairs sampled", pairs.len()));
        }
        let hct_supported = !matches!(sys.kind(), SystemKind::Rectangular { rows, cols } if rows != cols);
        for (k, (u, e)) in pairs.iter().enumerate() {
            nt_pairs += 1;
            match cert_nt(u, e) {
                Ok(c) if accepted(&c) => {
                    let trivial = c.length() == 0 && u.element().distance(e.element()) <= 1e-9;
                    if c.length() != 2 && !trivial {
                        nt_failures.push(format!("{sys} #{k}: length {}", c.length()));
                    }
                }
                Ok(_) => nt_failures.push(format!("{sys} #{k}: certificate rejected")),
                Err(err) => nt_failures.push(format!("{sys} #{k}: {err}")),
            }
            if hct_supported {
                hct_pairs += 1;
                match cert_hct(u, e) {
                    Ok(c) if accepted(&c) => {}
                    Ok(_) => hct_failures.push(format!("{sys} #{k}: certificate rejected")),
                    Err(err) => hct_failures.push(format!("{sys} #{k}: {err}")),
                }
            }
        }
    }
    let describe = |n: usize, fails: &[String], what: &str| {
        let mut d = format!("{what}: {}/{n} verified", n - fails.len().min(n));
        for f in fails.iter().take(5) {
            d.push_str(&format!("; {f}"));
        }
        d
    };
    (
        outcome(nt_failures.is_empty(), describe(nt_pairs, &nt_failures, "LE_NT")),
        outcome(hct_failures.is_empty(), describe(hct_pairs, &hct_failures, "LE_HCT")),
    )
}

fn criterion_6() -> Outcome {
    let tokens: Vec<String> =
        ["matrix:2..5", "rectangular:1..3", "symmetric:2..5", "antisymmetric:4..8", "spin:3..8"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    let systems = parse_families(&tokens, 8, 1e-9).expect("family tokens");
    let report = fuzz(&FuzzConfig { systems, seeds: 0..1000 });
    let mut detail = format!(
        "{} families, {} pairs, {} lattice violations, {} certificate failures, {} numerical errors",
        report.families.len(),
        report.total_pairs(),
        report.lattice_violations.len(),
        report.certificate_failures.len(),
        report.numerical_errors.len()
    );
    for f in report.lattice_violations.iter().chain(&report.certificate_failures).chain(&report.numerical_errors).take(5)
    {
        detail.push_str(&format!("; seed {} {} {}: {}", f.seed, f.system, f.check, f.detail));
    }
    outcome(report.passed(), detail)
}

fn normalized<R: Rng>(sys: &TripleSystem, rng: &mut R) -> Element {
    let x = random_element(sys, rng);
    let n = x.hs_norm();
    x.scale_real(1.0 / n)
}

fn tp(x: &Element, y: &Element, z: &Element) -> Element {
    triple_product(x, y, z).expect("same system")
}

/// Largest residual over the structural identities for one random instance.
fn structural_instance<R: Rng>(sys: &TripleSystem, rng: &mut R) -> f64 {
    let [a, b, x, y, z] = std::array::from_fn(|_| normalized(sys, rng));
    let mut worst: f64 = 0.0;
    let mut note = |r: f64| worst = worst.max(if r.is_finite() { r } else { f64::INFINITY });

    note(payload_distance(tp(&x, &y, &z).payload(), &oracle_product(&x, &y, &z)));

    // {a,b,{x,y,z}} = {{a,b,x},y,z} − {x,{b,a,y},z} + {x,y,{a,b,z}}
    let lhs = tp(&a, &b, &tp(&x, &y, &z));
    let rhs = tp(&tp(&a, &b, &x), &y, &z).sub(&tp(&x, &tp(&b, &a, &y), &z)).add(&tp(&x, &y, &tp(&a, &b, &z)));
    note(lhs.distance(&rhs));

    let rank = rng.gen_range(1..=sys.rank());
    let u = Tripotent::new(random_tripotent_element(sys, rank, rng).expect("tripotent")).expect("tripotent");

    let p: Vec<CMatrix> = (0..3).map(|j| u.projector_matrix(j)).collect();
    let n = p[0].nrows();
    let id = CMatrix::identity(n, n);
    for i in 0..3 {
        note((&p[i] * &p[i] - &p[i]).norm());
        for j in 0..3 {
            if i != j {
                note((&p[i] * &p[j]).norm());
            }
        }
    }
    note((&p[0] + &p[1] + &p[2] - &id).norm());
    let basis = sys.basis();
    let l_cols: Vec<CVector> = basis.iter().map(|v| sys.coordinates(&tp(u.element(), u.element(), v))).collect();
    let l = CMatrix::from_columns(&l_cols);
    note((&l - &p[2] - &p[1] * c64(0.5, 0.0)).norm());

    // P₂ = Q²
    let p2x = peirce_project(&u, 2, &x).expect("projection");
    note(u.q_apply(&u.q_apply(&x)).distance(&p2x));

    // {Eᵢ, Eⱼ, Eₖ} ⊂ E_{i−j+k}
    let parts: Vec<[Element; 3]> = [&a, &b, &x]
        .iter()
        .map(|w| std::array::from_fn(|j| peirce_project(&u, j as u8, w).expect("projection")))
        .collect();
    for i in 0..3usize {
        for j in 0..3usize {
            for k in 0..3usize {
                let t = tp(&parts[0][i], &parts[1][j], &parts[2][k]);
                let target = i as i32 - j as i32 + k as i32;
                let r = if (0..=2).contains(&target) {
                    t.distance(&peirce_project(&u, target as u8, &t).expect("projection"))
                } else {
                    t.norm()
                };
                note(r);
            }
        }
    }
    worst
}

fn criterion_7() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_at = String::new();
    let mut instances = 0;
    for sys in structural_families() {
        let mut rng = rng_for("structure", &sys, 0);
        for k in 0..500 {
            let r = structural_instance(&sys, &mut rng);
            instances += 1;
            if r > worst {
                worst = r;
                worst_at = format!("{sys} #{k}");
            }
        }
    }

    let mut shift_worst: f64 = 0.0;
    let mut verdict_changes = Vec::new();
    let shift_systems = systems(&["M2", "M3", "M4", "M2s", "M3s", "M4s", "M4a", "M6a"]);
    for k in 0..100u64 {
        let sys = shift_systems[k as usize % shift_systems.len()];
        let mut rng = rng_for("shift", &sys, k);
        let mode = PairMode::ALL[rng.gen_range(0..PairMode::ALL.len())];
        let (u, e) = random_pair(&sys, mode, &mut rng).expect("pair");
        let w = if e.is_unitary() {
            e.clone()
        } else {
            Tripotent::new(random_unitary_tripotent(&sys, &mut rng).expect("unitary")).expect("unitary")
        };
        let phi = shift_automorphism(&w).expect("shift automorphism");
        let [x, y, z] = std::array::from_fn(|_| normalized(&sys, &mut rng));
        let image = phi.apply(&tp(&x, &y, &z)).expect("apply");
        let mapped = tp(&phi.apply(&x).unwrap(), &phi.apply(&y).unwrap(), &phi.apply(&z).unwrap());
        shift_worst = shift_worst.max(image.distance(&mapped));
        shift_worst = shift_worst.max(phi.apply(&phi.unit()).unwrap().distance(w.element()));

        let pu = Tripotent::new(phi.inverse(u.element()).unwrap()).expect("image of a tripotent");
        let pe = Tripotent::new(phi.inverse(e.element()).unwrap()).expect("image of a tripotent");
        for kind in RelationKind::ALL {
            let before = relate(kind, &u, &e).expect("relate").holds;
            let after = relate(kind, &pu, &pe).expect("relate").holds;
            if before != after {
                verdict_changes.push(format!("{sys} #{k} {kind}: {before} -> {after}"));
            }
        }
    }
    let pass = worst <= 1e-7 && shift_worst <= 1e-8 && verdict_changes.is_empty();
    let mut detail = format!(
        "{instances} instances, max residual {worst:.1e} ({worst_at}); shift residual {shift_worst:.1e}, {} verdict changes",
        verdict_changes.len()
    );
    for f in verdict_changes.iter().take(5) {
        detail.push_str(&format!("; {f}"));
    }
    outcome(pass, detail)
}

fn symmetry_residual(s: &CMatrix) -> f64 {
    let n = s.nrows();
    (s - s.adjoint()).norm() + (s * s - CMatrix::identity(n, n)).norm()
}

/// Two orthonormal vectors spanning a random plane.
fn random_plane<R: Rng>(rng: &mut R, n: usize) -> (CVector, CVector) {
    let g = random_gaussian(rng, n, 2);
    let a = g.column(0).normalize();
    let b = g.column(1) - &a * a.dotc(&g.column(1));
    (a, b.normalize())
}

/// Householder symmetry sending `x` to `y` (equal norms, `⟨x,y⟩` real).
fn householder(x: &CVector, y: &CVector) -> CMatrix {
    let n = x.len();
    let w = x - y;
    if w.norm() < 1e-12 {
        return CMatrix::identity(n, n);
    }
    let w = w.normalize();
    CMatrix::identity(n, n) - &w * w.adjoint() * c64(2.0, 0.0)
}

/// Writes a 2×2 special unitary as a product of two symmetries `t1·t2`.
fn su2_as_symmetries(m: &CMatrix) -> (CMatrix, CMatrix) {
    let id = CMatrix::identity(2, 2);
    let tr = m.trace();
    let disc = (tr * tr - c64(4.0, 0.0)).sqrt();
    let lambda = (tr + disc) * 0.5;
    if (m - &id * lambda).norm() < 1e-10 {
        // m = ±I
        return (m.clone(), id);
    }
    let c1 = CVector::from_vec(vec![m[(0, 1)], lambda - m[(0, 0)]]);
    let c2 = CVector::from_vec(vec![lambda - m[(1, 1)], m[(1, 0)]]);
    let x1 = if c1.norm() >= c2.norm() { c1 } else { c2 }.normalize();
    let x2 = CVector::from_vec(vec![-x1[1].conj(), x1[0].conj()]);
    let v = CMatrix::from_columns(&[x1, x2]);
    let swap = CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]);
    let t2 = &v * swap * v.adjoint();
    let t1 = m * &t2;
    (t1, t2)
}

fn random_reflection<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let w = random_gaussian(rng, n, 1).column(0).normalize();
    CMatrix::identity(n, n) - &w * w.adjoint() * c64(2.0, 0.0)
}

/// One proposal: at most three symmetries with product `u`, or `None`.
///
/// In M₂ a unitary of determinant 1 has spectrum {λ, λ̄}; a reflection fixes
/// the determinant first. In M₃ a plane is searched for a unit `v` with
/// `v*uv` real, so that the reflection `s` taking `uv` to `dv` (d = −det u)
/// leaves `su` with eigenvalue `d` on `v` and a determinant-one block on `v⊥`.
fn propose<R: Rng>(u: &CMatrix, rng: &mut R) -> Option<Vec<CMatrix>> {
    let n = u.nrows();
    let d = -u.determinant().re.signum();
    if n == 2 {
        if d < 0.0 {
            let (t1, t2) = su2_as_symmetries(u);
            return Some(vec![t1, t2]);
        }
        let s = random_reflection(rng, 2);
        let (t1, t2) = su2_as_symmetries(&(&s * u));
        return Some(vec![s, t1, t2]);
    }
    let (a, b) = random_plane(rng, n);
    let ua = u * &a;
    let ub = u * &b;
    let (ia, ib) = (a.dotc(&ua).im, b.dotc(&ub).im);
    let ic = (a.dotc(&ub) + b.dotc(&ua)).im;
    // Im(v*uv) = (ia+ib)/2 + (ia−ib)/2 cos 2θ + ic/2 sin 2θ for v = cos θ a + sin θ b.
    let r = ((ia - ib) * (ia - ib) + ic * ic).sqrt() / 2.0;
    let mean = (ia + ib) / 2.0;
    if r < 1e-12 || mean.abs() > r {
        return None;
    }
    let phi = ic.atan2(ia - ib);
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let theta = (phi + sign * (-mean / r).clamp(-1.0, 1.0).acos()) / 2.0;
    let v = &a * c64(theta.cos(), 0.0) + &b * c64(theta.sin(), 0.0);
    let s = householder(&(u * &v), &(&v * c64(d, 0.0)));
    let w = &s * u;
    let basis = orthonormal_complement_of(&v);
    let (t1, t2) = su2_as_symmetries(&(basis.adjoint() * &w * &basis));
    // su = d on v and t1·t2 on v⊥.
    let vv = &v * v.adjoint();
    let lift = |t: &CMatrix, on_v: f64| &vv * c64(on_v, 0.0) + &basis * t * basis.adjoint();
    Some(vec![s, lift(&t1, d), lift(&t2, 1.0)])
}

/// Randomized search for `u = s₁⋯s_k` with symmetries `sᵢ`, k ≤ 4 (n ∈ {2, 3},
/// det u = ±1). Half the proposals first multiply by a random reflection,
/// which moves the spectrum when `v*uv` is never real.
fn radjavi_search<R: Rng>(u: &CMatrix, budget: usize, rng: &mut R) -> (Option<Vec<CMatrix>>, usize) {
    let n = u.nrows();
    for proposal in 1..=budget {
        let prefix = (proposal > 1 && rng.gen_bool(0.5)).then(|| random_reflection(rng, n));
        let target = prefix.as_ref().map_or_else(|| u.clone(), |s| s * u);
        let Some(rest) = propose(&target, rng) else { continue };
        let factors: Vec<CMatrix> = prefix.into_iter().chain(rest).collect();
        let product = factors.iter().fold(CMatrix::identity(n, n), |acc, f| acc * f);
        let ok = (product - u).norm() <= 1e-8 && factors.iter().all(|f| symmetry_residual(f) <= 1e-8);
        if ok {
            return (Some(factors), proposal);
        }
    }
    (None, budget)
}

fn orthonormal_complement_of(v: &CVector) -> CMatrix {
    let n = v.len();
    let mut cols: Vec<CVector> = vec![v.clone()];
    for i in 0..n {
        let mut x = CVector::zeros(n);
        x[i] = c64(1.0, 0.0);
        for c in &cols {
            x -= c * c.dotc(&x);
        }
        if x.norm() > 1e-6 && cols.len() < n {
            cols.push(x.normalize());
        }
    }
    CMatrix::from_columns(&cols[1..])
}

fn criterion_8() -> (Outcome, Vec<String>) {
    const BUDGET: usize = 100_000;
    let mut warnings = Vec::new();
    let mut failures = Vec::new();
    let mut found = 0;
    let mut proposals = 0;
    let mut max_factors = 0;
    for n in [2usize, 3] {
        let sys = TripleSystem::square(n).unwrap();
        for k in 0..20u64 {
            let mut rng = rng_for("radjavi", &sys, k);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let u = unitary_with_det(&mut rng, n, sign);
            let (factors, used) = radjavi_search(&u, BUDGET, &mut rng);
            proposals += used;
            let Some(factors) = factors else {
                warnings.push(format!("M{n} #{k}: no factorization within {BUDGET} proposals"));
                continue;
            };
            found += 1;
            max_factors = max_factors.max(factors.len());
            // The partial products form a ~ₕ chain from the identity to u.
            let mut node = CMatrix::identity(n, n);
            let mut prev = Tripotent::new(Element::from_matrix(sys, node.clone()).unwrap()).unwrap();
            for f in &factors {
                node = &node * f;
                let next = Tripotent::new(Element::from_matrix(sys, node.clone()).unwrap()).unwrap();
                if !relate(RelationKind::SimH, &prev, &next).unwrap().holds {
                    failures.push(format!("M{n} #{k}: chain link is not SIM_H"));
                }
                prev = next;
            }
            if factors.len() > 4 {
                failures.push(format!("M{n} #{k}: {} factors", factors.len()));
            }
        }
    }
    let mut detail = format!(
        "{found}/40 unitaries factored into at most {max_factors} symmetries, {proposals} proposals, {} warnings",
        warnings.len()
    );
    for f in failures.iter().take(5) {
        detail.push_str(&format!("; {f}"));
    }
    (outcome(failures.is_empty(), detail), warnings)
}

fn main() -> ExitCode {
    // `cargo test -- --list` and similar harness probes.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let mut all = true;
    let mut report = |n: usize, o: Outcome| {
        all &= o.pass;
        println!("criterion {n}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    };
    report(1, criterion_1());
    let (sweep, elapsed) = unitary_sweep(200);
    report(2, criterion_2(&sweep, elapsed));
    report(3, criterion_3(&sweep));
    let (c4, c5) = criteria_4_5();
    report(4, c4);
    report(5, c5);
    report(6, criterion_6());
    report(7, criterion_7());
    let (c8, warnings) = criterion_8();
    report(8, c8);
    for w in warnings {
        println!("warning: {w}");
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
