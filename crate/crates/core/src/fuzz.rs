//! Seeded fuzzing of the relation lattice and the chain builders.
//!
//! Every `(seed, system)` cell draws its own generator from the seed and the
//! system name, so reports do not depend on thread scheduling or on which
//! other families are in the run.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chains::{
    cert_hct, cert_ht, cert_nt, cert_simht_unitary, hull_invariant, simht_length_bound, verify_certificate,
    ChainCertificate, Claim,
};
use crate::error::{Error, Result};
use crate::linalg::{c64, from_real, random_orthogonal, random_unitary, CMatrix};
use crate::relations::{audit, RelationKind};
use crate::sampling::{random_pair, PairMode};
use crate::triples::{tp, Element, SystemKind, TripleSystem};
use crate::tripotents::{is_tripotent, Tripotent};

pub const MAX_MATRIX_DIM: usize = 12;
pub const MAX_SPIN_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzConfig {
    pub systems: Vec<TripleSystem>,
    pub seeds: Range<u64>,
}

/// Expands family tokens into systems.
///
/// A token is either a family name with an optional dimension range
/// (`matrix`, `rectangular`, `symmetric`, `antisymmetric`, `spin`, e.g.
/// `spin:3..8`), or a single system written as `M3`, `M2x3`, `M3s`, `M4a` or
/// `Spin5`. Ranges are inclusive and default to the smallest valid dimension
/// up to `max_dim`.
pub fn parse_families(tokens: &[String], max_dim: usize, tol: f64) -> Result<Vec<TripleSystem>> {
    let mut kinds: Vec<SystemKind> = Vec::new();
    for token in tokens.iter().flat_map(|t| t.split(',')).map(str::trim).filter(|t| !t.is_empty()) {
        kinds.extend(parse_token(token, max_dim)?);
    }
    let mut systems = Vec::new();
    for kind in kinds {
        let (cap, size) = match kind {
            SystemKind::Spin { dim } => (MAX_SPIN_DIM, dim),
            _ => {
                let (r, c) = kind.shape();
                (MAX_MATRIX_DIM, r.max(c))
            }
        };
        if size > cap {
            return Err(Error::Config(format!("{kind} exceeds the supported size {cap}")));
        }
        let sys = TripleSystem::new(kind, tol).map_err(|e| Error::Config(format!("{kind}: {e}")))?;
        if !systems.contains(&sys) {
            systems.push(sys);
        }
    }
    Ok(systems)
}

fn parse_range(s: Option<&str>, lo: usize, hi: usize) -> Result<Range<usize>> {
    let bad = || Error::Config(format!("bad dimension range {:?}", s.unwrap_or_default()));
    match s {
        None => Ok(lo..hi.max(lo - 1) + 1),
        Some(s) => match s.split_once("..") {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad())?;
                let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
                Ok(a.max(lo)..b + 1)
            }
            None => {
                let n: usize = s.trim().parse().map_err(|_| bad())?;
                Ok(n..n + 1)
            }
        },
    }
}

fn parse_token(token: &str, max_dim: usize) -> Result<Vec<SystemKind>> {
    let (name, range) = match token.split_once(':') {
        Some((n, r)) => (n, Some(r)),
        None => (token, None),
    };
    let lower = name.to_ascii_lowercase();
    let family: Option<(usize, fn(usize) -> SystemKind)> = match lower.as_str() {
        "matrix" | "square" => Some((2, |n| SystemKind::Rectangular { rows: n, cols: n })),
        "symmetric" => Some((2, |n| SystemKind::Symmetric { n })),
        "antisymmetric" => Some((4, |n| SystemKind::Antisymmetric { n })),
        "spin" => Some((3, |dim| SystemKind::Spin { dim })),
        _ => None,
    };
    if let Some((lo, make)) = family {
        return Ok(parse_range(range, lo, max_dim)?.map(make).collect());
    }
    if lower == "rectangular" {
        let dims = parse_range(range, 1, max_dim)?;
        let mut out = Vec::new();
        for r in dims.clone() {
            for c in dims.clone() {
                if r != c {
                    out.push(SystemKind::Rectangular { rows: r, cols: c });
                }
            }
        }
        return Ok(out);
    }
    if range.is_some() {
        return Err(Error::Config(format!("unknown family {name:?}")));
    }
    parse_system_name(&lower).ok_or_else(|| Error::Config(format!("unknown family {token:?}")))
}

fn parse_system_name(s: &str) -> Option<Vec<SystemKind>> {
    let s: String = s.chars().filter(|c| !matches!(c, '(' | ')' | ' ')).collect();
    if let Some(d) = s.strip_prefix("spin") {
        return Some(vec![SystemKind::Spin { dim: d.parse().ok()? }]);
    }
    let body = s.strip_prefix('m')?;
    if let Some(n) = body.strip_suffix('s') {
        return Some(vec![SystemKind::Symmetric { n: n.parse().ok()? }]);
    }
    if let Some(n) = body.strip_suffix('a') {
        return Some(vec![SystemKind::Antisymmetric { n: n.parse().ok()? }]);
    }
    let (rows, cols) = match body.split_once('x') {
        Some((r, c)) => (r.parse().ok()?, c.parse().ok()?),
        None => {
            let n = body.parse().ok()?;
            (n, n)
        }
    };
    Some(vec![SystemKind::Rectangular { rows, cols }])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub seed: u64,
    pub system: String,
    pub mode: String,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FamilyStats {
    pub system: String,
    pub pairs: usize,
    pub le2_pairs: usize,
    pub unitary_pairs: usize,
    pub projection_pairs: usize,
    pub certificates: usize,
    pub lattice_violations: usize,
    pub certificate_failures: usize,
    pub numerical_errors: usize,
    pub max_lengths: BTreeMap<Claim, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzReport {
    pub seeds: (u64, u64),
    pub families: Vec<FamilyStats>,
    pub lattice_violations: Vec<Finding>,
    pub certificate_failures: Vec<Finding>,
    pub numerical_errors: Vec<Finding>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.lattice_violations.is_empty() && self.certificate_failures.is_empty() && self.numerical_errors.is_empty()
    }

    pub fn total_pairs(&self) -> usize {
        self.families.iter().map(|f| f.pairs).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "seeds {}..{}", self.seeds.0, self.seeds.1);
        let _ = writeln!(
            out,
            "{:<10} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6}  max lengths",
            "system", "pairs", "le2", "unit", "proj", "certs", "lat", "cert!", "num!"
        );
        for f in &self.families {
            let lengths: Vec<String> = f.max_lengths.iter().map(|(c, l)| format!("{c}={l}")).collect();
            let _ = writeln!(
                out,
                "{:<10} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6}  {}",
                f.system,
                f.pairs,
                f.le2_pairs,
                f.unitary_pairs,
                f.projection_pairs,
                f.certificates,
                f.lattice_violations,
                f.certificate_failures,
                f.numerical_errors,
                lengths.join(" ")
            );
        }
        for (label, list) in [
            ("lattice violation", &self.lattice_violations),
            ("certificate failure", &self.certificate_failures),
            ("numerical error", &self.numerical_errors),
        ] {
            for x in list {
                let _ = writeln!(out, "{label}: seed {} {} [{}] {}: {}", x.seed, x.system, x.mode, x.check, x.detail);
            }
        }
        let _ = writeln!(out, "{}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

#[derive(Default)]
struct Cell {
    stats: FamilyStats,
    lattice: Vec<Finding>,
    certs: Vec<Finding>,
    errors: Vec<Finding>,
}

impl Cell {
    fn finding(&self, seed: u64, mode: &str, check: &str, detail: String) -> Finding {
        Finding { seed, system: self.stats.system.clone(), mode: mode.to_string(), check: check.to_string(), detail }
    }

    fn lattice(&mut self, seed: u64, mode: &str, check: &str, detail: String) {
        self.stats.lattice_violations += 1;
        let f = self.finding(seed, mode, check, detail);
        self.lattice.push(f);
    }

    fn cert(&mut self, seed: u64, mode: &str, check: &str, detail: String) {
        self.stats.certificate_failures += 1;
        let f = self.finding(seed, mode, check, detail);
        self.certs.push(f);
    }

    fn error(&mut self, seed: u64, mode: &str, check: &str, err: &Error) {
        self.stats.numerical_errors += 1;
        let f = self.finding(seed, mode, check, err.to_string());
        self.errors.push(f);
    }

    /// Verifies an emitted certificate and its length against `bound`.
    fn record(&mut self, seed: u64, mode: &str, cert: &ChainCertificate, bound: usize) {
        self.stats.certificates += 1;
        let len = cert.length();
        let slot = self.stats.max_lengths.entry(cert.claim).or_insert(0);
        *slot = (*slot).max(len);
        let check = verify_certificate(cert);
        if !check.accepted {
            self.cert(seed, mode, cert.claim.name(), check.problems.join("; "));
        }
        if len > bound {
            self.cert(seed, mode, cert.claim.name(), format!("length {len} exceeds {bound}"));
        }
    }
}

/// A stable 64-bit mix of the seed and the system name.
fn cell_seed(seed: u64, sys: &TripleSystem) -> u64 {
    sys.to_string().bytes().fold(seed ^ 0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3))
}

/// Whether `≤ₕ꜀,ₜ` coincides with `≤₂` in `sys`.
fn hct_is_le2(sys: &TripleSystem) -> bool {
    match sys.kind() {
        SystemKind::Rectangular { rows, cols } => rows == cols,
        _ => true,
    }
}

fn check_pair(cell: &mut Cell, seed: u64, mode: &str, u: &Tripotent, e: &Tripotent) {
    use RelationKind::*;
    let sys = *e.system();
    cell.stats.pairs += 1;
    let a = match audit(u, e) {
        Ok(a) => a,
        Err(err) => return cell.error(seed, mode, "audit", &err),
    };
    for (p, q) in &a.violations {
        cell.lattice(seed, mode, "implication", format!("{p} holds but {q} fails"));
    }

    let half = |s: f64| u.element().scale_real(s).add(e.element()).scale_real(0.5);
    let halves = is_tripotent(&half(1.0), sys.tol()).0 && is_tripotent(&half(-1.0), sys.tol()).0;
    if a.holds(SimH) != halves {
        cell.lattice(seed, mode, "SIM_H half sums", format!("SIM_H {} but half sums tripotent {halves}", a.holds(SimH)));
    }

    if a.holds(LeN) {
        let w = tp(u.element(), u.element(), e.element());
        let ok = Tripotent::new(w).map(|w| crate::relations::relate(Sim2, u, &w).map(|v| v.holds).unwrap_or(false));
        if !matches!(ok, Ok(true)) {
            cell.lattice(seed, mode, "LE_N normal part", "u is not ~2 {u,u,e}".into());
        }
    }

    let bound = simht_length_bound(&sys);
    if a.holds(Le2) {
        cell.stats.le2_pairs += 1;
        match cert_nt(u, e) {
            Ok(c) => cell.record(seed, mode, &c, 2),
            Err(err) => cell.cert(seed, mode, "LE_NT", err.to_string()),
        }
        match cert_hct(u, e) {
            Ok(c) => cell.record(seed, mode, &c, bound + 1),
            Err(err) if hct_is_le2(&sys) => cell.cert(seed, mode, "LE_HCT", err.to_string()),
            Err(_) => {}
        }
        match cert_ht(u, e) {
            Ok(c) => cell.record(seed, mode, &c, bound + 1),
            Err(Error::InvariantObstruction(_)) => {}
            Err(err) => cell.error(seed, mode, "LE_HT", &err),
        }
    } else {
        for (name, r) in [("LE_NT", cert_nt(u, e)), ("LE_HCT", cert_hct(u, e))] {
            if r.is_ok() {
                cell.cert(seed, mode, name, "certificate emitted although u is not in the Peirce-2 space of e".into());
            }
        }
    }

    if u.is_unitary() && e.is_unitary() {
        cell.stats.unitary_pairs += 1;
        let possible = match hull_invariant(u, e) {
            Ok(inv) => inv.possible,
            Err(err) => return cell.error(seed, mode, "hull invariant", &err),
        };
        match (cert_simht_unitary(u, e), possible) {
            (Ok(c), true) => cell.record(seed, mode, &c, bound),
            (Ok(_), false) => cell.cert(seed, mode, "SIM_HT", "certificate despite the invariant obstruction".into()),
            (Err(Error::InvariantObstruction(_)), false) => {}
            (Err(err), _) => cell.cert(seed, mode, "SIM_HT", err.to_string()),
        }
    }
}

/// Projections of a square or symmetric system: `Q diag(1,…,1,0,…) Q*`, with
/// `Q` real orthogonal in the symmetric case so the result stays symmetric.
fn projection_pair<R: Rng + ?Sized>(sys: &TripleSystem, n: usize, rng: &mut R) -> Result<(Tripotent, Tripotent)> {
    let q: CMatrix = match sys.kind() {
        SystemKind::Symmetric { .. } => from_real(&random_orthogonal(rng, n)),
        _ => random_unitary(rng, n),
    };
    let mask_e: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.6)).collect();
    let mask_u: Vec<bool> = if rng.gen_bool(0.5) {
        mask_e.iter().map(|&b| b && rng.gen_bool(0.6)).collect()
    } else {
        (0..n).map(|_| rng.gen_bool(0.5)).collect()
    };
    let other = match sys.kind() {
        SystemKind::Symmetric { .. } => from_real(&random_orthogonal(rng, n)),
        _ => random_unitary(rng, n),
    };
    let basis_u = if rng.gen_bool(0.5) { &q } else { &other };
    let proj = |b: &CMatrix, mask: &[bool]| -> CMatrix {
        let d = CMatrix::from_diagonal(&mask.iter().map(|&m| c64(if m { 1.0 } else { 0.0 }, 0.0)).collect::<Vec<_>>().into());
        b * d * b.adjoint()
    };
    let e = Tripotent::new(Element::from_matrix(*sys, proj(&q, &mask_e))?)?;
    let u = Tripotent::new(Element::from_matrix(*sys, proj(basis_u, &mask_u))?)?;
    Ok((u, e))
}

const ORDER_KINDS: [RelationKind; 7] = {
    use RelationKind::*;
    [Le, LeR, LeC, LeH, LeHc, LeN, Le2]
};
const EQUIVALENCE_KINDS: [RelationKind; 4] = {
    use RelationKind::*;
    [SimH, SimHc, SimN, Sim2]
};

fn check_projections(cell: &mut Cell, seed: u64, u: &Tripotent, e: &Tripotent) {
    cell.stats.projection_pairs += 1;
    let a = match audit(u, e) {
        Ok(a) => a,
        Err(err) => return cell.error(seed, "projections", "audit", &err),
    };
    for group in [&ORDER_KINDS[..], &EQUIVALENCE_KINDS[..]] {
        let first = a.holds(group[0]);
        if let Some(k) = group.iter().find(|&&k| a.holds(k) != first) {
            cell.lattice(seed, "projections", "projection collapse", format!("{} is {first} but {k} is {}", group[0], !first));
        }
    }
}

fn run_cell(seed: u64, sys: &TripleSystem) -> Cell {
    let mut cell = Cell { stats: FamilyStats { system: sys.to_string(), ..Default::default() }, ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(seed, sys));
    let mode = PairMode::ALL[rng.gen_range(0..PairMode::ALL.len())];
    let mode_name = format!("{mode:?}");
    match random_pair(sys, mode, &mut rng) {
        Ok((u, e)) => check_pair(&mut cell, seed, &mode_name, &u, &e),
        Err(err) => cell.error(seed, &mode_name, "sampling", &err),
    }
    let square = match sys.kind() {
        SystemKind::Rectangular { rows, cols } if rows == cols => Some(rows),
        SystemKind::Symmetric { n } => Some(n),
        _ => None,
    };
    if let Some(n) = square {
        match projection_pair(sys, n, &mut rng) {
            Ok((u, e)) => check_projections(&mut cell, seed, &u, &e),
            Err(err) => cell.error(seed, "projections", "sampling", &err),
        }
    }
    cell
}

pub fn fuzz(config: &FuzzConfig) -> FuzzReport {
    let per_seed: Vec<Vec<Cell>> = config
        .seeds
        .clone()
        .into_par_iter()
        .map(|seed| config.systems.iter().map(|sys| run_cell(seed, sys)).collect())
        .collect();
    let mut report = FuzzReport {
        seeds: (config.seeds.start, config.seeds.end),
        families: config.systems.iter().map(|s| FamilyStats { system: s.to_string(), ..Default::default() }).collect(),
        lattice_violations: Vec::new(),
        certificate_failures: Vec::new(),
        numerical_errors: Vec::new(),
    };
    for cells in per_seed {
        for (stats, cell) in report.families.iter_mut().zip(cells) {
            let c = cell.stats;
            stats.pairs += c.pairs;
            stats.le2_pairs += c.le2_pairs;
            stats.unitary_pairs += c.unitary_pairs;
            stats.projection_pairs += c.projection_pairs;
            stats.certificates += c.certificates;
            stats.lattice_violations += c.lattice_violations;
            stats.certificate_failures += c.certificate_failures;
            stats.numerical_errors += c.numerical_errors;
            for (claim, len) in c.max_lengths {
                let slot = stats.max_lengths.entry(claim).or_insert(0);
                *slot = (*slot).max(len);
            }
            report.lattice_violations.extend(cell.lattice);
            report.certificate_failures.extend(cell.certs);
            report.numerical_errors.extend(cell.errors);
        }
    }
    report
}
