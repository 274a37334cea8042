//! Golden tables and the checks shared by the per-criterion test files and
//! the acceptance runner. Every check returns a one-line summary on success
//! and a description of the first discrepancy on failure.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use spherica::admissible::{self, AdmissibleMap};
use spherica::ars::{self, ActiveRootSystem, ExtendedArsSet};
use spherica::enumerate::{self, EnumerateOptions};
use spherica::ews;
use spherica::fans;
use spherica::lattice::{self, big_vec, IntMatrix, Sublattice};
use spherica::luna::{self, SphericalRoot, SphericalSystem};
use spherica::rootsys::{DynkinDiagram, RootSystem};

pub type IVec = Vec<i64>;

#[derive(Debug, Clone, Deserialize)]
pub struct Golden {
    pub types: Vec<GoldenType>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenType {
    #[serde(rename = "type")]
    pub ty: String,
    pub records: Vec<GoldenRecord>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenRecord {
    pub no: usize,
    /// `⟨κ(D), α_i⟩`, one row per color.
    pub rows: Vec<IVec>,
    pub entries: Vec<GoldenEntry>,
    #[serde(default)]
    pub erratum: Option<Erratum>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenEntry {
    /// Alternative distinguished subsets with the same data, 1-based rows.
    pub dsc: Vec<Vec<usize>>,
    pub map: Vec<IVec>,
    pub classes: Vec<Vec<IVec>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Erratum {
    pub printed_rows: Vec<IVec>,
    pub reason: String,
}

pub fn golden() -> Golden {
    serde_json::from_str(include_str!("../data/golden.json")).expect("golden tables parse")
}

pub fn root_system(ty: &str) -> Arc<RootSystem> {
    luna::shared_root_system(&DynkinDiagram::parse(ty).expect("known type"))
}

/// One `(system, DSC)` pair of the tables.
#[derive(Debug, Clone)]
pub struct Case {
    pub ty: String,
    pub no: usize,
    pub rs: Arc<RootSystem>,
    pub system: SphericalSystem,
    pub dprime: BTreeSet<usize>,
    pub map: IVec2,
    pub classes: Vec<Vec<IVec>>,
}

pub type IVec2 = Vec<IVec>;

impl Case {
    pub fn label(&self) -> String {
        let d: Vec<String> = self.dprime.iter().map(|x| (x + 1).to_string()).collect();
        format!("{} #{} DSC {}", self.ty, self.no, d.join(","))
    }
}

pub fn cases() -> Vec<Case> {
    let mut out = Vec::new();
    for t in golden().types {
        let rs = root_system(&t.ty);
        for r in &t.records {
            let system =
                SphericalSystem::cuspidal(rs.clone(), r.rows.clone()).expect("golden system");
            for e in &r.entries {
                for d in &e.dsc {
                    out.push(Case {
                        ty: t.ty.clone(),
                        no: r.no,
                        rs: rs.clone(),
                        system: system.clone(),
                        dprime: d.iter().map(|x| x - 1).collect(),
                        map: e.map.clone(),
                        classes: e.classes.clone(),
                    });
                }
            }
        }
    }
    out
}

/// Classes as a sorted set of sorted sets.
pub fn normalize_classes(c: &[Vec<IVec>]) -> Vec<Vec<IVec>> {
    let mut v: Vec<Vec<IVec>> = c
        .iter()
        .map(|x| {
            let mut y = x.clone();
            y.sort();
            y
        })
        .collect();
    v.sort();
    v
}

fn row_multiset(rows: &[IVec], idx: impl IntoIterator<Item = usize>) -> Vec<IVec> {
    let mut v: Vec<IVec> = idx.into_iter().map(|i| rows[i].clone()).collect();
    v.sort();
    v
}

type Fingerprint = (Vec<IVec>, IVec2, Vec<Vec<IVec>>);

/// Extended ARS-set read off the golden classes.
pub fn ars_of_classes(rs: &Arc<RootSystem>, classes: &[Vec<IVec>]) -> ExtendedArsSet {
    let mut psi = Vec::new();
    let mut idx = Vec::new();
    for c in classes {
        let mut cl = Vec::new();
        for r in c {
            cl.push(psi.len());
            psi.push(r.clone());
        }
        idx.push(cl);
    }
    let pi = ars::associated_roots(rs, &psi).expect("associated roots");
    let ex = ActiveRootSystem {
        psi,
        pi,
        classes: idx,
    };
    let set = ex.to_ars_set(rs.clone()).expect("maximal roots");
    ExtendedArsSet::normalized(set, 0).expect("normalized")
}

pub const RANK2_TYPES: [&str; 5] = ["A1", "A1xA1", "A2", "B2", "G2"];

/// Criterion 1 for one type: record count, κ rows, DSC lists, maps and
/// classes; also validates every record and lifted ARS-set.
pub fn check_enumeration(ty: &str, parallel: bool) -> Result<(usize, Duration), String> {
    let g = golden();
    let gt = g
        .types
        .iter()
        .find(|t| t.ty == ty)
        .ok_or(format!("no golden data for {ty}"))?;
    let diagram = DynkinDiagram::parse(ty).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let opts = EnumerateOptions {
        cuspidal_only: true,
        rank_bound: enumerate::DEFAULT_RANK_BOUND,
        parallel,
    };
    let recs = enumerate::enumerate_systems(&diagram, opts).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if recs.len() != gt.records.len() {
        return Err(format!(
            "{ty}: {} records, expected {}",
            recs.len(),
            gt.records.len()
        ));
    }
    let mut used = vec![false; recs.len()];
    for gr in &gt.records {
        let mut rows = gr.rows.clone();
        rows.sort();
        let k = (0..recs.len())
            .find(|&k| {
                !used[k] && {
                    let mut ours = recs[k].system.colors().to_vec();
                    ours.sort();
                    ours == rows
                }
            })
            .ok_or(format!(
                "{ty} #{}: no enumerated system has these colors",
                gr.no
            ))?;
        used[k] = true;
        let rec = &recs[k];
        let mut expected: Vec<Fingerprint> = Vec::new();
        for e in &gr.entries {
            for d in &e.dsc {
                expected.push((
                    row_multiset(&gr.rows, d.iter().map(|x| x - 1)),
                    e.map.clone(),
                    normalize_classes(&e.classes),
                ));
            }
        }
        let mut found: Vec<Fingerprint> = rec
            .witnesses
            .iter()
            .map(|w| {
                (
                    row_multiset(rec.system.colors(), w.dsc.iter().copied()),
                    w.map.matrix().to_vec(),
                    normalize_classes(&w.classes),
                )
            })
            .collect();
        expected.sort();
        found.sort();
        if expected != found {
            return Err(format!(
                "{ty} #{}: DSC data {found:?} differ from {expected:?}",
                gr.no
            ));
        }
        let report = luna::validate_system(&rec.system);
        if !report.is_valid() {
            return Err(format!(
                "{ty} #{}: system fails {:?}",
                gr.no,
                report.failed()
            ));
        }
        let hsd = rec
            .system
            .to_hsd()
            .ok_or(format!("{ty} #{}: no datum", gr.no))?;
        let report = luna::validate_hsd(&hsd);
        if !report.is_valid() {
            return Err(format!(
                "{ty} #{}: datum fails {:?}",
                gr.no,
                report.failed()
            ));
        }
        for w in &rec.witnesses {
            let (_, e) = ars::ars_from_admissible(&w.map).map_err(|e| e.to_string())?;
            let report = ars::validate_extended(&e);
            if !report.is_valid() {
                return Err(format!(
                    "{ty} #{}: lifted ARS-set fails {:?}",
                    gr.no,
                    report.failed()
                ));
            }
        }
    }
    Ok((recs.len(), elapsed))
}

/// Criterion 2: the three roundtrips on every table pair.
pub fn check_roundtrips() -> Result<usize, String> {
    let all = cases();
    for c in &all {
        let l = c.label();
        let err = |what: &str| format!("{l}: {what}");
        // System to admissible map and back.
        let m = admissible::admissible_from_system(&c.system, &c.dprime)
            .map_err(|e| err(&e.to_string()))?;
        if m.matrix() != c.map.as_slice() {
            return Err(err(&format!("map {} differs from the table", m)));
        }
        let (s2, marked) =
            admissible::spherical_system_of_admissible(&m).map_err(|e| err(&e.to_string()))?;
        let (canon, perm) = c.system.canonicalize();
        if s2 != canon {
            return Err(err("system of the map differs"));
        }
        let dp: BTreeSet<usize> = c.dprime.iter().map(|&i| perm[i]).collect();
        if row_multiset(s2.colors(), marked.iter().copied())
            != row_multiset(s2.colors(), dp.iter().copied())
        {
            return Err(err("marked subset differs"));
        }
        // Admissible map to ARS-set and back.
        let (ex, e) = ars::ars_from_admissible(&m).map_err(|e| err(&e.to_string()))?;
        if normalize_classes(&ex.class_roots()) != normalize_classes(&c.classes) {
            return Err(err("active roots differ from the table"));
        }
        let m1 = ars::admissible_from_ars(&e).map_err(|e| err(&e.to_string()))?;
        if m1 != m {
            return Err(err(
                "admissible_from_ars does not invert ars_from_admissible",
            ));
        }
        let e0 = ars_of_classes(&c.rs, &c.classes);
        let m0 = ars::admissible_from_ars(&e0).map_err(|e| err(&e.to_string()))?;
        let (_, e1) = ars::ars_from_admissible(&m0).map_err(|e| err(&e.to_string()))?;
        if e1 != e0 {
            return Err(err(
                "ars_from_admissible does not invert admissible_from_ars",
            ));
        }
        // ARS-set to datum and back.
        let h = ars::hsd_from_ars(&e0).map_err(|e| err(&e.to_string()))?;
        let hs = h.to_spherical_system().map_err(|e| err(&e.to_string()))?;
        if hs.canonicalize().0 != canon {
            return Err(err("system of the datum differs from the table"));
        }
        let n0 = e0.ars.pi0().len();
        let classes = ars::expand_ars(&e0.ars)
            .map_err(|e| err(&e.to_string()))?
            .classes
            .len();
        let dh: BTreeSet<usize> = (n0..n0 + classes).collect();
        let e2 = ars::ars_from_hsd(&h, &dh).map_err(|e| err(&e.to_string()))?;
        if e2 != e0 {
            return Err(err("ars_from_hsd does not recover the ARS-set"));
        }
        let h2 = ars::hsd_from_ars(&e2).map_err(|e| err(&e.to_string()))?;
        if h2.canonical_form().map_err(|e| err(&e.to_string()))?
            != h.canonical_form().map_err(|e| err(&e.to_string()))?
        {
            return Err(err("hsd_from_ars does not invert ars_from_hsd"));
        }
    }
    Ok(all.len())
}

/// Criterion 3 on every admissible map of the listed types, cuspidal or not.
pub fn check_fans(types: &[&str]) -> Result<usize, String> {
    let mut count = 0;
    for ty in types {
        let rs = root_system(ty);
        let maps = enumerate::enumerate_admissible(&rs, false, enumerate::DEFAULT_RANK_BOUND)
            .map_err(|e| e.to_string())?;
        for m in maps {
            check_fan_of(&m)?;
            count += 1;
        }
    }
    Ok(count)
}

pub fn check_fan_of(m: &AdmissibleMap) -> Result<(), String> {
    let fe = admissible::build_fan_eta(m).map_err(|e| format!("{m}: {e}"))?;
    let report = fans::validate_fan(&fe.system.fan);
    if !(report.is_fan && report.complete && report.regular) {
        return Err(format!("{m}: fan check failed: {:?}", report.witnesses));
    }
    if fe.family.len() != fe.expected_family_size() {
        return Err(format!(
            "{m}: {} cones, expected {}",
            fe.family.len(),
            fe.expected_family_size()
        ));
    }
    let expected_rays = m.rho_values().len() + m.pi_eta().len();
    if report.rays.len() != expected_rays {
        return Err(format!(
            "{m}: {} rays, expected {expected_rays}",
            report.rays.len()
        ));
    }
    Ok(())
}

/// Criterion 4: both EWS paths reproduce the datum of every table pair,
/// and the torsion example has the expected invariants.
pub fn check_ews() -> Result<usize, String> {
    let all = cases();
    for c in &all {
        let l = c.label();
        let e0 = ars_of_classes(&c.rs, &c.classes);
        let h = ars::hsd_from_ars(&e0).map_err(|e| format!("{l}: {e}"))?;
        let hc = h.canonical_form().map_err(|e| format!("{l}: {e}"))?;
        let full = luna::full_color_set_hsd(&hc).map_err(|e| format!("{l}: {e}"))?;
        let mut full_kappas = full.kappas();
        full_kappas.sort();
        let from_ars = ews::ews_generators_from_ars(&e0).map_err(|e| format!("{l}: {e}"))?;
        let from_hsd = ews::ews_generators_from_hsd(&h).map_err(|e| format!("{l}: {e}"))?;
        for (name, g) in [("ARS", from_ars), ("datum", from_hsd)] {
            let inv = ews::invariants_from_ews(&g).map_err(|e| format!("{l} via {name}: {e}"))?;
            let got = inv
                .to_hsd()
                .and_then(|x| x.canonical_form())
                .map_err(|e| format!("{l} via {name}: {e}"))?;
            if got != hc {
                return Err(format!("{l} via {name}: invariants differ from the datum"));
            }
            if inv.lattice != hc.lattice() || inv.kappa_multiset() != full_kappas {
                return Err(format!("{l} via {name}: full color set differs"));
            }
        }
    }
    let inv = ews::invariants_from_ews(&ews::sl2_cubed_example().map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let simple: BTreeSet<usize> = inv
        .sigma_detected
        .iter()
        .filter_map(|s| s.simple_index())
        .collect();
    if !inv.pp.is_empty() || simple != (0..3).collect() {
        return Err(format!(
            "torsion example: pp {:?}, simple roots in Sigma {:?}",
            inv.pp, simple
        ));
    }
    Ok(all.len())
}

/// Outcome of one mutation.
#[derive(Debug, Clone)]
pub struct Detection {
    pub mutation: String,
    /// Failing axiom, or "no-witness" when only strong solvability is lost.
    pub axiom: String,
    pub witness: String,
}

fn detect(
    s: Result<SphericalSystem, spherica::Error>,
    mutation: String,
) -> Result<Detection, String> {
    let s = match s {
        Ok(s) => s,
        Err(e) => {
            return Ok(Detection {
                mutation,
                axiom: "structure".into(),
                witness: e.to_string(),
            })
        }
    };
    let report = luna::validate_system(&s);
    if let Some(name) = report.failed().first() {
        let witness = report
            .check(name)
            .and_then(|c| c.violations.first().cloned())
            .unwrap_or_default();
        return Ok(Detection {
            mutation,
            axiom: name.to_string(),
            witness,
        });
    }
    match luna::strong_solvability_witnesses(&s) {
        Ok(w) if w.is_empty() => Ok(Detection {
            mutation,
            axiom: "no-witness".into(),
            witness: "no distinguished subset meets every D(a) once".into(),
        }),
        Ok(w) => Err(format!("{mutation} survives with witnesses {w:?}")),
        Err(e) => Ok(Detection {
            mutation,
            axiom: "no-witness".into(),
            witness: e.to_string(),
        }),
    }
}

/// Criterion 5: ten single-entry κ mutations and five Σ mutations per
/// golden system.
pub fn check_mutations(seed: u64) -> Result<Vec<Detection>, String> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in golden().types {
        let rs = root_system(&t.ty);
        let catalog: Vec<SphericalRoot> = luna::spherical_roots_of(&rs)
            .into_iter()
            .map(|e| e.sigma)
            .collect();
        for r in &t.records {
            let base =
                SphericalSystem::cuspidal(rs.clone(), r.rows.clone()).map_err(|e| e.to_string())?;
            let tag = format!("{} #{}", t.ty, r.no);
            for _ in 0..10 {
                let d = rng.gen_range(0..r.rows.len());
                let j = rng.gen_range(0..rs.rank());
                let delta = [-2, -1, 1, 2][rng.gen_range(0..4)];
                let mut rows = r.rows.clone();
                rows[d][j] += delta;
                let s = SphericalSystem::cuspidal(rs.clone(), rows);
                out.push(detect(
                    s,
                    format!("{tag}: kappa[{}][{}] {:+}", d + 1, j + 1, delta),
                )?);
            }
            for _ in 0..5 {
                let i = rng.gen_range(0..base.sigma().len());
                let others: Vec<&SphericalRoot> = catalog
                    .iter()
                    .filter(|x| !base.sigma().contains(x))
                    .collect();
                let repl = others[rng.gen_range(0..others.len())].clone();
                let mut sigma = base.sigma().to_vec();
                sigma[i] = repl.clone();
                let s = SphericalSystem::new(rs.clone(), BTreeSet::new(), sigma, r.rows.clone());
                out.push(detect(s, format!("{tag}: sigma[{}] -> {repl}", i + 1))?);
            }
        }
    }
    Ok(out)
}

/// Upper Hermite form by plain Euclidean row operations, with the same
/// normalization as the library's lower-staircase form: columns are
/// processed right to left and rows are listed bottom-up.
pub fn oracle_hnf(rows: &[IVec], cols: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().rev().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut out_rows = 0;
    for col in 0..cols {
        // Euclid on the column below out_rows until one nonzero entry is left.
        loop {
            let nz: Vec<usize> = (out_rows..a.len())
                .filter(|&i| !a[i][col].is_zero())
                .collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| a[i][col].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let q = a[i][col].div_floor(&a[p][col]);
                    let prow = a[p].clone();
                    for (x, y) in a[i].iter_mut().zip(prow) {
                        *x -= &q * y;
                    }
                }
            }
        }
        let Some(p) = (out_rows..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(out_rows, p);
        if a[out_rows][col].is_negative() {
            for x in a[out_rows].iter_mut() {
                *x = -x.clone();
            }
        }
        let piv = a[out_rows][col].clone();
        for i in 0..out_rows {
            let q = a[i][col].div_floor(&piv);
            let prow = a[out_rows].clone();
            for (x, y) in a[i].iter_mut().zip(prow) {
                *x -= &q * y;
            }
        }
        out_rows += 1;
    }
    let mut h: Vec<Vec<BigInt>> = a[..out_rows]
        .iter()
        .map(|r| r.iter().rev().cloned().collect())
        .collect();
    h.reverse();
    h
}

fn minors_gcd(a: &[IVec], k: usize) -> BigInt {
    let r = a.len();
    let c = a[0].len();
    let mut g = BigInt::zero();
    for rs in luna::subsets_of_size(r, k) {
        for cs in luna::subsets_of_size(c, k) {
            let m: IVec2 = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| a[i][j]).collect())
                .collect();
            g = g.gcd(&det(&m));
        }
    }
    g
}

fn det(m: &[IVec]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        let minor: IVec2 = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let term = BigInt::from(m[0][j]) * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Invariant factors from gcds of minors: `s_k = d_k / d_{k-1}`.
pub fn oracle_invariant_factors(a: &[IVec]) -> Vec<BigInt> {
    let k = a.len().min(a[0].len());
    let mut out = Vec::with_capacity(k);
    let mut prev = BigInt::from(1);
    for i in 1..=k {
        let d = minors_gcd(a, i);
        if d.is_zero() {
            out.push(BigInt::zero());
            prev = BigInt::zero();
        } else {
            out.push(&d / &prev);
            prev = d;
        }
    }
    out
}

/// Membership by reduction against the oracle Hermite rows.
pub fn oracle_member(h: &[Vec<BigInt>], v: &[i64]) -> bool {
    let mut w: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    // Pivots are the rightmost nonzero entries and increase along the list.
    for row in h.iter().rev() {
        let p = row.iter().rposition(|x| !x.is_zero()).unwrap();
        let (q, rem) = w[p].div_rem(&row[p]);
        if !rem.is_zero() {
            return false;
        }
        for (x, y) in w.iter_mut().zip(row) {
            *x -= &q * y;
        }
    }
    w.iter().all(Zero::is_zero)
}

/// Criterion 6: Hermite form, Smith invariants and membership against the
/// oracles on `count` random matrices.
pub fn check_lattice_oracle(seed: u64, count: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..count {
        let r = rng.gen_range(1..=4);
        let c = rng.gen_range(1..=4);
        let rows: IVec2 = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        let m = IntMatrix::from_i64(c, &rows).map_err(|e| e.to_string())?;
        let h = lattice::hnf(&m);
        let oh = oracle_hnf(&rows, c);
        if h.row_vecs() != oh.as_slice() {
            return Err(format!(
                "case {t}: Hermite form of {rows:?} is {h}, oracle {oh:?}"
            ));
        }
        let inv = lattice::invariant_factors(&m);
        let oinv = oracle_invariant_factors(&rows);
        if inv != oinv {
            return Err(format!(
                "case {t}: invariant factors of {rows:?} are {inv:?}, oracle {oinv:?}"
            ));
        }
        let l = Sublattice::from_i64(c, &rows).map_err(|e| e.to_string())?;
        let combo: IVec = (0..c)
            .map(|j| {
                rows.iter()
                    .enumerate()
                    .map(|(i, row)| row[j] * ((i as i64 * 3 + t as i64) % 5 - 2))
                    .sum()
            })
            .collect();
        let random: IVec = (0..c).map(|_| rng.gen_range(-9..=9)).collect();
        for v in [combo, random] {
            let got = lattice::solve_membership(&l, &big_vec(&v)).map_err(|e| e.to_string())?;
            let expected = oracle_member(&oh, &v);
            match got {
                Some(x) => {
                    let back: Vec<BigInt> = (0..c)
                        .map(|j| {
                            x.iter()
                                .zip(l.basis().row_vecs())
                                .map(|(a, b)| a * &b[j])
                                .sum()
                        })
                        .collect();
                    if !expected || back != big_vec(&v) {
                        return Err(format!(
                            "case {t}: membership of {v:?} in {rows:?} wrongly accepted"
                        ));
                    }
                }
                None if expected => {
                    return Err(format!(
                        "case {t}: membership of {v:?} in {rows:?} wrongly rejected"
                    ))
                }
                None => {}
            }
        }
    }
    Ok(count)
}

/// Criterion 7 on every table pair.
pub fn check_ars_laws() -> Result<usize, String> {
    let all = cases();
    for c in &all {
        let e0 = ars_of_classes(&c.rs, &c.classes);
        let report = ars::structural_laws(&e0).map_err(|e| format!("{}: {e}", c.label()))?;
        if !report.is_valid() {
            return Err(format!("{}: laws {:?} fail", c.label(), report.failed()));
        }
    }
    Ok(all.len())
}
