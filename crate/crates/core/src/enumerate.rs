//! Exhaustive classification at small rank: admissible maps are enumerated
//! by backtracking, grouped by their spherical systems, and decorated with
//! every strong-solvability witness and its data.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;

use crate::admissible::{self, AdmissibleMap, ETA_MAX, ETA_MIN};
use crate::ars;
use crate::error::{Error, Result};
use crate::fans::IVec;
use crate::luna::{self, SphericalSystem};
use crate::rootsys::{format_root, DynkinDiagram, RootSystem};

/// Default bound on the rank accepted by the enumerators.
pub const DEFAULT_RANK_BOUND: usize = 4;

/// Environment variable overriding [`DEFAULT_RANK_BOUND`].
pub const RANK_BOUND_VAR: &str = "SPHERICA_RANK_BOUND";

/// The rank bound in force: the environment override if it parses,
/// otherwise the default.
pub fn rank_bound() -> usize {
    std::env::var(RANK_BOUND_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_RANK_BOUND)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    /// Keep only maps with `Π_η = Π`.
    pub cuspidal_only: bool,
    pub rank_bound: usize,
    /// Compute per-record data on the rayon pool.
    pub parallel: bool,
}

impl EnumerateOptions {
    pub fn cuspidal() -> Self {
        EnumerateOptions {
            cuspidal_only: true,
            rank_bound: rank_bound(),
            parallel: false,
        }
    }
}

fn check_rank(rs: &RootSystem, bound: usize) -> Result<()> {
    if rs.rank() > bound {
        return Err(Error::RankBound {
            rank: rs.rank(),
            bound,
        });
    }
    Ok(())
}

/// Whether the assigned entries of the pair `(a, b)`, `(b, a)` break the
/// sign rule: a negative entry forces its transpose to vanish.
fn pair_ok(x: i64, y: i64) -> bool {
    !(x < 0 && y != 0) && !(y < 0 && x != 0)
}

/// Equal-row rule for a complete matrix: `η(α, β) = 1` forces equal rows.
fn rows_ok(e: &[Vec<i64>]) -> bool {
    let n = e.len();
    (0..n).all(|a| (0..n).all(|b| e[a][b] != 1 || e[a] == e[b]))
}

/// All admissible maps on the diagram, in lexicographic order of their
/// matrices.
pub fn enumerate_admissible(
    rs: &Arc<RootSystem>,
    cuspidal_only: bool,
    bound: usize,
) -> Result<Vec<AdmissibleMap>> {
    check_rank(rs, bound)?;
    let n = rs.rank();
    let cartan = rs.cartan();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    let diag_choices: Vec<i64> = if cuspidal_only { vec![1] } else { vec![0, 1] };
    let mut diag = vec![0i64; n];
    loop {
        if diag.iter().all(|d| diag_choices.contains(d)) {
            let mut e = vec![vec![0i64; n]; n];
            for a in 0..n {
                e[a][a] = diag[a];
            }
            // A vanishing diagonal entry kills its row and column.
            let choices: Vec<Vec<(i64, i64)>> = pairs
                .iter()
                .map(|&(a, b)| {
                    if diag[a] == 0 || diag[b] == 0 {
                        return vec![(0, 0)];
                    }
                    let lo_ab = ETA_MIN.max(cartan[a][b]);
                    let lo_ba = ETA_MIN.max(cartan[b][a]);
                    let mut v = Vec::new();
                    for x in lo_ab..=ETA_MAX {
                        for y in lo_ba..=ETA_MAX {
                            if pair_ok(x, y) {
                                v.push((x, y));
                            }
                        }
                    }
                    v
                })
                .collect();
            fill(&pairs, &choices, 0, &mut e, &mut |e| {
                if rows_ok(e) {
                    out.push(e.to_vec());
                }
            });
        }
        // Next diagonal in lexicographic order over {0, 1}.
        let mut i = n;
        loop {
            if i == 0 {
                out.sort();
                return out
                    .into_iter()
                    .map(|e| AdmissibleMap::new(rs.clone(), e))
                    .filter(|m| {
                        m.as_ref()
                            .map_or(true, |m| admissible::validate_admissible(m).is_valid())
                    })
                    .collect();
            }
            i -= 1;
            if diag[i] == 0 {
                diag[i] = 1;
                break;
            }
            diag[i] = 0;
        }
    }
}

fn fill(
    pairs: &[(usize, usize)],
    choices: &[Vec<(i64, i64)>],
    k: usize,
    e: &mut Vec<Vec<i64>>,
    emit: &mut impl FnMut(&[Vec<i64>]),
) {
    if k == pairs.len() {
        emit(e);
        return;
    }
    let (a, b) = pairs[k];
    for &(x, y) in &choices[k] {
        e[a][b] = x;
        e[b][a] = y;
        // Prune on the equal-row rule for rows already complete up to b.
        if partial_rows_ok(e, pairs, k) {
            fill(pairs, choices, k + 1, e, emit);
        }
    }
    e[a][b] = 0;
    e[b][a] = 0;
}

/// The equal-row rule restricted to entries assigned so far.
fn partial_rows_ok(e: &[Vec<i64>], pairs: &[(usize, usize)], k: usize) -> bool {
    let n = e.len();
    let mut known = vec![vec![false; n]; n];
    for (i, row) in known.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in &pairs[..=k] {
        known[a][b] = true;
        known[b][a] = true;
    }
    for a in 0..n {
        for b in 0..n {
            if known[a][b] && e[a][b] == 1 {
                for g in 0..n {
                    if known[a][g] && known[b][g] && e[a][g] != e[b][g] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Data attached to one strong-solvability witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessData {
    /// Indices into the colors of the record's system.
    pub dsc: BTreeSet<usize>,
    pub map: AdmissibleMap,
    /// Classes of active roots, each sorted, in sorted order.
    pub classes: Vec<Vec<IVec>>,
}

/// One spherical system with all its strong-solvability witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationRecord {
    pub system: SphericalSystem,
    pub witnesses: Vec<WitnessData>,
}

impl ClassificationRecord {
    /// Builds the record of a canonicalized system.
    pub fn of_system(system: SphericalSystem) -> Result<Self> {
        let dscs = luna::strong_solvability_witnesses(&system)?;
        let witnesses = dscs
            .into_iter()
            .map(|dsc| {
                let map = admissible::admissible_from_system(&system, &dsc)?;
                let (ex, _) = ars::ars_from_admissible(&map)?;
                Ok(WitnessData {
                    dsc,
                    map,
                    classes: ex.class_roots(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(ClassificationRecord { system, witnesses })
    }

    pub fn dsc_list(&self) -> Vec<BTreeSet<usize>> {
        self.witnesses.iter().map(|w| w.dsc.clone()).collect()
    }
}

/// Strongly solvable spherical systems arising from admissible maps on the
/// diagram, each with its witnesses, in canonical order.
pub fn enumerate_systems(
    diagram: &DynkinDiagram,
    opts: EnumerateOptions,
) -> Result<Vec<ClassificationRecord>> {
    let rs = luna::shared_root_system(diagram);
    let maps = enumerate_admissible(&rs, opts.cuspidal_only, opts.rank_bound)?;
    let mut systems: BTreeMap<_, SphericalSystem> = BTreeMap::new();
    for m in &maps {
        let (s, _) = admissible::spherical_system_of_admissible(m)?;
        systems.entry(s.canonical_key()).or_insert(s);
    }
    let systems: Vec<SphericalSystem> = systems.into_values().collect();
    if opts.parallel {
        systems
            .into_par_iter()
            .map(ClassificationRecord::of_system)
            .collect()
    } else {
        systems
            .into_iter()
            .map(ClassificationRecord::of_system)
            .collect()
    }
}

/// Cuspidal systems of the diagram.
pub fn enumerate_cuspidal_systems(diagram: &DynkinDiagram) -> Result<Vec<ClassificationRecord>> {
    enumerate_systems(diagram, EnumerateOptions::cuspidal())
}

fn matrix_cell(rows: &[Vec<i64>]) -> String {
    let rows: Vec<String> = rows
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

/// Classes of active roots as `{a1}, {a1+a2, a2}`.
pub fn format_classes(classes: &[Vec<IVec>]) -> String {
    let parts: Vec<String> = classes
        .iter()
        .map(|c| {
            let roots: Vec<String> = c.iter().map(|r| format_root(r)).collect();
            format!("{{{}}}", roots.join(", "))
        })
        .collect();
    parts.join(", ")
}

/// Markdown table with columns No., D^a, DSC, Admissible map, Active roots.
/// Witnesses sharing a map and classes are merged into one line with their
/// subsets joined by "or"; color numbers are 1-based.
pub fn emit_table(records: &[ClassificationRecord]) -> String {
    let mut out = String::from(
        "| No. | D^a | DSC | Admissible map | Active roots |\n|---|---|---|---|---|\n",
    );
    for (k, rec) in records.iter().enumerate() {
        let mut groups: Vec<(&AdmissibleMap, &Vec<Vec<IVec>>, Vec<String>)> = Vec::new();
        for w in &rec.witnesses {
            let label: Vec<String> = w.dsc.iter().map(|d| (d + 1).to_string()).collect();
            let label = label.join(",");
            match groups
                .iter_mut()
                .find(|g| g.0 == &w.map && g.1 == &w.classes)
            {
                Some(g) => g.2.push(label),
                None => groups.push((&w.map, &w.classes, vec![label])),
            }
        }
        for (j, (map, classes, labels)) in groups.iter().enumerate() {
            let (no, da) = if j == 0 {
                ((k + 1).to_string(), matrix_cell(rec.system.colors()))
            } else {
                (String::new(), String::new())
            };
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                no,
                da,
                labels.join(" or "),
                matrix_cell(map.matrix()),
                format_classes(classes)
            ));
        }
    }
    out
}
