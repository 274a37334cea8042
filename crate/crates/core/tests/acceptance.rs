//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Tolerances are exact equality throughout; runtime limits
//! are 10 s for all rank-two types together and 300 s for A3.

mod common;

use std::process::ExitCode;
use std::time::Duration;

const MUTATION_SEED: u64 = 20240611;
const LATTICE_SEED: u64 = 7;
const LATTICE_CASES: usize = 1000;
const RANK2_LIMIT: Duration = Duration::from_secs(10);
const A3_LIMIT: Duration = Duration::from_secs(300);

fn criterion_1() -> Result<String, String> {
    let mut rank2 = Duration::ZERO;
    let mut counts = Vec::new();
    for ty in common::RANK2_TYPES {
        let (n, t) = common::check_enumeration(ty, false)?;
        rank2 += t;
        counts.push(format!("{ty}={n}"));
    }
    let (n, a3) = common::check_enumeration("A3", false)?;
    counts.push(format!("A3={n}"));
    if rank2 > RANK2_LIMIT {
        return Err(format!("rank <= 2 took {rank2:?}, limit {RANK2_LIMIT:?}"));
    }
    if a3 > A3_LIMIT {
        return Err(format!("A3 took {a3:?}, limit {A3_LIMIT:?}"));
    }
    let g = common::golden();
    let errata: Vec<String> = g
        .types
        .iter()
        .flat_map(|t| {
            t.records
                .iter()
                .filter(|r| r.erratum.is_some())
                .map(move |r| {
                    format!(
                        "{} #{} printed rows {:?} replaced by {:?}",
                        t.ty,
                        r.no,
                        r.erratum.as_ref().unwrap().printed_rows,
                        r.rows
                    )
                })
        })
        .collect();
    Ok(format!(
        "records {}; rank<=2 {:.3}s, A3 {:.3}s; erratum applied: {}",
        counts.join(" "),
        rank2.as_secs_f64(),
        a3.as_secs_f64(),
        errata.join("; ")
    ))
}

fn criterion_2() -> Result<String, String> {
    common::check_roundtrips()
        .map(|n| format!("{n} (system, DSC) pairs, three roundtrips each, exact"))
}

fn criterion_3() -> Result<String, String> {
    let mut types = common::RANK2_TYPES.to_vec();
    types.push("A3");
    common::check_fans(&types).map(|n| {
        format!(
            "{n} admissible maps (all, not only cuspidal): complete, regular, family size exact"
        )
    })
}

fn criterion_4() -> Result<String, String> {
    common::check_ews().map(|n| {
        format!(
            "{n} pairs via ARS and via datum; SL2^3 torsion example Pi^p empty, Sigma contains Pi"
        )
    })
}

fn criterion_5() -> Result<String, String> {
    let d = common::check_mutations(MUTATION_SEED)?;
    let lost = d.iter().filter(|x| x.axiom == "no-witness").count();
    let sample = d
        .first()
        .map(|x| format!("{} -> {}: {}", x.mutation, x.axiom, x.witness))
        .unwrap_or_default();
    Ok(format!(
        "{} mutations (seed {MUTATION_SEED}) all detected; {} by axiom failure, {} by loss of witnesses; e.g. {sample}",
        d.len(),
        d.len() - lost,
        lost
    ))
}

fn criterion_6() -> Result<String, String> {
    common::check_lattice_oracle(LATTICE_SEED, LATTICE_CASES)
        .map(|n| format!("{n} random matrices up to 4x4, entries in [-9, 9] (seed {LATTICE_SEED}), exact agreement"))
}

fn criterion_7() -> Result<String, String> {
    common::check_ars_laws()
        .map(|n| format!("{n} ARS-sets: angle, lattice, shift, disjointness, tau-classes"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<String, String>); 7] = [
        ("golden enumeration", criterion_1),
        ("roundtrips", criterion_2),
        ("fan properties", criterion_3),
        ("EWS cross-check", criterion_4),
        ("mutation robustness", criterion_5),
        ("lattice oracle", criterion_6),
        ("ARS structural laws", criterion_7),
    ];
    let mut ok = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("criterion {} ({name}): PASS - {msg}", i + 1),
            Err(msg) => {
                ok = false;
                println!("criterion {} ({name}): FAIL - {msg}", i + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
