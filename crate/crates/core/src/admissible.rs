//! Admissible maps on `Π × Π`, the Enriques `B⁻`-system and fan they
//! determine, and the bridge to cuspidal-type spherical systems.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::fans::{validate_fan, Cone, Fan, FanReport, IVec};
use crate::lattice::{self, IntMatrix};
use crate::luna::{self, SphericalRoot, SphericalSystem};
use crate::report::Report;
use crate::rootsys::RootSystem;

/// Smallest value an admissible map may take.
pub const ETA_MIN: i64 = -3;
/// Largest value an admissible map may take.
pub const ETA_MAX: i64 = 1;

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Integer matrix `η(α, β)` on `Π × Π`.
#[derive(Debug, Clone)]
pub struct AdmissibleMap {
    rs: Arc<RootSystem>,
    eta: Vec<Vec<i64>>,
}

impl PartialEq for AdmissibleMap {
    fn eq(&self, other: &Self) -> bool {
        self.rs.diagram() == other.rs.diagram() && self.eta == other.eta
    }
}

impl Eq for AdmissibleMap {}

impl AdmissibleMap {
    /// Checks only the shape; use [`validate_admissible`] for the axioms.
    pub fn new(rs: Arc<RootSystem>, eta: Vec<Vec<i64>>) -> Result<Self> {
        let n = rs.rank();
        if eta.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: eta.len(),
            });
        }
        for row in &eta {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        Ok(AdmissibleMap { rs, eta })
    }

    /// `η ≡ 0`.
    pub fn zero(rs: Arc<RootSystem>) -> Self {
        let n = rs.rank();
        AdmissibleMap {
            rs,
            eta: vec![vec![0; n]; n],
        }
    }

    /// `η(α, β) = δ_{αβ}`.
    pub fn identity(rs: Arc<RootSystem>) -> Self {
        let n = rs.rank();
        let eta = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        AdmissibleMap { rs, eta }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn root_system_arc(&self) -> Arc<RootSystem> {
        self.rs.clone()
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.eta
    }

    pub fn get(&self, a: usize, b: usize) -> i64 {
        self.eta[a][b]
    }

    /// `Π_η = {α : η(α, α) = 1}` in node order.
    pub fn pi_eta(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.eta[i][i] == 1).collect()
    }

    /// `ρ_η(α)` in the basis dual to `Π_η`.
    pub fn rho(&self, a: usize) -> IVec {
        self.pi_eta().iter().map(|&g| self.eta[a][g]).collect()
    }

    /// Distinct values of `ρ_η` on `Π_η`, in order of first occurrence.
    pub fn rho_values(&self) -> Vec<IVec> {
        let mut out: Vec<IVec> = Vec::new();
        for a in self.pi_eta() {
            let r = self.rho(a);
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out
    }
}

impl fmt::Display for AdmissibleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .eta
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Checks the value range and axioms `AM1` to `AM5`, with a witnessing
/// pair of nodes for every violation.
pub fn validate_admissible(m: &AdmissibleMap) -> Report {
    let mut r = Report::new();
    for name in ["range", "AM1", "AM2", "AM3", "AM4", "AM5"] {
        r.declare(name);
    }
    let n = m.rank();
    let e = &m.eta;
    let cartan = m.rs.cartan();
    for a in 0..n {
        for b in 0..n {
            if !(ETA_MIN..=ETA_MAX).contains(&e[a][b]) {
                r.fail(
                    "range",
                    format!("eta(a{}, a{}) = {} outside -3..1", a + 1, b + 1, e[a][b]),
                );
            }
        }
    }
    for a in 0..n {
        if e[a][a] != 0 && e[a][a] != 1 {
            r.fail("AM1", format!("eta(a{0}, a{0}) = {1}", a + 1, e[a][a]));
        }
        if e[a][a] == 0 {
            for b in 0..n {
                if e[a][b] != 0 || e[b][a] != 0 {
                    r.fail(
                        "AM2",
                        format!(
                            "eta(a{0}, a{0}) = 0 but row or column meets a{1}",
                            a + 1,
                            b + 1
                        ),
                    );
                }
            }
        }
        for b in 0..n {
            if e[a][b] == 1 {
                for g in 0..n {
                    if e[a][g] != e[b][g] {
                        r.fail(
                            "AM3",
                            format!(
                                "eta(a{}, a{}) = 1 but eta(a{}, a{}) = {} differs from eta(a{}, a{}) = {}",
                                a + 1, b + 1, a + 1, g + 1, e[a][g], b + 1, g + 1, e[b][g]
                            ),
                        );
                    }
                }
            }
            if e[a][b] < 0 && e[b][a] != 0 {
                r.fail(
                    "AM4",
                    format!(
                        "eta(a{}, a{}) < 0 but eta(a{}, a{}) = {}",
                        a + 1,
                        b + 1,
                        b + 1,
                        a + 1,
                        e[b][a]
                    ),
                );
            }
            // ⟨α^∨, β⟩ is the Cartan entry a_{αβ}.
            if a != b && e[a][b] < cartan[a][b] {
                r.fail(
                    "AM5",
                    format!(
                        "eta(a{}, a{}) = {} is below <a{}^v, a{}> = {}",
                        a + 1,
                        b + 1,
                        e[a][b],
                        a + 1,
                        b + 1,
                        cartan[a][b]
                    ),
                );
            }
        }
    }
    r
}

/// Triple `(𝔛, F, ρ)`: a sublattice of `𝔛(T)` given by a basis of
/// root-lattice vectors, a fan in dual coordinates of that basis, and
/// `ρ(α)` for every simple root (`None` stands for `0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnriquesBSystem {
    pub rank: usize,
    pub lattice: Vec<IVec>,
    pub fan: Fan,
    pub rho: Vec<Option<IVec>>,
}

impl EnriquesBSystem {
    /// Coordinates of a root-lattice vector in the lattice basis.
    pub fn coordinates(&self, v: &[i64]) -> Option<IVec> {
        if self.lattice.is_empty() {
            return v.iter().all(|&x| x == 0).then(Vec::new);
        }
        let x = luna::rational_coordinates(&self.lattice, v)?;
        x.iter()
            .map(|c| {
                if c.is_integer() {
                    c.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    }

    /// `⟨q, v⟩` for a functional in dual coordinates.
    pub fn pair(&self, q: &[i64], v: &[i64]) -> Option<i64> {
        self.coordinates(v).map(|c| dot(q, &c))
    }

    fn simple(&self, i: usize) -> IVec {
        let mut v = vec![0; self.rank];
        v[i] = 1;
        v
    }
}

/// Checks `F` regular and complete and conditions `(a)` and `(b)` on `ρ`;
/// the derived sign rule is reported as `sign`.
pub fn validate_enriques(e: &EnriquesBSystem, rs: &RootSystem) -> Report {
    let mut r = Report::new();
    for name in ["structure", "fan", "a", "b", "sign"] {
        r.declare(name);
    }
    let k = e.lattice.len();
    if e.rho.len() != e.rank || e.rank != rs.rank() || e.fan.dim() != k {
        r.fail("structure", "dimensions of lattice, fan and rho disagree");
        return r;
    }
    if k > 0 {
        let m = IntMatrix::from_i64(e.rank, &e.lattice).expect("lengths");
        if lattice::rank(&m) != k {
            r.fail("structure", "lattice generators are dependent");
            return r;
        }
    }
    let fr: FanReport = validate_fan(&e.fan);
    if !(fr.is_fan && fr.complete && fr.regular) {
        for w in fr.witnesses {
            r.fail("fan", w);
        }
        if r.check("fan").is_some_and(|c| c.passed()) {
            r.fail("fan", "fan is not regular and complete");
        }
    }
    let rays = e.fan.rays();
    for a in 0..e.rank {
        let Some(ra) = &e.rho[a] else { continue };
        let alpha = e.simple(a);
        if !rays.contains(ra) {
            r.fail(
                "a",
                format!("rho(a{}) = {:?} is not a ray of the fan", a + 1, ra),
            );
        }
        let Some(ca) = e.coordinates(&alpha) else {
            r.fail("a", format!("a{} is not in the lattice", a + 1));
            continue;
        };
        if dot(ra, &ca) != 1 {
            r.fail(
                "a",
                format!("<rho(a{0}), a{0}> = {1} instead of 1", a + 1, dot(ra, &ca)),
            );
        }
        for ray in &rays {
            if ray != ra && dot(ray, &ca) > 0 {
                r.fail("a", format!("ray {:?} is positive on a{}", ray, a + 1));
            }
        }
    }
    let cartan = rs.cartan();
    for a in 0..e.rank {
        for b in 0..e.rank {
            if a == b || e.rho[b].is_none() {
                continue;
            }
            let Some(cb) = e.coordinates(&e.simple(b)) else {
                continue;
            };
            let v = e.rho[a].as_ref().map_or(0, |ra| dot(ra, &cb));
            if v < cartan[a][b] {
                r.fail(
                    "b",
                    format!(
                        "<rho(a{}), a{}> = {} is below {}",
                        a + 1,
                        b + 1,
                        v,
                        cartan[a][b]
                    ),
                );
            }
            if v < 0 {
                if let (Some(ca), Some(rb)) = (e.coordinates(&e.simple(a)), &e.rho[b]) {
                    if dot(rb, &ca) != 0 {
                        r.fail(
                            "sign",
                            format!(
                                "<rho(a{}), a{}> < 0 but <rho(a{}), a{}> != 0",
                                a + 1,
                                b + 1,
                                b + 1,
                                a + 1
                            ),
                        );
                    }
                }
            }
        }
    }
    r
}

/// For fan roots `α, β` among the simple roots with `⟨ϱ_β, α⟩ = 0` and
/// `⟨ϱ_α, β⟩ = −p < 0`: `α + β` is a fan root with ray `ϱ_β` and
/// `⟨ϱ_α, α + β⟩ = 1 − p`. Returns one message per violated pair.
pub fn pair_of_roots_violations(e: &EnriquesBSystem) -> Vec<String> {
    let mut out = Vec::new();
    for a in 0..e.rank {
        for b in 0..e.rank {
            if a == b {
                continue;
            }
            let (Some(ra), Some(rb)) = (&e.rho[a], &e.rho[b]) else {
                continue;
            };
            let (Some(ca), Some(cb)) = (e.coordinates(&e.simple(a)), e.coordinates(&e.simple(b)))
            else {
                continue;
            };
            if dot(rb, &ca) != 0 || dot(ra, &cb) >= 0 {
                continue;
            }
            let p = -dot(ra, &cb);
            let sum: IVec = ca.iter().zip(&cb).map(|(x, y)| x + y).collect();
            match crate::fans::fan_root_check(&e.fan, &sum) {
                Some(w) if &w.ray == rb => {}
                _ => out.push(format!(
                    "a{} + a{} is not a fan root with ray rho(a{})",
                    a + 1,
                    b + 1,
                    b + 1
                )),
            }
            if dot(ra, &sum) != 1 - p {
                out.push(format!(
                    "<rho(a{0}), a{0} + a{1}> = {2}, expected {3}",
                    a + 1,
                    b + 1,
                    dot(ra, &sum),
                    1 - p
                ));
            }
        }
    }
    out
}

/// Fan `F_η` with its diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanEta {
    pub system: EnriquesBSystem,
    /// Groups `Π_1, …, Π_s` (node indices), the fibers of `ρ_η`.
    pub groups: Vec<Vec<usize>>,
    /// `ϱ_i = ρ_η(Π_i)`.
    pub group_rays: Vec<IVec>,
    /// `C_∅ = {q : ⟨q, α⟩ ≤ 0 for α ∈ Π_η}`.
    pub c_empty: Cone,
    /// The cones `C_{Π'}` keyed by `Π'`.
    pub family: Vec<(BTreeSet<usize>, Cone)>,
}

impl FanEta {
    /// `(|Π_1| + 1) ⋯ (|Π_s| + 1)`.
    pub fn expected_family_size(&self) -> usize {
        self.groups.iter().map(|g| g.len() + 1).product()
    }
}

/// Groups `Π_η` as `Π_1, …, Π_s`, choosing each `β_i` as the
/// lowest-numbered root with `η(β_i, γ) ≥ 0` on the remaining roots.
pub fn grouping(m: &AdmissibleMap) -> Result<Vec<Vec<usize>>> {
    let mut remaining = m.pi_eta();
    let mut groups = Vec::new();
    while !remaining.is_empty() {
        let beta = remaining
            .iter()
            .copied()
            .find(|&b| remaining.iter().all(|&g| m.eta[b][g] >= 0))
            .ok_or_else(|| {
                Error::Inconsistent("no root with nonnegative row on the remaining set".into())
            })?;
        let group: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&g| m.eta[beta][g] == 1)
            .collect();
        remaining.retain(|g| !group.contains(g));
        groups.push(group);
    }
    Ok(groups)
}

/// Builds `(𝔛_η, F_η, ρ_η)` from a valid admissible map.
pub fn build_fan_eta(m: &AdmissibleMap) -> Result<FanEta> {
    let report = validate_admissible(m);
    if !report.is_valid() {
        return Err(Error::Precondition(format!(
            "map is not admissible: {:?}",
            report.failed()
        )));
    }
    let n = m.rank();
    let pi = m.pi_eta();
    let k = pi.len();
    let pos: BTreeMap<usize, usize> = pi.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let groups = grouping(m)?;
    // The groups must be exactly the fibers of ρ_η.
    for g in &groups {
        let r0 = m.rho(g[0]);
        for &a in &pi {
            if (m.rho(a) == r0) != g.contains(&a) {
                return Err(Error::Inconsistent(
                    "grouping differs from the fibers of rho".into(),
                ));
            }
        }
    }
    let group_rays: Vec<IVec> = groups.iter().map(|g| m.rho(g[0])).collect();
    let neg = |a: usize| -> IVec {
        let mut v = vec![0; k];
        v[pos[&a]] = -1;
        v
    };
    let mut family = Vec::new();
    let mut choice = vec![0usize; groups.len()];
    loop {
        let mut sub = BTreeSet::new();
        for (g, &c) in groups.iter().zip(&choice) {
            if c > 0 {
                sub.insert(g[c - 1]);
            }
        }
        let mut gens: Vec<IVec> = sub.iter().map(|&a| m.rho(a)).collect();
        gens.extend(pi.iter().filter(|a| !sub.contains(a)).map(|&a| neg(a)));
        family.push((sub, Cone::new(k, gens)?));
        let mut i = 0;
        while i < groups.len() {
            choice[i] += 1;
            if choice[i] <= groups[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == groups.len() {
            break;
        }
    }
    let c_empty = Cone::new(k, pi.iter().map(|&a| neg(a)).collect())?;
    let fan = Fan::new(k, family.iter().map(|(_, c)| c.clone()).collect())?;
    let lattice = pi
        .iter()
        .map(|&a| {
            let mut v = vec![0; n];
            v[a] = 1;
            v
        })
        .collect();
    let rho = (0..n)
        .map(|a| {
            if pos.contains_key(&a) {
                Some(m.rho(a))
            } else {
                None
            }
        })
        .collect();
    Ok(FanEta {
        system: EnriquesBSystem {
            rank: n,
            lattice,
            fan,
            rho,
        },
        groups,
        group_rays,
        c_empty,
        family,
    })
}

/// Spherical system of the wonderful variety of `η`: `Π^p = ∅`,
/// `Σ = Π_η`, one color `D_α^−` per `α ∈ Π_η` and one color `D^+` per
/// value of `ρ_η`. The system is returned canonicalized together with the
/// indices of the `D^+` colors.
pub fn spherical_system_of_admissible(
    m: &AdmissibleMap,
) -> Result<(SphericalSystem, BTreeSet<usize>)> {
    let report = validate_admissible(m);
    if !report.is_valid() {
        return Err(Error::Precondition(format!(
            "map is not admissible: {:?}",
            report.failed()
        )));
    }
    let pi = m.pi_eta();
    let cartan = m.rs.cartan();
    let sigma: Vec<SphericalRoot> = pi
        .iter()
        .map(|&a| SphericalRoot::from_root(&m.rs.simple_root(a)))
        .collect();
    let mut colors: Vec<IVec> = Vec::new();
    let plus = m.rho_values();
    let plus_count = plus.len();
    colors.extend(plus);
    for &a in &pi {
        colors.push(pi.iter().map(|&b| cartan[a][b] - m.eta[a][b]).collect());
    }
    let s = SphericalSystem::new(m.rs.clone(), BTreeSet::new(), sigma, colors)?;
    let (c, perm) = s.canonicalize();
    let marked = (0..plus_count).map(|i| perm[i]).collect();
    Ok((c, marked))
}

/// `η(α, β) = ⟨κ(D_α^+), β⟩` for `α, β ∈ Σ`, where `D_α^+` is the unique
/// color of `D' ∩ D(α)`; all other entries vanish.
pub fn admissible_from_system(
    s: &SphericalSystem,
    dprime: &BTreeSet<usize>,
) -> Result<AdmissibleMap> {
    let witnesses = luna::strong_solvability_witnesses(s)?;
    if !witnesses.contains(dprime) {
        return Err(Error::Precondition(
            "the marked subset is not a strong-solvability witness".into(),
        ));
    }
    let rs = s.root_system_arc();
    let n = rs.rank();
    let mut eta = vec![vec![0i64; n]; n];
    for a in 0..n {
        let Some(_) = s.sigma_position_of_simple(a) else {
            continue;
        };
        let plus: Vec<usize> = s
            .colors_of(a)
            .into_iter()
            .filter(|d| dprime.contains(d))
            .collect();
        if plus.len() != 1 {
            return Err(Error::Inconsistent(format!(
                "D' meets D(a{}) in {} colors",
                a + 1,
                plus.len()
            )));
        }
        for b in 0..n {
            if let Some(j) = s.sigma_position_of_simple(b) {
                eta[a][b] = s.colors()[plus[0]][j];
            }
        }
    }
    AdmissibleMap::new(rs, eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::DynkinDiagram;

    fn map(t: &str, eta: Vec<Vec<i64>>) -> AdmissibleMap {
        let rs = Arc::new(RootSystem::new(&DynkinDiagram::parse(t).unwrap()));
        AdmissibleMap::new(rs, eta).unwrap()
    }

    #[test]
    fn axiom_examples() {
        let rs = Arc::new(RootSystem::new(&DynkinDiagram::parse("A2").unwrap()));
        assert!(validate_admissible(&AdmissibleMap::zero(rs.clone())).is_valid());
        assert!(validate_admissible(&AdmissibleMap::identity(rs)).is_valid());
        let bad = map("A2", vec![vec![1, 1], vec![0, 1]]);
        assert!(validate_admissible(&bad).failed().contains(&"AM3"));
    }

    #[test]
    fn fan_family_sizes() {
        let f = build_fan_eta(&map("A1", vec![vec![1]])).unwrap();
        assert_eq!(f.family.len(), 2);
        let f = build_fan_eta(&map("A1xA1", vec![vec![1, 1], vec![1, 1]])).unwrap();
        assert_eq!(f.groups, vec![vec![0, 1]]);
        assert_eq!(f.family.len(), 3);
        let fr = validate_fan(&f.system.fan);
        assert!(fr.complete && fr.regular);
        let f = build_fan_eta(&map("A2", vec![vec![1, 0], vec![0, 1]])).unwrap();
        assert_eq!(f.family.len(), 4);
        assert_eq!(f.expected_family_size(), 4);
    }

    #[test]
    fn bridge_examples() {
        let m = map("A2", vec![vec![1, 0], vec![0, 1]]);
        let (s, marked) = spherical_system_of_admissible(&m).unwrap();
        assert!(luna::validate_system(&s).is_valid());
        assert!(luna::strong_solvability_witnesses(&s)
            .unwrap()
            .contains(&marked));
        assert_eq!(admissible_from_system(&s, &marked).unwrap(), m);
    }

    #[test]
    fn enriques_mutant_fails_a() {
        let m = map("A2", vec![vec![1, 0], vec![0, 1]]);
        let mut e = build_fan_eta(&m).unwrap().system;
        assert!(validate_enriques(&e, m.root_system()).is_valid());
        e.rho[0] = Some(vec![0, 1]);
        assert!(validate_enriques(&e, m.root_system())
            .failed()
            .contains(&"a"));
    }
}
