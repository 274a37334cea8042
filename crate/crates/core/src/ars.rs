//! Active roots and ARS-sets: the explicit description of strongly solvable
//! spherical subgroups standardly embedded in `B⁻`, with conversions to
//! admissible maps and homogeneous spherical data.
//!
//! Characters of `T` are integer vectors in the fundamental-weight basis
//! followed by central coordinates; roots are vectors in the simple-root
//! basis and are converted when they enter `𝔛(T)`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::admissible::AdmissibleMap;
use crate::error::{Error, Result};
use crate::fans::IVec;
use crate::lattice::{self, big_vec, FgAbelianGroup, IntMatrix, Sublattice};
use crate::luna::{self, Hsd, SphericalRoot};
use crate::report::Report;
use crate::rootsys::{format_root, support, RootSystem, SimpleType};

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Root `α` as a character of `T` with central rank `c`.
pub fn root_character(rs: &RootSystem, alpha: &[i64], c: usize) -> IVec {
    let mut w = rs.root_to_weight(alpha);
    w.extend(std::iter::repeat_n(0, c));
    w
}

/// Whether `(α, δ)` is one of the listed pairs (maximal active root,
/// associated simple root).
pub fn check_active_pattern(rs: &RootSystem, alpha: &[i64], delta: usize) -> Result<bool> {
    if !rs.is_positive_root(alpha) {
        return Err(Error::NotARoot(alpha.to_vec()));
    }
    let supp = support(alpha);
    if !supp.contains(&delta) {
        return Err(Error::Precondition(format!(
            "a{} is not in the support of {}",
            delta + 1,
            format_root(alpha)
        )));
    }
    if supp.iter().all(|&i| alpha[i] == 1) {
        return Ok(true);
    }
    let r = supp.len();
    for (kind, order) in rs.standard_numberings(&supp) {
        let c: Vec<i64> = order.iter().map(|&i| alpha[i]).collect();
        let pos = order
            .iter()
            .position(|&i| i == delta)
            .expect("delta in support");
        let hit = match kind {
            SimpleType::B => {
                let mut p = vec![1; r];
                p[r - 1] = 2;
                c == p && pos < r - 1
            }
            SimpleType::C => {
                let mut p = vec![2; r];
                p[r - 1] = 1;
                c == p && pos == r - 1
            }
            SimpleType::F => c == [2, 2, 1, 1] && (pos == 2 || pos == 3),
            SimpleType::G => (c == [2, 1] || c == [3, 1]) && pos == 1,
            _ => false,
        };
        if hit {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `F(α) = {α} ∪ {β ∈ Δ⁺ : α − β ∈ Δ⁺, π(α) ∉ Supp β}` for a listed pair.
pub fn subordinate_closure(rs: &RootSystem, alpha: &[i64], pi: usize) -> Result<Vec<IVec>> {
    if !check_active_pattern(rs, alpha, pi)? {
        return Err(Error::Precondition(format!(
            "({}, a{}) is not an active-root pattern",
            format_root(alpha),
            pi + 1
        )));
    }
    let mut out = vec![alpha.to_vec()];
    for beta in rs.positive_roots() {
        if beta[pi] == 0 && rs.is_positive_root(&sub(alpha, beta)) {
            out.push(beta.clone());
        }
    }
    let pis = associated_roots(rs, &out)?;
    let image: BTreeSet<usize> = pis.iter().copied().collect();
    if image.len() != out.len() || image != support(alpha) || pis[0] != pi {
        return Err(Error::Inconsistent(format!(
            "pi is not a bijection from F({}) onto its support",
            format_root(alpha)
        )));
    }
    Ok(out)
}

/// The associated simple root of each element of `psi`, determined by:
/// for every splitting `β = β₁ + β₂` into positive roots, `β₁ ∈ Ψ` iff
/// `π(β) ∉ Supp β₁`.
pub fn associated_roots(rs: &RootSystem, psi: &[IVec]) -> Result<Vec<usize>> {
    let set: BTreeSet<&IVec> = psi.iter().collect();
    let mut out = Vec::with_capacity(psi.len());
    for beta in psi {
        let splits: Vec<&IVec> = rs
            .positive_roots()
            .iter()
            .filter(|b1| rs.is_positive_root(&sub(beta, b1)))
            .collect();
        let cands: Vec<usize> = support(beta)
            .into_iter()
            .filter(|&d| splits.iter().all(|b1| set.contains(*b1) == (b1[d] == 0)))
            .collect();
        if cands.len() != 1 {
            return Err(Error::Inconsistent(format!(
                "{} has {} candidate associated roots",
                format_root(beta),
                cands.len()
            )));
        }
        out.push(cands[0]);
    }
    Ok(out)
}

/// Display order of roots: by height, then by the highest node involved,
/// so that `a1 < a2 < a1+a2`.
pub fn root_order(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    let h = |x: &[i64]| x.iter().sum::<i64>();
    h(a).cmp(&h(b))
        .then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

/// Sorts each class by [`root_order`] and the classes by their members.
pub fn sort_classes(mut classes: Vec<Vec<IVec>>) -> Vec<Vec<IVec>> {
    for c in classes.iter_mut() {
        c.sort_by(|a, b| root_order(a, b));
    }
    classes.sort_by(|x, y| {
        x.iter()
            .zip(y.iter())
            .map(|(a, b)| root_order(a, b))
            .find(|o| o.is_ne())
            .unwrap_or(x.len().cmp(&y.len()))
    });
    classes
}

/// `(M, π, ∼)`: maximal active roots with associated simple roots and an
/// equivalence given by class labels.
#[derive(Debug, Clone)]
pub struct ArsSet {
    rs: Arc<RootSystem>,
    pub m: Vec<IVec>,
    pub pi: Vec<usize>,
    /// Class label of each element of `M`; equal labels mean equivalent.
    pub class: Vec<usize>,
}

impl PartialEq for ArsSet {
    fn eq(&self, other: &Self) -> bool {
        self.rs.diagram() == other.rs.diagram() && self.canonical() == other.canonical()
    }
}

impl Eq for ArsSet {}

impl ArsSet {
    pub fn new(
        rs: Arc<RootSystem>,
        m: Vec<IVec>,
        pi: Vec<usize>,
        class: Vec<usize>,
    ) -> Result<Self> {
        if m.len() != pi.len() || m.len() != class.len() {
            return Err(Error::DimensionMismatch {
                expected: m.len(),
                found: pi.len().min(class.len()),
            });
        }
        for r in &m {
            if r.len() != rs.rank() {
                return Err(Error::DimensionMismatch {
                    expected: rs.rank(),
                    found: r.len(),
                });
            }
        }
        Ok(ArsSet { rs, m, pi, class })
    }

    /// Builds the set from classes of `(root, π)` pairs.
    pub fn from_classes(rs: Arc<RootSystem>, classes: &[Vec<(IVec, usize)>]) -> Result<Self> {
        let mut m = Vec::new();
        let mut pi = Vec::new();
        let mut class = Vec::new();
        for (k, c) in classes.iter().enumerate() {
            for (r, p) in c {
                m.push(r.clone());
                pi.push(*p);
                class.push(k);
            }
        }
        Self::new(rs, m, pi, class)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn root_system_arc(&self) -> Arc<RootSystem> {
        self.rs.clone()
    }

    pub fn equivalent(&self, i: usize, j: usize) -> bool {
        self.class[i] == self.class[j]
    }

    /// `Π₀ = ⋃ Supp β` over `β ∈ M`.
    pub fn pi0(&self) -> BTreeSet<usize> {
        self.m.iter().flat_map(|r| support(r)).collect()
    }

    /// Sorted classes of `(root, π)` pairs; equal iff the sets agree.
    pub fn canonical(&self) -> Vec<Vec<(IVec, usize)>> {
        let mut by: BTreeMap<usize, Vec<(IVec, usize)>> = BTreeMap::new();
        for i in 0..self.m.len() {
            by.entry(self.class[i])
                .or_default()
                .push((self.m[i].clone(), self.pi[i]));
        }
        let mut out: Vec<Vec<(IVec, usize)>> = by
            .into_values()
            .map(|mut v| {
                v.sort();
                v
            })
            .collect();
        out.sort();
        out
    }
}

/// Pair of maximal active roots, for the pairwise conditions.
struct Pair<'a> {
    rs: &'a RootSystem,
    a: &'a [i64],
    b: &'a [i64],
    pa: usize,
    pb: usize,
}

impl Pair<'_> {
    fn inter(&self) -> BTreeSet<usize> {
        support(self.a)
            .intersection(&support(self.b))
            .copied()
            .collect()
    }

    fn d0(&self) -> bool {
        self.inter().is_empty()
    }

    fn single(&self) -> Option<usize> {
        let i = self.inter();
        (i.len() == 1).then(|| *i.iter().next().unwrap())
    }

    fn terminal_in_both(&self, d: usize) -> bool {
        self.rs.is_terminal(d, &support(self.a)) && self.rs.is_terminal(d, &support(self.b))
    }

    fn d1(&self) -> bool {
        self.single()
            .is_some_and(|d| self.pa != d && self.pb != d && self.terminal_in_both(d))
    }

    fn e1(&self) -> bool {
        self.single().is_some_and(|d| {
            let mut e = vec![0; self.a.len()];
            e[d] = 1;
            d == self.pa
                && d == self.pb
                && self.rs.is_positive_root(&sub(self.a, &e))
                && self.rs.is_positive_root(&sub(self.b, &e))
                && self.terminal_in_both(d)
        })
    }

    fn d2(&self) -> bool {
        let i = self.inter();
        star_shape(self.rs, self.a, self.b) && !i.contains(&self.pa) && !i.contains(&self.pb)
    }

    fn e2(&self) -> bool {
        star_shape(self.rs, self.a, self.b) && self.pa == self.pb && self.inter().contains(&self.pa)
    }
}

/// Whether the node set induces a path whose end `end` (if given) is an
/// endpoint, with all edges simple.
fn is_simple_path(rs: &RootSystem, nodes: &BTreeSet<usize>, end: Option<usize>) -> bool {
    if nodes.is_empty() || !rs.is_connected(nodes) {
        return false;
    }
    let mut edges = 0;
    for &u in nodes {
        let nb = rs.neighbours_in(u, nodes);
        if nb.len() > 2 {
            return false;
        }
        for &v in &nb {
            if rs.cartan()[u][v] != -1 {
                return false;
            }
        }
        edges += nb.len();
    }
    if edges / 2 != nodes.len() - 1 {
        return false;
    }
    end.is_none_or(|e| nodes.len() == 1 || rs.neighbours_in(e, nodes).len() == 1)
}

/// The three-armed configuration: `Supp α ∩ Supp β` is a simple chain
/// `γ₀ … γ_s` (`s ≥ 1`) hanging off the branch node `γ₀`, the two private
/// parts are simple chains attached to `γ₀` only, and `α`, `β` have all
/// coefficients equal to 1.
pub fn star_shape(rs: &RootSystem, a: &[i64], b: &[i64]) -> bool {
    let sa = support(a);
    let sb = support(b);
    if sa.iter().any(|&i| a[i] != 1) || sb.iter().any(|&i| b[i] != 1) {
        return false;
    }
    let inter: BTreeSet<usize> = sa.intersection(&sb).copied().collect();
    let pa: BTreeSet<usize> = sa.difference(&inter).copied().collect();
    let pb: BTreeSet<usize> = sb.difference(&inter).copied().collect();
    if inter.len() < 2 || pa.is_empty() || pb.is_empty() {
        return false;
    }
    let union: BTreeSet<usize> = sa.union(&sb).copied().collect();
    let mut g0 = None;
    for &g in &inter {
        if rs.neighbours_in(g, &union).len() == 3 {
            if g0.is_some() {
                return false;
            }
            g0 = Some(g);
        }
    }
    let Some(g0) = g0 else { return false };
    if !is_simple_path(rs, &inter, Some(g0)) {
        return false;
    }
    for private in [&pa, &pb] {
        let links: Vec<(usize, usize)> = private
            .iter()
            .flat_map(|&u| {
                inter
                    .iter()
                    .filter(move |&&v| rs.adjacent(u, v))
                    .map(move |&v| (u, v))
            })
            .collect();
        if links.len() != 1 || links[0].1 != g0 || rs.cartan()[links[0].0][g0] != -1 {
            return false;
        }
        if !is_simple_path(rs, private, Some(links[0].0)) {
            return false;
        }
    }
    pa.iter().all(|&u| pb.iter().all(|&v| !rs.adjacent(u, v)))
}

/// Checks `(A)`, `(D)`, `(E)` and `(C)` with witnessing pairs.
pub fn validate_ars(a: &ArsSet) -> Report {
    let mut r = Report::new();
    for name in ["structure", "A", "D", "E", "C"] {
        r.declare(name);
    }
    let rs = a.root_system();
    for (i, m) in a.m.iter().enumerate() {
        if !rs.is_positive_root(m) {
            r.fail(
                "structure",
                format!("{} is not a positive root", format_root(m)),
            );
            return r;
        }
        if a.m[..i].contains(m) {
            r.fail("structure", format!("{} is listed twice", format_root(m)));
        }
    }
    for (m, &p) in a.m.iter().zip(&a.pi) {
        match check_active_pattern(rs, m, p) {
            Ok(true) => {}
            Ok(false) => r.fail(
                "A",
                format!("({}, a{}) is not a listed pair", format_root(m), p + 1),
            ),
            Err(_) => r.fail(
                "A",
                format!("a{} is not in the support of {}", p + 1, format_root(m)),
            ),
        }
    }
    for i in 0..a.m.len() {
        for j in i + 1..a.m.len() {
            let p = Pair {
                rs,
                a: &a.m[i],
                b: &a.m[j],
                pa: a.pi[i],
                pb: a.pi[j],
            };
            let names = format!("{}, {}", format_root(&a.m[i]), format_root(&a.m[j]));
            if a.equivalent(i, j) {
                if !(p.d0() || p.d1() || p.e1() || p.d2() || p.e2()) {
                    r.fail(
                        "E",
                        format!("equivalent pair ({names}) fits none of D0, D1, E1, D2, E2"),
                    );
                }
            } else if !(p.d0() || p.d1() || p.d2()) {
                r.fail(
                    "D",
                    format!("inequivalent pair ({names}) fits none of D0, D1, D2"),
                );
            }
        }
    }
    for (i, m) in a.m.iter().enumerate() {
        let others: BTreeSet<usize> =
            a.m.iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .flat_map(|(_, x)| support(x))
                .collect();
        if support(m).is_subset(&others) {
            r.fail(
                "C",
                format!(
                    "support of {} is covered by the other roots",
                    format_root(m)
                ),
            );
        }
    }
    r
}

/// Expanded data `(Ψ, π, ∼)` with classes `Ψ_φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveRootSystem {
    pub psi: Vec<IVec>,
    pub pi: Vec<usize>,
    /// Indices into `psi`, one list per class, each sorted.
    pub classes: Vec<Vec<usize>>,
}

impl ActiveRootSystem {
    pub fn class_of(&self, i: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.contains(&i))
            .expect("every root has a class")
    }

    /// Classes as sets of roots, sorted by [`root_order`].
    pub fn class_roots(&self) -> Vec<Vec<IVec>> {
        sort_classes(
            self.classes
                .iter()
                .map(|c| c.iter().map(|&i| self.psi[i].clone()).collect())
                .collect(),
        )
    }

    /// `φ[α]` for `α ∈ Π₀`: the class whose `π`-image contains `α`.
    pub fn class_of_simple(&self, alpha: usize) -> Option<usize> {
        (0..self.psi.len())
            .find(|&i| self.pi[i] == alpha)
            .map(|i| self.class_of(i))
    }

    /// Indices of the maximal elements: not subordinate to another
    /// active root.
    pub fn maximal(&self, rs: &RootSystem) -> Vec<usize> {
        (0..self.psi.len())
            .filter(|&i| {
                !self
                    .psi
                    .iter()
                    .any(|b| rs.is_positive_root(&sub(b, &self.psi[i])))
            })
            .collect()
    }

    /// Restriction to maximal roots.
    pub fn to_ars_set(&self, rs: Arc<RootSystem>) -> Result<ArsSet> {
        let max = self.maximal(&rs);
        let m = max.iter().map(|&i| self.psi[i].clone()).collect();
        let pi = max.iter().map(|&i| self.pi[i]).collect();
        let class = max.iter().map(|&i| self.class_of(i)).collect();
        ArsSet::new(rs, m, pi, class)
    }
}

/// `Ψ = ⋃ F(α)` over `α ∈ M`, with the equivalence extended by common
/// shifts into `M`.
pub fn expand_ars(a: &ArsSet) -> Result<ActiveRootSystem> {
    let rs = a.root_system();
    let mut psi: Vec<IVec> = Vec::new();
    for (m, &p) in a.m.iter().zip(&a.pi) {
        for r in subordinate_closure(rs, m, p)? {
            if !psi.contains(&r) {
                psi.push(r);
            }
        }
    }
    psi.sort_by(|x, y| {
        y.iter()
            .sum::<i64>()
            .cmp(&x.iter().sum::<i64>())
            .then(x.cmp(y))
    });
    let pi = associated_roots(rs, &psi)?;
    for (m, &p) in a.m.iter().zip(&a.pi) {
        let i = psi
            .iter()
            .position(|r| r == m)
            .expect("maximal roots are in psi");
        if pi[i] != p {
            return Err(Error::Inconsistent(format!(
                "associated root of {} is a{}, not a{}",
                format_root(m),
                pi[i] + 1,
                p + 1
            )));
        }
    }
    let n = psi.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let m_index = |v: &IVec| a.m.iter().position(|x| x == v);
    let shifts: Vec<IVec> = std::iter::once(vec![0; rs.rank()])
        .chain(rs.positive_roots().iter().cloned())
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            let related = shifts.iter().any(|g| {
                match (m_index(&add(&psi[i], g)), m_index(&add(&psi[j], g))) {
                    (Some(x), Some(y)) => a.equivalent(x, y),
                    _ => false,
                }
            });
            if related {
                let (x, y) = (find(&mut parent, i), find(&mut parent, j));
                parent[x] = y;
            }
        }
    }
    let mut by: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        by.entry(root).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = by.into_values().collect();
    classes.sort();
    Ok(ActiveRootSystem { psi, pi, classes })
}

/// ARS-set together with `Ker τ ⊂ 𝔛(T)`, so that `𝔛(S) = 𝔛(T)/Ker τ`.
#[derive(Debug, Clone)]
pub struct ExtendedArsSet {
    pub ars: ArsSet,
    pub central_rank: usize,
    pub ker_tau: Sublattice,
}

impl PartialEq for ExtendedArsSet {
    fn eq(&self, other: &Self) -> bool {
        self.ars == other.ars
            && self.central_rank == other.central_rank
            && self.ker_tau == other.ker_tau
    }
}

impl Eq for ExtendedArsSet {}

/// `Z{α − β : α ∼ β in M}` inside `𝔛(T)`.
pub fn equivalence_lattice(a: &ArsSet, c: usize) -> Result<Sublattice> {
    let rs = a.root_system();
    let mut gens = Vec::new();
    for i in 0..a.m.len() {
        for j in i + 1..a.m.len() {
            if a.equivalent(i, j) {
                gens.push(big_vec(&root_character(rs, &sub(&a.m[i], &a.m[j]), c)));
            }
        }
    }
    Sublattice::from_generators(rs.rank() + c, gens)
}

/// `ZΠ₀` inside `𝔛(T)`.
pub fn pi0_lattice(a: &ArsSet, c: usize) -> Result<Sublattice> {
    let rs = a.root_system();
    let gens = a
        .pi0()
        .into_iter()
        .map(|i| big_vec(&root_character(rs, &rs.simple_root(i), c)))
        .collect();
    Sublattice::from_generators(rs.rank() + c, gens)
}

impl ExtendedArsSet {
    pub fn new(ars: ArsSet, central_rank: usize, ker_tau: Sublattice) -> Result<Self> {
        let n = ars.root_system().rank();
        if ker_tau.ambient() != n + central_rank {
            return Err(Error::DimensionMismatch {
                expected: n + central_rank,
                found: ker_tau.ambient(),
            });
        }
        Ok(ExtendedArsSet {
            ars,
            central_rank,
            ker_tau,
        })
    }

    /// The representative with `Ker τ = Z{α − β : α ∼ β}`, the spherical
    /// closure of any subgroup with the same ARS-set.
    pub fn normalized(ars: ArsSet, central_rank: usize) -> Result<Self> {
        let k = equivalence_lattice(&ars, central_rank)?;
        Self::new(ars, central_rank, k)
    }

    pub fn normalize(&self) -> Result<Self> {
        Self::normalized(self.ars.clone(), self.central_rank)
    }

    pub fn root_system(&self) -> &RootSystem {
        self.ars.root_system()
    }

    /// `𝔛(S) = 𝔛(T) / Ker τ`.
    pub fn character_group(&self) -> FgAbelianGroup {
        FgAbelianGroup::new(self.ker_tau.clone())
    }

    /// `τ(χ)` in normal form.
    pub fn tau(&self, chi: &[i64]) -> Result<Vec<BigInt>> {
        self.character_group().reduce_i64(chi)
    }

    pub fn root_character(&self, alpha: &[i64]) -> IVec {
        root_character(self.root_system(), alpha, self.central_rank)
    }
}

/// Checks the ARS-set and condition `(T)`.
pub fn validate_extended(e: &ExtendedArsSet) -> Report {
    let mut r = validate_ars(&e.ars);
    r.declare("T");
    if !r.is_valid() {
        return r;
    }
    let (Ok(z0), Ok(eq)) = (
        pi0_lattice(&e.ars, e.central_rank),
        equivalence_lattice(&e.ars, e.central_rank),
    ) else {
        r.fail("T", "lattice computation failed");
        return r;
    };
    match e.ker_tau.intersect(&z0) {
        Ok(meet) if meet == eq => {}
        Ok(meet) => r.fail(
            "T",
            format!("Ker tau meets Z Pi_0 in {meet}, expected {eq}"),
        ),
        Err(err) => r.fail("T", err.to_string()),
    }
    r
}

/// `Φ` as representatives in `𝔛(T)` (one root per class) together with
/// the expansion.
fn phi_representatives(e: &ExtendedArsSet) -> Result<(ActiveRootSystem, Vec<IVec>)> {
    let ex = expand_ars(&e.ars)?;
    let reps = ex
        .classes
        .iter()
        .map(|c| e.root_character(&ex.psi[c[0]]))
        .collect();
    Ok((ex, reps))
}

/// Whether the weights `φ ∈ Φ` are linearly independent in `𝔛(S)`.
pub fn check_sphericity_combinatorial(e: &ExtendedArsSet) -> Result<bool> {
    let (_, reps) = phi_representatives(e)?;
    Ok(phi_independent(e, &reps))
}

fn phi_independent(e: &ExtendedArsSet, reps: &[IVec]) -> bool {
    let d = e.ker_tau.ambient();
    let mut rows = reps.to_vec();
    rows.extend(e.ker_tau.basis_i64());
    if rows.is_empty() {
        return true;
    }
    let m = IntMatrix::from_i64(d, &rows).expect("dims");
    lattice::rank(&m) == reps.len() + e.ker_tau.rank()
}

/// Solver for `τ(μ) = Σ J(φ, μ) φ`.
#[derive(Debug, Clone)]
pub struct TauSolver {
    pub expansion: ActiveRootSystem,
    reps: Vec<IVec>,
    kernel: Vec<IVec>,
}

impl TauSolver {
    pub fn new(e: &ExtendedArsSet) -> Result<Self> {
        let (ex, reps) = phi_representatives(e)?;
        if !phi_independent(e, &reps) {
            return Err(Error::Inconsistent(
                "the weights of Phi are linearly dependent".into(),
            ));
        }
        Ok(TauSolver {
            expansion: ex,
            reps,
            kernel: e.ker_tau.basis_i64(),
        })
    }

    /// `J(φ, μ)` for every class `φ`, for `μ ∈ ZΠ₀ + Ker τ` given in
    /// weight coordinates.
    pub fn solve(&self, mu: &[i64]) -> Result<Vec<i64>> {
        let mut rows = self.reps.clone();
        rows.extend(self.kernel.iter().cloned());
        if rows.is_empty() {
            return if mu.iter().all(|&x| x == 0) {
                Ok(Vec::new())
            } else {
                Err(Error::NotInLattice(vec![format!("{mu:?}")]))
            };
        }
        let x = luna::rational_coordinates(&rows, mu)
            .ok_or_else(|| Error::NotInLattice(vec![format!("{mu:?}")]))?;
        let ints: Option<Vec<i64>> = x
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect();
        let ints = ints.ok_or_else(|| Error::NotInLattice(vec![format!("{mu:?}")]))?;
        Ok(ints[..self.reps.len()].to_vec())
    }
}

/// `J(φ, μ)` for every class.
pub fn tau_j(e: &ExtendedArsSet, mu: &[i64]) -> Result<Vec<i64>> {
    TauSolver::new(e)?.solve(mu)
}

/// `η(α, β) = J(φ[α], β)` for `α, β ∈ Π₀`, zero otherwise.
pub fn admissible_from_ars(e: &ExtendedArsSet) -> Result<AdmissibleMap> {
    let report = validate_extended(e);
    if !report.is_valid() {
        return Err(Error::Precondition(format!(
            "invalid extended ARS-set: {:?}",
            report.failed()
        )));
    }
    let solver = TauSolver::new(e)?;
    let rs = e.ars.root_system_arc();
    let n = rs.rank();
    let pi0 = e.ars.pi0();
    let mut eta = vec![vec![0i64; n]; n];
    for &b in &pi0 {
        let j = solver.solve(&e.root_character(&rs.simple_root(b)))?;
        for &a in &pi0 {
            let phi = solver.expansion.class_of_simple(a).ok_or_else(|| {
                Error::Inconsistent(format!("a{} is not an associated root", a + 1))
            })?;
            eta[a][b] = j[phi];
        }
    }
    AdmissibleMap::new(rs, eta)
}

/// Active roots of the wonderful subgroup of `η`: one class per value `ϱ₀`
/// of `ρ_η`, consisting of the positive roots in `Z⁺Π_η` with `⟨ϱ₀, α⟩ = 1`
/// and `⟨ϱ, α⟩ = 0` for the other values.
pub fn ars_from_admissible(m: &AdmissibleMap) -> Result<(ActiveRootSystem, ExtendedArsSet)> {
    let rs = m.root_system_arc();
    let pi = m.pi_eta();
    let values = m.rho_values();
    let mut psi = Vec::new();
    let mut classes = Vec::new();
    for k in 0..values.len() {
        let mut class = Vec::new();
        for r in rs.positive_roots() {
            if support(r).iter().any(|i| !pi.contains(i)) {
                continue;
            }
            let coords: IVec = pi.iter().map(|&i| r[i]).collect();
            let ok = values
                .iter()
                .enumerate()
                .all(|(j, v)| dot(v, &coords) == i64::from(j == k));
            if ok {
                class.push(psi.len());
                psi.push(r.clone());
            }
        }
        classes.push(class);
    }
    let pis = associated_roots(&rs, &psi)?;
    let ex = ActiveRootSystem {
        psi,
        pi: pis,
        classes,
    };
    let ars = ex.to_ars_set(rs)?;
    let e = ExtendedArsSet::normalized(ars, 0)?;
    Ok((ex, e))
}

/// Homogeneous spherical datum: `Λ = ZΠ₀ + Ker τ`, `Π^p = ∅`, `Σ = Π₀`,
/// colors `D_α` (`α ∈ Π₀`, in node order) then `D_φ` (in class order).
pub fn hsd_from_ars(e: &ExtendedArsSet) -> Result<Hsd> {
    let report = validate_extended(e);
    if !report.is_valid() {
        return Err(Error::Precondition(format!(
            "invalid extended ARS-set: {:?}",
            report.failed()
        )));
    }
    let solver = TauSolver::new(e)?;
    let rs = e.ars.root_system_arc();
    let c = e.central_rank;
    let lam = pi0_lattice(&e.ars, c)?.sum(&e.ker_tau)?;
    let basis = lam.basis_i64();
    let js: Vec<Vec<i64>> = basis
        .iter()
        .map(|mu| solver.solve(mu))
        .collect::<Result<_>>()?;
    let pi0: Vec<usize> = e.ars.pi0().into_iter().collect();
    let mut colors = Vec::new();
    for &a in &pi0 {
        let phi = solver
            .expansion
            .class_of_simple(a)
            .ok_or_else(|| Error::Inconsistent(format!("a{} is not an associated root", a + 1)))?;
        colors.push(
            basis
                .iter()
                .zip(&js)
                .map(|(mu, j)| mu[a] - j[phi])
                .collect(),
        );
    }
    for phi in 0..solver.expansion.classes.len() {
        colors.push(js.iter().map(|j| j[phi]).collect());
    }
    let sigma = pi0
        .iter()
        .map(|&a| SphericalRoot::from_root(&rs.simple_root(a)))
        .collect();
    Hsd::new(rs, c, basis, BTreeSet::new(), sigma, colors)
}

/// Presentation `ψ : Z^D ⊕ 𝔛(C) → 𝔛(H)` of the character group of a datum,
/// over its full color set.
#[derive(Debug, Clone)]
pub struct ColorPresentation {
    pub full: luna::FullColorSet,
    pub group: FgAbelianGroup,
}

/// Builds `ψ` from the relations `Σ ⟨κ(D), μ⟩ D − μ^C` over a basis of `Λ`.
pub fn color_presentation(d: &Hsd) -> Result<ColorPresentation> {
    let full = luna::full_color_set_hsd(d)?;
    let nd = full.colors.len();
    let c = d.central_rank();
    let n = d.root_system().rank();
    let rels: Vec<Vec<BigInt>> = d
        .lattice()
        .iter()
        .enumerate()
        .map(|(j, mu)| {
            let mut v: Vec<i64> = full.colors.iter().map(|col| col.kappa[j]).collect();
            v.extend(mu[n..].iter().map(|x| -x));
            big_vec(&v)
        })
        .collect();
    let group = FgAbelianGroup::quotient_group(nd + c, rels)?;
    Ok(ColorPresentation { full, group })
}

/// Recovers the extended ARS-set of a strongly solvable datum from a
/// strong-solvability witness `D'` (indices into `D^a`).
pub fn ars_from_hsd(d: &Hsd, dprime: &BTreeSet<usize>) -> Result<ExtendedArsSet> {
    let sys = d.to_spherical_system()?;
    let witnesses = luna::strong_solvability_witnesses(&sys)?;
    if !witnesses.contains(dprime) {
        return Err(Error::Precondition(
            "the marked subset is not a strong-solvability witness".into(),
        ));
    }
    let rs = d.root_system_arc();
    let n = rs.rank();
    let c = d.central_rank();
    let pres = color_presentation(d)?;
    let nd = pres.full.colors.len();
    // D_α: the unique color of D(α) outside D'.
    let mut d_alpha = Vec::with_capacity(n);
    for a in 0..n {
        let rest: Vec<usize> = pres.full.d_of[a]
            .iter()
            .copied()
            .filter(|x| !dprime.contains(x))
            .collect();
        if rest.len() != 1 {
            return Err(Error::Inconsistent(format!(
                "D(a{}) has {} colors outside D'",
                a + 1,
                rest.len()
            )));
        }
        d_alpha.push(rest[0]);
    }
    // 𝔛(T) → Z^D ⊕ 𝔛(C) via ϖ_α ↦ −D_α and the identity on 𝔛(C).
    let embed = |chi: &[i64]| -> IVec {
        let mut v = vec![0i64; nd + c];
        for a in 0..n {
            v[d_alpha[a]] -= chi[a];
        }
        for j in 0..c {
            v[nd + j] += chi[n + j];
        }
        v
    };
    let f_rows: Vec<IVec> = (0..n + c)
        .map(|i| {
            let mut e = vec![0; n + c];
            e[i] = 1;
            embed(&e)
        })
        .collect();
    let f = IntMatrix::from_i64(nd + c, &f_rows)?;
    let ker_tau = pres.group.relations().preimage(&f)?;
    let tau = |chi: &[i64]| pres.group.reduce_i64(&embed(chi));
    let mut phis = Vec::new();
    for &dd in dprime {
        let mut v = vec![0i64; nd + c];
        v[dd] += 1;
        for a in 0..n {
            if pres.full.d_of[a].contains(&dd) {
                v[d_alpha[a]] -= 1;
            }
        }
        phis.push(pres.group.reduce_i64(&v)?);
    }
    let sigma_nodes: BTreeSet<usize> = d.sigma().iter().filter_map(|s| s.simple_index()).collect();
    let mut psi = Vec::new();
    let mut classes = vec![Vec::new(); phis.len()];
    for r in rs.positive_roots() {
        if !support(r).is_subset(&sigma_nodes) {
            continue;
        }
        let t = tau(&root_character(&rs, r, c))?;
        if let Some(k) = phis.iter().position(|p| *p == t) {
            classes[k].push(psi.len());
            psi.push(r.clone());
        }
    }
    if classes.iter().any(|cl| cl.is_empty()) {
        return Err(Error::Inconsistent(
            "some weight of Phi has no active root".into(),
        ));
    }
    let pis = associated_roots(&rs, &psi)?;
    let ex = ActiveRootSystem {
        psi,
        pi: pis,
        classes,
    };
    let ars = ex.to_ars_set(rs)?;
    ExtendedArsSet::new(ars, c, ker_tau)
}

/// Structural laws of an expanded set: non-acute maximal roots, `ZΨ = ZΠ₀`,
/// the shift law, disjointness of the `π`-images of classes, and the
/// equivalence criterion `α ∼ β ⇔ τ(α) = τ(β)`.
pub fn structural_laws(e: &ExtendedArsSet) -> Result<Report> {
    let mut r = Report::new();
    for name in ["angle", "lattice", "shift", "disjoint", "tau-classes"] {
        r.declare(name);
    }
    let rs = e.root_system();
    let ex = expand_ars(&e.ars)?;
    for i in 0..e.ars.m.len() {
        for j in i + 1..e.ars.m.len() {
            if rs.inner_product(&e.ars.m[i], &e.ars.m[j]) > 0 {
                r.fail(
                    "angle",
                    format!(
                        "{} and {} form an acute angle",
                        format_root(&e.ars.m[i]),
                        format_root(&e.ars.m[j])
                    ),
                );
            }
        }
    }
    let n = rs.rank();
    let zpsi = Sublattice::from_i64(n, &ex.psi)?;
    let pi0: Vec<IVec> = e.ars.pi0().into_iter().map(|i| rs.simple_root(i)).collect();
    let zpi0 = Sublattice::from_i64(n, &pi0)?;
    if zpsi != zpi0 {
        r.fail(
            "lattice",
            format!("Z Psi = {zpsi} differs from Z Pi_0 = {zpi0}"),
        );
    }
    for i in 0..ex.psi.len() {
        for j in 0..ex.psi.len() {
            if i == j {
                continue;
            }
            let gamma = sub(&ex.psi[j], &ex.psi[i]);
            if !rs.is_positive_root(&gamma) {
                continue;
            }
            let (ci, cj) = (ex.class_of(i), ex.class_of(j));
            for &k in &ex.classes[ci] {
                let shifted = add(&ex.psi[k], &gamma);
                let ok = ex.classes[cj].iter().any(|&l| ex.psi[l] == shifted);
                if !ok {
                    r.fail(
                        "shift",
                        format!(
                            "{} + {} is not in the class of {}",
                            format_root(&ex.psi[k]),
                            format_root(&gamma),
                            format_root(&ex.psi[j])
                        ),
                    );
                }
            }
        }
    }
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for (k, cl) in ex.classes.iter().enumerate() {
        for &i in cl {
            if let Some(&other) = seen.get(&ex.pi[i]) {
                if other != k {
                    r.fail(
                        "disjoint",
                        format!("a{} is associated with two classes", ex.pi[i] + 1),
                    );
                }
            }
            seen.insert(ex.pi[i], k);
        }
    }
    let group = e.character_group();
    let taus: Vec<Vec<BigInt>> = ex
        .psi
        .iter()
        .map(|x| group.reduce_i64(&e.root_character(x)))
        .collect::<Result<_>>()?;
    for i in 0..ex.psi.len() {
        for j in i + 1..ex.psi.len() {
            let same_class = ex.class_of(i) == ex.class_of(j);
            if same_class != (taus[i] == taus[j]) {
                r.fail(
                    "tau-classes",
                    format!(
                        "{} and {} violate the criterion",
                        format_root(&ex.psi[i]),
                        format_root(&ex.psi[j])
                    ),
                );
            }
        }
    }
    if taus.iter().any(|t| t.iter().all(Zero::is_zero)) {
        r.fail("tau-classes", "an active root restricts trivially to S");
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::DynkinDiagram;

    fn rs(t: &str) -> Arc<RootSystem> {
        Arc::new(RootSystem::new(&DynkinDiagram::parse(t).unwrap()))
    }

    #[test]
    fn active_patterns() {
        let b3 = rs("B3");
        assert!(check_active_pattern(&b3, &[1, 1, 1], 2).unwrap());
        assert!(!check_active_pattern(&b3, &[1, 1, 2], 2).unwrap());
        assert!(check_active_pattern(&b3, &[1, 1, 2], 1).unwrap());
        let g2 = rs("G2");
        assert!(check_active_pattern(&g2, &[3, 1], 1).unwrap());
        assert!(!check_active_pattern(&g2, &[3, 1], 0).unwrap());
        assert!(check_active_pattern(&g2, &[1, 0], 1).is_err());
        let f4 = rs("F4");
        assert!(f4.is_positive_root(&[2, 2, 1, 1]));
        assert!(check_active_pattern(&f4, &[2, 2, 1, 1], 3).unwrap());
    }

    #[test]
    fn closures() {
        let a2 = rs("A2");
        assert_eq!(
            subordinate_closure(&a2, &[1, 1], 0).unwrap(),
            vec![vec![1, 1], vec![0, 1]]
        );
        assert_eq!(
            subordinate_closure(&a2, &[1, 0], 0).unwrap(),
            vec![vec![1, 0]]
        );
        let g2 = rs("G2");
        assert_eq!(
            subordinate_closure(&g2, &[3, 1], 1).unwrap(),
            vec![vec![3, 1], vec![1, 0]]
        );
    }

    #[test]
    fn condition_c_fails() {
        let a2 = rs("A2");
        let a = ArsSet::new(a2, vec![vec![1, 1], vec![0, 1]], vec![0, 1], vec![0, 1]).unwrap();
        assert!(validate_ars(&a).failed().contains(&"C"));
    }

    #[test]
    fn g2_tau_values() {
        let g2 = rs("G2");
        let a = ArsSet::new(g2.clone(), vec![vec![3, 1]], vec![1], vec![0]).unwrap();
        let e = ExtendedArsSet::normalized(a, 0).unwrap();
        let solver = TauSolver::new(&e).unwrap();
        let classes = solver.expansion.class_roots();
        assert_eq!(classes, vec![vec![vec![1, 0]], vec![vec![3, 1]]]);
        let j = solver.solve(&root_character(&g2, &[0, 1], 0)).unwrap();
        let k1 = solver.expansion.class_of_simple(0).unwrap();
        assert_eq!(j[k1], -3);
        let eta = admissible_from_ars(&e).unwrap();
        assert_eq!(eta.matrix(), &[vec![1, -3], vec![0, 1]]);
    }
}
