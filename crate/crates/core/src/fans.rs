//! Rational polyhedral cones and fans in `Q^d` with integer generators.
//!
//! Every geometric decision (convexity, faces, the fan axiom) is reduced to
//! exact linear feasibility, so results never depend on sampling.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{self, IntMatrix};
use crate::linprog::{primitive_integer_direction, Problem, Relation};

/// Integer vector in `Z^d` or its dual.
pub type IVec = Vec<i64>;

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(v: &[i64]) -> IVec {
    let g = v.iter().fold(0i64, |acc, x| acc.gcd(x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// Polyhedral cone generated by primitive integer vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    dim: usize,
    gens: Vec<IVec>,
}

impl Cone {
    /// Divides each generator by the gcd of its entries, drops zero vectors
    /// and duplicates, and sorts.
    pub fn new(dim: usize, gens: Vec<IVec>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for g in gens {
            if g.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.len(),
                });
            }
            if g.iter().all(|&x| x == 0) {
                continue;
            }
            set.insert(primitive(&g));
        }
        Ok(Cone {
            dim,
            gens: set.into_iter().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[IVec] {
        &self.gens
    }

    /// Dimension of the linear span.
    pub fn span_dim(&self) -> usize {
        if self.gens.is_empty() {
            return 0;
        }
        lattice::rank(&IntMatrix::from_i64(self.dim, &self.gens).expect("dims checked"))
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.span_dim() == self.dim
    }

    /// `C ∩ −C = {0}`: no nontrivial nonnegative combination of generators vanishes.
    pub fn is_strictly_convex(&self) -> bool {
        let k = self.gens.len();
        if k == 0 {
            return true;
        }
        let mut p = Problem::new(k);
        for i in 0..k {
            p.set_nonneg(i);
        }
        p.add_i64(&vec![1; k], Relation::Eq, 1);
        for c in 0..self.dim {
            let row: Vec<i64> = self.gens.iter().map(|g| g[c]).collect();
            p.add_i64(&row, Relation::Eq, 0);
        }
        !p.is_feasible()
    }

    /// Whether `v` lies in the cone.
    pub fn contains(&self, v: &[i64]) -> bool {
        let k = self.gens.len();
        let mut p = Problem::new(k);
        for i in 0..k {
            p.set_nonneg(i);
        }
        for c in 0..self.dim {
            let row: Vec<i64> = self.gens.iter().map(|g| g[c]).collect();
            p.add_i64(&row, Relation::Eq, v[c]);
        }
        p.is_feasible()
    }

    /// Whether `other ⊂ self`.
    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    /// A functional `u` with `u·g = 0` for generators in `zero` and
    /// `u·g ≥ 1` for all others, if one exists.
    fn supporting_functional(&self, zero: &BTreeSet<usize>) -> Option<Vec<BigRational>> {
        let mut p = Problem::new(self.dim);
        for (i, g) in self.gens.iter().enumerate() {
            if zero.contains(&i) {
                p.add_i64(g, Relation::Eq, 0);
            } else {
                p.add_i64(g, Relation::Ge, 1);
            }
        }
        p.solve()
    }

    /// All faces as sorted sets of generator indices, from the apex to the
    /// cone itself. The apex `{0}` is present only for strictly convex cones.
    pub fn faces(&self) -> Vec<BTreeSet<usize>> {
        let k = self.gens.len();
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << k) {
            let s: BTreeSet<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            if self.supporting_functional(&s).is_some() {
                out.push(s);
            }
        }
        out.sort_by_key(|s| (s.len(), s.iter().cloned().collect::<Vec<_>>()));
        out
    }

    /// Face spanned by the given generator indices, as a cone.
    pub fn subcone(&self, idx: &BTreeSet<usize>) -> Cone {
        Cone {
            dim: self.dim,
            gens: idx.iter().map(|&i| self.gens[i].clone()).collect(),
        }
    }

    /// Generators spanning one-dimensional faces.
    pub fn rays(&self) -> Vec<IVec> {
        self.faces()
            .into_iter()
            .filter(|f| f.len() == 1 && self.subcone(f).span_dim() == 1)
            .map(|f| self.gens[*f.iter().next().unwrap()].clone())
            .collect()
    }

    /// Codimension-one faces of a full-dimensional cone.
    pub fn facets(&self) -> Vec<Cone> {
        let d = self.span_dim();
        if d == 0 {
            return Vec::new();
        }
        self.faces()
            .into_iter()
            .map(|f| self.subcone(&f))
            .filter(|c| c.span_dim() + 1 == d)
            .collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.span_dim() == self.gens.len()
    }

    /// Generators are part of a lattice basis.
    pub fn is_regular(&self) -> bool {
        if !self.is_simplicial() {
            return false;
        }
        if self.gens.is_empty() {
            return true;
        }
        let m = IntMatrix::from_i64(self.dim, &self.gens).expect("dims checked");
        lattice::invariant_factors(&m)
            .iter()
            .all(|d| d == &BigInt::from(1))
    }
}

/// Result of [`validate_cone`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeReport {
    pub strictly_convex: bool,
    pub simplicial: bool,
    pub regular: bool,
    pub full_dimensional: bool,
    /// Faces as generator index sets.
    pub faces: Vec<BTreeSet<usize>>,
}

pub fn validate_cone(c: &Cone) -> ConeReport {
    ConeReport {
        strictly_convex: c.is_strictly_convex(),
        simplicial: c.is_simplicial(),
        regular: c.is_strictly_convex() && c.is_regular(),
        full_dimensional: c.is_full_dimensional(),
        faces: c.faces(),
    }
}

/// Dual cone `{u : u·g ≥ 0 for all generators g}` of a full-dimensional,
/// strictly convex cone, generated by its primitive facet normals.
pub fn dual(c: &Cone) -> Result<Cone> {
    if !c.is_full_dimensional() || !c.is_strictly_convex() {
        return Err(Error::Precondition(
            "dual cone is computed for full-dimensional strictly convex cones".into(),
        ));
    }
    let mut normals = Vec::new();
    for f in c.facets() {
        let m = IntMatrix::from_i64(c.dim, f.generators()).expect("dims checked");
        let k = lattice::left_kernel(&m.transpose());
        let n = k.basis_i64();
        debug_assert_eq!(n.len(), 1);
        let mut n = n[0].clone();
        if c.gens.iter().any(|g| dot(g, &n) < 0) {
            n = n.iter().map(|x| -x).collect();
        }
        normals.push(n);
    }
    Cone::new(c.dim, normals)
}

/// Fan given by its maximal cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    cones: Vec<Cone>,
}

impl Fan {
    /// Sorts and deduplicates the cones.
    pub fn new(dim: usize, cones: Vec<Cone>) -> Result<Self> {
        for c in &cones {
            if c.dim != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: c.dim,
                });
            }
        }
        let set: BTreeSet<Cone> = cones.into_iter().collect();
        Ok(Fan {
            dim,
            cones: set.into_iter().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.cones
    }

    /// Distinct rays of all cones, sorted.
    pub fn rays(&self) -> Vec<IVec> {
        let set: BTreeSet<IVec> = self.cones.iter().flat_map(|c| c.rays()).collect();
        set.into_iter().collect()
    }
}

/// Result of [`validate_fan`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanReport {
    pub is_fan: bool,
    pub complete: bool,
    pub regular: bool,
    pub rays: Vec<IVec>,
    /// Human-readable reasons for every failed property.
    pub witnesses: Vec<String>,
}

/// Decides whether `C1 ∩ C2` is a face of both cones.
///
/// Takes a functional `u` from the relative interior of the cone of
/// separating functionals (`u ≥ 0` on `C1`, `u ≤ 0` on `C2`); the
/// intersection is a common face iff `C1 ∩ u^⊥ = C2 ∩ u^⊥`.
fn meet_is_common_face(c1: &Cone, c2: &Cone) -> std::result::Result<(), String> {
    let d = c1.dim;
    let base = |p: &mut Problem| {
        for g in &c1.gens {
            p.add_i64(g, Relation::Ge, 0);
        }
        for g in &c2.gens {
            p.add_i64(g, Relation::Le, 0);
        }
    };
    let mut u = vec![BigRational::zero(); d];
    let all: Vec<(IVec, Relation, i64)> = c1
        .gens
        .iter()
        .map(|g| (g.clone(), Relation::Ge, 1))
        .chain(c2.gens.iter().map(|g| (g.clone(), Relation::Le, -1)))
        .collect();
    for (g, rel, rhs) in &all {
        let mut p = Problem::new(d);
        base(&mut p);
        p.add_i64(g, *rel, *rhs);
        if let Some(w) = p.solve() {
            for (a, b) in u.iter_mut().zip(w) {
                *a += b;
            }
        }
    }
    let ui = primitive_integer_direction(&u);
    let val = |g: &IVec| -> BigInt { g.iter().zip(&ui).map(|(x, y)| BigInt::from(*x) * y).sum() };
    let z1: Vec<IVec> = c1
        .gens
        .iter()
        .filter(|g| val(g).is_zero())
        .cloned()
        .collect();
    let z2: Vec<IVec> = c2
        .gens
        .iter()
        .filter(|g| val(g).is_zero())
        .cloned()
        .collect();
    let f1 = Cone { dim: d, gens: z1 };
    let f2 = Cone { dim: d, gens: z2 };
    for g in &f1.gens {
        if !f2.contains(g) {
            return Err(format!(
                "cones {:?} and {:?} overlap beyond a common face; witness generator {:?}",
                c1.gens, c2.gens, g
            ));
        }
    }
    for g in &f2.gens {
        if !f1.contains(g) {
            return Err(format!(
                "cones {:?} and {:?} overlap beyond a common face; witness generator {:?}",
                c1.gens, c2.gens, g
            ));
        }
    }
    Ok(())
}

/// Checks the fan axiom pairwise, regularity of every cone, and completeness
/// by facet pairing: every maximal cone full-dimensional, every facet shared
/// by exactly two maximal cones, and the facet-adjacency graph connected.
pub fn validate_fan(f: &Fan) -> FanReport {
    let mut witnesses = Vec::new();
    let mut is_fan = true;
    for c in &f.cones {
        if !c.is_strictly_convex() {
            is_fan = false;
            witnesses.push(format!("cone {:?} is not strictly convex", c.gens));
        }
    }
    for i in 0..f.cones.len() {
        for j in i + 1..f.cones.len() {
            if let Err(w) = meet_is_common_face(&f.cones[i], &f.cones[j]) {
                is_fan = false;
                witnesses.push(w);
            }
        }
    }
    let regular = f.cones.iter().all(|c| c.is_regular());
    if !regular {
        witnesses.push("some maximal cone is not regular".into());
    }

    let mut complete = !f.cones.is_empty();
    if f.dim == 0 {
        complete = f.cones.len() == 1;
    } else if complete {
        let mut owners: BTreeMap<Vec<IVec>, Vec<usize>> = BTreeMap::new();
        for (i, c) in f.cones.iter().enumerate() {
            if !c.is_full_dimensional() {
                complete = false;
                witnesses.push(format!("maximal cone {:?} is not full-dimensional", c.gens));
                continue;
            }
            for facet in c.facets() {
                owners.entry(facet.gens.clone()).or_default().push(i);
            }
        }
        let mut adj = vec![Vec::new(); f.cones.len()];
        for (facet, own) in &owners {
            if own.len() != 2 {
                complete = false;
                witnesses.push(format!(
                    "facet {:?} belongs to {} maximal cones",
                    facet,
                    own.len()
                ));
            } else {
                adj[own[0]].push(own[1]);
                adj[own[1]].push(own[0]);
            }
        }
        let mut seen = vec![false; f.cones.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            complete = false;
            witnesses.push("facet-adjacency graph is disconnected".into());
        }
    }
    FanReport {
        is_fan,
        complete: complete && is_fan,
        regular,
        rays: f.rays(),
        witnesses,
    }
}

/// Witness that a functional is a root of a fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanRootWitness {
    pub alpha: IVec,
    /// The unique ray on which the functional takes the value 1.
    pub ray: IVec,
}

/// Returns the distinguished ray if exactly one ray evaluates to 1 under
/// `alpha` and all others are nonpositive.
pub fn fan_root_check(f: &Fan, alpha: &[i64]) -> Option<FanRootWitness> {
    let mut hit = None;
    for r in f.rays() {
        match dot(&r, alpha) {
            1 if hit.is_none() => hit = Some(r),
            v if v <= 0 => {}
            _ => return None,
        }
    }
    hit.map(|ray| FanRootWitness {
        alpha: alpha.to_vec(),
        ray,
    })
}

/// Fan of `P^1 × … × P^1` (`d` factors).
pub fn product_of_lines(d: usize) -> Fan {
    let mut cones = Vec::new();
    for mask in 0u32..(1 << d) {
        let gens = (0..d)
            .map(|i| {
                let mut v = vec![0; d];
                v[i] = if mask >> i & 1 == 1 { -1 } else { 1 };
                v
            })
            .collect();
        cones.push(Cone::new(d, gens).expect("dims"));
    }
    Fan::new(d, cones).expect("dims")
}

/// Fan of projective space `P^d`: cones on all proper subsets of
/// `{e_1, …, e_d, −e_1 − … − e_d}` of size `d`.
pub fn projective_space(d: usize) -> Fan {
    let mut rays: Vec<IVec> = (0..d)
        .map(|i| {
            let mut v = vec![0; d];
            v[i] = 1;
            v
        })
        .collect();
    rays.push(vec![-1; d]);
    let cones = (0..=d)
        .map(|skip| {
            let gens = rays
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, r)| r.clone())
                .collect();
            Cone::new(d, gens).expect("dims")
        })
        .collect();
    Fan::new(d, cones).expect("dims")
}

/// Values of `alpha` on every ray.
pub fn ray_values(f: &Fan, alpha: &[i64]) -> Vec<(IVec, i64)> {
    f.rays()
        .into_iter()
        .map(|r| {
            let v = dot(&r, alpha);
            (r, v)
        })
        .collect()
}
