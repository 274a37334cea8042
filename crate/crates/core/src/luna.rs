//! Spherical roots of a reductive group, homogeneous spherical data and
//! spherical systems: axiom validation, the associated color set,
//! distinguished subsets, quotient systems, strong solvability and the
//! spherical-closure map.
//!
//! Characters of the maximal torus are integer vectors in the
//! fundamental-weight basis followed by central coordinates; the semisimple
//! part is taken simply connected. A spherical root is stored as twice its
//! simple-root coordinates so that half-roots stay integral.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{self, IntMatrix};
use crate::linprog::{primitive_integer_direction, Problem, Relation};
use crate::report::Report;
use crate::rootsys::{format_root, support, DynkinDiagram, RootSystem, SimpleType};

/// Element of `½·ZΔ⁺` stored as twice its simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SphericalRoot {
    doubled: Vec<i64>,
}

impl SphericalRoot {
    /// From simple-root coordinates.
    pub fn from_root(v: &[i64]) -> Self {
        SphericalRoot {
            doubled: v.iter().map(|x| 2 * x).collect(),
        }
    }

    /// From twice the simple-root coordinates.
    pub fn from_doubled(v: Vec<i64>) -> Self {
        SphericalRoot { doubled: v }
    }

    /// From rational simple-root coordinates; each must lie in `½Z`.
    pub fn from_rational(v: &[BigRational]) -> Result<Self> {
        let two = BigRational::from_integer(BigInt::from(2));
        let mut d = Vec::with_capacity(v.len());
        for x in v {
            let y = x * &two;
            if !y.is_integer() {
                return Err(Error::NotASphericalRoot(format!("{x} is not in 1/2 Z")));
            }
            d.push(
                y.to_integer()
                    .to_i64()
                    .ok_or_else(|| Error::NotASphericalRoot("coefficient out of range".into()))?,
            );
        }
        Ok(SphericalRoot { doubled: d })
    }

    pub fn doubled(&self) -> &[i64] {
        &self.doubled
    }

    pub fn rank(&self) -> usize {
        self.doubled.len()
    }

    /// Simple-root coordinates when they are integral.
    pub fn as_root(&self) -> Option<Vec<i64>> {
        if self.doubled.iter().all(|x| x % 2 == 0) {
            Some(self.doubled.iter().map(|x| x / 2).collect())
        } else {
            None
        }
    }

    /// Coordinates as rationals.
    pub fn coords(&self) -> Vec<BigRational> {
        self.doubled
            .iter()
            .map(|&x| BigRational::new(BigInt::from(x), BigInt::from(2)))
            .collect()
    }

    /// Index `i` if this is the simple root `α_i`.
    pub fn simple_index(&self) -> Option<usize> {
        let s = support(&self.doubled);
        if s.len() == 1 {
            let i = *s.iter().next().unwrap();
            if self.doubled[i] == 2 {
                return Some(i);
            }
        }
        None
    }

    pub fn support(&self) -> BTreeSet<usize> {
        support(&self.doubled)
    }

    /// `2σ`.
    pub fn twice(&self) -> SphericalRoot {
        SphericalRoot {
            doubled: self.doubled.iter().map(|x| 2 * x).collect(),
        }
    }

    /// `σ/2` (always representable as a doubled vector when `σ ∈ 2·½Z`).
    pub fn half(&self) -> Option<SphericalRoot> {
        if self.doubled.iter().all(|x| x % 2 == 0) {
            Some(SphericalRoot {
                doubled: self.doubled.iter().map(|x| x / 2).collect(),
            })
        } else {
            None
        }
    }

    /// Fundamental-weight coordinates, if `σ` is a character of the
    /// simply connected torus.
    pub fn weight(&self, rs: &RootSystem) -> Option<Vec<i64>> {
        let w2 = rs.root_to_weight(&self.doubled);
        if w2.iter().all(|x| x % 2 == 0) {
            Some(w2.iter().map(|x| x / 2).collect())
        } else {
            None
        }
    }

    /// `⟨α_i^∨, σ⟩` as a rational.
    pub fn pairing(&self, rs: &RootSystem, i: usize) -> BigRational {
        BigRational::new(
            BigInt::from(rs.pairing_root(i, &self.doubled)),
            BigInt::from(2),
        )
    }
}

impl fmt::Display for SphericalRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_root() {
            Some(r) => write!(f, "{}", format_root(&r)),
            None => write!(f, "1/2({})", format_root(&self.doubled)),
        }
    }
}

/// One spherical root of the group with its support shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    /// Row of the classical list of spherical roots (1 to 14).
    pub row: u8,
    /// Support shape such as `A3`, `B2` or `A1xA1`.
    pub shape: String,
    /// Support nodes in standard order.
    pub nodes: Vec<usize>,
    pub sigma: SphericalRoot,
    /// Lower bound for compatible `Π^p`.
    pub pp: BTreeSet<usize>,
    /// Whether this is half of a root from an asterisk row.
    pub halved: bool,
}

/// Rows whose halves are spherical roots when they lie in the character lattice.
pub const HALVABLE_ROWS: [u8; 4] = [3, 5, 8, 10];

fn patterns(kind: SimpleType, r: usize) -> Vec<(u8, Vec<i64>)> {
    let mut out = Vec::new();
    match kind {
        SimpleType::A => {
            if r == 1 {
                out.push((1, vec![1]));
                out.push((2, vec![2]));
            } else {
                out.push((4, vec![1; r]));
                if r == 3 {
                    out.push((5, vec![1, 2, 1]));
                }
            }
        }
        SimpleType::B => {
            out.push((6, vec![1; r]));
            out.push((7, vec![2; r]));
            if r == 3 {
                out.push((8, vec![1, 2, 3]));
            }
        }
        SimpleType::C => {
            let mut v = vec![2; r];
            v[0] = 1;
            v[r - 1] = 1;
            out.push((9, v));
        }
        SimpleType::D => {
            let mut v = vec![2; r];
            v[r - 2] = 1;
            v[r - 1] = 1;
            out.push((10, v));
        }
        SimpleType::E => {}
        SimpleType::F => out.push((11, vec![2, 3, 2, 1])),
        SimpleType::G => {
            out.push((12, vec![1, 1]));
            out.push((13, vec![2, 1]));
            out.push((14, vec![4, 2]));
        }
    }
    out
}

fn pp_rule(rs: &RootSystem, row: u8, nodes: &[usize], sigma: &SphericalRoot) -> BTreeSet<usize> {
    let mut pp: BTreeSet<usize> = nodes
        .iter()
        .copied()
        .filter(|&i| rs.pairing_root(i, sigma.doubled()) == 0)
        .collect();
    match row {
        6 => {
            pp.remove(nodes.last().unwrap());
        }
        9 => {
            pp.remove(&nodes[0]);
        }
        _ => {}
    }
    pp
}

/// All spherical roots of the group, sorted, each with its `Π^{pp}`.
pub fn spherical_roots_of(rs: &RootSystem) -> Vec<CatalogEntry> {
    let n = rs.rank();
    let mut found: BTreeMap<SphericalRoot, CatalogEntry> = BTreeMap::new();
    let add = |e: CatalogEntry, found: &mut BTreeMap<SphericalRoot, CatalogEntry>| {
        if let Some(prev) = found.get(&e.sigma) {
            debug_assert_eq!(prev.pp, e.pp, "Π^pp independent of the numbering");
            return;
        }
        found.insert(e.sigma.clone(), e);
    };
    let push_with_half =
        |row: u8,
         shape: String,
         nodes: Vec<usize>,
         coeffs: Vec<i64>,
         found: &mut BTreeMap<SphericalRoot, CatalogEntry>| {
            let mut v = vec![0i64; n];
            for (k, &node) in nodes.iter().enumerate() {
                v[node] = coeffs[k];
            }
            let sigma = SphericalRoot::from_root(&v);
            let pp = pp_rule(rs, row, &nodes, &sigma);
            let entry = CatalogEntry {
                row,
                shape: shape.clone(),
                nodes: nodes.clone(),
                sigma: sigma.clone(),
                pp: pp.clone(),
                halved: false,
            };
            add(entry, found);
            if HALVABLE_ROWS.contains(&row) {
                let half = SphericalRoot::from_doubled(v.clone());
                if half.weight(rs).is_some() {
                    add(
                        CatalogEntry {
                            row,
                            shape,
                            nodes,
                            sigma: half,
                            pp,
                            halved: true,
                        },
                        found,
                    );
                }
            }
        };

    // Connected supports.
    for mask in 1u64..(1u64 << n) {
        let nodes: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if !rs.is_connected(&nodes) {
            continue;
        }
        let r = nodes.len();
        for (kind, order) in rs.standard_numberings(&nodes) {
            for (row, coeffs) in patterns(kind, r) {
                push_with_half(
                    row,
                    format!("{}{}", kind.letter(), r),
                    order.clone(),
                    coeffs,
                    &mut found,
                );
            }
        }
    }
    // Two orthogonal simple roots.
    for i in 0..n {
        for j in i + 1..n {
            if rs.cartan()[i][j] == 0 {
                push_with_half(3, "A1xA1".into(), vec![i, j], vec![1, 1], &mut found);
            }
        }
    }
    found.into_values().collect()
}

/// `Π^p(σ) = {α ∈ Π : ⟨α^∨, σ⟩ = 0}`.
pub fn pp_upper(rs: &RootSystem, sigma: &SphericalRoot) -> BTreeSet<usize> {
    (0..rs.rank())
        .filter(|&i| rs.pairing_root(i, sigma.doubled()) == 0)
        .collect()
}

/// Catalog lookup.
pub fn catalog_entry(rs: &RootSystem, sigma: &SphericalRoot) -> Option<CatalogEntry> {
    if sigma.rank() != rs.rank() {
        return None;
    }
    spherical_roots_of(rs)
        .into_iter()
        .find(|e| &e.sigma == sigma)
}

/// Sandwich test `Π^{pp}(σ) ⊂ Π^p ⊂ Π^p(σ)`.
pub fn check_compatibility(
    rs: &RootSystem,
    pp: &BTreeSet<usize>,
    sigma: &SphericalRoot,
) -> Result<bool> {
    let e = catalog_entry(rs, sigma).ok_or_else(|| Error::NotASphericalRoot(sigma.to_string()))?;
    let upper = pp_upper(rs, sigma);
    Ok(e.pp.is_subset(pp) && pp.is_subset(&upper))
}

/// Rational coordinates of `v` in the (independent) rows of `basis`.
pub fn rational_coordinates(basis: &[Vec<i64>], v: &[i64]) -> Option<Vec<BigRational>> {
    let k = basis.len();
    let n = v.len();
    // Solve x · B = v by Gauss elimination on the transposed system.
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|c| {
            let mut row: Vec<BigRational> = basis
                .iter()
                .map(|b| BigRational::from_integer(BigInt::from(b[c])))
                .collect();
            row.push(BigRational::from_integer(BigInt::from(v[c])));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..n).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = BigRational::one() / m[r][col].clone();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for c in 0..=k {
                    let d = &m[r][c] * &f;
                    m[i][c] -= d;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if (r..n).any(|i| !m[i][k].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = m[i][k].clone();
    }
    Some(x)
}

/// Homogeneous spherical datum `(Λ, Π^p, Σ, D^a)`.
///
/// `Λ` is given by a basis of characters; each color lists its values on
/// that basis.
#[derive(Debug, Clone)]
pub struct Hsd {
    rs: Arc<RootSystem>,
    central_rank: usize,
    lattice: Vec<Vec<i64>>,
    pp: BTreeSet<usize>,
    sigma: Vec<SphericalRoot>,
    colors: Vec<Vec<i64>>,
}

impl PartialEq for Hsd {
    fn eq(&self, other: &Self) -> bool {
        self.rs.diagram() == other.rs.diagram()
            && self.central_rank == other.central_rank
            && self.lattice == other.lattice
            && self.pp == other.pp
            && self.sigma == other.sigma
            && self.colors == other.colors
    }
}

impl Eq for Hsd {}

impl Hsd {
    pub fn new(
        rs: Arc<RootSystem>,
        central_rank: usize,
        lattice: Vec<Vec<i64>>,
        pp: BTreeSet<usize>,
        sigma: Vec<SphericalRoot>,
        colors: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let n = rs.rank();
        for b in &lattice {
            if b.len() != n + central_rank {
                return Err(Error::DimensionMismatch {
                    expected: n + central_rank,
                    found: b.len(),
                });
            }
        }
        for s in &sigma {
            if s.rank() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: s.rank(),
                });
            }
        }
        for c in &colors {
            if c.len() != lattice.len() {
                return Err(Error::DimensionMismatch {
                    expected: lattice.len(),
                    found: c.len(),
                });
            }
        }
        if let Some(&i) = pp.iter().find(|&&i| i >= n) {
            return Err(Error::NodeOutOfRange(i));
        }
        Ok(Hsd {
            rs,
            central_rank,
            lattice,
            pp,
            sigma,
            colors,
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn root_system_arc(&self) -> Arc<RootSystem> {
        self.rs.clone()
    }

    pub fn central_rank(&self) -> usize {
        self.central_rank
    }

    pub fn lattice(&self) -> &[Vec<i64>] {
        &self.lattice
    }

    pub fn pp(&self) -> &BTreeSet<usize> {
        &self.pp
    }

    pub fn sigma(&self) -> &[SphericalRoot] {
        &self.sigma
    }

    pub fn colors(&self) -> &[Vec<i64>] {
        &self.colors
    }

    /// Character of the torus given by `σ` (zero central part).
    pub fn sigma_character(&self, s: &SphericalRoot) -> Option<Vec<i64>> {
        let mut w = s.weight(&self.rs)?;
        w.extend(std::iter::repeat_n(0, self.central_rank));
        Some(w)
    }

    /// Coordinates of a character in the lattice basis, if it lies in `Λ`.
    pub fn lattice_coordinates(&self, chi: &[i64]) -> Option<Vec<i64>> {
        let x = rational_coordinates(&self.lattice, chi)?;
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

    /// Coordinates of `σ` in the lattice basis.
    pub fn sigma_coordinates(&self, s: &SphericalRoot) -> Option<Vec<i64>> {
        self.lattice_coordinates(&self.sigma_character(s)?)
    }

    /// `⟨κ, χ⟩` for a functional given on the lattice basis.
    pub fn evaluate(&self, kappa: &[i64], chi: &[i64]) -> Option<i64> {
        let c = self.lattice_coordinates(chi)?;
        Some(kappa.iter().zip(&c).map(|(a, b)| a * b).sum())
    }

    /// `α_i^∨` restricted to `Λ`, on the lattice basis.
    pub fn coroot_on_lattice(&self, i: usize) -> Vec<i64> {
        self.lattice.iter().map(|l| l[i]).collect()
    }

    /// `⟨κ(D), σ⟩` table, colors by rows; `None` if some `σ ∉ Λ`.
    pub fn pairing_table(&self) -> Option<Vec<Vec<i64>>> {
        let coords: Vec<Vec<i64>> = self
            .sigma
            .iter()
            .map(|s| self.sigma_coordinates(s))
            .collect::<Option<_>>()?;
        Some(
            self.colors
                .iter()
                .map(|k| {
                    coords
                        .iter()
                        .map(|c| k.iter().zip(c).map(|(a, b)| a * b).sum())
                        .collect()
                })
                .collect(),
        )
    }

    /// Indices `i` with `α_i ∈ Σ`.
    pub fn simple_in_sigma(&self) -> BTreeSet<usize> {
        self.sigma.iter().filter_map(|s| s.simple_index()).collect()
    }

    /// `D(α)` for `α ∈ Π ∩ Σ`: colors with `⟨κ(D), α⟩ = 1`.
    pub fn colors_of(&self, i: usize) -> Vec<usize> {
        let alpha = SphericalRoot::from_root(&self.rs.simple_root(i));
        let Some(c) = self.sigma_coordinates(&alpha) else {
            return Vec::new();
        };
        (0..self.colors.len())
            .filter(|&d| {
                self.colors[d]
                    .iter()
                    .zip(&c)
                    .map(|(a, b)| a * b)
                    .sum::<i64>()
                    == 1
            })
            .collect()
    }

    /// Same datum with the Hermite basis of `Λ`, `Σ` in the order used by
    /// [`SphericalSystem::canonicalize`] and colors sorted. Two data agree
    /// up to a bijection of colors iff their canonical forms are equal.
    pub fn canonical_form(&self) -> Result<Hsd> {
        let d = self.rs.rank() + self.central_rank;
        let basis = lattice::Sublattice::from_i64(d, &self.lattice)?.basis_i64();
        if basis.len() != self.lattice.len() {
            return Err(Error::Precondition(
                "lattice generators are dependent".into(),
            ));
        }
        let coords: Vec<Vec<i64>> = basis
            .iter()
            .map(|b| {
                self.lattice_coordinates(b)
                    .expect("Hermite basis lies in the lattice")
            })
            .collect();
        let mut colors: Vec<Vec<i64>> = self
            .colors
            .iter()
            .map(|k| {
                coords
                    .iter()
                    .map(|t| t.iter().zip(k).map(|(a, b)| a * b).sum())
                    .collect()
            })
            .collect();
        colors.sort();
        let mut sigma = self.sigma.clone();
        sigma.sort_by(|a, b| b.cmp(a));
        Hsd::new(
            self.rs.clone(),
            self.central_rank,
            basis,
            self.pp.clone(),
            sigma,
            colors,
        )
    }

    /// Restriction to `ZΣ`: the spherical system of the datum.
    pub fn to_spherical_system(&self) -> Result<SphericalSystem> {
        let table = self
            .pairing_table()
            .ok_or_else(|| Error::Precondition("Σ is not contained in Λ".into()))?;
        SphericalSystem::new(self.rs.clone(), self.pp.clone(), self.sigma.clone(), table)
    }
}

/// Spherical system `(Π^p, Σ, D^a)`; colors list `⟨κ(D), σ⟩` for `σ ∈ Σ`.
#[derive(Debug, Clone)]
pub struct SphericalSystem {
    rs: Arc<RootSystem>,
    pp: BTreeSet<usize>,
    sigma: Vec<SphericalRoot>,
    colors: Vec<Vec<i64>>,
}

impl PartialEq for SphericalSystem {
    fn eq(&self, other: &Self) -> bool {
        self.rs.diagram() == other.rs.diagram()
            && self.pp == other.pp
            && self.sigma == other.sigma
            && self.colors == other.colors
    }
}

impl Eq for SphericalSystem {}

impl SphericalSystem {
    pub fn new(
        rs: Arc<RootSystem>,
        pp: BTreeSet<usize>,
        sigma: Vec<SphericalRoot>,
        colors: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let n = rs.rank();
        for s in &sigma {
            if s.rank() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: s.rank(),
                });
            }
        }
        for c in &colors {
            if c.len() != sigma.len() {
                return Err(Error::DimensionMismatch {
                    expected: sigma.len(),
                    found: c.len(),
                });
            }
        }
        if let Some(&i) = pp.iter().find(|&&i| i >= n) {
            return Err(Error::NodeOutOfRange(i));
        }
        Ok(SphericalSystem {
            rs,
            pp,
            sigma,
            colors,
        })
    }

    /// Cuspidal system on `Π` with the given color rows (`Π^p = ∅`, `Σ = Π`).
    pub fn cuspidal(rs: Arc<RootSystem>, colors: Vec<Vec<i64>>) -> Result<Self> {
        let sigma = (0..rs.rank())
            .map(|i| SphericalRoot::from_root(&rs.simple_root(i)))
            .collect();
        Self::new(rs, BTreeSet::new(), sigma, colors)
    }

    /// The system of `G/B`: `(∅, ∅, ∅)`.
    pub fn trivial(rs: Arc<RootSystem>) -> Self {
        SphericalSystem {
            rs,
            pp: BTreeSet::new(),
            sigma: Vec::new(),
            colors: Vec::new(),
        }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn root_system_arc(&self) -> Arc<RootSystem> {
        self.rs.clone()
    }

    pub fn pp(&self) -> &BTreeSet<usize> {
        &self.pp
    }

    pub fn sigma(&self) -> &[SphericalRoot] {
        &self.sigma
    }

    pub fn colors(&self) -> &[Vec<i64>] {
        &self.colors
    }

    pub fn is_cuspidal(&self) -> bool {
        self.pp.is_empty()
            && self.sigma.len() == self.rs.rank()
            && (0..self.rs.rank()).all(|i| self.sigma.iter().any(|s| s.simple_index() == Some(i)))
    }

    /// Position of `α_i` in `Σ`.
    pub fn sigma_position_of_simple(&self, i: usize) -> Option<usize> {
        self.sigma.iter().position(|s| s.simple_index() == Some(i))
    }

    /// `D(α_i)` for `α_i ∈ Σ`.
    pub fn colors_of(&self, i: usize) -> Vec<usize> {
        match self.sigma_position_of_simple(i) {
            Some(p) => (0..self.colors.len())
                .filter(|&d| self.colors[d][p] == 1)
                .collect(),
            None => Vec::new(),
        }
    }

    /// Datum with `Λ = ZΣ`, or `None` if `Σ` is dependent or not in `X(T)`.
    pub fn to_hsd(&self) -> Option<Hsd> {
        let lattice: Vec<Vec<i64>> = self
            .sigma
            .iter()
            .map(|s| s.weight(&self.rs))
            .collect::<Option<_>>()?;
        if !lattice.is_empty() {
            let m = IntMatrix::from_i64(self.rs.rank(), &lattice).ok()?;
            if lattice::rank(&m) != lattice.len() {
                return None;
            }
        }
        Hsd::new(
            self.rs.clone(),
            0,
            lattice,
            self.pp.clone(),
            self.sigma.clone(),
            self.colors.clone(),
        )
        .ok()
    }

    /// Reorders colors lexicographically and `Σ` so that simple roots come in
    /// node order. Returns the new system and, for each old color index, its
    /// new index.
    pub fn canonicalize(&self) -> (SphericalSystem, Vec<usize>) {
        let mut sig_order: Vec<usize> = (0..self.sigma.len()).collect();
        sig_order.sort_by(|&a, &b| self.sigma[b].cmp(&self.sigma[a]));
        let sigma: Vec<SphericalRoot> = sig_order.iter().map(|&i| self.sigma[i].clone()).collect();
        let permuted: Vec<Vec<i64>> = self
            .colors
            .iter()
            .map(|row| sig_order.iter().map(|&i| row[i]).collect())
            .collect();
        let mut col_order: Vec<usize> = (0..permuted.len()).collect();
        col_order.sort_by(|&a, &b| permuted[a].cmp(&permuted[b]).then(a.cmp(&b)));
        let mut new_index = vec![0; permuted.len()];
        for (new, &old) in col_order.iter().enumerate() {
            new_index[old] = new;
        }
        let colors = col_order.iter().map(|&i| permuted[i].clone()).collect();
        (
            SphericalSystem {
                rs: self.rs.clone(),
                pp: self.pp.clone(),
                sigma,
                colors,
            },
            new_index,
        )
    }

    /// Key identifying the system up to a bijection of colors.
    pub fn canonical_key(&self) -> (Vec<Vec<i64>>, Vec<usize>, Vec<Vec<i64>>) {
        let (c, _) = self.canonicalize();
        (
            c.sigma.iter().map(|s| s.doubled.clone()).collect(),
            c.pp.iter().copied().collect(),
            c.colors,
        )
    }
}

fn check_sigma_catalog(rs: &RootSystem, sigma: &[SphericalRoot], report: &mut Report) {
    report.declare("Sigma-catalog");
    let cat: BTreeSet<SphericalRoot> = spherical_roots_of(rs)
        .into_iter()
        .map(|e| e.sigma)
        .collect();
    for s in sigma {
        if !cat.contains(s) {
            report.fail(
                "Sigma-catalog",
                format!("{s} is not a spherical root of the group"),
            );
        }
    }
    let set: BTreeSet<&SphericalRoot> = sigma.iter().collect();
    if set.len() != sigma.len() {
        report.fail("Sigma-catalog", "Σ lists a spherical root twice");
    }
}

/// Checks a homogeneous spherical datum axiom by axiom.
///
/// Structural checks: `Lambda-basis`, `Sigma-catalog`, `Sigma-in-Lambda`,
/// `Sigma-independent`, `Sigma-primitive`. Axioms: `A1`, `A2`, `A3`,
/// `Sigma1`, `Sigma2`, `S`.
pub fn validate_hsd(h: &Hsd) -> Report {
    let mut report = Report::new();
    let rs = h.root_system();
    let n = rs.rank();
    report.declare("Lambda-basis");
    if !h.lattice.is_empty() {
        let m = IntMatrix::from_i64(n + h.central_rank, &h.lattice).expect("lengths checked");
        if lattice::rank(&m) != h.lattice.len() {
            report.fail("Lambda-basis", "lattice generators are linearly dependent");
            return report;
        }
    }
    check_sigma_catalog(rs, &h.sigma, &mut report);
    report.declare("Sigma-in-Lambda");
    let mut coords = Vec::new();
    for s in &h.sigma {
        match h.sigma_coordinates(s) {
            Some(c) => coords.push(c),
            None => report.fail("Sigma-in-Lambda", format!("{s} does not lie in Λ")),
        }
    }
    if coords.len() != h.sigma.len() {
        return report;
    }
    report.declare("Sigma-independent");
    if !coords.is_empty() {
        let m = IntMatrix::from_i64(h.lattice.len(), &coords).expect("lengths checked");
        if lattice::rank(&m) != coords.len() {
            report.fail("Sigma-independent", "Σ is linearly dependent");
        }
    }
    report.declare("Sigma-primitive");
    for (s, c) in h.sigma.iter().zip(&coords) {
        let g = c.iter().fold(0i64, |acc, x| acc.gcd(x));
        if g != 1 {
            report.fail("Sigma-primitive", format!("{s} is divisible by {g} in Λ"));
        }
    }
    let table: Vec<Vec<i64>> = h
        .colors
        .iter()
        .map(|k| {
            coords
                .iter()
                .map(|c| k.iter().zip(c).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    let coroot = |i: usize| h.coroot_on_lattice(i);
    axiom_checks(rs, &h.pp, &h.sigma, &table, &h.colors, &coroot, &mut report);
    report
}

/// Axioms shared by data and systems. `table[D][j] = ⟨κ(D), σ_j⟩`,
/// `kappa[D]` is `κ(D)` on the lattice basis and `coroot(i)` is
/// `α_i^∨|_Λ` on the same basis.
fn axiom_checks(
    rs: &RootSystem,
    pp: &BTreeSet<usize>,
    sigma: &[SphericalRoot],
    table: &[Vec<i64>],
    kappa: &[Vec<i64>],
    coroot: &dyn Fn(usize) -> Vec<i64>,
    report: &mut Report,
) {
    let n = rs.rank();
    for name in ["A1", "A2", "A3", "Sigma1", "Sigma2", "S"] {
        report.declare(name);
    }
    // A1
    for (d, row) in table.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v > 1 {
                report.fail("A1", format!("<kappa(D{}), {}> = {v} > 1", d + 1, sigma[j]));
            } else if v == 1 && sigma[j].simple_index().is_none() {
                report.fail(
                    "A1",
                    format!(
                        "<kappa(D{}), {}> = 1 but {} is not a simple root",
                        d + 1,
                        sigma[j],
                        sigma[j]
                    ),
                );
            }
        }
    }
    // A2
    let mut covered = vec![false; table.len()];
    for (j, s) in sigma.iter().enumerate() {
        let Some(i) = s.simple_index() else { continue };
        let d_alpha: Vec<usize> = (0..table.len()).filter(|&d| table[d][j] == 1).collect();
        for &d in &d_alpha {
            covered[d] = true;
        }
        if d_alpha.len() != 2 {
            report.fail(
                "A2",
                format!("D({}) has {} elements, expected 2", s, d_alpha.len()),
            );
            continue;
        }
        let sum: Vec<i64> = kappa[d_alpha[0]]
            .iter()
            .zip(&kappa[d_alpha[1]])
            .map(|(a, b)| a + b)
            .collect();
        let target = coroot(i);
        if sum != target {
            report.fail(
                "A2",
                format!(
                    "kappa(D{}) + kappa(D{}) = {:?} differs from the coroot of {} = {:?}",
                    d_alpha[0] + 1,
                    d_alpha[1] + 1,
                    sum,
                    s,
                    target
                ),
            );
        }
    }
    // A3
    for (d, c) in covered.iter().enumerate() {
        if !c {
            report.fail("A3", format!("D{} lies in no D(alpha)", d + 1));
        }
    }
    // Sigma1
    for (j, s) in sigma.iter().enumerate() {
        let Some(half) = s.half() else { continue };
        let Some(i) = half.simple_index() else {
            continue;
        };
        if coroot(i).iter().any(|x| x % 2 != 0) {
            report.fail(
                "Sigma1",
                format!(
                    "coroot of a{} takes odd values on Λ while 2a{} is in Σ",
                    i + 1,
                    i + 1
                ),
            );
        }
        for (k, t) in sigma.iter().enumerate() {
            if k != j && t.pairing(rs, i).is_positive() {
                report.fail(
                    "Sigma1",
                    format!("<a{}^v, {}> > 0 while 2a{} is in Σ", i + 1, t, i + 1),
                );
            }
        }
    }
    // Sigma2
    for a in 0..n {
        for b in a + 1..n {
            if rs.cartan()[a][b] != 0 {
                continue;
            }
            let mut v = vec![0i64; n];
            v[a] = 1;
            v[b] = 1;
            let sum = SphericalRoot::from_root(&v);
            let hit = sigma.iter().any(|s| *s == sum || s.twice() == sum);
            if hit && coroot(a) != coroot(b) {
                report.fail(
                    "Sigma2",
                    format!(
                        "a{} + a{} is in Σ ∪ 2Σ but the coroots differ on Λ",
                        a + 1,
                        b + 1
                    ),
                );
            }
        }
    }
    // S
    for &i in pp {
        if coroot(i).iter().any(|&x| x != 0) {
            report.fail(
                "S",
                format!("a{} is in Π^p but its coroot is nonzero on Λ", i + 1),
            );
        }
    }
    for s in sigma {
        match check_compatibility(rs, pp, s) {
            Ok(true) => {}
            Ok(false) => report.fail("S", format!("(Π^p, {s}) is not compatible")),
            Err(_) => {}
        }
    }
}

/// Checks a spherical system (`Λ = ZΣ`).
pub fn validate_system(s: &SphericalSystem) -> Report {
    let mut report = Report::new();
    let rs = s.root_system();
    check_sigma_catalog(rs, &s.sigma, &mut report);
    report.declare("Sigma-independent");
    let weights: Option<Vec<Vec<i64>>> = s.sigma.iter().map(|x| x.weight(rs)).collect();
    let Some(weights) = weights else {
        report.fail("Sigma-independent", "some element of Σ is not a character");
        return report;
    };
    if !weights.is_empty() {
        let m = IntMatrix::from_i64(rs.rank(), &weights).expect("lengths checked");
        if lattice::rank(&m) != weights.len() {
            report.fail("Sigma-independent", "Σ is linearly dependent");
            return report;
        }
    }
    // On the basis Σ, α^∨|_{ZΣ} has entries ⟨α^∨, σ_j⟩, which must be integral.
    let coroot = |i: usize| -> Vec<i64> {
        s.sigma
            .iter()
            .map(|x| x.pairing(rs, i).to_integer().to_i64().unwrap_or(i64::MAX))
            .collect()
    };
    axiom_checks(
        rs,
        &s.pp,
        &s.sigma,
        &s.colors,
        &s.colors,
        &coroot,
        &mut report,
    );
    report
}

/// Kind of a color in the full color set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ColorType {
    /// Moved by a simple root that is a spherical root.
    A,
    /// Moved by a simple root whose double is a spherical root.
    APrime,
    /// Moved by the remaining simple roots outside `Π^p`.
    B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullColor {
    pub kind: ColorType,
    /// Values on the lattice basis (`Σ` for systems).
    pub kappa: Vec<i64>,
    /// Simple roots `α` with this color in `D(α)`.
    pub moved_by: BTreeSet<usize>,
}

/// Full color set `D = D^a ⊔ D^{a'} ⊔ D^b`; the `D^a` colors come first in
/// their given order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullColorSet {
    pub colors: Vec<FullColor>,
    /// `D(α)` for every simple root, as indices into `colors`.
    pub d_of: Vec<Vec<usize>>,
}

impl FullColorSet {
    pub fn count(&self, kind: ColorType) -> usize {
        self.colors.iter().filter(|c| c.kind == kind).count()
    }

    pub fn kappas(&self) -> Vec<Vec<i64>> {
        self.colors.iter().map(|c| c.kappa.clone()).collect()
    }
}

/// Builds the full color set of a system. The `κ` values are on the basis `Σ`.
pub fn full_color_set(s: &SphericalSystem) -> Result<FullColorSet> {
    let rs = s.root_system();
    build_full_color_set(
        rs,
        &s.pp,
        &s.sigma,
        &s.colors,
        |i| s.colors_of(i),
        |i| s.sigma.iter().map(|x| x.pairing(rs, i)).collect(),
    )
}

/// Full color set of a datum, with functionals on the lattice basis.
pub fn full_color_set_hsd(h: &Hsd) -> Result<FullColorSet> {
    build_full_color_set(
        &h.rs,
        &h.pp,
        &h.sigma,
        &h.colors,
        |i| h.colors_of(i),
        |i| {
            h.coroot_on_lattice(i)
                .into_iter()
                .map(|x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        },
    )
}

fn build_full_color_set(
    rs: &RootSystem,
    pp: &BTreeSet<usize>,
    sigma: &[SphericalRoot],
    a_colors: &[Vec<i64>],
    colors_of: impl Fn(usize) -> Vec<usize>,
    coroot_on_sigma: impl Fn(usize) -> Vec<BigRational>,
) -> Result<FullColorSet> {
    let n = rs.rank();
    let to_int = |v: Vec<BigRational>| -> Result<Vec<i64>> {
        v.into_iter()
            .map(|x| {
                if x.is_integer() {
                    Ok(x.to_integer().to_i64().unwrap())
                } else {
                    Err(Error::Precondition(
                        "color functional is not integral on ZΣ".into(),
                    ))
                }
            })
            .collect()
    };
    let mut colors: Vec<FullColor> = a_colors
        .iter()
        .map(|k| FullColor {
            kind: ColorType::A,
            kappa: k.clone(),
            moved_by: BTreeSet::new(),
        })
        .collect();
    let mut d_of = vec![Vec::new(); n];
    let pi_a: BTreeSet<usize> = sigma.iter().filter_map(|x| x.simple_index()).collect();
    let pi_a2: BTreeSet<usize> = sigma
        .iter()
        .filter_map(|x| x.half().and_then(|h| h.simple_index()))
        .collect();
    for &i in &pi_a {
        d_of[i] = colors_of(i);
        for &d in &d_of[i] {
            colors[d].moved_by.insert(i);
        }
    }
    for &i in &pi_a2 {
        let half: Vec<BigRational> = coroot_on_sigma(i)
            .into_iter()
            .map(|x| x / BigRational::from_integer(BigInt::from(2)))
            .collect();
        d_of[i] = vec![colors.len()];
        colors.push(FullColor {
            kind: ColorType::APrime,
            kappa: to_int(half)?,
            moved_by: [i].into_iter().collect(),
        });
    }
    let pi_b: Vec<usize> = (0..n)
        .filter(|i| !pp.contains(i) && !pi_a.contains(i) && !pi_a2.contains(i))
        .collect();
    let related = |a: usize, b: usize| -> bool {
        if rs.cartan()[a][b] != 0 {
            return false;
        }
        let mut v = vec![0i64; n];
        v[a] = 1;
        v[b] = 1;
        let sum = SphericalRoot::from_root(&v);
        sigma.iter().any(|x| *x == sum || x.twice() == sum)
    };
    let mut assigned: BTreeMap<usize, usize> = BTreeMap::new();
    for &a in &pi_b {
        if assigned.contains_key(&a) {
            continue;
        }
        let class: BTreeSet<usize> = pi_b
            .iter()
            .copied()
            .filter(|&b| b == a || related(a, b))
            .collect();
        let idx = colors.len();
        colors.push(FullColor {
            kind: ColorType::B,
            kappa: to_int(coroot_on_sigma(a))?,
            moved_by: class.clone(),
        });
        for b in class {
            assigned.insert(b, idx);
            d_of[b] = vec![idx];
        }
    }
    Ok(FullColorSet { colors, d_of })
}

/// Witness that a subset of colors is distinguished.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishedWitness {
    /// Positive integer coefficients, one per color of the subset.
    pub coefficients: Vec<i64>,
    /// `δ = Σ n_D κ(D)` on the basis `Σ`.
    pub delta: Vec<i64>,
}

fn positive_combination(
    kappas: &[Vec<i64>],
    k: usize,
    strict: bool,
    extra: Option<usize>,
) -> Option<Vec<BigRational>> {
    let m = kappas.len();
    let mut p = Problem::new(m);
    for d in 0..m {
        let mut e = vec![0; m];
        e[d] = 1;
        p.add_i64(&e, Relation::Ge, 1);
    }
    for j in 0..k {
        let row: Vec<i64> = kappas.iter().map(|kp| kp[j]).collect();
        let rhs = if strict || extra == Some(j) { 1 } else { 0 };
        p.add_i64(&row, Relation::Ge, rhs);
    }
    p.solve()
}

fn witness_from(kappas: &[Vec<i64>], k: usize, sol: &[BigRational]) -> DistinguishedWitness {
    let lcm = sol.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let coefficients: Vec<i64> = sol
        .iter()
        .map(|x| {
            (x * &lcm)
                .to_integer()
                .to_i64()
                .expect("small coefficients")
        })
        .collect();
    let delta = (0..k)
        .map(|j| {
            kappas
                .iter()
                .zip(&coefficients)
                .map(|(kp, c)| kp[j] * c)
                .sum()
        })
        .collect();
    DistinguishedWitness {
        coefficients,
        delta,
    }
}

/// Decides whether `subset` (indices into the full color set) is
/// distinguished; returns a witness with cleared denominators.
pub fn is_distinguished(
    s: &SphericalSystem,
    subset: &BTreeSet<usize>,
) -> Result<Option<DistinguishedWitness>> {
    let full = full_color_set(s)?;
    let kappas: Vec<Vec<i64>> = subset
        .iter()
        .map(|&d| {
            full.colors
                .get(d)
                .map(|c| c.kappa.clone())
                .ok_or(Error::NodeOutOfRange(d))
        })
        .collect::<Result<_>>()?;
    let k = s.sigma.len();
    Ok(positive_combination(&kappas, k, false, None).map(|sol| witness_from(&kappas, k, &sol)))
}

/// Strict variant: `⟨δ, σ⟩ > 0` for every `σ ∈ Σ`.
pub fn is_strictly_distinguished(
    s: &SphericalSystem,
    subset: &BTreeSet<usize>,
) -> Result<Option<DistinguishedWitness>> {
    let full = full_color_set(s)?;
    let kappas: Vec<Vec<i64>> = subset
        .iter()
        .map(|&d| full.colors[d].kappa.clone())
        .collect();
    let k = s.sigma.len();
    Ok(positive_combination(&kappas, k, true, None).map(|sol| witness_from(&kappas, k, &sol)))
}

/// Indecomposable elements of `{x ∈ Z^m_{≥0} : K x = 0}`.
pub fn monoid_indecomposables(k_rows: &[Vec<i64>], m: usize) -> Vec<Vec<i64>> {
    if m == 0 {
        return Vec::new();
    }
    // Extreme rays: minimal supports with a one-dimensional kernel.
    let mut rays: Vec<Vec<i64>> = Vec::new();
    for mask in 1u64..(1u64 << m) {
        let cols: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let sub: Vec<Vec<i64>> = cols
            .iter()
            .map(|&c| k_rows.iter().map(|r| r[c]).collect())
            .collect();
        let ker = if k_rows.is_empty() {
            lattice::Sublattice::full(cols.len())
        } else {
            lattice::left_kernel(&IntMatrix::from_i64(k_rows.len(), &sub).expect("dims"))
        };
        if ker.rank() != 1 {
            continue;
        }
        let v = &ker.basis_i64()[0];
        let sign = if v.iter().all(|&x| x > 0) {
            1
        } else if v.iter().all(|&x| x < 0) {
            -1
        } else {
            continue;
        };
        let mut full = vec![0i64; m];
        for (t, &c) in cols.iter().enumerate() {
            full[c] = sign * v[t];
        }
        if !rays.contains(&full) {
            rays.push(full);
        }
    }
    if rays.is_empty() {
        return Vec::new();
    }
    let bound: Vec<i64> = (0..m).map(|i| rays.iter().map(|r| r[i]).sum()).collect();
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    let mut x = vec![0i64; m];
    loop {
        let mut i = 0;
        loop {
            if i == m {
                break;
            }
            if x[i] < bound[i] {
                x[i] += 1;
                break;
            }
            x[i] = 0;
            i += 1;
        }
        if i == m {
            break;
        }
        if k_rows
            .iter()
            .all(|r| r.iter().zip(&x).map(|(a, b)| a * b).sum::<i64>() == 0)
        {
            candidates.push(x.clone());
        }
    }
    candidates.sort_by_key(|v| (v.iter().sum::<i64>(), v.clone()));
    let mut out: Vec<Vec<i64>> = Vec::new();
    for c in candidates {
        let decomposes = out.iter().any(|y| y.iter().zip(&c).all(|(a, b)| a <= b));
        if !decomposes {
            out.push(c);
        }
    }
    out
}

/// Quotient of a system by a distinguished subset of the full color set.
pub fn quotient_system(s: &SphericalSystem, subset: &BTreeSet<usize>) -> Result<SphericalSystem> {
    let full = full_color_set(s)?;
    if is_distinguished(s, subset)?.is_none() {
        return Err(Error::Precondition(
            "subset of colors is not distinguished".into(),
        ));
    }
    let k = s.sigma.len();
    let kappas: Vec<Vec<i64>> = subset
        .iter()
        .map(|&d| full.colors[d].kappa.clone())
        .collect();
    // Σ_{D'}: roots on which every admissible δ vanishes.
    let sigma_dp: Vec<usize> = (0..k)
        .filter(|&j| positive_combination(&kappas, k, false, Some(j)).is_none())
        .collect();
    let k_rows: Vec<Vec<i64>> = kappas
        .iter()
        .map(|kp| sigma_dp.iter().map(|&j| kp[j]).collect())
        .collect();
    let gens = monoid_indecomposables(&k_rows, sigma_dp.len());
    // Freeness: the indecomposables must be linearly independent.
    if !gens.is_empty() {
        let m = IntMatrix::from_i64(sigma_dp.len(), &gens).expect("dims");
        if lattice::rank(&m) != gens.len() {
            return Err(Error::Inconsistent("quotient semigroup is not free".into()));
        }
    }
    let n = s.root_system().rank();
    let mut new_sigma = Vec::new();
    let mut new_cols: Vec<Vec<i64>> = Vec::new();
    for g in &gens {
        let mut doubled = vec![0i64; n];
        for (t, &j) in sigma_dp.iter().enumerate() {
            for (c, d) in doubled.iter_mut().zip(s.sigma[j].doubled()) {
                *c += g[t] * d;
            }
        }
        new_sigma.push(SphericalRoot::from_doubled(doubled));
        new_cols.push(
            (0..s.colors.len())
                .map(|d| {
                    sigma_dp
                        .iter()
                        .enumerate()
                        .map(|(t, &j)| g[t] * s.colors[d][j])
                        .sum()
                })
                .collect(),
        );
    }
    let cat: BTreeSet<SphericalRoot> = spherical_roots_of(s.root_system())
        .into_iter()
        .map(|e| e.sigma)
        .collect();
    for x in &new_sigma {
        if !cat.contains(x) {
            return Err(Error::Inconsistent(format!(
                "quotient produced {x}, which is not a spherical root"
            )));
        }
    }
    let pp: BTreeSet<usize> = (0..n)
        .filter(|&i| full.d_of[i].iter().all(|d| subset.contains(d)))
        .collect();
    let mut keep = BTreeSet::new();
    for x in &new_sigma {
        if let Some(i) = x.simple_index() {
            keep.extend(s.colors_of(i));
        }
    }
    let colors = keep
        .iter()
        .map(|&d| new_cols.iter().map(|col| col[d]).collect())
        .collect();
    SphericalSystem::new(s.rs.clone(), pp, new_sigma, colors)
}

/// All `D' ⊂ D^a` with a strictly positive `δ` and `|D \ D'| = |Π|`, as
/// sorted index sets into `D^a`.
pub fn strong_solvability_witnesses(s: &SphericalSystem) -> Result<Vec<BTreeSet<usize>>> {
    let full = full_color_set(s)?;
    let n = s.root_system().rank();
    let total = full.colors.len();
    let na = s.colors.len();
    if total < n {
        return Ok(Vec::new());
    }
    let size = total - n;
    if size > na {
        return Ok(Vec::new());
    }
    let k = s.sigma.len();
    let mut out = Vec::new();
    for subset in subsets_of_size(na, size) {
        let kappas: Vec<Vec<i64>> = subset.iter().map(|&d| s.colors[d].clone()).collect();
        if positive_combination(&kappas, k, true, None).is_some() {
            out.push(subset.into_iter().collect::<BTreeSet<usize>>());
        }
    }
    if !out.is_empty() {
        let sigma_in_pi = s.sigma.iter().all(|x| x.simple_index().is_some());
        if !s.pp.is_empty() || !sigma_in_pi {
            return Err(Error::Inconsistent(
                "strongly solvable system with Π^p ≠ ∅ or Σ ⊄ Π".into(),
            ));
        }
    }
    Ok(out)
}

/// All `size`-element subsets of `0..n` in lexicographic order.
pub fn subsets_of_size(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

/// Spherical system of the spherical closure: `σ ↦ 2σ` when `σ ∉ Π`,
/// `2σ` is a spherical root and `(Π^p, 2σ)` is compatible.
pub fn spherical_closure_invariants(h: &Hsd) -> Result<SphericalSystem> {
    let rs = h.root_system();
    let table = h
        .pairing_table()
        .ok_or_else(|| Error::Precondition("Σ is not contained in Λ".into()))?;
    let mut sigma = Vec::new();
    let mut factor = Vec::new();
    for s in &h.sigma {
        let double = s.twice();
        let doubled_ok = s.simple_index().is_none()
            && catalog_entry(rs, &double).is_some()
            && check_compatibility(rs, &h.pp, &double)?;
        if doubled_ok {
            sigma.push(double);
            factor.push(2);
        } else {
            sigma.push(s.clone());
            factor.push(1);
        }
    }
    let colors = table
        .iter()
        .map(|row| row.iter().zip(&factor).map(|(v, f)| v * f).collect())
        .collect();
    SphericalSystem::new(h.rs.clone(), h.pp.clone(), sigma, colors)
}

/// Same map on a spherical system viewed as a datum with `Λ = ZΣ`.
pub fn spherical_closure_of_system(s: &SphericalSystem) -> Result<SphericalSystem> {
    let h = s
        .to_hsd()
        .ok_or_else(|| Error::Precondition("Σ must be independent characters".into()))?;
    spherical_closure_invariants(&h)
}

/// Builds a root system shared behind an `Arc`.
pub fn shared_root_system(diagram: &DynkinDiagram) -> Arc<RootSystem> {
    Arc::new(RootSystem::new(diagram))
}

/// Integer point on the ray of a rational vector (helper for witnesses).
pub fn clear_denominators(v: &[BigRational]) -> Vec<i64> {
    primitive_integer_direction(v)
        .iter()
        .map(|x| x.to_i64().expect("small"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> Arc<RootSystem> {
        shared_root_system(&DynkinDiagram::parse(s).unwrap())
    }

    fn sr(v: &[i64]) -> SphericalRoot {
        SphericalRoot::from_root(v)
    }

    #[test]
    fn rank_one_catalog() {
        let a1 = rs("A1");
        let cat = spherical_roots_of(&a1);
        let sig: Vec<String> = cat.iter().map(|e| e.sigma.to_string()).collect();
        assert_eq!(sig, vec!["a1", "2a1"]);
        assert!(cat.iter().all(|e| e.pp.is_empty()));
    }

    #[test]
    fn compatibility_examples() {
        let a3 = rs("A3");
        let s = sr(&[1, 2, 1]);
        assert!(!check_compatibility(&a3, &[0].into_iter().collect(), &s).unwrap());
        assert!(check_compatibility(&a3, &[0, 2].into_iter().collect(), &s).unwrap());
        assert!(check_compatibility(&a3, &BTreeSet::new(), &sr(&[1, 0, 0])).unwrap());
        assert!(check_compatibility(&a3, &[1].into_iter().collect(), &sr(&[1, 1, 1])).unwrap());
        assert!(check_compatibility(&a3, &BTreeSet::new(), &sr(&[3, 0, 0])).is_err());
    }

    #[test]
    fn trivial_system_validates() {
        let a2 = rs("A2");
        let s = SphericalSystem::trivial(a2);
        assert!(validate_system(&s).is_valid());
        let full = full_color_set(&s).unwrap();
        assert_eq!(full.count(ColorType::B), 2);
    }

    #[test]
    fn a2_first_system() {
        let a2 = rs("A2");
        let s =
            SphericalSystem::cuspidal(a2, vec![vec![1, 0], vec![0, 1], vec![1, -1], vec![-1, 1]])
                .unwrap();
        assert!(validate_system(&s).is_valid(), "{}", validate_system(&s));
        let w = strong_solvability_witnesses(&s).unwrap();
        let expected: Vec<BTreeSet<usize>> = vec![
            [0, 1].into_iter().collect(),
            [0, 3].into_iter().collect(),
            [1, 2].into_iter().collect(),
        ];
        assert_eq!(w, expected);
        let q = quotient_system(&s, &expected[0]).unwrap();
        assert!(q.sigma().is_empty() && q.pp().is_empty() && q.colors().is_empty());
        assert!(is_distinguished(&s, &[2].into_iter().collect())
            .unwrap()
            .is_none());
        let id = quotient_system(&s, &BTreeSet::new()).unwrap();
        assert_eq!(id.canonical_key(), s.canonical_key());
    }

    #[test]
    fn mutated_row_breaks_a1() {
        let a2 = rs("A2");
        let s =
            SphericalSystem::cuspidal(a2, vec![vec![2, 0], vec![0, 1], vec![1, -1], vec![-1, 1]])
                .unwrap();
        let r = validate_system(&s);
        assert!(r.failed().contains(&"A1"));
    }

    #[test]
    fn b_colors_of_orthogonal_pair() {
        let a11 = rs("A1xA1");
        let s = SphericalSystem::new(a11, BTreeSet::new(), vec![sr(&[1, 1])], vec![]).unwrap();
        assert!(validate_system(&s).is_valid(), "{}", validate_system(&s));
        let full = full_color_set(&s).unwrap();
        assert_eq!(full.colors.len(), 1);
        assert_eq!(full.colors[0].moved_by.len(), 2);
    }

    #[test]
    fn closure_keeps_simple_roots() {
        let a2 = rs("A2");
        let s = SphericalSystem::cuspidal(a2, vec![vec![1, 1], vec![1, -2], vec![-2, 1]]).unwrap();
        let c = spherical_closure_of_system(&s).unwrap();
        assert_eq!(c, s);
    }
}
