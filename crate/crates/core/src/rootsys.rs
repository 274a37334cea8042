//! Root systems of Dynkin diagrams that are products of simple types A–G.
//!
//! Conventions. Nodes are numbered globally `0..n` in the order the components
//! are listed; inside a component the numbering is the standard one used by the
//! classification tables of this crate (see `docs/conventions.md`):
//!
//! * `B_r`: `α_r` is short; `C_r`: `α_r` is long;
//! * `F_4`: `α_1, α_2` are short and `α_3, α_4` are long;
//! * `G_2`: `α_1` is short, `⟨α_1^∨, α_2⟩ = −3`;
//! * `D_r`: `α_{r−2}` is the branch node; `E_r`: `α_2` hangs off `α_4`.
//!
//! The Cartan matrix stores `a_ij = ⟨α_i^∨, α_j⟩`. Roots are integer vectors in
//! the simple-root basis; characters of the maximal torus are integer vectors
//! in the fundamental-weight basis, optionally followed by central coordinates.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Cartan type letter of a simple component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SimpleType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl SimpleType {
    pub fn letter(self) -> char {
        match self {
            SimpleType::A => 'A',
            SimpleType::B => 'B',
            SimpleType::C => 'C',
            SimpleType::D => 'D',
            SimpleType::E => 'E',
            SimpleType::F => 'F',
            SimpleType::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => SimpleType::A,
            'B' => SimpleType::B,
            'C' => SimpleType::C,
            'D' => SimpleType::D,
            'E' => SimpleType::E,
            'F' => SimpleType::F,
            'G' => SimpleType::G,
            _ => return None,
        })
    }
}

/// One simple component of a Dynkin diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Component {
    pub kind: SimpleType,
    pub rank: usize,
}

impl Component {
    pub fn new(kind: SimpleType, rank: usize) -> Result<Self> {
        let bad = |reason: &str| {
            Err(Error::InvalidDiagram {
                letter: kind.letter(),
                rank,
                reason: reason.to_string(),
            })
        };
        match kind {
            _ if rank == 0 => bad("rank must be positive"),
            SimpleType::B | SimpleType::C if rank < 2 => bad("B and C need rank at least 2"),
            SimpleType::D if rank < 3 => bad("D needs rank at least 3"),
            SimpleType::E if !(6..=8).contains(&rank) => bad("E exists only in ranks 6, 7, 8"),
            SimpleType::F if rank != 4 => bad("F exists only in rank 4"),
            SimpleType::G if rank != 2 => bad("G exists only in rank 2"),
            _ => Ok(Component { kind, rank }),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.letter(), self.rank)
    }
}

/// Ordered product of simple components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DynkinDiagram {
    components: Vec<Component>,
}

impl DynkinDiagram {
    pub fn new(components: Vec<Component>) -> Self {
        DynkinDiagram { components }
    }

    /// Parses strings such as `A3`, `A1xA1`, `B2 x G2`. An empty string or `0`
    /// gives the empty diagram.
    pub fn parse(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() || cleaned == "0" {
            return Ok(DynkinDiagram::new(Vec::new()));
        }
        let mut components = Vec::new();
        for part in cleaned.split(['x', 'X', '*', '×']) {
            let mut chars = part.chars();
            let letter = chars
                .next()
                .and_then(SimpleType::from_letter)
                .ok_or_else(|| Error::DiagramSyntax(s.to_string()))?;
            let rank: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::DiagramSyntax(s.to_string()))?;
            components.push(Component::new(letter, rank)?);
        }
        Ok(DynkinDiagram::new(components))
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }

    /// Global index of the first node of each component.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.components
            .iter()
            .map(|c| {
                let o = acc;
                acc += c.rank;
                o
            })
            .collect()
    }
}

impl fmt::Display for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Cartan matrix `⟨α_i^∨, α_j⟩` of a simple type in the pinned numbering.
pub fn simple_cartan(kind: SimpleType, r: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; r]; r];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match kind {
        SimpleType::A | SimpleType::B | SimpleType::C => {
            for i in 1..r {
                link(i - 1, i);
            }
        }
        SimpleType::D => {
            for i in 1..r - 1 {
                link(i - 1, i);
            }
            link(r - 3, r - 1);
        }
        SimpleType::E => {
            link(0, 2);
            link(1, 3);
            for i in 3..r {
                link(i - 1, i);
            }
        }
        SimpleType::F => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
        }
        SimpleType::G => link(0, 1),
    }
    match kind {
        // α_r short: ⟨α_r^∨, α_{r−1}⟩ = −2.
        SimpleType::B => a[r - 1][r - 2] = -2,
        // α_r long: ⟨α_{r−1}^∨, α_r⟩ = −2.
        SimpleType::C => a[r - 2][r - 1] = -2,
        // α_2 short, α_3 long.
        SimpleType::F => a[1][2] = -2,
        // α_1 short.
        SimpleType::G => a[0][1] = -3,
        _ => {}
    }
    a
}

/// Squared lengths of the simple roots, short roots normalized to 2.
pub fn simple_lengths(kind: SimpleType, r: usize) -> Vec<i64> {
    match kind {
        SimpleType::B => (0..r).map(|i| if i + 1 == r { 2 } else { 4 }).collect(),
        SimpleType::C => (0..r).map(|i| if i + 1 == r { 4 } else { 2 }).collect(),
        SimpleType::F => vec![2, 2, 4, 4],
        SimpleType::G => vec![2, 6],
        _ => vec![2; r],
    }
}

/// Number of positive roots of a simple type.
pub fn positive_root_count(kind: SimpleType, r: usize) -> usize {
    match kind {
        SimpleType::A => r * (r + 1) / 2,
        SimpleType::B | SimpleType::C => r * r,
        SimpleType::D => r * (r - 1),
        SimpleType::E => match r {
            6 => 36,
            7 => 63,
            _ => 120,
        },
        SimpleType::F => 24,
        SimpleType::G => 6,
    }
}

/// Attributes of a nonnegative combination of simple roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootAttrs {
    pub support: BTreeSet<usize>,
    pub height: i64,
}

/// A root system with its Cartan data, positive roots and invariant form.
#[derive(Debug, Clone)]
pub struct RootSystem {
    diagram: DynkinDiagram,
    cartan: Vec<Vec<i64>>,
    inner: Vec<Vec<i64>>,
    positive: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    component_of: Vec<usize>,
}

impl RootSystem {
    /// Builds the root system of `diagram` by closing the simple roots under
    /// simple reflections.
    pub fn new(diagram: &DynkinDiagram) -> Self {
        let n = diagram.rank();
        let mut cartan = vec![vec![0i64; n]; n];
        let mut lengths = vec![0i64; n];
        let mut component_of = vec![0usize; n];
        for (k, (comp, off)) in diagram
            .components()
            .iter()
            .zip(diagram.offsets())
            .enumerate()
        {
            let a = simple_cartan(comp.kind, comp.rank);
            let l = simple_lengths(comp.kind, comp.rank);
            for i in 0..comp.rank {
                lengths[off + i] = l[i];
                component_of[off + i] = k;
                for j in 0..comp.rank {
                    cartan[off + i][off + j] = a[i][j];
                }
            }
        }
        // (α_i, α_j) = ⟨α_i^∨, α_j⟩ · |α_i|² / 2.
        let inner: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| cartan[i][j] * lengths[i] / 2).collect())
            .collect();

        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(beta) = queue.pop_front() {
            for i in 0..n {
                let c: i64 = (0..n).map(|j| cartan[i][j] * beta[j]).sum();
                if c == 0 {
                    continue;
                }
                let mut img = beta.clone();
                img[i] -= c;
                if !seen.contains(&img) {
                    seen.insert(img.clone());
                    queue.push_back(img);
                }
            }
        }
        let mut positive: Vec<Vec<i64>> = seen
            .into_iter()
            .filter(|r| r.iter().all(|&x| x >= 0))
            .collect();
        positive.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let index = positive
            .iter()
            .enumerate()
            .map(|(k, r)| (r.clone(), k))
            .collect();
        RootSystem {
            diagram: diagram.clone(),
            cartan,
            inner,
            positive,
            index,
            component_of,
        }
    }

    pub fn diagram(&self) -> &DynkinDiagram {
        &self.diagram
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    /// `⟨α_i^∨, α_j⟩`.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Weyl-invariant form on the root lattice, short roots of squared length 2.
    pub fn inner_product_matrix(&self) -> &[Vec<i64>] {
        &self.inner
    }

    /// Positive roots ordered by height, then reverse-lexicographically, so the
    /// simple roots come first in node order.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn is_positive_root(&self, v: &[i64]) -> bool {
        self.index.contains_key(v)
    }

    pub fn component_of(&self, node: usize) -> usize {
        self.component_of[node]
    }

    /// Unit vector of the simple root `α_i`.
    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        let mut e = vec![0i64; self.rank()];
        e[i] = 1;
        e
    }

    /// `⟨α_i^∨, γ⟩` for `γ` in the simple-root basis.
    pub fn pairing_root(&self, i: usize, gamma: &[i64]) -> i64 {
        self.cartan[i].iter().zip(gamma).map(|(a, g)| a * g).sum()
    }

    /// `⟨α_i^∨, μ⟩` for `μ` in the fundamental-weight basis (central
    /// coordinates, if any, pair to zero).
    pub fn pairing_weight(&self, i: usize, mu: &WeightVec) -> i64 {
        mu.ss[i]
    }

    /// Fundamental-weight coordinates of an element of the root lattice.
    pub fn root_to_weight(&self, gamma: &[i64]) -> Vec<i64> {
        (0..self.rank())
            .map(|i| self.pairing_root(i, gamma))
            .collect()
    }

    /// Simple-root coordinates of a weight of the semisimple part; rational in
    /// general. Central coordinates are ignored.
    pub fn weight_to_root(&self, w: &[i64]) -> Vec<BigRational> {
        let n = self.rank();
        // Solve A · x = w, i.e. Σ_j a_ij x_j = w_i.
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..n)
                    .map(|j| BigRational::from_integer(self.cartan[i][j].into()))
                    .collect();
                row.push(BigRational::from_integer(w[i].into()));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !m[r][col].is_zero())
                .expect("Cartan matrix is invertible");
            m.swap(col, piv);
            let inv = BigRational::one() / m[col][col].clone();
            for x in m[col].iter_mut() {
                *x = x.clone() * inv.clone();
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in 0..=n {
                        let d = m[col][c].clone() * f.clone();
                        m[r][c] = m[r][c].clone() - d;
                    }
                }
            }
        }
        m.into_iter().map(|row| row[n].clone()).collect()
    }

    /// Invariant form of two elements of the root lattice.
    pub fn inner_product(&self, x: &[i64], y: &[i64]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += x[i] * self.inner[i][j] * y[j];
            }
        }
        s
    }

    /// Support and height of a nonnegative combination of simple roots.
    pub fn root_attrs(&self, gamma: &[i64]) -> Result<RootAttrs> {
        if gamma.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: gamma.len(),
            });
        }
        if gamma.iter().any(|&x| x < 0) {
            return Err(Error::MixedSigns(gamma.to_vec()));
        }
        Ok(RootAttrs {
            support: support(gamma),
            height: gamma.iter().sum(),
        })
    }

    /// Orthogonality under the invariant form.
    pub fn orthogonal(&self, x: &[i64], y: &[i64]) -> bool {
        self.inner_product(x, y) == 0
    }

    /// Whether nodes `i != j` are joined by an edge.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.cartan[i][j] != 0
    }

    /// Neighbours of `i` inside `within`.
    pub fn neighbours_in(&self, i: usize, within: &BTreeSet<usize>) -> Vec<usize> {
        within
            .iter()
            .copied()
            .filter(|&j| self.adjacent(i, j))
            .collect()
    }

    /// Whether the induced subdiagram on `nodes` is connected (empty is not).
    pub fn is_connected(&self, nodes: &BTreeSet<usize>) -> bool {
        let Some(&start) = nodes.iter().next() else {
            return false;
        };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in self.neighbours_in(v, nodes) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == nodes.len()
    }

    /// All ways of numbering the connected node set `nodes` as a standard
    /// simple diagram. Each result lists the nodes in standard order; symmetric
    /// diagrams yield several numberings. `D_3` is reported as `A_3`, and
    /// `C_2` as `B_2`.
    pub fn standard_numberings(&self, nodes: &BTreeSet<usize>) -> Vec<(SimpleType, Vec<usize>)> {
        let r = nodes.len();
        if r == 0 || !self.is_connected(nodes) {
            return Vec::new();
        }
        let list: Vec<usize> = nodes.iter().copied().collect();
        let mut out = Vec::new();
        let candidates: Vec<SimpleType> = [
            SimpleType::A,
            SimpleType::B,
            SimpleType::C,
            SimpleType::D,
            SimpleType::E,
            SimpleType::F,
            SimpleType::G,
        ]
        .into_iter()
        .filter(|&t| match t {
            SimpleType::A => true,
            SimpleType::B => r >= 2,
            SimpleType::C => r >= 3,
            SimpleType::D => r >= 4,
            SimpleType::E => (6..=8).contains(&r),
            SimpleType::F => r == 4,
            SimpleType::G => r == 2,
        })
        .collect();
        for kind in candidates {
            let target = simple_cartan(kind, r);
            let mut order = Vec::with_capacity(r);
            let mut used = vec![false; r];
            self.match_numbering(&list, &target, &mut order, &mut used, &mut |o| {
                out.push((kind, o.to_vec()))
            });
        }
        out
    }

    fn match_numbering(
        &self,
        list: &[usize],
        target: &[Vec<i64>],
        order: &mut Vec<usize>,
        used: &mut [bool],
        emit: &mut dyn FnMut(&[usize]),
    ) {
        let k = order.len();
        if k == list.len() {
            emit(order);
            return;
        }
        for p in 0..list.len() {
            if used[p] {
                continue;
            }
            let v = list[p];
            let ok = order.iter().enumerate().all(|(q, &u)| {
                self.cartan[v][u] == target[k][q] && self.cartan[u][v] == target[q][k]
            });
            if ok {
                used[p] = true;
                order.push(v);
                self.match_numbering(list, target, order, used, emit);
                order.pop();
                used[p] = false;
            }
        }
    }

    /// Nodes of `nodes` with exactly one neighbour inside `nodes`.
    pub fn is_terminal(&self, node: usize, nodes: &BTreeSet<usize>) -> bool {
        nodes.contains(&node) && self.neighbours_in(node, nodes).len() == 1
    }
}

/// Support of an integer vector: indices of nonzero coefficients.
pub fn support(gamma: &[i64]) -> BTreeSet<usize> {
    gamma
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, _)| i)
        .collect()
}

/// Convenience constructor.
pub fn build_root_system(diagram: &DynkinDiagram) -> RootSystem {
    RootSystem::new(diagram)
}

/// Character of the maximal torus: fundamental-weight coordinates of the
/// semisimple part followed by coordinates in a basis of the central torus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVec {
    pub ss: Vec<i64>,
    pub central: Vec<i64>,
}

impl WeightVec {
    pub fn new(ss: Vec<i64>, central: Vec<i64>) -> Self {
        WeightVec { ss, central }
    }

    /// Flattened coordinates `ss ++ central`.
    pub fn flat(&self) -> Vec<i64> {
        let mut v = self.ss.clone();
        v.extend_from_slice(&self.central);
        v
    }

    pub fn from_flat(v: &[i64], n: usize) -> Self {
        WeightVec {
            ss: v[..n].to_vec(),
            central: v[n..].to_vec(),
        }
    }

    pub fn is_dominant(&self) -> bool {
        self.ss.iter().all(|&x| x >= 0)
    }
}

/// Renders a root-lattice vector as `a1+2a2`.
pub fn format_root(gamma: &[i64]) -> String {
    let mut s = String::new();
    for (i, &c) in gamma.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if c < 0 {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        if c.abs() != 1 {
            s.push_str(&c.abs().to_string());
        }
        s.push_str(&format!("a{}", i + 1));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}
