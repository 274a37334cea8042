//! Extended weight semigroups: pairs `(λ, χ)` of a dominant weight and a
//! character of `H`, from which the lattice, the parabolic roots, the colors
//! and part of `Σ` are read off; and the reverse construction of `𝔛(H)`
//! from a homogeneous spherical datum.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::ars::{self, ExtendedArsSet};
use crate::error::{Error, Result};
use crate::fans::IVec;
use crate::lattice::{self, big_vec, FgAbelianGroup, IntMatrix, Sublattice};
use crate::luna::{self, ColorType, FullColorSet, Hsd, SphericalRoot};
use crate::rootsys::{support, RootSystem};
use std::sync::Arc;

/// Free generators of `Λ̂⁺`: one pair per color and a central block
/// `((0, e_j), −ν_j)` for each central coordinate, where `ν_j` is the
/// restriction to `H` of the `j`-th central character.
#[derive(Debug, Clone)]
pub struct EwsGenerators {
    rs: Arc<RootSystem>,
    pub central_rank: usize,
    pub group: FgAbelianGroup,
    /// `(λ, χ)` with `λ` of length `rank + central_rank` and zero central
    /// part, `χ` a representative in the generators of `group`.
    pub generators: Vec<(IVec, Vec<BigInt>)>,
    /// `ν_j` as representatives.
    pub central: Vec<Vec<BigInt>>,
}

impl EwsGenerators {
    pub fn new(
        rs: Arc<RootSystem>,
        central_rank: usize,
        group: FgAbelianGroup,
        generators: Vec<(IVec, Vec<BigInt>)>,
        central: Vec<Vec<BigInt>>,
    ) -> Result<Self> {
        let n = rs.rank() + central_rank;
        let k = group.generators();
        if central.len() != central_rank {
            return Err(Error::DimensionMismatch {
                expected: central_rank,
                found: central.len(),
            });
        }
        let mut checked = Vec::with_capacity(generators.len());
        for (l, x) in generators {
            if l.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: l.len(),
                });
            }
            if x.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: x.len(),
                });
            }
            if l.iter().any(|&v| v < 0) || l[rs.rank()..].iter().any(|&v| v != 0) {
                return Err(Error::Precondition(
                    "generator weights must be dominant and semisimple".into(),
                ));
            }
            checked.push((l, x));
        }
        if let Some(x) = central.iter().find(|x| x.len() != k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: x.len(),
            });
        }
        Ok(EwsGenerators {
            rs,
            central_rank,
            group,
            generators: checked,
            central,
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn root_system_arc(&self) -> Arc<RootSystem> {
        self.rs.clone()
    }

    fn weight_rows(&self) -> Vec<IVec> {
        let n = self.rs.rank();
        let mut rows: Vec<IVec> = self.generators.iter().map(|(l, _)| l.clone()).collect();
        for j in 0..self.central_rank {
            let mut e = vec![0; n + self.central_rank];
            e[n + j] = 1;
            rows.push(e);
        }
        rows
    }
}

/// Color recovered from a generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EwsColor {
    /// `κ(D)` on the lattice basis.
    pub kappa: IVec,
    pub lambda: IVec,
    pub chi: Vec<BigInt>,
}

/// Invariants determined by the extended weight semigroup.
#[derive(Debug, Clone)]
pub struct EwsInvariants {
    rs: Arc<RootSystem>,
    pub central_rank: usize,
    /// Hermite basis of `Λ`.
    pub lattice: Vec<IVec>,
    pub pp: BTreeSet<usize>,
    pub colors: Vec<EwsColor>,
    /// `Σ ∩ (Π ∪ 2Π)`.
    pub sigma_detected: Vec<SphericalRoot>,
}

impl EwsInvariants {
    /// Colors moved by a simple root of `Σ`.
    pub fn a_colors(&self) -> Vec<usize> {
        let simple: BTreeSet<usize> = self
            .sigma_detected
            .iter()
            .filter_map(|s| s.simple_index())
            .collect();
        (0..self.colors.len())
            .filter(|&d| simple.iter().any(|&a| self.colors[d].lambda[a] == 1))
            .collect()
    }

    /// The datum `(Λ, Π^p, Σ, D^a)`, valid when `Σ ⊂ Π ∪ 2Π`, which holds
    /// for strongly solvable subgroups.
    pub fn to_hsd(&self) -> Result<Hsd> {
        let colors = self
            .a_colors()
            .into_iter()
            .map(|d| self.colors[d].kappa.clone())
            .collect();
        Hsd::new(
            self.rs.clone(),
            self.central_rank,
            self.lattice.clone(),
            self.pp.clone(),
            self.sigma_detected.clone(),
            colors,
        )
    }

    /// `κ` of all colors, sorted.
    pub fn kappa_multiset(&self) -> Vec<IVec> {
        let mut v: Vec<IVec> = self.colors.iter().map(|c| c.kappa.clone()).collect();
        v.sort();
        v
    }
}

/// Reads off `Λ`, `Π^p`, the colors with `κ`, and `Σ ∩ (Π ∪ 2Π)`.
pub fn invariants_from_ews(g: &EwsGenerators) -> Result<EwsInvariants> {
    let rs = g.rs.clone();
    let n = rs.rank();
    let dim = n + g.central_rank;
    let rows = g.weight_rows();
    let m = IntMatrix::from_i64(dim, &rows)?;
    let k = g.group.generators();
    let mut chi_rows: Vec<Vec<BigInt>> = g.generators.iter().map(|(_, x)| x.clone()).collect();
    chi_rows.extend(g.central.iter().map(|x| x.iter().map(|v| -v).collect()));
    let chi = IntMatrix::from_rows(k, chi_rows)?;
    // Coefficient vectors whose character part vanishes in 𝔛(H).
    let coeffs = g.group.relations().preimage(&chi)?;
    let dependent = coeffs.intersect(&lattice::left_kernel(&m))?;
    if dependent.rank() > 0 {
        return Err(Error::Inconsistent(format!(
            "generators are not free: the pairs satisfy {:?}",
            dependent.basis_i64()[0]
        )));
    }
    let b = coeffs.basis_i64();
    let images: Vec<IVec> = b
        .iter()
        .map(|x| {
            (0..dim)
                .map(|j| x.iter().zip(&rows).map(|(c, r)| c * r[j]).sum())
                .collect()
        })
        .collect();
    let basis = Sublattice::from_i64(dim, &images)?.basis_i64();
    let mut kappa = vec![Vec::with_capacity(basis.len()); g.generators.len()];
    for mu in &basis {
        let y = luna::rational_coordinates(&images, mu)
            .ok_or_else(|| Error::Inconsistent("lattice vector outside the span".into()))?;
        for (d, kd) in kappa.iter_mut().enumerate() {
            let v: BigRational = y
                .iter()
                .zip(&b)
                .map(|(c, x)| c * BigRational::from_integer(BigInt::from(x[d])))
                .sum();
            if !v.is_integer() {
                return Err(Error::Inconsistent("non-integral color coefficient".into()));
            }
            kd.push(v.to_integer().to_i64().expect("small coefficient"));
        }
    }
    let colors: Vec<EwsColor> = g
        .generators
        .iter()
        .zip(kappa)
        .map(|((l, x), kappa)| EwsColor {
            kappa,
            lambda: l.clone(),
            chi: x.clone(),
        })
        .collect();
    let carriers = |a: usize| g.generators.iter().filter(|(l, _)| l[a] != 0).count();
    let pp = (0..n).filter(|&a| carriers(a) == 0).collect();
    let mut sigma = Vec::new();
    for a in 0..n {
        let simple = rs.simple_root(a);
        if carriers(a) == 2 {
            sigma.push(SphericalRoot::from_root(&simple));
        } else if g
            .generators
            .iter()
            .any(|(l, _)| l[a] == 2 && support(l).len() == 1)
        {
            sigma.push(SphericalRoot::from_root(&simple).twice());
        }
    }
    Ok(EwsInvariants {
        rs,
        central_rank: g.central_rank,
        lattice: basis,
        pp,
        colors,
        sigma_detected: sigma,
    })
}

/// Generators for the subgroup of an extended ARS-set: `(ϖ_α, −τ(ϖ_α))`
/// for every simple root, `(λ_φ, −τ(λ_φ) + φ)` with `λ_φ = Σ ϖ_α` over
/// `π(Ψ_φ)` for every class, and the central block.
pub fn ews_generators_from_ars(e: &ExtendedArsSet) -> Result<EwsGenerators> {
    let rs = e.ars.root_system_arc();
    let n = rs.rank();
    let c = e.central_rank;
    let group = e.character_group();
    let unit = |i: usize| {
        let mut v = vec![0i64; n + c];
        v[i] = 1;
        v
    };
    let neg = |v: &[i64]| -> IVec { v.iter().map(|x| -x).collect() };
    let mut gens = Vec::new();
    for a in 0..n {
        gens.push((unit(a), big_vec(&neg(&unit(a)))));
    }
    let ex = ars::expand_ars(&e.ars)?;
    for class in &ex.classes {
        let mut lambda = vec![0i64; n + c];
        for &i in class {
            lambda[ex.pi[i]] = 1;
        }
        let rep = e.root_character(&ex.psi[class[0]]);
        let chi: IVec = rep.iter().zip(&lambda).map(|(r, l)| r - l).collect();
        gens.push((lambda, big_vec(&chi)));
    }
    let central = (0..c).map(|j| big_vec(&unit(n + j))).collect();
    EwsGenerators::new(rs, c, group, gens, central)
}

/// `λ_D` for each color of a full color set: `2ϖ_α` for the color of
/// `2α ∈ Σ`, otherwise `Σ ϖ_α` over the simple roots moving `D`.
pub fn lambda_d_of_colors(full: &FullColorSet, rank: usize, central_rank: usize) -> Vec<IVec> {
    full.colors
        .iter()
        .map(|col| {
            let mut l = vec![0i64; rank + central_rank];
            let w = if col.kind == ColorType::APrime { 2 } else { 1 };
            for &a in &col.moved_by {
                l[a] = w;
            }
            l
        })
        .collect()
}

/// `𝔛(H)` of a datum presented as `(Z^D ⊕ 𝔛(C)) / Ker ψ`, with `χ_D` and
/// `λ_D` for every color of the full color set.
#[derive(Debug, Clone)]
pub struct HsdCharacters {
    pub full: FullColorSet,
    pub group: FgAbelianGroup,
    pub chi: Vec<Vec<BigInt>>,
    pub lambda: Vec<IVec>,
    /// `ν_j`: image of the `j`-th central character.
    pub central: Vec<Vec<BigInt>>,
}

pub fn character_group_from_hsd(d: &Hsd) -> Result<HsdCharacters> {
    let pres = ars::color_presentation(d)?;
    let nd = pres.full.colors.len();
    let c = d.central_rank();
    let dim = nd + c;
    let unit = |i: usize| {
        let mut v = vec![0i64; dim];
        v[i] = 1;
        v
    };
    let chi = (0..nd).map(|i| big_vec(&unit(i))).collect();
    let central = (0..c).map(|j| big_vec(&unit(nd + j))).collect();
    let lambda = lambda_d_of_colors(&pres.full, d.root_system().rank(), c);
    Ok(HsdCharacters {
        full: pres.full,
        group: pres.group,
        chi,
        lambda,
        central,
    })
}

/// Generators of `Λ̂⁺` built from a datum.
pub fn ews_generators_from_hsd(d: &Hsd) -> Result<EwsGenerators> {
    let h = character_group_from_hsd(d)?;
    let gens = h.lambda.into_iter().zip(h.chi).collect();
    EwsGenerators::new(
        d.root_system_arc(),
        d.central_rank(),
        h.group,
        gens,
        h.central,
    )
}

/// The `SL₂ × SL₂ × SL₂` example with `𝔛(H) = Z/2 ⊕ Z/2` and generators
/// `(ϖ₁+ϖ₂, a)`, `(ϖ₂+ϖ₃, b)`, `(ϖ₃+ϖ₁, a+b)`.
pub fn sl2_cubed_example() -> Result<EwsGenerators> {
    let rs = luna::shared_root_system(&crate::rootsys::DynkinDiagram::parse("A1xA1xA1")?);
    let group = FgAbelianGroup::quotient_group(2, vec![big_vec(&[2, 0]), big_vec(&[0, 2])])?;
    let gens = vec![
        (vec![1, 1, 0], big_vec(&[1, 0])),
        (vec![0, 1, 1], big_vec(&[0, 1])),
        (vec![1, 0, 1], big_vec(&[1, 1])),
    ];
    EwsGenerators::new(rs, 0, group, gens, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ars::ArsSet;
    use crate::rootsys::DynkinDiagram;

    #[test]
    fn sl2_cubed() {
        let g = sl2_cubed_example().unwrap();
        let inv = invariants_from_ews(&g).unwrap();
        assert!(inv.pp.is_empty());
        let simple: BTreeSet<usize> = inv
            .sigma_detected
            .iter()
            .filter_map(|s| s.simple_index())
            .collect();
        assert_eq!(simple, (0..3).collect());
        assert_eq!(inv.lattice.len(), 3);
    }

    #[test]
    fn borel_case() {
        let rs = luna::shared_root_system(&DynkinDiagram::parse("A2").unwrap());
        let group = FgAbelianGroup::quotient_group(2, Vec::new()).unwrap();
        let gens = vec![
            (vec![1, 0], big_vec(&[-1, 0])),
            (vec![0, 1], big_vec(&[0, -1])),
        ];
        let g = EwsGenerators::new(rs, 0, group, gens, Vec::new()).unwrap();
        let inv = invariants_from_ews(&g).unwrap();
        assert!(inv.sigma_detected.is_empty());
        assert_eq!(inv.colors.len(), 2);
        assert!(inv.lattice.is_empty());
    }

    #[test]
    fn dependent_generators_rejected() {
        let rs = luna::shared_root_system(&DynkinDiagram::parse("A1").unwrap());
        let group = FgAbelianGroup::quotient_group(1, vec![big_vec(&[2])]).unwrap();
        let gens = vec![(vec![1], big_vec(&[1])), (vec![1], big_vec(&[-1]))];
        let g = EwsGenerators::new(rs, 0, group, gens, Vec::new()).unwrap();
        assert!(invariants_from_ews(&g).is_err());
    }

    #[test]
    fn matches_hsd_of_ars() {
        let rs = luna::shared_root_system(&DynkinDiagram::parse("A2").unwrap());
        let a = ArsSet::new(rs, vec![vec![1, 1]], vec![0], vec![0]).unwrap();
        let e = ExtendedArsSet::normalized(a, 0).unwrap();
        let h = ars::hsd_from_ars(&e).unwrap();
        let inv = invariants_from_ews(&ews_generators_from_ars(&e).unwrap()).unwrap();
        assert_eq!(
            inv.to_hsd().unwrap().canonical_form().unwrap(),
            h.canonical_form().unwrap()
        );
        let back = invariants_from_ews(&ews_generators_from_hsd(&h).unwrap()).unwrap();
        assert_eq!(
            back.to_hsd().unwrap().canonical_form().unwrap(),
            h.canonical_form().unwrap()
        );
    }
}
