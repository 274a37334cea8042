use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use spherica::admissible;
use spherica::enumerate::enumerate_admissible;
use spherica::fans::{self, Cone};
use spherica::lattice::{self, IntMatrix, Sublattice};
use spherica::luna::{self, SphericalSystem};
use spherica::rootsys::{DynkinDiagram, RootSystem};

fn matrix(max_rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-9i64..=9, cols), 1..=max_rows)
}

fn rs(t: &str) -> Arc<RootSystem> {
    luna::shared_root_system(&DynkinDiagram::parse(t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hnf_is_idempotent_and_spans_the_rows(rows in matrix(5, 4)) {
        let a = IntMatrix::from_i64(4, &rows).unwrap();
        let h = lattice::hnf(&a);
        prop_assert_eq!(lattice::hnf(&h), h.clone());
        let span = Sublattice::from_i64(4, &rows).unwrap();
        let hs = Sublattice::from_generators(4, h.row_vecs().to_vec()).unwrap();
        prop_assert!(span.contains_lattice(&hs) && hs.contains_lattice(&span));
    }

    #[test]
    fn snf_factors_the_matrix(rows in matrix(4, 4)) {
        let a = IntMatrix::from_i64(4, &rows).unwrap();
        let (d, u, v) = lattice::snf(&a);
        prop_assert!(u.is_unimodular() && v.is_unimodular());
        prop_assert_eq!(u.mul(&a).unwrap().mul(&v).unwrap(), d.clone());
        let diag: Vec<_> = (0..d.rows().min(d.cols())).map(|i| d.get(i, i).clone()).collect();
        for w in diag.windows(2) {
            prop_assert!(w[1] == 0.into() || (w[1].clone() % w[0].clone()) == 0.into());
        }
    }

    #[test]
    fn intersection_lies_in_both_and_sum_contains_both(x in matrix(3, 3), y in matrix(3, 3)) {
        let a = Sublattice::from_i64(3, &x).unwrap();
        let b = Sublattice::from_i64(3, &y).unwrap();
        let i = a.intersect(&b).unwrap();
        let s = a.sum(&b).unwrap();
        prop_assert!(a.contains_lattice(&i) && b.contains_lattice(&i));
        prop_assert!(s.contains_lattice(&a) && s.contains_lattice(&b));
    }

    #[test]
    fn left_kernel_annihilates(rows in matrix(5, 3)) {
        let a = IntMatrix::from_i64(3, &rows).unwrap();
        let k = lattice::left_kernel(&a);
        prop_assert_eq!(k.rank() + lattice::rank(&a), rows.len());
        for x in k.basis_i64() {
            for j in 0..3 {
                prop_assert_eq!(x.iter().zip(&rows).map(|(c, r)| c * r[j]).sum::<i64>(), 0);
            }
        }
    }

    #[test]
    fn dual_of_dual_recovers_a_simplicial_cone(rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 3)) {
        let a = IntMatrix::from_i64(3, &rows).unwrap();
        prop_assume!(a.determinant() != 0.into());
        let c = Cone::new(3, rows).unwrap();
        let dd = fans::dual(&fans::dual(&c).unwrap()).unwrap();
        let r1: BTreeSet<_> = c.rays().into_iter().collect();
        let r2: BTreeSet<_> = dd.rays().into_iter().collect();
        prop_assert_eq!(r1, r2);
    }

    #[test]
    fn canonical_key_ignores_color_order(
        ty in prop::sample::select(vec!["A2", "B2", "G2", "A3"]),
        pick in any::<prop::sample::Index>(),
        shuffle in any::<u64>(),
    ) {
        let rs = rs(ty);
        let maps = enumerate_admissible(&rs, true, 4).unwrap();
        let m = &maps[pick.index(maps.len())];
        let (s, _) = admissible::spherical_system_of_admissible(m).unwrap();
        let mut colors = s.colors().to_vec();
        let k = colors.len();
        for i in (1..k).rev() {
            colors.swap(i, (shuffle as usize).wrapping_mul(i + 7) % (i + 1));
        }
        let t = SphericalSystem::new(s.root_system_arc(), s.pp().clone(), s.sigma().to_vec(), colors).unwrap();
        prop_assert_eq!(t.canonical_key(), s.canonical_key());
    }

    #[test]
    fn admissible_maps_roundtrip(
        ty in prop::sample::select(vec!["A1xA1", "A2", "B2", "G2", "A3", "B3", "C3", "A2xA1"]),
        cuspidal in any::<bool>(),
        pick in any::<prop::sample::Index>(),
    ) {
        let rs = rs(ty);
        let maps = enumerate_admissible(&rs, cuspidal, 4).unwrap();
        let m = &maps[pick.index(maps.len())];
        prop_assert!(admissible::validate_admissible(m).is_valid());
        let (s, dprime) = admissible::spherical_system_of_admissible(m).unwrap();
        prop_assert!(luna::validate_system(&s).is_valid());
        let back = admissible::admissible_from_system(&s, &dprime).unwrap();
        prop_assert_eq!(&back, m);
    }
}
