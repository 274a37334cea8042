mod common;

pub const SEED: u64 = 20240611;

#[test]
fn every_mutation_is_detected() {
    let d = common::check_mutations(SEED).unwrap();
    assert_eq!(d.len(), 15 * 19);
    for x in &d {
        assert!(!x.axiom.is_empty() && !x.witness.is_empty(), "{x:?}");
    }
}
