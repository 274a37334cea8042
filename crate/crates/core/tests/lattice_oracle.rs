mod common;

#[test]
fn hermite_smith_membership_match_oracles() {
    assert_eq!(common::check_lattice_oracle(7, 1000).unwrap(), 1000);
}
