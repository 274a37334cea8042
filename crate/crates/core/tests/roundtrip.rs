mod common;

#[test]
fn every_table_pair_roundtrips() {
    let n = common::check_roundtrips().unwrap();
    assert_eq!(n, common::cases().len());
    assert!(n >= 30);
}
