use halo_cli::cache::{cache_path, load, store, up_table};
use halo_core::manin::ManinData;

#[test]
fn round_trip_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let md = ManinData::new(3, 11, 1).unwrap();
    let t = up_table(&md, Some(dir.path())).unwrap();
    assert_eq!(load(dir.path(), 3, 11).unwrap(), t);
    assert!(load(dir.path(), 3, 23).is_none());

    let path = cache_path(dir.path(), 3, 11);
    let mut v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    v["sha256"] = "00".into();
    std::fs::write(&path, serde_json::to_vec(&v).unwrap()).unwrap();
    assert!(load(dir.path(), 3, 11).is_none());

    store(dir.path(), 3, 11, &t).unwrap();
    assert_eq!(up_table(&md, Some(dir.path())).unwrap(), t);
}
