mod common;

use common::{buoyancy_config, random_state, torus};
use obreg::io::{
    read_constants, read_report, read_snapshot, write_constants, write_report, write_snapshot, SnapshotError,
    SnapshotFrame, MAGIC,
};
use obreg::monitor::{calibrate, FamilyKind, FieldFamily, MonitorConfig};
use obreg::scenario::simulate;
use obreg::Error;
use proptest::prelude::*;

fn bits(s: &obreg::dynamics::SimState) -> Vec<u64> {
    let mut out: Vec<u64> =
        s.u.components()
            .iter()
            .chain([&s.theta, &s.phi])
            .flat_map(|c| c.physical_values().iter().map(|v| v.to_bits()).collect::<Vec<_>>())
            .collect();
    out.push(s.t.to_bits());
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn snapshot_round_trip_is_bit_exact(seed in any::<u64>(), dim in 2usize..=3, t in 0.0f64..100.0) {
        let g = torus(dim, if dim == 2 { 16 } else { 8 });
        let mut s = random_state(&g, seed, 1.0, 1.0);
        s.t = t;
        let frame = SnapshotFrame::from_state(&s);
        let back = SnapshotFrame::decode(&frame.encode()).unwrap().to_state().unwrap();
        prop_assert_eq!(bits(&s), bits(&back));
        prop_assert_eq!(back.grid(), s.grid());
    }
}

#[test]
fn snapshot_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let s = random_state(&torus(2, 32), 3, 1.0, 0.5);
    let path = dir.path().join("frame.obrg");
    write_snapshot(&s, &path).unwrap();
    let back = read_snapshot(&path).unwrap();
    assert_eq!(bits(&s), bits(&back));
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(&bytes[..4], &MAGIC);
}

#[test]
fn corrupt_snapshots_are_rejected() {
    let s = random_state(&torus(2, 8), 1, 1.0, 1.0);
    let bytes = SnapshotFrame::from_state(&s).encode();

    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(matches!(
        SnapshotFrame::decode(&bad),
        Err(SnapshotError::BadMagic { .. })
    ));

    let mut bad = bytes.clone();
    bad[4] = 99;
    assert!(matches!(
        SnapshotFrame::decode(&bad),
        Err(SnapshotError::VersionMismatch { found: 99, .. })
    ));

    assert!(matches!(
        SnapshotFrame::decode(&bytes[..bytes.len() - 8]),
        Err(SnapshotError::TruncatedPayload { .. })
    ));
    assert!(matches!(
        SnapshotFrame::decode(&bytes[..6]),
        Err(SnapshotError::TruncatedHeader { .. })
    ));

    let mut long = bytes.clone();
    long.extend_from_slice(&[0; 8]);
    assert!(matches!(
        SnapshotFrame::decode(&long),
        Err(SnapshotError::TrailingBytes { .. })
    ));
}

#[test]
fn report_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let out = simulate(&buoyancy_config(dir.path())).unwrap();
    let path = dir.path().join("copy.toml");
    write_report(&out.document, &path).unwrap();
    let back = read_report(&path).unwrap();
    assert_eq!(back, out.document);
    // the stored file reproduces too
    assert_eq!(read_report(dir.path().join("report.toml")).unwrap(), out.document);
}

#[test]
fn constants_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let config = MonitorConfig::default();
    let c = calibrate(
        &FieldFamily::new(&torus(2, 16), 4, 12, FamilyKind::Mixed).unwrap(),
        &config.pairs,
        &config.all_eps(),
    )
    .unwrap();
    let path = dir.path().join("constants.toml");
    write_constants(&c, &path).unwrap();
    assert_eq!(read_constants(&path).unwrap(), c);
}

#[test]
fn invalid_constants_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("constants.toml");
    std::fs::write(&path, "embedding = -1.0\nadvection = 1.0\nconvective = []\ninterpolation = []\n[provenance]\nsource = \"supplied\"\nnote = \"hand\"\n").unwrap();
    assert!(matches!(read_constants(&path), Err(Error::NonpositiveConstant { .. })));
    std::fs::write(&path, "not toml [").unwrap();
    assert!(matches!(read_constants(&path), Err(Error::Parse { .. })));
}
