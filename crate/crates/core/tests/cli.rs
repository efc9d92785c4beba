use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use secure_regen::cli::{parse_region_csv, ShareFile, HEADER_LEN};
use secure_regen::RatePoint;

fn rgc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rgc"))
        .args(args)
        .output()
        .expect("rgc runs")
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "rgc failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn encode(dir: &Path, input: &Path, seed: &str, preset: [&str; 3]) -> Output {
    rgc(&[
        "encode", "--n", preset[0], "--ell", preset[1], "--t", preset[2], "--in", p(input),
        "--out-dir", p(dir), "--seed", seed,
    ])
}

#[test]
fn one_byte_file_golden_header() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in.bin");
    fs::write(&input, [0xA5]).unwrap();
    let shares = tmp.path().join("shares");
    ok(&encode(&shares, &input, "00", ["7", "1", "3"]));
    for node in 1..=7u16 {
        let bytes = fs::read(shares.join(ShareFile::file_name(node))).unwrap();
        assert_eq!(bytes.len(), HEADER_LEN + 15 * 2);
        let mut header = vec![];
        header.extend_from_slice(b"RGC1");
        header.push(1);
        header.extend_from_slice(&[7, 0, 1, 0, 3, 0]);
        header.push(0);
        header.extend_from_slice(&65536u32.to_le_bytes());
        header.extend_from_slice(&node.to_le_bytes());
        header.extend_from_slice(&15u32.to_le_bytes());
        header.extend_from_slice(&1u64.to_le_bytes());
        // 40 symbols of 2 bytes hold 80 bytes; 79 are padding.
        header.push(79);
        assert_eq!(&bytes[..HEADER_LEN], &header[..]);
    }
}

#[test]
fn round_trip_and_repair() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in.bin");
    let data: Vec<u8> = (0..5000u32).map(|i| (i * 31 % 251) as u8).collect();
    fs::write(&input, &data).unwrap();
    let shares = tmp.path().join("shares");
    ok(&encode(&shares, &input, "c0ffee", ["7", "1", "3"]));

    let victim = shares.join(ShareFile::file_name(4));
    let original = fs::read(&victim).unwrap();
    fs::remove_file(&victim).unwrap();

    let out = tmp.path().join("out.bin");
    ok(&rgc(&["reconstruct", "--shares", p(&shares), "--out", p(&out)]));
    assert_eq!(fs::read(&out).unwrap(), data);

    let stdout = ok(&rgc(&["repair", "--shares", p(&shares), "--failed", "4", "--out", p(&victim)]));
    assert_eq!(fs::read(&victim).unwrap(), original);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["symbols_per_block"], 30);
    assert_eq!(report["bandwidth_ratio"], "1");
    for h in report["helpers"].as_array().unwrap() {
        assert_eq!(h["symbols_per_block"], 5);
    }
}

#[test]
fn seed_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in.bin");
    fs::write(&input, b"determinism").unwrap();
    let (a, b, c) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"));
    ok(&encode(&a, &input, "01", ["7", "1", "2"]));
    ok(&encode(&b, &input, "01", ["7", "1", "2"]));
    ok(&encode(&c, &input, "02", ["7", "1", "2"]));
    let name = ShareFile::file_name(3);
    assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap());
    assert_ne!(fs::read(a.join(&name)).unwrap(), fs::read(c.join(&name)).unwrap());
}

#[test]
fn invalid_parameters_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in.bin");
    fs::write(&input, b"x").unwrap();
    let out = encode(&tmp.path().join("s"), &input, "00", ["7", "1", "8"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn missing_input_exits_4() {
    let tmp = tempfile::tempdir().unwrap();
    let out = encode(&tmp.path().join("s"), &tmp.path().join("nope"), "00", ["7", "1", "3"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn insufficient_and_incompatible_shares() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in.bin");
    fs::write(&input, vec![7u8; 300]).unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    ok(&encode(&a, &input, "01", ["7", "1", "3"]));
    fs::write(&input, vec![8u8; 301]).unwrap();
    ok(&encode(&b, &input, "01", ["7", "1", "3"]));
    let out_file = tmp.path().join("out");

    fs::remove_file(a.join(ShareFile::file_name(1))).unwrap();
    fs::remove_file(a.join(ShareFile::file_name(2))).unwrap();
    let out = rgc(&["reconstruct", "--shares", p(&a), "--out", p(&out_file)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("insufficient shares"));

    fs::copy(b.join(ShareFile::file_name(1)), a.join(ShareFile::file_name(1))).unwrap();
    let out = rgc(&["reconstruct", "--shares", p(&a), "--out", p(&out_file)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("incompatible shares"));
}

#[test]
fn verify_exit_codes() {
    let out = ok(&rgc(&["verify", "--n", "3", "--ell", "1", "--t", "2", "--oracle", "--seed", "05"]));
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["oracle"]["status"], "ran");

    let broken = rgc(&["verify", "--n", "7", "--ell", "1", "--t", "2", "--break-randomness"]);
    assert_eq!(broken.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_slice(&broken.stdout).unwrap();
    assert_eq!(report["passed"], false);
    assert!(report["secrecy"]["witness"].is_array());
}

#[test]
fn region_json_and_csv() {
    let json: serde_json::Value =
        serde_json::from_str(&ok(&rgc(&["region", "--preset", "7661"]))).unwrap();
    let corners: Vec<(String, String)> = json["points"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|p| p["label"] == "corner")
        .map(|p| (p["alpha_bar"].as_str().unwrap().into(), p["beta_bar"].as_str().unwrap().into()))
        .collect();
    assert_eq!(
        corners,
        [("3/8".to_string(), "1/8".to_string()), ("2/5".into(), "1/15".into())]
    );

    let csv = ok(&rgc(&["region", "--n", "7", "--k", "6", "--d", "6", "--ell", "1", "--format", "csv"]));
    let points = parse_region_csv(&csv).unwrap();
    let from_json: Vec<RatePoint> = json["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| {
            RatePoint::new(
                p["alpha_bar"].as_str().unwrap().parse().unwrap(),
                p["beta_bar"].as_str().unwrap().parse().unwrap(),
            )
            .unwrap()
        })
        .collect();
    assert_eq!(points, from_json);

    let bad = rgc(&["region", "--n", "7", "--k", "6", "--d", "6", "--ell", "6"]);
    assert_eq!(bad.status.code(), Some(2));
}
