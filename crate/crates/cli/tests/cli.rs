use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn skewhad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewhad"))
        .args(args)
        .output()
        .expect("run skewhad")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn build_desk(out: &Path) -> Output {
    skewhad(&["build", "--p", "3", "--e", "1", "--N", "2", "--i0", "0", "--i1", "0", "--out", path(out)])
}

#[test]
fn desk_build_writes_bundle_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let o = build_desk(dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let matrix = dir.path().join("matrix_8.txt");
    assert!(matrix.exists());

    let o = skewhad(&["verify", "gate0", path(&matrix)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("GATE0 PASS n=8"));

    let o = skewhad(&["verify", "shdf", path(&dir.path().join("MANIFEST"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "SHDF PASS v=3\n");

    let o = skewhad(&["manifest", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAILED"));
}

#[test]
fn order_1252_round_trip_reproduces_digests() {
    let a = tempfile::tempdir().unwrap();
    let o = skewhad(&[
        "build", "--p", "5", "--e", "4", "--N", "16", "--i0", "4-11", "--i1", "0-7", "--out", path(a.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let matrix = a.path().join("matrix_1252.txt");

    let o = skewhad(&["verify", "gate0", path(&matrix)]);
    assert!(stdout(&o).ends_with("GATE0 PASS n=1252\n"));
    let manifest = a.path().join("MANIFEST");
    assert_eq!(stdout(&skewhad(&["verify", "shdf", path(&manifest)])), "SHDF PASS v=625\n");
    assert_eq!(
        stdout(&skewhad(&["rank", path(&matrix), "--field", "2", "--tournament"])),
        "tournament 2 1251 1251\n"
    );

    let b = tempfile::tempdir().unwrap();
    let o = skewhad(&["build", "--from-manifest", path(&manifest), "--out", path(b.path())]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read(&manifest).unwrap(), fs::read(b.path().join("MANIFEST")).unwrap());
    assert_eq!(fs::read(&matrix).unwrap(), fs::read(b.path().join("matrix_1252.txt")).unwrap());

    // Sketch at k = 300 gives a 908-byte packet that decodes to 1252 lines.
    let x: String = (0..1252).map(|i| format!("{}\n", (i as f64 * 0.37).sin())).collect();
    let input = a.path().join("x.txt");
    fs::write(&input, x).unwrap();
    let packet = a.path().join("x.pkt");
    let o = skewhad(&[
        "sketch", "encode", "--matrix", path(&matrix), "--k", "300", "--input", path(&input), "--output", path(&packet),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::metadata(&packet).unwrap().len(), 908);
    let decoded = a.path().join("y.txt");
    let o = skewhad(&[
        "sketch", "decode", "--matrix", path(&matrix), "--input", path(&packet), "--output", path(&decoded),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&decoded).unwrap().lines().count(), 1252);
}

#[test]
fn manifest_is_sha256sum_compatible() {
    let dir = tempfile::tempdir().unwrap();
    build_desk(dir.path());
    let status = Command::new("sha256sum")
        .args(["-c", "--quiet", "MANIFEST"])
        .current_dir(dir.path())
        .status();
    match status {
        Ok(s) => assert!(s.success()),
        Err(_) => eprintln!("sha256sum not available, skipping"),
    }
}

#[test]
fn tampered_file_fails_manifest_check() {
    let dir = tempfile::tempdir().unwrap();
    build_desk(dir.path());
    fs::write(dir.path().join("blocks.txt"), "tampered\n").unwrap();
    let o = skewhad(&["manifest", path(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("blocks.txt: FAILED"));
}

#[test]
fn exhausted_generator_search_exits_2() {
    // C_0 ∪ ... ∪ C_7 contains both x and -x, so no generator can make it skew.
    let dir = tempfile::tempdir().unwrap();
    let o = skewhad(&[
        "build", "--p", "5", "--e", "4", "--N", "16", "--i0", "0-7", "--i1", "0-7", "--out", path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("candidates tried"));
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(skewhad(&["build", "--p", "5", "--out", path(dir.path())]).status.code(), Some(1));
    assert_eq!(skewhad(&["frobnicate"]).status.code(), Some(1));
    // Reducible modulus x^4 + 1.
    let o = skewhad(&[
        "build", "--p", "5", "--e", "4", "--N", "16", "--i0", "4-11", "--i1", "0-7", "--poly", "1,0,0,0,1", "--out",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(skewhad(&["--help"]).status.code(), Some(0));
}

#[test]
fn parse_errors_report_position() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.txt");
    fs::write(&m, "2\n+-\n-x\n").unwrap();
    let o = skewhad(&["verify", "gate0", path(&m)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3, column 2"));

    build_desk(dir.path());
    let v = dir.path().join("v.txt");
    fs::write(&v, "1.0\n2.0\n  oops\n").unwrap();
    let o = skewhad(&[
        "sketch", "encode", "--matrix", path(&dir.path().join("matrix_8.txt")), "--k", "2", "--input", path(&v),
        "--output", path(&dir.path().join("p")),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3, column 3"));
}

#[test]
fn non_hadamard_matrix_fails_gate0_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.txt");
    fs::write(&m, "2\n++\n++\n").unwrap();
    let o = skewhad(&["verify", "gate0", path(&m)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("GATE0 FAIL n=2"));
}
