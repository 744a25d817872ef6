//! End-to-end tests of the `qic` binary: exit codes, file outputs, CSV
//! shape, and byte-level determinism of the sweep.

use std::path::Path;
use std::process::{Command, Output};

fn qic(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qic"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn qic")
}

fn write_test_pgm(dir: &Path, name: &str) -> std::path::PathBuf {
    let img = qic_core::image_io::synthetic::generate("building", 24, 16);
    let path = dir.join(name);
    qic_core::image_io::save_image(&img, &path).unwrap();
    path
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    // Unknown subcommand.
    let out = qic(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    // q = 0 is rejected by argument validation.
    write_test_pgm(dir.path(), "t.pgm");
    let out = qic(
        &["encode", "--image", "t.pgm", "--q", "0", "--scheme", "mtgsc"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    // Unknown scheme.
    let out = qic(
        &["encode", "--image", "t.pgm", "--q", "8", "--scheme", "frqi"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn runtime_failures_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = qic(
        &["encode", "--image", "missing.pgm", "--q", "8", "--scheme", "mtgsc"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("file not found"));
}

#[test]
fn truncated_circuit_json_reports_malformed_group() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("broken.json"), "{\"register\":{\"coeff\":8,").unwrap();
    let out = qic(
        &[
            "decode", "--circuit", "broken.json", "--width", "8", "--height", "8", "--q", "8",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("MalformedGroup"));
}

#[test]
fn encode_decode_verify_chain() {
    let dir = tempfile::tempdir().unwrap();
    write_test_pgm(dir.path(), "t.pgm");

    let out = qic(
        &[
            "encode", "--image", "t.pgm", "--q", "8", "--scheme", "mtgsc", "--out", "enc",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let circuit = "enc/t_mtgsc_q8.circuit.json";
    assert!(dir.path().join(circuit).exists());

    // stats.csv has the fixed header and one data row.
    let csv = std::fs::read_to_string(dir.path().join("enc/stats.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "scheme,image,q,n_tcn,q_o,s_bit,a_bit,b_t,b_rg,b_z,b_s0,bpe,total,gates_per_pixel,mse,psnr"
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("mtgsc,t,8,"));
    assert!(row.ends_with(",,"), "quality columns empty on encode rows: {row}");

    // Decode with the original appends a quality row and reports PSNR.
    let out = qic(
        &[
            "decode", "--circuit", circuit, "--width", "24", "--height", "16", "--q", "8",
            "--out", "recon.pgm", "--original", "t.pgm", "--stats", "enc/stats.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("recon.pgm").exists());
    let csv = std::fs::read_to_string(dir.path().join("enc/stats.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);

    // Decode without the original still succeeds, reporting no PSNR.
    let out = qic(
        &[
            "decode", "--circuit", circuit, "--width", "24", "--height", "16", "--q", "8",
            "--out", "recon2.pgm",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("psnr="));

    // Verify emits the report file.
    let out = qic(
        &["verify", "--circuit", circuit, "--out", "verify.json"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("verify.json")).unwrap())
            .unwrap();
    assert_eq!(report["all_decode_match"], serde_json::json!(true));
}

#[test]
fn sweep_is_deterministic_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "sweep",
        "--images",
        "grass,house",
        "--q-factors",
        "8,70",
        "--schemes",
        "mtgsc,scmneqr,dctefrqi",
        "--jpeg-proxy",
    ];
    let mut first = args.to_vec();
    first.extend(["--out", "a"]);
    let out = qic(&first, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // A different worker count must not change a byte of the output.
    let mut second = args.to_vec();
    second.extend(["--out", "b"]);
    let out = Command::new(env!("CARGO_BIN_EXE_qic"))
        .args(&second)
        .env("RAYON_NUM_THREADS", "4")
        .current_dir(dir.path())
        .output()
        .expect("spawn qic");
    assert!(out.status.success());

    let a = std::fs::read(dir.path().join("a/stats.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b/stats.csv")).unwrap();
    assert_eq!(a, b, "sweep CSV must be byte-identical across runs");

    let csv = String::from_utf8(a).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().ends_with(",jpeg_bpp_proxy"));
    // 2 images x 2 q-factors x 3 schemes.
    assert_eq!(lines.count(), 12);

    for name in ["grass_mtgsc.dat", "house_dctefrqi.dat"] {
        let plot = std::fs::read_to_string(dir.path().join("a/plots").join(name)).unwrap();
        assert_eq!(plot.lines().count(), 3, "{name}: header + one row per q");
    }
    let summary = std::fs::read_to_string(dir.path().join("a/summary.txt")).unwrap();
    assert!(summary.contains("mean gate saving of mtgsc vs dctefrqi"));
    assert!(summary.contains("synthetic stand-ins used for: grass, house"));
}

#[test]
fn sweep_reports_unresolvable_images_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let out = qic(
        &[
            "sweep", "--images", "house,andromeda", "--q-factors", "70", "--schemes",
            "mtgsc,dctefrqi", "--out", "s",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = std::fs::read_to_string(dir.path().join("s/summary.txt")).unwrap();
    assert!(summary.contains("skipped: andromeda"));
    let csv = std::fs::read_to_string(dir.path().join("s/stats.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3); // header + house x 1 q x 2 schemes

    // Nothing resolvable is a hard failure.
    let out = qic(&["sweep", "--images", "andromeda", "--out", "s2"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_emit_flags_write_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = qic(
        &[
            "sweep", "--images", "house", "--q-factors", "70", "--schemes",
            "mtgsc,scmneqr,dctefrqi", "--out", "full", "--emit-circuits", "--emit-recon",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("full/circuits/house_mtgsc_q70.circuit.json").exists());
    assert!(dir.path().join("full/circuits/house_dctefrqi_q70.circuit.json").exists());
    assert!(dir.path().join("full/recon/house_q70.pgm").exists());
}

#[test]
fn sweep_config_file_is_honored_and_cli_wins() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("sweep.conf"),
        "# demo config\nimages = grass\nq_factors = 70\nschemes = mtgsc, dctefrqi\noutput_dir = from_config\n",
    )
    .unwrap();
    let out = qic(
        &["sweep", "--config", "sweep.conf", "--out", "from_cli"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("from_cli/stats.csv").exists());
    assert!(!dir.path().join("from_config").exists());
    let csv = std::fs::read_to_string(dir.path().join("from_cli/stats.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3); // header + 1 image x 1 q x 2 schemes

    // Rejected configs: empty q list and out-of-range factors are usage-level
    // failures surfaced as runtime errors from the config layer.
    std::fs::write(dir.path().join("bad.conf"), "q_factors = 0\n").unwrap();
    let out = qic(&["sweep", "--config", "bad.conf"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}
