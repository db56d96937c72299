//! End-to-end checks of the command-line surface: exit codes, file formats,
//! golden determinism and envelope reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_colorcode"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Envelope text without the timing line, the only run-dependent part.
fn comparable(out: &Output) -> String {
    stdout(out)
        .lines()
        .filter(|l| !l.contains("timing_ms"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn goldens_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(run(&["goldens", "--out-dir", a.to_str().unwrap()]).status.success());
    assert!(run(&["goldens", "--out-dir", b.to_str().unwrap()]).status.success());
    let mut names: Vec<_> = std::fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 9);
    for name in names {
        let left = std::fs::read(a.join(&name)).unwrap();
        let right = std::fs::read(b.join(&name)).unwrap();
        assert_eq!(left, right, "{name:?} differs between runs");
    }
}

#[test]
fn goldens_validate_and_cover_both_families() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    assert!(run(&["goldens", "--out-dir", g.to_str().unwrap()]).status.success());
    let mut families = (false, false);
    for entry in std::fs::read_dir(&g).unwrap() {
        let path = entry.unwrap().path();
        let out = run(&["colex", "validate", "--in", path.to_str().unwrap()]);
        assert!(
            out.status.success(),
            "{path:?} failed validation: {}",
            stdout(&out)
        );
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        if name.contains("hexagon") || name.contains("torus") && !name.contains("four") {
            families.0 = true;
        }
        if name.contains("union_jack") || name.contains("four_eight") {
            families.1 = true;
        }
    }
    assert!(families.0 && families.1, "goldens must cover both families");
}

#[test]
fn gen_dual_border_validate_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_owned();

    let out = run(&[
        "colex", "gen", "--family", "four8", "--rows", "2", "--cols", "2", "--out",
        &p("t.json"),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"faces\": 8"));

    let out = run(&["colex", "dual", "--in", &p("t.json"), "--out", &p("d.json")]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"sites\": 8"));
    assert!(stdout(&out).contains("\"triangles\": 16"));

    // The closed dual cannot feed the border construction.
    let out = run(&["colex", "border", "--in", &p("d.json"), "--out", &p("b.json")]);
    assert_eq!(out.status.code(), Some(1));

    // A bordered patch can.
    let g = dir.path().join("g");
    run(&["goldens", "--out-dir", g.to_str().unwrap()]);
    let dual = g.join("hexagon_patch.dual.json");
    let out = run(&[
        "colex", "border", "--in", dual.to_str().unwrap(), "--out", &p("hex.json"),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"complete_faces\": 1"));
    assert!(stdout(&out).contains("\"partial_faces\": 6"));
    let bordered = std::fs::read_to_string(p("hex.json")).unwrap();
    let golden = std::fs::read_to_string(g.join("hexagon_patch.bordered.json")).unwrap();
    assert_eq!(bordered, golden);
}

#[test]
fn inadmissible_dimensions_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("x.json");
    let out = run(&[
        "colex", "gen", "--family", "hex", "--rows", "2", "--cols", "4", "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("multiple of 3"), "{err}");
    assert!(!out_path.exists());
}

#[test]
fn unknown_subcommand_exits_one() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // Two faces of the same color sharing edges.
    let g = dir.path().join("g");
    run(&["goldens", "--out-dir", g.to_str().unwrap()]);
    let text = std::fs::read_to_string(g.join("minimal_torus.colex2.json")).unwrap();
    let broken = text.replacen("\"color\": \"g\"", "\"color\": \"r\"", 1);
    assert_ne!(text, broken);
    std::fs::write(&path, broken).unwrap();
    let out = run(&["colex", "validate", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("face-three-coloring"));
}

#[test]
fn code_info_reports_topology() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.json");
    run(&[
        "colex", "gen", "--family", "hex", "--rows", "3", "--cols", "3", "--out",
        p.to_str().unwrap(),
    ]);
    let out = run(&["code", "info", "--in", p.to_str().unwrap()]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("\"k\": 4"));
    assert!(s.contains("\"rank\": 14"));
    assert!(s.contains("\"n\": 18"));
    assert!(s.contains("\"chi\": 0"));
    assert!(s.contains("\"h1\": 2"));
}

#[test]
fn verify_overlap_passes_on_patch_and_blocks_on_torus() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    run(&["goldens", "--out-dir", g.to_str().unwrap()]);

    let patch = g.join("hexagon_patch.dual.json");
    let out = run(&[
        "verify", "overlap", "--lattice", patch.to_str().unwrap(), "--betaJ",
        "-2,-1,-0.5,0,0.5,1,2",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("\"pass\": true"));

    let torus = g.join("nine_face_torus.colex2.json");
    let out = run(&["verify", "overlap", "--lattice", torus.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("homology"), "{err}");
}

#[test]
fn verify_field_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    run(&["goldens", "--out-dir", g.to_str().unwrap()]);
    let patch = g.join("hexagon_patch.bordered.json");
    let fields = dir.path().join("fields.json");
    std::fs::write(&fields, r#"{"beta": 0.7, "J": 1.0, "h": 0.3}"#).unwrap();
    let out = run(&[
        "verify", "field", "--lattice", patch.to_str().unwrap(), "--fields",
        fields.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("\"pass\": true"));
}

#[test]
fn spin_z_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    run(&["goldens", "--out-dir", g.to_str().unwrap()]);
    let lattice = g.join("union_jack_patch.dual.json");
    let coup = dir.path().join("c.json");
    std::fs::write(
        &coup,
        r#"{"beta": 1.0, "J": [{"tri": 0, "re": 0.4, "im": 0.1}, {"tri": 2, "re": -0.3}], "h": 0.2}"#,
    )
    .unwrap();
    let parse_z = |s: &str| {
        let v: serde_json::Value = serde_json::from_str(s).unwrap();
        let z = &v["payload"]["z"];
        (z["re"].as_f64().unwrap(), z["im"].as_f64().unwrap())
    };
    let a = run(&[
        "spin", "z", "--lattice", lattice.to_str().unwrap(), "--couplings",
        coup.to_str().unwrap(), "--method", "exact",
    ]);
    let b = run(&[
        "spin", "z", "--lattice", lattice.to_str().unwrap(), "--couplings",
        coup.to_str().unwrap(), "--method", "hight",
    ]);
    assert!(a.status.success() && b.status.success());
    let (zr, zi) = parse_z(&stdout(&a));
    let (wr, wi) = parse_z(&stdout(&b));
    let denom = (zr * zr + zi * zi).sqrt().max(1.0);
    assert!(((zr - wr).powi(2) + (zi - wi).powi(2)).sqrt() / denom < 1e-10);
}

#[test]
fn spin_ground_lists_four_tags() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    run(&["goldens", "--out-dir", g.to_str().unwrap()]);
    let lattice = g.join("hexagon_patch.dual.json");
    for sign in ["+", "-"] {
        let out = run(&[
            "spin", "ground", "--lattice", lattice.to_str().unwrap(), "--sign", sign,
        ]);
        assert!(out.status.success());
        assert!(stdout(&out).contains("\"count\": 4"));
    }
}

#[test]
fn spin_critical_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let out = run(&[
        "spin", "critical", "--family", "tri", "--widths", "3", "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let body = std::fs::read_to_string(&csv).unwrap();
    let mut lines = body.lines();
    assert_eq!(
        lines.next().unwrap(),
        "width,betaJ,free_energy,specific_heat"
    );
    assert_eq!(lines.count(), 31);
    assert!(stdout(&out).contains("\"self_dual_kc\": 4.4069999999999998e-1"));

    let bad = run(&[
        "spin", "critical", "--family", "uj", "--widths", "3", "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn envelopes_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    run(&["goldens", "--out-dir", g.to_str().unwrap()]);
    let patch = g.join("hexagon_patch.dual.json");
    let args = [
        "verify",
        "overlap",
        "--lattice",
        patch.to_str().unwrap(),
        "--betaJ",
        "0.5,1",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(comparable(&a), comparable(&b));
    // Thread count must not change the numbers either.
    let c = bin().args(args).arg("--threads").arg("1").output().unwrap();
    assert_eq!(comparable(&a), comparable(&c));
}

#[test]
fn sampling_is_seed_reproducible_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    run(&["goldens", "--out-dir", g.to_str().unwrap()]);
    let patch = g.join("hexagon_patch.bordered.json");
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let run_sample = |csv: &Path, seed: &str| {
        run(&[
            "mqc", "sample", "--lattice", patch.to_str().unwrap(), "--basis", "z",
            "--n-samples", "500", "--seed", seed, "--out", csv.to_str().unwrap(),
        ])
    };
    let a = run_sample(&csv_a, "42");
    let b = run_sample(&csv_b, "42");
    assert!(a.status.success() && b.status.success());
    assert_eq!(
        std::fs::read(&csv_a).unwrap(),
        std::fs::read(&csv_b).unwrap()
    );
    let c = run_sample(&csv_b, "43");
    assert!(c.status.success());
    assert_ne!(
        std::fs::read(&csv_a).unwrap(),
        std::fs::read(&csv_b).unwrap()
    );
}

#[test]
fn mqc_joint_table_sums_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    run(&["goldens", "--out-dir", g.to_str().unwrap()]);
    let patch = g.join("hexagon_patch.bordered.json");
    let out = run(&["mqc", "joint", "--lattice", patch.to_str().unwrap(), "--basis", "x"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let total = v["payload"]["total"].as_f64().unwrap();
    assert!((total - 1.0).abs() < 1e-12);
    let table = v["payload"]["table"].as_array().unwrap();
    assert_eq!(table.len(), 64);
}

#[test]
fn basis_and_coeffs_files_parse() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    run(&["goldens", "--out-dir", g.to_str().unwrap()]);
    let patch = g.join("single_triangle.bordered.json");

    // One qubit, rotated basis from a file.
    let basis = dir.path().join("basis.json");
    let (c, s) = (0.8f64.cos(), 0.8f64.sin());
    std::fs::write(
        &basis,
        format!(r#"{{"qubits": [{{"m0": [[{c},0],[{s},0]], "m1": [[{ns},0],[{c},0]]}}]}}"#, ns = -s),
    )
    .unwrap();
    let out = run(&[
        "mqc", "joint", "--lattice", patch.to_str().unwrap(), "--basis",
        basis.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let table = v["payload"]["table"].as_array().unwrap();
    // The code state is |0>, so the outcome probabilities are cos^2, sin^2.
    assert!((table[0].as_f64().unwrap() - c * c).abs() < 1e-12);
    assert!((table[1].as_f64().unwrap() - s * s).abs() < 1e-12);

    // Explicit per-qubit coefficient pairs.
    let coeffs = dir.path().join("coeffs.json");
    std::fs::write(&coeffs, r#"{"coeffs": [[[0.3, 0.1], [0.7, -0.2]]]}"#).unwrap();
    let out = run(&[
        "code", "overlap", "--in", patch.to_str().unwrap(), "--coeffs",
        coeffs.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["payload"]["overlap"]["re"].as_f64().unwrap() - 0.3).abs() < 1e-15);
    assert!((v["payload"]["overlap"]["im"].as_f64().unwrap() - 0.1).abs() < 1e-15);

    // A non-orthonormal basis file is rejected.
    std::fs::write(
        &basis,
        r#"{"qubits": [{"m0": [[1,0],[0,0]], "m1": [[1,0],[1,0]]}]}"#,
    )
    .unwrap();
    let out = run(&[
        "mqc", "joint", "--lattice", patch.to_str().unwrap(), "--basis",
        basis.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn state_files_have_documented_layout() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    run(&["goldens", "--out-dir", g.to_str().unwrap()]);
    let patch = g.join("hexagon_patch.bordered.json");
    let bin_path = dir.path().join("st.bin");
    let out = run(&[
        "code", "state", "--in", patch.to_str().unwrap(), "--out",
        bin_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let bytes = std::fs::read(&bin_path).unwrap();
    assert_eq!(bytes.len(), 64 * 16);
    let amp = |i: usize| {
        let re = f64::from_le_bytes(bytes[16 * i..16 * i + 8].try_into().unwrap());
        let im = f64::from_le_bytes(bytes[16 * i + 8..16 * i + 16].try_into().unwrap());
        (re, im)
    };
    assert_eq!(amp(0), (1.0, 0.0));
    assert_eq!(amp(63), (1.0, 0.0));
    assert_eq!(amp(1), (0.0, 0.0));
}

#[test]
fn cluster_project_matches_code_state() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    run(&["goldens", "--out-dir", g.to_str().unwrap()]);
    let patch = g.join("hexagon_patch.bordered.json");
    let proj = dir.path().join("proj.bin");
    let code = dir.path().join("code.bin");
    let out = run(&[
        "cluster", "project", "--lattice", patch.to_str().unwrap(), "--x", "0000000",
        "--out", proj.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    run(&[
        "code", "state", "--in", patch.to_str().unwrap(), "--out", code.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read(&proj).unwrap(), std::fs::read(&code).unwrap());

    let out = run(&[
        "cluster", "project", "--lattice", patch.to_str().unwrap(), "--x", "1000000",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
