mod common;

use std::fs;
use std::path::Path;
use std::process::Command;

use common::{brute_force_decompositions, mean_sd};
use hamdec_cli::files::{
    append_rows, read_rows, read_witness, rows_to_csv, validate_witness, witness_path,
};
use hamdec_cli::{
    cmd_generate, cmd_oracle, cmd_solve, run_experiment, CliError, ExperimentConfig, GenerateArgs,
    InstanceFile, SolveArgs, Summary, WitnessFile,
};
use hamdec_core::{Algorithm, InstanceKind};

fn hex() -> InstanceFile {
    InstanceFile {
        n: 6,
        directed: false,
        x: vec![1, 2, 3, 4, 5, 6],
        y: vec![1, 4, 6, 2, 3, 5],
        generator: None,
        seed: None,
    }
}

fn write_instance(dir: &Path, name: &str, file: &InstanceFile) -> std::path::PathBuf {
    let path = dir.join(format!("{name}.json"));
    fs::write(&path, serde_json::to_string(file).unwrap()).unwrap();
    path
}

fn hamdec(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hamdec"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn instance_file_validation() {
    let good = hex();
    assert!(good.to_instance().is_ok());
    let json = serde_json::to_string(&good).unwrap();
    assert_eq!(serde_json::from_str::<InstanceFile>(&json).unwrap(), good);
    assert!(!json.contains("generator"));

    let mut late_start = hex();
    late_start.x = vec![2, 1, 3, 4, 5, 6];
    let mut short = hex();
    short.y.pop();
    let mut repeated = hex();
    repeated.y = vec![1, 4, 4, 2, 3, 5];
    for bad in [late_start, short, repeated] {
        assert!(
            matches!(bad.to_instance(), Err(CliError::Usage(_))),
            "{bad:?}"
        );
    }
}

#[test]
fn witnesses_revalidate() {
    let inst = hex();
    let ok = WitnessFile {
        z: vec![1, 4, 5, 3, 2, 6],
        w: vec![1, 2, 3, 4, 6, 5],
    };
    assert!(validate_witness(&ok, &inst).is_ok());
    let swapped = WitnessFile {
        z: ok.w.clone(),
        w: ok.z.clone(),
    };
    assert!(validate_witness(&swapped, &inst).is_ok());
    let given = WitnessFile {
        z: inst.y.clone(),
        w: inst.x.clone(),
    };
    assert!(validate_witness(&given, &inst).is_err());
    let foreign = WitnessFile {
        z: vec![1, 3, 5, 2, 4, 6],
        w: vec![1, 2, 3, 4, 5, 6],
    };
    assert!(validate_witness(&foreign, &inst).is_err());
}

#[test]
fn generate_is_deterministic_and_checks_preconditions() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| GenerateArgs {
        kind: InstanceKind::Pyramidal,
        n: 192,
        count: 100,
        seed: 7,
        directed: false,
        out_dir: dir.path().join(out),
    };
    let a = cmd_generate(&args("a")).unwrap();
    let b = cmd_generate(&args("b")).unwrap();
    assert_eq!(a.len(), 100);
    for (pa, pb) in a.iter().zip(&b) {
        assert_eq!(fs::read(pa).unwrap(), fs::read(pb).unwrap());
    }
    assert_eq!(
        fs::read(dir.path().join("a/manifest.json")).unwrap(),
        fs::read(dir.path().join("b/manifest.json")).unwrap()
    );
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("a/manifest.json")).unwrap()).unwrap();
    let seeds: Vec<u64> = manifest["instances"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["seed"].as_u64().unwrap())
        .collect();
    assert_eq!(seeds, (7..107).collect::<Vec<_>>());

    let mean = a
        .iter()
        .map(|p| {
            let inst = hamdec_cli::files::read_instance(p)
                .unwrap()
                .to_instance()
                .unwrap();
            inst.graph.multi_edge_count() as f64
        })
        .sum::<f64>()
        / a.len() as f64;
    assert!((110.0..=155.0).contains(&mean), "mean multi-edges {mean}");

    let too_small = GenerateArgs {
        kind: InstanceKind::FourPeak,
        n: 6,
        ..args("c")
    };
    assert!(matches!(cmd_generate(&too_small), Err(CliError::Usage(_))));
    assert!(!dir.path().join("c").exists());
}

#[test]
fn hex_solve_writes_a_valid_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(dir.path(), "hex", &hex());
    let csv = dir.path().join("rows.csv");
    for alg in [
        Algorithm::Dfj,
        Algorithm::Mtz,
        Algorithm::DfjVnd,
        Algorithm::DfjVndFix,
    ] {
        let args = SolveArgs {
            out_csv: Some(csv.clone()),
            export_lp: Some(dir.path().join(format!("{alg}.lp"))),
            ..SolveArgs::new(&path, alg)
        };
        let row = cmd_solve(&args).unwrap();
        assert_eq!(row.verdict, "feasible");
        assert_eq!(row.multi_edges, 2);
        let witness = read_witness(&witness_path(dir.path(), "hex", alg.as_str()), &hex()).unwrap();
        assert_ne!(witness.z, witness.w);
        let lp = fs::read_to_string(dir.path().join(format!("{alg}.lp"))).unwrap();
        assert!(hamdec_core::ilp::parse_lp(&lp).is_ok());
    }
    let rows = read_rows(&csv).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(
        fs::read_to_string(&csv)
            .unwrap()
            .matches("instance_id")
            .count(),
        1
    );
    assert!(rows
        .iter()
        .all(|r| r.generator == "file" && r.instance_id == "hex"));
}

#[test]
fn solve_rejects_wrong_directedness() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(dir.path(), "hex", &hex());
    let err = cmd_solve(&SolveArgs::new(&path, Algorithm::DfjLs)).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    let missing = cmd_solve(&SolveArgs::new(
        dir.path().join("nope.json"),
        Algorithm::Dfj,
    ))
    .unwrap_err();
    assert_eq!(missing.exit_code(), 2);
}

#[test]
fn repeated_solves_give_identical_rows_and_agree_with_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let mut paths = Vec::new();
    for (kind, directed) in [
        (InstanceKind::RandomPermutation, false),
        (InstanceKind::RandomPermutation, true),
        (InstanceKind::Pyramidal, false),
        (InstanceKind::Pyramidal, true),
        (InstanceKind::FourPeak, false),
        (InstanceKind::FourPeak, true),
    ] {
        paths.extend(
            cmd_generate(&GenerateArgs {
                kind,
                n: 9,
                count: 5,
                seed: 300,
                directed,
                out_dir: dir.path().join(format!("{kind}_{directed}")),
            })
            .unwrap(),
        );
    }
    for path in &paths {
        let file = hamdec_cli::files::read_instance(path).unwrap();
        let inst = file.to_instance().unwrap();
        let expected = brute_force_decompositions(&inst.graph);
        let report = cmd_oracle(path).unwrap();
        assert_eq!(report.count, expected, "{}", path.display());
        let algs = [
            Algorithm::Dfj,
            Algorithm::Mtz,
            Algorithm::heuristic_for(file.directed),
        ];
        for alg in algs {
            let args = SolveArgs {
                seed: 11,
                no_timing: true,
                witness_dir: Some(dir.path().to_path_buf()),
                ..SolveArgs::new(path, alg)
            };
            let first = cmd_solve(&args).unwrap();
            let second = cmd_solve(&args).unwrap();
            assert_eq!(first, second);
            assert_eq!(
                first.verdict == "feasible",
                expected > 1,
                "{alg} on {}",
                path.display()
            );
            assert_eq!(report.witness.is_some(), expected > 1);
        }
    }
}

#[test]
fn oracle_reports() {
    let dir = tempfile::tempdir().unwrap();
    let same = InstanceFile {
        y: hex().x,
        ..hex()
    };
    let path = write_instance(dir.path(), "same", &same);
    assert_eq!(
        cmd_oracle(&path).unwrap().to_string(),
        "1 decomposition; second does not exist"
    );
    let fig = write_instance(dir.path(), "hex", &hex());
    let report = cmd_oracle(&fig).unwrap().to_string();
    assert!(
        report.starts_with("4 decompositions; second exists\nz = "),
        "{report}"
    );
    let big = InstanceFile {
        n: 15,
        directed: false,
        x: (1..=15).collect(),
        y: (1..=15).collect(),
        generator: None,
        seed: None,
    };
    let path = write_instance(dir.path(), "big", &big);
    assert_eq!(cmd_oracle(&path).unwrap_err().exit_code(), 1);
}

const GRID: &str = r#"[
  {"kind": "random", "n": 12, "count": 6, "directed": false,
   "algorithms": ["dfj", "mtz", "dfj-vnd", "dfj-vnd-fix"], "per_set_time_limit_ms": 120000, "seed": 40},
  {"kind": "four-peak", "n": 10, "count": 6, "directed": true,
   "algorithms": ["dfj", "dfj-ls"], "per_set_time_limit_ms": 120000, "seed": 50}
]"#;

#[test]
fn experiment_rows_are_thread_count_independent() {
    let config = ExperimentConfig::from_json(GRID).unwrap();
    let one = run_experiment(&config, true, Some(1)).unwrap();
    let four = run_experiment(&config, true, Some(4)).unwrap();
    assert_eq!(one.len(), 6 * 4 + 6 * 2);
    assert_eq!(rows_to_csv(&one), rows_to_csv(&four));
    // instances are shared across algorithms within a set
    for chunk in one[..24].chunks(4) {
        assert!(chunk
            .iter()
            .all(|r| r.instance_id == chunk[0].instance_id && r.verdict == chunk[0].verdict));
    }
}

#[test]
fn experiment_summary_matches_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("grid.json");
    fs::write(&config, GRID).unwrap();
    let csv = dir.path().join("out.csv");
    let (rows, summary) = hamdec_cli::cmd_experiment(&config, &csv, false, None).unwrap();
    let raw = read_rows(&csv).unwrap();
    assert_eq!(raw, rows);
    assert_eq!(summary.lines.len(), 6);
    for line in &summary.lines {
        let group: Vec<_> = raw
            .iter()
            .filter(|r| {
                r.generator == line.generator
                    && r.algorithm == line.algorithm
                    && r.directed == line.directed
            })
            .collect();
        let solved: Vec<_> = group.iter().filter(|r| r.verdict != "timeout").collect();
        assert_eq!((line.total, line.solved), (group.len(), solved.len()));
        let t = mean_sd(
            &solved
                .iter()
                .map(|r| r.time_ms as f64 / 1000.0)
                .collect::<Vec<_>>(),
        );
        let it = mean_sd(
            &solved
                .iter()
                .map(|r| r.iterations as f64)
                .collect::<Vec<_>>(),
        );
        for (got, want) in [(line.time_s, t), (line.iterations, it)] {
            assert!(
                (got.0 - want.0).abs() < 1e-9 && (got.1 - want.1).abs() < 1e-9,
                "{got:?} vs {want:?}"
            );
        }
    }
    assert_eq!(Summary::from_rows(&raw), summary);
}

#[test]
fn empty_and_malformed_configs() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("empty.json");
    fs::write(
        &config,
        r#"[{"kind": "pyramidal", "n": 20, "count": 3, "directed": false, "algorithms": [], "per_set_time_limit_ms": 1000, "seed": 0}]"#,
    )
    .unwrap();
    let csv = dir.path().join("empty.csv");
    let (rows, summary) = hamdec_cli::cmd_experiment(&config, &csv, false, None).unwrap();
    assert!(rows.is_empty() && summary.lines.is_empty());
    assert_eq!(read_rows(&csv).unwrap(), vec![]);

    for bad in [
        "{",
        r#"[{"kind": "pyramidal"}]"#,
        r#"[{"kind": "hexagonal", "n": 20, "count": 3, "directed": false, "algorithms": [], "per_set_time_limit_ms": 1, "seed": 0}]"#,
        r#"[{"kind": "pyramidal", "n": 20, "count": 3, "directed": true, "algorithms": ["dfj-vnd"], "per_set_time_limit_ms": 1, "seed": 0}]"#,
    ] {
        assert!(
            matches!(
                ExperimentConfig::from_json(bad).and_then(|c| run_experiment(&c, true, None)),
                Err(CliError::Usage(_))
            ),
            "{bad}"
        );
    }
}

#[test]
fn csv_append_keeps_one_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(dir.path(), "hex", &hex());
    let row = cmd_solve(&SolveArgs {
        no_timing: true,
        ..SolveArgs::new(&path, Algorithm::Dfj)
    })
    .unwrap();
    let csv = dir.path().join("r.csv");
    append_rows(&csv, &[]).unwrap();
    append_rows(&csv, std::slice::from_ref(&row)).unwrap();
    append_rows(&csv, &[row.clone(), row.clone()]).unwrap();
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert_eq!(
        read_rows(&csv).unwrap(),
        vec![row.clone(), row.clone(), row]
    );
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(dir.path(), "hex", &hex());
    let p = path.to_str().unwrap();

    let ok = hamdec(&["solve", p, "--algorithm", "dfj", "--no-timing"]);
    assert_eq!(ok.status.code(), Some(0));
    let stdout = String::from_utf8(ok.stdout).unwrap();
    assert!(stdout.starts_with("instance_id,generator,n,directed,algorithm,seed,verdict"));
    assert!(stdout.contains("hex,file,6,false,dfj,0,feasible,"));

    let oracle = hamdec(&["oracle", p]);
    assert_eq!(oracle.status.code(), Some(0));
    assert!(String::from_utf8(oracle.stdout)
        .unwrap()
        .contains("second exists"));

    // a timeout is still a successful run
    let timeout = hamdec(&["solve", p, "--algorithm", "mtz", "--time-limit-ms", "0"]);
    assert_eq!(timeout.status.code(), Some(0));
    assert!(String::from_utf8(timeout.stdout)
        .unwrap()
        .contains(",timeout,"));

    assert_eq!(
        hamdec(&["solve", p, "--algorithm", "dfj-ls"]).status.code(),
        Some(1)
    );
    assert_eq!(
        hamdec(&["solve", p, "--algorithm", "sa"]).status.code(),
        Some(1)
    );
    assert_eq!(hamdec(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        hamdec(&[
            "generate",
            "--kind",
            "four-peak",
            "--n",
            "6",
            "--out-dir",
            dir.path().to_str().unwrap()
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        hamdec(&["oracle", dir.path().join("missing.json").to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(hamdec(&["--help"]).status.code(), Some(0));
}
