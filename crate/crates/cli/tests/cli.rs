use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qline")).args(args).output().unwrap()
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn sampled_correctness_is_byte_identical_across_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    fs::write(
        &cfg,
        "mode = \"sampled\"\nshots = 20000\n\n[[algorithms]]\nphi = [1, 2]\nx = [false, true]\n\n[[algorithms]]\nphi = [3, 0]\nx = [true, true]\n",
    )
    .unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let cfg = cfg.to_str().unwrap();
    let out = qline(&[
        "correctness",
        "--config",
        cfg,
        "--seed",
        "11",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = qline(&[
        "correctness",
        "--config",
        cfg,
        "--seed",
        "11",
        "--out",
        b.to_str().unwrap(),
        "--sequential",
    ]);
    assert!(out.status.success());

    let fa = read_dir_sorted(&a);
    assert_eq!(fa, read_dir_sorted(&b));
    let names: Vec<_> = fa.iter().map(|f| f.0.as_str()).collect();
    assert_eq!(
        names,
        [
            "confusion_noisy.csv",
            "confusion_sampled.csv",
            "correctness.csv",
            "correctness.json"
        ]
    );
    let summary: serde_json::Value = serde_json::from_slice(&fa[3].1).unwrap();
    assert_eq!(summary["shots"], 20000);
    assert_eq!(summary["seed"], 11);

    let c = tmp.path().join("c");
    qline(&[
        "correctness",
        "--config",
        cfg,
        "--seed",
        "12",
        "--out",
        c.to_str().unwrap(),
    ]);
    assert_ne!(fa, read_dir_sorted(&c));
}

#[test]
fn bad_config_fails_and_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("out");
    for (i, bad) in [
        "mode = \"turbo\"",
        "[noise]\nv = 2.0\nlambda = 0.5",
        "mode = \"sampled\"\nshots = 0",
    ]
    .iter()
    .enumerate()
    {
        let cfg = tmp.path().join(format!("bad{i}.toml"));
        fs::write(&cfg, bad).unwrap();
        let out = qline(&[
            "correctness",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(!out.status.success(), "{bad}");
        assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
        assert!(!out_dir.exists());
    }
    let out = qline(&[
        "correctness",
        "--mode",
        "sampled",
        "--shots",
        "0",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let out = qline(&[
        "chsh",
        "--config",
        "/nonexistent/run.toml",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(!out_dir.exists());
}

#[test]
fn every_subcommand_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("small.toml");
    fs::write(&cfg, "[[algorithms]]\nphi = [2, 1]\nx = [false, true]\n").unwrap();
    for (cmd, file) in [
        ("hw-check", "hw_check.json"),
        ("chsh", "chsh.json"),
        ("blindness", "blindness.csv"),
        ("security", "security.json"),
        ("correctness", "correctness.csv"),
    ] {
        let dir = tmp.path().join(cmd);
        let out = qline(&[cmd, "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
        assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(dir.join(file).exists(), "{cmd}");
    }
    let chsh: serde_json::Value =
        serde_json::from_slice(&fs::read(tmp.path().join("chsh/chsh.json")).unwrap()).unwrap();
    assert!((chsh["ideal"].as_f64().unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-9);
    let blind = fs::read_to_string(tmp.path().join("blindness/blindness.csv")).unwrap();
    assert_eq!(blind.lines().count(), 4);
    assert!(blind.starts_with("grid,mode,fidelity"));
}
