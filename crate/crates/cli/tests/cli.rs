use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn fpscp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpscp"))
        .args(args)
        .env_remove("FPSCP_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .flat_map(|l| l.split(' '))
        .find_map(|kv| kv.strip_prefix(key)?.strip_prefix('='))
}

/// One customer at distance 5 from the depot, no stations.
fn one_customer(dir: &Path, battery: f64) -> String {
    let text = format!(
        "NAME: one\nTYPE: EVRP\nDIMENSION: 2\nSTATIONS: 0\nCAPACITY: 10\n\
         ENERGY_CAPACITY: {battery}\nENERGY_CONSUMPTION: 1\n\
         NODE_COORD_SECTION\n1 0 0\n2 3 4\nDEMAND_SECTION\n1 0\n2 3\n\
         STATIONS_COORD_SECTION\nDEPOT_SECTION\n1\n-1\nEOF\n"
    );
    let path = dir.join(format!("one-{battery}.evrp"));
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn decode_single_customer() {
    let dir = TempDir::new().unwrap();
    let inst = one_customer(dir.path(), 20.0);
    for method in ["fp", "fr", "ss"] {
        let out = fpscp(&["decode", "--instance", &inst, "--method", method]);
        assert_eq!(out.status.code(), Some(0), "{method}");
        let text = stdout(&out);
        assert_eq!(value(&text, "outcome"), Some("solved"));
        assert_eq!(value(&text, "distance"), Some("10"));
        assert!(text.lines().all(|l| l.contains('=')), "{text}");
    }
}

#[test]
fn infeasible_decode_exits_one() {
    let dir = TempDir::new().unwrap();
    let inst = one_customer(dir.path(), 5.0);
    let out = fpscp(&["decode", "--instance", &inst]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(value(&stdout(&out), "outcome"), Some("infeasible"));
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    let inst = one_customer(dir.path(), 20.0);
    assert_eq!(
        fpscp(&["decode", "--instance", &inst, "--method", "xx"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(fpscp(&["decode"]).status.code(), Some(2));
    assert_eq!(
        fpscp(&["decode", "--instance", &inst, "--order", "0,0"])
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("absent.evrp");
    assert_eq!(
        fpscp(&["decode", "--instance", missing.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
    let broken = dir.path().join("broken.evrp");
    fs::write(&broken, "NAME: x\nDIMENSION: 2\n").unwrap();
    let out = fpscp(&["decode", "--instance", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

fn generated(dir: &Path, seed: u64) -> String {
    let path = dir.join(format!("g{seed}.evrp"));
    let p = path.to_str().unwrap();
    let seed = seed.to_string();
    let out = fpscp(&[
        "gen-instance",
        "--customers",
        "6",
        "--stations",
        "2",
        "--battery",
        "1.2",
        "--cargo",
        "20",
        "--seed",
        &seed,
        "--out",
        p,
    ]);
    assert_eq!(out.status.code(), Some(0));
    p.to_string()
}

#[test]
fn compare_row_count() {
    let dir = TempDir::new().unwrap();
    let insts = dir.path().join("instances");
    fs::create_dir(&insts).unwrap();
    generated(&insts, 1);
    generated(&insts, 2);
    let csv = dir.path().join("results.csv");
    let summary = dir.path().join("summary.csv");
    let out = fpscp(&[
        "compare",
        "--instances",
        insts.to_str().unwrap(),
        "--perms",
        "knn:k=2:count=10",
        "--seed",
        "5",
        "--out",
        csv.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 10 * 3);
    assert_eq!(value(&stdout(&out), "rows"), Some("60"));
    assert_eq!(value(&stdout(&out), "violations"), Some("0"));
    assert_eq!(fs::read_to_string(&summary).unwrap().lines().count(), 1 + 2 * 3);

    let again = dir.path().join("again.csv");
    let fr_only = fpscp(&[
        "compare",
        "--instances",
        insts.to_str().unwrap(),
        "--perms",
        "knn:k=2:count=10",
        "--seed",
        "5",
        "--methods",
        "fr",
        "--out",
        again.to_str().unwrap(),
    ]);
    assert_eq!(fr_only.status.code(), Some(0));
    // same fr rows as the full run, timings aside
    let untimed = |l: &str| {
        let mut f: Vec<&str> = l.split(',').collect();
        f.remove(7);
        f.join(",")
    };
    let fr_rows: Vec<String> = text.lines().filter(|l| l.contains(",fr,")).map(untimed).collect();
    let again = fs::read_to_string(&again).unwrap();
    let again: Vec<String> = again.lines().skip(1).map(untimed).collect();
    assert_eq!(again, fr_rows);
}

#[test]
fn emitted_solution_validates() {
    let dir = TempDir::new().unwrap();
    let inst = generated(dir.path(), 3);
    let sol = dir.path().join("sol.txt");
    let out = fpscp(&[
        "decode",
        "--instance",
        &inst,
        "--order",
        "5,4,3,2,1,0",
        "--emit-solution",
        sol.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let check = |extra: &[&str]| {
        let mut args = vec![
            "validate",
            "--instance",
            &inst,
            "--solution",
            sol.to_str().unwrap(),
        ];
        args.extend_from_slice(extra);
        fpscp(&args)
    };
    let ok = check(&[]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(value(&stdout(&ok), "valid"), Some("true"));
    assert_eq!(check(&["--order", "5,4,3,2,1,0"]).status.code(), Some(0));
    assert_eq!(check(&["--order", "0,1,2,3,4,5"]).status.code(), Some(1));

    let text = fs::read_to_string(&sol).unwrap();
    let tampered: String = text
        .lines()
        .map(|l| {
            if l.starts_with("distance=") {
                "distance=0.5".to_string()
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    fs::write(&sol, tampered).unwrap();
    let bad = check(&[]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(value(&stdout(&bad), "valid"), Some("false"));
}

#[test]
fn permutation_files_feed_decode() {
    let dir = TempDir::new().unwrap();
    let inst = generated(dir.path(), 4);
    let perms = dir.path().join("perms.txt");
    let out = fpscp(&[
        "gen-perms",
        "--instance",
        &inst,
        "--perms",
        "uniform:count=7:seed=3",
        "--out",
        perms.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<String> = fs::read_to_string(&perms)
        .unwrap()
        .lines()
        .map(str::to_string)
        .collect();
    assert_eq!(lines.len(), 7);
    let order = lines[2].split_whitespace().collect::<Vec<_>>().join(",");
    let by_file = fpscp(&[
        "split",
        "--instance",
        &inst,
        "--perm",
        perms.to_str().unwrap(),
        "--index",
        "2",
    ]);
    let by_order = fpscp(&["split", "--instance", &inst, "--order", &order]);
    assert_eq!(by_file.status.code(), Some(0));
    assert_eq!(stdout(&by_file), stdout(&by_order));
    let routes: usize = value(&stdout(&by_file), "routes").unwrap().parse().unwrap();
    assert_eq!(
        stdout(&by_file)
            .lines()
            .filter(|l| l.starts_with("route="))
            .count(),
        routes
    );
    let stdout_perms = fpscp(&[
        "gen-perms",
        "--instance",
        &inst,
        "--perms",
        "uniform:count=7",
        "--seed",
        "3",
    ]);
    assert_eq!(stdout(&stdout_perms).lines().collect::<Vec<_>>(), lines);
}

#[test]
fn sweep_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("sweep.cfg");
    fs::write(
        &config,
        "param = customer_count\ngrid = 5, 10\ninstances = 2\nperms = 3\n",
    )
    .unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = fpscp(&[
            "--config",
            config.to_str().unwrap(),
            "--threads",
            "1",
            "sweep",
            "--seed",
            "8",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(
            stdout(&out).lines().filter(|l| l.starts_with("value=")).count(),
            2
        );
        fs::read(path).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 3);
    let bad = fpscp(&[
        "sweep",
        "--grid",
        "-1",
        "--out",
        dir.path().join("c.csv").to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn timing_table() {
    let dir = TempDir::new().unwrap();
    let inst = generated(dir.path(), 6);
    let csv = dir.path().join("time.csv");
    let out = fpscp(&[
        "time",
        "--instances",
        &inst,
        "--perms",
        "knn:count=3",
        "--methods",
        "fp,ss",
        "--repetitions",
        "2",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert_eq!(value(&stdout(&out), "samples"), Some("6"));
}
