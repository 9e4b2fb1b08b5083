use std::fs;
use std::process::{Command, Output};

fn divdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divdiv"))
        .args(args)
        .output()
        .expect("running divdiv")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn describe_element_prints_counts() {
    let o = divdiv(&["describe-element", "--l", "3", "--k", "3", "--samples", "3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("dimension: 30"), "{s}");
    assert!(s.contains("DOF list"));
}

#[test]
fn verify_complexes_passes_for_k3() {
    let o = divdiv(&["verify-complexes", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all checks passed"));
}

#[test]
fn solve_prints_errors_and_rates() {
    let o = divdiv(&["solve", "--mesh", "square:2", "--mesh", "square:4", "--postprocess"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("rate_sigma_L2"), "{s}");
    let rates: Vec<&str> = s.lines().skip_while(|l| !l.starts_with("h_coarse")).collect();
    assert_eq!(rates.len(), 2, "{s}");
}

#[test]
fn hybrid_comparison_agrees_with_mixed() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = divdiv(&["solve", "--mesh", "square:4", "--hybrid", "--compare", "--output", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let errors = fs::read_to_string(dir.path().join("errors.csv")).unwrap();
    let mut lines = errors.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "hybrid_max_dev").unwrap();
    for line in lines {
        let dev: f64 = line.split(',').nth(col).unwrap().parse().unwrap();
        assert!(dev <= 1e-8, "{dev}");
    }
}

#[test]
fn study_writes_outputs_and_is_deterministic() {
    let cfg_dir = tempfile::tempdir().unwrap();
    let cfg = cfg_dir.path().join("study.cfg");
    fs::write(&cfg, "# small study\nl = 3\nk = 3\nlevels = 2, 4, 8\npostprocess = true\n").unwrap();
    let mut csvs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let set = format!("output={}", dir.path().display());
        let o = divdiv(&["--threads", "1", "study", cfg.to_str().unwrap(), "--set", &set]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let rates = fs::read_to_string(dir.path().join("rates.csv")).unwrap();
        assert_eq!(rates.lines().count(), 3);
        let manifest = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
        assert!(manifest.contains("all enabled checks passed"));
        csvs.push(fs::read_to_string(dir.path().join("errors.csv")).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(divdiv(&["solve", "--mesh", "nowhere.msh"]).status.code(), Some(2));
    assert_eq!(divdiv(&["verify-complexes", "--k", "5..3"]).status.code(), Some(2));
    assert_eq!(divdiv(&["study", "--set", "k=1"]).status.code(), Some(2));
    assert_eq!(divdiv(&["bogus"]).status.code(), Some(2));
}
