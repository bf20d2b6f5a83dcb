use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_strictstable"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn domain_of_delta_zero_is_member() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "d.toml", "flavor = \"raw\"\ngamma = [0.0, 0.0]\n");
    let o = run(&["domain", &f, "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("member = true"), "{text}");
    assert!(text.contains("# alpha: 1"));
}

#[test]
fn push_one_atom() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "t.toml",
        "alpha = 0.5\nflavor = \"drift\"\ngamma = [0.0]\n[[atoms]]\npoint = [1.0]\nmass = 1.0\n",
    );
    let o = run(&["push", &f]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let law = strictstable::doc::parse_law(&text).unwrap();
    assert!((law.spectral().weight_at(&[1.0]) - 1.253_314_137_315_5).abs() < 1e-12);
    assert_eq!(law.tau(), &[0.0]);
    assert!(text.contains("[certificate]"));
}

#[test]
fn single_atom_is_not_representable() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "s.toml",
        "alpha = 1.5\n[[spectral]]\ndirection = [0.0, 1.0]\nweight = 1.0\n",
    );
    let o = run(&["representable", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not representable"));

    let f = write(
        &dir,
        "tri.toml",
        "alpha = 1.5\n[[spectral]]\ndirection = [0.0, 1.0]\nweight = 1.0\n\
         [[spectral]]\ndirection = [-0.8660254037844386, -0.5]\nweight = 1.0\n\
         [[spectral]]\ndirection = [0.8660254037844386, -0.5]\nweight = 1.0\n",
    );
    let o = run(&["representable", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[preimage]"));
}

#[test]
fn malformed_input_exits_two_with_location() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "bad.toml",
        "flavor = \"drift\"\ngamma = [0.0]\n[[atoms]]\npoint = [1.0]\nmass = \"x\"\n",
    );
    let o = run(&["push", &f, "--alpha", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 5"), "{err}");

    let o = run(&["push", "/nonexistent/file.toml"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

fn sample_to(dir: &TempDir, out: &Path, extra: &[&str]) -> Output {
    let spec = write(
        dir,
        "spec.toml",
        "alpha = 0.5\ntheta = 1.0\n[[jumps]]\npoint = [1.0]\nprob = 1.0\n",
    );
    let mut args = vec![
        "sample",
        spec.as_str(),
        "--n",
        "50",
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn sampling_is_byte_reproducible() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(
        sample_to(&dir, &a, &["--seed", "11"]).status.code(),
        Some(0)
    );
    assert_eq!(
        sample_to(&dir, &b, &["--seed", "11"]).status.code(),
        Some(0)
    );
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    let text = String::from_utf8(ta).unwrap();
    assert!(text.contains("# seed: 11"));
    assert!(text.contains("x1,terms_used,tail_diagnostic"));
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 50);
    assert!(rows
        .iter()
        .all(|r| r.split(',').next().unwrap().parse::<f64>().unwrap() > 0.0));
}

#[test]
fn path_integral_mode() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("cp.csv");
    let o = sample_to(&dir, &out, &["--T", "5", "--eps", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# T: 5") && text.contains("# eps: 0.5"));
}

#[test]
fn verify_and_pair() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "c.toml",
        "alpha = 1.0\ntheta = 0.6366197723675814\nmax_terms = 2000\n[[jumps]]\npoint = [1.0]\nprob = 0.5\n[[jumps]]\npoint = [-1.0]\nprob = 0.5\n",
    );
    let csv = dir.path().join("cf.csv");
    let o = run(&[
        "verify",
        &spec,
        "--n",
        "4000",
        "--grid",
        "21",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("verdict: pass"));
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().filter(|l| !l.starts_with('#')).count(), 22);

    // a tolerance no Monte Carlo run can meet
    let o = run(&["verify", &spec, "--n", "500", "--tolerance", "1e-9"]);
    assert_eq!(o.status.code(), Some(1));

    let lam = write(
        &dir,
        "l.toml",
        "[[spectral]]\ndirection = [1.0]\nweight = 1.0\n[[spectral]]\ndirection = [-1.0]\nweight = 1.0\n",
    );
    let o = run(&["pair", &lam]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("identical_images = true"));
}

#[test]
fn preimage_of_unit_law_with_shift() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "u.toml",
        "alpha = 1.0\ntau = [0.6931471805599453]\n[[spectral]]\ndirection = [1.0]\nweight = 1.5707963267948966\n[[spectral]]\ndirection = [-1.0]\nweight = 1.5707963267948966\n",
    );
    let o = run(&["preimage", &f]);
    assert_eq!(o.status.code(), Some(0));
    let t = strictstable::doc::parse_triplet(&stdout(&o))
        .unwrap()
        .triplet;
    let back = strictstable::pushforward::pushforward_law(1.0, &t).unwrap();
    assert!((back.tau()[0] - 2f64.ln()).abs() < 1e-12);
}
