use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use maniplex::catalogue::chiral_44_12;
use maniplex::voltage::{assemble_voltage_2in, TwoInGenerators};
use maniplex::Perm;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_maniplex"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn setup() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["mn", "--rank", "3", "-o", "m3.mnx"]);
    assert!(o.status.success(), "{}", stderr(&o));
    fs::write(
        dir.path().join("chiral.mnx"),
        chiral_44_12().to_mnx_string(),
    )
    .unwrap();
    let gens = TwoInGenerators {
        rank: 3,
        set: vec![],
        z: Perm::from_images(vec![1, 2, 3, 4, 5, 0]).unwrap(),
        z_prime: None,
        y: vec![Perm::from_images(vec![0, 5, 4, 3, 2, 1]).unwrap()],
    };
    let (zeta, _) = assemble_voltage_2in(&gens).unwrap();
    fs::write(dir.path().join("hex.vlt"), zeta.to_vlt_string()).unwrap();
    dir
}

#[test]
fn mn_writes_128_flags() {
    let dir = setup();
    let text = fs::read_to_string(dir.path().join("m3.mnx")).unwrap();
    assert!(text.starts_with("maniplex rank=3 flags=128\n"));
}

#[test]
fn classify_m3_is_regular() {
    let dir = setup();
    let o = run(dir.path(), &["classify", "m3.mnx"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "k=1 type=regular\n");
    let o = run(dir.path(), &["classify", "chiral.mnx"]);
    assert_eq!(stdout(&o), "k=2 type=chiral:2_{}^3\n");
}

#[test]
fn construct_emits_a_certified_certificate() {
    let dir = setup();
    let o = run(
        dir.path(),
        &[
            "construct",
            "--rank",
            "4",
            "--set",
            "2",
            "--emit",
            "cert.txt",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let cert = fs::read_to_string(dir.path().join("cert.txt")).unwrap();
    assert!(cert.lines().any(|l| l == "verdict=certified"), "{cert}");
    assert!(cert.lines().any(|l| l == "k=129"));
    assert_eq!(stdout(&o), cert);
}

#[test]
fn construct_emits_a_materialised_maniplex() {
    let dir = setup();
    let o = run(
        dir.path(),
        &[
            "construct",
            "--rank",
            "4",
            "--set",
            "0,1",
            "--emit",
            "c.mnx",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let o = run(dir.path(), &["classify", "c.mnx"]);
    assert_eq!(stdout(&o), "k=2 type=2_{0,1}^4\n");
    let o = run(
        dir.path(),
        &["construct", "--rank", "4", "--set", "2", "--emit", "c.mnx"],
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn simple_reports() {
    let dir = setup();
    assert_eq!(stdout(&run(dir.path(), &["schlafli", "m3.mnx"])), "{4,4}\n");
    assert_eq!(
        stdout(&run(dir.path(), &["orbits", "chiral.mnx"])),
        "k=2\naut=20\nsizes=20,20\n"
    );
    assert_eq!(stdout(&run(dir.path(), &["validate", "m3.mnx"])), "valid\n");
    assert_eq!(
        stdout(&run(dir.path(), &["eta", "--check", "m3.mnx"])),
        "pass\n"
    );
    let s0 = stdout(&run(dir.path(), &["find-s0", "m3.mnx"]));
    assert!(s0.trim().split(',').all(|t| t.parse::<usize>().is_ok()));
    let wb = stdout(&run(dir.path(), &["bicolour", "--set", "0,2", "m3.mnx"]));
    assert_eq!(wb.trim().len(), 128);
    assert!(wb.starts_with('W'));
}

#[test]
fn triangle_has_no_zero_colouring() {
    let dir = setup();
    let tri = "maniplex rank=2 flags=6\n1 0 3 2 5 4\n5 2 1 4 3 0\n";
    fs::write(dir.path().join("tri.mnx"), tri).unwrap();
    assert_eq!(
        stdout(&run(dir.path(), &["bicolour", "--set", "0", "tri.mnx"])),
        "none\n"
    );
}

#[test]
fn transforms_round_trip_through_files() {
    let dir = setup();
    let p = dir.path();
    assert!(run(p, &["dual", "m3.mnx", "-o", "d.mnx"]).status.success());
    assert!(run(p, &["dual", "d.mnx", "-o", "dd.mnx"]).status.success());
    assert_eq!(
        fs::read(p.join("dd.mnx")).unwrap(),
        fs::read(p.join("m3.mnx")).unwrap()
    );

    assert!(run(p, &["mn", "--rank", "2", "-o", "m2.mnx"])
        .status
        .success());
    assert!(run(p, &["two-hat", "m2.mnx", "-o", "h.mnx"])
        .status
        .success());
    assert_eq!(
        fs::read(p.join("h.mnx")).unwrap(),
        fs::read(p.join("m3.mnx")).unwrap()
    );

    let o = run(p, &["trivial-ext", "m2.mnx"]);
    assert!(stdout(&o).starts_with("maniplex rank=3 flags=16\n"));

    let o = run(p, &["stg", "chiral.mnx"]);
    assert!(stdout(&o).starts_with("pregraph vertices=2 darts=6 rank=3\n"));
    fs::write(p.join("t.pgr"), stdout(&o)).unwrap();
    assert_eq!(stdout(&run(p, &["validate", "t.pgr"])), "valid\n");

    let o = run(p, &["cover", "hex.vlt", "-o", "cov.mnx"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&run(p, &["classify", "cov.mnx"])),
        "k=1 type=regular\n"
    );
    assert_eq!(stdout(&run(p, &["schlafli", "cov.mnx"])), "{6,2}\n");
}

#[test]
fn exit_codes() {
    let dir = setup();
    let p = dir.path();
    assert_eq!(run(p, &["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(p, &["construct", "--rank"]).status.code(), Some(2));
    assert_eq!(
        run(p, &["--flag-cap", "0", "mn", "--rank", "2"])
            .status
            .code(),
        Some(2)
    );

    let o = run(p, &["mn", "--rank", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cap exceeded: flags"), "{}", stderr(&o));
    let o = run(p, &["--flag-cap", "100", "two-hat", "m3.mnx"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cap exceeded"));

    assert_eq!(
        run(p, &["construct", "--rank", "4", "--set", "0,1,2,3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(p, &["classify", "missing.mnx"]).status.code(), Some(1));
    fs::write(p.join("bad.mnx"), "maniplex rank=1 flags=4\n1 0 2 3\n").unwrap();
    let o = run(p, &["classify", "bad.mnx"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("fixed point"));
    assert!(run(p, &["--help"]).status.success());
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let dir = setup();
    let p = dir.path();
    let commands: &[&[&str]] = &[
        &["validate", "m3.mnx"],
        &["stg", "chiral.mnx"],
        &["orbits", "m3.mnx"],
        &["classify", "chiral.mnx"],
        &["dual", "chiral.mnx"],
        &["schlafli", "m3.mnx"],
        &["bicolour", "--set", "1", "m3.mnx"],
        &["two-hat", "chiral.mnx"],
        &["trivial-ext", "chiral.mnx"],
        &["mn", "--rank", "3"],
        &["find-s0", "m3.mnx"],
        &["eta", "m3.mnx"],
        &["cover", "hex.vlt"],
        &["construct", "--rank", "4", "--set", "1,2"],
        &["construct", "--rank", "3", "--set", "0"],
        &["construct", "--rank", "4", "--set", "2,3"],
    ];
    for args in commands {
        let a = run(p, args);
        assert!(a.status.success(), "{args:?}: {}", stderr(&a));
        let b = run(p, args);
        let mut one = vec!["--threads", "1"];
        one.extend_from_slice(args);
        let c = run(p, &one);
        let mut four = vec!["--threads", "4"];
        four.extend_from_slice(args);
        let d = run(p, &four);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, c.stdout, "{args:?} with one thread");
        assert_eq!(a.stdout, d.stdout, "{args:?} with four threads");
    }
}
