//! End-to-end tests driving the binary over generated JSON fixtures.

use std::path::PathBuf;
use std::process::{Command, Output};

use cpstar::backend::Tolerance;
use cpstar::cp::is_cpstar_morphism;
use cpstar::frobenius::FrobeniusAlgebra;
use cpstar::groupoid::{enumerate_groupoids, groupoid_to_algebra, GroupTable, Groupoid};
use cpstar::json::{to_pretty, AlgebraDoc, CpmPerDoc, PerDoc, RelationDoc, MatrixDoc};
use cpstar::rel::{FinSet, Rel, Relation};
use cpstar::split::{f_image_per, unital_non_image_object, Per};
use cpstar::{FHilb64, Mat64};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cpstar"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 output")
}

/// A throwaway directory of fixture files, removed on drop.
struct Fixtures {
    dir: PathBuf,
}

impl Fixtures {
    fn new(stem: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("cpstar-cli-{stem}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).expect("fixture dir");
        Self { dir }
    }

    fn write(&self, name: &str, text: &str) -> String {
        let path = self.dir.join(name);
        std::fs::write(&path, text).expect("fixture write");
        path.to_str().expect("utf-8 path").to_string()
    }
}

impl Drop for Fixtures {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.dir);
    }
}

fn z2_algebra_doc() -> AlgebraDoc {
    let tol = Tolerance::default();
    let g = Groupoid::from_group(&GroupTable::cyclic(2));
    AlgebraDoc::of_rel(&groupoid_to_algebra::<Rel>(&g, &tol).unwrap())
}

#[test]
fn check_frobenius_distinguishes_pass_fail_and_unreadable() {
    let fx = Fixtures::new("frobenius");
    let good = fx.write("z2.json", &to_pretty(&z2_algebra_doc()));
    let out = run(&["check-frobenius", &good]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("PASS"));

    let mut doc = z2_algebra_doc();
    let AlgebraDoc::Rel { mult, .. } = &mut doc else { unreachable!() };
    mult.pairs.pop();
    let broken = fx.write("broken.json", &to_pretty(&doc));
    let out = run(&["check-frobenius", &broken]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL"));

    let garbled = fx.write("garbled.json", "{not json");
    let out = run(&["check-frobenius", &garbled]);
    assert_eq!(code(&out), 2);

    let out = run(&["check-frobenius", "/nonexistent/cpstar-fixture.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn json_flag_yields_a_machine_readable_report() {
    let fx = Fixtures::new("jsonout");
    let good = fx.write("z2.json", &to_pretty(&z2_algebra_doc()));
    let out = run(&["--json", "check-frobenius", &good]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(report["command"], "check-frobenius");
    assert_eq!(report["pass"], true);
    let details = report["details"].as_array().expect("details array");
    assert!(!details.is_empty());
    assert!(details.iter().all(|d| d["pass"] == true));
}

#[test]
fn cp_check_accepts_identity_and_rejects_a_non_cp_relation() {
    let tol = Tolerance::default();
    let fx = Fixtures::new("cpcheck");
    let alg = fx.write("z2.json", &to_pretty(&z2_algebra_doc()));

    let carrier = FinSet::of_size(2);
    let id = Relation::identity(&carrier);
    let id_path = fx.write("id.json", &to_pretty(&RelationDoc::of(&id)));
    let out = run(&["cp-check", &id_path, &alg, &alg]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    // the partial map sending only the non-identity element to the identity
    let f = Relation::new(carrier.clone(), carrier.clone(), [(1, 0)]).unwrap();
    let z2 = z2_algebra_doc().to_rel().unwrap();
    assert!(!is_cpstar_morphism::<Rel>(&f, &z2, &z2, &tol).unwrap());
    let f_path = fx.write("partial.json", &to_pretty(&RelationDoc::of(&f)));
    let out = run(&["cp-check", &f_path, &alg, &alg]);
    assert_eq!(code(&out), 1);

    let pants = FrobeniusAlgebra::<FHilb64>::pair_of_pants(2, &tol).unwrap();
    let pants_path = fx.write("pants.json", &to_pretty(&AlgebraDoc::of_fhilb(&pants)));
    let out = run(&["cp-check", &id_path, &alg, &pants_path]);
    assert_eq!(code(&out), 2, "mismatched backends are an input error");
}

#[test]
fn functor_f_emits_the_doubled_per_of_a_group_algebra() {
    let fx = Fixtures::new("functorf");
    let good = fx.write("z2.json", &to_pretty(&z2_algebra_doc()));
    let out = run(&["--json", "functor", "f", &good]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["pass"], true);
    let per: CpmPerDoc = serde_json::from_value(report["output"].clone()).unwrap();
    assert_eq!(per.x_size, 2);
    assert_eq!(per.base, 4);
    let expected = CpmPerDoc::of(&f_image_per(&Groupoid::from_group(&GroupTable::cyclic(2))));
    assert_eq!(per.pairs, expected.pairs);
}

#[test]
fn functor_g_builds_the_range_algebra_and_enforces_unitality() {
    let fx = Fixtures::new("functorg");
    let diag = Mat64::diagonal(&[1.0, 0.0, 0.0, 1.0]);
    let diag_path = fx.write("diag.json", &to_pretty(&MatrixDoc::of(&diag)));
    let out = run(&["--json", "functor", "g", &diag_path]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let alg: AlgebraDoc = serde_json::from_value(report["output"].clone()).unwrap();
    assert_eq!(alg.backend(), "fhilb");
    assert_eq!(*alg.to_fhilb().unwrap().carrier(), 2);

    let nonunital = Mat64::diagonal(&[1.0, 0.0, 0.0, 0.0]);
    let bad_path = fx.write("nonunital.json", &to_pretty(&MatrixDoc::of(&nonunital)));
    let out = run(&["functor", "g", &bad_path]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("unital"));
}

#[test]
fn functor_roundtrip_verifies_both_composites() {
    let fx = Fixtures::new("roundtrip");
    let diag = Mat64::diagonal(&[1.0, 0.0, 0.0, 1.0]);
    let diag_path = fx.write("diag.json", &to_pretty(&MatrixDoc::of(&diag)));
    let out = run(&["functor", "roundtrip", &diag_path]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("witnesses compose to the input projection"));
    assert!(text.contains("witnesses compose to the functor image"));
}

#[test]
fn tolerance_flag_threads_into_matrix_checks() {
    let fx = Fixtures::new("tolflag");
    let eps = 1e-7;
    let near = Mat64::diagonal(&[1.0, eps, eps, 1.0]);
    let path = fx.write("near.json", &to_pretty(&MatrixDoc::of(&near)));
    let out = run(&["functor", "g", &path]);
    assert_eq!(code(&out), 1, "not idempotent at the default tolerance");
    let out = run(&["--tol", "1e-4", "functor", "g", &path]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn split_search_constructs_splittings_and_finds_presentations() {
    let fx = Fixtures::new("split");
    let per = Per::new(5, [(0, 0), (1, 1), (2, 2), (1, 2), (2, 1)]).unwrap();
    let per_path = fx.write("per.json", &to_pretty(&PerDoc::of(&per)));
    let out = run(&["split-search", &per_path]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("quotient_size"));

    let discrete = Per::new(5, [(0, 0), (1, 1), (2, 2), (3, 3)]).unwrap();
    let discrete_path = fx.write("discrete.json", &to_pretty(&PerDoc::of(&discrete)));
    let out = run(&["split-search", &per_path, &discrete_path]);
    assert_eq!(code(&out), 1, "quotient sizes 2 vs 4");
    let out = run(&["split-search", &discrete_path, &discrete_path]);
    assert_eq!(code(&out), 0);

    let image = f_image_per(&Groupoid::from_group(&GroupTable::cyclic(2)));
    let image_path = fx.write("image.json", &to_pretty(&CpmPerDoc::of(&image)));
    let out = run(&["split-search", &image_path]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("presented by a groupoid"));

    let outside = unital_non_image_object();
    let outside_path = fx.write("outside.json", &to_pretty(&CpmPerDoc::of(&outside)));
    let out = run(&["split-search", &outside_path]);
    assert_eq!(code(&out), 1);

    let out = run(&["split-search", &image_path, &per_path]);
    assert_eq!(code(&out), 2, "mixing doubled and plain PERs is an input error");
}

#[test]
fn biproduct_sums_algebras_over_one_backend_only() {
    let tol = Tolerance::default();
    let fx = Fixtures::new("biproduct");
    let rel = fx.write("z2.json", &to_pretty(&z2_algebra_doc()));
    let out = run(&["--json", "biproduct", &rel, &rel]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let sum: AlgebraDoc = serde_json::from_value(report["output"].clone()).unwrap();
    assert_eq!(sum.to_rel().unwrap().carrier().size(), 4);

    let pants = FrobeniusAlgebra::<FHilb64>::pair_of_pants(2, &tol).unwrap();
    let mat = fx.write("pants.json", &to_pretty(&AlgebraDoc::of_fhilb(&pants)));
    let out = run(&["--json", "biproduct", &mat, &mat]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let sum: AlgebraDoc = serde_json::from_value(report["output"].clone()).unwrap();
    assert_eq!(*sum.to_fhilb().unwrap().carrier(), 8);

    let out = run(&["biproduct", &rel, &mat]);
    assert_eq!(code(&out), 2);
}

#[test]
fn counterexamples_reproduce_from_built_in_data() {
    let out = run(&["counterexample", "rel-nosplit"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("no splitting among"));

    let out = run(&["counterexample", "rel-unital-image"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("outside the functor image"));

    let out = run(&["counterexample", "fhilb-noncontractive"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("1.20711"));

    let out = run(&["counterexample", "linfty-nonsplit"]);
    assert_eq!(code(&out), 2, "unknown counterexample name");
}

#[test]
fn enumerate_groupoids_reports_the_census() {
    let out = run(&["--json", "enumerate-groupoids", "3"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let listed = report["output"].as_array().expect("groupoid array").len();
    assert_eq!(listed, enumerate_groupoids(3).unwrap().len());

    let out = run(&["enumerate-groupoids", "12"]);
    assert_eq!(code(&out), 2, "beyond the built-in group tables");
}
