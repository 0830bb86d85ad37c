//! Command-line checks, functors and searches over the JSON formats.
//!
//! Every subcommand reads its inputs from JSON files, runs the relevant
//! verification or construction, and prints a report: one line per check in
//! human-readable mode, or a single JSON object with `--json`. Exit codes
//! distinguish outcomes: 0 when every check passes, 1 when the inputs parse
//! but a check or search fails, 2 when an input cannot be read at all.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use cpstar::biproduct::oplus_algebra;
use cpstar::cp::{
    is_cpstar_morphism, is_cpstar_rel_groupoid, noncontractive_projection, split_morphism_check,
    verifies_dagger_splitting,
};
use cpstar::fhilb::{choi, hermitian_eig, operator_norm, Matrix};
use cpstar::frobenius::{self, FrobeniusAlgebra};
use cpstar::functor::{functor_f_object, functor_g_fhilb, round_trip_witnesses};
use cpstar::groupoid::{
    enumerate_groupoids, groupoid_to_algebra, nine_morphism_groupoid, non_splittable_idempotent,
};
use cpstar::json::{
    from_str, AlgebraDoc, CpmPerDoc, GroupoidDoc, MatrixDoc, MorphismDoc, PerDoc, RelationDoc,
};
use cpstar::rel::{Rel, Relation};
use cpstar::split::{
    cpm_per_check, f_image_search, split_iso_cpm_rel, split_iso_rel, verify_no_dagger_splitting,
    CpmPer, Per,
};
use cpstar::{Error, FHilb64, Tolerance};

/// Verifier for Frobenius algebras, completely positive maps, dagger
/// idempotent splittings and biproducts over finite relations and matrices.
#[derive(Parser)]
#[command(name = "cpstar", version, about)]
struct Cli {
    /// Emit the report as a single JSON object.
    #[arg(long, global = true)]
    json: bool,

    /// Comparison tolerance for the matrix backend (relations are exact).
    #[arg(long, global = true, default_value_t = Tolerance::DEFAULT_EPS)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the dagger special Frobenius laws for an algebra document.
    CheckFrobenius {
        /// Algebra JSON file.
        path: PathBuf,
    },
    /// Decide whether a morphism between two algebras is completely positive
    /// with respect to their actions.
    CpCheck {
        /// Morphism JSON file (relation or matrix).
        morphism: PathBuf,
        /// Source algebra JSON file.
        src: PathBuf,
        /// Target algebra JSON file.
        dst: PathBuf,
    },
    /// Apply the splitting functor, its inverse on ranges, or both in turn.
    Functor {
        #[command(subcommand)]
        which: FunctorCommand,
    },
    /// Construct a canonical splitting, search for a presenting groupoid, or
    /// test two split objects for isomorphism.
    SplitSearch {
        /// PER or doubled-PER JSON file.
        first: PathBuf,
        /// Optional second object of the same kind: test for isomorphism.
        second: Option<PathBuf>,
    },
    /// Form the direct sum of two algebras over the same backend.
    Biproduct {
        /// Left summand algebra JSON file.
        left: PathBuf,
        /// Right summand algebra JSON file.
        right: PathBuf,
    },
    /// Reproduce and verify a named counterexample from built-in data.
    Counterexample {
        #[arg(value_enum)]
        name: CounterexampleName,
    },
    /// List all groupoids with the given number of morphisms, up to
    /// isomorphism.
    EnumerateGroupoids {
        /// Total number of morphisms.
        morphisms: usize,
    },
}

#[derive(Subcommand)]
enum FunctorCommand {
    /// Image of an algebra under the splitting functor: its unital dagger
    /// idempotent, as a doubled PER (relations) or projection matrix.
    #[command(alias = "F")]
    F {
        /// Algebra JSON file.
        path: PathBuf,
    },
    /// Algebra carried by the range of a unital CP projection matrix.
    #[command(alias = "G")]
    G {
        /// Projection matrix JSON file.
        path: PathBuf,
    },
    /// Verify that the two functors invert each other on a projection.
    Roundtrip {
        /// Projection matrix JSON file.
        path: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CounterexampleName {
    /// A dagger idempotent on a relational groupoid algebra that splits
    /// through no groupoid.
    RelNosplit,
    /// A unital split object outside the image of the splitting functor.
    RelUnitalImage,
    /// A CP projection on 2×2 matrices with operator norm above one.
    FhilbNoncontractive,
}

/// The outcome of one subcommand: named checks plus an optional output
/// document (the constructed algebra, projection, witness, …).
#[derive(Serialize)]
struct Report {
    command: String,
    pass: bool,
    details: Vec<Detail>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<Value>,
}

#[derive(Serialize)]
struct Detail {
    check: String,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

struct ReportBuilder {
    command: String,
    details: Vec<Detail>,
    output: Option<Value>,
}

impl ReportBuilder {
    fn new(command: &str) -> Self {
        Self { command: command.to_string(), details: Vec::new(), output: None }
    }

    fn flag(&mut self, check: &str, pass: bool) {
        self.details.push(Detail { check: check.into(), pass, residual: None, note: None });
    }

    fn residual(&mut self, check: &str, pass: bool, residual: f64) {
        self.details.push(Detail {
            check: check.into(),
            pass,
            residual: Some(residual),
            note: None,
        });
    }

    fn note(&mut self, check: &str, pass: bool, note: String) {
        self.details.push(Detail { check: check.into(), pass, residual: None, note: Some(note) });
    }

    /// Fold in the items of a structural verification report.
    fn merge(&mut self, report: &frobenius::Report) {
        for item in &report.items {
            self.residual(item.name, item.passed, item.residual);
        }
    }

    fn output(&mut self, value: Value) {
        self.output = Some(value);
    }

    fn finish(self) -> Report {
        let pass = self.details.iter().all(|d| d.pass);
        Report { command: self.command, pass, details: self.details, output: self.output }
    }
}

fn emit(report: &Report, as_json: bool) {
    use std::fmt::Write as _;
    let mut text = String::new();
    if as_json {
        text = serde_json::to_string_pretty(report).expect("report serialises");
        text.push('\n');
    } else {
        let verdict = if report.pass { "PASS" } else { "FAIL" };
        writeln!(text, "{}: {verdict}", report.command).unwrap();
        for d in &report.details {
            let mark = if d.pass { "ok" } else { "FAIL" };
            write!(text, "  [{mark}] {}", d.check).unwrap();
            if let Some(r) = d.residual {
                write!(text, " (residual {r:.3e})").unwrap();
            }
            if let Some(n) = &d.note {
                write!(text, " — {n}").unwrap();
            }
            text.push('\n');
        }
        if let Some(out) = &report.output {
            writeln!(text, "{}", serde_json::to_string_pretty(out).expect("output serialises"))
                .unwrap();
        }
    }
    // tolerate a consumer that closes the pipe early (e.g. `cpstar … | head`)
    use std::io::Write as _;
    let _ = std::io::stdout().write_all(text.as_bytes());
}

/// Errors that report a failed mathematical precondition rather than an
/// unreadable input; these become a failing report (exit 1), not exit 2.
fn is_semantic(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidAlgebra(_)
            | Error::NotNormalisable(_)
            | Error::NotIdempotent(_)
            | Error::NotUnital(_)
            | Error::NotCompletelyPositive(_)
            | Error::RankAmbiguity(_)
            | Error::Mismatch(_)
    )
}

fn read_doc<T: DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Json(format!("{}: {e}", path.display())))?;
    from_str(&text)
}

fn to_value<T: Serialize>(doc: &T) -> Value {
    serde_json::to_value(doc).expect("document serialises")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !(cli.tol >= 0.0) {
        eprintln!("error: tolerance must be a non-negative number");
        return ExitCode::from(2);
    }
    let tol = Tolerance::new(cli.tol);
    match run(&cli.command, &tol) {
        Ok(report) => {
            emit(&report, cli.json);
            ExitCode::from(if report.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: &Command, tol: &Tolerance) -> Result<Report, Error> {
    match command {
        Command::CheckFrobenius { path } => cmd_check_frobenius(path, tol),
        Command::CpCheck { morphism, src, dst } => cmd_cp_check(morphism, src, dst, tol),
        Command::Functor { which } => match which {
            FunctorCommand::F { path } => cmd_functor_f(path, tol),
            FunctorCommand::G { path } => cmd_functor_g(path, tol),
            FunctorCommand::Roundtrip { path } => cmd_functor_roundtrip(path, tol),
        },
        Command::SplitSearch { first, second } => cmd_split_search(first, second.as_deref()),
        Command::Biproduct { left, right } => cmd_biproduct(left, right, tol),
        Command::Counterexample { name } => cmd_counterexample(*name, tol),
        Command::EnumerateGroupoids { morphisms } => cmd_enumerate_groupoids(*morphisms),
    }
}

fn cmd_check_frobenius(path: &Path, tol: &Tolerance) -> Result<Report, Error> {
    let doc: AlgebraDoc = read_doc(path)?;
    let mut rb = ReportBuilder::new("check-frobenius");
    let core = match &doc {
        AlgebraDoc::Rel { .. } => doc.to_rel()?.check(tol),
        AlgebraDoc::Fhilb { .. } => doc.to_fhilb()?.check(tol),
    };
    rb.merge(&core);
    Ok(rb.finish())
}

fn cmd_cp_check(morphism: &Path, src: &Path, dst: &Path, tol: &Tolerance) -> Result<Report, Error> {
    let m: MorphismDoc = read_doc(morphism)?;
    let a: AlgebraDoc = read_doc(src)?;
    let b: AlgebraDoc = read_doc(dst)?;
    let mut rb = ReportBuilder::new("cp-check");
    let ok = match (&a, &b) {
        (AlgebraDoc::Rel { .. }, AlgebraDoc::Rel { .. }) => {
            is_cpstar_morphism::<Rel>(&m.to_relation()?, &a.to_rel()?, &b.to_rel()?, tol)?
        }
        (AlgebraDoc::Fhilb { .. }, AlgebraDoc::Fhilb { .. }) => {
            is_cpstar_morphism::<FHilb64>(&m.to_matrix()?, &a.to_fhilb()?, &b.to_fhilb()?, tol)?
        }
        _ => {
            return Err(Error::Json(format!(
                "mismatched backends: {} source vs {} target",
                a.backend(),
                b.backend()
            )))
        }
    };
    rb.flag("completely positive between the actions", ok);
    Ok(rb.finish())
}

fn cmd_functor_f(path: &Path, tol: &Tolerance) -> Result<Report, Error> {
    let doc: AlgebraDoc = read_doc(path)?;
    let mut rb = ReportBuilder::new("functor-f");
    match &doc {
        AlgebraDoc::Rel { .. } => {
            let alg = doc.to_rel()?;
            let image = match functor_f_object(&alg, tol) {
                Ok(image) => image,
                Err(e) if is_semantic(&e) => {
                    rb.note("precondition", false, e.to_string());
                    return Ok(rb.finish());
                }
                Err(e) => return Err(e),
            };
            let n = alg.carrier().size();
            let per = Per::from_relation(&image.projection)?;
            let q = CpmPer::from_per(n, per)?;
            rb.flag("projection is a doubled per", cpm_per_check(n, q.per().relation()));
            rb.flag("unital", q.has_total_diagonal());
            rb.note("quotient", true, format!("{} classes", q.per().class_count()));
            rb.output(to_value(&CpmPerDoc::of(&q)));
        }
        AlgebraDoc::Fhilb { .. } => {
            let alg = doc.to_fhilb()?;
            let image = match functor_f_object(&alg, tol) {
                Ok(image) => image,
                Err(e) if is_semantic(&e) => {
                    rb.note("precondition", false, e.to_string());
                    return Ok(rb.finish());
                }
                Err(e) => return Err(e),
            };
            let p = &image.projection;
            rb.residual("self-adjoint", true, p.max_diff(&p.dagger()));
            rb.residual("idempotent", true, p.then(p).max_diff(p));
            let rank = p.trace().re;
            rb.note("rank", true, format!("trace {rank:.6}"));
            rb.output(to_value(&MatrixDoc::of(p)));
        }
    }
    Ok(rb.finish())
}

fn cmd_functor_g(path: &Path, tol: &Tolerance) -> Result<Report, Error> {
    let doc: MorphismDoc = read_doc(path)?;
    let p = doc.to_matrix()?;
    let mut rb = ReportBuilder::new("functor-g");
    let range = match functor_g_fhilb(&p, tol) {
        Ok(range) => range,
        Err(e) if is_semantic(&e) => {
            rb.note("precondition", false, e.to_string());
            return Ok(rb.finish());
        }
        Err(e) => return Err(e),
    };
    rb.flag(
        "splits the projection",
        verifies_dagger_splitting::<FHilb64>(&p, &range.isometry.dagger(), tol),
    );
    rb.merge(&range.algebra.check(tol));
    rb.output(to_value(&AlgebraDoc::of_fhilb(&range.algebra)));
    Ok(rb.finish())
}

fn cmd_functor_roundtrip(path: &Path, tol: &Tolerance) -> Result<Report, Error> {
    let doc: MorphismDoc = read_doc(path)?;
    let p = doc.to_matrix()?;
    let mut rb = ReportBuilder::new("functor-roundtrip");
    let trip = match round_trip_witnesses(&p, tol) {
        Ok(trip) => trip,
        Err(e) if is_semantic(&e) => {
            rb.note("precondition", false, e.to_string());
            return Ok(rb.finish());
        }
        Err(e) => return Err(e),
    };
    let q = &trip.image.projection;
    let back_forth = trip.forward.then(&trip.backward);
    let forth_back = trip.backward.then(&trip.forward);
    let eps = tol.eps;
    rb.residual(
        "witnesses compose to the input projection",
        back_forth.max_diff(&p) <= eps,
        back_forth.max_diff(&p),
    );
    rb.residual(
        "witnesses compose to the functor image",
        forth_back.max_diff(q) <= eps,
        forth_back.max_diff(q),
    );
    rb.flag(
        "forward witness is absorbed",
        split_morphism_check::<FHilb64>(&trip.forward, &p, q, tol),
    );
    rb.flag(
        "backward witness is absorbed",
        split_morphism_check::<FHilb64>(&trip.backward, q, &p, tol),
    );
    rb.output(json!({
        "forward": to_value(&MatrixDoc::of(&trip.forward)),
        "backward": to_value(&MatrixDoc::of(&trip.backward)),
    }));
    Ok(rb.finish())
}

/// A doubled PER carries an `x_size`; fall back to a plain PER without one.
enum SplitInput {
    Doubled(CpmPer),
    Plain(Per),
}

fn read_split_input(path: &Path) -> Result<SplitInput, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Json(format!("{}: {e}", path.display())))?;
    if let Ok(doc) = from_str::<CpmPerDoc>(&text) {
        return Ok(SplitInput::Doubled(doc.to_cpm_per()?));
    }
    Ok(SplitInput::Plain(from_str::<PerDoc>(&text)?.to_per()?))
}

fn cmd_split_search(first: &Path, second: Option<&Path>) -> Result<Report, Error> {
    let mut rb = ReportBuilder::new("split-search");
    match (read_split_input(first)?, second) {
        (SplitInput::Plain(per), None) => {
            let s = per.splitting();
            rb.flag(
                "splitting composes to the relation",
                s.then(&s.dagger()) == *per.relation(),
            );
            rb.flag(
                "cosplitting composes to the quotient identity",
                s.dagger().then(&s) == Relation::identity(s.dst()),
            );
            rb.output(json!({
                "quotient_size": per.class_count(),
                "splitting": to_value(&RelationDoc::of(&s)),
            }));
        }
        (SplitInput::Doubled(q), None) => match f_image_search(&q)? {
            Some((g, u)) => {
                rb.note(
                    "presented by a groupoid",
                    true,
                    format!("{} objects, {} morphisms", g.objects(), g.morphisms()),
                );
                rb.output(json!({
                    "groupoid": to_value(&GroupoidDoc::of(&g)),
                    "iso": to_value(&RelationDoc::of(&u)),
                }));
            }
            None => {
                let n = enumerate_groupoids(q.per().class_count())?.len();
                rb.note(
                    "presented by a groupoid",
                    false,
                    format!("none of the {n} candidate groupoids matches"),
                );
            }
        },
        (SplitInput::Plain(a), Some(path)) => {
            let SplitInput::Plain(b) = read_split_input(path)? else {
                return Err(Error::Json("cannot compare a plain PER with a doubled one".into()));
            };
            match split_iso_rel(&a, &b) {
                Some(u) => {
                    rb.note(
                        "isomorphic",
                        true,
                        format!("both quotients have {} classes", a.class_count()),
                    );
                    rb.output(to_value(&RelationDoc::of(&u)));
                }
                None => rb.note(
                    "isomorphic",
                    false,
                    format!(
                        "quotient sizes differ: {} vs {}",
                        a.class_count(),
                        b.class_count()
                    ),
                ),
            }
        }
        (SplitInput::Doubled(a), Some(path)) => {
            let SplitInput::Doubled(b) = read_split_input(path)? else {
                return Err(Error::Json("cannot compare a doubled PER with a plain one".into()));
            };
            match split_iso_cpm_rel(&a, &b) {
                Some(u) => {
                    rb.flag("isomorphic", true);
                    rb.output(to_value(&RelationDoc::of(&u)));
                }
                None => rb.note(
                    "isomorphic",
                    false,
                    "no class bijection respects swaps and diagonals".into(),
                ),
            }
        }
    }
    Ok(rb.finish())
}

fn cmd_biproduct(left: &Path, right: &Path, tol: &Tolerance) -> Result<Report, Error> {
    let a: AlgebraDoc = read_doc(left)?;
    let b: AlgebraDoc = read_doc(right)?;
    let mut rb = ReportBuilder::new("biproduct");
    let outcome = match (&a, &b) {
        (AlgebraDoc::Rel { .. }, AlgebraDoc::Rel { .. }) => {
            sum_and_check::<Rel>(&a.to_rel()?, &b.to_rel()?, tol, &mut rb, AlgebraDoc::of_rel)
        }
        (AlgebraDoc::Fhilb { .. }, AlgebraDoc::Fhilb { .. }) => sum_and_check::<FHilb64>(
            &a.to_fhilb()?,
            &b.to_fhilb()?,
            tol,
            &mut rb,
            AlgebraDoc::of_fhilb,
        ),
        _ => {
            return Err(Error::Json(format!(
                "mismatched backends: {} vs {}",
                a.backend(),
                b.backend()
            )))
        }
    };
    match outcome {
        Ok(()) => {}
        Err(e) if is_semantic(&e) => rb.note("precondition", false, e.to_string()),
        Err(e) => return Err(e),
    }
    Ok(rb.finish())
}

fn sum_and_check<B: cpstar::Backend>(
    a: &FrobeniusAlgebra<B>,
    b: &FrobeniusAlgebra<B>,
    tol: &Tolerance,
    rb: &mut ReportBuilder,
    render: impl Fn(&FrobeniusAlgebra<B>) -> AlgebraDoc,
) -> Result<(), Error> {
    let (na, _) = a.normalised(tol)?;
    let (nb, _) = b.normalised(tol)?;
    let sum = oplus_algebra(&na, &nb, tol)?;
    rb.merge(&sum.check(tol));
    rb.output(to_value(&render(&sum)));
    Ok(())
}

fn cmd_counterexample(name: CounterexampleName, tol: &Tolerance) -> Result<Report, Error> {
    match name {
        CounterexampleName::RelNosplit => counterexample_rel_nosplit(tol),
        CounterexampleName::RelUnitalImage => counterexample_rel_unital_image(),
        CounterexampleName::FhilbNoncontractive => counterexample_fhilb_noncontractive(tol),
    }
}

fn counterexample_rel_nosplit(tol: &Tolerance) -> Result<Report, Error> {
    let mut rb = ReportBuilder::new("counterexample rel-nosplit");
    let g = nine_morphism_groupoid();
    let r = non_splittable_idempotent();
    let alg = groupoid_to_algebra::<Rel>(&g, tol)?;
    rb.flag("groupoid algebra is well-formed", alg.check(tol).passed());
    rb.flag("idempotent", r.then(&r) == r);
    rb.flag("self-adjoint", r.dagger() == r);
    rb.flag("morphism of the groupoid algebra", is_cpstar_rel_groupoid(&r, &g, &g));
    let classes = Per::from_relation(&r)?.class_count();
    let groupoids = enumerate_groupoids(classes)?.len();
    let candidates = groupoids * (1..=classes).product::<usize>();
    match verify_no_dagger_splitting(&g, &r)? {
        None => rb.note(
            "no dagger splitting",
            true,
            format!("no splitting among {candidates} candidates ({groupoids} groupoids)"),
        ),
        Some((h, _)) => rb.note(
            "no dagger splitting",
            false,
            format!("unexpectedly split through a groupoid with {} morphisms", h.morphisms()),
        ),
    }
    rb.output(json!({
        "groupoid": to_value(&GroupoidDoc::of(&g)),
        "idempotent": to_value(&RelationDoc::of(&r)),
    }));
    Ok(rb.finish())
}

fn counterexample_rel_unital_image() -> Result<Report, Error> {
    let mut rb = ReportBuilder::new("counterexample rel-unital-image");
    let q = cpstar::split::unital_non_image_object();
    rb.flag("valid doubled per", cpm_per_check(q.x_size(), q.per().relation()));
    rb.flag("unital", q.has_total_diagonal());
    rb.note("quotient", true, format!("{} classes", q.per().class_count()));
    let groupoids = enumerate_groupoids(q.per().class_count())?.len();
    match f_image_search(&q)? {
        None => rb.note(
            "outside the functor image",
            true,
            format!("no splitting among {groupoids} candidate groupoids"),
        ),
        Some((h, _)) => rb.note(
            "outside the functor image",
            false,
            format!("unexpectedly presented by a groupoid with {} morphisms", h.morphisms()),
        ),
    }
    rb.output(to_value(&CpmPerDoc::of(&q)));
    Ok(rb.finish())
}

fn counterexample_fhilb_noncontractive(tol: &Tolerance) -> Result<Report, Error> {
    let mut rb = ReportBuilder::new("counterexample fhilb-noncontractive");
    let p = noncontractive_projection();
    rb.residual("self-adjoint", p.max_diff(&p.dagger()) <= 1e-12, p.max_diff(&p.dagger()));
    rb.residual("idempotent", p.then(&p).max_diff(&p) <= 1e-12, p.then(&p).max_diff(&p));
    let (eigs, _) = hermitian_eig(&choi(&p, 2, 2));
    let min_eig = eigs.last().copied().unwrap_or(0.0);
    rb.note(
        "completely positive",
        min_eig >= -tol.eps,
        format!("least Choi eigenvalue {min_eig:.3e}"),
    );
    let one = Matrix::<f64>::identity(2).vectorise();
    let p_one = Matrix::unvectorise(&one.then(&p), 2, 2);
    let norm = operator_norm(&p_one);
    let expected = 0.5 + 0.5 * 2.0_f64.sqrt();
    rb.note(
        "not contractive",
        (norm - expected).abs() <= tol.eps && norm > 1.0,
        format!("norm of the image of the unit is {norm:.5} > 1"),
    );
    rb.output(to_value(&MatrixDoc::of(&p)));
    Ok(rb.finish())
}

fn cmd_enumerate_groupoids(morphisms: usize) -> Result<Report, Error> {
    let mut rb = ReportBuilder::new("enumerate-groupoids");
    let all = enumerate_groupoids(morphisms)?;
    rb.note(
        "enumerated",
        true,
        format!("{} groupoids with {} morphisms, up to isomorphism", all.len(), morphisms),
    );
    rb.output(Value::Array(all.iter().map(|g| to_value(&GroupoidDoc::of(g))).collect()));
    Ok(rb.finish())
}
