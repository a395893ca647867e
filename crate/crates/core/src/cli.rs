//! Command-line front end. `run` is the testable entry point; `main` only
//! forwards process arguments and prints.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{validate_algebra, DEFAULT_TOL};
use crate::amenability::{
    derivation_space, inner_mean_residual, is_character_amenable, is_character_inner_amenable,
    solve_inner_mean, CharacterAmenability,
};
use crate::characters::enumerate_characters;
use crate::corpus::{full_corpus, CorpusEntry};
use crate::dual::{center_residual, topological_center};
use crate::error::{Error, Result};
use crate::io;
use crate::morphism::{check_hom, MorphismProduct};
use crate::report::{self, to_canonical_json, CheckReport, Outcome};
use crate::suite::{algebra_verdicts, arens_agreement, tag_mismatches, tally, verify_theorems};
use crate::{FiniteAlgebra, Side};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "tpw", version, about = "Morphism-product verification workbench for finite-dimensional algebras")]
pub struct Cli {
    /// Numerical tolerance for residuals and rank decisions.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for the random splitting elements of character enumeration.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = SideArg::Both)]
    pub side: SideArg,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Reject homomorphisms with operator norm above 1 instead of warning.
    #[arg(long, global = true)]
    pub strict_norm: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
    Both,
}

impl SideArg {
    fn sides(self) -> Vec<Side> {
        match self {
            SideArg::Left => vec![Side::Left],
            SideArg::Right => vec![Side::Right],
            SideArg::Both => Side::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate algebra files and, optionally, a hom between them.
    Validate {
        #[arg(long, required = true)]
        algebra: Vec<PathBuf>,
        #[arg(long)]
        hom: Option<PathBuf>,
    },
    /// Build the morphism product and write it as an algebra file.
    Product {
        #[arg(long)]
        algebra_a: PathBuf,
        #[arg(long)]
        algebra_b: PathBuf,
        #[arg(long)]
        hom: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the characters of an algebra.
    Characters {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Run one decision procedure on an algebra.
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
    /// Check every product/factor relation for `A x_T B`.
    VerifyTheorems {
        #[arg(long)]
        algebra_a: PathBuf,
        #[arg(long)]
        algebra_b: PathBuf,
        #[arg(long)]
        hom: PathBuf,
    },
    /// Built-in corpus, plus entries from `TPW_CORPUS_DIR`.
    Corpus {
        #[command(subcommand)]
        what: CorpusCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    /// Arens products and topological centers.
    Arens {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Derivations into the dual and weak amenability.
    WeakAmen {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Left/right character amenability.
    CharAmen {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Inner means and character inner amenability.
    InnerAmen {
        #[arg(long)]
        algebra: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum CorpusCommand {
    List,
    Run {
        /// Run only this entry.
        #[arg(long)]
        id: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(code: i32, stdout: String) -> Self {
        Output {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn input_error(message: String) -> Self {
        Output {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output::input_error(text.trim_start_matches("error: ").trim_end().to_owned())
            } else {
                Output::ok(EXIT_OK, text)
            };
        }
    };
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Output::input_error(format!("--tol must be positive, got {}", cli.tol));
    }
    match dispatch(&cli) {
        Ok(out) => out,
        Err(e) => Output::input_error(e.to_string()),
    }
}

fn emit<T: Serialize>(cli: &Cli, value: &T, text: impl FnOnce() -> String) -> String {
    match cli.format {
        Format::Json => to_canonical_json(value),
        Format::Text => text(),
    }
}

fn outcome_code(outcome: Outcome) -> i32 {
    match outcome {
        Outcome::AllPass => EXIT_OK,
        Outcome::Failed => EXIT_FAILED,
        Outcome::Undecided => EXIT_UNKNOWN,
    }
}

fn load_product(cli: &Cli, a: &Path, b: &Path, h: &Path) -> Result<MorphismProduct> {
    let a = io::load_algebra(a, cli.tol)?;
    let b = io::load_algebra(b, cli.tol)?;
    if a.name() == b.name() && a != b {
        return Err(Error::Validation(format!(
            "two different algebras are both named `{}`",
            a.name()
        )));
    }
    let hom = io::load_hom(h, &[&a, &b], cli.tol)?;
    if hom.target() != &a || hom.source() != &b {
        return Err(Error::Validation(format!(
            "hom must map `{}` into `{}`, but maps `{}` into `{}`",
            b.name(),
            a.name(),
            hom.source().name(),
            hom.target().name()
        )));
    }
    if cli.strict_norm && !check_hom(&hom, cli.tol).contractive {
        return Err(Error::HomInvalid(format!(
            "operator norm {:.6} exceeds 1 (strict norm mode)",
            hom.op_norm()
        )));
    }
    MorphismProduct::build(&hom, cli.tol)
}

fn dispatch(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Validate { algebra, hom } => validate(cli, algebra, hom.as_deref()),
        Command::Product {
            algebra_a,
            algebra_b,
            hom,
            out,
        } => product(cli, algebra_a, algebra_b, hom, out.as_deref()),
        Command::Characters { algebra } => characters(cli, &io::load_algebra(algebra, cli.tol)?),
        Command::Check { what } => match what {
            CheckCommand::Arens { algebra } => check_arens(cli, &io::load_algebra(algebra, cli.tol)?),
            CheckCommand::WeakAmen { algebra } => check_weak(cli, &io::load_algebra(algebra, cli.tol)?),
            CheckCommand::CharAmen { algebra } => check_char(cli, &io::load_algebra(algebra, cli.tol)?),
            CheckCommand::InnerAmen { algebra } => check_inner(cli, &io::load_algebra(algebra, cli.tol)?),
        },
        Command::VerifyTheorems {
            algebra_a,
            algebra_b,
            hom,
        } => {
            let p = load_product(cli, algebra_a, algebra_b, hom)?;
            let r = verify_theorems(&p, cli.tol, cli.seed);
            Ok(Output::ok(outcome_code(r.outcome()), emit(cli, &r, || r.to_text())))
        }
        Command::Corpus { what } => match what {
            CorpusCommand::List => corpus_list(cli),
            CorpusCommand::Run { id } => corpus_run(cli, id.as_deref()),
        },
    }
}

fn validate(cli: &Cli, paths: &[PathBuf], hom: Option<&Path>) -> Result<Output> {
    let algebras: Vec<FiniteAlgebra> = paths
        .iter()
        .map(|p| io::load_algebra(p, cli.tol))
        .collect::<Result<_>>()?;
    let reports: Vec<_> = algebras.iter().map(|a| validate_algebra(a, cli.tol)).collect();
    let hom_report = match hom {
        Some(h) => {
            let refs: Vec<&FiniteAlgebra> = algebras.iter().collect();
            let t = io::load_hom(h, &refs, cli.tol)?;
            let r = check_hom(&t, cli.tol);
            if cli.strict_norm && !r.contractive {
                return Err(Error::HomInvalid(format!(
                    "operator norm {:.6} exceeds 1 (strict norm mode)",
                    r.op_norm
                )));
            }
            Some(r)
        }
        None => None,
    };
    let value = json!({"algebras": reports, "hom": hom_report});
    let text = || {
        let mut s = String::new();
        for r in &reports {
            let _ = writeln!(
                s,
                "{}: dim {}, associativity residual {:.3e}, unital {}, submultiplicative {}",
                r.algebra, r.dim, r.associativity_residual, r.unital, r.submultiplicative
            );
            for w in &r.warnings {
                let _ = writeln!(s, "  warning: {w}");
            }
        }
        if let Some(h) = &hom_report {
            let _ = writeln!(
                s,
                "{}: {} -> {}, multiplicativity residual {:.3e}, norm {:.6}, rank {}, epi {}, mono {}",
                h.name, h.source, h.target, h.mult_residual, h.op_norm, h.rank, h.epi, h.mono
            );
            for w in &h.warnings {
                let _ = writeln!(s, "  warning: {w}");
            }
        }
        s
    };
    Ok(Output::ok(EXIT_OK, emit(cli, &value, text)))
}

fn product(cli: &Cli, a: &Path, b: &Path, h: &Path, out: Option<&Path>) -> Result<Output> {
    let p = load_product(cli, a, b, h)?;
    let file = io::algebra_to_json(p.algebra());
    let Some(out) = out else {
        return Ok(Output::ok(EXIT_OK, file));
    };
    io::save_algebra(p.algebra(), out)?;
    let v = p.validate(cli.tol);
    let value = json!({"product": p.algebra().name(), "out": out.display().to_string(), "validation": v});
    let text = || {
        format!(
            "wrote {} (dim {}) to {}; associativity residual {:.3e}, unital {}\n",
            p.algebra().name(),
            v.dim,
            out.display(),
            v.associativity_residual,
            v.unital
        )
    };
    let code = if v.is_valid() { EXIT_OK } else { EXIT_FAILED };
    Ok(Output::ok(code, emit(cli, &value, text)))
}

fn characters(cli: &Cli, alg: &FiniteAlgebra) -> Result<Output> {
    let e = enumerate_characters(alg, cli.tol, cli.seed);
    let text = || {
        let mut s = format!(
            "{}: {} character(s), enumeration {}\n",
            e.algebra,
            e.characters.len(),
            if e.complete { "complete" } else { "incomplete" }
        );
        for ch in &e.characters {
            let vals: Vec<String> = ch
                .values()
                .iter()
                .zip(alg.basis())
                .map(|(z, l)| format!("{l} -> {}", fmt_complex(*z)))
                .collect();
            let _ = writeln!(s, "  [{}] residual {:.3e}", vals.join(", "), ch.residual);
        }
        for n in &e.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        s
    };
    let code = if e.complete { EXIT_OK } else { EXIT_UNKNOWN };
    Ok(Output::ok(code, emit(cli, &e, text)))
}

fn fmt_complex(z: crate::linalg::Scalar) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re}")
    } else {
        format!("{re}{:+}i", im)
    }
}

fn check_arens(cli: &Cli, alg: &FiniteAlgebra) -> Result<Output> {
    let mut r = CheckReport::new(format!("{} Arens products", alg.name()));
    r.caveat(report::ARENS_CAVEAT);
    let agree = arens_agreement(alg);
    r.bound(
        "arens.canonical-agreement",
        agree,
        10.0 * cli.tol,
        || json!({"residual": agree}),
        "both Arens products against the algebra product on basis pairs",
    );
    let n = alg.dim();
    for side in cli.side.sides() {
        let z = topological_center(alg, side, cli.tol);
        let worst = (0..n)
            .map(|k| center_residual(alg, &crate::linalg::unit(n, k), side))
            .fold(0.0, f64::max);
        r.bound(
            &format!("center.membership.{}", side.label()),
            worst,
            cli.tol,
            || json!({"residual": worst}),
            "every basis element is in the topological center",
        );
        r.expect(
            &format!("center.dimension.{}", side.label()),
            z.ncols() == n,
            || json!({"center_dim": z.ncols(), "dim": n}),
            format!("center dimension {} of {n}", z.ncols()),
        );
    }
    let r = r.finish();
    Ok(Output::ok(outcome_code(r.outcome()), emit(cli, &r, || r.to_text())))
}

fn check_weak(cli: &Cli, alg: &FiniteAlgebra) -> Result<Output> {
    let ds = derivation_space(alg, cli.tol);
    let mut r = CheckReport::new(format!("{} derivations", alg.name()));
    r.bound(
        "derivation.leibniz",
        ds.leibniz_residual,
        10.0 * cli.tol,
        || json!({"residual": ds.leibniz_residual}),
        "",
    );
    r.bound(
        "derivation.inner-in-span",
        ds.inner_excess,
        10.0 * cli.tol,
        || json!({"residual": ds.inner_excess}),
        "",
    );
    let r = r.finish();
    let wa = ds.is_weakly_amenable();
    let value = json!({"algebra": alg.name(), "weakly_amenable": wa, "derivations": ds, "report": r});
    let text = || {
        format!(
            "{}: derivations {} / inner {} -> {}\n{}",
            alg.name(),
            ds.dim_der,
            ds.dim_inner,
            if wa { "weakly amenable" } else { "not weakly amenable" },
            r.to_text()
        )
    };
    Ok(Output::ok(outcome_code(r.outcome()), emit(cli, &value, text)))
}

fn check_char(cli: &Cli, alg: &FiniteAlgebra) -> Result<Output> {
    let results: Vec<CharacterAmenability> = cli
        .side
        .sides()
        .into_iter()
        .map(|s| is_character_amenable(alg, s, cli.tol, cli.seed))
        .collect();
    let undecided = results.iter().any(|c| c.decision().is_none());
    let text = || {
        let mut s = String::new();
        for c in &results {
            let verdict = match c.decision() {
                Some(true) => "character amenable",
                Some(false) => "not character amenable",
                None => "undecided",
            };
            let _ = writeln!(s, "{} ({}): {verdict}", c.algebra, c.side.label());
            s.push_str(&c.report.to_text());
        }
        s
    };
    let code = if undecided { EXIT_UNKNOWN } else { EXIT_OK };
    Ok(Output::ok(code, emit(cli, &results, text)))
}

fn check_inner(cli: &Cli, alg: &FiniteAlgebra) -> Result<Output> {
    let e = enumerate_characters(alg, cli.tol, cli.seed);
    let mut r = CheckReport::new(format!("{} inner means", alg.name()));
    r.caveat(report::INNER_MEAN_CAVEAT);
    let mut means = Vec::new();
    for ch in &e.characters {
        let m = solve_inner_mean(alg, ch.values(), cli.tol);
        if let Some(m) = &m {
            let (p, c) = inner_mean_residual(alg, m, ch.values());
            r.bound(
                "inner-mean.witness",
                p.max(c),
                10.0 * cli.tol,
                || json!({"mean": report::complex_vec_json(m)}),
                "",
            );
        }
        means.push(json!({
            "character": report::complex_vec_json(ch.values()),
            "mean": m.as_deref().map(report::complex_vec_json),
        }));
    }
    if !e.complete {
        r.unknown("characters.complete", e.notes.join("; "));
    }
    let r = r.finish();
    let cia = is_character_inner_amenable(alg, cli.tol, cli.seed);
    let value = json!({
        "algebra": alg.name(),
        "character_inner_amenable": cia,
        "means": means,
        "report": r,
    });
    let text = || {
        let verdict = match cia {
            Some(true) => "character inner amenable",
            Some(false) => "not character inner amenable",
            None => "undecided",
        };
        let mut s = format!("{}: {verdict}\n", alg.name());
        for m in &means {
            let _ = writeln!(
                s,
                "  character {} -> mean {}",
                m["character"],
                if m["mean"].is_null() { "infeasible".to_owned() } else { m["mean"].to_string() }
            );
        }
        s.push_str(&r.to_text());
        s
    };
    Ok(Output::ok(outcome_code(r.outcome()), emit(cli, &value, text)))
}

fn corpus_list(cli: &Cli) -> Result<Output> {
    let corpus = full_corpus(cli.tol)?;
    let listing: Vec<Value> = corpus
        .iter()
        .map(|e| {
            json!({
                "id": e.id,
                "algebra_a": e.algebra_a.name(),
                "algebra_b": e.algebra_b.name(),
                "hom": e.hom.name(),
                "tags": e.tags,
            })
        })
        .collect();
    let text = || {
        let mut s = String::new();
        for e in &corpus {
            let _ = writeln!(
                s,
                "{:<24} {} x[{}] {}  [{}]",
                e.id,
                e.algebra_a.name(),
                e.hom.name(),
                e.algebra_b.name(),
                e.tags.join(", ")
            );
        }
        s
    };
    Ok(Output::ok(EXIT_OK, emit(cli, &listing, text)))
}

fn corpus_run(cli: &Cli, only: Option<&str>) -> Result<Output> {
    let corpus: Vec<CorpusEntry> = full_corpus(cli.tol)?
        .into_iter()
        .filter(|e| only.is_none_or(|id| e.id == id))
        .collect();
    if corpus.is_empty() {
        return Err(Error::Validation(format!("no corpus entry `{}`", only.unwrap_or(""))));
    }
    let mut code = EXIT_OK;
    let mut results = Vec::new();
    let mut text = String::new();
    for e in &corpus {
        let p = MorphismProduct::build(&e.hom, cli.tol)?;
        let r = verify_theorems(&p, cli.tol, cli.seed);
        let mismatches = tag_mismatches(&e.tags, &algebra_verdicts(p.algebra(), cli.tol, cli.seed));
        let entry_code = if !mismatches.is_empty() {
            EXIT_FAILED
        } else {
            outcome_code(r.outcome())
        };
        code = worst_code(code, entry_code);
        let counts = tally(&r);
        let _ = writeln!(
            text,
            "{:<24} {:<7} pass {} fail {} unknown {} n/a {}{}",
            e.id,
            match entry_code {
                EXIT_OK => "ok",
                EXIT_UNKNOWN => "unknown",
                _ => "FAILED",
            },
            counts[0].1,
            counts[1].1,
            counts[2].1,
            counts[3].1,
            if mismatches.is_empty() { String::new() } else { format!("; tags: {}", mismatches.join("; ")) }
        );
        for v in r.verdicts.iter().filter(|v| v.status == report::Status::Fail) {
            let _ = writeln!(text, "    failed: {} {}", v.claim, v.detail);
        }
        results.push(json!({"id": e.id, "tags": e.tags, "tag_mismatches": mismatches, "report": r}));
    }
    let out = match cli.format {
        Format::Json => to_canonical_json(&results),
        Format::Text => text,
    };
    Ok(Output::ok(code, out))
}

fn worst_code(a: i32, b: i32) -> i32 {
    let rank = |c: i32| match c {
        EXIT_OK => 0,
        EXIT_UNKNOWN => 1,
        _ => 2,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}
