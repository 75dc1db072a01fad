//! Batch command-line front end. Exit codes: 0 success, 1 a check failed,
//! 2 usage or input error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::cohomology::{betti_table, default_window};
use crate::corpus::{all_entries, CorpusEntry};
use crate::fh_enum::{audit_against_reference, enumerate_fh, parse_table, render_table};
use crate::hilali::{check_hilali, odd_tower_check};
use crate::io::{emit_cohomology, emit_report, emit_tower, parse_model, serialize_model, Format};
use crate::model::SullivanModel;

#[derive(Parser, Debug)]
#[command(name = "sullivan", version, about = "Exact cohomology and dim V <= dim H checks for Sullivan models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check degrees, triangularity, minimality and d^2 = 0.
    Validate { file: PathBuf },
    /// Betti numbers degree by degree.
    Cohomology {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        up_to: Option<i64>,
        #[arg(long)]
        machine: bool,
    },
    /// Full verdict with every applicable sufficient condition.
    Check {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        up_to: Option<i64>,
        #[arg(long)]
        machine: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Admissible degree sequences for a formal dimension.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        fd: u32,
        /// Reference table to audit the enumeration against.
        #[arg(long)]
        audit: Option<PathBuf>,
    },
    /// Run the built-in models.
    Corpus {
        /// Compare every model against its expected-results record.
        #[arg(long)]
        run_all: bool,
        #[arg(long)]
        machine: bool,
        /// Write every entry as a `.sul` file into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// The odd-generated multiplication tower.
    Tower {
        file: PathBuf,
        #[arg(long)]
        machine: bool,
    },
}

fn format_of(machine: bool) -> Format {
    if machine {
        Format::Machine
    } else {
        Format::Human
    }
}

struct Failure(i32);

type CmdResult = Result<i32, Failure>;

fn usage(err: &mut dyn Write, msg: impl std::fmt::Display) -> Failure {
    let _ = writeln!(err, "error: {msg}");
    Failure(2)
}

fn load(path: &Path, err: &mut dyn Write) -> Result<SullivanModel, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(err, format!("cannot read {}: {e}", path.display())))?;
    let m = parse_model(&text).map_err(|e| usage(err, format!("{}: {e}", path.display())))?;
    Ok(if m.name().is_some() {
        m
    } else {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        m.with_name(stem.unwrap_or_else(|| "unnamed".into()))
    })
}

/// Loads and validates; violations are reported and map to exit code 1.
fn load_valid(path: &Path, err: &mut dyn Write) -> Result<SullivanModel, Failure> {
    let m = load(path, err)?;
    let v = m.validate();
    if !v.is_ok() {
        for violation in &v.violations {
            let _ = writeln!(err, "{violation}");
        }
        return Err(Failure(1));
    }
    Ok(m)
}

/// Runs the CLI on `argv` (including the program name), writing to `out`
/// and `err`, and returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    let result = match cli.command {
        Command::Validate { file } => validate(&file, out, err),
        Command::Cohomology {
            file,
            up_to,
            machine,
        } => cohomology(&file, up_to, format_of(machine), out, err),
        Command::Check {
            file,
            up_to,
            machine,
            out: path,
        } => check(&file, up_to, format_of(machine), path.as_deref(), out, err),
        Command::Enumerate { fd, audit } => enumerate(fd, audit.as_deref(), out, err),
        Command::Corpus {
            run_all,
            machine,
            export,
        } => corpus(run_all, format_of(machine), export.as_deref(), out, err),
        Command::Tower { file, machine } => tower(&file, format_of(machine), out, err),
    };
    match result {
        Ok(code) | Err(Failure(code)) => code,
    }
}

fn validate(file: &Path, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let m = load(file, err)?;
    let v = m.validate();
    if v.is_ok() {
        let c = m.classify();
        let _ = writeln!(
            out,
            "ok: {} generators, minimal={} pure={} hyperelliptic={} odd_generated={}",
            m.generators().len(),
            c.minimal,
            c.pure,
            c.hyperelliptic,
            c.odd_generated
        );
        Ok(0)
    } else {
        for violation in &v.violations {
            let _ = writeln!(out, "{violation}");
        }
        Ok(1)
    }
}

fn cohomology(file: &Path, up_to: Option<i64>, fmt: Format, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let m = load_valid(file, err)?;
    let window = up_to.unwrap_or_else(|| default_window(&m) as i64);
    let report = betti_table(&m, window).map_err(|e| usage(err, e))?;
    let _ = out.write_all(emit_cohomology(&m, &report, fmt).as_bytes());
    Ok(0)
}

fn check(
    file: &Path,
    up_to: Option<i64>,
    fmt: Format,
    path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let m = load_valid(file, err)?;
    let (verdict, report) = check_hilali(&m, up_to).map_err(|e| usage(err, e))?;
    let text = emit_report(&m, &verdict, &report, fmt);
    match path {
        Some(p) => std::fs::write(p, &text)
            .map_err(|e| usage(err, format!("cannot write {}: {e}", p.display())))?,
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(if verdict.holds { 0 } else { 1 })
}

fn enumerate(fd: u32, audit: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let rows = enumerate_fh(fd).map_err(|e| usage(err, e))?;
    let _ = out.write_all(render_table(&rows).as_bytes());
    let Some(path) = audit else { return Ok(0) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(err, format!("cannot read {}: {e}", path.display())))?;
    let reference = parse_table(&text).map_err(|e| usage(err, e))?;
    let a = audit_against_reference(fd, &reference).map_err(|e| usage(err, e))?;
    for r in &a.missing_from_enumeration {
        let _ = writeln!(out, "# missing: {r}");
    }
    for r in &a.extra_in_enumeration {
        let _ = writeln!(out, "# extra: {r}");
    }
    let _ = writeln!(
        out,
        "# audit: {} reference rows, {} missing, {} extra",
        reference.len(),
        a.missing_from_enumeration.len(),
        a.extra_in_enumeration.len()
    );
    Ok(if a.missing_from_enumeration.is_empty() { 0 } else { 1 })
}

/// Differences between an entry's expected record and the pipeline output.
pub fn corpus_mismatches(entry: &CorpusEntry) -> Vec<String> {
    let Some(exp) = entry.expected else {
        return Vec::new();
    };
    let (verdict, report) = match check_hilali(&entry.model, None) {
        Ok(r) => r,
        Err(e) => return vec![e.to_string()],
    };
    let mut bad = Vec::new();
    if verdict.dim_v != exp.dim_v {
        bad.push(format!("dim_v {} != {}", verdict.dim_v, exp.dim_v));
    }
    if let Some(t) = exp.total_dim {
        if report.total_dim != t {
            bad.push(format!("total_dim {} != {t}", report.total_dim));
        }
    }
    if report.total_dim < exp.total_dim_at_least {
        bad.push(format!("total_dim {} < {}", report.total_dim, exp.total_dim_at_least));
    }
    if report.fd_observed != exp.fd {
        bad.push(format!("fd {} != {}", report.fd_observed, exp.fd));
    }
    if entry.model.classify() != exp.classification {
        bad.push("classification differs".to_string());
    }
    if !verdict.holds {
        bad.push("dim V > dim H".to_string());
    }
    bad
}

/// `sphere:2` -> `sphere_2.sul`
pub fn corpus_file_name(name: &str) -> String {
    format!("{}.sul", name.replace([':', ','], "_"))
}

fn corpus(
    run_all: bool,
    fmt: Format,
    export: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let entries = all_entries();
    if let Some(dir) = export {
        std::fs::create_dir_all(dir)
            .map_err(|e| usage(err, format!("cannot create {}: {e}", dir.display())))?;
        for e in &entries {
            let path = dir.join(corpus_file_name(&e.name));
            std::fs::write(&path, serialize_model(&e.model))
                .map_err(|e| usage(err, format!("cannot write {}: {e}", path.display())))?;
        }
    }
    if !run_all {
        for e in &entries {
            let _ = writeln!(out, "{}", e.name);
        }
        return Ok(0);
    }
    let results: Vec<(String, Vec<String>, Option<String>)> = entries
        .par_iter()
        .map(|e| {
            let mism = corpus_mismatches(e);
            let report = (fmt == Format::Machine)
                .then(|| check_hilali(&e.model, None).ok())
                .flatten()
                .map(|(v, r)| emit_report(&e.model, &v, &r, fmt));
            (e.name.clone(), mism, report)
        })
        .collect();
    let mut failures = 0;
    for (name, mism, report) in &results {
        match report {
            Some(text) => {
                let _ = out.write_all(text.as_bytes());
            }
            None => {
                let status = if mism.is_empty() { "ok" } else { "MISMATCH" };
                let _ = writeln!(out, "{name:<28}{status}");
            }
        }
        for m in mism {
            let _ = writeln!(out, "  {name}: {m}");
        }
        failures += usize::from(!mism.is_empty());
    }
    if fmt == Format::Human {
        let _ = writeln!(out, "{} entries, {} mismatches", results.len(), failures);
    }
    Ok(if failures == 0 { 0 } else { 1 })
}

fn tower(file: &Path, fmt: Format, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let m = load_valid(file, err)?;
    let t = odd_tower_check(&m).map_err(|e| usage(err, e))?;
    let _ = out.write_all(emit_tower(&t, fmt).as_bytes());
    Ok(if t.all_conditions_ok { 0 } else { 1 })
}
