use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use super::cert::{parse_certificate, serialize_certificate};
use super::parse::{parse_problem_with, ParseOptions, ProblemFile};
use crate::ainf::check_ainf_functor;
use crate::dgcat::{homotopy_category, validate_dg_category};
use crate::error::{Error, Result};
use crate::graded::Field;
use crate::lift::{lift_natural_transformation, verify_certificate};

#[derive(Debug, Parser)]
#[command(name = "dglift", version, about = "Lift H⁰ natural transformations to A∞ ones")]
struct Cli {
    /// Override the file's field: `q` or `f<p>`.
    #[arg(long, global = true)]
    field: Option<Field>,
    /// Print the construction transcript and full reports.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the dg axioms of every category and the functor equations.
    Validate { file: PathBuf },
    /// Cohomology of one hom complex.
    Cohomology {
        file: PathBuf,
        category: String,
        source: String,
        target: String,
    },
    /// Dimensions of the homotopy category.
    H0 { file: PathBuf, category: String },
    /// Check one A∞-functor.
    CheckFunctor {
        file: PathBuf,
        functor: String,
        #[arg(long)]
        dmax: Option<usize>,
    },
    /// Lift the file's transformation and print or write the certificate.
    Lift {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate against a problem file.
    Certify { cert: PathBuf, file: PathBuf },
}

/// Exit status for an error: 2 for unreadable input, 3 for internal
/// invariant violations, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io(_) => 2,
        e if e.is_internal() => 3,
        _ => 1,
    }
}

/// Runs one command line; returns the exit status.
pub fn run_command<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load(cli: &Cli, path: &Path, skip_validation: bool) -> Result<ProblemFile> {
    let opts = ParseOptions {
        field: cli.field,
        skip_validation,
    };
    parse_problem_with(&read(path)?, &opts)
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Validate { file } => {
            let pf = load(cli, file, true)?;
            let mut ok = true;
            for c in &pf.categories {
                let report = validate_dg_category(c);
                if report.is_valid() {
                    writeln!(out, "category {}: valid", c.name()).map_err(io)?;
                } else {
                    ok = false;
                    write!(out, "category {}: INVALID\n{report}", c.name()).map_err(io)?;
                }
            }
            if !ok {
                return Ok(1);
            }
            for (name, f) in &pf.functors {
                let report = check_ainf_functor(f, f.max_degree() + 1)?;
                if report.is_valid() {
                    writeln!(out, "functor {name}: valid").map_err(io)?;
                } else {
                    ok = false;
                    write!(out, "functor {name}: INVALID\n{report}").map_err(io)?;
                }
            }
            if ok && pf.transform.is_some() {
                let p = pf.lift_problem()?;
                writeln!(out, "transform: natural").map_err(io)?;
                write!(out, "{}", p.vanishing()).map_err(io)?;
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Cohomology {
            file,
            category,
            source,
            target,
        } => {
            let pf = load(cli, file, false)?;
            let c = pf
                .category(category)
                .ok_or_else(|| Error::Index(format!("no category `{category}`")))?;
            let obj = |n: &str| {
                c.object_index(n)
                    .ok_or_else(|| Error::Index(format!("no object `{n}` in {category}")))
            };
            let hom = c.complex(obj(source)?, obj(target)?);
            let space = hom.space();
            let degrees: Vec<i32> = space.support().collect();
            if degrees.is_empty() {
                writeln!(out, "zero complex").map_err(io)?;
            }
            for j in degrees {
                let h = hom.cohomology(j);
                writeln!(out, "H^{j} = {}", h.dim()).map_err(io)?;
                if cli.verbose {
                    for r in h.representatives() {
                        let m = crate::dgcat::Morphism {
                            source: obj(source)?,
                            target: obj(target)?,
                            vector: r.clone(),
                        };
                        writeln!(out, "  [{}]", c.format(&m)).map_err(io)?;
                    }
                }
            }
            Ok(0)
        }
        Command::H0 { file, category } => {
            let pf = load(cli, file, false)?;
            let c = pf
                .category(category)
                .ok_or_else(|| Error::Index(format!("no category `{category}`")))?;
            let h0 = homotopy_category(c)?;
            for (x, xn) in c.objects().iter().enumerate() {
                for (y, yn) in c.objects().iter().enumerate() {
                    writeln!(out, "H0({xn}, {yn}) = {}", h0.dim(x, y)).map_err(io)?;
                }
            }
            Ok(0)
        }
        Command::CheckFunctor { file, functor, dmax } => {
            let pf = load(cli, file, false)?;
            let f = pf
                .functor(functor)
                .ok_or_else(|| Error::Index(format!("no functor `{functor}`")))?;
            let d = dmax.unwrap_or(2.max(f.max_degree() + 1));
            let report = check_ainf_functor(f, d)?;
            write!(out, "{functor} to length {d}: {report}").map_err(io)?;
            Ok(if report.is_valid() { 0 } else { 1 })
        }
        Command::Lift { file, out: target } => {
            let pf = load(cli, file, false)?;
            let p = pf.lift_problem()?;
            if !p.vanishing().holds() {
                write!(out, "{}", p.vanishing()).map_err(io)?;
                return Err(p.vanishing().clone().into_result().unwrap_err());
            }
            let cert = lift_natural_transformation(&p)?;
            let text = serialize_certificate(&cert);
            if cli.verbose {
                for t in &cert.transcript {
                    writeln!(out, "{t}").map_err(io)?;
                }
            }
            match target {
                Some(path) => {
                    std::fs::write(path, &text)
                        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    writeln!(
                        out,
                        "lifted: d_max = {}, iso = {}, certificate written to {}",
                        cert.d_max,
                        cert.iso,
                        path.display()
                    )
                    .map_err(io)?;
                }
                None => write!(out, "{text}").map_err(io)?,
            }
            Ok(0)
        }
        Command::Certify { cert, file } => {
            let pf = load(cli, file, false)?;
            let p = pf.lift_problem()?;
            let c = parse_certificate(&read(cert)?, &p)?;
            verify_certificate(&c, &p)?;
            writeln!(out, "VERIFIED (iso = {})", c.iso).map_err(io)?;
            Ok(0)
        }
    }
}
