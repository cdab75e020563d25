use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use perv_core::formula::Formula;
use perv_core::local_system::{
    ic_length, is_semisimple, local_system_length, puncture_h1, pushforward_length, Pushforward, Representation,
};
use perv_core::torus::{intersect_cosets, member_torsion, rank1_jump_locus, TorsionPoint, TorusFormula};
use perv_core::trace::{exact_length_locus, rep_from_traces, stratify, trace_coords, TracePoint};
use perv_core::verify;
use perv_core::Scalar;

/// Largest length that occurs for two-puncture SL2 systems, plus one.
const MAX_K: usize = 7;

#[derive(Parser)]
#[command(name = "perv", version, about = "Exact lengths of perverse pushforwards and their jump loci")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report composition length data for a representation file.
    Length { file: PathBuf },
    /// Emit the locus where the length of Rj_*(L[1]) is at least k.
    Stratify(StratifyArgs),
    /// Run the reproduction checks and exit nonzero on any failure.
    VerifyPaper,
    /// Operations on torsion-translated subtori.
    Tori {
        #[command(subcommand)]
        op: ToriCommand,
    },
    /// Build a semisimple SL2 representation with the given trace coordinates.
    RepFromTraces {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(allow_hyphen_values = true)]
        z: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct StratifyArgs {
    #[arg(short, long, conflicts_with = "all", required_unless_present = "all")]
    k: Option<usize>,
    /// Every k in 1..=7 and the exact-length differences. With `-o` the
    /// output path is a directory.
    #[arg(long)]
    all: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ToriCommand {
    /// Intersect two coset or formula files.
    Intersect {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide membership of a torsion point given by exponents, e.g. `1/3,0`.
    Member {
        formula: PathBuf,
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// The characters of (C*)^n whose rank-1 pushforward has length exactly k.
    JumpLocus {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Input problems exit with status 2; failed verification exits with 1.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<ExitCode, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Length { file } => cmd_length(&file),
        Command::Stratify(args) => cmd_stratify(&args),
        Command::VerifyPaper => Ok(cmd_verify_paper()),
        Command::Tori { op } => cmd_tori(op),
        Command::RepFromTraces { x, y, z, output } => cmd_rep_from_traces(&x, &y, &z, output.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), InputError> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| InputError(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_length(file: &Path) -> CmdResult {
    let rep = Representation::from_file_str(&read(file)?).map_err(|e| InputError(format!("{}: {e}", file.display())))?;
    let mut out = String::from("# perv length v1\n");
    let _ = writeln!(out, "punctures: {}", rep.n_punctures());
    let _ = writeln!(out, "rank: {}", rep.rank());
    let _ = writeln!(out, "sl2: {}", rep.is_sl2());
    let _ = writeln!(out, "length L: {}", local_system_length(&rep)?);
    let h1 = (0..rep.n_punctures())
        .map(|p| puncture_h1(&rep, p).map(|d| d.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let _ = writeln!(out, "h1 per puncture: {}", h1.join(" "));
    let _ = writeln!(out, "length Rj_*(L[1]): {}", pushforward_length(&rep, Pushforward::Star)?);
    let _ = writeln!(out, "length Rj_!(L[1]): {}", pushforward_length(&rep, Pushforward::Shriek)?);
    if is_semisimple(&rep)? {
        let _ = writeln!(out, "length j_!*(L[1]): {}", ic_length(&rep)?);
    } else {
        let _ = writeln!(out, "length j_!*(L[1]): n/a (not semisimple)");
    }
    if rep.n_punctures() == 2 && rep.rank() == 2 && rep.is_sl2() {
        let _ = writeln!(out, "traces: {}", trace_coords(&rep)?);
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn stratify_document(k: usize) -> String {
    let set = stratify(k);
    format!("# length >= {k}: {}\n{}", set.notation(), set.to_text())
}

fn exact_document(k: usize) -> String {
    let set = exact_length_locus(k);
    format!("# length = {k}\n{}", set.to_text())
}

fn cmd_stratify(args: &StratifyArgs) -> CmdResult {
    if !args.all {
        let k = args.k.expect("clap enforces -k or --all");
        if k == 0 {
            return Err(InputError("k must be at least 1".into()));
        }
        emit(&stratify_document(k), args.output.as_deref())?;
        return Ok(ExitCode::SUCCESS);
    }
    match &args.output {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| InputError(format!("{}: {e}", dir.display())))?;
            for k in 1..=MAX_K {
                emit(&stratify_document(k), Some(&dir.join(format!("ge{k}.txt"))))?;
                emit(&exact_document(k), Some(&dir.join(format!("eq{k}.txt"))))?;
            }
        }
        None => {
            for k in 1..=MAX_K {
                print!("{}", stratify_document(k));
            }
            for k in 1..=MAX_K {
                print!("{}", exact_document(k));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify_paper() -> ExitCode {
    let criteria = verify::run_all();
    for c in &criteria {
        println!("{}", c.summary());
        for check in &c.checks {
            println!("    {check}");
        }
    }
    if criteria.iter().all(verify::Criterion::passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn load_torus(path: &Path) -> Result<TorusFormula, InputError> {
    TorusFormula::from_file_str(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn cmd_tori(op: ToriCommand) -> CmdResult {
    match op {
        ToriCommand::Intersect { first, second, output } => {
            let (a, b) = (load_torus(&first)?, load_torus(&second)?);
            let result = match (a.as_coset(), b.as_coset()) {
                (Some(c1), Some(c2)) => {
                    let parts = intersect_cosets(c1, c2)?;
                    TorusFormula::new(a.ambient_rank(), Formula::any(parts.into_iter().map(Formula::Leaf)))?
                }
                _ => a.intersect(&b)?,
            };
            emit(&result.to_file_string(), output.as_deref())?;
        }
        ToriCommand::Member { formula, point } => {
            let f = load_torus(&formula)?;
            let p = TorsionPoint::parse(&point)?;
            println!("{}", member_torsion(&f, &p)?);
        }
        ToriCommand::JumpLocus { n, k, output } => {
            emit(&rank1_jump_locus(n, k)?.to_file_string(), output.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_rep_from_traces(x: &str, y: &str, z: &str, output: Option<&Path>) -> CmdResult {
    let parse = |name: &str, s: &str| s.parse::<Scalar>().map_err(|e| InputError(format!("{name}: {e}")));
    let t = TracePoint::new(parse("x", x)?, parse("y", y)?, parse("z", z)?);
    let rep = rep_from_traces(&t)?;
    emit(&rep.to_file_string(), output)?;
    Ok(ExitCode::SUCCESS)
}
