//! Batch command-line surface for the polybraid engine.
//!
//! Every subcommand is a thin adapter over the library: it validates flags,
//! calls one library operation, and prints a byte-stable text or JSON report.
//!
//! Exit codes: 0 success/true, 1 false/violations found, 2 inconclusive
//! (Unknown/Overflow), 64 usage error, 65 malformed input file.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polybraid::polymatrix::PolyMatrix;
use polybraid::presentations::{
    artin_braid, higher_braid, higher_coxeter, higher_symmetric,
    verify_braid_matrix_correspondence, CoxeterSpec, Presentation,
};
use polybraid::regularity::{idempotence_relations, CayleyTable};
use polybraid::word::{Mode, Word};
use polybraid::wordproblem::{
    abelian_quotient, bounded_equal, check_homomorphism, format_trace, todd_coxeter,
    EnumerationOutcome, Equality, Permutation,
};

const EXIT_OK: u8 = 0;
const EXIT_FALSE: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

#[derive(Parser)]
#[command(name = "polybraid", disable_help_subcommand = true)]
#[command(about = "Polyadic matrices, higher braid presentations, and word-problem tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Braid,
    Symmetric,
    Coxeter,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Alphabet {
    S,
    Sigma,
    R,
}

impl Alphabet {
    fn prefix(self) -> &'static str {
        match self {
            Alphabet::S => "s",
            Alphabet::Sigma => "sigma",
            Alphabet::R => "r",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a presentation of a braid, symmetric, or Coxeter family
    Present(PresentArgs),
    /// Print the regularity schema for arity k and power l
    Regularity(RegularityArgs),
    /// Polyadic power of a k-ary matrix given by its entries
    Power(PowerArgs),
    /// Querelement of a k-ary matrix given by its entries
    Quer(QuerArgs),
    /// Verify structural correspondences
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Finite-semigroup experiments on a Cayley table file
    #[command(subcommand)]
    Semigroup(SemigroupCommand),
    /// Decide a word equality modulo a presentation by bounded rewriting
    Wordeq(WordeqArgs),
    /// Rank and torsion of the abelianization of a presentation
    Abelianize(AbelianizeArgs),
    /// Todd-Coxeter coset enumeration over the trivial subgroup
    Enumerate(EnumerateArgs),
    /// Check generator images into a permutation group against all chains
    CheckHom(CheckHomArgs),
}

#[derive(Args)]
struct PresentArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
    #[arg(long, value_enum, default_value = "s")]
    alphabet: Alphabet,
}

#[derive(Args)]
struct RegularityArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    ell: u32,
}

#[derive(Args)]
struct PowerArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    ell: u32,
    /// Comma-separated entry words, e.g. `s1,s2,s3`
    #[arg(long)]
    entries: String,
    #[arg(long, value_enum, default_value = "s")]
    alphabet: Alphabet,
}

#[derive(Args)]
struct QuerArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    entries: String,
    #[arg(long, value_enum, default_value = "s")]
    alphabet: Alphabet,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Expand the matrix-generator equations and compare with higher_braid
    Correspondence {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Subcommand)]
enum SemigroupCommand {
    /// List the (k-1)-tuples that satisfy the regularity schema
    RegularTuples {
        #[arg(long)]
        table: String,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        ell: u32,
    },
    /// Search for idempotent matrices whose k-ary product breaks idempotence
    Closure {
        #[arg(long)]
        table: String,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Args)]
struct WordeqArgs {
    #[arg(long)]
    pres: String,
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long)]
    max_len: usize,
    #[arg(long)]
    max_states: usize,
    #[arg(long, value_enum, default_value = "s")]
    alphabet: Alphabet,
}

#[derive(Args)]
struct AbelianizeArgs {
    #[arg(long)]
    pres: String,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    pres: String,
    #[arg(long)]
    max_cosets: usize,
}

#[derive(Args)]
struct CheckHomArgs {
    #[arg(long)]
    pres: String,
    #[arg(long)]
    images: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap prints help/version to stdout with success; keep that.
            if err.use_stderr() {
                eprint!("{err}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{err}");
            return ExitCode::from(EXIT_OK);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(err: impl ToString) -> Failure {
    Failure { code: EXIT_USAGE, message: err.to_string() }
}

fn data(err: impl ToString) -> Failure {
    Failure { code: EXIT_DATA, message: err.to_string() }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Present(args) => present(args),
        Command::Regularity(args) => {
            let schema = idempotence_relations(args.k, args.ell).map_err(usage)?;
            print!("{}", schema.display());
            Ok(EXIT_OK)
        }
        Command::Power(args) => {
            let matrix = parse_matrix(args.k, &args.entries)?;
            let power = matrix.polyadic_power(args.ell).map_err(usage)?;
            print!("{}", power.display_with(args.alphabet.prefix()));
            Ok(EXIT_OK)
        }
        Command::Quer(args) => {
            let matrix = parse_matrix(args.k, &args.entries)?;
            let quer = matrix.querelement().map_err(usage)?;
            print!("{}", quer.display_with(args.alphabet.prefix()));
            Ok(EXIT_OK)
        }
        Command::Verify(VerifyCommand::Correspondence { n, k }) => {
            let report = verify_braid_matrix_correspondence(n, k).map_err(usage)?;
            if report.matches {
                println!("correspondence n={n} k={k}: ok");
                Ok(EXIT_OK)
            } else {
                println!("correspondence n={n} k={k}: FAILED");
                for line in &report.discrepancies {
                    println!("  {line}");
                }
                Ok(EXIT_FALSE)
            }
        }
        Command::Semigroup(cmd) => semigroup(cmd),
        Command::Wordeq(args) => wordeq(args),
        Command::Abelianize(args) => {
            let presentation = load_presentation(&args.pres)?;
            let quotient = abelian_quotient(&presentation).map_err(usage)?;
            println!("rank {}", quotient.rank());
            if quotient.torsion().is_empty() {
                println!("torsion none");
            } else {
                let parts: Vec<String> = quotient.torsion().iter().map(u64::to_string).collect();
                println!("torsion {}", parts.join(" "));
            }
            Ok(EXIT_OK)
        }
        Command::Enumerate(args) => {
            let presentation = load_presentation(&args.pres)?;
            let result = todd_coxeter(&presentation, args.max_cosets).map_err(usage)?;
            println!("cosets_defined {}", result.cosets_defined);
            println!("cosets_live {}", result.cosets_live);
            match result.outcome {
                EnumerationOutcome::FiniteOrder(order) => {
                    println!("order {order}");
                    Ok(EXIT_OK)
                }
                EnumerationOutcome::Overflow => {
                    println!("overflow");
                    Ok(EXIT_INCONCLUSIVE)
                }
            }
        }
        Command::CheckHom(args) => {
            let presentation = load_presentation(&args.pres)?;
            let images = load_images(&args.images, presentation.generators())?;
            let report = check_homomorphism(&presentation, &images).map_err(data)?;
            println!("composition: left-to-right");
            if report.ok {
                println!("ok");
                Ok(EXIT_OK)
            } else {
                let chains: Vec<String> =
                    report.violated.iter().map(|i| (i + 1).to_string()).collect();
                println!("violated chains: {}", chains.join(" "));
                Ok(EXIT_FALSE)
            }
        }
    }
}

fn present(args: PresentArgs) -> Result<u8, Failure> {
    let presentation: Presentation = match args.family {
        Family::Braid => {
            if args.k == 3 {
                artin_braid(args.n).map_err(usage)?
            } else {
                higher_braid(args.n, args.k).map_err(usage)?
            }
        }
        Family::Symmetric => higher_symmetric(args.n, args.k).map_err(usage)?,
        Family::Coxeter => {
            let spec = CoxeterSpec::standard(args.n, args.k).map_err(usage)?;
            higher_coxeter(&spec).map_err(usage)?
        }
    };
    match args.format {
        Format::Plain => print!("{}", presentation.to_plain(args.alphabet.prefix())),
        Format::Json => print!("{}", presentation.to_json()),
    }
    Ok(EXIT_OK)
}

fn semigroup(cmd: SemigroupCommand) -> Result<u8, Failure> {
    match cmd {
        SemigroupCommand::RegularTuples { table, k, ell } => {
            let table = load_table(&table)?;
            let tuples = table.regular_tuples(k, ell).map_err(usage)?;
            for tuple in &tuples {
                let parts: Vec<String> = tuple.iter().map(usize::to_string).collect();
                println!("{}", parts.join(" "));
            }
            println!("count: {}", tuples.len());
            Ok(EXIT_OK)
        }
        SemigroupCommand::Closure { table, k } => {
            let table = load_table(&table)?;
            let report = table.closure_violations(k).map_err(usage)?;
            println!("mode: {}", if report.sampled { "sampled" } else { "exhaustive" });
            if report.violations.is_empty() {
                println!("no violations");
                Ok(EXIT_OK)
            } else {
                println!("violations: {}", report.violations.len());
                let witness = &report.violations[0];
                let factors: Vec<String> = witness.factors.iter().map(|f| tuple_text(f)).collect();
                println!("witness: {} -> {}", factors.join(" "), tuple_text(&witness.product));
                Ok(EXIT_FALSE)
            }
        }
    }
}

fn wordeq(args: WordeqArgs) -> Result<u8, Failure> {
    let presentation = load_presentation(&args.pres)?;
    let a = Word::parse(&args.a, Mode::Group).map_err(usage)?;
    let b = Word::parse(&args.b, Mode::Group).map_err(usage)?;
    let verdict =
        bounded_equal(&presentation, &a, &b, args.max_len, args.max_states).map_err(usage)?;
    match verdict {
        Equality::Equal(steps) => {
            print!("{}", format_trace(&steps, args.alphabet.prefix()));
            println!("equal");
            Ok(EXIT_OK)
        }
        Equality::Unknown => {
            println!("unknown");
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

fn tuple_text(tuple: &[usize]) -> String {
    let parts: Vec<String> = tuple.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

fn parse_matrix(k: u32, entries: &str) -> Result<PolyMatrix, Failure> {
    let words = entries
        .split(',')
        .map(|text| Word::parse(text, Mode::Group))
        .collect::<polybraid::Result<Vec<_>>>()
        .map_err(usage)?;
    PolyMatrix::new(k, words).map_err(usage)
}

fn load_presentation(path: &str) -> Result<Presentation, Failure> {
    let text = fs::read_to_string(path).map_err(data)?;
    Presentation::from_json(&text).map_err(data)
}

fn load_table(path: &str) -> Result<CayleyTable, Failure> {
    let text = fs::read_to_string(path).map_err(data)?;
    CayleyTable::parse(&text).map_err(data)
}

/// Images file: one line per generator, `s<i>: j1 j2 ... jd` with 1-based
/// images, lines in generator order.
fn load_images(path: &str, generators: u32) -> Result<Vec<Permutation>, Failure> {
    let text = fs::read_to_string(path).map_err(data)?;
    let mut images = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (_, rhs) = line
            .split_once(':')
            .ok_or_else(|| data(format!("line {}: expected `s<i>: images`", lineno + 1)))?;
        let values = rhs
            .split_whitespace()
            .map(|tok| tok.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| data(format!("line {}: {e}", lineno + 1)))?;
        images.push(Permutation::from_images(&values).map_err(data)?);
    }
    if images.len() != generators as usize {
        return Err(data(format!("expected {generators} images, file has {}", images.len())));
    }
    Ok(images)
}
