//! Command-line front end for the `floerlocal` library: file I/O, report
//! emission, and exit-status conventions.
//!
//! Exit codes: `0` on success, `1` on an assertion failure (a check that
//! came out negative, e.g. a non-unique deduction), `2` on input errors
//! (unparsable files, invalid complexes, bad arguments).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use floerlocal::deduce::{self, DeductionInput};
use floerlocal::hat::{hat_of, FilteredComplex};
use floerlocal::localequiv::{find_local_map, standard_representative};
use floerlocal::mazur::{self, ConstraintSet};
use floerlocal::obstruction::{lifting_oracle, not_realizable};
use floerlocal::standard::{build_standard, phi, StandardParams};
use floerlocal::{BigradedComplex, Error};

#[derive(Parser)]
#[command(
    name = "floerlocal",
    version,
    about = "Exact local-equivalence computations for bigraded knot complexes",
    after_help = "Exit codes: 0 success, 1 assertion failure, 2 input error.\n\
                  The FLOERLOCAL_SEED environment variable fixes the seeds of\n\
                  the randomized test suites; no verb here consumes randomness."
)]
struct Cli {
    /// Print only the structured report lines, without the `#` header.
    #[arg(long, global = true)]
    porcelain: bool,

    /// Write the report to this file instead of standard output.
    #[arg(short = 'o', global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Number of worker threads for parallel searches (default: all cores).
    #[arg(long, global = true, value_name = "K")]
    jobs: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a complex file against the structural validity rules.
    Validate { file: PathBuf },
    /// Cancel all unit differentials and emit the reduced complex.
    Reduce { file: PathBuf },
    /// Emit the tensor product of two complexes over the base ring.
    Tensor { a: PathBuf, b: PathBuf },
    /// Emit the hat-flavor filtered complex of a reduced complex.
    Hat { file: PathBuf },
    /// Characteristic multi-set of vertical arrow lengths of a complex.
    Ch { file: PathBuf },
    /// Emit the standard complex with the given parameter list.
    Std {
        #[arg(allow_hyphen_values = true)]
        params: String,
    },
    /// Evaluate one phi invariant of a parameter list.
    Phi {
        #[arg(allow_hyphen_values = true)]
        params: String,
        /// Index of the invariant (at least 1).
        #[arg(long)]
        j: i64,
    },
    /// Decide local equivalence of two complexes, printing any local maps.
    Loceq { a: PathBuf, b: PathBuf },
    /// Search for the standard representative of a complex within bounds.
    Stdrep {
        file: PathBuf,
        /// Longest parameter list to try.
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Largest absolute parameter entry to try.
        #[arg(long, default_value_t = 4)]
        max_abs: i64,
    },
    /// Realizability obstruction predicate plus lifting-oracle certificate.
    Obstruct {
        /// Comma-separated leading entries of a parameter list.
        #[arg(allow_hyphen_values = true)]
        prefix: String,
        /// Auxiliary generators allowed in the lifting search (at most 2).
        #[arg(long, default_value_t = 2)]
        extra_gens: usize,
        /// Monomial exponent bound (default: twice the largest entry, plus 2).
        #[arg(long)]
        exp_bound: Option<u32>,
    },
    /// Print the intersection-grading table of the satellite pattern.
    MazurTable {
        /// Winding parameter (at least 2).
        #[arg(long)]
        n: i64,
    },
    /// Check the vertical arrows of a complex against a constraint set.
    MazurCheck {
        /// A complex file (`ring`/`gen`/`dif`) or filtered file (`fgen`/`farr`).
        file: PathBuf,
        /// Use the built-in constraint set for this winding parameter.
        #[arg(long, conflicts_with = "constraints")]
        n: Option<i64>,
        /// Read the constraint set from a file instead.
        #[arg(long)]
        constraints: Option<PathBuf>,
    },
    /// Enumerate parameter lists compatible with constraints and invariants.
    Deduce {
        /// Use the built-in constraint set for this winding parameter.
        #[arg(long, conflicts_with = "constraints")]
        n: Option<i64>,
        /// Read the constraint set from a file instead.
        #[arg(long)]
        constraints: Option<PathBuf>,
        /// Required tau invariant (taken as given, not recomputed).
        #[arg(long, allow_negative_numbers = true)]
        tau: i64,
        /// Required epsilon invariant: -1, 0, or 1 (taken as given).
        #[arg(long, allow_negative_numbers = true)]
        epsilon: i64,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = 4)]
        max_abs: i64,
    },
    /// Run the deduction pipeline for N steps past the computed base case.
    Pipeline {
        #[arg(long = "N")]
        n: usize,
    },
    /// Phi-invariant table of the pipeline family, with rank certificate.
    Phimatrix {
        #[arg(long = "N")]
        n: usize,
    },
}

/// A hard failure: message to stderr, no report.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn input(msg: impl Into<String>) -> Self {
        Failure { code: 2, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            // A deduction that fails to close is an assertion failure, not
            // a malformed input.
            Error::Deduction(_) => 1,
            _ => 2,
        };
        Failure { code, msg: e.to_string() }
    }
}

/// A finished report plus the exit status it decides.
struct Report {
    header: Vec<String>,
    body: String,
    code: u8,
}

impl Report {
    fn ok(header: Vec<String>, body: String) -> Self {
        Report { header, body, code: 0 }
    }
}

const VERBS: &str = "validate, reduce, tensor, hat, ch, std, phi, loceq, stdrep, \
     obstruct, mazur-table, mazur-check, deduce, pipeline, phimatrix";

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.kind() == clap::error::ErrorKind::InvalidSubcommand => {
            eprint!("{e}");
            eprintln!("available verbs: {VERBS}");
            return ExitCode::from(2);
        }
        // Help and version print to stdout and exit 0; other argument
        // problems print a usage error and exit 2.
        Err(e) => e.exit(),
    };
    if let Some(k) = cli.jobs {
        if k == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: cannot configure {k} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli.cmd) {
        Ok(report) => {
            let mut text = String::new();
            if !cli.porcelain {
                for line in &report.header {
                    text.push_str(line);
                    text.push('\n');
                }
            }
            text.push_str(&report.body);
            if !text.ends_with('\n') {
                text.push('\n');
            }
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, &text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(report.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: &Cmd) -> Result<Report, Failure> {
    match cmd {
        Cmd::Validate { file } => validate(file),
        Cmd::Reduce { file } => reduce(file),
        Cmd::Tensor { a, b } => tensor(a, b),
        Cmd::Hat { file } => hat(file),
        Cmd::Ch { file } => ch(file),
        Cmd::Std { params } => std_complex(params),
        Cmd::Phi { params, j } => phi_value(params, *j),
        Cmd::Loceq { a, b } => loceq(a, b),
        Cmd::Stdrep { file, max_len, max_abs } => stdrep(file, *max_len, *max_abs),
        Cmd::Obstruct { prefix, extra_gens, exp_bound } => obstruct(prefix, *extra_gens, *exp_bound),
        Cmd::MazurTable { n } => mazur_table(*n),
        Cmd::MazurCheck { file, n, constraints } => mazur_check(file, *n, constraints.as_deref()),
        Cmd::Deduce { n, constraints, tau, epsilon, max_len, max_abs } => {
            deduce_cmd(*n, constraints.as_deref(), *tau, *epsilon, *max_len, *max_abs)
        }
        Cmd::Pipeline { n } => pipeline(*n),
        Cmd::Phimatrix { n } => phimatrix(*n),
    }
}

/// Common `#` header: tool version and the exact command line.
fn base_header() -> Vec<String> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    vec![
        format!("# floerlocal {}", env!("CARGO_PKG_VERSION")),
        format!("# command: {}", args.join(" ")),
    ]
}

fn read_input(header: &mut Vec<String>, path: &Path) -> Result<String, Failure> {
    let bytes = fs::read(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let digest = Sha256::digest(&bytes);
    header.push(format!("# input {} sha256={digest:x}", path.display()));
    String::from_utf8(bytes)
        .map_err(|_| Failure::input(format!("{} is not valid UTF-8", path.display())))
}

fn read_complex(header: &mut Vec<String>, path: &Path) -> Result<BigradedComplex, Failure> {
    let text = read_input(header, path)?;
    Ok(BigradedComplex::parse(&text)?)
}

/// Parse a file holding either a bigraded complex (`ring`/`gen`/`dif`
/// lines) or an already-hatted filtered complex (`fgen`/`farr` lines), and
/// return the filtered complex either way.
fn read_filtered(header: &mut Vec<String>, path: &Path) -> Result<FilteredComplex, Failure> {
    let text = read_input(header, path)?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if first.starts_with("fgen") || first.starts_with("farr") {
        return Ok(FilteredComplex::parse(&text)?);
    }
    let c = BigradedComplex::parse(&text)?;
    require_valid(&c, path)?;
    Ok(hat_of(&c.reduce())?)
}

fn require_valid(c: &BigradedComplex, path: &Path) -> Result<(), Failure> {
    let report = c.validate();
    if report.is_valid() {
        return Ok(());
    }
    Err(Failure::input(format!(
        "{} is not a valid complex:\n{}",
        path.display(),
        report
            .violations
            .iter()
            .map(|v| format!("  violation: {v}"))
            .collect::<Vec<_>>()
            .join("\n")
    )))
}

fn parse_params(s: &str) -> Result<StandardParams, Failure> {
    Ok(StandardParams::parse(s)?)
}

fn validate(file: &Path) -> Result<Report, Failure> {
    let mut header = base_header();
    let c = read_complex(&mut header, file)?;
    let report = c.validate();
    if report.is_valid() {
        Ok(Report::ok(header, "ok".into()))
    } else {
        let body: Vec<String> =
            report.violations.iter().map(|v| format!("violation: {v}")).collect();
        Ok(Report { header, body: body.join("\n"), code: 2 })
    }
}

fn reduce(file: &Path) -> Result<Report, Failure> {
    let mut header = base_header();
    let c = read_complex(&mut header, file)?;
    require_valid(&c, file)?;
    Ok(Report::ok(header, c.reduce().to_string()))
}

fn tensor(a: &Path, b: &Path) -> Result<Report, Failure> {
    let mut header = base_header();
    let ca = read_complex(&mut header, a)?;
    let cb = read_complex(&mut header, b)?;
    require_valid(&ca, a)?;
    require_valid(&cb, b)?;
    Ok(Report::ok(header, ca.tensor(&cb)?.to_string()))
}

fn hat(file: &Path) -> Result<Report, Failure> {
    let mut header = base_header();
    let c = read_complex(&mut header, file)?;
    require_valid(&c, file)?;
    Ok(Report::ok(header, hat_of(&c)?.to_string()))
}

fn ch(file: &Path) -> Result<Report, Failure> {
    let mut header = base_header();
    let f = read_filtered(&mut header, file)?;
    Ok(Report::ok(header, f.ch_from_definition().to_string()))
}

fn std_complex(params: &str) -> Result<Report, Failure> {
    let p = parse_params(params)?;
    Ok(Report::ok(base_header(), build_standard(&p).complex.to_string()))
}

fn phi_value(params: &str, j: i64) -> Result<Report, Failure> {
    if j < 1 {
        return Err(Failure::input(format!("phi index must be at least 1, got {j}")));
    }
    let p = parse_params(params)?;
    Ok(Report::ok(base_header(), format!("phi_{j} = {}", phi(&p, j))))
}

fn loceq(a: &Path, b: &Path) -> Result<Report, Failure> {
    let mut header = base_header();
    let ca = read_complex(&mut header, a)?;
    let cb = read_complex(&mut header, b)?;
    let fwd = find_local_map(&ca, &cb)?;
    let bwd = find_local_map(&cb, &ca)?;
    let mut body = format!("locally-equivalent: {}\n", fwd.is_some() && bwd.is_some());
    match &fwd {
        Some(m) => {
            body.push_str("map a->b:\n");
            let _ = write!(body, "{m}");
        }
        None => body.push_str("map a->b: none\n"),
    }
    match &bwd {
        Some(m) => {
            body.push_str("map b->a:\n");
            let _ = write!(body, "{m}");
        }
        None => body.push_str("map b->a: none\n"),
    }
    Ok(Report::ok(header, body))
}

fn stdrep(file: &Path, max_len: usize, max_abs: i64) -> Result<Report, Failure> {
    let mut header = base_header();
    header.push(format!("# bounds: max_len={max_len} max_abs={max_abs}"));
    let c = read_complex(&mut header, file)?;
    match standard_representative(&c, max_len, max_abs)? {
        Some(p) => Ok(Report::ok(header, format!("representative: ({p})"))),
        None => Ok(Report { header, body: "representative: none".into(), code: 1 }),
    }
}

fn obstruct(prefix: &str, extra_gens: usize, exp_bound: Option<u32>) -> Result<Report, Failure> {
    let entries: Vec<i64> = prefix
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::input(format!("cannot parse prefix {prefix:?}")))?;
    if entries.is_empty() || entries.contains(&0) {
        return Err(Failure::input("prefix entries must be nonzero"));
    }
    let max_entry = entries.iter().map(|b| b.unsigned_abs() as u32).max().unwrap_or(0);
    let bound = exp_bound.unwrap_or(2 * max_entry + 2);
    let mut header = base_header();
    header.push(format!("# bounds: extra_gens={extra_gens} exp_bound={bound}"));
    let predicate = not_realizable(&entries);
    let oracle = lifting_oracle(&entries, extra_gens, bound)?;
    header.push(format!("# search: {} configurations", oracle.configurations));
    let canon: Vec<String> = entries.iter().map(|b| b.to_string()).collect();
    let body = format!(
        "obstruction {} predicate={predicate} oracle={} bounds={extra_gens},{bound}",
        canon.join(","),
        oracle.outcome
    );
    Ok(Report::ok(header, body))
}

fn mazur_table(n: i64) -> Result<Report, Failure> {
    let table = mazur::build_gradings(n)?;
    let mut header = base_header();
    header.push(format!("# winding: n={n}"));
    Ok(Report::ok(header, table.to_string()))
}

fn mazur_check(file: &Path, n: Option<i64>, constraints: Option<&Path>) -> Result<Report, Failure> {
    let mut header = base_header();
    let cs = match (n, constraints) {
        (Some(n), None) => {
            header.push(format!("# constraints: built-in, winding n={n}"));
            mazur::lemma33_constraints(n)?
        }
        (None, Some(path)) => {
            let text = read_input(&mut header, path)?;
            ConstraintSet::parse(&text)?
        }
        _ => {
            return Err(Failure::input(
                "exactly one of --n and --constraints is required",
            ))
        }
    };
    let f = read_filtered(&mut header, file)?;
    let report = mazur::check_against(&f, &cs)?;
    let code = u8::from(!report.is_ok());
    Ok(Report { header, body: report.to_string(), code })
}

fn deduce_cmd(
    n: Option<i64>,
    constraints: Option<&Path>,
    tau: i64,
    epsilon: i64,
    max_len: usize,
    max_abs: i64,
) -> Result<Report, Failure> {
    let mut header = base_header();
    header.push(format!("# bounds: max_len={max_len} max_abs={max_abs}"));
    header.push(format!(
        "# axiom: tau={tau} epsilon={epsilon} (invariants supplied as input, not recomputed)"
    ));
    let cs = match (n, constraints) {
        (Some(n), None) => {
            header.push(format!("# constraints: built-in, winding n={n}"));
            mazur::lemma33_constraints(n)?
        }
        (None, Some(path)) => {
            let text = read_input(&mut header, path)?;
            ConstraintSet::parse(&text)?
        }
        _ => {
            return Err(Failure::input(
                "exactly one of --n and --constraints is required",
            ))
        }
    };
    let inp = DeductionInput::new(cs, tau, epsilon, max_len, max_abs)?;
    let found = deduce::candidates(&inp);
    let mut body = String::new();
    for p in &found {
        let _ = writeln!(body, "candidate ({p})");
    }
    let _ = write!(body, "count={} tau={tau} epsilon={epsilon}", found.len());
    // A deduction is conclusive only when exactly one candidate survives.
    let code = u8::from(found.len() != 1);
    Ok(Report { header, body, code })
}

fn pipeline(n: usize) -> Result<Report, Failure> {
    let mut header = base_header();
    header.push("# bounds: max_len=8 max_abs=n+2 at each step".into());
    header.push(
        "# axiom: tau=n+1 epsilon=1 at each step \
         (satellite invariants supplied as input, not recomputed)"
            .into(),
    );
    let steps = deduce::pipeline_detailed(n)?;
    let body: Vec<String> = steps
        .iter()
        .map(|s| {
            format!(
                "step n={} tau={} epsilon={} survivors=({})",
                s.n, s.tau, s.epsilon, s.survivor
            )
        })
        .collect();
    Ok(Report::ok(header, body.join("\n")))
}

fn phimatrix(n: usize) -> Result<Report, Failure> {
    let mut header = base_header();
    header.push("# rows n=1.. , columns j=2.. ; entries phi_j of the deduced classes".into());
    let m = deduce::phi_matrix(n)?;
    Ok(Report::ok(header, m.to_string()))
}
