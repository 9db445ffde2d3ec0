//! `pathcount`: exact path counts in `E_c`, growth constants, polynomial
//! tables and identity verification from the command line.

mod parse;
mod render;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pathcount::asymptotics::{alpha_decomposition, compute_b, limit_verify, Method};
use pathcount::gamma_delta::{
    delta_poly, delta_poly_bruteforce, gamma_poly, gamma_via_frobenius, Canonical,
};
use pathcount::identities::{verify, verify_all, Identity};
use pathcount::operators::derivative_closed_form;
use pathcount::paths::{path_count, path_count_bruteforce, DEFAULT_ENUMERATION_BUDGET};
use pathcount::special::{eulerian_row_values, stirling1_row_values, stirling2_row_values};
use pathcount::{MultiIndex, ParamVec};

use parse::{parse_rational, parse_vector, Malformed};
use render::{Format, Output};

#[derive(Parser, Debug)]
#[command(
    name = "pathcount",
    version,
    about = "Exact path counts and Eulerian/Stirling identities"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CountMethod {
    Recurrence,
    Bruteforce,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BMethod {
    Closed,
    Series,
    Operator,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableKind {
    Eulerian,
    Stirling1,
    Stirling2,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolyKind {
    Gamma,
    Delta,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolyMethod {
    Formula,
    Alternate,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of paths from the origin to i in E_c.
    Count {
        /// Edge offsets c_1..c_{n+1}, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Target vertex i_1..i_{n+1}, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        i: String,
        #[arg(long, value_enum, default_value_t = CountMethod::Recurrence)]
        method: CountMethod,
        /// Largest |i| accepted by the brute-force enumerator.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
    /// Growth constant B_c(i_1..i_n).
    Bvalue {
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// i_1..i_n, one entry per non-last coordinate.
        #[arg(long, allow_hyphen_values = true)]
        prefix: String,
        #[arg(long, value_enum, default_value_t = BMethod::Closed)]
        method: BMethod,
        /// Box truncation N for the series method.
        #[arg(long, default_value_t = 400)]
        trunc: u32,
    },
    /// Convergence of A_c(prefix, h) / (c_{n+1}+m)^h to B_c.
    Limit {
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        prefix: String,
        #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..))]
        steps: u32,
        /// Tolerance on the final error: decimal, e-notation or p/q, parsed exactly.
        #[arg(long, default_value = "1e-6", allow_hyphen_values = true)]
        tol: String,
    },
    /// Rows of the Eulerian or Stirling triangles.
    Table {
        #[arg(long, value_enum)]
        kind: TableKind,
        #[arg(long, default_value_t = 12)]
        rows: u32,
    },
    /// Coefficients of Gamma_k(q, n) or Delta_{n,k}(q), constant term first.
    Poly {
        #[arg(long, value_enum)]
        kind: PolyKind,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        /// `alternate` uses the Eulerian form for Gamma and the subset sum for Delta.
        #[arg(long, value_enum, default_value_t = PolyMethod::Formula)]
        method: PolyMethod,
    },
    /// (u d/du)^k (1-u)^{-1} at u = (q-a)/q, as a polynomial in q.
    Thm1 {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        a: u64,
    },
    /// Coefficients alpha_{i,n}(c_{n+1}) of the symmetric-function decomposition of B.
    Alpha {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        c_last: u32,
    },
    /// Check identities over a range; exits 1 if any check fails.
    Verify {
        /// colyrel, stirling_form, coefs, star, known_s1, frobenius, delta_dual,
        /// thm1, new_n, i_nk, or all.
        #[arg(long, default_value = "all")]
        identity: String,
        /// Ceiling on n (on k for thm1). With `all`, each identity runs at the
        /// smaller of this and its own hard limit; omitted means the defaults.
        #[arg(long)]
        max_n: Option<u32>,
    },
}

#[derive(Debug)]
enum Failure {
    Malformed(Malformed),
    Core(pathcount::Error),
    Io(io::Error),
    Verification,
}

impl From<Malformed> for Failure {
    fn from(e: Malformed) -> Self {
        Failure::Malformed(e)
    }
}

impl From<pathcount::Error> for Failure {
    fn from(e: pathcount::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        use pathcount::Error as E;
        match self {
            Failure::Verification => 1,
            Failure::Malformed(_) => 3,
            Failure::Core(E::DimensionMismatch { .. }) => 4,
            Failure::Core(E::BudgetExceeded { .. }) => 5,
            Failure::Core(E::DegenerateNormalizer | E::InvalidParameter(_)) => 6,
            Failure::Io(_) => 7,
        }
    }
}

fn param_vec(input: &str) -> Result<ParamVec, Failure> {
    let c = parse_vector("c", input)?;
    if c.len() < 2 {
        return Err(pathcount::Error::DimensionMismatch {
            what: "--c (needs at least 2 entries)",
            expected: 2,
            found: c.len(),
        }
        .into());
    }
    Ok(ParamVec::new(c)?)
}

fn run(cli: &Cli) -> Result<(Output, bool), Failure> {
    let output = match &cli.command {
        Command::Count {
            c,
            i,
            method,
            budget,
        } => {
            let c = param_vec(c)?;
            let i = MultiIndex::new(parse_vector("i", i)?);
            let (count, name) = match method {
                CountMethod::Recurrence => (path_count(&c, &i)?, "recurrence"),
                CountMethod::Bruteforce => (path_count_bruteforce(&c, &i, *budget)?, "bruteforce"),
            };
            render::count(&c, &i, name, &count)
        }
        Command::Bvalue {
            c,
            prefix,
            method,
            trunc,
        } => {
            let c = param_vec(c)?;
            let prefix = parse_vector("prefix", prefix)?;
            let method = match method {
                BMethod::Closed => Method::Closed,
                BMethod::Series => Method::Series { truncation: *trunc },
                BMethod::Operator => Method::Operator,
            };
            render::bvalue(&c, &prefix, &compute_b(&c, &prefix, method)?)
        }
        Command::Limit {
            c,
            prefix,
            steps,
            tol,
        } => {
            let c = param_vec(c)?;
            let prefix = parse_vector("prefix", prefix)?;
            let tol = parse_rational("tol", tol)?;
            let report = limit_verify(&c, &prefix, *steps, &tol)?;
            let pass = report.pass;
            return Ok((render::limit(&c, &prefix, &report), pass));
        }
        Command::Table { kind, rows } => {
            let (name, body): (&str, Vec<(u32, Vec<_>)>) = match kind {
                TableKind::Eulerian => (
                    "eulerian",
                    (0..*rows)
                        .map(|r| (r, eulerian_row_values(r as usize)))
                        .collect(),
                ),
                TableKind::Stirling1 => (
                    "stirling1",
                    (1..=*rows)
                        .map(|n| (n, stirling1_row_values(n as usize)[1..].to_vec()))
                        .collect(),
                ),
                TableKind::Stirling2 => (
                    "stirling2",
                    (1..=*rows)
                        .map(|n| (n, stirling2_row_values(n as usize)[1..].to_vec()))
                        .collect(),
                ),
            };
            render::table(name, &body)
        }
        Command::Poly { kind, k, n, method } => {
            let (name, poly) = match (kind, method) {
                (PolyKind::Gamma, PolyMethod::Formula) => ("gamma", gamma_poly(*k, *n)?.poly),
                (PolyKind::Gamma, PolyMethod::Alternate) => ("gamma", gamma_via_frobenius(*k, *n)?),
                (PolyKind::Delta, PolyMethod::Formula) => ("delta", delta_poly(*n, *k)?.poly),
                (PolyKind::Delta, PolyMethod::Alternate) => (
                    "delta",
                    delta_poly_bruteforce(*n, *k, pathcount::gamma_delta::DEFAULT_SUBSET_BUDGET)?,
                ),
            };
            render::poly(name, *k as u64, *n as u64, &poly)
        }
        Command::Thm1 { k, a } => {
            render::poly("thm1", *k as u64, *a, &derivative_closed_form(*k, *a)?)
        }
        Command::Alpha { n, c_last } => {
            render::alpha(*n, *c_last, &alpha_decomposition(*n, *c_last))
        }
        Command::Verify { identity, max_n } => {
            let reports = if identity == "all" {
                verify_all(&Canonical, |id| match max_n {
                    Some(m) => (*m).min(id.hard_limit()),
                    None => id.default_ceiling(),
                })?
            } else {
                let id: Identity = identity.parse()?;
                vec![verify(
                    id,
                    &Canonical,
                    max_n.unwrap_or(id.default_ceiling()),
                )?]
            };
            let pass = reports.iter().all(|r| r.passed());
            return Ok((render::reports(&reports, identity != "all"), pass));
        }
    };
    Ok((output, true))
}

fn emit(cli: &Cli, output: &Output) -> Result<(), Failure> {
    let text = output.render(cli.format)?;
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(output, pass)| {
        emit(&cli, &output)?;
        if pass {
            Ok(())
        } else {
            Err(Failure::Verification)
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Verification => eprintln!("pathcount: verification failed"),
                Failure::Malformed(e) => eprintln!("pathcount: {e}"),
                Failure::Core(e) => eprintln!("pathcount: {e}"),
                Failure::Io(e) => eprintln!("pathcount: i/o error: {e}"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
