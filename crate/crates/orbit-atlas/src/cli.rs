//! Command-line front-end: parses group-spec files, dispatches computations,
//! and emits deterministic machine-readable JSON reports.
//!
//! Exit codes: 0 success (and every check passed), 1 internal disagreement or
//! failed verification, 2 unusable input, 3 a desk-scale guardrail fired.

use crate::error::Error;
use crate::field::rational_to_string;
use crate::incidence;
use crate::orbits::{
    burnside_count, orbit_count, verify_flag_counts, verify_grassmannian_counts,
    FlagCountsReport, GrassmannianCountsReport, GroupSpec, Space, DEFAULT_CLOSURE_CAP,
};
use crate::partitions::{
    compositions_of, q_binomial, q_multinomial, raising_witness, Composition, Partition,
};
use crate::skeleton::{
    enumerate_skeletons, verify_dual, verify_merge_split, verify_perm_invariance, Skeleton,
};
use crate::subspaces::{enumerate_flags, enumerate_subspaces};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::path::PathBuf;

/// Largest weight accepted by `verify --all-skeletons`.
const SKELETON_VERIFY_LIMIT: u64 = 8;

pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn from_math(err: Error) -> CliError {
        let code = match err {
            Error::TooLarge { .. } | Error::CapExceeded { .. } => 3,
            Error::NonIntegerAverage | Error::ChoiceDependent { .. } => 1,
            _ => 2,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::from_math(err)
    }
}

#[derive(Parser)]
#[command(
    name = "orbit-atlas",
    about = "Exact orbit counts and fixed-locus dimensions for matrix groups \
             on Grassmannians and flag varieties over prime fields",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Pretty-print the JSON report
    #[arg(long, global = true)]
    json_indent: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Count orbits of the group in a spec file on a Grassmannian or flag variety
    Orbits(OrbitsArgs),
    /// Check the counting theorems for a spec file, or the dimension
    /// statements over all skeletons of a given weight
    Verify(VerifyArgs),
    /// Partition calculus: dominance, conjugation, witnesses, q-analogs
    Partition(PartitionArgs),
    /// The incidence-transform data (A matrix, epsilon vector, identity check)
    Incidence(IncidenceArgs),
    /// Fixed-locus dimension of a flag variety under a skeleton
    FixedDim(FixedDimArgs),
    /// Enumerate a Grassmannian or flag variety and cross-check its size
    Enumerate(EnumerateArgs),
}

#[derive(Args)]
struct OrbitsArgs {
    /// JSON file {"p": .., "n": .., "generators": [[[..]]]}
    spec: PathBuf,
    /// Act on the Grassmannian G(k, V)
    #[arg(long)]
    grass: Option<usize>,
    /// Act on the flag variety of this composition, e.g. 1,2,1
    #[arg(long)]
    flag: Option<String>,
    /// Group-closure cap for the Burnside count
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON group-spec file
    spec: Option<PathBuf>,
    /// Check dual/permutation/merge-split over all skeletons of this weight
    #[arg(long)]
    all_skeletons: Option<u64>,
    /// Group-closure cap for cross-validation
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct PartitionArgs {
    #[command(subcommand)]
    action: PartitionAction,
}

#[derive(Subcommand)]
enum PartitionAction {
    /// Compare two partitions in dominance order
    Dominance {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Conjugate a partition
    Conjugate {
        #[arg(long)]
        parts: String,
    },
    /// Raising-operator exponents carrying --from to --to, if dominated
    Witness {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Gaussian binomial [n k]_q
    Qbinom {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        q: u64,
    },
    /// Gaussian multinomial of a composition
    Qmultinom {
        #[arg(long)]
        terms: String,
        #[arg(long)]
        q: u64,
    },
}

#[derive(Args)]
struct IncidenceArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    p: u64,
}

#[derive(Args)]
struct FixedDimArgs {
    /// Skeleton blocks, one partition per value with parts joined by dots,
    /// e.g. --blocks 2.2 3.1
    #[arg(long, num_args = 1.., required = true)]
    blocks: Vec<String>,
    /// Flag-variety composition, e.g. 2,2
    #[arg(long)]
    comp: String,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Enumerate flags of this composition instead of a Grassmannian
    #[arg(long)]
    flag: Option<String>,
    #[arg(long)]
    p: u64,
    /// Include the enumerated items in the report
    #[arg(long)]
    list: bool,
}

#[derive(Serialize)]
struct OrbitsReportJson {
    orbit_count: usize,
    orbit_sizes: Vec<usize>,
    burnside_count: Option<u64>,
    agreement: bool,
}

#[derive(Serialize)]
struct VerifySpecReportJson {
    p: u64,
    n: usize,
    grassmannians: GrassmannianCountsReport,
    flags: FlagCountsReport,
    cross_validation: Vec<CrossValidationJson>,
    all_pass: bool,
}

#[derive(Serialize)]
struct CrossValidationJson {
    space: String,
    bfs: u64,
    burnside: Option<u64>,
    agreement: bool,
}

#[derive(Serialize)]
struct VerifySkeletonsReportJson {
    n: u64,
    skeletons: usize,
    dual_ok: bool,
    permutation_invariance_ok: bool,
    merge_split_ok: bool,
    all_pass: bool,
}

#[derive(Serialize)]
struct DominanceJson {
    dominates: bool,
    dominated_by: bool,
}

#[derive(Serialize)]
struct ConjugateJson {
    conjugate: Vec<u64>,
}

#[derive(Serialize)]
struct WitnessJson {
    witness: Option<Vec<u64>>,
}

#[derive(Serialize)]
struct BigValueJson {
    value: String,
}

#[derive(Serialize)]
struct IncidenceJson {
    #[serde(rename = "A")]
    a: Vec<Vec<u64>>,
    epsilon: Vec<String>,
    identity_check: bool,
}

#[derive(Serialize)]
struct FixedDimJson {
    dim: u64,
}

#[derive(Serialize)]
struct EnumerateJson {
    kind: String,
    count: usize,
    expected: String,
    matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    items: Option<Vec<String>>,
}

/// The on-disk group-spec format: UTF-8 JSON with exactly the keys
/// {p, n, generators}; generator entries are integers reduced mod p on load.
#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSpecFile {
    p: u64,
    n: usize,
    generators: Vec<Vec<Vec<i64>>>,
}

fn load_spec(path: &PathBuf) -> Result<GroupSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let file: GroupSpecFile = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("cannot parse {}: {e}", path.display())))?;
    let field = crate::field::PrimeField::new(file.p).map_err(CliError::from_math)?;
    let mut generators = Vec::with_capacity(file.generators.len());
    for (gi, rows) in file.generators.iter().enumerate() {
        if rows.len() != file.n || rows.iter().any(|r| r.len() != file.n) {
            return Err(CliError::input(format!(
                "generator {gi} is not an {n}x{n} matrix",
                n = file.n
            )));
        }
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        generators.push(field.matrix_from_int(file.n, file.n, &flat));
    }
    GroupSpec::new(file.p, file.n, generators).map_err(CliError::from_math)
}

fn parse_u64_list(text: &str, what: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| CliError::input(format!("cannot parse {what} from {text:?}")))
        })
        .collect()
}

fn parse_partition(text: &str, sep: char) -> Result<Partition, CliError> {
    let parts = text
        .split(sep)
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| CliError::input(format!("cannot parse partition from {text:?}")))
        })
        .collect::<Result<Vec<u64>, CliError>>()?;
    Partition::new(parts).map_err(CliError::from_math)
}

fn closure_cap(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("ORBIT_ATLAS_CAP")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_CLOSURE_CAP)
}

fn render<T: Serialize>(value: &T, indent: bool) -> String {
    if indent {
        serde_json::to_string_pretty(value).expect("reports serialize")
    } else {
        serde_json::to_string(value).expect("reports serialize")
    }
}

/// Run the parsed command; the Ok value is (json, exit code).
fn dispatch(cli: &Cli) -> Result<(String, i32), CliError> {
    let indent = cli.json_indent;
    match &cli.command {
        Command::Orbits(args) => {
            let spec = load_spec(&args.spec)?;
            let space = match (&args.grass, &args.flag) {
                (Some(k), None) => Space::Grassmannian(*k),
                (None, Some(text)) => {
                    let terms = parse_u64_list(text, "composition")?;
                    Space::Flags(Composition::new(terms))
                }
                _ => {
                    return Err(CliError::input(
                        "exactly one of --grass and --flag is required",
                    ))
                }
            };
            let report = orbit_count(&spec, &space)?;
            let cap = closure_cap(args.cap);
            let (burnside, agreement) = match burnside_count(&spec, &space, cap) {
                Ok(b) => (Some(b), b == report.orbit_count as u64),
                Err(Error::CapExceeded { .. }) => (None, true),
                Err(e) => return Err(e.into()),
            };
            let json = render(
                &OrbitsReportJson {
                    orbit_count: report.orbit_count,
                    orbit_sizes: report.orbit_sizes,
                    burnside_count: burnside,
                    agreement,
                },
                indent,
            );
            Ok((json, if agreement { 0 } else { 1 }))
        }
        Command::Verify(args) => match (&args.spec, args.all_skeletons) {
            (Some(path), None) => {
                let spec = load_spec(path)?;
                verify_spec_report(&spec, closure_cap(args.cap), indent)
            }
            (None, Some(n)) => verify_skeletons_report(n, indent),
            _ => Err(CliError::input(
                "pass either a spec file or --all-skeletons <n>",
            )),
        },
        Command::Partition(args) => partition_report(&args.action, indent).map(|j| (j, 0)),
        Command::Incidence(args) => {
            let a = incidence::build_a(args.n, args.r, args.k, args.p)?;
            let eps = incidence::solve_epsilon(args.n, args.r, args.k, args.p)?;
            let identity_check = incidence::check_transform(args.n, args.r, args.k, args.p)?;
            let json = render(
                &IncidenceJson {
                    a,
                    epsilon: eps.coefficients().iter().map(rational_to_string).collect(),
                    identity_check,
                },
                indent,
            );
            Ok((json, if identity_check { 0 } else { 1 }))
        }
        Command::FixedDim(args) => {
            let blocks = args
                .blocks
                .iter()
                .map(|b| parse_partition(b, '.'))
                .collect::<Result<Vec<Partition>, CliError>>()?;
            let skeleton = Skeleton::new(blocks)?;
            let comp = Composition::new(parse_u64_list(&args.comp, "composition")?);
            let dim = skeleton.fixed_flag_dim(&comp)?;
            Ok((render(&FixedDimJson { dim }, indent), 0))
        }
        Command::Enumerate(args) => enumerate_report(args, indent).map(|j| (j, 0)),
    }
}

fn verify_spec_report(
    spec: &GroupSpec,
    cap: usize,
    indent: bool,
) -> Result<(String, i32), CliError> {
    let grassmannians = verify_grassmannian_counts(spec)?;
    let flags = verify_flag_counts(spec)?;
    let mut cross_validation = Vec::new();
    let mut cross_ok = true;
    let mut spaces: Vec<(String, Space)> = (0..=spec.n())
        .map(|k| (format!("grass {k}"), Space::Grassmannian(k)))
        .collect();
    for a in compositions_of(spec.n() as u64) {
        let terms: Vec<String> = a.terms().iter().map(|t| t.to_string()).collect();
        spaces.push((format!("flag {}", terms.join(",")), Space::Flags(a)));
    }
    for (name, space) in spaces {
        let bfs = orbit_count(spec, &space)?.orbit_count as u64;
        let (burnside, agreement) = match burnside_count(spec, &space, cap) {
            Ok(b) => (Some(b), b == bfs),
            Err(Error::CapExceeded { .. }) => (None, true),
            Err(e) => return Err(e.into()),
        };
        cross_ok &= agreement;
        cross_validation.push(CrossValidationJson {
            space: name,
            bfs,
            burnside,
            agreement,
        });
    }
    let all_pass = grassmannians.duality_holds
        && grassmannians.monotonicity_holds
        && flags.permutation_invariance_holds
        && flags.dominance_monotonicity_holds
        && cross_ok;
    let json = render(
        &VerifySpecReportJson {
            p: spec.p(),
            n: spec.n(),
            grassmannians,
            flags,
            cross_validation,
            all_pass,
        },
        indent,
    );
    Ok((json, if all_pass { 0 } else { 1 }))
}

fn verify_skeletons_report(n: u64, indent: bool) -> Result<(String, i32), CliError> {
    if n == 0 || n > SKELETON_VERIFY_LIMIT {
        return Err(CliError {
            code: 3,
            message: format!(
                "skeleton verification is capped at weight {SKELETON_VERIFY_LIMIT}, got {n}"
            ),
        });
    }
    let skeletons = enumerate_skeletons(n);
    let comps = compositions_of(n);
    let mut dual_ok = true;
    let mut perm_ok = true;
    let mut merge_ok = true;
    for s in &skeletons {
        dual_ok &= verify_dual(s);
        for a in &comps {
            perm_ok &= verify_perm_invariance(s, a)?;
            for i in 0..a.len().saturating_sub(1) {
                let total = a.terms()[i] + a.terms()[i + 1];
                let bound = a.terms()[i] * a.terms()[i + 1];
                for b in 0..=total {
                    let c = total - b;
                    if b * c <= bound {
                        merge_ok &= verify_merge_split(s, a, i, b, c)?;
                    }
                }
            }
        }
    }
    let all_pass = dual_ok && perm_ok && merge_ok;
    let json = render(
        &VerifySkeletonsReportJson {
            n,
            skeletons: skeletons.len(),
            dual_ok,
            permutation_invariance_ok: perm_ok,
            merge_split_ok: merge_ok,
            all_pass,
        },
        indent,
    );
    Ok((json, if all_pass { 0 } else { 1 }))
}

fn partition_report(action: &PartitionAction, indent: bool) -> Result<String, CliError> {
    match action {
        PartitionAction::Dominance { lhs, rhs } => {
            let l = parse_partition(lhs, ',')?;
            let r = parse_partition(rhs, ',')?;
            Ok(render(
                &DominanceJson {
                    dominates: l.dominates(&r)?,
                    dominated_by: r.dominates(&l)?,
                },
                indent,
            ))
        }
        PartitionAction::Conjugate { parts } => {
            let p = parse_partition(parts, ',')?;
            Ok(render(
                &ConjugateJson {
                    conjugate: p.conjugate().parts().to_vec(),
                },
                indent,
            ))
        }
        PartitionAction::Witness { from, to } => {
            let mu = parse_partition(from, ',')?;
            let lambda = parse_partition(to, ',')?;
            Ok(render(
                &WitnessJson {
                    witness: raising_witness(&mu, &lambda)?,
                },
                indent,
            ))
        }
        PartitionAction::Qbinom { n, k, q } => Ok(render(
            &BigValueJson {
                value: q_binomial(*n, *k, *q).to_string(),
            },
            indent,
        )),
        PartitionAction::Qmultinom { terms, q } => {
            let a = Composition::new(parse_u64_list(terms, "composition")?);
            Ok(render(
                &BigValueJson {
                    value: q_multinomial(&a, *q).to_string(),
                },
                indent,
            ))
        }
    }
}

fn enumerate_report(args: &EnumerateArgs, indent: bool) -> Result<String, CliError> {
    match (&args.flag, args.n, args.k) {
        (Some(text), None, None) => {
            let a = Composition::new(parse_u64_list(text, "composition")?);
            let flags = enumerate_flags(&a, args.p)?;
            let expected = q_multinomial(&a, args.p).to_string();
            let matches = expected == flags.len().to_string();
            Ok(render(
                &EnumerateJson {
                    kind: "flags".into(),
                    count: flags.len(),
                    expected,
                    matches,
                    items: args
                        .list
                        .then(|| flags.iter().map(|f| f.to_string()).collect()),
                },
                indent,
            ))
        }
        (None, Some(n), Some(k)) => {
            let spaces = enumerate_subspaces(n, k, args.p)?;
            let expected = q_binomial(n as u64, k as u64, args.p).to_string();
            let matches = expected == spaces.len().to_string();
            Ok(render(
                &EnumerateJson {
                    kind: "grassmannian".into(),
                    count: spaces.len(),
                    expected,
                    matches,
                    items: args
                        .list
                        .then(|| spaces.iter().map(|s| s.to_string()).collect()),
                },
                indent,
            ))
        }
        _ => Err(CliError::input(
            "pass either --n and --k, or --flag, together with --p",
        )),
    }
}

/// Entry point used by the binary; returns the process exit code.
/// A panic anywhere below is reported as an internal error, never raw.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| dispatch(&cli)));
    match outcome {
        Ok(Ok((json, code))) => {
            println!("{json}");
            code
        }
        Ok(Err(err)) => {
            eprintln!("error: {}", err.message);
            err.code
        }
        Err(panic) => {
            let detail = panic
                .downcast_ref::<String>()
                .map(|s| s.as_str())
                .or_else(|| panic.downcast_ref::<&str>().copied())
                .unwrap_or("unknown panic");
            eprintln!("internal error: {detail}");
            1
        }
    }
}

/// Test hook: run against an argument vector, capturing output and code.
pub fn run_from<I, T>(args: I) -> (Option<String>, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => match dispatch(&cli) {
            Ok((json, code)) => (Some(json), code),
            Err(err) => {
                eprintln!("error: {}", err.message);
                (None, err.code)
            }
        },
        Err(e) => {
            let _ = e.print();
            (None, 2)
        }
    }
}
