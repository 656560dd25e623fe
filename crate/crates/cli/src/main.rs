//! Batch driver: one-shot certificates, corpus generation, and suite
//! runs with machine-readable reports.
//!
//! Exit codes: 0 all certified, 1 an invariant failed, 2 bad usage or
//! malformed input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::json;

use daugavet_core::corpus::{rand_sparse, rng_for, ChaCha8Rng};
use daugavet_core::renorm::{lemma41_suite, ModelSeminorm};
use daugavet_core::signs::{f_coord, g_sign, Sign};
use daugavet_core::{
    double_norming_witness, equivalence_scan, format_rat, inf_sum_counterexample, model_norm_parts,
    net_radius_bruteforce, norm_l1, opnorm_id_plus_rank_one, parse_rat, pattern_witness, rat,
    rat_int, renorm_type_check, run_suite, slice_point_cert, thickness_witness,
    weakstar_slice_cert, CertReport, Corpus, DualVector, EmbeddingModel, Error, FiniteNet,
    InfSumFunctional, ModelConfig, Rat, RankOneOp, SparseVec, SuiteConfig, SuiteName,
};

#[derive(Parser)]
#[command(
    name = "daugavet",
    version,
    about = "Exact rational certificates: Daugavet equations on l1, independent sign families, thickness witnesses, and block renormings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print sign tables and pattern or double-norming witnesses
    Signs(SignsArgs),
    /// Daugavet defect of Id + y* (x) x on l1
    Defect(DefectArgs),
    /// Certify a point of the slice of y* at l1 distance exactly 2
    CertifySlice(CertifySliceArgs),
    /// Certify a weak* slice functional at sup distance exactly 2
    CertifyWeakstar(CertifyWeakstarArgs),
    /// Certify that l1 (+)inf R fails the Daugavet equation at z*
    Infsum(InfsumArgs),
    /// Thickness witness at distance 2 from every point of a net
    Thickness(ThicknessArgs),
    /// Brute-force covering radius of a net in l1^d
    Radius(RadiusArgs),
    /// Renorming checks on a disjoint-block embedding model
    Renorm(RenormArgs),
    /// Write a deterministic corpus of JSON inputs
    GenCorpus(GenCorpusArgs),
    /// Run a named certificate suite and report per-case verdicts
    RunSuite(RunSuiteArgs),
}

#[derive(Args)]
struct SignsArgs {
    /// Which table to print: g (independent family) or f (modified)
    #[arg(long, default_value = "g")]
    table: String,
    #[arg(long, default_value_t = 8)]
    rows: u64,
    #[arg(long, default_value_t = 16)]
    cols: u64,
    /// Sign pattern over rows 1.., e.g. "+-+" or "+,-,+"; prints the
    /// least column realizing it
    #[arg(long)]
    witness: Option<String>,
    /// Least admissible witness column
    #[arg(long, default_value_t = 1)]
    j_min: u64,
    /// Vector x (JSON or file) for a double-norming witness
    #[arg(long)]
    x: Option<String>,
    /// Tail cutoff: find n > m with f_n(x) = ||x||_1
    #[arg(long)]
    m: Option<u64>,
}

#[derive(Args)]
struct DefectArgs {
    /// Functional y* (JSON or file): {"combo": {...}, "correction": {...}}
    #[arg(long)]
    y_star: String,
    /// Vector x (JSON or file): {"1": "p/q", ...}
    #[arg(long)]
    x: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CertifySliceArgs {
    #[arg(long)]
    x: String,
    #[arg(long)]
    y_star: String,
    /// Slice width; the certificate is uniform in eps
    #[arg(long, default_value = "0")]
    eps: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CertifyWeakstarArgs {
    #[arg(long)]
    x_star: String,
    /// Predual point generating the weak* slice
    #[arg(long)]
    x: String,
    #[arg(long, default_value = "0")]
    eps: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct InfsumArgs {
    /// The l1* component x0* of z* = (x0*, b0)
    #[arg(long)]
    x_part: String,
    /// The scalar component, a nonzero rational with ||x0*|| + |b0| = 1
    #[arg(long)]
    b0: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ThicknessArgs {
    /// Net of unit vectors (JSON or file): [{"1": "1"}, ...]
    #[arg(long)]
    net: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RadiusArgs {
    /// Ambient dimension (1..=4)
    #[arg(long)]
    d: u64,
    #[arg(long)]
    net: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RenormArgs {
    /// Model config (JSON or file); defaults to the consecutive pairing
    #[arg(long)]
    model: Option<String>,
    /// Print |||x||| and its two summands for --x
    #[arg(long)]
    norm: bool,
    /// Certify |||x + y_n||| = |||x||| + 1 for --x and --n
    #[arg(long)]
    check_type: bool,
    /// Scan sampled ratios |||x||| / ||x||_1 against [1/3, 2]
    #[arg(long)]
    scan: bool,
    /// Check items (a)-(f) on sampled vectors
    #[arg(long)]
    lemma41: bool,
    #[arg(long)]
    x: Option<String>,
    /// Generator index; defaults to the first index past stabilization
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, default_value_t = 50)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    max_support: u64,
    #[arg(long, default_value_t = 40)]
    max_gen: u64,
    #[arg(long, default_value_t = 100)]
    max_denom: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenCorpusArgs {
    /// Output directory; created if missing
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    cases: u64,
    #[arg(long, default_value_t = 6)]
    max_support: u64,
    #[arg(long, default_value_t = 40)]
    max_gen: u64,
    #[arg(long, default_value_t = 100)]
    max_denom: i64,
}

#[derive(Args)]
struct RunSuiteArgs {
    /// defect | signs | thickness | renorm | all
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    cases: u64,
    #[arg(long, default_value_t = 6)]
    max_support: u64,
    #[arg(long, default_value_t = 40)]
    max_gen: u64,
    #[arg(long, default_value_t = 100)]
    max_denom: i64,
    /// Write the full report JSON here
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the full report instead of the summary
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Signs(args) => cmd_signs(args),
        Command::Defect(args) => cmd_defect(args),
        Command::CertifySlice(args) => cmd_certify_slice(args),
        Command::CertifyWeakstar(args) => cmd_certify_weakstar(args),
        Command::Infsum(args) => cmd_infsum(args),
        Command::Thickness(args) => cmd_thickness(args),
        Command::Radius(args) => cmd_radius(args),
        Command::Renorm(args) => cmd_renorm(args),
        Command::GenCorpus(args) => cmd_gen_corpus(args),
        Command::RunSuite(args) => cmd_run_suite(args),
    }
}

/// Inline JSON if the argument looks like JSON, else a file path.
fn parse_json_arg<T: DeserializeOwned>(what: &str, raw: &str) -> anyhow::Result<T> {
    let trimmed = raw.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        raw.to_string()
    } else {
        fs::read_to_string(raw).with_context(|| format!("reading {what} from {raw}"))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing {what}"))
}

fn parse_rat_arg(what: &str, raw: &str) -> anyhow::Result<Rat> {
    parse_rat(raw).with_context(|| format!("parsing {what}"))
}

fn print_json<T: serde::Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn describe_witness(report: &CertReport) -> String {
    if let Some(j) = report.witness_index() {
        format!("index {j}")
    } else if let Some(v) = report.witness_vector() {
        format!("y = {v}")
    } else if let Some(f) = report.witness_functional() {
        serde_json::to_string(f).unwrap_or_else(|_| "functional".into())
    } else {
        "none".into()
    }
}

/// Certificate-style exit: certified 0, refuted 1, bad input Err.
fn finish_cert(
    result: daugavet_core::Result<CertReport>,
    label: &str,
    json: bool,
) -> anyhow::Result<u8> {
    match result {
        Ok(report) => {
            if json {
                print_json(&report)?;
            } else {
                println!(
                    "{label} = {} at {}",
                    format_rat(&report.value),
                    describe_witness(&report)
                );
            }
            Ok(0)
        }
        Err(Error::CertificationFailed(msg)) => {
            eprintln!("certification failed: {msg}");
            Ok(1)
        }
        Err(e) => Err(e.into()),
    }
}

fn parse_pattern(raw: &str) -> anyhow::Result<Vec<Sign>> {
    let mut pattern = Vec::new();
    for c in raw.chars() {
        match c {
            '+' => pattern.push(Sign::Plus),
            '-' => pattern.push(Sign::Minus),
            ',' | ' ' => {}
            other => bail!("pattern may only contain + - and separators, got {other:?}"),
        }
    }
    if pattern.is_empty() {
        bail!("empty sign pattern");
    }
    Ok(pattern)
}

fn cmd_signs(args: SignsArgs) -> anyhow::Result<u8> {
    if let Some(raw) = &args.witness {
        let pattern = parse_pattern(raw)?;
        let j = pattern_witness(&pattern, args.j_min)?;
        let realized: String = (1..=pattern.len() as u64)
            .map(|s| g_sign(s, j).to_string())
            .collect();
        println!("witness column j = {j} realizes {realized}");
        return Ok(0);
    }
    if let (Some(x_raw), Some(m)) = (&args.x, args.m) {
        let x: SparseVec = parse_json_arg("x", x_raw)?;
        let n = double_norming_witness(&x, m)?;
        let value = DualVector::f_basis(n).eval(&x);
        println!(
            "n = {n} > {m}: f_n(x) = {}, ||x||_1 = {}",
            format_rat(&value),
            format_rat(&norm_l1(&x))
        );
        return Ok(u8::from(value != norm_l1(&x)));
    }
    let f_table = match args.table.as_str() {
        "g" => false,
        "f" => true,
        other => bail!("table must be g or f, got {other:?}"),
    };
    if args.rows == 0 || args.cols == 0 {
        bail!("rows and cols must be positive");
    }
    let head: String = (1..=args.cols).map(|j| format!("{:>2}", j % 10)).collect();
    println!("{:>4} |{head}", if f_table { "n\\j" } else { "s\\j" });
    println!("{:->5}+{:->width$}", "", "", width = 2 * args.cols as usize);
    for s in 1..=args.rows {
        let row: String = (1..=args.cols)
            .map(|j| {
                let sign = if f_table { f_coord(s, j) } else { g_sign(s, j) };
                format!("{:>2}", sign.to_string())
            })
            .collect();
        println!("{s:>4} |{row}");
    }
    Ok(0)
}

fn cmd_defect(args: DefectArgs) -> anyhow::Result<u8> {
    let y_star: DualVector = parse_json_arg("y*", &args.y_star)?;
    let x: SparseVec = parse_json_arg("x", &args.x)?;
    let op = RankOneOp::new(y_star, x);
    let t_norm = op.operator_norm()?;
    let (opnorm, column) = opnorm_id_plus_rank_one(&op)?;
    let defect = rat_int(1) + &t_norm - &opnorm;
    if args.json {
        print_json(&json!({
            "operator_norm": format_rat(&t_norm),
            "opnorm_id_plus": format_rat(&opnorm),
            "witness_column": column,
            "defect": format_rat(&defect),
        }))?;
    } else {
        println!(
            "||T|| = {}, ||Id + T|| = {} at column {column}, defect = {}",
            format_rat(&t_norm),
            format_rat(&opnorm),
            format_rat(&defect)
        );
    }
    Ok(u8::from(defect != rat_int(0)))
}

fn cmd_certify_slice(args: CertifySliceArgs) -> anyhow::Result<u8> {
    let x: SparseVec = parse_json_arg("x", &args.x)?;
    let y_star: DualVector = parse_json_arg("y*", &args.y_star)?;
    let eps = parse_rat_arg("eps", &args.eps)?;
    finish_cert(slice_point_cert(&x, &y_star, &eps), "||x + y||", args.json)
}

fn cmd_certify_weakstar(args: CertifyWeakstarArgs) -> anyhow::Result<u8> {
    let x_star: DualVector = parse_json_arg("x*", &args.x_star)?;
    let x: SparseVec = parse_json_arg("x", &args.x)?;
    let eps = parse_rat_arg("eps", &args.eps)?;
    finish_cert(
        weakstar_slice_cert(&x_star, &x, &eps),
        "||x* + f_n||",
        args.json,
    )
}

fn cmd_infsum(args: InfsumArgs) -> anyhow::Result<u8> {
    let x_part: DualVector = parse_json_arg("x0*", &args.x_part)?;
    let b0 = parse_rat_arg("b0", &args.b0)?;
    let z_star = InfSumFunctional {
        x_part,
        scalar_part: b0,
    };
    let obstruction = inf_sum_counterexample(&z_star)?;
    if args.json {
        print_json(&obstruction)?;
    } else {
        println!(
            "extreme sup = {} <= {}, defect >= {}",
            format_rat(&obstruction.extreme_sup),
            format_rat(&obstruction.sup_bound),
            format_rat(&obstruction.defect_lower_bound)
        );
    }
    Ok(u8::from(obstruction.defect_lower_bound <= rat_int(0)))
}

fn cmd_thickness(args: ThicknessArgs) -> anyhow::Result<u8> {
    let net: FiniteNet = parse_json_arg("net", &args.net)?;
    let (y, distances) = thickness_witness(&net);
    let all_two = distances.iter().all(|d| *d == rat_int(2));
    if args.json {
        print_json(&json!({
            "witness": y,
            "distances": distances.iter().map(format_rat).collect::<Vec<_>>(),
        }))?;
    } else {
        println!(
            "y = {y}: all {} distances equal {}",
            distances.len(),
            format_rat(&distances[0])
        );
    }
    Ok(u8::from(!all_two))
}

fn cmd_radius(args: RadiusArgs) -> anyhow::Result<u8> {
    let net: FiniteNet = parse_json_arg("net", &args.net)?;
    let (radius, maximizer) = net_radius_bruteforce(args.d, &net)?;
    if args.json {
        print_json(&json!({
            "radius": format_rat(&radius),
            "maximizer": maximizer,
        }))?;
    } else {
        println!("radius = {} attained at y = {maximizer}", format_rat(&radius));
    }
    Ok(0)
}

fn cmd_renorm(args: RenormArgs) -> anyhow::Result<u8> {
    let model = match &args.model {
        None => EmbeddingModel::consecutive(),
        Some(raw) => {
            let cfg: ModelConfig = parse_json_arg("model", raw)?;
            EmbeddingModel::from_config(&cfg)?
        }
    };
    if !(args.norm || args.check_type || args.scan || args.lemma41) {
        bail!("pick at least one of --norm, --check-type, --scan, --lemma41");
    }
    let parse_x = |what: &str| -> anyhow::Result<SparseVec> {
        match &args.x {
            Some(raw) => parse_json_arg("x", raw),
            None => bail!("{what} needs --x"),
        }
    };
    let mut exit = 0u8;

    if args.norm {
        let x = parse_x("--norm")?;
        let parts = model_norm_parts(&x, &model)?;
        if args.json {
            print_json(&parts)?;
        } else {
            println!(
                "|||x||| = {} (operator {}, quotient {})",
                format_rat(&parts.total),
                format_rat(&parts.t_norm),
                format_rat(&parts.quotient_dist)
            );
        }
    }

    if args.check_type {
        let x = parse_x("--check-type")?;
        let n = args.n.unwrap_or_else(|| model.stabilization_bound(&x) + 1);
        let code = finish_cert(
            renorm_type_check(&x, n, &model),
            "|||x + y_n|||",
            args.json,
        )?;
        exit = exit.max(code);
    }

    // sampled vectors are nonzero so every ratio is defined
    let sample = |rng: &mut ChaCha8Rng| {
        rand_sparse(rng, 1, args.max_support, args.max_gen, args.max_denom)
    };

    if args.scan {
        let mut rng = rng_for(args.seed, 20);
        let mut samples: Vec<SparseVec> = (0..args.samples).map(|_| sample(&mut rng)).collect();
        samples.push(SparseVec::basis(1));
        match equivalence_scan(&samples, &model) {
            Ok((lo, hi)) => {
                if args.json {
                    print_json(&json!({
                        "samples": samples.len(),
                        "min_ratio": format_rat(&lo),
                        "max_ratio": format_rat(&hi),
                    }))?;
                } else {
                    println!(
                        "{} ratios in [{}, {}] inside [1/3, 2]",
                        samples.len(),
                        format_rat(&lo),
                        format_rat(&hi)
                    );
                }
            }
            Err(Error::CertificationFailed(msg)) => {
                eprintln!("certification failed: {msg}");
                exit = exit.max(1);
            }
            Err(e) => return Err(e.into()),
        }
    }

    if args.lemma41 {
        let mut rng = rng_for(args.seed, 21);
        let samples: Vec<SparseVec> = (0..args.samples).map(|_| sample(&mut rng)).collect();
        let scalars = [rat(1, 2), rat_int(1), rat(3, 2), rat_int(2), rat_int(3)];
        let report = lemma41_suite(&samples, &scalars, &ModelSeminorm, &model)?;
        if args.json {
            print_json(&report)?;
        } else {
            for item in &report.items {
                println!(
                    "({}) {}: {} ({} checks)",
                    item.item,
                    item.description,
                    if item.passed { "ok" } else { "FAIL" },
                    item.checked
                );
            }
        }
        if !report.all_pass() {
            exit = exit.max(1);
        }
    }
    Ok(exit)
}

fn write_pretty<T: serde::Serialize>(path: &PathBuf, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cmd_gen_corpus(args: GenCorpusArgs) -> anyhow::Result<u8> {
    let cfg = SuiteConfig {
        seed: args.seed,
        cases: args.cases,
        max_support: args.max_support,
        max_gen: args.max_gen,
        max_denom: args.max_denom,
    };
    let corpus = Corpus::generate(&cfg)?;
    for sub in ["vectors", "functionals", "nets"] {
        fs::create_dir_all(args.out.join(sub))
            .with_context(|| format!("creating {}", args.out.join(sub).display()))?;
    }
    for (i, v) in corpus.vectors.iter().enumerate() {
        write_pretty(&args.out.join(format!("vectors/vec-{i:04}.json")), v)?;
    }
    for (i, f) in corpus.functionals.iter().enumerate() {
        write_pretty(&args.out.join(format!("functionals/fn-{i:04}.json")), f)?;
    }
    for (i, net) in corpus.nets.iter().enumerate() {
        write_pretty(&args.out.join(format!("nets/net-{i:04}.json")), net)?;
    }
    write_pretty(
        &args.out.join("manifest.json"),
        &json!({
            "config": cfg,
            "vectors": corpus.vectors.len(),
            "functionals": corpus.functionals.len(),
            "nets": corpus.nets.len(),
        }),
    )?;
    println!(
        "wrote {} files to {}",
        3 * cfg.cases + 1,
        args.out.display()
    );
    Ok(0)
}

fn cmd_run_suite(args: RunSuiteArgs) -> anyhow::Result<u8> {
    let name: SuiteName = args.suite.parse()?;
    let cfg = SuiteConfig {
        seed: args.seed,
        cases: args.cases,
        max_support: args.max_support,
        max_gen: args.max_gen,
        max_denom: args.max_denom,
    };
    let report = run_suite(name, &cfg)?;
    if let Some(path) = &args.out {
        write_pretty(path, &report)?;
    }
    if args.json {
        print_json(&report)?;
    } else {
        println!(
            "suite {}: {} cases, {} passed, {} failed (seed {})",
            report.suite,
            report.summary.total,
            report.summary.passed,
            report.summary.failed,
            cfg.seed
        );
        for case in report.cases.iter().filter(|c| !c.passed) {
            println!(
                "FAIL case {} [{}]: {}\n  reproducer: {}",
                case.index,
                case.check,
                case.detail,
                serde_json::to_string(&case.reproducer)?
            );
        }
    }
    Ok(u8::from(!report.all_passed()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patterns_accept_separators() {
        assert_eq!(parse_pattern("+-+").unwrap(), parse_pattern("+, -, +").unwrap());
        assert_eq!(parse_pattern("-").unwrap(), vec![Sign::Minus]);
        assert!(parse_pattern("").is_err());
        assert!(parse_pattern("+0-").is_err());
    }

    #[test]
    fn inline_json_and_paths_are_distinguished() {
        let v: SparseVec = parse_json_arg("x", r#"  {"2":"1/2","4":"1/2"}"#).unwrap();
        assert_eq!(norm_l1(&v), rat_int(1));
        assert!(parse_json_arg::<SparseVec>("x", "/no/such/file.json").is_err());
    }
}
