//! `glq` — weights, marginals, identity checks, convergence tables, and exact
//! samplers for the Plancherel measures of GL(n,q), with machine-readable
//! output.
//!
//! Exit codes: 0 success; 1 verification failure (or a failed internal
//! self-check); 2 usage error; 3 resource-cap error.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::rational::BigRational;
use serde::Serialize;

use glq_core::collections::{PartitionCollection, SlotId};
use glq_core::ensembles::{
    convergence_table, enumerate_collections_with_cap, limit_weight, marginal, verify_identity,
    ConvergenceRow, MarginalConstraint, VerifyKind, DEFAULT_COLLECTION_CAP,
};
use glq_core::error::Error;
use glq_core::fieldpolys::{enumerate_irreducibles, is_prime, render_poly};
use glq_core::measures::{gl_order, grand_weight, irrep_degree, m_weight, plancherel_weight};
use glq_core::partitions::{enumerate_partitions_with_cap, Partition, DEFAULT_PARTITION_CAP};
use glq_core::rational::{decimal_string, decimal_string_ceil, format_rational, parse_rational};
use glq_core::sampler::{
    grand_prefactor, grand_size_weights, m_size_weights, sample_grand, sample_m_partition,
    sample_plancherel, SamplerConfig, DEFAULT_SIZE_CAP,
};
use glq_core::series::ProductFactorSpec;
use glq_core::CertifiedReal;

const DECIMAL_DIGITS: u32 = 30;

#[derive(Parser)]
#[command(
    name = "glq",
    version,
    about = "Exact Plancherel-measure computations for GL(n,q)",
    long_about = "Exact-arithmetic weights, marginals, identity verification, convergence \
tables, and reproducible samplers for the Plancherel measures of GL(n,q).\n\
Defaults: --order 30, --tol 1e-9, --tail-eps 1e-6; sampling requires an explicit --seed."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the payload to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Pointwise weights: a partition under the fugacity measure, or a
    /// collection under the Plancherel / grand-canonical measure.
    Weight(WeightArgs),
    /// Irreducible-representation degree and Plancherel weight of a collection.
    Degree(DegreeArgs),
    /// Exact joint marginal of constrained slots at fixed total size.
    Marginal(MarginalArgs),
    /// Certified limiting weight of a partition at a degree-d slot.
    Limit(LimitArgs),
    /// Table of exact marginals against the certified limit.
    Converge(ConvergeArgs),
    /// Verify a structural identity to a truncation order.
    Verify(VerifyArgs),
    /// Draw reproducible samples from one of the three ensembles.
    Sample(SampleArgs),
    /// Enumerate partitions, collections, or irreducible polynomials.
    Enumerate(EnumerateArgs),
}

#[derive(Args)]
struct WeightArgs {
    /// Base q (rational, must exceed 1; integer for collection weights).
    #[arg(long)]
    q: String,
    /// Fugacity v as a rational like 1/2 (enables the fugacity-measure or
    /// grand-canonical form).
    #[arg(long)]
    v: Option<String>,
    /// Partition in text form, e.g. "2,1" (fugacity-measure weight).
    #[arg(long)]
    partition: Option<String>,
    /// Collection slots, repeatable: degree:index=partition, e.g. 1:0=2,1
    #[arg(long = "slots")]
    slots: Vec<String>,
    /// Error tolerance for certified values.
    #[arg(long, default_value = "1e-9")]
    tol: String,
}

#[derive(Args)]
struct DegreeArgs {
    /// Base q (integer >= 2).
    #[arg(long)]
    q: String,
    /// Collection slots, repeatable: degree:index=partition.
    #[arg(long = "slots", required = true)]
    slots: Vec<String>,
}

#[derive(Args)]
struct MarginalArgs {
    /// Base q (integer >= 2).
    #[arg(long)]
    q: String,
    /// Total size n.
    #[arg(long)]
    n: u64,
    /// Constrained slots, repeatable: degree:index=partition (empty partition
    /// constrains the slot to stay unoccupied, e.g. 1:0=).
    #[arg(long = "slots", required = true)]
    slots: Vec<String>,
    /// Output format (default: the bare rational).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct LimitArgs {
    /// Base q (integer >= 2).
    #[arg(long)]
    q: String,
    /// Slot degree d.
    #[arg(long, default_value_t = 1)]
    d: u32,
    /// Partition in text form.
    #[arg(long)]
    partition: String,
    /// Error tolerance for the certified value.
    #[arg(long, default_value = "1e-9")]
    tol: String,
}

#[derive(Args)]
struct ConvergeArgs {
    /// Base q (integer >= 2).
    #[arg(long)]
    q: String,
    /// Slot degree d (single-constraint form; combine with --partition).
    #[arg(long)]
    d: Option<u32>,
    /// Partition for the single-constraint form.
    #[arg(long)]
    partition: Option<String>,
    /// Joint constraints, repeatable: degree:index=partition.
    #[arg(long = "slots")]
    slots: Vec<String>,
    /// First row.
    #[arg(long = "n-from", default_value_t = 1)]
    n_from: u64,
    /// Last row.
    #[arg(long = "n-to", default_value_t = 25)]
    n_to: u64,
    /// Error tolerance for the certified limit.
    #[arg(long, default_value = "1e-9")]
    tol: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity to check.
    #[arg(long, value_enum)]
    kind: VerifyKindArg,
    /// Base q (rational > 1; integer prime power for plancherel-normalization).
    #[arg(long)]
    q: String,
    /// Truncation order.
    #[arg(long, default_value_t = glq_core::DEFAULT_ORDER as u64)]
    order: u64,
    /// Degree parameter of the cauchy check.
    #[arg(long, default_value_t = 1)]
    d: u32,
    /// Enumeration bound of the plancherel-normalization check.
    #[arg(long, default_value_t = 5)]
    n: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKindArg {
    Euler,
    Factorization,
    Cauchy,
    PlancherelNormalization,
}

#[derive(Args)]
struct SampleArgs {
    /// Which ensemble to sample.
    #[arg(value_enum)]
    kind: SampleKind,
    /// Base q.
    #[arg(long)]
    q: String,
    /// Fugacity v (fugacity-measure and grand-canonical sampling).
    #[arg(long)]
    v: Option<String>,
    /// Total size n (Plancherel sampling).
    #[arg(long)]
    n: Option<u64>,
    /// PRNG seed (required: streams are part of the output contract).
    #[arg(long)]
    seed: u64,
    /// Number of draws.
    #[arg(long, default_value_t = 1)]
    samples: usize,
    /// Probability mass allowed beyond the size truncation.
    #[arg(long = "tail-eps", default_value = "1e-6")]
    tail_eps: String,
    /// Size cap for the truncation search.
    #[arg(long = "size-cap", default_value_t = DEFAULT_SIZE_CAP)]
    size_cap: u32,
    /// Attach explicit polynomial text to each assignment (prime q only).
    #[arg(long = "with-poly")]
    with_poly: bool,
    /// Emit a size histogram as CSV instead of raw draws.
    #[arg(long)]
    histogram: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SampleKind {
    /// Partitions under the fugacity measure.
    M,
    /// Collections under the Plancherel measure at fixed n.
    Plancherel,
    /// Collections under the grand-canonical measure.
    Grand,
}

#[derive(Args)]
struct EnumerateArgs {
    /// What to enumerate.
    #[arg(value_enum)]
    what: EnumerateWhat,
    /// Base q (collections, irreducibles).
    #[arg(long)]
    q: Option<String>,
    /// Size (partitions: the partition size; collections: the total size).
    #[arg(long)]
    n: Option<u64>,
    /// Degree (irreducibles).
    #[arg(long)]
    d: Option<u32>,
    /// Attach explicit polynomial text to collection assignments (prime q only).
    #[arg(long = "with-poly")]
    with_poly: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumerateWhat {
    Partitions,
    Collections,
    Irreducibles,
}

// ---------------------------------------------------------------------------
// report shapes
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct MWeightReport {
    q: String,
    v: String,
    partition: String,
    exact_part: String,
    value: CertifiedReal,
}

#[derive(Serialize)]
struct PlancherelReport {
    q: String,
    n: u64,
    degree: String,
    gl_order: String,
    plancherel: String,
}

#[derive(Serialize)]
struct GrandReport {
    q: String,
    v: String,
    n: u64,
    exact_part: String,
    value: CertifiedReal,
}

#[derive(Serialize)]
struct MarginalReport {
    q: String,
    n: u64,
    marginal: String,
}

#[derive(Serialize)]
struct ConvergenceRowReport {
    n: u64,
    exact_marginal: String,
    limit_value: CertifiedReal,
    abs_error: CertifiedReal,
}

#[derive(Serialize)]
struct AssignmentRecord {
    degree: u32,
    index: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    poly: Option<String>,
    partition: String,
}

#[derive(Serialize)]
struct CollectionRecord {
    n: u64,
    assignments: Vec<AssignmentRecord>,
}

// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut payload = Vec::new();
    let code = match run(&cli.command, &mut payload) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    };
    let write_result = match &cli.out {
        Some(path) => fs::write(path, &payload),
        None => std::io::stdout().write_all(&payload),
    };
    if let Err(err) = write_result {
        eprintln!("error: cannot write output: {err}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Resource(_) => 3,
        Error::Internal(_) => 1,
        _ => 2,
    }
}

fn run(command: &Command, out: &mut Vec<u8>) -> Result<u8, Error> {
    match command {
        Command::Weight(args) => run_weight(args, out),
        Command::Degree(args) => run_degree(args, out),
        Command::Marginal(args) => run_marginal(args, out),
        Command::Limit(args) => run_limit(args, out),
        Command::Converge(args) => run_converge(args, out),
        Command::Verify(args) => run_verify(args, out),
        Command::Sample(args) => run_sample(args, out),
        Command::Enumerate(args) => run_enumerate(args, out),
    }
}

fn emit_json<T: Serialize>(value: &T, out: &mut Vec<u8>) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Internal(format!("serialization failed: {e}")))?;
    out.extend_from_slice(text.as_bytes());
    out.push(b'\n');
    Ok(())
}

fn emit_json_line<T: Serialize>(value: &T, out: &mut Vec<u8>) -> Result<(), Error> {
    let text = serde_json::to_string(value)
        .map_err(|e| Error::Internal(format!("serialization failed: {e}")))?;
    out.extend_from_slice(text.as_bytes());
    out.push(b'\n');
    Ok(())
}

fn parse_slot_spec(spec: &str) -> Result<(SlotId, Partition), Error> {
    let (slot_part, partition_part) = spec
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("slot spec {spec:?} needs the form degree:index=partition")))?;
    let (degree_txt, index_txt) = slot_part
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("slot spec {spec:?} needs the form degree:index=partition")))?;
    let degree: u32 = degree_txt
        .parse()
        .map_err(|_| Error::Parse(format!("bad degree {degree_txt:?} in slot spec {spec:?}")))?;
    let index: u128 = index_txt
        .parse()
        .map_err(|_| Error::Parse(format!("bad index {index_txt:?} in slot spec {spec:?}")))?;
    let partition: Partition = partition_part.parse()?;
    Ok((SlotId::new(degree, index), partition))
}

fn parse_collection(slots: &[String]) -> Result<PartitionCollection, Error> {
    let pairs = slots
        .iter()
        .map(|s| parse_slot_spec(s))
        .collect::<Result<Vec<_>, _>>()?;
    if pairs.iter().any(|(_, lam)| lam.is_empty()) {
        return Err(Error::Parse(
            "empty partitions are not valid in a collection; omit the slot".into(),
        ));
    }
    PartitionCollection::from_pairs(pairs)
}

fn parse_constraint(slots: &[String]) -> Result<MarginalConstraint, Error> {
    let pairs = slots
        .iter()
        .map(|s| parse_slot_spec(s))
        .collect::<Result<Vec<_>, _>>()?;
    MarginalConstraint::new(pairs)
}

fn parse_integer_q(q: &str) -> Result<u64, Error> {
    let q_rat = parse_rational(q)?;
    if !q_rat.is_integer() {
        return Err(Error::Parse(format!("q must be an integer here, got {q}")));
    }
    use num::ToPrimitive;
    q_rat
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::Parse(format!("q out of range: {q}")))
}

fn run_weight(args: &WeightArgs, out: &mut Vec<u8>) -> Result<u8, Error> {
    let tol = parse_rational(&args.tol)?;
    match (&args.partition, args.slots.is_empty(), &args.v) {
        (Some(partition_text), true, Some(v_text)) => {
            let lam: Partition = partition_text.parse()?;
            let q = parse_rational(&args.q)?;
            let v = parse_rational(v_text)?;
            let weight = m_weight(&lam, &v, &q, &tol)?;
            emit_json(
                &MWeightReport {
                    q: format_rational(&q),
                    v: format_rational(&v),
                    partition: lam.to_string(),
                    exact_part: format_rational(&weight.exact_part),
                    value: weight.certified,
                },
                out,
            )?;
            Ok(0)
        }
        (Some(_), true, None) => Err(Error::Parse(
            "the fugacity-measure weight needs --v as well".into(),
        )),
        (None, false, maybe_v) => {
            let q = parse_integer_q(&args.q)?;
            let coll = parse_collection(&args.slots)?;
            let n = coll.total_size();
            match maybe_v {
                None => {
                    let mu = plancherel_weight(&coll, q)?;
                    let degree = irrep_degree(&coll, q)?;
                    emit_json(
                        &PlancherelReport {
                            q: q.to_string(),
                            n,
                            degree: degree.to_string(),
                            gl_order: gl_order(n, q)?.to_string(),
                            plancherel: format_rational(&mu),
                        },
                        out,
                    )?;
                }
                Some(v_text) => {
                    let v = parse_rational(v_text)?;
                    let weight = grand_weight(&coll, &v, q, &tol)?;
                    emit_json(
                        &GrandReport {
                            q: q.to_string(),
                            v: format_rational(&v),
                            n,
                            exact_part: format_rational(&weight.exact_part),
                            value: weight.certified,
                        },
                        out,
                    )?;
                }
            }
            Ok(0)
        }
        _ => Err(Error::Parse(
            "weight needs either --partition with --v, or --slots (optionally with --v)".into(),
        )),
    }
}

fn run_degree(args: &DegreeArgs, out: &mut Vec<u8>) -> Result<u8, Error> {
    let q = parse_integer_q(&args.q)?;
    let coll = parse_collection(&args.slots)?;
    let n = coll.total_size();
    emit_json(
        &PlancherelReport {
            q: q.to_string(),
            n,
            degree: irrep_degree(&coll, q)?.to_string(),
            gl_order: gl_order(n, q)?.to_string(),
            plancherel: format_rational(&plancherel_weight(&coll, q)?),
        },
        out,
    )?;
    Ok(0)
}

fn run_marginal(args: &MarginalArgs, out: &mut Vec<u8>) -> Result<u8, Error> {
    let q = parse_integer_q(&args.q)?;
    let constraint = parse_constraint(&args.slots)?;
    let value = marginal(args.n, q, &constraint)?;
    match args.format {
        Some(Format::Json) => emit_json(
            &MarginalReport {
                q: q.to_string(),
                n: args.n,
                marginal: format_rational(&value),
            },
            out,
        )?,
        Some(Format::Csv) => {
            return Err(Error::Parse("marginal has no CSV form; use json".into()))
        }
        None => {
            out.extend_from_slice(format_rational(&value).as_bytes());
            out.push(b'\n');
        }
    }
    Ok(0)
}

fn run_limit(args: &LimitArgs, out: &mut Vec<u8>) -> Result<u8, Error> {
    let q = parse_integer_q(&args.q)?;
    let lam: Partition = args.partition.parse()?;
    let tol = parse_rational(&args.tol)?;
    let value = limit_weight(&lam, args.d, q, &tol)?;
    emit_json(&value, out)?;
    Ok(0)
}

fn run_converge(args: &ConvergeArgs, out: &mut Vec<u8>) -> Result<u8, Error> {
    let q = parse_integer_q(&args.q)?;
    let tol = parse_rational(&args.tol)?;
    let constraint = match (&args.partition, args.slots.is_empty()) {
        (Some(text), true) => {
            let lam: Partition = text.parse()?;
            MarginalConstraint::single(SlotId::new(args.d.unwrap_or(1), 0), lam)
        }
        (None, false) => parse_constraint(&args.slots)?,
        _ => {
            return Err(Error::Parse(
                "converge needs either --partition (with optional --d) or --slots".into(),
            ))
        }
    };
    let rows = convergence_table(q, &constraint, args.n_from, args.n_to, &tol)?;
    match args.format {
        Format::Csv => {
            out.extend_from_slice(
                b"n,exact_marginal,exact_decimal,limit_value,abs_error,error_bound\n",
            );
            for row in &rows {
                let line = format!(
                    "{},{},{},{},{},{}\n",
                    row.n,
                    format_rational(&row.exact_marginal),
                    decimal_string(&row.exact_marginal, DECIMAL_DIGITS),
                    decimal_string(row.limit_value.value(), DECIMAL_DIGITS),
                    decimal_string(row.abs_error.value(), DECIMAL_DIGITS),
                    decimal_string_ceil(row.abs_error.error_bound(), DECIMAL_DIGITS),
                );
                out.extend_from_slice(line.as_bytes());
            }
        }
        Format::Json => {
            let reports: Vec<ConvergenceRowReport> = rows.iter().map(row_report).collect();
            emit_json(&reports, out)?;
        }
    }
    Ok(0)
}

fn row_report(row: &ConvergenceRow) -> ConvergenceRowReport {
    ConvergenceRowReport {
        n: row.n,
        exact_marginal: format_rational(&row.exact_marginal),
        limit_value: row.limit_value.clone(),
        abs_error: row.abs_error.clone(),
    }
}

fn run_verify(args: &VerifyArgs, out: &mut Vec<u8>) -> Result<u8, Error> {
    let q = parse_rational(&args.q)?;
    let kind = match args.kind {
        VerifyKindArg::Euler => VerifyKind::Euler,
        VerifyKindArg::Factorization => VerifyKind::Factorization,
        VerifyKindArg::Cauchy => VerifyKind::Cauchy { d: args.d },
        VerifyKindArg::PlancherelNormalization => {
            VerifyKind::PlancherelNormalization { enumeration_max: args.n }
        }
    };
    let report = verify_identity(&kind, &q, args.order)?;
    let ok = report.ok;
    emit_json(&report, out)?;
    Ok(if ok { 0 } else { 1 })
}

fn sampler_config(args: &SampleArgs) -> Result<SamplerConfig, Error> {
    let tail_eps = parse_rational(&args.tail_eps)?;
    let cfg = SamplerConfig::new(args.seed, args.samples)
        .with_tail_eps(tail_eps)
        .with_size_cap(args.size_cap);
    cfg.validate()?;
    Ok(cfg)
}

/// Renders explicit polynomial text per degree on demand; prime fields only.
struct PolyNames {
    q: u64,
    by_degree: std::collections::HashMap<u32, Vec<String>>,
}

impl PolyNames {
    fn new(q: u64) -> Result<Self, Error> {
        if !is_prime(q) {
            return Err(Error::Unsupported(format!(
                "--with-poly needs a prime q; got {q}"
            )));
        }
        Ok(Self { q, by_degree: std::collections::HashMap::new() })
    }

    fn name(&mut self, slot: &SlotId) -> Result<String, Error> {
        if !self.by_degree.contains_key(&slot.degree) {
            let labels = enumerate_irreducibles(slot.degree, self.q)?;
            let names = labels
                .iter()
                .map(|l| render_poly(l.coeffs.as_ref().expect("enumerated labels carry coeffs")))
                .collect();
            self.by_degree.insert(slot.degree, names);
        }
        let names = &self.by_degree[&slot.degree];
        usize::try_from(slot.index)
            .ok()
            .and_then(|i| names.get(i))
            .cloned()
            .ok_or_else(|| {
                Error::Domain(format!(
                    "slot index {} out of range for degree {} over F_{}",
                    slot.index, slot.degree, self.q
                ))
            })
    }
}

fn collection_record(
    coll: &PartitionCollection,
    names: &mut Option<PolyNames>,
) -> Result<CollectionRecord, Error> {
    let mut assignments = Vec::with_capacity(coll.len());
    for (slot, lam) in coll.iter() {
        let poly = match names {
            Some(n) => Some(n.name(slot)?),
            None => None,
        };
        assignments.push(AssignmentRecord {
            degree: slot.degree,
            index: slot.index,
            poly,
            partition: lam.to_string(),
        });
    }
    Ok(CollectionRecord { n: coll.total_size(), assignments })
}

fn run_sample(args: &SampleArgs, out: &mut Vec<u8>) -> Result<u8, Error> {
    let cfg = sampler_config(args)?;
    match args.kind {
        SampleKind::M => {
            let q = parse_rational(&args.q)?;
            let v_text = args
                .v
                .as_ref()
                .ok_or_else(|| Error::Parse("sampling the fugacity measure needs --v".into()))?;
            let v = parse_rational(v_text)?;
            if args.with_poly {
                return Err(Error::Parse(
                    "--with-poly applies to collection samplers only".into(),
                ));
            }
            if args.histogram {
                let draws = sample_m_partition(&v, &q, &cfg)?;
                let spec = ProductFactorSpec::new(1, 1, 1, 0, q.clone())?;
                let prefactor = glq_core::certified::certified_product(
                    &spec,
                    &v,
                    &parse_rational("1e-9")?,
                )?;
                let masses: Vec<BigRational> = m_size_weights(&v, &q, cfg.size_cap)?
                    .iter()
                    .map(|w| prefactor.value() * w)
                    .collect();
                size_histogram_csv(draws.iter().map(|p| p.size()), &masses, out);
            } else {
                #[derive(Serialize)]
                struct PartitionRecord {
                    partition: String,
                }
                for lam in sample_m_partition(&v, &q, &cfg)? {
                    emit_json_line(&PartitionRecord { partition: lam.to_string() }, out)?;
                }
            }
            Ok(0)
        }
        SampleKind::Plancherel => {
            if args.histogram {
                return Err(Error::Parse(
                    "--histogram applies to samplers with a size law (m, grand)".into(),
                ));
            }
            let q = parse_integer_q(&args.q)?;
            let n = args
                .n
                .ok_or_else(|| Error::Parse("plancherel sampling needs --n".into()))?;
            let mut names = args.with_poly.then(|| PolyNames::new(q)).transpose()?;
            for coll in sample_plancherel(n, q, &cfg)? {
                emit_json_line(&collection_record(&coll, &mut names)?, out)?;
            }
            Ok(0)
        }
        SampleKind::Grand => {
            let q = parse_integer_q(&args.q)?;
            let v_text = args
                .v
                .as_ref()
                .ok_or_else(|| Error::Parse("grand-canonical sampling needs --v".into()))?;
            let v = parse_rational(v_text)?;
            if args.histogram {
                let draws = sample_grand(&v, q, &cfg)?;
                let prefactor = grand_prefactor(&v, q, &parse_rational("1e-9")?)?;
                let masses: Vec<BigRational> = grand_size_weights(&v, q, cfg.size_cap as u64)?
                    .iter()
                    .map(|w| prefactor.value() * w)
                    .collect();
                size_histogram_csv(draws.iter().map(|c| c.total_size()), &masses, out);
            } else {
                let mut names = args.with_poly.then(|| PolyNames::new(q)).transpose()?;
                for coll in sample_grand(&v, q, &cfg)? {
                    emit_json_line(&collection_record(&coll, &mut names)?, out)?;
                }
            }
            Ok(0)
        }
    }
}

fn size_histogram_csv<I: Iterator<Item = u64>>(
    sizes: I,
    masses: &[BigRational],
    out: &mut Vec<u8>,
) {
    let mut counts: std::collections::BTreeMap<u64, u64> = std::collections::BTreeMap::new();
    for s in sizes {
        *counts.entry(s).or_insert(0) += 1;
    }
    out.extend_from_slice(b"size,count,expected_mass\n");
    let top = counts.keys().next_back().copied().unwrap_or(0);
    for size in 0..=top {
        let count = counts.get(&size).copied().unwrap_or(0);
        let mass = masses
            .get(size as usize)
            .map(|m| decimal_string(m, DECIMAL_DIGITS))
            .unwrap_or_else(|| "0".into());
        out.extend_from_slice(format!("{size},{count},{mass}\n").as_bytes());
    }
}

fn run_enumerate(args: &EnumerateArgs, out: &mut Vec<u8>) -> Result<u8, Error> {
    match args.what {
        EnumerateWhat::Partitions => {
            let n = args
                .n
                .ok_or_else(|| Error::Parse("enumerating partitions needs --n".into()))?;
            let n = u32::try_from(n).map_err(|_| Error::Resource("size out of range".into()))?;
            #[derive(Serialize)]
            struct PartitionRecord {
                partition: String,
            }
            for lam in enumerate_partitions_with_cap(n, DEFAULT_PARTITION_CAP)? {
                emit_json_line(&PartitionRecord { partition: lam.to_string() }, out)?;
            }
            Ok(0)
        }
        EnumerateWhat::Collections => {
            let q_text = args
                .q
                .as_ref()
                .ok_or_else(|| Error::Parse("enumerating collections needs --q".into()))?;
            let q = parse_integer_q(q_text)?;
            let n = args
                .n
                .ok_or_else(|| Error::Parse("enumerating collections needs --n".into()))?;
            let mut names = args.with_poly.then(|| PolyNames::new(q)).transpose()?;
            for coll in enumerate_collections_with_cap(n, q, DEFAULT_COLLECTION_CAP)? {
                emit_json_line(&collection_record(&coll, &mut names)?, out)?;
            }
            Ok(0)
        }
        EnumerateWhat::Irreducibles => {
            let q_text = args
                .q
                .as_ref()
                .ok_or_else(|| Error::Parse("enumerating irreducibles needs --q".into()))?;
            let q = parse_integer_q(q_text)?;
            let d = args
                .d
                .ok_or_else(|| Error::Parse("enumerating irreducibles needs --d".into()))?;
            #[derive(Serialize)]
            struct IrreducibleRecord {
                degree: u32,
                index: u128,
                poly: String,
            }
            for label in enumerate_irreducibles(d, q)? {
                emit_json_line(
                    &IrreducibleRecord {
                        degree: label.degree,
                        index: label.index,
                        poly: render_poly(label.coeffs.as_ref().expect("enumerated")),
                    },
                    out,
                )?;
            }
            Ok(0)
        }
    }
}
