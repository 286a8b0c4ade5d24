//! Command-line front end. `run` parses arguments, writes records to the
//! given streams and returns the process exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::congruence::count_congruence_solutions;
use crate::epi::{count_epi, count_epi_bruteforce};
use crate::error::Error;
use crate::mapcount::{dart_pair_oracle, theta, RootedMapTable, ORACLE_MAX_EDGES};
use crate::orbicyclic::{
    e_bruteforce_with, e_closed, nonvanishing_triples, nonvanishing_triples_by_scan,
    vanishing_witness, PeriodTuple, BRUTEFORCE_GUARD,
};
use crate::orbifold::{
    candidate_signatures, census, enumerate_orbifolds, harvey_admissible, OrbifoldSignature,
};
use crate::subgroups::{
    free_group_conjugacy_classes, free_group_subgroups, transitive_action_oracle,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "orbicyclic",
    version,
    about = "Orbicyclic function, cyclic orbifolds and map counts"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    pub format: Format,

    /// Also run an independent oracle and exit with status 3 on disagreement.
    #[arg(long, global = true)]
    pub check: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// E(m_1, ..., m_r) from the closed form.
    E(EArgs),
    /// Order-preserving epimorphisms from an orbifold group onto Z_l.
    Epi(EpiArgs),
    /// Quotient orbifolds of a genus-gamma surface by cyclic groups.
    Orbifolds(OrbifoldArgs),
    /// A(gamma) and A_g(gamma) for gamma >= 2.
    Census(CensusArgs),
    /// Unrooted maps with n edges on the genus-gamma surface.
    Theta(ThetaArgs),
    /// Subgroups of index n in the free group of rank r, and their classes.
    Freegroup(FreegroupArgs),
    /// Triples (m_1, m_2, m_3) with lcm m and E != 0.
    Triples(TriplesArgs),
}

#[derive(Debug, Args)]
pub struct EArgs {
    /// Periods, space or comma separated.
    #[arg(required = true, num_args = 1..)]
    pub periods: Vec<String>,
    /// Cross-check with the averaged von Sterneck product.
    #[arg(long)]
    pub brute: bool,
    /// Cross-check by counting congruence solutions modulo M.
    #[arg(long, value_name = "M")]
    pub congruence: Option<u64>,
}

#[derive(Debug, Args)]
pub struct EpiArgs {
    #[arg(long)]
    pub genus: u64,
    #[arg(long)]
    pub order: u64,
    /// Comma-separated branch orders (may be empty).
    #[arg(long, default_value = "")]
    pub periods: String,
}

#[derive(Debug, Args)]
pub struct OrbifoldArgs {
    #[arg(long)]
    pub gamma: u64,
    /// Group order; every l <= 4*gamma+2 when omitted (gamma >= 2 only).
    #[arg(long)]
    pub order: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(long)]
    pub gamma: u64,
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    #[arg(long)]
    pub gamma: u64,
    #[arg(long)]
    pub edges: u64,
    /// Rooted map table (CSV genus,edges,count). Defaults to $ORBICYCLIC_TABLE, then the bundled table.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FreegroupArgs {
    #[arg(long)]
    pub rank: u64,
    #[arg(long)]
    pub index: u64,
}

#[derive(Debug, Args)]
pub struct TriplesArgs {
    #[arg(long)]
    pub lcm: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureEntry {
    pub order: u64,
    pub signature: String,
    pub genus: u64,
    pub periods: Vec<u64>,
    pub epi: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusCount {
    pub genus: u64,
    pub count: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaTermRecord {
    pub order: u64,
    pub contribution: String,
}

/// One line of output. Counts are decimal strings so they survive any JSON reader.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum OutputRecord {
    EValue {
        periods: Vec<u64>,
        value: String,
        vanishing: Option<String>,
    },
    EpiCount {
        signature: String,
        order: u64,
        value: String,
    },
    OrbifoldList {
        gamma: u64,
        order: Option<u64>,
        signatures: Vec<SignatureEntry>,
    },
    Census {
        gamma: u64,
        total: String,
        by_genus: Vec<GenusCount>,
        pair_count: String,
    },
    Theta {
        gamma: u64,
        edges: u64,
        value: String,
        terms: Vec<ThetaTermRecord>,
    },
    SubgroupCount {
        rank: u64,
        index: u64,
        subgroups: String,
        conjugacy_classes: String,
    },
    TripleList {
        lcm: u64,
        count: String,
        triples: Vec<[u64; 3]>,
    },
    OracleCheck {
        subject: String,
        oracle: String,
        expected: String,
        observed: String,
        agree: bool,
    },
}

impl OutputRecord {
    fn kind(&self) -> &'static str {
        match self {
            OutputRecord::EValue { .. } => "e_value",
            OutputRecord::EpiCount { .. } => "epi_count",
            OutputRecord::OrbifoldList { .. } => "orbifold_list",
            OutputRecord::Census { .. } => "census",
            OutputRecord::Theta { .. } => "theta",
            OutputRecord::SubgroupCount { .. } => "subgroup_count",
            OutputRecord::TripleList { .. } => "triple_list",
            OutputRecord::OracleCheck { .. } => "oracle_check",
        }
    }

    /// Flat view used by the csv and table formats.
    fn rows(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        match self {
            OutputRecord::EValue {
                periods,
                value,
                vanishing,
            } => (
                vec!["periods", "e", "vanishing"],
                vec![vec![
                    join(periods),
                    value.clone(),
                    vanishing.clone().unwrap_or_default(),
                ]],
            ),
            OutputRecord::EpiCount {
                signature,
                order,
                value,
            } => (
                vec!["signature", "order", "epi"],
                vec![vec![signature.clone(), order.to_string(), value.clone()]],
            ),
            OutputRecord::OrbifoldList { signatures, .. } => (
                vec!["order", "signature", "epi"],
                signatures
                    .iter()
                    .map(|s| vec![s.order.to_string(), s.signature.clone(), s.epi.clone()])
                    .collect(),
            ),
            OutputRecord::Census {
                gamma,
                total,
                by_genus,
                pair_count,
            } => {
                let mut rows = vec![
                    vec![format!("A({gamma})"), total.clone()],
                    vec!["pairs".to_string(), pair_count.clone()],
                ];
                for g in by_genus {
                    rows.push(vec![format!("A_{}({gamma})", g.genus), g.count.clone()]);
                }
                (vec!["quantity", "count"], rows)
            }
            OutputRecord::Theta {
                gamma,
                edges,
                value,
                terms,
            } => {
                let mut rows = vec![vec![
                    "theta".to_string(),
                    format!("{gamma}"),
                    format!("{edges}"),
                    value.clone(),
                ]];
                for t in terms {
                    rows.push(vec![
                        format!("l={}", t.order),
                        gamma.to_string(),
                        edges.to_string(),
                        t.contribution.clone(),
                    ]);
                }
                (vec!["term", "gamma", "edges", "value"], rows)
            }
            OutputRecord::SubgroupCount {
                rank,
                index,
                subgroups,
                conjugacy_classes,
            } => (
                vec!["rank", "index", "subgroups", "classes"],
                vec![vec![
                    rank.to_string(),
                    index.to_string(),
                    subgroups.clone(),
                    conjugacy_classes.clone(),
                ]],
            ),
            OutputRecord::TripleList {
                lcm,
                count,
                triples,
            } => {
                let mut rows: Vec<Vec<String>> = triples
                    .iter()
                    .map(|t| vec![lcm.to_string(), join(t)])
                    .collect();
                rows.push(vec!["count".to_string(), count.clone()]);
                (vec!["lcm", "triple"], rows)
            }
            OutputRecord::OracleCheck {
                subject,
                oracle,
                expected,
                observed,
                agree,
            } => (
                vec!["check", "oracle", "expected", "observed", "status"],
                vec![vec![
                    subject.clone(),
                    oracle.clone(),
                    expected.clone(),
                    observed.clone(),
                    if *agree { "ok" } else { "MISMATCH" }.to_string(),
                ]],
            ),
        }
    }
}

fn write_record(out: &mut dyn Write, format: Format, record: &OutputRecord) -> std::io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer(&mut *out, record)?;
            writeln!(out)
        }
        Format::Csv => {
            let (headers, rows) = record.rows();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&headers)?;
            for row in rows {
                w.write_record(&row)?;
            }
            let bytes = w.into_inner().map_err(|e| e.into_error())?;
            out.write_all(&bytes)
        }
        Format::Table => {
            let (headers, rows) = record.rows();
            let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
            for row in &rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            writeln!(out, "# {}", record.kind())?;
            writeln!(out, "{}", line(headers.clone()))?;
            for row in &rows {
                writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
            }
            Ok(())
        }
    }
}

enum Failure {
    Usage(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonPositive(_) | Error::InvalidArgument(_) | Error::NotDivisible { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Library(other),
        }
    }
}

type Outcome = std::result::Result<Vec<OutputRecord>, Failure>;

/// Parses `1,2,3` and `1 2 3` (or a mix). Entries equal to 1 are dropped.
fn parse_periods(
    items: &[String],
    notices: &mut Vec<String>,
) -> std::result::Result<Vec<u64>, Failure> {
    let mut out = Vec::new();
    let mut ones = 0;
    for item in items {
        for part in item.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let v: u64 = part
                .parse()
                .map_err(|_| Failure::Usage(format!("invalid period {part:?}")))?;
            match v {
                0 => return Err(Failure::Usage("periods must be positive".into())),
                1 => ones += 1,
                _ => out.push(v),
            }
        }
    }
    if ones > 0 {
        notices.push(format!(
            "note: dropped {ones} period(s) equal to 1; they do not change the result"
        ));
    }
    Ok(out)
}

fn check_record(subject: String, oracle: &str, expected: String, observed: String) -> OutputRecord {
    let agree = expected == observed;
    OutputRecord::OracleCheck {
        subject,
        oracle: oracle.to_string(),
        expected,
        observed,
        agree,
    }
}

fn signature_entry(
    ell: u64,
    sig: &OrbifoldSignature,
) -> std::result::Result<SignatureEntry, Failure> {
    Ok(SignatureEntry {
        order: ell,
        signature: sig.to_string(),
        genus: sig.genus(),
        periods: sig.periods().values().to_vec(),
        epi: count_epi(sig, ell)?.to_string(),
    })
}

// Candidate signatures admitted by Harvey's conditions, as strings.
fn harvey_list(gamma: u64, ell: u64) -> std::result::Result<Vec<String>, Failure> {
    Ok(candidate_signatures(gamma, ell)?
        .into_iter()
        .filter(|s| harvey_admissible(s, ell, gamma).admissible())
        .map(|s| s.to_string())
        .collect())
}

fn run_e(args: &EArgs, check: bool, notices: &mut Vec<String>) -> Outcome {
    let values = parse_periods(&args.periods, notices)?;
    let t = PeriodTuple::new(values).map_err(Failure::from)?;
    let value = e_closed(&t);
    let mut records = vec![OutputRecord::EValue {
        periods: t.values().to_vec(),
        value: value.to_string(),
        vanishing: vanishing_witness(&t).map(|w| w.to_string()),
    }];
    if args.brute || check {
        let brute = e_bruteforce_with(&t, None, BRUTEFORCE_GUARD)?;
        records.push(check_record(
            t.to_string(),
            "periodic_average",
            brute.to_string(),
            value.to_string(),
        ));
    }
    let congruence_modulus = args.congruence.or(if check { Some(t.lcm()) } else { None });
    if let Some(modulus) = congruence_modulus {
        let count = count_congruence_solutions(modulus, &t)?;
        records.push(check_record(
            format!("{t} mod {modulus}"),
            "congruence",
            count.to_string(),
            value.to_string(),
        ));
    }
    Ok(records)
}

fn run_epi(args: &EpiArgs, check: bool, notices: &mut Vec<String>) -> Outcome {
    let values = parse_periods(std::slice::from_ref(&args.periods), notices)?;
    let sig = OrbifoldSignature::new(args.genus, values)?;
    let value = count_epi(&sig, args.order)?;
    let mut records = vec![OutputRecord::EpiCount {
        signature: sig.to_string(),
        order: args.order,
        value: value.to_string(),
    }];
    if check {
        let brute = count_epi_bruteforce(&sig, args.order)?;
        records.push(check_record(
            format!("{sig} -> Z_{}", args.order),
            "homomorphism_enumeration",
            brute.to_string(),
            value.to_string(),
        ));
    }
    Ok(records)
}

fn run_orbifolds(args: &OrbifoldArgs, check: bool) -> Outcome {
    let orders: Vec<u64> = match args.order {
        Some(ell) => vec![ell],
        None if args.gamma >= 2 => (1..=4 * args.gamma + 2).collect(),
        None => {
            return Err(Failure::Usage(format!(
                "genus {} admits cyclic actions of every order; pass --order",
                args.gamma
            )))
        }
    };
    let mut signatures = Vec::new();
    let mut records = Vec::new();
    for &ell in &orders {
        let found = enumerate_orbifolds(args.gamma, ell)?;
        if check {
            let ours: Vec<String> = found.iter().map(|s| s.to_string()).collect();
            records.push(check_record(
                format!("gamma={} l={ell}", args.gamma),
                "harvey_conditions",
                harvey_list(args.gamma, ell)?.join(" "),
                ours.join(" "),
            ));
        }
        for sig in &found {
            signatures.push(signature_entry(ell, sig)?);
        }
    }
    records.insert(
        0,
        OutputRecord::OrbifoldList {
            gamma: args.gamma,
            order: args.order,
            signatures,
        },
    );
    Ok(records)
}

fn run_census(args: &CensusArgs, check: bool) -> Outcome {
    let c = census(args.gamma)?;
    let mut records = vec![OutputRecord::Census {
        gamma: c.gamma,
        total: c.total.to_string(),
        by_genus: c
            .by_genus
            .iter()
            .map(|(&genus, &count)| GenusCount {
                genus,
                count: count.to_string(),
            })
            .collect(),
        pair_count: c.pair_count.to_string(),
    }];
    if check {
        let mut harvey = 0usize;
        for ell in 1..=4 * args.gamma + 2 {
            harvey += harvey_list(args.gamma, ell)?.len();
        }
        records.push(check_record(
            format!("census gamma={}", args.gamma),
            "harvey_conditions",
            harvey.to_string(),
            c.pair_count.to_string(),
        ));
    }
    Ok(records)
}

fn run_theta(args: &ThetaArgs, check: bool) -> Outcome {
    let table = match &args.table {
        Some(path) => RootedMapTable::from_path(path)?,
        None => RootedMapTable::from_env()?,
    };
    let th = theta(args.gamma, args.edges, &table)?;
    let mut records = vec![OutputRecord::Theta {
        gamma: th.gamma,
        edges: th.edges,
        value: th.value.to_string(),
        terms: th
            .terms
            .iter()
            .map(|t| ThetaTermRecord {
                order: t.ell,
                contribution: t.contribution.to_string(),
            })
            .collect(),
    }];
    if check {
        let subject = format!("theta gamma={} n={}", args.gamma, args.edges);
        if args.edges <= ORACLE_MAX_EDGES {
            let oracle = dart_pair_oracle(args.gamma, args.edges)?;
            records.push(check_record(
                subject,
                "dart_pairs",
                oracle.unrooted.to_string(),
                th.value.to_string(),
            ));
        } else {
            // Too large to enumerate; fall back to N/(2n) <= theta <= N.
            let rooted = th.terms[0].contribution.clone();
            let ok = &th.value * 2u32 * args.edges >= rooted && th.value <= rooted;
            records.push(check_record(
                subject,
                "rooting_bounds",
                "within".into(),
                if ok { "within" } else { "outside" }.into(),
            ));
        }
    }
    Ok(records)
}

fn run_freegroup(args: &FreegroupArgs, check: bool) -> Outcome {
    let subgroups = free_group_subgroups(args.rank, args.index)?;
    let classes = free_group_conjugacy_classes(args.rank, args.index)?;
    let mut records = vec![OutputRecord::SubgroupCount {
        rank: args.rank,
        index: args.index,
        subgroups: subgroups.to_string(),
        conjugacy_classes: classes.to_string(),
    }];
    if check {
        let (subs, cls) = transitive_action_oracle(args.rank, args.index)?;
        let subject = format!("F_{} index {}", args.rank, args.index);
        records.push(check_record(
            subject.clone(),
            "transitive_actions",
            subs.to_string(),
            subgroups.to_string(),
        ));
        records.push(check_record(
            subject,
            "transitive_action_classes",
            cls.to_string(),
            classes.to_string(),
        ));
    }
    Ok(records)
}

fn run_triples(args: &TriplesArgs, check: bool) -> Outcome {
    let triples = nonvanishing_triples(args.lcm)?;
    let mut records = vec![OutputRecord::TripleList {
        lcm: args.lcm,
        count: triples.len().to_string(),
        triples: triples.clone(),
    }];
    if check {
        let scanned = nonvanishing_triples_by_scan(args.lcm)?;
        let show = |v: &[[u64; 3]]| format!("{v:?}");
        records.push(check_record(
            format!("triples lcm={}", args.lcm),
            "exhaustive_scan",
            show(&scanned),
            show(&triples),
        ));
    }
    Ok(records)
}

/// Runs the CLI on `argv` (including the program name).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut notices = Vec::new();
    let outcome = match &cli.command {
        Command::E(a) => run_e(a, cli.check, &mut notices),
        Command::Epi(a) => run_epi(a, cli.check, &mut notices),
        Command::Orbifolds(a) => run_orbifolds(a, cli.check),
        Command::Census(a) => run_census(a, cli.check),
        Command::Theta(a) => run_theta(a, cli.check),
        Command::Freegroup(a) => run_freegroup(a, cli.check),
        Command::Triples(a) => run_triples(a, cli.check),
    };
    for n in &notices {
        let _ = writeln!(err, "{n}");
    }
    let records = match outcome {
        Ok(records) => records,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
        Err(Failure::Library(e)) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_ERROR;
        }
    };
    let mut mismatch = false;
    for record in &records {
        if let OutputRecord::OracleCheck { agree: false, .. } = record {
            mismatch = true;
        }
        if let Err(e) = write_record(out, cli.format, record) {
            let _ = writeln!(err, "error: {e}");
            return EXIT_ERROR;
        }
    }
    if mismatch {
        let _ = writeln!(err, "error: oracle mismatch");
        EXIT_MISMATCH
    } else {
        EXIT_OK
    }
}
