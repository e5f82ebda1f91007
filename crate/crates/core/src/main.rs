//! Command-line front end: word lengths, metric tables, verification
//! suites and the acceptance run.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use wordmetric::action::{action_metric_table, automorphism_action, GroupAction};
use wordmetric::bitset::Subset;
use wordmetric::catalog::by_name;
use wordmetric::error::Error;
use wordmetric::extnat::ExtNat;
use wordmetric::group::{quotient_by_normal, FiniteGroup, GroupSpec};
use wordmetric::invariants::summarize;
use wordmetric::metric::{check_metric_axioms, nu_h_axioms, symmetrize_metric, word_lengths, word_metric_table, AxiomReport, MetricTable, NormFamily};
use wordmetric::product::{condition_preservation, direct_product_collapse, direct_product_identities, psi_suite, sdprod_metric_compare, SemidirectContext};
use wordmetric::report::{Report, Sample};
use wordmetric::star::{star_metric_table, star_word_lengths, StarMetricVariant, StarSet};
use wordmetric::subsets::{parse_subset, ConditionP, Family};
use wordmetric::suite::{run_suite, SuiteConfig};
use wordmetric::transport::{chi_omega_roundtrip, compatibility_suite, lift_conjugation_check, qi_bounds_check, qm_suite, r_condition_suite, retraction_suite, verify_pullback_isometry, verify_pushforward_lipschitz};

#[derive(Parser)]
#[command(name = "wordmetric", version, about = "Word-length metrics on power sets of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every sampled family.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    All,
    Starred,
    PrimeStar,
    DoublePrimeStar,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::All => Family::All,
            FamilyArg::Starred => Family::Starred,
            FamilyArg::PrimeStar => Family::PrimeStar,
            FamilyArg::DoublePrimeStar => Family::DoublePrimeStar,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GeneratorsArg {
    Inn,
    Dis,
}

#[derive(clap::Args)]
struct GroupArg {
    /// Group as inline JSON, a JSON file, or a catalog name such as S3.
    #[arg(long)]
    group: String,
}

#[derive(clap::Args)]
struct SampleArgs {
    /// Largest group order (or carrier size) traversed exhaustively.
    #[arg(long, default_value_t = 8)]
    cap: usize,
    /// Number of random draws above the cap.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
}

impl SampleArgs {
    fn sample(&self, order: usize, seed: u64) -> Sample {
        if order <= self.cap {
            Sample::Exhaustive
        } else {
            Sample::Random { count: self.samples, seed }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Word lengths nu_S(x) for every element.
    Norm {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        s: String,
    },
    /// The word metric table d_S(x, y).
    Metric {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        s: String,
        /// Take max(d(x, y), d(y, x)).
        #[arg(long)]
        symmetrize: bool,
    },
    /// nu_H(S, T) over a whole subset family.
    #[command(name = "nuH-table")]
    NuHTable {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, value_enum, default_value_t = FamilyArg::All)]
        family: FamilyArg,
        /// Largest group order whose family is enumerated.
        #[arg(long, default_value_t = 10)]
        cap: usize,
    },
    /// Metric axioms of d_S, or of nu_H when no --s is given.
    CheckAxioms {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        s: Option<String>,
        #[command(flatten)]
        sampling: SampleArgs,
    },
    /// Transport checks along the quotient map G -> G/K.
    TransportVerify {
        #[command(flatten)]
        group: GroupArg,
        /// The kernel K as a subset literal.
        #[arg(long)]
        normal: String,
        /// Symmetric generating set B of K used by eta.
        #[arg(long)]
        b: Option<String>,
        /// Q_m parameter; defaults to the computed m0.
        #[arg(long)]
        m: Option<u64>,
        #[command(flatten)]
        sampling: SampleArgs,
    },
    /// Semidirect-product checks for G = H K with K normal.
    SdprodVerify {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        h: String,
        #[arg(long)]
        k: String,
        /// Normal subgroup L of K; defaults to K.
        #[arg(long)]
        l: Option<String>,
        #[command(flatten)]
        sampling: SampleArgs,
    },
    /// rank_n, diam_nfg and Delta.
    Invariants {
        #[command(flatten)]
        group: GroupArg,
        /// Bound on the size of normal generating sets searched.
        #[arg(long, default_value_t = 4)]
        cap: usize,
    },
    /// Word metric d_S on a set acted on by a group.
    ActionMetric {
        /// Action spec as inline JSON or a JSON file.
        #[arg(long, conflicts_with = "quandle", required_unless_present = "quandle")]
        action: Option<String>,
        /// Star-set spec of a quandle; acts through its inner automorphisms.
        #[arg(long)]
        quandle: Option<String>,
        /// Subset of the acting group; for --quandle defaults to the generators.
        #[arg(long)]
        s: Option<String>,
        #[arg(long, value_enum, default_value_t = GeneratorsArg::Inn)]
        generators: GeneratorsArg,
    },
    /// Star word lengths and, optionally, the star word metric.
    Star {
        /// Star-set spec as inline JSON or a JSON file.
        #[arg(long)]
        spec: String,
        #[arg(long)]
        s: String,
        /// Also print the metric table with this bracketing rule.
        #[arg(long, value_enum)]
        metric: Option<VariantArg>,
    },
    /// Run every acceptance criterion; exits nonzero on any failure.
    Suite {
        #[arg(long, default_value_t = 16)]
        max_order: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    AllParenthesizations,
    LeftNormed,
}

impl From<VariantArg> for StarMetricVariant {
    fn from(v: VariantArg) -> StarMetricVariant {
        match v {
            VariantArg::AllParenthesizations => StarMetricVariant::AllParenthesizations,
            VariantArg::LeftNormed => StarMetricVariant::LeftNormed,
        }
    }
}

/// Inline JSON, or the contents of the named file.
fn json_source(arg: &str) -> anyhow::Result<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading `{arg}`"))
    }
}

fn load_group(arg: &str) -> anyhow::Result<FiniteGroup> {
    if !arg.trim_start().starts_with('{') && !std::path::Path::new(arg).exists() {
        return by_name(arg).ok_or_else(|| anyhow!("`{arg}` is neither JSON, a file, nor a catalog group"));
    }
    let text = json_source(arg)?;
    let spec: GroupSpec = text.parse().context("parsing the group spec")?;
    Ok(spec.build()?)
}

fn subset(g: &FiniteGroup, literal: &str) -> anyhow::Result<Subset> {
    parse_subset(literal, g.order()).with_context(|| format!("parsing subset `{literal}`"))
}

/// Output sink with the requested format.
struct Out {
    format: Format,
    text: String,
}

impl Out {
    fn json<T: Serialize>(&mut self, value: &T) -> anyhow::Result<()> {
        self.text.push_str(&serde_json::to_string_pretty(value)?);
        self.text.push('\n');
        Ok(())
    }

    fn csv<I, R>(&mut self, header: &[&str], rows: I) -> anyhow::Result<()>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator,
        R::Item: AsRef<[u8]>,
    {
        let mut w = csv::Writer::from_writer(Vec::new());
        if !header.is_empty() {
            w.write_record(header)?;
        }
        for r in rows {
            w.write_record(r)?;
        }
        self.text.push_str(&String::from_utf8(w.into_inner()?)?);
        Ok(())
    }

    fn table(&mut self, labels: &[String], t: &MetricTable) -> anyhow::Result<()> {
        match self.format {
            Format::Json => self.json(&json!({ "labels": labels, "flavor": t.flavor, "table": t.rows() })),
            Format::Csv => {
                let mut header = vec![""];
                header.extend(labels.iter().map(String::as_str));
                let rows = t.rows().into_iter().zip(labels).map(|(row, l)| {
                    std::iter::once(l.clone()).chain(row.iter().map(ExtNat::to_string)).collect::<Vec<_>>()
                });
                self.csv(&header, rows)
            }
        }
    }

    fn report(&mut self, r: &Report) -> anyhow::Result<()> {
        match self.format {
            Format::Json => self.json(r),
            Format::Csv => {
                let rows = r.checks.iter().map(|(name, t)| {
                    vec![
                        name.clone(),
                        t.passed.to_string(),
                        t.failed.to_string(),
                        t.skipped.to_string(),
                        t.witnesses.first().cloned().unwrap_or_default(),
                    ]
                });
                self.csv(&["check", "passed", "failed", "skipped", "counterexample"], rows)
            }
        }
    }

    fn axioms(&mut self, what: &str, a: &AxiomReport) -> anyhow::Result<()> {
        match self.format {
            Format::Json => self.json(&json!({ "subject": what, "classification": a.classification(), "axioms": a })),
            Format::Csv => {
                let yes = |b: bool| if b { "yes" } else { "no" };
                let rows = [
                    ["metric", yes(a.is_metric())],
                    ["asymmetric metric", yes(a.is_asymmetric_metric())],
                    ["nondegenerate", yes(a.is_nondegenerate())],
                    ["classification", a.classification()],
                ];
                for [k, v] in rows {
                    self.text.push_str(&format!("{k}: {v}\n"));
                }
                Ok(())
            }
        }
    }
}

/// Runs a list of named checks and folds them into one report.
fn collect(title: &str, parts: Vec<(String, wordmetric::error::Result<Report>)>) -> anyhow::Result<Report> {
    let mut report = Report::new(title);
    for (name, r) in parts {
        match r {
            Ok(r) => report.merge_prefixed(&name, r),
            Err(Error::Domain(why)) => report.skip(&name, &why),
            Err(e) => return Err(anyhow!("{name}: {e}")),
        }
    }
    Ok(report)
}

fn run(cli: &Cli, out: &mut Out) -> anyhow::Result<bool> {
    let seed = cli.seed;
    match &cli.command {
        Command::Norm { group, s } => {
            let g = load_group(&group.group)?;
            let s = subset(&g, s)?;
            let lengths = word_lengths(&g, &s);
            match out.format {
                Format::Json => out.json(&json!({ "group": g.name(), "s": s, "lengths": lengths }))?,
                Format::Csv => out.csv(&["element", "length"], lengths.iter().enumerate().map(|(x, l)| [x.to_string(), l.to_string()]))?,
            }
        }
        Command::Metric { group, s, symmetrize } => {
            let g = load_group(&group.group)?;
            let s = subset(&g, s)?;
            let mut t = word_metric_table(&g, &s);
            if *symmetrize {
                t = symmetrize_metric(&t);
            }
            let labels: Vec<String> = (0..g.order()).map(|x| x.to_string()).collect();
            out.table(&labels, &t)?;
        }
        Command::NuHTable { group, family, cap } => {
            let g = load_group(&group.group)?;
            if g.order() > *cap {
                bail!(Error::Cap(format!("|G| = {} exceeds --cap {cap}; raise --cap to enumerate 2^{} subsets", g.order(), g.order())));
            }
            let sets = Family::from(*family).enumerate(&g)?;
            let norms = NormFamily::new(&g, &sets);
            let labels: Vec<String> = sets.iter().map(Subset::to_string).collect();
            out.table(&labels, &norms.table())?;
        }
        Command::CheckAxioms { group, s, sampling } => {
            let g = load_group(&group.group)?;
            match s {
                Some(s) => {
                    let s = subset(&g, s)?;
                    let a = check_metric_axioms(&word_metric_table(&g, &s));
                    out.axioms(&format!("d_S, S = {s}"), &a)?;
                }
                None => {
                    let r = nu_h_axioms(&g, sampling.sample(g.order(), seed))?;
                    out.report(&r)?;
                    return Ok(r.is_ok());
                }
            }
        }
        Command::TransportVerify { group, normal, b, m, sampling } => {
            let g = Arc::new(load_group(&group.group)?);
            let k = subset(&g, normal)?;
            let (_, f) = quotient_by_normal(&g, &k)?;
            let b = b.as_deref().map(|b| subset(&g, b)).transpose()?;
            let sample = sampling.sample(g.order(), seed);
            let r = collect(
                "transport",
                vec![
                    ("pullback isometry".into(), verify_pullback_isometry(&f, sample)),
                    ("pushforward".into(), verify_pushforward_lipschitz(&f, sample)),
                    ("compatibility".into(), compatibility_suite(&f, sample, 4)),
                    ("retraction".into(), retraction_suite(&f, sample)),
                    ("R condition".into(), r_condition_suite(&f, sample)),
                    ("lifts".into(), chi_omega_roundtrip(&f, sample)),
                    ("lift conjugation".into(), lift_conjugation_check(&f, sample)),
                    ("Q_m".into(), wordmetric::transport::kernel_uniform_m(&f).and_then(|m| qm_suite(&f, m, sample))),
                    ("eta".into(), qi_bounds_check(&f, b.as_ref(), *m, sample)),
                ],
            )?;
            out.report(&r)?;
            return Ok(r.is_ok());
        }
        Command::SdprodVerify { group, h, k, l, sampling } => {
            let g = Arc::new(load_group(&group.group)?);
            let (h, k) = (subset(&g, h)?, subset(&g, k)?);
            let l = l.as_deref().map(|l| subset(&g, l)).transpose()?.unwrap_or_else(|| k.clone());
            let ctx = SemidirectContext::new(g.clone(), h, k)?;
            let sample = sampling.sample(g.order(), seed);
            let mut parts = vec![("psi".into(), psi_suite(&ctx, &l, sample)), ("metric".into(), sdprod_metric_compare(&ctx, &l, sample))];
            for p in ConditionP::ALL {
                parts.push((format!("condition {p}"), condition_preservation(&ctx, p, &l, sample)));
            }
            if ctx.is_direct() {
                parts.push(("direct".into(), direct_product_collapse(&ctx, sample)));
                parts.push(("direct powers".into(), direct_product_identities(&ctx, sample, 4)));
            }
            let r = collect("semidirect product", parts)?;
            out.report(&r)?;
            return Ok(r.is_ok());
        }
        Command::Invariants { group, cap } => {
            let g = load_group(&group.group)?;
            let summary = summarize(&g, *cap, seed)?;
            match out.format {
                Format::Json => out.json(&summary)?,
                Format::Csv => {
                    let rows = [("rank_n", &summary.rank_n), ("diam_nfg", &summary.diam_nfg), ("delta", &summary.delta)].map(|(name, w)| {
                        [
                            name.to_string(),
                            w.value.to_string(),
                            w.witness.as_ref().map(Subset::to_string).unwrap_or_default(),
                            w.exhaustive.to_string(),
                        ]
                    });
                    out.csv(&["invariant", "value", "witness", "exhaustive"], rows)?;
                }
            }
        }
        Command::ActionMetric { action, quandle, s, generators } => {
            let (a, default_s) = match (action, quandle) {
                (Some(spec), _) => (GroupAction::from_json(&json_source(spec)?)?, None),
                (None, Some(spec)) => {
                    let x = StarSet::from_json("X", &json_source(spec)?)?;
                    let qa = automorphism_action(&x)?;
                    let gens = match generators {
                        GeneratorsArg::Inn => qa.inn_generators.clone(),
                        GeneratorsArg::Dis => qa.dis_generators.clone(),
                    };
                    (qa.action, Some(gens))
                }
                (None, None) => unreachable!("clap requires one of --action or --quandle"),
            };
            let s = match (s, default_s) {
                (Some(s), _) => subset(a.group(), s)?,
                (None, Some(gens)) => gens,
                (None, None) => bail!("--s is required with --action"),
            };
            let labels: Vec<String> = (0..a.size()).map(|x| x.to_string()).collect();
            out.table(&labels, &action_metric_table(&a, &s)?)?;
        }
        Command::Star { spec, s, metric } => {
            let x = StarSet::from_json("X", &json_source(spec)?)?;
            let s = parse_subset(s, x.size()).with_context(|| format!("parsing subset `{s}`"))?;
            let lengths = star_word_lengths(&x, &s)?;
            match metric {
                Some(v) => {
                    let labels: Vec<String> = (0..x.size()).map(|p| p.to_string()).collect();
                    out.table(&labels, &star_metric_table(&x, &s, (*v).into())?)?;
                }
                None => match out.format {
                    Format::Json => out.json(&json!({ "size": x.size(), "s": s, "lengths": lengths }))?,
                    Format::Csv => out.csv(&["element", "length"], lengths.iter().enumerate().map(|(p, l)| [p.to_string(), l.to_string()]))?,
                },
            }
        }
        Command::Suite { max_order } => {
            let outcomes = run_suite(&SuiteConfig { max_order: *max_order, seed });
            let ok = outcomes.iter().all(|o| o.passed());
            match out.format {
                Format::Json => out.json(&outcomes)?,
                Format::Csv => {
                    for o in &outcomes {
                        out.text.push_str(&o.line());
                        out.text.push('\n');
                        for e in &o.errors {
                            out.text.push_str(&format!("    error: {e}\n"));
                        }
                        for (name, t) in o.report.checks.iter().filter(|(_, t)| t.failed > 0) {
                            out.text.push_str(&format!("    {name}: {}\n", t.witnesses.first().map_or("", String::as_str)));
                        }
                    }
                }
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out { format: cli.format, text: String::new() };
    let result = run(&cli, &mut out);
    let written = match &cli.out {
        Some(path) => fs::write(path, &out.text).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout().write_all(out.text.as_bytes()).map_err(Into::into),
    };
    match (result, written) {
        (Ok(ok), Ok(())) => {
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        (Err(e), _) | (_, Err(e)) => {
            // Skip causes already spelled out by the message above them.
            let mut msg = e.to_string();
            for cause in e.chain().skip(1) {
                let c = cause.to_string();
                if !msg.contains(&c) {
                    msg = format!("{msg}: {c}");
                }
            }
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
