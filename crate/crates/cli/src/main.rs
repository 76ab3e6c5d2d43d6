//! `p3bundles`: proof-script replay, oracle queries, monad data, series enumeration
//! and the acceptance suite.
//!
//! Exit status: 0 on success, 1 on a verification failure, 2 on a usage error.

mod config;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use p3bundles::acceptance::run_all;
use p3bundles::atlas::{self, compare, coverage_sigma0, curated_section5, density_sigma1, enumerate, SeriesLabel};
use p3bundles::engine::{ConfigKind, ScriptError};
use p3bundles::monad::{
    cohomology_chern, component_dimension, expected_dimension, h1_profile, intermediate_dims, middle_term_checks,
    spectrum, MonadSeries, MonadSpec,
};
use p3bundles::oracle::{
    config::RETRIES, h0_ideal, h1_ideal, restriction_surjective, sample_config_with_retries, serre_bundle_h1, Series,
    Source,
};
use p3bundles::scripts::{bundled, run_checked};

use config::{Format, RunConfig, OUT_DIR_VAR};

#[derive(Parser, Debug)]
#[command(name = "p3bundles", version, about = "Cohomology bookkeeping and moduli-component tables for rank-2 bundles on P^3")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Resampling budget per configuration.
    #[arg(long, global = true, default_value_t = RETRIES)]
    retries: usize,
    /// Write the report here instead of stdout; relative paths are taken from $P3BUNDLES_OUT_DIR when set.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Replay a proof script.
    Verify(VerifyArgs),
    /// Query the brute-force oracle.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Chern data, profiles, spectra and dimensions of the monad bundles.
    #[command(subcommand)]
    Monad(MonadCmd),
    /// Enumerate the component series.
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Run the acceptance suite.
    Accept,
    #[command(hide = true)]
    Spectrum(MonadArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScriptName {
    Prop1,
    #[value(name = "prop1-modified")]
    Prop1Modified,
    Prop2,
    #[value(name = "thmA-chain")]
    ThmAChain,
    #[value(name = "thmB-chain")]
    ThmBChain,
}

impl ScriptName {
    fn name(self) -> &'static str {
        match self {
            ScriptName::Prop1 => "prop1",
            ScriptName::Prop1Modified => "prop1-modified",
            ScriptName::Prop2 => "prop2",
            ScriptName::ThmAChain => "thmA-chain",
            ScriptName::ThmBChain => "thmB-chain",
        }
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    script: ScriptName,
    #[arg(long)]
    m: Option<i64>,
    #[arg(long)]
    eps: Option<i64>,
    #[arg(long)]
    a: Option<i64>,
    #[arg(long)]
    d: Option<i64>,
    /// Replay this file instead of the bundled script.
    #[arg(long)]
    script_path: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConfigArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: ConfigKind,
    /// Number of main components.
    #[arg(long)]
    count: u64,
    /// Number of auxiliary lines.
    #[arg(long, default_value_t = 0)]
    aux: u64,
}

fn parse_kind(s: &str) -> Result<ConfigKind, String> {
    s.parse()
}

#[derive(Subcommand, Debug)]
enum OracleCmd {
    /// h0 and h1 of the twisted ideal sheaf.
    Ideal {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// Sub-configuration selector.
        #[arg(long, default_value = "")]
        part: String,
    },
    /// Whether a restriction map onto a sub-configuration or marked points is onto.
    Restrict {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// `p3:K` or `quadric:P,Q`.
        #[arg(long, value_parser = parse_source)]
        source: Source,
        #[arg(long, default_value = "")]
        target: String,
    },
    /// h1 of the Serre bundle of the configuration.
    Serre {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, value_enum)]
        series: SerreSeries,
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SerreSeries {
    Thooft,
    ConicSerre,
}

fn parse_source(s: &str) -> Result<Source, String> {
    let bad = || format!("expected p3:K or quadric:P,Q, got `{s}`");
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    match kind {
        "p3" => rest.parse().map(Source::P3).map_err(|_| bad()),
        "quadric" => {
            let (p, q) = rest.split_once(',').ok_or_else(bad)?;
            Ok(Source::Quadric(p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?))
        }
        _ => Err(bad()),
    }
}

#[derive(Args, Debug, Clone)]
struct MonadArgs {
    #[arg(long)]
    series: MonadSeries,
    #[arg(long)]
    m: i64,
    #[arg(long)]
    eps: i64,
    #[arg(long)]
    a: i64,
}

#[derive(Subcommand, Debug)]
enum MonadCmd {
    Chern(MonadArgs),
    /// h1(E(t)) for t in [lo, hi]; defaults to [-a-4, -1].
    Profile {
        #[command(flatten)]
        spec: MonadArgs,
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<i64>,
    },
    Spectrum(MonadArgs),
    /// Component dimension and the intermediate dimension identities.
    Dims {
        #[command(flatten)]
        spec: MonadArgs,
        /// Also replay the vanishing conditions of the middle term.
        #[arg(long)]
        middle: bool,
    },
}

#[derive(Subcommand, Debug)]
enum SeriesCmd {
    Enumerate {
        #[arg(long)]
        series: SeriesLabel,
        #[arg(long)]
        n_max: i64,
    },
    /// Values of n in [lo, hi] not reached by Sigma0.
    Coverage {
        #[arg(long, default_value_t = 146)]
        lo: i64,
        #[arg(long, default_value_t = 10_000)]
        hi: i64,
    },
    /// Density of the Sigma1 values of c2 among even numbers up to 2r.
    Density {
        #[arg(long, value_delimiter = ',', default_values_t = [1_000i64, 10_000, 100_000, 1_000_000])]
        r: Vec<i64>,
    },
    /// The small-c2 tables with the recomputed values.
    Section5,
    /// Every known record at (e, n).
    Compare {
        #[arg(long, allow_hyphen_values = true)]
        e: i64,
        #[arg(long)]
        n: i64,
    },
}

/// Outcome of a subcommand: the rendered report and whether verification held.
struct Output {
    body: String,
    ok: bool,
}

enum Failure {
    Usage(String),
    Verify(String),
}

impl From<ScriptError> for Failure {
    fn from(e: ScriptError) -> Self {
        Failure::Verify(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = cli.global.output.clone();
    match run(cli) {
        Ok(o) => {
            if let Err(e) = emit(&o.body, out) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if o.ok { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}

fn emit(body: &str, output: Option<PathBuf>) -> std::io::Result<()> {
    match output {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(p) => {
            let p = match std::env::var_os(OUT_DIR_VAR) {
                Some(dir) if p.is_relative() => PathBuf::from(dir).join(p),
                _ => p,
            };
            std::fs::write(p, body)
        }
    }
}

fn base(g: &Global, command: &str) -> RunConfig {
    RunConfig {
        command: command.to_string(),
        seed: g.seed,
        format: g.format,
        grid: BTreeMap::new(),
        options: BTreeMap::new(),
        retries: g.retries,
        scripts: Vec::new(),
    }
}

fn grid(pairs: &[(&str, Option<i64>)]) -> BTreeMap<String, i64> {
    pairs.iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))).collect()
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let g = &cli.global;
    match cli.command {
        Command::Verify(args) => verify(g, args),
        Command::Oracle(cmd) => oracle(g, cmd),
        Command::Monad(cmd) => monad(g, cmd),
        Command::Spectrum(args) => monad(g, MonadCmd::Spectrum(args)),
        Command::Series(cmd) => series(g, cmd),
        Command::Accept => {
            let cfg = base(g, "accept");
            let (report, timings) = run_all(g.seed);
            for (id, t) in &timings {
                eprintln!("criterion {id:>2}: {t:.2?}");
            }
            let tsv = || {
                let mut s = String::from("id\tpassed\ttitle\tdetail\n");
                for c in &report.criteria {
                    let _ = writeln!(s, "{}\t{}\t{}\t{}", c.id, c.passed, c.title, c.detail);
                }
                s
            };
            let body = cfg.render(&report, || report.to_text(), tsv);
            Ok(Output { body, ok: report.all_passed() })
        }
    }
}

fn verify(g: &Global, args: VerifyArgs) -> Result<Output, Failure> {
    let name = args.script.name();
    let mut cfg = base(g, &format!("verify {name}"));
    cfg.grid = grid(&[("m", args.m), ("eps", args.eps), ("a", args.a), ("d", args.d)]);
    let (label, src) = match &args.script_path {
        Some(p) => {
            cfg.scripts.push(p.clone());
            let src = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            (p.display().to_string(), src)
        }
        None => (format!("{name}.les"), bundled(name).expect("bundled").to_string()),
    };
    let params: Vec<(&str, i64)> = cfg.grid.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    let report = match run_checked(&label, &src, &params, g.seed, Some(g.retries)) {
        Ok(r) => r,
        Err(ScriptError::AssertionNotEntailed { report, .. }) => *report,
        Err(e @ (ScriptError::Parse { .. } | ScriptError::Semantic { .. })) => return Err(Failure::Usage(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let ok = report.all_entailed() && report.oracle_mismatches() == 0;
    let tsv = || {
        let mut s = String::from("line\tassertion\tinterval\tstatus\n");
        for a in &report.assertions {
            let _ = writeln!(s, "{}\t{}\t{}\t{:?}", a.line, a.text, a.interval, a.status);
        }
        s
    };
    let body = cfg.render(&report, || report.to_text(), tsv);
    Ok(Output { body, ok })
}

fn sample(g: &Global, c: &ConfigArgs) -> Result<p3bundles::oracle::LineConfiguration, Failure> {
    sample_config_with_retries(c.kind, c.count, c.aux, g.seed, "Y", g.retries).map_err(|e| Failure::Usage(e.to_string()))
}

fn oracle_config(g: &Global, command: &str, c: &ConfigArgs) -> RunConfig {
    let mut cfg = base(g, command);
    cfg.grid = grid(&[("count", Some(c.count as i64)), ("aux", Some(c.aux as i64))]);
    cfg.options.insert("kind".into(), format!("{:?}", c.kind));
    cfg
}

#[derive(Serialize)]
struct OracleResult<T: Serialize> {
    config: p3bundles::oracle::LineConfiguration,
    #[serde(flatten)]
    value: T,
}

fn oracle(g: &Global, cmd: OracleCmd) -> Result<Output, Failure> {
    let usage = |e: p3bundles::oracle::OracleError| Failure::Usage(e.to_string());
    match cmd {
        OracleCmd::Ideal { cfg: c, k, part } => {
            let mut cfg = oracle_config(g, "oracle ideal", &c);
            cfg.grid.insert("k".into(), k);
            cfg.options.insert("part".into(), part.clone());
            let lc = sample(g, &c)?;
            let h0 = h0_ideal(&lc, &part, k).map_err(usage)?;
            let h1 = h1_ideal(&lc, &part, k).map_err(usage)?;
            let res = OracleResult { config: lc, value: BTreeMap::from([("h0", h0), ("h1", h1)]) };
            let body = cfg.render(
                &res,
                || format!("h0(I({k})) = {h0}\nh1(I({k})) = {h1}\n"),
                || format!("k\th0\th1\n{k}\t{h0}\t{h1}\n"),
            );
            Ok(Output { body, ok: true })
        }
        OracleCmd::Restrict { cfg: c, source, target } => {
            let mut cfg = oracle_config(g, "oracle restrict", &c);
            cfg.options.insert("source".into(), format!("{source:?}"));
            cfg.options.insert("target".into(), target.clone());
            let lc = sample(g, &c)?;
            let onto = restriction_surjective(&lc, source, &target).map_err(usage)?;
            let res = OracleResult { config: lc, value: BTreeMap::from([("surjective", onto)]) };
            let body = cfg.render(&res, || format!("surjective = {onto}\n"), || format!("surjective\n{onto}\n"));
            Ok(Output { body, ok: true })
        }
        OracleCmd::Serre { cfg: c, series, l } => {
            let mut cfg = oracle_config(g, "oracle serre", &c);
            cfg.grid.insert("l".into(), l);
            cfg.options.insert("series".into(), format!("{series:?}"));
            let lc = sample(g, &c)?;
            let s = match series {
                SerreSeries::Thooft => Series::Thooft,
                SerreSeries::ConicSerre => Series::ConicSerre,
            };
            let h1 = serre_bundle_h1(&lc, s, l).map_err(usage)?;
            let res = OracleResult { config: lc, value: BTreeMap::from([("h1", h1)]) };
            let body = cfg.render(&res, || format!("h1(E({l})) = {h1}\n"), || format!("l\th1\n{l}\t{h1}\n"));
            Ok(Output { body, ok: true })
        }
    }
}

fn monad_spec(args: &MonadArgs) -> Result<MonadSpec, Failure> {
    MonadSpec::any(args.series, args.m, args.eps, args.a).map_err(|e| Failure::Usage(e.to_string()))
}

fn monad_config(g: &Global, command: &str, args: &MonadArgs) -> RunConfig {
    let mut cfg = base(g, command);
    cfg.grid = grid(&[("m", Some(args.m)), ("eps", Some(args.eps)), ("a", Some(args.a))]);
    cfg.options.insert("series".into(), args.series.to_string());
    cfg
}

fn monad(g: &Global, cmd: MonadCmd) -> Result<Output, Failure> {
    let verify = |e: p3bundles::monad::MonadError| Failure::Verify(e.to_string());
    match cmd {
        MonadCmd::Chern(args) => {
            let cfg = monad_config(g, "monad chern", &args);
            let spec = monad_spec(&args)?;
            let c = cohomology_chern(&spec).map_err(verify)?;
            let body = cfg.render(
                &c,
                || format!("{spec}: {c}\n"),
                || format!("rank\tc1\tc2\tc3\n{}\t{}\t{}\t{}\n", c.rank, c.c1, c.c2, c.c3),
            );
            Ok(Output { body, ok: true })
        }
        MonadCmd::Profile { spec: args, lo, hi } => {
            let mut cfg = monad_config(g, "monad profile", &args);
            let spec = monad_spec(&args)?;
            let (lo, hi) = (lo.unwrap_or(-spec.a - 4), hi.unwrap_or(-1));
            cfg.grid.extend(grid(&[("lo", Some(lo)), ("hi", Some(hi))]));
            let p = h1_profile(&spec, lo, hi, g.seed).map_err(verify)?;
            let rows = || p.iter().map(|(t, h)| format!("{t}\t{h}\n")).collect::<String>();
            let body = cfg.render(
                &p,
                || p.iter().map(|(t, h)| format!("h1(E({t})) = {h}\n")).collect(),
                || format!("t\th1\n{}", rows()),
            );
            Ok(Output { body, ok: true })
        }
        MonadCmd::Spectrum(args) => {
            let cfg = monad_config(g, "monad spectrum", &args);
            let spec = monad_spec(&args)?;
            let s = spectrum(&spec, g.seed).map_err(verify)?;
            let body = cfg.render(&s, || format!("{s}\n"), || format!("spectrum\n{s}\n"));
            Ok(Output { body, ok: true })
        }
        MonadCmd::Dims { spec: args, middle } => {
            let mut cfg = monad_config(g, "monad dims", &args);
            cfg.options.insert("middle".into(), middle.to_string());
            let spec = monad_spec(&args)?;
            let dimension = component_dimension(&spec);
            let expected = expected_dimension(spec.series.c1(), spec.n());
            let identities = intermediate_dims(&spec).map_err(verify)?;
            let middle = if middle { Some(middle_term_checks(&spec, g.seed).map_err(verify)?) } else { None };
            let ok = identities.all_agree() && middle.as_ref().is_none_or(|m| m.all_hold());
            #[derive(Serialize)]
            struct Dims {
                spec: MonadSpec,
                n: i64,
                dimension: i64,
                expected: i64,
                identities: p3bundles::monad::IdentityReport,
                middle: Option<p3bundles::monad::MiddleTermReport>,
            }
            let d = Dims { spec, n: spec.n(), dimension, expected, identities, middle };
            let text = || {
                let mut s = format!("{spec}: n = {}, dimension {dimension}, expected {expected}\n", spec.n());
                s.push_str(&d.identities.to_text());
                if let Some(m) = &d.middle {
                    s.push_str(&m.to_text());
                }
                s
            };
            let tsv = || {
                let mut s = String::from("quantity\tclosed_form\tderived\tagree\n");
                let _ = writeln!(s, "dimension\t{dimension}\t{dimension}\ttrue");
                for c in &d.identities.checks {
                    let _ = writeln!(s, "{}\t{}\t{}\t{}", c.label, c.closed_form, c.derived, c.agree);
                }
                s
            };
            let body = cfg.render(&d, text, tsv);
            Ok(Output { body, ok })
        }
    }
}

fn records_text(records: &[atlas::ComponentRecord]) -> String {
    let mut s = String::new();
    for r in records {
        let params = r.params.map_or(String::new(), |p| format!(" (m, eps, a) = ({}, {}, {})", p.m, p.eps, p.a));
        let _ = write!(s, "{} e={} n={}{params}: dimension {} expected {}", r.series, r.e, r.n, r.dimension, r.expected);
        if let Some(sp) = &r.spectrum {
            let _ = write!(s, " spectrum {sp}");
        }
        if !r.flags.is_empty() {
            let _ = write!(s, " {:?}", r.flags);
        }
        if let Some(note) = &r.note {
            let _ = write!(s, " [{note}]");
        }
        s.push('\n');
    }
    s
}

fn series(g: &Global, cmd: SeriesCmd) -> Result<Output, Failure> {
    match cmd {
        SeriesCmd::Enumerate { series, n_max } => {
            let mut cfg = base(g, "series enumerate");
            cfg.grid = grid(&[("n-max", Some(n_max))]);
            cfg.options.insert("series".into(), series.to_string());
            let recs = enumerate(series, n_max);
            let body = cfg.render(&recs, || records_text(&recs), || atlas::to_tsv(&recs));
            Ok(Output { body, ok: true })
        }
        SeriesCmd::Coverage { lo, hi } => {
            if lo > hi {
                return Err(Failure::Usage(format!("empty range [{lo}, {hi}]")));
            }
            let mut cfg = base(g, "series coverage");
            cfg.grid = grid(&[("lo", Some(lo)), ("hi", Some(hi))]);
            let missing = coverage_sigma0(lo, hi);
            let list = || missing.iter().map(|n| format!("{n}\n")).collect::<String>();
            let body = cfg.render(
                &missing,
                || format!("{} values of n in [{lo}, {hi}] not reached by SIGMA0\n{}", missing.len(), list()),
                || format!("uncovered_n\n{}", list()),
            );
            Ok(Output { body, ok: true })
        }
        SeriesCmd::Density { r } => {
            if r.iter().any(|&x| x < 1) {
                return Err(Failure::Usage("r must be positive".into()));
            }
            let mut cfg = base(g, "series density");
            cfg.options.insert("r".into(), r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
            let d: BTreeMap<i64, String> = r.iter().map(|&x| (x, density_sigma1(x).to_string())).collect();
            let body = cfg.render(
                &d,
                || d.iter().map(|(r, v)| format!("density({r}) = {v}\n")).collect(),
                || format!("r\tdensity\n{}", d.iter().map(|(r, v)| format!("{r}\t{v}\n")).collect::<String>()),
            );
            Ok(Output { body, ok: true })
        }
        SeriesCmd::Section5 => {
            let cfg = base(g, "series section5");
            let recs = curated_section5();
            let body = cfg.render(&recs, || records_text(&recs), || atlas::to_tsv(&recs));
            Ok(Output { body, ok: true })
        }
        SeriesCmd::Compare { e, n } => {
            let mut cfg = base(g, "series compare");
            cfg.grid = grid(&[("e", Some(e)), ("n", Some(n))]);
            let c = compare(e, n);
            let text = || {
                let mut s = records_text(&c.records);
                if !c.stubs.is_empty() {
                    let _ = writeln!(s, "also known: {}", c.stubs.join(", "));
                }
                for (i, j) in &c.separations {
                    let (x, y) = (&c.records[*i], &c.records[*j]);
                    let _ = writeln!(s, "{} ({}) exceeds {} ({})", x.series, x.dimension, y.series, y.dimension);
                }
                s
            };
            let body = cfg.render(&c, text, || atlas::to_tsv(&c.records));
            Ok(Output { body, ok: true })
        }
    }
}
