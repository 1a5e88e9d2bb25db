use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fibercone::blowup::BlowupChain;
use fibercone::certificate::distinct_components_certificate;
use fibercone::filtration::{self, AnySequence, GroupValue, ValueSequence};
use fibercone::gauss::{self, random_polynomial};
use fibercone::io::{self, DivisorDocument};
use fibercone::report::Report;
use fibercone::sweep::{self, CheckSet, SweepConfig, ROW_HEADER};
use fibercone::Error;

const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "fibercone", version)]
#[command(
    about = "Exact checks for blowup chains, rounded divisor families and valuation sequences"
)]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Worker threads for sweeps; 0 uses every core.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Record the wall-clock time in the report.
    #[arg(long, global = true)]
    timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the intersection form of a chain.
    Chain {
        #[arg(long, conflicts_with = "file")]
        preset: Option<String>,
        #[arg(long)]
        length: Option<usize>,
        /// JSON chain description.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Truncate to the first `level` blowups.
        #[arg(long)]
        level: Option<usize>,
    },
    /// Sweep the closed forms, nefness, pullback and positivity claims.
    Verify {
        #[arg(long, default_value_t = 12)]
        l_max: usize,
        #[arg(long, default_value_t = 4096)]
        m_max: u64,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long, default_value_t = 512)]
        bridge_m_max: u64,
        /// Comma-separated subset of: closed-form, antinef, pullback, positivity, bridge.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Sweep `ceil(m F)` for a rational family F instead of the built-in one.
        #[arg(long)]
        family: Option<PathBuf>,
        /// Chain for `--family`; defaults to the standard chain of matching length.
        #[arg(long, requires = "family")]
        chain: Option<PathBuf>,
    },
    /// Emit a certificate for N distinct components of the fiber cone.
    Certify {
        #[arg(long = "n")]
        n: usize,
    },
    /// Truncated gamma invariant and centre criterion for a value sequence.
    Gamma {
        /// JSON value sequence `{"M": ..., "values": [...]}`.
        #[arg(long, conflicts_with_all = ["n", "composite"])]
        file: Option<PathBuf>,
        /// Use the built-in sequence for the curve `E_n`.
        #[arg(long = "n")]
        n: Option<usize>,
        #[arg(long = "bound", default_value_t = 64)]
        bound: usize,
        /// Use the rank-two composite valuation.
        #[arg(long)]
        composite: bool,
    },
    /// Gauss values of polynomials and multiplicativity spot checks.
    Gauss {
        #[arg(long)]
        file: Option<PathBuf>,
        /// Additional seeded random pairs to test.
        #[arg(long, default_value_t = 0)]
        random: usize,
    },
}

enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

struct Output {
    report: Report,
    tsv_body: String,
    /// Replaces the JSON rendering of the report when set.
    json_override: Option<String>,
    default_format: Format,
    summary: Option<String>,
}

impl Output {
    fn new(report: Report, default_format: Format) -> Self {
        Output {
            report,
            tsv_body: String::new(),
            json_override: None,
            default_format,
            summary: None,
        }
    }
}

fn cmd_chain(
    preset: Option<String>,
    length: Option<usize>,
    file: Option<PathBuf>,
    level: Option<usize>,
) -> Result<Output, Failure> {
    let (chain, echo) = match (file, preset) {
        (Some(path), _) => (
            io::parse_chain(&read(&path)?)?,
            format!("chain --file {}", path.display()),
        ),
        (None, preset) => {
            let preset = preset.unwrap_or_else(|| "paper".to_string());
            let length = length
                .ok_or_else(|| Failure::Usage("--length is required with a preset".into()))?;
            let chain = io::ChainDocument::Preset {
                preset: preset.clone(),
                length,
            }
            .into_chain()?;
            (chain, format!("chain --preset {preset} --length {length}"))
        }
    };
    let level = level.unwrap_or(chain.len());
    let form = chain.intersection_form::<BigInt>(level)?;
    let mut report = Report::new(format!("{echo} --level {level}"));
    let minors = form.leading_minors();
    report.push_assertion("symmetric", form.is_symmetric(), || {
        "form is not symmetric".into()
    });
    report.push_assertion("negative_definite", form.is_negative_definite(), || {
        format!("leading minors {minors:?}")
    });
    let rows: Vec<Vec<String>> = form
        .rows()
        .iter()
        .map(|r| r.iter().map(|v| v.to_string()).collect())
        .collect();
    report.data = serde_json::json!({
        "level": level,
        "parents": chain.parents()[..level].iter().map(|p| p.code()).collect::<Vec<_>>(),
        // entries are bounded by the chain length
        "form": form.rows().iter().map(|r| r.iter().map(|v| v.to_i64().expect("small entry")).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "leading_minors": minors.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    });
    let mut out = Output::new(report, Format::Tsv);
    out.tsv_body = rows.iter().map(|r| r.join("\t") + "\n").collect();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    l_max: usize,
    m_max: u64,
    n_max: usize,
    bridge_m_max: u64,
    only: Vec<String>,
    family: Option<PathBuf>,
    chain: Option<PathBuf>,
    jobs: usize,
) -> Result<Output, Failure> {
    if let Some(path) = family {
        let doc: DivisorDocument =
            serde_json::from_str(&read(&path)?).map_err(|e| Failure::Usage(e.to_string()))?;
        let f = doc.to_divisor::<BigInt>()?;
        let chain = match &chain {
            Some(p) => io::parse_chain(&read(p)?)?,
            None => BlowupChain::paper(f.level())?,
        };
        let (summary, rows) = sweep::family_antinef_sweep(&f, &chain, m_max)?;
        let mut report = Report::new(format!(
            "verify --family {} --m-max {m_max}{}",
            path.display(),
            chain_echo(&chain)
        ));
        report.push_check(summary);
        let mut out = Output::new(report, Format::Tsv);
        let header: Vec<String> = (1..=f.level()).map(|n| format!("neg_D_dot_E{n}")).collect();
        out.tsv_body = format!("m\t{}\n", header.join("\t"));
        for r in rows {
            out.tsv_body.push_str(&r);
            out.tsv_body.push('\n');
        }
        return Ok(out);
    }

    let checks = if only.is_empty() {
        CheckSet::all()
    } else {
        let mut c = CheckSet {
            closed_form: false,
            antinef: false,
            pullback: false,
            positivity: false,
            bridge: false,
        };
        for name in &only {
            match name.trim() {
                "closed-form" => c.closed_form = true,
                "antinef" => c.antinef = true,
                "pullback" => c.pullback = true,
                "positivity" => c.positivity = true,
                "bridge" => c.bridge = true,
                other => return Err(Failure::Usage(format!("unknown check {other:?}"))),
            }
        }
        c
    };
    let cfg = SweepConfig {
        l_max,
        m_max,
        n_max,
        bridge_m_max,
        checks,
        jobs: if jobs == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            jobs
        },
    };
    let result = sweep::run_sweep(&cfg)?;
    let mut report = Report::new(format!(
        "verify --l-max {l_max} --m-max {m_max} --n-max {n_max} --bridge-m-max {bridge_m_max} --only {}",
        if only.is_empty() { "all".to_string() } else { only.join(",") }
    ));
    for c in result.checks.iter().cloned() {
        report.push_check(c);
    }
    report.witnesses = result.witnesses.clone();
    let mut out = Output::new(report, Format::Tsv);
    if !result.rows.is_empty() {
        let mut body = String::with_capacity(result.rows.len() * 24);
        body.push_str(ROW_HEADER);
        body.push('\n');
        for row in &result.rows {
            body.push_str(&row.tsv());
            body.push('\n');
        }
        out.tsv_body = body;
    }
    Ok(out)
}

fn chain_echo(chain: &BlowupChain) -> String {
    let codes: Vec<String> = chain
        .parents()
        .iter()
        .map(|p| p.code().to_string())
        .collect();
    format!(" --chain-parents {}", codes.join(","))
}

fn cmd_certify(n: usize) -> Result<Output, Failure> {
    let cert = distinct_components_certificate(n)?;
    let mut report = Report::new(format!("certify --n {n}"));
    report.push_assertion(
        "positivity",
        cert.intersections.iter().all(|&v| v > 0),
        || "non-positive intersection".into(),
    );
    report.push_assertion(
        "pairwise_distinct",
        cert.distinguishing_witnesses.iter().all(|w| w.va != w.vb),
        || "equal values".into(),
    );
    let reverified = cert.reverify();
    report.push_assertion("matrix_reverification", reverified.is_ok(), || {
        reverified
            .as_ref()
            .err()
            .map(|e| e.to_string())
            .unwrap_or_default()
    });
    for (i, v) in cert.intersections.iter().enumerate() {
        report.witnesses.push(format!(
            "positive\tn={}\tl={}\tm={}\tvalue={v}",
            i + 1,
            cert.l,
            cert.m
        ));
    }
    for w in &cert.distinguishing_witnesses {
        report.witnesses.push(format!(
            "distinct\ta={}\tb={}\tm={}\tva={}\tvb={}",
            w.a, w.b, w.m, w.va, w.vb
        ));
    }
    let mut out = Output::new(report, Format::Json);
    out.json_override =
        Some(serde_json::to_string_pretty(&cert).expect("certificate serializes") + "\n");
    out.summary = Some(cert.summary());
    Ok(out)
}

fn gamma_report<V: GroupValue>(seq: &ValueSequence<V>, report: &mut Report) -> String {
    let g = filtration::gamma(seq);
    let center = filtration::center_criterion(seq);
    let (status, witness) = match g.status {
        filtration::Attainment::Attained { witness } => {
            (format!("Attained({witness})"), Some(witness))
        }
        filtration::Attainment::NotAttainedUpTo { bound } => {
            (format!("NotAttainedUpTo({bound})"), None)
        }
    };
    let center = match center {
        filtration::CenterStatus::HasCenter { witness } => format!("HasCenter({witness})"),
        filtration::CenterStatus::UnknownUpTo { bound } => format!("UnknownUpTo({bound})"),
    };
    if let Some(w) = witness {
        for k in 1..=seq.bound() / w {
            report.witnesses.push(format!(
                "attained\tm={}\tvalue={}\tratio={}",
                k * w,
                seq.get(k * w).expect("in bound"),
                seq.ratio(k * w).expect("in bound")
            ));
        }
    }
    report.data = serde_json::json!({
        "M": seq.bound(),
        "gamma": g.gamma.to_string(),
        "status": status,
        "center": center,
        "trace": g.trace.iter().map(|(m, r)| serde_json::json!([m, r.to_string()])).collect::<Vec<_>>(),
    });
    let mut body = format!(
        "gamma\t{}\nstatus\t{status}\ncenter\t{center}\nm\tratio\n",
        g.gamma
    );
    for (m, r) in &g.trace {
        body.push_str(&format!("{m}\t{r}\n"));
    }
    body
}

fn cmd_gamma(
    file: Option<PathBuf>,
    n: Option<usize>,
    bound: usize,
    composite: bool,
) -> Result<Output, Failure> {
    let (seq, echo) = match (file, n) {
        (Some(path), _) => (
            io::parse_sequence(&read(&path)?)?,
            format!("gamma --file {}", path.display()),
        ),
        (None, Some(n)) => {
            let seq = if composite {
                AnySequence::Rank2(filtration::composite_value_sequence(n, bound)?)
            } else {
                AnySequence::Rank1(filtration::paper_value_sequence(n, bound)?)
            };
            let kind = if composite { " --composite" } else { "" };
            (seq, format!("gamma --n {n} --bound {bound}{kind}"))
        }
        (None, None) => return Err(Failure::Usage("gamma needs --file or --n".into())),
    };
    let mut report = Report::new(echo);
    report.push_assertion("subadditive", true, String::new);
    let body = match &seq {
        AnySequence::Rank1(s) => gamma_report(s, &mut report),
        AnySequence::Rank2(s) => gamma_report(s, &mut report),
    };
    let mut out = Output::new(report, Format::Json);
    out.tsv_body = body;
    Ok(out)
}

fn cmd_gauss(file: Option<PathBuf>, random: usize, seed: u64) -> Result<Output, Failure> {
    let (polys, mut echo) = match &file {
        Some(path) => (
            io::parse_polynomials(&read(path)?)?,
            format!("gauss --file {}", path.display()),
        ),
        None if random > 0 => (Vec::new(), "gauss".to_string()),
        None => return Err(Failure::Usage("gauss needs --file or --random".into())),
    };
    if random > 0 {
        echo.push_str(&format!(" --random {random} --seed {seed}"));
    }
    let mut report = Report::new(echo);
    let mut body = String::from("index\tgauss_value\n");
    let mut values = Vec::new();
    for (i, f) in polys.iter().enumerate() {
        let w = f.gauss_value();
        if f.is_zero() {
            report.witnesses.push(format!("zero_polynomial\tindex={i}"));
        }
        body.push_str(&format!("{i}\t{w}\n"));
        values.push(w.to_string());
    }
    let mut nonzero_check = sweep::CheckSummary::new("nonzero_input");
    for (i, f) in polys.iter().enumerate() {
        nonzero_check.record(!f.is_zero(), || format!("polynomial {i} is zero"));
    }
    if !polys.is_empty() {
        report.push_check(nonzero_check);
    }
    let mut check = sweep::CheckSummary::new("multiplicativity");
    let nonzero: Vec<_> = polys
        .iter()
        .enumerate()
        .filter(|(_, f)| !f.is_zero())
        .collect();
    for (a, (i, f)) in nonzero.iter().enumerate() {
        for (j, g) in &nonzero[a..] {
            let ok = gauss::gauss_multiplicativity_check(f, g)?;
            check.record(ok, || format!("pair ({i}, {j})"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..random {
        let f = random_polynomial(&mut rng, 3, 4);
        let g = random_polynomial(&mut rng, 3, 4);
        let ok = gauss::gauss_multiplicativity_check(&f, &g)?;
        check.record(ok, || {
            format!(
                "random pair {k}: {} and {}",
                serde_json::to_string(&io::polynomial_to_document(&f)).unwrap_or_default(),
                serde_json::to_string(&io::polynomial_to_document(&g)).unwrap_or_default()
            )
        });
    }
    report.push_check(check);
    report.data = serde_json::json!({ "gauss_values": values });
    let mut out = Output::new(report, Format::Json);
    out.tsv_body = body;
    Ok(out)
}

fn run(cli: Cli) -> Result<(Output, Format), Failure> {
    let jobs = cli.jobs;
    let out = match cli.command {
        Command::Chain {
            preset,
            length,
            file,
            level,
        } => cmd_chain(preset, length, file, level)?,
        Command::Verify {
            l_max,
            m_max,
            n_max,
            bridge_m_max,
            only,
            family,
            chain,
        } => cmd_verify(l_max, m_max, n_max, bridge_m_max, only, family, chain, jobs)?,
        Command::Certify { n } => cmd_certify(n)?,
        Command::Gamma {
            file,
            n,
            bound,
            composite,
        } => cmd_gamma(file, n, bound, composite)?,
        Command::Gauss { file, random } => cmd_gauss(file, random, cli.seed)?,
    };
    let format = cli.format.unwrap_or(out.default_format);
    Ok((out, format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    let stamp = cli.timestamp;
    let (mut out, format) = match run(cli) {
        Ok(v) => v,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if stamp {
        out.report.timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
    }
    let text = match format {
        Format::Json => out
            .json_override
            .take()
            .unwrap_or_else(|| out.report.to_json()),
        Format::Tsv => out.report.to_tsv(&out.tsv_body),
    };
    let written = match &output {
        Some(path) => fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| e.to_string())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if let Some(s) = &out.summary {
        eprintln!("{s}");
    }
    if out.report.all_passed() {
        ExitCode::SUCCESS
    } else {
        eprintln!(
            "{} of {} checks failed",
            out.report.failed, out.report.total
        );
        ExitCode::from(1)
    }
}
