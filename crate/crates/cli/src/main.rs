mod cache;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use adlv_core::adlv::{rational_json, Adlv, BElement, Dim};
use adlv_core::affine_weyl::{DiagramAut, ExtAffElt};
use adlv_core::conjugacy::{SigmaClassDescriptor, TwistedGroup};
use adlv_core::error::Error;
use adlv_core::hecke::{ClassPolynomials, Strategy};
use adlv_core::linalg::{format_rational, QVec};
use adlv_core::par::Execution;
use adlv_core::root_data::RootDatum;
use adlv_core::sweep::{self, Check, SweepOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde_json::{json, Value};

use cache::{CacheFile, Header};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "adlv", version, about = "Affine Deligne-Lusztig varieties via class polynomials")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Cartan type, e.g. A2, C2, G2, A1xA1.
    #[arg(long = "type", global = true, default_value = "A1")]
    type_label: String,
    /// Diagram automorphism as a 1-based permutation, e.g. "2,1".
    #[arg(long, global = true, default_value = "")]
    delta: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Class polynomial cache (JSON lines).
    #[arg(long, global = true, env = "ADLV_CACHE")]
    cache: Option<PathBuf>,
    /// Node budget for conjugacy searches.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Run sweeps on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Tsv,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum StrategyArg {
    First,
    Last,
    Random,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the straight conjugacy classes with a member of bounded length.
    Classify {
        #[arg(long, default_value_t = 2)]
        max_length: usize,
    },
    /// Dimension of X_w(b).
    Dim {
        #[arg(long)]
        w: String,
        /// "unit", an element literal, or "nu=<q,..>;kappa=<k,..>".
        #[arg(long)]
        b: String,
        /// Defect of b, required for the virtual dimension of non-basic b.
        #[arg(long)]
        defect: Option<i64>,
    },
    /// Run a verification sweep; exits 4 on any violation.
    Sweep {
        #[arg(long)]
        check: String,
        #[arg(long, default_value_t = 4)]
        max_length: usize,
        /// Bound on <mu, 2rho> for sweeps over dominant coweights.
        #[arg(long, default_value_t = 4)]
        max_rho2: i64,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// "basic-all" or one b; rows for other b are dropped.
        #[arg(long, default_value = "basic-all")]
        b: String,
    },
    /// Dimension of X_mu(b) in the affine Grassmannian.
    Grassmannian {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        b: String,
    },
    /// Mazur's inequality for b (given by a representative) in the Levi J.
    Mazur {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        b: String,
        /// 1-based simple indices; empty for the torus.
        #[arg(long, default_value = "")]
        j: String,
    },
    /// Defect of a basic b.
    Defect {
        #[arg(long)]
        b: String,
    },
    /// Virtual dimension d_w(b).
    Virtual {
        #[arg(long)]
        w: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        defect: Option<i64>,
    },
    /// Compare dim X_w(b) with d_w(b) for basic b.
    Ghkr {
        #[arg(long)]
        w: String,
        #[arg(long)]
        b: String,
    },
    /// Point count of X_w(x) for superbasic x in split type A.
    Pointcount {
        #[arg(long)]
        w: String,
        #[arg(long)]
        x: String,
    },
    /// Reduce an element to a minimal length member of its class.
    Reduce {
        #[arg(long)]
        w: String,
        #[arg(long)]
        emit_trace: bool,
    },
    /// Class polynomials of one element.
    Classpoly {
        #[arg(long)]
        w: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::First)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Everything a command needs, resolved from the command line.
struct JobConfig {
    global: Global,
    adlv: Adlv,
    cache: Option<CacheFile>,
}

impl JobConfig {
    fn load(global: Global) -> Result<Self, Failure> {
        let datum = RootDatum::build(&global.type_label)?;
        let delta = DiagramAut::parse(&datum, &global.delta)?;
        let g = adlv_core::affine_weyl::AffineWeylGroup::new(datum);
        let tg = match global.budget {
            Some(b) => TwistedGroup::with_budget(g, delta, b),
            None => TwistedGroup::new(g, delta),
        };
        let cp = Arc::new(ClassPolynomials::new(tg.clone()));
        let mut cache = global
            .cache
            .as_ref()
            .map(|p| CacheFile::new(p, Header::new(tg.datum().label(), &tg.delta().spec())));
        if let Some(c) = cache.as_mut() {
            let stats = c.load(&cp)?;
            if stats.ignored {
                eprintln!("adlv: ignoring cache {}: header does not match this job", c.path().display());
            }
            if stats.truncated_tail {
                eprintln!("adlv: cache {}: skipped a truncated final record", c.path().display());
            }
        }
        Ok(Self {
            global,
            adlv: Adlv::with_class_polynomials(cp),
            cache,
        })
    }

    fn tg(&self) -> &Arc<TwistedGroup> {
        self.adlv.twisted_group()
    }

    fn element(&self, s: &str) -> Result<ExtAffElt, Failure> {
        Ok(self.tg().group().parse_literal(s, false)?)
    }

    fn exec(&self) -> Execution {
        if self.global.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }

    /// `unit`, an element literal, or an explicit descriptor.
    fn b(&self, s: &str) -> Result<BElement, Failure> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("unit") || s == "1" {
            return Ok(self.adlv.b_from_rep(&self.tg().group().identity())?);
        }
        if let Some(rest) = s.strip_prefix("nu=") {
            let (nu, kappa) = rest
                .split_once(";kappa=")
                .ok_or_else(|| Failure::usage(format!("descriptor {s:?} needs nu=..;kappa=..")))?;
            let nu = parse_rationals(nu)?;
            let den = nu.iter().fold(1i64, |d, r| num_integer::lcm(d, *r.denom()));
            let num = nu.iter().map(|r| r.numer() * (den / r.denom())).collect();
            let kappa = parse_ints(kappa)?;
            let d = SigmaClassDescriptor {
                newton: QVec::new(num, den),
                kottwitz: kappa,
            };
            return Ok(self.adlv.b_from_descriptor(s, d)?);
        }
        let x = self.element(s)?;
        Ok(self.adlv.b_from_rep(&x)?)
    }

    fn coweight(&self, s: &str) -> Result<Vec<i64>, Failure> {
        let v = parse_ints(s)?;
        let r = self.tg().datum().rank();
        if v.len() != r {
            return Err(Failure::usage(format!("coweight {s:?} needs {r} entries")));
        }
        Ok(v)
    }

    fn finish(&mut self) -> Result<(), Failure> {
        if let Some(c) = self.cache.as_mut() {
            c.append_new(self.adlv.class_polynomials())?;
        }
        Ok(())
    }
}

fn parse_list(s: &str) -> impl Iterator<Item = &str> {
    s.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split([',', ' '])
        .map(str::trim)
        .filter(|t| !t.is_empty())
}

fn parse_ints(s: &str) -> Result<Vec<i64>, Failure> {
    parse_list(s)
        .map(|t| t.parse().map_err(|_| Failure::usage(format!("bad integer {t:?} in {s:?}"))))
        .collect()
}

fn parse_rationals(s: &str) -> Result<Vec<Rational64>, Failure> {
    parse_list(s)
        .map(|t| t.parse().map_err(|_| Failure::usage(format!("bad rational {t:?} in {s:?}"))))
        .collect()
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Usage(String),
    Violations(usize),
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Lib(Error::Config(_) | Error::Parse(_) | Error::Argument(_)) => 2,
            Failure::Lib(Error::Integrity(_)) => 3,
            Failure::Violations(_) => 4,
            Failure::Lib(Error::Resource { .. }) => 5,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Violations(n) => write!(f, "{n} property violations"),
        }
    }
}

/// Prints a JSON document with the schema version in front.
fn emit_json(command: &str, cfg: &JobConfig, body: Value) {
    let mut doc = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "type": cfg.tg().datum().label(),
        "delta": cfg.tg().delta().spec(),
    });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    println!("{}", serde_json::to_string_pretty(&doc).expect("json serializes"));
}

fn dim_text(d: &Dim) -> String {
    d.to_string()
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut cfg = JobConfig::load(cli.global)?;
    let fmt = cfg.global.format;
    match cli.command {
        Command::Classify { max_length } => {
            let tg = cfg.tg().clone();
            let classes = tg.enumerate_straight_classes_with(max_length, cfg.exec())?;
            let mut rows = Vec::new();
            for c in &classes {
                let superstraight = tg.is_superstraight_class(&c.rep)?;
                rows.push((c, superstraight));
            }
            match fmt {
                Format::Json => emit_json(
                    "classify",
                    &cfg,
                    json!({"classes": rows.iter().map(|(c, s)| json!({
                        "rep": c.key,
                        "nu": c.descriptor.newton.to_string(),
                        "kappa": c.descriptor.kottwitz,
                        "length": c.length,
                        "straight": c.straight,
                        "superstraight": s,
                    })).collect::<Vec<_>>()}),
                ),
                _ => {
                    println!("rep\tnu\tkappa\tlength\tstraight\tsuperstraight");
                    for (c, s) in &rows {
                        println!(
                            "{}\t{}\t{:?}\t{}\t{}\t{}",
                            c.key, c.descriptor.newton, c.descriptor.kottwitz, c.length, c.straight, s
                        );
                    }
                }
            }
        }
        Command::Dim { w, b, defect } => {
            let x = cfg.element(&w)?;
            let b = cfg.b(&b)?;
            let report = cfg.adlv.full_report(&x, &b, defect)?;
            let kappa_match = cfg.tg().kottwitz_class(&x) == b.descriptor.kottwitz;
            match fmt {
                Format::Json => {
                    let mut body = report.to_json();
                    body["kappa_match"] = json!(kappa_match);
                    emit_json("dim", &cfg, body)
                }
                Format::Tsv => {
                    println!("w\tb\tdim\tvirtual_dim");
                    let vd = report.virtual_dim.map_or("-".to_string(), format_rational);
                    println!("{}\t{}\t{}\t{vd}", report.element, b.label, dim_text(&report.dim));
                }
                Format::Text => {
                    println!("dim X_{}({}) = {}", report.element, b.label, dim_text(&report.dim));
                    for c in &report.classes {
                        println!(
                            "  class {} len={} deg={} candidate={}",
                            c.rep,
                            c.len,
                            c.deg,
                            format_rational(c.candidate)
                        );
                    }
                    if let Some(vd) = report.virtual_dim {
                        println!("virtual dimension {}", format_rational(vd));
                    }
                    if !kappa_match {
                        println!("note: Kottwitz classes differ, so the variety is empty");
                    }
                }
            }
        }
        Command::Sweep {
            check,
            max_length,
            max_rho2,
            trials,
            seed,
            b,
        } => {
            let check = Check::parse(&check).ok_or_else(|| Failure::usage(format!("unknown check {check:?}")))?;
            let opts = SweepOptions {
                max_length,
                max_rho2,
                trials,
                seed,
                exec: cfg.exec(),
            };
            let mut report = sweep::run(&cfg.adlv, check, &opts)?;
            if b != "basic-all" {
                let label = cfg.b(&b)?.label;
                let label = cfg.element(&label).map(|x| cfg.tg().literal(&x)).unwrap_or(label);
                report.rows.retain(|r| r.b == label || r.b == "-");
                report.violations = report.rows.iter().filter(|r| !r.ok).count();
            }
            match fmt {
                Format::Json => emit_json("sweep", &cfg, serde_json::to_value(&report).expect("json serializes")),
                _ => {
                    print!("{}", report.to_tsv());
                    println!("# check={} rows={} violations={} skipped={}", report.check, report.rows.len(), report.violations, report.skipped);
                }
            }
            cfg.finish()?;
            if report.violations > 0 {
                return Err(Failure::Violations(report.violations));
            }
            return Ok(());
        }
        Command::Grassmannian { mu, b } => {
            let mu = cfg.coweight(&mu)?;
            let b = cfg.b(&b)?;
            let check = cfg.adlv.grassmannian_check(&mu, &b)?;
            let closed = if b.basic {
                Some(cfg.adlv.grassmannian_closed_form(&mu, &b, cfg.adlv.defect_basic(&b)?))
            } else {
                None
            };
            match fmt {
                Format::Json => emit_json(
                    "grassmannian",
                    &cfg,
                    json!({
                        "input": {"mu": mu, "b": b},
                        "dim": check.dim,
                        "coset_max": check.coset_max,
                        "closed_form": closed.map(rational_json),
                        "violations": check.violations,
                    }),
                ),
                _ => {
                    println!("dim X_{mu:?}({}) = {}", b.label, check.dim);
                    println!("max over W t^mu W = {}", check.coset_max);
                    if let Some(c) = closed {
                        println!("closed form {}", format_rational(c));
                    }
                    for v in &check.violations {
                        println!("violation {v}");
                    }
                }
            }
        }
        Command::Mazur { mu, b, j } => {
            let mu = cfg.coweight(&mu)?;
            let rep = cfg.element(&b)?;
            let j: Vec<usize> = parse_ints(&j)?
                .into_iter()
                .map(|k| usize::try_from(k - 1).map_err(|_| Failure::usage(format!("bad index {k} in J"))))
                .collect::<Result<_, _>>()?;
            let holds = cfg.adlv.mazur_check(&mu, &rep, &j)?;
            let bb = cfg.adlv.b_from_rep(&rep)?;
            let nonempty = cfg.adlv.dim_grassmannian(&mu, &bb)?.nonempty();
            match fmt {
                Format::Json => emit_json(
                    "mazur",
                    &cfg,
                    json!({"input": {"mu": mu, "b": b, "j": j.iter().map(|k| k + 1).collect::<Vec<_>>()},
                           "mazur": holds, "nonempty": nonempty}),
                ),
                _ => println!("mazur={holds} nonempty={nonempty}"),
            }
        }
        Command::Defect { b } => {
            let b = cfg.b(&b)?;
            let def = cfg.adlv.defect_basic(&b)?;
            match fmt {
                Format::Json => emit_json("defect", &cfg, json!({"b": b, "defect": def})),
                _ => println!("def({}) = {def}", b.label),
            }
        }
        Command::Virtual { w, b, defect } => {
            let x = cfg.element(&w)?;
            let b = cfg.b(&b)?;
            let vd = cfg.adlv.virtual_dimension(&x, &b, defect)?;
            match fmt {
                Format::Json => emit_json(
                    "virtual",
                    &cfg,
                    json!({"input": {"w": cfg.tg().literal(&x), "b": b}, "virtual_dim": rational_json(vd)}),
                ),
                _ => println!("d_{}({}) = {}", cfg.tg().literal(&x), b.label, format_rational(vd)),
            }
        }
        Command::Ghkr { w, b } => {
            let x = cfg.element(&w)?;
            let b = cfg.b(&b)?;
            let r = cfg.adlv.ghkr_check(&x, &b)?;
            let hyp = cfg.adlv.ghkr_hypotheses(&x);
            match fmt {
                Format::Json => emit_json(
                    "ghkr",
                    &cfg,
                    json!({"input": {"w": cfg.tg().literal(&x), "b": b}, "hypotheses": hyp, "report": r}),
                ),
                _ => {
                    println!("dim = {}  virtual = {}", r.dim, format_rational(r.virtual_dim));
                    println!("hypotheses={hyp} lower={:?} upper={:?} equal={:?}", r.lower, r.upper, r.equal);
                }
            }
            cfg.finish()?;
            if r.violated() {
                return Err(Failure::Violations(1));
            }
            return Ok(());
        }
        Command::Pointcount { w, x } => {
            let wx = cfg.element(&w)?;
            let xx = cfg.element(&x)?;
            let n = cfg.adlv.point_count_superbasic_a(&wx, &xx)?;
            match fmt {
                Format::Json => emit_json(
                    "pointcount",
                    &cfg,
                    json!({"input": {"w": cfg.tg().literal(&wx), "x": cfg.tg().literal(&xx)},
                           "q_coeffs": n.coeffs(), "count": n.to_string()}),
                ),
                _ => println!("#X = {n}"),
            }
        }
        Command::Reduce { w, emit_trace } => {
            let x = cfg.element(&w)?;
            let tg = cfg.tg().clone();
            let (m, trace) = tg.reduce_to_minimal(&x)?;
            tg.replay(&trace)?;
            match fmt {
                Format::Json => emit_json(
                    "reduce",
                    &cfg,
                    json!({
                        "input": tg.literal(&x),
                        "terminal": tg.literal(&m),
                        "length": tg.length(&m),
                        "trace": emit_trace.then(|| trace.render(tg.group()).lines().map(str::to_string).collect::<Vec<_>>()),
                    }),
                ),
                _ => {
                    if emit_trace {
                        print!("{}", trace.render(tg.group()));
                    }
                    println!("{} -> {} (length {})", tg.literal(&x), tg.literal(&m), tg.length(&m));
                }
            }
        }
        Command::Classpoly { w, strategy, seed } => {
            let x = cfg.element(&w)?;
            let strategy = match strategy {
                StrategyArg::First => Strategy::First,
                StrategyArg::Last => Strategy::Last,
                StrategyArg::Random => Strategy::Random(seed),
            };
            let t = cfg.adlv.class_polynomials().table_with(&x, strategy)?;
            match fmt {
                Format::Json => emit_json("classpoly", &cfg, json!({"table": *t})),
                Format::Tsv | Format::Text => {
                    println!("class\tpolynomial");
                    print!("{t}");
                }
            }
        }
    }
    cfg.finish()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("adlv: {e}");
            ExitCode::from(e.code())
        }
    }
}
