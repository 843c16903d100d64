use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use multidescent::descent::{brute_force_oracle, classify, multicat_descent_quotient, OracleReport};
use multidescent::gallery::{fixture, fixture_library, FixtureItem};
use multidescent::json::{self, Body, DescentReport, Document};
use multidescent::monad::{MonadSelector, MonadSpec, Monoid};
use multidescent::report::{Check, Report};
use multidescent::sketch::{check_model, multicat_sketch};
use multidescent::{Error, TFunctor};

#[derive(Parser, Debug)]
#[command(name = "multidescent", version, about = "Descent checks for internal T-multicategories on finite sets")]
struct Cli {
    /// Override the monad of every input: identity, freemonoid or monoid:<file>.
    #[arg(long, global = true)]
    monad: Option<String>,

    /// Largest carrier enumerated by the oracle.
    #[arg(long, global = true, default_value_t = 2)]
    max_size: usize,

    /// Longest list inspected when a monad has infinite carriers.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    list_length: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for the oracle; 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the laws of multicategories, functors, sketch models and pseudo-equalizer objects.
    Validate {
        /// Files or fixture names.
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Surjectivity profile and the two sufficient criteria for effective descent.
    Classify { functor: String },
    /// Classification plus a bounded search for descent data that fail to descend.
    Oracle { functor: String },
    /// Rebuild the multicategory and functor that a descent datum descends to.
    Quotient { functor: String, datum: String },
    /// The built-in fixture library.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Subcommand, Debug)]
enum FixturesAction {
    List,
    /// Print one fixture, or all of them as an array.
    Dump {
        name: Option<String>,
    },
}

enum Failure {
    /// Unreadable or malformed input; exit 2.
    Input(String),
    /// Well-formed input that fails a check; exit 1.
    Semantic(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Semantic(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

type Outcome = Result<(String, bool), Failure>;

fn input(e: Error) -> Failure {
    Failure::Input(e.to_string())
}

fn monad_override(spec: &str) -> Result<MonadSelector, Failure> {
    match spec {
        "identity" => Ok(MonadSelector::Identity),
        "freemonoid" => Ok(MonadSelector::FreeMonoid),
        _ => {
            let path = spec.strip_prefix("monoid:").ok_or_else(|| {
                Failure::Input(format!("unknown monad {spec:?}; use identity, freemonoid or monoid:<file>"))
            })?;
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
            let m: Monoid = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
            m.validate().map_err(|e| Failure::Input(format!("{path}: {e}")))?;
            Ok(MonadSelector::Monoid(m))
        }
    }
}

struct Ctx {
    monad: Option<MonadSelector>,
    max_size: usize,
    list_length: usize,
    format: Format,
    jobs: usize,
}

impl Ctx {
    fn load(&self, source: &str) -> Result<Document, Failure> {
        let mut doc = if Path::new(source).exists() {
            let text = std::fs::read_to_string(source).map_err(|e| Failure::Input(format!("{source}: {e}")))?;
            json::parse(&text).map_err(|e| Failure::Input(format!("{source}: {e}")))?
        } else if let Some(f) = fixture(source) {
            let doc = match &f.item {
                FixtureItem::Multicategory(m) => json::multicategory_document(m),
                FixtureItem::Functor(p) => json::functor_document(p),
            };
            doc.named(&f.name, &f.description)
        } else {
            return Err(Failure::Input(format!("{source}: no such file or fixture")));
        };
        if let Some(sel) = &self.monad {
            match &mut doc.body {
                Body::Multicategory(m) => m.monad = sel.clone(),
                Body::Functor(f) => {
                    f.src.monad = sel.clone();
                    f.tgt.monad = sel.clone();
                }
                Body::Datum(d) => d.v.monad = sel.clone(),
                Body::Pseudo(p) => p.monad = MonadSpec::from_selector(sel.clone()).map_err(input)?,
                Body::Model(_) => {}
            }
        }
        Ok(doc)
    }

    fn functor(&self, source: &str) -> Result<TFunctor, Failure> {
        let f = self.load(source)?.functor().map_err(|e| Failure::Input(format!("{source}: {e}")))?;
        let r = f.validate();
        if !r.passed() {
            return Err(Failure::Semantic(format!("{source}: invalid functor\n{r}")));
        }
        Ok(f)
    }
}

#[derive(serde::Serialize)]
struct Validation {
    input: String,
    kind: &'static str,
    passed: bool,
    checks: Vec<Check>,
}

fn validate_one(ctx: &Ctx, source: &str) -> Result<Validation, Failure> {
    let doc = ctx.load(source)?;
    let at = |e: Error| Failure::Input(format!("{source}: {e}"));
    let report = match &doc.body {
        Body::Multicategory(_) => doc.multicategory().map_err(at)?.validate(),
        Body::Functor(_) => {
            let f = doc.functor().map_err(at)?;
            let mut r = Report::new("");
            for (what, mut sub) in
                [("source", f.src.validate()), ("target", f.tgt.validate()), ("functor", f.validate())]
            {
                sub.subject = what.into();
                r.extend(sub);
            }
            r
        }
        Body::Model(m) => check_model(&multicat_sketch(), m),
        Body::Pseudo(p) => {
            let mut r = p.check(&multicat_sketch());
            if r.passed() {
                r.extend(p.coherence().report);
            }
            r
        }
        Body::Datum(_) => return Err(Failure::Input(format!("{source}: a datum is checked with `quotient`"))),
    };
    Ok(Validation { input: source.into(), kind: doc.kind(), passed: report.passed(), checks: report.checks })
}

fn cmd_validate(ctx: &Ctx, inputs: &[String]) -> Outcome {
    let results: Vec<Validation> = inputs.iter().map(|s| validate_one(ctx, s)).collect::<Result<_, _>>()?;
    let ok = results.iter().all(|v| v.passed);
    let out = match ctx.format {
        Format::Json => json::to_string(&results),
        Format::Text => {
            let mut s = String::new();
            for v in &results {
                let r = Report { subject: format!("{} ({})", v.input, v.kind), checks: v.checks.clone() };
                if v.passed {
                    writeln!(s, "{}: ok ({} checks)", r.subject, r.checks.len()).unwrap();
                } else {
                    let failed = Report { subject: r.subject.clone(), checks: r.failures().cloned().collect() };
                    write!(s, "{failed}").unwrap();
                }
            }
            s
        }
    };
    Ok((out, ok))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn descent_text(r: &DescentReport, oracle: Option<&OracleReport>) -> String {
    let mut s = String::new();
    let p = &r.profile;
    writeln!(s, "functor: {}", r.functor).unwrap();
    writeln!(s, "surjective: p0 {} p1 {} p2 {} p3 {}", yes(p.p0), yes(p.p1), yes(p.p2), yes(p.p3)).unwrap();
    writeln!(s, "T(p1) surjective: {}", yes(r.t_p1)).unwrap();
    writeln!(s, "T(p2) surjective: {}", yes(r.t_p2)).unwrap();
    writeln!(s, "T preserves kernel pairs: {}", yes(r.kernel_pairs)).unwrap();
    writeln!(s, "epimorphism: {}", yes(r.epi)).unwrap();
    writeln!(s, "regular epimorphism: {}", yes(r.regular_epi)).unwrap();
    writeln!(s, "T-level criterion: {}", r.thm45).unwrap();
    writeln!(s, "levelwise criterion: {}", r.thm53).unwrap();
    if let Some(o) = oracle {
        let status = serde_json::to_value(o.status).unwrap();
        writeln!(
            s,
            "oracle: {} (bound {}, {} data, {} slice objects)",
            status.as_str().unwrap_or_default(),
            o.bound,
            o.data_checked,
            o.slices_checked
        )
        .unwrap();
        for f in &o.failures {
            writeln!(s, "  {}: {}", f.kind, f.detail).unwrap();
            if let Some(d) = &f.datum {
                for line in json::to_string(&json::datum_document(d)).lines() {
                    writeln!(s, "    {line}").unwrap();
                }
            }
        }
    }
    s
}

fn functor_label(ctx: &Ctx, source: &str) -> String {
    ctx.load(source).ok().and_then(|d| d.name).unwrap_or_else(|| source.to_string())
}

fn cmd_classify(ctx: &Ctx, source: &str, run_oracle: bool) -> Outcome {
    let f = ctx.functor(source)?;
    let c = classify(&f, ctx.list_length).map_err(|e| Failure::Semantic(e.to_string()))?;
    let o = if run_oracle {
        Some(brute_force_oracle(&f, ctx.max_size, ctx.jobs).map_err(|e| Failure::Semantic(e.to_string()))?)
    } else {
        None
    };
    let r = DescentReport::new(functor_label(ctx, source), &c, o.as_ref());
    let out = match ctx.format {
        Format::Json => json::to_string(&r),
        Format::Text => descent_text(&r, o.as_ref()),
    };
    Ok((out, true))
}

fn cmd_quotient(ctx: &Ctx, functor: &str, datum: &str) -> Outcome {
    let p = ctx.functor(functor)?;
    let d = ctx.load(datum)?.datum(&p).map_err(|e| Failure::Input(format!("{datum}: {e}")))?;
    let rec = multicat_descent_quotient(&p, &d).map_err(|e| Failure::Semantic(format!("{datum}: {e}")))?;
    if !rec.checks.passed() {
        let failed = Report { subject: "reconstruction".into(), checks: rec.checks.failures().cloned().collect() };
        return Err(Failure::Semantic(failed.to_string()));
    }
    Ok((json::to_string(&json::quotient_json(&rec.w, &rec.f, &rec.h)), true))
}

#[derive(serde::Serialize)]
struct Listing<'a> {
    name: &'a str,
    kind: &'static str,
    description: &'a str,
}

fn cmd_fixtures(ctx: &Ctx, action: &FixturesAction) -> Outcome {
    let lib = fixture_library();
    let kind = |i: &FixtureItem| match i {
        FixtureItem::Multicategory(_) => "multicategory",
        FixtureItem::Functor(_) => "functor",
    };
    match action {
        FixturesAction::List => {
            let out = match ctx.format {
                Format::Json => json::to_string(
                    &lib.iter()
                        .map(|f| Listing { name: &f.name, kind: kind(&f.item), description: &f.description })
                        .collect::<Vec<_>>(),
                ),
                Format::Text => {
                    let width = lib.iter().map(|f| f.name.len()).max().unwrap_or(0);
                    lib.iter()
                        .map(|f| format!("{:width$}  {:13}  {}\n", f.name, kind(&f.item), f.description))
                        .collect()
                }
            };
            Ok((out, true))
        }
        FixturesAction::Dump { name: Some(name) } => {
            let doc = fixture(name).ok_or_else(|| Failure::Input(format!("no fixture named {name}")))?;
            Ok((json::to_string(&ctx.load(&doc.name)?), true))
        }
        FixturesAction::Dump { name: None } => {
            let docs: Vec<Document> = lib.iter().map(|f| ctx.load(&f.name)).collect::<Result<_, _>>()?;
            Ok((json::to_string(&docs), true))
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let ctx = Ctx {
        monad: cli.monad.as_deref().map(monad_override).transpose()?,
        max_size: cli.max_size,
        list_length: cli.list_length as usize,
        format: cli.format,
        jobs: cli.jobs,
    };
    match &cli.command {
        Command::Validate { inputs } => cmd_validate(&ctx, inputs),
        Command::Classify { functor } => cmd_classify(&ctx, functor, false),
        Command::Oracle { functor } => cmd_classify(&ctx, functor, true),
        Command::Quotient { functor, datum } => cmd_quotient(&ctx, functor, datum),
        Command::Fixtures { action } => cmd_fixtures(&ctx, action),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            let (Failure::Input(msg) | Failure::Semantic(msg)) = &f;
            eprintln!("error: {}", msg.trim_end());
            ExitCode::from(f.code())
        }
    }
}
