use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use thiserror::Error;

use liaison_core::cohomology::{self, CohomologyError, GradedDimensionTable};
use liaison_core::liaison::{self, link, phi_invariant, same_even_class};
use liaison_core::lr::{self, MinimalElement};
use liaison_core::parse::parse_field;
use liaison_core::resolutions::{self, BettiTable, ResolutionError};
use liaison_core::{
    parse_form, parse_form_list, parse_ideal_file, CompleteIntersection, GroebnerError, Ideal, IdealFile, LiaisonError,
    LrError, ParseError, Poly, Ring, StableClass, TwistFunction,
};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "liaison", version, about = "Linkage workbench for homogeneous ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the coefficient field, e.g. `GF(32003)` or `QQ`.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Twist window `lo:hi` for cohomology tables.
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<String>,
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Retry budget for random choices.
    #[arg(long, global = true, default_value_t = 20)]
    tries: usize,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Ideal file.
    file: PathBuf,
    /// Name of the ideal block (default: the first).
    #[arg(long)]
    ideal: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct PairInput {
    /// Ideal file.
    file: PathBuf,
    /// Second ideal file (default: the second block of the first file).
    other: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal free resolution and Betti table.
    Resolve(Input),
    /// E-type resolution cut at the codimension.
    Etype(Input),
    /// N-type resolution obtained through a link.
    Ntype(Input),
    /// Link by a complete intersection.
    Link {
        #[command(flatten)]
        input: Input,
        /// Comma-separated forms of the complete intersection.
        #[arg(long)]
        ci: String,
    },
    /// Basic double link on the surface `--s` with height form `--h`.
    Bdl {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        s: String,
        #[arg(long)]
        h: String,
    },
    /// Rao modules (middle cohomology of the ideal sheaf).
    Rao(Input),
    /// Cohomology table of the ideal sheaf over a window.
    Cohom(Input),
    /// Stable class of the E-module of a codimension 2 scheme.
    Phi(Input),
    /// Whether two schemes lie in the same even linkage class.
    Sameclass(PairInput),
    /// Sigma profile and q-function of the class core.
    Qfun(Input),
    /// A minimal element of the even linkage class.
    Minimalize(Input),
    /// Domination test `X <= Y`, with the height.
    Dominates(PairInput),
    /// Link a minimal element to a minimal element of the dual class.
    Duallink(Input),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Resolve(_) => "resolve",
            Command::Etype(_) => "etype",
            Command::Ntype(_) => "ntype",
            Command::Link { .. } => "link",
            Command::Bdl { .. } => "bdl",
            Command::Rao(_) => "rao",
            Command::Cohom(_) => "cohom",
            Command::Phi(_) => "phi",
            Command::Sameclass(_) => "sameclass",
            Command::Qfun(_) => "qfun",
            Command::Minimalize(_) => "minimalize",
            Command::Dominates(_) => "dominates",
            Command::Duallink(_) => "duallink",
        }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lr(#[from] LrError),
    #[error(transparent)]
    Liaison(#[from] LiaisonError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Usage(_) => 3,
            CliError::Lr(e) if e.is_budget() => 4,
            CliError::Liaison(e) if e.is_budget() => 4,
            _ => 2,
        }
    }
}

/// Text and JSON renderings of a command result.
struct Outcome {
    text: String,
    result: Value,
}

fn load(path: &Path, field: &Option<String>) -> Result<IdealFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let parse_err = |source| CliError::Parse { path: path.display().to_string(), source };
    let file = parse_ideal_file(&text).map_err(parse_err)?;
    match field {
        None => Ok(file),
        Some(f) => {
            let field = parse_field(f).ok_or_else(|| CliError::Usage(format!("unknown field `{f}`")))?;
            file.with_field(field).map_err(parse_err)
        }
    }
}

fn pick(file: &IdealFile, name: &Option<String>) -> Result<Ideal, CliError> {
    let found = match name {
        Some(n) => file.get(n),
        None => file.first(),
    };
    found.cloned().ok_or_else(|| CliError::Usage(format!("no ideal `{}` in the file", name.as_deref().unwrap_or("<first>"))))
}

fn pair(input: &PairInput, field: &Option<String>) -> Result<(Ring, Ideal, Ideal), CliError> {
    let f = load(&input.file, field)?;
    let x = pick(&f, &None)?;
    let y = match &input.other {
        Some(p) => pick(&load(p, field)?, &None)?,
        None => f
            .ideals
            .get(1)
            .map(|(_, i)| i.clone())
            .ok_or_else(|| CliError::Usage("expected a second ideal".into()))?,
    };
    if x.ring() != y.ring() {
        return Err(CliError::Usage("the two ideals live in different rings".into()));
    }
    Ok((f.ring, x, y))
}

fn window(common: &Common, i: &Ideal) -> Result<(i32, i32), CliError> {
    match &common.window {
        None => Ok(cohomology::default_window(i)?),
        Some(w) => {
            let bad = || CliError::Usage(format!("bad window `{w}`, expected lo:hi"));
            let (a, b) = w.split_once(':').ok_or_else(bad)?;
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        }
    }
}

/// Monic minimal generators, by degree and then by leading monomial.
fn canonical_gens(i: &Ideal) -> Vec<String> {
    let mut gs: Vec<Poly> = i.minimal_generators().iter().map(Poly::monic).collect();
    gs.sort_by(|a, b| {
        a.degree().cmp(&b.degree()).then_with(|| match (a.lead_mono(), b.lead_mono()) {
            (Some(x), Some(y)) => y.grevlex(&x),
            _ => std::cmp::Ordering::Equal,
        })
    });
    gs.iter().map(|g| g.to_string()).collect()
}

fn gens_json(i: &Ideal) -> Value {
    json!(canonical_gens(i))
}

fn gens_text(i: &Ideal) -> String {
    format!("({})", canonical_gens(i).join(", "))
}

fn betti_json(b: &BettiTable) -> Value {
    Value::Array(b.iter().map(|(p, t, c)| json!({"position": p, "twist": t, "rank": c})).collect())
}

fn twist_json(f: &TwistFunction) -> Value {
    let m: Map<String, Value> = f.iter().map(|(n, c)| (n.to_string(), json!(c))).collect();
    Value::Object(m)
}

fn table_json(t: &GradedDimensionTable) -> Value {
    let rows: Map<String, Value> = t
        .row_indices()
        .map(|i| {
            let r: Map<String, Value> = t.row(i).into_iter().map(|(d, v)| (d.to_string(), json!(v))).collect();
            (i.to_string(), Value::Object(r))
        })
        .collect();
    json!({"low": t.low, "high": t.high, "rows": rows})
}

fn class_json(c: &StableClass) -> Value {
    json!({
        "zero": c.is_zero(),
        "rank": c.rank(),
        "generator_twists": c.module.generators().sorted_twists(),
        "relation_twists": c.module.relations().sorted_twists(),
        "twist_offset": c.twist_offset,
        "split_twists": c.split_twists,
    })
}

fn class_text(c: &StableClass) -> String {
    if c.is_zero() {
        return "zero class (ACM)\n".into();
    }
    format!(
        "rank {}, generators {:?}, relations {:?}, offset {}, split {:?}\n",
        c.rank(),
        c.module.generators().sorted_twists(),
        c.module.relations().sorted_twists(),
        c.twist_offset,
        c.split_twists
    )
}

fn minimal_json(me: &MinimalElement, table: &GradedDimensionTable) -> Value {
    json!({
        "ideal": gens_json(&me.ideal),
        "h": me.h,
        "q": twist_json(&me.q),
        "l": twist_json(&me.profile.l),
        "a0": me.profile.a0,
        "a1": me.profile.a1,
        "n_type_betti": betti_json(&me.n_type.complex.betti_table()),
        "cohomology": table_json(table),
    })
}

fn run(cmd: &Command, common: &Common, rng: &mut ChaCha8Rng) -> Result<(Ring, Outcome), CliError> {
    let tries = common.tries;
    let single = |input: &Input| -> Result<(Ring, Ideal), CliError> {
        let f = load(&input.file, &common.field)?;
        let i = pick(&f, &input.ideal)?;
        Ok((f.ring, i))
    };
    let out = match cmd {
        Command::Resolve(input) => {
            let (ring, i) = single(input)?;
            let res = resolutions::minimal_free_resolution(&i, ring.nvars() + 1)?;
            let b = res.betti_table();
            (ring, Outcome { text: b.to_string(), result: json!({"betti": betti_json(&b)}) })
        }
        Command::Etype(input) => {
            let (ring, i) = single(input)?;
            let r = i.codimension()?;
            let e = resolutions::extract_e_type(&i, r)?;
            let b = e.complex.betti_table();
            let text = format!("r = {r}\n{b}");
            (ring, Outcome { text, result: json!({"r": r, "betti": betti_json(&b)}) })
        }
        Command::Ntype(input) => {
            let (ring, i) = single(input)?;
            let r = i.codimension()?;
            let n = liaison::n_type_via_link(&i, r, rng, tries)?;
            let b = n.complex.betti_table();
            let ng = n.n_module().generator_degrees();
            let text = format!("r = {r}\nN generators {ng}\n{b}");
            (ring, Outcome { text, result: json!({"r": r, "n_generators": twist_json(&ng), "betti": betti_json(&b)}) })
        }
        Command::Link { input, ci } => {
            let (ring, i) = single(input)?;
            let forms = parse_form_list(ring, ci)
                .map_err(|source| CliError::Parse { path: "--ci".into(), source })?;
            let c = CompleteIntersection::new(forms)?;
            let j = link(&i, &c)?;
            let text = if j.empty { "(1)\n".to_string() } else { format!("{}\n", gens_text(&j.ideal)) };
            let result = json!({"ci_degrees": c.degrees(), "empty": j.empty, "linked": gens_json(&j.ideal), "degree": j.ideal.degree()});
            (ring, Outcome { text, result })
        }
        Command::Bdl { input, s, h } => {
            let (ring, i) = single(input)?;
            let form = |src: &str, flag: &str| {
                parse_form(ring, src).map_err(|source| CliError::Parse { path: flag.into(), source })
            };
            let (y, step) = lr::basic_double_link(&i, &form(s, "--s")?, &form(h, "--h")?, rng, tries)?;
            let w: Vec<Vec<String>> =
                step.witnesses.iter().map(|c| c.forms().iter().map(|f| f.to_string()).collect()).collect();
            let text = format!("{}\ndegree {}, s = {}, h = {}\n", gens_text(&y), y.degree(), step.s, step.h);
            let result = json!({"ideal": gens_json(&y), "degree": y.degree(), "s": step.s, "h": step.h, "witnesses": w});
            (ring, Outcome { text, result })
        }
        Command::Rao(input) => {
            let (ring, i) = single(input)?;
            let rows = cohomology::rao_modules(&i)?;
            let mut text = String::new();
            let mut res = Map::new();
            for (k, row) in rows.iter().enumerate() {
                let idx = k + 1;
                match row {
                    Some(m) => {
                        let parts: Vec<String> = m.iter().map(|(d, v)| format!("{d}: {v}")).collect();
                        text.push_str(&format!("row i={idx}: {{{}}}\n", parts.join(", ")));
                        let r: Map<String, Value> = m.iter().map(|(d, v)| (d.to_string(), json!(v))).collect();
                        res.insert(idx.to_string(), Value::Object(r));
                    }
                    None => {
                        text.push_str(&format!("row i={idx}: not of finite length\n"));
                        res.insert(idx.to_string(), Value::Null);
                    }
                }
            }
            (ring, Outcome { text, result: json!({"rao": res}) })
        }
        Command::Cohom(input) => {
            let (ring, i) = single(input)?;
            let (lo, hi) = window(common, &i)?;
            let t = cohomology::ideal_sheaf_cohomology(&i, lo, hi)?;
            (ring, Outcome { text: t.to_string(), result: json!({"cohomology": table_json(&t)}) })
        }
        Command::Phi(input) => {
            let (ring, i) = single(input)?;
            let c = phi_invariant(&i)?;
            (ring, Outcome { text: class_text(&c), result: json!({"phi": class_json(&c)}) })
        }
        Command::Sameclass(p) => {
            let (ring, x, y) = pair(p, &common.field)?;
            let same = same_even_class(&x, &y, rng)?;
            let dual = phi_invariant(&x)?.dual_class().equivalent(&phi_invariant(&y)?, rng);
            let text = format!("same even class: {same}\nodd-linked class: {dual}\n");
            (ring, Outcome { text, result: json!({"same_even_class": same, "dual_class": dual}) })
        }
        Command::Qfun(input) => {
            let (ring, i) = single(input)?;
            let cd = lr::class_data(&i, rng, tries)?;
            let n0 = liaison::stable_normal_form(&cd.core).module;
            let p = lr::sigma_profile(&n0)?;
            let q = lr::q_function(&n0)?;
            let alpha: Map<String, Value> = p.alpha.iter().map(|(a, v)| (a.to_string(), json!(v))).collect();
            let beta: Map<String, Value> = p.beta.iter().map(|(a, v)| (a.to_string(), json!(v))).collect();
            let a0 = p.a0.map_or("inf".to_string(), |a| a.to_string());
            let text = format!("rank {}\nl = {}\nq = {}\na0 = {a0}, a1 = {}\n", p.rank, p.l, q, p.a1);
            let result = json!({
                "rank": p.rank, "l": twist_json(&p.l), "q": twist_json(&q),
                "alpha": alpha, "beta": beta, "a0": p.a0, "a1": p.a1,
            });
            (ring, Outcome { text, result })
        }
        Command::Minimalize(input) => {
            let (ring, i) = single(input)?;
            let me = lr::minimal_element(&i, rng, tries)?;
            let (lo, hi) = window(common, &me.ideal)?;
            let t = cohomology::ideal_sheaf_cohomology(&me.ideal, lo, hi)?;
            let text = format!("{}\nh = {}, q = {}\n{}", gens_text(&me.ideal), me.h, me.q, t);
            (ring, Outcome { text, result: minimal_json(&me, &t) })
        }
        Command::Dominates(p) => {
            let (ring, x, y) = pair(p, &common.field)?;
            let h = lr::dominates(&x, &y, rng, tries)?;
            let text = match h {
                Some(h) => format!("X <= Y with height {h}\n"),
                None => "X does not dominate Y\n".into(),
            };
            (ring, Outcome { text, result: json!({"dominates": h.is_some(), "height": h}) })
        }
        Command::Duallink(input) => {
            let (ring, i) = single(input)?;
            let me = lr::minimal_element(&i, rng, tries)?;
            let (y, ci) = lr::link_to_dual_minimal(&i, &me, rng, tries)?;
            let phi = phi_invariant(&y)?;
            let dual_ok = phi.equivalent(&phi_invariant(&i)?.dual_class(), rng);
            let text = format!("{}\nvia degrees {:?}\nphi is the dual class: {dual_ok}\n", gens_text(&y), ci.degrees());
            let result = json!({
                "ideal": gens_json(&y), "ci_degrees": ci.degrees(),
                "ci": ci.forms().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "phi": class_json(&phi), "phi_is_dual_class": dual_ok,
            });
            (ring, Outcome { text, result })
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut rng = ChaCha8Rng::seed_from_u64(cli.common.seed);
    let start = Instant::now();
    let name = cli.command.name();
    match run(&cli.command, &cli.common, &mut rng) {
        Ok((ring, out)) => {
            if cli.common.json {
                let report = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": name,
                    "args": std::env::args().skip(1).collect::<Vec<_>>(),
                    "seed": cli.common.seed,
                    "ring": {"field": ring.field().to_string(), "vars": ring.nvars()},
                    "result": out.result,
                    "elapsed_ms": start.elapsed().as_millis() as u64,
                });
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                println!("seed {}", cli.common.seed);
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.common.json {
                let report = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": name,
                    "args": std::env::args().skip(1).collect::<Vec<_>>(),
                    "seed": cli.common.seed,
                    "error": e.to_string(),
                    "exit_code": e.exit_code(),
                });
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
