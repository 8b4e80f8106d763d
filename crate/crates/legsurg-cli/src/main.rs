//! `legsurg` — command-line front end for the legsurg library.
//!
//! Every command reads JSON inputs, validates them, computes and prints a
//! deterministic report: pretty JSON for single results, one JSON record per
//! line for parameter sweeps, or a plain-text table with `--format table`.
//!
//! Exit codes: 0 success / certified, 2 surviving candidates (or an
//! inconclusive comparison), 3 out of method scope, 64 usage error, 65 schema
//! error, 70 computation error.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use legsurg::front::LegendrianFront;
use legsurg::invariants::{evaluate, EulerOrbit, Evaluation};
use legsurg::kirby::{
    annulus_twist_family, rgb_resolve_diagram, star_n_move, AnnulusPresentation, MoveScript, RgbData, RgbSide,
};
use legsurg::poly::{alexander, homfly, LaurentPoly, PdCode};
use legsurg::rational::{parse_rational, Int, Rational};
use legsurg::slope::{check_characterizing, overtwisted_equality, Equality, KnotClass, PipelineOptions, DEFAULT_GRID};
use legsurg::surgery::{NormalStyle, SurgeryDiagram};
use legsurg::Error;
use serde_json::{json, Value};

const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;
const EX_SOFTWARE: u8 = 70;

#[derive(Parser, Debug)]
#[command(name = "legsurg", version, about = "Invariants of contact surgery diagrams on Legendrian links")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// First homology, Euler classes and d3 of a diagram (classical
    /// invariants for a front).
    Invariants(InputArgs),
    /// First homology of the surgered manifold.
    Homology(InputArgs),
    /// Euler classes of all contact structures of a diagram.
    Euler(InputArgs),
    /// d3-invariants of all contact structures of a diagram.
    D3(InputArgs),
    /// Normal forms with ±1/n (compact) or ±1 (expanded) coefficients.
    Normalize {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Style::Compact)]
        style: Style,
        #[arg(long, default_value = "all")]
        branch: Branch,
    },
    /// Replays a move script and reports the invariants after every step.
    Replay { diagram: PathBuf, script: PathBuf },
    /// Diagram families: annulus twists, RGB links, (*m) moves.
    Family {
        #[command(subcommand)]
        kind: Family,
    },
    /// HOMFLY polynomial of a PD code or a front.
    Homfly { file: PathBuf },
    /// Alexander polynomial of a PD code or a front.
    Alexander { file: PathBuf },
    /// Runs the characterizing-slope obstruction pipeline for one knot.
    CheckSlope {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, allow_hyphen_values = true)]
        tb: i64,
        #[arg(long, allow_hyphen_values = true)]
        rot: i64,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Runs check-slope for every realizable (tb, |rot|) in a tb range.
    Sweep {
        #[command(flatten)]
        class: ClassArgs,
        /// Range of tb values, `A..B` (exclusive) or `A..=B`.
        #[arg(long, allow_hyphen_values = true)]
        tb: Span,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Compares two positive contact surgeries on knots stabilized with both signs.
    Compare {
        #[arg(long, allow_hyphen_values = true)]
        tb: i64,
        #[arg(long, allow_hyphen_values = true)]
        rot: i64,
        #[arg(long, allow_hyphen_values = true)]
        tb2: i64,
        #[arg(long, allow_hyphen_values = true)]
        rot2: i64,
        #[arg(long, allow_hyphen_values = true)]
        slope: String,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Diagram, front, or annulus presentation (JSON).
    file: PathBuf,
    /// Twist parameters for an annulus presentation, `A..B` or `A..=B`.
    #[arg(long)]
    n: Option<Span>,
    /// Restrict the per-branch lists to one branch.
    #[arg(long, default_value = "all")]
    branch: Branch,
}

#[derive(Args, Debug)]
struct ClassArgs {
    /// Built-in knot class (unknot, rh_trefoil, lh_trefoil, fig8).
    #[arg(long, required_unless_present = "class_file", conflicts_with = "class_file")]
    class: Option<String>,
    /// Knot class table in JSON.
    #[arg(long)]
    class_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    /// Contact surgery slope, `p/q` or an integer.
    #[arg(long, allow_hyphen_values = true)]
    slope: String,
    /// Bound on |rot′| where no exact reduction is available.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: i64,
    /// Skip the smooth, Stein-filling and torus-knot gates.
    #[arg(long)]
    no_gates: bool,
}

#[derive(Subcommand, Debug)]
enum Family {
    /// `L(−1) ∪ K1(1/n) ∪ K2(−1/n)` for an annulus presentation.
    Annulus {
        file: PathBuf,
        #[arg(long)]
        n: Span,
    },
    /// Both resolutions of an RGB link (the synthetic family unless a file is given).
    Rgb {
        file: Option<PathBuf>,
        #[arg(long, default_value = "0..=8")]
        n: Span,
    },
    /// The contact (*m) move on the knot of an annulus presentation.
    StarN {
        file: PathBuf,
        #[arg(long)]
        n: Span,
        /// Stabilization sign used by the Rolfsen twist.
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sign: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Style {
    Compact,
    Expanded,
}

/// `--branch all|k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    All,
    Index(usize),
}

impl std::str::FromStr for Branch {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(Branch::All);
        }
        s.parse().map(Branch::Index).map_err(|_| format!("expected `all` or a branch index, found {s:?}"))
    }
}

/// An integer range `A..B` (exclusive), `A..=B` (inclusive) or a single `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Span {
    start: i64,
    end: i64,
}

impl Span {
    fn values(self) -> impl Iterator<Item = i64> {
        self.start..=self.end
    }

    fn naturals(self) -> Result<impl Iterator<Item = u64>, CliError> {
        if self.start < 0 {
            return Err(CliError::Usage(format!("range must be non-negative, found start {}", self.start)));
        }
        Ok((self.start..=self.end).map(|v| v as u64))
    }
}

impl std::str::FromStr for Span {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("invalid range bound {t:?}"));
        let (start, end) = if let Some((a, b)) = s.split_once("..=") {
            (num(a)?, num(b)?)
        } else if let Some((a, b)) = s.split_once("..") {
            (num(a)?, num(b)? - 1)
        } else {
            let v = num(s)?;
            (v, v)
        };
        if end < start {
            return Err(format!("empty range {s:?}"));
        }
        Ok(Span { start, end })
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EX_USAGE,
            CliError::Lib(e) if e.is_schema() => EX_DATAERR,
            CliError::Lib(_) => EX_SOFTWARE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Lib(Error::from(e))
    }
}

/// What a command prints: one document, or a stream of records.
struct Output {
    records: Vec<Value>,
    stream: bool,
    exit: u8,
}

impl Output {
    fn single(v: Value) -> Self {
        Output { records: vec![v], stream: false, exit: 0 }
    }

    fn stream(records: Vec<Value>) -> Self {
        Output { records, stream: true, exit: 0 }
    }
}

// ---------------------------------------------------------------------------
// Input loading
// ---------------------------------------------------------------------------

enum Input {
    Diagram(SurgeryDiagram),
    Front(LegendrianFront),
    Annulus(Box<AnnulusPresentation>),
    Pd(PdCode),
    Rgb(Box<RgbData>),
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn load(path: &Path) -> Result<Input, CliError> {
    let v = read_json(path)?;
    let has = |k: &str| v.get(k).is_some();
    Ok(if has("knot") {
        Input::Annulus(Box::new(serde_json::from_value(v)?))
    } else if has("events") {
        Input::Front(serde_json::from_value(v)?)
    } else if has("crossings") {
        let pd: PdCode = serde_json::from_value(v)?;
        pd.validate()?;
        Input::Pd(pd)
    } else if has("components") {
        Input::Diagram(serde_json::from_value(v)?)
    } else if has("lk_rg") {
        Input::Rgb(Box::new(serde_json::from_value(v)?))
    } else {
        return Err(Error::Schema(format!(
            "{}: expected a diagram, front, PD code, annulus presentation or RGB data",
            path.display()
        ))
        .into());
    })
}

fn load_diagram(path: &Path) -> Result<SurgeryDiagram, CliError> {
    match load(path)? {
        Input::Diagram(d) => Ok(d),
        Input::Rgb(r) => Ok(r.diagram()?),
        _ => Err(Error::Schema(format!("{}: expected a surgery diagram", path.display())).into()),
    }
}

fn load_annulus(path: &Path) -> Result<AnnulusPresentation, CliError> {
    match load(path)? {
        Input::Annulus(p) => Ok(*p),
        _ => Err(Error::Schema(format!("{}: expected an annulus presentation", path.display())).into()),
    }
}

fn load_class(args: &ClassArgs) -> Result<KnotClass, CliError> {
    match (&args.class, &args.class_file) {
        (Some(name), None) => KnotClass::builtin(name).map_err(|_| {
            CliError::Usage(format!("unknown class {name:?}; built-in: {}", KnotClass::builtin_names().join(", ")))
        }),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            Ok(KnotClass::from_json(&text)?)
        }
        _ => Err(CliError::Usage("give exactly one of --class and --class-file".into())),
    }
}

fn slope_arg(s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Usage(format!("invalid slope {s:?}: {e}")))
}

// ---------------------------------------------------------------------------
// JSON helpers
// ---------------------------------------------------------------------------

fn int_json(n: &Int) -> Value {
    match i64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn ints_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

fn orbit_json(o: &EulerOrbit) -> Value {
    json!({
        "order": o.order.as_ref().map(int_json),
        "quotient": ints_json(&o.quotient),
    })
}

fn pick<T: Clone>(items: &[T], branch: Branch) -> Result<Vec<T>, CliError> {
    match branch {
        Branch::All => Ok(items.to_vec()),
        Branch::Index(k) => items
            .get(k)
            .map(|x| vec![x.clone()])
            .ok_or_else(|| Error::IndexOutOfRange { index: k, len: items.len() }.into()),
    }
}

#[derive(Clone, Copy)]
enum Part {
    All,
    Homology,
    Euler,
    D3,
}

fn evaluation_json(eval: &Evaluation, part: Part, branch: Branch) -> Result<serde_json::Map<String, Value>, CliError> {
    let branches = pick(&eval.branches, branch)?;
    let mut m = serde_json::Map::new();
    if matches!(part, Part::All | Part::Homology) {
        m.insert("h1".into(), ints_json(&eval.homology.factors()));
    }
    if matches!(part, Part::Homology) {
        m.insert("betti".into(), json!(eval.homology.betti()));
        m.insert("order".into(), eval.homology.order().as_ref().map_or(Value::Null, int_json));
    }
    if matches!(part, Part::All | Part::Euler) {
        m.insert("euler".into(), Value::Array(branches.iter().map(|b| ints_json(&b.euler)).collect()));
    }
    if matches!(part, Part::Euler) {
        m.insert("orbits".into(), Value::Array(branches.iter().map(|b| orbit_json(&b.orbit)).collect()));
    }
    if matches!(part, Part::All | Part::D3) {
        m.insert("d3".into(), Value::Array(branches.iter().map(|b| json!(b.d3.to_string())).collect()));
    }
    if matches!(part, Part::All) {
        m.insert("branches".into(), json!(eval.branches.len()));
    }
    Ok(m)
}

fn poly_json(name: &str, p: &LaurentPoly) -> Value {
    json!({ name: p.to_string(), "terms": p.to_json() })
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn diagram_invariants(args: &InputArgs, part: Part) -> Result<Output, CliError> {
    match load(&args.file)? {
        Input::Annulus(p) => {
            let span = args.n.ok_or_else(|| CliError::Usage("an annulus presentation needs --n A..B".into()))?;
            let mut records = Vec::new();
            for n in span.naturals()? {
                let eval = evaluate(&annulus_twist_family(&p, n)?)?;
                let mut m = serde_json::Map::new();
                m.insert("n".into(), json!(n));
                m.extend(evaluation_json(&eval, part, args.branch)?);
                records.push(Value::Object(m));
            }
            Ok(Output::stream(records))
        }
        Input::Front(f) if matches!(part, Part::All) => Ok(Output::single(serde_json::to_value(f.link_invariants())?)),
        input => {
            if args.n.is_some() {
                return Err(CliError::Usage("--n applies to annulus presentations only".into()));
            }
            let d = match input {
                Input::Diagram(d) => d,
                Input::Rgb(r) => r.diagram()?,
                _ => return Err(Error::Schema(format!("{}: expected a surgery diagram", args.file.display())).into()),
            };
            let eval = evaluate(&d)?;
            Ok(Output::single(Value::Object(evaluation_json(&eval, part, args.branch)?)))
        }
    }
}

fn normalize(file: &Path, style: Style, branch: Branch) -> Result<Output, CliError> {
    let d = load_diagram(file)?;
    let style_name = match style {
        Style::Compact => "compact",
        Style::Expanded => "expanded",
    };
    let forms = d.normalize(match style {
        Style::Compact => NormalStyle::Compact,
        Style::Expanded => NormalStyle::Expanded,
    })?;
    let total = forms.len();
    let forms = pick(&forms, branch)?;
    let items = forms
        .iter()
        .map(|f| -> Result<Value, CliError> {
            Ok(json!({ "branch": f.branch, "origin": f.origin, "diagram": serde_json::to_value(&f.diagram)? }))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Output::single(json!({ "style": style_name, "count": total, "forms": items })))
}

fn replay(diagram: &Path, script: &Path) -> Result<Output, CliError> {
    let d = load_diagram(diagram)?;
    let script: MoveScript = serde_json::from_value(read_json(script)?)?;
    let steps = script.replay(&d)?;
    let mut records = Vec::with_capacity(steps.len());
    let mut summaries = Vec::with_capacity(steps.len());
    for (i, step) in steps.iter().enumerate() {
        let eval = evaluate(step)?;
        let summary = eval.summary();
        let mv = if i == 0 { Value::Null } else { serde_json::to_value(&script.moves[i - 1])? };
        records.push(json!({
            "step": i,
            "move": mv,
            "components": step.len(),
            "h1": ints_json(&summary.h1),
            "orbits": Value::Array(summary.euler.iter().map(orbit_json).collect()),
            "d3": Value::Array(summary.d3.iter().map(|v| json!(v.to_string())).collect()),
        }));
        summaries.push(summary);
    }
    let invariant = summaries.windows(2).all(|w| w[0] == w[1]);
    let last = serde_json::to_value(steps.last().expect("replay returns the input first"))?;
    Ok(Output::single(json!({ "steps": records, "invariant": invariant, "result": last })))
}

fn knot_record(d: &SurgeryDiagram) -> Result<Value, CliError> {
    let eval = evaluate(d)?;
    let c = d.component(0)?;
    let mut m = serde_json::Map::new();
    m.insert("tb".into(), json!(c.tb));
    m.insert("rot".into(), json!(c.rot));
    m.insert("coeff".into(), json!(legsurg::rational::format_rational(&c.coeff)));
    m.extend(evaluation_json(&eval, Part::All, Branch::All)?);
    Ok(Value::Object(m))
}

fn rgb_record(data: &RgbData) -> Result<Value, CliError> {
    let d = data.diagram()?;
    let g = rgb_resolve_diagram(&d, RgbSide::G)?;
    let b = rgb_resolve_diagram(&d, RgbSide::B)?;
    let equal = evaluate(&g)?.summary() == evaluate(&b)?.summary();
    Ok(json!({ "g": knot_record(&g)?, "b": knot_record(&b)?, "equal": equal }))
}

fn family(kind: &Family) -> Result<Output, CliError> {
    match kind {
        Family::Annulus { file, n } => {
            let p = load_annulus(file)?;
            let mut records = Vec::new();
            for k in n.naturals()? {
                let d = annulus_twist_family(&p, k)?;
                let eval = evaluate(&d)?;
                let mut m = serde_json::Map::new();
                m.insert("n".into(), json!(k));
                m.insert("components".into(), json!(d.len()));
                m.extend(evaluation_json(&eval, Part::All, Branch::All)?);
                records.push(Value::Object(m));
            }
            Ok(Output::stream(records))
        }
        Family::Rgb { file: Some(file), .. } => {
            let data = match load(file)? {
                Input::Rgb(r) => *r,
                _ => return Err(Error::Schema(format!("{}: expected RGB data", file.display())).into()),
            };
            Ok(Output::single(rgb_record(&data)?))
        }
        Family::Rgb { file: None, n } => {
            let mut records = Vec::new();
            for k in n.naturals()? {
                let mut rec = rgb_record(&RgbData::family(k))?;
                rec.as_object_mut().expect("object").insert("n".into(), json!(k));
                records.push(rec);
            }
            Ok(Output::stream(records))
        }
        Family::StarN { file, n, sign } => {
            let p = load_annulus(file)?;
            let s: i8 = match sign.as_str() {
                "+" => 1,
                "-" => -1,
                other => return Err(CliError::Usage(format!("--sign must be + or -, found {other:?}"))),
            };
            let mut records = Vec::new();
            for m in n.naturals()? {
                let d = star_n_move(&p, m, &vec![s; m as usize])?;
                let mut rec = knot_record(&d)?;
                rec.as_object_mut().expect("object").insert("m".into(), json!(m));
                records.push(rec);
            }
            Ok(Output::stream(records))
        }
    }
}

fn polynomial(file: &Path, name: &str) -> Result<Output, CliError> {
    let pd = match load(file)? {
        Input::Pd(pd) => pd,
        Input::Front(f) => f.to_pd(),
        _ => return Err(Error::Schema(format!("{}: expected a PD code or a front", file.display())).into()),
    };
    let p = if name == "homfly" { homfly(&pd)? } else { alexander(&pd)? };
    Ok(Output::single(poly_json(name, &p)))
}

fn pipeline_options(p: &PipelineArgs) -> Result<PipelineOptions, CliError> {
    if p.grid < 0 {
        return Err(CliError::Usage("--grid must be non-negative".into()));
    }
    Ok(PipelineOptions { grid: p.grid, gates: !p.no_gates })
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Invariants(a) => diagram_invariants(a, Part::All),
        Command::Homology(a) => diagram_invariants(a, Part::Homology),
        Command::Euler(a) => diagram_invariants(a, Part::Euler),
        Command::D3(a) => diagram_invariants(a, Part::D3),
        Command::Normalize { file, style, branch } => normalize(file, *style, *branch),
        Command::Replay { diagram, script } => replay(diagram, script),
        Command::Family { kind } => family(kind),
        Command::Homfly { file } => polynomial(file, "homfly"),
        Command::Alexander { file } => polynomial(file, "alexander"),
        Command::CheckSlope { class, tb, rot, pipeline } => {
            let class = load_class(class)?;
            let report =
                check_characterizing(&class, *tb, *rot, &slope_arg(&pipeline.slope)?, pipeline_options(pipeline)?)?;
            let mut out = Output::single(serde_json::to_value(&report)?);
            out.exit = report.verdict.exit_code() as u8;
            Ok(out)
        }
        Command::Sweep { class, tb, pipeline } => {
            let class = load_class(class)?;
            let slope = slope_arg(&pipeline.slope)?;
            let opts = pipeline_options(pipeline)?;
            let mut records = Vec::new();
            let mut exit = 0;
            for t in tb.values() {
                for r in class.rotations_at(t) {
                    let report = check_characterizing(&class, t, r, &slope, opts)?;
                    exit = exit.max(report.verdict.exit_code() as u8);
                    records.push(serde_json::to_value(&report)?);
                }
            }
            let mut out = Output::stream(records);
            out.exit = exit;
            Ok(out)
        }
        Command::Compare { tb, rot, tb2, rot2, slope } => {
            let report = overtwisted_equality(*tb, *rot, *tb2, *rot2, &slope_arg(slope)?)?;
            let mut out = Output::single(serde_json::to_value(&report)?);
            out.exit = if report.result == Equality::Contactomorphic { 0 } else { 2 };
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Plain-text rendering: one `key  value` row per field of a document, or
/// one `key=value` line per streamed record.
fn render_table(out: &Output) -> String {
    let mut s = String::new();
    for rec in &out.records {
        match rec {
            Value::Object(m) if out.stream => {
                let cells: Vec<String> = m.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect();
                s.push_str(&cells.join("  "));
                s.push('\n');
            }
            Value::Object(m) => {
                let width = m.keys().map(String::len).max().unwrap_or(0);
                for (k, v) in m {
                    match v {
                        Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
                            s.push_str(&format!("{k}\n"));
                            for item in items {
                                s.push_str(&format!("  {}\n", scalar(item)));
                            }
                        }
                        _ => s.push_str(&format!("{k:width$}  {}\n", scalar(v))),
                    }
                }
            }
            other => {
                s.push_str(&scalar(other));
                s.push('\n');
            }
        }
    }
    s
}

fn render(out: &Output, format: Format) -> String {
    match format {
        Format::Table => render_table(out),
        Format::Json if out.stream => out.records.iter().map(|r| format!("{r}\n")).collect(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.records[0]).expect("JSON values serialize");
            s.push('\n');
            s
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EX_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", render(&out, cli.format));
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("legsurg: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
