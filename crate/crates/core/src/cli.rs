//! The `ncreg` command line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{AlgebraError, GradedAlgebra};
use crate::cache::{load_algebra, Cache};
use crate::corpus::{read_presentation, Corpus, CorpusError};
use crate::field::{dispatch, Field, FieldVisitor};
use crate::groebner::Budget;
use crate::harness::{derive_seed, sample_module, verify, Suite, VerifyOptions};
use crate::module::{split_algebra_line, ModulePresentation};
use crate::parse::parse_poly_str;
use crate::presentation::Presentation;
use crate::regularity::{RegularityError, RegularityValue, Window, Workbench};
use crate::resolution::required_algebra_degree;

#[derive(Debug, Parser)]
#[command(
    name = "ncreg",
    version,
    about = "Homological invariants of connected graded algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Algebra presentation file.
    #[arg(long)]
    pub algebra: Option<PathBuf>,
    /// `trivial` (k), `free` (A), `sample:J` or a module file.
    #[arg(long)]
    pub module: Option<String>,
    /// Largest internal degree D.
    #[arg(long, default_value_t = 8)]
    pub max_deg: i64,
    /// Largest homological degree.
    #[arg(long, default_value_t = 6)]
    pub max_hom: usize,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for cached Gröbner bases.
    #[arg(long, env = "NCREG_CACHE")]
    pub cache_dir: Option<PathBuf>,
    /// Maximum number of Gröbner basis elements.
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal words of A in each degree.
    Basis(Common),
    /// Hilbert function of A, or of the module when one is given.
    Hilbert(Common),
    /// Normal form of a polynomial.
    Nf {
        #[command(flatten)]
        common: Common,
        poly: String,
    },
    /// Minimal free resolution with its differentials.
    Resolve(Common),
    /// Graded Betti numbers of the minimal resolution.
    Betti(Common),
    /// Ext-regularity from the Betti table.
    ExtReg(Common),
    /// Castelnuovo-Mumford regularity.
    CmReg(Common),
    Depth(Common),
    /// Linearity of the resolution of k.
    Koszul(Common),
    /// AS-Gorenstein / AS-regular classification.
    Classify(Common),
    /// Run verification suites over a corpus.
    Verify {
        #[command(flatten)]
        common: Common,
        /// `all` or a comma separated list of suite ids.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value = "corpus")]
        corpus: PathBuf,
        /// Only these corpus algebras (repeatable).
        #[arg(long)]
        only: Vec<String>,
    },
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad input: exit 2.
    Input(String),
    /// Window or budget too small: exit 3.
    Inconclusive(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Inconclusive(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Inconclusive(m) => m,
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Budget { .. } => CliError::Inconclusive(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<RegularityError> for CliError {
    fn from(e: RegularityError) -> Self {
        CliError::Inconclusive(e.to_string())
    }
}

/// Parses `argv` and runs the command; clap errors are returned as output.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Output {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => Output {
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message()),
            code: e.code(),
        },
    }
}

pub fn execute(cmd: &Command) -> Result<Output, CliError> {
    if let Command::Verify {
        common,
        suite,
        corpus,
        only,
    } = cmd
    {
        return run_verify(common, suite, corpus, only);
    }
    let common = common_of(cmd);
    let (pres, module_src) = load_inputs(common)?;
    dispatch(
        &pres.field.clone(),
        Job {
            cmd,
            common,
            pres,
            module_src,
        },
    )
}

fn common_of(cmd: &Command) -> &Common {
    match cmd {
        Command::Basis(c)
        | Command::Hilbert(c)
        | Command::Resolve(c)
        | Command::Betti(c)
        | Command::ExtReg(c)
        | Command::CmReg(c)
        | Command::Depth(c)
        | Command::Koszul(c)
        | Command::Classify(c) => c,
        Command::Nf { common, .. } | Command::Verify { common, .. } => common,
    }
}

enum ModuleSrc {
    Trivial,
    Free,
    Sample(usize),
    Text(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_inputs(c: &Common) -> Result<(Presentation, ModuleSrc), CliError> {
    let mut algebra = c.algebra.clone();
    let module = match c.module.as_deref() {
        None | Some("trivial") | Some("k") => ModuleSrc::Trivial,
        Some("free") | Some("A") => ModuleSrc::Free,
        Some(s) if s.starts_with("sample:") => {
            let j = s["sample:".len()..]
                .parse()
                .map_err(|_| CliError::Input(format!("bad sample index in `{s}`")))?;
            ModuleSrc::Sample(j)
        }
        Some(path) => {
            let path = Path::new(path);
            let text = read(path)?;
            if algebra.is_none() {
                if let (_, Some(a)) = split_algebra_line(&text) {
                    algebra = Some(path.parent().unwrap_or(Path::new(".")).join(a));
                }
            }
            ModuleSrc::Text(text)
        }
    };
    let algebra =
        algebra.ok_or_else(|| CliError::Input("no algebra given (use --algebra)".into()))?;
    Ok((read_presentation(&algebra)?, module))
}

fn budget(c: &Common) -> Budget {
    let mut b = Budget::default();
    if let Some(n) = c.budget {
        b.max_elements = n;
    }
    b
}

struct Job<'a> {
    cmd: &'a Command,
    common: &'a Common,
    pres: Presentation,
    module_src: ModuleSrc,
}

impl FieldVisitor for Job<'_> {
    type Output = Result<Output, CliError>;

    fn visit<F: Field>(self, field: F) -> Self::Output {
        let c = self.common;
        if c.max_deg < 0 {
            return Err(CliError::Input("--max-deg must be non-negative".into()));
        }
        let cache = c.cache_dir.as_ref().map(Cache::new);
        let b = budget(c);
        let load = |deg: i64| -> Result<Arc<GradedAlgebra<F>>, CliError> {
            Ok(Arc::new(load_algebra(
                &self.pres,
                field.clone(),
                deg.max(0) as u32,
                &b,
                cache.as_ref(),
            )?))
        };
        let mut alg = load(c.max_deg)?;
        let mut module = build_module(&alg, &self.module_src, c.seed)?;
        let needed = required_algebra_degree(&module, c.max_deg);
        if needed > c.max_deg {
            alg = load(needed)?;
            module = build_module(&alg, &self.module_src, c.seed)?;
        }
        let module_given = !matches!(self.module_src, ModuleSrc::Trivial) || c.module.is_some();
        let wb = Workbench::new(
            alg.clone(),
            Window {
                max_hom: c.max_hom,
                max_deg: c.max_deg,
            },
        );
        let fmt = c.format.unwrap_or(match self.cmd {
            Command::Classify(_) => Format::Json,
            _ => Format::Table,
        });
        let mut code = 0;
        let stdout = match self.cmd {
            Command::Basis(_) => basis(&alg, c.max_deg, fmt),
            Command::Hilbert(_) => {
                let dims = if module_given {
                    let q = crate::module::QuotientModule::new(alg.clone(), &module, c.max_deg);
                    q.hilbert_function()
                } else {
                    alg.hilbert_function()
                };
                hilbert(&dims, fmt)
            }
            Command::Nf { poly, .. } => nf(&alg, poly, fmt)?,
            Command::Resolve(_) => {
                let res = wb.resolve(&module)?;
                resolve_out(&alg, &res, fmt)
            }
            Command::Betti(_) => {
                let b = wb.resolve(&module)?.betti_table();
                match fmt {
                    Format::Table => b.to_table(),
                    Format::Csv => b.to_csv(),
                    Format::Json => pretty(&b.to_json_value()),
                }
            }
            Command::ExtReg(_) => {
                let res = wb.resolve(&module)?;
                let v = wb.ext_regularity(&res);
                code = inconclusive_code(&v);
                value_out("ext_reg", &v, fmt)
            }
            Command::CmReg(_) => {
                let cm = wb.cm_regularity(&module)?;
                code = inconclusive_code(&cm.value);
                match fmt {
                    Format::Json => {
                        let mut j = cm.to_json_value();
                        j["schema"] = json!(1);
                        pretty(&j)
                    }
                    Format::Csv => format!(
                        "cm_reg,bound,route\n{},{},{}\n",
                        cm.value.value,
                        bound(&cm.value),
                        route(&cm)
                    ),
                    Format::Table => format!("CM.reg = {} (route: {})\n", cm.value, route(&cm)),
                }
            }
            Command::Depth(_) => {
                let v = wb.depth(&module);
                code = inconclusive_code(&v);
                value_out("depth", &v, fmt)
            }
            Command::Koszul(_) => {
                let k = wb.koszul()?;
                match fmt {
                    Format::Json => pretty(&json!({ "schema": 1, "koszul": k })),
                    Format::Csv => format!("koszul\n{}\n", k),
                    Format::Table => format!("{k}\n"),
                }
            }
            Command::Classify(_) => {
                let cl = wb.classify();
                match fmt {
                    Format::Json => pretty(&cl.to_json_value(&wb)),
                    Format::Csv => {
                        let (d, l) = cl
                            .verdict
                            .type_dl()
                            .map_or((String::new(), String::new()), |(d, l)| {
                                (d.to_string(), l.to_string())
                            });
                        format!(
                            "verdict,d,l,standard\n{},{d},{l},{}\n",
                            cl.verdict.name(),
                            cl.standard
                        )
                    }
                    Format::Table => classify_table(&wb),
                }
            }
            Command::Verify { .. } => unreachable!("handled before dispatch"),
        };
        Ok(Output {
            stdout,
            stderr: String::new(),
            code,
        })
    }
}

fn build_module<F: Field>(
    alg: &GradedAlgebra<F>,
    src: &ModuleSrc,
    seed: Option<u64>,
) -> Result<ModulePresentation<F>, CliError> {
    Ok(match src {
        ModuleSrc::Trivial => ModulePresentation::trivial(alg),
        ModuleSrc::Free => ModulePresentation::free(vec![0]),
        ModuleSrc::Sample(j) => {
            sample_module(alg, derive_seed(seed.unwrap_or(0), 0, *j as u64), *j).1
        }
        ModuleSrc::Text(t) => {
            ModulePresentation::parse(t, alg).map_err(|e| CliError::Input(e.to_string()))?
        }
    })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn inconclusive_code(v: &RegularityValue) -> i32 {
    if v.certified() {
        0
    } else {
        3
    }
}

fn bound(v: &RegularityValue) -> &'static str {
    match v.bound {
        crate::regularity::Bound::Exact => "exact",
        crate::regularity::Bound::AtLeast => "at-least",
        crate::regularity::Bound::AtMost => "at-most",
    }
}

fn route(cm: &crate::regularity::CmRegularity) -> &'static str {
    match cm.route {
        crate::regularity::CmRoute::Torsion => "torsion",
        crate::regularity::CmRoute::LocalDuality => "local-duality",
    }
}

fn value_out(name: &str, v: &RegularityValue, fmt: Format) -> String {
    match fmt {
        Format::Json => {
            let mut j = v.to_json_value();
            j["schema"] = json!(1);
            j["window"] = json!({ "max_hom": v.window.max_hom, "max_deg": v.window.max_deg });
            pretty(&json!({ "schema": 1, name: j }))
        }
        Format::Csv => format!("{name},bound\n{},{}\n", v.value, bound(v)),
        Format::Table => format!("{name} = {v}\n"),
    }
}

fn basis<F: Field>(alg: &GradedAlgebra<F>, max_deg: i64, fmt: Format) -> String {
    let names = |w: &crate::word::Word| crate::word::format_word(w, alg.free().generators());
    match fmt {
        Format::Json => {
            let degrees: Vec<Value> = (0..=max_deg)
                .map(|d| json!({ "degree": d, "words": alg.basis_i64(d).iter().map(names).collect::<Vec<_>>() }))
                .collect();
            pretty(&json!({ "schema": 1, "degrees": degrees }))
        }
        Format::Csv => {
            let mut s = String::from("degree,word\n");
            for d in 0..=max_deg {
                for w in alg.basis_i64(d) {
                    let _ = writeln!(s, "{d},{}", names(w));
                }
            }
            s
        }
        Format::Table => {
            let mut s = String::new();
            for d in 0..=max_deg {
                let words: Vec<String> = alg.basis_i64(d).iter().map(names).collect();
                let _ = writeln!(s, "{d:>3} [{}] {}", words.len(), words.join(" "));
            }
            s
        }
    }
}

fn hilbert(dims: &crate::graded::GradedDims, fmt: Format) -> String {
    let rows: Vec<(i64, u64)> = (dims.lo..=dims.hi)
        .map(|d| (d, dims.get(d).unwrap_or(0)))
        .collect();
    match fmt {
        Format::Json => pretty(&json!({
            "schema": 1,
            "lo": dims.lo,
            "hi": dims.hi,
            "dims": rows.iter().map(|r| r.1).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("degree,dim\n");
            for (d, n) in rows {
                let _ = writeln!(s, "{d},{n}");
            }
            s
        }
        Format::Table => {
            let mut s = String::new();
            for (d, n) in rows {
                let _ = writeln!(s, "{d:>3} {n}");
            }
            s
        }
    }
}

fn nf<F: Field>(alg: &GradedAlgebra<F>, src: &str, fmt: Format) -> Result<String, CliError> {
    let names = alg.presentation().generator_names();
    let terms = parse_poly_str(src, &names).map_err(|e| CliError::Input(e.to_string()))?;
    let f = alg.field();
    let mut conv = Vec::new();
    for (w, c) in terms {
        conv.push((
            w,
            f.from_rational(&c)
                .map_err(|e| CliError::Input(e.to_string()))?,
        ));
    }
    let p = alg.free().from_terms(conv);
    let n = alg.groebner().normal_form(&p).map_err(|e| match e {
        crate::groebner::GroebnerError::OutsideWindow { .. } => {
            CliError::Inconclusive(format!("{e}; raise --max-deg"))
        }
        other => CliError::Input(other.to_string()),
    })?;
    let text = alg.free().format(&n);
    Ok(match fmt {
        Format::Json => pretty(&json!({ "schema": 1, "input": src, "normal_form": text })),
        Format::Csv => format!(
            "input,normal_form\n\"{}\",\"{}\"\n",
            src.replace('"', "\"\""),
            text
        ),
        Format::Table => format!("{text}\n"),
    })
}

fn resolve_out<F: Field>(
    alg: &GradedAlgebra<F>,
    res: &crate::resolution::MinimalResolution<F>,
    fmt: Format,
) -> String {
    let free = alg.free();
    let (pd, pd_exact) = res.projective_dimension();
    let last = res.steps().iter().rposition(|s| s.rank() > 0).unwrap_or(0);
    match fmt {
        Format::Json => {
            let steps: Vec<Value> = (0..=last)
                .map(|i| {
                    let d: Option<Vec<Vec<String>>> = (i > 0)
                        .then(|| res.differential(i).iter().map(|col| col.iter().map(|e| free.format(e)).collect()).collect());
                    json!({ "i": i, "shifts": res.shifts(i), "complete": res.step_complete(i), "differential": d })
                })
                .collect();
            pretty(&json!({
                "schema": 1,
                "max_hom": res.max_hom(),
                "max_deg": res.max_deg(),
                "terminated": res.is_terminated(),
                "projective_dimension": pd,
                "pd_exact": pd_exact,
                "steps": steps,
            }))
        }
        Format::Csv => {
            let mut s = String::from("i,shift\n");
            for i in 0..=last {
                for sh in res.shifts(i) {
                    let _ = writeln!(s, "{i},{sh}");
                }
            }
            s
        }
        Format::Table => {
            let mut s = String::new();
            for i in 0..=last {
                let gens: Vec<String> = res
                    .shifts(i)
                    .iter()
                    .map(|sh| format!("A({})", -sh))
                    .collect();
                let mark = if res.step_complete(i) {
                    ""
                } else {
                    "  (partial)"
                };
                let _ = writeln!(
                    s,
                    "F_{i} = {}{mark}",
                    if gens.is_empty() {
                        "0".into()
                    } else {
                        gens.join(" + ")
                    }
                );
                if i > 0 {
                    for (u, col) in res.differential(i).iter().enumerate() {
                        let entries: Vec<String> = col.iter().map(|e| free.format(e)).collect();
                        let _ = writeln!(s, "  d(e{u}) = [{}]", entries.join(", "));
                    }
                }
            }
            let term = if res.is_terminated() {
                "terminated"
            } else {
                "not terminated"
            };
            let exact = if pd_exact { "" } else { " (lower bound)" };
            let _ = writeln!(s, "{term}; pd = {pd}{exact}");
            s
        }
    }
}

fn classify_table<F: Field>(wb: &Workbench<F>) -> String {
    let cl = wb.classify();
    let mut s = String::new();
    match cl.verdict.type_dl() {
        Some((d, l)) => {
            let _ = writeln!(
                s,
                "verdict: {} of type ({d}, {l}){}",
                cl.verdict.name(),
                if cl.standard { ", standard" } else { "" }
            );
        }
        None => {
            let _ = writeln!(s, "verdict: {}", cl.verdict.name());
        }
    }
    if let Some(k) = &cl.koszul {
        let _ = writeln!(s, "koszul: {k}");
    }
    for g in &cl.ext {
        let dims: Vec<String> = g
            .dims
            .dims
            .iter()
            .map(|(j, n)| format!("{n}@{j}"))
            .collect();
        let _ = writeln!(
            s,
            "Ext^{}(k, A) = {}{}",
            g.index,
            if dims.is_empty() {
                "0".into()
            } else {
                dims.join(" + ")
            },
            if g.exact { "" } else { " (window)" }
        );
    }
    for d in &cl.diagnostics {
        let _ = writeln!(s, "note: {d}");
    }
    s
}

fn run_verify(c: &Common, suite: &str, corpus: &Path, only: &[String]) -> Result<Output, CliError> {
    let suites = Suite::parse(suite).ok_or_else(|| {
        let ids: Vec<&str> = Suite::ALL.iter().map(|s| s.id()).collect();
        CliError::Input(format!(
            "unknown suite `{suite}`; expected `all` or one of {}",
            ids.join(", ")
        ))
    })?;
    let corpus = Corpus::load(corpus)?;
    for name in only {
        if corpus.entry(name).is_none() {
            return Err(CliError::Input(format!("no corpus algebra named `{name}`")));
        }
    }
    let opts = VerifyOptions {
        suites,
        seed: c.seed,
        budget: budget(c),
        cache: c.cache_dir.as_ref().map(Cache::new),
        only: only.to_vec(),
    };
    let report = verify(&corpus, &opts)?;
    let stdout = match c.format.unwrap_or(Format::Table) {
        Format::Json => pretty(&report.to_json_value()),
        Format::Table => report.summary_table(),
        Format::Csv => {
            let mut s = String::from("suite,algebra,instance,outcome,note\n");
            for r in &report.reports {
                for rec in &r.records {
                    let o = serde_json::to_value(rec.outcome).expect("serializable");
                    let _ = writeln!(
                        s,
                        "{},{},{},{},\"{}\"",
                        r.suite.id(),
                        rec.algebra,
                        rec.instance,
                        o.as_str().unwrap_or(""),
                        rec.note.replace('"', "\"\"")
                    );
                }
            }
            s
        }
    };
    Ok(Output {
        stdout,
        stderr: String::new(),
        code: report.exit_code(),
    })
}
