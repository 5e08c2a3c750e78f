//! Verification suites over the corpus and sampled modules.
//!
//! Every check is evaluated with interval arithmetic on certified values:
//! a record passes or fails only when the computed intervals decide it,
//! otherwise it is inconclusive.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::GradedAlgebra;
use crate::cache::{load_algebra, Cache};
use crate::corpus::{Corpus, CorpusEntry, CorpusError};
use crate::field::{dispatch, Field, FieldSpec, FieldVisitor};
use crate::graded::ExtInt;
use crate::groebner::Budget;
use crate::module::{ModulePresentation, RandomModuleParams};
use crate::presentation::Presentation;
use crate::regularity::{CmRegularity, KoszulVerdict, RegularityValue, Verdict, Window, Workbench};
use crate::resolution::{BettiTable, MinimalResolution};
use crate::word::{Generator, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Expectations,
    Jorgensen,
    CmEqualsExt,
    StandardRegular,
    Romer,
    AuslanderBuchsbaum,
    Euler,
    Invariants,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Expectations,
        Suite::Jorgensen,
        Suite::CmEqualsExt,
        Suite::StandardRegular,
        Suite::Romer,
        Suite::AuslanderBuchsbaum,
        Suite::Euler,
        Suite::Invariants,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::Expectations => "corpus-expectations",
            Suite::Jorgensen => "jorgensen-bounds",
            Suite::CmEqualsExt => "cm-equals-ext",
            Suite::StandardRegular => "koszul-standard-regular",
            Suite::Romer => "romer-formula",
            Suite::AuslanderBuchsbaum => "auslander-buchsbaum",
            Suite::Euler => "euler-characteristic",
            Suite::Invariants => "resolution-invariants",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Suite::Expectations => "computed invariants agree with the corpus manifest",
            Suite::Jorgensen => {
                "-CM.reg A <= Ext.reg M - CM.reg M <= Ext.reg k for every nonzero M"
            }
            Suite::CmEqualsExt => {
                "CM.reg M = Ext.reg M for all M if and only if A is Koszul AS-regular"
            }
            Suite::StandardRegular => "a Koszul standard AS-Gorenstein algebra is AS-regular",
            Suite::Romer => "CM.reg M - CM.reg A = Ext.reg M whenever pd M is finite",
            Suite::AuslanderBuchsbaum => "pd M + depth M = depth A whenever pd M is finite",
            Suite::Euler => "(sum (-1)^i beta_ij t^j) H_A(t) = H_M(t) mod t^(D+1)",
            Suite::Invariants => {
                "d^2 = 0 and every differential has entries in the augmentation ideal"
            }
        }
    }

    pub fn parse(s: &str) -> Option<Vec<Suite>> {
        if s == "all" {
            return Some(Suite::ALL.to_vec());
        }
        let aliases: &[(&str, Suite)] = &[
            ("expectations", Suite::Expectations),
            ("jorgensen", Suite::Jorgensen),
            ("cm-ext", Suite::CmEqualsExt),
            ("standard-regular", Suite::StandardRegular),
            ("romer", Suite::Romer),
            ("ab", Suite::AuslanderBuchsbaum),
            ("euler", Suite::Euler),
            ("invariants", Suite::Invariants),
        ];
        let mut out = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let suite = Suite::ALL
                .iter()
                .copied()
                .find(|x| x.id() == part)
                .or_else(|| aliases.iter().find(|(a, _)| *a == part).map(|(_, x)| *x))?;
            if !out.contains(&suite) {
                out.push(suite);
            }
        }
        out.sort();
        Some(out)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
    /// The hypothesis does not apply.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub algebra: String,
    pub instance: String,
    pub outcome: Outcome,
    pub values: Value,
    pub note: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub vacuous: usize,
}

impl Tally {
    fn add(&mut self, o: Outcome) {
        match o {
            Outcome::Pass => self.pass += 1,
            Outcome::Fail => self.fail += 1,
            Outcome::Inconclusive => self.inconclusive += 1,
            Outcome::Vacuous => self.vacuous += 1,
        }
    }

    fn merge(&mut self, o: &Tally) {
        self.pass += o.pass;
        self.fail += o.fail;
        self.inconclusive += o.inconclusive;
        self.vacuous += o.vacuous;
    }

    pub fn total(&self) -> usize {
        self.pass + self.fail + self.inconclusive + self.vacuous
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub suite: Suite,
    pub records: Vec<Record>,
}

impl Report {
    pub fn tally(&self) -> Tally {
        let mut t = Tally::default();
        for r in &self.records {
            t.add(r.outcome);
        }
        t
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "id": self.suite.id(),
            "statement": self.suite.statement(),
            "summary": self.tally(),
            "records": self.records,
        })
    }
}

#[derive(Debug, Clone)]
pub struct FullReport {
    pub seed: u64,
    pub reports: Vec<Report>,
    pub diagnostics: Vec<String>,
}

impl FullReport {
    pub fn tally(&self) -> Tally {
        let mut t = Tally::default();
        for r in &self.reports {
            t.merge(&r.tally());
        }
        t
    }

    pub fn report(&self, suite: Suite) -> Option<&Report> {
        self.reports.iter().find(|r| r.suite == suite)
    }

    /// 1 on any failure, 3 when nothing passed and something was inconclusive.
    pub fn exit_code(&self) -> i32 {
        let t = self.tally();
        if t.fail > 0 {
            1
        } else if t.pass == 0 && t.inconclusive > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "schema": 1,
            "seed": self.seed,
            "summary": self.tally(),
            "exit_code": self.exit_code(),
            "suites": self.reports.iter().map(|r| r.to_json_value()).collect::<Vec<_>>(),
            "diagnostics": self.diagnostics,
        })
    }

    pub fn summary_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<26} {:>5} {:>5} {:>12} {:>8}",
            "suite", "pass", "fail", "inconclusive", "vacuous"
        );
        for r in &self.reports {
            let t = r.tally();
            let _ = writeln!(
                s,
                "{:<26} {:>5} {:>5} {:>12} {:>8}",
                r.suite.id(),
                t.pass,
                t.fail,
                t.inconclusive,
                t.vacuous
            );
        }
        let t = self.tally();
        let _ = writeln!(
            s,
            "{:<26} {:>5} {:>5} {:>12} {:>8}",
            "total", t.pass, t.fail, t.inconclusive, t.vacuous
        );
        for r in &self.reports {
            for rec in r.records.iter().filter(|x| x.outcome == Outcome::Fail) {
                let _ = writeln!(
                    s,
                    "FAIL {} {} {}: {}",
                    r.suite.id(),
                    rec.algebra,
                    rec.instance,
                    rec.note
                );
            }
        }
        for d in &self.diagnostics {
            let _ = writeln!(s, "note: {d}");
        }
        s
    }
}

// ---------------------------------------------------------------------------
// interval checks

type Interval = (ExtInt, ExtInt);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Truth {
    Yes,
    No,
    Unknown,
}

fn point(v: i64) -> Interval {
    (ExtInt::Finite(v), ExtInt::Finite(v))
}

fn neg(a: Interval) -> Interval {
    (a.1.neg(), a.0.neg())
}

fn sub(a: Interval, b: Interval) -> Interval {
    let lo = a.0.checked_sub(b.1).unwrap_or(ExtInt::NegInf);
    let hi = a.1.checked_sub(b.0).unwrap_or(ExtInt::PosInf);
    (lo, hi)
}

fn add(a: Interval, b: Interval) -> Interval {
    let lo = a.0.checked_add(b.0).unwrap_or(ExtInt::NegInf);
    let hi = a.1.checked_add(b.1).unwrap_or(ExtInt::PosInf);
    (lo, hi)
}

fn leq(a: Interval, b: Interval) -> Truth {
    if a.1 <= b.0 {
        Truth::Yes
    } else if a.0 > b.1 {
        Truth::No
    } else {
        Truth::Unknown
    }
}

fn eq(a: Interval, b: Interval) -> Truth {
    if a.0 == a.1 && b.0 == b.1 && a.0 == b.0 {
        Truth::Yes
    } else if a.1 < b.0 || a.0 > b.1 {
        Truth::No
    } else {
        Truth::Unknown
    }
}

fn and(a: Truth, b: Truth) -> Truth {
    match (a, b) {
        (Truth::No, _) | (_, Truth::No) => Truth::No,
        (Truth::Yes, Truth::Yes) => Truth::Yes,
        _ => Truth::Unknown,
    }
}

fn outcome(t: Truth) -> Outcome {
    match t {
        Truth::Yes => Outcome::Pass,
        Truth::No => Outcome::Fail,
        Truth::Unknown => Outcome::Inconclusive,
    }
}

fn iv_json(a: Interval) -> Value {
    json!([a.0, a.1])
}

// ---------------------------------------------------------------------------
// field-independent summaries of computed data

#[derive(Debug, Clone)]
pub struct InstanceData {
    pub label: String,
    pub kind: String,
    pub seed: Option<u64>,
    pub text: String,
    pub is_zero: bool,
    pub is_k: bool,
    pub pd: ExtInt,
    pub pd_exact: bool,
    pub betti: BettiTable,
    pub needed_max_deg: i64,
    pub ext_reg: RegularityValue,
    pub cm: Option<CmRegularity>,
    pub depth: RegularityValue,
    pub d_squared: Result<(), String>,
    pub minimal: Result<(), String>,
    pub euler: Option<Result<(), String>>,
}

impl InstanceData {
    fn inputs(&self) -> Value {
        json!({ "kind": self.kind, "seed": self.seed, "presentation": self.text })
    }
}

#[derive(Debug, Clone)]
pub struct AlgebraData {
    pub name: String,
    pub window: Window,
    pub hilbert: Vec<u64>,
    pub verdict: Verdict,
    pub standard: bool,
    pub koszul: Option<KoszulVerdict>,
    pub ext_k_a_exact: bool,
    pub diagnostics: Vec<String>,
    /// Ranks of the steps of the resolution of `k`.
    pub k_ranks: Vec<usize>,
    pub k_needed_max_deg: i64,
    pub cm_a: Option<RegularityValue>,
    pub ext_reg_k: RegularityValue,
    pub depth_a: RegularityValue,
    pub instances: Vec<InstanceData>,
}

impl AlgebraData {
    fn k(&self) -> Option<&InstanceData> {
        self.instances.iter().find(|i| i.is_k)
    }

    fn classification_json(&self) -> Value {
        json!({
            "verdict": self.verdict.name(),
            "type": self.verdict.type_dl(),
            "standard": self.standard,
            "koszul": self.koszul,
        })
    }
}

/// Deterministic seed for the `j`-th sample of the `index`-th algebra.
pub fn derive_seed(seed: u64, index: u64, j: u64) -> u64 {
    let mut x =
        seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ j.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    // splitmix64 finalizer
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// The `j`-th sampled module: kinds cycle through cyclic quotients, cokernels
/// of random matrices and shifted free modules.
pub fn sample_module<F: Field>(
    alg: &GradedAlgebra<F>,
    seed: u64,
    j: usize,
) -> (String, ModulePresentation<F>) {
    let p = |num_gens, gen_degrees: Vec<i64>, num_rels, rel_degree| RandomModuleParams {
        num_gens,
        gen_degrees,
        num_rels,
        rel_degree,
    };
    match j % 6 {
        0 => (
            "cyclic-linear".into(),
            ModulePresentation::random(alg, seed, &p(1, vec![0], 1, 1)),
        ),
        1 => (
            "cyclic-quadric".into(),
            ModulePresentation::random(alg, seed, &p(1, vec![0], 1, 2)),
        ),
        2 => (
            "cyclic-two-quadrics".into(),
            ModulePresentation::random(alg, seed, &p(1, vec![0], 2, 2)),
        ),
        3 => (
            "linear-2x2".into(),
            ModulePresentation::random(alg, seed, &p(2, vec![0, 0], 2, 1)),
        ),
        4 => {
            let s = 1 + (j as i64 / 6) % 3;
            (format!("free-shift-{s}"), ModulePresentation::free(vec![s]))
        }
        _ => (
            "mixed-cover".into(),
            ModulePresentation::random(alg, seed, &p(2, vec![0, 1], 2, 2)),
        ),
    }
}

/// A quadratic algebra with random integer coefficients in `[-5, 5]`.
pub fn random_quadratic(seed: u64, index: usize) -> Presentation {
    const PATTERNS: [(usize, usize); 4] = [(2, 1), (2, 1), (2, 2), (3, 3)];
    let (g, r) = PATTERNS[index % PATTERNS.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1_000 + index as u64, 0));
    let names = ["x", "y", "z"];
    let gens: Vec<Generator> = names[..g]
        .iter()
        .map(|n| Generator {
            name: n.to_string(),
            degree: 1,
        })
        .collect();
    let rels: Vec<Vec<(Word, BigRational)>> = (0..r)
        .map(|_| {
            let mut terms = Vec::new();
            for a in 0..g {
                for b in 0..g {
                    let c: i64 = rng.gen_range(-5..=5);
                    terms.push((
                        Word::from_letters(&[a, b]),
                        BigRational::from_integer(c.into()),
                    ));
                }
            }
            terms
        })
        .collect();
    Presentation::new(FieldSpec::default(), gens, rels).expect("quadratic relations are valid")
}

struct Analyze<'a> {
    name: String,
    pres: &'a Presentation,
    window: Window,
    samples: usize,
    seed: u64,
    index: u64,
    modules: bool,
    budget: Budget,
    cache: Option<&'a Cache>,
}

impl FieldVisitor for Analyze<'_> {
    type Output = Result<AlgebraData, String>;

    fn visit<F: Field>(self, field: F) -> Self::Output {
        let alg = load_algebra(
            self.pres,
            field,
            self.window.max_deg.max(0) as u32,
            &self.budget,
            self.cache,
        )
        .map_err(|e| e.to_string())?;
        let alg = Arc::new(alg);
        let wb = Workbench::new(alg.clone(), self.window);
        let class = wb.classify().clone();
        let rk = wb.resolution_of_k();
        let cm_a = wb
            .cm_regularity(&ModulePresentation::free(vec![0]))
            .ok()
            .map(|c| c.value);
        let mut instances = Vec::new();
        let k = ModulePresentation::trivial(&alg);
        instances.push(instance(&wb, "k", "trivial", None, &k, rk, true));
        if self.modules {
            let a = ModulePresentation::free(vec![0]);
            let ra = wb.resolve(&a).map_err(|e| e.to_string())?;
            instances.push(instance(&wb, "A", "free", None, &a, &ra, false));
            for j in 0..self.samples {
                let s = derive_seed(self.seed, self.index, j as u64);
                let (kind, m) = sample_module(&alg, s, j);
                let res = wb.resolve(&m).map_err(|e| e.to_string())?;
                instances.push(instance(
                    &wb,
                    &format!("M{j}"),
                    &kind,
                    Some(s),
                    &m,
                    &res,
                    false,
                ));
            }
        }
        Ok(AlgebraData {
            name: self.name,
            window: self.window,
            hilbert: alg.hilbert_function().values(),
            verdict: class.verdict,
            standard: class.standard,
            koszul: class.koszul.clone(),
            ext_k_a_exact: class.ext.iter().all(|g| g.exact),
            diagnostics: class.diagnostics.clone(),
            k_ranks: (0..=self.window.max_hom)
                .map(|i| rk.shifts(i).len())
                .collect(),
            k_needed_max_deg: rk.needed_max_deg(),
            cm_a,
            ext_reg_k: wb.ext_regularity(rk),
            depth_a: wb.depth_of(wb.algebra_module()),
            instances,
        })
    }
}

fn instance<F: Field>(
    wb: &Workbench<F>,
    label: &str,
    kind: &str,
    seed: Option<u64>,
    m: &ModulePresentation<F>,
    res: &MinimalResolution<F>,
    is_k: bool,
) -> InstanceData {
    let (pd, pd_exact) = res.projective_dimension();
    let betti = res.betti_table();
    let euler = betti.terminated.then(|| res.check_euler());
    InstanceData {
        label: label.to_string(),
        kind: kind.to_string(),
        seed,
        text: m.to_text(wb.algebra()),
        is_zero: res.is_zero_module(),
        is_k,
        pd,
        pd_exact,
        needed_max_deg: res.needed_max_deg(),
        ext_reg: wb.ext_regularity(res),
        cm: wb.cm_regularity_with(m, Some(res)).ok(),
        depth: wb.depth(m),
        d_squared: res.check_d_squared(),
        minimal: res.check_minimal(),
        euler,
        betti,
    }
}

// ---------------------------------------------------------------------------
// driver

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub suites: Vec<Suite>,
    /// Overrides the manifest seed.
    pub seed: Option<u64>,
    pub budget: Budget,
    pub cache: Option<Cache>,
    /// Restrict to corpus algebras with these names.
    pub only: Vec<String>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            suites: Suite::ALL.to_vec(),
            seed: None,
            budget: Budget::default(),
            cache: None,
            only: Vec::new(),
        }
    }
}

pub fn verify(corpus: &Corpus, opts: &VerifyOptions) -> Result<FullReport, CorpusError> {
    let seed = opts.seed.or(corpus.manifest.seed).unwrap_or(0);
    let needs_modules = opts.suites.iter().any(|s| {
        matches!(
            s,
            Suite::Jorgensen
                | Suite::CmEqualsExt
                | Suite::Romer
                | Suite::AuslanderBuchsbaum
                | Suite::Euler
                | Suite::Invariants
        )
    });
    let mut diagnostics = Vec::new();
    let mut corpus_data: Vec<(&CorpusEntry, Result<AlgebraData, String>)> = Vec::new();
    for (index, entry) in corpus.manifest.algebras.iter().enumerate() {
        if !opts.only.is_empty() && !opts.only.contains(&entry.name) {
            continue;
        }
        let pres = corpus.presentation(entry)?;
        let job = Analyze {
            name: entry.name.clone(),
            pres: &pres,
            window: Window {
                max_hom: entry.max_hom,
                max_deg: entry.max_deg,
            },
            samples: entry.random_modules,
            seed,
            index: index as u64,
            modules: needs_modules,
            budget: opts.budget,
            cache: opts.cache.as_ref(),
        };
        let data = dispatch(&pres.field, job);
        if let Err(e) = &data {
            diagnostics.push(format!("{}: {e}", entry.name));
        }
        corpus_data.push((entry, data));
    }
    let mut random_data: Vec<Result<AlgebraData, String>> = Vec::new();
    let wants_random = opts.only.is_empty()
        && opts
            .suites
            .iter()
            .any(|s| matches!(s, Suite::StandardRegular | Suite::Euler | Suite::Invariants));
    if let (true, Some(ra)) = (wants_random, &corpus.manifest.random_algebras) {
        for i in 0..ra.count {
            let pres = random_quadratic(seed, i);
            let job = Analyze {
                name: format!("random-{i}"),
                pres: &pres,
                window: Window {
                    max_hom: ra.max_hom,
                    max_deg: ra.max_deg,
                },
                samples: 0,
                seed,
                index: 1_000 + i as u64,
                modules: false,
                budget: opts.budget,
                cache: opts.cache.as_ref(),
            };
            random_data.push(dispatch(&pres.field, job).map(|mut d| {
                d.diagnostics.insert(
                    0,
                    format!(
                        "presentation: {}",
                        pres.to_text().replace('\n', " ").trim_end()
                    ),
                );
                d
            }));
        }
    }

    let mut reports = Vec::new();
    for &suite in &opts.suites {
        let mut records = Vec::new();
        for (entry, data) in &corpus_data {
            match data {
                Ok(d) => records.extend(run_suite(suite, d, Some(entry))),
                Err(e) => records.push(Record {
                    algebra: entry.name.clone(),
                    instance: "-".into(),
                    outcome: Outcome::Inconclusive,
                    values: Value::Null,
                    note: format!("algebra could not be computed: {e}"),
                }),
            }
        }
        if matches!(
            suite,
            Suite::StandardRegular | Suite::Euler | Suite::Invariants
        ) {
            for (i, data) in random_data.iter().enumerate() {
                match data {
                    Ok(d) => records.extend(run_suite(suite, d, None)),
                    Err(e) => records.push(Record {
                        algebra: format!("random-{i}"),
                        instance: "-".into(),
                        outcome: Outcome::Inconclusive,
                        values: Value::Null,
                        note: format!("algebra could not be computed: {e}"),
                    }),
                }
            }
        }
        reports.push(Report { suite, records });
    }
    Ok(FullReport {
        seed,
        reports,
        diagnostics,
    })
}

fn run_suite(suite: Suite, d: &AlgebraData, entry: Option<&CorpusEntry>) -> Vec<Record> {
    match suite {
        Suite::Expectations => entry.map(|e| check_expectations(d, e)).unwrap_or_default(),
        Suite::Jorgensen => check_jorgensen(d),
        Suite::CmEqualsExt => check_cm_equals_ext(d),
        Suite::StandardRegular => vec![check_standard_regular(d)],
        Suite::Romer => check_romer(d),
        Suite::AuslanderBuchsbaum => check_auslander_buchsbaum(d),
        Suite::Euler => check_euler(d),
        Suite::Invariants => check_invariants(d),
    }
}

fn record(
    d: &AlgebraData,
    instance: &str,
    outcome: Outcome,
    values: Value,
    note: impl Into<String>,
) -> Record {
    Record {
        algebra: d.name.clone(),
        instance: instance.to_string(),
        outcome,
        values,
        note: note.into(),
    }
}

fn window_hint(d: &AlgebraData, needed: i64) -> String {
    format!(
        "not certified in window n_max = {}, D = {}; try --max-deg {} --max-hom {}",
        d.window.max_hom,
        d.window.max_deg,
        needed.max(d.window.max_deg + 1),
        d.window.max_hom + 1
    )
}

fn check_expectations(d: &AlgebraData, e: &CorpusEntry) -> Vec<Record> {
    let x = &e.expected;
    let src = |key: &str| e.source.get(key).cloned().unwrap_or_default();
    let mut out = Vec::new();
    let mut push = |name: &str, ok: bool, expected: Value, computed: Value, source: String| {
        let o = if ok { Outcome::Pass } else { Outcome::Fail };
        out.push(record(
            d,
            name,
            o,
            json!({ "expected": expected, "computed": computed }),
            source,
        ));
    };

    let (vd, vl) = match d.verdict.type_dl() {
        Some((a, b)) => (Some(a), Some(b)),
        None => (None, None),
    };
    push(
        "verdict",
        d.verdict.name() == x.verdict && vd == x.d && vl == x.l && d.standard == x.standard,
        json!({ "verdict": x.verdict, "d": x.d, "l": x.l, "standard": x.standard }),
        json!({ "verdict": d.verdict.name(), "d": vd, "l": vl, "standard": d.standard }),
        src("verdict"),
    );

    let linear = d.koszul.as_ref().is_some_and(|k| k.is_linear());
    let witness = match &d.koszul {
        Some(KoszulVerdict::NotKoszul { i, j }) => Some((*i, *j)),
        _ => None,
    };
    push(
        "koszul",
        linear == x.koszul && (x.koszul_witness.is_none() || witness == x.koszul_witness),
        json!({ "linear": x.koszul, "witness": x.koszul_witness }),
        json!({ "linear": linear, "witness": witness }),
        src("koszul"),
    );

    if let Some(k) = d.k() {
        let want: BTreeMap<(usize, i64), u64> = x
            .betti_k
            .iter()
            .map(|t| ((t[0] as usize, t[1]), t[2] as u64))
            .collect();
        push(
            "betti_k",
            k.betti.entries == want,
            json!(x.betti_k),
            json!(k
                .betti
                .entries
                .iter()
                .map(|(&(i, j), &b)| [i as i64, j, b as i64])
                .collect::<Vec<_>>()),
            src("betti_k"),
        );
    }

    let prefix: Vec<u64> = d.hilbert.iter().take(x.hilbert.len()).copied().collect();
    push(
        "hilbert",
        prefix == x.hilbert,
        json!(x.hilbert),
        json!(prefix),
        src("hilbert"),
    );

    match &d.cm_a {
        Some(v) => push(
            "cm_reg_a",
            v.certified() && v.value == ExtInt::Finite(x.cm_reg_a),
            json!(x.cm_reg_a),
            v.to_json_value(),
            src("cm_reg_a"),
        ),
        None => push(
            "cm_reg_a",
            false,
            json!(x.cm_reg_a),
            Value::Null,
            src("cm_reg_a"),
        ),
    }

    push(
        "ext_reg_k",
        d.ext_reg_k.value == ExtInt::Finite(x.ext_reg_k)
            && d.ext_reg_k.certified() == x.ext_reg_k_certified,
        json!({ "value": x.ext_reg_k, "certified": x.ext_reg_k_certified }),
        d.ext_reg_k.to_json_value(),
        src("ext_reg_k"),
    );
    out
}

fn cm_interval(i: &InstanceData) -> Option<Interval> {
    i.cm.as_ref().map(|c| c.value.interval())
}

fn check_jorgensen(d: &AlgebraData) -> Vec<Record> {
    let Some(cm_a) = &d.cm_a else {
        return vec![record(
            d,
            "-",
            Outcome::Inconclusive,
            d.classification_json(),
            "CM.reg A unavailable: the algebra is not classified AS-Gorenstein",
        )];
    };
    let ext_k = d.ext_reg_k.interval();
    let mut out = Vec::new();
    for i in &d.instances {
        if i.is_zero {
            out.push(record(
                d,
                &i.label,
                Outcome::Vacuous,
                i.inputs(),
                "zero module",
            ));
            continue;
        }
        let Some(cm) = cm_interval(i) else {
            out.push(record(
                d,
                &i.label,
                Outcome::Inconclusive,
                i.inputs(),
                "no CM.reg route applies",
            ));
            continue;
        };
        let e = i.ext_reg.interval();
        let mid = sub(e, cm);
        let lower = leq(neg(cm_a.interval()), mid);
        // for M = k both sides share Ext.reg k, so the bound reads CM.reg k >= 0
        let upper = if i.is_k {
            leq(point(0), cm)
        } else {
            leq(mid, ext_k)
        };
        let t = and(lower, upper);
        let note = match t {
            Truth::Yes => String::new(),
            Truth::No => "bound violated by certified values".into(),
            Truth::Unknown => {
                let mut open = Vec::new();
                for (name, v) in [
                    ("CM.reg A", Some(cm_a)),
                    ("Ext.reg k", Some(&d.ext_reg_k)),
                    ("Ext.reg M", Some(&i.ext_reg)),
                    ("CM.reg M", i.cm.as_ref().map(|c| &c.value)),
                ] {
                    if v.is_some_and(|v| !v.certified()) {
                        open.push(format!("{name} {v}", v = v.unwrap()));
                    }
                }
                format!(
                    "{}; {}",
                    open.join(", "),
                    window_hint(d, i.needed_max_deg.max(d.k_needed_max_deg))
                )
            }
        };
        out.push(record(
            d,
            &i.label,
            outcome(t),
            json!({
                "inputs": i.inputs(),
                "cm_reg_a": cm_a.to_json_value(),
                "ext_reg_k": d.ext_reg_k.to_json_value(),
                "ext_reg_m": i.ext_reg.to_json_value(),
                "cm_reg_m": i.cm.as_ref().map(|c| c.to_json_value()),
                "difference": iv_json(mid),
            }),
            note,
        ));
    }
    out
}

fn is_koszul_regular(d: &AlgebraData) -> bool {
    matches!(d.verdict, Verdict::Regular { .. }) && d.koszul.as_ref().is_some_and(|k| k.is_koszul())
}

fn check_cm_equals_ext(d: &AlgebraData) -> Vec<Record> {
    let values = |i: &InstanceData| {
        json!({
            "inputs": i.inputs(),
            "cm_reg": i.cm.as_ref().map(|c| c.to_json_value()),
            "ext_reg": i.ext_reg.to_json_value(),
        })
    };
    if is_koszul_regular(d) {
        return d
            .instances
            .iter()
            .map(|i| {
                if i.is_zero {
                    return record(d, &i.label, Outcome::Vacuous, i.inputs(), "zero module");
                }
                let t = match cm_interval(i) {
                    Some(cm) => eq(cm, i.ext_reg.interval()),
                    None => Truth::Unknown,
                };
                let note = match t {
                    Truth::Yes => String::new(),
                    Truth::No => {
                        "CM.reg differs from Ext.reg over a Koszul AS-regular algebra".into()
                    }
                    Truth::Unknown => window_hint(d, i.needed_max_deg),
                };
                record(d, &i.label, outcome(t), values(i), note)
            })
            .collect();
    }
    // otherwise some module must have CM.reg != Ext.reg; k is tried first
    let mut checked = Vec::new();
    for i in &d.instances {
        if i.is_zero {
            continue;
        }
        checked.push(i.label.clone());
        if let Some(cm) = cm_interval(i) {
            if eq(cm, i.ext_reg.interval()) == Truth::No {
                return vec![record(
                    d,
                    &i.label,
                    Outcome::Pass,
                    json!({ "classification": d.classification_json(), "witness": values(i) }),
                    format!(
                        "witness {}: CM.reg {} != Ext.reg {}",
                        i.label,
                        i.cm.as_ref().unwrap().value,
                        i.ext_reg
                    ),
                )];
            }
        }
    }
    vec![record(
        d,
        "-",
        Outcome::Inconclusive,
        json!({ "classification": d.classification_json(), "checked": checked }),
        "not certified Koszul AS-regular and no certified witness with CM.reg != Ext.reg was found",
    )]
}

fn check_standard_regular(d: &AlgebraData) -> Record {
    let linear = d.koszul.as_ref().is_some_and(|k| k.is_linear());
    let values = json!({
        "classification": d.classification_json(),
        "k_ranks": d.k_ranks,
        "hilbert": d.hilbert,
        "diagnostics": d.diagnostics,
    });
    let Some((dd, _)) = d.verdict.type_dl() else {
        return record(
            d,
            "k",
            Outcome::Vacuous,
            values,
            "not classified AS-Gorenstein",
        );
    };
    if !linear {
        return record(
            d,
            "k",
            Outcome::Vacuous,
            values,
            "resolution of k is not linear",
        );
    }
    if !d.standard {
        return record(d, "k", Outcome::Vacuous, values, "not standard (l != d)");
    }
    match d.verdict {
        Verdict::Regular { .. } => {
            record(d, "k", Outcome::Pass, values, "resolution of k terminated")
        }
        _ if d.k_ranks.get(dd + 1).is_some_and(|&r| r > 0) => record(
            d,
            "k",
            Outcome::Fail,
            values,
            format!("F_{} of the resolution of k is nonzero", dd + 1),
        ),
        _ => record(
            d,
            "k",
            Outcome::Inconclusive,
            values,
            window_hint(d, d.k_needed_max_deg),
        ),
    }
}

fn finite_pd(i: &InstanceData) -> Option<i64> {
    if i.is_zero || !i.pd_exact {
        return None;
    }
    i.pd.finite()
}

fn check_romer(d: &AlgebraData) -> Vec<Record> {
    let mut out = Vec::new();
    for i in d.instances.iter().filter(|i| finite_pd(i).is_some()) {
        let (Some(cm_a), Some(cm)) = (&d.cm_a, cm_interval(i)) else {
            out.push(record(
                d,
                &i.label,
                Outcome::Inconclusive,
                i.inputs(),
                "CM.reg unavailable",
            ));
            continue;
        };
        let lhs = sub(cm, cm_a.interval());
        let t = eq(lhs, i.ext_reg.interval());
        let note = match t {
            Truth::Yes => String::new(),
            Truth::No => "CM.reg M - CM.reg A != Ext.reg M".into(),
            Truth::Unknown => window_hint(d, i.needed_max_deg),
        };
        out.push(record(
            d,
            &i.label,
            outcome(t),
            json!({
                "inputs": i.inputs(),
                "pd": i.pd,
                "cm_reg_m": i.cm.as_ref().map(|c| c.to_json_value()),
                "cm_reg_a": cm_a.to_json_value(),
                "ext_reg_m": i.ext_reg.to_json_value(),
            }),
            note,
        ));
    }
    if out.is_empty() {
        out.push(record(
            d,
            "-",
            Outcome::Vacuous,
            Value::Null,
            "no sampled module has a terminated resolution",
        ));
    }
    out
}

fn check_auslander_buchsbaum(d: &AlgebraData) -> Vec<Record> {
    let mut out = Vec::new();
    for i in d.instances.iter() {
        let Some(pd) = finite_pd(i) else { continue };
        let t = eq(add(point(pd), i.depth.interval()), d.depth_a.interval());
        let note = match t {
            Truth::Yes => String::new(),
            Truth::No => "pd M + depth M != depth A".into(),
            Truth::Unknown => window_hint(d, i.needed_max_deg.max(d.k_needed_max_deg)),
        };
        out.push(record(
            d,
            &i.label,
            outcome(t),
            json!({
                "inputs": i.inputs(),
                "pd": pd,
                "depth_m": i.depth.to_json_value(),
                "depth_a": d.depth_a.to_json_value(),
            }),
            note,
        ));
    }
    if out.is_empty() {
        out.push(record(
            d,
            "-",
            Outcome::Vacuous,
            Value::Null,
            "no sampled module has a terminated resolution",
        ));
    }
    out
}

fn check_euler(d: &AlgebraData) -> Vec<Record> {
    d.instances
        .iter()
        .filter_map(|i| {
            let r = i.euler.as_ref()?;
            let values = json!({ "inputs": i.inputs(), "betti": i.betti.to_json_value() });
            Some(match r {
                Ok(()) => record(d, &i.label, Outcome::Pass, values, ""),
                Err(e) => record(d, &i.label, Outcome::Fail, values, e.clone()),
            })
        })
        .collect()
}

fn check_invariants(d: &AlgebraData) -> Vec<Record> {
    d.instances
        .iter()
        .map(|i| {
            let errs: Vec<String> = [&i.d_squared, &i.minimal]
                .iter()
                .filter_map(|r| r.as_ref().err().cloned())
                .collect();
            let (o, note) = if errs.is_empty() {
                (Outcome::Pass, String::new())
            } else {
                (Outcome::Fail, errs.join("; "))
            };
            record(
                d,
                &i.label,
                o,
                json!({ "inputs": i.inputs(), "betti": i.betti.to_json_value() }),
                note,
            )
        })
        .collect()
}
