//! Graded free modules, finitely presented modules and their graded pieces.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::GradedAlgebra;
use crate::field::Field;
use crate::linalg::{EchelonBasis, SparseVec};
use crate::parse::{parse_poly, Lexer, ParseError, Tok};
use crate::poly::NcPolynomial;

/// `⊕_t A(-s_t)`: basis element `t` sits in internal degree `s_t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeModule {
    pub shifts: Vec<i64>,
}

impl FreeModule {
    pub fn new(shifts: Vec<i64>) -> Self {
        FreeModule { shifts }
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn max_shift(&self) -> Option<i64> {
        self.shifts.iter().copied().max()
    }

    pub fn min_shift(&self) -> Option<i64> {
        self.shifts.iter().copied().min()
    }
}

/// Coordinates of the degree-`n` part of a free module: generator `t`
/// contributes the monomial basis of `A_{n - s_t}` starting at `offsets[t]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub degree: i64,
    pub offsets: Vec<usize>,
    pub dims: Vec<usize>,
    pub total: usize,
}

impl Layout {
    pub fn new<F: Field>(alg: &GradedAlgebra<F>, shifts: &[i64], n: i64) -> Self {
        let mut offsets = Vec::with_capacity(shifts.len());
        let mut dims = Vec::with_capacity(shifts.len());
        let mut total = 0;
        for &s in shifts {
            offsets.push(total);
            let d = alg.dim(n - s);
            dims.push(d);
            total += d;
        }
        Layout {
            degree: n,
            offsets,
            dims,
            total,
        }
    }

    /// (generator, local index) of a global coordinate.
    pub fn locate(&self, pos: usize) -> (usize, usize) {
        let t = match self.offsets.binary_search(&pos) {
            Ok(mut t) => {
                // skip generators whose block is empty
                while self.dims[t] == 0 {
                    t += 1;
                }
                t
            }
            Err(t) => t - 1,
        };
        (t, pos - self.offsets[t])
    }
}

/// Layouts of a free module in every degree of a window, with left
/// multiplication by generators.
#[derive(Debug, Clone)]
pub struct GradedFree<F: Field> {
    alg: Arc<GradedAlgebra<F>>,
    pub shifts: Vec<i64>,
    layouts: BTreeMap<i64, Layout>,
}

impl<F: Field> GradedFree<F> {
    pub fn new(alg: Arc<GradedAlgebra<F>>, shifts: Vec<i64>) -> Self {
        GradedFree {
            alg,
            shifts,
            layouts: BTreeMap::new(),
        }
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra<F>> {
        &self.alg
    }

    pub fn layout(&mut self, n: i64) -> &Layout {
        let (alg, shifts) = (&self.alg, &self.shifts);
        self.layouts
            .entry(n)
            .or_insert_with(|| Layout::new(alg, shifts, n))
    }

    pub fn layout_ref(&self, n: i64) -> Layout {
        self.layouts
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Layout::new(&self.alg, &self.shifts, n))
    }

    pub fn dim(&mut self, n: i64) -> usize {
        self.layout(n).total
    }

    /// `x_g * v` for `v` in degree `n`.
    pub fn left_gen(&mut self, g: usize, n: i64, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let dg = self.alg.generator_degree(g) as i64;
        let src = self.layout(n).clone();
        let dst = self.layout(n + dg).clone();
        left_gen_free(&self.alg, &self.shifts, &src, &dst, g, v)
    }

    /// Coordinates of a column of homogeneous algebra elements (one per generator)
    /// in the degree-`n` layout.
    pub fn vector_from_entries(
        &mut self,
        n: i64,
        entries: &[NcPolynomial<F>],
    ) -> SparseVec<F::Elem> {
        let layout = self.layout(n).clone();
        let alg = self.alg.clone();
        let mut out = Vec::new();
        for (t, p) in entries.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let e = alg.element(p).expect("entry within algebra window");
            for (i, c) in e.coords {
                out.push((layout.offsets[t] + i, c));
            }
        }
        out.sort_by_key(|(i, _)| *i);
        out
    }
}

pub(crate) fn left_gen_free<F: Field>(
    alg: &GradedAlgebra<F>,
    shifts: &[i64],
    src: &Layout,
    dst: &Layout,
    g: usize,
    v: &[(usize, F::Elem)],
) -> SparseVec<F::Elem> {
    let f = alg.field();
    let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
    for (pos, c) in v {
        let (t, i) = src.locate(*pos);
        let m = (src.degree - shifts[t]) as u32;
        for (j, a) in alg.left_gen_basis(g, m, i) {
            let k = dst.offsets[t] + j;
            let e = acc.entry(k).or_insert_with(|| f.zero());
            *e = f.add(e, &f.mul(c, a));
        }
    }
    acc.into_iter().filter(|(_, c)| !f.is_zero(c)).collect()
}

/// A relation: a homogeneous element of the cover, one algebra entry per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationColumn<F: Field> {
    pub degree: i64,
    pub entries: Vec<NcPolynomial<F>>,
}

/// `M = cover / (submodule generated by the relation columns)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulePresentation<F: Field> {
    pub cover: FreeModule,
    pub relations: Vec<RelationColumn<F>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomModuleParams {
    pub num_gens: usize,
    /// Degrees of the cover generators; cycled if shorter than `num_gens`.
    pub gen_degrees: Vec<i64>,
    pub num_rels: usize,
    /// Internal degree of every relation column.
    pub rel_degree: i64,
}

impl<F: Field> ModulePresentation<F> {
    pub fn free(shifts: Vec<i64>) -> Self {
        ModulePresentation {
            cover: FreeModule::new(shifts),
            relations: Vec::new(),
        }
    }

    /// `k = A / m`: cover `A`, one relation column per algebra generator.
    pub fn trivial(alg: &GradedAlgebra<F>) -> Self {
        let free = alg.free();
        let relations = (0..alg.num_generators())
            .map(|g| RelationColumn {
                degree: alg.generator_degree(g) as i64,
                entries: vec![free.generator(g)],
            })
            .collect();
        ModulePresentation {
            cover: FreeModule::new(vec![0]),
            relations,
        }
    }

    /// `A / (A f_1 + ... + A f_r)` for homogeneous elements `f_i`.
    pub fn cyclic(alg: &GradedAlgebra<F>, elements: &[NcPolynomial<F>]) -> Self {
        let relations = elements
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| RelationColumn {
                degree: alg
                    .free()
                    .homogeneous_degree(p)
                    .expect("homogeneous element") as i64,
                entries: vec![p.clone()],
            })
            .collect();
        ModulePresentation {
            cover: FreeModule::new(vec![0]),
            relations,
        }
    }

    pub fn rank(&self) -> usize {
        self.cover.rank()
    }

    pub fn is_zero_module(&self) -> bool {
        self.cover.rank() == 0
    }

    /// Highest internal degree appearing in the presentation data.
    pub fn top_presentation_degree(&self) -> i64 {
        self.relations
            .iter()
            .map(|r| r.degree)
            .chain(self.cover.shifts.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Removes redundant generators: whenever a relation has a nonzero scalar
    /// entry, that generator is eliminated from the presentation.
    pub fn minimalize(&self, alg: &GradedAlgebra<F>) -> Self {
        let free = alg.free();
        let f = alg.field();
        let mut cur = self.clone();
        loop {
            let mut hit = None;
            'search: for (c, col) in cur.relations.iter().enumerate() {
                for (t, e) in col.entries.iter().enumerate() {
                    if cur.cover.shifts[t] == col.degree {
                        if let Some((w, lambda)) = e.leading() {
                            if w.is_empty() && !f.is_zero(lambda) {
                                hit = Some((c, t, lambda.clone()));
                                break 'search;
                            }
                        }
                    }
                }
            }
            let Some((c, t, lambda)) = hit else { break };
            let pivot = cur.relations[c].clone();
            let inv = f.inv(&lambda);
            let mut relations = Vec::new();
            for (k, col) in cur.relations.iter().enumerate() {
                if k == c {
                    continue;
                }
                // col - col[t] * lambda^-1 * pivot
                let factor = free.scale(&col.entries[t], &inv);
                let mut entries = Vec::new();
                for (u, e) in col.entries.iter().enumerate() {
                    if u == t {
                        continue;
                    }
                    let prod = free.mul(&factor, &pivot.entries[u]);
                    let v = free.sub(e, &prod);
                    entries.push(alg.groebner().normal_form(&v).expect("within window"));
                }
                if entries.iter().any(|e| !e.is_zero()) {
                    relations.push(RelationColumn {
                        degree: col.degree,
                        entries,
                    });
                }
            }
            let mut shifts = cur.cover.shifts.clone();
            shifts.remove(t);
            cur = ModulePresentation {
                cover: FreeModule::new(shifts),
                relations,
            };
        }
        cur
    }

    /// Deterministic pseudo-random homogeneous presentation.
    pub fn random(alg: &GradedAlgebra<F>, seed: u64, params: &RandomModuleParams) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shifts: Vec<i64> = (0..params.num_gens)
            .map(|i| params.gen_degrees[i % params.gen_degrees.len().max(1)])
            .collect();
        let mut relations = Vec::new();
        for _ in 0..params.num_rels {
            let entries: Vec<NcPolynomial<F>> = shifts
                .iter()
                .map(|&s| {
                    let d = params.rel_degree - s;
                    if d <= 0 || d > alg.max_degree() as i64 {
                        return NcPolynomial::zero();
                    }
                    random_element(alg, d as u32, &mut rng)
                })
                .collect();
            if entries.iter().any(|e| !e.is_zero()) {
                relations.push(RelationColumn {
                    degree: params.rel_degree,
                    entries,
                });
            }
        }
        ModulePresentation {
            cover: FreeModule::new(shifts),
            relations,
        }
    }

    pub fn parse(src: &str, alg: &GradedAlgebra<F>) -> Result<Self, ParseError> {
        parse_module(src, alg).map(|(m, _)| m)
    }

    pub fn to_text(&self, alg: &GradedAlgebra<F>) -> String {
        let free = alg.free();
        let mut s = String::from("cover");
        for sh in &self.cover.shifts {
            s.push_str(&format!(" {sh}"));
        }
        s.push_str(";\n");
        for (c, col) in self.relations.iter().enumerate() {
            let entries: Vec<String> = col.entries.iter().map(|e| free.format(e)).collect();
            s.push_str(&format!("rel {c}: {};\n", entries.join(", ")));
        }
        s
    }
}

/// A uniformly random combination of the monomial basis of `A_d`
/// with nonzero coefficients drawn from a small range.
pub fn random_element<F: Field>(
    alg: &GradedAlgebra<F>,
    d: u32,
    rng: &mut ChaCha8Rng,
) -> NcPolynomial<F> {
    let f = alg.field();
    let basis = alg.basis(d);
    let terms: Vec<_> = basis
        .iter()
        .map(|w| {
            let c: i64 = rng.gen_range(-9..=9);
            (w.clone(), f.from_i64(c))
        })
        .collect();
    alg.free().from_terms(terms)
}

/// Removes `algebra <path>;` lines from a module file, returning the rest
/// (line numbers preserved) and the last path given.
pub fn split_algebra_line(src: &str) -> (String, Option<String>) {
    // paths are not tokens, so this is done before lexing
    let mut algebra_path = None;
    let mut body = String::new();
    for line in src.lines() {
        let t = line.trim_start();
        if let Some(rest) = t.strip_prefix("algebra ") {
            let p = rest
                .split('#')
                .next()
                .unwrap_or("")
                .trim()
                .trim_end_matches(';')
                .trim();
            algebra_path = Some(p.to_string());
            body.push('\n');
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    (body, algebra_path)
}

/// Parses a module file. Returns the module and the optional `algebra` path.
pub fn parse_module<F: Field>(
    src: &str,
    alg: &GradedAlgebra<F>,
) -> Result<(ModulePresentation<F>, Option<String>), ParseError> {
    let (body, algebra_path) = split_algebra_line(src);
    let names: HashMap<String, usize> = alg
        .free()
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| (g.name.clone(), i))
        .collect();
    let free = alg.free();
    let f = alg.field();
    let mut lx = Lexer::new(&body)?;
    let mut shifts: Option<Vec<i64>> = None;
    let mut cols: BTreeMap<i64, Vec<NcPolynomial<F>>> = BTreeMap::new();
    loop {
        match lx.peek().clone() {
            Tok::Eof => break,
            Tok::Ident(kw) if kw == "cover" => {
                lx.next();
                let mut v = Vec::new();
                loop {
                    let neg = lx.eat(&Tok::Minus);
                    match lx.peek() {
                        Tok::Int(_) => {
                            let n = lx.integer("shift")?.to_i64().unwrap_or(i64::MAX);
                            v.push(if neg { -n } else { n });
                        }
                        _ if neg => return lx.error("expected shift after `-`"),
                        _ => break,
                    }
                }
                lx.expect(&Tok::Semi, "`;` after cover")?;
                shifts = Some(v);
            }
            Tok::Ident(kw) if kw == "rel" => {
                lx.next();
                let label = lx.integer("relation label")?.to_i64().unwrap_or(i64::MAX);
                lx.expect(&Tok::Colon, "`:` after relation label")?;
                let mut entries = Vec::new();
                loop {
                    let raw = parse_poly(&mut lx, &names)?;
                    let mut terms = Vec::new();
                    for (w, c) in raw {
                        terms.push((w, f.from_rational(&c)?));
                    }
                    entries.push(free.from_terms(terms));
                    if !lx.eat(&Tok::Comma) {
                        break;
                    }
                }
                lx.expect(&Tok::Semi, "`;` after relation")?;
                if cols.insert(label, entries).is_some() {
                    return Err(ParseError::Module {
                        column: label as usize,
                        msg: "duplicate label".into(),
                    });
                }
            }
            _ => return lx.error("expected `cover` or `rel`"),
        }
    }
    let shifts = match shifts {
        Some(s) => s,
        None => return lx.error("missing `cover` statement"),
    };
    let mut relations = Vec::new();
    for (label, entries) in cols {
        let column = label as usize;
        if entries.len() != shifts.len() {
            return Err(ParseError::Module {
                column,
                msg: format!(
                    "has {} entries, cover has rank {}",
                    entries.len(),
                    shifts.len()
                ),
            });
        }
        let mut degree: Option<i64> = None;
        let mut reduced = Vec::new();
        for (t, e) in entries.iter().enumerate() {
            if e.is_zero() {
                reduced.push(NcPolynomial::zero());
                continue;
            }
            let d = free.homogeneous_degree(e).ok_or(ParseError::Module {
                column,
                msg: format!("entry {t} is not homogeneous"),
            })? as i64
                + shifts[t];
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => {
                    return Err(ParseError::Module {
                        column,
                        msg: "entries have inconsistent degrees".into(),
                    })
                }
                _ => {}
            }
            let nf = alg
                .groebner()
                .normal_form(e)
                .map_err(|err| ParseError::Module {
                    column,
                    msg: err.to_string(),
                })?;
            reduced.push(nf);
        }
        if let Some(degree) = degree {
            if reduced.iter().any(|e| !e.is_zero()) {
                relations.push(RelationColumn {
                    degree,
                    entries: reduced,
                });
            }
        }
    }
    Ok((
        ModulePresentation {
            cover: FreeModule::new(shifts),
            relations,
        },
        algebra_path,
    ))
}

/// A graded left module known in the degree window `[lo, hi]`, with the
/// action of the algebra generators.
pub trait LeftModule<F: Field> {
    fn algebra(&self) -> &GradedAlgebra<F>;
    fn lo(&self) -> i64;
    fn hi(&self) -> i64;
    fn dim(&self, n: i64) -> usize;
    /// A degree above which the module is known to vanish.
    fn finite_top(&self) -> Option<i64> {
        None
    }
    /// `x_g * v` for `v` in degree `n`; only valid when `n + deg g <= hi`.
    fn act_gen(&self, g: usize, n: i64, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem>;

    /// `w * v` for a word `w`.
    fn act_word(
        &self,
        w: &crate::word::Word,
        n: i64,
        v: &[(usize, F::Elem)],
    ) -> SparseVec<F::Elem> {
        let mut cur = v.to_vec();
        let mut deg = n;
        for &g in w.letters().iter().rev() {
            if cur.is_empty() {
                return cur;
            }
            cur = self.act_gen(g as usize, deg, &cur);
            deg += self.algebra().generator_degree(g as usize) as i64;
        }
        cur
    }

    /// `a * v` for an algebra element `a` given in coordinates of `A_d`.
    fn act_element(
        &self,
        d: u32,
        a: &[(usize, F::Elem)],
        n: i64,
        v: &[(usize, F::Elem)],
    ) -> SparseVec<F::Elem> {
        let f = self.algebra().field().clone();
        let basis = self.algebra().basis(d).to_vec();
        let mut acc: SparseVec<F::Elem> = Vec::new();
        for (i, c) in a {
            let wv = self.act_word(&basis[*i], n, v);
            acc = crate::linalg::axpy(&f, &acc, c, &wv);
        }
        acc
    }
}

/// The graded pieces of a finitely presented module `M = F_0 / N`,
/// `M_n` realized as the complement of the pivot columns of `N_n`.
#[derive(Debug)]
pub struct QuotientModule<F: Field> {
    alg: Arc<GradedAlgebra<F>>,
    shifts: Vec<i64>,
    lo: i64,
    hi: i64,
    layouts: BTreeMap<i64, Layout>,
    /// Reduced echelon rows of `N_n`, keyed by pivot column.
    sub: BTreeMap<i64, (Vec<Option<usize>>, Vec<SparseVec<F::Elem>>)>,
    /// Free (non-pivot) columns of `F_n`; their order defines the basis of `M_n`.
    free_cols: BTreeMap<i64, Vec<usize>>,
    free_index: BTreeMap<i64, HashMap<usize, usize>>,
    top: Option<i64>,
}

impl<F: Field> QuotientModule<F> {
    /// Builds `M_n` for all `n` from the lowest cover degree up to `hi`.
    pub fn new(alg: Arc<GradedAlgebra<F>>, m: &ModulePresentation<F>, hi: i64) -> Self {
        let f = alg.field().clone();
        let shifts = m.cover.shifts.clone();
        let lo = m.cover.min_shift().unwrap_or(0);
        let mut free = GradedFree::new(alg.clone(), shifts.clone());
        let mut spans: BTreeMap<i64, Vec<SparseVec<F::Elem>>> = BTreeMap::new();
        let mut out = QuotientModule {
            alg: alg.clone(),
            shifts: shifts.clone(),
            lo,
            hi,
            layouts: BTreeMap::new(),
            sub: BTreeMap::new(),
            free_cols: BTreeMap::new(),
            free_index: BTreeMap::new(),
            top: None,
        };
        for n in lo..=hi {
            let dim = free.dim(n);
            let mut e = EchelonBasis::new(dim);
            for g in 0..alg.num_generators() {
                let dg = alg.generator_degree(g) as i64;
                if let Some(lower) = spans.get(&(n - dg)) {
                    for v in lower.clone() {
                        let w = free.left_gen(g, n - dg, &v);
                        e.insert(&f, &w);
                    }
                }
            }
            for col in m.relations.iter().filter(|c| c.degree == n) {
                let v = free.vector_from_entries(n, &col.entries);
                e.insert(&f, &v);
            }
            let rows = e.into_reduced(&f);
            let mut pivot = vec![None; dim];
            for (r, row) in rows.iter().enumerate() {
                pivot[row[0].0] = Some(r);
            }
            let free_cols: Vec<usize> = (0..dim).filter(|&c| pivot[c].is_none()).collect();
            out.free_index.insert(
                n,
                free_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect(),
            );
            out.free_cols.insert(n, free_cols);
            out.layouts.insert(n, free.layout(n).clone());
            spans.insert(n, rows.clone());
            out.sub.insert(n, (pivot, rows));
        }
        out.top = out.detect_top(m);
        out
    }

    /// `M` is generated in degrees `<= max shift`, so a run of `max deg x_g`
    /// consecutive zero pieces above it forces all higher pieces to vanish.
    fn detect_top(&self, m: &ModulePresentation<F>) -> Option<i64> {
        let Some(top_gen) = m.cover.max_shift() else {
            return Some(self.lo - 1);
        };
        let run = (0..self.alg.num_generators())
            .map(|g| self.alg.generator_degree(g) as i64)
            .max()
            .unwrap_or(1);
        let mut zeros = 0;
        for n in (top_gen + 1).max(self.lo)..=self.hi {
            if self.dim(n) == 0 {
                zeros += 1;
                if zeros >= run {
                    return Some(
                        (self.lo..n)
                            .rev()
                            .find(|&d| self.dim(d) > 0)
                            .unwrap_or(self.lo - 1),
                    );
                }
            } else {
                zeros = 0;
            }
        }
        None
    }

    pub fn hilbert_function(&self) -> crate::graded::GradedDims {
        crate::graded::GradedDims::from_map(
            self.lo,
            self.hi,
            (self.lo..=self.hi).map(|n| (n, self.dim(n) as u64)),
        )
    }

    /// Reduces a cover vector of degree `n` modulo `N_n` into `M_n` coordinates.
    pub fn project(&self, n: i64, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let f = self.alg.field();
        let (pivot, rows) = &self.sub[&n];
        let dim = self.layouts[&n].total;
        let mut acc = crate::linalg::to_dense(f, v, dim);
        for c in 0..dim {
            if f.is_zero(&acc[c]) {
                continue;
            }
            if let Some(r) = pivot[c] {
                let factor = acc[c].clone();
                for (j, x) in &rows[r] {
                    acc[*j] = f.sub_mul(&acc[*j], &factor, x);
                }
            }
        }
        let idx = &self.free_index[&n];
        acc.into_iter()
            .enumerate()
            .filter(|(_, c)| !f.is_zero(c))
            .map(|(j, c)| (idx[&j], c))
            .collect()
    }

    /// Lifts `M_n` coordinates back to cover coordinates.
    pub fn lift(&self, n: i64, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let cols = &self.free_cols[&n];
        v.iter().map(|(i, c)| (cols[*i], c.clone())).collect()
    }

    /// Image of cover generator `t` (as an element of `M_{s_t}`).
    pub fn generator_image(&self, t: usize) -> SparseVec<F::Elem> {
        let n = self.shifts[t];
        if n > self.hi {
            return Vec::new();
        }
        let layout = &self.layouts[&n];
        let v = vec![(layout.offsets[t], self.alg.field().one())];
        self.project(n, &v)
    }
}

impl<F: Field> LeftModule<F> for QuotientModule<F> {
    fn algebra(&self) -> &GradedAlgebra<F> {
        &self.alg
    }
    fn lo(&self) -> i64 {
        self.lo
    }
    fn hi(&self) -> i64 {
        self.hi
    }
    fn dim(&self, n: i64) -> usize {
        self.free_cols.get(&n).map_or(0, |c| c.len())
    }
    fn finite_top(&self) -> Option<i64> {
        self.top
    }
    fn act_gen(&self, g: usize, n: i64, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let dg = self.alg.generator_degree(g) as i64;
        if v.is_empty() || n < self.lo {
            return Vec::new();
        }
        assert!(n + dg <= self.hi, "action leaves the module window");
        let lifted = self.lift(n, v);
        let w = left_gen_free(
            &self.alg,
            &self.shifts,
            &self.layouts[&n],
            &self.layouts[&(n + dg)],
            g,
            &lifted,
        );
        self.project(n + dg, &w)
    }
}
