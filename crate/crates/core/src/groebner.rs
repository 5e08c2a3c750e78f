//! Truncated noncommutative Gröbner bases of homogeneous two-sided ideals.
//!
//! Completion runs degree by degree. In degree `d` the candidates are the
//! input relations of degree `d` together with the S-polynomials of all
//! overlaps of degree `d`; after reduction by the (lower-degree) basis the
//! candidates are put in reduced echelon form, whose rows are exactly the new
//! basis elements. For homogeneous ideals everything of degree `<= d` is
//! final once degree `d` has been processed.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Field;
use crate::linalg::EchelonBasis;
use crate::parse::parse_poly_str;
use crate::poly::{FreeAlgebra, NcPolynomial};
use crate::presentation::{relations_over, Presentation};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("degree {degree} exceeds the certified degree {certified}")]
    OutsideWindow { degree: u32, certified: u32 },
    #[error("polynomial is not homogeneous")]
    Inhomogeneous,
    #[error("malformed cached basis: {0}")]
    Cache(String),
}

/// Hard limits on completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_elements: usize,
    pub max_degree: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_elements: 20_000,
            max_degree: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Obstruction {
    word: Word,
    left: usize,
    right: usize,
    overlap: usize,
}

#[derive(Debug, Clone)]
pub struct GroebnerBasis<F: Field> {
    free: FreeAlgebra<F>,
    elements: Vec<NcPolynomial<F>>,
    certified_degree: u32,
    complete: bool,
    budget_exhausted: bool,
    leads: HashMap<Word, usize>,
    lead_lengths: Vec<usize>,
}

impl<F: Field> GroebnerBasis<F> {
    fn from_parts(
        free: FreeAlgebra<F>,
        elements: Vec<NcPolynomial<F>>,
        certified_degree: u32,
        complete: bool,
        budget_exhausted: bool,
    ) -> Self {
        let mut leads = HashMap::new();
        let mut lead_lengths: Vec<usize> = Vec::new();
        for (i, e) in elements.iter().enumerate() {
            let w = e
                .leading_word()
                .expect("basis elements are nonzero")
                .clone();
            if !lead_lengths.contains(&w.len()) {
                lead_lengths.push(w.len());
            }
            leads.insert(w, i);
        }
        lead_lengths.sort_unstable();
        GroebnerBasis {
            free,
            elements,
            certified_degree,
            complete,
            budget_exhausted,
            leads,
            lead_lengths,
        }
    }

    pub fn free(&self) -> &FreeAlgebra<F> {
        &self.free
    }

    pub fn field(&self) -> &F {
        self.free.field()
    }

    pub fn elements(&self) -> &[NcPolynomial<F>] {
        &self.elements
    }

    pub fn certified_degree(&self) -> u32 {
        self.certified_degree
    }

    /// No obstruction remains at any degree: the basis is a full Gröbner basis.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn budget_exhausted(&self) -> bool {
        self.budget_exhausted
    }

    pub fn leading_words(&self) -> impl Iterator<Item = &Word> {
        self.elements.iter().map(|e| e.leading_word().unwrap())
    }

    pub fn max_element_degree(&self) -> u32 {
        self.leading_words()
            .map(|w| self.free.degree(w))
            .max()
            .unwrap_or(0)
    }

    /// Leftmost occurrence of a leading word in `w`: (position, element index).
    fn find_reducer(&self, w: &Word) -> Option<(usize, usize)> {
        let letters = w.letters();
        for pos in 0..letters.len() {
            let mut best: Option<usize> = None;
            for &len in &self.lead_lengths {
                if pos + len > letters.len() {
                    break;
                }
                if let Some(&i) = self.leads.get(&w.slice(pos, pos + len)) {
                    best = Some(best.map_or(i, |b: usize| b.min(i)));
                }
            }
            if let Some(i) = best {
                return Some((pos, i));
            }
        }
        None
    }

    pub fn is_reducible(&self, w: &Word) -> bool {
        self.find_reducer(w).is_some()
    }

    /// Full reduction without a window check.
    fn reduce(&self, p: &NcPolynomial<F>) -> NcPolynomial<F> {
        let f = self.field();
        let mut acc: BTreeMap<(u32, Word), F::Elem> = BTreeMap::new();
        for (w, c) in p.terms() {
            acc.insert((self.free.degree(w), w.clone()), c.clone());
        }
        let mut out = Vec::new();
        while let Some(((deg, w), c)) = acc.pop_last() {
            if f.is_zero(&c) {
                continue;
            }
            match self.find_reducer(&w) {
                None => out.push((w, c)),
                Some((pos, idx)) => {
                    let g = &self.elements[idx];
                    let len = g.leading_word().unwrap().len();
                    let left = w.slice(0, pos);
                    let right = w.slice(pos + len, w.len());
                    for (tw, tc) in &g.terms()[1..] {
                        let nw = left.concat(tw).concat(&right);
                        let nd = self.free.degree(&nw);
                        let delta = f.neg(&f.mul(&c, tc));
                        let e = acc.entry((nd, nw)).or_insert_with(|| f.zero());
                        *e = f.add(e, &delta);
                    }
                    let _ = deg;
                }
            }
        }
        // `out` is already in decreasing order
        self.free.from_terms(out)
    }

    /// Normal form modulo the ideal; requires the input degree to lie in the
    /// certified window.
    pub fn normal_form(&self, p: &NcPolynomial<F>) -> Result<NcPolynomial<F>, GroebnerError> {
        let top = p
            .terms()
            .iter()
            .map(|(w, _)| self.free.degree(w))
            .max()
            .unwrap_or(0);
        if top > self.certified_degree && !self.complete {
            return Err(GroebnerError::OutsideWindow {
                degree: top,
                certified: self.certified_degree,
            });
        }
        Ok(self.reduce(p))
    }

    /// Degree-`d` words with no leading word as a factor, in deglex order.
    pub fn monomial_basis(&self, d: u32) -> Result<Vec<Word>, GroebnerError> {
        if d > self.certified_degree && !self.complete {
            return Err(GroebnerError::OutsideWindow {
                degree: d,
                certified: self.certified_degree,
            });
        }
        Ok(self.standard_words(d))
    }

    fn standard_words(&self, d: u32) -> Vec<Word> {
        // grow words letter by letter; standard words are closed under taking factors,
        // so it suffices to test suffixes ending at the new letter
        let weights = self.free.order().weights().to_vec();
        let mut by_degree: Vec<Vec<Word>> = vec![Vec::new(); d as usize + 1];
        by_degree[0].push(Word::empty());
        for deg in 1..=d as usize {
            let mut cur = Vec::new();
            for (g, &wg) in weights.iter().enumerate() {
                let wg = wg as usize;
                if wg > deg {
                    continue;
                }
                for prefix in &by_degree[deg - wg] {
                    let mut letters: Vec<usize> =
                        prefix.letters().iter().map(|&l| l as usize).collect();
                    letters.push(g);
                    let w = Word::from_letters(&letters);
                    if !self.has_lead_suffix(&w) {
                        cur.push(w);
                    }
                }
            }
            cur.sort_by(|a, b| self.free.compare(a, b));
            by_degree[deg] = cur;
        }
        by_degree.pop().unwrap()
    }

    fn has_lead_suffix(&self, w: &Word) -> bool {
        let n = w.len();
        self.lead_lengths
            .iter()
            .take_while(|&&l| l <= n)
            .any(|&l| self.leads.contains_key(&w.slice(n - l, n)))
    }

    /// `dim A_i` for `0 <= i <= max_degree`.
    pub fn hilbert_function(
        &self,
        max_degree: u32,
    ) -> Result<crate::graded::GradedDims, GroebnerError> {
        let mut dims = crate::graded::GradedDims::new(0, max_degree as i64);
        for i in 0..=max_degree {
            dims.set(i as i64, self.monomial_basis(i)?.len() as u64);
        }
        Ok(dims)
    }

    pub fn to_json(&self) -> GroebnerJson {
        GroebnerJson {
            schema: 1,
            field: self.field().spec(),
            generators: self.free.generators().to_vec(),
            elements: self.elements.iter().map(|e| self.free.format(e)).collect(),
            certified_degree: self.certified_degree,
            complete: self.complete,
            budget_exhausted: self.budget_exhausted,
        }
    }

    pub fn from_json(free: FreeAlgebra<F>, j: &GroebnerJson) -> Result<Self, GroebnerError> {
        if j.field != free.field().spec() || j.generators != free.generators() {
            return Err(GroebnerError::Cache("field or generators differ".into()));
        }
        let names: HashMap<String, usize> = free
            .generators()
            .iter()
            .enumerate()
            .map(|(i, g)| (g.name.clone(), i))
            .collect();
        let mut elements = Vec::new();
        for e in &j.elements {
            let terms =
                parse_poly_str(e, &names).map_err(|e| GroebnerError::Cache(e.to_string()))?;
            let mut conv = Vec::new();
            for (w, c) in terms {
                conv.push((
                    w,
                    free.field()
                        .from_rational(&c)
                        .map_err(|e| GroebnerError::Cache(e.to_string()))?,
                ));
            }
            elements.push(free.from_terms(conv));
        }
        Ok(GroebnerBasis::from_parts(
            free,
            elements,
            j.certified_degree,
            j.complete,
            j.budget_exhausted,
        ))
    }
}

/// Serialized form of a Gröbner basis (cache format).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerJson {
    pub schema: u32,
    pub field: crate::field::FieldSpec,
    pub generators: Vec<crate::word::Generator>,
    pub elements: Vec<String>,
    pub certified_degree: u32,
    pub complete: bool,
    pub budget_exhausted: bool,
}

fn overlaps<F: Field>(
    free: &FreeAlgebra<F>,
    elements: &[NcPolynomial<F>],
    a: usize,
    b: usize,
    out: &mut BTreeMap<u32, Vec<Obstruction>>,
) {
    let u = elements[a].leading_word().unwrap();
    let v = elements[b].leading_word().unwrap();
    let (lu, lv) = (u.letters(), v.letters());
    for k in 1..lu.len().min(lv.len()) {
        if lu[lu.len() - k..] == lv[..k] {
            let word = u.concat(&v.slice(k, v.len()));
            out.entry(free.degree(&word))
                .or_default()
                .push(Obstruction {
                    word,
                    left: a,
                    right: b,
                    overlap: k,
                });
        }
    }
}

fn s_polynomial<F: Field>(
    free: &FreeAlgebra<F>,
    elements: &[NcPolynomial<F>],
    o: &Obstruction,
) -> NcPolynomial<F> {
    let f = &elements[o.left];
    let g = &elements[o.right];
    let u = f.leading_word().unwrap();
    let v = g.leading_word().unwrap();
    let tail = v.slice(o.overlap, v.len());
    let head = u.slice(0, u.len() - o.overlap);
    free.sub(
        &free.sandwich(&Word::empty(), f, &tail),
        &free.sandwich(&head, g, &Word::empty()),
    )
}

/// Runs overlap completion through degree `max_degree`.
pub fn groebner_truncated<F: Field>(
    free: &FreeAlgebra<F>,
    relations: &[NcPolynomial<F>],
    max_degree: u32,
    budget: &Budget,
) -> Result<GroebnerBasis<F>, GroebnerError> {
    let mut rels: BTreeMap<u32, Vec<NcPolynomial<F>>> = BTreeMap::new();
    for r in relations {
        if r.is_zero() {
            continue;
        }
        let d = free
            .homogeneous_degree(r)
            .ok_or(GroebnerError::Inhomogeneous)?;
        rels.entry(d).or_default().push(r.clone());
    }
    let target = max_degree.min(budget.max_degree);
    let mut basis = GroebnerBasis::from_parts(free.clone(), Vec::new(), 0, false, false);
    let mut queue: BTreeMap<u32, Vec<Obstruction>> = BTreeMap::new();
    let mut exhausted = false;
    let mut certified = 0;

    for d in 1..=target {
        let mut cands: Vec<NcPolynomial<F>> = rels.get(&d).cloned().unwrap_or_default();
        if let Some(mut obs) = queue.remove(&d) {
            obs.sort_by(|a, b| free.compare(&a.word, &b.word).then_with(|| a.cmp(b)));
            cands.extend(obs.iter().map(|o| s_polynomial(free, &basis.elements, o)));
        }
        let reduced: Vec<NcPolynomial<F>> = cands
            .iter()
            .map(|c| basis.reduce(c))
            .filter(|c| !c.is_zero())
            .collect();
        let new = echelonize(free, &reduced);
        if basis.elements.len() + new.len() > budget.max_elements {
            exhausted = true;
            break;
        }
        let start = basis.elements.len();
        let mut elements = std::mem::take(&mut basis.elements);
        elements.extend(new);
        for n in start..elements.len() {
            for m in 0..=n {
                overlaps(free, &elements, n, m, &mut queue);
                if m != n {
                    overlaps(free, &elements, m, n, &mut queue);
                }
            }
        }
        basis = GroebnerBasis::from_parts(free.clone(), elements, d, false, false);
        certified = d;
    }

    let pending_obstructions = queue.keys().any(|&d| d > certified);
    let pending_relations = rels.keys().any(|&d| d > certified);
    let complete = !exhausted && !pending_obstructions && !pending_relations;
    Ok(GroebnerBasis::from_parts(
        free.clone(),
        basis.elements,
        certified,
        complete,
        exhausted,
    ))
}

/// Reduced echelon form of same-degree polynomials; rows become monic basis elements
/// sorted by increasing leading word.
fn echelonize<F: Field>(free: &FreeAlgebra<F>, polys: &[NcPolynomial<F>]) -> Vec<NcPolynomial<F>> {
    if polys.is_empty() {
        return Vec::new();
    }
    let mut words: Vec<Word> = polys
        .iter()
        .flat_map(|p| p.terms().iter().map(|(w, _)| w.clone()))
        .collect();
    words.sort_by(|a, b| free.compare(b, a));
    words.dedup();
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let f = free.field();
    let mut e = EchelonBasis::new(words.len());
    for p in polys {
        let mut v: Vec<(usize, F::Elem)> = p
            .terms()
            .iter()
            .map(|(w, c)| (index[w], c.clone()))
            .collect();
        v.sort_by_key(|(i, _)| *i);
        e.insert(f, &v);
    }
    let mut out: Vec<NcPolynomial<F>> = e
        .into_reduced(f)
        .into_iter()
        .map(|row| free.from_terms(row.into_iter().map(|(i, c)| (words[i].clone(), c))))
        .collect();
    out.sort_by(|a, b| free.compare(a.leading_word().unwrap(), b.leading_word().unwrap()));
    out
}

/// Convenience wrapper over a parsed presentation.
pub fn groebner_for<F: Field>(
    pres: &Presentation,
    field: F,
    max_degree: u32,
    budget: &Budget,
) -> Result<GroebnerBasis<F>, GroebnerError> {
    let free = FreeAlgebra::new(field, pres.generators.clone());
    let rels = relations_over(pres, &free);
    groebner_truncated(&free, &rels, max_degree, budget)
}
