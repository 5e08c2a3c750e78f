//! Minimal graded free resolutions by degreewise syzygies, Betti tables,
//! and Ext groups from Hom complexes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::GradedAlgebra;
use crate::field::Field;
use crate::graded::{ExtInt, GradedDims};
use crate::linalg::{relations_among, to_sparse, EchelonBasis, SparseVec};
use crate::module::{left_gen_free, Layout, LeftModule, ModulePresentation, QuotientModule};
use crate::poly::NcPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("algebra known to degree {available}, resolution window needs degree {needed}")]
    Window { needed: i64, available: i64 },
}

/// One free module `F_i` of the resolution together with its differential.
#[derive(Debug, Clone)]
pub struct Step<F: Field> {
    pub shifts: Vec<i64>,
    /// `d(e_t)` in coordinates of the previous module at degree `s_t`
    /// (of `M` itself for step 0).
    pub images: Vec<SparseVec<F::Elem>>,
    layouts: BTreeMap<i64, Layout>,
    /// Images of every basis element of `F_{i,n}`.
    columns: BTreeMap<i64, Vec<SparseVec<F::Elem>>>,
    /// Reduced echelon basis of `ker(d_i)` in degree `n`.
    kernel: BTreeMap<i64, Vec<SparseVec<F::Elem>>>,
    /// No generators above the degree window.
    complete: bool,
}

impl<F: Field> Step<F> {
    fn new() -> Self {
        Step {
            shifts: Vec::new(),
            images: Vec::new(),
            layouts: BTreeMap::new(),
            columns: BTreeMap::new(),
            kernel: BTreeMap::new(),
            complete: false,
        }
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn kernel_dim(&self, n: i64) -> usize {
        self.kernel.get(&n).map_or(0, |k| k.len())
    }

    fn layout(&self, n: i64) -> Option<&Layout> {
        self.layouts.get(&n)
    }
}

#[derive(Debug)]
pub struct MinimalResolution<F: Field> {
    alg: Arc<GradedAlgebra<F>>,
    module: QuotientModule<F>,
    max_hom: usize,
    max_deg: i64,
    lo: i64,
    steps: Vec<Step<F>>,
    terminated_at: Option<usize>,
    zero_module: bool,
    bounds: Vec<i64>,
}

/// Extra degrees beyond the top shift of `F_i` in which syzygies are searched
/// before the resolution is declared finished.
fn slack<F: Field>(alg: &GradedAlgebra<F>) -> i64 {
    alg.max_relation_degree().max(2) as i64
}

/// Algebra degree needed to resolve `m` up to internal degree `max_deg`.
pub fn required_algebra_degree<F: Field>(m: &ModulePresentation<F>, max_deg: i64) -> i64 {
    max_deg - m.cover.min_shift().unwrap_or(0).min(max_deg)
}

impl<F: Field> MinimalResolution<F> {
    pub fn compute(
        alg: Arc<GradedAlgebra<F>>,
        m: &ModulePresentation<F>,
        max_hom: usize,
        max_deg: i64,
    ) -> Result<Self, ResolutionError> {
        let lo = m.cover.min_shift().unwrap_or(0).min(max_deg);
        let needed = max_deg - lo;
        if needed > alg.max_degree() as i64 {
            return Err(ResolutionError::Window {
                needed,
                available: alg.max_degree() as i64,
            });
        }
        let f = alg.field().clone();
        let one = f.one();
        let module = QuotientModule::new(alg.clone(), m, max_deg);
        let mut steps: Vec<Step<F>> = (0..=max_hom).map(|_| Step::new()).collect();
        let ngens = alg.num_generators();
        let gdeg: Vec<i64> = (0..ngens).map(|g| alg.generator_degree(g) as i64).collect();

        for n in lo..=max_deg {
            // minimal generators of M_n: a complement of m*M_n
            let mut pending: Vec<SparseVec<F::Elem>> = {
                let dim = module.dim(n);
                let mut e = EchelonBasis::<F>::new(dim);
                for g in 0..ngens {
                    let src = n - gdeg[g];
                    if src < lo {
                        continue;
                    }
                    for b in 0..module.dim(src) {
                        e.insert(&f, &module.act_gen(g, src, &[(b, one.clone())]));
                    }
                }
                let mut gens = Vec::new();
                for b in 0..dim {
                    let v = vec![(b, one.clone())];
                    let r = e.reduce(&f, &v);
                    if !r.is_empty() {
                        e.insert_reduced(&f, r);
                        gens.push(v);
                    }
                }
                gens
            };

            for i in 0..=max_hom {
                let (before, rest) = steps.split_at_mut(i);
                let step = &mut rest[0];
                let prev = before.last();
                for v in pending.drain(..) {
                    step.shifts.push(n);
                    step.images.push(v);
                }
                if step.shifts.is_empty() {
                    break;
                }
                let layout = Layout::new(&alg, &step.shifts, n);
                step.layouts.insert(n, layout.clone());

                // differential on the monomial basis of F_{i,n}
                let mut cols: Vec<SparseVec<F::Elem>> = Vec::with_capacity(layout.total);
                for t in 0..step.shifts.len() {
                    for w in alg.basis_i64(n - step.shifts[t]) {
                        if w.is_empty() {
                            cols.push(step.images[t].clone());
                            continue;
                        }
                        let g = w.letters()[0] as usize;
                        let rest_w = w.slice(1, w.len());
                        let idx = alg
                            .index_of(&rest_w)
                            .expect("suffix of a standard word is standard");
                        let src = n - gdeg[g];
                        let below = &step.columns[&src][step.layouts[&src].offsets[t] + idx];
                        let col = if below.is_empty() {
                            Vec::new()
                        } else {
                            match prev {
                                None => module.act_gen(g, src, below),
                                Some(p) => left_gen_free(
                                    &alg,
                                    &p.shifts,
                                    p.layout(src).expect("layout"),
                                    p.layout(n).expect("layout"),
                                    g,
                                    below,
                                ),
                            }
                        };
                        cols.push(col);
                    }
                }
                let target_dim = match prev {
                    None => module.dim(n),
                    Some(p) => p.layout(n).map_or(0, |l| l.total),
                };
                let mut ker = EchelonBasis::<F>::new(layout.total);
                for v in relations_among(&f, target_dim, &cols) {
                    ker.insert(&f, &to_sparse(&f, &v));
                }
                let kernel = ker.into_reduced(&f);
                step.columns.insert(n, cols);

                // m * K_n, then the kernel rows outside it become new generators
                let mut mk = EchelonBasis::<F>::new(layout.total);
                for g in 0..ngens {
                    let src = n - gdeg[g];
                    if let (Some(rows), Some(sl)) = (step.kernel.get(&src), step.layouts.get(&src))
                    {
                        for r in rows {
                            mk.insert(&f, &left_gen_free(&alg, &step.shifts, sl, &layout, g, r));
                        }
                    }
                }
                let mut next = Vec::new();
                for r in &kernel {
                    let rem = mk.reduce(&f, r);
                    if !rem.is_empty() {
                        mk.insert_reduced(&f, rem);
                        next.push(r.clone());
                    }
                }
                step.kernel.insert(n, kernel);
                pending = next;
            }
        }

        // certification of completeness and termination
        let s = slack(&alg);
        let max_cover = m.cover.max_shift();
        let mut bounds = Vec::with_capacity(steps.len());
        for (i, st) in steps.iter().enumerate() {
            let top = st.shifts.iter().copied().max().unwrap_or(lo);
            let mut b = top + s;
            if i == 0 {
                b = b.max(m.top_presentation_degree());
            }
            bounds.push(b);
        }
        let mut complete = max_cover.map_or(true, |c| c <= max_deg);
        let mut terminated_at = None;
        let zero_module = complete && steps[0].shifts.is_empty();
        for i in 0..steps.len() {
            steps[i].complete = complete || terminated_at.is_some();
            if terminated_at.is_none() && complete {
                let kernel_zero = steps[i].kernel.values().all(|k| k.is_empty());
                if steps[i].shifts.is_empty() || (kernel_zero && bounds[i] <= max_deg) {
                    terminated_at = Some(i);
                }
            }
            complete = complete && (steps[i].shifts.is_empty() || bounds[i] <= max_deg);
        }
        Ok(MinimalResolution {
            alg,
            module,
            max_hom,
            max_deg,
            lo,
            steps,
            terminated_at,
            zero_module,
            bounds,
        })
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra<F>> {
        &self.alg
    }

    pub fn module(&self) -> &QuotientModule<F> {
        &self.module
    }

    pub fn max_hom(&self) -> usize {
        self.max_hom
    }

    pub fn max_deg(&self) -> i64 {
        self.max_deg
    }

    pub fn steps(&self) -> &[Step<F>] {
        &self.steps
    }

    pub fn shifts(&self, i: usize) -> &[i64] {
        self.steps.get(i).map_or(&[], |s| &s.shifts)
    }

    pub fn is_zero_module(&self) -> bool {
        self.zero_module
    }

    /// A zero syzygy module was reached and certified.
    pub fn is_terminated(&self) -> bool {
        self.terminated_at.is_some()
    }

    /// All generators of `F_i` lie inside the degree window.
    pub fn step_complete(&self, i: usize) -> bool {
        match self.steps.get(i) {
            Some(s) => s.complete,
            None => self.terminated_at.is_some(),
        }
    }

    /// Exact projective dimension if terminated, otherwise the certified lower bound.
    pub fn projective_dimension(&self) -> (ExtInt, bool) {
        if self.zero_module {
            return (ExtInt::NegInf, true);
        }
        match self.terminated_at {
            Some(p) => {
                let last = (0..=p)
                    .rev()
                    .find(|&i| !self.steps[i].shifts.is_empty())
                    .unwrap_or(0);
                (ExtInt::Finite(last as i64), true)
            }
            None => {
                let last = (0..self.steps.len())
                    .rev()
                    .find(|&i| !self.steps[i].shifts.is_empty())
                    .unwrap_or(0);
                (ExtInt::Finite(last as i64), false)
            }
        }
    }

    /// Smallest degree window that would certify the steps computed so far.
    pub fn needed_max_deg(&self) -> i64 {
        let upto = self.terminated_at.unwrap_or(self.steps.len() - 1);
        self.bounds[..=upto]
            .iter()
            .copied()
            .max()
            .unwrap_or(self.max_deg)
    }

    pub fn betti_table(&self) -> BettiTable {
        let mut entries = BTreeMap::new();
        for (i, st) in self.steps.iter().enumerate() {
            for &s in &st.shifts {
                *entries.entry((i, s)).or_insert(0u64) += 1;
            }
        }
        let (pd, pd_exact) = self.projective_dimension();
        BettiTable {
            entries,
            max_hom: self.max_hom,
            max_deg: self.max_deg,
            min_deg: self.lo,
            terminated: self.is_terminated(),
            projective_dimension: pd,
            pd_exact,
        }
    }

    /// `(Σ (-1)^i β_{i,j} t^j) · H_A(t) = H_M(t)` in every degree of the window.
    pub fn check_euler(&self) -> Result<(), String> {
        let b = self.betti_table();
        for n in self.lo..=self.max_deg {
            let mut lhs: i128 = 0;
            for (&(i, j), &beta) in &b.entries {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                lhs += sign * beta as i128 * self.alg.dim(n - j) as i128;
            }
            let rhs = self.module.dim(n) as i128;
            if lhs != rhs {
                return Err(format!(
                    "degree {n}: alternating sum {lhs} but dim M_{n} = {rhs}"
                ));
            }
        }
        Ok(())
    }

    /// `d_{i-1} d_i = 0` in every computed degree.
    pub fn check_d_squared(&self) -> Result<(), String> {
        let f = self.alg.field();
        for i in 1..self.steps.len() {
            for (&n, cols) in &self.steps[i].columns {
                let Some(lower) = self.steps[i - 1].columns.get(&n) else {
                    if cols.iter().any(|c| !c.is_empty()) {
                        return Err(format!("step {i} degree {n}: image in an empty module"));
                    }
                    continue;
                };
                for (k, c) in cols.iter().enumerate() {
                    let mut acc: SparseVec<F::Elem> = Vec::new();
                    for (idx, a) in c {
                        acc = crate::linalg::axpy(f, &acc, a, &lower[*idx]);
                    }
                    if !acc.is_empty() {
                        return Err(format!("d∘d ≠ 0 at step {i}, degree {n}, column {k}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Every differential entry has zero constant term.
    pub fn check_minimal(&self) -> Result<(), String> {
        for i in 1..self.steps.len() {
            let prev = &self.steps[i - 1];
            for (u, img) in self.steps[i].images.iter().enumerate() {
                let s = self.steps[i].shifts[u];
                let layout = prev.layout(s).expect("layout");
                for (pos, _) in img {
                    let (t, _) = layout.locate(*pos);
                    if prev.shifts[t] == s {
                        return Err(format!("step {i} generator {u} has a unit entry"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrix of `d_i: F_i -> F_{i-1}` for `i >= 1`; entry `[u][t]` is the
    /// coefficient of `e_t` in `d(e_u)`.
    pub fn differential(&self, i: usize) -> Vec<Vec<NcPolynomial<F>>> {
        let width = self.steps[i - 1].shifts.len();
        self.matrix_entries(i)
            .into_iter()
            .map(|col| {
                let mut row = vec![NcPolynomial::zero(); width];
                for (t, deg, v) in col {
                    let basis = self.alg.basis(deg);
                    row[t] = self
                        .alg
                        .free()
                        .from_terms(v.into_iter().map(|(idx, c)| (basis[idx].clone(), c)));
                }
                row
            })
            .collect()
    }

    /// Entries `a_{tu}` of `d(e_u)` for step `i`, as algebra coordinates with their degree.
    fn matrix_entries(&self, i: usize) -> Vec<Vec<(usize, u32, SparseVec<F::Elem>)>> {
        let step = &self.steps[i];
        let prev = &self.steps[i - 1];
        step.images
            .iter()
            .zip(&step.shifts)
            .map(|(img, &s)| {
                let layout = prev.layout(s).expect("layout");
                let mut by_t: BTreeMap<usize, SparseVec<F::Elem>> = BTreeMap::new();
                for (pos, c) in img {
                    let (t, idx) = layout.locate(*pos);
                    by_t.entry(t).or_default().push((idx, c.clone()));
                }
                by_t.into_iter()
                    .map(|(t, v)| (t, (s - prev.shifts[t]) as u32, v))
                    .collect()
            })
            .collect()
    }

    /// `Ext^i(M, N)` computed from `Hom(F, N)`, for every internal degree in
    /// which all the needed pieces of `N` are known. `None` when `F_{i+1}`
    /// is not available.
    pub fn ext_group<N: LeftModule<F>>(&self, target: &N, i: usize) -> Option<ExtGroup> {
        let beyond = |k: usize| self.terminated_at.is_some_and(|p| k > p);
        if i + 1 >= self.steps.len() && !beyond(i + 1) {
            return None;
        }
        let f = self.alg.field();
        let shifts_of = |k: usize| -> &[i64] {
            if beyond(k) {
                &[]
            } else {
                &self.steps[k].shifts
            }
        };
        let (si, snext) = (shifts_of(i), shifts_of(i + 1));
        let sprev: &[i64] = if i == 0 { &[] } else { shifts_of(i - 1) };
        let exact = (i == 0 || self.step_complete(i - 1))
            && self.step_complete(i)
            && self.step_complete(i + 1);
        if si.is_empty() {
            let dims = GradedDims::new(i64::MIN / 4, i64::MAX / 4);
            return Some(ExtGroup {
                index: i,
                dims,
                exact: exact || self.step_complete(i),
            });
        }
        let max_si = *si.iter().max().unwrap();
        let min_si = *si.iter().min().unwrap();
        let mut j_lo = target.lo() - max_si;
        let top = target.finite_top();
        let j_hi = match top {
            Some(t) => t - min_si,
            None => {
                let all = sprev.iter().chain(si).chain(snext).copied().max().unwrap();
                target.hi() - all
            }
        };
        let mut exact = exact;
        if !exact {
            if let Some(t) = top {
                j_lo = j_lo.max(t - self.max_deg);
                exact = true;
            }
        }
        let ndim = |n: i64| -> usize {
            if n < target.lo() || top.is_some_and(|t| n > t) {
                0
            } else {
                target.dim(n)
            }
        };
        let next_entries = if snext.is_empty() {
            Vec::new()
        } else {
            self.matrix_entries(i + 1)
        };
        let cur_entries = if i == 0 || sprev.is_empty() {
            Vec::new()
        } else {
            self.matrix_entries(i)
        };
        let mut dims = GradedDims::new(j_lo, j_hi);
        for j in j_lo..=j_hi {
            let offsets = |sh: &[i64]| -> (Vec<usize>, usize) {
                let mut o = Vec::with_capacity(sh.len());
                let mut tot = 0;
                for &s in sh {
                    o.push(tot);
                    tot += ndim(s + j);
                }
                (o, tot)
            };
            let (off_i, dim_i) = offsets(si);
            if dim_i == 0 {
                continue;
            }
            let r_out =
                coboundary_rank(f, target, si, snext, &next_entries, j, &ndim, &off_i, dim_i);
            let r_in = if cur_entries.is_empty() {
                0
            } else {
                let (off_p, dim_p) = offsets(sprev);
                let _ = off_p;
                coboundary_rank(f, target, sprev, si, &cur_entries, j, &ndim, &off_i, dim_p)
            };
            dims.set(j, (dim_i - r_out - r_in) as u64);
        }
        Some(ExtGroup {
            index: i,
            dims,
            exact,
        })
    }

    /// `Ext^i(M, N)` for all `i` that can be computed.
    pub fn ext_groups<N: LeftModule<F>>(&self, target: &N) -> Vec<ExtGroup> {
        (0..=self.steps.len())
            .map_while(|i| self.ext_group(target, i))
            .collect()
    }
}

/// Rank of `Hom(F_src, N)_j -> Hom(F_dst, N)_j`, `(δφ)(e_u) = Σ_t a_{tu} φ(e_t)`.
#[allow(clippy::too_many_arguments)]
fn coboundary_rank<F: Field, N: LeftModule<F>>(
    f: &F,
    target: &N,
    src: &[i64],
    dst: &[i64],
    entries: &[Vec<(usize, u32, SparseVec<F::Elem>)>],
    j: i64,
    ndim: &dyn Fn(i64) -> usize,
    dst_offsets_hint: &[usize],
    src_dim: usize,
) -> usize {
    // offsets of the destination Hom space
    let mut off_dst = Vec::with_capacity(dst.len());
    let mut dim_dst = 0;
    for &s in dst {
        off_dst.push(dim_dst);
        dim_dst += ndim(s + j);
    }
    let _ = dst_offsets_hint;
    if dim_dst == 0 || src_dim == 0 {
        return 0;
    }
    // column images: for each (t, b) collect contributions to each u
    let mut by_t: Vec<Vec<(usize, u32, &SparseVec<F::Elem>)>> = vec![Vec::new(); src.len()];
    for (u, col) in entries.iter().enumerate() {
        for (t, d, a) in col {
            by_t[*t].push((u, *d, a));
        }
    }
    let mut e = EchelonBasis::<F>::new(dim_dst);
    for (t, &s) in src.iter().enumerate() {
        let n = s + j;
        for b in 0..ndim(n) {
            let v = vec![(b, f.one())];
            let mut img: SparseVec<F::Elem> = Vec::new();
            for &(u, d, a) in &by_t[t] {
                let w = target.act_element(d, a, n, &v);
                let shifted: SparseVec<F::Elem> =
                    w.into_iter().map(|(k, c)| (off_dst[u] + k, c)).collect();
                img = crate::linalg::axpy(f, &img, &f.one(), &shifted);
            }
            e.insert(f, &img);
        }
    }
    e.rank()
}

/// Dimensions of `Ext^i` in internal degrees `j`; exact on the window when `exact`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtGroup {
    pub index: usize,
    pub dims: GradedDims,
    pub exact: bool,
}

impl ExtGroup {
    pub fn is_zero(&self) -> bool {
        self.dims.total() == 0
    }
}

/// `β_{i,j}` with the window it is certified on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    pub entries: BTreeMap<(usize, i64), u64>,
    pub max_hom: usize,
    pub max_deg: i64,
    pub min_deg: i64,
    pub terminated: bool,
    pub projective_dimension: ExtInt,
    pub pd_exact: bool,
}

#[derive(Serialize, Deserialize)]
struct BettiEntry {
    i: usize,
    j: i64,
    beta: u64,
}

#[derive(Serialize, Deserialize)]
struct BettiJson {
    schema: u32,
    max_hom: usize,
    max_deg: i64,
    terminated: bool,
    projective_dimension: ExtInt,
    pd_exact: bool,
    entries: Vec<BettiEntry>,
}

impl BettiTable {
    pub fn get(&self, i: usize, j: i64) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total rank of each step.
    pub fn ranks(&self) -> Vec<u64> {
        let top = self
            .entries
            .keys()
            .map(|(i, _)| *i)
            .max()
            .map_or(0, |m| m + 1);
        let mut r = vec![0; top];
        for ((i, _), b) in &self.entries {
            r[*i] += b;
        }
        r
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let j = BettiJson {
            schema: 1,
            max_hom: self.max_hom,
            max_deg: self.max_deg,
            terminated: self.terminated,
            projective_dimension: self.projective_dimension,
            pd_exact: self.pd_exact,
            entries: self
                .entries
                .iter()
                .map(|(&(i, j), &beta)| BettiEntry { i, j, beta })
                .collect(),
        };
        serde_json::to_value(j).expect("serializable")
    }

    /// Rows `i`, columns `j` over the certified internal-degree window.
    pub fn to_csv(&self) -> String {
        let lo = self.min_deg.min(
            self.entries
                .keys()
                .map(|k| k.1)
                .min()
                .unwrap_or(self.min_deg),
        );
        let mut s = String::from("i");
        for j in lo..=self.max_deg {
            let _ = write!(s, ",{j}");
        }
        s.push('\n');
        for i in 0..=self.max_hom {
            let _ = write!(s, "{i}");
            for j in lo..=self.max_deg {
                let _ = write!(s, ",{}", self.get(i, j));
            }
            s.push('\n');
        }
        s
    }

    /// The usual display: rows `j - i`, columns `i`, zeros as `.`.
    pub fn to_table(&self) -> String {
        if self.entries.is_empty() {
            return "0\n".to_string();
        }
        let cols = self.entries.keys().map(|k| k.0).max().unwrap() + 1;
        let rows: Vec<i64> = {
            let lo = self
                .entries
                .keys()
                .map(|&(i, j)| j - i as i64)
                .min()
                .unwrap();
            let hi = self
                .entries
                .keys()
                .map(|&(i, j)| j - i as i64)
                .max()
                .unwrap();
            (lo..=hi).collect()
        };
        let width = self
            .entries
            .values()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1)
            .max(2);
        let mut s = String::new();
        let _ = write!(s, "{:>6}", "");
        for i in 0..cols {
            let _ = write!(s, " {i:>width$}");
        }
        s.push('\n');
        let _ = write!(s, "{:>6}", "total:");
        for r in self.ranks() {
            let _ = write!(s, " {r:>width$}");
        }
        s.push('\n');
        for r in rows {
            let _ = write!(s, "{:>6}", format!("{r}:"));
            for i in 0..cols {
                let b = self.get(i, r + i as i64);
                if b == 0 {
                    let _ = write!(s, " {:>width$}", ".");
                } else {
                    let _ = write!(s, " {b:>width$}");
                }
            }
            s.push('\n');
        }
        s
    }
}
