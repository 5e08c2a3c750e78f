//! Independent dense oracle for Hilbert functions and Betti numbers.
//!
//! `A_n` is built as the quotient of `A_{n-1} ⊗ V` by the images of
//! `b · r` for basis elements `b` and relations `r`; no Gröbner bases or
//! normal words are involved. Resolutions are computed degree by degree with
//! dense Gaussian elimination modulo a prime.
#![allow(dead_code)]

use std::collections::BTreeMap;

use ncreg::field::FieldSpec;
use ncreg::presentation::Presentation;
use num_traits::{Signed, ToPrimitive};

pub const P: u64 = 32003;

pub fn corpus_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn inv(a: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, a % P, P - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

/// Row echelon form kept fully reduced; rows are dense.
#[derive(Clone, Debug)]
pub struct Span {
    pub dim: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(dim: usize) -> Self {
        Span {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn reduce(&self, v: &mut [u64]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = (*x + (P - c) * y) % P;
                }
            }
        }
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = inv(v[p]);
        for x in v.iter_mut() {
            *x = *x * s % P;
        }
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                for (x, y) in row.iter_mut().zip(&v) {
                    *x = (*x + (P - c) * y) % P;
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|&x| x == 0)
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
}

/// Null space of the linear map whose columns are `cols` (each of length `m`).
pub fn kernel(cols: &[Vec<u64>], m: usize) -> Vec<Vec<u64>> {
    let n = cols.len();
    // augmented rows [col | e_j] eliminated on the first m coordinates
    let mut span = Span::new(m + n);
    let mut out = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        let mut v = c.clone();
        v.resize(m + n, 0);
        v[m + j] = 1;
        let mut w = v.clone();
        span.reduce(&mut w);
        if w[..m].iter().all(|&x| x == 0) {
            out.push(w[m..].to_vec());
        } else {
            span.insert(&v);
        }
    }
    // the collected vectors are independent: each has a distinct leading slot j
    out
}

/// The algebra as iterated quotients, with left multiplication tables.
pub struct DenseAlgebra {
    pub ngens: usize,
    pub max_deg: usize,
    /// `quot[n]`: `A_{n-1} ⊗ V -> A_n` as images of the `dim(A_{n-1}) * g` pairs.
    quot: Vec<Vec<Vec<u64>>>,
    pub dims: Vec<usize>,
    /// `left[g][m]`: image of `x_g · b` for each basis element `b` of `A_m`.
    left: Vec<Vec<Vec<Vec<u64>>>>,
    /// A word representing each basis element.
    words: Vec<Vec<Vec<usize>>>,
}

fn relations_mod_p(pres: &Presentation) -> Vec<Vec<(Vec<usize>, u64)>> {
    assert!(
        matches!(pres.field, FieldSpec::Prime { characteristic } if characteristic as u64 == P)
    );
    pres.relations
        .iter()
        .map(|r| {
            r.terms()
                .iter()
                .map(|(w, c)| {
                    let num = c.numer().to_i64().unwrap();
                    let den = c.denom().to_i64().unwrap();
                    let n = if c.is_negative() {
                        (P as i64 + num % P as i64) as u64 % P
                    } else {
                        num as u64 % P
                    };
                    (
                        w.letters().iter().map(|&l| l as usize).collect(),
                        n * inv(den as u64 % P) % P,
                    )
                })
                .collect()
        })
        .collect()
}

impl DenseAlgebra {
    pub fn new(pres: &Presentation, max_deg: usize) -> Self {
        assert!(
            pres.generators.iter().all(|g| g.degree == 1),
            "oracle needs degree-one generators"
        );
        let g = pres.generators.len();
        let rels = relations_mod_p(pres);
        let mut alg = DenseAlgebra {
            ngens: g,
            max_deg,
            quot: vec![Vec::new()],
            dims: vec![1],
            left: vec![vec![]; g],
            words: vec![vec![vec![]]],
        };
        for n in 1..=max_deg {
            let src = alg.dims[n - 1] * g;
            let mut ideal = Span::new(src);
            for r in &rels {
                let d = r[0].0.len();
                if d > n {
                    continue;
                }
                for b in 0..alg.dims[n - d] {
                    // b · r expressed in A_{n-1} ⊗ V
                    let mut v = vec![0u64; src];
                    for (w, c) in r {
                        let mut word = alg.words[n - d][b].clone();
                        word.extend_from_slice(w);
                        let last = *word.last().unwrap();
                        let head = alg.word_coords(&word[..word.len() - 1]);
                        for (i, h) in head.iter().enumerate() {
                            if *h != 0 {
                                let k = i * g + last;
                                v[k] = (v[k] + h * c) % P;
                            }
                        }
                    }
                    ideal.insert(&v);
                }
            }
            // A_n = complement of the pivot columns; coordinates via reduction
            let piv: Vec<usize> = ideal.pivots().to_vec();
            let free: Vec<usize> = (0..src).filter(|k| !piv.contains(k)).collect();
            let mut images = Vec::with_capacity(src);
            for k in 0..src {
                let mut e = vec![0u64; src];
                e[k] = 1;
                ideal.reduce(&mut e);
                images.push(free.iter().map(|&f| e[f]).collect::<Vec<u64>>());
            }
            let words = free
                .iter()
                .map(|&k| {
                    let mut w = alg.words[n - 1][k / g].clone();
                    w.push(k % g);
                    w
                })
                .collect();
            alg.quot.push(images);
            alg.dims.push(free.len());
            alg.words.push(words);
        }
        for x in 0..g {
            for m in 0..max_deg {
                let t = (0..alg.dims[m])
                    .map(|b| {
                        let mut w = vec![x];
                        w.extend_from_slice(&alg.words[m][b]);
                        alg.word_coords(&w)
                    })
                    .collect();
                alg.left[x].push(t);
            }
        }
        alg
    }

    /// Coordinates of a word in `A_{|w|}`.
    pub fn word_coords(&self, w: &[usize]) -> Vec<u64> {
        let mut v = vec![1u64];
        for (i, &l) in w.iter().enumerate() {
            let n = i + 1;
            let mut next = vec![0u64; self.dims[n]];
            for (b, c) in v.iter().enumerate() {
                if *c != 0 {
                    for (t, y) in self.quot[n][b * self.ngens + l].iter().enumerate() {
                        next[t] = (next[t] + c * y) % P;
                    }
                }
            }
            v = next;
        }
        v
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < 0 || n as usize > self.max_deg {
            0
        } else {
            self.dims[n as usize]
        }
    }

    fn left_gen(&self, x: usize, m: usize, v: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.dims[m + 1]];
        for (b, c) in v.iter().enumerate() {
            if *c != 0 {
                for (t, y) in self.left[x][m][b].iter().enumerate() {
                    out[t] = (out[t] + c * y) % P;
                }
            }
        }
        out
    }
}

/// `⊕ A(-s_t)` in degree `n` as consecutive blocks.
struct Free<'a> {
    alg: &'a DenseAlgebra,
    shifts: Vec<i64>,
}

impl Free<'_> {
    fn offsets(&self, n: i64) -> (Vec<usize>, usize) {
        let mut off = Vec::new();
        let mut total = 0;
        for &s in &self.shifts {
            off.push(total);
            total += self.alg.dim(n - s);
        }
        (off, total)
    }

    fn left_gen(&self, x: usize, n: i64, v: &[u64]) -> Vec<u64> {
        let (o1, _) = self.offsets(n);
        let (o2, t2) = self.offsets(n + 1);
        let mut out = vec![0u64; t2];
        for (t, &s) in self.shifts.iter().enumerate() {
            let m = n - s;
            if m < 0 || (m + 1) as usize > self.alg.max_deg {
                continue;
            }
            let block = &v[o1[t]..o1[t] + self.alg.dim(m)];
            let img = self.alg.left_gen(x, m as usize, block);
            out[o2[t]..o2[t] + img.len()].copy_from_slice(&img);
        }
        out
    }

    /// `w · v` for a word `w`, applied right to left.
    fn left_word(&self, w: &[usize], n: i64, v: &[u64]) -> Vec<u64> {
        let mut cur = v.to_vec();
        let mut deg = n;
        for &x in w.iter().rev() {
            cur = self.left_gen(x, deg, &cur);
            deg += 1;
        }
        cur
    }
}

/// A module given by a cover and relation columns; entries are coordinates
/// in the oracle's own bases, obtained from polynomial terms.
pub struct DenseModule {
    pub cover: Vec<i64>,
    /// `(degree, entries as (word, coefficient) lists per cover generator)`
    pub relations: Vec<(i64, Vec<Vec<(Vec<usize>, u64)>>)>,
}

/// `β_{i,j}` for `i <= max_hom`, `j <= max_deg`; requires a minimal cover.
pub fn betti(
    alg: &DenseAlgebra,
    m: &DenseModule,
    max_hom: usize,
    max_deg: i64,
) -> BTreeMap<(usize, i64), u64> {
    assert!(max_deg as usize <= alg.max_deg);
    let mut out = BTreeMap::new();
    for &s in &m.cover {
        if s <= max_deg {
            *out.entry((0usize, s)).or_insert(0) += 1;
        }
    }
    let lo = m.cover.iter().copied().min().unwrap_or(0);
    let f0 = Free {
        alg,
        shifts: m.cover.clone(),
    };
    // the relation submodule, degree by degree
    let mut sub: BTreeMap<i64, Span> = BTreeMap::new();
    for n in lo..=max_deg {
        let (off, total) = f0.offsets(n);
        let mut span = Span::new(total);
        if let Some(prev) = sub.get(&(n - 1)) {
            for v in prev.basis() {
                for x in 0..alg.ngens {
                    span.insert(&f0.left_gen(x, n - 1, v));
                }
            }
        }
        for (d, entries) in &m.relations {
            if *d == n {
                let mut v = vec![0u64; total];
                for (t, terms) in entries.iter().enumerate() {
                    for (w, c) in terms {
                        let coords = alg.word_coords(w);
                        for (k, y) in coords.iter().enumerate() {
                            v[off[t] + k] = (v[off[t] + k] + c * y) % P;
                        }
                    }
                }
                span.insert(&v);
            }
        }
        // a minimal cover has no relation touching a generator in its own degree
        for (t, &s) in m.cover.iter().enumerate() {
            if s == n {
                assert!(
                    span.basis().iter().all(|r| r[off[t]] == 0),
                    "oracle needs a minimal cover"
                );
            }
        }
        sub.insert(n, span);
    }
    let mut shifts = m.cover.clone();
    for i in 0..max_hom {
        let f = Free {
            alg,
            shifts: shifts.clone(),
        };
        // minimal generators of sub
        let mut gens: Vec<(i64, Vec<u64>)> = Vec::new();
        for n in lo..=max_deg {
            let span = &sub[&n];
            let mut mk = Span::new(span.dim);
            if let Some(prev) = sub.get(&(n - 1)) {
                for v in prev.basis() {
                    for x in 0..alg.ngens {
                        mk.insert(&f.left_gen(x, n - 1, v));
                    }
                }
            }
            for v in span.basis() {
                if mk.insert(v) {
                    gens.push((n, v.clone()));
                }
            }
        }
        if gens.is_empty() {
            break;
        }
        for (n, _) in &gens {
            *out.entry((i + 1, *n)).or_insert(0) += 1;
        }
        // kernel of F_{i+1} -> F_i, degree by degree
        let next = Free {
            alg,
            shifts: gens.iter().map(|g| g.0).collect(),
        };
        let mut ker: BTreeMap<i64, Span> = BTreeMap::new();
        for n in lo..=max_deg {
            let (_, rows) = f.offsets(n);
            let (_, total) = next.offsets(n);
            let mut cols = Vec::with_capacity(total);
            for (s, img) in &gens {
                let m = n - s;
                if m < 0 {
                    continue;
                }
                for b in 0..alg.dim(m) {
                    cols.push(f.left_word(&alg.words[m as usize][b], *s, img));
                }
            }
            assert_eq!(cols.len(), total);
            let mut span = Span::new(total);
            for v in kernel(&cols, rows) {
                span.insert(&v);
            }
            ker.insert(n, span);
        }
        sub = ker;
        shifts = next.shifts;
    }
    out
}

/// Turns a module presentation from the library into oracle form.
pub fn dense_module<F: ncreg::field::Field>(
    alg: &ncreg::algebra::GradedAlgebra<F>,
    m: &ncreg::module::ModulePresentation<F>,
) -> DenseModule {
    let f = alg.field();
    let relations = m
        .relations
        .iter()
        .map(|col| {
            let entries = col
                .entries
                .iter()
                .map(|e| {
                    e.terms()
                        .iter()
                        .map(|(w, c)| {
                            let q = f.to_rational(c);
                            let n = q.numer().to_i64().unwrap().rem_euclid(P as i64) as u64;
                            let d = q.denom().to_i64().unwrap().rem_euclid(P as i64) as u64;
                            (
                                w.letters().iter().map(|&l| l as usize).collect(),
                                n * inv(d) % P,
                            )
                        })
                        .collect()
                })
                .collect();
            (col.degree, entries)
        })
        .collect();
    DenseModule {
        cover: m.cover.shifts.clone(),
        relations,
    }
}

/// Result of comparing the library's Betti tables with the oracle.
#[derive(Debug, Default)]
pub struct OracleRun {
    pub compared: usize,
    pub skipped: Vec<String>,
    pub mismatches: Vec<String>,
}

fn compare_algebra(
    run: &mut OracleRun,
    name: &str,
    pres: &Presentation,
    window: ncreg::regularity::Window,
    samples: usize,
    seed: u64,
    index: u64,
) {
    use ncreg::algebra::GradedAlgebra;
    use ncreg::field::PrimeField;
    use ncreg::groebner::Budget;
    use ncreg::module::ModulePresentation;
    use ncreg::resolution::MinimalResolution;
    use std::sync::Arc;

    let d = window.max_deg;
    let dense = DenseAlgebra::new(pres, d as usize);
    let total: usize = dense.dims.iter().sum();
    if total > 200 {
        run.skipped.push(format!("{name}: dim A_<=D = {total}"));
        return;
    }
    let alg = Arc::new(
        GradedAlgebra::new(
            pres,
            PrimeField::new(P as u32),
            d as u32,
            &Budget::default(),
        )
        .unwrap(),
    );
    for n in 0..=d {
        if alg.dim(n) != dense.dim(n) {
            run.mismatches.push(format!(
                "{name}: dim A_{n} = {} but oracle {}",
                alg.dim(n),
                dense.dim(n)
            ));
        }
    }
    let mut modules = vec![
        ("k".to_string(), ModulePresentation::trivial(&alg)),
        ("A".to_string(), ModulePresentation::free(vec![0])),
    ];
    for j in 0..samples {
        let s = ncreg::harness::derive_seed(seed, index, j as u64);
        let (kind, m) = ncreg::harness::sample_module(&alg, s, j);
        modules.push((format!("M{j}:{kind}"), m));
    }
    for (label, m) in modules {
        let res = MinimalResolution::compute(alg.clone(), &m, window.max_hom, d).unwrap();
        let ours = res.betti_table().entries;
        let theirs = betti(&dense, &dense_module(&alg, &m), window.max_hom, d);
        run.compared += 1;
        if ours != theirs {
            run.mismatches.push(format!(
                "{name} {label}: library {ours:?} oracle {theirs:?}"
            ));
        }
    }
}

/// Every corpus algebra with k, A and its sampled modules, plus the random
/// quadratic algebras with k.
pub fn oracle_equivalence() -> OracleRun {
    use ncreg::corpus::Corpus;
    use ncreg::regularity::Window;

    let corpus = Corpus::load(corpus_dir()).unwrap();
    let seed = corpus.manifest.seed.unwrap_or(0);
    let mut run = OracleRun::default();
    for (index, e) in corpus.manifest.algebras.iter().enumerate() {
        let pres = corpus.presentation(e).unwrap();
        let window = Window {
            max_hom: e.max_hom,
            max_deg: e.max_deg,
        };
        compare_algebra(
            &mut run,
            &e.name,
            &pres,
            window,
            e.random_modules,
            seed,
            index as u64,
        );
    }
    if let Some(ra) = &corpus.manifest.random_algebras {
        for i in 0..ra.count {
            let pres = ncreg::harness::random_quadratic(seed, i);
            let window = Window {
                max_hom: ra.max_hom,
                max_deg: ra.max_deg,
            };
            compare_algebra(
                &mut run,
                &format!("random-{i}"),
                &pres,
                window,
                0,
                seed,
                1_000 + i as u64,
            );
        }
    }
    run
}
