mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use ncreg::algebra::GradedAlgebra;
use ncreg::field::{Field, FieldSpec, PrimeField};
use ncreg::groebner::Budget;
use ncreg::module::{ModulePresentation, RandomModuleParams};
use ncreg::poly::NcPolynomial;
use ncreg::presentation::Presentation;
use ncreg::regularity::{CmRoute, RegularityValue, Window, Workbench};
use ncreg::resolution::MinimalResolution;
use ncreg::word::{Generator, Word};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f() -> PrimeField {
    PrimeField::new(32003)
}

fn gens(n: usize) -> Vec<Generator> {
    ["x", "y", "z"][..n]
        .iter()
        .map(|s| Generator {
            name: s.to_string(),
            degree: 1,
        })
        .collect()
}

fn presentation(g: usize, rels: Vec<Vec<(Vec<usize>, i64)>>) -> Presentation {
    let rels = rels
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|(w, c)| (Word::from_letters(&w), BigRational::from_integer(c.into())))
                .collect()
        })
        .collect();
    Presentation::new(FieldSpec::default(), gens(g), rels).unwrap()
}

/// Homogeneous relations of degree 2 or 3 in two or three generators.
fn arb_presentation() -> impl Strategy<Value = Presentation> {
    (2usize..=3).prop_flat_map(|g| {
        let term = (2usize..=3).prop_flat_map(move |d| {
            prop::collection::vec((prop::collection::vec(0..g, d..=d), -3i64..=3), 1..4)
        });
        let rels = prop::collection::vec(term, 1..=3).prop_map(|rs| {
            // keep each relation homogeneous: use the degree of its first term
            rs.into_iter()
                .map(|r| {
                    let d = r[0].0.len();
                    r.into_iter()
                        .filter(|(w, _)| w.len() == d)
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
        });
        rels.prop_map(move |rels| presentation(g, rels))
    })
}

fn all_words(g: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|w| (0..g).map(move |l| [w.clone(), vec![l]].concat()))
            .collect();
    }
    out
}

fn random_poly(alg: &GradedAlgebra<PrimeField>, d: usize, seed: u64) -> NcPolynomial<PrimeField> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fr = alg.field();
    let mut terms = Vec::new();
    for w in all_words(alg.num_generators(), d) {
        if rng.gen_bool(0.5) {
            terms.push((Word::from_letters(&w), fr.from_i64(rng.gen_range(-5..=5))));
        }
    }
    alg.free().from_terms(terms)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn normal_form_is_a_linear_projection(p in arb_presentation(), seed in any::<u64>(), d in 2usize..=4) {
        let alg = GradedAlgebra::new(&p, f(), 5, &Budget::default()).unwrap();
        let gb = alg.groebner();
        let a = random_poly(&alg, d, seed);
        let b = random_poly(&alg, d, seed ^ 1);
        let na = gb.normal_form(&a).unwrap();
        prop_assert_eq!(gb.normal_form(&na).unwrap(), na.clone());
        let free = alg.free();
        let sum = gb.normal_form(&free.add(&a, &b)).unwrap();
        prop_assert_eq!(sum, free.add(&na, &gb.normal_form(&b).unwrap()));
        // the image lies in the span of the monomial basis
        let basis: BTreeSet<&Word> = alg.basis(d as u32).iter().collect();
        for (w, _) in na.terms() {
            prop_assert!(basis.contains(w));
        }
    }

    #[test]
    fn normal_forms_of_words_span_the_basis(p in arb_presentation(), d in 1usize..=4) {
        let alg = GradedAlgebra::new(&p, f(), 4, &Budget::default()).unwrap();
        let basis = alg.basis(d as u32);
        let mut span = common::Span::new(basis.len());
        for w in all_words(alg.num_generators(), d) {
            let n = alg.groebner().normal_form(&alg.free().monomial(Word::from_letters(&w), alg.field().one())).unwrap();
            let mut v = vec![0u64; basis.len()];
            for (u, c) in n.terms() {
                v[basis.iter().position(|b| b == u).unwrap()] = *c as u64;
            }
            span.insert(&v);
        }
        prop_assert_eq!(span.rank(), basis.len());
    }

    #[test]
    fn truncation_is_stable(p in arb_presentation(), d in 2u32..=4, extra in 1u32..=2) {
        let a = GradedAlgebra::new(&p, f(), d, &Budget::default()).unwrap();
        let b = GradedAlgebra::new(&p, f(), d + extra, &Budget::default()).unwrap();
        for n in 0..=d {
            prop_assert_eq!(a.basis(n), b.basis(n));
        }
        let (ha, hb) = (a.hilbert_function(), b.hilbert_function());
        prop_assert_eq!(&ha.values()[..], &hb.values()[..=d as usize]);
    }

    #[test]
    fn monomial_ideals_count_avoiding_words(
        g in 2usize..=3,
        words in prop::collection::vec(prop::collection::vec(0usize..3, 2..=3), 1..=4),
    ) {
        let words: Vec<Vec<usize>> = words.into_iter().map(|w| w.into_iter().map(|l| l % g).collect()).collect();
        let p = presentation(g, words.iter().map(|w| vec![(w.clone(), 1)]).collect());
        let alg = GradedAlgebra::new(&p, f(), 6, &Budget::default()).unwrap();
        for d in 0..=6usize {
            let count = all_words(g, d)
                .into_iter()
                .filter(|w| !words.iter().any(|f| w.windows(f.len()).any(|s| s == &f[..])))
                .count();
            prop_assert_eq!(alg.dim(d as i64), count);
        }
    }

    #[test]
    fn betti_numbers_survive_larger_windows(seed in any::<u64>(), which in 0usize..4, kind in 0usize..6) {
        let src = [
            "gens x:1 y:1; rels y*x - x*y;",
            "gens x:1 y:1; rels x^2; y^2; x*y + y*x;",
            "gens x:1 y:1; rels x^2*y - y*x^2; x*y^2 - y^2*x;",
            "gens x:1 y:1; rels y*x - 2*x*y;",
        ][which];
        let p = Presentation::parse(src).unwrap();
        let alg = Arc::new(GradedAlgebra::new(&p, f(), 8, &Budget::default()).unwrap());
        let (_, m) = ncreg::harness::sample_module(&alg, seed, kind);
        let small = MinimalResolution::compute(alg.clone(), &m, 3, 6).unwrap().betti_table();
        let large = MinimalResolution::compute(alg.clone(), &m, 4, 8).unwrap().betti_table();
        for (&(i, j), &b) in &small.entries {
            prop_assert_eq!(large.get(i, j), b);
        }
        for (&(i, j), &b) in &large.entries {
            if i <= 3 && j <= 6 {
                prop_assert_eq!(small.get(i, j), b);
            }
        }
    }
}

fn bench(src: &str, n: usize, d: i64) -> Workbench<PrimeField> {
    let p = Presentation::parse(src).unwrap();
    let a = GradedAlgebra::new(&p, f(), d as u32, &Budget::default()).unwrap();
    Workbench::new(
        Arc::new(a),
        Window {
            max_hom: n,
            max_deg: d,
        },
    )
}

fn within(a: &RegularityValue, b: &RegularityValue) -> bool {
    let (x, y) = (a.interval(), b.interval());
    x.0.max(y.0) <= x.1.min(y.1)
}

#[test]
fn cm_regularity_routes_agree() {
    let cases = [
        ("gens x:1 y:1; rels x^2; y^2; x*y + y*x;", 6, 8),
        ("gens x:1; rels x^2;", 6, 8),
        ("gens x:1 y:1; rels y*x - x*y;", 4, 8),
        ("gens x:1 y:1; rels x^2*y - y*x^2; x*y^2 - y^2*x;", 5, 10),
    ];
    let mut both = 0;
    for (src, n, d) in cases {
        let wb = bench(src, n, d);
        let alg = wb.algebra().clone();
        let mut modules = vec![
            ModulePresentation::trivial(&alg),
            ModulePresentation::free(vec![0]),
        ];
        for seed in 0..6 {
            let params = RandomModuleParams {
                num_gens: 1,
                gen_degrees: vec![0],
                num_rels: 3,
                rel_degree: 2,
            };
            modules.push(ModulePresentation::random(&alg, seed, &params));
        }
        for m in modules {
            let Ok(cm) = wb.cm_regularity(&m) else {
                continue;
            };
            if let (Some(t), Some(l)) = (&cm.torsion, &cm.duality) {
                both += 1;
                assert_eq!(cm.route, CmRoute::Torsion);
                assert!(within(t, l), "{src}: torsion {t} vs duality {l}");
                if l.certified() {
                    assert_eq!(t.value, l.value, "{src}");
                }
            }
        }
    }
    assert!(both >= 10);
}

fn quadratic_algebras() -> Vec<Presentation> {
    let mut v: Vec<Presentation> = [
        "gens x:1 y:1; rels y*x - x*y;",
        "gens x:1 y:1; rels x^2; y^2; x*y + y*x;",
        "gens x:1; rels x^2;",
        "gens x:1 y:1; rels y*x - 2*x*y;",
        "gens x:1 y:1; rels x*y;",
        "gens x:1 y:1; rels x^2; x*y;",
        "gens x:1 y:1 z:1; rels y*x - x*y; z*x - x*z; z*y - y*z;",
    ]
    .iter()
    .map(|s| Presentation::parse(s).unwrap())
    .collect();
    v.extend((0..8).map(|i| ncreg::harness::random_quadratic(42, i)));
    v
}

#[test]
fn ext_regularity_of_k_vanishes_exactly_for_linear_tables() {
    for p in quadratic_algebras()
        .into_iter()
        .chain([Presentation::parse("gens x:1 y:1; rels x^2*y - y*x^2; x*y^2 - y^2*x;").unwrap()])
    {
        let a = GradedAlgebra::new(&p, f(), 6, &Budget::default()).unwrap();
        let wb = Workbench::new(
            Arc::new(a),
            Window {
                max_hom: 4,
                max_deg: 6,
            },
        );
        let reg = wb.ext_regularity(wb.resolution_of_k());
        let linear = wb.koszul().unwrap().is_linear();
        assert_eq!(
            reg.value == ncreg::graded::ExtInt::Finite(0),
            linear,
            "{}",
            p.to_text()
        );
    }
}

#[test]
fn left_and_right_resolutions_of_k_agree() {
    for p in quadratic_algebras()
        .into_iter()
        .chain([Presentation::parse("gens x:1 y:1; rels x^2*y - y*x^2; x*y^2 - y^2*x;").unwrap()])
    {
        let tables: Vec<_> = [p.clone(), p.opposite()]
            .iter()
            .map(|q| {
                let a = Arc::new(GradedAlgebra::new(q, f(), 7, &Budget::default()).unwrap());
                let k = ModulePresentation::trivial(&a);
                MinimalResolution::compute(a, &k, 4, 7)
                    .unwrap()
                    .betti_table()
            })
            .collect();
        assert_eq!(tables[0].entries, tables[1].entries, "{}", p.to_text());
    }
}

#[test]
fn rationals_and_large_prime_agree_on_small_examples() {
    for src in [
        "gens x:1 y:1; rels y*x - 1/2*x*y;",
        "gens x:1 y:1; rels x^2 - 3*y^2; x*y + y*x;",
    ] {
        let q = Presentation::parse(&format!("field Q; {src}")).unwrap();
        let p = Presentation::parse(src).unwrap();
        let aq = Arc::new(
            GradedAlgebra::new(&q, ncreg::field::Rationals, 6, &Budget::default()).unwrap(),
        );
        let ap = Arc::new(GradedAlgebra::new(&p, f(), 6, &Budget::default()).unwrap());
        let bq = MinimalResolution::compute(aq.clone(), &ModulePresentation::trivial(&aq), 4, 6)
            .unwrap()
            .betti_table();
        let bp = MinimalResolution::compute(ap.clone(), &ModulePresentation::trivial(&ap), 4, 6)
            .unwrap()
            .betti_table();
        assert_eq!(bq.entries, bp.entries);
    }
}
