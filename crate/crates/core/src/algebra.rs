//! The graded quotient algebra `A = k<X>/I` in a finite degree window,
//! represented by monomial bases and left multiplication tables.

use std::collections::HashMap;

use thiserror::Error;

use crate::field::Field;
use crate::graded::GradedDims;
use crate::groebner::{groebner_for, Budget, GroebnerBasis, GroebnerError};
use crate::linalg::SparseVec;
use crate::poly::{FreeAlgebra, NcPolynomial};
use crate::presentation::Presentation;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("Gröbner basis only certified to degree {certified}, degree {needed} requested (budget exhausted)")]
    Budget { certified: u32, needed: u32 },
}

/// An element of `A_d` in monomial-basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element<F: Field> {
    pub degree: u32,
    pub coords: SparseVec<F::Elem>,
}

impl<F: Field> Element<F> {
    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }
}

#[derive(Debug)]
pub struct GradedAlgebra<F: Field> {
    presentation: Presentation,
    gb: GroebnerBasis<F>,
    max_degree: u32,
    bases: Vec<Vec<Word>>,
    index: Vec<HashMap<Word, usize>>,
    /// `left[g][m][i]` = coordinates of `x_g * basis(m)[i]` in `A_{m + deg g}`.
    left: Vec<Vec<Vec<SparseVec<F::Elem>>>>,
    max_relation_degree: u32,
}

impl<F: Field> GradedAlgebra<F> {
    pub fn new(
        presentation: &Presentation,
        field: F,
        max_degree: u32,
        budget: &Budget,
    ) -> Result<Self, AlgebraError> {
        let gb = groebner_for(presentation, field, max_degree, budget)?;
        Self::from_groebner(presentation, gb, max_degree)
    }

    pub fn from_groebner(
        presentation: &Presentation,
        gb: GroebnerBasis<F>,
        max_degree: u32,
    ) -> Result<Self, AlgebraError> {
        if gb.certified_degree() < max_degree && !gb.is_complete() {
            return Err(AlgebraError::Budget {
                certified: gb.certified_degree(),
                needed: max_degree,
            });
        }
        let mut bases = Vec::with_capacity(max_degree as usize + 1);
        for d in 0..=max_degree {
            bases.push(gb.monomial_basis(d)?);
        }
        let index: Vec<HashMap<Word, usize>> = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
            .collect();
        let free = gb.free().clone();
        let f = free.field().clone();
        let mut left = Vec::new();
        for g in 0..free.num_generators() {
            let dg = free.generators()[g].degree;
            let mut per_m = Vec::new();
            for m in 0..=max_degree {
                if m + dg > max_degree {
                    break;
                }
                let target = &index[(m + dg) as usize];
                let rows = bases[m as usize]
                    .iter()
                    .map(|w| {
                        let p = gb
                            .normal_form(&free.monomial(w.prepend(g), f.one()))
                            .unwrap();
                        let mut v: SparseVec<F::Elem> = p
                            .into_terms()
                            .into_iter()
                            .map(|(w, c)| (target[&w], c))
                            .collect();
                        v.sort_by_key(|(i, _)| *i);
                        v
                    })
                    .collect();
                per_m.push(rows);
            }
            left.push(per_m);
        }
        Ok(GradedAlgebra {
            presentation: presentation.clone(),
            max_relation_degree: presentation.max_relation_degree(),
            gb,
            max_degree,
            bases,
            index,
            left,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn groebner(&self) -> &GroebnerBasis<F> {
        &self.gb
    }

    pub fn free(&self) -> &FreeAlgebra<F> {
        self.gb.free()
    }

    pub fn field(&self) -> &F {
        self.gb.field()
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn max_relation_degree(&self) -> u32 {
        self.max_relation_degree
    }

    pub fn num_generators(&self) -> usize {
        self.free().num_generators()
    }

    pub fn generator_degree(&self, g: usize) -> u32 {
        self.free().generators()[g].degree
    }

    pub fn generated_in_degree_one(&self) -> bool {
        self.presentation.generated_in_degree_one()
    }

    /// `dim A_d`; zero for negative `d`. Panics beyond the window.
    pub fn dim(&self, d: i64) -> usize {
        if d < 0 {
            return 0;
        }
        assert!(
            d <= self.max_degree as i64,
            "degree {d} beyond algebra window {}",
            self.max_degree
        );
        self.bases[d as usize].len()
    }

    pub fn basis(&self, d: u32) -> &[Word] {
        &self.bases[d as usize]
    }

    /// Monomial basis of `A_d`, empty for negative `d`.
    pub fn basis_i64(&self, d: i64) -> &[Word] {
        if d < 0 {
            &[]
        } else {
            &self.bases[d as usize]
        }
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        let d = self.free().degree(w) as usize;
        self.index.get(d)?.get(w).copied()
    }

    pub fn hilbert_function(&self) -> GradedDims {
        GradedDims::from_map(
            0,
            self.max_degree as i64,
            self.bases
                .iter()
                .enumerate()
                .map(|(d, b)| (d as i64, b.len() as u64)),
        )
    }

    /// Left multiplication by generator `g` on an element of `A_m`.
    pub fn left_gen(&self, g: usize, m: u32, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let f = self.field();
        let table = &self.left[g][m as usize];
        let mut acc: Vec<(usize, F::Elem)> = Vec::new();
        for (i, c) in v {
            acc = crate::linalg::axpy(f, &acc, c, &table[*i]);
        }
        acc
    }

    /// Row of the left multiplication table: `x_g * basis(m)[i]`.
    pub fn left_gen_basis(&self, g: usize, m: u32, i: usize) -> &[(usize, F::Elem)] {
        &self.left[g][m as usize][i]
    }

    /// Coordinates of a homogeneous polynomial after reduction to normal form.
    pub fn element(&self, p: &NcPolynomial<F>) -> Result<Element<F>, GroebnerError> {
        let nf = self.gb.normal_form(p)?;
        let degree = match nf.leading_word() {
            Some(w) => self.free().degree(w),
            None => {
                let d = p.leading_word().map_or(0, |w| self.free().degree(w));
                return Ok(Element {
                    degree: d,
                    coords: Vec::new(),
                });
            }
        };
        let mut coords: SparseVec<F::Elem> = nf
            .into_terms()
            .into_iter()
            .map(|(w, c)| (self.index[degree as usize][&w], c))
            .collect();
        coords.sort_by_key(|(i, _)| *i);
        Ok(Element { degree, coords })
    }

    pub fn to_poly(&self, e: &Element<F>) -> NcPolynomial<F> {
        let basis = &self.bases[e.degree as usize];
        self.free()
            .from_terms(e.coords.iter().map(|(i, c)| (basis[*i].clone(), c.clone())))
    }

    /// Product of algebra elements, via the multiplication tables.
    pub fn mul(&self, a: &Element<F>, b: &Element<F>) -> Element<F> {
        let degree = a.degree + b.degree;
        let f = self.field();
        let mut acc: SparseVec<F::Elem> = Vec::new();
        for (i, c) in &a.coords {
            let w = &self.bases[a.degree as usize][*i];
            let prod = self.left_word(w, b.degree, &b.coords);
            acc = crate::linalg::axpy(f, &acc, c, &prod);
        }
        Element {
            degree,
            coords: acc,
        }
    }

    /// `w * v` for a word `w` and `v` in `A_m`.
    pub fn left_word(&self, w: &Word, m: u32, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let mut cur = v.to_vec();
        let mut deg = m;
        for &g in w.letters().iter().rev() {
            cur = self.left_gen(g as usize, deg, &cur);
            deg += self.generator_degree(g as usize);
        }
        cur
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn alg(src: &str, d: u32) -> GradedAlgebra<PrimeField> {
        let p = Presentation::parse(src).unwrap();
        GradedAlgebra::new(&p, PrimeField::new(32003), d, &Budget::default()).unwrap()
    }

    #[test]
    fn polynomial_ring_tables() {
        let a = alg("gens x:1 y:1; rels y*x - x*y;", 5);
        assert_eq!(a.hilbert_function().values(), vec![1, 2, 3, 4, 5, 6]);
        // y * x = x*y
        let x = a.element(&a.free().generator(0)).unwrap();
        let y = a.element(&a.free().generator(1)).unwrap();
        assert_eq!(a.mul(&y, &x), a.mul(&x, &y));
    }

    #[test]
    fn quantum_plane_commutation() {
        let a = alg("gens x:1 y:1; rels y*x - 2*x*y;", 4);
        let x = a.element(&a.free().generator(0)).unwrap();
        let y = a.element(&a.free().generator(1)).unwrap();
        let yx = a.mul(&y, &x);
        let xy = a.mul(&x, &y);
        let two = a.field().from_i64(2);
        assert_eq!(
            yx.coords,
            xy.coords
                .iter()
                .map(|(i, c)| (*i, a.field().mul(c, &two)))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn multiplication_is_associative() {
        let a = alg("gens x:1 y:1; rels x^2*y - y*x^2; x*y^2 - y^2*x;", 7);
        let f = a.free();
        let x = a.element(&f.generator(0)).unwrap();
        let y = a.element(&f.generator(1)).unwrap();
        let xy = a.mul(&x, &y);
        let yx = a.mul(&y, &x);
        let lhs = a.mul(&a.mul(&xy, &yx), &x);
        let rhs = a.mul(&xy, &a.mul(&yx, &x));
        assert_eq!(lhs, rhs);
        // the relations hold
        let xxy = a.mul(&a.mul(&x, &x), &y);
        let yxx = a.mul(&y, &a.mul(&x, &x));
        assert_eq!(xxy, yxx);
    }
}
