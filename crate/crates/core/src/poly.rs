//! Noncommutative polynomials: finite linear combinations of words.

use std::cmp::Ordering;

use crate::field::Field;
use crate::word::{format_word, DegLex, Generator, Word};

/// Terms are kept sorted by decreasing deglex order with no zero coefficients,
/// so the leading term is always `terms[0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcPolynomial<F: Field> {
    terms: Vec<(Word, F::Elem)>,
}

impl<F: Field> NcPolynomial<F> {
    pub fn zero() -> Self {
        NcPolynomial { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Word, F::Elem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Word, F::Elem)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Word, F::Elem)> {
        self.terms.first()
    }

    pub fn leading_word(&self) -> Option<&Word> {
        self.terms.first().map(|(w, _)| w)
    }

    pub fn coefficient(&self, w: &Word) -> Option<&F::Elem> {
        self.terms.iter().find(|(v, _)| v == w).map(|(_, c)| c)
    }
}

/// The free algebra `k<x_1, ..., x_n>` as an arithmetic context.
#[derive(Debug, Clone)]
pub struct FreeAlgebra<F: Field> {
    field: F,
    order: DegLex,
    gens: Vec<Generator>,
}

impl<F: Field> FreeAlgebra<F> {
    pub fn new(field: F, gens: Vec<Generator>) -> Self {
        let order = DegLex::from_generators(&gens);
        FreeAlgebra { field, order, gens }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn order(&self) -> &DegLex {
        &self.order
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    pub fn degree(&self, w: &Word) -> u32 {
        self.order.degree(w)
    }

    pub fn compare(&self, a: &Word, b: &Word) -> Ordering {
        self.order.compare(a, b)
    }

    /// Collects arbitrary terms into a normalized polynomial.
    pub fn from_terms<I>(&self, terms: I) -> NcPolynomial<F>
    where
        I: IntoIterator<Item = (Word, F::Elem)>,
    {
        let mut v: Vec<(Word, F::Elem)> = terms.into_iter().collect();
        v.sort_by(|a, b| self.order.compare(&b.0, &a.0));
        let mut out: Vec<(Word, F::Elem)> = Vec::with_capacity(v.len());
        for (w, c) in v {
            match out.last_mut() {
                Some((lw, lc)) if *lw == w => *lc = self.field.add(lc, &c),
                _ => out.push((w, c)),
            }
        }
        out.retain(|(_, c)| !self.field.is_zero(c));
        NcPolynomial { terms: out }
    }

    pub fn monomial(&self, w: Word, c: F::Elem) -> NcPolynomial<F> {
        if self.field.is_zero(&c) {
            NcPolynomial::zero()
        } else {
            NcPolynomial {
                terms: vec![(w, c)],
            }
        }
    }

    pub fn one(&self) -> NcPolynomial<F> {
        self.monomial(Word::empty(), self.field.one())
    }

    pub fn generator(&self, g: usize) -> NcPolynomial<F> {
        self.monomial(Word::letter(g), self.field.one())
    }

    pub fn add(&self, p: &NcPolynomial<F>, q: &NcPolynomial<F>) -> NcPolynomial<F> {
        self.merge(p, q, false)
    }

    pub fn sub(&self, p: &NcPolynomial<F>, q: &NcPolynomial<F>) -> NcPolynomial<F> {
        self.merge(p, q, true)
    }

    fn merge(&self, p: &NcPolynomial<F>, q: &NcPolynomial<F>, negate: bool) -> NcPolynomial<F> {
        let f = &self.field;
        let mut out = Vec::with_capacity(p.len() + q.len());
        let (mut i, mut j) = (0, 0);
        let qc = |c: &F::Elem| if negate { f.neg(c) } else { c.clone() };
        while i < p.terms.len() && j < q.terms.len() {
            let (pw, pc) = &p.terms[i];
            let (qw, qcf) = &q.terms[j];
            match self.order.compare(pw, qw) {
                Ordering::Greater => {
                    out.push((pw.clone(), pc.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((qw.clone(), qc(qcf)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        f.sub(pc, qcf)
                    } else {
                        f.add(pc, qcf)
                    };
                    if !f.is_zero(&c) {
                        out.push((pw.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(p.terms[i..].iter().cloned());
        out.extend(q.terms[j..].iter().map(|(w, c)| (w.clone(), qc(c))));
        NcPolynomial { terms: out }
    }

    pub fn scale(&self, p: &NcPolynomial<F>, c: &F::Elem) -> NcPolynomial<F> {
        if self.field.is_zero(c) {
            return NcPolynomial::zero();
        }
        NcPolynomial {
            terms: p
                .terms
                .iter()
                .map(|(w, a)| (w.clone(), self.field.mul(a, c)))
                .collect(),
        }
    }

    pub fn neg(&self, p: &NcPolynomial<F>) -> NcPolynomial<F> {
        NcPolynomial {
            terms: p
                .terms
                .iter()
                .map(|(w, a)| (w.clone(), self.field.neg(a)))
                .collect(),
        }
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self, p: &NcPolynomial<F>) -> NcPolynomial<F> {
        match p.leading() {
            None => NcPolynomial::zero(),
            Some((_, c)) => self.scale(p, &self.field.inv(c)),
        }
    }

    /// Product in the free algebra (concatenation, extended bilinearly).
    pub fn mul(&self, p: &NcPolynomial<F>, q: &NcPolynomial<F>) -> NcPolynomial<F> {
        let mut terms = Vec::with_capacity(p.len() * q.len());
        for (a, ca) in &p.terms {
            for (b, cb) in &q.terms {
                terms.push((a.concat(b), self.field.mul(ca, cb)));
            }
        }
        self.from_terms(terms)
    }

    /// `left * p * right` for words `left`, `right`.
    pub fn sandwich(&self, left: &Word, p: &NcPolynomial<F>, right: &Word) -> NcPolynomial<F> {
        // deglex is compatible with concatenation, so the order is preserved
        NcPolynomial {
            terms: p
                .terms
                .iter()
                .map(|(w, c)| (left.concat(w).concat(right), c.clone()))
                .collect(),
        }
    }

    /// Common degree of all terms, `None` for zero or inhomogeneous input.
    pub fn homogeneous_degree(&self, p: &NcPolynomial<F>) -> Option<u32> {
        let d = self.order.degree(&p.terms.first()?.0);
        p.terms
            .iter()
            .all(|(w, _)| self.order.degree(w) == d)
            .then_some(d)
    }

    /// Reverses every word; the anti-isomorphism onto the opposite algebra.
    pub fn reverse(&self, p: &NcPolynomial<F>) -> NcPolynomial<F> {
        self.from_terms(p.terms.iter().map(|(w, c)| (w.reversed(), c.clone())))
    }

    pub fn format(&self, p: &NcPolynomial<F>) -> String {
        format_terms(
            p.terms
                .iter()
                .map(|(w, c)| (w, self.field.display_rational(c))),
            &self.gens,
        )
    }
}

pub(crate) fn format_terms<'a, I>(terms: I, gens: &[Generator]) -> String
where
    I: IntoIterator<Item = (&'a Word, num_rational::BigRational)>,
{
    use num_traits::{One, Signed};
    let mut s = String::new();
    for (i, (w, c)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if w.is_empty() {
            s.push_str(&crate::field::format_rational(&a));
        } else {
            if !a.is_one() {
                s.push_str(&crate::field::format_rational(&a));
                s.push('*');
            }
            s.push_str(&format_word(w, gens));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}
