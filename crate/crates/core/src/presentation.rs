//! Presentations of connected graded algebras and their text format.
//!
//! ```text
//! # the polynomial ring in two variables
//! field Q;
//! gens x:1 y:1;
//! rels y*x - x*y;
//! ```

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::field::{FieldSpec, Rationals};
use crate::parse::{parse_poly, Lexer, ParseError, Tok};
use crate::poly::{format_terms, FreeAlgebra, NcPolynomial};
use crate::word::{DegLex, Generator, Word};

const KEYWORDS: &[&str] = &["field", "gens", "rels", "order"];

/// A connected graded algebra `k<gens> / (rels)`.
///
/// Relation coefficients are stored as exact rationals, already reduced into
/// the coefficient field (integers in `[0, p)` for prime fields).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub field: FieldSpec,
    pub generators: Vec<Generator>,
    pub relations: Vec<NcPolynomial<Rationals>>,
}

impl Presentation {
    pub fn new(
        field: FieldSpec,
        generators: Vec<Generator>,
        relations: Vec<Vec<(Word, BigRational)>>,
    ) -> Result<Self, ParseError> {
        let mut seen = HashMap::new();
        if generators.len() > 255 {
            return Err(ParseError::TooManyGenerators);
        }
        for g in &generators {
            if g.degree == 0 {
                return Err(ParseError::NonPositiveDegree(g.name.clone()));
            }
            if seen.insert(g.name.clone(), ()).is_some() {
                return Err(ParseError::DuplicateGenerator(g.name.clone()));
            }
        }
        let free = FreeAlgebra::new(Rationals, generators.clone());
        let mut rels = Vec::new();
        for (index, terms) in relations.into_iter().enumerate() {
            let mut norm = Vec::with_capacity(terms.len());
            for (w, c) in terms {
                norm.push((w, field.normalize(&c)?));
            }
            let p = free.from_terms(norm);
            // reduce again: combining terms may leave values outside [0, p)
            let p = free.from_terms(
                p.terms()
                    .iter()
                    .map(|(w, c)| Ok((w.clone(), field.normalize(c)?)))
                    .collect::<Result<Vec<_>, ParseError>>()?,
            );
            if p.is_zero() {
                continue;
            }
            let degree = free
                .homogeneous_degree(&p)
                .ok_or(ParseError::Inhomogeneous { index })?;
            if degree < 2 {
                return Err(ParseError::LowDegree { index, degree });
            }
            rels.push(p);
        }
        Ok(Presentation {
            field,
            generators,
            relations: rels,
        })
    }

    pub fn parse(src: &str) -> Result<Self, ParseError> {
        let mut lx = Lexer::new(src)?;
        let mut field = None;
        let mut gens: Option<Vec<Generator>> = None;
        let mut raw_rels: Vec<Vec<(Word, BigRational)>> = Vec::new();
        let mut names: HashMap<String, usize> = HashMap::new();
        loop {
            match lx.peek().clone() {
                Tok::Eof => break,
                Tok::Ident(kw) if kw == "field" => {
                    lx.next();
                    field = Some(parse_field(&mut lx)?);
                    lx.expect(&Tok::Semi, "`;` after field")?;
                }
                Tok::Ident(kw) if kw == "order" => {
                    lx.next();
                    let o = lx.ident("monomial order")?;
                    if o != "deglex" {
                        return Err(ParseError::UnsupportedOrder(o));
                    }
                    lx.expect(&Tok::Semi, "`;` after order")?;
                }
                Tok::Ident(kw) if kw == "gens" => {
                    lx.next();
                    let mut list = Vec::new();
                    while let Tok::Ident(name) = lx.peek().clone() {
                        lx.next();
                        lx.expect(&Tok::Colon, "`:` after generator name")?;
                        let d = lx.integer("generator degree")?;
                        let degree =
                            d.to_u32()
                                .filter(|&d| d <= 64)
                                .ok_or_else(|| ParseError::Syntax {
                                    pos: lx.pos(),
                                    msg: "generator degree out of range".into(),
                                })?;
                        if names.insert(name.clone(), list.len()).is_some() {
                            return Err(ParseError::DuplicateGenerator(name));
                        }
                        list.push(Generator { name, degree });
                    }
                    lx.expect(&Tok::Semi, "`;` after generator list")?;
                    gens = Some(list);
                }
                Tok::Ident(kw) if kw == "rels" => {
                    lx.next();
                    if gens.is_none() {
                        return lx.error("`gens` must precede `rels`");
                    }
                    while !(lx.peek() == &Tok::Eof || lx.at_keyword(KEYWORDS)) {
                        raw_rels.push(parse_poly(&mut lx, &names)?);
                        if lx.peek() != &Tok::Eof {
                            lx.expect(&Tok::Semi, "`;` after relation")?;
                        }
                    }
                }
                _ => return lx.error("expected `field`, `gens`, `rels` or `order`"),
            }
        }
        let gens = match gens {
            Some(g) => g,
            None => return lx.error("missing `gens` statement"),
        };
        Presentation::new(field.unwrap_or_default(), gens, raw_rels)
    }

    /// Canonical text form; `parse(to_text(p)) == p`.
    pub fn to_text(&self) -> String {
        let mut s = format!("field {};\ngens", self.field);
        for g in &self.generators {
            s.push_str(&format!(" {}:{}", g.name, g.degree));
        }
        s.push_str(";\n");
        if !self.relations.is_empty() {
            s.push_str("rels ");
            let rels: Vec<String> = self.relations.iter().map(|r| self.format_poly(r)).collect();
            s.push_str(&rels.join(";\n     "));
            s.push_str(";\n");
        }
        s
    }

    pub fn format_poly(&self, p: &NcPolynomial<Rationals>) -> String {
        let balance = |c: &BigRational| match self.field {
            FieldSpec::Prime { characteristic } if c.to_integer() * 2 > characteristic.into() => {
                c - BigRational::from_integer(characteristic.into())
            }
            _ => c.clone(),
        };
        format_terms(
            p.terms().iter().map(|(w, c)| (w, balance(c))),
            &self.generators,
        )
    }

    pub fn order(&self) -> DegLex {
        DegLex::from_generators(&self.generators)
    }

    pub fn generator_names(&self) -> HashMap<String, usize> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.name.clone(), i))
            .collect()
    }

    pub fn relation_degrees(&self) -> Vec<u32> {
        let o = self.order();
        self.relations
            .iter()
            .map(|r| o.degree(r.leading_word().unwrap()))
            .collect()
    }

    pub fn max_relation_degree(&self) -> u32 {
        self.relation_degrees().into_iter().max().unwrap_or(0)
    }

    pub fn generated_in_degree_one(&self) -> bool {
        self.generators.iter().all(|g| g.degree == 1)
    }

    /// The opposite algebra: every relation word reversed.
    pub fn opposite(&self) -> Presentation {
        let free = FreeAlgebra::new(Rationals, self.generators.clone());
        Presentation {
            field: self.field,
            generators: self.generators.clone(),
            relations: self.relations.iter().map(|r| free.reverse(r)).collect(),
        }
    }
}

fn parse_field(lx: &mut Lexer) -> Result<FieldSpec, ParseError> {
    let pos = lx.pos();
    let kind = lx.ident("field kind (`Q` or `F <prime>`)")?;
    match kind.as_str() {
        "Q" => Ok(FieldSpec::Rationals),
        "F" => {
            let p = lx.integer("characteristic")?;
            let p = p.to_u64().unwrap_or(u64::MAX);
            Ok(FieldSpec::prime(p)?)
        }
        _ => Err(ParseError::Syntax {
            pos,
            msg: format!("unknown field `{kind}`"),
        }),
    }
}

/// Builds the presentation's relations over a concrete field.
pub fn relations_over<F: crate::field::Field>(
    pres: &Presentation,
    free: &FreeAlgebra<F>,
) -> Vec<NcPolynomial<F>> {
    pres.relations
        .iter()
        .map(|r| {
            free.from_terms(r.terms().iter().map(|(w, c)| {
                let c = free
                    .field()
                    .from_rational(c)
                    .expect("coefficients were validated against the field at parse time");
                (w.clone(), c)
            }))
        })
        .filter(|p| !p.is_zero())
        .collect()
}
