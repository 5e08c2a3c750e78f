//! `wasm-bindgen` entry points for the static demo page in `www/`.
//!
//! Every function takes the algebra as presentation text and returns a JSON
//! string; failures come back as `{"error": "..."}`.

use std::sync::Arc;

use ncreg::algebra::GradedAlgebra;
use ncreg::field::{dispatch, Field, FieldVisitor};
use ncreg::groebner::Budget;
use ncreg::module::{split_algebra_line, ModulePresentation, QuotientModule};
use ncreg::presentation::Presentation;
use ncreg::regularity::{Window, Workbench};
use ncreg::resolution::required_algebra_degree;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest window the page accepts; keeps a browser tab responsive.
const MAX_DEG: u32 = 16;
const MAX_HOM: u32 = 10;

#[derive(Clone, Copy)]
enum Query {
    Betti,
    Hilbert,
    Classify,
}

struct Run<'a> {
    query: Query,
    pres: &'a Presentation,
    module: &'a str,
    window: Window,
}

impl FieldVisitor for Run<'_> {
    type Output = Result<Value, String>;

    fn visit<F: Field>(self, field: F) -> Self::Output {
        let d = self.window.max_deg;
        let load = |deg: i64| {
            GradedAlgebra::new(self.pres, field.clone(), deg as u32, &Budget::default())
                .map(Arc::new)
                .map_err(|e| e.to_string())
        };
        let mut alg = load(d)?;
        let mut m = module(&alg, self.module)?;
        let needed = required_algebra_degree(&m, d);
        if needed > d {
            alg = load(needed)?;
            m = module(&alg, self.module)?;
        }
        let wb = Workbench::new(alg.clone(), self.window);
        match self.query {
            Query::Betti => Ok(wb
                .resolve(&m)
                .map_err(|e| e.to_string())?
                .betti_table()
                .to_json_value()),
            Query::Hilbert => {
                let dims = if self.module.trim().is_empty() {
                    alg.hilbert_function()
                } else {
                    QuotientModule::new(alg.clone(), &m, d).hilbert_function()
                };
                Ok(json!({
                    "schema": 1,
                    "lo": dims.lo,
                    "hi": dims.hi,
                    "dims": (dims.lo..=dims.hi).map(|n| dims.get(n).unwrap_or(0)).collect::<Vec<_>>(),
                }))
            }
            Query::Classify => Ok(wb.classify().to_json_value(&wb)),
        }
    }
}

fn module<F: Field>(alg: &GradedAlgebra<F>, src: &str) -> Result<ModulePresentation<F>, String> {
    match src.trim() {
        "" | "k" | "trivial" => Ok(ModulePresentation::trivial(alg)),
        "A" | "free" => Ok(ModulePresentation::free(vec![0])),
        text => {
            ModulePresentation::parse(&split_algebra_line(text).0, alg).map_err(|e| e.to_string())
        }
    }
}

fn compute(
    query: Query,
    algebra: &str,
    module: &str,
    max_hom: u32,
    max_deg: u32,
) -> Result<Value, String> {
    if max_deg > MAX_DEG || max_hom > MAX_HOM {
        return Err(format!(
            "window too large for the demo (max_hom <= {MAX_HOM}, max_deg <= {MAX_DEG})"
        ));
    }
    let pres = Presentation::parse(algebra).map_err(|e| e.to_string())?;
    let window = Window {
        max_hom: max_hom as usize,
        max_deg: max_deg as i64,
    };
    dispatch(
        &pres.field.clone(),
        Run {
            query,
            pres: &pres,
            module,
            window,
        },
    )
}

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Graded Betti numbers of a module (`k`, `A` or module text; empty means `k`).
#[wasm_bindgen]
pub fn betti(algebra: &str, module: &str, max_hom: u32, max_deg: u32) -> String {
    respond(compute(Query::Betti, algebra, module, max_hom, max_deg))
}

/// Hilbert function of the algebra, or of the module when one is given.
#[wasm_bindgen]
pub fn hilbert(algebra: &str, module: &str, max_deg: u32) -> String {
    respond(compute(Query::Hilbert, algebra, module, 0, max_deg))
}

#[wasm_bindgen]
pub fn classify(algebra: &str, max_hom: u32, max_deg: u32) -> String {
    respond(compute(Query::Classify, algebra, "", max_hom, max_deg))
}
