//! Ext-regularity, depth, Koszulity, AS-Gorenstein classification and
//! Castelnuovo–Mumford regularity.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::algebra::GradedAlgebra;
use crate::field::Field;
use crate::graded::ExtInt;
use crate::module::{LeftModule, ModulePresentation, QuotientModule};
use crate::resolution::{BettiTable, ExtGroup, MinimalResolution, ResolutionError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegularityError {
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error("Koszulity needs an algebra generated in degree 1")]
    NotDegreeOne,
    #[error("no CM-regularity route applies: module is not known to be finite dimensional and the algebra is not classified AS-Gorenstein")]
    Unsupported,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub max_hom: usize,
    pub max_deg: i64,
}

/// How a computed value relates to the true one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    Exact,
    /// true value `>=` the reported one
    AtLeast,
    /// true value `<=` the reported one
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityValue {
    pub value: ExtInt,
    pub bound: Bound,
    pub window: Window,
}

impl RegularityValue {
    pub fn exact(value: ExtInt, window: Window) -> Self {
        RegularityValue {
            value,
            bound: Bound::Exact,
            window,
        }
    }

    pub fn certified(&self) -> bool {
        self.bound == Bound::Exact
    }

    /// Closed interval known to contain the true value.
    pub fn interval(&self) -> (ExtInt, ExtInt) {
        match self.bound {
            Bound::Exact => (self.value, self.value),
            Bound::AtLeast => (self.value, ExtInt::PosInf),
            Bound::AtMost => (ExtInt::NegInf, self.value),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        json!({ "value": self.value, "bound": self.bound, "certified": self.certified() })
    }
}

impl fmt::Display for RegularityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bound {
            Bound::Exact => write!(f, "{}", self.value),
            Bound::AtLeast => write!(f, ">= {}", self.value),
            Bound::AtMost => write!(f, "<= {}", self.value),
        }
    }
}

/// `sup { j - i : β_{i,j} ≠ 0 }`.
pub fn ext_regularity(b: &BettiTable, window: Window) -> RegularityValue {
    let v = ExtInt::sup(b.entries.keys().map(|&(i, j)| ExtInt::Finite(j - i as i64)));
    let bound = if b.terminated {
        Bound::Exact
    } else {
        Bound::AtLeast
    };
    RegularityValue {
        value: v,
        bound,
        window,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum KoszulVerdict {
    /// Linear up to homological degree `n`; `terminated` means the whole
    /// resolution is known, so the algebra is Koszul.
    KoszulUpTo {
        n: usize,
        terminated: bool,
    },
    NotKoszul {
        i: usize,
        j: i64,
    },
}

impl KoszulVerdict {
    pub fn is_linear(&self) -> bool {
        matches!(self, KoszulVerdict::KoszulUpTo { .. })
    }

    pub fn is_koszul(&self) -> bool {
        matches!(
            self,
            KoszulVerdict::KoszulUpTo {
                terminated: true,
                ..
            }
        )
    }
}

impl fmt::Display for KoszulVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KoszulVerdict::KoszulUpTo {
                n,
                terminated: true,
            } => write!(f, "koszul (linear resolution, pd {n})"),
            KoszulVerdict::KoszulUpTo { n, .. } => write!(f, "koszul up to {n}"),
            KoszulVerdict::NotKoszul { i, j } => write!(f, "not koszul (beta_{{{i},{j}}} != 0)"),
        }
    }
}

/// Koszulity from the Betti table of `k`.
pub fn is_koszul(
    b: &BettiTable,
    generated_in_degree_one: bool,
) -> Result<KoszulVerdict, RegularityError> {
    if !generated_in_degree_one {
        return Err(RegularityError::NotDegreeOne);
    }
    if let Some(&(i, j)) = b.entries.keys().find(|&&(i, j)| j != i as i64) {
        return Ok(KoszulVerdict::NotKoszul { i, j });
    }
    let n = if b.terminated {
        b.projective_dimension.finite().unwrap_or(0) as usize
    } else {
        b.max_hom
    };
    Ok(KoszulVerdict::KoszulUpTo {
        n,
        terminated: b.terminated,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Undetected,
    Gorenstein { d: usize, l: i64 },
    Regular { d: usize, l: i64 },
}

impl Verdict {
    pub fn type_dl(&self) -> Option<(usize, i64)> {
        match *self {
            Verdict::Undetected => None,
            Verdict::Gorenstein { d, l } | Verdict::Regular { d, l } => Some((d, l)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Undetected => "undetected",
            Verdict::Gorenstein { .. } => "gorenstein",
            Verdict::Regular { .. } => "regular",
        }
    }
}

pub const HYPOTHESES_NOTE: &str =
    "Noetherianity and the chi-condition are assumed, not verified; the twist of the dualizing complex is ignored since only graded dimensions enter";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub standard: bool,
    pub koszul: Option<KoszulVerdict>,
    /// `Ext^i(k, A)` for every computable `i`.
    pub ext: Vec<ExtGroup>,
    pub window: Window,
    pub diagnostics: Vec<String>,
}

/// Shared computations for one algebra and window.
pub struct Workbench<F: Field> {
    alg: Arc<GradedAlgebra<F>>,
    window: Window,
    k_res: OnceLock<MinimalResolution<F>>,
    a_target: OnceLock<QuotientModule<F>>,
    class: OnceLock<Classification>,
}

impl<F: Field> Workbench<F> {
    pub fn new(alg: Arc<GradedAlgebra<F>>, window: Window) -> Self {
        Workbench {
            alg,
            window,
            k_res: OnceLock::new(),
            a_target: OnceLock::new(),
            class: OnceLock::new(),
        }
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra<F>> {
        &self.alg
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn resolve(
        &self,
        m: &ModulePresentation<F>,
    ) -> Result<MinimalResolution<F>, RegularityError> {
        self.resolve_to(m, self.window.max_hom)
    }

    fn resolve_to(
        &self,
        m: &ModulePresentation<F>,
        max_hom: usize,
    ) -> Result<MinimalResolution<F>, RegularityError> {
        Ok(MinimalResolution::compute(
            self.alg.clone(),
            m,
            max_hom,
            self.window.max_deg,
        )?)
    }

    pub fn resolution_of_k(&self) -> &MinimalResolution<F> {
        self.k_res.get_or_init(|| {
            let k = ModulePresentation::trivial(&self.alg);
            MinimalResolution::compute(
                self.alg.clone(),
                &k,
                self.window.max_hom,
                self.window.max_deg,
            )
            .expect("window fits the algebra")
        })
    }

    /// `A` as a left module over itself, on the whole algebra window.
    pub fn algebra_module(&self) -> &QuotientModule<F> {
        self.a_target.get_or_init(|| {
            QuotientModule::new(
                self.alg.clone(),
                &ModulePresentation::free(vec![0]),
                self.alg.max_degree() as i64,
            )
        })
    }

    /// Graded pieces of `M` over the whole algebra window.
    pub fn module_pieces(&self, m: &ModulePresentation<F>) -> QuotientModule<F> {
        let lo = m.cover.min_shift().unwrap_or(0);
        QuotientModule::new(
            self.alg.clone(),
            m,
            lo.min(0) + self.alg.max_degree() as i64,
        )
    }

    pub fn ext_regularity(&self, res: &MinimalResolution<F>) -> RegularityValue {
        if res.is_zero_module() {
            return RegularityValue::exact(ExtInt::NegInf, self.window);
        }
        ext_regularity(&res.betti_table(), self.window)
    }

    pub fn koszul(&self) -> Result<KoszulVerdict, RegularityError> {
        is_koszul(
            &self.resolution_of_k().betti_table(),
            self.alg.generated_in_degree_one(),
        )
    }

    /// Least `i` with `Ext^i(k, M) ≠ 0`.
    pub fn depth(&self, m: &ModulePresentation<F>) -> RegularityValue {
        let target = self.module_pieces(m);
        self.depth_of(&target)
    }

    pub fn depth_of<N: LeftModule<F>>(&self, target: &N) -> RegularityValue {
        let rk = self.resolution_of_k();
        let mut all_exact = true;
        let mut last = None;
        for g in rk.ext_groups(target) {
            all_exact &= g.exact;
            if !g.is_zero() {
                let bound = if all_exact {
                    Bound::Exact
                } else {
                    Bound::AtMost
                };
                return RegularityValue {
                    value: ExtInt::Finite(g.index as i64),
                    bound,
                    window: self.window,
                };
            }
            last = Some(g.index);
        }
        if rk.is_terminated() && all_exact && last.is_some() {
            // Ext^i(k, -) vanishes beyond pd k
            return RegularityValue::exact(ExtInt::PosInf, self.window);
        }
        let next = last.map_or(0, |i| i as i64 + 1);
        RegularityValue {
            value: ExtInt::Finite(next),
            bound: Bound::AtLeast,
            window: self.window,
        }
    }

    pub fn classify(&self) -> &Classification {
        self.class.get_or_init(|| self.compute_classification())
    }

    fn compute_classification(&self) -> Classification {
        let rk = self.resolution_of_k();
        let koszul = self.koszul().ok();
        let ext = rk.ext_groups(self.algebra_module());
        let mut diagnostics = Vec::new();
        let inexact: Vec<usize> = ext.iter().filter(|g| !g.exact).map(|g| g.index).collect();
        if !inexact.is_empty() {
            diagnostics.push(format!(
                "Ext^i(k, A) not certified for i in {inexact:?}; try --max-deg {}",
                rk.needed_max_deg()
            ));
        }
        let nonzero: Vec<&ExtGroup> = ext.iter().filter(|g| !g.is_zero()).collect();
        let (pd, pd_exact) = rk.projective_dimension();
        let mut verdict = Verdict::Undetected;
        if inexact.is_empty() && nonzero.len() == 1 && nonzero[0].dims.total() == 1 {
            let g = nonzero[0];
            let d = g.index;
            let l = -g.dims.min_degree().unwrap();
            if pd_exact {
                if pd == ExtInt::Finite(d as i64) {
                    verdict = Verdict::Regular { d, l };
                } else {
                    diagnostics.push(format!("pd k = {pd} differs from the Ext degree {d}"));
                }
            } else {
                verdict = Verdict::Gorenstein { d, l };
                diagnostics.push(format!(
                    "resolution of k not terminated within {} steps; Gorenstein pattern certified to the window only",
                    self.window.max_hom
                ));
            }
        } else if nonzero.is_empty() {
            diagnostics.push("Ext^i(k, A) vanishes for every computed i".into());
        } else if inexact.is_empty() {
            diagnostics.push(format!(
                "Ext^i(k, A) nonzero for i in {:?} with total dimensions {:?}",
                nonzero.iter().map(|g| g.index).collect::<Vec<_>>(),
                nonzero.iter().map(|g| g.dims.total()).collect::<Vec<_>>()
            ));
        }
        let standard = verdict.type_dl().is_some_and(|(d, l)| l == d as i64);
        Classification {
            verdict,
            standard,
            koszul,
            ext,
            window: self.window,
            diagnostics,
        }
    }

    /// Route (a): a finite-dimensional module has CM.reg equal to its top degree.
    pub fn cm_regularity_torsion(&self, m: &ModulePresentation<F>) -> Option<RegularityValue> {
        let pieces = self.module_pieces(m);
        let top = pieces.finite_top()?;
        let v = if top < pieces.lo() {
            ExtInt::NegInf
        } else {
            ExtInt::Finite(top)
        };
        Some(RegularityValue::exact(v, self.window))
    }

    /// Route (b): local duality over an AS-Gorenstein algebra of type `(d, l)`,
    /// `CM.reg M = max_e (d - e - l - mindeg Ext^e(M, A))`.
    pub fn cm_regularity_duality(
        &self,
        m: &ModulePresentation<F>,
        known: Option<&MinimalResolution<F>>,
    ) -> Result<Option<RegularityValue>, RegularityError> {
        let Some((d, l)) = self.classify().verdict.type_dl() else {
            return Ok(None);
        };
        let computed;
        let res = match known {
            Some(r) if r.max_hom() > d => r,
            _ => {
                computed = self.resolve_to(m, self.window.max_hom.max(d + 1))?;
                &computed
            }
        };
        if res.is_zero_module() {
            return Ok(Some(RegularityValue::exact(ExtInt::NegInf, self.window)));
        }
        let (pd, pd_exact) = res.projective_dimension();
        let target = self.algebra_module();
        let mut found = ExtInt::NegInf;
        let mut potential = ExtInt::NegInf;
        let mut exact = true;
        for e in 0..=d {
            let forced_zero = pd_exact && pd.finite().is_some_and(|p| (e as i64) > p);
            if forced_zero {
                continue;
            }
            let Some(g) = res.ext_group(target, e) else {
                exact = false;
                continue;
            };
            exact &= g.exact;
            let term = |mindeg: i64| ExtInt::Finite(d as i64 - e as i64 - l - mindeg);
            match g.dims.min_degree() {
                Some(mn) => found = found.max(term(mn)),
                None => {
                    if g.dims.lo <= g.dims.hi {
                        potential = potential.max(term(g.dims.hi + 1));
                    } else {
                        exact = false;
                    }
                }
            }
        }
        let bound = if exact && potential <= found {
            Bound::Exact
        } else {
            Bound::AtLeast
        };
        Ok(Some(RegularityValue {
            value: found,
            bound,
            window: self.window,
        }))
    }

    /// CM.reg by whichever route applies; route (a) preferred.
    pub fn cm_regularity(
        &self,
        m: &ModulePresentation<F>,
    ) -> Result<CmRegularity, RegularityError> {
        self.cm_regularity_with(m, None)
    }

    /// As [`Self::cm_regularity`], reusing a resolution of `m` if it is long enough.
    pub fn cm_regularity_with(
        &self,
        m: &ModulePresentation<F>,
        known: Option<&MinimalResolution<F>>,
    ) -> Result<CmRegularity, RegularityError> {
        let torsion = self.cm_regularity_torsion(m);
        let duality = self.cm_regularity_duality(m, known)?;
        let (value, route) = match (&torsion, &duality) {
            (Some(t), _) => (t.clone(), CmRoute::Torsion),
            (None, Some(d)) => (d.clone(), CmRoute::LocalDuality),
            (None, None) => return Err(RegularityError::Unsupported),
        };
        Ok(CmRegularity {
            value,
            route,
            torsion,
            duality,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CmRoute {
    Torsion,
    LocalDuality,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmRegularity {
    pub value: RegularityValue,
    pub route: CmRoute,
    pub torsion: Option<RegularityValue>,
    pub duality: Option<RegularityValue>,
}

impl CmRegularity {
    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "value": self.value.value,
            "bound": self.value.bound,
            "certified": self.value.certified(),
            "route": self.route,
            "routes": {
                "torsion": self.torsion.as_ref().map(|v| v.to_json_value()),
                "local_duality": self.duality.as_ref().map(|v| v.to_json_value()),
            },
        })
    }
}

impl Classification {
    pub fn to_json_value<F: Field>(&self, wb: &Workbench<F>) -> serde_json::Value {
        let (d, l) = match self.verdict.type_dl() {
            Some((d, l)) => (json!(d), json!(l)),
            None => (serde_json::Value::Null, serde_json::Value::Null),
        };
        let mut diagnostics = self.diagnostics.clone();
        let cm = match wb.cm_regularity(&ModulePresentation::free(vec![0])) {
            Ok(c) => Some(c),
            Err(e) => {
                diagnostics.push(format!("CM.reg A: {e}"));
                None
            }
        };
        let ext_k = wb.ext_regularity(wb.resolution_of_k());
        let depth = wb.depth_of(wb.algebra_module());
        let exact = !matches!(self.verdict, Verdict::Gorenstein { .. })
            && self.ext.iter().all(|g| g.exact)
            && cm.as_ref().is_none_or(|c| c.value.certified())
            && ext_k.certified()
            && depth.certified();
        json!({
            "schema": 1,
            "verdict": self.verdict.name(),
            "d": d,
            "l": l,
            "standard": self.standard,
            "koszul": self.koszul,
            "values": {
                "cm_reg": cm.map(|c| c.to_json_value()),
                "ext_reg": ext_k.to_json_value(),
                "depth": depth.to_json_value(),
            },
            "ext_k_a": self.ext.iter().map(|g| json!({
                "i": g.index,
                "exact": g.exact,
                // null: the group vanishes in every degree
                "window": if g.dims.lo <= i64::MIN / 8 { serde_json::Value::Null } else { json!([g.dims.lo, g.dims.hi]) },
                "dims": g.dims.dims.iter().map(|(j, n)| json!([j, n])).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "certification": { "n_max": self.window.max_hom, "D": self.window.max_deg, "exact": exact },
            "hypotheses_note": HYPOTHESES_NOTE,
            "diagnostics": diagnostics,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::groebner::Budget;
    use crate::presentation::Presentation;

    fn bench(src: &str, n: usize, d: i64) -> Workbench<PrimeField> {
        let p = Presentation::parse(src).unwrap();
        let a =
            GradedAlgebra::new(&p, PrimeField::new(32003), d as u32, &Budget::default()).unwrap();
        Workbench::new(
            Arc::new(a),
            Window {
                max_hom: n,
                max_deg: d,
            },
        )
    }

    const POLY2: &str = "gens x:1 y:1; rels y*x - x*y;";
    const DUAL: &str = "gens x:1; rels x^2;";
    const EXT2: &str = "gens x:1 y:1; rels x^2; y^2; x*y + y*x;";
    const CUBIC: &str = "gens x:1 y:1; rels x^2*y - y*x^2; x*y^2 - y^2*x;";

    #[test]
    fn classification_examples() {
        let c = bench(POLY2, 4, 8);
        assert_eq!(c.classify().verdict, Verdict::Regular { d: 2, l: 2 });
        assert!(c.classify().standard);
        let c = bench(DUAL, 6, 8);
        assert_eq!(c.classify().verdict, Verdict::Gorenstein { d: 0, l: -1 });
        assert!(!c.classify().standard);
        let c = bench(EXT2, 5, 8);
        assert_eq!(c.classify().verdict, Verdict::Gorenstein { d: 0, l: -2 });
        let c = bench(CUBIC, 5, 10);
        assert_eq!(c.classify().verdict, Verdict::Regular { d: 3, l: 4 });
        assert_eq!(c.koszul().unwrap(), KoszulVerdict::NotKoszul { i: 2, j: 3 });
    }

    #[test]
    fn cm_regularity_of_the_algebra() {
        for (src, n, d, want) in [
            (POLY2, 4, 8, 0),
            (DUAL, 6, 8, 1),
            (EXT2, 5, 8, 2),
            (CUBIC, 5, 10, -1),
        ] {
            let w = bench(src, n, d);
            let a = ModulePresentation::free(vec![0]);
            let cm = w.cm_regularity(&a).unwrap();
            assert_eq!(
                cm.value,
                RegularityValue::exact(ExtInt::Finite(want), w.window()),
                "{src}"
            );
            if let (Some(t), Some(dd)) = (&cm.torsion, &cm.duality) {
                assert_eq!(t.value, dd.value);
            }
            let k = ModulePresentation::trivial(w.algebra());
            assert_eq!(w.cm_regularity(&k).unwrap().value.value, ExtInt::Finite(0));
        }
    }

    #[test]
    fn depth_examples() {
        let w = bench(POLY2, 4, 8);
        let k = ModulePresentation::trivial(w.algebra());
        assert_eq!(w.depth(&k).value, ExtInt::Finite(0));
        let a = ModulePresentation::free(vec![0]);
        assert_eq!(
            w.depth(&a),
            RegularityValue::exact(ExtInt::Finite(2), w.window())
        );
        let w = bench(EXT2, 4, 8);
        assert_eq!(
            w.depth(&ModulePresentation::free(vec![0])).value,
            ExtInt::Finite(0)
        );
    }

    #[test]
    fn ext_regularity_examples() {
        let w = bench(CUBIC, 5, 10);
        let r = w.ext_regularity(w.resolution_of_k());
        assert_eq!(r, RegularityValue::exact(ExtInt::Finite(1), w.window()));
        let a = w.resolve(&ModulePresentation::free(vec![0])).unwrap();
        assert_eq!(w.ext_regularity(&a).value, ExtInt::Finite(0));
        let z = w.resolve(&ModulePresentation::free(vec![])).unwrap();
        assert_eq!(w.ext_regularity(&z).value, ExtInt::NegInf);
    }
}
