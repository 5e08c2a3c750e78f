//! On-disk cache of Gröbner bases, keyed by a content hash.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::algebra::{AlgebraError, GradedAlgebra};
use crate::field::Field;
use crate::groebner::{groebner_for, Budget, GroebnerBasis, GroebnerJson};
use crate::poly::FreeAlgebra;
use crate::presentation::Presentation;

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(pres: &Presentation, max_degree: u32, budget: &Budget) -> String {
        let mut h = Sha256::new();
        h.update(format!("ncreg {}\n", env!("CARGO_PKG_VERSION")));
        h.update(pres.to_text());
        h.update(format!(
            "max_degree {max_degree}\nbudget {} {}\n",
            budget.max_elements, budget.max_degree
        ));
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("gb-{key}.json"))
    }

    pub fn load<F: Field>(&self, key: &str, free: FreeAlgebra<F>) -> Option<GroebnerBasis<F>> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let j: GroebnerJson = serde_json::from_str(&text).ok()?;
        GroebnerBasis::from_json(free, &j).ok()
    }

    /// Writes to a temporary file and renames it into place.
    pub fn store<F: Field>(&self, key: &str, gb: &GroebnerBasis<F>) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let text = serde_json::to_string_pretty(&gb.to_json()).map_err(io::Error::other)?;
        let tmp = self
            .dir
            .join(format!(".gb-{key}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path(key))
    }
}

/// Builds the algebra, reusing a cached Gröbner basis when one is available.
pub fn load_algebra<F: Field>(
    pres: &Presentation,
    field: F,
    max_degree: u32,
    budget: &Budget,
    cache: Option<&Cache>,
) -> Result<GradedAlgebra<F>, AlgebraError> {
    let Some(cache) = cache else {
        return GradedAlgebra::new(pres, field, max_degree, budget);
    };
    let key = Cache::key(pres, max_degree, budget);
    let free = FreeAlgebra::new(field.clone(), pres.generators.clone());
    let gb = match cache.load(&key, free) {
        Some(gb) => gb,
        None => {
            let gb = groebner_for(pres, field, max_degree, budget)?;
            // a failed write only costs a recomputation next time
            let _ = cache.store(&key, &gb);
            gb
        }
    };
    GradedAlgebra::from_groebner(pres, gb, max_degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn cached_basis_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let p = Presentation::parse("gens x:1 y:1; rels x^2; y^2; x*y + y*x;").unwrap();
        let f = PrimeField::new(32003);
        let a = load_algebra(&p, f.clone(), 6, &Budget::default(), Some(&cache)).unwrap();
        let b = load_algebra(&p, f.clone(), 6, &Budget::default(), Some(&cache)).unwrap();
        let c = load_algebra(&p, f, 6, &Budget::default(), None).unwrap();
        assert_eq!(a.groebner().to_json(), b.groebner().to_json());
        assert_eq!(a.groebner().to_json(), c.groebner().to_json());
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
