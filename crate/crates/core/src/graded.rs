//! Graded dimension bookkeeping and extended integers.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Dimensions of graded pieces, certified on the window `[lo, hi]`.
/// Degrees outside the window are unknown, not zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDims {
    pub lo: i64,
    pub hi: i64,
    pub dims: BTreeMap<i64, u64>,
}

impl GradedDims {
    /// All-zero dimensions on `[lo, hi]`. An empty window has `lo > hi`.
    pub fn new(lo: i64, hi: i64) -> Self {
        GradedDims {
            lo,
            hi,
            dims: BTreeMap::new(),
        }
    }

    pub fn empty() -> Self {
        GradedDims::new(0, -1)
    }

    pub fn from_map(lo: i64, hi: i64, dims: impl IntoIterator<Item = (i64, u64)>) -> Self {
        let mut g = GradedDims::new(lo, hi);
        for (d, n) in dims {
            g.set(d, n);
        }
        g
    }

    pub fn set(&mut self, degree: i64, dim: u64) {
        if dim == 0 {
            self.dims.remove(&degree);
        } else {
            self.dims.insert(degree, dim);
        }
    }

    /// `None` outside the certified window.
    pub fn get(&self, degree: i64) -> Option<u64> {
        (self.lo <= degree && degree <= self.hi)
            .then(|| self.dims.get(&degree).copied().unwrap_or(0))
    }

    pub fn in_window(&self, degree: i64) -> bool {
        self.lo <= degree && degree <= self.hi
    }

    /// Dimensions for every degree of the window, in order.
    pub fn values(&self) -> Vec<u64> {
        (self.lo..=self.hi)
            .map(|d| self.dims.get(&d).copied().unwrap_or(0))
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.dims.values().sum()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.dims.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.dims.keys().next_back().copied()
    }
}

/// Graded Matlis dual: degree `j` of the dual has the dimension of degree `-j`.
pub fn matlis_dual_dims(d: &GradedDims) -> GradedDims {
    let mut out = GradedDims::new(-d.hi, -d.lo);
    for (&deg, &n) in &d.dims {
        out.set(-deg, n);
    }
    out
}

/// Integers extended by `-inf` and `+inf`, ordered the obvious way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Finite(i64),
    PosInf,
}

impl ExtInt {
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Finite(n) => Some(n),
            _ => None,
        }
    }

    /// `-inf + anything finite = -inf`; `-inf + inf` is not defined by the conventions
    /// and is reported as `None`.
    pub fn checked_add(self, other: ExtInt) -> Option<ExtInt> {
        use ExtInt::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Some(Finite(a + b)),
            (NegInf, PosInf) | (PosInf, NegInf) => None,
            (NegInf, _) | (_, NegInf) => Some(NegInf),
            (PosInf, _) | (_, PosInf) => Some(PosInf),
        }
    }

    pub fn neg(self) -> ExtInt {
        match self {
            ExtInt::NegInf => ExtInt::PosInf,
            ExtInt::PosInf => ExtInt::NegInf,
            ExtInt::Finite(n) => ExtInt::Finite(-n),
        }
    }

    pub fn checked_sub(self, other: ExtInt) -> Option<ExtInt> {
        self.checked_add(other.neg())
    }

    /// `inf` of a set with the conventions `inf {} = +inf` (and `inf Z = -inf`
    /// is represented by the caller passing `NegInf`).
    pub fn inf<I: IntoIterator<Item = ExtInt>>(it: I) -> ExtInt {
        it.into_iter().min().unwrap_or(ExtInt::PosInf)
    }

    /// `sup {} = -inf`.
    pub fn sup<I: IntoIterator<Item = ExtInt>>(it: I) -> ExtInt {
        it.into_iter().max().unwrap_or(ExtInt::NegInf)
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => write!(f, "-inf"),
            ExtInt::PosInf => write!(f, "+inf"),
            ExtInt::Finite(n) => write!(f, "{n}"),
        }
    }
}

impl Serialize for ExtInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtInt::Finite(n) => s.serialize_i64(*n),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for ExtInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(i64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(ExtInt::Finite(n)),
            Raw::S(s) if s == "-inf" => Ok(ExtInt::NegInf),
            Raw::S(s) if s == "+inf" => Ok(ExtInt::PosInf),
            Raw::S(s) => Err(serde::de::Error::custom(format!(
                "bad extended integer `{s}`"
            ))),
        }
    }
}
