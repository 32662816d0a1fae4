//! JSON lattice descriptors and their resolution into a secrecy denominator.
//!
//! ```json
//! { "name": "E8", "dim": 8, "kind": "gram", "data": [[2, -1, 0, ...], ...] }
//! { "name": "leech", "dim": 24, "kind": "bj", "data": [-720] }
//! { "name": "fixture", "dim": 16, "kind": "ar", "data": ["1/64", -4, 256] }
//! { "name": "extremal-72", "dim": 72, "kind": "extremal" }
//! ```
//!
//! Rationals may be JSON integers or strings such as `"-45/16"`. A `gram`
//! descriptor may carry `max_norm`, the enumeration radius (default
//! `dim/8 + 2`, which leaves one surplus coefficient to check the fit).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{enumerate_counts, validate_unimodular, GramMatrix, Parity, ThetaCoefficients};
use crate::poly::PolyQ;
use crate::qseries::{
    default_order, expand_even, expand_general, extremal_b_coeffs, fit_a_basis,
    BasisCoeffsEven, BasisCoeffsGeneral,
};
use crate::rat::{fmt_rational, parse_rational};
use crate::secrecy::{denom_from_ar, denom_from_bj};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DescriptorKind {
    Gram,
    Ar,
    Bj,
    Extremal,
}

/// A rational as it appears in JSON: an integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalJson {
    Int(i64),
    Text(String),
}

impl RationalJson {
    pub fn from_rational(r: &BigRational) -> Self {
        match r.is_integer().then(|| r.numer().to_i64()).flatten() {
            Some(i) => RationalJson::Int(i),
            None => RationalJson::Text(fmt_rational(r)),
        }
    }

    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            RationalJson::Int(i) => Ok(BigRational::from_integer(BigInt::from(*i))),
            RationalJson::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DescriptorData {
    Matrix(Vec<Vec<i64>>),
    List(Vec<RationalJson>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDescriptor {
    pub name: String,
    pub dim: usize,
    pub kind: DescriptorKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<DescriptorData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_norm: Option<usize>,
}

/// A descriptor turned into the objects the rest of the pipeline consumes.
#[derive(Clone, Debug)]
pub struct ResolvedLattice {
    pub name: String,
    pub n: usize,
    pub kind: DescriptorKind,
    pub denominator: PolyQ,
    /// Known theta coefficients, if the input describes a genuine theta
    /// series.
    pub theta: Option<ThetaCoefficients>,
    pub parity: Option<Parity>,
}

impl ResolvedLattice {
    pub fn is_lattice(&self) -> bool {
        self.theta.is_some()
    }
}

impl LatticeDescriptor {
    pub fn new(name: &str, dim: usize, kind: DescriptorKind) -> Self {
        LatticeDescriptor {
            name: name.to_string(),
            dim,
            kind,
            data: None,
            max_norm: None,
        }
    }

    pub fn gram(name: &str, g: &GramMatrix) -> Self {
        LatticeDescriptor {
            data: Some(DescriptorData::Matrix(g.entries().to_vec())),
            ..LatticeDescriptor::new(name, g.dim(), DescriptorKind::Gram)
        }
    }

    pub fn list(name: &str, dim: usize, kind: DescriptorKind, data: Vec<RationalJson>) -> Self {
        LatticeDescriptor {
            data: Some(DescriptorData::List(data)),
            ..LatticeDescriptor::new(name, dim, kind)
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: LatticeDescriptor =
            serde_json::from_str(text).map_err(|e| Error::Descriptor(e.to_string()))?;
        if d.dim == 0 {
            return Err(Error::Descriptor("dim must be positive".into()));
        }
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serializes")
    }

    fn inconsistent(&self, what: &str) -> Error {
        Error::Descriptor(format!("{} ({:?}): {what}", self.name, self.kind))
    }

    fn rationals(&self) -> Result<Vec<BigRational>> {
        match &self.data {
            Some(DescriptorData::List(v)) => v.iter().map(RationalJson::to_rational).collect(),
            // an all-integer list of lists never parses as a list of scalars
            Some(DescriptorData::Matrix(_)) => {
                Err(self.inconsistent("expected a flat coefficient list"))
            }
            None => Err(self.inconsistent("missing data")),
        }
    }

    /// Validates the descriptor and computes its denominator.
    pub fn resolve(&self) -> Result<ResolvedLattice> {
        let n = self.dim;
        if self.max_norm.is_some() && self.kind != DescriptorKind::Gram {
            return Err(self.inconsistent("max_norm only applies to gram descriptors"));
        }
        let (denominator, theta, parity) = match self.kind {
            DescriptorKind::Gram => {
                let rows = match &self.data {
                    Some(DescriptorData::Matrix(m)) => m.clone(),
                    Some(DescriptorData::List(v)) if v.is_empty() => Vec::new(),
                    _ => return Err(self.inconsistent("expected an integer matrix")),
                };
                let g = GramMatrix::new(rows)?;
                if g.dim() != n {
                    return Err(self.inconsistent(&format!("matrix is {0}x{0}", g.dim())));
                }
                let parity = validate_unimodular(&g)?;
                let max_norm = self.max_norm.unwrap_or(n / 8 + 2);
                if max_norm < n / 8 {
                    return Err(self.inconsistent(&format!(
                        "max_norm must be at least {} to fit the a_r",
                        n / 8
                    )));
                }
                let theta = enumerate_counts(&g, max_norm)?;
                let a = fit_a_basis(&theta, n)?;
                (denom_from_ar(&a), Some(theta), Some(parity))
            }
            DescriptorKind::Ar => {
                let a = BasisCoeffsGeneral::new(n, self.rationals()?)?;
                let series = expand_general(&a, default_order(n));
                let theta = ThetaCoefficients::from_series(&series).ok();
                (denom_from_ar(&a), theta, None)
            }
            DescriptorKind::Bj => {
                let b = BasisCoeffsEven::new(n, self.rationals()?)?;
                let series = expand_even(&b, default_order(n));
                let theta = ThetaCoefficients::from_series(&series).ok();
                (denom_from_bj(&b), theta, Some(Parity::Even))
            }
            DescriptorKind::Extremal => {
                if self.data.is_some() {
                    return Err(self.inconsistent("extremal descriptors carry no data"));
                }
                let e = extremal_b_coeffs(n)?;
                let series = expand_even(&e.coeffs, default_order(n));
                let theta = ThetaCoefficients::from_series(&series).ok();
                (denom_from_bj(&e.coeffs), theta, Some(Parity::Even))
            }
        };
        Ok(ResolvedLattice {
            name: self.name.clone(),
            n,
            kind: self.kind,
            denominator,
            theta,
            parity,
        })
    }
}
