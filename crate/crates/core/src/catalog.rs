//! Reference lattices: the ten extremal even unimodular dimensions 8–80, the
//! cubic lattices `Z1`…`Z8`, `E8` from its Gram matrix, and one deliberately
//! non-lattice denominator that exercises the refutation path.
//!
//! Extremal denominators are stored as transcribed table rows and are also
//! regenerated from the extremal theta series; the two must agree exactly.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::descriptor::{DescriptorKind, LatticeDescriptor, RationalJson};
use crate::error::{Error, Result};
use crate::lattice::{e8_cartan, enumerate_counts, GramMatrix, ThetaCoefficients};
use crate::poly::PolyQ;
use crate::qseries::{expand_even, extremal_b_coeffs, fit_a_basis, BasisCoeffsGeneral};
use crate::rat::{fmt_rational, parse_rational, q, qi};
use crate::secrecy::{denom_from_ar, denom_from_bj};

pub const EXTREMAL_DIMS: [usize; 10] = [8, 16, 24, 32, 40, 48, 56, 64, 72, 80];

/// Table rows as `coefficient · (1-z)^a · z^b` terms.
const TABLE: [(usize, &[(&str, u32, u32)]); 10] = [
    (8, &[("1", 1, 0)]),
    (16, &[("1", 2, 0)]),
    (24, &[("1", 3, 0), ("-45/16", 0, 2)]),
    (32, &[("1", 4, 0), ("-15/4", 1, 2)]),
    (40, &[("1", 5, 0), ("-75/16", 2, 2)]),
    (48, &[("1", 6, 0), ("-45/8", 3, 2), ("3915/2048", 0, 4)]),
    (56, &[("1", 7, 0), ("-105/16", 4, 2), ("21735/4096", 1, 4)]),
    (64, &[("1", 8, 0), ("-15/2", 5, 2), ("4905/512", 2, 4)]),
    (72, &[("1", 9, 0), ("-135/16", 6, 2), ("60345/4096", 3, 4), ("-53325/32768", 0, 6)]),
    (80, &[("1", 10, 0), ("-75/8", 7, 2), ("42525/2048", 4, 4), ("-202125/32768", 1, 6)]),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogSource {
    /// Theta series fixed by extremality; `D` comes from the `b_j`.
    ExtremalGenerated,
    /// Theta series enumerated from a Gram matrix.
    GramFile,
    /// `D` given directly by its `a_r`.
    ExplicitAr,
}

impl CatalogSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            CatalogSource::ExtremalGenerated => "extremal_generated",
            CatalogSource::GramFile => "gram_file",
            CatalogSource::ExplicitAr => "explicit_ar",
        }
    }
}

/// One `coefficient · (1-z)^a · z^b` summand of a factored denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredTerm {
    pub coeff: BigRational,
    pub one_minus_z: u32,
    pub z: u32,
}

impl FactoredTerm {
    fn expand(&self) -> PolyQ {
        &PolyQ::from_ints(&[1, -1]).pow(self.one_minus_z)
            * &PolyQ::monomial(self.coeff.clone(), self.z as usize)
    }
}

/// Renders terms the way the table prints them:
/// `(1-z)^3 - 45/16 z^2`.
pub fn fmt_factored(terms: &[FactoredTerm]) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let mut factors = Vec::new();
        match t.one_minus_z {
            0 => {}
            1 => factors.push("(1-z)".to_string()),
            e => factors.push(format!("(1-z)^{e}")),
        }
        match t.z {
            0 => {}
            1 => factors.push("z".to_string()),
            e => factors.push(format!("z^{e}")),
        }
        let mag = t.coeff.abs();
        if !mag.is_one() || factors.is_empty() {
            factors.insert(0, fmt_rational(&mag));
        }
        let body = factors.join(" ");
        if i == 0 {
            if t.coeff.is_negative() {
                out.push('-');
            }
            out.push_str(&body);
        } else {
            out.push_str(if t.coeff.is_negative() { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub n: usize,
    pub source: CatalogSource,
    /// The denominator `D` with `Ξ = 1/D(z)`.
    pub expected_d: PolyQ,
    /// False for constructed fixtures that are no lattice's theta quotient.
    pub is_lattice: bool,
    pub gram: Option<GramMatrix>,
    pub a: Option<Vec<BigRational>>,
    pub terms: Vec<FactoredTerm>,
}

impl CatalogEntry {
    pub fn factored(&self) -> String {
        fmt_factored(&self.terms)
    }

    /// The secrecy function as a table cell: `1/(1-z)`, `1/((1-z)^3 - …)`.
    pub fn xi_display(&self) -> String {
        let d = self.factored();
        if d == "1" {
            d
        } else if self.terms.len() == 1 && !d.contains(' ') {
            format!("1/{d}")
        } else {
            format!("1/({d})")
        }
    }

    /// Recomputes `D` from the underlying data rather than the stored
    /// polynomial: the extremal `b_j`, an enumeration plus `a_r` fit, or
    /// the explicit `a_r`.
    pub fn regenerate(&self) -> Result<PolyQ> {
        match self.source {
            CatalogSource::ExtremalGenerated => {
                Ok(denom_from_bj(&extremal_b_coeffs(self.n)?.coeffs))
            }
            CatalogSource::GramFile => {
                let g = self.gram.as_ref().expect("gram entry");
                let theta = enumerate_counts(g, self.n / 8 + 2)?;
                Ok(denom_from_ar(&fit_a_basis(&theta, self.n)?))
            }
            CatalogSource::ExplicitAr => {
                let a = self.a.clone().expect("explicit entry");
                Ok(denom_from_ar(&BasisCoeffsGeneral::new(self.n, a)?))
            }
        }
    }

    /// Theta coefficients `N_0..N_{cut-1}`, or `None` for non-lattices.
    pub fn theta_coefficients(&self, cut: usize) -> Result<Option<ThetaCoefficients>> {
        match self.source {
            CatalogSource::ExtremalGenerated => {
                let e = extremal_b_coeffs(self.n)?;
                Ok(Some(ThetaCoefficients::from_series(&expand_even(&e.coeffs, cut))?))
            }
            CatalogSource::GramFile => {
                let g = self.gram.as_ref().expect("gram entry");
                Ok(Some(enumerate_counts(g, cut.saturating_sub(1))?))
            }
            CatalogSource::ExplicitAr => Ok(None),
        }
    }

    pub fn descriptor(&self) -> LatticeDescriptor {
        match self.source {
            CatalogSource::ExtremalGenerated => {
                LatticeDescriptor::new(&self.name, self.n, DescriptorKind::Extremal)
            }
            CatalogSource::GramFile => {
                let g = self.gram.as_ref().expect("gram entry");
                LatticeDescriptor::gram(&self.name, g)
            }
            CatalogSource::ExplicitAr => {
                let a = self.a.as_ref().expect("explicit entry");
                LatticeDescriptor::list(
                    &self.name,
                    self.n,
                    DescriptorKind::Ar,
                    a.iter().map(RationalJson::from_rational).collect(),
                )
            }
        }
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<4} {:<16} {}", self.n, self.name, self.xi_display())
    }
}

fn from_terms(terms: Vec<FactoredTerm>) -> PolyQ {
    terms.iter().fold(PolyQ::zero(), |acc, t| &acc + &t.expand())
}

fn extremal(n: usize) -> CatalogEntry {
    let (_, row) = TABLE.iter().find(|(d, _)| *d == n).expect("table dimension");
    let terms: Vec<FactoredTerm> = row
        .iter()
        .map(|(c, a, b)| FactoredTerm {
            coeff: parse_rational(c).expect("table coefficient"),
            one_minus_z: *a,
            z: *b,
        })
        .collect();
    CatalogEntry {
        name: format!("extremal-{n}"),
        n,
        source: CatalogSource::ExtremalGenerated,
        expected_d: from_terms(terms.clone()),
        is_lattice: true,
        gram: None,
        a: None,
        terms,
    }
}

fn cubic(n: usize) -> CatalogEntry {
    let terms = vec![FactoredTerm {
        coeff: qi(1),
        one_minus_z: 0,
        z: 0,
    }];
    CatalogEntry {
        name: format!("Z{n}"),
        n,
        source: CatalogSource::GramFile,
        expected_d: PolyQ::one(),
        is_lattice: true,
        gram: Some(GramMatrix::identity(n)),
        a: None,
        terms,
    }
}

fn e8_gram() -> CatalogEntry {
    let terms = vec![FactoredTerm {
        coeff: qi(1),
        one_minus_z: 1,
        z: 0,
    }];
    CatalogEntry {
        name: "E8-gram".to_string(),
        n: 8,
        source: CatalogSource::GramFile,
        expected_d: from_terms(terms.clone()),
        is_lattice: true,
        gram: Some(e8_cartan()),
        a: None,
        terms,
    }
}

/// `D = (z - 1/8)²`: dips to 0 at `z = 1/8`, below `D(1/4) = 1/64`.
fn refuted_fixture() -> CatalogEntry {
    // (z - 1/8)² = 1/64 - z/4 + z² = Σ (a_r / 16^r) z^r
    let a = vec![q(1, 64), qi(-4), qi(256)];
    let terms = vec![
        FactoredTerm { coeff: qi(1), one_minus_z: 0, z: 2 },
        FactoredTerm { coeff: q(-1, 4), one_minus_z: 0, z: 1 },
        FactoredTerm { coeff: q(1, 64), one_minus_z: 0, z: 0 },
    ];
    CatalogEntry {
        name: "refuted-fixture".to_string(),
        n: 16,
        source: CatalogSource::ExplicitAr,
        expected_d: PolyQ::linear_root(q(1, 8)).pow(2),
        is_lattice: false,
        gram: None,
        a: Some(a),
        terms,
    }
}

/// Every entry: extremal dims ascending, then `Z1`…`Z8`, `E8-gram` and the
/// refuted fixture.
pub fn catalog_all() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = EXTREMAL_DIMS.iter().map(|&n| extremal(n)).collect();
    out.extend((1..=8).map(cubic));
    out.push(e8_gram());
    out.push(refuted_fixture());
    out
}

/// Looks an entry up by extremal dimension (`"24"`) or name
/// (`"extremal-24"`, `"Z3"`, `"E8-gram"`, `"refuted-fixture"`).
pub fn catalog_entry(key: &str) -> Result<CatalogEntry> {
    let key = key.trim();
    if let Ok(n) = key.parse::<usize>() {
        return catalog_extremal(n);
    }
    catalog_all()
        .into_iter()
        .find(|e| e.name.eq_ignore_ascii_case(key))
        .ok_or_else(|| Error::UnknownEntry(key.to_string()))
}

pub fn catalog_extremal(n: usize) -> Result<CatalogEntry> {
    if EXTREMAL_DIMS.contains(&n) {
        Ok(extremal(n))
    } else {
        Err(Error::UnknownEntry(n.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::secrecy::denom_factored;
    use crate::verifier::{verify_min_at_quarter, VerdictStatus};

    #[test]
    fn table_rows_are_regenerated() {
        for n in EXTREMAL_DIMS {
            let e = catalog_entry(&n.to_string()).unwrap();
            assert_eq!(e.regenerate().unwrap(), e.expected_d, "dim {n}");
            assert_eq!(e.expected_d.coeff(0), BigRational::one());
            let generated = denom_factored(&extremal_b_coeffs(n).unwrap().coeffs);
            assert_eq!(generated, e.factored(), "dim {n}");
        }
    }

    #[test]
    fn every_extremal_is_strict() {
        for n in EXTREMAL_DIMS {
            let v = verify_min_at_quarter(&catalog_extremal(n).unwrap().expected_d).unwrap();
            assert_eq!(v.status, VerdictStatus::ConfirmedStrict, "dim {n}");
        }
    }

    #[test]
    fn lookups() {
        assert_eq!(catalog_entry("8").unwrap().expected_d, PolyQ::from_ints(&[1, -1]));
        let e40 = catalog_entry("extremal-40").unwrap();
        assert_eq!(e40.factored(), "(1-z)^5 - 75/16 (1-z)^2 z^2");
        let f = catalog_entry("refuted-fixture").unwrap();
        assert!(!f.is_lattice);
        assert_eq!(f.regenerate().unwrap(), f.expected_d);
        assert_eq!(f.factored(), "z^2 - 1/4 z + 1/64");
        assert_eq!(catalog_entry("z3").unwrap().xi_display(), "1");
        assert_eq!(catalog_entry("8").unwrap().xi_display(), "1/(1-z)");
        assert_eq!(catalog_entry("16").unwrap().xi_display(), "1/(1-z)^2");
        assert_eq!(e40.xi_display(), "1/((1-z)^5 - 75/16 (1-z)^2 z^2)");
        assert!(matches!(catalog_entry("12"), Err(Error::UnknownEntry(_))));
        assert!(matches!(catalog_entry("D4"), Err(Error::UnknownEntry(_))));
        assert_eq!(catalog_all().len(), 20);
    }

    #[test]
    fn gram_entries_regenerate() {
        for name in ["Z1", "Z5", "Z8", "E8-gram"] {
            let e = catalog_entry(name).unwrap();
            assert_eq!(e.regenerate().unwrap(), e.expected_d, "{name}");
        }
        assert!(catalog_entry("refuted-fixture")
            .unwrap()
            .theta_coefficients(5)
            .unwrap()
            .is_none());
        let theta = catalog_entry("E8-gram").unwrap().theta_coefficients(5).unwrap().unwrap();
        assert_eq!(theta.counts()[2], 240.into());
        assert!(theta.counts()[1].is_zero());
        assert_eq!(theta.counts()[4], 2160.into());
    }
}
