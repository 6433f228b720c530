//! Built-in catalog of named modules.
//!
//! Knot entries carry their Alexander polynomial.  The synthetic family
//! `scaled:m=<m>` is the cyclic module `R / (m (t - 1))`.

use std::fmt;

use augtor::LaurentPoly;
use num_bigint::BigInt;

/// What a catalog entry describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Knot,
    Link,
    Synthetic,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Knot => "knot",
            Kind::Link => "link",
            Kind::Synthetic => "synthetic",
        })
    }
}

/// A named cyclic module `R / (delta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub delta: LaurentPoly,
    pub kind: Kind,
    /// Linking number of a 2-component link.
    pub linking_number: Option<i64>,
    pub provenance: String,
}

/// Unknown catalog name.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown catalog name `{name}`; available: {}", available.join(", "))]
pub struct LookupError {
    pub name: String,
    pub available: Vec<String>,
}

const KNOT_SOURCE: &str =
    "standard knot table; determinant |Delta(-1)| checked against the SNF oracle";

// (name, coefficients from the constant term up)
const KNOTS: &[(&str, &[i64])] = &[
    ("3_1", &[1, -1, 1]),
    ("4_1", &[1, -3, 1]),
    ("5_1", &[1, -1, 1, -1, 1]),
    ("5_2", &[2, -3, 2]),
    ("6_1", &[2, -5, 2]),
    ("6_2", &[1, -3, 3, -3, 1]),
    ("6_3", &[1, -3, 5, -3, 1]),
    ("7_1", &[1, -1, 1, -1, 1, -1, 1]),
];

const LEHMER: &[i64] = &[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1];

const SYNTHETIC_PREFIX: &str = "scaled:m=";

/// All fixed entries, in listing order.  The `scaled:m=<m>` family is
/// generated on lookup and not listed.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = KNOTS
        .iter()
        .map(|(name, c)| CatalogEntry {
            name: name.to_string(),
            delta: LaurentPoly::from_coeffs(c),
            kind: Kind::Knot,
            linking_number: None,
            provenance: KNOT_SOURCE.to_string(),
        })
        .collect();
    out.push(CatalogEntry {
        name: "lehmer".into(),
        delta: LaurentPoly::from_coeffs(LEHMER),
        kind: Kind::Synthetic,
        linking_number: None,
        provenance: "Lehmer's degree-10 polynomial, smallest known Mahler measure above 1".into(),
    });
    out
}

/// Names accepted by [`catalog_lookup`].
pub fn available_names() -> Vec<String> {
    let mut names: Vec<String> = catalog().into_iter().map(|e| e.name).collect();
    names.push(format!("{SYNTHETIC_PREFIX}<m>"));
    names
}

/// Look up an entry by name.
pub fn catalog_lookup(name: &str) -> Result<CatalogEntry, LookupError> {
    if let Some(m) = name.strip_prefix(SYNTHETIC_PREFIX) {
        if let Ok(m) = m.trim().parse::<BigInt>() {
            if m > BigInt::from(0) {
                let delta = LaurentPoly::from_coeffs(&[-1, 1]).scale(&m);
                return Ok(CatalogEntry {
                    name: format!("{SYNTHETIC_PREFIX}{m}"),
                    delta,
                    kind: Kind::Synthetic,
                    linking_number: None,
                    provenance: format!("cyclic module R/({m}(t-1)); b_r = {m}^(r-1)"),
                });
            }
        }
    } else if let Some(e) = catalog().into_iter().find(|e| e.name == name) {
        return Ok(e);
    }
    Err(LookupError {
        name: name.to_string(),
        available: available_names(),
    })
}
