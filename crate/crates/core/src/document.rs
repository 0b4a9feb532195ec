//! JSON-facing documents. Rationals are always written as exact `p/q`
//! strings; on input a JSON integer is accepted as well.

use serde::{Deserialize, Serialize};

use crate::construct::{Construction, ConstructionTrace, Strictness};
use crate::criterion::{Status, Verdict, Witness, WitnessKind};
use crate::error::{Error, Result};
use crate::exterior::ExteriorElement;
use crate::linalg::Matrix;
use crate::monomial::{Monomial, MonomialSet};
use crate::rational::{self, Rational};

pub const TOOL_NAME: &str = "syzygy";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A rational that serializes as its exact string form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exact(#[serde(with = "rational::serde_text")] pub Rational);

/// One monomial of an input document: an exponent vector, or text such as
/// `"X0^2*X1"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MonomialEntry {
    Exponents(Vec<u32>),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialSetDocument {
    pub n: u32,
    pub monomials: Vec<MonomialEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl MonomialSetDocument {
    /// Canonical form: exponent vectors in canonical order.
    pub fn from_set(set: &MonomialSet, label: Option<String>) -> Self {
        MonomialSetDocument {
            n: set.n(),
            monomials: set
                .iter()
                .map(|u| MonomialEntry::Exponents(u.exponents().to_vec()))
                .collect(),
            label,
        }
    }

    pub fn to_set(&self) -> Result<MonomialSet> {
        let vars = self.n as usize + 1;
        let monomials = self
            .monomials
            .iter()
            .enumerate()
            .map(|(pos, entry)| match entry {
                MonomialEntry::Exponents(e) => Ok(Monomial::new(e.clone())),
                MonomialEntry::Text(t) => Monomial::parse(t, vars)
                    .map_err(|e| Error::Parse(format!("monomial #{pos}: {e}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if monomials.is_empty() {
            return Err(Error::domain("document lists no monomials"));
        }
        MonomialSet::new(self.n, monomials)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub kind: WitnessKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Monomial>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<usize>>,
    pub lhs: Exact,
}

impl From<&Witness> for WitnessDocument {
    fn from(w: &Witness) -> Self {
        WitnessDocument {
            kind: w.kind,
            u: w.u.clone(),
            e: w.e,
            subset: w.subset.clone(),
            lhs: Exact(w.lhs.clone()),
        }
    }
}

impl From<&WitnessDocument> for Witness {
    fn from(w: &WitnessDocument) -> Self {
        Witness {
            kind: w.kind,
            u: w.u.clone(),
            e: w.e,
            subset: w.subset.clone(),
            lhs: w.lhs.0.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckPath {
    Equal,
    Mixed,
}

/// Metadata of the checked input, echoed back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub n: u32,
    pub m: usize,
    pub degrees: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl InputEcho {
    pub fn of(set: &MonomialSet, label: Option<String>) -> Self {
        InputEcho {
            n: set.n(),
            m: set.len(),
            degrees: set.degrees(),
            label,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictDocument {
    pub tool: String,
    pub version: String,
    pub path: CheckPath,
    pub input: InputEcho,
    pub status: Status,
    pub reference_slope: Exact,
    pub extremal_value: Option<Exact>,
    pub witnesses: Vec<WitnessDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized_by: Option<Monomial>,
}

impl VerdictDocument {
    pub fn new(verdict: &Verdict, path: CheckPath, input: InputEcho) -> Self {
        VerdictDocument {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            path,
            input,
            status: verdict.status,
            reference_slope: Exact(verdict.reference_slope.clone()),
            extremal_value: verdict.extremal_value.clone().map(Exact),
            witnesses: verdict.witnesses.iter().map(WitnessDocument::from).collect(),
            normalized_by: verdict.normalized_by.clone(),
        }
    }

    pub fn to_verdict(&self) -> Verdict {
        Verdict {
            status: self.status,
            reference_slope: self.reference_slope.0.clone(),
            extremal_value: self.extremal_value.as_ref().map(|x| x.0.clone()),
            witnesses: self.witnesses.iter().map(Witness::from).collect(),
            normalized_by: self.normalized_by.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionDocument {
    pub tool: String,
    pub version: String,
    pub n: u32,
    pub d: u32,
    pub m: u64,
    pub require: Strictness,
    pub status: Status,
    pub set: MonomialSetDocument,
    pub trace: ConstructionTrace,
}

impl ConstructionDocument {
    pub fn new(c: &Construction, require: Strictness) -> Self {
        let p = &c.trace.params;
        ConstructionDocument {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            n: p.n,
            d: p.d,
            m: p.m,
            require,
            status: c.verdict.status,
            set: MonomialSetDocument::from_set(&c.set, None),
            trace: c.trace.clone(),
        }
    }
}

/// An exterior element as `(index tuple, coefficient)` pairs, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExteriorDocument {
    pub m: usize,
    pub r: usize,
    pub terms: Vec<(Vec<usize>, Exact)>,
}

impl ExteriorDocument {
    pub fn from_element(w: &ExteriorElement) -> Self {
        ExteriorDocument {
            m: w.m(),
            r: w.degree(),
            terms: w.terms().map(|(k, c)| (k.clone(), Exact(c.clone()))).collect(),
        }
    }

    pub fn to_element(&self) -> Result<ExteriorElement> {
        ExteriorElement::from_terms(
            self.m,
            self.r,
            self.terms.iter().map(|(k, c)| (k.clone(), c.0.clone())),
        )
    }
}

/// Input of the secant test: either the 5×6 coefficient matrix of `V`
/// (rows in the order `X0², X0X1, X0X2, X1², X1X2, X2²`) or the six values
/// of the functional directly.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SubspaceDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<Vec<Exact>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functional: Option<Vec<Exact>>,
}

impl SubspaceDocument {
    pub fn from_rows(rows: &Matrix) -> Self {
        SubspaceDocument {
            rows: Some(rows.iter().map(|r| r.iter().cloned().map(Exact).collect()).collect()),
            functional: None,
        }
    }

    pub fn matrix(&self) -> Option<Matrix> {
        self.rows
            .as_ref()
            .map(|rows| rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criterion::check_equal_degree;
    use crate::rational::ratio;

    #[test]
    fn set_documents_accept_both_spellings() {
        let doc = MonomialSetDocument::parse_json(
            r#"{"n": 2, "monomials": [[2,0,0], "X1^2", "X2^2", "X0*X1"], "label": "q"}"#,
        )
        .unwrap();
        let set = doc.to_set().unwrap();
        assert_eq!(set.len(), 4);
        let canonical = MonomialSetDocument::from_set(&set, doc.label.clone());
        let text = serde_json::to_string(&canonical).unwrap();
        assert_eq!(MonomialSetDocument::parse_json(&text).unwrap().to_set().unwrap(), set);
    }

    #[test]
    fn set_documents_report_positions() {
        let dup = MonomialSetDocument::parse_json(r#"{"n": 1, "monomials": [[1,1],[2,0],[1,1]]}"#).unwrap();
        let err = dup.to_set().unwrap_err().to_string();
        assert!(err.contains("#2") && err.contains("#0"), "{err}");
        let short = MonomialSetDocument::parse_json(r#"{"n": 2, "monomials": [[1,1,0],[2,0]]}"#).unwrap();
        assert!(short.to_set().unwrap_err().to_string().contains("#1"));
        let bad = MonomialSetDocument::parse_json(r#"{"n": 1, "monomials": ["X0", "X7"]}"#).unwrap();
        assert!(bad.to_set().unwrap_err().to_string().contains("#1"));
    }

    #[test]
    fn verdicts_round_trip_with_exact_strings() {
        let set = MonomialSet::from_exponents(2, vec![vec![2, 0, 0], vec![1, 1, 0], vec![0, 2, 0], vec![0, 0, 2]])
            .unwrap();
        let verdict = check_equal_degree(&set).unwrap();
        let doc = VerdictDocument::new(&verdict, CheckPath::Equal, InputEcho::of(&set, None));
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.contains(r#""reference_slope":"3/2""#), "{text}");
        let back: VerdictDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_verdict(), verdict);
    }

    #[test]
    fn exterior_documents_round_trip() {
        let w = ExteriorElement::from_terms(3, 2, [(vec![1, 2], ratio(1, 2)), (vec![3, 1], ratio(-2, 3))]).unwrap();
        let doc = ExteriorDocument::from_element(&w);
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.contains("\"1/2\""));
        let back: ExteriorDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_element().unwrap(), w);
    }
}
