//! JSON documents for profiles, verdicts, classification results and
//! certificates.

use serde::{Deserialize, Serialize};

use clonecalc_core::classify::ChainIndex;
use clonecalc_core::setfam::{IndexSet, SetError, WildProfile};
use clonecalc_core::wildness::{ProfileBounds, Verdict};

/// `{"n": 5, "minimal_wild": [[1,2,3],[1,4,5]]}` — arrays of 1-based
/// coordinates, sorted ascending, antichain-normalized on load.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ProfileDoc {
    pub n: usize,
    pub minimal_wild: Vec<Vec<usize>>,
}

impl ProfileDoc {
    pub fn from_profile(p: &WildProfile) -> ProfileDoc {
        ProfileDoc {
            n: p.n(),
            minimal_wild: p.minimal().iter().map(|m| m.iter().collect()).collect(),
        }
    }

    pub fn to_profile(&self) -> Result<WildProfile, SetError> {
        let mut sets = Vec::with_capacity(self.minimal_wild.len());
        for elems in &self.minimal_wild {
            sets.push(IndexSet::checked_from_elems(elems, self.n)?);
        }
        WildProfile::normalize(self.n, &sets)
    }
}

/// Three-valued bounds for terms outside the exact fragment.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct BoundsDoc {
    pub n: usize,
    pub exact: bool,
    pub proven_wild: Vec<Vec<usize>>,
    pub proven_tame_max: Vec<Vec<usize>>,
    pub undetermined: usize,
}

impl BoundsDoc {
    pub fn from_bounds(b: &ProfileBounds) -> BoundsDoc {
        BoundsDoc {
            n: b.n(),
            exact: false,
            proven_wild: b
                .proven_wild()
                .minimal()
                .iter()
                .map(|m| m.iter().collect())
                .collect(),
            proven_tame_max: b
                .proven_tame_max()
                .iter()
                .map(|m| m.iter().collect())
                .collect(),
            undetermined: b.undetermined().len(),
        }
    }
}

/// `{"index":"M","m":3}` or `{"index":"almost_unary"}`.
#[derive(Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(tag = "index")]
pub enum IndexDoc {
    M {
        m: usize,
    },
    #[serde(rename = "almost_unary")]
    AlmostUnary,
}

impl IndexDoc {
    pub fn from_index(idx: ChainIndex) -> IndexDoc {
        match idx {
            ChainIndex::M(m) => IndexDoc::M { m },
            ChainIndex::AlmostUnary => IndexDoc::AlmostUnary,
        }
    }
}

/// `{"status":"witnessed","point":[...],"value":...}` or
/// `{"status":"exhausted","window":...,"bound":...}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum VerdictDoc {
    Witnessed { point: Vec<u64>, value: u64 },
    Exhausted { window: u64, bound: u64 },
}

impl VerdictDoc {
    pub fn from_verdict(v: &Verdict) -> VerdictDoc {
        match v {
            Verdict::Witnessed { point, value } => VerdictDoc::Witnessed {
                point: point.clone(),
                value: *value,
            },
            Verdict::Exhausted { window, bound } => VerdictDoc::Exhausted {
                window: *window,
                bound: *bound,
            },
        }
    }
}

/// Window-relative construction certificate.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CertificateDoc {
    pub construction: String,
    pub window: u64,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleDoc>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CounterexampleDoc {
    pub point: Vec<u64>,
    pub expected: u64,
    pub got: u64,
}

impl CertificateDoc {
    pub fn verified(construction: &str, window: u64) -> CertificateDoc {
        CertificateDoc {
            construction: construction.to_string(),
            window,
            status: "verified".to_string(),
            counterexample: None,
        }
    }

    pub fn failed(
        construction: &str,
        window: u64,
        point: Vec<u64>,
        expected: u64,
        got: u64,
    ) -> CertificateDoc {
        CertificateDoc {
            construction: construction.to_string(),
            window,
            status: "failed".to_string(),
            counterexample: Some(CounterexampleDoc {
                point,
                expected,
                got,
            }),
        }
    }
}
