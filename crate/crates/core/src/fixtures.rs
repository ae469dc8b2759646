//! Golden fixtures: the reference table of orders, censuses and ψ values for
//! twelve benchmark groups (with their GAP small-group ids as inert
//! metadata), and the list of ψ collisions between family members and plain
//! direct products. The data ships as a JSON file in the repository and is
//! never regenerated by the code it checks.

use num_bigint::BigUint;
use serde::Deserialize;

use crate::families::FamilySpec;
use crate::group_model::{Atom, GroupModel};

const FIXTURES: &str = include_str!("../data/fixtures.json");

#[derive(Debug, Clone, Deserialize)]
pub struct CensusRow {
    pub label: String,
    pub spec: String,
    /// GAP small-group id, displayed verbatim, never computed.
    pub gap_id: String,
    pub order: String,
    pub n_p: String,
    /// Absent for exponent-p groups.
    pub n_p2: Option<String>,
    pub psi: String,
}

impl CensusRow {
    pub fn family_spec(&self) -> FamilySpec {
        self.spec.parse().expect("fixture specs are well-formed")
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct PsiPair {
    /// Family member, ψ by closed form.
    pub family: String,
    /// Atom tokens for the comparison group, ψ by brute force.
    pub product: Vec<String>,
    pub psi: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Fixtures {
    pub census_rows: Vec<CensusRow>,
    pub psi_pairs: Vec<PsiPair>,
}

pub fn load() -> Fixtures {
    serde_json::from_str(FIXTURES).expect("bundled fixtures parse")
}

/// Parses an atom token (`c<m>`, `d8`, `q8`, `he<p>`, `m<p^n>`) into a model.
pub fn build_atom_token(token: &str) -> Result<GroupModel, String> {
    let t = token.trim().to_ascii_lowercase();
    let atom = if t == "d8" {
        Atom::D8
    } else if t == "q8" {
        Atom::Q8
    } else if let Some(m) = t.strip_prefix("he") {
        Atom::Heisenberg(m.parse().map_err(|_| format!("bad atom token {token:?}"))?)
    } else if let Some(m) = t.strip_prefix('c') {
        Atom::Cyclic(m.parse().map_err(|_| format!("bad atom token {token:?}"))?)
    } else if let Some(m) = t.strip_prefix('m') {
        let order: u64 = m.parse().map_err(|_| format!("bad atom token {token:?}"))?;
        let (p, n) = prime_power(order).ok_or_else(|| format!("{order} is not a prime power"))?;
        Atom::Modular(p, n)
    } else {
        return Err(format!("unknown atom token {token:?}"));
    };
    GroupModel::build_atom(atom).map_err(|e| e.to_string())
}

fn prime_power(v: u64) -> Option<(u64, u32)> {
    for p in 2..=v {
        if v.is_multiple_of(p) {
            let mut n = 0u32;
            let mut rest = v;
            while rest.is_multiple_of(p) {
                rest /= p;
                n += 1;
            }
            return (rest == 1).then_some((p, n));
        }
    }
    None
}

/// Direct product of the atoms named by the tokens.
pub fn build_product(tokens: &[String]) -> Result<GroupModel, String> {
    let factors = tokens
        .iter()
        .map(|t| build_atom_token(t))
        .collect::<Result<Vec<_>, _>>()?;
    GroupModel::direct_product(factors).map_err(|e| e.to_string())
}

pub fn parse_big(s: &str) -> BigUint {
    s.parse().expect("fixture integers are decimal")
}
