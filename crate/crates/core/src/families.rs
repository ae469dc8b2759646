//! The twelve classification families of (generalized/almost) extraspecial
//! p-groups, with order and exponent predictions and explicit realization
//! from atoms via central and direct products.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::group_model::{Atom, GroupError, GroupModel};
use crate::order_stats::OrderCensus;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
    #[error("cannot parse family spec: {0}")]
    Parse(String),
    #[error("group of order {order} exceeds realization budget {budget}")]
    BudgetExceeded { order: BigUint, budget: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// The family tags. The first six require p = 2, the last six an odd p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// D8^{∘n}
    Es2D,
    /// D8^{∘(n-1)} ∘ Q8 (n = 1 means Q8 itself)
    Es2Q,
    /// D8^{∘n} ∘ C4
    Aes2,
    /// D8^{∘n} × C2^k
    Ges2D,
    /// (D8^{∘(n-1)} ∘ Q8) × C2^k
    Ges2Q,
    /// (D8^{∘n} ∘ C4) × C2^k
    Ges2C4,
    /// He_p^{∘n}
    EspHe,
    /// M_{p^3}^{∘n}
    EspM,
    /// He_p^{∘n} ∘ C_{p^2}
    Aesp,
    /// He_p^{∘n} × C_p^k
    GespHe,
    /// M_{p^3}^{∘n} × C_p^k
    GespM,
    /// (He_p^{∘n} ∘ C_{p^2}) × C_p^k
    GespC,
}

pub const ALL_KINDS: [FamilyKind; 12] = [
    FamilyKind::Es2D,
    FamilyKind::Es2Q,
    FamilyKind::Aes2,
    FamilyKind::Ges2D,
    FamilyKind::Ges2Q,
    FamilyKind::Ges2C4,
    FamilyKind::EspHe,
    FamilyKind::EspM,
    FamilyKind::Aesp,
    FamilyKind::GespHe,
    FamilyKind::GespM,
    FamilyKind::GespC,
];

impl FamilyKind {
    pub fn token(&self) -> &'static str {
        match self {
            FamilyKind::Es2D => "es2_d",
            FamilyKind::Es2Q => "es2_q",
            FamilyKind::Aes2 => "aes2",
            FamilyKind::Ges2D => "ges2_d",
            FamilyKind::Ges2Q => "ges2_q",
            FamilyKind::Ges2C4 => "ges2_c4",
            FamilyKind::EspHe => "esp_he",
            FamilyKind::EspM => "esp_m",
            FamilyKind::Aesp => "aesp",
            FamilyKind::GespHe => "gesp_he",
            FamilyKind::GespM => "gesp_m",
            FamilyKind::GespC => "gesp_c",
        }
    }

    fn from_token(s: &str) -> Option<Self> {
        ALL_KINDS.iter().copied().find(|k| k.token() == s)
    }

    pub fn is_two_group(&self) -> bool {
        matches!(
            self,
            FamilyKind::Es2D
                | FamilyKind::Es2Q
                | FamilyKind::Aes2
                | FamilyKind::Ges2D
                | FamilyKind::Ges2Q
                | FamilyKind::Ges2C4
        )
    }

    pub fn is_generalized(&self) -> bool {
        matches!(
            self,
            FamilyKind::Ges2D
                | FamilyKind::Ges2Q
                | FamilyKind::Ges2C4
                | FamilyKind::GespHe
                | FamilyKind::GespM
                | FamilyKind::GespC
        )
    }

    /// Kind with the almost-extraspecial central C_{p^2}/C_4 factor.
    pub fn is_almost(&self) -> bool {
        matches!(self, FamilyKind::Aes2 | FamilyKind::Aesp | FamilyKind::Ges2C4 | FamilyKind::GespC)
    }
}

/// One family member: a kind plus its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    kind: FamilyKind,
    p: u64,
    n: u32,
    k: u32,
}

pub const DEFAULT_REALIZE_BUDGET: u64 = 100_000;

impl FamilySpec {
    pub fn new(kind: FamilyKind, p: u64, n: u32, k: u32) -> Result<Self, FamilyError> {
        if !crate::arith::is_prime(p) {
            return Err(FamilyError::InvalidSpec(format!("{p} is not prime")));
        }
        if p >= 1 << 32 {
            return Err(FamilyError::InvalidSpec(format!("p = {p} is too large (p^2 must fit u64)")));
        }
        if kind.is_two_group() != (p == 2) {
            return Err(FamilyError::InvalidSpec(format!(
                "kind {} requires p {} 2, got p = {p}",
                kind.token(),
                if kind.is_two_group() { "=" } else { "≠" },
            )));
        }
        if n == 0 {
            return Err(FamilyError::InvalidSpec("n must be at least 1".into()));
        }
        if k != 0 && !kind.is_generalized() {
            return Err(FamilyError::InvalidSpec(format!(
                "kind {} does not take a k parameter",
                kind.token()
            )));
        }
        Ok(FamilySpec { kind, p, n, k })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// |G| = p^{2n+1+k} for the extraspecial-core kinds and p^{2n+2+k} for the
    /// almost-extraspecial ones.
    pub fn group_order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.order_exponent())
    }

    pub(crate) fn order_exponent(&self) -> u32 {
        2 * self.n + self.k + if self.kind.is_almost() { 2 } else { 1 }
    }

    /// exp(G): p for the Heisenberg kinds, p^2 otherwise.
    pub fn exponent(&self) -> BigUint {
        match self.kind {
            FamilyKind::EspHe | FamilyKind::GespHe => BigUint::from(self.p),
            _ => BigUint::from(self.p) * BigUint::from(self.p),
        }
    }

    pub fn has_exponent_p(&self) -> bool {
        matches!(self.kind, FamilyKind::EspHe | FamilyKind::GespHe)
    }

    /// Predicted center order: p (extraspecial), p^2 (almost), times p^k.
    pub fn center_order(&self) -> BigUint {
        let e = self.k + if self.kind.is_almost() { 2 } else { 1 };
        BigUint::from(self.p).pow(e)
    }

    /// Builds the explicit model, left-associating central products and
    /// identifying the minimum-index order-p central subgroup at each step.
    pub fn realize(&self, budget: u64) -> Result<GroupModel, FamilyError> {
        let order = self.group_order();
        if order > BigUint::from(budget) {
            return Err(FamilyError::BudgetExceeded { order, budget });
        }
        let p = self.p;
        let core = match self.kind {
            FamilyKind::Es2D | FamilyKind::Ges2D => central_power(|| GroupModel::build_atom(Atom::D8), self.n, 2)?,
            FamilyKind::Es2Q | FamilyKind::Ges2Q => {
                let q8 = GroupModel::build_atom(Atom::Q8)?;
                if self.n == 1 {
                    q8
                } else {
                    let d_part = central_power(|| GroupModel::build_atom(Atom::D8), self.n - 1, 2)?;
                    central_join(d_part, q8, 2)?
                }
            }
            FamilyKind::Aes2 | FamilyKind::Ges2C4 => {
                let d_part = central_power(|| GroupModel::build_atom(Atom::D8), self.n, 2)?;
                central_join(d_part, GroupModel::build_atom(Atom::Cyclic(4))?, 2)?
            }
            FamilyKind::EspHe | FamilyKind::GespHe => {
                central_power(|| GroupModel::build_atom(Atom::Heisenberg(p)), self.n, p)?
            }
            FamilyKind::EspM | FamilyKind::GespM => {
                central_power(|| GroupModel::build_atom(Atom::Modular(p, 3)), self.n, p)?
            }
            FamilyKind::Aesp | FamilyKind::GespC => {
                let he_part = central_power(|| GroupModel::build_atom(Atom::Heisenberg(p)), self.n, p)?;
                central_join(he_part, GroupModel::build_atom(Atom::Cyclic(p * p))?, p)?
            }
        };
        if self.k == 0 {
            return Ok(core);
        }
        let mut factors = vec![core];
        for _ in 0..self.k {
            factors.push(GroupModel::build_atom(Atom::Cyclic(p))?);
        }
        Ok(GroupModel::direct_product(factors)?)
    }
}

/// Left-associated central power of an atom, identifying the order-p central
/// subgroups step by step.
fn central_power(
    atom: impl Fn() -> Result<GroupModel, GroupError>,
    n: u32,
    p: u64,
) -> Result<GroupModel, FamilyError> {
    let mut acc = atom()?;
    for _ in 1..n {
        acc = central_join(acc, atom()?, p)?;
    }
    Ok(acc)
}

fn central_join(a: GroupModel, b: GroupModel, p: u64) -> Result<GroupModel, FamilyError> {
    let z_a = a
        .central_element_of_order(p)
        .ok_or_else(|| FamilyError::InvalidSpec(format!("{} has no central element of order {p}", a.label())))?;
    let z_b = b
        .central_element_of_order(p)
        .ok_or_else(|| FamilyError::InvalidSpec(format!("{} has no central element of order {p}", b.label())))?;
    Ok(GroupModel::central_product(a, z_a, b, z_b)?)
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.kind.token())?;
        if !self.kind.is_two_group() {
            write!(f, "p={},", self.p)?;
        }
        write!(f, "n={}", self.n)?;
        if self.kind.is_generalized() {
            write!(f, ",k={}", self.k)?;
        }
        Ok(())
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    /// Grammar: `<kind>:p=<p>,n=<n>[,k=<k>]`. `p` may be omitted for the
    /// p = 2 kinds; `k` is only accepted for the generalized kinds.
    fn from_str(s: &str) -> Result<Self, FamilyError> {
        let s = s.trim();
        let (kind_token, params) = s
            .split_once(':')
            .ok_or_else(|| FamilyError::Parse(format!("missing ':' in {s:?}")))?;
        let kind = FamilyKind::from_token(kind_token.trim())
            .ok_or_else(|| FamilyError::Parse(format!("unknown family kind {kind_token:?}")))?;
        let mut p = None;
        let mut n = None;
        let mut k = None;
        for item in params.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| FamilyError::Parse(format!("expected key=value, got {item:?}")))?;
            let value = value.trim();
            match key.trim() {
                "p" => p = Some(value.parse::<u64>().map_err(|_| FamilyError::Parse(format!("bad p {value:?}")))?),
                "n" => n = Some(value.parse::<u32>().map_err(|_| FamilyError::Parse(format!("bad n {value:?}")))?),
                "k" => k = Some(value.parse::<u32>().map_err(|_| FamilyError::Parse(format!("bad k {value:?}")))?),
                other => return Err(FamilyError::Parse(format!("unknown parameter {other:?}"))),
            }
        }
        let p = match p {
            Some(p) => p,
            None if kind.is_two_group() => 2,
            None => return Err(FamilyError::Parse(format!("kind {} needs p=<odd prime>", kind.token()))),
        };
        let n = n.ok_or_else(|| FamilyError::Parse("missing n=<n>".into()))?;
        if k.is_some() && !kind.is_generalized() {
            return Err(FamilyError::Parse(format!("kind {} does not take k", kind.token())));
        }
        FamilySpec::new(kind, p, n, k.unwrap_or(0))
    }
}

/// Every valid spec over the given primes with group order `<= max_order`,
/// letting k range over `0..=k_max` for the generalized kinds.
pub fn enumerate_specs(primes: &[u64], max_order: u64, k_max: u32) -> Vec<FamilySpec> {
    let cap = BigUint::from(max_order);
    let mut specs = Vec::new();
    for &p in primes {
        for kind in ALL_KINDS {
            if kind.is_two_group() != (p == 2) {
                continue;
            }
            let k_range = if kind.is_generalized() { 0..=k_max } else { 0..=0 };
            for k in k_range {
                for n in 1.. {
                    match FamilySpec::new(kind, p, n, k) {
                        Ok(spec) if spec.group_order() <= cap => specs.push(spec),
                        _ => break,
                    }
                }
            }
        }
    }
    specs
}

/// Aggregated closed-form statistics for one family member.
#[derive(Debug, Clone)]
pub struct GroupStats {
    pub spec: FamilySpec,
    pub order: BigUint,
    pub exponent: BigUint,
    pub census: OrderCensus,
    pub psi: BigUint,
    pub cyclic_counts: std::collections::BTreeMap<u64, BigUint>,
    pub total_cyclic: BigUint,
}

impl GroupStats {
    /// Canonical JSON with all big integers as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        obj.insert("family".into(), self.spec.kind().token().into());
        obj.insert("p".into(), self.spec.p().into());
        obj.insert("n".into(), self.spec.n().into());
        obj.insert("k".into(), self.spec.k().into());
        obj.insert("order".into(), self.order.to_string().into());
        obj.insert("exponent".into(), self.exponent.to_string().into());
        let mut census = serde_json::Map::new();
        for (d, count) in self.census.entries() {
            census.insert(d.to_string(), count.to_string().into());
        }
        obj.insert("census".into(), census.into());
        obj.insert("psi".into(), self.psi.to_string().into());
        let mut cyclic = serde_json::Map::new();
        for (d, count) in &self.cyclic_counts {
            cyclic.insert(d.to_string(), count.to_string().into());
        }
        obj.insert("cyclic".into(), cyclic.into());
        obj.insert("total_cyclic".into(), self.total_cyclic.to_string().into());
        serde_json::Value::Object(obj)
    }
}

/// Convenience: realized order as u64 (realization is budget-bounded).
pub fn order_as_u64(spec: &FamilySpec) -> Option<u64> {
    spec.group_order().to_u64()
}
