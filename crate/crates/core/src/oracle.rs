//! Independent brute-force verification: censuses by exhaustion, Ω-set sizes,
//! subgroup-lattice enumeration for small groups, and formula-vs-model
//! verdicts for whole families.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigUint;
use num_rational::BigRational;
use rayon::prelude::*;
use thiserror::Error;

use crate::families::FamilySpec;
use crate::group_model::GroupModel;
use crate::order_stats::{self, OrderCensus};

pub const DEFAULT_CENSUS_BUDGET: u64 = 100_000;
pub const DEFAULT_LATTICE_BUDGET: u64 = 256;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("group of order {order} exceeds oracle budget {budget}")]
    BudgetExceeded { order: u64, budget: u64 },
    #[error(transparent)]
    Family(#[from] crate::families::FamilyError),
    #[error(transparent)]
    Group(#[from] crate::group_model::GroupError),
}

fn check_budget(g: &GroupModel, budget: u64) -> Result<(), OracleError> {
    if g.order() > budget {
        return Err(OracleError::BudgetExceeded { order: g.order(), budget });
    }
    Ok(())
}

/// Exact census by computing the order of every element. The element range
/// is partitioned across threads; the merged result is partition-independent.
pub fn census_bruteforce(g: &GroupModel, budget: u64) -> Result<OrderCensus, OracleError> {
    check_budget(g, budget)?;
    let merged = (0..g.order())
        .into_par_iter()
        .fold(BTreeMap::<u64, u64>::new, |mut acc, i| {
            *acc.entry(g.order_of_idx(i)).or_insert(0) += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (d, c) in b {
                *a.entry(d).or_insert(0) += c;
            }
            a
        });
    Ok(OrderCensus::from_entries(
        merged.into_iter().map(|(d, c)| (d, BigUint::from(c))).collect(),
    ))
}

/// Number of elements with x^p = identity (the Ω-set for k = 1; includes the
/// identity).
pub fn omega1_size(g: &GroupModel, p: u64, budget: u64) -> Result<u64, OracleError> {
    check_budget(g, budget)?;
    Ok((0..g.order())
        .into_par_iter()
        .filter(|&i| g.pow_idx(i, p) == g.identity().index())
        .count() as u64)
}

/// Order of the subgroup generated by the Ω-set. For groups where the set is
/// already closed this equals [`omega1_size`]; the almost-extraspecial
/// 2-groups witness a strict inequality.
pub fn omega1_subgroup_order(g: &GroupModel, p: u64, budget: u64) -> Result<u64, OracleError> {
    check_budget(g, budget)?;
    let seed: Vec<u64> = (0..g.order())
        .filter(|&i| g.pow_idx(i, p) == g.identity().index())
        .collect();
    Ok(g.closure_idx(&seed).len() as u64)
}

/// Subgroup-lattice summary of a small group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeReport {
    pub total_subgroups: u64,
    pub cyclic_subgroups: u64,
    /// |C(G)| / |L(G)| in lowest terms.
    pub cdeg: BigRational,
    pub by_order: BTreeMap<u64, u64>,
}

/// Complete subgroup lattice by seeding with every cyclic subgroup and
/// closing under pairwise joins. Subgroups are canonicalized as sorted
/// element-index lists; the cyclic ones are exactly the seeds.
pub fn enumerate_lattice(g: &GroupModel, budget: u64) -> Result<LatticeReport, OracleError> {
    check_budget(g, budget)?;
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut subgroups: Vec<Vec<u64>> = Vec::new();
    let mut gens_of: Vec<Vec<u64>> = Vec::new();
    for x in 0..g.order() {
        let h = g.closure_idx(&[x]);
        if seen.insert(h.clone()) {
            subgroups.push(h);
            gens_of.push(vec![x]);
        }
    }
    let cyclic = subgroups.len() as u64;

    let mut pending: Vec<usize> = (0..subgroups.len()).collect();
    while let Some(i) = pending.pop() {
        for j in 0..subgroups.len() {
            if subgroups[j].len() == g.order() as usize || i == j {
                continue;
            }
            let mut union_gens = gens_of[i].clone();
            union_gens.extend_from_slice(&gens_of[j]);
            let join = g.closure_idx(&union_gens);
            if seen.insert(join.clone()) {
                let reduced = reduce_generators(g, &join);
                subgroups.push(join);
                gens_of.push(reduced);
                pending.push(subgroups.len() - 1);
            }
        }
    }

    let mut by_order = BTreeMap::new();
    for h in &subgroups {
        *by_order.entry(h.len() as u64).or_insert(0) += 1;
    }
    let total = subgroups.len() as u64;
    Ok(LatticeReport {
        total_subgroups: total,
        cyclic_subgroups: cyclic,
        cdeg: BigRational::new(cyclic.into(), total.into()),
        by_order,
    })
}

/// A small generating set for a subgroup given as a sorted member list.
fn reduce_generators(g: &GroupModel, members: &[u64]) -> Vec<u64> {
    let mut gens: Vec<u64> = Vec::new();
    let mut have: BTreeSet<u64> = [g.identity().index()].into();
    for &x in members {
        if !have.contains(&x) {
            gens.push(x);
            have = g.closure_idx(&gens).into_iter().collect();
            if have.len() == members.len() {
                break;
            }
        }
    }
    gens
}

/// One formula-vs-oracle comparison.
#[derive(Debug, Clone)]
pub struct VerdictRow {
    pub quantity: String,
    pub formula: String,
    pub oracle: String,
}

impl VerdictRow {
    pub fn matches(&self) -> bool {
        self.formula == self.oracle
    }
}

/// Verdict for one family spec: per-quantity rows plus the overall flag.
#[derive(Debug, Clone)]
pub struct FamilyVerdict {
    pub spec: FamilySpec,
    pub rows: Vec<VerdictRow>,
}

impl FamilyVerdict {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(VerdictRow::matches)
    }

    /// One JSON object per checked quantity, in row order.
    pub fn to_json_lines(&self) -> Vec<serde_json::Value> {
        self.rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                obj.insert("spec".into(), self.spec.to_string().into());
                obj.insert("quantity".into(), row.quantity.clone().into());
                obj.insert("formula".into(), row.formula.clone().into());
                obj.insert("oracle".into(), row.oracle.clone().into());
                obj.insert("match".into(), row.matches().into());
                serde_json::Value::Object(obj)
            })
            .collect()
    }
}

/// Realizes the spec and compares census, ψ, exponent, derived-subgroup
/// order, center order and Ω-set size against the closed forms. Mismatches
/// are reported in the verdict, not raised.
pub fn verify_family(spec: &FamilySpec, budget: u64) -> Result<FamilyVerdict, OracleError> {
    let g = spec.realize(budget)?;
    let census = census_bruteforce(&g, budget)?;
    let formula_census = order_stats::closed_form_census(spec);
    let mut rows = Vec::new();

    rows.push(VerdictRow {
        quantity: "order".into(),
        formula: spec.group_order().to_string(),
        oracle: g.order().to_string(),
    });
    let mut orders: BTreeSet<u64> = formula_census.entries().map(|(d, _)| d).collect();
    orders.extend(census.entries().map(|(d, _)| d));
    for d in orders {
        rows.push(VerdictRow {
            quantity: format!("n_{d}"),
            formula: formula_census.count(d).to_string(),
            oracle: census.count(d).to_string(),
        });
    }
    rows.push(VerdictRow {
        quantity: "psi".into(),
        formula: order_stats::psi_closed_form(spec).to_string(),
        oracle: census.psi().to_string(),
    });
    rows.push(VerdictRow {
        quantity: "exponent".into(),
        formula: spec.exponent().to_string(),
        oracle: census.max_order().to_string(),
    });
    rows.push(VerdictRow {
        quantity: "derived_order".into(),
        formula: spec.p().to_string(),
        oracle: g.derived_subgroup(budget)?.len().to_string(),
    });
    rows.push(VerdictRow {
        quantity: "center_order".into(),
        formula: spec.center_order().to_string(),
        oracle: g.center().len().to_string(),
    });
    rows.push(VerdictRow {
        quantity: "omega1".into(),
        formula: (formula_census.count(1) + formula_census.count(spec.p())).to_string(),
        oracle: omega1_size(&g, spec.p(), budget)?.to_string(),
    });
    Ok(FamilyVerdict { spec: *spec, rows })
}

/// Group-axiom spot check: exhaustive for |G| <= 256, sampled triples above.
pub fn axioms_hold(g: &GroupModel, samples: u64, seed: u64) -> bool {
    let n = g.order();
    let id = g.identity().index();
    if n <= 256 {
        for x in 0..n {
            if g.mul_idx(id, x) != x || g.mul_idx(x, id) != x {
                return false;
            }
            let inv = g.inverse_idx(x);
            if g.mul_idx(x, inv) != id || g.mul_idx(inv, x) != id {
                return false;
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = g.mul_idx(x, y);
                for z in 0..n {
                    if g.mul_idx(xy, z) != g.mul_idx(x, g.mul_idx(y, z)) {
                        return false;
                    }
                }
            }
        }
        return true;
    }
    let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
    let mut next = move || {
        // splitmix64
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };
    for _ in 0..samples {
        let x = next() % n;
        let y = next() % n;
        let z = next() % n;
        if g.mul_idx(g.mul_idx(x, y), z) != g.mul_idx(x, g.mul_idx(y, z)) {
            return false;
        }
        if g.mul_idx(id, x) != x || g.mul_idx(x, id) != x {
            return false;
        }
        let inv = g.inverse_idx(x);
        if g.mul_idx(x, inv) != id {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_model::Atom;
    use num_traits::One;

    fn spec(s: &str) -> FamilySpec {
        s.parse().unwrap()
    }

    fn atom(a: Atom) -> GroupModel {
        GroupModel::build_atom(a).unwrap()
    }

    #[test]
    fn census_examples() {
        let g = spec("es2_q:n=3").realize(DEFAULT_CENSUS_BUDGET).unwrap();
        let census = census_bruteforce(&g, DEFAULT_CENSUS_BUDGET).unwrap();
        assert_eq!(census.count(2), BigUint::from(55u32));
        assert_eq!(census.count(4), BigUint::from(72u32));

        let g = spec("aesp:p=5,n=2").realize(DEFAULT_CENSUS_BUDGET).unwrap();
        let census = census_bruteforce(&g, DEFAULT_CENSUS_BUDGET).unwrap();
        assert_eq!(census.count(5), BigUint::from(3124u32));
        assert_eq!(census.count(25), BigUint::from(12500u32));

        let census = census_bruteforce(&atom(Atom::Cyclic(2)), 10).unwrap();
        assert_eq!(census.count(1), BigUint::one());
        assert_eq!(census.count(2), BigUint::one());
    }

    #[test]
    fn census_budget() {
        let g = spec("esp_he:p=5,n=2").realize(10_000).unwrap();
        assert!(matches!(
            census_bruteforce(&g, 1000),
            Err(OracleError::BudgetExceeded { order: 3125, budget: 1000 })
        ));
    }

    #[test]
    fn census_is_partition_independent() {
        let g = spec("es2_d:n=2").realize(1000).unwrap();
        let parallel = census_bruteforce(&g, 1000).unwrap();
        let mut sequential = BTreeMap::new();
        for i in 0..g.order() {
            *sequential.entry(g.order_of_idx(i)).or_insert(0u64) += 1;
        }
        let sequential = OrderCensus::from_entries(
            sequential.into_iter().map(|(d, c)| (d, BigUint::from(c))).collect(),
        );
        assert_eq!(parallel, sequential);
    }

    #[test]
    fn omega_set_sizes() {
        let g = spec("esp_m:p=5,n=2").realize(DEFAULT_CENSUS_BUDGET).unwrap();
        assert_eq!(g.order(), 3125);
        assert_eq!(omega1_size(&g, 5, DEFAULT_CENSUS_BUDGET).unwrap(), 625);

        let g = spec("aes2:n=1").realize(1000).unwrap();
        assert_eq!(omega1_size(&g, 2, 1000).unwrap(), 8);
        assert_eq!(omega1_subgroup_order(&g, 2, 1000).unwrap(), 16);

        assert_eq!(omega1_size(&atom(Atom::Cyclic(9)), 3, 100).unwrap(), 3);
    }

    #[test]
    fn lattice_of_cyclic_groups_is_all_cyclic() {
        for n in 1..=100u64 {
            let report = enumerate_lattice(&atom(Atom::Cyclic(n)), DEFAULT_LATTICE_BUDGET).unwrap();
            assert_eq!(report.cdeg, BigRational::one(), "C_{n}");
            assert_eq!(report.total_subgroups, report.cyclic_subgroups);
        }
        let c4 = enumerate_lattice(&atom(Atom::Cyclic(4)), 16).unwrap();
        assert_eq!(c4.total_subgroups, 3);
        assert_eq!(c4.cyclic_subgroups, 3);
    }

    #[test]
    fn lattice_of_small_two_groups() {
        let d8 = enumerate_lattice(&atom(Atom::D8), 16).unwrap();
        assert_eq!(d8.total_subgroups, 10);
        assert_eq!(d8.cyclic_subgroups, 7);
        assert_eq!(d8.by_order, BTreeMap::from([(1, 1), (2, 5), (4, 3), (8, 1)]));

        let q8 = enumerate_lattice(&atom(Atom::Q8), 16).unwrap();
        assert_eq!(q8.total_subgroups, 6);
        assert_eq!(q8.cyclic_subgroups, 5);
        assert_eq!(q8.cdeg, BigRational::new(5.into(), 6.into()));
    }

    #[test]
    fn lattice_determinism() {
        let a = enumerate_lattice(&atom(Atom::Modular(3, 3)), 256).unwrap();
        let b = enumerate_lattice(&atom(Atom::Modular(3, 3)), 256).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.by_order, BTreeMap::from([(1, 1), (3, 4), (9, 4), (27, 1)]));
    }

    #[test]
    fn lattice_budget() {
        let g = atom(Atom::Heisenberg(7));
        assert!(matches!(
            enumerate_lattice(&g, DEFAULT_LATTICE_BUDGET),
            Err(OracleError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn family_verdicts_pass() {
        for text in ["es2_d:n=3", "gesp_c:p=5,n=1,k=2", "esp_he:p=5,n=3"] {
            let verdict = verify_family(&spec(text), DEFAULT_CENSUS_BUDGET).unwrap();
            assert!(verdict.pass(), "{text}: {:?}", verdict.rows);
        }
        let verdict = verify_family(&spec("es2_d:n=3"), DEFAULT_CENSUS_BUDGET).unwrap();
        let psi = verdict.rows.iter().find(|r| r.quantity == "psi").unwrap();
        assert_eq!(psi.formula, "367");
        assert_eq!(psi.oracle, "367");
        let lines = verdict.to_json_lines();
        assert!(lines.iter().all(|l| l["match"] == true));
    }

    #[test]
    fn axiom_checks() {
        assert!(axioms_hold(&atom(Atom::D8), 0, 0));
        assert!(axioms_hold(&atom(Atom::Modular(2, 4)), 0, 0));
        let big = spec("esp_he:p=3,n=3").realize(10_000).unwrap();
        assert!(axioms_hold(&big, 10_000, 42));
    }
}
