//! Closed-form element-order censuses, sums of element orders, the
//! order-doubling recurrence for 2-groups, the direct-product count rule, and
//! cyclic-subgroup counts derived from censuses.
//!
//! Everything here is exact big-integer arithmetic; the census stores only
//! the orders 1, p and p^2 (exponent-p families omit the p^2 entry).

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::families::{FamilyKind, FamilySpec, GroupStats};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("direct product needs at least one factor count")]
    EmptyFactorList,
    #[error("census entry for order {order} is {count}, not divisible by φ = {totient}")]
    Divisibility { order: u64, count: BigUint, totient: u64 },
    #[error("census order {order} is not a power of {p}")]
    NotAPrimePower { order: u64, p: u64 },
}

/// Exact map from element order to the number of elements of that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCensus {
    entries: BTreeMap<u64, BigUint>,
}

impl OrderCensus {
    pub fn from_entries(entries: BTreeMap<u64, BigUint>) -> Self {
        OrderCensus { entries }
    }

    pub fn count(&self, order: u64) -> BigUint {
        self.entries.get(&order).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, &BigUint)> {
        self.entries.iter().map(|(&d, c)| (d, c))
    }

    /// Total number of elements (the group order).
    pub fn total(&self) -> BigUint {
        self.entries.values().sum()
    }

    /// ψ as Σ d · n_d over the census.
    pub fn psi(&self) -> BigUint {
        self.entries
            .iter()
            .map(|(&d, c)| BigUint::from(d) * c)
            .sum()
    }

    /// Largest order present, i.e. the exponent for the groups in scope.
    pub fn max_order(&self) -> u64 {
        self.entries.keys().copied().max().unwrap_or(1)
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(|(d, c)| format!("{d}:{c}")).collect();
        parts.join(" ")
    }
}

fn pw(p: u64, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}

/// Number of elements of order p from the family's closed form.
pub fn np_closed_form(spec: &FamilySpec) -> BigUint {
    let p = spec.p();
    let (n, k) = (spec.n(), spec.k());
    match spec.kind() {
        // 4^n+2^n-1 and its C_2^k-padded version
        FamilyKind::Es2D | FamilyKind::Ges2D => pw(2, 2 * n + k) + pw(2, n + k) - BigUint::one(),
        FamilyKind::Es2Q | FamilyKind::Ges2Q => pw(2, 2 * n + k) - pw(2, n + k) - BigUint::one(),
        FamilyKind::Aes2 | FamilyKind::Ges2C4 => pw(2, 2 * n + k + 1) - BigUint::one(),
        FamilyKind::EspHe | FamilyKind::GespHe => pw(p, 2 * n + k + 1) - BigUint::one(),
        FamilyKind::EspM | FamilyKind::GespM => pw(p, 2 * n + k) - BigUint::one(),
        FamilyKind::Aesp | FamilyKind::GespC => pw(p, 2 * n + k + 1) - BigUint::one(),
    }
}

/// The exact census: {1, p} for exponent-p families, {1, p, p^2} otherwise,
/// with the p^2 entry derived as |G| - 1 - n_p.
pub fn closed_form_census(spec: &FamilySpec) -> OrderCensus {
    let p = spec.p();
    let np = np_closed_form(spec);
    let mut entries = BTreeMap::new();
    entries.insert(1, BigUint::one());
    if spec.has_exponent_p() {
        entries.insert(p, np);
    } else {
        let np2 = spec.group_order() - BigUint::one() - &np;
        entries.insert(p, np);
        entries.insert(p * p, np2);
    }
    OrderCensus::from_entries(entries)
}

/// ψ(G) from the per-family closed forms (not via the census; the equality of
/// the two routes is a tested identity).
pub fn psi_closed_form(spec: &FamilySpec) -> BigUint {
    let p = spec.p();
    let (n, k) = (spec.n(), spec.k());
    match spec.kind() {
        FamilyKind::Es2D | FamilyKind::Ges2D => {
            BigUint::from(6u32) * pw(2, 2 * n + k) - BigUint::from(2u32) * pw(2, n + k) - BigUint::one()
        }
        FamilyKind::Es2Q | FamilyKind::Ges2Q => {
            BigUint::from(6u32) * pw(2, 2 * n + k) + BigUint::from(2u32) * pw(2, n + k) - BigUint::one()
        }
        FamilyKind::Aes2 | FamilyKind::Ges2C4 => BigUint::from(12u32) * pw(2, 2 * n + k) - BigUint::one(),
        FamilyKind::EspHe | FamilyKind::GespHe => pw(p, 2 * n + k + 2) - BigUint::from(p) + BigUint::one(),
        FamilyKind::EspM | FamilyKind::GespM => {
            BigUint::from(p - 1) * pw(p, 2 * n + k + 2)
                + BigUint::from(p) * (pw(p, 2 * n + k) - BigUint::one())
                + BigUint::one()
        }
        FamilyKind::Aesp | FamilyKind::GespC => {
            BigUint::from(p - 1) * pw(p, 2 * n + k + 3)
                + BigUint::from(p) * (pw(p, 2 * n + k + 1) - BigUint::one())
                + BigUint::one()
        }
    }
}

/// Number of order-p elements of a direct product from the factor counts:
/// ∏(cᵢ + 1) − 1.
pub fn np_direct_product(factor_counts: &[BigUint]) -> Result<BigUint, StatsError> {
    if factor_counts.is_empty() {
        return Err(StatsError::EmptyFactorList);
    }
    let product: BigUint = factor_counts.iter().map(|c| c + BigUint::one()).product();
    Ok(product - BigUint::one())
}

/// One step of the 2-group recurrence: n_2(G_n) = 2^{m-2} + 2·n_2(G_{n-1}) + 1
/// where 2^m is the order of G_n. Callers guarantee m >= 4.
pub fn n2_recurrence_step(prev: &BigUint, m: u32) -> BigUint {
    assert!(m >= 4, "recurrence applies from order 16 upward");
    pw(2, m - 2) + BigUint::from(2u32) * prev + BigUint::one()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicCounts {
    /// order -> number of cyclic subgroups of that order (order > 1).
    pub by_order: BTreeMap<u64, BigUint>,
    /// 1 (trivial subgroup) + the counts above.
    pub total: BigUint,
}

/// Cyclic-subgroup counts from a census: each order-d entry contributes
/// n_d / φ(d) subgroups. A divisibility failure means the census is wrong and
/// is reported as an error, never rounded.
pub fn cyclic_subgroup_counts(census: &OrderCensus, p: u64) -> Result<CyclicCounts, StatsError> {
    let mut by_order = BTreeMap::new();
    let mut total = BigUint::one();
    for (d, count) in census.entries() {
        if d == 1 {
            continue;
        }
        let totient = totient_of_prime_power(d, p).ok_or(StatsError::NotAPrimePower { order: d, p })?;
        let (q, r) = count.div_rem(&BigUint::from(totient));
        if !r.is_zero() {
            return Err(StatsError::Divisibility { order: d, count: count.clone(), totient });
        }
        total += &q;
        by_order.insert(d, q);
    }
    Ok(CyclicCounts { by_order, total })
}

/// φ(p^k) = p^k − p^{k−1} when `d` is a power of `p`.
fn totient_of_prime_power(d: u64, p: u64) -> Option<u64> {
    let mut v = d;
    while v.is_multiple_of(p) {
        v /= p;
    }
    if v != 1 {
        return None;
    }
    Some(d - d / p)
}

/// All closed-form statistics for one spec.
pub fn group_stats(spec: &FamilySpec) -> Result<GroupStats, StatsError> {
    let census = closed_form_census(spec);
    let cyclic = cyclic_subgroup_counts(&census, spec.p())?;
    Ok(GroupStats {
        spec: *spec,
        order: spec.group_order(),
        exponent: spec.exponent(),
        psi: psi_closed_form(spec),
        census,
        cyclic_counts: cyclic.by_order,
        total_cyclic: cyclic.total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::enumerate_specs;

    fn spec(s: &str) -> FamilySpec {
        s.parse().unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn census_closed_forms() {
        let c = closed_form_census(&spec("es2_d:n=3"));
        assert_eq!(c.count(1), big(1));
        assert_eq!(c.count(2), big(71));
        assert_eq!(c.count(4), big(56));

        let c = closed_form_census(&spec("gesp_m:p=5,n=2,k=2"));
        assert_eq!(c.count(5), big(15624));
        assert_eq!(c.count(25), big(62500));

        let c = closed_form_census(&spec("esp_he:p=3,n=1"));
        assert_eq!(c.count(3), big(26));
        assert_eq!(c.count(9), big(0));
        assert_eq!(c.entries().count(), 2); // no p^2 entry for exponent p
        assert_eq!(c.total(), big(27));
    }

    #[test]
    fn psi_closed_forms() {
        assert_eq!(psi_closed_form(&spec("es2_q:n=3")), big(399));
        assert_eq!(psi_closed_form(&spec("esp_m:p=5,n=3")), big(1640621));
        assert_eq!(psi_closed_form(&spec("ges2_d:n=3,k=1")), big(735));
        assert_eq!(psi_closed_form(&spec("es2_d:n=3")), big(367));
        assert_eq!(psi_closed_form(&spec("aes2:n=1")), big(47));
        assert_eq!(psi_closed_form(&spec("ges2_q:n=1,k=1")), big(55));
        assert_eq!(psi_closed_form(&spec("ges2_c4:n=1,k=1")), big(95));
    }

    #[test]
    fn psi_agrees_with_census_over_a_wide_sweep() {
        // identity between the two formula sets: ψ = 1 + p·n_p + p²·n_{p²}
        for p in [2u64, 3, 5, 7] {
            for spec in enumerate_specs(&[p], p.pow(18), 4) {
                if spec.n() > 6 {
                    continue;
                }
                let census = closed_form_census(&spec);
                assert_eq!(census.psi(), psi_closed_form(&spec), "{spec}");
                assert_eq!(census.total(), spec.group_order(), "{spec}");
            }
        }
    }

    #[test]
    fn direct_product_count_rule() {
        assert_eq!(np_direct_product(&[big(5), big(1)]).unwrap(), big(11));
        assert_eq!(np_direct_product(&[big(19), big(3)]).unwrap(), big(79));
        assert_eq!(np_direct_product(&[big(0), big(0), big(0)]).unwrap(), big(0));
        assert!(matches!(np_direct_product(&[]), Err(StatsError::EmptyFactorList)));
    }

    #[test]
    fn recurrence_steps() {
        assert_eq!(n2_recurrence_step(&big(5), 5), big(19));
        assert_eq!(n2_recurrence_step(&big(1), 5), big(11));
        assert_eq!(n2_recurrence_step(&big(7), 6), big(31));
    }

    #[test]
    fn recurrence_matches_the_expanded_form() {
        // n_2(G_n) = 2^{m-n}(2^{n-1}-1) + 2^{n-1} n_2(G_1) + 2^{n-1} - 1
        for (start, almost) in [(5u64, false), (1, false), (7, true)] {
            let mut prev = big(start);
            for n in 2..=20u32 {
                let m = 2 * n + if almost { 2 } else { 1 };
                prev = n2_recurrence_step(&prev, m);
                let expanded = pw(2, m - n) * (pw(2, n - 1) - BigUint::one())
                    + pw(2, n - 1) * big(start)
                    + pw(2, n - 1)
                    - BigUint::one();
                assert_eq!(prev, expanded);
            }
        }
    }

    #[test]
    fn cyclic_counts_from_censuses() {
        let d8 = OrderCensus::from_entries(BTreeMap::from([(1, big(1)), (2, big(5)), (4, big(2))]));
        let counts = cyclic_subgroup_counts(&d8, 2).unwrap();
        assert_eq!(counts.by_order, BTreeMap::from([(2, big(5)), (4, big(1))]));
        assert_eq!(counts.total, big(7));

        let he3 = OrderCensus::from_entries(BTreeMap::from([(1, big(1)), (3, big(26))]));
        let counts = cyclic_subgroup_counts(&he3, 3).unwrap();
        assert_eq!(counts.by_order, BTreeMap::from([(3, big(13))]));
        assert_eq!(counts.total, big(14));

        let c4 = OrderCensus::from_entries(BTreeMap::from([(1, big(1)), (2, big(1)), (4, big(2))]));
        let counts = cyclic_subgroup_counts(&c4, 2).unwrap();
        assert_eq!(counts.by_order, BTreeMap::from([(2, big(1)), (4, big(1))]));
        assert_eq!(counts.total, big(3));
    }

    #[test]
    fn bad_censuses_are_rejected() {
        let broken = OrderCensus::from_entries(BTreeMap::from([(1, big(1)), (9, big(7))]));
        assert!(matches!(
            cyclic_subgroup_counts(&broken, 3),
            Err(StatsError::Divisibility { order: 9, .. })
        ));
        let foreign = OrderCensus::from_entries(BTreeMap::from([(1, big(1)), (6, big(2))]));
        assert!(matches!(
            cyclic_subgroup_counts(&foreign, 2),
            Err(StatsError::NotAPrimePower { order: 6, .. })
        ));
    }

    #[test]
    fn stats_aggregate() {
        let stats = group_stats(&spec("esp_m:p=5,n=3")).unwrap();
        assert_eq!(stats.order, big(78125));
        assert_eq!(stats.exponent, big(25));
        assert_eq!(stats.psi, big(1640621));
        assert_eq!(stats.cyclic_counts, BTreeMap::from([(5, big(3906)), (25, big(3125))]));
        assert_eq!(stats.total_cyclic, big(7032));
        let json = stats.to_json();
        assert_eq!(json["order"], "78125");
        assert_eq!(json["census"]["25"], "62500");
    }
}
