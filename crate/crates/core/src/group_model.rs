//! Explicit element-level models of the building-block groups and their
//! direct and central products.
//!
//! Every model indexes its elements by `0..order` with a fixed bijection, so
//! multiplication is plain integer arithmetic plus table lookups. Atoms get a
//! structured encoding (cyclic residues, dihedral rotation/flip pairs, the
//! hard-coded quaternion table, Heisenberg triples, modular-group pairs);
//! products pack factor indices in mixed radix. A central product is the
//! quotient of the direct product by the cyclic subgroup generated by
//! `(z_a, z_b^{-1})`, with each coset named by its lexicographically smallest
//! member pair.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("element belongs to group #{element_group}, not #{expected_group}")]
    ForeignElement { element_group: u64, expected_group: u64 },
    #[error("designated element {index} is not central in {label}")]
    NotCentral { index: u64, label: String },
    #[error("designated central elements have orders {left} and {right}")]
    CentralOrderMismatch { left: u64, right: u64 },
    #[error("direct product needs at least one factor")]
    EmptyProduct,
    #[error("group of order {order} exceeds budget {budget}")]
    BudgetExceeded { order: u64, budget: u64 },
}

/// An element handle: valid only for the model that issued it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group_id: u64,
    index: u64,
}

impl GroupElement {
    pub fn group_id(&self) -> u64 {
        self.group_id
    }

    pub fn index(&self) -> u64 {
        self.index
    }
}

/// Which group a model implements, together with the data its multiplication
/// rule needs.
enum Structure {
    Cyclic {
        modulus: u64,
    },
    Dihedral8,
    Quaternion8,
    /// Upper unitriangular 3x3 matrices over F_p: (a, b, c) with
    /// (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b').
    Heisenberg {
        p: u64,
    },
    /// Pairs (a mod p^{n-1}, b mod p) with (a,b)(a',b') = (a + a'*r^b, b+b')
    /// where r = p^{n-2}+1; powers of r are precomputed.
    Modular {
        p: u64,
        a_modulus: u64,
        unit_powers: Vec<u64>,
    },
    /// Mixed-radix packing over the factors, leftmost factor most significant.
    Direct {
        factors: Vec<GroupModel>,
        suffix_orders: Vec<u64>,
    },
    /// Quotient of left x right by <(z_left, z_right^{-1})>. `reps[i]` is the
    /// packed pair naming coset i; `coset_of[pair]` inverts it for every pair.
    Central {
        left: Box<GroupModel>,
        right: Box<GroupModel>,
        reps: Vec<u64>,
        coset_of: Vec<u32>,
    },
}

/// `i * -1` in the hard-coded quaternion table below maps index i to row[i].
/// Index encoding: 0:1, 1:-1, 2:i, 3:-i, 4:j, 5:-j, 6:k, 7:-k.
const QUATERNION_TABLE: [[u64; 8]; 8] = [
    [0, 1, 2, 3, 4, 5, 6, 7],
    [1, 0, 3, 2, 5, 4, 7, 6],
    [2, 3, 1, 0, 6, 7, 5, 4],
    [3, 2, 0, 1, 7, 6, 4, 5],
    [4, 5, 7, 6, 1, 0, 2, 3],
    [5, 4, 6, 7, 0, 1, 3, 2],
    [6, 7, 4, 5, 3, 2, 1, 0],
    [7, 6, 5, 4, 2, 3, 0, 1],
];

/// One of the named building-block groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    /// Cyclic group of the given order.
    Cyclic(u64),
    /// Dihedral group with 8 elements.
    D8,
    /// Quaternion group.
    Q8,
    /// Heisenberg group of order p^3 (odd p).
    Heisenberg(u64),
    /// Modular group of order p^n (n >= 3 for odd p, n >= 4 for p = 2).
    Modular(u64, u32),
}

pub struct GroupModel {
    id: u64,
    order: u64,
    identity: u64,
    generators: Vec<u64>,
    label: String,
    structure: Structure,
}

impl GroupModel {
    fn register(
        order: u64,
        identity: u64,
        generators: Vec<u64>,
        label: String,
        structure: Structure,
    ) -> Self {
        GroupModel {
            id: NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed),
            order,
            identity,
            generators,
            label,
            structure,
        }
    }

    /// Builds one of the atom groups.
    pub fn build_atom(atom: Atom) -> Result<Self, GroupError> {
        match atom {
            Atom::Cyclic(m) => {
                if m == 0 {
                    return Err(GroupError::InvalidParameter("cyclic order must be positive".into()));
                }
                let generators = if m > 1 { vec![1] } else { vec![] };
                Ok(Self::register(m, 0, generators, format!("C{m}"), Structure::Cyclic { modulus: m }))
            }
            Atom::D8 => Ok(Self::register(
                8,
                0,
                vec![2, 1], // r = (1,0), s = (0,1) with index 2a+b
                "D8".into(),
                Structure::Dihedral8,
            )),
            Atom::Q8 => Ok(Self::register(8, 0, vec![2, 4], "Q8".into(), Structure::Quaternion8)),
            Atom::Heisenberg(p) => {
                if !crate::arith::is_prime(p) || p == 2 {
                    return Err(GroupError::InvalidParameter(format!(
                        "Heisenberg group needs an odd prime, got {p}"
                    )));
                }
                let order = p.checked_mul(p).and_then(|s| s.checked_mul(p)).ok_or_else(|| {
                    GroupError::InvalidParameter(format!("p^3 overflows for p = {p}"))
                })?;
                Ok(Self::register(
                    order,
                    0,
                    vec![p * p, p], // x = (1,0,0), y = (0,1,0)
                    format!("He{p}"),
                    Structure::Heisenberg { p },
                ))
            }
            Atom::Modular(p, n) => {
                if !crate::arith::is_prime(p) {
                    return Err(GroupError::InvalidParameter(format!("{p} is not prime")));
                }
                let min_n = if p == 2 { 4 } else { 3 };
                if n < min_n {
                    return Err(GroupError::InvalidParameter(format!(
                        "modular group of order {p}^{n} needs n >= {min_n}"
                    )));
                }
                let a_modulus = p
                    .checked_pow(n - 1)
                    .ok_or_else(|| GroupError::InvalidParameter(format!("{p}^{n} overflows")))?;
                let order = a_modulus
                    .checked_mul(p)
                    .ok_or_else(|| GroupError::InvalidParameter(format!("{p}^{n} overflows")))?;
                let unit = p.pow(n - 2) + 1;
                let mut unit_powers = Vec::with_capacity(p as usize);
                let mut acc = 1u64;
                for _ in 0..p {
                    unit_powers.push(acc);
                    acc = mulmod(acc, unit, a_modulus);
                }
                Ok(Self::register(
                    order,
                    0,
                    vec![p, 1], // x = (1,0), y = (0,1) with index a*p + b
                    format!("M{order}"),
                    Structure::Modular { p, a_modulus, unit_powers },
                ))
            }
        }
    }

    /// Componentwise product with mixed-radix element packing.
    pub fn direct_product(factors: Vec<GroupModel>) -> Result<Self, GroupError> {
        if factors.is_empty() {
            return Err(GroupError::EmptyProduct);
        }
        if factors.len() == 1 {
            return Ok(factors.into_iter().next().unwrap());
        }
        let mut order = 1u64;
        for f in &factors {
            order = order.checked_mul(f.order).ok_or_else(|| {
                GroupError::InvalidParameter("direct product order overflows".into())
            })?;
        }
        let mut suffix_orders = vec![1u64; factors.len()];
        for i in (0..factors.len() - 1).rev() {
            suffix_orders[i] = suffix_orders[i + 1] * factors[i + 1].order;
        }
        let identity = factors
            .iter()
            .zip(&suffix_orders)
            .map(|(f, s)| f.identity * s)
            .sum();
        let mut generators = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            for &g in &f.generators {
                let mut packed = 0u64;
                for (j, other) in factors.iter().enumerate() {
                    let comp = if i == j { g } else { other.identity };
                    packed += comp * suffix_orders[j];
                }
                generators.push(packed);
            }
        }
        let label = factors
            .iter()
            .map(|f| {
                if f.label.contains('∘') || f.label.contains('×') {
                    format!("({})", f.label)
                } else {
                    f.label.clone()
                }
            })
            .collect::<Vec<_>>()
            .join("×");
        Ok(Self::register(order, identity, generators, label, Structure::Direct {
            factors,
            suffix_orders,
        }))
    }

    /// Central product identifying `<z_a>` with `<z_b>`: the quotient of
    /// `a x b` by the cyclic subgroup generated by `(z_a, z_b^{-1})`.
    pub fn central_product(
        a: GroupModel,
        z_a: GroupElement,
        b: GroupModel,
        z_b: GroupElement,
    ) -> Result<Self, GroupError> {
        a.check_membership(z_a)?;
        b.check_membership(z_b)?;
        if !a.is_central_idx(z_a.index) {
            return Err(GroupError::NotCentral { index: z_a.index, label: a.label.clone() });
        }
        if !b.is_central_idx(z_b.index) {
            return Err(GroupError::NotCentral { index: z_b.index, label: b.label.clone() });
        }
        let oz = a.order_of_idx(z_a.index);
        let oz_b = b.order_of_idx(z_b.index);
        if oz != oz_b {
            return Err(GroupError::CentralOrderMismatch { left: oz, right: oz_b });
        }
        let pairs = a
            .order
            .checked_mul(b.order)
            .and_then(|n| usize::try_from(n).ok())
            .ok_or_else(|| GroupError::InvalidParameter("central product too large".into()))?;

        // Orbit walk: scanning packed pairs in ascending order means the first
        // unlabeled member of each coset is its lexicographic minimum.
        let zb_inv = b.inverse_idx(z_b.index);
        let mut coset_of = vec![u32::MAX; pairs];
        let mut reps = Vec::with_capacity(pairs / oz as usize);
        for pair in 0..pairs as u64 {
            if coset_of[pair as usize] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(pair);
            let (mut xa, mut xb) = (pair / b.order, pair % b.order);
            for _ in 0..oz {
                coset_of[(xa * b.order + xb) as usize] = c;
                xa = a.mul_idx(xa, z_a.index);
                xb = b.mul_idx(xb, zb_inv);
            }
        }
        debug_assert_eq!(reps.len() as u64 * oz, a.order * b.order);

        let order = reps.len() as u64;
        let identity = coset_of[(a.identity * b.order + b.identity) as usize] as u64;
        let mut generators = Vec::new();
        for &g in &a.generators {
            generators.push(coset_of[(g * b.order + b.identity) as usize] as u64);
        }
        for &g in &b.generators {
            generators.push(coset_of[(a.identity * b.order + g) as usize] as u64);
        }
        let wrap = |l: &str| {
            if l.contains('×') {
                format!("({l})")
            } else {
                l.to_string()
            }
        };
        let label = format!("{}∘{}", wrap(&a.label), wrap(&b.label));
        Ok(Self::register(order, identity, generators, label, Structure::Central {
            left: Box::new(a),
            right: Box::new(b),
            reps,
            coset_of,
        }))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { group_id: self.id, index: self.identity }
    }

    /// The element with the given index.
    pub fn element(&self, index: u64) -> Result<GroupElement, GroupError> {
        if index >= self.order {
            return Err(GroupError::InvalidParameter(format!(
                "index {index} out of range for group of order {}",
                self.order
            )));
        }
        Ok(GroupElement { group_id: self.id, index })
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|index| GroupElement { group_id: self.id, index })
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        self.generators
            .iter()
            .map(|&index| GroupElement { group_id: self.id, index })
            .collect()
    }

    fn check_membership(&self, x: GroupElement) -> Result<(), GroupError> {
        if x.group_id != self.id {
            return Err(GroupError::ForeignElement {
                element_group: x.group_id,
                expected_group: self.id,
            });
        }
        Ok(())
    }

    pub fn multiply(&self, x: GroupElement, y: GroupElement) -> Result<GroupElement, GroupError> {
        self.check_membership(x)?;
        self.check_membership(y)?;
        Ok(GroupElement { group_id: self.id, index: self.mul_idx(x.index, y.index) })
    }

    pub fn inverse(&self, x: GroupElement) -> Result<GroupElement, GroupError> {
        self.check_membership(x)?;
        Ok(GroupElement { group_id: self.id, index: self.inverse_idx(x.index) })
    }

    pub fn power(&self, x: GroupElement, e: u64) -> Result<GroupElement, GroupError> {
        self.check_membership(x)?;
        Ok(GroupElement { group_id: self.id, index: self.pow_idx(x.index, e) })
    }

    /// Smallest d >= 1 with x^d = identity.
    pub fn element_order(&self, x: GroupElement) -> Result<u64, GroupError> {
        self.check_membership(x)?;
        Ok(self.order_of_idx(x.index))
    }

    /// Exactly the elements commuting with all of the group (checked against
    /// the generating set, which is equivalent).
    pub fn center(&self) -> Vec<GroupElement> {
        (0..self.order)
            .filter(|&i| self.is_central_idx(i))
            .map(|index| GroupElement { group_id: self.id, index })
            .collect()
    }

    /// The subgroup generated by all commutators, as the normal closure of
    /// the commutators of the generators.
    pub fn derived_subgroup(&self, budget: u64) -> Result<Vec<GroupElement>, GroupError> {
        if self.order > budget {
            return Err(GroupError::BudgetExceeded { order: self.order, budget });
        }
        let mut seeds = BTreeSet::new();
        for &g in &self.generators {
            for &h in &self.generators {
                seeds.insert(self.commutator_idx(g, h));
            }
        }
        loop {
            let closure = self.closure_idx(&seeds.iter().copied().collect::<Vec<_>>());
            let mut grew = false;
            for &x in &closure {
                for &g in &self.generators {
                    let conj = self.mul_idx(self.mul_idx(self.inverse_idx(g), x), g);
                    if closure.binary_search(&conj).is_err() && seeds.insert(conj) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return Ok(closure
                    .into_iter()
                    .map(|index| GroupElement { group_id: self.id, index })
                    .collect());
            }
            for &x in &closure {
                seeds.insert(x);
            }
        }
    }

    pub(crate) fn mul_idx(&self, x: u64, y: u64) -> u64 {
        match &self.structure {
            Structure::Cyclic { modulus } => (x + y) % modulus,
            Structure::Dihedral8 => {
                let (a, b) = (x / 2, x % 2);
                let (c, d) = (y / 2, y % 2);
                let rot = if b == 0 { (a + c) % 4 } else { (a + 4 - c) % 4 };
                rot * 2 + (b + d) % 2
            }
            Structure::Quaternion8 => QUATERNION_TABLE[x as usize][y as usize],
            Structure::Heisenberg { p } => {
                let (a, rest) = (x / (p * p), x % (p * p));
                let (b, c) = (rest / p, rest % p);
                let (a2, rest2) = (y / (p * p), y % (p * p));
                let (b2, c2) = (rest2 / p, rest2 % p);
                let corner = (c + c2 + mulmod(a, b2, *p)) % p;
                ((a + a2) % p) * p * p + ((b + b2) % p) * p + corner
            }
            Structure::Modular { p, a_modulus, unit_powers } => {
                let (a, b) = (x / p, x % p);
                let (a2, b2) = (y / p, y % p);
                let a3 = (a + mulmod(a2, unit_powers[b as usize], *a_modulus)) % a_modulus;
                a3 * p + (b + b2) % p
            }
            Structure::Direct { factors, suffix_orders } => {
                let mut packed = 0u64;
                for (f, &s) in factors.iter().zip(suffix_orders) {
                    let xi = (x / s) % f.order;
                    let yi = (y / s) % f.order;
                    packed += f.mul_idx(xi, yi) * s;
                }
                packed
            }
            Structure::Central { left, right, reps, coset_of } => {
                let (a1, b1) = (reps[x as usize] / right.order, reps[x as usize] % right.order);
                let (a2, b2) = (reps[y as usize] / right.order, reps[y as usize] % right.order);
                let pair = left.mul_idx(a1, a2) * right.order + right.mul_idx(b1, b2);
                coset_of[pair as usize] as u64
            }
        }
    }

    pub(crate) fn order_of_idx(&self, x: u64) -> u64 {
        let mut acc = x;
        let mut d = 1u64;
        while acc != self.identity {
            acc = self.mul_idx(acc, x);
            d += 1;
            debug_assert!(d <= self.order);
        }
        d
    }

    pub(crate) fn inverse_idx(&self, x: u64) -> u64 {
        self.pow_idx(x, self.order_of_idx(x) - 1)
    }

    pub(crate) fn pow_idx(&self, x: u64, mut e: u64) -> u64 {
        let mut base = x;
        let mut acc = self.identity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_idx(acc, base);
            }
            base = self.mul_idx(base, base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn commutator_idx(&self, x: u64, y: u64) -> u64 {
        let xy = self.mul_idx(x, y);
        let yx = self.mul_idx(y, x);
        self.mul_idx(self.inverse_idx(yx), xy)
    }

    pub(crate) fn is_central_idx(&self, x: u64) -> bool {
        self.generators
            .iter()
            .all(|&g| self.mul_idx(x, g) == self.mul_idx(g, x))
    }

    /// Sorted index list of the subgroup generated by `seed`.
    pub(crate) fn closure_idx(&self, seed: &[u64]) -> Vec<u64> {
        let mut members = BTreeSet::new();
        members.insert(self.identity);
        let mut frontier = vec![self.identity];
        while let Some(v) = frontier.pop() {
            for &s in seed {
                let w = self.mul_idx(v, s);
                if members.insert(w) {
                    frontier.push(w);
                }
            }
        }
        members.into_iter().collect()
    }

    /// Minimum-index central element of the given order, used to pick the
    /// identified subgroup when chaining central products.
    pub(crate) fn central_element_of_order(&self, d: u64) -> Option<GroupElement> {
        (0..self.order)
            .find(|&i| self.order_of_idx(i) == d && self.is_central_idx(i))
            .map(|index| GroupElement { group_id: self.id, index })
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn census(g: &GroupModel) -> BTreeMap<u64, u64> {
        let mut m = BTreeMap::new();
        for i in 0..g.order() {
            *m.entry(g.order_of_idx(i)).or_insert(0) += 1;
        }
        m
    }

    fn exhaustive_axioms(g: &GroupModel) {
        let n = g.order();
        for x in 0..n {
            assert_eq!(g.mul_idx(g.identity, x), x);
            assert_eq!(g.mul_idx(x, g.identity), x);
            let inv = g.inverse_idx(x);
            assert_eq!(g.mul_idx(x, inv), g.identity);
            assert_eq!(g.mul_idx(inv, x), g.identity);
        }
        for x in 0..n {
            for y in 0..n {
                let xy = g.mul_idx(x, y);
                for z in 0..n {
                    assert_eq!(g.mul_idx(xy, z), g.mul_idx(x, g.mul_idx(y, z)));
                }
            }
        }
    }

    #[test]
    fn atom_censuses() {
        let d8 = GroupModel::build_atom(Atom::D8).unwrap();
        assert_eq!(census(&d8), BTreeMap::from([(1, 1), (2, 5), (4, 2)]));
        let q8 = GroupModel::build_atom(Atom::Q8).unwrap();
        assert_eq!(census(&q8), BTreeMap::from([(1, 1), (2, 1), (4, 6)]));
        let he3 = GroupModel::build_atom(Atom::Heisenberg(3)).unwrap();
        assert_eq!(census(&he3), BTreeMap::from([(1, 1), (3, 26)]));
        let m125 = GroupModel::build_atom(Atom::Modular(5, 3)).unwrap();
        assert_eq!(census(&m125), BTreeMap::from([(1, 1), (5, 24), (25, 100)]));
        assert_eq!(m125.order(), 125);
    }

    #[test]
    fn axioms_hold_for_small_models() {
        for g in [
            GroupModel::build_atom(Atom::Cyclic(1)).unwrap(),
            GroupModel::build_atom(Atom::Cyclic(12)).unwrap(),
            GroupModel::build_atom(Atom::D8).unwrap(),
            GroupModel::build_atom(Atom::Q8).unwrap(),
            GroupModel::build_atom(Atom::Heisenberg(3)).unwrap(),
            GroupModel::build_atom(Atom::Modular(3, 3)).unwrap(),
            GroupModel::build_atom(Atom::Modular(2, 4)).unwrap(),
        ] {
            exhaustive_axioms(&g);
        }
        let a = GroupModel::build_atom(Atom::D8).unwrap();
        let b = GroupModel::build_atom(Atom::D8).unwrap();
        let za = a.element(4).unwrap();
        let zb = b.element(4).unwrap();
        let g = GroupModel::central_product(a, za, b, zb).unwrap();
        exhaustive_axioms(&g);
        let prod = GroupModel::direct_product(vec![
            GroupModel::build_atom(Atom::D8).unwrap(),
            GroupModel::build_atom(Atom::Cyclic(2)).unwrap(),
        ])
        .unwrap();
        exhaustive_axioms(&prod);
    }

    #[test]
    fn central_product_d8_d8() {
        let a = GroupModel::build_atom(Atom::D8).unwrap();
        let b = GroupModel::build_atom(Atom::D8).unwrap();
        let za = a.central_element_of_order(2).unwrap();
        let zb = b.central_element_of_order(2).unwrap();
        assert_eq!(za.index(), 4); // r^2
        let g = GroupModel::central_product(a, za, b, zb).unwrap();
        assert_eq!(g.order(), 32);
        assert_eq!(census(&g), BTreeMap::from([(1, 1), (2, 19), (4, 12)]));
        assert_eq!(g.center().len(), 2);
    }

    #[test]
    fn central_product_identifies_same_image() {
        // the images of z_a and z_b must coincide in the quotient
        let a = GroupModel::build_atom(Atom::D8).unwrap();
        let b = GroupModel::build_atom(Atom::Cyclic(4)).unwrap();
        let za = a.central_element_of_order(2).unwrap();
        let zb = b.element(2).unwrap();
        let (ia, ib) = (za.index(), zb.index());
        let g = GroupModel::central_product(a, za, b, zb).unwrap();
        assert_eq!(g.order(), 16);
        let (left, right) = match &g.structure {
            Structure::Central { left, right, coset_of, .. } => (
                coset_of[(ia * right.order + right.identity) as usize],
                coset_of[(left.identity * right.order + ib) as usize],
            ),
            _ => unreachable!(),
        };
        assert_eq!(left, right);
    }

    #[test]
    fn d8_c4_and_q8_c4_share_a_census() {
        let build = |atom: Atom| {
            let a = GroupModel::build_atom(atom).unwrap();
            let b = GroupModel::build_atom(Atom::Cyclic(4)).unwrap();
            let za = a.central_element_of_order(2).unwrap();
            let zb = b.element(2).unwrap();
            GroupModel::central_product(a, za, b, zb).unwrap()
        };
        let d = build(Atom::D8);
        let q = build(Atom::Q8);
        assert_eq!(d.order(), 16);
        assert_eq!(census(&d), census(&q));
        assert_eq!(census(&d), BTreeMap::from([(1, 1), (2, 7), (4, 8)]));
        assert_eq!(d.center().len(), 4); // almost extraspecial: Z = C_4
    }

    #[test]
    fn central_product_rejects_bad_designations() {
        let a = GroupModel::build_atom(Atom::D8).unwrap();
        let b = GroupModel::build_atom(Atom::Cyclic(4)).unwrap();
        let r = a.element(2).unwrap(); // rotation r is not central
        let zb = b.element(2).unwrap();
        assert!(matches!(
            GroupModel::central_product(a, r, b, zb),
            Err(GroupError::NotCentral { .. })
        ));

        let a = GroupModel::build_atom(Atom::D8).unwrap();
        let b = GroupModel::build_atom(Atom::Cyclic(4)).unwrap();
        let za = a.element(4).unwrap();
        let y = b.element(1).unwrap(); // order 4 vs order 2
        assert!(matches!(
            GroupModel::central_product(a, za, b, y),
            Err(GroupError::CentralOrderMismatch { left: 2, right: 4 })
        ));
    }

    #[test]
    fn element_orders_and_foreign_elements() {
        let he3 = GroupModel::build_atom(Atom::Heisenberg(3)).unwrap();
        assert_eq!(he3.element_order(he3.identity()).unwrap(), 1);
        let x = he3.element(9).unwrap(); // (1,0,0)
        assert_eq!(he3.element_order(x).unwrap(), 3);

        let m125 = GroupModel::build_atom(Atom::Modular(5, 3)).unwrap();
        let x = m125.element(5).unwrap(); // (1,0)
        assert_eq!(m125.element_order(x).unwrap(), 25);

        let other = GroupModel::build_atom(Atom::Heisenberg(3)).unwrap();
        assert!(matches!(
            he3.element_order(other.identity()),
            Err(GroupError::ForeignElement { .. })
        ));
    }

    #[test]
    fn modular_presentation_relations() {
        // x = (1,0); the presentation's y is the inverse of (0,1) under this
        // multiplication rule.
        for (p, n) in [(3u64, 3u32), (5, 3), (3, 4), (2, 4)] {
            let g = GroupModel::build_atom(Atom::Modular(p, n)).unwrap();
            let x = g.element(p).unwrap();
            let y = g.inverse(g.element(1).unwrap()).unwrap();
            let r = p.pow(n - 2) + 1;
            assert_eq!(g.element_order(x).unwrap(), p.pow(n - 1));
            assert_eq!(g.element_order(y).unwrap(), p);
            let conj = g
                .multiply(g.multiply(g.inverse(y).unwrap(), x).unwrap(), y)
                .unwrap();
            assert_eq!(conj, g.power(x, r).unwrap());
        }
    }

    #[test]
    fn centers_and_derived_subgroups() {
        let d8 = GroupModel::build_atom(Atom::D8).unwrap();
        assert_eq!(d8.center().len(), 2);
        assert_eq!(d8.derived_subgroup(1000).unwrap().len(), 2);

        let he3 = GroupModel::build_atom(Atom::Heisenberg(3)).unwrap();
        assert_eq!(he3.center().len(), 3);
        assert_eq!(he3.derived_subgroup(1000).unwrap().len(), 3);

        let c4 = GroupModel::build_atom(Atom::Cyclic(4)).unwrap();
        assert_eq!(c4.derived_subgroup(1000).unwrap().len(), 1);
        assert!(matches!(
            c4.derived_subgroup(2),
            Err(GroupError::BudgetExceeded { .. })
        ));

        // derived subgroup sits inside the center for extraspecial models
        let derived = d8.derived_subgroup(1000).unwrap();
        let center = d8.center();
        assert!(derived.iter().all(|x| center.contains(x)));
    }

    #[test]
    fn direct_product_packs_and_counts() {
        let d8 = GroupModel::build_atom(Atom::D8).unwrap();
        let c2 = GroupModel::build_atom(Atom::Cyclic(2)).unwrap();
        let g = GroupModel::direct_product(vec![d8, c2]).unwrap();
        assert_eq!(g.order(), 16);
        let n2 = (0..16).filter(|&i| g.order_of_idx(i) == 2).count();
        assert_eq!(n2, 11);

        let single = GroupModel::direct_product(vec![GroupModel::build_atom(Atom::Q8).unwrap()]).unwrap();
        assert_eq!(single.order(), 8);
        assert_eq!(single.label(), "Q8");

        let c3 = || GroupModel::build_atom(Atom::Cyclic(3)).unwrap();
        let ea = GroupModel::direct_product(vec![c3(), c3()]).unwrap();
        let n3 = (0..9).filter(|&i| ea.order_of_idx(i) == 3).count();
        assert_eq!(n3, 8);

        assert!(matches!(
            GroupModel::direct_product(vec![]),
            Err(GroupError::EmptyProduct)
        ));
    }

    #[test]
    fn atom_parameter_validation() {
        assert!(GroupModel::build_atom(Atom::Heisenberg(4)).is_err());
        assert!(GroupModel::build_atom(Atom::Heisenberg(2)).is_err());
        assert!(GroupModel::build_atom(Atom::Modular(6, 3)).is_err());
        assert!(GroupModel::build_atom(Atom::Modular(3, 2)).is_err());
        assert!(GroupModel::build_atom(Atom::Modular(2, 3)).is_err());
        assert!(GroupModel::build_atom(Atom::Cyclic(0)).is_err());
    }

    #[test]
    fn generators_generate() {
        for g in [
            GroupModel::build_atom(Atom::D8).unwrap(),
            GroupModel::build_atom(Atom::Q8).unwrap(),
            GroupModel::build_atom(Atom::Heisenberg(3)).unwrap(),
            GroupModel::build_atom(Atom::Modular(3, 3)).unwrap(),
        ] {
            assert_eq!(g.closure_idx(&g.generators).len() as u64, g.order());
        }
    }
}
