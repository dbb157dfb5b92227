//! Finite groups given by multiplication tables, permutations of the
//! underlying set, the left and right regular embeddings, and the search for
//! regular subgroups of `Perm(G)` normalized by `λ(G)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order accepted by [`enumerate_regular_subgroups`].
pub const ENUMERATION_BUDGET: usize = 12;

/// A finite group as a multiplication table on `0..order`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    identity: usize,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupDoc {
    pub order: usize,
    pub identity: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates the table: Latin square, two-sided identity, associativity
    /// (exhaustively), and label count.
    pub fn new(
        table: Vec<Vec<usize>>,
        identity: usize,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let n = table.len();
        let bad = |msg: String| Err(Error::InvalidGroup(msg));
        if n == 0 {
            return bad("empty table".into());
        }
        if identity >= n {
            return bad(format!("identity {identity} out of range"));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return bad(format!("row {i} has length {}", row.len()));
            }
            let mut seen = vec![false; n];
            for &v in row {
                if v >= n || seen[v] {
                    return bad(format!("row {i} is not a permutation of 0..{n}"));
                }
                seen[v] = true;
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for row in &table {
                if seen[row[j]] {
                    return bad(format!("column {j} repeats an entry"));
                }
                seen[row[j]] = true;
            }
        }
        for x in 0..n {
            if table[identity][x] != x || table[x][identity] != x {
                return bad(format!(
                    "{identity} is not a two-sided identity (fails at {x})"
                ));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return bad(format!("associativity fails at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return bad(format!("{} labels for {n} elements", l.len()));
            }
        }
        let inverses = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == identity).unwrap())
            .collect();
        Ok(FiniteGroup {
            order: n,
            identity,
            table,
            inverses,
            labels,
        })
    }

    /// Builds a group from a closed operation on `0..n` with identity 0.
    pub fn from_fn(
        n: usize,
        op: impl Fn(usize, usize) -> usize,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let table = (0..n).map(|a| (0..n).map(|b| op(a, b)).collect()).collect();
        FiniteGroup::new(table, 0, labels)
    }

    pub fn from_doc(doc: GroupDoc) -> Result<Self> {
        if doc.table.len() != doc.order {
            return Err(Error::InvalidGroup(format!(
                "order {} but table has {} rows",
                doc.order,
                doc.table.len()
            )));
        }
        FiniteGroup::new(doc.table, doc.identity, doc.labels)
    }

    pub fn to_doc(&self) -> GroupDoc {
        GroupDoc {
            order: self.order,
            identity: self.identity,
            table: self.table.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn trivial() -> Self {
        FiniteGroup::from_fn(1, |_, _| 0, Some(vec!["e".into()])).unwrap()
    }

    pub fn cyclic(n: usize) -> Self {
        let labels = (0..n).map(|k| format!("c{k}")).collect();
        FiniteGroup::from_fn(n, |a, b| (a + b) % n, Some(labels)).unwrap()
    }

    /// Dihedral group of order `2m`; element `k + m·s` is `r^k f^s`.
    pub fn dihedral(m: usize) -> Self {
        assert!(m >= 1);
        let op = |a: usize, b: usize| {
            let (k1, s1) = (a % m, a / m);
            let (k2, s2) = (b % m, b / m);
            // f r^k = r^{-k} f
            let k = if s1 == 0 { k1 + k2 } else { k1 + m - k2 } % m;
            k + m * ((s1 + s2) % 2)
        };
        let labels = (0..2 * m)
            .map(|a| {
                let (k, s) = (a % m, a / m);
                match (k, s) {
                    (0, 0) => "e".to_string(),
                    (k, 0) => format!("r{k}"),
                    (0, _) => "f".to_string(),
                    (k, _) => format!("r{k}f"),
                }
            })
            .collect();
        FiniteGroup::from_fn(2 * m, op, Some(labels)).unwrap()
    }

    /// The symmetric group on three letters (as the dihedral group of order 6).
    pub fn symmetric3() -> Self {
        FiniteGroup::dihedral(3)
    }

    /// Quaternion group of order 8; element `2u + s` is `(-1)^s · q_u`
    /// with `q = (1, i, j, k)`.
    pub fn quaternion() -> Self {
        // unit products q_a q_b = sign · q_c
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (1, 0), (2, 0), (3, 0)],
            [(1, 0), (0, 1), (3, 0), (2, 1)],
            [(2, 0), (3, 1), (0, 1), (1, 0)],
            [(3, 0), (2, 0), (1, 1), (0, 1)],
        ];
        let op = |a: usize, b: usize| {
            let (ua, sa) = (a / 2, a % 2);
            let (ub, sb) = (b / 2, b % 2);
            let (uc, sc) = UNIT[ua][ub];
            2 * uc + (sa + sb + sc) % 2
        };
        let names = ["1", "i", "j", "k"];
        let labels = (0..8)
            .map(|a| format!("{}{}", if a % 2 == 1 { "-" } else { "" }, names[a / 2]))
            .collect();
        FiniteGroup::from_fn(8, op, Some(labels)).unwrap()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        match &self.labels {
            Some(l) => l.iter().position(|x| x == label),
            None => label.parse().ok().filter(|&g| g < self.order),
        }
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// The same group with element `g` renamed to `relabel[g]`.
    pub fn relabeled(&self, relabel: &Permutation) -> Result<Self> {
        if relabel.degree() != self.order {
            return Err(Error::DimensionMismatch {
                expected: self.order,
                found: relabel.degree(),
            });
        }
        let back = relabel.inverse();
        let table = (0..self.order)
            .map(|a| {
                (0..self.order)
                    .map(|b| relabel.apply(self.table[back.apply(a)][back.apply(b)]))
                    .collect()
            })
            .collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| (0..self.order).map(|a| l[back.apply(a)].clone()).collect());
        FiniteGroup::new(table, relabel.apply(self.identity), labels)
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("identity", &self.identity)
            .finish_non_exhaustive()
    }
}

/// A bijection of `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn has_fixed_point(&self) -> bool {
        self.images.iter().enumerate().any(|(x, &y)| x == y)
    }

    /// `self ∘ other ∘ self⁻¹`.
    pub fn conjugate(&self, other: &Permutation) -> Permutation {
        self.compose(other).compose(&self.inverse())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

/// A regular subgroup `N ≤ Perm(G)`, stored so that `element(g)` is the
/// unique member sending `1_G` to `g`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RegularSubgroup {
    identity: usize,
    elements: Vec<Permutation>,
    closure_table: Vec<Vec<usize>>,
}

impl RegularSubgroup {
    /// Validates regularity and closure. `perms` may be in any order.
    pub fn from_permutations(perms: Vec<Permutation>, identity: usize) -> Result<Self> {
        let n = perms.len();
        let bad = |m: String| Err(Error::NotRegular(m));
        if identity >= n {
            return bad(format!("identity point {identity} out of range"));
        }
        let mut slots: Vec<Option<Permutation>> = vec![None; n];
        for p in perms {
            if p.degree() != n {
                return bad(format!(
                    "permutation of degree {} in a set of size {n}",
                    p.degree()
                ));
            }
            let at = p.apply(identity);
            if slots[at].is_some() {
                return bad(format!("two elements send the identity to {at}"));
            }
            if !p.is_identity() && p.has_fixed_point() {
                return bad(format!("{p:?} has a fixed point"));
            }
            slots[at] = Some(p);
        }
        let elements: Vec<Permutation> = slots.into_iter().map(Option::unwrap).collect();
        if !elements[identity].is_identity() {
            return bad("the element fixing the identity is not the identity".into());
        }
        let mut closure_table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let prod = elements[a].compose(&elements[b]);
                let k = prod.apply(identity);
                if prod != elements[k] {
                    return bad(format!("not closed: product of elements {a} and {b}"));
                }
                closure_table[a][b] = k;
            }
        }
        Ok(RegularSubgroup {
            identity,
            elements,
            closure_table,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity_point(&self) -> usize {
        self.identity
    }

    /// The member sending `1_G` to `g`.
    pub fn element(&self, g: usize) -> &Permutation {
        &self.elements[g]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    /// Index (in the sense of [`Self::element`]) of the composite `element(a) ∘ element(b)`.
    pub fn product(&self, a: usize, b: usize) -> usize {
        self.closure_table[a][b]
    }

    pub fn closure_table(&self) -> &[Vec<usize>] {
        &self.closure_table
    }

    pub fn inverse_index(&self, a: usize) -> usize {
        self.elements[a].inverse().apply(self.identity)
    }

    /// Index of `p` if it is a member.
    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        if p.degree() != self.order() {
            return None;
        }
        let k = p.apply(self.identity);
        (self.elements[k] == *p).then_some(k)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.closure_table[a][b] == self.closure_table[b][a]))
    }

    /// Images of all elements concatenated in index order.
    pub fn flattened(&self) -> Vec<usize> {
        self.elements
            .iter()
            .flat_map(|p| p.images().iter().copied())
            .collect()
    }

    pub fn image_vectors(&self) -> Vec<Vec<usize>> {
        self.elements.iter().map(|p| p.images().to_vec()).collect()
    }

    /// Same as set equality, since the storage order is canonical.
    pub fn same_set(&self, other: &RegularSubgroup) -> bool {
        self.elements == other.elements
    }
}

impl fmt::Debug for RegularSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.elements).finish()
    }
}

/// `λ(g)` as a permutation: `h ↦ gh`.
pub fn lambda(g_group: &FiniteGroup, g: usize) -> Permutation {
    Permutation {
        images: g_group.table[g].clone(),
    }
}

/// `ρ(g)` as a permutation: `h ↦ h g⁻¹`.
pub fn rho(g_group: &FiniteGroup, g: usize) -> Permutation {
    let gi = g_group.inv(g);
    Permutation {
        images: (0..g_group.order).map(|h| g_group.mul(h, gi)).collect(),
    }
}

pub fn left_regular(g: &FiniteGroup) -> RegularSubgroup {
    let perms = g.elements().map(|x| lambda(g, x)).collect();
    RegularSubgroup::from_permutations(perms, g.identity).expect("λ(G) is regular")
}

pub fn right_regular(g: &FiniteGroup) -> RegularSubgroup {
    let perms = g.elements().map(|x| rho(g, x)).collect();
    RegularSubgroup::from_permutations(perms, g.identity).expect("ρ(G) is regular")
}

/// `λ(g) ∘ η ∘ λ(g)⁻¹`.
pub fn conj_action(group: &FiniteGroup, g: usize, eta: &Permutation) -> Permutation {
    lambda(group, g).conjugate(eta)
}

/// Does `λ(G)` normalize `n`?
pub fn normalizes(n: &RegularSubgroup, group: &FiniteGroup) -> bool {
    if n.order() != group.order() || n.identity_point() != group.identity() {
        return false;
    }
    group.elements().all(|g| {
        n.elements()
            .iter()
            .all(|eta| n.index_of(&conj_action(group, g, eta)).is_some())
    })
}

/// Every regular subgroup of `Perm(G)` normalized by `λ(G)`, sorted by
/// flattened images.
///
/// Backtracks over `g ↦ η_g`: the smallest point not yet reached from the
/// identity gets a candidate `η_g` (semiregular, `η_g(1) = g`), and the
/// assigned set is closed under composition and under conjugation by `λ(G)`.
/// A closure that produces two elements over the same point, or a
/// non-identity element with a fixed point, kills the branch.
pub fn enumerate_regular_subgroups(group: &FiniteGroup) -> Result<Vec<RegularSubgroup>> {
    let n = group.order();
    if n > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            order: n,
            budget: ENUMERATION_BUDGET,
        });
    }
    let lambdas: Vec<Permutation> = group.elements().map(|g| lambda(group, g)).collect();
    let lambda_invs: Vec<Permutation> = lambdas.iter().map(Permutation::inverse).collect();
    let mut start: Vec<Option<Permutation>> = vec![None; n];
    start[group.identity()] = Some(Permutation::identity(n));
    let search = Search {
        n,
        identity: group.identity(),
        lambdas,
        lambda_invs,
    };
    let mut found = BTreeSet::new();
    search.extend(&start, &mut found);
    found
        .into_iter()
        .map(|flat: Vec<usize>| {
            let perms = flat
                .chunks(n)
                .map(|c| Permutation { images: c.to_vec() })
                .collect();
            RegularSubgroup::from_permutations(perms, group.identity())
        })
        .collect()
}

struct Search {
    n: usize,
    identity: usize,
    lambdas: Vec<Permutation>,
    lambda_invs: Vec<Permutation>,
}

impl Search {
    fn extend(&self, assigned: &[Option<Permutation>], found: &mut BTreeSet<Vec<usize>>) {
        let Some(target) = assigned.iter().position(Option::is_none) else {
            found.insert(
                assigned
                    .iter()
                    .flat_map(|p| p.as_ref().unwrap().images().iter().copied())
                    .collect(),
            );
            return;
        };
        let covered: Vec<bool> = assigned.iter().map(Option::is_some).collect();
        let mut partial = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        partial[self.identity] = target;
        used[target] = true;
        let mut candidates = Vec::new();
        self.semiregular(
            &mut partial,
            &mut used,
            self.identity,
            self.identity,
            1,
            None,
            &covered,
            &mut candidates,
        );
        for cand in candidates {
            if let Some(next) = self.close(assigned, cand) {
                self.extend(&next, found);
            }
        }
    }

    /// Enumerates fixed-point-free permutations with all cycles of equal
    /// length, extending `partial` one cycle at a time. Points of the current
    /// subgroup must map outside it (the new element lies in a new coset).
    #[allow(clippy::too_many_arguments)]
    fn semiregular(
        &self,
        partial: &mut Vec<usize>,
        used: &mut Vec<bool>,
        cycle_start: usize,
        current: usize,
        len: usize,
        cycle_len: Option<usize>,
        covered: &[bool],
        out: &mut Vec<Permutation>,
    ) {
        let next = partial[current];
        if next == cycle_start {
            if cycle_len.is_some_and(|l| l != len) {
                return;
            }
            let cycle_len = cycle_len.or(Some(len));
            // open a new cycle at the smallest unmapped point
            match (0..self.n).find(|&x| partial[x] == usize::MAX) {
                None => out.push(Permutation {
                    images: partial.clone(),
                }),
                Some(start) => {
                    for y in 0..self.n {
                        if used[y] || y == start || (covered[start] && covered[y]) {
                            continue;
                        }
                        partial[start] = y;
                        used[y] = true;
                        self.semiregular(partial, used, start, start, 1, cycle_len, covered, out);
                        used[y] = false;
                    }
                    partial[start] = usize::MAX;
                }
            }
            return;
        }
        // `next` is a fresh point inside the current cycle
        if cycle_len.is_some_and(|l| len >= l) {
            return;
        }
        let close_ok = !used[cycle_start] && !(covered[next] && covered[cycle_start]);
        if close_ok && cycle_len.is_none_or(|l| len + 1 == l) {
            partial[next] = cycle_start;
            used[cycle_start] = true;
            self.semiregular(
                partial,
                used,
                cycle_start,
                next,
                len + 1,
                cycle_len,
                covered,
                out,
            );
            used[cycle_start] = false;
        }
        if cycle_len.is_none_or(|l| len + 1 < l) {
            for y in 0..self.n {
                if used[y] || y == next || y == cycle_start || (covered[next] && covered[y]) {
                    continue;
                }
                partial[next] = y;
                used[y] = true;
                self.semiregular(
                    partial,
                    used,
                    cycle_start,
                    next,
                    len + 1,
                    cycle_len,
                    covered,
                    out,
                );
                used[y] = false;
            }
        }
        partial[next] = usize::MAX;
    }

    /// Closes `assigned ∪ {p}` under composition and `λ(G)`-conjugation.
    fn close(
        &self,
        assigned: &[Option<Permutation>],
        p: Permutation,
    ) -> Option<Vec<Option<Permutation>>> {
        let mut slots = assigned.to_vec();
        let mut members: Vec<usize> = (0..self.n).filter(|&k| slots[k].is_some()).collect();
        let mut queue = vec![p];
        while let Some(q) = queue.pop() {
            let at = q.apply(self.identity);
            match &slots[at] {
                Some(existing) => {
                    if *existing != q {
                        return None;
                    }
                    continue;
                }
                None => {
                    if q.has_fixed_point() {
                        return None;
                    }
                }
            }
            for &m in &members {
                let other = slots[m].as_ref().unwrap();
                queue.push(q.compose(other));
                queue.push(other.compose(&q));
            }
            queue.push(q.compose(&q));
            for (l, li) in self.lambdas.iter().zip(&self.lambda_invs) {
                queue.push(l.compose(&q).compose(li));
            }
            slots[at] = Some(q);
            members.push(at);
        }
        Some(slots)
    }
}
