//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;

use hopf_galois::cli::{load_fixture, Fixture};
use hopf_galois::exact::{solve_right, Matrix, Scalar};
use hopf_galois::galois::{AlgElement, GaloisContext};
use hopf_galois::groups::FiniteGroup;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> Fixture {
    load_fixture(&fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {}", e.message))
}

pub fn field() -> GaloisContext {
    fixture("s3_field").ctx
}

pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let m = b.order();
    FiniteGroup::from_fn(
        a.order() * m,
        |x, y| a.mul(x / m, y / m) * m + b.mul(x % m, y % m),
        None,
    )
    .unwrap()
}

/// One representative of every isomorphism class of groups of order `n`,
/// each with identity 0.
pub fn groups_of_order(n: usize) -> Vec<FiniteGroup> {
    let c2 = FiniteGroup::cyclic(2);
    match n {
        1 => vec![FiniteGroup::trivial()],
        2 | 3 | 5 | 7 => vec![FiniteGroup::cyclic(n)],
        4 => vec![FiniteGroup::cyclic(4), direct_product(&c2, &c2)],
        6 => vec![FiniteGroup::cyclic(6), FiniteGroup::symmetric3()],
        8 => vec![
            FiniteGroup::cyclic(8),
            direct_product(&FiniteGroup::cyclic(4), &c2),
            direct_product(&direct_product(&c2, &c2), &c2),
            FiniteGroup::dihedral(4),
            FiniteGroup::quaternion(),
        ],
        _ => panic!("no group list for order {n}"),
    }
}

fn permutations_fixing_zero(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            cur.push(v);
            rec(rest, cur, out);
            cur.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut (1..n).collect(), &mut vec![0], &mut out);
    out
}

/// Every group table on `{0, …, n-1}` with identity 0: transport each
/// isomorphism type along every bijection fixing 0.
pub fn all_tables(n: usize) -> HashSet<Vec<Vec<usize>>> {
    let mut tables = HashSet::new();
    let perms = permutations_fixing_zero(n);
    for base in groups_of_order(n) {
        assert_eq!(base.identity(), 0);
        for phi in &perms {
            let mut inv = vec![0; n];
            for (i, &p) in phi.iter().enumerate() {
                inv[p] = i;
            }
            let t: Vec<Vec<usize>> = (0..n)
                .map(|a| (0..n).map(|b| phi[base.mul(inv[a], inv[b])]).collect())
                .collect();
            tables.insert(t);
        }
    }
    tables
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x] = i;
    }
    out
}

/// Regular subgroups of `Perm(G)` normalized by `λ(G)`, as sorted lists of
/// image vectors, found without the crate's enumeration code.
pub fn brute_force_census(g: &FiniteGroup) -> BTreeSet<Vec<Vec<usize>>> {
    let n = g.order();
    assert_eq!(g.identity(), 0);
    let lambdas: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).map(|b| g.mul(a, b)).collect())
        .collect();
    let mut out = BTreeSet::new();
    for t in all_tables(n) {
        // left translations b ↦ t(a, b); regular by construction
        let members: Vec<Vec<usize>> = t.clone();
        let set: HashSet<&Vec<usize>> = members.iter().collect();
        let normalized = lambdas.iter().all(|l| {
            let li = inverse(l);
            members
                .iter()
                .all(|eta| set.contains(&compose(&compose(l, eta), &li)))
        });
        if normalized {
            let mut sorted = members.clone();
            sorted.sort();
            out.insert(sorted);
        }
    }
    out
}

/// `K`-rank of `{σ(x)}`.
pub fn orbit_rank(ctx: &GaloisContext, x: &AlgElement) -> usize {
    let rows = ctx
        .group()
        .elements()
        .map(|s| ctx.act(s, x).into_coords())
        .collect();
    Matrix::from_rows(rows).unwrap().rank()
}

/// `x̂` from all `n²` equations `Tr(σ(x̂)·τ(x)) = δ_{σ,τ}`; `None` unless the
/// system has exactly one solution.
pub fn dual_by_full_system(ctx: &GaloisContext, x: &AlgElement) -> Option<AlgElement> {
    let n = ctx.dim();
    let g = ctx.group();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for s in g.elements() {
        let m = ctx.automorphism(s);
        for t in g.elements() {
            let tx = ctx.act(t, x);
            // Tr(M_σ x̂ · τ(x)) = Σ_k (M_σ x̂)_k Tr(e_k τ(x))
            let w: Vec<Scalar> = (0..n)
                .map(|k| ctx.trace(&ctx.mul(&ctx.basis_element(k), &tx)))
                .collect();
            let row: Vec<Scalar> = (0..n)
                .map(|j| (0..n).map(|k| &w[k] * m.get(k, j)).sum())
                .collect();
            rows.push(row);
            rhs.push(if s == t {
                Scalar::one()
            } else {
                Scalar::zero()
            });
        }
    }
    let m = Matrix::from_rows(rows).unwrap();
    if m.rank() != n {
        return None;
    }
    solve_right(&m, &rhs).unwrap().map(AlgElement::new)
}

/// The first element with coordinates in `{-1, 0, 1}` whose orbit is a basis.
pub fn small_generator(ctx: &GaloisContext) -> AlgElement {
    let n = ctx.dim();
    for code in 1..3usize.pow(n as u32) {
        let mut c = code;
        let coords: Vec<i64> = (0..n)
            .map(|_| {
                let d = (c % 3) as i64 - 1;
                c /= 3;
                d
            })
            .collect();
        let x = AlgElement::from_i64(&coords);
        if orbit_rank(ctx, &x) == n {
            return x;
        }
    }
    panic!("no small normal basis generator");
}

/// The contexts every lemma-level test runs over.
pub fn contexts() -> Vec<(&'static str, GaloisContext)> {
    vec![
        ("trivial", GaloisContext::split(&FiniteGroup::trivial())),
        ("c2", GaloisContext::split(&FiniteGroup::cyclic(2))),
        ("s3 split", GaloisContext::split(&FiniteGroup::symmetric3())),
        ("d4 split", GaloisContext::split(&FiniteGroup::dihedral(4))),
        ("q8 split", GaloisContext::split(&FiniteGroup::quaternion())),
        ("s3 field", field()),
    ]
}

/// Fixtures carrying a lattice on which a generator exists within box 2.
pub const FREE_FIXTURES: &[&str] = &[
    "trivial",
    "c2_split",
    "s3_split",
    "s3_split_scaled",
    "s3_split_orbit",
    "d4_split",
    "d4_split_orbit",
    "q8_split",
    "q8_split_orbit",
    "s3_field_orbit",
];
