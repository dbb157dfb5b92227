//! Normal basis generators: the transition matrix `T_N(x)`, its determinant
//! over `L`, and the comparison of `K[G]`- and `H_λ`-generation.

use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::galois::{AlgElement, GaloisContext, Mode};
use crate::groups::{left_regular, right_regular, RegularSubgroup};

/// Minimal commutative ring interface for [`berkowitz_det`].
pub trait CommRing {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
}

/// `Q` as a [`CommRing`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl CommRing for Rationals {
    type Elem = Scalar;
    fn zero(&self) -> Scalar {
        Scalar::zero()
    }
    fn one(&self) -> Scalar {
        Scalar::one()
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a + b
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }
    fn neg(&self, a: &Scalar) -> Scalar {
        -a
    }
}

impl CommRing for GaloisContext {
    type Elem = AlgElement;
    fn zero(&self) -> AlgElement {
        AlgElement::zero(self.dim())
    }
    fn one(&self) -> AlgElement {
        GaloisContext::one(self).clone()
    }
    fn add(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        a + b
    }
    fn mul(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        GaloisContext::mul(self, a, b)
    }
    fn neg(&self, a: &AlgElement) -> AlgElement {
        -a
    }
}

/// Determinant of a square matrix over a commutative ring, without division.
///
/// Berkowitz: the characteristic polynomial of the leading `(k+1)×(k+1)` block
/// is a Toeplitz matrix times that of the leading `k×k` block.
pub fn berkowitz_det<R: CommRing>(ring: &R, m: &[Vec<R::Elem>]) -> R::Elem {
    let n = m.len();
    // coefficients of det(tI - A_k), highest degree first
    let mut poly = vec![ring.one()];
    for k in 0..n {
        // t = (1, -a, -r c, -r A c, ..., -r A^{k-1} c)
        let mut t = Vec::with_capacity(k + 2);
        t.push(ring.one());
        t.push(ring.neg(&m[k][k]));
        let mut v: Vec<R::Elem> = (0..k).map(|i| m[i][k].clone()).collect();
        for step in 0..k {
            let rv = (0..k).fold(ring.zero(), |acc, j| {
                ring.add(&acc, &ring.mul(&m[k][j], &v[j]))
            });
            t.push(ring.neg(&rv));
            if step + 1 < k {
                v = (0..k)
                    .map(|i| {
                        (0..k).fold(ring.zero(), |acc, j| {
                            ring.add(&acc, &ring.mul(&m[i][j], &v[j]))
                        })
                    })
                    .collect();
            }
        }
        let next: Vec<R::Elem> = (0..k + 2)
            .map(|i| {
                (0..=i.min(k)).fold(ring.zero(), |acc, j| {
                    ring.add(&acc, &ring.mul(&t[i - j], &poly[j]))
                })
            })
            .collect();
        poly = next;
    }
    let c = poly.pop().expect("nonempty polynomial");
    if n % 2 == 1 {
        ring.neg(&c)
    } else {
        c
    }
}

/// `T_N(x)`: rows indexed by members of `N` (in subgroup index order),
/// columns by `g ∈ G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    entries: Vec<Vec<AlgElement>>,
}

impl TransitionMatrix {
    pub fn entries(&self) -> &[Vec<AlgElement>] {
        &self.entries
    }

    pub fn entry(&self, eta: usize, g: usize) -> &AlgElement {
        &self.entries[eta][g]
    }

    pub fn transpose(&self) -> TransitionMatrix {
        let n = self.entries.len();
        TransitionMatrix {
            entries: (0..n)
                .map(|j| (0..n).map(|i| self.entries[i][j].clone()).collect())
                .collect(),
        }
    }
}

/// Entry `(η, g)` is `η(g)[x]`.
pub fn transition_matrix(
    ctx: &GaloisContext,
    n: &RegularSubgroup,
    x: &AlgElement,
) -> TransitionMatrix {
    let entries = n
        .elements()
        .iter()
        .map(|eta| {
            ctx.group()
                .elements()
                .map(|g| ctx.act(eta.apply(g), x))
                .collect()
        })
        .collect();
    TransitionMatrix { entries }
}

pub fn det_over_l(ctx: &GaloisContext, m: &TransitionMatrix) -> AlgElement {
    berkowitz_det(ctx, &m.entries)
}

/// Is the determinant a unit of `L`? In split mode that means every
/// idempotent component is nonzero, in field mode just nonzero.
pub fn is_nonsingular_over_l(ctx: &GaloisContext, m: &TransitionMatrix) -> bool {
    ctx.is_unit(&det_over_l(ctx, m))
}

/// Does `x` generate `L` over `H_N`?
pub fn is_generator(ctx: &GaloisContext, n: &RegularSubgroup, x: &AlgElement) -> bool {
    is_nonsingular_over_l(ctx, &transition_matrix(ctx, n, x))
}

/// Do the `λ(G)` and `ρ(G)` generator verdicts agree?
pub fn theorem_nbg_check(ctx: &GaloisContext, x: &AlgElement) -> bool {
    let verdicts = generator_verdicts(ctx, x);
    verdicts.0 == verdicts.1
}

/// `(λ-verdict, ρ-verdict)`.
pub fn generator_verdicts(ctx: &GaloisContext, x: &AlgElement) -> (bool, bool) {
    let g = ctx.group();
    (
        is_generator(ctx, &left_regular(g), x),
        is_generator(ctx, &right_regular(g), x),
    )
}

/// `f_x = Σ_g g(x) u_g ∈ GL = Map(G, L)`, as the family `g ↦ g(x)`.
pub fn gl_embed(ctx: &GaloisContext, x: &AlgElement) -> Vec<AlgElement> {
    ctx.group().elements().map(|g| ctx.act(g, x)).collect()
}

/// `η` acting on `GL` by permuting subscripts: `u_g ↦ u_{η(g)}`.
pub fn gl_permute(n: &RegularSubgroup, eta: usize, family: &[AlgElement]) -> Vec<AlgElement> {
    let p = n.element(eta);
    let mut out = family.to_vec();
    for (g, v) in family.iter().enumerate() {
        out[p.apply(g)] = v.clone();
    }
    out
}

/// Reduced row echelon form over the field `L` (field mode only).
pub fn rref_over_field(
    ctx: &GaloisContext,
    rows: &[Vec<AlgElement>],
) -> Result<Vec<Vec<AlgElement>>> {
    if ctx.mode() != Mode::Field {
        return Err(Error::Precondition(
            "row reduction over L needs a field context".into(),
        ));
    }
    let mut a: Vec<Vec<AlgElement>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = ctx
            .inverse(&a[r][c])
            .ok_or_else(|| Error::Internal("nonzero field element without inverse".into()))?;
        a[r] = a[r].iter().map(|v| ctx.mul(v, &inv)).collect();
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (v, pv) in a[i].iter_mut().zip(&pivot_row) {
                    *v = &*v - &ctx.mul(&f, pv);
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    Ok(a)
}

/// Do the rows of `a` and `b` span the same `L`-subspace? Field mode only.
pub fn same_row_space(
    ctx: &GaloisContext,
    a: &TransitionMatrix,
    b: &TransitionMatrix,
) -> Result<bool> {
    Ok(rref_over_field(ctx, &a.entries)? == rref_over_field(ctx, &b.entries)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Matrix;
    use crate::groups::FiniteGroup;

    #[test]
    fn berkowitz_small_cases() {
        let q = Rationals;
        let s = |v: i64| Scalar::from(v);
        assert_eq!(berkowitz_det(&q, &[]), s(1));
        assert_eq!(berkowitz_det(&q, &[vec![s(7)]]), s(7));
        assert_eq!(
            berkowitz_det(&q, &[vec![s(1), s(2)], vec![s(3), s(4)]]),
            s(-2)
        );
        let m =
            Matrix::from_i64_rows(&[&[2, -1, 0, 3], &[1, 0, 4, 1], &[0, 5, -2, 2], &[3, 1, 1, 0]])
                .unwrap();
        assert_eq!(berkowitz_det(&q, &m.to_rows()), m.det().unwrap());
    }

    #[test]
    fn transition_matrix_examples() {
        let g = FiniteGroup::symmetric3();
        let ctx = GaloisContext::split(&g);
        let lam = left_regular(&g);
        let rho = right_regular(&g);
        let t = transition_matrix(&ctx, &lam, ctx.one());
        assert!(t.entries().iter().flatten().all(|e| e == ctx.one()));
        assert!(!is_nonsingular_over_l(&ctx, &t));

        let x = AlgElement::from_i64(&[1, 2, 0, -1, 3, 1]);
        let tr = transition_matrix(&ctx, &rho, &x);
        for s in g.elements() {
            let row = rho.index_of(&crate::groups::rho(&g, s)).unwrap();
            for h in g.elements() {
                assert_eq!(tr.entry(row, h), &ctx.act(g.mul(h, g.inv(s)), &x));
            }
        }

        let u1 = ctx.basis_element(g.identity());
        let tu = transition_matrix(&ctx, &lam, &u1);
        for (k, eta) in lam.elements().iter().enumerate() {
            for h in g.elements() {
                assert_eq!(tu.entry(k, h), &ctx.basis_element(eta.apply(h)));
            }
        }
        let d = det_over_l(&ctx, &tu);
        assert!(d.coords().iter().all(|c| c.abs().is_one()));
        assert!(is_generator(&ctx, &rho, &u1));
    }

    #[test]
    fn zero_and_trivial_group() {
        let ctx = GaloisContext::split(&FiniteGroup::symmetric3());
        assert!(!is_generator(
            &ctx,
            &left_regular(ctx.group()),
            &AlgElement::zero(6)
        ));
        assert!(theorem_nbg_check(&ctx, &AlgElement::zero(6)));
        let t = GaloisContext::split(&FiniteGroup::trivial());
        assert!(is_generator(
            &t,
            &left_regular(t.group()),
            &AlgElement::from_i64(&[3])
        ));
        assert!(!is_generator(
            &t,
            &left_regular(t.group()),
            &AlgElement::from_i64(&[0])
        ));
    }

    #[test]
    fn gl_embed_examples() {
        let g = FiniteGroup::symmetric3();
        let ctx = GaloisContext::split(&g);
        assert!(gl_embed(&ctx, ctx.one()).iter().all(|v| v == ctx.one()));
        let x = AlgElement::from_i64(&[1, 0, 2, 0, 0, 5]);
        let y = AlgElement::from_i64(&[0, 3, -1, 1, 0, 0]);
        let sum: Vec<AlgElement> = gl_embed(&ctx, &x)
            .iter()
            .zip(gl_embed(&ctx, &y))
            .map(|(a, b)| a + &b)
            .collect();
        assert_eq!(gl_embed(&ctx, &(&x + &y)), sum);
        let lam = left_regular(&g);
        for k in 0..6 {
            let moved = gl_permute(&lam, k, &gl_embed(&ctx, &x));
            let eta_inv = lam.element(k).inverse();
            for h in g.elements() {
                assert_eq!(moved[h], ctx.act(eta_inv.apply(h), &x));
            }
        }
    }
}
