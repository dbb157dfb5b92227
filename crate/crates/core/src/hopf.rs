//! The group algebra `K[G]` acting on `L`, the twisted group ring `L[N]`,
//! and the Greither–Pareigis Hopf algebra `H_N = L[N]^G` with its action on
//! `L`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Matrix, Scalar};
use crate::galois::{AlgElement, GaloisContext};
use crate::groups::{conj_action, left_regular, right_regular, FiniteGroup, RegularSubgroup};

/// An element `Σ z_σ σ` of `K[G]`, coefficients indexed by group element.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupAlgebraElement(Vec<Scalar>);

impl GroupAlgebraElement {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        GroupAlgebraElement(coeffs)
    }

    pub fn zero(n: usize) -> Self {
        GroupAlgebraElement(vec![Scalar::zero(); n])
    }

    /// The group element `g` itself.
    pub fn basis(n: usize, g: usize) -> Self {
        let mut c = vec![Scalar::zero(); n];
        c[g] = Scalar::one();
        GroupAlgebraElement(c)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        GroupAlgebraElement(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        GroupAlgebraElement(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Convolution product in `K[G]`.
    pub fn mul(&self, group: &FiniteGroup, other: &Self) -> Self {
        let mut out = vec![Scalar::zero(); group.order()];
        for (a, ca) in self.0.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in other.0.iter().enumerate() {
                if !cb.is_zero() {
                    out[group.mul(a, b)] += ca * cb;
                }
            }
        }
        GroupAlgebraElement(out)
    }

    /// `σ ↦ σ⁻¹`.
    pub fn antipode(&self, group: &FiniteGroup) -> Self {
        let mut out = vec![Scalar::zero(); group.order()];
        for (a, c) in self.0.iter().enumerate() {
            out[group.inv(a)] = c.clone();
        }
        GroupAlgebraElement(out)
    }

    /// `σ ↦ 1`.
    pub fn counit(&self) -> Scalar {
        self.0.iter().sum()
    }
}

impl fmt::Debug for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// `z(x) = Σ_σ z_σ σ(x)`.
pub fn kg_act(ctx: &GaloisContext, z: &GroupAlgebraElement, x: &AlgElement) -> AlgElement {
    let mut out = AlgElement::zero(ctx.dim());
    for (s, c) in z.0.iter().enumerate() {
        if !c.is_zero() {
            out.add_scaled(&ctx.act(s, x), c);
        }
    }
    out
}

/// An element `Σ_η c_η η` of `L[N]`; `coeffs[k]` is the coefficient of the
/// member of `N` sending `1_G` to `k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LNElement {
    coeffs: Vec<AlgElement>,
}

impl LNElement {
    pub fn new(coeffs: Vec<AlgElement>) -> Self {
        LNElement { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        LNElement {
            coeffs: vec![AlgElement::zero(n); n],
        }
    }

    /// The single term `y · η_k`.
    pub fn term(n: usize, y: AlgElement, k: usize) -> Self {
        let mut e = LNElement::zero(n);
        e.coeffs[k] = y;
        e
    }

    pub fn coeffs(&self) -> &[AlgElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &AlgElement {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(AlgElement::is_zero)
    }

    pub fn add(&self, other: &LNElement) -> LNElement {
        LNElement {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> LNElement {
        LNElement {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// K-coordinates, `N`-index major and L-basis index minor.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.coeffs
            .iter()
            .flat_map(|a| a.coords().iter().cloned())
            .collect()
    }

    pub fn unflatten(n: usize, flat: &[Scalar]) -> LNElement {
        LNElement {
            coeffs: flat
                .chunks(n)
                .map(|c| AlgElement::new(c.to_vec()))
                .collect(),
        }
    }
}

impl fmt::Debug for LNElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()))
            .finish()
    }
}

/// An element of `L[N]` that has been checked to be fixed by every twist.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HopfElement {
    value: LNElement,
    fixed_verified: bool,
}

impl HopfElement {
    pub fn value(&self) -> &LNElement {
        &self.value
    }

    pub fn fixed_verified(&self) -> bool {
        self.fixed_verified
    }

    /// Wraps an element without checking; [`HopfAlgebra::act`] will refuse it.
    pub fn unverified(value: LNElement) -> Self {
        HopfElement {
            value,
            fixed_verified: false,
        }
    }
}

impl fmt::Debug for HopfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.value, f)
    }
}

/// JSON form of an element of `L[N]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopfElementDoc {
    #[serde(rename = "N")]
    pub subgroup: String,
    pub coeffs: BTreeMap<String, Vec<Scalar>>,
}

/// `H_N = L[N]^G` for a regular subgroup `N` normalized by `λ(G)`.
#[derive(Clone)]
pub struct HopfAlgebra<'a> {
    ctx: &'a GaloisContext,
    subgroup: RegularSubgroup,
    name: String,
    /// `conj[g][k]`: index of `λ(g) η_k λ(g)⁻¹`.
    conj: Vec<Vec<usize>>,
    /// `η_k⁻¹(1_G)`, the Galois element through which `η_k` acts on `L`.
    act_point: Vec<usize>,
    basis: Vec<HopfElement>,
    pivots: Vec<usize>,
}

impl fmt::Debug for HopfAlgebra<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HopfAlgebra")
            .field("N", &self.name)
            .field("dim", &self.basis.len())
            .finish_non_exhaustive()
    }
}

impl<'a> HopfAlgebra<'a> {
    /// Builds `H_N`, including a K-basis extracted from orbit sums.
    pub fn new(
        ctx: &'a GaloisContext,
        subgroup: RegularSubgroup,
        name: impl Into<String>,
    ) -> Result<Self> {
        let group = ctx.group();
        let n = group.order();
        if subgroup.order() != n || subgroup.identity_point() != group.identity() {
            return Err(Error::Precondition(
                "N must be a regular subgroup of Perm(G)".into(),
            ));
        }
        let mut conj = vec![vec![0; n]; n];
        for g in group.elements() {
            for k in 0..n {
                let c = conj_action(group, g, subgroup.element(k));
                conj[g][k] = subgroup
                    .index_of(&c)
                    .ok_or_else(|| Error::Precondition("N is not normalized by λ(G)".into()))?;
            }
        }
        let act_point = (0..n).map(|k| subgroup.inverse_index(k)).collect();
        let mut h = HopfAlgebra {
            ctx,
            subgroup,
            name: name.into(),
            conj,
            act_point,
            basis: Vec::new(),
            pivots: Vec::new(),
        };
        h.extract_basis()?;
        Ok(h)
    }

    /// `H_λ`.
    pub fn lambda(ctx: &'a GaloisContext) -> Result<Self> {
        HopfAlgebra::new(ctx, left_regular(ctx.group()), "lambda")
    }

    /// `H_ρ`, which is `K[G]` under `ρ(g) ↦ g`.
    pub fn rho(ctx: &'a GaloisContext) -> Result<Self> {
        HopfAlgebra::new(ctx, right_regular(ctx.group()), "rho")
    }

    /// Orbit sums `T(e_k · η)` span `H_N`; the reduced echelon form of their
    /// flattened coordinates is taken as the basis.
    fn extract_basis(&mut self) -> Result<()> {
        let n = self.ctx.dim();
        let mut rows = Vec::with_capacity(n * n);
        for eta in 0..n {
            for k in 0..n {
                rows.push(
                    self.orbit_sum_raw(&self.ctx.basis_element(k), eta)
                        .flatten(),
                );
            }
        }
        let (r, pivots) = Matrix::from_rows(rows)?.rref();
        if pivots.len() != n {
            return Err(Error::Internal(format!(
                "orbit sums span a space of dimension {} instead of {n}",
                pivots.len()
            )));
        }
        let mut basis = Vec::with_capacity(n);
        for i in 0..n {
            let value = LNElement::unflatten(n, r.row(i));
            basis.push(self.verify(value)?);
        }
        self.basis = basis;
        self.pivots = pivots;
        Ok(())
    }

    pub fn ctx(&self) -> &'a GaloisContext {
        self.ctx
    }

    pub fn subgroup(&self) -> &RegularSubgroup {
        &self.subgroup
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[HopfElement] {
        &self.basis
    }

    /// Index of `λ(g) η_k λ(g)⁻¹`.
    pub fn conj_index(&self, g: usize, k: usize) -> usize {
        self.conj[g][k]
    }

    /// `η_k⁻¹(1_G)`.
    pub fn act_point(&self, k: usize) -> usize {
        self.act_point[k]
    }

    /// `ᵍh`: `g` acts on coefficients as a Galois automorphism and on `N` by
    /// conjugation through `λ`.
    pub fn g_twist(&self, g: usize, h: &LNElement) -> LNElement {
        let n = self.ctx.dim();
        let mut out = vec![AlgElement::zero(n); n];
        for (k, c) in h.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out[self.conj[g][k]] = self.ctx.act(g, c);
            }
        }
        LNElement { coeffs: out }
    }

    /// First group element whose twist moves `h`, if any.
    pub fn fixedness_witness(&self, h: &LNElement) -> Option<usize> {
        self.ctx
            .group()
            .elements()
            .find(|&g| self.g_twist(g, h) != *h)
    }

    /// Marks `h` as an element of `H_N` after checking every twist.
    pub fn verify(&self, h: LNElement) -> Result<HopfElement> {
        if h.coeffs.len() != self.ctx.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ctx.dim(),
                found: h.coeffs.len(),
            });
        }
        if let Some(g) = self.fixedness_witness(&h) {
            return Err(Error::NotFixed { g });
        }
        Ok(HopfElement {
            value: h,
            fixed_verified: true,
        })
    }

    fn orbit_sum_raw(&self, y: &AlgElement, eta: usize) -> LNElement {
        let n = self.ctx.dim();
        let mut out = vec![AlgElement::zero(n); n];
        for g in self.ctx.group().elements() {
            let k = self.conj[g][eta];
            out[k] = &out[k] + &self.ctx.act(g, y);
        }
        LNElement { coeffs: out }
    }

    /// `T(y·η_k) = Σ_g ᵍ(y·η_k)`.
    pub fn orbit_sum(&self, y: &AlgElement, eta: usize) -> Result<HopfElement> {
        self.verify(self.orbit_sum_raw(y, eta))
    }

    /// The Greither–Pareigis action `(Σ c_η η)·x = Σ c_η η⁻¹(1_G)[x]`.
    pub fn act(&self, h: &HopfElement, x: &AlgElement) -> Result<AlgElement> {
        if !h.fixed_verified {
            return Err(Error::Precondition(
                "only verified G-fixed elements of L[N] act on L".into(),
            ));
        }
        self.ctx.check_element(x)?;
        Ok(self.act_unchecked(&h.value, x))
    }

    fn act_unchecked(&self, h: &LNElement, x: &AlgElement) -> AlgElement {
        let mut out = AlgElement::zero(self.ctx.dim());
        for (k, c) in h.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let moved = self.ctx.act(self.act_point[k], x);
            out = &out + &self.ctx.mul(c, &moved);
        }
        out
    }

    /// Product in `L[N]`; the result is re-verified.
    pub fn mul(&self, a: &HopfElement, b: &HopfElement) -> Result<HopfElement> {
        self.verify(self.mul_ln(&a.value, &b.value))
    }

    pub fn mul_ln(&self, a: &LNElement, b: &LNElement) -> LNElement {
        let n = self.ctx.dim();
        let mut out = vec![AlgElement::zero(n); n];
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let k = self.subgroup.product(i, j);
                out[k] = &out[k] + &self.ctx.mul(ca, cb);
            }
        }
        LNElement { coeffs: out }
    }

    /// `one · η_{1}`, the unit of `H_N`.
    pub fn one(&self) -> HopfElement {
        let n = self.ctx.dim();
        HopfElement {
            value: LNElement::term(n, self.ctx.one().clone(), self.ctx.group().identity()),
            fixed_verified: true,
        }
    }

    /// `Σ c_η η ↦ Σ c_η η⁻¹`.
    pub fn antipode(&self, h: &HopfElement) -> Result<HopfElement> {
        let n = self.ctx.dim();
        let mut out = vec![AlgElement::zero(n); n];
        for (k, c) in h.value.coeffs.iter().enumerate() {
            out[self.subgroup.inverse_index(k)] = c.clone();
        }
        self.verify(LNElement { coeffs: out })
    }

    /// `Σ c_η η ↦ Σ c_η`, as an element of `L`.
    pub fn counit(&self, h: &HopfElement) -> AlgElement {
        h.value
            .coeffs
            .iter()
            .fold(AlgElement::zero(self.ctx.dim()), |acc, c| &acc + c)
    }

    /// Coordinates of `h` in [`Self::basis`]; errors when `h ∉ H_N`.
    pub fn coordinates(&self, h: &LNElement) -> Result<Vec<Scalar>> {
        let flat = h.flatten();
        if flat.len() != self.pivots.len() * self.pivots.len() {
            return Err(Error::DimensionMismatch {
                expected: self.pivots.len() * self.pivots.len(),
                found: flat.len(),
            });
        }
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| flat[p].clone()).collect();
        if self.from_coordinates(&coords).value != *h {
            return Err(Error::NotFixed {
                g: self.fixedness_witness(h).unwrap_or(0),
            });
        }
        Ok(coords)
    }

    pub fn from_coordinates(&self, coords: &[Scalar]) -> HopfElement {
        let n = self.ctx.dim();
        let mut value = LNElement::zero(n);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                value = value.add(&b.value.scale(c));
            }
        }
        HopfElement {
            value,
            fixed_verified: true,
        }
    }

    pub fn to_doc(&self, h: &HopfElement) -> HopfElementDoc {
        HopfElementDoc {
            subgroup: self.name.clone(),
            coeffs: h
                .value
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k.to_string(), c.coords().to_vec()))
                .collect(),
        }
    }

    /// Parses and verifies an element written by [`Self::to_doc`].
    pub fn from_doc(&self, doc: &HopfElementDoc) -> Result<HopfElement> {
        if doc.subgroup != self.name {
            return Err(Error::Fixture(format!(
                "element of H_{} given for H_{}",
                doc.subgroup, self.name
            )));
        }
        let n = self.ctx.dim();
        let mut value = LNElement::zero(n);
        for (key, coords) in &doc.coeffs {
            let k: usize = key
                .parse()
                .ok()
                .filter(|&k| k < n)
                .ok_or_else(|| Error::Fixture(format!("bad N-index {key:?}")))?;
            if coords.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: coords.len(),
                });
            }
            value.coeffs[k] = AlgElement::new(coords.clone());
        }
        self.verify(value)
    }
}

/// `z ∈ K[G]` as an element of `L[ρ(G)]` under `g ↦ ρ(g)`; `ρ(g)` sends
/// `1_G` to `g⁻¹`.
pub fn group_algebra_to_rho(ctx: &GaloisContext, z: &GroupAlgebraElement) -> LNElement {
    let g = ctx.group();
    let mut value = LNElement::zero(ctx.dim());
    for (s, c) in z.coeffs().iter().enumerate() {
        value.coeffs[g.inv(s)] = ctx.scalar(c);
    }
    value
}

/// Does `h·z(t) = z(h·t)` hold?
pub fn interchange_check(
    hopf: &HopfAlgebra<'_>,
    h: &HopfElement,
    z: &GroupAlgebraElement,
    t: &AlgElement,
) -> Result<bool> {
    let ctx = hopf.ctx();
    let left = hopf.act(h, &kg_act(ctx, z, t))?;
    let right = kg_act(ctx, z, &hopf.act(h, t)?);
    Ok(left == right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;

    fn s3() -> GaloisContext {
        GaloisContext::split(&FiniteGroup::symmetric3())
    }

    #[test]
    fn kg_act_examples() {
        let ctx = s3();
        let g = ctx.group().clone();
        let x = AlgElement::from_i64(&[1, -2, 0, 3, 1, 1]);
        assert_eq!(
            kg_act(&ctx, &GroupAlgebraElement::basis(6, g.identity()), &x),
            x
        );
        let all = GroupAlgebraElement::new(vec![Scalar::one(); 6]);
        assert_eq!(kg_act(&ctx, &all, &x), ctx.scalar(&ctx.trace(&x)));
        for s in g.elements() {
            for h in g.elements() {
                assert_eq!(
                    kg_act(
                        &ctx,
                        &GroupAlgebraElement::basis(6, s),
                        &ctx.basis_element(h)
                    ),
                    ctx.basis_element(g.mul(s, h))
                );
            }
        }
    }

    #[test]
    fn twist_examples() {
        let ctx = s3();
        let h = HopfAlgebra::lambda(&ctx).unwrap();
        let g = ctx.group();
        let y = AlgElement::from_i64(&[2, 0, -1, 0, 5, 1]);
        for tau in g.elements() {
            let term = LNElement::term(6, y.clone(), tau);
            assert_eq!(h.g_twist(g.identity(), &term), term);
            for s in g.elements() {
                let expect = LNElement::term(6, ctx.act(s, &y), g.mul(g.mul(s, tau), g.inv(s)));
                assert_eq!(h.g_twist(s, &term), expect);
                assert_eq!(h.g_twist(g.inv(s), &h.g_twist(s, &term)), term);
            }
        }
    }

    #[test]
    fn orbit_sum_of_identity_term() {
        let ctx = s3();
        let h = HopfAlgebra::lambda(&ctx).unwrap();
        let t = h.orbit_sum(ctx.one(), 0).unwrap();
        assert_eq!(
            t.value(),
            &LNElement::term(6, ctx.one().scale(&Scalar::from(6)), 0)
        );
    }

    #[test]
    fn hopf_dimension_and_rho_basis() {
        let ctx = s3();
        let hl = HopfAlgebra::lambda(&ctx).unwrap();
        assert_eq!(hl.dim(), 6);
        let hr = HopfAlgebra::rho(&ctx).unwrap();
        // H_ρ = K[G]: the echelon basis is one·ρ(g)
        for (i, b) in hr.basis().iter().enumerate() {
            let nonzero: Vec<usize> = (0..6).filter(|&k| !b.value().coeff(k).is_zero()).collect();
            assert_eq!(nonzero.len(), 1, "basis element {i}");
            assert_eq!(b.value().coeff(nonzero[0]), ctx.one());
        }
    }

    #[test]
    fn identity_term_acts_trivially() {
        let ctx = s3();
        let hl = HopfAlgebra::lambda(&ctx).unwrap();
        let x = AlgElement::from_i64(&[1, 2, 3, 4, 5, 6]);
        assert_eq!(hl.act(&hl.one(), &x).unwrap(), x);
        let raw = HopfElement::unverified(hl.one().value().clone());
        assert!(hl.act(&raw, &x).is_err());
    }

    #[test]
    fn rho_action_is_classical() {
        let ctx = s3();
        let hr = HopfAlgebra::rho(&ctx).unwrap();
        for s in ctx.group().elements() {
            let z = GroupAlgebraElement::basis(6, s);
            let h = hr.verify(group_algebra_to_rho(&ctx, &z)).unwrap();
            for k in 0..6 {
                let x = ctx.basis_element(k);
                assert_eq!(hr.act(&h, &x).unwrap(), kg_act(&ctx, &z, &x));
            }
        }
    }

    #[test]
    fn orbit_sum_action_expansion() {
        let ctx = s3();
        let g = ctx.group();
        let hl = HopfAlgebra::lambda(&ctx).unwrap();
        let y = AlgElement::from_i64(&[1, 0, 2, -1, 0, 3]);
        let x = AlgElement::from_i64(&[0, 1, 1, 2, -2, 1]);
        for tau in g.elements() {
            let h = hl.orbit_sum(&y, tau).unwrap();
            let mut expect = AlgElement::zero(6);
            for s in g.elements() {
                let e = g.mul(g.mul(s, g.inv(tau)), g.inv(s));
                expect = &expect + &ctx.mul(&ctx.act(s, &y), &ctx.act(e, &x));
            }
            assert_eq!(hl.act(&h, &x).unwrap(), expect);
        }
    }

    #[test]
    fn hopf_mul_identity_and_fixedness() {
        let ctx = s3();
        let hl = HopfAlgebra::lambda(&ctx).unwrap();
        for a in hl.basis() {
            assert_eq!(hl.mul(a, &hl.one()).unwrap(), *a);
            for b in hl.basis() {
                assert!(hl.mul(a, b).unwrap().fixed_verified());
            }
        }
    }

    #[test]
    fn coordinates_round_trip_and_reject_unfixed() {
        let ctx = s3();
        let hl = HopfAlgebra::lambda(&ctx).unwrap();
        let h = hl
            .orbit_sum(&AlgElement::from_i64(&[3, 1, 0, 0, 2, 1]), 4)
            .unwrap();
        let c = hl.coordinates(h.value()).unwrap();
        assert_eq!(hl.from_coordinates(&c), h);
        let term = LNElement::term(6, ctx.basis_element(1), 2);
        assert!(hl.coordinates(&term).is_err());
        let doc = hl.to_doc(&h);
        assert_eq!(hl.from_doc(&doc).unwrap(), h);
    }
}
