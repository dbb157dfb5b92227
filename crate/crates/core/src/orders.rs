//! `G`-stable lattices, their associated orders in `K[G]` and `H_λ`,
//! freeness certificates and the Hopf-order test.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{common_denominator, IntegralLattice, Matrix, Scalar};
use crate::galois::{AlgElement, GaloisContext};
use crate::hopf::{kg_act, GroupAlgebraElement, HopfAlgebra, HopfElement, HopfElementDoc};

/// A full-rank lattice in `L` (coordinates in the context basis).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GStableLattice {
    lattice: IntegralLattice,
    stability_verified: bool,
}

impl GStableLattice {
    /// Wraps a lattice without checking stability.
    pub fn unverified(lattice: IntegralLattice) -> Self {
        GStableLattice {
            lattice,
            stability_verified: false,
        }
    }

    pub fn lattice(&self) -> &IntegralLattice {
        &self.lattice
    }

    pub fn stability_verified(&self) -> bool {
        self.stability_verified
    }

    pub fn basis_elements(&self) -> Vec<AlgElement> {
        self.lattice
            .basis_vectors()
            .into_iter()
            .map(AlgElement::new)
            .collect()
    }

    pub fn contains(&self, x: &AlgElement) -> Result<bool> {
        self.lattice.contains(x.coords())
    }

    /// B-coordinates of `x`.
    pub fn coordinates(&self, x: &AlgElement) -> Result<Vec<Scalar>> {
        self.lattice.coordinates(x.coords())
    }
}

/// Checks `σ(v) ∈ B` for every `σ` and every basis vector `v`.
pub fn check_g_stable(ctx: &GaloisContext, b: &IntegralLattice) -> Result<GStableLattice> {
    if b.dim() != ctx.dim() {
        return Err(Error::DimensionMismatch {
            expected: ctx.dim(),
            found: b.dim(),
        });
    }
    for (vector, v) in b.basis_vectors().into_iter().enumerate() {
        let v = AlgElement::new(v);
        for sigma in ctx.group().elements() {
            if !b.contains(ctx.act(sigma, &v).coords())? {
                return Err(Error::Unstable { sigma, vector });
            }
        }
    }
    Ok(GStableLattice {
        lattice: b.clone(),
        stability_verified: true,
    })
}

/// `Σ_σ Z·σ(x)`; full rank exactly when `x` is a normal basis generator.
pub fn orbit_lattice(ctx: &GaloisContext, x: &AlgElement) -> Result<IntegralLattice> {
    let rows: Vec<Vec<Scalar>> = ctx
        .group()
        .elements()
        .map(|s| ctx.act(s, x).into_coords())
        .collect();
    IntegralLattice::from_rational_rows(ctx.dim(), &rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ambient {
    /// `K[G]`, coordinates over `G`.
    Kg,
    /// `H_λ`, coordinates over the echelon basis of [`HopfAlgebra`].
    Hlambda,
}

/// A lattice in `K[G]` or `H_λ`, in the coordinates of the ambient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderLattice {
    ambient: Ambient,
    lattice: IntegralLattice,
    ring_verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderDoc {
    pub ambient: Ambient,
    pub lattice: IntegralLattice,
}

impl OrderLattice {
    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn lattice(&self) -> &IntegralLattice {
        &self.lattice
    }

    pub fn ring_verified(&self) -> bool {
        self.ring_verified
    }

    pub fn to_doc(&self) -> OrderDoc {
        OrderDoc {
            ambient: self.ambient,
            lattice: self.lattice.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderElement {
    Kg(GroupAlgebraElement),
    Hopf(HopfElement),
}

impl OrderElement {
    pub fn ambient(&self) -> Ambient {
        match self {
            OrderElement::Kg(_) => Ambient::Kg,
            OrderElement::Hopf(_) => Ambient::Hlambda,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderElementDoc {
    Kg(GroupAlgebraElement),
    Hopf(HopfElementDoc),
}

/// `x` together with an order basis whose images `a_i(x)` form a basis of `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreenessCertificate {
    ambient: Ambient,
    generator: AlgElement,
    order_basis: Vec<OrderElement>,
    images: Vec<AlgElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub ambient: Ambient,
    pub generator: AlgElement,
    pub order_basis: Vec<OrderElementDoc>,
    pub images: Vec<AlgElement>,
}

impl FreenessCertificate {
    /// Unchecked; see [`Setting::revalidate`].
    pub(crate) fn new(
        ambient: Ambient,
        generator: AlgElement,
        order_basis: Vec<OrderElement>,
        images: Vec<AlgElement>,
    ) -> Self {
        FreenessCertificate {
            ambient,
            generator,
            order_basis,
            images,
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn generator(&self) -> &AlgElement {
        &self.generator
    }

    pub fn order_basis(&self) -> &[OrderElement] {
        &self.order_basis
    }

    pub fn images(&self) -> &[AlgElement] {
        &self.images
    }
}

/// A context together with its `H_λ`; everything that acts on `L`.
#[derive(Debug, Clone)]
pub struct Setting<'a> {
    ctx: &'a GaloisContext,
    hlambda: HopfAlgebra<'a>,
}

impl<'a> Setting<'a> {
    pub fn new(ctx: &'a GaloisContext) -> Result<Self> {
        Ok(Setting {
            ctx,
            hlambda: HopfAlgebra::lambda(ctx)?,
        })
    }

    pub fn ctx(&self) -> &'a GaloisContext {
        self.ctx
    }

    pub fn hlambda(&self) -> &HopfAlgebra<'a> {
        &self.hlambda
    }

    fn n(&self) -> usize {
        self.ctx.dim()
    }

    /// The ambient element with the given coordinates.
    pub fn element(&self, ambient: Ambient, coords: &[Scalar]) -> OrderElement {
        match ambient {
            Ambient::Kg => OrderElement::Kg(GroupAlgebraElement::new(coords.to_vec())),
            Ambient::Hlambda => OrderElement::Hopf(self.hlambda.from_coordinates(coords)),
        }
    }

    pub fn coordinates(&self, e: &OrderElement) -> Result<Vec<Scalar>> {
        match e {
            OrderElement::Kg(z) => Ok(z.coeffs().to_vec()),
            OrderElement::Hopf(h) => self.hlambda.coordinates(h.value()),
        }
    }

    pub fn apply(&self, e: &OrderElement, x: &AlgElement) -> Result<AlgElement> {
        match e {
            OrderElement::Kg(z) => {
                self.ctx.check_element(x)?;
                Ok(kg_act(self.ctx, z, x))
            }
            OrderElement::Hopf(h) => self.hlambda.act(h, x),
        }
    }

    pub fn identity(&self, ambient: Ambient) -> Result<Vec<Scalar>> {
        match ambient {
            Ambient::Kg => Ok(
                GroupAlgebraElement::basis(self.n(), self.ctx.group().identity())
                    .coeffs()
                    .to_vec(),
            ),
            Ambient::Hlambda => self.hlambda.coordinates(self.hlambda.one().value()),
        }
    }

    pub fn multiply(&self, ambient: Ambient, a: &[Scalar], b: &[Scalar]) -> Result<Vec<Scalar>> {
        match ambient {
            Ambient::Kg => {
                let g = self.ctx.group();
                let p = GroupAlgebraElement::new(a.to_vec())
                    .mul(g, &GroupAlgebraElement::new(b.to_vec()));
                Ok(p.coeffs().to_vec())
            }
            Ambient::Hlambda => {
                let h = &self.hlambda;
                let p = h.mul(&h.from_coordinates(a), &h.from_coordinates(b))?;
                h.coordinates(p.value())
            }
        }
    }

    /// Wraps a lattice as a candidate order, recording whether it contains the
    /// identity and is closed under products of basis elements.
    pub fn order_from_lattice(
        &self,
        ambient: Ambient,
        lattice: IntegralLattice,
    ) -> Result<OrderLattice> {
        if lattice.dim() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: lattice.dim(),
            });
        }
        let ring_verified = self.is_ring(ambient, &lattice)?;
        Ok(OrderLattice {
            ambient,
            lattice,
            ring_verified,
        })
    }

    fn is_ring(&self, ambient: Ambient, lattice: &IntegralLattice) -> Result<bool> {
        if !lattice.contains(&self.identity(ambient)?)? {
            return Ok(false);
        }
        let basis = lattice.basis_vectors();
        for a in &basis {
            for b in &basis {
                if !lattice.contains(&self.multiply(ambient, a, b)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `{z : z·B ⊆ B}` inside the ambient.
    ///
    /// With `C[i]` the concatenated B-coordinates of `e_i·b_1, …, e_i·b_n`,
    /// the order is `{z : zC ∈ Z^{n²}}`. Denominators are cleared once with
    /// `D = lcm`, the columns of `DC` generate a lattice `M ⊂ Z^n`, and the
    /// answer is `D · M^*`.
    pub fn associated_order(&self, ambient: Ambient, b: &GStableLattice) -> Result<OrderLattice> {
        if !b.stability_verified {
            return Err(Error::Precondition(
                "associated orders need a verified G-stable lattice".into(),
            ));
        }
        let n = self.n();
        if b.lattice.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.lattice.dim(),
            });
        }
        let basis = b.basis_elements();
        let mut c_rows: Vec<Vec<Scalar>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut unit = vec![Scalar::zero(); n];
            unit[i] = Scalar::one();
            let e = self.element(ambient, &unit);
            let mut row = Vec::with_capacity(n * n);
            for v in &basis {
                row.extend(b.coordinates(&self.apply(&e, v)?)?);
            }
            c_rows.push(row);
        }
        let lattice = multiplier_lattice(n, &c_rows)?;
        let order = self.order_from_lattice(ambient, lattice)?;
        if !order.ring_verified {
            return Err(Error::Internal(
                "associated order failed the ring check".into(),
            ));
        }
        Ok(order)
    }

    /// A certificate when the images of the basis of `A` applied to `x` span
    /// exactly `B`; `None` otherwise.
    pub fn verify_freeness(
        &self,
        a: &OrderLattice,
        b: &GStableLattice,
        x: &AlgElement,
    ) -> Result<Option<FreenessCertificate>> {
        if !b.contains(x)? {
            return Err(Error::NotInLattice);
        }
        let order_basis: Vec<OrderElement> = a
            .lattice
            .basis_vectors()
            .iter()
            .map(|c| self.element(a.ambient, c))
            .collect();
        let images: Vec<AlgElement> = order_basis
            .iter()
            .map(|e| self.apply(e, x))
            .collect::<Result<_>>()?;
        if !spans_exactly(b, &images)? {
            return Ok(None);
        }
        Ok(Some(FreenessCertificate {
            ambient: a.ambient,
            generator: x.clone(),
            order_basis,
            images,
        }))
    }

    /// First `x = Σ c_k b_k` with `|c_k| ≤ box` that passes
    /// [`Self::verify_freeness`], in order of increasing `Σ|c_k|`.
    pub fn search_generator(
        &self,
        a: &OrderLattice,
        b: &GStableLattice,
        bound: u32,
    ) -> Result<Option<AlgElement>> {
        if bound == 0 {
            return Ok(None);
        }
        let n = self.n();
        let b_basis = b.basis_elements();
        let order_basis: Vec<OrderElement> = a
            .lattice
            .basis_vectors()
            .iter()
            .map(|c| self.element(a.ambient, c))
            .collect();
        // m[k][i] = B-coordinates of a_i(b_k); the image matrix of x is Σ c_k m[k]
        let mut m: Vec<Vec<Vec<Scalar>>> = Vec::with_capacity(n);
        for v in &b_basis {
            let rows = order_basis
                .iter()
                .map(|e| b.coordinates(&self.apply(e, v)?))
                .collect::<Result<Vec<_>>>()?;
            m.push(rows);
        }
        let fast = SmallIntImages::new(&m);
        let bound = i64::from(bound);
        let mut found = None;
        let mut coeffs = vec![0i64; n];
        for shell in 1..=(n as i64 * bound) {
            let flow = shell_tuples(&mut coeffs, 0, shell, bound, &mut |c| {
                let unimodular = match &fast {
                    Some(f) => f.is_unimodular(c),
                    None => rational_unimodular(&m, c),
                };
                if unimodular {
                    ControlFlow::Break(c.to_vec())
                } else {
                    ControlFlow::Continue(())
                }
            });
            if let ControlFlow::Break(c) = flow {
                found = Some(c);
                break;
            }
        }
        let Some(c) = found else {
            return Ok(None);
        };
        let mut x = AlgElement::zero(n);
        for (ck, v) in c.iter().zip(&b_basis) {
            x.add_scaled(v, &Scalar::from(*ck));
        }
        if self.verify_freeness(a, b, &x)?.is_none() {
            return Err(Error::Internal(
                "search candidate failed full verification".into(),
            ));
        }
        Ok(Some(x))
    }

    /// Re-checks a certificate from scratch against `B` and, if given, `A`.
    pub fn revalidate(
        &self,
        cert: &FreenessCertificate,
        b: &GStableLattice,
        a: Option<&OrderLattice>,
    ) -> Result<bool> {
        let n = self.n();
        if cert.order_basis.len() != n || cert.images.len() != n {
            return Ok(false);
        }
        if !b.contains(&cert.generator)? {
            return Ok(false);
        }
        for (e, img) in cert.order_basis.iter().zip(&cert.images) {
            if e.ambient() != cert.ambient || self.apply(e, &cert.generator)? != *img {
                return Ok(false);
            }
        }
        if !spans_exactly(b, &cert.images)? {
            return Ok(false);
        }
        if let Some(a) = a {
            if a.ambient != cert.ambient {
                return Ok(false);
            }
            for e in &cert.order_basis {
                if !a.lattice.contains(&self.coordinates(e)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn certificate_to_doc(&self, cert: &FreenessCertificate) -> CertificateDoc {
        CertificateDoc {
            ambient: cert.ambient,
            generator: cert.generator.clone(),
            order_basis: cert
                .order_basis
                .iter()
                .map(|e| match e {
                    OrderElement::Kg(z) => OrderElementDoc::Kg(z.clone()),
                    OrderElement::Hopf(h) => OrderElementDoc::Hopf(self.hlambda.to_doc(h)),
                })
                .collect(),
            images: cert.images.clone(),
        }
    }

    /// Parses a certificate; `H_λ` elements are re-verified as `G`-fixed.
    /// The result still needs [`Self::revalidate`].
    pub fn certificate_from_doc(&self, doc: &CertificateDoc) -> Result<FreenessCertificate> {
        let n = self.n();
        self.ctx.check_element(&doc.generator)?;
        let order_basis = doc
            .order_basis
            .iter()
            .map(|e| match (doc.ambient, e) {
                (Ambient::Kg, OrderElementDoc::Kg(z)) if z.coeffs().len() == n => {
                    Ok(OrderElement::Kg(z.clone()))
                }
                (Ambient::Hlambda, OrderElementDoc::Hopf(h)) => {
                    Ok(OrderElement::Hopf(self.hlambda.from_doc(h)?))
                }
                _ => Err(Error::Fixture(
                    "order element does not match the certificate ambient".into(),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        for img in &doc.images {
            self.ctx.check_element(img)?;
        }
        Ok(FreenessCertificate {
            ambient: doc.ambient,
            generator: doc.generator.clone(),
            order_basis,
            images: doc.images.clone(),
        })
    }

    /// Does `A` carry the Hopf structure: `Δ(A) ⊆ A⊗A`, `ε(A) ⊆ Z`, `S(A) ⊆ A`?
    pub fn is_hopf_order(&self, a: &OrderLattice) -> Result<bool> {
        if !a.ring_verified {
            return Err(Error::Precondition(
                "Hopf-order test needs a verified order".into(),
            ));
        }
        let n = self.n();
        let basis = a.lattice.basis_vectors();
        let mut kron_rows = Vec::with_capacity(n * n);
        for p in &basis {
            for q in &basis {
                kron_rows.push(
                    p.iter()
                        .flat_map(|x| q.iter().map(move |y| x * y))
                        .collect::<Vec<_>>(),
                );
            }
        }
        let kron = IntegralLattice::from_rational_rows(n * n, &kron_rows)?;
        match a.ambient {
            Ambient::Kg => {
                let g = self.ctx.group();
                for v in &basis {
                    let mut delta = vec![Scalar::zero(); n * n];
                    for (s, c) in v.iter().enumerate() {
                        delta[s * n + s] = c.clone();
                    }
                    if !kron.contains(&delta)? {
                        return Ok(false);
                    }
                    if !v.iter().sum::<Scalar>().is_integer() {
                        return Ok(false);
                    }
                    let anti = GroupAlgebraElement::new(v.clone()).antipode(g);
                    if !a.lattice.contains(anti.coeffs())? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Ambient::Hlambda => {
                let h = &self.hlambda;
                let coproducts = self.hlambda_coproducts()?;
                let counits: Vec<Scalar> = h
                    .basis()
                    .iter()
                    .map(|b| {
                        self.ctx.as_scalar(&h.counit(b)).ok_or_else(|| {
                            Error::Internal("counit of a fixed element is not in K".into())
                        })
                    })
                    .collect::<Result<_>>()?;
                for v in &basis {
                    let mut delta = vec![Scalar::zero(); n * n];
                    for (c, w) in v.iter().zip(&coproducts) {
                        for (d, wk) in delta.iter_mut().zip(w) {
                            *d += c * wk;
                        }
                    }
                    if !kron.contains(&delta)? {
                        return Ok(false);
                    }
                    let eps: Scalar = v.iter().zip(&counits).map(|(c, t)| c * t).sum();
                    if !eps.is_integer() {
                        return Ok(false);
                    }
                    let anti = h.antipode(&h.from_coordinates(v))?;
                    if !a.lattice.contains(&h.coordinates(anti.value())?)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// `Δ(h_p)` in the basis `h_i ⊗ h_j` (index `i·n + j`), for each basis
    /// element `h_p` of `H_λ`, with `Δ(η) = η ⊗ η`.
    pub fn hlambda_coproducts(&self) -> Result<Vec<Vec<Scalar>>> {
        let h = &self.hlambda;
        let n = self.n();
        let hb: Vec<&[AlgElement]> = h.basis().iter().map(|b| b.value().coeffs()).collect();
        // rows indexed by (η, μ, k), columns (i, j), then n right-hand sides
        let cols = n * n + n;
        let mut rows = Vec::with_capacity(n * n * n);
        for eta in 0..n {
            for mu in 0..n {
                let mut block = vec![vec![Scalar::zero(); cols]; n];
                for i in 0..n {
                    if hb[i][eta].is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        if hb[j][mu].is_zero() {
                            continue;
                        }
                        let prod = self.ctx.mul(&hb[i][eta], &hb[j][mu]);
                        for (k, c) in prod.coords().iter().enumerate() {
                            block[k][i * n + j] = c.clone();
                        }
                    }
                }
                if eta == mu {
                    for p in 0..n {
                        for (k, c) in hb[p][eta].coords().iter().enumerate() {
                            block[k][n * n + p] = c.clone();
                        }
                    }
                }
                rows.extend(block);
            }
        }
        let (r, pivots) = Matrix::from_rows(rows)?.rref();
        if pivots.len() != n * n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return Err(Error::Internal(
                "coproduct system is not uniquely solvable".into(),
            ));
        }
        Ok((0..n)
            .map(|p| {
                (0..n * n)
                    .map(|row| r.get(row, n * n + p).clone())
                    .collect()
            })
            .collect())
    }
}

pub fn associated_order_kg(setting: &Setting<'_>, b: &GStableLattice) -> Result<OrderLattice> {
    setting.associated_order(Ambient::Kg, b)
}

pub fn associated_order_hlambda(setting: &Setting<'_>, b: &GStableLattice) -> Result<OrderLattice> {
    setting.associated_order(Ambient::Hlambda, b)
}

/// `{z ∈ Q^n : z·C ∈ Z^m}` for the `n × m` matrix with rows `c_rows`.
pub fn multiplier_lattice(n: usize, c_rows: &[Vec<Scalar>]) -> Result<IntegralLattice> {
    if c_rows.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c_rows.len(),
        });
    }
    let d = common_denominator(c_rows.iter().flatten());
    let m = c_rows.first().map_or(0, Vec::len);
    let columns: Vec<Vec<BigInt>> = (0..m)
        .map(|k| {
            c_rows
                .iter()
                .map(|row| (row[k].numer() * &d) / row[k].denom())
                .collect()
        })
        .collect();
    let span = IntegralLattice::from_integer_rows(n, &columns, BigInt::one())?;
    span.dual()?.scaled(&Scalar::from_int(d))
}

/// Do `vectors` form a basis of `B`?
fn spans_exactly(b: &GStableLattice, vectors: &[AlgElement]) -> Result<bool> {
    let rows: Vec<Vec<Scalar>> = vectors.iter().map(|v| v.coords().to_vec()).collect();
    match IntegralLattice::from_rational_rows(b.lattice.dim(), &rows) {
        Ok(l) => Ok(rows.len() == b.lattice.dim() && l.equals(&b.lattice)?),
        Err(Error::RankDeficient { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Calls `f` on every tuple with `Σ|c| = remaining` and `|c| ≤ bound`, in
/// lexicographic order for the value order `0, 1, -1, 2, -2, …`.
fn shell_tuples(
    c: &mut Vec<i64>,
    pos: usize,
    remaining: i64,
    bound: i64,
    f: &mut impl FnMut(&[i64]) -> ControlFlow<Vec<i64>>,
) -> ControlFlow<Vec<i64>> {
    let n = c.len();
    if pos == n {
        return if remaining == 0 {
            f(c)
        } else {
            ControlFlow::Continue(())
        };
    }
    let rest = (n - pos - 1) as i64 * bound;
    for mag in 0..=bound.min(remaining) {
        if remaining - mag > rest {
            continue;
        }
        let signs: &[i64] = if mag == 0 { &[1] } else { &[1, -1] };
        for &s in signs {
            c[pos] = s * mag;
            shell_tuples(c, pos + 1, remaining - mag, bound, f)?;
        }
    }
    c[pos] = 0;
    ControlFlow::Continue(())
}

fn rational_unimodular(m: &[Vec<Vec<Scalar>>], c: &[i64]) -> bool {
    let n = m.len();
    let mut rows = vec![vec![Scalar::zero(); n]; n];
    for (k, &ck) in c.iter().enumerate() {
        if ck == 0 {
            continue;
        }
        let s = Scalar::from(ck);
        for (row, mrow) in rows.iter_mut().zip(&m[k]) {
            for (x, y) in row.iter_mut().zip(mrow) {
                *x += &s * y;
            }
        }
    }
    if !rows.iter().flatten().all(Scalar::is_integer) {
        return false;
    }
    Matrix::from_rows(rows)
        .and_then(|mat| mat.det())
        .is_ok_and(|d| d.abs().is_one())
}

/// The image-coordinate tensor when every entry is a small integer, for a
/// fast determinant in `i128`.
struct SmallIntImages {
    m: Vec<Vec<Vec<i64>>>,
}

impl SmallIntImages {
    fn new(m: &[Vec<Vec<Scalar>>]) -> Option<Self> {
        let mut out = Vec::with_capacity(m.len());
        for block in m {
            let mut b = Vec::with_capacity(block.len());
            for row in block {
                let mut r = Vec::with_capacity(row.len());
                for x in row {
                    let v = x.to_integer()?.to_i64()?;
                    if v.abs() > 1 << 20 {
                        return None;
                    }
                    r.push(v);
                }
                b.push(r);
            }
            out.push(b);
        }
        Some(SmallIntImages { m: out })
    }

    fn is_unimodular(&self, c: &[i64]) -> bool {
        let n = self.m.len();
        let mut a = vec![vec![BigInt::zero(); n]; n];
        for (k, &ck) in c.iter().enumerate() {
            if ck == 0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    a[i][j] += BigInt::from(ck * self.m[k][i][j]);
                }
            }
        }
        bareiss_det(a).abs().is_one()
    }
}

/// Fraction-free Gaussian elimination over `Z`.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;

    fn s3() -> GaloisContext {
        GaloisContext::split(&FiniteGroup::symmetric3())
    }

    #[test]
    fn stability_examples() {
        let ctx = s3();
        assert!(check_g_stable(&ctx, &IntegralLattice::standard(6))
            .unwrap()
            .stability_verified());
        let half = IntegralLattice::standard(6)
            .scaled(&Scalar::from_frac(1, 2))
            .unwrap();
        assert!(check_g_stable(&ctx, &half).is_ok());
        let mut rows: Vec<Vec<Scalar>> = IntegralLattice::standard(6).basis_vectors();
        rows[0][0] = Scalar::from(2);
        let b = IntegralLattice::from_rational_rows(6, &rows).unwrap();
        assert!(matches!(
            check_g_stable(&ctx, &b),
            Err(Error::Unstable { .. })
        ));
    }

    #[test]
    fn integral_group_ring_is_associated_order_of_standard() {
        let ctx = s3();
        let s = Setting::new(&ctx).unwrap();
        let b = check_g_stable(&ctx, &IntegralLattice::standard(6)).unwrap();
        let a = associated_order_kg(&s, &b).unwrap();
        assert_eq!(a.lattice(), &IntegralLattice::standard(6));
        assert!(a.ring_verified());
        let b3 =
            check_g_stable(&ctx, &b.lattice().scaled(&Scalar::from_frac(3, 7)).unwrap()).unwrap();
        assert_eq!(associated_order_kg(&s, &b3).unwrap(), a);
        let al = associated_order_hlambda(&s, &b).unwrap();
        assert!(al.ring_verified());
        assert_eq!(associated_order_hlambda(&s, &b3).unwrap(), al);
    }

    #[test]
    fn freeness_examples() {
        let ctx = s3();
        let g = ctx.group().clone();
        let s = Setting::new(&ctx).unwrap();
        let b = check_g_stable(&ctx, &IntegralLattice::standard(6)).unwrap();
        let a = associated_order_kg(&s, &b).unwrap();
        let u1 = ctx.basis_element(g.identity());
        let cert = s.verify_freeness(&a, &b, &u1).unwrap().unwrap();
        let mut images = cert.images().to_vec();
        images.sort_by_key(|v| v.coords().iter().position(|c| !c.is_zero()));
        assert_eq!(
            images,
            (0..6).map(|i| ctx.basis_element(i)).collect::<Vec<_>>()
        );
        assert!(s.revalidate(&cert, &b, Some(&a)).unwrap());
        assert!(s
            .verify_freeness(&a, &b, &AlgElement::zero(6))
            .unwrap()
            .is_none());
        let half = AlgElement::new(vec![Scalar::from_frac(1, 2); 6]);
        assert_eq!(s.verify_freeness(&a, &b, &half), Err(Error::NotInLattice));
    }

    #[test]
    fn search_examples() {
        let ctx = s3();
        let s = Setting::new(&ctx).unwrap();
        let b = check_g_stable(&ctx, &IntegralLattice::standard(6)).unwrap();
        let a = associated_order_kg(&s, &b).unwrap();
        assert_eq!(s.search_generator(&a, &b, 0).unwrap(), None);
        let x = s.search_generator(&a, &b, 1).unwrap().unwrap();
        assert!(s.verify_freeness(&a, &b, &x).unwrap().is_some());
    }

    #[test]
    fn shell_order() {
        let mut seen = Vec::new();
        let mut c = vec![0; 2];
        for shell in 1..=2 {
            let _ = shell_tuples(&mut c, 0, shell, 1, &mut |t| {
                seen.push(t.to_vec());
                ControlFlow::<Vec<i64>>::Continue(())
            });
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, -1],
                vec![1, 0],
                vec![-1, 0],
                vec![1, 1],
                vec![1, -1],
                vec![-1, 1],
                vec![-1, -1]
            ]
        );
    }

    #[test]
    fn bareiss_matches_rational_det() {
        let rows = [[2i64, -1, 0, 3], [1, 0, 4, 1], [0, 5, -2, 2], [3, 1, 1, 0]];
        let big: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let m = Matrix::from_i64_rows(&rows.iter().map(|r| &r[..]).collect::<Vec<_>>()).unwrap();
        assert_eq!(Scalar::from_int(bareiss_det(big)), m.det().unwrap());
    }

    #[test]
    fn hopf_order_examples() {
        let ctx = s3();
        let g = ctx.group().clone();
        let s = Setting::new(&ctx).unwrap();
        let b = check_g_stable(&ctx, &IntegralLattice::standard(6)).unwrap();
        let a = associated_order_kg(&s, &b).unwrap();
        assert!(s.is_hopf_order(&a).unwrap());

        // Z·1 + Σ 2Z·g: a unital ring, but Δ(2g) = 2 g⊗g needs coefficient 4
        let rows: Vec<Vec<Scalar>> = g
            .elements()
            .map(|x| {
                let mut r = vec![Scalar::zero(); 6];
                r[x] = Scalar::from(if x == g.identity() { 1 } else { 2 });
                r
            })
            .collect();
        let thin = s
            .order_from_lattice(
                Ambient::Kg,
                IntegralLattice::from_rational_rows(6, &rows).unwrap(),
            )
            .unwrap();
        assert!(thin.ring_verified());
        assert!(!s.is_hopf_order(&thin).unwrap());

        let doubled = s
            .order_from_lattice(Ambient::Kg, a.lattice().scaled(&Scalar::from(2)).unwrap())
            .unwrap();
        assert!(!doubled.ring_verified());
        assert!(matches!(
            s.is_hopf_order(&doubled),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn multiplier_lattice_small() {
        // z·(1/2, 1/3) integral  ⇔  z ∈ 6Z
        let l = multiplier_lattice(1, &[vec![Scalar::from_frac(1, 2), Scalar::from_frac(1, 3)]])
            .unwrap();
        assert_eq!(
            l,
            IntegralLattice::standard(1)
                .scaled(&Scalar::from(6))
                .unwrap()
        );
    }
}
