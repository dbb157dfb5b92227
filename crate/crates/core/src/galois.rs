//! The extension `L/K` (with `K = Q`) as an `n`-dimensional commutative
//! algebra given by structure constants, together with the action of `G` by
//! algebra automorphisms, the trace form, and dual generators.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{dot, solve_right, Matrix, Scalar};
use crate::groups::{FiniteGroup, GroupDoc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `Map(G, K)` with `G` permuting the orthogonal idempotents.
    Split,
    /// A Galois field extension supplied as fixture data.
    Field,
}

/// Coordinates of an element of `L` in the context basis.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgElement(Vec<Scalar>);

impl AlgElement {
    pub fn new(coords: Vec<Scalar>) -> Self {
        AlgElement(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        AlgElement(coords.iter().map(|&c| Scalar::from(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        AlgElement(vec![Scalar::zero(); n])
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![Scalar::zero(); n];
        v[i] = Scalar::one();
        AlgElement(v)
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> AlgElement {
        AlgElement(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add_scaled(&mut self, other: &AlgElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (x, y) in self.0.iter_mut().zip(&other.0) {
            if !y.is_zero() {
                *x += y * c;
            }
        }
    }
}

impl fmt::Debug for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Add<&AlgElement> for &AlgElement {
    type Output = AlgElement;
    fn add(self, rhs: &AlgElement) -> AlgElement {
        AlgElement(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&AlgElement> for &AlgElement {
    type Output = AlgElement;
    fn sub(self, rhs: &AlgElement) -> AlgElement {
        AlgElement(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &AlgElement {
    type Output = AlgElement;
    fn neg(self) -> AlgElement {
        AlgElement(self.0.iter().map(|a| -a).collect())
    }
}

/// On-disk form of a context.
///
/// A split document may omit `mult`, `one` and `auto`; they are then
/// generated from the group.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContextDoc {
    pub group: GroupDoc,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<Vec<Vec<Vec<Scalar>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub one: Option<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auto: Option<BTreeMap<String, Matrix>>,
}

/// A validated Galois algebra `L` over `Q` with group `G`.
#[derive(Clone)]
pub struct GaloisContext {
    group: FiniteGroup,
    mode: Mode,
    dim: usize,
    mult: Vec<Vec<AlgElement>>,
    mult_terms: Vec<Vec<Vec<(usize, Scalar)>>>,
    one: AlgElement,
    auto: Vec<Matrix>,
    auto_columns: Vec<Vec<Vec<(usize, Scalar)>>>,
    basis_traces: Vec<Scalar>,
    trace_gram: Matrix,
}

impl fmt::Debug for GaloisContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisContext")
            .field("mode", &self.mode)
            .field("dim", &self.dim)
            .finish_non_exhaustive()
    }
}

fn invalid(msg: String) -> Error {
    Error::InvalidContext(msg)
}

impl GaloisContext {
    /// `Map(G, Q)`: basis `u_g`, `u_g u_h = δ u_g`, `σ(u_g) = u_{σg}`.
    pub fn split(group: &FiniteGroup) -> GaloisContext {
        let n = group.order();
        let mult = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            AlgElement::basis(n, i)
                        } else {
                            AlgElement::zero(n)
                        }
                    })
                    .collect()
            })
            .collect();
        let one = AlgElement(vec![Scalar::one(); n]);
        let auto = group
            .elements()
            .map(|s| {
                let mut m = Matrix::zeros(n, n);
                for g in group.elements() {
                    m.set(group.mul(s, g), g, Scalar::one());
                }
                m
            })
            .collect();
        GaloisContext::from_parts(group.clone(), Mode::Split, mult, one, auto)
            .expect("split algebra satisfies every context identity")
    }

    pub fn load(doc: ContextDoc) -> Result<GaloisContext> {
        let group = FiniteGroup::from_doc(doc.group)?;
        let n = group.order();
        match (doc.mode, doc.mult, doc.one, doc.auto) {
            (Mode::Split, None, None, None) => Ok(GaloisContext::split(&group)),
            (mode, Some(mult), Some(one), Some(auto)) => {
                if mult.len() != n || mult.iter().any(|r| r.len() != n) {
                    return Err(invalid(format!("structure constants must be {n}x{n}x{n}")));
                }
                let mult = mult
                    .into_iter()
                    .map(|row| row.into_iter().map(AlgElement).collect())
                    .collect();
                let mut mats = Vec::with_capacity(n);
                for s in group.elements() {
                    let label = group.label(s);
                    let m = auto
                        .get(&label)
                        .ok_or_else(|| invalid(format!("no automorphism matrix for {label}")))?;
                    mats.push(m.clone());
                }
                if auto.len() != n {
                    return Err(invalid(format!(
                        "{} automorphism matrices for {n} group elements",
                        auto.len()
                    )));
                }
                GaloisContext::from_parts(group, mode, mult, AlgElement(one), mats)
            }
            _ => Err(invalid("mult, one and auto must be given together".into())),
        }
    }

    pub fn from_json(text: &str) -> Result<GaloisContext> {
        let doc: ContextDoc =
            serde_json::from_str(text).map_err(|e| Error::Fixture(e.to_string()))?;
        GaloisContext::load(doc)
    }

    pub fn to_doc(&self) -> ContextDoc {
        ContextDoc {
            group: self.group.to_doc(),
            mode: self.mode,
            mult: Some(
                self.mult
                    .iter()
                    .map(|row| row.iter().map(|e| e.0.clone()).collect())
                    .collect(),
            ),
            one: Some(self.one.0.clone()),
            auto: Some(
                self.group
                    .elements()
                    .map(|s| (self.group.label(s), self.auto[s].clone()))
                    .collect(),
            ),
        }
    }

    /// Checks every identity a Galois algebra must satisfy and reports the
    /// first one that fails.
    pub fn from_parts(
        group: FiniteGroup,
        mode: Mode,
        mult: Vec<Vec<AlgElement>>,
        one: AlgElement,
        auto: Vec<Matrix>,
    ) -> Result<GaloisContext> {
        let n = group.order();
        if mult.len() != n
            || mult
                .iter()
                .any(|r| r.len() != n || r.iter().any(|e| e.dim() != n))
        {
            return Err(invalid(format!("structure constants must be {n}x{n}x{n}")));
        }
        if one.dim() != n {
            return Err(invalid(format!(
                "identity element has {} coordinates, expected {n}",
                one.dim()
            )));
        }
        if auto.len() != n || auto.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(invalid(format!(
                "expected {n} automorphism matrices of size {n}x{n}"
            )));
        }
        let mult_terms = mult
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        e.0.iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(k, c)| (k, c.clone()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let auto_columns = auto
            .iter()
            .map(|m| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .filter(|&i| !m.get(i, j).is_zero())
                            .map(|i| (i, m.get(i, j).clone()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut ctx = GaloisContext {
            group,
            mode,
            dim: n,
            mult,
            mult_terms,
            one,
            auto,
            auto_columns,
            basis_traces: Vec::new(),
            trace_gram: Matrix::zeros(0, 0),
        };
        ctx.validate_ring()?;
        ctx.validate_action()?;
        ctx.basis_traces = (0..n)
            .map(|k| ctx.trace_by_orbit_sum(&AlgElement::basis(n, k)))
            .collect::<Result<_>>()?;
        let mut gram = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let t = dot(ctx.mult[i][j].coords(), &ctx.basis_traces);
                gram.set(i, j, t);
            }
        }
        if gram.det()?.is_zero() {
            return Err(invalid(
                "trace form: the Gram matrix Tr(e_i e_j) is singular".into(),
            ));
        }
        ctx.trace_gram = gram;
        Ok(ctx)
    }

    fn validate_ring(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                if self.mult[i][j] != self.mult[j][i] {
                    return Err(invalid(format!("commutativity: e_{i}·e_{j} ≠ e_{j}·e_{i}")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.mul(&self.mult[i][j], &AlgElement::basis(n, k));
                    let right = self.mul(&AlgElement::basis(n, i), &self.mult[j][k]);
                    if left != right {
                        return Err(invalid(format!(
                            "associativity: (e_{i}·e_{j})·e_{k} ≠ e_{i}·(e_{j}·e_{k})"
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            let e = AlgElement::basis(n, i);
            if self.mul(&self.one, &e) != e {
                return Err(invalid(format!("identity: one·e_{i} ≠ e_{i}")));
            }
        }
        Ok(())
    }

    fn validate_action(&self) -> Result<()> {
        let n = self.dim;
        let g = &self.group;
        let label = |s: usize| g.label(s);
        if self.auto[g.identity()] != Matrix::identity(n) {
            return Err(invalid("identity automorphism: M_1 ≠ I".into()));
        }
        for s in g.elements() {
            if self.auto[s].det()?.is_zero() {
                return Err(invalid(format!(
                    "invertibility: M_{} is singular",
                    label(s)
                )));
            }
            if self.act(s, &self.one) != self.one {
                return Err(invalid(format!("unit: M_{}(one) ≠ one", label(s))));
            }
            let images: Vec<AlgElement> = (0..n)
                .map(|i| self.act(s, &AlgElement::basis(n, i)))
                .collect();
            for i in 0..n {
                for j in i..n {
                    let lhs = self.mul(&images[i], &images[j]);
                    let rhs = self.act(s, &self.mult[i][j]);
                    if lhs != rhs {
                        return Err(invalid(format!(
                            "multiplicativity: M_{s}(e_{i})·M_{s}(e_{j}) ≠ M_{s}(e_{i}·e_{j})",
                            s = label(s)
                        )));
                    }
                }
            }
        }
        for s in g.elements() {
            for t in g.elements() {
                let prod = self.auto[s].mul(&self.auto[t])?;
                if prod != self.auto[g.mul(s, t)] {
                    return Err(invalid(format!(
                        "homomorphism: M_{}·M_{} ≠ M_{}",
                        label(s),
                        label(t),
                        label(g.mul(s, t))
                    )));
                }
            }
        }
        // fixed subspace: kernel of the stacked (M_σ - I)
        let mut rows = Vec::new();
        let id = Matrix::identity(n);
        for s in g.elements() {
            rows.extend(self.auto[s].sub(&id)?.to_rows());
        }
        let rank = Matrix::from_rows(rows)?.rank();
        if n - rank != 1 {
            return Err(invalid(format!(
                "fixed field: the G-fixed subspace has dimension {} instead of 1",
                n - rank
            )));
        }
        Ok(())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn one(&self) -> &AlgElement {
        &self.one
    }

    pub fn basis_element(&self, i: usize) -> AlgElement {
        AlgElement::basis(self.dim, i)
    }

    pub fn automorphism(&self, sigma: usize) -> &Matrix {
        &self.auto[sigma]
    }

    pub fn check_element(&self, a: &AlgElement) -> Result<()> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: a.dim(),
            });
        }
        Ok(())
    }

    /// Product via structure constants. Both arguments must have `dim` coordinates.
    pub fn mul(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        let n = self.dim;
        let mut out = vec![Scalar::zero(); n];
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                let terms = &self.mult_terms[i][j];
                if bj.is_zero() || terms.is_empty() {
                    continue;
                }
                let ab = ai * bj;
                for (k, c) in terms {
                    out[*k] += &ab * c;
                }
            }
        }
        AlgElement(out)
    }

    pub fn try_mul(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mul(a, b))
    }

    /// `σ(a) = M_σ a`.
    pub fn act(&self, sigma: usize, a: &AlgElement) -> AlgElement {
        let mut out = vec![Scalar::zero(); self.dim];
        for (j, aj) in a.0.iter().enumerate() {
            if aj.is_zero() {
                continue;
            }
            for (i, c) in &self.auto_columns[sigma][j] {
                out[*i] += aj * c;
            }
        }
        AlgElement(out)
    }

    /// `Tr_{L/K}(a)`, using precomputed traces of the basis.
    pub fn trace(&self, a: &AlgElement) -> Scalar {
        dot(a.coords(), &self.basis_traces)
    }

    /// `Tr_{L/K}(a)` straight from the definition: sum the orbit and read
    /// off the coefficient of `one`.
    pub fn trace_by_orbit_sum(&self, a: &AlgElement) -> Result<Scalar> {
        let mut sum = AlgElement::zero(self.dim);
        for s in self.group.elements() {
            sum = &sum + &self.act(s, a);
        }
        self.as_scalar(&sum)
            .ok_or_else(|| Error::Internal("orbit sum is not a multiple of one".into()))
    }

    /// `Some(t)` when `a = t · one`.
    pub fn as_scalar(&self, a: &AlgElement) -> Option<Scalar> {
        let p = self.one.0.iter().position(|c| !c.is_zero())?;
        let t = &a.0[p] / &self.one.0[p];
        (self.one.scale(&t) == *a).then_some(t)
    }

    pub fn scalar(&self, t: &Scalar) -> AlgElement {
        self.one.scale(t)
    }

    /// Matrix of `y ↦ a·y` in the context basis.
    pub fn mult_matrix(&self, a: &AlgElement) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            let col = self.mul(a, &AlgElement::basis(n, j));
            for (i, c) in col.0.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }

    pub fn inverse(&self, a: &AlgElement) -> Option<AlgElement> {
        let m = self.mult_matrix(a);
        if m.det().ok()?.is_zero() {
            return None;
        }
        solve_right(&m, self.one.coords())
            .ok()
            .flatten()
            .map(AlgElement)
    }

    /// Is `a` invertible in `L`? In split mode this is exactly "every
    /// idempotent component is nonzero".
    pub fn is_unit(&self, a: &AlgElement) -> bool {
        match self.mode {
            Mode::Split if self.is_standard_split() => a.0.iter().all(|c| !c.is_zero()),
            Mode::Field => !a.is_zero(),
            Mode::Split => self.mult_matrix(a).det().is_ok_and(|d| !d.is_zero()),
        }
    }

    fn is_standard_split(&self) -> bool {
        self.one.0.iter().all(Scalar::is_one)
            && (0..self.dim).all(|i| self.mult_terms[i][i] == vec![(i, Scalar::one())])
    }

    /// The trace-form Gram matrix `Tr(e_i e_j)`.
    pub fn trace_gram(&self) -> &Matrix {
        &self.trace_gram
    }

    /// The element `x̂` with `Tr(σ(x̂)·τ(x)) = δ_{σ,τ}`, obtained from the `n`
    /// equations `Tr(x̂ · g(x)) = δ_{1,g}`.
    pub fn dual_generator(&self, x: &AlgElement) -> Result<AlgElement> {
        self.check_element(x)?;
        let n = self.dim;
        let g = &self.group;
        let rows: Vec<Vec<Scalar>> = g
            .elements()
            .map(|s| self.trace_gram.mul_vec(self.act(s, x).coords()))
            .collect::<Result<_>>()?;
        let system = Matrix::from_rows(rows)?;
        if system.det()?.is_zero() {
            return Err(Error::Singular(
                "the G-orbit of x is not a basis, so x has no dual generator".into(),
            ));
        }
        let mut rhs = vec![Scalar::zero(); n];
        rhs[g.identity()] = Scalar::one();
        let sol = solve_right(&system, &rhs)?
            .ok_or_else(|| Error::Internal("nonsingular system has no solution".into()))?;
        Ok(AlgElement(sol))
    }

    /// Uniform random element with integer coordinates in `[-bound, bound]`.
    pub fn random_element<R: Rng>(&self, rng: &mut R, bound: i64) -> AlgElement {
        AlgElement(
            (0..self.dim)
                .map(|_| Scalar::from(rng.gen_range(-bound..=bound)))
                .collect(),
        )
    }
}
