//! Moving freeness certificates between `K[G]` and `H_λ`.
//!
//! Given `x` generating `B` over `𝔄_{K[G]}` with `x_i = a_i(x)` a basis of
//! `B`, the elements `h_i` of [`build_h`] lie in `H_λ` and satisfy
//! `h_i·x = x_i`; conversely [`build_a`] turns an `H_λ`-side certificate into
//! a `K[G]`-side one. Every claim is checked exactly, and where possible along
//! two independent routes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{IntegralLattice, Scalar};
use crate::galois::{AlgElement, GaloisContext};
use crate::hopf::{kg_act, GroupAlgebraElement, HopfAlgebra, LNElement};
use crate::orders::{
    Ambient, FreenessCertificate, GStableLattice, OrderElement, OrderLattice, Setting,
};

/// `Tr(σ(x̂)·τ(x)) = δ_{σ,τ}` for all `σ, τ`.
pub fn dual_basis_check(ctx: &GaloisContext, x: &AlgElement, xhat: &AlgElement) -> bool {
    let g = ctx.group();
    g.elements().all(|s| {
        let sx = ctx.act(s, xhat);
        g.elements().all(|t| {
            let expect = if s == t {
                Scalar::one()
            } else {
                Scalar::zero()
            };
            ctx.trace(&ctx.mul(&sx, &ctx.act(t, x))) == expect
        })
    })
}

/// `Σ_g σg(x̂)·τg(x) = δ_{σ,τ}` for all `σ, τ`.
pub fn inside_out_check(ctx: &GaloisContext, x: &AlgElement, xhat: &AlgElement) -> bool {
    let g = ctx.group();
    let zero = AlgElement::zero(ctx.dim());
    g.elements().all(|s| {
        g.elements().all(|t| {
            let sum = g.elements().fold(zero.clone(), |acc, h| {
                &acc + &ctx.mul(&ctx.act(g.mul(s, h), xhat), &ctx.act(g.mul(t, h), x))
            });
            sum == if s == t {
                ctx.one().clone()
            } else {
                zero.clone()
            }
        })
    })
}

/// The same identity as a matrix statement over `L`: with
/// `X = (g_i g_j(x))` and `X̂ = (g_i g_j(x̂))`, both `XᵀX̂ = I` and `X̂Xᵀ = I`.
pub fn inside_out_matrix_check(ctx: &GaloisContext, x: &AlgElement, xhat: &AlgElement) -> bool {
    let g = ctx.group();
    let n = g.order();
    let build = |y: &AlgElement| -> Vec<Vec<AlgElement>> {
        (0..n)
            .map(|i| (0..n).map(|j| ctx.act(g.mul(i, j), y)).collect())
            .collect()
    };
    let big_x = build(x);
    let big_xhat = build(xhat);
    let is_identity = |entry: &dyn Fn(usize, usize) -> AlgElement| {
        (0..n).all(|i| {
            (0..n).all(|j| {
                let e = entry(i, j);
                if i == j {
                    e == *ctx.one()
                } else {
                    e.is_zero()
                }
            })
        })
    };
    let xt_xhat = |i: usize, j: usize| {
        (0..n).fold(AlgElement::zero(n), |acc, k| {
            &acc + &ctx.mul(&big_x[k][i], &big_xhat[k][j])
        })
    };
    let xhat_xt = |i: usize, j: usize| {
        (0..n).fold(AlgElement::zero(n), |acc, k| {
            &acc + &ctx.mul(&big_xhat[i][k], &big_x[j][k])
        })
    };
    is_identity(&xt_xhat) && is_identity(&xhat_xt)
}

/// `h = Σ_g (Σ_ρ ρ(x_i)·g⁻¹ρ(x̂)) λ(g)` in `L[λ(G)]`.
pub fn build_h(hl: &HopfAlgebra<'_>, x_i: &AlgElement, xhat: &AlgElement) -> LNElement {
    let ctx = hl.ctx();
    let g = ctx.group();
    let rho_xi: Vec<AlgElement> = g.elements().map(|r| ctx.act(r, x_i)).collect();
    let coeffs = g
        .elements()
        .map(|k| {
            // λ(k) sends 1_G to k, so it sits at index k
            let ginv = g.inv(k);
            g.elements().fold(AlgElement::zero(ctx.dim()), |acc, r| {
                &acc + &ctx.mul(&rho_xi[r], &ctx.act(g.mul(ginv, r), xhat))
            })
        })
        .collect();
    LNElement::new(coeffs)
}

/// `a = Σ_g Tr(x_i·g(x̂)) g` in `K[G]`.
pub fn build_a(ctx: &GaloisContext, x_i: &AlgElement, xhat: &AlgElement) -> GroupAlgebraElement {
    GroupAlgebraElement::new(
        ctx.group()
            .elements()
            .map(|s| ctx.trace(&ctx.mul(x_i, &ctx.act(s, xhat))))
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    KgToHlambda,
    HlambdaToKg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    /// The constructed element lies in `H_λ`.
    Fixed,
    /// It sends `x` to `x_i`.
    Action,
    /// It sends every `x_j` into `B`.
    Integrality,
    /// Its value on `x_j` agrees with the opposite side's formula.
    Route,
    /// The constructed elements span the associated order.
    OrderBasis,
}

impl Claim {
    pub fn name(self) -> &'static str {
        match self {
            Claim::Fixed => "fixed",
            Claim::Action => "action",
            Claim::Integrality => "integrality",
            Claim::Route => "route",
            Claim::OrderBasis => "order-basis",
        }
    }
}

/// One verified check: `claim` for element `index` (and partner `j`, if any).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimRecord {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partner: Option<usize>,
    pub claim: Claim,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct TransferReport {
    pub direction: Direction,
    pub input_certificate: FreenessCertificate,
    pub output_elements: Vec<OrderElement>,
    pub claims: Vec<ClaimRecord>,
    pub output_certificate: FreenessCertificate,
    /// The associated order on the target side, which the output spans.
    pub target_order: OrderLattice,
}

fn fail(index: usize, claim: Claim, witness: String) -> Error {
    Error::ClaimFailed {
        index,
        claim: claim.name().to_string(),
        witness,
    }
}

fn check_input(
    setting: &Setting<'_>,
    b: &GStableLattice,
    cert: &FreenessCertificate,
    ambient: Ambient,
) -> Result<AlgElement> {
    if cert.ambient() != ambient {
        return Err(Error::Precondition(
            "certificate is for the other ambient".into(),
        ));
    }
    if !setting.revalidate(cert, b, None)? {
        return Err(Error::Precondition(
            "input certificate does not validate against B".into(),
        ));
    }
    setting.ctx().dual_generator(cert.generator())
}

fn record(claims: &mut Vec<ClaimRecord>, index: usize, partner: Option<usize>, claim: Claim) {
    claims.push(ClaimRecord {
        index,
        partner,
        claim,
        holds: true,
    });
}

fn check_order_basis(
    setting: &Setting<'_>,
    ambient: Ambient,
    b: &GStableLattice,
    coords: &[Vec<Scalar>],
) -> Result<OrderLattice> {
    let target = setting.associated_order(ambient, b)?;
    let n = setting.ctx().dim();
    let spanned = IntegralLattice::from_rational_rows(n, coords)
        .map_err(|e| fail(0, Claim::OrderBasis, format!("constructed elements: {e}")))?;
    if !spanned.equals(target.lattice())? {
        return Err(fail(
            0,
            Claim::OrderBasis,
            format!(
                "spanned lattice {spanned:?} differs from the associated order {:?}",
                target.lattice()
            ),
        ));
    }
    Ok(target)
}

/// From a `K[G]`-side certificate to an `H_λ`-side one.
pub fn transfer_kg_to_hlambda(
    setting: &Setting<'_>,
    b: &GStableLattice,
    cert: &FreenessCertificate,
) -> Result<TransferReport> {
    let xhat = check_input(setting, b, cert, Ambient::Kg)?;
    let ctx = setting.ctx();
    let hl = setting.hlambda();
    let x = cert.generator();
    let xs = cert.images();
    let a: Vec<&GroupAlgebraElement> = cert
        .order_basis()
        .iter()
        .map(|e| match e {
            OrderElement::Kg(z) => Ok(z),
            OrderElement::Hopf(_) => Err(Error::Precondition("mixed certificate".into())),
        })
        .collect::<Result<_>>()?;
    let mut claims = Vec::new();
    let mut hs = Vec::with_capacity(xs.len());
    let mut coords = Vec::with_capacity(xs.len());
    for (i, x_i) in xs.iter().enumerate() {
        let h = hl.verify(build_h(hl, x_i, &xhat)).map_err(|e| match e {
            Error::NotFixed { g } => fail(
                i,
                Claim::Fixed,
                format!("twisting by {} changes h", ctx.group().label(g)),
            ),
            other => other,
        })?;
        record(&mut claims, i, None, Claim::Fixed);
        let hx = hl.act(&h, x)?;
        if hx != *x_i {
            return Err(fail(
                i,
                Claim::Action,
                format!("h·x = {hx:?}, expected {x_i:?}"),
            ));
        }
        record(&mut claims, i, None, Claim::Action);
        for (j, x_j) in xs.iter().enumerate() {
            let direct = hl.act(&h, x_j)?;
            let route = kg_act(ctx, a[j], x_i);
            if direct != route {
                return Err(fail(
                    i,
                    Claim::Route,
                    format!("j = {j}: h·x_j = {direct:?}, a_j(x_i) = {route:?}"),
                ));
            }
            record(&mut claims, i, Some(j), Claim::Route);
            if !b.contains(&direct)? {
                return Err(fail(
                    i,
                    Claim::Integrality,
                    format!("j = {j}: h·x_j = {direct:?} is outside B"),
                ));
            }
            record(&mut claims, i, Some(j), Claim::Integrality);
        }
        coords.push(hl.coordinates(h.value())?);
        hs.push(h);
    }
    let target = check_order_basis(setting, Ambient::Hlambda, b, &coords)?;
    record(&mut claims, 0, None, Claim::OrderBasis);
    let out = FreenessCertificate::new(
        Ambient::Hlambda,
        x.clone(),
        hs.iter().cloned().map(OrderElement::Hopf).collect(),
        xs.to_vec(),
    );
    if !setting.revalidate(&out, b, Some(&target))? {
        return Err(Error::Internal(
            "transferred certificate does not revalidate".into(),
        ));
    }
    Ok(TransferReport {
        direction: Direction::KgToHlambda,
        input_certificate: cert.clone(),
        output_elements: hs.into_iter().map(OrderElement::Hopf).collect(),
        claims,
        output_certificate: out,
        target_order: target,
    })
}

/// From an `H_λ`-side certificate to a `K[G]`-side one.
pub fn transfer_hlambda_to_kg(
    setting: &Setting<'_>,
    b: &GStableLattice,
    cert: &FreenessCertificate,
) -> Result<TransferReport> {
    let xhat = check_input(setting, b, cert, Ambient::Hlambda)?;
    let ctx = setting.ctx();
    let hl = setting.hlambda();
    let x = cert.generator();
    let xs = cert.images();
    let hs: Vec<_> = cert
        .order_basis()
        .iter()
        .map(|e| match e {
            OrderElement::Hopf(h) => Ok(h),
            OrderElement::Kg(_) => Err(Error::Precondition("mixed certificate".into())),
        })
        .collect::<Result<_>>()?;
    let mut claims = Vec::new();
    let mut as_ = Vec::with_capacity(xs.len());
    for (i, x_i) in xs.iter().enumerate() {
        let a = build_a(ctx, x_i, &xhat);
        let ax = kg_act(ctx, &a, x);
        if ax != *x_i {
            return Err(fail(
                i,
                Claim::Action,
                format!("a·x = {ax:?}, expected {x_i:?}"),
            ));
        }
        record(&mut claims, i, None, Claim::Action);
        for (j, x_j) in xs.iter().enumerate() {
            let direct = kg_act(ctx, &a, x_j);
            let route = hl.act(hs[j], x_i)?;
            if direct != route {
                return Err(fail(
                    i,
                    Claim::Route,
                    format!("j = {j}: a(x_j) = {direct:?}, h_j·x_i = {route:?}"),
                ));
            }
            record(&mut claims, i, Some(j), Claim::Route);
            if !b.contains(&direct)? {
                return Err(fail(
                    i,
                    Claim::Integrality,
                    format!("j = {j}: a(x_j) = {direct:?} is outside B"),
                ));
            }
            record(&mut claims, i, Some(j), Claim::Integrality);
        }
        as_.push(a);
    }
    let coords: Vec<Vec<Scalar>> = as_.iter().map(|a| a.coeffs().to_vec()).collect();
    let target = check_order_basis(setting, Ambient::Kg, b, &coords)?;
    record(&mut claims, 0, None, Claim::OrderBasis);
    let out = FreenessCertificate::new(
        Ambient::Kg,
        x.clone(),
        as_.iter().cloned().map(OrderElement::Kg).collect(),
        xs.to_vec(),
    );
    if !setting.revalidate(&out, b, Some(&target))? {
        return Err(Error::Internal(
            "transferred certificate does not revalidate".into(),
        ));
    }
    Ok(TransferReport {
        direction: Direction::HlambdaToKg,
        input_certificate: cert.clone(),
        output_elements: as_.into_iter().map(OrderElement::Kg).collect(),
        claims,
        output_certificate: out,
        target_order: target,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    BothFree,
    NeitherFound,
    Contradiction,
}

/// Search, certify and transfer starting from one side.
#[derive(Debug, Clone)]
pub struct SideRun {
    pub generator: Option<AlgElement>,
    pub certificate: Option<FreenessCertificate>,
    /// Transfer to the other side, then back again.
    pub there: Option<TransferReport>,
    pub back: Option<TransferReport>,
}

#[derive(Debug, Clone)]
pub struct MainReport {
    pub kg_order: OrderLattice,
    pub hlambda_order: OrderLattice,
    pub kg: SideRun,
    pub hlambda: SideRun,
    pub verdict: Verdict,
    pub contradiction: Option<String>,
}

type TransferFn = fn(&Setting<'_>, &GStableLattice, &FreenessCertificate) -> Result<TransferReport>;

fn run_side(
    setting: &Setting<'_>,
    b: &GStableLattice,
    a: &OrderLattice,
    bound: u32,
) -> Result<(SideRun, Option<String>)> {
    let mut run = SideRun {
        generator: setting.search_generator(a, b, bound)?,
        certificate: None,
        there: None,
        back: None,
    };
    let Some(x) = run.generator.clone() else {
        return Ok((run, None));
    };
    let cert = setting
        .verify_freeness(a, b, &x)?
        .ok_or_else(|| Error::Internal("search result does not verify".into()))?;
    run.certificate = Some(cert.clone());
    let (forward, backward): (TransferFn, TransferFn) = match a.ambient() {
        Ambient::Kg => (transfer_kg_to_hlambda, transfer_hlambda_to_kg),
        Ambient::Hlambda => (transfer_hlambda_to_kg, transfer_kg_to_hlambda),
    };
    let there = match forward(setting, b, &cert) {
        Ok(r) => r,
        Err(e) => {
            return Ok((
                run,
                Some(format!("transfer from {:?} failed: {e}", a.ambient())),
            ))
        }
    };
    let back = match backward(setting, b, &there.output_certificate) {
        Ok(r) => r,
        Err(e) => {
            return Ok((
                run,
                Some(format!("round trip to {:?} failed: {e}", a.ambient())),
            ))
        }
    };
    let mismatch =
        (back.target_order != *a).then(|| "round trip changed the associated order".to_string());
    run.there = Some(there);
    run.back = Some(back);
    Ok((run, mismatch))
}

/// Searches both sides for a generator within `bound` and transfers whatever
/// is found. The two searches use the same candidate order, so a correct
/// implementation must find the same first generator on both sides.
pub fn theorem_main_check(
    setting: &Setting<'_>,
    b: &GStableLattice,
    bound: u32,
) -> Result<MainReport> {
    let kg_order = setting.associated_order(Ambient::Kg, b)?;
    let hlambda_order = setting.associated_order(Ambient::Hlambda, b)?;
    let (kg, kg_problem) = run_side(setting, b, &kg_order, bound)?;
    let (hlambda, hl_problem) = run_side(setting, b, &hlambda_order, bound)?;
    let mut contradiction = kg_problem.or(hl_problem);
    if contradiction.is_none() && kg.generator != hlambda.generator {
        contradiction = Some(format!(
            "first generator differs: K[G] side {:?}, H_λ side {:?}",
            kg.generator, hlambda.generator
        ));
    }
    let verdict = if contradiction.is_some() {
        Verdict::Contradiction
    } else if kg.generator.is_some() {
        Verdict::BothFree
    } else {
        Verdict::NeitherFound
    };
    Ok(MainReport {
        kg_order,
        hlambda_order,
        kg,
        hlambda,
        verdict,
        contradiction,
    })
}
