//! Fixture loading, the four batch commands, and report rendering for the
//! `hgs` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Error;
use crate::exact::IntegralLattice;
use crate::galois::{ContextDoc, GaloisContext};
use crate::groups::{
    enumerate_regular_subgroups, left_regular, normalizes, right_regular, FiniteGroup,
};
use crate::nbg::generator_verdicts;
use crate::orders::{
    check_g_stable, Ambient, CertificateDoc, GStableLattice, OrderDoc, OrderElement,
    OrderElementDoc, Setting,
};
use crate::transfer::{theorem_main_check, SideRun, TransferReport, Verdict};

/// Coordinates of random samples are drawn from `[-SAMPLE_BOUND, SAMPLE_BOUND]`.
pub const SAMPLE_BOUND: i64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Enumerate,
    Nbg,
    Theorem,
    HopfOrder,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Enumerate => "enumerate",
            Command::Nbg => "nbg",
            Command::Theorem => "theorem",
            Command::HopfOrder => "hopf-order",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub fixture: PathBuf,
    pub seed: u64,
    pub samples: usize,
    #[serde(rename = "box")]
    pub search_box: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify_only: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command, fixture: impl Into<PathBuf>) -> Self {
        RunConfig {
            command,
            fixture: fixture.into(),
            seed: 0,
            samples: 200,
            search_box: 2,
            out: None,
            format: Format::Json,
            verify_only: None,
        }
    }
}

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Success,
    Io,
    FixtureInvalid,
    BudgetExceeded,
    Contradiction,
    NotFound,
    CertificateRejected,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Io => 1,
            Status::FixtureInvalid => 2,
            Status::BudgetExceeded => 3,
            Status::Contradiction => 4,
            Status::NotFound => 5,
            Status::CertificateRejected => 6,
        }
    }
}

/// A command that could not produce a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl Failure {
    fn new(status: Status, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }

    fn fixture(e: impl std::fmt::Display) -> Self {
        Failure::new(Status::FixtureInvalid, format!("fixture invalid: {e}"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::BudgetExceeded { .. } => Status::BudgetExceeded,
            Error::Internal(_) | Error::ClaimFailed { .. } => Status::Contradiction,
            _ => Status::FixtureInvalid,
        };
        Failure::new(status, e.to_string())
    }
}

pub struct Report {
    pub config: RunConfig,
    pub status: Status,
    pub summary: Vec<(String, String)>,
    pub result: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        let doc = json!({
            "tool": "hgs",
            "version": env!("CARGO_PKG_VERSION"),
            "config": self.config,
            "status": self.status,
            "summary": self.summary.iter().cloned().collect::<BTreeMap<_, _>>(),
            "result": self.result,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# hgs {}\n", self.config.command.name());
        let _ = writeln!(s, "| setting | value |\n|---|---|");
        let _ = writeln!(s, "| fixture | `{}` |", self.config.fixture.display());
        let _ = writeln!(s, "| seed | {} |", self.config.seed);
        let _ = writeln!(s, "| samples | {} |", self.config.samples);
        let _ = writeln!(s, "| box | {} |", self.config.search_box);
        if let Some(v) = &self.config.verify_only {
            let _ = writeln!(s, "| verify-only | `{}` |", v.display());
        }
        let _ = writeln!(s, "\n## Summary\n");
        let _ = writeln!(
            s,
            "- status: {}",
            serde_json::to_value(self.status)
                .unwrap()
                .as_str()
                .unwrap_or("")
        );
        for (k, v) in &self.summary {
            let _ = writeln!(s, "- {k}: {v}");
        }
        let _ = writeln!(
            s,
            "\n## Details\n\n```json\n{}\n```",
            serde_json::to_string_pretty(&self.result).expect("reports serialize")
        );
        s
    }

    pub fn render(&self) -> String {
        match self.config.format {
            Format::Json => self.to_json(),
            Format::Markdown => self.to_markdown(),
        }
    }
}

/// A context document with an optional lattice `B` and an optional
/// hand-built order to examine.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureDoc {
    #[serde(flatten)]
    pub context: ContextDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<IntegralLattice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderDoc>,
}

pub struct Fixture {
    pub ctx: GaloisContext,
    pub lattice: Option<IntegralLattice>,
    pub order: Option<OrderDoc>,
}

impl Fixture {
    fn stable_lattice(&self) -> Result<GStableLattice, Failure> {
        let b = self
            .lattice
            .as_ref()
            .ok_or_else(|| Failure::fixture("this command needs a \"lattice\" entry"))?;
        check_g_stable(&self.ctx, b).map_err(Failure::fixture)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(Status::Io, format!("{}: {e}", path.display())))
}

pub fn load_fixture(path: &Path) -> Result<Fixture, Failure> {
    let doc: FixtureDoc = serde_json::from_str(&read(path)?).map_err(Failure::fixture)?;
    let ctx = GaloisContext::load(doc.context).map_err(Failure::fixture)?;
    Ok(Fixture {
        ctx,
        lattice: doc.lattice,
        order: doc.order,
    })
}

pub fn run(config: &RunConfig) -> Result<Report, Failure> {
    if config.samples == 0 {
        return Err(Failure::new(
            Status::FixtureInvalid,
            "sample count must be at least 1",
        ));
    }
    let fixture = load_fixture(&config.fixture)?;
    let (status, summary, result) = match (config.command, &config.verify_only) {
        (Command::Theorem, Some(report)) => verify_only(&fixture, &read(report)?)?,
        (_, Some(_)) => {
            return Err(Failure::new(
                Status::FixtureInvalid,
                "--verify-only applies to the theorem command",
            ))
        }
        (Command::Enumerate, None) => cmd_enumerate(fixture.ctx.group())?,
        (Command::Nbg, None) => cmd_nbg(&fixture.ctx, config.seed, config.samples),
        (Command::Theorem, None) => cmd_theorem(&fixture, config.search_box)?,
        (Command::HopfOrder, None) => cmd_hopf_order(&fixture)?,
    };
    Ok(Report {
        config: config.clone(),
        status,
        summary,
        result,
    })
}

type Outcome = (Status, Vec<(String, String)>, Value);

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

pub fn cmd_enumerate(group: &FiniteGroup) -> Result<Outcome, Failure> {
    let census = enumerate_regular_subgroups(group)?;
    let lam = left_regular(group);
    let rho = right_regular(group);
    let rows: Vec<Value> = census
        .iter()
        .enumerate()
        .map(|(i, n)| {
            json!({
                "index": i,
                "images": n.image_vectors(),
                "abelian": n.is_abelian(),
                "lambda": n.same_set(&lam),
                "rho": n.same_set(&rho),
                "normalized": normalizes(n, group),
            })
        })
        .collect();
    let summary = vec![
        kv("group order", group.order()),
        kv("regular subgroups normalized by λ(G)", census.len()),
        kv("λ(G) = ρ(G)", lam.same_set(&rho)),
    ];
    Ok((
        Status::Success,
        summary,
        json!({ "count": census.len(), "subgroups": rows }),
    ))
}

pub fn cmd_nbg(ctx: &GaloisContext, seed: u64, samples: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(samples);
    let mut agree = 0;
    let mut generators = 0;
    for sample in 0..samples {
        let x = ctx.random_element(&mut rng, SAMPLE_BOUND);
        let (lam, rho) = generator_verdicts(ctx, &x);
        agree += usize::from(lam == rho);
        generators += usize::from(lam);
        rows.push(json!({
            "sample": sample,
            "seed": seed,
            "x": x,
            "lambda": lam,
            "rho": rho,
            "agree": lam == rho,
        }));
    }
    let status = if agree == samples {
        Status::Success
    } else {
        Status::Contradiction
    };
    let summary = vec![
        kv("agreement", format!("{agree}/{samples}")),
        kv("generators (λ side)", format!("{generators}/{samples}")),
    ];
    (
        status,
        summary,
        json!({ "agreement": agree, "samples": rows }),
    )
}

fn element_doc(setting: &Setting<'_>, e: &OrderElement) -> OrderElementDoc {
    match e {
        OrderElement::Kg(z) => OrderElementDoc::Kg(z.clone()),
        OrderElement::Hopf(h) => OrderElementDoc::Hopf(setting.hlambda().to_doc(h)),
    }
}

fn transfer_doc(setting: &Setting<'_>, r: &TransferReport) -> Value {
    json!({
        "direction": r.direction,
        "claims_checked": r.claims.len(),
        "claims": r.claims,
        "output_elements": r.output_elements.iter().map(|e| element_doc(setting, e)).collect::<Vec<_>>(),
        "target_order": r.target_order.to_doc(),
    })
}

fn side_doc(setting: &Setting<'_>, s: &SideRun) -> Value {
    json!({
        "generator": s.generator,
        "transfer": s.there.as_ref().map(|r| transfer_doc(setting, r)),
        "round_trip": s.back.as_ref().map(|r| transfer_doc(setting, r)),
    })
}

fn certificates(setting: &Setting<'_>, label: &str, s: &SideRun) -> Vec<Value> {
    let mut out = Vec::new();
    let mut push = |tag: &str, c: &crate::orders::FreenessCertificate| {
        out.push(json!({ "label": format!("{label}-{tag}"), "certificate": setting.certificate_to_doc(c) }));
    };
    if let Some(c) = &s.certificate {
        push("search", c);
    }
    if let Some(r) = &s.there {
        push("transfer", &r.output_certificate);
    }
    if let Some(r) = &s.back {
        push("round-trip", &r.output_certificate);
    }
    out
}

pub fn cmd_theorem(fixture: &Fixture, search_box: u32) -> Result<Outcome, Failure> {
    let b = fixture.stable_lattice()?;
    let setting = Setting::new(&fixture.ctx)?;
    let r = theorem_main_check(&setting, &b, search_box)?;
    let status = match r.verdict {
        Verdict::BothFree => Status::Success,
        Verdict::NeitherFound => Status::NotFound,
        Verdict::Contradiction => Status::Contradiction,
    };
    let mut certs = certificates(&setting, "kg", &r.kg);
    certs.extend(certificates(&setting, "hlambda", &r.hlambda));
    let summary = vec![
        kv("verdict", to_value(r.verdict).as_str().unwrap_or_default()),
        kv("K[G] generator", format!("{:?}", r.kg.generator)),
        kv("H_λ generator", format!("{:?}", r.hlambda.generator)),
        kv("certificates", certs.len()),
    ];
    let result = json!({
        "verdict": r.verdict,
        "contradiction": r.contradiction,
        "lattice": b.lattice(),
        "kg_order": r.kg_order.to_doc(),
        "hlambda_order": r.hlambda_order.to_doc(),
        "kg": side_doc(&setting, &r.kg),
        "hlambda": side_doc(&setting, &r.hlambda),
        "certificates": certs,
    });
    Ok((status, summary, result))
}

#[derive(Deserialize)]
struct LabeledCertificate {
    label: String,
    certificate: CertificateDoc,
}

/// Re-checks every certificate in a theorem report against the fixture.
pub fn verify_only(fixture: &Fixture, report: &str) -> Result<Outcome, Failure> {
    let b = fixture.stable_lattice()?;
    let setting = Setting::new(&fixture.ctx)?;
    let doc: Value = serde_json::from_str(report)
        .map_err(|e| Failure::new(Status::CertificateRejected, format!("report: {e}")))?;
    let list = doc
        .pointer("/result/certificates")
        .cloned()
        .ok_or_else(|| Failure::new(Status::CertificateRejected, "report has no certificates"))?;
    let list: Vec<LabeledCertificate> = serde_json::from_value(list)
        .map_err(|e| Failure::new(Status::CertificateRejected, format!("certificates: {e}")))?;
    let kg = setting.associated_order(Ambient::Kg, &b)?;
    let hl = setting.associated_order(Ambient::Hlambda, &b)?;
    let mut rows = Vec::new();
    let mut valid = 0;
    for item in &list {
        let verdict = setting
            .certificate_from_doc(&item.certificate)
            .and_then(|c| {
                let a = if c.ambient() == Ambient::Kg { &kg } else { &hl };
                setting.revalidate(&c, &b, Some(a))
            });
        let ok = matches!(verdict, Ok(true));
        valid += usize::from(ok);
        rows.push(json!({
            "label": item.label,
            "valid": ok,
            "error": verdict.err().map(|e| e.to_string()),
        }));
    }
    let status = if valid == list.len() {
        Status::Success
    } else {
        Status::CertificateRejected
    };
    let summary = vec![kv("valid certificates", format!("{valid}/{}", list.len()))];
    Ok((
        status,
        summary,
        json!({ "checked": list.len(), "valid": valid, "certificates": rows }),
    ))
}

pub fn cmd_hopf_order(fixture: &Fixture) -> Result<Outcome, Failure> {
    let b = fixture.stable_lattice()?;
    let setting = Setting::new(&fixture.ctx)?;
    let kg = setting.associated_order(Ambient::Kg, &b)?;
    let hl = setting.associated_order(Ambient::Hlambda, &b)?;
    let kg_hopf = setting.is_hopf_order(&kg)?;
    let hl_hopf = setting.is_hopf_order(&hl)?;
    let mut summary = vec![
        kv("K[G] associated order is Hopf", kg_hopf),
        kv("H_λ associated order is Hopf", hl_hopf),
    ];
    let mut result = json!({
        "kg_order": kg.to_doc(),
        "kg_hopf": kg_hopf,
        "hlambda_order": hl.to_doc(),
        "hlambda_hopf": hl_hopf,
    });
    if let Some(doc) = &fixture.order {
        let order = setting.order_from_lattice(doc.ambient, doc.lattice.clone())?;
        if !order.ring_verified() {
            return Err(Failure::fixture("the supplied order is not a unital ring"));
        }
        let hopf = setting.is_hopf_order(&order)?;
        summary.push(kv("supplied order is Hopf", hopf));
        result["supplied_order"] = json!({ "order": order.to_doc(), "hopf": hopf });
    }
    Ok((Status::Success, summary, result))
}
