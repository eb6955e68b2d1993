use rayon::prelude::*;
use serde_json::{json, Value};

use super::certificate::{ring_name, CertifiedMembership};
use super::context::RelatorContext;
use super::generators::GenKind;
use super::{k_on_letters, psi_xq_word, smoothing, RelatorParams};
use crate::error::{Error, Result};
use crate::freealg::AssocPoly;
use crate::lie::delta;
use crate::linalg::Ring;
use crate::perm::Perm;

/// One certified claim "target ∈ lattice of generators".
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipCheck {
    pub claim: String,
    pub kind: GenKind,
    pub n: usize,
    pub m_max: usize,
    pub ring: Ring,
    pub result: CertifiedMembership,
    /// Outcome of the independent ℚ elimination, when it was run.
    pub rational: Option<CertifiedMembership>,
}

impl MembershipCheck {
    pub fn passed(&self) -> bool {
        self.result.is_verified_member()
            && self.rational.as_ref().is_none_or(CertifiedMembership::is_verified_member)
    }

    /// A ℤ (or ℤ_(p)) certificate exists but the ℚ route disagrees: an internal inconsistency.
    pub fn routes_disagree(&self) -> bool {
        self.result.is_verified_member()
            && self.rational.as_ref().is_some_and(|r| !r.is_verified_member())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "claim": self.claim,
            "lattice": lattice_name(self.kind, self.m_max),
            "n": self.n,
            "ring": ring_name(self.ring),
            "passed": self.passed(),
            "certificate": self.result.to_json(),
            "rational_route": self.rational.as_ref().map(CertifiedMembership::is_verified_member),
        })
    }

    pub fn to_text(&self) -> String {
        format!(
            "{} [{}, ring {}]: {}\n  {}",
            self.claim,
            lattice_name(self.kind, self.m_max),
            ring_name(self.ring),
            if self.passed() { "PASS" } else { "FAIL" },
            self.result.to_text()
        )
    }
}

fn lattice_name(kind: GenKind, m_max: usize) -> String {
    match kind {
        GenKind::I => format!("I_{m_max}"),
        GenKind::Gamma => format!("Gamma_{m_max}"),
    }
}

fn ensure_q(ctx: &RelatorContext, params: &RelatorParams) -> Result<()> {
    if ctx.q != params.q {
        return Err(Error::InvalidParams(format!("context built for q = {}, asked for q = {}", ctx.q, params.q)));
    }
    Ok(())
}

fn check(
    ctx: &RelatorContext,
    claim: String,
    kind: GenKind,
    n: usize,
    target: &AssocPoly,
    ring: Ring,
) -> Result<MembershipCheck> {
    let m_max = n - 1;
    let result = ctx.certify(kind, n, m_max, target, ring)?;
    let rational = if ctx.dual_route { Some(ctx.certify_rational(kind, n, m_max, target)?) } else { None };
    Ok(MembershipCheck { claim, kind, n, m_max, ring, result, rational })
}

/// K_n(x₂, …, x_n, x₁).
fn k_rotated(params: &RelatorParams) -> AssocPoly {
    let n = params.n as u32;
    let letters: Vec<u32> = (2..=n).chain(std::iter::once(1)).collect();
    k_on_letters(params.q, &letters).into_poly()
}

fn k_identity(params: &RelatorParams) -> AssocPoly {
    let letters: Vec<u32> = (1..=params.n as u32).collect();
    k_on_letters(params.q, &letters).into_poly()
}

/// δ(ψ_{X^q}(x₁…x_n)) − K_n(x₂,…,x_n,x₁) ∈ I_{n−1}.
pub fn check_lemma11(ctx: &RelatorContext, params: &RelatorParams) -> Result<MembershipCheck> {
    ensure_q(ctx, params)?;
    if params.n < 2 {
        return Err(Error::InvalidParams("lemma 11 needs n >= 2".into()));
    }
    let target = &delta(&psi_xq_word(params)).into_poly() - &k_rotated(params);
    check(ctx, "delta(psi_{X^q}(x1..xn)) - K_n(x2,..,xn,x1)".into(), GenKind::I, params.n, &target, params.ring)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma12Report {
    pub membership: MembershipCheck,
    /// z_n − ψ_{X^q}(x₁…x_n) ∈ Γ_{n−1}.
    pub smoothing: MembershipCheck,
}

impl Lemma12Report {
    pub fn passed(&self) -> bool {
        self.membership.passed() && self.smoothing.passed()
    }

    pub fn to_json(&self) -> Value {
        json!({ "passed": self.passed(), "membership": self.membership.to_json(), "smoothing": self.smoothing.to_json() })
    }

    pub fn to_text(&self) -> String {
        format!("{}\n{}", self.membership.to_text(), self.smoothing.to_text())
    }
}

/// ψ_{X^q}(x₁…x_n) − K_n(x₂,…,x_n,x₁) ∈ Γ_{n−1}, with the smoothing cross-check.
pub fn check_lemma12(ctx: &RelatorContext, params: &RelatorParams) -> Result<Lemma12Report> {
    ensure_q(ctx, params)?;
    let psi = psi_xq_word(params);
    let target = &psi - &k_rotated(params);
    let membership =
        check(ctx, "psi_{X^q}(x1..xn) - K_n(x2,..,xn,x1)".into(), GenKind::Gamma, params.n, &target, params.ring)?;
    let z = smoothing(params)?;
    let target = z.z_n.poly() - &psi;
    let smoothing = check(ctx, "z_n - psi_{X^q}(x1..xn)".into(), GenKind::Gamma, params.n, &target, params.ring)?;
    Ok(Lemma12Report { membership, smoothing })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma14Report {
    pub pi: Perm,
    pub psi: MembershipCheck,
    pub k: MembershipCheck,
}

impl Lemma14Report {
    pub fn passed(&self) -> bool {
        self.psi.passed() && self.k.passed()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pi": self.pi.to_string(),
            "passed": self.passed(),
            "psi": self.psi.to_json(),
            "k": self.k.to_json(),
        })
    }

    pub fn to_text(&self) -> String {
        format!("pi = {}\n{}\n{}", self.pi, self.psi.to_text(), self.k.to_text())
    }
}

/// ψ_{X^q}(x_{π1}…x_{πn}) − ψ_{X^q}(x₁…x_n) ∈ Γ_{n−1} and
/// K_n(x_{π1},…,x_{πn}) − K_n(x₁,…,x_n) ∈ I_{n−1}.
pub fn check_lemma14(ctx: &RelatorContext, params: &RelatorParams, pi: &Perm) -> Result<Lemma14Report> {
    ensure_q(ctx, params)?;
    if params.n < 2 {
        return Err(Error::InvalidParams("lemma 14 needs n >= 2".into()));
    }
    if pi.degree() != params.n {
        return Err(Error::ArityMismatch { expected: params.n, got: pi.degree() });
    }
    let psi = psi_xq_word(params);
    let psi_pi = psi.rename(|i| pi.apply(i as usize) as u32);
    let psi_check = check(
        ctx,
        format!("psi_{{X^q}}(x_pi) - psi_{{X^q}}(x1..xn), pi = {pi}"),
        GenKind::Gamma,
        params.n,
        &(&psi_pi - &psi),
        params.ring,
    )?;
    let k_pi = k_on_letters(params.q, &pi.one_line_1based()).into_poly();
    let k_check = check(
        ctx,
        format!("K_n(x_pi) - K_n(x1..xn), pi = {pi}"),
        GenKind::I,
        params.n,
        &(&k_pi - &k_identity(params)),
        params.ring,
    )?;
    Ok(Lemma14Report { pi: pi.clone(), psi: psi_check, k: k_check })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem1Status {
    /// Certified in the requested ring.
    Verified,
    /// Integral membership failed but ℚ membership holds.
    RationalOnly,
    /// Not even in the ℚ-span.
    Refuted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Report {
    pub params: RelatorParams,
    pub status: Theorem1Status,
    pub primary: MembershipCheck,
    /// The ℚ check, run when the requested ring failed.
    pub fallback: Option<MembershipCheck>,
}

impl Theorem1Report {
    pub fn passed(&self) -> bool {
        self.status == Theorem1Status::Verified
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.params.p,
            "q": self.params.q,
            "n": self.params.n,
            "status": match self.status {
                Theorem1Status::Verified => "verified",
                Theorem1Status::RationalOnly => "rational-only",
                Theorem1Status::Refuted => "refuted",
            },
            "passed": self.passed(),
            "membership": self.primary.to_json(),
            "fallback": self.fallback.as_ref().map(MembershipCheck::to_json),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = self.primary.to_text();
        if let Some(f) = &self.fallback {
            s.push_str("\nfallback over Q:\n");
            s.push_str(&f.to_text());
        }
        s
    }
}

/// K_n(x₁,…,x_n) ∈ I_{n−1}, gated on n ≢ 1 mod (p−1).
pub fn theorem1_verify(ctx: &RelatorContext, params: &RelatorParams) -> Result<Theorem1Report> {
    ensure_q(ctx, params)?;
    params.check_hypothesis()?;
    let target = k_identity(params);
    let primary = check(ctx, "K_n(x1..xn)".into(), GenKind::I, params.n, &target, params.ring)?;
    if primary.passed() {
        return Ok(Theorem1Report { params: *params, status: Theorem1Status::Verified, primary, fallback: None });
    }
    let fallback = if params.ring == Ring::Q {
        None
    } else {
        Some(check(ctx, "K_n(x1..xn)".into(), GenKind::I, params.n, &target, Ring::Q)?)
    };
    let status = match &fallback {
        Some(f) if f.result.is_verified_member() => Theorem1Status::RationalOnly,
        _ => Theorem1Status::Refuted,
    };
    Ok(Theorem1Report { params: *params, status, primary, fallback })
}

/// δ(g) ∈ I_{n−1} for every generator g of Γ_{n−1}; returns the labels of the failures.
pub fn check_delta_gamma(ctx: &RelatorContext, n: usize) -> Result<DeltaGammaReport> {
    if n < 2 {
        return Err(Error::InvalidParams("needs n >= 2".into()));
    }
    let gamma = ctx.generators(GenKind::Gamma, n, n - 1)?;
    ctx.certify(GenKind::I, n, n - 1, &AssocPoly::zero(), Ring::Z)?;
    let outcomes: Vec<Result<Option<String>>> = (0..gamma.len())
        .into_par_iter()
        .map(|i| {
            let image = delta(&gamma.evaluate(i)).into_poly();
            let r = ctx.certify(GenKind::I, n, n - 1, &image, Ring::Z)?;
            Ok((!r.is_verified_member()).then(|| gamma.label(i)))
        })
        .collect();
    let mut failures = Vec::new();
    for o in outcomes {
        if let Some(l) = o? {
            failures.push(l);
        }
    }
    Ok(DeltaGammaReport { n, checked: gamma.len(), failures })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaGammaReport {
    pub n: usize,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl DeltaGammaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}
