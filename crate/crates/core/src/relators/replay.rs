use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::certificate::{Certificate, CertifiedMembership};
use super::checks::theorem1_verify;
use super::context::RelatorContext;
use super::generators::{GammaProduct, GenKind, Generator, KInstance};
use super::{k_on_letters, psi_xq_word, RelatorParams};
use crate::error::{Error, Result};
use crate::freealg::AssocPoly;
use crate::lie::delta;
use crate::linalg::{MembershipCertificate, Ring};
use crate::opalg::{eta_op, GroupRingElem, OperatorR};
use crate::perm::Perm;
use crate::rational::{q_big, Q};

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayStep {
    pub label: &'static str,
    pub claim: &'static str,
    pub passed: bool,
    pub detail: Value,
    /// Present when the step failed on a concrete element.
    pub residual: Option<String>,
}

impl ReplayStep {
    pub fn to_json(&self) -> Value {
        json!({
            "step": self.label,
            "claim": self.claim,
            "passed": self.passed,
            "detail": self.detail,
            "residual": self.residual,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayReport {
    pub params: RelatorParams,
    pub k: BigInt,
    pub steps: Vec<ReplayStep>,
    /// K_n ∈ I_{n−1} obtained through δ(Γ_{n−1}).
    pub final_certificate: Option<Certificate>,
    /// The independent direct certificate.
    pub theorem1_certificate: Option<Certificate>,
}

pub const STEP_COUNT: usize = 7;

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.steps.len() == STEP_COUNT && self.steps.iter().all(|s| s.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.params.p,
            "q": self.params.q,
            "n": self.params.n,
            "k": self.k.to_string(),
            "passed": self.passed(),
            "steps": self.steps.iter().map(ReplayStep::to_json).collect::<Vec<_>>(),
            "final_certificate": self.final_certificate.as_ref().map(Certificate::to_json),
            "theorem1_certificate": self.theorem1_certificate.as_ref().map(Certificate::to_json),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("k = {}\n", self.k);
        for s in &self.steps {
            out.push_str(&format!("({}) {}: {}\n", s.label, s.claim, if s.passed { "PASS" } else { "FAIL" }));
            if let Some(r) = &s.residual {
                out.push_str(&format!("    residual: {r}\n"));
            }
        }
        if let Some(c) = &self.final_certificate {
            out.push_str(&format!("via delta: {}\n", c.to_text()));
        }
        if let Some(c) = &self.theorem1_certificate {
            out.push_str(&format!("direct:    {}\n", c.to_text()));
        }
        out
    }
}

struct Replay<'a> {
    ctx: &'a RelatorContext,
    params: RelatorParams,
    steps: Vec<ReplayStep>,
}

impl Replay<'_> {
    /// Records a step; returns false if the replay must halt.
    fn record(&mut self, label: &'static str, claim: &'static str, passed: bool, detail: Value, residual: Option<String>) -> bool {
        self.steps.push(ReplayStep { label, claim, passed, detail, residual });
        passed
    }

    fn gamma_certificate(&self, target: &AssocPoly) -> Result<CertifiedMembership> {
        let n = self.params.n;
        self.ctx.certify(GenKind::Gamma, n, n - 1, target, Ring::Z)
    }
}

fn residual_of(m: &CertifiedMembership) -> Option<String> {
    match m {
        CertifiedMembership::Member(c) if c.verified => None,
        CertifiedMembership::Member(c) => Some(format!("certificate for {} does not replay", c.target)),
        CertifiedMembership::NotMember { residual, .. } => Some(residual.to_string()),
    }
}

/// ψ_w(x₁…x_n) with the letters permuted by each π of the action of `op`.
fn permuted_word_image(op: &OperatorR, n: usize, image: &AssocPoly) -> Result<AssocPoly> {
    let mut out = AssocPoly::zero();
    for (p, c) in op.action(n)? {
        out.add_scaled(&image.rename(|i| p.apply(i as usize) as u32), &c);
    }
    Ok(out)
}

/// Replays the argument that K_n ∈ I_{n−1} when n ≢ 1 mod (p−1):
/// (a) σ_n(η′) is integral with coefficient sum 0; (b) η′(K_n) = kK_n;
/// (c) η′(ψ_{X^q}(x₁…x_n)) ∈ Γ_{n−1}; (d) η′(a) ∈ Γ_{n−1} for a = K_n − ψ_{X^q}(x₁…x_n);
/// (e) kK_n, qK_n ∈ Γ_{n−1}; (f) K_n ∈ Γ_{n−1}; (g) K_n = δ(K_n) ∈ I_{n−1}.
pub fn proof_replay(ctx: &RelatorContext, params: &RelatorParams) -> Result<ReplayReport> {
    if ctx.q != params.q {
        return Err(Error::InvalidParams(format!("context built for q = {}, asked for q = {}", ctx.q, params.q)));
    }
    params.check_hypothesis()?;
    let n = params.n;
    let params = params.with_ring(Ring::Z);

    let eta = eta_op(params.p, n);
    let sigmas: Vec<GroupRingElem> = (1..=n).map(|m| eta.sigma(m)).collect::<Result<_>>()?;
    let k = sigmas.iter().fold(BigInt::one(), |acc, s| acc.lcm(&s.lcm_denominator()));
    let kq = q_big(k.clone());
    let eta_k = eta.scale(&kq);

    let mut rp = Replay { ctx, params, steps: Vec::new() };
    let mut report = ReplayReport {
        params,
        k: k.clone(),
        steps: Vec::new(),
        final_certificate: None,
        theorem1_certificate: None,
    };
    macro_rules! halt {
        () => {{
            report.steps = rp.steps;
            return Ok(report);
        }};
    }

    // (a)
    let sigma_n = eta_k.sigma(n)?;
    let integral = sigma_n.terms().all(|(_, c)| c.is_integer());
    let sum = sigma_n.coefficient_sum();
    let sigma1_identity = sigmas[0] == GroupRingElem::identity(1);
    let coprime = (&k % BigInt::from(params.p)) != BigInt::zero();
    let ok = integral && sum.is_zero() && sigma1_identity && coprime;
    if !rp.record(
        "a",
        "sigma_n(eta') has integer coefficients summing to 0",
        ok,
        json!({
            "k": k.to_string(),
            "sigma_1_is_identity": sigma1_identity,
            "k_coprime_to_p": coprime,
            "coefficient_sum": crate::rational::q_json(&sum),
            "sigma_n": sigma_n.to_json(),
        }),
        (!ok).then(|| sigma_n.to_string()),
    ) {
        halt!();
    }

    // (b)
    let letters: Vec<u32> = (1..=n as u32).collect();
    let kn = k_on_letters(params.q, &letters).into_poly();
    let k_kn = kn.scale(&kq);
    let wordwise = eta_k.apply(&kn)?;
    let as_factor = eta_k.apply_to_factors(std::slice::from_ref(&kn))?;
    let ok = wordwise == k_kn && as_factor == k_kn;
    if !rp.record(
        "b",
        "eta'(K_n) = k K_n",
        ok,
        json!({ "wordwise": wordwise == k_kn, "single_lie_factor": as_factor == k_kn }),
        (!ok).then(|| (&wordwise - &k_kn).to_string()),
    ) {
        halt!();
    }

    // (c)
    let psi = psi_xq_word(&params);
    let eta_psi = eta_k.apply(&psi)?;
    let commuted = permuted_word_image(&eta_k, n, &psi)?;
    let cert_c = rp.gamma_certificate(&eta_psi)?;
    let ok = eta_psi == commuted && cert_c.is_verified_member();
    if !rp.record(
        "c",
        "eta'(psi_{X^q}(x1..xn)) lies in Gamma_{n-1}",
        ok,
        json!({ "commutes": eta_psi == commuted, "certificate": cert_c.to_json() }),
        if eta_psi != commuted { Some((&eta_psi - &commuted).to_string()) } else { residual_of(&cert_c) },
    ) {
        halt!();
    }
    let cert_c = cert_c.certificate().expect("verified").membership_certificate();

    // (d)
    let a = &kn - &psi;
    let cert_a = rp.gamma_certificate(&a)?;
    if !cert_a.is_verified_member() {
        let residual = residual_of(&cert_a);
        rp.record("d", "eta'(a) lies in Gamma_{n-1}", false, json!({ "a_certificate": cert_a.to_json() }), residual);
        halt!();
    }
    let gamma = ctx.built(GenKind::Gamma, n, n - 1)?;
    let mut tables: BTreeMap<usize, Vec<(Perm, Q)>> = BTreeMap::new();
    let mut cert_d = MembershipCertificate::zero(Ring::Z);
    let mut gammas_integral = true;
    for t in &cert_a.certificate().expect("member").terms {
        let factors = gamma.set.items[t.index].factors();
        let r = factors.len();
        if !tables.contains_key(&r) {
            tables.insert(r, eta_k.action(r)?);
        }
        for (p, g) in &tables[&r] {
            gammas_integral &= g.is_integer();
            let moved = Generator::Gamma(GammaProduct { factors: p.permute(factors) });
            let idx = gamma.set.position(&moved).ok_or(Error::OutsideSpace)?;
            let single = MembershipCertificate { ring: Ring::Z, coeffs: [(idx, t.coeff.clone() * g)].into() };
            cert_d.add_scaled(&single, &Q::one());
        }
    }
    let eta_a = eta_k.apply(&a)?;
    let d = Certificate::from_membership(&gamma.set, &eta_a, &cert_d);
    let ok = gammas_integral && d.verified;
    if !rp.record(
        "d",
        "eta'(a) lies in Gamma_{n-1} by permuting product factors",
        ok,
        json!({ "sigma_r_integral": gammas_integral, "a_certificate": cert_a.to_json(), "certificate": d.to_json() }),
        (!ok).then(|| (&d.replay(&gamma.set) - &eta_a).to_string()),
    ) {
        halt!();
    }

    // (e)
    let mut cert_k = cert_c.clone();
    cert_k.add_scaled(&cert_d, &Q::one());
    let ck = Certificate::from_membership(&gamma.set, &k_kn, &cert_k);
    let mut cert_q = MembershipCertificate::zero(Ring::Z);
    let mut q_ok = true;
    for (w, c) in kn.terms() {
        if w.letters().first() != Some(&1) {
            continue;
        }
        let g = Generator::Gamma(GammaProduct { factors: vec![KInstance { args: vec![w.letters().to_vec()] }] });
        match gamma.set.position(&g) {
            Some(idx) => {
                q_ok &= c.is_integer();
                cert_q.coeffs.insert(idx, c.clone());
            }
            None => q_ok = false,
        }
    }
    let q_kn = kn.scale(&Q::from_integer(BigInt::from(params.q)));
    let cq = Certificate::from_membership(&gamma.set, &q_kn, &cert_q);
    let ok = ck.verified && cq.verified && q_ok;
    if !rp.record(
        "e",
        "k K_n and q K_n lie in Gamma_{n-1}",
        ok,
        json!({ "k_certificate": ck.to_json(), "q_certificate": cq.to_json() }),
        (!ok).then(|| {
            if ck.verified { (&cq.replay(&gamma.set) - &q_kn).to_string() } else { (&ck.replay(&gamma.set) - &k_kn).to_string() }
        }),
    ) {
        halt!();
    }

    // (f)
    let eg = k.extended_gcd(&BigInt::from(params.q));
    let mut cert_f = cert_k.scaled(&q_big(eg.x.clone()));
    cert_f.add_scaled(&cert_q, &q_big(eg.y.clone()));
    let cf = Certificate::from_membership(&gamma.set, &kn, &cert_f);
    let ok = eg.gcd.is_one() && cf.verified;
    if !rp.record(
        "f",
        "K_n lies in Gamma_{n-1} (Bezout on k and q)",
        ok,
        json!({ "u": eg.x.to_string(), "v": eg.y.to_string(), "certificate": cf.to_json() }),
        (!ok).then(|| (&cf.replay(&gamma.set) - &kn).to_string()),
    ) {
        halt!();
    }

    // (g)
    let ideal = ctx.built(GenKind::I, n, n - 1)?;
    let mut cert_g = MembershipCertificate::zero(Ring::Z);
    let mut all_members = true;
    for t in &cf.terms {
        let image = delta(&gamma.set.evaluate(t.index)).into_poly();
        match ctx.certify(GenKind::I, n, n - 1, &image, Ring::Z)? {
            CertifiedMembership::Member(c) if c.verified => {
                cert_g.add_scaled(&c.membership_certificate(), &t.coeff)
            }
            _ => all_members = false,
        }
    }
    let cg = Certificate::from_membership(&ideal.set, &kn, &cert_g);
    let direct = theorem1_verify(ctx, &params)?;
    let direct_cert = direct.primary.result.certificate().cloned();
    let direct_ok = direct.passed();
    let ok = all_members && cg.verified && direct_ok;
    let same = direct_cert.as_ref().is_some_and(|d| d.terms == cg.terms);
    rp.record(
        "g",
        "K_n = delta(K_n) lies in I_{n-1}",
        ok,
        json!({
            "delta_images_in_I": all_members,
            "certificate": cg.to_json(),
            "direct_certificate_verified": direct_ok,
            "identical_to_direct": same,
        }),
        (!ok).then(|| (&cg.replay(&ideal.set) - &kn).to_string()),
    );
    report.final_certificate = Some(cg);
    report.theorem1_certificate = direct_cert;
    report.steps = rp.steps;
    Ok(report)
}
