use num_traits::Zero;
use serde_json::{json, Value};

use super::generators::{GenKind, GeneratorSet};
use crate::freealg::AssocPoly;
use crate::linalg::{Membership, MembershipCertificate, Ring};
use crate::rational::{q_json, render_terms, Q};

/// One generator used by a certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateTerm {
    pub index: usize,
    pub label: String,
    pub provenance: Value,
    pub coeff: Q,
}

/// A linear combination of labeled generators claimed to equal `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub target: AssocPoly,
    pub ring: Ring,
    pub kind: GenKind,
    pub terms: Vec<CertificateTerm>,
    pub verified: bool,
}

impl Certificate {
    /// Attaches labels and replays the combination in A.
    pub fn from_membership(
        set: &GeneratorSet,
        target: &AssocPoly,
        cert: &MembershipCertificate,
    ) -> Certificate {
        let terms: Vec<CertificateTerm> = cert
            .coeffs
            .iter()
            .map(|(&index, c)| CertificateTerm {
                index,
                label: set.label(index),
                provenance: set.items[index].provenance(),
                coeff: c.clone(),
            })
            .collect();
        let mut c = Certificate { target: target.clone(), ring: cert.ring, kind: set.kind, terms, verified: false };
        c.verified = cert.coefficients_in_ring() && c.replay(set) == *target;
        c
    }

    pub fn replay(&self, set: &GeneratorSet) -> AssocPoly {
        let mut acc = AssocPoly::zero();
        for t in &self.terms {
            acc.add_scaled(&set.evaluate(t.index), &t.coeff);
        }
        acc
    }

    pub fn membership_certificate(&self) -> MembershipCertificate {
        MembershipCertificate {
            ring: self.ring,
            coeffs: self.terms.iter().map(|t| (t.index, t.coeff.clone())).collect(),
        }
    }

    /// `target = c₁·label₁ + c₂·label₂ + …`
    pub fn to_text(&self) -> String {
        let terms: Vec<(Q, String)> =
            self.terms.iter().filter(|t| !t.coeff.is_zero()).map(|t| (t.coeff.clone(), t.label.clone())).collect();
        format!("{} = {}", self.target, render_terms(&terms, true))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "target": self.target.to_string(),
            "ring": ring_name(self.ring),
            "verified": self.verified,
            "generators": self.terms.iter().map(|t| json!({
                "label": t.label,
                "provenance": t.provenance,
                "coeff": q_json(&t.coeff),
            })).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn ring_name(r: Ring) -> &'static str {
    match r {
        Ring::Z => "Z",
        Ring::Q => "Q",
        Ring::Zp(_) => "Z_(p)",
    }
}

/// Outcome of certifying `target` against a generator set.
#[derive(Debug, Clone, PartialEq)]
pub enum CertifiedMembership {
    Member(Certificate),
    NotMember { target: AssocPoly, residual: AssocPoly },
}

impl CertifiedMembership {
    pub fn is_verified_member(&self) -> bool {
        matches!(self, CertifiedMembership::Member(c) if c.verified)
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            CertifiedMembership::Member(c) => Some(c),
            CertifiedMembership::NotMember { .. } => None,
        }
    }

    pub(crate) fn from_outcome(
        set: &GeneratorSet,
        target: &AssocPoly,
        outcome: Membership,
        residual_poly: impl Fn(&[Q]) -> AssocPoly,
    ) -> Self {
        match outcome {
            Membership::Member(c) => CertifiedMembership::Member(Certificate::from_membership(set, target, &c)),
            Membership::NotMember { residual } => CertifiedMembership::NotMember {
                target: target.clone(),
                residual: residual_poly(&residual),
            },
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CertifiedMembership::Member(c) => c.to_json(),
            CertifiedMembership::NotMember { target, residual } => json!({
                "target": target.to_string(),
                "verified": false,
                "residual": residual.to_string(),
            }),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            CertifiedMembership::Member(c) => c.to_text(),
            CertifiedMembership::NotMember { target, residual } => {
                format!("NOT A MEMBER: {target}\n  residual: {residual}")
            }
        }
    }
}
