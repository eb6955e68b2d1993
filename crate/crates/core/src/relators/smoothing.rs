use std::collections::BTreeSet;

use serde_json::{json, Value};

use super::{psi_xq_word, RelatorParams};
use crate::error::{Error, Result};
use crate::freealg::{AssocPoly, TruncatedPoly};
use crate::lie::{delta, LiePoly};

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingReport {
    pub n: usize,
    /// (e^{x₁}…e^{x_n})^q in the truncated algebra.
    pub w: AssocPoly,
    /// Multilinear (degree n) part of the final w_n = e^{z}.
    pub w_n_multilinear: AssocPoly,
    pub z_n: LiePoly,
    /// Degrees r < n at which z_r was checked to vanish.
    pub audited_degrees: Vec<usize>,
}

impl SmoothingReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "z_n": self.z_n.poly().to_string(),
            "w_n_multilinear": self.w_n_multilinear.to_string(),
            "audited_degrees": self.audited_degrees,
        })
    }
}

/// Kills every proper-subset contribution of (e^{x₁}…e^{x_n})^q by the
/// alternating products w_i = w_{i−1}·(δ_i w_{i−1})⁻¹ and returns z_n = log w_n.
pub fn smoothing(params: &RelatorParams) -> Result<SmoothingReport> {
    let n = params.n as u32;
    let vars: BTreeSet<u32> = (1..=n).collect();
    let mut base = TruncatedPoly::one(vars.clone());
    for i in 1..=n {
        base = base.mul(&TruncatedPoly::new(vars.clone(), &AssocPoly::var(i)).exp()?);
    }
    let w = base.pow(params.q as u32);
    let mut wi = w.clone();
    for i in 1..=n {
        wi = wi.mul(&wi.kill_var(i).inverse()?);
    }
    let z = wi.log()?;
    let mut audited = Vec::new();
    for r in 0..params.n {
        if !z.poly().homogeneous_part(r).is_zero() {
            return Err(Error::NonvanishingLowerTerms(r));
        }
        audited.push(r);
    }
    let z_n = z.poly().homogeneous_part(params.n);
    Ok(SmoothingReport {
        n: params.n,
        w: w.into_poly(),
        w_n_multilinear: wi.poly().homogeneous_part(params.n),
        z_n: LiePoly::from_poly_unchecked(z_n),
        audited_degrees: audited,
    })
}

/// 1 + Σ_{∅≠S⊆{1..n}} ψ_{X^q}(x_S), with x_S the increasing word on S.
pub fn subset_psi_sum(params: &RelatorParams) -> AssocPoly {
    let n = params.n;
    let mut out = AssocPoly::one();
    for mask in 1u32..(1 << n) {
        let s: Vec<u32> = (0..n as u32).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
        let sub = psi_xq_word(&params.with_n(s.len()));
        out += &sub.rename(|i| s[i as usize - 1]);
    }
    out
}

/// δ(z_n) = z_n, the Lie-element check on the smoothing output.
pub fn z_is_fixed_by_delta(report: &SmoothingReport) -> bool {
    delta(report.z_n.poly()).poly() == report.z_n.poly()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Word;
    use crate::lie::is_multilinear_lie;
    use crate::rational::q_int;

    fn params(q: u64, n: usize) -> RelatorParams {
        RelatorParams::from_q(q, n).unwrap()
    }

    #[test]
    fn n1_is_noop() {
        for q in [2, 3, 5] {
            let r = smoothing(&params(q, 1)).unwrap();
            assert_eq!(*r.z_n.poly(), AssocPoly::var(1).scale_int(q as i64));
        }
    }

    #[test]
    fn hand_trace_q2_n2() {
        let r = smoothing(&params(2, 2)).unwrap();
        let w = AssocPoly::from_terms([
            (Word::unit(), q_int(1)),
            (Word(vec![1]), q_int(2)),
            (Word(vec![2]), q_int(2)),
            (Word(vec![1, 2]), q_int(3)),
            (Word(vec![2, 1]), q_int(1)),
        ]);
        assert_eq!(r.w, w);
        let z2 = &AssocPoly::word(&[2, 1]) - &AssocPoly::word(&[1, 2]);
        assert_eq!(*r.z_n.poly(), z2);
        assert_eq!(r.w_n_multilinear, z2);
        assert_eq!(r.audited_degrees, vec![0, 1]);
    }

    #[test]
    fn lower_terms_vanish_and_z_is_lie() {
        for q in [2, 3, 4, 5] {
            for n in 1..=4 {
                let r = smoothing(&params(q, n)).unwrap();
                assert!(z_is_fixed_by_delta(&r), "q={q} n={n}");
                assert!(is_multilinear_lie(r.z_n.poly()));
                let vars = (1..=n as u32).collect();
                assert_eq!(r.z_n.poly().multilinear_component(&vars), *r.z_n.poly());
            }
        }
    }

    #[test]
    fn w_is_subset_psi_sum() {
        for q in [2, 3, 4] {
            for n in 1..=4 {
                let p = params(q, n);
                assert_eq!(smoothing(&p).unwrap().w, subset_psi_sum(&p), "q={q} n={n}");
            }
        }
    }
}
