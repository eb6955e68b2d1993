//! The relators K_n, the lattices I_m and Γ_m at multilinear degree n, the
//! smoothing construction, and the membership checks built on them.

mod certificate;
mod checks;
mod context;
mod generators;
mod replay;
mod smoothing;

use std::collections::BTreeMap;

use num_traits::Zero;

pub use certificate::{Certificate, CertificateTerm, CertifiedMembership};
pub use checks::{
    check_delta_gamma, check_lemma11, check_lemma12, check_lemma14, theorem1_verify, DeltaGammaReport,
    Lemma12Report, Lemma14Report, MembershipCheck, Theorem1Report, Theorem1Status,
};
pub use context::{Coordinates, RelatorContext};
pub use generators::{
    generators_gamma, generators_i, GammaProduct, GenKind, Generator, GeneratorSet, KInstance,
};
pub use replay::{proof_replay, ReplayReport, ReplayStep};
pub use smoothing::{smoothing, subset_psi_sum, z_is_fixed_by_delta, SmoothingReport};

use crate::error::{Error, Result};
use crate::freealg::AssocPoly;
use crate::lie::{left_normed, LiePoly};
use crate::linalg::Ring;
use crate::opalg::OperatorR;
use crate::rational::{binomial, q_big, q_int};

/// Exponent data: a prime p, a power q of p, and the arity n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelatorParams {
    pub p: u64,
    pub q: u64,
    pub n: usize,
    pub ring: Ring,
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// The prime p with q = p^k, if q ≥ 2 is a prime power.
pub fn prime_of(q: u64) -> Option<u64> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut r = q;
    while r % p == 0 {
        r /= p;
    }
    (r == 1).then_some(p)
}

impl RelatorParams {
    pub fn new(p: u64, q: u64, n: usize, ring: Ring) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("p = {p} is not prime")));
        }
        if prime_of(q) != Some(p) {
            return Err(Error::InvalidParams(format!("q = {q} is not a power of p = {p}")));
        }
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        Ok(RelatorParams { p, q, n, ring })
    }

    /// Infers p from q.
    pub fn from_q(q: u64, n: usize) -> Result<Self> {
        let p = prime_of(q)
            .ok_or_else(|| Error::InvalidParams(format!("q = {q} is not a prime power")))?;
        Self::new(p, q, n, Ring::Z)
    }

    pub fn with_ring(self, ring: Ring) -> Self {
        RelatorParams { ring, ..self }
    }

    pub fn with_n(self, n: usize) -> Self {
        RelatorParams { n, ..self }
    }

    /// n ≢ 1 mod (p−1); never true for p = 2.
    pub fn check_hypothesis(&self) -> Result<()> {
        if self.p == 2 {
            return Err(Error::HypothesisNeverHolds);
        }
        if self.n as u64 % (self.p - 1) == 1 % (self.p - 1) {
            return Err(Error::HypothesisNotMet { p: self.p, n: self.n });
        }
        Ok(())
    }
}

/// K_m(x₁, …, x_m) on the generators, with the last argument as the bracketing root:
/// K₁ = q·x₁ and K_m = Σ_{r=2}^{q} C(q,r)·[x_m | ψ_{x^{r−1}}(x₁…x_{m−1})].
pub fn k_generic(q: u64, m: usize) -> LiePoly {
    if m == 1 {
        return LiePoly::generator(1).scale(&q_int(q as i64));
    }
    let root = LiePoly::generator(m as u32);
    let mut out = LiePoly::zero();
    for r in 2..=q {
        let power = (r - 1) as usize;
        if power > m - 1 {
            break;
        }
        let tail = OperatorR::x_power(power, m - 1)
            .psi_apply_word(m - 1)
            .expect("degree within cap");
        let term = left_normed(&root, &tail).expect("tail has no unit word");
        out = &out + &term.scale(&q_big(binomial(q, r)));
    }
    out
}

/// K_n evaluated on the given Lie arguments (positional).
pub fn k_relator(params: &RelatorParams, args: &[LiePoly]) -> Result<LiePoly> {
    if args.len() != params.n {
        return Err(Error::ArityMismatch { expected: params.n, got: args.len() });
    }
    Ok(k_substitute(&k_generic(params.q, params.n), args))
}

pub(crate) fn k_substitute(generic: &LiePoly, args: &[LiePoly]) -> LiePoly {
    // Plain renamings keep the bracket form.
    let letters: Option<Vec<u32>> = args
        .iter()
        .map(|a| match a.form() {
            Some(f) if f.len() == 1 && f[0].0.len() == 1 && f[0].1 == q_int(1) => Some(f[0].0[0]),
            _ => None,
        })
        .collect();
    if let (Some(letters), Some(form)) = (letters, generic.form()) {
        let renamed = form
            .iter()
            .map(|(s, c)| (s.iter().map(|&i| letters[i as usize - 1]).collect(), c.clone()))
            .collect();
        return LiePoly::from_form(renamed);
    }
    let images: BTreeMap<u32, AssocPoly> =
        args.iter().enumerate().map(|(i, a)| (i as u32 + 1, a.poly().clone())).collect();
    let poly = generic.poly().substitute(&images).expect("every argument has an image");
    LiePoly::from_poly_unchecked(poly)
}

/// K_n with its arguments x_{σ1}, …, x_{σn} given as generator indices.
pub fn k_on_letters(q: u64, letters: &[u32]) -> LiePoly {
    let args: Vec<LiePoly> = letters.iter().map(|&i| LiePoly::generator(i)).collect();
    k_substitute(&k_generic(q, letters.len()), &args)
}

/// ψ_{X^q}(x₁…x_n) = Σ_r C(q,r)·ψ_{x^r}(x₁…x_n).
pub fn psi_xq_word(params: &RelatorParams) -> AssocPoly {
    OperatorR::x_plus_one_power(params.q, params.n)
        .psi_apply_word(params.n)
        .expect("degree within cap")
}

/// The same element via the binomial expansion over ψ_{x^r}, an independent route.
pub fn psi_xq_word_binomial(params: &RelatorParams) -> AssocPoly {
    let mut out = AssocPoly::zero();
    for r in 0..=params.q.min(params.n as u64) {
        let c = q_big(binomial(params.q, r));
        if c.is_zero() {
            continue;
        }
        let part = OperatorR::x_power(r as usize, params.n)
            .psi_apply_word_by_partitions(params.n)
            .expect("degree within cap");
        out.add_scaled(&part, &c);
    }
    out
}

/// δ(ψ_{X^q}(x₁…x_n)), the alternative normalisation of K_n.
pub fn k_delta_form(params: &RelatorParams) -> LiePoly {
    crate::lie::delta(&psi_xq_word(params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Word;
    use crate::lie::bracket;
    use crate::rational::q_int;

    fn g(i: u32) -> LiePoly {
        LiePoly::generator(i)
    }

    fn params(q: u64, n: usize) -> RelatorParams {
        RelatorParams::from_q(q, n).unwrap()
    }

    #[test]
    fn param_validation() {
        assert!(RelatorParams::new(3, 9, 2, Ring::Z).is_ok());
        assert!(RelatorParams::new(3, 6, 2, Ring::Z).is_err());
        assert!(RelatorParams::new(4, 4, 2, Ring::Z).is_err());
        assert!(RelatorParams::from_q(12, 2).is_err());
        assert_eq!(RelatorParams::from_q(8, 2).unwrap().p, 2);
        assert_eq!(params(4, 3).check_hypothesis(), Err(Error::HypothesisNeverHolds));
        assert_eq!(params(3, 3).check_hypothesis(), Err(Error::HypothesisNotMet { p: 3, n: 3 }));
        assert_eq!(params(3, 4).check_hypothesis(), Ok(()));
        assert_eq!(params(5, 5).check_hypothesis(), Err(Error::HypothesisNotMet { p: 5, n: 5 }));
        assert_eq!(params(5, 3).check_hypothesis(), Ok(()));
    }

    #[test]
    fn k_examples() {
        let k1 = k_relator(&params(3, 1), &[g(1)]).unwrap();
        assert_eq!(k1.poly(), &AssocPoly::var(1).scale_int(3));
        assert_eq!(k1.to_string(), "3*x1");
        for q in [2u64, 3, 4, 5, 9] {
            let k2 = k_relator(&params(q, 2), &[g(2), g(1)]).unwrap();
            let c = q_big(binomial(q, 2));
            assert_eq!(k2, bracket(&g(1), &g(2)).scale(&c));
        }
        // 3[x3|x1x2] + [x3|x1x2 + x2x1]
        let k3 = k_relator(&params(3, 3), &[g(1), g(2), g(3)]).unwrap();
        let expect = &LiePoly::left_normed_word(&[3, 1, 2]).scale(&q_int(4))
            + &LiePoly::left_normed_word(&[3, 2, 1]);
        assert_eq!(k3, expect);
        assert_eq!(k3.to_string(), "4*[x3,x1,x2] + 1*[x3,x2,x1]");
        assert_eq!(
            k_relator(&params(3, 3), &[g(1)]),
            Err(Error::ArityMismatch { expected: 3, got: 1 })
        );
    }

    #[test]
    fn psi_xq_examples() {
        for q in [2u64, 3, 4, 5, 7, 9] {
            let p1 = params(q, 1);
            assert_eq!(psi_xq_word(&p1), AssocPoly::var(1).scale_int(q as i64));
            let p2 = params(q, 2);
            let expect = AssocPoly::from_terms([
                (Word(vec![1, 2]), q_big(binomial(q + 1, 2))),
                (Word(vec![2, 1]), q_big(binomial(q, 2))),
            ]);
            assert_eq!(psi_xq_word(&p2), expect);
            for n in 1..=5 {
                let pn = params(q, n);
                assert_eq!(psi_xq_word(&pn), psi_xq_word_binomial(&pn), "q={q} n={n}");
            }
        }
        let p = params(2, 2);
        assert_eq!(
            psi_xq_word(&p),
            &AssocPoly::word(&[1, 2]).scale_int(3) + &AssocPoly::word(&[2, 1])
        );
    }

    #[test]
    fn k_is_multilinear_in_each_slot() {
        let p = params(3, 3);
        let a = LiePoly::left_normed_word(&[4, 5]);
        let b = g(6);
        let sum = &a + &b;
        for slot in 0..3 {
            let mk = |x: &LiePoly| {
                let mut args = vec![g(1), g(2), g(3)];
                args[slot] = x.clone();
                k_relator(&p, &args).unwrap()
            };
            assert_eq!(mk(&sum), &mk(&a) + &mk(&b), "slot {slot}");
        }
    }

    #[test]
    fn ideal_closure_identity() {
        // [K_m(a₁,…,a_m), b] = Σ_i K_m(a₁,…,[a_i,b],…,a_m)
        for q in [2u64, 3] {
            for m in 1..=3usize {
                let p = params(q, m);
                let args: Vec<LiePoly> = (1..=m as u32).map(g).collect();
                let b = if m < 3 { LiePoly::left_normed_word(&[8, 9]) } else { g(9) };
                let lhs = bracket(&k_relator(&p, &args).unwrap(), &b);
                let mut rhs = LiePoly::zero();
                for i in 0..m {
                    let mut a2 = args.clone();
                    a2[i] = bracket(&args[i], &b);
                    rhs = &rhs + &k_relator(&p, &a2).unwrap();
                }
                assert_eq!(lhs, rhs, "q={q} m={m}");
            }
        }
    }

    #[test]
    fn k_values_are_lie() {
        for q in [2u64, 3, 5] {
            for n in 1..=5 {
                let k = k_generic(q, n);
                assert!(crate::lie::is_multilinear_lie(k.poly()), "q={q} n={n}");
                assert!(k.poly().has_integer_coefficients());
            }
        }
    }

    #[test]
    fn delta_form_agrees_at_n2() {
        // δ(ψ_{X^q}(x₁x₂)) = C(q+1,2)[x₁,x₂], while K₂(x₂,x₁) = C(q,2)[x₁,x₂].
        let p = params(3, 2);
        assert_eq!(k_delta_form(&p), bracket(&g(1), &g(2)).scale(&q_int(6)));
    }
}
