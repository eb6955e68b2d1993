//! Exhaustive and seeded-random verification suites, one per statement.
//! Each suite returns the number of cases it checked and a description of
//! every failing case.

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::Result;
use crate::freealg::{bubble_decompose, AssocPoly};
use crate::opalg::{epsilon_op, eta_op, GroupRingElem, OperatorR};
use crate::perm::{all_perms, Perm};
use crate::rational::{is_p_integral, q_int, Q};
use crate::relators::{
    check_delta_gamma, check_lemma11, check_lemma12, check_lemma14, k_on_letters, proof_replay, smoothing,
    subset_psi_sum, theorem1_verify, z_is_fixed_by_delta, RelatorContext, RelatorParams,
};
use crate::series::{log1p, p_integrality_check, t_series};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub statement: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str, statement: &'static str) -> Self {
        SuiteReport { name, statement, cases: 0, failures: Vec::new() }
    }

    fn case(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn error(&mut self, what: String, e: crate::Error) {
        self.cases += 1;
        self.failures.push(format!("{what}: {e}"));
    }

    pub fn passed(&self) -> bool {
        self.cases > 0 && self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "statement": self.statement,
            "cases": self.cases,
            "passed": self.passed(),
            "failures": self.failures,
        })
    }

    pub fn scoreboard_line(&self) -> String {
        format!(
            "{:<14} {}  cases={:<5} {}",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.cases,
            self.statement
        )
    }
}

/// x_{π1}…x_{πr} = x₁…x_r + Σ y₁…[y_i,y_{i+1}]…y_r, exhaustively for r ≤ 5
/// and on `random_per_r` seeded permutations for larger r.
pub fn lemma2<R: Rng>(max_r: usize, random_per_r: usize, rng: &mut R) -> SuiteReport {
    let mut rep = SuiteReport::new("lemma2", "bubble-sort decomposition of permuted words");
    for r in 1..=max_r {
        let perms: Vec<Perm> =
            if r <= 5 { all_perms(r) } else { (0..random_per_r).map(|_| Perm::random(r, rng)).collect() };
        for pi in perms {
            let letters = pi.one_line_1based();
            let summands = bubble_decompose(&letters);
            let mut total = AssocPoly::word(&(1..=r as u32).collect::<Vec<_>>());
            for s in &summands {
                total += &s.expand();
            }
            let ok = total == AssocPoly::word(&letters) && (pi.is_identity() == summands.is_empty());
            rep.case(ok, || format!("pi = {pi}"));
        }
    }
    rep
}

/// ψ_{x^m}(x₁…x_r) by multilinear projection equals the ordered-partition sum.
pub fn psi_definitions(max_m: usize, max_r: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("lemma4", "psi_{x^m} by projection = ordered-partition sum");
    for m in 1..=max_m {
        for r in 1..=max_r {
            let op = OperatorR::x_power(m, r);
            match (op.psi_apply_word(r), op.psi_apply_word_by_partitions(r)) {
                (Ok(a), Ok(b)) => rep.case(a == b, || format!("m={m} r={r}")),
                (Err(e), _) | (_, Err(e)) => rep.error(format!("m={m} r={r}"), e),
            }
        }
    }
    rep
}

fn sigma_x_plus_one(m: u64, r: usize) -> Result<GroupRingElem> {
    OperatorR::x_plus_one_power(m, r).sigma(r)
}

/// σ_r(ψ_{X^m})·σ_r(ψ_{X^n}) = σ_r(ψ_{X^{mn}}), with σ₁(ψ_{X^m}) = m and Σα_π = m^r.
pub fn lemma6(max_mn: u64, max_r: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("lemma6", "sigma_r(psi_{X^m}) sigma_r(psi_{X^n}) = sigma_r(psi_{X^mn})");
    for r in 1..=max_r {
        for m in 1..=max_mn {
            let sm = match sigma_x_plus_one(m, r) {
                Ok(s) => s,
                Err(e) => {
                    rep.error(format!("m={m} r={r}"), e);
                    continue;
                }
            };
            let sum_ok = sm.coefficient_sum() == Q::from_integer(BigInt::from(m).pow(r as u32));
            rep.case(sum_ok, || format!("coefficient sum m={m} r={r}"));
            if r == 1 {
                rep.case(sm == GroupRingElem::identity(1).scale(&q_int(m as i64)), || format!("sigma_1, m={m}"));
            }
            for n in 1..=max_mn {
                let res = sigma_x_plus_one(n, r)
                    .and_then(|sn| sm.mul(&sn))
                    .and_then(|prod| Ok(prod == sigma_x_plus_one(m * n, r)?));
                match res {
                    Ok(ok) => rep.case(ok, || format!("m={m} n={n} r={r}")),
                    Err(e) => rep.error(format!("m={m} n={n} r={r}"), e),
                }
            }
        }
    }
    rep
}

/// σ_r(ψ_{x^a}) and σ_r(ψ_{x^b}) commute.
pub fn cor7(max_a: usize, max_r: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("cor7", "sigma_r(psi_{x^a}) and sigma_r(psi_{x^b}) commute");
    for r in 1..=max_r {
        let sig: Vec<GroupRingElem> =
            (1..=max_a).map(|a| OperatorR::x_power(a, r).sigma(r).expect("r within cap")).collect();
        for (i, x) in sig.iter().enumerate() {
            for y in &sig[i..] {
                let ok = x.mul(y).ok() == y.mul(x).ok();
                rep.case(ok, || format!("r={r}"));
            }
        }
    }
    rep
}

/// σ_r(θ∘φ) = σ_r(θ)σ_r(φ), composing by applying θ to φ's output.
pub fn homomorphism(max_a: usize, max_r: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("sigma-hom", "sigma_r(theta o phi) = sigma_r(theta) sigma_r(phi)");
    for r in 1..=max_r {
        for a in 1..=max_a {
            for b in 1..=max_a {
                let theta = OperatorR::x_power(a, r);
                let phi = OperatorR::x_power(b, r);
                let res = (|| -> Result<bool> {
                    let composed = theta.apply(&phi.psi_apply_word(r)?)?;
                    let mut s = GroupRingElem::zero(r);
                    for (w, c) in composed.terms() {
                        s.add_term(Perm::from_one_line(w.letters()).inverse(), c.clone());
                    }
                    Ok(s == theta.sigma(r)?.mul(&phi.sigma(r)?)?)
                })();
                match res {
                    Ok(ok) => rep.case(ok, || format!("a={a} b={b} r={r}")),
                    Err(e) => rep.error(format!("a={a} b={b} r={r}"), e),
                }
            }
        }
    }
    rep
}

/// σ_k(ε_r)σ_k(ε_s) = δ_{rs}σ_k(ε_r), and Σ_r σ_k(ε_r) = 1.
pub fn lemma8(max: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("lemma8", "the epsilon_r are orthogonal idempotents summing to 1");
    for k in 1..=max {
        let eps: Vec<GroupRingElem> = (0..=max).map(|r| epsilon_op(r, k).sigma(k).expect("k within cap")).collect();
        for r in 0..=max {
            for s in 0..=max {
                let prod = eps[r].mul(&eps[s]).expect("same degree");
                let expect = if r == s { eps[r].clone() } else { GroupRingElem::zero(k) };
                rep.case(prod == expect, || format!("k={k} r={r} s={s}"));
            }
        }
        let mut total = GroupRingElem::zero(k);
        for e in &eps {
            total = total.add(e).expect("same degree");
        }
        rep.case(total == GroupRingElem::identity(k), || format!("sum over r, k={k}"));
    }
    rep
}

/// Every t_i (0 < i < p) is p-integral to the cap; z fails first at degree p.
pub fn lemma9(primes: &[u64], cap: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("lemma9", "denominators of t_i are coprime to p");
    for &p in primes {
        for i in 1..p {
            match t_series(p, i, cap) {
                Ok(t) => {
                    let r = p_integrality_check(&t, p);
                    rep.case(r.is_ok(), || format!("p={p} i={i}: fails at degree {}", r.unwrap_err()));
                }
                Err(e) => rep.error(format!("p={p} i={i}"), e),
            }
        }
        if cap >= p as usize {
            let r = p_integrality_check(&log1p(cap), p);
            rep.case(r == Err(p as usize), || format!("negative control z, p={p}: {r:?}"));
        }
    }
    rep
}

/// σ₁(η) = 1; for n ≢ 1 mod (p−1), Σα_π = 0 and (Σπ)σ_n(η) = 0; denominators coprime to p.
pub fn cor10(cases: &[(u64, Vec<usize>)]) -> SuiteReport {
    let mut rep = SuiteReport::new("cor10", "sigma_n(eta) has coefficient sum 0 and p-integral coefficients");
    for (p, ns) in cases {
        let p = *p;
        let cap = ns.iter().copied().max().unwrap_or(1).max(1);
        let eta = eta_op(p, cap);
        rep.case(eta.sigma(1).ok() == Some(GroupRingElem::identity(1)), || format!("sigma_1, p={p}"));
        for &n in ns {
            let s = match eta.sigma(n) {
                Ok(s) => s,
                Err(e) => {
                    rep.error(format!("p={p} n={n}"), e);
                    continue;
                }
            };
            let integral = s.terms().all(|(_, c)| is_p_integral(c, p));
            rep.case(integral, || format!("denominators, p={p} n={n}"));
            if (n as u64) % (p - 1) != 1 % (p - 1) {
                rep.case(s.coefficient_sum().is_zero(), || format!("coefficient sum, p={p} n={n}"));
                let annihilated = GroupRingElem::symmetrizer(n).mul(&s).map(|g| g.is_zero()).unwrap_or(false);
                rep.case(annihilated, || format!("symmetrizer product, p={p} n={n}"));
            }
        }
    }
    rep
}

/// One lazily created context per q.
#[derive(Default)]
pub struct Contexts {
    map: Mutex<BTreeMap<u64, std::sync::Arc<RelatorContext>>>,
}

impl Contexts {
    pub fn get(&self, q: u64) -> std::sync::Arc<RelatorContext> {
        self.map.lock().expect("context lock").entry(q).or_insert_with(|| RelatorContext::new(q).into()).clone()
    }
}

fn params(q: u64, n: usize) -> Result<RelatorParams> {
    RelatorParams::from_q(q, n)
}

pub fn lemma11(ctxs: &Contexts, qs: &[u64], max_n: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("lemma11", "delta(psi_{X^q}(x1..xn)) = K_n(x2,..,xn,x1) mod I_{n-1}");
    for &q in qs {
        for n in 2..=max_n {
            match params(q, n).and_then(|p| check_lemma11(&ctxs.get(q), &p)) {
                Ok(c) => rep.case(c.passed(), || format!("q={q} n={n}")),
                Err(e) => rep.error(format!("q={q} n={n}"), e),
            }
        }
    }
    rep
}

pub fn lemma12(ctxs: &Contexts, qs: &[u64], max_n: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("lemma12", "psi_{X^q}(x1..xn) = K_n(x2,..,xn,x1) mod Gamma_{n-1}");
    for &q in qs {
        for n in 1..=max_n {
            match params(q, n).and_then(|p| check_lemma12(&ctxs.get(q), &p)) {
                Ok(c) => rep.case(c.passed(), || format!("q={q} n={n}")),
                Err(e) => rep.error(format!("q={q} n={n}"), e),
            }
        }
    }
    rep
}

pub fn lemma14<R: Rng>(ctxs: &Contexts, qs: &[u64], max_n: usize, perms: usize, rng: &mut R) -> SuiteReport {
    let mut rep = SuiteReport::new("lemma14", "permuting arguments changes psi mod Gamma_{n-1} and K_n mod I_{n-1}");
    for &q in qs {
        for n in 2..=max_n {
            for _ in 0..perms {
                let pi = Perm::random(n, rng);
                match params(q, n).and_then(|p| check_lemma14(&ctxs.get(q), &p, &pi)) {
                    Ok(c) => rep.case(c.passed(), || format!("q={q} n={n} pi={pi}")),
                    Err(e) => rep.error(format!("q={q} n={n} pi={pi}"), e),
                }
            }
        }
    }
    rep
}

/// The hand trace at q=2, n=2, then z_r = 0 (r < n), δ(z_n) = z_n and the
/// subset expansion of w for every (q, n).
pub fn smoothing_suite(qs: &[u64], max_n: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("smoothing", "lower z_r vanish and z_n is a Lie element");
    if qs.contains(&2) && max_n >= 2 {
        let z2 = &AssocPoly::word(&[2, 1]) - &AssocPoly::word(&[1, 2]);
        let r = params(2, 2).and_then(|p| smoothing(&p));
        rep.case(r.as_ref().is_ok_and(|r| *r.z_n.poly() == z2), || "q=2 n=2 hand trace".into());
        let k = k_on_letters(2, &[2, 1]).into_poly();
        let b = &AssocPoly::word(&[1, 2]) - &AssocPoly::word(&[2, 1]);
        rep.case(r.is_ok_and(|r| r.z_n.poly() - &k == b.scale(&q_int(-2))), || "q=2 n=2 difference".into());
    }
    for &q in qs {
        for n in 1..=max_n {
            match params(q, n).and_then(|p| Ok((smoothing(&p)?, p))) {
                Ok((r, p)) => {
                    rep.case(z_is_fixed_by_delta(&r), || format!("delta(z_n), q={q} n={n}"));
                    rep.case(r.w == subset_psi_sum(&p), || format!("subset sum, q={q} n={n}"));
                }
                Err(e) => rep.error(format!("q={q} n={n}"), e),
            }
        }
    }
    rep
}

pub fn delta_gamma(ctxs: &Contexts, qs: &[u64], max_n: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("delta-gamma", "delta maps every Gamma_{n-1} generator into I_{n-1}");
    for &q in qs {
        for n in 2..=max_n {
            match check_delta_gamma(&ctxs.get(q), n) {
                Ok(r) => {
                    rep.cases += r.checked;
                    rep.failures.extend(r.failures.iter().map(|l| format!("q={q} n={n}: {l}")));
                }
                Err(e) => rep.error(format!("q={q} n={n}"), e),
            }
        }
    }
    rep
}

pub fn theorem1(ctxs: &Contexts, instances: &[(u64, usize)]) -> SuiteReport {
    let mut rep = SuiteReport::new("theorem1", "K_n lies in I_{n-1} with an integer certificate");
    for &(q, n) in instances {
        match params(q, n).and_then(|p| theorem1_verify(&ctxs.get(q), &p)) {
            Ok(r) => rep.case(r.passed() && !r.primary.routes_disagree(), || format!("q={q} n={n}: {:?}", r.status)),
            Err(e) => rep.error(format!("q={q} n={n}"), e),
        }
    }
    rep
}

pub fn replay(ctxs: &Contexts, instances: &[(u64, usize)]) -> SuiteReport {
    let mut rep = SuiteReport::new("proof-replay", "steps (a)-(g) of the integral argument");
    for &(q, n) in instances {
        match params(q, n).and_then(|p| proof_replay(&ctxs.get(q), &p)) {
            Ok(r) => {
                let failed: Vec<&str> = r.steps.iter().filter(|s| !s.passed).map(|s| s.label).collect();
                rep.case(r.passed(), || format!("q={q} n={n}: failed {failed:?}"))
            }
            Err(e) => rep.error(format!("q={q} n={n}"), e),
        }
    }
    rep
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Quick,
    Full,
}

/// Runs every suite at the given profile with degrees capped at `max_degree`.
pub fn run_all<R: Rng>(profile: Profile, max_degree: usize, rng: &mut R) -> Vec<SuiteReport> {
    let d = max_degree;
    let rel_n = d.min(if profile == Profile::Full { 5 } else { 4 });
    let ctxs = Contexts::default();
    let cor10_cases: Vec<(u64, Vec<usize>)> = vec![
        (3, [2, 4, 6].into_iter().filter(|&n| n <= d).collect()),
        (5, [2, 3, 4, 6].into_iter().filter(|&n| n <= d).collect()),
    ];
    let mut t1: Vec<(u64, usize)> = vec![(3, 2), (3, 4), (5, 2), (5, 3), (5, 4), (9, 2)];
    let mut rp: Vec<(u64, usize)> = vec![(3, 2), (3, 4), (5, 3)];
    if profile == Profile::Full {
        rp.extend([(5, 2), (5, 4)]);
        t1.push((7, 5));
    }
    t1.retain(|&(_, n)| n <= d);
    rp.retain(|&(_, n)| n <= d);
    let mut out = vec![
        lemma2(d.min(6), 20, rng),
        psi_definitions(4, d.min(6)),
        lemma6(4, d.min(5)),
        cor7(4, d.min(5)),
        homomorphism(4, d.min(5)),
        lemma8(d.min(5)),
        lemma9(&[3, 5, 7], 10),
        cor10(&cor10_cases),
    ];
    out.push(smoothing_suite(&[2, 3], rel_n));
    out.push(lemma11(&ctxs, &[2, 3], rel_n));
    out.push(lemma12(&ctxs, &[2, 3], rel_n));
    out.push(lemma14(&ctxs, &[2, 3], rel_n, 5, rng));
    out.push(delta_gamma(&ctxs, &[2, 3], rel_n));
    out.push(theorem1(&ctxs, &t1));
    out.push(replay(&ctxs, &rp));
    out
}

pub fn suites_json(seed: u64, profile: Profile, max_degree: usize, reports: &[SuiteReport]) -> Value {
    json!({
        "seed": seed,
        "profile": match profile { Profile::Quick => "quick", Profile::Full => "full" },
        "max_degree": max_degree,
        "passed": reports.iter().all(SuiteReport::passed),
        "suites": reports.iter().map(SuiteReport::to_json).collect::<Vec<_>>(),
    })
}
