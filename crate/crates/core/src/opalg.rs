//! The operators ψ_w and their images σ_r in the group rings ℚS_r.
//!
//! An operator is represented by its series `w`. Its action on a word of
//! length r is read off ψ_w(x₁…x_r) = the {x₁..x_r}-multilinear component of
//! w((1+x₁)…(1+x_r) − 1), and transported to any r-letter word (or product
//! of Lie elements) by substitution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::freealg::{AssocPoly, TruncatedPoly, Word};
use crate::lie::LiePoly;
use crate::perm::{all_perms, ordered_set_partitions, Perm};
use crate::rational::{factorial, lcm_of_denominators, q_json, q_text, Q};
use crate::series::{t_series, z_power_over_factorial, SeriesQ};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorR {
    w: SeriesQ,
}

impl OperatorR {
    pub fn new(w: SeriesQ) -> Self {
        OperatorR { w }
    }

    /// ψ_{x^m}.
    pub fn x_power(m: usize, cap: usize) -> Self {
        Self::new(SeriesQ::monomial(cap, m, Q::one()))
    }

    /// ψ_{X^m} with X = 1 + x.
    pub fn x_plus_one_power(m: u64, cap: usize) -> Self {
        Self::new(SeriesQ::x_plus_one_pow(cap, m))
    }

    pub fn series(&self) -> &SeriesQ {
        &self.w
    }

    pub fn cap(&self) -> usize {
        self.w.cap()
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::new(self.w.scale(k))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.w.try_add(&other.w)?))
    }

    fn check_cap(&self, r: usize) -> Result<()> {
        if r > self.cap() {
            return Err(Error::CapExceeded { requested: r, cap: self.cap() });
        }
        Ok(())
    }

    /// ψ_w(x₁…x_r) by the defining multilinear projection.
    pub fn psi_apply_word(&self, r: usize) -> Result<AssocPoly> {
        self.check_cap(r)?;
        if r == 0 {
            return Ok(AssocPoly::constant(self.w.coeff(0)));
        }
        let vars: BTreeSet<u32> = (1..=r as u32).collect();
        let mut prod = TruncatedPoly::one(vars.clone());
        for i in 1..=r as u32 {
            let f = &AssocPoly::one() + &AssocPoly::var(i);
            prod = prod.mul(&TruncatedPoly::new(vars.clone(), &f));
        }
        let u = prod.sub(&TruncatedPoly::one(vars.clone()));
        // u^m has no words shorter than m, so only m ≤ r matters.
        let mut acc = AssocPoly::zero();
        let mut power = TruncatedPoly::one(vars.clone());
        for m in 0..=r {
            if m > 0 {
                power = power.mul(&u);
            }
            let c = self.w.coeff(m);
            if !c.is_zero() {
                acc.add_scaled(power.poly(), &c);
            }
        }
        Ok(acc.multilinear_component(&vars))
    }

    /// ψ_w(x₁…x_r) through Σ_m β_m Σ x_{S₁}…x_{S_m} over ordered partitions.
    pub fn psi_apply_word_by_partitions(&self, r: usize) -> Result<AssocPoly> {
        self.check_cap(r)?;
        if r == 0 {
            return Ok(AssocPoly::constant(self.w.coeff(0)));
        }
        let mut acc = AssocPoly::zero();
        for m in 1..=r {
            let c = self.w.coeff(m);
            if !c.is_zero() {
                acc.add_scaled(&ordered_partition_sum(m, r), &c);
            }
        }
        Ok(acc)
    }

    /// α_π with ψ_w(x₁…x_r) = Σ α_π x_{π1}…x_{πr}.
    pub fn action(&self, r: usize) -> Result<Vec<(Perm, Q)>> {
        let poly = self.psi_apply_word(r)?;
        Ok(poly
            .terms()
            .map(|(w, c)| (Perm::from_one_line(w.letters()), c.clone()))
            .collect())
    }

    /// σ_r: the coefficients α_π stored against π⁻¹.
    pub fn sigma(&self, r: usize) -> Result<GroupRingElem> {
        let mut g = GroupRingElem::zero(r);
        for (p, c) in self.action(r)? {
            g.add_term(p.inverse(), c);
        }
        Ok(g)
    }

    /// ψ_w(y₁…y_r) = Σ α_π y_{π1}…y_{πr} for the given arguments.
    pub fn psi_apply(&self, args: &[LiePoly]) -> Result<AssocPoly> {
        self.apply_to_factors(&args.iter().map(|a| a.poly().clone()).collect::<Vec<_>>())
    }

    /// Same rule for arbitrary factors of A. This agrees with the operator on
    /// the product only when the factors are Lie elements.
    pub fn apply_to_factors(&self, factors: &[AssocPoly]) -> Result<AssocPoly> {
        let r = factors.len();
        let mut out = AssocPoly::zero();
        for (p, c) in self.action(r)? {
            let mut prod = AssocPoly::constant(c);
            for f in p.permute(factors) {
                prod = prod.mul(&f);
            }
            out += &prod;
        }
        Ok(out)
    }

    /// The linear operator on A: each word is treated as a product of its letters.
    pub fn apply(&self, a: &AssocPoly) -> Result<AssocPoly> {
        let mut tables: BTreeMap<usize, Vec<(Perm, Q)>> = BTreeMap::new();
        let mut out = AssocPoly::zero();
        for (w, c) in a.terms() {
            let r = w.len();
            if !tables.contains_key(&r) {
                tables.insert(r, self.action(r)?);
            }
            for (p, alpha) in &tables[&r] {
                out.add_term(Word(p.permute(w.letters())), c * alpha);
            }
        }
        Ok(out)
    }
}

/// Σ x_{S₁}x_{S₂}…x_{S_m} over ordered sequences of disjoint nonempty
/// subsets covering {1..r}; each x_S lists S in increasing order.
pub fn ordered_partition_sum(m: usize, r: usize) -> AssocPoly {
    let items: Vec<u32> = (1..=r as u32).collect();
    let mut out = AssocPoly::zero();
    for op in ordered_set_partitions(&items) {
        if op.len() == m {
            let letters: Vec<u32> = op.into_iter().flatten().collect();
            out.add_term(Word(letters), Q::one());
        }
    }
    out
}

pub fn psi_apply_word(op: &OperatorR, r: usize) -> Result<AssocPoly> {
    op.psi_apply_word(r)
}

pub fn psi_apply(op: &OperatorR, args: &[LiePoly]) -> Result<AssocPoly> {
    op.psi_apply(args)
}

pub fn sigma(op: &OperatorR, r: usize) -> Result<GroupRingElem> {
    op.sigma(r)
}

/// ε_n = ψ_{zⁿ/n!}.
pub fn epsilon_op(n: usize, cap: usize) -> OperatorR {
    OperatorR::new(z_power_over_factorial(n, cap))
}

/// η = ψ_{t₁} for the prime p.
pub fn eta_op(p: u64, cap: usize) -> OperatorR {
    OperatorR::new(t_series(p, 1, cap).expect("1 is a valid residue"))
}

/// An element of ℚS_r.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElem {
    r: usize,
    coeffs: BTreeMap<Perm, Q>,
}

impl GroupRingElem {
    pub fn zero(r: usize) -> Self {
        GroupRingElem { r, coeffs: BTreeMap::new() }
    }

    pub fn identity(r: usize) -> Self {
        Self::single(Perm::identity(r), Q::one())
    }

    pub fn single(p: Perm, c: Q) -> Self {
        let mut g = Self::zero(p.degree());
        g.add_term(p, c);
        g
    }

    /// Σ_{π∈S_r} π.
    pub fn symmetrizer(r: usize) -> Self {
        let mut g = Self::zero(r);
        for p in all_perms(r) {
            g.add_term(p, Q::one());
        }
        g
    }

    pub fn degree(&self) -> usize {
        self.r
    }

    pub fn add_term(&mut self, p: Perm, c: Q) {
        assert_eq!(p.degree(), self.r);
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(p.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&p);
        }
    }

    pub fn coeff(&self, p: &Perm) -> Q {
        self.coeffs.get(p).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Perm, &Q)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient_sum(&self) -> Q {
        self.coeffs.values().fold(Q::zero(), |a, c| a + c)
    }

    pub fn scale(&self, k: &Q) -> Self {
        let mut g = Self::zero(self.r);
        for (p, c) in &self.coeffs {
            g.add_term(p.clone(), c * k);
        }
        g
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.r != other.r {
            return Err(Error::DegreeMismatch(self.r, other.r));
        }
        let mut g = self.clone();
        for (p, c) in &other.coeffs {
            g.add_term(p.clone(), c.clone());
        }
        Ok(g)
    }

    /// Convolution with (a·b)(i) = a(b(i)).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.r != other.r {
            return Err(Error::DegreeMismatch(self.r, other.r));
        }
        let mut g = Self::zero(self.r);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                g.add_term(a.compose(b), ca * cb);
            }
        }
        Ok(g)
    }

    pub fn lcm_denominator(&self) -> BigInt {
        lcm_of_denominators(self.coeffs.values())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|(p, c)| {
                    let mut v = q_json(c);
                    v["perm"] = json!(p.to_string());
                    v
                })
                .collect(),
        )
    }
}

impl fmt::Display for GroupRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.coeffs.iter().map(|(p, c)| format!("{}*{}", q_text(c), p)).collect();
        f.write_str(&parts.join(" + "))
    }
}

pub fn groupring_mul(a: &GroupRingElem, b: &GroupRingElem) -> Result<GroupRingElem> {
    a.mul(b)
}

/// σ_n(ε_n) = (1/n!)·Σπ, used as the reference value for the symmetrizer.
pub fn normalized_symmetrizer(n: usize) -> GroupRingElem {
    GroupRingElem::symmetrizer(n).scale(&Q::new(BigInt::one(), factorial(n as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::BracketSummand;
    use crate::lie::bracket;
    use crate::rational::{q_frac, q_int};
    use std::collections::BTreeMap as Map;

    fn w(letters: &[u32]) -> AssocPoly {
        AssocPoly::word(letters)
    }

    #[test]
    fn psi_word_examples() {
        assert_eq!(OperatorR::x_power(1, 3).psi_apply_word(2).unwrap(), w(&[1, 2]));
        let sq = OperatorR::x_power(2, 3);
        assert_eq!(sq.psi_apply_word(2).unwrap(), &w(&[1, 2]) + &w(&[2, 1]));
        let expect = AssocPoly::from_terms([
            (Word(vec![1, 2, 3]), q_int(2)),
            (Word(vec![1, 3, 2]), q_int(1)),
            (Word(vec![2, 1, 3]), q_int(1)),
            (Word(vec![2, 3, 1]), q_int(1)),
            (Word(vec![3, 1, 2]), q_int(1)),
        ]);
        assert_eq!(sq.psi_apply_word(3).unwrap(), expect);
        assert_eq!(sq.psi_apply_word_by_partitions(3).unwrap(), expect);
        assert_eq!(sq.psi_apply_word(4), Err(Error::CapExceeded { requested: 4, cap: 3 }));
    }

    #[test]
    fn definitions_agree() {
        for m in 0..=4 {
            let op = OperatorR::x_power(m, 6);
            for r in 0..=6 {
                assert_eq!(
                    op.psi_apply_word(r).unwrap(),
                    op.psi_apply_word_by_partitions(r).unwrap(),
                    "m={m} r={r}"
                );
            }
        }
    }

    #[test]
    fn psi_apply_examples() {
        let b = bracket(&LiePoly::generator(1), &LiePoly::generator(2));
        assert_eq!(OperatorR::x_power(1, 2).psi_apply(&[b.clone()]).unwrap(), b.poly().clone());
        let b23 = bracket(&LiePoly::generator(2), &LiePoly::generator(3));
        let got = OperatorR::x_power(2, 3).psi_apply(&[LiePoly::generator(1), b23.clone()]).unwrap();
        let x1 = AssocPoly::var(1);
        assert_eq!(got, &x1.mul(b23.poly()) + &b23.poly().mul(&x1));
        assert!(OperatorR::new(SeriesQ::zero(3)).psi_apply(&[b]).unwrap().is_zero());
    }

    #[test]
    fn psi_on_lie_arguments_matches_word_action() {
        // For Lie arguments the substitution rule equals the operator on the product.
        let args = [
            LiePoly::left_normed_word(&[1, 3]),
            LiePoly::generator(2),
            LiePoly::left_normed_word(&[4, 5, 6]),
        ];
        let prod = args.iter().fold(AssocPoly::one(), |acc, a| acc.mul(a.poly()));
        for m in 1..=4 {
            let op = OperatorR::x_power(m, 6);
            assert_eq!(op.psi_apply(&args).unwrap(), op.apply(&prod).unwrap(), "m={m}");
        }
        let eta = eta_op(3, 6);
        assert_eq!(eta.psi_apply(&args).unwrap(), eta.apply(&prod).unwrap());
    }

    #[test]
    fn sigma_examples() {
        for m in 0..5u64 {
            let s1 = OperatorR::x_plus_one_power(m, 5).sigma(1).unwrap();
            assert_eq!(s1, GroupRingElem::identity(1).scale(&q_int(m as i64)));
            for r in 0..=4 {
                let s = OperatorR::x_plus_one_power(m, 5).sigma(r).unwrap();
                assert_eq!(s.coefficient_sum(), q_int((m as i64).pow(r as u32)));
            }
        }
        for n in 0..=5 {
            assert_eq!(epsilon_op(n, 5).sigma(n).unwrap(), normalized_symmetrizer(n));
        }
        assert_eq!(OperatorR::x_plus_one_power(3, 2).sigma(0).unwrap(), GroupRingElem::identity(0));
    }

    #[test]
    fn groupring_examples() {
        let a = OperatorR::x_plus_one_power(2, 2).sigma(2).unwrap();
        assert_eq!(groupring_mul(&GroupRingElem::identity(2), &a).unwrap(), a);
        let b = OperatorR::x_plus_one_power(3, 2).sigma(2).unwrap();
        let c = OperatorR::x_plus_one_power(6, 2).sigma(2).unwrap();
        assert_eq!(groupring_mul(&a, &b).unwrap(), c);
        let sym = GroupRingElem::symmetrizer(3);
        for p in all_perms(3) {
            assert_eq!(sym.mul(&GroupRingElem::single(p, q_int(1))).unwrap(), sym);
        }
        assert_eq!(a.mul(&GroupRingElem::identity(3)), Err(Error::DegreeMismatch(2, 3)));
    }

    #[test]
    fn epsilon_examples() {
        let e0 = epsilon_op(0, 4);
        assert_eq!(e0.sigma(0).unwrap(), GroupRingElem::identity(0));
        for r in 1..=4 {
            assert!(e0.sigma(r).unwrap().is_zero());
        }
        assert_eq!(epsilon_op(1, 3).psi_apply_word(1).unwrap(), AssocPoly::var(1));
        assert_eq!(
            epsilon_op(2, 3).psi_apply_word(2).unwrap(),
            (&w(&[1, 2]) + &w(&[2, 1])).scale(&q_frac(1, 2))
        );
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta_op(2, 4).psi_apply_word(2).unwrap(), w(&[1, 2]));
        let e3 = eta_op(3, 4).psi_apply_word(2).unwrap();
        assert_eq!(e3, (&w(&[1, 2]) - &w(&[2, 1])).scale(&q_frac(1, 2)));
        for p in [2u64, 3, 5, 7] {
            assert_eq!(eta_op(p, 3).psi_apply_word(1).unwrap(), AssocPoly::var(1));
            assert!(eta_op(p, 3).sigma(0).unwrap().is_zero());
        }
    }

    #[test]
    fn sigma_is_multiplicative_under_composition() {
        // (θ∘φ)(x₁…x_r) = θ(φ(x₁…x_r)) pins the σ_r convention.
        for a in 0..=4 {
            for b in 0..=4 {
                let theta = OperatorR::x_power(a, 5);
                let phi = OperatorR::x_power(b, 5);
                for r in 1..=4 {
                    let composed = theta.apply(&phi.psi_apply_word(r).unwrap()).unwrap();
                    let mut sig = GroupRingElem::zero(r);
                    for (wd, c) in composed.terms() {
                        sig.add_term(Perm::from_one_line(wd.letters()).inverse(), c.clone());
                    }
                    let prod = theta.sigma(r).unwrap().mul(&phi.sigma(r).unwrap()).unwrap();
                    assert_eq!(sig, prod, "a={a} b={b} r={r}");
                }
            }
        }
    }

    #[test]
    fn adjacent_swap_derivation_property() {
        // U_{r+1}(…,x_i,x_{i+1},…) − U_{r+1}(…,x_{i+1},x_i,…) = U_r(…,[x_i,x_{i+1}],…)
        for m in 1..=4 {
            for r in 1..=4usize {
                let op = OperatorR::x_power(m, r + 1);
                let big = op.psi_apply_word(r + 1).unwrap();
                for i in 1..=r as u32 {
                    let swap: Map<u32, AssocPoly> = (1..=r as u32 + 1)
                        .map(|j| {
                            let t = if j == i { i + 1 } else if j == i + 1 { i } else { j };
                            (j, AssocPoly::var(t))
                        })
                        .collect();
                    let lhs = &big - &big.substitute(&swap).unwrap();
                    let s = BracketSummand {
                        prefix: (1..i).collect(),
                        pair: (i, i + 1),
                        suffix: (i + 2..=r as u32 + 1).collect(),
                    };
                    let (_, letters) = s.slots();
                    let mut factors: Vec<AssocPoly> =
                        letters[..i as usize - 1].iter().map(|&x| AssocPoly::var(x)).collect();
                    factors.push(AssocPoly::var(i).commutator(&AssocPoly::var(i + 1)));
                    factors.extend(letters[i as usize + 1..].iter().map(|&x| AssocPoly::var(x)));
                    let rhs = op.apply_to_factors(&factors).unwrap();
                    assert_eq!(lhs, rhs, "m={m} r={r} i={i}");
                }
            }
        }
    }

    #[test]
    fn json_shape() {
        let s = eta_op(3, 2).sigma(2).unwrap();
        let v = s.to_json();
        assert_eq!(v[0]["perm"], "[1,2]");
        assert_eq!(v[0]["num"], "1");
        assert_eq!(v[0]["den"], "2");
    }
}
