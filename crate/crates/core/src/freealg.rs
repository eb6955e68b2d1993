//! The free associative algebra over ℚ on generators x₁, x₂, …, and its
//! quotient by the words of degree ≥ 2 in some variable.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{q_int, render_terms, Q};

/// A monomial x_{i₁}x_{i₂}…x_{i_k}; the empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: u32) -> Self {
        Word(vec![i])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// True when every letter of `vars` occurs exactly once and nothing else occurs.
    pub fn is_multilinear_in(&self, vars: &BTreeSet<u32>) -> bool {
        if self.len() != vars.len() {
            return false;
        }
        let mut seen = BTreeSet::new();
        self.0.iter().all(|x| vars.contains(x) && seen.insert(*x))
    }

    fn has_repeat(&self) -> bool {
        let mut seen = BTreeSet::new();
        !self.0.iter().all(|x| seen.insert(*x))
    }
}

/// Length first, then lexicographic on the index sequence.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("x{i}")).collect();
        f.write_str(&parts.join("*"))
    }
}

/// A finite ℚ-combination of words. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AssocPoly {
    terms: BTreeMap<Word, Q>,
}

impl AssocPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(Word::unit(), c)
    }

    pub fn var(i: u32) -> Self {
        Self::monomial(Word::letter(i), Q::one())
    }

    pub fn monomial(w: Word, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn word(letters: &[u32]) -> Self {
        Self::monomial(Word(letters.to_vec()), Q::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Q)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &AssocPoly, k: &Q) {
        if k.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Word::unit())
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn scale(&self, k: &Q) -> AssocPoly {
        if k.is_zero() {
            return AssocPoly::zero();
        }
        AssocPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect() }
    }

    pub fn scale_int(&self, k: i64) -> AssocPoly {
        self.scale(&q_int(k))
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    /// Sum of the terms whose word has length `d`.
    pub fn homogeneous_part(&self, d: usize) -> AssocPoly {
        self.filter(|w| w.len() == d)
    }

    pub fn filter(&self, keep: impl Fn(&Word) -> bool) -> AssocPoly {
        AssocPoly {
            terms: self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    /// Set of generators occurring anywhere.
    pub fn support(&self) -> BTreeSet<u32> {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).collect()
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Concatenation product.
    pub fn mul(&self, other: &AssocPoly) -> AssocPoly {
        let mut out = AssocPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.concat(b), ca * cb);
            }
        }
        out
    }

    /// ab − ba.
    pub fn commutator(&self, other: &AssocPoly) -> AssocPoly {
        &self.mul(other) - &other.mul(self)
    }

    /// Keeps exactly the words containing each of `vars` once and nothing else.
    pub fn multilinear_component(&self, vars: &BTreeSet<u32>) -> AssocPoly {
        self.filter(|w| w.is_multilinear_in(vars))
    }

    /// Applies the algebra endomorphism determined by `images`.
    pub fn substitute(&self, images: &BTreeMap<u32, AssocPoly>) -> Result<AssocPoly> {
        let mut out = AssocPoly::zero();
        for (w, c) in &self.terms {
            let mut acc = AssocPoly::constant(c.clone());
            for x in &w.0 {
                let img = images.get(x).ok_or(Error::MissingImage(*x))?;
                acc = acc.mul(img);
                if acc.is_zero() {
                    break;
                }
            }
            out += &acc;
        }
        Ok(out)
    }

    /// Renames generators letter by letter (a substitution by single letters).
    pub fn rename(&self, map: impl Fn(u32) -> u32) -> AssocPoly {
        AssocPoly::from_terms(
            self.terms.iter().map(|(w, c)| (Word(w.0.iter().map(|&x| map(x)).collect()), c.clone())),
        )
    }

    /// Coefficient vector against `space`; fails if a word lies outside it.
    pub fn vectorize(&self, space: &WordSpace) -> Result<Vec<Q>> {
        let mut v = vec![Q::zero(); space.len()];
        for (w, c) in &self.terms {
            let i = space.index(w).ok_or(Error::OutsideSpace)?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    /// Coefficient vector against `space`, ignoring words outside it.
    pub fn project(&self, space: &WordSpace) -> Vec<Q> {
        let mut v = vec![Q::zero(); space.len()];
        for (w, c) in &self.terms {
            if let Some(i) = space.index(w) {
                v[i] = c.clone();
            }
        }
        v
    }

    pub fn from_vector(space: &WordSpace, v: &[Q]) -> AssocPoly {
        AssocPoly::from_terms(space.words().iter().cloned().zip(v.iter().cloned()))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| {
                    json!({
                        "word": w.0,
                        "num": c.numer().to_string(),
                        "den": c.denom().to_string(),
                    })
                })
                .collect(),
        )
    }

    /// Reduces every coefficient modulo `p` into `0..p`; requires p-integral coefficients.
    pub fn reduce_mod(&self, p: u64) -> Option<AssocPoly> {
        let pb = BigInt::from(p);
        let mut out = AssocPoly::zero();
        for (w, c) in &self.terms {
            let den = c.denom();
            let inv = mod_inverse(&(den % &pb), &pb)?;
            let r = ((c.numer() % &pb) * inv % &pb + &pb) % &pb;
            out.add_term(w.clone(), Q::from_integer(r));
        }
        Some(out)
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    use num_integer::Integer;
    let eg = a.extended_gcd(m);
    if eg.gcd.is_one() || eg.gcd == -BigInt::one() {
        Some(((eg.x * eg.gcd) % m + m) % m)
    } else {
        None
    }
}

impl fmt::Display for AssocPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(Q, String)> = self
            .terms
            .iter()
            .map(|(w, c)| (c.clone(), if w.is_empty() { String::new() } else { w.to_string() }))
            .collect();
        f.write_str(&render_terms(&terms, true))
    }
}

impl Add for &AssocPoly {
    type Output = AssocPoly;
    fn add(self, rhs: &AssocPoly) -> AssocPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl std::ops::AddAssign<&AssocPoly> for AssocPoly {
    fn add_assign(&mut self, rhs: &AssocPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl Sub for &AssocPoly {
    type Output = AssocPoly;
    fn sub(self, rhs: &AssocPoly) -> AssocPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

impl Neg for &AssocPoly {
    type Output = AssocPoly;
    fn neg(self) -> AssocPoly {
        self.scale(&-Q::one())
    }
}

impl Mul for &AssocPoly {
    type Output = AssocPoly;
    fn mul(self, rhs: &AssocPoly) -> AssocPoly {
        AssocPoly::mul(self, rhs)
    }
}

pub fn poly_mul(a: &AssocPoly, b: &AssocPoly) -> AssocPoly {
    a.mul(b)
}

/// An ordered list of words fixing the coordinates used by the linear algebra.
#[derive(Debug, Clone)]
pub struct WordSpace {
    words: Vec<Word>,
    index: BTreeMap<Word, usize>,
}

impl WordSpace {
    /// Sorts (canonical order) and deduplicates.
    pub fn new(words: impl IntoIterator<Item = Word>) -> Self {
        let set: BTreeSet<Word> = words.into_iter().collect();
        let words: Vec<Word> = set.into_iter().collect();
        let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        WordSpace { words, index }
    }

    /// All n! words x_{π1}…x_{πn}.
    pub fn multilinear(n: usize) -> Self {
        Self::new(crate::perm::all_perms(n).into_iter().map(|p| Word(p.one_line_1based())))
    }

    /// The (n−1)! multilinear words starting with x₁: coordinates of multilinear
    /// Lie elements, which are determined by these coefficients.
    pub fn multilinear_x1_initial(n: usize) -> Self {
        Self::new(
            crate::perm::all_perms(n)
                .into_iter()
                .map(|p| Word(p.one_line_1based()))
                .filter(|w| w.0.first() == Some(&1)),
        )
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }
}

/// One summand y₁…[y_i, y_{i+1}]…y_r produced by the bubble sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketSummand {
    pub prefix: Vec<u32>,
    pub pair: (u32, u32),
    pub suffix: Vec<u32>,
}

impl BracketSummand {
    pub fn expand(&self) -> AssocPoly {
        let (a, b) = self.pair;
        let pre = AssocPoly::word(&self.prefix);
        let suf = AssocPoly::word(&self.suffix);
        pre.mul(&AssocPoly::var(a).commutator(&AssocPoly::var(b))).mul(&suf)
    }

    /// The letters in order with the bracketed pair as a single slot.
    pub fn slots(&self) -> (usize, Vec<u32>) {
        let mut v = self.prefix.clone();
        v.push(self.pair.0);
        v.push(self.pair.1);
        v.extend_from_slice(&self.suffix);
        (self.prefix.len(), v)
    }
}

impl fmt::Display for BracketSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.prefix.iter().map(|i| format!("x{i}")).collect();
        parts.push(format!("[x{},x{}]", self.pair.0, self.pair.1));
        parts.extend(self.suffix.iter().map(|i| format!("x{i}")));
        f.write_str(&parts.join("*"))
    }
}

/// Sorts x_{π1}…x_{πr} into x₁…x_r by adjacent swaps, recording each
/// bracket term, so that x_{π1}…x_{πr} = x₁…x_r + Σ summands.
/// `pi` is given in one-line notation on 1..r.
pub fn bubble_decompose(pi: &[u32]) -> Vec<BracketSummand> {
    let mut cur = pi.to_vec();
    let mut out = Vec::new();
    while let Some(i) = (0..cur.len().saturating_sub(1)).find(|&i| cur[i] > cur[i + 1]) {
        out.push(BracketSummand {
            prefix: cur[..i].to_vec(),
            pair: (cur[i], cur[i + 1]),
            suffix: cur[i + 2..].to_vec(),
        });
        cur.swap(i, i + 1);
    }
    out
}

/// An element of A modulo the words that repeat a letter or use a letter
/// outside the declared variable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPoly {
    vars: BTreeSet<u32>,
    poly: AssocPoly,
}

impl TruncatedPoly {
    pub fn new(vars: BTreeSet<u32>, poly: &AssocPoly) -> Self {
        let poly = poly.filter(|w| !w.has_repeat() && w.0.iter().all(|x| vars.contains(x)));
        TruncatedPoly { vars, poly }
    }

    pub fn over(n: u32, poly: &AssocPoly) -> Self {
        Self::new((1..=n).collect(), poly)
    }

    pub fn one(vars: BTreeSet<u32>) -> Self {
        Self::new(vars, &AssocPoly::one())
    }

    pub fn vars(&self) -> &BTreeSet<u32> {
        &self.vars
    }

    pub fn poly(&self) -> &AssocPoly {
        &self.poly
    }

    pub fn into_poly(self) -> AssocPoly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn mask(w: &Word) -> u128 {
        w.0.iter().fold(0u128, |m, &x| m | (1u128 << (x % 128)))
    }

    pub fn mul(&self, other: &TruncatedPoly) -> TruncatedPoly {
        let lhs: Vec<(&Word, &Q, u128)> =
            self.poly.terms().map(|(w, c)| (w, c, Self::mask(w))).collect();
        let rhs: Vec<(&Word, &Q, u128)> =
            other.poly.terms().map(|(w, c)| (w, c, Self::mask(w))).collect();
        let mut out = AssocPoly::zero();
        for (a, ca, ma) in &lhs {
            for (b, cb, mb) in &rhs {
                if ma & mb == 0 {
                    out.add_term(a.concat(b), *ca * *cb);
                }
            }
        }
        TruncatedPoly::new(self.vars.clone(), &out)
    }

    pub fn add(&self, other: &TruncatedPoly) -> TruncatedPoly {
        TruncatedPoly { vars: self.vars.clone(), poly: &self.poly + &other.poly }
    }

    pub fn sub(&self, other: &TruncatedPoly) -> TruncatedPoly {
        TruncatedPoly { vars: self.vars.clone(), poly: &self.poly - &other.poly }
    }

    pub fn scale(&self, k: &Q) -> TruncatedPoly {
        TruncatedPoly { vars: self.vars.clone(), poly: self.poly.scale(k) }
    }

    pub fn pow(&self, e: u32) -> TruncatedPoly {
        let mut acc = TruncatedPoly::one(self.vars.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The endomorphism x_i ↦ 0 (other generators fixed).
    pub fn kill_var(&self, i: u32) -> TruncatedPoly {
        TruncatedPoly { vars: self.vars.clone(), poly: self.poly.filter(|w| !w.0.contains(&i)) }
    }

    fn without_constant(&self) -> TruncatedPoly {
        TruncatedPoly { vars: self.vars.clone(), poly: self.poly.filter(|w| !w.is_empty()) }
    }

    /// Σ a^r/r!; `a` must have zero constant term.
    pub fn exp(&self) -> Result<TruncatedPoly> {
        if !self.poly.constant_term().is_zero() {
            return Err(Error::BadConstantTerm("exp needs 0".into()));
        }
        let mut out = TruncatedPoly::one(self.vars.clone());
        let mut term = out.clone();
        let mut r = 1i64;
        loop {
            term = term.mul(self).scale(&Q::new(BigInt::one(), BigInt::from(r)));
            if term.is_zero() {
                return Ok(out);
            }
            out = out.add(&term);
            r += 1;
        }
    }

    /// log(w) = Σ (−1)^{r+1} u^r / r for w = 1 + u; the constant term must be 1.
    pub fn log(&self) -> Result<TruncatedPoly> {
        if !self.poly.constant_term().is_one() {
            return Err(Error::BadConstantTerm("log needs 1".into()));
        }
        let u = self.without_constant();
        let mut out = TruncatedPoly::new(self.vars.clone(), &AssocPoly::zero());
        let mut power = TruncatedPoly::one(self.vars.clone());
        let mut r = 1i64;
        loop {
            power = power.mul(&u);
            if power.is_zero() {
                return Ok(out);
            }
            let sign = if r % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&Q::new(BigInt::from(sign), BigInt::from(r))));
            r += 1;
        }
    }

    /// (1 + u)⁻¹ = Σ (−u)^r; the constant term must be 1.
    pub fn inverse(&self) -> Result<TruncatedPoly> {
        if !self.poly.constant_term().is_one() {
            return Err(Error::BadConstantTerm("inverse needs 1".into()));
        }
        let neg_u = self.without_constant().scale(&-Q::one());
        let mut out = TruncatedPoly::one(self.vars.clone());
        let mut power = out.clone();
        loop {
            power = power.mul(&neg_u);
            if power.is_zero() {
                return Ok(out);
            }
            out = out.add(&power);
        }
    }
}

pub fn trunc_exp(a: &TruncatedPoly) -> Result<TruncatedPoly> {
    a.exp()
}

pub fn trunc_log(a: &TruncatedPoly) -> Result<TruncatedPoly> {
    a.log()
}

pub fn trunc_inverse(a: &TruncatedPoly) -> Result<TruncatedPoly> {
    a.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_perms;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn x(i: u32) -> AssocPoly {
        AssocPoly::var(i)
    }

    fn vars(v: &[u32]) -> BTreeSet<u32> {
        v.iter().copied().collect()
    }

    #[test]
    fn word_order_is_length_then_lex() {
        let mut ws = vec![Word(vec![2]), Word(vec![1, 2]), Word(vec![3]), Word(vec![1, 1, 1]), Word::unit()];
        ws.sort();
        assert_eq!(
            ws,
            vec![Word::unit(), Word(vec![2]), Word(vec![3]), Word(vec![1, 2]), Word(vec![1, 1, 1])]
        );
    }

    #[test]
    fn mul_examples() {
        assert_eq!(poly_mul(&x(1), &x(2)), AssocPoly::word(&[1, 2]));
        assert_eq!(
            poly_mul(&(&x(1) + &x(2)), &x(1)),
            &AssocPoly::word(&[1, 1]) + &AssocPoly::word(&[2, 1])
        );
        let a = &x(3).scale_int(2) - &AssocPoly::word(&[1, 2]);
        assert_eq!(poly_mul(&AssocPoly::one(), &a), a);
    }

    #[test]
    fn multilinear_examples() {
        // (1+x1)(1+x2) − 1 = x1 + x2 + x1x2
        let u = &(&AssocPoly::one() + &x(1)).mul(&(&AssocPoly::one() + &x(2))) - &AssocPoly::one();
        assert_eq!(u, &(&x(1) + &x(2)) + &AssocPoly::word(&[1, 2]));
        assert_eq!(u.multilinear_component(&vars(&[1, 2])), AssocPoly::word(&[1, 2]));
        assert!(AssocPoly::word(&[1, 1]).multilinear_component(&vars(&[1])).is_zero());
        assert_eq!(
            AssocPoly::word(&[2, 1]).multilinear_component(&vars(&[1, 2])),
            AssocPoly::word(&[2, 1])
        );
    }

    #[test]
    fn substitute_examples() {
        let swap = BTreeMap::from([(1, x(2)), (2, x(1))]);
        assert_eq!(AssocPoly::word(&[1, 2]).substitute(&swap).unwrap(), AssocPoly::word(&[2, 1]));
        let br = BTreeMap::from([(1, x(1).commutator(&x(2)))]);
        assert_eq!(
            x(1).substitute(&br).unwrap(),
            &AssocPoly::word(&[1, 2]) - &AssocPoly::word(&[2, 1])
        );
        let kill = BTreeMap::from([(1, AssocPoly::zero()), (2, x(2))]);
        assert!(AssocPoly::word(&[1, 2]).substitute(&kill).unwrap().is_zero());
        assert_eq!(
            AssocPoly::word(&[3, 1]).substitute(&kill),
            Err(Error::MissingImage(3))
        );
    }

    fn check_bubble(pi: &[u32]) {
        let r = pi.len() as u32;
        let ident: Vec<u32> = (1..=r).collect();
        let mut acc = AssocPoly::word(&ident);
        for s in bubble_decompose(pi) {
            acc += &s.expand();
        }
        assert_eq!(acc, AssocPoly::word(pi), "pi = {pi:?}");
    }

    #[test]
    fn bubble_examples() {
        assert!(bubble_decompose(&[1, 2, 3]).is_empty());
        let d = bubble_decompose(&[2, 1]);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].pair, (2, 1));
        check_bubble(&[2, 1]);
        check_bubble(&[3, 2, 1]);
        assert_eq!(d[0].to_string(), "[x2,x1]");
    }

    #[test]
    fn bubble_random_perms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for r in 1..=6u32 {
            for _ in 0..10 {
                let mut pi: Vec<u32> = (1..=r).collect();
                pi.shuffle(&mut rng);
                check_bubble(&pi);
            }
        }
        for p in all_perms(4) {
            check_bubble(&p.one_line_1based());
        }
    }

    #[test]
    fn truncated_examples() {
        let t1 = TruncatedPoly::over(1, &x(1));
        assert_eq!(trunc_exp(&t1).unwrap().poly(), &(&AssocPoly::one() + &x(1)));
        let t12 = TruncatedPoly::over(2, &(&x(1) + &x(2)));
        assert_eq!(trunc_log(&trunc_exp(&t12).unwrap()).unwrap(), t12);
        let w = TruncatedPoly::over(2, &(&AssocPoly::one() + &x(2).scale_int(2)));
        assert_eq!(
            trunc_inverse(&w).unwrap().poly(),
            &(&AssocPoly::one() - &x(2).scale_int(2))
        );
        assert!(matches!(trunc_exp(&w), Err(Error::BadConstantTerm(_))));
        assert!(matches!(trunc_log(&t1), Err(Error::BadConstantTerm(_))));
        // Letters outside the declared set are discarded on creation.
        assert!(TruncatedPoly::over(2, &x(3)).is_zero());
    }

    #[test]
    fn truncated_inverse_is_two_sided() {
        let p = &(&AssocPoly::one() + &AssocPoly::word(&[1, 2])) + &x(3).scale_int(-5);
        let t = TruncatedPoly::over(3, &p);
        let inv = t.inverse().unwrap();
        assert_eq!(t.mul(&inv), TruncatedPoly::one(vars(&[1, 2, 3])));
        assert_eq!(inv.mul(&t), TruncatedPoly::one(vars(&[1, 2, 3])));
    }

    #[test]
    fn reduce_mod_p() {
        let p = &AssocPoly::word(&[1, 2]).scale_int(7) + &AssocPoly::word(&[2, 1]).scale(&Q::new((-1).into(), 2.into()));
        let r = p.reduce_mod(3).unwrap();
        assert_eq!(r, &AssocPoly::word(&[1, 2]) + &AssocPoly::word(&[2, 1]));
        assert!(AssocPoly::word(&[1]).scale(&Q::new(1.into(), 3.into())).reduce_mod(3).is_none());
    }

    fn arb_poly(nvars: u32, maxlen: usize) -> impl Strategy<Value = AssocPoly> {
        prop::collection::vec(
            (prop::collection::vec(1..=nvars, 0..=maxlen), -4i64..=4),
            0..5,
        )
        .prop_map(|ts| AssocPoly::from_terms(ts.into_iter().map(|(w, c)| (Word(w), q_int(c)))))
    }

    proptest! {
        #[test]
        fn multilinear_component_is_projection(a in arb_poly(3, 4)) {
            let v = vars(&[1, 2, 3]);
            let once = a.multilinear_component(&v);
            prop_assert_eq!(once.multilinear_component(&v), once);
        }

        #[test]
        fn substitute_respects_products(
            a in arb_poly(3, 3), b in arb_poly(3, 3),
            i1 in arb_poly(2, 2), i2 in arb_poly(2, 2), i3 in arb_poly(2, 2),
        ) {
            let images = BTreeMap::from([(1, i1), (2, i2), (3, i3)]);
            let lhs = a.mul(&b).substitute(&images).unwrap();
            let rhs = a.substitute(&images).unwrap().mul(&b.substitute(&images).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn truncated_exp_log_round_trip(a in arb_poly(3, 3)) {
            let a = a.filter(|w| !w.is_empty());
            let t = TruncatedPoly::over(3, &a);
            prop_assert_eq!(t.exp().unwrap().log().unwrap(), t);
        }
    }
}
