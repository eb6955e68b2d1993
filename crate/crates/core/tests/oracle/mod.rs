//! Independent oracle for the integration tests: a naive word-map polynomial
//! type that recomputes ψ, the K relators, δ, smoothing and certificate
//! replays from their defining formulas without the library's algebra.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;
use wall_relators::freealg::AssocPoly;

pub type Q = BigRational;

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn binom(n: u64, k: u64) -> Q {
    if k > n {
        return Q::zero();
    }
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    Q::from_integer(c)
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * i)
}

/// Signed Stirling numbers of the first kind: z^j/j! = Σ_k s(k,j) x^k/k! for z = log(1+x).
pub fn stirling1(max: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); max + 1]; max + 1];
    s[0][0] = BigInt::one();
    for k in 0..max {
        for j in 1..=k + 1 {
            s[k + 1][j] = &s[k][j - 1] - BigInt::from(k) * &s[k][j];
        }
    }
    s
}

/// Coefficients of z^r/r! up to x^cap.
pub fn z_power_over_factorial(r: usize, cap: usize) -> Vec<Q> {
    let s = stirling1(cap.max(r));
    (0..=cap).map(|k| if r <= k { Q::new(s[k][r].clone(), factorial(k)) } else { Q::zero() }).collect()
}

/// Coefficients of t_i = Σ_{j ≡ i mod (p−1), j ≥ 1} z^j/j! up to x^cap.
pub fn t(p: u64, i: u64, cap: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); cap + 1];
    let mut j = i as usize;
    while j <= cap {
        for (o, c) in out.iter_mut().zip(z_power_over_factorial(j, cap)) {
            *o += c;
        }
        j += (p - 1) as usize;
    }
    out
}

pub fn p_integral(c: &Q, p: u64) -> bool {
    !c.denom().is_multiple_of(&BigInt::from(p))
}

/// A noncommutative polynomial as a plain word → coefficient map.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct P(pub BTreeMap<Vec<u32>, Q>);

impl P {
    pub fn zero() -> P {
        P::default()
    }

    pub fn one() -> P {
        P::word(&[])
    }

    pub fn word(w: &[u32]) -> P {
        P(BTreeMap::from([(w.to_vec(), Q::one())]))
    }

    pub fn from_lib(a: &AssocPoly) -> P {
        let mut p = P::zero();
        for (w, c) in a.terms() {
            p.add_term(w.letters().to_vec(), c.clone());
        }
        p
    }

    pub fn add_term(&mut self, w: Vec<u32>, c: Q) {
        let e = self.0.entry(w.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&w);
        }
    }

    pub fn add(&self, o: &P) -> P {
        let mut out = self.clone();
        for (w, c) in &o.0 {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &P) -> P {
        self.add(&o.scale(&qi(-1)))
    }

    pub fn scale(&self, k: &Q) -> P {
        let mut out = P::zero();
        for (w, c) in &self.0 {
            out.add_term(w.clone(), c * k);
        }
        out
    }

    fn mul_filtered(&self, o: &P, keep: impl Fn(&[u32]) -> bool) -> P {
        let mut out = P::zero();
        for (a, x) in &self.0 {
            for (b, y) in &o.0 {
                let w: Vec<u32> = a.iter().chain(b).copied().collect();
                if keep(&w) {
                    out.add_term(w, x * y);
                }
            }
        }
        out
    }

    pub fn mul(&self, o: &P) -> P {
        self.mul_filtered(o, |_| true)
    }

    /// Product with every word containing a repeated letter dropped; those
    /// words span an ideal, so this is exact on the distinct-letter part.
    pub fn mul_distinct(&self, o: &P) -> P {
        self.mul_filtered(o, |w| {
            let mut v = w.to_vec();
            v.sort_unstable();
            v.windows(2).all(|p| p[0] != p[1])
        })
    }

    pub fn rename(&self, f: impl Fn(u32) -> u32) -> P {
        let mut out = P::zero();
        for (w, c) in &self.0 {
            out.add_term(w.iter().map(|&i| f(i)).collect(), c.clone());
        }
        out
    }

    pub fn degree_part(&self, d: usize) -> P {
        P(self.0.iter().filter(|(w, _)| w.len() == d).map(|(w, c)| (w.clone(), c.clone())).collect())
    }

    pub fn without(&self, x: u32) -> P {
        P(self.0.iter().filter(|(w, _)| !w.contains(&x)).map(|(w, c)| (w.clone(), c.clone())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficient_sum(&self) -> Q {
        self.0.values().fold(Q::zero(), |a, c| a + c)
    }
}

pub fn bracket(a: &P, b: &P) -> P {
    a.mul(b).sub(&b.mul(a))
}

pub fn left_normed(letters: &[u32]) -> P {
    let mut acc = P::word(&letters[..1]);
    for &x in &letters[1..] {
        acc = bracket(&acc, &P::word(&[x]));
    }
    acc
}

/// (Π(1+x_i) − 1)^k over x₁..x_r, keeping distinct-letter words.
pub fn u_power(r: usize, k: usize) -> P {
    let mut prod = P::one();
    for i in 1..=r as u32 {
        prod = prod.mul_distinct(&P::one().add(&P::word(&[i])));
    }
    let u = prod.sub(&P::one());
    let mut out = P::one();
    for _ in 0..k {
        out = out.mul_distinct(&u);
    }
    out
}

/// ψ_w(x₁…x_r) for the series with the given coefficients: the
/// multilinear part of w(Π(1+x_i) − 1).
pub fn psi(w: &[Q], r: usize) -> P {
    let mut out = P::zero();
    for (k, c) in w.iter().enumerate().take(r + 1) {
        if !c.is_zero() {
            out = out.add(&u_power(r, k).degree_part(r).scale(c));
        }
    }
    out
}

pub fn monomial(k: usize) -> Vec<Q> {
    (0..=k).map(|i| if i == k { Q::one() } else { Q::zero() }).collect()
}

pub fn x_plus_one_power(m: u64, cap: usize) -> Vec<Q> {
    (0..=cap as u64).map(|k| binom(m, k)).collect()
}

/// θ applied to a multilinear element of degree r, given θ(x₁…x_r).
pub fn apply(theta_r: &P, a: &P) -> P {
    let mut out = P::zero();
    for (w, c) in &a.0 {
        out = out.add(&theta_r.rename(|i| w[i as usize - 1]).scale(c));
    }
    out
}

/// K_m(y₁,…,y_m): K₁ = q·y₁ and K_m = Σ_{r=2}^{q} C(q,r)·[y_m | ψ_{x^{r−1}}(y₁…y_{m−1})].
pub fn k(q: u64, args: &[P]) -> P {
    let m = args.len();
    if m == 1 {
        return args[0].scale(&qi(q as i64));
    }
    let mut out = P::zero();
    for r in 2..=q {
        let k = (r - 1) as usize;
        if k > m - 1 {
            break;
        }
        for (w, c) in &psi(&monomial(k), m - 1).0 {
            let mut b = args[m - 1].clone();
            for &i in w {
                b = bracket(&b, &args[i as usize - 1]);
            }
            out = out.add(&b.scale(&(c * binom(q, r))));
        }
    }
    out
}

pub fn k_letters(q: u64, letters: &[u32]) -> P {
    k(q, &letters.iter().map(|&i| P::word(&[i])).collect::<Vec<_>>())
}

/// Words starting with x₁ go to their left-normed bracket, the rest to 0.
pub fn delta(a: &P) -> P {
    let mut out = P::zero();
    for (w, c) in &a.0 {
        if w.first() == Some(&1) {
            out = out.add(&left_normed(w).scale(c));
        }
    }
    out
}

fn inverse(a: &P, n: usize) -> P {
    let t = a.sub(&P::one()).scale(&qi(-1));
    let mut out = P::one();
    let mut power = P::one();
    for _ in 0..n {
        power = power.mul_distinct(&t);
        out = out.add(&power);
    }
    out
}

fn log(a: &P, n: usize) -> P {
    let t = a.sub(&P::one());
    let mut out = P::zero();
    let mut power = P::one();
    for k in 1..=n {
        power = power.mul_distinct(&t);
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out = out.add(&power.scale(&Q::new(BigInt::from(sign), BigInt::from(k))));
    }
    out
}

/// log of w_n, where w = (e^{x₁}…e^{x_n})^q and w_i = w_{i−1}·(w_{i−1}|_{x_i=0})⁻¹,
/// all on distinct-letter words (there e^{x_i} = 1 + x_i).
pub fn smoothing_z(q: u64, n: usize) -> P {
    let mut base = P::one();
    for i in 1..=n as u32 {
        base = base.mul_distinct(&P::one().add(&P::word(&[i])));
    }
    let mut w = P::one();
    for _ in 0..q {
        w = w.mul_distinct(&base);
    }
    for i in 1..=n as u32 {
        let killed = w.without(i);
        w = w.mul_distinct(&inverse(&killed, n));
    }
    log(&w, n)
}

pub fn parse_q(v: &Value) -> Q {
    let num: BigInt = v["num"].as_str().expect("num").parse().expect("integer");
    let den: BigInt = v["den"].as_str().expect("den").parse().expect("integer");
    Q::new(num, den)
}

/// Re-evaluates a serialized certificate from the provenance of each
/// generator: a product of K-values on left-normed brackets.
pub fn replay(cert: &Value, q: u64) -> Result<P, String> {
    let mut out = P::zero();
    for g in cert["generators"].as_array().ok_or("certificate has no generators")? {
        let coeff = parse_q(&g["coeff"]);
        let mut prod = P::one();
        for f in g["provenance"]["factors"].as_array().ok_or("generator has no factors")? {
            let args: Vec<P> = f["args"]
                .as_array()
                .ok_or("factor has no args")?
                .iter()
                .map(|a| {
                    let letters: Vec<u32> =
                        a.as_array().expect("letters").iter().map(|x| x.as_u64().expect("letter") as u32).collect();
                    left_normed(&letters)
                })
                .collect();
            prod = prod.mul(&k(q, &args));
        }
        out = out.add(&prod.scale(&coeff));
    }
    Ok(out)
}

pub fn integral_certificate(cert: &Value) -> bool {
    cert["ring"] == "Z"
        && cert["generators"].as_array().is_some_and(|gs| gs.iter().all(|g| parse_q(&g["coeff"]).is_integer()))
}
