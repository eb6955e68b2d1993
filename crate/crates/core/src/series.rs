//! Truncated univariate power series over ℚ.
//!
//! A series always carries its cap `N` and stores the coefficients of
//! `x^0..=x^N`. Arithmetic between series of different caps is refused.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, is_p_integral, q_big, q_int, render_terms, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesQ {
    coeffs: Vec<Q>,
}

impl SeriesQ {
    pub fn zero(cap: usize) -> Self {
        SeriesQ { coeffs: vec![Q::zero(); cap + 1] }
    }

    pub fn one(cap: usize) -> Self {
        Self::monomial(cap, 0, Q::one())
    }

    /// `c·x^k`, or zero if `k` exceeds the cap.
    pub fn monomial(cap: usize, k: usize, c: Q) -> Self {
        let mut s = Self::zero(cap);
        if k <= cap {
            s.coeffs[k] = c;
        }
        s
    }

    /// Coefficients beyond the cap are dropped.
    pub fn from_coeffs(cap: usize, coeffs: impl IntoIterator<Item = Q>) -> Self {
        let mut s = Self::zero(cap);
        for (k, c) in coeffs.into_iter().enumerate().take(cap + 1) {
            s.coeffs[k] = c;
        }
        s
    }

    /// `X^m = (1+x)^m`.
    pub fn x_plus_one_pow(cap: usize, m: u64) -> Self {
        Self::from_coeffs(cap, (0..=cap as u64).map(|k| q_big(binomial(m, k))))
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &Q) -> Self {
        SeriesQ { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Same coefficients under a different cap.
    pub fn with_cap(&self, cap: usize) -> Self {
        Self::from_coeffs(cap, self.coeffs.iter().cloned())
    }

    fn check_cap(&self, other: &Self) -> Result<()> {
        if self.cap() != other.cap() {
            return Err(Error::CapMismatch(self.cap(), other.cap()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_cap(other)?;
        Ok(SeriesQ { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    /// Cauchy product truncated at the common cap.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_cap(other)?;
        let cap = self.cap();
        let mut out = Self::zero(cap);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(cap + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.cap());
        for _ in 0..e {
            acc = acc.mul(self).expect("same cap");
        }
        acc
    }

    /// Σ aⁿ/n!; requires a zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let cap = self.cap();
        let mut out = Self::one(cap);
        let mut term = Self::one(cap);
        for n in 1..=cap {
            term = term.mul(self)?.scale(&Q::new(BigInt::one(), BigInt::from(n)));
            if term.is_zero() {
                break;
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Σ_{n≥1} (−1)^{n+1} aⁿ/n, i.e. log(1 + a); requires a zero constant term.
    pub fn log1p_of(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let cap = self.cap();
        let mut out = Self::zero(cap);
        let mut power = Self::one(cap);
        for n in 1..=cap {
            power = power.mul(self)?;
            let sign = if n % 2 == 1 { 1 } else { -1 };
            out = out.try_add(&power.scale(&Q::new(BigInt::from(sign), BigInt::from(n))))?;
        }
        Ok(out)
    }

    /// Evaluates the composition `self(a)`; requires `a` to have zero constant term.
    pub fn compose(&self, a: &Self) -> Result<Self> {
        self.check_cap(a)?;
        if !a.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let cap = self.cap();
        let mut out = Self::zero(cap);
        let mut power = Self::one(cap);
        for (n, c) in self.coeffs.iter().enumerate() {
            if n > 0 {
                power = power.mul(a)?;
            }
            if !c.is_zero() {
                out = out.try_add(&power.scale(c))?;
            }
        }
        Ok(out)
    }
}

impl Add for &SeriesQ {
    type Output = SeriesQ;
    fn add(self, rhs: &SeriesQ) -> SeriesQ {
        self.try_add(rhs).expect("series caps must agree")
    }
}

impl Neg for &SeriesQ {
    type Output = SeriesQ;
    fn neg(self) -> SeriesQ {
        SeriesQ { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Sub for &SeriesQ {
    type Output = SeriesQ;
    fn sub(self, rhs: &SeriesQ) -> SeriesQ {
        self + &-rhs
    }
}

impl fmt::Display for SeriesQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(Q, String)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let mono = match k {
                    0 => String::new(),
                    1 => "x".to_string(),
                    _ => format!("x^{k}"),
                };
                (c.clone(), mono)
            })
            .collect();
        f.write_str(&render_terms(&terms, false))
    }
}

pub fn series_mul(a: &SeriesQ, b: &SeriesQ) -> Result<SeriesQ> {
    a.mul(b)
}

/// z = log(1+x) = Σ_{n=1..N} (−1)^{n+1} xⁿ/n.
pub fn log1p(cap: usize) -> SeriesQ {
    SeriesQ::from_coeffs(
        cap,
        (0..=cap).map(|n| match n {
            0 => Q::zero(),
            _ => Q::new(BigInt::from(if n % 2 == 1 { 1 } else { -1 }), BigInt::from(n)),
        }),
    )
}

pub fn exp_series(a: &SeriesQ) -> Result<SeriesQ> {
    a.exp()
}

/// Coefficients of xᵐ = (X − 1)ᵐ in the basis 1, X, …, Xᵐ (index k ↦ coefficient of X^k).
pub fn x_power_basis_change(m: u64) -> Vec<Q> {
    (0..=m)
        .map(|k| {
            let c = q_big(binomial(m, k));
            if (m - k) % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

/// zᵐ/m! truncated at `cap`.
pub fn z_power_over_factorial(m: usize, cap: usize) -> SeriesQ {
    log1p(cap).pow(m as u32).scale(&Q::new(BigInt::one(), factorial(m as u64)))
}

/// t_i = Σ_{r≥0} z^{i+r(p−1)}/(i+r(p−1))!, truncated at `cap`.
pub fn t_series(p: u64, i: u64, cap: usize) -> Result<SeriesQ> {
    if i == 0 || i >= p {
        return Err(Error::BadResidue { p, i });
    }
    let z = log1p(cap);
    let step = (p - 1) as usize;
    let mut out = SeriesQ::zero(cap);
    let mut m = i as usize;
    // zᵐ has order m, so only m ≤ cap contributes.
    while m <= cap {
        out = &out + &z.pow(m as u32).scale(&Q::new(BigInt::one(), factorial(m as u64)));
        m += step;
    }
    Ok(out)
}

/// `Ok(())` if every coefficient has a denominator coprime to `p`,
/// otherwise `Err(first offending degree)`.
pub fn p_integrality_check(s: &SeriesQ, p: u64) -> std::result::Result<(), usize> {
    match s.coeffs().iter().position(|c| !is_p_integral(c, p)) {
        Some(k) => Err(k),
        None => Ok(()),
    }
}

/// Helper for tests and reports: `k·z` as a series.
pub fn scaled_log1p(k: i64, cap: usize) -> SeriesQ {
    log1p(cap).scale(&q_int(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{binomial_signed, q_frac};

    fn s(cap: usize, xs: &[Q]) -> SeriesQ {
        SeriesQ::from_coeffs(cap, xs.iter().cloned())
    }

    #[test]
    fn mul_examples() {
        let a = s(2, &[q_int(1), q_int(1)]);
        let b = s(2, &[q_int(1), q_int(-1)]);
        assert_eq!(series_mul(&a, &b).unwrap(), s(2, &[q_int(1), q_int(0), q_int(-1)]));
        let x = s(1, &[q_int(0), q_int(1)]);
        assert!(series_mul(&x, &x).unwrap().is_zero());
        // (x − x²/2 + x³/3)² = x² − x³ + O(x⁴)
        let z = log1p(3);
        assert_eq!(z.mul(&z).unwrap(), s(3, &[q_int(0), q_int(0), q_int(1), q_int(-1)]));
        assert_eq!(series_mul(&log1p(2), &log1p(3)), Err(Error::CapMismatch(2, 3)));
    }

    #[test]
    fn log1p_examples() {
        assert_eq!(log1p(3), s(3, &[q_int(0), q_int(1), q_frac(-1, 2), q_frac(1, 3)]));
        assert!(log1p(0).is_zero());
        assert_eq!(exp_series(&log1p(5)).unwrap(), SeriesQ::x_plus_one_pow(5, 1));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(exp_series(&SeriesQ::zero(3)).unwrap(), SeriesQ::one(3));
        assert_eq!(exp_series(&log1p(4)).unwrap(), s(4, &[q_int(1), q_int(1)]));
        assert_eq!(
            exp_series(&scaled_log1p(2, 2)).unwrap(),
            s(2, &[q_int(1), q_int(2), q_int(1)])
        );
        assert_eq!(exp_series(&SeriesQ::one(2)), Err(Error::NonzeroConstantTerm));
    }

    #[test]
    fn basis_change_examples() {
        assert_eq!(x_power_basis_change(0), vec![q_int(1)]);
        assert_eq!(x_power_basis_change(1), vec![q_int(-1), q_int(1)]);
        assert_eq!(x_power_basis_change(2), vec![q_int(1), q_int(-2), q_int(1)]);
        // Σ c_k X^k reproduces xᵐ.
        for m in 0..6u64 {
            let cap = 7;
            let mut acc = SeriesQ::zero(cap);
            for (k, c) in x_power_basis_change(m).iter().enumerate() {
                acc = &acc + &SeriesQ::x_plus_one_pow(cap, k as u64).scale(c);
            }
            assert_eq!(acc, SeriesQ::monomial(cap, m as usize, q_int(1)));
        }
    }

    /// Direct summation of Σ z^m/m! over m ≡ i mod (p−1), independent of `t_series`.
    fn t_oracle(p: u64, i: u64, cap: usize) -> SeriesQ {
        let mut out = SeriesQ::zero(cap);
        for m in 1..=cap {
            if (m as u64) % (p - 1) == i % (p - 1) {
                out = &out + &z_power_over_factorial(m, cap);
            }
        }
        out
    }

    #[test]
    fn t_series_examples() {
        assert_eq!(t_series(2, 1, 5).unwrap(), SeriesQ::monomial(5, 1, q_int(1)));
        assert_eq!(t_oracle(2, 1, 5), SeriesQ::monomial(5, 1, q_int(1)));
        assert_eq!(t_series(3, 1, 2).unwrap(), s(2, &[q_int(0), q_int(1), q_frac(-1, 2)]));
        for p in [2u64, 3, 5, 7, 11] {
            assert_eq!(t_series(p, 1, 6).unwrap().coeff(1), q_int(1));
            for i in 1..p {
                assert_eq!(t_series(p, i, 8).unwrap(), t_oracle(p, i, 8));
            }
        }
        assert_eq!(t_series(3, 3, 2), Err(Error::BadResidue { p: 3, i: 3 }));
        assert_eq!(t_series(3, 0, 2), Err(Error::BadResidue { p: 3, i: 0 }));
        assert_eq!(t_series(3, 2, 5).unwrap().to_string(), t_oracle(3, 2, 5).to_string());
    }

    #[test]
    fn integrality_examples() {
        assert_eq!(p_integrality_check(&t_series(3, 1, 10).unwrap(), 3), Ok(()));
        assert_eq!(p_integrality_check(&SeriesQ::monomial(2, 1, q_frac(1, 3)), 3), Err(1));
        assert_eq!(p_integrality_check(&log1p(6), 3), Err(3));
        for p in [3u64, 5, 7] {
            for i in 1..p {
                assert_eq!(p_integrality_check(&t_series(p, i, 10).unwrap(), p), Ok(()));
            }
        }
    }

    #[test]
    fn exp_kz_binomials() {
        // Coefficient of xⁿ in e^{kz} is C(k, n).
        for k in -3i64..=8 {
            let e = exp_series(&scaled_log1p(k, 8)).unwrap();
            for n in 0..=8u64 {
                assert_eq!(e.coeff(n as usize), binomial_signed(k, n), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn powers_of_x_plus_one_multiply() {
        for m in 0..6 {
            for n in 0..6 {
                let a = SeriesQ::x_plus_one_pow(7, m);
                let b = SeriesQ::x_plus_one_pow(7, n);
                assert_eq!(a.mul(&b).unwrap(), SeriesQ::x_plus_one_pow(7, m + n));
            }
        }
    }

    #[test]
    fn exp_log_round_trip() {
        for cap in 0..8 {
            let x = SeriesQ::monomial(cap, 1, q_int(1));
            assert_eq!(exp_series(&log1p(cap)).unwrap(), &SeriesQ::one(cap) + &x);
            assert_eq!(exp_series(&log1p(cap)).unwrap().coeffs()[1..].iter().cloned()
                .collect::<Vec<_>>(), x.coeffs()[1..].to_vec());
            // log(1 + (e^x − 1)) = x
            let em1 = &exp_series(&x).unwrap() - &SeriesQ::one(cap);
            assert_eq!(em1.log1p_of().unwrap(), x);
            assert_eq!(log1p(cap).compose(&em1).unwrap(), x);
        }
    }

    #[test]
    fn display() {
        assert_eq!(t_series(3, 1, 2).unwrap().to_string(), "x - 1/2*x^2");
        assert_eq!(SeriesQ::zero(3).to_string(), "0");
        assert_eq!(SeriesQ::x_plus_one_pow(2, 2).to_string(), "1 + 2*x + x^2");
    }
}
