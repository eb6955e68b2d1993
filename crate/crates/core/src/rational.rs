//! Rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_big(n: BigInt) -> Q {
    Q::from_integer(n)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Binomial coefficient `C(k, n)` for an arbitrary (possibly negative) integer `k`.
pub fn binomial_signed(k: i64, n: u64) -> Q {
    let mut acc = Q::one();
    for i in 0..n {
        acc = acc * q_int(k - i as i64) / q_int(i as i64 + 1);
    }
    acc
}

/// True when the reduced denominator of `x` is coprime to `p`.
pub fn is_p_integral(x: &Q, p: u64) -> bool {
    x.denom().gcd(&BigInt::from(p)).is_one()
}

pub fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// `{"num": "..", "den": ".."}`; exact integers as strings.
pub fn q_json(x: &Q) -> Value {
    json!({ "num": x.numer().to_string(), "den": x.denom().to_string() })
}

/// `3`, `-1/2`, ...
pub fn q_text(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Joins signed terms as `a + b - c`. Each item is (coefficient, rendered monomial);
/// `show_one` controls whether unit coefficients are printed.
pub fn render_terms(terms: &[(Q, String)], show_one: bool) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (c, mono)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&q_text(&abs));
        } else if abs.is_one() && !show_one {
            out.push_str(mono);
        } else {
            out.push_str(&q_text(&abs));
            out.push('*');
            out.push_str(mono);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(binomial_signed(-1, 3), q_int(-1));
        assert_eq!(binomial_signed(4, 2), q_int(6));
    }

    #[test]
    fn p_integrality() {
        assert!(is_p_integral(&q_frac(1, 2), 3));
        assert!(!is_p_integral(&q_frac(1, 6), 3));
    }

    #[test]
    fn rendering() {
        let t = vec![(q_int(1), "x".to_string()), (q_frac(-1, 2), "x^2".to_string())];
        assert_eq!(render_terms(&t, false), "x - 1/2*x^2");
        assert_eq!(render_terms(&t, true), "1*x - 1/2*x^2");
        assert_eq!(render_terms(&[], true), "0");
    }
}
