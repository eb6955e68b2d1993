//! Lie elements of the free associative algebra, stored expanded in the word
//! basis. A bracket-form rendering is kept alongside when it is known.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::freealg::{AssocPoly, Word, WordSpace};
use crate::perm::all_perms;
use crate::rational::{render_terms, Q};

/// A ℚ-combination of left-normed brackets [x_{i₁}, …, x_{i_k}], used for display.
pub type BracketForm = Vec<(Vec<u32>, Q)>;

#[derive(Debug, Clone)]
pub struct LiePoly {
    poly: AssocPoly,
    form: Option<BracketForm>,
}

/// Equality is equality of the underlying elements of A.
impl PartialEq for LiePoly {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

impl Eq for LiePoly {}

impl LiePoly {
    pub fn zero() -> Self {
        LiePoly { poly: AssocPoly::zero(), form: Some(Vec::new()) }
    }

    pub fn generator(i: u32) -> Self {
        LiePoly { poly: AssocPoly::var(i), form: Some(vec![(vec![i], Q::one())]) }
    }

    /// Wraps an element already known to lie in L.
    pub fn from_poly_unchecked(poly: AssocPoly) -> Self {
        LiePoly { poly, form: None }
    }

    pub fn poly(&self) -> &AssocPoly {
        &self.poly
    }

    pub fn into_poly(self) -> AssocPoly {
        self.poly
    }

    pub fn form(&self) -> Option<&BracketForm> {
        self.form.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn scale(&self, k: &Q) -> LiePoly {
        LiePoly {
            poly: self.poly.scale(k),
            form: self.form.as_ref().map(|f| {
                f.iter().map(|(s, c)| (s.clone(), c * k)).filter(|(_, c)| !c.is_zero()).collect()
            }),
        }
    }

    /// Left-normed bracket [x_{i₁}, x_{i₂}, …, x_{i_k}].
    pub fn left_normed_word(letters: &[u32]) -> LiePoly {
        LiePoly {
            poly: expand_left_normed(letters),
            form: Some(vec![(letters.to_vec(), Q::one())]),
        }
    }

    pub fn from_form(form: BracketForm) -> LiePoly {
        let mut poly = AssocPoly::zero();
        for (s, c) in &form {
            poly.add_scaled(&expand_left_normed(s), c);
        }
        let form = merge_form(form);
        LiePoly { poly, form: Some(form) }
    }

    pub fn to_json(&self) -> Value {
        self.poly.to_json()
    }
}

fn merge_form(form: BracketForm) -> BracketForm {
    let mut m: std::collections::BTreeMap<Vec<u32>, Q> = std::collections::BTreeMap::new();
    for (s, c) in form {
        *m.entry(s).or_insert_with(Q::zero) += c;
    }
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Expands [x_{i₁}, …, x_{i_k}] = [[…[x_{i₁}, x_{i₂}], …], x_{i_k}] in A.
pub fn expand_left_normed(letters: &[u32]) -> AssocPoly {
    let Some((&first, rest)) = letters.split_first() else {
        return AssocPoly::zero();
    };
    // Track words directly: [u, x] = u·x − x·u.
    let mut terms: Vec<(Vec<u32>, i64)> = vec![(vec![first], 1)];
    for &x in rest {
        let mut next = Vec::with_capacity(terms.len() * 2);
        for (w, c) in &terms {
            let mut a = w.clone();
            a.push(x);
            next.push((a, *c));
            let mut b = Vec::with_capacity(w.len() + 1);
            b.push(x);
            b.extend_from_slice(w);
            next.push((b, -*c));
        }
        terms = next;
    }
    AssocPoly::from_terms(terms.into_iter().map(|(w, c)| (Word(w), Q::from_integer(c.into()))))
}

pub fn bracket(a: &LiePoly, b: &LiePoly) -> LiePoly {
    let poly = a.poly.commutator(&b.poly);
    // A bracket with a single generator on the right stays left-normed.
    let form = match (&a.form, &b.form) {
        (Some(fa), Some(fb)) if fb.len() == 1 && fb[0].0.len() == 1 => {
            let (x, k) = (&fb[0].0[0], &fb[0].1);
            Some(merge_form(
                fa.iter()
                    .map(|(s, c)| {
                        let mut s = s.clone();
                        s.push(*x);
                        (s, c * k)
                    })
                    .collect(),
            ))
        }
        _ => None,
    };
    LiePoly { poly, form }
}

/// [a | b]: the linear extension of [a | x_i x_j … x_k] = [a, x_i, x_j, …, x_k].
pub fn left_normed(a: &LiePoly, tail: &AssocPoly) -> Result<LiePoly> {
    let mut poly = AssocPoly::zero();
    let mut form: Option<BracketForm> = a.form.as_ref().map(|_| Vec::new());
    for (w, c) in tail.terms() {
        if w.is_empty() {
            return Err(Error::EmptyWordInTail);
        }
        let mut acc = a.poly.clone();
        for &x in w.letters() {
            acc = acc.commutator(&AssocPoly::var(x));
        }
        poly.add_scaled(&acc, c);
        if let (Some(f), Some(af)) = (form.as_mut(), a.form.as_ref()) {
            for (s, k) in af {
                let mut s = s.clone();
                s.extend_from_slice(w.letters());
                f.push((s, k * c));
            }
        }
    }
    Ok(LiePoly { poly, form: form.map(merge_form) })
}

/// δ(x_i x_j … x_k) = [x_i, x_j, …, x_k] if i = 1, else 0; δ(1) = 0.
pub fn delta(a: &AssocPoly) -> LiePoly {
    delta_at(a, 1)
}

/// The same map keyed on the letter `root` instead of x₁.
pub fn delta_at(a: &AssocPoly, root: u32) -> LiePoly {
    let mut form: BracketForm = Vec::new();
    let mut poly = AssocPoly::zero();
    for (w, c) in a.terms() {
        if w.letters().first() == Some(&root) {
            poly.add_scaled(&expand_left_normed(w.letters()), c);
            form.push((w.letters().to_vec(), c.clone()));
        }
    }
    LiePoly { poly, form: Some(form) }
}

/// Left-normed brackets on `block` whose first letter is the block minimum,
/// followed by every ordering of the remaining letters (lexicographic).
pub fn block_basis_sequences(block: &[u32]) -> Vec<Vec<u32>> {
    let mut sorted = block.to_vec();
    sorted.sort_unstable();
    let (first, rest) = sorted.split_first().expect("nonempty block");
    all_perms(rest.len())
        .into_iter()
        .map(|p| {
            let mut s = vec![*first];
            s.extend(p.permute(rest));
            s
        })
        .collect()
}

/// The (n−1)! brackets [x₁, x_{σ2}, …, x_{σn}].
pub fn multilinear_lie_basis(n: usize) -> Vec<LiePoly> {
    let block: Vec<u32> = (1..=n as u32).collect();
    block_basis_sequences(&block).iter().map(|s| LiePoly::left_normed_word(s)).collect()
}

/// Coordinates of a multilinear Lie element in {x₁..xₙ}: the coefficients of
/// the words starting with x₁, which are exactly its coefficients against
/// the basis [x₁, x_{σ2}, …, x_{σn}].
pub fn lie_coordinates(a: &AssocPoly, space: &WordSpace) -> Vec<Q> {
    a.project(space)
}

/// δ-membership test for multilinear elements: `a` lies in L iff δ_m(a) = a
/// where m is the smallest letter present.
pub fn is_multilinear_lie(a: &AssocPoly) -> bool {
    let vars = a.support();
    let Some(&root) = vars.iter().next() else {
        return true;
    };
    a.terms().all(|(w, _)| w.is_multilinear_in(&vars)) && delta_at(a, root).poly == *a
}

fn letter_seq(s: &[u32]) -> String {
    if s.len() == 1 {
        return format!("x{}", s[0]);
    }
    let parts: Vec<String> = s.iter().map(|i| format!("x{i}")).collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Display for LiePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let form = match &self.form {
            Some(form) => Some(form.clone()),
            None => {
                let vars: BTreeSet<u32> = self.poly.support();
                match vars.iter().next() {
                    Some(&root) if is_multilinear_lie(&self.poly) => {
                        delta_at(&self.poly, root).form
                    }
                    _ => None,
                }
            }
        };
        match form {
            Some(form) => {
                let mut form = form;
                form.sort_by(|a, b| a.0.cmp(&b.0));
                let terms: Vec<(Q, String)> =
                    form.iter().map(|(s, c)| (c.clone(), letter_seq(s))).collect();
                f.write_str(&render_terms(&terms, true))
            }
            None => write!(f, "{}", self.poly),
        }
    }
}

impl Add for &LiePoly {
    type Output = LiePoly;
    fn add(self, rhs: &LiePoly) -> LiePoly {
        let form = match (&self.form, &rhs.form) {
            (Some(a), Some(b)) => Some(merge_form(a.iter().chain(b).cloned().collect())),
            _ => None,
        };
        LiePoly { poly: &self.poly + &rhs.poly, form }
    }
}

impl Neg for &LiePoly {
    type Output = LiePoly;
    fn neg(self) -> LiePoly {
        self.scale(&-Q::one())
    }
}

impl Sub for &LiePoly {
    type Output = LiePoly;
    fn sub(self, rhs: &LiePoly) -> LiePoly {
        self + &-rhs
    }
}
