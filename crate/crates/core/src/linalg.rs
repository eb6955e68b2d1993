//! Exact linear algebra over ℚ and ℤ.
//!
//! Membership questions are answered with certificates: a finite map from
//! generator index to coefficient whose replay reproduces the target. Over ℤ
//! this is done with an incrementally maintained Hermite normal form whose
//! rows remember which integer combination of the inputs produced them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{is_p_integral, q_big, Q};

/// Coefficient ring of a membership question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ring {
    Z,
    Q,
    /// Rationals whose denominators are coprime to the given prime.
    Zp(u64),
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Z => write!(f, "Z"),
            Ring::Q => write!(f, "Q"),
            Ring::Zp(p) => write!(f, "Z_({p})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        for r in &rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch(cols, r.len()));
            }
        }
        Ok(QMatrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v = rows
            .iter()
            .map(|r| r.iter().map(|&x| Q::from_integer(BigInt::from(x))).collect())
            .collect();
        Self::from_rows(v).expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }
}

/// Reduced row echelon form over ℚ together with the pivot columns.
pub fn rref(m: &QMatrix) -> (QMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(pr) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        a.swap_rows(row, pr);
        let inv = a.get(row, col).recip();
        for c in col..a.cols {
            let v = &a.data[row * a.cols + c] * &inv;
            a.data[row * a.cols + c] = v;
        }
        for r in 0..a.rows {
            if r == row {
                continue;
            }
            let f = a.get(r, col).clone();
            if f.is_zero() {
                continue;
            }
            for c in col..a.cols {
                let v = &a.data[r * a.cols + c] - &f * &a.data[row * a.cols + c];
                a.data[r * a.cols + c] = v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

/// Generator index → coefficient. Over ℤ every coefficient is an integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub ring: Ring,
    pub coeffs: BTreeMap<usize, Q>,
}

impl MembershipCertificate {
    pub fn zero(ring: Ring) -> Self {
        MembershipCertificate { ring, coeffs: BTreeMap::new() }
    }

    /// Σ cᵢ·genᵢ.
    pub fn replay(&self, generators: &[Vec<Q>], len: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); len];
        for (&i, c) in &self.coeffs {
            for (o, g) in out.iter_mut().zip(&generators[i]) {
                *o += c * g;
            }
        }
        out
    }

    /// Checks the certificate reproduces `target` and that its coefficients
    /// live in the declared ring.
    pub fn verifies(&self, target: &[Q], generators: &[Vec<Q>]) -> bool {
        self.coefficients_in_ring() && self.replay(generators, target.len()) == target
    }

    pub fn coefficients_in_ring(&self) -> bool {
        self.coeffs.values().all(|c| match self.ring {
            Ring::Z => c.is_integer(),
            Ring::Q => true,
            Ring::Zp(p) => is_p_integral(c, p),
        })
    }

    pub fn scaled(&self, k: &Q) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&i, c)| (i, c * k))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        MembershipCertificate { ring: self.ring, coeffs }
    }

    pub fn add_scaled(&mut self, other: &Self, k: &Q) {
        for (&i, c) in &other.coeffs {
            let e = self.coeffs.entry(i).or_insert_with(Q::zero);
            *e += c * k;
            if e.is_zero() {
                self.coeffs.remove(&i);
            }
        }
    }
}

/// Outcome of a membership question. A refutation carries the part of the
/// target left over after reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member(MembershipCertificate),
    NotMember { residual: Vec<Q> },
}

impl Membership {
    pub fn certificate(&self) -> Option<&MembershipCertificate> {
        match self {
            Membership::Member(c) => Some(c),
            Membership::NotMember { .. } => None,
        }
    }

    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

fn leading(v: &[Q]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

struct SpanRow {
    pivot: usize,
    vec: Vec<Q>,
    combo: BTreeMap<usize, Q>,
}

fn combo_axpy(dst: &mut BTreeMap<usize, Q>, src: &BTreeMap<usize, Q>, k: &Q) {
    for (&i, c) in src {
        let e = dst.entry(i).or_insert_with(Q::zero);
        *e += c * k;
        if e.is_zero() {
            dst.remove(&i);
        }
    }
}

/// Echelon basis of a ℚ-span, built one generator at a time.
#[derive(Default)]
pub struct RationalSpan {
    len: usize,
    rows: Vec<SpanRow>,
}

impl RationalSpan {
    pub fn new(len: usize) -> Self {
        RationalSpan { len, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, index: usize, v: &[Q]) -> Result<()> {
        if v.len() != self.len {
            return Err(Error::LengthMismatch(self.len, v.len()));
        }
        if self.rows.len() == self.len {
            return Ok(());
        }
        let mut v = v.to_vec();
        // Combinations are only assembled for vectors that enlarge the span.
        let mut factors = Vec::new();
        for (k, row) in self.rows.iter().enumerate() {
            let f = &v[row.pivot] / &row.vec[row.pivot];
            if f.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(&row.vec).skip(row.pivot) {
                *x -= &f * r;
            }
            factors.push((k, f));
        }
        if let Some(pivot) = leading(&v) {
            let mut combo = BTreeMap::from([(index, Q::one())]);
            for (k, f) in factors {
                combo_axpy(&mut combo, &self.rows[k].combo, &-f);
            }
            let pos = self.rows.partition_point(|r| r.pivot < pivot);
            self.rows.insert(pos, SpanRow { pivot, vec: v, combo });
        }
        Ok(())
    }

    pub fn solve(&self, target: &[Q]) -> Result<Membership> {
        if target.len() != self.len {
            return Err(Error::LengthMismatch(self.len, target.len()));
        }
        let mut t = target.to_vec();
        let mut coeffs = BTreeMap::new();
        for row in &self.rows {
            let f = &t[row.pivot] / &row.vec[row.pivot];
            if f.is_zero() {
                continue;
            }
            for (x, r) in t.iter_mut().zip(&row.vec) {
                *x -= &f * r;
            }
            combo_axpy(&mut coeffs, &row.combo, &f);
        }
        if t.iter().all(Zero::is_zero) {
            Ok(Membership::Member(MembershipCertificate { ring: Ring::Q, coeffs }))
        } else {
            Ok(Membership::NotMember { residual: t })
        }
    }
}

pub fn solve_in_span(target: &[Q], generators: &[Vec<Q>]) -> Result<Membership> {
    let mut span = RationalSpan::new(target.len());
    for (i, g) in generators.iter().enumerate() {
        span.insert(i, g)?;
    }
    span.solve(target)
}

struct LatticeRow {
    pivot: usize,
    vec: Vec<BigInt>,
    combo: BTreeMap<usize, BigInt>,
}

fn int_axpy(dst: &mut BTreeMap<usize, BigInt>, src: &BTreeMap<usize, BigInt>, k: &BigInt) {
    for (&i, c) in src {
        let e = dst.entry(i).or_insert_with(BigInt::zero);
        *e += c * k;
        if e.is_zero() {
            dst.remove(&i);
        }
    }
}

fn int_lincomb(
    a: &BTreeMap<usize, BigInt>,
    ka: &BigInt,
    b: &BTreeMap<usize, BigInt>,
    kb: &BigInt,
) -> BTreeMap<usize, BigInt> {
    let mut out: BTreeMap<usize, BigInt> =
        a.iter().map(|(&i, c)| (i, c * ka)).filter(|(_, c)| !c.is_zero()).collect();
    int_axpy(&mut out, b, kb);
    out
}

fn to_integers(v: &[Q]) -> Result<Vec<BigInt>> {
    v.iter()
        .enumerate()
        .map(|(i, x)| {
            if x.is_integer() {
                Ok(x.to_integer())
            } else {
                Err(Error::IntegralityLost { index: i })
            }
        })
        .collect()
}

/// Hermite normal form of a ℤ-lattice with unimodular transformation
/// tracking: every basis row records the integer combination of inserted
/// generators it equals. Pivot entries are kept positive and entries above
/// each pivot are reduced into `[0, pivot)`.
pub struct IntegerLattice {
    len: usize,
    rows: Vec<LatticeRow>,
}

impl IntegerLattice {
    pub fn new(len: usize) -> Self {
        IntegerLattice { len, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.len
    }

    /// Basis rows in pivot order.
    pub fn basis(&self) -> impl Iterator<Item = &[BigInt]> {
        self.rows.iter().map(|r| r.vec.as_slice())
    }

    pub fn insert(&mut self, index: usize, v: &[Q]) -> Result<()> {
        if v.len() != self.len {
            return Err(Error::LengthMismatch(self.len, v.len()));
        }
        let v = to_integers(v)?;
        if !self.contains_int(&v) {
            self.insert_int(index, v);
        }
        Ok(())
    }

    /// Whether `v` already lies in the lattice; generators that do are not
    /// recorded, which keeps certificates short.
    fn contains_int(&self, v: &[BigInt]) -> bool {
        let mut t = v.to_vec();
        for row in &self.rows {
            let Some(lead) = t.iter().position(|x| !x.is_zero()) else {
                return true;
            };
            if lead < row.pivot {
                return false;
            }
            let (f, rem) = t[row.pivot].div_rem(&row.vec[row.pivot]);
            if !rem.is_zero() {
                return false;
            }
            if !f.is_zero() {
                for (x, r) in t.iter_mut().zip(&row.vec).skip(row.pivot) {
                    *x -= &f * r;
                }
            }
        }
        t.iter().all(Zero::is_zero)
    }

    fn insert_int(&mut self, index: usize, mut v: Vec<BigInt>) {
        let mut combo = BTreeMap::from([(index, BigInt::one())]);
        let mut start = 0;
        loop {
            let Some(lead) = v[start..].iter().position(|x| !x.is_zero()).map(|p| p + start)
            else {
                return;
            };
            match self.rows.binary_search_by_key(&lead, |r| r.pivot) {
                Ok(i) => {
                    let row = &mut self.rows[i];
                    let a = row.vec[lead].clone();
                    let b = v[lead].clone();
                    if b.is_multiple_of(&a) {
                        let f = &b / &a;
                        for (x, r) in v.iter_mut().zip(&row.vec) {
                            *x -= &f * r;
                        }
                        int_axpy(&mut combo, &row.combo, &-f);
                    } else {
                        // [s t; -b/g a/g] has determinant 1.
                        let eg = a.extended_gcd(&b);
                        let (g, s, t) = (eg.gcd, eg.x, eg.y);
                        let ag = &a / &g;
                        let bg = &b / &g;
                        let new_row: Vec<BigInt> =
                            row.vec.iter().zip(&v).map(|(r, x)| &s * r + &t * x).collect();
                        let new_v: Vec<BigInt> =
                            row.vec.iter().zip(&v).map(|(r, x)| &ag * x - &bg * r).collect();
                        let new_row_combo = int_lincomb(&row.combo, &s, &combo, &t);
                        combo = int_lincomb(&combo, &ag, &row.combo, &-bg);
                        row.vec = new_row;
                        row.combo = new_row_combo;
                        v = new_v;
                        self.normalize_row(i);
                        self.rereduce_from(i);
                    }
                    start = lead;
                }
                Err(i) => {
                    if v[lead].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                        combo.values_mut().for_each(|x| *x = -&*x);
                    }
                    self.rows.insert(i, LatticeRow { pivot: lead, vec: v, combo });
                    self.rereduce_from(i);
                    return;
                }
            }
        }
    }

    fn normalize_row(&mut self, i: usize) {
        let row = &mut self.rows[i];
        if row.vec[row.pivot].is_negative() {
            row.vec.iter_mut().for_each(|x| *x = -&*x);
            row.combo.values_mut().for_each(|x| *x = -&*x);
        }
    }

    /// Restores the reduced form after rows `0..=i` may have changed: each of
    /// them gets its entries in later pivot columns brought into `[0, pivot)`.
    fn rereduce_from(&mut self, i: usize) {
        for k in (0..=i).rev() {
            let (head, tail) = self.rows.split_at_mut(k + 1);
            let row = &mut head[k];
            for other in tail.iter() {
                let p = other.pivot;
                let f = row.vec[p].div_floor(&other.vec[p]);
                if f.is_zero() {
                    continue;
                }
                for (x, r) in row.vec.iter_mut().zip(&other.vec).skip(p) {
                    *x -= &f * r;
                }
                int_axpy(&mut row.combo, &other.combo, &-f);
            }
        }
    }

    /// Decides membership of `target` in the lattice (ring `Z`) or in its
    /// ℤ_(p)- or ℚ-saturation. Coordinates in an echelon basis are unique, so
    /// the ring test reduces to inspecting each coordinate.
    pub fn solve(&self, target: &[Q], ring: Ring) -> Result<Membership> {
        if target.len() != self.len {
            return Err(Error::LengthMismatch(self.len, target.len()));
        }
        if ring == Ring::Z {
            to_integers(target)?;
        }
        let mut t = target.to_vec();
        let mut coeffs: BTreeMap<usize, Q> = BTreeMap::new();
        for row in &self.rows {
            let lead = leading(&t);
            match lead {
                None => break,
                Some(l) if l < row.pivot => return Ok(Membership::NotMember { residual: t }),
                _ => {}
            }
            let f = &t[row.pivot] / q_big(row.vec[row.pivot].clone());
            if f.is_zero() {
                continue;
            }
            let admissible = match ring {
                Ring::Z => f.is_integer(),
                Ring::Q => true,
                Ring::Zp(p) => is_p_integral(&f, p),
            };
            if !admissible {
                return Ok(Membership::NotMember { residual: t });
            }
            for (x, r) in t.iter_mut().zip(&row.vec) {
                *x -= &f * r;
            }
            for (&i, c) in &row.combo {
                let e = coeffs.entry(i).or_insert_with(Q::zero);
                *e += &f * c;
                if e.is_zero() {
                    coeffs.remove(&i);
                }
            }
        }
        if t.iter().all(Zero::is_zero) {
            Ok(Membership::Member(MembershipCertificate { ring, coeffs }))
        } else {
            Ok(Membership::NotMember { residual: t })
        }
    }
}

/// ℤ-lattice membership via Hermite normal form.
pub fn hnf_membership(target: &[Q], generators: &[Vec<Q>]) -> Result<Membership> {
    let mut lat = IntegerLattice::new(target.len());
    for (i, g) in generators.iter().enumerate() {
        lat.insert(i, g)?;
    }
    lat.solve(target, Ring::Z)
}
