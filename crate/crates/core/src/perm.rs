//! Permutations and set partitions.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

/// A permutation of {1..r} stored 0-based in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(r: usize) -> Self {
        Perm((0..r).collect())
    }

    /// From 1-based one-line notation. Panics if it is not a permutation.
    pub fn from_one_line(images: &[u32]) -> Self {
        let r = images.len();
        let mut seen = vec![false; r];
        let v: Vec<usize> = images
            .iter()
            .map(|&i| {
                let j = i as usize - 1;
                assert!(j < r && !seen[j], "not a permutation: {images:?}");
                seen[j] = true;
                j
            })
            .collect();
        Perm(v)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// π(i) for 1-based i.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1] + 1
    }

    pub fn one_line_1based(&self) -> Vec<u32> {
        self.0.iter().map(|&i| i as u32 + 1).collect()
    }

    /// (self ∘ other)(i) = self(other(i)).
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            v[j] = i;
        }
        Perm(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn random<R: Rng>(r: usize, rng: &mut R) -> Perm {
        let mut v: Vec<usize> = (0..r).collect();
        v.shuffle(rng);
        Perm(v)
    }

    /// The reversal r, r−1, …, 1.
    pub fn reverse(r: usize) -> Perm {
        Perm((0..r).rev().collect())
    }

    /// Rearranges `items` as (items[π1], …, items[πr]).
    pub fn permute<T: Clone>(&self, items: &[T]) -> Vec<T> {
        self.0.iter().map(|&i| items[i].clone()).collect()
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line_1based().iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// All permutations of {1..r}, lexicographic.
pub fn all_perms(r: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    let mut used = vec![false; r];
    fn rec(r: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Perm>) {
        if cur.len() == r {
            out.push(Perm(cur.clone()));
            return;
        }
        for i in 0..r {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(r, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(r, &mut cur, &mut used, &mut out);
    out
}

/// All partitions of `items` into nonempty blocks. Blocks keep the order of
/// `items` and are listed by their first element; partitions come in
/// restricted-growth-string order.
pub fn set_partitions<T: Clone>(items: &[T]) -> Vec<Vec<Vec<T>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<T>> = Vec::new();
    fn rec<T: Clone>(items: &[T], k: usize, blocks: &mut Vec<Vec<T>>, out: &mut Vec<Vec<Vec<T>>>) {
        if k == items.len() {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(items[k].clone());
            rec(items, k + 1, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![items[k].clone()]);
        rec(items, k + 1, blocks, out);
        blocks.pop();
    }
    if items.is_empty() {
        return vec![Vec::new()];
    }
    rec(items, 0, &mut blocks, &mut out);
    out
}

/// All ordered sequences (S₁, …, S_m) of disjoint nonempty blocks covering `items`.
pub fn ordered_set_partitions<T: Clone>(items: &[T]) -> Vec<Vec<Vec<T>>> {
    let mut out = Vec::new();
    for part in set_partitions(items) {
        for p in all_perms(part.len()) {
            out.push(p.permute(&part));
        }
    }
    out
}
