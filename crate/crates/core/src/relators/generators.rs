use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{k_generic, k_substitute};
use crate::freealg::AssocPoly;
use crate::lie::{block_basis_sequences, LiePoly};
use crate::perm::{all_perms, ordered_set_partitions, set_partitions};

/// K_m(b₁, …, b_m) where each b_i is a left-normed bracket given by its letters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KInstance {
    pub args: Vec<Vec<u32>>,
}

impl KInstance {
    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn evaluate(&self, q: u64) -> LiePoly {
        let args: Vec<LiePoly> = self.args.iter().map(|s| LiePoly::left_normed_word(s)).collect();
        k_substitute(&k_generic(q, self.arity()), &args)
    }

    pub fn degree(&self) -> usize {
        self.args.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.args.iter().any(|a| a.contains(&x))
    }

    pub fn to_json(&self) -> Value {
        json!({ "arity": self.arity(), "args": self.args })
    }
}

impl fmt::Display for KInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self
            .args
            .iter()
            .map(|s| {
                if s.len() == 1 {
                    format!("x{}", s[0])
                } else {
                    let v: Vec<String> = s.iter().map(|i| format!("x{i}")).collect();
                    format!("[{}]", v.join(","))
                }
            })
            .collect();
        write!(f, "K{}({})", self.arity(), args.join(","))
    }
}

/// An associative product c₁c₂…c_r of K-values on disjoint blocks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaProduct {
    pub factors: Vec<KInstance>,
}

impl fmt::Display for GammaProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        f.write_str(&v.join("*"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenKind {
    /// Values K_m(b₁,…,b_m), spanning the degree-n part of I_{m_max}.
    I,
    /// Products of such values, spanning the degree-n part of Γ_{m_max}.
    Gamma,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    I(KInstance),
    Gamma(GammaProduct),
}

impl Generator {
    pub fn factors(&self) -> &[KInstance] {
        match self {
            Generator::I(k) => std::slice::from_ref(k),
            Generator::Gamma(g) => &g.factors,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Generator::I(k) => k.to_string(),
            Generator::Gamma(g) => g.to_string(),
        }
    }

    pub fn provenance(&self) -> Value {
        json!({ "factors": self.factors().iter().map(KInstance::to_json).collect::<Vec<_>>() })
    }
}

/// A deterministic, provenance-sorted list of multilinear generators on {x₁..x_n}.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub kind: GenKind,
    pub q: u64,
    pub n: usize,
    pub m_max: usize,
    pub items: Vec<Generator>,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn label(&self, i: usize) -> String {
        self.items[i].label()
    }

    pub fn evaluate(&self, i: usize) -> AssocPoly {
        evaluate_factors(self.q, self.items[i].factors(), &mut HashMap::new())
    }

    /// Evaluates every generator, in parallel, preserving order.
    pub fn evaluate_all(&self) -> Vec<AssocPoly> {
        self.evaluate_range(0, self.items.len())
    }

    pub fn evaluate_range(&self, start: usize, end: usize) -> Vec<AssocPoly> {
        self.items[start..end]
            .par_chunks(64)
            .map(|chunk| {
                let mut cache = HashMap::new();
                chunk.iter().map(|g| evaluate_factors(self.q, g.factors(), &mut cache)).collect::<Vec<_>>()
            })
            .flatten_iter()
            .collect()
    }

    /// Index of a generator, if present.
    pub fn position(&self, g: &Generator) -> Option<usize> {
        self.items.binary_search_by(|x| gen_key(x).cmp(&gen_key(g))).ok()
    }
}

fn gen_key(g: &Generator) -> &[KInstance] {
    g.factors()
}

fn evaluate_factors(
    q: u64,
    factors: &[KInstance],
    cache: &mut HashMap<KInstance, AssocPoly>,
) -> AssocPoly {
    let mut acc = AssocPoly::one();
    for k in factors {
        let v = cache.entry(k.clone()).or_insert_with(|| k.evaluate(q).into_poly());
        acc = acc.mul(v);
    }
    acc
}

/// All K-instances whose arguments are basis brackets on the blocks of some
/// partition of `vars` into at most `max_arity` blocks, in every argument order.
pub fn k_instances_on(vars: &[u32], max_arity: usize) -> Vec<KInstance> {
    let mut out = Vec::new();
    for part in set_partitions(vars) {
        let m = part.len();
        if m > max_arity {
            continue;
        }
        let choices: Vec<Vec<Vec<u32>>> = part.iter().map(|b| block_basis_sequences(b)).collect();
        let orders = all_perms(m);
        for combo in cartesian(&choices) {
            for p in &orders {
                out.push(KInstance { args: p.permute(&combo) });
            }
        }
    }
    out
}

fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for l in lists {
        let mut next = Vec::with_capacity(out.len() * l.len());
        for prefix in &out {
            for x in l {
                let mut v = prefix.clone();
                v.push(x.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Generators of the {x₁..x_n}-multilinear part of I_{m_max}.
pub fn generators_i(q: u64, n: usize, m_max: usize) -> GeneratorSet {
    let vars: Vec<u32> = (1..=n as u32).collect();
    let mut items: Vec<KInstance> = if m_max == 0 { Vec::new() } else { k_instances_on(&vars, m_max) };
    items.sort();
    GeneratorSet {
        kind: GenKind::I,
        q,
        n,
        m_max,
        items: items.into_iter().map(Generator::I).collect(),
    }
}

/// Generators of the {x₁..x_n}-multilinear part of Γ_{m_max}: products of
/// K-instances on the blocks of every ordered partition of {1..n}.
pub fn generators_gamma(q: u64, n: usize, m_max: usize) -> GeneratorSet {
    let vars: Vec<u32> = (1..=n as u32).collect();
    let mut items: Vec<GammaProduct> = Vec::new();
    if m_max > 0 {
        let mut per_block: HashMap<Vec<u32>, Vec<KInstance>> = HashMap::new();
        for op in ordered_set_partitions(&vars) {
            let lists: Vec<Vec<KInstance>> = op
                .iter()
                .map(|b| per_block.entry(b.clone()).or_insert_with(|| k_instances_on(b, m_max)).clone())
                .collect();
            for factors in cartesian(&lists) {
                items.push(GammaProduct { factors });
            }
        }
    }
    items.sort();
    GeneratorSet {
        kind: GenKind::Gamma,
        q,
        n,
        m_max,
        items: items.into_iter().map(Generator::Gamma).collect(),
    }
}
