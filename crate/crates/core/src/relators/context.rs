use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::certificate::CertifiedMembership;
use super::generators::{generators_gamma, generators_i, GenKind, GeneratorSet};
use crate::error::Result;
use crate::freealg::{AssocPoly, WordSpace};
use crate::linalg::{IntegerLattice, Membership, RationalSpan, Ring};

/// How multilinear degree-n elements are turned into vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coordinates {
    /// All n! words.
    Full,
    /// The (n−1)! words starting with x₁; faithful on multilinear Lie elements.
    LieX1,
}

pub(crate) struct Built {
    pub set: GeneratorSet,
    pub space: WordSpace,
    pub lattice: IntegerLattice,
    /// Filled in the same pass when the dual route is on.
    pub span: Option<Arc<RationalSpan>>,
}

type Key = (GenKind, usize, usize);

/// Caches generator sets and their lattices for a fixed q.
pub struct RelatorContext {
    pub q: u64,
    /// Also run the independent ℚ elimination for every membership check.
    pub dual_route: bool,
    built: Mutex<HashMap<Key, Arc<Built>>>,
    spans: Mutex<HashMap<Key, Arc<RationalSpan>>>,
}

const CHUNK: usize = 512;

impl RelatorContext {
    pub fn new(q: u64) -> Self {
        RelatorContext { q, dual_route: true, built: Mutex::new(HashMap::new()), spans: Mutex::new(HashMap::new()) }
    }

    pub fn with_dual_route(mut self, on: bool) -> Self {
        self.dual_route = on;
        self
    }

    pub fn coordinates(kind: GenKind) -> Coordinates {
        match kind {
            GenKind::I => Coordinates::LieX1,
            GenKind::Gamma => Coordinates::Full,
        }
    }

    fn space(kind: GenKind, n: usize) -> WordSpace {
        match Self::coordinates(kind) {
            Coordinates::Full => WordSpace::multilinear(n),
            Coordinates::LieX1 => WordSpace::multilinear_x1_initial(n),
        }
    }

    fn generator_set(&self, kind: GenKind, n: usize, m_max: usize) -> GeneratorSet {
        match kind {
            GenKind::I => generators_i(self.q, n, m_max),
            GenKind::Gamma => generators_gamma(self.q, n, m_max),
        }
    }

    pub(crate) fn built(&self, kind: GenKind, n: usize, m_max: usize) -> Result<Arc<Built>> {
        let key = (kind, n, m_max);
        if let Some(b) = self.built.lock().expect("cache lock").get(&key) {
            return Ok(b.clone());
        }
        let set = self.generator_set(kind, n, m_max);
        let space = Self::space(kind, n);
        let mut lattice = IntegerLattice::new(space.len());
        let mut span = self.dual_route.then(|| RationalSpan::new(space.len()));
        let mut start = 0;
        while start < set.len() {
            let end = (start + CHUNK).min(set.len());
            let polys = set.evaluate_range(start, end);
            for (k, p) in polys.iter().enumerate() {
                let v = p.project(&space);
                lattice.insert(start + k, &v)?;
                if let Some(span) = span.as_mut() {
                    span.insert(start + k, &v)?;
                }
            }
            start = end;
        }
        let b = Arc::new(Built { set, space, lattice, span: span.map(Arc::new) });
        self.built.lock().expect("cache lock").insert(key, b.clone());
        Ok(b)
    }

    pub fn generators(&self, kind: GenKind, n: usize, m_max: usize) -> Result<GeneratorSet> {
        Ok(self.built(kind, n, m_max)?.set.clone())
    }

    pub fn lattice_rank(&self, kind: GenKind, n: usize, m_max: usize) -> Result<usize> {
        Ok(self.built(kind, n, m_max)?.lattice.rank())
    }

    /// Certifies `target` (a multilinear element of degree n) against the
    /// lattice of the given generators, then replays the certificate in A.
    pub fn certify(
        &self,
        kind: GenKind,
        n: usize,
        m_max: usize,
        target: &AssocPoly,
        ring: Ring,
    ) -> Result<CertifiedMembership> {
        let b = self.built(kind, n, m_max)?;
        let outcome = if target.is_zero() {
            Membership::Member(crate::linalg::MembershipCertificate::zero(ring))
        } else {
            b.lattice.solve(&target.project(&b.space), ring)?
        };
        let space = &b.space;
        Ok(CertifiedMembership::from_outcome(&b.set, target, outcome, |r| {
            AssocPoly::from_vector(space, r)
        }))
    }

    /// ℚ-span membership by rational elimination, independent of the lattice code.
    pub fn certify_rational(
        &self,
        kind: GenKind,
        n: usize,
        m_max: usize,
        target: &AssocPoly,
    ) -> Result<CertifiedMembership> {
        let b = self.built(kind, n, m_max)?;
        let key = (kind, n, m_max);
        let cached = b.span.clone().or_else(|| self.spans.lock().expect("cache lock").get(&key).cloned());
        let span = match cached {
            Some(s) => s,
            None => {
                let mut span = RationalSpan::new(b.space.len());
                for (i, p) in b.set.evaluate_all().iter().enumerate() {
                    span.insert(i, &p.project(&b.space))?;
                }
                let s = Arc::new(span);
                self.spans.lock().expect("cache lock").insert(key, s.clone());
                s
            }
        };
        let outcome = span.solve(&target.project(&b.space))?;
        let space = &b.space;
        Ok(CertifiedMembership::from_outcome(&b.set, target, outcome, |r| {
            AssocPoly::from_vector(space, r)
        }))
    }
}
