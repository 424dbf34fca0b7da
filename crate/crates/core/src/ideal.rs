//! Monomial ideals with exact lattice arithmetic.
//!
//! An ideal is stored by its unique minimal generating set, sorted in the
//! canonical (weighted degree, lex) order, so structural equality is ideal
//! equality and every rendering is byte-stable. The zero ideal is not
//! representable; module code encodes "no relations" separately.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monomial::{parse_monomial, Monomial};
use crate::ring::Ring;

#[derive(Debug, Clone)]
pub struct MonomialIdeal {
    ring: Arc<Ring>,
    gens: Vec<Monomial>,
}

impl PartialEq for MonomialIdeal {
    fn eq(&self, other: &Self) -> bool {
        debug_assert_eq!(
            self.ring, other.ring,
            "comparing ideals over different rings"
        );
        self.gens == other.gens
    }
}

impl Eq for MonomialIdeal {}

impl PartialOrd for MonomialIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MonomialIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gens.cmp(&other.gens)
    }
}

impl MonomialIdeal {
    /// Builds an ideal from any nonempty generating set; the generators are
    /// minimalized (divisibility-redundant ones dropped) and sorted.
    pub fn new(ring: Arc<Ring>, gens: Vec<Monomial>) -> Result<MonomialIdeal> {
        if gens.is_empty() {
            return Err(Error::invalid("an ideal needs at least one generator"));
        }
        for g in &gens {
            if g.nvars() != ring.nvars() {
                return Err(Error::invalid("generator arity does not match the ring"));
            }
        }
        Ok(MonomialIdeal {
            gens: minimalize(&ring, gens),
            ring,
        })
    }

    /// The unit ideal `(1)`.
    pub fn unit(ring: Arc<Ring>) -> MonomialIdeal {
        let one = Monomial::one(ring.nvars());
        MonomialIdeal {
            ring,
            gens: vec![one],
        }
    }

    fn from_minimal(ring: Arc<Ring>, gens: Vec<Monomial>) -> MonomialIdeal {
        MonomialIdeal {
            gens: minimalize(&ring, gens),
            ring,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// The minimal generators, in canonical order.
    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }

    /// Whether the ideal is proper and nonzero (always nonzero here).
    pub fn is_proper(&self) -> bool {
        !self.is_unit()
    }

    /// Membership: some generator divides `m`.
    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    /// Ideal containment `other ⊆ self`.
    pub fn contains_ideal(&self, other: &MonomialIdeal) -> bool {
        self.assert_same_ring(other);
        other.gens.iter().all(|g| self.contains(g))
    }

    /// `self + other`.
    pub fn sum(&self, other: &MonomialIdeal) -> MonomialIdeal {
        self.assert_same_ring(other);
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        MonomialIdeal::from_minimal(self.ring.clone(), gens)
    }

    /// `self * other` (all pairwise products, minimalized).
    pub fn product(&self, other: &MonomialIdeal) -> MonomialIdeal {
        self.assert_same_ring(other);
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b));
            }
        }
        MonomialIdeal::from_minimal(self.ring.clone(), gens)
    }

    /// `self^n`, with `self^0 = (1)`. Iterated product, minimalizing at
    /// every step to keep the intermediate generator sets small.
    pub fn power(&self, n: u32) -> MonomialIdeal {
        let mut acc = MonomialIdeal::unit(self.ring.clone());
        for _ in 0..n {
            acc = acc.product(self);
        }
        acc
    }

    /// `self ∩ other` via pairwise lcm.
    pub fn intersect(&self, other: &MonomialIdeal) -> MonomialIdeal {
        self.assert_same_ring(other);
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.lcm(b));
            }
        }
        MonomialIdeal::from_minimal(self.ring.clone(), gens)
    }

    /// `(self : m)`, generated by `g : m` over the generators.
    pub fn colon_monomial(&self, m: &Monomial) -> MonomialIdeal {
        let gens = self.gens.iter().map(|g| g.colon(m)).collect();
        MonomialIdeal::from_minimal(self.ring.clone(), gens)
    }

    /// `(self : other) = ∩_h (self : h)` over the generators of `other`.
    pub fn colon_ideal(&self, other: &MonomialIdeal) -> MonomialIdeal {
        self.assert_same_ring(other);
        let mut acc: Option<MonomialIdeal> = None;
        for h in &other.gens {
            let piece = self.colon_monomial(h);
            acc = Some(match acc {
                None => piece,
                Some(cur) => cur.intersect(&piece),
            });
        }
        acc.expect("ideal has at least one generator")
    }

    /// Saturation `(self : other^∞)` by iterated colon, together with the
    /// number of colon steps taken to witness the fixed point: the smallest
    /// `k >= 1` with `(self : other^k) = (self : other^(k-1))`.
    pub fn saturate(&self, other: &MonomialIdeal) -> (MonomialIdeal, u32) {
        self.assert_same_ring(other);
        let mut prev = self.clone();
        let mut onset = 0u32;
        loop {
            onset += 1;
            let next = prev.colon_ideal(other);
            if next == prev {
                return (prev, onset);
            }
            prev = next;
        }
    }

    /// Weighted degrees of the minimal generators, as a sorted multiset.
    pub fn generator_degrees(&self) -> Result<Vec<u64>> {
        if self.is_unit() {
            return Err(Error::invalid(
                "generator degrees of the unit ideal are undefined",
            ));
        }
        let mut degs: Vec<u64> = self.gens.iter().map(|g| self.ring.degree(g)).collect();
        degs.sort_unstable();
        Ok(degs)
    }

    /// Ring-aware order on ideals: generator lists compared elementwise in
    /// the canonical monomial order. (The derived `Ord` is structural and
    /// only serves ordered collections.)
    pub fn canonical_cmp(&self, other: &MonomialIdeal) -> Ordering {
        self.assert_same_ring(other);
        for (a, b) in self.gens.iter().zip(&other.gens) {
            let ord = self.ring.monomial_cmp(a, b);
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.gens.len().cmp(&other.gens.len())
    }

    /// Text form `(X^3, Y, X*Z)` in canonical generator order.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self.gens.iter().map(|g| g.render(&self.ring)).collect();
        format!("({})", parts.join(", "))
    }

    fn assert_same_ring(&self, other: &MonomialIdeal) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "ring mismatch between ideals"
        );
    }
}

/// Drops every generator divisible by another and deduplicates, returning
/// the canonical sorted minimal generating set. Processing in increasing
/// degree means each candidate only needs checking against kept generators.
fn minimalize(ring: &Ring, mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_unstable_by(|a, b| ring.monomial_cmp(a, b));
    gens.dedup();
    let mut kept: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !kept.iter().any(|k| k.divides(&g)) {
            kept.push(g);
        }
    }
    kept
}

/// Parses an ideal list `(m1, m2, ...)`; the empty list is rejected.
pub fn parse_ideal(text: &str, ring: &Arc<Ring>) -> Result<MonomialIdeal> {
    let gens = parse_generator_list(text, ring)?;
    if gens.is_empty() {
        return Err(Error::parse(0, "empty generator list".to_string()));
    }
    MonomialIdeal::new(ring.clone(), gens)
}

/// Parses `(m1, ..., mk)` with `k >= 0`; `()` yields an empty vector, which
/// `parse_ideal` rejects as an ideal.
pub fn parse_generator_list(text: &str, ring: &Arc<Ring>) -> Result<Vec<Monomial>> {
    let text = text.trim();
    let inner = text
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::parse(0, format!("expected a parenthesized list, got `{text}`")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|part| parse_monomial(part, ring))
        .collect()
}
