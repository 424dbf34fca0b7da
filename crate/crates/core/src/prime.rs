//! Monomial primes: ideals generated by a subset of the variables.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::{parse_monomial, Monomial};
use crate::ring::Ring;

/// The prime ideal `(x_i : i in support)`.
///
/// An empty support denotes the zero prime. It exists so annihilator
/// arithmetic stays total, but it is never associated to the subquotients
/// built here (their lower ideals are nonzero), so it never appears in any
/// computed Ass set.
#[derive(Debug, Clone)]
pub struct MonomialPrime {
    ring: Arc<Ring>,
    support: Vec<usize>,
}

impl PartialEq for MonomialPrime {
    fn eq(&self, other: &Self) -> bool {
        debug_assert_eq!(
            self.ring, other.ring,
            "comparing primes over different rings"
        );
        self.support == other.support
    }
}

impl Eq for MonomialPrime {}

impl Hash for MonomialPrime {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.support.hash(state);
    }
}

impl PartialOrd for MonomialPrime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Primes sort by their sorted support, so `(X) < (X,Y) < (Y)`.
impl Ord for MonomialPrime {
    fn cmp(&self, other: &Self) -> Ordering {
        self.support.cmp(&other.support)
    }
}

impl MonomialPrime {
    /// Builds a prime from variable indices; duplicates collapse.
    pub fn new(ring: Arc<Ring>, support: impl IntoIterator<Item = usize>) -> Result<MonomialPrime> {
        let mut support: Vec<usize> = support.into_iter().collect();
        support.sort_unstable();
        support.dedup();
        if let Some(&i) = support.last() {
            if i >= ring.nvars() {
                return Err(Error::invalid(format!(
                    "variable index {i} out of range for a ring with {} variables",
                    ring.nvars()
                )));
            }
        }
        Ok(MonomialPrime { ring, support })
    }

    /// Convenience constructor from variable names.
    pub fn from_vars(ring: &Arc<Ring>, names: &[&str]) -> Result<MonomialPrime> {
        let mut support = Vec::with_capacity(names.len());
        for name in names {
            let i = ring
                .var_index(name)
                .ok_or_else(|| Error::invalid(format!("unknown variable `{name}`")))?;
            support.push(i);
        }
        MonomialPrime::new(ring.clone(), support)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// Sorted variable indices generating the prime.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn is_zero_prime(&self) -> bool {
        self.support.is_empty()
    }

    /// The prime as a monomial ideal. Panics on the zero prime, which has
    /// no generator representation here.
    pub fn as_ideal(&self) -> MonomialIdeal {
        assert!(
            !self.support.is_empty(),
            "the zero prime is not a monomial ideal"
        );
        let gens = self
            .support
            .iter()
            .map(|&i| Monomial::var(self.ring.nvars(), i))
            .collect();
        MonomialIdeal::new(self.ring.clone(), gens).expect("variable generators are valid")
    }

    /// Membership `m ∈ p`: some support variable occurs in `m`.
    pub fn contains_monomial(&self, m: &Monomial) -> bool {
        self.support.iter().any(|&i| m.exponent(i) > 0)
    }

    /// Containment `I ⊆ p`, i.e. `p ∈ V(I)`.
    pub fn contains_ideal(&self, ideal: &MonomialIdeal) -> bool {
        ideal.gens().iter().all(|g| self.contains_monomial(g))
    }

    /// Support inclusion `self ⊆ other` as primes.
    pub fn subset_of(&self, other: &MonomialPrime) -> bool {
        self.support
            .iter()
            .all(|i| other.support.binary_search(i).is_ok())
    }

    /// Text form `(X,Y)`; the zero prime renders `(0)`.
    pub fn render(&self) -> String {
        if self.support.is_empty() {
            return "(0)".to_string();
        }
        let names: Vec<&str> = self.support.iter().map(|&i| self.ring.var(i)).collect();
        format!("({})", names.join(","))
    }
}

/// Renders a sorted set of primes as `{(X), (X,Y)}`.
pub fn render_prime_set(primes: &[MonomialPrime]) -> String {
    let parts: Vec<String> = primes.iter().map(|p| p.render()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Parses `(X,Y)`: a parenthesized list of bare variable names.
pub fn parse_prime(text: &str, ring: &Arc<Ring>) -> Result<MonomialPrime> {
    let trimmed = text.trim();
    let inner = trimmed
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| {
            Error::parse(
                0,
                format!("expected a parenthesized prime, got `{trimmed}`"),
            )
        })?;
    let mut support = Vec::new();
    for part in inner.split(',') {
        let m = parse_monomial(part, ring)?;
        let vars: Vec<usize> = m.support().collect();
        if vars.len() != 1 || m.exponent(vars[0]) != 1 {
            return Err(Error::parse(
                0,
                format!(
                    "`{}` is not a variable; primes are generated by variables",
                    part.trim()
                ),
            ));
        }
        support.push(vars[0]);
    }
    MonomialPrime::new(ring.clone(), support)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::parse_ideal;

    fn xyz() -> Arc<Ring> {
        Arc::new(Ring::standard(&["X", "Y", "Z"]).unwrap())
    }

    #[test]
    fn construction_sorts_and_dedups() {
        let r = xyz();
        let p = MonomialPrime::new(r.clone(), [2, 0, 2]).unwrap();
        assert_eq!(p.support(), &[0, 2]);
        assert_eq!(p.render(), "(X,Z)");
        assert!(MonomialPrime::new(r, [3]).is_err());
    }

    #[test]
    fn membership_and_containment() {
        let r = xyz();
        let m = MonomialPrime::from_vars(&r, &["X", "Y", "Z"]).unwrap();
        let p = MonomialPrime::from_vars(&r, &["X"]).unwrap();
        assert!(m.contains_ideal(&parse_ideal("(X*Y, Z)", &r).unwrap()));
        assert!(!p.contains_ideal(&parse_ideal("(X, Y^2, Z^3)", &r).unwrap()));
        assert!(p.contains_ideal(&parse_ideal("(X^5, X*Y)", &r).unwrap()));
        assert!(p.contains_monomial(&parse_monomial("X*Z", &r).unwrap()));
        assert!(!p.contains_monomial(&parse_monomial("Z^4", &r).unwrap()));
        assert!(p.subset_of(&m));
        assert!(!m.subset_of(&p));
    }

    #[test]
    fn as_ideal_round_trip() {
        let r = xyz();
        let q = MonomialPrime::from_vars(&r, &["X", "Y"]).unwrap();
        assert_eq!(q.as_ideal().render(), "(X, Y)");
        assert_eq!(parse_prime("(X,Y)", &r).unwrap(), q);
        assert_eq!(parse_prime(&q.render(), &r).unwrap(), q);
        assert!(parse_prime("(X^2)", &r).is_err());
        assert!(parse_prime("(X*Y)", &r).is_err());
        assert!(parse_prime("X", &r).is_err());
    }

    #[test]
    fn canonical_set_order() {
        let r = xyz();
        let mut set = vec![
            MonomialPrime::from_vars(&r, &["Y"]).unwrap(),
            MonomialPrime::from_vars(&r, &["X", "Y", "Z"]).unwrap(),
            MonomialPrime::from_vars(&r, &["X"]).unwrap(),
            MonomialPrime::from_vars(&r, &["X", "Y"]).unwrap(),
        ];
        set.sort();
        assert_eq!(render_prime_set(&set), "{(X), (X,Y), (X,Y,Z), (Y)}");
    }

    #[test]
    fn zero_prime_is_inert() {
        let r = xyz();
        let z = MonomialPrime::new(r.clone(), []).unwrap();
        assert!(z.is_zero_prime());
        assert_eq!(z.render(), "(0)");
        assert!(!z.contains_monomial(&parse_monomial("X", &r).unwrap()));
    }
}
