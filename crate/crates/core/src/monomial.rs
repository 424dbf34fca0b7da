//! Monomials as exponent vectors, with the divisibility lattice.
//!
//! Divisibility is componentwise `<=`; gcd/lcm are componentwise min/max and
//! the colon `a : b` truncates at zero. All arithmetic is checked: the parse
//! caps in [`crate::ring`] keep it from ever overflowing in practice.

use crate::error::{Error, Result};
use crate::ring::{Ring, MAX_EXPONENT};

/// An exponent vector. Structural `Ord` is plain lex on exponents; use
/// [`Ring::monomial_cmp`] for the canonical (degree, lex) order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<u64>,
}

impl Monomial {
    pub fn new(exps: Vec<u64>) -> Monomial {
        Monomial { exps }
    }

    /// The unit monomial `1` in `n` variables.
    pub fn one(nvars: usize) -> Monomial {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    /// A single variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn exponent(&self, i: usize) -> u64 {
        self.exps[i]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Indices of variables appearing with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    /// `self | other`, i.e. componentwise `<=`.
    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.nvars(), other.nvars());
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// The colon `self : other`, exponentwise `max(a_i - b_i, 0)`; equals
    /// `self / gcd(self, other)`.
    pub fn colon(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a.saturating_sub(*b))
                .collect(),
        )
    }

    /// Product, with checked exponent addition.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a.checked_add(*b).expect("monomial exponent overflow"))
                .collect(),
        )
    }

    /// `self^k`, with checked exponent scaling.
    pub fn pow(&self, k: u64) -> Monomial {
        Monomial::new(
            self.exps
                .iter()
                .map(|e| e.checked_mul(k).expect("monomial exponent overflow"))
                .collect(),
        )
    }

    /// Exact quotient if `other | self`.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        if other.divides(self) {
            Some(Monomial::new(
                self.exps
                    .iter()
                    .zip(&other.exps)
                    .map(|(a, b)| a - b)
                    .collect(),
            ))
        } else {
            None
        }
    }

    /// Text form `X^3*Y`; the unit renders as `1`.
    pub fn render(&self, ring: &Ring) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(ring.var(i).to_string()),
                _ => parts.push(format!("{}^{}", ring.var(i), e)),
            }
        }
        parts.join("*")
    }
}

/// Parses `term ("*" term)*` with `term := var | var "^" posint | "1"`.
/// Repeated variables accumulate; exponents are capped at [`MAX_EXPONENT`].
pub fn parse_monomial(text: &str, ring: &Ring) -> Result<Monomial> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::parse(0, "empty monomial".to_string()));
    }
    let mut exps = vec![0u64; ring.nvars()];
    for raw in text.split('*') {
        let term = raw.trim();
        if term.is_empty() {
            return Err(Error::parse(0, format!("empty factor in `{text}`")));
        }
        if term == "1" {
            continue;
        }
        let (name, exp) = match term.split_once('^') {
            None => (term, 1u64),
            Some((name, e)) => {
                let e = e.trim();
                let val: u64 = e.parse().map_err(|_| {
                    Error::parse(0, format!("malformed exponent `{e}` in `{term}`"))
                })?;
                if val == 0 || val > MAX_EXPONENT {
                    return Err(Error::parse(
                        0,
                        format!("exponent {val} out of range 1..={MAX_EXPONENT}"),
                    ));
                }
                (name.trim(), val)
            }
        };
        let idx = ring
            .var_index(name)
            .ok_or_else(|| Error::parse(0, format!("unknown variable `{name}`")))?;
        exps[idx] = exps[idx]
            .checked_add(exp)
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or_else(|| {
                Error::parse(0, format!("exponent of `{name}` exceeds {MAX_EXPONENT}"))
            })?;
    }
    Ok(Monomial::new(exps))
}
