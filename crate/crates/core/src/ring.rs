//! Ambient polynomial ring data: named variables with positive integer
//! weights. The ring carries no coefficient arithmetic — every computation
//! downstream is exact and coefficient-independent — so the field is left
//! implicit.

use crate::error::{Error, Result};
use crate::monomial::Monomial;

/// Hard caps keeping checked arithmetic safely inside `u64`/`i64` range.
pub const MAX_VARS: usize = 64;
pub const MAX_WEIGHT: u64 = 1_000_000;
pub const MAX_EXPONENT: u64 = 1_000_000_000;

/// A weighted polynomial ring `K[x1..xn]`, `deg(xi) = wi >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    vars: Vec<String>,
    weights: Vec<u64>,
}

impl Ring {
    /// Builds a ring, validating variable names and weights.
    pub fn new(vars: Vec<String>, weights: Vec<u64>) -> Result<Ring> {
        if vars.is_empty() {
            return Err(Error::invalid("a ring needs at least one variable"));
        }
        if vars.len() > MAX_VARS {
            return Err(Error::invalid(format!(
                "at most {MAX_VARS} variables supported"
            )));
        }
        if weights.len() != vars.len() {
            return Err(Error::invalid(format!(
                "{} weights given for {} variables",
                weights.len(),
                vars.len()
            )));
        }
        for name in &vars {
            if !is_identifier(name) {
                return Err(Error::invalid(format!("invalid variable name `{name}`")));
            }
            if vars.iter().filter(|v| *v == name).count() > 1 {
                return Err(Error::invalid(format!("duplicate variable `{name}`")));
            }
        }
        for &w in &weights {
            if w == 0 || w > MAX_WEIGHT {
                return Err(Error::invalid(format!(
                    "weight {w} out of range 1..={MAX_WEIGHT}"
                )));
            }
        }
        Ok(Ring { vars, weights })
    }

    /// Standard grading (all weights 1).
    pub fn standard(names: &[&str]) -> Result<Ring> {
        Ring::new(
            names.iter().map(|s| s.to_string()).collect(),
            vec![1; names.len()],
        )
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var(&self, i: usize) -> &str {
        &self.vars[i]
    }

    pub fn weight(&self, i: usize) -> u64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Weighted degree `sum_i w_i e_i`. Panics on overflow, which the parse
    /// caps keep unreachable for desk-scale inputs.
    pub fn degree(&self, m: &Monomial) -> u64 {
        debug_assert_eq!(m.nvars(), self.nvars(), "monomial/ring arity mismatch");
        let mut d: u64 = 0;
        for (i, &e) in m.exponents().iter().enumerate() {
            let term = self.weights[i].checked_mul(e).expect("degree overflow");
            d = d.checked_add(term).expect("degree overflow");
        }
        d
    }

    /// Canonical order: ascending weighted degree, ties by descending
    /// exponent-vector lex — so within a degree, monomials heavier in
    /// earlier variables list first (`X^2 < X*Y < Y^2`).
    pub fn monomial_cmp(&self, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
        self.degree(a).cmp(&self.degree(b)).then_with(|| b.cmp(a))
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_rings() {
        assert!(Ring::new(vec![], vec![]).is_err());
        assert!(Ring::new(vec!["X".into(), "X".into()], vec![1, 1]).is_err());
        assert!(Ring::new(vec!["X".into()], vec![0]).is_err());
        assert!(Ring::new(vec!["1".into()], vec![1]).is_err());
        assert!(Ring::new(vec!["X".into()], vec![1, 2]).is_err());
    }

    #[test]
    fn weighted_degree() {
        let r = Ring::new(vec!["X".into(), "Y".into()], vec![2, 3]).unwrap();
        let m = Monomial::new(vec![1, 2]);
        assert_eq!(r.degree(&m), 8);
    }
}
