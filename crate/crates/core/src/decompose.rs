//! Irreducible and primary decomposition of monomial ideals by generator
//! splitting, plus exhaustive box-search oracles for associated primes and
//! witness degrees.
//!
//! The oracles enumerate every monomial in the truncated exponent box
//! (exponents bounded by the maxima over the generators involved); the
//! truncation loses nothing because colons and divisibility checks only
//! compare exponents against generator exponents. Production code uses the
//! colon-kernel route in `vnumber`; the oracles exist to cross-check it.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::Monomial;
use crate::prime::MonomialPrime;

/// Largest witness box the oracles will enumerate.
const MAX_BOX_VOLUME: u128 = 4_000_000;

/// A primary monomial ideal together with its radical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryComponent {
    pub ideal: MonomialIdeal,
    pub radical: MonomialPrime,
}

/// Decomposes a proper monomial ideal into irreducible (pure-power) ideals
/// whose intersection is the input, with redundant components dropped.
pub fn irreducible_decomposition(ideal: &MonomialIdeal) -> Result<Vec<MonomialIdeal>> {
    decompose_with(ideal, &mut canonical_pivot)
}

/// Same decomposition but with pivots chosen by a seeded RNG; the result
/// must not depend on the pivot order, which property tests assert.
pub fn irreducible_decomposition_seeded(
    ideal: &MonomialIdeal,
    seed: u64,
) -> Result<Vec<MonomialIdeal>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    decompose_with(ideal, &mut move |i: &MonomialIdeal| {
        let candidates: Vec<usize> = i
            .gens()
            .iter()
            .enumerate()
            .filter(|(_, g)| g.support().count() >= 2)
            .map(|(k, _)| k)
            .collect();
        if candidates.is_empty() {
            return None;
        }
        let gen_idx = candidates[rng.random_range(0..candidates.len())];
        let support: Vec<usize> = i.gens()[gen_idx].support().collect();
        let var = support[rng.random_range(0..support.len())];
        Some((gen_idx, var))
    })
}

/// Groups irreducible components by radical and intersects each group,
/// yielding the unique irredundant primary decomposition.
pub fn irredundant_primary(ideal: &MonomialIdeal) -> Result<Vec<PrimaryComponent>> {
    let irreducibles = irreducible_decomposition(ideal)?;
    let mut groups: std::collections::BTreeMap<Vec<usize>, MonomialIdeal> = Default::default();
    for comp in irreducibles {
        let support = ideal_vars(&comp);
        match groups.get_mut(&support) {
            Some(acc) => *acc = acc.intersect(&comp),
            None => {
                groups.insert(support, comp);
            }
        }
    }
    let pruned = prune_redundant(groups.into_values().collect());
    let mut out = Vec::with_capacity(pruned.len());
    for ideal in pruned {
        let radical = MonomialPrime::new(ideal.ring().clone(), ideal_vars(&ideal))?;
        debug_assert!(is_primary_to(&ideal, &radical));
        out.push(PrimaryComponent { ideal, radical });
    }
    out.sort_by(|a, b| a.radical.cmp(&b.radical));
    Ok(out)
}

/// `Ass(R/I)`: the radicals of the irredundant primary decomposition.
pub fn ass_quotient(ideal: &MonomialIdeal) -> Result<Vec<MonomialPrime>> {
    Ok(irredundant_primary(ideal)?
        .into_iter()
        .map(|c| c.radical)
        .collect())
}

/// Exhaustive-oracle `Ass(A/B)`: every monomial of the witness box with
/// `m ∈ A∖B` and `(B : m)` prime contributes its annihilator.
pub fn boxed_ass_subquotient(
    upper: &MonomialIdeal,
    lower: &MonomialIdeal,
) -> Result<Vec<MonomialPrime>> {
    boxed_ass_in_box(upper, lower, &witness_box(upper, lower))
}

/// Box-search Ass over explicit exponent bounds, for truncation tests.
pub fn boxed_ass_in_box(
    upper: &MonomialIdeal,
    lower: &MonomialIdeal,
    bounds: &[u64],
) -> Result<Vec<MonomialPrime>> {
    check_subquotient(upper, lower)?;
    let ring = lower.ring().clone();
    let mut found: BTreeSet<MonomialPrime> = BTreeSet::new();
    for_each_in_box(bounds, &mut |m| {
        if upper.contains(m) && !lower.contains(m) {
            if let Some(support) = prime_support(&lower.colon_monomial(m)) {
                found.insert(
                    MonomialPrime::new(ring.clone(), support)
                        .expect("support indices are in range"),
                );
            }
        }
    })?;
    Ok(found.into_iter().collect())
}

/// Exhaustive-oracle local witness search: the least weighted degree of a
/// monomial `m ∈ A∖B` with `(B : m) = p`, with its witness.
pub fn boxed_local_witness(
    upper: &MonomialIdeal,
    lower: &MonomialIdeal,
    prime: &MonomialPrime,
) -> Result<Option<(u64, Monomial)>> {
    check_subquotient(upper, lower)?;
    let ring = lower.ring().clone();
    let target = prime.as_ideal();
    let mut best: Option<(u64, Monomial)> = None;
    for_each_in_box(&witness_box(upper, lower), &mut |m| {
        if upper.contains(m) && !lower.contains(m) && lower.colon_monomial(m) == target {
            let deg = ring.degree(m);
            let better = match &best {
                None => true,
                Some((d, w)) => deg < *d || (deg == *d && ring.monomial_cmp(m, w).is_lt()),
            };
            if better {
                best = Some((deg, m.clone()));
            }
        }
    })?;
    Ok(best)
}

/// Componentwise maxima of the generator exponents of both ideals: the
/// truncation bounds outside which no colon or membership test changes.
pub fn witness_box(upper: &MonomialIdeal, lower: &MonomialIdeal) -> Vec<u64> {
    let n = lower.ring().nvars();
    let mut bounds = vec![0u64; n];
    for g in upper.gens().iter().chain(lower.gens()) {
        for (b, e) in bounds.iter_mut().zip(g.exponents()) {
            *b = (*b).max(*e);
        }
    }
    bounds
}

fn check_subquotient(upper: &MonomialIdeal, lower: &MonomialIdeal) -> Result<()> {
    if !upper.contains_ideal(lower) {
        return Err(Error::invalid(
            "subquotient requires the lower ideal inside the upper",
        ));
    }
    Ok(())
}

/// All variable indices occurring in the generators.
pub(crate) fn ideal_vars(ideal: &MonomialIdeal) -> Vec<usize> {
    let mut vars: Vec<usize> = ideal.gens().iter().flat_map(|g| g.support()).collect();
    vars.sort_unstable();
    vars.dedup();
    vars
}

/// `Some(support)` when every generator is a bare variable.
fn prime_support(ideal: &MonomialIdeal) -> Option<Vec<usize>> {
    let mut support = Vec::with_capacity(ideal.gens().len());
    for g in ideal.gens() {
        let vars: Vec<usize> = g.support().collect();
        if vars.len() != 1 || g.exponent(vars[0]) != 1 {
            return None;
        }
        support.push(vars[0]);
    }
    Some(support)
}

fn is_primary_to(ideal: &MonomialIdeal, radical: &MonomialPrime) -> bool {
    radical
        .support()
        .iter()
        .all(|&i| ideal.gens().iter().any(|g| g.support().eq([i])))
}

fn canonical_pivot(ideal: &MonomialIdeal) -> Option<(usize, usize)> {
    ideal
        .gens()
        .iter()
        .position(|g| g.support().count() >= 2)
        .map(|k| {
            (
                k,
                ideal.gens()[k].support().next().expect("mixed generator"),
            )
        })
}

/// Worklist splitting: replace a mixed generator `g = u·v` (u the pure part
/// in one variable, v the coprime remainder) by the two ideals `I + (u)`
/// and `I + (v)`; their intersection is `I`.
fn decompose_with(
    ideal: &MonomialIdeal,
    pivot: &mut dyn FnMut(&MonomialIdeal) -> Option<(usize, usize)>,
) -> Result<Vec<MonomialIdeal>> {
    if ideal.is_unit() {
        return Err(Error::invalid("cannot decompose the unit ideal"));
    }
    let ring: Arc<crate::ring::Ring> = ideal.ring().clone();
    let mut finished: BTreeSet<MonomialIdeal> = BTreeSet::new();
    let mut seen: BTreeSet<MonomialIdeal> = BTreeSet::new();
    let mut stack = vec![ideal.clone()];
    while let Some(current) = stack.pop() {
        if !seen.insert(current.clone()) {
            continue;
        }
        match pivot(&current) {
            None => {
                finished.insert(current);
            }
            Some((gen_idx, var)) => {
                let g = &current.gens()[gen_idx];
                let u = Monomial::var(ring.nvars(), var).pow(g.exponent(var));
                let v = g.colon(&u);
                debug_assert!(!u.is_one() && !v.is_one());
                for part in [u, v] {
                    let mut gens: Vec<Monomial> = current.gens().to_vec();
                    gens[gen_idx] = part;
                    stack.push(MonomialIdeal::new(ring.clone(), gens)?);
                }
            }
        }
    }
    Ok(prune_redundant(finished.into_iter().collect()))
}

/// Drops any component containing the intersection of the others, rescanning
/// in canonical order until a fixed point.
fn prune_redundant(mut comps: Vec<MonomialIdeal>) -> Vec<MonomialIdeal> {
    comps.sort_by(|a, b| a.canonical_cmp(b));
    'scan: loop {
        if comps.len() <= 1 {
            return comps;
        }
        for i in 0..comps.len() {
            let mut others = comps
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, c)| c);
            let first = others.next().expect("at least two components").clone();
            let intersection = others.fold(first, |acc, c| acc.intersect(c));
            if comps[i].contains_ideal(&intersection) {
                comps.remove(i);
                continue 'scan;
            }
        }
        return comps;
    }
}

/// Calls `f` on every monomial with exponents at most `bounds`.
fn for_each_in_box(bounds: &[u64], f: &mut dyn FnMut(&Monomial)) -> Result<()> {
    let volume: u128 = bounds.iter().map(|&b| b as u128 + 1).product();
    if volume > MAX_BOX_VOLUME {
        return Err(Error::cap(format!(
            "witness box of {volume} monomials exceeds the oracle limit of {MAX_BOX_VOLUME}"
        )));
    }
    let mut exps = vec![0u64; bounds.len()];
    loop {
        f(&Monomial::new(exps.clone()));
        let mut i = 0;
        loop {
            if i == bounds.len() {
                return Ok(());
            }
            if exps[i] < bounds[i] {
                exps[i] += 1;
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}
