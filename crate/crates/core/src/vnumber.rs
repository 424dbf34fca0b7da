//! Associated primes and v-numbers of subquotient modules.
//!
//! For a component `A/B` every graded piece is spanned by at most one
//! monomial image, so `p ∈ Ass(A/B)` exactly when some monomial `m ∈ A∖B`
//! has `(B : m) = p`, and `v_p` is the least (shifted) degree of such an
//! `m`. The kernel reduces the search to minimal generators: witnesses
//! live among the minimal generators `g ∉ B` of `(B : p) ∩ A`, because any
//! witness `m` is divisible by such a `g` with `(B : g) ⊆ (B : m) = p` and
//! `(B : g) ⊇ p`, at no larger degree.
//!
//! Over a direct sum the annihilator of a tuple is the intersection of the
//! component annihilators, and an intersection of monomial colon ideals
//! that equals a prime already has one term equal to it (the lcm of the
//! off-prime parts would otherwise escape). Componentwise search is
//! therefore complete, which [`field_witness_oracle`] double-checks by
//! brute force over arbitrary monomial-image combinations.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::decompose::{ass_quotient, ideal_vars};
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::modules::{shifted_degree, SubquotientComponent, SubquotientModule, Val};
use crate::monomial::Monomial;
use crate::prime::MonomialPrime;
use crate::ring::Ring;

/// Components whose lower ideal touches more variables than this fall back
/// from the subset walk to decomposition-derived candidate primes.
const SUBSET_LIMIT: usize = 12;

/// Most monomial images the oracle will combine at one degree.
const MAX_ORACLE_IMAGES: usize = 20;

/// A minimal-degree witness for one associated prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalWitness {
    /// The local v-number: shifted degree of the witness.
    pub value: i64,
    pub monomial: Monomial,
    /// Index of the component the witness lives in.
    pub component: usize,
}

/// All associated primes of a module with their local v-numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VNumberResult {
    pub locals: BTreeMap<MonomialPrime, LocalWitness>,
    /// `min` of the local values; `∞` for the zero module.
    pub global: Val,
}

impl VNumberResult {
    pub fn primes(&self) -> Vec<MonomialPrime> {
        self.locals.keys().cloned().collect()
    }
}

/// Associated primes and local v-numbers of a subquotient module.
pub fn module_invariants(module: &SubquotientModule) -> Result<VNumberResult> {
    let ring = module.ring();
    let mut locals: BTreeMap<MonomialPrime, LocalWitness> = BTreeMap::new();
    for (index, comp) in module.components().iter().enumerate() {
        for (prime, (value, monomial)) in component_kernel(ring, comp)? {
            match locals.get(&prime) {
                Some(held) if held.value <= value => {}
                _ => {
                    locals.insert(
                        prime,
                        LocalWitness {
                            value,
                            monomial,
                            component: index,
                        },
                    );
                }
            }
        }
    }
    let global = locals
        .values()
        .map(|w| w.value)
        .min()
        .map(Val::Finite)
        .unwrap_or(Val::Infinity);
    Ok(VNumberResult { locals, global })
}

/// `Ass` of a subquotient module, in canonical order.
pub fn ass_subquotient(module: &SubquotientModule) -> Result<BTreeSet<MonomialPrime>> {
    Ok(module_invariants(module)?.locals.into_keys().collect())
}

/// The global v-number (`∞` for the zero module).
pub fn global_vnumber(module: &SubquotientModule) -> Result<Val> {
    Ok(module_invariants(module)?.global)
}

/// The local v-number at `prime`, or an error if it is not associated.
pub fn local_vnumber(module: &SubquotientModule, prime: &MonomialPrime) -> Result<LocalWitness> {
    let not_associated = || Error::NotAssociated {
        prime: prime.render(),
    };
    if prime.is_zero_prime() {
        return Err(not_associated());
    }
    let ring = module.ring();
    let prime_ideal = prime.as_ideal();
    let mut best: Option<LocalWitness> = None;
    for (index, comp) in module.components().iter().enumerate() {
        if comp.is_zero() {
            continue;
        }
        let colon = comp.lower().colon_ideal(&prime_ideal);
        if let Some((value, monomial)) = best_witness(ring, comp, &colon, prime) {
            if best.as_ref().is_none_or(|held| value < held.value) {
                best = Some(LocalWitness {
                    value,
                    monomial,
                    component: index,
                });
            }
        }
    }
    best.ok_or_else(not_associated)
}

/// Per-component witness search: best `(value, monomial)` for each prime.
fn component_kernel(
    ring: &Ring,
    comp: &SubquotientComponent,
) -> Result<BTreeMap<MonomialPrime, (i64, Monomial)>> {
    let mut found = BTreeMap::new();
    if comp.is_zero() {
        return Ok(found);
    }
    let lower = comp.lower();
    let vars = ideal_vars(lower);
    if vars.len() <= SUBSET_LIMIT {
        subset_kernel(ring, comp, &vars, &mut found);
    } else {
        for prime in ass_quotient(lower)? {
            let colon = lower.colon_ideal(&prime.as_ideal());
            if let Some(hit) = best_witness(ring, comp, &colon, &prime) {
                found.insert(prime, hit);
            }
        }
    }
    Ok(found)
}

/// Walks every support subset of the lower ideal's variables, building
/// `(B : p)` incrementally over the subset lattice, and keeps the covering
/// subsets (an associated prime contains `B`, so its support meets every
/// generator).
fn subset_kernel(
    ring: &Ring,
    comp: &SubquotientComponent,
    vars: &[usize],
    found: &mut BTreeMap<MonomialPrime, (i64, Monomial)>,
) {
    let lower = comp.lower();
    let gen_masks: Vec<u64> = lower
        .gens()
        .iter()
        .map(|g| {
            let mut mask = 0u64;
            for (bit, &v) in vars.iter().enumerate() {
                if g.exponent(v) > 0 {
                    mask |= 1 << bit;
                }
            }
            mask
        })
        .collect();
    let single: Vec<MonomialIdeal> = vars
        .iter()
        .map(|&v| lower.colon_monomial(&Monomial::var(ring.nvars(), v)))
        .collect();
    let mut by_mask: Vec<Option<MonomialIdeal>> = vec![None; 1 << vars.len()];
    for mask in 1u64..(1 << vars.len()) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let colon = if rest == 0 {
            single[low].clone()
        } else {
            by_mask[rest as usize]
                .as_ref()
                .unwrap()
                .intersect(&single[low])
        };
        if gen_masks.iter().all(|g| g & mask != 0) {
            let support: Vec<usize> = vars
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask & (1 << bit) != 0)
                .map(|(_, &v)| v)
                .collect();
            let prime = MonomialPrime::new(lower.ring().clone(), support)
                .expect("supports come from the ring");
            if let Some(hit) = best_witness(ring, comp, &colon, &prime) {
                found.insert(prime, hit);
            }
        }
        by_mask[mask as usize] = Some(colon);
    }
}

/// Minimal witness among generators of `(B : p) ∩ A` outside `B` whose
/// colon stays inside `p` (it then equals `p`).
fn best_witness(
    ring: &Ring,
    comp: &SubquotientComponent,
    lower_colon_prime: &MonomialIdeal,
    prime: &MonomialPrime,
) -> Option<(i64, Monomial)> {
    let candidates = lower_colon_prime.intersect(comp.upper());
    let mut best: Option<(i64, Monomial)> = None;
    for g in candidates.gens() {
        if comp.lower().contains(g) {
            continue;
        }
        let colon = comp.lower().colon_monomial(g);
        if !colon.gens().iter().all(|m| prime.contains_monomial(m)) {
            continue;
        }
        let value = shifted_degree(ring, g, comp.shift());
        let better = match &best {
            None => true,
            Some((held, held_mono)) => {
                value < *held
                    || (value == *held
                        && ring.monomial_cmp(g, held_mono) == std::cmp::Ordering::Less)
            }
        };
        if better {
            best = Some((value, g.clone()));
        }
    }
    best
}

/// Brute-force check of the componentwise kernel: searches monomial-image
/// combinations degree by degree for one whose annihilator is exactly
/// `prime`, and reports the least such degree up to `degree_cap`.
///
/// The annihilator of `Σ cᵢmᵢ` with distinct images and nonzero field
/// coefficients is `∩ (Bᵢ : mᵢ)` — scalars never cancel across distinct
/// monomials — so the coefficients themselves need not be searched.
pub fn field_witness_oracle(
    module: &SubquotientModule,
    prime: &MonomialPrime,
    degree_cap: i64,
    term_cap: usize,
) -> Result<Option<i64>> {
    if prime.is_zero_prime() {
        return Err(Error::invalid("the zero prime is never associated here"));
    }
    let ring = module.ring();
    let target = prime.as_ideal();
    let start = match module.indeg() {
        Val::Finite(d) => d,
        Val::Infinity => return Ok(None),
    };
    for degree in start..=degree_cap {
        let mut images: Vec<(usize, Monomial)> = Vec::new();
        for (index, comp) in module.components().iter().enumerate() {
            let Some(plain) = degree.checked_sub(comp.shift()) else {
                continue;
            };
            let Ok(plain) = u64::try_from(plain) else {
                continue;
            };
            for m in monomials_of_degree(ring, plain)? {
                if comp.upper().contains(&m) && !comp.lower().contains(&m) {
                    images.push((index, m));
                }
            }
        }
        if images.is_empty() {
            continue;
        }
        if images.len() > term_cap.min(MAX_ORACLE_IMAGES) {
            return Err(Error::cap(format!(
                "oracle hit {} monomial images at degree {degree} (cap {})",
                images.len(),
                term_cap.min(MAX_ORACLE_IMAGES)
            )));
        }
        let colons: Vec<MonomialIdeal> = images
            .iter()
            .map(|(index, m)| module.components()[*index].lower().colon_monomial(m))
            .collect();
        let mut by_mask: Vec<Option<MonomialIdeal>> = vec![None; 1 << images.len()];
        for mask in 1u64..(1 << images.len()) {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let ann = if rest == 0 {
                colons[low].clone()
            } else {
                by_mask[rest as usize]
                    .as_ref()
                    .unwrap()
                    .intersect(&colons[low])
            };
            if ann == target {
                return Ok(Some(degree));
            }
            by_mask[mask as usize] = Some(ann);
        }
    }
    Ok(None)
}

/// All monomials of exact weighted degree `target`, with a volume guard.
fn monomials_of_degree(ring: &Ring, target: u64) -> Result<Vec<Monomial>> {
    const MAX_ENUMERATED: usize = 200_000;
    let mut out = Vec::new();
    let mut exps = vec![0u64; ring.nvars()];
    fn walk(
        ring: &Ring,
        var: usize,
        remaining: u64,
        exps: &mut Vec<u64>,
        out: &mut Vec<Monomial>,
    ) -> Result<()> {
        let weight = ring.weights()[var];
        if var + 1 == ring.nvars() {
            if remaining.is_multiple_of(weight) {
                exps[var] = remaining / weight;
                out.push(Monomial::new(exps.clone()));
                exps[var] = 0;
                if out.len() > MAX_ENUMERATED {
                    return Err(Error::cap("degree enumeration is too large"));
                }
            }
            return Ok(());
        }
        for e in 0..=(remaining / weight) {
            exps[var] = e;
            walk(ring, var + 1, remaining - e * weight, exps, out)?;
        }
        exps[var] = 0;
        Ok(())
    }
    walk(ring, 0, target, &mut exps, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::parse_ideal;
    use crate::modules::{FamilyComponent, FamilySpec, Part, PowerPart, SubquotientComponent};
    use crate::prime::render_prime_set;
    use std::sync::Arc;

    fn xyz() -> Arc<Ring> {
        Arc::new(Ring::standard(&["X", "Y", "Z"]).unwrap())
    }

    fn module(upper: &str, lower: &str) -> SubquotientModule {
        let r = xyz();
        let upper = if upper == "1" {
            MonomialIdeal::unit(r.clone())
        } else {
            parse_ideal(upper, &r).unwrap()
        };
        let lower = parse_ideal(lower, &r).unwrap();
        SubquotientModule::new(
            r.clone(),
            vec![SubquotientComponent::new(0, upper, lower).unwrap()],
        )
        .unwrap()
    }

    fn prime(vars: &[&str]) -> MonomialPrime {
        MonomialPrime::from_vars(&xyz(), vars).unwrap()
    }

    #[test]
    fn cyclic_quotient_invariants() {
        let m = module("1", "(X^3, Y, X*Z)");
        let inv = module_invariants(&m).unwrap();
        assert_eq!(render_prime_set(&inv.primes()), "{(X,Y), (X,Y,Z)}");
        let xy = &inv.locals[&prime(&["X", "Y"])];
        assert_eq!((xy.value, xy.monomial.render(&xyz()).as_str()), (1, "Z"));
        let xyz_w = &inv.locals[&prime(&["X", "Y", "Z"])];
        assert_eq!(
            (xyz_w.value, xyz_w.monomial.render(&xyz()).as_str()),
            (2, "X^2")
        );
        assert_eq!(inv.global, Val::Finite(1));
    }

    #[test]
    fn torsion_submodule_drops_the_embedded_prime() {
        // (X,Y)/(X^3,Y,XZ) is supported only at the maximal ideal.
        let t = module("(X, Y)", "(X^3, Y, X*Z)");
        let inv = module_invariants(&t).unwrap();
        assert_eq!(render_prime_set(&inv.primes()), "{(X,Y,Z)}");
        assert_eq!(inv.global, Val::Finite(2));
        assert_eq!(
            inv.locals[&prime(&["X", "Y", "Z"])].monomial.render(&xyz()),
            "X^2"
        );
    }

    #[test]
    fn power_family_fixture() {
        let r = xyz();
        let i = parse_ideal("(X, Y^2, Z^3)", &r).unwrap();
        let j = parse_ideal("(X^3, X*Y^4)", &r).unwrap();
        let k = parse_ideal("(X^3, X*Y)", &r).unwrap();
        let spec = FamilySpec::new(
            r.clone(),
            i,
            vec![FamilyComponent::new(0, j, Some(k)).unwrap()],
        )
        .unwrap();
        for n in 3..=5u32 {
            let q = spec.power_layer(n, PowerPart::Quotient).unwrap();
            let inv = module_invariants(&q).unwrap();
            assert_eq!(
                render_prime_set(&inv.primes()),
                "{(X), (X,Y), (X,Y,Z)}",
                "n = {n}"
            );
            assert_eq!(inv.locals[&prime(&["X"])].value, 4, "n = {n}");
            assert_eq!(
                inv.locals[&prime(&["X", "Y"])].value,
                3 * n as i64 - 1,
                "n = {n}"
            );
            assert_eq!(
                inv.locals[&prime(&["X", "Y", "Z"])].value,
                3 * n as i64 - 2,
                "n = {n}"
            );
            assert_eq!(inv.global, Val::Finite(4), "n = {n}");
        }
        assert_eq!(
            module_invariants(&spec.power_layer(3, PowerPart::Quotient).unwrap())
                .unwrap()
                .locals[&prime(&["X"])]
                .monomial
                .render(&r),
            "Y^4"
        );
        // M/N itself
        let inv = module_invariants(&spec.present(Part::MOverN)).unwrap();
        assert_eq!(render_prime_set(&inv.primes()), "{(X), (X,Y)}");
        assert_eq!(inv.locals[&prime(&["X"])].value, 1);
        assert_eq!(inv.locals[&prime(&["X", "Y"])].value, 2);
    }

    #[test]
    fn targeted_local_matches_full_scan() {
        let m = module("1", "(X^3, Y, X*Z)");
        let w = local_vnumber(&m, &prime(&["X", "Y"])).unwrap();
        assert_eq!((w.value, w.component), (1, 0));
        let err = local_vnumber(&m, &prime(&["X"])).unwrap_err();
        assert!(err.to_string().contains("(X)"));
    }

    #[test]
    fn shifted_components_compete() {
        let r = xyz();
        let x = parse_ideal("(X)", &r).unwrap();
        let unit = MonomialIdeal::unit(r.clone());
        let two = SubquotientModule::new(
            r.clone(),
            vec![
                SubquotientComponent::new(0, unit.clone(), x.clone()).unwrap(),
                SubquotientComponent::new(-2, unit, x).unwrap(),
            ],
        )
        .unwrap();
        let inv = module_invariants(&two).unwrap();
        let w = &inv.locals[&prime(&["X"])];
        assert_eq!((w.value, w.component), (-2, 1));
        assert!(w.monomial.is_one());
        assert_eq!(inv.global, Val::Finite(-2));
    }

    #[test]
    fn ties_prefer_the_earlier_component() {
        let r = xyz();
        let x = parse_ideal("(X)", &r).unwrap();
        let unit = MonomialIdeal::unit(r.clone());
        let two = SubquotientModule::new(
            r.clone(),
            vec![
                SubquotientComponent::new(0, unit.clone(), x.clone()).unwrap(),
                SubquotientComponent::new(0, unit, x).unwrap(),
            ],
        )
        .unwrap();
        let w = &module_invariants(&two).unwrap().locals[&prime(&["X"])];
        assert_eq!(w.component, 0);
    }

    #[test]
    fn oracle_agrees_on_fixtures() {
        let t = module("(X, Y)", "(X^3, Y, X*Z)");
        assert_eq!(
            field_witness_oracle(&t, &prime(&["X", "Y", "Z"]), 6, 20).unwrap(),
            Some(2)
        );
        // not associated: no combination ever has this annihilator
        assert_eq!(
            field_witness_oracle(&t, &prime(&["X", "Y"]), 6, 20).unwrap(),
            None
        );

        let m = module("1", "(X^3, Y, X*Z)");
        assert_eq!(
            field_witness_oracle(&m, &prime(&["X", "Y"]), 6, 20).unwrap(),
            Some(1)
        );
        assert_eq!(
            field_witness_oracle(&m, &prime(&["X", "Y", "Z"]), 6, 20).unwrap(),
            Some(2)
        );
    }

    #[test]
    fn oracle_handles_power_quotients() {
        let r = xyz();
        let i = parse_ideal("(X, Y^2, Z^3)", &r).unwrap();
        let j = parse_ideal("(X^3, X*Y^4)", &r).unwrap();
        let k = parse_ideal("(X^3, X*Y)", &r).unwrap();
        let spec = FamilySpec::new(
            r.clone(),
            i,
            vec![FamilyComponent::new(0, j, Some(k)).unwrap()],
        )
        .unwrap();
        let q = spec.power_layer(3, PowerPart::Quotient).unwrap();
        assert_eq!(
            field_witness_oracle(&q, &prime(&["X"]), 5, 20).unwrap(),
            Some(4)
        );
        assert_eq!(
            field_witness_oracle(&q, &prime(&["X", "Y"]), 8, 20).unwrap(),
            Some(8)
        );
    }

    #[test]
    fn degree_enumeration_is_weighted() {
        let r = Arc::new(Ring::new(vec!["X".into(), "Y".into()], vec![2, 3]).unwrap());
        let degree_six: Vec<String> = monomials_of_degree(&r, 6)
            .unwrap()
            .iter()
            .map(|m| m.render(&r))
            .collect();
        assert_eq!(degree_six, vec!["Y^2", "X^3"]);
    }
}
