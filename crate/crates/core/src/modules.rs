//! Graded subquotient presentations and the module constructions the
//! analysis runs on: powers of an ideal acting on a submodule, filtration
//! layers, colon submodules, torsion, and initial degree.
//!
//! Every module is a finite direct sum of components `R(-s)·(A/B)` for
//! monomial ideals `B ⊆ A`. Each multidegree of such a component is spanned
//! by at most one monomial image, which is what makes monomial witness
//! searches complete for Ass and v-number computations.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::ring::Ring;

/// Largest degree shift accepted from input.
pub const MAX_SHIFT: i64 = 1_000_000_000;

/// An integer invariant value or `+∞` (the zero-module convention).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Finite(i64),
    Infinity,
}

impl Val {
    pub fn finite(self) -> Option<i64> {
        match self {
            Val::Finite(v) => Some(v),
            Val::Infinity => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Val::Finite(_))
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(v) => write!(f, "{v}"),
            Val::Infinity => write!(f, "inf"),
        }
    }
}

/// One summand `R(-shift)·(upper/lower)` with `lower ⊆ upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubquotientComponent {
    shift: i64,
    upper: MonomialIdeal,
    lower: MonomialIdeal,
}

impl SubquotientComponent {
    pub fn new(
        shift: i64,
        upper: MonomialIdeal,
        lower: MonomialIdeal,
    ) -> Result<SubquotientComponent> {
        if !upper.contains_ideal(&lower) {
            return Err(Error::invalid(
                "subquotient requires the lower ideal inside the upper",
            ));
        }
        Ok(SubquotientComponent {
            shift,
            upper,
            lower,
        })
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn upper(&self) -> &MonomialIdeal {
        &self.upper
    }

    pub fn lower(&self) -> &MonomialIdeal {
        &self.lower
    }

    pub fn is_zero(&self) -> bool {
        self.upper == self.lower
    }

    /// Least degree of a nonzero graded piece of this component. Complete
    /// over minimal generators: any `m ∈ A∖B` is divisible by a generator
    /// of `A` outside `B` of no larger degree.
    pub fn indeg(&self, ring: &Ring) -> Val {
        self.upper
            .gens()
            .iter()
            .filter(|g| !self.lower.contains(g))
            .map(|g| Val::Finite(shifted_degree(ring, g, self.shift)))
            .min()
            .unwrap_or(Val::Infinity)
    }
}

/// A finite direct sum of shifted subquotient components over one ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubquotientModule {
    ring: Arc<Ring>,
    components: Vec<SubquotientComponent>,
}

impl SubquotientModule {
    pub fn new(
        ring: Arc<Ring>,
        components: Vec<SubquotientComponent>,
    ) -> Result<SubquotientModule> {
        if components.is_empty() {
            return Err(Error::invalid("a module needs at least one component"));
        }
        for c in &components {
            if c.upper.ring() != &ring || c.lower.ring() != &ring {
                return Err(Error::invalid("module components must share the ring"));
            }
        }
        Ok(SubquotientModule { ring, components })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn components(&self) -> &[SubquotientComponent] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// `indeg`: least degree with a nonzero graded piece; `∞` for zero.
    pub fn indeg(&self) -> Val {
        self.components
            .iter()
            .map(|c| c.indeg(&self.ring))
            .min()
            .unwrap_or(Val::Infinity)
    }

    /// Total generator count across all component ideals, the quantity the
    /// evaluation resource cap watches.
    pub fn generator_count(&self) -> usize {
        self.components
            .iter()
            .map(|c| c.upper.gens().len() + c.lower.gens().len())
            .sum()
    }
}

/// Degree of `g` in a component shifted by `s` (element degree `deg(g)+s`).
pub(crate) fn shifted_degree(ring: &Ring, g: &crate::monomial::Monomial, shift: i64) -> i64 {
    let deg = i64::try_from(ring.degree(g)).expect("degree exceeds i64");
    deg + shift
}

/// One component of a family: `R(-shift)/relations` with the distinguished
/// submodule generated by `generators` (normalized to contain relations).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyComponent {
    shift: i64,
    relations: MonomialIdeal,
    generators: MonomialIdeal,
}

impl FamilyComponent {
    /// Normalizes the submodule generators to `K + J`; `None` means the
    /// whole component (`N = M` there).
    pub fn new(
        shift: i64,
        relations: MonomialIdeal,
        generators: Option<MonomialIdeal>,
    ) -> Result<FamilyComponent> {
        if shift.abs() > MAX_SHIFT {
            return Err(Error::invalid(format!(
                "shift {shift} exceeds the ±{MAX_SHIFT} cap"
            )));
        }
        let generators = match generators {
            Some(k) => k.sum(&relations),
            None => MonomialIdeal::unit(relations.ring().clone()),
        };
        Ok(FamilyComponent {
            shift,
            relations,
            generators,
        })
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn relations(&self) -> &MonomialIdeal {
        &self.relations
    }

    /// The normalized submodule generators (always contain the relations).
    pub fn generators(&self) -> &MonomialIdeal {
        &self.generators
    }
}

/// Which basic presentation to build from a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    M,
    N,
    MOverN,
}

/// Which member of the power filtration to build at index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerPart {
    /// `M/IⁿN`
    Quotient,
    /// `IⁿN`
    Power,
    /// `Iⁿ⁻¹N/IⁿN`
    Layer,
}

/// A family `n ↦ M/IⁿN`: the acting ideal `I`, the module `M` as shifted
/// cyclic components `R(-sⱼ)/Jⱼ`, and the submodule `N` generated by `Kⱼ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    ring: Arc<Ring>,
    ideal: MonomialIdeal,
    components: Vec<FamilyComponent>,
}

impl FamilySpec {
    pub fn new(
        ring: Arc<Ring>,
        ideal: MonomialIdeal,
        components: Vec<FamilyComponent>,
    ) -> Result<FamilySpec> {
        if ideal.is_unit() {
            return Err(Error::invalid("the acting ideal I must be proper"));
        }
        if ideal.ring() != &ring {
            return Err(Error::invalid("ideal I must live in the declared ring"));
        }
        if components.is_empty() {
            return Err(Error::invalid("module M needs at least one component"));
        }
        for c in &components {
            if c.relations.ring() != &ring || c.generators.ring() != &ring {
                return Err(Error::invalid("module components must share the ring"));
            }
        }
        Ok(FamilySpec {
            ring,
            ideal,
            components,
        })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    pub fn components(&self) -> &[FamilyComponent] {
        &self.components
    }

    /// Presents `M`, `N` or `M/N` as a subquotient module.
    pub fn present(&self, part: Part) -> SubquotientModule {
        let comps = self
            .components
            .iter()
            .map(|c| {
                let unit = MonomialIdeal::unit(self.ring.clone());
                let (upper, lower) = match part {
                    Part::M => (unit, c.relations.clone()),
                    Part::N => (c.generators.clone(), c.relations.clone()),
                    Part::MOverN => (unit, c.generators.clone()),
                };
                SubquotientComponent::new(c.shift, upper, lower)
                    .expect("normalized family components nest")
            })
            .collect();
        SubquotientModule::new(self.ring.clone(), comps).expect("component list is nonempty")
    }

    /// Presents `M/IⁿN`, `IⁿN` or the layer `Iⁿ⁻¹N/IⁿN`.
    pub fn power_layer(&self, n: u32, part: PowerPart) -> Result<SubquotientModule> {
        if part == PowerPart::Layer && n == 0 {
            return Err(Error::invalid("the layer module starts at n = 1"));
        }
        let pow = self.ideal.power(n);
        let comps = self
            .components
            .iter()
            .map(|c| {
                let at = |p: &MonomialIdeal| p.product(&c.generators).sum(&c.relations);
                let (upper, lower) = match part {
                    PowerPart::Quotient => (MonomialIdeal::unit(self.ring.clone()), at(&pow)),
                    PowerPart::Power => (at(&pow), c.relations.clone()),
                    PowerPart::Layer => (at(&self.ideal.power(n - 1)), at(&pow)),
                };
                SubquotientComponent::new(c.shift, upper, lower)
            })
            .collect::<Result<Vec<_>>>()?;
        SubquotientModule::new(self.ring.clone(), comps)
    }

    /// `(0 :_M Iᵖ)` as a subquotient, componentwise `(Jⱼ : Iᵖ)/Jⱼ`.
    pub fn colon_submodule(&self, power: u32) -> Result<SubquotientModule> {
        if power == 0 {
            return Err(Error::invalid("colon power must be at least 1"));
        }
        let pow = self.ideal.power(power);
        let comps = self
            .components
            .iter()
            .map(|c| {
                SubquotientComponent::new(
                    c.shift,
                    c.relations.colon_ideal(&pow),
                    c.relations.clone(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        SubquotientModule::new(self.ring.clone(), comps)
    }

    /// The torsion submodule `Γ_I(M)` via componentwise saturation, with the
    /// first saturation step at which every component has stabilized.
    pub fn gamma(&self) -> (SubquotientModule, u32) {
        let mut onset = 1;
        let comps = self
            .components
            .iter()
            .map(|c| {
                let (sat, steps) = c.relations.saturate(&self.ideal);
                onset = onset.max(steps);
                SubquotientComponent::new(c.shift, sat, c.relations.clone())
                    .expect("saturation contains the relations")
            })
            .collect();
        let module =
            SubquotientModule::new(self.ring.clone(), comps).expect("component list is nonempty");
        (module, onset)
    }

    /// The family for `M/Γ_I(M)`: relations saturated, submodule generators
    /// re-normalized. The result has no `I`-torsion.
    pub fn quotient_by_gamma(&self) -> FamilySpec {
        let components = self
            .components
            .iter()
            .map(|c| {
                let (sat, _) = c.relations.saturate(&self.ideal);
                FamilyComponent::new(c.shift, sat, Some(c.generators.clone()))
                    .expect("shift already validated")
            })
            .collect();
        FamilySpec::new(self.ring.clone(), self.ideal.clone(), components)
            .expect("spec stays valid under saturation")
    }

    /// Least `k ≤ bound` with `IᵏM ⊆ N` (componentwise `Iᵏ ⊆ Kⱼ`), if any.
    pub fn power_containment_index(&self, bound: u32) -> Option<u32> {
        let mut pow = MonomialIdeal::unit(self.ring.clone());
        for k in 1..=bound {
            pow = pow.product(&self.ideal);
            if self
                .components
                .iter()
                .all(|c| c.generators.contains_ideal(&pow))
            {
                return Some(k);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::parse_ideal;

    fn xyz() -> Arc<Ring> {
        Arc::new(Ring::standard(&["X", "Y", "Z"]).unwrap())
    }

    /// One-component family over K[X,Y,Z]; `n_text = None` means N = M.
    fn family(i_text: &str, j_text: &str, n_text: Option<&str>) -> FamilySpec {
        let r = xyz();
        let i = parse_ideal(i_text, &r).unwrap();
        let j = parse_ideal(j_text, &r).unwrap();
        let k = n_text.map(|t| parse_ideal(t, &r).unwrap());
        FamilySpec::new(r.clone(), i, vec![FamilyComponent::new(0, j, k).unwrap()]).unwrap()
    }

    fn torsion_example() -> FamilySpec {
        family("(X*Y, Z)", "(X^3, Y, X*Z)", None)
    }

    fn torsion_free_example() -> FamilySpec {
        family("(X, Y^2, Z^3)", "(X^3, X*Y^4)", Some("(X^3, X*Y)"))
    }

    #[test]
    fn presentations() {
        let r = xyz();
        let spec = torsion_example();
        let m = spec.present(Part::M);
        assert!(m.components()[0].upper().is_unit());
        assert_eq!(
            m.components()[0].lower(),
            &parse_ideal("(X^3, Y, X*Z)", &r).unwrap()
        );
        // defaulted N equals M
        let n = spec.present(Part::N);
        assert!(n.components()[0].upper().is_unit());
        assert!(spec.present(Part::MOverN).is_zero());

        let sub = torsion_free_example();
        let n = sub.present(Part::N);
        assert_eq!(
            n.components()[0].upper(),
            &parse_ideal("(X^3, X*Y)", &r).unwrap()
        );
        assert_eq!(
            n.components()[0].lower(),
            &parse_ideal("(X^3, X*Y^4)", &r).unwrap()
        );
    }

    #[test]
    fn power_layers_collapse() {
        let r = xyz();
        let spec = torsion_example();
        for n in 2..=6u32 {
            let q = spec.power_layer(n, PowerPart::Quotient).unwrap();
            let expect = parse_ideal(&format!("(X^3, Y, X*Z, Z^{n})"), &r).unwrap();
            assert_eq!(q.components()[0].lower(), &expect, "n = {n}");
        }
        // n = 0 degenerates to M/N
        assert_eq!(
            spec.power_layer(0, PowerPart::Quotient).unwrap(),
            spec.present(Part::MOverN)
        );
        assert!(spec.power_layer(0, PowerPart::Layer).is_err());
    }

    #[test]
    fn layer_indeg_is_linear_here() {
        let spec = torsion_example();
        for n in 2..=8u32 {
            let layer = spec.power_layer(n, PowerPart::Layer).unwrap();
            assert_eq!(layer.indeg(), Val::Finite(n as i64 - 1), "n = {n}");
        }
    }

    #[test]
    fn colon_and_gamma() {
        let r = xyz();
        let spec = torsion_example();
        let colon = spec.colon_submodule(1).unwrap();
        assert_eq!(
            colon.components()[0].upper(),
            &parse_ideal("(X, Y)", &r).unwrap()
        );
        assert!(!colon.is_zero());
        let (gamma, onset) = spec.gamma();
        assert_eq!(gamma, colon);
        assert_eq!(onset, 2);

        let free = torsion_free_example();
        assert!(free.colon_submodule(1).unwrap().is_zero());
        let (g2, onset2) = free.gamma();
        assert!(g2.is_zero());
        assert_eq!(onset2, 1);
    }

    #[test]
    fn gamma_quotient_kills_torsion() {
        let r = xyz();
        let spec = torsion_example();
        let reduced = spec.quotient_by_gamma();
        assert_eq!(
            reduced.components()[0].relations(),
            &parse_ideal("(X, Y)", &r).unwrap()
        );
        assert!(reduced.colon_submodule(1).unwrap().is_zero());
        // a torsion-free family is untouched
        let free = torsion_free_example();
        assert_eq!(free.quotient_by_gamma(), free);
    }

    #[test]
    fn containment_index() {
        assert_eq!(torsion_example().power_containment_index(12), Some(1));
        assert_eq!(torsion_free_example().power_containment_index(12), None);
    }

    #[test]
    fn zero_module_conventions() {
        let r = xyz();
        let a = parse_ideal("(X, Y)", &r).unwrap();
        let zero = SubquotientModule::new(
            r.clone(),
            vec![SubquotientComponent::new(0, a.clone(), a).unwrap()],
        )
        .unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.indeg(), Val::Infinity);
    }

    #[test]
    fn shifts_move_degrees() {
        let r = xyz();
        let i = parse_ideal("(X)", &r).unwrap();
        let j = parse_ideal("(Y)", &r).unwrap();
        let spec = FamilySpec::new(
            r.clone(),
            i,
            vec![FamilyComponent::new(-3, j, None).unwrap()],
        )
        .unwrap();
        // M = R(3)/(Y): the unit generator sits in degree -3
        assert_eq!(spec.present(Part::M).indeg(), Val::Finite(-3));
        assert!(
            FamilyComponent::new(MAX_SHIFT + 1, parse_ideal("(Y)", &r).unwrap(), None).is_err()
        );
    }

    #[test]
    fn rejects_unit_ideal() {
        let r = xyz();
        let unit = MonomialIdeal::unit(r.clone());
        let j = parse_ideal("(Y)", &r).unwrap();
        assert!(FamilySpec::new(
            r.clone(),
            unit,
            vec![FamilyComponent::new(0, j, None).unwrap()]
        )
        .is_err());
    }
}
