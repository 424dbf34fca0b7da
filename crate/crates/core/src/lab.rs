//! Evaluation of the invariant families over `n`, stabilization detection,
//! exact integer fits, verification of the stabilization/linearity claims,
//! and randomized exploration for eventual-linearity counterexamples.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::input::render_input;
use crate::modules::{FamilyComponent, FamilySpec, Part, PowerPart, SubquotientModule, Val};
use crate::monomial::Monomial;
use crate::prime::{render_prime_set, MonomialPrime};
use crate::ring::Ring;
use crate::vnumber::{module_invariants, VNumberResult};

/// Horizon, stability window and resource cap for a family evaluation.
#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub n_max: u32,
    pub window: u32,
    /// Abort when any constructed module exceeds this many generators.
    pub generator_cap: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            n_max: 15,
            window: 5,
            generator_cap: 20_000,
        }
    }
}

/// Invariants of one module: Ass with local v-numbers, global v, indeg.
#[derive(Debug, Clone)]
pub struct ModuleEntry {
    pub vnum: VNumberResult,
    pub indeg: Val,
}

/// Everything computed at one index `n` of the family.
#[derive(Debug, Clone)]
pub struct InvariantRecord {
    pub n: u32,
    /// `M/IⁿN`
    pub quotient: ModuleEntry,
    /// `Iⁿ⁻¹N/IⁿN`; absent at `n = 0`.
    pub layer: Option<ModuleEntry>,
    /// `(0 :_M I)` — constant in `n`, repeated for rendering convenience.
    pub colon: ModuleEntry,
    /// `Γ_I(M)` — constant in `n`.
    pub gamma: ModuleEntry,
    /// `M/N` — constant in `n`.
    pub base: ModuleEntry,
    /// `indeg(IⁿN)`.
    pub indeg_power: Val,
}

/// Where and why an evaluation stopped early.
#[derive(Debug, Clone)]
pub struct Abort {
    pub n: u32,
    pub generators: usize,
}

#[derive(Debug, Clone)]
pub struct FamilyEvaluation {
    pub spec: FamilySpec,
    pub options: EvalOptions,
    pub records: Vec<InvariantRecord>,
    pub aborted: Option<Abort>,
    pub gamma_onset: u32,
}

fn entry(module: &SubquotientModule) -> Result<ModuleEntry> {
    Ok(ModuleEntry {
        vnum: module_invariants(module)?,
        indeg: module.indeg(),
    })
}

/// Computes records for `n = 0…n_max`; stops early (with partial results)
/// if the generator cap is exceeded.
pub fn evaluate_family(spec: &FamilySpec, options: &EvalOptions) -> Result<FamilyEvaluation> {
    if options.n_max == 0 {
        return Err(Error::invalid("n-max must be at least 1"));
    }
    let colon = entry(&spec.colon_submodule(1)?)?;
    let (gamma_module, gamma_onset) = spec.gamma();
    let gamma = entry(&gamma_module)?;
    let base = entry(&spec.present(Part::MOverN))?;

    // Stage the modules sequentially so the resource cap cuts cleanly, then
    // compute the per-n invariants in parallel.
    let mut staged: Vec<(u32, SubquotientModule, Option<SubquotientModule>, Val)> = Vec::new();
    let mut aborted = None;
    for n in 0..=options.n_max {
        let quotient = spec.power_layer(n, PowerPart::Quotient)?;
        let power = spec.power_layer(n, PowerPart::Power)?;
        let layer = if n >= 1 {
            Some(spec.power_layer(n, PowerPart::Layer)?)
        } else {
            None
        };
        let generators = quotient
            .generator_count()
            .max(power.generator_count())
            .max(layer.as_ref().map_or(0, SubquotientModule::generator_count));
        if generators > options.generator_cap {
            aborted = Some(Abort { n, generators });
            break;
        }
        staged.push((n, quotient, layer, power.indeg()));
    }
    let records = staged
        .into_par_iter()
        .map(|(n, quotient, layer, indeg_power)| {
            Ok(InvariantRecord {
                n,
                quotient: entry(&quotient)?,
                layer: layer.as_ref().map(entry).transpose()?,
                colon: colon.clone(),
                gamma: gamma.clone(),
                base: base.clone(),
                indeg_power,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FamilyEvaluation {
        spec: spec.clone(),
        options: options.clone(),
        records,
        aborted,
        gamma_onset,
    })
}

/// Computes the single record at index `n` (layer absent at `n = 0`).
pub fn record_at(spec: &FamilySpec, n: u32) -> Result<InvariantRecord> {
    let quotient = spec.power_layer(n, PowerPart::Quotient)?;
    let layer = if n >= 1 {
        Some(spec.power_layer(n, PowerPart::Layer)?)
    } else {
        None
    };
    Ok(InvariantRecord {
        n,
        quotient: entry(&quotient)?,
        layer: layer.as_ref().map(entry).transpose()?,
        colon: entry(&spec.colon_submodule(1)?)?,
        gamma: entry(&spec.gamma().0)?,
        base: entry(&spec.present(Part::MOverN))?,
        indeg_power: spec.power_layer(n, PowerPart::Power)?.indeg(),
    })
}

/// Index where the maximal constant suffix starts, if it is at least
/// `window` long (floored at 2).
pub fn detect_stabilization<T: PartialEq>(values: &[T], window: u32) -> Option<usize> {
    let window = window.max(2) as usize;
    if values.is_empty() {
        return None;
    }
    let mut onset = values.len() - 1;
    while onset > 0 && values[onset - 1] == values[values.len() - 1] {
        onset -= 1;
    }
    (values.len() - onset >= window).then_some(onset)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FitKind {
    Constant(Val),
    Linear {
        slope: i64,
        intercept: i64,
    },
    /// Tail too short or irregular; honest "the horizon did not decide".
    Undetermined,
}

/// An exact fit of the maximal constant-difference tail of a series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFit {
    pub kind: FitKind,
    /// First `n` the fit covers (0 when undetermined).
    pub onset: i64,
    pub window: u32,
}

/// Fits the tail of `(n, value)` pairs: the maximal suffix (over
/// consecutive `n`) with constant first differences, of length ≥ `window`
/// (floored at 3). Difference 0 is a constant fit, a positive difference a
/// linear one; anything else is undetermined.
pub fn fit_tail(series: &[(i64, Val)], window: u32) -> LinearFit {
    let window = window.max(3);
    let miss = LinearFit {
        kind: FitKind::Undetermined,
        onset: 0,
        window,
    };
    let Some(&(_, last)) = series.last() else {
        return miss;
    };
    let end = series.len() - 1;
    let mut onset = end;
    if last == Val::Infinity {
        while onset > 0
            && series[onset - 1].1 == Val::Infinity
            && series[onset - 1].0 + 1 == series[onset].0
        {
            onset -= 1;
        }
        if end - onset + 1 >= window as usize {
            return LinearFit {
                kind: FitKind::Constant(Val::Infinity),
                onset: series[onset].0,
                window,
            };
        }
        return miss;
    }
    let mut slope: Option<i64> = None;
    while onset > 0 {
        let (pn, pv) = series[onset - 1];
        let Some(pv) = pv.finite() else { break };
        if pn + 1 != series[onset].0 {
            break;
        }
        let d = series[onset].1.finite().expect("finite tail") - pv;
        match slope {
            None => slope = Some(d),
            Some(s) if s == d => {}
            Some(_) => break,
        }
        onset -= 1;
    }
    if end - onset + 1 < window as usize {
        return miss;
    }
    let n0 = series[onset].0;
    let v0 = series[onset].1.finite().expect("finite tail");
    match slope.unwrap_or(0) {
        0 => LinearFit {
            kind: FitKind::Constant(series[end].1),
            onset: n0,
            window,
        },
        s if s >= 1 => LinearFit {
            kind: FitKind::Linear {
                slope: s,
                intercept: v0 - s * n0,
            },
            onset: n0,
            window,
        },
        _ => miss,
    }
}

/// One fitted series: which module family, which prime (`None` = global v).
#[derive(Debug, Clone)]
pub struct FitEntry {
    pub module: &'static str,
    pub prime: Option<MonomialPrime>,
    pub fit: LinearFit,
}

/// Detected stable Ass set of one module family.
#[derive(Debug, Clone)]
pub struct StableEntry {
    pub module: &'static str,
    /// First `n` of the stable stretch; `None` when the horizon is too short.
    pub onset: Option<i64>,
    pub set: Vec<MonomialPrime>,
}

type Pick = fn(&InvariantRecord) -> Option<&ModuleEntry>;

const QUOTIENT_TOKEN: &str = "M/I^nN";
const LAYER_TOKEN: &str = "layer";

fn series_sources() -> [(&'static str, Pick); 2] {
    [
        (QUOTIENT_TOKEN, |r: &InvariantRecord| Some(&r.quotient)),
        (LAYER_TOKEN, |r: &InvariantRecord| r.layer.as_ref()),
    ]
}

fn prime_set(entry: &ModuleEntry) -> BTreeSet<MonomialPrime> {
    entry.vnum.locals.keys().cloned().collect()
}

fn render_set(set: &BTreeSet<MonomialPrime>) -> String {
    render_prime_set(&set.iter().cloned().collect::<Vec<_>>())
}

/// The `(n, global v)` series of one module family.
fn global_series(records: &[InvariantRecord], pick: Pick) -> Vec<(i64, Val)> {
    records
        .iter()
        .filter_map(|r| pick(r).map(|e| (r.n as i64, e.vnum.global)))
        .collect()
}

/// The trailing `(n, v_p)` run over which `prime` stays associated.
fn local_series(records: &[InvariantRecord], pick: Pick, prime: &MonomialPrime) -> Vec<(i64, Val)> {
    let mut rev = Vec::new();
    for r in records.iter().rev() {
        let Some(e) = pick(r) else { break };
        let Some(w) = e.vnum.locals.get(prime) else {
            break;
        };
        rev.push((r.n as i64, Val::Finite(w.value)));
    }
    rev.reverse();
    rev
}

fn prime_union(records: &[InvariantRecord], pick: Pick) -> BTreeSet<MonomialPrime> {
    let mut union = BTreeSet::new();
    for r in records {
        if let Some(e) = pick(r) {
            union.extend(e.vnum.locals.keys().cloned());
        }
    }
    union
}

/// Global and per-prime fits for the quotient and layer families.
pub fn analysis_fits(eval: &FamilyEvaluation) -> Vec<FitEntry> {
    let mut out = Vec::new();
    for (module, pick) in series_sources() {
        let series = global_series(&eval.records, pick);
        out.push(FitEntry {
            module,
            prime: None,
            fit: fit_tail(&series, eval.options.window),
        });
        for prime in prime_union(&eval.records, pick) {
            let series = local_series(&eval.records, pick, &prime);
            let fit = fit_tail(&series, eval.options.window);
            out.push(FitEntry {
                module,
                prime: Some(prime),
                fit,
            });
        }
    }
    out
}

/// Detected stable Ass sets for the quotient and layer families.
pub fn stabilization_entries(eval: &FamilyEvaluation) -> Vec<StableEntry> {
    series_sources()
        .into_iter()
        .map(|(module, pick)| {
            let sets: Vec<(i64, BTreeSet<MonomialPrime>)> = eval
                .records
                .iter()
                .filter_map(|r| pick(r).map(|e| (r.n as i64, prime_set(e))))
                .collect();
            let bare: Vec<&BTreeSet<MonomialPrime>> = sets.iter().map(|(_, s)| s).collect();
            match detect_stabilization(&bare, eval.options.window) {
                Some(i) => StableEntry {
                    module,
                    onset: Some(sets[i].0),
                    set: sets[i].1.iter().cloned().collect(),
                },
                None => StableEntry {
                    module,
                    onset: None,
                    set: Vec::new(),
                },
            }
        })
        .collect()
}

/// A family evaluation together with its stabilization and fit summaries.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub evaluation: FamilyEvaluation,
    pub stabilization: Vec<StableEntry>,
    pub fits: Vec<FitEntry>,
}

pub fn analyze(spec: &FamilySpec, options: &EvalOptions) -> Result<Analysis> {
    let evaluation = evaluate_family(spec, options)?;
    let stabilization = stabilization_entries(&evaluation);
    let fits = analysis_fits(&evaluation);
    Ok(Analysis {
        evaluation,
        stabilization,
        fits,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    Pass,
    Fail,
    NotApplicable,
    Undetermined,
}

impl VerdictStatus {
    pub fn label(self) -> &'static str {
        match self {
            VerdictStatus::Pass => "pass",
            VerdictStatus::Fail => "FAIL",
            VerdictStatus::NotApplicable => "n/a",
            VerdictStatus::Undetermined => "undetermined",
        }
    }
}

/// Outcome of one verification check.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: &'static str,
    pub status: VerdictStatus,
    pub details: String,
}

impl Verdict {
    fn new(id: &'static str, status: VerdictStatus, details: impl Into<String>) -> Verdict {
        Verdict {
            id,
            status,
            details: details.into(),
        }
    }
}

/// Analysis plus the verification verdicts.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub analysis: Analysis,
    pub verdicts: Vec<Verdict>,
}

pub const VERDICT_IDS: [&str; 11] = [
    "ass-torsion-union",
    "ass-off-vi-constant",
    "layer-ass-via-saturation",
    "v-bound-by-colon",
    "v-linear-branch",
    "v-constant-branch",
    "global-v-constant-branch",
    "global-v-linear-branch",
    "v-strict-gap",
    "v-monotone-off-vi",
    "v-slope-bound-off-vi",
];

struct Ctx<'a> {
    spec: &'a FamilySpec,
    eval: &'a FamilyEvaluation,
    reduced: &'a FamilyEvaluation,
    window: u32,
    /// `Ass(M)` of the whole module, for the torsion-value identities.
    module_inv: &'a VNumberResult,
}

impl Ctx<'_> {
    fn in_vi(&self, p: &MonomialPrime) -> bool {
        p.contains_ideal(self.spec.ideal())
    }

    fn vi_part(&self, set: &BTreeSet<MonomialPrime>, inside: bool) -> BTreeSet<MonomialPrime> {
        set.iter()
            .filter(|p| self.in_vi(p) == inside)
            .cloned()
            .collect()
    }

    fn colon(&self) -> &ModuleEntry {
        &self.eval.records[0].colon
    }

    fn base(&self) -> &ModuleEntry {
        &self.eval.records[0].base
    }

    /// `(n, Ass(M/IⁿN) ∩ V(I))` for `n ≥ 1`.
    fn quotient_vi_series(&self) -> Vec<(i64, BTreeSet<MonomialPrime>)> {
        self.eval
            .records
            .iter()
            .filter(|r| r.n >= 1)
            .map(|r| (r.n as i64, self.vi_part(&prime_set(&r.quotient), true)))
            .collect()
    }

    fn layer_sets(&self) -> Vec<(i64, BTreeSet<MonomialPrime>)> {
        self.eval
            .records
            .iter()
            .filter_map(|r| r.layer.as_ref().map(|e| (r.n as i64, prime_set(e))))
            .collect()
    }
}

fn stable_onset(sets: &[(i64, BTreeSet<MonomialPrime>)], window: u32) -> Option<usize> {
    let bare: Vec<&BTreeSet<MonomialPrime>> = sets.iter().map(|(_, s)| s).collect();
    detect_stabilization(&bare, window)
}

/// Runs every verification check on the family.
pub fn verify(spec: &FamilySpec, options: &EvalOptions) -> Result<VerifyReport> {
    let analysis = analyze(spec, options)?;
    let reduced = evaluate_family(&spec.quotient_by_gamma(), options)?;
    let module_inv = module_invariants(&spec.present(Part::M))?;
    let verdicts = if analysis.evaluation.records.is_empty() {
        VERDICT_IDS
            .iter()
            .map(|id| {
                Verdict::new(
                    id,
                    VerdictStatus::Undetermined,
                    "evaluation aborted before n = 0",
                )
            })
            .collect()
    } else {
        let ctx = Ctx {
            spec,
            eval: &analysis.evaluation,
            reduced: &reduced,
            window: options.window,
            module_inv: &module_inv,
        };
        vec![
            torsion_union(&ctx),
            off_vi_constant(&ctx),
            layer_via_saturation(&ctx),
            bound_by_colon(&ctx),
            linear_branch(&ctx),
            constant_branch(&ctx),
            global_constant_branch(&ctx),
            global_linear_branch(&ctx),
            strict_gap(&ctx),
            monotone_off_vi(&ctx),
            slope_bound_off_vi(&ctx),
        ]
    };
    Ok(VerifyReport { analysis, verdicts })
}

/// Ass(M/IⁿN) ∩ V(I) = Ass(0:I) ∪ Ass(layer_n) on the stable tail.
fn torsion_union(ctx: &Ctx) -> Verdict {
    let id = "ass-torsion-union";
    let torsion = prime_set(ctx.colon());
    let pairs: Vec<(i64, BTreeSet<MonomialPrime>, BTreeSet<MonomialPrime>)> = ctx
        .eval
        .records
        .iter()
        .filter(|r| r.n >= 1)
        .map(|r| {
            let lhs = ctx.vi_part(&prime_set(&r.quotient), true);
            let rhs: BTreeSet<MonomialPrime> = r
                .layer
                .as_ref()
                .map(prime_set)
                .unwrap_or_default()
                .union(&torsion)
                .cloned()
                .collect();
            (r.n as i64, lhs, rhs)
        })
        .collect();
    let keyed: Vec<(&BTreeSet<MonomialPrime>, &BTreeSet<MonomialPrime>)> =
        pairs.iter().map(|(_, l, r)| (l, r)).collect();
    let Some(i) = detect_stabilization(&keyed, ctx.window) else {
        return Verdict::new(id, VerdictStatus::Undetermined, horizon_note(ctx));
    };
    for (n, lhs, rhs) in &pairs[i..] {
        if lhs != rhs {
            return Verdict::new(
                id,
                VerdictStatus::Fail,
                format!(
                    "n = {n}: Ass(M/I^nN) ∩ V(I) = {} but Ass(0:I) ∪ Ass(layer) = {}",
                    render_set(lhs),
                    render_set(rhs)
                ),
            );
        }
    }
    Verdict::new(
        id,
        VerdictStatus::Pass,
        format!(
            "both sides equal {} for n ≥ {}",
            render_set(&pairs[i].1),
            pairs[i].0
        ),
    )
}

/// Ass(M/IⁿN) ∖ V(I) = Ass(M/N) ∖ V(I) at every computed n.
fn off_vi_constant(ctx: &Ctx) -> Verdict {
    let id = "ass-off-vi-constant";
    let expected = ctx.vi_part(&prime_set(ctx.base()), false);
    for r in &ctx.eval.records {
        let got = ctx.vi_part(&prime_set(&r.quotient), false);
        if got != expected {
            return Verdict::new(
                id,
                VerdictStatus::Fail,
                format!(
                    "n = {}: Ass(M/I^nN) ∖ V(I) = {} but Ass(M/N) ∖ V(I) = {}",
                    r.n,
                    render_set(&got),
                    render_set(&expected)
                ),
            );
        }
    }
    Verdict::new(
        id,
        VerdictStatus::Pass,
        format!(
            "Ass ∖ V(I) stays {} for every n ≤ {}",
            render_set(&expected),
            ctx.eval.records.last().map(|r| r.n).unwrap_or(0)
        ),
    )
}

/// Stable Ass(layer) equals stable Ass(M̄/IⁿN̄) ∩ V(I), M̄ = M/Γ_I(M).
fn layer_via_saturation(ctx: &Ctx) -> Verdict {
    let id = "layer-ass-via-saturation";
    let layers = ctx.layer_sets();
    let reduced: Vec<(i64, BTreeSet<MonomialPrime>)> = ctx
        .reduced
        .records
        .iter()
        .filter(|r| r.n >= 1)
        .map(|r| (r.n as i64, ctx.vi_part(&prime_set(&r.quotient), true)))
        .collect();
    let (Some(i), Some(j)) = (
        stable_onset(&layers, ctx.window),
        stable_onset(&reduced, ctx.window),
    ) else {
        return Verdict::new(id, VerdictStatus::Undetermined, horizon_note(ctx));
    };
    if layers[i].1 == reduced[j].1 {
        Verdict::new(
            id,
            VerdictStatus::Pass,
            format!(
                "stable Ass(layer) = {} matches the torsion-free family (n ≥ {})",
                render_set(&layers[i].1),
                layers[i].0.max(reduced[j].0)
            ),
        )
    } else {
        Verdict::new(
            id,
            VerdictStatus::Fail,
            format!(
                "stable Ass(layer) = {} but stable Ass(M̄/IⁿN̄) ∩ V(I) = {}",
                render_set(&layers[i].1),
                render_set(&reduced[j].1)
            ),
        )
    }
}

/// For p ∈ Ass(0:I): v_p(0:I) = v_p(M) exactly, and the fitted tail of
/// v_p(M/IⁿN) stays ≤ v_p(0:I). The inequality is an eventual claim, so
/// pre-asymptotic excesses before the fit onset are fine.
fn bound_by_colon(ctx: &Ctx) -> Verdict {
    let id = "v-bound-by-colon";
    let torsion = prime_set(ctx.colon());
    if torsion.is_empty() {
        return Verdict::new(id, VerdictStatus::NotApplicable, "(0:I) = 0");
    }
    let mut undetermined = None;
    let mut onset = 0i64;
    for p in &torsion {
        let bound = ctx.colon().vnum.locals[p].value;
        // witnesses of a torsion prime are I-torsion themselves, so the
        // module-level value must agree on the nose
        match ctx.module_inv.locals.get(p) {
            Some(w) if w.value == bound => {}
            other => {
                return Verdict::new(
                    id,
                    VerdictStatus::Fail,
                    format!(
                        "v_{}(M) = {} differs from v_{}(0:I) = {bound}",
                        p.render(),
                        other
                            .map(|w| w.value.to_string())
                            .unwrap_or_else(|| "undefined".into()),
                        p.render()
                    ),
                );
            }
        }
        let fit = fit_tail(
            &local_series(&ctx.eval.records, |r| Some(&r.quotient), p),
            ctx.window,
        );
        match fit.kind {
            FitKind::Constant(Val::Finite(c)) if c <= bound => onset = onset.max(fit.onset),
            FitKind::Undetermined => undetermined = Some(p.render()),
            other => {
                return Verdict::new(
                    id,
                    VerdictStatus::Fail,
                    format!(
                        "v_{}(M/I^nN) tail fits {} above v_{}(0:I) = {bound}",
                        p.render(),
                        describe_kind(&other),
                        p.render()
                    ),
                );
            }
        }
    }
    match undetermined {
        Some(p) => Verdict::new(
            id,
            VerdictStatus::Undetermined,
            format!("v_{p} tail undecided; {}", horizon_note(ctx)),
        ),
        None => Verdict::new(
            id,
            VerdictStatus::Pass,
            format!(
                "bounded by v(0:I) for {} on n ≥ {onset}",
                render_set(&torsion)
            ),
        ),
    }
}

/// For stable p ∈ V(I) ∖ Ass(0:I): both v_p series fit the same line with
/// slope among the generator degrees of I.
fn linear_branch(ctx: &Ctx) -> Verdict {
    let id = "v-linear-branch";
    let vi = ctx.quotient_vi_series();
    let Some(i) = stable_onset(&vi, ctx.window) else {
        return Verdict::new(id, VerdictStatus::Undetermined, horizon_note(ctx));
    };
    let torsion = prime_set(ctx.colon());
    let candidates: Vec<&MonomialPrime> = vi[i].1.iter().filter(|p| !torsion.contains(p)).collect();
    if candidates.is_empty() {
        return Verdict::new(
            id,
            VerdictStatus::NotApplicable,
            "every stable prime over V(I) is associated to (0:I)",
        );
    }
    let degrees = match ctx.spec.ideal().generator_degrees() {
        Ok(d) => d,
        Err(e) => return Verdict::new(id, VerdictStatus::Fail, e.to_string()),
    };
    let mut undetermined = None;
    let mut slopes = BTreeSet::new();
    for p in candidates {
        let fit_q = fit_tail(
            &local_series(&ctx.eval.records, |r| Some(&r.quotient), p),
            ctx.window,
        );
        let fit_l = fit_tail(
            &local_series(&ctx.eval.records, |r| r.layer.as_ref(), p),
            ctx.window,
        );
        match (&fit_q.kind, &fit_l.kind) {
            (FitKind::Undetermined, _) | (_, FitKind::Undetermined) => {
                undetermined = Some(p.render());
            }
            (
                FitKind::Linear {
                    slope: a,
                    intercept: b,
                },
                FitKind::Linear {
                    slope: a2,
                    intercept: b2,
                },
            ) if a == a2 && b == b2 => {
                if !degrees.contains(&(*a as u64)) {
                    return Verdict::new(
                        id,
                        VerdictStatus::Fail,
                        format!(
                            "v_{} slope {a} is not a generator degree of I {degrees:?}",
                            p.render()
                        ),
                    );
                }
                slopes.insert(*a);
            }
            (q, l) => {
                return Verdict::new(
                    id,
                    VerdictStatus::Fail,
                    format!(
                        "v_{}: quotient fits {} but layer fits {}",
                        p.render(),
                        describe_kind(q),
                        describe_kind(l)
                    ),
                );
            }
        }
    }
    match undetermined {
        Some(p) => Verdict::new(
            id,
            VerdictStatus::Undetermined,
            format!("v_{p} tail undecided; {}", horizon_note(ctx)),
        ),
        None => Verdict::new(
            id,
            VerdictStatus::Pass,
            format!("matching linear fits with slopes {slopes:?} ⊆ generator degrees"),
        ),
    }
}

/// For p ∈ Ass(0:I): v_p(M/IⁿN) fits constant at v_p(0:I) = v_p(M).
fn constant_branch(ctx: &Ctx) -> Verdict {
    let id = "v-constant-branch";
    let torsion = prime_set(ctx.colon());
    if torsion.is_empty() {
        return Verdict::new(id, VerdictStatus::NotApplicable, "(0:I) = 0");
    }
    let mut undetermined = None;
    for p in &torsion {
        let expected = ctx.colon().vnum.locals[p].value;
        let fit = fit_tail(
            &local_series(&ctx.eval.records, |r| Some(&r.quotient), p),
            ctx.window,
        );
        match fit.kind {
            FitKind::Constant(Val::Finite(c)) if c == expected => {}
            FitKind::Undetermined => undetermined = Some(p.render()),
            other => {
                return Verdict::new(
                    id,
                    VerdictStatus::Fail,
                    format!(
                        "v_{}(M/I^nN) fits {} instead of the constant {expected}",
                        p.render(),
                        describe_kind(&other)
                    ),
                );
            }
        }
    }
    match undetermined {
        Some(p) => Verdict::new(
            id,
            VerdictStatus::Undetermined,
            format!("v_{p} tail undecided; {}", horizon_note(ctx)),
        ),
        None => Verdict::new(
            id,
            VerdictStatus::Pass,
            format!("constant at v(0:I) for {}", render_set(&torsion)),
        ),
    }
}

/// With IᵏM ⊆ N and (0:I) ≠ 0: global v(M/IⁿN) is eventually v(0:I).
fn global_constant_branch(ctx: &Ctx) -> Verdict {
    let id = "global-v-constant-branch";
    let Some(k) = ctx.spec.power_containment_index(ctx.eval.options.n_max) else {
        return Verdict::new(
            id,
            VerdictStatus::NotApplicable,
            format!(
                "no power containment I^k M ⊆ N found for k ≤ {}",
                ctx.eval.options.n_max
            ),
        );
    };
    let expected = ctx.colon().vnum.global;
    if expected == Val::Infinity {
        return Verdict::new(id, VerdictStatus::NotApplicable, "(0:I) = 0");
    }
    let series: Vec<(i64, Val)> = ctx
        .eval
        .records
        .iter()
        .filter(|r| r.n >= 1)
        .map(|r| (r.n as i64, r.quotient.vnum.global))
        .collect();
    let fit = fit_tail(&series, ctx.window);
    match fit.kind {
        FitKind::Constant(v) if v == expected => Verdict::new(
            id,
            VerdictStatus::Pass,
            format!(
                "v(M/I^nN) = v(0:I) = {expected} for n ≥ {} (I^{k} M ⊆ N)",
                fit.onset
            ),
        ),
        FitKind::Undetermined => Verdict::new(id, VerdictStatus::Undetermined, horizon_note(ctx)),
        other => Verdict::new(
            id,
            VerdictStatus::Fail,
            format!(
                "global v fits {} instead of the constant {expected}",
                describe_kind(&other)
            ),
        ),
    }
}

/// With IᵏM ⊆ N and (0:I) = 0: v(M/IⁿN) = v(layer_n) for large n.
fn global_linear_branch(ctx: &Ctx) -> Verdict {
    let id = "global-v-linear-branch";
    if ctx
        .spec
        .power_containment_index(ctx.eval.options.n_max)
        .is_none()
    {
        return Verdict::new(
            id,
            VerdictStatus::NotApplicable,
            format!(
                "no power containment I^k M ⊆ N found for k ≤ {}",
                ctx.eval.options.n_max
            ),
        );
    }
    if ctx.colon().vnum.global != Val::Infinity {
        return Verdict::new(id, VerdictStatus::NotApplicable, "(0:I) ≠ 0");
    }
    let quotient: Vec<(i64, Val)> = ctx
        .eval
        .records
        .iter()
        .filter(|r| r.n >= 1)
        .map(|r| (r.n as i64, r.quotient.vnum.global))
        .collect();
    let layer: Vec<(i64, Val)> = ctx
        .eval
        .records
        .iter()
        .filter_map(|r| r.layer.as_ref().map(|e| (r.n as i64, e.vnum.global)))
        .collect();
    let fit_q = fit_tail(&quotient, ctx.window);
    let fit_l = fit_tail(&layer, ctx.window);
    if fit_q.kind == FitKind::Undetermined || fit_l.kind == FitKind::Undetermined {
        return Verdict::new(id, VerdictStatus::Undetermined, horizon_note(ctx));
    }
    let onset = fit_q.onset.max(fit_l.onset);
    for r in ctx.eval.records.iter().filter(|r| (r.n as i64) >= onset) {
        let lv = r
            .layer
            .as_ref()
            .map(|e| e.vnum.global)
            .unwrap_or(Val::Infinity);
        if r.quotient.vnum.global != lv {
            return Verdict::new(
                id,
                VerdictStatus::Fail,
                format!(
                    "n = {}: v(M/I^nN) = {} but v(layer) = {lv}",
                    r.n, r.quotient.vnum.global
                ),
            );
        }
    }
    Verdict::new(
        id,
        VerdictStatus::Pass,
        format!("v(M/I^nN) = v(layer) for n ≥ {onset}"),
    )
}

/// For torsion primes still in the stable layer spectrum, the quotient
/// v-number eventually sits strictly below the layer one.
fn strict_gap(ctx: &Ctx) -> Verdict {
    let id = "v-strict-gap";
    let torsion = prime_set(ctx.colon());
    if torsion.is_empty() {
        return Verdict::new(id, VerdictStatus::NotApplicable, "(0:I) = 0");
    }
    let layers = ctx.layer_sets();
    let Some(i) = stable_onset(&layers, ctx.window) else {
        return Verdict::new(id, VerdictStatus::Undetermined, horizon_note(ctx));
    };
    let qualifying: Vec<&MonomialPrime> =
        torsion.iter().filter(|p| layers[i].1.contains(p)).collect();
    if qualifying.is_empty() {
        return Verdict::new(
            id,
            VerdictStatus::NotApplicable,
            "no torsion prime stays in the stable layer spectrum",
        );
    }
    let mut undetermined = None;
    for p in qualifying {
        let fit_q = fit_tail(
            &local_series(&ctx.eval.records, |r| Some(&r.quotient), p),
            ctx.window,
        );
        let fit_l = fit_tail(
            &local_series(&ctx.eval.records, |r| r.layer.as_ref(), p),
            ctx.window,
        );
        let eventually_below = match (&fit_q.kind, &fit_l.kind) {
            (FitKind::Undetermined, _) | (_, FitKind::Undetermined) => {
                undetermined = Some(p.render());
                continue;
            }
            (FitKind::Constant(a), FitKind::Constant(b)) => a < b,
            (FitKind::Constant(_), FitKind::Linear { .. }) => true,
            (FitKind::Linear { .. }, FitKind::Constant(_)) => false,
            (
                FitKind::Linear {
                    slope: aq,
                    intercept: bq,
                },
                FitKind::Linear {
                    slope: al,
                    intercept: bl,
                },
            ) => aq < al || (aq == al && bq < bl),
        };
        if !eventually_below {
            return Verdict::new(
                id,
                VerdictStatus::Fail,
                format!(
                    "v_{}(M/I^nN) fits {} which never drops below the layer fit {}",
                    p.render(),
                    describe_kind(&fit_q.kind),
                    describe_kind(&fit_l.kind)
                ),
            );
        }
    }
    match undetermined {
        Some(p) => Verdict::new(
            id,
            VerdictStatus::Undetermined,
            format!("v_{p} tail undecided; {}", horizon_note(ctx)),
        ),
        None => Verdict::new(
            id,
            VerdictStatus::Pass,
            "quotient v eventually strictly below layer v",
        ),
    }
}

/// v_p(M/IⁿN) is non-decreasing in n for every p ∉ V(I).
fn monotone_off_vi(ctx: &Ctx) -> Verdict {
    let id = "v-monotone-off-vi";
    let off = ctx.vi_part(&prime_set(ctx.base()), false);
    if off.is_empty() {
        return Verdict::new(id, VerdictStatus::NotApplicable, "Ass(M/N) ⊆ V(I)");
    }
    for p in &off {
        let mut prev: Option<i64> = None;
        for r in &ctx.eval.records {
            let Some(w) = r.quotient.vnum.locals.get(p) else {
                return Verdict::new(
                    id,
                    VerdictStatus::Fail,
                    format!("{} missing from Ass(M/I^nN) at n = {}", p.render(), r.n),
                );
            };
            if let Some(prev) = prev {
                if w.value < prev {
                    return Verdict::new(
                        id,
                        VerdictStatus::Fail,
                        format!(
                            "v_{}(M/I^nN) drops from {prev} to {} at n = {}",
                            p.render(),
                            w.value,
                            r.n
                        ),
                    );
                }
            }
            prev = Some(w.value);
        }
    }
    Verdict::new(
        id,
        VerdictStatus::Pass,
        format!("non-decreasing for {}", render_set(&off)),
    )
}

/// v_p(M/IⁿN) ≤ indeg((I+p)/p)·n + v_p(M/N) for every p ∉ V(I).
fn slope_bound_off_vi(ctx: &Ctx) -> Verdict {
    let id = "v-slope-bound-off-vi";
    let off = ctx.vi_part(&prime_set(ctx.base()), false);
    if off.is_empty() {
        return Verdict::new(id, VerdictStatus::NotApplicable, "Ass(M/N) ⊆ V(I)");
    }
    let ring = ctx.spec.ring();
    for p in &off {
        let slope = ctx
            .spec
            .ideal()
            .gens()
            .iter()
            .filter(|g| !p.contains_monomial(g))
            .map(|g| ring.degree(g) as i64)
            .min()
            .expect("a prime outside V(I) misses some generator of I");
        let base_v = ctx.base().vnum.locals[p].value;
        for r in &ctx.eval.records {
            let Some(w) = r.quotient.vnum.locals.get(p) else {
                return Verdict::new(
                    id,
                    VerdictStatus::Fail,
                    format!("{} missing from Ass(M/I^nN) at n = {}", p.render(), r.n),
                );
            };
            let bound = slope * r.n as i64 + base_v;
            if w.value > bound {
                return Verdict::new(
                    id,
                    VerdictStatus::Fail,
                    format!(
                        "n = {}: v_{}(M/I^nN) = {} exceeds {slope}·n + {base_v} = {bound}",
                        r.n,
                        p.render(),
                        w.value
                    ),
                );
            }
        }
    }
    Verdict::new(
        id,
        VerdictStatus::Pass,
        format!("within the slope bound for {}", render_set(&off)),
    )
}

fn describe_kind(kind: &FitKind) -> String {
    match kind {
        FitKind::Constant(v) => format!("constant {v}"),
        FitKind::Linear { slope, intercept } => {
            if *intercept == 0 {
                format!("{slope}n")
            } else {
                format!(
                    "{slope}n {} {}",
                    if *intercept < 0 { "-" } else { "+" },
                    intercept.abs()
                )
            }
        }
        FitKind::Undetermined => "undetermined".to_string(),
    }
}

fn horizon_note(ctx: &Ctx) -> String {
    let capped = if ctx.eval.aborted.is_some() {
        ", evaluation capped"
    } else {
        ""
    };
    format!(
        "no stable tail within the horizon (n_max {}, window {}{capped})",
        ctx.eval.options.n_max, ctx.eval.options.window
    )
}

/// Size limits for random family generation.
#[derive(Debug, Clone)]
pub struct InstanceParams {
    /// 1 to 5 variables.
    pub max_vars: usize,
    pub max_deg: u64,
    pub max_gens: usize,
    pub max_components: usize,
    pub max_weight: u64,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            max_vars: 4,
            max_deg: 4,
            max_gens: 3,
            max_components: 2,
            max_weight: 1,
        }
    }
}

/// Deterministic random family from a seed; biased toward torsion and
/// whole-module submodules so both theorem branches get exercised.
pub fn random_instance(seed: u64, params: &InstanceParams) -> Result<FamilySpec> {
    const NAMES: [&str; 5] = ["X", "Y", "Z", "W", "V"];
    if params.max_vars == 0 || params.max_vars > NAMES.len() {
        return Err(Error::invalid("max-vars must be between 1 and 5"));
    }
    if params.max_gens == 0 {
        return Err(Error::invalid("at least one generator is required for I"));
    }
    if params.max_components == 0 || params.max_deg == 0 || params.max_weight == 0 {
        return Err(Error::invalid("instance parameters must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nvars = rng.random_range(1..=params.max_vars);
    let weights: Vec<u64> = (0..nvars)
        .map(|_| rng.random_range(1..=params.max_weight))
        .collect();
    let names: Vec<String> = NAMES[..nvars].iter().map(|s| s.to_string()).collect();
    let ring = Arc::new(Ring::new(names, weights)?);
    let ideal = random_ideal(&mut rng, &ring, params);
    let whole = rng.random_bool(0.5);
    let comps = (0..rng.random_range(1..=params.max_components))
        .map(|_| {
            let mut relations = random_ideal(&mut rng, &ring, params);
            if rng.random_bool(0.4) {
                // plant I-torsion: u·I inside the relations
                let u = random_monomial(&mut rng, &ring, params.max_deg);
                let planted: Vec<Monomial> = ideal.gens().iter().map(|g| u.mul(g)).collect();
                relations = relations.sum(&MonomialIdeal::new(ring.clone(), planted)?);
            }
            let generators = if whole {
                None
            } else {
                Some(random_ideal(&mut rng, &ring, params))
            };
            let sign = if rng.random_bool(0.5) { 1 } else { -1 };
            let shift = match rng.random_range(0..10u8) {
                0..=6 => 0,
                7 | 8 => sign,
                _ => 2 * sign,
            };
            FamilyComponent::new(shift, relations, generators)
        })
        .collect::<Result<Vec<_>>>()?;
    FamilySpec::new(ring, ideal, comps)
}

fn random_monomial(rng: &mut ChaCha8Rng, ring: &Ring, max_deg: u64) -> Monomial {
    for _ in 0..64 {
        let budget = rng.random_range(1..=max_deg);
        let mut exps = vec![0u64; ring.nvars()];
        let mut left = budget;
        for (v, slot) in exps.iter_mut().enumerate() {
            let cap = left / ring.weights()[v];
            if cap > 0 {
                let e = rng.random_range(0..=cap);
                *slot = e;
                left -= e * ring.weights()[v];
            }
        }
        let m = Monomial::new(exps);
        if !m.is_one() {
            return m;
        }
    }
    let cheapest = (0..ring.nvars())
        .min_by_key(|&v| ring.weights()[v])
        .unwrap_or(0);
    Monomial::var(ring.nvars(), cheapest)
}

fn random_ideal(rng: &mut ChaCha8Rng, ring: &Arc<Ring>, params: &InstanceParams) -> MonomialIdeal {
    let count = rng.random_range(1..=params.max_gens);
    let gens = (0..count)
        .map(|_| random_monomial(rng, ring, params.max_deg))
        .collect();
    MonomialIdeal::new(ring.clone(), gens).expect("random generators are nonempty")
}

/// One flagged (trial, prime) pair from the exploration run.
#[derive(Debug, Clone)]
pub struct ExploreFlag {
    pub trial: u32,
    pub seed: u64,
    pub prime: MonomialPrime,
    pub fit: LinearFit,
    /// Replayable input document of the flagged instance.
    pub input: String,
}

#[derive(Debug, Clone)]
pub struct ExploreReport {
    pub trials: u32,
    /// How many (trial, prime) series were fitted.
    pub examined: usize,
    pub flags: Vec<ExploreFlag>,
}

/// Fits v_p(M/IⁿN) for every p ∈ Ass(M/N) ∖ V(I) over random instances and
/// flags undetermined tails as counterexample candidates.
pub fn explore_q45(seed: u64, trials: u32, options: &EvalOptions) -> Result<ExploreReport> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<(usize, Vec<ExploreFlag>)> {
            let trial_seed = seed.wrapping_add(trial as u64);
            let spec = random_instance(trial_seed, &InstanceParams::default())?;
            let eval = evaluate_family(&spec, options)?;
            let Some(first) = eval.records.first() else {
                return Ok((0, Vec::new()));
            };
            let off: Vec<MonomialPrime> = first
                .base
                .vnum
                .locals
                .keys()
                .filter(|p| !p.contains_ideal(spec.ideal()))
                .cloned()
                .collect();
            let mut flags = Vec::new();
            for prime in off.iter() {
                let fit = fit_tail(
                    &local_series(&eval.records, |r| Some(&r.quotient), prime),
                    options.window,
                );
                if fit.kind == FitKind::Undetermined {
                    flags.push(ExploreFlag {
                        trial,
                        seed: trial_seed,
                        prime: prime.clone(),
                        fit,
                        input: render_input(&spec),
                    });
                }
            }
            Ok((off.len(), flags))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = ExploreReport {
        trials,
        examined: 0,
        flags: Vec::new(),
    };
    for (examined, flags) in per_trial {
        report.examined += examined;
        report.flags.extend(flags);
    }
    Ok(report)
}
