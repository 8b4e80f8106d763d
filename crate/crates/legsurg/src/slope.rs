//! Characterizing-slope obstructions.
//!
//! Given a Legendrian knot `L` (its knot class and classical invariants) and a
//! contact slope `r`, the analyzer enumerates every `(tb, rot)` a knot `L′`
//! with `L′(r) ≅ L(r)` could have, and eliminates candidates with the first
//! homology, the smooth gates recorded for the class, the Euler class and the
//! `d3`-invariant.  All invariant values are recomputed through
//! [`crate::invariants`]; nothing here hardcodes a closed form.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{evaluate, trace_intersection_form, D3Value, EulerOrbit};
use crate::rational::{
    as_integer, exact_sqrt, format_rational, rat_int, serde_rational, to_i64, unit_fraction, Int, Rational,
};
use crate::surgery::SurgeryDiagram;

/// Default half-width of the `(t′, r′)` search grids.
pub const DEFAULT_GRID: i64 = 30;

/// Built-in knot classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnotTag {
    Unknot,
    RhTrefoil,
    LhTrefoil,
    Fig8,
    Custom,
}

/// A peak of a mountain range: every `(tb, rot)` below it is realized by
/// stabilization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Peak {
    pub tb: i64,
    /// Signed rotation numbers realized at this `tb`.
    pub rot: Vec<i64>,
}

/// A topological slope whose surgery has only the listed single-knot
/// surgery descriptions besides the class itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryDescriptions {
    #[serde(with = "serde_rational")]
    pub slope: Rational,
    pub partners: Vec<Partner>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partner {
    pub class: String,
    #[serde(with = "serde_rational")]
    pub slope: Rational,
}

/// Smooth inputs of the pipelines, recorded as class attributes.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SmoothFlags {
    /// Every topological surgery on the knot determines its knot type.
    pub smoothly_characterized: bool,
    /// Legendrian representatives are determined by `(tb, |rot|)`.
    pub legendrian_simple: bool,
    /// Integral surgeries are lens spaces `L(p, 1)` (Stein-filling gate) and
    /// all surgeries are lens spaces (cyclic-surgery torus-knot gate).
    pub lens_space_surgeries: bool,
    /// `0`-surgery has no other single-knot description.
    pub property_r: bool,
    /// `1/q`-surgeries have no other single-knot description.
    pub gordon_luecke: bool,
    pub homology_sphere_descriptions: Vec<SurgeryDescriptions>,
}

/// Contact slopes for which the pipeline is expected to decide the question.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Scope {
    /// All slopes strictly below this value …
    #[serde(with = "opt_rational", skip_serializing_if = "Option::is_none")]
    pub below: Option<Rational>,
    /// … except these.
    #[serde(with = "vec_rational")]
    pub except: Vec<Rational>,
    #[serde(with = "vec_rational")]
    pub slopes: Vec<Rational>,
    /// `±1/n` for `n` at least this value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit_fraction_min_n: Option<u64>,
    /// Contact slopes whose topological slope `tb + r` is listed.
    #[serde(with = "vec_rational")]
    pub topological: Vec<Rational>,
}

mod vec_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter().map(|s| crate::rational::parse_rational(s).map_err(serde::de::Error::custom)).collect()
    }
}

mod opt_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_str(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        let raw: Option<String> = Option::deserialize(d)?;
        raw.map(|s| crate::rational::parse_rational(&s).map_err(serde::de::Error::custom)).transpose()
    }
}

/// A knot type together with its Legendrian classification table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotClass {
    pub tag: KnotTag,
    pub name: String,
    pub peaks: Vec<Peak>,
    #[serde(default)]
    pub flags: SmoothFlags,
    #[serde(default)]
    pub scope: Scope,
}

#[derive(Deserialize)]
struct ClassTable {
    classes: Vec<KnotClass>,
}

fn builtin_classes() -> &'static [KnotClass] {
    static TABLE: OnceLock<Vec<KnotClass>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let table: ClassTable =
            serde_json::from_str(include_str!("../data/knot_classes.json")).expect("built-in class table parses");
        for class in &table.classes {
            class.validate().expect("built-in class table is consistent");
        }
        table.classes
    })
}

impl KnotClass {
    /// A built-in class by tag name (`unknot`, `rh_trefoil`, `lh_trefoil`, `fig8`).
    pub fn builtin(name: &str) -> Result<Self> {
        builtin_classes()
            .iter()
            .find(|c| serde_json::to_value(c.tag).ok().and_then(|v| v.as_str().map(|s| s == name)) == Some(true))
            .cloned()
            .ok_or_else(|| Error::UnknownClass(name.to_string()))
    }

    /// Names of the built-in classes.
    pub fn builtin_names() -> Vec<String> {
        builtin_classes()
            .iter()
            .filter_map(|c| serde_json::to_value(c.tag).ok()?.as_str().map(str::to_string))
            .collect()
    }

    /// A custom class from JSON (same schema as the built-in table entries).
    pub fn from_json(text: &str) -> Result<Self> {
        let class: KnotClass = serde_json::from_str(text)?;
        class.validate()?;
        Ok(class)
    }

    /// Checks the table: every peak satisfies `tb + rot` odd, carries its
    /// rotation set symmetrically, and no peak lies below another one (the
    /// range is the stabilization closure of the peaks).
    pub fn validate(&self) -> Result<()> {
        if self.peaks.is_empty() {
            return Err(Error::Schema(format!("class {} has no peaks", self.name)));
        }
        for (i, p) in self.peaks.iter().enumerate() {
            if p.rot.is_empty() {
                return Err(Error::Schema(format!("peak {i} of {} has no rotation numbers", self.name)));
            }
            for &r in &p.rot {
                if (p.tb + r).rem_euclid(2) != 1 {
                    return Err(Error::Schema(format!("peak ({}, {r}) of {} has tb + rot even", p.tb, self.name)));
                }
                if !p.rot.contains(&-r) {
                    return Err(Error::Schema(format!("peak rotations of {} are not symmetric", self.name)));
                }
            }
            for (j, q) in self.peaks.iter().enumerate() {
                if i != j && p.rot.iter().any(|&r| below_peak(q, p.tb, r)) {
                    return Err(Error::Schema(format!("peak {i} of {} is a stabilization of peak {j}", self.name)));
                }
            }
        }
        Ok(())
    }

    /// Whether `(t, ±r)` is realized by a Legendrian representative.
    pub fn realizable(&self, t: i64, r: i64) -> bool {
        self.peaks.iter().any(|p| below_peak(p, t, r) || below_peak(p, t, -r))
    }

    /// Realizable `|rot|` values at `tb = t`, ascending.
    pub fn rotations_at(&self, t: i64) -> Vec<i64> {
        let bound = self.peaks.iter().map(|p| p.tb - t + p.rot.iter().map(|r| r.abs()).max().unwrap_or(0)).max();
        let bound = bound.unwrap_or(-1);
        (0..=bound.max(-1)).filter(|&r| self.realizable(t, r)).collect()
    }

    /// Maximal Thurston–Bennequin invariant.
    pub fn max_tb(&self) -> i64 {
        self.peaks.iter().map(|p| p.tb).max().expect("validated class has peaks")
    }

    fn tag_name(&self) -> String {
        serde_json::to_value(self.tag)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_else(|| self.name.clone())
    }

    fn in_scope(&self, t: i64, slope: &Rational) -> bool {
        let s = &self.scope;
        let topo = slope + rat_int(t);
        if s.slopes.contains(slope) || s.topological.contains(&topo) {
            return true;
        }
        if let (Some(min), Some((_, n))) = (s.unit_fraction_min_n, unit_fraction(slope)) {
            if n >= min {
                return true;
            }
        }
        if self.flags.property_r && topo.is_zero() {
            return true;
        }
        if self.flags.gordon_luecke && unit_fraction(&topo).is_some() {
            return true;
        }
        matches!(&s.below, Some(b) if slope < b && !s.except.contains(slope))
    }
}

fn below_peak(p: &Peak, t: i64, r: i64) -> bool {
    let depth = p.tb - t;
    depth >= 0 && p.rot.iter().any(|&r0| (r - r0).abs() <= depth && (depth - (r - r0)).rem_euclid(2) == 0)
}

/// All integers `t′` with `|p + q·t′| = |p + q·t|` for the slope `p/q`.
pub fn homology_candidates(t: i64, slope: &Rational) -> Vec<i64> {
    let (p, q) = (slope.numer(), slope.denom());
    let mut out = BTreeSet::from([t]);
    // q·t′ = −(p + q·t) − p
    let other = -(p + q * Int::from(t)) - p;
    if other.is_multiple_of(q) {
        if let Ok(tp) = to_i64(&(other / q)) {
            out.insert(tp);
        }
    }
    out.into_iter().collect()
}

/// Invariants of `L(r)` for an abstract knot with the given classical
/// invariants.
#[derive(Debug, Clone)]
struct KnotData {
    h1: Vec<Int>,
    /// Sorted Euler coordinates (all branches, one presentation per `(t, r)`).
    coords: Vec<Vec<Int>>,
    /// Sorted `(Euler coordinates, d3)` pairs.
    pairs: Vec<(Vec<Int>, D3Value)>,
    /// Sorted `(orbit, d3)` pairs (presentation independent).
    orbit_pairs: Vec<(EulerOrbit, D3Value)>,
    orbits: Vec<EulerOrbit>,
    d3: Vec<D3Value>,
}

impl KnotData {
    fn new(t: i64, r: i64, slope: &Rational) -> Result<Self> {
        let eval = evaluate(&SurgeryDiagram::knot(t, r, slope.clone())?)?;
        let mut coords: Vec<Vec<Int>> = eval.branches.iter().map(|b| b.euler.clone()).collect();
        coords.sort();
        let mut pairs: Vec<_> = eval.branches.iter().map(|b| (b.euler.clone(), b.d3.clone())).collect();
        pairs.sort();
        let mut orbit_pairs: Vec<_> = eval.branches.iter().map(|b| (b.orbit.clone(), b.d3.clone())).collect();
        orbit_pairs.sort();
        let summary = eval.summary();
        Ok(KnotData { h1: summary.h1, coords, pairs, orbit_pairs, orbits: summary.euler, d3: summary.d3 })
    }
}

/// Outcome of a single obstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Eliminated,
    Survives,
}

/// Result of [`euler_obstruction`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EulerComparison {
    pub outcome: Outcome,
    /// `same_presentation` (equal `tb`: classes compared up to sign in one
    /// presentation) or `orbit` (order and quotient only).
    pub mode: &'static str,
    pub detail: String,
}

fn fmt_coords(v: &[Vec<Int>]) -> String {
    let items: Vec<String> = v
        .iter()
        .map(|c| {
            let parts: Vec<String> = c.iter().map(Int::to_string).collect();
            format!("({})", parts.join(", "))
        })
        .collect();
    format!("{{{}}}", items.join(", "))
}

fn fmt_group(h1: &[Int]) -> String {
    if h1.is_empty() {
        return "0".into();
    }
    h1.iter().map(|d| if d.is_zero() { "Z".to_string() } else { format!("Z/{d}") }).collect::<Vec<_>>().join(" + ")
}

/// Compares the Euler classes of `L(r)` and `L′(r)` for knots with classical
/// invariants `(t, r)` and `(t′, r′)`.
///
/// For `t′ = t` both surgeries are presented by the same matrix, and the
/// classes are compared in that presentation up to an overall sign (a
/// contactomorphism may reverse the meridian).  For `t′ ≠ t` only
/// automorphism-invariant data is compared (element order and quotient).
pub fn euler_obstruction(t: i64, r: i64, tp: i64, rp: i64, slope: &Rational) -> Result<EulerComparison> {
    let a = KnotData::new(t, r, slope)?;
    let b = KnotData::new(tp, rp, slope)?;
    compare_euler(t, &a, tp, rp, &b, slope)
}

fn compare_euler(t: i64, a: &KnotData, tp: i64, rp: i64, b: &KnotData, slope: &Rational) -> Result<EulerComparison> {
    if a.h1 != b.h1 {
        return Ok(EulerComparison {
            outcome: Outcome::Eliminated,
            mode: "homology",
            detail: format!("H1 differ: {} vs {}", fmt_group(&a.h1), fmt_group(&b.h1)),
        });
    }
    if tp == t {
        let neg = KnotData::new(tp, -rp, slope)?;
        let same = a.coords == b.coords || a.coords == neg.coords;
        Ok(EulerComparison {
            outcome: if same { Outcome::Survives } else { Outcome::Eliminated },
            mode: "same_presentation",
            detail: format!("e = {} vs {} in {}", fmt_coords(&a.coords), fmt_coords(&b.coords), fmt_group(&a.h1)),
        })
    } else {
        let same = a.orbits == b.orbits;
        let orders = |d: &KnotData| {
            d.orbits
                .iter()
                .map(|o| o.order.as_ref().map_or("inf".to_string(), Int::to_string))
                .collect::<Vec<_>>()
                .join(", ")
        };
        Ok(EulerComparison {
            outcome: if same { Outcome::Survives } else { Outcome::Eliminated },
            mode: "orbit",
            detail: format!(
                "e = {} (orders {}) vs {} (orders {}) in {}",
                fmt_coords(&a.coords),
                orders(a),
                fmt_coords(&b.coords),
                orders(b),
                fmt_group(&a.h1)
            ),
        })
    }
}

/// The constraint `r′² = rhs` from equating `d3(L(r))` and `d3(L′(r))` for
/// a `±1/n` slope, and its admissible solutions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct D3Constraint {
    pub t_prime: i64,
    /// Right-hand side of `r′² = rhs`.
    #[serde(with = "serde_rational")]
    pub rhs: Rational,
    /// Non-negative integer solutions with `r′ ≡ t′ + 1 (mod 2)`.
    pub solutions: Vec<i64>,
}

/// Solves `d3(L′(r)) = d3(L(r))` for `r′²`, where `tb(L′) = t′`.
///
/// `d3` of a `±1/n` surgery is affine in `rot²`; the two coefficients are
/// obtained by evaluating `rot = 0` and `rot = 1` through the invariants
/// module.  Returns `None` if either side is not torsion.
pub fn d3_diophantine(t: i64, r: i64, slope: &Rational, tp: i64) -> Result<Option<D3Constraint>> {
    if unit_fraction(slope).is_none() {
        return Err(Error::BadCoefficient(0, format!("{} is not ±1/n", format_rational(slope))));
    }
    d3_diophantine_from(&KnotData::new(t, r, slope)?, slope, tp)
}

/// A stage of a pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Realizability,
    Homology,
    SmoothGate,
    SteinFilling,
    TorusKnot,
    Euler,
    D3,
    Scope,
}

/// One entry of the obstruction chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub stage: Stage,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_prime: Option<i64>,
    /// `eliminated`, `survives` or `note`.
    pub outcome: &'static str,
    pub detail: String,
    /// Rotation numbers eliminated at this stage.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub eliminated: Vec<i64>,
}

impl ChainStep {
    fn note(stage: Stage, t_prime: Option<i64>, detail: String) -> Self {
        ChainStep { stage, t_prime, outcome: "note", detail, eliminated: Vec::new() }
    }

    fn verdict(stage: Stage, t_prime: i64, eliminated: Vec<i64>, survivors: usize, detail: String) -> Self {
        let outcome = if survivors == 0 { "eliminated" } else { "survives" };
        ChainStep { stage, t_prime: Some(t_prime), outcome, detail, eliminated }
    }
}

/// A Legendrian knot that the obstructions cannot rule out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Candidate {
    pub tb: i64,
    pub rot: i64,
}

/// Final verdict of a pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    CharacterizingCertified {
        /// Set when some branch was only searched on a finite grid.
        #[serde(skip_serializing_if = "Option::is_none")]
        grid: Option<i64>,
    },
    CandidateSurvives {
        candidates: Vec<Candidate>,
    },
    OutOfMethodScope {
        reason: String,
        witnesses: Vec<Candidate>,
    },
}

impl Verdict {
    /// CLI exit code: 0 certified, 2 survivors, 3 out of scope.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::CharacterizingCertified { .. } => 0,
            Verdict::CandidateSurvives { .. } => 2,
            Verdict::OutOfMethodScope { .. } => 3,
        }
    }
}

/// The question a pipeline answers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Query {
    pub class: String,
    pub tb: i64,
    pub rot: i64,
    #[serde(with = "serde_rational")]
    pub slope: Rational,
}

/// Structured result of [`check_characterizing`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub query: Query,
    pub chain: Vec<ChainStep>,
    pub verdict: Verdict,
}

impl ObstructionReport {
    pub fn survivors(&self) -> &[Candidate] {
        match &self.verdict {
            Verdict::CharacterizingCertified { .. } => &[],
            Verdict::CandidateSurvives { candidates } => candidates,
            Verdict::OutOfMethodScope { witnesses, .. } => witnesses,
        }
    }
}

/// Tuning of [`check_characterizing`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineOptions {
    /// Bound on `|r′|` where no exact reduction is available.
    pub grid: i64,
    /// Apply the smooth, Stein-filling and torus-knot gates.
    pub gates: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { grid: DEFAULT_GRID, gates: true }
    }
}

/// Runs the obstruction pipeline for `L(slope)`, `L` in `class` with
/// `tb = t` and `|rot| = r`.
pub fn check_characterizing(
    class: &KnotClass,
    t: i64,
    r: i64,
    slope: &Rational,
    opts: PipelineOptions,
) -> Result<ObstructionReport> {
    if slope.is_zero() {
        return Err(Error::Computation("contact slope must be non-zero".into()));
    }
    let r = r.abs();
    let query = Query { class: class.tag_name(), tb: t, rot: r, slope: slope.clone() };
    let mut chain = Vec::new();
    if !class.realizable(t, r) {
        chain.push(ChainStep::note(
            Stage::Realizability,
            None,
            format!("(tb, rot) = ({t}, {r}) is not realized in the {} table; invariants computed anyway", class.name),
        ));
    }
    let base = KnotData::new(t, r, slope)?;
    let candidates = homology_candidates(t, slope);
    chain.push(ChainStep::note(Stage::Homology, None, format!("H1 = {}; tb′ ∈ {:?}", fmt_group(&base.h1), candidates)));

    let mut survivors = Vec::new();
    let mut used_grid = false;
    for &tp in &candidates {
        let (s, grid) = if tp == t {
            same_tb_branch(class, t, r, slope, &base, opts, &mut chain)?
        } else {
            dual_branch(class, t, tp, slope, &base, opts, &mut chain)?
        };
        used_grid |= grid;
        survivors.extend(s);
    }
    survivors.sort();
    survivors.dedup();

    let in_scope = class.in_scope(t, slope);
    let verdict = if in_scope && survivors.is_empty() {
        Verdict::CharacterizingCertified { grid: used_grid.then_some(opts.grid) }
    } else if in_scope {
        Verdict::CandidateSurvives { candidates: survivors }
    } else if survivors.is_empty() && !used_grid {
        // Every candidate was eliminated without a finite search.
        Verdict::CharacterizingCertified { grid: None }
    } else {
        let searched =
            if used_grid { format!("; candidates searched only on |rot′| ≤ {}", opts.grid) } else { String::new() };
        let reason = format!(
            "slope {} on the {} is outside the slopes the pipeline is designed to decide{searched}",
            format_rational(slope),
            class.name
        );
        chain.push(ChainStep::note(Stage::Scope, None, reason.clone()));
        Verdict::OutOfMethodScope { reason, witnesses: survivors }
    };
    Ok(ObstructionReport { query, chain, verdict })
}

fn parity_range(tp: i64, grid: i64) -> Vec<i64> {
    (0..=grid).filter(|r| (r - tp - 1).rem_euclid(2) == 0).collect()
}

fn same_tb_branch(
    class: &KnotClass,
    t: i64,
    r: i64,
    slope: &Rational,
    base: &KnotData,
    opts: PipelineOptions,
    chain: &mut Vec<ChainStep>,
) -> Result<(Vec<Candidate>, bool)> {
    let topo = slope + rat_int(t);
    let known = class.flags.smoothly_characterized && class.flags.legendrian_simple;
    let (rots, grid) = if known {
        let gate = if class.flags.property_r && topo.is_zero() {
            "Property R"
        } else if class.flags.gordon_luecke && unit_fraction(&topo).is_some() {
            "Gordon–Luecke"
        } else {
            "smooth characterization"
        };
        chain.push(ChainStep::note(
            Stage::SmoothGate,
            Some(t),
            format!(
                "{gate}: L′ is a {} with tb {t}; Legendrian simple, so only |rot′| ∈ {:?} remain",
                class.name,
                class.rotations_at(t)
            ),
        ));
        (class.rotations_at(t).into_iter().filter(|&x| x != r).collect::<Vec<_>>(), false)
    } else {
        chain.push(ChainStep::note(
            Stage::SmoothGate,
            Some(t),
            format!("knot type of L′ is not determined; searching |rot′| ≤ {}", opts.grid),
        ));
        (parity_range(t, opts.grid), true)
    };
    let mut survivors = Vec::new();
    let (mut by_euler, mut by_d3) = (Vec::new(), Vec::new());
    for rp in rots {
        let data = KnotData::new(t, rp, slope)?;
        if compare_euler(t, base, t, rp, &data, slope)?.outcome == Outcome::Eliminated {
            by_euler.push(rp);
            continue;
        }
        let neg = KnotData::new(t, -rp, slope)?;
        if data.pairs != base.pairs && neg.pairs != base.pairs {
            by_d3.push(rp);
            continue;
        }
        survivors.push(Candidate { tb: t, rot: rp });
    }
    let left = survivors.len();
    chain.push(ChainStep::verdict(
        Stage::Euler,
        t,
        by_euler,
        left + by_d3.len(),
        format!("Euler classes compared in the common presentation of {}", fmt_group(&base.h1)),
    ));
    chain.push(ChainStep::verdict(Stage::D3, t, by_d3, left, "(Euler, d3) pairs compared".into()));
    if !known {
        // The knot itself is always a candidate when its type is unknown.
        survivors.retain(|c| c.rot != r);
        survivors.push(Candidate { tb: t, rot: r });
    }
    Ok((survivors, grid))
}

fn dual_branch(
    class: &KnotClass,
    t: i64,
    tp: i64,
    slope: &Rational,
    base: &KnotData,
    opts: PipelineOptions,
    chain: &mut Vec<ChainStep>,
) -> Result<(Vec<Candidate>, bool)> {
    let topo = slope + rat_int(t);
    let topo_prime = slope + rat_int(tp);
    let mut restricted: Option<Vec<i64>> = None;

    if opts.gates {
        let flags = &class.flags;
        let unique = (flags.property_r && topo.is_zero())
            .then_some("Property R")
            .or_else(|| (flags.gordon_luecke && unit_fraction(&topo).is_some()).then_some("Gordon–Luecke"));
        if let Some(gate) = unique {
            chain.push(ChainStep::verdict(
                Stage::SmoothGate,
                tp,
                Vec::new(),
                0,
                format!("{gate}: the only single-knot description is the {} with tb {t}", class.name),
            ));
            return Ok((Vec::new(), false));
        }
        if let Some(desc) = flags.homology_sphere_descriptions.iter().find(|d| d.slope == topo) {
            let partner = desc.partners.iter().find(|p| p.slope == topo_prime);
            match partner {
                None => {
                    chain.push(ChainStep::verdict(
                        Stage::SmoothGate,
                        tp,
                        Vec::new(),
                        0,
                        format!(
                            "topological {}-surgery has no single-knot description with slope {}",
                            format_rational(&topo),
                            format_rational(&topo_prime)
                        ),
                    ));
                    return Ok((Vec::new(), false));
                }
                Some(p) => {
                    let other = KnotClass::builtin(&p.class)?;
                    let rots = other.rotations_at(tp);
                    chain.push(ChainStep::note(
                        Stage::SmoothGate,
                        Some(tp),
                        format!("L′ must be a {} with tb {tp}; |rot′| ∈ {:?}", other.name, rots),
                    ));
                    if rots.is_empty() {
                        return Ok((Vec::new(), false));
                    }
                    restricted = Some(rots);
                }
            }
        }
        if flags.lens_space_surgeries {
            if let Some(n) = as_integer(slope) {
                if !n.is_positive() {
                    let n = to_i64(&n)?;
                    // Contact n-surgery is contact (−1)-surgery on the
                    // (|n| − 1)-fold stabilization, whose trace is a Stein
                    // filling of the lens space L(p, 1).
                    let form = trace_intersection_form(tp + n + 1);
                    if form[0][0] > 0 {
                        chain.push(ChainStep::verdict(
                            Stage::SteinFilling,
                            tp,
                            Vec::new(),
                            0,
                            format!(
                                "Stein trace of L′ has intersection form [[{}]], positive definite; \
                                 fillings of L(p, 1) are negative definite",
                                form[0][0]
                            ),
                        ));
                        return Ok((Vec::new(), false));
                    }
                }
            } else {
                // A non-integral surgery with cyclic π1 on a non-torus knot
                // is integral; L′ would have to be a torus knot.
                let four = rat_int(4);
                let positive_excluded = *slope < four;
                let negative_excluded = topo_prime >= -four.clone();
                if positive_excluded && negative_excluded {
                    chain.push(ChainStep::verdict(
                        Stage::TorusKnot,
                        tp,
                        Vec::new(),
                        0,
                        format!(
                            "L′ would be a torus knot: contact slope {} < 4 excludes positive ones, \
                             smooth slope {} ≥ -4 excludes negative ones",
                            format_rational(slope),
                            format_rational(&topo_prime)
                        ),
                    ));
                    return Ok((Vec::new(), false));
                }
                chain.push(ChainStep::note(Stage::TorusKnot, Some(tp), "torus-knot exclusion does not apply".into()));
            }
        }
    }

    // Candidate rotation numbers: exact d3 reduction for ±1/n slopes, else a grid.
    let unit = unit_fraction(slope).is_some();
    let mut used_grid = false;
    let mut by_d3 = Vec::new();
    let rots: Vec<i64> = match (&restricted, unit) {
        (None, true) => {
            let base_d3 = base.d3.first().and_then(D3Value::value);
            match (base_d3, d3_diophantine_from(base, slope, tp)?) {
                (Some(_), Some(c)) => {
                    chain.push(ChainStep::verdict(
                        Stage::D3,
                        tp,
                        Vec::new(),
                        c.solutions.len(),
                        format!(
                            "d3 equality forces rot′² = {}; admissible rot′: {:?}",
                            format_rational(&c.rhs),
                            c.solutions
                        ),
                    ));
                    c.solutions
                }
                _ => {
                    used_grid = true;
                    parity_range(tp, opts.grid)
                }
            }
        }
        (Some(rots), _) => rots.clone(),
        (None, false) => {
            used_grid = true;
            parity_range(tp, opts.grid)
        }
    };

    let mut by_euler = Vec::new();
    let mut survivors = Vec::new();
    for rp in rots {
        let data = KnotData::new(tp, rp, slope)?;
        if compare_euler(t, base, tp, rp, &data, slope)?.outcome == Outcome::Eliminated {
            by_euler.push(rp);
        } else if data.orbit_pairs != base.orbit_pairs {
            by_d3.push(rp);
        } else {
            survivors.push(Candidate { tb: tp, rot: rp });
        }
    }
    let left = survivors.len();
    chain.push(ChainStep::verdict(
        Stage::Euler,
        tp,
        by_euler,
        left + by_d3.len(),
        "Euler classes compared by order and quotient".into(),
    ));
    if !by_d3.is_empty() || used_grid || restricted.is_some() {
        let scope = if used_grid { format!(" on |rot′| ≤ {}", opts.grid) } else { String::new() };
        chain.push(ChainStep::verdict(Stage::D3, tp, by_d3, left, format!("(Euler, d3) pairs compared{scope}")));
    }
    Ok((survivors, used_grid))
}

fn d3_diophantine_from(base: &KnotData, slope: &Rational, tp: i64) -> Result<Option<D3Constraint>> {
    let Some(target) = base.d3.first().and_then(D3Value::value) else {
        return Ok(None);
    };
    let single = |rot: i64| -> Result<Option<Rational>> {
        let d = crate::invariants::d3(&SurgeryDiagram::knot(tp, rot, slope.clone())?)?;
        Ok(d[0].value().cloned())
    };
    let (Some(alpha), Some(at_one)) = (single(0)?, single(1)?) else {
        return Ok(None);
    };
    let beta = at_one - &alpha;
    if beta.is_zero() {
        return Err(Error::Computation("d3 does not depend on the rotation number".into()));
    }
    let rhs = (target - &alpha) / beta;
    let mut solutions = Vec::new();
    if let Some(n) = as_integer(&rhs) {
        if let Some(root) = (!n.is_negative()).then(|| exact_sqrt(&n)).flatten() {
            let root = to_i64(&root)?;
            if (root - tp - 1).rem_euclid(2) == 0 {
                solutions.push(root);
            }
        }
    }
    Ok(Some(D3Constraint { t_prime: tp, rhs, solutions }))
}

/// Result of [`overtwisted_equality`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Equality {
    Contactomorphic,
    Inconclusive,
}

/// Details of an [`overtwisted_equality`] comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EqualityReport {
    pub result: Equality,
    pub homology_order: [Option<String>; 2],
    pub euler_orders: [Vec<Option<String>>; 2],
    pub d3: [Vec<D3Value>; 2],
}

/// Decides whether two positive contact surgeries on knots stabilized with
/// both signs agree: such surgeries are overtwisted, so they are
/// contactomorphic once the manifolds agree and the plane fields are
/// homotopic.  Here the manifolds are compared by the order of `H_1` (the
/// caller supplies the diffeomorphism, as for a pair of lens spaces) and the
/// plane fields by the multisets of (Euler orbit, `d3`).
pub fn overtwisted_equality(t: i64, r: i64, t2: i64, r2: i64, slope: &Rational) -> Result<EqualityReport> {
    if !slope.is_positive() {
        return Err(Error::Computation("overtwisted comparison needs a positive slope".into()));
    }
    let a = KnotData::new(t, r, slope)?;
    let b = KnotData::new(t2, r2, slope)?;
    let order = |d: &KnotData| -> Option<String> {
        d.h1.iter().try_fold(Int::one(), |acc, f| (!f.is_zero()).then(|| acc * f)).map(|o| o.to_string())
    };
    let orders = |d: &KnotData| d.orbits.iter().map(|o| o.order.as_ref().map(Int::to_string)).collect::<Vec<_>>();
    let equal = a.h1 == b.h1 && a.orbit_pairs == b.orbit_pairs;
    Ok(EqualityReport {
        result: if equal { Equality::Contactomorphic } else { Equality::Inconclusive },
        homology_order: [order(&a), order(&b)],
        euler_orders: [orders(&a), orders(&b)],
        d3: [a.d3.clone(), b.d3.clone()],
    })
}

/// Solutions for one sign in [`unit_fraction_recovery`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecoveryBranch {
    pub sign: i64,
    /// All `(t′, |r′|)` on the grid with equal homology order and equal `d3`.
    pub solutions: Vec<Candidate>,
    pub unique: bool,
}

/// Result of [`unit_fraction_recovery`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecoveryReport {
    pub n: u64,
    pub tb: i64,
    pub rot: i64,
    pub grid: i64,
    pub branches: Vec<RecoveryBranch>,
    /// `true` when `n ≥ 3` and both signs recover `(t, |r|)` uniquely.
    pub certified: bool,
}

/// Searches `|t′|, |r′| ≤ grid` for knots whose `(±1/n)`-surgery has the same
/// homology order and `d3` as that of `(t, r)`.
pub fn unit_fraction_recovery(n: u64, t: i64, r: i64, grid: i64) -> Result<RecoveryReport> {
    if n == 0 {
        return Err(Error::Computation("n must be positive".into()));
    }
    let r = r.abs();
    let mut branches = Vec::new();
    for sign in [1i64, -1] {
        let slope = crate::rational::rat(sign, n as i64);
        let target = KnotData::new(t, r, &slope)?;
        let order = (sign + n as i64 * t).abs();
        let mut solutions = Vec::new();
        for tp in -grid..=grid {
            if (sign + n as i64 * tp).abs() != order {
                continue;
            }
            for rp in parity_range(tp, grid) {
                if KnotData::new(tp, rp, &slope)?.d3 == target.d3 {
                    solutions.push(Candidate { tb: tp, rot: rp });
                }
            }
        }
        let unique = solutions == [Candidate { tb: t, rot: r }];
        branches.push(RecoveryBranch { sign, solutions, unique });
    }
    let certified = n >= 3 && branches.iter().all(|b| b.unique);
    Ok(RecoveryReport { n, tb: t, rot: r, grid, branches, certified })
}

/// Runs [`check_characterizing`] for every realizable `(t, |r|)` with `t` in
/// the given range, in increasing `t` then `r`.
pub fn sweep(
    class: &KnotClass,
    tbs: std::ops::RangeInclusive<i64>,
    slope: &Rational,
    opts: PipelineOptions,
) -> Result<Vec<ObstructionReport>> {
    let mut out = Vec::new();
    for t in tbs {
        for r in class.rotations_at(t) {
            out.push(check_characterizing(class, t, r, slope, opts)?);
        }
    }
    Ok(out)
}
