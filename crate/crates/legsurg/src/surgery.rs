//! Rational contact surgery diagrams.
//!
//! A [`SurgeryDiagram`] is a list of Legendrian knots (given by a front or only
//! by their classical invariants) with contact surgery coefficients and the
//! symmetric matrix of pairwise linking numbers.  This module converts contact
//! coefficients to topological ones, builds the generalized linking matrix and
//! rewrites arbitrary coefficients as `±1` (or `±1/n`) surgeries on push-offs
//! and stabilizations.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_index, Error, Result};
use crate::front::LegendrianFront;
use crate::linalg::{IntMatrix, RatMatrix};
use crate::rational::{int, rat, rat_int, serde_rational, unit_fraction, Rational};

/// Where a surgery component comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Geometry {
    /// An explicit one-component front.
    Front(LegendrianFront),
    /// Only the classical data is known; the tag is a free-form label.
    Abstract { tag: String },
}

impl Geometry {
    pub fn abstract_tag(tag: impl Into<String>) -> Self {
        Geometry::Abstract { tag: tag.into() }
    }

    pub fn front(&self) -> Option<&LegendrianFront> {
        match self {
            Geometry::Front(f) => Some(f),
            Geometry::Abstract { .. } => None,
        }
    }
}

/// One Legendrian knot of a surgery diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryComponent {
    pub geometry: Geometry,
    pub tb: i64,
    /// Signed rotation number of the oriented knot.
    pub rot: i64,
    /// Contact surgery coefficient, measured against the contact framing.
    pub coeff: Rational,
}

#[derive(Serialize, Deserialize)]
struct AbstractTag {
    tag: String,
}

#[derive(Serialize, Deserialize)]
struct RawComponent {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    front: Option<LegendrianFront>,
    #[serde(rename = "abstract", skip_serializing_if = "Option::is_none", default)]
    abstract_: Option<AbstractTag>,
    tb: i64,
    rot: i64,
    #[serde(with = "serde_rational")]
    coeff: Rational,
}

impl Serialize for SurgeryComponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (front, abstract_) = match &self.geometry {
            Geometry::Front(f) => (Some(f.clone()), None),
            Geometry::Abstract { tag } => (None, Some(AbstractTag { tag: tag.clone() })),
        };
        RawComponent { front, abstract_, tb: self.tb, rot: self.rot, coeff: self.coeff.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SurgeryComponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawComponent::deserialize(d)?;
        let geometry = match (raw.front, raw.abstract_) {
            (Some(f), None) => Geometry::Front(f),
            (None, Some(a)) => Geometry::Abstract { tag: a.tag },
            (None, None) => Geometry::abstract_tag(""),
            (Some(_), Some(_)) => {
                return Err(serde::de::Error::custom("component has both a front and an abstract tag"))
            }
        };
        Ok(SurgeryComponent { geometry, tb: raw.tb, rot: raw.rot, coeff: raw.coeff })
    }
}

impl SurgeryComponent {
    /// A component known only by its classical invariants.
    pub fn abstract_knot(tag: &str, tb: i64, rot: i64, coeff: Rational) -> Self {
        SurgeryComponent { geometry: Geometry::abstract_tag(tag), tb, rot, coeff }
    }

    /// A component carrying a one-component front; `tb` and `rot` are read off it.
    pub fn from_front(front: LegendrianFront, coeff: Rational) -> Result<Self> {
        let inv = front.classical_invariants()?;
        Ok(SurgeryComponent { geometry: Geometry::Front(front), tb: inv.tb, rot: inv.rot_signed, coeff })
    }

    /// Topological surgery coefficient `coeff + tb` (Seifert framing).
    pub fn topological_coefficient(&self) -> Rational {
        &self.coeff + rat_int(self.tb)
    }

    /// `Some((sign, n))` when the contact coefficient is `±1/n`.
    pub fn unit_fraction(&self) -> Option<(i64, u64)> {
        unit_fraction(&self.coeff)
    }

    /// The same knot with a different coefficient.
    pub fn with_coeff(&self, coeff: Rational) -> Self {
        SurgeryComponent { coeff, ..self.clone() }
    }

    /// Stabilizes the knot once per entry of `signs` (`+1` raises the signed
    /// rotation number).  A front, when present, is stabilized as well.
    pub fn stabilized(&self, signs: &[i8]) -> Result<Self> {
        let geometry = match &self.geometry {
            Geometry::Front(f) => Geometry::Front(f.stabilize_many(0, signs)?),
            g => g.clone(),
        };
        let drot: i64 = signs.iter().map(|&s| i64::from(s.signum())).sum();
        Ok(SurgeryComponent {
            geometry,
            tb: self.tb - signs.len() as i64,
            rot: self.rot + drot,
            coeff: self.coeff.clone(),
        })
    }

    fn validate(&self, index: usize) -> Result<()> {
        if self.coeff.is_zero() {
            return Err(Error::ZeroCoefficient { component: index });
        }
        if let Geometry::Front(f) = &self.geometry {
            let inv = f.classical_invariants()?;
            if inv.tb != self.tb || inv.rot_signed != self.rot {
                return Err(Error::Schema(format!(
                    "component {index}: declared (tb, rot) = ({}, {}) but the front has ({}, {})",
                    self.tb, self.rot, inv.tb, inv.rot_signed
                )));
            }
        }
        Ok(())
    }
}

/// A contact surgery diagram in the standard contact 3-sphere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryDiagram {
    components: Vec<SurgeryComponent>,
    linking: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct RawDiagram {
    components: Vec<SurgeryComponent>,
    #[serde(default)]
    linking: Vec<Vec<i64>>,
}

impl<'de> Deserialize<'de> for SurgeryDiagram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawDiagram::deserialize(d)?;
        let linking = if raw.linking.is_empty() && raw.components.len() <= 1 {
            vec![vec![0; raw.components.len()]; raw.components.len()]
        } else {
            raw.linking
        };
        SurgeryDiagram::new(raw.components, linking).map_err(serde::de::Error::custom)
    }
}

/// The generalized linking matrix together with its symmetric rational form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedLinkingMatrix {
    /// `Q_ii = p_i`, `Q_ij = q_j · l_ij`.
    pub q: IntMatrix,
    /// Symmetric rational matrix `A_ii = p_i/q_i`, `A_ij = l_ij`; `Q = A · diag(q)`.
    pub a: RatMatrix,
    /// Topological coefficients `p_i/q_i`.
    pub topo_coeffs: Vec<Rational>,
}

impl SurgeryDiagram {
    /// Validates and builds a diagram.
    pub fn new(components: Vec<SurgeryComponent>, linking: Vec<Vec<i64>>) -> Result<Self> {
        let k = components.len();
        if linking.len() != k || linking.iter().any(|row| row.len() != k) {
            return Err(Error::Schema(format!("linking matrix must be {k} x {k}")));
        }
        for i in 0..k {
            if linking[i][i] != 0 {
                return Err(Error::Schema(format!("linking diagonal entry {i} must be 0")));
            }
            for j in 0..i {
                if linking[i][j] != linking[j][i] {
                    return Err(Error::Schema(format!("linking matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        for (i, c) in components.iter().enumerate() {
            c.validate(i)?;
        }
        Ok(SurgeryDiagram { components, linking })
    }

    /// Parses the JSON diagram schema.
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The empty diagram (no surgery: the standard 3-sphere).
    pub fn empty() -> Self {
        SurgeryDiagram { components: Vec::new(), linking: Vec::new() }
    }

    /// A one-component diagram.
    pub fn single(component: SurgeryComponent) -> Result<Self> {
        SurgeryDiagram::new(vec![component], vec![vec![0]])
    }

    /// Contact surgery on a knot given by its classical invariants.
    pub fn knot(tb: i64, rot: i64, coeff: Rational) -> Result<Self> {
        SurgeryDiagram::single(SurgeryComponent::abstract_knot("knot", tb, rot, coeff))
    }

    pub fn components(&self) -> &[SurgeryComponent] {
        &self.components
    }

    pub fn linking(&self) -> &[Vec<i64>] {
        &self.linking
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, i: usize) -> Result<&SurgeryComponent> {
        check_index(i, self.len())?;
        Ok(&self.components[i])
    }

    pub fn lk(&self, i: usize, j: usize) -> i64 {
        self.linking[i][j]
    }

    /// `true` when every coefficient is `±1/n`.
    pub fn has_unit_fractions(&self) -> bool {
        self.components.iter().all(|c| c.unit_fraction().is_some())
    }

    /// `true` when every coefficient is exactly `±1`.
    pub fn is_normal(&self) -> bool {
        self.components.iter().all(|c| c.coeff.abs().is_one())
    }

    /// Appends a component with the given linking numbers against the
    /// existing ones.
    pub fn push(&mut self, component: SurgeryComponent, row: &[i64]) -> Result<()> {
        if row.len() != self.len() {
            return Err(Error::Schema(format!("linking row has length {}, expected {}", row.len(), self.len())));
        }
        component.validate(self.len())?;
        for (r, &l) in self.linking.iter_mut().zip(row) {
            r.push(l);
        }
        let mut new_row = row.to_vec();
        new_row.push(0);
        self.linking.push(new_row);
        self.components.push(component);
        Ok(())
    }

    /// Removes the listed components (any order, no duplicates).
    pub fn remove(&self, indices: &[usize]) -> Result<Self> {
        for &i in indices {
            check_index(i, self.len())?;
        }
        let keep: Vec<usize> = (0..self.len()).filter(|i| !indices.contains(i)).collect();
        Ok(self.select(&keep))
    }

    /// The sub-diagram on the given component indices, in that order.
    pub fn select(&self, keep: &[usize]) -> Self {
        SurgeryDiagram {
            components: keep.iter().map(|&i| self.components[i].clone()).collect(),
            linking: keep.iter().map(|&i| keep.iter().map(|&j| self.linking[i][j]).collect()).collect(),
        }
    }

    /// Replaces component `i` (same linking data); the new component is validated.
    pub fn replace(&self, i: usize, component: SurgeryComponent) -> Result<Self> {
        check_index(i, self.len())?;
        component.validate(i)?;
        let mut d = self.clone();
        d.components[i] = component;
        Ok(d)
    }

    /// Reverses the orientation of component `i`: its rotation number and its
    /// linking numbers change sign.
    pub fn reverse(&self, i: usize) -> Result<Self> {
        check_index(i, self.len())?;
        let mut d = self.clone();
        let c = &mut d.components[i];
        c.rot = -c.rot;
        if let Geometry::Front(f) = &c.geometry {
            c.geometry = Geometry::Front(f.reversed(0)?);
        }
        for j in 0..d.len() {
            d.linking[i][j] = -d.linking[i][j];
            d.linking[j][i] = -d.linking[j][i];
        }
        Ok(d)
    }

    /// Disjoint union (split link); components of `other` are appended.
    pub fn split_union(&self, other: &SurgeryDiagram) -> Self {
        let k = self.len();
        let m = other.len();
        let mut linking = vec![vec![0; k + m]; k + m];
        for i in 0..k {
            linking[i][..k].copy_from_slice(&self.linking[i]);
        }
        for i in 0..m {
            linking[k + i][k..].copy_from_slice(&other.linking[i]);
        }
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        SurgeryDiagram { components, linking }
    }

    pub(crate) fn set_linking(&mut self, i: usize, j: usize, l: i64) {
        self.linking[i][j] = l;
        self.linking[j][i] = l;
    }

    pub(crate) fn component_mut(&mut self, i: usize) -> &mut SurgeryComponent {
        &mut self.components[i]
    }

    /// Topological coefficients `p_i/q_i`.
    pub fn topological_coefficients(&self) -> Vec<Rational> {
        self.components.iter().map(SurgeryComponent::topological_coefficient).collect()
    }

    /// The generalized linking matrix `Q` and its symmetric form `A`.
    pub fn generalized_linking_matrix(&self) -> Result<GeneralizedLinkingMatrix> {
        for (i, c) in self.components.iter().enumerate() {
            if c.coeff.is_zero() {
                return Err(Error::ZeroCoefficient { component: i });
            }
        }
        let topo = self.topological_coefficients();
        let k = self.len();
        let mut q = vec![vec![int(0); k]; k];
        let mut a = vec![vec![Rational::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    q[i][i] = topo[i].numer().clone();
                    a[i][i] = topo[i].clone();
                } else {
                    q[i][j] = topo[j].denom() * int(self.linking[i][j]);
                    a[i][j] = rat_int(self.linking[i][j]);
                }
            }
        }
        Ok(GeneralizedLinkingMatrix { q, a, topo_coeffs: topo })
    }

    /// Replaces component `i`, whose coefficient must be `±1/n`, by `n`
    /// Legendrian push-offs with coefficient `±1`.  The copies are inserted at
    /// positions `i..i+n`, link each other `tb` times and link every other
    /// component like the original.
    pub fn pushoff_expand(&self, i: usize) -> Result<Self> {
        let c = self.component(i)?;
        let (sign, n) =
            c.unit_fraction().ok_or_else(|| Error::BadCoefficient(i, crate::rational::format_rational(&c.coeff)))?;
        let n = n as usize;
        let piece = c.with_coeff(rat_int(sign));
        let pieces = vec![Piece { component: piece }; n];
        Ok(self.splice(i, pieces))
    }

    /// Expands every `±1/n` component into push-offs; the result has only
    /// `±1` coefficients.  Fails with `BadCoefficient` on other coefficients.
    pub fn expand_unit_fractions(&self) -> Result<Self> {
        let mut d = self.clone();
        let mut i = 0;
        while i < d.len() {
            let (_, n) = d.components[i]
                .unit_fraction()
                .ok_or_else(|| Error::BadCoefficient(i, crate::rational::format_rational(&d.components[i].coeff)))?;
            d = d.pushoff_expand(i)?;
            i += n as usize;
        }
        Ok(d)
    }

    /// Replaces component `at` by a chain of pieces.  Pieces link each other
    /// with the `tb` of the earlier piece and inherit the external linking of
    /// the replaced component.
    fn splice(&self, at: usize, pieces: Vec<Piece>) -> Self {
        let mut comps: Vec<SurgeryComponent> = Vec::new();
        let mut origin: Vec<Option<usize>> = Vec::new();
        for (j, c) in self.components.iter().enumerate() {
            if j == at {
                for (p, piece) in pieces.iter().enumerate() {
                    comps.push(piece.component.clone());
                    origin.push(Some(p));
                }
            } else {
                comps.push(c.clone());
                origin.push(None);
            }
        }
        let orig_index = |pos: usize| -> usize {
            // Position in the new list → index in the old list.
            if pos < at {
                pos
            } else if pos < at + pieces.len() {
                at
            } else {
                pos + 1 - pieces.len()
            }
        };
        let m = comps.len();
        let mut linking = vec![vec![0; m]; m];
        for x in 0..m {
            for y in 0..m {
                if x == y {
                    continue;
                }
                linking[x][y] = match (origin[x], origin[y]) {
                    (Some(p), Some(q)) => pieces[p.min(q)].component.tb,
                    _ => self.linking[orig_index(x)][orig_index(y)],
                };
            }
        }
        SurgeryDiagram { components: comps, linking }
    }

    /// All normal forms of the diagram (one per branch of stabilization signs).
    pub fn normalize(&self, style: NormalStyle) -> Result<Vec<NormalForm>> {
        let plans = (0..self.len())
            .map(|i| {
                let c = &self.components[i];
                if c.coeff.is_zero() {
                    return Err(Error::ZeroCoefficient { component: i });
                }
                Ok(coefficient_plan(&c.coeff, style))
            })
            .collect::<Result<Vec<_>>>()?;
        // Every stabilized slot contributes (s + 1) choices for its number of
        // positive stabilizations.
        let slots: Vec<u64> = plans.iter().flat_map(|p| p.iter().map(|s| s.stabilizations)).collect();
        let mut out = Vec::new();
        let mut choice = vec![0u64; slots.len()];
        loop {
            out.push(self.realize(&plans, &choice)?);
            // Lexicographic increment of the mixed-radix counter, last slot fastest.
            let mut pos = slots.len();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                if choice[pos] < slots[pos] {
                    choice[pos] += 1;
                    for c in &mut choice[pos + 1..] {
                        *c = 0;
                    }
                    break;
                }
            }
        }
    }

    /// Number of normal forms, without building them.
    pub fn branch_count(&self) -> Result<u64> {
        let mut count = 1u64;
        for (i, c) in self.components.iter().enumerate() {
            if c.coeff.is_zero() {
                return Err(Error::ZeroCoefficient { component: i });
            }
            for slot in coefficient_plan(&c.coeff, NormalStyle::Compact) {
                count = count.saturating_mul(slot.stabilizations + 1);
            }
        }
        Ok(count)
    }

    fn realize(&self, plans: &[Vec<Slot>], choice: &[u64]) -> Result<NormalForm> {
        let mut d = self.clone();
        let mut origin: Vec<usize> = (0..self.len()).collect();
        let mut next_choice = 0;
        // Splice from the last component so earlier indices stay valid.
        let mut spliced: Vec<(usize, Vec<Piece>)> = Vec::new();
        for (i, plan) in plans.iter().enumerate() {
            let mut current = self.components[i].clone();
            let mut pieces = Vec::new();
            for slot in plan {
                let k = choice[next_choice];
                next_choice += 1;
                let mut signs = vec![1i8; k as usize];
                signs.extend(std::iter::repeat_n(-1i8, (slot.stabilizations - k) as usize));
                current = current.stabilized(&signs)?;
                pieces.push(Piece { component: current.with_coeff(slot.coeff.clone()) });
            }
            spliced.push((i, pieces));
        }
        for (i, pieces) in spliced.into_iter().rev() {
            let len = pieces.len();
            d = d.splice(i, pieces);
            origin.splice(i..=i, std::iter::repeat_n(i, len));
        }
        Ok(NormalForm { diagram: d, branch: choice.to_vec(), origin })
    }
}

/// How aggressively [`SurgeryDiagram::normalize`] expands coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalStyle {
    /// Every coefficient becomes exactly `±1`.
    Expanded,
    /// Runs of unstabilized push-offs are kept as single `±1/m` components.
    Compact,
}

/// One branch of a normalized diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub diagram: SurgeryDiagram,
    /// Number of positive stabilizations chosen at each stabilized slot.
    pub branch: Vec<u64>,
    /// For each component of `diagram`, the original component it came from.
    pub origin: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Piece {
    component: SurgeryComponent,
}

/// One piece of the replacement of a single coefficient: stabilize the
/// previous piece `stabilizations` times, push it off and do surgery with
/// `coeff`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Slot {
    pub stabilizations: u64,
    pub coeff: Rational,
}

/// Continued fraction `x = b_0 − 1/(b_1 − 1/(…))` with all `b_i ≥ 2`, for a
/// rational `x > 1`.
pub fn negative_continued_fraction(x: &Rational) -> Vec<i64> {
    let mut out = Vec::new();
    let mut x = x.clone();
    loop {
        let b = x.ceil();
        let bi = b.to_integer().to_i64().expect("continued fraction entry fits in i64");
        out.push(bi);
        let rest = &b - &x;
        if rest.is_zero() {
            return out;
        }
        x = rest.recip();
    }
}

/// The replacement recipe of one contact coefficient.
///
/// * `±1/n`: one slot (`Compact`) or `n` slots of `±1` (`Expanded`);
/// * other `r > 0`: `(+1)` push-offs while `r ↦ r/(1 − r)` stays positive;
/// * `r < 0`: the chain from `1 − r = b_0 − 1/(b_1 − …)`, slot `i` carrying
///   `b_i − 2` stabilizations and coefficient `−1`.
pub(crate) fn coefficient_plan(r: &Rational, style: NormalStyle) -> Vec<Slot> {
    let unit = |sign: i64, n: u64| -> Vec<Slot> {
        match style {
            NormalStyle::Compact => vec![Slot { stabilizations: 0, coeff: rat(sign, n as i64) }],
            NormalStyle::Expanded => vec![Slot { stabilizations: 0, coeff: rat_int(sign) }; n as usize],
        }
    };
    if let Some((sign, n)) = unit_fraction(r) {
        return unit(sign, n);
    }
    let mut slots = Vec::new();
    let mut r = r.clone();
    let mut plus = 0u64;
    while r.is_positive() {
        if let Some((1, n)) = unit_fraction(&r) {
            plus += n;
            return merge_plus(plus, style).into_iter().chain(slots).collect();
        }
        plus += 1;
        r = &r / (Rational::one() - &r);
    }
    slots.extend(merge_plus(plus, style));
    let chain = negative_continued_fraction(&(Rational::one() - &r));
    let mut chain_slots: Vec<Slot> = Vec::new();
    for b in chain {
        let s = (b - 2) as u64;
        match (style, chain_slots.last_mut()) {
            (NormalStyle::Compact, Some(last)) if s == 0 => {
                // An unstabilized push-off with coefficient −1 extends a −1/m run.
                let m = last.coeff.denom().clone() + int(1);
                last.coeff = Rational::new(int(-1), m);
            }
            _ => chain_slots.push(Slot { stabilizations: s, coeff: rat_int(-1) }),
        }
    }
    slots.extend(chain_slots);
    slots
}

fn merge_plus(plus: u64, style: NormalStyle) -> Vec<Slot> {
    if plus == 0 {
        return Vec::new();
    }
    match style {
        NormalStyle::Compact => vec![Slot { stabilizations: 0, coeff: rat(1, plus as i64) }],
        NormalStyle::Expanded => vec![Slot { stabilizations: 0, coeff: rat_int(1) }; plus as usize],
    }
}
