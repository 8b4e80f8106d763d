//! Homological and homotopical invariants of surgered contact manifolds.
//!
//! For contact `(±1/n_i)`-surgery on an oriented Legendrian link with
//! generalized linking matrix `Q`:
//!
//! * `H_1` is presented by the meridians `μ_i` subject to the rows of `Qᵀ`;
//! * the Poincaré dual of the Euler class is `Σ n_i · rot_i · ν_i`, where `ν_i`
//!   is the meridian of a single push-off in the `(±1)`-expansion of `L_i`.
//!   Those `n_i` push-off meridians are homologous and add up to `μ_i`, so
//!   in the `Qᵀ` presentation the class is `Σ rot_i · μ_i` (the `ν_i` satisfy
//!   the rows of `Q` instead);
//! * the Euler class is torsion iff `Q b = rot` has a rational solution, and then
//!   `d3 = ¼ (Σ n_i b_i rot_i + (3 − n_i) sign_i) − ¾ σ`, where `σ` is the
//!   signature of the symmetric matrix `A` with `Q = A · diag(q)`.
//!
//! Diagrams with other coefficients are first normalized; the Euler class and
//! `d3` then become multisets over the branches.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{signature, smith_normal_form, solve_rational, transpose, IntMatrix, Smith};
use crate::rational::{format_rational, int, rat, rat_int, to_i64, Int, Rational};
use crate::surgery::{NormalStyle, SurgeryDiagram};

/// `H_1` of a surgered manifold as the cokernel of an integer relation matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyPresentation {
    /// Relations, one per row, in the meridian generators (`= Qᵀ`).
    pub relations: IntMatrix,
    /// `U · relations · V = D`.
    pub smith: Smith,
    /// Diagonal of `D`: `H_1 ≅ ⊕ Z/d_i` (`d_i = 0` contributes `Z`).
    pub invariant_factors: Vec<Int>,
}

impl HomologyPresentation {
    /// Presentation of the cokernel of a square relation matrix.
    pub fn from_relations(relations: IntMatrix) -> Self {
        let smith = smith_normal_form(&relations);
        let invariant_factors = smith.diagonal();
        HomologyPresentation { relations, smith, invariant_factors }
    }

    /// Invariant factors different from 1, in divisibility order; `0` stands for `Z`.
    pub fn factors(&self) -> Vec<Int> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    /// Number of `Z` summands.
    pub fn betti(&self) -> usize {
        self.invariant_factors.iter().filter(|d| d.is_zero()).count()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<Int> {
        if self.betti() > 0 {
            None
        } else {
            Some(self.invariant_factors.iter().fold(int(1), |acc, d| acc * d))
        }
    }

    /// Coordinates of `Σ x_i μ_i` along the non-trivial cyclic summands,
    /// reduced modulo their orders.
    pub fn coordinates(&self, x: &[Int]) -> Vec<Int> {
        let k = self.invariant_factors.len();
        let mut out = Vec::new();
        for i in 0..k {
            let d = &self.invariant_factors[i];
            if d.is_one() {
                continue;
            }
            let y: Int = (0..x.len()).map(|j| &x[j] * &self.smith.v[j][i]).sum();
            out.push(if d.is_zero() { y } else { y.mod_floor(d) });
        }
        out
    }

    /// Order of the class of `Σ x_i μ_i`; `None` when it has infinite order.
    pub fn element_order(&self, x: &[Int]) -> Option<Int> {
        let coords = self.coordinates(x);
        let mut order = int(1);
        for (c, d) in coords.iter().zip(self.factors()) {
            if d.is_zero() {
                if !c.is_zero() {
                    return None;
                }
            } else {
                order = order.lcm(&(&d / c.gcd(&d)));
            }
        }
        Some(order)
    }

    /// An invariant of the class of `Σ x_i μ_i` under automorphisms of `H_1`:
    /// its order together with the invariant factors of the quotient by it.
    pub fn orbit(&self, x: &[Int]) -> EulerOrbit {
        let mut m = self.relations.clone();
        m.push(x.to_vec());
        // With one extra row the diagonal still has one entry per generator.
        let quotient = smith_normal_form(&m).diagonal().into_iter().filter(|d| !d.is_one()).collect();
        EulerOrbit { order: self.element_order(x), quotient }
    }
}

/// Automorphism-invariant data of an element of `H_1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EulerOrbit {
    /// Order of the element (`None`: infinite order).
    pub order: Option<Int>,
    /// Non-trivial invariant factors of `H_1 / ⟨e⟩`.
    pub quotient: Vec<Int>,
}

/// A `d3`-invariant value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum D3Value {
    Value(Rational),
    /// The Euler class is not torsion, so `d3` is undefined.
    NonTorsion,
}

impl fmt::Display for D3Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            D3Value::Value(r) => f.write_str(&format_rational(r)),
            D3Value::NonTorsion => f.write_str("nontorsion"),
        }
    }
}

impl Serialize for D3Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl D3Value {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            D3Value::Value(r) => Some(r),
            D3Value::NonTorsion => None,
        }
    }
}

/// Invariants of one contact structure (one branch of a normalization).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchInvariants {
    /// Coefficients of the Poincaré dual of the Euler class in the meridians `μ_i`.
    pub euler_vector: Vec<Int>,
    /// The same class in Smith coordinates of the branch's presentation.
    pub euler: Vec<Int>,
    pub orbit: EulerOrbit,
    pub d3: D3Value,
}

/// Invariants of all contact structures described by a diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    /// `H_1` from the diagram's own generalized linking matrix.
    pub homology: HomologyPresentation,
    /// One entry per branch; Euler coordinates refer to `branch_homology`.
    pub branches: Vec<BranchInvariants>,
    /// Presentation in which branch Euler coordinates are expressed.
    pub branch_homology: HomologyPresentation,
}

/// Presentation-independent comparison key of a diagram's invariants.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InvariantSummary {
    /// Non-trivial invariant factors of `H_1` (`0` = `Z`).
    pub h1: Vec<Int>,
    /// Sorted multiset of Euler-class orbits.
    pub euler: Vec<EulerOrbit>,
    /// Sorted multiset of `d3` values.
    pub d3: Vec<D3Value>,
}

/// First homology of the surgered manifold, presented by `Qᵀ`.
pub fn first_homology(diagram: &SurgeryDiagram) -> Result<HomologyPresentation> {
    let g = diagram.generalized_linking_matrix()?;
    Ok(HomologyPresentation::from_relations(transpose(&g.q)))
}

/// Evaluates the Euler class and `d3` of a diagram whose coefficients are all
/// `±1/n`, directly from the generalized linking matrix.
pub fn unit_fraction_invariants(diagram: &SurgeryDiagram) -> Result<(HomologyPresentation, BranchInvariants)> {
    let g = diagram.generalized_linking_matrix()?;
    let homology = HomologyPresentation::from_relations(transpose(&g.q));
    let mut ns = Vec::with_capacity(diagram.len());
    for (i, c) in diagram.components().iter().enumerate() {
        let (sign, n) = c.unit_fraction().ok_or_else(|| Error::BadCoefficient(i, format_rational(&c.coeff)))?;
        ns.push((sign, n as i64));
    }
    let rot: Vec<i64> = diagram.components().iter().map(|c| c.rot).collect();
    // n_i · rot_i · ν_i = rot_i · μ_i, see the module documentation.
    let euler_vector: Vec<Int> = rot.iter().map(|&r| int(r)).collect();
    let euler = homology.coordinates(&euler_vector);
    let orbit = homology.orbit(&euler_vector);

    let q_rat: Vec<Vec<Rational>> =
        g.q.iter().map(|row| row.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let rot_rat: Vec<Rational> = rot.iter().map(|&r| rat_int(r)).collect();
    let d3 = match solve_rational(&q_rat, &rot_rat) {
        None => D3Value::NonTorsion,
        Some(b) => {
            let mut sum = Rational::zero();
            for (i, &(sign, n)) in ns.iter().enumerate() {
                sum += &b[i] * rat_int(n * rot[i]);
                sum += rat_int((3 - n) * sign);
            }
            let sigma = signature(&g.a);
            D3Value::Value(sum / rat_int(4) - rat(3 * sigma, 4))
        }
    };
    Ok((homology, BranchInvariants { euler_vector, euler, orbit, d3 }))
}

/// Euler classes and `d3` values of every contact structure in the diagram's
/// surgery set.  Diagrams with coefficients other than `±1/n` are normalized
/// first (compact style).
pub fn evaluate(diagram: &SurgeryDiagram) -> Result<Evaluation> {
    let homology = first_homology(diagram)?;
    if diagram.has_unit_fractions() {
        let (h, branch) = unit_fraction_invariants(diagram)?;
        return Ok(Evaluation { homology, branches: vec![branch], branch_homology: h });
    }
    let forms = diagram.normalize(NormalStyle::Compact)?;
    let mut branches = Vec::with_capacity(forms.len());
    let mut branch_homology = None;
    for form in &forms {
        let (h, b) = unit_fraction_invariants(&form.diagram)?;
        branch_homology.get_or_insert(h);
        branches.push(b);
    }
    let branch_homology = branch_homology.expect("normalization yields at least one branch");
    Ok(Evaluation { homology, branches, branch_homology })
}

/// Euler classes (Smith coordinates) of all branches.
pub fn euler_class(diagram: &SurgeryDiagram) -> Result<Vec<Vec<Int>>> {
    Ok(evaluate(diagram)?.branches.into_iter().map(|b| b.euler).collect())
}

/// `d3` values of all branches, in branch order.
pub fn d3(diagram: &SurgeryDiagram) -> Result<Vec<D3Value>> {
    Ok(evaluate(diagram)?.branches.into_iter().map(|b| b.d3).collect())
}

impl Evaluation {
    pub fn summary(&self) -> InvariantSummary {
        let mut euler: Vec<EulerOrbit> = self.branches.iter().map(|b| b.orbit.clone()).collect();
        euler.sort();
        let mut d3: Vec<D3Value> = self.branches.iter().map(|b| b.d3.clone()).collect();
        d3.sort();
        InvariantSummary { h1: self.homology.factors(), euler, d3 }
    }

    /// The serializable report of this evaluation.
    pub fn report(&self) -> Result<Report> {
        let h1 = self.homology.factors().iter().map(to_i64).collect::<Result<_>>()?;
        let euler = self
            .branches
            .iter()
            .map(|b| b.euler.iter().map(to_i64).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let d3 = self.branches.iter().map(|b| b.d3.clone()).collect();
        Ok(Report { h1, euler, d3 })
    }
}

/// Presentation-independent invariants of a diagram.
pub fn summary(diagram: &SurgeryDiagram) -> Result<InvariantSummary> {
    Ok(evaluate(diagram)?.summary())
}

/// JSON report: `{"h1": [...], "euler": [[...], ...], "d3": ["p/q" | "nontorsion", ...]}`.
///
/// `h1` lists the non-trivial invariant factors (`0` meaning `Z`); `euler`
/// gives each branch's class in Smith coordinates of the normalized
/// presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub h1: Vec<i64>,
    pub euler: Vec<Vec<i64>>,
    pub d3: Vec<D3Value>,
}

/// Intersection form `(tb − 1)` of the Stein trace of a Legendrian knot.
pub fn trace_intersection_form(tb: i64) -> [[i64; 1]; 1] {
    [[tb - 1]]
}

/// Intersection form of the 4-manifold obtained from a Stein trace by
/// attaching a second handle along the image of a meridian (contact framing
/// `+1`) and the knot `L′`:
/// `[[tb_mu_image + 1, lk], [lk, tb_lprime − 1]]`, with the flag telling
/// whether the form is odd (some diagonal entry odd).
pub fn trace_double_parity(tb_mu_image: i64, lk: i64, tb_lprime: i64) -> ([[i64; 2]; 2], bool) {
    let m = [[tb_mu_image + 1, lk], [lk, tb_lprime - 1]];
    let odd = m[0][0] % 2 != 0 || m[1][1] % 2 != 0;
    (m, odd)
}

/// Rational `d3` helper used by callers that need a number: fails on `NonTorsion`.
pub fn d3_value(v: &D3Value) -> Result<Rational> {
    v.value().cloned().ok_or_else(|| Error::Computation("Euler class is not torsion; d3 undefined".into()))
}

/// `true` when the element has finite order.
pub fn is_torsion(orbit: &EulerOrbit) -> bool {
    orbit.order.is_some()
}
