//! Laurent polynomials and the skein-polynomial engine over PD codes.
//!
//! HOMFLY uses the normalization `l·P(L₊) + l⁻¹·P(L₋) + m·P(L₀) = 0` with the
//! unknot normalized to `1`; Conway uses `P(L₊) − P(L₋) = z·P(L₀)`.  Both run
//! through one descending-diagram recursion: components are traversed from
//! canonical base points, and the first crossing met from below is switched,
//! spawning the smoothed diagram as a memoized sub-problem.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Int;

/// Default crossing limit for the skein engine.
pub const DEFAULT_CROSSING_LIMIT: usize = 20;

// ---------------------------------------------------------------------------
// Laurent polynomials
// ---------------------------------------------------------------------------

/// Multivariate Laurent polynomial with integer coefficients.
///
/// Terms are stored in a sorted map from exponent vectors to non-zero
/// coefficients, so structural equality is mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<i64>, Int>,
}

/// One term of a serialized polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exponents: BTreeMap<String, i64>,
    pub coeff: Int,
}

impl LaurentPoly {
    /// The zero polynomial in the given variables.
    pub fn zero(vars: &[&str]) -> Self {
        LaurentPoly { vars: vars.iter().map(|v| v.to_string()).collect(), terms: BTreeMap::new() }
    }

    /// The constant `c`.
    pub fn constant(vars: &[&str], c: i64) -> Self {
        Self::monomial(vars, &vec![0; vars.len()], c)
    }

    /// The constant `1`.
    pub fn one(vars: &[&str]) -> Self {
        Self::constant(vars, 1)
    }

    /// `c · x^exps`.
    pub fn monomial(vars: &[&str], exps: &[i64], c: i64) -> Self {
        Self::from_terms(vars, &[(exps.to_vec(), c)])
    }

    /// `x_index^exp`.
    pub fn var(vars: &[&str], index: usize, exp: i64) -> Self {
        let mut e = vec![0; vars.len()];
        e[index] = exp;
        Self::monomial(vars, &e, 1)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms(vars: &[&str], terms: &[(Vec<i64>, i64)]) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length mismatch");
            p.add_term(e.clone(), Int::from(*c));
        }
        p
    }

    fn add_term(&mut self, e: Vec<i64>, c: Int) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Int::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Variable names.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// `true` for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of non-zero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// `true` if there are no terms (same as [`is_zero`](Self::is_zero)).
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates over `(exponents, coefficient)` in ascending exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &Int)> {
        self.terms.iter()
    }

    /// Coefficient of `x^exps` (zero when absent).
    pub fn coeff(&self, exps: &[i64]) -> Int {
        self.terms.get(exps).cloned().unwrap_or_else(Int::zero)
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "polynomials over different variables");
    }

    /// Multiplies by an integer scalar.
    pub fn scale(&self, c: &Int) -> Self {
        let mut p = Self { vars: self.vars.clone(), terms: BTreeMap::new() };
        if c.is_zero() {
            return p;
        }
        for (e, v) in &self.terms {
            p.terms.insert(e.clone(), v * c);
        }
        p
    }

    /// Non-negative integer power.
    pub fn pow(&self, k: u32) -> Self {
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let mut acc = Self::one(&vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Renames variables, keeping exponents.
    pub fn rename(&self, vars: &[&str]) -> Self {
        assert_eq!(vars.len(), self.vars.len());
        Self { vars: vars.iter().map(|v| v.to_string()).collect(), terms: self.terms.clone() }
    }

    /// Sorted term list `[{"l": e1, "m": e2, "c": coeff}, ...]` for JSON output.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut obj = serde_json::Map::new();
                for (name, exp) in self.vars.iter().zip(e) {
                    obj.insert(name.clone(), serde_json::Value::from(*exp));
                }
                let c_json = match i64::try_from(c) {
                    Ok(v) => serde_json::Value::from(v),
                    Err(_) => serde_json::Value::from(c.to_string()),
                };
                obj.insert("c".to_string(), c_json);
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(terms)
    }

    /// Structured term list.
    pub fn terms(&self) -> Vec<Term> {
        self.terms
            .iter()
            .map(|(e, c)| Term {
                exponents: self.vars.iter().cloned().zip(e.iter().copied()).collect(),
                coeff: c.clone(),
            })
            .collect()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest exponents first reads most naturally.
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let monomial: Vec<String> = self
                .vars
                .iter()
                .zip(e)
                .filter(|(_, &x)| x != 0)
                .map(|(v, &x)| if x == 1 { v.clone() } else { format!("{v}^{x}") })
                .collect();
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            if monomial.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{abs}*{}", monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check_vars(rhs);
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl std::ops::Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Int::one())
    }
}

impl std::ops::Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check_vars(rhs);
        let mut p = LaurentPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                // Exponents add when monomials multiply.
                #[allow(clippy::suspicious_arithmetic_impl)]
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }
}

// ---------------------------------------------------------------------------
// PD codes
// ---------------------------------------------------------------------------

/// Planar-diagram code.  Each crossing lists four arc labels counterclockwise
/// starting from the incoming under-strand; `unknots` counts additional
/// crossingless, unlinked circles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PdCode {
    pub crossings: Vec<[u32; 4]>,
    #[serde(default)]
    pub unknots: u32,
}

impl PdCode {
    /// The crossingless unknot token.
    pub fn unknot() -> Self {
        PdCode { crossings: Vec::new(), unknots: 1 }
    }

    /// Builds a PD code with no extra circles.
    pub fn new(crossings: Vec<[u32; 4]>) -> Self {
        PdCode { crossings, unknots: 0 }
    }

    /// Checks label multiplicities and orientation consistency; returns the
    /// number of link components.
    pub fn validate(&self) -> Result<usize> {
        let d = Diagram { x: self.crossings.clone(), loops: self.unknots };
        let o = d.orient()?;
        let total = o.components.len() + self.unknots as usize;
        if total == 0 {
            return Err(Error::Schema("PD code describes the empty link".into()));
        }
        Ok(total)
    }

    /// Crossing signs (`+1` / `−1`) under the orientation implied by the code.
    pub fn signs(&self) -> Result<Vec<i8>> {
        let d = Diagram { x: self.crossings.clone(), loops: self.unknots };
        let o = d.orient()?;
        Ok((0..d.x.len()).map(|c| o.sign(&d, c)).collect())
    }

    /// Writhe of the diagram.
    pub fn writhe(&self) -> Result<i64> {
        Ok(self.signs()?.iter().map(|&s| s as i64).sum())
    }

    /// The mirror image (every crossing switched).
    pub fn mirror(&self) -> Result<Self> {
        let d = Diagram { x: self.crossings.clone(), loops: self.unknots };
        let o = d.orient()?;
        let x = (0..d.x.len()).map(|c| switched(d.x[c], o.sign(&d, c))).collect();
        Ok(PdCode { crossings: x, unknots: self.unknots })
    }
}

/// Relabeling-invariant canonical form of a PD code.
pub fn canonical_pd(pd: &PdCode) -> Result<PdCode> {
    let d = Diagram { x: pd.crossings.clone(), loops: pd.unknots };
    d.orient()?;
    let pieces = d.split_pieces();
    let mut forms: Vec<Vec<[u32; 4]>> = pieces.iter().map(|p| p.canonical_crossings()).collect();
    forms.sort();
    let mut out = Vec::new();
    let mut offset = 0u32;
    for f in forms {
        let n = 2 * f.len() as u32;
        out.extend(f.into_iter().map(|c| c.map(|a| a + offset)));
        offset += n;
    }
    Ok(PdCode { crossings: out, unknots: pd.unknots })
}

/// Switches a crossing of the given sign, keeping the PD convention.
fn switched(c: [u32; 4], sign: i8) -> [u32; 4] {
    if sign > 0 {
        [c[3], c[0], c[1], c[2]]
    } else {
        [c[1], c[2], c[3], c[0]]
    }
}

/// Working diagram: crossings plus free circles.
#[derive(Debug, Clone)]
struct Diagram {
    x: Vec<[u32; 4]>,
    loops: u32,
}

/// Orientation data of a diagram: for each arc label, the slot where it ends
/// (its head) and where it starts (its tail), plus components as arc cycles.
struct Orientation {
    head: HashMap<u32, (usize, usize)>,
    tail: HashMap<u32, (usize, usize)>,
    components: Vec<Vec<u32>>,
}

impl Orientation {
    fn sign(&self, d: &Diagram, c: usize) -> i8 {
        // Positive iff the over-strand enters at slot 3.
        if self.head.get(&d.x[c][3]) == Some(&(c, 3)) {
            1
        } else {
            -1
        }
    }
}

impl Diagram {
    fn occurrences(&self) -> Result<HashMap<u32, Vec<(usize, usize)>>> {
        let mut occ: HashMap<u32, Vec<(usize, usize)>> = HashMap::new();
        for (c, x) in self.x.iter().enumerate() {
            for (p, &a) in x.iter().enumerate() {
                occ.entry(a).or_default().push((c, p));
            }
        }
        if let Some((a, v)) = occ.iter().find(|(_, v)| v.len() != 2) {
            return Err(Error::Schema(format!("arc label {a} appears {} times", v.len())));
        }
        Ok(occ)
    }

    /// Determines arc directions.  Components that never pass under are
    /// oriented arbitrarily (they are split unknots, so this is harmless).
    fn orient(&self) -> Result<Orientation> {
        let occ = self.occurrences()?;
        let mut head: HashMap<u32, (usize, usize)> = HashMap::new();
        let mut tail: HashMap<u32, (usize, usize)> = HashMap::new();
        let mut components = Vec::new();
        let mut labels: Vec<u32> = occ.keys().copied().collect();
        labels.sort_unstable();
        // Seed with arcs entering an under slot, then the rest.
        let mut seeds: Vec<(u32, (usize, usize))> = Vec::new();
        for &a in &labels {
            for &(c, p) in &occ[&a] {
                if p == 0 {
                    seeds.push((a, (c, p)));
                }
            }
        }
        for &a in &labels {
            seeds.push((a, occ[&a][0]));
        }
        for (start, start_head) in seeds {
            if head.contains_key(&start) {
                continue;
            }
            let mut comp = Vec::new();
            let mut arc = start;
            let mut h = start_head;
            loop {
                let other = occ[&arc].iter().copied().find(|&s| s != h).unwrap_or(h);
                if head.insert(arc, h).is_some() {
                    return Err(Error::Schema(format!("inconsistent orientation at arc {arc}")));
                }
                tail.insert(arc, other);
                comp.push(arc);
                let (c, p) = h;
                let next_slot = (c, (p + 2) % 4);
                let next = self.x[c][next_slot.1];
                // The next arc leaves through `next_slot`; its head is the other slot.
                let next_head = occ[&next].iter().copied().find(|&s| s != next_slot);
                let next_head = match next_head {
                    Some(s) => s,
                    // Both occurrences at one slot cannot happen; a label used twice
                    // in the same slot pair (kink) still has two distinct slots.
                    None => next_slot,
                };
                if next == start {
                    if next_head != start_head {
                        return Err(Error::Schema(format!("PD code is not consistently oriented along arc {start}")));
                    }
                    break;
                }
                if head.contains_key(&next) {
                    return Err(Error::Schema(format!("inconsistent orientation at arc {next}")));
                }
                arc = next;
                h = next_head;
            }
            components.push(comp);
        }
        // Under-strands must enter at slot 0 and leave at slot 2.
        for (c, x) in self.x.iter().enumerate() {
            if head.get(&x[0]) != Some(&(c, 0)) || tail.get(&x[2]) != Some(&(c, 2)) {
                return Err(Error::Schema(format!(
                    "crossing {c} is not consistently oriented (slot 0 must be the incoming under-strand)"
                )));
            }
        }
        Ok(Orientation { head, tail, components })
    }

    /// Splits into diagrammatically connected pieces (each with `loops = 0`).
    fn split_pieces(&self) -> Vec<Diagram> {
        let n = self.x.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            let mut j = i;
            while p[j] != r {
                let nx = p[j];
                p[j] = r;
                j = nx;
            }
            r
        }
        let mut first: HashMap<u32, usize> = HashMap::new();
        for (c, x) in self.x.iter().enumerate() {
            for &a in x {
                if let Some(&o) = first.get(&a) {
                    let (ra, rb) = (find(&mut parent, o), find(&mut parent, c));
                    parent[ra] = rb;
                } else {
                    first.insert(a, c);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<[u32; 4]>> = BTreeMap::new();
        for c in 0..n {
            let r = find(&mut parent, c);
            groups.entry(r).or_default().push(self.x[c]);
        }
        groups.into_values().map(|x| Diagram { x, loops: 0 }).collect()
    }

    /// Canonical crossing list of a connected piece: minimum over all oriented
    /// starting arcs of the traversal relabeling.
    fn canonical_crossings(&self) -> Vec<[u32; 4]> {
        let o = self.orient().expect("canonical form of a validated diagram");
        let mut best: Option<Vec<[u32; 4]>> = None;
        let mut starts: Vec<u32> = o.head.keys().copied().collect();
        starts.sort_unstable();
        // Components without an under slot carry no orientation; try both directions.
        let unoriented: Vec<&Vec<u32>> = o
            .components
            .iter()
            .filter(|comp| comp.iter().all(|a| o.head[a].1 % 2 == 1 && o.tail[a].1 % 2 == 1))
            .collect();
        for &s in &starts {
            let form = self.relabel_from(&o, s, false);
            if best.as_ref().is_none_or(|b| form < *b) {
                best = Some(form);
            }
            if unoriented.iter().any(|comp| comp.contains(&s)) {
                let form = self.relabel_from(&o, s, true);
                if best.as_ref().is_none_or(|b| form < *b) {
                    best = Some(form);
                }
            }
        }
        best.unwrap_or_default()
    }

    fn relabel_from(&self, o: &Orientation, start: u32, reverse_start: bool) -> Vec<[u32; 4]> {
        let mut label: HashMap<u32, u32> = HashMap::new();
        let mut next_label = 1u32;
        let mut visits: Vec<(usize, usize)> = Vec::new();
        let mut pending = Some((start, reverse_start));
        while let Some((s, rev)) = pending.take() {
            let comp = o.components.iter().find(|c| c.contains(&s)).expect("arc in a component");
            let k = comp.iter().position(|&a| a == s).unwrap_or(0);
            let len = comp.len();
            for step in 0..len {
                let idx = if rev { (k + len - step) % len } else { (k + step) % len };
                let a = comp[idx];
                label.insert(a, next_label);
                next_label += 1;
                visits.push(if rev { o.tail[&a] } else { o.head[&a] });
            }
            // Next component: first unlabeled outgoing arc around visited crossings.
            'scan: for &(c, p) in &visits {
                for step in 0..4 {
                    let q = (p + step) % 4;
                    let a = self.x[c][q];
                    if !label.contains_key(&a) && o.tail[&a] == (c, q) {
                        pending = Some((a, false));
                        break 'scan;
                    }
                }
            }
            if pending.is_none() {
                if let Some(&a) = o.head.keys().filter(|a| !label.contains_key(a)).min() {
                    pending = Some((a, false));
                }
            }
        }
        let mut out: Vec<[u32; 4]> = self.x.iter().map(|x| x.map(|a| label[&a])).collect();
        out.sort_unstable();
        out
    }
}

// ---------------------------------------------------------------------------
// Skein engine
// ---------------------------------------------------------------------------

/// Coefficients of a skein relation written as
/// `P(L₊) = α₊ P(L₋) + β₊ P(L₀)` and `P(L₋) = α₋ P(L₊) + β₋ P(L₀)`,
/// plus the value `μ` of a split unknot summand.
struct SkeinRules {
    alpha_pos: LaurentPoly,
    beta_pos: LaurentPoly,
    alpha_neg: LaurentPoly,
    beta_neg: LaurentPoly,
    mu: LaurentPoly,
    one: LaurentPoly,
}

impl SkeinRules {
    fn homfly() -> Self {
        let v = ["l", "m"];
        let lm = |a: i64, b: i64, c: i64| LaurentPoly::monomial(&v, &[a, b], c);
        SkeinRules {
            alpha_pos: lm(-2, 0, -1),
            beta_pos: lm(-1, 1, -1),
            alpha_neg: lm(2, 0, -1),
            beta_neg: lm(1, 1, -1),
            // μ = −(l + l⁻¹)·m⁻¹
            mu: &lm(1, -1, -1) + &lm(-1, -1, -1),
            one: LaurentPoly::one(&v),
        }
    }

    fn conway() -> Self {
        let v = ["z"];
        SkeinRules {
            alpha_pos: LaurentPoly::one(&v),
            beta_pos: LaurentPoly::var(&v, 0, 1),
            alpha_neg: LaurentPoly::one(&v),
            beta_neg: LaurentPoly::monomial(&v, &[1], -1),
            mu: LaurentPoly::zero(&v),
            one: LaurentPoly::one(&v),
        }
    }
}

struct SkeinEngine {
    rules: SkeinRules,
    memo: HashMap<Vec<[u32; 4]>, LaurentPoly>,
}

impl SkeinEngine {
    fn new(rules: SkeinRules) -> Self {
        SkeinEngine { rules, memo: HashMap::new() }
    }

    fn mu_pow(&self, k: u32) -> LaurentPoly {
        self.rules.mu.pow(k)
    }

    /// Value of an arbitrary diagram.
    fn eval(&mut self, d: Diagram) -> LaurentPoly {
        let d = simplify(d);
        let pieces = d.split_pieces();
        let count = pieces.len() as u32 + d.loops;
        if count == 0 {
            return self.rules.one.clone();
        }
        let mut acc = self.mu_pow(count - 1);
        for p in pieces {
            if acc.is_zero() {
                break;
            }
            let v = self.eval_connected(p);
            acc = &acc * &v;
        }
        acc
    }

    /// Value of a connected, simplified diagram with at least one crossing.
    fn eval_connected(&mut self, d: Diagram) -> LaurentPoly {
        let key = d.canonical_crossings();
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        // Work on the canonical labeling so base points are canonical.
        let mut cur = Diagram { x: key.clone(), loops: 0 };
        let o = cur.orient().expect("simplified diagrams stay oriented");
        let mut order: Vec<&Vec<u32>> = o.components.iter().collect();
        order.sort_by_key(|c| *c.iter().min().expect("non-empty component"));
        let mut seen = vec![false; cur.x.len()];
        let mut coef = self.rules.one.clone();
        let mut result = LaurentPoly::zero(&self.var_names());
        let mut signs: Vec<i8> = (0..cur.x.len()).map(|c| o.sign(&cur, c)).collect();
        for comp in &order {
            let s = *comp.iter().min().expect("non-empty component");
            let k = comp.iter().position(|&a| a == s).unwrap_or(0);
            for step in 0..comp.len() {
                let a = comp[(k + step) % comp.len()];
                let (c, p) = o.head[&a];
                // Track the slot through earlier switches of the same crossing.
                if seen[c] {
                    continue;
                }
                seen[c] = true;
                if p != 0 {
                    continue;
                }
                let sign = signs[c];
                let smoothed = smooth(&cur, c, sign);
                let (alpha, beta) = if sign > 0 {
                    (self.rules.alpha_pos.clone(), self.rules.beta_pos.clone())
                } else {
                    (self.rules.alpha_neg.clone(), self.rules.beta_neg.clone())
                };
                let sub = self.eval(smoothed);
                result = &result + &(&(&coef * &beta) * &sub);
                coef = &coef * &alpha;
                cur.x[c] = switched(cur.x[c], sign);
                signs[c] = -sign;
            }
        }
        let k = o.components.len() as u32;
        result = &result + &(&coef * &self.mu_pow(k - 1));
        self.memo.insert(key, result.clone());
        result
    }

    fn var_names(&self) -> Vec<&str> {
        self.rules.one.vars().iter().map(String::as_str).collect()
    }
}

/// Oriented smoothing of crossing `c`.
fn smooth(d: &Diagram, c: usize, sign: i8) -> Diagram {
    let x = d.x[c];
    let (in_under, out_under) = (x[0], x[2]);
    let (over_in, over_out) = if sign > 0 { (x[3], x[1]) } else { (x[1], x[3]) };
    let rest: Vec<[u32; 4]> = d.x.iter().enumerate().filter(|&(i, _)| i != c).map(|(_, y)| *y).collect();
    merge_labels(
        rest,
        d.loops,
        &[(in_under, over_out), (over_in, out_under)],
        &[in_under, out_under, over_in, over_out],
    )
}

/// Identifies label pairs in `rest`, counting classes among `touched` that no
/// longer occur as new free circles.
fn merge_labels(rest: Vec<[u32; 4]>, loops: u32, pairs: &[(u32, u32)], touched: &[u32]) -> Diagram {
    let mut rep: HashMap<u32, u32> = HashMap::new();
    fn root(rep: &HashMap<u32, u32>, mut a: u32) -> u32 {
        while let Some(&b) = rep.get(&a) {
            if b == a {
                break;
            }
            a = b;
        }
        a
    }
    for &(a, b) in pairs {
        let (ra, rb) = (root(&rep, a), root(&rep, b));
        if ra != rb {
            rep.insert(rb.max(ra), rb.min(ra));
        }
    }
    let x: Vec<[u32; 4]> = rest.into_iter().map(|y| y.map(|a| root(&rep, a))).collect();
    let mut classes: Vec<u32> = touched.iter().map(|&a| root(&rep, a)).collect();
    classes.sort_unstable();
    classes.dedup();
    let free = classes.iter().filter(|&&r| !x.iter().any(|y| y.contains(&r))).count() as u32;
    Diagram { x, loops: loops + free }
}

/// Removes Reidemeister-I kinks and components that only pass over (split
/// unknots), converting the latter into free circles.
fn simplify(mut d: Diagram) -> Diagram {
    loop {
        // Reidemeister I: a label occupying two cyclically adjacent slots.
        let kink = d.x.iter().enumerate().find_map(|(c, y)| (0..4).find(|&p| y[p] == y[(p + 1) % 4]).map(|p| (c, p)));
        if let Some((c, p)) = kink {
            let y = d.x[c];
            let (a, b) = (y[(p + 2) % 4], y[(p + 3) % 4]);
            let rest: Vec<[u32; 4]> = d.x.iter().enumerate().filter(|&(i, _)| i != c).map(|(_, z)| *z).collect();
            d = merge_labels(rest, d.loops, &[(a, b)], &[a, b]);
            continue;
        }
        if let Some(reduced) = reidemeister_two(&d) {
            d = reduced;
            continue;
        }
        // Components never passing under: lift them off as free circles.
        let o = match d.orient() {
            Ok(o) => o,
            Err(_) => return d,
        };
        let over_only =
            o.components.iter().find(|comp| comp.iter().all(|a| o.head[a].1 % 2 == 1 && o.tail[a].1 % 2 == 1));
        if let Some(comp) = over_only {
            let mut crossings: Vec<usize> = comp.iter().map(|a| o.head[a].0).collect();
            crossings.sort_unstable();
            crossings.dedup();
            let pairs: Vec<(u32, u32)> = crossings.iter().map(|&c| (d.x[c][0], d.x[c][2])).collect();
            let touched: Vec<u32> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
            let rest: Vec<[u32; 4]> =
                d.x.iter().enumerate().filter(|(i, _)| crossings.binary_search(i).is_err()).map(|(_, z)| *z).collect();
            d = merge_labels(rest, d.loops + 1, &pairs, &touched);
            continue;
        }
        return d;
    }
}

/// Removes one Reidemeister-II bigon, if any: an arc passing over at both of
/// its crossings, cobounding a face with an arc passing under at both.
fn reidemeister_two(d: &Diagram) -> Option<Diagram> {
    let mut occ: HashMap<u32, Vec<(usize, usize)>> = HashMap::new();
    for (c, x) in d.x.iter().enumerate() {
        for (p, &a) in x.iter().enumerate() {
            occ.entry(a).or_default().push((c, p));
        }
    }
    for (c1, x) in d.x.iter().enumerate() {
        for p1 in [1usize, 3] {
            let a = x[p1];
            let Some(&(c2, p2)) = occ[&a].iter().find(|&&s| s != (c1, p1)) else {
                continue;
            };
            if c2 == c1 || p2 % 2 == 0 {
                continue;
            }
            for side in [1usize, 3] {
                let pb1 = (p1 + side) % 4;
                let b = x[pb1];
                let Some(&(c3, pb2)) = occ[&b].iter().find(|&&s| s != (c1, pb1)) else {
                    continue;
                };
                // The face between a and b turns the opposite way at the far crossing.
                if c3 != c2 || (pb2 + 4 - p2) % 4 != 4 - side {
                    continue;
                }
                let y = d.x[c2];
                let (over_a, over_b) = (x[(p1 + 2) % 4], y[(p2 + 2) % 4]);
                let (under_a, under_b) = (x[(pb1 + 2) % 4], y[(pb2 + 2) % 4]);
                let rest: Vec<[u32; 4]> =
                    d.x.iter().enumerate().filter(|&(i, _)| i != c1 && i != c2).map(|(_, z)| *z).collect();
                return Some(merge_labels(
                    rest,
                    d.loops,
                    &[(over_a, a), (a, over_b), (under_a, b), (b, under_b)],
                    &[over_a, a, over_b, under_a, b, under_b],
                ));
            }
        }
    }
    None
}

fn guard(pd: &PdCode, limit: usize) -> Result<()> {
    if pd.crossings.len() > limit {
        return Err(Error::TooLarge { crossings: pd.crossings.len(), limit });
    }
    Ok(())
}

/// HOMFLY polynomial in variables `(l, m)` with the default crossing guard.
pub fn homfly(pd: &PdCode) -> Result<LaurentPoly> {
    homfly_with_limit(pd, DEFAULT_CROSSING_LIMIT)
}

/// HOMFLY polynomial with an explicit crossing guard.
pub fn homfly_with_limit(pd: &PdCode, limit: usize) -> Result<LaurentPoly> {
    guard(pd, limit)?;
    pd.validate()?;
    let mut engine = SkeinEngine::new(SkeinRules::homfly());
    Ok(engine.eval(Diagram { x: pd.crossings.clone(), loops: pd.unknots }))
}

/// Conway polynomial in the variable `z` with the default crossing guard.
pub fn conway(pd: &PdCode) -> Result<LaurentPoly> {
    conway_with_limit(pd, DEFAULT_CROSSING_LIMIT)
}

/// Conway polynomial with an explicit crossing guard.
pub fn conway_with_limit(pd: &PdCode, limit: usize) -> Result<LaurentPoly> {
    guard(pd, limit)?;
    pd.validate()?;
    let mut engine = SkeinEngine::new(SkeinRules::conway());
    Ok(engine.eval(Diagram { x: pd.crossings.clone(), loops: pd.unknots }))
}

/// Alexander polynomial via `z = t^{1/2} − t^{−1/2}` (symmetric normalization).
///
/// Knots (and links with even Conway polynomial) yield a polynomial in `t`;
/// otherwise the result is expressed in `s = t^{1/2}`.
pub fn alexander(pd: &PdCode) -> Result<LaurentPoly> {
    alexander_with_limit(pd, DEFAULT_CROSSING_LIMIT)
}

/// Alexander polynomial with an explicit crossing guard.
pub fn alexander_with_limit(pd: &PdCode, limit: usize) -> Result<LaurentPoly> {
    Ok(conway_to_alexander(&conway_with_limit(pd, limit)?))
}

/// Substitutes `z = s − s⁻¹`, then rewrites in `t = s²` when possible.
pub fn conway_to_alexander(c: &LaurentPoly) -> LaurentPoly {
    let v = ["s"];
    let z = &LaurentPoly::var(&v, 0, 1) - &LaurentPoly::var(&v, 0, -1);
    let mut acc = LaurentPoly::zero(&v);
    for (e, coeff) in c.iter() {
        let k = u32::try_from(e[0]).expect("Conway polynomials have non-negative degrees");
        acc = &acc + &z.pow(k).scale(coeff);
    }
    if acc.iter().all(|(e, _)| e[0] % 2 == 0) {
        let mut t = LaurentPoly::zero(&["t"]);
        for (e, coeff) in acc.iter() {
            t.add_term(vec![e[0] / 2], coeff.clone());
        }
        t
    } else {
        acc
    }
}

/// Specializes a HOMFLY polynomial to the Conway polynomial via
/// `l = i, m = −i·z` (returns `None` if the result is not real).
pub fn homfly_to_conway(p: &LaurentPoly) -> Option<LaurentPoly> {
    // c·lᵃmᵇ ↦ c·iᵃ·(−i)ᵇ·zᵇ = c·(−1)ᵇ·i^{a+b}·zᵇ
    let mut out = LaurentPoly::zero(&["z"]);
    let mut imaginary = LaurentPoly::zero(&["z"]);
    for (e, c) in p.iter() {
        let (a, b) = (e[0], e[1]);
        let mut unit = (a + b).rem_euclid(4);
        let mut coeff = c.clone();
        if b.rem_euclid(2) == 1 {
            coeff = -coeff;
        }
        if unit >= 2 {
            coeff = -coeff;
            unit -= 2;
        }
        if unit == 0 {
            out.add_term(vec![b], coeff);
        } else {
            imaginary.add_term(vec![b], coeff);
        }
    }
    imaginary.is_zero().then_some(out)
}
