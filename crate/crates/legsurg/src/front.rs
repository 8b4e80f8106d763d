//! Legendrian fronts encoded as event words.
//!
//! A front is read left to right.  Between events the diagram consists of a
//! stack of strands numbered `1, 2, …` from the bottom.  Three events change
//! the stack:
//!
//! * `lcusp(i)` — a left cusp opens two new strands at positions `i`, `i+1`;
//! * `rcusp(i)` — the strands at `i`, `i+1` meet in a right cusp and end;
//! * `cross(i)` — the strands at `i`, `i+1` cross.
//!
//! At a crossing the strand of lesser slope (the one moving down) is in front.
//! Orientation is given per component: `+1` means the upper branch of the
//! component's first left cusp points right.  Components are numbered in the
//! order of their first left cusp.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::PdCode;

/// A single event of a front word (strand indices are 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrontEvent {
    LeftCusp(usize),
    RightCusp(usize),
    Crossing(usize),
}

impl FrontEvent {
    /// The strand index the event acts on.
    pub fn index(self) -> usize {
        match self {
            FrontEvent::LeftCusp(i) | FrontEvent::RightCusp(i) | FrontEvent::Crossing(i) => i,
        }
    }

    fn with_index(self, i: usize) -> Self {
        match self {
            FrontEvent::LeftCusp(_) => FrontEvent::LeftCusp(i),
            FrontEvent::RightCusp(_) => FrontEvent::RightCusp(i),
            FrontEvent::Crossing(_) => FrontEvent::Crossing(i),
        }
    }

    /// The event seen in a mirror `x ↦ −x` (cusps exchange sides).
    pub fn reflected(self) -> Self {
        match self {
            FrontEvent::LeftCusp(i) => FrontEvent::RightCusp(i),
            FrontEvent::RightCusp(i) => FrontEvent::LeftCusp(i),
            c => c,
        }
    }

    fn shifted(self, by: usize) -> Self {
        self.with_index(self.index() + by)
    }
}

impl fmt::Display for FrontEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrontEvent::LeftCusp(i) => write!(f, "lcusp({i})"),
            FrontEvent::RightCusp(i) => write!(f, "rcusp({i})"),
            FrontEvent::Crossing(i) => write!(f, "cross({i})"),
        }
    }
}

impl Serialize for FrontEvent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let tag = match self {
            FrontEvent::LeftCusp(_) => "lcusp",
            FrontEvent::RightCusp(_) => "rcusp",
            FrontEvent::Crossing(_) => "cross",
        };
        (tag, self.index()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FrontEvent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (tag, i): (String, usize) = Deserialize::deserialize(d)?;
        if i == 0 {
            return Err(serde::de::Error::custom("strand indices are 1-based"));
        }
        match tag.as_str() {
            "lcusp" => Ok(FrontEvent::LeftCusp(i)),
            "rcusp" => Ok(FrontEvent::RightCusp(i)),
            "cross" => Ok(FrontEvent::Crossing(i)),
            other => Err(serde::de::Error::custom(format!("unknown front event {other:?}"))),
        }
    }
}

/// Shorthand constructors used by fixtures and tests.
pub fn lcusp(i: usize) -> FrontEvent {
    FrontEvent::LeftCusp(i)
}
/// See [`lcusp`].
pub fn rcusp(i: usize) -> FrontEvent {
    FrontEvent::RightCusp(i)
}
/// See [`lcusp`].
pub fn cross(i: usize) -> FrontEvent {
    FrontEvent::Crossing(i)
}

// ---------------------------------------------------------------------------
// Strand simulation
// ---------------------------------------------------------------------------

/// A maximal x-monotone arc between a left cusp and a right cusp.
#[derive(Debug, Clone)]
struct Strand {
    /// Event index of the left cusp where the strand starts.
    start: usize,
    /// Event index of the right cusp where it ends.
    end: usize,
    component: usize,
    /// `+1` if traversed rightward.
    dir: i8,
    /// Crossing event indices along the strand, left to right.
    crossings: Vec<usize>,
}

/// Strands meeting at a cusp or crossing, lower position first.
#[derive(Debug, Clone, Copy)]
struct Pair {
    lower: usize,
    upper: usize,
}

/// Result of simulating an event word.
#[derive(Debug, Clone)]
struct Trace {
    strands: Vec<Strand>,
    /// For every event, the strands it involves.
    pairs: Vec<Pair>,
    /// Strand ids by position at every slice (`slices[k]` is before event `k`).
    slices: Vec<Vec<usize>>,
    /// Event index of the first left cusp of each component.
    first_cusp: Vec<usize>,
}

impl Trace {
    fn new(events: &[FrontEvent]) -> Result<Trace> {
        let mut strands: Vec<Strand> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut pairs = Vec::with_capacity(events.len());
        let mut slices = Vec::with_capacity(events.len() + 1);
        for (k, &e) in events.iter().enumerate() {
            slices.push(stack.clone());
            let i = e.index();
            let bad = |detail: String| Error::StrandCountMismatch { event: k, detail };
            if i == 0 {
                return Err(bad("strand indices are 1-based".into()));
            }
            match e {
                FrontEvent::LeftCusp(_) => {
                    if i > stack.len() + 1 {
                        return Err(bad(format!("{e} with only {} strands", stack.len())));
                    }
                    let lower = strands.len();
                    for _ in 0..2 {
                        strands.push(Strand {
                            start: k,
                            end: usize::MAX,
                            component: usize::MAX,
                            dir: 0,
                            crossings: Vec::new(),
                        });
                    }
                    stack.splice(i - 1..i - 1, [lower, lower + 1]);
                    pairs.push(Pair { lower, upper: lower + 1 });
                }
                FrontEvent::RightCusp(_) | FrontEvent::Crossing(_) => {
                    if i + 1 > stack.len() {
                        return Err(bad(format!("{e} with only {} strands", stack.len())));
                    }
                    let pair = Pair { lower: stack[i - 1], upper: stack[i] };
                    pairs.push(pair);
                    if matches!(e, FrontEvent::RightCusp(_)) {
                        strands[pair.lower].end = k;
                        strands[pair.upper].end = k;
                        stack.drain(i - 1..=i);
                    } else {
                        strands[pair.lower].crossings.push(k);
                        strands[pair.upper].crossings.push(k);
                        stack.swap(i - 1, i);
                    }
                }
            }
        }
        if !stack.is_empty() {
            return Err(Error::StrandCountMismatch {
                event: events.len(),
                detail: format!("{} strands left open at the right end", stack.len()),
            });
        }
        if events.is_empty() {
            return Err(Error::OpenEnds);
        }
        slices.push(Vec::new());

        // Components: walk strand → partner at right cusp → partner at left cusp …
        let mut first_cusp = Vec::new();
        for (k, &e) in events.iter().enumerate() {
            if !matches!(e, FrontEvent::LeftCusp(_)) || strands[pairs[k].lower].component != usize::MAX {
                continue;
            }
            let c = first_cusp.len();
            first_cusp.push(k);
            let mut s = pairs[k].upper;
            let mut at_right = true;
            while strands[s].component == usize::MAX {
                strands[s].component = c;
                let cusp = if at_right { strands[s].end } else { strands[s].start };
                let p = pairs[cusp];
                s = if p.lower == s { p.upper } else { p.lower };
                at_right = !at_right;
            }
        }
        Ok(Trace { strands, pairs, slices, first_cusp })
    }

    fn components(&self) -> usize {
        self.first_cusp.len()
    }

    /// Assigns traversal directions from the per-component orientation signs.
    fn orient(&mut self, orientation: &[i8]) {
        for (c, &k) in self.first_cusp.iter().enumerate() {
            let mut s = self.pairs[k].upper;
            let mut d = orientation[c];
            let mut at_right = true;
            while self.strands[s].dir == 0 {
                self.strands[s].dir = d;
                let cusp = if at_right { self.strands[s].end } else { self.strands[s].start };
                let p = self.pairs[cusp];
                s = if p.lower == s { p.upper } else { p.lower };
                d = -d;
                at_right = !at_right;
            }
        }
    }

    /// Sign of the crossing at event `k`: `+1` iff both strands run the same way.
    fn crossing_sign(&self, k: usize) -> i64 {
        let p = self.pairs[k];
        if self.strands[p.lower].dir == self.strands[p.upper].dir {
            1
        } else {
            -1
        }
    }

    /// `true` if the cusp at event `k` is traversed upward.
    fn cusp_is_up(&self, events: &[FrontEvent], k: usize) -> bool {
        let p = self.pairs[k];
        match events[k] {
            FrontEvent::LeftCusp(_) => self.strands[p.upper].dir > 0,
            _ => self.strands[p.lower].dir > 0,
        }
    }
}

// ---------------------------------------------------------------------------
// Fronts
// ---------------------------------------------------------------------------

/// A validated Legendrian front with per-component orientation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LegendrianFront {
    events: Vec<FrontEvent>,
    orientation: Vec<i8>,
}

#[derive(Deserialize)]
struct RawFront {
    events: Vec<FrontEvent>,
    #[serde(default)]
    orientation: Vec<i8>,
}

impl<'de> Deserialize<'de> for LegendrianFront {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawFront::deserialize(d)?;
        LegendrianFront::new(raw.events, raw.orientation).map_err(serde::de::Error::custom)
    }
}

/// Classical invariants of one oriented Legendrian knot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassicalInvariants {
    /// Thurston–Bennequin invariant: writhe minus the number of right cusps.
    pub tb: i64,
    /// Absolute value of the rotation number.
    pub rot: i64,
    /// Signed rotation number `(down cusps − up cusps) / 2`.
    pub rot_signed: i64,
    /// Writhe of the component's self-crossings.
    pub writhe: i64,
    pub cusps_up: u64,
    pub cusps_down: u64,
}

/// Classical invariants of every component plus the linking matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinkInvariants {
    pub components: Vec<ClassicalInvariants>,
    /// Symmetric matrix of pairwise linking numbers (zero diagonal).
    pub linking: Vec<Vec<i64>>,
}

/// Local Legendrian Reidemeister rewrites of an event word.
///
/// Each move is addressed by the index of the first event it touches (or, for
/// insertions, the slice before which it is inserted).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegendrianMove {
    /// Exchange two adjacent events acting on disjoint strands (planar isotopy).
    Commute { at: usize },
    /// Insert the kink `lcusp(p) cross(p+1) rcusp(p)` on strand `p` at slice `at`.
    InsertKink { at: usize, strand: usize },
    /// Remove a kink inserted by [`LegendrianMove::InsertKink`].
    RemoveKink { at: usize },
    /// Push a strand through a cusp (one crossing with each branch ↔ none).
    CuspPass { at: usize },
    /// Triple-point move `cross(i) cross(i+1) cross(i)` ↔ `cross(i+1) cross(i) cross(i+1)`.
    TriplePoint { at: usize },
}

impl LegendrianFront {
    /// Validates an event word; an empty orientation means "all `+1`".
    pub fn new(events: Vec<FrontEvent>, orientation: Vec<i8>) -> Result<Self> {
        let trace = Trace::new(&events)?;
        let n = trace.components();
        let orientation = if orientation.is_empty() { vec![1; n] } else { orientation };
        if orientation.len() != n {
            return Err(Error::Schema(format!("front has {n} components but {} orientation signs", orientation.len())));
        }
        if orientation.iter().any(|&o| o != 1 && o != -1) {
            return Err(Error::Schema("orientation signs must be +1 or -1".into()));
        }
        Ok(LegendrianFront { events, orientation })
    }

    /// Parses the `{"events": …, "orientation": …}` JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The standard `tb = −1` unknot.
    pub fn unknot() -> Self {
        LegendrianFront { events: vec![lcusp(1), rcusp(1)], orientation: vec![1] }
    }

    /// The maximal `tb = 1` right-handed trefoil.
    pub fn right_trefoil() -> Self {
        LegendrianFront {
            events: vec![lcusp(1), lcusp(3), cross(2), cross(2), cross(2), rcusp(1), rcusp(1)],
            orientation: vec![1],
        }
    }

    pub fn events(&self) -> &[FrontEvent] {
        &self.events
    }

    pub fn orientation(&self) -> &[i8] {
        &self.orientation
    }

    pub fn component_count(&self) -> usize {
        self.orientation.len()
    }

    /// Reverses the orientation of one component.
    pub fn reversed(&self, component: usize) -> Result<Self> {
        crate::error::check_index(component, self.component_count())?;
        let mut out = self.clone();
        out.orientation[component] = -out.orientation[component];
        Ok(out)
    }

    fn trace(&self) -> Trace {
        let mut t = Trace::new(&self.events).expect("validated front");
        t.orient(&self.orientation);
        t
    }

    /// Classical invariants of every component and their linking numbers.
    pub fn link_invariants(&self) -> LinkInvariants {
        let t = self.trace();
        let n = t.components();
        let mut writhe = vec![0i64; n];
        let mut link2 = vec![vec![0i64; n]; n];
        let mut right = vec![0i64; n];
        let mut up = vec![0u64; n];
        let mut down = vec![0u64; n];
        for (k, e) in self.events.iter().enumerate() {
            let p = t.pairs[k];
            let c = t.strands[p.lower].component;
            match e {
                FrontEvent::Crossing(_) => {
                    let d = t.strands[p.upper].component;
                    let s = t.crossing_sign(k);
                    if c == d {
                        writhe[c] += s;
                    } else {
                        link2[c][d] += s;
                        link2[d][c] += s;
                    }
                }
                _ => {
                    if matches!(e, FrontEvent::RightCusp(_)) {
                        right[c] += 1;
                    }
                    if t.cusp_is_up(&self.events, k) {
                        up[c] += 1;
                    } else {
                        down[c] += 1;
                    }
                }
            }
        }
        let components = (0..n)
            .map(|c| {
                let rot_signed = (down[c] as i64 - up[c] as i64) / 2;
                ClassicalInvariants {
                    tb: writhe[c] - right[c],
                    rot: rot_signed.abs(),
                    rot_signed,
                    writhe: writhe[c],
                    cusps_up: up[c],
                    cusps_down: down[c],
                }
            })
            .collect();
        let linking = link2.iter().map(|row| row.iter().map(|v| v / 2).collect()).collect();
        LinkInvariants { components, linking }
    }

    /// Classical invariants of a one-component front.
    pub fn classical_invariants(&self) -> Result<ClassicalInvariants> {
        if self.component_count() != 1 {
            return Err(Error::Computation(format!(
                "expected a knot, front has {} components",
                self.component_count()
            )));
        }
        Ok(self.link_invariants().components[0])
    }

    /// Inserts a zigzag on the strand at position `strand` (1-based) before
    /// event `slice`.  `sign = +1` raises the signed rotation number by one
    /// and `sign = −1` lowers it; `tb` drops by one either way.
    pub fn stabilize_at(&self, slice: usize, strand: usize, sign: i8) -> Result<Self> {
        if slice > self.events.len() {
            return Err(Error::IndexOutOfRange { index: slice, len: self.events.len() + 1 });
        }
        let t = self.trace();
        let stack = &t.slices[slice];
        if strand == 0 || strand > stack.len() {
            return Err(Error::IndexOutOfRange { index: strand, len: stack.len() });
        }
        let dir = t.strands[stack[strand - 1]].dir;
        // An upward zigzag on a rightward strand has two up cusps.
        let upward = (sign < 0) == (dir > 0);
        let p = strand;
        let zig = if upward { [lcusp(p + 1), rcusp(p)] } else { [lcusp(p), rcusp(p + 1)] };
        let mut events = self.events.clone();
        events.splice(slice..slice, zig);
        LegendrianFront::new(events, self.orientation.clone())
    }

    /// Stabilizes component `component` just after its first left cusp.
    pub fn stabilize(&self, component: usize, sign: i8) -> Result<Self> {
        crate::error::check_index(component, self.component_count())?;
        let t = self.trace();
        let k = t.first_cusp[component];
        self.stabilize_at(k + 1, self.events[k].index() + 1, sign)
    }

    /// Applies a sequence of stabilizations to one component.
    pub fn stabilize_many(&self, component: usize, signs: &[i8]) -> Result<Self> {
        signs.iter().try_fold(self.clone(), |f, &s| f.stabilize(component, s))
    }

    /// Legendrian connected sum of two knots placed side by side: the last
    /// right cusp of `self` and the first left cusp of `other` are removed and
    /// the loose ends joined.  Requires `self` to end with `rcusp(1)` and
    /// `other` to start with `lcusp(1)`; the orientation of `self` is kept.
    pub fn connected_sum(&self, other: &LegendrianFront) -> Result<Self> {
        if self.component_count() != 1 || other.component_count() != 1 {
            return Err(Error::Computation("connected sum needs two knots".into()));
        }
        if self.events.last() != Some(&rcusp(1)) || other.events.first() != Some(&lcusp(1)) {
            return Err(Error::Computation("connected sum needs a final rcusp(1) and an initial lcusp(1)".into()));
        }
        let mut events = self.events[..self.events.len() - 1].to_vec();
        events.extend_from_slice(&other.events[1..]);
        LegendrianFront::new(events, self.orientation.clone())
    }

    /// `n` parallel copies pushed off in the Reeb direction.
    pub fn reeb_pushoff(&self, n: usize) -> Result<Self> {
        self.satellite_at(&Pattern::trivial(n)?, 0, 0)
    }

    /// Legendrian satellite with the pattern inserted right after the first
    /// left cusp of the companion (which must be a knot).
    pub fn satellite(&self, pattern: &Pattern) -> Result<Self> {
        if self.component_count() != 1 {
            return Err(Error::Computation("satellite companion must be a knot".into()));
        }
        let k = self.trace().first_cusp[0];
        self.satellite_at(pattern, k + 1, self.events[k].index() + 1)
    }

    /// Legendrian satellite: the `n`-copy of this front with the pattern
    /// inserted on the block of strand `strand` before event `slice`
    /// (`strand = 0` inserts nothing).
    pub fn satellite_at(&self, pattern: &Pattern, slice: usize, strand: usize) -> Result<Self> {
        let n = pattern.strands;
        let t = self.trace();
        if slice > self.events.len() {
            return Err(Error::IndexOutOfRange { index: slice, len: self.events.len() + 1 });
        }
        if strand > t.slices[slice].len() {
            return Err(Error::IndexOutOfRange { index: strand, len: t.slices[slice].len() });
        }
        let mut events = Vec::new();
        // Position in the new word of every original slice.
        let mut slice_map = Vec::with_capacity(self.events.len() + 1);
        for (k, &e) in self.events.iter().enumerate() {
            if k == slice && strand > 0 {
                let dir = t.strands[t.slices[k][strand - 1]].dir;
                let offset = (strand - 1) * n;
                let word: Vec<FrontEvent> = if dir > 0 {
                    pattern.events.clone()
                } else {
                    pattern.events.iter().rev().map(|e| e.reflected()).collect()
                };
                events.extend(word.into_iter().map(|e| e.shifted(offset)));
            }
            slice_map.push(events.len());
            events.extend(copy_block(e, n));
        }
        if slice == self.events.len() && strand > 0 {
            return Err(Error::Computation("no strand at the right end of a front".into()));
        }
        slice_map.push(events.len());

        // Orient each new component along the companion.
        let mut raw = Trace::new(&events)?;
        let comps = raw.components();
        raw.orient(&vec![1; comps]);
        let mut orientation = vec![0i8; comps];
        for (k, stack) in t.slices.iter().enumerate() {
            let new_stack = &raw.slices[slice_map[k]];
            for (pos, &s) in stack.iter().enumerate() {
                for copy in 0..n {
                    let ns = new_stack[pos * n + copy];
                    let c = raw.strands[ns].component;
                    if orientation[c] == 0 {
                        orientation[c] = if raw.strands[ns].dir == t.strands[s].dir { 1 } else { -1 };
                    }
                }
            }
        }
        // Components living entirely inside the pattern keep orientation +1.
        for o in orientation.iter_mut().filter(|o| **o == 0) {
            *o = 1;
        }
        LegendrianFront::new(events, orientation)
    }

    /// Planar-diagram code of the underlying smooth link.
    pub fn to_pd(&self) -> PdCode {
        let t = self.trace();
        // Arc labels entering / leaving each crossing on its two strands.
        let mut label_in: Vec<[u32; 2]> = vec![[0; 2]; self.events.len()];
        let mut label_out: Vec<[u32; 2]> = vec![[0; 2]; self.events.len()];
        let mut next = 1u32;
        let mut unknots = 0;
        for &k in &t.first_cusp {
            // Start on the rightward strand leaving the first left cusp.
            let p = t.pairs[k];
            let mut s = if t.strands[p.upper].dir > 0 { p.upper } else { p.lower };
            let start = s;
            let mut passages: Vec<(usize, usize)> = Vec::new();
            loop {
                let st = &t.strands[s];
                let which = |c: usize| usize::from(t.pairs[c].upper == s);
                if st.dir > 0 {
                    passages.extend(st.crossings.iter().map(|&c| (c, which(c))));
                } else {
                    passages.extend(st.crossings.iter().rev().map(|&c| (c, which(c))));
                }
                let cusp = if st.dir > 0 { st.end } else { st.start };
                let q = t.pairs[cusp];
                s = if q.lower == s { q.upper } else { q.lower };
                if s == start {
                    break;
                }
            }
            if passages.is_empty() {
                unknots += 1;
                continue;
            }
            let m = passages.len() as u32;
            for (j, &(c, w)) in passages.iter().enumerate() {
                label_in[c][w] = next + j as u32;
                label_out[c][w] = next + (j as u32 + 1) % m;
            }
            next += m;
        }
        let mut crossings = Vec::new();
        for (k, e) in self.events.iter().enumerate() {
            if !matches!(e, FrontEvent::Crossing(_)) {
                continue;
            }
            let p = t.pairs[k];
            // The lower strand rises through the crossing and passes behind.
            let du = t.strands[p.lower].dir as i32;
            let d_o = t.strands[p.upper].dir as i32;
            let under = (du, du);
            let over = (d_o, -d_o);
            let quadrant = |(x, y): (i32, i32)| match (x > 0, y > 0) {
                (true, true) => 0,
                (false, true) => 1,
                (false, false) => 2,
                (true, false) => 3,
            };
            let neg = |(x, y): (i32, i32)| (-x, -y);
            let base = quadrant(neg(under));
            let mut x = [0u32; 4];
            for (v, label) in [
                (neg(under), label_in[k][0]),
                (under, label_out[k][0]),
                (neg(over), label_in[k][1]),
                (over, label_out[k][1]),
            ] {
                x[(quadrant(v) + 4 - base) % 4] = label;
            }
            crossings.push(x);
        }
        PdCode { crossings, unknots }
    }

    /// Applies a local Legendrian Reidemeister rewrite.
    pub fn apply_move(&self, mv: LegendrianMove) -> Result<Self> {
        let ev = &self.events;
        let fail = || Error::Computation(format!("move {mv:?} does not apply"));
        let mut out = ev.clone();
        match mv {
            LegendrianMove::Commute { at } => {
                let (a, b) = (*ev.get(at).ok_or_else(fail)?, *ev.get(at + 1).ok_or_else(fail)?);
                let (b2, a2) = commute(a, b).ok_or_else(fail)?;
                out[at] = b2;
                out[at + 1] = a2;
            }
            LegendrianMove::InsertKink { at, strand } => {
                let stack = Trace::new(ev)?.slices.get(at).ok_or_else(fail)?.len();
                if strand == 0 || strand > stack {
                    return Err(fail());
                }
                out.splice(at..at, [lcusp(strand), cross(strand + 1), rcusp(strand)]);
            }
            LegendrianMove::RemoveKink { at } => match ev.get(at..at + 3) {
                Some(&[FrontEvent::LeftCusp(p), FrontEvent::Crossing(q), FrontEvent::RightCusp(r)])
                    if q == p + 1 && r == p =>
                {
                    out.drain(at..at + 3);
                }
                _ => return Err(fail()),
            },
            LegendrianMove::CuspPass { at } => {
                use FrontEvent::*;
                let rep: Vec<FrontEvent> = match (ev.get(at..at + 3), ev.get(at)) {
                    (Some(&[LeftCusp(i), Crossing(a), Crossing(b)]), _) if a == i + 1 && b == i => {
                        vec![lcusp(i + 1)]
                    }
                    (Some(&[LeftCusp(j), Crossing(a), Crossing(b)]), _) if j >= 2 && a == j - 1 && b == j => {
                        vec![lcusp(j - 1)]
                    }
                    (Some(&[Crossing(a), Crossing(b), RightCusp(i)]), _) if b == a + 1 && i == a => {
                        vec![rcusp(a + 1)]
                    }
                    (Some(&[Crossing(a), Crossing(b), RightCusp(i)]), _) if a == b + 1 && i == a => {
                        vec![rcusp(b)]
                    }
                    (_, Some(&LeftCusp(j))) if j >= 2 => vec![lcusp(j - 1), cross(j), cross(j - 1)],
                    (_, Some(&RightCusp(j))) if j >= 2 => {
                        vec![cross(j - 1), cross(j), rcusp(j - 1)]
                    }
                    _ => return Err(fail()),
                };
                let len = if rep.len() == 1 { 3 } else { 1 };
                out.splice(at..at + len, rep);
            }
            LegendrianMove::TriplePoint { at } => match ev.get(at..at + 3) {
                Some(&[FrontEvent::Crossing(a), FrontEvent::Crossing(b), FrontEvent::Crossing(c)])
                    if a == c && (b == a + 1 || a == b + 1) =>
                {
                    out.splice(at..at + 3, [cross(b), cross(a), cross(b)]);
                }
                _ => return Err(fail()),
            },
        }
        LegendrianFront::new(out, self.orientation.clone())
    }
}

/// Rewrites `a b` as `b' a'` when the two events act on disjoint strands.
fn commute(a: FrontEvent, b: FrontEvent) -> Option<(FrontEvent, FrontEvent)> {
    use FrontEvent::*;
    let (i, j) = (a.index(), b.index());
    let res = match (a, b) {
        (Crossing(_), Crossing(_)) if i.abs_diff(j) >= 2 => (b, a),
        (Crossing(_), LeftCusp(_)) if j >= i + 2 => (b, a),
        (Crossing(_), LeftCusp(_)) if j <= i => (b, cross(i + 2)),
        (LeftCusp(_), Crossing(_)) if j >= i + 2 => (cross(j - 2), a),
        (LeftCusp(_), Crossing(_)) if j + 2 <= i => (b, a),
        (Crossing(_), RightCusp(_)) if j >= i + 2 => (b, a),
        (Crossing(_), RightCusp(_)) if j + 2 <= i => (b, cross(i - 2)),
        (RightCusp(_), Crossing(_)) if j + 2 <= i => (b, a),
        (RightCusp(_), Crossing(_)) if j >= i => (cross(j + 2), a),
        (LeftCusp(_), LeftCusp(_)) if j >= i + 2 => (lcusp(j - 2), a),
        (LeftCusp(_), LeftCusp(_)) if j <= i => (b, lcusp(i + 2)),
        (RightCusp(_), RightCusp(_)) if j >= i => (rcusp(j + 2), a),
        (RightCusp(_), RightCusp(_)) if j + 2 <= i => (b, rcusp(i - 2)),
        (LeftCusp(_), RightCusp(_)) if j >= i + 2 => (rcusp(j - 2), a),
        (LeftCusp(_), RightCusp(_)) if j + 2 <= i => (b, lcusp(i - 2)),
        (RightCusp(_), LeftCusp(_)) if j > i => (lcusp(j + 2), a),
        (RightCusp(_), LeftCusp(_)) if j < i => (b, rcusp(i + 2)),
        _ => return None,
    };
    Some(res)
}

/// The event `e` replaced by its `n`-fold Reeb copy.
fn copy_block(e: FrontEvent, n: usize) -> Vec<FrontEvent> {
    let base = (e.index() - 1) * n + 1;
    match e {
        FrontEvent::Crossing(_) => {
            let mut out = Vec::with_capacity(n * n);
            for b in 0..n {
                for t in (0..n).rev() {
                    out.push(cross(base + b + t));
                }
            }
            out
        }
        FrontEvent::LeftCusp(_) => left_cusp_block(base, n),
        FrontEvent::RightCusp(_) => left_cusp_block(base, n).into_iter().rev().map(FrontEvent::reflected).collect(),
    }
}

/// `n` nested left cusps, then the branches sorted so that all lower branches
/// lie below all upper branches.
fn left_cusp_block(base: usize, n: usize) -> Vec<FrontEvent> {
    let mut out: Vec<FrontEvent> = (0..n).map(|k| lcusp(base + 2 * k)).collect();
    for j in 2..=n {
        let top = base + 2 * (j - 1);
        for step in 1..j {
            out.push(cross(top - step));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Satellite patterns
// ---------------------------------------------------------------------------

/// A Legendrian tangle in the solid torus: an event word on a block of
/// `strands` strands that starts and ends with exactly `strands` strands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pattern {
    pub strands: usize,
    pub events: Vec<FrontEvent>,
}

impl Pattern {
    /// Validates the strand bookkeeping of a pattern word.
    pub fn new(strands: usize, events: Vec<FrontEvent>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Schema("a pattern needs at least one strand".into()));
        }
        let mut count = strands;
        for (k, e) in events.iter().enumerate() {
            let i = e.index();
            let ok = match e {
                FrontEvent::LeftCusp(_) => i >= 1 && i <= count + 1,
                _ => i >= 1 && i < count,
            };
            if !ok {
                return Err(Error::StrandCountMismatch {
                    event: k,
                    detail: format!("{e} on a block of {count} strands"),
                });
            }
            match e {
                FrontEvent::LeftCusp(_) => count += 2,
                FrontEvent::RightCusp(_) => count -= 2,
                FrontEvent::Crossing(_) => {}
            }
        }
        if count != strands {
            return Err(Error::StrandCountMismatch {
                event: events.len(),
                detail: format!("pattern ends with {count} strands, expected {strands}"),
            });
        }
        Ok(Pattern { strands, events })
    }

    /// `n` parallel strands with nothing inserted.
    pub fn trivial(n: usize) -> Result<Self> {
        Pattern::new(n, Vec::new())
    }

    /// The Legendrian `(±1, n)` cable pattern, in the class `±μ + nλ` relative
    /// to the contact framing.
    ///
    /// The positive pattern moves the top strand to the bottom through
    /// `n − 1` crossings.  The negative pattern moves the bottom strand to the
    /// top along a zigzag (negative crossings) and adds a compensating zigzag
    /// so that the rotation number of the cable is `n · rot` of the companion.
    pub fn cable(sign: i8, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Schema("cable needs n ≥ 1".into()));
        }
        let events = if sign > 0 {
            (1..n).rev().map(cross).collect()
        } else {
            let mut w = vec![lcusp(n + 1)];
            w.extend((2..=n).rev().map(cross));
            w.extend([rcusp(1), lcusp(1), rcusp(2)]);
            w
        };
        Pattern::new(n, events)
    }
}

/// Classical invariants of the `(±1, n)` cable of a Legendrian knot.
pub fn cable_invariants(companion: &LegendrianFront, sign: i8, n: usize) -> Result<ClassicalInvariants> {
    companion.satellite(&Pattern::cable(sign, n)?)?.classical_invariants()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot_and_trefoil_invariants() {
        let u = LegendrianFront::unknot().classical_invariants().unwrap();
        assert_eq!((u.tb, u.rot), (-1, 0));
        let t = LegendrianFront::right_trefoil().classical_invariants().unwrap();
        assert_eq!((t.tb, t.rot, t.writhe), (1, 0, 3));
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(LegendrianFront::new(vec![lcusp(1)], vec![]), Err(Error::StrandCountMismatch { .. })));
        assert!(matches!(
            LegendrianFront::new(vec![lcusp(1), rcusp(2)], vec![]),
            Err(Error::StrandCountMismatch { .. })
        ));
        assert!(matches!(LegendrianFront::new(vec![], vec![]), Err(Error::OpenEnds)));
        assert!(LegendrianFront::new(vec![lcusp(1), rcusp(1)], vec![1, 1]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = LegendrianFront::right_trefoil();
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.starts_with(r#"{"events":[["lcusp",1],["lcusp",3]"#));
        assert_eq!(LegendrianFront::from_json(&text).unwrap(), f);
    }

    #[test]
    fn stabilization_changes_tb_and_rot() {
        let u = LegendrianFront::unknot();
        for sign in [1i8, -1] {
            let s = u.stabilize(0, sign).unwrap().classical_invariants().unwrap();
            assert_eq!((s.tb, s.rot_signed), (-2, sign as i64));
        }
    }

    #[test]
    fn pushoff_links_by_tb() {
        let two = LegendrianFront::right_trefoil().reeb_pushoff(2).unwrap();
        let inv = two.link_invariants();
        assert_eq!(inv.components.len(), 2);
        assert_eq!(inv.linking[0][1], 1);
        assert!(inv.components.iter().all(|c| c.tb == 1));
    }

    #[test]
    fn trefoil_pd_is_right_handed() {
        let pd = LegendrianFront::right_trefoil().to_pd();
        assert_eq!(pd.crossings.len(), 3);
        assert_eq!(pd.writhe().unwrap(), 3);
        let reference = PdCode::new(vec![[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]]);
        assert_eq!(crate::poly::homfly(&pd).unwrap(), crate::poly::homfly(&reference).unwrap());
        assert_eq!(LegendrianFront::unknot().to_pd(), PdCode::unknot());
    }

    #[test]
    fn cable_invariants_follow_slide_bookkeeping() {
        for companion in [LegendrianFront::unknot(), LegendrianFront::right_trefoil()] {
            let c = companion.classical_invariants().unwrap();
            for n in 1..=4i64 {
                let pos = cable_invariants(&companion, 1, n as usize).unwrap();
                assert_eq!((pos.tb, pos.rot_signed), (n * n * c.tb + n - 1, n * c.rot_signed));
                let neg = cable_invariants(&companion, -1, n as usize).unwrap();
                assert_eq!((neg.tb, neg.rot_signed), (n * n * c.tb - n - 1, n * c.rot_signed));
            }
        }
    }

    #[test]
    fn local_moves_preserve_invariants() {
        let key = |f: &LegendrianFront| {
            let inv = f.link_invariants();
            let tr: Vec<_> = inv.components.iter().map(|c| (c.tb, c.rot_signed)).collect();
            (tr, inv.linking)
        };
        let f = LegendrianFront::right_trefoil();
        let base = key(&f);
        let kinked = f.apply_move(LegendrianMove::InsertKink { at: 3, strand: 2 }).unwrap();
        assert_eq!(key(&kinked), base);
        let back = kinked.apply_move(LegendrianMove::RemoveKink { at: 3 }).unwrap();
        assert_eq!(back, f);
        let passed = f.apply_move(LegendrianMove::CuspPass { at: 1 }).unwrap();
        assert_eq!(passed.events().len(), f.events().len() + 2);
        assert_eq!(key(&passed), base);
        let undone = passed.apply_move(LegendrianMove::CuspPass { at: 1 }).unwrap();
        assert_eq!(undone, f);
    }
}
