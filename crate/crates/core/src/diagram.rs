//! Sliced diagrams: a bottom boundary word plus a stack of elementary layers.
//!
//! The framework knows nothing about webs or cobwebs. A generator alphabet
//! plugs in through [`Generator`], which reports the boundary words a
//! generator consumes and produces and how its ports are wired together.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::hash::Hash;

use crate::scalar::LaurentScalar;

/// Direction of a strand's arrow as it crosses a horizontal level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Up,
    Down,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Up => Dir::Down,
            Dir::Down => Dir::Up,
        }
    }
}

/// Orientation of the two strands at a bivalent vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flow {
    BothIn,
    BothOut,
}

impl Flow {
    pub fn flip(self) -> Flow {
        match self {
            Flow::BothIn => Flow::BothOut,
            Flow::BothOut => Flow::BothIn,
        }
    }

    /// Arrow direction of the lower strand at a vertical bivalent vertex.
    pub fn bottom_dir(self) -> Dir {
        match self {
            Flow::BothIn => Dir::Up,
            Flow::BothOut => Dir::Down,
        }
    }

    pub fn from_bottom_dir(dir: Dir) -> Flow {
        match dir {
            Dir::Up => Flow::BothIn,
            Dir::Down => Flow::BothOut,
        }
    }
}

/// Side a tag points to, relative to the upward direction of its layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrandEnd<L> {
    pub label: L,
    pub dir: Dir,
}

impl<L> StrandEnd<L> {
    pub fn new(label: L, dir: Dir) -> Self {
        Self { label, dir }
    }
}

pub type BoundaryWord<L> = Vec<StrandEnd<L>>;

/// How two ports of a generator are joined by a strand passing through it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Link {
    /// Input port to output port.
    Through(usize, usize),
    /// Two input ports (a cap).
    Cap(usize, usize),
    /// Two output ports (a cup).
    Cup(usize, usize),
}

/// What a strand meets when it passes straight through a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PassKind {
    Plain,
    Crossing,
    Tag,
}

pub trait Generator: Clone + Debug + PartialEq + Eq + Hash + PartialOrd + Ord {
    type Label: Clone + Debug + PartialEq + Eq + Hash + PartialOrd + Ord;

    fn inputs(&self, n: u8) -> BoundaryWord<Self::Label>;
    fn outputs(&self, n: u8) -> BoundaryWord<Self::Label>;
    /// Label and shape constraints for rank `n`.
    fn check(&self, n: u8) -> Result<(), String>;
    fn label_ok(label: &Self::Label, n: u8) -> bool;
    /// Strands passing through the generator. Unlisted ports end at a vertex.
    fn links(&self) -> Vec<Link>;
    fn pass_kind(&self) -> PassKind;
    fn name(&self) -> &'static str;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Layer<G> {
    pub pos: usize,
    pub gen: G,
}

impl<G> Layer<G> {
    pub fn new(pos: usize, gen: G) -> Self {
        Self { pos, gen }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("layer {layer} is ill-formed: {reason}")]
    IllFormed { layer: usize, reason: String },
    #[error("bad boundary label at position {position}")]
    BadBoundary { position: usize },
    #[error("boundary mismatch between composed diagrams")]
    BoundaryMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlicedDiagram<G: Generator> {
    n: u8,
    bottom: BoundaryWord<G::Label>,
    layers: Vec<Layer<G>>,
    top: BoundaryWord<G::Label>,
}

fn apply_layer<G: Generator>(
    n: u8,
    word: &[StrandEnd<G::Label>],
    layer: &Layer<G>,
    idx: usize,
) -> Result<BoundaryWord<G::Label>, DiagramError> {
    let ill = |reason: String| DiagramError::IllFormed { layer: idx, reason };
    layer.gen.check(n).map_err(ill)?;
    let inputs = layer.gen.inputs(n);
    let end = layer.pos + inputs.len();
    if end > word.len() {
        return Err(ill(alloc::format!(
            "position {} with {} inputs exceeds word of length {}",
            layer.pos,
            inputs.len(),
            word.len()
        )));
    }
    if word[layer.pos..end] != inputs[..] {
        return Err(ill(alloc::format!(
            "{} expects {:?} but boundary has {:?}",
            layer.gen.name(),
            inputs,
            &word[layer.pos..end]
        )));
    }
    let mut out = Vec::with_capacity(word.len() + 2);
    out.extend_from_slice(&word[..layer.pos]);
    out.extend(layer.gen.outputs(n));
    out.extend_from_slice(&word[end..]);
    Ok(out)
}

impl<G: Generator> SlicedDiagram<G> {
    /// Builds and validates a diagram.
    pub fn new(
        n: u8,
        bottom: BoundaryWord<G::Label>,
        layers: Vec<Layer<G>>,
    ) -> Result<Self, DiagramError> {
        if let Some(position) = bottom.iter().position(|e| !G::label_ok(&e.label, n)) {
            return Err(DiagramError::BadBoundary { position });
        }
        let mut word = bottom.clone();
        for (idx, layer) in layers.iter().enumerate() {
            word = apply_layer(n, &word, layer, idx)?;
        }
        Ok(Self {
            n,
            bottom,
            layers,
            top: word,
        })
    }

    pub fn identity(n: u8, word: BoundaryWord<G::Label>) -> Result<Self, DiagramError> {
        Self::new(n, word, Vec::new())
    }

    pub fn empty(n: u8) -> Self {
        Self {
            n,
            bottom: Vec::new(),
            layers: Vec::new(),
            top: Vec::new(),
        }
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn bottom(&self) -> &[StrandEnd<G::Label>] {
        &self.bottom
    }

    pub fn top(&self) -> &[StrandEnd<G::Label>] {
        &self.top
    }

    pub fn layers(&self) -> &[Layer<G>] {
        &self.layers
    }

    pub fn into_parts(self) -> (u8, BoundaryWord<G::Label>, Vec<Layer<G>>) {
        (self.n, self.bottom, self.layers)
    }

    pub fn is_closed(&self) -> bool {
        self.bottom.is_empty() && self.top.is_empty()
    }

    /// Re-checks every layer. Diagrams built through [`SlicedDiagram::new`]
    /// always pass.
    pub fn validate(&self) -> Result<(), DiagramError> {
        Self::new(self.n, self.bottom.clone(), self.layers.clone()).map(|_| ())
    }

    /// Boundary words at every level: `levels()[0]` is the bottom, the last is the top.
    pub fn levels(&self) -> Vec<BoundaryWord<G::Label>> {
        let mut out = Vec::with_capacity(self.layers.len() + 1);
        let mut word = self.bottom.clone();
        for (idx, layer) in self.layers.iter().enumerate() {
            let next = apply_layer(self.n, &word, layer, idx).expect("validated diagram");
            out.push(word);
            word = next;
        }
        out.push(word);
        out
    }

    /// Stacks `other` on top of `self`.
    pub fn compose(&self, other: &Self) -> Result<Self, DiagramError> {
        if self.n != other.n || self.top != other.bottom {
            return Err(DiagramError::BoundaryMismatch);
        }
        let mut layers = self.layers.clone();
        layers.extend(other.layers.iter().cloned());
        Ok(Self {
            n: self.n,
            bottom: self.bottom.clone(),
            layers,
            top: other.top.clone(),
        })
    }

    /// Places `other` to the right of `self`, with `self`'s layers first.
    pub fn beside(&self, other: &Self) -> Self {
        let mut bottom = self.bottom.clone();
        bottom.extend(other.bottom.iter().cloned());
        let width = self.top.len();
        let mut layers = self.layers.clone();
        layers.extend(
            other
                .layers
                .iter()
                .map(|l| Layer::new(l.pos + width, l.gen.clone())),
        );
        let mut top = self.top.clone();
        top.extend(other.top.iter().cloned());
        Self {
            n: self.n.max(other.n),
            bottom,
            layers,
            top,
        }
    }

    /// Replaces layers `range` with `replacement`, re-validating the result.
    pub fn splice(
        &self,
        range: core::ops::Range<usize>,
        replacement: Vec<Layer<G>>,
    ) -> Result<Self, DiagramError> {
        let mut layers = Vec::with_capacity(self.layers.len() + replacement.len());
        layers.extend_from_slice(&self.layers[..range.start]);
        layers.extend(replacement);
        layers.extend_from_slice(&self.layers[range.end..]);
        let out = Self::new(self.n, self.bottom.clone(), layers)?;
        if out.top != self.top {
            return Err(DiagramError::BoundaryMismatch);
        }
        Ok(out)
    }

    fn arity(&self, idx: usize) -> (usize, usize) {
        let g = &self.layers[idx].gen;
        (g.inputs(self.n).len(), g.outputs(self.n).len())
    }

    /// Whether layer `idx + 1` acts on strands disjoint from the outputs of layer `idx`.
    pub fn can_exchange(&self, idx: usize) -> bool {
        if idx + 1 >= self.layers.len() {
            return false;
        }
        let a = self.layers[idx].pos;
        let (_, oa) = self.arity(idx);
        let b = self.layers[idx + 1].pos;
        let (ib, _) = self.arity(idx + 1);
        b + ib <= a || b >= a + oa
    }

    /// Swaps layers `idx` and `idx + 1` when they act on disjoint strands.
    pub fn exchange(&self, idx: usize) -> Option<Self> {
        if !self.can_exchange(idx) {
            return None;
        }
        let (ia, oa) = self.arity(idx);
        let (ib, ob) = self.arity(idx + 1);
        let a = self.layers[idx].pos;
        let b = self.layers[idx + 1].pos;
        let (new_lower, new_upper) = if b + ib <= a {
            (b, a + ob - ib)
        } else {
            (b + ia - oa, a)
        };
        let mut layers = self.layers.clone();
        let lower = Layer::new(new_lower, self.layers[idx + 1].gen.clone());
        let upper = Layer::new(new_upper, self.layers[idx].gen.clone());
        layers[idx] = lower;
        layers[idx + 1] = upper;
        let out = Self::new(self.n, self.bottom.clone(), layers).ok()?;
        debug_assert_eq!(out.top, self.top);
        Some(out)
    }

    /// Removes a cup at `idx` immediately capped at `idx + 1` on one of its legs
    /// together with a neighbouring strand (a zigzag).
    pub fn straighten_zigzag(&self, idx: usize) -> Option<Self> {
        if idx + 1 >= self.layers.len() {
            return None;
        }
        let cup = &self.layers[idx];
        let cap = &self.layers[idx + 1];
        let is_cup = cup.gen.links() == [Link::Cup(0, 1)];
        let is_cap = cap.gen.links() == [Link::Cap(0, 1)];
        if !is_cup || !is_cap {
            return None;
        }
        if cap.pos + 1 == cup.pos || cap.pos == cup.pos + 1 {
            self.splice(idx..idx + 2, Vec::new()).ok()
        } else {
            None
        }
    }

    /// Drops generators that pass every strand straight through with no event.
    pub fn without_identities(&self) -> Self {
        let layers: Vec<_> = self
            .layers
            .iter()
            .filter(|l| {
                !(l.gen.pass_kind() == PassKind::Plain
                    && l.gen.links() == [Link::Through(0, 0)])
            })
            .cloned()
            .collect();
        Self::new(self.n, self.bottom.clone(), layers).expect("identities are transparent")
    }

    pub fn trace_curves(&self) -> Vec<Curve> {
        trace(self)
    }

    /// Erases a set of strand pieces. A layer disappears when all of its ports
    /// are erased, or when it is a crossing that loses one of its two strands.
    /// Erasing only part of any other layer is an error.
    pub fn delete_slots(&self, doomed: &BTreeSet<Slot>) -> Result<Self, DiagramError> {
        let levels = self.levels();
        let gone = |level: usize, pos: usize| doomed.contains(&Slot { level, pos });
        let bottom = levels[0]
            .iter()
            .enumerate()
            .filter(|(p, _)| !gone(0, *p))
            .map(|(_, e)| e.clone())
            .collect();
        let mut layers = Vec::with_capacity(self.layers.len());
        for (li, layer) in self.layers.iter().enumerate() {
            let (ia, oa) = self.arity(li);
            let a = layer.pos;
            let dead_in = (a..a + ia).filter(|&p| gone(li, p)).count();
            let dead_out = (a..a + oa).filter(|&p| gone(li + 1, p)).count();
            if dead_in == 0 && dead_out == 0 {
                let shift = (0..a).filter(|&p| gone(li, p)).count();
                layers.push(Layer::new(a - shift, layer.gen.clone()));
                continue;
            }
            let all_dead = dead_in == ia && dead_out == oa;
            let half_crossing = layer.gen.pass_kind() == PassKind::Crossing
                && dead_in == 1
                && dead_out == 1;
            if !(all_dead || half_crossing) {
                return Err(DiagramError::IllFormed {
                    layer: li,
                    reason: alloc::format!("cannot erase part of {}", layer.gen.name()),
                });
            }
        }
        Self::new(self.n, bottom, layers)
    }
}

/// A strand piece in the word at `level` (between layers `level - 1` and `level`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub level: usize,
    pub pos: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Bottom(usize),
    Top(usize),
    /// An unlinked port of a generator: `input` selects the side of the layer.
    Vertex { layer: usize, input: bool, port: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Cup { left_to_right: bool },
    Cap { left_to_right: bool },
    Pass(PassKind),
}

/// Something a curve meets, in walk order. `heading` is the walk direction
/// when entering the event (for cups it is `Down`, for caps `Up`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveEvent {
    pub layer: usize,
    pub kind: EventKind,
    pub heading: Dir,
}

/// A maximal curve. `slots` lists every strand piece visited, in walk order,
/// with the walking direction there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub slots: Vec<(Slot, Dir)>,
    pub events: Vec<CurveEvent>,
    /// `None` for closed curves.
    pub ends: Option<(Endpoint, Endpoint)>,
}

impl Curve {
    pub fn is_closed(&self) -> bool {
        self.ends.is_none()
    }
}

enum Step {
    Next(Slot, Dir, Option<CurveEvent>),
    End(Endpoint),
}

struct Walker<'a, G: Generator> {
    d: &'a SlicedDiagram<G>,
    arities: Vec<(usize, usize)>,
    links: Vec<Vec<Link>>,
}

impl<'a, G: Generator> Walker<'a, G> {
    fn new(d: &'a SlicedDiagram<G>) -> Self {
        let arities = (0..d.layers.len()).map(|i| d.arity(i)).collect();
        let links = d.layers.iter().map(|l| l.gen.links()).collect();
        Self { d, arities, links }
    }

    fn step(&self, slot: Slot, heading: Dir) -> Step {
        let Slot { level, pos } = slot;
        match heading {
            Dir::Up => {
                if level == self.d.layers.len() {
                    return Step::End(Endpoint::Top(pos));
                }
                let a = self.d.layers[level].pos;
                let (ia, oa) = self.arities[level];
                if pos < a {
                    return Step::Next(Slot { level: level + 1, pos }, Dir::Up, None);
                }
                if pos >= a + ia {
                    let p = pos - ia + oa;
                    return Step::Next(Slot { level: level + 1, pos: p }, Dir::Up, None);
                }
                let port = pos - a;
                for link in &self.links[level] {
                    match *link {
                        Link::Through(i, o) if i == port => {
                            let ev = CurveEvent {
                                layer: level,
                                kind: EventKind::Pass(self.d.layers[level].gen.pass_kind()),
                                heading: Dir::Up,
                            };
                            let next = Slot { level: level + 1, pos: a + o };
                            return Step::Next(next, Dir::Up, Some(ev));
                        }
                        Link::Cap(i, j) if i == port || j == port => {
                            let other = if i == port { j } else { i };
                            let ev = CurveEvent {
                                layer: level,
                                kind: EventKind::Cap { left_to_right: other > port },
                                heading: Dir::Up,
                            };
                            return Step::Next(Slot { level, pos: a + other }, Dir::Down, Some(ev));
                        }
                        _ => {}
                    }
                }
                Step::End(Endpoint::Vertex { layer: level, input: true, port })
            }
            Dir::Down => {
                if level == 0 {
                    return Step::End(Endpoint::Bottom(pos));
                }
                let li = level - 1;
                let a = self.d.layers[li].pos;
                let (ia, oa) = self.arities[li];
                if pos < a {
                    return Step::Next(Slot { level: li, pos }, Dir::Down, None);
                }
                if pos >= a + oa {
                    let p = pos - oa + ia;
                    return Step::Next(Slot { level: li, pos: p }, Dir::Down, None);
                }
                let port = pos - a;
                for link in &self.links[li] {
                    match *link {
                        Link::Through(i, o) if o == port => {
                            let ev = CurveEvent {
                                layer: li,
                                kind: EventKind::Pass(self.d.layers[li].gen.pass_kind()),
                                heading: Dir::Down,
                            };
                            return Step::Next(Slot { level: li, pos: a + i }, Dir::Down, Some(ev));
                        }
                        Link::Cup(i, j) if i == port || j == port => {
                            let other = if i == port { j } else { i };
                            let ev = CurveEvent {
                                layer: li,
                                kind: EventKind::Cup { left_to_right: other > port },
                                heading: Dir::Down,
                            };
                            return Step::Next(Slot { level, pos: a + other }, Dir::Up, Some(ev));
                        }
                        _ => {}
                    }
                }
                Step::End(Endpoint::Vertex { layer: li, input: false, port })
            }
        }
    }
}

fn trace<G: Generator>(d: &SlicedDiagram<G>) -> Vec<Curve> {
    let walker = Walker::new(d);
    let levels = d.levels();
    let mut visited: Vec<Vec<bool>> = levels.iter().map(|w| vec![false; w.len()]).collect();
    let mut curves = Vec::new();

    let walk_open = |start: Slot, heading: Dir, origin: Endpoint, visited: &mut Vec<Vec<bool>>| {
        let mut slots = Vec::new();
        let mut events = Vec::new();
        let (mut slot, mut h) = (start, heading);
        loop {
            visited[slot.level][slot.pos] = true;
            slots.push((slot, h));
            match walker.step(slot, h) {
                Step::Next(s, nh, ev) => {
                    events.extend(ev);
                    slot = s;
                    h = nh;
                }
                Step::End(end) => {
                    return Curve {
                        slots,
                        events,
                        ends: Some((origin, end)),
                    };
                }
            }
        }
    };

    let top_level = levels.len() - 1;
    for p in 0..levels[0].len() {
        if !visited[0][p] {
            let c = walk_open(Slot { level: 0, pos: p }, Dir::Up, Endpoint::Bottom(p), &mut visited);
            curves.push(c);
        }
    }
    for p in 0..levels[top_level].len() {
        if !visited[top_level][p] {
            let c = walk_open(
                Slot { level: top_level, pos: p },
                Dir::Down,
                Endpoint::Top(p),
                &mut visited,
            );
            curves.push(c);
        }
    }
    for (li, layer) in d.layers.iter().enumerate() {
        let (ia, oa) = walker.arities[li];
        let linked_in = |port: usize| {
            walker.links[li].iter().any(|l| match *l {
                Link::Through(i, _) => i == port,
                Link::Cap(i, j) => i == port || j == port,
                Link::Cup(..) => false,
            })
        };
        let linked_out = |port: usize| {
            walker.links[li].iter().any(|l| match *l {
                Link::Through(_, o) => o == port,
                Link::Cup(i, j) => i == port || j == port,
                Link::Cap(..) => false,
            })
        };
        for port in 0..ia {
            let slot = Slot { level: li, pos: layer.pos + port };
            if !linked_in(port) && !visited[slot.level][slot.pos] {
                let origin = Endpoint::Vertex { layer: li, input: true, port };
                curves.push(walk_open(slot, Dir::Down, origin, &mut visited));
            }
        }
        for port in 0..oa {
            let slot = Slot { level: li + 1, pos: layer.pos + port };
            if !linked_out(port) && !visited[slot.level][slot.pos] {
                let origin = Endpoint::Vertex { layer: li, input: false, port };
                curves.push(walk_open(slot, Dir::Up, origin, &mut visited));
            }
        }
    }
    for level in 0..levels.len() {
        for pos in 0..levels[level].len() {
            if visited[level][pos] {
                continue;
            }
            let start = Slot { level, pos };
            let mut slots = Vec::new();
            let mut events = Vec::new();
            let (mut slot, mut h) = (start, Dir::Up);
            loop {
                visited[slot.level][slot.pos] = true;
                slots.push((slot, h));
                match walker.step(slot, h) {
                    Step::Next(s, nh, ev) => {
                        events.extend(ev);
                        slot = s;
                        h = nh;
                        if slot == start && h == Dir::Up {
                            break;
                        }
                    }
                    Step::End(_) => unreachable!("closed walk reached an endpoint"),
                }
            }
            curves.push(Curve {
                slots,
                events,
                ends: None,
            });
        }
    }
    curves
}

/// A formal linear combination of diagrams sharing one boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb<G: Generator> {
    terms: BTreeMap<SlicedDiagram<G>, LaurentScalar>,
}

impl<G: Generator> Default for LinComb<G> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<G: Generator> LinComb<G> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(coefficient: LaurentScalar, d: SlicedDiagram<G>) -> Self {
        let mut out = Self::new();
        out.add_term(coefficient, d).expect("one term always fits");
        out
    }

    /// Adds `coefficient * d`, collecting structurally equal diagrams.
    pub fn add_term(
        &mut self,
        coefficient: LaurentScalar,
        d: SlicedDiagram<G>,
    ) -> Result<(), DiagramError> {
        if let Some((first, _)) = self.terms.iter().next() {
            if first.bottom != d.bottom || first.top != d.top {
                return Err(DiagramError::BoundaryMismatch);
            }
        }
        let slot = self.terms.entry(d).or_default();
        *slot += coefficient;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, DiagramError> {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(c.clone(), d.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: &LaurentScalar) -> Self {
        let mut out = Self::new();
        if s.is_zero() {
            return out;
        }
        for (d, c) in &self.terms {
            out.terms.insert(d.clone(), c * s);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (structural key) order.
    pub fn iter(&self) -> impl Iterator<Item = (&LaurentScalar, &SlicedDiagram<G>)> {
        self.terms.iter().map(|(d, c)| (c, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobweb::random::{random_closed, random_open, Shape};
    use crate::cobweb::{evaluate, Cobweb, CobwebEnd, CobwebGen, Root};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn a(i: u8, j: u8) -> Root {
        Root::new(i, j).unwrap()
    }

    fn open(seed: u64, width: usize) -> Cobweb {
        let shape = Shape {
            n: 3,
            max_strands: 6,
            steps: 8,
        };
        random_open(&mut ChaCha8Rng::seed_from_u64(seed), &shape, width)
    }

    #[test]
    fn rejects_bad_layers() {
        let up = CobwebEnd::new(a(1, 2), Dir::Up);
        let err = Cobweb::new(3, vec![up], vec![Layer::new(1, CobwebGen::Cap(a(1, 2), Dir::Up))]);
        assert!(matches!(err, Err(DiagramError::IllFormed { layer: 0, .. })));
        let err = Cobweb::new(2, vec![CobwebEnd::new(a(1, 3), Dir::Up)], vec![]);
        assert_eq!(err.unwrap_err(), DiagramError::BadBoundary { position: 0 });
    }

    #[test]
    fn empty_and_identity() {
        let e = Cobweb::empty(3);
        assert!(e.is_closed());
        assert!(e.trace_curves().is_empty());
        let w = vec![CobwebEnd::new(a(1, 2), Dir::Up), CobwebEnd::new(a(3, 1), Dir::Down)];
        let id = Cobweb::identity(3, w.clone()).unwrap();
        assert_eq!(id.top(), &w[..]);
        let curves = id.trace_curves();
        assert_eq!(curves.len(), 2);
        assert!(curves.iter().all(|c| !c.is_closed() && c.events.is_empty()));
    }

    #[test]
    fn splice_keeps_top() {
        let r = a(2, 1);
        let loop_ = Cobweb::new(
            3,
            vec![],
            vec![Layer::new(0, CobwebGen::Cup(r, Dir::Down)), Layer::new(0, CobwebGen::Cap(r, Dir::Down))],
        )
        .unwrap();
        assert!(loop_.splice(1..2, vec![]).is_err());
        assert_eq!(loop_.splice(0..2, vec![]).unwrap(), Cobweb::empty(3));
    }

    #[test]
    fn zigzag_straightens() {
        let r = a(1, 2);
        let up = CobwebEnd::new(r, Dir::Up);
        let z = Cobweb::new(
            2,
            vec![up],
            vec![Layer::new(1, CobwebGen::Cup(r, Dir::Down)), Layer::new(0, CobwebGen::Cap(r, Dir::Up))],
        )
        .unwrap();
        let s = z.straighten_zigzag(0).unwrap();
        assert!(s.layers().is_empty());
        assert_eq!(evaluate(&s), evaluate(&z));
    }

    #[test]
    fn deleting_a_loop() {
        let r = a(2, 1);
        let d = Cobweb::new(
            3,
            vec![CobwebEnd::new(r, Dir::Up)],
            vec![Layer::new(1, CobwebGen::Cup(r, Dir::Down)), Layer::new(1, CobwebGen::Cap(r, Dir::Down))],
        )
        .unwrap();
        let curves = d.trace_curves();
        let closed = curves.iter().find(|c| c.is_closed()).unwrap();
        let doomed: BTreeSet<Slot> = closed.slots.iter().map(|(s, _)| *s).collect();
        let e = d.delete_slots(&doomed).unwrap();
        assert!(e.layers().is_empty());
        assert_eq!(e.bottom(), d.bottom());
    }

    #[test]
    fn lincomb_collects_terms() {
        let d = open(1, 2);
        let mut c = LinComb::single(LaurentScalar::one(), d.clone());
        c.add_term(LaurentScalar::q(), d.clone()).unwrap();
        assert_eq!(c.len(), 1);
        let other = Cobweb::identity(3, vec![CobwebEnd::new(a(1, 2), Dir::Up)]).unwrap();
        assert!(c.add_term(LaurentScalar::one(), other).is_err());
        c.add_term(-(LaurentScalar::one() + LaurentScalar::q()), d.clone()).unwrap();
        assert!(c.is_empty());
    }

    proptest! {
        #[test]
        fn curves_partition_slots(seed in any::<u64>(), width in 0usize..4) {
            let d = open(seed, width);
            let levels = d.levels();
            let total: usize = levels.iter().map(|w| w.len()).sum();
            let mut seen = BTreeSet::new();
            for c in d.trace_curves() {
                for (s, _) in c.slots {
                    prop_assert!(seen.insert(s), "slot {:?} visited twice", s);
                }
            }
            prop_assert_eq!(seen.len(), total);
        }

        #[test]
        fn compose_is_associative(seed in any::<u64>()) {
            let x = open(seed, 2);
            let top = x.top().to_vec();
            let y = Cobweb::identity(3, top.clone()).unwrap();
            let z = Cobweb::identity(3, top).unwrap();
            let left = x.compose(&y).unwrap().compose(&z).unwrap();
            let right = x.compose(&y.compose(&z).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn beside_multiplies_closed_values(s1 in any::<u64>(), s2 in any::<u64>()) {
            let shape = Shape { n: 3, max_strands: 6, steps: 8 };
            let x = random_closed(&mut ChaCha8Rng::seed_from_u64(s1), &shape);
            let y = random_closed(&mut ChaCha8Rng::seed_from_u64(s2), &shape);
            prop_assert_eq!(evaluate(&x.beside(&y)), evaluate(&x) * evaluate(&y));
        }

        #[test]
        fn exchange_is_an_isotopy(seed in any::<u64>(), width in 0usize..4) {
            let d = open(seed, width);
            for idx in 0..d.layers().len() {
                if let Some(e) = d.exchange(idx) {
                    prop_assert_eq!(e.top(), d.top());
                    prop_assert_eq!(evaluate(&e), evaluate(&d));
                }
            }
        }
    }
}
