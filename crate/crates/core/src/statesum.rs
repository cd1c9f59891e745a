//! The state sum from webs to cobwebs.
//!
//! A state assigns a subset of `{1..=n}` to every web edge. Each edge with
//! set `K` is cabled into strands `α_{i,j}` for `i ∈ K`, `j ∉ K`, and each
//! vertex is replaced by a cobweb fragment wiring those cables together.

use alloc::vec;
use alloc::vec::Vec;

use crate::cobweb::{Cobweb, CobwebEnd, CobwebGen, Root};
use crate::diagram::{Dir, Generator, Layer, Link, LinComb, Side, StrandEnd};
use crate::cobweb::evaluate;
use crate::scalar::LaurentScalar;
use crate::web::{Web, WebEnd, WebGen};

/// A subset of `{1..=n}`: bit `i - 1` stands for `i`.
pub type Subset = u32;

pub fn full_set(n: u8) -> Subset {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub fn contains(s: Subset, i: u8) -> bool {
    s & (1 << (i - 1)) != 0
}

pub fn elements(s: Subset) -> impl Iterator<Item = u8> {
    (1..=32u8).filter(move |&i| contains(s, i))
}

pub fn subset_from(elems: &[u8]) -> Subset {
    elems.iter().fold(0, |acc, &i| acc | 1 << (i - 1))
}

/// All `k`-subsets of `{1..=n}`, lexicographic in their sorted elements.
pub fn subsets_of_size(n: u8, k: u8) -> Vec<Subset> {
    fn rec(start: u8, n: u8, left: u8, acc: Subset, out: &mut Vec<Subset>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..=n {
            if n - i + 1 < left {
                break;
            }
            rec(i + 1, n, left - 1, acc | 1 << (i - 1), out);
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(1, n, k, 0, &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StateSumError {
    #[error("boundary set at {side} position {position} has the wrong size")]
    InconsistentBoundary { side: &'static str, position: usize },
    #[error("boundary data has {got} entries on the {side}, expected {expected}")]
    BoundaryLength { side: &'static str, expected: usize, got: usize },
    #[error("sets at layer {layer} violate its vertex rule")]
    StateMismatch { layer: usize },
}

/// Sets on the bottom and top boundary positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryData {
    pub bottom: Vec<Subset>,
    pub top: Vec<Subset>,
}

/// Web edges: maximal strands through identities, cups and caps.
#[derive(Clone, Debug)]
pub struct Edges {
    /// `slot_edge[level][pos]`.
    pub slot_edge: Vec<Vec<usize>>,
    pub labels: Vec<u8>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn edges(web: &Web) -> Edges {
    let levels = web.levels();
    let mut base = Vec::with_capacity(levels.len());
    let mut total = 0;
    for w in &levels {
        base.push(total);
        total += w.len();
    }
    let mut parent: Vec<usize> = (0..total).collect();
    let mut union = |a: usize, b: usize| {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    };
    let n = web.n();
    for (li, layer) in web.layers().iter().enumerate() {
        let ins = layer.gen.inputs(n).len();
        let outs = layer.gen.outputs(n).len();
        let (lo, hi) = (base[li], base[li + 1]);
        let p = layer.pos;
        for q in 0..levels[li].len() {
            if q < p {
                union(lo + q, hi + q);
            } else if q >= p + ins {
                union(lo + q, hi + q + outs - ins);
            }
        }
        for link in layer.gen.links() {
            match link {
                Link::Through(a, b) => union(lo + p + a, hi + p + b),
                Link::Cap(a, b) => union(lo + p + a, lo + p + b),
                Link::Cup(a, b) => union(hi + p + a, hi + p + b),
            }
        }
    }
    // Number edges by first appearance.
    let mut id_of_root = vec![usize::MAX; total];
    let mut labels = Vec::new();
    let mut slot_edge = Vec::with_capacity(levels.len());
    for (li, w) in levels.iter().enumerate() {
        let mut row = Vec::with_capacity(w.len());
        for (q, e) in w.iter().enumerate() {
            let r = find(&mut parent, base[li] + q);
            if id_of_root[r] == usize::MAX {
                id_of_root[r] = labels.len();
                labels.push(e.label);
            }
            row.push(id_of_root[r]);
        }
        slot_edge.push(row);
    }
    Edges { slot_edge, labels }
}

/// A state: one set per edge, indexed like [`Edges::labels`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub sets: Vec<Subset>,
}

#[derive(Clone, Debug)]
enum Rule {
    /// `out = a ∪ b` with `a`, `b` disjoint.
    Union { a: usize, b: usize, out: usize },
    /// `a` and `b` are complements.
    Complement { a: usize, b: usize },
}

fn rules(web: &Web, e: &Edges) -> Vec<Rule> {
    let mut out = Vec::new();
    for (li, layer) in web.layers().iter().enumerate() {
        let below = |i: usize| e.slot_edge[li][layer.pos + i];
        let above = |i: usize| e.slot_edge[li + 1][layer.pos + i];
        match layer.gen {
            WebGen::Merge { .. } => out.push(Rule::Union {
                a: below(0),
                b: below(1),
                out: above(0),
            }),
            WebGen::Split { .. } => out.push(Rule::Union {
                a: above(0),
                b: above(1),
                out: below(0),
            }),
            WebGen::Tag { .. } => out.push(Rule::Complement {
                a: below(0),
                b: above(0),
            }),
            _ => {}
        }
    }
    out
}

fn rule_holds(r: &Rule, sets: &[Option<Subset>], full: Subset) -> bool {
    match *r {
        Rule::Union { a, b, out } => match (sets[a], sets[b], sets[out]) {
            (Some(x), Some(y), Some(z)) => x & y == 0 && x | y == z,
            (Some(x), Some(y), None) => x & y == 0,
            (Some(x), None, Some(z)) | (None, Some(x), Some(z)) => x & !z == 0,
            _ => true,
        },
        Rule::Complement { a, b } => match (sets[a], sets[b]) {
            (Some(x), Some(y)) => x & y == 0 && x | y == full,
            _ => true,
        },
    }
}

/// A value forced on `edge` by some rule, if any.
fn forced(edge: usize, rules: &[Rule], sets: &[Option<Subset>], full: Subset) -> Option<Subset> {
    for r in rules {
        match *r {
            Rule::Union { a, b, out } => {
                if edge == out {
                    if let (Some(x), Some(y)) = (sets[a], sets[b]) {
                        return Some(x | y);
                    }
                } else if edge == a || edge == b {
                    let other = if edge == a { b } else { a };
                    if let (Some(x), Some(z)) = (sets[other], sets[out]) {
                        return Some(z & !x);
                    }
                }
            }
            Rule::Complement { a, b } => {
                let other = if edge == a {
                    b
                } else if edge == b {
                    a
                } else {
                    continue;
                };
                if let Some(x) = sets[other] {
                    return Some(full & !x);
                }
            }
        }
    }
    None
}

fn fix_boundary(
    sets: &mut [Option<Subset>],
    row: &[usize],
    data: &[Subset],
    labels: &[u8],
    side: &'static str,
) -> Result<bool, StateSumError> {
    if row.len() != data.len() {
        return Err(StateSumError::BoundaryLength {
            side,
            expected: row.len(),
            got: data.len(),
        });
    }
    for (position, (&edge, &s)) in row.iter().zip(data).enumerate() {
        if s.count_ones() != labels[edge] as u32 {
            return Err(StateSumError::InconsistentBoundary { side, position });
        }
        match sets[edge] {
            Some(prev) if prev != s => return Ok(false),
            _ => sets[edge] = Some(s),
        }
    }
    Ok(true)
}

/// All states agreeing with `data`, in lexicographic order of their set
/// vectors (edges numbered by first appearance, bottom to top).
pub fn enumerate_states(web: &Web, data: &BoundaryData) -> Result<Vec<State>, StateSumError> {
    let e = edges(web);
    let n = web.n();
    let full = full_set(n);
    let mut sets: Vec<Option<Subset>> = vec![None; e.labels.len()];
    let last = e.slot_edge.len() - 1;
    let bottom_ok = fix_boundary(&mut sets, &e.slot_edge[0], &data.bottom, &e.labels, "bottom")?;
    let top_ok = fix_boundary(&mut sets, &e.slot_edge[last], &data.top, &e.labels, "top")?;
    if !bottom_ok || !top_ok {
        return Ok(Vec::new());
    }
    for (edge, &k) in e.labels.iter().enumerate() {
        if k == n {
            match sets[edge] {
                Some(s) if s != full => return Ok(Vec::new()),
                _ => sets[edge] = Some(full),
            }
        }
    }
    let rules = rules(web, &e);
    let candidates: Vec<Vec<Subset>> = e.labels.iter().map(|&k| subsets_of_size(n, k)).collect();
    let mut out = Vec::new();
    search(0, &mut sets, &rules, &candidates, &e.labels, full, &mut out);
    out.sort();
    Ok(out)
}

fn search(
    edge: usize,
    sets: &mut Vec<Option<Subset>>,
    rules: &[Rule],
    candidates: &[Vec<Subset>],
    labels: &[u8],
    full: Subset,
    out: &mut Vec<State>,
) {
    if !rules.iter().all(|r| rule_holds(r, sets, full)) {
        return;
    }
    if edge == sets.len() {
        out.push(State {
            sets: sets.iter().map(|s| s.expect("all edges assigned")).collect(),
        });
        return;
    }
    if sets[edge].is_some() {
        search(edge + 1, sets, rules, candidates, labels, full, out);
        return;
    }
    let options = match forced(edge, rules, sets, full) {
        Some(s) if s.count_ones() == labels[edge] as u32 => vec![s],
        Some(_) => return,
        None => candidates[edge].clone(),
    };
    for s in options {
        sets[edge] = Some(s);
        search(edge + 1, sets, rules, candidates, labels, full, out);
    }
    sets[edge] = None;
}

/// Strands `α_{i,j}` for `i ∈ k`, `j ∉ k`, in lexicographic `(i, j)` order.
pub fn cable(k: Subset, n: u8, dir: Dir) -> Vec<CobwebEnd> {
    let mut out = Vec::new();
    for i in 1..=n {
        if !contains(k, i) {
            continue;
        }
        for j in 1..=n {
            if !contains(k, j) {
                out.push(StrandEnd::new(Root { i, j }, dir));
            }
        }
    }
    out
}

/// How a fragment connects its bottom word to its top word.
#[derive(Clone, Debug, Default)]
struct Route {
    bottom: Vec<CobwebEnd>,
    top: Vec<CobwebEnd>,
    /// `(bottom index, top index, tag)`.
    through: Vec<(usize, usize, Option<Side>)>,
    /// Bottom indices `left < right`; the tag sits on the left leg.
    caps: Vec<(usize, usize, Option<Side>)>,
    /// Top indices `left < right`; the tag sits on the left leg.
    cups: Vec<(usize, usize, Option<Side>)>,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Target {
    Top(usize),
    Cap(usize),
}

struct Router {
    word: Vec<(CobwebEnd, Target)>,
    layers: Vec<Layer<CobwebGen>>,
}

impl Router {
    fn push(&mut self, pos: usize, gen: CobwebGen) {
        match gen {
            CobwebGen::Cross(..) => self.word.swap(pos, pos + 1),
            CobwebGen::Tag { root, flow, .. } => {
                self.word[pos].0 = StrandEnd::new(root.conj(), flow.bottom_dir().flip());
            }
            CobwebGen::Cap(..) => {
                self.word.drain(pos..pos + 2);
            }
            _ => unreachable!("cups are pushed by hand"),
        }
        self.layers.push(Layer::new(pos, gen));
    }

    fn cross(&mut self, pos: usize) {
        let (a, b) = (self.word[pos].0, self.word[pos + 1].0);
        self.push(pos, CobwebGen::Cross(a, b));
    }

    fn tag(&mut self, pos: usize, side: Side) {
        let e = self.word[pos].0;
        self.push(pos, CobwebGen::tag(e.label, e.dir, side));
    }
}

fn route(r: &Route) -> Vec<Layer<CobwebGen>> {
    let mut targets = vec![Target::Top(usize::MAX); r.bottom.len()];
    for &(b, t, _) in &r.through {
        targets[b] = Target::Top(t);
    }
    for (c, &(a, b, _)) in r.caps.iter().enumerate() {
        targets[a] = Target::Cap(c);
        targets[b] = Target::Cap(c);
    }
    let mut rt = Router {
        word: r.bottom.iter().copied().zip(targets).collect(),
        layers: Vec::new(),
    };
    for (c, &(_, _, side)) in r.caps.iter().enumerate() {
        let mut legs = rt.word.iter().enumerate().filter(|(_, (_, t))| *t == Target::Cap(c));
        let a = legs.next().expect("left leg").0;
        let mut b = legs.next().expect("right leg").0;
        while b > a + 1 {
            rt.cross(b - 1);
            b -= 1;
        }
        if rt.word[a].0.label != rt.word[b].0.label {
            rt.tag(a, side.expect("a cap joining conjugate roots carries a tag"));
        }
        let left = rt.word[a].0;
        rt.push(a, CobwebGen::Cap(left.label, left.dir));
    }
    for &(_, t, side) in &r.through {
        if let Some(side) = side {
            let p = rt
                .word
                .iter()
                .position(|(_, x)| *x == Target::Top(t))
                .expect("through strand present");
            rt.tag(p, side);
        }
    }
    for &(tl, tr, side) in &r.cups {
        let (left, right) = (r.top[tl], r.top[tr]);
        let p = rt.word.len();
        match side {
            Some(side) => {
                let below = StrandEnd::new(right.label, right.dir.flip());
                rt.layers.push(Layer::new(p, CobwebGen::Cup(below.label, below.dir)));
                rt.word.push((below, Target::Top(tl)));
                rt.word.push((right, Target::Top(tr)));
                rt.tag(p, side);
                debug_assert_eq!(rt.word[p].0, left);
            }
            None => {
                rt.layers.push(Layer::new(p, CobwebGen::Cup(left.label, left.dir)));
                rt.word.push((left, Target::Top(tl)));
                rt.word.push((right, Target::Top(tr)));
            }
        }
    }
    // Bubble sort into the top order. Legs of one cup are never inverted.
    loop {
        let inv = (0..rt.word.len().saturating_sub(1)).find(|&p| rt.word[p].1 > rt.word[p + 1].1);
        match inv {
            Some(p) => rt.cross(p),
            None => break,
        }
    }
    debug_assert!(rt.word.iter().map(|(e, _)| *e).eq(r.top.iter().copied()));
    rt.layers
}

fn index_of(word: &[CobwebEnd], root: Root) -> usize {
    word.iter()
        .position(|e| e.label == root)
        .expect("root present in cable")
}

/// The cobweb fragment replacing one web generator, given the sets on its
/// input and output strands. Positions are relative to the fragment.
pub fn vertex_image(
    n: u8,
    gen: &WebGen,
    inputs: &[Subset],
    outputs: &[Subset],
) -> Option<Vec<Layer<CobwebGen>>> {
    let full = full_set(n);
    let mut r = Route::default();
    match *gen {
        WebGen::Id { dir, .. } => {
            let k = inputs[0];
            if outputs[0] != k {
                return None;
            }
            r.bottom = cable(k, n, dir);
            r.top = r.bottom.clone();
            r.through = (0..r.bottom.len()).map(|i| (i, i, None)).collect();
        }
        WebGen::Cup { dir, .. } => {
            let k = outputs[0];
            if outputs[1] != k {
                return None;
            }
            let left = cable(k, n, dir);
            let right = cable(k, n, dir.flip());
            for (i, e) in left.iter().enumerate() {
                r.cups.push((i, left.len() + index_of(&right, e.label), None));
            }
            r.top = [left, right].concat();
        }
        WebGen::Cap { dir, .. } => {
            let k = inputs[0];
            if inputs[1] != k {
                return None;
            }
            let left = cable(k, n, dir);
            let right = cable(k, n, dir.flip());
            for (i, e) in left.iter().enumerate() {
                r.caps.push((i, left.len() + index_of(&right, e.label), None));
            }
            r.bottom = [left, right].concat();
        }
        WebGen::Merge { dir, .. } => {
            let (k, l, m) = (inputs[0], inputs[1], outputs[0]);
            if k & l != 0 || k | l != m {
                return None;
            }
            let left = cable(k, n, dir);
            let right = cable(l, n, dir);
            r.top = cable(m, n, dir);
            for (i, e) in left.iter().enumerate() {
                if contains(m, e.label.j) {
                    let j = left.len() + index_of(&right, e.label.conj());
                    r.caps.push((i, j, Some(Side::Left)));
                } else {
                    r.through.push((i, index_of(&r.top, e.label), None));
                }
            }
            for (i, e) in right.iter().enumerate() {
                if !contains(m, e.label.j) {
                    r.through.push((left.len() + i, index_of(&r.top, e.label), None));
                }
            }
            r.bottom = [left, right].concat();
        }
        WebGen::Split { dir, .. } => {
            let (m, k, l) = (inputs[0], outputs[0], outputs[1]);
            if k & l != 0 || k | l != m {
                return None;
            }
            let left = cable(k, n, dir);
            let right = cable(l, n, dir);
            r.bottom = cable(m, n, dir);
            for (i, e) in r.bottom.iter().enumerate() {
                let t = if contains(k, e.label.i) {
                    index_of(&left, e.label)
                } else {
                    left.len() + index_of(&right, e.label)
                };
                r.through.push((i, t, None));
            }
            for (i, e) in left.iter().enumerate() {
                if contains(l, e.label.j) {
                    let j = left.len() + index_of(&right, e.label.conj());
                    r.cups.push((i, j, Some(Side::Left)));
                }
            }
            r.top = [left, right].concat();
        }
        WebGen::Tag { flow, side, .. } => {
            let (k, l) = (inputs[0], outputs[0]);
            if k & l != 0 || k | l != full {
                return None;
            }
            let bd = flow.bottom_dir();
            r.bottom = cable(k, n, bd);
            r.top = cable(l, n, bd.flip());
            for (i, e) in r.bottom.iter().enumerate() {
                r.through.push((i, index_of(&r.top, e.label.conj()), Some(side)));
            }
        }
    }
    Some(route(&r))
}

/// The cobweb for one state.
pub fn state_image(web: &Web, e: &Edges, state: &State) -> Result<Cobweb, StateSumError> {
    let n = web.n();
    let levels = web.levels();
    let set = |level: usize, pos: usize| state.sets[e.slot_edge[level][pos]];
    let word_cable = |level: usize, range: core::ops::Range<usize>| -> Vec<CobwebEnd> {
        range
            .flat_map(|p| cable(set(level, p), n, levels[level][p].dir))
            .collect()
    };
    let bottom = word_cable(0, 0..levels[0].len());
    let mut layers = Vec::new();
    for (li, layer) in web.layers().iter().enumerate() {
        let ins = layer.gen.inputs(n).len();
        let outs = layer.gen.outputs(n).len();
        let offset = word_cable(li, 0..layer.pos).len();
        let input_sets: Vec<Subset> = (0..ins).map(|i| set(li, layer.pos + i)).collect();
        let output_sets: Vec<Subset> = (0..outs).map(|i| set(li + 1, layer.pos + i)).collect();
        let fragment = vertex_image(n, &layer.gen, &input_sets, &output_sets)
            .ok_or(StateSumError::StateMismatch { layer: li })?;
        layers.extend(
            fragment
                .into_iter()
                .map(|l| Layer::new(l.pos + offset, l.gen)),
        );
    }
    Ok(Cobweb::new(n, bottom, layers).expect("vertex images join up along cables"))
}

/// The sum over all states agreeing with `data` of their cobwebs. Strands
/// labeled `n` carry the full set and cable to nothing.
pub fn map_web(web: &Web, data: &BoundaryData) -> Result<LinComb<CobwebGen>, StateSumError> {
    let e = edges(web);
    let mut out = LinComb::new();
    for state in enumerate_states(web, data)? {
        let image = state_image(web, &e, &state)?;
        out.add_term(LaurentScalar::one(), image)
            .expect("all images share the cabled boundary");
    }
    Ok(out)
}

/// `Σ coefficient · value` over a combination of closed or open cobwebs.
pub fn evaluate_comb(c: &LinComb<CobwebGen>) -> LaurentScalar {
    c.iter().map(|(k, d)| k * &evaluate(d)).sum()
}

/// Every assignment of sets of the right sizes to the boundary positions.
pub fn all_boundary_data(n: u8, bottom: &[WebEnd], top: &[WebEnd]) -> Vec<BoundaryData> {
    let choices: Vec<Vec<Subset>> = bottom
        .iter()
        .chain(top)
        .map(|e| subsets_of_size(n, e.label))
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; choices.len()];
    loop {
        let sets: Vec<Subset> = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        let (b, t) = sets.split_at(bottom.len());
        out.push(BoundaryData { bottom: b.to_vec(), top: t.to_vec() });
        let mut i = choices.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// Drops the positions carrying label `n`, matching [`delete_n_strands`].
///
/// [`delete_n_strands`]: crate::web::delete_n_strands
pub fn restrict_to_deleted(n: u8, bottom: &[WebEnd], top: &[WebEnd], data: &BoundaryData) -> BoundaryData {
    let keep = |word: &[WebEnd], sets: &[Subset]| -> Vec<Subset> {
        word.iter().zip(sets).filter(|(e, _)| e.label != n).map(|(_, &s)| s).collect()
    };
    BoundaryData {
        bottom: keep(bottom, &data.bottom),
        top: keep(top, &data.top),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::web::{build_web, circle, delete_n_strands, instantiate, RelationKind};

    fn s(e: &[u8]) -> Subset {
        subset_from(e)
    }

    fn total(c: &LinComb<CobwebGen>) -> LaurentScalar {
        evaluate_comb(c)
    }

    #[test]
    fn subsets() {
        assert_eq!(subsets_of_size(4, 2).len(), 6);
        assert_eq!(subsets_of_size(3, 2), vec![s(&[1, 2]), s(&[1, 3]), s(&[2, 3])]);
        assert_eq!(subsets_of_size(3, 0), vec![0]);
    }

    #[test]
    fn cables() {
        let c = cable(s(&[1]), 2, Dir::Up);
        assert_eq!(c, vec![StrandEnd::new(Root { i: 1, j: 2 }, Dir::Up)]);
        assert!(cable(full_set(4), 4, Dir::Up).is_empty());
        let c: Vec<Root> = cable(s(&[1, 3]), 4, Dir::Down).iter().map(|e| e.label).collect();
        let want: Vec<Root> = [(1, 2), (1, 4), (3, 2), (3, 4)]
            .iter()
            .map(|&(i, j)| Root { i, j })
            .collect();
        assert_eq!(c, want);
    }

    #[test]
    fn free_strand_states() {
        let w = build_web(4, vec![StrandEnd::new(2, Dir::Up)], vec![]).unwrap();
        let mut count = 0;
        for k in subsets_of_size(4, 2) {
            let data = BoundaryData { bottom: vec![k], top: vec![k] };
            count += enumerate_states(&w, &data).unwrap().len();
        }
        assert_eq!(count, 6);
        let bad = BoundaryData { bottom: vec![s(&[1])], top: vec![s(&[1])] };
        assert_eq!(
            enumerate_states(&w, &bad).unwrap_err(),
            StateSumError::InconsistentBoundary { side: "bottom", position: 0 }
        );
    }

    #[test]
    fn digon_states_and_total() {
        let inst = instantiate(RelationKind::Digon, 3, &[2]).unwrap();
        let (_, digon) = inst.lhs.iter().next().unwrap();
        let k = s(&[1, 2]);
        let data = BoundaryData { bottom: vec![k], top: vec![k] };
        assert_eq!(enumerate_states(digon, &data).unwrap().len(), 2);
        let image = map_web(digon, &data).unwrap();
        let (_, strand) = inst.rhs.iter().next().unwrap();
        let single = total(&map_web(strand, &data).unwrap());
        assert_eq!(total(&image), LaurentScalar::quantum_integer(2) * single);
    }

    #[test]
    fn square_case_two_has_one_state() {
        let inst = instantiate(RelationKind::Square, 4, &[2]).unwrap();
        let (_, sq) = inst.lhs.iter().next().unwrap();
        // K' = {1}, x = 2, y = 3.
        let data = BoundaryData {
            bottom: vec![s(&[1, 2]), s(&[3])],
            top: vec![s(&[1, 3]), s(&[2])],
        };
        assert_eq!(enumerate_states(sq, &data).unwrap().len(), 1);
    }

    #[test]
    fn vertex_images_small() {
        let merge = WebGen::Merge { k: 1, l: 1, dir: Dir::Up };
        let frag = vertex_image(2, &merge, &[s(&[1]), s(&[2])], &[s(&[1, 2])]).unwrap();
        assert_eq!(frag.len(), 2);
        assert!(matches!(frag[0].gen, CobwebGen::Tag { side: Side::Left, .. }));
        assert!(matches!(frag[1].gen, CobwebGen::Cap(..)));
        let frag3 = vertex_image(3, &merge, &[s(&[1]), s(&[2])], &[s(&[1, 2])]).unwrap();
        let caps = frag3.iter().filter(|l| matches!(l.gen, CobwebGen::Cap(..))).count();
        assert_eq!(caps, 1);
        assert!(vertex_image(3, &merge, &[s(&[1]), s(&[1])], &[s(&[1])]).is_none());
    }

    #[test]
    fn unknot_gives_quantum_n() {
        for n in 2..=5 {
            let w = circle(n, 1, true).unwrap();
            let data = BoundaryData { bottom: vec![], top: vec![] };
            let image = map_web(&w, &data).unwrap();
            assert_eq!(image.len(), n as usize);
            assert_eq!(total(&image), LaurentScalar::quantum_integer(n as u32));
        }
    }

    #[test]
    fn digon_full_set_total() {
        let inst = instantiate(RelationKind::Digon, 3, &[2]).unwrap();
        let (_, digon) = inst.lhs.iter().next().unwrap();
        let k = s(&[1, 2]);
        let data = BoundaryData { bottom: vec![k], top: vec![k] };
        let t = total(&map_web(digon, &data).unwrap());
        // Through strands α_{1,3}, α_{2,3} contribute nothing on their own.
        assert_eq!(t, LaurentScalar::quantum_integer(2));
    }

    #[test]
    fn boundary_data_counts() {
        let bottom = [StrandEnd::new(2, Dir::Up), StrandEnd::new(1, Dir::Up)];
        let top = [StrandEnd::new(3, Dir::Up)];
        assert_eq!(all_boundary_data(4, &bottom, &top).len(), 6 * 4 * 4);
        assert_eq!(all_boundary_data(4, &[], &[]).len(), 1);
    }

    #[test]
    fn mapping_ignores_n_strands() {
        for kind in [RelationKind::IEqualsH, RelationKind::TagCancel, RelationKind::Digon] {
            for n in 2..=3 {
                for params in kind.parameters(n) {
                    let inst = instantiate(kind, n, &params).unwrap();
                    for (_, w) in inst.lhs.iter().chain(inst.rhs.iter()) {
                        let del = delete_n_strands(w);
                        for data in all_boundary_data(n, w.bottom(), w.top()) {
                            let r = restrict_to_deleted(n, w.bottom(), w.top(), &data);
                            let a = map_web(w, &data).unwrap();
                            let b = map_web(&del, &r).unwrap();
                            assert_eq!(a.len(), b.len(), "{} {:?}", inst.name(), data);
                            assert_eq!(total(&a), total(&b), "{} {:?}", inst.name(), data);
                        }
                    }
                }
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn images_have_cabled_boundaries(n in 2u8..=4, pick in 0usize..64, data_pick in 0usize..1024) {
            let insts = crate::web::relation_instances(n);
            let inst = &insts[pick % insts.len()];
            let (bottom, top) = inst.boundary();
            let all = all_boundary_data(n, bottom, top);
            let data = &all[data_pick % all.len()];
            for (_, w) in inst.lhs.iter().chain(inst.rhs.iter()) {
                let cabled = |word: &[WebEnd], sets: &[Subset]| -> Vec<CobwebEnd> {
                    word.iter().zip(sets).flat_map(|(e, &k)| cable(k, n, e.dir)).collect()
                };
                for (_, img) in map_web(w, data).unwrap().iter() {
                    proptest::prop_assert_eq!(img.bottom(), &cabled(bottom, &data.bottom)[..]);
                    proptest::prop_assert_eq!(img.top(), &cabled(top, &data.top)[..]);
                }
            }
        }
    }
}
