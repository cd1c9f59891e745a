//! A rewriting oracle for cobwebs, independent of the turning-number
//! evaluator. It only applies local moves and sums up their scalars.
//!
//! Strategy, in priority order: bring tags on one curve together and cancel
//! them, smooth same-label crossings, burst simple closed loops, straighten
//! zigzags, then detour cleanups (virtual R2 and saddle passes). The lowest
//! applicable position always wins.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::rewrite::{apply_rewrite, bubble_value, RelationName, Rewrite};
use super::{Cobweb, CobwebError, CobwebGen, Root};
use crate::diagram::{Curve, Dir, EventKind, PassKind};
use crate::scalar::LaurentScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleStep {
    Rewrite(Rewrite),
    /// A simple untagged closed loop, pulled off every other strand by detour
    /// moves and burst.
    Extract { root: Root, ccw: bool },
}

/// `value(input) = factor * value(normal_form)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOutcome {
    pub normal_form: Cobweb,
    pub factor: LaurentScalar,
    pub steps: Vec<OracleStep>,
    /// No closed loops remain and every curve carries at most one tag and at
    /// most one cup or cap.
    pub fully_reduced: bool,
}

#[derive(Clone)]
struct Run {
    d: Cobweb,
    factor: LaurentScalar,
    steps: Vec<OracleStep>,
    budget: usize,
}

impl Run {
    fn apply(&mut self, rw: Rewrite) -> Result<(), CobwebError> {
        if self.steps.len() >= self.budget {
            return Err(CobwebError::BudgetExhausted {
                budget: self.budget,
            });
        }
        let (d, f) = apply_rewrite(&self.d, &rw)?;
        self.d = d;
        self.factor *= f;
        self.steps.push(OracleStep::Rewrite(rw));
        Ok(())
    }

    fn rel(&mut self, relation: RelationName, layer: usize) -> Result<(), CobwebError> {
        self.apply(Rewrite::At { relation, layer })
    }

    fn gen(&self, l: usize) -> &CobwebGen {
        &self.d.layers()[l].gen
    }

    fn pos(&self, l: usize) -> usize {
        self.d.layers()[l].pos
    }
}

pub fn reduce_oracle(d: &Cobweb, budget: usize) -> Result<OracleOutcome, CobwebError> {
    let mut run = Run {
        d: d.clone(),
        factor: LaurentScalar::one(),
        steps: Vec::new(),
        budget,
    };
    loop {
        if tag_phase(&mut run)?
            || smooth_phase(&mut run)?
            || bubble_phase(&mut run)?
            || zigzag_phase(&mut run)?
            || detour_phase(&mut run)?
        {
            continue;
        }
        break;
    }
    let fully_reduced = is_reduced(&run.d);
    Ok(OracleOutcome {
        normal_form: run.d,
        factor: run.factor,
        steps: run.steps,
        fully_reduced,
    })
}

fn tag_events(c: &Curve) -> impl Iterator<Item = (usize, Dir)> + '_ {
    c.events
        .iter()
        .filter(|e| e.kind == EventKind::Pass(PassKind::Tag))
        .map(|e| (e.layer, e.heading))
}

fn turning_events(c: &Curve) -> usize {
    c.events
        .iter()
        .filter(|e| matches!(e.kind, EventKind::Cup { .. } | EventKind::Cap { .. }))
        .count()
}

fn is_reduced(d: &Cobweb) -> bool {
    let same_label_cross = d.layers().iter().any(|l| match l.gen {
        CobwebGen::Cross(a, b) => a.label == b.label,
        _ => false,
    });
    !same_label_cross
        && d.trace_curves()
            .iter()
            .all(|c| !c.is_closed() && tag_events(c).count() <= 1 && turning_events(c) <= 1)
}

/// Moves the tag at layer `l` along its curve, walking in `heading`, until it
/// meets another tag (and cancels it) or runs out of layers.
/// Returns whether anything was applied.
fn chase(run: &mut Run, mut l: usize, mut heading: Dir) -> Result<bool, CobwebError> {
    let mut moved = false;
    loop {
        let len = run.d.layers().len();
        match heading {
            Dir::Up => {
                if l + 1 >= len {
                    return Ok(moved);
                }
                if is_tag(run.gen(l + 1)) && run.pos(l + 1) == run.pos(l) {
                    meet(run, l)?;
                    return Ok(true);
                }
                if run.d.can_exchange(l) {
                    run.rel(RelationName::Exchange, l)?;
                    l += 1;
                } else {
                    match run.gen(l + 1) {
                        CobwebGen::Cross(..) => {
                            run.rel(RelationName::TagSlide, l)?;
                            l += 1;
                        }
                        CobwebGen::Cap(..) => {
                            run.rel(RelationName::TagTurn, l)?;
                            heading = Dir::Down;
                        }
                        _ => return Ok(moved),
                    }
                }
            }
            Dir::Down => {
                if l == 0 {
                    return Ok(moved);
                }
                if is_tag(run.gen(l - 1)) && run.pos(l - 1) == run.pos(l) {
                    meet(run, l - 1)?;
                    return Ok(true);
                }
                if run.d.can_exchange(l - 1) {
                    run.rel(RelationName::Exchange, l - 1)?;
                    l -= 1;
                } else {
                    match run.gen(l - 1) {
                        CobwebGen::Cross(..) => {
                            run.rel(RelationName::TagSlide, l - 1)?;
                            l -= 1;
                        }
                        CobwebGen::Cup(..) => {
                            run.rel(RelationName::TagTurn, l - 1)?;
                            heading = Dir::Up;
                        }
                        _ => return Ok(moved),
                    }
                }
            }
        }
        moved = true;
    }
}

fn is_tag(g: &CobwebGen) -> bool {
    matches!(g, CobwebGen::Tag { .. })
}

fn side_of(g: &CobwebGen) -> Option<crate::diagram::Side> {
    match g {
        CobwebGen::Tag { side, .. } => Some(*side),
        _ => None,
    }
}

/// Stacked tags at `lower` and `lower + 1` on one strand.
fn meet(run: &mut Run, lower: usize) -> Result<(), CobwebError> {
    if side_of(run.gen(lower)) != side_of(run.gen(lower + 1)) {
        run.rel(RelationName::TagSwitch, lower)?;
    }
    run.rel(RelationName::TagCancel, lower)
}

fn tag_phase(run: &mut Run) -> Result<bool, CobwebError> {
    let curves = run.d.trace_curves();
    for c in curves.iter() {
        let tags: Vec<_> = tag_events(c).collect();
        if tags.len() >= 2 {
            let (l, heading) = tags[0];
            return chase(run, l, heading);
        }
    }
    // Lone tags on open curves drift to the curve's far end, out of the way.
    for c in curves.iter().filter(|c| !c.is_closed()) {
        if let Some(&(l, heading)) = tag_events(c).collect::<Vec<_>>().first() {
            if chase(run, l, heading)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn smooth_phase(run: &mut Run) -> Result<bool, CobwebError> {
    let hit = run.d.layers().iter().position(|l| match l.gen {
        CobwebGen::Cross(a, b) => a.label == b.label,
        _ => false,
    });
    match hit {
        Some(l) => run.rel(RelationName::Smooth, l).map(|_| true),
        None => Ok(false),
    }
}

fn is_simple_loop(c: &Curve) -> bool {
    if !c.is_closed() || tag_events(c).next().is_some() {
        return false;
    }
    let mut seen = BTreeSet::new();
    c.events
        .iter()
        .filter(|e| e.kind == EventKind::Pass(PassKind::Crossing))
        .all(|e| seen.insert(e.layer))
}

fn bubble_phase(run: &mut Run) -> Result<bool, CobwebError> {
    for c in run.d.trace_curves() {
        if !is_simple_loop(&c) {
            continue;
        }
        // The lowest point of a simple loop is a cup; its arrow there decides
        // the rotation sense.
        let lowest = c
            .events
            .iter()
            .filter(|e| matches!(e.kind, EventKind::Cup { .. }))
            .map(|e| e.layer)
            .min()
            .expect("a closed loop has a cup");
        let CobwebGen::Cup(root, dir) = *run.gen(lowest) else {
            unreachable!("cup event on a non-cup layer");
        };
        if run.steps.len() >= run.budget {
            return Err(CobwebError::BudgetExhausted { budget: run.budget });
        }
        let ccw = dir == Dir::Down;
        let doomed = c.slots.iter().map(|(s, _)| *s).collect();
        run.d = run.d.delete_slots(&doomed)?;
        run.factor *= bubble_value(root, ccw);
        run.steps.push(OracleStep::Extract { root, ccw });
        return Ok(true);
    }
    Ok(false)
}

/// Uses exchanges to make layers `lo < hi` adjacent. Returns the new index of
/// the lower one.
fn bring_adjacent(run: &mut Run, mut lo: usize, mut hi: usize) -> Result<Option<usize>, CobwebError> {
    while hi > lo + 1 {
        if run.d.can_exchange(hi - 1) {
            run.rel(RelationName::Exchange, hi - 1)?;
            hi -= 1;
        } else if run.d.can_exchange(lo) {
            run.rel(RelationName::Exchange, lo)?;
            lo += 1;
        } else {
            return Ok(None);
        }
    }
    Ok(Some(lo))
}

/// Runs `attempt` on a scratch copy; keeps the result only if it succeeded.
fn tentatively(
    run: &mut Run,
    attempt: impl FnOnce(&mut Run) -> Result<bool, CobwebError>,
) -> Result<bool, CobwebError> {
    let mut scratch = run.clone();
    if attempt(&mut scratch)? {
        *run = scratch;
        Ok(true)
    } else {
        Ok(false)
    }
}

fn zigzag_phase(run: &mut Run) -> Result<bool, CobwebError> {
    for c in run.d.trace_curves() {
        let mut prev: Option<usize> = None;
        for e in &c.events {
            match e.kind {
                EventKind::Pass(PassKind::Tag) => prev = None,
                EventKind::Pass(_) => {}
                EventKind::Cup { .. } | EventKind::Cap { .. } => {
                    if let Some(p) = prev {
                        let (lo, hi) = (p.min(e.layer), p.max(e.layer));
                        let done = tentatively(run, |s| {
                            let Some(at) = bring_adjacent(s, lo, hi)? else {
                                return Ok(false);
                            };
                            if s.d.straighten_zigzag(at).is_none() {
                                return Ok(false);
                            }
                            s.rel(RelationName::Zigzag, at)?;
                            Ok(true)
                        })?;
                        if done {
                            return Ok(true);
                        }
                    }
                    prev = Some(e.layer);
                }
            }
        }
    }
    Ok(false)
}

fn detour_phase(run: &mut Run) -> Result<bool, CobwebError> {
    let layers = run.d.layers();
    let r2 = (0..layers.len().saturating_sub(1)).find(|&l| {
        matches!(layers[l].gen, CobwebGen::Cross(..))
            && matches!(layers[l + 1].gen, CobwebGen::Cross(..))
            && layers[l].pos == layers[l + 1].pos
    });
    if let Some(l) = r2 {
        run.rel(RelationName::DetourR2, l)?;
        return Ok(true);
    }
    // A cap with a matching cup somewhere above it.
    let mut pairs = Vec::new();
    for (c, lc) in layers.iter().enumerate() {
        let CobwebGen::Cap(r, d) = lc.gen else { continue };
        for (u, lu) in layers.iter().enumerate().skip(c + 1) {
            if lu.gen == CobwebGen::Cup(r, d) {
                pairs.push((c, u));
            }
        }
    }
    for (c, u) in pairs {
        let done = tentatively(run, |s| {
            let Some(at) = bring_adjacent(s, c, u)? else {
                return Ok(false);
            };
            if s.pos(at) != s.pos(at + 1) {
                return Ok(false);
            }
            s.rel(RelationName::SaddlePass, at)?;
            Ok(true)
        })?;
        if done {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobweb::{evaluate, CobwebEnd};
    use crate::diagram::{Layer, Side, StrandEnd};
    use alloc::vec;

    fn r(i: u8, j: u8) -> Root {
        Root::new(i, j).unwrap()
    }

    fn saddle(root: Root) -> Cobweb {
        let bottom = vec![StrandEnd::new(root, Dir::Down), StrandEnd::new(root, Dir::Up)];
        Cobweb::new(
            3,
            bottom,
            vec![
                Layer::new(0, CobwebGen::Cap(root, Dir::Down)),
                Layer::new(0, CobwebGen::Cup(root, Dir::Down)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn saddle_in_four_steps() {
        for (root, e) in [(r(2, 1), 1), (r(1, 2), -1), (r(3, 1), 1)] {
            let out = reduce_oracle(&saddle(root), 50).unwrap();
            assert_eq!(out.steps.len(), 4);
            assert_eq!(out.factor, LaurentScalar::q_pow(e));
            assert_eq!(out.normal_form.layers().len(), 0);
            assert!(out.fully_reduced);
        }
    }

    #[test]
    fn closed_tagged_loop_reduces() {
        let a = r(1, 2);
        let d = Cobweb::new(
            2,
            vec![],
            vec![
                Layer::new(0, CobwebGen::Cup(a, Dir::Down)),
                Layer::new(0, CobwebGen::tag(a, Dir::Down, Side::Left)),
                Layer::new(1, CobwebGen::tag(a, Dir::Up, Side::Left)),
                Layer::new(0, CobwebGen::Cap(a.conj(), Dir::Up)),
            ],
        )
        .unwrap();
        let out = reduce_oracle(&d, 100).unwrap();
        assert!(out.normal_form.layers().is_empty());
        assert_eq!(out.factor, evaluate(&d));
    }

    #[test]
    fn curl_reduces_to_strand() {
        let a = r(1, 3);
        let up = CobwebEnd::new(a, Dir::Up);
        let down = CobwebEnd::new(a, Dir::Down);
        let curl = Cobweb::new(
            3,
            vec![up],
            vec![
                Layer::new(1, CobwebGen::Cup(a, Dir::Down)),
                Layer::new(0, CobwebGen::cross(up, down)),
                Layer::new(0, CobwebGen::Cap(a, Dir::Down)),
            ],
        )
        .unwrap();
        let out = reduce_oracle(&curl, 100).unwrap();
        assert!(out.fully_reduced);
        assert!(out.normal_form.layers().is_empty());
        assert_eq!(out.factor, evaluate(&curl));
    }

    #[test]
    fn budget_is_enforced() {
        let err = reduce_oracle(&saddle(r(2, 1)), 2).unwrap_err();
        assert_eq!(err, CobwebError::BudgetExhausted { budget: 2 });
    }
}
