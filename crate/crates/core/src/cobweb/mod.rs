//! Cobwebs: root-labeled strands with virtual crossings and tagged bivalent
//! vertices, together with their canonical scalar value.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::diagram::{
    BoundaryWord, Curve, Dir, EventKind, Flow, Generator, Link, PassKind, Side, SlicedDiagram,
    StrandEnd,
};
use crate::scalar::LaurentScalar;

pub mod oracle;
pub mod random;
pub mod rewrite;

pub use oracle::{reduce_oracle, OracleOutcome, OracleStep};
pub use rewrite::{apply_relation, apply_rewrite, RelationName, Rewrite};

/// The root `e_i - e_j`, written `α_{i,j}`. Positive when `i > j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub i: u8,
    pub j: u8,
}

impl Root {
    pub fn new(i: u8, j: u8) -> Option<Root> {
        (i != j && i >= 1 && j >= 1).then_some(Root { i, j })
    }

    pub fn is_positive(self) -> bool {
        self.i > self.j
    }

    /// `sign(i - j)`.
    pub fn sign(self) -> i64 {
        if self.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn conj(self) -> Root {
        Root { i: self.j, j: self.i }
    }

    pub fn fits(self, n: u8) -> bool {
        self.i != self.j && (1..=n).contains(&self.i) && (1..=n).contains(&self.j)
    }

    /// All roots for rank `n`, in lexicographic order.
    pub fn all(n: u8) -> Vec<Root> {
        let mut out = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    out.push(Root { i, j });
                }
            }
        }
        out
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{},{}", self.i, self.j)
    }
}

pub type CobwebEnd = StrandEnd<Root>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CobwebGen {
    Id(Root, Dir),
    /// Outputs `[(root, dir), (root, dir.flip())]`.
    Cup(Root, Dir),
    /// Inputs `[(root, dir), (root, dir.flip())]`.
    Cap(Root, Dir),
    /// Inputs `[a, b]`, outputs `[b, a]`.
    Cross(CobwebEnd, CobwebEnd),
    /// A bivalent vertex on a vertical strand. The lower strand carries
    /// `root`, the upper one its conjugate.
    Tag { root: Root, flow: Flow, side: Side },
}

impl CobwebGen {
    pub fn tag(root: Root, bottom_dir: Dir, side: Side) -> CobwebGen {
        CobwebGen::Tag {
            root,
            flow: Flow::from_bottom_dir(bottom_dir),
            side,
        }
    }

    pub fn cross(a: CobwebEnd, b: CobwebEnd) -> CobwebGen {
        CobwebGen::Cross(a, b)
    }
}

pub type Cobweb = SlicedDiagram<CobwebGen>;

impl Generator for CobwebGen {
    type Label = Root;

    fn inputs(&self, _n: u8) -> BoundaryWord<Root> {
        match *self {
            CobwebGen::Id(r, d) => vec![StrandEnd::new(r, d)],
            CobwebGen::Cup(..) => Vec::new(),
            CobwebGen::Cap(r, d) => vec![StrandEnd::new(r, d), StrandEnd::new(r, d.flip())],
            CobwebGen::Cross(a, b) => vec![a, b],
            CobwebGen::Tag { root, flow, .. } => vec![StrandEnd::new(root, flow.bottom_dir())],
        }
    }

    fn outputs(&self, _n: u8) -> BoundaryWord<Root> {
        match *self {
            CobwebGen::Id(r, d) => vec![StrandEnd::new(r, d)],
            CobwebGen::Cup(r, d) => vec![StrandEnd::new(r, d), StrandEnd::new(r, d.flip())],
            CobwebGen::Cap(..) => Vec::new(),
            CobwebGen::Cross(a, b) => vec![b, a],
            CobwebGen::Tag { root, flow, .. } => {
                vec![StrandEnd::new(root.conj(), flow.bottom_dir().flip())]
            }
        }
    }

    fn check(&self, n: u8) -> Result<(), String> {
        let roots: Vec<Root> = match *self {
            CobwebGen::Id(r, _) | CobwebGen::Cup(r, _) | CobwebGen::Cap(r, _) => vec![r],
            CobwebGen::Cross(a, b) => vec![a.label, b.label],
            CobwebGen::Tag { root, .. } => vec![root],
        };
        match roots.iter().find(|r| !r.fits(n)) {
            Some(r) => Err(alloc::format!("root {} is not a root for n = {}", r, n)),
            None => Ok(()),
        }
    }

    fn label_ok(label: &Root, n: u8) -> bool {
        label.fits(n)
    }

    fn links(&self) -> Vec<Link> {
        match self {
            CobwebGen::Id(..) | CobwebGen::Tag { .. } => vec![Link::Through(0, 0)],
            CobwebGen::Cup(..) => vec![Link::Cup(0, 1)],
            CobwebGen::Cap(..) => vec![Link::Cap(0, 1)],
            CobwebGen::Cross(..) => vec![Link::Through(0, 1), Link::Through(1, 0)],
        }
    }

    fn pass_kind(&self) -> PassKind {
        match self {
            CobwebGen::Cross(..) => PassKind::Crossing,
            CobwebGen::Tag { .. } => PassKind::Tag,
            _ => PassKind::Plain,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            CobwebGen::Id(..) => "id",
            CobwebGen::Cup(..) => "cup",
            CobwebGen::Cap(..) => "cap",
            CobwebGen::Cross(..) => "vcross",
            CobwebGen::Tag { .. } => "tag",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CobwebError {
    #[error("curve {curve} has no consistent orientation")]
    InconsistentOrientation { curve: usize },
    #[error("relation {relation} does not match at {position}")]
    PatternMismatch { relation: &'static str, position: usize },
    #[error("rewrite budget of {budget} steps exhausted")]
    BudgetExhausted { budget: usize },
    #[error(transparent)]
    Diagram(#[from] crate::diagram::DiagramError),
}

/// A traced curve together with the traversal fixed by root positivity.
#[derive(Clone, Debug)]
pub struct OrientedCurve {
    pub curve: Curve,
    /// `true` when the canonical traversal runs along the traced walk,
    /// `false` when it runs against it.
    pub forward: bool,
}

/// Orients every curve so that it runs along the arrows of positive-root
/// segments and against the arrows of negative-root segments.
pub fn orient_curves(d: &Cobweb) -> Result<Vec<OrientedCurve>, CobwebError> {
    let levels = d.levels();
    d.trace_curves()
        .into_iter()
        .enumerate()
        .map(|(idx, curve)| {
            let agrees = |&(slot, heading): &(crate::diagram::Slot, Dir)| {
                let end = &levels[slot.level][slot.pos];
                (end.dir == heading) == end.label.is_positive()
            };
            let forward = agrees(&curve.slots[0]);
            if curve.slots.iter().any(|s| agrees(s) != forward) {
                return Err(CobwebError::InconsistentOrientation { curve: idx });
            }
            Ok(OrientedCurve { curve, forward })
        })
        .collect()
}

/// The data behind a cobweb's value `(-1)^s q^t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobwebInvariant {
    pub bottom: BoundaryWord<Root>,
    pub top: BoundaryWord<Root>,
    /// Number of tags on the left of their curve, mod 2.
    pub sign_parity: u8,
    /// Twice the total turning number.
    pub doubled_turning: i64,
}

impl CobwebInvariant {
    pub fn value(&self) -> LaurentScalar {
        let sign = if self.sign_parity == 0 { 1 } else { -1 };
        LaurentScalar::monomial(sign, self.doubled_turning)
    }
}

/// Contribution of one curve: (tags on the left, doubled turning).
pub fn curve_contribution(d: &Cobweb, oc: &OrientedCurve) -> (usize, i64) {
    let mut left_tags = 0;
    let mut turning = 0;
    for ev in &oc.curve.events {
        match ev.kind {
            EventKind::Cup { left_to_right } => {
                turning += if left_to_right == oc.forward { 1 } else { -1 };
            }
            EventKind::Cap { left_to_right } => {
                turning += if left_to_right == oc.forward { -1 } else { 1 };
            }
            EventKind::Pass(PassKind::Tag) => {
                let CobwebGen::Tag { side, .. } = d.layers()[ev.layer].gen else {
                    unreachable!("tag event on a non-tag layer");
                };
                let heading = if oc.forward { ev.heading } else { ev.heading.flip() };
                let relative = if heading == Dir::Up { side } else { side.flip() };
                if relative == Side::Left {
                    left_tags += 1;
                }
            }
            EventKind::Pass(_) => {}
        }
    }
    (left_tags, turning)
}

pub fn invariant(d: &Cobweb) -> Result<CobwebInvariant, CobwebError> {
    let mut s = 0usize;
    let mut t = 0i64;
    for oc in orient_curves(d)? {
        let (tags, turning) = curve_contribution(d, &oc);
        s += tags;
        t += turning;
    }
    Ok(CobwebInvariant {
        bottom: d.bottom().to_vec(),
        top: d.top().to_vec(),
        sign_parity: (s % 2) as u8,
        doubled_turning: t,
    })
}

/// `(-1)^s q^t`, relative to the diagram's boundary.
pub fn evaluate(d: &Cobweb) -> LaurentScalar {
    invariant(d)
        .expect("a valid cobweb orients consistently")
        .value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Layer;

    fn r(i: u8, j: u8) -> Root {
        Root::new(i, j).unwrap()
    }

    fn q(e: i64) -> LaurentScalar {
        LaurentScalar::q_pow(e)
    }

    /// Closed loop drawn counterclockwise (arrow down the left side) when `ccw`.
    pub(crate) fn circle(n: u8, root: Root, ccw: bool) -> Cobweb {
        let d = if ccw { Dir::Down } else { Dir::Up };
        Cobweb::new(
            n,
            vec![],
            vec![
                Layer::new(0, CobwebGen::Cup(root, d)),
                Layer::new(0, CobwebGen::Cap(root, d)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn bubbles() {
        assert_eq!(evaluate(&circle(2, r(2, 1), true)), q(1));
        assert_eq!(evaluate(&circle(2, r(2, 1), false)), q(-1));
        assert_eq!(evaluate(&circle(2, r(1, 2), true)), q(-1));
        assert_eq!(evaluate(&circle(3, r(3, 2), false)), q(-1));
    }

    #[test]
    fn orientation_follows_positivity() {
        let ccw = circle(2, r(2, 1), true);
        let oc = orient_curves(&ccw).unwrap();
        assert_eq!(oc.len(), 1);
        let neg = circle(2, r(1, 2), true);
        let on = orient_curves(&neg).unwrap();
        assert_ne!(oc[0].forward, on[0].forward);
    }

    #[test]
    fn tagged_loop_orients_once() {
        // α_{1,2} / α_{2,1} loop with both tags outside.
        let a = r(1, 2);
        let d = Cobweb::new(
            2,
            vec![],
            vec![
                Layer::new(0, CobwebGen::Cup(a, Dir::Down)),
                Layer::new(0, CobwebGen::tag(a, Dir::Down, Side::Left)),
                Layer::new(1, CobwebGen::tag(a, Dir::Up, Side::Right)),
                Layer::new(0, CobwebGen::Cap(a.conj(), Dir::Up)),
            ],
        )
        .unwrap();
        let oc = orient_curves(&d).unwrap();
        assert_eq!(oc.len(), 1);
        // Tag cancel then burst: same as the plain loop on the positive root.
        let plain = circle(2, a.conj(), false);
        assert_eq!(evaluate(&d), evaluate(&plain));
        let mut layers = d.layers().to_vec();
        layers[2] = Layer::new(1, CobwebGen::tag(a, Dir::Up, Side::Left));
        let switched = Cobweb::new(2, vec![], layers).unwrap();
        assert_eq!(evaluate(&switched), -evaluate(&plain));
    }

    #[test]
    fn curl_and_strand() {
        // An upward α_{2,1} strand with a curl to its right.
        let a = r(2, 1);
        let up = StrandEnd::new(a, Dir::Up);
        let down = StrandEnd::new(a, Dir::Down);
        let curl = Cobweb::new(
            2,
            vec![up],
            vec![
                Layer::new(1, CobwebGen::Cup(a, Dir::Down)),
                Layer::new(0, CobwebGen::cross(up, down)),
                Layer::new(0, CobwebGen::Cap(a, Dir::Down)),
            ],
        )
        .unwrap();
        let straight = Cobweb::identity(2, vec![up]).unwrap();
        assert_eq!(evaluate(&straight), LaurentScalar::one());
        let v = evaluate(&curl);
        assert!(v == q(1) || v == q(-1));
    }

    #[test]
    fn half_integer_turning_for_caps() {
        let a = r(2, 1);
        let cap = Cobweb::new(
            2,
            vec![StrandEnd::new(a, Dir::Down), StrandEnd::new(a, Dir::Up)],
            vec![Layer::new(0, CobwebGen::Cap(a, Dir::Down))],
        )
        .unwrap();
        assert_eq!(evaluate(&cap), LaurentScalar::monomial(1, 1));
    }
}
