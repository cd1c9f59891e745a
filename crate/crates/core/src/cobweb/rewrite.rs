//! Local moves on sliced cobwebs.
//!
//! Every move returns the rewritten diagram `d'` and a scalar `f` with
//! `value(d) = f * value(d')`.

use alloc::vec;
use alloc::vec::Vec;

use super::{Cobweb, CobwebError, CobwebGen, Root};
use crate::diagram::{Dir, Flow, Layer, Side, StrandEnd};
use crate::scalar::LaurentScalar;

/// Relations addressable by name and a layer index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationName {
    /// Flip the side of one tag, factor `-1`.
    TagSwitch,
    /// Remove two stacked tags on the same side.
    TagCancel,
    /// Burst a cup immediately capped: `q^{±sign}` by orientation.
    Bubble,
    /// Smooth a crossing of two strands with the same root.
    Smooth,
    /// Virtual Reidemeister two.
    DetourR2,
    /// Virtual Reidemeister three.
    DetourR3,
    /// Slide a tag through a virtual crossing.
    TagSlide,
    /// Push a cup down through the cap right below it (two new crossings).
    SaddlePass,
    /// Swap two layers acting on disjoint strands.
    Exchange,
    /// Straighten a cup capped on one leg.
    Zigzag,
    /// Move a tag around a cup or cap onto the other leg.
    TagTurn,
}

impl RelationName {
    pub const ALL: [RelationName; 11] = [
        RelationName::TagSwitch,
        RelationName::TagCancel,
        RelationName::Bubble,
        RelationName::Smooth,
        RelationName::DetourR2,
        RelationName::DetourR3,
        RelationName::TagSlide,
        RelationName::SaddlePass,
        RelationName::Exchange,
        RelationName::Zigzag,
        RelationName::TagTurn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationName::TagSwitch => "tag_switch",
            RelationName::TagCancel => "tag_cancel",
            RelationName::Bubble => "bubble",
            RelationName::Smooth => "smooth",
            RelationName::DetourR2 => "detour_r2",
            RelationName::DetourR3 => "detour_r3",
            RelationName::TagSlide => "tag_slide",
            RelationName::SaddlePass => "saddle_pass",
            RelationName::Exchange => "exchange",
            RelationName::Zigzag => "zigzag",
            RelationName::TagTurn => "tag_turn",
        }
    }

    /// Whether the move is a relation with content (as opposed to a detour
    /// move or a planar isotopy of the slicing).
    pub fn is_scalar_relation(self) -> bool {
        matches!(
            self,
            RelationName::TagSwitch
                | RelationName::TagCancel
                | RelationName::Bubble
                | RelationName::Smooth
        )
    }
}

/// A move together with where it applies. Insertions are the inverses of
/// removals and only serve to grow diagrams.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rewrite {
    At { relation: RelationName, layer: usize },
    InsertR2 { level: usize, pos: usize },
    InsertTagPair { level: usize, pos: usize, side: Side },
    InsertBubble { level: usize, pos: usize, root: Root, ccw: bool },
    InsertZigzag { level: usize, pos: usize, right: bool },
}

/// Bubble value: a counterclockwise loop on `α_{i,j}` is `q^{sign(i-j)}`,
/// a clockwise one `q^{sign(j-i)}`.
pub fn bubble_value(root: Root, ccw: bool) -> LaurentScalar {
    let e = if ccw { root.sign() } else { -root.sign() };
    LaurentScalar::q_pow(e)
}

fn mismatch(relation: RelationName, position: usize) -> CobwebError {
    CobwebError::PatternMismatch {
        relation: relation.as_str(),
        position,
    }
}

pub fn apply_relation(
    d: &Cobweb,
    relation: RelationName,
    layer: usize,
) -> Result<(Cobweb, LaurentScalar), CobwebError> {
    apply_rewrite(d, &Rewrite::At { relation, layer })
}

pub fn apply_rewrite(d: &Cobweb, rw: &Rewrite) -> Result<(Cobweb, LaurentScalar), CobwebError> {
    match *rw {
        Rewrite::At { relation, layer } => {
            at(d, relation, layer).ok_or_else(|| mismatch(relation, layer))
        }
        Rewrite::InsertR2 { level, pos } => {
            let w = word_at(d, level).ok_or(mismatch(RelationName::DetourR2, level))?;
            if pos + 1 >= w.len() {
                return Err(mismatch(RelationName::DetourR2, level));
            }
            let (a, b) = (w[pos], w[pos + 1]);
            let new = vec![
                Layer::new(pos, CobwebGen::Cross(a, b)),
                Layer::new(pos, CobwebGen::Cross(b, a)),
            ];
            Ok((d.splice(level..level, new)?, LaurentScalar::one()))
        }
        Rewrite::InsertTagPair { level, pos, side } => {
            let w = word_at(d, level).ok_or(mismatch(RelationName::TagCancel, level))?;
            let e = *w.get(pos).ok_or(mismatch(RelationName::TagCancel, level))?;
            let new = vec![
                Layer::new(pos, CobwebGen::tag(e.label, e.dir, side)),
                Layer::new(pos, CobwebGen::tag(e.label.conj(), e.dir.flip(), side)),
            ];
            Ok((d.splice(level..level, new)?, LaurentScalar::one()))
        }
        Rewrite::InsertBubble {
            level,
            pos,
            root,
            ccw,
        } => {
            let w = word_at(d, level).ok_or(mismatch(RelationName::Bubble, level))?;
            if pos > w.len() {
                return Err(mismatch(RelationName::Bubble, level));
            }
            let dir = if ccw { Dir::Down } else { Dir::Up };
            let new = vec![
                Layer::new(pos, CobwebGen::Cup(root, dir)),
                Layer::new(pos, CobwebGen::Cap(root, dir)),
            ];
            let out = d.splice(level..level, new)?;
            let factor = bubble_value(root, !ccw);
            Ok((out, factor))
        }
        Rewrite::InsertZigzag { level, pos, right } => {
            let w = word_at(d, level).ok_or(mismatch(RelationName::Zigzag, level))?;
            let e = *w.get(pos).ok_or(mismatch(RelationName::Zigzag, level))?;
            let (r, dir) = (e.label, e.dir);
            let new = if right {
                vec![
                    Layer::new(pos + 1, CobwebGen::Cup(r, dir.flip())),
                    Layer::new(pos, CobwebGen::Cap(r, dir)),
                ]
            } else {
                vec![
                    Layer::new(pos, CobwebGen::Cup(r, dir)),
                    Layer::new(pos + 1, CobwebGen::Cap(r, dir.flip())),
                ]
            };
            Ok((d.splice(level..level, new)?, LaurentScalar::one()))
        }
    }
}

fn word_at(d: &Cobweb, level: usize) -> Option<Vec<StrandEnd<Root>>> {
    if level > d.layers().len() {
        return None;
    }
    let mut levels = d.levels();
    Some(levels.swap_remove(level))
}

fn one(d: Cobweb) -> Option<(Cobweb, LaurentScalar)> {
    Some((d, LaurentScalar::one()))
}

fn at(d: &Cobweb, relation: RelationName, l: usize) -> Option<(Cobweb, LaurentScalar)> {
    let layers = d.layers();
    let cur = layers.get(l)?;
    let next = layers.get(l + 1);
    match relation {
        RelationName::TagSwitch => {
            let CobwebGen::Tag { root, flow, side } = cur.gen else {
                return None;
            };
            let gen = CobwebGen::Tag {
                root,
                flow,
                side: side.flip(),
            };
            let out = d.splice(l..l + 1, vec![Layer::new(cur.pos, gen)]).ok()?;
            Some((out, LaurentScalar::from(-1)))
        }
        RelationName::TagCancel => {
            let next = next?;
            match (&cur.gen, &next.gen) {
                (CobwebGen::Tag { side: s1, .. }, CobwebGen::Tag { side: s2, .. })
                    if cur.pos == next.pos && s1 == s2 =>
                {
                    one(d.splice(l..l + 2, Vec::new()).ok()?)
                }
                _ => None,
            }
        }
        RelationName::Bubble => {
            let next = next?;
            match (&cur.gen, &next.gen) {
                (CobwebGen::Cup(r, dir), CobwebGen::Cap(..)) if cur.pos == next.pos => {
                    let out = d.splice(l..l + 2, Vec::new()).ok()?;
                    Some((out, bubble_value(*r, *dir == Dir::Down)))
                }
                _ => None,
            }
        }
        RelationName::Smooth => {
            let CobwebGen::Cross(a, b) = cur.gen else {
                return None;
            };
            if a.label != b.label {
                return None;
            }
            let replacement = if a.dir == b.dir {
                Vec::new()
            } else {
                vec![
                    Layer::new(cur.pos, CobwebGen::Cap(a.label, a.dir)),
                    Layer::new(cur.pos, CobwebGen::Cup(a.label, b.dir)),
                ]
            };
            one(d.splice(l..l + 1, replacement).ok()?)
        }
        RelationName::DetourR2 => {
            let next = next?;
            match (&cur.gen, &next.gen) {
                (CobwebGen::Cross(..), CobwebGen::Cross(..)) if cur.pos == next.pos => {
                    one(d.splice(l..l + 2, Vec::new()).ok()?)
                }
                _ => None,
            }
        }
        RelationName::DetourR3 => {
            let third = layers.get(l + 2)?;
            let next = next?;
            let all_cross = [cur, next, third]
                .iter()
                .all(|x| matches!(x.gen, CobwebGen::Cross(..)));
            if !all_cross || cur.pos != third.pos {
                return None;
            }
            let p = cur.pos.min(next.pos);
            if cur.pos.abs_diff(next.pos) != 1 {
                return None;
            }
            let w = word_at(d, l)?;
            let (x, y, z) = (w[p], w[p + 1], w[p + 2]);
            let new = if cur.pos == p {
                // (p, p+1, p) -> (p+1, p, p+1)
                vec![
                    Layer::new(p + 1, CobwebGen::Cross(y, z)),
                    Layer::new(p, CobwebGen::Cross(x, z)),
                    Layer::new(p + 1, CobwebGen::Cross(x, y)),
                ]
            } else {
                vec![
                    Layer::new(p, CobwebGen::Cross(x, y)),
                    Layer::new(p + 1, CobwebGen::Cross(x, z)),
                    Layer::new(p, CobwebGen::Cross(y, z)),
                ]
            };
            one(d.splice(l..l + 3, new).ok()?)
        }
        RelationName::TagSlide => {
            let next = next?;
            let w = word_at(d, l)?;
            let new = match (&cur.gen, &next.gen) {
                (CobwebGen::Tag { .. }, CobwebGen::Cross(..)) => {
                    let t = cur.pos;
                    if next.pos == t {
                        let y = w[t + 1];
                        vec![
                            Layer::new(t, CobwebGen::Cross(w[t], y)),
                            Layer::new(t + 1, cur.gen.clone()),
                        ]
                    } else if next.pos + 1 == t {
                        let x = w[t - 1];
                        vec![
                            Layer::new(t - 1, CobwebGen::Cross(x, w[t])),
                            Layer::new(t - 1, cur.gen.clone()),
                        ]
                    } else {
                        return None;
                    }
                }
                (CobwebGen::Cross(a, b), CobwebGen::Tag { .. }) => {
                    let c = cur.pos;
                    let (a, b) = (*a, *b);
                    if next.pos == c {
                        let tagged = tag_output(&next.gen);
                        vec![
                            Layer::new(c + 1, next.gen.clone()),
                            Layer::new(c, CobwebGen::Cross(a, tagged)),
                        ]
                    } else if next.pos == c + 1 {
                        let tagged = tag_output(&next.gen);
                        vec![
                            Layer::new(c, next.gen.clone()),
                            Layer::new(c, CobwebGen::Cross(tagged, b)),
                        ]
                    } else {
                        return None;
                    }
                }
                _ => return None,
            };
            one(d.splice(l..l + 2, new).ok()?)
        }
        RelationName::SaddlePass => {
            let next = next?;
            match (&cur.gen, &next.gen) {
                (CobwebGen::Cap(r, dir), CobwebGen::Cup(r2, dir2))
                    if cur.pos == next.pos && r == r2 && dir == dir2 =>
                {
                    let p = cur.pos;
                    let a = StrandEnd::new(*r, *dir);
                    let b = StrandEnd::new(*r, dir.flip());
                    let new = vec![
                        Layer::new(p + 1, CobwebGen::Cup(*r, *dir)),
                        Layer::new(p, CobwebGen::Cross(a, a)),
                        Layer::new(p + 2, CobwebGen::Cross(b, b)),
                        Layer::new(p + 1, CobwebGen::Cap(*r, *dir)),
                    ];
                    one(d.splice(l..l + 2, new).ok()?)
                }
                _ => None,
            }
        }
        RelationName::Exchange => one(d.exchange(l)?),
        RelationName::Zigzag => one(d.straighten_zigzag(l)?),
        RelationName::TagTurn => tag_turn(d, l),
    }
}

fn tag_output(gen: &CobwebGen) -> StrandEnd<Root> {
    match *gen {
        CobwebGen::Tag { root, flow, .. } => StrandEnd::new(root.conj(), flow.bottom_dir().flip()),
        _ => unreachable!("tag_output on a non-tag"),
    }
}

/// `(tag, cap)` or `(cup, tag)` with the tag on a leg: move it to the other leg.
fn tag_turn(d: &Cobweb, l: usize) -> Option<(Cobweb, LaurentScalar)> {
    let layers = d.layers();
    let cur = layers.get(l)?;
    let next = layers.get(l + 1)?;
    let new = match (&cur.gen, &next.gen) {
        (CobwebGen::Tag { side, .. }, CobwebGen::Cap(..)) => {
            let c = next.pos;
            let x = cur.pos;
            if x != c && x != c + 1 {
                return None;
            }
            let y = if x == c { c + 1 } else { c };
            let w = word_at(d, l)?;
            let other = w[y];
            let new_tag = CobwebGen::Tag {
                root: other.label,
                flow: Flow::from_bottom_dir(other.dir),
                side: side.flip(),
            };
            let left = if x == c { w[x] } else { tag_output(&new_tag) };
            vec![
                Layer::new(y, new_tag),
                Layer::new(c, CobwebGen::Cap(left.label, left.dir)),
            ]
        }
        (CobwebGen::Cup(..), CobwebGen::Tag { side, .. }) => {
            let c = cur.pos;
            let x = next.pos;
            if x != c && x != c + 1 {
                return None;
            }
            let y = if x == c { c + 1 } else { c };
            let top = word_at(d, l + 2)?;
            let above = top[y];
            // The new tag must output what the untagged leg carries now.
            let below = StrandEnd::new(above.label.conj(), above.dir.flip());
            let new_tag = CobwebGen::Tag {
                root: below.label,
                flow: Flow::from_bottom_dir(below.dir),
                side: side.flip(),
            };
            let left = if x == c { top[x] } else { below };
            vec![
                Layer::new(c, CobwebGen::Cup(left.label, left.dir)),
                Layer::new(y, new_tag),
            ]
        }
        _ => return None,
    };
    one(d.splice(l..l + 2, new).ok()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobweb::evaluate;

    fn r(i: u8, j: u8) -> Root {
        Root::new(i, j).unwrap()
    }

    fn check(d: &Cobweb, rw: Rewrite) -> (Cobweb, LaurentScalar) {
        let (out, f) = apply_rewrite(d, &rw).unwrap();
        assert_eq!(evaluate(d), &f * &evaluate(&out), "{:?}", rw);
        (out, f)
    }

    #[test]
    fn tag_switch_negates() {
        let a = r(2, 1);
        let d = Cobweb::new(
            2,
            vec![StrandEnd::new(a, Dir::Up)],
            vec![Layer::new(0, CobwebGen::tag(a, Dir::Up, Side::Right))],
        )
        .unwrap();
        let (out, f) = check(
            &d,
            Rewrite::At {
                relation: RelationName::TagSwitch,
                layer: 0,
            },
        );
        assert_eq!(f, LaurentScalar::from(-1));
        assert_eq!(evaluate(&out), -evaluate(&d));
    }

    #[test]
    fn smoothing_same_label() {
        let a = StrandEnd::new(r(2, 1), Dir::Up);
        let d = Cobweb::new(2, vec![a, a], vec![Layer::new(0, CobwebGen::Cross(a, a))]).unwrap();
        let (out, f) = check(
            &d,
            Rewrite::At {
                relation: RelationName::Smooth,
                layer: 0,
            },
        );
        assert!(out.layers().is_empty());
        assert_eq!(f, LaurentScalar::one());
    }

    #[test]
    fn bursting_ccw_bubble() {
        let root = r(3, 1);
        let d = Cobweb::new(
            3,
            vec![],
            vec![
                Layer::new(0, CobwebGen::Cup(root, Dir::Down)),
                Layer::new(0, CobwebGen::Cap(root, Dir::Down)),
            ],
        )
        .unwrap();
        let (out, f) = check(
            &d,
            Rewrite::At {
                relation: RelationName::Bubble,
                layer: 0,
            },
        );
        assert!(out.layers().is_empty());
        assert_eq!(f, LaurentScalar::q());
    }

    #[test]
    fn saddle_pass_keeps_value() {
        let root = r(1, 2);
        let a = StrandEnd::new(root, Dir::Down);
        let b = StrandEnd::new(root, Dir::Up);
        let d = Cobweb::new(
            2,
            vec![a, b],
            vec![
                Layer::new(0, CobwebGen::Cap(root, Dir::Down)),
                Layer::new(0, CobwebGen::Cup(root, Dir::Down)),
            ],
        )
        .unwrap();
        let (out, _) = check(
            &d,
            Rewrite::At {
                relation: RelationName::SaddlePass,
                layer: 0,
            },
        );
        assert_eq!(out.layers().len(), 4);
    }

    #[test]
    fn tag_turn_both_ways() {
        let root = r(2, 1);
        let cup_then_tag = Cobweb::new(
            2,
            vec![],
            vec![
                Layer::new(0, CobwebGen::Cup(root, Dir::Up)),
                Layer::new(1, CobwebGen::tag(root, Dir::Down, Side::Left)),
            ],
        )
        .unwrap();
        let (turned, _) = check(
            &cup_then_tag,
            Rewrite::At {
                relation: RelationName::TagTurn,
                layer: 0,
            },
        );
        assert_eq!(turned.layers()[1].pos, 0);
        let tag_then_cap = Cobweb::new(
            2,
            vec![StrandEnd::new(root, Dir::Up), StrandEnd::new(root.conj(), Dir::Up)],
            vec![
                Layer::new(0, CobwebGen::tag(root, Dir::Up, Side::Right)),
                Layer::new(0, CobwebGen::Cap(root.conj(), Dir::Down)),
            ],
        )
        .unwrap();
        let (turned, _) = check(
            &tag_then_cap,
            Rewrite::At {
                relation: RelationName::TagTurn,
                layer: 0,
            },
        );
        assert_eq!(turned.layers()[0].pos, 1);
    }

    #[test]
    fn insertions_and_r3() {
        let e = |i, j, d| StrandEnd::new(r(i, j), d);
        let d = Cobweb::identity(3, vec![e(2, 1, Dir::Up), e(3, 1, Dir::Down), e(1, 3, Dir::Up)])
            .unwrap();
        let (d, _) = check(&d, Rewrite::InsertR2 { level: 0, pos: 0 });
        let (d, _) = check(&d, Rewrite::InsertR2 { level: 1, pos: 1 });
        let (d, _) = check(&d, Rewrite::InsertR2 { level: 2, pos: 0 });
        let (d, _) = check(
            &d,
            Rewrite::At {
                relation: RelationName::DetourR3,
                layer: 0,
            },
        );
        assert_eq!(d.layers()[1].pos, 0);
        let (d, _) = check(&d, Rewrite::InsertTagPair { level: 1, pos: 2, side: Side::Left });
        let (d, _) = check(
            &d,
            Rewrite::InsertBubble {
                level: 0,
                pos: 3,
                root: r(3, 2),
                ccw: false,
            },
        );
        let (_, _) = check(&d, Rewrite::InsertZigzag { level: 3, pos: 0, right: true });
        let (_, _) = check(&d, Rewrite::InsertZigzag { level: 3, pos: 2, right: false });
    }
}
