//! Random cobwebs and random moves, for fuzzing.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::rewrite::{apply_rewrite, RelationName, Rewrite};
use super::{Cobweb, CobwebEnd, CobwebError, CobwebGen, Root};
use crate::diagram::{Dir, Generator, Layer, Side};
use crate::scalar::LaurentScalar;

/// Size limits for generated diagrams.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub n: u8,
    /// Widest intermediate word.
    pub max_strands: usize,
    /// Number of random generators placed before closing up.
    pub steps: usize,
}

struct Builder {
    n: u8,
    word: Vec<CobwebEnd>,
    layers: Vec<Layer<CobwebGen>>,
}

impl Builder {
    fn push(&mut self, pos: usize, gen: CobwebGen) {
        let k = gen.inputs(self.n).len();
        let out = gen.outputs(self.n);
        self.word.splice(pos..pos + k, out);
        self.layers.push(Layer::new(pos, gen));
    }

    fn random_root<R: Rng + ?Sized>(&self, rng: &mut R) -> Root {
        *Root::all(self.n).choose(rng).expect("n >= 2")
    }

    fn random_dir<R: Rng + ?Sized>(rng: &mut R) -> Dir {
        if rng.gen() {
            Dir::Up
        } else {
            Dir::Down
        }
    }

    fn random_side<R: Rng + ?Sized>(rng: &mut R) -> Side {
        if rng.gen() {
            Side::Left
        } else {
            Side::Right
        }
    }

    fn grow<R: Rng + ?Sized>(&mut self, rng: &mut R, shape: &Shape) {
        for _ in 0..shape.steps {
            let len = self.word.len();
            match rng.gen_range(0..4) {
                0 if len + 2 <= shape.max_strands => {
                    let root = self.random_root(rng);
                    let pos = rng.gen_range(0..=len);
                    self.push(pos, CobwebGen::Cup(root, Self::random_dir(rng)));
                }
                1 if len >= 2 => {
                    let p = rng.gen_range(0..len - 1);
                    self.push(p, CobwebGen::cross(self.word[p], self.word[p + 1]));
                }
                2 if len >= 1 => {
                    let p = rng.gen_range(0..len);
                    let e = self.word[p];
                    self.push(p, CobwebGen::tag(e.label, e.dir, Self::random_side(rng)));
                }
                3 if len >= 2 => {
                    let p = rng.gen_range(0..len - 1);
                    let (a, b) = (self.word[p], self.word[p + 1]);
                    if a.label == b.label && a.dir != b.dir {
                        self.push(p, CobwebGen::Cap(a.label, a.dir));
                    }
                }
                _ => {}
            }
        }
    }

    /// Whether `a` and `b` can be joined by a cap, possibly after a tag on `b`.
    fn joinable(a: CobwebEnd, b: CobwebEnd) -> bool {
        (b.label == a.label && b.dir != a.dir) || (b.label == a.label.conj() && b.dir == a.dir)
    }

    /// Caps off strand `i` with some compatible partner, if there is one.
    fn close_one<R: Rng + ?Sized>(&mut self, rng: &mut R, i: usize) -> bool {
        let a = self.word[i];
        let partners: Vec<usize> = (0..self.word.len())
            .filter(|&j| j != i && Self::joinable(a, self.word[j]))
            .collect();
        let Some(&j) = partners.choose(rng) else {
            return false;
        };
        // Walk strand j next to strand i with crossings.
        let (mut i, mut j) = (i, j);
        while j > i + 1 {
            self.push(j - 1, CobwebGen::cross(self.word[j - 1], self.word[j]));
            j -= 1;
        }
        while j + 1 < i {
            self.push(j, CobwebGen::cross(self.word[j], self.word[j + 1]));
            j += 1;
        }
        if j + 1 == i {
            // Partner on the left: keep it there, the cap is built from the left strand.
            core::mem::swap(&mut i, &mut j);
        }
        let (p, right) = (i, i + 1);
        let (left_end, right_end) = (self.word[p], self.word[right]);
        if right_end.label != left_end.label {
            self.push(
                right,
                CobwebGen::tag(right_end.label, right_end.dir, Self::random_side(rng)),
            );
        }
        let left_end = self.word[p];
        self.push(p, CobwebGen::Cap(left_end.label, left_end.dir));
        true
    }

    fn finish(self, bottom: Vec<CobwebEnd>) -> Cobweb {
        Cobweb::new(self.n, bottom, self.layers).expect("generated layers compose")
    }
}

/// A random closed cobweb: cups, crossings, tags and caps, closed up by
/// pairing the remaining strands.
pub fn random_closed<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> Cobweb {
    let mut b = Builder {
        n: shape.n,
        word: Vec::new(),
        layers: Vec::new(),
    };
    b.grow(rng, shape);
    while !b.word.is_empty() {
        let i = rng.gen_range(0..b.word.len());
        let closed = b.close_one(rng, i);
        debug_assert!(closed, "every curve of a capless start has two free ends");
    }
    b.finish(Vec::new())
}

/// A random cobweb with `bottom_len` random boundary strands below.
pub fn random_open<R: Rng + ?Sized>(rng: &mut R, shape: &Shape, bottom_len: usize) -> Cobweb {
    let mut b = Builder {
        n: shape.n,
        word: Vec::new(),
        layers: Vec::new(),
    };
    for _ in 0..bottom_len {
        let root = b.random_root(rng);
        b.word.push(CobwebEnd::new(root, Builder::random_dir(rng)));
    }
    let bottom = b.word.clone();
    b.grow(rng, shape);
    // Cap some strands so both same-side arcs and through strands show up.
    let closes = rng.gen_range(0..=b.word.len() / 2);
    for _ in 0..closes {
        if b.word.len() < 2 {
            break;
        }
        let i = rng.gen_range(0..b.word.len());
        b.close_one(rng, i);
    }
    b.finish(bottom)
}

/// A random applicable move: a forward relation at a random layer, falling
/// back to an insertion, which always applies.
pub fn random_rewrite<R: Rng + ?Sized>(rng: &mut R, d: &Cobweb) -> Rewrite {
    let len = d.layers().len();
    if len > 0 {
        for _ in 0..16 {
            let relation = *RelationName::ALL.choose(rng).expect("nonempty");
            let layer = rng.gen_range(0..len);
            let rw = Rewrite::At { relation, layer };
            if apply_rewrite(d, &rw).is_ok() {
                return rw;
            }
        }
    }
    let levels = d.levels();
    let level = rng.gen_range(0..levels.len());
    let width = levels[level].len();
    match rng.gen_range(0..4) {
        0 if width >= 2 => Rewrite::InsertR2 {
            level,
            pos: rng.gen_range(0..width - 1),
        },
        1 if width >= 1 => Rewrite::InsertTagPair {
            level,
            pos: rng.gen_range(0..width),
            side: Builder::random_side(rng),
        },
        2 if width >= 1 => Rewrite::InsertZigzag {
            level,
            pos: rng.gen_range(0..width),
            right: rng.gen(),
        },
        _ => Rewrite::InsertBubble {
            level,
            pos: rng.gen_range(0..=width),
            root: *Root::all(d.n()).choose(rng).expect("n >= 2"),
            ccw: rng.gen(),
        },
    }
}

/// Applies `count` random moves, returning the final diagram, the product of
/// their factors and the moves themselves.
pub fn random_walk<R: Rng + ?Sized>(
    rng: &mut R,
    d: &Cobweb,
    count: usize,
) -> Result<(Cobweb, LaurentScalar, Vec<Rewrite>), CobwebError> {
    let mut cur = d.clone();
    let mut factor = LaurentScalar::one();
    let mut moves = Vec::with_capacity(count);
    for _ in 0..count {
        let rw = random_rewrite(rng, &cur);
        let (next, f) = apply_rewrite(&cur, &rw)?;
        cur = next;
        factor *= f;
        moves.push(rw);
    }
    Ok((cur, factor, moves))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobweb::{evaluate, reduce_oracle};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closed_and_open_generate_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=4 {
            let shape = Shape {
                n,
                max_strands: 6,
                steps: 12,
            };
            for _ in 0..50 {
                let d = random_closed(&mut rng, &shape);
                assert!(d.is_closed());
                let o = random_open(&mut rng, &shape, 3);
                assert_eq!(o.bottom().len(), 3);
            }
        }
    }

    #[test]
    fn walks_preserve_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let shape = Shape {
            n: 3,
            max_strands: 6,
            steps: 10,
        };
        for _ in 0..100 {
            let d = random_closed(&mut rng, &shape);
            let (e, f, moves) = random_walk(&mut rng, &d, 20).unwrap();
            assert_eq!(evaluate(&d), &f * &evaluate(&e), "{:?}", moves);
        }
    }

    #[test]
    fn oracle_matches_on_random_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let shape = Shape {
            n: 4,
            max_strands: 8,
            steps: 14,
        };
        for _ in 0..100 {
            let d = random_closed(&mut rng, &shape);
            let out = reduce_oracle(&d, 100_000).unwrap();
            assert!(out.normal_form.layers().is_empty());
            assert_eq!(out.factor, evaluate(&d));
        }
    }
}
