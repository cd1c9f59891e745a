//! Webs for `SL_n`: strands labeled `1..=n`, trivalent vertices, tagged
//! bivalent vertices, and the relation catalog.
//!
//! Generators are geometric. [`WebGen::Merge`] joins two strands below into
//! one above, [`WebGen::Split`] the reverse. With `dir = Down` the arrows
//! run the other way, so a geometric merge is then a split in flow terms.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::diagram::{
    BoundaryWord, DiagramError, Dir, Flow, Generator, Layer, LinComb, Link, PassKind, Side,
    SlicedDiagram, StrandEnd,
};
use crate::scalar::LaurentScalar;

pub type WebEnd = StrandEnd<u8>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WebGen {
    Id { k: u8, dir: Dir },
    /// Outputs `[(k, dir), (k, dir.flip())]`.
    Cup { k: u8, dir: Dir },
    /// Inputs `[(k, dir), (k, dir.flip())]`.
    Cap { k: u8, dir: Dir },
    /// `[(k, dir), (l, dir)]` below, `(k + l, dir)` above.
    Merge { k: u8, l: u8, dir: Dir },
    /// `(k + l, dir)` below, `[(k, dir), (l, dir)]` above.
    Split { k: u8, l: u8, dir: Dir },
    /// Bivalent vertex with `k` below and `n - k` above.
    Tag { k: u8, flow: Flow, side: Side },
}

pub type Web = SlicedDiagram<WebGen>;

impl Generator for WebGen {
    type Label = u8;

    fn inputs(&self, _n: u8) -> BoundaryWord<u8> {
        match *self {
            WebGen::Id { k, dir } => vec![StrandEnd::new(k, dir)],
            WebGen::Cup { .. } => Vec::new(),
            WebGen::Cap { k, dir } => vec![StrandEnd::new(k, dir), StrandEnd::new(k, dir.flip())],
            WebGen::Merge { k, l, dir } => vec![StrandEnd::new(k, dir), StrandEnd::new(l, dir)],
            WebGen::Split { k, l, dir } => vec![StrandEnd::new(k + l, dir)],
            WebGen::Tag { k, flow, .. } => vec![StrandEnd::new(k, flow.bottom_dir())],
        }
    }

    fn outputs(&self, n: u8) -> BoundaryWord<u8> {
        match *self {
            WebGen::Id { k, dir } => vec![StrandEnd::new(k, dir)],
            WebGen::Cup { k, dir } => vec![StrandEnd::new(k, dir), StrandEnd::new(k, dir.flip())],
            WebGen::Cap { .. } => Vec::new(),
            WebGen::Merge { k, l, dir } => vec![StrandEnd::new(k + l, dir)],
            WebGen::Split { k, l, dir } => vec![StrandEnd::new(k, dir), StrandEnd::new(l, dir)],
            WebGen::Tag { k, flow, .. } => {
                vec![StrandEnd::new(n.saturating_sub(k), flow.bottom_dir().flip())]
            }
        }
    }

    fn check(&self, n: u8) -> Result<(), String> {
        match bad_label(self, n) {
            Some(label) => Err(alloc::format!("label {} out of range for n = {}", label, n)),
            None => Ok(()),
        }
    }

    fn label_ok(label: &u8, n: u8) -> bool {
        (1..=n).contains(label)
    }

    fn links(&self) -> Vec<Link> {
        match self {
            WebGen::Id { .. } => vec![Link::Through(0, 0)],
            WebGen::Cup { .. } => vec![Link::Cup(0, 1)],
            WebGen::Cap { .. } => vec![Link::Cap(0, 1)],
            _ => Vec::new(),
        }
    }

    fn pass_kind(&self) -> PassKind {
        PassKind::Plain
    }

    fn name(&self) -> &'static str {
        match self {
            WebGen::Id { .. } => "id",
            WebGen::Cup { .. } => "cup",
            WebGen::Cap { .. } => "cap",
            WebGen::Merge { .. } => "merge",
            WebGen::Split { .. } => "split",
            WebGen::Tag { .. } => "tag_vertex",
        }
    }
}

/// The first label of `g` that is not allowed at rank `n`. For merges and
/// splits the sum `k + l` counts too.
fn bad_label(g: &WebGen, n: u8) -> Option<u16> {
    let ok = |x: u16| (1..=n as u16).contains(&x);
    let labels: Vec<u16> = match *g {
        WebGen::Id { k, .. } | WebGen::Cup { k, .. } | WebGen::Cap { k, .. } => vec![k as u16],
        WebGen::Merge { k, l, .. } | WebGen::Split { k, l, .. } => {
            vec![k as u16, l as u16, k as u16 + l as u16]
        }
        WebGen::Tag { k, .. } => {
            if (1..n).contains(&k) {
                vec![k as u16]
            } else {
                return Some(k as u16);
            }
        }
    };
    labels.into_iter().find(|&x| !ok(x))
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WebError {
    #[error("layer {layer}: label {label} out of range")]
    BadLabel { layer: usize, label: u16 },
    #[error("layer {layer}: arrows do not match the strands below")]
    FlowViolation { layer: usize },
    #[error("relation {name} has no instance with parameters {params:?} at n = {n}")]
    BadParameters { name: &'static str, params: Vec<u8>, n: u8 },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Checks web layer data, separating bad labels from orientation clashes.
pub fn validate_web(n: u8, bottom: &[WebEnd], layers: &[Layer<WebGen>]) -> Result<(), WebError> {
    if let Some(position) = bottom.iter().position(|e| !WebGen::label_ok(&e.label, n)) {
        return Err(WebError::Diagram(DiagramError::BadBoundary { position }));
    }
    let mut word: Vec<WebEnd> = bottom.to_vec();
    for (idx, layer) in layers.iter().enumerate() {
        if let Some(label) = bad_label(&layer.gen, n) {
            return Err(WebError::BadLabel { layer: idx, label });
        }
        let inputs = layer.gen.inputs(n);
        let end = layer.pos + inputs.len();
        if end > word.len() {
            return Err(WebError::Diagram(DiagramError::IllFormed {
                layer: idx,
                reason: alloc::format!("position {} out of range", layer.pos),
            }));
        }
        let here = &word[layer.pos..end];
        if here != &inputs[..] {
            let same_labels = here.iter().zip(&inputs).all(|(a, b)| a.label == b.label);
            if same_labels {
                return Err(WebError::FlowViolation { layer: idx });
            }
            return Err(WebError::Diagram(DiagramError::IllFormed {
                layer: idx,
                reason: alloc::format!("{} does not fit the strands below", layer.gen.name()),
            }));
        }
        word.splice(layer.pos..end, layer.gen.outputs(n));
    }
    Ok(())
}

/// Builds a web after [`validate_web`].
pub fn build_web(n: u8, bottom: Vec<WebEnd>, layers: Vec<Layer<WebGen>>) -> Result<Web, WebError> {
    validate_web(n, &bottom, &layers)?;
    Ok(Web::new(n, bottom, layers)?)
}

/// Removes every strand labeled `n`. A trivalent vertex that loses its
/// `n`-strand becomes a bivalent vertex tagged on the side the strand was,
/// which in sliced form is a tag on the right leg of a cap or cup.
pub fn delete_n_strands(d: &Web) -> Web {
    let n = d.n();
    let is_n = |e: &WebEnd| e.label == n;
    let levels = d.levels();
    let bottom: Vec<WebEnd> = d.bottom().iter().filter(|e| !is_n(e)).copied().collect();
    let mut layers = Vec::new();
    for (li, layer) in d.layers().iter().enumerate() {
        let shift = levels[li][..layer.pos].iter().filter(|e| is_n(e)).count();
        let p = layer.pos - shift;
        match layer.gen {
            WebGen::Id { k, .. } | WebGen::Cup { k, .. } | WebGen::Cap { k, .. } if k == n => {}
            WebGen::Merge { k, l, dir } if k + l == n => {
                layers.push(Layer::new(
                    p + 1,
                    WebGen::Tag {
                        k: l,
                        flow: Flow::from_bottom_dir(dir),
                        side: Side::Right,
                    },
                ));
                layers.push(Layer::new(p, WebGen::Cap { k, dir }));
            }
            WebGen::Split { k, l, dir } if k + l == n => {
                layers.push(Layer::new(p, WebGen::Cup { k, dir }));
                layers.push(Layer::new(
                    p + 1,
                    WebGen::Tag {
                        k,
                        flow: Flow::from_bottom_dir(dir.flip()),
                        side: Side::Right,
                    },
                ));
            }
            ref g => layers.push(Layer::new(p, g.clone())),
        }
    }
    Web::new(n, bottom, layers).expect("deleting n-strands keeps a web well-formed")
}

/// Reverses every arrow: directions flip and bivalent flows swap.
pub fn reverse_arrows(d: &Web) -> Web {
    let bottom = d
        .bottom()
        .iter()
        .map(|e| StrandEnd::new(e.label, e.dir.flip()))
        .collect();
    let layers = d
        .layers()
        .iter()
        .map(|l| Layer::new(l.pos, reverse_gen(&l.gen)))
        .collect();
    Web::new(d.n(), bottom, layers).expect("reversal keeps a web well-formed")
}

fn reverse_gen(g: &WebGen) -> WebGen {
    match *g {
        WebGen::Id { k, dir } => WebGen::Id { k, dir: dir.flip() },
        WebGen::Cup { k, dir } => WebGen::Cup { k, dir: dir.flip() },
        WebGen::Cap { k, dir } => WebGen::Cap { k, dir: dir.flip() },
        WebGen::Merge { k, l, dir } => WebGen::Merge { k, l, dir: dir.flip() },
        WebGen::Split { k, l, dir } => WebGen::Split { k, l, dir: dir.flip() },
        WebGen::Tag { k, flow, side } => WebGen::Tag {
            k,
            flow: flow.flip(),
            side,
        },
    }
}

pub fn reverse_comb(c: &LinComb<WebGen>) -> LinComb<WebGen> {
    let mut out = LinComb::new();
    for (s, d) in c.iter() {
        out.add_term(s.clone(), reverse_arrows(d))
            .expect("reversal maps a shared boundary to a shared boundary");
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    TagSwitch,
    TagCancel,
    IEqualsH,
    Digon,
    Square,
}

impl RelationKind {
    pub const ALL: [RelationKind; 5] = [
        RelationKind::TagSwitch,
        RelationKind::TagCancel,
        RelationKind::IEqualsH,
        RelationKind::Digon,
        RelationKind::Square,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationKind::TagSwitch => "tag_switch",
            RelationKind::TagCancel => "tag_cancel",
            RelationKind::IEqualsH => "i_equals_h",
            RelationKind::Digon => "digon",
            RelationKind::Square => "square",
        }
    }

    pub fn parse(s: &str) -> Option<RelationKind> {
        RelationKind::ALL.into_iter().find(|r| r.as_str() == s)
    }

    /// Every admissible parameter tuple at rank `n`.
    pub fn parameters(self, n: u8) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        match self {
            RelationKind::TagSwitch | RelationKind::TagCancel => {
                out.extend((1..n).map(|k| vec![k]));
            }
            RelationKind::IEqualsH => {
                for k in 1..=n {
                    for l in 1..=n {
                        for m in 1..=n {
                            if k as u16 + l as u16 + m as u16 <= n as u16 {
                                out.push(vec![k, l, m]);
                            }
                        }
                    }
                }
            }
            // The digon's left arc carries k - 1, so it needs k >= 2.
            RelationKind::Digon => out.extend((2..=n).map(|k| vec![k])),
            // Left side k - 1 and middle k + 1 must both be labels.
            RelationKind::Square => out.extend((2..n).map(|k| vec![k])),
        }
        out
    }
}

/// One relation `lhs = rhs` with concrete labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationInstance {
    pub kind: RelationKind,
    pub reversed: bool,
    pub n: u8,
    pub params: Vec<u8>,
    pub lhs: LinComb<WebGen>,
    pub rhs: LinComb<WebGen>,
}

impl RelationInstance {
    /// `square`, `square_reversed`, ...
    pub fn name(&self) -> String {
        if self.reversed {
            alloc::format!("{}_reversed", self.kind.as_str())
        } else {
            String::from(self.kind.as_str())
        }
    }

    pub fn boundary(&self) -> (&[WebEnd], &[WebEnd]) {
        let (_, d) = self.lhs.iter().next().expect("lhs is nonempty");
        (d.bottom(), d.top())
    }

    pub fn reverse(&self) -> RelationInstance {
        RelationInstance {
            kind: self.kind,
            reversed: !self.reversed,
            n: self.n,
            params: self.params.clone(),
            lhs: reverse_comb(&self.lhs),
            rhs: reverse_comb(&self.rhs),
        }
    }
}

fn up(k: u8) -> WebEnd {
    StrandEnd::new(k, Dir::Up)
}

fn web(n: u8, bottom: Vec<WebEnd>, layers: Vec<(usize, WebGen)>) -> Web {
    let layers = layers.into_iter().map(|(p, g)| Layer::new(p, g)).collect();
    build_web(n, bottom, layers).expect("catalog webs are well-formed")
}

fn merge(k: u8, l: u8) -> WebGen {
    WebGen::Merge { k, l, dir: Dir::Up }
}

fn split(k: u8, l: u8) -> WebGen {
    WebGen::Split { k, l, dir: Dir::Up }
}

fn comb(terms: Vec<(LaurentScalar, Web)>) -> LinComb<WebGen> {
    let mut c = LinComb::new();
    for (s, d) in terms {
        c.add_term(s, d).expect("relation sides share a boundary");
    }
    c
}

/// Builds one relation with upward-oriented boundary (reverse it for the
/// other variant).
pub fn instantiate(kind: RelationKind, n: u8, params: &[u8]) -> Result<RelationInstance, WebError> {
    if n < 2 || !kind.parameters(n).iter().any(|p| p == params) {
        return Err(WebError::BadParameters {
            name: kind.as_str(),
            params: params.to_vec(),
            n,
        });
    }
    let one = LaurentScalar::one;
    let (lhs, rhs) = match kind {
        RelationKind::TagSwitch => {
            let k = params[0];
            let tag = |side| {
                web(
                    n,
                    vec![StrandEnd::new(n - k, Dir::Down)],
                    vec![(0, WebGen::Tag { k: n - k, flow: Flow::BothOut, side })],
                )
            };
            let sign = if (k as u32 * (n - k) as u32).is_multiple_of(2) { 1 } else { -1 };
            (
                comb(vec![(one(), tag(Side::Right))]),
                comb(vec![(LaurentScalar::from(sign), tag(Side::Left))]),
            )
        }
        RelationKind::TagCancel => {
            let k = params[0];
            let pair = web(
                n,
                vec![up(k)],
                vec![
                    (0, WebGen::Tag { k, flow: Flow::BothIn, side: Side::Right }),
                    (0, WebGen::Tag { k: n - k, flow: Flow::BothOut, side: Side::Right }),
                ],
            );
            let strand = web(n, vec![up(k)], vec![]);
            (comb(vec![(one(), pair)]), comb(vec![(one(), strand)]))
        }
        RelationKind::IEqualsH => {
            let (k, l, m) = (params[0], params[1], params[2]);
            let bottom = vec![up(l), up(m)];
            let cup = WebGen::Cup { k, dir: Dir::Down };
            let i_shape = web(
                n,
                bottom.clone(),
                vec![(0, merge(l, m)), (0, cup.clone()), (1, merge(k, l + m))],
            );
            let h_shape = web(
                n,
                bottom,
                vec![(0, cup), (1, merge(k, l)), (1, merge(k + l, m))],
            );
            (comb(vec![(one(), i_shape)]), comb(vec![(one(), h_shape)]))
        }
        RelationKind::Digon => {
            let k = params[0];
            let digon = web(n, vec![up(k)], vec![(0, split(k - 1, 1)), (0, merge(k - 1, 1))]);
            let strand = web(n, vec![up(k)], vec![]);
            (
                comb(vec![(one(), digon)]),
                comb(vec![(LaurentScalar::quantum_integer(k as u32), strand)]),
            )
        }
        RelationKind::Square => {
            let k = params[0];
            let bottom = vec![up(k), up(1)];
            let square = web(
                n,
                bottom.clone(),
                vec![
                    (0, split(k - 1, 1)),
                    (1, merge(1, 1)),
                    (1, split(1, 1)),
                    (0, merge(k - 1, 1)),
                ],
            );
            let i_shape = web(n, bottom.clone(), vec![(0, merge(k, 1)), (0, split(k, 1))]);
            let strands = web(n, bottom, vec![]);
            (
                comb(vec![(one(), square)]),
                comb(vec![
                    (one(), i_shape),
                    (LaurentScalar::quantum_integer(k as u32 - 1), strands),
                ]),
            )
        }
    };
    Ok(RelationInstance {
        kind,
        reversed: false,
        n,
        params: params.to_vec(),
        lhs,
        rhs,
    })
}

/// Every relation and its arrow-reversed variant, for every admissible
/// parameter tuple at rank `n`.
pub fn relation_instances(n: u8) -> Vec<RelationInstance> {
    let mut out = Vec::new();
    for kind in RelationKind::ALL {
        for params in kind.parameters(n) {
            let inst = instantiate(kind, n, &params).expect("parameters come from the catalog");
            let rev = inst.reverse();
            out.push(inst);
            out.push(rev);
        }
    }
    out
}

/// Two squares sharing a vertical edge of label 2, with outer labels `k`
/// (left) and `l` (right), together with the results of bursting the left
/// square and the right square.
#[derive(Clone, Debug)]
pub struct DoubleSquare {
    pub web: Web,
    pub burst_left: LinComb<WebGen>,
    pub burst_right: LinComb<WebGen>,
}

pub fn double_square(n: u8, k: u8, l: u8) -> Result<DoubleSquare, WebError> {
    if !(k >= 2 && l >= 2 && k < n && l < n) {
        return Err(WebError::BadParameters {
            name: "double_square",
            params: vec![k, l],
            n,
        });
    }
    let bottom = vec![up(k), up(l)];
    let d = web(
        n,
        bottom.clone(),
        vec![
            (0, split(k - 1, 1)),
            (2, split(1, l - 1)),
            (1, merge(1, 1)),
            (1, split(1, 1)),
            (0, merge(k - 1, 1)),
            (1, merge(1, l - 1)),
        ],
    );
    let left = comb(vec![
        (
            LaurentScalar::one(),
            web(
                n,
                bottom.clone(),
                vec![
                    (1, split(1, l - 1)),
                    (0, merge(k, 1)),
                    (0, split(k, 1)),
                    (1, merge(1, l - 1)),
                ],
            ),
        ),
        (
            LaurentScalar::quantum_integer(k as u32 - 1),
            web(n, bottom.clone(), vec![(1, split(1, l - 1)), (1, merge(1, l - 1))]),
        ),
    ]);
    let right = comb(vec![
        (
            LaurentScalar::one(),
            web(
                n,
                bottom.clone(),
                vec![
                    (0, split(k - 1, 1)),
                    (1, merge(1, l)),
                    (1, split(1, l)),
                    (0, merge(k - 1, 1)),
                ],
            ),
        ),
        (
            LaurentScalar::quantum_integer(l as u32 - 1),
            web(n, bottom, vec![(0, split(k - 1, 1)), (0, merge(k - 1, 1))]),
        ),
    ]);
    Ok(DoubleSquare {
        web: d,
        burst_left: left,
        burst_right: right,
    })
}

/// A closed loop labeled `k`; counterclockwise means the arrow runs down the
/// left side.
pub fn circle(n: u8, k: u8, ccw: bool) -> Result<Web, WebError> {
    let dir = if ccw { Dir::Down } else { Dir::Up };
    build_web(
        n,
        vec![],
        vec![
            Layer::new(0, WebGen::Cup { k, dir }),
            Layer::new(0, WebGen::Cap { k, dir }),
        ],
    )
}
