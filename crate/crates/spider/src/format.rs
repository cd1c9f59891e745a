//! The JSON diagram format.
//!
//! ```json
//! {"n": 3, "kind": "web",
//!  "bottom": [{"label": 2, "dir": "up"}],
//!  "layers": [{"gen": "split", "pos": 0, "k": 1, "l": 1, "dir": "up"}]}
//! ```
//!
//! Cobweb labels are roots `[i, j]`. Scalars are lists of
//! `[doubled_exponent, numerator, denominator]` triples.

use std::fmt;

use serde::{Deserialize, Serialize};
use spider_core::cobweb::{Cobweb, CobwebEnd, CobwebGen, Root};
use spider_core::diagram::{DiagramError, Dir, Flow, Layer, LinComb, Side, StrandEnd};
use spider_core::scalar::LaurentScalar;
use spider_core::statesum::{subset_from, BoundaryData, Subset};
use spider_core::web::{build_web, Web, WebError, WebGen};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    /// 1-based line and column in the input text.
    Text { line: usize, column: usize },
    Bottom(usize),
    Top(usize),
    Layer(usize),
    Document,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Text { line, column } => write!(f, "line {line}, column {column}"),
            Location::Bottom(p) => write!(f, "bottom position {p}"),
            Location::Top(p) => write!(f, "top position {p}"),
            Location::Layer(l) => write!(f, "layer {l}"),
            Location::Document => write!(f, "document"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{location}: {expected}")]
pub struct ParseError {
    pub location: Location,
    pub expected: String,
}

impl ParseError {
    fn at(location: Location, expected: impl Into<String>) -> Self {
        ParseError {
            location,
            expected: expected.into(),
        }
    }
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        let mut msg = e.to_string();
        // serde_json appends " at line L column C"; the location carries it.
        if let Some(cut) = msg.rfind(" at line ") {
            msg.truncate(cut);
        }
        ParseError::at(
            Location::Text {
                line: e.line(),
                column: e.column(),
            },
            msg,
        )
    }
}

impl From<DiagramError> for ParseError {
    fn from(e: DiagramError) -> Self {
        let location = match e {
            DiagramError::IllFormed { layer, .. } => Location::Layer(layer),
            DiagramError::BadBoundary { position } => Location::Bottom(position),
            DiagramError::BoundaryMismatch => Location::Document,
        };
        ParseError::at(location, e.to_string())
    }
}

impl From<WebError> for ParseError {
    fn from(e: WebError) -> Self {
        match e {
            WebError::BadLabel { layer, .. } | WebError::FlowViolation { layer } => {
                ParseError::at(Location::Layer(layer), e.to_string())
            }
            WebError::Diagram(d) => d.into(),
            other => ParseError::at(Location::Document, other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirDto {
    Up,
    Down,
}

impl From<Dir> for DirDto {
    fn from(d: Dir) -> Self {
        match d {
            Dir::Up => DirDto::Up,
            Dir::Down => DirDto::Down,
        }
    }
}

impl From<DirDto> for Dir {
    fn from(d: DirDto) -> Self {
        match d {
            DirDto::Up => Dir::Up,
            DirDto::Down => Dir::Down,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowDto {
    BothIn,
    BothOut,
}

impl From<Flow> for FlowDto {
    fn from(f: Flow) -> Self {
        match f {
            Flow::BothIn => FlowDto::BothIn,
            Flow::BothOut => FlowDto::BothOut,
        }
    }
}

impl From<FlowDto> for Flow {
    fn from(f: FlowDto) -> Self {
        match f {
            FlowDto::BothIn => Flow::BothIn,
            FlowDto::BothOut => Flow::BothOut,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideDto {
    Left,
    Right,
}

impl From<Side> for SideDto {
    fn from(s: Side) -> Self {
        match s {
            Side::Left => SideDto::Left,
            Side::Right => SideDto::Right,
        }
    }
}

impl From<SideDto> for Side {
    fn from(s: SideDto) -> Self {
        match s {
            SideDto::Left => Side::Left,
            SideDto::Right => Side::Right,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Web,
    Cobweb,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndDto<L> {
    pub label: L,
    pub dir: DirDto,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "gen", rename_all = "snake_case", deny_unknown_fields)]
pub enum WebLayerDto {
    Id { pos: usize, k: u8, dir: DirDto },
    Cup { pos: usize, k: u8, dir: DirDto },
    Cap { pos: usize, k: u8, dir: DirDto },
    Merge { pos: usize, k: u8, l: u8, dir: DirDto },
    Split { pos: usize, k: u8, l: u8, dir: DirDto },
    TagVertex { pos: usize, k: u8, flow: FlowDto, side: SideDto },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "gen", rename_all = "snake_case", deny_unknown_fields)]
pub enum CobwebLayerDto {
    Id { pos: usize, root: [u8; 2], dir: DirDto },
    Cup { pos: usize, root: [u8; 2], dir: DirDto },
    Cap { pos: usize, root: [u8; 2], dir: DirDto },
    Vcross { pos: usize, left: EndDto<[u8; 2]>, right: EndDto<[u8; 2]> },
    Tag { pos: usize, root: [u8; 2], flow: FlowDto, side: SideDto },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocDto<L, G> {
    pub n: u8,
    pub kind: Kind,
    pub bottom: Vec<EndDto<L>>,
    pub layers: Vec<G>,
}

/// Only `n` and `kind`, to pick the layer schema.
#[derive(Deserialize)]
struct Header {
    n: Option<u8>,
    kind: Option<Kind>,
}

/// A parsed document of either kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagram {
    Web(Web),
    Cobweb(Cobweb),
}

fn root(r: [u8; 2], n: u8, location: Location) -> Result<Root, ParseError> {
    Root::new(r[0], r[1])
        .filter(|x| x.fits(n))
        .ok_or_else(|| ParseError::at(location, format!("a root [i, j] with i != j in 1..={n}")))
}

fn root_dto(r: Root) -> [u8; 2] {
    [r.i, r.j]
}

fn cobweb_end(e: &EndDto<[u8; 2]>, n: u8, location: Location) -> Result<CobwebEnd, ParseError> {
    Ok(StrandEnd::new(root(e.label, n, location)?, e.dir.into()))
}

fn cobweb_end_dto(e: CobwebEnd) -> EndDto<[u8; 2]> {
    EndDto {
        label: root_dto(e.label),
        dir: e.dir.into(),
    }
}

pub fn web_from_dto(doc: &DocDto<u8, WebLayerDto>) -> Result<Web, ParseError> {
    let bottom = doc
        .bottom
        .iter()
        .map(|e| StrandEnd::new(e.label, e.dir.into()))
        .collect();
    let layers = doc
        .layers
        .iter()
        .map(|l| match *l {
            WebLayerDto::Id { pos, k, dir } => Layer::new(pos, WebGen::Id { k, dir: dir.into() }),
            WebLayerDto::Cup { pos, k, dir } => Layer::new(pos, WebGen::Cup { k, dir: dir.into() }),
            WebLayerDto::Cap { pos, k, dir } => Layer::new(pos, WebGen::Cap { k, dir: dir.into() }),
            WebLayerDto::Merge { pos, k, l, dir } => Layer::new(pos, WebGen::Merge { k, l, dir: dir.into() }),
            WebLayerDto::Split { pos, k, l, dir } => Layer::new(pos, WebGen::Split { k, l, dir: dir.into() }),
            WebLayerDto::TagVertex { pos, k, flow, side } => Layer::new(
                pos,
                WebGen::Tag {
                    k,
                    flow: flow.into(),
                    side: side.into(),
                },
            ),
        })
        .collect();
    Ok(build_web(doc.n, bottom, layers)?)
}

pub fn web_to_dto(d: &Web) -> DocDto<u8, WebLayerDto> {
    DocDto {
        n: d.n(),
        kind: Kind::Web,
        bottom: d
            .bottom()
            .iter()
            .map(|e| EndDto {
                label: e.label,
                dir: e.dir.into(),
            })
            .collect(),
        layers: d
            .layers()
            .iter()
            .map(|l| {
                let pos = l.pos;
                match l.gen {
                    WebGen::Id { k, dir } => WebLayerDto::Id { pos, k, dir: dir.into() },
                    WebGen::Cup { k, dir } => WebLayerDto::Cup { pos, k, dir: dir.into() },
                    WebGen::Cap { k, dir } => WebLayerDto::Cap { pos, k, dir: dir.into() },
                    WebGen::Merge { k, l, dir } => WebLayerDto::Merge { pos, k, l, dir: dir.into() },
                    WebGen::Split { k, l, dir } => WebLayerDto::Split { pos, k, l, dir: dir.into() },
                    WebGen::Tag { k, flow, side } => WebLayerDto::TagVertex {
                        pos,
                        k,
                        flow: flow.into(),
                        side: side.into(),
                    },
                }
            })
            .collect(),
    }
}

pub fn cobweb_from_dto(doc: &DocDto<[u8; 2], CobwebLayerDto>) -> Result<Cobweb, ParseError> {
    let n = doc.n;
    let bottom = doc
        .bottom
        .iter()
        .enumerate()
        .map(|(p, e)| cobweb_end(e, n, Location::Bottom(p)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut layers = Vec::with_capacity(doc.layers.len());
    for (idx, l) in doc.layers.iter().enumerate() {
        let at = || Location::Layer(idx);
        let layer = match l {
            CobwebLayerDto::Id { pos, root: r, dir } => Layer::new(*pos, CobwebGen::Id(root(*r, n, at())?, (*dir).into())),
            CobwebLayerDto::Cup { pos, root: r, dir } => Layer::new(*pos, CobwebGen::Cup(root(*r, n, at())?, (*dir).into())),
            CobwebLayerDto::Cap { pos, root: r, dir } => Layer::new(*pos, CobwebGen::Cap(root(*r, n, at())?, (*dir).into())),
            CobwebLayerDto::Vcross { pos, left, right } => Layer::new(
                *pos,
                CobwebGen::Cross(cobweb_end(left, n, at())?, cobweb_end(right, n, at())?),
            ),
            CobwebLayerDto::Tag { pos, root: r, flow, side } => Layer::new(
                *pos,
                CobwebGen::Tag {
                    root: root(*r, n, at())?,
                    flow: (*flow).into(),
                    side: (*side).into(),
                },
            ),
        };
        layers.push(layer);
    }
    Ok(Cobweb::new(n, bottom, layers)?)
}

pub fn cobweb_to_dto(d: &Cobweb) -> DocDto<[u8; 2], CobwebLayerDto> {
    DocDto {
        n: d.n(),
        kind: Kind::Cobweb,
        bottom: d.bottom().iter().map(|&e| cobweb_end_dto(e)).collect(),
        layers: d
            .layers()
            .iter()
            .map(|l| {
                let pos = l.pos;
                match l.gen {
                    CobwebGen::Id(r, dir) => CobwebLayerDto::Id { pos, root: root_dto(r), dir: dir.into() },
                    CobwebGen::Cup(r, dir) => CobwebLayerDto::Cup { pos, root: root_dto(r), dir: dir.into() },
                    CobwebGen::Cap(r, dir) => CobwebLayerDto::Cap { pos, root: root_dto(r), dir: dir.into() },
                    CobwebGen::Cross(a, b) => CobwebLayerDto::Vcross {
                        pos,
                        left: cobweb_end_dto(a),
                        right: cobweb_end_dto(b),
                    },
                    CobwebGen::Tag { root, flow, side } => CobwebLayerDto::Tag {
                        pos,
                        root: root_dto(root),
                        flow: flow.into(),
                        side: side.into(),
                    },
                }
            })
            .collect(),
    }
}

/// Parses a diagram of either kind.
pub fn parse(text: &str) -> Result<Diagram, ParseError> {
    let header: Header = serde_json::from_str(text)?;
    if header.n.is_none() {
        return Err(ParseError::at(Location::Document, "field `n`"));
    }
    match header.kind {
        Some(Kind::Web) => Ok(Diagram::Web(web_from_dto(&serde_json::from_str(text)?)?)),
        Some(Kind::Cobweb) => Ok(Diagram::Cobweb(cobweb_from_dto(&serde_json::from_str(text)?)?)),
        None => Err(ParseError::at(Location::Document, "field `kind`")),
    }
}

pub fn parse_web(text: &str) -> Result<Web, ParseError> {
    match parse(text)? {
        Diagram::Web(w) => Ok(w),
        Diagram::Cobweb(_) => Err(ParseError::at(Location::Document, "a web, found a cobweb")),
    }
}

pub fn parse_cobweb(text: &str) -> Result<Cobweb, ParseError> {
    match parse(text)? {
        Diagram::Cobweb(c) => Ok(c),
        Diagram::Web(_) => Err(ParseError::at(Location::Document, "a cobweb, found a web")),
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("diagram DTOs serialize");
    s.push('\n');
    s
}

/// Canonical text: pretty-printed JSON with a trailing newline.
pub fn serialize(d: &Diagram) -> String {
    match d {
        Diagram::Web(w) => pretty(&web_to_dto(w)),
        Diagram::Cobweb(c) => pretty(&cobweb_to_dto(c)),
    }
}

pub fn serialize_web(w: &Web) -> String {
    pretty(&web_to_dto(w))
}

pub fn serialize_cobweb(c: &Cobweb) -> String {
    pretty(&cobweb_to_dto(c))
}

pub fn scalar_to_json(s: &LaurentScalar) -> Vec<[i64; 3]> {
    s.to_triples().into_iter().map(|(e, a, b)| [e, a, b]).collect()
}

pub fn scalar_from_json(t: &[[i64; 3]]) -> Option<LaurentScalar> {
    LaurentScalar::from_triples(t.iter().map(|&[e, a, b]| (e, a, b)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDto<G> {
    pub coefficient: Vec<[i64; 3]>,
    pub value: String,
    pub diagram: G,
}

pub type CobwebTerm = TermDto<DocDto<[u8; 2], CobwebLayerDto>>;

/// A cobweb combination as a JSON list of terms. `value` is the coefficient
/// in readable form and is ignored when reading.
pub fn cobweb_comb_to_json(c: &LinComb<CobwebGen>) -> Vec<CobwebTerm> {
    c.iter()
        .map(|(k, d)| TermDto {
            coefficient: scalar_to_json(k),
            value: k.to_string(),
            diagram: cobweb_to_dto(d),
        })
        .collect()
}

pub fn cobweb_comb_from_json(terms: &[CobwebTerm]) -> Result<LinComb<CobwebGen>, ParseError> {
    let mut out = LinComb::new();
    for (i, t) in terms.iter().enumerate() {
        let k = scalar_from_json(&t.coefficient)
            .ok_or_else(|| ParseError::at(Location::Document, format!("term {i}: nonzero denominators")))?;
        out.add_term(k, cobweb_from_dto(&t.diagram)?)?;
    }
    Ok(out)
}

pub fn web_comb_to_json(c: &LinComb<WebGen>) -> Vec<TermDto<DocDto<u8, WebLayerDto>>> {
    c.iter()
        .map(|(k, d)| TermDto {
            coefficient: scalar_to_json(k),
            value: k.to_string(),
            diagram: web_to_dto(d),
        })
        .collect()
}

/// Boundary sets as lists of elements: `{"bottom": [[1, 2]], "top": [[1, 2]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryDto {
    pub bottom: Vec<Vec<u8>>,
    pub top: Vec<Vec<u8>>,
}

pub fn parse_boundary(text: &str, n: u8) -> Result<BoundaryData, ParseError> {
    let dto: BoundaryDto = serde_json::from_str(text)?;
    let conv = |sets: &[Vec<u8>], side: fn(usize) -> Location| -> Result<Vec<Subset>, ParseError> {
        sets.iter()
            .enumerate()
            .map(|(p, s)| {
                if s.iter().any(|&i| i == 0 || i > n) {
                    return Err(ParseError::at(side(p), format!("elements in 1..={n}")));
                }
                let set = subset_from(s);
                if set.count_ones() as usize != s.len() {
                    return Err(ParseError::at(side(p), "distinct elements"));
                }
                Ok(set)
            })
            .collect()
    };
    Ok(BoundaryData {
        bottom: conv(&dto.bottom, Location::Bottom)?,
        top: conv(&dto.top, Location::Top)?,
    })
}

pub fn boundary_to_dto(data: &BoundaryData) -> BoundaryDto {
    let conv = |sets: &[Subset]| sets.iter().map(|&s| spider_core::statesum::elements(s).collect()).collect();
    BoundaryDto {
        bottom: conv(&data.bottom),
        top: conv(&data.top),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_diagram() {
        let d = parse(r#"{"n": 3, "kind": "cobweb", "bottom": [], "layers": []}"#).unwrap();
        assert_eq!(d, Diagram::Cobweb(Cobweb::empty(3)));
    }

    #[test]
    fn round_trip_catalog() {
        for inst in spider_core::web::relation_instances(3) {
            for (_, w) in inst.lhs.iter().chain(inst.rhs.iter()) {
                let text = serialize_web(w);
                let back = parse_web(&text).unwrap();
                assert_eq!(&back, w);
                assert_eq!(serialize_web(&back), text);
            }
        }
    }

    #[test]
    fn errors_carry_locations() {
        let e = parse("{\"n\": 3,\n \"kind\": \"web\", \"bottom\": [}").unwrap_err();
        assert!(matches!(e.location, Location::Text { line: 2, .. }), "{e}");
        let e = parse(
            r#"{"n": 3, "kind": "web", "bottom": [{"label": 1, "dir": "up"}],
                "layers": [{"gen": "id", "pos": 4, "k": 1, "dir": "up"}]}"#,
        )
        .unwrap_err();
        assert_eq!(e.location, Location::Layer(0));
        let e = parse(
            r#"{"n": 3, "kind": "web", "bottom": [],
                "layers": [{"gen": "twist", "pos": 0}]}"#,
        )
        .unwrap_err();
        assert!(e.expected.contains("unknown variant"), "{e}");
        let e = parse(r#"{"n": 3, "kind": "cobweb", "bottom": [{"label": [1, 4], "dir": "up"}], "layers": []}"#)
            .unwrap_err();
        assert_eq!(e.location, Location::Bottom(0));
    }

    #[test]
    fn scalars_round_trip() {
        let s = LaurentScalar::quantum_integer(3) - LaurentScalar::monomial(1, 1);
        assert_eq!(scalar_from_json(&scalar_to_json(&s)), Some(s));
    }

    #[test]
    fn boundary_files() {
        let b = parse_boundary(r#"{"bottom": [[2, 1]], "top": [[1, 2]]}"#, 3).unwrap();
        assert_eq!(b.bottom, vec![0b11]);
        assert_eq!(parse_boundary(&serde_json::to_string(&boundary_to_dto(&b)).unwrap(), 3).unwrap(), b);
        assert!(parse_boundary(r#"{"bottom": [[4]], "top": []}"#, 3).is_err());
    }
}
