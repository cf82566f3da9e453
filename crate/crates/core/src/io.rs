//! JSON documents (schema `asl-1`) and DOT export.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::constructions::ChainCertificate;
use crate::error::{Error, Result};
use crate::model::{Arc, ArcId, BoundaryCycle, Dir, Label, Piece, Side, SplitPresentation, SurfaceSpec};
use crate::predicates::classify_piece;

pub const SCHEMA: &str = "asl-1";

#[derive(Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
enum DirDoc {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct SideDoc {
    arc: u32,
    dir: DirDoc,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct ArcDoc {
    id: u32,
    u: Label,
    v: Label,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct PieceDoc {
    h: u32,
    n: u32,
    interior_marked: Vec<Label>,
    cycles: Vec<Vec<SideDoc>>,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct Document {
    schema: String,
    g: u32,
    s: u32,
    m: u32,
    arcs: Vec<ArcDoc>,
    pieces: Vec<PieceDoc>,
}

#[derive(Serialize, Deserialize, Debug)]
struct ChainDocument {
    schema: String,
    dimension: usize,
    ranks: Vec<i64>,
    systems: Vec<Document>,
}

impl From<&SplitPresentation> for Document {
    fn from(sp: &SplitPresentation) -> Self {
        let side = |s: &Side| SideDoc {
            arc: s.arc.0,
            dir: match s.dir {
                Dir::Forward => DirDoc::Plus,
                Dir::Backward => DirDoc::Minus,
            },
        };
        Document {
            schema: SCHEMA.to_string(),
            g: sp.spec.g,
            s: sp.spec.s,
            m: sp.spec.m,
            arcs: sp.arcs.iter().map(|a| ArcDoc { id: a.id.0, u: a.u, v: a.v }).collect(),
            pieces: sp
                .pieces
                .iter()
                .map(|p| PieceDoc {
                    h: p.genus,
                    n: p.punctures,
                    interior_marked: p.interior_marked.iter().copied().collect(),
                    cycles: p.cycles.iter().map(|c| c.sides().iter().map(side).collect()).collect(),
                })
                .collect(),
        }
    }
}

impl Document {
    fn into_presentation(self) -> Result<SplitPresentation> {
        if self.schema != SCHEMA {
            return Err(schema_mismatch(&self.schema));
        }
        let spec = SurfaceSpec::new(self.g, self.s, self.m)?;
        let arcs = self.arcs.into_iter().map(|a| Arc { id: ArcId(a.id), u: a.u, v: a.v }).collect();
        let pieces = self
            .pieces
            .into_iter()
            .map(|p| Piece {
                genus: p.h,
                punctures: p.n,
                interior_marked: p.interior_marked.into_iter().collect::<BTreeSet<_>>(),
                cycles: p
                    .cycles
                    .into_iter()
                    .map(|c| {
                        BoundaryCycle::new(
                            c.into_iter()
                                .map(|s| match s.dir {
                                    DirDoc::Plus => Side::fwd(s.arc),
                                    DirDoc::Minus => Side::bwd(s.arc),
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            })
            .collect();
        Ok(SplitPresentation::new(spec, arcs, pieces))
    }
}

fn schema_mismatch(found: &str) -> Error {
    Error::SchemaVersionMismatch { found: found.to_string(), expected: SCHEMA.to_string() }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), column: e.column(), message: e.to_string() }
}

/// Parses the text and checks the schema tag before the structure, so a
/// document from another version reports the version rather than a field.
fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(parse_error)?;
    match value.get("schema").and_then(|s| s.as_str()) {
        Some(SCHEMA) => {}
        Some(other) => return Err(schema_mismatch(other)),
        None => {
            return Err(Error::Parse { line: 1, column: 1, message: "missing field `schema`".into() })
        }
    }
    serde_json::from_str(text).map_err(parse_error)
}

pub fn read_presentation(text: &str) -> Result<SplitPresentation> {
    parse::<Document>(text)?.into_presentation()
}

/// Pretty JSON with a trailing newline. Cycles come out in their least
/// rotation.
pub fn write_presentation(sp: &SplitPresentation) -> String {
    let mut out = serde_json::to_string_pretty(&Document::from(sp)).expect("document serializes");
    out.push('\n');
    out
}

pub fn write_chain(cert: &ChainCertificate) -> String {
    let doc = ChainDocument {
        schema: SCHEMA.to_string(),
        dimension: cert.dimension(),
        ranks: cert.ranks(),
        systems: cert.systems.iter().map(Document::from).collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("chain serializes");
    out.push('\n');
    out
}

pub fn read_chain(text: &str) -> Result<ChainCertificate> {
    let doc: ChainDocument = parse(text)?;
    let systems = doc
        .systems
        .into_iter()
        .map(Document::into_presentation)
        .collect::<Result<Vec<_>>>()?;
    let spec = systems.first().map(|sp| sp.spec).ok_or_else(|| Error::Malformed("empty chain".into()))?;
    Ok(ChainCertificate { spec, systems })
}

/// Dual graph: a node per piece, an edge per arc between the pieces holding
/// its two sides.
pub fn export_dot(sp: &SplitPresentation) -> String {
    let mut out = String::from("graph arcs {\n");
    for (i, piece) in sp.pieces.iter().enumerate() {
        let _ = writeln!(out, "  p{i} [label=\"{}\"];", classify_piece(piece));
    }
    for arc in &sp.arcs {
        let hosts: Vec<usize> = sp.locate(arc.id).iter().map(|l| l.piece).collect();
        let (a, b) = match hosts.as_slice() {
            [a, b] => (*a, *b),
            [a] => (*a, *a),
            _ => continue,
        };
        let _ = writeln!(out, "  p{a} -- p{b} [label=\"{}: {}-{}\"];", arc.id, arc.u, arc.v);
    }
    out.push_str("}\n");
    out
}
