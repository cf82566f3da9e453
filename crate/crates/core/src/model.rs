//! Value types for arc systems stored as splittings.
//!
//! Orientation convention: every boundary cycle is read with its piece on the
//! left. The two sides of an arc therefore run in opposite directions, one
//! [`Dir::Forward`] (from `u` to `v`) and one [`Dir::Backward`].

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A decorated point `p_i`, `1 <= i <= m`.
pub type Label = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcId(pub u32);

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

/// Genus `g`, total distinguished points `s`, decorated points `m`.
///
/// Points `1..=m` are the decorated set, the remaining `s - m` are punctures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SurfaceSpec {
    pub g: u32,
    pub s: u32,
    pub m: u32,
}

impl SurfaceSpec {
    pub fn new(g: u32, s: u32, m: u32) -> Result<Self> {
        let spec = SurfaceSpec { g, s, m };
        if spec.is_valid() {
            Ok(spec)
        } else {
            Err(Error::InvalidSpec { g, s, m })
        }
    }

    pub fn is_valid(&self) -> bool {
        2 * self.g + self.s > 2 && self.m >= 1 && self.m <= self.s
    }

    pub fn punctures(&self) -> u32 {
        self.s - self.m
    }

    /// Euler characteristic of the closed surface.
    pub fn euler(&self) -> i64 {
        2 - 2 * self.g as i64
    }

    /// Number of arcs in any maximal system.
    pub fn maximal_arc_count(&self) -> u32 {
        6 * self.g + 2 * self.s + self.m - 6
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> {
        1..=self.m
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g={}, s={}, m={})", self.g, self.s, self.m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    Forward,
    Backward,
}

impl Dir {
    pub fn reversed(self) -> Dir {
        match self {
            Dir::Forward => Dir::Backward,
            Dir::Backward => Dir::Forward,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Side {
    pub arc: ArcId,
    pub dir: Dir,
}

impl Side {
    pub fn new(arc: ArcId, dir: Dir) -> Self {
        Side { arc, dir }
    }

    pub fn fwd(arc: u32) -> Self {
        Side::new(ArcId(arc), Dir::Forward)
    }

    pub fn bwd(arc: u32) -> Self {
        Side::new(ArcId(arc), Dir::Backward)
    }

    pub fn twin(self) -> Side {
        Side::new(self.arc, self.dir.reversed())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub id: ArcId,
    pub u: Label,
    pub v: Label,
}

impl Arc {
    pub fn new(id: u32, u: Label, v: Label) -> Self {
        Arc { id: ArcId(id), u, v }
    }

    pub fn start(&self, dir: Dir) -> Label {
        match dir {
            Dir::Forward => self.u,
            Dir::Backward => self.v,
        }
    }

    pub fn end(&self, dir: Dir) -> Label {
        match dir {
            Dir::Forward => self.v,
            Dir::Backward => self.u,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// A boundary component of a piece, as a cyclic word of sides.
///
/// Stored in its lexicographically least rotation so that derived equality is
/// equality of cyclic words.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryCycle {
    sides: Vec<Side>,
}

impl BoundaryCycle {
    pub fn new(sides: Vec<Side>) -> Self {
        BoundaryCycle { sides: least_rotation(sides) }
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    /// The same word starting at position `start`.
    pub fn rotated(&self, start: usize) -> Vec<Side> {
        let n = self.sides.len();
        (0..n).map(|i| self.sides[(start + i) % n]).collect()
    }
}

fn least_rotation<T: Ord + Copy>(items: Vec<T>) -> Vec<T> {
    let n = items.len();
    if n <= 1 {
        return items;
    }
    let best = (0..n)
        .min_by(|&a, &b| {
            (0..n)
                .map(|i| items[(a + i) % n])
                .cmp((0..n).map(|i| items[(b + i) % n]))
        })
        .unwrap_or(0);
    (0..n).map(|i| items[(best + i) % n]).collect()
}

/// A complementary region of the splitting.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub genus: u32,
    pub punctures: u32,
    pub interior_marked: BTreeSet<Label>,
    pub cycles: Vec<BoundaryCycle>,
}

impl Piece {
    pub fn disc(sides: Vec<Side>) -> Self {
        Piece {
            genus: 0,
            punctures: 0,
            interior_marked: BTreeSet::new(),
            cycles: vec![BoundaryCycle::new(sides)],
        }
    }

    pub fn with_punctures(mut self, n: u32) -> Self {
        self.punctures = n;
        self
    }

    pub fn with_interior(mut self, labels: impl IntoIterator<Item = Label>) -> Self {
        self.interior_marked.extend(labels);
        self
    }

    /// Number of boundary components `b`.
    pub fn boundary_count(&self) -> usize {
        self.cycles.len()
    }

    /// Total number of sides `ℓ`, equal to the number of boundary corners.
    pub fn side_count(&self) -> usize {
        self.cycles.iter().map(BoundaryCycle::len).sum()
    }

    pub fn sides(&self) -> impl Iterator<Item = Side> + '_ {
        self.cycles.iter().flat_map(|c| c.sides().iter().copied())
    }
}

/// An arc system given by its splitting: the arcs and the complementary
/// pieces glued along arc sides.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SplitPresentation {
    pub spec: SurfaceSpec,
    pub arcs: Vec<Arc>,
    pub pieces: Vec<Piece>,
}

/// Where a side sits: piece index, cycle index within the piece, position in
/// the stored cycle word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SideLocation {
    pub piece: usize,
    pub cycle: usize,
    pub pos: usize,
    pub dir: Dir,
}

impl SplitPresentation {
    pub fn new(spec: SurfaceSpec, arcs: Vec<Arc>, pieces: Vec<Piece>) -> Self {
        SplitPresentation { spec, arcs, pieces }
    }

    pub fn arc(&self, id: ArcId) -> Option<&Arc> {
        self.arcs.iter().find(|a| a.id == id)
    }

    pub fn arc_ids(&self) -> Vec<ArcId> {
        self.arcs.iter().map(|a| a.id).collect()
    }

    pub fn next_arc_id(&self) -> u32 {
        self.arcs.iter().map(|a| a.id.0 + 1).max().unwrap_or(0)
    }

    /// All locations of the sides of `id`, in storage order.
    pub fn locate(&self, id: ArcId) -> Vec<SideLocation> {
        let mut out = Vec::new();
        for (pi, piece) in self.pieces.iter().enumerate() {
            for (ci, cycle) in piece.cycles.iter().enumerate() {
                for (pos, side) in cycle.sides().iter().enumerate() {
                    if side.arc == id {
                        out.push(SideLocation { piece: pi, cycle: ci, pos, dir: side.dir });
                    }
                }
            }
        }
        out
    }

    /// Labels that occur as an endpoint of some arc.
    pub fn incident_labels(&self) -> BTreeSet<Label> {
        self.arcs.iter().flat_map(|a| [a.u, a.v]).collect()
    }

    pub fn side_start(&self, side: Side) -> Option<Label> {
        self.arc(side.arc).map(|a| a.start(side.dir))
    }

    pub fn side_end(&self, side: Side) -> Option<Label> {
        self.arc(side.arc).map(|a| a.end(side.dir))
    }
}
