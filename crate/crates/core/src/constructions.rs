//! Explicit arc systems: triangle subdivision, a maximal system for every
//! surface, and a long chain of filling systems in the once-punctured case.

use crate::error::{Error, Result};
use crate::model::{Arc, Label, Piece, Side, SplitPresentation, SurfaceSpec};
use crate::predicates::{fills_up, validate};
use crate::surgery::restrict;

/// Allocates fresh arc ids.
struct ArcBuilder {
    arcs: Vec<Arc>,
    next: u32,
}

impl ArcBuilder {
    fn new(next: u32) -> Self {
        ArcBuilder { arcs: Vec::new(), next }
    }

    /// New arc from `u` to `v`; returns its forward and backward sides.
    fn arc(&mut self, u: Label, v: Label) -> (Side, Side) {
        let id = self.next;
        self.next += 1;
        self.arcs.push(Arc::new(id, u, v));
        (Side::fwd(id), Side::bwd(id))
    }
}

/// Splits a triangle holding interior points and punctures into triangles
/// and once-punctured monogons.
///
/// `sides` runs `a -> b -> c -> a` with `corners = [a, b, c]`. Each interior
/// point costs three arcs (a star to the corners), each puncture two (a loop
/// at `a` and a diagonal).
fn fill_triangle(
    builder: &mut ArcBuilder,
    sides: [Side; 3],
    corners: [Label; 3],
    interior: &[Label],
    punctures: u32,
) -> Vec<Piece> {
    let [s0, s1, s2] = sides;
    let [a, b, c] = corners;
    if let Some((&q, rest)) = interior.split_first() {
        let (xa, xa_back) = builder.arc(a, q);
        let (xb, xb_back) = builder.arc(b, q);
        let (xc, xc_back) = builder.arc(c, q);
        let mut pieces = fill_triangle(builder, [s0, xb, xa_back], [a, b, q], rest, punctures);
        pieces.push(Piece::disc(vec![s1, xc, xb_back]));
        pieces.push(Piece::disc(vec![s2, xa, xc_back]));
        pieces
    } else if punctures > 0 {
        let (l, l_back) = builder.arc(a, a);
        let (d, d_back) = builder.arc(a, b);
        let mut pieces = fill_triangle(builder, [s1, s2, d], [b, c, a], &[], punctures - 1);
        pieces.push(Piece::disc(vec![l]).with_punctures(1));
        pieces.push(Piece::disc(vec![l_back, s0, d_back]));
        pieces
    } else {
        vec![Piece::disc(vec![s0, s1, s2])]
    }
}

/// Adds `3m' + 2n'` arcs inside piece `index`, a triangle holding `m'`
/// decorated points and `n'` punctures, leaving only triangles and
/// once-punctured monogons there.
pub fn subdivide_triangle(sp: &SplitPresentation, index: usize) -> Result<SplitPresentation> {
    let bad = |reason: &str| Error::NotASubdividableTriangle { index, reason: reason.into() };
    let piece = sp.pieces.get(index).ok_or_else(|| bad("no such piece"))?;
    if piece.genus != 0 || piece.boundary_count() != 1 || piece.side_count() != 3 {
        return Err(bad("expected a disc with three corners"));
    }
    let sides = piece.cycles[0].sides();
    let corner = |side: Side| {
        sp.side_start(side)
            .ok_or_else(|| Error::Malformed(format!("unknown arc {}", side.arc)))
    };
    let corners = [corner(sides[0])?, corner(sides[1])?, corner(sides[2])?];
    let interior: Vec<Label> = piece.interior_marked.iter().copied().collect();

    let mut builder = ArcBuilder::new(sp.next_arc_id());
    let replacement = fill_triangle(
        &mut builder,
        [sides[0], sides[1], sides[2]],
        corners,
        &interior,
        piece.punctures,
    );
    let mut out = sp.clone();
    out.arcs.extend(builder.arcs);
    out.pieces.splice(index..=index, replacement);
    Ok(out)
}

/// A maximal arc system with `6g - 6 + 2s + m` arcs.
///
/// Arcs are numbered in the order they are added, so for `g >= 1` the first
/// `2g` arcs are the sides of the `4g`-gon and the next `4g - 3` its fan
/// diagonals.
pub fn explicit_maximal(spec: SurfaceSpec) -> Result<SplitPresentation> {
    let spec = SurfaceSpec::new(spec.g, spec.s, spec.m)?;
    let n = spec.punctures();
    let mut b = ArcBuilder::new(0);
    let mut pieces = Vec::new();

    // the piece to subdivide: its sides, corners, and contents
    let (tri, corners, interior, punctures): ([Side; 3], [Label; 3], Vec<Label>, u32);

    if spec.g >= 1 {
        let mut polygon = Vec::new();
        for _ in 0..spec.g {
            let (a, a_back) = b.arc(1, 1);
            let (c, c_back) = b.arc(1, 1);
            polygon.extend([a, c, a_back, c_back]);
        }
        let k = polygon.len();
        // diagonals from vertex 0 to vertices 2..=k-2
        let diagonals: Vec<(Side, Side)> = (2..k - 1).map(|_| b.arc(1, 1)).collect();
        tri = [polygon[0], polygon[1], diagonals[0].1];
        for (i, &(d, _)) in diagonals.iter().enumerate() {
            let vertex = i + 2;
            let closing = match diagonals.get(i + 1) {
                Some(&(_, back)) => back,
                None => polygon[k - 1],
            };
            pieces.push(Piece::disc(vec![d, polygon[vertex], closing]));
        }
        corners = [1, 1, 1];
        interior = (2..=spec.m).collect();
        punctures = n;
    } else if spec.m == 1 {
        if n == 2 {
            let (l, l_back) = b.arc(1, 1);
            let sp = SplitPresentation::new(
                spec,
                b.arcs,
                vec![Piece::disc(vec![l]).with_punctures(1), Piece::disc(vec![l_back]).with_punctures(1)],
            );
            return Ok(sp);
        }
        let loops: Vec<(Side, Side)> = (0..3).map(|_| b.arc(1, 1)).collect();
        for &(l, _) in &loops {
            pieces.push(Piece::disc(vec![l]).with_punctures(1));
        }
        tri = [loops[0].1, loops[1].1, loops[2].1];
        corners = [1, 1, 1];
        interior = Vec::new();
        punctures = n - 3;
    } else if spec.m == 2 {
        let (x, x_back) = b.arc(1, 2);
        let (l, l_back) = b.arc(1, 1);
        pieces.push(Piece::disc(vec![l]).with_punctures(1));
        tri = [x, x_back, l_back];
        corners = [1, 2, 1];
        interior = Vec::new();
        punctures = n - 1;
    } else {
        let (e1, e1_back) = b.arc(1, 2);
        let (e2, e2_back) = b.arc(2, 3);
        let (e3, e3_back) = b.arc(3, 1);
        pieces.push(Piece::disc(vec![e1, e2, e3]));
        tri = [e3_back, e2_back, e1_back];
        corners = [1, 3, 2];
        interior = (4..=spec.m).collect();
        punctures = n;
    }

    let mut filled = fill_triangle(&mut b, tri, corners, &interior, punctures);
    filled.extend(pieces);
    Ok(SplitPresentation::new(spec, b.arcs, filled))
}

/// A strictly increasing chain of filling systems, each one arc larger than
/// the previous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCertificate {
    pub spec: SurfaceSpec,
    pub systems: Vec<SplitPresentation>,
}

impl ChainCertificate {
    /// Length of the chain as a simplex: number of systems minus one.
    pub fn dimension(&self) -> usize {
        self.systems.len().saturating_sub(1)
    }

    pub fn ranks(&self) -> Vec<i64> {
        self.systems.iter().map(crate::predicates::rank).collect()
    }

    /// Checks validity, filling, consecutive ranks, and that every system
    /// is a single deletion of the next.
    pub fn verify(&self) -> std::result::Result<(), String> {
        use crate::canonical::{canonical_code, Mode};
        for (i, sp) in self.systems.iter().enumerate() {
            let report = validate(sp);
            if !report.valid {
                return Err(format!("system {i} is invalid: {report}"));
            }
            if !fills_up(sp) {
                return Err(format!("system {i} does not fill up"));
            }
        }
        for (i, pair) in self.systems.windows(2).enumerate() {
            let (small, big) = (&pair[0], &pair[1]);
            if big.arcs.len() != small.arcs.len() + 1 {
                return Err(format!("systems {i} and {} are not one arc apart", i + 1));
            }
            let target = canonical_code(small, Mode::PMod).map_err(|e| e.to_string())?;
            let found = crate::surgery::all_deletions(big)
                .map_err(|e| e.to_string())?
                .iter()
                .any(|(_, child)| canonical_code(child, Mode::PMod).as_ref() == Ok(&target));
            if !found {
                return Err(format!("system {i} is not a face of system {}", i + 1));
            }
        }
        Ok(())
    }
}

/// The chain `A_0 ⊂ ... ⊂ A_{4g-1}` on the genus-`g` surface with one
/// decorated point and one puncture: `A_0` is the `2g` sides of the
/// punctured `4g`-gon, then fan diagonals are added one at a time, then the
/// two arcs that cut off the puncture.
pub fn example_chain(g: u32) -> Result<ChainCertificate> {
    if g == 0 {
        return Err(Error::InvalidSpec { g, s: 2, m: 1 });
    }
    let spec = SurfaceSpec::new(g, 2, 1)?;
    let top = explicit_maximal(spec)?;
    let ids = top.arc_ids();
    let first = 2 * g as usize;
    let systems = (first..=ids.len())
        .map(|k| restrict(&top, &ids[..k].iter().copied().collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainCertificate { spec, systems })
}
