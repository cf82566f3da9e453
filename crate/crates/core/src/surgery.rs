//! Arc deletion.
//!
//! Removing an arc glues its two sides back together. Depending on where the
//! sides sit this merges two pieces (case A), joins two boundary cycles of
//! one piece and adds a handle (case B), or splits one cycle in two (case C).
//! A run that becomes empty marks a decorated point whose last arc was
//! removed; that point moves into the interior of the affected piece.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{ArcId, BoundaryCycle, Piece, Side, SplitPresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeletionCase {
    /// Sides on two different pieces.
    DistinctPieces,
    /// Sides on two different cycles of one piece.
    DistinctCycles,
    /// Both sides on the same cycle.
    SameCycle,
}

pub fn deletion_case(sp: &SplitPresentation, id: ArcId) -> Result<DeletionCase> {
    let locs = sp.locate(id);
    if sp.arc(id).is_none() {
        return Err(Error::UnknownArc(id));
    }
    let [a, b] = locs[..] else {
        return Err(Error::Malformed(format!("arc {id} has {} sides", locs.len())));
    };
    Ok(if a.piece != b.piece {
        DeletionCase::DistinctPieces
    } else if a.cycle != b.cycle {
        DeletionCase::DistinctCycles
    } else {
        DeletionCase::SameCycle
    })
}

/// The presentation of the subsystem without `id`.
///
/// Pure surgery: the result is not validated here.
pub fn delete_arc(sp: &SplitPresentation, id: ArcId) -> Result<SplitPresentation> {
    if sp.arc(id).is_none() {
        return Err(Error::UnknownArc(id));
    }
    if sp.arcs.len() == 1 {
        return Err(Error::LastArc);
    }
    let case = deletion_case(sp, id)?;
    let locs = sp.locate(id);
    let (a, b) = (locs[0], locs[1]);

    let mut pieces = sp.pieces.clone();
    // sides following each occurrence of the deleted arc, up to the other one
    let merged: Piece = match case {
        DeletionCase::DistinctPieces => {
            let p1 = &sp.pieces[a.piece];
            let p2 = &sp.pieces[b.piece];
            let rest1 = tail_after(&p1.cycles[a.cycle], a.pos);
            let rest2 = tail_after(&p2.cycles[b.cycle], b.pos);
            let mut cycles: Vec<BoundaryCycle> = other_cycles(p1, a.cycle);
            cycles.extend(other_cycles(p2, b.cycle));
            push_nonempty(&mut cycles, rest1.into_iter().chain(rest2).collect());
            Piece {
                genus: p1.genus + p2.genus,
                punctures: p1.punctures + p2.punctures,
                interior_marked: p1.interior_marked.union(&p2.interior_marked).copied().collect(),
                cycles,
            }
        }
        DeletionCase::DistinctCycles => {
            let p = &sp.pieces[a.piece];
            let rest1 = tail_after(&p.cycles[a.cycle], a.pos);
            let rest2 = tail_after(&p.cycles[b.cycle], b.pos);
            let mut cycles: Vec<BoundaryCycle> = p
                .cycles
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != a.cycle && *i != b.cycle)
                .map(|(_, c)| c.clone())
                .collect();
            push_nonempty(&mut cycles, rest1.into_iter().chain(rest2).collect());
            Piece { genus: p.genus + 1, cycles, ..p.clone() }
        }
        DeletionCase::SameCycle => {
            let p = &sp.pieces[a.piece];
            let word = p.cycles[a.cycle].rotated(a.pos);
            let j = (b.pos + word.len() - a.pos) % word.len();
            let inner = word[1..j].to_vec();
            let outer = word[j + 1..].to_vec();
            let mut cycles = other_cycles(p, a.cycle);
            push_nonempty(&mut cycles, inner);
            push_nonempty(&mut cycles, outer);
            Piece { cycles, ..p.clone() }
        }
    };

    let target = a.piece.min(b.piece);
    pieces[target] = merged;
    if a.piece != b.piece {
        pieces.remove(a.piece.max(b.piece));
    }

    let arcs: Vec<_> = sp.arcs.iter().copied().filter(|arc| arc.id != id).collect();
    let before = sp.incident_labels();
    let mut out = SplitPresentation::new(sp.spec, arcs, pieces);
    let after = out.incident_labels();
    out.pieces[target].interior_marked.extend(before.difference(&after));
    Ok(out)
}

fn tail_after(cycle: &BoundaryCycle, pos: usize) -> Vec<Side> {
    cycle.rotated(pos)[1..].to_vec()
}

fn other_cycles(piece: &Piece, skip: usize) -> Vec<BoundaryCycle> {
    piece
        .cycles
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != skip)
        .map(|(_, c)| c.clone())
        .collect()
}

fn push_nonempty(cycles: &mut Vec<BoundaryCycle>, sides: Vec<Side>) {
    if !sides.is_empty() {
        cycles.push(BoundaryCycle::new(sides));
    }
}

/// One entry per arc, each the corresponding single deletion.
pub fn all_deletions(sp: &SplitPresentation) -> Result<Vec<(ArcId, SplitPresentation)>> {
    if sp.arcs.len() == 1 {
        return Err(Error::LastArc);
    }
    sp.arcs
        .iter()
        .map(|arc| delete_arc(sp, arc.id).map(|child| (arc.id, child)))
        .collect()
}

/// The subsystem spanned by `keep`, obtained by deleting every other arc.
pub fn restrict(sp: &SplitPresentation, keep: &BTreeSet<ArcId>) -> Result<SplitPresentation> {
    if keep.is_empty() {
        return Err(Error::LastArc);
    }
    if let Some(id) = keep.iter().find(|id| sp.arc(**id).is_none()) {
        return Err(Error::UnknownArc(*id));
    }
    let mut out = sp.clone();
    for id in sp.arc_ids() {
        if !keep.contains(&id) {
            out = delete_arc(&out, id)?;
        }
    }
    Ok(out)
}

/// A relabeling of a presentation: new arc ids, arc reversals, piece order
/// and cycle order inside each piece.
#[derive(Clone, Debug)]
pub struct Relabeling {
    /// `arc_map[i]` is the new id for `sp.arcs[i]`.
    pub arc_map: Vec<u32>,
    /// Reverse the orientation of `sp.arcs[i]`.
    pub flip: Vec<bool>,
    /// `piece_order[k]` is the old index of the new `k`-th piece.
    pub piece_order: Vec<usize>,
    /// Per old piece, a permutation of its cycles.
    pub cycle_order: Vec<Vec<usize>>,
    /// Order of the arc list in the output: `arc_order[k]` is an old index.
    pub arc_order: Vec<usize>,
}

impl Relabeling {
    pub fn identity(sp: &SplitPresentation) -> Self {
        Relabeling {
            arc_map: sp.arcs.iter().map(|a| a.id.0).collect(),
            flip: vec![false; sp.arcs.len()],
            piece_order: (0..sp.pieces.len()).collect(),
            cycle_order: sp.pieces.iter().map(|p| (0..p.cycles.len()).collect()).collect(),
            arc_order: (0..sp.arcs.len()).collect(),
        }
    }
}

/// Applies a relabeling. The result describes the same arc system.
pub fn relabel(sp: &SplitPresentation, r: &Relabeling) -> SplitPresentation {
    let index_of = |id: ArcId| sp.arcs.iter().position(|a| a.id == id).expect("known arc");
    let map_side = |side: Side| {
        let i = index_of(side.arc);
        let dir = if r.flip[i] { side.dir.reversed() } else { side.dir };
        Side::new(ArcId(r.arc_map[i]), dir)
    };
    let arcs = r
        .arc_order
        .iter()
        .map(|&i| {
            let a = sp.arcs[i];
            let (u, v) = if r.flip[i] { (a.v, a.u) } else { (a.u, a.v) };
            crate::model::Arc::new(r.arc_map[i], u, v)
        })
        .collect();
    let pieces = r
        .piece_order
        .iter()
        .map(|&pi| {
            let old = &sp.pieces[pi];
            let cycles = r.cycle_order[pi]
                .iter()
                .map(|&ci| BoundaryCycle::new(old.cycles[ci].sides().iter().map(|s| map_side(*s)).collect()))
                .collect();
            Piece { cycles, ..old.clone() }
        })
        .collect();
    SplitPresentation::new(sp.spec, arcs, pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Arc, SurfaceSpec};
    use crate::predicates::{derive_invariants, fills_up, rank, validate, PieceClass, classify_piece};

    fn torus_maximal() -> SplitPresentation {
        SplitPresentation::new(
            SurfaceSpec::new(1, 1, 1).unwrap(),
            vec![Arc::new(0, 1, 1), Arc::new(1, 1, 1), Arc::new(2, 1, 1)],
            vec![
                Piece::disc(vec![Side::fwd(0), Side::fwd(1), Side::bwd(2)]),
                Piece::disc(vec![Side::fwd(2), Side::bwd(0), Side::bwd(1)]),
            ],
        )
    }

    fn torus_square() -> SplitPresentation {
        SplitPresentation::new(
            SurfaceSpec::new(1, 1, 1).unwrap(),
            vec![Arc::new(0, 1, 1), Arc::new(1, 1, 1)],
            vec![Piece::disc(vec![Side::fwd(0), Side::fwd(1), Side::bwd(0), Side::bwd(1)])],
        )
    }

    fn theta() -> SplitPresentation {
        SplitPresentation::new(
            SurfaceSpec::new(0, 3, 3).unwrap(),
            vec![Arc::new(0, 1, 2), Arc::new(1, 2, 3), Arc::new(2, 3, 1)],
            vec![
                Piece::disc(vec![Side::fwd(0), Side::fwd(1), Side::fwd(2)]),
                Piece::disc(vec![Side::bwd(2), Side::bwd(1), Side::bwd(0)]),
            ],
        )
    }

    #[test]
    fn torus_triangle_merge() {
        let sp = torus_maximal();
        for id in sp.arc_ids() {
            assert_eq!(deletion_case(&sp, id).unwrap(), DeletionCase::DistinctPieces);
            let child = delete_arc(&sp, id).unwrap();
            assert!(validate(&child).valid, "{}", validate(&child));
            assert_eq!(child.pieces.len(), 1);
            let p = &child.pieces[0];
            assert_eq!((p.genus, p.boundary_count(), p.side_count()), (0, 1, 4));
            assert!(fills_up(&child));
        }
    }

    #[test]
    fn square_to_annulus() {
        let sp = torus_square();
        assert_eq!(deletion_case(&sp, ArcId(1)).unwrap(), DeletionCase::SameCycle);
        let child = delete_arc(&sp, ArcId(1)).unwrap();
        assert!(validate(&child).valid, "{}", validate(&child));
        let p = &child.pieces[0];
        assert_eq!((p.genus, p.boundary_count(), p.side_count()), (0, 2, 2));
        assert!(p.cycles.iter().all(|c| c.len() == 1));
        assert!(!fills_up(&child));
    }

    #[test]
    fn theta_merges_to_square() {
        let sp = theta();
        assert!(validate(&sp).valid);
        let child = delete_arc(&sp, ArcId(1)).unwrap();
        assert!(validate(&child).valid);
        assert_eq!(child.pieces.len(), 1);
        assert_eq!(child.pieces[0].side_count(), 4);
        assert_eq!(derive_invariants(&child).unwrap().genus, 0);
    }

    #[test]
    fn joining_two_cycles_adds_handle() {
        // (1,2,1): annulus between the two sides of loop a, with loop e
        // cutting off the puncture next to one boundary corner
        let spec = SurfaceSpec::new(1, 2, 1).unwrap();
        let annulus = Piece {
            genus: 0,
            punctures: 0,
            interior_marked: BTreeSet::new(),
            cycles: vec![
                BoundaryCycle::new(vec![Side::fwd(0), Side::bwd(1)]),
                BoundaryCycle::new(vec![Side::bwd(0)]),
            ],
        };
        let sp = SplitPresentation::new(
            spec,
            vec![Arc::new(0, 1, 1), Arc::new(1, 1, 1)],
            vec![annulus, Piece::disc(vec![Side::fwd(1)]).with_punctures(1)],
        );
        assert!(validate(&sp).valid, "{}", validate(&sp));
        assert_eq!(deletion_case(&sp, ArcId(0)).unwrap(), DeletionCase::DistinctCycles);
        let child = delete_arc(&sp, ArcId(0)).unwrap();
        assert!(validate(&child).valid, "{}", validate(&child));
        let p = &child.pieces[0];
        assert_eq!((p.genus, p.boundary_count(), p.side_count()), (1, 1, 1));
    }

    #[test]
    fn spike_deletion_moves_label_inside() {
        // (0,3,2): loop y at p1 around the puncture, arc x from p1 to p2
        let spec = SurfaceSpec::new(0, 3, 2).unwrap();
        let sp = SplitPresentation::new(
            spec,
            vec![Arc::new(0, 1, 2), Arc::new(1, 1, 1)],
            vec![
                Piece::disc(vec![Side::fwd(1)]).with_punctures(1),
                Piece::disc(vec![Side::fwd(0), Side::bwd(0), Side::bwd(1)]),
            ],
        );
        assert!(validate(&sp).valid, "{}", validate(&sp));
        let child = delete_arc(&sp, ArcId(0)).unwrap();
        assert_eq!(child.pieces[1].interior_marked, BTreeSet::from([2]));
        assert_eq!(child.pieces[1].side_count(), 1);
        assert_eq!(derive_invariants(&child).unwrap().genus, 0);
        // a monogon around a lone decorated point fails condition (2)
        assert!(!validate(&child).valid);
        assert!(matches!(classify_piece(&child.pieces[1]), PieceClass::Other { .. }));

        let other = delete_arc(&sp, ArcId(1)).unwrap();
        assert!(validate(&other).valid);
        assert!(fills_up(&other));
    }

    #[test]
    fn errors() {
        let sp = torus_maximal();
        assert_eq!(delete_arc(&sp, ArcId(9)), Err(Error::UnknownArc(ArcId(9))));
        let one = restrict(&sp, &BTreeSet::from([ArcId(0)])).unwrap();
        assert_eq!(rank(&one), 0);
        assert_eq!(all_deletions(&one).unwrap_err(), Error::LastArc);
        assert_eq!(all_deletions(&sp).unwrap().len(), 3);
        assert_eq!(all_deletions(&torus_square()).unwrap().len(), 2);
    }

    #[test]
    fn relabel_identity() {
        let sp = theta();
        assert_eq!(relabel(&sp, &Relabeling::identity(&sp)), sp);
    }
}
