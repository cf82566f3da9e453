//! Relabeling-invariant codes for presentations.
//!
//! A code is the token stream of a breadth-first walk over boundary cycles,
//! started at a root side. Arcs and pieces are numbered in order of first
//! visit, and each arc's orientation is fixed by the side that first reaches
//! it. The walk is fully determined by the root, except when it stalls on a
//! piece whose remaining boundary cycles are not reachable through arcs; then
//! every continuation is tried. The code is the least stream over all roots
//! and continuations, so two presentations share a code exactly when some
//! relabeling of arcs (including reversal), pieces, cycle order and cycle
//! rotation carries one to the other.

use std::collections::VecDeque;
use std::fmt;

use crate::darts::Darts;
use crate::error::{Error, Result};
use crate::model::{Dir, Label, SplitPresentation};

/// Which symmetries count as equivalences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Decorated labels are fixed.
    #[default]
    PMod,
    /// Decorated labels may be permuted; only meaningful when `m = s`.
    Mod,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pmod" => Ok(Mode::PMod),
            "mod" => Ok(Mode::Mod),
            other => Err(format!("unknown mode {other:?} (expected pmod or mod)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::PMod => "pmod",
            Mode::Mod => "mod",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

pub fn canonical_code(sp: &SplitPresentation, mode: Mode) -> Result<CanonicalCode> {
    if mode == Mode::Mod && sp.spec.m != sp.spec.s {
        return Err(Error::ModModeUnavailable { m: sp.spec.m, s: sp.spec.s });
    }
    let darts = Darts::new(sp)
        .ok_or_else(|| Error::Malformed("every arc needs one forward and one backward side".into()))?;
    let ctx = Context::new(sp, &darts, mode)?;

    let mut header = vec![
        sp.spec.g,
        sp.spec.s,
        sp.spec.m,
        (mode == Mode::Mod) as u32,
        sp.arcs.len() as u32,
        sp.pieces.len() as u32,
    ];
    let best = (0..darts.len())
        .map(|root| {
            let mut walk = Walk::new(&ctx);
            walk.enqueue(root);
            walk.finish()
        })
        .min()
        .unwrap_or_default();
    header.extend(best);
    Ok(CanonicalCode(header.iter().flat_map(|t| t.to_be_bytes()).collect()))
}

struct Context<'a> {
    sp: &'a SplitPresentation,
    darts: &'a Darts,
    mode: Mode,
    arc_of: Vec<usize>,
    start: Vec<Label>,
    end: Vec<Label>,
}

impl<'a> Context<'a> {
    fn new(sp: &'a SplitPresentation, darts: &'a Darts, mode: Mode) -> Result<Self> {
        let mut arc_of = Vec::with_capacity(darts.len());
        let mut start = Vec::with_capacity(darts.len());
        let mut end = Vec::with_capacity(darts.len());
        for side in &darts.sides {
            let idx = sp
                .arcs
                .iter()
                .position(|a| a.id == side.arc)
                .ok_or(Error::UnknownArc(side.arc))?;
            arc_of.push(idx);
            start.push(sp.arcs[idx].start(side.dir));
            end.push(sp.arcs[idx].end(side.dir));
        }
        Ok(Context { sp, darts, mode, arc_of, start, end })
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CycleState {
    Fresh,
    Queued,
    Done,
}

#[derive(Clone)]
struct Walk<'c, 'a> {
    ctx: &'c Context<'a>,
    arc_num: Vec<Option<(u32, Dir)>>,
    piece_num: Vec<Option<u32>>,
    cycle_state: Vec<CycleState>,
    label_num: Vec<Option<u32>>,
    queue: VecDeque<usize>,
    next_arc: u32,
    next_piece: u32,
    next_label: u32,
    code: Vec<u32>,
}

impl<'c, 'a> Walk<'c, 'a> {
    fn new(ctx: &'c Context<'a>) -> Self {
        Walk {
            ctx,
            arc_num: vec![None; ctx.sp.arcs.len()],
            piece_num: vec![None; ctx.sp.pieces.len()],
            cycle_state: vec![CycleState::Fresh; ctx.darts.cycles.len()],
            label_num: vec![None; ctx.sp.spec.m as usize + 1],
            queue: VecDeque::new(),
            next_arc: 0,
            next_piece: 0,
            next_label: 1,
            code: Vec::with_capacity(4 * ctx.darts.len()),
        }
    }

    fn enqueue(&mut self, dart: usize) {
        let c = self.ctx.darts.cycle_of[dart];
        if self.cycle_state[c] == CycleState::Fresh {
            self.cycle_state[c] = CycleState::Queued;
            self.queue.push_back(dart);
        }
    }

    fn label(&mut self, label: Label) -> u32 {
        match self.ctx.mode {
            Mode::PMod => label,
            Mode::Mod => {
                let slot = &mut self.label_num[label as usize];
                *slot.get_or_insert_with(|| {
                    self.next_label += 1;
                    self.next_label - 1
                })
            }
        }
    }

    fn emit_cycle(&mut self, first: usize) {
        let darts = self.ctx.darts;
        let c = darts.cycle_of[first];
        self.cycle_state[c] = CycleState::Done;
        let (pi, _, len) = darts.cycles[c];

        match self.piece_num[pi] {
            Some(num) => self.code.push(num + 1),
            None => {
                self.piece_num[pi] = Some(self.next_piece);
                self.next_piece += 1;
                let piece = &self.ctx.sp.pieces[pi];
                self.code.extend([0, piece.genus, piece.punctures, piece.interior_marked.len() as u32]);
                if self.ctx.mode == Mode::PMod {
                    self.code.extend(piece.interior_marked.iter().copied());
                }
            }
        }
        self.code.push(len as u32);

        let mut d = first;
        for _ in 0..len {
            let arc = self.ctx.arc_of[d];
            let dir = darts.sides[d].dir;
            match self.arc_num[arc] {
                Some((num, first_dir)) => {
                    self.code.push(num + 1);
                    self.code.push((dir != first_dir) as u32);
                }
                None => {
                    self.arc_num[arc] = Some((self.next_arc, dir));
                    self.next_arc += 1;
                    let (s, e) = (self.ctx.start[d], self.ctx.end[d]);
                    let s = self.label(s);
                    let e = self.label(e);
                    self.code.extend([0, s, e]);
                }
            }
            self.enqueue(darts.twin[d]);
            d = darts.next[d];
        }
    }

    fn finish(mut self) -> Vec<u32> {
        while let Some(d) = self.queue.pop_front() {
            self.emit_cycle(d);
        }
        let darts = self.ctx.darts;
        let fresh: Vec<usize> = (0..darts.cycles.len())
            .filter(|&c| self.cycle_state[c] == CycleState::Fresh)
            .collect();
        if fresh.is_empty() {
            return self.code;
        }
        // stalled: continue from any untouched cycle of the earliest visited
        // piece that still has one
        let owner = fresh
            .iter()
            .filter_map(|&c| self.piece_num[darts.cycles[c].0])
            .min();
        let candidates: Vec<usize> = fresh
            .into_iter()
            .filter(|&c| owner.is_none() || self.piece_num[darts.cycles[c].0] == owner)
            .collect();
        let mut best: Option<Vec<u32>> = None;
        for c in candidates {
            let (_, first, len) = darts.cycles[c];
            for d in first..first + len {
                let mut branch = self.clone();
                branch.code.push(u32::MAX);
                branch.enqueue(d);
                let code = branch.finish();
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code);
                }
            }
        }
        best.unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Arc, BoundaryCycle, Piece, Side, SurfaceSpec};
    use crate::surgery::{all_deletions, relabel, Relabeling};
    use std::collections::BTreeSet;

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

    #[test]
    fn relabeling_does_not_change_code() {
        let sp = torus_maximal();
        let r = Relabeling {
            arc_map: vec![7, 3, 5],
            flip: vec![true, false, true],
            piece_order: vec![1, 0],
            cycle_order: vec![vec![0], vec![0]],
            arc_order: vec![2, 0, 1],
        };
        let other = relabel(&sp, &r);
        assert_ne!(other, sp);
        assert_eq!(canonical_code(&sp, Mode::PMod), canonical_code(&other, Mode::PMod));
    }

    #[test]
    fn torus_children_agree() {
        let sp = torus_maximal();
        let codes: BTreeSet<_> = all_deletions(&sp)
            .unwrap()
            .iter()
            .map(|(_, c)| canonical_code(c, Mode::PMod).unwrap())
            .collect();
        assert_eq!(codes.len(), 1);
    }

    #[test]
    fn mod_mode_needs_m_equal_s() {
        let sp = SplitPresentation::new(
            SurfaceSpec::new(0, 3, 1).unwrap(),
            vec![Arc::new(0, 1, 1)],
            vec![
                Piece::disc(vec![Side::fwd(0)]).with_punctures(1),
                Piece::disc(vec![Side::bwd(0)]).with_punctures(1),
            ],
        );
        assert_eq!(
            canonical_code(&sp, Mode::Mod),
            Err(Error::ModModeUnavailable { m: 1, s: 3 })
        );
        assert!(canonical_code(&sp, Mode::PMod).is_ok());
    }

    #[test]
    fn label_permutation_matters_only_in_pmod() {
        let theta = |a: Label, b: Label, c: Label| {
            SplitPresentation::new(
                SurfaceSpec::new(0, 3, 3).unwrap(),
                vec![Arc::new(0, a, b), Arc::new(1, b, c), Arc::new(2, c, a)],
                vec![
                    Piece::disc(vec![Side::fwd(0), Side::fwd(1), Side::fwd(2)]),
                    Piece::disc(vec![Side::bwd(2), Side::bwd(1), Side::bwd(0)]),
                ],
            )
        };
        let x = theta(1, 2, 3);
        let y = theta(1, 3, 2);
        // the theta graph on the sphere has an orientation-preserving
        // symmetry for every label permutation
        assert_eq!(canonical_code(&x, Mode::PMod), canonical_code(&y, Mode::PMod));
        assert_eq!(canonical_code(&x, Mode::Mod), canonical_code(&y, Mode::Mod));
    }

    #[test]
    fn unlinked_cycles_are_handled() {
        // two disjoint segments on a sphere: one annulus whose boundary
        // cycles are joined by no arc
        let spec = SurfaceSpec::new(0, 5, 4).unwrap();
        let annulus = |flip: bool| Piece {
            genus: 0,
            punctures: 1,
            interior_marked: BTreeSet::new(),
            cycles: if flip {
                vec![
                    BoundaryCycle::new(vec![Side::fwd(1), Side::bwd(1)]),
                    BoundaryCycle::new(vec![Side::fwd(0), Side::bwd(0)]),
                ]
            } else {
                vec![
                    BoundaryCycle::new(vec![Side::fwd(0), Side::bwd(0)]),
                    BoundaryCycle::new(vec![Side::fwd(1), Side::bwd(1)]),
                ]
            },
        };
        let a = SplitPresentation::new(spec, vec![Arc::new(0, 1, 2), Arc::new(1, 3, 4)], vec![annulus(false)]);
        let b = SplitPresentation::new(spec, vec![Arc::new(0, 1, 2), Arc::new(1, 3, 4)], vec![annulus(true)]);
        let c = SplitPresentation::new(spec, vec![Arc::new(1, 1, 2), Arc::new(0, 3, 4)], vec![annulus(false)]);
        let code = canonical_code(&a, Mode::PMod).unwrap();
        assert_eq!(code, canonical_code(&b, Mode::PMod).unwrap());
        assert_eq!(code, canonical_code(&c, Mode::PMod).unwrap());
        let d = SplitPresentation::new(spec, vec![Arc::new(0, 1, 3), Arc::new(1, 2, 4)], vec![annulus(false)]);
        assert_ne!(code, canonical_code(&d, Mode::PMod).unwrap());
    }
}
