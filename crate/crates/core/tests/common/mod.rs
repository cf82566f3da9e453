//! Shared helpers for the integration suites: random valid systems, random
//! relabelings, and a brute-force isomorphism test that shares no code with
//! the canonical form.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use asl_core::constructions::explicit_maximal;
use asl_core::enumeration::{enumerate_maximal, DEFAULT_BUDGET};
use asl_core::surgery::{relabel, restrict, Relabeling};
use asl_core::{
    validate, Arc, ArcId, BoundaryCycle, Dir, Label, Mode, Piece, Side, SplitPresentation, SurfaceSpec,
};
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn spec(g: u32, s: u32, m: u32) -> SurfaceSpec {
    SurfaceSpec::new(g, s, m).unwrap()
}

/// Specs small enough to enumerate quickly in an unoptimized build.
pub const SMALL_SPECS: [(u32, u32, u32); 11] = [
    (0, 3, 1),
    (0, 3, 2),
    (0, 3, 3),
    (0, 4, 1),
    (0, 4, 2),
    (0, 4, 3),
    (0, 4, 4),
    (1, 1, 1),
    (1, 2, 1),
    (1, 2, 2),
    (0, 5, 2),
];

/// Maximal systems to draw random subsystems from: every enumerated class of
/// the small specs plus the explicit systems for `g <= 2, s <= 4`.
pub fn maximal_pool() -> &'static [SplitPresentation] {
    static POOL: OnceLock<Vec<SplitPresentation>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut pool = Vec::new();
        for (g, s, m) in SMALL_SPECS {
            pool.extend(enumerate_maximal(spec(g, s, m), Mode::PMod, DEFAULT_BUDGET).unwrap().into_values());
        }
        for g in 0..=2 {
            for s in 1..=4 {
                for m in 1..=s {
                    if let Ok(sp) = SurfaceSpec::new(g, s, m) {
                        pool.push(explicit_maximal(sp).unwrap());
                    }
                }
            }
        }
        pool
    })
}

/// A random valid system: a random nonempty subset of a random maximal one,
/// redrawn until it validates, then randomly relabeled.
pub fn random_valid<R: Rng>(rng: &mut R) -> SplitPresentation {
    let pool = maximal_pool();
    loop {
        let top = pool.choose(rng).unwrap();
        let keep: BTreeSet<ArcId> = top.arcs.iter().filter(|_| rng.gen_bool(0.7)).map(|a| a.id).collect();
        if keep.is_empty() {
            continue;
        }
        let sub = restrict(top, &keep).unwrap();
        if validate(&sub).valid {
            return relabel(&sub, &random_relabeling(&sub, rng));
        }
    }
}

pub fn random_relabeling<R: Rng>(sp: &SplitPresentation, rng: &mut R) -> Relabeling {
    let n = sp.arcs.len();
    let mut ids: Vec<u32> = (0..(3 * n as u32 + 5)).collect();
    ids.shuffle(rng);
    ids.truncate(n);
    let mut piece_order: Vec<usize> = (0..sp.pieces.len()).collect();
    piece_order.shuffle(rng);
    let cycle_order = sp
        .pieces
        .iter()
        .map(|p| {
            let mut order: Vec<usize> = (0..p.cycles.len()).collect();
            order.shuffle(rng);
            order
        })
        .collect();
    let mut arc_order: Vec<usize> = (0..n).collect();
    arc_order.shuffle(rng);
    Relabeling {
        arc_map: ids,
        flip: (0..n).map(|_| rng.gen_bool(0.5)).collect(),
        piece_order,
        cycle_order,
        arc_order,
    }
}

/// Renames decorated points by `perm[label - 1]`.
pub fn permute_labels(sp: &SplitPresentation, perm: &[Label]) -> SplitPresentation {
    let p = |l: Label| perm[l as usize - 1];
    SplitPresentation::new(
        sp.spec,
        sp.arcs.iter().map(|a| Arc { id: a.id, u: p(a.u), v: p(a.v) }).collect(),
        sp.pieces
            .iter()
            .map(|piece| Piece {
                interior_marked: piece.interior_marked.iter().map(|&l| p(l)).collect(),
                ..piece.clone()
            })
            .collect(),
    )
}

type PieceKey = (u32, u32, Vec<Label>, Vec<Vec<(u32, bool)>>);

/// Pieces as a sorted list of attribute tuples with cycles in least rotation
/// and sorted. Arcs are addressed by their index in `sp.arcs`.
fn piece_multiset(sp: &SplitPresentation, arc_perm: &[usize], flip: &[bool], labels: &[Label]) -> Vec<PieceKey> {
    let index: BTreeMap<ArcId, usize> = sp.arcs.iter().enumerate().map(|(i, a)| (a.id, i)).collect();
    let mut out: Vec<PieceKey> = sp
        .pieces
        .iter()
        .map(|piece| {
            let mut cycles: Vec<Vec<(u32, bool)>> = piece
                .cycles
                .iter()
                .map(|c| {
                    let word: Vec<(u32, bool)> = c
                        .sides()
                        .iter()
                        .map(|s| {
                            let i = index[&s.arc];
                            (arc_perm[i] as u32, (s.dir == Dir::Forward) != flip[i])
                        })
                        .collect();
                    (0..word.len())
                        .map(|r| word[r..].iter().chain(&word[..r]).copied().collect::<Vec<_>>())
                        .min()
                        .unwrap_or_default()
                })
                .collect();
            cycles.sort();
            let mut interior: Vec<Label> = piece.interior_marked.iter().map(|&l| labels[l as usize - 1]).collect();
            interior.sort();
            (piece.genus, piece.punctures, interior, cycles)
        })
        .collect();
    out.sort();
    out
}

/// Brute-force equivalence: some bijection of arcs, choice of arc
/// orientations and (in Mod mode) permutation of decorated points carries
/// one presentation onto the other.
pub fn isomorphic(a: &SplitPresentation, b: &SplitPresentation, mode: Mode) -> bool {
    if a.spec != b.spec || a.arcs.len() != b.arcs.len() || a.pieces.len() != b.pieces.len() {
        return false;
    }
    let n = a.arcs.len();
    let m = a.spec.m as usize;
    let identity: Vec<usize> = (0..n).collect();
    let no_flip = vec![false; n];
    let id_labels: Vec<Label> = (1..=m as Label).collect();
    let target = piece_multiset(b, &identity, &no_flip, &id_labels);
    let label_perms: Vec<Vec<Label>> = match mode {
        Mode::PMod => vec![id_labels.clone()],
        Mode::Mod => (1..=m as Label).permutations(m).collect(),
    };
    for labels in &label_perms {
        for perm in (0..n).permutations(n) {
            // endpoints must match under the label map before orientations are tried
            let mut flips_ok = true;
            let mut forced: Vec<Vec<bool>> = Vec::with_capacity(n);
            for (i, arc) in a.arcs.iter().enumerate() {
                let other = b.arcs[perm[i]];
                let (u, v) = (labels[arc.u as usize - 1], labels[arc.v as usize - 1]);
                let mut options = Vec::new();
                if (u, v) == (other.u, other.v) {
                    options.push(false);
                }
                if (v, u) == (other.u, other.v) {
                    options.push(true);
                }
                if options.is_empty() {
                    flips_ok = false;
                    break;
                }
                forced.push(options);
            }
            if !flips_ok {
                continue;
            }
            for flip in forced.iter().map(|o| o.iter().copied()).multi_cartesian_product() {
                if piece_multiset(a, &perm, &flip, labels) == target {
                    return true;
                }
            }
        }
    }
    false
}

pub fn cycle(sides: &[(u32, char)]) -> BoundaryCycle {
    BoundaryCycle::new(
        sides
            .iter()
            .map(|&(a, d)| if d == '+' { Side::fwd(a) } else { Side::bwd(a) })
            .collect(),
    )
}
