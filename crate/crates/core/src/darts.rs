//! Flat dart view of a presentation: one dart per side, with the boundary
//! successor and the twin across the arc.

use std::collections::HashMap;

use crate::model::{Side, SplitPresentation};

pub(crate) struct Darts {
    pub sides: Vec<Side>,
    pub cycle_of: Vec<usize>,
    pub next: Vec<usize>,
    pub twin: Vec<usize>,
    /// Global cycles as `(piece, first dart, length)`.
    pub cycles: Vec<(usize, usize, usize)>,
}

impl Darts {
    /// `None` unless every arc has exactly one forward and one backward side.
    pub fn new(sp: &SplitPresentation) -> Option<Darts> {
        let mut sides = Vec::new();
        let mut cycle_of = Vec::new();
        let mut next = Vec::new();
        let mut cycles = Vec::new();
        for (pi, piece) in sp.pieces.iter().enumerate() {
            for cycle in &piece.cycles {
                let first = sides.len();
                let len = cycle.len();
                let ci = cycles.len();
                for (k, side) in cycle.sides().iter().enumerate() {
                    sides.push(*side);
                    cycle_of.push(ci);
                    next.push(first + (k + 1) % len);
                }
                cycles.push((pi, first, len));
            }
        }
        let mut by_side: HashMap<Side, usize> = HashMap::new();
        for (d, side) in sides.iter().enumerate() {
            if by_side.insert(*side, d).is_some() {
                return None;
            }
        }
        if by_side.len() != 2 * sp.arcs.len() {
            return None;
        }
        let mut twin = Vec::with_capacity(sides.len());
        for side in &sides {
            twin.push(*by_side.get(&side.twin())?);
        }
        Some(Darts { sides, cycle_of, next, twin, cycles })
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    /// Vertex class of the corner at the start of each dart.
    ///
    /// Corners around one point of the surface form an orbit of
    /// `d -> next(twin(d))`. Returns the class index per dart and the number
    /// of classes.
    pub fn vertex_classes(&self) -> (Vec<usize>, usize) {
        let n = self.len();
        let mut class = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if class[start] != usize::MAX {
                continue;
            }
            let mut d = start;
            while class[d] == usize::MAX {
                class[d] = count;
                d = self.next[self.twin[d]];
            }
            count += 1;
        }
        (class, count)
    }
}
