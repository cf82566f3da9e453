//! Exhaustive generation of maximal systems, the filling poset below them,
//! and the brute-force dimension counts derived from it.
//!
//! Maximal systems are exactly the gluings of `t = 4g - 4 + s + m` triangles
//! and `s - m` once-punctured monogons along `E = 6g - 6 + 2s + m` arcs
//! whose corners close up into `m` points. Gluings are generated by pairing
//! the lowest open side of the connected part built so far; a fresh polygon
//! is only ever entered through its first side and only the first fresh
//! polygon of each shape is offered, which removes the relabelings of
//! untouched polygons. The remaining duplicates are removed by canonical
//! code.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rayon::prelude::*;

use crate::canonical::{canonical_code, CanonicalCode, Mode};
use crate::constructions::ChainCertificate;
use crate::error::{Error, Result};
use crate::model::{Arc, Piece, Side, SplitPresentation, SurfaceSpec};
use crate::predicates::{fills_up, rank, validate};
use crate::surgery::{all_deletions, restrict};

pub const DEFAULT_BUDGET: u32 = 9;

/// Canonical code to representative presentation.
pub type ClassMap = BTreeMap<CanonicalCode, SplitPresentation>;

pub fn check_budget(spec: SurfaceSpec, budget: u32) -> Result<()> {
    let arcs = spec.maximal_arc_count();
    if arcs > budget {
        Err(Error::BudgetExceeded { arcs, budget })
    } else {
        Ok(())
    }
}

/// Polygons to glue: `t` triangles followed by `k` monogons.
#[derive(Clone, Debug)]
struct Polygons {
    triangles: usize,
    monogons: usize,
    offsets: Vec<usize>,
    sizes: Vec<usize>,
    next: Vec<usize>,
}

impl Polygons {
    fn for_spec(spec: SurfaceSpec) -> Self {
        let t = (4 * spec.g + spec.s + spec.m - 4) as usize;
        let k = spec.punctures() as usize;
        let sizes: Vec<usize> = std::iter::repeat_n(3, t).chain(std::iter::repeat_n(1, k)).collect();
        let mut offsets = Vec::new();
        let mut next = Vec::new();
        let mut total = 0;
        for &size in &sizes {
            offsets.push(total);
            for i in 0..size {
                next.push(total + (i + 1) % size);
            }
            total += size;
        }
        Polygons { triangles: t, monogons: k, offsets, sizes, next }
    }

    fn side_count(&self) -> usize {
        self.next.len()
    }

    fn sides_of(&self, p: usize) -> std::ops::Range<usize> {
        self.offsets[p]..self.offsets[p] + self.sizes[p]
    }
}

const OPEN: usize = usize::MAX;

/// Turns a complete side pairing into labeled presentations, one per
/// labeling of the corner classes, and records them by canonical code.
struct Sink<'a> {
    spec: SurfaceSpec,
    mode: Mode,
    polygons: &'a Polygons,
    found: BTreeMap<CanonicalCode, (Vec<usize>, Vec<u32>, SplitPresentation)>,
}

impl<'a> Sink<'a> {
    fn new(spec: SurfaceSpec, mode: Mode, polygons: &'a Polygons) -> Self {
        Sink { spec, mode, polygons, found: BTreeMap::new() }
    }

    fn accept(&mut self, pairing: &[usize], require_valid: bool) {
        let polys = self.polygons;
        let n = polys.side_count();
        // corner at the start of each side; corners around one point form an
        // orbit of d -> next(twin(d))
        let mut class = vec![usize::MAX; n];
        let mut classes = 0;
        for start in 0..n {
            if class[start] != usize::MAX {
                continue;
            }
            let mut d = start;
            while class[d] == usize::MAX {
                class[d] = classes;
                d = polys.next[pairing[d]];
            }
            classes += 1;
        }
        if classes != self.spec.m as usize {
            return;
        }

        let mut arc_of = vec![0u32; n];
        let mut forward = vec![false; n];
        let mut ends = Vec::new();
        for x in 0..n {
            let y = pairing[x];
            if x < y {
                arc_of[x] = ends.len() as u32;
                arc_of[y] = ends.len() as u32;
                forward[x] = true;
                ends.push((class[x], class[y]));
            }
        }

        let labelings: Vec<Vec<u32>> = match self.mode {
            Mode::PMod => (1..=self.spec.m).permutations(classes).collect(),
            Mode::Mod => vec![(1..=self.spec.m).collect()],
        };
        for labels in labelings {
            let arcs = ends
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| Arc::new(i as u32, labels[a], labels[b]))
                .collect();
            let pieces = (0..polys.sizes.len())
                .map(|p| {
                    let sides = polys
                        .sides_of(p)
                        .map(|d| if forward[d] { Side::fwd(arc_of[d]) } else { Side::bwd(arc_of[d]) })
                        .collect();
                    let piece = Piece::disc(sides);
                    if p >= polys.triangles { piece.with_punctures(1) } else { piece }
                })
                .collect();
            let sp = SplitPresentation::new(self.spec, arcs, pieces);
            if require_valid && !validate(&sp).valid {
                continue;
            }
            debug_assert!(validate(&sp).valid, "{}", validate(&sp));
            let Ok(code) = canonical_code(&sp, self.mode) else { continue };
            let key = (pairing.to_vec(), labels);
            match self.found.get(&code) {
                Some((p, l, _)) if (p, l) <= (&key.0, &key.1) => {}
                _ => {
                    self.found.insert(code, (key.0, key.1, sp));
                }
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (code, entry) in other.found {
            match self.found.get(&code) {
                Some((p, l, _)) if (p, l) <= (&entry.0, &entry.1) => {}
                _ => {
                    self.found.insert(code, entry);
                }
            }
        }
        self
    }

    fn into_classes(self) -> ClassMap {
        self.found.into_iter().map(|(code, (_, _, sp))| (code, sp)).collect()
    }
}

/// Search state for the pruned generator.
#[derive(Clone)]
struct Partial {
    pairing: Vec<usize>,
    fresh_triangle: usize,
    fresh_monogon: usize,
}

impl Partial {
    fn start(polys: &Polygons) -> Self {
        let mut p = Partial {
            pairing: vec![OPEN; polys.side_count()],
            fresh_triangle: 0,
            fresh_monogon: 0,
        };
        if polys.triangles > 0 {
            p.fresh_triangle = 1;
        } else {
            p.fresh_monogon = 1;
        }
        p
    }

    fn touched(&self, polys: &Polygons) -> impl Iterator<Item = usize> {
        (0..self.fresh_triangle).chain(polys.triangles..polys.triangles + self.fresh_monogon)
    }

    fn lowest_open(&self, polys: &Polygons) -> Option<usize> {
        self.touched(polys)
            .flat_map(|p| polys.sides_of(p))
            .find(|&d| self.pairing[d] == OPEN)
    }

    /// Successor states after pairing the lowest open side.
    fn children(&self, polys: &Polygons) -> Vec<Partial> {
        let Some(x) = self.lowest_open(polys) else { return Vec::new() };
        let mut out = Vec::new();
        for y in self.touched(polys).flat_map(|p| polys.sides_of(p)) {
            if y != x && self.pairing[y] == OPEN {
                let mut child = self.clone();
                child.pairing[x] = y;
                child.pairing[y] = x;
                out.push(child);
            }
        }
        if self.fresh_triangle < polys.triangles {
            let y = polys.offsets[self.fresh_triangle];
            let mut child = self.clone();
            child.pairing[x] = y;
            child.pairing[y] = x;
            child.fresh_triangle += 1;
            out.push(child);
        }
        if self.fresh_monogon < polys.monogons {
            let y = polys.offsets[polys.triangles + self.fresh_monogon];
            let mut child = self.clone();
            child.pairing[x] = y;
            child.pairing[y] = x;
            child.fresh_monogon += 1;
            out.push(child);
        }
        out
    }

    fn complete(&self, polys: &Polygons) -> bool {
        self.fresh_triangle == polys.triangles
            && self.fresh_monogon == polys.monogons
            && self.pairing.iter().all(|&p| p != OPEN)
    }

    fn search(&self, polys: &Polygons, sink: &mut Sink<'_>) {
        if self.lowest_open(polys).is_none() {
            if self.complete(polys) {
                sink.accept(&self.pairing, false);
            }
            return;
        }
        for child in self.children(polys) {
            child.search(polys, sink);
        }
    }
}

/// All maximal systems of `spec` up to the equivalence of `mode`.
pub fn enumerate_maximal(spec: SurfaceSpec, mode: Mode, budget: u32) -> Result<ClassMap> {
    let spec = SurfaceSpec::new(spec.g, spec.s, spec.m)?;
    check_budget(spec, budget)?;
    if mode == Mode::Mod && spec.m != spec.s {
        return Err(Error::ModModeUnavailable { m: spec.m, s: spec.s });
    }
    let polys = Polygons::for_spec(spec);
    let root = Partial::start(&polys);

    // fan out two levels deep so workers have something to share
    let frontier: Vec<Partial> = root
        .children(&polys)
        .into_iter()
        .flat_map(|c| {
            let grand = c.children(&polys);
            if grand.is_empty() { vec![c] } else { grand }
        })
        .collect();
    let sink = frontier
        .par_iter()
        .map(|state| {
            let mut sink = Sink::new(spec, mode, &polys);
            state.search(&polys, &mut sink);
            sink
        })
        .reduce(|| Sink::new(spec, mode, &polys), Sink::merge);
    Ok(sink.into_classes())
}

/// Reference generator: every perfect matching of all polygon sides, no
/// symmetry breaking and no connectivity pruning, filtered by `validate`.
pub fn enumerate_maximal_naive(spec: SurfaceSpec, mode: Mode, budget: u32) -> Result<ClassMap> {
    let spec = SurfaceSpec::new(spec.g, spec.s, spec.m)?;
    check_budget(spec, budget)?;
    if mode == Mode::Mod && spec.m != spec.s {
        return Err(Error::ModModeUnavailable { m: spec.m, s: spec.s });
    }
    let polys = Polygons::for_spec(spec);
    let mut sink = Sink::new(spec, mode, &polys);
    let mut pairing = vec![OPEN; polys.side_count()];

    fn matchings(pairing: &mut Vec<usize>, sink: &mut Sink<'_>) {
        let Some(x) = pairing.iter().position(|&p| p == OPEN) else {
            sink.accept(pairing, true);
            return;
        };
        for y in x + 1..pairing.len() {
            if pairing[y] == OPEN {
                pairing[x] = y;
                pairing[y] = x;
                matchings(pairing, sink);
                pairing[x] = OPEN;
                pairing[y] = OPEN;
            }
        }
    }
    matchings(&mut pairing, &mut sink);
    Ok(sink.into_classes())
}

#[derive(Clone, Debug)]
pub struct PosetNode {
    pub code: CanonicalCode,
    pub system: SplitPresentation,
    pub rank: i64,
}

/// Filling systems below the maximal ones, joined by single deletions.
#[derive(Clone, Debug)]
pub struct FillingPoset {
    pub spec: SurfaceSpec,
    pub mode: Mode,
    pub nodes: Vec<PosetNode>,
    /// `(parent, child)`: the child is the parent minus one arc.
    pub edges: BTreeSet<(usize, usize)>,
    pub roots: Vec<usize>,
}

impl FillingPoset {
    /// Closes `maximal` downward under single deletions, keeping only
    /// filling children.
    pub fn from_maximal(spec: SurfaceSpec, mode: Mode, maximal: &ClassMap) -> Result<Self> {
        let mut nodes: Vec<PosetNode> = Vec::new();
        let mut index: BTreeMap<CanonicalCode, usize> = BTreeMap::new();
        let mut edges = BTreeSet::new();

        for (code, sp) in maximal {
            index.insert(code.clone(), nodes.len());
            nodes.push(PosetNode { code: code.clone(), system: sp.clone(), rank: rank(sp) });
        }
        let roots: Vec<usize> = (0..nodes.len()).collect();

        let mut level: Vec<usize> = roots.clone();
        while !level.is_empty() {
            let found: Vec<Vec<(usize, CanonicalCode, SplitPresentation)>> = level
                .par_iter()
                .map(|&parent| -> Result<Vec<_>> {
                    let sp = &nodes[parent].system;
                    if sp.arcs.len() == 1 {
                        return Ok(Vec::new());
                    }
                    let mut out = Vec::new();
                    for (_, child) in all_deletions(sp)? {
                        if fills_up(&child) && validate(&child).valid {
                            let code = canonical_code(&child, mode)?;
                            out.push((parent, code, child));
                        }
                    }
                    Ok(out)
                })
                .collect::<Result<_>>()?;

            let mut fresh: BTreeMap<CanonicalCode, SplitPresentation> = BTreeMap::new();
            let mut links = Vec::new();
            for (parent, code, child) in found.into_iter().flatten() {
                if !index.contains_key(&code) {
                    fresh.entry(code.clone()).or_insert(child);
                }
                links.push((parent, code));
            }
            let mut next_level = Vec::new();
            for (code, sp) in fresh {
                index.insert(code.clone(), nodes.len());
                next_level.push(nodes.len());
                nodes.push(PosetNode { code, rank: rank(&sp), system: sp });
            }
            for (parent, code) in links {
                edges.insert((parent, index[&code]));
            }
            level = next_level;
        }
        Ok(FillingPoset { spec, mode, nodes, edges, roots })
    }

    pub fn build(spec: SurfaceSpec, mode: Mode, budget: u32) -> Result<Self> {
        let maximal = enumerate_maximal(spec, mode, budget)?;
        Self::from_maximal(spec, mode, &maximal)
    }

    pub fn children(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((node, 0)..(node + 1, 0)).map(|&(_, c)| c)
    }

    pub fn parents(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |&&(_, c)| c == node).map(|&(p, _)| p)
    }

    pub fn max_rank(&self) -> Option<i64> {
        self.nodes.iter().map(|n| n.rank).max()
    }

    pub fn min_rank(&self) -> Option<i64> {
        self.nodes.iter().map(|n| n.rank).min()
    }

    /// Nodes with no filling child.
    pub fn minimal_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.children(i).next().is_none()).collect()
    }

    /// Structural checks: ranks drop by one along edges, every non-root has a
    /// parent, every root is maximal in rank.
    pub fn sanity(&self) -> std::result::Result<(), String> {
        let top = self.spec.maximal_arc_count() as i64 - 1;
        for &(p, c) in &self.edges {
            if self.nodes[p].rank != self.nodes[c].rank + 1 {
                return Err(format!("edge {p} -> {c} does not drop rank by one"));
            }
        }
        let with_parent: BTreeSet<usize> = self.edges.iter().map(|&(_, c)| c).collect();
        for i in 0..self.nodes.len() {
            let is_root = self.roots.contains(&i);
            if is_root && self.nodes[i].rank != top {
                return Err(format!("root {i} has rank {} instead of {top}", self.nodes[i].rank));
            }
            if !is_root && !with_parent.contains(&i) {
                return Err(format!("node {i} is unreachable from the maximal systems"));
            }
        }
        Ok(())
    }

    /// A longest downward path, listed from the bottom up.
    pub fn longest_chain(&self) -> Vec<usize> {
        let n = self.nodes.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| self.nodes[i].rank);
        // depth[i]: edges on the longest path from i down to a minimal node
        let mut depth = vec![0usize; n];
        let mut below = vec![None; n];
        for &i in &order {
            for c in self.children(i) {
                if below[i].is_none() || depth[c] + 1 > depth[i] {
                    depth[i] = depth[c] + 1;
                    below[i] = Some(c);
                }
            }
        }
        let Some(top) = (0..n).max_by_key(|&i| (depth[i], std::cmp::Reverse(i))) else {
            return Vec::new();
        };
        let mut chain = vec![top];
        let mut cur = top;
        while depth[cur] > 0 {
            cur = below[cur].expect("nonzero depth has a child");
            chain.push(cur);
        }
        chain.reverse();
        chain
    }

    /// Concrete nested systems along a chain of classes (bottom up). In Mod
    /// mode class representatives are only nested up to relabeling, so the
    /// chain is rebuilt by deleting arcs from the top representative.
    fn realize(&self, chain: &[usize]) -> Vec<SplitPresentation> {
        let Some(&top) = chain.last() else { return Vec::new() };
        let mut current = self.nodes[top].system.clone();
        let mut systems = vec![current.clone()];
        for &i in chain.iter().rev().skip(1) {
            let target = &self.nodes[i].code;
            let next = all_deletions(&current).ok().and_then(|children| {
                children
                    .into_iter()
                    .map(|(_, child)| child)
                    .find(|child| canonical_code(child, self.mode).as_ref() == Ok(target))
            });
            match next {
                Some(child) => current = child,
                None => current = self.nodes[i].system.clone(),
            }
            systems.push(current.clone());
        }
        systems.reverse();
        systems
    }

    pub fn spine_dimension(&self) -> SpineDimension {
        let chain = self.longest_chain();
        let witness = ChainCertificate { spec: self.spec, systems: self.realize(&chain) };
        SpineDimension {
            longest_chain: chain.len() as i64 - 1,
            rank_span: self.max_rank().unwrap_or(0) - self.min_rank().unwrap_or(0),
            witness,
        }
    }

    pub fn min_filling(&self) -> MinFilling {
        let minimal = self.minimal_nodes();
        let has_punctures = self.spec.m < self.spec.s;
        let violations = minimal
            .iter()
            .copied()
            .filter(|&i| {
                let pieces = &self.nodes[i].system.pieces;
                let ok = if has_punctures {
                    pieces.iter().all(|p| p.punctures == 1)
                } else {
                    pieces.len() == 1
                };
                !ok
            })
            .collect();
        MinFilling { rank: self.min_rank().unwrap_or(0), minimal_nodes: minimal, shape_violations: violations }
    }
}

#[derive(Clone, Debug)]
pub struct SpineDimension {
    /// Edges on a longest chain of filling systems.
    pub longest_chain: i64,
    /// Largest minus smallest filling rank.
    pub rank_span: i64,
    pub witness: ChainCertificate,
}

impl SpineDimension {
    pub fn agrees(&self) -> bool {
        self.longest_chain == self.rank_span
    }
}

#[derive(Clone, Debug)]
pub struct MinFilling {
    pub rank: i64,
    pub minimal_nodes: Vec<usize>,
    /// Minimal nodes that are not all once-punctured discs (`m < s`) or not
    /// a single disc (`m = s`).
    pub shape_violations: Vec<usize>,
}

pub fn spine_dimension_bruteforce(spec: SurfaceSpec, mode: Mode, budget: u32) -> Result<SpineDimension> {
    Ok(FillingPoset::build(spec, mode, budget)?.spine_dimension())
}

pub fn min_filling_rank_bruteforce(spec: SurfaceSpec, mode: Mode, budget: u32) -> Result<MinFilling> {
    Ok(FillingPoset::build(spec, mode, budget)?.min_filling())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfinityReport {
    /// `dim A - 2`.
    pub bound: i64,
    pub max_nonfilling_rank: Option<i64>,
    pub nonfilling_classes: usize,
    pub valid_classes: usize,
    pub subsets_checked: usize,
    pub holds: bool,
}

/// Every valid subsystem of every maximal system, by canonical code.
pub fn all_valid_subsystems(mode: Mode, maximal: &ClassMap) -> Result<(ClassMap, usize)> {
    let per_root: Vec<(ClassMap, usize)> = maximal
        .values()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|sp| -> Result<(ClassMap, usize)> {
            let ids = sp.arc_ids();
            let mut out = ClassMap::new();
            let mut checked = 0;
            for mask in 1u64..(1u64 << ids.len()) {
                let keep: BTreeSet<_> =
                    ids.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, id)| *id).collect();
                let sub = restrict(sp, &keep)?;
                checked += 1;
                if validate(&sub).valid {
                    out.entry(canonical_code(&sub, mode)?).or_insert(sub);
                }
            }
            Ok((out, checked))
        })
        .collect::<Result<_>>()?;
    let mut all = ClassMap::new();
    let mut checked = 0;
    for (map, c) in per_root {
        checked += c;
        for (code, sp) in map {
            all.entry(code).or_insert(sp);
        }
    }
    Ok((all, checked))
}

/// Non-filling valid systems sit at least two below the top dimension.
pub fn a_infinity_codimension_check(spec: SurfaceSpec, mode: Mode, budget: u32) -> Result<AInfinityReport> {
    let maximal = enumerate_maximal(spec, mode, budget)?;
    a_infinity_from_maximal(spec, mode, &maximal)
}

pub fn a_infinity_from_maximal(spec: SurfaceSpec, mode: Mode, maximal: &ClassMap) -> Result<AInfinityReport> {
    let bound = spec.maximal_arc_count() as i64 - 1 - 2;
    let (all, checked) = all_valid_subsystems(mode, maximal)?;
    let nonfilling: Vec<i64> = all.values().filter(|sp| !fills_up(sp)).map(rank).collect();
    let max_nonfilling_rank = nonfilling.iter().copied().max();
    Ok(AInfinityReport {
        bound,
        max_nonfilling_rank,
        nonfilling_classes: nonfilling.len(),
        valid_classes: all.len(),
        subsets_checked: checked,
        holds: max_nonfilling_rank.is_none_or(|r| r <= bound),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(g: u32, s: u32, m: u32) -> SurfaceSpec {
        SurfaceSpec::new(g, s, m).unwrap()
    }

    #[test]
    fn sphere_one_decorated_point() {
        let classes = enumerate_maximal(spec(0, 3, 1), Mode::PMod, DEFAULT_BUDGET).unwrap();
        assert_eq!(classes.len(), 1);
        let poset = FillingPoset::from_maximal(spec(0, 3, 1), Mode::PMod, &classes).unwrap();
        assert_eq!(poset.nodes.len(), 1);
        assert_eq!(poset.spine_dimension().longest_chain, 0);
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(
            enumerate_maximal(spec(2, 1, 1), Mode::PMod, 8).unwrap_err(),
            Error::BudgetExceeded { arcs: 9, budget: 8 }
        );
    }

    #[test]
    fn torus_poset() {
        let poset = FillingPoset::build(spec(1, 1, 1), Mode::PMod, DEFAULT_BUDGET).unwrap();
        poset.sanity().unwrap();
        assert_eq!(poset.min_rank(), Some(1));
        assert_eq!(poset.max_rank(), Some(2));
        let dim = poset.spine_dimension();
        assert_eq!(dim.longest_chain, 1);
        assert!(dim.agrees());
        dim.witness.verify().unwrap();
    }

    #[test]
    fn once_punctured_torus_poset() {
        let poset = FillingPoset::build(spec(1, 2, 1), Mode::PMod, DEFAULT_BUDGET).unwrap();
        poset.sanity().unwrap();
        assert_eq!((poset.min_rank(), poset.max_rank()), (Some(1), Some(4)));
        assert_eq!(poset.spine_dimension().longest_chain, 3);
        assert!(poset.min_filling().shape_violations.is_empty());
    }
}
