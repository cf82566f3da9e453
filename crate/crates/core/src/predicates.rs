//! Local predicates on presentations: validity, recovered invariants, piece
//! classes, filling and maximality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::darts::Darts;
use crate::error::{Error, Result};
use crate::model::{Dir, Label, Piece, SplitPresentation};

/// Euler characteristic of the double of a piece along its boundary minus
/// the corners: `2(2 - 2h - b - n) - ℓ`.
///
/// Interior decorated points do not contribute.
pub fn doubled_euler(piece: &Piece) -> i64 {
    let h = piece.genus as i64;
    let b = piece.boundary_count() as i64;
    let n = piece.punctures as i64;
    let l = piece.side_count() as i64;
    2 * (2 - 2 * h - b - n) - l
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PieceClass {
    Triangle,
    OncePuncturedMonogon,
    Other { genus: u32, boundary: usize, punctures: u32, sides: usize, interior: usize },
}

pub fn classify_piece(piece: &Piece) -> PieceClass {
    let (h, b, n, l, k) = (
        piece.genus,
        piece.boundary_count(),
        piece.punctures,
        piece.side_count(),
        piece.interior_marked.len(),
    );
    match (h, b, n, l, k) {
        (0, 1, 0, 3, 0) => PieceClass::Triangle,
        (0, 1, 1, 1, 0) => PieceClass::OncePuncturedMonogon,
        _ => PieceClass::Other { genus: h, boundary: b, punctures: n, sides: l, interior: k },
    }
}

impl fmt::Display for PieceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PieceClass::Triangle => write!(f, "triangle"),
            PieceClass::OncePuncturedMonogon => write!(f, "once-punctured monogon"),
            PieceClass::Other { genus, boundary, punctures, sides, interior } => write!(
                f,
                "other(h={genus}, b={boundary}, n={punctures}, l={sides}, interior={interior})"
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Structure,
    ArcIncidence,
    CornerConsistency,
    VertexLinks,
    Connectivity,
    DeltaPartition,
    PunctureCount,
    EulerGenus,
    DoubledEuler,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Structure => "structure",
            Check::ArcIncidence => "arc-incidence",
            Check::CornerConsistency => "corner-consistency",
            Check::VertexLinks => "vertex-links",
            Check::Connectivity => "connectivity",
            Check::DeltaPartition => "delta-partition",
            Check::PunctureCount => "puncture-count",
            Check::EulerGenus => "euler-genus",
            Check::DoubledEuler => "doubled-euler",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub check: Check,
    pub detail: String,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub valid: bool,
    pub failures: Vec<Failure>,
}

impl ValidationReport {
    fn push(&mut self, check: Check, detail: impl Into<String>, indices: Vec<usize>) {
        self.failures.push(Failure { check, detail: detail.into(), indices });
    }

    pub fn failed(&self, check: Check) -> bool {
        self.failures.iter().any(|f| f.check == check)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid {
            return writeln!(f, "valid");
        }
        writeln!(f, "invalid ({} failures)", self.failures.len())?;
        for fail in &self.failures {
            writeln!(f, "  [{}] {} {:?}", fail.check.name(), fail.detail, fail.indices)?;
        }
        Ok(())
    }
}

/// Runs every validity check and reports all failures.
pub fn validate(sp: &SplitPresentation) -> ValidationReport {
    let mut report = ValidationReport::default();
    check_structure(sp, &mut report);
    if !report.failures.is_empty() {
        return report;
    }

    check_incidence(sp, &mut report);
    let darts = if report.failures.is_empty() { Darts::new(sp) } else { None };

    if darts.is_some() {
        check_corners(sp, &mut report);
    }
    if let Some(darts) = darts.as_ref().filter(|_| !report.failed(Check::CornerConsistency)) {
        check_vertex_links(sp, darts, &mut report);
    }
    check_connectivity(sp, &mut report);
    check_partition(sp, &mut report);

    let punctures: u32 = sp.pieces.iter().map(|p| p.punctures).sum();
    if punctures != sp.spec.punctures() {
        report.push(
            Check::PunctureCount,
            format!("pieces hold {punctures} punctures, surface has {}", sp.spec.punctures()),
            vec![],
        );
    }

    let euler = euler_count(sp);
    if euler != sp.spec.euler() {
        report.push(
            Check::EulerGenus,
            format!("Euler count {euler} does not match 2-2g = {}", sp.spec.euler()),
            vec![],
        );
    }

    for (i, piece) in sp.pieces.iter().enumerate() {
        let chi = doubled_euler(piece);
        if chi >= 0 {
            report.push(
                Check::DoubledEuler,
                format!("piece {i} ({}) has doubled Euler characteristic {chi}", classify_piece(piece)),
                vec![i],
            );
        }
    }

    report.valid = report.failures.is_empty();
    report
}

fn check_structure(sp: &SplitPresentation, report: &mut ValidationReport) {
    let spec = sp.spec;
    if !spec.is_valid() {
        report.push(Check::Structure, format!("invalid surface parameters {spec}"), vec![]);
    }
    if sp.arcs.is_empty() {
        report.push(Check::Structure, "no arcs", vec![]);
    }
    if sp.pieces.is_empty() {
        report.push(Check::Structure, "no pieces", vec![]);
    }
    let mut seen = BTreeSet::new();
    for (i, arc) in sp.arcs.iter().enumerate() {
        if !seen.insert(arc.id) {
            report.push(Check::Structure, format!("duplicate arc id {}", arc.id), vec![i]);
        }
        for label in [arc.u, arc.v] {
            if label < 1 || label > spec.m {
                report.push(
                    Check::Structure,
                    format!("arc {} has endpoint label {label} outside 1..={}", arc.id, spec.m),
                    vec![i],
                );
            }
        }
    }
    for (pi, piece) in sp.pieces.iter().enumerate() {
        if piece.cycles.is_empty() {
            report.push(Check::Structure, format!("piece {pi} has no boundary cycle"), vec![pi]);
        }
        for (ci, cycle) in piece.cycles.iter().enumerate() {
            if cycle.is_empty() {
                report.push(Check::Structure, format!("piece {pi} cycle {ci} is empty"), vec![pi, ci]);
            }
            for side in cycle.sides() {
                if !seen.contains(&side.arc) {
                    report.push(
                        Check::Structure,
                        format!("piece {pi} cycle {ci} references unknown arc {}", side.arc),
                        vec![pi, ci],
                    );
                }
            }
        }
        for &label in &piece.interior_marked {
            if label < 1 || label > spec.m {
                report.push(
                    Check::Structure,
                    format!("piece {pi} has interior label {label} outside 1..={}", spec.m),
                    vec![pi],
                );
            }
        }
    }
}

fn check_incidence(sp: &SplitPresentation, report: &mut ValidationReport) {
    let mut counts: BTreeMap<_, (usize, usize)> =
        sp.arcs.iter().map(|a| (a.id, (0, 0))).collect();
    for piece in &sp.pieces {
        for side in piece.sides() {
            if let Some(c) = counts.get_mut(&side.arc) {
                match side.dir {
                    Dir::Forward => c.0 += 1,
                    Dir::Backward => c.1 += 1,
                }
            }
        }
    }
    for (i, arc) in sp.arcs.iter().enumerate() {
        let (f, b) = counts[&arc.id];
        if f + b != 2 {
            report.push(
                Check::ArcIncidence,
                format!("arc {} occurs {} times among sides, expected 2", arc.id, f + b),
                vec![i],
            );
        } else if f != 1 {
            report.push(
                Check::ArcIncidence,
                format!("both sides of arc {} run the same way (orientation-reversing gluing)", arc.id),
                vec![i],
            );
        }
    }
}

fn check_corners(sp: &SplitPresentation, report: &mut ValidationReport) {
    for (pi, piece) in sp.pieces.iter().enumerate() {
        for (ci, cycle) in piece.cycles.iter().enumerate() {
            let sides = cycle.sides();
            for k in 0..sides.len() {
                let here = sides[k];
                let next = sides[(k + 1) % sides.len()];
                let end = sp.side_end(here);
                let start = sp.side_start(next);
                if end != start {
                    report.push(
                        Check::CornerConsistency,
                        format!(
                            "piece {pi} cycle {ci}: side {k} ends at {:?} but the next side starts at {:?}",
                            end, start
                        ),
                        vec![pi, ci, k],
                    );
                }
            }
        }
    }
}

fn check_vertex_links(sp: &SplitPresentation, darts: &Darts, report: &mut ValidationReport) {
    let (class, _) = darts.vertex_classes();
    let mut per_label: BTreeMap<Label, BTreeSet<usize>> = BTreeMap::new();
    for (side, &c) in darts.sides.iter().zip(&class) {
        if let Some(label) = sp.side_start(*side) {
            per_label.entry(label).or_default().insert(c);
        }
    }
    for (label, classes) in per_label {
        if classes.len() != 1 {
            report.push(
                Check::VertexLinks,
                format!("label {label} is split over {} distinct points of the glued surface", classes.len()),
                vec![label as usize],
            );
        }
    }
}

fn check_connectivity(sp: &SplitPresentation, report: &mut ValidationReport) {
    let n = sp.pieces.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut host: BTreeMap<_, usize> = BTreeMap::new();
    for (pi, piece) in sp.pieces.iter().enumerate() {
        for side in piece.sides() {
            if let Some(&other) = host.get(&side.arc) {
                let (a, b) = (find(&mut parent, other), find(&mut parent, pi));
                parent[a] = b;
            } else {
                host.insert(side.arc, pi);
            }
        }
    }
    let roots: BTreeSet<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    if roots.len() > 1 {
        report.push(
            Check::Connectivity,
            format!("gluing has {} connected components", roots.len()),
            roots.into_iter().collect(),
        );
    }
}

fn check_partition(sp: &SplitPresentation, report: &mut ValidationReport) {
    let incident = sp.incident_labels();
    let mut interior: BTreeMap<Label, Vec<usize>> = BTreeMap::new();
    for (pi, piece) in sp.pieces.iter().enumerate() {
        for &label in &piece.interior_marked {
            interior.entry(label).or_default().push(pi);
        }
    }
    for label in sp.spec.labels() {
        let hosts = interior.get(&label).map(Vec::len).unwrap_or(0);
        let on_arc = incident.contains(&label);
        let detail = match (on_arc, hosts) {
            (true, 0) | (false, 1) => continue,
            (true, _) => format!("label {label} is an arc endpoint and also interior to a piece"),
            (false, 0) => format!("label {label} is neither an arc endpoint nor interior to a piece"),
            (false, k) => format!("label {label} is interior to {k} pieces"),
        };
        report.push(Check::DeltaPartition, detail, vec![label as usize]);
    }
}

/// `(V_a - E) + Σ (2 - 2h - b)`, which equals `2 - 2g` for a valid gluing.
fn euler_count(sp: &SplitPresentation) -> i64 {
    let vertices = sp.incident_labels().len() as i64;
    let edges = sp.arcs.len() as i64;
    let faces: i64 = sp
        .pieces
        .iter()
        .map(|p| 2 - 2 * p.genus as i64 - p.boundary_count() as i64)
        .sum();
    vertices - edges + faces
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub genus: i64,
    pub punctures: u32,
    pub incident: BTreeSet<Label>,
}

/// Recovers genus, puncture total and incident labels from the gluing alone.
pub fn derive_invariants(sp: &SplitPresentation) -> Result<Invariants> {
    if sp.arcs.is_empty() {
        return Err(Error::NoArcs);
    }
    let euler = euler_count(sp);
    if euler.rem_euclid(2) != 0 {
        return Err(Error::NonIntegerGenus { euler });
    }
    Ok(Invariants {
        genus: (2 - euler) / 2,
        punctures: sp.pieces.iter().map(|p| p.punctures).sum(),
        incident: sp.incident_labels(),
    })
}

pub fn rank(sp: &SplitPresentation) -> i64 {
    sp.arcs.len() as i64 - 1
}

/// Every decorated point is an arc endpoint and every piece is a disc or a
/// once-punctured disc.
pub fn fills_up(sp: &SplitPresentation) -> bool {
    sp.incident_labels().len() == sp.spec.m as usize
        && sp.pieces.iter().all(|p| {
            p.genus == 0 && p.boundary_count() == 1 && p.punctures <= 1 && p.interior_marked.is_empty()
        })
}

pub fn is_maximal(sp: &SplitPresentation) -> bool {
    sp.pieces.iter().all(|p| {
        matches!(classify_piece(p), PieceClass::Triangle | PieceClass::OncePuncturedMonogon)
    })
}
