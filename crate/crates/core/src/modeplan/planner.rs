//! Passage-aware grid search for assembly-mode-changing paths.
//!
//! The box is gridded in `(x, y, phi)`. Edges between neighbouring nodes are
//! admissible only when `D~` keeps one sign along them, so the grid alone never
//! leaves a region of the singularity complement. Regions are joined through
//! explicit passage triplets `P- -> S -> P+`: a short straight segment at fixed
//! orientation through the serial point `S` of a passage-safe leg, along the
//! gradient of `D~`. Orientation is a full search dimension because two poses
//! with equal leg lengths cannot share an orientation generically, so no
//! fixed-orientation path changes assembly mode.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::f64::consts::TAU;

use log::{debug, info, warn};
use serde::{Deserialize, Serialize};

use super::certificate::{verify_mode_change_with, ModeChangeCertificate, Verdict};
use super::crossings::{det_sign, detect_crossings_with, CrossingKind};
use super::path::{interpolate, WorkspacePath, DEFAULT_SAMPLES_PER_SEGMENT};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::geometry::{Pose, RobotGeometry, Vec2};
use crate::kinematics::{inverse_kinematics, solve_fk};
use crate::singularity::{
    classify_configuration_with, is_architecturally_singular, passage_safety, unnormalized_determinant,
    ConfigurationKind,
};

/// Interior subsamples checked on every grid edge.
const EDGE_SUBSAMPLES: usize = 8;
/// Passage triplet half-length as a fraction of the smaller planar cell size.
const PASSAGE_HALF_LENGTH: f64 = 0.25;
/// Dense check spacing for shortcut segments (×L, pose distance).
const SHORTCUT_SPACING: f64 = 2e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
    pub phi0: f64,
    pub phi1: f64,
}

impl SearchBox {
    /// `[-L, 2L]²` measured from the lower-left corner of the base, full turn in `phi`.
    pub fn around(geom: &RobotGeometry) -> Self {
        let l = geom.characteristic_scale();
        let b = geom.base();
        let ox = b.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
        let oy = b.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
        Self { x0: ox - l, y0: oy - l, x1: ox + 2.0 * l, y1: oy + 2.0 * l, phi0: 0.0, phi1: TAU }
    }

    pub fn validate(&self) -> Result<()> {
        let v = [self.x0, self.y0, self.x1, self.y1, self.phi0, self.phi1];
        if !v.iter().all(|x| x.is_finite()) || self.x1 <= self.x0 || self.y1 <= self.y0 || self.phi1 <= self.phi0 {
            return Err(Error::Config(format!("invalid search box {self:?}")));
        }
        Ok(())
    }

    fn periodic(&self) -> bool {
        self.phi1 - self.phi0 >= TAU - 1e-12
    }

    /// Orientation offset from `phi0` in `[0, 2pi)`, if inside the box.
    fn phi_offset(&self, phi: f64) -> Option<f64> {
        let off = (phi - self.phi0).rem_euclid(TAU);
        (self.periodic() || off <= self.phi1 - self.phi0 + 1e-12).then_some(off)
    }

    pub fn contains(&self, pose: &Pose) -> bool {
        pose.x >= self.x0 && pose.x <= self.x1 && pose.y >= self.y0 && pose.y <= self.y1 && self.phi_offset(pose.phi).is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannerConfig {
    /// Defaults to [`SearchBox::around`] the robot.
    pub search_box: Option<SearchBox>,
    pub resolution: [usize; 3],
    pub tolerances: Tolerances,
    pub samples_per_segment: usize,
    /// Searches rerun after excluding an edge that failed final verification.
    pub max_repairs: usize,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            search_box: None,
            resolution: [64, 64, 64],
            tolerances: Tolerances::default(),
            samples_per_segment: DEFAULT_SAMPLES_PER_SEGMENT,
            max_repairs: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub path: WorkspacePath,
    pub target: Pose,
    pub certificate: ModeChangeCertificate,
    /// Nodes settled by the search, summed over repair rounds.
    pub explored: usize,
}

struct Grid {
    bx: SearchBox,
    n: [usize; 3],
    step: [f64; 3],
    periodic: bool,
}

impl Grid {
    fn new(bx: SearchBox, res: [usize; 3]) -> Result<Self> {
        if res.iter().any(|&r| r < 2) {
            return Err(Error::Config(format!("grid resolution must be at least 2 per axis, got {res:?}")));
        }
        let periodic = bx.periodic();
        let step = [
            (bx.x1 - bx.x0) / (res[0] - 1) as f64,
            (bx.y1 - bx.y0) / (res[1] - 1) as f64,
            if periodic { TAU / res[2] as f64 } else { (bx.phi1 - bx.phi0) / (res[2] - 1) as f64 },
        ];
        Ok(Self { bx, n: res, step, periodic })
    }

    fn len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    fn id(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.n[1] + j) * self.n[0] + i
    }

    fn ijk(&self, id: usize) -> [usize; 3] {
        [id % self.n[0], (id / self.n[0]) % self.n[1], id / (self.n[0] * self.n[1])]
    }

    fn pose(&self, id: usize) -> Pose {
        let [i, j, k] = self.ijk(id);
        Pose::new(
            self.bx.x0 + i as f64 * self.step[0],
            self.bx.y0 + j as f64 * self.step[1],
            self.bx.phi0 + k as f64 * self.step[2],
        )
    }

    fn neighbors(&self, id: usize, out: &mut Vec<usize>) {
        let [i, j, k] = self.ijk(id);
        if i > 0 {
            out.push(self.id(i - 1, j, k));
        }
        if i + 1 < self.n[0] {
            out.push(self.id(i + 1, j, k));
        }
        if j > 0 {
            out.push(self.id(i, j - 1, k));
        }
        if j + 1 < self.n[1] {
            out.push(self.id(i, j + 1, k));
        }
        let nk = self.n[2];
        if self.periodic {
            out.push(self.id(i, j, (k + nk - 1) % nk));
            out.push(self.id(i, j, (k + 1) % nk));
        } else {
            if k > 0 {
                out.push(self.id(i, j, k - 1));
            }
            if k + 1 < nk {
                out.push(self.id(i, j, k + 1));
            }
        }
    }

    /// Grid nodes in the block of `2 * reach` indices per axis around `pose`
    /// (in the layer `layer` only, when given).
    fn block(&self, pose: &Pose, reach: isize, layer: Option<usize>) -> Vec<usize> {
        let fx = ((pose.x - self.bx.x0) / self.step[0]).floor() as isize;
        let fy = ((pose.y - self.bx.y0) / self.step[1]).floor() as isize;
        let off = self.bx.phi_offset(pose.phi).unwrap_or(0.0);
        let fk = (off / self.step[2]).floor() as isize;
        let nk = self.n[2] as isize;
        let mut ks: Vec<usize> = match layer {
            Some(k) => vec![k],
            None => (fk - reach + 1..=fk + reach)
                .filter_map(|k| {
                    if self.periodic {
                        Some(k.rem_euclid(nk) as usize)
                    } else {
                        (0..nk).contains(&k).then_some(k as usize)
                    }
                })
                .collect(),
        };
        ks.sort_unstable();
        ks.dedup();
        let mut out = Vec::new();
        for &k in &ks {
            for j in fy - reach + 1..=fy + reach {
                for i in fx - reach + 1..=fx + reach {
                    if (0..self.n[0] as isize).contains(&i) && (0..self.n[1] as isize).contains(&j) {
                        out.push(self.id(i as usize, j as usize, k));
                    }
                }
            }
        }
        out
    }
}

/// Graph of grid nodes plus extra nodes (passage triplets, start, target).
struct Graph<'a> {
    geom: &'a RobotGeometry,
    grid: Grid,
    scale: f64,
    signs: Vec<i8>,
    extra_poses: Vec<Pose>,
    /// Links with an admissibility already established (passage triplets).
    trusted: BTreeMap<usize, Vec<usize>>,
    /// Links to be checked for sign constancy when relaxed.
    lazy: BTreeMap<usize, Vec<usize>>,
    bad: BTreeSet<(usize, usize)>,
}

impl<'a> Graph<'a> {
    fn pose(&self, id: usize) -> Pose {
        if id < self.grid.len() {
            self.grid.pose(id)
        } else {
            self.extra_poses[id - self.grid.len()]
        }
    }

    fn sign(&self, id: usize) -> i8 {
        if id < self.grid.len() {
            self.signs[id]
        } else {
            det_sign(self.geom, &self.pose(id))
        }
    }

    fn add_node(&mut self, pose: Pose) -> usize {
        self.extra_poses.push(pose);
        self.grid.len() + self.extra_poses.len() - 1
    }

    fn link(map: &mut BTreeMap<usize, Vec<usize>>, a: usize, b: usize) {
        map.entry(a).or_default().push(b);
        map.entry(b).or_default().push(a);
    }

    fn edge_key(a: usize, b: usize) -> (usize, usize) {
        (a.min(b), a.max(b))
    }

    /// `D~` keeps one nonzero sign at both ends and `samples` interior points.
    fn sign_constant(&self, a: &Pose, b: &Pose, sa: i8, samples: usize) -> bool {
        if sa == 0 {
            return false;
        }
        (1..=samples + 1).all(|s| det_sign(self.geom, &interpolate(a, b, s as f64 / (samples + 1) as f64)) == sa)
    }

    fn admissible(&self, a: usize, b: usize) -> bool {
        if self.bad.contains(&Self::edge_key(a, b)) {
            return false;
        }
        let sa = self.sign(a);
        sa != 0 && sa == self.sign(b) && self.sign_constant(&self.pose(a), &self.pose(b), sa, EDGE_SUBSAMPLES)
    }
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest admissible node sequence from `start` to `goal`, and the number of settled nodes.
fn dijkstra(g: &Graph, start: usize, goal: usize) -> (Option<Vec<usize>>, usize) {
    let total = g.grid.len() + g.extra_poses.len();
    let mut dist = vec![f64::INFINITY; total];
    let mut prev = vec![usize::MAX; total];
    let mut done = vec![false; total];
    let mut heap = BinaryHeap::new();
    dist[start] = 0.0;
    heap.push(Entry(0.0, start));
    let mut explored = 0;
    let mut nb = Vec::with_capacity(8);
    while let Some(Entry(d, u)) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        explored += 1;
        if u == goal {
            break;
        }
        let pu = g.pose(u);
        let mut relax = |v: usize, trusted: bool, heap: &mut BinaryHeap<Entry>| {
            if done[v] {
                return;
            }
            if !trusted && !g.admissible(u, v) {
                return;
            }
            if trusted && g.bad.contains(&Graph::edge_key(u, v)) {
                return;
            }
            let nd = d + pu.distance(&g.pose(v), g.scale);
            if nd < dist[v] {
                dist[v] = nd;
                prev[v] = u;
                heap.push(Entry(nd, v));
            }
        };
        nb.clear();
        if u < g.grid.len() {
            g.grid.neighbors(u, &mut nb);
        }
        for &v in &nb {
            relax(v, false, &mut heap);
        }
        if let Some(vs) = g.lazy.get(&u) {
            for &v in vs {
                relax(v, false, &mut heap);
            }
        }
        if let Some(vs) = g.trusted.get(&u) {
            for &v in vs {
                relax(v, true, &mut heap);
            }
        }
    }
    if !done[goal] {
        return (None, explored);
    }
    let mut seq = vec![goal];
    while *seq.last().unwrap() != start {
        seq.push(prev[*seq.last().unwrap()]);
    }
    seq.reverse();
    (Some(seq), explored)
}

/// Central-difference gradient of `D~` in the plane (exact for a quadratic).
fn det_gradient(geom: &RobotGeometry, p: Vec2, phi: f64) -> Vec2 {
    let e = 1e-4 * geom.characteristic_scale();
    let f = |x: f64, y: f64| unnormalized_determinant(geom, &Pose::new(x, y, phi));
    Vec2::new((f(p.x + e, p.y) - f(p.x - e, p.y)) / (2.0 * e), (f(p.x, p.y + e) - f(p.x, p.y - e)) / (2.0 * e))
}

/// Adds a validated passage triplet for every safe leg in every orientation layer.
fn add_passages(g: &mut Graph, safe: [bool; 3], tol: &Tolerances) -> usize {
    let h = PASSAGE_HALF_LENGTH * g.grid.step[0].min(g.grid.step[1]);
    let bx = g.grid.bx;
    let mut added = 0;
    for k in 0..g.grid.n[2] {
        let phi = bx.phi0 + k as f64 * g.grid.step[2];
        for leg in (0..3).filter(|&i| safe[i]) {
            let s = g.geom.serial_point(leg, phi);
            if s.x < bx.x0 || s.x > bx.x1 || s.y < bx.y0 || s.y > bx.y1 {
                continue;
            }
            let grad = det_gradient(g.geom, s, phi);
            if grad.norm() == 0.0 || !grad.norm().is_finite() {
                continue;
            }
            let n = grad / grad.norm();
            let minus = Pose::new(s.x - h * n.x, s.y - h * n.y, phi);
            let mid = Pose::new(s.x, s.y, phi);
            let plus = Pose::new(s.x + h * n.x, s.y + h * n.y, phi);
            if det_sign(g.geom, &minus) != -1 || det_sign(g.geom, &plus) != 1 {
                continue;
            }
            let Ok(seg) = WorkspacePath::new(vec![minus, mid, plus], 16) else { continue };
            let ev = detect_crossings_with(g.geom, &seg, tol);
            if ev.len() != 1 || ev[0].kind != CrossingKind::Passage || ev[0].leg != Some(leg as u8 + 1) {
                debug!("passage of leg {} at phi = {phi:.4} rejected: {ev:?}", leg + 1);
                continue;
            }
            let (im, is, ip) = (g.add_node(minus), g.add_node(mid), g.add_node(plus));
            Graph::link(&mut g.trusted, im, is);
            Graph::link(&mut g.trusted, is, ip);
            for end in [im, ip] {
                let pose = g.pose(end);
                for v in g.grid.block(&pose, 2, Some(k)) {
                    Graph::link(&mut g.lazy, end, v);
                }
            }
            added += 1;
        }
    }
    added
}

/// Target chosen among the other assembly modes of the start joints: the
/// farthest one on the other side of the singularity locus, else the farthest.
fn choose_target(geom: &RobotGeometry, start: &Pose, bx: &SearchBox, tol: &Tolerances) -> Result<Pose> {
    let l = geom.characteristic_scale();
    let joints = inverse_kinematics(geom, start, None);
    let set = solve_fk(geom, &joints)?;
    let s0 = det_sign(geom, start);
    let candidates: Vec<(Pose, f64, bool)> = set
        .poses()
        .into_iter()
        .filter(|p| p.distance(start, l) >= tol.mode_change_distance * l)
        .filter(|p| bx.contains(p) && classify_configuration_with(geom, p, tol).kind == ConfigurationKind::Regular)
        .map(|p| (p, p.distance(start, l), det_sign(geom, &p) == -s0))
        .collect();
    let farthest = |opposite: bool| {
        candidates
            .iter()
            .filter(|c| c.2 || !opposite)
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|c| c.0)
    };
    match farthest(true) {
        Some(p) => Ok(p),
        None => {
            let p = farthest(false).ok_or_else(|| {
                Error::InvalidTarget("the start joints admit no other regular assembly mode inside the box".into())
            })?;
            warn!("no assembly mode across the singularity locus; using the farthest one");
            Ok(p)
        }
    }
}

fn dedup_poses(poses: Vec<Pose>, scale: f64) -> Vec<Pose> {
    let mut out: Vec<Pose> = Vec::with_capacity(poses.len());
    for p in poses {
        if out.last().is_none_or(|q| q.distance(&p, scale) > 1e-9 * scale) {
            out.push(p);
        }
    }
    out
}

/// Greedy shortcutting between fixed anchors; passage triplets are kept verbatim.
fn simplify(g: &Graph, seq: &[usize]) -> Vec<Pose> {
    let extra = g.grid.len();
    let is_passage = |id: usize| id >= extra && g.trusted.contains_key(&id);
    let mut anchors: Vec<usize> = vec![0];
    for (k, &id) in seq.iter().enumerate().skip(1) {
        if is_passage(id) || k + 1 == seq.len() {
            anchors.push(k);
        }
    }
    anchors.dedup();
    let poses: Vec<Pose> = seq.iter().map(|&id| g.pose(id)).collect();
    let dense = |a: &Pose, b: &Pose| {
        let n = ((a.distance(b, g.scale) / (SHORTCUT_SPACING * g.scale)).ceil() as usize).max(EDGE_SUBSAMPLES);
        g.sign_constant(a, b, det_sign(g.geom, a), n)
    };
    let mut out = vec![poses[0]];
    for w in anchors.windows(2) {
        let (a, b) = (w[0], w[1]);
        if is_passage(seq[a]) && is_passage(seq[b]) && b == a + 1 {
            out.push(poses[b]);
            continue;
        }
        let mut i = a;
        while i < b {
            let mut j = b;
            while j > i + 1 && !dense(&poses[i], &poses[j]) {
                j -= 1;
            }
            out.push(poses[j]);
            i = j;
        }
    }
    out
}

/// Grid edge (or link) containing path parameter `t` of a path built from `seq`.
fn edge_at(seq: &[usize], t: f64) -> (usize, usize) {
    let n = seq.len() - 1;
    let k = ((t * n as f64).floor() as usize).min(n - 1);
    Graph::edge_key(seq[k], seq[k + 1])
}

pub fn plan_mode_change(geom: &RobotGeometry, start: &Pose, target: Option<&Pose>, cfg: &PlannerConfig) -> Result<Plan> {
    let tol = &cfg.tolerances;
    tol.validate()?;
    let l = geom.characteristic_scale();
    let arch = is_architecturally_singular(geom);
    if arch.singular {
        return Err(Error::ArchitecturalSingularity(arch.detail));
    }
    let safety = passage_safety(geom);
    if !safety.safe.iter().any(|s| *s) {
        return Err(Error::NoSafePassage);
    }
    let bx = cfg.search_box.unwrap_or_else(|| SearchBox::around(geom));
    bx.validate()?;
    if !bx.contains(start) {
        return Err(Error::InvalidStart(format!("{start:?} lies outside the search box")));
    }
    let kind = classify_configuration_with(geom, start, tol).kind;
    if kind != ConfigurationKind::Regular {
        return Err(Error::InvalidStart(format!("start configuration is {kind:?}")));
    }
    let target = match target {
        Some(t) => {
            if !bx.contains(t) {
                return Err(Error::InvalidTarget(format!("{t:?} lies outside the search box")));
            }
            let kind = classify_configuration_with(geom, t, tol).kind;
            if kind != ConfigurationKind::Regular {
                return Err(Error::InvalidTarget(format!("target configuration is {kind:?}")));
            }
            let a = inverse_kinematics(geom, start, None).squared();
            let b = inverse_kinematics(geom, t, None).squared();
            if (0..3).any(|i| (a[i] - b[i]).abs() > tol.joint_match * l * l) {
                return Err(Error::InvalidTarget("target leg lengths differ from the start's".into()));
            }
            if t.distance(start, l) < tol.mode_change_distance * l {
                return Err(Error::InvalidTarget("target coincides with start".into()));
            }
            *t
        }
        None => choose_target(geom, start, &bx, tol)?,
    };
    info!("planning from {start:?} to {target:?}");

    let grid = Grid::new(bx, cfg.resolution)?;
    let signs: Vec<i8> = (0..grid.len()).map(|id| det_sign(geom, &grid.pose(id))).collect();
    let mut g = Graph {
        geom,
        grid,
        scale: l,
        signs,
        extra_poses: Vec::new(),
        trusted: BTreeMap::new(),
        lazy: BTreeMap::new(),
        bad: BTreeSet::new(),
    };
    let passages = add_passages(&mut g, safety.safe, tol);
    info!("{passages} passage triplets");
    let s_id = g.add_node(*start);
    let t_id = g.add_node(target);
    for v in g.grid.block(start, 2, None) {
        Graph::link(&mut g.lazy, s_id, v);
    }
    for v in g.grid.block(&target, 2, None) {
        Graph::link(&mut g.lazy, t_id, v);
    }

    let mut explored = 0;
    for round in 0..=cfg.max_repairs {
        let (seq, n) = dijkstra(&g, s_id, t_id);
        explored += n;
        let Some(seq) = seq else {
            return Err(Error::NoPathFound { explored });
        };
        let raw = dedup_poses(seq.iter().map(|&id| g.pose(id)).collect(), l);
        let short = dedup_poses(simplify(&g, &seq), l);
        for (label, poses) in [("simplified", short), ("unsimplified", raw.clone())] {
            let path = WorkspacePath::new(poses, cfg.samples_per_segment)?;
            let cert = verify_mode_change_with(geom, &path, tol)?;
            if cert.verdict == Verdict::ChangedWithoutParallel {
                info!("{label} path with {} waypoints verified after {round} repairs", path.waypoints.len());
                return Ok(Plan { path, target, certificate: cert, explored });
            }
            debug!("{label} path rejected: {:?} {:?}", cert.verdict, cert.diagnostic);
        }
        // exclude the edges that carry offending events and search again
        let path = WorkspacePath::new(raw, cfg.samples_per_segment)?;
        let cert = verify_mode_change_with(geom, &path, tol)?;
        let offending: Vec<f64> = cert
            .events
            .iter()
            .filter(|e| e.kind != CrossingKind::Passage)
            .map(|e| e.t)
            .collect();
        let node_seq: Vec<usize> = {
            let mut out: Vec<usize> = Vec::new();
            for &id in &seq {
                if out.last().is_none_or(|&p| g.pose(p).distance(&g.pose(id), l) > 1e-9 * l) {
                    out.push(id);
                }
            }
            out
        };
        if offending.is_empty() {
            break;
        }
        for t in offending {
            let e = edge_at(&node_seq, t);
            warn!("excluding edge {e:?} after a {:?} verdict", cert.verdict);
            g.bad.insert(e);
        }
    }
    Err(Error::NoPathFound { explored })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures::reference;

    #[test]
    fn grid_indexing_round_trips() {
        let grid = Grid::new(SearchBox::around(&reference()), [5, 6, 7]).unwrap();
        for id in 0..grid.len() {
            let [i, j, k] = grid.ijk(id);
            assert_eq!(grid.id(i, j, k), id);
        }
        let mut nb = Vec::new();
        grid.neighbors(grid.id(0, 0, 0), &mut nb);
        assert_eq!(nb.len(), 4);
        assert!(nb.contains(&grid.id(0, 0, 6)));
    }

    #[test]
    fn default_box_for_reference() {
        let b = SearchBox::around(&reference());
        assert_eq!((b.x0, b.y0, b.x1, b.y1), (-10.0, -10.0, 20.0, 20.0));
    }

    #[test]
    fn similar_triangles_are_refused() {
        let g = reference();
        let b = g.base();
        let c = (b[0] + b[1] + b[2]) / 3.0;
        let sim = RobotGeometry::new(*b, b.map(|a| 0.5 * (a - c))).unwrap();
        let r = plan_mode_change(&sim, &Pose::new(0.0, 0.0, 0.0), None, &PlannerConfig::default());
        assert!(matches!(r, Err(Error::ArchitecturalSingularity(_))));
    }

    #[test]
    fn serial_start_is_refused() {
        let r = plan_mode_change(&reference(), &Pose::new(2.0, 1.0, 0.0), None, &PlannerConfig::default());
        assert!(matches!(r, Err(Error::InvalidStart(_))));
    }

    #[test]
    fn coarse_plan_on_reference() {
        let cfg = PlannerConfig { resolution: [32, 32, 32], ..Default::default() };
        let plan = plan_mode_change(&reference(), &Pose::new(0.0, 0.0, 0.0), None, &cfg).unwrap();
        assert_eq!(plan.certificate.verdict, Verdict::ChangedWithoutParallel);
        assert!(plan.certificate.count(CrossingKind::Passage) >= 1);
    }
}
