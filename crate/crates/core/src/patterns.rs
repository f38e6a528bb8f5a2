//! Exact integer predicates for the eight four-point patterns that span at
//! most four distinct distances, and enumeration of such quadruples inside a
//! point set.
//!
//! Euclidean distances between lattice points are equal exactly when their
//! squared distances are, so everything here is integer arithmetic.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FpPoint;

/// A lattice point. Coordinates are signed so that differences and
/// transformed copies stay representable; sets owned by a [`PointSet`] are
/// confined to `[0, n)²`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: i32,
    pub y: i32,
}

impl GridPoint {
    #[inline]
    pub const fn new(x: i32, y: i32) -> Self {
        GridPoint { x, y }
    }
}

impl fmt::Debug for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(i32, i32)> for GridPoint {
    fn from((x, y): (i32, i32)) -> Self {
        GridPoint { x, y }
    }
}

#[inline]
pub fn squared_distance(p: GridPoint, q: GridPoint) -> i64 {
    let dx = i64::from(p.x) - i64::from(q.x);
    let dy = i64::from(p.y) - i64::from(q.y);
    dx * dx + dy * dy
}

#[inline]
fn cross(o: GridPoint, a: GridPoint, b: GridPoint) -> i64 {
    let (ax, ay) = (i64::from(a.x) - i64::from(o.x), i64::from(a.y) - i64::from(o.y));
    let (bx, by) = (i64::from(b.x) - i64::from(o.x), i64::from(b.y) - i64::from(o.y));
    ax * by - ay * bx
}

#[inline]
pub fn collinear(p: GridPoint, q: GridPoint, r: GridPoint) -> bool {
    cross(p, q, r) == 0
}

/// Distinct lattice points inside the `n × n` grid, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSet {
    n: u32,
    points: Vec<GridPoint>,
}

impl PointSet {
    pub fn new(n: u32, points: impl IntoIterator<Item = GridPoint>) -> Result<Self> {
        let mut points: Vec<GridPoint> = points.into_iter().collect();
        for p in &points {
            if p.x < 0 || p.y < 0 || p.x as u32 >= n || p.y as u32 >= n {
                return Err(Error::OutOfGrid { x: p.x.into(), y: p.y.into(), n });
            }
        }
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint { x: w[0].x.into(), y: w[0].y.into() });
        }
        Ok(PointSet { n, points })
    }

    pub fn empty(n: u32) -> Self {
        PointSet { n, points: Vec::new() }
    }

    /// Every point of the grid.
    pub fn full_grid(n: u32) -> Self {
        let n_i = n as i32;
        let points = (0..n_i).flat_map(|x| (0..n_i).map(move |y| GridPoint::new(x, y))).collect();
        PointSet { n, points }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = &GridPoint> {
        self.points.iter()
    }

    pub fn contains(&self, p: GridPoint) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    pub fn is_subset_of(&self, other: &PointSet) -> bool {
        self.points.iter().all(|&p| other.contains(p))
    }

    /// Keeps the points for which `keep` returns true, in sorted order.
    pub fn filtered(&self, mut keep: impl FnMut(GridPoint) -> bool) -> PointSet {
        PointSet { n: self.n, points: self.points.iter().copied().filter(|&p| keep(p)).collect() }
    }
}

/// Four distinct points in lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Quadruple([GridPoint; 4]);

impl Quadruple {
    /// Sorts the points; `None` if any two coincide.
    pub fn new(a: GridPoint, b: GridPoint, c: GridPoint, d: GridPoint) -> Option<Self> {
        let mut pts = [a, b, c, d];
        pts.sort_unstable();
        if pts.windows(2).any(|w| w[0] == w[1]) {
            None
        } else {
            Some(Quadruple(pts))
        }
    }

    pub fn from_slice(pts: &[GridPoint]) -> Option<Self> {
        match pts {
            [a, b, c, d] => Quadruple::new(*a, *b, *c, *d),
            _ => None,
        }
    }

    #[inline]
    pub(crate) fn from_sorted(pts: [GridPoint; 4]) -> Self {
        debug_assert!(pts.windows(2).all(|w| w[0] < w[1]));
        Quadruple(pts)
    }

    pub fn points(&self) -> &[GridPoint; 4] {
        &self.0
    }
}

/// The eight forbidden patterns, in the customary π1…π8 order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum PatternKind {
    /// π1: equilateral triangle plus any fourth point.
    EquilateralTriangle = 0,
    /// π2: parallelogram `{P, P+H, P+K, P+H+K}`.
    Parallelogram = 1,
    /// π3: isosceles trapezoid, rectangles and symmetric collinear rows included.
    IsoscelesTrapezoid = 2,
    /// π4: three equal edges from a common point.
    Star = 3,
    /// π5: a path of three equal edges.
    Path = 4,
    /// π6: kite.
    Kite = 5,
    /// π7: isosceles triangle plus an edge at a base endpoint as long as the base.
    IsoscelesBaseEdge = 6,
    /// π8: isosceles triangle plus an edge at the apex as long as the base.
    IsoscelesApexEdge = 7,
}

impl PatternKind {
    pub const ALL: [PatternKind; 8] = [
        PatternKind::EquilateralTriangle,
        PatternKind::Parallelogram,
        PatternKind::IsoscelesTrapezoid,
        PatternKind::Star,
        PatternKind::Path,
        PatternKind::Kite,
        PatternKind::IsoscelesBaseEdge,
        PatternKind::IsoscelesApexEdge,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// `"pi1"` … `"pi8"`.
    pub fn label(self) -> &'static str {
        ["pi1", "pi2", "pi3", "pi4", "pi5", "pi6", "pi7", "pi8"][self.index()]
    }

    pub fn from_label(label: &str) -> Option<Self> {
        PatternKind::ALL.into_iter().find(|k| k.label() == label)
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Subset of the eight patterns, one bit per kind.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternSet(u8);

impl PatternSet {
    pub const EMPTY: PatternSet = PatternSet(0);

    pub fn from_bits(bits: u8) -> Self {
        PatternSet(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn insert(&mut self, kind: PatternKind) {
        self.0 |= 1 << kind.index();
    }

    pub fn contains(self, kind: PatternKind) -> bool {
        self.0 & (1 << kind.index()) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = PatternKind> {
        PatternKind::ALL.into_iter().filter(move |&k| self.contains(k))
    }

    pub fn labels(self) -> Vec<&'static str> {
        self.iter().map(PatternKind::label).collect()
    }
}

impl FromIterator<PatternKind> for PatternSet {
    fn from_iter<I: IntoIterator<Item = PatternKind>>(iter: I) -> Self {
        let mut set = PatternSet::EMPTY;
        for k in iter {
            set.insert(k);
        }
        set
    }
}

impl fmt::Debug for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(PatternKind::label)).finish()
    }
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

const TRIPLES: [(usize, usize, usize); 4] = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)];

/// The three ways to split four indices into two pairs.
const PAIRINGS: [[usize; 4]; 3] = [[0, 3, 1, 2], [0, 2, 1, 3], [0, 1, 2, 3]];

const PERMUTATIONS: [[usize; 4]; 24] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [1, 0, 3, 2],
    [1, 2, 0, 3],
    [1, 2, 3, 0],
    [1, 3, 0, 2],
    [1, 3, 2, 0],
    [2, 0, 1, 3],
    [2, 0, 3, 1],
    [2, 1, 0, 3],
    [2, 1, 3, 0],
    [2, 3, 0, 1],
    [2, 3, 1, 0],
    [3, 0, 1, 2],
    [3, 0, 2, 1],
    [3, 1, 0, 2],
    [3, 1, 2, 0],
    [3, 2, 0, 1],
    [3, 2, 1, 0],
];

#[inline]
fn sorted_distances(pts: &[GridPoint; 4]) -> [i64; 6] {
    let mut d = PAIRS.map(|(i, j)| squared_distance(pts[i], pts[j]));
    d.sort_unstable();
    d
}

/// The six pairwise squared distances, ascending.
pub fn distance_multiset(q: &Quadruple) -> [i64; 6] {
    sorted_distances(q.points())
}

#[inline]
fn distinct_count(sorted: &[i64; 6]) -> usize {
    1 + sorted.windows(2).filter(|w| w[0] != w[1]).count()
}

/// True when the quadruple spans at most four distinct distances.
#[inline]
pub fn is_forbidden(q: &Quadruple) -> bool {
    spans_few_distances(q.points())
}

#[inline]
pub(crate) fn spans_few_distances(pts: &[GridPoint; 4]) -> bool {
    distinct_count(&sorted_distances(pts)) <= 4
}

/// Points that can be added and subtracted as vectors, so the additive
/// parallelogram test runs both on the lattice and in F_p².
pub trait VectorPoint: Copy + Eq + Ord + fmt::Debug {
    fn plus(self, other: Self) -> Self;
    fn minus(self, other: Self) -> Self;
}

impl VectorPoint for GridPoint {
    fn plus(self, o: Self) -> Self {
        GridPoint::new(self.x + o.x, self.y + o.y)
    }
    fn minus(self, o: Self) -> Self {
        GridPoint::new(self.x - o.x, self.y - o.y)
    }
}

impl VectorPoint for FpPoint {
    fn plus(self, o: Self) -> Self {
        FpPoint { x: self.x + o.x, y: self.y + o.y }
    }
    fn minus(self, o: Self) -> Self {
        FpPoint { x: self.x - o.x, y: self.y - o.y }
    }
}

/// Finds `(H, K)` with the four points equal to `{P, P+H, P+K, P+H+K}`.
///
/// Such a labeling exists exactly when some split into two pairs has equal
/// vector sums. `P` is taken as the smallest point; the witness vectors are
/// ordered by `(y, x)` for grid points.
pub fn additive_parallelogram<T: VectorPoint>(pts: &[T; 4]) -> Option<(T, T)> {
    for [a, c, b, d] in PAIRINGS {
        if pts[a].plus(pts[c]) == pts[b].plus(pts[d]) {
            // Base at the smallest point; its partner is the far corner.
            let (base, far) = if pts[a].min(pts[c]) < pts[b].min(pts[d]) {
                (pts[a].min(pts[c]), pts[a].max(pts[c]))
            } else {
                (pts[b].min(pts[d]), pts[b].max(pts[d]))
            };
            let (s1, s2) = if base == pts[a] || base == pts[c] { (pts[b], pts[d]) } else { (pts[a], pts[c]) };
            debug_assert_eq!(s1.plus(s2), base.plus(far));
            return Some((s1.minus(base), s2.minus(base)));
        }
    }
    None
}

/// Grid witness for the parallelogram pattern.
pub fn is_additive_parallelogram(q: &Quadruple) -> Option<(GridPoint, GridPoint)> {
    additive_parallelogram(q.points()).map(|(h, k)| if (h.y, h.x) <= (k.y, k.x) { (h, k) } else { (k, h) })
}

/// Every pattern the quadruple matches.
pub fn classify(q: &Quadruple) -> PatternSet {
    classify_points(q.points())
}

/// As [`classify`], for four distinct points in any order.
pub fn classify_points(pts: &[GridPoint; 4]) -> PatternSet {
    use PatternKind::*;

    let mut d = [[0i64; 4]; 4];
    for (i, j) in PAIRS {
        let v = squared_distance(pts[i], pts[j]);
        d[i][j] = v;
        d[j][i] = v;
    }
    let mut set = PatternSet::EMPTY;

    // Every pattern needs at least two equal distances.
    let mut all = PAIRS.map(|(i, j)| d[i][j]);
    all.sort_unstable();
    if all.windows(2).all(|w| w[0] != w[1]) {
        return set;
    }

    for (i, j, k) in TRIPLES {
        if d[i][j] == d[j][k] && d[i][j] == d[i][k] && !collinear(pts[i], pts[j], pts[k]) {
            set.insert(EquilateralTriangle);
        }
    }

    if additive_parallelogram(pts).is_some() {
        set.insert(Parallelogram);
    }

    for (c, row) in d.iter().enumerate() {
        let others: Vec<usize> = (0..4).filter(|&i| i != c).collect();
        if row[others[0]] == row[others[1]] && row[others[1]] == row[others[2]] {
            set.insert(Star);
        }
    }

    let all_collinear = collinear(pts[0], pts[1], pts[2]) && collinear(pts[0], pts[1], pts[3]);
    if all_collinear {
        // Along a line lexicographic order is positional order.
        let mut s = *pts;
        s.sort_unstable();
        if s[0].plus(s[3]) == s[1].plus(s[2]) {
            set.insert(IsoscelesTrapezoid);
        }
    }

    for [a, b, c, e] in PERMUTATIONS {
        if !all_collinear && d[a][e] == d[b][c] && d[a][c] == d[b][e] && parallel(pts[a], pts[b], pts[e], pts[c]) {
            set.insert(IsoscelesTrapezoid);
        }
        if d[a][b] == d[b][c] && d[b][c] == d[c][e] {
            set.insert(Path);
        }
        if d[a][b] == d[a][e] && d[c][b] == d[c][e] {
            set.insert(Kite);
        }
        if d[c][a] == d[c][b] {
            if d[e][a] == d[a][b] {
                set.insert(IsoscelesBaseEdge);
            }
            if d[e][c] == d[a][b] {
                set.insert(IsoscelesApexEdge);
            }
        }
    }
    set
}

/// Segment `ab` parallel to segment `cd`.
#[inline]
fn parallel(a: GridPoint, b: GridPoint, c: GridPoint, d: GridPoint) -> bool {
    let (ux, uy) = (i64::from(b.x - a.x), i64::from(b.y - a.y));
    let (vx, vy) = (i64::from(d.x - c.x), i64::from(d.y - c.y));
    ux * vy - uy * vx == 0
}

/// Four points on a common circle. Requires that no three are collinear
/// (a line is not a circle); otherwise the in-circle determinant decides.
///
/// With coordinates below 2¹⁶ the translated 3×3 determinant has entries
/// below 2¹⁷ and 2³⁴, so every product fits comfortably in `i128`.
pub fn concyclic(q: &Quadruple) -> bool {
    let p = q.points();
    if TRIPLES.iter().any(|&(i, j, k)| collinear(p[i], p[j], p[k])) {
        return false;
    }
    incircle_determinant(p[0], p[1], p[2], p[3]) == 0
}

fn incircle_determinant(o: GridPoint, a: GridPoint, b: GridPoint, c: GridPoint) -> i128 {
    let row = |p: GridPoint| {
        let dx = i128::from(p.x) - i128::from(o.x);
        let dy = i128::from(p.y) - i128::from(o.y);
        (dx, dy, dx * dx + dy * dy)
    };
    let (ax, ay, aw) = row(a);
    let (bx, by, bw) = row(b);
    let (cx, cy, cw) = row(c);
    ax * (by * cw - bw * cy) - ay * (bx * cw - bw * cx) + aw * (bx * cy - by * cx)
}

/// First collinear triple of the set, if any.
pub fn find_collinear_triple(set: &PointSet) -> Option<[GridPoint; 3]> {
    let pts = set.points();
    (0..pts.len()).into_par_iter().find_map_first(|i| {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                if collinear(pts[i], pts[j], pts[k]) {
                    return Some([pts[i], pts[j], pts[k]]);
                }
            }
        }
        None
    })
}

/// All concyclic quadruples of the set, in canonical order.
pub fn concyclic_quadruples(set: &PointSet) -> Vec<Quadruple> {
    let pts = set.points();
    let m = pts.len();
    (0..m)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = Vec::new();
            for j in i + 1..m {
                for k in j + 1..m {
                    if collinear(pts[i], pts[j], pts[k]) {
                        continue;
                    }
                    for l in k + 1..m {
                        let q = Quadruple::from_sorted([pts[i], pts[j], pts[k], pts[l]]);
                        if concyclic(&q) {
                            out.push(q);
                        }
                    }
                }
            }
            out
        })
        .collect()
}

/// Number of additive parallelograms, by grouping point pairs on their
/// vector sum. A parallelogram has exactly one pairing with equal sums, so
/// each is counted once.
pub fn count_parallelograms(set: &PointSet) -> u64 {
    let pts = set.points();
    let mut sums: HashMap<GridPoint, u64> = HashMap::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            *sums.entry(pts[i].plus(pts[j])).or_default() += 1;
        }
    }
    sums.values().map(|&m| m * m.saturating_sub(1) / 2).sum()
}

/// Per-pattern tallies over a collection of quadruples. A quadruple adds one
/// to every pattern it matches and one to `forbidden_total`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "CountsRecord", into = "CountsRecord")]
pub struct PatternCounts {
    counts: [u64; 8],
    pub forbidden_total: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CountsRecord {
    pi1: u64,
    pi2: u64,
    pi3: u64,
    pi4: u64,
    pi5: u64,
    pi6: u64,
    pi7: u64,
    pi8: u64,
    forbidden_total: u64,
}

impl From<CountsRecord> for PatternCounts {
    fn from(r: CountsRecord) -> Self {
        PatternCounts {
            counts: [r.pi1, r.pi2, r.pi3, r.pi4, r.pi5, r.pi6, r.pi7, r.pi8],
            forbidden_total: r.forbidden_total,
        }
    }
}

impl From<PatternCounts> for CountsRecord {
    fn from(c: PatternCounts) -> Self {
        let [pi1, pi2, pi3, pi4, pi5, pi6, pi7, pi8] = c.counts;
        CountsRecord { pi1, pi2, pi3, pi4, pi5, pi6, pi7, pi8, forbidden_total: c.forbidden_total }
    }
}

impl PatternCounts {
    pub fn tally(found: &[(Quadruple, PatternSet)]) -> Self {
        let mut c = PatternCounts::default();
        for (_, set) in found {
            c.add(*set);
        }
        c
    }

    /// Records one forbidden quadruple.
    #[inline]
    pub fn add(&mut self, set: PatternSet) {
        self.forbidden_total += 1;
        for k in set.iter() {
            self.counts[k.index()] += 1;
        }
    }

    pub fn merge(mut self, other: PatternCounts) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.forbidden_total += other.forbidden_total;
        self
    }

    pub fn get(&self, kind: PatternKind) -> u64 {
        self.counts[kind.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (PatternKind, u64)> + '_ {
        PatternKind::ALL.into_iter().map(|k| (k, self.get(k)))
    }
}

/// Candidate strategy for [`enumerate_forbidden`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    /// Test every 4-subset.
    Exhaustive,
    /// Only 4-subsets that contain two point pairs at equal distance.
    Pruned,
}

/// Forbidden quadruples of the set with their patterns, in canonical order.
pub fn enumerate_forbidden(set: &PointSet, mode: ScanMode) -> Vec<(Quadruple, PatternSet)> {
    match mode {
        ScanMode::Exhaustive => for_each_index_quad(set.points()),
        ScanMode::Pruned => pruned_scan(set.points()),
    }
}

/// Number of forbidden quadruples, without classifying them.
pub fn count_forbidden(set: &PointSet) -> u64 {
    let pts = set.points();
    let m = pts.len();
    (0..m)
        .into_par_iter()
        .map(|i| {
            let mut count = 0;
            for j in i + 1..m {
                for k in j + 1..m {
                    for l in k + 1..m {
                        if spans_few_distances(&[pts[i], pts[j], pts[k], pts[l]]) {
                            count += 1;
                        }
                    }
                }
            }
            count
        })
        .sum()
}

fn for_each_index_quad(pts: &[GridPoint]) -> Vec<(Quadruple, PatternSet)> {
    let m = pts.len();
    (0..m)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = Vec::new();
            for j in i + 1..m {
                for k in j + 1..m {
                    for l in k + 1..m {
                        let quad = [pts[i], pts[j], pts[k], pts[l]];
                        if spans_few_distances(&quad) {
                            let q = Quadruple::from_sorted(quad);
                            out.push((q, classify(&q)));
                        }
                    }
                }
            }
            out
        })
        .collect()
}

/// Six distances with at most four values force two pairs at a common
/// distance. Candidates come from every two equal-distance pairs: disjoint
/// pairs give the quadruple directly, pairs sharing a point give a triple
/// that is completed by every remaining point.
fn pruned_scan(pts: &[GridPoint]) -> Vec<(Quadruple, PatternSet)> {
    let m = pts.len();
    let mut by_distance: HashMap<i64, Vec<(u32, u32)>> = HashMap::new();
    for i in 0..m {
        for j in i + 1..m {
            by_distance.entry(squared_distance(pts[i], pts[j])).or_default().push((i as u32, j as u32));
        }
    }
    let groups: Vec<Vec<(u32, u32)>> = by_distance.into_values().filter(|g| g.len() >= 2).collect();

    let mut candidates: Vec<[u32; 4]> = groups
        .par_iter()
        .flat_map_iter(|group| {
            let mut out = Vec::new();
            for (x, &(a, b)) in group.iter().enumerate() {
                for &(c, d) in &group[x + 1..] {
                    let mut quad = [a, b, c, d];
                    quad.sort_unstable();
                    if quad.windows(2).all(|w| w[0] != w[1]) {
                        out.push(quad);
                        continue;
                    }
                    let mut t = quad.to_vec();
                    t.dedup();
                    for w in 0..m as u32 {
                        if !t.contains(&w) {
                            let mut q = [t[0], t[1], t[2], w];
                            q.sort_unstable();
                            out.push(q);
                        }
                    }
                }
            }
            out
        })
        .collect();
    candidates.par_sort_unstable();
    candidates.dedup();

    candidates
        .into_par_iter()
        .filter_map(|[i, j, k, l]| {
            let quad = [pts[i as usize], pts[j as usize], pts[k as usize], pts[l as usize]];
            spans_few_distances(&quad).then(|| {
                let q = Quadruple::from_sorted(quad);
                (q, classify(&q))
            })
        })
        .collect()
}
