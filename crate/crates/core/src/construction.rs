//! The randomized pipeline: draw a non-degenerate parabola over F_p, cut it
//! down to the grid, thin it at random, and delete whatever forbidden
//! quadruples survive.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::distinct_distances;
use crate::error::{Error, Result};
use crate::field::{construction_prime, is_prime, AffineMap, Fp, FpPoint};
use crate::patterns::{
    concyclic_quadruples, count_forbidden, count_parallelograms, enumerate_forbidden, find_collinear_triple, GridPoint,
    PatternCounts, PointSet, Quadruple, ScanMode,
};
use crate::rng::{self, ExperimentRng};

/// Smallest grid the pipeline accepts.
pub const MIN_GRID: u32 = 16;

/// Degenerate draws tolerated by [`sample_params`] before giving up. A draw
/// is degenerate with probability about 1/p.
pub const MAX_PARAM_DRAWS: u32 = 1000;

/// Coefficients of the conic `(a·x + b·y)² = c·x + d·y + e` over F_p with
/// `a·d − b·c ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ParamsRecord", into = "ParamsRecord")]
pub struct ParabolaParams {
    p: u32,
    a: Fp,
    b: Fp,
    c: Fp,
    d: Fp,
    e: Fp,
}

/// Plain serialized form of [`ParabolaParams`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsRecord {
    pub p: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    pub e: u32,
}

impl TryFrom<ParamsRecord> for ParabolaParams {
    type Error = Error;
    fn try_from(r: ParamsRecord) -> Result<Self> {
        if [r.a, r.b, r.c, r.d, r.e].iter().any(|&v| v >= r.p) {
            return Err(Error::InvalidArgument(format!("coefficients must be reduced mod {}", r.p)));
        }
        ParabolaParams::new(r.p, [r.a, r.b, r.c, r.d, r.e].map(i64::from))
    }
}

impl From<ParabolaParams> for ParamsRecord {
    fn from(q: ParabolaParams) -> Self {
        let [a, b, c, d, e] = q.coefficients();
        ParamsRecord { p: q.p, a, b, c, d, e }
    }
}

impl ParabolaParams {
    /// Coefficients `[a, b, c, d, e]`, reduced mod `p`.
    pub fn new(p: u32, coeffs: [i64; 5]) -> Result<Self> {
        if p.is_multiple_of(2) || !is_prime(p.into()) {
            return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
        }
        let [a, b, c, d, e] = coeffs.map(|v| Fp::new(v, p));
        let params = ParabolaParams { p, a, b, c, d, e };
        if params.determinant().is_zero() {
            return Err(Error::InvalidArgument(format!("degenerate parameters {coeffs:?} mod {p}: ad - bc = 0")));
        }
        Ok(params)
    }

    /// `x² = y`.
    pub fn standard(p: u32) -> Result<Self> {
        ParabolaParams::new(p, [1, 0, 0, 1, 0])
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn coefficients(&self) -> [u32; 5] {
        [self.a, self.b, self.c, self.d, self.e].map(Fp::value)
    }

    pub fn determinant(&self) -> Fp {
        self.a * self.d - self.b * self.c
    }

    #[inline]
    pub fn contains(&self, pt: FpPoint) -> bool {
        let lin = self.a * pt.x + self.b * pt.y;
        lin * lin == self.c * pt.x + self.d * pt.y + self.e
    }

    #[inline]
    pub fn contains_grid(&self, pt: GridPoint) -> bool {
        self.contains(FpPoint::new(pt.x.into(), pt.y.into(), self.p))
    }

    /// All points of the conic in F_p², x-major. There are exactly `p`.
    pub fn solutions(&self) -> Vec<FpPoint> {
        FpPoint::all(self.p).filter(|&pt| self.contains(pt)).collect()
    }
}

impl fmt::Display for ParabolaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d, e] = self.coefficients();
        write!(f, "({a}x + {b}y)^2 = {c}x + {d}y + {e} mod {}", self.p)
    }
}

fn draw_quintuple(p: u32, rng: &mut impl Rng) -> [i64; 5] {
    [(); 5].map(|_| i64::from(rng.gen_range(0..p)))
}

/// Uniform over non-degenerate quintuples, by rejection.
pub fn sample_params(p: u32, rng: &mut impl Rng) -> Result<ParabolaParams> {
    if p.is_multiple_of(2) || !is_prime(p.into()) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    for _ in 0..MAX_PARAM_DRAWS {
        if let Ok(params) = ParabolaParams::new(p, draw_quintuple(p, rng)) {
            return Ok(params);
        }
    }
    Err(Error::SamplingExhausted(MAX_PARAM_DRAWS))
}

/// Grid points on the conic. Needs `p > 4n` so that the grid embeds in F_p²
/// without creating parallelograms mod p that are not parallelograms in Z².
pub fn build_set(n: u32, params: &ParabolaParams) -> Result<PointSet> {
    if u64::from(params.p) <= 4 * u64::from(n) {
        return Err(Error::InvalidArgument(format!("modulus {} must exceed 4n = {}", params.p, 4 * u64::from(n))));
    }
    let p = params.p;
    let mut points = Vec::new();
    for x in 0..n {
        let fx = Fp::new(x.into(), p);
        let ax = params.a * fx;
        let cx = params.c * fx + params.e;
        for y in 0..n {
            let fy = Fp::new(y.into(), p);
            let lin = ax + params.b * fy;
            if lin * lin == cx + params.d * fy {
                points.push(GridPoint::new(x as i32, y as i32));
            }
        }
    }
    PointSet::new(n, points)
}

/// Parameters of the image of the conic under `t`.
///
/// Substituting `v = M⁻¹(w − u)` turns `α·v` into `α′·w + f` with
/// `α′ = αM⁻¹`; the constant `f` is pushed into the right-hand side.
pub fn transport_params(params: &ParabolaParams, t: &AffineMap) -> Result<ParabolaParams> {
    let p = params.p;
    if t.modulus() != p {
        return Err(Error::InvalidArgument("affine map over a different field".into()));
    }
    let inv = t.invert();
    let [[n11, n12], [n21, n22]] = inv.linear();
    let [s, r] = inv.translation_part();
    // v = N·w + (s, r)
    let a2 = params.a * n11 + params.b * n21;
    let b2 = params.a * n12 + params.b * n22;
    let f = params.a * s + params.b * r;
    let c2 = params.c * n11 + params.d * n21;
    let d2 = params.c * n12 + params.d * n22;
    let e2 = params.e + params.c * s + params.d * r;
    let two = Fp::new(2, p);
    let c3 = c2 - two * f * a2;
    let d3 = d2 - two * f * b2;
    let e3 = e2 - f * f;
    ParabolaParams::new(p, [a2, b2, c3, d3, e3].map(|v| i64::from(v.value())))
}

/// Probability as an exact fraction `num/den` in `(0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u32,
    den: u32,
}

impl Ratio {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || den == 0 || num > den {
            return Err(Error::InvalidArgument(format!("probability {num}/{den} not in (0, 1]")));
        }
        Ok(Ratio { num, den })
    }

    pub fn num(&self) -> u32 {
        self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Accepts `"3/8"` or a decimal such as `"0.375"`.
impl FromStr for Ratio {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse probability {s:?}"));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            return Ratio::new(n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10u64.pow(frac.len() as u32);
        let frac_v: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int.checked_mul(den).and_then(|v| v.checked_add(frac_v)).ok_or_else(bad)?;
        let g = gcd(num, den);
        let (num, den) = (num / g.max(1), den / g.max(1));
        Ratio::new(u32::try_from(num).map_err(|_| bad())?, u32::try_from(den).map_err(|_| bad())?)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Serialize for Ratio {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Keeps each point independently with probability `keep`, in sorted order.
pub fn refine(set: &PointSet, keep: Ratio, rng: &mut impl Rng) -> PointSet {
    if keep.num == keep.den {
        return set.clone();
    }
    set.filtered(|_| rng.gen_range(0..keep.den) < keep.num)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeletionMode {
    /// Drop every point that lies in some forbidden quadruple.
    AllPoints,
    /// Repeatedly drop a point in the most surviving forbidden quadruples.
    Greedy,
}

impl FromStr for DeletionMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-points" => Ok(DeletionMode::AllPoints),
            "greedy" => Ok(DeletionMode::Greedy),
            _ => Err(Error::InvalidArgument(format!("unknown deletion mode {s:?}"))),
        }
    }
}

impl fmt::Display for DeletionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeletionMode::AllPoints => "all-points",
            DeletionMode::Greedy => "greedy",
        })
    }
}

/// Removes points until no forbidden quadruple is left.
///
/// Deleting points never creates forbidden quadruples, so one scan of the
/// input suffices for both modes. Greedy ties go to the smallest point.
pub fn delete_forbidden(set: &PointSet, mode: DeletionMode) -> PointSet {
    let forbidden: Vec<Quadruple> =
        enumerate_forbidden(set, ScanMode::Exhaustive).into_iter().map(|(q, _)| q).collect();
    delete_hitting(set, &forbidden, mode)
}

/// Removes points until no four of them are concyclic.
pub fn delete_concyclic(set: &PointSet, mode: DeletionMode) -> PointSet {
    delete_hitting(set, &concyclic_quadruples(set), mode)
}

/// Removes points of `set` so that none of `bad` survives intact.
fn delete_hitting(set: &PointSet, bad: &[Quadruple], mode: DeletionMode) -> PointSet {
    if bad.is_empty() {
        return set.clone();
    }
    let pts = set.points();
    let index_of = |p: &GridPoint| pts.binary_search(p).expect("quadruple drawn from the set");
    let quads: Vec<[usize; 4]> = bad.iter().map(|q| q.points().each_ref().map(index_of)).collect();

    let mut removed = vec![false; pts.len()];
    match mode {
        DeletionMode::AllPoints => {
            for q in &quads {
                for &i in q {
                    removed[i] = true;
                }
            }
        }
        DeletionMode::Greedy => {
            let mut membership = vec![0usize; pts.len()];
            let mut incident: Vec<Vec<usize>> = vec![Vec::new(); pts.len()];
            for (qi, q) in quads.iter().enumerate() {
                for &i in q {
                    membership[i] += 1;
                    incident[i].push(qi);
                }
            }
            let mut alive = vec![true; quads.len()];
            loop {
                // max_by_key keeps the last maximum; scan in reverse so ties
                // resolve to the smallest index.
                let (victim, &load) =
                    membership.iter().enumerate().rev().max_by_key(|&(_, m)| *m).expect("nonempty set");
                if load == 0 {
                    break;
                }
                removed[victim] = true;
                for &qi in &incident[victim] {
                    if std::mem::replace(&mut alive[qi], false) {
                        for &i in &quads[qi] {
                            membership[i] -= 1;
                        }
                    }
                }
            }
        }
    }
    let mut idx = 0;
    set.filtered(|_| {
        let keep = !removed[idx];
        idx += 1;
        keep
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionConfig {
    pub n: u32,
    pub seed: u64,
    pub epsilon: Ratio,
    pub deletion_mode: DeletionMode,
    pub max_retries: u32,
    /// Half-width of the accepted `|A|` window, in units of `√n`.
    pub cardinality_window: f64,
    /// Also delete points until no four are concyclic.
    #[serde(default = "default_true")]
    pub remove_concyclic: bool,
}

fn default_true() -> bool {
    true
}

impl ConstructionConfig {
    pub fn new(n: u32, seed: u64) -> Self {
        ConstructionConfig {
            n,
            seed,
            epsilon: Ratio { num: 1, den: 2 },
            deletion_mode: DeletionMode::Greedy,
            max_retries: 20,
            cardinality_window: 10.0,
            remove_concyclic: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < MIN_GRID {
            return Err(Error::InvalidArgument(format!("n = {} is below the minimum {MIN_GRID}", self.n)));
        }
        if self.n >= 1 << 16 {
            return Err(Error::InvalidArgument(format!("n = {} must stay below 2^16", self.n)));
        }
        if self.max_retries == 0 {
            return Err(Error::InvalidArgument("max_retries must be positive".into()));
        }
        if !(self.cardinality_window.is_finite() && self.cardinality_window > 0.0) {
            return Err(Error::InvalidArgument("cardinality window must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageSizes {
    pub initial: usize,
    pub refined: usize,
    #[serde(rename = "final")]
    pub final_: usize,
}

/// What happened on one pass through the pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttemptRecord {
    pub attempt: u32,
    pub params: ParabolaParams,
    pub sizes: Option<StageSizes>,
    pub outcome: String,
}

impl fmt::Display for AttemptRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "attempt {} [{}]: {}", self.attempt, self.params, self.outcome)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub config: ConstructionConfig,
    pub params: ParabolaParams,
    /// `n²/p`.
    pub expected_initial: f64,
    pub sizes: StageSizes,
    /// Additive parallelograms in the untouched grid section; always zero.
    pub initial_parallelograms: u64,
    pub initial_patterns: PatternCounts,
    /// Forbidden quadruples left after refinement, before deletion.
    pub survivors: PatternCounts,
    /// Concyclic quadruples in the pattern-free set before the concyclic pass.
    pub concyclic_survivors: u64,
    /// Exhaustive rescan of the output; all zero on success.
    pub final_patterns: PatternCounts,
    pub distinct_distances: u64,
    /// The output passed the exhaustive forbidden-quadruple rescan.
    pub verified: bool,
    pub pattern_free: bool,
    pub general_position: bool,
    pub concyclic_free: bool,
    pub attempts_used: u32,
    pub attempts: Vec<AttemptRecord>,
    /// Wall time; left out of the serialized report so reruns compare equal.
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Construction {
    pub initial: PointSet,
    pub refined: PointSet,
    pub points: PointSet,
    pub report: ConstructionReport,
}

/// Runs build → cardinality check → refine → delete until a nonempty,
/// verified set comes out or the retry budget runs out.
pub fn construct_pipeline(config: &ConstructionConfig) -> Result<Construction> {
    config.validate()?;
    let start = Instant::now();
    let n = config.n;
    let p = construction_prime(n)?;
    let expected = f64::from(n) * f64::from(n) / f64::from(p);
    let half_width = config.cardinality_window * f64::from(n).sqrt();

    let mut params_rng: ExperimentRng = rng::stream(config.seed, rng::PARAMS_STREAM);
    let mut refine_rng: ExperimentRng = rng::stream(config.seed, rng::REFINE_STREAM);
    let mut attempts = Vec::new();

    for attempt in 1..=config.max_retries {
        let params = sample_params(p, &mut params_rng)?;
        let initial = build_set(n, &params)?;
        debug_assert!(initial.iter().all(|&pt| params.contains_grid(pt)));
        let mut record = AttemptRecord { attempt, params, sizes: None, outcome: String::new() };

        if (initial.len() as f64 - expected).abs() > half_width {
            record.outcome = format!("|A| = {} outside {expected:.1} +/- {half_width:.1}", initial.len());
            log::info!("{record}");
            attempts.push(record);
            continue;
        }

        let refined = refine(&initial, config.epsilon, &mut refine_rng);
        let pattern_free = delete_forbidden(&refined, config.deletion_mode);
        let concyclic_survivors = concyclic_quadruples(&pattern_free).len() as u64;
        let points =
            if config.remove_concyclic { delete_concyclic(&pattern_free, config.deletion_mode) } else { pattern_free };
        let sizes = StageSizes { initial: initial.len(), refined: refined.len(), final_: points.len() };
        record.sizes = Some(sizes);

        let initial_parallelograms = count_parallelograms(&initial);
        let final_forbidden = count_forbidden(&points);
        if initial_parallelograms > 0 {
            record.outcome = format!("{initial_parallelograms} parallelograms in the grid section");
        } else if points.is_empty() {
            record.outcome = "deletion left no points".into();
        } else if final_forbidden > 0 {
            record.outcome = format!("{final_forbidden} forbidden quadruples after deletion");
        } else {
            record.outcome = "accepted".into();
        }
        log::info!("{record}");
        let accepted = record.outcome == "accepted";
        attempts.push(record);
        if !accepted {
            continue;
        }

        let initial_patterns = PatternCounts::tally(&enumerate_forbidden(&initial, ScanMode::Exhaustive));
        let survivors = PatternCounts::tally(&enumerate_forbidden(&refined, ScanMode::Exhaustive));
        let report = ConstructionReport {
            config: config.clone(),
            params,
            expected_initial: expected,
            sizes,
            initial_parallelograms,
            initial_patterns,
            survivors,
            concyclic_survivors,
            final_patterns: PatternCounts::tally(&enumerate_forbidden(&points, ScanMode::Exhaustive)),
            distinct_distances: distinct_distances(&points),
            verified: final_forbidden == 0 && !points.is_empty(),
            pattern_free: final_forbidden == 0,
            general_position: find_collinear_triple(&points).is_none(),
            concyclic_free: concyclic_quadruples(&points).is_empty(),
            attempts_used: attempt,
            attempts,
            elapsed: start.elapsed(),
        };
        return Ok(Construction { initial, refined, points, report });
    }
    Err(Error::RetriesExhausted { attempts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::is_additive_parallelogram;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn gp(x: i32, y: i32) -> GridPoint {
        GridPoint::new(x, y)
    }

    #[test]
    fn params_validation() {
        assert!(ParabolaParams::new(11, [1, 2, 2, 4, 0]).is_err());
        assert!(ParabolaParams::new(9, [1, 0, 0, 1, 0]).is_err());
        assert!(ParabolaParams::new(2, [1, 0, 0, 1, 0]).is_err());
        let q = ParabolaParams::new(11, [-1, 13, 0, 1, 22]).unwrap();
        assert_eq!(q.coefficients(), [10, 2, 0, 1, 0]);
    }

    #[test]
    fn sampled_params_are_nondegenerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for p in [3u32, 5, 11, 101, 2053] {
            for _ in 0..500 {
                assert!(!sample_params(p, &mut rng).unwrap().determinant().is_zero());
            }
        }
        assert!(sample_params(15, &mut rng).is_err());
    }

    /// A rejected draw is replaced by the next one from the same stream.
    #[test]
    fn degenerate_draw_is_resampled() {
        struct Scripted(Vec<u32>, usize);
        impl rand::RngCore for Scripted {
            fn next_u32(&mut self) -> u32 {
                let v = self.0[self.1];
                self.1 += 1;
                v
            }
            fn next_u64(&mut self) -> u64 {
                u64::from(self.next_u32())
            }
            fn fill_bytes(&mut self, _: &mut [u8]) {
                unimplemented!()
            }
            fn try_fill_bytes(&mut self, _: &mut [u8]) -> std::result::Result<(), rand::Error> {
                unimplemented!()
            }
        }
        // gen_range(0..11) on u32 keeps the high word of v * 11 when the low
        // word clears the rejection zone; v = k * 2³²/11 rounded up yields k.
        let enc = |k: u32| ((u64::from(k) << 32).div_ceil(11)) as u32;
        let script = [1, 2, 2, 4, 0, 1, 0, 0, 1, 0].map(enc).to_vec();
        let mut rng = Scripted(script, 0);
        let q = sample_params(11, &mut rng).unwrap();
        assert_eq!(q.coefficients(), [1, 0, 0, 1, 0]);
        assert_eq!(rng.1, 10);
    }

    #[test]
    fn degenerate_count_matches_brute_force() {
        let p = 11u64;
        let mut degenerate = 0;
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        if (a * d + p * p - b * c).is_multiple_of(p) {
                            degenerate += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(degenerate, p * p * p + p * p - p);
    }

    #[test]
    fn rejection_rate_at_p11() {
        let p = 11u32;
        let mut rng = rng::stream(99, rng::PARAMS_STREAM);
        let trials = 1_000_000u32;
        let mut rejected = 0u32;
        for _ in 0..trials {
            if ParabolaParams::new(p, draw_quintuple(p, &mut rng)).is_err() {
                rejected += 1;
            }
        }
        let q = 1451.0 / 14641.0;
        let sigma = (q * (1.0 - q) / f64::from(trials)).sqrt();
        let rate = f64::from(rejected) / f64::from(trials);
        assert!((rate - q).abs() < 3.0 * sigma, "rate {rate} vs {q}");
    }

    #[test]
    fn build_set_examples() {
        let x2y = ParabolaParams::new(11, [1, 0, 0, 1, 0]).unwrap();
        assert_eq!(build_set(2, &x2y).unwrap().points(), &[gp(0, 0), gp(1, 1)]);
        let y2x = ParabolaParams::new(11, [0, 1, 1, 0, 0]).unwrap();
        assert_eq!(build_set(2, &y2x).unwrap().points(), &[gp(0, 0), gp(1, 1)]);
        let std13 = ParabolaParams::standard(13).unwrap();
        assert_eq!(build_set(3, &std13).unwrap().points(), &[gp(0, 0), gp(1, 1)]);
        assert!(build_set(3, &x2y).is_err());
    }

    #[test]
    fn built_points_satisfy_congruence() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 64;
        let p = construction_prime(n).unwrap();
        for _ in 0..20 {
            let q = sample_params(p, &mut rng).unwrap();
            let set = build_set(n, &q).unwrap();
            let [a, b, c, d, e] = q.coefficients().map(i64::from);
            let pm = i64::from(p);
            for pt in set.iter() {
                let (x, y) = (i64::from(pt.x), i64::from(pt.y));
                let lhs = (a * x + b * y).pow(2).rem_euclid(pm);
                assert_eq!(lhs, (c * x + d * y + e).rem_euclid(pm));
            }
            let brute = (0..n as i32)
                .flat_map(|x| (0..n as i32).map(move |y| gp(x, y)))
                .filter(|&pt| q.contains_grid(pt))
                .count();
            assert_eq!(brute, set.len());
        }
    }

    #[test]
    fn conic_has_p_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for p in [3u32, 5, 7, 13, 29] {
            for _ in 0..10 {
                assert_eq!(sample_params(p, &mut rng).unwrap().solutions().len(), p as usize);
            }
        }
    }

    fn image_matches(params: &ParabolaParams, t: &AffineMap) -> bool {
        let moved = transport_params(params, t).unwrap();
        let image: BTreeSet<FpPoint> = params.solutions().into_iter().map(|pt| t.apply(pt)).collect();
        let direct: BTreeSet<FpPoint> = moved.solutions().into_iter().collect();
        image == direct
    }

    #[test]
    fn transport_examples() {
        let std5 = ParabolaParams::standard(5).unwrap();
        assert_eq!(transport_params(&std5, &AffineMap::identity(5)).unwrap(), std5);
        assert!(image_matches(&std5, &AffineMap::translation(1, 0, 5)));
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let q = sample_params(13, &mut rng).unwrap();
            let t = AffineMap::random(13, &mut rng);
            assert!(image_matches(&q, &t));
        }
    }

    #[test]
    fn transport_is_exact_over_several_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for p in [5u32, 7, 11, 13] {
            for _ in 0..60 {
                let q = sample_params(p, &mut rng).unwrap();
                let t = AffineMap::random(p, &mut rng);
                assert!(image_matches(&q, &t));
                // A group action: transporting back restores the coefficients.
                let back = transport_params(&transport_params(&q, &t).unwrap(), &t.invert()).unwrap();
                assert_eq!(back, q);
            }
        }
    }

    #[test]
    fn parallelogram_identity_exhaustive() {
        for p in [3i64, 5, 7, 11, 13] {
            for x in 0..p {
                for h in 1..p {
                    for k in 1..p {
                        let v = (x + h + k).pow(2) - (x + h).pow(2) - (x + k).pow(2) + x * x;
                        assert_eq!(v.rem_euclid(p), (2 * h * k).rem_euclid(p));
                        assert_ne!(v.rem_euclid(p), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn ratio_parsing() {
        assert_eq!("1/2".parse::<Ratio>().unwrap(), Ratio::new(1, 2).unwrap());
        assert_eq!("0.25".parse::<Ratio>().unwrap(), Ratio::new(1, 4).unwrap());
        assert_eq!("1".parse::<Ratio>().unwrap(), Ratio::new(1, 1).unwrap());
        assert!("0".parse::<Ratio>().is_err());
        assert!("3/2".parse::<Ratio>().is_err());
        assert!("abc".parse::<Ratio>().is_err());
        assert!("-0.5".parse::<Ratio>().is_err());
    }

    #[test]
    fn refine_behaviour() {
        let grid = PointSet::full_grid(10);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(refine(&grid, Ratio::new(1, 1).unwrap(), &mut rng), grid);
        let half = Ratio::new(1, 2).unwrap();
        let trials = 10_000;
        let mut total = 0usize;
        for _ in 0..trials {
            let r = refine(&grid, half, &mut rng);
            assert!(r.is_subset_of(&grid));
            total += r.len();
        }
        let mean = total as f64 / f64::from(trials);
        let sigma = (100.0 * 0.25 / f64::from(trials)).sqrt();
        assert!((mean - 50.0).abs() < 3.0 * sigma, "mean {mean}");
        let a = refine(&grid, half, &mut rng::stream(3, rng::REFINE_STREAM));
        let b = refine(&grid, half, &mut rng::stream(3, rng::REFINE_STREAM));
        assert_eq!(a, b);
    }

    #[test]
    fn deletion_examples() {
        let row = PointSet::new(16, (0..4).map(|x| gp(x, 0))).unwrap();
        assert!(delete_forbidden(&row, DeletionMode::AllPoints).is_empty());
        assert_eq!(delete_forbidden(&row, DeletionMode::Greedy).len(), 3);
        let free = PointSet::new(16, [gp(0, 0), gp(1, 0), gp(3, 5), gp(7, 2)]).unwrap();
        assert_eq!(count_forbidden(&free), 0);
        for mode in [DeletionMode::AllPoints, DeletionMode::Greedy] {
            assert_eq!(delete_forbidden(&free, mode), free);
        }
    }

    #[test]
    fn concyclic_deletion() {
        // Four points on the circle of radius 5 about (5, 5), plus one off it.
        let set = PointSet::new(16, [gp(10, 5), gp(8, 9), gp(1, 8), gp(5, 0), gp(2, 2)]).unwrap();
        assert_eq!(concyclic_quadruples(&set).len(), 1);
        let greedy = delete_concyclic(&set, DeletionMode::Greedy);
        assert_eq!(greedy.len(), 4);
        assert!(!greedy.contains(gp(1, 8)));
        assert_eq!(delete_concyclic(&set, DeletionMode::AllPoints).points(), &[gp(2, 2)]);

        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let pts: BTreeSet<GridPoint> = (0..25).map(|_| gp(rng.gen_range(0..12), rng.gen_range(0..12))).collect();
            let set = PointSet::new(12, pts).unwrap();
            let out = delete_concyclic(&set, DeletionMode::Greedy);
            assert!(out.is_subset_of(&set));
            assert!(concyclic_quadruples(&out).is_empty());
        }
    }

    #[test]
    fn deletion_clears_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let mut pts = BTreeSet::new();
            while pts.len() < 25 {
                pts.insert(gp(rng.gen_range(0..12), rng.gen_range(0..12)));
            }
            let set = PointSet::new(12, pts).unwrap();
            for mode in [DeletionMode::AllPoints, DeletionMode::Greedy] {
                let out = delete_forbidden(&set, mode);
                assert!(out.is_subset_of(&set));
                assert_eq!(count_forbidden(&out), 0);
            }
        }
    }

    #[test]
    fn grid_sections_have_no_parallelograms() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [16u32, 40, 100, 300] {
            let p = construction_prime(n).unwrap();
            for _ in 0..10 {
                let set = build_set(n, &sample_params(p, &mut rng).unwrap()).unwrap();
                assert!(set.len() <= 150);
                assert_eq!(count_parallelograms(&set), 0);
                let pts = set.points();
                let m = pts.len();
                for i in 0..m {
                    for j in i + 1..m {
                        for k in j + 1..m {
                            for l in k + 1..m {
                                let q = Quadruple::from_sorted([pts[i], pts[j], pts[k], pts[l]]);
                                assert!(is_additive_parallelogram(&q).is_none());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(ConstructionConfig::new(8, 1).validate().is_err());
        assert!(ConstructionConfig::new(16, 1).validate().is_ok());
        let mut c = ConstructionConfig::new(32, 1);
        c.max_retries = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn pipeline_small_run() {
        let c = construct_pipeline(&ConstructionConfig::new(64, 3)).unwrap();
        let r = &c.report;
        assert!(r.pattern_free && r.general_position);
        assert_eq!(r.initial_parallelograms, 0);
        assert_eq!(r.initial_patterns.get(crate::patterns::PatternKind::Parallelogram), 0);
        assert!(c.points.is_subset_of(&c.refined) && c.refined.is_subset_of(&c.initial));
        assert_eq!(r.sizes.final_, c.points.len());
        let again = construct_pipeline(&ConstructionConfig::new(64, 3)).unwrap();
        assert_eq!(again.points, c.points);
        assert_eq!(serde_json::to_string(&again.report).unwrap(), serde_json::to_string(r).unwrap());
    }

    #[test]
    fn pipeline_reports_exhaustion() {
        let mut c = ConstructionConfig::new(64, 3);
        c.cardinality_window = 1e-9;
        c.max_retries = 3;
        match construct_pipeline(&c) {
            Err(Error::RetriesExhausted { attempts }) => assert_eq!(attempts.len(), 3),
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn params_serde_round_trip() {
        let q = ParabolaParams::new(13, [2, 3, 5, 7, 11]).unwrap();
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"{"p":13,"a":2,"b":3,"c":5,"d":7,"e":11}"#);
        assert_eq!(serde_json::from_str::<ParabolaParams>(&s).unwrap(), q);
        assert!(serde_json::from_str::<ParabolaParams>(r#"{"p":11,"a":1,"b":2,"c":2,"d":4,"e":0}"#).is_err());
    }
}
