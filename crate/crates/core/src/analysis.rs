//! Desk-scale checks of the quantitative claims behind the construction:
//! grid pattern censuses and their growth exponents, distinct-distance
//! counts, and exact and sampled oracles for the finite-field bounds.

use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::{build_set, sample_params, ParabolaParams};
use crate::error::{Error, Result};
use crate::field::{construction_prime, is_prime, quadratic_form_root_count, AffineMap, Fp, FpPoint};
use crate::patterns::{
    additive_parallelogram, classify_points, squared_distance, GridPoint, PatternCounts, PatternKind, PointSet,
};
use crate::rng;

/// Largest grid side censused by default: C(256, 4) ≈ 1.7·10⁸ quadruples.
pub const CENSUS_BOUND: u32 = 16;
/// Largest modulus for the exhaustive parabola parallelogram scan.
pub const FFP_SCAN_BOUND: u32 = 61;
/// Largest modulus for brute force over all p⁵ parameter quintuples.
pub const QUINTUPLE_BOUND: u32 = 31;

/// Distinct values of `dx² + dy²` over `0 ≤ dx, dy < n`, not both zero.
pub fn grid_distinct_distances(n: u32) -> u64 {
    if n <= 1 {
        return 0;
    }
    let m = u64::from(n - 1);
    let len = (2 * m * m + 1) as usize;
    let mut seen = vec![0u64; len.div_ceil(64)];
    for dx in 0..=m {
        for dy in dx..=m {
            let v = (dx * dx + dy * dy) as usize;
            seen[v / 64] |= 1 << (v % 64);
        }
    }
    let zero_bit = 1; // dx = dy = 0
    seen.iter().map(|w| u64::from(w.count_ones())).sum::<u64>() - zero_bit
}

/// Distinct squared distances over unordered pairs of the set.
pub fn distinct_distances(set: &PointSet) -> u64 {
    let pts = set.points();
    let mut d: Vec<i64> = Vec::with_capacity(pts.len() * pts.len().saturating_sub(1) / 2);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            d.push(squared_distance(pts[i], pts[j]));
        }
    }
    d.sort_unstable();
    d.dedup();
    d.len() as u64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: u32,
    /// Number of 4-subsets examined, `C(n², 4)`.
    pub quadruples: u64,
    pub counts: PatternCounts,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Classifies every quadruple of the `n × n` grid. Grids above
/// [`CENSUS_BOUND`] are refused unless `allow_large` is set.
pub fn grid_pattern_census(n: u32, allow_large: bool) -> Result<CensusReport> {
    if n > CENSUS_BOUND && !allow_large {
        return Err(Error::BeyondExhaustiveBound {
            what: "census grid size",
            bound: CENSUS_BOUND.into(),
            got: n.into(),
        });
    }
    let start = Instant::now();
    let grid = PointSet::full_grid(n);
    let pts = grid.points();
    let m = pts.len();
    let dist: Vec<i64> = (0..m * m).map(|k| squared_distance(pts[k / m], pts[k % m])).collect();
    let d = |i: usize, j: usize| dist[i * m + j];

    let counts = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut tally = PatternCounts::default();
            for j in i + 1..m {
                let dij = d(i, j);
                for k in j + 1..m {
                    let (dik, djk) = (d(i, k), d(j, k));
                    for l in k + 1..m {
                        let mut six = [dij, dik, d(i, l), djk, d(j, l), d(k, l)];
                        six.sort_unstable();
                        let distinct = 1 + six.windows(2).filter(|w| w[0] != w[1]).count();
                        if distinct <= 4 {
                            tally.add(classify_points(&[pts[i], pts[j], pts[k], pts[l]]));
                        }
                    }
                }
            }
            tally
        })
        .reduce(PatternCounts::default, PatternCounts::merge);

    let m = m as u64;
    let quadruples = if m < 4 { 0 } else { m * (m - 1) * (m - 2) * (m - 3) / 24 };
    Ok(CensusReport { n, quadruples, counts, elapsed: start.elapsed() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub pattern: String,
    /// `(n, count)` pairs used in the fit.
    pub points: Vec<(u32, u64)>,
    /// Grid sizes dropped because the count was zero.
    pub excluded: Vec<u32>,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

/// Least-squares slope of `ln count` against `ln n`.
pub fn fit_growth_exponent(reports: &[CensusReport], pattern: PatternKind) -> Result<GrowthFit> {
    let data: Vec<(u32, u64)> = reports.iter().map(|r| (r.n, r.counts.get(pattern))).collect();
    fit_power_law(pattern.label(), &data)
}

pub fn fit_power_law(label: &str, data: &[(u32, u64)]) -> Result<GrowthFit> {
    let (points, zero): (Vec<_>, Vec<_>) = data.iter().copied().partition(|&(_, c)| c > 0);
    let excluded: Vec<u32> = zero.into_iter().map(|(n, _)| n).collect();
    if !excluded.is_empty() {
        log::warn!("{label}: zero counts at n = {excluded:?} left out of the fit");
    }
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "{label}: growth fit needs three positive counts, have {}",
            points.len()
        )));
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| f64::from(n).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, c)| (c as f64).ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument(format!("{label}: growth fit needs distinct grid sizes")));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum::<f64>() / k).sqrt();
    Ok(GrowthFit { pattern: label.to_string(), points, excluded, slope, intercept, residual })
}

/// True when no four points of the conic in F_p² form an additive
/// parallelogram. `p` is capped at [`FFP_SCAN_BOUND`].
pub fn ffp_parallelogram_free(params: &ParabolaParams) -> Result<bool> {
    let p = params.modulus();
    if p > FFP_SCAN_BOUND {
        return Err(Error::BeyondExhaustiveBound { what: "modulus", bound: FFP_SCAN_BOUND.into(), got: p.into() });
    }
    let pts = params.solutions();
    let m = pts.len();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                for l in k + 1..m {
                    if additive_parallelogram(&[pts[i], pts[j], pts[k], pts[l]]).is_some() {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

fn check_configuration(p: u32, pts: &[FpPoint; 4]) -> Result<()> {
    if p.is_multiple_of(2) || !is_prime(p.into()) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    if pts.iter().any(|q| q.x.modulus() != p || q.y.modulus() != p) {
        return Err(Error::InvalidArgument(format!("points are not reduced mod {p}")));
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i] == pts[j] {
                return Err(Error::InvalidArgument(format!("repeated point {:?}", pts[i])));
            }
        }
    }
    Ok(())
}

/// Counts quintuples `(a, b, c, d, e)` with `ad − bc ≠ 0` whose conic passes
/// through all four points, by trying every quintuple in F_p⁵.
pub fn count_solution_quintuples(p: u32, pts: &[FpPoint; 4]) -> Result<u64> {
    check_configuration(p, pts)?;
    if p > QUINTUPLE_BOUND {
        return Err(Error::BeyondExhaustiveBound { what: "modulus", bound: QUINTUPLE_BOUND.into(), got: p.into() });
    }
    let count = (0..p)
        .into_par_iter()
        .map(|a| {
            let f = |v: u32| Fp::new(v.into(), p);
            let a = f(a);
            let mut count = 0u64;
            for b in (0..p).map(f) {
                for c in (0..p).map(f) {
                    for d in (0..p).map(f) {
                        if (a * d - b * c).is_zero() {
                            continue;
                        }
                        for e in (0..p).map(f) {
                            let on = |q: &FpPoint| {
                                let lin = a * q.x + b * q.y;
                                lin * lin == c * q.x + d * q.y + e
                            };
                            if pts.iter().all(on) {
                                count += 1;
                            }
                        }
                    }
                }
            }
            count
        })
        .sum();
    Ok(count)
}

/// Zeros of `(s²−s)a² + 2st·ab + (t²−t)b²` in F_p², the form left after
/// moving three of the points to `(0,0)`, `(1,0)`, `(0,1)` and the fourth
/// to `(s, t)`.
pub fn reduced_solution_count(s: Fp, t: Fp) -> Result<u64> {
    if s.is_zero() || t.is_zero() {
        return Err(Error::InvalidArgument("s and t must be nonzero".into()));
    }
    let two = Fp::new(2, s.modulus());
    quadratic_form_root_count(s * s - s, two * s * t, t * t - t)
}

#[inline]
fn fp_collinear(a: FpPoint, b: FpPoint, c: FpPoint) -> bool {
    ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)).is_zero()
}

/// Map sending the first three points to `(0,0)`, `(1,0)`, `(0,1)`, and the
/// image `(s, t)` of the fourth. `None` if the first three are collinear.
pub fn normalizing_map(pts: &[FpPoint; 4]) -> Option<(AffineMap, Fp, Fp)> {
    let frame = AffineMap::from_frame(pts[0], pts[1], pts[2]).ok()?;
    let to_std = frame.invert();
    let img = to_std.apply(pts[3]);
    Some((to_std, img.x, img.y))
}

/// Exact count of valid quintuples through the four points, from the
/// reduced quadratic form.
///
/// After normalization the system forces `e = 0`, `c = a²`, `d = b²`, so
/// `ad − bc = ab(b − a)`. Zeros of the form with `a = 0`, `b = 0` or `a = b`
/// are degenerate states and are removed: `(0, 0)` always, the line `a = 0`
/// when `t = 1`, the line `b = 0` when `s = 1`, and the diagonal when
/// `s + t = 0` (`s + t = 1` is excluded by general position).
pub fn predicted_solution_count(p: u32, pts: &[FpPoint; 4]) -> Result<u64> {
    check_configuration(p, pts)?;
    let collinear_triple =
        [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)].iter().any(|&(i, j, k)| fp_collinear(pts[i], pts[j], pts[k]));
    if collinear_triple {
        return Ok(0);
    }
    let (_, s, t) = normalizing_map(pts).expect("no collinear triple");
    let roots = reduced_solution_count(s, t)?;
    let line = u64::from(p) - 1;
    let one = Fp::one(p);
    let mut degenerate = 1;
    if t == one {
        degenerate += line;
    }
    if s == one {
        degenerate += line;
    }
    if (s + t).is_zero() {
        degenerate += line;
    }
    Ok(roots - degenerate)
}

/// Valid parameter states for modulus `p`: `p⁵` minus the `p(p³ + p² − p)`
/// quintuples with `ad = bc`.
pub fn valid_state_count(p: u32) -> u64 {
    let p = u64::from(p);
    p.pow(5) - p * (p.pow(3) + p * p - p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub trials: u64,
    pub hits: u64,
    pub estimate: f64,
    /// 99% Wilson score interval.
    pub ci_low: f64,
    pub ci_high: f64,
}

const Z_99: f64 = 2.575_829_303_548_901;

/// Fraction of sampled valid parameter quintuples whose conic contains all
/// four points.
pub fn montecarlo_containment(
    p: u32,
    pts: &[FpPoint; 4],
    trials: u64,
    rng: &mut impl Rng,
) -> Result<MonteCarloEstimate> {
    check_configuration(p, pts)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let mut hits = 0u64;
    for _ in 0..trials {
        let params = sample_params(p, rng)?;
        if pts.iter().all(|&q| params.contains(q)) {
            hits += 1;
        }
    }
    let nf = trials as f64;
    let phat = hits as f64 / nf;
    let z2 = Z_99 * Z_99;
    let denom = 1.0 + z2 / nf;
    let centre = (phat + z2 / (2.0 * nf)) / denom;
    let half = Z_99 * (phat * (1.0 - phat) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    Ok(MonteCarloEstimate {
        trials,
        hits,
        estimate: phat,
        ci_low: (centre - half).max(0.0),
        ci_high: (centre + half).min(1.0),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CardinalityStats {
    pub n: u32,
    pub p: u32,
    /// `n²/p`.
    pub expected: f64,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Fraction of seeds with `|A|` inside `expected ± 10·√expected`.
    pub window_fraction: f64,
    pub sizes: Vec<usize>,
}

/// Half-width of the cardinality window, in units of `√(n²/p)`.
pub const CARDINALITY_WINDOW_SIGMAS: f64 = 10.0;

/// Sizes of the grid section `A` under seeds `0..num_seeds`, each drawing
/// its parameters from the standard parameter stream.
pub fn cardinality_stats(n: u32, num_seeds: u64) -> Result<CardinalityStats> {
    if n < crate::construction::MIN_GRID {
        return Err(Error::InvalidArgument(format!("n = {n} is below the minimum")));
    }
    if num_seeds < 2 {
        return Err(Error::InvalidArgument("need at least two seeds".into()));
    }
    let p = construction_prime(n)?;
    let sizes: Vec<usize> = (0..num_seeds)
        .into_par_iter()
        .map(|seed| {
            let params = sample_params(p, &mut rng::stream(seed, rng::PARAMS_STREAM))?;
            Ok(build_set(n, &params)?.len())
        })
        .collect::<Result<_>>()?;
    let expected = f64::from(n) * f64::from(n) / f64::from(p);
    let k = sizes.len() as f64;
    let mean = sizes.iter().map(|&s| s as f64).sum::<f64>() / k;
    let variance = sizes.iter().map(|&s| (s as f64 - mean).powi(2)).sum::<f64>() / (k - 1.0);
    let half = CARDINALITY_WINDOW_SIGMAS * expected.sqrt();
    let inside = sizes.iter().filter(|&&s| (s as f64 - expected).abs() <= half).count();
    Ok(CardinalityStats { n, p, expected, mean, variance, window_fraction: inside as f64 / k, sizes })
}

/// Lattice points to F_p².
pub fn lift(pts: &[GridPoint; 4], p: u32) -> [FpPoint; 4] {
    pts.map(|q| FpPoint::new(q.x.into(), q.y.into(), p))
}
