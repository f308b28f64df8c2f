//! Sampled metric spaces on the circle and torus, grid Hölder seminorms, the
//! two-point derivation, and the decay of approximate-diagonal cutoffs.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fit::linear_fit;
use crate::seq::{Complex, Domain, FourierSeries, FrequencyIndex, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    /// `m` equally spaced angles, arc-length metric.
    Circle { m: usize },
    /// `m × m` grid on `S¹ × S¹`, flat metric `sqrt(d_1² + d_2²)` of the arcs.
    Torus { m: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledMetricSpace {
    geometry: Geometry,
}

fn arc(a: usize, b: usize, m: usize) -> f64 {
    let d = a.abs_diff(b);
    d.min(m - d) as f64 * 2.0 * PI / m as f64
}

impl SampledMetricSpace {
    pub fn circle(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Empty("grid needs at least two points"));
        }
        Ok(Self { geometry: Geometry::Circle { m } })
    }

    pub fn torus(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Empty("grid needs at least two points per axis"));
        }
        Ok(Self { geometry: Geometry::Torus { m } })
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn domain(&self) -> Domain {
        match self.geometry {
            Geometry::Circle { .. } => Domain::Circle,
            Geometry::Torus { .. } => Domain::Torus,
        }
    }

    pub fn len(&self) -> usize {
        match self.geometry {
            Geometry::Circle { m } => m,
            Geometry::Torus { m } => m * m,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points per axis.
    pub fn side(&self) -> usize {
        match self.geometry {
            Geometry::Circle { m } | Geometry::Torus { m } => m,
        }
    }

    pub fn grid_step(&self) -> f64 {
        2.0 * PI / self.side() as f64
    }

    /// Angles of point `i`; torus points are row-major.
    pub fn point(&self, i: usize) -> [f64; 2] {
        let h = self.grid_step();
        match self.geometry {
            Geometry::Circle { .. } => [i as f64 * h, 0.0],
            Geometry::Torus { m } => [(i / m) as f64 * h, (i % m) as f64 * h],
        }
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match self.geometry {
            Geometry::Circle { m } => arc(i, j, m),
            Geometry::Torus { m } => arc(i / m, j / m, m).hypot(arc(i % m, j % m, m)),
        }
    }

    pub fn sample<I: FrequencyIndex, S: Scalar>(&self, f: &FourierSeries<I, S>) -> Result<Vec<Complex>> {
        if I::DOMAIN != self.domain() {
            return Err(Error::Domain("series and sampled space"));
        }
        let f = f.to_floating();
        Ok((0..self.len()).map(|i| f.evaluate(&self.point(i)[..I::DOMAIN.dim()])).collect())
    }

    /// Symmetry, zero diagonal and the triangle inequality on random triples.
    pub fn spot_check(&self, triples: usize, seed: u64) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.len();
        (0..triples).all(|_| {
            let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            let (ab, bc, ac) = (self.distance(a, b), self.distance(b, c), self.distance(a, c));
            ab == self.distance(b, a) && self.distance(a, a) == 0.0 && ac <= ab + bc + 1e-12
        })
    }

    /// Index displacements in increasing distance; each covers all base points.
    fn offsets(&self) -> Vec<(usize, f64)> {
        match self.geometry {
            Geometry::Circle { m } => (1..=m / 2).map(|d| (d, arc(0, d, m))).collect(),
            Geometry::Torus { m } => {
                let mut v: Vec<(usize, f64)> = (1..m * m).map(|o| (o, self.distance(0, o))).collect();
                v.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
                v
            }
        }
    }

    fn shifted(&self, i: usize, offset: usize) -> usize {
        match self.geometry {
            Geometry::Circle { m } => (i + offset) % m,
            Geometry::Torus { m } => ((i / m + offset / m) % m) * m + (i % m + offset % m) % m,
        }
    }
}

pub const DEFAULT_PAIR_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeminormEstimate {
    pub value: f64,
    pub pairs: u64,
    /// The pair cap stopped the scan before all pairs were visited.
    pub truncated: bool,
}

/// `max |f(x) − f(y)| / d(x,y)^α` over grid pairs, nearest pairs first when
/// the pair count exceeds `pair_cap`.
pub fn holder_seminorm(values: &[Complex], x: &SampledMetricSpace, alpha: f64, pair_cap: u64) -> Result<SeminormEstimate> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Exponent(alpha));
    }
    if values.len() != x.len() {
        return Err(Error::Invalid("sample count does not match the grid".into()));
    }
    let n = x.len();
    let offsets = x.offsets();
    let mut best = 0.0f64;
    let mut pairs = 0u64;
    let mut truncated = false;
    for (o, d) in &offsets {
        if pairs > 0 && pairs + n as u64 > pair_cap {
            truncated = true;
            break;
        }
        let scale = d.powf(alpha);
        for i in 0..n {
            let r = (values[i] - values[x.shifted(i, *o)]).norm() / scale;
            best = best.max(r);
        }
        pairs += n as u64;
    }
    Ok(SeminormEstimate { value: best, pairs, truncated })
}

pub fn estimate_holder_seminorm<I: FrequencyIndex, S: Scalar>(
    f: &FourierSeries<I, S>,
    x: &SampledMetricSpace,
    alpha: f64,
) -> Result<SeminormEstimate> {
    holder_seminorm(&x.sample(f)?, x, alpha, DEFAULT_PAIR_CAP)
}

pub const STABILIZATION_TOLERANCE: f64 = 0.01;

fn relative_changes(estimates: &[f64]) -> impl Iterator<Item = f64> + '_ {
    estimates.windows(2).map(|w| (w[1] - w[0]) / w[0].abs().max(f64::MIN_POSITIVE))
}

/// Relative change below 1% across each of the last two refinements.
pub fn stabilizes(estimates: &[f64]) -> bool {
    estimates.len() >= 3 && relative_changes(&estimates[estimates.len() - 3..]).all(|c| c.abs() < STABILIZATION_TOLERANCE)
}

/// Growth above 1% at every refinement: the operational sign of non-membership.
pub fn diverges(estimates: &[f64]) -> bool {
    estimates.len() >= 3 && relative_changes(estimates).all(|c| c > STABILIZATION_TOLERANCE)
}

/// `δ_α(f)(x,y) = (f(x) − f(y)) / d(x,y)^α`.
pub fn delta_alpha(values: &[Complex], x: &SampledMetricSpace, alpha: f64, i: usize, j: usize) -> Result<Complex> {
    let d = x.distance(i, j);
    if d == 0.0 {
        return Err(Error::Invalid("the two-point derivation needs distinct points".into()));
    }
    Ok((values[i] - values[j]) / d.powf(alpha))
}

/// `χ(t) = 1` on `[0, 0.1]`, `(1 − s²)³` with `s = (t − 0.1)/0.9` on `(0.1, 1)`, `0` from 1 on.
pub fn cutoff_profile(t: f64) -> f64 {
    if t <= 0.1 {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        let s = (t - 0.1) / 0.9;
        let u = 1.0 - s * s;
        u * u * u
    }
}

/// `Δ_j(x,y) = χ(j d(x,y))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagonalCutoff {
    pub j: f64,
}

impl DiagonalCutoff {
    pub fn new(j: f64) -> Result<Self> {
        if !(j >= 1.0) {
            return Err(Error::Invalid("cutoff index must be at least 1".into()));
        }
        Ok(Self { j })
    }

    pub fn at_distance(&self, d: f64) -> f64 {
        cutoff_profile(self.j * d)
    }
}

/// Checked properties of `Δ_j` on a circle grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffLemma {
    pub one_on_diagonal: bool,
    pub support_inside: bool,
    /// Lipschitz seminorm on `X × X` under the max product metric.
    pub lipschitz: f64,
    pub lipschitz_over_j: f64,
}

/// `Δ_j(x,y)` depends on `y − x` only, and a displacement `(s, −s)` of the
/// pair moves that offset by `2s` at product distance `|s|`; moves `(s, 0)`
/// change it by `s`. Both families are scanned.
pub fn cutoff_lemma(x: &SampledMetricSpace, cutoff: DiagonalCutoff) -> Result<CutoffLemma> {
    let Geometry::Circle { m } = x.geometry() else {
        return Err(Error::Domain("cutoff lemma scan is implemented on circle grids"));
    };
    let at = |o: usize| cutoff.at_distance(arc(0, o % m, m));
    let one_on_diagonal = (0..m).all(|i| cutoff.at_distance(x.distance(i, i)) == 1.0);
    let support_inside = (0..m).all(|o| at(o) == 0.0 || arc(0, o, m) < 1.0 / cutoff.j);
    let mut lip = 0.0f64;
    for o in 0..m {
        for s in 1..=m / 2 {
            let d = arc(0, s, m);
            lip = lip.max((at(o + 2 * s) - at(o)).abs() / d).max((at(o + s) - at(o)).abs() / d);
        }
    }
    Ok(CutoffLemma { one_on_diagonal, support_inside, lipschitz: lip, lipschitz_over_j: lip / cutoff.j })
}

/// `γ = min(1 − α/β, β − α)`.
pub fn decay_exponent(alpha: f64, beta: f64) -> f64 {
    (1.0 - alpha / beta).min(beta - alpha)
}

/// `{2, 4, ..., 256}`.
pub fn default_j_schedule() -> Vec<f64> {
    (1..=8).map(|e| (1u32 << e) as f64).collect()
}

/// Entries of `js` whose cutoff support `1/j` spans at least two grid steps.
pub fn resolvable_j_schedule(js: &[f64], x: &SampledMetricSpace) -> Vec<f64> {
    js.iter().copied().filter(|j| 1.0 / j >= 2.0 * x.grid_step()).collect()
}

/// Displacements `{0, ±round(√2^e)}` below half the grid.
fn geometric_shifts(m: usize) -> Vec<i64> {
    let mut s = alloc::vec![0i64];
    let mut e = 0;
    loop {
        let v = 2f64.powf(e as f64 / 2.0).round() as i64;
        if v as f64 >= m as f64 / 2.0 {
            break;
        }
        s.push(v);
        s.push(-v);
        e += 1;
    }
    s.sort_unstable();
    s.dedup();
    s
}

/// `sup |G| + |G|_{C^α}` for `G(x,y) = Δ_j(x,y)(f(y) − f(x))` on a circle
/// grid, with the seminorm over `X × X` (max product metric) sampled on
/// geometric displacements of both coordinates.
pub fn decay_norm(values: &[Complex], x: &SampledMetricSpace, alpha: f64, cutoff: DiagonalCutoff) -> Result<f64> {
    let Geometry::Circle { m } = x.geometry() else {
        return Err(Error::Domain("decay norm is implemented on circle grids"));
    };
    if values.len() != m {
        return Err(Error::Invalid("sample count does not match the grid".into()));
    }
    let weights: Vec<f64> = (0..m).map(|o| cutoff.at_distance(arc(0, o, m))).collect();
    let mut g = alloc::vec![Complex::new(0.0, 0.0); m * m];
    for xi in 0..m {
        for yi in 0..m {
            let w = weights[(yi + m - xi) % m];
            if w != 0.0 {
                g[xi * m + yi] = (values[yi] - values[xi]) * w;
            }
        }
    }
    let sup = g.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let shifts = geometric_shifts(m);
    let h = x.grid_step();
    let wrap = |i: usize, d: i64| (i as i64 + d).rem_euclid(m as i64) as usize;
    let mut semi = 0.0f64;
    for &d1 in &shifts {
        for &d2 in &shifts {
            // (d1,d2) and (−d1,−d2) give the same maximum
            if d1 < 0 || (d1 == 0 && d2 <= 0) {
                continue;
            }
            let circ = |d: i64| (d.unsigned_abs() as usize).min(m - d.unsigned_abs() as usize);
            let steps = circ(d1).max(circ(d2));
            let scale = (steps as f64 * h).powf(alpha);
            let mut best = 0.0f64;
            for xi in 0..m {
                let row = &g[xi * m..(xi + 1) * m];
                let shifted = &g[wrap(xi, d1) * m..(wrap(xi, d1) + 1) * m];
                for yi in 0..m {
                    best = best.max((shifted[wrap(yi, d2)] - row[yi]).norm());
                }
            }
            semi = semi.max(best / scale);
        }
    }
    Ok(sup + semi)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayFitReport {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub js: Vec<f64>,
    pub norms: Vec<f64>,
    /// Slope of `log norm` against `log j`; absent for a trivial input.
    pub slope: Option<f64>,
    pub residual: Option<f64>,
    /// Every norm vanished (constant input).
    pub trivial: bool,
}

impl DecayFitReport {
    /// `slope <= −(γ − slack)`.
    pub fn meets_bound(&self, slack: f64) -> bool {
        self.slope.is_some_and(|s| s <= -(self.gamma - slack))
    }
}

pub fn diagonal_decay_experiment<S: Scalar>(
    f: &FourierSeries<i64, S>,
    alpha: f64,
    beta: f64,
    js: &[f64],
    x: &SampledMetricSpace,
) -> Result<DecayFitReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Exponent(alpha));
    }
    if beta <= alpha {
        return Err(Error::Invalid("the decay bound needs β > α".into()));
    }
    let values = x.sample(f)?;
    let norms = js
        .iter()
        .map(|&j| decay_norm(&values, x, alpha, DiagonalCutoff::new(j)?))
        .collect::<Result<Vec<f64>>>()?;
    let trivial = norms.iter().all(|n| *n == 0.0);
    let (slope, residual) = if trivial {
        (None, None)
    } else {
        let lx: Vec<f64> = js.iter().map(|j| j.ln()).collect();
        let ly: Vec<f64> = norms.iter().map(|n| n.max(f64::MIN_POSITIVE).ln()).collect();
        match linear_fit(&lx, &ly) {
            Some(fit) => (Some(fit.slope), Some(fit.residual)),
            None => (None, None),
        }
    };
    Ok(DecayFitReport { alpha, beta, gamma: decay_exponent(alpha, beta), js: js.to_vec(), norms, slope, residual, trivial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{CircleSeries, GaussRational as Q};

    #[test]
    fn circle_metric_axioms() {
        let x = SampledMetricSpace::circle(64).unwrap();
        assert!(x.spot_check(500, 3));
        assert!((x.distance(0, 32) - PI).abs() < 1e-15);
        assert!((x.distance(1, 63) - 2.0 * x.grid_step()).abs() < 1e-15);
        let t = SampledMetricSpace::torus(16).unwrap();
        assert!(t.spot_check(500, 4));
    }

    #[test]
    fn constant_has_zero_seminorm() {
        let x = SampledMetricSpace::circle(128).unwrap();
        let c = CircleSeries::constant(Q::from_ints(3, -2));
        assert_eq!(estimate_holder_seminorm(&c, &x, 0.5).unwrap().value, 0.0);
    }

    #[test]
    fn identity_map_is_one_lipschitz() {
        let x = SampledMetricSpace::circle(4096).unwrap();
        let e = estimate_holder_seminorm(&CircleSeries::<Q>::z_pow(1), &x, 1.0).unwrap();
        assert!(!e.truncated);
        assert!((e.value - 1.0).abs() <= 1e-3, "{e:?}");
    }

    #[test]
    fn cap_prefers_near_pairs() {
        let x = SampledMetricSpace::circle(1 << 12).unwrap();
        let v = x.sample(&CircleSeries::<Q>::z_pow(1)).unwrap();
        let e = holder_seminorm(&v, &x, 1.0, 100_000).unwrap();
        assert!(e.truncated && e.pairs <= 100_000);
        assert!((e.value - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn two_point_derivation() {
        let x = SampledMetricSpace::circle(32).unwrap();
        let f = x.sample(&CircleSeries::from_terms([(1, Q::from_ints(1, 1)), (-2, Q::from_ints(2, 0))])).unwrap();
        let g = x.sample(&CircleSeries::from_terms([(3, Q::from_ints(0, 1)), (0, Q::from_ints(1, 0))])).unwrap();
        let fg: Vec<Complex> = f.iter().zip(&g).map(|(a, b)| a * b).collect();
        for (i, j) in [(0, 5), (7, 3), (31, 16)] {
            let lhs = delta_alpha(&fg, &x, 0.4, i, j).unwrap();
            let rhs = delta_alpha(&f, &x, 0.4, i, j).unwrap() * g[j] + f[i] * delta_alpha(&g, &x, 0.4, i, j).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
            assert_eq!(delta_alpha(&f, &x, 0.4, i, j).unwrap(), -delta_alpha(&f, &x, 0.4, j, i).unwrap());
        }
        assert!(delta_alpha(&f, &x, 0.4, 2, 2).is_err());
    }

    #[test]
    fn cutoff_profile_shape() {
        assert_eq!(cutoff_profile(0.0), 1.0);
        assert_eq!(cutoff_profile(0.1), 1.0);
        assert_eq!(cutoff_profile(1.0), 0.0);
        let ts: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        assert!(ts.windows(2).all(|w| cutoff_profile(w[1]) <= cutoff_profile(w[0])));
    }

    #[test]
    fn cutoff_lemma_on_grid() {
        let x = SampledMetricSpace::circle(512).unwrap();
        let small = cutoff_lemma(&x, DiagonalCutoff::new(4.0).unwrap()).unwrap();
        let big = cutoff_lemma(&x, DiagonalCutoff::new(16.0).unwrap()).unwrap();
        assert!(small.one_on_diagonal && small.support_inside);
        assert!(big.one_on_diagonal && big.support_inside);
        // sup |χ'| is about 1.4, and the pair move (s,−s) doubles the offset change
        assert!(small.lipschitz_over_j < 4.0 && big.lipschitz_over_j < 4.0);
    }

    #[test]
    fn decay_rejects_equal_exponents_and_flags_constants() {
        let x = SampledMetricSpace::circle(64).unwrap();
        let c = CircleSeries::constant(Q::from_i64(2));
        assert!(diagonal_decay_experiment(&c, 0.5, 0.5, &[2.0, 4.0], &x).is_err());
        let r = diagonal_decay_experiment(&c, 0.3, 0.9, &[2.0, 4.0], &x).unwrap();
        assert!(r.trivial && r.slope.is_none());
        assert!((decay_exponent(0.3, 0.9) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn schedule_clipping() {
        let x = SampledMetricSpace::circle(1024).unwrap();
        assert_eq!(resolvable_j_schedule(&default_j_schedule(), &x), [2.0, 4.0, 8.0, 16.0, 32.0, 64.0]);
    }
}
