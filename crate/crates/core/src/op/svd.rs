use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::{Add, AddAssign, Mul, Sub, SubAssign};

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sparse::SparseOperator;
use crate::error::{Error, Result};
use crate::fit::{linear_fit, LinearFit};
use crate::seq::{Complex, FrequencyIndex, Scalar};

/// Singular values `μ_0 >= μ_1 >= ... >= 0` with a note on where they came from.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularValueSequence {
    values: Vec<f64>,
    provenance: String,
}

impl SingularValueSequence {
    /// Sorts into nonincreasing order. Negative or non-finite input is rejected.
    pub fn new(mut values: Vec<f64>, provenance: impl Into<String>) -> Result<Self> {
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Invalid("singular values must be finite and nonnegative".into()));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values, provenance: provenance.into() })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, p: impl Into<String>) -> Self {
        self.provenance = p.into();
        self
    }

    /// Least-squares slope of `ln μ_k` against `ln(k+1)` for `k ∈ [lo, hi]`, skipping zeros.
    pub fn loglog_slope(&self, lo: usize, hi: usize) -> Option<LinearFit> {
        let hi = hi.min(self.values.len().saturating_sub(1));
        let (xs, ys): (Vec<f64>, Vec<f64>) = (lo..=hi)
            .filter(|&k| self.values[k] > 0.0)
            .map(|k| (((k + 1) as f64).ln(), self.values[k].ln()))
            .unzip();
        linear_fit(&xs, &ys)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeakQuasinorm {
    /// `sup_k (k+1)^{1/p} μ_k`.
    pub sup: f64,
    pub argmax: usize,
    /// Same sup restricted to the last dyadic block `[2^j, len)`.
    pub tail_sup: f64,
    pub tail_start: usize,
}

pub fn weak_quasinorm(mu: &SingularValueSequence, p: f64) -> Result<WeakQuasinorm> {
    if !(p > 0.0) {
        return Err(Error::Invalid(format!("weak quasinorm exponent {p} must be positive")));
    }
    let v = mu.values();
    if v.is_empty() {
        return Err(Error::Empty("singular value sequence"));
    }
    let weighted = |k: usize| ((k + 1) as f64).powf(1.0 / p) * v[k];
    let (mut sup, mut argmax) = (f64::NEG_INFINITY, 0);
    for k in 0..v.len() {
        let w = weighted(k);
        if w > sup {
            sup = w;
            argmax = k;
        }
    }
    let n = v.len();
    let tail_start = if n == 1 { 0 } else { 1usize << (usize::BITS - 1 - (n - 1).leading_zeros()) };
    let tail_start = if tail_start >= n { n / 2 } else { tail_start };
    let tail_sup = (tail_start..n).map(weighted).fold(0.0, f64::max);
    Ok(WeakQuasinorm { sup, argmax, tail_sup, tail_start })
}

/// Tuning for [`singular_values_with`].
#[derive(Clone, Copy, Debug)]
pub struct SvdOptions {
    /// Components with both dimensions at most this size use one-sided Jacobi.
    pub dense_limit: usize,
    /// Relative residual target for each returned value.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for SvdOptions {
    fn default() -> Self {
        Self { dense_limit: 512, tolerance: 1e-8, seed: 0x5eed_0001 }
    }
}

pub fn singular_values<I: FrequencyIndex, S: Scalar>(
    a: &SparseOperator<I, S>,
    count: usize,
) -> Result<SingularValueSequence> {
    singular_values_with(a, count, SvdOptions::default())
}

/// The largest `count` singular values of a compressed operator.
///
/// The matrix is split into connected components of its row/column incidence
/// graph; each component is solved densely or by Lanczos bidiagonalization,
/// and unmatched rows/columns contribute exact zeros.
pub fn singular_values_with<I: FrequencyIndex, S: Scalar>(
    a: &SparseOperator<I, S>,
    count: usize,
    opts: SvdOptions,
) -> Result<SingularValueSequence> {
    let n = a.basis().len();
    if count > n {
        return Err(Error::Invalid(format!("requested {count} singular values from a window of size {n}")));
    }
    let pos: BTreeMap<I, usize> = a.basis().iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let triplets: Vec<(usize, usize, Complex)> =
        a.entries().map(|(r, c, v)| (pos[&r], pos[&c], v.to_complex())).filter(|t| t.2 != Complex::new(0.0, 0.0)).collect();
    let real = triplets.iter().all(|t| t.2.im == 0.0);
    let mut values = if real {
        component_values::<f64>(&triplets, n, count, opts)?
    } else {
        component_values::<Complex>(&triplets, n, count, opts)?
    };
    values.sort_by(|x, y| y.total_cmp(x));
    values.truncate(count);
    values.resize(count, 0.0);
    SingularValueSequence::new(values, format!("window {:?}, {} nonzeros", a.window(), triplets.len()))
}

/// Arithmetic shared by the real and complex solvers.
trait Field:
    Copy + Debug + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + AddAssign + SubAssign
{
    fn zero() -> Self;
    fn conj(self) -> Self;
    fn abs2(self) -> f64;
    fn scale(self, s: f64) -> Self;
    fn from_complex(c: Complex) -> Self;
    fn random<R: Rng>(rng: &mut R) -> Self;
    /// `x / |x|`, or 1 for zero.
    fn unit(self) -> Self;
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn conj(self) -> Self {
        self
    }
    fn abs2(self) -> f64 {
        self * self
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn from_complex(c: Complex) -> Self {
        c.re
    }
    fn random<R: Rng>(rng: &mut R) -> Self {
        rng.gen_range(-1.0..1.0)
    }
    fn unit(self) -> Self {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

impl Field for Complex {
    fn zero() -> Self {
        Complex::new(0.0, 0.0)
    }
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
    fn abs2(self) -> f64 {
        self.norm_sqr()
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn from_complex(c: Complex) -> Self {
        c
    }
    fn random<R: Rng>(rng: &mut R) -> Self {
        Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }
    fn unit(self) -> Self {
        let r = self.norm();
        if r == 0.0 {
            Complex::new(1.0, 0.0)
        } else {
            self / r
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Compressed sparse rows of one component, with local indices.
struct Csr<T> {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<T>,
}

impl<T: Field> Csr<T> {
    fn from_triplets(rows: usize, cols: usize, mut t: Vec<(usize, usize, T)>) -> Self {
        t.sort_by_key(|x| (x.0, x.1));
        let mut row_ptr = vec![0; rows + 1];
        for x in &t {
            row_ptr[x.0 + 1] += 1;
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { rows, cols, row_ptr, col_idx: t.iter().map(|x| x.1).collect(), vals: t.iter().map(|x| x.2).collect() }
    }

    fn mul(&self, x: &[T], y: &mut [T]) {
        for i in 0..self.rows {
            let mut acc = T::zero();
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[p] * x[self.col_idx[p]];
            }
            y[i] = acc;
        }
    }

    fn mul_adjoint(&self, x: &[T], y: &mut [T]) {
        y.iter_mut().for_each(|v| *v = T::zero());
        for i in 0..self.rows {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                y[self.col_idx[p]] += self.vals[p].conj() * x[i];
            }
        }
    }

    fn adjoint(&self) -> Self {
        let mut t = Vec::with_capacity(self.vals.len());
        for i in 0..self.rows {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                t.push((self.col_idx[p], i, self.vals[p].conj()));
            }
        }
        Self::from_triplets(self.cols, self.rows, t)
    }

    fn frobenius(&self) -> f64 {
        self.vals.iter().map(|v| v.abs2()).sum::<f64>().sqrt()
    }

    fn dense_columns(&self) -> Vec<Vec<T>> {
        let mut cols = vec![vec![T::zero(); self.rows]; self.cols];
        for i in 0..self.rows {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                cols[self.col_idx[p]][i] = self.vals[p];
            }
        }
        cols
    }
}

fn component_values<T: Field>(
    triplets: &[(usize, usize, Complex)],
    n: usize,
    count: usize,
    opts: SvdOptions,
) -> Result<Vec<f64>> {
    // Rows are nodes 0..n, columns n..2n.
    let mut uf = UnionFind::new(2 * n);
    for &(r, c, _) in triplets {
        uf.union(r, n + c);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, t) in triplets.iter().enumerate() {
        groups.entry(uf.find(t.0)).or_default().push(i);
    }
    let mut out = Vec::new();
    for members in groups.values() {
        let mut rmap: BTreeMap<usize, usize> = BTreeMap::new();
        let mut cmap: BTreeMap<usize, usize> = BTreeMap::new();
        for &i in members {
            let (r, c, _) = triplets[i];
            let nr = rmap.len();
            rmap.entry(r).or_insert(nr);
            let nc = cmap.len();
            cmap.entry(c).or_insert(nc);
        }
        let local: Vec<(usize, usize, T)> =
            members.iter().map(|&i| (rmap[&triplets[i].0], cmap[&triplets[i].1], T::from_complex(triplets[i].2))).collect();
        let csr = Csr::from_triplets(rmap.len(), cmap.len(), local);
        let want = count.min(csr.rows.min(csr.cols));
        if want == 0 {
            continue;
        }
        let vals = if csr.rows.max(csr.cols) <= opts.dense_limit {
            jacobi_singular_values(csr.dense_columns(), csr.rows)
        } else if csr.rows >= csr.cols {
            lanczos_singular_values(&csr, want, opts)?
        } else {
            lanczos_singular_values(&csr.adjoint(), want, opts)?
        };
        out.extend(vals.into_iter().take(want));
    }
    Ok(out)
}

/// One-sided Jacobi on the columns; returns all singular values, descending.
fn jacobi_singular_values<T: Field>(mut cols: Vec<Vec<T>>, rows: usize) -> Vec<f64> {
    if cols.len() > rows {
        // Work with the conjugate transpose so that columns are the short side.
        let mut t = vec![vec![T::zero(); cols.len()]; rows];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                t[i][j] = v.conj();
            }
        }
        cols = t;
    }
    let n = cols.len();
    let norm2 = |c: &[T]| c.iter().map(|v| v.abs2()).sum::<f64>();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm2(&cols[p]);
                let beta = norm2(&cols[q]);
                let mut gamma = T::zero();
                for (x, y) in cols[p].iter().zip(&cols[q]) {
                    gamma += x.conj() * *y;
                }
                let g = gamma.abs2().sqrt();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma.unit().conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (lo, hi) = cols.split_at_mut(q);
                for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                    let yq = *y * phase;
                    let xp = *x;
                    *x = xp.scale(c) - yq.scale(s);
                    *y = xp.scale(s) + yq.scale(c);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut v: Vec<f64> = cols.iter().map(|c| norm2(c).sqrt()).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn norm<T: Field>(v: &[T]) -> f64 {
    v.iter().map(|x| x.abs2()).sum::<f64>().sqrt()
}

/// Two passes of classical Gram-Schmidt against an orthonormal set.
fn reorthogonalize<T: Field>(v: &mut [T], basis: &[Vec<T>]) {
    for _ in 0..2 {
        for b in basis {
            let mut h = T::zero();
            for (x, y) in b.iter().zip(v.iter()) {
                h += x.conj() * *y;
            }
            for (x, y) in b.iter().zip(v.iter_mut()) {
                *y -= *x * h;
            }
        }
    }
}

/// Random unit vector orthogonal to `basis`, or `None` if the space is exhausted.
fn fresh_direction<T: Field>(dim: usize, basis: &[Vec<T>], rng: &mut ChaCha8Rng) -> Option<Vec<T>> {
    if basis.len() >= dim {
        return None;
    }
    for _ in 0..8 {
        let mut v: Vec<T> = (0..dim).map(|_| T::random(rng)).collect();
        reorthogonalize(&mut v, basis);
        let r = norm(&v);
        if r > 1e-8 {
            v.iter_mut().for_each(|x| *x = x.scale(1.0 / r));
            return Some(v);
        }
    }
    None
}

/// Golub-Kahan-Lanczos bidiagonalization with full reorthogonalization.
///
/// Requires `rows >= cols`, so that after `cols` steps the right Krylov space
/// is complete and the bidiagonal carries every singular value.
fn lanczos_singular_values<T: Field>(a: &Csr<T>, want: usize, opts: SvdOptions) -> Result<Vec<f64>> {
    debug_assert!(a.rows >= a.cols);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let max_steps = a.cols;
    let breakdown = 1e-14 * a.frobenius().max(f64::MIN_POSITIVE);
    let mut us: Vec<Vec<T>> = Vec::new();
    let mut vs: Vec<Vec<T>> = Vec::new();
    let (mut alphas, mut betas) = (Vec::new(), Vec::new());
    let mut v = fresh_direction(a.cols, &vs, &mut rng).ok_or(Error::Empty("component"))?;
    let mut next_check = (want + 16).min(max_steps);
    let mut u = vec![T::zero(); a.rows];
    let mut w = vec![T::zero(); a.cols];
    for step in 0..max_steps {
        a.mul(&v, &mut u);
        if let (Some(prev), Some(&b)) = (us.last(), betas.last()) {
            for (x, y) in u.iter_mut().zip(prev) {
                *x -= y.scale(b);
            }
        }
        reorthogonalize(&mut u, &us);
        let mut alpha = norm(&u);
        if alpha <= breakdown {
            alpha = 0.0;
            u = fresh_direction(a.rows, &us, &mut rng).ok_or(Error::NonConvergence { steps: step, residual: 0.0 })?;
        } else {
            u.iter_mut().for_each(|x| *x = x.scale(1.0 / alpha));
        }
        alphas.push(alpha);
        us.push(u.clone());
        vs.push(v.clone());

        let exhausted = step + 1 == max_steps;
        let mut beta = 0.0;
        if !exhausted {
            a.mul_adjoint(&u, &mut w);
            for (x, y) in w.iter_mut().zip(&v) {
                *x -= y.scale(alpha);
            }
            reorthogonalize(&mut w, &vs);
            beta = norm(&w);
            if beta <= breakdown {
                beta = 0.0;
            }
        }
        if step + 1 >= next_check || exhausted {
            let (sigma, resid) = bidiagonal_ritz(&alphas, &betas, beta)?;
            let s0 = sigma.first().copied().unwrap_or(0.0);
            let mut worst: f64 = 0.0;
            for i in 0..want.min(sigma.len()) {
                let scale = sigma[i].max(1e-12 * s0).max(f64::MIN_POSITIVE);
                worst = worst.max(resid[i] / scale);
            }
            if sigma.len() >= want && worst <= opts.tolerance {
                return Ok(sigma);
            }
            if exhausted {
                return Err(Error::NonConvergence { steps: step + 1, residual: worst });
            }
            next_check = ((next_check as f64 * 1.3) as usize).max(next_check + 8).min(max_steps);
        }
        if beta == 0.0 {
            w = fresh_direction(a.cols, &vs, &mut rng).ok_or(Error::NonConvergence { steps: step, residual: 0.0 })?;
        } else {
            w.iter_mut().for_each(|x| *x = x.scale(1.0 / beta));
        }
        betas.push(beta);
        v = core::mem::replace(&mut w, vec![T::zero(); a.cols]);
    }
    Err(Error::NonConvergence { steps: max_steps, residual: f64::INFINITY })
}

/// Singular values of the upper bidiagonal matrix (diag `alphas`, superdiag
/// `betas`) and residual bounds `beta_next · |x_i(last)|` for the Ritz triplets.
fn bidiagonal_ritz(alphas: &[f64], betas: &[f64], beta_next: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let k = alphas.len();
    let n = 2 * k;
    // Golub-Kahan tridiagonal: zero diagonal, off-diagonal α1, β1, α2, ..., αk.
    let mut off = Vec::with_capacity(n);
    for i in 0..k {
        off.push(alphas[i]);
        if i + 1 < k {
            off.push(betas[i]);
        }
    }
    off.push(0.0);
    let mut d = vec![0.0; n];
    let mut last_row = vec![0.0; n];
    last_row[n - 1] = 1.0;
    tridiagonal_ql(&mut d, &mut off, &mut last_row)?;
    let mut pairs: Vec<(f64, f64)> = d
        .iter()
        .zip(&last_row)
        .filter(|(l, _)| **l >= 0.0)
        .map(|(l, z)| (*l, beta_next * core::f64::consts::SQRT_2 * z.abs()))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    pairs.truncate(k);
    Ok(pairs.into_iter().unzip())
}

/// Implicit QL on a symmetric tridiagonal matrix (diag `d`, off-diagonal `e`
/// with `e[i]` coupling `i, i+1`). Only the last row of the eigenvector
/// matrix is accumulated.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m] == 0.0 {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 200 {
                return Err(Error::NonConvergence { steps: iter, residual: e[l].abs() });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigenvalues of the dyadic Hankel block `H_L = Σ_j w_j R_j`, where `R_j`
/// reverses the first `2^j` coordinates, via
/// `H_J ≅ [[H_{J-1}, w_J I], [w_J I, 0]]`.
fn dyadic_hankel_eigenvalues(weights: &[f64]) -> Vec<f64> {
    let Some((&w0, rest)) = weights.split_first() else {
        return Vec::new();
    };
    let mut eig = vec![w0];
    for &w in rest {
        let c2 = w * w;
        let mut next = Vec::with_capacity(2 * eig.len());
        for &l in &eig {
            // Roots of x² - l x - w² = 0, computed without cancellation.
            let disc = (l * l + 4.0 * c2).sqrt();
            let big = 0.5 * (l + if l >= 0.0 { disc } else { -disc });
            let small = if big == 0.0 { 0.0 } else { -c2 / big };
            next.push(big);
            next.push(small);
        }
        eig = next;
    }
    eig
}

/// Singular values of `[P, Σ_{j<=L} w_j z^{2^j}]` for real weights, all `2^L` nonzero ones.
///
/// The commutator's only nonzero block is the Hankel corner `H_L`, which is
/// real symmetric, so its singular values are the moduli of its eigenvalues.
pub fn lacunary_szego_singular_values(weights: &[f64]) -> Result<SingularValueSequence> {
    if weights.is_empty() || weights.len() > 31 {
        return Err(Error::Invalid(format!("need 1..=31 lacunary weights, got {}", weights.len())));
    }
    let v = dyadic_hankel_eigenvalues(weights).into_iter().map(f64::abs).collect();
    SingularValueSequence::new(v, format!("dyadic Hankel recursion, level {}", weights.len() - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::op::{commutator, OperatorModel, TruncationWindow};
    use crate::seq::{lacunary_series, BoundedSequence, CircleSeries, GaussRational as Q, HolderExponent};

    #[test]
    fn rank_one_and_zero() {
        let w = TruncationWindow::Symmetric(4);
        let c = commutator(OperatorModel::CircleF, &CircleSeries::<Q>::z_pow(1), w).unwrap();
        let s = singular_values(&c, 1).unwrap();
        assert_eq!(s.values(), &[2.0]);
        let zero = commutator(OperatorModel::CircleF, &CircleSeries::<Q>::one(), w).unwrap();
        assert_eq!(singular_values(&zero, 9).unwrap().values(), &[0.0; 9]);
        assert!(singular_values(&zero, 10).is_err());
    }

    #[test]
    fn quasinorm_examples() {
        let mu = SingularValueSequence::new((0..64).map(|k| ((k + 1) as f64).powf(-0.5)).collect(), "").unwrap();
        let q = weak_quasinorm(&mu, 2.0).unwrap();
        assert!((q.sup - 1.0).abs() < 1e-14);
        assert_eq!(q.tail_start, 32);
        let single = SingularValueSequence::new(vec![2.0], "").unwrap();
        assert_eq!(weak_quasinorm(&single, 2.0).unwrap().sup, 2.0);
        assert!(weak_quasinorm(&SingularValueSequence::new(vec![], "").unwrap(), 2.0).is_err());
    }

    #[test]
    fn trig_polynomial_tail_is_exactly_zero() {
        let a = CircleSeries::<Q>::z_pow(1).add(&CircleSeries::z_pow(-1));
        let c = commutator(OperatorModel::SzegoP, &a, TruncationWindow::Symmetric(64)).unwrap();
        let mu = singular_values(&c, 64).unwrap();
        assert_eq!(mu.values()[..2], [1.0, 1.0]);
        assert!(mu.values()[2..].iter().all(|v| *v == 0.0));
        assert_eq!(weak_quasinorm(&mu, 2.0).unwrap().tail_sup, 0.0);
    }

    #[test]
    fn ql_on_small_tridiagonal() {
        // [[2,1,0],[1,2,1],[0,1,2]] has eigenvalues 2 - √2, 2, 2 + √2.
        let mut d = [2.0, 2.0, 2.0];
        let mut e = [1.0, 1.0, 0.0];
        let mut z = [0.0, 0.0, 1.0];
        tridiagonal_ql(&mut d, &mut e, &mut z).unwrap();
        let mut s = d.to_vec();
        s.sort_by(f64::total_cmp);
        let r2 = 2f64.sqrt();
        for (x, y) in s.iter().zip([2.0 - r2, 2.0, 2.0 + r2]) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!((z.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn recursion_matches_dense_route_at_level_eight() {
        let half = HolderExponent::new(0.5).unwrap();
        let a = lacunary_series(&BoundedSequence::ones(), half, 8).unwrap();
        let c = commutator(OperatorModel::SzegoP, &a, TruncationWindow::Band { lo: -256, hi: 255 }).unwrap();
        let generic = singular_values(&c, 256).unwrap();
        let weights: Vec<f64> = (0..=8).map(|j| 2f64.powf(-0.5 * j as f64)).collect();
        let fast = lacunary_szego_singular_values(&weights).unwrap();
        for (x, y) in generic.values().iter().zip(fast.values()) {
            assert!((x - y).abs() <= 1e-10 * fast.values()[0], "{x} vs {y}");
        }
    }

    #[test]
    fn complex_matrix_dense_route() {
        // diag(3i, -4) embedded as a 2x2 component.
        let a = CircleSeries::<Complex>::from_terms([(1, Complex::new(0.0, 3.0))]);
        let c = commutator(OperatorModel::CircleF, &a, TruncationWindow::Symmetric(3)).unwrap();
        assert_eq!(singular_values(&c, 1).unwrap().values(), &[6.0]);
    }
}
