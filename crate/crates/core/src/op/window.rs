use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::seq::{Domain, FrequencyIndex};

/// Finite set of basis indices, with a canonical enumeration order.
///
/// Circle: symmetric band `{-N..N}` (order 0,-1,1,-2,2,...), one-sided `{0..N}`,
/// or an explicit band `{lo..hi}` (symmetric order restricted to the band).
/// Torus: `Shells(N)` is `E_N = {|k|² <= λ_N}` with `λ_0 = 0 < λ_1 < ...` the
/// distinct values of `|k|²`; `Disc(r2)` is `{|k|² <= r2}`. Torus order is by
/// `|k|²`, ties lexicographic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruncationWindow {
    Symmetric(u64),
    OneSided(u64),
    Band { lo: i64, hi: i64 },
    Shells(u64),
    Disc(u64),
}

impl TruncationWindow {
    pub fn domain(&self) -> Domain {
        match self {
            TruncationWindow::Shells(_) | TruncationWindow::Disc(_) => Domain::Torus,
            _ => Domain::Circle,
        }
    }

    /// Number of basis vectors.
    pub fn size(&self) -> u64 {
        match *self {
            TruncationWindow::Symmetric(n) => 2 * n + 1,
            TruncationWindow::OneSided(n) => n + 1,
            TruncationWindow::Band { lo, hi } => (hi - lo + 1).max(0) as u64,
            TruncationWindow::Shells(n) => disc_count(shell_radius_sq(n)),
            TruncationWindow::Disc(r2) => disc_count(r2),
        }
    }

    pub fn contains<I: FrequencyIndex>(&self, k: I) -> bool {
        if I::DOMAIN != self.domain() {
            return false;
        }
        let [a, b] = k.coords();
        match *self {
            TruncationWindow::Symmetric(n) => a.unsigned_abs() <= n,
            TruncationWindow::OneSided(n) => a >= 0 && (a as u64) <= n,
            TruncationWindow::Band { lo, hi } => lo <= a && a <= hi,
            TruncationWindow::Shells(n) => norm_sq(a, b) <= shell_radius_sq(n) as u128,
            TruncationWindow::Disc(r2) => norm_sq(a, b) <= r2 as u128,
        }
    }

    /// Window enlarged so that every index within sup-distance `by` of it is included.
    pub fn inflate(&self, by: u64) -> Self {
        let b = by as i64;
        match *self {
            TruncationWindow::Symmetric(n) => TruncationWindow::Symmetric(n + by),
            TruncationWindow::OneSided(n) => TruncationWindow::Band { lo: -b, hi: n as i64 + b },
            TruncationWindow::Band { lo, hi } => TruncationWindow::Band { lo: lo - b, hi: hi + b },
            TruncationWindow::Shells(n) => disc_inflate(shell_radius_sq(n), by),
            TruncationWindow::Disc(r2) => disc_inflate(r2, by),
        }
    }

    /// Basis indices in canonical order.
    pub fn basis<I: FrequencyIndex>(&self) -> Result<Vec<I>> {
        if I::DOMAIN != self.domain() {
            return Err(Error::Domain("window and index type"));
        }
        Ok(match *self {
            TruncationWindow::Symmetric(n) => symmetric_order(-(n as i64), n as i64).map(I::from_coords).collect(),
            TruncationWindow::OneSided(n) => (0..=n as i64).map(|k| I::from_coords([k, 0])).collect(),
            TruncationWindow::Band { lo, hi } => symmetric_order(lo, hi).map(I::from_coords).collect(),
            TruncationWindow::Shells(n) => disc_points(shell_radius_sq(n)).into_iter().map(I::from_coords).collect(),
            TruncationWindow::Disc(r2) => disc_points(r2).into_iter().map(I::from_coords).collect(),
        })
    }
}

fn norm_sq(a: i64, b: i64) -> u128 {
    (a as i128 * a as i128 + b as i128 * b as i128) as u128
}

fn symmetric_order(lo: i64, hi: i64) -> impl Iterator<Item = [i64; 2]> {
    let reach = lo.unsigned_abs().max(hi.unsigned_abs()) as i64;
    (0..=reach)
        .flat_map(|r| if r == 0 { [Some(0), None] } else { [Some(-r), Some(r)] })
        .flatten()
        .filter(move |k| lo <= *k && *k <= hi)
        .map(|k| [k, 0])
}

fn disc_inflate(r2: u64, by: u64) -> TruncationWindow {
    let r = (r2 as f64).sqrt() + by as f64 * core::f64::consts::SQRT_2;
    TruncationWindow::Disc((r * r).ceil() as u64 + 1)
}

fn disc_points(r2: u64) -> Vec<[i64; 2]> {
    let r = isqrt(r2) as i64;
    let mut pts: Vec<(u64, [i64; 2])> = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            let n = (a * a + b * b) as u64;
            if n <= r2 {
                pts.push((n, [a, b]));
            }
        }
    }
    pts.sort_unstable();
    pts.into_iter().map(|(_, p)| p).collect()
}

fn disc_count(r2: u64) -> u64 {
    let r = isqrt(r2) as i64;
    (-r..=r).map(|a| 2 * isqrt(r2 - (a * a) as u64) + 1).sum()
}

fn isqrt(n: u64) -> u64 {
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// `λ_0 < λ_1 < ... < λ_n`: the first `n + 1` distinct values of `k1² + k2²`.
pub fn laplacian_levels(n: u64) -> Vec<u64> {
    let mut bound = 8 * (n + 1);
    loop {
        let r = isqrt(bound) as i64;
        let mut vals = BTreeSet::new();
        for a in 0..=r {
            for b in 0..=a {
                let v = (a * a + b * b) as u64;
                if v <= bound {
                    vals.insert(v);
                }
            }
        }
        if vals.len() as u64 > n {
            return vals.into_iter().take(n as usize + 1).collect();
        }
        bound *= 2;
    }
}

fn shell_radius_sq(n: u64) -> u64 {
    *laplacian_levels(n).last().expect("levels are never empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::TorusIndex;

    #[test]
    fn symmetric_canonical_order() {
        let b: Vec<i64> = TruncationWindow::Symmetric(2).basis().unwrap();
        assert_eq!(b, [0, -1, 1, -2, 2]);
        let c: Vec<i64> = TruncationWindow::Band { lo: -1, hi: 3 }.basis().unwrap();
        assert_eq!(c, [0, -1, 1, 2, 3]);
        let d: Vec<i64> = TruncationWindow::OneSided(3).basis().unwrap();
        assert_eq!(d, [0, 1, 2, 3]);
    }

    #[test]
    fn first_levels() {
        // 0, 1, 2, 4, 5, 8, 9, 10, 13, 16, 17, 18, 20, 25
        assert_eq!(laplacian_levels(13), [0, 1, 2, 4, 5, 8, 9, 10, 13, 16, 17, 18, 20, 25]);
    }

    #[test]
    fn shells_are_nested_and_symmetric() {
        for n in 0..30u64 {
            let w = TruncationWindow::Shells(n);
            let pts: Vec<TorusIndex> = w.basis().unwrap();
            assert_eq!(pts.len() as u64, w.size());
            let next = TruncationWindow::Shells(n + 1);
            for p in &pts {
                assert!(next.contains(*p));
                assert!(w.contains(TorusIndex::new(-p.k1, -p.k2)));
                assert!(w.contains(TorusIndex::new(p.k2, p.k1)));
            }
        }
        let e1: Vec<TorusIndex> = TruncationWindow::Shells(1).basis().unwrap();
        assert_eq!(
            e1,
            [TorusIndex::new(0, 0), TorusIndex::new(-1, 0), TorusIndex::new(0, -1), TorusIndex::new(0, 1), TorusIndex::new(1, 0)]
        );
    }

    #[test]
    fn inflation_covers_neighbours() {
        let w = TruncationWindow::Shells(6);
        let big = w.inflate(2);
        for p in w.basis::<TorusIndex>().unwrap() {
            for (da, db) in [(2, 2), (-2, 1), (0, -2)] {
                assert!(big.contains(TorusIndex::new(p.k1 + da, p.k2 + db)));
            }
        }
        assert_eq!(TruncationWindow::OneSided(4).inflate(2), TruncationWindow::Band { lo: -2, hi: 6 });
    }
}
