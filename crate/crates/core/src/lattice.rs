//! Exact enumeration of the orbit values `4u(z, γw) + 2 ≤ X`.
//!
//! Write `Q(g) = ‖σ_z⁻¹ g σ_w‖²` where `σ_p` maps `i` to `p`. The second row of
//! `σ_z⁻¹ g σ_w` depends only on `(c, d)`, and because the scaled matrix has
//! determinant one, its first row sits at perpendicular distance
//! `1/|row₂|` from the line traced by the solution family
//! `(a, b) = (a₀ + tc, b₀ + td)`. That gives a closed-form `t`-interval for each
//! coprime pair, so the sweep never visits a matrix outside the ball by more
//! than a rounding margin.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypgeom::{frobenius_value, scaled_rows, GroupElement, Point};

const BOUND_MARGIN: f64 = 1e-9;

/// Significant decimals used to merge floating-point orbit values.
const MERGE_DIGITS: i32 = 12;

/// The modular group or one of its congruence subgroups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupModel {
    FullModular,
    /// `Γ₀(N)`: `c ≡ 0 (mod N)`.
    Hecke(u64),
    /// `Γ(N)`: `g ≡ ±I (mod N)`.
    Principal(u64),
}

impl GroupModel {
    pub fn hecke(n: i64) -> Result<Self> {
        Ok(match check_level(n)? {
            1 => GroupModel::FullModular,
            n => GroupModel::Hecke(n),
        })
    }

    pub fn principal(n: i64) -> Result<Self> {
        Ok(match check_level(n)? {
            1 => GroupModel::FullModular,
            n => GroupModel::Principal(n),
        })
    }

    /// Level `N`; 1 for the full modular group.
    pub fn level(&self) -> u64 {
        match *self {
            GroupModel::FullModular => 1,
            GroupModel::Hecke(n) | GroupModel::Principal(n) => n,
        }
    }

    pub fn is_full_modular(&self) -> bool {
        self.level() == 1
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match *self {
            GroupModel::FullModular => true,
            GroupModel::Hecke(n) => g.c().rem_euclid(n as i64) == 0,
            GroupModel::Principal(n) => {
                let n = n as i64;
                let [a, b, c, d] = g.entries().map(|v| v.rem_euclid(n));
                if b != 0 || c != 0 {
                    return false;
                }
                (a == 1 % n && d == 1 % n) || (a == n - 1 && d == n - 1)
            }
        }
    }

    /// Index of the image of the group in PSL(2,Z).
    pub fn psl_index(&self) -> u64 {
        match *self {
            GroupModel::FullModular => 1,
            GroupModel::Hecke(n) => {
                let mut idx = n;
                for p in prime_divisors(n) {
                    idx = idx / p * (p + 1);
                }
                idx
            }
            GroupModel::Principal(2) => 6,
            GroupModel::Principal(n) => {
                let mut idx = n * n * n;
                for p in prime_divisors(n) {
                    idx = idx / (p * p) * (p * p - 1);
                }
                idx / 2
            }
        }
    }

    /// Hyperbolic area of the quotient, `(π/3)·index`.
    pub fn covolume(&self) -> f64 {
        std::f64::consts::PI / 3.0 * self.psl_index() as f64
    }
}

fn check_level(n: i64) -> Result<u64> {
    if n <= 0 {
        return Err(Error::InvalidGroup(format!("level must be positive, got {n}")));
    }
    Ok(n as u64)
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupModel::FullModular => write!(f, "psl2z"),
            GroupModel::Hecke(n) => write!(f, "gamma0:{n}"),
            GroupModel::Principal(n) => write!(f, "gammaN:{n}"),
        }
    }
}

impl FromStr for GroupModel {
    type Err = Error;

    /// Accepts `psl2z`, `gamma0:N` and `gammaN:N`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("psl2z") {
            return Ok(GroupModel::FullModular);
        }
        let (kind, level) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidGroup(format!("unknown group {s:?}")))?;
        let n: i64 = level
            .trim()
            .parse()
            .map_err(|_| Error::InvalidGroup(format!("bad level {level:?}")))?;
        match kind {
            "gamma0" => GroupModel::hecke(n),
            "gammaN" | "gamma" => GroupModel::principal(n),
            _ => Err(Error::InvalidGroup(format!("unknown group {s:?}"))),
        }
    }
}

/// Sorted multiset of orbit values up to a cap.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitProfile {
    z: Point,
    w: Point,
    cap: f64,
    values: Vec<(f64, u64)>,
    prefix: Vec<u64>,
}

impl OrbitProfile {
    fn from_sorted(z: Point, w: Point, cap: f64, values: Vec<(f64, u64)>) -> Self {
        let prefix = values
            .iter()
            .scan(0u64, |acc, &(_, m)| {
                *acc += m;
                Some(*acc)
            })
            .collect();
        OrbitProfile { z, w, cap, values, prefix }
    }

    pub fn z(&self) -> Point {
        self.z
    }

    pub fn w(&self) -> Point {
        self.w
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    /// Distinct values `v` with their multiplicities, strictly increasing in `v`.
    pub fn values(&self) -> &[(f64, u64)] {
        &self.values
    }

    pub fn total(&self) -> u64 {
        self.prefix.last().copied().unwrap_or(0)
    }

    /// `N(x)` for any `x ≤ cap`.
    pub fn count_le(&self, x: f64) -> u64 {
        let k = self.values.partition_point(|&(v, _)| v <= x);
        if k == 0 {
            0
        } else {
            self.prefix[k - 1]
        }
    }
}

/// All PSL-classes `γ` of the group with `4u(z, γw) + 2 ≤ x`.
pub fn enumerate(group: GroupModel, z: Point, w: Point, x: f64) -> Result<OrbitProfile> {
    if x.is_nan() || x < 2.0 {
        return Err(Error::EmptyProfile(x));
    }
    if !x.is_finite() {
        return Err(Error::domain("cap must be finite"));
    }
    let exact = z.is_i() && w.is_i();
    let mut raw = raw_values(group, z, w, x);
    raw.par_sort_unstable_by(|a, b| a.total_cmp(b));

    let mut values: Vec<(f64, u64)> = Vec::new();
    if exact {
        for v in raw {
            match values.last_mut() {
                Some((last, m)) if *last == v => *m += 1,
                _ => values.push((v, 1)),
            }
        }
    } else {
        let mut last_key = f64::NAN;
        for v in raw {
            let key = round_significant(v, MERGE_DIGITS);
            match values.last_mut() {
                Some((_, m)) if key == last_key => *m += 1,
                _ => {
                    values.push((v, 1));
                    last_key = key;
                }
            }
        }
    }
    Ok(OrbitProfile::from_sorted(z, w, x, values))
}

/// `N(X; z, w)`. Zero for `X < 2`, where no element qualifies.
pub fn count(group: GroupModel, z: Point, w: Point, x: f64) -> Result<u64> {
    if x < 2.0 {
        return Ok(0);
    }
    Ok(enumerate(group, z, w, x)?.total())
}

/// `(X, N(X))` along a strictly increasing grid, from a single enumeration.
pub fn count_curve(group: GroupModel, z: Point, w: Point, grid: &[f64]) -> Result<Vec<(f64, u64)>> {
    if grid.windows(2).any(|p| !(p[0] < p[1])) {
        return Err(Error::contract("grid must be strictly increasing"));
    }
    let Some(&xmax) = grid.last() else {
        return Ok(Vec::new());
    };
    if xmax < 2.0 {
        return Ok(grid.iter().map(|&x| (x, 0)).collect());
    }
    let profile = enumerate(group, z, w, xmax)?;
    Ok(grid.iter().map(|&x| (x, profile.count_le(x))).collect())
}

fn round_significant(v: f64, digits: i32) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    let e = v.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits - 1 - e);
    (v * scale).round() / scale
}

/// Extended gcd: `(g, s, t)` with `s·a + t·b = g`, `g ≥ 0`.
fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

struct Sweep {
    group: GroupModel,
    z: Point,
    w: Point,
    x: f64,
    cap: f64,
    row2_max: f64,
}

impl Sweep {
    fn new(group: GroupModel, z: Point, w: Point, x: f64) -> Self {
        let cap = x * (1.0 + BOUND_MARGIN);
        // |row₂|² + |row₂|⁻² ≤ Q, so |row₂|² is below the larger root.
        let row2_max = 0.5 * (cap + (cap * cap - 4.0).max(0.0).sqrt());
        Sweep { group, z, w, x, cap, row2_max }
    }

    fn c_values(&self) -> impl ParallelIterator<Item = i64> {
        let level = self.group.level() as i64;
        let c_max = (self.row2_max / (self.z.y() * self.w.y())).sqrt().floor() as i64;
        (0..=c_max).into_par_iter().filter(move |c| c % level == 0)
    }

    /// Calls `f` on every qualifying element with lower-left entry `c`.
    fn visit(&self, c: i64, mut f: impl FnMut(f64, GroupElement)) {
        let (z, w) = (self.z, self.w);
        let (d_lo, d_hi) = if c == 0 {
            (1, 1)
        } else {
            // |row₂|² = yz yw c² + (yz/yw)(c xw + d)²
            let rem = self.row2_max - z.y() * w.y() * (c as f64).powi(2);
            if rem < 0.0 {
                return;
            }
            let s = (rem * w.y() / z.y()).sqrt();
            let centre = -(c as f64) * w.x();
            ((centre - s).ceil() as i64, (centre + s).floor() as i64)
        };
        for d in d_lo..=d_hi {
            let (g, s, t) = egcd(d, c);
            if g != 1 {
                continue;
            }
            // s·d + t·c = 1, so (a₀, b₀) = (s, −t) has a₀d − b₀c = 1.
            let (a0, b0) = (s, -t);
            let (r1, r2) = scaled_rows(a0 as f64, b0 as f64, c as f64, d as f64, z, w);
            let row2_sq = r2[0] * r2[0] + r2[1] * r2[1];
            let v1 = [r2[0] / z.y(), r2[1] / z.y()];
            let v1_sq = v1[0] * v1[0] + v1[1] * v1[1];
            let t_star = -(r1[0] * v1[0] + r1[1] * v1[1]) / v1_sq;
            // The family's closest approach to the origin has squared norm 1/|row₂|².
            let slack = self.cap - row2_sq - 1.0 / row2_sq;
            if slack < -BOUND_MARGIN * self.cap {
                continue;
            }
            let half = (slack.max(0.0) / v1_sq).sqrt() * (1.0 + BOUND_MARGIN) + BOUND_MARGIN;
            let t_lo = (t_star - half).ceil() as i64;
            let t_hi = (t_star + half).floor() as i64;
            for k in t_lo..=t_hi {
                let g = GroupElement::canonical_unchecked(a0 + k * c, b0 + k * d, c, d);
                if !self.group.contains(&g) {
                    continue;
                }
                let v = frobenius_value(&g, z, w);
                if v <= self.x {
                    f(v, g);
                }
            }
        }
    }
}

fn raw_values(group: GroupModel, z: Point, w: Point, x: f64) -> Vec<f64> {
    let sweep = Sweep::new(group, z, w, x);
    sweep
        .c_values()
        .flat_map_iter(|c| {
            let mut out = Vec::new();
            sweep.visit(c, |v, _| out.push(v));
            out
        })
        .collect()
}

/// Every group element with `4u(z, γw) + 2 ≤ x`, sorted by value then entries.
pub fn elements(group: GroupModel, z: Point, w: Point, x: f64) -> Result<Vec<(f64, GroupElement)>> {
    if x.is_nan() || x < 2.0 {
        return Err(Error::EmptyProfile(x));
    }
    let sweep = Sweep::new(group, z, w, x);
    let mut out: Vec<(f64, GroupElement)> = sweep
        .c_values()
        .flat_map_iter(|c| {
            let mut out = Vec::new();
            sweep.visit(c, |v, g| out.push((v, g)));
            out
        })
        .collect();
    out.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full() -> GroupModel {
        GroupModel::FullModular
    }

    #[test]
    fn small_counts_at_i() {
        let i = Point::I;
        assert_eq!(count(full(), i, i, 2.0).unwrap(), 2);
        assert_eq!(count(full(), i, i, 3.0).unwrap(), 10);
        assert_eq!(count(full(), i, i, 4.0).unwrap(), 10);
        assert_eq!(count(full(), i, i, 1.5).unwrap(), 0);
        assert_eq!(count(GroupModel::principal(2).unwrap(), i, i, 3.0).unwrap(), 1);
    }

    #[test]
    fn elements_at_three_match_hand_list() {
        let els = elements(full(), Point::I, Point::I, 3.0).unwrap();
        let gs: Vec<GroupElement> = els.iter().map(|p| p.1).collect();
        assert_eq!(gs.len(), 10);
        for g in [
            GroupElement::IDENTITY,
            GroupElement::S,
            GroupElement::T,
            GroupElement::T.inverse(),
            GroupElement::new(1, 0, 1, 1).unwrap(),
            GroupElement::new(1, 0, -1, 1).unwrap(),
            GroupElement::new(0, -1, 1, 1).unwrap(),
            GroupElement::new(0, -1, 1, -1).unwrap(),
            GroupElement::new(1, -1, 1, 0).unwrap(),
            GroupElement::new(-1, -1, 1, 0).unwrap(),
        ] {
            assert!(gs.contains(&g), "missing {g}");
        }
    }

    #[test]
    fn enumerate_below_two_is_error() {
        assert!(matches!(
            enumerate(full(), Point::I, Point::I, 1.5),
            Err(Error::EmptyProfile(_))
        ));
    }

    #[test]
    fn curve_examples() {
        let i = Point::I;
        assert_eq!(
            count_curve(full(), i, i, &[2.0, 3.0, 4.0]).unwrap(),
            vec![(2.0, 2), (3.0, 10), (4.0, 10)]
        );
        assert_eq!(count_curve(full(), i, i, &[1.5]).unwrap(), vec![(1.5, 0)]);
        assert!(count_curve(full(), i, i, &[2.0, 2.0]).is_err());
    }

    #[test]
    fn group_parsing_and_levels() {
        assert_eq!("psl2z".parse::<GroupModel>().unwrap(), full());
        assert_eq!("gamma0:1".parse::<GroupModel>().unwrap(), full());
        assert_eq!("gammaN:1".parse::<GroupModel>().unwrap(), full());
        assert_eq!("gamma0:4".parse::<GroupModel>().unwrap(), GroupModel::Hecke(4));
        assert_eq!("gammaN:3".parse::<GroupModel>().unwrap(), GroupModel::Principal(3));
        assert!(matches!("gamma0:0".parse::<GroupModel>(), Err(Error::InvalidGroup(_))));
        assert!(matches!(GroupModel::principal(-2), Err(Error::InvalidGroup(_))));
        assert!("sl2r".parse::<GroupModel>().is_err());
    }

    #[test]
    fn indices() {
        assert_eq!(GroupModel::Hecke(2).psl_index(), 3);
        assert_eq!(GroupModel::Hecke(6).psl_index(), 12);
        assert_eq!(GroupModel::Principal(2).psl_index(), 6);
        assert_eq!(GroupModel::Principal(3).psl_index(), 12);
        assert_eq!(GroupModel::Principal(5).psl_index(), 60);
        assert_eq!(GroupModel::Principal(4).psl_index(), 24);
    }

    #[test]
    fn egcd_identity() {
        for a in -30i64..30 {
            for b in -30i64..30 {
                let (g, s, t) = egcd(a, b);
                assert_eq!(s * a + t * b, g);
                assert!(g >= 0);
            }
        }
    }

    #[test]
    fn merging_off_i() {
        let z = Point::new(0.5, 0.5f64.sqrt() * 1.2).unwrap();
        let p = enumerate(full(), z, z, 50.0).unwrap();
        assert!(p.values().windows(2).all(|q| q[0].0 < q[1].0));
        assert!(p.values().iter().all(|&(v, m)| m >= 1 && (2.0 - 1e-12..=50.0).contains(&v)));
    }
}
