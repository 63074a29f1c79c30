//! Oracles shared by the integration tests.

#![allow(dead_code)]

/// Counts canonical det-1 quadruples `(a,b,c,d)` by `a²+b²+c²+d²`, one per
/// `±` pair, by scanning every quadruple in the box.
pub fn naive_norm_histogram(limit: i64, keep: impl Fn(i64, i64, i64, i64) -> bool) -> Vec<u64> {
    let bound = (limit as f64).sqrt().floor() as i64;
    let mut hist = vec![0u64; limit as usize + 1];
    for c in 0..=bound {
        for d in -bound..=bound {
            if c == 0 && d <= 0 {
                continue;
            }
            let cd = c * c + d * d;
            if cd > limit {
                continue;
            }
            for a in -bound..=bound {
                if cd + a * a > limit {
                    continue;
                }
                for b in -bound..=bound {
                    let norm = cd + a * a + b * b;
                    if norm <= limit && a * d - b * c == 1 && keep(a, b, c, d) {
                        hist[norm as usize] += 1;
                    }
                }
            }
        }
    }
    hist
}

/// Running totals of a histogram: entry `k` is the number of norms `≤ k`.
pub fn cumulative(hist: &[u64]) -> Vec<u64> {
    hist.iter()
        .scan(0u64, |acc, &h| {
            *acc += h;
            Some(*acc)
        })
        .collect()
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Composite fixed-order Gauss–Legendre on `panels` equal pieces of `[a, b]`.
pub fn gauss_composite(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, rule: &[(f64, f64)]) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        total += rule.iter().map(|&(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h;
    }
    total
}

/// `h_X(t)` by fixed-order Gauss–Legendre in `v` with `u = r − v²`.
pub fn transform_oracle(x: f64, t: f64) -> f64 {
    let r = (x / 2.0).acosh();
    let rule = gauss_legendre(20);
    let f = |v: f64| {
        let u = r - v * v;
        2.0 * v * (t * u).cos() * (r.cosh() - u.cosh()).max(0.0).sqrt()
    };
    let panels = 200 + (t.abs() * r * 4.0) as usize;
    4.0 * 2f64.sqrt() * gauss_composite(f, 0.0, r.sqrt(), panels, &rule)
}
