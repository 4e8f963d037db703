//! Exact crossing recursion of the diamond graphs.
//!
//! The crossing probability of `D_1(m,n)` at bond density `p` is
//! `f(p) = 1 - (1 - p^n)^m`, and that of `D_l(m,n)` is the `l`-fold
//! composition of `f`. Both endpoints are attracting fixed points; the single
//! interior fixed point is repelling and is the critical probability.
//!
//! Compositions are evaluated in double-double arithmetic: since
//! `|f'(p_c)| > 1`, rounding errors near `p_c` grow geometrically with depth.

use twofloat::TwoFloat;

use crate::error::{invalid, Result};

/// `f_{m,n}` together with its fixed-point machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingRecursion {
    m: u32,
    n: u32,
}

impl CrossingRecursion {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m < 2 || n < 2 {
            return invalid(format!("crossing recursion needs m, n >= 2 (got {m}, {n})"));
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn eval_dd(&self, p: TwoFloat) -> TwoFloat {
        let one = TwoFloat::from(1.0);
        one - (one - p.powi(self.n as i32)).powi(self.m as i32)
    }

    pub fn eval(&self, p: f64) -> f64 {
        self.eval_dd(TwoFloat::from(p)).hi()
    }

    pub fn iterate_dd(&self, p: TwoFloat, levels: u32) -> TwoFloat {
        (0..levels).fold(p, |x, _| self.eval_dd(x))
    }

    pub fn iterate(&self, p: f64, levels: u32) -> f64 {
        self.iterate_dd(TwoFloat::from(p), levels).hi()
    }

    /// `f(p) - p`; negative below the critical point, positive above it.
    pub fn gap_dd(&self, p: TwoFloat) -> TwoFloat {
        self.eval_dd(p) - p
    }

    /// The interior fixed point, by bisection on the sign of `f(p) - p`.
    pub fn critical_point(&self, tol: f64) -> Result<f64> {
        if tol.is_nan() || tol < 1e-14 {
            return invalid(format!("tolerance must be at least 1e-14 (got {tol})"));
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if self.gap_dd(TwoFloat::from(mid)) < TwoFloat::from(0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The `p` at which `D_levels` is crossed with probability exactly 1/2,
    /// i.e. the exact median of the bottleneck threshold distribution.
    pub fn median(&self, levels: u32) -> f64 {
        let half = TwoFloat::from(0.5);
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.iterate_dd(TwoFloat::from(mid), levels) < half {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("probability {p} outside [0, 1]"));
    }
    Ok(())
}

/// `f_{m,n}(p) = 1 - (1 - p^n)^m`.
pub fn f_eval(m: u32, n: u32, p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(CrossingRecursion::new(m, n)?.eval(p))
}

/// `f_{m,n}` composed `levels` times.
pub fn f_iterate(m: u32, n: u32, p: f64, levels: u32) -> Result<f64> {
    check_probability(p)?;
    Ok(CrossingRecursion::new(m, n)?.iterate(p, levels))
}

/// [`f_iterate`] with a double-double start value, for orbits started on a
/// fixed point that `f64` cannot represent.
pub fn f_iterate_dd(m: u32, n: u32, p: TwoFloat, levels: u32) -> Result<TwoFloat> {
    check_probability(p.hi())?;
    Ok(CrossingRecursion::new(m, n)?.iterate_dd(p, levels))
}

/// Critical probability `p_c(m, n)` of the diamond fractal.
pub fn solve_pc(m: u32, n: u32, tol: f64) -> Result<f64> {
    CrossingRecursion::new(m, n)?.critical_point(tol)
}

/// Exact median of the level-`levels` bottleneck threshold.
pub fn median_exact(m: u32, n: u32, levels: u32) -> Result<f64> {
    Ok(CrossingRecursion::new(m, n)?.median(levels))
}

/// `(l, f^l(p))` for `l = 0..=levels`.
pub fn fixed_point_trace(m: u32, n: u32, p: f64, levels: u32) -> Result<Vec<(u32, f64)>> {
    check_probability(p)?;
    let f = CrossingRecursion::new(m, n)?;
    let mut x = TwoFloat::from(p);
    let mut out = vec![(0, p)];
    for l in 1..=levels {
        x = f.eval_dd(x);
        out.push((l, x.hi()));
    }
    Ok(out)
}

/// `p_c(m, n)` over a rectangle of parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PcTable {
    pub ms: Vec<u32>,
    pub ns: Vec<u32>,
    /// `values[i][j] = p_c(ms[i], ns[j])`.
    pub values: Vec<Vec<f64>>,
}

impl PcTable {
    pub fn get(&self, m: u32, n: u32) -> Option<f64> {
        let i = self.ms.iter().position(|&x| x == m)?;
        let j = self.ns.iter().position(|&x| x == n)?;
        Some(self.values[i][j])
    }

    /// Pairs `((m, n), (m', n'))` of neighbouring cells violating strict
    /// decrease in `m` or strict increase in `n`.
    pub fn monotonicity_violations(&self) -> Vec<((u32, u32), (u32, u32))> {
        let mut bad = Vec::new();
        for i in 0..self.ms.len() {
            for j in 0..self.ns.len() {
                if i + 1 < self.ms.len() && self.values[i + 1][j] >= self.values[i][j] {
                    bad.push(((self.ms[i], self.ns[j]), (self.ms[i + 1], self.ns[j])));
                }
                if j + 1 < self.ns.len() && self.values[i][j + 1] <= self.values[i][j] {
                    bad.push(((self.ms[i], self.ns[j]), (self.ms[i], self.ns[j + 1])));
                }
            }
        }
        bad
    }

    pub fn is_monotone(&self) -> bool {
        self.monotonicity_violations().is_empty()
    }

    /// `m,n,pc` rows with a header, floats at 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,pc\n");
        for (i, &m) in self.ms.iter().enumerate() {
            for (j, &n) in self.ns.iter().enumerate() {
                out.push_str(&format!(
                    "{m},{n},{}\n",
                    crate::percolation::fmt17(self.values[i][j])
                ));
            }
        }
        out
    }
}

pub const PC_TABLE_TOL: f64 = 1e-13;

/// Solves `p_c` on `ms × ns`; both ranges must lie within `[2, 12]`.
pub fn monotonicity_table(
    ms: std::ops::RangeInclusive<u32>,
    ns: std::ops::RangeInclusive<u32>,
) -> Result<PcTable> {
    for r in [&ms, &ns] {
        if r.is_empty() || *r.start() < 2 || *r.end() > 12 {
            return invalid(format!("table range {r:?} must lie within [2, 12]"));
        }
    }
    let ms: Vec<u32> = ms.collect();
    let ns: Vec<u32> = ns.collect();
    let values = ms
        .iter()
        .map(|&m| {
            ns.iter()
                .map(|&n| solve_pc(m, n, PC_TABLE_TOL))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PcTable { ms, ns, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Crossing probability of `D_1(2,2)` by enumerating all 16 open/closed
    /// configurations of its four edges (branches {0,1} and {2,3}).
    fn brute_force_d1(p: f64) -> f64 {
        (0u32..16)
            .map(|bits| {
                let open = |e: u32| bits >> e & 1 == 1;
                let weight: f64 = (0..4).map(|e| if open(e) { p } else { 1.0 - p }).product();
                let crosses = (open(0) && open(1)) || (open(2) && open(3));
                if crosses {
                    weight
                } else {
                    0.0
                }
            })
            .sum()
    }

    #[test]
    fn f_matches_enumeration() {
        assert_eq!(f_eval(2, 2, 0.5).unwrap(), 0.4375);
        for p in [0.0, 0.1, 0.37, 0.5, 0.8, 1.0] {
            assert!((f_eval(2, 2, p).unwrap() - brute_force_d1(p)).abs() < 1e-15);
        }
    }

    #[test]
    fn endpoints_absorb() {
        for (m, n) in [(2, 2), (3, 5), (7, 2)] {
            for l in [0, 1, 10, 100] {
                assert_eq!(f_iterate(m, n, 0.0, l).unwrap(), 0.0);
                assert_eq!(f_iterate(m, n, 1.0, l).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn input_guards() {
        assert!(f_eval(2, 2, -0.1).is_err());
        assert!(f_eval(2, 2, 1.5).is_err());
        assert!(f_eval(1, 2, 0.5).is_err());
        assert!(solve_pc(2, 2, 1e-16).is_err());
        assert!(monotonicity_table(1..=3, 2..=3).is_err());
        assert!(monotonicity_table(2..=13, 2..=3).is_err());
    }

    #[test]
    fn golden_ratio_orbit_is_stationary() {
        let pc = (TwoFloat::from(5.0).sqrt() - 1.0) / 2.0;
        let after = f_iterate_dd(2, 2, pc, 50).unwrap();
        assert!((after - pc).hi().abs() < 1e-10);
    }

    #[test]
    fn f64_orbit_drifts_off_repelling_point() {
        // The f64 start value is ~5e-17 off p_c; 50 steps amplify that
        // by |f'(p_c)|^50 ~ 1.6e9.
        let pc = (5f64.sqrt() - 1.0) / 2.0;
        let drift = (f_iterate(2, 2, pc, 50).unwrap() - pc).abs();
        assert!(drift > 1e-10 && drift < 1e-5, "drift {drift}");
    }

    #[test]
    fn critical_points() {
        let pc = solve_pc(2, 2, 1e-14).unwrap();
        assert!((pc - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-10);
        // Root of p^3 - 2p + 1 besides 1.
        assert!((pc * pc * pc - 2.0 * pc + 1.0).abs() < 1e-12);
        let p42 = solve_pc(4, 2, 1e-14).unwrap();
        assert!(p42 > 0.281 && p42 < 0.282, "{p42}");
        let p44 = solve_pc(4, 4, 1e-14).unwrap();
        assert!((p44 - 0.7244919590005156).abs() < 1e-10, "{p44}");
    }

    #[test]
    fn pc_increases_in_n() {
        let v: Vec<f64> = (2..=5).map(|n| solve_pc(2, n, 1e-13).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn residual_bound() {
        let tol = 1e-12;
        for m in 2..=6 {
            for n in 2..=6 {
                let pc = solve_pc(m, n, tol).unwrap();
                assert!((f_eval(m, n, pc).unwrap() - pc).abs() < 10.0 * tol);
            }
        }
    }

    #[test]
    fn trichotomy() {
        for (m, n) in [(2, 2), (3, 2), (2, 3), (4, 4)] {
            let pc = solve_pc(m, n, 1e-13).unwrap();
            assert!(f_iterate(m, n, pc - 1e-3, 200).unwrap() < 1e-6);
            assert!(f_iterate(m, n, pc + 1e-3, 200).unwrap() > 1.0 - 1e-6);
        }
    }

    #[test]
    fn medians() {
        assert!((median_exact(2, 2, 0).unwrap() - 0.5).abs() < 1e-15);
        let pc = (5f64.sqrt() - 1.0) / 2.0;
        let gaps: Vec<f64> = [1, 4, 8, 16, 32]
            .iter()
            .map(|&l| (median_exact(2, 2, l).unwrap() - pc).abs())
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]));
        assert!(gaps[4] < 1e-4);
    }

    #[test]
    fn small_table() {
        let t = monotonicity_table(2..=4, 2..=4).unwrap();
        assert!(t.is_monotone());
        assert!(t.to_csv().starts_with("m,n,pc\n2,2,0.6180339887"));
        let trace = fixed_point_trace(2, 2, 0.5, 2).unwrap();
        assert_eq!(trace[1], (1, 0.4375));
    }
}
