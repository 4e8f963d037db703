use crate::analytic::median_exact;
use crate::error::{invalid, Result};
use crate::generators::{gen_diamond, DiamondParams};
use crate::graph::{DisjointSet, Multigraph, TerminalSpec, VertexId};

use super::{fmt17, run_samples, Environment};

/// Bottleneck value of one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdRecord {
    pub sample_index: u64,
    /// Smallest `p` with a crossing in every `E_q`, `q > p`; 1.0 if none.
    pub threshold: f64,
    /// The terminals stay apart even with every edge open.
    pub disconnected: bool,
    /// Optional `(p, origin cluster size)` census.
    pub cluster_size_at: Option<Vec<(f64, usize)>>,
}

impl ThresholdRecord {
    /// Crossing indicator in `E_p`.
    pub fn crosses_at(&self, p: f64) -> bool {
        !self.disconnected && self.threshold < p
    }
}

/// Minimax label over paths joining the two sides.
///
/// Edges are added in increasing `(label, id)` order until the sides meet;
/// the label of the last edge added is returned. A crossing exists in
/// `E_p = {ω < p}` exactly when this value is below `p`.
pub fn bottleneck_threshold(
    g: &Multigraph,
    labels: &[f64],
    t: &TerminalSpec,
) -> Result<(f64, bool)> {
    if labels.len() != g.edge_count() {
        return invalid(format!(
            "{} labels for {} edges",
            labels.len(),
            g.edge_count()
        ));
    }
    t.validate(g)?;
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_unstable_by(|&a, &b| labels[a].total_cmp(&labels[b]).then(a.cmp(&b)));
    let (mut dsu, a0, b0) = t.seeded_dsu(g.vertex_count());
    for e in order {
        let (u, v) = g.endpoints(e);
        if dsu.union(u, v) && dsu.same(a0, b0) {
            return Ok((labels[e], false));
        }
    }
    Ok((1.0, true))
}

fn record(g: &Multigraph, t: &TerminalSpec, seed: u64, i: u64) -> Result<ThresholdRecord> {
    let env = Environment::new(seed, i, g.edge_count());
    let (threshold, disconnected) = bottleneck_threshold(g, env.labels(), t)?;
    Ok(ThresholdRecord {
        sample_index: i,
        threshold,
        disconnected,
        cluster_size_at: None,
    })
}

/// Thresholds of samples `0..samples`, in sample order.
pub fn sample_thresholds(
    g: &Multigraph,
    t: &TerminalSpec,
    seed: u64,
    samples: u64,
    workers: usize,
) -> Result<Vec<ThresholdRecord>> {
    if samples == 0 {
        return invalid("samples must be >= 1");
    }
    t.validate(g)?;
    run_samples(samples, workers, |i| record(g, t, seed, i))
}

/// `sample_index,threshold,flags` rows.
pub fn thresholds_csv(records: &[ThresholdRecord]) -> String {
    let mut out = String::from("sample_index,threshold,flags\n");
    for r in records {
        let flags = if r.disconnected { "disconnected" } else { "" };
        out.push_str(&format!(
            "{},{},{}\n",
            r.sample_index,
            fmt17(r.threshold),
            flags
        ));
    }
    out
}

/// Empirical crossing probabilities on a grid of densities.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaCurve {
    pub p_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Binomial standard error `sqrt(v(1-v)/N)` per grid point.
    pub stderr: Vec<f64>,
    pub samples: u64,
}

impl ThetaCurve {
    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }

    /// `p,value,stderr,samples` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,value,stderr,samples\n");
        for i in 0..self.p_grid.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt17(self.p_grid[i]),
                fmt17(self.values[i]),
                fmt17(self.stderr[i]),
                self.samples
            ));
        }
        out
    }
}

/// Crossing frequencies from precomputed thresholds.
pub fn theta_from_thresholds(records: &[ThresholdRecord], p_grid: &[f64]) -> Result<ThetaCurve> {
    if p_grid.is_empty() {
        return invalid("empty p grid");
    }
    if records.is_empty() {
        return invalid("samples must be >= 1");
    }
    if p_grid.windows(2).any(|w| w[0] > w[1]) {
        return invalid("p grid must be sorted");
    }
    let n = records.len() as f64;
    let mut values = Vec::with_capacity(p_grid.len());
    let mut stderr = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let hits = records.iter().filter(|r| r.crosses_at(p)).count();
        let v = hits as f64 / n;
        values.push(v);
        stderr.push((v * (1.0 - v) / n).sqrt());
    }
    Ok(ThetaCurve {
        p_grid: p_grid.to_vec(),
        values,
        stderr,
        samples: records.len() as u64,
    })
}

pub fn theta_curve(
    g: &Multigraph,
    t: &TerminalSpec,
    seed: u64,
    samples: u64,
    p_grid: &[f64],
    workers: usize,
) -> Result<ThetaCurve> {
    if p_grid.is_empty() {
        return invalid("empty p grid");
    }
    let records = sample_thresholds(g, t, seed, samples, workers)?;
    theta_from_thresholds(&records, p_grid)
}

/// Sample median of the thresholds at one diamond level next to the exact
/// median of `f^level`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelMedian {
    pub level: u32,
    pub median: f64,
    pub exact: f64,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_unstable_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) / 2.0
    }
}

/// Threshold medians of `D_l(m, n)` for `l = 1..=max_level`.
pub fn pc_estimate_diamond(
    m: u32,
    n: u32,
    max_level: u32,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<LevelMedian>> {
    if max_level == 0 {
        return invalid("max level must be >= 1");
    }
    (1..=max_level)
        .map(|level| {
            let (g, t) = gen_diamond(DiamondParams::new(m, n, level)?)?;
            let records = sample_thresholds(&g, &t, seed, samples, workers)?;
            Ok(LevelMedian {
                level,
                median: median(records.into_iter().map(|r| r.threshold).collect()),
                exact: median_exact(m, n, level)?,
            })
        })
        .collect()
}

/// Size of the open cluster of `origin` in `E_p`.
pub fn origin_cluster_size(
    g: &Multigraph,
    labels: &[f64],
    p: f64,
    origin: VertexId,
) -> Result<usize> {
    g.check_vertex(origin)?;
    if labels.len() != g.edge_count() {
        return invalid("label count differs from edge count");
    }
    let mut dsu = DisjointSet::new(g.vertex_count());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if labels[e] < p {
            dsu.union(u, v);
        }
    }
    Ok(dsu.set_size(origin))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterStats {
    pub p: f64,
    pub origin: VertexId,
    pub sizes: Vec<usize>,
    pub mean: f64,
    pub stderr: f64,
}

/// Origin cluster sizes over samples `0..samples`.
pub fn mean_cluster_size(
    g: &Multigraph,
    p: f64,
    origin: VertexId,
    seed: u64,
    samples: u64,
    workers: usize,
) -> Result<ClusterStats> {
    if samples == 0 {
        return invalid("samples must be >= 1");
    }
    g.check_vertex(origin)?;
    let sizes = run_samples(samples, workers, |i| {
        let env = Environment::new(seed, i, g.edge_count());
        origin_cluster_size(g, env.labels(), p, origin)
    })?;
    let n = sizes.len() as f64;
    let mean = sizes.iter().sum::<usize>() as f64 / n;
    let var = sizes
        .iter()
        .map(|&s| (s as f64 - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0).max(1.0);
    Ok(ClusterStats {
        p,
        origin,
        sizes,
        mean,
        stderr: (var / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::f_iterate;
    use crate::generators::gen_barycentric;
    use crate::graph::connected_mask;
    use proptest::prelude::*;

    fn d1() -> (Multigraph, TerminalSpec) {
        gen_diamond(DiamondParams::new(2, 2, 1).unwrap()).unwrap()
    }

    #[test]
    fn worked_example() {
        let (g, t) = d1();
        let (th, disc) = bottleneck_threshold(&g, &[0.1, 0.2, 0.3, 0.9], &t).unwrap();
        assert_eq!(th, 0.2);
        assert!(!disc);
    }

    #[test]
    fn disconnected_sentinel() {
        let g = Multigraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let t = TerminalSpec::pair(0, 3).unwrap();
        assert_eq!(
            bottleneck_threshold(&g, &[0.1, 0.2], &t).unwrap(),
            (1.0, true)
        );
    }

    #[test]
    fn ties_break_by_edge_id() {
        let (g, t) = d1();
        assert_eq!(
            bottleneck_threshold(&g, &[0.5; 4], &t).unwrap(),
            (0.5, false)
        );
    }

    #[test]
    fn theta_endpoints_and_d2_value() {
        let (g, t) = gen_diamond(DiamondParams::new(2, 2, 2).unwrap()).unwrap();
        let c = theta_curve(&g, &t, 3, 20_000, &[0.0, 0.5, 1.0], 0).unwrap();
        assert_eq!(c.values[0], 0.0);
        assert_eq!(c.values[2], 1.0);
        let exact = 1.0 - (1.0 - 0.4375f64.powi(2)).powi(2);
        assert_eq!(exact, f_iterate(2, 2, 0.5, 2).unwrap());
        assert!((exact - 0.346176).abs() < 1e-6);
        let sigma = (exact * (1.0 - exact) / 20_000.0).sqrt();
        assert!(
            (c.values[1] - exact).abs() < 3.0 * sigma,
            "{} vs {exact}",
            c.values[1]
        );
    }

    #[test]
    fn t2_curve_monotone_and_deterministic() {
        let tri = gen_barycentric(2).unwrap();
        let t = tri.corner_terminals(0, 1).unwrap();
        let grid = super::super::linspace(0.0, 1.0, 101).unwrap();
        let a = theta_curve(tri.graph(), &t, 11, 2000, &grid, 1).unwrap();
        let b = theta_curve(tri.graph(), &t, 11, 2000, &grid, 4).unwrap();
        assert!(a.is_monotone());
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(theta_curve(tri.graph(), &t, 11, 10, &[], 1).is_err());
    }

    #[test]
    fn d1_cdf_in_dkw_band() {
        let (g, t) = d1();
        let n = 20_000u64;
        let recs = sample_thresholds(&g, &t, 99, n, 0).unwrap();
        let eps = ((2.0f64 / 0.01).ln() / (2.0 * n as f64)).sqrt();
        let mut th: Vec<f64> = recs.iter().map(|r| r.threshold).collect();
        th.sort_unstable_by(f64::total_cmp);
        for (i, &x) in th.iter().enumerate() {
            let exact = f_iterate(2, 2, x, 1).unwrap();
            assert!((i as f64 / n as f64 - exact).abs() <= eps + 1e-12);
            assert!(((i + 1) as f64 / n as f64 - exact).abs() <= eps + 1e-12);
        }
    }

    #[test]
    fn median_level_zero_and_estimates() {
        let meds = pc_estimate_diamond(2, 2, 3, 2000, 5, 0).unwrap();
        assert_eq!(meds.len(), 3);
        for m in &meds {
            assert!((m.median - m.exact).abs() < 0.05, "{m:?}");
        }
        assert!(pc_estimate_diamond(2, 2, 0, 10, 5, 0).is_err());
    }

    #[test]
    fn cluster_sizes() {
        let tri = gen_barycentric(2).unwrap();
        let g = tri.graph();
        let env = Environment::new(1, 0, g.edge_count());
        assert_eq!(origin_cluster_size(g, env.labels(), 0.0, 0).unwrap(), 1);
        assert_eq!(
            origin_cluster_size(g, env.labels(), 1.0, 0).unwrap(),
            g.vertex_count()
        );
        assert!(origin_cluster_size(g, env.labels(), 0.5, g.vertex_count()).is_err());
        let stats = mean_cluster_size(g, 0.0, 0, 1, 10, 2).unwrap();
        assert_eq!(stats.mean, 1.0);
    }

    #[test]
    fn csv_layout() {
        let recs = vec![
            ThresholdRecord {
                sample_index: 0,
                threshold: 0.25,
                disconnected: false,
                cluster_size_at: None,
            },
            ThresholdRecord {
                sample_index: 1,
                threshold: 1.0,
                disconnected: true,
                cluster_size_at: None,
            },
        ];
        assert_eq!(
            thresholds_csv(&recs),
            "sample_index,threshold,flags\n0,0.25000000000000000,\n1,1.0000000000000000,disconnected\n"
        );
    }

    proptest! {
        #[test]
        fn threshold_matches_direct_crossing(seed in 0u64..500, p in 0.0f64..1.0) {
            let tri = gen_barycentric(2).unwrap();
            let t = tri.corner_terminals(0, 2).unwrap();
            let g = tri.graph();
            let env = Environment::new(seed, 0, g.edge_count());
            let (th, _) = bottleneck_threshold(g, env.labels(), &t).unwrap();
            let direct = connected_mask(g, &env.open_mask(p), &t).unwrap();
            prop_assert_eq!(direct, th < p);
            // A crossing appears exactly at the threshold label.
            prop_assert!(!connected_mask(g, &env.open_mask(th), &t).unwrap());
            let above = env.labels().iter().copied().filter(|&x| x > th).fold(1.0f64, f64::min);
            prop_assert!(connected_mask(g, &env.open_mask((th + above) / 2.0), &t).unwrap());
        }

        #[test]
        fn deleting_edges_never_lowers_threshold(seed in 0u64..300, drop in 0usize..50) {
            let tri = gen_barycentric(2).unwrap();
            let t = tri.corner_terminals(0, 1).unwrap();
            let g = tri.graph();
            let env = Environment::new(seed, 1, g.edge_count());
            let mut fewer = env.labels().to_vec();
            // A label of 1.0 never opens, which deletes the edge.
            for e in (0..g.edge_count()).filter(|e| e % 50 == drop) {
                fewer[e] = 1.0;
            }
            let (full, _) = bottleneck_threshold(g, env.labels(), &t).unwrap();
            let (sub, _) = bottleneck_threshold(g, &fewer, &t).unwrap();
            prop_assert!(full <= sub);
        }
    }
}
