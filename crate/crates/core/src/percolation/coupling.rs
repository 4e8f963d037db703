use crate::error::{invalid, Result};
use crate::generators::{collapse_pi, gen_gasket, side_terminals};
use crate::graph::TerminalSpec;

use super::{bottleneck_threshold, fmt17, run_samples, Environment};

/// Which boundary event defines a crossing on `T` and `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TerminalMode {
    /// Corner `v0` to corner `v1`.
    #[default]
    Corner,
    /// Side `v0 v1` to side `v1 v2`, both without `v1`.
    Side,
}

impl std::str::FromStr for TerminalMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corner" => Ok(Self::Corner),
            "side" => Ok(Self::Side),
            _ => invalid(format!("unknown terminal mode '{s}' (corner|side)")),
        }
    }
}

/// Gasket, quotient and triangulation crossing curves on a shared set of
/// gasket environments.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingReport {
    pub level: u32,
    pub samples: u64,
    pub seed: u64,
    pub mode: TerminalMode,
    pub p_grid: Vec<f64>,
    /// `θ̂_S(p)` on the gasket itself.
    pub theta_s: Vec<f64>,
    /// `θ̂_S̃(p)`: the gasket labels on the quotient.
    pub theta_s_tilde: Vec<f64>,
    /// `θ̂_T(p)` with each `T` edge carrying the minimum of its gasket labels.
    pub theta_t_pushed: Vec<f64>,
    /// `θ̂_T(2p)` with one independent label per `T` edge.
    pub theta_t_2p: Vec<f64>,
    /// `sqrt(v_S̃(1-v_S̃)/N + v_T(1-v_T)/N)` per grid point.
    pub stderr: Vec<f64>,
    /// Samples where the quotient threshold exceeds the gasket threshold.
    pub pathwise_violations: u64,
    /// Samples where the quotient and pushed thresholds differ.
    pub pushed_mismatches: u64,
    /// Grid points `p <= 1/2` with `θ̂_T(2p) < θ̂_S̃(p) - 3·stderr`.
    pub dominance_failures: Vec<f64>,
}

impl CouplingReport {
    pub fn passed(&self) -> bool {
        self.pathwise_violations == 0
            && self.pushed_mismatches == 0
            && self.dominance_failures.is_empty()
    }

    /// `p,theta_s_tilde,theta_t_pushed,theta_t_2p,stderr` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,theta_s_tilde,theta_t_pushed,theta_t_2p,stderr\n");
        for i in 0..self.p_grid.len() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt17(self.p_grid[i]),
                fmt17(self.theta_s_tilde[i]),
                fmt17(self.theta_t_pushed[i]),
                fmt17(self.theta_t_2p[i]),
                fmt17(self.stderr[i])
            ));
        }
        out
    }
}

struct SampleThresholds {
    s: f64,
    s_tilde: f64,
    t_pushed: f64,
    t_native: f64,
}

/// Runs the collapse-map coupling on `S_level`.
///
/// Each gasket environment gives four thresholds: on `S`, on the quotient
/// `S̃` (same labels), on `T` with min-pushed labels, and on `T` with the
/// label of the first gasket edge of each pair. The last is an iid uniform
/// labelling of `T`, used for `θ̂_T(2p)`.
pub fn coupling_experiment(
    level: u32,
    p_grid: &[f64],
    samples: u64,
    seed: u64,
    mode: TerminalMode,
    workers: usize,
) -> Result<CouplingReport> {
    if !(1..=5).contains(&level) {
        return invalid(format!("coupling level must be in 1..=5 (got {level})"));
    }
    if p_grid.is_empty() {
        return invalid("empty p grid");
    }
    if samples == 0 {
        return invalid("samples must be >= 1");
    }
    let s = gen_gasket(level)?;
    let cm = collapse_pi(&s)?;
    let s_terms = match mode {
        TerminalMode::Corner => s.corner_terminals(),
        TerminalMode::Side => {
            let corners = [0, 1, 2];
            side_terminals(&s.coords(), corners)?
        }
    };
    let q_terms: TerminalSpec = s_terms.map(|v| cm.class_of[v])?;
    let first_of_pair: Vec<usize> = cm.edge_pairs.iter().map(|pair| pair[0]).collect();
    let edge_count = s.graph().edge_count();

    let rows = run_samples(samples, workers, |i| {
        let env = Environment::new(seed, i, edge_count);
        let labels = env.labels();
        let pushed = cm.push_labels(labels);
        let native: Vec<f64> = first_of_pair.iter().map(|&e| labels[e]).collect();
        Ok(SampleThresholds {
            s: bottleneck_threshold(s.graph(), labels, &s_terms)?.0,
            s_tilde: bottleneck_threshold(&cm.s_tilde, labels, &q_terms)?.0,
            t_pushed: bottleneck_threshold(cm.t.graph(), &pushed, &q_terms)?.0,
            t_native: bottleneck_threshold(cm.t.graph(), &native, &q_terms)?.0,
        })
    })?;

    let n = samples as f64;
    let freq =
        |f: &dyn Fn(&SampleThresholds) -> bool| rows.iter().filter(|r| f(r)).count() as f64 / n;
    let mut report = CouplingReport {
        level,
        samples,
        seed,
        mode,
        p_grid: p_grid.to_vec(),
        theta_s: Vec::new(),
        theta_s_tilde: Vec::new(),
        theta_t_pushed: Vec::new(),
        theta_t_2p: Vec::new(),
        stderr: Vec::new(),
        pathwise_violations: rows.iter().filter(|r| r.s_tilde > r.s).count() as u64,
        pushed_mismatches: rows.iter().filter(|r| r.s_tilde != r.t_pushed).count() as u64,
        dominance_failures: Vec::new(),
    };
    for &p in p_grid {
        let vs = freq(&|r| r.s < p);
        let vq = freq(&|r| r.s_tilde < p);
        let vp = freq(&|r| r.t_pushed < p);
        let v2 = freq(&|r| r.t_native < 2.0 * p);
        let se = (vq * (1.0 - vq) / n + v2 * (1.0 - v2) / n).sqrt();
        if p <= 0.5 && v2 < vq - 3.0 * se {
            report.dominance_failures.push(p);
        }
        report.theta_s.push(vs);
        report.theta_s_tilde.push(vq);
        report.theta_t_pushed.push(vp);
        report.theta_t_2p.push(v2);
        report.stderr.push(se);
    }
    Ok(report)
}
