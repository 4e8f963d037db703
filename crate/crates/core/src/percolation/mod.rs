//! Bond percolation under the uniform-label model.
//!
//! Every sample assigns each edge an independent uniform label `ω(e)`; the
//! open set at density `p` is `{e : ω(e) < p}`. All densities share one set
//! of environments, so crossing curves are monotone sample by sample.

mod coupling;
mod env;
mod sweep;

pub use coupling::{coupling_experiment, CouplingReport, TerminalMode};
pub use env::{edge_label, Environment};
pub use sweep::{
    bottleneck_threshold, mean_cluster_size, origin_cluster_size, pc_estimate_diamond,
    sample_thresholds, theta_curve, theta_from_thresholds, thresholds_csv, ClusterStats,
    LevelMedian, ThetaCurve, ThresholdRecord,
};

use rayon::prelude::*;

use crate::error::{invalid, Result};

/// Formats a float with 17 significant digits, in positional notation when
/// the exponent is moderate and scientific otherwise.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return "0.0000000000000000".to_owned();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..17).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, x)
    } else {
        sci
    }
}

/// `steps` evenly spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return invalid("grid needs at least one point");
    }
    if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&end) || start > end {
        return invalid(format!(
            "grid [{start}, {end}] must satisfy 0 <= start <= end <= 1"
        ));
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    let span = end - start;
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                end
            } else {
                start + span * i as f64 / last
            }
        })
        .collect())
}

/// Parses a `start:end:steps` grid specification.
pub fn parse_p_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, k] = parts[..] else {
        return invalid(format!("grid '{spec}' is not of the form start:end:steps"));
    };
    let bad = |what: &str| crate::Error::InvalidInput(format!("grid '{spec}': bad {what}"));
    let start: f64 = a.trim().parse().map_err(|_| bad("start"))?;
    let end: f64 = b.trim().parse().map_err(|_| bad("end"))?;
    let steps: usize = k.trim().parse().map_err(|_| bad("step count"))?;
    linspace(start, end, steps)
}

/// Runs `f` on every sample index and returns the results in index order.
/// `workers == 0` uses the default thread count. The output never depends
/// on the number of workers.
pub fn run_samples<T, F>(samples: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    if workers == 1 {
        return (0..samples).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| crate::Error::Capability(format!("thread pool: {e}")))?;
    pool.install(|| (0..samples).into_par_iter().map(f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt17_digits() {
        assert_eq!(fmt17(0.5), "0.50000000000000000");
        assert_eq!(fmt17(1.0), "1.0000000000000000");
        assert_eq!(fmt17(0.0), "0.0000000000000000");
        assert_eq!(fmt17(0.1), "0.10000000000000001");
        assert_eq!(fmt17(1e-9), "1.0000000000000001e-9");
        for x in [0.618033988749894_9, 1.0 / 3.0, 2.5e-3, 123.456] {
            assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn grids() {
        let g = parse_p_grid("0:1:101").unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[100], 1.0);
        assert!((g[37] - 0.37).abs() < 1e-15);
        assert_eq!(parse_p_grid("0.3:0.3:1").unwrap(), vec![0.3]);
        for bad in ["0:1", "0:2:5", "0.5:0.2:3", "0:1:0", "a:1:2"] {
            assert!(parse_p_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn run_samples_is_ordered() {
        let seq = run_samples(100, 1, |i| Ok(i * i)).unwrap();
        let par = run_samples(100, 4, |i| Ok(i * i)).unwrap();
        assert_eq!(seq, par);
        assert!(run_samples(10, 3, |i| if i == 7 { invalid("x") } else { Ok(i) }).is_err());
    }
}
