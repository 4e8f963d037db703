use std::io::Write;

use serde_json::{json, Value};

use fractalperc::analytic::{fixed_point_trace, monotonicity_table, solve_pc, PC_TABLE_TOL};
use fractalperc::duality::{complementarity_exhaustive, complementarity_sampled};
use fractalperc::generators::{embed_diamond_in_t, gen_barycentric};
use fractalperc::geometry::{
    derived_exponent, iso_constant, isoperimetric_check, isoperimetric_exhaustive, PRINTED_EXPONENT,
};
use fractalperc::percolation::{
    coupling_experiment, fmt17, linspace, mean_cluster_size, parse_p_grid, pc_estimate_diamond,
    sample_thresholds, theta_from_thresholds, thresholds_csv, TerminalMode,
};
use fractalperc::Error;

use crate::args::{Cli, Command, SampleArgs, Simulate, Solve, Terminals, Verify};
use crate::families::{document, graph_with_terminals};
use crate::Failure;

pub fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate(a) => {
            let doc = document(&a.graph, a.dual_of.as_deref())?;
            write_output(&a.out, &doc.to_json())
        }
        Command::Simulate(s) => simulate(s),
        Command::Verify(v) => verify(v),
        Command::Solve(s) => solve(s),
    }
}

fn write_output(path: &str, text: &str) -> Result<(), Failure> {
    if path == "-" {
        std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}")))
    } else {
        std::fs::write(path, text).map_err(|e| Failure::Io(format!("{path}: {e}")))
    }
}

/// Seed from FRACTALPERC_SEED if set, else the flag value.
fn seed(flag: u64) -> Result<u64, Failure> {
    match std::env::var("FRACTALPERC_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::Core(Error::InvalidInput(format!(
                "FRACTALPERC_SEED '{v}' is not a u64"
            )))
        }),
        Err(_) => Ok(flag),
    }
}

fn checked_samples(s: &SampleArgs) -> Result<u64, Failure> {
    if s.samples == 0 {
        return Err(Error::InvalidInput("--samples must be >= 1".into()).into());
    }
    Ok(s.samples)
}

fn mode(t: Terminals) -> TerminalMode {
    match t {
        Terminals::Corner => TerminalMode::Corner,
        Terminals::Side => TerminalMode::Side,
    }
}

fn simulate(cmd: Simulate) -> Result<(), Failure> {
    match cmd {
        Simulate::Crossing {
            graph,
            sampling,
            terminals,
            out,
        } => {
            let (g, t) = graph_with_terminals(&graph, terminals)?;
            let samples = checked_samples(&sampling)?;
            let recs = sample_thresholds(&g, &t, seed(sampling.seed)?, samples, sampling.workers)?;
            write_output(&out, &thresholds_csv(&recs))
        }
        Simulate::Theta {
            graph,
            sampling,
            terminals,
            p_grid,
            out,
        } => {
            let grid = parse_p_grid(&p_grid)?;
            let (g, t) = graph_with_terminals(&graph, terminals)?;
            let samples = checked_samples(&sampling)?;
            let recs = sample_thresholds(&g, &t, seed(sampling.seed)?, samples, sampling.workers)?;
            write_output(&out, &theta_from_thresholds(&recs, &grid)?.to_csv())
        }
        Simulate::PcDiamond {
            m,
            n,
            level,
            sampling,
            out,
        } => {
            let samples = checked_samples(&sampling)?;
            let rows =
                pc_estimate_diamond(m, n, level, samples, seed(sampling.seed)?, sampling.workers)?;
            let mut csv = String::from("level,median,exact\n");
            for r in rows {
                csv.push_str(&format!(
                    "{},{},{}\n",
                    r.level,
                    fmt17(r.median),
                    fmt17(r.exact)
                ));
            }
            write_output(&out, &csv)
        }
        Simulate::Coupling {
            level,
            sampling,
            terminals,
            p_grid,
            out,
        } => {
            let grid = parse_p_grid(&p_grid)?;
            let samples = checked_samples(&sampling)?;
            let r = coupling_experiment(
                level,
                &grid,
                samples,
                seed(sampling.seed)?,
                mode(terminals),
                sampling.workers,
            )?;
            eprintln!(
                "coupling level {level}: pathwise violations {}/{}, pushed mismatches {}, dominance failures at p = {:?}",
                r.pathwise_violations, r.samples, r.pushed_mismatches, r.dominance_failures
            );
            write_output(&out, &r.to_csv())
        }
        Simulate::Cluster {
            graph,
            sampling,
            origin,
            p_grid,
            out,
        } => {
            let grid = parse_p_grid(&p_grid)?;
            let (g, _) = document(&graph, None)?.to_graph()?;
            let samples = checked_samples(&sampling)?;
            let seed = seed(sampling.seed)?;
            let mut csv = String::from("p,mean,stderr,samples\n");
            for p in grid {
                let s = mean_cluster_size(&g, p, origin, seed, samples, sampling.workers)?;
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt17(p),
                    fmt17(s.mean),
                    fmt17(s.stderr),
                    samples
                ));
            }
            write_output(&out, &csv)
        }
    }
}

/// Prints the human summary on stderr and the JSON report on stdout, then
/// turns a failed check into a nonzero exit.
fn report(suite: &str, pass: bool, summary: &[String], details: Value) -> Result<(), Failure> {
    for line in summary {
        eprintln!("{line}");
    }
    eprintln!("{} {suite}", if pass { "PASS" } else { "FAIL" });
    let doc = json!({ "suite": suite, "pass": pass, "details": details });
    write_output("-", &format!("{doc}\n"))?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Check(format!("{suite} checks failed")))
    }
}

fn parse_range(spec: &str, what: &str) -> Result<std::ops::RangeInclusive<u32>, Failure> {
    let bad = || {
        Failure::Core(Error::InvalidInput(format!(
            "--{what} '{spec}' is not lo:hi"
        )))
    };
    let (lo, hi) = spec.split_once(':').ok_or_else(bad)?;
    let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn verify(cmd: Verify) -> Result<(), Failure> {
    match cmd {
        Verify::Embedding { k } => {
            let emb = embed_diamond_in_t(k)?;
            let pass = emb.check()?;
            let summary = vec![format!(
                "D_{}(2,2) in T_{k}: {} vertices, {} edges, isomorphic: {pass}",
                k - 1,
                emb.vertex_map.len(),
                emb.edge_map.len()
            )];
            let details = json!({
                "k": k,
                "vertices": emb.vertex_map.len(),
                "edges": emb.edge_map.len(),
                "vertex_map": emb.vertex_map,
                "edge_map": emb.edge_map,
                "isomorphic": pass,
            });
            report("embedding", pass, &summary, details)
        }
        Verify::Duality { level, sampling } => {
            let samples = checked_samples(&sampling)?;
            let t1 = gen_barycentric(1)?;
            let [s, u, _] = t1.corners();
            let ex = complementarity_exhaustive(&t1, s, u)?;
            let grid = linspace(0.0, 1.0, 101)?;
            let sampled = complementarity_sampled(
                level,
                samples,
                seed(sampling.seed)?,
                &grid,
                sampling.workers,
            )?;
            let pass = ex.passed() && sampled.passed();
            let summary = vec![
                format!("T_1 exhaustive: XOR held {}/{}", ex.held, ex.total),
                format!(
                    "T_{level}: XOR held {}/{} environments ({}/{} evaluations)",
                    sampled.environments_held, sampled.environments, sampled.held, sampled.total
                ),
            ];
            let details = json!({
                "exhaustive": { "held": ex.held, "total": ex.total },
                "sampled": {
                    "level": level,
                    "environments_held": sampled.environments_held,
                    "environments": sampled.environments,
                    "held": sampled.held,
                    "total": sampled.total,
                },
            });
            report("duality", pass, &summary, details)
        }
        Verify::Isoperimetry {
            level,
            trials,
            seed: flag,
            exponent,
            exhaustive,
            workers,
            out,
        } => {
            let exp = match exponent.as_str() {
                "printed" => PRINTED_EXPONENT,
                "derived" => derived_exponent(),
                x => x.parse().map_err(|_| {
                    Failure::Core(Error::InvalidInput(format!(
                        "--exponent '{x}' is not printed, derived or a number"
                    )))
                })?,
            };
            let mut reports = vec![isoperimetric_check(
                level,
                trials,
                seed(flag)?,
                exp,
                workers,
            )?];
            if exhaustive > 0 {
                reports.push(isoperimetric_exhaustive(level, exhaustive, exp)?);
            }
            let mut csv = String::new();
            for (i, r) in reports.iter().enumerate() {
                csv.push_str(&r.to_csv(i == 0));
            }
            write_output(&out, &csv)?;
            let failures: usize = reports.iter().map(|r| r.failures()).sum();
            let checked: usize = reports.iter().map(|r| r.rows.len()).sum();
            let min_ratio = reports
                .iter()
                .map(|r| r.min_ratio())
                .fold(f64::INFINITY, f64::min);
            let summary = vec![format!(
                "level {level}, C' = {:.5}, exponent {exp:.5}: {failures}/{checked} regions below the bound, minimum ratio {min_ratio:.4}",
                iso_constant()
            )];
            let details = json!({
                "level": level,
                "constant": iso_constant(),
                "exponent": exp,
                "regions": checked,
                "failures": failures,
                "min_ratio": min_ratio,
            });
            report("isoperimetry", failures == 0, &summary, details)
        }
        Verify::PcTable { m, n, out } => {
            let table = monotonicity_table(parse_range(&m, "m")?, parse_range(&n, "n")?)?;
            write_output(&out, &table.to_csv())?;
            let bad = table.monotonicity_violations();
            let summary = vec![format!(
                "p_c(m, n) for m in {m}, n in {n} (tolerance {PC_TABLE_TOL:e}): {} monotonicity violations",
                bad.len()
            )];
            let details =
                json!({ "ms": table.ms, "ns": table.ns, "pc": table.values, "violations": bad });
            report("pc-table", bad.is_empty(), &summary, details)
        }
    }
}

fn solve(cmd: Solve) -> Result<(), Failure> {
    match cmd {
        Solve::Pc { m, n } => {
            write_output("-", &format!("{}\n", fmt17(solve_pc(m, n, PC_TABLE_TOL)?)))
        }
        Solve::Trace {
            m,
            n,
            p,
            levels,
            out,
        } => {
            let mut csv = String::from("l,value\n");
            for (l, x) in fixed_point_trace(m, n, p, levels)? {
                csv.push_str(&format!("{l},{}\n", fmt17(x)));
            }
            write_output(&out, &csv)
        }
    }
}
