//! Areas, perimeters and mesh of `T_n` regions, and the hexacarpet
//! isoperimetric check.
//!
//! A region `J` is a set of faces of `T_level`, equivalently a set of
//! hexacarpet vertices. Its boundary count `|∂J|` is the number of `T` edges
//! with exactly one side in `J`: hexacarpet edges leaving `J` plus edges of
//! `J` on the outer triangle, which have no dual edge.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::generators::{gen_barycentric, Triangulation};
use crate::graph::{Multigraph, VertexId};
use crate::percolation::{fmt17, run_samples};

/// `C′ = (3·3^{1/4}/8)·√π`.
pub fn iso_constant() -> f64 {
    3.0 * 3f64.powf(0.25) / 8.0 * std::f64::consts::PI.sqrt()
}

/// `α = log_6(√3/(2√2))`.
pub fn iso_alpha() -> f64 {
    (3f64.sqrt() / (2.0 * 2f64.sqrt())).ln() / 6f64.ln()
}

/// `1/2 + α`, which equals `log_6(3/2) ≈ 0.2263`.
pub fn derived_exponent() -> f64 {
    0.5 + iso_alpha()
}

/// The decimal exponent usually quoted with the bound. It is `1 - derived_exponent()`.
pub const PRINTED_EXPONENT: f64 = 0.7737;

/// A nonempty set of faces of `T_level`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceRegion {
    level: u32,
    faces: BTreeSet<usize>,
}

impl FaceRegion {
    pub fn new(level: u32, faces: impl IntoIterator<Item = usize>) -> Result<Self> {
        let faces: BTreeSet<usize> = faces.into_iter().collect();
        if faces.is_empty() {
            return invalid("region must be nonempty");
        }
        let total = 6u64.checked_pow(level).unwrap_or(u64::MAX);
        if let Some(&f) = faces.iter().next_back().filter(|&&f| f as u64 >= total) {
            return invalid(format!("face {f} out of range for level {level}"));
        }
        Ok(Self { level, faces })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn faces(&self) -> &BTreeSet<usize> {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    fn check_against(&self, t: &Triangulation) -> Result<()> {
        if t.level() != self.level || t.coords().is_none() {
            return invalid("region level differs from triangulation, or no coordinates");
        }
        Ok(())
    }
}

/// Area from the face count: every level-`n` face has area `(√3/4)·6^{-n}`.
pub fn region_area(r: &FaceRegion) -> f64 {
    3f64.sqrt() / 4.0 * 6f64.powi(-(r.level as i32)) * r.len() as f64
}

/// Area as a sum of shoelace areas of the region's faces.
pub fn region_area_polygon(t: &Triangulation, r: &FaceRegion) -> Result<f64> {
    r.check_against(t)?;
    let c = t.coords().expect("checked");
    Ok(r.faces
        .iter()
        .map(|&f| {
            let [a, b, d] = t.faces()[f].map(|v| c[v]);
            ((b[0] - a[0]) * (d[1] - a[1]) - (d[0] - a[0]) * (b[1] - a[1])).abs() / 2.0
        })
        .sum())
}

/// Counts of the region's boundary edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryCount {
    /// All `T` edges with exactly one side in the region.
    pub total: usize,
    /// Those with a face on both sides, i.e. hexacarpet edges leaving `J`.
    pub hexacarpet: usize,
}

fn boundary_edges(
    t: &Triangulation,
    edge_faces: &[Vec<usize>],
    r: &FaceRegion,
) -> Vec<(usize, bool)> {
    let mut out = Vec::new();
    for &f in &r.faces {
        for &e in &t.face_edges()[f] {
            match edge_faces[e][..] {
                [_] => out.push((e, false)),
                [g, h] => {
                    let other = if g == f { h } else { g };
                    if !r.faces.contains(&other) {
                        out.push((e, true));
                    }
                }
                _ => unreachable!("edges border one or two faces"),
            }
        }
    }
    out
}

pub fn boundary_edge_count(t: &Triangulation, r: &FaceRegion) -> Result<BoundaryCount> {
    r.check_against(t)?;
    let edges = boundary_edges(t, &t.edge_faces(), r);
    Ok(BoundaryCount {
        total: edges.len(),
        hexacarpet: edges.iter().filter(|&&(_, dual)| dual).count(),
    })
}

fn length(c: &[[f64; 2]], u: VertexId, v: VertexId) -> f64 {
    (c[u][0] - c[v][0]).hypot(c[u][1] - c[v][1])
}

/// Total length of the region's boundary edges.
pub fn region_perimeter(t: &Triangulation, r: &FaceRegion) -> Result<f64> {
    r.check_against(t)?;
    let c = t.coords().expect("checked");
    Ok(boundary_edges(t, &t.edge_faces(), r)
        .into_iter()
        .map(|(e, _)| {
            let (u, v) = t.graph().endpoints(e);
            length(c, u, v)
        })
        .sum())
}

/// Longest edge of a triangulation with coordinates.
pub fn mesh(t: &Triangulation) -> Result<f64> {
    let Some(c) = t.coords() else {
        return invalid("mesh needs coordinates");
    };
    Ok(t.graph()
        .edges()
        .iter()
        .map(|&(u, v)| length(c, u, v))
        .fold(0.0, f64::max))
}

/// Face adjacency across interior edges: the hexacarpet adjacency lists.
pub fn face_adjacency(t: &Triangulation) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::with_capacity(3); t.faces().len()];
    for faces in t.edge_faces() {
        if let [f, g] = faces[..] {
            adj[f].push(g);
            adj[g].push(f);
        }
    }
    adj
}

fn below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    ((rng.next_u64() as u128 * n as u128) >> 64) as usize
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// A random connected region of `T_level`, from its own ChaCha8 stream.
///
/// The target size is log-uniform on `[1, 6^level]`. Starting from a uniform
/// face, a uniform face adjacent to the region is added until the target is
/// reached.
pub fn random_region(adj: &[Vec<usize>], level: u32, seed: u64, trial: u64) -> Result<FaceRegion> {
    let total = adj.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let target = ((unit(&mut rng) * (total as f64).ln()).exp().floor() as usize).clamp(1, total);
    let start = below(&mut rng, total);
    let mut inside = vec![false; total];
    let mut in_frontier = vec![false; total];
    let mut frontier: Vec<usize> = Vec::new();
    let mut faces = vec![start];
    inside[start] = true;
    let mut grow = |f: usize, inside: &[bool], frontier: &mut Vec<usize>| {
        for &g in &adj[f] {
            if !inside[g] && !in_frontier[g] {
                in_frontier[g] = true;
                frontier.push(g);
            }
        }
    };
    grow(start, &inside, &mut frontier);
    while faces.len() < target && !frontier.is_empty() {
        let k = below(&mut rng, frontier.len());
        let f = frontier.swap_remove(k);
        inside[f] = true;
        faces.push(f);
        grow(f, &inside, &mut frontier);
    }
    FaceRegion::new(level, faces)
}

/// Every connected region of at most `max_size` faces, each exactly once.
pub fn connected_regions(adj: &[Vec<usize>], max_size: usize) -> Vec<Vec<usize>> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut layer: Vec<Vec<usize>> = (0..adj.len()).map(|f| vec![f]).collect();
    let mut out = Vec::new();
    for size in 1..=max_size {
        out.extend(layer.iter().cloned());
        if size == max_size {
            break;
        }
        let mut next = Vec::new();
        for region in &layer {
            for &f in region {
                for &g in &adj[f] {
                    if region.binary_search(&g).is_ok() {
                        continue;
                    }
                    let mut bigger = region.clone();
                    let pos = bigger.binary_search(&g).unwrap_err();
                    bigger.insert(pos, g);
                    if seen.insert(bigger.clone()) {
                        next.push(bigger);
                    }
                }
            }
        }
        layer = next;
    }
    out
}

/// One checked region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoRow {
    pub region_size: usize,
    pub boundary_count: usize,
    pub hexacarpet_boundary: usize,
    /// `C′·|J|^exponent`.
    pub bound_value: f64,
    pub ratio: f64,
}

impl IsoRow {
    fn new(region_size: usize, b: BoundaryCount, exponent: f64) -> Self {
        let bound_value = iso_constant() * (region_size as f64).powf(exponent);
        Self {
            region_size,
            boundary_count: b.total,
            hexacarpet_boundary: b.hexacarpet,
            bound_value,
            ratio: b.total as f64 / bound_value,
        }
    }

    pub fn holds(&self) -> bool {
        self.ratio >= 1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsoReport {
    pub level: u32,
    pub exponent: f64,
    pub rows: Vec<IsoRow>,
}

impl IsoReport {
    pub fn min_ratio(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.ratio)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.holds()).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    /// The row with the smallest ratio.
    pub fn worst(&self) -> Option<&IsoRow> {
        self.rows.iter().min_by(|a, b| a.ratio.total_cmp(&b.ratio))
    }

    /// `level,region_size,boundary_count,bound_value,ratio` rows (header
    /// included when `header` is set).
    pub fn to_csv(&self, header: bool) -> String {
        let mut out = String::new();
        if header {
            out.push_str("level,region_size,boundary_count,bound_value,ratio\n");
        }
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                self.level,
                r.region_size,
                r.boundary_count,
                fmt17(r.bound_value),
                fmt17(r.ratio)
            ));
        }
        out
    }
}

/// Checks `|∂J| >= C′·|J|^exponent` on `trials` random connected regions
/// of `T_level`.
pub fn isoperimetric_check(
    level: u32,
    trials: u64,
    seed: u64,
    exponent: f64,
    workers: usize,
) -> Result<IsoReport> {
    if level > 5 {
        return invalid(format!("isoperimetry level must be <= 5 (got {level})"));
    }
    if trials == 0 {
        return invalid("trials must be >= 1");
    }
    let t = gen_barycentric(level)?;
    let adj = face_adjacency(&t);
    let edge_faces = t.edge_faces();
    let rows = run_samples(trials, workers, |i| {
        let r = random_region(&adj, level, seed, i)?;
        let edges = boundary_edges(&t, &edge_faces, &r);
        let b = BoundaryCount {
            total: edges.len(),
            hexacarpet: edges.iter().filter(|&&(_, dual)| dual).count(),
        };
        Ok(IsoRow::new(r.len(), b, exponent))
    })?;
    Ok(IsoReport {
        level,
        exponent,
        rows,
    })
}

/// Checks the bound on every connected region of at most `max_size` faces.
pub fn isoperimetric_exhaustive(level: u32, max_size: usize, exponent: f64) -> Result<IsoReport> {
    if level > 3 || max_size > 8 {
        return invalid("exhaustive check limited to level <= 3 and size <= 8");
    }
    let t = gen_barycentric(level)?;
    let adj = face_adjacency(&t);
    let edge_faces = t.edge_faces();
    let rows = connected_regions(&adj, max_size)
        .into_iter()
        .map(|faces| {
            let r = FaceRegion::new(level, faces)?;
            let edges = boundary_edges(&t, &edge_faces, &r);
            let b = BoundaryCount {
                total: edges.len(),
                hexacarpet: edges.iter().filter(|&&(_, dual)| dual).count(),
            };
            Ok(IsoRow::new(r.len(), b, exponent))
        })
        .collect::<Result<_>>()?;
    Ok(IsoReport {
        level,
        exponent,
        rows,
    })
}

/// Sizes `|B(v, r)|` of graph balls for `r = 0..=max_radius`.
pub fn ball_sizes(g: &Multigraph, v: VertexId, max_radius: usize) -> Result<Vec<usize>> {
    g.check_vertex(v)?;
    let adj = g.incidence();
    let mut dist = vec![usize::MAX; g.vertex_count()];
    let mut per_radius = vec![0usize; max_radius + 1];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        per_radius[dist[x]] += 1;
        if dist[x] == max_radius {
            continue;
        }
        for &(y, _) in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    let mut acc = 0;
    Ok(per_radius
        .into_iter()
        .map(|k| {
            acc += k;
            acc
        })
        .collect())
}

/// Ball growth over all centres of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFit {
    /// `max_v |B(v, r)|` for `r = 0..=max_radius`.
    pub max_ball: Vec<usize>,
    /// Smallest `K` with `|B(v, r)| <= K r²` for all `v` and `1 <= r`.
    pub k: f64,
}

pub fn growth_fit(g: &Multigraph, max_radius: usize) -> Result<GrowthFit> {
    if max_radius == 0 {
        return invalid("max radius must be >= 1");
    }
    let mut max_ball = vec![0usize; max_radius + 1];
    for v in 0..g.vertex_count() {
        for (r, &b) in ball_sizes(g, v, max_radius)?.iter().enumerate() {
            max_ball[r] = max_ball[r].max(b);
        }
    }
    let k = (1..=max_radius)
        .map(|r| max_ball[r] as f64 / (r * r) as f64)
        .fold(0.0, f64::max);
    Ok(GrowthFit { max_ball, k })
}

/// Boundary count by toggling face sides keyed on vertex pairs; independent
/// of the edge tables.
pub fn boundary_count_by_sides(t: &Triangulation, r: &FaceRegion) -> usize {
    let mut count: HashMap<(VertexId, VertexId), u32> = HashMap::new();
    for &f in &r.faces {
        let [a, b, c] = t.faces()[f];
        for (u, v) in [(a, b), (b, c), (c, a)] {
            *count.entry((u.min(v), u.max(v))).or_default() += 1;
        }
    }
    count.values().filter(|&&k| k == 1).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SQRT3_4: f64 = 0.4330127018922193;

    #[test]
    fn constants() {
        assert!((iso_constant() - 0.874_75).abs() < 1e-4);
        assert!((iso_alpha() + 0.273_71).abs() < 1e-4);
        assert!((derived_exponent() - 1.5f64.ln() / 6f64.ln()).abs() < 1e-15);
        assert!((1.0 - derived_exponent() - PRINTED_EXPONENT).abs() < 1e-4);
    }

    #[test]
    fn areas() {
        let t3 = gen_barycentric(3).unwrap();
        let one = FaceRegion::new(3, [17]).unwrap();
        assert!((region_area(&one) - SQRT3_4 / 216.0).abs() < 1e-15);
        let all = FaceRegion::new(3, 0..216).unwrap();
        assert!((region_area(&all) - SQRT3_4).abs() < 1e-15);
        assert!((region_area_polygon(&t3, &all).unwrap() - SQRT3_4).abs() < 1e-12);
        let ten = FaceRegion::new(3, (0..10).map(|i| i * 21)).unwrap();
        let a = region_area(&ten);
        assert!((a - 10.0 * SQRT3_4 / 216.0).abs() < 1e-15);
        assert!((region_area_polygon(&t3, &ten).unwrap() - a).abs() <= 1e-10 * a);
    }

    #[test]
    fn region_guards() {
        assert!(FaceRegion::new(1, []).is_err());
        assert!(FaceRegion::new(1, [6]).is_err());
        let t2 = gen_barycentric(2).unwrap();
        assert!(region_area_polygon(&t2, &FaceRegion::new(1, [0]).unwrap()).is_err());
        assert!(isoperimetric_check(6, 1, 0, 0.5, 1).is_err());
    }

    #[test]
    fn single_face_and_whole_triangle() {
        for level in 0..=4 {
            let t = gen_barycentric(level).unwrap();
            let c = t.coords().unwrap();
            let f = t.faces().len() / 2;
            let one = FaceRegion::new(level, [f]).unwrap();
            assert_eq!(boundary_edge_count(&t, &one).unwrap().total, 3);
            let [a, b, d] = t.faces()[f];
            let per = length(c, a, b) + length(c, b, d) + length(c, d, a);
            assert!((region_perimeter(&t, &one).unwrap() - per).abs() < 1e-12);

            let all = FaceRegion::new(level, 0..t.faces().len()).unwrap();
            let b = boundary_edge_count(&t, &all).unwrap();
            assert_eq!(
                b,
                BoundaryCount {
                    total: 3 << level,
                    hexacarpet: 0
                }
            );
            assert!((region_perimeter(&t, &all).unwrap() - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn child_block_boundary_matches_brute_force() {
        let t3 = gen_barycentric(3).unwrap();
        for child in 0..6 {
            let r = FaceRegion::new(3, child * 36..(child + 1) * 36).unwrap();
            let b = boundary_edge_count(&t3, &r).unwrap();
            assert_eq!(b.total, boundary_count_by_sides(&t3, &r));
            assert_eq!(b.total, 12);
        }
    }

    #[test]
    fn mesh_contracts_by_two_thirds() {
        let mut prev = mesh(&gen_barycentric(0).unwrap()).unwrap();
        assert!((prev - 1.0).abs() < 1e-15);
        for level in 1..=6 {
            let m = mesh(&gen_barycentric(level).unwrap()).unwrap();
            assert!(
                m <= 2.0 / 3.0 * prev + 1e-12,
                "level {level}: {m} vs {prev}"
            );
            assert!(m <= (2f64 / 3.0).powi(level as i32) + 1e-12);
            prev = m;
        }
        let m1 = mesh(&gen_barycentric(1).unwrap()).unwrap();
        assert!((m1 - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn polyomino_counts_small() {
        let t1 = gen_barycentric(1).unwrap();
        let adj = face_adjacency(&t1);
        // Arcs of a 6-cycle: 6 of each length 1..5, and the whole cycle.
        let sizes: Vec<usize> = connected_regions(&adj, 6).iter().map(Vec::len).collect();
        for k in 1..=5 {
            assert_eq!(sizes.iter().filter(|&&s| s == k).count(), 6);
        }
        assert_eq!(sizes.iter().filter(|&&s| s == 6).count(), 1);
    }

    #[test]
    fn random_regions_reproducible_and_connected() {
        let t = gen_barycentric(3).unwrap();
        let adj = face_adjacency(&t);
        for trial in 0..20 {
            let r = random_region(&adj, 3, 9, trial).unwrap();
            assert_eq!(r, random_region(&adj, 3, 9, trial).unwrap());
            let faces: Vec<usize> = r.faces().iter().copied().collect();
            let mut reached = BTreeSet::from([faces[0]]);
            let mut stack = vec![faces[0]];
            while let Some(f) = stack.pop() {
                for &g in &adj[f] {
                    if r.faces().contains(&g) && reached.insert(g) {
                        stack.push(g);
                    }
                }
            }
            assert_eq!(reached.len(), r.len());
        }
    }

    #[test]
    fn ball_sizes_on_cycle() {
        let h1 = crate::duality::hexacarpet(1).unwrap();
        assert_eq!(ball_sizes(&h1.dual, 0, 4).unwrap(), vec![1, 3, 5, 6, 6]);
        let fit = growth_fit(&h1.dual, 3).unwrap();
        assert_eq!(fit.k, 3.0);
    }

    proptest! {
        #[test]
        fn region_geometry(seed in 0u64..1000, level in 1u32..=3) {
            let t = gen_barycentric(level).unwrap();
            let adj = face_adjacency(&t);
            let r = random_region(&adj, level, seed, 0).unwrap();
            let area = region_area(&r);
            let poly = region_area_polygon(&t, &r).unwrap();
            prop_assert!((area - poly).abs() <= 1e-10 * area);
            let per = region_perimeter(&t, &r).unwrap();
            let b = boundary_edge_count(&t, &r).unwrap();
            prop_assert_eq!(b.total, boundary_count_by_sides(&t, &r));
            prop_assert!(per >= 2.0 * (std::f64::consts::PI * area).sqrt() - 1e-12);
            prop_assert!(per <= (2f64 / 3.0).powi(level as i32) * b.total as f64 + 1e-12);
        }
    }
}
