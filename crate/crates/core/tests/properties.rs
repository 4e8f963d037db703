use fractalperc::analytic::median_exact;
use fractalperc::duality::hexacarpet;
use fractalperc::generators::{embed_diamond_in_t, gen_diamond, DiamondParams};
use fractalperc::geometry::growth_fit;
use fractalperc::graph::TerminalSpec;
use fractalperc::percolation::{
    bottleneck_threshold, mean_cluster_size, pc_estimate_diamond, sample_thresholds, theta_curve,
    thresholds_csv, Environment,
};

#[test]
fn triangulation_threshold_below_embedded_diamond() {
    // Labels are drawn on T_k; the diamond image keeps only its own edges.
    for k in 2..=4 {
        let emb = embed_diamond_in_t(k).unwrap();
        let g = emb.tri.graph();
        let t = TerminalSpec::pair(emb.vertex_map[0], emb.vertex_map[1]).unwrap();
        let mut on_image = vec![false; g.edge_count()];
        for &e in &emb.edge_map {
            on_image[e] = true;
        }
        for i in 0..300 {
            let env = Environment::new(13, i, g.edge_count());
            let image_labels: Vec<f64> = env
                .labels()
                .iter()
                .enumerate()
                .map(|(e, &x)| if on_image[e] { x } else { 1.0 })
                .collect();
            let (full, _) = bottleneck_threshold(g, env.labels(), &t).unwrap();
            let (image, _) = bottleneck_threshold(g, &image_labels, &t).unwrap();
            assert!(full <= image, "k={k} sample {i}: {full} > {image}");
        }
    }
}

#[test]
fn diamond_image_threshold_has_diamond_law() {
    // The image of D_2(2,2) in T_3 with its own labels is a D_2(2,2).
    let emb = embed_diamond_in_t(3).unwrap();
    let (d, dt) = gen_diamond(DiamondParams::new(2, 2, 2).unwrap()).unwrap();
    let img = emb.image().unwrap();
    for i in 0..200 {
        let env = Environment::new(2, i, d.edge_count());
        let a = bottleneck_threshold(&d, env.labels(), &dt).unwrap();
        let b = bottleneck_threshold(&img, env.labels(), &dt).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn medians_approach_golden_ratio() {
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    assert_eq!(median_exact(2, 2, 0).unwrap(), 0.5);
    let gaps: Vec<f64> = (1..=25)
        .map(|l| (median_exact(2, 2, l).unwrap() - golden).abs())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
    assert!(gaps[24] < 1e-4, "{gaps:?}");
    let est = pc_estimate_diamond(2, 2, 4, 4000, 8, 0).unwrap();
    for m in est {
        assert!((m.median - m.exact).abs() < 0.03, "{m:?}");
    }
}

#[test]
fn worker_count_does_not_change_bytes() {
    let (g, t) = gen_diamond(DiamondParams::new(3, 2, 3).unwrap()).unwrap();
    let one = thresholds_csv(&sample_thresholds(&g, &t, 77, 500, 1).unwrap());
    for workers in [2, 3, 8] {
        assert_eq!(
            one,
            thresholds_csv(&sample_thresholds(&g, &t, 77, 500, workers).unwrap())
        );
    }
    let grid = [0.2, 0.4, 0.6];
    assert_eq!(
        theta_curve(&g, &t, 77, 500, &grid, 1).unwrap(),
        theta_curve(&g, &t, 77, 500, &grid, 5).unwrap()
    );
}

#[test]
fn hexacarpet_supercritical_cluster_fixture() {
    // Calibrated once: seed 7, 1000 samples, origin face 0.
    let h3 = hexacarpet(3).unwrap();
    let stats = mean_cluster_size(&h3.dual, 0.9, 0, 7, 1000, 0).unwrap();
    assert_eq!(stats.mean, 207.683);
    assert!(stats.mean >= 0.5 * h3.dual.vertex_count() as f64);
}

#[test]
fn hexacarpet_ball_growth() {
    let h4 = hexacarpet(4).unwrap();
    let fit = growth_fit(&h4.dual, 20).unwrap();
    println!("H_4 graph balls, r <= 20: fitted K = {}", fit.k);
    for r in 1..=20 {
        assert!(fit.max_ball[r] as f64 <= fit.k * (r * r) as f64);
    }
    // Degree at most 3 pins the r = 1 ratio; beyond it growth stays below it.
    assert_eq!(fit.k, 4.0);
    assert!((2..=20).all(|r| fit.max_ball[r] < 4 * r * r));
}
