//! Acceptance suite. Every test prints one `criterion N: PASS|FAIL ...` line
//! before asserting, so `cargo test --test acceptance -- --nocapture` gives a
//! readable scorecard. Long variants are `#[ignore]`d.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;

use rand::Rng;
use sfconv::costs::CostSpec;
use sfconv::dynamics::{self, Integrator, SimConfig};
use sfconv::generators::{generate_ba, generate_hk, BaParams, HkParams};
use sfconv::graph::{brute_force_global_clustering, predicted_c_ba, predicted_c_hk};
use sfconv::io::{self, IngestOptions};
use sfconv::montecarlo::{self, GeneratorSpec, McConfig, ResamplePolicy, TopologySpec};
use sfconv::rng::{self, SimRng};
use sfconv::spectral::{self, JacobianSpec};
use sfconv::{CostModel, Graph, NodeState};

fn report(n: u32, pass: bool, detail: &str) {
    println!("criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {detail}");
}

fn random_connected(n: usize, p: f64, r: &mut SimRng) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((r.gen_range(0..v), v));
    }
    for i in 0..n {
        for j in i + 1..n {
            if r.gen::<f64>() < p && !edges.contains(&(i, j)) {
                edges.push((i, j));
            }
        }
    }
    let weighted: Vec<_> = edges.into_iter().map(|(i, j)| (i, j, r.gen_range(0.5..1.5))).collect();
    Graph::build(n, &weighted).unwrap()
}

fn mean_clustering(seeds: u64, make: impl Fn(&mut SimRng) -> Graph) -> (f64, f64) {
    let (mut c, mut d) = (0.0, 0.0);
    for s in 0..seeds {
        let g = make(&mut rng::from_seed(s));
        c += g.global_clustering().global;
        d += g.degree_stats().average;
    }
    (c / seeds as f64, d / seeds as f64)
}

fn sfconv() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sfconv"))
}

fn run_ok(cmd: &mut Command) -> String {
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "{:?}: {}", cmd, String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn c01_clustering_oracle() {
    let start = std::time::Instant::now();
    let mut r = rng::from_seed(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = r.gen_range(1..=50);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if r.gen::<f64>() < 0.2 {
                    edges.push((i, j, 1.0));
                }
            }
        }
        let g = Graph::build(n, &edges).unwrap();
        worst = worst.max((g.global_clustering().global - brute_force_global_clustering(&g)).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    report(1, worst <= 1e-12 && secs < 5.0, &format!("max |fast - brute| = {worst:e}, {secs:.2}s"));
}

#[test]
fn c02_ba_clustering_prediction() {
    let (c, _) = mean_clustering(20, |r| generate_ba(&BaParams::new(2000, 10), r).unwrap());
    let pred = predicted_c_ba(2000, 10);
    let ratio = c / pred;
    report(2, (0.5..=1.5).contains(&ratio), &format!("BA(2000,10) mean C = {c:.4}, predicted {pred:.4}, ratio {ratio:.3}"));
}

#[test]
#[ignore = "long: n = 10^4"]
fn c02_long_ba() {
    let (c, _) = mean_clustering(5, |r| generate_ba(&BaParams::new(10_000, 30), r).unwrap());
    report(2, (0.02..=0.045).contains(&c), &format!("BA(1e4,30) mean C = {c:.4}, expected in [0.02, 0.045]"));
}

#[test]
fn c03_hk_clustering_prediction() {
    let mut cs = Vec::new();
    let mut ok = true;
    let mut detail = String::new();
    for l2 in 1..=3 {
        let (c, d) = mean_clustering(20, |r| generate_hk(&HkParams::new(2000, 10, l2), r).unwrap());
        let pred = predicted_c_hk(2000, 10, l2, d).unwrap();
        let ratio = c / pred;
        ok &= (0.75..=1.25).contains(&ratio);
        detail += &format!("L2={l2}: C={c:.4} pred={pred:.4} ratio={ratio:.2}; ");
        cs.push(c);
    }
    let increasing = cs.windows(2).all(|w| w[0] < w[1]);
    detail += &format!("increasing={increasing}");
    report(3, ok && increasing, &detail);
}

#[test]
#[ignore = "long: n = 10^4"]
fn c03_long_hk() {
    let (c2, _) = mean_clustering(3, |r| generate_hk(&HkParams::new(10_000, 30, 2), r).unwrap());
    let (c4, _) = mean_clustering(3, |r| generate_hk(&HkParams::new(10_000, 30, 4), r).unwrap());
    let ok = (c2 - 0.102).abs() <= 0.02 && (c4 - 0.172).abs() <= 0.03;
    report(3, ok, &format!("HK(1e4,30,2) C = {c2:.4} (0.102 +- 0.02), HK(1e4,30,4) C = {c4:.4} (0.172 +- 0.03)"));
}

#[test]
fn c04_degree_parity() {
    let (_, d_ba) = mean_clustering(20, |r| generate_ba(&BaParams::new(2000, 10), r).unwrap());
    let mut worst = 0.0f64;
    for l2 in 1..=3 {
        let (_, d_hk) = mean_clustering(20, |r| generate_hk(&HkParams::new(2000, 10, l2), r).unwrap());
        worst = worst.max((d_hk / d_ba - 1.0).abs());
    }
    report(4, worst <= 0.02, &format!("BA d = {d_ba:.3}, worst relative HK deviation {worst:.2e}"));
}

fn fig4_config() -> McConfig {
    let mut sim = SimConfig::new(1.0, 5000);
    sim.h = Some(0.002);
    sim.record_stride = 500;
    let topo = |label: &str, l2: usize| TopologySpec {
        label: label.into(),
        generator: if l2 == 0 {
            GeneratorSpec::Ba { n: 500, links: 6, seed_size: None }
        } else {
            GeneratorSpec::Hk { n: 500, links: 6, triad_links: l2, seed_size: None }
        },
    };
    McConfig {
        topologies: vec![topo("SF", 0), topo("CSF1", 1), topo("CSF2", 2)],
        cost_spec: CostSpec::Quartic,
        sim,
        trials: 20,
        base_seed: 2024,
        weight_range: (0.5, 1.5),
        resample_cost: ResamplePolicy::PerTrial,
        lambda2: true,
        rate: false,
    }
}

#[test]
fn c05_clustering_slows_convergence() {
    let start = std::time::Instant::now();
    let s = montecarlo::run_mc(&fig4_config()).unwrap();
    let gaps: Vec<f64> = s.labels.iter().map(|l| l.final_gap_mean).collect();
    let cs: Vec<f64> = s.labels.iter().map(|l| l.mean_clustering).collect();
    let gap_ok = gaps[0] < gaps[1] && gaps[1] < gaps[2];
    let c_ok = cs[0] < cs[1] && cs[1] < cs[2];
    let secs = start.elapsed().as_secs_f64();
    report(
        5,
        gap_ok && c_ok && secs < 600.0,
        &format!(
            "final gaps SF/CSF1/CSF2 = {:.3e}/{:.3e}/{:.3e}, C = {:.4}/{:.4}/{:.4}, {secs:.0}s",
            gaps[0], gaps[1], gaps[2], cs[0], cs[1], cs[2]
        ),
    );
}

#[test]
fn c06_spectral_oracles() {
    let mut worst = 0.0f64;
    for n in 4..=50 {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, 1.0))).collect();
        let k = spectral::lambda2_laplacian(&Graph::build(n, &edges).unwrap()).unwrap();
        worst = worst.max((k - n as f64).abs());
        let ring: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
        let c = spectral::lambda2_laplacian(&Graph::build(n, &ring).unwrap()).unwrap();
        worst = worst.max((c - (2.0 - 2.0 * (2.0 * PI / n as f64).cos())).abs());
    }
    let mut r = rng::from_seed(6);
    let mut worst_rate = 0.0f64;
    for k in 0..20 {
        let n = 6 + 2 * k;
        let g = random_connected(n, 0.15, &mut r);
        let spec = JacobianSpec::new(&g, 0.5, vec![0.0; n]);
        let rate = spectral::convergence_rate(&spec, spec.default_zero_tol()).unwrap();
        worst_rate = worst_rate.max((rate - spectral::lambda2_laplacian(&g).unwrap()).abs());
    }
    report(6, worst <= 1e-8 && worst_rate <= 1e-8, &format!("K_n/C_n max error {worst:e}, H=0 rate vs lambda2 max error {worst_rate:e}"));
}

#[test]
fn c07_real_networks() {
    let Some(dir) = std::env::var_os("SFCONV_DATASETS") else {
        println!("criterion 7: SKIP set SFCONV_DATASETS to a directory with food-web.txt, facebook-small.txt, elegans.txt");
        return;
    };
    let rows = [
        ("food-web.txt", 127, 16.69, 0.0057, 0.669, 0.91),
        ("facebook-small.txt", 247, 7.61, 0.0489, 0.207, 0.197),
        ("elegans.txt", 453, 8.973, 0.124, 0.264, 0.241),
    ];
    let mut ok = true;
    let mut detail = String::new();
    for (file, n, d, c, l2, rate) in rows {
        let g = io::read_edge_list_file(Path::new(&dir).join(file), &IngestOptions::default()).unwrap();
        let model: CostModel = CostSpec::Quartic.sample(g.n(), &mut rng::from_seed(0)).unwrap();
        let opt = model.aggregate_optimum().unwrap();
        let rep = spectral::spectral_report(&g, 0.001, model.hessians_at(opt.x_star)).unwrap();
        let gd = g.degree_stats().average;
        let gc = g.global_clustering().global;
        let row_ok = g.n() == n
            && (gd - d).abs() < 0.01
            && (gc - c).abs() <= 0.005
            && (rep.lambda2_laplacian - l2).abs() <= 1e-3
            && (rep.rate / rate - 1.0).abs() <= 0.25;
        ok &= row_ok;
        detail += &format!("{file}: n={} d={gd:.3} C={gc:.4} l2={:.4} rate={:.4e}; ", g.n(), rep.lambda2_laplacian, rep.rate);
    }
    report(7, ok, &detail);
}

#[test]
fn c08_rewiring_raises_clustering_and_slows_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name);
    run_ok(sfconv().args(["generate", "--model", "hk", "--n", "1788", "--l", "7", "--l2", "1", "--seed", "8", "--out"]).arg(p("g.json")));
    let g = io::read_graph_file(p("g.json")).unwrap();
    let c0 = g.global_clustering().global;
    let target = 1.5 * c0;
    run_ok(
        sfconv()
            .args(["rewire", "--in"])
            .arg(p("g.json"))
            .args(["--target-c", &target.to_string(), "--max-swaps", "3000000", "--seed", "9", "--out"])
            .arg(p("r.json")),
    );
    let rw = io::read_graph_file(p("r.json")).unwrap();
    let c1 = rw.global_clustering().global;
    let structural = c1 >= target && rw.degrees() == g.degrees() && rw.edge_count() == g.edge_count() && rw.is_connected();

    let final_gap = |graph: &str, trace: &str| -> f64 {
        run_ok(
            sfconv()
                .args(["optimize", "--in"])
                .arg(p(graph))
                .args(["--cost", "quartic", "--alpha", "1", "--steps", "3000", "--seed", "10", "--out"])
                .arg(p(trace)),
        );
        let csv = std::fs::read_to_string(p(trace)).unwrap();
        csv.lines().last().unwrap().split(',').nth(1).unwrap().parse().unwrap()
    };
    let gap_orig = final_gap("g.json", "g.csv");
    let gap_rw = final_gap("r.json", "r.csv");
    report(
        8,
        structural && gap_rw > gap_orig,
        &format!(
            "d = {:.2}, C {c0:.4} -> {c1:.4} (target {target:.4}), degrees kept, final gap original {gap_orig:.3e} vs rewired {gap_rw:.3e}",
            g.degree_stats().average
        ),
    );
}

#[test]
fn c09_derivatives() {
    const STEP: f64 = 1e-5;
    let mut worst = 0.0f64;
    for spec in [CostSpec::Quartic, CostSpec::MlLoss { m: 20 }] {
        let model: CostModel = spec.sample(20, &mut rng::from_seed(9)).unwrap();
        let mut r = rng::from_seed(10);
        for _ in 0..100 {
            let i = r.gen_range(0..20);
            let x = r.gen_range(-6.0..6.0);
            let f = |x: f64| model.value(i, x).unwrap();
            let g = |x: f64| model.gradient(i, x).unwrap();
            let scale = 1e-3 * (1.0 + f(x).abs());
            let fd_g = (f(x + STEP) - f(x - STEP)) / (2.0 * STEP);
            let fd_h = (g(x + STEP) - g(x - STEP)) / (2.0 * STEP);
            worst = worst.max((g(x) - fd_g).abs() / g(x).abs().max(scale));
            worst = worst.max((model.hessian(i, x).unwrap() - fd_h).abs() / model.hessian(i, x).unwrap().abs().max(scale));
        }
    }
    report(9, worst < 1e-6, &format!("max relative error {worst:e}"));
}

#[test]
fn c10_conservation() {
    let mut worst = 0.0f64;
    let mut r = rng::from_seed(11);
    let graphs: Vec<Graph> = vec![
        generate_ba(&BaParams::new(200, 3), &mut r).unwrap(),
        generate_hk(&HkParams::new(200, 4, 2), &mut r).unwrap(),
        random_connected(60, 0.1, &mut r),
    ];
    for g in &graphs {
        let g = g.assign_random_weights(&mut r, 0.5, 1.5).unwrap();
        for spec in [CostSpec::Quartic, CostSpec::MlLoss { m: 20 }] {
            let model: CostModel = spec.sample(g.n(), &mut r).unwrap();
            let cfg = SimConfig::new(1.0, 3000);
            let mut s: NodeState = dynamics::initialize(&g, &model, &cfg, &mut r).unwrap();
            let h = dynamics::resolve_step(&g, &model, &cfg, &s);
            let mut integ = Integrator::new(&g, &model, cfg.alpha, h, &s);
            let (mut drift, mut scale) = (0.0f64, 0.0f64);
            for _ in 0..cfg.steps {
                assert!(integ.step(&mut s));
                let sum_y: f64 = s.y.iter().sum();
                let sum_g: f64 = integ.gradients().iter().sum();
                drift = drift.max((sum_y - sum_g).abs());
                scale = scale.max(sum_g.abs());
            }
            worst = worst.max(drift / (1.0 + scale));
        }
    }
    report(10, worst <= 1e-9, &format!("max drift / (1 + max |sum grad|) = {worst:e} over 6 runs"));
}

#[test]
fn c11_first_order() {
    let mut r = rng::from_seed(12);
    let g = random_connected(10, 0.3, &mut r);
    let model: CostModel = CostSpec::Quartic.sample(10, &mut r).unwrap();
    let x0: Vec<f64> = (0..10).map(|_| r.gen_range(-5.0..5.0)).collect();
    let horizon = 2.0;
    let endpoint = |h: f64| -> NodeState {
        let steps = (horizon / h).round() as usize;
        let mut cfg = SimConfig::new(1.0, steps);
        cfg.h = Some(h);
        cfg.record_stride = steps;
        dynamics::simulate(&g, &model, &cfg, NodeState::tracking(&model, x0.clone())).unwrap().final_state
    };
    let err = |h: f64| -> f64 {
        let (a, b) = (endpoint(h), endpoint(h / 10.0));
        a.x.iter().zip(&b.x).chain(a.y.iter().zip(&b.y)).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
    };
    let ratio = err(0.02) / err(0.01);
    report(11, (1.6..=2.4).contains(&ratio), &format!("error ratio h / (h/2) = {ratio:.3}"));
}

#[test]
fn c12_mc_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = fig4_config();
    cfg.trials = 4;
    cfg.sim.steps = 400;
    cfg.sim.record_stride = 50;
    for t in &mut cfg.topologies {
        if let GeneratorSpec::Ba { n, .. } | GeneratorSpec::Hk { n, .. } = &mut t.generator {
            *n = 150;
        }
    }
    let config = dir.path().join("campaign.json");
    std::fs::write(&config, serde_json::to_string_pretty(&cfg).unwrap()).unwrap();
    let run = |out: &str| -> Vec<u8> {
        run_ok(sfconv().arg("mc").arg("--config").arg(&config).arg("--out").arg(dir.path().join(out)));
        std::fs::read(dir.path().join(out).join("summary.json")).unwrap()
    };
    let (a, b) = (run("a"), run("b"));
    report(12, !a.is_empty() && a == b, &format!("summary.json {} bytes, identical = {}", a.len(), a == b));
}
