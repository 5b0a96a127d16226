//! Acceptance run: one PASS/FAIL line per criterion. Every criterion writes a
//! JSON record; the whole battery then runs a second time and criterion 11
//! compares the two sets of records byte for byte.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use expander_lab::graphs::{certify_expander, gen_named, gen_paley, gen_random_regular, BipartiteView, Graph};
use expander_lab::hamilton::{hamilton_pipeline, verify_hamilton_cycle, Outcome, PipelineConfig};
use expander_lab::linalg::{singular_values, DenseMatrix, DEFAULT_TOL};
use expander_lab::matching::{greedy_matching_avoiding, measure_bipartite, perfect_matching_expander, verify_matching};
use expander_lab::mixing::{eml_graph_audit, MatrixAuditor};
use expander_lab::report::to_json;
use expander_lab::rng;
use expander_lab::sampling::{
    hypergeometric_tail, induced_subgraph_experiment, submatrix_norm_experiment, SubgraphConfig, SubmatrixMode, TailSide,
};
use nalgebra::DMatrix;
use rand::seq::{index::sample, SliceRandom};
use rand::Rng;
use serde_json::{json, Value};

const MASTER_SEED: u64 = 2024;

struct Verdict {
    pass: bool,
    detail: String,
    record: Value,
}

struct Criterion {
    id: usize,
    name: &'static str,
    limit: Duration,
    run: fn(u64) -> Verdict,
}

fn seed_for(master: u64, label: &str) -> u64 {
    rng::stream_seed(master, label)
}

fn random_set(r: &mut rng::Rng, n: usize) -> Vec<usize> {
    let k = r.gen_range(1..=n);
    let mut v = sample(r, n, k).into_vec();
    v.sort_unstable();
    v
}

fn oracle_singular_values(m: &DenseMatrix) -> Vec<f64> {
    let a = DMatrix::from_row_slice(m.rows(), m.cols(), m.data());
    let mut s: Vec<f64> = a.singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = rng::rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let off = a.n();
    let edges: Vec<(usize, usize)> = a.edges().chain(b.edges().map(|(u, v)| (u + off, v + off))).collect();
    Graph::from_edges(a.n() + b.n(), &edges).unwrap()
}

fn spectral_oracle(master: u64) -> Verdict {
    let mut fixtures: Vec<(String, Graph)> = Vec::new();
    for n in [2, 5, 16, 33, 64] {
        fixtures.push((format!("K{n}"), gen_named("complete", &[n]).unwrap()));
    }
    for n in [3, 8, 31, 64] {
        fixtures.push((format!("C{n}"), gen_named("cycle", &[n]).unwrap()));
    }
    fixtures.push(("Petersen".into(), gen_named("petersen", &[]).unwrap()));
    for q in [5, 13, 17, 29, 37, 41, 53, 61] {
        fixtures.push((format!("Paley({q})"), gen_paley(q).unwrap()));
    }
    let base = seed_for(master, "spectral");
    let mut r = rng::rng(base);
    for i in 0..200u64 {
        let n = r.gen_range(8..=64);
        let g = if i % 2 == 0 {
            erdos_renyi(n, r.gen_range(0.05..0.6), rng::trial_seed(base, i))
        } else {
            let d = r.gen_range(3..=7.min(n - 1));
            let n = if n * d % 2 == 1 { n - 1 } else { n };
            gen_random_regular(n, d, rng::trial_seed(base, i)).unwrap()
        };
        fixtures.push((format!("random#{i}"), g));
    }
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for (name, g) in &fixtures {
        let a = g.to_dense().unwrap();
        let ours = singular_values(&a, 2.min(g.n()), 1e-10).unwrap().values;
        let dense = oracle_singular_values(&a);
        let diff = ours.iter().zip(&dense).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        worst = worst.max(diff);
        rows.push(json!({ "fixture": name, "n": g.n(), "iterative": ours, "dense": &dense[..ours.len()], "diff": diff }));
    }
    Verdict {
        pass: worst <= 1e-8,
        detail: format!("{} fixtures, worst |s_iterative - s_dense| = {worst:.2e}", fixtures.len()),
        record: json!({ "fixtures": rows, "worst": worst }),
    }
}

fn paley_closed_form(_: u64) -> Verdict {
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for q in [5u64, 13, 17, 29, 101, 1009] {
        let c = certify_expander(&gen_paley(q).unwrap(), DEFAULT_TOL).unwrap();
        let closed = (1.0 + (q as f64).sqrt()) / 2.0;
        let diff = (c.lambda_hat - closed).abs();
        worst = worst.max(diff);
        rows.push(json!({ "q": q, "lambda_hat": c.lambda_hat, "closed_form": closed, "diff": diff }));
    }
    Verdict { pass: worst <= 1e-6, detail: format!("worst |s2 - (1+sqrt q)/2| = {worst:.2e}"), record: json!(rows) }
}

fn mixing_never_violated(master: u64) -> Verdict {
    let base = seed_for(master, "eml");
    let graphs: Vec<(&str, Graph)> = vec![
        ("Paley(101)", gen_paley(101).unwrap()),
        ("Paley(29)", gen_paley(29).unwrap()),
        ("Petersen", gen_named("petersen", &[]).unwrap()),
        ("K30", gen_named("complete", &[30]).unwrap()),
        ("RR(200,10)", gen_random_regular(200, 10, base).unwrap()),
    ];
    let mut r = rng::rng(base);
    let data: Vec<f64> = (0..40 * 60).map(|_| r.gen_range(0.0..1.0)).collect();
    let sparse: Vec<f64> = (0..50 * 50).map(|_| if r.gen::<f64>() < 0.2 { r.gen_range(0.5..3.0) } else { 0.0 }).collect();
    let matrices: Vec<(&str, DenseMatrix)> = vec![
        ("uniform 40x60", DenseMatrix::from_vec(40, 60, data).unwrap()),
        ("sparse 50x50", DenseMatrix::from_vec(50, 50, sparse).unwrap()),
        ("Paley(61) adjacency", gen_paley(61).unwrap().to_dense().unwrap()),
    ];
    let per = 100_000 / (graphs.len() + matrices.len());
    let mut total = 0;
    let mut violations = 0;
    let mut rows = Vec::new();
    for (i, (name, g)) in graphs.iter().enumerate() {
        let cert = certify_expander(g, DEFAULT_TOL).unwrap();
        let mut r = rng::rng(rng::trial_seed(base, i as u64));
        let bad = (0..per)
            .filter(|_| {
                let (s, t) = (random_set(&mut r, g.n()), random_set(&mut r, g.n()));
                !eml_graph_audit(&cert, g, &s, &t).map(|a| a.holds).unwrap_or(false)
            })
            .count();
        total += per;
        violations += bad;
        rows.push(json!({ "fixture": name, "form": "graph", "audits": per, "violations": bad }));
    }
    for (i, (name, m)) in matrices.iter().enumerate() {
        let auditor = MatrixAuditor::new(m).unwrap();
        let mut r = rng::rng(rng::trial_seed(base, 100 + i as u64));
        let bad = (0..per)
            .filter(|_| {
                let (s, t) = (random_set(&mut r, m.rows()), random_set(&mut r, m.cols()));
                !auditor.audit(&s, &t).map(|a| a.holds).unwrap_or(false)
            })
            .count();
        total += per;
        violations += bad;
        rows.push(json!({ "fixture": name, "form": "matrix", "audits": per, "violations": bad }));
    }
    Verdict {
        pass: violations == 0 && total >= 99_990,
        detail: format!("{total} audits over {} fixtures, {violations} violations", rows.len()),
        record: json!(rows),
    }
}

/// `A / d - J / n`, the rank-one-deflated normalized adjacency of a
/// `d`-regular graph.
fn centered_normalized(g: &Graph) -> DenseMatrix {
    let n = g.n();
    let d = g.mean_degree();
    let a = g.to_dense().unwrap();
    DenseMatrix::from_vec(n, n, a.data().iter().map(|&x| x / d - 1.0 / n as f64).collect()).unwrap()
}

fn random_sign_symmetric(n: usize, seed: u64) -> DenseMatrix {
    let mut r = rng::rng(seed);
    let mut m = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = if r.gen::<bool>() { 1.0 } else { -1.0 };
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m
}

fn submatrix_bounds(master: u64) -> Verdict {
    let base = seed_for(master, "submatrix");
    let mut battery: Vec<(String, DenseMatrix)> = Vec::new();
    for n in [20, 50, 100] {
        battery.push((format!("I{n}"), DenseMatrix::identity(n)));
        battery.push((format!("J{n}"), DenseMatrix::from_vec(n, n, vec![1.0; n * n]).unwrap()));
    }
    for q in [29u64, 37, 53, 61, 89, 101, 109] {
        battery.push((format!("centered Paley({q})"), centered_normalized(&gen_paley(q).unwrap())));
    }
    for (i, n) in [20, 30, 40, 50, 60, 80, 100].into_iter().enumerate() {
        battery.push((format!("random sign {n}"), random_sign_symmetric(n, rng::trial_seed(base, i as u64))));
    }
    let mut failures = 0;
    let mut rows = Vec::new();
    for (i, (name, b)) in battery.iter().enumerate() {
        let sigma = [0.1, 0.3, 0.5][i % 3];
        let m = ((sigma * b.rows() as f64).round() as usize).max(1);
        for (j, mode) in [SubmatrixMode::TwoSidedBernoulli { sigma }, SubmatrixMode::SymmetricUniform { m }].into_iter().enumerate() {
            let seed = rng::trial_seed(base, (1000 + 2 * i + j) as u64);
            let e = submatrix_norm_experiment(b, mode, 2.0, 500, seed).unwrap();
            let ok = e.holds() && e.all_batches_hold();
            failures += usize::from(!ok);
            rows.push(json!({ "matrix": name, "mode": mode, "estimate": e, "ok": ok }));
        }
    }
    Verdict {
        pass: failures == 0 && battery.len() == 20,
        detail: format!("{} matrices x 2 modes x 500 trials, {failures} runs with a batch above its bound", battery.len()),
        record: json!(rows),
    }
}

fn induced_subgraph_at_1009(master: u64) -> Verdict {
    let g = gen_paley(1009).unwrap();
    let cert = certify_expander(&g, DEFAULT_TOL).unwrap();
    let e = induced_subgraph_experiment(&g, &cert, 0.3, 200, seed_for(master, "subsample"), &SubgraphConfig::default()).unwrap();
    Verdict {
        pass: e.success_fraction >= e.floor,
        detail: format!(
            "success {:.3} (degrees {:.3}, spectral {:.3}) vs floor {:.3}",
            e.success_fraction, e.degree_fraction, e.spectral_fraction, e.floor
        ),
        record: serde_json::to_value(&e).unwrap(),
    }
}

fn perfect_matchings(master: u64) -> Verdict {
    let g = gen_paley(1009).unwrap();
    let caps = PipelineConfig::desk(master).constants.matching_caps;
    let base = seed_for(master, "perfect");
    let mut order: Vec<usize> = (0..g.n()).collect();
    let mut good = 0;
    let mut rows = Vec::new();
    for i in 0..100u64 {
        let mut r = rng::rng(rng::trial_seed(base, i));
        order.shuffle(&mut r);
        let m = 150 + 50 * (i as usize % 4);
        let (left, right) = (order[..m].to_vec(), order[m..2 * m].to_vec());
        let view = BipartiteView::new(&g, left.clone(), right.clone()).unwrap();
        let params = measure_bipartite(&view, DEFAULT_TOL).unwrap();
        let outcome = perfect_matching_expander(&view, &params, &caps);
        let verified = outcome.as_ref().is_ok_and(|mt| mt.len() == m && verify_matching(&g, &left, &right, mt).is_ok());
        good += usize::from(verified);
        rows.push(json!({ "side": m, "params": params, "verified": verified, "error": outcome.err().map(|e| e.to_string()) }));
    }
    Verdict {
        pass: good == 100,
        detail: format!("{good}/100 perfect matchings verified (caps gamma <= {}, lambda/d <= {})", caps.gamma_max, caps.lambda_ratio),
        record: json!(rows),
    }
}

fn greedy_floor(master: u64) -> Verdict {
    let g = gen_paley(101).unwrap();
    let cert = certify_expander(&g, DEFAULT_TOL).unwrap();
    let base = seed_for(master, "greedy");
    let mut met = 0;
    let mut rows = Vec::new();
    for i in 0..100u64 {
        let mut r = rng::rng(rng::trial_seed(base, i));
        let mut order: Vec<usize> = (0..101).collect();
        order.shuffle(&mut r);
        let (a, b) = (r.gen_range(20..=50), r.gen_range(20..=50));
        let v1 = order[..a].to_vec();
        let v2 = order[a..a + b].to_vec();
        let s1 = v1[..r.gen_range(0..=a / 4)].to_vec();
        let s2 = v2[..r.gen_range(0..=b / 4)].to_vec();
        let res = greedy_matching_avoiding(&g, &cert, &v1, &v2, &s1, &s2);
        let ok = res.as_ref().is_ok_and(|gm| gm.matching.len() as f64 >= gm.floor && verify_matching(&g, &v1, &v2, &gm.matching).is_ok());
        met += usize::from(ok);
        rows.push(match res {
            Ok(gm) => json!({ "size": gm.matching.len(), "floor": gm.floor, "theta": gm.theta, "ok": ok }),
            Err(e) => json!({ "error": e.to_string(), "ok": false }),
        });
    }
    Verdict { pass: met == 100, detail: format!("{met}/100 runs met the floor"), record: json!(rows) }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn hypergeometric(_: u64) -> Verdict {
    let alphas = [0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 0.9, 1.0, 1.2, 1.49];
    let (mut checked, mut exceed) = (0usize, 0usize);
    let mut worst = f64::NEG_INFINITY;
    for big_n in 1..=60u64 {
        for big_k in 0..=big_n {
            for n in 0..=big_n {
                let total = binomial(big_n, n) as f64;
                let mu = n as f64 * big_k as f64 / big_n as f64;
                let pmf: Vec<(u64, f64)> = (big_k.saturating_add(n).saturating_sub(big_n)..=big_k.min(n))
                    .map(|x| (x, (binomial(big_k, x) * binomial(big_n - big_k, n - x)) as f64 / total))
                    .collect();
                for &a in &alphas {
                    let lower: f64 = pmf.iter().filter(|(x, _)| (*x as f64) < (1.0 - a) * mu).map(|p| p.1).sum();
                    let upper: f64 = pmf.iter().filter(|(x, _)| (*x as f64) > (1.0 + a) * mu).map(|p| p.1).sum();
                    for (tail, side) in [(lower, TailSide::Lower), (upper, TailSide::Upper)] {
                        let bound = hypergeometric_tail(big_n, big_k, n, a, side).unwrap();
                        checked += 1;
                        worst = worst.max(tail - bound);
                        exceed += usize::from(tail > bound);
                    }
                }
            }
        }
    }
    Verdict {
        pass: exceed == 0,
        detail: format!("{checked} tails, {exceed} above their bound, max(tail - bound) = {worst:.3e}"),
        record: json!({ "checked": checked, "exceed": exceed, "max_excess": worst }),
    }
}

fn pipeline_on_paley(master: u64) -> Verdict {
    let mut rows = Vec::new();
    let mut all_ok = true;
    let mut summary = Vec::new();
    for q in [401u64, 1009, 2029] {
        let g = gen_paley(q).unwrap();
        let mut wins = 0;
        for seed in 0..10u64 {
            let run = hamilton_pipeline(&g, &PipelineConfig::desk(seed_for(master, "pipeline") ^ seed));
            let verified = run.cycle.as_ref().map(|c| verify_hamilton_cycle(&g, &c.order).is_ok());
            if verified == Some(false) {
                all_ok = false;
            }
            wins += usize::from(verified == Some(true));
            rows.push(json!({ "q": q, "seed": seed, "outcome": run.trace.outcome, "verified": verified }));
        }
        all_ok &= wins >= 9;
        summary.push(format!("q={q}: {wins}/10"));
    }
    Verdict { pass: all_ok, detail: summary.join(", "), record: json!(rows) }
}

const NAMED_PHASES: [&str; 8] = ["config", "certify", "partition", "connector", "repartition", "path_cover", "close", "verify"];

fn adversarial_inputs(master: u64) -> Verdict {
    let base = seed_for(master, "adversarial");
    let desk = |i: u64| PipelineConfig::desk(rng::trial_seed(base, i));
    let mut cases: Vec<(String, Graph, PipelineConfig)> = Vec::new();
    for (i, a) in [10usize, 14, 20, 30, 40].into_iter().enumerate() {
        let k = gen_named("complete", &[a]).unwrap();
        cases.push((format!("K{a} + K{a}"), disjoint_union(&k, &k), desk(i as u64)));
    }
    for (i, q) in [29u64, 61, 101, 197, 401].into_iter().enumerate() {
        let p = gen_paley(q).unwrap();
        cases.push((format!("Paley({q}) + Paley({q})"), disjoint_union(&p, &p), desk(10 + i as u64)));
    }
    for i in 0..5u64 {
        let a = gen_random_regular(100, 20, rng::trial_seed(base, 20 + i)).unwrap();
        let b = gen_random_regular(100, 20, rng::trial_seed(base, 30 + i)).unwrap();
        cases.push((format!("RR(100,20) + RR(100,20) #{i}"), disjoint_union(&a, &b), desk(20 + i)));
    }
    for (i, a) in [20usize, 40, 60, 100, 150].into_iter().enumerate() {
        let mut r = rng::rng(rng::trial_seed(base, 40 + i as u64));
        let mut edges: Vec<(usize, usize)> = (0..a).flat_map(|u| (a..2 * a).map(move |v| (u, v))).collect();
        let extra: Vec<usize> = sample(&mut r, a, 6).into_vec();
        edges.extend(extra.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))));
        let g = Graph::from_edges(2 * a, &edges).unwrap();
        cases.push((format!("K({a},{a}) + 3 edges"), g, desk(40 + i as u64)));
    }
    for (i, n) in [40usize, 80, 120, 200, 400].into_iter().enumerate() {
        let mut r = rng::rng(rng::trial_seed(base, 50 + i as u64));
        let h = n / 2;
        let mut edges = Vec::new();
        for u in 0..h {
            for v in h..n {
                if r.gen::<f64>() < 0.5 {
                    edges.push((u, v));
                }
            }
        }
        for _ in 0..h / 10 {
            let (u, v) = (r.gen_range(0..h), r.gen_range(0..h));
            if u != v && !edges.contains(&(u.min(v), u.max(v))) {
                edges.push((u.min(v), u.max(v)));
            }
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        cases.push((format!("random bipartite {n} + sparse side edges"), g, desk(50 + i as u64)));
    }
    for (i, n) in [64usize, 101, 257, 400, 1000].into_iter().enumerate() {
        let g = gen_named("cycle", &[n]).unwrap();
        cases.push((format!("C{n}"), g, desk(60 + i as u64)));
    }
    let p401 = gen_paley(401).unwrap();
    for i in 0..10u64 {
        let mut cfg = desk(70 + i);
        cfg.constants.connector.min_reserve_ratio = 20.0;
        cases.push((format!("Paley(401), reserve below the connector minimum #{i}"), p401.clone(), cfg));
    }
    for i in 0..5u64 {
        let mut cfg = desk(90 + i);
        cfg.reserve_fraction = 0.0;
        cfg.constants.connector.min_reserve_ratio = 1.0;
        cases.push((format!("Paley(401), empty reserve fraction #{i}"), p401.clone(), cfg));
    }
    for (i, rf) in [0.97, 0.99, 1.0, 1.5, 3.0].into_iter().enumerate() {
        let mut cfg = desk(80 + i as u64);
        cfg.reserve_fraction = rf;
        cases.push((format!("Paley(401), reserve fraction {rf}"), p401.clone(), cfg));
    }

    let mut clean = 0;
    let mut rows = Vec::new();
    for (name, g, cfg) in &cases {
        let run = std::panic::catch_unwind(|| hamilton_pipeline(g, cfg));
        let (ok, outcome) = match run {
            Err(_) => (false, json!("panic")),
            Ok(run) => {
                let ok = match (&run.cycle, &run.trace.outcome) {
                    (None, Outcome::Failure { phase, kind, message }) => {
                        NAMED_PHASES.contains(&phase.as_str()) && !kind.is_empty() && !message.is_empty()
                    }
                    _ => false,
                };
                (ok, serde_json::to_value(&run.trace.outcome).unwrap())
            }
        };
        clean += usize::from(ok);
        rows.push(json!({ "input": name, "n": g.n(), "outcome": outcome, "clean": ok }));
    }
    Verdict {
        pass: clean == cases.len() && cases.len() == 50,
        detail: format!("{clean}/{} adversarial inputs failed cleanly in a named phase", cases.len()),
        record: json!(rows),
    }
}

const CRITERIA: [Criterion; 10] = [
    Criterion { id: 1, name: "spectral oracle agreement", limit: Duration::from_secs(10), run: spectral_oracle },
    Criterion { id: 2, name: "Paley closed form", limit: Duration::from_secs(30), run: paley_closed_form },
    Criterion { id: 3, name: "mixing lemma never violated", limit: Duration::from_secs(120), run: mixing_never_violated },
    Criterion { id: 4, name: "random-submatrix bounds", limit: Duration::from_secs(300), run: submatrix_bounds },
    Criterion { id: 5, name: "random induced subgraph at n = 1009", limit: Duration::from_secs(180), run: induced_subgraph_at_1009 },
    Criterion { id: 6, name: "perfect matchings", limit: Duration::from_secs(60), run: perfect_matchings },
    Criterion { id: 7, name: "greedy matching floor", limit: Duration::from_secs(30), run: greedy_floor },
    Criterion { id: 8, name: "hypergeometric tail bounds", limit: Duration::from_secs(30), run: hypergeometric },
    Criterion { id: 9, name: "Hamilton pipeline on Paley graphs", limit: Duration::from_secs(600), run: pipeline_on_paley },
    Criterion { id: 10, name: "soundness under failure", limit: Duration::from_secs(120), run: adversarial_inputs },
];

fn run_battery(dir: &Path, only: &[usize], print: bool) -> Vec<PathBuf> {
    fs::create_dir_all(dir).unwrap();
    let mut files = Vec::new();
    for c in CRITERIA.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let start = Instant::now();
        let v = (c.run)(MASTER_SEED);
        let elapsed = start.elapsed();
        let path = dir.join(format!("criterion_{:02}.json", c.id));
        fs::write(&path, to_json(&json!({ "criterion": c.id, "pass": v.pass, "record": v.record })).unwrap()).unwrap();
        files.push(path);
        if print {
            let in_time = elapsed <= c.limit;
            let status = if v.pass && in_time { "PASS" } else { "FAIL" };
            let note = if in_time { String::new() } else { format!(" (over the {}s limit)", c.limit.as_secs()) };
            println!("criterion {:>2} {status}: {}: {} [{:.1}s]{note}", c.id, c.name, v.detail, elapsed.as_secs_f64());
        }
    }
    files
}

fn main() {
    // `cargo test` passes harness flags such as `--list`; only run the battery
    // when asked to run tests.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    // Numeric arguments select criteria, e.g. `cargo test --test acceptance -- 6 9`.
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let root = std::env::temp_dir().join(format!("expander-lab-acceptance-{}", std::process::id()));
    let first = run_battery(&root.join("run1"), &only, true);
    let start = Instant::now();
    let second = run_battery(&root.join("run2"), &only, false);
    let differing: Vec<String> = first
        .iter()
        .zip(&second)
        .filter(|(a, b)| fs::read(a).unwrap() != fs::read(b).unwrap())
        .map(|(a, _)| a.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    let status = if differing.is_empty() { "PASS" } else { "FAIL" };
    println!(
        "criterion 11 {status}: reproducibility: {} of {} record files byte-identical on re-run{} [{:.1}s]",
        first.len() - differing.len(),
        first.len(),
        if differing.is_empty() { String::new() } else { format!(", differing: {}", differing.join(", ")) },
        start.elapsed().as_secs_f64()
    );
    let _ = fs::remove_dir_all(&root);
}
