//! Run the Hamilton-cycle pipeline on Paley graphs with the desk profile and
//! print, per seed, the outcome together with the tightest margins seen in
//! each phase.
//!
//! ```text
//! cargo run --release --example hamilton_pipeline -- 401 1009 --seeds 5
//! ```

use std::time::Instant;

use expander_lab::graphs::{gen_paley, BipartiteOutcome};
use expander_lab::hamilton::{hamilton_pipeline, Outcome, PairReport, PipelineConfig, PipelineTrace, WindowReport};

fn worst_window<'a>(ws: impl IntoIterator<Item = &'a WindowReport>) -> f64 {
    ws.into_iter().map(|w| w.max_deviation / w.width).fold(0.0, f64::max)
}

/// Largest `s2 / bound` and `max_cross_deviation / width` over the pairs.
fn worst_pairs<'a>(ps: impl IntoIterator<Item = &'a PairReport>) -> (f64, f64) {
    ps.into_iter().fold((0.0, 0.0), |(s, c), p| match &p.outcome {
        BipartiteOutcome::Pass(b) => (s.max(b.s2 / p.lambda_bound), c.max(b.max_cross_deviation / p.width)),
        BipartiteOutcome::Violation(_) => (f64::INFINITY, f64::INFINITY),
    })
}

fn summary(t: &PipelineTrace) -> String {
    let mut out = Vec::new();
    if let Some(p) = &t.partition {
        let c = &p.checks;
        out.push(format!(
            "P[tries {} p1 {:.2} p2 {:.2}/{:.2} p5 {:.2}/{:.2}]",
            p.attempts.len(),
            worst_window(&c.p1),
            c.p2_degrees.max_deviation / c.p2_degrees.width,
            c.p2_spectral.s2 / c.p2_spectral.bound,
            worst_pairs([&c.p5]).0,
            worst_pairs([&c.p5]).1,
        ));
    }
    if let Some(r) = &t.repartition {
        let c = &r.checks;
        let (s4, c4) = worst_pairs(&c.q4);
        let (s5, c5) = worst_pairs(&c.q5);
        out.push(format!(
            "Q[tries {} q1 {}/{} q2 {:.2} q3 {:.2} q4 {:.2}/{:.2} q5 {:.2}/{:.2}]",
            r.attempts.len(),
            c.q1.max_overlap,
            c.q1.cap,
            worst_window(&c.q2),
            worst_window(&c.q3),
            s4,
            c4,
            s5,
            c5
        ));
    }
    if let Some(c) = &t.path_cover {
        let g = c.steps.iter().map(|s| s.params.gamma).fold(0.0, f64::max);
        let l = c.steps.iter().map(|s| s.params.lambda / s.params.d).fold(0.0, f64::max);
        let skips: usize = c.steps.iter().filter_map(|s| s.skip.as_ref()).map(|s| s.edges.len()).sum();
        out.push(format!("N[gamma {g:.3} lambda/d {l:.3}] M[{skips}]"));
    }
    if let Some(c) = &t.closing {
        out.push(format!("C[teardowns {} absorbed {}]", c.stats.teardowns, c.stats.absorbed));
    }
    out.join(" ")
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut seeds = 3u64;
    let mut qs = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--seeds" {
            seeds = it.next().and_then(|s| s.parse().ok()).expect("--seeds <count>");
        } else if let Ok(q) = a.parse::<u64>() {
            qs.push(q);
        }
    }
    if qs.is_empty() {
        qs = vec![401];
    }
    for q in qs {
        let g = gen_paley(q).expect("q prime and 1 mod 4");
        let mut wins = 0;
        for seed in 0..seeds {
            let cfg = PipelineConfig::desk(seed);
            let start = Instant::now();
            let run = hamilton_pipeline(&g, &cfg);
            let ms = start.elapsed().as_millis();
            let sizes = run.trace.sizes.map(|s| format!("k={} t={}", s.k, s.t)).unwrap_or_default();
            let status = match &run.trace.outcome {
                Outcome::Success { cycle_length } => {
                    wins += 1;
                    format!("ok  cycle of {cycle_length}")
                }
                Outcome::Failure { phase, kind, message } => format!("FAIL {phase}/{kind}: {message}"),
            };
            println!("q={q} seed={seed} {sizes} {ms}ms {status}\n    {}", summary(&run.trace));
        }
        println!("q={q}: {wins}/{seeds} cycles");
    }
}
