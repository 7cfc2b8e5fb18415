//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! A criterion that cannot be evaluated because its input data is missing
//! prints FAIL with the reason but does not abort the run. Any other failure
//! makes the process exit non-zero.

mod common;

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::{Q, *};
use rand::Rng;
use stable_qubo::graph::{annihilation_number, Graph, VertexSet};
use stable_qubo::harness::fetch::default_cache_dir;
use stable_qubo::harness::{
    emit_report, load_instance, partition_cost_row, run_experiment, ExperimentSpec, InstanceSpec,
    ReportFormat,
};
use stable_qubo::partition::{default_ordering, simple_ch_partition};
use stable_qubo::postprocess::{extract_stable_set, post_process};
use stable_qubo::qubo::{
    build_qubo, cost, exact_qubo_optimum, rescale_to_unit, Penalty, QuboCoefficients, Rational,
};
use stable_qubo::samplers::{SamplerConfig, SimulatedAnnealing, Sampler};

enum Verdict {
    Pass(String),
    Fail(String),
    /// Not evaluable with the data at hand.
    Blocked(String),
}

fn pass(detail: impl Into<String>) -> Verdict {
    Verdict::Pass(detail.into())
}

fn fail(detail: impl Into<String>) -> Verdict {
    Verdict::Fail(detail.into())
}

fn beta(p: i64, q: i64) -> Penalty {
    Penalty::ratio(p, q).unwrap()
}

/// The 500 random graphs shared by criteria 1 and 2.
fn small_graphs() -> Vec<Graph> {
    let mut r = rng(0x5eed_0001);
    (0..500)
        .map(|i| {
            let n = 1 + i % 12;
            let p = [0.2, 0.5, 0.8][i % 3];
            random_graph(&mut r, n, p)
        })
        .collect()
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    for (i, g) in small_graphs().iter().enumerate() {
        let a = alpha(g) as i64;
        for b in [beta(1, 2), beta(1, 1), beta(10, 1)] {
            let (_, min) = exact_qubo_optimum(g, b).unwrap();
            if -min != Rational::from_integer(a) {
                return fail(format!("graph {i} beta {b}: -min {} vs alpha {a}", -min));
            }
        }
    }
    let t = start.elapsed();
    if t > Duration::from_secs(60) {
        return fail(format!("took {t:.1?}"));
    }
    pass(format!("500 graphs x 3 betas exact, {t:.1?}"))
}

fn criterion_2() -> Verdict {
    for (i, g) in small_graphs().iter().enumerate() {
        let a = Rational::from_integer(alpha(g) as i64);
        for b in [beta(1, 10), beta(1, 4)] {
            let (_, min) = exact_qubo_optimum(g, b).unwrap();
            if -min < a {
                return fail(format!("graph {i} beta {b}: alpha(G,beta) {} < alpha {a}", -min));
            }
        }
    }
    let k2 = Graph::complete(2);
    for b in [beta(1, 10), beta(1, 4)] {
        let (_, min) = exact_qubo_optimum(&k2, b).unwrap();
        let expected = Rational::from_integer(2) - Rational::from_integer(2) * b.value();
        if -min != expected || -min <= Rational::from_integer(1) {
            return fail(format!("K2 beta {b}: got {}", -min));
        }
    }
    pass("500 graphs x {1/10, 1/4}; K2 gives 2 - 2 beta")
}

fn criterion_3() -> Verdict {
    let mut r = rng(0x5eed_0003);
    let betas = [beta(1, 10), beta(1, 2), beta(3, 7), beta(1, 1), beta(100, 1)];
    let mut vectors = 0u64;
    for i in 0..100 {
        let n = 1 + i % 10;
        let p = r.gen_range(0.0..1.0);
        let g = random_graph(&mut r, n, p);
        let b = betas[i % betas.len()];
        let dense = build_qubo(&g, b).to_dense();
        let adj = masks(&g);
        for mask in 0u64..1 << n {
            let lhs = quadratic_form(&dense, mask);
            let by_hand = Q::from_integer(-(mask.count_ones() as i64))
                + Q::from_integer(2 * mask_edges(&adj, mask) as i64) * b.value();
            let x = VertexSet::new((0..n).filter(|v| mask & (1 << v) != 0));
            if lhs != by_hand || cost(&g, &x, b) != by_hand {
                return fail(format!("graph {i} mask {mask:b}"));
            }
            vectors += 1;
        }
    }
    pass(format!("100 graphs, {vectors} vectors"))
}

fn criterion_4() -> Verdict {
    let mut r = rng(0x5eed_0004);
    let mut done = 0;
    while done < 1000 {
        let n = r.gen_range(1..=30);
        let p = r.gen_range(0.0..0.5);
        let g = random_graph(&mut r, n, p);
        let x: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.5)).collect();
        let edges = mask_edges(&masks(&g), x.iter().fold(0u64, |m, &v| m | (1 << v)));
        if edges >= x.len() {
            continue;
        }
        let s = extract_stable_set(&g, &VertexSet::new(x.iter().copied()));
        if !s.iter().all(|v| x.contains(&v)) || !is_stable(&g, s.as_slice()) || s.len() < x.len() - edges {
            return fail(format!("pair {done}: |x|={} edges={edges} result={}", x.len(), s.len()));
        }
        done += 1;
    }
    let star = Graph::from_edges(30, (1..=5).map(|v| (0, v))).unwrap();
    let s = extract_stable_set(&star, &VertexSet::new(0..30));
    if s.len() != 29 {
        return fail(format!("star example gave {}", s.len()));
    }
    pass("1000 pairs meet the bound; star example gives 29")
}

fn criterion_5() -> Verdict {
    let mut r = rng(0x5eed_0005);
    for i in 0..500 {
        let n = 1 + i % 14;
        let p = r.gen_range(0.0..1.0);
        let g = random_graph(&mut r, n, p);
        let a = annihilation_number(&g);
        if a != annihilation(&g) || a < alpha(&g) {
            return fail(format!("graph {i}: a={a} alpha={}", alpha(&g)));
        }
    }
    pass("500 graphs, a(G) >= alpha(G)")
}

/// instance, n, m, regular cost, simple cost, density, reduction
const TABLE: &[(&str, usize, usize, usize, usize, &str, &str)] = &[
    ("brock200_1", 200, 5066, 166, 136, "0.25", "18%"),
    ("brock200_2", 200, 10024, 115, 87, "0.50", "24%"),
    ("brock200_3", 200, 7852, 135, 109, "0.39", "19%"),
    ("brock200_4", 200, 6811, 148, 120, "0.34", "19%"),
    ("keller4", 171, 5100, 125, 103, "0.35", "18%"),
    ("p_hat500_1", 500, 93181, 205, 95, "0.75", "54%"),
    ("san200_0_7_1", 200, 5970, 156, 131, "0.30", "16%"),
    ("san200_0_7_2", 200, 5970, 165, 123, "0.30", "25%"),
    ("sanr200_0_7", 200, 6032, 162, 127, "0.30", "22%"),
    ("c-fat200-1", 200, 18366, 18, 17, "0.92", "6%"),
    ("c-fat200-2", 200, 16665, 35, 33, "0.84", "6%"),
    ("c-fat200-5", 200, 11427, 87, 84, "0.57", "3%"),
    ("c-fat500-1", 500, 120291, 21, 20, "0.96", "5%"),
    ("c-fat500-2", 500, 115611, 39, 38, "0.93", "3%"),
    ("c-fat500-5", 500, 101559, 96, 93, "0.81", "3%"),
];

fn criterion_6() -> Verdict {
    let cache = default_cache_dir();
    let mut matched = Vec::new();
    let mut missing = Vec::new();
    for &(name, n, m, regular, simple, d, reduction) in TABLE {
        let start = Instant::now();
        let inst = match load_instance(name, true, &cache) {
            Ok(inst) => inst,
            Err(_) => {
                missing.push(name);
                continue;
            }
        };
        let row = partition_cost_row(name, &inst.graph);
        let again = partition_cost_row(name, &inst.graph);
        let t = start.elapsed();
        let got = (row.n, row.m, row.cost_regular, row.cost_simple, row.d.as_str(), row.reduction.as_str());
        if got != (n, m, regular, simple, d, reduction) || row != again {
            return fail(format!(
                "{name}: got {got:?}, expected n={n} m={m} {regular}/{simple} d={d} {reduction}"
            ));
        }
        if t > Duration::from_secs(10) {
            return fail(format!("{name} took {t:.1?}"));
        }
        matched.push(name);
    }
    if missing.is_empty() {
        pass(format!("all {} rows exact", matched.len()))
    } else {
        Verdict::Blocked(format!(
            "{}/{} rows exact; not available (set $STABLEQUBO_CACHE to a directory holding the DIMACS files): {}",
            matched.len(),
            TABLE.len(),
            missing.join(", ")
        ))
    }
}

fn criterion_7() -> Verdict {
    let mut r = rng(0x5eed_0007);
    for i in 0..500 {
        let n = 1 + i % 12;
        let p = r.gen_range(0.1..0.9);
        let g = random_graph(&mut r, n, p);
        let a = alpha(&g);
        let maxima = maximum_stable_sets(&g);
        let orderings = [default_ordering(&g), (0..n).collect(), shuffled(&mut r, n)];
        for (k, ordering) in orderings.iter().enumerate() {
            let p = simple_ch_partition(&g, ordering).unwrap();
            let parts: Vec<u64> = p
                .entries
                .iter()
                .map(|e| e.members().iter().fold(0u64, |m, v| m | (1 << v)))
                .collect();
            let best = p
                .entries
                .iter()
                .map(|e| alpha_of(&g, e.members().as_slice()))
                .max()
                .unwrap_or(0);
            if best != a {
                return fail(format!("graph {i} ordering {k}: parts give {best}, alpha {a}"));
            }
            for w in &maxima {
                let containing = parts.iter().filter(|&&part| part & w == *w).count();
                if containing != 1 {
                    return fail(format!("graph {i} ordering {k}: set {w:b} in {containing} parts"));
                }
            }
        }
    }
    pass("500 graphs x 3 orderings; unique containing part")
}

fn criterion_8() -> Verdict {
    let start = Instant::now();
    let cache = default_cache_dir();
    let cases = [
        ("hamming6_2", true, 32),
        ("johnson8_2_4", true, 4),
        ("johnson8_4_4", true, 14),
        ("paley61", false, 5),
        ("paley73", false, 5),
    ];
    let config = SamplerConfig::default();
    let post = SamplerConfig::default().with_reads(100).with_seed(1);
    let mut results = Vec::new();
    let mut misses = 0;
    for (name, complemented, expected) in cases {
        let g = load_instance(name, complemented, &cache).unwrap().graph;
        let samples = SimulatedAnnealing.sample(&g, Penalty::half(), &config).unwrap();
        let report = post_process(&g, &samples, Penalty::half(), &SimulatedAnnealing, &post).unwrap();
        if !report.verify(&g) {
            return fail(format!("{name}: witness not stable"));
        }
        if report.best != expected {
            misses += 1;
        }
        results.push(format!("{name} {}/{expected}", report.best));
    }
    let t = start.elapsed();
    let detail = format!("{} ({t:.1?})", results.join(", "));
    if misses > 0 || t > Duration::from_secs(300) {
        fail(detail)
    } else {
        pass(detail)
    }
}

fn criterion_9() -> Verdict {
    let r1 = |p, q| Rational::new(p, q);
    let example = QuboCoefficients {
        linear: vec![r1(1, 10), r1(2, 10)],
        quadratic: vec![(0, 1, r1(5, 1))],
    };
    let (scaled, factor) = rescale_to_unit(&example).unwrap();
    let table = [
        ([false, false], r1(0, 1)),
        ([false, true], r1(4, 100)),
        ([true, false], r1(2, 100)),
        ([true, true], r1(106, 100)),
    ];
    if factor != r1(1, 5)
        || scaled.linear != vec![r1(2, 100), r1(4, 100)]
        || scaled.quadratic != vec![(0, 1, r1(1, 1))]
        || table.iter().any(|(x, e)| scaled.evaluate(x) != *e)
    {
        return fail("two-variable example coefficients or state table differ");
    }

    let mut r = rng(0x5eed_0009);
    for i in 0..100 {
        let n = 1 + i % 10;
        let coef = |r: &mut rand_chacha::ChaCha8Rng| r1(r.gen_range(-50..=50), r.gen_range(1..=8));
        let linear = (0..n).map(|_| coef(&mut r)).collect();
        let mut quadratic = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if r.gen_bool(0.5) {
                    quadratic.push((a, b, coef(&mut r)));
                }
            }
        }
        let q = QuboCoefficients { linear, quadratic };
        let Ok((s, _)) = rescale_to_unit(&q) else { continue };
        let argmins = |c: &QuboCoefficients| {
            let values: Vec<Rational> = (0u32..1 << n)
                .map(|m| c.evaluate(&(0..n).map(|v| m & (1 << v) != 0).collect::<Vec<_>>()))
                .collect();
            let best = *values.iter().min().unwrap();
            values.iter().enumerate().filter(|(_, v)| **v == best).map(|(k, _)| k).collect::<Vec<_>>()
        };
        if argmins(&q) != argmins(&s) || s.max_abs() > r1(1, 1) {
            return fail(format!("random QUBO {i}: argmin changed"));
        }
    }
    pass("two-variable example exact; argmin kept on 100 random QUBOs")
}

fn criterion_10() -> Verdict {
    let mut spec = ExperimentSpec::new(vec![
        InstanceSpec {
            name: "johnson8_2_4".into(),
            complement: true,
        },
        InstanceSpec {
            name: "paley13".into(),
            complement: false,
        },
    ]);
    spec.config.reads = 200;
    spec.post_config.reads = 20;
    spec.seed = 2024;
    let dir = tempfile::tempdir().unwrap();
    for format in [ReportFormat::Csv, ReportFormat::Json, ReportFormat::Markdown] {
        let a = emit_report(&run_experiment(&spec, dir.path()).unwrap().rows, format).unwrap();
        let b = emit_report(&run_experiment(&spec, dir.path()).unwrap().rows, format).unwrap();
        if a != b {
            return fail(format!("{format:?} reports differ"));
        }
    }

    let spec_path: PathBuf = dir.path().join("spec.json");
    std::fs::write(&spec_path, serde_json::to_string(&spec).unwrap()).unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_stable-qubo"))
            .args(["--cache", dir.path().to_str().unwrap(), "sweep", spec_path.to_str().unwrap(), "--format", "json"])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    if !a.status.success() || a.stdout != b.stdout || a.stdout.is_empty() {
        return fail("CLI sweep output differs between runs");
    }
    pass("library and CLI sweeps byte-identical across runs")
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("exact QUBO optimum equals alpha for beta >= 1/2", criterion_1),
        ("small beta never undercuts alpha", criterion_2),
        ("quadratic form equals the cost identity", criterion_3),
        ("extraction bound", criterion_4),
        ("annihilation number bounds alpha", criterion_5),
        ("partition costs match reference values", criterion_6),
        ("simple CH-partition covers every maximum stable set once", criterion_7),
        ("annealing plus post-processing reaches known alpha", criterion_8),
        ("coefficient rescaling", criterion_9),
        ("sweep determinism", criterion_10),
    ];
    let mut hard_failures = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let (status, detail) = match check() {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Fail(d) => {
                hard_failures += 1;
                ("FAIL", d)
            }
            Verdict::Blocked(d) => ("FAIL", d),
        };
        println!("criterion {:>2} {status}: {title}: {detail}", i + 1);
    }
    if hard_failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
