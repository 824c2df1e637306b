//! Acceptance criteria, one pass/fail line each. Exits non-zero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use boxsim_core::boxworld::{feasibility_search, MAX_SEARCH_LAMBDA};
use boxsim_core::harness::{self, InputSource};
use boxsim_core::protocol::{
    check_against_reference, choose_n, decision_threshold, detect_memory, input_bias_realization, memoryless_reference,
    sample_g, signaling_trials, superluminal_margin, G_CELLS,
};
use boxsim_core::{
    Behavior, BiasConfig, ExactBehavior, MemoryKernel, Partition, PrRelabeling, SignalingConfig, Strategy,
    SuperluminalParams,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn named_strategies() -> [(&'static str, Strategy); 3] {
    [
        ("input", Strategy::input_signaling()),
        ("output", Strategy::output_signaling()),
        ("xor", Strategy::xor_signaling()),
    ]
}

fn exact_pr_reproduction() -> Outcome {
    let pr = ExactBehavior::pr_box(PrRelabeling::CANONICAL);
    for (name, s) in named_strategies() {
        let exact = s.induced_exact();
        // independent check: every entry times its denominator, cross-multiplied
        for a in 0..2 {
            for b in 0..2 {
                for x in 0..2 {
                    for y in 0..2 {
                        let lhs = exact.count(a, b, x, y) * pr.denominator();
                        let rhs = pr.count(a, b, x, y) * exact.denominator();
                        if lhs != rhs {
                            return Err(format!("{name}: entry ({a},{b}|{x},{y}) differs"));
                        }
                    }
                }
            }
        }
        if !exact.same_as(&pr) {
            return Err(format!("{name}: same_as disagrees with entrywise check"));
        }
    }
    Ok("16/16 entries equal for input, output and xor strategies".into())
}

fn pointwise_pr() -> Outcome {
    let mut checked = 0;
    for (name, s) in named_strategies() {
        for lambda in 0..s.lambda_card() {
            for x in 0..2 {
                for y in 0..2 {
                    let r = s.respond(x, y, lambda);
                    if r.a ^ r.b != x & y {
                        return Err(format!("{name}: fails at x={x} y={y} lambda={lambda}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    ensure(
        checked == 24,
        format!("{checked} (x, y, lambda) combinations satisfy a ^ b = x y"),
    )
}

fn partition_taxonomy() -> Outcome {
    let parts = Partition::enumerate();
    let nonconstant = parts.iter().filter(|p| !p.is_constant()).count();
    // oracle: count set partitions of 4 points by brute force over label maps
    let mut oracle: Vec<[u8; 4]> = Vec::new();
    for code in 0u16..256 {
        let labels: [u8; 4] = std::array::from_fn(|i| ((code >> (2 * i)) & 3) as u8);
        let mut canon = [0u8; 4];
        let mut seen: Vec<u8> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            canon[i] = match seen.iter().position(|s| s == l) {
                Some(p) => p as u8,
                None => {
                    seen.push(*l);
                    (seen.len() - 1) as u8
                }
            };
        }
        if !oracle.contains(&canon) {
            oracle.push(canon);
        }
        if !parts.contains(&Partition::from_labels(labels)) {
            return Err(format!("function {labels:?} has no partition in the enumeration"));
        }
    }
    ensure(
        parts.len() == 15 && nonconstant == 14 && oracle.len() == 15,
        format!(
            "{} partitions ({nonconstant} non-constant), 256 functions covered",
            parts.len()
        ),
    )
}

fn and_infeasibility() -> Outcome {
    let pr = Behavior::pr_box(PrRelabeling::CANONICAL);
    for l in 1..=MAX_SEARCH_LAMBDA {
        if feasibility_search(&pr, &Partition::AND, l)
            .map_err(|e| e.to_string())?
            .is_some()
        {
            return Err(format!("AND partition feasible at lambda_card {l}"));
        }
    }
    for (name, p) in [
        ("input", Partition::INPUT),
        ("output", Partition::OUTPUT),
        ("xor", Partition::XOR),
    ] {
        match feasibility_search(&pr, &p, 2).map_err(|e| e.to_string())? {
            Some(s)
                if s.induced_exact()
                    .same_as(&ExactBehavior::pr_box(PrRelabeling::CANONICAL)) => {}
            _ => return Err(format!("no exact witness for the {name} partition at lambda_card 2")),
        }
    }
    Ok(format!(
        "AND infeasible for lambda_card 1..={MAX_SEARCH_LAMBDA}; witnesses for input, output, xor"
    ))
}

fn n_formula() -> Outcome {
    let n = choose_n(0.4, 0.5, 3.0).map_err(|e| e.to_string())?;
    let t = decision_threshold(0.4, 0.5, 3.0, n).map_err(|e| e.to_string())?;
    let nf = n as f64;
    let left = nf * 0.4 + 3.0 * (nf * 0.4 * 0.6).sqrt();
    let right = nf * 0.5 - 3.0 * (nf * 0.25).sqrt();
    ensure(
        n == 882 && (t - 396.4).abs() < 0.1 && (left - right).abs() < 0.5,
        format!("N = {n}, threshold = {t:.3}, interval ends {left:.3} / {right:.3}"),
    )
}

fn worked_example_channel() -> Result<(Strategy, MemoryKernel, SignalingConfig), String> {
    let (s, k) = input_bias_realization(0, 1, 0, 0.4, 0.5).map_err(|e| e.to_string())?;
    let cfg = SignalingConfig::new(0, 1, 0, 0.4, 0.5, 3.0, 882).map_err(|e| e.to_string())?;
    Ok((s, k, cfg))
}

fn end_to_end_signaling() -> Outcome {
    let (s, k, cfg) = worked_example_channel()?;
    let summary = signaling_trials(&s, &k, &cfg, 1000, 2024).map_err(|e| e.to_string())?;
    ensure(
        summary.error_rate() <= 0.01,
        format!(
            "{} errors in {} trials (rate {:.4})",
            summary.errors,
            summary.trials,
            summary.error_rate()
        ),
    )
}

fn no_false_signaling() -> Outcome {
    let (s, _, cfg) = worked_example_channel()?;
    let k = MemoryKernel::memoryless(&s);
    let summary = signaling_trials(&s, &k, &cfg, 1000, 2025).map_err(|e| e.to_string())?;
    let acc = summary.accuracy();
    ensure(
        (0.45..=0.55).contains(&acc),
        format!("accuracy {acc:.3} over {} trials", summary.trials),
    )
}

fn learning_consistency() -> Outcome {
    let s = Strategy::input_signaling();
    let t =
        harness::run(&s, None, &InputSource::Random, &InputSource::Random, 1_000_000, 77).map_err(|e| e.to_string())?;
    let g = sample_g(&t);
    let reference = memoryless_reference(&s.induced_behavior());
    let per_cell = check_against_reference(&g, &reference, 0.01);
    let joint = check_against_reference(&g, &reference, 0.05 / G_CELLS as f64);
    if !per_cell.consistent() || !joint.consistent() || per_cell.cells_checked != G_CELLS {
        return Err(format!(
            "memoryless G off reference: max deviation {:.4}",
            per_cell.max_deviation
        ));
    }
    if detect_memory(&g, 0.95).map_err(|e| e.to_string())?.is_some() {
        return Err("memory reported on a memoryless transcript".into());
    }
    let k = MemoryKernel::biased(&s, BiasConfig::new(0, 1, 0), &Partition::INPUT, 0.05).map_err(|e| e.to_string())?;
    let t = harness::run(&s, Some(&k), &InputSource::Random, &InputSource::Random, 1_000_000, 78)
        .map_err(|e| e.to_string())?;
    let found = detect_memory(&sample_g(&t), 0.95).map_err(|e| e.to_string())?;
    match found {
        Some(d) if d.coarse == Partition::INPUT => Ok(format!(
            "memoryless: max deviation {:.2e} over {} cells, no detection; planted delta 0.05: coarse {} recovered",
            per_cell.max_deviation, per_cell.cells_checked, d.coarse
        )),
        Some(d) => Err(format!(
            "planted kernel detected with wrong coarse partition {}",
            d.coarse
        )),
        None => Err("planted kernel not detected".into()),
    }
}

fn superluminality() -> Outcome {
    let fast = SuperluminalParams::new(3e8, 5e-4).map_err(|e| e.to_string())?;
    let slow = SuperluminalParams::new(3e8, 6e-4).map_err(|e| e.to_string())?;
    ensure(
        superluminal_margin(&fast, 882) && !superluminal_margin(&slow, 882),
        format!(
            "d/c = {:.4} s vs 2 N tau = {:.3} s / {:.4} s",
            fast.light_time(),
            fast.protocol_time(882),
            slow.protocol_time(882)
        ),
    )
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_boxsim"))
        .args(args)
        .current_dir(dir)
        .env_remove("BOXSIM_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "boxsim {} failed: {}",
            args.join(" "),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    // (arguments, primary output file or None for stdout)
    let commands: &[(&[&str], Option<&str>)] = &[
        (&["kernel", "--delta", "0.05", "--out", "k.json"], Some("k.json")),
        (
            &[
                "run",
                "--model",
                "xor-signaling",
                "--rounds",
                "2000",
                "--seed",
                "9",
                "--out",
                "t.jsonl",
            ],
            Some("t.jsonl"),
        ),
        (
            &[
                "run",
                "--model",
                "input-signaling",
                "--kernel",
                "k.json",
                "--rounds",
                "2000",
                "--seed",
                "9",
                "--out",
                "tk.jsonl",
            ],
            Some("tk.jsonl"),
        ),
        (
            &[
                "sample",
                "--rounds",
                "20000",
                "--model",
                "input-signaling",
                "--kernel",
                "k.json",
                "--seed",
                "4",
                "--out",
                "g.csv",
            ],
            Some("g.csv"),
        ),
        (
            &["sample", "--transcript", "t.jsonl", "--out", "gt.csv"],
            Some("gt.csv"),
        ),
        (&["detect", "--g", "g.csv", "--out", "d.json"], Some("d.json")),
        (
            &[
                "signal",
                "--alpha",
                "0.4",
                "--beta",
                "0.5",
                "--k",
                "3",
                "--message",
                "1",
                "--seed",
                "7",
                "--out",
                "s.json",
            ],
            Some("s.json"),
        ),
        (
            &[
                "ber", "--alpha", "0.4", "--beta", "0.5", "--trials", "20", "--seed", "3", "--out", "b.json",
            ],
            Some("b.json"),
        ),
        (
            &[
                "margin",
                "--distance",
                "3e8",
                "--tau",
                "5e-4",
                "--N",
                "882",
                "--out",
                "m.json",
            ],
            Some("m.json"),
        ),
        (
            &["feasibility", "--partition", "0110", "--lambda", "2", "--out", "f.json"],
            Some("f.json"),
        ),
        (
            &[
                "fig4", "--alpha", "0.4", "--beta", "0.5", "--k", "3", "--out", "fig4.csv",
            ],
            Some("fig4.csv"),
        ),
        (&["verify", "--json"], None),
    ];
    let dirs = [
        tempfile::tempdir().map_err(|e| e.to_string())?,
        tempfile::tempdir().map_err(|e| e.to_string())?,
    ];
    let mut outputs: [Vec<Vec<u8>>; 2] = [Vec::new(), Vec::new()];
    for (d, dir) in dirs.iter().enumerate() {
        for (args, file) in commands {
            let stdout = run_cli(dir.path(), args)?;
            let bytes = match file {
                Some(f) => std::fs::read(dir.path().join(f)).map_err(|e| e.to_string())?,
                None => stdout,
            };
            if bytes.is_empty() {
                return Err(format!("boxsim {} produced no output", args[0]));
            }
            outputs[d].push(bytes);
        }
    }
    for (i, (args, _)) in commands.iter().enumerate() {
        if outputs[0][i] != outputs[1][i] {
            return Err(format!("boxsim {} differs between runs", args.join(" ")));
        }
    }
    Ok(format!("{} invocations byte-identical across two runs", commands.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("exact PR reproduction", exact_pr_reproduction),
        ("pointwise PR condition", pointwise_pr),
        ("partition taxonomy", partition_taxonomy),
        ("AND infeasibility", and_infeasibility),
        ("N formula", n_formula),
        ("end-to-end signaling", end_to_end_signaling),
        ("no false signaling", no_false_signaling),
        ("learning-stage consistency", learning_consistency),
        ("superluminality arithmetic", superluminality),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = criterion();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
