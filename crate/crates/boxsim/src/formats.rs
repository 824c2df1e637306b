//! On-disk formats: JSON for behaviors, strategies, kernels and reports,
//! JSON Lines for transcripts, CSV for tables.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use boxsim_core::behavior::unindex;
use boxsim_core::protocol::{GCell, G_CELLS};
use boxsim_core::stats::binomial_pmf;
use boxsim_core::{Behavior, GEstimate, MemoryKernel, Partition, RoundRecord, Strategy, Transcript};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn parse_partition(text: &str, path: &Path) -> CliResult<Partition> {
    text.parse()
        .map_err(|e| CliError::format(path, format!("partition {text:?}: {e}")))
}

fn behavior_key(i: usize) -> String {
    let (a, b, x, y) = unindex(i);
    format!("{a},{b}|{x},{y}")
}

pub fn behavior_to_json(p: &Behavior) -> String {
    let map: BTreeMap<String, f64> = (0..16).map(|i| (behavior_key(i), p.probs()[i])).collect();
    serde_json::to_string_pretty(&map).expect("string keys") + "\n"
}

pub fn behavior_from_json(text: &str, path: &Path) -> CliResult<Behavior> {
    let map: BTreeMap<String, f64> = serde_json::from_str(text).map_err(|e| CliError::format(path, e))?;
    if map.len() != 16 {
        return Err(CliError::format(
            path,
            format!("expected 16 entries, found {}", map.len()),
        ));
    }
    let mut probs = [0.0; 16];
    for (i, p) in probs.iter_mut().enumerate() {
        let key = behavior_key(i);
        *p = *map
            .get(&key)
            .ok_or_else(|| CliError::format(path, format!("missing key {key:?}")))?;
    }
    Ok(Behavior::new(probs)?)
}

#[derive(Serialize, Deserialize)]
struct StrategyFile {
    lambda_card: usize,
    partition: String,
    bob_table: Vec<u8>,
    alice_table: Vec<u8>,
}

pub fn strategy_to_json(s: &Strategy) -> String {
    let file = StrategyFile {
        lambda_card: s.lambda_card(),
        partition: s.partition().to_string(),
        bob_table: s.bob_table().to_vec(),
        alice_table: s.alice_table().to_vec(),
    };
    serde_json::to_string(&file).expect("plain data") + "\n"
}

pub fn strategy_from_json(text: &str, path: &Path) -> CliResult<Strategy> {
    let file: StrategyFile = serde_json::from_str(text).map_err(|e| CliError::format(path, e))?;
    let partition = parse_partition(&file.partition, path)?;
    Ok(Strategy::new(
        file.lambda_card,
        partition,
        file.bob_table,
        file.alice_table,
    )?)
}

#[derive(Serialize, Deserialize)]
struct KernelOverride {
    x: Vec<u8>,
    s: Vec<u8>,
    p: f64,
}

#[derive(Serialize, Deserialize)]
struct KernelFile {
    depth: usize,
    partition: String,
    /// `base[x][signal]`, one entry per signal label.
    base: Vec<Vec<f64>>,
    overrides: Vec<KernelOverride>,
}

pub fn kernel_to_json(k: &MemoryKernel) -> String {
    let classes = k.partition().class_count();
    let base = k.base_table().iter().map(|row| row[..classes].to_vec()).collect();
    let overrides = k
        .overrides()
        .map(|(idx, p)| {
            let (x, s) = k.window_at(idx);
            KernelOverride { x, s, p }
        })
        .collect();
    let file = KernelFile {
        depth: k.depth(),
        partition: k.partition().to_string(),
        base,
        overrides,
    };
    serde_json::to_string_pretty(&file).expect("plain data") + "\n"
}

pub fn kernel_from_json(text: &str, path: &Path) -> CliResult<MemoryKernel> {
    let file: KernelFile = serde_json::from_str(text).map_err(|e| CliError::format(path, e))?;
    let partition = parse_partition(&file.partition, path)?;
    let classes = partition.class_count();
    if file.base.len() != 2 || file.base.iter().any(|row| row.len() != classes) {
        return Err(CliError::format(
            path,
            format!("base must be 2 rows of {classes} probabilities"),
        ));
    }
    let mut base = [[0.0; 4]; 2];
    for (dst, src) in base.iter_mut().zip(&file.base) {
        dst[..classes].copy_from_slice(src);
    }
    let mut kernel = MemoryKernel::from_base(file.depth, partition, base)?;
    for o in &file.overrides {
        kernel.set_override(&o.x, &o.s, o.p)?;
    }
    Ok(kernel)
}

#[derive(Serialize, Deserialize)]
struct TranscriptHeader {
    model: String,
    partition: String,
    seed: u64,
    rounds: usize,
}

#[derive(Serialize, Deserialize)]
struct RoundLine {
    n: u64,
    x: u8,
    y: u8,
    a: u8,
    b: u8,
    lambda: u32,
    signal: u8,
}

pub fn write_transcript(t: &Transcript, out: &mut impl Write) -> std::io::Result<()> {
    let header = TranscriptHeader {
        model: t.model.clone(),
        partition: t.partition.to_string(),
        seed: t.seed,
        rounds: t.len(),
    };
    serde_json::to_writer(&mut *out, &header)?;
    out.write_all(b"\n")?;
    for r in &t.rounds {
        let line = RoundLine {
            n: r.n,
            x: r.x,
            y: r.y,
            a: r.a,
            b: r.b,
            lambda: r.lambda,
            signal: r.signal,
        };
        serde_json::to_writer(&mut *out, &line)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn transcript_to_bytes(t: &Transcript) -> Vec<u8> {
    let mut buf = Vec::with_capacity(64 * (t.len() + 1));
    write_transcript(t, &mut buf).expect("writing to memory");
    buf
}

pub fn read_transcript(path: &Path) -> CliResult<Transcript> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let header_line = lines
        .next()
        .ok_or_else(|| CliError::format(path, "empty transcript"))?
        .map_err(|e| CliError::io(path, e))?;
    let header: TranscriptHeader =
        serde_json::from_str(&header_line).map_err(|e| CliError::format(path, format!("header: {e}")))?;
    let partition = parse_partition(&header.partition, path)?;
    let mut rounds = Vec::with_capacity(header.rounds);
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| CliError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let r: RoundLine =
            serde_json::from_str(&line).map_err(|e| CliError::format(path, format!("line {}: {e}", i + 2)))?;
        rounds.push(RoundRecord {
            n: r.n,
            x: r.x,
            y: r.y,
            a: r.a,
            b: r.b,
            lambda: r.lambda,
            signal: r.signal,
        });
    }
    if rounds.len() != header.rounds {
        return Err(CliError::format(
            path,
            format!("header announces {} rounds, found {}", header.rounds, rounds.len()),
        ));
    }
    let t = Transcript {
        model: header.model,
        partition,
        seed: header.seed,
        rounds,
    };
    t.validate()?;
    Ok(t)
}

/// Failure probability of the band column in G tables.
pub const G_TABLE_DELTA: f64 = 0.01;

/// `"y'b':xx'yb"`, e.g. `"01:1010"`.
pub fn g_cell_key(cell: usize) -> String {
    let c = GCell::from_index(cell);
    format!("{}{}:{}{}{}{}", c.y_prev, c.b_prev, c.x, c.x_prev, c.y, c.b)
}

fn parse_g_cell_key(key: &str) -> Option<usize> {
    let bytes = key.as_bytes();
    if bytes.len() != 7 || bytes[2] != b':' {
        return None;
    }
    let mut bits = [0u8; 6];
    for (dst, &c) in bits.iter_mut().zip(bytes.iter().filter(|&&c| c != b':')) {
        *dst = match c {
            b'0' => 0,
            b'1' => 1,
            _ => return None,
        };
    }
    Some(
        GCell {
            y_prev: bits[0],
            b_prev: bits[1],
            x: bits[2],
            x_prev: bits[3],
            y: bits[4],
            b: bits[5],
        }
        .index(),
    )
}

pub fn g_table_to_csv(g: &GEstimate) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["cell", "count", "zeros", "frequency", "band"])
        .expect("memory");
    for cell in 0..G_CELLS {
        let freq = g.frequency(cell).map(|f| f.to_string()).unwrap_or_default();
        let band = if g.count(cell) > 0 {
            g.band(cell, G_TABLE_DELTA).to_string()
        } else {
            String::new()
        };
        w.write_record([
            g_cell_key(cell),
            g.count(cell).to_string(),
            g.zeros(cell).to_string(),
            freq,
            band,
        ])
        .expect("memory");
    }
    w.into_inner().expect("memory")
}

pub fn g_table_from_csv(text: &str, path: &Path) -> CliResult<GEstimate> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut counts = [0u64; G_CELLS];
    let mut zeros = [0u64; G_CELLS];
    let mut seen = [false; G_CELLS];
    for row in r.records() {
        let row = row.map_err(|e| CliError::format(path, e))?;
        let field = |i: usize| row.get(i).ok_or_else(|| CliError::format(path, "short row"));
        let key = field(0)?;
        let cell = parse_g_cell_key(key).ok_or_else(|| CliError::format(path, format!("bad cell key {key:?}")))?;
        if seen[cell] {
            return Err(CliError::format(path, format!("duplicate cell {key}")));
        }
        seen[cell] = true;
        counts[cell] = field(1)?
            .parse()
            .map_err(|e| CliError::format(path, format!("count of {key}: {e}")))?;
        zeros[cell] = field(2)?
            .parse()
            .map_err(|e| CliError::format(path, format!("zeros of {key}: {e}")))?;
    }
    if seen.contains(&false) {
        return Err(CliError::format(path, "G table must list all 64 cells"));
    }
    Ok(GEstimate::from_counts(counts, zeros)?)
}

/// Binomial pmfs of the two hypotheses over `0..=n`, then a `threshold` row.
pub fn binomial_curves_csv(alpha: f64, beta: f64, n: u64, threshold: f64) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["count", "pmf_alpha", "pmf_beta"]).expect("memory");
    for k in 0..=n {
        w.write_record([
            k.to_string(),
            binomial_pmf(n, k, alpha).to_string(),
            binomial_pmf(n, k, beta).to_string(),
        ])
        .expect("memory");
    }
    w.write_record(["threshold".to_string(), threshold.to_string(), threshold.to_string()])
        .expect("memory");
    w.into_inner().expect("memory")
}

#[cfg(test)]
mod tests {
    use super::*;
    use boxsim_core::harness::{self, InputSource};
    use boxsim_core::protocol::sample_g;
    use boxsim_core::{BiasConfig, PrRelabeling};

    fn here() -> &'static Path {
        Path::new("test")
    }

    #[test]
    fn behavior_roundtrip() {
        let p = Behavior::pr_box(PrRelabeling::CANONICAL);
        let text = behavior_to_json(&p);
        assert!(text.contains("\"0,0|0,0\": 0.5"));
        assert_eq!(behavior_from_json(&text, here()).unwrap(), p);
        let broken = text.replace("\"0,0|0,0\": 0.5", "\"0,0|0,0\": 0.7");
        assert!(matches!(behavior_from_json(&broken, here()), Err(CliError::Core(_))));
    }

    #[test]
    fn strategy_and_kernel_roundtrip() {
        let s = Strategy::xor_signaling();
        assert_eq!(strategy_from_json(&strategy_to_json(&s), here()).unwrap(), s);
        let s = Strategy::input_signaling();
        let k = MemoryKernel::biased(&s, BiasConfig::new(0, 1, 0), &Partition::INPUT, 0.05).unwrap();
        assert_eq!(kernel_from_json(&kernel_to_json(&k), here()).unwrap(), k);
    }

    #[test]
    fn transcript_and_g_roundtrip() {
        let s = Strategy::output_signaling();
        let t = harness::run(&s, None, &InputSource::Random, &InputSource::Random, 50, 3)
            .unwrap()
            .with_model("output-signaling");
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.jsonl");
        write_bytes(&path, &transcript_to_bytes(&t)).unwrap();
        assert_eq!(read_transcript(&path).unwrap(), t);

        let g = sample_g(&t);
        let csv = g_table_to_csv(&g);
        assert_eq!(String::from_utf8(csv.clone()).unwrap().lines().count(), 65);
        assert_eq!(g_table_from_csv(std::str::from_utf8(&csv).unwrap(), here()).unwrap(), g);
    }

    #[test]
    fn g_cell_keys() {
        for cell in 0..G_CELLS {
            assert_eq!(parse_g_cell_key(&g_cell_key(cell)), Some(cell));
        }
        assert_eq!(
            g_cell_key(
                GCell {
                    y_prev: 0,
                    b_prev: 1,
                    x: 1,
                    x_prev: 0,
                    y: 1,
                    b: 0
                }
                .index()
            ),
            "01:1010"
        );
        assert_eq!(parse_g_cell_key("01-1010"), None);
    }
}
