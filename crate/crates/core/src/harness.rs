//! Round engine: input sources, shared hidden variable, Bob's box, the
//! hidden channel and Alice's (optionally memoryful) box.
//!
//! One seeded ChaCha generator per run. Separate streams of it feed the
//! hidden variable, each party's random inputs and the kernel's coin flips,
//! so changing how one of them is consumed leaves the others unchanged.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::behavior::{index, Behavior, Side};
use crate::boxworld::Strategy;
use crate::error::{Error, Result};
use crate::memory::MemoryKernel;
use crate::sigfun::Partition;

const STREAM_LAMBDA: u64 = 1;
const STREAM_ALICE: u64 = 2;
const STREAM_BOB: u64 = 3;
const STREAM_KERNEL: u64 = 4;

/// Generator for one named stream of a run seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputSource {
    /// Uniform random bits from the run's stream for this party.
    Random,
    /// Fixed sequence, one bit per round.
    Scripted(Vec<u8>),
    /// `odd` on odd rounds, `even` on even rounds (rounds count from 0).
    AlternatingPair { odd: u8, even: u8 },
}

impl InputSource {
    fn check(&self, side: Side, rounds: usize) -> Result<()> {
        match self {
            InputSource::Random => Ok(()),
            InputSource::Scripted(seq) => {
                if seq.len() < rounds {
                    Err(Error::InputExhausted {
                        side,
                        needed: rounds,
                        available: seq.len(),
                    })
                } else if seq.iter().any(|&v| v > 1) {
                    Err(Error::Structure("scripted inputs must be bits"))
                } else {
                    Ok(())
                }
            }
            InputSource::AlternatingPair { odd, even } => {
                if *odd > 1 || *even > 1 {
                    Err(Error::Structure("alternating inputs must be bits"))
                } else {
                    Ok(())
                }
            }
        }
    }

    #[inline]
    fn next(&self, n: usize, rng: &mut ChaCha8Rng) -> u8 {
        match self {
            InputSource::Random => rng.random_range(0..2u8),
            InputSource::Scripted(seq) => seq[n],
            InputSource::AlternatingPair { odd, even } => {
                if n % 2 == 1 {
                    *odd
                } else {
                    *even
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundRecord {
    pub n: u64,
    pub x: u8,
    pub y: u8,
    pub a: u8,
    pub b: u8,
    pub lambda: u32,
    pub signal: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub model: String,
    pub partition: Partition,
    pub seed: u64,
    pub rounds: Vec<RoundRecord>,
}

impl Transcript {
    pub fn with_model(mut self, model: &str) -> Self {
        self.model = model.into();
        self
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// Checks consecutive round indices, bit ranges and signal consistency.
    pub fn validate(&self) -> Result<()> {
        for (i, r) in self.rounds.iter().enumerate() {
            if r.n != i as u64 {
                return Err(Error::Structure("round indices must be consecutive from 0"));
            }
            if r.x > 1 || r.y > 1 || r.a > 1 || r.b > 1 {
                return Err(Error::Structure("round record holds a non-bit value"));
            }
            if r.signal != self.partition.apply(r.y, r.b) {
                return Err(Error::Structure("signal does not match the partition"));
            }
        }
        Ok(())
    }

    /// True if every round's `(a, b)` follows from its `(x, y, lambda)` under `strategy`.
    pub fn replays_under(&self, strategy: &Strategy) -> bool {
        self.rounds.iter().all(|r| {
            (r.lambda as usize) < strategy.lambda_card() && {
                let resp = strategy.respond(r.x, r.y, r.lambda as usize);
                (resp.a, resp.b) == (r.a, r.b)
            }
        })
    }
}

/// Simulates `rounds` rounds. Without a kernel Alice answers from the
/// strategy table. With a kernel, windows the kernel overrides are answered
/// by a coin with the kernel's probability of 0; every other window (and the
/// first `depth` rounds) falls back to the strategy's deterministic answer.
pub fn run(
    strategy: &Strategy,
    kernel: Option<&MemoryKernel>,
    alice: &InputSource,
    bob: &InputSource,
    rounds: usize,
    seed: u64,
) -> Result<Transcript> {
    if rounds == 0 {
        return Err(Error::Range {
            what: "rounds",
            value: 0.0,
        });
    }
    let partition = strategy.partition();
    if let Some(k) = kernel {
        if k.partition() != partition {
            return Err(Error::Structure("kernel partition differs from the strategy's"));
        }
    }
    alice.check(Side::Alice, rounds)?;
    bob.check(Side::Bob, rounds)?;

    let mut rng_lambda = stream_rng(seed, STREAM_LAMBDA);
    let mut rng_alice = stream_rng(seed, STREAM_ALICE);
    let mut rng_bob = stream_rng(seed, STREAM_BOB);
    let mut rng_kernel = stream_rng(seed, STREAM_KERNEL);

    let depth = kernel.map_or(0, |k| k.depth());
    // window buffers, index 0 = current round
    let mut xs = vec![0u8; depth + 1];
    let mut ss = vec![0u8; depth + 1];

    let card = strategy.lambda_card();
    let mut records = Vec::with_capacity(rounds);
    for n in 0..rounds {
        let lambda = rng_lambda.random_range(0..card);
        let x = alice.next(n, &mut rng_alice);
        let y = bob.next(n, &mut rng_bob);
        let b = strategy.bob(y, lambda);
        let signal = partition.apply(y, b);

        let mut a = strategy.alice(x, signal, lambda);
        if let Some(k) = kernel {
            if n >= depth {
                xs[0] = x;
                ss[0] = signal;
                for j in 1..=depth {
                    let past: &RoundRecord = &records[n - j];
                    xs[j] = past.x;
                    ss[j] = past.signal;
                }
                let idx = k.window_index(&xs, &ss).expect("window built from valid labels");
                if let Some(p) = k.override_at(idx) {
                    let u: f64 = rng_kernel.random();
                    a = if u < p { 0 } else { 1 };
                }
            }
        }
        records.push(RoundRecord {
            n: n as u64,
            x,
            y,
            a,
            b,
            lambda: lambda as u32,
            signal,
        });
    }
    Ok(Transcript {
        model: String::new(),
        partition,
        seed,
        rounds: records,
    })
}

/// Conditional relative frequencies `p(a,b|x,y)` of a transcript.
pub fn empirical_behavior(transcript: &Transcript) -> Result<Behavior> {
    let mut counts = [0u64; 16];
    let mut per_input = [0u64; 4];
    for r in &transcript.rounds {
        counts[index(r.a, r.b, r.x, r.y)] += 1;
        per_input[(r.x as usize) << 1 | r.y as usize] += 1;
    }
    if per_input.contains(&0) {
        return Err(Error::InsufficientData("some input pair (x, y) never occurs"));
    }
    let mut probs = [0.0; 16];
    for (i, p) in probs.iter_mut().enumerate() {
        *p = counts[i] as f64 / per_input[i & 3] as f64;
    }
    Behavior::new(probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::PrRelabeling;
    use crate::memory::BiasConfig;

    #[test]
    fn memoryless_rounds_satisfy_pr_condition() {
        let s = Strategy::input_signaling();
        let t = run(&s, None, &InputSource::Random, &InputSource::Random, 2000, 3).unwrap();
        assert!(t.rounds.iter().all(|r| r.a ^ r.b == r.x & r.y));
        assert!(t.replays_under(&s));
        t.validate().unwrap();
    }

    #[test]
    fn same_seed_same_transcript() {
        let s = Strategy::xor_signaling();
        let k = MemoryKernel::memoryless(&s);
        let a = run(&s, Some(&k), &InputSource::Random, &InputSource::Random, 500, 11).unwrap();
        let b = run(&s, Some(&k), &InputSource::Random, &InputSource::Random, 500, 11).unwrap();
        let c = run(&s, Some(&k), &InputSource::Random, &InputSource::Random, 500, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn deterministic_vertex_transcript_is_exact() {
        let s = Strategy::deterministic([0, 1], [1, 1], Partition::CONSTANT);
        let t = run(&s, None, &InputSource::Random, &InputSource::Random, 200, 5).unwrap();
        let emp = empirical_behavior(&t).unwrap();
        assert_eq!(emp, Behavior::deterministic_vertex([0, 1], [1, 1]));
    }

    #[test]
    fn one_round_is_insufficient() {
        let s = Strategy::input_signaling();
        let t = run(&s, None, &InputSource::Random, &InputSource::Random, 1, 5).unwrap();
        assert!(matches!(empirical_behavior(&t), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn scripted_and_alternating_inputs() {
        let s = Strategy::input_signaling();
        let t = run(
            &s,
            None,
            &InputSource::Scripted(vec![1, 0, 1]),
            &InputSource::AlternatingPair { odd: 1, even: 0 },
            3,
            0,
        )
        .unwrap();
        let xs: Vec<u8> = t.rounds.iter().map(|r| r.x).collect();
        let ys: Vec<u8> = t.rounds.iter().map(|r| r.y).collect();
        assert_eq!(xs, vec![1, 0, 1]);
        assert_eq!(ys, vec![0, 1, 0]);
        assert!(matches!(
            run(&s, None, &InputSource::Scripted(vec![1]), &InputSource::Random, 3, 0),
            Err(Error::InputExhausted {
                side: Side::Alice,
                needed: 3,
                available: 1
            })
        ));
    }

    #[test]
    fn kernel_partition_must_match() {
        let k = MemoryKernel::memoryless(&Strategy::output_signaling());
        let r = run(
            &Strategy::input_signaling(),
            Some(&k),
            &InputSource::Random,
            &InputSource::Random,
            10,
            0,
        );
        assert!(matches!(r, Err(Error::Structure(_))));
    }

    #[test]
    fn empirical_pr_within_bound() {
        let s = Strategy::input_signaling();
        let t = run(&s, None, &InputSource::Random, &InputSource::Random, 100_000, 42).unwrap();
        let emp = empirical_behavior(&t).unwrap();
        assert!(emp.max_abs_diff(&Behavior::pr_box(PrRelabeling::CANONICAL)) < 0.02);
    }

    #[test]
    fn biased_kernel_keeps_marginals() {
        let s = Strategy::input_signaling();
        let k = MemoryKernel::biased(&s, BiasConfig::new(0, 1, 0), &Partition::INPUT, 0.1).unwrap();
        let rounds = 200_000;
        let t = run(&s, Some(&k), &InputSource::Random, &InputSource::Random, rounds, 9).unwrap();
        let emp = empirical_behavior(&t).unwrap();
        // each (x,y) cell holds ~rounds/4 samples; 3 sigma of a fair coin
        let band = 3.0 * 0.5 / ((rounds / 4) as f64).sqrt();
        let alice = emp.local_zero_rates(Side::Alice);
        let bob = emp.local_zero_rates(Side::Bob);
        for xy in 0..4 {
            assert!((alice[xy] - 0.5).abs() < band, "alice {xy}: {}", alice[xy]);
            assert!((bob[xy] - 0.5).abs() < band, "bob {xy}: {}", bob[xy]);
        }
    }
}
