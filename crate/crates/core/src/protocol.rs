//! Learning and signalling stages.
//!
//! During learning both parties pick random inputs and pool their records,
//! which lets Alice estimate the 64 conditional probabilities
//! `G[y', b'](x, x', y, b) = p(a = 0 | x, y, b, x', y', b')` (primed values
//! belong to the previous round). Cells that differ only in `(y', b')` and
//! disagree beyond their confidence bands reveal a memory effect.
//!
//! During signalling Alice alternates `x_odd` / `x_even`, Bob alternates
//! `y_odd` / his message bit, and Alice counts zeros on the `N` odd rounds:
//! a Binomial(N, alpha) count for message 0 and Binomial(N, beta) for 1.

use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::behavior::{Behavior, Side};
use crate::boxworld::Strategy;
use crate::error::{Error, Result};
use crate::harness::{self, stream_rng, InputSource, Transcript};
use crate::memory::{BiasConfig, MemoryKernel};
use crate::sigfun::Partition;
use crate::stats;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Number of G cells.
pub const G_CELLS: usize = 64;

const STREAM_TRIALS: u64 = 16;

/// Coordinates of one G cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GCell {
    pub y_prev: u8,
    pub b_prev: u8,
    pub x: u8,
    pub x_prev: u8,
    pub y: u8,
    pub b: u8,
}

impl GCell {
    /// Flat index `y'<<5 | b'<<4 | x<<3 | x'<<2 | y<<1 | b`.
    pub fn index(&self) -> usize {
        (self.y_prev as usize) << 5
            | (self.b_prev as usize) << 4
            | (self.x as usize) << 3
            | (self.x_prev as usize) << 2
            | (self.y as usize) << 1
            | self.b as usize
    }

    pub fn from_index(i: usize) -> GCell {
        let bit = |s: usize| ((i >> s) & 1) as u8;
        GCell {
            y_prev: bit(5),
            b_prev: bit(4),
            x: bit(3),
            x_prev: bit(2),
            y: bit(1),
            b: bit(0),
        }
    }
}

/// Counts of consecutive round pairs per G cell and how many of them had `a = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GEstimate {
    counts: [u64; G_CELLS],
    zeros: [u64; G_CELLS],
}

impl GEstimate {
    pub fn from_counts(counts: [u64; G_CELLS], zeros: [u64; G_CELLS]) -> Result<Self> {
        if counts.iter().zip(zeros.iter()).any(|(c, z)| z > c) {
            return Err(Error::Structure("zero count exceeds cell count"));
        }
        Ok(GEstimate { counts, zeros })
    }

    pub fn count(&self, cell: usize) -> u64 {
        self.counts[cell]
    }

    pub fn zeros(&self, cell: usize) -> u64 {
        self.zeros[cell]
    }

    pub fn frequency(&self, cell: usize) -> Option<f64> {
        (self.counts[cell] > 0).then(|| self.zeros[cell] as f64 / self.counts[cell] as f64)
    }

    /// Hoeffding half-width for the cell at failure probability `delta`.
    pub fn band(&self, cell: usize, delta: f64) -> f64 {
        stats::hoeffding_band(self.counts[cell], delta)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn populated(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Pooled frequency of `a = 0` over the previous-round points in
    /// `coarse` class `class`, at context `(x, x', y, b)`.
    fn class_frequency(&self, coarse: &Partition, class: u8, x: u8, x_prev: u8, y: u8, b: u8) -> (u64, u64) {
        let mut count = 0;
        let mut zeros = 0;
        for point in 0..4u8 {
            let (y_prev, b_prev) = (point >> 1, point & 1);
            if coarse.apply(y_prev, b_prev) != class {
                continue;
            }
            let i = GCell {
                y_prev,
                b_prev,
                x,
                x_prev,
                y,
                b,
            }
            .index();
            count += self.counts[i];
            zeros += self.zeros[i];
        }
        (count, zeros)
    }
}

/// Tallies every consecutive pair of rounds into its G cell.
pub fn sample_g(transcript: &Transcript) -> GEstimate {
    let mut counts = [0u64; G_CELLS];
    let mut zeros = [0u64; G_CELLS];
    for pair in transcript.rounds.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        let i = GCell {
            y_prev: prev.y,
            b_prev: prev.b,
            x: cur.x,
            x_prev: prev.x,
            y: cur.y,
            b: cur.b,
        }
        .index();
        counts[i] += 1;
        if cur.a == 0 {
            zeros[i] += 1;
        }
    }
    GEstimate { counts, zeros }
}

/// Memoryless prediction for every G cell, `p(a = 0 | x, y, b)` of `behavior`;
/// `None` where `p(b | x, y) = 0`.
pub fn memoryless_reference(behavior: &Behavior) -> [Option<f64>; G_CELLS] {
    core::array::from_fn(|i| {
        let c = GCell::from_index(i);
        let p0 = behavior.get(0, c.b, c.x, c.y);
        let pb = p0 + behavior.get(1, c.b, c.x, c.y);
        (pb > 0.0).then(|| p0 / pb)
    })
}

/// Result of comparing an estimate with a memoryless prediction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyReport {
    /// Largest `|frequency - reference|` over populated cells.
    pub max_deviation: f64,
    /// Largest deviation divided by the cell's band; `<= 1` means consistent.
    pub max_band_ratio: f64,
    pub cells_checked: usize,
}

impl ConsistencyReport {
    pub fn consistent(&self) -> bool {
        self.max_band_ratio <= 1.0
    }
}

/// Checks every populated cell against `reference` with a Hoeffding band at
/// failure probability `delta_per_cell`.
pub fn check_against_reference(
    g: &GEstimate,
    reference: &[Option<f64>; G_CELLS],
    delta_per_cell: f64,
) -> ConsistencyReport {
    let mut report = ConsistencyReport {
        max_deviation: 0.0,
        max_band_ratio: 0.0,
        cells_checked: 0,
    };
    for (i, r) in reference.iter().enumerate() {
        let (Some(freq), Some(r)) = (g.frequency(i), r) else {
            continue;
        };
        let dev = (freq - r).abs();
        report.cells_checked += 1;
        report.max_deviation = report.max_deviation.max(dev);
        report.max_band_ratio = report.max_band_ratio.max(dev / g.band(i, delta_per_cell));
    }
    report
}

/// A context where Alice's statistics depend on the previous round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryCandidate {
    pub x_current: u8,
    pub x_previous: u8,
    pub y_current: u8,
    pub b_current: u8,
    /// Pooled `p(a=0)` when the previous `(y', b')` falls in coarse class 0.
    pub alpha_hat: f64,
    /// Same for coarse class 1.
    pub beta_hat: f64,
    pub alpha_count: u64,
    pub beta_count: u64,
}

impl MemoryCandidate {
    pub fn gap(&self) -> f64 {
        (self.beta_hat - self.alpha_hat).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MemoryDetection {
    /// Two-class grouping of the previous round's `(y', b')`.
    pub coarse: Partition,
    /// Separating contexts, widest gap first.
    pub candidates: Vec<MemoryCandidate>,
}

/// Looks for G cells that differ only in `(y', b')` and are separated by
/// more than the sum of their Hoeffding bands. Bands use a union bound over
/// all 64 cells, so a memoryless source triggers a detection with
/// probability at most `1 - confidence`.
pub fn detect_memory(g: &GEstimate, confidence: f64) -> Result<Option<MemoryDetection>> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Range {
            what: "confidence",
            value: confidence,
        });
    }
    let delta = (1.0 - confidence) / G_CELLS as f64;
    let mut comparable = 0usize;
    // (gap, context, i, j) of the widest separated pair
    let mut widest: Option<(f64, usize, usize, usize)> = None;
    let mut separated_contexts = [false; 16];
    for context in 0..16 {
        let cells: [usize; 4] = core::array::from_fn(|point| point << 4 | context);
        for i in 0..4 {
            for j in i + 1..4 {
                let (Some(fi), Some(fj)) = (g.frequency(cells[i]), g.frequency(cells[j])) else {
                    continue;
                };
                comparable += 1;
                let gap = (fi - fj).abs();
                if gap > g.band(cells[i], delta) + g.band(cells[j], delta) {
                    separated_contexts[context] = true;
                    if widest.is_none_or(|(w, ..)| gap > w) {
                        widest = Some((gap, context, i, j));
                    }
                }
            }
        }
    }
    if comparable == 0 {
        return Err(Error::InsufficientData(
            "no context has two populated previous-round cells",
        ));
    }
    let Some((_, context, i, j)) = widest else {
        return Ok(None);
    };

    let cells: [usize; 4] = core::array::from_fn(|point| point << 4 | context);
    let fi = g.frequency(cells[i]).expect("populated");
    let fj = g.frequency(cells[j]).expect("populated");
    let groups: [u8; 4] = core::array::from_fn(|k| match g.frequency(cells[k]) {
        Some(fk) if (fk - fj).abs() < (fk - fi).abs() => 1,
        _ => 0,
    });
    let coarse = Partition::from_labels(groups);

    let mut candidates: Vec<MemoryCandidate> = separated_contexts
        .iter()
        .enumerate()
        .filter(|(_, s)| **s)
        .map(|(context, _)| {
            let c = GCell::from_index(context);
            let (alpha_count, alpha_zeros) = g.class_frequency(&coarse, 0, c.x, c.x_prev, c.y, c.b);
            let (beta_count, beta_zeros) = g.class_frequency(&coarse, 1, c.x, c.x_prev, c.y, c.b);
            MemoryCandidate {
                x_current: c.x,
                x_previous: c.x_prev,
                y_current: c.y,
                b_current: c.b,
                alpha_hat: ratio(alpha_zeros, alpha_count),
                beta_hat: ratio(beta_zeros, beta_count),
                alpha_count,
                beta_count,
            }
        })
        .collect();
    candidates.sort_by(|a, b| b.gap().total_cmp(&a.gap()));
    Ok(Some(MemoryDetection { coarse, candidates }))
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        f64::NAN
    } else {
        num as f64 / den as f64
    }
}

fn validate_bias_pair(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Range {
            what: "alpha",
            value: alpha,
        });
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Range {
            what: "beta",
            value: beta,
        });
    }
    if alpha == beta {
        return Err(Error::DegenerateBias { alpha, beta });
    }
    Ok(())
}

/// Smallest `N` with `N > k^2 (sqrt(a(1-a)) + sqrt(b(1-b)))^2 / (b - a)^2`,
/// i.e. the first block length where the two `k`-sigma intervals separate.
pub fn choose_n(alpha: f64, beta: f64, k: f64) -> Result<u64> {
    validate_bias_pair(alpha, beta)?;
    if !(k > 0.0) {
        return Err(Error::Range { what: "k", value: k });
    }
    let va = alpha * (1.0 - alpha);
    let vb = beta * (1.0 - beta);
    // (sqrt(va) + sqrt(vb))^2 expanded; exact for symmetric pairs
    let spread = va + vb + 2.0 * libm::sqrt(va * vb);
    let gap = beta - alpha;
    let mut bound = k * k * spread / (gap * gap);
    let nearest = libm::round(bound);
    if (bound - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        bound = nearest;
    }
    Ok(libm::floor(bound) as u64 + 1)
}

/// Midpoint of `[N lo + k sqrt(N lo (1-lo)), N hi - k sqrt(N hi (1-hi))]`
/// with `lo = min(alpha, beta)`, `hi = max(alpha, beta)`.
pub fn decision_threshold(alpha: f64, beta: f64, k: f64, n: u64) -> Result<f64> {
    if alpha == beta {
        return Err(Error::DegenerateBias { alpha, beta });
    }
    if !(k >= 0.0) {
        return Err(Error::Range { what: "k", value: k });
    }
    if n == 0 {
        return Err(Error::Configuration("block length N must be positive"));
    }
    let (lo, hi) = if alpha < beta { (alpha, beta) } else { (beta, alpha) };
    let nf = n as f64;
    let left = nf * lo + k * libm::sqrt(nf * lo * (1.0 - lo));
    let right = nf * hi - k * libm::sqrt(nf * hi * (1.0 - hi));
    if left >= right {
        return Err(Error::Configuration("N too small: the k-sigma intervals overlap"));
    }
    Ok(0.5 * (left + right))
}

/// Agreed inputs and decision rule of the signalling stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalingConfig {
    pub x_odd: u8,
    pub x_even: u8,
    pub y_odd: u8,
    /// `p(a=0)` on odd rounds when Bob sends 0.
    pub alpha: f64,
    /// `p(a=0)` on odd rounds when Bob sends 1.
    pub beta: f64,
    pub k: f64,
    pub n: u64,
    pub threshold: f64,
}

impl SignalingConfig {
    /// Config with an explicit block length.
    pub fn new(x_odd: u8, x_even: u8, y_odd: u8, alpha: f64, beta: f64, k: f64, n: u64) -> Result<Self> {
        if x_odd > 1 || x_even > 1 || y_odd > 1 {
            return Err(Error::Structure("protocol inputs must be bits"));
        }
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
            return Err(Error::Range {
                what: "bias probability",
                value: if (0.0..=1.0).contains(&alpha) { beta } else { alpha },
            });
        }
        let threshold = decision_threshold(alpha, beta, k, n)?;
        Ok(SignalingConfig {
            x_odd,
            x_even,
            y_odd,
            alpha,
            beta,
            k,
            n,
            threshold,
        })
    }

    /// Config with `N` from [`choose_n`].
    pub fn from_bias(x_odd: u8, x_even: u8, y_odd: u8, alpha: f64, beta: f64, k: f64) -> Result<Self> {
        let n = choose_n(alpha, beta, k)?;
        Self::new(x_odd, x_even, y_odd, alpha, beta, k, n)
    }
}

/// Runs the `2N` signalling rounds for one message bit.
pub fn encode_run(
    strategy: &Strategy,
    kernel: &MemoryKernel,
    cfg: &SignalingConfig,
    message: u8,
    seed: u64,
) -> Result<Transcript> {
    if kernel.depth() != 1 {
        return Err(Error::Structure("signalling is implemented for depth-1 kernels"));
    }
    if message > 1 {
        return Err(Error::Structure("message must be a bit"));
    }
    let alice = InputSource::AlternatingPair {
        odd: cfg.x_odd,
        even: cfg.x_even,
    };
    let bob = InputSource::AlternatingPair {
        odd: cfg.y_odd,
        even: message,
    };
    harness::run(strategy, Some(kernel), &alice, &bob, 2 * cfg.n as usize, seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decoded {
    pub bit: u8,
    /// Zeros among Alice's odd-round outputs.
    pub zeros: u64,
    pub odd_rounds: u64,
    pub threshold: f64,
    /// One minus the exact binomial probability that the rejected coin lands
    /// on the decided side of the threshold.
    pub confidence: f64,
    /// Same quantity under the normal approximation, for comparison.
    pub normal_confidence: f64,
}

/// Decides Bob's bit from the zero count on odd rounds. Counts equal to the
/// threshold decode to the alpha side (bit 0).
pub fn decode(transcript: &Transcript, cfg: &SignalingConfig) -> Decoded {
    let odd = transcript.rounds.iter().filter(|r| r.n % 2 == 1);
    let (mut zeros, mut odd_rounds) = (0u64, 0u64);
    for r in odd {
        odd_rounds += 1;
        if r.a == 0 {
            zeros += 1;
        }
    }
    let t = cfg.threshold;
    let z = zeros as f64;
    let alpha_low = cfg.alpha < cfg.beta;
    let alpha_side = if alpha_low { z <= t } else { z >= t };
    let n = cfg.n;

    // probability the rejected coin falls on the decided side
    let (tail, normal_tail) = match (alpha_side, alpha_low) {
        (true, true) => (stats::binomial_cdf_real(n, t, cfg.beta), normal_le(n, t, cfg.beta)),
        (true, false) => (stats::binomial_sf_real(n, t, cfg.beta), 1.0 - normal_le(n, t, cfg.beta)),
        (false, true) => (
            1.0 - stats::binomial_cdf_real(n, t, cfg.alpha),
            1.0 - normal_le(n, t, cfg.alpha),
        ),
        (false, false) => (
            1.0 - stats::binomial_sf_real(n, t, cfg.alpha),
            normal_le(n, t, cfg.alpha),
        ),
    };
    Decoded {
        bit: if alpha_side { 0 } else { 1 },
        zeros,
        odd_rounds,
        threshold: t,
        confidence: 1.0 - tail,
        normal_confidence: 1.0 - normal_tail,
    }
}

fn normal_le(n: u64, t: f64, p: f64) -> f64 {
    let mean = n as f64 * p;
    let sd = libm::sqrt(n as f64 * p * (1.0 - p));
    if sd == 0.0 {
        return if t >= mean { 1.0 } else { 0.0 };
    }
    stats::normal_cdf((t - mean) / sd)
}

/// Outcome of repeated encode/decode trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialSummary {
    pub trials: u64,
    pub errors: u64,
}

impl TrialSummary {
    pub fn error_rate(&self) -> f64 {
        self.errors as f64 / self.trials as f64
    }

    pub fn accuracy(&self) -> f64 {
        1.0 - self.error_rate()
    }
}

/// Runs `trials` independent transmissions of random message bits. Message
/// bits and per-trial seeds come from a dedicated stream of `seed`.
pub fn signaling_trials(
    strategy: &Strategy,
    kernel: &MemoryKernel,
    cfg: &SignalingConfig,
    trials: u64,
    seed: u64,
) -> Result<TrialSummary> {
    if trials == 0 {
        return Err(Error::Range {
            what: "trials",
            value: 0.0,
        });
    }
    let mut rng = stream_rng(seed, STREAM_TRIALS);
    let mut errors = 0;
    for _ in 0..trials {
        let message: u8 = rng.random_range(0..2);
        let trial_seed = rng.next_u64();
        let transcript = encode_run(strategy, kernel, cfg, message, trial_seed)?;
        if decode(&transcript, cfg).bit != message {
            errors += 1;
        }
    }
    Ok(TrialSummary { trials, errors })
}

/// Fraction of `trials` random message bits decoded wrongly.
pub fn bit_error_rate(
    strategy: &Strategy,
    kernel: &MemoryKernel,
    cfg: &SignalingConfig,
    trials: u64,
    seed: u64,
) -> Result<f64> {
    signaling_trials(strategy, kernel, cfg, trials, seed).map(|s| s.error_rate())
}

/// Failure probability used for the bands of [`marginalized_bias`].
pub const MARGINALIZED_DELTA: f64 = 0.01;

/// Averages Alice's previous-class-conditioned statistics over Bob's
/// current output, weighted by `p(b | y_current)` of `strategy`. Returns
/// `(alpha~, beta~)` for coarse classes 0 and 1. Fails with
/// [`Error::FineTuned`] when the two agree within their pooled bands.
pub fn marginalized_bias(
    g: &GEstimate,
    strategy: &Strategy,
    coarse: &Partition,
    x_current: u8,
    x_previous: u8,
    y_current: u8,
) -> Result<(f64, f64)> {
    if coarse.class_count() != 2 {
        return Err(Error::Structure("coarse partition must have two classes"));
    }
    let bob = strategy
        .induced_behavior()
        .marginal(Side::Bob)
        .map_err(|_| Error::Structure("strategy's Bob marginal depends on Alice's input"))?;
    let mut alpha = 0.0;
    let mut beta = 0.0;
    let mut band = 0.0;
    for b in 0..2u8 {
        let w = bob.get(b, y_current);
        if w == 0.0 {
            continue;
        }
        let (c0, z0) = g.class_frequency(coarse, 0, x_current, x_previous, y_current, b);
        let (c1, z1) = g.class_frequency(coarse, 1, x_current, x_previous, y_current, b);
        if c0 == 0 || c1 == 0 {
            return Err(Error::InsufficientData("no samples for a weighted output of Bob"));
        }
        alpha += w * ratio(z0, c0);
        beta += w * ratio(z1, c1);
        band += w * (stats::hoeffding_band(c0, MARGINALIZED_DELTA) + stats::hoeffding_band(c1, MARGINALIZED_DELTA));
    }
    if (alpha - beta).abs() <= band {
        return Err(Error::FineTuned { alpha, beta, band });
    }
    Ok((alpha, beta))
}

/// Distance and round interval for the light-cone comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperluminalParams {
    /// Meters.
    pub distance: f64,
    /// Seconds per round.
    pub tau: f64,
}

impl SuperluminalParams {
    pub fn new(distance: f64, tau: f64) -> Result<Self> {
        if !(distance > 0.0) {
            return Err(Error::Range {
                what: "distance",
                value: distance,
            });
        }
        if !(tau > 0.0) {
            return Err(Error::Range {
                what: "tau",
                value: tau,
            });
        }
        Ok(SuperluminalParams { distance, tau })
    }

    pub fn light_time(&self) -> f64 {
        self.distance / SPEED_OF_LIGHT
    }

    pub fn protocol_time(&self, n: u64) -> f64 {
        2.0 * n as f64 * self.tau
    }
}

/// True when the `2N` rounds finish before light crosses the distance.
pub fn superluminal_margin(params: &SuperluminalParams, n: u64) -> bool {
    params.light_time() > params.protocol_time(n)
}

/// Strategy and depth-1 kernel realizing an input-partition memory bias with
/// `p(a=0) = alpha` after Bob's even-round input 0 and `beta` after 1.
///
/// The strategy mixes the input-signaling PR model with a vertex where Alice
/// always answers one value, so that its memoryless `p(a=0 | x, y)` is the
/// midpoint `(alpha + beta) / 2`; the kernel then biases it by
/// `+-|beta - alpha| / 2`.
pub fn input_bias_realization(
    x_odd: u8,
    x_even: u8,
    y_odd: u8,
    alpha: f64,
    beta: f64,
) -> Result<(Strategy, MemoryKernel)> {
    validate_bias_pair(alpha, beta)?;
    let p0 = 0.5 * (alpha + beta);
    let delta = 0.5 * (beta - alpha).abs();
    let pr = Strategy::input_signaling();
    let strategy = if (p0 - 0.5).abs() < 1e-15 {
        pr
    } else {
        // weight of the PR component
        let pr_weight = if p0 < 0.5 { 2.0 * p0 } else { 2.0 - 2.0 * p0 };
        let (num, den) = stats::rational_approx(pr_weight, 1000);
        let realized = num as f64 / den as f64;
        if (realized - pr_weight).abs() > 1e-9 {
            return Err(Error::Configuration("bias midpoint needs a denominator above 1000"));
        }
        let constant = if p0 < 0.5 { 1 } else { 0 };
        let vertex = Strategy::deterministic([constant; 2], [0, 1], Partition::INPUT);
        Strategy::mixture(&[(pr, num), (vertex, den - num)])?
    };
    let config = BiasConfig {
        x_current: x_odd,
        x_previous: x_even,
        signal_current: y_odd,
        // the class of message 0 gets alpha
        alpha_class: if alpha < beta { 0 } else { 1 },
    };
    let kernel = MemoryKernel::biased(&strategy, config, &Partition::INPUT, delta)?;
    Ok((strategy, kernel))
}

/// Mixture `(1 - mu) PR + mu p_v` in the output-signaling model, with `p_v`
/// the vertex where Alice always answers 0 and Bob copies his input. `mu`
/// is given as `vertex_weight / (vertex_weight + pr_weight)`.
pub fn steerable_output_strategy(vertex_weight: u32, pr_weight: u32) -> Result<Strategy> {
    let vertex = Strategy::deterministic([0, 0], [0, 1], Partition::OUTPUT);
    Strategy::mixture(&[(vertex, vertex_weight), (Strategy::output_signaling(), pr_weight)])
}
