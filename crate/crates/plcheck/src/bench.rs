//! Benchmark runner: normalization is pre-computed (phase one), then the
//! timed region covers only the structural subsumption checks. Latencies are
//! sampled per check with the monotonic clock; checks are pure, so a worker
//! pool just splits the pairing list with no shared mutable state.

use std::time::Instant;

use plcheck_core::engine::check_compliance_normalized;
use plcheck_core::normalize::{normalize_full, NormalSimplePolicy};
use plcheck_core::workload::Workload;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct BenchResult {
    pub profile: String,
    pub seed: u64,
    pub parallelism: usize,
    pub checks: usize,
    /// Phase-one (normalization) time, excluded from the timed region.
    pub phase1_ms: f64,
    pub wall_time_s: f64,
    pub mean_us: f64,
    pub median_us: f64,
    pub p99_us: f64,
    pub checks_per_sec: f64,
    pub compliant: usize,
    pub non_compliant: usize,
    /// Checks whose verdict differed from the constructed ground truth
    /// (the benchmark doubles as a correctness corpus; this must be zero).
    pub ground_truth_mismatches: usize,
    /// Seed, profile hash and ontology fingerprint, hex-joined.
    pub workload_fingerprint: String,
}

fn percentile(sorted: &[u64], p: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let rank = ((sorted.len() as f64 * p).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1] as f64 / 1_000.0
}

/// Run the workload's pairing list. `warmup` checks run untimed first;
/// `parallelism` workers split the timed region.
pub fn run_bench(workload: &Workload, warmup: usize, parallelism: usize) -> BenchResult {
    let voc = &workload.vocabulary;
    let parallelism = parallelism.max(1);

    let phase1_start = Instant::now();
    let business: Vec<Vec<NormalSimplePolicy>> = workload
        .business
        .iter()
        .map(|p| normalize_full(voc, p).expect("workload policies normalize"))
        .collect();
    let consents: Vec<Vec<NormalSimplePolicy>> = workload
        .consents
        .iter()
        .map(|p| normalize_full(voc, p).expect("workload policies normalize"))
        .collect();
    let phase1_ms = phase1_start.elapsed().as_secs_f64() * 1_000.0;

    let run_pair = |i: usize| -> bool {
        let pair = &workload.pairs[i];
        check_compliance_normalized(voc, &business[pair.business], &consents[pair.consent])
            .expect("same vocabulary on both sides")
            .verdict
            .is_compliant()
    };

    for i in 0..warmup {
        std::hint::black_box(run_pair(i % workload.pairs.len()));
    }

    let n = workload.pairs.len();
    let mut verdicts = vec![false; n];
    let mut latencies_ns = vec![0u64; n];

    let wall_start = Instant::now();
    if parallelism == 1 {
        for i in 0..n {
            let t = Instant::now();
            verdicts[i] = run_pair(i);
            latencies_ns[i] = t.elapsed().as_nanos() as u64;
        }
    } else {
        let chunk = n.div_ceil(parallelism);
        std::thread::scope(|scope| {
            let mut verdict_rest: &mut [bool] = &mut verdicts;
            let mut latency_rest: &mut [u64] = &mut latencies_ns;
            let mut offset = 0;
            while offset < n {
                let take = chunk.min(n - offset);
                let (v_head, v_tail) = verdict_rest.split_at_mut(take);
                let (l_head, l_tail) = latency_rest.split_at_mut(take);
                verdict_rest = v_tail;
                latency_rest = l_tail;
                let start = offset;
                scope.spawn(move || {
                    for (k, (v, l)) in v_head.iter_mut().zip(l_head.iter_mut()).enumerate() {
                        let t = Instant::now();
                        *v = run_pair(start + k);
                        *l = t.elapsed().as_nanos() as u64;
                    }
                });
                offset += take;
            }
        });
    }
    let wall_time_s = wall_start.elapsed().as_secs_f64();

    let compliant = verdicts.iter().filter(|&&v| v).count();
    let mismatches = workload
        .pairs
        .iter()
        .zip(&verdicts)
        .filter(|(pair, &v)| pair.expected_compliant != v)
        .count();

    let mut sorted = latencies_ns.clone();
    sorted.sort_unstable();
    let mean_us = sorted.iter().sum::<u64>() as f64 / sorted.len() as f64 / 1_000.0;

    BenchResult {
        profile: workload.profile.name.clone(),
        seed: workload.profile.seed,
        parallelism,
        checks: n,
        phase1_ms,
        wall_time_s,
        mean_us,
        median_us: percentile(&sorted, 0.5),
        p99_us: percentile(&sorted, 0.99),
        checks_per_sec: n as f64 / wall_time_s,
        compliant,
        non_compliant: n - compliant,
        ground_truth_mismatches: mismatches,
        workload_fingerprint: format!(
            "{:016x}-{:016x}-{:016x}",
            workload.profile.seed,
            workload.profile.hash(),
            voc.fingerprint()
        ),
    }
}
