use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::rbm::{fit_rbm, sample_with, ParamId, RbmParams};
use crate::world::restrict;

/// One estimate of one parameter from one seed's `m`-restriction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub m: usize,
    pub seed: u64,
    pub param: ParamId,
    pub value: f64,
}

/// Monte Carlo summary of one parameter at one `m`. `count` is the number of
/// seeds whose restriction observed the parameter's row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSummary {
    pub m: usize,
    pub param: ParamId,
    pub truth: f64,
    pub count: usize,
    pub mean: f64,
    pub std_error: f64,
    /// `false` when fewer than two estimates exist.
    pub tested: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub truth: RbmParams,
    pub n: usize,
    pub m_list: Vec<usize>,
    pub seeds: Vec<u64>,
    /// Sorted by `(m, seed, param)`.
    pub estimates: Vec<Estimate>,
    /// Sorted by `(m, param)`.
    pub summaries: Vec<ParamSummary>,
}

impl ConsistencyReport {
    /// Every tested parameter is within three standard errors of its truth.
    pub fn pass(&self) -> bool {
        self.summaries.iter().all(|s| s.pass)
    }
}

/// For every seed, samples a world of size `n` from `truth`, restricts it to
/// a uniformly random `m`-subset for each `m`, and refits the RBM there.
///
/// The world is drawn from the seed's stream 0 and the subsets from stream 1,
/// so adding values to `m_list` does not change the sampled worlds.
pub fn subsample_consistency_experiment(
    truth: &RbmParams,
    n: usize,
    m_list: &[usize],
    seeds: &[u64],
) -> Result<ConsistencyReport> {
    if let Some(&m) = m_list.iter().find(|&&m| m == 0 || m > n) {
        return Err(Error::InvalidArgument(alloc::format!(
            "subset size {m} outside 1..={n}"
        )));
    }
    let lang = truth.language();
    let mut estimates = Vec::new();
    for &seed in seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let world = sample_with(truth, n, &mut rng);
        let mut subsets = ChaCha8Rng::seed_from_u64(seed);
        subsets.set_stream(1);
        for &m in m_list {
            let mut subset = index::sample(&mut subsets, n, m).into_vec();
            subset.sort_unstable();
            let fit = fit_rbm(lang, &restrict(lang, &world, &subset)?);
            for (param, value, observed) in fit.entries() {
                if observed {
                    estimates.push(Estimate {
                        m,
                        seed,
                        param,
                        value,
                    });
                }
            }
        }
    }
    estimates.sort_by_key(|e| (e.m, e.seed, e.param));

    let truths: BTreeMap<ParamId, f64> = truth
        .entries()
        .into_iter()
        .map(|(p, v, _)| (p, v))
        .collect();
    let mut groups: BTreeMap<(usize, ParamId), Vec<f64>> = BTreeMap::new();
    for &m in m_list {
        for &param in truths.keys() {
            groups.insert((m, param), Vec::new());
        }
    }
    for e in &estimates {
        groups.get_mut(&(e.m, e.param)).unwrap().push(e.value);
    }
    let summaries = groups
        .into_iter()
        .map(|((m, param), values)| summarize(m, param, truths[&param], &values))
        .collect();
    Ok(ConsistencyReport {
        truth: truth.clone(),
        n,
        m_list: m_list.to_vec(),
        seeds: seeds.to_vec(),
        estimates,
        summaries,
    })
}

fn summarize(m: usize, param: ParamId, truth: f64, values: &[f64]) -> ParamSummary {
    let count = values.len();
    let mean = if count == 0 {
        f64::NAN
    } else {
        values.iter().sum::<f64>() / count as f64
    };
    let std_error = if count < 2 {
        f64::NAN
    } else {
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1) as f64;
        sqrt(var / count as f64)
    };
    let tested = count >= 2;
    let pass = !tested || (mean - truth).abs() <= 3.0 * std_error + 1e-12;
    ParamSummary {
        m,
        param,
        truth,
        count,
        mean,
        std_error,
        tested,
        pass,
    }
}
