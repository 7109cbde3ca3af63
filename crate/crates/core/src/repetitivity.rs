//! Linear repetitivity diagnostics: the repetitivity function R(n) (the
//! least window length guaranteed to contain every length-n factor),
//! empirical bounds for the repetitivity constant, and the uniform pattern
//! frequency spread that witnesses unique ergodicity.

use crate::words::{distinct_window_starts, for_each_window_hash, ByteBudget, Generator, Word, WordsError};
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

/// Default source length for constant estimation.
pub const DEFAULT_SOURCE_LENGTH: usize = 1 << 20;

#[derive(Debug, Error)]
pub enum RepetitivityError {
    #[error(transparent)]
    Words(#[from] WordsError),
    #[error("source of length {source_len} cannot witness R({n}): {reason}")]
    UnsaturatedSource {
        n: usize,
        source_len: usize,
        reason: String,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Per-n repetitivity data.
#[derive(Clone, Debug, Serialize)]
pub struct RepetitivityEntry {
    pub n: usize,
    pub r: usize,
    pub ratio: f64,
}

/// R(n) over a list of n values, with the empirical lower bound for the
/// repetitivity constant as `max_ratio`.
#[derive(Clone, Debug, Serialize)]
pub struct RepetitivityReport {
    pub entries: Vec<RepetitivityEntry>,
    pub max_ratio: f64,
    pub window_source_length: usize,
}

/// Extremal sliding-window frequencies of the pattern `v` at window length L.
#[derive(Clone, Debug, Serialize)]
pub struct FrequencySpread {
    pub pattern: Word,
    pub window: usize,
    pub max_freq: f64,
    pub min_freq: f64,
    pub gap: f64,
}

/// Least L such that every length-L window of `w` contains every length-n
/// factor of `w`. Exact: all windows slide by one position.
///
/// For a factor with occurrence starts p_1 < ... < p_k in w the least
/// covering length is max(p_1 + n, |w| - p_k, max_i (p_{i+1} - p_i) + n - 1);
/// R(n) is the maximum over factors.
pub fn repetitivity_function(w: &Word, n: usize) -> Result<usize, RepetitivityError> {
    if n == 0 || n > w.len() {
        return Err(RepetitivityError::InvalidParameter(format!(
            "need 1 <= n <= |w|, got n={n}, |w|={}",
            w.len()
        )));
    }
    let total = w.len();
    // one rolling-hash pass: per distinct window, track occurrence statistics
    let mut index_of: HashMap<(u64, u64), usize> = HashMap::new();
    let mut first: Vec<usize> = Vec::new();
    let mut last: Vec<usize> = Vec::new();
    let mut max_gap: Vec<usize> = Vec::new();
    for_each_window_hash(w.symbols(), n, |start, key| {
        match index_of.get(&key) {
            Some(&i) => {
                let gap = start - last[i];
                if gap > max_gap[i] {
                    max_gap[i] = gap;
                }
                last[i] = start;
            }
            None => {
                index_of.insert(key, first.len());
                first.push(start);
                last.push(start);
                max_gap.push(0);
            }
        }
    });
    let mut r = n;
    for i in 0..first.len() {
        let head = first[i] + n;
        let tail = total - last[i];
        let gap = if max_gap[i] > 0 { max_gap[i] + n - 1 } else { 0 };
        r = r.max(head).max(tail).max(gap);
    }
    Ok(r)
}

/// R(n) of `w` measured against an externally supplied factor set. A factor
/// absent from `w` means the source is too short to witness the value.
pub fn repetitivity_against(
    w: &Word,
    n: usize,
    factors: &std::collections::BTreeSet<Word>,
) -> Result<usize, RepetitivityError> {
    let own: std::collections::BTreeSet<Word> = distinct_window_starts(w.symbols(), n)
        .iter()
        .map(|&s| w.factor(s, n))
        .collect();
    for f in factors {
        if !own.contains(f) {
            return Err(RepetitivityError::UnsaturatedSource {
                n,
                source_len: w.len(),
                reason: format!("factor {f} of the language does not occur in the source"),
            });
        }
    }
    if &own != factors {
        return Err(RepetitivityError::UnsaturatedSource {
            n,
            source_len: w.len(),
            reason: "source contains factors outside the supplied set".into(),
        });
    }
    repetitivity_function(w, n)
}

/// Options for [`lr_constant_estimate`].
#[derive(Clone, Copy, Debug)]
pub struct LrEstimateOptions {
    /// Length of the source prefix the R values are measured on.
    pub source_length: usize,
    pub budget: ByteBudget,
}

impl Default for LrEstimateOptions {
    fn default() -> Self {
        LrEstimateOptions {
            source_length: DEFAULT_SOURCE_LENGTH,
            budget: ByteBudget::default(),
        }
    }
}

/// Tabulate R(n) and R(n)/n over `n_list` on a generator prefix of
/// `opts.source_length` letters and confirm each entry against the doubled
/// prefix. Any entry or factor set that changes under doubling raises the
/// unsaturated-source error: the value would be a prefix artifact, not a
/// property of the generated word.
pub fn lr_constant_estimate(
    generator: &Generator,
    n_list: &[usize],
    opts: LrEstimateOptions,
) -> Result<RepetitivityReport, RepetitivityError> {
    if n_list.is_empty() {
        return Err(RepetitivityError::InvalidParameter(
            "n_list must be nonempty".into(),
        ));
    }
    let source = generator.prefix(opts.source_length, opts.budget)?;
    let confirm = generator.prefix(opts.source_length * 2, opts.budget)?;
    let mut entries = Vec::with_capacity(n_list.len());
    let mut max_ratio = 0.0f64;
    for &n in n_list {
        let r = repetitivity_function(&source, n)?;
        let r2 = repetitivity_function(&confirm, n)?;
        let set1: std::collections::BTreeSet<Word> = distinct_window_starts(source.symbols(), n)
            .iter()
            .map(|&s| source.factor(s, n))
            .collect();
        let set2: std::collections::BTreeSet<Word> = distinct_window_starts(confirm.symbols(), n)
            .iter()
            .map(|&s| confirm.factor(s, n))
            .collect();
        if r != r2 || set1 != set2 {
            return Err(RepetitivityError::UnsaturatedSource {
                n,
                source_len: source.len(),
                reason: format!(
                    "doubling the source changes R({n}) from {r} to {r2} or alters the factor set"
                ),
            });
        }
        let ratio = r as f64 / n as f64;
        max_ratio = max_ratio.max(ratio);
        entries.push(RepetitivityEntry { n, r, ratio });
    }
    Ok(RepetitivityReport {
        entries,
        max_ratio,
        window_source_length: source.len(),
    })
}

/// Max and min over all length-L windows of `w` of the occurrence frequency
/// of `v` (occurrence starts per window position, divided by L).
pub fn frequency_spread(
    w: &Word,
    v: &Word,
    window: usize,
) -> Result<FrequencySpread, RepetitivityError> {
    if v.is_empty() {
        return Err(RepetitivityError::Words(WordsError::EmptyPattern));
    }
    if window < v.len() {
        return Err(RepetitivityError::InvalidParameter(format!(
            "window {window} shorter than the pattern ({})",
            v.len()
        )));
    }
    if window > w.len() {
        return Err(RepetitivityError::InvalidParameter(format!(
            "word of length {} has no window of length {window}",
            w.len()
        )));
    }
    let starts = crate::words::kmp_positions(v.symbols(), w.symbols());
    // prefix sums over occurrence indicators
    let mut is_occ = vec![0u32; w.len() + 1];
    for &p in &starts {
        is_occ[p] = 1;
    }
    let mut prefix_counts = vec![0usize; w.len() + 2];
    for i in 0..=w.len() {
        prefix_counts[i + 1] = prefix_counts[i] + is_occ[i] as usize;
    }
    let mut min_count = usize::MAX;
    let mut max_count = 0usize;
    let span = window - v.len() + 1; // occurrence starts fitting in the window
    for t in 0..=w.len() - window {
        let c = prefix_counts[t + span] - prefix_counts[t];
        min_count = min_count.min(c);
        max_count = max_count.max(c);
    }
    let max_freq = max_count as f64 / window as f64;
    let min_freq = min_count as f64 / window as f64;
    Ok(FrequencySpread {
        pattern: v.clone(),
        window,
        max_freq,
        min_freq,
        gap: max_freq - min_freq,
    })
}
