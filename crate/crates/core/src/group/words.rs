use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::moebius::MoebiusTransform;

use super::GroupSpec;

pub const DEFAULT_BUDGET: usize = 5_000_000;

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter { inverse: !self.inverse, ..self }
    }

    pub fn transform(self, group: &GroupSpec) -> MoebiusTransform {
        let g = group.generators()[self.generator];
        if self.inverse {
            g.inverse()
        } else {
            g
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // a, b, c, ... with capitals for inverses
        let base = (b'a' + (self.generator % 26) as u8) as char;
        if self.inverse {
            write!(f, "{}", base.to_ascii_uppercase())
        } else {
            write!(f, "{base}")
        }
    }
}

#[derive(Debug, Clone)]
pub struct WordEntry {
    pub letters: Vec<Letter>,
    /// Left-to-right product of the letters.
    pub element: MoebiusTransform,
}

impl WordEntry {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[1] != w[0].inverse())
    }

    pub fn spelling(&self) -> String {
        if self.letters.is_empty() {
            return "e".into();
        }
        self.letters.iter().map(|l| l.to_string()).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerationOptions {
    pub budget: usize,
    /// Two elements closer than this coefficientwise (up to sign) are the same.
    pub dedup_tol: f64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { budget: DEFAULT_BUDGET, dedup_tol: 1e-10 }
    }
}

/// `1 + Σ_{k=1..L} 2g(2g-1)^{k-1}`: the number of reduced words of length at
/// most `max_len` in a free group of rank `rank`.
pub fn free_word_count(rank: usize, max_len: usize) -> u128 {
    let (r, mut total, mut layer) = (rank as u128, 1u128, 0u128);
    for k in 1..=max_len {
        layer = if k == 1 { 2 * r } else { layer * (2 * r - 1) };
        total += layer;
    }
    total
}

/// Sign-invariant scalar used to bucket elements before the full comparison.
fn dedup_key(t: &MoebiusTransform) -> f64 {
    let [a, b, c, d] = t.coefficients();
    0.754_877_666 * a.norm_sqr()
        + 0.569_840_291 * b.norm_sqr()
        + 0.324_717_957 * c.norm_sqr()
        + 0.192_450_089 * d.norm_sqr()
        + 0.843_108_622 * (b * b).re
        + 0.618_033_989 * (c * c).im
        + 0.414_213_562 * (a * b.conj()).re
        + 0.271_828_183 * (c * d.conj()).im
}

/// Index of kept elements, ordered by [`dedup_key`].
struct DedupIndex {
    tol: f64,
    by_key: BTreeMap<KeyF64, Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct KeyF64(f64);

impl Eq for KeyF64 {}

impl PartialOrd for KeyF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KeyF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl DedupIndex {
    fn new(tol: f64) -> Self {
        DedupIndex { tol, by_key: BTreeMap::new() }
    }

    fn contains(&self, t: &MoebiusTransform, entries: &[WordEntry]) -> bool {
        let key = dedup_key(t);
        // |Δkey| <= Σw · 2 (M + tol) · tol for coefficientwise perturbations of size tol
        let spread = 8.0 * (t.scale() + 1.0) * self.tol;
        self.by_key
            .range(KeyF64(key - spread)..=KeyF64(key + spread))
            .flat_map(|(_, ids)| ids)
            .any(|&i| entries[i].element.approx_eq(t, self.tol))
    }

    fn insert(&mut self, t: &MoebiusTransform, id: usize) {
        self.by_key.entry(KeyF64(dedup_key(t))).or_default().push(id);
    }
}

/// All freely reduced words of length at most `max_len`, breadth first,
/// dropping words whose element coincides with one already listed.
///
/// Each level is extended in parallel and merged in a fixed order, so the
/// output is deterministic.
pub fn enumerate_words(group: &GroupSpec, max_len: usize, opts: &EnumerationOptions) -> Result<Vec<WordEntry>> {
    let letters: Vec<Letter> = (0..group.rank())
        .flat_map(|g| [Letter { generator: g, inverse: false }, Letter { generator: g, inverse: true }])
        .collect();
    let transforms: Vec<MoebiusTransform> = letters.iter().map(|l| l.transform(group)).collect();

    let mut entries = vec![WordEntry { letters: Vec::new(), element: MoebiusTransform::IDENTITY }];
    let mut index = DedupIndex::new(opts.dedup_tol);
    index.insert(&MoebiusTransform::IDENTITY, 0);
    if opts.budget == 0 {
        return Err(Error::EnumerationBudget { budget: opts.budget });
    }

    let mut frontier: Vec<usize> = vec![0];
    for _ in 0..max_len {
        let candidates: Vec<WordEntry> = frontier
            .par_iter()
            .flat_map_iter(|&id| {
                let parent = &entries[id];
                let last = parent.letters.last().copied();
                letters
                    .iter()
                    .zip(&transforms)
                    .filter(move |(l, _)| last.is_none_or(|x| **l != x.inverse()))
                    .map(move |(l, t)| {
                        let mut word = parent.letters.clone();
                        word.push(*l);
                        WordEntry { letters: word, element: parent.element.compose(t) }
                    })
                    .collect::<Vec<_>>()
            })
            .collect();

        let mut next = Vec::new();
        for cand in candidates {
            if index.contains(&cand.element, &entries) {
                continue;
            }
            if entries.len() >= opts.budget {
                return Err(Error::EnumerationBudget { budget: opts.budget });
            }
            let id = entries.len();
            index.insert(&cand.element, id);
            entries.push(cand);
            next.push(id);
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(entries)
}
