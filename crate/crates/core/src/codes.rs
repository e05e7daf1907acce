//! Explicit (b,k)-hash codes: verification, small exhaustive searches and a
//! plain-text file format.
//!
//! A code is a set of words over `{1, ..., b}`; it is a (b,k)-hash code when
//! every `k` distinct words have a coordinate where their symbols are pairwise
//! distinct.
//!
//! File format: a header line `b n`, then one word per line. For `b <= 35`
//! a word may be written as `n` characters `1-9a-z` (values 1 to 35); any
//! word may instead be `n` whitespace-separated decimal symbols. Blank lines
//! and lines starting with `#` are skipped.

use std::collections::HashSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{params, Error, Result};
use crate::simplex::binomial;

/// Largest number of `k`-subsets [`verify_hash_code`] will examine.
pub const SUBSET_GUARD: u128 = 10_000_000;
/// Largest word space scanned by the greedy search.
pub const GREEDY_GUARD: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Code {
    b: usize,
    n: usize,
    words: Vec<Vec<u8>>,
}

impl Code {
    pub fn new(b: usize, n: usize, words: Vec<Vec<u8>>) -> Result<Self> {
        if !(1..=255).contains(&b) || n == 0 || n > 64 {
            return Err(params(format!("need 1 <= b <= 255 and 1 <= n <= 64, got b={b}, n={n}")));
        }
        let mut seen = HashSet::new();
        for (i, w) in words.iter().enumerate() {
            if w.len() != n {
                return Err(params(format!("word {} has length {}, expected {n}", i + 1, w.len())));
            }
            if let Some(s) = w.iter().find(|&&s| s == 0 || s as usize > b) {
                return Err(params(format!("word {} has symbol {s} outside 1..={b}", i + 1)));
            }
            if !seen.insert(w.as_slice()) {
                return Err(params(format!("word {} is a duplicate", i + 1)));
            }
        }
        Ok(Self { b, n, words })
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[Vec<u8>] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// `log2 |C| / n` (zero for the empty code).
    pub fn rate(&self) -> f64 {
        if self.words.is_empty() {
            0.0
        } else {
            (self.words.len() as f64).log2() / self.n as f64
        }
    }

    /// The code restricted to the listed word indices.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            b: self.b,
            n: self.n,
            words: indices.iter().map(|&i| self.words[i].clone()).collect(),
        }
    }

    /// Applies a coordinate permutation and one symbol relabeling per coordinate
    /// (`relabel[c][s - 1]` is the new symbol for `s` at coordinate `c`).
    pub fn transformed(&self, coord_perm: &[usize], relabel: &[Vec<u8>]) -> Self {
        let words = self
            .words
            .iter()
            .map(|w| {
                coord_perm
                    .iter()
                    .enumerate()
                    .map(|(c, &src)| relabel[c][w[src] as usize - 1])
                    .collect()
            })
            .collect();
        Self {
            b: self.b,
            n: self.n,
            words,
        }
    }

    pub fn format_word(&self, w: &[u8]) -> String {
        if self.b <= 35 {
            w.iter()
                .map(|&s| char::from_digit(s as u32, 36).expect("symbol below 36"))
                .collect()
        } else {
            w.iter().map(u8::to_string).collect::<Vec<_>>().join(" ")
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.b, self.n);
        for w in &self.words {
            writeln!(out, "{}", self.format_word(w)).expect("string write");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header `b n`".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let bad_header = || Error::Parse {
            line: hline,
            message: format!("header must be `b n`, got `{header}`"),
        };
        let [b, n] = fields.as_slice() else {
            return Err(bad_header());
        };
        let (b, n): (usize, usize) = (b.parse().map_err(|_| bad_header())?, n.parse().map_err(|_| bad_header())?);
        if !(1..=255).contains(&b) || !(1..=64).contains(&n) {
            return Err(Error::Parse {
                line: hline,
                message: format!("need 1 <= b <= 255 and 1 <= n <= 64, got b={b}, n={n}"),
            });
        }
        let mut words = Vec::new();
        for (line, l) in lines {
            let err = |message: String| Error::Parse { line, message };
            let word: Vec<u8> = if l.contains(char::is_whitespace) || (b > 35 && n == 1) {
                l.split_whitespace()
                    .map(|t| t.parse::<u8>().map_err(|_| err(format!("bad symbol `{t}`"))))
                    .collect::<Result<_>>()?
            } else if b <= 35 {
                l.chars()
                    .map(|c| {
                        c.to_digit(36)
                            .filter(|&d| d > 0)
                            .map(|d| d as u8)
                            .ok_or_else(|| err(format!("bad symbol `{c}`")))
                    })
                    .collect::<Result<_>>()?
            } else {
                return Err(err("alphabets above 35 need whitespace-separated symbols".into()));
            };
            if word.len() != n {
                return Err(err(format!("word has length {}, expected {n}", word.len())));
            }
            if let Some(s) = word.iter().find(|&&s| s == 0 || s as usize > b) {
                return Err(err(format!("symbol {s} outside 1..={b}")));
            }
            words.push(word);
        }
        Code::new(b, n, words).map_err(|e| Error::Parse {
            line: hline,
            message: e.to_string(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    /// Indices (into the code's words) of `k` words with no separating coordinate.
    Counterexample(Vec<usize>),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Coordinates of `alive` where `w` differs from every word in `picked`.
fn still_separating(picked: &[&[u8]], alive: u64, w: &[u8]) -> u64 {
    let mut mask = alive;
    let mut bits = alive;
    while bits != 0 {
        let c = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        if picked.iter().any(|p| p[c] == w[c]) {
            mask &= !(1u64 << c);
        }
    }
    mask
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Depth-first search for a bad subset extending `chosen` with indices in
/// `from..`. Returns the first bad set in lexicographic order.
fn find_bad(
    words: &[Vec<u8>],
    k: usize,
    chosen: &mut Vec<usize>,
    alive: u64,
    from: usize,
) -> Option<Vec<usize>> {
    if alive == 0 {
        // any completion is bad
        let mut out = chosen.clone();
        let mut i = from;
        while out.len() < k && i < words.len() {
            out.push(i);
            i += 1;
        }
        let mut i = 0;
        while out.len() < k {
            if !out.contains(&i) {
                out.push(i);
            }
            i += 1;
        }
        out.sort_unstable();
        return Some(out);
    }
    if chosen.len() == k {
        return None;
    }
    let need = k - chosen.len();
    let picked: Vec<&[u8]> = chosen.iter().map(|&c| words[c].as_slice()).collect();
    for i in from..=words.len().saturating_sub(need) {
        let next = still_separating(&picked, alive, &words[i]);
        chosen.push(i);
        let found = find_bad(words, k, chosen, next, i + 1);
        chosen.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Checks the (b,k)-hash property; on failure returns one violating set of words.
pub fn verify_hash_code(code: &Code, k: usize) -> Result<Verdict> {
    if k > code.b {
        return Err(params(format!("k={k} exceeds the alphabet size b={}", code.b)));
    }
    if k < 2 {
        return Err(params(format!("k must be at least 2, got {k}")));
    }
    let m = code.len();
    if m < k {
        return Ok(Verdict::Holds);
    }
    let subsets = binomial(m as u128, k as u128);
    if subsets > SUBSET_GUARD {
        return Err(Error::ResourceGuard(format!(
            "{subsets} subsets of size {k} exceed {SUBSET_GUARD}"
        )));
    }
    let words = code.words();
    let all = full_mask(code.n);
    let bad = (0..=m - k).into_par_iter().find_map_first(|first| {
        let mut chosen = vec![first];
        find_bad(words, k, &mut chosen, all, first + 1)
    });
    Ok(match bad {
        Some(set) => Verdict::Counterexample(set),
        None => Verdict::Holds,
    })
}

/// Whether adding `w` to the hash code `chosen` keeps the property.
fn compatible(words: &[Vec<u8>], chosen: &[usize], k: usize, w: &[u8], n: usize) -> bool {
    fn rec<'a>(
        words: &'a [Vec<u8>],
        chosen: &[usize],
        picked: &mut Vec<&'a [u8]>,
        need: usize,
        alive: u64,
        from: usize,
    ) -> bool {
        if alive == 0 {
            return false;
        }
        if need == 0 {
            return true;
        }
        for i in from..=chosen.len().saturating_sub(need) {
            let w = words[chosen[i]].as_slice();
            let next = still_separating(picked, alive, w);
            picked.push(w);
            let ok = rec(words, chosen, picked, need - 1, next, i + 1);
            picked.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    if chosen.len() < k - 1 {
        return true;
    }
    // every (k-1)-subset of the code together with w
    let mut picked = vec![w];
    rec(words, chosen, &mut picked, k - 1, full_mask(n), 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchMode {
    Exact,
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub code: Code,
    pub mode: SearchMode,
    /// Search-tree nodes visited (exact) or words examined (greedy).
    pub nodes: u64,
}

fn word_at(mut index: u128, b: usize, n: usize) -> Vec<u8> {
    let mut w = vec![1u8; n];
    for c in (0..n).rev() {
        w[c] = (index % b as u128) as u8 + 1;
        index /= b as u128;
    }
    w
}

/// Largest (b,k)-hash code of length `n`.
///
/// When the `b^n` word space is within `budget`, an exact branch-and-bound
/// runs (first word fixed to `1...1`, words added in lexicographic order) and
/// fails if it visits more than `budget` nodes. Otherwise a greedy pass in
/// lexicographic order returns an inextensible code.
pub fn max_code_search(b: usize, k: usize, n: usize, budget: u64) -> Result<SearchOutcome> {
    if k < 2 || k > b || b > 255 || n == 0 || n > 64 {
        return Err(params(format!(
            "need 2 <= k <= b <= 255 and 1 <= n <= 64, got b={b}, k={k}, n={n}"
        )));
    }
    let space = (b as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if space <= budget as u128 {
        exact_search(b, k, n, space as usize, budget)
    } else {
        greedy_search(b, k, n, space)
    }
}

fn exact_search(b: usize, k: usize, n: usize, space: usize, budget: u64) -> Result<SearchOutcome> {
    let words: Vec<Vec<u8>> = (0..space as u128).map(|i| word_at(i, b, n)).collect();
    struct State<'a> {
        words: &'a [Vec<u8>],
        k: usize,
        n: usize,
        best: Vec<usize>,
        nodes: u64,
        budget: u64,
    }
    fn branch(st: &mut State, chosen: &mut Vec<usize>, candidates: &[usize]) -> Result<()> {
        st.nodes += 1;
        if st.nodes > st.budget {
            return Err(Error::ResourceGuard(format!(
                "exact search exceeded {} nodes",
                st.budget
            )));
        }
        if chosen.len() > st.best.len() {
            st.best = chosen.clone();
        }
        for (pos, &c) in candidates.iter().enumerate() {
            if chosen.len() + candidates.len() - pos <= st.best.len() {
                break;
            }
            chosen.push(c);
            let rest: Vec<usize> = candidates[pos + 1..]
                .iter()
                .copied()
                .filter(|&d| compatible(st.words, chosen, st.k, &st.words[d], st.n))
                .collect();
            branch(st, chosen, &rest)?;
            chosen.pop();
        }
        Ok(())
    }
    let mut st = State {
        words: &words,
        k,
        n,
        best: Vec::new(),
        nodes: 0,
        budget,
    };
    let mut chosen = vec![0];
    let candidates: Vec<usize> = (1..space).collect();
    branch(&mut st, &mut chosen, &candidates)?;
    let code = Code::new(b, n, st.best.iter().map(|&i| words[i].clone()).collect())?;
    Ok(SearchOutcome {
        code,
        mode: SearchMode::Exact,
        nodes: st.nodes,
    })
}

fn greedy_search(b: usize, k: usize, n: usize, space: u128) -> Result<SearchOutcome> {
    if space > GREEDY_GUARD {
        return Err(Error::ResourceGuard(format!(
            "{b}^{n} words exceed the greedy scan limit {GREEDY_GUARD}"
        )));
    }
    let mut words = Vec::new();
    let mut chosen = Vec::new();
    for i in 0..space {
        let w = word_at(i, b, n);
        if compatible(&words, &chosen, k, &w, n) {
            chosen.push(words.len());
            words.push(w);
        }
    }
    Ok(SearchOutcome {
        code: Code::new(b, n, words)?,
        mode: SearchMode::Greedy,
        nodes: space as u64,
    })
}

/// Whether some word outside the code can be added without breaking the property.
pub fn is_extensible(code: &Code, k: usize) -> bool {
    let present: HashSet<&[u8]> = code.words().iter().map(Vec::as_slice).collect();
    let idx: Vec<usize> = (0..code.len()).collect();
    let space = (code.b as u128).pow(code.n as u32);
    (0..space)
        .map(|i| word_at(i, code.b, code.n))
        .filter(|w| !present.contains(w.as_slice()))
        .any(|w| compatible(code.words(), &idx, k, &w, code.n))
}
