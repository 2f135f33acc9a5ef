//! Counting quasimorphisms on free Coxeter groups `Z/2 * ... * Z/2`.
//!
//! Letters are 0-based generator indices and print as `a`, `b`, `c`, ...

use std::fmt;

use num_rational::Ratio;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::par_map;

/// A reduced word: no two equal adjacent letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeCoxeterWord {
    letters: Vec<usize>,
}

impl FreeCoxeterWord {
    pub fn identity() -> Self {
        Self { letters: Vec::new() }
    }

    /// Parses letters `a`, `b`, ... (whitespace ignored) and reduces.
    pub fn parse(text: &str, alphabet: usize) -> Result<Self> {
        let letters = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                if c.is_ascii_lowercase() {
                    Ok(c as usize - 'a' as usize)
                } else {
                    Err(Error::Malformed(format!("bad letter {c:?}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        reduce_word(&letters, alphabet)
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Every generator is an involution, so the inverse is the reversal.
    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut k = 0;
        let a = &self.letters;
        let b = &rhs.letters;
        while k < a.len() && k < b.len() && a[a.len() - 1 - k] == b[k] {
            k += 1;
        }
        let mut letters = a[..a.len() - k].to_vec();
        letters.extend_from_slice(&b[k..]);
        Self { letters }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut out = Self::identity();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Cyclically reduced: first and last letters differ (or length at most 1).
    pub fn is_cyclically_reduced(&self) -> bool {
        self.letters.len() <= 1 || self.letters.first() != self.letters.last()
    }
}

impl fmt::Display for FreeCoxeterWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{}", letter_name(l))?;
        }
        Ok(())
    }
}

fn letter_name(l: usize) -> char {
    if l < 26 {
        (b'a' + l as u8) as char
    } else {
        '?'
    }
}

/// Cancels equal adjacent pairs until none remain.
pub fn reduce_word(letters: &[usize], alphabet: usize) -> Result<FreeCoxeterWord> {
    let mut out: Vec<usize> = Vec::with_capacity(letters.len());
    for &l in letters {
        if l >= alphabet {
            return Err(Error::LetterOutOfRange { letter: l, alphabet });
        }
        if out.last() == Some(&l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Ok(FreeCoxeterWord { letters: out })
}

fn occurrences(pattern: &[usize], word: &[usize]) -> i64 {
    if pattern.len() > word.len() {
        return 0;
    }
    word.windows(pattern.len()).filter(|w| *w == pattern).count() as i64
}

/// `H_w(g)`: overlapping occurrences of `w` in `g` minus those of `w^-1`.
pub fn counting_qm(w: &FreeCoxeterWord, g: &FreeCoxeterWord) -> Result<i64> {
    if w.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let inv = w.inverse();
    Ok(occurrences(&w.letters, &g.letters) - occurrences(&inv.letters, &g.letters))
}

/// All reduced words of length at most `max_len`, shortlex ordered.
pub fn reduced_words(alphabet: usize, max_len: usize) -> Vec<FreeCoxeterWord> {
    let mut out = vec![FreeCoxeterWord::identity()];
    let mut level = vec![FreeCoxeterWord::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &level {
            for l in 0..alphabet {
                if w.letters.last() != Some(&l) {
                    let mut x = w.letters.clone();
                    x.push(l);
                    next.push(FreeCoxeterWord { letters: x });
                }
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

fn count_reduced(alphabet: usize, max_len: usize) -> u128 {
    let mut total: u128 = 1;
    let mut level: u128 = 1;
    for i in 0..max_len {
        level = level.saturating_mul(if i == 0 { alphabet as u128 } else { alphabet as u128 - 1 });
        total = total.saturating_add(level);
    }
    total
}

/// Largest number of pairs the exhaustive window search will visit.
pub const DEFAULT_PAIR_CAP: u128 = 50_000_000;

/// Exhaustive window maximum of the defect.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectWindow {
    pub defect: i64,
    pub pair: (String, String),
    pub window: usize,
    /// Maximum over the window `B - 1`.
    pub previous: i64,
    pub stabilized: bool,
}

/// `max |H(gh) - H(g) - H(h)|` over reduced `g, h` of length at most `window`.
pub fn defect_window(
    w: &FreeCoxeterWord,
    alphabet: usize,
    window: usize,
    pair_cap: u128,
) -> Result<DefectWindow> {
    if w.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if window < w.len() {
        return Err(Error::WindowTooSmall {
            window,
            pattern: w.len(),
        });
    }
    let count = count_reduced(alphabet, window);
    let pairs = count.saturating_mul(count);
    if pairs > pair_cap {
        return Err(Error::WindowTooLarge { pairs, cap: pair_cap });
    }
    let words = reduced_words(alphabet, window);
    let values: Vec<i64> = words.iter().map(|g| counting_qm(w, g).unwrap()).collect();
    let indexed: Vec<usize> = (0..words.len()).collect();
    // Per outer word: (best over all h, best h index, best over h with |g|,|h| < window)
    let rows = par_map(&indexed, |&i| {
        let g = &words[i];
        let mut best = (-1i64, 0usize);
        let mut best_prev = -1i64;
        for (j, h) in words.iter().enumerate() {
            let d = (counting_qm(w, &g.mul(h)).unwrap() - values[i] - values[j]).abs();
            if d > best.0 {
                best = (d, j);
            }
            if g.len() < window && h.len() < window && d > best_prev {
                best_prev = d;
            }
        }
        (best, best_prev)
    });
    let mut defect = (-1i64, 0usize, 0usize);
    let mut previous = 0i64;
    for (i, ((d, j), dp)) in rows.into_iter().enumerate() {
        if d > defect.0 {
            defect = (d, i, j);
        }
        previous = previous.max(dp);
    }
    let stabilized = defect.0 == previous && window >= 3 * w.len();
    Ok(DefectWindow {
        defect: defect.0,
        pair: (words[defect.1].to_string(), words[defect.2].to_string()),
        window,
        previous,
        stabilized,
    })
}

/// Number of consecutive equal differences required by [`homogenize`].
fn stable_run(w: &FreeCoxeterWord) -> usize {
    w.len() + 2
}

/// `phi_w(g) = lim H_w(g^n) / n`, read off once the first differences of
/// `n -> H_w(g^n)` are constant.
pub fn homogenize(w: &FreeCoxeterWord, g: &FreeCoxeterWord, n_cap: usize) -> Result<Ratio<i64>> {
    if w.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if g.mul(g).is_empty() {
        return Ok(Ratio::from_integer(0));
    }
    let run = stable_run(w);
    let mut power = FreeCoxeterWord::identity();
    let mut prev = 0i64;
    let mut last_diff: Option<i64> = None;
    let mut same = 0usize;
    for _ in 1..=n_cap {
        power = power.mul(g);
        let h = counting_qm(w, &power)?;
        let diff = h - prev;
        prev = h;
        if last_diff == Some(diff) {
            same += 1;
        } else {
            same = 1;
            last_diff = Some(diff);
        }
        if same >= run {
            return Ok(Ratio::from_integer(diff));
        }
    }
    Err(Error::HomogenizeNotStable { cap: n_cap })
}

/// Default power cap for [`homogenize`].
pub const DEFAULT_POWER_CAP: usize = 64;

/// A counting quasimorphism with its window defect and the constant `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasimorphismCert {
    pub alphabet: usize,
    pub pattern: FreeCoxeterWord,
    pub raw_defect: i64,
    pub window: usize,
    pub stabilized: bool,
    /// `2 * raw_defect`.
    pub homogeneous_defect: Ratio<i64>,
    /// `max |phi(x)|` over the generators.
    pub generator_max: Ratio<i64>,
    pub constant: Ratio<i64>,
    pub attaining_pair: (String, String),
}

impl QuasimorphismCert {
    /// Builds the certificate for pattern `w` on `W_k`; `window` defaults to `3|w|`.
    pub fn build(alphabet: usize, w: &FreeCoxeterWord, window: Option<usize>) -> Result<Self> {
        if alphabet < 3 {
            return Err(Error::NotFreeCoxeter);
        }
        let window = window.unwrap_or(3 * w.len());
        let dw = defect_window(w, alphabet, window, DEFAULT_PAIR_CAP)?;
        let homogeneous_defect = Ratio::from_integer(2 * dw.defect);
        let mut generator_max = Ratio::from_integer(0);
        for l in 0..alphabet {
            let x = FreeCoxeterWord { letters: vec![l] };
            let v = homogenize(w, &x, DEFAULT_POWER_CAP)?;
            if v.abs() > generator_max {
                generator_max = v.abs();
            }
        }
        let denom = generator_max + homogeneous_defect;
        if denom == Ratio::from_integer(0) {
            return Err(Error::CertificateInvalid(format!(
                "pattern {w} gives the zero quasimorphism"
            )));
        }
        Ok(Self {
            alphabet,
            pattern: w.clone(),
            raw_defect: dw.defect,
            window,
            stabilized: dw.stabilized,
            homogeneous_defect,
            generator_max,
            constant: denom.recip(),
            attaining_pair: dw.pair,
        })
    }

    pub fn phi(&self, g: &FreeCoxeterWord) -> Result<Ratio<i64>> {
        homogenize(&self.pattern, g, DEFAULT_POWER_CAP)
    }
}

/// A certified lower bound on `||g^k||_R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PowerBound {
    pub k: usize,
    pub bound: usize,
}

fn ceil_ratio(r: Ratio<i64>) -> usize {
    let c = r.ceil().to_integer();
    c.max(0) as usize
}

/// `||g^k||_R >= ceil(k |phi(g)| C)` for `k = 1..=max_k`.
pub fn certify_lower_bound(
    cert: &QuasimorphismCert,
    g: &FreeCoxeterWord,
    max_k: usize,
) -> Result<(Ratio<i64>, Vec<PowerBound>)> {
    if !cert.stabilized {
        return Err(Error::NotStabilized);
    }
    let phi = cert.phi(g)?.abs();
    let bounds = (1..=max_k)
        .map(|k| PowerBound {
            k,
            bound: ceil_ratio(phi * Ratio::from_integer(k as i64) * cert.constant),
        })
        .collect();
    Ok((cert.constant, bounds))
}

/// The indices `1, 1 + gap, 1 + 2 gap, ...` up to `max_k`.
pub fn arithmetic_subsequence(gap: usize, max_k: usize) -> Vec<usize> {
    (1..=max_k).step_by(gap.max(1)).collect()
}
