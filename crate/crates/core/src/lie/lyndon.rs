use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::series::Alphabet;

/// Bracket expression over generator indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Bracket {
    Gen(u8),
    Br(Box<Bracket>, Box<Bracket>),
}

impl Bracket {
    pub fn br(a: Bracket, b: Bracket) -> Self {
        Bracket::Br(Box::new(a), Box::new(b))
    }

    pub fn letters(&self) -> Vec<u8> {
        match self {
            Bracket::Gen(g) => vec![*g],
            Bracket::Br(a, b) => {
                let mut v = a.letters();
                v.extend(b.letters());
                v
            }
        }
    }

    /// Expansion into words with integer coefficients.
    pub fn expand(&self) -> BTreeMap<Vec<u8>, i64> {
        match self {
            Bracket::Gen(g) => BTreeMap::from([(vec![*g], 1)]),
            Bracket::Br(a, b) => {
                let (ea, eb) = (a.expand(), b.expand());
                let mut out: BTreeMap<Vec<u8>, i64> = BTreeMap::new();
                for (wa, ca) in &ea {
                    for (wb, cb) in &eb {
                        let mut ab = wa.clone();
                        ab.extend(wb);
                        *out.entry(ab).or_default() += ca * cb;
                        let mut ba = wb.clone();
                        ba.extend(wa);
                        *out.entry(ba).or_default() -= ca * cb;
                    }
                }
                out.retain(|_, c| *c != 0);
                out
            }
        }
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        match self {
            Bracket::Gen(g) => alphabet.names[*g as usize].clone(),
            Bracket::Br(a, b) => format!("[{},{}]", a.display(alphabet), b.display(alphabet)),
        }
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bracket::Gen(g) => write!(f, "{}", (b'A' + g) as char),
            Bracket::Br(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Standard bracketing: `w = u v` with `v` the longest proper Lyndon suffix.
pub fn standard_bracketing(w: &[u8]) -> Bracket {
    if w.len() == 1 {
        return Bracket::Gen(w[0]);
    }
    let split = (1..w.len()).find(|&i| is_lyndon(&w[i..])).expect("Lyndon word of length >= 2");
    Bracket::br(standard_bracketing(&w[..split]), standard_bracketing(&w[split..]))
}

/// All Lyndon words over `k` letters of length at most `n` (Duval's generation).
pub fn lyndon_words(k: usize, n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if k == 0 || n == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last as usize == k - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

/// One element of the Lyndon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LyndonElement {
    pub word: Vec<u8>,
    pub weight: u32,
    pub bracket: Bracket,
    pub expansion: BTreeMap<Vec<u8>, i64>,
}

/// Lyndon brackets of total weight at most `order`, ordered by weight then lexicographically.
pub fn lyndon_basis(alphabet: &Arc<Alphabet>, order: u32) -> Vec<LyndonElement> {
    let min_w = alphabet.weights.iter().copied().min().unwrap_or(1).max(1);
    let max_len = (order / min_w) as usize;
    let mut words: Vec<(u32, Vec<u8>)> = lyndon_words(alphabet.len(), max_len)
        .into_iter()
        .map(|w| (alphabet.weight(&w), w))
        .filter(|(wt, _)| *wt <= order)
        .collect();
    words.sort();
    words
        .into_iter()
        .map(|(weight, word)| {
            let bracket = standard_bracketing(&word);
            let expansion = bracket.expand();
            LyndonElement { word, weight, bracket, expansion }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_necklace_formula() {
        let ab = Alphabet::uniform(2);
        assert_eq!(lyndon_basis(&ab, 2).len(), 3);
        assert_eq!(lyndon_basis(&ab, 4).len(), 8);
        assert_eq!(lyndon_basis(&ab, 5).len(), 14);
        assert_eq!(lyndon_basis(&ab, 9).len(), 2 + 1 + 2 + 3 + 6 + 9 + 18 + 30 + 56);
        let abc = Alphabet::uniform(3);
        assert_eq!(lyndon_basis(&abc, 3).len(), 3 + 3 + 8);
    }

    #[test]
    fn weighted_counts() {
        let w2 = Alphabet::new(&["T", "E6", "E7", "E8", "E9"], &[2, 6, 7, 8, 9]);
        assert_eq!(lyndon_basis(&w2, 9).len(), 7);
        let w3 = Alphabet::new(&["T", "E6", "E7", "E8", "E9"], &[3, 6, 7, 8, 9]);
        assert_eq!(lyndon_basis(&w3, 9).len(), 6);
    }

    #[test]
    fn bracketing() {
        assert_eq!(standard_bracketing(&[0, 0, 1]).to_string(), "[A,[A,B]]");
        assert_eq!(standard_bracketing(&[0, 1, 1]).to_string(), "[[A,B],B]");
        assert_eq!(standard_bracketing(&[0, 0, 1, 0, 1]).to_string(), "[[A,[A,B]],[A,B]]");
        let e = standard_bracketing(&[0, 1]).expand();
        assert_eq!(e, BTreeMap::from([(vec![0, 1], 1), (vec![1, 0], -1)]));
    }

    #[test]
    fn leading_word_is_smallest() {
        let ab = Alphabet::uniform(2);
        for el in lyndon_basis(&ab, 6) {
            let first = el.expansion.keys().next().unwrap();
            assert_eq!(first, &el.word);
            assert_eq!(el.expansion[&el.word], 1);
        }
    }
}
