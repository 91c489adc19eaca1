//! Classification of short reduced words in two invertible codes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codes::{CodeEquality, CodeError, SlidingBlockCode1D};
use crate::symbolic::{default_tail_set, enumerate_cm, Alphabet, BiConfiguration, PeriodicWord, Symbol};

use super::families::proximal_code;
use super::BoundaryError;

/// A code together with its inverse.
#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    pub code: SlidingBlockCode1D,
    pub inverse: SlidingBlockCode1D,
}

impl Generator {
    pub fn new(name: impl Into<String>, code: SlidingBlockCode1D, inverse: SlidingBlockCode1D) -> Self {
        Generator { name: name.into(), code, inverse }
    }

    /// An involution is its own inverse.
    pub fn involution(name: impl Into<String>, code: SlidingBlockCode1D) -> Self {
        Generator { name: name.into(), inverse: code.clone(), code }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum WordVerdict {
    /// Exhaustively equal to the identity.
    Trivial,
    /// `image` is the word applied to `witness`, and differs from it.
    Nontrivial { witness: BiConfiguration, image: BiConfiguration },
    /// The exhaustive check ran out of budget.
    Unresolved { radius: usize, budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordEntry {
    /// Letters `g`, `G` (inverse of `g`), `h`, `H`; leftmost applied last.
    pub word: String,
    #[serde(flatten)]
    pub verdict: WordVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub generators: [String; 2],
    pub max_len: usize,
    pub budget: u64,
    pub seed: u64,
    pub candidates: usize,
    pub entries: Vec<WordEntry>,
}

impl RelationReport {
    pub fn relations(&self) -> impl Iterator<Item = &WordEntry> {
        self.entries.iter().filter(|e| e.verdict == WordVerdict::Trivial)
    }

    pub fn unresolved(&self) -> impl Iterator<Item = &WordEntry> {
        self.entries.iter().filter(|e| matches!(e.verdict, WordVerdict::Unresolved { .. }))
    }
}

const LETTERS: [char; 4] = ['g', 'G', 'h', 'H'];

fn inverse_letter(c: char) -> char {
    if c.is_ascii_lowercase() {
        c.to_ascii_uppercase()
    } else {
        c.to_ascii_lowercase()
    }
}

/// Reduced words of length `1..=max_len`, shortest first, then in letter order.
pub fn reduced_words(max_len: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for c in LETTERS {
                if w.chars().last() != Some(inverse_letter(c)) {
                    let mut v = w.clone();
                    v.push(c);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Seeded test configurations: embedded boundary points with short prefixes
/// and random finite words in constant backgrounds.
pub fn candidate_configurations(alphabet: Alphabet, seed: u64, random: usize) -> Vec<BiConfiguration> {
    let tails = default_tail_set(alphabet);
    let mut out = Vec::new();
    for m in 0..6 {
        for f in enumerate_cm(m, (m + 3).min(7), alphabet, &tails) {
            out.push(f.embed());
        }
    }
    let n = alphabet.size() as Symbol;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let background = rng.gen_range(0..n);
        let len = rng.gen_range(1..48);
        let w: Vec<Symbol> = (0..len).map(|_| rng.gen_range(0..n)).collect();
        out.push(BiConfiguration::finite(background, w, 0));
        let runs: Vec<Symbol> = (0..rng.gen_range(1..6))
            .flat_map(|_| {
                let s = rng.gen_range(0..n);
                std::iter::repeat(s).take(rng.gen_range(1..20))
            })
            .collect();
        let right: Vec<Symbol> = (0..rng.gen_range(1..3)).map(|_| rng.gen_range(0..n)).collect();
        out.push(BiConfiguration::new(PeriodicWord::constant(0), runs, 0, PeriodicWord::new(right).expect("nonempty")));
    }
    out.sort();
    out.dedup();
    out
}

/// Classifies every reduced word of length at most `max_len`.
///
/// A word is nontrivial once it moves a candidate configuration or the
/// exhaustive comparison with the identity finds a separating window; it is
/// trivial only when that comparison proves equality.
pub fn relation_search(
    g: &Generator,
    h: &Generator,
    max_len: usize,
    budget: u64,
    seed: u64,
) -> Result<RelationReport, BoundaryError> {
    let alphabet = g.code.alphabet();
    if h.code.alphabet() != alphabet {
        return Err(BoundaryError::BadParameter("generators over different alphabets".into()));
    }
    let candidates = candidate_configurations(alphabet, seed, 64);
    let identity = SlidingBlockCode1D::identity(alphabet);
    let letter = |c: char| match c {
        'g' => &g.code,
        'G' => &g.inverse,
        'h' => &h.code,
        _ => &h.inverse,
    };
    let words = reduced_words(max_len);
    let entries = std::thread::scope(|s| {
        let handles: Vec<_> = words
            .iter()
            .map(|w| {
                let candidates = &candidates;
                let identity = &identity;
                s.spawn(move || -> Result<WordEntry, BoundaryError> {
                    let mut chars = w.chars();
                    let first = letter(chars.next().expect("nonempty word")).clone();
                    let code = chars.fold(first, |acc, c| acc.compose(letter(c)));
                    let verdict = classify(&code, identity, candidates, budget)?;
                    Ok(WordEntry { word: w.clone(), verdict })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect::<Result<Vec<_>, _>>()
    })?;
    Ok(RelationReport {
        generators: [g.name.clone(), h.name.clone()],
        max_len,
        budget,
        seed,
        candidates: candidates.len(),
        entries,
    })
}

fn classify(
    code: &SlidingBlockCode1D,
    identity: &SlidingBlockCode1D,
    candidates: &[BiConfiguration],
    budget: u64,
) -> Result<WordVerdict, BoundaryError> {
    for x in candidates {
        let image = code.apply(x);
        if image != *x {
            return Ok(WordVerdict::Nontrivial { witness: x.clone(), image });
        }
    }
    match code.equal_codes_with_budget(identity, budget) {
        Ok(CodeEquality::Equal) => Ok(WordVerdict::Trivial),
        Ok(CodeEquality::Differ { window }) => {
            let r = code.radius() as i64;
            let witness = BiConfiguration::finite(0, window, -r);
            let image = code.apply(&witness);
            debug_assert_ne!(image, witness);
            Ok(WordVerdict::Nontrivial { witness, image })
        }
        Err(CodeError::WindowTooLarge { radius, budget }) => Ok(WordVerdict::Unresolved { radius, budget }),
        Err(e) => Err(e.into()),
    }
}

/// The default pair `p = g_2 g_3`, `q = g_3 g_4` of products of proximal
/// involutions, with inverses `g_3 g_2` and `g_4 g_3`.
pub fn default_free_pair(alphabet: Alphabet) -> Result<(Generator, Generator), BoundaryError> {
    let g2 = proximal_code(2, alphabet, 0)?;
    let g3 = proximal_code(3, alphabet, 0)?;
    let g4 = proximal_code(4, alphabet, 0)?;
    let p = Generator::new("g2*g3", g2.compose(&g3), g3.compose(&g2));
    let q = Generator::new("g3*g4", g3.compose(&g4), g4.compose(&g3));
    Ok((p, q))
}
