//! Generator alphabets, words over them, evaluation and seeded random
//! elements for property tests.
//!
//! The text grammar for words is whitespace-separated tokens `g(i,j)`,
//! `g(i,j)^k` (nonzero integer k, negative meaning the inverted letter
//! repeated) and `t` (optionally `t^k`), the H_2 transposition.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::element::{generator, minimal_translation, transposition, Element, RayPoint};
use crate::error::{Error, Result};

/// A generator letter. Inverses stay inside the alphabet: the inverse of
/// G(i,j) is G(j,i) and t is its own inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    G { i: usize, j: usize },
    Tau,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::G { i, j } => Letter::G { i: j, j: i },
            Letter::Tau => Letter::Tau,
        }
    }

    fn check(self, n: usize) -> Result<()> {
        match self {
            Letter::G { i, j } => {
                if i >= n {
                    return Err(Error::RayOutOfRange { ray: i, n });
                }
                if j >= n {
                    return Err(Error::RayOutOfRange { ray: j, n });
                }
                if i == j {
                    return Err(Error::SameRay(i));
                }
                Ok(())
            }
            Letter::Tau => {
                if n != 2 {
                    return Err(Error::TauOutsideH2(n));
                }
                Ok(())
            }
        }
    }

    /// The element of H_n this letter names.
    pub fn element(self, n: usize) -> Result<Element> {
        self.check(n)?;
        match self {
            Letter::G { i, j } => generator(n, i, j),
            Letter::Tau => transposition(2, RayPoint::new(0, 1), RayPoint::new(1, 1)),
        }
    }
}

/// A finite word over the generator alphabet of H_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    n: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(n: usize, letters: Vec<Letter>) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadRayCount(n));
        }
        for l in &letters {
            l.check(n)?;
        }
        Ok(Word { n, letters })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Word::new(n, Vec::new())
    }

    pub fn ray_count(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation; both words must share the ray count.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.n != other.n {
            return Err(Error::RayCountMismatch(self.n, other.n));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word { n: self.n, letters })
    }

    /// Left-to-right product of the letters as elements.
    pub fn evaluate(&self) -> Result<Element> {
        let mut acc = Element::identity(self.n)?;
        for l in &self.letters {
            acc = acc.compose(&l.element(self.n)?)?;
        }
        Ok(acc)
    }

    /// The formal inverse: reversed sequence of inverted letters.
    pub fn inverted(&self) -> Word {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| l.inverse())
            .collect();
        Word { n: self.n, letters }
    }

    /// Cancels adjacent inverse pairs until none remain.
    pub fn free_reduce(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if stack.last() == Some(&l.inverse()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word { n: self.n, letters: stack }
    }

    /// Canonical text form: runs of an equal letter collapse to `^k`.
    pub fn format(&self) -> String {
        let mut out = String::new();
        let mut idx = 0;
        while idx < self.letters.len() {
            let letter = self.letters[idx];
            let mut run = 1;
            while idx + run < self.letters.len() && self.letters[idx + run] == letter {
                run += 1;
            }
            if !out.is_empty() {
                out.push(' ');
            }
            match letter {
                Letter::G { i, j } => out.push_str(&format!("g({i},{j})")),
                Letter::Tau => out.push('t'),
            }
            if run > 1 {
                out.push_str(&format!("^{run}"));
            }
            idx += run;
        }
        out
    }

    /// Parses the word grammar, validating letters against `n` as they are
    /// read.
    pub fn parse(n: usize, text: &str) -> Result<Word> {
        if n < 2 {
            return Err(Error::BadRayCount(n));
        }
        let mut letters = Vec::new();
        let mut offset = 0;
        for chunk in text.split_whitespace() {
            let pos = offset + text[offset..].find(chunk).expect("chunk comes from text");
            offset = pos + chunk.len();
            let (letter, expo) = parse_token(chunk, pos)?;
            letter.check(n).map_err(|e| match e {
                Error::TauOutsideH2(_) => e,
                other => Error::ParseError { pos, msg: other.to_string() },
            })?;
            let repeated = if expo < 0 { letter.inverse() } else { letter };
            for _ in 0..expo.unsigned_abs() {
                letters.push(repeated);
            }
        }
        Ok(Word { n, letters })
    }
}

fn parse_token(token: &str, pos: usize) -> Result<(Letter, i64)> {
    let err = |msg: &str| Error::ParseError { pos, msg: msg.to_string() };
    let (head, expo) = match token.split_once('^') {
        Some((head, tail)) => {
            let expo: i64 = tail
                .parse()
                .map_err(|_| err(&format!("bad exponent {tail:?}")))?;
            if expo == 0 {
                return Err(err("exponent must be nonzero"));
            }
            (head, expo)
        }
        None => (token, 1),
    };
    if head == "t" {
        return Ok((Letter::Tau, expo));
    }
    let inner = head
        .strip_prefix("g(")
        .and_then(|rest| rest.strip_suffix(')'))
        .ok_or_else(|| err(&format!("expected g(i,j) or t, got {token:?}")))?;
    let (i, j) = inner
        .split_once(',')
        .ok_or_else(|| err("expected two comma-separated ray indices"))?;
    let i: usize = i.trim().parse().map_err(|_| err(&format!("bad ray index {i:?}")))?;
    let j: usize = j.trim().parse().map_err(|_| err(&format!("bad ray index {j:?}")))?;
    Ok((Letter::G { i, j }, expo))
}

/// Named finite generating families of H_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GensetName {
    /// All g_ij, i != j. Generates H_n for n >= 3; for n = 2 it degenerates
    /// to {g_0, g_0^-1} and is not generating.
    Gij,
    /// The cyclic family g_i = g_{i,i+1}, closed under inverses; n >= 3.
    Gi,
    /// {g_0, g_0^-1, t} for H_2.
    H2,
}

/// A generating family with its explicit inverse-closed letter list; the
/// letter order fixes deterministic iteration everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingSet {
    name: GensetName,
    n: usize,
    letters: Vec<Letter>,
}

impl GeneratingSet {
    pub fn new(name: GensetName, n: usize) -> Result<Self> {
        let letters = match name {
            GensetName::Gij => {
                if n < 2 {
                    return Err(Error::BadRayCount(n));
                }
                let mut l = Vec::with_capacity(n * (n - 1));
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            l.push(Letter::G { i, j });
                        }
                    }
                }
                l
            }
            GensetName::Gi => {
                if n < 3 {
                    return Err(Error::NeedThreeRays(n));
                }
                let mut l = Vec::with_capacity(2 * n);
                for i in 0..n {
                    l.push(Letter::G { i, j: (i + 1) % n });
                }
                for i in 0..n {
                    l.push(Letter::G { i: (i + 1) % n, j: i });
                }
                l
            }
            GensetName::H2 => {
                if n != 2 {
                    return Err(Error::TauOutsideH2(n));
                }
                vec![Letter::G { i: 0, j: 1 }, Letter::G { i: 1, j: 0 }, Letter::Tau]
            }
        };
        Ok(GeneratingSet { name, n, letters })
    }

    pub fn name(&self) -> GensetName {
        self.name
    }

    pub fn ray_count(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn elements(&self) -> Result<Vec<Element>> {
        self.letters.iter().map(|l| l.element(self.n)).collect()
    }
}

/// Deterministic random element with complexity at most `budget`.
///
/// Composes a random permutation of the depth-h grid (h = budget / 2n) with
/// a minimal element realizing a random zero-sum translation vector of
/// amount at most budget / 2; the two halves bound P by budget and cover
/// both the finitary and the translation-heavy regime.
pub fn random_element(n: usize, budget: i64, seed: u64) -> Result<Element> {
    if n < 2 {
        return Err(Error::BadRayCount(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h_max = budget / (2 * n as i64);
    let h = if h_max > 0 { rng.gen_range(0..=h_max) } else { 0 };
    let mut grid: Vec<RayPoint> = Vec::new();
    for ray in 0..n {
        for pos in 1..=h {
            grid.push(RayPoint::new(ray, pos));
        }
    }
    let mut images = grid.clone();
    images.shuffle(&mut rng);
    let finitary = Element::make(
        n,
        vec![0; n],
        grid.iter().copied().zip(images.iter().copied()),
    )?;

    let t_budget = budget / 2;
    let amount = if t_budget > 0 { rng.gen_range(0..=t_budget) } else { 0 };
    let mut t = vec![0i64; n];
    for _ in 0..amount {
        t[rng.gen_range(0..n)] += 1;
    }
    for _ in 0..amount {
        t[rng.gen_range(0..n)] -= 1;
    }
    let shift = minimal_translation(n, t)?;
    finitary.compose(&shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, text: &str) -> Word {
        Word::parse(n, text).unwrap()
    }

    #[test]
    fn evaluate_empty_is_identity() {
        assert!(Word::empty(3).unwrap().evaluate().unwrap().is_identity());
    }

    #[test]
    fn evaluate_letter_then_inverse_is_identity() {
        let word = w(3, "g(0,1) g(1,0)");
        assert!(word.evaluate().unwrap().is_identity());
    }

    #[test]
    fn sigma2_word_identity_in_h3() {
        // g02^2 g12^2 g02^-2 g12^-2 stacks two ray swaps.
        let word = w(3, "g(0,2)^2 g(1,2)^2 g(2,0)^2 g(2,1)^2");
        let e = word.evaluate().unwrap();
        let mut expected = Element::identity(3).unwrap();
        for pos in 1..=2 {
            let s = transposition(3, RayPoint::new(0, pos), RayPoint::new(1, pos)).unwrap();
            expected = expected.compose(&s).unwrap();
        }
        assert_eq!(e, expected);
    }

    #[test]
    fn invert_word_reverses_and_inverts() {
        let word = w(3, "g(0,1) g(1,2)");
        assert_eq!(word.inverted().format(), "g(2,1) g(1,0)");
    }

    #[test]
    fn free_reduce_cancels_pairs() {
        assert!(w(3, "g(0,1) g(1,0)").free_reduce().is_empty());
        // Cascading cancellation.
        let word = w(3, "g(0,1) g(1,2) g(2,1) g(1,0)");
        assert!(word.free_reduce().is_empty());
        let tt = w(2, "t t");
        assert!(tt.free_reduce().is_empty());
    }

    #[test]
    fn free_reduce_preserves_value() {
        for seed in 0..50 {
            let word = random_word(3, 12, seed);
            assert_eq!(
                word.free_reduce().evaluate().unwrap(),
                word.evaluate().unwrap()
            );
        }
    }

    #[test]
    fn parse_validates_rays_before_tau() {
        let err = Word::parse(2, "g(0,2)^3 t").unwrap_err();
        assert!(matches!(err, Error::ParseError { pos: 0, .. }), "{err:?}");
        assert!(Word::parse(2, "g(0,1)^2 t").is_ok());
        assert_eq!(Word::parse(3, "t").unwrap_err(), Error::TauOutsideH2(3));
    }

    #[test]
    fn parse_reports_position() {
        let err = Word::parse(3, "g(0,1) oops").unwrap_err();
        assert_eq!(err, Error::ParseError { pos: 7, msg: "expected g(i,j) or t, got \"oops\"".into() });
        let err = Word::parse(3, "g(0,1)^0").unwrap_err();
        assert!(matches!(err, Error::ParseError { pos: 0, .. }));
    }

    #[test]
    fn format_parse_round_trip() {
        for text in ["g(0,1)^2 g(1,2) g(2,0)^3", "t g(0,1) t^2", ""] {
            let n = if text.contains('t') { 2 } else { 3 };
            let word = w(n, text);
            assert_eq!(Word::parse(n, &word.format()).unwrap(), word);
            assert_eq!(w(n, &word.format()).format(), word.format());
        }
    }

    #[test]
    fn negative_exponent_means_inverted_letter() {
        let word = w(3, "g(0,1)^-2");
        assert_eq!(word.letters(), &[Letter::G { i: 1, j: 0 }; 2]);
    }

    fn random_word(n: usize, max_len: usize, seed: u64) -> Word {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x77aa);
        let len = rng.gen_range(0..=max_len);
        let mut letters = Vec::new();
        for _ in 0..len {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n);
            while j == i {
                j = rng.gen_range(0..n);
            }
            letters.push(Letter::G { i, j });
        }
        Word::new(n, letters).unwrap()
    }

    #[test]
    fn evaluate_is_a_monoid_homomorphism() {
        for seed in 0..100 {
            let u = random_word(3, 10, seed);
            let v = random_word(3, 10, seed + 1000);
            let joined = u.concat(&v).unwrap();
            assert_eq!(
                joined.evaluate().unwrap(),
                u.evaluate().unwrap().compose(&v.evaluate().unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn evaluate_of_inverted_word_is_inverse() {
        for seed in 0..100 {
            let word = random_word(3, 14, seed);
            assert_eq!(
                word.inverted().evaluate().unwrap(),
                word.evaluate().unwrap().inverse()
            );
        }
    }

    #[test]
    fn generating_set_sizes() {
        assert_eq!(GeneratingSet::new(GensetName::Gij, 3).unwrap().letters().len(), 6);
        assert_eq!(GeneratingSet::new(GensetName::Gij, 4).unwrap().letters().len(), 12);
        assert_eq!(GeneratingSet::new(GensetName::H2, 2).unwrap().letters().len(), 3);
        assert_eq!(GeneratingSet::new(GensetName::Gi, 3).unwrap().letters().len(), 6);
        assert!(GeneratingSet::new(GensetName::Gi, 2).is_err());
        assert!(GeneratingSet::new(GensetName::H2, 3).is_err());
        // Degenerate but allowed.
        assert_eq!(GeneratingSet::new(GensetName::Gij, 2).unwrap().letters().len(), 2);
    }

    #[test]
    fn generating_sets_are_inverse_closed() {
        for (name, n) in [(GensetName::Gij, 4), (GensetName::Gi, 5), (GensetName::H2, 2)] {
            let gs = GeneratingSet::new(name, n).unwrap();
            for l in gs.letters() {
                assert!(gs.letters().contains(&l.inverse()));
            }
        }
    }

    #[test]
    fn random_element_zero_budget_is_identity() {
        for seed in 0..20 {
            assert!(random_element(3, 0, seed).unwrap().is_identity());
        }
    }

    #[test]
    fn random_element_respects_budget() {
        for seed in 0..1000 {
            let e = random_element(3, 50, seed).unwrap();
            assert!(e.complexity().total <= 50, "seed {seed}");
        }
    }

    #[test]
    fn random_element_is_deterministic_and_varied() {
        let mut finitary = 0;
        let mut translated = 0;
        for seed in 0..200 {
            let a = random_element(3, 40, seed).unwrap();
            let b = random_element(3, 40, seed).unwrap();
            assert_eq!(a, b);
            if a.is_finitary() && !a.is_identity() {
                finitary += 1;
            }
            if !a.is_finitary() {
                translated += 1;
            }
        }
        assert!(finitary > 10, "finitary regime reached {finitary} times");
        assert!(translated > 10, "translation regime reached {translated} times");
    }

    #[test]
    fn minimal_translation_has_p_equal_t() {
        let e = minimal_translation(3, vec![2, -3, 1]).unwrap();
        let c = e.complexity();
        assert_eq!(c.translation, 3);
        assert_eq!(c.total, 3);
        assert_eq!(e.translations(), &[2, -3, 1]);
    }
}
