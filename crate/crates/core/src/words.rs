//! Reduced words of the longest permutation, braid and commutation moves,
//! and the two canonical move chains for n = 4.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum WordError {
    #[error("letter {letter} out of range for n = {n}")]
    LetterOutOfRange { letter: usize, n: usize },
    #[error("word is not reduced: length {len}, inversion count {inversions}")]
    NotReduced { len: usize, inversions: usize },
    #[error("{move_} is not applicable to ({word})")]
    MoveNotApplicable { move_: Move, word: String },
    #[error("n = {0} is too large for exhaustive enumeration")]
    TooLarge(usize),
}

/// A permutation of {1..n}, stored as the image list: `images[i-1] = w(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((1..=n).collect())
    }

    /// The adjacent transposition s_i = (i, i+1).
    pub fn adjacent(n: usize, i: usize) -> Self {
        let mut im: Vec<usize> = (1..=n).collect();
        im.swap(i - 1, i);
        Perm(im)
    }

    /// The longest element: i -> n+1-i.
    pub fn longest(n: usize) -> Self {
        Perm((1..=n).rev().collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    /// Function composition: `(f.compose(g))(x) = f(g(x))`.
    pub fn compose(&self, g: &Perm) -> Perm {
        Perm(g.0.iter().map(|&x| self.0[x - 1]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut im = vec![0; self.0.len()];
        for (i, &w) in self.0.iter().enumerate() {
            im[w - 1] = i + 1;
        }
        Perm(im)
    }

    pub fn inversions(&self) -> usize {
        let mut count = 0;
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                if self.0[i] > self.0[j] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &w)| w == i + 1)
    }

    /// All n! permutations, in lexicographic order of image lists.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Perm(current.clone()));
            // next lexicographic permutation
            let Some(i) = (0..n - 1).rev().find(|&i| current[i] < current[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.0 {
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// Evaluate a word of Coxeter generators to a permutation, with
/// `s_{i_1} s_{i_2} ... s_{i_k}` meaning `s_{i_k}` acts first.
pub fn word_to_permutation(n: usize, letters: &[usize]) -> Result<Perm, WordError> {
    let mut w = Perm::identity(n);
    for &l in letters {
        if l == 0 || l >= n {
            return Err(WordError::LetterOutOfRange { letter: l, n });
        }
    }
    for &l in letters.iter().rev() {
        w = Perm::adjacent(n, l).compose(&w);
    }
    Ok(w)
}

pub fn is_reduced(n: usize, letters: &[usize]) -> Result<bool, WordError> {
    let w = word_to_permutation(n, letters)?;
    Ok(w.inversions() == letters.len())
}

/// A reduced word: letters in 1..n-1 whose length equals the inversion
/// count of the permutation they evaluate to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord {
    n: usize,
    letters: Vec<usize>,
}

impl ReducedWord {
    pub fn new(n: usize, letters: Vec<usize>) -> Result<Self, WordError> {
        let w = word_to_permutation(n, &letters)?;
        let inversions = w.inversions();
        if inversions != letters.len() {
            return Err(WordError::NotReduced { len: letters.len(), inversions });
        }
        Ok(ReducedWord { n, letters })
    }

    /// Parse digits, e.g. "121321".
    pub fn parse(n: usize, digits: &str) -> Result<Self, WordError> {
        let letters = digits
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).unwrap_or(0))
            .collect();
        ReducedWord::new(n, letters)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn permutation(&self) -> Perm {
        word_to_permutation(self.n, &self.letters).expect("validated at construction")
    }

    pub fn is_longest(&self) -> bool {
        self.permutation() == Perm::longest(self.n)
    }

    /// Prefix permutation `s_{i_1} ... s_{i_k}`.
    pub fn prefix_permutation(&self, k: usize) -> Perm {
        word_to_permutation(self.n, &self.letters[..k]).expect("prefix of reduced word")
    }

    /// Suffix permutation `s_{i_{k+1}} ... s_{i_len}`.
    pub fn suffix_permutation(&self, k: usize) -> Perm {
        word_to_permutation(self.n, &self.letters[k..]).expect("suffix of reduced word")
    }

    pub fn applicable_moves(&self) -> Vec<Move> {
        let mut out = Vec::new();
        for k in 1..=self.letters.len().saturating_sub(1) {
            if self.move_applies(Move::Commute(k)) {
                out.push(Move::Commute(k));
            }
        }
        for k in 1..=self.letters.len().saturating_sub(2) {
            if self.move_applies(Move::Braid(k)) {
                out.push(Move::Braid(k));
            }
        }
        out
    }

    pub fn move_applies(&self, m: Move) -> bool {
        match m {
            Move::Braid(k) => {
                if k == 0 || k + 1 >= self.letters.len() {
                    return false;
                }
                let (a, b, c) = (
                    self.letters[k - 1],
                    self.letters[k],
                    self.letters[k + 1],
                );
                a == c && (b == a + 1 || a == b + 1)
            }
            Move::Commute(k) => {
                if k == 0 || k >= self.letters.len() {
                    return false;
                }
                self.letters[k - 1].abs_diff(self.letters[k]) >= 2
            }
        }
    }

    pub fn apply_move(&self, m: Move) -> Result<ReducedWord, WordError> {
        if !self.move_applies(m) {
            return Err(WordError::MoveNotApplicable {
                move_: m,
                word: self.to_string(),
            });
        }
        let mut letters = self.letters.clone();
        match m {
            Move::Braid(k) => {
                // (j, j+1, j) <-> (j+1, j, j+1)
                letters.swap(k - 1, k);
                letters[k + 1] = letters[k - 1];
            }
            Move::Commute(k) => letters.swap(k - 1, k),
        }
        Ok(ReducedWord { n: self.n, letters })
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A local rewrite at a 1-indexed position: `Braid(k)` exchanges
/// `(j, j+1, j) <-> (j+1, j, j+1)` at positions k..k+2, `Commute(k)` swaps
/// two distant letters at positions k, k+1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Braid(usize),
    Commute(usize),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Braid(k) => write!(f, "R({k})"),
            Move::Commute(k) => write!(f, "L({k})"),
        }
    }
}

/// A start word plus a move sequence, validated eagerly: every move must
/// apply to the running word.
#[derive(Clone, Debug)]
pub struct Chain {
    start: ReducedWord,
    moves: Vec<Move>,
    words: Vec<ReducedWord>,
}

impl Chain {
    pub fn new(start: ReducedWord, moves: Vec<Move>) -> Result<Self, WordError> {
        let mut words = vec![start.clone()];
        for &m in &moves {
            let next = words.last().unwrap().apply_move(m)?;
            words.push(next);
        }
        Ok(Chain { start, moves, words })
    }

    pub fn start(&self) -> &ReducedWord {
        &self.start
    }

    pub fn end(&self) -> &ReducedWord {
        self.words.last().unwrap()
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    /// All words visited, including the start; length = moves + 1.
    pub fn words(&self) -> &[ReducedWord] {
        &self.words
    }
}

/// All reduced words of the longest element of S_n, by exhaustive descent
/// peeling with memoization on the permutation.
pub fn enumerate_reduced_words(n: usize) -> Result<Vec<ReducedWord>, WordError> {
    if n < 2 {
        return Err(WordError::TooLarge(n));
    }
    if n > 6 {
        return Err(WordError::TooLarge(n));
    }
    let mut memo: BTreeMap<Perm, Vec<Vec<usize>>> = BTreeMap::new();
    let words = words_of(&Perm::longest(n), &mut memo);
    let mut out: Vec<ReducedWord> = words
        .iter()
        .map(|letters| ReducedWord { n, letters: letters.clone() })
        .collect();
    out.sort();
    Ok(out)
}

fn words_of(w: &Perm, memo: &mut BTreeMap<Perm, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
    if w.is_identity() {
        return vec![Vec::new()];
    }
    if let Some(found) = memo.get(w) {
        return found.clone();
    }
    let n = w.n();
    let mut out = Vec::new();
    // Right descents: w(i) > w(i+1) means the word may end with s_i.
    for i in 1..n {
        if w.apply(i) > w.apply(i + 1) {
            let shorter = w.compose(&Perm::adjacent(n, i));
            for mut prefix in words_of(&shorter, memo) {
                prefix.push(i);
                out.push(prefix);
            }
        }
    }
    memo.insert(w.clone(), out.clone());
    out
}

/// Partition of the reduced words of w_0(n) into commutation classes:
/// connected components under Commute moves only.
pub fn commutation_classes(n: usize) -> Result<Vec<Vec<ReducedWord>>, WordError> {
    let words = enumerate_reduced_words(n)?;
    let index: BTreeMap<&ReducedWord, usize> =
        words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut seen = vec![false; words.len()];
    let mut classes = Vec::new();
    for start in 0..words.len() {
        if seen[start] {
            continue;
        }
        let mut class = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(i) = queue.pop_front() {
            class.push(words[i].clone());
            for k in 1..words[i].len() {
                if words[i].move_applies(Move::Commute(k)) {
                    let next = words[i].apply_move(Move::Commute(k)).unwrap();
                    let j = index[&next];
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        class.sort();
        classes.push(class);
    }
    classes.sort();
    Ok(classes)
}

/// Whether the full move graph (braid and commutation) on the reduced words
/// of w_0(n) is connected.
pub fn move_graph_connected(n: usize) -> Result<bool, WordError> {
    let words = enumerate_reduced_words(n)?;
    let index: BTreeMap<&ReducedWord, usize> =
        words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut seen = vec![false; words.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut reached = 0;
    while let Some(i) = queue.pop_front() {
        reached += 1;
        for m in words[i].applicable_moves() {
            let next = words[i].apply_move(m).unwrap();
            let j = index[&next];
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    Ok(reached == words.len())
}

/// The staircase word `(1)(21)(321)...`, e.g. 121321 for n = 4.
pub fn minimal_word(n: usize) -> ReducedWord {
    let mut letters = Vec::new();
    for k in 1..n {
        for i in (1..=k).rev() {
            letters.push(i);
        }
    }
    ReducedWord::new(n, letters).expect("staircase word is reduced")
}

/// The reversed staircase `(n-1)(n-2,n-1)...`, e.g. 323123 for n = 4.
pub fn maximal_word(n: usize) -> ReducedWord {
    let mut letters = Vec::new();
    for k in (1..n).rev() {
        for i in k..n {
            letters.push(i);
        }
    }
    ReducedWord::new(n, letters).expect("reversed staircase word is reduced")
}

/// The two canonical chains from 121321 to 321323. Reading the move labels
/// right to left they compose to `L(3)R(1)R(3)L(5)L(2)R(3)R(1)` and
/// `R(4)R(2)L(1)L(4)R(2)R(4)L(3)`, and the relation "upper = lower" is the
/// sonnet equation `LRRLLRR = RRLLRRL`.
pub fn canonical_chains_n4() -> (Chain, Chain) {
    use Move::*;
    let start = ReducedWord::parse(4, "121321").expect("canonical start word");
    let upper = Chain::new(
        start.clone(),
        vec![Braid(1), Braid(3), Commute(2), Commute(5), Braid(3), Braid(1), Commute(3)],
    )
    .expect("upper chain is valid");
    let lower = Chain::new(
        start,
        vec![Commute(3), Braid(4), Braid(2), Commute(4), Commute(1), Braid(2), Braid(4)],
    )
    .expect("lower chain is valid");
    (upper, lower)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_words_and_longest() {
        let w = ReducedWord::parse(3, "121").unwrap();
        assert!(w.is_longest());
        assert_eq!(w.permutation(), Perm::longest(3));
        assert!(matches!(
            ReducedWord::parse(3, "11"),
            Err(WordError::NotReduced { .. })
        ));
        let w4 = ReducedWord::parse(4, "121321").unwrap();
        assert!(w4.is_longest());
    }

    #[test]
    fn moves_from_the_start_word() {
        let w = ReducedWord::parse(4, "121321").unwrap();
        let r1 = w.apply_move(Move::Braid(1)).unwrap();
        assert_eq!(r1.to_string(), "212321");
        let l3 = w.apply_move(Move::Commute(3)).unwrap();
        assert_eq!(l3.to_string(), "123121");
        let twice = l3.apply_move(Move::Commute(3)).unwrap();
        assert_eq!(twice, w);
        let braid_twice = r1.apply_move(Move::Braid(1)).unwrap();
        assert_eq!(braid_twice, w);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_reduced_words(2).unwrap().len(), 1);
        let a32 = enumerate_reduced_words(3).unwrap();
        assert_eq!(
            a32,
            vec![
                ReducedWord::parse(3, "121").unwrap(),
                ReducedWord::parse(3, "212").unwrap()
            ]
        );
        assert_eq!(enumerate_reduced_words(4).unwrap().len(), 16);
    }

    #[test]
    fn commutation_class_counts() {
        assert_eq!(commutation_classes(3).unwrap().len(), 2);
        assert_eq!(commutation_classes(4).unwrap().len(), 8);
    }

    #[test]
    fn commuting_words_share_a_class() {
        let classes = commutation_classes(4).unwrap();
        let a = ReducedWord::parse(4, "121321").unwrap();
        let b = ReducedWord::parse(4, "123121").unwrap();
        let class_of = |w: &ReducedWord| classes.iter().position(|c| c.contains(w)).unwrap();
        assert_eq!(class_of(&a), class_of(&b));
    }

    #[test]
    fn moves_preserve_permutation_and_reducedness() {
        for n in 2..=5 {
            for w in enumerate_reduced_words(n).unwrap() {
                let p = w.permutation();
                for m in w.applicable_moves() {
                    let next = w.apply_move(m).unwrap();
                    assert_eq!(next.permutation(), p);
                    assert_eq!(next.apply_move(m).unwrap(), w, "moves are involutions");
                }
            }
        }
    }

    #[test]
    fn distant_commute_moves_commute() {
        let w = ReducedWord::parse(4, "2131213").ok();
        assert!(w.is_none(), "7 letters is longer than the longest element");
        let w = ReducedWord::parse(4, "213213").unwrap();
        // L(1) and L(4) both apply and commute.
        let a = w
            .apply_move(Move::Commute(1))
            .unwrap()
            .apply_move(Move::Commute(4))
            .unwrap();
        let b = w
            .apply_move(Move::Commute(4))
            .unwrap()
            .apply_move(Move::Commute(1))
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn move_graph_connectivity() {
        for n in 2..=5 {
            assert!(move_graph_connected(n).unwrap());
        }
    }

    #[test]
    fn canonical_chain_word_sequences() {
        let (upper, lower) = canonical_chains_n4();
        let upper_words: Vec<String> = upper.words().iter().map(|w| w.to_string()).collect();
        assert_eq!(
            upper_words,
            ["121321", "212321", "213231", "231231", "231213", "232123", "323123", "321323"]
        );
        let lower_words: Vec<String> = lower.words().iter().map(|w| w.to_string()).collect();
        assert_eq!(
            lower_words,
            ["121321", "123121", "123212", "132312", "132132", "312132", "321232", "321323"]
        );
        // The two chains share exactly their endpoints: 14 distinct words.
        let mut all: BTreeSet<&String> = upper_words.iter().collect();
        all.extend(lower_words.iter());
        assert_eq!(all.len(), 14);
    }

    #[test]
    fn minimal_and_maximal_words_are_enumerated() {
        for n in 3..=5 {
            let all: BTreeSet<_> = enumerate_reduced_words(n).unwrap().into_iter().collect();
            assert!(all.contains(&minimal_word(n)));
            assert!(all.contains(&maximal_word(n)));
        }
        assert_eq!(minimal_word(4).to_string(), "121321");
        assert_eq!(maximal_word(4).to_string(), "323123");
    }
}
