//! Symbolic n-by-n matrices over the rational-function field: block
//! embeddings, long products along reduced words, triangularity with
//! respect to the complementary diagonal, quaternity squares, elementary
//! matrix identities, and permutation factorization of prefix products.

use std::fmt;

use crate::exactalg::{RationalFunction, Variable};
use crate::words::{Perm, ReducedWord};

#[derive(Debug, thiserror::Error)]
pub enum EvolveError {
    #[error("block index {i} out of range for n = {n}")]
    IndexOutOfRange { i: usize, n: usize },
    #[error("{blocks} parameter blocks for a word of length {letters}")]
    ArityMismatch { blocks: usize, letters: usize },
    #[error("matrix identity fails at entry ({row}, {col}): {lhs} != {rhs}")]
    IdentityFails { row: usize, col: usize, lhs: String, rhs: String },
    #[error("quaternity check fails: {0}")]
    QuaternityFails(String),
    #[error("long product is not c-upper triangular for word {word}")]
    TheoremViolated { word: String },
    #[error("no permutation rearranges the prefix into c-upper form")]
    NoPermutation,
    #[error("{0} distinct permutations rearrange the prefix into c-upper form")]
    NonUniquePermutation(usize),
}

/// A dense matrix of rational functions.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixRF {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<RationalFunction>,
}

impl MatrixRF {
    pub fn from_fn(
        n_rows: usize,
        n_cols: usize,
        mut f: impl FnMut(usize, usize) -> RationalFunction,
    ) -> Self {
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for i in 1..=n_rows {
            for j in 1..=n_cols {
                entries.push(f(i, j));
            }
        }
        MatrixRF { n_rows, n_cols, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                RationalFunction::one()
            } else {
                RationalFunction::zero()
            }
        })
    }

    pub fn n(&self) -> usize {
        debug_assert_eq!(self.n_rows, self.n_cols);
        self.n_rows
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn at(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[(i - 1) * self.n_cols + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RationalFunction) {
        self.entries[(i - 1) * self.n_cols + (j - 1)] = v;
    }

    pub fn mul(&self, other: &MatrixRF) -> MatrixRF {
        assert_eq!(self.n_cols, other.n_rows);
        MatrixRF::from_fn(self.n_rows, other.n_cols, |i, j| {
            let mut acc = RationalFunction::zero();
            for k in 1..=self.n_cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(other.at(k, j)));
            }
            acc
        })
    }

    /// Determinant by cofactor expansion along the first column.
    pub fn det(&self) -> RationalFunction {
        assert_eq!(self.n_rows, self.n_cols);
        let n = self.n_rows;
        if n == 1 {
            return self.at(1, 1).clone();
        }
        let mut acc = RationalFunction::zero();
        for i in 1..=n {
            let c = self.at(i, 1);
            if c.is_zero() {
                continue;
            }
            let minor = MatrixRF::from_fn(n - 1, n - 1, |r, s| {
                let rr = if r < i { r } else { r + 1 };
                self.at(rr, s + 1).clone()
            });
            let term = c.mul(&minor.det());
            acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    pub fn entrywise_eq(&self, other: &MatrixRF) -> Result<(), EvolveError> {
        assert_eq!((self.n_rows, self.n_cols), (other.n_rows, other.n_cols));
        for i in 1..=self.n_rows {
            for j in 1..=self.n_cols {
                if !self.at(i, j).alg_eq(other.at(i, j)) {
                    return Err(EvolveError::IdentityFails {
                        row: i,
                        col: j,
                        lhs: self.at(i, j).to_string(),
                        rhs: other.at(i, j).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Left multiplication by the reversal matrix: rows in reverse order.
    pub fn reverse_rows(&self) -> MatrixRF {
        MatrixRF::from_fn(self.n_rows, self.n_cols, |i, j| {
            self.at(self.n_rows + 1 - i, j).clone()
        })
    }

    /// Right multiplication by the reversal matrix: columns in reverse order.
    pub fn reverse_cols(&self) -> MatrixRF {
        MatrixRF::from_fn(self.n_rows, self.n_cols, |i, j| {
            self.at(i, self.n_cols + 1 - j).clone()
        })
    }

    /// Apply to a column of rational functions.
    pub fn apply_to_column(&self, col: &[RationalFunction]) -> Vec<RationalFunction> {
        assert_eq!(col.len(), self.n_cols);
        (1..=self.n_rows)
            .map(|i| {
                let mut acc = RationalFunction::zero();
                for j in 1..=self.n_cols {
                    acc = acc.add(&self.at(i, j).mul(&col[j - 1]));
                }
                acc
            })
            .collect()
    }
}

impl fmt::Display for MatrixRF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.n_rows {
            f.write_str("[")?;
            for j in 1..=self.n_cols {
                if j > 1 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            f.write_str("]")?;
            if i < self.n_rows {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

/// The block embedding acting as the 2x2 matrix on rows/columns i, i+1 and
/// as the identity elsewhere.
pub fn phi_embed(block: &MatrixRF, i: usize, n: usize) -> Result<MatrixRF, EvolveError> {
    assert_eq!((block.n_rows, block.n_cols), (2, 2));
    if i == 0 || i + 1 > n {
        return Err(EvolveError::IndexOutOfRange { i, n });
    }
    let mut m = MatrixRF::identity(n);
    m.set(i, i, block.at(1, 1).clone());
    m.set(i, i + 1, block.at(1, 2).clone());
    m.set(i + 1, i, block.at(2, 1).clone());
    m.set(i + 1, i + 1, block.at(2, 2).clone());
    Ok(m)
}

/// The 3x3 embedding acting on rows/columns 1 and 3, with middle row (0,1,0).
pub fn m13_embed(block: &MatrixRF) -> MatrixRF {
    assert_eq!((block.n_rows, block.n_cols), (2, 2));
    let mut m = MatrixRF::identity(3);
    m.set(1, 1, block.at(1, 1).clone());
    m.set(1, 3, block.at(1, 2).clone());
    m.set(3, 1, block.at(2, 1).clone());
    m.set(3, 3, block.at(2, 2).clone());
    m
}

/// Row-rearrangement matrix of a permutation: row i of `perm_rows(s) * M`
/// is row s(i) of M.
pub fn perm_rows(perm: &Perm) -> MatrixRF {
    let n = perm.n();
    MatrixRF::from_fn(n, n, |i, j| {
        if perm.apply(i) == j {
            RationalFunction::one()
        } else {
            RationalFunction::zero()
        }
    })
}

/// Column-rearrangement matrix: column j of `M * perm_cols(t)` is column
/// t(j) of M.
pub fn perm_cols(perm: &Perm) -> MatrixRF {
    let n = perm.n();
    MatrixRF::from_fn(n, n, |i, j| {
        if perm.apply(j) == i {
            RationalFunction::one()
        } else {
            RationalFunction::zero()
        }
    })
}

/// The matrix with ones on the complementary diagonal.
pub fn reversal_matrix(n: usize) -> MatrixRF {
    perm_rows(&Perm::longest(n))
}

/// Zero patterns relative to the main and complementary diagonals. A matrix
/// may satisfy several at once; the identity-sized reversal is both c-upper
/// and c-lower unipotent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TriangularityFlags {
    pub upper_b: bool,
    pub lower_b: bool,
    pub c_upper_b: bool,
    pub c_lower_b: bool,
    pub c_upper_n: bool,
    pub c_lower_n: bool,
}

pub fn classify_triangularity(m: &MatrixRF) -> TriangularityFlags {
    let n = m.n();
    let mut f = TriangularityFlags {
        upper_b: true,
        lower_b: true,
        c_upper_b: true,
        c_lower_b: true,
        ..Default::default()
    };
    for i in 1..=n {
        for j in 1..=n {
            let zero = m.at(i, j).is_zero();
            if i > j && !zero {
                f.upper_b = false;
            }
            if i < j && !zero {
                f.lower_b = false;
            }
            if i == j && zero {
                f.upper_b = false;
                f.lower_b = false;
            }
            if i + j > n + 1 && !zero {
                f.c_upper_b = false;
            }
            if i + j < n + 1 && !zero {
                f.c_lower_b = false;
            }
            if i + j == n + 1 && zero {
                f.c_upper_b = false;
                f.c_lower_b = false;
            }
        }
    }
    let comp_diag_unit = (1..=n).all(|i| m.at(i, n + 1 - i).is_one());
    f.c_upper_n = f.c_upper_b && comp_diag_unit;
    f.c_lower_n = f.c_lower_b && comp_diag_unit;
    f
}

/// Prefix products B_k = phi_{i_1}(A_1) ... phi_{i_k}(A_k) along a word;
/// `blocks[k]` is the 2x2 matrix for letter k.
pub fn product_along_word(
    word: &ReducedWord,
    blocks: &[MatrixRF],
) -> Result<Vec<MatrixRF>, EvolveError> {
    if blocks.len() != word.len() {
        return Err(EvolveError::ArityMismatch {
            blocks: blocks.len(),
            letters: word.len(),
        });
    }
    let n = word.n();
    let mut out = Vec::with_capacity(blocks.len());
    let mut acc = MatrixRF::identity(n);
    for (k, block) in blocks.iter().enumerate() {
        acc = acc.mul(&phi_embed(block, word.letters()[k], n)?);
        out.push(acc.clone());
    }
    Ok(out)
}

/// The matrix ((a, b), (c, 0)) with fresh symbols a_k, b_k, c_k per letter.
pub fn symbolic_abc_blocks(count: usize) -> Vec<MatrixRF> {
    (1..=count)
        .map(|k| {
            MatrixRF::from_fn(2, 2, |i, j| match (i, j) {
                (1, 1) => RationalFunction::var_named(&format!("a{k}")),
                (1, 2) => RationalFunction::var_named(&format!("b{k}")),
                (2, 1) => RationalFunction::var_named(&format!("c{k}")),
                _ => RationalFunction::zero(),
            })
        })
        .collect()
}

/// For every reduced word of w_0(n) the fully symbolic long product lands
/// in the c-upper Borel set.
pub fn long_product_triangularity(word: &ReducedWord) -> Result<(), EvolveError> {
    let blocks = symbolic_abc_blocks(word.len());
    let prefixes = product_along_word(word, &blocks)?;
    let full = prefixes.last().expect("nonempty word");
    if !classify_triangularity(full).c_upper_b {
        return Err(EvolveError::TheoremViolated { word: word.to_string() });
    }
    Ok(())
}

/// Search S(n) for permutations rearranging the rows of `m` into c-upper
/// form; the theorem asserts there is exactly one.
pub fn row_permutations_to_c_upper(m: &MatrixRF) -> Vec<Perm> {
    Perm::all(m.n())
        .into_iter()
        .filter(|p| classify_triangularity(&perm_rows(p).mul(m)).c_upper_b)
        .collect()
}

pub fn col_permutations_to_c_upper(m: &MatrixRF) -> Vec<Perm> {
    Perm::all(m.n())
        .into_iter()
        .filter(|p| classify_triangularity(&m.mul(&perm_cols(p))).c_upper_b)
        .collect()
}

pub enum FactorSide {
    Left,
    Right,
}

/// The unique permutation that moves the k-th prefix product into c-upper
/// form, by exhaustive search. On the left it is the prefix permutation
/// composed with the longest element (as a row rearrangement), on the right
/// the suffix permutation (as a column rearrangement); see
/// `permutation_factorization_matches_word` in the tests.
pub fn permutation_factorization(
    word: &ReducedWord,
    k: usize,
    side: FactorSide,
) -> Result<Perm, EvolveError> {
    let blocks = symbolic_abc_blocks(word.len());
    let prefixes = product_along_word(word, &blocks)?;
    let m = if k == 0 {
        MatrixRF::identity(word.n())
    } else {
        prefixes[k - 1].clone()
    };
    let found = match side {
        FactorSide::Left => row_permutations_to_c_upper(&m),
        FactorSide::Right => col_permutations_to_c_upper(&m),
    };
    match found.len() {
        0 => Err(EvolveError::NoPermutation),
        1 => Ok(found.into_iter().next().unwrap()),
        k => Err(EvolveError::NonUniquePermutation(k)),
    }
}

/// Upper-triangular matrix with distinct symbolic entries m_i_j; the
/// N-variant puts ones on the diagonal.
pub fn symbolic_upper(n: usize, unipotent: bool) -> MatrixRF {
    MatrixRF::from_fn(n, n, |i, j| {
        if i > j {
            RationalFunction::zero()
        } else if i == j && unipotent {
            RationalFunction::one()
        } else {
            RationalFunction::var_named(&format!("m{i}_{j}"))
        }
    })
}

/// Walk the four-step square B+ -> Bc- -> B- -> Bc+ -> B+ (left and right
/// multiplication by the reversal, alternating), checking the corner
/// classes and that the loop is the identity. The N-variant replaces B by N.
pub fn quaternity_check(n: usize) -> Result<(), EvolveError> {
    let rev = reversal_matrix(n);
    if rev.mul(&rev) != MatrixRF::identity(n) {
        return Err(EvolveError::QuaternityFails("reversal is not an involution".into()));
    }
    for unipotent in [false, true] {
        let m0 = symbolic_upper(n, unipotent);
        let tag = if unipotent { "N" } else { "B" };
        let c1 = rev.mul(&m0);
        let c2 = c1.mul(&rev);
        let c3 = rev.mul(&c2);
        let c4 = c3.mul(&rev);
        let f1 = classify_triangularity(&c1);
        let f2 = classify_triangularity(&c2);
        let f3 = classify_triangularity(&c3);
        let ok1 = if unipotent { f1.c_lower_n } else { f1.c_lower_b };
        if !ok1 {
            return Err(EvolveError::QuaternityFails(format!("{tag}: first corner not c-lower")));
        }
        if !f2.lower_b || (unipotent && !(1..=n).all(|i| c2.at(i, i).is_one())) {
            return Err(EvolveError::QuaternityFails(format!("{tag}: second corner not lower")));
        }
        let ok3 = if unipotent { f3.c_upper_n } else { f3.c_upper_b };
        if !ok3 {
            return Err(EvolveError::QuaternityFails(format!("{tag}: third corner not c-upper")));
        }
        if c4 != m0 {
            return Err(EvolveError::QuaternityFails(format!("{tag}: loop is not the identity")));
        }
        if !classify_triangularity(&c4).upper_b {
            return Err(EvolveError::QuaternityFails(format!("{tag}: loop leaves upper Borel")));
        }
    }
    Ok(())
}

/// The matrix I_n + a E_ij.
pub fn elementary(n: usize, i: usize, j: usize, a: &RationalFunction) -> MatrixRF {
    let mut m = MatrixRF::identity(n);
    m.set(i, j, a.clone());
    m
}

/// Inverse and commutator identities of elementary matrices: the inverse
/// negates the parameter, and [e^a_ij, e^b_jk] = e^(ab)_ik for i != k,
/// while disjoint index pairs commute.
pub fn elementary_identities(n: usize) -> Result<(), EvolveError> {
    let a = RationalFunction::var_named("a");
    let b = RationalFunction::var_named("b");
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let e = elementary(n, i, j, &a);
            let e_inv = elementary(n, i, j, &a.neg());
            e.mul(&e_inv).entrywise_eq(&MatrixRF::identity(n))?;
            for k in 1..=n {
                if k == j || k == i {
                    continue;
                }
                let f = elementary(n, j, k, &b);
                let f_inv = elementary(n, j, k, &b.neg());
                let comm = e.mul(&f).mul(&e_inv).mul(&f_inv);
                comm.entrywise_eq(&elementary(n, i, k, &a.mul(&b)))?;
            }
            // Disjoint pairs commute: [e^a_ij, e^b_kl] = I for {i,j} and
            // {k,l} disjoint.
            for k in 1..=n {
                for l in 1..=n {
                    if k == l || k == i || k == j || l == i || l == j {
                        continue;
                    }
                    let f = elementary(n, k, l, &b);
                    let f_inv = elementary(n, k, l, &b.neg());
                    let comm = e.mul(&f).mul(&elementary(n, i, j, &a.neg())).mul(&f_inv);
                    comm.entrywise_eq(&MatrixRF::identity(n))?;
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_rf;
    use crate::words::{enumerate_reduced_words, minimal_word};

    fn abc_block(k: usize) -> MatrixRF {
        symbolic_abc_blocks(k).pop().unwrap()
    }

    #[test]
    fn phi_embed_matches_display() {
        // A_2 at n = 3 has the block in the lower-right corner and 1 at (1,1).
        let m = phi_embed(&abc_block(1), 2, 3).unwrap();
        assert!(m.at(1, 1).is_one());
        assert!(m.at(1, 2).is_zero());
        assert_eq!(m.at(2, 2).to_string(), "a1");
        assert_eq!(m.at(2, 3).to_string(), "b1");
        assert_eq!(m.at(3, 2).to_string(), "c1");
        assert!(m.at(3, 3).is_zero());
        let id = phi_embed(&MatrixRF::identity(2), 1, 4).unwrap();
        assert_eq!(id, MatrixRF::identity(4));
    }

    #[test]
    fn m13_embed_shape() {
        let m = m13_embed(&MatrixRF::from_fn(2, 2, |i, j| {
            RationalFunction::var_named(&format!("x{i}{j}"))
        }));
        assert!(m.at(2, 2).is_one());
        assert!(m.at(2, 1).is_zero() && m.at(2, 3).is_zero());
        assert_eq!(m.at(1, 3).to_string(), "x12");
        assert_eq!(m.at(3, 1).to_string(), "x21");
    }

    #[test]
    fn double_product_matches_display() {
        // A(a1,b1,c1)_1 A(a2,b2,c2)_2 = [[a1, b1 a2, b1 b2], [c1,0,0], [0,c2,0]]
        let word = ReducedWord::parse(3, "12").unwrap();
        let blocks = symbolic_abc_blocks(2);
        let b2 = product_along_word(&word, &blocks).unwrap().pop().unwrap();
        let expect = [
            ["a1", "a2*b1", "b1*b2"],
            ["c1", "0", "0"],
            ["0", "c2", "0"],
        ];
        for i in 1..=3 {
            for j in 1..=3 {
                assert!(b2.at(i, j).alg_eq(&parse_rf(expect[i - 1][j - 1]).unwrap()));
            }
        }
        // Swapping the second and third row lands in c-upper form.
        let swapped = perm_rows(&Perm::adjacent(3, 2)).mul(&b2);
        assert!(classify_triangularity(&swapped).c_upper_b);
    }

    #[test]
    fn triple_products_match_displays() {
        let word121 = ReducedWord::parse(3, "121").unwrap();
        let blocks = symbolic_abc_blocks(3);
        let m = product_along_word(&word121, &blocks).unwrap().pop().unwrap();
        let expect = [
            ["a1*a3 + a2*b1*c3", "a1*b3", "b1*b2"],
            ["c1*a3", "c1*b3", "0"],
            ["c2*c3", "0", "0"],
        ];
        for i in 1..=3 {
            for j in 1..=3 {
                assert!(m.at(i, j).alg_eq(&parse_rf(expect[i - 1][j - 1]).unwrap()));
            }
        }
        assert!(classify_triangularity(&m).c_upper_b);

        let word212 = ReducedWord::parse(3, "212").unwrap();
        let m2 = product_along_word(&word212, &blocks).unwrap().pop().unwrap();
        let expect2 = [
            ["a2", "b2*a3", "b2*b3"],
            ["a1*c2", "b1*c3", "0"],
            ["c1*c2", "0", "0"],
        ];
        for i in 1..=3 {
            for j in 1..=3 {
                assert!(m2.at(i, j).alg_eq(&parse_rf(expect2[i - 1][j - 1]).unwrap()));
            }
        }
    }

    #[test]
    fn det_multiplicativity_spot_check() {
        for n in 2..=4 {
            let word = minimal_word(n);
            let blocks = symbolic_abc_blocks(word.len());
            let prefixes = product_along_word(&word, &blocks).unwrap();
            let mut det_product = RationalFunction::one();
            for (k, b) in blocks.iter().enumerate() {
                det_product = det_product.mul(&phi_embed(b, word.letters()[k], n).unwrap().det());
            }
            assert!(prefixes.last().unwrap().det().alg_eq(&det_product));
        }
    }

    #[test]
    fn reversal_reverses_rows_and_columns() {
        for n in 2..=4 {
            let m = MatrixRF::from_fn(n, n, |i, j| {
                RationalFunction::var_named(&format!("x{i}_{j}"))
            });
            let rev = reversal_matrix(n);
            assert_eq!(rev.mul(&m), m.reverse_rows());
            assert_eq!(m.mul(&rev), m.reverse_cols());
        }
    }

    #[test]
    fn identity_reversal_classes() {
        let flags = classify_triangularity(&reversal_matrix(4));
        assert!(flags.c_upper_n && flags.c_lower_n);
        let dense = MatrixRF::from_fn(3, 3, |i, j| {
            RationalFunction::var_named(&format!("y{i}{j}"))
        });
        let f = classify_triangularity(&dense);
        assert!(!f.upper_b && !f.lower_b && !f.c_upper_b && !f.c_lower_b);
    }

    #[test]
    fn quaternity_small() {
        for n in 2..=4 {
            quaternity_check(n).unwrap();
        }
    }

    #[test]
    fn elementary_identity_small() {
        elementary_identities(3).unwrap();
        elementary_identities(4).unwrap();
    }

    #[test]
    fn non_reduced_word_is_a_negative_control() {
        // 112 is not reduced; the raw product need not be c-upper.
        let blocks = symbolic_abc_blocks(3);
        let n = 3;
        let mut acc = MatrixRF::identity(n);
        for (k, &letter) in [1usize, 1, 2].iter().enumerate() {
            acc = acc.mul(&phi_embed(&blocks[k], letter, n).unwrap());
        }
        assert!(!classify_triangularity(&acc).c_upper_b);
    }

    #[test]
    fn long_products_all_words_n3_n4() {
        for n in [3, 4] {
            for word in enumerate_reduced_words(n).unwrap() {
                long_product_triangularity(&word).unwrap();
            }
        }
    }

    #[test]
    fn permutation_factorization_matches_word() {
        // Row side: the found permutation composed with the reversal is the
        // prefix permutation; column side: the suffix permutation directly.
        for word in enumerate_reduced_words(3).unwrap() {
            let w0 = Perm::longest(3);
            for k in 0..=word.len() {
                let row = permutation_factorization(&word, k, FactorSide::Left).unwrap();
                assert_eq!(row.compose(&w0), word.prefix_permutation(k), "word {word} k={k}");
                let col = permutation_factorization(&word, k, FactorSide::Right).unwrap();
                assert_eq!(col, word.suffix_permutation(k), "word {word} k={k}");
            }
        }
    }

    #[test]
    fn factorization_k2_is_the_section_swap() {
        // For 121 at k = 2 the row rearrangement is the (2 3) swap.
        let word = ReducedWord::parse(3, "121").unwrap();
        let p = permutation_factorization(&word, 2, FactorSide::Left).unwrap();
        assert_eq!(p, Perm::adjacent(3, 2));
    }
}
