//! k-ary cyclic-shift matrices over words.
//!
//! A `PolyMatrix` of arity k is a (k-1)x(k-1) matrix whose only nonzero
//! entries sit on the diagonal shifted by `d`: entry `j` (0-based) lives at
//! row `j`, column `(j + d) mod (k-1)`. The canonical matrices of the k-ary
//! product have d = 1; diagonal intermediates (d = 0) and the other shift
//! classes arise inside ordinary binary products, so the class is stored
//! rather than encoded in separate types.

use std::fmt;

use crate::error::{Error, Result};
use crate::relation::RelationChain;
use crate::word::{Mode, Word};

/// A cyclic-shift matrix with word entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    arity: u32,
    shift: u32,
    entries: Vec<Word>,
}

impl PolyMatrix {
    /// Builds a matrix of arity `k` with the given entries and shift class.
    pub fn make(k: u32, entries: Vec<Word>, shift: u32) -> Result<Self> {
        if k < 3 {
            return Err(Error::ArityTooSmall(k));
        }
        let expected = (k - 1) as usize;
        if entries.len() != expected {
            return Err(Error::EntryCount { arity: k, expected, got: entries.len() });
        }
        let mode = entries[0].mode();
        if entries.iter().any(|w| w.mode() != mode) {
            return Err(Error::ModeMismatch("matrix entries must share one mode"));
        }
        if shift >= k - 1 {
            return Err(Error::ShiftOutOfRange { arity: k, shift });
        }
        Ok(PolyMatrix { arity: k, shift, entries })
    }

    /// The canonical shape: shift class d = 1.
    pub fn new(k: u32, entries: Vec<Word>) -> Result<Self> {
        Self::make(k, entries, 1)
    }

    /// The polyadic identity E(k-1): all entries `e`, d = 1.
    pub fn identity(k: u32) -> Result<Self> {
        if k < 3 {
            return Err(Error::ArityTooSmall(k));
        }
        let entries = vec![Word::identity(); (k - 1) as usize];
        Self::make(k, entries, 1)
    }

    /// The matrix generator with single-letter entries `s[indices[j]]`.
    pub fn generator(k: u32, indices: &[u32]) -> Result<Self> {
        if k < 3 {
            return Err(Error::ArityTooSmall(k));
        }
        let expected = (k - 1) as usize;
        if indices.len() != expected {
            return Err(Error::EntryCount { arity: k, expected, got: indices.len() });
        }
        let entries =
            indices.iter().map(|&i| Word::generator(Mode::Group, i)).collect::<Result<Vec<_>>>()?;
        Self::make(k, entries, 1)
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn mode(&self) -> Mode {
        self.entries[0].mode()
    }

    pub fn entries(&self) -> &[Word] {
        &self.entries
    }

    fn side(&self) -> usize {
        (self.arity - 1) as usize
    }

    /// Ordinary binary matrix product, staying inside the cyclic-shift shape.
    ///
    /// The product of shift classes d_a and d_b has class (d_a + d_b) mod
    /// (k-1), and entry j picks up the b-entry offset cyclically by d_a.
    pub fn multiply(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.arity != other.arity {
            return Err(Error::ShapeMismatch("arities differ"));
        }
        if self.mode() != other.mode() {
            return Err(Error::ModeMismatch("matrix modes differ"));
        }
        let side = self.side();
        let shift = (self.shift + other.shift) % (self.arity - 1);
        let mut entries = Vec::with_capacity(side);
        for j in 0..side {
            let partner = (j + self.shift as usize) % side;
            entries.push(self.entries[j].concat(&other.entries[partner])?);
        }
        PolyMatrix::make(self.arity, entries, shift)
    }

    /// The k-ary product: the ordinary product of exactly k matrices of
    /// canonical shape. The result has shift class 1 again.
    pub fn mu_k(factors: &[PolyMatrix]) -> Result<PolyMatrix> {
        let first = factors.first().ok_or(Error::EmptyExpression)?;
        let k = first.arity;
        if factors.len() != k as usize {
            return Err(Error::ProductArity { expected: k, got: factors.len() });
        }
        if factors.iter().any(|m| m.shift != 1) {
            return Err(Error::ShiftNotCanonical("mu_k"));
        }
        let mut acc = first.clone();
        for m in &factors[1..] {
            acc = acc.multiply(m)?;
        }
        Ok(acc)
    }

    /// The polyadic power: `l` successive k-ary multiplications of copies of
    /// the matrix, i.e. the ordinary power l(k-1)+1.
    pub fn polyadic_power(&self, ell: u32) -> Result<PolyMatrix> {
        if self.shift != 1 {
            return Err(Error::ShiftNotCanonical("polyadic_power"));
        }
        let exponent = ell
            .checked_mul(self.arity - 1)
            .and_then(|x| x.checked_add(1))
            .ok_or(Error::ArithmeticOverflow("polyadic_power exponent"))?;
        let mut acc = self.clone();
        for _ in 1..exponent {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// The querelement: the polyadic inverse, with entry j the inverse of the
    /// cyclic product of the other k-2 entries starting after j. Substituted
    /// in any of the k argument positions of `mu_k` it returns the matrix.
    pub fn querelement(&self) -> Result<PolyMatrix> {
        if self.mode() != Mode::Group {
            return Err(Error::SemigroupInverse);
        }
        if self.shift != 1 {
            return Err(Error::ShiftNotCanonical("querelement"));
        }
        let side = self.side();
        let mut entries = Vec::with_capacity(side);
        for j in 0..side {
            let mut product = Word::identity();
            for t in 1..=(self.arity as usize - 2) {
                product = product.concat(&self.entries[(j + t) % side])?;
            }
            entries.push(product.invert()?);
        }
        PolyMatrix::make(self.arity, entries, 1)
    }

    /// Left scalar multiple: every entry prefixed by `q`.
    pub fn scalar_mul(&self, q: &Word) -> Result<PolyMatrix> {
        let entries = self.entries.iter().map(|w| q.concat(w)).collect::<Result<Vec<_>>>()?;
        PolyMatrix::make(self.arity, entries, self.shift)
    }

    /// Text form used by the CLI: a `k=.. d=..` header then one entry line.
    pub fn display_with(&self, alphabet: &str) -> String {
        let mut out = format!("k={} d={}\n", self.arity, self.shift);
        for (j, entry) in self.entries.iter().enumerate() {
            out.push_str(&format!("entry[{}] = {}\n", j + 1, entry.display_with(alphabet)));
        }
        out
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("s"))
    }
}

/// A symbolic product of matrix powers, evaluated with `multiply`.
#[derive(Debug, Clone)]
pub enum MatrixExpr {
    Matrix(PolyMatrix),
    /// Ordinary matrix power with exponent >= 1.
    Power(Box<MatrixExpr>, u32),
    /// Ordinary product of one or more factors.
    Product(Vec<MatrixExpr>),
    /// Left multiplication of every entry by a word, as in `q E(k-1)`.
    Scalar(Word, Box<MatrixExpr>),
}

impl MatrixExpr {
    pub fn eval(&self) -> Result<PolyMatrix> {
        match self {
            MatrixExpr::Matrix(m) => Ok(m.clone()),
            MatrixExpr::Power(base, exponent) => {
                if *exponent == 0 {
                    return Err(Error::EmptyExpression);
                }
                let base = base.eval()?;
                let mut acc = base.clone();
                for _ in 1..*exponent {
                    acc = acc.multiply(&base)?;
                }
                Ok(acc)
            }
            MatrixExpr::Product(factors) => {
                let mut iter = factors.iter();
                let first = iter.next().ok_or(Error::EmptyExpression)?;
                let mut acc = first.eval()?;
                for factor in iter {
                    acc = acc.multiply(&factor.eval()?)?;
                }
                Ok(acc)
            }
            MatrixExpr::Scalar(q, inner) => inner.eval()?.scalar_mul(q),
        }
    }
}

/// A matrix equation between two symbolic expressions, expandable into one
/// word equation per matrix slot.
#[derive(Debug, Clone)]
pub struct MatrixEquation {
    pub lhs: MatrixExpr,
    pub rhs: MatrixExpr,
}

impl MatrixEquation {
    pub fn new(lhs: MatrixExpr, rhs: MatrixExpr) -> Self {
        MatrixEquation { lhs, rhs }
    }

    pub fn expand(&self) -> Result<Vec<RelationChain>> {
        expand_equation(&self.lhs, &self.rhs)
    }
}

/// Expands a matrix equation into one word equation per matrix slot.
///
/// Both sides must evaluate to the same shift class; otherwise the nonzero
/// entries live in different slots and the equation is ill-posed.
pub fn expand_equation(lhs: &MatrixExpr, rhs: &MatrixExpr) -> Result<Vec<RelationChain>> {
    let left = lhs.eval()?;
    let right = rhs.eval()?;
    if left.arity() != right.arity() {
        return Err(Error::ShapeMismatch("equation sides have different arities"));
    }
    if left.shift() != right.shift() {
        return Err(Error::ShiftClassMismatch { lhs: left.shift(), rhs: right.shift() });
    }
    left.entries()
        .iter()
        .zip(right.entries())
        .map(|(a, b)| RelationChain::new(vec![a.clone(), b.clone()], None))
        .collect()
}
