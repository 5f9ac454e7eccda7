//! Higher regularity schemas and finite-semigroup experiments.
//!
//! The idempotence of a k-ary cyclic-shift matrix, expressed in components,
//! gives k-1 cyclic word conditions on the entries — `[k]`-regularity, and for
//! higher polyadic powers `[k]-<l>`-regularity. This module derives those
//! schemas and tests them on finite semigroups given by Cayley tables,
//! including the closure proposition (products of idempotent matrices stay
//! idempotent exactly over commutative tables).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::word::{Mode, Word};

/// Tuple-enumeration guard for the brute-force searches.
pub const ENUMERATION_GUARD: u64 = 1_000_000;
/// Fixed seed for the sampling fallback, so reports are reproducible.
pub const SAMPLING_SEED: u64 = 0x706f6c79;
/// Number of random k-tuples drawn when sampling replaces full enumeration.
pub const SAMPLE_COUNT: u64 = 100_000;

/// The k-1 relations forced by `<l>`-idempotence of a k-ary matrix.
///
/// Equation j (1-based) reads: l cyclic repetitions of the window starting at
/// generator j, followed by generator j, equal generator j. Its left side has
/// exactly l(k-1)+1 letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularitySchema {
    k: u32,
    ell: u32,
    equations: Vec<(Word, Word)>,
}

impl RegularitySchema {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn equations(&self) -> &[(Word, Word)] {
        &self.equations
    }

    /// Renders the schema with single-letter generator names `a`, `b`, `c`...
    /// (falling back to `g<i>` tokens past `z`), one equation per line.
    pub fn display(&self) -> String {
        let name = |index: u32| -> String {
            if self.k - 1 <= 26 {
                char::from(b'a' + (index - 1) as u8).to_string()
            } else {
                format!("g{index}")
            }
        };
        let render = |w: &Word| -> String {
            w.letters().iter().map(|l| name(l.generator.get())).collect::<Vec<_>>().join("")
        };
        let mut out = String::new();
        for (lhs, rhs) in &self.equations {
            out.push_str(&format!("{} = {}\n", render(lhs), render(rhs)));
        }
        out
    }
}

/// Derives the `[k]-<l>`-regularity schema from matrix idempotence.
pub fn idempotence_relations(k: u32, ell: u32) -> Result<RegularitySchema> {
    if k < 3 || ell < 1 {
        return Err(Error::BadSchemaParams { k, ell });
    }
    ell.checked_mul(k - 1)
        .and_then(|x| x.checked_add(1))
        .ok_or(Error::ArithmeticOverflow("schema word length"))?;
    let window = (k - 1) as usize;
    let mut equations = Vec::with_capacity(window);
    for j in 0..window {
        let mut letters = Vec::with_capacity(ell as usize * window + 1);
        for _ in 0..ell {
            for t in 0..window {
                let index = ((j + t) % window + 1) as u32;
                letters.push(crate::word::Letter::positive(index)?);
            }
        }
        letters.push(crate::word::Letter::positive((j + 1) as u32)?);
        let lhs = Word::semigroup(letters)?;
        let rhs = Word::generator(Mode::Semigroup, (j + 1) as u32)?;
        equations.push((lhs, rhs));
    }
    Ok(RegularitySchema { k, ell, equations })
}

/// A finite semigroup given by its multiplication table.
///
/// Associativity is validated eagerly on construction (O(m^3)); the whole
/// regularity theory assumes semigroups, so non-associative input is a hard
/// error.
/// The identity is optional — no operation requires one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    order: usize,
    table: Vec<usize>,
    identity: Option<usize>,
}

impl CayleyTable {
    pub fn new(rows: Vec<Vec<usize>>, identity: Option<usize>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::BadTable("table must have at least one element".into()));
        }
        let mut table = Vec::with_capacity(order * order);
        for row in &rows {
            if row.len() != order {
                return Err(Error::BadTable(format!(
                    "expected {order} columns per row, got {}",
                    row.len()
                )));
            }
            for &value in row {
                if value >= order {
                    return Err(Error::ElementOutOfRange { index: value, order });
                }
                table.push(value);
            }
        }
        let t = CayleyTable { order, table, identity: None };
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if t.product(t.product(a, b), c) != t.product(a, t.product(b, c)) {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }
        if let Some(e) = identity {
            if e >= order {
                return Err(Error::ElementOutOfRange { index: e, order });
            }
            for x in 0..order {
                if t.product(e, x) != x || t.product(x, e) != x {
                    return Err(Error::BadIdentity(e));
                }
            }
        }
        Ok(CayleyTable { identity, ..t })
    }

    /// Parses the table file format: first line `order m [identity i]`, then
    /// m lines of m space-separated 0-based indices.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::BadTable("empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (order, identity) = match fields.as_slice() {
            ["order", m] => (parse_index(m)?, None),
            ["order", m, "identity", i] => (parse_index(m)?, Some(parse_index(i)?)),
            _ => return Err(Error::BadTable(format!("bad header line `{header}`"))),
        };
        let mut rows = Vec::with_capacity(order);
        for _ in 0..order {
            let line =
                lines.next().ok_or_else(|| Error::BadTable(format!("expected {order} rows")))?;
            let row = line.split_whitespace().map(parse_index).collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if lines.next().is_some() {
            return Err(Error::BadTable("trailing rows after the table".into()));
        }
        CayleyTable::new(rows, identity)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Option<usize> {
        self.identity
    }

    #[inline]
    pub fn product(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    fn check_tuple(&self, tuple: &[usize], k: u32) -> Result<()> {
        let expected = (k - 1) as usize;
        if k < 3 {
            return Err(Error::ArityTooSmall(k));
        }
        if tuple.len() != expected {
            return Err(Error::EntryCount { arity: k, expected, got: tuple.len() });
        }
        for &x in tuple {
            if x >= self.order {
                return Err(Error::ElementOutOfRange { index: x, order: self.order });
            }
        }
        Ok(())
    }

    /// Whether the tuple satisfies all k-1 equations of the `[k]-<l>` schema.
    pub fn is_regular_tuple(&self, tuple: &[usize], k: u32, ell: u32) -> Result<bool> {
        self.check_tuple(tuple, k)?;
        if ell < 1 {
            return Err(Error::BadSchemaParams { k, ell });
        }
        let window = (k - 1) as usize;
        for j in 0..window {
            let mut acc = tuple[j];
            for rep in 0..(ell as usize * window) {
                // Skip the leading factor (already in acc), walk the rest of
                // the cyclic sequence, then the trailing g_j.
                if rep == 0 {
                    continue;
                }
                acc = self.product(acc, tuple[(j + rep) % window]);
            }
            acc = self.product(acc, tuple[j]);
            if acc != tuple[j] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All (k-1)-tuples satisfying the `[k]-<l>` schema, in lexicographic
    /// order. Guarded: refuses tables with more than 10^6 candidate tuples.
    pub fn regular_tuples(&self, k: u32, ell: u32) -> Result<Vec<Vec<usize>>> {
        if k < 3 {
            return Err(Error::ArityTooSmall(k));
        }
        let window = (k - 1) as usize;
        let total = (self.order as u128).pow(window as u32);
        if total > ENUMERATION_GUARD as u128 {
            return Err(Error::EnumerationGuard { tuples: total, guard: ENUMERATION_GUARD });
        }
        let mut result = Vec::new();
        let mut tuple = vec![0usize; window];
        loop {
            if self.is_regular_tuple(&tuple, k, ell)? {
                result.push(tuple.clone());
            }
            if !next_tuple(&mut tuple, self.order) {
                break;
            }
        }
        Ok(result)
    }

    /// The tuples forming idempotent k-ary matrices (the l = 1 case).
    pub fn idempotent_matrices(&self, k: u32) -> Result<Vec<Vec<usize>>> {
        self.regular_tuples(k, 1)
    }

    /// The k-ary matrix product in tuple form: factor m contributes its entry
    /// at cyclic offset m from the slot.
    pub fn mu_k_tuple(&self, factors: &[&[usize]], k: u32) -> Result<Vec<usize>> {
        if factors.len() != k as usize {
            return Err(Error::ProductArity { expected: k, got: factors.len() });
        }
        for factor in factors {
            self.check_tuple(factor, k)?;
        }
        let window = (k - 1) as usize;
        let mut product = Vec::with_capacity(window);
        for j in 0..window {
            let mut acc = factors[0][j];
            for (m, factor) in factors.iter().enumerate().skip(1) {
                acc = self.product(acc, factor[(j + m) % window]);
            }
            product.push(acc);
        }
        Ok(product)
    }

    /// Searches for k idempotent matrices whose k-ary product is not
    /// idempotent. Exhaustive when the tuple count fits the guard; otherwise
    /// falls back to fixed-seed sampling so reports stay reproducible.
    pub fn closure_violations(&self, k: u32) -> Result<ClosureReport> {
        let idempotents = self.idempotent_matrices(k)?;
        let combos = (idempotents.len() as u128).pow(k);
        let mut report = ClosureReport {
            violations: Vec::new(),
            idempotent_count: idempotents.len(),
            checked: 0,
            sampled: combos > ENUMERATION_GUARD as u128,
        };
        if idempotents.is_empty() {
            return Ok(report);
        }
        let mut check = |choice: &[usize]| -> Result<()> {
            let factors: Vec<&[usize]> =
                choice.iter().map(|&i| idempotents[i].as_slice()).collect();
            let product = self.mu_k_tuple(&factors, k)?;
            report.checked += 1;
            if !self.is_regular_tuple(&product, k, 1)? {
                report.violations.push(ClosureViolation {
                    factors: factors.iter().map(|f| f.to_vec()).collect(),
                    product,
                });
            }
            Ok(())
        };
        if !report.sampled {
            let mut choice = vec![0usize; k as usize];
            loop {
                check(&choice)?;
                if !next_tuple(&mut choice, idempotents.len()) {
                    break;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
            let mut choice = vec![0usize; k as usize];
            for _ in 0..SAMPLE_COUNT {
                for slot in choice.iter_mut() {
                    *slot = rng.gen_range(0..idempotents.len());
                }
                check(&choice)?;
            }
        }
        Ok(report)
    }
}

/// One counterexample to closure: the chosen idempotent factors and their
/// non-idempotent product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureViolation {
    pub factors: Vec<Vec<usize>>,
    pub product: Vec<usize>,
}

/// Outcome of a closure search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub violations: Vec<ClosureViolation>,
    pub idempotent_count: usize,
    pub checked: u64,
    pub sampled: bool,
}

fn parse_index(text: &str) -> Result<usize> {
    text.parse::<usize>().map_err(|_| Error::BadTable(format!("bad number `{text}`")))
}

/// Advances a mixed-radix tuple; false once the enumeration wraps.
fn next_tuple(tuple: &mut [usize], radix: usize) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < radix {
            return true;
        }
        *slot = 0;
    }
    false
}
