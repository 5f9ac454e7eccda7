//! Finite presentations: classical and higher braid, symmetric and Coxeter
//! groups, and the verification that the higher braid presentations coincide
//! with the component expansion of the matrix-generator equations.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polymatrix::{expand_equation, MatrixExpr, PolyMatrix};
use crate::relation::{RelationChain, RelationTag};
use crate::word::{Letter, Mode, Word};

/// A group presentation: a generator count plus relation chains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    family: String,
    n: u32,
    k: u32,
    generators: u32,
    chains: Vec<RelationChain>,
}

impl Presentation {
    pub fn new(
        family: &str,
        n: u32,
        k: u32,
        generators: u32,
        chains: Vec<RelationChain>,
    ) -> Result<Self> {
        if generators == 0 {
            return Err(Error::BadPresentationParams("at least one generator".into()));
        }
        for chain in &chains {
            for word in chain.words() {
                if word.mode() != Mode::Group {
                    return Err(Error::ModeMismatch("presentation words must be group words"));
                }
                let max = word.max_index();
                if max > generators {
                    return Err(Error::IndexOutOfRange { index: max, bound: generators });
                }
            }
        }
        Ok(Presentation { family: family.to_string(), n, k, generators, chains })
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn generators(&self) -> u32 {
        self.generators
    }

    pub fn chains(&self) -> &[RelationChain] {
        &self.chains
    }

    /// Plain text form: a `generators:` line, then one chain per line.
    pub fn to_plain(&self, alphabet: &str) -> String {
        let mut out = format!("generators: {}\n", self.generators);
        for chain in &self.chains {
            out.push_str(&chain.display_with(alphabet));
            out.push('\n');
        }
        out
    }

    /// JSON form, newline-terminated, keys in fixed order.
    pub fn to_json(&self) -> String {
        let doc = PresentationDoc::from(self);
        let mut text = serde_json::to_string(&doc).expect("presentation serializes");
        text.push('\n');
        text
    }

    /// Parses the JSON form back into a validated presentation.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PresentationDoc =
            serde_json::from_str(text).map_err(|e| Error::BadPresentation(e.to_string()))?;
        doc.into_presentation()
    }
}

/// Serialized shape: words are lists of `[index, exponent]` pairs.
#[derive(Debug, Serialize, Deserialize)]
struct PresentationDoc {
    family: String,
    n: u32,
    k: u32,
    generators: u32,
    chains: Vec<ChainDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ChainDoc {
    tag: Option<RelationTag>,
    words: Vec<Vec<(u32, i8)>>,
}

impl From<&Presentation> for PresentationDoc {
    fn from(p: &Presentation) -> Self {
        let chains = p
            .chains
            .iter()
            .map(|chain| ChainDoc {
                tag: chain.tag(),
                words: chain
                    .words()
                    .iter()
                    .map(|w| {
                        w.letters()
                            .iter()
                            .map(|l| (l.generator.get(), l.exponent() as i8))
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        PresentationDoc {
            family: p.family.clone(),
            n: p.n,
            k: p.k,
            generators: p.generators,
            chains,
        }
    }
}

impl PresentationDoc {
    fn into_presentation(self) -> Result<Presentation> {
        let mut chains = Vec::with_capacity(self.chains.len());
        for chain in self.chains {
            let mut words = Vec::with_capacity(chain.words.len());
            for pairs in chain.words {
                let mut letters = Vec::with_capacity(pairs.len());
                for (index, exponent) in pairs {
                    let letter = match exponent {
                        1 => Letter::positive(index)?,
                        -1 => Letter::negative(index)?,
                        other => {
                            return Err(Error::BadPresentation(format!(
                                "letter exponent must be +1 or -1, got {other}"
                            )))
                        }
                    };
                    letters.push(letter);
                }
                words.push(Word::group(letters));
            }
            chains.push(RelationChain::new(words, chain.tag)?);
        }
        Presentation::new(&self.family, self.n, self.k, self.generators, chains)
    }
}

/// Exports in the named format (`plain` or `json`) with the default alphabet.
pub fn export(p: &Presentation, format: &str) -> Result<String> {
    match format {
        "plain" => Ok(p.to_plain("s")),
        "json" => Ok(p.to_json()),
        other => Err(Error::UnknownFormat(other.to_string())),
    }
}

fn positive_word(indices: &[u32]) -> Result<Word> {
    let letters = indices.iter().map(|&i| Letter::positive(i)).collect::<Result<Vec<_>>>()?;
    Ok(Word::group(letters))
}

/// The j-th word of the braid chain for window `i`: the length-k run of the
/// infinite cyclic sequence (s_i, ..., s_{i+k-2}, s_i, ...) starting at
/// offset j.
fn window_word(i: u32, k: u32, j: u32) -> Result<Word> {
    let width = k - 1;
    let indices: Vec<u32> = (0..k).map(|t| i + (j + t) % width).collect();
    positive_word(&indices)
}

/// Strictly increasing (k-1)-subsets of {1..n-1} with all pairwise gaps
/// >= k-1, in lexicographic order.
fn far_tuples(n: u32, k: u32) -> Vec<Vec<u32>> {
    let width = (k - 1) as usize;
    let limit = n - 1;
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::with_capacity(width);
    fn recurse(
        start: u32,
        limit: u32,
        gap: u32,
        width: usize,
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if current.len() == width {
            out.push(current.clone());
            return;
        }
        for i in start..=limit {
            current.push(i);
            recurse(i + gap, limit, gap, width, current, out);
            current.pop();
        }
    }
    recurse(1, limit, k - 1, width, &mut current, &mut out);
    out
}

/// All permutations of the items, in lexicographic order.
fn permutations_lex(items: &[u32]) -> Vec<Vec<u32>> {
    let mut sorted: Vec<u32> = items.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut used = vec![false; sorted.len()];
    let mut current = Vec::with_capacity(sorted.len());
    fn recurse(sorted: &[u32], used: &mut [bool], current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == sorted.len() {
            out.push(current.clone());
            return;
        }
        for i in 0..sorted.len() {
            if !used[i] {
                used[i] = true;
                current.push(sorted[i]);
                recurse(sorted, used, current, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    recurse(&sorted, &mut used, &mut current, &mut out);
    out
}

/// The Artin braid group B_n: braid relations plus far commutativity.
pub fn artin_braid(n: u32) -> Result<Presentation> {
    if n < 2 {
        return Err(Error::BadPresentationParams("artin_braid needs n >= 2".into()));
    }
    let generators = n - 1;
    let mut chains = Vec::new();
    for i in 1..=n.saturating_sub(2) {
        let left = positive_word(&[i, i + 1, i])?;
        let right = positive_word(&[i + 1, i, i + 1])?;
        chains.push(RelationChain::new(vec![left, right], Some(RelationTag::Braid))?);
    }
    for i in 1..generators {
        for j in (i + 2)..=generators {
            let left = positive_word(&[i, j])?;
            let right = positive_word(&[j, i])?;
            chains.push(RelationChain::new(vec![left, right], Some(RelationTag::Far))?);
        }
    }
    Presentation::new("braid", n, 3, generators, chains)
}

/// The higher k-degree braid group `B_n[k]`: one chain of k-1 cyclic window
/// words per window index, plus (k-1)-ary far commutativity chains of all
/// (k-1)! orderings for index tuples with pairwise gaps >= k-1.
pub fn higher_braid(n: u32, k: u32) -> Result<Presentation> {
    if k < 3 {
        return Err(Error::ArityTooSmall(k));
    }
    if n < k {
        return Err(Error::BadPresentationParams(format!(
            "higher_braid needs n >= k (got n={n}, k={k})"
        )));
    }
    let generators = n - 1;
    let mut chains = Vec::new();
    for i in 1..=(n - k + 1) {
        let words = (0..k - 1).map(|j| window_word(i, k, j)).collect::<Result<Vec<_>>>()?;
        chains.push(RelationChain::new(words, Some(RelationTag::Braid))?);
    }
    for tuple in far_tuples(n, k) {
        let words = permutations_lex(&tuple)
            .iter()
            .map(|perm| positive_word(perm))
            .collect::<Result<Vec<_>>>()?;
        chains.push(RelationChain::new(words, Some(RelationTag::Far))?);
    }
    Presentation::new("braid", n, k, generators, chains)
}

/// The higher k-degree symmetric group `S_n[k]`: the `B_n[k]` chains plus the
/// finite-order relations s_i^(k-1) = e.
pub fn higher_symmetric(n: u32, k: u32) -> Result<Presentation> {
    let braid = higher_braid(n, k)?;
    let mut chains = braid.chains().to_vec();
    for i in 1..=(n - 1) {
        let power = Word::generator(Mode::Group, i)?.power((k - 1) as i64)?;
        chains.push(RelationChain::new(vec![power, Word::identity()], Some(RelationTag::Order))?);
    }
    Presentation::new("symmetric", n, k, n - 1, chains)
}

/// Exponent assignment for a higher k-degree Coxeter group on n-1 generators:
/// canonical index tuples mapped to exponents m, with the relation
/// (r_{i1} ... r_{i_{k-1}})^m = e per assigned tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterSpec {
    n: u32,
    k: u32,
    assignments: Vec<(Vec<u32>, u32)>,
}

impl CoxeterSpec {
    pub fn new(n: u32, k: u32, assignments: Vec<(Vec<u32>, u32)>) -> Result<Self> {
        if k < 3 {
            return Err(Error::ArityTooSmall(k));
        }
        if n < k {
            return Err(Error::BadPresentationParams(format!(
                "higher Coxeter spec needs n >= k (got n={n}, k={k})"
            )));
        }
        let width = (k - 1) as usize;
        let mut seen = BTreeSet::new();
        for (tuple, m) in &assignments {
            if tuple.len() != width {
                return Err(Error::BadCoxeterExponent {
                    tuple: tuple.clone(),
                    reason: format!("tuple must have {width} indices"),
                });
            }
            if tuple.iter().any(|&i| i == 0 || i > n - 1) {
                return Err(Error::BadCoxeterExponent {
                    tuple: tuple.clone(),
                    reason: format!("indices must lie in 1..={}", n - 1),
                });
            }
            if !seen.insert(tuple.clone()) {
                return Err(Error::BadCoxeterExponent {
                    tuple: tuple.clone(),
                    reason: "duplicate tuple".into(),
                });
            }
            let all_equal = tuple.windows(2).all(|w| w[0] == w[1]);
            let pairwise_far = tuple
                .iter()
                .enumerate()
                .all(|(p, &a)| tuple.iter().skip(p + 1).all(|&b| a.abs_diff(b) >= k - 1));
            if all_equal && *m != 1 {
                return Err(Error::BadCoxeterExponent {
                    tuple: tuple.clone(),
                    reason: "all-equal tuples must have exponent 1".into(),
                });
            }
            if !all_equal && pairwise_far && *m < k - 1 {
                return Err(Error::BadCoxeterExponent {
                    tuple: tuple.clone(),
                    reason: format!("far tuples need exponent >= {}", k - 1),
                });
            }
        }
        Ok(CoxeterSpec { n, k, assignments })
    }

    /// The default assignment: consecutive windows get m = k, far tuples
    /// m = k-1, diagonals m = 1. Mixed tuples receive no relation.
    pub fn standard(n: u32, k: u32) -> Result<Self> {
        if k < 3 {
            return Err(Error::ArityTooSmall(k));
        }
        if n < k {
            return Err(Error::BadPresentationParams(format!(
                "higher Coxeter spec needs n >= k (got n={n}, k={k})"
            )));
        }
        let mut assignments = Vec::new();
        for i in 1..=(n - k + 1) {
            let window: Vec<u32> = (i..=(i + k - 2)).collect();
            assignments.push((window, k));
        }
        for tuple in far_tuples(n, k) {
            assignments.push((tuple, k - 1));
        }
        for i in 1..=(n - 1) {
            assignments.push((vec![i; (k - 1) as usize], 1));
        }
        CoxeterSpec::new(n, k, assignments)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn assignments(&self) -> &[(Vec<u32>, u32)] {
        &self.assignments
    }
}

/// The higher k-degree Coxeter group `W_n[k]` from an exponent assignment:
/// one chain (r_{i1} ... r_{i_{k-1}})^m = e per assigned tuple.
pub fn higher_coxeter(spec: &CoxeterSpec) -> Result<Presentation> {
    let mut chains = Vec::with_capacity(spec.assignments.len());
    for (tuple, m) in &spec.assignments {
        let word = positive_word(tuple)?.power(*m as i64)?;
        chains.push(RelationChain::new(
            vec![word, Word::identity()],
            Some(RelationTag::CoxeterPower),
        )?);
    }
    Presentation::new("coxeter", spec.n, spec.k, spec.n - 1, chains)
}

/// A general (classical) Coxeter group from its n x n matrix: relations
/// (r_i r_j)^(m_ij) = e, with diagonal 1 forcing generator orders r_i^2 = e.
#[allow(clippy::needless_range_loop)] // symmetry check needs m[i][j] vs m[j][i]
pub fn coxeter_classic(matrix: &[Vec<u32>]) -> Result<Presentation> {
    let n = matrix.len();
    if n == 0 {
        return Err(Error::BadCoxeterMatrix("matrix must be nonempty".into()));
    }
    for row in matrix {
        if row.len() != n {
            return Err(Error::BadCoxeterMatrix("matrix must be square".into()));
        }
    }
    for i in 0..n {
        if matrix[i][i] != 1 {
            return Err(Error::BadCoxeterMatrix(format!("diagonal entry m[{i}][{i}] must be 1")));
        }
        for j in 0..n {
            if i != j {
                if matrix[i][j] < 2 {
                    return Err(Error::BadCoxeterMatrix(format!(
                        "off-diagonal entry m[{i}][{j}] must be >= 2"
                    )));
                }
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::BadCoxeterMatrix("matrix must be symmetric".into()));
                }
            }
        }
    }
    let mut chains = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let pair = positive_word(&[(i + 1) as u32, (j + 1) as u32])?;
            let word = pair.power(matrix[i][j] as i64)?;
            chains.push(RelationChain::new(
                vec![word, Word::identity()],
                Some(RelationTag::CoxeterPower),
            )?);
        }
    }
    for i in 0..n {
        let word = Word::generator(Mode::Group, (i + 1) as u32)?.power(2)?;
        chains.push(RelationChain::new(
            vec![word, Word::identity()],
            Some(RelationTag::CoxeterPower),
        )?);
    }
    Presentation::new("coxeter-classic", n as u32, 3, n as u32, chains)
}

/// Outcome of checking the matrix-to-presentation correspondence for (n, k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub n: u32,
    pub k: u32,
    pub matches: bool,
    pub discrepancies: Vec<String>,
}

/// Expands every finite-order matrix equation (window rotations raised to the
/// k-th power against q E) and every far matrix equation ((k-1)-th powers
/// times E across tuple permutations) in components, and checks that the
/// resulting word equations equal the chains of `higher_braid(n, k)` as sets.
pub fn verify_braid_matrix_correspondence(n: u32, k: u32) -> Result<CorrespondenceReport> {
    let expected = higher_braid(n, k)?;
    let mut discrepancies = Vec::new();

    let braid_sets: Vec<BTreeSet<Word>> = expected
        .chains()
        .iter()
        .filter(|c| c.tag() == Some(RelationTag::Braid))
        .map(|c| c.words().iter().cloned().collect())
        .collect();
    let far_sets: Vec<BTreeSet<Word>> = expected
        .chains()
        .iter()
        .filter(|c| c.tag() == Some(RelationTag::Far))
        .map(|c| c.words().iter().cloned().collect())
        .collect();

    let windows = n - k + 1;
    if braid_sets.len() != windows as usize {
        discrepancies.push(format!(
            "expected {} braid chains, presentation has {}",
            windows,
            braid_sets.len()
        ));
    }

    let identity = PolyMatrix::identity(k)?;
    let width = (k - 1) as usize;

    for i in 1..=windows {
        let base: Vec<u32> = (i..=(i + k - 2)).collect();
        let q = window_word(i, k, 0)?;
        let rhs = MatrixExpr::Scalar(q.clone(), Box::new(MatrixExpr::Matrix(identity.clone())));
        let mut slot_sets: Vec<BTreeSet<Word>> = vec![BTreeSet::new(); width];
        for r in 0..width {
            let mut tuple = base.clone();
            tuple.rotate_left(r);
            let sigma = PolyMatrix::generator(k, &tuple)?;
            let lhs = MatrixExpr::Power(Box::new(MatrixExpr::Matrix(sigma)), k);
            let chains = expand_equation(&lhs, &rhs)?;
            for (j, chain) in chains.iter().enumerate() {
                slot_sets[j].extend(chain.words().iter().cloned());
            }
        }
        let expected_set = &braid_sets[(i - 1) as usize];
        for (j, set) in slot_sets.iter().enumerate() {
            if set != expected_set {
                discrepancies.push(format!(
                    "window {i}, slot {}: matrix expansion {:?} != braid chain {:?}",
                    j + 1,
                    set.iter().map(Word::to_string).collect::<Vec<_>>(),
                    expected_set.iter().map(Word::to_string).collect::<Vec<_>>()
                ));
            }
        }
    }

    let tuples = far_tuples(n, k);
    if far_sets.len() != tuples.len() {
        discrepancies.push(format!(
            "expected {} far chains, presentation has {}",
            tuples.len(),
            far_sets.len()
        ));
    }
    for (t, tuple) in tuples.iter().enumerate() {
        let base = MatrixExpr::Product(vec![
            MatrixExpr::Power(
                Box::new(MatrixExpr::Matrix(PolyMatrix::generator(k, tuple)?)),
                k - 1,
            ),
            MatrixExpr::Matrix(identity.clone()),
        ]);
        let mut slot_sets: Vec<BTreeSet<Word>> = vec![BTreeSet::new(); width];
        for perm in permutations_lex(tuple) {
            let side = MatrixExpr::Product(vec![
                MatrixExpr::Power(
                    Box::new(MatrixExpr::Matrix(PolyMatrix::generator(k, &perm)?)),
                    k - 1,
                ),
                MatrixExpr::Matrix(identity.clone()),
            ]);
            let chains = expand_equation(&base, &side)?;
            for (j, chain) in chains.iter().enumerate() {
                slot_sets[j].extend(chain.words().iter().cloned());
            }
        }
        let expected_set = &far_sets[t];
        for (j, set) in slot_sets.iter().enumerate() {
            if set != expected_set {
                discrepancies.push(format!(
                    "far tuple {tuple:?}, slot {}: matrix expansion does not match the far chain",
                    j + 1
                ));
            }
        }
    }

    Ok(CorrespondenceReport { n, k, matches: discrepancies.is_empty(), discrepancies })
}
