//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `cargo test -p polybraid-cli --test acceptance -- --nocapture`).

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polybraid::polymatrix::PolyMatrix;
use polybraid::presentations::{
    artin_braid, higher_braid, higher_coxeter, higher_symmetric,
    verify_braid_matrix_correspondence, CoxeterSpec, Presentation,
};
use polybraid::regularity::CayleyTable;
use polybraid::relation::RelationChain;
use polybraid::word::{Letter, Mode, Word};
use polybraid::wordproblem::{
    abelian_quotient, bounded_equal, check_homomorphism, replay_step, separate_by_abelianization,
    todd_coxeter, EnumerationOutcome, Equality, Permutation, Separation,
};

/// Prints the criterion verdict when the test finishes or panics.
struct Criterion(&'static str);

impl Drop for Criterion {
    fn drop(&mut self) {
        if std::thread::panicking() {
            println!("[acceptance] {}: FAIL", self.0);
        } else {
            println!("[acceptance] {}: PASS", self.0);
        }
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polybraid")).args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> Vec<u8> {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "exit code for {args:?}");
    out.stdout
}

fn path_of(dir: &str, name: &str) -> PathBuf {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.push(dir);
    path.push(name);
    path
}

fn golden(name: &str) -> Vec<u8> {
    fs::read(path_of("tests/golden", name)).unwrap_or_else(|e| panic!("golden {name}: {e}"))
}

fn table(name: &str) -> CayleyTable {
    let text = fs::read_to_string(path_of("tests/data", name)).unwrap();
    CayleyTable::parse(&text).unwrap()
}

fn w(text: &str) -> Word {
    Word::parse(text, Mode::Group).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, generators: u32, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| {
            let index = rng.gen_range(1..=generators);
            if rng.gen_bool(0.5) {
                Letter::negative(index).unwrap()
            } else {
                Letter::positive(index).unwrap()
            }
        })
        .collect();
    Word::group(letters)
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_01_presentation_golden_tests() {
    let _c = Criterion("criterion 1 (presentation golden tests)");
    let cases: [(&[&str], &str); 4] = [
        (&["present", "braid", "--n", "4", "--k", "3"], "present_braid_n4_k3.golden"),
        (&["present", "braid", "--n", "4", "--k", "4"], "present_braid_n4_k4.golden"),
        (&["present", "braid", "--n", "8", "--k", "4"], "present_braid_n8_k4.golden"),
        (&["present", "braid", "--n", "7", "--k", "4"], "present_braid_n7_k4.golden"),
    ];
    for (args, name) in cases {
        assert_eq!(stdout_of(args), golden(name), "byte mismatch for {args:?}");
    }
    // structural cross-check of the golden content
    let n8 = String::from_utf8(golden("present_braid_n8_k4.golden")).unwrap();
    let chains: Vec<&str> = n8.lines().skip(1).collect();
    assert_eq!(chains.len(), 6);
    assert_eq!(chains[5].matches(" = ").count() + 1, 6, "far chain must have 6 words");
    assert!(chains[5].contains("s1") && chains[5].contains("s4") && chains[5].contains("s7"));
    let n7 = String::from_utf8(golden("present_braid_n7_k4.golden")).unwrap();
    assert_eq!(n7.lines().count(), 1 + 4, "n=7 k=4 has 4 braid chains and no far chains");
}

#[test]
fn criterion_02_regularity_expansion() {
    let _c = Criterion("criterion 2 (regularity expansion)");
    assert_eq!(
        String::from_utf8(stdout_of(&["regularity", "--k", "3", "--ell", "1"])).unwrap(),
        "aba = a\nbab = b\n"
    );
    assert_eq!(
        String::from_utf8(stdout_of(&["regularity", "--k", "4", "--ell", "1"])).unwrap(),
        "abca = a\nbcab = b\ncabc = c\n"
    );
    assert_eq!(
        String::from_utf8(stdout_of(&["regularity", "--k", "4", "--ell", "2"])).unwrap(),
        "abcabca = a\nbcabcab = b\ncabcabc = c\n"
    );
}

#[test]
fn criterion_03_polyadic_power_law() {
    let _c = Criterion("criterion 3 (polyadic power law)");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut cases = 0;
    for k in 3u32..=5 {
        for ell in 0u32..=2 {
            for _ in 0..12 {
                let side = (k - 1) as usize;
                let indices: Vec<u32> = (0..side).map(|_| rng.gen_range(1..=6u32)).collect();
                let m = PolyMatrix::generator(k, &indices).unwrap();
                let power = m.polyadic_power(ell).unwrap();
                let len = (ell * (k - 1) + 1) as usize;
                for (j, entry) in power.entries().iter().enumerate() {
                    assert_eq!(entry.len(), len, "k={k} ell={ell}");
                    let expected = Word::group(
                        (0..len)
                            .map(|t| Letter::positive(indices[(j + t) % side]).unwrap())
                            .collect(),
                    );
                    assert_eq!(entry, &expected, "k={k} ell={ell} slot {j}");
                }
                cases += 1;
            }
        }
    }
    assert!(cases >= 100, "only {cases} cases");
}

#[test]
fn criterion_04_querelement_law() {
    let _c = Criterion("criterion 4 (querelement law)");
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 3u32..=5 {
        for _ in 0..40 {
            let side = (k - 1) as usize;
            let entries: Vec<Word> = (0..side).map(|_| random_word(&mut rng, 4, 3)).collect();
            let m = PolyMatrix::new(k, entries).unwrap();
            let quer = m.querelement().unwrap();
            for position in 0..k as usize {
                let mut factors = vec![m.clone(); k as usize];
                factors[position] = quer.clone();
                assert_eq!(
                    PolyMatrix::mu_k(&factors).unwrap(),
                    m,
                    "querelement law failed at k={k} position {position}"
                );
            }
        }
    }
    // k=4 closed form on single-letter entries (sigma_i1, sigma_i2, sigma_i3)
    for indices in [[1u32, 2, 3], [2, 2, 5], [3, 1, 4]] {
        let quer = PolyMatrix::generator(4, &indices).unwrap().querelement().unwrap();
        let [i1, i2, i3] = indices;
        assert_eq!(
            quer.entries(),
            &[
                w(&format!("s{i3}^-1 s{i2}^-1")),
                w(&format!("s{i1}^-1 s{i3}^-1")),
                w(&format!("s{i2}^-1 s{i1}^-1")),
            ]
        );
    }
}

#[test]
fn criterion_05_correspondence_verification() {
    let _c = Criterion("criterion 5 (correspondence verification)");
    for k in 3u32..=5 {
        for n in k..=9 {
            let report = verify_braid_matrix_correspondence(n, k).unwrap();
            assert!(report.matches, "n={n} k={k}: {:?}", report.discrepancies);
        }
    }
}

#[test]
fn criterion_06_closure_proposition() {
    let _c = Criterion("criterion 6 (closure proposition)");
    for name in ["z2.tab", "z3.tab", "z4.tab"] {
        let t = table(name);
        for k in [3u32, 4] {
            let report = t.closure_violations(k).unwrap();
            assert!(!report.sampled, "{name} k={k} must be brute force");
            assert!(report.violations.is_empty(), "{name} k={k}");
        }
    }
    let report = table("s3.tab").closure_violations(3).unwrap();
    assert!(!report.sampled);
    assert!(!report.violations.is_empty(), "S_3 must violate closure");
}

#[test]
fn criterion_07_coxeter_consequences() {
    let _c = Criterion("criterion 7 (Coxeter consequences)");
    let text = fs::read_to_string(path_of("tests/data", "cox23.json")).unwrap();
    let p = Presentation::from_json(&text).unwrap();
    let cases = [("r1 r2 r1 r2", "r2 r2 r1 r1"), ("r1 r2 r1", "r2 r2 r1 r1 r2 r2")];
    for (a, b) in cases {
        let (a, b) = (w(a), w(b));
        let verdict = bounded_equal(&p, &a, &b, 12, 100_000).unwrap();
        let Equality::Equal(steps) = verdict else {
            panic!("{a} = {b} not derived within bounds");
        };
        // the trace must replay from a to b
        let mut current = a.clone();
        for step in &steps {
            assert_eq!(step.from, current, "trace discontinuity");
            current = replay_step(&p, step).unwrap();
            assert_eq!(current, step.to);
        }
        assert_eq!(current, b);
    }
}

#[test]
fn criterion_08_coset_enumeration() {
    let _c = Criterion("criterion 8 (coset enumeration)");
    for n in 3u32..=5 {
        let p = higher_symmetric(n, 3).unwrap();
        let result = todd_coxeter(&p, 10_000).unwrap();
        let factorial: u64 = (1..=n as u64).product();
        assert_eq!(result.outcome, EnumerationOutcome::FiniteOrder(factorial), "n={n}");
    }
    let result = todd_coxeter(&artin_braid(3).unwrap(), 10_000).unwrap();
    assert_eq!(result.outcome, EnumerationOutcome::Overflow);
}

#[test]
fn criterion_09_homomorphism() {
    let _c = Criterion("criterion 9 (homomorphism)");
    for n in 3usize..=8 {
        let p = artin_braid(n as u32).unwrap();
        let images: Vec<Permutation> =
            (1..n).map(|i| Permutation::transposition(n, i).unwrap()).collect();
        assert!(check_homomorphism(&p, &images).unwrap().ok, "n={n}");
        for mutate in 0..images.len() {
            let mut broken = images.clone();
            broken[mutate] = Permutation::identity(n);
            assert!(
                !check_homomorphism(&p, &broken).unwrap().ok,
                "n={n}: identity image at {mutate} must break a chain"
            );
        }
    }
}

// --- criterion 10 oracle: independent integer elimination and minor gcd ----

#[allow(clippy::needless_range_loop)]
fn eliminate_basis(vectors: &[Vec<i64>], ncols: usize) -> Vec<Vec<i128>> {
    let mut rows: Vec<Vec<i128>> =
        vectors.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
    let mut basis = Vec::new();
    for col in 0..ncols {
        loop {
            let mut nonzero: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            match nonzero.len() {
                0 => break,
                1 => {
                    basis.push(rows.remove(nonzero[0]));
                    break;
                }
                _ => {
                    nonzero.sort_by_key(|&i| rows[i][col].abs());
                    let (a, b) = (nonzero[0], nonzero[1]);
                    let q = rows[b][col] / rows[a][col];
                    for c in 0..ncols {
                        let sub = q * rows[a][c];
                        rows[b][c] -= sub;
                    }
                }
            }
        }
    }
    basis
}

fn bareiss_det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| m[i][k] != 0) else { return 0 };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// gcd of all maximal minors of the basis; 1 means the lattice is primitive
/// (saturated), so the quotient has no torsion.
fn minor_gcd(basis: &[Vec<i128>], ncols: usize) -> i128 {
    let r = basis.len();
    let mut chosen = (0..r).collect::<Vec<usize>>();
    let mut g = 0i128;
    loop {
        let minor: Vec<Vec<i128>> =
            basis.iter().map(|row| chosen.iter().map(|&c| row[c]).collect()).collect();
        g = gcd128(g, bareiss_det(minor));
        // next combination of r columns out of ncols
        let mut i = r;
        loop {
            if i == 0 {
                return g;
            }
            i -= 1;
            if chosen[i] != i + ncols - r {
                chosen[i] += 1;
                for j in i + 1..r {
                    chosen[j] = chosen[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[test]
fn criterion_10_abelianization() {
    let _c = Criterion("criterion 10 (abelianization)");
    for (n, k) in [(4u32, 3u32), (4, 4), (8, 4)] {
        let p = higher_braid(n, k).unwrap();
        let q = abelian_quotient(&p).unwrap();
        assert_eq!(q.rank(), 1, "n={n} k={k}");
        assert!(q.torsion().is_empty(), "n={n} k={k}");

        // independent oracle: elimination rank + maximal-minor gcd
        let gens = p.generators() as usize;
        let mut vectors = Vec::new();
        for chain in p.chains() {
            let base = chain.words()[0].abelianize(p.generators()).unwrap();
            for word in &chain.words()[1..] {
                let other = word.abelianize(p.generators()).unwrap();
                let diff: Vec<i64> = base.iter().zip(&other).map(|(x, y)| x - y).collect();
                if diff.iter().any(|&x| x != 0) {
                    vectors.push(diff);
                }
            }
        }
        let basis = eliminate_basis(&vectors, gens);
        assert_eq!(gens - basis.len(), 1, "oracle rank disagrees for n={n} k={k}");
        assert_eq!(minor_gcd(&basis, gens), 1, "lattice not primitive for n={n} k={k}");

        assert_eq!(
            separate_by_abelianization(&p, &w("s1"), &w("s1 s1")).unwrap(),
            Separation::Distinct,
            "n={n} k={k}"
        );
    }
}

#[test]
fn criterion_11_consistency_guard() {
    let _c = Criterion("criterion 11 (consistency guard)");
    let presentations: Vec<Presentation> = vec![
        artin_braid(3).unwrap(),
        artin_braid(4).unwrap(),
        higher_braid(4, 4).unwrap(),
        higher_symmetric(4, 3).unwrap(),
        higher_coxeter(&CoxeterSpec::standard(4, 4).unwrap()).unwrap(),
    ];
    for (pi, p) in presentations.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1100 + pi as u64);
        let mut equal_seen = 0u32;
        for case in 0..10_000 {
            let a = random_word(&mut rng, p.generators(), 5);
            let b = if rng.gen_bool(0.5) {
                random_word(&mut rng, p.generators(), 5)
            } else {
                derived_equal(&mut rng, p, &a)
            };
            let max_len = a.len().max(b.len()) + 3;
            let verdict = bounded_equal(p, &a, &b, max_len, 150).unwrap();
            let separation = separate_by_abelianization(p, &a, &b).unwrap();
            if let Equality::Equal(_) = verdict {
                equal_seen += 1;
                assert_ne!(
                    separation,
                    Separation::Distinct,
                    "fatal inconsistency on presentation {pi} case {case}: {a} vs {b}"
                );
            }
        }
        assert!(equal_seen > 0, "presentation {pi}: guard never exercised an Equal verdict");
    }
}

/// A word equal to `w` in the group: `w` with one random relation splice.
fn derived_equal(rng: &mut ChaCha8Rng, p: &Presentation, word: &Word) -> Word {
    if p.chains().is_empty() {
        return word.clone();
    }
    let chain: &RelationChain = &p.chains()[rng.gen_range(0..p.chains().len())];
    let from = &chain.words()[rng.gen_range(0..chain.words().len())];
    let to = &chain.words()[rng.gen_range(0..chain.words().len())];
    let letters = word.letters();
    let plen = from.len();
    if plen > letters.len() {
        // no occurrence possible; insert the relator pair instead
        let position = rng.gen_range(0..=letters.len());
        let mut spliced = letters[..position].to_vec();
        spliced.extend_from_slice(from.letters());
        spliced.extend(from.invert().unwrap().letters().iter().copied());
        spliced.extend_from_slice(&letters[position..]);
        return Word::group(spliced);
    }
    let start = rng.gen_range(0..=letters.len() - plen);
    for offset in 0..=letters.len() - plen {
        let position = (start + offset) % (letters.len() - plen + 1);
        if &letters[position..position + plen] == from.letters() {
            let mut spliced = letters[..position].to_vec();
            spliced.extend_from_slice(to.letters());
            spliced.extend_from_slice(&letters[position + plen..]);
            return Word::group(spliced);
        }
    }
    word.clone()
}
