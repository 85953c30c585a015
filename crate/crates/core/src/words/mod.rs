//! Free-group words: parsing, free reduction, abelianization, commutator
//! decomposition and the linearization of commutators into `Λ²ℤⁿ`.

mod parse;

pub use parse::parse_word;

use crate::zlinalg::ExteriorElement;
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("generator index {index} out of range 1..={rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("mismatched generator counts: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("word does not abelianize to zero")]
    NonzeroAbelianization,
    #[error("expected {expected} images, got {got}")]
    ImageCountMismatch { expected: usize, got: usize },
}

/// A single generator occurrence `x_i^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    /// 1-based generator index.
    pub index: usize,
    /// +1 or −1.
    pub sign: i8,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter {
            index: self.index,
            sign: -self.sign,
        }
    }
}

/// Integer vector in ℤⁿ, the abelianization of a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianVector(pub Vec<i64>);

impl AbelianVector {
    pub fn zero(n: usize) -> Self {
        AbelianVector(vec![0; n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &AbelianVector) -> AbelianVector {
        AbelianVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn to_bigint(&self) -> Vec<BigInt> {
        self.0.iter().map(|&c| BigInt::from(c)).collect()
    }
}

/// A freely reduced word in the free group `F_n`.
///
/// Stored as exponent runs `(generator, exponent)` with nonzero exponents
/// and distinct adjacent generators, which is exactly the reduced form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    runs: Vec<(usize, i64)>,
}

impl Word {
    pub fn identity(rank: usize) -> Word {
        Word { rank, runs: vec![] }
    }

    pub fn generator(index: usize, rank: usize) -> Result<Word, WordError> {
        if index == 0 || index > rank {
            return Err(WordError::GeneratorOutOfRange { index, rank });
        }
        Ok(Word {
            rank,
            runs: vec![(index, 1)],
        })
    }

    /// Builds a word from arbitrary letters, reducing as it goes.
    pub fn from_letters<I>(rank: usize, letters: I) -> Result<Word, WordError>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut runs: Vec<(usize, i64)> = vec![];
        for l in letters {
            if l.index == 0 || l.index > rank {
                return Err(WordError::GeneratorOutOfRange {
                    index: l.index,
                    rank,
                });
            }
            push_run(&mut runs, l.index, l.sign as i64);
        }
        Ok(Word { rank, runs })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_identity(&self) -> bool {
        self.runs.is_empty()
    }

    /// Letter count of the reduced form.
    pub fn len(&self) -> usize {
        self.runs.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.runs.iter().flat_map(|&(index, exp)| {
            let sign = if exp > 0 { 1 } else { -1 };
            (0..exp.unsigned_abs()).map(move |_| Letter { index, sign })
        })
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            runs: self.runs.iter().rev().map(|&(i, e)| (i, -e)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            out = multiply(&out, &base).expect("same rank");
        }
        out
    }

    /// The commutator `[self, other] = self·other·self⁻¹·other⁻¹`.
    pub fn commutator(&self, other: &Word) -> Result<Word, WordError> {
        let a = multiply(self, other)?;
        let b = multiply(&a, &self.inverse())?;
        multiply(&b, &other.inverse())
    }

    /// Canonical printed form, e.g. `x1 x2^-1 x3^2`. The identity prints as `1`.
    pub fn to_text(&self) -> String {
        if self.runs.is_empty() {
            return "1".to_string();
        }
        self.runs
            .iter()
            .map(|&(i, e)| {
                if e == 1 {
                    format!("x{i}")
                } else {
                    format!("x{i}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn push_run(runs: &mut Vec<(usize, i64)>, index: usize, exp: i64) {
    if exp == 0 {
        return;
    }
    match runs.last_mut() {
        Some((i, e)) if *i == index => {
            *e += exp;
            if *e == 0 {
                runs.pop();
            }
        }
        _ => runs.push((index, exp)),
    }
}

/// Reduced product `v·w`.
pub fn multiply(v: &Word, w: &Word) -> Result<Word, WordError> {
    if v.rank != w.rank {
        return Err(WordError::RankMismatch {
            left: v.rank,
            right: w.rank,
        });
    }
    let mut runs = v.runs.clone();
    for &(i, e) in &w.runs {
        push_run(&mut runs, i, e);
    }
    Ok(Word { rank: v.rank, runs })
}

/// Exponent-sum vector of `w` in ℤⁿ.
pub fn abelianize(w: &Word) -> AbelianVector {
    let mut coords = vec![0i64; w.rank];
    for &(i, e) in &w.runs {
        coords[i - 1] += e;
    }
    AbelianVector(coords)
}

/// The linearization `λ(w) ∈ Λ²ℤⁿ` of a word with zero abelianization.
///
/// Computed by the half-sum rule over letter positions:
/// `λ(w) = ½ Σ_{a<b} ε_a ε_b (e_{i_a} ∧ e_{i_b})`.
/// On commutators this gives `λ([u,v]) = ū∧v̄`, and it is a homomorphism
/// on the kernel of abelianization.
pub fn lambda_form(w: &Word) -> Result<ExteriorElement, WordError> {
    if !abelianize(w).is_zero() {
        return Err(WordError::NonzeroAbelianization);
    }
    let n = w.rank;
    // doubled[p][q] accumulates 2·coefficient of e_{p+1}∧e_{q+1}, p < q
    let letters: Vec<Letter> = w.letters().collect();
    let mut doubled = std::collections::BTreeMap::<(usize, usize), i64>::new();
    // prefix[g] = signed count of generator g among letters seen so far
    let mut prefix = vec![0i64; n + 1];
    for l in &letters {
        let s = l.sign as i64;
        for g in 1..=n {
            if g == l.index {
                continue;
            }
            // pairs (a, b) with b the current letter
            let c = prefix[g] * s;
            if c != 0 {
                let (p, q, c) = if g < l.index {
                    (g, l.index, c)
                } else {
                    (l.index, g, -c)
                };
                *doubled.entry((p, q)).or_insert(0) += c;
            }
        }
        prefix[l.index] += s;
    }
    let mut out = ExteriorElement::zero(2, n);
    for ((p, q), c) in doubled {
        debug_assert!(c % 2 == 0, "half-sum not integral");
        out.add_term(&[p, q], BigInt::from(c / 2));
    }
    Ok(out)
}

/// Writes `w` (with zero abelianization) as a product of commutators,
/// returning the pairs `(u_ℓ, v_ℓ)` with `w = ∏ℓ [u_ℓ, v_ℓ]` exactly.
///
/// Greedy peeling: take the first letter `g^ε`, find a later occurrence of
/// `g^{−ε}`, split `w = g^ε A g^{−ε} B = [g^ε, A]·(A·B)` and recurse on
/// `A·B`, which is two letters shorter. No attempt at minimal genus.
pub fn express_as_commutators(w: &Word) -> Result<Vec<(Word, Word)>, WordError> {
    if !abelianize(w).is_zero() {
        return Err(WordError::NonzeroAbelianization);
    }
    let rank = w.rank;
    let mut pairs = vec![];
    let mut current: Vec<Letter> = w.letters().collect();
    while !current.is_empty() {
        let first = current[0];
        let j = current
            .iter()
            .position(|l| *l == first.inverse())
            .expect("zero abelianization forces an inverse occurrence");
        let middle = &current[1..j];
        let rest = &current[j + 1..];
        let u = Word::from_letters(rank, std::iter::once(first))?;
        let v = Word::from_letters(rank, middle.iter().copied())?;
        pairs.push((u, v));
        let next = Word::from_letters(
            rank,
            middle.iter().chain(rest.iter()).copied(),
        )?;
        current = next.letters().collect();
    }
    Ok(pairs)
}

/// Image of `w ∈ F_s` under the homomorphism sending the i-th generator to
/// `images[i]`; all images must share an ambient rank.
pub fn substitute(w: &Word, images: &[Word]) -> Result<Word, WordError> {
    if images.len() != w.rank {
        return Err(WordError::ImageCountMismatch {
            expected: w.rank,
            got: images.len(),
        });
    }
    let target_rank = images.first().map(|im| im.rank()).unwrap_or(0);
    let mut out = Word::identity(target_rank);
    for &(i, e) in &w.runs {
        out = multiply(&out, &images[i - 1].pow(e))?;
    }
    Ok(out)
}
