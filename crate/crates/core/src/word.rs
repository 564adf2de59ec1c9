//! Free-group words, generators and finite presentations.
//!
//! A letter is a nonzero `i32`: `g + 1` stands for generator `g`, `-(g + 1)`
//! for its inverse. Inversion is a sign flip, which keeps coset-table tracing
//! branch-free.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::WordError;

/// A signed generator reference.
pub type Letter = i32;

/// Letter for generator `index` raised to `+1` or `-1`.
#[inline]
pub fn letter(index: usize, positive: bool) -> Letter {
    let l = index as Letter + 1;
    if positive {
        l
    } else {
        -l
    }
}

/// Generator index of a letter.
#[inline]
pub fn gen_of(l: Letter) -> usize {
    (l.unsigned_abs() - 1) as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub index: usize,
}

/// Checks `[A-Za-z][A-Za-z0-9_]*`, ASCII only.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Wraps raw letters without reducing them.
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        debug_assert!(letters.iter().all(|&l| l != 0));
        Word(letters)
    }

    /// Builds and freely reduces.
    pub fn reduced(letters: Vec<Letter>) -> Self {
        Word(letters).free_reduce()
    }

    pub fn generator(index: usize) -> Self {
        Word(vec![letter(index, true)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != -p[1])
    }

    /// Free-group normal form (stack cancellation).
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    /// Concatenation followed by free reduction.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// `self^n` for any integer `n`, freely reduced.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 {
            self.inverse()
        } else {
            self.free_reduce()
        };
        let mut out = Word::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `[p, q] = p⁻¹ q⁻¹ p q`.
    pub fn commutator(p: &Word, q: &Word) -> Word {
        p.inverse().mul(&q.inverse()).mul(p).mul(q)
    }

    /// `q⁻¹ p q`.
    pub fn conjugate_by(&self, q: &Word) -> Word {
        q.inverse().mul(self).mul(q)
    }

    /// Freely and cyclically reduced form.
    pub fn cyclic_reduce(&self) -> Word {
        let w = self.free_reduce().0;
        let mut lo = 0;
        let mut hi = w.len();
        while hi - lo >= 2 && w[lo] == -w[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        Word(w[lo..hi].to_vec())
    }

    /// Number of occurrences of generator `g` (either sign).
    pub fn occurrences(&self, g: usize) -> usize {
        self.0.iter().filter(|&&l| gen_of(l) == g).count()
    }

    /// Exponent sum of generator `g`.
    pub fn exponent_sum(&self, g: usize) -> i64 {
        self.0
            .iter()
            .filter(|&&l| gen_of(l) == g)
            .map(|&l| if l > 0 { 1 } else { -1 })
            .sum()
    }

    /// Renders with the given generator names, e.g. `a*c^-1*a`.
    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            let name = &names[gen_of(l)];
            let exp = if l > 0 { run as i64 } else { -(run as i64) };
            if exp == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{exp}"));
            }
            i += run;
        }
        parts.join("*")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.0.iter().map(|&l| gen_of(l) + 1).max().unwrap_or(0))
            .map(default_name)
            .collect();
        f.write_str(&self.render(&names))
    }
}

/// `a`, `b`, ... `z`, then `g26`, `g27`, ...
pub fn default_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("g{i}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    generators: Vec<Generator>,
    relators: Vec<Word>,
}

impl Presentation {
    /// Validates names and relators; relators are stored cyclically reduced.
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self, WordError> {
        let mut generators = Vec::with_capacity(names.len());
        for (index, name) in names.into_iter().enumerate() {
            if !is_valid_name(&name) {
                return Err(WordError::InvalidName(name));
            }
            if generators.iter().any(|g: &Generator| g.name == name) {
                return Err(WordError::DuplicateGenerator(name));
            }
            generators.push(Generator { name, index });
        }
        let n = generators.len();
        let mut rels = Vec::with_capacity(relators.len());
        for (i, r) in relators.into_iter().enumerate() {
            if let Some(&l) = r.letters().iter().find(|&&l| gen_of(l) >= n) {
                return Err(WordError::GeneratorOutOfRange {
                    index: gen_of(l),
                    count: n,
                });
            }
            let r = r.cyclic_reduce();
            if r.is_empty() {
                return Err(WordError::EmptyRelator(i + 1));
            }
            rels.push(r);
        }
        Ok(Presentation {
            generators,
            relators: rels,
        })
    }

    /// Presentation with generators named `a`, `b`, ...
    pub fn with_default_names(count: usize, relators: Vec<Word>) -> Result<Self, WordError> {
        Self::new((0..count).map(default_name).collect(), relators)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Copy with extra relators appended.
    pub fn with_relators(&self, extra: impl IntoIterator<Item = Word>) -> Result<Self, WordError> {
        let mut rels = self.relators.clone();
        rels.extend(extra);
        Self::new(self.names(), rels)
    }

    /// Canonical text form, parseable by [`crate::parse::parse_presentation`].
    pub fn render(&self) -> String {
        let names = self.names();
        let rels: Vec<String> = self.relators.iter().map(|r| r.render(&names)).collect();
        let mut s = format!("gens {};\n", names.join(", "));
        if !rels.is_empty() {
            s.push_str(&format!("rels {};\n", rels.join(", ")));
        }
        s
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[Letter]) -> Word {
        Word::from_letters(v.to_vec())
    }

    #[test]
    fn free_reduce_examples() {
        // a a^-1 b -> b
        assert_eq!(w(&[1, -1, 2]).free_reduce(), w(&[2]));
        assert_eq!(Word::empty().free_reduce(), Word::empty());
        // a b b^-1 a^-1 c -> c
        assert_eq!(w(&[1, 2, -2, -1, 3]).free_reduce(), w(&[3]));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w(&[1, 2, 3]).inverse(), w(&[-3, -2, -1]));
        assert_eq!(Word::empty().inverse(), Word::empty());
        // (a c^-1)^4 -> (c a^-1)^4
        let x = w(&[1, -3]).pow(4);
        assert_eq!(x.inverse(), w(&[3, -1]).pow(4));
    }

    #[test]
    fn powers_and_commutators() {
        let ac = w(&[1, -3]);
        assert_eq!(ac.pow(4).letters(), &[1, -3, 1, -3, 1, -3, 1, -3]);
        assert!(ac.pow(0).is_empty());
        assert_eq!(ac.pow(-1), w(&[3, -1]));
        // [a, c^-1] = a^-1 c a c^-1
        assert_eq!(Word::commutator(&w(&[1]), &w(&[-3])), w(&[-1, 3, 1, -3]));
    }

    #[test]
    fn cyclic_reduction() {
        assert_eq!(w(&[-2, 1, 3, 2]).cyclic_reduce(), w(&[1, 3]));
        assert_eq!(w(&[1, -1]).cyclic_reduce(), Word::empty());
        assert_eq!(w(&[2, -1, 2, -2, 1, -2]).cyclic_reduce(), Word::empty());
    }

    #[test]
    fn presentation_rejects_bad_input() {
        assert!(matches!(
            Presentation::new(vec!["a".into(), "a".into()], vec![]),
            Err(WordError::DuplicateGenerator(_))
        ));
        assert!(matches!(
            Presentation::new(vec!["1a".into()], vec![]),
            Err(WordError::InvalidName(_))
        ));
        assert!(matches!(
            Presentation::new(vec!["é".into()], vec![]),
            Err(WordError::InvalidName(_))
        ));
        assert!(matches!(
            Presentation::new(vec!["a".into()], vec![w(&[2])]),
            Err(WordError::GeneratorOutOfRange { .. })
        ));
        assert!(matches!(
            Presentation::new(vec!["a".into()], vec![w(&[1, -1])]),
            Err(WordError::EmptyRelator(1))
        ));
    }

    #[test]
    fn render_compresses_runs() {
        let names: Vec<String> = vec!["a".into(), "b".into()];
        assert_eq!(w(&[1, 1, -2, -2, -2, 1]).render(&names), "a^2*b^-3*a");
        assert_eq!(Word::empty().render(&names), "1");
    }
}
