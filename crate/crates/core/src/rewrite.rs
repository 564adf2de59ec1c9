//! Subgroup presentations, abelian invariants and Tietze simplification.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::TableError;
use crate::tc::CosetTable;
use crate::word::{gen_of, letter, Letter, Presentation, Word};

/// Dense matrix of exact integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m[(i, i)] = BigInt::from(v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !m[(r, k)].is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * f;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * f;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of [`smith_normal_form`]: `d = u · m · v`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Diagonal entries (nonnegative, each dividing the next).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

/// Smith normal form with unimodular transforms.
///
/// Pivot: smallest nonzero absolute value in the remaining block, ties broken
/// by row-major position.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    for t in 0..n {
        loop {
            // pick pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..d.rows {
                for j in t..d.cols {
                    let x = &d[(i, j)];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish_signs(u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..d.rows {
                if !d[(i, t)].is_zero() {
                    let q = d[(i, t)].div_floor(&d[(t, t)]);
                    let f = -q;
                    d.add_row(i, t, &f);
                    u.add_row(i, t, &f);
                    if !d[(i, t)].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..d.cols {
                if !d[(t, j)].is_zero() {
                    let q = d[(t, j)].div_floor(&d[(t, t)]);
                    let f = -q;
                    d.add_col(j, t, &f);
                    v.add_col(j, t, &f);
                    if !d[(t, j)].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let p = d[(t, t)].clone();
            let bad =
                (t + 1..d.rows).find(|&i| (t + 1..d.cols).any(|j| !d[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
    }
    finish_signs(u, d, v)
}

fn finish_signs(mut u: IntMatrix, mut d: IntMatrix, v: IntMatrix) -> Smith {
    for i in 0..d.rows.min(d.cols) {
        if d[(i, i)].is_negative() {
            d.negate_row(i);
            u.negate_row(i);
        }
    }
    Smith { u, d, v }
}

/// Index of the lattice spanned by the rows of a 2×2 matrix in `Z²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

pub fn sublattice_index(b: &IntMatrix) -> LatticeIndex {
    assert!(
        b.rows() == 2 && b.cols() == 2,
        "sublattice_index expects a 2x2 basis"
    );
    let det = b.determinant().abs();
    if det.is_zero() {
        LatticeIndex::Infinite
    } else {
        LatticeIndex::Finite(det)
    }
}

/// Presentation of a finite-index subgroup on Schreier generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupPresentation {
    pub base: Presentation,
    /// Label and defining word in the ambient generators.
    pub schreier_generators: Vec<(String, Word)>,
    /// Relators over the Schreier generators (letter `i + 1` = generator `i`).
    pub relators: Vec<Word>,
}

impl SubgroupPresentation {
    pub fn generator_count(&self) -> usize {
        self.schreier_generators.len()
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(|r| r.len()).sum()
    }

    /// Rewrites a word over Schreier generators back into ambient generators.
    pub fn to_ambient(&self, w: &Word) -> Word {
        w.letters().iter().fold(Word::empty(), |acc, &l| {
            let def = &self.schreier_generators[gen_of(l)].1;
            acc.mul(&if l > 0 { def.clone() } else { def.inverse() })
        })
    }

    /// As a standalone presentation with the Schreier labels as names.
    pub fn to_presentation(&self) -> Presentation {
        let names = self
            .schreier_generators
            .iter()
            .map(|(n, _)| n.clone())
            .collect();
        let rels: Vec<Word> = self
            .relators
            .iter()
            .filter(|r| !r.cyclic_reduce().is_empty())
            .cloned()
            .collect();
        Presentation::new(names, rels).expect("schreier labels are valid names")
    }
}

/// Reidemeister–Schreier rewriting against a complete coset table.
///
/// The transversal is the breadth-first spanning tree from coset 1; each
/// non-tree edge `(c, g)` gives the generator `u_c g u_{cg}⁻¹`. Relators are
/// the rewrites of every ambient relator traced from every coset.
pub fn reidemeister_schreier(
    p: &Presentation,
    t: &CosetTable,
) -> Result<SubgroupPresentation, TableError> {
    if !t.is_complete() {
        return Err(TableError::Partial);
    }
    let n = t.degree();
    let ngens = p.generator_count();
    let parent = t.spanning_tree();
    let reps = t.transversal();
    let names = p.names();
    // label[c * ngens + g] = Some(index) for non-tree edges
    let mut label: Vec<Option<usize>> = vec![None; (n + 1) * ngens];
    let mut gens: Vec<(String, Word)> = Vec::new();
    for c in 1..=n {
        for g in 0..ngens {
            let d = t.entry(c, letter(g, true)).ok_or(TableError::Partial)?;
            let tree =
                parent[d] == Some((c, letter(g, true))) || parent[c] == Some((d, letter(g, false)));
            if !tree {
                let def = reps[c].mul(&Word::generator(g)).mul(&reps[d].inverse());
                label[c * ngens + g] = Some(gens.len());
                gens.push((format!("s{}_{}", c, names[g]), def));
            }
        }
    }
    let mut relators = Vec::with_capacity(n * p.relators().len());
    for c in 1..=n {
        for r in p.relators() {
            let mut cur = c;
            let mut out: Vec<Letter> = Vec::new();
            for &l in r.letters() {
                let g = gen_of(l);
                if l > 0 {
                    let d = t.entry(cur, l).ok_or(TableError::Partial)?;
                    if let Some(s) = label[cur * ngens + g] {
                        out.push(letter(s, true));
                    }
                    cur = d;
                } else {
                    let d = t.entry(cur, l).ok_or(TableError::Partial)?;
                    if let Some(s) = label[d * ngens + g] {
                        out.push(letter(s, false));
                    }
                    cur = d;
                }
            }
            let w = Word::reduced(out);
            if !w.is_empty() {
                relators.push(w);
            }
        }
    }
    Ok(SubgroupPresentation {
        base: p.clone(),
        schreier_generators: gens,
        relators,
    })
}

/// Abelian invariants of a presentation given as generator count and relators.
///
/// Returns invariant factors in divisibility order, with `0` for each
/// infinite cyclic factor; factors equal to 1 are dropped.
pub fn abelian_invariants_of(generator_count: usize, relators: &[Word]) -> Vec<BigInt> {
    // sparse abelianized rows
    let mut rows: Vec<BTreeMap<usize, BigInt>> = relators
        .iter()
        .map(|r| {
            let mut row: BTreeMap<usize, BigInt> = BTreeMap::new();
            for &l in r.letters() {
                *row.entry(gen_of(l)).or_insert_with(BigInt::zero) += if l > 0 { 1 } else { -1 };
            }
            row.retain(|_, v| !v.is_zero());
            row
        })
        .filter(|r| !r.is_empty())
        .collect();
    let mut alive: Vec<bool> = vec![true; generator_count];
    // unit-pivot elimination: a ±1 entry lets its generator be solved for
    let mut col_rows: HashMap<usize, HashSet<usize>> = HashMap::new();
    for (i, r) in rows.iter().enumerate() {
        for &c in r.keys() {
            col_rows.entry(c).or_default().insert(i);
        }
    }
    let mut row_alive = vec![true; rows.len()];
    loop {
        let mut pick: Option<(usize, usize, usize)> = None; // (row len, row, col)
        for (i, r) in rows.iter().enumerate() {
            if !row_alive[i] {
                continue;
            }
            if let Some((&c, _)) = r.iter().find(|(_, v)| v.abs().is_one()) {
                if pick.is_none_or(|(len, _, _)| r.len() < len) {
                    pick = Some((r.len(), i, c));
                    if r.len() == 1 {
                        break;
                    }
                }
            }
        }
        let Some((_, pi, pc)) = pick else { break };
        let pivot_row = rows[pi].clone();
        let pv = pivot_row[&pc].clone();
        row_alive[pi] = false;
        alive[pc] = false;
        let touched: Vec<usize> = col_rows
            .get(&pc)
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default();
        for i in touched {
            if i == pi || !row_alive[i] {
                continue;
            }
            let Some(coef) = rows[i].get(&pc).cloned() else {
                continue;
            };
            // row_i -= coef * pv * pivot_row  (pv = ±1 so pv⁻¹ = pv)
            let f = &coef * &pv;
            for (&c, v) in &pivot_row {
                let e = rows[i].entry(c).or_insert_with(BigInt::zero);
                *e -= &f * v;
                if e.is_zero() {
                    rows[i].remove(&c);
                    if let Some(s) = col_rows.get_mut(&c) {
                        s.remove(&i);
                    }
                } else {
                    col_rows.entry(c).or_default().insert(i);
                }
            }
            if rows[i].is_empty() {
                row_alive[i] = false;
            }
        }
        col_rows.remove(&pc);
    }
    let cols: Vec<usize> = (0..generator_count).filter(|&c| alive[c]).collect();
    let col_pos: HashMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let live_rows: Vec<&BTreeMap<usize, BigInt>> = rows
        .iter()
        .enumerate()
        .filter(|(i, r)| row_alive[*i] && !r.is_empty())
        .map(|(_, r)| r)
        .collect();
    let mut m = IntMatrix::zeros(live_rows.len(), cols.len());
    for (i, r) in live_rows.iter().enumerate() {
        for (c, v) in r.iter() {
            m[(i, col_pos[c])] = v.clone();
        }
    }
    let smith = smith_normal_form(&m);
    let diag = smith.diagonal();
    let mut torsion: Vec<BigInt> = diag
        .iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .cloned()
        .collect();
    torsion.sort();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let free = cols.len() - rank;
    torsion.extend(std::iter::repeat_n(BigInt::zero(), free));
    torsion
}

pub fn abelian_invariants(p: &Presentation) -> Vec<BigInt> {
    abelian_invariants_of(p.generator_count(), p.relators())
}

pub fn subgroup_abelian_invariants(sp: &SubgroupPresentation) -> Vec<BigInt> {
    abelian_invariants_of(sp.generator_count(), &sp.relators)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TietzeStats {
    pub eliminations: usize,
    pub deletions: usize,
    pub substitutions: usize,
    pub moves: usize,
    pub budget_exhausted: bool,
}

pub const DEFAULT_TIETZE_BUDGET: usize = 100_000;

/// Simplifies by Tietze moves until none applies or `budget` moves are spent.
///
/// Moves, in priority order: drop relators that reduce to the empty word or
/// duplicate another up to rotation and inversion; eliminate a generator
/// that occurs exactly once in some relator (shortest relator first); replace
/// a subword by a shorter (or shortlex-smaller, same length) equivalent read
/// off a cyclic conjugate of another relator.
pub fn tietze_simplify(
    sp: &SubgroupPresentation,
    budget: usize,
) -> (SubgroupPresentation, TietzeStats) {
    let mut state = Tietze::new(sp);
    let stats = state.run(budget);
    (state.into_presentation(sp), stats)
}

struct Tietze {
    alive: Vec<bool>,
    /// `None` marks a deleted relator.
    relators: Vec<Option<Vec<Letter>>>,
    /// Relators containing each generator.
    occ: Vec<BTreeSet<usize>>,
    canon: HashMap<Vec<Letter>, usize>,
    /// (length, relator) for relators with a generator occurring exactly once.
    candidates: BTreeSet<(usize, usize)>,
    stats: TietzeStats,
}

fn reduce(w: &[Letter]) -> Vec<Letter> {
    Word::from_letters(w.to_vec())
        .cyclic_reduce()
        .into_letters()
}

fn invert(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|&l| -l).collect()
}

/// Minimal rotation of `w` or its inverse, for duplicate detection.
fn canonical(w: &[Letter]) -> Vec<Letter> {
    let inv = invert(w);
    let mut best: Option<Vec<Letter>> = None;
    for v in [w, &inv[..]] {
        for s in 0..v.len() {
            let rot: Vec<Letter> = v[s..].iter().chain(&v[..s]).copied().collect();
            if best.as_ref().is_none_or(|b| shortlex_less(&rot, b)) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// Letter order `g1 < g1⁻¹ < g2 < g2⁻¹ < ...`.
fn letter_key(l: Letter) -> (usize, bool) {
    (gen_of(l), l < 0)
}

fn shortlex_less(a: &[Letter], b: &[Letter]) -> bool {
    if a.len() != b.len() {
        return a.len() < b.len();
    }
    a.iter()
        .map(|&l| letter_key(l))
        .lt(b.iter().map(|&l| letter_key(l)))
}

fn singleton_position(r: &[Letter]) -> Option<usize> {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &l in r {
        *counts.entry(gen_of(l)).or_default() += 1;
    }
    r.iter()
        .enumerate()
        .filter(|(_, &l)| counts[&gen_of(l)] == 1)
        .min_by_key(|(_, &l)| gen_of(l))
        .map(|(k, _)| k)
}

impl Tietze {
    fn new(sp: &SubgroupPresentation) -> Self {
        let n = sp.generator_count();
        let mut t = Tietze {
            alive: vec![true; n],
            relators: Vec::with_capacity(sp.relators.len()),
            occ: vec![BTreeSet::new(); n],
            canon: HashMap::new(),
            candidates: BTreeSet::new(),
            stats: TietzeStats::default(),
        };
        for r in &sp.relators {
            t.relators.push(None);
            let i = t.relators.len() - 1;
            t.install(i, r.letters().to_vec());
        }
        t
    }

    fn spend(&mut self, budget: usize) -> bool {
        if self.stats.moves >= budget {
            self.stats.budget_exhausted = true;
            return false;
        }
        self.stats.moves += 1;
        true
    }

    fn uninstall(&mut self, i: usize) -> Option<Vec<Letter>> {
        let r = self.relators[i].take()?;
        if self.canon.get(&canonical(&r)) == Some(&i) {
            self.canon.remove(&canonical(&r));
        }
        for &l in &r {
            self.occ[gen_of(l)].remove(&i);
        }
        self.candidates.remove(&(r.len(), i));
        Some(r)
    }

    /// Stores `r` (reduced) at slot `i`; trivial relators and duplicates are
    /// dropped, each such drop counting as a deletion.
    fn install(&mut self, i: usize, r: Vec<Letter>) {
        let r = reduce(&r);
        if r.is_empty() {
            self.stats.deletions += 1;
            return;
        }
        let c = canonical(&r);
        if self.canon.contains_key(&c) {
            self.stats.deletions += 1;
            return;
        }
        self.canon.insert(c, i);
        for &l in &r {
            self.occ[gen_of(l)].insert(i);
        }
        if singleton_position(&r).is_some() {
            self.candidates.insert((r.len(), i));
        }
        self.relators[i] = Some(r);
    }

    fn run(&mut self, budget: usize) -> TietzeStats {
        // deletions made while loading the input are free moves only up to the budget
        self.stats.moves = self.stats.deletions.min(budget);
        if self.stats.deletions > budget {
            self.stats.budget_exhausted = true;
            return self.stats;
        }
        loop {
            if self.eliminate_one(budget) {
                continue;
            }
            if self.stats.budget_exhausted || !self.substitute_pass(budget) {
                break;
            }
        }
        self.stats
    }

    /// Eliminates one generator; `false` if no relator allows it.
    fn eliminate_one(&mut self, budget: usize) -> bool {
        let Some(&(_, ri)) = self.candidates.iter().next() else {
            return false;
        };
        if !self.spend(budget) {
            return false;
        }
        let r = self.uninstall(ri).expect("candidate relators are live");
        let k = singleton_position(&r).expect("candidate has a singleton");
        // r = A g^e B  =>  g^e = (B A)⁻¹
        let l = r[k];
        let g = gen_of(l);
        let ba: Vec<Letter> = r[k + 1..].iter().chain(&r[..k]).copied().collect();
        let value = if l > 0 { invert(&ba) } else { ba };
        let value_inv = invert(&value);
        let touched: Vec<usize> = self.occ[g].iter().copied().collect();
        let before = self.stats.deletions;
        for j in touched {
            let Some(old) = self.uninstall(j) else {
                continue;
            };
            let mut out = Vec::with_capacity(old.len() + value.len());
            for &x in &old {
                if gen_of(x) == g {
                    out.extend_from_slice(if x > 0 { &value } else { &value_inv });
                } else {
                    out.push(x);
                }
            }
            self.install(j, out);
        }
        let dropped = self.stats.deletions - before;
        self.stats.moves = (self.stats.moves + dropped).min(budget);
        self.alive[g] = false;
        self.stats.eliminations += 1;
        true
    }

    /// One round of subword substitution; `true` if any relator changed.
    fn substitute_pass(&mut self, budget: usize) -> bool {
        let mut changed = false;
        let n = self.relators.len();
        for i in 0..n {
            let Some(rule_src) = self.relators[i].clone() else {
                continue;
            };
            let m = rule_src.len();
            let inv = invert(&rule_src);
            // for each cyclic conjugate c = u v of r or r⁻¹ the subword u may become v⁻¹
            let mut rules: Vec<(Vec<Letter>, Vec<Letter>)> = Vec::new();
            for v in [&rule_src, &inv] {
                for s in 0..m {
                    let rot: Vec<Letter> = v[s..].iter().chain(&v[..s]).copied().collect();
                    for ulen in m.div_ceil(2)..=m {
                        let u = rot[..ulen].to_vec();
                        let repl = invert(&rot[ulen..]);
                        if shortlex_less(&repl, &u) {
                            rules.push((u, repl));
                        }
                    }
                }
            }
            for j in 0..n {
                if i == j || self.relators[i].is_none() {
                    continue;
                }
                loop {
                    let Some(target) = self.relators[j].as_ref() else {
                        break;
                    };
                    let Some(next) = improve(target, &rules) else {
                        break;
                    };
                    if !self.spend(budget) {
                        return changed;
                    }
                    self.uninstall(j);
                    self.install(j, next);
                    self.stats.substitutions += 1;
                    changed = true;
                }
            }
        }
        changed
    }

    fn into_presentation(self, sp: &SubgroupPresentation) -> SubgroupPresentation {
        let survivors: Vec<usize> = (0..self.alive.len()).filter(|&g| self.alive[g]).collect();
        let new_index: HashMap<usize, usize> =
            survivors.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        let renumber = |w: &[Letter]| -> Word {
            Word::from_letters(
                w.iter()
                    .map(|&l| letter(new_index[&gen_of(l)], l > 0))
                    .collect(),
            )
        };
        SubgroupPresentation {
            base: sp.base.clone(),
            schreier_generators: survivors
                .iter()
                .map(|&g| sp.schreier_generators[g].clone())
                .collect(),
            relators: self
                .relators
                .iter()
                .flatten()
                .map(|r| renumber(r))
                .collect(),
        }
    }
}

/// First rule application (by cyclic position, then rule order) that makes
/// `target` shorter, or equally long with a shortlex-smaller canonical form.
fn improve(target: &[Letter], rules: &[(Vec<Letter>, Vec<Letter>)]) -> Option<Vec<Letter>> {
    let n = target.len();
    if n == 0 {
        return None;
    }
    let mut old_canon: Option<Vec<Letter>> = None;
    for pos in 0..n {
        for (u, v) in rules {
            if u.len() > n || !(0..u.len()).all(|k| target[(pos + k) % n] == u[k]) {
                continue;
            }
            let mut rot: Vec<Letter> = target[pos..]
                .iter()
                .chain(&target[..pos])
                .copied()
                .collect();
            rot.splice(..u.len(), v.iter().copied());
            let next = reduce(&rot);
            if next.len() < n {
                return Some(next);
            }
            let old = old_canon.get_or_insert_with(|| canonical(target));
            if shortlex_less(&canonical(&next), old) {
                return Some(next);
            }
        }
    }
    None
}

/// True iff `w` is, up to rotation, inversion and renaming, a commutator
/// `g⁻¹ h⁻¹ g h` of two distinct generators.
pub fn is_commutator_shape(w: &Word) -> bool {
    let l = w.letters();
    l.len() == 4 && l[0] == -l[2] && l[1] == -l[3] && gen_of(l[0]) != gen_of(l[1])
}
