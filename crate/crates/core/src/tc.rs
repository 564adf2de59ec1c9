//! Todd–Coxeter coset enumeration.
//!
//! Two strategies share one engine: HLT (scan relators at every coset, defining
//! as needed, with a lookahead pass when the definition cap is reached) and
//! Felsch (define the first gap, then close every relator cycle through each
//! deduction). Coincidences go through union-find with immediate column merging.
//!
//! Cosets are numbered from 1; coset 1 is the subgroup itself. The cap counts
//! coset *definitions*; dead cosets are not recycled mid-run, so a run with a
//! larger cap replays a smaller-cap run exactly before continuing.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::TableError;
use crate::perm::Permutation;
use crate::word::{gen_of, Letter, Presentation, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    Hlt,
    Felsch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationConfig {
    pub strategy: Strategy,
    pub max_cosets: usize,
    pub lookahead: bool,
}

impl EnumerationConfig {
    pub const DEFAULT_CAP: usize = 1_000_000;

    pub fn hlt(max_cosets: usize) -> Self {
        EnumerationConfig {
            strategy: Strategy::Hlt,
            max_cosets: max_cosets.max(1),
            lookahead: true,
        }
    }

    pub fn felsch(max_cosets: usize) -> Self {
        EnumerationConfig {
            strategy: Strategy::Felsch,
            max_cosets: max_cosets.max(1),
            lookahead: false,
        }
    }

    pub fn with_cap(mut self, max_cosets: usize) -> Self {
        self.max_cosets = max_cosets.max(1);
        self
    }
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        Self::hlt(Self::DEFAULT_CAP)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Complete,
    /// The definition cap was reached before the table closed.
    Partial,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationStats {
    /// Total cosets defined, including ones later found to coincide.
    pub defined: usize,
    /// Largest number of simultaneously live cosets.
    pub max_live: usize,
    pub coincidences: usize,
}

/// Column of a letter: `2g` for `g`, `2g + 1` for `g⁻¹`.
#[inline]
pub fn column(l: Letter) -> usize {
    2 * gen_of(l) + usize::from(l < 0)
}

#[inline]
fn letter_of_column(col: usize) -> Letter {
    let g = (col / 2) as Letter + 1;
    if col.is_multiple_of(2) {
        g
    } else {
        -g
    }
}

/// A complete or partial coset table.
///
/// Every defined entry is a consequence of definitions, relator deductions
/// and coincidences, so a trace that stays inside defined entries computes a
/// true equality of cosets.
#[derive(Clone, Debug)]
pub struct CosetTable {
    cols: usize,
    degree: usize,
    /// Row-major, row 0 unused, 0 = undefined.
    entries: Vec<u32>,
    status: Status,
    subgroup: Vec<Word>,
    presentation: Presentation,
    stats: EnumerationStats,
}

/// Tables compare by content; run statistics are ignored.
impl PartialEq for CosetTable {
    fn eq(&self, other: &Self) -> bool {
        self.cols == other.cols
            && self.degree == other.degree
            && self.status == other.status
            && self.entries == other.entries
            && self.subgroup == other.subgroup
            && self.presentation == other.presentation
    }
}

impl Eq for CosetTable {}

impl CosetTable {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == Status::Complete
    }

    pub fn subgroup_words(&self) -> &[Word] {
        &self.subgroup
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn stats(&self) -> EnumerationStats {
        self.stats
    }

    pub fn generator_count(&self) -> usize {
        self.cols / 2
    }

    /// Image of `coset` under letter `l`, if defined.
    pub fn entry(&self, coset: usize, l: Letter) -> Option<usize> {
        match self.entries[coset * self.cols + column(l)] {
            0 => None,
            v => Some(v as usize),
        }
    }

    /// Follows `w` from `start`; `None` as soon as an entry is missing.
    pub fn trace(&self, start: usize, w: &Word) -> Option<usize> {
        if start == 0 || start > self.degree {
            return None;
        }
        let mut c = start;
        for &l in w.letters() {
            c = self.entry(c, l)?;
        }
        Some(c)
    }

    /// Renumbers cosets in first-appearance order of a row-by-row scan from coset 1.
    pub fn standardize(&self) -> Result<CosetTable, TableError> {
        if !self.is_complete() {
            return Err(TableError::Partial);
        }
        let n = self.degree;
        let mut new_of = vec![0u32; n + 1];
        let mut order = Vec::with_capacity(n);
        new_of[1] = 1;
        order.push(1usize);
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            for x in 0..self.cols {
                let d = self.entries[c * self.cols + x] as usize;
                if new_of[d] == 0 {
                    order.push(d);
                    new_of[d] = order.len() as u32;
                }
            }
            i += 1;
        }
        let mut entries = vec![0u32; (n + 1) * self.cols];
        for (k, &c) in order.iter().enumerate() {
            for x in 0..self.cols {
                entries[(k + 1) * self.cols + x] = new_of[self.entries[c * self.cols + x] as usize];
            }
        }
        Ok(CosetTable {
            entries,
            ..self.clone()
        })
    }

    /// One permutation of `{0..degree}` per generator (coset `i` is point `i - 1`).
    pub fn permutation_rep(&self) -> Result<Vec<Permutation>, TableError> {
        if !self.is_complete() {
            return Err(TableError::Partial);
        }
        (0..self.generator_count())
            .map(|g| {
                let images: Vec<u32> = (1..=self.degree)
                    .map(|c| self.entries[c * self.cols + 2 * g] - 1)
                    .collect();
                Permutation::from_images(images).map_err(|e| TableError::Audit(e.to_string()))
            })
            .collect()
    }

    /// Checks entry symmetry; on complete tables also that columns are
    /// permutations and every relator closes at every coset.
    pub fn audit(&self) -> Result<(), TableError> {
        for c in 1..=self.degree {
            for x in 0..self.cols {
                let d = self.entries[c * self.cols + x] as usize;
                if d == 0 {
                    if self.is_complete() {
                        return Err(TableError::Audit(format!(
                            "complete table has gap at ({c},{x})"
                        )));
                    }
                    continue;
                }
                if d > self.degree {
                    return Err(TableError::Audit(format!(
                        "entry ({c},{x}) = {d} out of range"
                    )));
                }
                if self.entries[d * self.cols + (x ^ 1)] as usize != c {
                    return Err(TableError::Audit(format!(
                        "asymmetric entry ({c},{x}) = {d}"
                    )));
                }
            }
        }
        if self.is_complete() {
            for r in self.presentation.relators() {
                for c in 1..=self.degree {
                    if self.trace(c, r) != Some(c) {
                        return Err(TableError::Audit(format!(
                            "relator {r} does not close at coset {c}"
                        )));
                    }
                }
            }
            for w in &self.subgroup {
                if self.trace(1, w) != Some(1) {
                    return Err(TableError::Audit(format!(
                        "subgroup word {w} does not fix coset 1"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Diagnostic dump: one line per coset, images under `g1, g1^-1, g2, ...`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for c in 1..=self.degree {
            let _ = write!(s, "{c}");
            for x in 0..self.cols {
                let _ = write!(s, " {}", self.entries[c * self.cols + x]);
            }
            s.push('\n');
        }
        s
    }

    /// Schreier transversal representatives, breadth-first from coset 1.
    /// Returns for each coset its (parent coset, letter) edge; coset 1 has none.
    pub fn spanning_tree(&self) -> Vec<Option<(usize, Letter)>> {
        let mut parent = vec![None; self.degree + 1];
        let mut seen = vec![false; self.degree + 1];
        seen[1] = true;
        let mut queue = VecDeque::from([1usize]);
        while let Some(c) = queue.pop_front() {
            for x in 0..self.cols {
                let d = self.entries[c * self.cols + x] as usize;
                if d != 0 && !seen[d] {
                    seen[d] = true;
                    parent[d] = Some((c, letter_of_column(x)));
                    queue.push_back(d);
                }
            }
        }
        parent
    }

    /// Word carrying coset 1 to each coset along the spanning tree.
    pub fn transversal(&self) -> Vec<Word> {
        let parent = self.spanning_tree();
        let mut reps = vec![Word::empty(); self.degree + 1];
        let mut order: Vec<usize> = Vec::with_capacity(self.degree);
        // BFS order guarantees parents come first
        let mut seen = vec![false; self.degree + 1];
        seen[1] = true;
        let mut queue = VecDeque::from([1usize]);
        while let Some(c) = queue.pop_front() {
            order.push(c);
            for x in 0..self.cols {
                let d = self.entries[c * self.cols + x] as usize;
                if d != 0 && !seen[d] && parent[d].map(|p| p.0) == Some(c) {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
        for &c in &order {
            if let Some((p, l)) = parent[c] {
                let mut letters = reps[p].letters().to_vec();
                letters.push(l);
                reps[c] = Word::from_letters(letters);
            }
        }
        reps
    }
}

/// Enumerates cosets of the subgroup generated by `subgroup` in the group
/// presented by `p`.
pub fn enumerate(
    p: &Presentation,
    subgroup: &[Word],
    cfg: &EnumerationConfig,
) -> Result<CosetTable, TableError> {
    enumerate_with_probe(p, subgroup, cfg, 0, |_| false)
}

/// Like [`enumerate`], but calls `probe` on the live table every
/// `probe_every` definitions (and once at the end). Returning `true` from the
/// probe stops the run early with a `Partial` table.
pub fn enumerate_with_probe<F>(
    p: &Presentation,
    subgroup: &[Word],
    cfg: &EnumerationConfig,
    probe_every: usize,
    mut probe: F,
) -> Result<CosetTable, TableError>
where
    F: FnMut(&Probe<'_>) -> bool,
{
    let ngens = p.generator_count();
    for w in subgroup {
        if let Some(&l) = w.letters().iter().find(|&&l| gen_of(l) >= ngens) {
            return Err(TableError::ForeignGenerator(gen_of(l)));
        }
    }
    let mut e = Engine::new(p, subgroup, cfg);
    let status = e.run(probe_every, &mut probe);
    Ok(e.finish(status, p, subgroup))
}

/// Read-only view of an in-progress enumeration, with no pending coincidences.
pub struct Probe<'a> {
    engine: &'a Engine,
}

impl Probe<'_> {
    pub fn defined(&self) -> usize {
        self.engine.n
    }

    pub fn live(&self) -> usize {
        self.engine.live
    }

    /// Traces `w` from the subgroup coset; `Some(true)` iff it returns there.
    pub fn trace_fixes_subgroup_coset(&self, w: &Word) -> Option<bool> {
        let e = self.engine;
        let mut c = 1usize;
        for &l in w.letters() {
            c = e.get(c, column(l)) as usize;
            if c == 0 {
                return None;
            }
        }
        Some(c == 1)
    }
}

struct Engine {
    cols: usize,
    cap: usize,
    strategy: Strategy,
    lookahead: bool,
    /// Relators and subgroup words as column sequences.
    relators: Vec<Vec<usize>>,
    subgroup: Vec<Vec<usize>>,
    /// Felsch: cyclic conjugates of relators and their inverses, by first column.
    conjugates: Vec<Vec<Vec<usize>>>,
    table: Vec<u32>,
    parent: Vec<u32>,
    n: usize,
    live: usize,
    stats: EnumerationStats,
    coinc_queue: Vec<u32>,
    deductions: Vec<(u32, usize)>,
    cap_hit: bool,
}

enum Flow {
    Continue,
    Stop(Status),
}

impl Engine {
    fn new(p: &Presentation, subgroup: &[Word], cfg: &EnumerationConfig) -> Self {
        let cols = 2 * p.generator_count();
        let to_cols = |w: &Word| w.letters().iter().map(|&l| column(l)).collect::<Vec<_>>();
        let relators: Vec<Vec<usize>> = p.relators().iter().map(to_cols).collect();
        let subgroup: Vec<Vec<usize>> = subgroup
            .iter()
            .map(|w| w.free_reduce())
            .filter(|w| !w.is_empty())
            .map(|w| to_cols(&w))
            .collect();
        let mut conjugates = vec![Vec::<Vec<usize>>::new(); cols];
        if cfg.strategy == Strategy::Felsch {
            for r in &relators {
                let inv: Vec<usize> = r.iter().rev().map(|&x| x ^ 1).collect();
                for w in [r, &inv] {
                    for s in 0..w.len() {
                        let rot: Vec<usize> = w[s..].iter().chain(&w[..s]).copied().collect();
                        let bucket = &mut conjugates[rot[0]];
                        if !bucket.contains(&rot) {
                            bucket.push(rot);
                        }
                    }
                }
            }
        }
        Engine {
            cols,
            cap: cfg.max_cosets.max(1),
            strategy: cfg.strategy,
            lookahead: cfg.lookahead,
            relators,
            subgroup,
            conjugates,
            table: vec![0; 2 * cols],
            parent: vec![0, 1],
            n: 1,
            live: 1,
            stats: EnumerationStats {
                defined: 1,
                max_live: 1,
                coincidences: 0,
            },
            coinc_queue: Vec::new(),
            deductions: Vec::new(),
            cap_hit: false,
        }
    }

    #[inline]
    fn get(&self, c: usize, x: usize) -> u32 {
        self.table[c * self.cols + x]
    }

    #[inline]
    fn set(&mut self, c: usize, x: usize, d: u32) {
        self.table[c * self.cols + x] = d;
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    /// New coset as the image of `c` under column `x`. `false` at the cap.
    fn define(&mut self, c: usize, x: usize) -> bool {
        if self.n >= self.cap {
            self.cap_hit = true;
            return false;
        }
        self.n += 1;
        let d = self.n;
        self.table.resize((d + 1) * self.cols, 0);
        self.parent.push(d as u32);
        self.live += 1;
        self.stats.defined = self.n;
        self.stats.max_live = self.stats.max_live.max(self.live);
        self.set(c, x, d as u32);
        self.set(d, x ^ 1, c as u32);
        if self.strategy == Strategy::Felsch {
            self.deductions.push((c as u32, x));
        }
        true
    }

    fn deduce(&mut self, c: usize, x: usize, d: usize) {
        self.set(c, x, d as u32);
        self.set(d, x ^ 1, c as u32);
        if self.strategy == Strategy::Felsch {
            self.deductions.push((c as u32, x));
        }
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut k = c;
        while self.parent[k] as usize != r {
            let next = self.parent[k] as usize;
            self.parent[k] = r as u32;
            k = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo as u32;
            self.live -= 1;
            self.stats.coincidences += 1;
            self.coinc_queue.push(hi as u32);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        let mut i = 0;
        while i < self.coinc_queue.len() {
            let g = self.coinc_queue[i] as usize;
            i += 1;
            for x in 0..self.cols {
                let d = self.get(g, x) as usize;
                if d == 0 {
                    continue;
                }
                self.set(g, x, 0);
                if self.get(d, x ^ 1) as usize == g {
                    self.set(d, x ^ 1, 0);
                }
                let mu = self.rep(g);
                let nu = self.rep(d);
                let m_x = self.get(mu, x) as usize;
                if m_x != 0 {
                    self.merge(nu, m_x);
                } else {
                    let n_x = self.get(nu, x ^ 1) as usize;
                    if n_x != 0 {
                        self.merge(mu, n_x);
                    } else {
                        self.deduce(mu, x, nu);
                    }
                }
            }
        }
        self.coinc_queue.clear();
    }

    /// Scans `w` at `alpha`, defining cosets as needed. `false` if the cap stopped it.
    fn scan_and_fill(&mut self, alpha: usize, w: &[usize]) -> bool {
        let mut f = alpha;
        let mut b = alpha;
        let mut i = 0;
        let mut j = w.len();
        loop {
            while i < j {
                let nf = self.get(f, w[i]);
                if nf == 0 {
                    break;
                }
                f = nf as usize;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return true;
            }
            while j > i {
                let nb = self.get(b, w[j - 1] ^ 1);
                if nb == 0 {
                    break;
                }
                b = nb as usize;
                j -= 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return true;
            }
            if j == i + 1 {
                self.deduce(f, w[i], b);
                return true;
            }
            if !self.define(f, w[i]) {
                return false;
            }
        }
    }

    /// Scans `w` at `alpha` without defining; deduces or merges if possible.
    fn scan(&mut self, alpha: usize, w: &[usize]) {
        let mut f = alpha;
        let mut b = alpha;
        let mut i = 0;
        let mut j = w.len();
        while i < j {
            let nf = self.get(f, w[i]);
            if nf == 0 {
                break;
            }
            f = nf as usize;
            i += 1;
        }
        if i == j {
            if f != b {
                self.coincidence(f, b);
            }
            return;
        }
        while j > i {
            let nb = self.get(b, w[j - 1] ^ 1);
            if nb == 0 {
                break;
            }
            b = nb as usize;
            j -= 1;
        }
        if i == j {
            if f != b {
                self.coincidence(f, b);
            }
        } else if j == i + 1 {
            self.deduce(f, w[i], b);
        }
    }

    fn process_deductions(&mut self) {
        while let Some((c, x)) = self.deductions.pop() {
            let c = c as usize;
            if !self.is_live(c) {
                continue;
            }
            let d = self.get(c, x) as usize;
            for k in 0..self.conjugates[x].len() {
                if !self.is_live(c) {
                    break;
                }
                let w = std::mem::take(&mut self.conjugates[x][k]);
                self.scan(c, &w);
                self.conjugates[x][k] = w;
            }
            if d != 0 && self.is_live(d) {
                let xi = x ^ 1;
                for k in 0..self.conjugates[xi].len() {
                    if !self.is_live(d) {
                        break;
                    }
                    let w = std::mem::take(&mut self.conjugates[xi][k]);
                    self.scan(d, &w);
                    self.conjugates[xi][k] = w;
                }
            }
        }
    }

    /// Scans every relator at every live coset without defining, until stable.
    fn lookahead_pass(&mut self) {
        loop {
            let before = (self.live, self.filled());
            let mut c = 1;
            while c <= self.n {
                if self.is_live(c) {
                    for k in 0..self.relators.len() {
                        if !self.is_live(c) {
                            break;
                        }
                        let r = std::mem::take(&mut self.relators[k]);
                        self.scan(c, &r);
                        self.relators[k] = r;
                    }
                }
                c += 1;
            }
            if (self.live, self.filled()) == before {
                break;
            }
        }
    }

    fn filled(&self) -> usize {
        self.table.iter().filter(|&&v| v != 0).count()
    }

    fn is_closed(&self) -> bool {
        (1..=self.n)
            .filter(|&c| self.is_live(c))
            .all(|c| (0..self.cols).all(|x| self.get(c, x) != 0))
    }

    fn run<F: FnMut(&Probe<'_>) -> bool>(&mut self, probe_every: usize, probe: &mut F) -> Status {
        for k in 0..self.subgroup.len() {
            let w = std::mem::take(&mut self.subgroup[k]);
            let ok = self.scan_and_fill(1, &w);
            self.subgroup[k] = w;
            if self.strategy == Strategy::Felsch {
                self.process_deductions();
            }
            if !ok {
                return self.at_cap();
            }
        }
        match self.strategy {
            Strategy::Hlt => self.run_hlt(probe_every, probe),
            Strategy::Felsch => self.run_felsch(probe_every, probe),
        }
    }

    fn at_cap(&mut self) -> Status {
        if self.lookahead {
            self.lookahead_pass();
            if self.is_closed() {
                return Status::Complete;
            }
        }
        Status::Partial
    }

    fn check_probe<F: FnMut(&Probe<'_>) -> bool>(
        &mut self,
        probe_every: usize,
        next_probe: &mut usize,
        probe: &mut F,
    ) -> Flow {
        if probe_every > 0 && self.n >= *next_probe {
            *next_probe = self.n + probe_every;
            if probe(&Probe { engine: self }) {
                return Flow::Stop(Status::Partial);
            }
        }
        Flow::Continue
    }

    fn run_hlt<F: FnMut(&Probe<'_>) -> bool>(
        &mut self,
        probe_every: usize,
        probe: &mut F,
    ) -> Status {
        let mut next_probe = probe_every;
        let mut c = 1;
        while c <= self.n {
            if self.is_live(c) {
                for k in 0..self.relators.len() {
                    if !self.is_live(c) {
                        break;
                    }
                    let r = std::mem::take(&mut self.relators[k]);
                    let ok = self.scan_and_fill(c, &r);
                    self.relators[k] = r;
                    if !ok {
                        return self.at_cap();
                    }
                }
                for x in 0..self.cols {
                    if !self.is_live(c) {
                        break;
                    }
                    if self.get(c, x) == 0 && !self.define(c, x) {
                        return self.at_cap();
                    }
                }
                if let Flow::Stop(s) = self.check_probe(probe_every, &mut next_probe, probe) {
                    return s;
                }
            }
            c += 1;
        }
        Status::Complete
    }

    fn run_felsch<F: FnMut(&Probe<'_>) -> bool>(
        &mut self,
        probe_every: usize,
        probe: &mut F,
    ) -> Status {
        let mut next_probe = probe_every;
        let mut c = 1;
        while c <= self.n {
            if self.is_live(c) {
                for x in 0..self.cols {
                    if !self.is_live(c) {
                        break;
                    }
                    if self.get(c, x) == 0 {
                        if !self.define(c, x) {
                            return self.at_cap();
                        }
                        self.process_deductions();
                        if let Flow::Stop(s) = self.check_probe(probe_every, &mut next_probe, probe)
                        {
                            return s;
                        }
                    }
                }
            }
            c += 1;
        }
        Status::Complete
    }

    fn finish(self, status: Status, p: &Presentation, subgroup: &[Word]) -> CosetTable {
        let mut new_of = vec![0u32; self.n + 1];
        let mut k = 0u32;
        for c in 1..=self.n {
            if self.is_live(c) {
                k += 1;
                new_of[c] = k;
            }
        }
        let degree = k as usize;
        let mut entries = vec![0u32; (degree + 1) * self.cols];
        for c in 1..=self.n {
            let nc = new_of[c] as usize;
            if nc == 0 {
                continue;
            }
            for x in 0..self.cols {
                let d = self.get(c, x) as usize;
                entries[nc * self.cols + x] = if d == 0 { 0 } else { new_of[d] };
            }
        }
        CosetTable {
            cols: self.cols,
            degree,
            entries,
            status,
            subgroup: subgroup.to_vec(),
            presentation: p.clone(),
            stats: self.stats,
        }
    }
}
