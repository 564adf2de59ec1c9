//! Permutations and permutation groups with a deterministic stabilizer chain.
//!
//! Composition is left to right: `p.then(&q)` applies `p` first. This matches
//! coset-table tracing, where the first letter of a word acts first.
//! Points are 0-based internally; cycle notation is 1-based.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;

use crate::error::PermError;
use crate::word::{gen_of, Presentation, Word};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(PermError::NotBijection);
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Parses 1-based cycle notation such as `(1 2 3)(4 5)`; `()` is the identity.
    pub fn from_cycles(degree: usize, text: &str) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let err = || PermError::CycleSyntax(text.to_string());
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body_end = rest.find(')').ok_or_else(err)?;
            if !rest.starts_with('(') {
                return Err(err());
            }
            let pts: Vec<usize> = rest[1..body_end]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| err()))
                .collect::<Result<_, _>>()?;
            if pts.iter().any(|&p| p == 0 || p > degree) {
                return Err(err());
            }
            for k in 0..pts.len() {
                images[pts[k] - 1] = (pts[(k + 1) % pts.len()] - 1) as u32;
            }
            rest = rest[body_end + 1..].trim_start();
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn pow(&self, n: i64) -> Permutation {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&sq);
            }
            sq = sq.then(&sq);
            e >>= 1;
        }
        acc
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for s in 0..self.degree() {
            if seen[s] || self.apply(s) == s {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut p = self.apply(s);
            while p != s {
                seen[p] = true;
                cyc.push(p);
                p = self.apply(p);
            }
            out.push(cyc);
        }
        out
    }

    pub fn first_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .position(|(i, &v)| i as u32 != v)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

/// `p` then `q`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation, PermError> {
    if p.degree() != q.degree() {
        return Err(PermError::DegreeMismatch(p.degree(), q.degree()));
    }
    Ok(p.then(q))
}

/// Least `n ≥ 1` with `pⁿ = 1`.
pub fn element_order(p: &Permutation) -> u64 {
    p.cycles()
        .iter()
        .fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
}

/// Product of generator images along `w`, first letter first.
pub fn evaluate(w: &Word, images: &[Permutation]) -> Result<Permutation, PermError> {
    let degree = images
        .first()
        .map(|p| p.degree())
        .ok_or(PermError::NoGenerators)?;
    if let Some(p) = images.iter().find(|p| p.degree() != degree) {
        return Err(PermError::DegreeMismatch(degree, p.degree()));
    }
    if let Some(&l) = w.letters().iter().find(|&&l| gen_of(l) >= images.len()) {
        return Err(PermError::ImageCount {
            expected: gen_of(l) + 1,
            got: images.len(),
        });
    }
    let inverses: Vec<Option<Permutation>> = (0..images.len())
        .map(|g| {
            w.letters()
                .iter()
                .any(|&l| l < 0 && gen_of(l) == g)
                .then(|| images[g].inverse())
        })
        .collect();
    let mut pts: Vec<u32> = (0..degree as u32).collect();
    for &l in w.letters() {
        let g = gen_of(l);
        let p = if l > 0 {
            &images[g]
        } else {
            inverses[g].as_ref().unwrap()
        };
        for x in pts.iter_mut() {
            *x = p.images[*x as usize];
        }
    }
    Ok(Permutation { images: pts })
}

/// True iff every relator of `p` evaluates to the identity on `images`.
pub fn extends_to_homomorphism(
    p: &Presentation,
    images: &[Permutation],
) -> Result<bool, PermError> {
    if images.len() != p.generator_count() {
        return Err(PermError::ImageCount {
            expected: p.generator_count(),
            got: images.len(),
        });
    }
    for r in p.relators() {
        if !evaluate(r, images)?.is_identity() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    /// `transversal[β]` maps the base point to `β`.
    transversal: Vec<Option<Permutation>>,
    inverse: Vec<Option<Permutation>>,
}

/// A finite permutation group with its stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
    /// Stop extending once the chain reaches this order (order known a priori).
    target: Option<u128>,
}

/// Alias matching the handle vocabulary used across the crate.
pub type PermGroupHandle = PermGroup;

impl PermGroup {
    /// Builds the stabilizer chain deterministically.
    pub fn new(generators: Vec<Permutation>) -> Result<Self, PermError> {
        Self::build(generators, None)
    }

    /// Like [`PermGroup::new`], stopping once the chain reaches `order`.
    /// Only sound when `order` is the true group order.
    pub fn with_known_order(generators: Vec<Permutation>, order: u128) -> Result<Self, PermError> {
        Self::build(generators, Some(order))
    }

    fn build(generators: Vec<Permutation>, target: Option<u128>) -> Result<Self, PermError> {
        let degree = generators
            .first()
            .map(|g| g.degree())
            .ok_or(PermError::NoGenerators)?;
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch(degree, g.degree()));
        }
        let mut group = PermGroup {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
            target,
        };
        for g in generators {
            group.add_generator(g);
        }
        Ok(group)
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: vec![Permutation::identity(degree)],
            levels: Vec::new(),
            target: None,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    /// Adds a generator, extending the chain.
    pub fn add_generator(&mut self, g: Permutation) {
        assert_eq!(g.degree(), self.degree, "generator degree");
        self.generators.push(g.clone());
        if !self.sift(&g, 0).0.is_identity() {
            self.extend(0, g);
        }
    }

    fn done(&self) -> bool {
        self.target.is_some_and(|t| self.order() >= t)
    }

    /// Strips `g` through levels `from..`; returns the residue and the level reached.
    fn sift(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let beta = h.apply(level.base);
            match &level.inverse[beta] {
                Some(u_inv) => h = h.then(u_inv),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    /// Adds `g` (fixing all earlier base points) to level `i` and restores closure.
    fn extend(&mut self, i: usize, g: Permutation) {
        if i == self.levels.len() {
            let base = g.first_moved().expect("identity never reaches extend");
            let mut transversal = vec![None; self.degree];
            let mut inverse = vec![None; self.degree];
            transversal[base] = Some(Permutation::identity(self.degree));
            inverse[base] = Some(Permutation::identity(self.degree));
            self.levels.push(Level {
                base,
                gens: Vec::new(),
                orbit: vec![base],
                transversal,
                inverse,
            });
        }
        self.levels[i].gens.push(g);
        let new_gen = self.levels[i].gens.len() - 1;
        // (orbit index, generator index) pairs still to process; old points only
        // need the new generator, new points need all generators
        let old_len = self.levels[i].orbit.len();
        let mut work: VecDeque<(usize, usize)> = (0..old_len).map(|k| (k, new_gen)).collect();
        while let Some((k, s)) = work.pop_front() {
            if self.done() {
                return;
            }
            let level = &self.levels[i];
            let beta = level.orbit[k];
            let gen = &level.gens[s];
            let gamma = gen.apply(beta);
            let u_beta = level.transversal[beta].as_ref().unwrap();
            if level.transversal[gamma].is_none() {
                let u_gamma = u_beta.then(gen);
                let level = &mut self.levels[i];
                level.inverse[gamma] = Some(u_gamma.inverse());
                level.transversal[gamma] = Some(u_gamma);
                level.orbit.push(gamma);
                let idx = level.orbit.len() - 1;
                let ngens = level.gens.len();
                work.extend((0..ngens).map(|t| (idx, t)));
                continue;
            }
            let schreier = u_beta
                .then(gen)
                .then(level.inverse[gamma].as_ref().unwrap());
            if schreier.is_identity() {
                continue;
            }
            let (residue, _) = self.sift(&schreier, i + 1);
            if !residue.is_identity() {
                self.extend(i + 1, residue);
                // new generators at level i cannot appear here, so queued pairs stay valid
            }
        }
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool, PermError> {
        if p.degree() != self.degree {
            return Err(PermError::DegreeMismatch(self.degree, p.degree()));
        }
        let (r, _) = self.sift(p, 0);
        Ok(r.is_identity())
    }

    /// All elements, deepest transversal first. Panics if the order exceeds `usize`.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for &beta in &level.orbit {
                let u = level.transversal[beta].as_ref().unwrap();
                for h in &out {
                    next.push(h.then(u));
                }
            }
            out = next;
        }
        out
    }

    /// Subgroup generated by `gens` (same degree).
    pub fn subgroup(&self, gens: Vec<Permutation>) -> Result<PermGroup, PermError> {
        if gens.is_empty() {
            return Ok(PermGroup::trivial(self.degree));
        }
        PermGroup::new(gens)
    }

    /// Normal closure of `gens` under conjugation by this group's generators.
    pub fn normal_closure(&self, gens: Vec<Permutation>) -> Result<PermGroup, PermError> {
        let mut h = PermGroup::trivial(self.degree);
        let mut queue: VecDeque<Permutation> = gens.into_iter().collect();
        while let Some(x) = queue.pop_front() {
            if h.contains(&x)? {
                continue;
            }
            h.add_generator(x.clone());
            for g in &self.generators {
                queue.push_back(x.conjugate_by(g));
            }
        }
        Ok(h)
    }

    /// Commutator subgroup: normal closure of generator commutators.
    pub fn derived_subgroup(&self) -> Result<PermGroup, PermError> {
        let gens: Vec<Permutation> = self
            .generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        let mut comms = Vec::new();
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                let c = gens[i]
                    .inverse()
                    .then(&gens[j].inverse())
                    .then(&gens[i])
                    .then(&gens[j]);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        let mut d = PermGroup {
            generators: gens,
            ..self.clone()
        }
        .normal_closure(comms)?;
        if d.generators.is_empty() {
            d.generators.push(Permutation::identity(self.degree));
        }
        Ok(d)
    }

    /// `G, G', G'', ...` until trivial or stable.
    pub fn derived_series(&self) -> Result<Vec<PermGroup>, PermError> {
        let mut series = vec![self.clone()];
        loop {
            let last = series.last().unwrap();
            if last.is_trivial() {
                break;
            }
            let d = last.derived_subgroup()?;
            if d.order() == last.order() {
                break;
            }
            series.push(d);
        }
        Ok(series)
    }

    pub fn is_solvable(&self) -> Result<bool, PermError> {
        Ok(self.derived_series()?.last().unwrap().is_trivial())
    }

    /// Number of proper derivation steps to reach the trivial group, if solvable.
    pub fn derived_length(&self) -> Result<Option<usize>, PermError> {
        let s = self.derived_series()?;
        Ok(s.last().unwrap().is_trivial().then(|| s.len() - 1))
    }
}

/// Brute-force element set by closure under right multiplication by generators.
pub fn closure(gens: &[Permutation]) -> HashSet<Permutation> {
    let degree = gens.first().map(|g| g.degree()).unwrap_or(0);
    let id = Permutation::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Exact `A ∩ B` by listing the smaller group and sifting against the other.
pub fn subgroup_intersection_small(
    a: &PermGroup,
    b: &PermGroup,
    cap: u128,
) -> Result<Vec<Permutation>, PermError> {
    if a.degree() != b.degree() {
        return Err(PermError::DegreeMismatch(a.degree(), b.degree()));
    }
    let (small, other) = if a.order() <= b.order() {
        (a, b)
    } else {
        (b, a)
    };
    if small.order() > cap {
        return Err(PermError::CapExceeded(a.order(), b.order(), cap));
    }
    let mut out = Vec::new();
    for x in small.elements() {
        if other.contains(&x)? {
            out.push(x);
        }
    }
    out.sort();
    Ok(out)
}

pub const DEFAULT_INTERSECTION_CAP: u128 = 10_000;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyc(n: usize, s: &str) -> Permutation {
        Permutation::from_cycles(n, s).unwrap()
    }

    #[test]
    fn composition_convention() {
        let t = cyc(3, "(1 2)");
        assert!(compose(&t, &t).unwrap().is_identity());
        assert_eq!(compose(&t, &Permutation::identity(3)).unwrap(), t);
        // (1 2) then (2 3): 1 -> 2 -> 3
        let p = compose(&t, &cyc(3, "(2 3)")).unwrap();
        assert_eq!(p.apply(0), 2);
        assert_eq!(p, cyc(3, "(1 3 2)"));
        assert!(compose(&t, &Permutation::identity(4)).is_err());
    }

    #[test]
    fn bijection_checked() {
        assert_eq!(
            Permutation::from_images(vec![0, 0]),
            Err(PermError::NotBijection)
        );
        assert_eq!(
            Permutation::from_images(vec![2, 0]),
            Err(PermError::NotBijection)
        );
        assert!(Permutation::from_cycles(3, "(1 4)").is_err());
    }

    #[test]
    fn s3_order_and_membership() {
        let g = PermGroup::new(vec![cyc(3, "(1 2)"), cyc(3, "(1 2 3)")]).unwrap();
        assert_eq!(g.order(), 6);
        let c3 = PermGroup::new(vec![cyc(3, "(1 2 3)")]).unwrap();
        assert!(!c3.contains(&cyc(3, "(1 2)")).unwrap());
        assert!(c3.contains(&Permutation::identity(3)).unwrap());
        assert!(c3.contains(&cyc(4, "()")).is_err());
    }

    #[test]
    fn identity_group() {
        let g = PermGroup::new(vec![Permutation::identity(5)]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.elements().len(), 1);
        assert!(g.is_solvable().unwrap());
    }

    #[test]
    fn element_orders() {
        assert_eq!(element_order(&Permutation::identity(4)), 1);
        assert_eq!(element_order(&cyc(5, "(1 2)(3 4 5)")), 6);
    }

    #[test]
    fn solvability() {
        let s5 = PermGroup::new(vec![cyc(5, "(1 2)"), cyc(5, "(1 2 3 4 5)")]).unwrap();
        assert_eq!(s5.order(), 120);
        let series = s5.derived_series().unwrap();
        assert_eq!(series.len(), 2);
        assert_eq!(series[1].order(), 60);
        assert!(!s5.is_solvable().unwrap());
        let ab = PermGroup::new(vec![cyc(6, "(1 2)"), cyc(6, "(3 4 5)")]).unwrap();
        let series = ab.derived_series().unwrap();
        assert_eq!(series.len(), 2);
        assert!(series[1].is_trivial());
        let s4 = PermGroup::new(vec![cyc(4, "(1 2)"), cyc(4, "(1 2 3 4)")]).unwrap();
        assert_eq!(s4.derived_length().unwrap(), Some(3));
    }

    #[test]
    fn intersection_small() {
        let s4 = PermGroup::new(vec![cyc(4, "(1 2)"), cyc(4, "(1 2 3 4)")]).unwrap();
        assert_eq!(
            subgroup_intersection_small(&s4, &s4, 100).unwrap().len(),
            24
        );
        let a = PermGroup::new(vec![cyc(4, "(1 2 3)")]).unwrap();
        let b = PermGroup::new(vec![cyc(4, "(1 2)(3 4)"), cyc(4, "(1 3)(2 4)")]).unwrap();
        assert_eq!(
            subgroup_intersection_small(&a, &b, 100).unwrap(),
            vec![Permutation::identity(4)]
        );
        assert!(matches!(
            subgroup_intersection_small(&s4, &s4, 10),
            Err(PermError::CapExceeded(..))
        ));
    }

    #[test]
    fn evaluate_words() {
        let imgs = vec![cyc(3, "(1 2)"), cyc(3, "(2 3)")];
        assert!(evaluate(&Word::empty(), &imgs).unwrap().is_identity());
        let w = Word::from_letters(vec![1, 2]);
        assert_eq!(evaluate(&w, &imgs).unwrap(), cyc(3, "(1 3 2)"));
        let w = Word::from_letters(vec![1, 2, 1, 2, 1, 2]);
        assert!(evaluate(&w, &imgs).unwrap().is_identity());
        assert!(evaluate(&Word::generator(2), &imgs).is_err());
    }

    #[test]
    fn homomorphism_check() {
        let p = Presentation::with_default_names(
            2,
            vec![Word::generator(0).pow(2), Word::generator(1).pow(3)],
        )
        .unwrap();
        let id = Permutation::identity(3);
        assert!(extends_to_homomorphism(&p, &[id.clone(), id.clone()]).unwrap());
        assert!(!extends_to_homomorphism(&p, &[cyc(3, "(1 2 3)"), id.clone()]).unwrap());
        assert!(extends_to_homomorphism(&p, &[cyc(3, "(1 2)"), cyc(3, "(1 2 3)")]).unwrap());
        assert!(extends_to_homomorphism(&p, &[id]).is_err());
    }

    #[test]
    fn known_order_shortcut() {
        let gens = vec![cyc(6, "(1 2 3 4 5 6)"), cyc(6, "(1 2)")];
        let g = PermGroup::with_known_order(gens.clone(), 720).unwrap();
        assert_eq!(g.order(), 720);
        assert!(g.contains(&cyc(6, "(1 6)(2 3)")).unwrap());
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn chain_order_matches_closure(gens in proptest::collection::vec(perm_strategy(7), 1..3)) {
            let g = PermGroup::new(gens.clone()).unwrap();
            let all = closure(&gens);
            prop_assert_eq!(g.order(), all.len() as u128);
            let listed: HashSet<Permutation> = g.elements().into_iter().collect();
            prop_assert_eq!(&listed, &all);
        }

        #[test]
        fn sifting_matches_closure(gens in proptest::collection::vec(perm_strategy(6), 1..3), x in perm_strategy(6)) {
            let g = PermGroup::new(gens.clone()).unwrap();
            prop_assert_eq!(g.contains(&x).unwrap(), closure(&gens).contains(&x));
        }

        #[test]
        fn evaluate_is_homomorphic(
            a in proptest::collection::vec(prop_oneof![1i32..=2, -2i32..=-1], 0..12),
            b in proptest::collection::vec(prop_oneof![1i32..=2, -2i32..=-1], 0..12),
            imgs in proptest::collection::vec(perm_strategy(6), 2..=2),
        ) {
            let (wa, wb) = (Word::from_letters(a.clone()), Word::from_letters(b.clone()));
            let mut ab = a; ab.extend(b);
            let lhs = evaluate(&Word::from_letters(ab), &imgs).unwrap();
            let rhs = evaluate(&wa, &imgs).unwrap().then(&evaluate(&wb, &imgs).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
