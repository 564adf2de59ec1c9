//! Rotation groups of rank-4 polytopes.
//!
//! A rotation triple `(σ₁, σ₂, σ₃)` generates a finite permutation group and
//! satisfies `(σ₁σ₂)² = (σ₂σ₃)² = (σ₁σ₂σ₃)² = 1`. From it we build the coset
//! geometry with face stabilizers
//!
//! ```text
//! S₀ = ⟨σ₂, σ₃⟩   S₁ = ⟨σ₁σ₂, σ₃⟩   S₂ = ⟨σ₁, σ₂σ₃⟩   S₃ = ⟨σ₁, σ₂⟩
//! ```
//!
//! and check the polytope axioms on it directly.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::PolytopeError;
use crate::perm::{
    element_order, evaluate, extends_to_homomorphism, subgroup_intersection_small, PermGroup,
    Permutation,
};
use crate::word::{gen_of, letter, Presentation, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchlafliType(pub [u64; 3]);

impl fmt::Display for SchlafliType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{}}}", self.0[0], self.0[1], self.0[2])
    }
}

/// Checks the even relators and generation; returns the generator orders.
pub fn validate_rotation_triple(
    group: &PermGroup,
    sigma: &[Permutation; 3],
) -> Result<SchlafliType, PolytopeError> {
    let degree = group.degree();
    for s in sigma {
        if s.degree() != degree {
            return Err(crate::error::PermError::DegreeMismatch(degree, s.degree()).into());
        }
    }
    let [s1, s2, s3] = sigma;
    let checks = [
        ("(s1*s2)^2", s1.then(s2).pow(2)),
        ("(s2*s3)^2", s2.then(s3).pow(2)),
        ("(s1*s2*s3)^2", s1.then(s2).then(s3).pow(2)),
    ];
    for (name, p) in checks {
        if !p.is_identity() {
            return Err(PolytopeError::RelationViolated(name.to_string()));
        }
    }
    let k = [element_order(s1), element_order(s2), element_order(s3)];
    if let Some(i) = k.iter().position(|&o| o < 2) {
        return Err(PolytopeError::DegenerateGenerator {
            index: i + 1,
            order: k[i],
        });
    }
    for s in sigma {
        if !group.contains(s)? {
            return Err(PolytopeError::NonGeneration);
        }
    }
    let generated = PermGroup::new(sigma.to_vec())?;
    if generated.order() != group.order() {
        return Err(PolytopeError::NonGeneration);
    }
    Ok(SchlafliType(k))
}

/// A validated rotation triple, optionally with the presentation whose
/// quotient it realises (generators `a, b, c ↦ σ₁, σ₂, σ₃`).
#[derive(Clone, Debug)]
pub struct RotationTriple {
    group: PermGroup,
    sigma: [Permutation; 3],
    source: Option<Presentation>,
    schlafli: SchlafliType,
}

impl PartialEq for RotationTriple {
    fn eq(&self, other: &Self) -> bool {
        self.sigma == other.sigma && self.source == other.source
    }
}

impl RotationTriple {
    pub fn new(
        group: PermGroup,
        sigma: [Permutation; 3],
        source: Option<Presentation>,
    ) -> Result<Self, PolytopeError> {
        let schlafli = validate_rotation_triple(&group, &sigma)?;
        if let Some(p) = &source {
            if p.generator_count() != 3 {
                return Err(PolytopeError::NotHomomorphism);
            }
        }
        Ok(RotationTriple {
            group,
            sigma,
            source,
            schlafli,
        })
    }

    /// Builds the group from the triple itself.
    pub fn from_generators(
        sigma: [Permutation; 3],
        source: Option<Presentation>,
    ) -> Result<Self, PolytopeError> {
        let group = PermGroup::new(sigma.to_vec())?;
        Self::new(group, sigma, source)
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn sigma(&self) -> &[Permutation; 3] {
        &self.sigma
    }

    pub fn source(&self) -> Option<&Presentation> {
        self.source.as_ref()
    }

    pub fn schlafli(&self) -> SchlafliType {
        self.schlafli
    }

    pub fn order(&self) -> u128 {
        self.group.order()
    }

    /// Subgroup generated by words in `σ₁, σ₂, σ₃`.
    pub fn subgroup(&self, words: &[Word]) -> Result<PermGroup, PolytopeError> {
        let gens = words
            .iter()
            .map(|w| evaluate(w, &self.sigma))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.group.subgroup(gens)?)
    }

    /// Image of a word in `σ₁, σ₂, σ₃`.
    pub fn image(&self, w: &Word) -> Result<Permutation, PolytopeError> {
        Ok(evaluate(w, &self.sigma)?)
    }
}

fn s(i: usize) -> Word {
    Word::generator(i)
}

fn prod(ws: &[Word]) -> Word {
    ws.iter().fold(Word::empty(), |acc, w| acc.mul(w))
}

/// Which of the three intersection equalities hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionReport {
    /// `⟨σ₁⟩ ∩ ⟨σ₂,σ₃⟩ = 1`
    pub first: bool,
    /// `⟨σ₁,σ₂⟩ ∩ ⟨σ₃⟩ = 1`
    pub second: bool,
    /// `⟨σ₁,σ₂⟩ ∩ ⟨σ₂,σ₃⟩ = ⟨σ₂⟩`
    pub third: bool,
}

impl IntersectionReport {
    pub fn holds(&self) -> bool {
        self.first && self.second && self.third
    }
}

pub fn intersection_details(
    t: &RotationTriple,
    cap: u128,
) -> Result<IntersectionReport, PolytopeError> {
    let g1 = t.subgroup(&[s(0)])?;
    let g3 = t.subgroup(&[s(2)])?;
    let g2 = t.subgroup(&[s(1)])?;
    let g12 = t.subgroup(&[s(0), s(1)])?;
    let g23 = t.subgroup(&[s(1), s(2)])?;
    let first = subgroup_intersection_small(&g1, &g23, cap)?.len() == 1;
    let second = subgroup_intersection_small(&g12, &g3, cap)?.len() == 1;
    let meet = subgroup_intersection_small(&g12, &g23, cap)?;
    let mut inner = g2.elements();
    inner.sort();
    let third = meet == inner;
    Ok(IntersectionReport {
        first,
        second,
        third,
    })
}

/// The chiral intersection condition, each equality computed exactly.
pub fn intersection_condition(t: &RotationTriple, cap: u128) -> Result<bool, PolytopeError> {
    Ok(intersection_details(t, cap)?.holds())
}

/// `|⟨σ₁,σ₂⟩|` and `|⟨σ₂,σ₃⟩|`.
pub fn rank3_subgroup_orders(t: &RotationTriple) -> Result<(u128, u128), PolytopeError> {
    Ok((
        t.subgroup(&[s(0), s(1)])?.order(),
        t.subgroup(&[s(1), s(2)])?.order(),
    ))
}

/// Quotient criterion for a map `σⱼ ↦ images[j]`.
///
/// Errors if the map does not respect the relators of the big triple's source
/// presentation. Otherwise true iff the map is injective on `⟨σ₁,σ₂⟩` or on
/// `⟨σ₂,σ₃⟩`, measured by comparing subgroup orders.
pub fn quotient_criterion(
    big: &RotationTriple,
    images: &[Permutation; 3],
) -> Result<bool, PolytopeError> {
    let source = big.source.as_ref().ok_or(PolytopeError::NotHomomorphism)?;
    if !extends_to_homomorphism(source, images)? {
        return Err(PolytopeError::NotHomomorphism);
    }
    let (b12, b23) = rank3_subgroup_orders(big)?;
    let i12 = PermGroup::new(vec![images[0].clone(), images[1].clone()])?.order();
    let i23 = PermGroup::new(vec![images[1].clone(), images[2].clone()])?.order();
    Ok(b12 == i12 || b23 == i23)
}

/// Mirror images `(σ₁⁻¹, σ₁²σ₂, σ₃)`.
pub fn mirror_images(sigma: &[Permutation; 3]) -> [Permutation; 3] {
    let [s1, s2, s3] = sigma;
    [s1.inverse(), s1.then(s1).then(s2), s3.clone()]
}

/// The substitution `a ↦ a⁻¹, b ↦ a²b, c ↦ c` on words.
pub fn mirror_word(w: &Word) -> Word {
    let a = s(0);
    let images = [a.inverse(), prod(&[a.clone(), a, s(1)]), s(2)];
    w.letters().iter().fold(Word::empty(), |acc, &l| {
        let img = &images[gen_of(l)];
        acc.mul(&if l > 0 { img.clone() } else { img.inverse() })
    })
}

/// True iff the mirror map sends every source relator to the identity.
pub fn mirror_extends(t: &RotationTriple) -> Result<bool, PolytopeError> {
    let source = t.source.as_ref().ok_or(PolytopeError::NotHomomorphism)?;
    Ok(extends_to_homomorphism(source, &mirror_images(&t.sigma))?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Regular,
    Chiral(ChiralWitness),
}

impl Verdict {
    pub fn is_chiral(&self) -> bool {
        matches!(self, Verdict::Chiral(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Regular => "Regular",
            Verdict::Chiral(_) => "Chiral",
        }
    }
}

/// A source relator whose mirror image is nontrivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiralWitness {
    /// 0-based position in the source presentation.
    pub relator_index: usize,
    pub relator: Word,
    /// The relator with the mirror substitution applied.
    pub mirrored: Word,
    /// Order of the mirrored relator's image.
    pub image_order: u64,
}

/// Every source relator whose mirror image is nontrivial, in presentation order.
pub fn chirality_witnesses(t: &RotationTriple) -> Result<Vec<ChiralWitness>, PolytopeError> {
    let source = t.source.as_ref().ok_or(PolytopeError::NotHomomorphism)?;
    let mut out = Vec::new();
    for (i, r) in source.relators().iter().enumerate() {
        let mirrored = mirror_word(r);
        let img = evaluate(&mirrored, &t.sigma)?;
        if !img.is_identity() {
            out.push(ChiralWitness {
                relator_index: i,
                relator: r.clone(),
                mirrored,
                image_order: element_order(&img),
            });
        }
    }
    Ok(out)
}

/// Regular or chiral, for a triple satisfying the intersection condition.
///
/// The witness is the first source relator, in presentation order, whose
/// mirror image is nontrivial.
pub fn chirality_verdict(t: &RotationTriple, cap: u128) -> Result<Verdict, PolytopeError> {
    if !intersection_condition(t, cap)? {
        return Err(PolytopeError::NotPolytopal);
    }
    let witnesses = chirality_witnesses(t)?;
    match witnesses.into_iter().next() {
        None => Ok(Verdict::Regular),
        Some(w) => Ok(Verdict::Chiral(w)),
    }
}

/// The enantiomorphic triple `(σ₁⁻¹, σ₁²σ₂, σ₃)` over the same group. The
/// source presentation, if any, is rewritten by the same substitution, which
/// is an involution on triples.
pub fn enantiomorph(t: &RotationTriple) -> RotationTriple {
    let sigma = mirror_images(&t.sigma);
    let source = t.source.as_ref().map(|p| {
        let rels: Vec<Word> = p.relators().iter().map(mirror_word).collect();
        Presentation::new(p.names(), rels).expect("mirror substitution is invertible")
    });
    let schlafli = SchlafliType([
        element_order(&sigma[0]),
        element_order(&sigma[1]),
        element_order(&sigma[2]),
    ]);
    RotationTriple {
        group: t.group.clone(),
        sigma,
        source,
        schlafli,
    }
}

/// Groups above this order are refused by exhaustive geometry checks.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 14;

/// Standard face stabilizers, as words in `σ₁, σ₂, σ₃`.
pub fn standard_stabilizers() -> [Vec<Word>; 4] {
    [
        vec![s(1), s(2)],
        vec![prod(&[s(0), s(1)]), s(2)],
        vec![s(0), prod(&[s(1), s(2)])],
        vec![s(0), s(1)],
    ]
}

/// Ranked incidence structure on cosets of the face stabilizers, with formal
/// least and greatest faces.
#[derive(Clone, Debug)]
pub struct CosetGeometry {
    group_order: u128,
    /// Number of faces of rank 0..=3.
    counts: [usize; 4],
    /// Stabilizer orders.
    stabilizer_orders: [u128; 4],
    /// `above[i][j - i - 1][f]`: sorted faces of rank `j > i` incident with face `f` of rank `i`.
    above: Vec<Vec<Vec<Vec<u32>>>>,
}

/// A face: rank in `-1..=4` and index within the rank.
pub type Face = (i8, usize);

impl CosetGeometry {
    pub fn face_counts(&self) -> [usize; 4] {
        self.counts
    }

    pub fn stabilizer_orders(&self) -> [u128; 4] {
        self.stabilizer_orders
    }

    pub fn group_order(&self) -> u128 {
        self.group_order
    }

    fn count(&self, rank: i8) -> usize {
        match rank {
            -1 | 4 => 1,
            r => self.counts[r as usize],
        }
    }

    /// `f ≤ g` in the face order.
    pub fn le(&self, f: Face, g: Face) -> bool {
        let (i, a) = f;
        let (j, b) = g;
        if i == j {
            return a == b;
        }
        if i > j {
            return false;
        }
        if i == -1 || j == 4 {
            return true;
        }
        self.above[i as usize][(j - i - 1) as usize][a]
            .binary_search(&(b as u32))
            .is_ok()
    }

    /// Faces of `rank` strictly between `lo` and `hi`.
    pub fn between(&self, lo: Face, hi: Face, rank: i8) -> Vec<usize> {
        debug_assert!(lo.0 < rank && rank < hi.0);
        if lo.0 >= 0 {
            let list = &self.above[lo.0 as usize][(rank - lo.0 - 1) as usize][lo.1];
            list.iter()
                .map(|&x| x as usize)
                .filter(|&x| self.le((rank, x), hi))
                .collect()
        } else {
            (0..self.count(rank))
                .filter(|&x| self.le((rank, x), hi))
                .collect()
        }
    }

    /// Diagnostic dump: `rank index : faces of rank+1 above it`, ranks -1..=3.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for rank in -1i8..=3 {
            for f in 0..self.count(rank) {
                let ups: Vec<String> = if rank == 3 {
                    vec!["0".into()]
                } else {
                    self.between((rank, f), (4, 0), rank + 1)
                        .into_iter()
                        .filter(|&g| self.le((rank, f), (rank + 1, g)))
                        .map(|g| g.to_string())
                        .collect()
                };
                let _ = writeln!(s, "{rank} {f} : {}", ups.join(" "));
            }
        }
        s
    }
}

/// Coset geometry of the standard stabilizers. Requires the intersection condition.
pub fn build_coset_geometry(t: &RotationTriple, cap: u128) -> Result<CosetGeometry, PolytopeError> {
    if !intersection_condition(t, cap)? {
        return Err(PolytopeError::NotPolytopal);
    }
    build_coset_geometry_with(t, &standard_stabilizers(), EXHAUSTIVE_LIMIT)
}

/// Coset geometry for arbitrary stabilizer generators (words in `σ₁, σ₂, σ₃`),
/// refusing groups above `limit`.
pub fn build_coset_geometry_with(
    t: &RotationTriple,
    stabilizers: &[Vec<Word>; 4],
    limit: u128,
) -> Result<CosetGeometry, PolytopeError> {
    let order = t.order();
    if order > limit {
        return Err(PolytopeError::TooLarge { order, limit });
    }
    let elements = t.group.elements();
    let index: HashMap<&Permutation, usize> =
        elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = elements.len();
    // right multiplication by each σ, as a table on element indices
    let mul: Vec<Vec<u32>> = t
        .sigma
        .iter()
        .map(|sg| elements.iter().map(|e| index[&e.then(sg)] as u32).collect())
        .collect();
    let right = |e: usize, w: &Word| -> usize {
        let mut x = e;
        for &l in w.letters() {
            debug_assert!(l > 0, "stabilizer words use positive letters");
            x = mul[gen_of(l)][x] as usize;
        }
        x
    };
    let mut stabilizer_orders = [0u128; 4];
    let mut comp: Vec<Vec<u32>> = Vec::with_capacity(4);
    let mut counts = [0usize; 4];
    for (i, gens) in stabilizers.iter().enumerate() {
        // positive-letter words suffice in a finite group
        let gens: Vec<Word> = gens.iter().map(positive_form(&t.sigma)).collect();
        stabilizer_orders[i] = t.subgroup(&gens)?.order();
        let mut label = vec![u32::MAX; n];
        let mut next = 0u32;
        for start in 0..n {
            if label[start] != u32::MAX {
                continue;
            }
            label[start] = next;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for g in &gens {
                    let y = right(x, g);
                    if label[y] == u32::MAX {
                        label[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        counts[i] = next as usize;
        comp.push(label);
    }
    let mut above: Vec<Vec<Vec<Vec<u32>>>> = Vec::with_capacity(3);
    for i in 0..3 {
        let mut per_j = Vec::new();
        for j in i + 1..4 {
            let mut sets: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); counts[i]];
            for e in 0..n {
                sets[comp[i][e] as usize].insert(comp[j][e]);
            }
            per_j.push(sets.into_iter().map(|s| s.into_iter().collect()).collect());
        }
        above.push(per_j);
    }
    above.push(Vec::new());
    Ok(CosetGeometry {
        group_order: order,
        counts,
        stabilizer_orders,
        above,
    })
}

/// Rewrites inverse letters as positive powers using generator orders.
fn positive_form(sigma: &[Permutation; 3]) -> impl Fn(&Word) -> Word + '_ {
    move |w: &Word| {
        let mut out = Vec::new();
        for &l in w.letters() {
            if l > 0 {
                out.push(l);
            } else {
                let g = gen_of(l);
                let k = element_order(&sigma[g]) as usize;
                out.extend(std::iter::repeat_n(letter(g, true), k - 1));
            }
        }
        Word::from_letters(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub p1_ok: bool,
    pub p2_ok: bool,
    pub p3_ok: bool,
    pub p4_ok: bool,
    pub flag_count: u64,
    pub face_counts: [usize; 4],
    pub schlafli: SchlafliType,
    /// `None` if the facet sections are not equivelar.
    pub facet_section_type: Option<(u64, u64)>,
    pub vertex_figure_type: Option<(u64, u64)>,
    pub sampled: bool,
}

impl AxiomReport {
    pub fn all_ok(&self) -> bool {
        self.p1_ok && self.p2_ok && self.p3_ok && self.p4_ok
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AxiomOptions {
    /// Check only every `n`-th section for P3 and P4; the report is marked sampled.
    pub sample_stride: Option<usize>,
}

/// Chains `lo < f_{lo+1} < ... < f_{hi-1} < hi`, as face indices per intermediate rank.
fn section_flags(g: &CosetGeometry, lo: Face, hi: Face) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        g: &CosetGeometry,
        prev: Face,
        hi: Face,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let r = prev.0 + 1;
        if r == hi.0 {
            out.push(cur.clone());
            return;
        }
        for f in g.between(prev, hi, r) {
            cur.push(f);
            rec(g, (r, f), hi, cur, out);
            cur.pop();
        }
    }
    rec(g, lo, hi, &mut cur, &mut out);
    out
}

/// Flags of a section connected under single-face changes.
fn flags_connected(flags: &[Vec<usize>]) -> bool {
    if flags.len() <= 1 {
        return true;
    }
    let mut parent: Vec<usize> = (0..flags.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut k = x;
        while p[k] != r {
            let n = p[k];
            p[k] = r;
            k = n;
        }
        r
    }
    let len = flags[0].len();
    for pos in 0..len {
        let mut groups: HashMap<Vec<usize>, usize> = HashMap::new();
        for (i, f) in flags.iter().enumerate() {
            let mut key = f.clone();
            key.remove(pos);
            match groups.get(&key) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
                None => {
                    groups.insert(key, i);
                }
            }
        }
    }
    let root = find(&mut parent, 0);
    (1..flags.len()).all(|i| find(&mut parent, i) == root)
}

/// Checks the four polytope axioms exhaustively (or on a sample of sections).
pub fn verify_axioms(
    g: &CosetGeometry,
    schlafli: SchlafliType,
    opts: &AxiomOptions,
) -> AxiomReport {
    let stride = opts.sample_stride.unwrap_or(1).max(1);
    let faces = |r: i8| 0..g.count(r);

    // P1: formal least/greatest faces, every proper face nonempty rank, order transitive
    let mut p1 = g.counts.iter().all(|&c| c > 0);
    'trans: for i in 0i8..=1 {
        for j in i + 1..=2 {
            for k in j + 1..=3 {
                for a in faces(i) {
                    for b in g.between((i, a), (4, 0), j) {
                        if !g.le((i, a), (j, b)) {
                            continue;
                        }
                        for c in g.between((j, b), (4, 0), k) {
                            if !g.le((i, a), (k, c)) {
                                p1 = false;
                                break 'trans;
                            }
                        }
                    }
                }
            }
        }
    }

    // P2: every incident pair two or more ranks apart has a face in between
    let mut p2 = true;
    'p2: for i in -1i8..=2 {
        for k in i + 2..=4 {
            for a in faces(i) {
                let uppers: Vec<usize> = if k == 4 {
                    vec![0]
                } else if i == -1 {
                    faces(k).collect()
                } else {
                    g.between((i, a), (4, 0), k)
                };
                for c in uppers {
                    if g.between((i, a), (k, c), i + 1).is_empty() {
                        p2 = false;
                        break 'p2;
                    }
                }
            }
        }
    }

    // P4: exactly two faces between any incident pair of ranks i-1 < i+1
    let mut p4 = true;
    let mut sampled = stride > 1;
    'p4: for i in -1i8..=2 {
        let k = i + 2;
        let mut seen = 0usize;
        for a in faces(i) {
            let uppers: Vec<usize> = if k == 4 {
                vec![0]
            } else if i == -1 {
                faces(k).collect()
            } else {
                g.between((i, a), (4, 0), k)
            };
            for c in uppers {
                seen += 1;
                if !seen.is_multiple_of(stride) && stride > 1 {
                    continue;
                }
                if g.between((i, a), (k, c), i + 1).len() != 2 {
                    p4 = false;
                    break 'p4;
                }
            }
        }
    }

    // flags of the whole structure
    let all_flags = section_flags(g, (-1, 0), (4, 0));
    let flag_count = all_flags.len() as u64;

    // P3: strong flag-connectivity on every section of rank >= 2
    let mut p3 = flags_connected(&all_flags);
    let mut section_no = 0usize;
    'p3: for i in -1i8..=1 {
        for k in i + 3..=4 {
            if i == -1 && k == 4 {
                continue;
            }
            for a in faces(i) {
                let uppers: Vec<usize> = if k == 4 {
                    vec![0]
                } else if i == -1 {
                    faces(k).collect()
                } else {
                    g.between((i, a), (4, 0), k)
                };
                for c in uppers {
                    section_no += 1;
                    if stride > 1 && !section_no.is_multiple_of(stride) {
                        continue;
                    }
                    if !flags_connected(&section_flags(g, (i, a), (k, c))) {
                        p3 = false;
                        break 'p3;
                    }
                }
            }
        }
    }
    if !p3 || !p4 {
        // failures are exact regardless of sampling
        sampled = sampled && p3 && p4;
    }

    let (facet_section_type, vertex_figure_type) = section_types(g);
    AxiomReport {
        p1_ok: p1,
        p2_ok: p2,
        p3_ok: p3,
        p4_ok: p4,
        flag_count,
        face_counts: g.counts,
        schlafli,
        facet_section_type,
        vertex_figure_type,
        sampled,
    }
}

/// Common size of all 2-sections between ranks `i-2` and `i+1` (`i` in 1..=3),
/// or `None` if they differ.
pub fn polygon_size(g: &CosetGeometry, i: i8) -> Option<u64> {
    let (lo_rank, hi_rank) = (i - 2, i + 1);
    let mut size: Option<usize> = None;
    for a in 0..g.count(lo_rank) {
        let uppers: Vec<usize> = if hi_rank == 4 {
            vec![0]
        } else if lo_rank == -1 {
            (0..g.count(hi_rank)).collect()
        } else {
            g.between((lo_rank, a), (4, 0), hi_rank)
        };
        for c in uppers {
            let n = g.between((lo_rank, a), (hi_rank, c), i - 1).len();
            match size {
                None => size = Some(n),
                Some(s) if s != n => return None,
                _ => {}
            }
        }
    }
    size.map(|s| s as u64)
}

/// Schläfli types of facets `{k₁,k₂}` and vertex-figures `{k₂,k₃}` measured on the geometry.
pub fn section_types(g: &CosetGeometry) -> (Option<(u64, u64)>, Option<(u64, u64)>) {
    let k1 = polygon_size(g, 1);
    let k2 = polygon_size(g, 2);
    let k3 = polygon_size(g, 3);
    (k1.zip(k2), k2.zip(k3))
}
