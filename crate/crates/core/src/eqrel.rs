//! Bounded-depth approximation of the relation `u ~ v` iff some element of
//! the closure of `H = ⟨gens⟩` has the branch pair `u → v`.
//!
//! Words of length at most `D` are kept in a union-find, indexed in heap
//! order (`w0 = 2w+1`, `w1 = 2w+2`). Seeds are the canonical pairs of all
//! products of at most `L` generators and inverses. Saturation applies
//!
//! * descendants: `u ~ v` gives `u0 ~ v0` and `u1 ~ v1`;
//! * coherence: `u0 ~ v0` and `u1 ~ v1` give `u ~ v`;
//! * optionally, for `h` in the ball and `u ~ u0 ~ u1`: every `[v] ⊂ h([u])`
//!   inside `(0,1)` joins `u`, and if `[u)` is a fundamental domain of `h` on
//!   an orbital, every `[v]` inside that orbital joins `u`.
//!
//! Every merge is logged with its justification; [`EquivRelation::replay`]
//! re-checks the log from scratch. Collapse of all inner words is evidence
//! that the closure contains `[F,F]`; failure to collapse proves nothing.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dynamics::{is_fundamental_domain, orbitals, Orbital};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::words::{BinaryWord, Rational};

/// Largest supported depth bound.
pub const MAX_DEPTH_BOUND: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqrelConfig {
    /// Longest product of generators and inverses in the ball.
    pub word_budget: usize,
    /// Longest word in the relation.
    pub depth_bound: usize,
    /// Largest ball, in distinct elements.
    pub ball_cap: usize,
    pub accelerators: bool,
}

impl Default for EqrelConfig {
    fn default() -> Self {
        EqrelConfig {
            word_budget: 4,
            depth_bound: 6,
            ball_cap: 10_000,
            accelerators: true,
        }
    }
}

/// A product of generators: signed 1-based indices, `-i` for an inverse.
pub type GroupWord = Vec<i64>;

/// Why two words were merged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Provenance {
    /// The product has the branch pair `u → v`.
    Seed { product: GroupWord },
    /// Supplied by the caller.
    Hypothesis,
    /// `u = p·d`, `v = q·d` with `p ~ q`.
    Descendant { p: BinaryWord, q: BinaryWord },
    /// `u0 ~ v0` and `u1 ~ v1`.
    Coherence,
    /// `u ~ u0 ~ u1` and `[v] ⊆ h([u]) ⊂ (0,1)` for `h` the product.
    Image { product: GroupWord },
    /// `u ~ u0 ~ u1`, `[u)` is a fundamental domain of the product on
    /// `orbital` and `[v] ⊂ orbital`.
    FundamentalDomain {
        product: GroupWord,
        orbital: Orbital,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEntry {
    pub u: BinaryWord,
    pub v: BinaryWord,
    pub provenance: Provenance,
}

fn group_word_text(w: &GroupWord) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&i| {
            if i > 0 {
                format!("g{i}")
            } else {
                format!("g{}^-1", -i)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for LogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~ {} : ", self.u, self.v)?;
        match &self.provenance {
            Provenance::Seed { product } => write!(f, "seed {}", group_word_text(product)),
            Provenance::Hypothesis => write!(f, "hypothesis"),
            Provenance::Descendant { p, q } => write!(f, "descendant of {p} ~ {q}"),
            Provenance::Coherence => write!(f, "coherence"),
            Provenance::Image { product } => write!(f, "image under {}", group_word_text(product)),
            Provenance::FundamentalDomain { product, orbital } => {
                write!(
                    f,
                    "fundamental domain of {} on {orbital}",
                    group_word_text(product)
                )
            }
        }
    }
}

#[derive(Debug, Clone)]
struct BallElement {
    word: GroupWord,
    element: Element,
    orbitals: Vec<Orbital>,
}

/// Union-find over all words of length at most `depth_bound`.
#[derive(Debug, Clone)]
pub struct EquivRelation {
    depth_bound: usize,
    generators: Vec<Element>,
    config: EqrelConfig,
    words: Vec<BinaryWord>,
    bounds: Vec<(Rational, Rational)>,
    parent: Vec<usize>,
    ball: Vec<BallElement>,
    log: Vec<LogEntry>,
    /// Anchors whose accelerator consequences are already merged.
    anchored: Vec<bool>,
}

/// JSON dump: classes of size at least two as sorted word lists, and the log
/// one entry per line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDump {
    pub depth_bound: usize,
    pub classes: Vec<Vec<BinaryWord>>,
    pub log: Vec<String>,
}

fn index_of(w: &BinaryWord) -> usize {
    w.digits()
        .iter()
        .fold(0usize, |i, &d| 2 * i + 1 + d as usize)
}

fn find_in(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Joins the classes, keeping the smaller root; false if already joined.
fn join(parent: &mut [usize], a: usize, b: usize) -> bool {
    let (ra, rb) = (find_in(parent, a), find_in(parent, b));
    if ra == rb {
        return false;
    }
    let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
    parent[hi] = lo;
    true
}

/// Products of at most `budget` generators and inverses, breadth first,
/// deduplicated by canonical form.
fn ball(gens: &[Element], budget: usize, cap: usize) -> Result<Vec<BallElement>> {
    let mut seen: HashSet<Element> = HashSet::new();
    let mut out: Vec<BallElement> = Vec::new();
    let id = Element::identity();
    seen.insert(id.clone());
    out.push(BallElement {
        word: Vec::new(),
        orbitals: Vec::new(),
        element: id,
    });
    let letters: Vec<(i64, Element)> = gens
        .iter()
        .enumerate()
        .flat_map(|(i, g)| [(i as i64 + 1, g.clone()), (-(i as i64) - 1, g.invert())])
        .collect();
    let mut frontier = vec![0usize];
    for _ in 0..budget {
        let mut next = Vec::new();
        for &k in &frontier {
            for (letter, x) in &letters {
                let e = out[k].element.compose(x);
                if seen.insert(e.clone()) {
                    if out.len() >= cap {
                        return Err(Error::Budget(format!(
                            "ball of radius {budget} exceeds {cap} elements"
                        )));
                    }
                    let mut word = out[k].word.clone();
                    word.push(*letter);
                    next.push(out.len());
                    out.push(BallElement {
                        word,
                        orbitals: orbitals(&e),
                        element: e,
                    });
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// Heap indices of the words `v` with `|v| ≤ depth` and `[v]` inside
/// `[lo,hi]`, or inside `(lo,hi)` when `open`.
fn words_within(depth: usize, lo: &Rational, hi: &Rational, open: bool) -> Vec<usize> {
    let mut out = Vec::new();
    for len in 1..=depth {
        let scale = Rational::pow2(len as i64);
        let (a, b) = (lo * &scale, hi * &scale);
        // j/2^len ≥ lo (or > lo) and (j+1)/2^len ≤ hi (or < hi)
        let first = if open { a.floor() + 1 } else { -(-a).floor() };
        let last = if open {
            -(-b).floor() - 2
        } else {
            b.floor() - 1
        };
        let base = (1usize << len) - 1;
        let max = (1i64 << len) - 1;
        let first = i64::try_from(first).unwrap_or(i64::MAX).max(0);
        let last = i64::try_from(last).unwrap_or(i64::MIN).min(max);
        for j in first..=last {
            out.push(base + j as usize);
        }
    }
    out
}

fn product(gens: &[Element], word: &GroupWord) -> Option<Element> {
    let mut e = Element::identity();
    for &i in word {
        let g = gens.get(i.unsigned_abs() as usize - 1)?;
        e = e.compose(&if i > 0 { g.clone() } else { g.invert() });
    }
    Some(e)
}

impl EquivRelation {
    /// The equality relation on words of length at most `depth_bound`.
    pub fn discrete(depth_bound: usize) -> Result<Self> {
        Self::empty(
            &[],
            EqrelConfig {
                depth_bound,
                ..EqrelConfig::default()
            },
        )
    }

    fn empty(gens: &[Element], config: EqrelConfig) -> Result<Self> {
        let d = config.depth_bound;
        if !(2..=MAX_DEPTH_BOUND).contains(&d) {
            return Err(Error::precondition(format!(
                "depth bound {d} must lie in 2..={MAX_DEPTH_BOUND}"
            )));
        }
        if config.word_budget < 1 {
            return Err(Error::precondition("word budget must be at least 1"));
        }
        let size = (1usize << (d + 1)) - 1;
        let mut words = Vec::with_capacity(size);
        words.push(BinaryWord::empty());
        for i in 1..size {
            let p = &words[(i - 1) / 2];
            let w = p.child(((i - 1) % 2) as u8);
            words.push(w);
        }
        let bounds = words
            .iter()
            .map(|w| (w.left_endpoint(), w.right_endpoint()))
            .collect();
        Ok(EquivRelation {
            depth_bound: d,
            generators: gens.to_vec(),
            config,
            words,
            bounds,
            parent: (0..size).collect(),
            ball: Vec::new(),
            log: Vec::new(),
            anchored: vec![false; size],
        })
    }

    /// Seeds from the ball of radius `word_budget` and saturates.
    pub fn from_generators(gens: &[Element], config: EqrelConfig) -> Result<Self> {
        let mut rel = Self::empty(gens, config)?;
        rel.ball = ball(gens, config.word_budget, config.ball_cap)?;
        let d = rel.depth_bound;
        let mut seeds = Vec::new();
        for b in &rel.ball {
            for (u, v) in b.element.pairs() {
                if u != v && u.len() <= d && v.len() <= d {
                    seeds.push((index_of(u), index_of(v), b.word.clone()));
                }
            }
        }
        for (u, v, product) in seeds {
            rel.merge(u, v, Provenance::Seed { product });
        }
        rel.saturate();
        Ok(rel)
    }

    pub fn depth_bound(&self) -> usize {
        self.depth_bound
    }

    pub fn config(&self) -> &EqrelConfig {
        &self.config
    }

    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }

    /// Number of distinct elements in the ball.
    pub fn ball_size(&self) -> usize {
        self.ball.len()
    }

    fn find(&mut self, i: usize) -> usize {
        find_in(&mut self.parent, i)
    }

    fn merge(&mut self, a: usize, b: usize, provenance: Provenance) -> bool {
        if !join(&mut self.parent, a, b) {
            return false;
        }
        self.log.push(LogEntry {
            u: self.words[a].clone(),
            v: self.words[b].clone(),
            provenance,
        });
        true
    }

    fn index(&self, w: &BinaryWord) -> Result<usize> {
        if w.len() > self.depth_bound {
            return Err(Error::DepthExceeded {
                length: w.len(),
                bound: self.depth_bound,
            });
        }
        Ok(index_of(w))
    }

    /// Adds `u ~ v` as an assumption and saturates.
    pub fn add_hypothesis(&mut self, u: &BinaryWord, v: &BinaryWord) -> Result<()> {
        let (a, b) = (self.index(u)?, self.index(v)?);
        self.merge(a, b, Provenance::Hypothesis);
        self.saturate();
        Ok(())
    }

    /// Least fixpoint of the rules within the depth bound.
    pub fn saturate(&mut self) {
        loop {
            let mut changed = self.descendant_pass();
            changed |= self.coherence_pass();
            if self.config.accelerators {
                changed |= self.accelerator_pass();
            }
            if !changed {
                break;
            }
        }
    }

    /// Indices of words shorter than the bound, i.e. those with children.
    fn inner_nodes(&self) -> std::ops::Range<usize> {
        0..(1usize << self.depth_bound) - 1
    }

    fn descendant_pass(&mut self) -> bool {
        let mut changed = false;
        let mut pivot: HashMap<usize, usize> = HashMap::new();
        for i in self.inner_nodes() {
            let r = self.find(i);
            let p = *pivot.entry(r).or_insert(i);
            if p == i {
                continue;
            }
            for d in 1..=2 {
                let prov = Provenance::Descendant {
                    p: self.words[i].clone(),
                    q: self.words[p].clone(),
                };
                changed |= self.merge(2 * i + d, 2 * p + d, prov);
            }
        }
        changed
    }

    fn coherence_pass(&mut self) -> bool {
        let mut changed = false;
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for i in self.inner_nodes() {
            let key = (self.find(2 * i + 1), self.find(2 * i + 2));
            match seen.get(&key) {
                Some(&j) => changed |= self.merge(i, j, Provenance::Coherence),
                None => {
                    seen.insert(key, i);
                }
            }
        }
        changed
    }

    fn self_similar(&mut self, i: usize) -> bool {
        let r = self.find(i);
        self.find(2 * i + 1) == r && self.find(2 * i + 2) == r
    }

    fn accelerator_pass(&mut self) -> bool {
        // an anchor's consequences depend only on the ball, so each anchor is
        // expanded once
        let candidates: Vec<usize> = self
            .inner_nodes()
            .filter(|&i| i > 0 && !self.anchored[i])
            .collect();
        let anchors: Vec<usize> = candidates
            .into_iter()
            .filter(|&i| self.self_similar(i))
            .collect();
        if anchors.is_empty() {
            return false;
        }
        for &a in &anchors {
            self.anchored[a] = true;
        }
        // both rules only produce inner words, so nothing is left to gain once
        // they form a single class
        if self.inner_collapsed(self.depth_bound).unwrap_or(false) {
            return false;
        }
        let zero = Rational::zero();
        let one = Rational::one();
        // (anchor, word, ball index, orbital index for the fundamental-domain rule)
        let mut merges: Vec<(usize, usize, usize, Option<usize>)> = Vec::new();
        for (k, b) in self.ball.iter().enumerate() {
            for &a in &anchors {
                let (lo, hi) = &self.bounds[a];
                let (ilo, ihi) = (b.element.evaluate(lo), b.element.evaluate(hi));
                if ilo > zero && ihi < one {
                    for v in words_within(self.depth_bound, &ilo, &ihi, false) {
                        merges.push((a, v, k, None));
                    }
                }
                for (o, orb) in b.orbitals.iter().enumerate() {
                    let inside = &orb.a < lo && hi < &orb.b;
                    if inside
                        && is_fundamental_domain(&b.element, orb, &self.words[a]).unwrap_or(false)
                    {
                        for v in words_within(self.depth_bound, &orb.a, &orb.b, true) {
                            merges.push((a, v, k, Some(o)));
                        }
                    }
                }
            }
        }
        let mut changed = false;
        for (a, v, k, o) in merges {
            if find_in(&mut self.parent, a) == find_in(&mut self.parent, v) {
                continue;
            }
            let product = self.ball[k].word.clone();
            let prov = match o {
                None => Provenance::Image { product },
                Some(o) => Provenance::FundamentalDomain {
                    product,
                    orbital: self.ball[k].orbitals[o].clone(),
                },
            };
            changed |= self.merge(a, v, prov);
        }
        changed
    }

    pub fn same_class(&mut self, u: &BinaryWord, v: &BinaryWord) -> Result<bool> {
        let (a, b) = (self.index(u)?, self.index(v)?);
        Ok(self.find(a) == self.find(b))
    }

    /// Whether all words of length at most `d` containing both digits share
    /// one class. `false` is inconclusive.
    pub fn inner_collapsed(&mut self, d: usize) -> Result<bool> {
        if d > self.depth_bound {
            return Err(Error::DepthExceeded {
                length: d,
                bound: self.depth_bound,
            });
        }
        let mut root = None;
        for i in 0..(1usize << (d + 1)) - 1 {
            if !self.words[i].is_inner() {
                continue;
            }
            let r = self.find(i);
            if *root.get_or_insert(r) != r {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All classes, each sorted, in order of their smallest word.
    pub fn classes(&mut self) -> Vec<Vec<BinaryWord>> {
        let mut groups: Vec<Vec<BinaryWord>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for i in 0..self.words.len() {
            let r = self.find(i);
            let k = *slot.entry(r).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[k].push(self.words[i].clone());
        }
        for g in &mut groups {
            g.sort();
        }
        groups.sort();
        groups
    }

    /// Classes among the words of length at most `d` containing both digits.
    pub fn inner_class_count(&mut self, d: usize) -> usize {
        let d = d.min(self.depth_bound);
        let roots: HashSet<usize> = (0..(1usize << (d + 1)) - 1)
            .filter(|&i| self.words[i].is_inner())
            .map(|i| find_in(&mut self.parent, i))
            .collect();
        roots.len()
    }

    pub fn dump(&mut self) -> RelationDump {
        RelationDump {
            depth_bound: self.depth_bound,
            classes: self.classes().into_iter().filter(|c| c.len() > 1).collect(),
            log: self.log.iter().map(LogEntry::to_string).collect(),
        }
    }

    pub fn log_text(&self) -> String {
        self.log.iter().map(|e| format!("{e}\n")).collect()
    }

    /// Re-checks every logged merge against the state built by the entries
    /// before it, then compares the final partition with this one.
    pub fn replay(&self) -> std::result::Result<(), String> {
        let mut parent: Vec<usize> = (0..self.words.len()).collect();
        let ball: HashMap<&GroupWord, &Element> =
            self.ball.iter().map(|b| (&b.word, &b.element)).collect();
        // every product named in the log, recomputed from the generators once
        let mut products: HashMap<&GroupWord, Element> = HashMap::new();
        for entry in &self.log {
            let w = match &entry.provenance {
                Provenance::Seed { product } | Provenance::Image { product } => product,
                Provenance::FundamentalDomain { product, .. } => product,
                _ => continue,
            };
            if products.contains_key(w) {
                continue;
            }
            if w.len() > self.config.word_budget {
                return Err(format!(
                    "product {} is longer than the budget",
                    group_word_text(w)
                ));
            }
            let e = product(&self.generators, w).ok_or_else(|| {
                format!("product {} uses a missing generator", group_word_text(w))
            })?;
            if ball.get(w).is_some_and(|b| **b != e) {
                return Err(format!(
                    "ball entry for {} is not the product",
                    group_word_text(w)
                ));
            }
            products.insert(w, e);
        }
        let check_product = |w: &GroupWord| -> std::result::Result<&Element, String> {
            products
                .get(w)
                .ok_or_else(|| format!("product {} was not verified", group_word_text(w)))
        };
        for (n, entry) in self.log.iter().enumerate() {
            let bad = |why: String| format!("entry {} ({entry}): {why}", n + 1);
            let (a, b) = (index_of(&entry.u), index_of(&entry.v));
            if entry.u.len() > self.depth_bound || entry.v.len() > self.depth_bound {
                return Err(bad("word beyond the depth bound".into()));
            }
            let self_similar = |parent: &mut Vec<usize>, i: usize| {
                2 * i + 2 < parent.len() && {
                    let r = find_in(parent, i);
                    find_in(parent, 2 * i + 1) == r && find_in(parent, 2 * i + 2) == r
                }
            };
            match &entry.provenance {
                Provenance::Seed { product } => {
                    let e = check_product(product).map_err(bad)?;
                    if !e
                        .pairs()
                        .iter()
                        .any(|(u, v)| *u == entry.u && *v == entry.v)
                    {
                        return Err(bad("not a canonical pair of the product".into()));
                    }
                }
                Provenance::Hypothesis => {}
                Provenance::Descendant { p, q } => {
                    let (ip, iq) = (index_of(p), index_of(q));
                    let ok = p.len() < self.depth_bound
                        && q.len() < self.depth_bound
                        && entry.u.parent().as_ref() == Some(p)
                        && entry.v.parent().as_ref() == Some(q)
                        && entry.u.last_digit() == entry.v.last_digit()
                        && find_in(&mut parent, ip) == find_in(&mut parent, iq);
                    if !ok {
                        return Err(bad("parents are not related".into()));
                    }
                }
                Provenance::Coherence => {
                    let ok = entry.u.len() < self.depth_bound
                        && entry.v.len() < self.depth_bound
                        && find_in(&mut parent, 2 * a + 1) == find_in(&mut parent, 2 * b + 1)
                        && find_in(&mut parent, 2 * a + 2) == find_in(&mut parent, 2 * b + 2);
                    if !ok {
                        return Err(bad("children are not related".into()));
                    }
                }
                Provenance::Image { product } => {
                    let h = check_product(product).map_err(bad)?;
                    let (ilo, ihi) = (
                        h.evaluate(&entry.u.left_endpoint()),
                        h.evaluate(&entry.u.right_endpoint()),
                    );
                    let ok = self_similar(&mut parent, a)
                        && ilo > Rational::zero()
                        && ihi < Rational::one()
                        && entry.v.left_endpoint() >= ilo
                        && entry.v.right_endpoint() <= ihi;
                    if !ok {
                        return Err(bad("image premises fail".into()));
                    }
                }
                Provenance::FundamentalDomain { product, orbital } => {
                    let h = check_product(product).map_err(bad)?;
                    let ok = self_similar(&mut parent, a)
                        && orbitals(h).contains(orbital)
                        && is_fundamental_domain(h, orbital, &entry.u).unwrap_or(false)
                        && entry.v.left_endpoint() > orbital.a
                        && entry.v.right_endpoint() < orbital.b;
                    if !ok {
                        return Err(bad("fundamental domain premises fail".into()));
                    }
                }
            }
            join(&mut parent, a, b);
        }
        let mut mine = self.parent.clone();
        for i in 0..parent.len() {
            if find_in(&mut parent, i) != find_in(&mut mine, i) {
                return Err(format!("replayed partition differs at {}", self.words[i]));
            }
        }
        Ok(())
    }
}

/// [`EquivRelation::from_generators`] with the default ball cap and
/// accelerators.
pub fn seed_from_generators(
    gens: &[Element],
    word_budget: usize,
    depth_bound: usize,
) -> Result<EquivRelation> {
    EquivRelation::from_generators(
        gens,
        EqrelConfig {
            word_budget,
            depth_bound,
            ..EqrelConfig::default()
        },
    )
}
