//! Certificates: σ, `g^σ` and evidence records that can be re-checked exactly
//! without repeating the construction.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::check_cogenerator_pair;
use crate::dynamics::{is_fundamental_domain, orbitals, Orbital};
use crate::element::Element;
use crate::words::{BinaryWord, Interval};

/// Which construction produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// `g` has no fixed point in `(0,1)`.
    NoFixedPoint,
    /// `g` fixes an interior point and has non-trivial slopes at both ends.
    TwoOrbitals,
    /// `π(g)` is `(±1,0)` or `(0,±1)`.
    Axis,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::NoFixedPoint => "no interior fixed point",
            Construction::TwoOrbitals => "two end orbitals",
            Construction::Axis => "axis image",
        })
    }
}

/// The coordinates in which evidence is stated: members become
/// `mirror?(f_i)` and the conjugate becomes `mirror?(g^σ)^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Frame {
    pub mirrored: bool,
    pub inverted: bool,
}

impl Frame {
    pub fn member(&self, f: &Element) -> Element {
        if self.mirrored {
            f.mirror()
        } else {
            f.clone()
        }
    }

    pub fn conjugate(&self, h: &Element) -> Element {
        let h = self.member(h);
        if self.inverted {
            h.invert()
        } else {
            h
        }
    }
}

/// The element an evidence record speaks about, in the certificate's frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "of", rename_all = "snake_case")]
pub enum Subject {
    Conjugate,
    /// `f_index^power` (0-based index into `S`).
    Member {
        index: usize,
        power: i64,
    },
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Conjugate => f.write_str("g^σ"),
            Subject::Member { index, power: 1 } => write!(f, "f{}", index + 1),
            Subject::Member { index, power } => write!(f, "f{}^{}", index + 1, power),
        }
    }
}

/// One exactly checkable fact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// The subject maps `[u]` affinely onto `[v]`.
    BranchPair {
        subject: Subject,
        u: BinaryWord,
        v: BinaryWord,
    },
    /// `orbital` is an orbital of the conjugate, with its direction.
    Orbital { orbital: Orbital },
    /// `[word] ⊂ orbital` and `[word)` is a fundamental domain of the
    /// conjugate there.
    FundamentalDomain { orbital: Orbital, word: BinaryWord },
    /// `interval ⊂ orbital`.
    Contains {
        orbital: Orbital,
        interval: Interval,
    },
    /// `word` is entry `position` of the certificate's chain.
    ChainLink { word: BinaryWord, position: usize },
    /// `π(f_index)` and `π(g^σ)` generate `Z²`.
    Abelian { index: usize },
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::BranchPair { subject, u, v } => {
                write!(f, "{subject} has the pair {u} -> {v}")
            }
            Evidence::Orbital { orbital } => write!(f, "g^σ has the orbital {orbital}"),
            Evidence::FundamentalDomain { orbital, word } => {
                write!(f, "[{word}) is a fundamental domain of g^σ in {orbital}")
            }
            Evidence::Contains { orbital, interval } => write!(f, "{interval} lies in {orbital}"),
            Evidence::ChainLink { word, position } => {
                write!(f, "{word} is chain word {}", position + 1)
            }
            Evidence::Abelian { index } => write!(f, "π(f{}) and π(g^σ) generate Z^2", index + 1),
        }
    }
}

/// The result of re-checking one record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    /// Index of the member for per-element records.
    pub member: Option<usize>,
    pub description: String,
    pub passed: bool,
}

/// σ with `g^σ` a common co-generator of `S`, with the evidence used to
/// establish it.
///
/// `chain` lists words `c_1, …, c_r` with the conjugate (in the frame)
/// carrying each `c_j` onto `c_{j+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CogenCertificate {
    pub construction: Construction,
    pub g: Element,
    pub sigma: Element,
    pub conjugated: Element,
    pub frame: Frame,
    pub tree: Vec<BinaryWord>,
    pub chain: Vec<BinaryWord>,
    pub shared_evidence: Vec<Evidence>,
    pub per_element_evidence: Vec<Vec<Evidence>>,
}

impl CogenCertificate {
    /// Re-checks every record against `S`, plus `conjugated = g^σ` and the
    /// chain links; one outcome per check.
    pub fn verify(&self, s: &[Element]) -> Vec<CheckOutcome> {
        let mut out = Vec::new();
        let mut push = |member: Option<usize>, description: String, passed: bool| {
            out.push(CheckOutcome {
                member,
                description,
                passed,
            });
        };
        let conj_ok = self.g.conjugate(&self.sigma) == self.conjugated;
        push(None, "conjugated equals g^σ".into(), conj_ok);
        push(
            None,
            "π(g^σ) = π(g)".into(),
            self.conjugated.abelianization() == self.g.abelianization(),
        );
        push(
            None,
            format!(
                "{} evidence lists for {} elements",
                self.per_element_evidence.len(),
                s.len()
            ),
            self.per_element_evidence.len() == s.len(),
        );

        let conj = self.frame.conjugate(&self.conjugated);
        let members: Vec<Element> = s.iter().map(|f| self.frame.member(f)).collect();
        let chain_ok = self
            .chain
            .windows(2)
            .all(|w| conj.has_branch_pair(&w[0], &w[1]));

        let ctx = Context {
            conj: &conj,
            plain: &self.conjugated,
            members: &members,
            originals: s,
            chain: &self.chain,
            chain_ok,
        };
        for e in &self.shared_evidence {
            push(None, e.to_string(), ctx.check(e));
        }
        for (i, list) in self.per_element_evidence.iter().enumerate() {
            for e in list {
                push(Some(i), e.to_string(), ctx.check(e));
            }
        }
        out
    }

    /// Whether every check of [`CogenCertificate::verify`] passes.
    pub fn is_valid(&self, s: &[Element]) -> bool {
        self.verify(s).iter().all(|c| c.passed)
    }
}

struct Context<'a> {
    conj: &'a Element,
    plain: &'a Element,
    members: &'a [Element],
    originals: &'a [Element],
    chain: &'a [BinaryWord],
    chain_ok: bool,
}

impl Context<'_> {
    fn check(&self, e: &Evidence) -> bool {
        match e {
            Evidence::BranchPair {
                subject: Subject::Conjugate,
                u,
                v,
            } => self.conj.has_branch_pair(u, v),
            Evidence::BranchPair {
                subject: Subject::Member { index, power },
                u,
                v,
            } => self
                .members
                .get(*index)
                .is_some_and(|f| f.pow(*power).has_branch_pair(u, v)),
            Evidence::Orbital { orbital } => orbitals(self.conj).contains(orbital),
            Evidence::FundamentalDomain { orbital, word } => {
                orbitals(self.conj).contains(orbital)
                    && is_fundamental_domain(self.conj, orbital, word).unwrap_or(false)
            }
            Evidence::Contains { orbital, interval } => orbital.contains_interval(interval),
            Evidence::ChainLink { word, position } => {
                self.chain_ok && self.chain.get(*position) == Some(word)
            }
            Evidence::Abelian { index } => self.originals.get(*index).is_some_and(|f| {
                check_cogenerator_pair(f.abelianization(), self.plain.abelianization())
            }),
        }
    }
}
