//! Absorption properties of retracts.
//!
//! The retracts of `L` satisfy `eabp(K, ●, ★, Γ)` when for every retract `S`
//! and every embedding `g: K → L` satisfying `Γ` with `g(●) ⊆ S`, also
//! `g(★) ⊆ S`. Patterns are data, so new properties can be loaded from JSON
//! without code changes.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::limits::Limits;
use crate::order::{Lattice, LatticeJson, SubsetMask};
use crate::retraction::{retracts, RetractMode};

/// Side condition on embeddings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gamma {
    None,
    /// The image of pattern element `y` must be a narrows of the host.
    ImageIsNarrows {
        y: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsorptionProperty {
    pub name: Option<String>,
    pub pattern: Lattice,
    pub bullets: SubsetMask,
    pub stars: SubsetMask,
    pub gamma: Gamma,
}

#[derive(Debug, Serialize, Deserialize)]
struct PropertyJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(rename = "K")]
    pattern: LatticeJson,
    bullets: Vec<usize>,
    stars: Vec<usize>,
    #[serde(default = "no_gamma")]
    gamma: Gamma,
}

fn no_gamma() -> Gamma {
    Gamma::None
}

impl AbsorptionProperty {
    pub fn new(
        pattern: Lattice,
        bullets: &[usize],
        stars: &[usize],
        gamma: Gamma,
    ) -> Result<AbsorptionProperty> {
        let k = pattern.size();
        for &i in bullets.iter().chain(stars) {
            if i >= k {
                return Err(Error::IndexOutOfRange { index: i, n: k });
            }
        }
        if let Gamma::ImageIsNarrows { y } = gamma {
            if y >= k {
                return Err(Error::IndexOutOfRange { index: y, n: k });
            }
        }
        Ok(AbsorptionProperty {
            name: None,
            bullets: SubsetMask::from_indices(k, bullets.iter().copied()),
            stars: SubsetMask::from_indices(k, stars.iter().copied()),
            pattern,
            gamma,
        })
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn from_json_str(text: &str) -> Result<AbsorptionProperty> {
        let raw: PropertyJson = serde_json::from_str(text)?;
        let pattern = Lattice::from_json(&raw.pattern)?;
        let mut prop = AbsorptionProperty::new(pattern, &raw.bullets, &raw.stars, raw.gamma)?;
        prop.name = raw.name;
        Ok(prop)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PropertyJson {
            name: self.name.clone(),
            pattern: self.pattern.to_json(),
            bullets: self.bullets.to_vec(),
            stars: self.stars.to_vec(),
            gamma: self.gamma,
        })
        .expect("plain data serializes")
    }

    /// The same property on a relabelled copy of the pattern
    /// (`x ↦ perm[x]`).
    pub fn relabel(&self, perm: &[usize]) -> Result<AbsorptionProperty> {
        let map = |m: &SubsetMask| m.iter().map(|x| perm[x]).collect::<Vec<_>>();
        let gamma = match self.gamma {
            Gamma::None => Gamma::None,
            Gamma::ImageIsNarrows { y } => Gamma::ImageIsNarrows { y: perm[y] },
        };
        let mut prop = AbsorptionProperty::new(
            self.pattern.relabel(perm)?,
            &map(&self.bullets),
            &map(&self.stars),
            gamma,
        )?;
        prop.name = self.name.clone();
        Ok(prop)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinProperty {
    /// Closure under relative complements in four-element boolean sublattices.
    Rc,
    /// Glued squares with the middle element landing on a narrows.
    GluSqAp,
}

impl FromStr for BuiltinProperty {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rc" => Ok(BuiltinProperty::Rc),
            "glusqap" => Ok(BuiltinProperty::GluSqAp),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

/// The seven-element glued sum of two squares:
/// `0 < p1, p2 < y < q1, q2 < 1`.
pub fn glued_squares() -> Lattice {
    Lattice::from_covers(7, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 6), (5, 6)])
        .and_then(|l| l.with_labels(["0", "p1", "p2", "y", "q1", "q2", "1"].map(String::from).to_vec()))
        .expect("glued squares is a lattice")
}

pub fn builtin_property(which: BuiltinProperty) -> AbsorptionProperty {
    match which {
        BuiltinProperty::Rc => {
            // B2 with bottom 0, atoms 1 and 2, top 3
            let k = Lattice::boolean(2).expect("B2");
            AbsorptionProperty::new(k, &[0, 1, 3], &[2], Gamma::None).expect("indices in range").named("RC")
        }
        BuiltinProperty::GluSqAp => {
            // Bottom, one atom of the lower square, one atom of the upper
            // square and the top; the middle y is absorbed.
            AbsorptionProperty::new(glued_squares(), &[0, 1, 4, 6], &[3], Gamma::ImageIsNarrows { y: 3 })
                .expect("indices in range")
                .named("GluSqAP")
        }
    }
}

struct EmbeddingSearch<'a> {
    pattern: &'a Lattice,
    host: &'a Lattice,
    gamma: Gamma,
    order: Vec<usize>,
    lower_covers: Vec<Vec<usize>>,
    join_pairs: Vec<Vec<(usize, usize)>>,
    image: Vec<Option<usize>>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
}

impl EmbeddingSearch<'_> {
    fn consistent(&self, k: usize, c: usize, depth: usize) -> bool {
        if self.used[c] {
            return false;
        }
        if let Gamma::ImageIsNarrows { y } = self.gamma {
            if y == k && !self.host.is_narrows(c) {
                return false;
            }
        }
        let (p, h) = (self.pattern, self.host);
        let g = |x: usize| self.image[x].expect("assigned");
        self.join_pairs[k].iter().all(|&(u, w)| h.join(g(u), g(w)) == c)
            && self.order[..depth].iter().all(|&u| g(p.meet(u, k)) == h.meet(g(u), c))
    }

    fn extend(&mut self, depth: usize) {
        if depth == self.order.len() {
            self.found.push(self.image.iter().map(|x| x.expect("total")).collect());
            return;
        }
        let k = self.order[depth];
        let h = self.host;
        let below: Vec<usize> =
            self.lower_covers[k].iter().map(|&u| self.image[u].expect("assigned")).collect();
        let candidates: Vec<usize> = if below.len() >= 2 {
            vec![below.iter().fold(below[0], |acc, &x| h.join(acc, x))]
        } else if let Some(&floor) = below.first() {
            h.up_set(floor).ones().filter(|&c| c != floor).collect()
        } else {
            (0..h.size()).collect()
        };
        for c in candidates {
            if !self.consistent(k, c, depth) {
                continue;
            }
            self.image[k] = Some(c);
            self.used[c] = true;
            self.extend(depth + 1);
            self.used[c] = false;
            self.image[k] = None;
        }
    }
}

/// All injective lattice homomorphisms `pattern → host` satisfying `gamma`,
/// as image arrays, sorted.
pub fn embeddings(
    pattern: &Lattice,
    host: &Lattice,
    gamma: Gamma,
    limits: &Limits,
) -> Result<Vec<Vec<usize>>> {
    check_cap("embedding host", host.size(), limits.max_elements)?;
    if pattern.size() > host.size() {
        return Ok(Vec::new());
    }
    let kn = pattern.size();
    let mut search = EmbeddingSearch {
        pattern,
        host,
        gamma,
        order: pattern.linear_extension(),
        lower_covers: (0..kn).map(|x| pattern.lower_covers(x).collect()).collect(),
        join_pairs: (0..kn)
            .map(|v| {
                (0..kn)
                    .flat_map(|u| (u + 1..kn).map(move |w| (u, w)))
                    .filter(|&(u, w)| !pattern.comparable(u, w) && pattern.join(u, w) == v)
                    .collect()
            })
            .collect(),
        image: vec![None; kn],
        used: vec![false; host.size()],
        found: Vec::new(),
    };
    search.extend(0);
    let mut found = search.found;
    found.sort();
    Ok(found)
}

pub fn is_embedding(pattern: &Lattice, host: &Lattice, g: &[usize]) -> bool {
    let k = pattern.size();
    if g.len() != k || g.iter().any(|&x| x >= host.size()) {
        return false;
    }
    let injective = (0..k).all(|a| (a + 1..k).all(|b| g[a] != g[b]));
    injective
        && (0..k).all(|a| {
            (0..k).all(|b| {
                g[pattern.meet(a, b)] == host.meet(g[a], g[b])
                    && g[pattern.join(a, b)] == host.join(g[a], g[b])
            })
        })
}

#[derive(Debug, Clone)]
pub enum Scope {
    AllRetracts,
    Retract(SubsetMask),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Counterexample {
        retract: SubsetMask,
        embedding: Vec<usize>,
        /// Pattern element whose image escapes the retract.
        star: usize,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Checks the property on every retract in scope; reports the least
/// counterexample (retracts, then embeddings, then stars in sorted order).
pub fn check_absorption(
    lattice: &Lattice,
    prop: &AbsorptionProperty,
    scope: &Scope,
    limits: &Limits,
) -> Result<Verdict> {
    let candidates = match scope {
        Scope::AllRetracts => retracts(lattice, RetractMode::BruteForce, limits)?,
        Scope::Retract(s) => {
            if s.universe() != lattice.size()
                || !retracts(lattice, RetractMode::Transversal, limits)?.contains(s)
            {
                return Err(Error::NotARetract);
            }
            vec![s.clone()]
        }
    };
    let maps = embeddings(&prop.pattern, lattice, prop.gamma, limits)?;
    for s in &candidates {
        for g in &maps {
            if !prop.bullets.iter().all(|b| s.contains(g[b])) {
                continue;
            }
            if let Some(star) = prop.stars.iter().find(|&t| !s.contains(g[t])) {
                return Ok(Verdict::Counterexample { retract: s.clone(), embedding: g.clone(), star });
            }
        }
    }
    Ok(Verdict::Holds)
}
