//! Possible-worlds scenarios: sources that each commit to one outcome per
//! world, one source selected at random, and three kinds of revision.
//!
//! A world fixes an outcome for every source. Worlds are the Cartesian
//! product of the sources' option sets in lexicographic order, first source
//! slowest, and are named `w1`, `w2`, .... A (world, source) pair stays alive
//! until evidence rules it out.
//!
//! * Case 1 ([`Scenario::apply_case1`]) deletes whole worlds.
//! * Case 2 ([`Scenario::apply_case2`], [`Scenario::observe_outcomes`])
//!   deletes individual (world, source) pairs. Selection probabilities are
//!   never updated from the count of surviving pairs.
//! * Case 3 ([`Scenario::apply_case3`]) conditions the selection
//!   probabilities on a set of sources.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::frame::{Frame, SubsetMask};
use crate::mass::MassFunction;
use crate::scalar::Scalar;
use crate::source::{check_distribution, restrict_distribution, MultivaluedSource};

/// Budget on the number of product worlds.
pub const MAX_WORLDS: u128 = 1 << 20;

/// Zero-based world index, shown one-based as `w1`, `w2`, ....
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldId(pub usize);

impl fmt::Display for WorldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{}", self.0 + 1)
    }
}

impl FromStr for WorldId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        s.strip_prefix('w')
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&n| n >= 1)
            .map(|n| WorldId(n - 1))
            .ok_or_else(|| Error::UnknownWorld(s.to_string()))
    }
}

/// Which revision an operator performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLabel {
    Case1,
    Case2,
    Case3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    outcomes: Frame,
    sources: Vec<String>,
    probabilities: Vec<T>,
    options: Vec<SubsetMask>,
    /// `worlds[w][x]` is the outcome index source `x` commits to in world `w`.
    worlds: Vec<Vec<usize>>,
    /// Row-major `worlds × sources`.
    alive: Vec<bool>,
}

impl<T: Scalar> Scenario<T> {
    /// `sources` lists `(name, selection probability, option set)`.
    pub fn build<I, S>(outcomes: Frame, sources: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T, SubsetMask)>,
        S: Into<String>,
    {
        let mut names = Vec::new();
        let mut probabilities = Vec::new();
        let mut options = Vec::new();
        for (name, p, opts) in sources {
            let name = name.into();
            if name.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if names.contains(&name) {
                return Err(Error::DuplicateSource(name));
            }
            outcomes.check(opts)?;
            if opts.is_empty() {
                return Err(Error::EmptyOptionSet(name));
            }
            names.push(name);
            probabilities.push(p);
            options.push(opts);
        }
        if names.is_empty() {
            return Err(Error::EmptyFrame);
        }
        check_distribution(&names, &probabilities)?;
        let count = options
            .iter()
            .map(|o| o.len() as u128)
            .fold(1u128, |acc, k| acc.saturating_mul(k));
        if count.saturating_mul(names.len() as u128) > MAX_WORLDS {
            return Err(Error::BudgetExceeded {
                what: "scenario world pairs",
                required: count.saturating_mul(names.len() as u128),
                budget: MAX_WORLDS,
            });
        }
        let mut worlds: Vec<Vec<usize>> = vec![Vec::new()];
        for opts in &options {
            worlds = worlds
                .into_iter()
                .flat_map(|prefix| {
                    opts.elements().map(move |o| {
                        let mut row = prefix.clone();
                        row.push(o);
                        row
                    })
                })
                .collect();
        }
        let alive = vec![true; worlds.len() * names.len()];
        Ok(Scenario {
            outcomes,
            sources: names,
            probabilities,
            options,
            worlds,
            alive,
        })
    }

    pub fn outcomes(&self) -> &Frame {
        &self.outcomes
    }

    pub fn sources(&self) -> &[String] {
        &self.sources
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    pub fn options(&self) -> &[SubsetMask] {
        &self.options
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn source_index(&self, name: &str) -> Result<usize> {
        self.sources
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownSource(name.to_string()))
    }

    fn check_world(&self, w: WorldId) -> Result<()> {
        if w.0 < self.worlds.len() {
            Ok(())
        } else {
            Err(Error::UnknownWorld(w.to_string()))
        }
    }

    /// Outcome index committed to by `source` in `world`.
    pub fn assignment(&self, world: WorldId, source: usize) -> usize {
        self.worlds[world.0][source]
    }

    pub fn is_alive(&self, world: WorldId, source: usize) -> bool {
        self.alive[world.0 * self.sources.len() + source]
    }

    /// Worlds with at least one alive pair.
    pub fn surviving_worlds(&self) -> Vec<WorldId> {
        (0..self.worlds.len())
            .map(WorldId)
            .filter(|&w| (0..self.sources.len()).any(|x| self.is_alive(w, x)))
            .collect()
    }

    /// Alive (world, source index) pairs in row-major order.
    pub fn alive_pairs(&self) -> Vec<(WorldId, usize)> {
        let k = self.sources.len();
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| (WorldId(i / k), i % k))
            .collect()
    }

    /// Outcomes `source` may still have gone to.
    pub fn image(&self, source: usize) -> SubsetMask {
        (0..self.worlds.len())
            .map(WorldId)
            .filter(|&w| self.is_alive(w, source))
            .fold(SubsetMask::EMPTY, |acc, w| {
                acc | SubsetMask::singleton(self.assignment(w, source))
            })
    }

    /// The multivalued source mapping each source to its current image.
    pub fn to_source(&self) -> MultivaluedSource<T> {
        MultivaluedSource::new(
            self.outcomes.clone(),
            self.sources
                .iter()
                .zip(&self.probabilities)
                .enumerate()
                .map(|(x, (name, p))| (name.clone(), p.clone(), self.image(x))),
        )
        .expect("scenario invariants imply a valid source")
    }

    /// Beliefs on the outcomes: each source's selection probability goes to
    /// its image.
    pub fn induced_mass(&self, normalize: bool) -> Result<MassFunction<T>> {
        self.to_source().induced_mass(normalize)
    }

    /// Case 1: the listed worlds are impossible.
    pub fn apply_case1(&self, dead_worlds: &[WorldId]) -> Result<Self> {
        let mut next = self.clone();
        let k = self.sources.len();
        for &w in dead_worlds {
            self.check_world(w)?;
            next.alive[w.0 * k..(w.0 + 1) * k].fill(false);
        }
        if next.alive.iter().all(|a| !a) {
            return Err(Error::AllWorldsDead);
        }
        Ok(next)
    }

    /// Case 2: the listed (world, source) pairs are impossible. Pairs already
    /// removed are ignored.
    pub fn apply_case2<S: AsRef<str>>(&self, dead_pairs: &[(WorldId, S)]) -> Result<Self> {
        let resolved = dead_pairs
            .iter()
            .map(|(w, s)| {
                self.check_world(*w)?;
                Ok((*w, self.source_index(s.as_ref())?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.kill_pairs(resolved))
    }

    fn kill_pairs(&self, pairs: impl IntoIterator<Item = (WorldId, usize)>) -> Self {
        let mut next = self.clone();
        let k = self.sources.len();
        for (w, x) in pairs {
            next.alive[w.0 * k + x] = false;
        }
        next
    }

    /// Case 2 from an observation: the occupied outcome lies in `possible`.
    /// Removes every pair whose committed outcome falls outside it.
    pub fn observe_outcomes(&self, possible: SubsetMask) -> Result<Self> {
        self.outcomes.check(possible)?;
        if possible.is_empty() {
            return Err(Error::EmptyConditioningSet);
        }
        let dead: Vec<(WorldId, usize)> = self
            .alive_pairs()
            .into_iter()
            .filter(|&(w, x)| !possible.contains(self.assignment(w, x)))
            .collect();
        Ok(self.kill_pairs(dead))
    }

    /// Case 3: the selected source is among `allowed`.
    pub fn apply_case3<I, S>(&self, allowed: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut keep = vec![false; self.sources.len()];
        for name in allowed {
            keep[self.source_index(name.as_ref())?] = true;
        }
        Ok(Scenario {
            probabilities: restrict_distribution(&self.probabilities, &keep)?,
            ..self.clone()
        })
    }
}

/// The three soldiers and three posts, selection probability 1/3 each.
pub fn soldiers<T: Scalar>() -> Scenario<T> {
    let posts = Frame::new(["P1", "P2", "P3"]).expect("static frame");
    let opts = |names: &[&str]| posts.subset(names).expect("static labels");
    let third = T::from_ratio(1, 3);
    Scenario::build(
        posts.clone(),
        [
            ("S1", third.clone(), opts(&["P1", "P2"])),
            ("S2", third.clone(), opts(&["P1", "P2", "P3"])),
            ("S3", third, opts(&["P1"])),
        ],
    )
    .expect("static scenario")
}
