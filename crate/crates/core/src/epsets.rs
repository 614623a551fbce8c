//! Eventually-periodic subsets of ω.
//!
//! A set is a finite prefix followed by a repeating period. Values are always
//! kept in canonical form (minimal period, then minimal prefix), so set
//! equality is structural equality. The collection is closed under the
//! Boolean operations and gives a countable algebra in which principal
//! ultrafilters and a couple of infinite families can be handled exactly.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "EpJson", into = "EpJson")]
pub struct EPSet {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct EpJson {
    prefix: String,
    period: String,
}

fn parse_bits(s: &str, what: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Construction(format!("{what} contains non-bit character {c:?}"))),
        })
        .collect()
}

fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl TryFrom<EpJson> for EPSet {
    type Error = Error;
    fn try_from(j: EpJson) -> Result<Self> {
        EPSet::new(parse_bits(&j.prefix, "prefix")?, parse_bits(&j.period, "period")?)
    }
}

impl From<EPSet> for EpJson {
    fn from(x: EPSet) -> Self {
        EpJson {
            prefix: bits_to_string(&x.prefix),
            period: bits_to_string(&x.period),
        }
    }
}

impl fmt::Display for EPSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})^ω", bits_to_string(&self.prefix), bits_to_string(&self.period))
    }
}

/// Smallest `q` such that `word` is a power of its length-`q` prefix.
fn primitive_root_len(word: &[bool]) -> usize {
    let n = word.len();
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && word[i] != word[k] {
            k = fail[k - 1];
        }
        if word[i] == word[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let q = n - fail[n - 1];
    if n.is_multiple_of(q) {
        q
    } else {
        n
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl EPSet {
    /// Builds and canonicalizes; the period must be non-empty.
    pub fn new(prefix: Vec<bool>, period: Vec<bool>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Construction("period must be non-empty".into()));
        }
        Ok(Self::canonical(prefix, period))
    }

    /// Parses the two bit strings of the JSON form.
    pub fn from_strs(prefix: &str, period: &str) -> Result<Self> {
        Self::new(parse_bits(prefix, "prefix")?, parse_bits(period, "period")?)
    }

    /// Samples `member` on `0..prefix_len + period_len` and repeats the tail.
    pub fn from_fn(prefix_len: usize, period_len: usize, member: impl Fn(usize) -> bool) -> Result<Self> {
        let prefix = (0..prefix_len).map(&member).collect();
        let period = (prefix_len..prefix_len + period_len).map(&member).collect();
        Self::new(prefix, period)
    }

    fn canonical(mut prefix: Vec<bool>, mut period: Vec<bool>) -> Self {
        let q = primitive_root_len(&period);
        period.truncate(q);
        while let (Some(&last), Some(&tail)) = (prefix.last(), period.last()) {
            if last != tail {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        EPSet { prefix, period }
    }

    pub fn empty() -> Self {
        EPSet {
            prefix: vec![],
            period: vec![false],
        }
    }

    pub fn full() -> Self {
        EPSet {
            prefix: vec![],
            period: vec![true],
        }
    }

    pub fn singleton(i: usize) -> Self {
        let mut prefix = vec![false; i + 1];
        prefix[i] = true;
        Self::canonical(prefix, vec![false])
    }

    /// `ω ∖ {i}`.
    pub fn co_singleton(i: usize) -> Self {
        Self::singleton(i).complement()
    }

    /// `[i, ∞)`.
    pub fn tail(i: usize) -> Self {
        Self::canonical(vec![false; i], vec![true])
    }

    pub fn evens() -> Self {
        EPSet {
            prefix: vec![],
            period: vec![true, false],
        }
    }

    pub fn odds() -> Self {
        EPSet {
            prefix: vec![],
            period: vec![false, true],
        }
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    pub fn contains(&self, i: usize) -> bool {
        let l = self.prefix.len();
        if i < l {
            self.prefix[i]
        } else {
            self.period[(i - l) % self.period.len()]
        }
    }

    fn zip_with(&self, other: &EPSet, op: impl Fn(bool, bool) -> bool) -> EPSet {
        let l = self.prefix.len().max(other.prefix.len());
        let (p, q) = (self.period.len(), other.period.len());
        let lcm = p / gcd(p, q) * q;
        let bit = |i| op(self.contains(i), other.contains(i));
        let prefix = (0..l).map(bit).collect();
        let period = (l..l + lcm).map(bit).collect();
        Self::canonical(prefix, period)
    }

    pub fn union(&self, other: &EPSet) -> EPSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &EPSet) -> EPSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &EPSet) -> EPSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> EPSet {
        EPSet {
            prefix: self.prefix.iter().map(|b| !b).collect(),
            period: self.period.iter().map(|b| !b).collect(),
        }
    }

    pub fn is_subset(&self, other: &EPSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty() && self.period == [false]
    }

    pub fn is_finite(&self) -> bool {
        self.period == [false]
    }

    /// The complement is finite.
    pub fn is_cofinite(&self) -> bool {
        self.period == [true]
    }

    pub fn min_element(&self) -> Option<usize> {
        if let Some(i) = self.prefix.iter().position(|&b| b) {
            return Some(i);
        }
        self.period.iter().position(|&b| b).map(|j| self.prefix.len() + j)
    }

    /// Length of a window that determines the set: prefix plus one period.
    pub fn horizon(&self) -> usize {
        self.prefix.len() + self.period.len()
    }
}

pub fn ep_union(x: &EPSet, y: &EPSet) -> EPSet {
    x.union(y)
}

pub fn ep_intersection(x: &EPSet, y: &EPSet) -> EPSet {
    x.intersection(y)
}

pub fn ep_complement(x: &EPSet) -> EPSet {
    x.complement()
}

pub fn ep_subset(x: &EPSet, y: &EPSet) -> bool {
    x.is_subset(y)
}

pub fn ep_is_cofinite(x: &EPSet) -> bool {
    x.is_cofinite()
}

/// A (possibly infinite) family of eventually-periodic sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParametricFamily {
    Explicit { members: Vec<EPSet> },
    /// `{ω ∖ {i} : i ∈ ω}`
    CoSingleton,
    /// `{[i, ∞) : i ∈ ω}`
    Tail,
}

impl ParametricFamily {
    pub fn explicit(members: Vec<EPSet>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Construction("explicit families are non-empty".into()));
        }
        Ok(ParametricFamily::Explicit { members })
    }

    /// The `i`-th member, if the family has one.
    pub fn member(&self, i: usize) -> Option<EPSet> {
        match self {
            ParametricFamily::Explicit { members } => members.get(i).cloned(),
            ParametricFamily::CoSingleton => Some(EPSet::co_singleton(i)),
            ParametricFamily::Tail => Some(EPSet::tail(i)),
        }
    }

    /// Index of some member that omits `n`.
    pub fn excluder(&self, n: usize) -> Option<usize> {
        match self {
            ParametricFamily::Explicit { members } => members.iter().position(|m| !m.contains(n)),
            ParametricFamily::CoSingleton => Some(n),
            ParametricFamily::Tail => Some(n + 1),
        }
    }

    /// Every member is cofinite.
    ///
    /// Co-singletons have one-point complements; explicit members are checked
    /// one by one; tails `[i, ∞)` have the finite complement `[0, i)`.
    pub fn all_members_cofinite(&self) -> bool {
        match self {
            ParametricFamily::Explicit { members } => members.iter().all(EPSet::is_cofinite),
            ParametricFamily::CoSingleton | ParametricFamily::Tail => true,
        }
    }
}

/// The meet of a family inside the algebra of eventually-periodic sets.
///
/// For both infinite kinds any lower bound lies in every member, and the
/// members have empty intersection, so the meet exists and is `∅`. Explicit
/// families are folded with intersection. `None` is reserved for families
/// without a meet; none of the supported kinds produce it.
pub fn family_meet(family: &ParametricFamily) -> Option<EPSet> {
    match family {
        ParametricFamily::Explicit { members } => members
            .iter()
            .skip(1)
            .try_fold(members.first()?.clone(), |acc, m| Some(acc.intersection(m))),
        ParametricFamily::CoSingleton | ParametricFamily::Tail => Some(EPSet::empty()),
    }
}

/// Q-condition for the principal ultrafilter `U_n = {X : n ∈ X}`.
pub fn ep_principal_ultrafilter_is_q(n: usize, families: &[ParametricFamily]) -> bool {
    families.iter().all(|fam| match family_meet(fam) {
        None => true,
        Some(meet) => fam.excluder(n).is_some() || meet.contains(n),
    })
}

/// Least `n ∈ a ∖ b`; `U_n` then contains `a`, omits `b` and is a Q-filter.
pub fn ep_separate(a: &EPSet, b: &EPSet, families: &[ParametricFamily]) -> Result<usize> {
    let n = a
        .difference(b)
        .min_element()
        .ok_or_else(|| Error::NotSeparable(format!("{a} is a subset of {b}")))?;
    if !ep_principal_ultrafilter_is_q(n, families) {
        return Err(Error::Precondition(format!("U_{n} fails the Q-condition")));
    }
    Ok(n)
}
