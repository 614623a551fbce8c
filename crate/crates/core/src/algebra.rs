//! Finite powerset modal algebras, filters, Q-filters and separation.
//!
//! An algebra on `n` atoms has carrier `0..2^n`; each element code is the
//! characteristic vector of a set of atoms, so the Boolean operations are the
//! bitwise ones and the atoms are the one-bit codes. `box` is an arbitrary
//! total table on the carrier.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_ATOMS: u32 = 12;

/// The three closure conditions shared by algebras, frames and logic classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Properties {
    pub monotonic: bool,
    pub topped: bool,
    pub cufi: bool,
}

impl Properties {
    pub const NONE: Properties = Properties {
        monotonic: false,
        topped: false,
        cufi: false,
    };
    pub const ALL: Properties = Properties {
        monotonic: true,
        topped: true,
        cufi: true,
    };

    pub fn new(monotonic: bool, topped: bool, cufi: bool) -> Self {
        Properties {
            monotonic,
            topped,
            cufi,
        }
    }

    /// True iff every flag set in `required` is also set here.
    pub fn includes(self, required: Properties) -> bool {
        (!required.monotonic || self.monotonic)
            && (!required.topped || self.topped)
            && (!required.cufi || self.cufi)
    }

    /// All eight flag combinations, in binary order `(m, t, c)`.
    pub fn all_combinations() -> [Properties; 8] {
        let mut out = [Properties::NONE; 8];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = Properties::new(i & 4 != 0, i & 2 != 0, i & 1 != 0);
        }
        out
    }
}

/// Powerset Boolean algebra on `atoms` atoms with an arbitrary box table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AlgebraJson", into = "AlgebraJson")]
pub struct FiniteModalAlgebra {
    atoms: u32,
    box_table: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    atoms: u32,
    #[serde(rename = "box")]
    box_table: Vec<u32>,
}

impl TryFrom<AlgebraJson> for FiniteModalAlgebra {
    type Error = Error;
    fn try_from(j: AlgebraJson) -> Result<Self> {
        FiniteModalAlgebra::new(j.atoms, j.box_table)
    }
}

impl From<FiniteModalAlgebra> for AlgebraJson {
    fn from(a: FiniteModalAlgebra) -> Self {
        AlgebraJson {
            atoms: a.atoms,
            box_table: a.box_table,
        }
    }
}

impl FiniteModalAlgebra {
    /// Builds the algebra, rejecting out-of-range atom counts or table entries.
    pub fn new(atoms: u32, box_table: Vec<u32>) -> Result<Self> {
        if atoms == 0 || atoms > MAX_ATOMS {
            return Err(Error::Construction(format!(
                "atom count {atoms} outside 1..={MAX_ATOMS}"
            )));
        }
        let size = 1usize << atoms;
        if box_table.len() != size {
            return Err(Error::Construction(format!(
                "box table has {} entries, expected {size}",
                box_table.len()
            )));
        }
        if let Some((i, &v)) = box_table
            .iter()
            .enumerate()
            .find(|(_, &v)| v as usize >= size)
        {
            return Err(Error::Construction(format!(
                "box table entry {i} = {v} is outside the carrier 0..{size}"
            )));
        }
        Ok(FiniteModalAlgebra { atoms, box_table })
    }

    /// The algebra whose box table is `f(x)` for each code `x`.
    pub fn from_fn(atoms: u32, f: impl Fn(u32) -> u32) -> Result<Self> {
        if atoms == 0 || atoms > MAX_ATOMS {
            return Err(Error::Construction(format!(
                "atom count {atoms} outside 1..={MAX_ATOMS}"
            )));
        }
        Self::new(atoms, (0..1u32 << atoms).map(f).collect())
    }

    pub fn atom_count(&self) -> u32 {
        self.atoms
    }

    pub fn size(&self) -> u32 {
        1 << self.atoms
    }

    pub fn box_table(&self) -> &[u32] {
        &self.box_table
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.size()
    }

    pub fn top(&self) -> u32 {
        self.size() - 1
    }

    pub fn bottom(&self) -> u32 {
        0
    }

    pub fn meet(&self, x: u32, y: u32) -> u32 {
        x & y
    }

    pub fn join(&self, x: u32, y: u32) -> u32 {
        x | y
    }

    pub fn complement(&self, x: u32) -> u32 {
        !x & self.top()
    }

    pub fn leq(&self, x: u32, y: u32) -> bool {
        x & !y == 0
    }

    pub fn boxed(&self, x: u32) -> u32 {
        self.box_table[x as usize]
    }

    pub fn contains(&self, x: u32) -> bool {
        x < self.size()
    }

    /// Meet of a finite family; the empty meet is the top element.
    pub fn meet_all(&self, xs: impl IntoIterator<Item = u32>) -> u32 {
        xs.into_iter().fold(self.top(), |acc, x| acc & x)
    }

    /// The atoms, i.e. one-bit codes, in increasing order.
    pub fn atoms(&self) -> impl Iterator<Item = u32> {
        (0..self.atoms).map(|i| 1u32 << i)
    }

    pub fn properties(&self) -> Properties {
        check_algebra_properties(self)
    }
}

/// Decides monotonicity, toppedness and cufi by scanning every element pair.
pub fn check_algebra_properties(a: &FiniteModalAlgebra) -> Properties {
    let mut monotonic = true;
    let mut cufi = true;
    'outer: for x in a.elements() {
        let bx = a.boxed(x);
        for y in a.elements() {
            let lhs = a.boxed(x & y);
            let rhs = bx & a.boxed(y);
            monotonic &= a.leq(lhs, rhs);
            cufi &= a.leq(rhs, lhs);
            if !monotonic && !cufi {
                break 'outer;
            }
        }
    }
    Properties {
        monotonic,
        topped: a.boxed(a.top()) == a.top(),
        cufi,
    }
}

/// A filter of a finite powerset algebra, stored as its sorted element codes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Filter {
    elements: Vec<u32>,
}

impl Filter {
    /// Validates non-emptiness, upward closure and closure under meets.
    pub fn new(a: &FiniteModalAlgebra, elements: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut elements: Vec<u32> = elements.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        if elements.is_empty() {
            return Err(Error::Construction("a filter is non-empty".into()));
        }
        if let Some(&x) = elements.iter().find(|&&x| !a.contains(x)) {
            return Err(Error::Construction(format!("code {x} is outside the carrier")));
        }
        let f = Filter { elements };
        for &x in &f.elements {
            for y in a.elements() {
                if a.leq(x, y) && !f.contains(y) {
                    return Err(Error::Construction(format!(
                        "not upward closed: {x} in F, {x} <= {y}, {y} not in F"
                    )));
                }
            }
            for &y in &f.elements {
                if !f.contains(x & y) {
                    return Err(Error::Construction(format!(
                        "not closed under meets: {x} and {y} in F, {} not in F",
                        x & y
                    )));
                }
            }
        }
        Ok(f)
    }

    /// The principal filter generated by `x`.
    pub fn principal(a: &FiniteModalAlgebra, x: u32) -> Self {
        Filter {
            elements: a.elements().filter(|&y| a.leq(x, y)).collect(),
        }
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_proper(&self) -> bool {
        !self.contains(0)
    }

    /// Proper, and contains one side of every join it contains.
    pub fn is_prime(&self, a: &FiniteModalAlgebra) -> bool {
        self.is_proper()
            && a.elements().all(|x| {
                a.elements()
                    .all(|y| !self.contains(x | y) || self.contains(x) || self.contains(y))
            })
    }

    /// Least element (the meet of the filter).
    pub fn generator(&self) -> u32 {
        self.elements.iter().fold(u32::MAX, |acc, &x| acc & x)
    }
}

/// A finite set of element families whose meets a Q-filter must respect.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeetFamilySet {
    pub families: Vec<Vec<u32>>,
}

impl MeetFamilySet {
    pub fn new(families: Vec<Vec<u32>>) -> Self {
        MeetFamilySet { families }
    }

    pub fn empty() -> Self {
        MeetFamilySet::default()
    }

    pub fn validate(&self, a: &FiniteModalAlgebra) -> Result<()> {
        for (i, fam) in self.families.iter().enumerate() {
            if let Some(&x) = fam.iter().find(|&&x| !a.contains(x)) {
                return Err(Error::Construction(format!(
                    "family {i} contains code {x} outside the carrier"
                )));
            }
        }
        Ok(())
    }

    /// Every family of at most `max_len` distinct elements, the empty family included.
    pub fn all_up_to(a: &FiniteModalAlgebra, max_len: usize) -> Self {
        fn rec(a: &FiniteModalAlgebra, start: u32, cur: &mut Vec<u32>, max: usize, out: &mut Vec<Vec<u32>>) {
            out.push(cur.clone());
            if cur.len() == max {
                return;
            }
            for x in start..a.size() {
                cur.push(x);
                rec(a, x + 1, cur, max, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(a, 0, &mut Vec::new(), max_len, &mut out);
        MeetFamilySet { families: out }
    }
}

/// The prime filters `↑atom`, one per atom, in atom order.
pub fn enumerate_prime_filters(a: &FiniteModalAlgebra) -> Vec<Filter> {
    a.atoms().map(|atom| Filter::principal(a, atom)).collect()
}

/// Checks the Q-condition of `f` against every family of `s`.
pub fn is_q_filter(a: &FiniteModalAlgebra, f: &Filter, s: &MeetFamilySet) -> Result<bool> {
    if !f.is_prime(a) {
        return Err(Error::Precondition(format!(
            "filter generated by {} is not prime",
            f.generator()
        )));
    }
    s.validate(a)?;
    Ok(s.families.iter().all(|fam| {
        !fam.iter().all(|&x| f.contains(x)) || f.contains(a.meet_all(fam.iter().copied()))
    }))
}

/// A Q-filter for `s` containing `a` and omitting `b`.
///
/// Picks the smallest atom below `a` and not below `b`.
pub fn separate(alg: &FiniteModalAlgebra, a: u32, b: u32, s: &MeetFamilySet) -> Result<Filter> {
    if !alg.contains(a) || !alg.contains(b) {
        return Err(Error::Precondition(format!(
            "codes {a}, {b} must lie in 0..{}",
            alg.size()
        )));
    }
    let diff = a & !b;
    if diff == 0 {
        return Err(Error::NotSeparable(format!("{a} <= {b}")));
    }
    s.validate(alg)?;
    let atom = 1u32 << diff.trailing_zeros();
    Ok(Filter::principal(alg, atom))
}

/// Whether `box(meet X)` equals the meet of the boxes of `X`.
pub fn check_box_meet_equation(a: &FiniteModalAlgebra, xs: &[u32]) -> Result<bool> {
    if xs.is_empty() {
        return Err(Error::Precondition("the family must be non-empty".into()));
    }
    if let Some(&x) = xs.iter().find(|&&x| !a.contains(x)) {
        return Err(Error::Precondition(format!("code {x} outside the carrier")));
    }
    let lhs = a.boxed(a.meet_all(xs.iter().copied()));
    let rhs = a.meet_all(xs.iter().map(|&x| a.boxed(x)));
    Ok(lhs == rhs)
}

/// Whether `f` preserves meets, complements, 0, 1 and box.
pub fn is_algebra_homomorphism(f: &[u32], a: &FiniteModalAlgebra, b: &FiniteModalAlgebra) -> bool {
    if f.len() != a.size() as usize || f.iter().any(|&y| !b.contains(y)) {
        return false;
    }
    let img = |x: u32| f[x as usize];
    if img(0) != 0 || img(a.top()) != b.top() {
        return false;
    }
    a.elements().all(|x| {
        img(a.complement(x)) == b.complement(img(x))
            && img(a.boxed(x)) == b.boxed(img(x))
            && a.elements().all(|y| img(x & y) == img(x) & img(y))
    })
}
