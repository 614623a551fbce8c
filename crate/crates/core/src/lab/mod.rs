//! Validity in the least logic of each of the eight congruential classes.
//!
//! A formula is decided over its *basis*: its propositional variables plus
//! the distinct arguments of its boxes (a diamond `◇ψ` contributes `¬ψ`). A
//! *type* assigns a truth value to every variable and to every boxed
//! argument, so a type is a bit mask over the basis. A set of types `W` is
//! *coherent* for a class when every type `c ∈ W` admits a neighborhood
//! family over `W` with the class's flags that contains the extension of
//! every argument boxed at `c` and none of the arguments unboxed at `c`.
//!
//! Coherent sets are exactly the type sets realised by models of the class,
//! and they are closed under union, so a greatest one exists. It is found by
//! repeatedly discarding incoherent types from the set of all `2^k` types.
//! A formula is valid iff it holds at every type of the greatest coherent set;
//! otherwise a smallest coherent set containing a refuting type is turned
//! into an explicit countermodel on at most `2^k` worlds.

mod fragment;
mod symbolic;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::Properties;
use crate::error::{Error, Result};
use crate::frames::{upward_closure, NeighborhoodFrame};
use crate::par::{self, Exec};
use crate::semantics::{eval_prop, PropositionalModel};
use crate::syntax::{subformulas_ordered, Formula};

pub use fragment::{lindenbaum_fragment, model_existence, FormulaCheck, FragmentAlgebra, ModelExistence};
pub use symbolic::{
    bf_countermodel, class_valid_depth_one, finite_instance, omega_bf_countermodel, omega_bf_countermodel_with, BfReport, CofiniteFrame, ContrastRow,
    FlagCertificate, OmegaBfReport, Outcome,
};

/// Default limit on the basis size.
pub const DEFAULT_BASIS_LIMIT: usize = 5;
/// Largest basis the type masks can represent.
pub const MAX_BASIS: usize = 7;
/// Countermodels up to this many worlds are searched exhaustively before
/// falling back to greedy shrinking.
pub const DEFAULT_SEARCH_WORLDS: usize = 3;

const ASSUMPTION: &str = "provability in the least logic of the class is identified with validity on all \
frames of the class (soundness and completeness for the eight congruential classes)";

/// One of the eight classes, identified by the frame conditions it imposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LogicClass {
    pub flags: Properties,
}

impl LogicClass {
    pub fn new(flags: Properties) -> Self {
        LogicClass { flags }
    }

    pub fn all() -> [LogicClass; 8] {
        Properties::all_combinations().map(LogicClass::new)
    }

    pub fn contains_frame(self, z: &NeighborhoodFrame) -> bool {
        z.properties().includes(self.flags)
    }
}

impl fmt::Display for LogicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [
            (self.flags.monotonic, "m"),
            (self.flags.topped, "t"),
            (self.flags.cufi, "c"),
        ]
        .into_iter()
        .filter_map(|(on, n)| on.then_some(n))
        .collect();
        f.write_str(&names.join(","))
    }
}

impl FromStr for LogicClass {
    type Err = Error;

    /// Comma separated flags from `m`, `t`, `c` (or their long names); empty means no flags.
    fn from_str(s: &str) -> Result<Self> {
        let mut flags = Properties::NONE;
        for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match token {
                "m" | "monotonic" => flags.monotonic = true,
                "t" | "topped" => flags.topped = true,
                "c" | "cufi" => flags.cufi = true,
                other => {
                    return Err(Error::Precondition(format!(
                        "unknown class flag `{other}`; expected m, t or c"
                    )))
                }
            }
        }
        Ok(LogicClass { flags })
    }
}

impl Serialize for LogicClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LogicClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DecideOptions {
    pub limit: usize,
    pub exec: Exec,
    pub search_worlds: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            limit: DEFAULT_BASIS_LIMIT,
            exec: Exec::Parallel,
            search_worlds: DEFAULT_SEARCH_WORLDS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Valid,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    /// Largest number of worlds a countermodel could need (`2^k`).
    pub bound: u64,
    pub countermodel: Option<PropositionalModel>,
    /// The world of the countermodel at which the formula fails.
    pub refuted_at: Option<u32>,
    pub class: LogicClass,
    pub basis: Vec<String>,
    pub assumption: String,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.status == Status::Valid
    }
}

/// A type set, as a mask over type codes `0..2^k`.
pub(crate) type TypeSet = u128;

/// Variables and boxed arguments of a set of formulas, with truth masks over all types.
#[derive(Debug, Clone)]
pub(crate) struct Basis {
    pub atoms: Vec<String>,
    pub args: Vec<Formula>,
    arg_index: BTreeMap<Formula, usize>,
}

impl Basis {
    pub fn of<'a>(formulas: impl IntoIterator<Item = &'a Formula> + Clone, limit: usize) -> Result<Basis> {
        let mut atoms = Vec::new();
        let mut args = Vec::new();
        for f in formulas.clone() {
            if !f.is_propositional() || f.has_schematic() {
                return Err(Error::Language(format!(
                    "`{f}` is not a finite propositional formula"
                )));
            }
        }
        for f in formulas {
            for g in subformulas_ordered(f) {
                match &g {
                    Formula::Prop(p) if !atoms.contains(p) => atoms.push(p.clone()),
                    Formula::Box(a) if !args.contains(a.as_ref()) => args.push((**a).clone()),
                    Formula::Diamond(a) => {
                        let neg = Formula::not((**a).clone());
                        if !args.contains(&neg) {
                            args.push(neg);
                        }
                    }
                    _ => {}
                }
            }
        }
        let k = atoms.len() + args.len();
        let cap = limit.min(MAX_BASIS);
        if k > cap {
            return Err(Error::Resource(format!(
                "the basis has {k} members ({} variables, {} boxed arguments), above the limit {cap}; \
                 raise the bound (at most {MAX_BASIS})",
                atoms.len(),
                args.len()
            )));
        }
        let arg_index = args.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        Ok(Basis { atoms, args, arg_index })
    }

    pub fn len(&self) -> usize {
        self.atoms.len() + self.args.len()
    }

    pub fn type_count(&self) -> u32 {
        1 << self.len()
    }

    pub fn all_types(&self) -> TypeSet {
        if self.len() == MAX_BASIS {
            u128::MAX
        } else {
            (1u128 << self.type_count()) - 1
        }
    }

    fn bit_mask(&self, bit: usize) -> TypeSet {
        (0..self.type_count())
            .filter(|t| t >> bit & 1 == 1)
            .fold(0, |acc, t| acc | 1u128 << t)
    }

    fn arg_bit(&self, g: &Formula) -> usize {
        self.atoms.len() + self.arg_index[g]
    }

    /// Types at which `f` holds. `f` must be built from this basis.
    pub fn mask(&self, f: &Formula) -> TypeSet {
        let all = self.all_types();
        match f {
            Formula::Top => all,
            Formula::Bot => 0,
            Formula::Prop(p) => self.bit_mask(self.atoms.iter().position(|a| a == p).expect("variable in basis")),
            Formula::Not(g) => all & !self.mask(g),
            Formula::And(gs) => gs.iter().fold(all, |acc, g| acc & self.mask(g)),
            Formula::Or(gs) => gs.iter().fold(0, |acc, g| acc | self.mask(g)),
            Formula::Implies(a, b) => (all & !self.mask(a)) | self.mask(b),
            Formula::Iff(a, b) => all & !(self.mask(a) ^ self.mask(b)),
            Formula::Box(g) => self.bit_mask(self.arg_bit(g)),
            Formula::Diamond(g) => all & !self.bit_mask(self.arg_bit(&Formula::not((**g).clone()))),
            _ => unreachable!("basis formulas are propositional"),
        }
    }

    /// The basis as formulas: variables, then boxed arguments.
    pub fn formulas(&self) -> Vec<Formula> {
        self.atoms
            .iter()
            .map(|p| Formula::Prop(p.clone()))
            .chain(self.args.iter().map(|a| Formula::boxed(a.clone())))
            .collect()
    }

    /// Conjunction of basis literals describing type `t`.
    pub fn type_formula(&self, t: u32) -> Formula {
        let lits: Vec<Formula> = self
            .formulas()
            .into_iter()
            .enumerate()
            .map(|(i, f)| if t >> i & 1 == 1 { f } else { Formula::not(f) })
            .collect();
        match lits.len() {
            0 => Formula::Top,
            1 => lits.into_iter().next().expect("one literal"),
            _ => Formula::And(lits),
        }
    }

    /// Sort key: earlier basis members first, true before false.
    pub fn rank(&self, t: u32) -> u32 {
        (0..self.len()).fold(0, |r, i| r << 1 | (1 - (t >> i & 1)))
    }

    /// Members of `w` in rank order.
    pub fn ordered(&self, w: TypeSet) -> Vec<u32> {
        let mut ts: Vec<u32> = (0..self.type_count()).filter(|&t| w >> t & 1 == 1).collect();
        ts.sort_by_key(|&t| self.rank(t));
        ts
    }
}

/// Coherence of type sets for one class.
#[derive(Debug, Clone)]
pub(crate) struct Coherence {
    flags: Properties,
    atoms: usize,
    arg_masks: Vec<TypeSet>,
}

impl Coherence {
    pub fn new(basis: &Basis, class: LogicClass) -> Self {
        Coherence {
            flags: class.flags,
            atoms: basis.atoms.len(),
            arg_masks: basis.args.iter().map(|a| basis.mask(a)).collect(),
        }
    }

    fn boxed_at(&self, c: u32, j: usize) -> bool {
        c >> (self.atoms + j) & 1 == 1
    }

    /// Generators of the least admissible family at `c` relative to `w`:
    /// boxed extensions, closed under intersection for cufi, plus `w` for topped.
    pub fn members(&self, w: TypeSet, c: u32) -> Vec<TypeSet> {
        let mut members: Vec<TypeSet> = Vec::new();
        let add = |x: TypeSet, members: &mut Vec<TypeSet>| {
            if !members.contains(&x) {
                members.push(x);
            }
        };
        for (j, m) in self.arg_masks.iter().enumerate() {
            if self.boxed_at(c, j) {
                add(w & m, &mut members);
            }
        }
        if self.flags.topped {
            add(w, &mut members);
        }
        if self.flags.cufi {
            let mut i = 0;
            while i < members.len() {
                for j in 0..i {
                    let x = members[i] & members[j];
                    add(x, &mut members);
                }
                i += 1;
            }
        }
        members
    }

    pub fn passes(&self, w: TypeSet, c: u32) -> bool {
        let members = self.members(w, c);
        self.arg_masks.iter().enumerate().all(|(j, m)| {
            if self.boxed_at(c, j) {
                return true;
            }
            let ext = w & m;
            !members
                .iter()
                .any(|&x| if self.flags.monotonic { x & !ext == 0 } else { x == ext })
        })
    }

    pub fn is_coherent(&self, w: TypeSet) -> bool {
        types_of(w).all(|c| self.passes(w, c))
    }

    /// Greatest coherent subset of `w`.
    pub fn greatest(&self, mut w: TypeSet) -> TypeSet {
        loop {
            let bad = types_of(w).filter(|&c| !self.passes(w, c)).fold(0, |acc, c| acc | 1u128 << c);
            if bad == 0 {
                return w;
            }
            w &= !bad;
        }
    }

    /// The least admissible family at every type of a coherent `w`, as a frame.
    pub fn frame(&self, order: &[u32]) -> Result<NeighborhoodFrame> {
        let w = order.iter().fold(0u128, |acc, &t| acc | 1u128 << t);
        let m = order.len() as u32;
        let to_worlds = |x: TypeSet| {
            order
                .iter()
                .enumerate()
                .filter(|(_, &t)| x >> t & 1 == 1)
                .fold(0u32, |acc, (i, _)| acc | 1 << i)
        };
        let nbhd = order
            .iter()
            .map(|&c| {
                let family: Vec<u32> = self.members(w, c).into_iter().map(to_worlds).collect();
                if self.flags.monotonic {
                    upward_closure(&family, m)
                } else {
                    family
                }
            })
            .collect();
        NeighborhoodFrame::new(m, nbhd)
    }
}

pub(crate) fn types_of(w: TypeSet) -> impl Iterator<Item = u32> {
    (0..128u32).filter(move |&t| w >> t & 1 == 1)
}

/// Builds the model on the worlds `order` (types in rank order).
pub(crate) fn materialize(basis: &Basis, coherence: &Coherence, order: &[u32]) -> Result<PropositionalModel> {
    let frame = coherence.frame(order)?;
    let valuation = basis
        .atoms
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let v = order
                .iter()
                .enumerate()
                .filter(|(_, &t)| t >> i & 1 == 1)
                .fold(0u32, |acc, (w, _)| acc | 1 << w);
            (p.clone(), v)
        })
        .collect();
    PropositionalModel::new(frame, valuation)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// The `rank`-th `k`-subset of `0..n` in lexicographic order.
fn unrank_combination(n: usize, k: usize, mut rank: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let remaining = (k - slot - 1) as u64;
        loop {
            let with_next = binomial((n - next - 1) as u64, remaining);
            if rank < with_next {
                break;
            }
            rank -= with_next;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    out
}

/// Searches combinations of `items` of growing size up to `max_size` for a
/// coherent set meeting `target` (any set if `target` is `None`).
pub(crate) fn smallest_coherent(
    exec: Exec,
    coherence: &Coherence,
    items: &[u32],
    target: Option<TypeSet>,
    max_size: usize,
) -> Option<Vec<u32>> {
    const BUDGET: u64 = 50_000_000;
    for size in 1..=max_size.min(items.len()) {
        let count = binomial(items.len() as u64, size as u64);
        if count > BUDGET {
            return None;
        }
        let pick = |r: u64| -> Vec<u32> {
            unrank_combination(items.len(), size, r).into_iter().map(|i| items[i]).collect()
        };
        let hit = par::find_first_index(exec, 0..count, |r| {
            let set = pick(r);
            let w = set.iter().fold(0u128, |acc, &t| acc | 1u128 << t);
            target.is_none_or(|tg| w & tg != 0) && coherence.is_coherent(w)
        });
        if let Some(r) = hit {
            return Some(pick(r));
        }
    }
    None
}

/// Shrinks the coherent `w` one type at a time while keeping `keep`.
pub(crate) fn shrink(basis: &Basis, coherence: &Coherence, w: TypeSet, keep: u32) -> Vec<u32> {
    let mut current = w;
    for t in basis.ordered(w).into_iter().rev() {
        if t == keep || current >> t & 1 == 0 {
            continue;
        }
        let candidate = coherence.greatest(current & !(1u128 << t));
        if candidate >> keep & 1 == 1 {
            current = candidate;
        }
    }
    basis.ordered(current)
}

/// Greatest coherent type set, its basis and coherence relation.
pub(crate) fn canonical(formulas: &[Formula], class: LogicClass, limit: usize) -> Result<(Basis, Coherence, TypeSet)> {
    let basis = Basis::of(formulas.iter(), limit)?;
    let coherence = Coherence::new(&basis, class);
    let top = coherence.greatest(basis.all_types());
    Ok((basis, coherence, top))
}

/// Types of a least countermodel for `f`, or `None` when `f` is valid.
pub(crate) fn refuting_types(
    f: &Formula,
    basis: &Basis,
    coherence: &Coherence,
    top: TypeSet,
    opts: &DecideOptions,
) -> Option<Vec<u32>> {
    let refuting = top & !basis.mask(f);
    if refuting == 0 {
        return None;
    }
    let items = basis.ordered(top);
    smallest_coherent(opts.exec, coherence, &items, Some(refuting), opts.search_worlds).or_else(|| {
        let first = basis.ordered(refuting)[0];
        Some(shrink(basis, coherence, top, first))
    })
}

pub fn decide_valid(f: &Formula, class: LogicClass) -> Result<Verdict> {
    decide_valid_with(f, class, &DecideOptions::default())
}

/// Decides `f` in the least logic of `class`; invalid verdicts carry a countermodel.
pub fn decide_valid_with(f: &Formula, class: LogicClass, opts: &DecideOptions) -> Result<Verdict> {
    let (basis, coherence, top) = canonical(std::slice::from_ref(f), class, opts.limit)?;
    let mut verdict = Verdict {
        status: Status::Valid,
        bound: 1u64 << basis.len(),
        countermodel: None,
        refuted_at: None,
        class,
        basis: basis.formulas().iter().map(|g| g.to_string()).collect(),
        assumption: ASSUMPTION.to_string(),
    };
    if let Some(order) = refuting_types(f, &basis, &coherence, top, opts) {
        let model = checked_countermodel(&basis, &coherence, &order, f, class)?;
        verdict.status = Status::Invalid;
        verdict.refuted_at = Some((eval_prop(&model, f)? ^ model.frame.all_worlds()).trailing_zeros());
        verdict.countermodel = Some(model);
    }
    Ok(verdict)
}

fn checked_countermodel(
    basis: &Basis,
    coherence: &Coherence,
    order: &[u32],
    f: &Formula,
    class: LogicClass,
) -> Result<PropositionalModel> {
    let model = materialize(basis, coherence, order)?;
    assert!(class.contains_frame(&model.frame), "countermodel frame lacks the class flags");
    assert_ne!(
        eval_prop(&model, f)?,
        model.frame.all_worlds(),
        "countermodel does not refute the formula"
    );
    Ok(model)
}

/// A countermodel with at most `max_worlds` worlds, if one exists.
///
/// Sets of up to `max_worlds` types are searched exhaustively in rank order
/// (within a fixed enumeration budget); if that finds nothing, the greedy
/// shrink of the canonical set is returned when it is small enough.
pub fn countermodel(f: &Formula, class: LogicClass, max_worlds: usize, opts: &DecideOptions) -> Result<Option<PropositionalModel>> {
    let (basis, coherence, top) = canonical(std::slice::from_ref(f), class, opts.limit)?;
    let refuting = top & !basis.mask(f);
    if refuting == 0 || max_worlds == 0 {
        return Ok(None);
    }
    let items = basis.ordered(top);
    let order = match smallest_coherent(opts.exec, &coherence, &items, Some(refuting), max_worlds) {
        Some(order) => order,
        None => {
            let order = shrink(&basis, &coherence, top, basis.ordered(refuting)[0]);
            if order.len() > max_worlds {
                return Ok(None);
            }
            order
        }
    };
    checked_countermodel(&basis, &coherence, &order, f, class).map(Some)
}
