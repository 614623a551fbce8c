//! Truth sets of formulas in finite neighborhood models.
//!
//! A truth set is a world-subset code. `□φ` holds at `c` exactly when the
//! truth set of `φ` is one of the neighborhoods of `c`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::NeighborhoodFrame;
use crate::par::{self, Exec};
use crate::syntax::{free_vars, predicate_arities, Formula};

/// Largest number of valuation / interpretation bits a validity sweep will enumerate.
pub const MAX_SWEEP_BITS: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PropModelJson", into = "PropModelJson")]
pub struct PropositionalModel {
    pub frame: NeighborhoodFrame,
    pub valuation: BTreeMap<String, u32>,
}

#[derive(Serialize, Deserialize)]
struct PropModelJson {
    worlds: u32,
    nbhd: Vec<Vec<u32>>,
    valuation: BTreeMap<String, u32>,
}

impl TryFrom<PropModelJson> for PropositionalModel {
    type Error = Error;
    fn try_from(j: PropModelJson) -> Result<Self> {
        PropositionalModel::new(NeighborhoodFrame::new(j.worlds, j.nbhd)?, j.valuation)
    }
}

impl From<PropositionalModel> for PropModelJson {
    fn from(m: PropositionalModel) -> Self {
        PropModelJson {
            worlds: m.frame.world_count(),
            nbhd: m.frame.all_neighborhoods().to_vec(),
            valuation: m.valuation,
        }
    }
}

impl PropositionalModel {
    pub fn new(frame: NeighborhoodFrame, valuation: BTreeMap<String, u32>) -> Result<Self> {
        if let Some((p, &v)) = valuation.iter().find(|(_, &v)| v & !frame.all_worlds() != 0) {
            return Err(Error::Construction(format!(
                "valuation of `{p}` = {v} is outside the {} worlds",
                frame.world_count()
            )));
        }
        Ok(PropositionalModel { frame, valuation })
    }

    pub fn value(&self, p: &str) -> u32 {
        self.valuation.get(p).copied().unwrap_or(0)
    }
}

fn eval_in_frame(z: &NeighborhoodFrame, f: &Formula, prop: &dyn Fn(&str) -> u32) -> Result<u32> {
    let all = z.all_worlds();
    let ev = |g: &Formula| eval_in_frame(z, g, prop);
    Ok(match f {
        Formula::Top => all,
        Formula::Bot => 0,
        Formula::Prop(p) => prop(p),
        Formula::Not(g) => all & !ev(g)?,
        Formula::And(gs) => gs.iter().try_fold(all, |acc, g| Ok::<_, Error>(acc & ev(g)?))?,
        Formula::Or(gs) => gs.iter().try_fold(0, |acc, g| Ok::<_, Error>(acc | ev(g)?))?,
        Formula::Implies(a, b) => (all & !ev(a)?) | ev(b)?,
        Formula::Iff(a, b) => all & !(ev(a)? ^ ev(b)?),
        Formula::Box(g) => z.box_of(ev(g)?),
        Formula::Diamond(g) => all & !z.box_of(all & !ev(g)?),
        Formula::Pred(..) | Formula::Forall(..) | Formula::Exists(..) => {
            return Err(Error::Language(format!(
                "predicate formula `{f}` in a propositional model"
            )))
        }
        Formula::OmegaAnd(stem) => {
            return Err(Error::Language(format!(
                "schematic conjunction over `{stem}` has no finite truth set"
            )))
        }
    })
}

/// Truth set of a propositional formula; unknown propositions are false everywhere.
pub fn eval_prop(m: &PropositionalModel, f: &Formula) -> Result<u32> {
    eval_in_frame(&m.frame, f, &|p| m.value(p))
}

pub type Assignment = BTreeMap<String, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PredModelJson", into = "PredModelJson")]
pub struct PredicateModel {
    pub frame: NeighborhoodFrame,
    pub domain_size: usize,
    /// `(world, predicate) ↦` tuples over `0..domain_size`. Missing keys are empty.
    pub interp: BTreeMap<(u32, String), BTreeSet<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
struct InterpEntry {
    world: u32,
    pred: String,
    tuples: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct PredModelJson {
    worlds: u32,
    nbhd: Vec<Vec<u32>>,
    domain: usize,
    interp: Vec<InterpEntry>,
}

impl TryFrom<PredModelJson> for PredicateModel {
    type Error = Error;
    fn try_from(j: PredModelJson) -> Result<Self> {
        let frame = NeighborhoodFrame::new(j.worlds, j.nbhd)?;
        let mut interp: BTreeMap<(u32, String), BTreeSet<Vec<usize>>> = BTreeMap::new();
        for e in j.interp {
            interp.entry((e.world, e.pred)).or_default().extend(e.tuples);
        }
        PredicateModel::new(frame, j.domain, interp)
    }
}

impl From<PredicateModel> for PredModelJson {
    fn from(m: PredicateModel) -> Self {
        PredModelJson {
            worlds: m.frame.world_count(),
            nbhd: m.frame.all_neighborhoods().to_vec(),
            domain: m.domain_size,
            interp: m
                .interp
                .into_iter()
                .map(|((world, pred), tuples)| InterpEntry {
                    world,
                    pred,
                    tuples: tuples.into_iter().collect(),
                })
                .collect(),
        }
    }
}

impl PredicateModel {
    pub fn new(
        frame: NeighborhoodFrame,
        domain_size: usize,
        interp: BTreeMap<(u32, String), BTreeSet<Vec<usize>>>,
    ) -> Result<Self> {
        if domain_size == 0 {
            return Err(Error::Construction("the domain is non-empty".into()));
        }
        let mut arity: BTreeMap<&str, usize> = BTreeMap::new();
        for ((c, p), tuples) in &interp {
            if *c >= frame.world_count() {
                return Err(Error::Construction(format!("world {c} out of range")));
            }
            for t in tuples {
                if let Some(&e) = t.iter().find(|&&e| e >= domain_size) {
                    return Err(Error::Construction(format!(
                        "element {e} of `{p}` is outside the domain 0..{domain_size}"
                    )));
                }
                match arity.insert(p, t.len()) {
                    Some(n) if n != t.len() => {
                        return Err(Error::Arity {
                            name: p.clone(),
                            expected: n,
                            found: t.len(),
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(PredicateModel {
            frame,
            domain_size,
            interp,
        })
    }

    fn arity(&self, p: &str) -> Option<usize> {
        self.interp
            .iter()
            .filter(|((_, q), _)| q == p)
            .find_map(|(_, ts)| ts.iter().next().map(Vec::len))
    }

    fn holds(&self, c: u32, p: &str, tuple: &[usize]) -> bool {
        self.interp
            .get(&(c, p.to_string()))
            .is_some_and(|ts| ts.contains(tuple))
    }
}

/// Truth set of a predicate formula under an assignment.
pub fn eval_pred(m: &PredicateModel, a: &Assignment, f: &Formula) -> Result<u32> {
    let z = &m.frame;
    let all = z.all_worlds();
    let ev = |g: &Formula| eval_pred(m, a, g);
    Ok(match f {
        Formula::Top => all,
        Formula::Bot => 0,
        Formula::Pred(p, vars) => {
            if let Some(n) = m.arity(p) {
                if n != vars.len() {
                    return Err(Error::Arity {
                        name: p.clone(),
                        expected: n,
                        found: vars.len(),
                    });
                }
            }
            let tuple = vars
                .iter()
                .map(|v| a.get(v).copied().ok_or_else(|| Error::MissingAssignment(v.clone())))
                .collect::<Result<Vec<usize>>>()?;
            (0..z.world_count())
                .filter(|&c| m.holds(c, p, &tuple))
                .fold(0, |acc, c| acc | 1 << c)
        }
        Formula::Not(g) => all & !ev(g)?,
        Formula::And(gs) => gs.iter().try_fold(all, |acc, g| Ok::<_, Error>(acc & ev(g)?))?,
        Formula::Or(gs) => gs.iter().try_fold(0, |acc, g| Ok::<_, Error>(acc | ev(g)?))?,
        Formula::Implies(x, y) => (all & !ev(x)?) | ev(y)?,
        Formula::Iff(x, y) => all & !(ev(x)? ^ ev(y)?),
        Formula::Box(g) => z.box_of(ev(g)?),
        Formula::Diamond(g) => all & !z.box_of(all & !ev(g)?),
        Formula::Forall(x, g) | Formula::Exists(x, g) => {
            let universal = matches!(f, Formula::Forall(..));
            let mut acc = if universal { all } else { 0 };
            let mut variant = a.clone();
            for d in 0..m.domain_size {
                variant.insert(x.clone(), d);
                let v = eval_pred(m, &variant, g)?;
                acc = if universal { acc & v } else { acc | v };
            }
            acc
        }
        Formula::Prop(p) => {
            return Err(Error::Language(format!(
                "propositional variable `{p}` in a predicate model"
            )))
        }
        Formula::OmegaAnd(stem) => {
            return Err(Error::Language(format!(
                "schematic conjunction over `{stem}` in a predicate model"
            )))
        }
    })
}

/// Models that can decide `M ⊨ φ`.
pub trait ModelCheck {
    fn model_valid(&self, f: &Formula) -> Result<bool>;
}

impl ModelCheck for PropositionalModel {
    fn model_valid(&self, f: &Formula) -> Result<bool> {
        Ok(eval_prop(self, f)? == self.frame.all_worlds())
    }
}

impl ModelCheck for PredicateModel {
    /// Quantifies over assignments of the free variables; a closed formula needs one.
    fn model_valid(&self, f: &Formula) -> Result<bool> {
        let vars: Vec<String> = free_vars(f).into_iter().collect();
        let d = self.domain_size;
        let count = d
            .checked_pow(vars.len() as u32)
            .ok_or_else(|| Error::Resource("too many assignments".into()))?;
        for mut idx in 0..count {
            let mut a = Assignment::new();
            for v in &vars {
                a.insert(v.clone(), idx % d);
                idx /= d;
            }
            if eval_pred(self, &a, f)? != self.frame.all_worlds() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn model_valid(m: &impl ModelCheck, f: &Formula) -> Result<bool> {
    m.model_valid(f)
}

fn valuation_at(props: &[String], m: u32, mut index: u64) -> BTreeMap<String, u32> {
    let base = 1u64 << m;
    props
        .iter()
        .map(|p| {
            let v = (index % base) as u32;
            index /= base;
            (p.clone(), v)
        })
        .collect()
}

/// First valuation (in index order) of the formula's propositions that refutes it on `z`.
pub fn frame_countermodel(exec: Exec, z: &NeighborhoodFrame, f: &Formula) -> Result<Option<PropositionalModel>> {
    if !f.is_propositional() || f.has_schematic() {
        return Err(Error::Language(format!("`{f}` is not a finite propositional formula")));
    }
    let props: Vec<String> = f.props().into_iter().collect();
    let m = z.world_count();
    let bits = m * props.len() as u32;
    if bits > MAX_SWEEP_BITS {
        return Err(Error::Resource(format!(
            "{bits} valuation bits exceed the sweep limit {MAX_SWEEP_BITS}"
        )));
    }
    // Type-check once so the sweep below cannot fail.
    eval_in_frame(z, f, &|_| 0)?;
    let all = z.all_worlds();
    let hit = par::find_first_index(exec, 0..1u64 << bits, |i| {
        let v = valuation_at(&props, m, i);
        eval_in_frame(z, f, &|p| v.get(p).copied().unwrap_or(0)).is_ok_and(|t| t != all)
    });
    Ok(hit.map(|i| PropositionalModel {
        frame: z.clone(),
        valuation: valuation_at(&props, m, i),
    }))
}

fn interpretation_at(
    preds: &[(String, usize)],
    m: u32,
    d: usize,
    mut index: u64,
) -> BTreeMap<(u32, String), BTreeSet<Vec<usize>>> {
    let mut interp = BTreeMap::new();
    for (p, arity) in preds {
        let tuples: Vec<Vec<usize>> = (0..d.pow(*arity as u32))
            .map(|mut t| {
                let mut v = vec![0; *arity];
                for slot in v.iter_mut() {
                    *slot = t % d;
                    t /= d;
                }
                v
            })
            .collect();
        for c in 0..m {
            let set: BTreeSet<Vec<usize>> = tuples
                .iter()
                .filter(|_| {
                    let bit = index & 1 == 1;
                    index >>= 1;
                    bit
                })
                .cloned()
                .collect();
            interp.insert((c, p.clone()), set);
        }
    }
    interp
}

/// `Z ⊨ φ`. Propositional formulas are checked against every valuation of
/// their variables, which is exact. Predicate formulas are checked against
/// every interpretation over domains of size `1..=max_domain`, a bounded
/// approximation of the quantification over all domains.
pub fn frame_valid_with(exec: Exec, z: &NeighborhoodFrame, f: &Formula, max_domain: usize) -> Result<bool> {
    if f.is_propositional() {
        return Ok(frame_countermodel(exec, z, f)?.is_none());
    }
    if !f.is_predicate_language() {
        return Err(Error::Language(format!("`{f}` mixes propositional and predicate syntax")));
    }
    let preds: Vec<(String, usize)> = predicate_arities([f])?.into_iter().collect();
    let m = z.world_count();
    for d in 1..=max_domain {
        let bits: u64 = preds
            .iter()
            .map(|(_, a)| m as u64 * d.pow(*a as u32) as u64)
            .sum();
        if bits > MAX_SWEEP_BITS as u64 {
            return Err(Error::Resource(format!(
                "{bits} interpretation bits at domain size {d} exceed the sweep limit {MAX_SWEEP_BITS}"
            )));
        }
        let bad = par::find_first_index(exec, 0..1u64 << bits, |i| {
            PredicateModel::new(z.clone(), d, interpretation_at(&preds, m, d, i))
                .and_then(|model| model.model_valid(f))
                .map_or(true, |ok| !ok)
        });
        if let Some(i) = bad {
            let model = PredicateModel::new(z.clone(), d, interpretation_at(&preds, m, d, i))?;
            // surface evaluation errors rather than reporting them as refutations
            model.model_valid(f)?;
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn frame_valid(z: &NeighborhoodFrame, f: &Formula, max_domain: usize) -> Result<bool> {
    frame_valid_with(Exec::Parallel, z, f, max_domain)
}

pub fn class_valid<'a>(
    frames: impl IntoIterator<Item = &'a NeighborhoodFrame>,
    f: &Formula,
    max_domain: usize,
) -> Result<bool> {
    for z in frames {
        if !frame_valid(z, f, max_domain)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Properties;
    use crate::frames::enumerate_frames;
    use crate::syntax::{parse, substitute};
    use proptest::prelude::*;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn model(z: NeighborhoodFrame, val: &[(&str, u32)]) -> PropositionalModel {
        PropositionalModel::new(z, val.iter().map(|&(p, v)| (p.to_string(), v)).collect()).unwrap()
    }

    #[test]
    fn propositional_examples() {
        let z = NeighborhoodFrame::from_fn(2, |_| vec![3]).unwrap();
        let m = model(z, &[]);
        assert_eq!(eval_prop(&m, &Formula::Top).unwrap(), 3);
        assert_eq!(eval_prop(&m, &f("[]T")).unwrap(), 3);
        assert_eq!(eval_prop(&m, &f("unknown")).unwrap(), 0);

        let z = NeighborhoodFrame::new(1, vec![vec![0]]).unwrap();
        assert_eq!(eval_prop(&model(z, &[("p", 0)]), &f("[]p")).unwrap(), 1);
        assert!(matches!(
            eval_prop(&model(NeighborhoodFrame::new(1, vec![vec![]]).unwrap(), &[]), &f("P(x)")),
            Err(Error::Language(_))
        ));
    }

    #[test]
    fn predicate_examples() {
        let z = NeighborhoodFrame::new(1, vec![vec![1]]).unwrap();
        let one = |tuples: &[Vec<usize>]| {
            let mut interp = BTreeMap::new();
            interp.insert((0, "P".to_string()), tuples.iter().cloned().collect());
            interp
        };
        let m = PredicateModel::new(z.clone(), 1, one(&[vec![0]])).unwrap();
        let a: Assignment = [("x".to_string(), 0)].into_iter().collect();
        assert_eq!(eval_pred(&m, &a, &f("P(x)")).unwrap(), 1);

        let m2 = PredicateModel::new(z.clone(), 2, one(&[vec![0], vec![1]])).unwrap();
        assert_eq!(eval_pred(&m2, &Assignment::new(), &f("A x. P(x)")).unwrap(), 1);

        let a0: Assignment = [("y".to_string(), 0)].into_iter().collect();
        let a1: Assignment = [("y".to_string(), 1)].into_iter().collect();
        let closed = f("[]A x. P(x) & E x. ~P(x)");
        assert_eq!(eval_pred(&m2, &a0, &closed).unwrap(), eval_pred(&m2, &a1, &closed).unwrap());

        assert!(matches!(eval_pred(&m2, &Assignment::new(), &f("P(z)")), Err(Error::MissingAssignment(_))));
        assert!(matches!(eval_pred(&m2, &a, &f("P(x,x)")), Err(Error::Arity { .. })));
    }

    #[test]
    fn validity_examples() {
        for z in enumerate_frames(1, Properties::NONE, usize::MAX).unwrap() {
            assert!(frame_valid(&z, &Formula::Top, 1).unwrap());
        }
        let topped: Vec<_> = enumerate_frames(2, Properties::new(false, true, false), usize::MAX)
            .unwrap()
            .collect();
        assert!(class_valid(&topped, &f("[]T"), 1).unwrap());

        let z = NeighborhoodFrame::new(1, vec![vec![0]]).unwrap();
        let m_axiom = f("[](p & q) -> []p");
        assert!(!frame_valid(&z, &m_axiom, 1).unwrap());
        let witness = model(z.clone(), &[("p", 1), ("q", 0)]);
        assert!(!witness.model_valid(&m_axiom).unwrap());
    }

    #[test]
    fn predicate_frame_validity() {
        let z = NeighborhoodFrame::new(1, vec![vec![1]]).unwrap();
        assert!(frame_valid(&z, &f("A x. P(x) -> P(y)"), 2).unwrap());
        assert!(!frame_valid(&z, &f("P(x) -> A x. P(x)"), 2).unwrap());
        assert!(frame_valid(&z, &f("A x. []P(x) -> []A x. P(x)"), 2).unwrap());
        assert!(matches!(frame_valid(&z, &f("p & P(x)"), 1), Err(Error::Language(_))));
    }

    #[test]
    fn model_json_round_trip() {
        let m = model(NeighborhoodFrame::new(2, vec![vec![1], vec![]]).unwrap(), &[("p", 2)]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"worlds":2,"nbhd":[[1],[]],"valuation":{"p":2}}"#);
        assert_eq!(serde_json::from_str::<PropositionalModel>(&s).unwrap(), m);
        assert!(serde_json::from_str::<PropositionalModel>(r#"{"worlds":1,"nbhd":[[]],"valuation":{"p":2}}"#).is_err());

        let mut interp = BTreeMap::new();
        interp.insert((1, "R".to_string()), [vec![0, 1]].into_iter().collect());
        let pm = PredicateModel::new(NeighborhoodFrame::from_fn(2, |_| vec![]).unwrap(), 2, interp).unwrap();
        let s = serde_json::to_string(&pm).unwrap();
        assert_eq!(serde_json::from_str::<PredicateModel>(&s).unwrap(), pm);
    }

    fn arb_pred_model() -> impl Strategy<Value = PredicateModel> {
        (1u32..=2, 1usize..=2, any::<u64>()).prop_map(|(m, d, seed)| {
            let nbhd = (0..m)
                .map(|c| (0..1u32 << m).filter(|x| (seed >> (c * 4 + x)) & 1 == 1).collect())
                .collect();
            let frame = NeighborhoodFrame::new(m, nbhd).unwrap();
            let preds = vec![("P".to_string(), 1), ("Q".to_string(), 2)];
            PredicateModel::new(frame, d, interpretation_at(&preds, m, d, seed >> 16)).unwrap()
        })
    }

    fn arb_pred_formula() -> impl Strategy<Value = Formula> {
        let var = prop_oneof![Just("x"), Just("y"), Just("z")];
        let leaf = prop_oneof![
            var.clone().prop_map(|v| Formula::pred("P", &[v])),
            (var.clone(), var.clone()).prop_map(|(a, b)| Formula::pred("Q", &[a, b])),
        ];
        leaf.prop_recursive(4, 24, 2, move |inner| {
            let var = prop_oneof![Just("x"), Just("y"), Just("z")];
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                inner.clone().prop_map(Formula::boxed),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (var.clone(), inner.clone()).prop_map(|(v, b)| Formula::forall(v, b)),
                (var, inner).prop_map(|(v, b)| Formula::exists(v, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn substitution_matches_updated_assignment(
            m in arb_pred_model(),
            phi in arb_pred_formula(),
            vals in proptest::collection::vec(0usize..2, 3),
        ) {
            let d = m.domain_size;
            let a: Assignment = ["x", "y", "z"].iter().zip(&vals).map(|(v, &e)| (v.to_string(), e % d)).collect();
            let lhs = eval_pred(&m, &a, &substitute(&phi, "x", "y")).unwrap();
            let mut updated = a.clone();
            updated.insert("x".into(), a["y"]);
            prop_assert_eq!(lhs, eval_pred(&m, &updated, &phi).unwrap());
        }

        #[test]
        fn free_variable_irrelevance(
            m in arb_pred_model(),
            phi in arb_pred_formula(),
            v1 in proptest::collection::vec(0usize..2, 3),
            v2 in proptest::collection::vec(0usize..2, 3),
        ) {
            let d = m.domain_size;
            let fv = free_vars(&phi);
            let a: Assignment = ["x", "y", "z"].iter().zip(&v1).map(|(v, &e)| (v.to_string(), e % d)).collect();
            let b: Assignment = ["x", "y", "z"]
                .iter()
                .zip(v1.iter().zip(&v2))
                .map(|(v, (&e1, &e2))| (v.to_string(), if fv.contains(*v) { e1 % d } else { e2 % d }))
                .collect();
            prop_assert_eq!(eval_pred(&m, &a, &phi).unwrap(), eval_pred(&m, &b, &phi).unwrap());
        }
    }

    #[test]
    fn box_depends_only_on_the_truth_set() {
        // congruence at evaluation level: equal truth sets give equal boxes
        for z in enumerate_frames(2, Properties::NONE, usize::MAX).unwrap() {
            for v in 0..16u32 {
                let m = model(z.clone(), &[("p", v & 3), ("q", v >> 2)]);
                let (a, b) = (f("p & q"), f("q & p"));
                assert_eq!(eval_prop(&m, &a).unwrap(), eval_prop(&m, &b).unwrap());
                assert_eq!(
                    eval_prop(&m, &Formula::boxed(a)).unwrap(),
                    eval_prop(&m, &Formula::boxed(b)).unwrap()
                );
            }
        }
    }
}
