use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    canonical, decide_valid_with, refuting_types, smallest_coherent, Basis, Coherence, DecideOptions, LogicClass,
    TypeSet,
};
use crate::algebra::{FiniteModalAlgebra, MeetFamilySet, MAX_ATOMS};
use crate::duality::{build, stone_map, EmbeddingReport, Variant};
use crate::error::{Error, Result};
use crate::semantics::{ModelCheck, PropositionalModel};
use crate::syntax::{subformulas_ordered, Formula};

/// Finite fragment of the Lindenbaum algebra of a class, generated by the
/// subformulas of a list of formulas.
///
/// Atom `i` of `base` is the `i`-th type of the underlying coherent set;
/// a formula's class is the set of those types at which it holds. Box is
/// the dual of the least admissible neighborhood families over that set.
#[derive(Debug, Clone)]
pub struct FragmentAlgebra {
    pub base: FiniteModalAlgebra,
    pub labels: BTreeMap<u32, Formula>,
    pub meets: MeetFamilySet,
    pub class: LogicClass,
    /// True when built over a subset of the greatest coherent set (see [`model_existence`]).
    pub reduced: bool,
    types: Vec<u32>,
    classes: BTreeMap<Formula, u32>,
}

impl FragmentAlgebra {
    /// The element `|ψ|` for a subformula `ψ` of the generating list.
    pub fn class_of(&self, f: &Formula) -> Option<u32> {
        self.classes.get(f).copied()
    }

    pub fn type_codes(&self) -> &[u32] {
        &self.types
    }
}

fn build_fragment(
    formulas: &[Formula],
    class: LogicClass,
    basis: &Basis,
    coherence: &Coherence,
    w: TypeSet,
    reduced: bool,
) -> Result<FragmentAlgebra> {
    let order = basis.ordered(w);
    let n = order.len() as u32;
    if n > MAX_ATOMS {
        return Err(Error::Resource(format!(
            "the fragment needs {n} atoms, above the cap of {MAX_ATOMS}"
        )));
    }
    let positions = |x: TypeSet| -> u32 {
        order
            .iter()
            .enumerate()
            .filter(|(_, &t)| x >> t & 1 == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    };
    let members: Vec<Vec<u32>> = order
        .iter()
        .map(|&c| coherence.members(w, c).into_iter().map(positions).collect())
        .collect();
    let monotonic = class.flags.monotonic;
    let base = FiniteModalAlgebra::from_fn(n, |x| {
        members
            .iter()
            .enumerate()
            .filter(|(_, ms)| {
                ms.iter()
                    .any(|&m| if monotonic { m & !x == 0 } else { m == x })
            })
            .fold(0, |acc, (i, _)| acc | 1 << i)
    })?;

    let mut classes = BTreeMap::new();
    let mut labels = BTreeMap::new();
    let mut families: Vec<Vec<u32>> = Vec::new();
    for f in formulas {
        for g in subformulas_ordered(f) {
            let code = positions(w & basis.mask(&g));
            labels.entry(code).or_insert_with(|| g.clone());
            if let Formula::And(parts) = &g {
                let family: Vec<u32> = parts.iter().map(|p| positions(w & basis.mask(p))).collect();
                if base.meet_all(family.iter().copied()) != code {
                    return Err(Error::Precondition(format!("meet equation fails for `{g}`")));
                }
                if !families.contains(&family) {
                    families.push(family);
                }
            }
            classes.insert(g, code);
        }
    }
    for code in base.elements() {
        labels.entry(code).or_insert_with(|| {
            let mut disjuncts: Vec<Formula> = order
                .iter()
                .enumerate()
                .filter(|(i, _)| code >> i & 1 == 1)
                .map(|(_, &t)| basis.type_formula(t))
                .collect();
            match disjuncts.len() {
                0 => Formula::Bot,
                1 => disjuncts.pop().expect("one disjunct"),
                _ => Formula::Or(disjuncts),
            }
        });
    }
    let meets = MeetFamilySet::new(families);
    meets.validate(&base)?;
    Ok(FragmentAlgebra {
        base,
        labels,
        meets,
        class,
        reduced,
        types: order,
        classes,
    })
}

/// The fragment generated by the subformulas of `formulas` in the least logic of `class`.
pub fn lindenbaum_fragment(formulas: &[Formula], class: LogicClass, opts: &DecideOptions) -> Result<FragmentAlgebra> {
    let (basis, coherence, top) = canonical(formulas, class, opts.limit)?;
    build_fragment(formulas, class, &basis, &coherence, top, false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaCheck {
    pub formula: String,
    /// Verdict of the decision procedure on the formula alone.
    pub provable: bool,
    pub model_validates: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelExistence {
    pub model: PropositionalModel,
    pub class: LogicClass,
    pub variant: Variant,
    pub fragment_atoms: u32,
    pub reduced: bool,
    pub embedding: EmbeddingReport,
    pub checks: Vec<FormulaCheck>,
}

impl ModelExistence {
    /// `φ ∈ L ⇔ M ⊨ φ` for every formula, and the representation is an embedding.
    pub fn holds(&self) -> bool {
        self.embedding.is_embedding() && self.checks.iter().all(|c| c.provable == c.model_validates)
    }
}

/// A model of `class` validating exactly the members of `formulas` that the class proves.
///
/// The fragment algebra is represented through `J` (or `J̄` when the class is
/// not monotonic) with the recorded conjunction families as designated meets,
/// and each variable is sent to the image of its class. When the full
/// fragment exceeds the atom cap, the fragment is rebuilt over the union of
/// least countermodels of the unprovable formulas, which still separates them.
pub fn model_existence(formulas: &[Formula], class: LogicClass, opts: &DecideOptions) -> Result<ModelExistence> {
    let (basis, coherence, top) = canonical(formulas, class, opts.limit)?;
    let fragment = if top.count_ones() <= MAX_ATOMS {
        build_fragment(formulas, class, &basis, &coherence, top, false)?
    } else {
        let mut w: TypeSet = 0;
        for f in formulas {
            if let Some(types) = refuting_types(f, &basis, &coherence, top, opts) {
                w |= types.iter().fold(0u128, |acc, &t| acc | 1u128 << t);
            }
        }
        if w == 0 {
            let items = basis.ordered(top);
            let single = smallest_coherent(opts.exec, &coherence, &items, None, 1)
                .ok_or_else(|| Error::Precondition("no coherent single type".into()))?;
            w = 1u128 << single[0];
        }
        build_fragment(formulas, class, &basis, &coherence, w, true)?
    };

    let variant = if class.flags.monotonic { Variant::J } else { Variant::JBar };
    let (image, embedding) = stone_map(&fragment.base, &fragment.meets, variant)?;
    let frame = build(&fragment.base, &fragment.meets, variant)?;
    let valuation = basis
        .atoms
        .iter()
        .map(|p| {
            let code = fragment.class_of(&Formula::Prop(p.clone())).expect("variables have classes");
            (p.clone(), image[code as usize])
        })
        .collect();
    let model = PropositionalModel::new(frame, valuation)?;
    let checks = formulas
        .iter()
        .map(|f| {
            Ok(FormulaCheck {
                formula: f.to_string(),
                provable: decide_valid_with(f, class, opts)?.is_valid(),
                model_validates: model.model_valid(f)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModelExistence {
        model,
        class,
        variant,
        fragment_atoms: fragment.base.atom_count(),
        reduced: fragment.reduced,
        embedding,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::Status;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn class(s: &str) -> LogicClass {
        s.parse().unwrap()
    }

    fn opts() -> DecideOptions {
        DecideOptions::default()
    }

    #[test]
    fn box_p_in_the_minimal_class_is_free() {
        let frag = lindenbaum_fragment(&[f("[]p")], class(""), &opts()).unwrap();
        assert_eq!(frag.base.size(), 16);
        let p = frag.class_of(&f("p")).unwrap();
        let bp = frag.class_of(&f("[]p")).unwrap();
        assert_eq!(frag.base.boxed(p), bp);
        // the two generators are independent: all four meets of literals are non-zero
        for x in [p, frag.base.complement(p)] {
            for y in [bp, frag.base.complement(bp)] {
                assert_ne!(frag.base.meet(x, y), 0);
            }
        }
    }

    #[test]
    fn necessitation_collapses_box_top() {
        let frag = lindenbaum_fragment(&[f("[]T")], class("t"), &opts()).unwrap();
        assert_eq!(frag.base.size(), 2);
        assert_eq!(frag.class_of(&f("[]T")), Some(frag.base.top()));
    }

    #[test]
    fn contradiction_is_bottom() {
        let frag = lindenbaum_fragment(&[f("p & ~p")], class(""), &opts()).unwrap();
        assert_eq!(frag.class_of(&f("p & ~p")), Some(0));
        assert_eq!(frag.meets.families, vec![vec![frag.class_of(&f("p")).unwrap(), frag.class_of(&f("~p")).unwrap()]]);
    }

    #[test]
    fn labels_are_faithful() {
        for l in [class(""), class("m,c")] {
            let frag = lindenbaum_fragment(&[f("[]p")], l, &opts()).unwrap();
            let top = &frag.labels[&frag.base.top()];
            assert!(decide_valid_with(top, l, &opts()).unwrap().is_valid());
            let codes: Vec<u32> = frag.base.elements().collect();
            for (i, &a) in codes.iter().enumerate() {
                for &b in &codes[i + 1..] {
                    let iff = Formula::iff(frag.labels[&a].clone(), frag.labels[&b].clone());
                    let v = decide_valid_with(&iff, l, &DecideOptions { limit: 7, ..opts() }).unwrap();
                    assert_eq!(v.status, Status::Invalid, "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn model_existence_examples() {
        for l in LogicClass::all() {
            let r = model_existence(&[f("[](p & q) <-> [](q & p)")], l, &opts()).unwrap();
            assert!(r.holds(), "{l}");
            assert!(r.checks[0].model_validates);
            assert!(l.contains_frame(&r.model.frame));
        }
        let r = model_existence(&[f("[](p & q) -> []p & []q")], class(""), &opts()).unwrap();
        assert!(r.holds());
        assert!(!r.checks[0].model_validates);
        assert!(r.reduced);

        let r = model_existence(&[f("[]T")], class("t"), &opts()).unwrap();
        assert!(r.holds() && r.checks[0].model_validates);
        assert!(r.model.frame.properties().topped);
    }

    #[test]
    fn several_formulas_at_once() {
        let u = [f("[]p -> [](p | q)"), f("[]T"), f("[]p & []q -> [](p & q)")];
        for l in LogicClass::all() {
            let r = model_existence(&u, l, &DecideOptions { limit: 7, ..opts() }).unwrap();
            assert!(r.holds(), "{l}: {:?}", r.checks);
        }
    }
}
