//! Symbolic refutations of the Barcan formula and its infinitary
//! propositional analogue on the frame of cofinite neighborhoods over ω.

use serde::Serialize;

use super::LogicClass;
use crate::epsets::{family_meet, EPSet, ParametricFamily};
use crate::error::{Error, Result};
use crate::frames::{enumerate_frames, mask_to_family, FrameEnumeration, NeighborhoodFrame};
use crate::par::{self, Exec};
use crate::semantics::{frame_countermodel, PropositionalModel};
use crate::syntax::Formula;

const SPOT_CHECKS: usize = 100;
const EVALUATION_WORLD: usize = 0;

/// Worlds `ω`; every world's neighborhoods are the cofinite subsets of `ω`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CofiniteFrame;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Holds,
    Fails,
}

impl Outcome {
    fn of(b: bool) -> Self {
        if b {
            Outcome::Holds
        } else {
            Outcome::Fails
        }
    }
}

/// Frame conditions checked on every pair from a pool of eventually-periodic sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagCertificate {
    pub monotonic: bool,
    pub topped: bool,
    pub cufi: bool,
    pub pool_size: usize,
    pub pairs_checked: u64,
}

impl FlagCertificate {
    pub fn all(&self) -> bool {
        self.monotonic && self.topped && self.cufi
    }
}

impl CofiniteFrame {
    pub fn has_neighborhood(&self, _world: usize, x: &EPSet) -> bool {
        x.is_cofinite()
    }

    /// Every canonical set with prefix and period of length at most `len`.
    pub fn pool(len: usize) -> Vec<EPSet> {
        let strings = |min: usize| -> Vec<Vec<bool>> {
            (min..=len)
                .flat_map(|l| (0..1u32 << l).map(move |bits| (0..l).map(|i| bits >> i & 1 == 1).collect()))
                .collect()
        };
        let mut pool: Vec<EPSet> = strings(0)
            .into_iter()
            .flat_map(|pre| {
                strings(1)
                    .into_iter()
                    .map(move |per| EPSet::new(pre.clone(), per).expect("period is non-empty"))
            })
            .collect();
        pool.sort();
        pool.dedup();
        pool
    }

    /// Checks the three frame conditions at world 0 over `pool(len)`.
    ///
    /// The frame is uniform, so world 0 stands for every world.
    pub fn certify(&self, len: usize) -> FlagCertificate {
        let pool = Self::pool(len);
        let w = EVALUATION_WORLD;
        let mut monotonic = true;
        let mut cufi = true;
        let mut pairs = 0u64;
        for x in &pool {
            for y in &pool {
                pairs += 1;
                if self.has_neighborhood(w, x) && x.is_subset(y) && !self.has_neighborhood(w, y) {
                    monotonic = false;
                }
                if self.has_neighborhood(w, x)
                    && self.has_neighborhood(w, y)
                    && !self.has_neighborhood(w, &x.intersection(y))
                {
                    cufi = false;
                }
            }
        }
        FlagCertificate {
            monotonic,
            topped: self.has_neighborhood(w, &EPSet::full()),
            cufi,
            pool_size: pool.len(),
            pairs_checked: pairs,
        }
    }

    /// `□` at world 0 of a truth set given symbolically.
    fn box_holds(&self, truth: &EPSet) -> bool {
        self.has_neighborhood(EVALUATION_WORLD, truth)
    }
}

/// Truth set of `P(d)` when `P` holds of `d` at world `c` exactly when `d ≠ c`.
fn instance_truth_set(d: usize) -> EPSet {
    EPSet::from_fn(d + 1, 1, |c| c != d).expect("period is non-empty")
}

#[derive(Debug, Clone, Serialize)]
struct PremiseCheck {
    outcome: Outcome,
    /// Every member of the co-singleton family is cofinite.
    uniform_rule: bool,
    spot_checks: usize,
    witnesses: Vec<EPSet>,
}

fn premise_check(frame: &CofiniteFrame) -> PremiseCheck {
    let uniform_rule = ParametricFamily::CoSingleton.all_members_cofinite();
    let spot = (0..=SPOT_CHECKS).all(|d| {
        let truth = instance_truth_set(d);
        truth == EPSet::co_singleton(d) && frame.box_holds(&truth)
    });
    PremiseCheck {
        outcome: Outcome::of(uniform_rule && spot),
        uniform_rule,
        spot_checks: SPOT_CHECKS + 1,
        witnesses: (0..3).map(instance_truth_set).collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
struct ConclusionCheck {
    outcome: Outcome,
    truth_set: EPSet,
    cofinite: bool,
}

fn conclusion_check(frame: &CofiniteFrame) -> ConclusionCheck {
    let truth = family_meet(&ParametricFamily::CoSingleton).expect("co-singletons have a meet");
    // no world satisfies every instance: world c fails the instance at c
    debug_assert!((0..=SPOT_CHECKS).all(|c| !instance_truth_set(c).contains(c)));
    ConclusionCheck {
        outcome: Outcome::of(frame.box_holds(&truth)),
        cofinite: truth.is_cofinite(),
        truth_set: truth,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BfReport {
    pub formula: String,
    pub world: usize,
    pub domain: String,
    pub interpretation: String,
    pub frame_flags: FlagCertificate,
    pub premise: Outcome,
    pub conclusion: Outcome,
    pub formula_outcome: Outcome,
    premise_detail: PremiseCheck,
    conclusion_detail: ConclusionCheck,
}

impl BfReport {
    pub fn verified(&self) -> bool {
        self.frame_flags.all()
            && self.premise == Outcome::Holds
            && self.conclusion == Outcome::Fails
            && self.formula_outcome == Outcome::Fails
    }
}

/// Refutes `∀x□P(x) ⊃ □∀xP(x)` at world 0 of the cofinite frame with domain `ω`.
pub fn bf_countermodel() -> BfReport {
    let frame = CofiniteFrame;
    let premise = premise_check(&frame);
    let conclusion = conclusion_check(&frame);
    BfReport {
        formula: Formula::implies(
            Formula::forall("x", Formula::boxed(Formula::pred("P", &["x"]))),
            Formula::boxed(Formula::forall("x", Formula::pred("P", &["x"]))),
        )
        .to_string(),
        world: EVALUATION_WORLD,
        domain: "ω".into(),
        interpretation: "P holds of d at world c iff d ≠ c".into(),
        frame_flags: frame.certify(3),
        premise: premise.outcome,
        conclusion: conclusion.outcome,
        formula_outcome: Outcome::of(premise.outcome == Outcome::Fails || conclusion.outcome == Outcome::Holds),
        premise_detail: premise,
        conclusion_detail: conclusion,
    }
}

/// One finite instance `⋀_{i<k} □p_i ⊃ □⋀_{i<k} p_i` checked on all cufi frames with `m` worlds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContrastRow {
    pub k: usize,
    pub worlds: u32,
    pub method: String,
    pub cases: u64,
    pub valid: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaBfReport {
    pub formula: String,
    pub world: usize,
    pub valuation: String,
    pub frame_flags: FlagCertificate,
    pub premise: Outcome,
    pub conclusion: Outcome,
    pub finite_contrast: Vec<ContrastRow>,
    /// The first frame (fewest worlds, then enumeration order) without the
    /// cufi condition that refutes the binary instance. One-world frames are
    /// all cufi, so it has two worlds.
    pub non_cufi_witness: Option<PropositionalModel>,
    premise_detail: PremiseCheck,
    conclusion_detail: ConclusionCheck,
}

impl OmegaBfReport {
    pub fn verified(&self) -> bool {
        self.frame_flags.all()
            && self.premise == Outcome::Holds
            && self.conclusion == Outcome::Fails
            && !self.finite_contrast.is_empty()
            && self.finite_contrast.iter().all(|r| r.valid)
            && self.non_cufi_witness.is_some()
    }
}

/// `⋀_{i<k} □p_i ⊃ □⋀_{i<k} p_i`.
pub fn finite_instance(k: usize) -> Formula {
    let props: Vec<Formula> = (0..k).map(|i| Formula::prop(&format!("p{i}"))).collect();
    let join = |fs: Vec<Formula>| if fs.len() == 1 { fs.into_iter().next().expect("one") } else { Formula::And(fs) };
    Formula::implies(
        join(props.iter().cloned().map(Formula::boxed).collect()),
        Formula::boxed(join(props)),
    )
}

/// Validity of a formula of modal depth at most one on every frame of
/// `class` with `m` worlds.
///
/// Truth of such a formula at a world depends only on the valuation and that
/// world's own neighborhoods, and the class conditions are imposed world by
/// world, so it suffices to check the frames in which every world carries
/// the same admissible family.
pub fn class_valid_depth_one(exec: Exec, f: &Formula, class: LogicClass, m: u32) -> Result<bool> {
    if f.modal_depth() > 1 {
        return Err(Error::Precondition(format!("`{f}` has modal depth above one")));
    }
    let en = FrameEnumeration::new(m, class.flags)?;
    let families = en.world_families();
    let refuted = par::position_first(exec, families, |&mask| {
        let uniform = NeighborhoodFrame::from_fn(m, |_| mask_to_family(mask, m)).expect("valid family");
        frame_countermodel(Exec::Sequential, &uniform, f).map_or(true, |c| c.is_some())
    });
    if let Some(i) = refuted {
        // surface evaluation errors instead of reporting them as refutations
        let uniform = NeighborhoodFrame::from_fn(m, |_| mask_to_family(families[i], m))?;
        frame_countermodel(Exec::Sequential, &uniform, f)?;
        return Ok(false);
    }
    Ok(true)
}

fn direct_sweep(exec: Exec, f: &Formula, class: LogicClass, m: u32) -> Result<(u64, bool)> {
    let frames: Vec<NeighborhoodFrame> = enumerate_frames(m, class.flags, usize::MAX)?.collect();
    let bad = par::position_first(exec, &frames, |z| {
        frame_countermodel(Exec::Sequential, z, f).map_or(true, |c| c.is_some())
    });
    Ok((frames.len() as u64, bad.is_none()))
}

pub fn omega_bf_countermodel() -> OmegaBfReport {
    omega_bf_countermodel_with(Exec::Parallel)
}

/// Refutes `⋀_i □p_i ⊃ □⋀_i p_i` with `p_i = ω ∖ {i}` and contrasts it with
/// the finite instances, which every cufi frame validates.
pub fn omega_bf_countermodel_with(exec: Exec) -> OmegaBfReport {
    let frame = CofiniteFrame;
    let premise = premise_check(&frame);
    let conclusion = conclusion_check(&frame);
    let cufi: LogicClass = LogicClass::new(crate::algebra::Properties::new(false, false, true));

    let mut finite_contrast = Vec::new();
    for k in 1..=3usize {
        let phi = finite_instance(k);
        for m in 1..=3u32 {
            let families = FrameEnumeration::new(m, cufi.flags).map(|e| e.world_families().len() as u64).unwrap_or(0);
            let valid = class_valid_depth_one(exec, &phi, cufi, m).unwrap_or(false);
            finite_contrast.push(ContrastRow {
                k,
                worlds: m,
                method: "uniform frames".into(),
                cases: families * (1u64 << (m as usize * k)),
                valid,
            });
            if m <= 2 {
                let (frames, valid) = direct_sweep(exec, &phi, cufi, m).unwrap_or((0, false));
                finite_contrast.push(ContrastRow {
                    k,
                    worlds: m,
                    method: "all frames".into(),
                    cases: frames,
                    valid,
                });
            }
        }
    }

    let binary = finite_instance(2);
    let non_cufi_witness = (1..=2).find_map(|m| {
        enumerate_frames(m, crate::algebra::Properties::NONE, usize::MAX)
            .ok()?
            .filter(|z| !z.properties().cufi)
            .find_map(|z| frame_countermodel(Exec::Sequential, &z, &binary).ok().flatten())
    });

    OmegaBfReport {
        formula: "/\\_i []p_i -> [] /\\_i p_i".into(),
        world: EVALUATION_WORLD,
        valuation: "p_i = ω ∖ {i}".into(),
        frame_flags: frame.certify(3),
        premise: premise.outcome,
        conclusion: conclusion.outcome,
        finite_contrast,
        non_cufi_witness,
        premise_detail: premise,
        conclusion_detail: conclusion,
    }
}
