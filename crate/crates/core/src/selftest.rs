//! Invariant suites shared by the `selftest` command, the acceptance tests
//! and the benchmarks. Each suite returns a [`SuiteResult`] instead of
//! panicking so callers can report every suite.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::algebra::{
    check_algebra_properties, enumerate_prime_filters, is_q_filter, separate, FiniteModalAlgebra, MeetFamilySet,
    Properties,
};
use crate::duality::{build, build_k, stone_map, Variant};
use crate::epsets::{ep_principal_ultrafilter_is_q, ep_separate, EPSet, ParametricFamily};
use crate::frames::{check_frame_properties, mask_to_family, NeighborhoodFrame};
use crate::lab::{
    bf_countermodel, class_valid_depth_one, decide_valid_with, model_existence, omega_bf_countermodel_with,
    DecideOptions, LogicClass,
};
use crate::par::{self, Exec};
use crate::semantics::ModelCheck;
use crate::syntax::{parse, Formula};

pub const SEED: u64 = 0x6e62_6864;

/// Formulas with basis size at most five used by the model-existence suite.
pub const CORPUS: [&str; 24] = [
    "[](p & q) -> ([]p & []q)",
    "[]T",
    "([]p & []q) -> [](p & q)",
    "[](p & q) <-> [](q & p)",
    "[]p -> [](p | q)",
    "~[]F",
    "[]p -> p",
    "[]p | []~p",
    "[][]p -> []p",
    "<>p <-> ~[]~p",
    "[](p -> q) -> ([]p -> []q)",
    "[]p -> <>p",
    "[](p | ~p)",
    "([]p & [](p -> q)) -> []q",
    "p -> []p",
    "[]p <-> []~~p",
    "[](p & p) <-> []p",
    "[]T -> [](p | ~p)",
    "<>T",
    "[](p & q) -> []p",
    "([]p & []q) -> []q",
    "~[]p | []p",
    "[]F -> []p",
    "[](p & ~p) -> []F",
];

pub const M_AXIOM: &str = "[](p & q) -> ([]p & []q)";
pub const N_AXIOM: &str = "[]T";
pub const C_AXIOM: &str = "([]p & []q) -> [](p & q)";

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub detail: String,
    pub millis: u128,
}

fn timed(name: &str, body: impl FnOnce() -> (bool, u64, String)) -> SuiteResult {
    let start = Instant::now();
    let (passed, cases, detail) = body();
    SuiteResult {
        name: name.to_string(),
        passed,
        cases,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

/// Every algebra on `n` atoms, Box tables in numeric order.
pub fn all_algebras(n: u32) -> Vec<FiniteModalAlgebra> {
    let size = 1u32 << n;
    let tables = (size as u64).pow(size);
    (0..tables)
        .map(|mut t| {
            let table: Vec<u32> = (0..size)
                .map(|_| {
                    let v = (t % size as u64) as u32;
                    t /= size as u64;
                    v
                })
                .collect();
            FiniteModalAlgebra::new(n, table).expect("entries are in range")
        })
        .collect()
}

fn representation(exec: Exec, variant: Variant) -> (bool, u64, String) {
    let algebras: Vec<FiniteModalAlgebra> = all_algebras(2)
        .into_iter()
        .filter(|a| variant == Variant::JBar || check_algebra_properties(a).monotonic)
        .collect();
    let failures = par::map_slice(exec, &algebras, |a| {
        let s = MeetFamilySet::all_up_to(a, 2);
        stone_map(a, &s, variant).map_or(true, |(_, r)| !r.is_embedding())
    })
    .into_iter()
    .filter(|&bad| bad)
    .count();
    (
        failures == 0 && !algebras.is_empty(),
        algebras.len() as u64,
        format!("{} tables, {failures} failures", algebras.len()),
    )
}

/// Criterion 1: `J` represents every monotonic 2-atom algebra.
pub fn representation_j(exec: Exec) -> SuiteResult {
    timed("representation via J (monotonic, n = 2)", || representation(exec, Variant::J))
}

/// Criterion 2: `J̄` represents every 2-atom algebra.
pub fn representation_jbar(exec: Exec) -> SuiteResult {
    timed("representation via J-bar (all 256 tables, n = 2)", || representation(exec, Variant::JBar))
}

fn random_frame(rng: &mut StdRng, m: u32) -> NeighborhoodFrame {
    let subsets = 1u32 << m;
    let nbhd = (0..m).map(|_| mask_to_family(rng.gen_range(0..1u64 << subsets), m)).collect();
    NeighborhoodFrame::new(m, nbhd).expect("families are in range")
}

/// Criterion 3: flags transfer between algebras and their dual frames.
pub fn property_transfer(exec: Exec, random_frames: usize) -> SuiteResult {
    timed("property transfer", || {
        let mut violations = 0u64;
        let mut cases = 0u64;
        for n in 1..=2 {
            let algebras = all_algebras(n);
            cases += algebras.len() as u64;
            violations += par::map_slice(exec, &algebras, |a| {
                let flags = check_algebra_properties(a);
                let mut bad = 0u64;
                let jbar = build(a, &MeetFamilySet::empty(), Variant::JBar).expect("small algebra");
                bad += u64::from(check_frame_properties(&jbar) != flags);
                if flags.monotonic {
                    let j = build(a, &MeetFamilySet::empty(), Variant::J).expect("monotonic");
                    bad += u64::from(check_frame_properties(&j) != flags);
                }
                bad
            })
            .into_iter()
            .sum::<u64>();
        }
        let mut frames: Vec<NeighborhoodFrame> = Vec::new();
        for m in 1..=2 {
            frames.extend(crate::frames::enumerate_frames(m, Properties::NONE, usize::MAX).expect("small m"));
        }
        let mut rng = StdRng::seed_from_u64(SEED);
        frames.extend((0..random_frames).map(|_| random_frame(&mut rng, 3)));
        cases += frames.len() as u64;
        violations += par::map_slice(exec, &frames, |z| {
            let k = build_k(z).expect("small frame");
            u64::from(check_algebra_properties(&k) != check_frame_properties(z))
        })
        .into_iter()
        .sum::<u64>();
        (violations == 0, cases, format!("{cases} algebras and frames, {violations} violations"))
    })
}

/// Criterion 4: `separate` yields a prime Q-filter containing `a` and omitting `b`.
pub fn rasiowa_sikorski(exec: Exec) -> SuiteResult {
    timed("Rasiowa-Sikorski separation (n <= 3)", || {
        let mut jobs: Vec<(FiniteModalAlgebra, MeetFamilySet)> = Vec::new();
        for n in 1..=3 {
            let a = FiniteModalAlgebra::from_fn(n, |x| x).expect("identity box");
            let size = a.size();
            for fam in 0..1u64 << size {
                let family: Vec<u32> = (0..size).filter(|&x| fam >> x & 1 == 1).collect();
                jobs.push((a.clone(), MeetFamilySet::new(vec![family])));
            }
        }
        for a in all_algebras(2) {
            let s = MeetFamilySet::all_up_to(&a, 2);
            jobs.push((a, s));
        }
        let results = par::map_slice(exec, &jobs, |(alg, s)| {
            let mut cases = 0u64;
            let mut bad = 0u64;
            for a in alg.elements() {
                for b in alg.elements() {
                    if alg.leq(a, b) {
                        continue;
                    }
                    cases += 1;
                    let ok = separate(alg, a, b, s).is_ok_and(|f| {
                        f.contains(a)
                            && !f.contains(b)
                            && f.is_prime(alg)
                            && is_q_filter(alg, &f, s).unwrap_or(false)
                    });
                    bad += u64::from(!ok);
                }
            }
            (cases, bad)
        });
        let cases: u64 = results.iter().map(|r| r.0).sum();
        let bad: u64 = results.iter().map(|r| r.1).sum();
        (bad == 0 && cases > 0, cases, format!("{cases} pairs over {} (algebra, S) jobs, {bad} failures", jobs.len()))
    })
}

pub fn random_epset(rng: &mut StdRng, max_prefix: usize, max_period: usize) -> EPSet {
    let l = rng.gen_range(0..=max_prefix);
    let p = rng.gen_range(1..=max_period);
    let prefix = (0..l).map(|_| rng.gen_bool(0.5)).collect();
    let period = (0..p).map(|_| rng.gen_bool(0.5)).collect();
    EPSet::new(prefix, period).expect("non-empty period")
}

/// Criterion 5: prime filters are Q-filters on finite algebras; principal
/// ultrafilters of the EPSet algebra are Q-filters; `ep_separate` postconditions.
pub fn q_filters(exec: Exec, samples: usize) -> SuiteResult {
    timed("Q-filters and EPSet separation", || {
        let mut cases = 0u64;
        let mut bad = 0u64;
        for n in 1..=3 {
            let a = FiniteModalAlgebra::from_fn(n, |x| x).expect("identity box");
            let s = MeetFamilySet::all_up_to(&a, a.size() as usize);
            for f in enumerate_prime_filters(&a) {
                cases += 1;
                bad += u64::from(!is_q_filter(&a, &f, &s).unwrap_or(false));
            }
        }
        let families = [ParametricFamily::CoSingleton, ParametricFamily::Tail];
        for n in 0..=100 {
            cases += 1;
            bad += u64::from(!ep_principal_ultrafilter_is_q(n, &families));
        }
        let mut rng = StdRng::seed_from_u64(SEED ^ 5);
        let pairs: Vec<(EPSet, EPSet)> = (0..samples)
            .map(|_| (random_epset(&mut rng, 6, 6), random_epset(&mut rng, 6, 6)))
            .collect();
        bad += par::map_slice(exec, &pairs, |(a, b)| {
            let ok = match ep_separate(a, b, &families) {
                Ok(n) => a.contains(n) && !b.contains(n) && ep_principal_ultrafilter_is_q(n, &families),
                Err(_) => a.is_subset(b),
            };
            u64::from(!ok)
        })
        .into_iter()
        .sum::<u64>();
        cases += samples as u64;
        (bad == 0, cases, format!("{cases} checks, {bad} failures"))
    })
}

/// Name, formula and the frame flag it characterises.
pub type Characterisation = (&'static str, Formula, fn(Properties) -> bool);

/// The three axioms with the flag each one characterises.
pub fn axioms() -> [Characterisation; 3] {
    [
        ("M", parse(M_AXIOM).expect("axiom parses"), |p| p.monotonic),
        ("N", parse(N_AXIOM).expect("axiom parses"), |p| p.topped),
        ("C", parse(C_AXIOM).expect("axiom parses"), |p| p.cufi),
    ]
}

/// Criterion 6: each axiom is valid exactly on the classes carrying its flag.
pub fn class_separation(exec: Exec, max_worlds: u32) -> SuiteResult {
    timed("class separation of M, N, C", || {
        let mut cases = 0u64;
        let mut mismatches = Vec::new();
        for (name, phi, flag) in axioms() {
            for l in LogicClass::all() {
                let mut valid = true;
                for m in 1..=max_worlds {
                    cases += 1;
                    valid &= class_valid_depth_one(exec, &phi, l, m).unwrap_or(false);
                }
                if valid != flag(l.flags) {
                    mismatches.push(format!("{name} on [{l}]"));
                }
            }
        }
        (mismatches.is_empty(), cases, format!("{cases} (axiom, class, size) checks; mismatches: {mismatches:?}"))
    })
}

/// Criterion 7: model existence for every corpus formula in every class.
pub fn fragment_model_existence(exec: Exec) -> SuiteResult {
    timed("fragment model existence", || {
        let opts = DecideOptions {
            exec,
            ..DecideOptions::default()
        };
        let mut cases = 0u64;
        let mut failures = Vec::new();
        for s in CORPUS {
            let phi = parse(s).expect("corpus parses");
            for l in LogicClass::all() {
                cases += 1;
                let ok = model_existence(std::slice::from_ref(&phi), l, &opts).is_ok_and(|r| {
                    let oracle = decide_valid_with(&phi, l, &opts).map(|v| v.is_valid());
                    r.holds()
                        && l.contains_frame(&r.model.frame)
                        && oracle.is_ok_and(|v| r.model.model_valid(&phi).is_ok_and(|m| m == v))
                });
                if !ok {
                    failures.push(format!("{s} in [{l}]"));
                }
            }
        }
        (failures.is_empty(), cases, format!("{cases} (formula, class) pairs; failures: {failures:?}"))
    })
}

/// Criterion 8.
pub fn barcan() -> SuiteResult {
    timed("Barcan formula refuted", || {
        let r = bf_countermodel();
        (r.verified(), 1, format!("premise {:?}, conclusion {:?}", r.premise, r.conclusion))
    })
}

/// Criterion 9.
pub fn omega_barcan(exec: Exec) -> SuiteResult {
    timed("omega-Barcan formula refuted", || {
        let r = omega_bf_countermodel_with(exec);
        let rows = r.finite_contrast.len() as u64;
        (
            r.verified(),
            rows,
            format!(
                "premise {:?}, conclusion {:?}, {rows} finite-instance sweeps all valid: {}",
                r.premise,
                r.conclusion,
                r.finite_contrast.iter().all(|c| c.valid)
            ),
        )
    })
}

fn epset_case(x: &EPSet, y: &EPSet, raw: (&[bool], &[bool])) -> bool {
    let window = x.horizon().max(y.horizon()) * 3 + 8;
    let (union, meet, diff, comp) = (x.union(y), x.intersection(y), x.difference(y), x.complement());
    let ops_agree = (0..window).all(|i| {
        let (a, b) = (x.contains(i), y.contains(i));
        union.contains(i) == (a || b)
            && meet.contains(i) == (a && b)
            && diff.contains(i) == (a && !b)
            && comp.contains(i) == !a
    });
    let subset = diff.is_empty() == (0..window).all(|i| !x.contains(i) || y.contains(i))
        && x.is_subset(y) == diff.is_empty();
    let equality = (x == y) == (0..window).all(|i| x.contains(i) == y.contains(i));
    let laws = union.complement() == comp.intersection(&y.complement())
        && comp.complement() == *x
        && x.union(&comp) == EPSet::full()
        && meet == y.intersection(x);
    // canonical form: the same set written redundantly canonicalizes identically
    let (prefix, period) = raw;
    let mut long_prefix = prefix.to_vec();
    long_prefix.extend_from_slice(period);
    let doubled: Vec<bool> = period.iter().chain(period).copied().collect();
    let redundant = EPSet::new(long_prefix, doubled).expect("non-empty period");
    let direct = EPSet::new(prefix.to_vec(), period.to_vec()).expect("non-empty period");
    let canonical = redundant == direct
        && EPSet::new(direct.prefix().to_vec(), direct.period().to_vec()).as_ref() == Ok(&direct)
        && (0..window).all(|i| {
            let member = if i < prefix.len() { prefix[i] } else { period[(i - prefix.len()) % period.len()] };
            direct.contains(i) == member
        });
    let cofinite = x.is_cofinite() == x.complement().is_finite();
    ops_agree && subset && equality && laws && canonical && cofinite
}

/// Criterion 10: Boolean laws and canonical forms of EPSets against membership sampling.
pub fn epset_algebra(exec: Exec, samples: usize) -> SuiteResult {
    timed("EPSet Boolean algebra", || {
        let mut rng = StdRng::seed_from_u64(SEED ^ 10);
        let cases: Vec<(EPSet, EPSet, Vec<bool>, Vec<bool>)> = (0..samples)
            .map(|_| {
                let x = random_epset(&mut rng, 5, 4);
                let y = random_epset(&mut rng, 5, 4);
                let l = rng.gen_range(0..=5);
                let p = rng.gen_range(1..=4);
                let prefix = (0..l).map(|_| rng.gen_bool(0.5)).collect();
                let period = (0..p).map(|_| rng.gen_bool(0.5)).collect();
                (x, y, prefix, period)
            })
            .collect();
        let bad = par::map_slice(exec, &cases, |(x, y, pre, per)| u64::from(!epset_case(x, y, (pre, per))))
            .into_iter()
            .sum::<u64>();
        (bad == 0, samples as u64, format!("{samples} random cases, {bad} failures"))
    })
}

/// Every suite; `exhaustive` selects the acceptance-scale parameters.
pub fn run_all(exec: Exec, exhaustive: bool) -> Vec<SuiteResult> {
    let scale = |full: usize, quick: usize| if exhaustive { full } else { quick };
    vec![
        representation_j(exec),
        representation_jbar(exec),
        property_transfer(exec, scale(100_000, 5_000)),
        rasiowa_sikorski(exec),
        q_filters(exec, scale(10_000, 1_000)),
        class_separation(exec, if exhaustive { 3 } else { 2 }),
        fragment_model_existence(exec),
        barcan(),
        omega_barcan(exec),
        epset_algebra(exec, scale(100_000, 5_000)),
    ]
}
