//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Each criterion runs the shared suite from `selftest` at full scale and,
//! where an independent brute-force oracle is cheap, cross-checks against it.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nbhd_core::algebra::{separate, FiniteModalAlgebra, MeetFamilySet};
use nbhd_core::frames::enumerate_frames;
use nbhd_core::lab::{class_valid_depth_one, decide_valid, LogicClass};
use nbhd_core::par::Exec;
use nbhd_core::selftest::{self, SuiteResult};
use nbhd_core::semantics::{frame_valid_with, ModelCheck};
use nbhd_core::syntax::parse;

/// Filter axioms checked element by element, without the library's own predicates.
fn brute_force_prime_filter(a: &FiniteModalAlgebra, members: &[u32]) -> bool {
    let has = |x: u32| members.contains(&x);
    let elements: Vec<u32> = a.elements().collect();
    let upward = elements.iter().all(|&x| !has(x) || elements.iter().all(|&y| x & !y != 0 || has(y)));
    let meets = members.iter().all(|&x| members.iter().all(|&y| has(x & y)));
    let proper = !has(0) && has(a.top());
    let prime = elements.iter().all(|&x| elements.iter().all(|&y| !has(x | y) || has(x) || has(y)));
    upward && meets && proper && prime
}

fn rs_oracle() -> (bool, String) {
    let mut pairs = 0;
    for n in 1..=3 {
        let a = FiniteModalAlgebra::from_fn(n, |_| 0).unwrap();
        let s = MeetFamilySet::all_up_to(&a, 2);
        for x in a.elements() {
            for y in a.elements() {
                if x & !y == 0 {
                    continue;
                }
                pairs += 1;
                let f = separate(&a, x, y, &s).unwrap();
                let ok = brute_force_prime_filter(&a, f.elements()) && f.contains(x) && !f.contains(y);
                if !ok {
                    return (false, format!("oracle rejects separation of {x} from {y} at n = {n}"));
                }
            }
        }
    }
    (true, format!("{pairs} separations re-checked by filter axioms"))
}

fn separation_direct_oracle() -> (bool, String) {
    let mut frames = 0;
    for (name, phi, flag) in selftest::axioms() {
        for l in LogicClass::all() {
            let mut valid = true;
            for m in 1..=2 {
                for z in enumerate_frames(m, l.flags, usize::MAX).unwrap() {
                    frames += 1;
                    valid &= frame_valid_with(Exec::Parallel, &z, &phi, 1).unwrap();
                }
            }
            if valid != flag(l.flags) {
                return (false, format!("direct sweep disagrees for {name} on [{l}]"));
            }
        }
    }
    (true, format!("{frames} frames swept directly for m <= 2"))
}

fn decide_oracle() -> (bool, String) {
    let mut checked = 0;
    for s in selftest::CORPUS {
        let phi = parse(s).unwrap();
        for l in LogicClass::all() {
            let verdict = decide_valid(&phi, l).unwrap();
            match &verdict.countermodel {
                Some(m) => {
                    if m.model_valid(&phi).unwrap() || !l.contains_frame(&m.frame) {
                        return (false, format!("bad countermodel for {s} in [{l}]"));
                    }
                }
                None if phi.modal_depth() <= 1 => {
                    for m in 1..=3 {
                        if !class_valid_depth_one(Exec::Parallel, &phi, l, m).unwrap() {
                            return (false, format!("{s} judged valid in [{l}] but refuted on {m} worlds"));
                        }
                    }
                    checked += 1;
                }
                None => {}
            }
        }
    }
    (true, format!("{checked} valid verdicts confirmed on all frames up to 3 worlds"))
}

struct Criterion {
    number: u32,
    budget: Duration,
    run: fn() -> SuiteResult,
    oracle: Option<fn() -> (bool, String)>,
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        Criterion { number: 1, budget: Duration::from_secs(10), run: || selftest::representation_j(Exec::Parallel), oracle: None },
        Criterion { number: 2, budget: Duration::from_secs(10), run: || selftest::representation_jbar(Exec::Parallel), oracle: None },
        Criterion { number: 3, budget: Duration::from_secs(60), run: || selftest::property_transfer(Exec::Parallel, 100_000), oracle: None },
        Criterion { number: 4, budget: Duration::from_secs(30), run: || selftest::rasiowa_sikorski(Exec::Parallel), oracle: Some(rs_oracle) },
        Criterion { number: 5, budget: Duration::from_secs(10), run: || selftest::q_filters(Exec::Parallel, 10_000), oracle: None },
        Criterion { number: 6, budget: Duration::from_secs(60), run: || selftest::class_separation(Exec::Parallel, 3), oracle: Some(separation_direct_oracle) },
        Criterion { number: 7, budget: Duration::from_secs(300), run: || selftest::fragment_model_existence(Exec::Parallel), oracle: Some(decide_oracle) },
        Criterion { number: 8, budget: Duration::from_secs(1), run: selftest::barcan, oracle: None },
        Criterion { number: 9, budget: Duration::from_secs(30), run: || selftest::omega_barcan(Exec::Parallel), oracle: None },
        Criterion { number: 10, budget: Duration::from_secs(10), run: || selftest::epset_algebra(Exec::Parallel, 100_000), oracle: None },
    ];
    let mut all_passed = true;
    for c in criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (oracle_ok, oracle_note) = c.oracle.map_or((true, String::new()), |o| {
            let (ok, note) = o();
            (ok, format!("; oracle: {note}"))
        });
        let in_budget = elapsed <= c.budget;
        let passed = result.passed && oracle_ok && in_budget;
        all_passed &= passed;
        println!(
            "criterion {:>2}: {} | {} | {} | {:.2?} (budget {:?}){}",
            c.number,
            if passed { "PASS" } else { "FAIL" },
            result.name,
            result.detail,
            elapsed,
            c.budget,
            oracle_note,
        );
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
