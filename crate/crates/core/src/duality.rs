//! Frames from algebras, algebras from frames, and the representation map.
//!
//! For a finite algebra the Q-filters for any family set are exactly the
//! prime filters `↑atom`, so the frame built from an algebra on `n` atoms has
//! `n` worlds listed in atom order. The representation map sends `x` to the
//! set of filters containing it.

use serde::{Deserialize, Serialize};

use crate::algebra::{enumerate_prime_filters, FiniteModalAlgebra, Filter, MeetFamilySet};
use crate::error::{Error, Result};
use crate::frames::{upward_closure, NeighborhoodFrame};

pub const MAX_DUAL_WORLDS: u32 = 12;
pub const SEPARATION_CHECK_ATOMS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Neighborhoods are upward closed; needs a monotonic algebra.
    J,
    /// Neighborhoods are exactly the images of boxed elements.
    JBar,
}

/// Counterexamples for each failed flag of an [`EmbeddingReport`].
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Witnesses {
    pub injective: Vec<u32>,
    pub boolean_homomorphism: Vec<u32>,
    pub box_preserved: Vec<u32>,
    /// Indices into the supplied family set.
    pub meets_preserved: Vec<usize>,
    /// Pairs `(y, x)` where the separating filter failed to tell `f(y)` from `f(x)`.
    pub separation: Vec<(u32, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub variant: Variant,
    pub injective: bool,
    pub boolean_homomorphism: bool,
    pub box_preserved: bool,
    pub meets_preserved: bool,
    pub surjective: bool,
    /// Every world of the frame satisfies the Q-condition for the family set.
    pub q_filters: bool,
    /// Number of `(y, x)` pairs whose separation was re-checked directly.
    pub separation_checks: u64,
    pub witnesses: Witnesses,
}

impl EmbeddingReport {
    /// Monomorphism of modal algebras preserving the designated meets.
    pub fn is_embedding(&self) -> bool {
        self.injective && self.boolean_homomorphism && self.box_preserved && self.meets_preserved
    }
}

struct Worlds {
    filters: Vec<Filter>,
}

impl Worlds {
    fn of(a: &FiniteModalAlgebra) -> Self {
        Worlds {
            filters: enumerate_prime_filters(a),
        }
    }

    /// `f(x) = {F : x ∈ F}` as a world-subset code.
    fn image(&self, x: u32) -> u32 {
        self.filters
            .iter()
            .enumerate()
            .filter(|(_, f)| f.contains(x))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// `{f(x) : □x ∈ F}` for each world `F`.
    fn generators(&self, a: &FiniteModalAlgebra) -> Vec<Vec<u32>> {
        self.filters
            .iter()
            .map(|f| {
                let mut gens: Vec<u32> = a
                    .elements()
                    .filter(|&x| f.contains(a.boxed(x)))
                    .map(|x| self.image(x))
                    .collect();
                gens.sort_unstable();
                gens.dedup();
                gens
            })
            .collect()
    }
}

/// The neighborhood frame on the Q-filters of `a` with upward-closed neighborhoods.
pub fn build_j(a: &FiniteModalAlgebra, s: &MeetFamilySet) -> Result<NeighborhoodFrame> {
    if !a.properties().monotonic {
        return Err(Error::Precondition(
            "the algebra is not monotonic; use build_jbar".into(),
        ));
    }
    s.validate(a)?;
    let worlds = Worlds::of(a);
    let m = a.atom_count();
    let nbhd = worlds
        .generators(a)
        .into_iter()
        .map(|gens| upward_closure(&gens, m))
        .collect();
    NeighborhoodFrame::new(m, nbhd)
}

/// The neighborhood frame on the Q-filters of `a` without upward closure.
pub fn build_jbar(a: &FiniteModalAlgebra, s: &MeetFamilySet) -> Result<NeighborhoodFrame> {
    s.validate(a)?;
    let worlds = Worlds::of(a);
    NeighborhoodFrame::new(a.atom_count(), worlds.generators(a))
}

pub fn build(a: &FiniteModalAlgebra, s: &MeetFamilySet, variant: Variant) -> Result<NeighborhoodFrame> {
    match variant {
        Variant::J => build_j(a, s),
        Variant::JBar => build_jbar(a, s),
    }
}

/// The dual algebra: powerset of worlds with `□X = {c : X ∈ 𝒱(c)}`.
pub fn build_k(z: &NeighborhoodFrame) -> Result<FiniteModalAlgebra> {
    let m = z.world_count();
    if m > MAX_DUAL_WORLDS {
        return Err(Error::Resource(format!(
            "dual algebra of a {m}-world frame exceeds {MAX_DUAL_WORLDS} atoms"
        )));
    }
    FiniteModalAlgebra::from_fn(m, |x| z.box_of(x))
}

/// The representation map into the dual of `build(a, s, variant)` and its verification.
pub fn stone_map(
    a: &FiniteModalAlgebra,
    s: &MeetFamilySet,
    variant: Variant,
) -> Result<(Vec<u32>, EmbeddingReport)> {
    let frame = build(a, s, variant)?;
    let k = build_k(&frame)?;
    let worlds = Worlds::of(a);
    let f: Vec<u32> = a.elements().map(|x| worlds.image(x)).collect();
    let img = |x: u32| f[x as usize];
    let mut w = Witnesses::default();

    let mut seen = vec![None::<u32>; k.size() as usize];
    for x in a.elements() {
        match seen[img(x) as usize] {
            Some(_) => w.injective.push(x),
            None => seen[img(x) as usize] = Some(x),
        }
    }
    let surjective = seen.iter().all(Option::is_some);

    for x in a.elements() {
        let ok = img(a.complement(x)) == k.complement(img(x))
            && a.elements().all(|y| img(x & y) == img(x) & img(y));
        if !ok {
            w.boolean_homomorphism.push(x);
        }
    }
    if img(0) != 0 {
        w.boolean_homomorphism.push(0);
    }
    if img(a.top()) != k.top() {
        w.boolean_homomorphism.push(a.top());
    }

    for x in a.elements() {
        if img(a.boxed(x)) != k.boxed(img(x)) {
            w.box_preserved.push(x);
        }
    }

    for (i, fam) in s.families.iter().enumerate() {
        let lhs = img(a.meet_all(fam.iter().copied()));
        let rhs = k.meet_all(fam.iter().map(|&x| img(x)));
        if lhs != rhs {
            w.meets_preserved.push(i);
        }
    }

    let q_filters = worlds.filters.iter().all(|g| {
        s.families.iter().all(|fam| {
            !fam.iter().all(|&x| g.contains(x)) || g.contains(a.meet_all(fam.iter().copied()))
        })
    });

    // Whenever some world has □y but not □x, the two must be told apart by a
    // Q-filter: y ≰ x under monotonicity, y ≠ x in general. Quadratic in the
    // carrier, so only run up to SEPARATION_CHECK_ATOMS atoms.
    let mut separation_checks = 0u64;
    let pairs = if a.atom_count() <= SEPARATION_CHECK_ATOMS {
        a.elements()
    } else {
        0..0
    };
    for x in pairs {
        let bx = a.boxed(x);
        for y in a.elements() {
            if a.boxed(y) & !bx == 0 {
                continue;
            }
            separation_checks += 1;
            let (from, to) = match variant {
                Variant::J => (y, x),
                Variant::JBar if !a.leq(y, x) => (y, x),
                Variant::JBar => (x, y),
            };
            let separated = crate::algebra::separate(a, from, to, s)
                .ok()
                .and_then(|g| worlds.filters.iter().position(|h| *h == g))
                .is_some_and(|gi| img(from) >> gi & 1 == 1 && img(to) >> gi & 1 == 0);
            if !separated {
                w.separation.push((y, x));
            }
        }
    }

    let report = EmbeddingReport {
        variant,
        injective: w.injective.is_empty(),
        boolean_homomorphism: w.boolean_homomorphism.is_empty(),
        box_preserved: w.box_preserved.is_empty(),
        meets_preserved: w.meets_preserved.is_empty(),
        surjective,
        q_filters,
        separation_checks,
        witnesses: w,
    };
    Ok((f, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{is_algebra_homomorphism, Properties};

    fn alg(n: u32, table: &[u32]) -> FiniteModalAlgebra {
        FiniteModalAlgebra::new(n, table.to_vec()).unwrap()
    }

    #[test]
    fn j_examples() {
        let s = MeetFamilySet::empty();
        let z = build_j(&alg(1, &[0, 1]), &s).unwrap();
        assert_eq!(z.all_neighborhoods(), &[vec![1]]);
        let z = build_j(&alg(2, &[0, 1, 2, 3]), &s).unwrap();
        assert_eq!(z.neighborhoods(0), &[0b01, 0b11]);
        assert_eq!(z.neighborhoods(1), &[0b10, 0b11]);
        let z = build_j(&alg(2, &[3, 3, 3, 3]), &s).unwrap();
        assert_eq!(z.neighborhoods(0), &[0, 1, 2, 3]);
        assert_eq!(z.neighborhoods(1), &[0, 1, 2, 3]);
        assert!(matches!(build_j(&alg(2, &[3, 2, 1, 0]), &s), Err(Error::Precondition(_))));
    }

    #[test]
    fn jbar_examples() {
        let s = MeetFamilySet::empty();
        let z = build_jbar(&alg(1, &[0, 1]), &s).unwrap();
        assert_eq!(z.all_neighborhoods(), &[vec![1]]);
        let z = build_jbar(&alg(2, &[3, 2, 1, 0]), &s).unwrap();
        // world 0 is ↑1; ¬x ∈ ↑1 for x ∈ {0, 2}
        assert_eq!(z.neighborhoods(0), &[0, 0b10]);
        let z = build_jbar(&alg(2, &[0, 0, 0, 0]), &s).unwrap();
        assert!(z.all_neighborhoods().iter().all(Vec::is_empty));
    }

    #[test]
    fn k_examples() {
        let k = build_k(&NeighborhoodFrame::new(1, vec![vec![]]).unwrap()).unwrap();
        assert_eq!(k.box_table(), &[0, 0]);
        let k = build_k(&NeighborhoodFrame::new(1, vec![vec![1]]).unwrap()).unwrap();
        assert_eq!(k.box_table(), &[0, 1]);
        let k = build_k(&NeighborhoodFrame::new(1, vec![vec![0]]).unwrap()).unwrap();
        assert_eq!(k.box_table(), &[1, 0]);
        let big = NeighborhoodFrame::from_fn(13, |_| vec![]).unwrap();
        assert!(matches!(build_k(&big), Err(Error::Resource(_))));
    }

    #[test]
    fn stone_map_examples() {
        let (f, r) = stone_map(&alg(1, &[0, 1]), &MeetFamilySet::empty(), Variant::J).unwrap();
        assert_eq!(f, vec![0, 1]);
        assert!(r.is_embedding() && r.surjective);

        let (_, r) = stone_map(&alg(2, &[3, 2, 1, 0]), &MeetFamilySet::empty(), Variant::JBar).unwrap();
        assert!(r.is_embedding(), "{r:?}");

        let s = MeetFamilySet::new(vec![vec![1, 2]]);
        let (f, r) = stone_map(&alg(2, &[0, 1, 2, 3]), &s, Variant::J).unwrap();
        assert_eq!(f[0], f[1] & f[2]);
        assert!(r.meets_preserved);
    }

    #[test]
    fn stone_map_is_a_homomorphism_into_k() {
        for table in 0..256u32 {
            let a = FiniteModalAlgebra::from_fn(2, |x| table >> (2 * x) & 3).unwrap();
            if !a.properties().monotonic {
                continue;
            }
            let s = MeetFamilySet::empty();
            let (f, _) = stone_map(&a, &s, Variant::J).unwrap();
            let k = build_k(&build_j(&a, &s).unwrap()).unwrap();
            assert!(is_algebra_homomorphism(&f, &a, &k), "table {table}");
        }
    }

    #[test]
    fn round_trip_recovers_box_table() {
        for table in 0..256u32 {
            let a = FiniteModalAlgebra::from_fn(2, |x| table >> (2 * x) & 3).unwrap();
            let k = build_k(&build_jbar(&a, &MeetFamilySet::empty()).unwrap()).unwrap();
            assert_eq!(k.box_table(), a.box_table());
            if a.properties().monotonic {
                let kj = build_k(&build_j(&a, &MeetFamilySet::empty()).unwrap()).unwrap();
                assert_eq!(kj.box_table(), a.box_table());
            }
        }
    }

    #[test]
    fn frame_flags_follow_the_algebra() {
        for table in 0..256u32 {
            let a = FiniteModalAlgebra::from_fn(2, |x| table >> (2 * x) & 3).unwrap();
            let p = a.properties();
            let zb = build_jbar(&a, &MeetFamilySet::empty()).unwrap().properties();
            assert!(zb.includes(Properties::new(false, p.topped, p.cufi)));
            if p.monotonic {
                let zj = build_j(&a, &MeetFamilySet::empty()).unwrap().properties();
                assert!(zj.includes(p));
            }
        }
    }
}
