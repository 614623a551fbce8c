//! Finite neighborhood frames.
//!
//! Worlds are `0..m`; a world subset is a bitmask code below `2^m`. Each
//! world carries a sorted, duplicate-free list of subset codes.

use serde::{Deserialize, Serialize};

use crate::algebra::Properties;
use crate::error::{Error, Result};

pub const MAX_FRAME_WORLDS: u32 = 16;
pub const MAX_ENUMERATION_WORLDS: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FrameJson", into = "FrameJson")]
pub struct NeighborhoodFrame {
    worlds: u32,
    nbhd: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct FrameJson {
    worlds: u32,
    nbhd: Vec<Vec<u32>>,
}

impl TryFrom<FrameJson> for NeighborhoodFrame {
    type Error = Error;
    fn try_from(j: FrameJson) -> Result<Self> {
        NeighborhoodFrame::new(j.worlds, j.nbhd)
    }
}

impl From<NeighborhoodFrame> for FrameJson {
    fn from(z: NeighborhoodFrame) -> Self {
        FrameJson {
            worlds: z.worlds,
            nbhd: z.nbhd,
        }
    }
}

impl NeighborhoodFrame {
    pub fn new(worlds: u32, mut nbhd: Vec<Vec<u32>>) -> Result<Self> {
        if worlds == 0 || worlds > MAX_FRAME_WORLDS {
            return Err(Error::Construction(format!(
                "world count {worlds} outside 1..={MAX_FRAME_WORLDS}"
            )));
        }
        if nbhd.len() != worlds as usize {
            return Err(Error::Construction(format!(
                "{} neighborhood lists for {worlds} worlds",
                nbhd.len()
            )));
        }
        let limit = 1u32 << worlds;
        for (c, fam) in nbhd.iter_mut().enumerate() {
            if let Some(&x) = fam.iter().find(|&&x| x >= limit) {
                return Err(Error::Construction(format!(
                    "world {c}: subset code {x} outside 0..{limit}"
                )));
            }
            fam.sort_unstable();
            fam.dedup();
        }
        Ok(NeighborhoodFrame { worlds, nbhd })
    }

    pub fn from_fn(worlds: u32, f: impl Fn(u32) -> Vec<u32>) -> Result<Self> {
        Self::new(worlds, (0..worlds).map(f).collect())
    }

    pub fn world_count(&self) -> u32 {
        self.worlds
    }

    /// The code of the whole world set.
    pub fn all_worlds(&self) -> u32 {
        (1u32 << self.worlds) - 1
    }

    pub fn neighborhoods(&self, c: u32) -> &[u32] {
        &self.nbhd[c as usize]
    }

    pub fn all_neighborhoods(&self) -> &[Vec<u32>] {
        &self.nbhd
    }

    /// `X ∈ 𝒱(c)`.
    pub fn has_neighborhood(&self, c: u32, x: u32) -> bool {
        self.nbhd[c as usize].binary_search(&x).is_ok()
    }

    /// `{c : X ∈ 𝒱(c)}`.
    pub fn box_of(&self, x: u32) -> u32 {
        (0..self.worlds)
            .filter(|&c| self.has_neighborhood(c, x))
            .fold(0, |acc, c| acc | 1 << c)
    }

    pub fn properties(&self) -> Properties {
        check_frame_properties(self)
    }
}

/// All supersets (within `m` worlds) of members of `family`, sorted.
pub fn upward_closure(family: &[u32], m: u32) -> Vec<u32> {
    let limit = 1u32 << m;
    (0..limit)
        .filter(|&y| family.iter().any(|&x| x & !y == 0))
        .collect()
}

/// Flags of one neighborhood family over `m` worlds (sorted input).
pub fn family_properties(family: &[u32], m: u32) -> Properties {
    let full = (1u32 << m) - 1;
    let has = |x: u32| family.binary_search(&x).is_ok();
    let monotonic = family.iter().all(|&x| {
        // every superset: x | s for s ranging over subsets of the complement
        let free = full & !x;
        let mut s = free;
        loop {
            if !has(x | s) {
                return false;
            }
            if s == 0 {
                return true;
            }
            s = (s - 1) & free;
        }
    });
    let cufi = family
        .iter()
        .all(|&x| family.iter().all(|&y| has(x & y)));
    Properties {
        monotonic,
        topped: has(full),
        cufi,
    }
}

/// Per-world conjunction of the three closure conditions; cufi is checked on pairs.
pub fn check_frame_properties(z: &NeighborhoodFrame) -> Properties {
    z.nbhd.iter().fold(Properties::ALL, |acc, fam| {
        let p = family_properties(fam, z.worlds);
        Properties::new(
            acc.monotonic && p.monotonic,
            acc.topped && p.topped,
            acc.cufi && p.cufi,
        )
    })
}

/// `f⁻¹[X] ∈ 𝒱₁(c) ⇔ X ∈ 𝒱₂(f(c))` for every world `c` and subset `X`.
pub fn is_frame_homomorphism(f: &[u32], z1: &NeighborhoodFrame, z2: &NeighborhoodFrame) -> bool {
    if f.len() != z1.worlds as usize || f.iter().any(|&d| d >= z2.worlds) {
        return false;
    }
    let preimage = |x: u32| {
        f.iter()
            .enumerate()
            .filter(|&(_, &d)| x >> d & 1 == 1)
            .fold(0u32, |acc, (c, _)| acc | 1 << c)
    };
    (0..z1.worlds).all(|c| {
        (0..1u32 << z2.worlds)
            .all(|x| z1.has_neighborhood(c, preimage(x)) == z2.has_neighborhood(f[c as usize], x))
    })
}

/// Encodes a family over `m ≤ 4` worlds as a bitmask over the `2^m` subsets.
pub fn family_to_mask(family: &[u32]) -> u64 {
    family.iter().fold(0u64, |acc, &x| acc | 1 << x)
}

pub fn mask_to_family(mask: u64, m: u32) -> Vec<u32> {
    (0..1u32 << m).filter(|&x| mask >> x & 1 == 1).collect()
}

/// Every frame on `m` worlds whose flags include `required`, in a fixed order.
///
/// The flags are per-world conditions, so the admissible frames are the
/// product of the admissible per-world families. Frames are indexed in
/// mixed radix with world 0 as the most significant digit, which lets
/// callers split the index range across workers.
#[derive(Debug, Clone)]
pub struct FrameEnumeration {
    worlds: u32,
    families: Vec<u64>,
    total: u128,
}

impl FrameEnumeration {
    pub fn new(worlds: u32, required: Properties) -> Result<Self> {
        if worlds == 0 || worlds > MAX_ENUMERATION_WORLDS {
            return Err(Error::Precondition(format!(
                "frame enumeration supports 1..={MAX_ENUMERATION_WORLDS} worlds, got {worlds}"
            )));
        }
        let subsets = 1u32 << worlds;
        let families: Vec<u64> = (0..1u64 << subsets)
            .filter(|&mask| family_properties(&mask_to_family(mask, worlds), worlds).includes(required))
            .collect();
        let total = (families.len() as u128).pow(worlds);
        Ok(FrameEnumeration {
            worlds,
            families,
            total,
        })
    }

    pub fn len(&self) -> u128 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Admissible per-world families as subset bitmasks.
    pub fn world_families(&self) -> &[u64] {
        &self.families
    }

    pub fn frame_at(&self, mut index: u128) -> NeighborhoodFrame {
        assert!(index < self.total, "frame index out of range");
        let base = self.families.len() as u128;
        let mut nbhd = vec![Vec::new(); self.worlds as usize];
        for slot in nbhd.iter_mut().rev() {
            *slot = mask_to_family(self.families[(index % base) as usize], self.worlds);
            index /= base;
        }
        NeighborhoodFrame {
            worlds: self.worlds,
            nbhd,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = NeighborhoodFrame> + '_ {
        let mut i = 0u128;
        std::iter::from_fn(move || {
            (i < self.total).then(|| {
                i += 1;
                self.frame_at(i - 1)
            })
        })
    }
}

/// The admissible frames on `m` worlds, stopping after `budget` of them.
pub fn enumerate_frames(
    m: u32,
    required: Properties,
    budget: usize,
) -> Result<impl Iterator<Item = NeighborhoodFrame>> {
    let en = FrameEnumeration::new(m, required)?;
    let count = en.len().min(budget as u128);
    Ok((0..count).map(move |i| en.frame_at(i)))
}
