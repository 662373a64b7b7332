//! Skill identifiers and skill sets.
//!
//! Skill names are interned to dense ids per instance. Sets over small
//! universes (at most [`BITSET_MAX_UNIVERSE`] skills) are fixed-width bit
//! vectors; larger universes fall back to sorted id lists. All sets built for
//! one instance share the same representation.

use std::fmt;

/// Largest universe stored as a bit vector.
pub const BITSET_MAX_UNIVERSE: usize = 4096;

/// Dense index into an instance's skill universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SkillId(pub u32);

impl SkillId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SkillId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug)]
pub enum SkillSet {
    Bits(Vec<u64>),
    Sorted(Vec<u32>),
}

impl SkillSet {
    /// Empty set sized for `universe` skills.
    pub fn empty(universe: usize) -> Self {
        if universe <= BITSET_MAX_UNIVERSE {
            SkillSet::Bits(vec![0; universe.div_ceil(64)])
        } else {
            SkillSet::Sorted(Vec::new())
        }
    }

    pub fn from_ids<I: IntoIterator<Item = SkillId>>(universe: usize, ids: I) -> Self {
        let mut set = Self::empty(universe);
        match &mut set {
            SkillSet::Bits(words) => {
                for id in ids {
                    let i = id.index();
                    assert!(i < universe, "skill id {i} outside universe {universe}");
                    words[i / 64] |= 1 << (i % 64);
                }
            }
            SkillSet::Sorted(v) => {
                v.extend(ids.into_iter().map(|id| {
                    assert!(id.index() < universe, "skill id {id} outside universe {universe}");
                    id.0
                }));
                v.sort_unstable();
                v.dedup();
            }
        }
        set
    }

    pub fn len(&self) -> usize {
        match self {
            SkillSet::Bits(w) => w.iter().map(|x| x.count_ones() as usize).sum(),
            SkillSet::Sorted(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            SkillSet::Bits(w) => w.iter().all(|&x| x == 0),
            SkillSet::Sorted(v) => v.is_empty(),
        }
    }

    pub fn contains(&self, id: SkillId) -> bool {
        let i = id.index();
        match self {
            SkillSet::Bits(w) => w.get(i / 64).is_some_and(|x| x & (1 << (i % 64)) != 0),
            SkillSet::Sorted(v) => v.binary_search(&id.0).is_ok(),
        }
    }

    /// Ids in increasing order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = SkillId> + '_> {
        match self {
            SkillSet::Bits(w) => Box::new(w.iter().enumerate().flat_map(|(k, &word)| {
                let mut bits = word;
                std::iter::from_fn(move || {
                    if bits == 0 {
                        return None;
                    }
                    let b = bits.trailing_zeros();
                    bits &= bits - 1;
                    Some(SkillId(k as u32 * 64 + b))
                })
            })),
            SkillSet::Sorted(v) => Box::new(v.iter().map(|&x| SkillId(x))),
        }
    }

    pub fn intersection_len(&self, other: &SkillSet) -> usize {
        match (self, other) {
            (SkillSet::Bits(a), SkillSet::Bits(b)) => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x & y).count_ones() as usize)
                .sum(),
            (SkillSet::Sorted(a), SkillSet::Sorted(b)) => sorted_intersection_len(a, b),
            _ => self.iter().filter(|&id| other.contains(id)).count(),
        }
    }

    pub fn union_len(&self, other: &SkillSet) -> usize {
        self.len() + other.len() - self.intersection_len(other)
    }

    /// `self ∪= other`.
    pub fn insert_all(&mut self, other: &SkillSet) {
        match (self, other) {
            (SkillSet::Bits(a), SkillSet::Bits(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x |= y;
                }
            }
            (SkillSet::Sorted(a), other) => {
                a.extend(other.iter().map(|id| id.0));
                a.sort_unstable();
                a.dedup();
            }
            (SkillSet::Bits(a), other) => {
                for id in other.iter() {
                    let i = id.index();
                    a[i / 64] |= 1 << (i % 64);
                }
            }
        }
    }

    /// `self ∖= other`.
    pub fn remove_all(&mut self, other: &SkillSet) {
        match (self, other) {
            (SkillSet::Bits(a), SkillSet::Bits(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x &= !y;
                }
            }
            (SkillSet::Sorted(a), other) => a.retain(|&x| !other.contains(SkillId(x))),
            (SkillSet::Bits(a), other) => {
                for id in other.iter() {
                    let i = id.index();
                    if i / 64 < a.len() {
                        a[i / 64] &= !(1 << (i % 64));
                    }
                }
            }
        }
    }

    pub fn intersection(&self, other: &SkillSet) -> SkillSet {
        match (self, other) {
            (SkillSet::Bits(a), SkillSet::Bits(b)) => {
                SkillSet::Bits(a.iter().zip(b).map(|(x, y)| x & y).collect())
            }
            _ => {
                let mut out = self.clone();
                match &mut out {
                    SkillSet::Bits(a) => {
                        for (k, word) in a.iter_mut().enumerate() {
                            let mut bits = *word;
                            while bits != 0 {
                                let b = bits.trailing_zeros();
                                bits &= bits - 1;
                                if !other.contains(SkillId(k as u32 * 64 + b)) {
                                    *word &= !(1 << b);
                                }
                            }
                        }
                    }
                    SkillSet::Sorted(v) => v.retain(|&x| other.contains(SkillId(x))),
                }
                out
            }
        }
    }
}

impl PartialEq for SkillSet {
    fn eq(&self, other: &Self) -> bool {
        self.iter().eq(other.iter())
    }
}

impl Eq for SkillSet {}

fn sorted_intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}
