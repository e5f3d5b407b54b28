//! Frequencies, the RITA inter-plane layout and compact frequency sets.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A radio frequency, in the integer units of the RITA channel plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Frequency(pub u32);

impl Frequency {
    #[inline]
    pub fn distance(self, other: Frequency) -> u32 {
        self.0.abs_diff(other.0)
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Spacing between adjacent members of one inter-plane.
pub const IPE_SPACING: u32 = 70;

/// One inter-plane (IPE): a block of evenly spaced frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterPlane {
    pub index: usize,
    pub members: Vec<Frequency>,
}

impl InterPlane {
    pub fn is_large(&self) -> bool {
        self.members.len() == 4
    }

    /// Distance between the lowest and the highest member.
    pub fn spread(&self) -> u32 {
        match (self.members.first(), self.members.last()) {
            (Some(lo), Some(hi)) => hi.distance(*lo),
            _ => 0,
        }
    }
}

/// The six inter-planes of the RITA plan: four small (3 members) then two large (4 members).
pub fn rita_inter_planes() -> Vec<InterPlane> {
    const BASES: [(u32, u32); 6] = [
        (40000, 3),
        (41000, 3),
        (42000, 3),
        (43000, 3),
        (44000, 4),
        (45000, 4),
    ];
    BASES
        .iter()
        .enumerate()
        .map(|(index, &(base, len))| InterPlane {
            index,
            members: (0..len).map(|k| Frequency(base + k * IPE_SPACING)).collect(),
        })
        .collect()
}

/// The 20 RITA frequencies in ascending order.
pub fn rita_domain() -> Vec<Frequency> {
    let mut all: Vec<Frequency> = rita_inter_planes()
        .into_iter()
        .flat_map(|ipe| ipe.members)
        .collect();
    all.sort_unstable();
    all
}

/// Maximum number of distinct frequencies an instance may reference.
pub const MAX_SPECTRUM: usize = 64;

/// A set of frequencies, stored as a bitmask over the indices of a [`Spectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FreqSet(pub u64);

impl FreqSet {
    pub const EMPTY: FreqSet = FreqSet(0);

    #[inline]
    pub fn singleton(index: usize) -> FreqSet {
        FreqSet(1 << index)
    }

    /// All indices in `lo..hi`.
    #[inline]
    pub fn range(lo: usize, hi: usize) -> FreqSet {
        if hi <= lo {
            return FreqSet::EMPTY;
        }
        let upper = if hi >= 64 { u64::MAX } else { (1u64 << hi) - 1 };
        let lower = (1u64 << lo) - 1;
        FreqSet(upper & !lower)
    }

    #[inline]
    pub fn contains(self, index: usize) -> bool {
        index < 64 && self.0 & (1 << index) != 0
    }

    #[inline]
    pub fn insert(&mut self, index: usize) {
        self.0 |= 1 << index;
    }

    #[inline]
    pub fn remove(&mut self, index: usize) {
        self.0 &= !(1 << index);
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn union(self, other: FreqSet) -> FreqSet {
        FreqSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: FreqSet) -> FreqSet {
        FreqSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: FreqSet) -> FreqSet {
        FreqSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: FreqSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Lowest index in the set.
    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Indices in ascending order.
    pub fn iter(self) -> FreqSetIter {
        FreqSetIter(self.0)
    }
}

pub struct FreqSetIter(u64);

impl Iterator for FreqSetIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for FreqSetIter {}

impl FromIterator<usize> for FreqSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = FreqSet::EMPTY;
        for i in iter {
            set.insert(i);
        }
        set
    }
}

/// The sorted universe of frequencies an instance works over.
///
/// Every [`FreqSet`] is interpreted relative to one spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    freqs: Vec<Frequency>,
}

impl Spectrum {
    /// Builds a spectrum from arbitrary frequencies; duplicates are merged.
    /// Returns `None` when more than [`MAX_SPECTRUM`] distinct values remain.
    pub fn new(mut freqs: Vec<Frequency>) -> Option<Spectrum> {
        freqs.sort_unstable();
        freqs.dedup();
        (freqs.len() <= MAX_SPECTRUM).then_some(Spectrum { freqs })
    }

    pub fn rita() -> Spectrum {
        Spectrum {
            freqs: rita_domain(),
        }
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn frequencies(&self) -> &[Frequency] {
        &self.freqs
    }

    #[inline]
    pub fn get(&self, index: usize) -> Frequency {
        self.freqs[index]
    }

    pub fn index_of(&self, f: Frequency) -> Option<usize> {
        self.freqs.binary_search(&f).ok()
    }

    pub fn full(&self) -> FreqSet {
        FreqSet::range(0, self.freqs.len())
    }

    /// Set of the given frequencies; values outside the spectrum are ignored.
    pub fn set_of<I: IntoIterator<Item = Frequency>>(&self, freqs: I) -> FreqSet {
        freqs
            .into_iter()
            .filter_map(|f| self.index_of(f))
            .collect()
    }

    pub fn to_vec(&self, set: FreqSet) -> Vec<Frequency> {
        set.iter().map(|i| self.freqs[i]).collect()
    }

    /// Frequencies strictly closer than `gap` to `f`, i.e. the values a
    /// constraint of that gap forbids next to `f`.
    #[inline]
    pub fn conflicts(&self, f: Frequency, gap: u32) -> FreqSet {
        if gap == 0 {
            return FreqSet::EMPTY;
        }
        let low = f.0.saturating_sub(gap - 1);
        let high = f.0.saturating_add(gap);
        let lo = self.freqs.partition_point(|g| g.0 < low);
        let hi = self.freqs.partition_point(|g| g.0 < high);
        FreqSet::range(lo, hi)
    }
}
