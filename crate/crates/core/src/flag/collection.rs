use std::fmt;

use rayon::prelude::*;

use super::{Family, FlagError};

/// Subsets are stored as bitmasks: bit `a-1` is set when `a` belongs to the set.
#[inline]
pub(crate) fn bit(a: usize) -> u32 {
    1 << (a - 1)
}

#[inline]
pub(crate) fn contains(mask: u32, a: usize) -> bool {
    mask & bit(a) != 0
}

pub(crate) fn members(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1).map(|i| i + 1)
}

/// A tuple `(I_1, ..., I_m)` of subsets of `{1..N}` labeling a coordinate flag.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexCollection {
    family: Family,
    ambient: usize,
    masks: Vec<u32>,
}

impl IndexCollection {
    /// Validates and builds a collection from explicit subsets `I_1..I_m`.
    pub fn new(family: Family, ambient: usize, sets: &[Vec<usize>]) -> Result<Self, FlagError> {
        family.check_ambient(ambient)?;
        let mut masks = Vec::with_capacity(sets.len());
        for (idx, set) in sets.iter().enumerate() {
            let k = idx + 1;
            let mut mask = 0u32;
            for &element in set {
                if element == 0 || element > ambient {
                    return Err(FlagError::ElementOutOfRange {
                        k,
                        element,
                        ambient,
                    });
                }
                if contains(mask, element) {
                    return Err(FlagError::DuplicateElement { k, element });
                }
                mask |= bit(element);
            }
            masks.push(mask);
        }
        Self::from_masks(family, ambient, masks)
    }

    pub(crate) fn from_masks(
        family: Family,
        ambient: usize,
        masks: Vec<u32>,
    ) -> Result<Self, FlagError> {
        family.check_ambient(ambient)?;
        let expected = family.set_count(ambient);
        if masks.len() != expected {
            return Err(FlagError::SetCount {
                expected,
                found: masks.len(),
            });
        }
        for (idx, &mask) in masks.iter().enumerate() {
            let k = idx + 1;
            if mask >> ambient != 0 {
                return Err(FlagError::ElementOutOfRange {
                    k,
                    element: 32 - mask.leading_zeros() as usize,
                    ambient,
                });
            }
            if mask.count_ones() as usize != k {
                return Err(FlagError::SetSize {
                    k,
                    found: mask.count_ones() as usize,
                });
            }
            if let Some(&next) = masks.get(idx + 1) {
                if mask & !(next | bit(k + 1)) != 0 {
                    return Err(FlagError::NotNested { k });
                }
            }
        }
        if family != Family::TypeA {
            if let Some(&top) = masks.last() {
                if let Some((a, b)) = partner_clash(top, ambient) {
                    return Err(FlagError::NotIsotropic { a, b });
                }
            }
        }
        Ok(IndexCollection {
            family,
            ambient,
            masks,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Number of subsets `m`.
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// `I_k` as a bitmask, with `I_0` empty.
    pub(crate) fn mask(&self, k: usize) -> u32 {
        if k == 0 {
            0
        } else {
            self.masks[k - 1]
        }
    }

    /// `I_k` in increasing order, `1 <= k <= m`.
    pub fn set(&self, k: usize) -> Vec<usize> {
        members(self.mask(k)).collect()
    }

    pub fn sets(&self) -> Vec<Vec<usize>> {
        (1..=self.len()).map(|k| self.set(k)).collect()
    }

    /// The same index sets read as a collection of another family.
    pub fn with_family(&self, family: Family) -> Result<Self, FlagError> {
        Self::from_masks(family, self.ambient, self.masks.clone())
    }
}

impl fmt::Display for IndexCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}](", self.family, self.ambient)?;
        for (i, set) in self.sets().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            let items: Vec<String> = set.iter().map(|x| x.to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        write!(f, ")")
    }
}

/// First pair `{a, N+1-a}` with `a < N+1-a` lying inside `top`.
pub(crate) fn partner_clash(top: u32, ambient: usize) -> Option<(usize, usize)> {
    (1..=ambient / 2)
        .map(|a| (a, ambient + 1 - a))
        .find(|&(a, b)| contains(top, a) && contains(top, b))
}

/// Elements `i` of `I_k` with `i = k` or `i` not in `I_{k-1}`, increasing.
pub fn initiating_elements(
    collection: &IndexCollection,
    k: usize,
) -> Result<Vec<usize>, FlagError> {
    if k == 0 || k > collection.len() {
        return Err(FlagError::DegreeRange {
            k,
            max: collection.len(),
        });
    }
    Ok(members(initiating_mask(
        collection.mask(k),
        collection.mask(k - 1),
        k,
    ))
    .collect())
}

#[inline]
pub(crate) fn initiating_mask(current: u32, previous: u32, k: usize) -> u32 {
    current & (!previous | bit(k))
}

struct CollectionSearch<'f, F> {
    family: Family,
    ambient: usize,
    depth: usize,
    masks: Vec<u32>,
    visit: &'f mut F,
}

impl<F: FnMut(&[u32])> CollectionSearch<'_, F> {
    fn run(&mut self, stop: usize) {
        let k = self.masks.len() + 1;
        if self.masks.len() == stop {
            let complete = stop == self.depth;
            let isotropic = self.family == Family::TypeA
                || self
                    .masks
                    .last()
                    .is_none_or(|&top| partner_clash(top, self.ambient).is_none());
            if !complete || isotropic {
                (self.visit)(&self.masks);
            }
            return;
        }
        let previous = self.masks.last().copied().unwrap_or(0);
        let base = previous & !bit(k);
        let need = k - base.count_ones() as usize;
        let free: Vec<usize> = (1..=self.ambient).filter(|&x| !contains(base, x)).collect();
        match need {
            1 => {
                for &x in &free {
                    self.masks.push(base | bit(x));
                    self.run(stop);
                    self.masks.pop();
                }
            }
            2 => {
                for (i, &x) in free.iter().enumerate() {
                    for &y in &free[i + 1..] {
                        self.masks.push(base | bit(x) | bit(y));
                        self.run(stop);
                        self.masks.pop();
                    }
                }
            }
            _ => unreachable!("I_{} has {} elements", k - 1, previous.count_ones()),
        }
    }
}

fn search_from<F: FnMut(&[u32])>(
    family: Family,
    ambient: usize,
    prefix: &[u32],
    stop: usize,
    visit: &mut F,
) {
    let depth = family.set_count(ambient);
    let mut s = CollectionSearch {
        family,
        ambient,
        depth,
        masks: prefix.to_vec(),
        visit,
    };
    s.run(stop);
}

/// Calls `visit` on the bitmasks `(I_1, ..., I_m)` of every valid collection,
/// in a fixed order: each new subset adds its new elements in increasing
/// lexicographic order.
pub fn for_each_collection<F: FnMut(&[u32])>(
    family: Family,
    ambient: usize,
    mut visit: F,
) -> Result<(), FlagError> {
    family.check_ambient(ambient)?;
    let depth = family.set_count(ambient);
    search_from(family, ambient, &[], depth, &mut visit);
    Ok(())
}

/// All valid collections of a family, in the order of [`for_each_collection`].
pub fn enumerate_collections(
    family: Family,
    ambient: usize,
) -> Result<Vec<IndexCollection>, FlagError> {
    let mut out = Vec::new();
    for_each_collection(family, ambient, |masks| {
        out.push(IndexCollection {
            family,
            ambient,
            masks: masks.to_vec(),
        })
    })?;
    Ok(out)
}

/// Parallel fold over the collections of a family, split on `(I_1, I_2, I_3)`
/// and merged in enumeration order.
pub fn fold_collections<T, I, F, M>(
    family: Family,
    ambient: usize,
    init: I,
    fold: F,
    merge: M,
) -> Result<T, FlagError>
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, &IndexCollection) + Sync,
    M: Fn(T, T) -> T,
{
    family.check_ambient(ambient)?;
    let depth = family.set_count(ambient);
    let split = depth.min(3);
    let mut prefixes = Vec::new();
    if split == depth {
        // the prefixes are already complete collections
        prefixes.push(Vec::new());
    } else {
        search_from(family, ambient, &[], split, &mut |m: &[u32]| {
            prefixes.push(m.to_vec())
        });
    }
    let parts: Vec<T> = prefixes
        .par_iter()
        .map(|p| {
            let mut acc = init();
            let mut scratch = IndexCollection {
                family,
                ambient,
                masks: Vec::with_capacity(depth),
            };
            search_from(family, ambient, p, depth, &mut |m: &[u32]| {
                scratch.masks.clear();
                scratch.masks.extend_from_slice(m);
                fold(&mut acc, &scratch);
            });
            acc
        })
        .collect();
    Ok(parts.into_iter().fold(init(), merge))
}
