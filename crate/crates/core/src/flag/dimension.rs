//! Cell dimensions of coordinate flags.
//!
//! Type A cells count, for every initiating element, the free slots below it
//! in its column ordering. The symplectic cells are cut out of the type A
//! cells by one linear isotropy condition per qualifying pair of elements of
//! the top subset; the inductive algorithm distributes those conditions over
//! the columns through the correction function `s`.

use serde::Serialize;

use super::collection::{bit, contains, initiating_mask, members};
use super::{less, s_value, Family, FlagError, IndexCollection};

/// Number of `x <_k i` with `x` outside `mask`.
fn free_below(i: usize, mask: u32, k: usize, ambient: usize) -> u32 {
    (1..=ambient)
        .filter(|&x| !contains(mask, x) && less(x, i, k, ambient))
        .count() as u32
}

/// Type A cell dimension restricted to the degrees `degrees` (1-based).
pub fn dim_type_a(collection: &IndexCollection, degrees: &[usize]) -> Result<u32, FlagError> {
    let ambient = collection.ambient();
    let mut total = 0;
    for &k in degrees {
        if k == 0 || k > collection.len() {
            return Err(FlagError::DegreeRange {
                k,
                max: collection.len(),
            });
        }
        total += type_a_column(collection, k, ambient);
    }
    Ok(total)
}

fn type_a_column(collection: &IndexCollection, k: usize, ambient: usize) -> u32 {
    let current = collection.mask(k);
    members(initiating_mask(current, collection.mask(k - 1), k))
        .map(|i| free_below(i, current, k, ambient))
        .sum()
}

fn full_type_a(collection: &IndexCollection) -> u32 {
    (1..=collection.len())
        .map(|k| type_a_column(collection, k, collection.ambient()))
        .sum()
}

/// Number of isotropy conditions on the top subset: ordered pairs
/// `(a1, a2)` of `I_n` with `a1 <_n a2` whose partner `b = N+1-a1` is a free
/// coordinate of `a2`, i.e. `b <_n a2` and `b` is not in `I_n`.
///
/// For even `N` the last clause always holds. For odd `N` it removes
/// `a1 = n+1`, which pairs with nothing.
pub fn isotropy_correction(collection: &IndexCollection) -> u32 {
    let n = collection.len();
    if n == 0 {
        return 0;
    }
    let ambient = collection.ambient();
    let top = collection.mask(n);
    let mut count = 0;
    for a1 in members(top) {
        let partner = ambient + 1 - a1;
        if contains(top, partner) {
            continue;
        }
        for a2 in members(top) {
            if less(a1, a2, n, ambient) && less(partner, a2, n, ambient) {
                count += 1;
            }
        }
    }
    count
}

/// One initiating element of a column with its free slots and, for the
/// graphical form, the black elements below it where `s = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InitiatingTerm {
    pub element: usize,
    pub slots: u32,
    pub corrections_below: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub k: usize,
    /// `d_k` from the case-split rules.
    pub value: u32,
    /// Running value of the graphical form, which only subtracts `s` against
    /// black elements below each initiating element.
    pub graphical_value: i64,
    pub initiating: Vec<InitiatingTerm>,
    /// Pairs `(new, other)` with `s(new, other, k) = 1` subtracted by the
    /// case-split rules.
    pub corrections: Vec<(usize, usize)>,
}

/// A request for `s(a, b, k)` with `a + b = N + 1`, where `s` is undefined.
/// Such terms are skipped: the defining condition `N+1-b <_k a` would
/// read `a <_k a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ComplementaryRequest {
    pub k: usize,
    pub a: usize,
    pub b: usize,
}

/// Step-by-step record of the inductive dimension algorithm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionTrace {
    pub steps: Vec<TraceStep>,
    pub complementary_requests: Vec<ComplementaryRequest>,
}

impl DimensionTrace {
    pub fn values(&self) -> Vec<u32> {
        self.steps.iter().map(|s| s.value).collect()
    }

    pub fn graphical_values(&self) -> Vec<i64> {
        self.steps.iter().map(|s| s.graphical_value).collect()
    }

    /// `d_n`, or 0 for the empty collection.
    pub fn dimension(&self) -> u32 {
        self.steps.last().map_or(0, |s| s.value)
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.steps.windows(2).all(|w| w[0].value <= w[1].value)
    }

    pub fn forms_agree(&self) -> bool {
        self.steps
            .iter()
            .all(|s| i64::from(s.value) == s.graphical_value)
    }

    /// Fails when the graphical form disagrees with the case-split rules.
    pub fn check_forms(&self) -> Result<(), FlagError> {
        match self
            .steps
            .iter()
            .find(|s| i64::from(s.value) != s.graphical_value)
        {
            None => Ok(()),
            Some(s) => Err(FlagError::Inconsistency(format!(
                "step {}: case-split value {} but graphical value {}",
                s.k, s.value, s.graphical_value
            ))),
        }
    }
}

struct STable<'a> {
    k: usize,
    ambient: usize,
    requests: &'a mut Vec<ComplementaryRequest>,
}

impl STable<'_> {
    fn get(&mut self, a: usize, b: usize) -> u8 {
        match s_value(a, b, self.k, self.ambient) {
            Some(v) => v,
            None => {
                self.requests.push(ComplementaryRequest { k: self.k, a, b });
                0
            }
        }
    }
}

/// The inductive algorithm on a symplectic collection of either parity.
///
/// Each step adds the free slots below the new elements of `I_k` and removes
/// one slot for every `s(new, old, k) = 1`; when `k` leaves `I_{k-1}` the two
/// new elements also see each other.
pub fn symplectic_trace(collection: &IndexCollection) -> Result<DimensionTrace, FlagError> {
    if !collection.family().is_symplectic() {
        return Err(FlagError::WrongFamily {
            family: collection.family(),
            operation: "the inductive dimension algorithm",
        });
    }
    let ambient = collection.ambient();
    let mut requests = Vec::new();
    let mut steps = Vec::with_capacity(collection.len());
    let mut value: i64 = 0;
    let mut graphical: i64 = 0;
    for k in 1..=collection.len() {
        let previous = collection.mask(k - 1);
        let current = collection.mask(k);
        let mut s = STable {
            k,
            ambient,
            requests: &mut requests,
        };
        let mut corrections = Vec::new();
        let increment: i64 = if !contains(previous, k) {
            let fresh: Vec<usize> = members(current & !previous).collect();
            let [j] = fresh[..] else {
                return Err(FlagError::Inconsistency(format!(
                    "step {k}: expected one new element, found {fresh:?}"
                )));
            };
            let mut inc = i64::from(free_below(j, previous, k, ambient));
            for i in members(previous) {
                if s.get(j, i) == 1 {
                    corrections.push((j, i));
                    inc -= 1;
                }
            }
            inc
        } else {
            let kept = previous & !bit(k);
            let mut fresh: Vec<usize> = members(current & !kept).collect();
            if fresh.len() != 2 {
                return Err(FlagError::Inconsistency(format!(
                    "step {k}: expected two new elements, found {fresh:?}"
                )));
            }
            // j1 >_k j2
            fresh.sort_by_key(|&x| std::cmp::Reverse(super::position(x, k, ambient)));
            let (j1, j2) = (fresh[0], fresh[1]);
            let mut inc = i64::from(free_below(j2, kept, k, ambient))
                + i64::from(free_below(j1, kept, k, ambient))
                - 1;
            if s.get(j1, j2) == 1 {
                corrections.push((j1, j2));
                inc -= 1;
            }
            for i in members(kept) {
                for j in [j1, j2] {
                    if s.get(j, i) == 1 {
                        corrections.push((j, i));
                        inc -= 1;
                    }
                }
            }
            inc
        };
        if increment < 0 {
            return Err(FlagError::Inconsistency(format!(
                "step {k} of {collection} decreases the dimension by {}",
                -increment
            )));
        }
        value += increment;

        let mut initiating = Vec::new();
        for l in members(initiating_mask(current, previous, k)) {
            let slots = free_below(l, current, k, ambient);
            let corrections_below: Vec<usize> = members(current)
                .filter(|&other| less(other, l, k, ambient))
                .filter(|&other| s.get(l, other) == 1)
                .collect();
            graphical += i64::from(slots) - corrections_below.len() as i64;
            initiating.push(InitiatingTerm {
                element: l,
                slots,
                corrections_below,
            });
        }
        steps.push(TraceStep {
            k,
            value: value as u32,
            graphical_value: graphical,
            initiating,
            corrections,
        });
    }
    requests.sort_by_key(|r| (r.k, r.a, r.b));
    requests.dedup();
    Ok(DimensionTrace {
        steps,
        complementary_requests: requests,
    })
}

/// Inductive cell dimension of an even symplectic collection.
pub fn dim_sp_even(collection: &IndexCollection) -> Result<DimensionTrace, FlagError> {
    if collection.family() != Family::SpEven {
        return Err(FlagError::WrongFamily {
            family: collection.family(),
            operation: "dim_sp_even",
        });
    }
    symplectic_trace(collection)
}

/// Even symplectic dimension as the type A dimension over degrees `1..n`
/// minus the isotropy conditions.
pub fn dim_sp_even_via_correction(collection: &IndexCollection) -> Result<u32, FlagError> {
    if collection.family() != Family::SpEven {
        return Err(FlagError::WrongFamily {
            family: collection.family(),
            operation: "dim_sp_even_via_correction",
        });
    }
    Ok(full_type_a(collection) - isotropy_correction(collection))
}

/// Odd symplectic dimension: free slots below all initiating elements minus
/// the pairs `(a, b)` of `I_n` with `b <_n a`, `2n+2-b <_n a` and `b != n+1`.
pub fn dim_sp_odd(collection: &IndexCollection) -> Result<u32, FlagError> {
    if collection.family() != Family::SpOdd {
        return Err(FlagError::WrongFamily {
            family: collection.family(),
            operation: "dim_sp_odd",
        });
    }
    Ok(full_type_a(collection) - isotropy_correction(collection))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::enumerate_collections;

    fn coll(family: Family, ambient: usize, sets: &[&[usize]]) -> IndexCollection {
        let sets: Vec<Vec<usize>> = sets.iter().map(|s| s.to_vec()).collect();
        IndexCollection::new(family, ambient, &sets).unwrap()
    }

    fn i0() -> IndexCollection {
        coll(
            Family::SpEven,
            8,
            &[&[3], &[3, 7], &[1, 4, 7], &[1, 4, 6, 7]],
        )
    }

    #[test]
    fn worked_example_trace() {
        let t = dim_sp_even(&i0()).unwrap();
        assert_eq!(t.values(), vec![1, 4, 7, 9]);
        assert_eq!(t.graphical_values(), vec![1, 4, 7, 9]);
        assert!(t.complementary_requests.is_empty());
        let last = &t.steps[3];
        let four = last.initiating.iter().find(|d| d.element == 4).unwrap();
        assert_eq!(four.slots, 4);
        let mut below = four.corrections_below.clone();
        below.sort();
        assert_eq!(below, vec![1, 6, 7]);
        let six = last.initiating.iter().find(|d| d.element == 6).unwrap();
        assert_eq!((six.slots, six.corrections_below.len()), (1, 0));
    }

    #[test]
    fn worked_example_type_a_and_correction() {
        let c = i0();
        assert_eq!(dim_type_a(&c, &[1, 2, 3, 4]).unwrap(), 12);
        assert_eq!(isotropy_correction(&c), 3);
        assert_eq!(dim_sp_even_via_correction(&c).unwrap(), 9);
        assert!(dim_type_a(&c, &[5]).is_err());
    }

    #[test]
    fn type_a_three_examples() {
        let a = coll(Family::TypeA, 3, &[&[2], &[1, 3]]);
        assert_eq!(dim_type_a(&a, &[1, 2]).unwrap(), 0);
        let b = coll(Family::TypeA, 3, &[&[1], &[1, 2]]);
        assert_eq!(dim_type_a(&b, &[1, 2]).unwrap(), 3);
        let mut dims: Vec<u32> = enumerate_collections(Family::TypeA, 3)
            .unwrap()
            .iter()
            .map(|c| dim_type_a(c, &[1, 2]).unwrap())
            .collect();
        dims.sort();
        assert_eq!(dims, vec![0, 1, 1, 2, 2, 2, 3]);
    }

    #[test]
    fn smallest_even_symplectic() {
        let one = coll(Family::SpEven, 2, &[&[1]]);
        let two = coll(Family::SpEven, 2, &[&[2]]);
        assert_eq!(dim_sp_even(&one).unwrap().dimension(), 1);
        assert_eq!(dim_sp_even(&two).unwrap().dimension(), 0);
        assert_eq!(dim_sp_even_via_correction(&one).unwrap(), 1);
    }

    #[test]
    fn odd_symplectic_three() {
        let dims: Vec<u32> = [1, 2, 3]
            .iter()
            .map(|&i| dim_sp_odd(&coll(Family::SpOdd, 3, &[&[i]])).unwrap())
            .collect();
        assert_eq!(dims, vec![2, 0, 1]);
    }

    #[test]
    fn empty_collection_has_dimension_zero() {
        let c = coll(Family::SpOdd, 1, &[]);
        assert_eq!(dim_sp_odd(&c).unwrap(), 0);
        assert_eq!(symplectic_trace(&c).unwrap().dimension(), 0);
    }

    #[test]
    fn complementary_requests_are_recorded() {
        // I_2 = {3,4} holds the partners 3 and 4 before 3 leaves at step 3
        let c = coll(Family::SpEven, 6, &[&[4], &[3, 4], &[1, 2, 4]]);
        let t = dim_sp_even(&c).unwrap();
        assert!(t
            .complementary_requests
            .contains(&ComplementaryRequest { k: 2, a: 3, b: 4 }));
        assert_eq!(t.dimension(), dim_sp_even_via_correction(&c).unwrap());
    }

    #[test]
    fn family_guards() {
        let c = coll(Family::SOEven, 2, &[&[1]]);
        assert!(matches!(
            dim_sp_even(&c),
            Err(FlagError::WrongFamily { .. })
        ));
        assert!(matches!(dim_sp_odd(&c), Err(FlagError::WrongFamily { .. })));
        assert!(matches!(
            dim_sp_even_via_correction(&c),
            Err(FlagError::WrongFamily { .. })
        ));
    }

    #[test]
    fn traces_are_nondecreasing() {
        for c in enumerate_collections(Family::SpEven, 8).unwrap() {
            assert!(dim_sp_even(&c).unwrap().is_nondecreasing());
        }
    }
}
