//! Checks against slow, independently written reference implementations and
//! against tabulated data.

use std::collections::{BTreeSet, HashSet};

use dellac::{
    dim_sp_even, dim_sp_odd, dim_type_a, enumerate_collections, enumerate_dellac,
    enumerate_symmetric, initiating_elements, ordering_less, s_statistic, to_dellac,
    DellacConfiguration, Family, IndexCollection,
};

/// Column-by-column enumeration: column `j` picks two free rows in `j..=N+j`.
fn column_oracle(n: usize) -> BTreeSet<Vec<usize>> {
    fn rec(n: usize, j: usize, rows: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
        if j > n {
            out.insert(rows.clone());
            return;
        }
        for a in j..=n + j {
            for b in a + 1..=n + j {
                if rows[a - 1] == 0 && rows[b - 1] == 0 {
                    rows[a - 1] = j;
                    rows[b - 1] = j;
                    rec(n, j + 1, rows, out);
                    rows[a - 1] = 0;
                    rows[b - 1] = 0;
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    rec(n, 1, &mut vec![0; 2 * n], &mut out);
    out
}

type Pt = (usize, usize);

fn pts(cfg: &DellacConfiguration) -> Vec<Pt> {
    cfg.points().iter().map(|p| (p.column, p.row)).collect()
}

fn oracle_inversions(p: &[Pt]) -> Vec<(Pt, Pt)> {
    let mut out = Vec::new();
    for &a in p {
        for &b in p {
            if a.0 < b.0 && a.1 > b.1 {
                out.push((a, b));
            }
        }
    }
    out
}

/// Orbits of the reflection acting on inversions as unordered point pairs.
fn oracle_orbits(n: usize, p: &[Pt]) -> (usize, usize) {
    let r = |x: Pt| (n + 1 - x.0, 2 * n + 1 - x.1);
    let key = |a: Pt, b: Pt| if a < b { (a, b) } else { (b, a) };
    let inv: HashSet<(Pt, Pt)> = oracle_inversions(p)
        .into_iter()
        .map(|(a, b)| key(a, b))
        .collect();
    let mut seen = HashSet::new();
    let (mut fixed, mut pairs) = (0, 0);
    for &(a, b) in &inv {
        if seen.contains(&(a, b)) {
            continue;
        }
        let image = key(r(a), r(b));
        assert!(inv.contains(&image), "reflection must preserve inversions");
        seen.insert((a, b));
        seen.insert(image);
        if image == (a, b) {
            fixed += 1;
        } else {
            pairs += 1;
        }
    }
    (fixed, pairs)
}

#[test]
fn dellac_sets_match_column_oracle() {
    for n in 1..=6 {
        let fast: BTreeSet<Vec<usize>> = enumerate_dellac(n)
            .unwrap()
            .iter()
            .map(|c| c.rows())
            .collect();
        assert_eq!(fast, column_oracle(n), "N = {n}");
    }
}

#[test]
fn symmetric_sets_match_filtered_oracle() {
    for n in 1..=6 {
        let want: BTreeSet<Vec<usize>> = column_oracle(n)
            .into_iter()
            .filter(|rows| (1..=2 * n).all(|i| rows[2 * n - i] == n + 1 - rows[i - 1]))
            .collect();
        let got: BTreeSet<Vec<usize>> = enumerate_symmetric(n)
            .unwrap()
            .iter()
            .map(|c| c.rows())
            .collect();
        assert_eq!(got, want, "N = {n}");
    }
}

#[test]
fn statistics_match_point_level_oracle() {
    for n in 1..=6 {
        for cfg in enumerate_dellac(n).unwrap() {
            assert_eq!(cfg.inv(), oracle_inversions(&pts(&cfg)).len());
        }
        for cfg in enumerate_symmetric(n).unwrap() {
            let (fixed, pairs) = oracle_orbits(n, &pts(&cfg));
            assert_eq!(cfg.inv_tilde().unwrap(), fixed + pairs, "{cfg}");
            assert_eq!(cfg.inv_prime().unwrap(), pairs, "{cfg}");
        }
    }
}

#[test]
fn dc3_figure_order_and_inversions() {
    let figure = [
        [1, 1, 2, 2, 3, 3],
        [1, 1, 2, 3, 2, 3],
        [1, 2, 1, 2, 3, 3],
        [1, 1, 3, 2, 2, 3],
        [1, 2, 1, 3, 2, 3],
        [1, 2, 2, 1, 3, 3],
        [1, 2, 3, 1, 2, 3],
    ];
    let all: BTreeSet<Vec<usize>> = enumerate_dellac(3)
        .unwrap()
        .iter()
        .map(|c| c.rows())
        .collect();
    let drawn: BTreeSet<Vec<usize>> = figure.iter().map(|r| r.to_vec()).collect();
    assert_eq!(all, drawn);
    let inv: Vec<usize> = figure
        .iter()
        .map(|r| DellacConfiguration::new(3, r).unwrap().inv())
        .collect();
    assert_eq!(inv, vec![0, 1, 1, 2, 2, 2, 3]);
}

#[test]
fn sdc4_figure_statistics() {
    let bottoms = [
        [1, 1, 2, 2],
        [1, 1, 2, 3],
        [1, 1, 3, 2],
        [1, 1, 3, 3],
        [1, 2, 1, 2],
        [1, 2, 1, 3],
        [1, 2, 2, 1],
        [1, 2, 3, 1],
        [1, 2, 2, 4],
        [1, 2, 3, 4],
    ];
    let configs: Vec<DellacConfiguration> = bottoms
        .iter()
        .map(|b| {
            let mut rows = b.to_vec();
            rows.extend(b.iter().rev().map(|&c| 5 - c));
            DellacConfiguration::new(4, &rows).unwrap()
        })
        .collect();
    let mut sorted = configs.clone();
    sorted.sort();
    assert_eq!(sorted, enumerate_symmetric(4).unwrap());
    let tilde: Vec<usize> = configs.iter().map(|c| c.inv_tilde().unwrap()).collect();
    let prime: Vec<usize> = configs.iter().map(|c| c.inv_prime().unwrap()).collect();
    assert_eq!(tilde, vec![0, 1, 2, 3, 1, 2, 2, 3, 3, 4]);
    assert_eq!(prime, vec![0, 0, 1, 1, 1, 1, 2, 2, 2, 2]);
}

/// Direct reading of the definitions with explicit order lists.
fn order_list(k: usize, ambient: usize) -> Vec<usize> {
    (k + 1..=ambient).chain(1..=k).collect()
}

fn oracle_less(a: usize, b: usize, k: usize, ambient: usize) -> bool {
    let o = order_list(k, ambient);
    o.iter().position(|&x| x == a) < o.iter().position(|&x| x == b)
}

#[test]
fn orderings_match_explicit_lists() {
    for ambient in 2..=9 {
        for k in 1..ambient {
            for a in 1..=ambient {
                for b in 1..=ambient {
                    assert_eq!(
                        ordering_less(a, b, k, ambient).unwrap(),
                        oracle_less(a, b, k, ambient)
                    );
                }
            }
        }
    }
}

#[test]
fn s_matches_its_definition() {
    for n in 1..=5 {
        let ambient = 2 * n;
        for k in 1..=n {
            let t = ambient - k + 1;
            let ge = |x: usize, y: usize| x == y || oracle_less(y, x, k, ambient);
            for a in 1..=ambient {
                for b in 1..=ambient {
                    let got = s_statistic(a, b, k, n);
                    if a + b == ambient + 1 {
                        assert!(got.is_err());
                        continue;
                    }
                    let want = ge(a, t) && ge(b, t) && oracle_less(ambient + 1 - b, a, k, ambient);
                    assert_eq!(got.unwrap(), u8::from(want), "s({a},{b},{k}) n={n}");
                }
            }
        }
    }
}

/// Collections straight from the definition: all `k`-subsets, filtered.
fn collection_oracle(family: Family, ambient: usize) -> BTreeSet<Vec<Vec<usize>>> {
    fn subsets(ambient: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << ambient)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (1..=ambient).filter(|&x| m >> (x - 1) & 1 == 1).collect())
            .collect()
    }
    let m = family.set_count(ambient);
    let mut partial: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for k in 1..=m {
        let mut next = Vec::new();
        for p in &partial {
            for s in subsets(ambient, k) {
                if let Some(prev) = p.last() {
                    if !prev.iter().all(|x| s.contains(x) || *x == k) {
                        continue;
                    }
                }
                let mut q = p.clone();
                q.push(s);
                next.push(q);
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .filter(|c| {
            family == Family::TypeA
                || c.last().is_none_or(|top| {
                    top.iter()
                        .all(|&a| a == ambient + 1 - a || !top.contains(&(ambient + 1 - a)))
                })
        })
        .collect()
}

#[test]
fn collections_match_definition() {
    for ambient in 1..=7 {
        for family in Family::ALL {
            if family.check_ambient(ambient).is_err() {
                continue;
            }
            let got: BTreeSet<Vec<Vec<usize>>> = enumerate_collections(family, ambient)
                .unwrap()
                .iter()
                .map(|c| c.sets())
                .collect();
            assert_eq!(
                got,
                collection_oracle(family, ambient),
                "{family} N={ambient}"
            );
        }
    }
}

/// Type A cell dimension written from the definition with explicit orders.
fn type_a_oracle(c: &IndexCollection) -> usize {
    let sets = c.sets();
    let ambient = c.ambient();
    let mut total = 0;
    for k in 1..=sets.len() {
        let prev: &[usize] = if k == 1 { &[] } else { &sets[k - 2] };
        for &i in &sets[k - 1] {
            if i == k || !prev.contains(&i) {
                total += (1..=ambient)
                    .filter(|x| !sets[k - 1].contains(x) && oracle_less(*x, i, k, ambient))
                    .count();
            }
        }
    }
    total
}

#[test]
fn type_a_dimensions_match_definition() {
    for ambient in 1..=6 {
        for c in enumerate_collections(Family::TypeA, ambient).unwrap() {
            let degrees: Vec<usize> = (1..=c.len()).collect();
            assert_eq!(
                dim_type_a(&c, &degrees).unwrap() as usize,
                type_a_oracle(&c)
            );
        }
    }
    // partial flags: a degree subset just drops terms
    for c in enumerate_collections(Family::TypeA, 5).unwrap() {
        let full = dim_type_a(&c, &[1, 2, 3, 4]).unwrap();
        let parts = dim_type_a(&c, &[1, 3]).unwrap() + dim_type_a(&c, &[2, 4]).unwrap();
        assert_eq!(full, parts);
    }
}

#[test]
fn initiating_elements_match_definition() {
    for c in enumerate_collections(Family::SpEven, 6).unwrap() {
        let sets = c.sets();
        for k in 1..=sets.len() {
            let prev: &[usize] = if k == 1 { &[] } else { &sets[k - 2] };
            let want: Vec<usize> = sets[k - 1]
                .iter()
                .copied()
                .filter(|&i| i == k || !prev.contains(&i))
                .collect();
            let mut got = initiating_elements(&c, k).unwrap();
            got.sort_unstable();
            assert_eq!(got, want);
        }
    }
}

/// Odd symplectic dimensions in the form `sum of slots minus qualifying
/// pairs`, with pairs written out explicitly.
#[test]
fn odd_dimension_matches_pair_count() {
    for ambient in [3, 5, 7] {
        let n = ambient / 2;
        for c in enumerate_collections(Family::SpOdd, ambient).unwrap() {
            let top = c.set(n);
            let pairs = top
                .iter()
                .flat_map(|&a| top.iter().map(move |&b| (a, b)))
                .filter(|&(a, b)| {
                    b != n + 1
                        && oracle_less(b, a, n, ambient)
                        && oracle_less(ambient + 1 - b, a, n, ambient)
                        && !top.contains(&(ambient + 1 - b))
                })
                .count();
            let want = type_a_oracle(&c) - pairs;
            assert_eq!(dim_sp_odd(&c).unwrap() as usize, want, "{c}");
            assert_eq!(to_dellac(&c).unwrap().inv_tilde().unwrap(), want, "{c}");
        }
    }
}

#[test]
fn even_trace_has_one_step_per_set() {
    for ambient in [4, 6] {
        for c in enumerate_collections(Family::SpEven, ambient).unwrap() {
            let trace = dim_sp_even(&c).unwrap();
            assert_eq!(trace.steps.len(), c.len());
            assert_eq!(
                trace.dimension() as usize,
                to_dellac(&c).unwrap().inv_tilde().unwrap()
            );
        }
    }
}
