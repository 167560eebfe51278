//! The cross-check suite behind `dellac verify`.

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::config::{classify_rows, inv_rows, DellacConfiguration};
use crate::flag::{
    dim_sp_even_via_correction, dim_sp_odd, fold_collections, from_dellac, symplectic_trace,
    to_dellac, Family, IndexCollection,
};
use crate::poincare::{
    cell_dimension, expected_dimension, reference_polynomial, reference_sequence, PoincareError,
    VarietyFamily, MAX_SYMMETRIC_AMBIENT, MAX_TYPE_A_AMBIENT,
};
use crate::poly::{Histogram, PoincarePolynomial};
use crate::search::{fold_dellac, fold_symmetric};
use crate::wire::{collection_to_json, config_to_json};

/// Largest `N` for the exhaustive bijection roundtrip.
pub const ROUNDTRIP_LIMIT: usize = 7;
/// Largest `N` for the type A statistic-multiset comparison.
pub const TYPE_A_MULTISET_LIMIT: usize = 6;
/// Largest `N` with tabulated orthogonal leading coefficients.
pub const SO_LEADING_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyBounds {
    pub max_even: usize,
    pub max_odd: usize,
    pub max_type_a: usize,
}

impl Default for VerifyBounds {
    fn default() -> Self {
        VerifyBounds {
            max_even: 8,
            max_odd: 9,
            max_type_a: 9,
        }
    }
}

/// Outcome of one check group over a range of sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub sizes: Vec<usize>,
    pub cases: u64,
    pub failures: u64,
    /// A failing configuration, collection or polynomial.
    pub counterexample: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub bounds: VerifyBounds,
    pub checks: Vec<CheckResult>,
    /// Observations that are reported but do not fail the run.
    pub findings: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let sizes: Vec<String> = c.sizes.iter().map(|n| n.to_string()).collect();
            writeln!(
                f,
                "{} {:<26} N={:<18} cases={}",
                if c.passed() { "PASS" } else { "FAIL" },
                c.name,
                sizes.join(","),
                c.cases
            )?;
            if let Some(x) = &c.counterexample {
                writeln!(f, "     {} failures, first: {x}", c.failures)?;
            }
        }
        for finding in &self.findings {
            writeln!(f, "note {finding}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Pass/fail tally that keeps the first counterexample in enumeration order.
#[derive(Clone, Debug, Default)]
struct Tally {
    cases: u64,
    failures: u64,
    first: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(witness());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.failures += other.failures;
        if self.first.is_none() {
            self.first = other.first;
        }
        self
    }
}

#[derive(Default)]
struct Builder {
    groups: Vec<(String, Vec<usize>, Tally)>,
    findings: Vec<String>,
}

impl Builder {
    fn add(&mut self, name: &str, n: usize, tally: Tally) {
        match self.groups.iter_mut().find(|(g, _, _)| g == name) {
            Some((_, sizes, t)) => {
                if !sizes.contains(&n) {
                    sizes.push(n);
                }
                *t = std::mem::take(t).merge(tally);
            }
            None => self.groups.push((name.to_string(), vec![n], tally)),
        }
    }

    fn single(&mut self, name: &str, n: usize, ok: bool, witness: impl FnOnce() -> String) {
        let mut t = Tally::default();
        t.record(ok, witness);
        self.add(name, n, t);
    }

    fn finish(self, bounds: VerifyBounds) -> VerificationReport {
        VerificationReport {
            bounds,
            checks: self
                .groups
                .into_iter()
                .map(|(name, mut sizes, t)| {
                    sizes.sort_unstable();
                    CheckResult {
                        name,
                        sizes,
                        cases: t.cases,
                        failures: t.failures,
                        counterexample: t.first,
                    }
                })
                .collect(),
            findings: self.findings,
        }
    }
}

#[derive(Default)]
struct SymmetricTally {
    count: u64,
    inv_tilde: Histogram,
    inv_prime: Histogram,
    identity: Tally,
    paired_even: Tally,
    roundtrip: Tally,
}

impl SymmetricTally {
    fn merge(self, o: SymmetricTally) -> SymmetricTally {
        SymmetricTally {
            count: self.count + o.count,
            inv_tilde: self.inv_tilde.merge(o.inv_tilde),
            inv_prime: self.inv_prime.merge(o.inv_prime),
            identity: self.identity.merge(o.identity),
            paired_even: self.paired_even.merge(o.paired_even),
            roundtrip: self.roundtrip.merge(o.roundtrip),
        }
    }
}

fn symmetric_pass(n: usize) -> SymmetricTally {
    let family = Family::for_parity(true, n);
    fold_symmetric(
        n,
        SymmetricTally::default,
        |t, rows| {
            let c = classify_rows(n, rows);
            let witness = || config_to_json(&DellacConfiguration::from_raw(n, rows));
            t.count += 1;
            t.inv_tilde.add((c.self_symmetric + c.paired / 2) as u32);
            t.inv_prime.add((c.paired / 2) as u32);
            let total = inv_rows(rows);
            t.identity.record(
                c.total == total && total == c.self_symmetric + c.paired / 2 + c.paired / 2,
                witness,
            );
            t.paired_even.record(c.paired.is_multiple_of(2), witness);
            if n <= ROUNDTRIP_LIMIT {
                let cfg = DellacConfiguration::from_raw(n, rows);
                let ok = from_dellac(&cfg, family)
                    .and_then(|i| to_dellac(&i))
                    .is_ok_and(|back| back == cfg);
                t.roundtrip.record(ok, witness);
            }
        },
        SymmetricTally::merge,
    )
}

#[derive(Default)]
struct CollectionTally {
    count: u64,
    sp_cells: Histogram,
    so_cells: Histogram,
    routes: Tally,
    monotone: Tally,
    roundtrip: Tally,
    images: Vec<DellacConfiguration>,
    graphical_disagreements: u64,
    first_disagreement: Option<String>,
    complementary_requests: u64,
    collections_with_requests: u64,
}

impl CollectionTally {
    fn merge(mut self, o: CollectionTally) -> CollectionTally {
        self.count += o.count;
        self.sp_cells = self.sp_cells.merge(o.sp_cells);
        self.so_cells = self.so_cells.merge(o.so_cells);
        self.routes = self.routes.merge(o.routes);
        self.monotone = self.monotone.merge(o.monotone);
        self.roundtrip = self.roundtrip.merge(o.roundtrip);
        self.images.extend(o.images);
        self.graphical_disagreements += o.graphical_disagreements;
        if self.first_disagreement.is_none() {
            self.first_disagreement = o.first_disagreement;
        }
        self.complementary_requests += o.complementary_requests;
        self.collections_with_requests += o.collections_with_requests;
        self
    }
}

fn collection_pass(n: usize) -> Result<CollectionTally, PoincareError> {
    let family = Family::for_parity(true, n);
    let orthogonal = Family::for_parity(false, n);
    let tally = fold_collections(
        family,
        n,
        CollectionTally::default,
        |t, c: &IndexCollection| {
            let witness = || collection_to_json(c);
            t.count += 1;
            let image = to_dellac(c);
            let inv_tilde = image.as_ref().ok().and_then(|d| d.inv_tilde().ok());
            let trace = symplectic_trace(c);
            let cells = cell_dimension(c).ok();
            let so = c
                .with_family(orthogonal)
                .ok()
                .and_then(|o| cell_dimension(&o).ok());
            if let Some(d) = cells {
                t.sp_cells.add(d);
            }
            if let Some(d) = so {
                t.so_cells.add(d);
            }
            let agree = match family {
                Family::SpEven => {
                    let inductive = trace.as_ref().ok().map(|t| t.dimension() as usize);
                    let corrected = dim_sp_even_via_correction(c).ok().map(|d| d as usize);
                    inductive.is_some() && inductive == corrected && corrected == inv_tilde
                }
                _ => {
                    let direct = dim_sp_odd(c).ok().map(|d| d as usize);
                    direct.is_some() && direct == inv_tilde
                }
            };
            t.routes
                .record(agree && cells.is_some() && so.is_some(), witness);
            match &trace {
                Ok(tr) => {
                    t.monotone.record(tr.is_nondecreasing(), witness);
                    if !tr.forms_agree() {
                        t.graphical_disagreements += 1;
                        if t.first_disagreement.is_none() {
                            t.first_disagreement = Some(collection_to_json(c));
                        }
                    }
                    if !tr.complementary_requests.is_empty() {
                        t.collections_with_requests += 1;
                        t.complementary_requests += tr.complementary_requests.len() as u64;
                    }
                }
                Err(_) => t.monotone.record(false, witness),
            }
            if n <= ROUNDTRIP_LIMIT {
                let ok = image
                    .as_ref()
                    .ok()
                    .and_then(|d| from_dellac(d, family).ok())
                    .is_some_and(|back| &back == c);
                t.roundtrip.record(ok, witness);
                if let Ok(d) = image {
                    t.images.push(d);
                }
            }
        },
        CollectionTally::merge,
    )?;
    Ok(tally)
}

fn polynomial_checks(
    b: &mut Builder,
    variety: VarietyFamily,
    statistic: &PoincarePolynomial,
    cells: &PoincarePolynomial,
    family_count: u64,
) {
    let (family, n) = (variety.family(), variety.ambient());
    let show = |p: &PoincarePolynomial| format!("{variety}: {p}");
    b.single("method-agreement", n, statistic == cells, || {
        format!("{variety}: statistic {statistic}, cells {cells}")
    });
    if let Some(golden) = reference_polynomial(family, n) {
        b.single(
            "golden-polynomials",
            n,
            statistic == &golden && cells == &golden,
            || format!("{variety}: expected {golden}, statistic {statistic}, cells {cells}"),
        );
    }
    b.single(
        "degree",
        n,
        statistic.degree() == Some(expected_dimension(family, n)),
        || show(statistic),
    );
    b.single(
        "euler-characteristic",
        n,
        statistic.sum() == BigUint::from(family_count),
        || {
            format!(
                "{variety}: P(1) = {}, count {family_count}",
                statistic.sum()
            )
        },
    );
    let constant = if family == Family::SOEven { 2u8 } else { 1 };
    b.single(
        "constant-coefficient",
        n,
        statistic.constant_coefficient() == Some(&BigUint::from(constant)),
        || show(statistic),
    );
    if family.is_orthogonal() && n % 2 == 0 {
        let expected = BigUint::from(1u8) << (n / 2);
        let lead = statistic.leading_coefficient().cloned().unwrap_or_default();
        if n <= SO_LEADING_LIMIT {
            b.single("so-leading-coefficient", n, lead == expected, || {
                show(statistic)
            });
        } else {
            b.findings.push(format!(
                "{variety}: leading coefficient {lead}, 2^(N/2) = {expected}"
            ));
        }
    }
    b.single("unimodality", n, statistic.is_unimodal(), || {
        show(statistic)
    });
}

fn worked_example_checks(b: &mut Builder) {
    let sets = vec![vec![3], vec![3, 7], vec![1, 4, 7], vec![1, 4, 6, 7]];
    let i0 = IndexCollection::new(Family::SpEven, 8, &sets).expect("worked example is valid");
    let trace = symplectic_trace(&i0)
        .map(|t| t.values())
        .unwrap_or_default();
    b.single("worked-example-trace", 8, trace == [1, 4, 7, 9], || {
        format!("trace {trace:?}")
    });
    let image = to_dellac(&i0).ok();
    let mut points: Vec<(usize, usize)> = image
        .iter()
        .flat_map(|d| d.points())
        .map(|p| (p.column, p.row))
        .collect();
    points.sort_unstable();
    let mut expected = vec![
        (1, 3),
        (2, 7),
        (3, 4),
        (3, 9),
        (4, 6),
        (4, 12),
        (1, 1),
        (2, 2),
        (8, 14),
        (7, 10),
        (6, 13),
        (6, 8),
        (5, 11),
        (5, 5),
        (8, 16),
        (7, 15),
    ];
    expected.sort_unstable();
    let inv_tilde = image.as_ref().and_then(|d| d.inv_tilde().ok());
    b.single(
        "worked-example-image",
        8,
        points == expected && inv_tilde == Some(9),
        || format!("points {points:?}, inv~ {inv_tilde:?}"),
    );
}

fn sdc4_checks(b: &mut Builder) {
    let t = symmetric_pass(4);
    let tilde = t.inv_tilde.dense();
    let prime = t.inv_prime.dense();
    b.single(
        "sdc4-tables",
        4,
        tilde == [1, 2, 3, 3, 1] && prime == [2, 4, 4],
        || format!("inv~ by degree {tilde:?}, inv' by degree {prime:?}"),
    );
}

fn sequence_check(b: &mut Builder, name: &str, n: usize, index: usize, found: u64) {
    let reference = reference_sequence(name).expect("known sequence");
    if let Some(&want) = reference.get(index) {
        b.single(&format!("counts-{name}"), n, want == found, || {
            format!("N = {n}: counted {found}, reference {want}")
        });
    }
}

/// Runs every check for `N` within `bounds`.
pub fn run_verification(bounds: VerifyBounds) -> Result<VerificationReport, PoincareError> {
    for (family, n, limit) in [
        (Family::SpEven, bounds.max_even, MAX_SYMMETRIC_AMBIENT),
        (Family::SpOdd, bounds.max_odd, MAX_SYMMETRIC_AMBIENT),
        (Family::TypeA, bounds.max_type_a, MAX_TYPE_A_AMBIENT),
    ] {
        if n > limit {
            return Err(PoincareError::TooLarge {
                family,
                ambient: n,
                limit,
            });
        }
    }
    let mut b = Builder::default();

    for n in 1..=bounds.max_type_a {
        let variety = VarietyFamily::new(Family::TypeA, n)?;
        let stat = fold_dellac(
            n,
            Histogram::new,
            |h, rows| h.add(inv_rows(rows) as u32),
            Histogram::merge,
        );
        let cells = fold_collections(
            Family::TypeA,
            n,
            || Ok(Histogram::new()),
            |acc: &mut Result<Histogram, PoincareError>, c| {
                if let Ok(h) = acc {
                    match cell_dimension(c) {
                        Ok(d) => h.add(d),
                        Err(e) => *acc = Err(e.into()),
                    }
                }
            },
            |a, b| match (a, b) {
                (Ok(a), Ok(b)) => Ok(a.merge(b)),
                (Err(e), _) | (_, Err(e)) => Err(e),
            },
        )??;
        sequence_check(&mut b, "genocchi", n, n - 1, stat.total());
        b.single(
            "collection-counts",
            n,
            cells.total() == stat.total(),
            || {
                format!(
                    "a[{n}]: {} collections, {} configurations",
                    cells.total(),
                    stat.total()
                )
            },
        );
        if n <= TYPE_A_MULTISET_LIMIT {
            b.single("type-a-multiset", n, cells == stat, || {
                format!("a[{n}]: cells {:?}, inv {:?}", cells.dense(), stat.dense())
            });
        }
        polynomial_checks(
            &mut b,
            variety,
            &stat.to_polynomial(),
            &cells.to_polynomial(),
            stat.total(),
        );
    }

    let sizes = (1..=bounds.max_odd)
        .step_by(2)
        .chain((2..=bounds.max_even).step_by(2));
    for n in sizes {
        let sym = symmetric_pass(n);
        let coll = collection_pass(n)?;
        if n % 2 == 0 {
            sequence_check(&mut b, "r", n, n / 2, sym.count);
        } else {
            sequence_check(&mut b, "l", n, n / 2, sym.count);
        }
        b.single("collection-counts", n, coll.count == sym.count, || {
            format!(
                "N = {n}: {} collections, {} configurations",
                coll.count, sym.count
            )
        });
        b.add("statistic-identity", n, sym.identity);
        b.add("paired-inversions-even", n, sym.paired_even);
        let routes = if n % 2 == 0 {
            "sp-even-routes"
        } else {
            "sp-odd-routes"
        };
        b.add(routes, n, coll.routes);
        b.add("trace-nondecreasing", n, coll.monotone);
        if n <= ROUNDTRIP_LIMIT {
            b.add("roundtrip-configurations", n, sym.roundtrip);
            b.add("roundtrip-collections", n, coll.roundtrip);
            let mut images = coll.images;
            images.sort_unstable();
            let before = images.len();
            images.dedup();
            b.single(
                "image-equals-sdc",
                n,
                images.len() == before && images.len() as u64 == sym.count,
                || format!("N = {n}: {} distinct images of {before}", images.len()),
            );
        }
        if coll.graphical_disagreements > 0 {
            b.findings.push(format!(
                "N = {n}: the black-disk form of the inductive step differs from the case-split \
                 rules on {} of {} collections, first {}",
                coll.graphical_disagreements,
                coll.count,
                coll.first_disagreement.as_deref().unwrap_or("?")
            ));
        }
        if coll.complementary_requests > 0 {
            b.findings.push(format!(
                "N = {n}: the inductive step met {} partner pairs a+b=N+1 in {} collections; \
                 each contributes 0",
                coll.complementary_requests, coll.collections_with_requests
            ));
        }
        for (family, stat, cells) in [
            (Family::for_parity(true, n), &sym.inv_tilde, &coll.sp_cells),
            (Family::for_parity(false, n), &sym.inv_prime, &coll.so_cells),
        ] {
            let variety = VarietyFamily::new(family, n)?;
            polynomial_checks(
                &mut b,
                variety,
                &stat.to_polynomial(),
                &cells.to_polynomial(),
                sym.count,
            );
        }
    }

    if bounds.max_even >= 8 {
        worked_example_checks(&mut b);
    }
    if bounds.max_even >= 4 {
        sdc4_checks(&mut b);
    }
    Ok(b.finish(bounds))
}
