//! Exhaustive and sampled testers for the four maximal-rank properties.
//!
//! Omnipresent properties quantify over every subspace tuple of every dimension;
//! general properties fix a dimension profile and ask for maximal rank at a general
//! tuple. Over a finite field "general" has no finite certificate, so sampled mode
//! reports the fraction of random tuples that pass and compares it to a threshold.

use std::collections::BTreeMap;

use rand::Rng;
use serde_json::{json, Value};

use super::tensor::{Direction, Side, TensorSumMap};
use crate::error::{Error, Result};
use crate::exactlinalg::{
    count_all_subspaces, enumerate_all_subspaces, enumerate_subspaces, gaussian_binomial, matrix_json,
    random_subspace_with, trial_rng, FiniteField, Subspace,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    RightOmnipresent,
    LeftOmnipresent,
    RightGeneral,
    LeftGeneral,
}

impl Property {
    pub const ALL: [Property; 4] =
        [Property::RightOmnipresent, Property::LeftOmnipresent, Property::RightGeneral, Property::LeftGeneral];

    pub fn side(self) -> Side {
        match self {
            Property::RightOmnipresent | Property::RightGeneral => Side::Right,
            Property::LeftOmnipresent | Property::LeftGeneral => Side::Left,
        }
    }

    pub fn is_omnipresent(self) -> bool {
        matches!(self, Property::RightOmnipresent | Property::LeftOmnipresent)
    }

    pub fn name(self) -> &'static str {
        match self {
            Property::RightOmnipresent => "right_omnipresent",
            Property::LeftOmnipresent => "left_omnipresent",
            Property::RightGeneral => "right_general",
            Property::LeftGeneral => "left_general",
        }
    }
}

/// Default pass threshold for sampled verdicts.
pub const DEFAULT_THRESHOLD: f64 = 0.95;
/// Default cap on the number of subspace tuples an exhaustive run may visit.
pub const DEFAULT_BUDGET: u128 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CheckMode {
    Exhaustive { budget: u128 },
    Sampled { trials: u64, seed: u64, threshold: f64 },
}

impl CheckMode {
    pub fn exhaustive() -> Self {
        CheckMode::Exhaustive { budget: DEFAULT_BUDGET }
    }
    pub fn sampled(trials: u64, seed: u64) -> Self {
        CheckMode::Sampled { trials, seed, threshold: DEFAULT_THRESHOLD }
    }
}

/// A subspace tuple on which the restricted map does not have maximal rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<F: FiniteField> {
    pub subspaces: Vec<Subspace<F>>,
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    /// The sampled trial that produced the witness.
    pub trial: Option<u64>,
}

impl<F: FiniteField> Witness<F> {
    /// Re-evaluates the restriction and confirms that it is not of maximal rank.
    pub fn recheck(&self, map: &TensorSumMap<F>, property: Property) -> bool {
        match map.restrict(property.side(), &self.subspaces) {
            Ok(m) => !m.has_max_rank() && m.rank() == self.rank,
            Err(_) => false,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "subspaces": self.subspaces.iter().map(|s| matrix_json(s.basis())).collect::<Vec<_>>(),
            "rank": self.rank,
            "shape": [self.rows, self.cols],
            "trial": self.trial,
        })
    }
}

/// Counts for one dimension profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileStats {
    pub profile: Vec<usize>,
    pub cases: u128,
    pub failures: u128,
    /// Whether the first case visited (trial 0 when sampling) passed.
    pub first_passed: bool,
}

impl ProfileStats {
    pub fn failure_fraction(&self) -> f64 {
        if self.cases == 0 {
            0.0
        } else {
            self.failures as f64 / self.cases as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict<F: FiniteField> {
    pub property: Property,
    pub mode: CheckMode,
    pub field: String,
    pub passed: bool,
    /// `true` when maximal rank of every restriction follows from `T` injective or `S` surjective.
    pub short_circuit: bool,
    pub profiles: Vec<ProfileStats>,
    pub witness: Option<Witness<F>>,
}

impl<F: FiniteField> Verdict<F> {
    pub fn cases(&self) -> u128 {
        self.profiles.iter().map(|p| p.cases).sum()
    }

    pub fn failures(&self) -> u128 {
        self.profiles.iter().map(|p| p.failures).sum()
    }

    pub fn failure_fraction(&self) -> f64 {
        let cases = self.cases();
        if cases == 0 {
            0.0
        } else {
            self.failures() as f64 / cases as f64
        }
    }

    pub fn profile(&self, profile: &[usize]) -> Option<&ProfileStats> {
        self.profiles.iter().find(|p| p.profile == profile)
    }

    pub fn result_str(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }

    pub fn to_json(&self) -> Value {
        let (mode, trials, seed, threshold) = match self.mode {
            CheckMode::Exhaustive { .. } => ("exhaustive", None, None, None),
            CheckMode::Sampled { trials, seed, threshold } => ("sampled", Some(trials), Some(seed), Some(threshold)),
        };
        let mut v = json!({
            "property": self.property.name(),
            "mode": mode,
            "field": self.field,
            "trials": trials,
            "seed": seed,
            "threshold": threshold,
            "result": self.result_str(),
            "short_circuit": self.short_circuit,
            "cases": self.cases().to_string(),
            "failures": self.failures().to_string(),
            "failure_fraction": self.failure_fraction(),
            "profiles": self.profiles.iter().map(|p| json!({
                "profile": p.profile,
                "cases": p.cases.to_string(),
                "failures": p.failures.to_string(),
                "failure_fraction": p.failure_fraction(),
                "first_passed": p.first_passed,
            })).collect::<Vec<_>>(),
        });
        if let Some(w) = &self.witness {
            v["witness"] = w.to_json();
        }
        v
    }
}

fn factor_dims<F: FiniteField>(map: &TensorSumMap<F>, side: Side) -> Vec<usize> {
    map.blocks().iter().map(|b| side.factor_dim(b)).collect()
}

/// Every dimension profile `(k_1, …, k_l)` with `0 <= k_i <= n_i`, in lexicographic order.
pub fn all_profiles(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in dims {
        out = out.into_iter().flat_map(|p| (0..=n).map(move |k| [p.clone(), vec![k]].concat())).collect();
    }
    out
}

/// Restrictions of an injective `T` stay injective; compositions of a surjective `S` with
/// projections stay surjective.
fn trivially_passes<F: FiniteField>(map: &TensorSumMap<F>) -> bool {
    match map.direction() {
        Direction::IntoU => map.is_injective(),
        Direction::FromQ => map.is_surjective(),
    }
}

/// Runs a property check. `profiles` applies to the general properties and defaults to
/// every profile; omnipresent checks always cover all subspaces.
pub fn check<F: FiniteField>(
    map: &TensorSumMap<F>,
    property: Property,
    mode: CheckMode,
    profiles: Option<&[Vec<usize>]>,
) -> Result<Verdict<F>> {
    let field = map.field();
    let dims = factor_dims(map, property.side());
    for p in profiles.unwrap_or(&[]) {
        if p.len() != dims.len() || p.iter().zip(&dims).any(|(k, n)| k > n) {
            return Err(Error::Profile(format!("profile {p:?} does not fit factor dimensions {dims:?}")));
        }
    }
    let mut verdict = Verdict {
        property,
        mode,
        field: field.spec().to_string(),
        passed: true,
        short_circuit: false,
        profiles: Vec::new(),
        witness: None,
    };
    if trivially_passes(map) {
        verdict.short_circuit = true;
        return Ok(verdict);
    }
    match mode {
        CheckMode::Exhaustive { budget } => exhaustive(map, property, profiles, budget, &mut verdict)?,
        CheckMode::Sampled { trials, seed, threshold } => {
            if trials == 0 {
                return Err(Error::InvalidInput("at least one trial is required".into()));
            }
            sampled(map, property, profiles, trials, seed, threshold, &mut verdict)?
        }
    }
    Ok(verdict)
}

/// Evaluates one tuple; returns the witness on failure.
fn evaluate<F: FiniteField>(
    map: &TensorSumMap<F>,
    side: Side,
    tuple: &[Subspace<F>],
    trial: Option<u64>,
) -> Result<Option<Witness<F>>> {
    let m = map.restrict(side, tuple)?;
    if m.has_max_rank() {
        return Ok(None);
    }
    Ok(Some(Witness { subspaces: tuple.to_vec(), rank: m.rank(), rows: m.rows(), cols: m.cols(), trial }))
}

fn exhaustive<F: FiniteField>(
    map: &TensorSumMap<F>,
    property: Property,
    profiles: Option<&[Vec<usize>]>,
    budget: u128,
    verdict: &mut Verdict<F>,
) -> Result<()> {
    let field = map.field();
    let q = field.order();
    let side = property.side();
    let dims = factor_dims(map, side);

    // Per block, the candidate subspaces grouped by the profile they realize.
    let profile_list: Vec<Vec<usize>> = if property.is_omnipresent() {
        vec![]
    } else {
        profiles.map(<[_]>::to_vec).unwrap_or_else(|| all_profiles(&dims))
    };
    let count: u128 = if property.is_omnipresent() {
        dims.iter().map(|&n| count_all_subspaces(n, q)).fold(1u128, |a, c| a.saturating_mul(c))
    } else {
        profile_list
            .iter()
            .map(|p| {
                p.iter().zip(&dims).map(|(&k, &n)| gaussian_binomial(n, k, q)).fold(1u128, |a, c| a.saturating_mul(c))
            })
            .fold(0u128, |a, c| a.saturating_add(c))
    };
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }

    let mut stats: BTreeMap<Vec<usize>, ProfileStats> = BTreeMap::new();
    let mut visit = |tuple: &[Subspace<F>], verdict: &mut Verdict<F>| -> Result<()> {
        let profile: Vec<usize> = tuple.iter().map(Subspace::dim).collect();
        let failure = evaluate(map, side, tuple, None)?;
        let entry = stats.entry(profile.clone()).or_insert(ProfileStats {
            profile,
            cases: 0,
            failures: 0,
            first_passed: failure.is_none(),
        });
        entry.cases += 1;
        if let Some(w) = failure {
            entry.failures += 1;
            if verdict.witness.is_none() {
                verdict.witness = Some(w);
            }
        }
        Ok(())
    };

    if property.is_omnipresent() {
        let lists: Vec<Vec<Subspace<F>>> = dims
            .iter()
            .map(|&n| enumerate_all_subspaces(n, field, budget).map(Iterator::collect))
            .collect::<Result<_>>()?;
        for_each_tuple(&lists, |t| visit(t, verdict))?;
    } else {
        for p in &profile_list {
            let lists: Vec<Vec<Subspace<F>>> = p
                .iter()
                .zip(&dims)
                .map(|(&k, &n)| enumerate_subspaces(n, k, field, budget).map(Iterator::collect))
                .collect::<Result<_>>()?;
            for_each_tuple(&lists, |t| visit(t, verdict))?;
        }
    }
    verdict.profiles = stats.into_values().collect();
    verdict.passed = if property.is_omnipresent() {
        verdict.failures() == 0
    } else {
        // A proper closed subset cannot contain every tuple: require some passing tuple per profile.
        verdict.profiles.iter().all(|p| p.failures < p.cases)
    };
    Ok(())
}

/// Calls `f` on every element of the product of `lists`.
fn for_each_tuple<T: Clone>(lists: &[Vec<T>], mut f: impl FnMut(&[T]) -> Result<()>) -> Result<()> {
    if lists.iter().any(Vec::is_empty) {
        return Ok(());
    }
    let mut idx = vec![0usize; lists.len()];
    loop {
        let tuple: Vec<T> = idx.iter().zip(lists).map(|(&i, l)| l[i].clone()).collect();
        f(&tuple)?;
        let Some(pos) = (0..lists.len()).find(|&k| idx[k] + 1 < lists[k].len()) else { return Ok(()) };
        idx[pos] += 1;
        for i in &mut idx[..pos] {
            *i = 0;
        }
    }
}

fn sampled<F: FiniteField>(
    map: &TensorSumMap<F>,
    property: Property,
    profiles: Option<&[Vec<usize>]>,
    trials: u64,
    seed: u64,
    threshold: f64,
    verdict: &mut Verdict<F>,
) -> Result<()> {
    let field = map.field();
    let side = property.side();
    let dims = factor_dims(map, side);
    let mut best_witness: Option<Witness<F>> = None;
    let mut record = |stats: &mut ProfileStats, trial: u64, failure: Option<Witness<F>>| {
        stats.cases += 1;
        if trial == 0 {
            stats.first_passed = failure.is_none();
        }
        if let Some(w) = failure {
            stats.failures += 1;
            if best_witness.as_ref().is_none_or(|b| w.trial < b.trial) {
                best_witness = Some(w);
            }
        }
    };

    if property.is_omnipresent() {
        // Each trial draws a profile uniformly, then a tuple of that profile.
        let mut stats: BTreeMap<Vec<usize>, ProfileStats> = BTreeMap::new();
        for trial in 0..trials {
            let mut rng = trial_rng(seed, trial, 0);
            let tuple = dims
                .iter()
                .map(|&n| {
                    let k = rng.gen_range(0..=n);
                    random_subspace_with(n, k, field, &mut rng)
                })
                .collect::<Result<Vec<_>>>()?;
            let profile: Vec<usize> = tuple.iter().map(Subspace::dim).collect();
            let failure = evaluate(map, side, &tuple, Some(trial))?;
            let entry = stats.entry(profile.clone()).or_insert(ProfileStats {
                profile,
                cases: 0,
                failures: 0,
                first_passed: true,
            });
            record(entry, trial, failure);
        }
        verdict.profiles = stats.into_values().collect();
        let fraction_passed = 1.0 - verdict.failure_fraction();
        verdict.passed = fraction_passed >= threshold;
    } else {
        let profile_list: Vec<Vec<usize>> = profiles.map(<[_]>::to_vec).unwrap_or_else(|| all_profiles(&dims));
        for (stream, p) in profile_list.iter().enumerate() {
            let mut stats = ProfileStats { profile: p.clone(), cases: 0, failures: 0, first_passed: true };
            for trial in 0..trials {
                let mut rng = trial_rng(seed, trial, stream as u64);
                let tuple = p
                    .iter()
                    .zip(&dims)
                    .map(|(&k, &n)| random_subspace_with(n, k, field, &mut rng))
                    .collect::<Result<Vec<_>>>()?;
                let failure = evaluate(map, side, &tuple, Some(trial))?;
                record(&mut stats, trial, failure);
            }
            verdict.profiles.push(stats);
        }
        verdict.passed = verdict.profiles.iter().all(|p| 1.0 - p.failure_fraction() >= threshold);
    }
    verdict.witness = best_witness;
    Ok(())
}

pub fn check_right_omnipresent<F: FiniteField>(map: &TensorSumMap<F>, mode: CheckMode) -> Result<Verdict<F>> {
    check(map, Property::RightOmnipresent, mode, None)
}

pub fn check_left_omnipresent<F: FiniteField>(map: &TensorSumMap<F>, mode: CheckMode) -> Result<Verdict<F>> {
    check(map, Property::LeftOmnipresent, mode, None)
}

pub fn check_right_general<F: FiniteField>(
    map: &TensorSumMap<F>,
    profiles: Option<&[Vec<usize>]>,
    mode: CheckMode,
) -> Result<Verdict<F>> {
    check(map, Property::RightGeneral, mode, profiles)
}

pub fn check_left_general<F: FiniteField>(
    map: &TensorSumMap<F>,
    profiles: Option<&[Vec<usize>]>,
    mode: CheckMode,
) -> Result<Verdict<F>> {
    check(map, Property::LeftGeneral, mode, profiles)
}
