//! Strategy comparison over synthesized resident groups.

use std::collections::{BTreeMap, BTreeSet};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::metrics::{adopted_items, average_satisfaction, harmonic, satisfaction_gain, Adopted};
use crate::aggregate::{resolve_with_table, ResolveConfig, Strategy};
use crate::detect::detect_conflicts;
use crate::error::{Error, Result};
use crate::model::{ConflictSituation, Location, ResidentId, ServiceEvent, ServiceId, ServiceRequest, TimeOfDayInterval};
use crate::preference::{build_preference_table, HistoryQuery, Lookback};
use crate::provenance::RunConfig;

/// Upper bound on resident groups evaluated per group size.
pub const DEFAULT_MAX_GROUPS: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvaluationConfig {
    pub strategies: Vec<Strategy>,
    pub group_sizes: Vec<usize>,
    pub adopted_threshold: f64,
    pub seed: u64,
    pub recommendation_list_size: usize,
    pub max_groups: usize,
    #[serde(skip)]
    pub resolve: ResolveConfig,
}

impl EvaluationConfig {
    /// All strategies, groups of 2 and 3, and a recommendation list as long
    /// as the number of items the resolver picks.
    pub fn from_run_config(c: &RunConfig) -> Self {
        Self {
            strategies: Strategy::ALL.to_vec(),
            group_sizes: vec![2, 3],
            adopted_threshold: c.adopted_threshold,
            seed: c.seed,
            recommendation_list_size: c.k,
            max_groups: DEFAULT_MAX_GROUPS,
            resolve: ResolveConfig::from_run_config(c),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.strategies.is_empty() {
            return Err(Error::Config("at least one strategy is required".into()));
        }
        if self.group_sizes.iter().any(|&g| g < 2) {
            return Err(Error::Config("group sizes must be at least 2".into()));
        }
        if !(self.adopted_threshold > 0.0 && self.adopted_threshold <= 1.0) {
            return Err(Error::Config("adopted threshold must lie in (0, 1]".into()));
        }
        if self.recommendation_list_size == 0 || self.max_groups == 0 {
            return Err(Error::Config("list size and group cap must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrategyOutcome {
    pub strategy: Strategy,
    pub recommended: Vec<String>,
    pub sg: f64,
    pub harmonic: f64,
    /// Members with nothing to gain from the list; they force harmonic to 0.
    pub harmonic_zero_members: Vec<ResidentId>,
    pub avg_satisfaction: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseRecord {
    pub group_size: usize,
    pub service: ServiceId,
    pub location: Location,
    pub window: TimeOfDayInterval,
    pub members: Vec<String>,
    pub outcomes: Vec<StrategyOutcome>,
}

impl CaseRecord {
    pub fn outcome(&self, strategy: Strategy) -> Option<&StrategyOutcome> {
        self.outcomes.iter().find(|o| o.strategy == strategy)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricRow {
    pub strategy: Strategy,
    pub group_size: usize,
    pub conflicts: usize,
    pub sg: Option<f64>,
    pub harmonic: Option<f64>,
    pub avg_satisfaction: Option<f64>,
    pub harmonic_zero_cases: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricReport {
    pub evaluation: EvaluationConfig,
    pub rows: Vec<MetricRow>,
    pub cases: Vec<CaseRecord>,
}

fn combinations<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, first) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, first.clone());
            out.push(rest);
        }
    }
    out
}

/// At most `cap` groups, drawn without replacement from the seeded stream
/// when there are more, kept in lexicographic order.
fn sample_groups(mut groups: Vec<Vec<ResidentId>>, cap: usize, seed: u64) -> Vec<Vec<ResidentId>> {
    if groups.len() <= cap {
        return groups;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..cap {
        let span = (groups.len() - i) as u64;
        let j = i + (rng.next_u64() % span) as usize;
        groups.swap(i, j);
    }
    groups.truncate(cap);
    groups.sort();
    groups
}

/// Situations formed when only `group`'s requests are considered and all of
/// them take part.
fn group_conflicts(requests: &[ServiceRequest], group: &[ResidentId]) -> Vec<ConflictSituation> {
    let members: BTreeSet<&ResidentId> = group.iter().collect();
    let subset: Vec<ServiceRequest> = requests.iter().filter(|r| members.contains(&r.resident)).cloned().collect();
    detect_conflicts(&subset)
        .into_iter()
        .filter(|s| s.residents().len() == group.len())
        .collect()
}

pub fn run_experiment(history: &[ServiceEvent], requests: &[ServiceRequest], cfg: &EvaluationConfig) -> Result<MetricReport> {
    cfg.validate()?;
    let residents: Vec<ResidentId> = requests
        .iter()
        .map(|r| r.resident.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let as_of = history.iter().map(|e| e.date).max();
    let mut extraction = cfg.resolve.extraction;
    extraction.as_of = extraction.as_of.or(as_of);
    let resolve_cfg = ResolveConfig { extraction, ..cfg.resolve.clone() };

    let mut cases = Vec::new();
    let mut sizes = cfg.group_sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    for &g in &sizes {
        let groups = sample_groups(combinations(&residents, g), cfg.max_groups, cfg.seed.wrapping_add(g as u64));
        for group in groups {
            for situation in group_conflicts(requests, &group) {
                cases.push(evaluate_case(history, &situation, g, cfg, &resolve_cfg)?);
            }
        }
    }

    let mut rows = Vec::new();
    if !requests.is_empty() {
        for &strategy in &cfg.strategies {
            for &g in &sizes {
                rows.push(summarize(&cases, strategy, g));
            }
        }
    }
    Ok(MetricReport { evaluation: cfg.clone(), rows, cases })
}

fn evaluate_case(
    history: &[ServiceEvent],
    situation: &ConflictSituation,
    group_size: usize,
    cfg: &EvaluationConfig,
    resolve_cfg: &ResolveConfig,
) -> Result<CaseRecord> {
    let table = build_preference_table(history, situation, resolve_cfg.extraction)?;
    let members = situation.residents();
    let query = HistoryQuery {
        service_id: situation.service_id.clone(),
        location: situation.location.clone(),
        window: situation.window,
        lookback: match (resolve_cfg.extraction.lookback_days, resolve_cfg.extraction.as_of) {
            (Some(days), Some(as_of)) => Some(Lookback { as_of, days }),
            _ => None,
        },
    };
    let adopted: BTreeMap<ResidentId, BTreeSet<String>> = members
        .iter()
        .map(|r| {
            let items = adopted_items(history, r, &query, situation.attribute(), cfg.adopted_threshold);
            (r.clone(), items)
        })
        .collect();
    let adopted = Adopted::PerResident(adopted);

    let mut outcomes = Vec::new();
    for &strategy in &cfg.strategies {
        let resolution = resolve_with_table(situation, &table, strategy, resolve_cfg)?;
        let recommended = resolution.top(cfg.recommendation_list_size);
        let h = harmonic(&table, &members, &recommended);
        let chosen = recommended.first().map(String::as_str).unwrap_or("");
        outcomes.push(StrategyOutcome {
            strategy,
            sg: satisfaction_gain(&table, &members, &recommended, &adopted),
            harmonic: h.value,
            harmonic_zero_members: h.zero_members,
            avg_satisfaction: average_satisfaction(&table, &members, chosen).value,
            recommended,
        });
    }
    Ok(CaseRecord {
        group_size,
        service: situation.service_id.clone(),
        location: situation.location.clone(),
        window: situation.window,
        members: situation.member_ids().into_iter().map(str::to_owned).collect(),
        outcomes,
    })
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn summarize(cases: &[CaseRecord], strategy: Strategy, group_size: usize) -> MetricRow {
    let outcomes: Vec<&StrategyOutcome> = cases
        .iter()
        .filter(|c| c.group_size == group_size)
        .filter_map(|c| c.outcome(strategy))
        .collect();
    MetricRow {
        strategy,
        group_size,
        conflicts: outcomes.len(),
        sg: mean(outcomes.iter().map(|o| o.sg)),
        harmonic: mean(outcomes.iter().map(|o| o.harmonic)),
        avg_satisfaction: mean(outcomes.iter().filter_map(|o| o.avg_satisfaction)),
        harmonic_zero_cases: outcomes.iter().filter(|o| !o.harmonic_zero_members.is_empty()).count(),
    }
}
