//! Resolving a conflict by aggregating the residents' historical
//! preferences.
//!
//! The resident × item score matrix H is factorised, truncated to its
//! dominant latent features, and the requested items' latent rows are
//! averaged into an "ideal" item. Projecting that item back through the
//! resident factors gives the score vector a perfect compromise would have
//! (IRIM); candidates are ranked by Euclidean distance (IRID) from it.

mod baselines;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use baselines::{baseline_avg, baseline_lm, baseline_mp, baseline_use_first};

use crate::error::{Error, Result};
use crate::linalg::{l2_norm, svd, truncate, DenseMatrix, TruncatedSvd, DEFAULT_SVD_TOLERANCE};
use crate::model::{ConflictSituation, ResidentId, ServiceEvent};
use crate::preference::{build_preference_table, ExtractionOptions, PreferenceTable};
use crate::provenance::RunConfig;

/// The candidate items of a group, sorted lexicographically. Column `j` of
/// H is `items()[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ItemSet(Vec<String>);

impl ItemSet {
    pub fn from_items<I: IntoIterator<Item = String>>(items: I) -> Self {
        let mut v: Vec<String> = items.into_iter().collect();
        v.sort();
        v.dedup();
        Self(v)
    }

    /// Each situation resident's `top_n` items together with every
    /// currently requested value.
    pub fn build(table: &PreferenceTable, situation: &ConflictSituation, top_n: usize) -> Result<Self> {
        let mut items = Vec::new();
        let mut empty = Vec::new();
        for resident in situation.residents() {
            let top = table.top_items(&resident, top_n);
            let request = situation.request_of(&resident);
            if top.is_empty() && request.is_none() {
                empty.push(resident.to_string());
            }
            items.extend(top.into_iter().map(str::to_owned));
            items.extend(request.map(|r| r.value.label()));
        }
        if !empty.is_empty() {
            return Err(Error::NoCandidates(empty));
        }
        Ok(Self::from_items(items))
    }

    pub fn items(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, item: &str) -> Option<usize> {
        self.0.binary_search_by(|x| x.as_str().cmp(item)).ok()
    }
}

/// Resident × item preference scores, zero where a resident never used an
/// item in the window.
#[derive(Clone, Debug, PartialEq)]
pub struct HMatrix {
    pub residents: Vec<ResidentId>,
    pub item_set: ItemSet,
    pub m: DenseMatrix,
}

impl HMatrix {
    pub fn build(table: &PreferenceTable, item_set: &ItemSet, residents: &[ResidentId]) -> Result<Self> {
        if item_set.is_empty() {
            return Err(Error::Config("item set is empty".into()));
        }
        let rows: Vec<Vec<f64>> = residents
            .iter()
            .map(|r| item_set.items().iter().map(|i| table.score(r, i)).collect())
            .collect();
        Ok(Self {
            residents: residents.to_vec(),
            item_set: item_set.clone(),
            m: DenseMatrix::from_rows(&rows)?,
        })
    }

    pub fn column(&self, item: &str) -> Result<Vec<f64>> {
        let j = self
            .item_set
            .index_of(item)
            .ok_or_else(|| Error::UnknownItem(item.to_owned()))?;
        Ok(self.m.column(j))
    }
}

/// Mean latent row of the requested items.
pub fn compute_crim<S: AsRef<str>>(tsvd: &TruncatedSvd, item_set: &ItemSet, requested: &[S]) -> Result<Vec<f64>> {
    if requested.is_empty() {
        return Err(Error::NotAConflict("no requested items".into()));
    }
    if tsvd.v_w.rows() != item_set.len() {
        return Err(Error::Dimension {
            op: "compute_crim",
            left: format!("V {}x{}", tsvd.v_w.rows(), tsvd.v_w.cols()),
            right: format!("{} items", item_set.len()),
        });
    }
    let mut crim = vec![0.0; tsvd.w];
    for item in requested {
        let j = item_set
            .index_of(item.as_ref())
            .ok_or_else(|| Error::UnknownItem(item.as_ref().to_owned()))?;
        for (c, x) in crim.iter_mut().zip(tsvd.v_w.row(j)) {
            *c += x;
        }
    }
    let n = requested.len() as f64;
    crim.iter_mut().for_each(|c| *c /= n);
    Ok(crim)
}

/// `Ã · D̃ · crim`.
pub fn compute_irim(tsvd: &TruncatedSvd, crim: &[f64]) -> Result<Vec<f64>> {
    if crim.len() != tsvd.w || tsvd.d_w.len() != tsvd.w {
        return Err(Error::Dimension {
            op: "compute_irim",
            left: format!("rank {}", tsvd.w),
            right: format!("vector of {}", crim.len()),
        });
    }
    let scaled: Vec<f64> = tsvd.d_w.iter().zip(crim).map(|(d, c)| d * c).collect();
    tsvd.a_w.mul_vec(&scaled)
}

pub fn compute_irid(h: &HMatrix, item: &str, irim: &[f64]) -> Result<f64> {
    let col = h.column(item)?;
    if col.len() != irim.len() {
        return Err(Error::Dimension {
            op: "compute_irid",
            left: format!("column of {}", col.len()),
            right: format!("vector of {}", irim.len()),
        });
    }
    let diff: Vec<f64> = col.iter().zip(irim).map(|(a, b)| a - b).collect();
    Ok(l2_norm(&diff))
}

fn round_half_away(x: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (x * scale).round() / scale
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Svd,
    Avg,
    Lm,
    Mp,
    UseFirst,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [Strategy::Svd, Strategy::Avg, Strategy::Lm, Strategy::Mp, Strategy::UseFirst];

    pub fn label(self) -> &'static str {
        match self {
            Strategy::Svd => "svd",
            Strategy::Avg => "avg",
            Strategy::Lm => "lm",
            Strategy::Mp => "mp",
            Strategy::UseFirst => "use-first",
        }
    }

    /// What the per-item score in a ranking means.
    pub fn score_name(self) -> &'static str {
        match self {
            Strategy::Svd => "irid",
            Strategy::Avg => "mean",
            Strategy::Lm => "min",
            Strategy::Mp => "max",
            Strategy::UseFirst => "start_seconds",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.label() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown strategy `{s}` (expected svd, avg, lm, mp or use-first)")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankedItem {
    pub item: String,
    pub score: f64,
}

/// Intermediate quantities of the factorisation approach.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SvdTrace {
    pub residents: Vec<ResidentId>,
    pub items: Vec<String>,
    pub h: Vec<Vec<f64>>,
    pub singular_values: Vec<f64>,
    pub w: usize,
    pub crim: Vec<f64>,
    pub irim: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Resolution {
    pub strategy: Strategy,
    /// Best first.
    pub ranked_items: Vec<RankedItem>,
    pub chosen: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<SvdTrace>,
}

impl Resolution {
    fn new(strategy: Strategy, ranked_items: Vec<RankedItem>, k: usize, trace: Option<SvdTrace>) -> Self {
        let chosen = ranked_items.iter().take(k).map(|r| r.item.clone()).collect();
        Self { strategy, ranked_items, chosen, trace }
    }

    /// The leading `n` items of the ranking.
    pub fn top(&self, n: usize) -> Vec<String> {
        self.ranked_items.iter().take(n).map(|r| r.item.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResolveConfig {
    pub top_n: usize,
    pub alpha: f64,
    pub k: usize,
    /// Round CRIM to this many decimals before projecting. `None` keeps
    /// full precision.
    pub crim_decimals: Option<u32>,
    pub svd_tolerance: f64,
    pub extraction: ExtractionOptions,
}

impl Default for ResolveConfig {
    fn default() -> Self {
        Self::from_run_config(&RunConfig::default())
    }
}

impl ResolveConfig {
    pub fn from_run_config(c: &RunConfig) -> Self {
        Self {
            top_n: c.top_n,
            alpha: c.alpha,
            k: c.k,
            crim_decimals: None,
            svd_tolerance: DEFAULT_SVD_TOLERANCE,
            extraction: ExtractionOptions {
                lookback_days: c.lookback_days,
                as_of: None,
            },
        }
    }
}

/// Extracts preferences from `history` and resolves with the SVD strategy.
pub fn resolve(situation: &ConflictSituation, history: &[ServiceEvent], cfg: &ResolveConfig) -> Result<Resolution> {
    check_situation(situation)?;
    let table = build_preference_table(history, situation, cfg.extraction)?;
    resolve_with_table(situation, &table, Strategy::Svd, cfg)
}

fn check_situation(situation: &ConflictSituation) -> Result<()> {
    if situation.residents().len() < 2 {
        return Err(Error::NotAConflict(format!(
            "situation on {} at {} has fewer than two residents",
            situation.service_id, situation.window
        )));
    }
    Ok(())
}

/// The candidate item set and H matrix every strategy ranks over.
pub fn candidate_matrix(table: &PreferenceTable, situation: &ConflictSituation, top_n: usize) -> Result<HMatrix> {
    let items = ItemSet::build(table, situation, top_n)?;
    HMatrix::build(table, &items, &situation.residents())
}

pub fn resolve_with_table(
    situation: &ConflictSituation,
    table: &PreferenceTable,
    strategy: Strategy,
    cfg: &ResolveConfig,
) -> Result<Resolution> {
    check_situation(situation)?;
    if strategy == Strategy::UseFirst {
        return Ok(Resolution::new(strategy, baselines::use_first_order(situation), cfg.k, None));
    }
    let h = candidate_matrix(table, situation, cfg.top_n)?;
    let (ranked, trace) = match strategy {
        Strategy::Svd => {
            let (ranked, trace) = rank_by_irid(&h, situation, cfg)?;
            (ranked, Some(trace))
        }
        Strategy::Avg => (baseline_avg(&h), None),
        Strategy::Lm => (baseline_lm(&h), None),
        Strategy::Mp => (baseline_mp(&h), None),
        Strategy::UseFirst => unreachable!(),
    };
    Ok(Resolution::new(strategy, ranked, cfg.k, trace))
}

fn rank_by_irid(h: &HMatrix, situation: &ConflictSituation, cfg: &ResolveConfig) -> Result<(Vec<RankedItem>, SvdTrace)> {
    let decomposition = svd(&h.m, cfg.svd_tolerance)?;
    let tsvd = truncate(&decomposition, cfg.alpha)?;
    let requested: Vec<String> = situation.requests.iter().map(|r| r.value.label()).collect();
    let mut crim = compute_crim(&tsvd, &h.item_set, &requested)?;
    if let Some(d) = cfg.crim_decimals {
        crim = crim.into_iter().map(|c| round_half_away(c, d)).collect();
    }
    let irim = compute_irim(&tsvd, &crim)?;
    let mut ranked = h
        .item_set
        .items()
        .iter()
        .map(|item| Ok(RankedItem { item: item.clone(), score: compute_irid(h, item, &irim)? }))
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(|a, b| a.score.total_cmp(&b.score).then_with(|| a.item.cmp(&b.item)));
    let trace = SvdTrace {
        residents: h.residents.clone(),
        items: h.item_set.items().to_vec(),
        h: h.m.to_rows(),
        singular_values: decomposition.singular_values,
        w: tsvd.w,
        crim,
        irim,
    };
    Ok((ranked, trace))
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::model::{AttributeValue, ServiceRequest, TimeOfDayInterval};

    pub const WORKED_ITEMS: [&str; 4] = ["Ch1", "Ch2", "Ch3", "Ch5"];
    pub const WORKED_H: [[f64; 4]; 3] = [
        [19.44, 14.48, 15.20, 11.04],
        [20.00, 17.20, 14.52, 20.00],
        [16.08, 14.12, 14.40, 20.00],
    ];

    pub fn situation(requests: &[(&str, &str)]) -> ConflictSituation {
        let window = TimeOfDayInterval::parse("20:00", "20:30").unwrap();
        ConflictSituation {
            service_id: "tv".into(),
            location: "living room".into(),
            window,
            requests: requests
                .iter()
                .enumerate()
                .map(|(i, (r, v))| ServiceRequest {
                    request_id: format!("q{}", i + 1),
                    service_id: "tv".into(),
                    attribute: "channel".into(),
                    value: AttributeValue::from(*v),
                    interval: window,
                    location: "living room".into(),
                    resident: (*r).into(),
                })
                .collect(),
        }
    }

    pub fn worked_situation() -> ConflictSituation {
        situation(&[("R1", "Ch3"), ("R2", "Ch2"), ("R3", "Ch5")])
    }

    pub fn table(rows: &[(&str, &[(&str, f64)])]) -> PreferenceTable {
        let mut t = PreferenceTable::default();
        for (r, items) in rows {
            t.add_resident((*r).into());
            for (i, s) in *items {
                t.set((*r).into(), *i, *s).unwrap();
            }
        }
        t
    }

    pub fn worked_table() -> PreferenceTable {
        let mut t = PreferenceTable::default();
        for (r, row) in ["R1", "R2", "R3"].iter().zip(WORKED_H) {
            for (item, s) in WORKED_ITEMS.iter().zip(row) {
                t.set((*r).into(), *item, s).unwrap();
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use super::Strategy;
    use crate::linalg::SvdResult;
    use proptest::prelude::*;
    use proptest::strategy::Strategy as _;

    #[test]
    fn item_set_is_union_of_top_items_and_requests() {
        let s = worked_situation();
        let t = worked_table();
        let items = ItemSet::build(&t, &s, 3).unwrap();
        assert_eq!(items.items(), WORKED_ITEMS);

        let narrow = table(&[("R1", &[("Ch1", 9.0), ("Ch2", 8.0), ("Ch3", 7.0), ("Ch4", 1.0)]), ("R2", &[("Ch1", 5.0)])]);
        let s = situation(&[("R1", "Ch4"), ("R2", "Ch9")]);
        let items = ItemSet::build(&narrow, &s, 3).unwrap();
        assert_eq!(items.items(), ["Ch1", "Ch2", "Ch3", "Ch4", "Ch9"]);

        let lone = table(&[("R1", &[("a", 1.0), ("b", 2.0)])]);
        let only = situation(&[("R1", "a")]);
        assert_eq!(ItemSet::build(&lone, &only, 10).unwrap().items(), ["a", "b"]);

        assert_eq!(narrow.top_items(&"R1".into(), 2), ["Ch1", "Ch2"]);
    }

    #[test]
    fn h_matrix_zero_fills() {
        let t = table(&[("R1", &[("a", 7.0)]), ("R2", &[("b", 2.0)])]);
        let items = ItemSet::from_items(["a".to_owned(), "b".to_owned()]);
        let h = HMatrix::build(&t, &items, &["R1".into(), "R2".into()]).unwrap();
        assert_eq!(h.m.to_rows(), vec![vec![7.0, 0.0], vec![0.0, 2.0]]);
        let one = HMatrix::build(&t, &ItemSet::from_items(["a".to_owned()]), &["R1".into()]).unwrap();
        assert_eq!(one.m.to_rows(), vec![vec![7.0]]);
        assert!(HMatrix::build(&t, &ItemSet::from_items([]), &["R1".into()]).is_err());
        assert!(matches!(h.column("zz"), Err(Error::UnknownItem(_))));
    }

    fn hand_tsvd(a: &[[f64; 2]], d: [f64; 2], v: &[[f64; 2]]) -> TruncatedSvd {
        TruncatedSvd {
            a_w: DenseMatrix::from_rows(a).unwrap(),
            d_w: d.to_vec(),
            v_w: DenseMatrix::from_rows(v).unwrap(),
            w: 2,
        }
    }

    #[test]
    fn crim_irim_irid_by_hand() {
        let t = hand_tsvd(&[[1.0, 0.0], [0.0, 1.0]], [3.0, 2.0], &[[0.6, 0.8], [0.8, -0.6]]);
        let items = ItemSet::from_items(["x".to_owned(), "y".to_owned()]);
        let crim = compute_crim(&t, &items, &["x", "y"]).unwrap();
        assert!((crim[0] - 0.7).abs() < 1e-15 && (crim[1] - 0.1).abs() < 1e-15);
        assert_eq!(compute_crim(&t, &items, &["y", "y"]).unwrap(), vec![0.8, -0.6]);
        assert!(compute_crim(&t, &items, &["z"]).is_err());

        let irim = compute_irim(&t, &crim).unwrap();
        assert!((irim[0] - 2.1).abs() < 1e-12 && (irim[1] - 0.2).abs() < 1e-12);
        assert_eq!(compute_irim(&t, &[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        assert!(compute_irim(&t, &[1.0]).is_err());

        let rank1 = TruncatedSvd {
            a_w: DenseMatrix::from_rows(&[[0.6], [0.8]]).unwrap(),
            d_w: vec![5.0],
            v_w: DenseMatrix::from_rows(&[[1.0]]).unwrap(),
            w: 1,
        };
        assert_eq!(compute_irim(&rank1, &[0.5]).unwrap(), vec![1.5, 2.0]);

        let ht = table(&[("R1", &[("x", 4.0), ("y", 1.0)]), ("R2", &[("x", 6.0)])]);
        let h = HMatrix::build(&ht, &items, &["R1".into(), "R2".into()]).unwrap();
        assert_eq!(compute_irid(&h, "x", &[1.0, 2.0]).unwrap(), 5.0);
        assert_eq!(compute_irid(&h, "x", &[4.0, 6.0]).unwrap(), 0.0);
        assert!(compute_irid(&h, "nope", &[0.0, 0.0]).is_err());
    }

    #[test]
    fn worked_example_ranking() {
        let cfg = ResolveConfig { k: 2, ..ResolveConfig::default() };
        let r = resolve_with_table(&worked_situation(), &worked_table(), Strategy::Svd, &cfg).unwrap();
        let order: Vec<&str> = r.ranked_items.iter().map(|x| x.item.as_str()).collect();
        assert_eq!(order, ["Ch2", "Ch3", "Ch5", "Ch1"]);
        assert_eq!(r.chosen, ["Ch2", "Ch3"]);
        let trace = r.trace.unwrap();
        assert_eq!(trace.w, 2);
        // Our sign convention makes both latent coordinates positive here.
        assert!((trace.crim[0] - 0.4769).abs() < 1e-3 && (trace.crim[1] - 0.1519).abs() < 1e-3);
    }

    #[test]
    fn rounded_crim_reproduces_printed_arithmetic() {
        let cfg = ResolveConfig { crim_decimals: Some(2), ..ResolveConfig::default() };
        let r = resolve_with_table(&worked_situation(), &worked_table(), Strategy::Svd, &cfg).unwrap();
        let irim = r.trace.as_ref().unwrap().irim.clone();
        for (got, want) in irim.iter().zip([13.623, 17.539, 16.107]) {
            assert!((got - want).abs() < 0.05, "{got} vs {want}");
        }
        let score = |item: &str| r.ranked_items.iter().find(|x| x.item == item).unwrap().score;
        for (item, want) in [("Ch1", 6.32), ("Ch2", 2.19), ("Ch3", 3.81), ("Ch5", 5.28)] {
            assert!((score(item) - want).abs() < 0.02, "{item}: {}", score(item));
        }
    }

    #[test]
    fn rounding_is_symmetric() {
        assert_eq!(round_half_away(0.475, 2), -round_half_away(-0.475, 2));
        assert_eq!(round_half_away(-0.4769, 2), -0.48);
    }

    #[test]
    fn single_resident_is_not_a_conflict() {
        let s = situation(&[("R1", "Ch1")]);
        assert!(matches!(resolve(&s, &[], &ResolveConfig::default()), Err(Error::NotAConflict(_))));
    }

    #[test]
    fn unanimous_request_on_symmetric_history_ranks_first() {
        let rows: &[(&str, f64)] = &[("a", 10.0), ("b", 5.0), ("c", 1.0)];
        let t = table(&[("R1", rows), ("R2", rows), ("R3", rows)]);
        for target in ["a", "b", "c"] {
            let s = situation(&[("R1", target), ("R2", target), ("R3", target)]);
            let r = resolve_with_table(&s, &t, Strategy::Svd, &ResolveConfig::default()).unwrap();
            assert_eq!(r.chosen, [target]);
            assert!(r.ranked_items[0].score < 1e-9);
        }
    }

    #[test]
    fn strategy_labels_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.label().parse::<Strategy>().unwrap(), s);
        }
        assert!("median".parse::<Strategy>().is_err());
    }

    fn flip(svd: &SvdResult, mask: u32) -> SvdResult {
        let mut out = svd.clone();
        for k in 0..svd.singular_values.len() {
            if mask & (1 << k) != 0 {
                let neg_a: Vec<Vec<f64>> = out.a.to_rows();
                let neg_v: Vec<Vec<f64>> = out.v.to_rows();
                let a: Vec<Vec<f64>> = neg_a.into_iter().map(|mut r| { r[k] = -r[k]; r }).collect();
                let v: Vec<Vec<f64>> = neg_v.into_iter().map(|mut r| { r[k] = -r[k]; r }).collect();
                out.a = DenseMatrix::from_rows(&a).unwrap();
                out.v = DenseMatrix::from_rows(&v).unwrap();
            }
        }
        out
    }

    fn arb_case() -> impl proptest::strategy::Strategy<Value = (Vec<Vec<f64>>, Vec<usize>, u32)> {
        (2usize..=5, 2usize..=7).prop_flat_map(|(g, n)| {
            (
                prop::collection::vec(prop::collection::vec(0.0f64..30.0, n), g),
                prop::collection::vec(0..n, g),
                any::<u32>(),
            )
        })
    }

    proptest! {
        #[test]
        fn irim_is_sign_invariant((rows, picks, mask) in arb_case()) {
            let h = DenseMatrix::from_rows(&rows).unwrap();
            let items = ItemSet::from_items((0..h.cols()).map(|j| format!("i{j}")));
            let requested: Vec<String> = picks.iter().map(|j| format!("i{j}")).collect();
            let base = svd(&h, DEFAULT_SVD_TOLERANCE).unwrap();
            let irim_of = |s: &SvdResult| {
                let t = truncate(s, 0.97).unwrap();
                compute_irim(&t, &compute_crim(&t, &items, &requested).unwrap()).unwrap()
            };
            let a = irim_of(&base);
            let b = irim_of(&flip(&base, mask));
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-8);
            }
        }

        #[test]
        fn resolution_is_deterministic_and_irid_nonnegative((rows, picks, _) in arb_case()) {
            let residents: Vec<String> = (0..rows.len()).map(|i| format!("R{i}")).collect();
            let mut t = PreferenceTable::default();
            for (r, row) in residents.iter().zip(&rows) {
                for (j, s) in row.iter().enumerate() {
                    t.set(r.as_str().into(), format!("i{j}"), *s).unwrap();
                }
            }
            let reqs: Vec<(&str, String)> = residents.iter().zip(&picks).map(|(r, j)| (r.as_str(), format!("i{j}"))).collect();
            let reqs: Vec<(&str, &str)> = reqs.iter().map(|(r, v)| (*r, v.as_str())).collect();
            let s = situation(&reqs);
            let cfg = ResolveConfig::default();
            let a = resolve_with_table(&s, &t, Strategy::Svd, &cfg).unwrap();
            let b = resolve_with_table(&s, &t, Strategy::Svd, &cfg).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert!(a.ranked_items.iter().all(|r| r.score >= 0.0));
            prop_assert!(a.ranked_items.windows(2).all(|w| w[0].score <= w[1].score));
        }
    }
}
