//! Classic group-recommendation aggregations over the same H matrix, plus
//! the first-come-first-served rule.

use super::{HMatrix, RankedItem};
use crate::model::ConflictSituation;

fn rank_columns(h: &HMatrix, fold: impl Fn(&[f64]) -> f64) -> Vec<RankedItem> {
    let mut ranked: Vec<RankedItem> = h
        .item_set
        .items()
        .iter()
        .enumerate()
        .map(|(j, item)| RankedItem { item: item.clone(), score: fold(&h.m.column(j)) })
        .collect();
    ranked.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.item.cmp(&b.item)));
    ranked
}

/// Column means, highest first.
pub fn baseline_avg(h: &HMatrix) -> Vec<RankedItem> {
    rank_columns(h, |c| c.iter().sum::<f64>() / c.len() as f64)
}

/// Least misery: column minima, highest first.
pub fn baseline_lm(h: &HMatrix) -> Vec<RankedItem> {
    rank_columns(h, |c| c.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Most pleasure: column maxima, highest first.
pub fn baseline_mp(h: &HMatrix) -> Vec<RankedItem> {
    rank_columns(h, |c| c.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

/// Requested values ordered by request start, then resident id; each
/// value's score is the start second of its first request.
pub(crate) fn use_first_order(situation: &ConflictSituation) -> Vec<RankedItem> {
    let mut reqs: Vec<_> = situation.requests.iter().collect();
    reqs.sort_by(|a, b| (a.interval.start(), &a.resident).cmp(&(b.interval.start(), &b.resident)));
    let mut out: Vec<RankedItem> = Vec::new();
    for r in reqs {
        let item = r.value.label();
        if !out.iter().any(|x| x.item == item) {
            out.push(RankedItem { item, score: f64::from(r.interval.start().seconds()) });
        }
    }
    out
}

/// The value requested by whoever started first. `None` for an empty
/// situation.
pub fn baseline_use_first(situation: &ConflictSituation) -> Option<String> {
    use_first_order(situation).into_iter().next().map(|r| r.item)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::ItemSet;
    use super::*;
    use crate::linalg::DenseMatrix;
    use crate::model::TimeOfDayInterval;
    use proptest::prelude::*;

    fn worked() -> HMatrix {
        HMatrix::build(&worked_table(), &ItemSet::build(&worked_table(), &worked_situation(), 3).unwrap(), &[
            "R1".into(),
            "R2".into(),
            "R3".into(),
        ])
        .unwrap()
    }

    fn score(r: &[RankedItem], item: &str) -> f64 {
        r.iter().find(|x| x.item == item).unwrap().score
    }

    #[test]
    fn worked_baselines() {
        let h = worked();
        let avg = baseline_avg(&h);
        for (item, want) in [("Ch1", 18.51), ("Ch2", 15.27), ("Ch3", 14.71), ("Ch5", 17.01)] {
            assert!((score(&avg, item) - want).abs() < 0.01);
        }
        let lm = baseline_lm(&h);
        assert_eq!((score(&lm, "Ch1"), score(&lm, "Ch2"), score(&lm, "Ch5")), (16.08, 14.12, 11.04));
        let mp = baseline_mp(&h);
        assert_eq!([score(&mp, "Ch1"), score(&mp, "Ch2"), score(&mp, "Ch3"), score(&mp, "Ch5")], [20.0, 17.2, 15.2, 20.0]);
        // Ch1 and Ch5 tie on MP; lexicographic order decides.
        assert_eq!(mp[0].item, "Ch1");
        assert_eq!(avg[0].item, "Ch1");
    }

    #[test]
    fn single_resident_baselines_coincide() {
        let t = table(&[("R1", &[("a", 3.0), ("b", 5.0)])]);
        let items = ItemSet::from_items(["a".to_owned(), "b".to_owned()]);
        let h = HMatrix::build(&t, &items, &["R1".into()]).unwrap();
        assert_eq!(baseline_avg(&h), baseline_lm(&h));
        assert_eq!(baseline_lm(&h), baseline_mp(&h));
    }

    #[test]
    fn use_first_examples() {
        let mut s = situation(&[("R2", "Ch2"), ("R1", "Ch1"), ("R3", "Ch3")]);
        for (r, start) in s.requests.iter_mut().zip(["20:05", "20:10", "20:00"]) {
            r.interval = TimeOfDayInterval::parse(start, "20:30").unwrap();
        }
        assert_eq!(baseline_use_first(&s).as_deref(), Some("Ch3"));
        let tie = situation(&[("R2", "Ch2"), ("R1", "Ch1")]);
        assert_eq!(baseline_use_first(&tie).as_deref(), Some("Ch1"));
        assert_eq!(baseline_use_first(&situation(&[("R9", "x")])).as_deref(), Some("x"));
    }

    proptest! {
        #[test]
        fn baselines_match_direct_folds(rows in (1usize..5, 1usize..6).prop_flat_map(|(g, n)| {
            prop::collection::vec(prop::collection::vec(0.0f64..50.0, n), g)
        })) {
            let m = DenseMatrix::from_rows(&rows).unwrap();
            let items = ItemSet::from_items((0..m.cols()).map(|j| format!("i{j}")));
            let residents: Vec<_> = (0..m.rows()).map(|i| format!("R{i}").as_str().into()).collect();
            let h = HMatrix { residents, item_set: items, m };
            for j in 0..rows[0].len() {
                let mut mean = 0.0;
                let mut lo = rows[0][j];
                let mut hi = rows[0][j];
                for r in &rows {
                    mean += r[j];
                    if r[j] < lo { lo = r[j]; }
                    if r[j] > hi { hi = r[j]; }
                }
                mean /= rows.len() as f64;
                let name = format!("i{j}");
                prop_assert!((score(&baseline_avg(&h), &name) - mean).abs() < 1e-12);
                prop_assert_eq!(score(&baseline_lm(&h), &name), lo);
                prop_assert_eq!(score(&baseline_mp(&h), &name), hi);
            }
            for ranked in [baseline_avg(&h), baseline_lm(&h), baseline_mp(&h)] {
                prop_assert!(ranked.windows(2).all(|w| w[0].score > w[1].score || (w[0].score == w[1].score && w[0].item < w[1].item)));
            }
        }
    }
}
