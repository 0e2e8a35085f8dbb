//! Conflict detection.
//!
//! Two requests conflict when they target the same service at the same
//! location over overlapping time, come from different residents and ask
//! for different values of the same attribute. Larger groups are the
//! connected components of that relation among simultaneously active
//! requests, so a chain A–B–C whose ends never meet yields two situations,
//! not one.

use std::collections::{BTreeMap, BTreeSet};

use crate::model::{ConflictSituation, Location, Segment, ServiceId, ServiceRequest, TimeOfDayInterval, SECONDS_PER_DAY};

pub fn is_conflict(a: &ServiceRequest, b: &ServiceRequest) -> bool {
    a.service_id == b.service_id
        && a.location == b.location
        && a.interval.overlaps(&b.interval)
        && a.resident != b.resident
        && a.attribute == b.attribute
        && a.value != b.value
}

/// Groups conflicting requests into situations, each spanning a maximal
/// stretch of time over which its membership is constant.
///
/// Output is sorted by service, location, window start, window end and
/// member ids, so it does not depend on input order.
pub fn detect_conflicts(requests: &[ServiceRequest]) -> Vec<ConflictSituation> {
    // Requests on different attributes never conflict, so a resident's
    // volume request does not shadow their channel request.
    let mut partitions: BTreeMap<(&ServiceId, &Location, &str), Vec<&ServiceRequest>> = BTreeMap::new();
    for r in requests {
        partitions.entry((&r.service_id, &r.location, &r.attribute)).or_default().push(r);
    }
    let mut out = Vec::new();
    for ((service, location, _), mut group) in partitions {
        group.sort_by(|a, b| a.request_id.cmp(&b.request_id));
        for (members, window) in sweep(&group) {
            out.push(ConflictSituation {
                service_id: service.clone(),
                location: location.clone(),
                window,
                requests: members.iter().map(|&i| group[i].clone()).collect(),
            });
        }
    }
    out.sort_by(|a, b| {
        (&a.service_id, &a.location, a.window.start(), a.window.end(), a.member_ids()).cmp(&(
            &b.service_id,
            &b.location,
            b.window.start(),
            b.window.end(),
            b.member_ids(),
        ))
    });
    out
}

/// Among the active requests, keeps one per resident: the earliest start,
/// then the smallest id (`group` is id-sorted).
pub(crate) fn one_per_resident(group: &[&ServiceRequest], active: &[usize]) -> Vec<usize> {
    let mut best: BTreeMap<&str, usize> = BTreeMap::new();
    for &i in active {
        let r = group[i];
        best.entry(r.resident.as_str())
            .and_modify(|b| {
                if r.interval.start() < group[*b].interval.start() {
                    *b = i;
                }
            })
            .or_insert(i);
    }
    let mut kept: Vec<usize> = best.into_values().collect();
    kept.sort_unstable();
    kept
}

/// Connected components (of size ≥ 2) of the conflict graph on `nodes`.
pub(crate) fn components(group: &[&ServiceRequest], nodes: &[usize]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if is_conflict(group[nodes[i]], group[nodes[j]]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..nodes.len() {
        let root = find(&mut parent, i);
        comps.entry(root).or_default().push(nodes[i]);
    }
    comps.into_values().filter(|c| c.len() >= 2).collect()
}

fn sweep(group: &[&ServiceRequest]) -> Vec<(Vec<usize>, TimeOfDayInterval)> {
    let segments: Vec<Vec<Segment>> = group.iter().map(|r| r.interval.segments()).collect();
    let mut cuts: BTreeSet<u32> = [0, SECONDS_PER_DAY].into();
    for s in segments.iter().flatten() {
        cuts.insert(s.start);
        cuts.insert(s.end);
    }
    let cuts: Vec<u32> = cuts.into_iter().collect();

    // Component -> the elementary segments on which it is present.
    let mut presence: BTreeMap<Vec<usize>, Vec<Segment>> = BTreeMap::new();
    for w in cuts.windows(2) {
        let piece = Segment { start: w[0], end: w[1] };
        let active: Vec<usize> = (0..group.len())
            .filter(|&i| segments[i].iter().any(|s| s.start <= piece.start && piece.end <= s.end))
            .collect();
        if active.len() < 2 {
            continue;
        }
        for comp in components(group, &one_per_resident(group, &active)) {
            presence.entry(comp).or_default().push(piece);
        }
    }

    let mut out = Vec::new();
    for (members, pieces) in presence {
        let mut runs: Vec<Segment> = Vec::new();
        for p in pieces {
            match runs.last_mut() {
                Some(last) if last.end == p.start => last.end = p.end,
                _ => runs.push(p),
            }
        }
        for window in TimeOfDayInterval::from_pieces(&runs) {
            out.push((members.clone(), window));
        }
    }
    out
}
