//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use iot_conflict::aggregate::{
    baseline_avg, baseline_lm, baseline_mp, candidate_matrix, compute_crim, compute_irid, compute_irim, HMatrix,
    ItemSet, RankedItem,
};
use iot_conflict::demo;
use iot_conflict::detect::detect_conflicts;
use iot_conflict::evaluate::harmonic;
use iot_conflict::ingest::optimal_partition;
use iot_conflict::linalg::{svd, truncate, DenseMatrix, TruncatedSvd, DEFAULT_SVD_TOLERANCE};
use iot_conflict::preference::{
    build_preference_table, preference_score, temporal_proximity, weigh, ExtractionOptions, OverlappingEvent,
    PreferenceTable,
};
use iot_conflict::{
    AttributeValue, ConflictSituation, ResidentId, ServiceEvent, ServiceRequest, TimeOfDayInterval,
};

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn check(id: &'static str, f: impl FnOnce() -> Result<String, String>) -> Outcome {
    let (pass, detail) = match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(p) => (
            false,
            format!("panicked: {}", p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()),
        ),
    };
    println!("{} {id} {detail}", if pass { "PASS" } else { "FAIL" });
    Outcome { id, pass, detail }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn near(label: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || format!("{label}: got {got:.6}, want {want} ± {tol}"))
}

fn score_of(ranked: &[RankedItem], item: &str) -> Result<f64, String> {
    ranked
        .iter()
        .find(|r| r.item == item)
        .map(|r| r.score)
        .ok_or_else(|| format!("{item} missing from ranking"))
}

fn iv(a: &str, b: &str) -> TimeOfDayInterval {
    TimeOfDayInterval::parse(a, b).unwrap()
}

// ---------------------------------------------------------------- AC1

fn ac1() -> Result<String, String> {
    let started = Instant::now();
    let r = demo::run(Some(2)).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    let t = r.trace.as_ref().ok_or("no factorisation trace")?;

    for (got, want) in t.singular_values.iter().zip([57.1127, 6.8771, 1.8235]) {
        near("singular value", *got, want, 1e-3)?;
    }
    ensure(t.singular_values.len() == 3, || "expected three singular values".into())?;
    ensure(t.w == 2, || format!("w = {}", t.w))?;
    ensure(t.crim.len() == 2, || format!("CRIM has {} entries", t.crim.len()))?;
    // Component signs follow the singular-vector sign convention.
    for (got, want) in t.crim.iter().zip([-0.48f64, 0.15]) {
        near("|CRIM|", got.abs(), want.abs(), 0.01)?;
    }
    for (got, want) in t.irim.iter().zip([13.623, 17.539, 16.107]) {
        near("IRIM", *got, want, 0.05)?;
    }
    for (item, want) in [("Ch1", 6.32), ("Ch2", 2.19), ("Ch3", 3.81), ("Ch5", 5.28)] {
        near(&format!("IRID {item}"), score_of(&r.ranked_items, item)?, want, 0.02)?;
    }
    let chosen: BTreeSet<&str> = r.chosen.iter().map(String::as_str).collect();
    ensure(chosen == BTreeSet::from(["Ch2", "Ch3"]), || format!("top-2 = {:?}", r.chosen))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;

    let full = demo::run(None).map_err(|e| e.to_string())?;
    let ft = full.trace.as_ref().ok_or("no trace")?;
    println!(
        "INFO AC1 unrounded CRIM {:.4?} IRIM {:.3?} ranking {:?}",
        ft.crim,
        ft.irim,
        full.ranked_items.iter().map(|x| x.item.as_str()).collect::<Vec<_>>()
    );
    Ok(format!(
        "sigma {:.4?} w {} CRIM {:.2?} IRIM {:.3?} top-2 {:?} in {:.1} ms",
        t.singular_values,
        t.w,
        t.crim,
        t.irim,
        r.chosen,
        elapsed.as_secs_f64() * 1e3
    ))
}

// ---------------------------------------------------------------- AC2

fn ac2() -> Result<String, String> {
    let h = candidate_matrix(&demo::table(), &demo::situation(), 3).map_err(|e| e.to_string())?;
    let avg = baseline_avg(&h);
    let lm = baseline_lm(&h);
    let mp = baseline_mp(&h);
    let items = ["Ch1", "Ch2", "Ch3", "Ch5"];
    for (item, want) in items.iter().zip([18.51, 15.27, 14.71, 17.01]) {
        near(&format!("AVG {item}"), score_of(&avg, item)?, want, 0.01)?;
    }
    for (item, want) in [("Ch1", 16.08), ("Ch2", 14.12), ("Ch5", 11.04)] {
        near(&format!("LM {item}"), score_of(&lm, item)?, want, 0.01)?;
    }
    for (item, want) in items.iter().zip([20.00, 17.20, 15.20, 20.00]) {
        near(&format!("MP {item}"), score_of(&mp, item)?, want, 0.01)?;
    }
    let show = |r: &[RankedItem]| r.iter().map(|x| format!("{}={:.2}", x.item, x.score)).collect::<Vec<_>>().join(" ");
    Ok(format!("AVG [{}] LM [{}] MP [{}]", show(&avg), show(&lm), show(&mp)))
}

// ---------------------------------------------------------------- AC3

fn tv_event(id: usize, resident: &str, day: u32, interval: TimeOfDayInterval, channel: &str) -> ServiceEvent {
    ServiceEvent {
        event_id: format!("e{id}"),
        service_id: "tv".into(),
        attributes: BTreeMap::from([("channel".to_owned(), AttributeValue::from(channel))]),
        date: NaiveDate::from_ymd_opt(2011, 6, 1).unwrap() + chrono::Days::new(u64::from(day)),
        interval,
        location: "living room".into(),
        resident: resident.into(),
    }
}

fn ac3() -> Result<String, String> {
    let a = temporal_proximity(&[iv("20:00", "21:00"), iv("20:45", "21:45")]).map_err(|e| e.to_string())?;
    let b = temporal_proximity(&[iv("18:00", "19:00"), iv("18:10", "19:10")]).map_err(|e| e.to_string())?;
    near("TP first pair", a, 0.571, 0.005)?;
    near("TP second pair", b, 0.857, 0.005)?;

    // Nineteen usages exactly on the window, one weighted 0.44.
    let w = iv("20:00", "20:30");
    let exact: Vec<ServiceEvent> = (0..19).map(|d| tv_event(d, "R1", d as u32, w, "Ch1")).collect();
    let refs: Vec<&ServiceEvent> = exact.iter().collect();
    let mut weighted = weigh(&refs, "channel", &w).map_err(|e| e.to_string())?;
    let partial = tv_event(99, "R1", 40, iv("20:20", "20:50"), "Ch1");
    weighted.push(OverlappingEvent { event: &partial, item: "Ch1".into(), proximity: 0.44 });
    let ps = preference_score(&weighted, "Ch1");
    ensure(ps == 19.0 * 1.0 + 1.0 * 0.44, || format!("PS = {ps}"))?;
    Ok(format!("TP {a:.4} {b:.4} PS {ps}"))
}

// ---------------------------------------------------------------- AC4

fn svd_property(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut worst_rec = 0f64;
    let mut worst_orth = 0f64;
    for case in 0..200 {
        let m = rng.random_range(1..=8usize);
        let n = rng.random_range(1..=12usize);
        let mut rows: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| rng.random_range(-10.0..10.0)).collect()).collect();
        match case % 4 {
            // Repeated row, zero column, scaled column.
            1 if m > 1 => rows[m - 1] = rows[0].clone(),
            2 => rows.iter_mut().for_each(|r| r[n - 1] = 0.0),
            3 if n > 1 => rows.iter_mut().for_each(|r| r[1] = 2.5 * r[0]),
            _ => {}
        }
        let mat = DenseMatrix::from_rows(&rows).map_err(|e| e.to_string())?;
        let s = svd(&mat, DEFAULT_SVD_TOLERANCE).map_err(|e| e.to_string())?;
        for i in 0..m {
            for j in 0..n {
                let rec: f64 = (0..s.singular_values.len())
                    .map(|k| s.a.get(i, k) * s.singular_values[k] * s.v.get(j, k))
                    .sum();
                worst_rec = worst_rec.max((rec - rows[i][j]).abs());
            }
        }
        for f in [&s.a, &s.v] {
            let (r, c) = f.shape();
            for p in 0..c {
                for q in 0..c {
                    let dot: f64 = (0..r).map(|i| f.get(i, p) * f.get(i, q)).sum();
                    worst_orth = worst_orth.max((dot - if p == q { 1.0 } else { 0.0 }).abs());
                }
            }
        }
        if s.singular_values.windows(2).any(|w| w[0] < w[1]) || s.singular_values.iter().any(|x| *x < 0.0) {
            return Err(format!("case {case}: singular values not sorted nonnegative"));
        }
    }
    ensure(worst_rec < 1e-8 && worst_orth < 1e-8, || {
        format!("svd: reconstruction {worst_rec:.2e}, orthogonality {worst_orth:.2e}")
    })?;
    Ok(format!("svd rec {worst_rec:.1e} orth {worst_orth:.1e}"))
}

fn flip_columns(m: &DenseMatrix, flip: &[bool]) -> DenseMatrix {
    let rows: Vec<Vec<f64>> = m
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().enumerate().map(|(j, x)| if flip[j] { -x } else { x }).collect())
        .collect();
    DenseMatrix::new(m.rows(), m.cols(), rows.concat()).unwrap()
}

fn random_table(rng: &mut ChaCha8Rng, residents: usize, items: usize) -> PreferenceTable {
    let mut t = PreferenceTable::default();
    for r in 0..residents {
        for i in 0..items {
            let score = if rng.random_bool(0.2) { 0.0 } else { rng.random_range(0.0..25.0) };
            t.set(ResidentId::new(format!("R{r}")), format!("I{i}"), score).unwrap();
        }
    }
    t
}

fn sign_property(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut worst = 0f64;
    for _ in 0..200 {
        let (nr, ni) = (rng.random_range(2..=4usize), rng.random_range(2..=6usize));
        let table = random_table(rng, nr, ni);
        let items = ItemSet::from_items((0..ni).map(|i| format!("I{i}")));
        let residents: Vec<ResidentId> = (0..nr).map(|r| ResidentId::new(format!("R{r}"))).collect();
        let h = HMatrix::build(&table, &items, &residents).map_err(|e| e.to_string())?;
        let s = svd(&h.m, DEFAULT_SVD_TOLERANCE).map_err(|e| e.to_string())?;
        let t = truncate(&s, 0.97).map_err(|e| e.to_string())?;
        let requested: Vec<String> = (0..nr).map(|_| format!("I{}", rng.random_range(0..ni))).collect();

        let flip: Vec<bool> = (0..t.w).map(|_| rng.random_bool(0.5)).collect();
        let flipped = TruncatedSvd {
            a_w: flip_columns(&t.a_w, &flip),
            d_w: t.d_w.clone(),
            v_w: flip_columns(&t.v_w, &flip),
            w: t.w,
        };
        let project = |t: &TruncatedSvd| -> Result<(Vec<f64>, Vec<f64>), String> {
            let crim = compute_crim(t, &items, &requested).map_err(|e| e.to_string())?;
            let irim = compute_irim(t, &crim).map_err(|e| e.to_string())?;
            let irid = items
                .items()
                .iter()
                .map(|i| compute_irid(&h, i, &irim))
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| e.to_string())?;
            Ok((irim, irid))
        };
        let (irim_a, irid_a) = project(&t)?;
        let (irim_b, irid_b) = project(&flipped)?;
        for (x, y) in irim_a.iter().chain(&irid_a).zip(irim_b.iter().chain(&irid_b)) {
            worst = worst.max((x - y).abs());
        }
    }
    ensure(worst < 1e-9, || format!("sign flip changed IRIM/IRID by {worst:.2e}"))?;
    Ok(format!("sign {worst:.1e}"))
}

fn brute_force_sse(sorted: &[f64], bins: usize) -> f64 {
    let n = sorted.len();
    let positions: Vec<usize> = (1..n).filter(|&i| sorted[i - 1] < sorted[i]).collect();
    let sse = |part: &[f64]| {
        let mean = part.iter().sum::<f64>() / part.len() as f64;
        part.iter().map(|x| (x - mean).powi(2)).sum::<f64>()
    };
    let mut best = f64::INFINITY;
    // Every (bins - 1)-subset of the admissible cut positions.
    for mask in 0u32..(1 << positions.len()) {
        if mask.count_ones() as usize != bins - 1 {
            continue;
        }
        let mut edges = vec![0];
        edges.extend(positions.iter().enumerate().filter(|(b, _)| mask & (1 << b) != 0).map(|(_, &p)| p));
        edges.push(n);
        best = best.min(edges.windows(2).map(|w| sse(&sorted[w[0]..w[1]])).sum());
    }
    best
}

fn binning_property(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut cases = 0;
    for round in 0..400 {
        let n = rng.random_range(1..=12usize);
        let mut values: Vec<f64> = (0..n)
            .map(|_| if round % 2 == 0 { f64::from(rng.random_range(0..15u32)) } else { rng.random_range(-50.0..50.0) })
            .collect();
        values.sort_by(f64::total_cmp);
        let distinct = 1 + values.windows(2).filter(|w| w[0] < w[1]).count();
        for bins in 1..=distinct {
            let (cuts, dp) = optimal_partition(&values, bins);
            let brute = brute_force_sse(&values, bins);
            ensure(cuts.len() == bins - 1, || format!("{values:?} into {bins}: cuts {cuts:?}"))?;
            ensure((dp - brute).abs() <= 1e-9 * (1.0 + brute), || {
                format!("{values:?} into {bins}: dp {dp} vs brute force {brute}")
            })?;
            cases += 1;
        }
    }
    Ok(format!("binning {cases} cases"))
}

fn random_request(rng: &mut ChaCha8Rng, id: usize) -> ServiceRequest {
    let start = (22 * 3600 + rng.random_range(0..4 * 3600u32)) % 86_400;
    let len = rng.random_range(1..=7200u32);
    let attribute = if rng.random_bool(0.9) { "channel" } else { "volume" };
    ServiceRequest {
        request_id: format!("q{id}"),
        service_id: if rng.random_bool(0.9) { "tv" } else { "radio" }.into(),
        attribute: attribute.into(),
        value: AttributeValue::from(["Ch1", "Ch2", "Ch3"][rng.random_range(0..3)]),
        interval: TimeOfDayInterval::from_seconds(start, (start + len) % 86_400).unwrap(),
        location: if rng.random_bool(0.9) { "living room" } else { "kitchen" }.into(),
        resident: ResidentId::new(format!("R{}", rng.random_range(1..=4))),
    }
}

fn clash(a: &ServiceRequest, b: &ServiceRequest) -> bool {
    a.service_id == b.service_id
        && a.location == b.location
        && a.resident != b.resident
        && a.attribute == b.attribute
        && a.value != b.value
}

/// Second-by-second scan: at each second keep each resident's earliest
/// active request per service, location and attribute, group clashing requests transitively, then join each
/// group's seconds into maximal runs (circularly).
fn detect_oracle(reqs: &[ServiceRequest]) -> BTreeSet<(Vec<String>, u32, u32)> {
    const DAY: usize = 86_400;
    let mut on: BTreeMap<Vec<String>, Vec<bool>> = BTreeMap::new();
    for t in 0..DAY as u32 {
        let mut per_resident: BTreeMap<(&str, &str, &str, &ResidentId), &ServiceRequest> = BTreeMap::new();
        for r in reqs.iter().filter(|r| r.interval.contains_second(t)) {
            let key = (r.service_id.as_str(), r.location.as_str(), r.attribute.as_str(), &r.resident);
            let e = per_resident.entry(key).or_insert(r);
            if (r.interval.start().seconds(), &r.request_id) < (e.interval.start().seconds(), &e.request_id) {
                *e = r;
            }
        }
        let nodes: Vec<&ServiceRequest> = per_resident.into_values().collect();
        if nodes.len() < 2 {
            continue;
        }
        let mut group: Vec<usize> = (0..nodes.len()).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..nodes.len() {
                for j in 0..nodes.len() {
                    if clash(nodes[i], nodes[j]) && group[j] < group[i] {
                        group[i] = group[j];
                        changed = true;
                    }
                }
            }
        }
        for g in 0..nodes.len() {
            let mut ids: Vec<String> = (0..nodes.len()).filter(|&i| group[i] == g).map(|i| nodes[i].request_id.clone()).collect();
            if ids.len() >= 2 {
                ids.sort();
                on.entry(ids).or_insert_with(|| vec![false; DAY])[t as usize] = true;
            }
        }
    }
    let mut out = BTreeSet::new();
    for (ids, secs) in on {
        let off = secs.iter().position(|x| !x).expect("request spans never cover the day");
        let mut i = 1;
        while i <= DAY {
            let t = (off + i) % DAY;
            if secs[t] {
                let mut len = 0;
                while secs[(t + len) % DAY] {
                    len += 1;
                }
                out.insert((ids.clone(), t as u32, ((t + len) % DAY) as u32));
                i += len;
            } else {
                i += 1;
            }
        }
    }
    out
}

fn detect_property(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut situations = 0;
    for case in 0..60 {
        let n = rng.random_range(2..=6usize);
        let reqs: Vec<ServiceRequest> = (0..n).map(|i| random_request(rng, i)).collect();
        let got: BTreeSet<(Vec<String>, u32, u32)> = detect_conflicts(&reqs)
            .iter()
            .map(|s| {
                let mut ids: Vec<String> = s.member_ids().into_iter().map(String::from).collect();
                ids.sort();
                (ids, s.window.start().seconds(), s.window.end().seconds())
            })
            .collect();
        let want = detect_oracle(&reqs);
        ensure(got == want, || format!("case {case}: detect {got:?} vs oracle {want:?}"))?;
        situations += got.len();
    }
    Ok(format!("detect 60 sets/{situations} situations"))
}

fn linearity_property(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let window = iv("20:00", "20:30");
    let situation = ConflictSituation {
        service_id: "tv".into(),
        location: "living room".into(),
        window,
        requests: ["R1", "R2"]
            .iter()
            .enumerate()
            .map(|(i, r)| ServiceRequest {
                request_id: format!("q{i}"),
                service_id: "tv".into(),
                attribute: "channel".into(),
                value: AttributeValue::from(["Ch1", "Ch2"][i]),
                interval: window,
                location: "living room".into(),
                resident: (*r).into(),
            })
            .collect(),
    };
    let residents = [ResidentId::new("R1"), ResidentId::new("R2")];
    let mut worst = 0f64;
    for _ in 0..200 {
        let n = rng.random_range(0..=20usize);
        let history: Vec<ServiceEvent> = (0..n)
            .map(|i| {
                let start = 19 * 3600 + rng.random_range(0..7200u32);
                let iv = TimeOfDayInterval::from_seconds(start, start + rng.random_range(1..3600u32)).unwrap();
                tv_event(i, ["R1", "R2"][rng.random_range(0..2)], rng.random_range(0..5), iv, ["Ch1", "Ch2", "Ch3"][rng.random_range(0..3)])
            })
            .collect();
        let copies = rng.random_range(2..=4usize);
        let repeated: Vec<ServiceEvent> = (0..copies)
            .flat_map(|c| {
                history.iter().map(move |e| ServiceEvent { event_id: format!("{}-{c}", e.event_id), ..e.clone() })
            })
            .collect();
        let opts = ExtractionOptions::default();
        let once = build_preference_table(&history, &situation, opts).map_err(|e| e.to_string())?;
        let many = build_preference_table(&repeated, &situation, opts).map_err(|e| e.to_string())?;
        for r in &residents {
            for item in ["Ch1", "Ch2", "Ch3"] {
                let (a, b) = (once.score(r, item), many.score(r, item));
                worst = worst.max((b - copies as f64 * a).abs());
            }
        }
    }
    ensure(worst < 1e-9, || format!("duplication broke linearity by {worst:.2e}"))?;
    Ok(format!("PS linearity {worst:.1e}"))
}

fn harmonic_property(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut cases = 0;
    for _ in 0..500 {
        let (nr, ni) = (rng.random_range(1..=5usize), rng.random_range(1..=6usize));
        let table = random_table(rng, nr, ni);
        let group: Vec<ResidentId> = (0..nr).map(|r| ResidentId::new(format!("R{r}"))).collect();
        let list: Vec<String> = (0..rng.random_range(1..=3)).map(|_| format!("I{}", rng.random_range(0..ni))).collect();
        let h = harmonic(&table, &group, &list).value;
        let mean = group.iter().map(|r| list.iter().map(|i| table.score(r, i)).sum::<f64>()).sum::<f64>() / nr as f64;
        ensure(h <= mean + 1e-9, || format!("harmonic {h} above mean {mean}"))?;
        cases += 1;
    }
    Ok(format!("harmonic {cases} cases"))
}

fn ac4() -> Result<String, String> {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let parts = [
        svd_property(&mut rng)?,
        sign_property(&mut rng)?,
        binning_property(&mut rng)?,
        detect_property(&mut rng)?,
        linearity_property(&mut rng)?,
        harmonic_property(&mut rng)?,
    ];
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("property suites took {elapsed:?}"))?;
    Ok(format!("{} in {:.1} s", parts.join("; "), elapsed.as_secs_f64()))
}

// ---------------------------------------------------------------- AC5, AC6

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

fn iotcr(dir: &Path, args: &[&str], stdin: Option<&[u8]>) -> Result<Vec<u8>, String> {
    use std::io::Write as _;
    let mut child = Command::new(env!("CARGO_BIN_EXE_iotcr"))
        .args(args)
        .current_dir(dir)
        .stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| e.to_string())?;
    if let Some(bytes) = stdin {
        child.stdin.take().unwrap().write_all(bytes).map_err(|e| e.to_string())?;
    }
    let out = child.wait_with_output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("iotcr {} exited {}: {}", args.join(" "), out.status, String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn ingest_args(data: &Path) -> Vec<String> {
    let mut args = vec!["ingest".to_owned()];
    for r in ["R1", "R2", "R3"] {
        args.push("--log".into());
        args.push(format!("{r}={}", data.join(format!("{}.csv", r.to_lowercase())).display()));
    }
    args.extend(["-o".into(), "store.jsonl".into()]);
    args
}

fn run_pipeline(dir: &Path) -> Result<(), String> {
    let data = data_dir();
    let requests = data.join("requests.jsonl").display().to_string();
    let ingest = ingest_args(&data);
    iotcr(dir, &ingest.iter().map(String::as_str).collect::<Vec<_>>(), None)?;
    let inputs = ["--store", "store.jsonl", "--requests", requests.as_str()];
    let with = |head: &[&'static str], tail: &[&'static str]| -> Vec<String> {
        head.iter().chain(inputs.iter()).chain(tail).map(|s| s.to_string()).collect()
    };
    let run = |args: Vec<String>, stdin: Option<&[u8]>| {
        iotcr(dir, &args.iter().map(String::as_str).collect::<Vec<_>>(), stdin)
    };
    run(with(&["detect"], &["-o", "situations.jsonl"]), None)?;
    run(with(&["resolve"], &["-o", "resolve-direct.jsonl", "--debug"]), None)?;
    run(with(&["resolve"], &["--situations", "situations.jsonl", "-o", "resolve-file.jsonl", "--debug"]), None)?;
    let situations = std::fs::read(dir.join("situations.jsonl")).map_err(|e| e.to_string())?;
    let piped = run(with(&["resolve"], &["--situations", "-", "--debug"]), Some(&situations))?;
    std::fs::write(dir.join("resolve-piped.jsonl"), piped).map_err(|e| e.to_string())?;
    run(with(&["resolve", "--strategy", "lm"], &["-o", "resolve-lm.jsonl"]), None)?;
    run(
        with(
            &["evaluate", "--seed", "2011"],
            &["--csv", "report.csv", "--json", "report.json", "--plot-data", "plots"],
        ),
        None,
    )?;
    Ok(())
}

fn files_under(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

struct Runs {
    a: tempfile::TempDir,
    b: tempfile::TempDir,
}

fn ac5(runs: &Runs) -> Result<String, String> {
    let text = std::fs::read_to_string(runs.a.path().join("report.json")).map_err(|e| e.to_string())?;
    let doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let cases = doc["report"]["cases"].as_array().ok_or("report has no cases")?;
    ensure(!cases.is_empty(), || "(a) no conflict situations".into())?;

    let mut fair = 0;
    for case in cases {
        let mut by: BTreeMap<&str, f64> = BTreeMap::new();
        for o in case["outcomes"].as_array().ok_or("case without outcomes")? {
            by.insert(o["strategy"].as_str().unwrap_or(""), o["harmonic"].as_f64().unwrap_or(f64::NAN));
        }
        let svd = by.get("svd").copied().ok_or("case without svd outcome")?;
        let others = ["avg", "lm", "mp"].map(|s| by.get(s).copied().unwrap_or(f64::NAN));
        if others.iter().all(|o| svd >= o - 1e-9) {
            fair += 1;
        }
    }
    ensure(2 * fair >= cases.len(), || {
        format!("(b) svd harmonic ≥ baselines in only {fair}/{} situations", cases.len())
    })?;

    for name in ["report.json", "report.csv"] {
        let a = std::fs::read(runs.a.path().join(name)).map_err(|e| e.to_string())?;
        let b = std::fs::read(runs.b.path().join(name)).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("(c) {name} differs between runs"))?;
    }
    Ok(format!("(a) {} conflict situations (b) svd fairest in {fair}/{} (c) rerun identical", cases.len(), cases.len()))
}

fn ac6(runs: &Runs) -> Result<String, String> {
    let a = files_under(runs.a.path());
    let b = files_under(runs.b.path());
    ensure(a.keys().eq(b.keys()), || format!("file sets differ: {:?} vs {:?}", a.keys(), b.keys()))?;
    for (name, bytes) in &a {
        ensure(b[name] == *bytes, || format!("{} differs between runs", name.display()))?;
    }
    let direct = &a[Path::new("resolve-direct.jsonl")];
    ensure(direct == &a[Path::new("resolve-file.jsonl")], || "resolve via situations file differs from direct".into())?;
    ensure(direct == &a[Path::new("resolve-piped.jsonl")], || "resolve via pipe differs from direct".into())?;
    Ok(format!("{} output files byte-identical; piped resolve equals direct", a.len()))
}

fn main() {
    let started = Instant::now();
    let mut results = vec![check("AC1", ac1), check("AC2", ac2), check("AC3", ac3), check("AC4", ac4)];

    let runs = Runs { a: tempfile::tempdir().unwrap(), b: tempfile::tempdir().unwrap() };
    let pipeline = run_pipeline(runs.a.path()).and_then(|_| run_pipeline(runs.b.path()));
    match pipeline {
        Ok(()) => {
            results.push(check("AC5", || ac5(&runs)));
            results.push(check("AC6", || ac6(&runs)));
        }
        Err(e) => {
            results.push(check("AC5", || Err(e.clone())));
            results.push(check("AC6", || Err(e)));
        }
    }

    let failed: Vec<&Outcome> = results.iter().filter(|o| !o.pass).collect();
    println!(
        "acceptance: {}/{} criteria passed in {:.1} s",
        results.len() - failed.len(),
        results.len(),
        started.elapsed().as_secs_f64()
    );
    if !failed.is_empty() {
        for o in failed {
            eprintln!("{}: {}", o.id, o.detail);
        }
        std::process::exit(1);
    }
}
