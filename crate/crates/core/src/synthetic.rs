//! Seeded synthetic household: raw per-resident TV and lamp logs in the
//! ingestion CSV format, plus a request file for the same household.
//!
//! Each resident has a fixed taste over channels and a habitual evening
//! viewing time. Sessions often begin with a burst of channel surfing and
//! sometimes switch channel midway.

use chrono::{Days, NaiveDate};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{AttributeValue, ResidentId, ServiceRequest, TimeOfDay, TimeOfDayInterval};

pub const TV_SERVICE: &str = "tv";
pub const LAMP_SERVICE: &str = "lamp";
pub const LIVING_ROOM: &str = "living room";
pub const CHANNELS: [&str; 5] = ["Ch1", "Ch2", "Ch3", "Ch4", "Ch5"];

struct Profile {
    resident: &'static str,
    taste: [f64; 5],
    /// Habitual start of evening viewing, minutes after midnight.
    usual_start: u32,
    brightness: u32,
}

const PROFILES: [Profile; 3] = [
    Profile { resident: "R1", taste: [5.0, 3.0, 1.5, 0.5, 0.5], usual_start: 19 * 60 + 30, brightness: 40 },
    Profile { resident: "R2", taste: [1.0, 4.0, 3.0, 0.5, 2.0], usual_start: 20 * 60 + 15, brightness: 70 },
    Profile { resident: "R3", taste: [2.0, 1.0, 1.0, 1.0, 4.0], usual_start: 20 * 60 + 45, brightness: 60 },
];

#[derive(Clone, Debug)]
pub struct HouseholdSpec {
    pub first_day: NaiveDate,
    pub days: u32,
    pub seed: u64,
    pub watch_probability: f64,
    pub surf_probability: f64,
}

impl Default for HouseholdSpec {
    fn default() -> Self {
        Self {
            first_day: NaiveDate::from_ymd_opt(2011, 6, 15).expect("valid date"),
            days: 60,
            seed: 2011,
            watch_probability: 0.8,
            surf_probability: 0.35,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SyntheticHousehold {
    /// Resident and the full CSV text of their log.
    pub logs: Vec<(ResidentId, String)>,
    pub requests: Vec<ServiceRequest>,
}

fn clock(minutes: u32, seconds: u32) -> String {
    TimeOfDay::from_seconds(minutes * 60 + seconds)
        .expect("generated times stay within the day")
        .to_string()
}

pub fn generate(spec: &HouseholdSpec) -> SyntheticHousehold {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut logs = Vec::new();
    for p in &PROFILES {
        let taste = WeightedIndex::new(p.taste).expect("positive weights");
        let mut out = String::from("date,time,sensor,status,value,resident,location\n");
        let mut line = |date: NaiveDate, minute: u32, second: u32, sensor: &str, status: &str, value: String| {
            out.push_str(&format!("{date},{},{sensor},{status},{value},,{LIVING_ROOM}\n", clock(minute, second)));
        };
        for d in 0..spec.days {
            let date = spec.first_day + Days::new(u64::from(d));
            if !rng.random_bool(spec.watch_probability) {
                continue;
            }
            // Sum of two uniforms: habitual time, give or take an hour.
            let jitter = rng.random_range(0..=60) + rng.random_range(0..=60);
            let start = (p.usual_start + jitter).saturating_sub(60);
            let length = rng.random_range(30..=120);
            let end = (start + length).min(23 * 60 + 59);

            let lamp = rng.random_bool(0.6);
            if lamp {
                let level = (p.brightness as i32 + 10 * rng.random_range(-2..=2)).clamp(10, 100);
                line(date, start, 0, LAMP_SERVICE, "SET", format!("brightness={level}"));
            }

            let mut second = 0;
            if rng.random_bool(spec.surf_probability) {
                line(date, start, 0, TV_SERVICE, "ON", format!("channel={}", CHANNELS[rng.random_range(0..5)]));
                for _ in 0..rng.random_range(1..=3) {
                    second += rng.random_range(8..=15);
                    line(date, start, second, TV_SERVICE, "SET", format!("channel={}", CHANNELS[rng.random_range(0..5)]));
                }
                second += rng.random_range(8..=15);
                line(date, start, second, TV_SERVICE, "SET", format!("channel={}", CHANNELS[taste.sample(&mut rng)]));
            } else {
                line(date, start, 0, TV_SERVICE, "ON", format!("channel={}", CHANNELS[taste.sample(&mut rng)]));
            }
            if length >= 45 && rng.random_bool(0.3) {
                let at = start + rng.random_range(15..length - 10);
                line(date, at, 0, TV_SERVICE, "SET", format!("channel={}", CHANNELS[taste.sample(&mut rng)]));
            }
            line(date, end, 0, TV_SERVICE, "OFF", String::new());
            if lamp {
                line(date, end, 0, LAMP_SERVICE, "OFF", String::new());
            }
        }
        logs.push((ResidentId::new(p.resident), out));
    }

    // Requests: half-hour evening slots; each resident asks for a channel
    // drawn from their taste over part of the slot.
    let mut requests = Vec::new();
    for slot in 0..9u32 {
        let slot_start = 18 * 60 + 30 + 30 * slot;
        for p in &PROFILES {
            if !rng.random_bool(0.8) {
                continue;
            }
            let taste = WeightedIndex::new(p.taste).expect("positive weights");
            let from = slot_start + rng.random_range(0..10);
            let to = slot_start + rng.random_range(20..=30);
            requests.push(ServiceRequest {
                request_id: format!("s{slot}-{}", p.resident),
                service_id: TV_SERVICE.into(),
                attribute: "channel".into(),
                value: AttributeValue::from(CHANNELS[taste.sample(&mut rng)]),
                interval: TimeOfDayInterval::from_seconds(from * 60, to * 60).expect("from < to"),
                location: LIVING_ROOM.into(),
                resident: p.resident.into(),
            });
        }
    }
    SyntheticHousehold { logs, requests }
}
