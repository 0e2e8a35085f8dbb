//! Combining single-resident logs into one household and filling in the
//! channel information such logs lack.

use std::collections::BTreeSet;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{AttributeValue, ResidentId, ServiceEvent, ServiceId};

pub const CHANNEL_ATTRIBUTE: &str = "channel";

/// Recorded in report headers so augmented runs can be replayed.
pub const AUGMENT_PRNG: &str = "chacha8/seed_from_u64/u32-rejection/v1";

/// Concatenates the logs and stable-sorts by `(date, start)`.
pub fn merge_households(logs: Vec<(ResidentId, Vec<ServiceEvent>)>) -> Result<Vec<ServiceEvent>> {
    let mut seen = BTreeSet::new();
    for (resident, _) in &logs {
        if !seen.insert(resident.clone()) {
            return Err(Error::DuplicateResident(resident.to_string()));
        }
    }
    let mut merged: Vec<ServiceEvent> = logs.into_iter().flat_map(|(_, events)| events).collect();
    merged.sort_by_key(ServiceEvent::sort_key);
    Ok(merged)
}

/// Uniform index in `0..n` from a stream of `u32`s, by rejection.
fn uniform_index(rng: &mut ChaCha8Rng, n: usize) -> usize {
    let n = n as u64;
    let limit = (1u64 << 32) - (1u64 << 32) % n;
    loop {
        let x = u64::from(rng.next_u32());
        if x < limit {
            return (x % n) as usize;
        }
    }
}

/// Gives every `service` event without a channel one drawn uniformly from
/// `channels`. Identical seeds produce identical output.
pub fn augment_channels(
    events: &[ServiceEvent],
    service: &ServiceId,
    channels: &[String],
    seed: u64,
) -> Result<Vec<ServiceEvent>> {
    if channels.is_empty() {
        return Err(Error::Config("channel list must not be empty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(events
        .iter()
        .map(|e| {
            let mut e = e.clone();
            if &e.service_id == service && !e.attributes.contains_key(CHANNEL_ATTRIBUTE) {
                let pick = &channels[uniform_index(&mut rng, channels.len())];
                e.attributes
                    .insert(CHANNEL_ATTRIBUTE.to_owned(), AttributeValue::Categorical(pick.clone()));
            }
            e
        })
        .collect())
}
