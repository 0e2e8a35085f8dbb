//! Conflict detection on a chain of overlapping requests: A overlaps B and
//! B overlaps C, but A and C never meet.

use iot_conflict::detect::{detect_conflicts, is_conflict};
use iot_conflict::{AttributeValue, ServiceRequest, TimeOfDayInterval};

fn request(id: &str, resident: &str, channel: &str, start: &str, end: &str) -> ServiceRequest {
    ServiceRequest {
        request_id: id.into(),
        service_id: "tv".into(),
        attribute: "channel".into(),
        value: AttributeValue::from(channel),
        interval: TimeOfDayInterval::parse(start, end).expect("valid interval"),
        location: "Living Room".into(),
        resident: resident.into(),
    }
}

fn main() {
    let requests = [
        request("A", "R1", "Ch1", "20:00", "20:30"),
        request("B", "R2", "Ch2", "20:20", "20:50"),
        request("C", "R3", "Ch3", "20:40", "21:00"),
        request("D", "R1", "Ch2", "21:00", "21:30"),
    ];
    println!("A/B conflict: {}", is_conflict(&requests[0], &requests[1]));
    println!("C/D conflict: {} (touching endpoints)", is_conflict(&requests[2], &requests[3]));
    for s in detect_conflicts(&requests) {
        println!("{} @ {} {}: {}", s.service_id, s.location, s.window, s.member_ids().join(", "));
    }
}
