//! How closely historical usages line up with a conflict window, and the
//! resulting preference score.

use iot_conflict::preference::{event_window_proximity, temporal_proximity};
use iot_conflict::TimeOfDayInterval;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let iv = |a: &str, b: &str| TimeOfDayInterval::parse(a, b);

    let pairs = [
        (iv("20:00", "21:00")?, iv("20:45", "21:45")?),
        (iv("18:00", "19:00")?, iv("18:10", "19:10")?),
        (iv("23:30", "00:30")?, iv("00:15", "01:15")?),
    ];
    for (a, b) in pairs {
        println!("{a} vs {b}: {:.3}", temporal_proximity(&[a, b])?);
    }

    let window = iv("20:00", "20:30")?;
    let history = [iv("20:00", "20:30")?, iv("20:15", "20:45")?, iv("19:45", "20:10")?];
    let mut ps = 0.0;
    for e in history {
        let p = event_window_proximity(&e, &window)?;
        println!("event {e}: proximity {p:.3}");
        ps += p;
    }
    println!("preference score over {window}: {ps:.3}");
    Ok(())
}
