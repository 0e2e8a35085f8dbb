//! Optimal one-dimensional binning of numeric readings.

use iot_conflict::ingest::{compute_bins, optimal_partition};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (cuts, sse) = optimal_partition(&[1.0, 2.0, 3.0, 10.0, 11.0, 12.0], 2);
    println!("cuts {cuts:?}, within-bin SSE {sse}");

    let brightness = [10.0, 12.0, 15.0, 40.0, 45.0, 47.0, 80.0, 85.0, 90.0, 100.0];
    let spec = compute_bins("brightness", &brightness, 3)?;
    println!("boundaries {:?}", spec.boundaries);
    for x in [5.0, 30.0, 47.0, 99.0, 150.0] {
        let (bin, clamped) = spec.bin_of(x);
        println!("{x:>6} -> bin {bin}{}", if clamped { " (clamped)" } else { "" });
    }
    Ok(())
}
