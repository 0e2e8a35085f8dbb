//! Three residents want different TV channels at 20:00. Resolve the
//! conflict from their historical preference scores and show the
//! intermediate quantities.

use iot_conflict::demo;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Full precision; `demo::print_report` shows the 2-decimal variant.
    let r = demo::run(None)?;
    let t = r.trace.as_ref().expect("svd trace");
    println!("items            {:?}", t.items);
    println!("singular values  {:.4?}", t.singular_values);
    println!("kept features    {}", t.w);
    println!("CRIM             {:.4?}", t.crim);
    println!("IRIM             {:.3?}", t.irim);
    for item in &r.ranked_items {
        println!("  {:<4} IRID {:.3}", item.item, item.score);
    }
    println!("play: {}", r.chosen.join(" then "));
    Ok(())
}
