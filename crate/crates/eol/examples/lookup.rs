//! Suggest parameters for a species. Replays the bundled fixtures unless
//! `--live` is given.
//!
//! `cargo run -p ecoloom-eol --example lookup -- gray wolf`

use ecoloom_eol::{bundled_fixtures, EolClient, HttpTransport};

fn main() {
    let mut args: Vec<String> = std::env::args().skip(1).collect();
    let live = args.iter().any(|a| a == "--live");
    args.retain(|a| a != "--live");
    let query = if args.is_empty() {
        "gray wolf".to_string()
    } else {
        args.join(" ")
    };

    let client = if live {
        EolClient::new(HttpTransport::from_env())
    } else {
        EolClient::with_fixtures(bundled_fixtures())
    };
    match client.lookup(&query) {
        Ok(Some(found)) => {
            println!(
                "{} (taxon {})",
                found.candidate.scientific_name, found.candidate.taxon_id
            );
            for t in &found.traits {
                println!("  {:<24} {:>10} {}", t.predicate, t.value, t.units);
            }
            for (key, value) in found.estimate.params.entries() {
                println!("suggested {key} = {}", value.as_f64());
            }
            for note in &found.estimate.notes {
                println!("note: {note}");
            }
        }
        Ok(None) => println!("nothing matched `{query}`"),
        Err(e) => eprintln!("lookup failed: {e}"),
    }
}
