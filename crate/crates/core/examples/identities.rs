//! Exact-arithmetic identity suite, optionally with a sign error planted in `vect`.
//!
//! `cargo run --release --example identities -- [seed] [trials] [--broken]`

use elastweak::verify::{run_identity_suite, IdentityHooks};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let seed: u64 = args.get(1).map_or(Ok(1), |s| s.parse())?;
    let trials: usize = args.get(2).map_or(Ok(100), |s| s.parse())?;
    let hooks = if args.iter().any(|a| a == "--broken") {
        IdentityHooks::vect_sign_error()
    } else {
        IdentityHooks::default()
    };
    let start = std::time::Instant::now();
    let report = run_identity_suite(seed, trials, &hooks);
    println!("{report}");
    println!("elapsed: {:.1?}", start.elapsed());
    Ok(())
}
