//! Inf-sup constants of the stable pairing and of the unstable control.
//!
//! `cargo run --release --example infsup -- [r] [max_n]`

use std::sync::Arc;

use elastweak::mesh::build_box_mesh;
use elastweak::verify::{infsup_study, Discretization};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::init();
    let args: Vec<String> = std::env::args().collect();
    let r: usize = args.get(1).map_or(Ok(0), |s| s.parse())?;
    let max_n: usize = args.get(2).map_or(Ok(4), |s| s.parse())?;
    let meshes = (1..=max_n)
        .map(|n| build_box_mesh(n).map(Arc::new))
        .collect::<Result<Vec<_>, _>>()?;
    let disc = Discretization { r, simplified: false };
    for control in [false, true] {
        let start = std::time::Instant::now();
        let table = infsup_study(&meshes, disc, control)?;
        println!("{}", if control { "control: rotations of degree r+1" } else { "stable pairing" });
        table.write_csv(std::io::stdout())?;
        println!(
            "variation {:.3}, decay {:.3}, elapsed {:.1?}\n",
            table.variation(),
            table.decay(),
            start.elapsed()
        );
    }
    Ok(())
}
