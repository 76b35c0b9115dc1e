//! Solve one manufactured problem and write the cell fields as legacy VTK.
//!
//! `cargo run --release --example solve_box -- [n] [r] [case] [out.vtk]`

use std::sync::Arc;

use elastweak::mesh::{build_box_mesh, write_vtk, VtkData};
use elastweak::solver::DEFAULT_TOL;
use elastweak::verify::{solve_manufactured, CaseId, Discretization, ManufacturedCase};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).map_or(Ok(2), |s| s.parse())?;
    let r: usize = args.get(2).map_or(Ok(0), |s| s.parse())?;
    let id: CaseId = args.get(3).map_or(Ok(CaseId::Trig), |s| s.parse())?;
    let mesh = Arc::new(build_box_mesh(n)?);
    let case = ManufacturedCase::new(id, 1.0, 1.0)?;
    let s = solve_manufactured(mesh.clone(), Discretization { r, simplified: false }, &case, DEFAULT_TOL)?;
    let [ds, du, dp] = s.spaces.dims();
    println!("unknowns: sigma {ds}, u {du}, p {dp}; nonzeros {}", s.report.nonzeros);
    println!(
        "residual {:.2e}, weak symmetry {:.2e}, refinement steps {}",
        s.report.residual, s.report.weak_symmetry, s.report.refinement_steps
    );
    println!("errors: {:?}", s.errors);

    if let Some(path) = args.get(4) {
        let u: Vec<[f64; 3]> = (0..mesh.num_tets())
            .map(|t| {
                let v = s.spaces.u.evaluate(&s.report.u, t, &mesh.centroid(t))?;
                Ok([v[0], v[1], v[2]])
            })
            .collect::<Result<_, elastweak::fespace::FeError>>()?;
        let data = VtkData {
            cell_vectors: vec![("displacement".into(), u)],
            ..Default::default()
        };
        write_vtk(&mesh, &data, std::io::BufWriter::new(std::fs::File::create(path)?))?;
        println!("wrote {path}");
    }
    Ok(())
}
