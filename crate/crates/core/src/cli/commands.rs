use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use crate::assembly::{stress_proxy, MixedSpaces};
use crate::mesh::{build_box_mesh, read_mesh_file, write_vtk, TetMesh, VtkData};
use crate::solver::SolveReport;
use crate::verify::{
    convergence_study, infsup_study, run_commuting_suite, run_exactness_suite, run_identity_suite, run_simplified_suite,
    solve_manufactured, Arithmetic, CheckReport, Discretization, IdentityHooks, ManufacturedCase,
};

use super::config::{Command, Fault, MeshSource, RunConfig, Suite};
use super::CliError;

/// Default number of random inputs for the identity suite.
const IDENTITY_TRIALS: usize = 100;
/// Default number of random inputs per mesh for the commuting suite.
const COMMUTING_TRIALS: usize = 20;
/// Meshes up to this many cells get exact rank checks of the stability map.
const EXACT_CELL_LIMIT: usize = 6;

fn load_meshes(source: &MeshSource) -> Result<Vec<Arc<TetMesh>>, CliError> {
    match source {
        MeshSource::Box(ns) => ns.iter().map(|&n| Ok(Arc::new(build_box_mesh(n)?))).collect(),
        MeshSource::Files(paths) => paths.iter().map(|p| Ok(Arc::new(read_mesh_file(p)?))).collect(),
    }
}

fn create(out: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(out.join(name))?))
}

/// Run a validated configuration. Meshes are read and the material checked before any solve.
pub fn run_command(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate()?;
    let case = ManufacturedCase::new(cfg.case, cfg.lambda, cfg.mu)?;
    let meshes = load_meshes(&cfg.mesh)?;
    if let Some(t) = cfg.threads {
        if rayon::ThreadPoolBuilder::new().num_threads(t).build_global().is_err() {
            log::warn!("thread pool already initialized; --threads ignored");
        }
    }
    std::fs::create_dir_all(&cfg.out)?;
    let disc = Discretization {
        r: cfg.degree,
        simplified: cfg.simplified,
    };
    match cfg.command {
        Command::Solve => solve(cfg, &case, disc, meshes[0].clone()),
        Command::Convergence => convergence(cfg, &case, disc, &meshes),
        Command::Check => check(cfg, &meshes),
        Command::Infsup => infsup(cfg, disc, &meshes),
    }
}

pub const SUMMARY_HEADER: &str = "case,degree,simplified,lambda,mu,cells,h,dof_sigma,dof_u,dof_p,residual,weak_symmetry,err_sigma,err_div,err_u,err_p";

/// Cell-centroid values of displacement, rotation axial vector and stress rows.
fn cell_fields(spaces: &MixedSpaces, sol: &SolveReport) -> Result<VtkData, CliError> {
    let mesh = spaces.sigma.mesh();
    let nt = mesh.num_tets();
    let (mut u, mut p) = (Vec::with_capacity(nt), Vec::with_capacity(nt));
    let mut rows = vec![Vec::with_capacity(nt); 3];
    let vec3 = |v: Vec<f64>| -> [f64; 3] { [v[0], v[1], v[2]] };
    let space_err = |e: crate::fespace::FeError| CliError::Internal(e.to_string());
    for t in 0..nt {
        let x = mesh.centroid(t);
        u.push(vec3(spaces.u.evaluate(&sol.u, t, &x).map_err(space_err)?));
        p.push(vec3(spaces.p.evaluate(&sol.p, t, &x).map_err(space_err)?));
        let s = stress_proxy(&spaces.sigma.evaluate(&sol.sigma, t, &x).map_err(space_err)?);
        for (i, row) in rows.iter_mut().enumerate() {
            row.push(s[i]);
        }
    }
    let mut data = VtkData::default();
    data.cell_vectors.push(("displacement".into(), u));
    data.cell_vectors.push(("rotation".into(), p));
    for (name, row) in ["stress_x", "stress_y", "stress_z"].into_iter().zip(rows) {
        data.cell_vectors.push((name.into(), row));
    }
    Ok(data)
}

fn solve(cfg: &RunConfig, case: &ManufacturedCase, disc: Discretization, mesh: Arc<TetMesh>) -> Result<(), CliError> {
    let solved = solve_manufactured(mesh.clone(), disc, case, cfg.tol)?;
    write_vtk(&mesh, &cell_fields(&solved.spaces, &solved.report)?, create(&cfg.out, "solution.vtk")?)?;
    let [ds, du, dp] = solved.spaces.dims();
    let (rep, e) = (&solved.report, &solved.errors);
    let row = format!(
        "{},{},{},{},{},{},{:.6e},{ds},{du},{dp},{:.3e},{:.3e},{:.6e},{:.6e},{:.6e},{:.6e}",
        cfg.case,
        cfg.degree,
        cfg.simplified,
        cfg.lambda,
        cfg.mu,
        mesh.num_tets(),
        e.h,
        rep.residual,
        rep.weak_symmetry,
        e.sigma,
        e.div,
        e.u,
        e.p
    );
    let mut w = create(&cfg.out, "summary.csv")?;
    writeln!(w, "{SUMMARY_HEADER}\n{row}")?;
    w.flush()?;
    println!("{SUMMARY_HEADER}\n{row}");
    Ok(())
}

fn convergence(cfg: &RunConfig, case: &ManufacturedCase, disc: Discretization, meshes: &[Arc<TetMesh>]) -> Result<(), CliError> {
    let table = convergence_study(case, disc, meshes, cfg.tol)?;
    let mut w = create(&cfg.out, "convergence.csv")?;
    table.write_csv(&mut w)?;
    w.flush()?;
    table.write_csv(std::io::stdout().lock())?;
    let f = table.fitted;
    eprintln!(
        "fitted rates: sigma {:.3}, div {:.3}, u {:.3}, p {:.3}",
        f[0], f[1], f[2], f[3]
    );
    if let Some(threshold) = cfg.assert_rates {
        if table.min_fitted() < threshold {
            return Err(CliError::Failed(format!(
                "fitted rate {:.3} is below the asserted {threshold}",
                table.min_fitted()
            )));
        }
    }
    Ok(())
}

fn check(cfg: &RunConfig, meshes: &[Arc<TetMesh>]) -> Result<(), CliError> {
    let wants = |s: Suite| cfg.suite == Suite::All || cfg.suite == s;
    let mut report = CheckReport::new();
    if wants(Suite::Identity) {
        let hooks = match cfg.inject_fault {
            Some(Fault::VectSign) => IdentityHooks::vect_sign_error(),
            None => IdentityHooks::default(),
        };
        report.extend(run_identity_suite(cfg.seed, cfg.trials.unwrap_or(IDENTITY_TRIALS), &hooks));
    }
    for (level, mesh) in meshes.iter().enumerate() {
        if wants(Suite::Commuting) {
            let trials = cfg.trials.unwrap_or(COMMUTING_TRIALS);
            report.extend(run_commuting_suite(mesh, cfg.degree, cfg.seed + level as u64, trials)?);
        }
        if wants(Suite::Exactness) {
            let arithmetic = if mesh.num_tets() <= EXACT_CELL_LIMIT { Arithmetic::Exact } else { Arithmetic::Float };
            report.extend(run_exactness_suite(mesh, cfg.degree, arithmetic)?);
        }
    }
    if wants(Suite::Simplified) {
        report.extend(run_simplified_suite()?);
    }
    println!("{report}");
    let mut w = create(&cfg.out, "check.csv")?;
    report.write_csv(&mut w)?;
    w.flush()?;
    let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("failed checks: {}", failed.join(", "))))
    }
}

fn infsup(cfg: &RunConfig, disc: Discretization, meshes: &[Arc<TetMesh>]) -> Result<(), CliError> {
    let table = infsup_study(meshes, disc, cfg.unstable_control)?;
    let mut w = create(&cfg.out, "infsup.csv")?;
    table.write_csv(&mut w)?;
    w.flush()?;
    table.write_csv(std::io::stdout().lock())?;
    eprintln!(
        "beta: min {:.4e}, variation {:.1}%, decay {:.3}",
        table.min(),
        100.0 * table.variation(),
        table.decay()
    );
    if cfg.assert_stable && !table.is_uniform() {
        return Err(CliError::Failed(format!(
            "inf-sup constant is not uniform: variation {:.1}%, minimum {:.3e}",
            100.0 * table.variation(),
            table.min()
        )));
    }
    Ok(())
}
