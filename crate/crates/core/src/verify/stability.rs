//! Inf-sup constants under refinement.

use std::io::Write;
use std::sync::Arc;

use crate::assembly::{assemble_compliance, assemble_div, assemble_div_div, assemble_mass, assemble_skw, Material, MixedSpaces};
use crate::fespace::{FeSpace, SpaceSpec};
use crate::mesh::TetMesh;
use crate::polyform::ValueSpace;
use crate::solver::{infsup_estimate, InfSupBlocks};

use super::{Discretization, VerifyError};

pub const INFSUP_HEADER: &str = "level,h,beta";

/// Largest relative spread `(max − min) / max` allowed for a stable pairing.
pub const MAX_VARIATION: f64 = 0.2;
/// Smallest admissible inf-sup constant.
pub const MIN_BETA: f64 = 1e-3;
/// Decay factor the unstable pairing must show.
pub const CONTROL_DECAY: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InfSupRow {
    pub level: usize,
    pub h: f64,
    pub beta: f64,
}

#[derive(Clone, Debug, Default)]
pub struct InfSupTable {
    pub rows: Vec<InfSupRow>,
}

impl InfSupTable {
    pub fn min(&self) -> f64 {
        self.rows.iter().map(|r| r.beta).fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.rows.iter().map(|r| r.beta).fold(0.0, f64::max)
    }

    /// `(max − min) / max` over the levels.
    pub fn variation(&self) -> f64 {
        let max = self.max();
        if max == 0.0 {
            return f64::INFINITY;
        }
        (max - self.min()) / max
    }

    /// First β divided by last β.
    pub fn decay(&self) -> f64 {
        match (self.rows.first(), self.rows.last()) {
            (Some(a), Some(b)) if b.beta > 0.0 => a.beta / b.beta,
            (Some(_), Some(_)) => f64::INFINITY,
            _ => 1.0,
        }
    }

    pub fn is_uniform(&self) -> bool {
        self.variation() < MAX_VARIATION && self.min() >= MIN_BETA
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{INFSUP_HEADER}")?;
        for r in &self.rows {
            writeln!(w, "{},{:.6e},{:.8e}", r.level, r.h, r.beta)?;
        }
        Ok(())
    }
}

/// Spaces of the stability test; `control` raises the rotation degree by one.
pub fn stability_spaces(mesh: Arc<TetMesh>, disc: Discretization, control: bool) -> Result<MixedSpaces, VerifyError> {
    let mut spaces = MixedSpaces::new(mesh.clone(), disc.r, disc.simplified)?;
    if control {
        spaces.p = FeSpace::new(mesh, SpaceSpec::p(disc.r + 1, 3, ValueSpace::K))?;
    }
    Ok(spaces)
}

/// Blocks of the map `τ ↦ (div τ, 2Π_Q skw τ)` with the H(div) and L² norms.
pub fn infsup_blocks(spaces: &MixedSpaces) -> Result<InfSupBlocks, VerifyError> {
    Ok(InfSupBlocks {
        b: assemble_div(&spaces.sigma, &spaces.u)?,
        c: assemble_skw(&spaces.sigma, &spaces.p)?.scale(&2.0),
        gram: assemble_compliance(&spaces.sigma, &Material::isotropic(0.0, 0.5)?, None)?,
        div_div: assemble_div_div(&spaces.sigma)?,
        mass_v: assemble_mass(&spaces.u)?,
        mass_q: assemble_mass(&spaces.p)?,
    })
}

/// β_h on each mesh, in order.
pub fn infsup_study(meshes: &[Arc<TetMesh>], disc: Discretization, control: bool) -> Result<InfSupTable, VerifyError> {
    let mut table = InfSupTable::default();
    for (level, mesh) in meshes.iter().enumerate() {
        let spaces = stability_spaces(mesh.clone(), disc, control)?;
        let beta = infsup_estimate(&infsup_blocks(&spaces)?)?;
        log::info!("level {level}: h = {:.4}, beta = {beta:.6e}", mesh.mesh_size());
        table.rows.push(InfSupRow {
            level,
            h: mesh.mesh_size(),
            beta,
        });
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_box_mesh;

    #[test]
    fn table_statistics() {
        let t = InfSupTable {
            rows: vec![
                InfSupRow { level: 0, h: 1.0, beta: 0.5 },
                InfSupRow { level: 1, h: 0.5, beta: 0.45 },
            ],
        };
        assert!((t.variation() - 0.1).abs() < 1e-12);
        assert!(t.is_uniform());
        assert!((t.decay() - 0.5 / 0.45).abs() < 1e-12);
        let mut out = Vec::new();
        t.write_csv(&mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().starts_with("level,h,beta\n0,"));
    }

    #[test]
    fn stable_pairing_on_two_levels() {
        let meshes: Vec<_> = (1..=2).map(|n| Arc::new(build_box_mesh(n).unwrap())).collect();
        let disc = Discretization { r: 0, simplified: false };
        let t = infsup_study(&meshes, disc, false).unwrap();
        assert!(t.min() > MIN_BETA, "{t:?}");
    }
}
