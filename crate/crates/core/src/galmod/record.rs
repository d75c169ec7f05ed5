//! JSON form of modules and pointed configurations.
//!
//! Generators are row-major integer arrays, either nested by rows or flat.
//! A hyperplane is given by its basis vectors (nested, or flat row-major),
//! or by a single defining functional of length `dim`.

use serde::{Deserialize, Serialize};

use super::{GaloisModule, GalmodError, PointedConfiguration};
use crate::field::{Field, PrimeField};
use crate::linalg::{Matrix, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixRecord {
    Rows(Vec<Vec<i64>>),
    Flat(Vec<i64>),
}

pub type HyperplaneRecord = MatrixRecord;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleRecord {
    pub ell: u64,
    pub dim: usize,
    pub generators: Vec<MatrixRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hyperplanes: Vec<HyperplaneRecord>,
}

fn reduce(f: &PrimeField, row: &[i64]) -> Vec<u64> {
    row.iter().map(|&x| f.from_i64(x)).collect()
}

fn chunk(rec: &MatrixRecord, width: usize) -> Result<Vec<Vec<i64>>, GalmodError> {
    let rows = match rec {
        MatrixRecord::Rows(r) => r.clone(),
        MatrixRecord::Flat(v) => {
            if width == 0 || v.len() % width != 0 {
                return Err(GalmodError::Dimension(format!("flat array of length {} is not a multiple of {width}", v.len())));
            }
            v.chunks(width).map(|c| c.to_vec()).collect()
        }
    };
    if rows.iter().any(|r| r.len() != width) {
        return Err(GalmodError::Dimension(format!("rows must have length {width}")));
    }
    Ok(rows)
}

fn to_i64_rows(rows: &[Vec<u64>]) -> Vec<Vec<i64>> {
    rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()
}

impl ModuleRecord {
    pub fn module(&self) -> Result<GaloisModule, GalmodError> {
        let f = PrimeField::new(self.ell).map_err(|_| GalmodError::BadEll(self.ell))?;
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let rows = chunk(g, self.dim)?;
                if rows.len() != self.dim {
                    return Err(GalmodError::Dimension(format!("generator has {} rows, expected {}", rows.len(), self.dim)));
                }
                Ok(Matrix::from_rows(self.ell, &rows.iter().map(|r| reduce(&f, r)).collect::<Vec<_>>()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        GaloisModule::new(self.ell, self.dim, gens)
    }

    pub fn hyperplanes(&self) -> Result<Vec<Subspace>, GalmodError> {
        let f = PrimeField::new(self.ell).map_err(|_| GalmodError::BadEll(self.ell))?;
        self.hyperplanes
            .iter()
            .map(|h| {
                let h_sub = match h {
                    MatrixRecord::Flat(v) if v.len() == self.dim => {
                        Subspace::from_functionals(self.ell, self.dim, &[reduce(&f, v)])
                    }
                    _ => {
                        let rows = chunk(h, self.dim)?;
                        Subspace::span(self.ell, self.dim, &rows.iter().map(|r| reduce(&f, r)).collect::<Vec<_>>())
                    }
                };
                if h_sub.dim() + 1 != self.dim {
                    return Err(GalmodError::Dimension(format!(
                        "hyperplane spans dimension {} in ambient dimension {}",
                        h_sub.dim(),
                        self.dim
                    )));
                }
                Ok(h_sub)
            })
            .collect()
    }

    /// The module and its hyperplanes as a validated pointed configuration.
    pub fn configuration(&self) -> Result<PointedConfiguration, GalmodError> {
        PointedConfiguration::new(self.module()?, self.hyperplanes()?)
    }

    pub fn from_module(m: &GaloisModule, hyperplanes: &[Subspace]) -> Self {
        Self {
            ell: m.ell(),
            dim: m.dim(),
            generators: m.generators().iter().map(|g| MatrixRecord::Rows(to_i64_rows(&g.to_rows()))).collect(),
            hyperplanes: hyperplanes.iter().map(|h| MatrixRecord::Rows(to_i64_rows(h.basis()))).collect(),
        }
    }

    pub fn from_configuration(cfg: &PointedConfiguration) -> Self {
        Self::from_module(&cfg.module, &cfg.hyperplanes)
    }
}
