use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interval mesh x_0 < x_1 < ... < x_N of [x_0, x_N].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh1D {
    nodes: Vec<f64>,
    widths: Vec<f64>,
}

impl Mesh1D {
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Config("mesh needs at least one cell".into()));
        }
        let widths: Vec<f64> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        if widths.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::Config("mesh nodes must be strictly increasing".into()));
        }
        Ok(Mesh1D { nodes, widths })
    }

    pub fn uniform(length: f64, cells: usize) -> Result<Self> {
        if cells == 0 || !(length > 0.0) {
            return Err(Error::Config(format!(
                "uniform mesh needs cells > 0 and length > 0 (got {cells}, {length})"
            )));
        }
        let h = length / cells as f64;
        let mut nodes: Vec<f64> = (0..=cells).map(|i| i as f64 * h).collect();
        nodes[cells] = length;
        Self::from_nodes(nodes)
    }

    pub fn cells(&self) -> usize {
        self.widths.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn width(&self, i: usize) -> f64 {
        self.widths[i]
    }

    pub fn center(&self, i: usize) -> f64 {
        0.5 * (self.nodes[i] + self.nodes[i + 1])
    }

    pub fn length(&self) -> f64 {
        self.nodes[self.nodes.len() - 1] - self.nodes[0]
    }
}
