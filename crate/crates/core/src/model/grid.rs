use crate::error::{Error, Result};

/// Cell-centred mesh of `[0, L]`.
///
/// Built by [`build_grid`] as two zones: a fine zone next to the wall that
/// resolves the `O(eps)` layer, then bulk cells. Fine cells subdivide bulk
/// cells exactly, so fields on a layer grid restrict conservatively onto the
/// uniform bulk grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    cell_centers: Vec<f64>,
    cell_widths: Vec<f64>,
    faces: Vec<f64>,
    layer_resolution: f64,
    fine_zone_end: f64,
}

/// Shape of the wall-resolving zone of a layer grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerGridSpec {
    /// Fine zone covers at least `fine_zone_factor * eps / gamma0`.
    pub fine_zone_factor: f64,
    /// Fine cells are no wider than `eps / cells_per_eps`.
    pub cells_per_eps: f64,
}

impl Default for LayerGridSpec {
    fn default() -> Self {
        Self { fine_zone_factor: 10.0, cells_per_eps: 10.0 }
    }
}

/// Two-zone mesh with the default fine zone (`10 eps / gamma0`, `dx <= eps/10`).
pub fn build_grid(length: f64, eps: f64, gamma0: f64, bulk_dx: f64) -> Result<Grid1D> {
    Grid1D::layer(length, eps, gamma0, bulk_dx, LayerGridSpec::default())
}

impl Grid1D {
    /// Builds a grid from its face coordinates.
    pub fn from_faces(faces: Vec<f64>) -> Result<Self> {
        if faces.len() < 2 {
            return Err(Error::InvalidMesh("need at least one cell".into()));
        }
        if faces[0] != 0.0 {
            return Err(Error::InvalidMesh("first face must be at x3 = 0".into()));
        }
        let mut centers = Vec::with_capacity(faces.len() - 1);
        let mut widths = Vec::with_capacity(faces.len() - 1);
        for w in faces.windows(2) {
            let dx = w[1] - w[0];
            if !(dx > 0.0) || !dx.is_finite() {
                return Err(Error::InvalidMesh(format!("non-positive cell width {dx}")));
            }
            centers.push(0.5 * (w[0] + w[1]));
            widths.push(dx);
        }
        let layer_resolution = widths[0];
        Ok(Self { cell_centers: centers, cell_widths: widths, faces, layer_resolution, fine_zone_end: 0.0 })
    }

    pub fn uniform(length: f64, cells: usize) -> Result<Self> {
        if !(length > 0.0) || cells == 0 {
            return Err(Error::InvalidMesh("uniform grid needs L > 0 and cells > 0".into()));
        }
        let dx = length / cells as f64;
        let mut faces: Vec<f64> = (0..=cells).map(|i| i as f64 * dx).collect();
        faces[cells] = length;
        Self::from_faces(faces)
    }

    /// Two-zone layer grid. The fine zone length is rounded up to a whole
    /// number of bulk cells, each split into equal sub-cells.
    pub fn layer(length: f64, eps: f64, gamma0: f64, bulk_dx: f64, spec: LayerGridSpec) -> Result<Self> {
        for (name, v) in [("L", length), ("eps", eps), ("gamma0", gamma0), ("bulk_dx", bulk_dx)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidMesh(format!("{name} must be positive, got {v}")));
            }
        }
        let zone = spec.fine_zone_factor * eps / gamma0;
        if zone > length {
            return Err(Error::InvalidMesh(format!("layer zone {zone} exceeds the domain length {length}")));
        }
        let bulk_cells = (length / bulk_dx).round().max(1.0) as usize;
        let dx = length / bulk_cells as f64;
        let zone_cells = ((zone / dx) - 1e-9).ceil().max(1.0) as usize;
        let zone_cells = zone_cells.min(bulk_cells);
        let target = eps / spec.cells_per_eps;
        let split = ((dx / target) - 1e-9).ceil().max(1.0) as usize;

        let mut faces = Vec::with_capacity(zone_cells * split + bulk_cells + 1);
        faces.push(0.0);
        for k in 0..bulk_cells {
            let x0 = k as f64 * dx;
            if k < zone_cells {
                let h = dx / split as f64;
                for j in 1..split {
                    faces.push(x0 + j as f64 * h);
                }
            }
            faces.push(if k + 1 == bulk_cells { length } else { (k + 1) as f64 * dx });
        }
        let mut grid = Self::from_faces(faces)?;
        grid.fine_zone_end = zone_cells as f64 * dx;
        grid.layer_resolution =
            grid.cell_widths.iter().zip(&grid.cell_centers).filter(|(_, &x)| x <= grid.fine_zone_end).map(|(w, _)| *w).fold(0.0, f64::max);
        Ok(grid)
    }

    pub fn len(&self) -> usize {
        self.cell_centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cell_centers.is_empty()
    }

    pub fn centers(&self) -> &[f64] {
        &self.cell_centers
    }

    pub fn widths(&self) -> &[f64] {
        &self.cell_widths
    }

    pub fn faces(&self) -> &[f64] {
        &self.faces
    }

    pub fn length(&self) -> f64 {
        *self.faces.last().unwrap()
    }

    /// Largest cell width inside the wall zone.
    pub fn layer_resolution(&self) -> f64 {
        self.layer_resolution
    }

    pub fn fine_zone_end(&self) -> f64 {
        self.fine_zone_end
    }

    pub fn min_width(&self) -> f64 {
        self.cell_widths.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Checks that the wall zone resolves a layer of thickness `eps` decaying
    /// at rate `gamma0`.
    pub fn check_resolves_layer(&self, eps: f64, gamma0: f64) -> Result<()> {
        if self.length() < 30.0 * eps / gamma0 {
            return Err(Error::InvalidMesh(format!(
                "domain length {} shorter than 30 eps / gamma0 = {}",
                self.length(),
                30.0 * eps / gamma0
            )));
        }
        let zone = 10.0 * eps / gamma0;
        let worst = self.cell_widths.iter().zip(&self.cell_centers).filter(|(_, &x)| x <= zone).map(|(w, _)| *w).fold(0.0, f64::max);
        if worst > eps / 10.0 * (1.0 + 1e-12) {
            return Err(Error::InvalidMesh(format!("cell width {worst} in the layer zone exceeds eps/10 = {}", eps / 10.0)));
        }
        Ok(())
    }

    /// Midpoint-rule integral of cell values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.cell_widths).map(|(v, w)| v * w).sum()
    }

    pub fn l2_norm(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.cell_widths).map(|(v, w)| v * v * w).sum::<f64>().sqrt()
    }

    /// Conservative restriction of cell averages onto `coarse` (same `[0, L]`).
    pub fn restrict_to(&self, values: &[f64], coarse: &Grid1D) -> Vec<f64> {
        let mut out = vec![0.0; coarse.len()];
        let cf = coarse.faces();
        let ff = &self.faces;
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.len() && j < coarse.len() {
            let lo = ff[i].max(cf[j]);
            let hi = ff[i + 1].min(cf[j + 1]);
            if hi > lo {
                out[j] += values[i] * (hi - lo);
            }
            if ff[i + 1] <= cf[j + 1] {
                i += 1;
            } else {
                j += 1;
            }
        }
        for (o, w) in out.iter_mut().zip(coarse.widths()) {
            *o /= w;
        }
        out
    }

    /// Piecewise-linear interpolation of cell-centred values at `x`, with
    /// constant extension beyond the outermost centres.
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        let c = &self.cell_centers;
        if x <= c[0] {
            return values[0];
        }
        let last = c.len() - 1;
        if x >= c[last] {
            return values[last];
        }
        let k = c.partition_point(|&xc| xc <= x) - 1;
        let s = (x - c[k]) / (c[k + 1] - c[k]);
        values[k] * (1.0 - s) + values[k + 1] * s
    }
}
