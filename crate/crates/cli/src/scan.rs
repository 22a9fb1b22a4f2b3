//! Slice-plane scanning: evaluates a pseudospectral quantity over a
//! square grid in L_I and serializes it as CSV and ASCII PGM.

use qspectra::spectrum::pseudo_resolvent;
use qspectra::{ImaginaryUnit, QMatrix};
use rayon::prelude::*;

use crate::Quantity;

/// Row-major grid with y increasing upward: row 0 is the top of the
/// heatmap (largest y), matching PGM raster order.
pub struct ScanGrid {
    pub resolution: usize,
    /// (x, y, value) triples in raster order.
    pub cells: Vec<(f64, f64, f64)>,
}

pub fn scan_grid(
    a: &QMatrix,
    unit: &ImaginaryUnit,
    center: (f64, f64),
    window: f64,
    resolution: usize,
    quantity: Quantity,
) -> ScanGrid {
    let step = window / resolution as f64;
    let x0 = center.0 - window / 2.0 + step / 2.0;
    let y0 = center.1 - window / 2.0 + step / 2.0;
    // grid points evaluate independently; output order is fixed by index
    let cells: Vec<(f64, f64, f64)> = (0..resolution * resolution)
        .into_par_iter()
        .map(|idx| {
            let row = idx / resolution;
            let col = idx % resolution;
            let x = x0 + col as f64 * step;
            let y = y0 + (resolution - 1 - row) as f64 * step;
            let q = unit.slice_point(x, y);
            let r = pseudo_resolvent(a, &q);
            let (_, kappa, _) = r.gauges();
            let value = match quantity {
                Quantity::MinSingular => kappa,
                Quantity::NormInverse => match r.try_inverse() {
                    Some(inv) => 1.0 / inv.op_norm(),
                    None => 0.0,
                },
            };
            (x, y, value)
        })
        .collect();
    ScanGrid { resolution, cells }
}

impl ScanGrid {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.cells.len() * 32);
        out.push_str("x,y,value\n");
        for (x, y, v) in &self.cells {
            out.push_str(&format!("{x:.12e},{y:.12e},{v:.12e}\n"));
        }
        out
    }

    /// ASCII PGM (P2) with the affine value→gray mapping in the header
    /// comment so the raw values are recoverable from the image alone.
    pub fn to_pgm(&self) -> String {
        let (min, max) = self
            .cells
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, _, v)| {
                (lo.min(*v), hi.max(*v))
            });
        let span = if max > min { max - min } else { 1.0 };
        let mut out = String::with_capacity(self.cells.len() * 4 + 128);
        out.push_str("P2\n");
        out.push_str(&format!(
            "# gray = round(255*(value - {min:.12e})/({max:.12e} - {min:.12e}))\n"
        ));
        out.push_str(&format!("{} {}\n255\n", self.resolution, self.resolution));
        for (i, (_, _, v)) in self.cells.iter().enumerate() {
            let gray = ((255.0 * (v - min) / span).round() as i64).clamp(0, 255);
            out.push_str(&gray.to_string());
            out.push(if (i + 1) % self.resolution == 0 { '\n' } else { ' ' });
        }
        out
    }
}
