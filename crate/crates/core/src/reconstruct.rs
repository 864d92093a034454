//! Data synthesis from a run configuration, threshold calibration, the grid
//! sweep of test disks, and indicator output (CSV and plain PGM).

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::boundary::{assemble_single_layer, discretize, ParametricBoundary};
use crate::config::{GridSpec, RunConfig};
use crate::elastic::{Frequency, Point};
use crate::error::{Error, Result};
use crate::forward::{add_noise, assemble_farfield_operator, DirectionSet, FarFieldOperatorMatrix};
use crate::probe::{
    count_above, hermitian_eigenvalues, probe_with_root, real_part_weighted, weighted_operator_norm, TestDisk,
    WeightedDirectionSpace,
};

/// Relative floor of the eigenvalue threshold.
pub const DELTA_FLOOR: f64 = 1e-8;
/// Added to the reference count to obtain r_max.
pub const R_MAX_SLACK: usize = 2;

/// Synthesize (possibly noisy) far-field data for a configuration.
pub fn synthesize(config: &RunConfig) -> Result<FarFieldOperatorMatrix> {
    let disc = discretize(&ParametricBoundary::new(config.shape)?, config.n_boundary)?;
    let s = assemble_single_layer(&disc, &config.medium, Frequency::Real)?;
    let dirs = DirectionSet::new(config.m_directions)?;
    let f = assemble_farfield_operator(&disc, &s, &config.medium, &dirs)?;
    add_noise(&f, config.noise_level, config.seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Calibrated,
    Explicit,
}

impl Source {
    pub fn label(self) -> &'static str {
        match self {
            Source::Calibrated => "calibrated",
            Source::Explicit => "explicit",
        }
    }
}

/// Threshold pair of the eigenvalue-count test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub delta: f64,
    pub r_max: usize,
    pub delta_source: Source,
    pub r_max_source: Source,
    /// Count of the reference disk when r_max was calibrated.
    pub reference_count: Option<usize>,
}

/// Precomputed pieces shared by every probe of one data set.
pub struct ProbeContext {
    pub space: WeightedDirectionSpace,
    pub re_f: DMatrix<Complex64>,
    pub norm: f64,
    pub f: FarFieldOperatorMatrix,
}

impl ProbeContext {
    pub fn new(f: &FarFieldOperatorMatrix) -> Result<Self> {
        let space = WeightedDirectionSpace::new(DirectionSet::new(f.m)?, &f.medium);
        let re_f = real_part_weighted(f, &space)?;
        let norm = weighted_operator_norm(&f.matrix, &space);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Data(format!("far-field operator has degenerate norm {norm}")));
        }
        Ok(ProbeContext { space, re_f, norm, f: f.clone() })
    }

    /// `max(noise_level ||F||, 1e-8 ||F||)`, norms in weighted coordinates.
    pub fn auto_delta(&self) -> f64 {
        self.f.noise_level().max(DELTA_FLOOR) * self.norm
    }

    /// Eigenvalues of the probe operator for one disk, ascending.
    pub fn spectrum(&self, disk: &TestDisk, root: &DMatrix<f64>) -> Result<Vec<f64>> {
        let p = probe_with_root(&self.re_f, disk, &self.space, root, &self.f.medium)?;
        hermitian_eigenvalues(&p.matrix)
    }

    pub fn count(&self, disk: &TestDisk, root: &DMatrix<f64>, delta: f64) -> Result<usize> {
        Ok(count_above(&self.spectrum(disk, root)?, delta)?.count_above)
    }
}

/// Square root of the H^{1/2} Gram for disks of the given radius.
pub fn disk_gram_root(radius: f64, nb: usize) -> Result<DMatrix<f64>> {
    TestDisk::new([0.0, 0.0], radius, nb)?.gram().sqrt()
}

/// delta from the noise level and norm of F, r_max from the count of the
/// reference disk plus a slack.
pub fn calibrate(ctx: &ProbeContext, reference: &TestDisk) -> Result<Calibration> {
    let delta = ctx.auto_delta();
    let root = reference.gram().sqrt()?;
    let count = ctx.count(reference, &root, delta)?;
    Ok(Calibration {
        delta,
        r_max: count + R_MAX_SLACK,
        delta_source: Source::Calibrated,
        r_max_source: Source::Calibrated,
        reference_count: Some(count),
    })
}

/// Calibration honoring explicit overrides; the reference disk sits at the
/// grid centroid.
pub fn resolve_calibration(
    ctx: &ProbeContext,
    grid: &GridSpec,
    test_radius: f64,
    nb: usize,
    delta: Option<f64>,
    r_max: Option<usize>,
) -> Result<Calibration> {
    let reference = TestDisk::new(grid.centroid(), test_radius, nb)?;
    let mut cal = match (delta, r_max) {
        (Some(d), Some(r)) => Calibration {
            delta: d,
            r_max: r,
            delta_source: Source::Explicit,
            r_max_source: Source::Explicit,
            reference_count: None,
        },
        (Some(d), None) => {
            let root = reference.gram().sqrt()?;
            let count = ctx.count(&reference, &root, d)?;
            Calibration {
                delta: d,
                r_max: count + R_MAX_SLACK,
                delta_source: Source::Explicit,
                r_max_source: Source::Calibrated,
                reference_count: Some(count),
            }
        }
        (None, _) => calibrate(ctx, &reference)?,
    };
    if let Some(r) = r_max {
        cal.r_max = r;
        cal.r_max_source = Source::Explicit;
    }
    if !(cal.delta > 0.0) {
        return Err(Error::Parameter(format!("delta must be positive, got {}", cal.delta)));
    }
    Ok(cal)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Inside,
    Outside,
    Failed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub center: Point,
    /// `None` when the probe failed.
    pub count: Option<usize>,
    pub class: Classification,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorGrid {
    pub grid: GridSpec,
    pub test_radius: f64,
    /// Row-major from (xmin, ymin): index `iy * nx + ix`.
    pub cells: Vec<Cell>,
    pub calibration: Calibration,
}

impl IndicatorGrid {
    pub fn cell(&self, ix: usize, iy: usize) -> &Cell {
        &self.cells[iy * self.grid.nx + ix]
    }

    pub fn inside_count(&self) -> usize {
        self.cells.iter().filter(|c| c.class == Classification::Inside).count()
    }

    pub fn failed_count(&self) -> usize {
        self.cells.iter().filter(|c| c.class == Classification::Failed).count()
    }
}

/// Classify every grid center by the eigenvalue count of its test disk.
pub fn sweep(
    ctx: &ProbeContext,
    grid: &GridSpec,
    test_radius: f64,
    nb: usize,
    calibration: Calibration,
) -> Result<IndicatorGrid> {
    let root = disk_gram_root(test_radius, nb)?;
    let cells = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let center = grid.point(idx % grid.nx, idx / grid.nx);
            let count = TestDisk::new(center, test_radius, nb)
                .and_then(|disk| ctx.count(&disk, &root, calibration.delta))
                .ok();
            let class = match count {
                None => Classification::Failed,
                Some(c) if c <= calibration.r_max => Classification::Inside,
                Some(_) => Classification::Outside,
            };
            Cell { center, count, class }
        })
        .collect();
    Ok(IndicatorGrid { grid: *grid, test_radius, cells, calibration })
}

/// Calibrate from the configuration and sweep its grid.
pub fn reconstruct(config: &RunConfig, f: &FarFieldOperatorMatrix) -> Result<IndicatorGrid> {
    let ctx = ProbeContext::new(f)?;
    let cal = resolve_calibration(&ctx, &config.grid, config.test_radius, config.nb, config.delta, config.r_max)?;
    sweep(&ctx, &config.grid, config.test_radius, config.nb, cal)
}

pub const CSV_HEADER: &str = "x,y,count,inside";

pub fn indicator_csv(grid: &IndicatorGrid) -> String {
    let mut out = String::with_capacity(64 * grid.cells.len());
    out.push_str(CSV_HEADER);
    out.push('\n');
    for cell in &grid.cells {
        let count = cell.count.map_or(-1, |c| c as i64);
        let inside = u8::from(cell.class == Classification::Inside);
        let _ = writeln!(out, "{:.16e},{:.16e},{},{}", cell.center[0], cell.center[1], count, inside);
    }
    out
}

pub fn write_indicator_csv(grid: &IndicatorGrid, path: &Path) -> Result<()> {
    std::fs::write(path, indicator_csv(grid))?;
    Ok(())
}

/// One parsed CSV row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub x: f64,
    pub y: f64,
    pub count: i64,
    pub inside: bool,
}

pub fn parse_indicator_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => return Err(Error::Format { line: 1, msg: format!("expected header '{CSV_HEADER}'") }),
    }
    lines
        .map(|(i, line)| {
            let bad = || Error::Format { line: i + 1, msg: format!("malformed row '{line}'") };
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(bad());
            }
            Ok(CsvRow {
                x: f[0].parse().map_err(|_| bad())?,
                y: f[1].parse().map_err(|_| bad())?,
                count: f[2].parse().map_err(|_| bad())?,
                inside: match f[3] {
                    "1" => true,
                    "0" => false,
                    _ => return Err(bad()),
                },
            })
        })
        .collect()
}

pub fn read_indicator_csv(path: &Path) -> Result<Vec<CsvRow>> {
    parse_indicator_csv(&std::fs::read_to_string(path)?)
}

/// Plain PGM: 255 inside, 0 outside, 128 failed; first row is ymax.
pub fn indicator_pgm(grid: &IndicatorGrid) -> String {
    let (nx, ny) = (grid.grid.nx, grid.grid.ny);
    let cal = &grid.calibration;
    let mut out = String::new();
    out.push_str("P2\n");
    let _ = writeln!(
        out,
        "# delta {:.16e} ({}) r_max {} ({}) test_radius {:.16e}",
        cal.delta,
        cal.delta_source.label(),
        cal.r_max,
        cal.r_max_source.label(),
        grid.test_radius
    );
    let _ = writeln!(out, "{nx} {ny}");
    out.push_str("255\n");
    for iy in (0..ny).rev() {
        let row: Vec<&str> = (0..nx)
            .map(|ix| match grid.cell(ix, iy).class {
                Classification::Inside => "255",
                Classification::Outside => "0",
                Classification::Failed => "128",
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_indicator_pgm(grid: &IndicatorGrid, path: &Path) -> Result<()> {
    std::fs::write(path, indicator_pgm(grid))?;
    Ok(())
}

/// Jaccard overlap of the classified-inside cells with a reference set.
pub fn jaccard<F: Fn(Point) -> bool>(grid: &IndicatorGrid, truth: F) -> f64 {
    let (mut both, mut any) = (0usize, 0usize);
    for cell in &grid.cells {
        let a = cell.class == Classification::Inside;
        let b = truth(cell.center);
        both += usize::from(a && b);
        any += usize::from(a || b);
    }
    if any == 0 {
        1.0
    } else {
        both as f64 / any as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_grid(classes: &[Classification], nx: usize, ny: usize) -> IndicatorGrid {
        let grid = GridSpec::new(-1.0, 1.0, -1.0, 1.0, nx, ny).unwrap();
        let cells = classes
            .iter()
            .enumerate()
            .map(|(i, &class)| Cell {
                center: grid.point(i % nx, i / nx),
                count: if class == Classification::Failed { None } else { Some(i) },
                class,
            })
            .collect();
        IndicatorGrid {
            grid,
            test_radius: 0.3,
            cells,
            calibration: Calibration {
                delta: 1e-8,
                r_max: 4,
                delta_source: Source::Calibrated,
                r_max_source: Source::Explicit,
                reference_count: Some(2),
            },
        }
    }

    #[test]
    fn csv_layout_and_roundtrip() {
        use Classification::*;
        let g = toy_grid(&[Inside, Outside, Failed, Inside], 2, 2);
        let text = indicator_csv(&g);
        assert_eq!(text.lines().count(), 5);
        assert!(text.starts_with("x,y,count,inside\n"));
        assert!(!text.contains('\r'));
        let rows = parse_indicator_csv(&text).unwrap();
        assert_eq!(rows.iter().map(|r| r.count).collect::<Vec<_>>(), vec![0, 1, -1, 3]);
        assert_eq!(rows[0].x, -1.0);
        assert_eq!(rows[1].x, 1.0);
        assert_eq!(rows[2].y, 1.0);
        assert!(rows[3].inside && !rows[2].inside);
        assert!(parse_indicator_csv("x,y\n").is_err());
    }

    #[test]
    fn pgm_layout() {
        use Classification::*;
        let g = toy_grid(&[Inside, Outside, Failed, Outside, Outside, Outside], 3, 2);
        let text = indicator_pgm(&g);
        let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(lines[0], "P2");
        assert_eq!(lines[1], "3 2");
        assert_eq!(lines[2], "255");
        assert_eq!(lines[3], "0 0 0");
        assert_eq!(lines[4], "255 0 128");
        let all_out = toy_grid(&[Outside; 4], 2, 2);
        let img = indicator_pgm(&all_out);
        let px: Vec<&str> = img.lines().skip(4).flat_map(|l| l.split(' ')).collect();
        assert!(px.iter().all(|&p| p == "0"));
    }

    #[test]
    fn jaccard_counts_cells() {
        use Classification::*;
        let g = toy_grid(&[Inside, Inside, Outside, Outside], 2, 2);
        assert_eq!(jaccard(&g, |p| p[1] < 0.0), 1.0);
        assert_eq!(jaccard(&g, |p| p[0] < 0.0), 1.0 / 3.0);
    }
}
