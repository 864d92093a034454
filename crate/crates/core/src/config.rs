//! Run configuration: flat `key = value` text with `#` comments.
//!
//! ```text
//! lambda = 2
//! mu = 1
//! omega = 1
//! scatterer = kite
//! scatterer.center = 0,0
//! scatterer.scale = 1
//! n_boundary = 128
//! m_directions = 64
//! noise_level = 0.001
//! seed = 7
//! grid = -2,2,-2,2,41,41
//! test_radius = 0.3
//! nB = 32
//! # delta = 1e-6
//! # r_max = 4
//! ```
//!
//! The grid may also be given key by key (`grid.xmin`, `grid.xmax`,
//! `grid.ymin`, `grid.ymax`, `grid.nx`, `grid.ny`).

use std::collections::BTreeMap;
use std::path::Path;

use crate::boundary::Shape;
use crate::elastic::{ElasticMedium, Point};
use crate::error::{Error, Result};

pub const DEFAULT_N_BOUNDARY: usize = 128;
pub const DEFAULT_M_DIRECTIONS: usize = 64;
pub const DEFAULT_TEST_RADIUS: f64 = 0.3;
pub const DEFAULT_NB: usize = 32;

/// Rectangular grid of test-disk centers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64, nx: usize, ny: usize) -> Result<Self> {
        let finite = [xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite());
        if !finite || xmin >= xmax || ymin >= ymax {
            return Err(Error::Parameter(format!("invalid grid bounds [{xmin}, {xmax}] x [{ymin}, {ymax}]")));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::Parameter(format!("grid needs nx, ny >= 2, got {nx} x {ny}")));
        }
        Ok(GridSpec { xmin, xmax, ymin, ymax, nx, ny })
    }

    /// Center of cell (ix, iy).
    pub fn point(&self, ix: usize, iy: usize) -> Point {
        let lerp = |lo: f64, hi: f64, i: usize, n: usize| {
            let t = i as f64 / (n - 1) as f64;
            (1.0 - t) * lo + t * hi
        };
        [lerp(self.xmin, self.xmax, ix, self.nx), lerp(self.ymin, self.ymax, iy, self.ny)]
    }

    pub fn centroid(&self) -> Point {
        [0.5 * (self.xmin + self.xmax), 0.5 * (self.ymin + self.ymax)]
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub medium: ElasticMedium,
    pub shape: Shape,
    pub n_boundary: usize,
    pub m_directions: usize,
    pub noise_level: f64,
    pub seed: u64,
    pub grid: GridSpec,
    pub test_radius: f64,
    pub nb: usize,
    pub delta: Option<f64>,
    pub r_max: Option<usize>,
}

const KNOWN_KEYS: &[&str] = &[
    "lambda",
    "mu",
    "omega",
    "scatterer",
    "scatterer.center",
    "scatterer.radius",
    "scatterer.a",
    "scatterer.b",
    "scatterer.scale",
    "n_boundary",
    "m_directions",
    "noise_level",
    "seed",
    "grid",
    "grid.xmin",
    "grid.xmax",
    "grid.ymin",
    "grid.ymax",
    "grid.nx",
    "grid.ny",
    "test_radius",
    "nB",
    "delta",
    "r_max",
];

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn raw(&self, key: &str) -> Option<&(usize, String)> {
        self.map.get(key)
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key)
            .map(|(line, v)| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::Format { line: *line, msg: format!("'{key}' expects a finite number, got '{v}'") })
            })
            .transpose()
    }

    fn require_f64(&self, key: &str) -> Result<f64> {
        self.f64(key)?.ok_or_else(|| missing(key))
    }

    fn uint<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.raw(key)
            .map(|(line, v)| {
                v.parse::<T>().map_err(|_| Error::Format {
                    line: *line,
                    msg: format!("'{key}' expects a non-negative integer, got '{v}'"),
                })
            })
            .transpose()
    }

    fn list(&self, key: &str) -> Result<Option<(usize, Vec<String>)>> {
        Ok(self.raw(key).map(|(line, v)| (*line, v.split(',').map(|s| s.trim().to_string()).collect())))
    }

    fn point(&self, key: &str) -> Result<Option<Point>> {
        match self.list(key)? {
            None => Ok(None),
            Some((line, parts)) => {
                let vals: Vec<f64> = parts.iter().filter_map(|p| p.parse().ok()).filter(|x: &f64| x.is_finite()).collect();
                if parts.len() != 2 || vals.len() != 2 {
                    return Err(Error::Format { line, msg: format!("'{key}' expects 'x,y'") });
                }
                Ok(Some([vals[0], vals[1]]))
            }
        }
    }
}

fn missing(key: &str) -> Error {
    Error::Format { line: 0, msg: format!("missing required key '{key}'") }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::Format { line, msg: format!("expected 'key = value', got '{content}'") })?;
            let (key, value) = (key.trim(), value.trim());
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::Format { line, msg: format!("unknown key '{key}'") });
            }
            if map.insert(key.to_string(), (line, value.to_string())).is_some() {
                return Err(Error::Format { line, msg: format!("duplicate key '{key}'") });
            }
        }
        let e = Entries { map };

        let medium = ElasticMedium::new(e.require_f64("lambda")?, e.require_f64("mu")?, e.require_f64("omega")?)?;

        let kind = e.raw("scatterer").map(|(_, v)| v.as_str()).ok_or_else(|| missing("scatterer"))?;
        let center = e.point("scatterer.center")?.unwrap_or([0.0, 0.0]);
        let shape = match kind {
            "circle" => Shape::Circle { center, radius: e.require_f64("scatterer.radius")? },
            "ellipse" => Shape::Ellipse { center, a: e.require_f64("scatterer.a")?, b: e.require_f64("scatterer.b")? },
            "kite" => Shape::Kite { center, scale: e.f64("scatterer.scale")?.unwrap_or(1.0) },
            "peanut" => Shape::Peanut { center, scale: e.f64("scatterer.scale")?.unwrap_or(1.0) },
            other => {
                let line = e.raw("scatterer").map_or(0, |r| r.0);
                return Err(Error::Format { line, msg: format!("unknown scatterer '{other}'") });
            }
        };
        shape.validate()?;

        let grid = match e.list("grid")? {
            Some((line, parts)) => {
                let bad = || Error::Format { line, msg: "'grid' expects 'xmin,xmax,ymin,ymax,nx,ny'".into() };
                if parts.len() != 6 {
                    return Err(bad());
                }
                let b: Vec<f64> = parts[..4].iter().map(|p| p.parse().map_err(|_| bad())).collect::<Result<_>>()?;
                let nx = parts[4].parse().map_err(|_| bad())?;
                let ny = parts[5].parse().map_err(|_| bad())?;
                if ["grid.xmin", "grid.xmax", "grid.ymin", "grid.ymax", "grid.nx", "grid.ny"]
                    .iter()
                    .any(|k| e.raw(k).is_some())
                {
                    return Err(Error::Format { line, msg: "give the grid either as 'grid' or as 'grid.*' keys".into() });
                }
                GridSpec::new(b[0], b[1], b[2], b[3], nx, ny)?
            }
            None => GridSpec::new(
                e.require_f64("grid.xmin")?,
                e.require_f64("grid.xmax")?,
                e.require_f64("grid.ymin")?,
                e.require_f64("grid.ymax")?,
                e.uint("grid.nx")?.ok_or_else(|| missing("grid.nx"))?,
                e.uint("grid.ny")?.ok_or_else(|| missing("grid.ny"))?,
            )?,
        };

        let noise_level = e.f64("noise_level")?.unwrap_or(0.0);
        if !(0.0..1.0).contains(&noise_level) {
            return Err(Error::Parameter(format!("noise_level must lie in [0, 1), got {noise_level}")));
        }
        let test_radius = e.f64("test_radius")?.unwrap_or(DEFAULT_TEST_RADIUS);
        if test_radius <= 0.0 {
            return Err(Error::Parameter(format!("test_radius must be positive, got {test_radius}")));
        }
        let delta = e.f64("delta")?;
        if delta.is_some_and(|d| d <= 0.0) {
            return Err(Error::Parameter("delta must be positive".into()));
        }

        Ok(RunConfig {
            medium,
            shape,
            n_boundary: e.uint("n_boundary")?.unwrap_or(DEFAULT_N_BOUNDARY),
            m_directions: e.uint("m_directions")?.unwrap_or(DEFAULT_M_DIRECTIONS),
            noise_level,
            seed: e.uint("seed")?.unwrap_or(0),
            grid,
            test_radius,
            nb: e.uint("nB")?.unwrap_or(DEFAULT_NB),
            delta,
            r_max: e.uint("r_max")?,
        })
    }
}
