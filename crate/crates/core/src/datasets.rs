//! Point clouds, the synthetic benchmark generators and CSV I/O.
//!
//! Every generator draws its parameters from a ChaCha8 stream seeded with
//! [`DatasetSpec::seed`], so a spec always produces the same cloud.

use std::f64::consts::PI;
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use ndarray::{Array2, ArrayView1};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CdpError, Result};

/// `N` points in `R^d`, with an optional plotting parameter and labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Array2<f64>,
    color: Option<Vec<f64>>,
    names: Option<Vec<String>>,
}

impl PointCloud {
    pub fn new(points: Array2<f64>) -> Result<Self> {
        let (n, d) = points.dim();
        if n == 0 || d == 0 {
            return Err(CdpError::InvalidParameter(format!(
                "point cloud must have at least one point and one coordinate, got {n}x{d}"
            )));
        }
        if let Some(((row, col), _)) = points.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(CdpError::BadValue {
                row,
                column: col,
                message: "non-finite coordinate".into(),
            });
        }
        Ok(Self {
            points,
            color: None,
            names: None,
        })
    }

    pub fn with_color(mut self, color: Vec<f64>) -> Result<Self> {
        if color.len() != self.len() {
            return Err(CdpError::InvalidParameter(format!(
                "color has {} entries for {} points",
                color.len(),
                self.len()
            )));
        }
        self.color = Some(color);
        Ok(self)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.len() {
            return Err(CdpError::InvalidParameter(format!(
                "names has {} entries for {} points",
                names.len(),
                self.len()
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.points.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn points(&self) -> &Array2<f64> {
        &self.points
    }

    pub fn point(&self, i: usize) -> ArrayView1<'_, f64> {
        self.points.row(i)
    }

    pub fn color(&self) -> Option<&[f64]> {
        self.color.as_deref()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display label of point `i`: its name when present, its index otherwise.
    pub fn label(&self, i: usize) -> String {
        match &self.names {
            Some(names) => names[i].clone(),
            None => i.to_string(),
        }
    }

    /// Replaces the coordinates while keeping color and names.
    pub(crate) fn with_points(&self, points: Array2<f64>) -> Result<Self> {
        let mut out = PointCloud::new(points)?;
        if out.len() != self.len() {
            return Err(CdpError::InvalidParameter(
                "replacement coordinates change the point count".into(),
            ));
        }
        out.color = self.color.clone();
        out.names = self.names.clone();
        Ok(out)
    }

    /// Sub-cloud made of the listed rows, in the given order.
    pub fn select(&self, rows: &[usize]) -> Result<Self> {
        let d = self.dim();
        let mut points = Array2::zeros((rows.len(), d));
        for (new, &old) in rows.iter().enumerate() {
            points.row_mut(new).assign(&self.points.row(old));
        }
        let mut out = PointCloud::new(points)?;
        out.color = self
            .color
            .as_ref()
            .map(|c| rows.iter().map(|&r| c[r]).collect());
        out.names = self
            .names
            .as_ref()
            .map(|n| rows.iter().map(|&r| n[r].clone()).collect());
        Ok(out)
    }
}

/// Euclidean distance between two coordinate rows.
pub fn euclidean(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (y - x) * (y - x))
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DatasetKind {
    SwissRoll,
    Torus,
    SCurve,
    Helix,
    Mobius,
    Klein,
    AnnulusObstacle,
    Toy5,
}

impl DatasetKind {
    pub const ALL: [DatasetKind; 8] = [
        DatasetKind::SwissRoll,
        DatasetKind::Torus,
        DatasetKind::SCurve,
        DatasetKind::Helix,
        DatasetKind::Mobius,
        DatasetKind::Klein,
        DatasetKind::AnnulusObstacle,
        DatasetKind::Toy5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DatasetKind::SwissRoll => "swiss_roll",
            DatasetKind::Torus => "torus",
            DatasetKind::SCurve => "s_curve",
            DatasetKind::Helix => "helix",
            DatasetKind::Mobius => "mobius",
            DatasetKind::Klein => "klein",
            DatasetKind::AnnulusObstacle => "annulus_obstacle",
            DatasetKind::Toy5 => "toy5",
        }
    }
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for DatasetKind {
    type Err = CdpError;

    fn from_str(s: &str) -> Result<Self> {
        DatasetKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CdpError::UnknownKind(s.to_string()))
    }
}

/// Shape of a generated dataset together with its geometric parameters.
///
/// Defaults (see [`Shape::default_for`]):
///
/// | kind | parameterization | defaults |
/// |------|------------------|----------|
/// | swiss_roll | `(t cos t, h·v, t sin t)`, `t ∈ [1.5π, 4.5π]` | `height = 21` |
/// | torus | `((R + r cos φ) cos θ, (R + r cos φ) sin θ, r sin φ)` | `R = 2`, `r = 0.5` |
/// | s_curve | `(sin t, h·v, sign(t)(cos t − 1))`, `t ∈ [−1.5π, 1.5π]` | `height = 2` |
/// | helix | `(R cos t, R sin t, pitch·t/2π)`, `t ∈ [0, 2π·turns]` | `R = 1`, `pitch = 1.5`, `turns = 3` |
/// | mobius | `((R + v cos(u/2)) cos u, (R + v cos(u/2)) sin u, v sin(u/2))` | `R = 1`, `half_width = 0.5` |
/// | klein | figure-8 immersion with tube offset `a` | `a = 2` |
/// | annulus_obstacle | area-uniform annulus minus a disc, slab in `z` | `r ∈ [1, 2]`, disc `(1.5, 0)` radius `0.5`, `thickness = 0.3` |
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    SwissRoll {
        height: f64,
    },
    Torus {
        major_radius: f64,
        minor_radius: f64,
    },
    SCurve {
        height: f64,
    },
    Helix {
        radius: f64,
        pitch: f64,
        turns: f64,
    },
    Mobius {
        radius: f64,
        half_width: f64,
    },
    Klein {
        offset: f64,
    },
    AnnulusObstacle(Annulus),
    Toy5,
}

/// Planar annulus with a circular hole punched through it.
#[derive(Debug, Clone, PartialEq)]
pub struct Annulus {
    pub r_inner: f64,
    pub r_outer: f64,
    pub obstacle_x: f64,
    pub obstacle_y: f64,
    pub obstacle_radius: f64,
    pub thickness: f64,
}

impl Default for Annulus {
    fn default() -> Self {
        Self {
            r_inner: 1.0,
            r_outer: 2.0,
            obstacle_x: 1.5,
            obstacle_y: 0.0,
            obstacle_radius: 0.5,
            thickness: 0.3,
        }
    }
}

impl Annulus {
    /// Acceptance predicate of the rejection sampler.
    pub fn accepts(&self, x: f64, y: f64) -> bool {
        let r = x.hypot(y);
        let dx = x - self.obstacle_x;
        let dy = y - self.obstacle_y;
        r >= self.r_inner && r <= self.r_outer && dx.hypot(dy) > self.obstacle_radius
    }
}

impl Shape {
    pub fn default_for(kind: DatasetKind) -> Self {
        match kind {
            DatasetKind::SwissRoll => Shape::SwissRoll { height: 21.0 },
            DatasetKind::Torus => Shape::Torus {
                major_radius: 2.0,
                minor_radius: 0.5,
            },
            DatasetKind::SCurve => Shape::SCurve { height: 2.0 },
            DatasetKind::Helix => Shape::Helix {
                radius: 1.0,
                pitch: 1.5,
                turns: 3.0,
            },
            DatasetKind::Mobius => Shape::Mobius {
                radius: 1.0,
                half_width: 0.5,
            },
            DatasetKind::Klein => Shape::Klein { offset: 2.0 },
            DatasetKind::AnnulusObstacle => Shape::AnnulusObstacle(Annulus::default()),
            DatasetKind::Toy5 => Shape::Toy5,
        }
    }

    pub fn kind(&self) -> DatasetKind {
        match self {
            Shape::SwissRoll { .. } => DatasetKind::SwissRoll,
            Shape::Torus { .. } => DatasetKind::Torus,
            Shape::SCurve { .. } => DatasetKind::SCurve,
            Shape::Helix { .. } => DatasetKind::Helix,
            Shape::Mobius { .. } => DatasetKind::Mobius,
            Shape::Klein { .. } => DatasetKind::Klein,
            Shape::AnnulusObstacle(_) => DatasetKind::AnnulusObstacle,
            Shape::Toy5 => DatasetKind::Toy5,
        }
    }

    /// Overrides one named parameter, e.g. `("height", 10.0)`.
    pub fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(CdpError::InvalidParameter(format!(
                "parameter {name} must be finite"
            )));
        }
        let slot = match (self, name) {
            (Shape::SwissRoll { height }, "height") | (Shape::SCurve { height }, "height") => {
                height
            }
            (Shape::Torus { major_radius, .. }, "major_radius") => major_radius,
            (Shape::Torus { minor_radius, .. }, "minor_radius") => minor_radius,
            (Shape::Helix { radius, .. }, "radius") => radius,
            (Shape::Helix { pitch, .. }, "pitch") => pitch,
            (Shape::Helix { turns, .. }, "turns") => turns,
            (Shape::Mobius { radius, .. }, "radius") => radius,
            (Shape::Mobius { half_width, .. }, "half_width") => half_width,
            (Shape::Klein { offset }, "offset") => offset,
            (Shape::AnnulusObstacle(a), "r_inner") => &mut a.r_inner,
            (Shape::AnnulusObstacle(a), "r_outer") => &mut a.r_outer,
            (Shape::AnnulusObstacle(a), "obstacle_x") => &mut a.obstacle_x,
            (Shape::AnnulusObstacle(a), "obstacle_y") => &mut a.obstacle_y,
            (Shape::AnnulusObstacle(a), "obstacle_radius") => &mut a.obstacle_radius,
            (Shape::AnnulusObstacle(a), "thickness") => &mut a.thickness,
            (shape, _) => {
                return Err(CdpError::InvalidParameter(format!(
                    "{} has no parameter `{name}`",
                    shape.kind()
                )))
            }
        };
        *slot = value;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub shape: Shape,
    pub n_points: usize,
    pub seed: u64,
}

impl DatasetSpec {
    pub fn new(kind: DatasetKind, n_points: usize, seed: u64) -> Self {
        Self {
            shape: Shape::default_for(kind),
            n_points,
            seed,
        }
    }

    pub fn toy5() -> Self {
        Self::new(DatasetKind::Toy5, 5, 0)
    }
}

/// The five-point example used throughout the golden tests.
pub fn toy5() -> PointCloud {
    let points = ndarray::array![
        [0.0, 0.0, 0.0],
        [1.0, 0.2, 0.0],
        [2.0, 0.0, 0.0],
        [2.0, 1.0, 0.0],
        [1.0, 0.5, 1.0],
    ];
    PointCloud::new(points)
        .and_then(|c| c.with_names(["A", "B", "C", "D", "E"].map(String::from).to_vec()))
        .expect("toy coordinates are valid")
}

pub fn generate(spec: &DatasetSpec) -> Result<PointCloud> {
    if let Shape::Toy5 = spec.shape {
        return Ok(toy5());
    }
    let n = spec.n_points;
    if n == 0 {
        return Err(CdpError::InvalidParameter(
            "n_points must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut points = Array2::zeros((n, 3));
    let mut color = Vec::with_capacity(n);

    for i in 0..n {
        let (p, c) = match &spec.shape {
            Shape::SwissRoll { height } => {
                let t = 1.5 * PI * (1.0 + 2.0 * rng.random::<f64>());
                let h = height * rng.random::<f64>();
                ([t * t.cos(), h, t * t.sin()], t)
            }
            Shape::Torus {
                major_radius,
                minor_radius,
            } => {
                let theta = 2.0 * PI * rng.random::<f64>();
                let phi = 2.0 * PI * rng.random::<f64>();
                let ring = major_radius + minor_radius * phi.cos();
                (
                    [ring * theta.cos(), ring * theta.sin(), minor_radius * phi.sin()],
                    theta,
                )
            }
            Shape::SCurve { height } => {
                let t = 3.0 * PI * (rng.random::<f64>() - 0.5);
                let h = height * rng.random::<f64>();
                ([t.sin(), h, t.signum() * (t.cos() - 1.0)], t)
            }
            Shape::Helix {
                radius,
                pitch,
                turns,
            } => {
                let t = 2.0 * PI * turns * rng.random::<f64>();
                (
                    [radius * t.cos(), radius * t.sin(), pitch * t / (2.0 * PI)],
                    t,
                )
            }
            Shape::Mobius { radius, half_width } => {
                let u = 2.0 * PI * rng.random::<f64>();
                let v = half_width * (2.0 * rng.random::<f64>() - 1.0);
                let ring = radius + v * (u / 2.0).cos();
                ([ring * u.cos(), ring * u.sin(), v * (u / 2.0).sin()], u)
            }
            Shape::Klein { offset } => {
                let u = 2.0 * PI * rng.random::<f64>();
                let v = 2.0 * PI * rng.random::<f64>();
                let (half_sin, half_cos) = (u / 2.0).sin_cos();
                let ring = offset + half_cos * v.sin() - half_sin * (2.0 * v).sin();
                (
                    [
                        ring * u.cos(),
                        ring * u.sin(),
                        half_sin * v.sin() + half_cos * (2.0 * v).sin(),
                    ],
                    u,
                )
            }
            Shape::AnnulusObstacle(a) => sample_annulus(a, &mut rng)?,
            Shape::Toy5 => unreachable!(),
        };
        points.row_mut(i).assign(&ndarray::aview1(&p));
        color.push(c);
    }
    PointCloud::new(points)?.with_color(color)
}

fn sample_annulus(a: &Annulus, rng: &mut ChaCha8Rng) -> Result<([f64; 3], f64)> {
    if !(a.r_inner >= 0.0 && a.r_outer > a.r_inner) {
        return Err(CdpError::InvalidParameter(
            "annulus requires 0 <= r_inner < r_outer".into(),
        ));
    }
    let (lo, hi) = (a.r_inner * a.r_inner, a.r_outer * a.r_outer);
    // Bounded so a fully covering obstacle fails instead of spinning.
    for _ in 0..1_000_000 {
        let r = (lo + (hi - lo) * rng.random::<f64>()).sqrt();
        let angle = 2.0 * PI * rng.random::<f64>();
        let z = a.thickness * rng.random::<f64>();
        let (x, y) = (r * angle.cos(), r * angle.sin());
        if a.accepts(x, y) {
            return Ok(([x, y, z], angle));
        }
    }
    Err(CdpError::InvalidParameter(
        "obstacle covers the whole annulus".into(),
    ))
}

/// Reads a comma-separated point file.
///
/// A first row that does not parse as numbers is a header. With a header, a
/// leading column named `name` holds labels and a trailing column named
/// `color` holds the plotting parameter. Row numbers in errors are 1-based
/// file lines.
pub fn load_csv(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?;

    let mut records = Vec::new();
    for rec in reader.records() {
        records.push(rec?);
    }
    let Some(first) = records.first() else {
        return Err(CdpError::EmptyInput(path.display().to_string()));
    };

    let header: Option<Vec<String>> = if first.iter().any(|c| c.parse::<f64>().is_err()) {
        Some(first.iter().map(|s| s.to_ascii_lowercase()).collect())
    } else {
        None
    };
    let width = first.len();
    let name_col = header
        .as_ref()
        .is_some_and(|h| h.first().map(String::as_str) == Some("name"));
    let color_col = header
        .as_ref()
        .is_some_and(|h| h.last().map(String::as_str) == Some("color") && width > 1);
    let first_coord = usize::from(name_col);
    let end_coord = width - usize::from(color_col);
    if end_coord <= first_coord {
        return Err(CdpError::EmptyInput(format!(
            "{}: no coordinate columns",
            path.display()
        )));
    }

    let skip = usize::from(header.is_some());
    let rows = &records[skip..];
    if rows.is_empty() {
        return Err(CdpError::EmptyInput(path.display().to_string()));
    }

    let d = end_coord - first_coord;
    let mut points = Array2::zeros((rows.len(), d));
    let mut names = Vec::new();
    let mut color = Vec::new();
    for (idx, rec) in rows.iter().enumerate() {
        let line = idx + skip + 1;
        if rec.len() != width {
            return Err(CdpError::RaggedRow {
                row: line,
                expected: width,
                found: rec.len(),
            });
        }
        let parse = |col: usize| -> Result<f64> {
            let cell = &rec[col];
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                Ok(_) => Err(CdpError::BadValue {
                    row: line,
                    column: col + 1,
                    message: format!("non-finite value `{cell}`"),
                }),
                Err(_) => Err(CdpError::BadValue {
                    row: line,
                    column: col + 1,
                    message: format!("not a number: `{cell}`"),
                }),
            }
        };
        for c in first_coord..end_coord {
            points[[idx, c - first_coord]] = parse(c)?;
        }
        if name_col {
            names.push(rec[0].to_string());
        }
        if color_col {
            color.push(parse(width - 1)?);
        }
    }

    let mut cloud = PointCloud::new(points)?;
    if name_col {
        cloud = cloud.with_names(names)?;
    }
    if color_col {
        cloud = cloud.with_color(color)?;
    }
    Ok(cloud)
}

/// Writes a cloud in the format read by [`load_csv`].
///
/// Values use the shortest decimal form that parses back to the same `f64`.
pub fn save_csv(cloud: &PointCloud, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path.as_ref())?;
    let mut out = BufWriter::new(file);
    write_csv(cloud, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn write_csv(cloud: &PointCloud, out: &mut impl Write) -> Result<()> {
    let mut header: Vec<String> = Vec::new();
    if cloud.names.is_some() {
        header.push("name".into());
    }
    header.extend((0..cloud.dim()).map(|c| format!("x{c}")));
    if cloud.color.is_some() {
        header.push("color".into());
    }
    writeln!(out, "{}", header.join(","))?;

    for i in 0..cloud.len() {
        let mut cells: Vec<String> = Vec::with_capacity(header.len());
        if let Some(names) = &cloud.names {
            cells.push(names[i].clone());
        }
        cells.extend(cloud.point(i).iter().map(|v| v.to_string()));
        if let Some(color) = &cloud.color {
            cells.push(color[i].to_string());
        }
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}
