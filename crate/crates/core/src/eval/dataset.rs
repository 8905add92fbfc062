use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::pgm::read_pgm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PixelPos {
    pub x: usize,
    pub y: usize,
}

impl PixelPos {
    pub fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }
}

/// Ground-truth pupil centres as labelled in a `.eye` file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EyeAnnotation {
    pub left: PixelPos,
    pub right: PixelPos,
}

impl EyeAnnotation {
    pub fn new(left: PixelPos, right: PixelPos) -> Self {
        Self { left, right }
    }

    pub fn interocular_distance(&self) -> f64 {
        (self.left.x as f64 - self.right.x as f64).hypot(self.left.y as f64 - self.right.y as f64)
    }
}

/// One dataset entry.
#[derive(Clone, Debug)]
pub struct Sample {
    pub id: String,
    pub image: GrayImage,
    pub annotation: EyeAnnotation,
}

/// Parses `.eye` contents: `#`-prefixed header lines, then one line with
/// `LX LY RX RY`.
pub fn parse_eye_file(text: &str) -> std::result::Result<EyeAnnotation, String> {
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| "no coordinate line".to_string())?;
    let numbers = line
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| format!("not a pixel coordinate: {t:?}"))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    match numbers[..] {
        [lx, ly, rx, ry] => Ok(EyeAnnotation::new(
            PixelPos::new(lx, ly),
            PixelPos::new(rx, ry),
        )),
        _ => Err(format!("expected 4 coordinates, found {}", numbers.len())),
    }
}

pub fn read_eye_file(path: impl AsRef<Path>) -> Result<EyeAnnotation> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_eye_file(&text).map_err(|reason| Error::MalformedEyeFile {
        path: path.to_path_buf(),
        reason,
    })
}

pub fn write_eye_file(path: impl AsRef<Path>, annotation: &EyeAnnotation) -> Result<()> {
    let path = path.as_ref();
    let text = format!(
        "#LX\tLY\tRX\tRY\n{}\t{}\t{}\t{}\n",
        annotation.left.x, annotation.left.y, annotation.right.x, annotation.right.y
    );
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Loads every `<name>.pgm` in `dir` with its `<name>.eye` annotation,
/// sorted by file name. `.eye` files without an image are ignored.
pub fn load_bioid(dir: impl AsRef<Path>) -> Result<Vec<Sample>> {
    let dir = dir.as_ref();
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut images: Vec<PathBuf> = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let is_pgm = path
            .extension()
            .is_some_and(|ext| ext.eq_ignore_ascii_case("pgm"));
        if is_pgm && path.is_file() {
            images.push(path);
        }
    }
    images.sort();

    images
        .into_iter()
        .map(|image_path| {
            let eye_path = image_path.with_extension("eye");
            if !eye_path.is_file() {
                return Err(Error::MissingAnnotation { path: image_path });
            }
            let image = read_pgm(&image_path)?;
            let annotation = read_eye_file(&eye_path)?;
            validate_annotation(&annotation, &image).map_err(|reason| Error::MalformedEyeFile {
                path: eye_path.clone(),
                reason,
            })?;
            let id = image_path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok(Sample {
                id,
                image,
                annotation,
            })
        })
        .collect()
}

fn validate_annotation(a: &EyeAnnotation, img: &GrayImage) -> std::result::Result<(), String> {
    if a.left == a.right {
        return Err("left and right pupil coincide".into());
    }
    for (name, p) in [("left", a.left), ("right", a.right)] {
        if p.x >= img.width() || p.y >= img.height() {
            return Err(format!(
                "{name} pupil ({}, {}) outside {}x{} image",
                p.x,
                p.y,
                img.width(),
                img.height()
            ));
        }
    }
    Ok(())
}
