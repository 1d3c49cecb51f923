//! File formats: colour maps (CSV, JSON), path definitions, ASCII grids and
//! 8-bit images (binary PPM, PNG).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::catalog::{Attribute, ColorMap, Provenance};
use crate::colorspace::RgbColor;
use crate::error::{Error, Result};
use crate::grid::{RgbImage, ScalarGrid};
use crate::spline::{MapPath, PathDef};

pub const FORMAT_TAG: &str = "cmapforge v1";

fn round6(v: f64) -> f64 {
    let r = (v * 1e6).round() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn attribute_list(map: &ColorMap) -> String {
    map.attributes.iter().map(|a| a.as_str()).collect::<Vec<_>>().join("|")
}

/// `# cmapforge v1, n=<N>, attributes=a|b` followed by `r,g,b` rows.
pub fn map_to_csv(map: &ColorMap) -> String {
    let mut s = format!("# {FORMAT_TAG}, n={}, attributes={}\n", map.len(), attribute_list(map));
    for c in &map.entries {
        let _ = writeln!(s, "{:.6},{:.6},{:.6}", round6(c.r), round6(c.g), round6(c.b));
    }
    s
}

/// Parses CSV written by [`map_to_csv`]. A file without the header is read
/// as bare `r,g,b` rows with no attributes.
pub fn map_from_csv(text: &str, name: &str) -> Result<ColorMap> {
    let mut expected_n = None;
    let mut attributes = Vec::new();
    let mut entries = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            if line_no == 1 {
                let (n, attrs) = parse_header(header, line_no)?;
                expected_n = n;
                attributes = attrs;
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected 3 comma-separated values, found {}", fields.len()),
            });
        }
        let mut c = [0.0; 3];
        for (k, f) in fields.iter().enumerate() {
            c[k] = f.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("`{f}` is not a number"),
            })?;
            if !c[k].is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("`{f}` is not finite"),
                });
            }
        }
        entries.push(RgbColor::from_array(c));
    }
    if let Some(n) = expected_n {
        if entries.len() != n {
            return Err(Error::Parse {
                line: last_line + 1,
                msg: format!("header declares {n} entries, found {}", entries.len()),
            });
        }
    }
    if entries.is_empty() {
        return Err(Error::Parse {
            line: last_line.max(1),
            msg: "no colour entries".into(),
        });
    }
    Ok(ColorMap::new(name, entries, attributes))
}

fn parse_header(header: &str, line: usize) -> Result<(Option<usize>, Vec<Attribute>)> {
    let mut parts = header.split(',').map(str::trim);
    if parts.next() != Some(FORMAT_TAG) {
        return Err(Error::Parse {
            line,
            msg: format!("expected `# {FORMAT_TAG}` header"),
        });
    }
    let mut n = None;
    let mut attrs = Vec::new();
    for p in parts {
        if let Some(v) = p.strip_prefix("n=") {
            n = Some(v.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad entry count `{v}`"),
            })?);
        } else if let Some(v) = p.strip_prefix("attributes=") {
            for a in v.split('|').filter(|a| !a.is_empty()) {
                attrs.push(a.parse().map_err(|_| Error::Parse {
                    line,
                    msg: format!("unknown attribute `{a}`"),
                })?);
            }
        } else if !p.is_empty() {
            return Err(Error::Parse {
                line,
                msg: format!("unexpected header field `{p}`"),
            });
        }
    }
    Ok((n, attrs))
}

#[derive(Debug, Serialize, Deserialize)]
struct MapFile {
    format: String,
    name: String,
    n: usize,
    attributes: Vec<Attribute>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
    entries: Vec<[f64; 3]>,
}

pub fn map_to_json(map: &ColorMap) -> Result<String> {
    let file = MapFile {
        format: FORMAT_TAG.into(),
        name: map.name.clone(),
        n: map.len(),
        attributes: map.attributes.iter().copied().collect(),
        provenance: map.provenance.clone(),
        entries: map
            .entries
            .iter()
            .map(|c| [round6(c.r), round6(c.g), round6(c.b)])
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&file)?;
    s.push('\n');
    Ok(s)
}

pub fn map_from_json(text: &str) -> Result<ColorMap> {
    let file: MapFile = serde_json::from_str(text)?;
    if file.format != FORMAT_TAG {
        return Err(Error::InvalidArgument(format!(
            "unsupported map format `{}`",
            file.format
        )));
    }
    if file.entries.len() != file.n {
        return Err(Error::InvalidArgument(format!(
            "map declares {} entries, found {}",
            file.n,
            file.entries.len()
        )));
    }
    if file.entries.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("map entry"));
    }
    Ok(ColorMap {
        name: file.name,
        entries: file.entries.into_iter().map(RgbColor::from_array).collect(),
        attributes: file.attributes.into_iter().collect(),
        provenance: file.provenance,
    })
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Reads a map, choosing JSON or CSV by extension.
pub fn read_map(path: &Path) -> Result<ColorMap> {
    let text = fs::read_to_string(path)?;
    if is_json(path) {
        map_from_json(&text)
    } else {
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("map");
        map_from_csv(&text, name)
    }
}

pub fn write_map(path: &Path, map: &ColorMap) -> Result<()> {
    let text = if is_json(path) {
        map_to_json(map)?
    } else {
        map_to_csv(map)
    };
    fs::write(path, text)?;
    Ok(())
}

pub fn path_from_json(text: &str) -> Result<MapPath> {
    let def: PathDef = serde_json::from_str(text)?;
    def.to_path()
}

pub fn path_to_json(path: &MapPath) -> Result<String> {
    Ok(serde_json::to_string_pretty(&PathDef::from(path))?)
}

/// `width height` then whitespace-separated row-major values; `nan` marks
/// masked cells.
pub fn grid_to_ascii(grid: &ScalarGrid) -> String {
    let mut s = format!("{} {}\n", grid.width(), grid.height());
    for y in 0..grid.height() {
        let row: Vec<String> = grid
            .row(y)
            .iter()
            .map(|v| if v.is_nan() { "nan".to_string() } else { format!("{v}") })
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

pub fn grid_from_ascii(text: &str) -> Result<ScalarGrid> {
    let mut tokens = text
        .lines()
        .enumerate()
        .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)));
    let mut dim = |what: &str| -> Result<usize> {
        let (line, t) = tokens.next().ok_or(Error::Parse {
            line: 1,
            msg: format!("missing {what}"),
        })?;
        t.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad {what} `{t}`"),
        })
    };
    let w = dim("width")?;
    let h = dim("height")?;
    let mut values = Vec::with_capacity(w * h);
    let mut last = 1;
    for (line, t) in tokens {
        last = line;
        let v = if t.eq_ignore_ascii_case("nan") {
            f64::NAN
        } else {
            t.parse::<f64>().map_err(|_| Error::Parse {
                line,
                msg: format!("`{t}` is not a number"),
            })?
        };
        if v.is_infinite() {
            return Err(Error::Parse {
                line,
                msg: format!("`{t}` is not finite"),
            });
        }
        values.push(v);
    }
    if values.len() != w * h {
        return Err(Error::Parse {
            line: last,
            msg: format!("{w}x{h} grid needs {} values, found {}", w * h, values.len()),
        });
    }
    ScalarGrid::new(w, h, values)
}

pub fn read_grid(path: &Path) -> Result<ScalarGrid> {
    grid_from_ascii(&fs::read_to_string(path)?)
}

pub fn write_grid(path: &Path, grid: &ScalarGrid) -> Result<()> {
    fs::write(path, grid_to_ascii(grid))?;
    Ok(())
}

/// 8-bit level of a channel: `floor(255 c + 0.5)`, clamped.
pub fn quantize(c: f64) -> u8 {
    (255.0 * c + 0.5).floor().clamp(0.0, 255.0) as u8
}

fn rgb_bytes(img: &RgbImage) -> Vec<u8> {
    img.pixels()
        .iter()
        .flat_map(|c| [quantize(c.r), quantize(c.g), quantize(c.b)])
        .collect()
}

pub fn encode_ppm(img: &RgbImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(rgb_bytes(img));
    out
}

pub fn encode_png(img: &RgbImage) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, img.width() as u32, img.height() as u32);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        let mut writer = enc.write_header()?;
        writer.write_image_data(&rgb_bytes(img))?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Ppm,
    Png,
}

impl ImageFormat {
    /// PNG for a `.png` extension, otherwise PPM.
    pub fn for_path(path: &Path) -> Self {
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("png")) {
            ImageFormat::Png
        } else {
            ImageFormat::Ppm
        }
    }

    pub fn encode(self, img: &RgbImage) -> Result<Vec<u8>> {
        match self {
            ImageFormat::Ppm => Ok(encode_ppm(img)),
            ImageFormat::Png => encode_png(img),
        }
    }
}

pub fn write_image(path: &Path, img: &RgbImage) -> Result<()> {
    fs::write(path, ImageFormat::for_path(path).encode(img)?)?;
    Ok(())
}

/// Grey image of a grid, scaling `[lo, hi]` to black..white; masked cells
/// become `background`.
pub fn grid_to_grey(grid: &ScalarGrid, lo: f64, hi: f64, background: RgbColor) -> Result<RgbImage> {
    let span = if hi > lo { hi - lo } else { 1.0 };
    let pixels = grid
        .values()
        .iter()
        .map(|&v| {
            if v.is_nan() {
                background
            } else {
                RgbColor::grey(((v - lo) / span).clamp(0.0, 1.0))
            }
        })
        .collect();
    RgbImage::new(grid.width(), grid.height(), pixels)
}
