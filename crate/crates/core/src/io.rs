//! Polygon JSON, CSV rows and SVG figures.

use serde::Serialize;
use std::fmt::Write as _;
use std::io::{Read, Write};

use crate::ellipse::Ellipse;
use crate::error::Result;
use crate::geom::{Point2, Polygon};

/// Reads `{"vertices": [[x, y], ...]}` in either orientation.
pub fn read_polygon<R: Read>(reader: R) -> Result<Polygon> {
    Ok(serde_json::from_reader(reader)?)
}

pub fn polygon_from_json(s: &str) -> Result<Polygon> {
    Ok(serde_json::from_str(s)?)
}

pub fn write_json<W: Write, T: Serialize>(mut writer: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, value)?;
    writeln!(writer)?;
    Ok(())
}

/// Header row from the field names, then one row per record.
pub fn write_csv<W: Write, T: Serialize>(writer: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// A minimal SVG canvas in math orientation (y up).
pub struct Figure {
    items: Vec<String>,
    extent: f64,
}

impl Default for Figure {
    fn default() -> Self {
        Figure {
            items: Vec::new(),
            extent: 1.0,
        }
    }
}

impl Figure {
    pub fn new() -> Self {
        Self::default()
    }

    fn grow(&mut self, pts: &[Point2]) {
        for p in pts {
            self.extent = self.extent.max(p.x.abs()).max(p.y.abs());
        }
    }

    fn path(pts: &[Point2], closed: bool) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.6},{:.6} ", if i == 0 { "M" } else { "L" }, p.x, -p.y);
        }
        if closed {
            d.push('Z');
        }
        d
    }

    pub fn polygon(&mut self, k: &Polygon, stroke: &str) -> &mut Self {
        self.polyline(k.vertices(), true, stroke)
    }

    pub fn polyline(&mut self, pts: &[Point2], closed: bool, stroke: &str) -> &mut Self {
        self.grow(pts);
        self.items.push(format!(
            r#"<path d="{}" fill="none" stroke="{stroke}" stroke-width="0.01"/>"#,
            Self::path(pts, closed)
        ));
        self
    }

    pub fn ellipse(&mut self, e: &Ellipse, stroke: &str) -> &mut Self {
        match e.to_polygon(256) {
            Ok(p) => self.polygon(&p, stroke),
            Err(_) => self,
        }
    }

    pub fn unit_circle(&mut self) -> &mut Self {
        self.items.push(
            r##"<circle cx="0" cy="0" r="1" fill="none" stroke="#999" stroke-width="0.005"/>"##
                .to_string(),
        );
        self
    }

    pub fn render(&self) -> String {
        let e = self.extent * 1.1;
        let mut s = format!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.4} {:.4} {:.4} {:.4}">"#,
            -e,
            -e,
            2.0 * e,
            2.0 * e
        );
        s.push('\n');
        for it in &self.items {
            s.push_str(it);
            s.push('\n');
        }
        s.push_str("</svg>\n");
        s
    }
}
