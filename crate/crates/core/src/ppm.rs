//! Binary P6 portable-pixmap output and rasterizers for spanning trees and
//! domino tilings.

use std::io::Write;

use crate::error::Result;
use crate::kernels::aztec::{AztecDiamond, DominoOrientation, TilingReport};
use crate::kernels::graphs::UndirectedGraph;

pub type Rgb = [u8; 3];

pub const WHITE: Rgb = [255, 255, 255];
pub const BLACK: Rgb = [0, 0, 0];
/// Orientation colors for domino tilings: left/right/up/down.
pub const BLUE: Rgb = [40, 80, 230];
pub const RED: Rgb = [220, 50, 40];
pub const YELLOW: Rgb = [240, 210, 40];
pub const GREEN: Rgb = [40, 170, 70];

#[derive(Clone, Debug)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pixels: Vec<Rgb>,
}

impl Image {
    pub fn new(width: usize, height: usize, background: Rgb) -> Self {
        Image {
            width,
            height,
            pixels: vec![background; width * height],
        }
    }

    pub fn set(&mut self, x: usize, y: usize, color: Rgb) {
        if x < self.width && y < self.height {
            self.pixels[y * self.width + x] = color;
        }
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb {
        self.pixels[y * self.width + x]
    }

    pub fn fill_rect(&mut self, x0: usize, y0: usize, w: usize, h: usize, color: Rgb) {
        for y in y0..(y0 + h).min(self.height) {
            for x in x0..(x0 + w).min(self.width) {
                self.pixels[y * self.width + x] = color;
            }
        }
    }

    /// Bresenham segment.
    pub fn draw_segment(&mut self, a: (i64, i64), b: (i64, i64), color: Rgb) {
        let (mut x0, mut y0) = a;
        let (x1, y1) = b;
        let dx = (x1 - x0).abs();
        let dy = -(y1 - y0).abs();
        let sx = if x0 < x1 { 1 } else { -1 };
        let sy = if y0 < y1 { 1 } else { -1 };
        let mut err = dx + dy;
        loop {
            if x0 >= 0 && y0 >= 0 {
                self.set(x0 as usize, y0 as usize, color);
            }
            if x0 == x1 && y0 == y1 {
                break;
            }
            let e2 = 2 * err;
            if e2 >= dy {
                err += dy;
                x0 += sx;
            }
            if e2 <= dx {
                err += dx;
                y0 += sy;
            }
        }
    }

    /// Binary P6 with max value 255.
    pub fn write_p6(&self, w: &mut impl Write) -> Result<()> {
        write!(w, "P6\n{} {}\n255\n", self.width, self.height)?;
        let mut bytes = Vec::with_capacity(self.pixels.len() * 3);
        for p in &self.pixels {
            bytes.extend_from_slice(p);
        }
        w.write_all(&bytes)?;
        Ok(())
    }
}

/// Renders the chosen edges of a graph over its vertex embedding;
/// `cell` pixels of spacing per unit coordinate plus a small margin.
pub fn render_spanning_tree(graph: &UndirectedGraph, sample: &[usize], cell: usize) -> Image {
    let cell = cell.max(1);
    let margin = cell as i64;
    let (mut max_x, mut max_y) = (1.0f64, 1.0f64);
    for &(x, y) in &graph.positions {
        max_x = max_x.max(x);
        max_y = max_y.max(y);
    }
    let width = (max_x as usize + 1) * cell + 2 * margin as usize;
    let height = (max_y as usize + 1) * cell + 2 * margin as usize;
    let mut img = Image::new(width, height, WHITE);
    let to_px = |p: (f64, f64)| {
        (
            margin + (p.0 * cell as f64).round() as i64,
            margin + (p.1 * cell as f64).round() as i64,
        )
    };
    for &e in sample {
        let (u, v) = graph.edges[e];
        img.draw_segment(to_px(graph.positions[u]), to_px(graph.positions[v]), BLACK);
    }
    img
}

fn orientation_color(o: DominoOrientation) -> Rgb {
    match o {
        DominoOrientation::Left => BLUE,
        DominoOrientation::Right => RED,
        DominoOrientation::Up => YELLOW,
        DominoOrientation::Down => GREEN,
    }
}

/// Renders a decoded tiling: each domino is a 2x1 block of unit squares,
/// colored by orientation class, with `cell` pixels per unit square.
pub fn render_tiling(diamond: &AztecDiamond, report: &TilingReport, cell: usize) -> Image {
    let cell = cell.max(1);
    let d = diamond.order as i64;
    let side = (2 * d) as usize * cell;
    let mut img = Image::new(side, side, WHITE);
    for &(wp, bp, orientation) in &report.dominoes {
        let color = orientation_color(orientation);
        for p in [wp, bp] {
            // shift [-d, d) to [0, 2d) and flip y so +y points up
            let x = (p.0 + d) as usize * cell;
            let y = (d - 1 - p.1) as usize * cell;
            img.fill_rect(x, y, cell, cell, color);
        }
    }
    img
}
