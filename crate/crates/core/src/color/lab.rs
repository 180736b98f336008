//! sRGB ↔ CIE L\*a\*b\* (D65) and the CIE76 color difference.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Linear sRGB → XYZ (IEC 61966-2-1).
const RGB_TO_XYZ: [[f64; 3]; 3] =
    [[0.4124564, 0.3575761, 0.1804375], [0.2126729, 0.7151522, 0.0721750], [0.0193339, 0.1191920, 0.9503041]];

/// XYZ → linear sRGB, the inverse of [`RGB_TO_XYZ`].
const XYZ_TO_RGB: [[f64; 3]; 3] =
    [[3.2404542, -1.5371385, -0.4985314], [-0.9692660, 1.8760108, 0.0415560], [0.0556434, -0.2040259, 1.0572252]];

/// D65 white as the image of linear (1, 1, 1), so sRGB white lands exactly on L\*=100, a\*=b\*=0.
fn white() -> [f64; 3] {
    RGB_TO_XYZ.map(|row| row.iter().sum())
}

const EPSILON: f64 = 216.0 / 24389.0; // (6/29)^3
const KAPPA: f64 = 24389.0 / 27.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lab {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl Lab {
    pub fn new(l: f64, a: f64, b: f64) -> Self {
        Self { l, a, b }
    }

    pub fn delta_e(&self, other: &Lab) -> f64 {
        delta_e(self, other)
    }
}

fn to_linear(c: f64) -> f64 {
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn from_linear(c: f64) -> f64 {
    if c <= 0.0031308 {
        c * 12.92
    } else {
        1.055 * c.powf(1.0 / 2.4) - 0.055
    }
}

fn f(t: f64) -> f64 {
    if t > EPSILON {
        t.cbrt()
    } else {
        (KAPPA * t + 16.0) / 116.0
    }
}

fn f_inv(t: f64) -> f64 {
    let t3 = t * t * t;
    if t3 > EPSILON {
        t3
    } else {
        (116.0 * t - 16.0) / KAPPA
    }
}

pub fn srgb_to_lab(rgb: [u8; 3]) -> Lab {
    srgb_f64_to_lab(rgb.map(f64::from))
}

/// Channels given as reals in `[0, 255]`.
pub fn srgb_f64_to_lab(rgb: [f64; 3]) -> Lab {
    let lin = rgb.map(|c| to_linear(c / 255.0));
    let xyz = RGB_TO_XYZ.map(|row| row[0] * lin[0] + row[1] * lin[1] + row[2] * lin[2]);
    let w = white();
    let [fx, fy, fz] = [f(xyz[0] / w[0]), f(xyz[1] / w[1]), f(xyz[2] / w[2])];
    Lab { l: 116.0 * fy - 16.0, a: 500.0 * (fx - fy), b: 200.0 * (fy - fz) }
}

/// Checked conversion for wide integer input.
pub fn srgb_to_lab_checked(rgb: [i64; 3]) -> Result<Lab> {
    let mut out = [0u8; 3];
    for (o, &c) in out.iter_mut().zip(&rgb) {
        *o = u8::try_from(c).map_err(|_| Error::input(format!("color channel {c} outside [0,255]")))?;
    }
    Ok(srgb_to_lab(out))
}

/// Inverse conversion; channels in `[0, 255]` for in-gamut colors, unclamped.
pub fn lab_to_srgb_f64(lab: Lab) -> [f64; 3] {
    let fy = (lab.l + 16.0) / 116.0;
    let fx = fy + lab.a / 500.0;
    let fz = fy - lab.b / 200.0;
    let w = white();
    let y = if lab.l > KAPPA * EPSILON { fy * fy * fy } else { lab.l / KAPPA };
    let xyz = [f_inv(fx) * w[0], y * w[1], f_inv(fz) * w[2]];
    let lin = XYZ_TO_RGB.map(|row| row[0] * xyz[0] + row[1] * xyz[1] + row[2] * xyz[2]);
    lin.map(|c| from_linear(c) * 255.0)
}

/// Inverse conversion clamped and rounded to 8-bit channels.
pub fn lab_to_srgb(lab: Lab) -> [u8; 3] {
    lab_to_srgb_f64(lab).map(|c| c.round().clamp(0.0, 255.0) as u8)
}

/// CIE76: Euclidean distance in L\*a\*b\*.
pub fn delta_e(p: &Lab, q: &Lab) -> f64 {
    ((p.l - q.l).powi(2) + (p.a - q.a).powi(2) + (p.b - q.b).powi(2)).sqrt()
}
