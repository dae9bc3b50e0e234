//! Deterministic text and raster output: numbers with 12 significant
//! digits (C `%.12g` layout) and binary PGM images.

use std::io::{self, Write};

/// Formats `x` like C's `%.12g`.
pub fn fmt_g12(x: f64) -> String {
    fmt_g(x, 12)
}

pub fn fmt_g(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        // negative zero prints as 0
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// An 8-bit grayscale raster, row 0 at the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        GrayImage { width, height, pixels: vec![value; width * height] }
    }

    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        if x < self.width && y < self.height {
            self.pixels[y * self.width + x] = value;
        }
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// Binary PGM (`P5`, maxval 255).
    pub fn write_pgm<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.width, self.height)?;
        out.write_all(&self.pixels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g12_layout() {
        assert_eq!(fmt_g12(0.0), "0");
        assert_eq!(fmt_g12(-0.0), "0");
        assert_eq!(fmt_g12(4.5), "4.5");
        assert_eq!(fmt_g12(2.0), "2");
        assert_eq!(fmt_g12(-0.125), "-0.125");
        assert_eq!(fmt_g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_g12(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_g12(4.0 + 4.0 / 9999.0), "4.00040004");
        assert_eq!(fmt_g12(1e-7), "1e-07");
        assert_eq!(fmt_g12(1.5e-5), "1.5e-05");
        assert_eq!(fmt_g12(0.0001), "0.0001");
        assert_eq!(fmt_g12(123456789012.0), "123456789012");
        assert_eq!(fmt_g12(1234567890123.0), "1.23456789012e+12");
        assert_eq!(fmt_g12(f64::INFINITY), "inf");
        // rounding that carries into the next decade
        assert_eq!(fmt_g12(9.9999999999996), "10");
    }

    #[test]
    fn pgm_header() {
        let mut img = GrayImage::filled(3, 2, 255);
        img.set(1, 1, 0);
        let mut buf = Vec::new();
        img.write_pgm(&mut buf).unwrap();
        assert_eq!(&buf[..11], b"P5\n3 2\n255\n");
        assert_eq!(&buf[11..], &[255, 255, 255, 255, 0, 255]);
    }
}
