//! Flat binary morphology on bit-packed flag grids.
//!
//! Images are `width x height` binary grids: columns index time samples,
//! rows index amplitude levels. The structuring element is a horizontal
//! line (along the time axis), so erosion and dilation reduce to per-row
//! sliding AND/OR windows, implemented here as word-level shifts.
//!
//! Border convention: pixels outside the grid read as 1 for erosion and 0
//! for dilation. This preserves erosion/dilation complement-duality and the
//! usual ordering laws, and keeps the filter from carving the grid edges.

use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// A horizontal line structuring element with centered origin.
///
/// Lengths must be odd so a center pixel exists; even lengths are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructuringElement {
    length: usize,
}

impl StructuringElement {
    /// A line of `length` pixels along the time axis.
    pub fn line(length: usize) -> Result<Self> {
        if length == 0 {
            return Err(Error::Parameter(
                "structuring element length must be >= 1".into(),
            ));
        }
        if length.is_multiple_of(2) {
            return Err(Error::Parameter(format!(
                "structuring element length must be odd for a centered origin, got {length}"
            )));
        }
        Ok(Self { length })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Index of the origin pixel within the line.
    pub fn origin(&self) -> usize {
        self.length / 2
    }
}

/// A binary image stored as bit-packed rows (64 columns per word).
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BinaryImage {
    /// All-zeros image. Width and height must both be at least 1.
    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Parameter(format!(
                "image dimensions must be >= 1, got {width}x{height}"
            )));
        }
        let words_per_row = width.div_ceil(WORD_BITS);
        Ok(Self {
            width,
            height,
            words_per_row,
            bits: vec![0; words_per_row * height],
        })
    }

    /// All-ones image.
    pub fn filled(width: usize, height: usize) -> Result<Self> {
        let mut img = Self::zeros(width, height)?;
        let mask = img.last_word_mask();
        for row in 0..height {
            let words = img.row_mut(row);
            words.fill(!0u64);
            *words.last_mut().unwrap() = mask;
        }
        Ok(img)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Mask selecting the valid bits of the last word in each row.
    fn last_word_mask(&self) -> u64 {
        let rem = self.width % WORD_BITS;
        if rem == 0 {
            !0u64
        } else {
            (1u64 << rem) - 1
        }
    }

    fn row(&self, row: usize) -> &[u64] {
        &self.bits[row * self.words_per_row..(row + 1) * self.words_per_row]
    }

    fn row_mut(&mut self, row: usize) -> &mut [u64] {
        &mut self.bits[row * self.words_per_row..(row + 1) * self.words_per_row]
    }

    pub fn get(&self, col: usize, row: usize) -> bool {
        assert!(
            col < self.width && row < self.height,
            "pixel ({col},{row}) out of range"
        );
        self.row(row)[col / WORD_BITS] >> (col % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, col: usize, row: usize, value: bool) {
        assert!(
            col < self.width && row < self.height,
            "pixel ({col},{row}) out of range"
        );
        let w = col / WORD_BITS;
        let bit = 1u64 << (col % WORD_BITS);
        if value {
            self.row_mut(row)[w] |= bit;
        } else {
            self.row_mut(row)[w] &= !bit;
        }
    }

    /// Set the bottom `count` cells of a column to 1 and the rest to 0.
    pub fn fill_column(&mut self, col: usize, count: usize) {
        assert!(col < self.width, "column {col} out of range");
        assert!(
            count <= self.height,
            "fill count {count} exceeds height {}",
            self.height
        );
        let w = col / WORD_BITS;
        let bit = 1u64 << (col % WORD_BITS);
        let wpr = self.words_per_row;
        for row in 0..count {
            self.bits[row * wpr + w] |= bit;
        }
        for row in count..self.height {
            self.bits[row * wpr + w] &= !bit;
        }
    }

    /// Number of ones in each column.
    pub fn column_sums(&self) -> Vec<u32> {
        let mut sums = vec![0u32; self.width];
        let mask = self.last_word_mask();
        let mut full_rows = 0u32;
        for row in 0..self.height {
            let words = self.row(row);
            if words.iter().all(|&w| w == 0) {
                continue;
            }
            if row_is_full(words, mask) {
                full_rows += 1;
                continue;
            }
            for (wi, &word) in words.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let col = wi * WORD_BITS + bits.trailing_zeros() as usize;
                    sums[col] += 1;
                    bits &= bits - 1;
                }
            }
        }
        if full_rows > 0 {
            for s in &mut sums {
                *s += full_rows;
            }
        }
        sums
    }

    pub fn count_ones(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Pixel-wise complement.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        let mask = self.last_word_mask();
        for row in 0..self.height {
            let words = out.row_mut(row);
            for w in words.iter_mut() {
                *w = !*w;
            }
            *words.last_mut().unwrap() &= mask;
        }
        out
    }

    /// Pixel-wise `self <= other` (set inclusion). Dimensions must match.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        assert_eq!(
            (self.width, self.height),
            (other.width, other.height),
            "dimension mismatch"
        );
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Render as a plain-text portable bitmap (P1), top row of the plot first.
    pub fn to_pbm(&self) -> String {
        let mut out = String::with_capacity(self.width * self.height * 2 + 32);
        out.push_str("P1\n");
        out.push_str(&format!("{} {}\n", self.width, self.height));
        for row in (0..self.height).rev() {
            for col in 0..self.width {
                if col > 0 {
                    out.push(' ');
                }
                out.push(if self.get(col, row) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for BinaryImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryImage {}x{}", self.width, self.height)?;
        for row in (0..self.height).rev() {
            for col in 0..self.width {
                write!(f, "{}", if self.get(col, row) { '1' } else { '0' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn row_is_full(words: &[u64], last_mask: u64) -> bool {
    let (last, rest) = words.split_last().unwrap();
    rest.iter().all(|&w| w == !0u64) && *last == last_mask
}

/// Shift a packed row so that `dst(i) = src(i + offset)`, with `fill`
/// supplying bits outside the word array.
fn shift_row(src: &[u64], dst: &mut [u64], offset: isize, fill: bool) {
    let fill_word = if fill { !0u64 } else { 0u64 };
    if offset >= 0 {
        let q = offset as usize / WORD_BITS;
        let r = offset as usize % WORD_BITS;
        for (w, slot) in dst.iter_mut().enumerate() {
            let a = src.get(w + q).copied().unwrap_or(fill_word);
            *slot = if r == 0 {
                a
            } else {
                let b = src.get(w + q + 1).copied().unwrap_or(fill_word);
                (a >> r) | (b << (WORD_BITS - r))
            };
        }
    } else {
        let m = (-offset) as usize;
        let q = m / WORD_BITS;
        let r = m % WORD_BITS;
        for (w, slot) in dst.iter_mut().enumerate() {
            let a = if w >= q { src[w - q] } else { fill_word };
            *slot = if r == 0 {
                a
            } else {
                let b = if w > q { src[w - q - 1] } else { fill_word };
                (a << r) | (b >> (WORD_BITS - r))
            };
        }
    }
}

/// Shared row-sweep for erosion (`fold_and = true`) and dilation.
///
/// All-zero and all-one rows are fixed points under both border conventions
/// and are copied straight through.
fn line_filter(img: &BinaryImage, se: &StructuringElement, fold_and: bool) -> BinaryImage {
    let radius = se.origin() as isize;
    let wpr = img.words_per_row;
    let mask = img.last_word_mask();
    let mut out = BinaryImage::zeros(img.width, img.height).unwrap();
    let mut padded = vec![0u64; wpr];
    let mut shifted = vec![0u64; wpr];

    for row_idx in 0..img.height {
        let src = img.row(row_idx);
        if src.iter().all(|&w| w == 0) {
            continue;
        }
        if row_is_full(src, mask) {
            let words = out.row_mut(row_idx);
            words.fill(!0u64);
            *words.last_mut().unwrap() = mask;
            continue;
        }
        padded.copy_from_slice(src);
        if fold_and {
            // Padding bits beyond `width` must read as outside pixels.
            *padded.last_mut().unwrap() |= !mask;
        }
        let acc = out.row_mut(row_idx);
        if fold_and {
            acc.fill(!0u64);
        }
        for offset in -radius..=radius {
            shift_row(&padded, &mut shifted, offset, fold_and);
            if fold_and {
                for (a, s) in acc.iter_mut().zip(&shifted) {
                    *a &= *s;
                }
            } else {
                for (a, s) in acc.iter_mut().zip(&shifted) {
                    *a |= *s;
                }
            }
        }
        *acc.last_mut().unwrap() &= mask;
    }
    out
}

/// Erosion: output pixel is 1 iff every pixel covered by the line is 1
/// (outside pixels read as 1).
pub fn erode(img: &BinaryImage, se: &StructuringElement) -> BinaryImage {
    line_filter(img, se, true)
}

/// Dilation: output pixel is 1 iff any pixel covered by the reflected line
/// is 1 (outside pixels read as 0).
pub fn dilate(img: &BinaryImage, se: &StructuringElement) -> BinaryImage {
    line_filter(img, se, false)
}

/// Opening: erosion followed by dilation. Removes foreground runs narrower
/// than the line.
pub fn open(img: &BinaryImage, se: &StructuringElement) -> BinaryImage {
    dilate(&erode(img, se), se)
}

/// Closing: dilation followed by erosion. Fills background runs narrower
/// than the line.
pub fn close(img: &BinaryImage, se: &StructuringElement) -> BinaryImage {
    erode(&dilate(img, se), se)
}

/// The open-close filter: closing applied to the opened image.
pub fn open_close(img: &BinaryImage, se: &StructuringElement) -> BinaryImage {
    close(&open(img, se), se)
}
