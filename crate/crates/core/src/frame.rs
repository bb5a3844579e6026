//! Luma frame ingestion and storage.
//!
//! Three container formats are understood: binary PGM (`P5`, maxval 255),
//! YUV4MPEG2 and headerless planar YUV. Only the luma plane is kept; chroma
//! planes are skipped over to find frame boundaries.

use std::io::{Read, Write};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Bits per sample. Every frame in this crate is 8-bit.
pub const BIT_DEPTH: u32 = 8;

/// Largest representable sample value.
pub const MAX_SAMPLE: u8 = u8::MAX;

/// An 8-bit grayscale raster stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LumaFrame {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl LumaFrame {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::DegenerateGeometry { width, height });
        }
        if samples.len() != width * height {
            return Err(Error::InvalidConfig(format!(
                "{} samples supplied for a {width}x{height} frame",
                samples.len()
            )));
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    /// A frame filled with one value.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Builds a frame by evaluating `f(x, y)` at every position.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        Self::new(width, height, samples)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.samples[y * self.width + x]
    }

    /// Whole-frame view.
    pub fn view(&self) -> GridView<'_> {
        GridView {
            data: &self.samples,
            stride: self.width,
            width: self.width,
            height: self.height,
        }
    }

    /// Borrowed square sub-view; fails if the block leaves the frame.
    pub fn block(&self, view: BlockView) -> Result<GridView<'_>> {
        view.check_inside(self.width, self.height)?;
        Ok(self.view_unchecked(view.x, view.y, view.size, view.size))
    }

    /// Borrowed rectangular sub-view. Caller guarantees bounds.
    #[inline]
    pub(crate) fn view_unchecked(
        &self,
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    ) -> GridView<'_> {
        debug_assert!(x + width <= self.width && y + height <= self.height);
        let start = y * self.width + x;
        let end = start + (height - 1) * self.width + width;
        GridView {
            data: &self.samples[start..end],
            stride: self.width,
            width,
            height,
        }
    }
}

/// Position and side of a square block inside a frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockView {
    pub x: usize,
    pub y: usize,
    pub size: usize,
}

impl BlockView {
    pub fn new(x: usize, y: usize, size: usize) -> Self {
        Self { x, y, size }
    }

    pub fn check_inside(&self, width: usize, height: usize) -> Result<()> {
        if self.size == 0 || self.x + self.size > width || self.y + self.size > height {
            return Err(Error::BlockOutOfBounds {
                x: self.x,
                y: self.y,
                size: self.size,
                width,
                height,
            });
        }
        Ok(())
    }
}

/// Borrowed, possibly strided, rectangle of samples.
#[derive(Clone, Copy, Debug)]
pub struct GridView<'a> {
    data: &'a [u8],
    stride: usize,
    width: usize,
    height: usize,
}

impl<'a> GridView<'a> {
    /// View over a packed row-major buffer.
    pub fn from_slice(data: &'a [u8], width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::DegenerateGeometry { width, height });
        }
        if data.len() != width * height {
            return Err(Error::InvalidConfig(format!(
                "{} samples supplied for a {width}x{height} grid",
                data.len()
            )));
        }
        Ok(Self {
            data,
            stride: width,
            width,
            height,
        })
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.width * self.height
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn row(&self, y: usize) -> &'a [u8] {
        let start = y * self.stride;
        &self.data[start..start + self.width]
    }

    pub fn rows(&self) -> impl Iterator<Item = &'a [u8]> + '_ {
        (0..self.height).map(move |y| self.row(y))
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.stride + x]
    }

    /// Sub-rectangle of this view. Caller guarantees bounds.
    #[inline]
    pub(crate) fn sub(&self, x: usize, y: usize, width: usize, height: usize) -> GridView<'a> {
        debug_assert!(x + width <= self.width && y + height <= self.height);
        let start = y * self.stride + x;
        let end = start + (height - 1) * self.stride + width;
        GridView {
            data: &self.data[start..end],
            stride: self.stride,
            width,
            height,
        }
    }

    pub fn same_shape(&self, other: &GridView<'_>) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::ShapeMismatch {
                a_width: self.width,
                a_height: self.height,
                b_width: other.width,
                b_height: other.height,
            });
        }
        Ok(())
    }

    pub fn to_frame(&self) -> LumaFrame {
        let mut samples = Vec::with_capacity(self.len());
        for row in self.rows() {
            samples.extend_from_slice(row);
        }
        LumaFrame {
            width: self.width,
            height: self.height,
            samples,
        }
    }
}

/// Chroma layout of planar YUV input.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ChromaSampling {
    #[default]
    Cs420,
    Cs422,
    Cs444,
    Mono,
}

impl ChromaSampling {
    /// Bytes occupied by both chroma planes of one frame.
    pub fn chroma_bytes(self, width: usize, height: usize) -> usize {
        let (cw, ch) = match self {
            Self::Cs420 => (width.div_ceil(2), height.div_ceil(2)),
            Self::Cs422 => (width.div_ceil(2), height),
            Self::Cs444 => (width, height),
            Self::Mono => (0, 0),
        };
        2 * cw * ch
    }
}

impl FromStr for ChromaSampling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "420" | "420jpeg" | "420paldv" | "420mpeg2" | "420p" => Ok(Self::Cs420),
            "422" | "422p" => Ok(Self::Cs422),
            "444" | "444p" => Ok(Self::Cs444),
            "mono" | "400" => Ok(Self::Mono),
            other => Err(Error::InvalidConfig(format!(
                "unsupported chroma sampling '{other}'"
            ))),
        }
    }
}

/// Container format of a frame source.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameFormat {
    Y4m,
    Pgm,
    RawYuv {
        width: usize,
        height: usize,
        chroma: ChromaSampling,
    },
}

/// Reads the `frame_index`-th frame of `source` and returns its luma plane.
pub fn load_frame<R: Read>(
    mut source: R,
    format: FrameFormat,
    frame_index: usize,
) -> Result<LumaFrame> {
    let mut data = Vec::new();
    source.read_to_end(&mut data)?;
    load_frame_from_bytes(&data, format, frame_index)
}

/// Same as [`load_frame`] over an in-memory buffer.
pub fn load_frame_from_bytes(
    data: &[u8],
    format: FrameFormat,
    frame_index: usize,
) -> Result<LumaFrame> {
    match format {
        FrameFormat::RawYuv {
            width,
            height,
            chroma,
        } => load_raw(data, width, height, chroma, frame_index),
        FrameFormat::Y4m => load_y4m(data, frame_index),
        FrameFormat::Pgm => load_pgm(data, frame_index),
    }
}

fn load_raw(
    data: &[u8],
    width: usize,
    height: usize,
    chroma: ChromaSampling,
    index: usize,
) -> Result<LumaFrame> {
    if width == 0 || height == 0 {
        return Err(Error::DegenerateGeometry { width, height });
    }
    let luma = width * height;
    let frame_bytes = luma + chroma.chroma_bytes(width, height);
    let start = index * frame_bytes;
    let complete = data.len() / frame_bytes;
    if start >= data.len() {
        return Err(Error::FrameIndexOutOfRange {
            index,
            available: complete,
        });
    }
    if start + frame_bytes > data.len() {
        return Err(Error::Truncated {
            needed: start + frame_bytes,
            available: data.len(),
        });
    }
    LumaFrame::new(width, height, data[start..start + luma].to_vec())
}

fn take_line(data: &[u8], pos: usize) -> Option<(&[u8], usize)> {
    let rest = &data[pos..];
    let nl = rest.iter().position(|&b| b == b'\n')?;
    Some((&rest[..nl], pos + nl + 1))
}

/// Parsed `YUV4MPEG2` stream header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Y4mHeader {
    pub width: usize,
    pub height: usize,
    pub chroma: ChromaSampling,
    /// Raw header line, without the trailing newline.
    pub raw: String,
}

pub fn parse_y4m_header(line: &[u8]) -> Result<Y4mHeader> {
    let text = std::str::from_utf8(line)
        .map_err(|_| Error::MalformedHeader("non-ASCII Y4M header".into()))?;
    let mut tokens = text.split(' ');
    if tokens.next() != Some("YUV4MPEG2") {
        return Err(Error::MalformedHeader("missing YUV4MPEG2 signature".into()));
    }
    let mut width = None;
    let mut height = None;
    let mut chroma = ChromaSampling::Cs420;
    for tok in tokens.filter(|t| !t.is_empty()) {
        let (tag, value) = tok.split_at(1);
        match tag {
            "W" => width = Some(parse_dim(value, "W")?),
            "H" => height = Some(parse_dim(value, "H")?),
            "C" => {
                if value.contains("p1") || value.contains("p9") {
                    return Err(Error::MalformedHeader(format!(
                        "unsupported bit depth in colorspace '{value}'"
                    )));
                }
                chroma = value.parse().map_err(|_| {
                    Error::MalformedHeader(format!("unsupported colorspace '{value}'"))
                })?;
            }
            _ => {}
        }
    }
    let width = width.ok_or_else(|| Error::MalformedHeader("missing W tag".into()))?;
    let height = height.ok_or_else(|| Error::MalformedHeader("missing H tag".into()))?;
    Ok(Y4mHeader {
        width,
        height,
        chroma,
        raw: text.to_string(),
    })
}

fn parse_dim(value: &str, tag: &str) -> Result<usize> {
    match value.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(Error::MalformedHeader(format!("bad {tag} value '{value}'"))),
    }
}

fn load_y4m(data: &[u8], index: usize) -> Result<LumaFrame> {
    let (line, mut pos) = take_line(data, 0).ok_or_else(|| {
        if data.starts_with(b"YUV4MPEG2") {
            Error::Truncated {
                needed: data.len() + 1,
                available: data.len(),
            }
        } else {
            Error::MalformedHeader("missing YUV4MPEG2 signature".into())
        }
    })?;
    let header = parse_y4m_header(line)?;
    let luma = header.width * header.height;
    let payload = luma + header.chroma.chroma_bytes(header.width, header.height);

    let mut current = 0;
    loop {
        if pos >= data.len() {
            return Err(Error::FrameIndexOutOfRange {
                index,
                available: current,
            });
        }
        let (marker, next) = take_line(data, pos).ok_or(Error::Truncated {
            needed: data.len() + 1,
            available: data.len(),
        })?;
        if !marker.starts_with(b"FRAME") {
            return Err(Error::MalformedHeader(format!(
                "expected FRAME marker at byte {pos}"
            )));
        }
        pos = next;
        if pos + payload > data.len() {
            return Err(Error::Truncated {
                needed: pos + payload,
                available: data.len(),
            });
        }
        if current == index {
            return LumaFrame::new(header.width, header.height, data[pos..pos + luma].to_vec());
        }
        pos += payload;
        current += 1;
    }
}

/// Skips whitespace and `#` comments, then reads an unsigned decimal.
fn pnm_token(data: &[u8], pos: &mut usize) -> Result<usize> {
    loop {
        match data.get(*pos) {
            None => {
                return Err(Error::Truncated {
                    needed: *pos + 1,
                    available: data.len(),
                })
            }
            Some(b'#') => {
                while let Some(&b) = data.get(*pos) {
                    *pos += 1;
                    if b == b'\n' {
                        break;
                    }
                }
            }
            Some(b) if b.is_ascii_whitespace() => *pos += 1,
            Some(_) => break,
        }
    }
    let start = *pos;
    while data.get(*pos).is_some_and(u8::is_ascii_digit) {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::MalformedHeader(format!(
            "expected a number at byte {start}"
        )));
    }
    std::str::from_utf8(&data[start..*pos])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::MalformedHeader(format!("number out of range at byte {start}")))
}

fn load_pgm(data: &[u8], index: usize) -> Result<LumaFrame> {
    let mut pos = 0;
    let mut current = 0;
    loop {
        // Tolerate trailing whitespace after the last image.
        while data.get(pos).is_some_and(u8::is_ascii_whitespace) {
            pos += 1;
        }
        if pos >= data.len() {
            if current == 0 {
                return Err(Error::Truncated {
                    needed: 2,
                    available: data.len(),
                });
            }
            return Err(Error::FrameIndexOutOfRange {
                index,
                available: current,
            });
        }
        if data.len() < pos + 2 {
            return Err(Error::Truncated {
                needed: pos + 2,
                available: data.len(),
            });
        }
        if &data[pos..pos + 2] != b"P5" {
            return Err(Error::MalformedHeader("missing P5 signature".into()));
        }
        pos += 2;
        let width = pnm_token(data, &mut pos)?;
        let height = pnm_token(data, &mut pos)?;
        let maxval = pnm_token(data, &mut pos)?;
        if width == 0 || height == 0 {
            return Err(Error::DegenerateGeometry { width, height });
        }
        if maxval != 255 {
            return Err(Error::MalformedHeader(format!(
                "maxval {maxval} unsupported (only 255)"
            )));
        }
        match data.get(pos) {
            Some(b) if b.is_ascii_whitespace() => pos += 1,
            Some(_) => {
                return Err(Error::MalformedHeader(
                    "missing whitespace after maxval".into(),
                ))
            }
            None => {
                return Err(Error::Truncated {
                    needed: pos + 1,
                    available: data.len(),
                })
            }
        }
        let len = width * height;
        if pos + len > data.len() {
            return Err(Error::Truncated {
                needed: pos + len,
                available: data.len(),
            });
        }
        if current == index {
            return LumaFrame::new(width, height, data[pos..pos + len].to_vec());
        }
        pos += len;
        current += 1;
    }
}

/// Copies a square block out of `frame`. No padding: the block must fit.
pub fn extract_block(frame: &LumaFrame, view: BlockView) -> Result<LumaFrame> {
    Ok(frame.block(view)?.to_frame())
}

/// Writes `frame` as binary 8-bit PGM.
pub fn save_pgm<W: Write>(frame: &LumaFrame, mut sink: W) -> Result<()> {
    if frame.width == 0 || frame.height == 0 {
        return Err(Error::DegenerateGeometry {
            width: frame.width,
            height: frame.height,
        });
    }
    write!(sink, "P5\n{} {}\n255\n", frame.width, frame.height)?;
    sink.write_all(&frame.samples)?;
    sink.flush()?;
    Ok(())
}

/// Writes frames as a 4:2:0 Y4M stream with neutral chroma.
pub fn save_y4m<W: Write>(frames: &[LumaFrame], mut sink: W) -> Result<()> {
    let first = frames
        .first()
        .ok_or_else(|| Error::InvalidConfig("no frames to write".into()))?;
    let (w, h) = (first.width, first.height);
    writeln!(sink, "YUV4MPEG2 W{w} H{h} F30000:1001 Ip A128:117 C420jpeg")?;
    let chroma = vec![128u8; ChromaSampling::Cs420.chroma_bytes(w, h)];
    for f in frames {
        if f.width != w || f.height != h {
            return Err(Error::ShapeMismatch {
                a_width: w,
                a_height: h,
                b_width: f.width,
                b_height: f.height,
            });
        }
        sink.write_all(b"FRAME\n")?;
        sink.write_all(&f.samples)?;
        sink.write_all(&chroma)?;
    }
    sink.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pgm_bytes(w: usize, h: usize, px: &[u8]) -> Vec<u8> {
        let mut v = format!("P5\n{w} {h}\n255\n").into_bytes();
        v.extend_from_slice(px);
        v
    }

    #[test]
    fn pgm_2x2_decodes_row_major() {
        let bytes = b"P5\n# hand made\n2 2\n255\n\x00\x01\x02\x03";
        let f = load_frame(&bytes[..], FrameFormat::Pgm, 0).unwrap();
        assert_eq!((f.width(), f.height()), (2, 2));
        assert_eq!(f.samples(), &[0, 1, 2, 3]);
    }

    #[test]
    fn y4m_cif_header() {
        let frame = LumaFrame::from_fn(352, 288, |x, y| (x ^ y) as u8).unwrap();
        let mut buf = Vec::new();
        save_y4m(std::slice::from_ref(&frame), &mut buf).unwrap();
        assert!(buf.starts_with(b"YUV4MPEG2 W352 H288"));
        let back = load_frame(&buf[..], FrameFormat::Y4m, 0).unwrap();
        assert_eq!((back.width(), back.height()), (352, 288));
        assert_eq!(back, frame);
    }

    #[test]
    fn y4m_second_frame_and_errors() {
        let a = LumaFrame::filled(4, 4, 10).unwrap();
        let b = LumaFrame::filled(4, 4, 20).unwrap();
        let mut buf = Vec::new();
        save_y4m(&[a, b.clone()], &mut buf).unwrap();
        assert_eq!(load_frame(&buf[..], FrameFormat::Y4m, 1).unwrap(), b);
        assert!(matches!(
            load_frame(&buf[..], FrameFormat::Y4m, 2),
            Err(Error::FrameIndexOutOfRange {
                index: 2,
                available: 2
            })
        ));
        let cut = &buf[..buf.len() - 3];
        assert!(matches!(
            load_frame(cut, FrameFormat::Y4m, 1),
            Err(Error::Truncated { .. })
        ));
        assert!(matches!(
            load_frame(&b"YUV4MPEG H4\nFRAME\n"[..], FrameFormat::Y4m, 0),
            Err(Error::MalformedHeader(_))
        ));
        assert!(matches!(
            load_frame(&b"YUV4MPEG2 W4 H4\nFRAMX\n"[..], FrameFormat::Y4m, 0),
            Err(Error::MalformedHeader(_))
        ));
    }

    #[test]
    fn raw_yuv_index_out_of_range() {
        let fmt = FrameFormat::RawYuv {
            width: 4,
            height: 2,
            chroma: ChromaSampling::Cs420,
        };
        // 8 luma + 2 * 2 * 1 chroma
        let data: Vec<u8> = (0..12).collect();
        let f = load_frame(&data[..], fmt, 0).unwrap();
        assert_eq!(f.samples(), &[0, 1, 2, 3, 4, 5, 6, 7]);
        assert!(matches!(
            load_frame(&data[..], fmt, 1),
            Err(Error::FrameIndexOutOfRange {
                index: 1,
                available: 1
            })
        ));
        assert!(matches!(
            load_frame(&data[..11], fmt, 0),
            Err(Error::Truncated { .. })
        ));
    }

    #[test]
    fn raw_yuv_chroma_layouts() {
        for (chroma, extra) in [
            (ChromaSampling::Cs420, 8),
            (ChromaSampling::Cs422, 16),
            (ChromaSampling::Cs444, 32),
            (ChromaSampling::Mono, 0),
        ] {
            let fmt = FrameFormat::RawYuv {
                width: 4,
                height: 4,
                chroma,
            };
            let mut data = vec![1u8; 16 + extra];
            data.extend(vec![2u8; 16 + extra]);
            let f = load_frame(&data[..], fmt, 1).unwrap();
            assert!(f.samples().iter().all(|&s| s == 2), "{chroma:?}");
        }
    }

    #[test]
    fn pgm_errors_are_distinct() {
        assert!(matches!(
            load_frame(&b"P6\n1 1\n255\n\x00"[..], FrameFormat::Pgm, 0),
            Err(Error::MalformedHeader(_))
        ));
        assert!(matches!(
            load_frame(&b"P5\n2 2\n255\n\x00"[..], FrameFormat::Pgm, 0),
            Err(Error::Truncated { .. })
        ));
        assert!(matches!(
            load_frame(&b"P5\n1 1\n65535\n\x00\x00"[..], FrameFormat::Pgm, 0),
            Err(Error::MalformedHeader(_))
        ));
        assert!(matches!(
            load_frame(&pgm_bytes(1, 1, &[7])[..], FrameFormat::Pgm, 1),
            Err(Error::FrameIndexOutOfRange {
                index: 1,
                available: 1
            })
        ));
    }

    #[test]
    fn pgm_concatenated_frames() {
        let mut data = pgm_bytes(1, 2, &[1, 2]);
        data.extend(pgm_bytes(2, 1, &[3, 4]));
        let f = load_frame(&data[..], FrameFormat::Pgm, 1).unwrap();
        assert_eq!((f.width(), f.height(), f.samples()), (2, 1, &[3u8, 4][..]));
    }

    #[test]
    fn extract_block_examples() {
        let f = LumaFrame::new(2, 2, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(extract_block(&f, BlockView::new(0, 0, 2)).unwrap(), f);

        let g = LumaFrame::new(4, 4, (0..16).collect()).unwrap();
        let b = extract_block(&g, BlockView::new(1, 1, 2)).unwrap();
        assert_eq!(b.samples(), &[5, 6, 9, 10]);

        assert!(matches!(
            extract_block(&g, BlockView::new(3, 3, 2)),
            Err(Error::BlockOutOfBounds { .. })
        ));
    }

    #[test]
    fn save_pgm_single_white_pixel() {
        let f = LumaFrame::new(1, 1, vec![255]).unwrap();
        let mut buf = Vec::new();
        save_pgm(&f, &mut buf).unwrap();
        assert_eq!(buf, b"P5\n1 1\n255\n\xFF");
        assert_eq!(*buf.last().unwrap(), 0xFF);
    }

    #[test]
    fn zero_sized_frame_rejected() {
        assert!(matches!(
            LumaFrame::new(0, 0, vec![]),
            Err(Error::DegenerateGeometry { .. })
        ));
        let degenerate = LumaFrame {
            width: 0,
            height: 0,
            samples: vec![],
        };
        assert!(matches!(
            save_pgm(&degenerate, Vec::new()),
            Err(Error::DegenerateGeometry { .. })
        ));
    }

    fn arb_frame() -> impl Strategy<Value = LumaFrame> {
        (1usize..24, 1usize..24).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), w * h)
                .prop_map(move |s| LumaFrame::new(w, h, s).unwrap())
        })
    }

    proptest! {
        #[test]
        fn pgm_round_trip(f in arb_frame()) {
            let mut buf = Vec::new();
            save_pgm(&f, &mut buf).unwrap();
            let a = load_frame(&buf[..], FrameFormat::Pgm, 0).unwrap();
            let b = load_frame(&buf[..], FrameFormat::Pgm, 0).unwrap();
            prop_assert_eq!(&a, &f);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn quadrants_reassemble(half in 1usize..10, seed in any::<u64>()) {
            let side = 2 * half;
            let f = LumaFrame::from_fn(side, side, |x, y| (seed.wrapping_mul(x as u64 * 31 + y as u64 * 7 + 1) >> 7) as u8).unwrap();
            let q: Vec<LumaFrame> = [(0, 0), (half, 0), (0, half), (half, half)]
                .iter()
                .map(|&(x, y)| extract_block(&f, BlockView::new(x, y, half)).unwrap())
                .collect();
            let rebuilt = LumaFrame::from_fn(side, side, |x, y| {
                let idx = (y / half) * 2 + x / half;
                q[idx].get(x % half, y % half)
            }).unwrap();
            prop_assert_eq!(rebuilt, f);
        }
    }
}
