//! Pixel-difference distortions: SAD, MSE and PSNR.

use crate::error::Result;
use crate::frame::GridView;

/// Sum of absolute differences.
pub fn sad(a: GridView<'_>, b: GridView<'_>) -> Result<u64> {
    a.same_shape(&b)?;
    Ok(sad_unchecked(a, b))
}

#[inline]
pub(crate) fn sad_unchecked(a: GridView<'_>, b: GridView<'_>) -> u64 {
    let mut total = 0u64;
    for (ra, rb) in a.rows().zip(b.rows()) {
        let row: u32 = ra.iter().zip(rb).map(|(&x, &y)| x.abs_diff(y) as u32).sum();
        total += row as u64;
    }
    total
}

/// Sum of squared differences.
#[inline]
pub(crate) fn sse_unchecked(a: GridView<'_>, b: GridView<'_>) -> u64 {
    let mut total = 0u64;
    for (ra, rb) in a.rows().zip(b.rows()) {
        // 255^2 per sample keeps rows up to 33k samples inside i32.
        let row: i32 = ra
            .iter()
            .zip(rb)
            .map(|(&x, &y)| {
                let d = (x as i16 - y as i16) as i32;
                d * d
            })
            .sum();
        total += row as u64;
    }
    total
}

/// Mean squared difference.
pub fn mse(a: GridView<'_>, b: GridView<'_>) -> Result<f64> {
    a.same_shape(&b)?;
    Ok(sse_unchecked(a, b) as f64 / a.len() as f64)
}

/// Peak signal-to-noise ratio in dB for 8-bit samples.
///
/// Identical inputs give `f64::INFINITY`.
pub fn psnr(a: GridView<'_>, b: GridView<'_>) -> Result<f64> {
    let m = mse(a, b)?;
    if m == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (255.0f64 * 255.0 / m).log10())
}
