use super::{Axis, MapError, SpectroMap};

/// Bilinear resampling with half-pixel centres (corners not aligned).
/// Source coordinates below zero clamp to the first sample, so outputs
/// never leave the input's value range.
pub fn resize_bilinear(
    map: &SpectroMap,
    out_h: usize,
    out_w: usize,
) -> Result<SpectroMap, MapError> {
    if out_h == 0 || out_w == 0 {
        return Err(MapError::InvalidSize(out_h, out_w));
    }
    let rows = taps(map.rows, out_h);
    let cols = taps(map.cols, out_w);
    let mut values = Vec::with_capacity(out_h * out_w);
    for &(r0, r1, fr) in &rows {
        for &(c0, c1, fc) in &cols {
            let top = map.get(r0, c0) * (1.0 - fc) + map.get(r0, c1) * fc;
            let bottom = map.get(r1, c0) * (1.0 - fc) + map.get(r1, c1) * fc;
            values.push(top * (1.0 - fr) + bottom * fr);
        }
    }
    SpectroMap::new(
        map.domain,
        out_h,
        out_w,
        values,
        rescale_axis(&map.row_axis, map.rows, out_h),
        rescale_axis(&map.col_axis, map.cols, out_w),
        map.params,
    )
}

fn taps(n_in: usize, n_out: usize) -> Vec<(usize, usize, f64)> {
    let scale = n_in as f64 / n_out as f64;
    (0..n_out)
        .map(|i| {
            let src = ((i as f64 + 0.5) * scale - 0.5).max(0.0);
            let i0 = (src.floor() as usize).min(n_in - 1);
            let i1 = (i0 + 1).min(n_in - 1);
            (i0, i1, src - i0 as f64)
        })
        .collect()
}

fn rescale_axis(axis: &Axis, n_in: usize, n_out: usize) -> Axis {
    let scale = n_in as f64 / n_out as f64;
    Axis {
        start: axis.start + axis.step * (0.5 * scale - 0.5),
        step: axis.step * scale,
        ..axis.clone()
    }
}
