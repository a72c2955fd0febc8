//! Global pooling over the spatial plane or across channels.

use crate::tensor::{Matrix, Tensor4};

/// Mean over `h × w`, shape `(batch, channels)`.
pub fn global_avg(x: &Tensor4) -> Matrix {
    let (b, c, _, _) = x.dims();
    let n = x.plane_len() as f64;
    let mut out = Matrix::zeros(b, c);
    for s in 0..b {
        for ch in 0..c {
            out.data[s * c + ch] = x.plane(s, ch).iter().sum::<f64>() / n;
        }
    }
    out
}

pub fn global_avg_backward(dy: &Matrix, shape: [usize; 4]) -> Tensor4 {
    let [b, c, h, w] = shape;
    let n = (h * w) as f64;
    let mut dx = Tensor4::zeros(shape);
    for s in 0..b {
        for ch in 0..c {
            let g = dy.data[s * c + ch] / n;
            dx.plane_mut(s, ch).fill(g);
        }
    }
    dx
}

/// Max over `h × w` with the position of the first maximum.
pub fn global_max(x: &Tensor4) -> (Matrix, Vec<usize>) {
    let (b, c, _, _) = x.dims();
    let mut out = Matrix::zeros(b, c);
    let mut arg = vec![0; b * c];
    for s in 0..b {
        for ch in 0..c {
            let p = x.plane(s, ch);
            let mut best = 0;
            for (i, &v) in p.iter().enumerate() {
                if v > p[best] {
                    best = i;
                }
            }
            out.data[s * c + ch] = p[best];
            arg[s * c + ch] = best;
        }
    }
    (out, arg)
}

pub fn global_max_backward(dy: &Matrix, arg: &[usize], shape: [usize; 4]) -> Tensor4 {
    let [b, c, _, _] = shape;
    let mut dx = Tensor4::zeros(shape);
    for s in 0..b {
        for ch in 0..c {
            dx.plane_mut(s, ch)[arg[s * c + ch]] = dy.data[s * c + ch];
        }
    }
    dx
}

/// Mean and max across channels at every pixel, stacked as two channels.
/// Also returns the channel holding each maximum (first on ties).
pub fn channel_avg_max(x: &Tensor4) -> (Tensor4, Vec<usize>) {
    let (b, c, h, w) = x.dims();
    let hw = h * w;
    let mut out = Tensor4::zeros([b, 2, h, w]);
    let mut arg = vec![0; b * hw];
    for s in 0..b {
        for p in 0..hw {
            let mut sum = 0.0;
            let mut best = 0;
            let mut best_v = f64::NEG_INFINITY;
            for ch in 0..c {
                let v = x.plane(s, ch)[p];
                sum += v;
                if v > best_v {
                    best_v = v;
                    best = ch;
                }
            }
            out.plane_mut(s, 0)[p] = sum / c as f64;
            out.plane_mut(s, 1)[p] = best_v;
            arg[s * hw + p] = best;
        }
    }
    (out, arg)
}

pub fn channel_avg_max_backward(dy: &Tensor4, arg: &[usize], shape: [usize; 4]) -> Tensor4 {
    let [b, c, h, w] = shape;
    let hw = h * w;
    let mut dx = Tensor4::zeros(shape);
    for s in 0..b {
        for ch in 0..c {
            let davg = dy.plane(s, 0);
            let dmax = dy.plane(s, 1);
            let out = dx.plane_mut(s, ch);
            for p in 0..hw {
                out[p] = davg[p] / c as f64;
                if arg[s * hw + p] == ch {
                    out[p] += dmax[p];
                }
            }
        }
    }
    dx
}
