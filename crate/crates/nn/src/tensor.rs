use crate::NnError;

/// Dense `(batch, channels, height, width)` array, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    shape: [usize; 4],
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(shape: [usize; 4]) -> Self {
        Self {
            shape,
            data: vec![0.0; shape.iter().product()],
        }
    }

    pub fn filled(shape: [usize; 4], value: f64) -> Self {
        Self {
            shape,
            data: vec![value; shape.iter().product()],
        }
    }

    pub fn from_vec(shape: [usize; 4], data: Vec<f64>) -> Result<Self, NnError> {
        let want: usize = shape.iter().product();
        if data.len() != want {
            return Err(NnError::shape("tensor data", vec![want], vec![data.len()]));
        }
        Ok(Self { shape, data })
    }

    pub fn shape(&self) -> [usize; 4] {
        self.shape
    }

    pub fn dims(&self) -> (usize, usize, usize, usize) {
        let [b, c, h, w] = self.shape;
        (b, c, h, w)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn index(&self, b: usize, c: usize, h: usize, w: usize) -> usize {
        let [_, cc, hh, ww] = self.shape;
        ((b * cc + c) * hh + h) * ww + w
    }

    pub fn get(&self, b: usize, c: usize, h: usize, w: usize) -> f64 {
        self.data[self.index(b, c, h, w)]
    }

    pub fn plane_len(&self) -> usize {
        self.shape[2] * self.shape[3]
    }

    /// The `h × w` plane of one sample and channel.
    pub fn plane(&self, b: usize, c: usize) -> &[f64] {
        let n = self.plane_len();
        let start = (b * self.shape[1] + c) * n;
        &self.data[start..start + n]
    }

    pub fn plane_mut(&mut self, b: usize, c: usize) -> &mut [f64] {
        let n = self.plane_len();
        let start = (b * self.shape[1] + c) * n;
        &mut self.data[start..start + n]
    }

    pub fn expect_shape(&self, what: &str, shape: [usize; 4]) -> Result<(), NnError> {
        if self.shape != shape {
            return Err(NnError::shape(what, shape.to_vec(), self.shape.to_vec()));
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &Tensor4) {
        debug_assert_eq!(self.shape, other.shape);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// `(rows, cols)` array, row-major. Rows are samples (or sample/time pairs).
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, NnError> {
        if data.len() != rows * cols {
            return Err(NnError::shape("matrix data", vec![rows, cols], vec![data.len()]));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn shape(&self) -> [usize; 2] {
        [self.rows, self.cols]
    }

    /// Index of the largest entry in each row, lowest index on ties.
    pub fn argmax_rows(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let mut best = 0;
                for (i, &v) in row.iter().enumerate() {
                    if v > row[best] {
                        best = i;
                    }
                }
                best
            })
            .collect()
    }
}

/// `(batch, steps, dim)` sequence, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    pub batch: usize,
    pub steps: usize,
    pub dim: usize,
    pub data: Vec<f64>,
}

impl Sequence {
    pub fn zeros(batch: usize, steps: usize, dim: usize) -> Self {
        Self {
            batch,
            steps,
            dim,
            data: vec![0.0; batch * steps * dim],
        }
    }

    pub fn from_vec(batch: usize, steps: usize, dim: usize, data: Vec<f64>) -> Result<Self, NnError> {
        if data.len() != batch * steps * dim {
            return Err(NnError::shape(
                "sequence data",
                vec![batch, steps, dim],
                vec![data.len()],
            ));
        }
        Ok(Self {
            batch,
            steps,
            dim,
            data,
        })
    }

    pub fn step(&self, b: usize, t: usize) -> &[f64] {
        let start = (b * self.steps + t) * self.dim;
        &self.data[start..start + self.dim]
    }

    pub fn step_mut(&mut self, b: usize, t: usize) -> &mut [f64] {
        let start = (b * self.steps + t) * self.dim;
        &mut self.data[start..start + self.dim]
    }

    pub fn shape(&self) -> [usize; 3] {
        [self.batch, self.steps, self.dim]
    }

    /// Views every `(sample, step)` pair as one matrix row.
    pub fn into_matrix(self) -> Matrix {
        Matrix {
            rows: self.batch * self.steps,
            cols: self.dim,
            data: self.data,
        }
    }
}
