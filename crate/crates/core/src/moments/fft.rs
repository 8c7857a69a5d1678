use rustfft::FftPlanner;

use crate::linalg::matrix::C64;

/// In-place forward 2D DFT `X_{a,b} = Σ x_{p,q} e^{−2πi(ap/rows + bq/cols)}`
/// of a row-major array.
pub(crate) fn fft2(data: &mut [C64], rows: usize, cols: usize) {
    debug_assert_eq!(data.len(), rows * cols);
    let mut planner = FftPlanner::<f64>::new();
    let row_fft = planner.plan_fft_forward(cols);
    for row in data.chunks_mut(cols) {
        row_fft.process(row);
    }
    let col_fft = planner.plan_fft_forward(rows);
    let mut column = vec![C64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = data[r * cols + c];
        }
        col_fft.process(&mut column);
        for r in 0..rows {
            data[r * cols + c] = column[r];
        }
    }
}
