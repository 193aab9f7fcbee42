use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// In-place 2D DFT of a row-major buffer. The inverse is unnormalized.
pub(crate) fn fft2(data: &mut [Complex64], rows: usize, cols: usize, inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let (row_fft, col_fft) = if inverse {
        (planner.plan_fft_inverse(cols), planner.plan_fft_inverse(rows))
    } else {
        (planner.plan_fft_forward(cols), planner.plan_fft_forward(rows))
    };
    row_fft.process(data);
    let mut column = vec![Complex64::default(); rows];
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

/// Signed frequency index of bin `i` in a transform of length `n`.
pub(crate) fn signed_bin(i: usize, n: usize) -> i64 {
    if i < n.div_ceil(2) {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let (rows, cols) = (6, 10);
        let orig: Vec<Complex64> = (0..rows * cols)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut data = orig.clone();
        fft2(&mut data, rows, cols, false);
        fft2(&mut data, rows, cols, true);
        let n = (rows * cols) as f64;
        for (a, b) in data.iter().zip(&orig) {
            assert!((a / n - b).norm() < 1e-12);
        }
    }

    #[test]
    fn single_mode_lands_in_its_bin() {
        let (rows, cols) = (8, 16);
        let mut data: Vec<Complex64> = (0..rows * cols)
            .map(|i| {
                let (r, c) = (i / cols, i % cols);
                let phase = 2.0 * std::f64::consts::PI * (3.0 * c as f64 / 16.0 - 1.0 * r as f64 / 8.0);
                Complex64::from_polar(1.0, phase)
            })
            .collect();
        fft2(&mut data, rows, cols, false);
        let peak = data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap()
            .0;
        let (r, c) = (peak / cols, peak % cols);
        assert_eq!((signed_bin(r, rows), signed_bin(c, cols)), (-1, 3));
    }

    #[test]
    fn signed_bins() {
        assert_eq!((0..5).map(|i| signed_bin(i, 5)).collect::<Vec<_>>(), vec![0, 1, 2, -2, -1]);
        assert_eq!((0..4).map(|i| signed_bin(i, 4)).collect::<Vec<_>>(), vec![0, 1, -2, -1]);
    }
}
