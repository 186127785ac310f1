use num_complex::Complex64;
use rustfft::Fft;

/// Applies a 1D plan along every axis of a row-major `n^dim` array.
///
/// Non-contiguous axes are handled by transposing each `n x stride` block
/// into a scratch buffer so the plan always sees contiguous lines.
pub(crate) fn transform_nd(plan: &dyn Fft<f64>, dim: usize, n: usize, data: &mut [Complex64]) {
    debug_assert_eq!(data.len(), n.pow(dim as u32));
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
    // Last axis is contiguous.
    plan.process_with_scratch(data, &mut scratch);
    if dim == 1 {
        return;
    }
    let mut block = Vec::new();
    for axis in (0..dim - 1).rev() {
        let stride = n.pow((dim - 1 - axis) as u32);
        let block_len = n * stride;
        block.resize(block_len, Complex64::new(0.0, 0.0));
        for chunk in data.chunks_mut(block_len) {
            for i in 0..n {
                for j in 0..stride {
                    block[j * n + i] = chunk[i * stride + j];
                }
            }
            plan.process_with_scratch(&mut block, &mut scratch);
            for i in 0..n {
                for j in 0..stride {
                    chunk[i * stride + j] = block[j * n + i];
                }
            }
        }
    }
}
