use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::rotor::DensityBlock;

/// Nearest-in-spectrum physical state: negative eigenvalues of the
/// Hermitian part are clipped to zero and the result is rescaled to the
/// original trace. A block with no positive weight is returned as zero.
pub fn project_psd(block: &DensityBlock) -> Result<DensityBlock> {
    let mat = block.to_matrix();
    let herm = (&mat + mat.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let clipped: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    let kept: f64 = clipped.iter().sum();
    let target = block.trace();
    let scale = if kept > 0.0 { target.max(0.0) / kept } else { 0.0 };
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        clipped.len(),
        clipped.iter().map(|l| Complex64::new(l * scale, 0.0)),
    ));
    let out = &eig.eigenvectors * d * eig.eigenvectors.adjoint();
    DensityBlock::from_matrix(block.k(), block.m(), &out)
}
