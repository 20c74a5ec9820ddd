use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::matrix::{CMatrix, MAX_DIM};

/// Ordered subsystem dimensions of a composite system.
///
/// Subsystems are addressed by position. Every dimension is at least 2 and
/// the total dimension is capped at [`MAX_DIM`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemShape {
    dims: Vec<usize>,
}

impl SystemShape {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Size("shape needs at least one subsystem".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::Size(format!("subsystem dimension {d} < 2")));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .unwrap_or(usize::MAX);
        if total > MAX_DIM {
            return Err(Error::Size(format!(
                "total dimension {total} exceeds cap {MAX_DIM}"
            )));
        }
        Ok(SystemShape { dims: dims.to_vec() })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims[k]
    }

    /// Product of the dimensions at `idx`.
    pub fn dim_of(&self, idx: &[usize]) -> usize {
        idx.iter().map(|&k| self.dims[k]).product()
    }

    /// Shape of the subsystems at `keep`, in the given order.
    pub fn select(&self, keep: &[usize]) -> Result<SystemShape> {
        self.check_indices(keep)?;
        SystemShape::new(&keep.iter().map(|&k| self.dims[k]).collect::<Vec<_>>())
    }

    /// Errors unless every index is in range and none repeats.
    pub fn check_indices(&self, idx: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.len()];
        for &k in idx {
            if k >= self.len() {
                return Err(Error::Index(format!(
                    "subsystem {k} out of range for {} subsystems",
                    self.len()
                )));
            }
            if seen[k] {
                return Err(Error::Index(format!("subsystem {k} repeated")));
            }
            seen[k] = true;
        }
        Ok(())
    }

    /// Row-major strides: `stride[k] = prod_{j>k} d_j`.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.len()];
        for k in (0..self.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.dims[k + 1];
        }
        s
    }

    /// Digits of a flat index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.len()];
        for k in (0..self.len()).rev() {
            out[k] = index % self.dims[k];
            index /= self.dims[k];
        }
        out
    }

    pub fn flat(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &d)| acc * d + i)
    }

    /// Subsystems not listed in `idx`, ascending.
    pub fn complement(&self, idx: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|k| !idx.contains(k)).collect()
    }
}

fn check_square(m: &CMatrix, shape: &SystemShape) -> Result<()> {
    if !m.is_square() || m.rows() != shape.total() {
        return Err(Error::Size(format!(
            "{}x{} matrix does not match shape {:?}",
            m.rows(),
            m.cols(),
            shape.dims()
        )));
    }
    Ok(())
}

/// Flat offsets of every multi-index over the subsystems `idx` (in that
/// order) inside the full space.
fn offsets(shape: &SystemShape, idx: &[usize]) -> Vec<usize> {
    let strides = shape.strides();
    let mut out = vec![0usize];
    for &k in idx {
        let mut next = Vec::with_capacity(out.len() * shape.dim(k));
        for &base in &out {
            for i in 0..shape.dim(k) {
                next.push(base + i * strides[k]);
            }
        }
        out = next;
    }
    out
}

/// Traces out every subsystem not in `keep`. The result is ordered as `keep`.
///
/// Keeping nothing yields the 1x1 matrix `[Tr m]`.
pub fn partial_trace(m: &CMatrix, shape: &SystemShape, keep: &[usize]) -> Result<CMatrix> {
    check_square(m, shape)?;
    shape.check_indices(keep)?;
    let traced = shape.complement(keep);
    let kept_off = offsets(shape, keep);
    let traced_off = offsets(shape, &traced);
    let n = kept_off.len();
    let mut out = CMatrix::zeros(n, n);
    for (r, &ro) in kept_off.iter().enumerate() {
        for (c, &co) in kept_off.iter().enumerate() {
            let s = traced_off.iter().map(|&t| m.0[(ro + t, co + t)]).sum();
            out.0[(r, c)] = s;
        }
    }
    Ok(out)
}

/// Transposes the tensor factors listed in `flip`. An involution.
pub fn partial_transpose(m: &CMatrix, shape: &SystemShape, flip: &[usize]) -> Result<CMatrix> {
    check_square(m, shape)?;
    shape.check_indices(flip)?;
    let kept = shape.complement(flip);
    let f_off = offsets(shape, flip);
    let k_off = offsets(shape, &kept);
    let mut out = CMatrix::zeros(m.rows(), m.cols());
    for &ka in &k_off {
        for &kb in &k_off {
            for &fa in &f_off {
                for &fb in &f_off {
                    out.0[(ka + fa, kb + fb)] = m.0[(ka + fb, kb + fa)];
                }
            }
        }
    }
    Ok(out)
}

/// Reorders subsystems: subsystem `order[k]` of the input becomes subsystem `k`
/// of the output. Returns the permuted matrix and its shape.
pub fn permute_subsystems(
    m: &CMatrix,
    shape: &SystemShape,
    order: &[usize],
) -> Result<(CMatrix, SystemShape)> {
    check_square(m, shape)?;
    let map = permutation_map(shape, order)?;
    let new_shape = shape.select(order)?;
    let n = m.rows();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.0[(map[i], map[j])] = m.0[(i, j)];
        }
    }
    Ok((out, new_shape))
}

/// Flat index map old -> new for a subsystem reordering.
pub(crate) fn permutation_map(shape: &SystemShape, order: &[usize]) -> Result<Vec<usize>> {
    if order.len() != shape.len() {
        return Err(Error::Index(format!(
            "permutation of length {} for {} subsystems",
            order.len(),
            shape.len()
        )));
    }
    shape.check_indices(order)?;
    let new_shape = shape.select(order)?;
    Ok((0..shape.total())
        .map(|i| {
            let d = shape.digits(i);
            let nd: Vec<usize> = order.iter().map(|&k| d[k]).collect();
            new_shape.flat(&nd)
        })
        .collect())
}

/// `I ⊗ op ⊗ I` with `op` acting on subsystem `target`.
pub fn embed(op: &CMatrix, shape: &SystemShape, target: usize) -> Result<CMatrix> {
    shape.check_indices(&[target])?;
    if !op.is_square() || op.rows() != shape.dim(target) {
        return Err(Error::Size(format!(
            "operator of dimension {} on subsystem of dimension {}",
            op.rows(),
            shape.dim(target)
        )));
    }
    let left: usize = shape.dims()[..target].iter().product();
    let right: usize = shape.dims()[target + 1..].iter().product();
    Ok(CMatrix::identity(left)
        .kron_unchecked(op)
        .kron_unchecked(&CMatrix::identity(right)))
}
