//! Diagonal decomposition of a matrix for slot-packed evaluation.
//!
//! The `i`-th generalized diagonal of an `N × k` matrix `M`, spread over `u`
//! slots, is `diag_i[j] = M[j mod N][(i + j) mod k]`. With the input vector
//! replicated across the slots, `Σ_i diag_i ⊙ Rot^i(v)` holds `M·v` in its
//! first `N` slots.

use serde::Serialize;

use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Which way the BSGS outer loop walks the giant steps. Both orders
/// produce the same product; the diagonals are pre-rotated to match.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub enum GiantStepOrder {
    #[default]
    Descending,
    Ascending,
}

/// Dimensions of one baby-step/giant-step evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MatMulPlan {
    /// Matrix rows `N`.
    pub rows: usize,
    /// Matrix columns `k` as supplied.
    pub cols: usize,
    pub giant: usize,
    pub baby: usize,
    /// Slot count `u`.
    pub slots: usize,
}

impl MatMulPlan {
    /// Checks that a `rows × cols` matrix can be evaluated with the given
    /// split in `slots` slots. The matrix is zero-padded to `giant·baby`
    /// columns, so the split must cover every column.
    pub fn new(rows: usize, cols: usize, giant: usize, baby: usize, slots: usize) -> Result<Self> {
        if giant == 0 || baby == 0 {
            return Err(Error::Usage(format!(
                "giant and baby step counts must be positive (got {giant}, {baby})"
            )));
        }
        if rows == 0 || cols == 0 {
            return Err(Error::Usage("empty matrix".into()));
        }
        let plan = Self {
            rows,
            cols,
            giant,
            baby,
            slots,
        };
        let width = plan.width();
        if width < cols {
            return Err(Error::Usage(format!(
                "split {giant}x{baby} = {width} covers fewer than the {cols} matrix columns"
            )));
        }
        if width > slots || rows > slots {
            return Err(Error::Usage(format!(
                "a {rows}x{width} product does not fit into {slots} slots"
            )));
        }
        // Rot^i(v) must see v[c] in slot j + i for every row j and shift i,
        // either because the replication wraps cleanly or because it never
        // reaches the zeroed tail.
        if slots % width != 0 && rows + width - 1 > plan.replicated_len() {
            return Err(Error::Usage(format!(
                "{rows} rows with padded width {width} exceed the {} replicated slots",
                plan.replicated_len()
            )));
        }
        Ok(plan)
    }

    /// Padded column count `k' = giant·baby`.
    pub fn width(&self) -> usize {
        self.giant * self.baby
    }

    /// Number of slots carrying a copy of the vector.
    pub fn replicated_len(&self) -> usize {
        self.slots / self.width() * self.width()
    }

    /// Rotations of the BSGS evaluation: `(baby − 1) + (giant − 1)`.
    pub fn bsgs_rotations(&self) -> usize {
        (self.baby - 1) + (self.giant - 1)
    }

    /// Rotations of the unoptimized sum with repeated single steps.
    pub fn naive_rotations(&self) -> usize {
        self.width() - 1
    }

    pub fn pcmuls(&self) -> usize {
        self.width()
    }

    /// Additions of the BSGS evaluation: `giant·(baby − 1)` inside the giant steps
    /// plus `giant − 1` merges.
    pub fn bsgs_additions(&self) -> usize {
        self.giant * (self.baby - 1) + (self.giant - 1)
    }

    /// Amount by which the diagonal stored at position `j` is rotated right
    /// before encoding. Position `j` belongs to giant-step block `j / baby`.
    pub fn pre_rotation(&self, j: usize, order: GiantStepOrder) -> usize {
        let g = j / self.baby;
        let steps = match order {
            GiantStepOrder::Descending => g,
            GiantStepOrder::Ascending => self.giant - 1 - g,
        };
        steps * self.baby
    }

    /// Diagonal index stored at position `j`.
    pub fn diagonal_index(&self, j: usize, order: GiantStepOrder) -> usize {
        match order {
            GiantStepOrder::Descending => j,
            GiantStepOrder::Ascending => self.pre_rotation(j, order) + j % self.baby,
        }
    }
}

fn diagonal(m: &Matrix, i: usize, width: usize, slots: usize) -> Vec<u64> {
    (0..slots)
        .map(|j| {
            let col = (i + j) % width;
            if col < m.cols() {
                m.get(j % m.rows(), col)
            } else {
                0
            }
        })
        .collect()
}

/// `diag_i(M)` over `slots` slots, with column indices taken mod `k`.
pub fn extract_diagonal(m: &Matrix, i: usize, slots: usize) -> Result<Vec<u64>> {
    if i >= m.cols() {
        return Err(Error::Usage(format!(
            "diagonal {i} of a matrix with {} columns",
            m.cols()
        )));
    }
    Ok(diagonal(m, i, m.cols(), slots))
}

/// `v` rotated right by `shift`: `out[(i + shift) mod len] = v[i]`.
pub(crate) fn rotate_right(v: &[u64], shift: usize) -> Vec<u64> {
    let len = v.len();
    let shift = shift % len;
    let mut out = vec![0; len];
    for (i, &x) in v.iter().enumerate() {
        out[(i + shift) % len] = x;
    }
    out
}

/// The `giant·baby` encoded-order diagonals of a matrix, each already
/// rotated right by its giant-step offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalSet {
    plan: MatMulPlan,
    order: GiantStepOrder,
    modulus: u64,
    diags: Vec<Vec<u64>>,
}

impl DiagonalSet {
    pub fn plan(&self) -> &MatMulPlan {
        &self.plan
    }

    pub fn order(&self) -> GiantStepOrder {
        self.order
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.diags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diags.is_empty()
    }

    /// Pre-rotated diagonal stored at position `j`.
    pub fn get(&self, j: usize) -> &[u64] {
        &self.diags[j]
    }

    pub fn diagonals(&self) -> &[Vec<u64>] {
        &self.diags
    }

    /// Diagonal number `i` without its pre-rotation.
    pub fn raw(&self, i: usize) -> Vec<u64> {
        let pos = (0..self.len())
            .find(|&j| self.plan.diagonal_index(j, self.order) == i)
            .expect("every diagonal appears once");
        let shift = self.plan.pre_rotation(pos, self.order);
        crate::oracle::rotate_left(&self.diags[pos], shift)
    }

    /// Size of one encoded diagonal: `n` coefficients of `⌈log2 t⌉` bits.
    pub fn plaintext_bits(&self, ring_degree: usize) -> u64 {
        ring_degree as u64 * u64::from(64 - (self.modulus - 1).leading_zeros())
    }
}

/// Pads `m` to `giant·baby` columns and extracts and pre-rotates every
/// diagonal for the requested giant-step order.
pub fn build_diagonal_set(
    m: &Matrix,
    giant: usize,
    baby: usize,
    slots: usize,
    order: GiantStepOrder,
) -> Result<DiagonalSet> {
    let plan = MatMulPlan::new(m.rows(), m.cols(), giant, baby, slots)?;
    let width = plan.width();
    let diags = (0..width)
        .map(|j| {
            let i = plan.diagonal_index(j, order);
            rotate_right(&diagonal(m, i, width, slots), plan.pre_rotation(j, order))
        })
        .collect();
    Ok(DiagonalSet {
        plan,
        order,
        modulus: m.modulus(),
        diags,
    })
}

/// Slot image of the input vector: `v` zero-padded to the plan width and
/// repeated over the replicated slots, zeros after.
pub fn pack_vector(v: &[u64], plan: &MatMulPlan) -> Result<Vec<u64>> {
    if v.len() != plan.cols {
        return Err(Error::Usage(format!(
            "vector of length {} for a matrix with {} columns",
            v.len(),
            plan.cols
        )));
    }
    let width = plan.width();
    Ok((0..plan.slots)
        .map(|s| {
            let c = s % width;
            if s < plan.replicated_len() && c < v.len() {
                v[c]
            } else {
                0
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::rotate_left;

    fn sample() -> Matrix {
        Matrix::from_rows(&[vec![1, 2], vec![3, 4], vec![5, 6], vec![7, 8]], 65537).unwrap()
    }

    #[test]
    fn index_formula_examples() {
        let m = sample();
        assert_eq!(extract_diagonal(&m, 0, 4).unwrap(), vec![1, 4, 5, 8]);
        assert_eq!(extract_diagonal(&m, 1, 4).unwrap(), vec![2, 3, 6, 7]);
        assert!(extract_diagonal(&m, 2, 4).is_err());
    }

    #[test]
    fn first_column_indicator_alternates() {
        let m = Matrix::from_rows(&[vec![1, 0], vec![1, 0], vec![1, 0], vec![1, 0]], 17).unwrap();
        assert_eq!(extract_diagonal(&m, 0, 4).unwrap(), vec![1, 0, 1, 0]);
    }

    #[test]
    fn single_giant_step_keeps_raw_diagonals() {
        let m = sample();
        let set = build_diagonal_set(&m, 1, 2, 4, GiantStepOrder::Descending).unwrap();
        for i in 0..2 {
            assert_eq!(set.get(i), extract_diagonal(&m, i, 4).unwrap().as_slice());
            assert_eq!(set.raw(i), set.get(i));
        }
    }

    #[test]
    fn second_giant_step_wraps_last_slot_to_front() {
        let m = sample();
        let set = build_diagonal_set(&m, 2, 1, 4, GiantStepOrder::Descending).unwrap();
        let raw = extract_diagonal(&m, 1, 4).unwrap();
        assert_eq!(set.get(1), &[raw[3], raw[0], raw[1], raw[2]]);
    }

    #[test]
    fn ascending_order_stores_mirrored_diagonals() {
        let m = Matrix::from_rows(&[(1..=6).collect()], 97).unwrap();
        let asc = build_diagonal_set(&m, 3, 2, 12, GiantStepOrder::Ascending).unwrap();
        let desc = build_diagonal_set(&m, 3, 2, 12, GiantStepOrder::Descending).unwrap();
        for i in 0..6 {
            assert_eq!(asc.raw(i), desc.raw(i));
        }
        // position 0 of the ascending walk is diagonal 4 rotated by 4
        assert_eq!(rotate_left(asc.get(0), 4), desc.raw(4));
    }

    #[test]
    fn padding_zeroes_extra_columns() {
        let m = Matrix::from_rows(&[vec![1, 2, 3]], 17).unwrap();
        let set = build_diagonal_set(&m, 2, 2, 8, GiantStepOrder::Descending).unwrap();
        assert_eq!(set.plan().width(), 4);
        assert_eq!(set.raw(3)[0], 0);
        assert_eq!(pack_vector(&[4, 5, 6], set.plan()).unwrap(), vec![4, 5, 6, 0, 4, 5, 6, 0]);
    }

    #[test]
    fn plan_validation() {
        assert!(MatMulPlan::new(4, 2, 0, 1, 8).is_err());
        assert!(MatMulPlan::new(4, 5, 2, 2, 8).is_err());
        assert!(MatMulPlan::new(4, 4, 4, 4, 8).is_err());
        // width 3 in 8 slots replicates over 6: four rows fit, five do not
        assert!(MatMulPlan::new(4, 3, 3, 1, 8).is_ok());
        assert!(MatMulPlan::new(5, 3, 3, 1, 8).is_err());
        let plan = MatMulPlan::new(1, 50, 23, 46, 2048).unwrap();
        assert_eq!((plan.bsgs_rotations(), plan.naive_rotations(), plan.pcmuls()), (67, 1057, 1058));
    }

    #[test]
    fn wide_split_plaintext_size() {
        let m = Matrix::zeros(1, 50, 786_433).unwrap();
        let set = build_diagonal_set(&m, 23, 46, 1058, GiantStepOrder::Descending).unwrap();
        assert_eq!(set.len(), 1058);
        // 2^16 coefficients of 20 bits = 1,280 Kib
        assert_eq!(set.plaintext_bits(1 << 16), 1280 * 1024);
    }
}
