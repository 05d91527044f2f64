use super::fixture::{BufferInventory, OperatorCost};
use crate::error::{Error, Result};

/// On-chip memory of the accelerator in (36 Kb BRAM, 288 Kb URAM) blocks.
///
/// Only the Rot core uses BRAM (inside its NTT/INTT units). URAM is the sum
/// of the Rot core's key and twiddle buffers, the ciphertext transfer
/// buffers holding one `n`-coefficient limb each (twice that when double
/// buffered), and one matrix buffer per PCmul core.
pub fn memory_usage(
    inventory: &BufferInventory,
    rot: &OperatorCost,
    cores: usize,
    n: usize,
    limb_bits: u32,
) -> Result<(u64, u64)> {
    if inventory.uram_bits == 0 {
        return Err(Error::Config("uram_bits must be positive".into()));
    }
    let (mut bram, mut uram) = (0, 0);
    if inventory.rot_core {
        bram += rot.bram;
        uram += rot.uram;
    }
    uram += inventory.transfer_buffers * transfer_buffer_blocks(inventory, n, limb_bits);
    if inventory.matrix_buffer_bits > 0 && cores > 0 {
        let per_core = (cores as u64) * inventory.uram_bits;
        uram += cores as u64 * inventory.matrix_buffer_bits.div_ceil(per_core);
    }
    Ok((bram, uram))
}

/// URAM blocks of one ciphertext transfer buffer.
pub fn transfer_buffer_blocks(inventory: &BufferInventory, n: usize, limb_bits: u32) -> u64 {
    let copies = if inventory.double_buffered { 2 } else { 1 };
    (copies * n as u64 * limb_bits as u64).div_ceil(inventory.uram_bits)
}
