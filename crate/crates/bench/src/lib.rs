//! Shared setup for the criterion benchmarks.

use omr_core::bfv::{gen_rotation_key, keygen, HeContext, HeParams, RotationKey, SecretKey};
use omr_core::matmul::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Setup {
    pub ctx: HeContext,
    pub sk: SecretKey,
    pub rng: ChaCha8Rng,
}

impl Setup {
    pub fn desk() -> Self {
        let ctx = HeContext::new(HeParams::desk()).expect("desk parameters are valid");
        let sk = keygen(&ctx, 1);
        Self {
            ctx,
            sk,
            rng: ChaCha8Rng::seed_from_u64(7),
        }
    }

    pub fn rotation_key(&self, shift: usize) -> RotationKey {
        gen_rotation_key(&self.ctx, &self.sk, shift, 100 + shift as u64).expect("valid shift")
    }

    pub fn slots(&mut self) -> Vec<u64> {
        let t = self.ctx.t().value();
        (0..self.ctx.slot_count()).map(|_| self.rng.gen_range(0..t)).collect()
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::random(rows, cols, self.ctx.t().value(), &mut self.rng).expect("non-empty shape")
    }
}
