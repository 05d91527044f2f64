//! Word-sized modular arithmetic and the negacyclic NTT.

mod modulus;
mod ntt;
mod poly;
mod prime;

pub use modulus::{mod_mul, Modulus, MAX_MODULUS_BITS};
pub use ntt::NttTables;
pub use poly::{negacyclic_mul, ntt_forward, ntt_inverse, pointwise_mul, poly_add_mod, CoeffVector, Domain};
pub use prime::{is_prime, minimal_primitive_root, ntt_primes};
