//! RNS-BFV with secret-key encryption, slot batching and the three operators
//! used by MatMul: CCadd, PCmul and Rot (ApplyGalois + hybrid KeySwitch).

mod cipher;
mod context;
mod encoding;
mod eval;
mod galois;
mod keys;
mod params;
mod rns;
mod sampling;
pub mod serial;

pub use cipher::{decrypt, encrypt, Ciphertext, Decrypted, Provenance, MIN_BUDGET_BITS};
pub use context::HeContext;
pub use encoding::{decode, decode_rows, encode, Encoding, Plaintext, PreparedPlaintext};
pub use eval::{Evaluator, GaloisCiphertext, OpCounts};
pub use keys::{gen_galois_key, gen_rotation_key, keygen, RotationKey, SecretKey};
pub use params::{HeParams, LimbSpec, MatMulShape};
pub use rns::RnsPoly;
pub use sampling::CBD_ETA;
