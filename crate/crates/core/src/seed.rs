//! Stable seed derivation.
//!
//! A seed is the first eight bytes (little-endian) of the SHA-256 digest of
//! the key parts joined by the ASCII unit separator (0x1f). The result depends
//! only on the key strings, never on platform, thread count or call order.

use sha2::{Digest, Sha256};

const SEPARATOR: u8 = 0x1f;

pub fn derive_seed<I, S>(parts: I) -> u64
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut hasher = Sha256::new();
    for (i, part) in parts.into_iter().enumerate() {
        if i > 0 {
            hasher.update([SEPARATOR]);
        }
        hasher.update(part.as_ref().as_bytes());
    }
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}
