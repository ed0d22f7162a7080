//! Input digests recorded in reports.

use sha2::{Digest, Sha256};

use crate::linalg::ComplexMatrix;

/// First 16 hex digits of SHA-256 over the matrices' little-endian bytes.
pub fn digest_matrices(ms: &[&ComplexMatrix]) -> String {
    let mut h = Sha256::new();
    for m in ms {
        h.update(m.to_le_bytes());
    }
    let out = h.finalize();
    out.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

pub fn digest_bytes(bytes: &[u8]) -> String {
    let out = Sha256::digest(bytes);
    out.iter().take(8).map(|b| format!("{b:02x}")).collect()
}
