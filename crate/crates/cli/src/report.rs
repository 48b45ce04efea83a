//! JSON rendering helpers: exact values carry their decimal approximation
//! alongside so reports stay both machine-checkable and readable.

use num::{BigInt, BigRational, ToPrimitive};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn rational_json(r: &BigRational) -> Value {
    json!({
        "exact": r.to_string(),
        "approx": r.to_f64(),
    })
}

pub fn bigint_json(i: &BigInt) -> Value {
    json!({
        "exact": i.to_string(),
        "approx": i.to_f64(),
    })
}

pub fn rational_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_string()
    } else {
        format!("{} (~{:.6})", r, r.to_f64().unwrap_or(f64::NAN))
    }
}
