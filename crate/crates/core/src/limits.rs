//! Enumeration caps. `DLAB_MAX_ENUM` overrides the element cap.

/// Default cap on the number of candidates any brute-force enumeration may visit.
pub const DEFAULT_MAX_ENUM: u64 = 1 << 27;

/// Cap on prime-field unknowns in a restricted semilinear system.
pub const DEFAULT_MAX_LINEAR_UNKNOWNS: usize = 4096;

pub fn max_enum() -> u64 {
    std::env::var("DLAB_MAX_ENUM").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MAX_ENUM)
}

pub fn max_linear_unknowns() -> usize {
    DEFAULT_MAX_LINEAR_UNKNOWNS
}

/// `base^exp` if it does not exceed the enumeration cap.
pub fn checked_space_size(base: u64, exp: usize, what: &str) -> crate::error::Result<u64> {
    let cap = max_enum();
    let mut total: u64 = 1;
    for _ in 0..exp {
        total = total.checked_mul(base).filter(|&t| t <= cap).ok_or_else(|| {
            crate::error::Error::CapExceeded(format!("{what}: {base}^{exp} candidates exceed the cap of {cap}"))
        })?;
    }
    Ok(total)
}
