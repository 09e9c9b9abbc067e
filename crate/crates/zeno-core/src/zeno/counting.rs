//! Transition counting for binary sequences: N(j, n, k) counts length-n
//! strings over {A, B} with k A's and exactly j adjacent AB or BA
//! transitions. The closed form pairs binomial urn counts with a parity
//! case split; the brute force enumerates all 2ⁿ strings.

use crate::error::{Result, ZenoError};

/// Enumeration cap of [`counting_brute_force`].
pub const BRUTE_FORCE_N_CAP: u32 = 24;

/// Binomial coefficient as u128; zero outside the usual range.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn validate(j: u64, n: u64, k: u64) -> Result<()> {
    if n < 1 {
        return Err(ZenoError::InvalidInput("counting requires n >= 1".into()));
    }
    if k > n {
        return Err(ZenoError::InvalidInput(format!("k = {k} exceeds n = {n}")));
    }
    let _ = j;
    Ok(())
}

/// Largest transition count possible for fixed (n, k):
/// 2·min{k, n−k} − 1 when the two letter counts are equal, 2·min{k, n−k}
/// otherwise; transitions above it are impossible.
pub fn max_transitions(n: u64, k: u64) -> u64 {
    let m = k.min(n - k);
    let tie_break = if 2 * k == n { 1 } else { 0 };
    (2 * m).saturating_sub(tie_break)
}

/// Closed-form N(j, n, k): urn-style binomial products split by the parity
/// of j, with N(0, n, k) = 1 exactly for the constant strings.
pub fn counting_closed_form(j: u64, n: u64, k: u64) -> Result<u128> {
    validate(j, n, k)?;
    if j == 0 {
        return Ok(if k == 0 || k == n { 1 } else { 0 });
    }
    if j > max_transitions(n, k) {
        return Ok(0);
    }
    if j % 2 == 1 {
        let l = j.div_ceil(2); // j = 2l - 1
        Ok(2 * binomial(n - k - 1, l - 1) * binomial(k - 1, l - 1))
    } else {
        let l = j / 2;
        let base = binomial(n - k - 1, l - 1) * binomial(k - 1, l - 1);
        // (n - 2l)/l times the base is always integral here
        Ok(base * (n - 2 * l) as u128 / l as u128)
    }
}

/// Exhaustive oracle for N(j, n, k) over all 2ⁿ binary strings, n ≤ 24.
pub fn counting_brute_force(j: u64, n: u64, k: u64) -> Result<u128> {
    validate(j, n, k)?;
    if n > BRUTE_FORCE_N_CAP as u64 {
        return Err(ZenoError::ResourceLimit(format!(
            "brute-force enumeration capped at n = {BRUTE_FORCE_N_CAP}, got {n}"
        )));
    }
    let mut count: u128 = 0;
    for s in 0u64..(1u64 << n) {
        if s.count_ones() as u64 != k {
            continue;
        }
        // adjacent transitions are set bits of s ^ (s >> 1) below position n-1
        let transitions = ((s ^ (s >> 1)) & ((1u64 << (n - 1)) - 1)).count_ones() as u64;
        if transitions == j {
            count += 1;
        }
    }
    Ok(count)
}
