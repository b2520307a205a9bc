//! Reference values the acceptance suite compares against.

/// Published exponents `alpha(b, a0)` for the missing-digit sets, indexed
/// `[a0][b - 3]` for `3 <= b <= 9`. Cells with `a0 >= b` are empty.
pub const ALPHA_TABLE: [[Option<f64>; 7]; 9] = {
    const N: Option<f64> = None;
    [
        [
            Some(0.37837),
            Some(0.51110),
            Some(0.57643),
            Some(0.61599),
            Some(0.64284),
            Some(0.66249),
            Some(0.67762),
        ],
        [
            Some(0.36285),
            Some(0.45387),
            Some(0.52250),
            Some(0.57233),
            Some(0.60633),
            Some(0.62852),
            Some(0.64559),
        ],
        [
            Some(0.37837),
            Some(0.45387),
            Some(0.55152),
            Some(0.56422),
            Some(0.59963),
            Some(0.61732),
            Some(0.63896),
        ],
        [
            N,
            Some(0.51110),
            Some(0.52250),
            Some(0.56422),
            Some(0.61955),
            Some(0.61711),
            Some(0.63511),
        ],
        [
            N,
            N,
            Some(0.57643),
            Some(0.57233),
            Some(0.59963),
            Some(0.61711),
            Some(0.65576),
        ],
        [
            N,
            N,
            N,
            Some(0.61599),
            Some(0.60633),
            Some(0.61732),
            Some(0.63511),
        ],
        [N, N, N, N, Some(0.64284), Some(0.62852), Some(0.63896)],
        [N, N, N, N, N, Some(0.66249), Some(0.64559)],
        [N, N, N, N, N, N, Some(0.67762)],
    ]
};

/// Table entry for base `b` and excluded digit `a0`, if published.
pub fn published_alpha(b: u64, a0: u64) -> Option<f64> {
    if !(3..=9).contains(&b) || a0 >= b {
        return None;
    }
    ALPHA_TABLE[a0 as usize][b as usize - 3]
}

/// Number of published cells.
pub fn published_cells() -> usize {
    ALPHA_TABLE.iter().flatten().filter(|c| c.is_some()).count()
}

/// Published value of the closed-form palindrome exponent at `b = 1100`.
pub const ALPHA_1100: f64 = 0.333445;
