//! The small-`c₂` tables, as printed.

use crate::monad::MonadSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Section5Row {
    /// Series and row, e.g. `"sigma1:3"`.
    pub row: &'static str,
    pub series: MonadSeries,
    pub n: i64,
    pub m: i64,
    pub eps: i64,
    pub a: i64,
    /// Dimension as printed.
    pub printed_dimension: i64,
    /// Subscript printed next to the dimension.
    pub printed_subscript: i64,
    /// Whether the row calls the dimension the expected one.
    pub printed_expected: bool,
    pub spectrum: &'static str,
}

const fn row(
    row: &'static str,
    series: MonadSeries,
    n: i64,
    (m, eps, a): (i64, i64, i64),
    printed_dimension: i64,
    printed_subscript: i64,
    printed_expected: bool,
    spectrum: &'static str,
) -> Section5Row {
    Section5Row { row, series, n, m, eps, a, printed_dimension, printed_subscript, printed_expected, spectrum }
}

use MonadSeries::{Sigma0 as S0, Sigma1 as S1};

pub const SECTION5: &[Section5Row] = &[
    row("sigma0:1", S0, 6, (1, 0, 2), 45, 6, true, "(-1,0^4,1)"),
    row("sigma0:2", S0, 7, (1, 1, 2), 53, 7, true, "(-1,0^5,1)"),
    row("sigma0:3", S0, 8, (2, 0, 2), 61, 8, true, "(-1,0^6,1)"),
    row("sigma0:4", S0, 9, (2, 1, 2), 69, 9, true, "(-1,0^7,1)"),
    row("sigma0:5", S0, 10, (3, 0, 2), 77, 10, true, "(-1,0^8,1)"),
    row("sigma0:6", S0, 11, (3, 1, 2), 85, 11, true, "(-1,0^9,1)"),
    row("sigma0:7", S0, 12, (4, 0, 2), 93, 12, true, "(-1,0^10,1)"),
    row("sigma0:8", S0, 18, (1, 0, 4), 141, 12, true, "(-3,-2^2,-1^3,0^6,1^3,2^2,3)"),
    row("sigma1:1", S1, 24, (1, 0, 4), 187, 24, true, "(-4,-3^2,-2^3,-1^6,0^6,1^3,2^2,3)"),
    row("sigma1:2", S1, 34, (1, 0, 5), 281, 34, false, "(-5,-4^2,-3^3,-2^4,-1^7,0^7,1^4,2^3,3^2,4)"),
    row("sigma1:3", S1, 36, (1, 1, 5), 281, 34, false, "(-5,-4^2,-3^3,-2^4,-1^8,0^8,1^4,2^3,3^2,4)"),
    row("sigma1:4", S1, 38, (2, 0, 5), 299, 36, true, "(-5,-4^2,-3^3,-2^4,-1^9,0^9,1^4,2^3,3^2,4)"),
];
