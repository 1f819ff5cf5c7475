//! Published wedge-flow cases and their discretization settings.
//!
//! Each row carries the `(N, k, l)` used to produce the published wall
//! shear `f''(0)`, so a table can be re-run with one call.

/// One published case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableCase {
    pub m: f64,
    pub magnetic: f64,
    pub order: usize,
    pub k: f64,
    pub l: f64,
    /// Published `f''(0)`.
    pub published: f64,
}

const fn case(m: f64, magnetic: f64, order: usize, k: f64, l: f64, published: f64) -> TableCase {
    TableCase {
        m,
        magnetic,
        order,
        k,
        l,
        published,
    }
}

/// Decelerating wedge, `m = -3/5`.
pub const DECELERATING: [TableCase; 5] = [
    case(-0.6, 5.0, 20, 2.0, 1.658, 4.60075494),
    case(-0.6, 10.0, 15, 2.0, 1.296, 9.80646420),
    case(-0.6, 15.0, 15, 1.0, 1.089, 14.87167484),
    case(-0.6, 20.0, 15, 1.0, 1.0, 19.90393701),
    case(-0.6, 50.0, 20, 2.0, 1.336, 49.96165233),
];

/// Accelerating wedge, `m = 2`.
pub const ACCELERATING: [TableCase; 4] = [
    case(2.0, 5.0, 30, 3.0, 1.194, 5.19095945),
    case(2.0, 10.0, 30, 2.0, 1.112, 10.09677545),
    case(2.0, 50.0, 30, 2.0, 0.904, 50.01944071),
    case(2.0, 100.0, 30, 2.0, 0.616, 100.00972170),
];

/// Name accepted by the command line for these tables.
pub const PAPER_TABLES: &str = "paper-tables";

/// All published cases, decelerating table first.
pub fn published_cases() -> Vec<TableCase> {
    DECELERATING
        .iter()
        .chain(ACCELERATING.iter())
        .copied()
        .collect()
}

/// Looks up the published row for `(m, M)`.
pub fn find(m: f64, magnetic: f64) -> Option<TableCase> {
    published_cases()
        .into_iter()
        .find(|c| (c.m - m).abs() < 1e-9 && (c.magnetic - magnetic).abs() < 1e-9)
}
