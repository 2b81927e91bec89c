//! Reference values published with the bounds, embedded at printed precision.

/// One row of the minimizing-configuration tables (15-digit LP values).
#[derive(Debug, Clone, Copy)]
pub struct ArgminRow {
    pub n: usize,
    pub k: usize,
    pub value: f64,
    pub rho: &'static [usize],
    pub s: &'static [usize],
    pub source: &'static str,
}

macro_rules! row {
    ($n:expr, $k:expr, $v:expr, [$($r:expr),*], [$($s:expr),*], $src:expr) => {
        ArgminRow { n: $n, k: $k, value: $v, rho: &[$($r),*], s: &[$($s),*], source: $src }
    };
}

pub const ARGMIN_ROWS: &[ArgminRow] = &[
    row!(3, 1, 1.7320508075688772, [1, 2, 3], [1, 0, 1], "one-servant minimizers, n=3"),
    row!(4, 1, 2.121320343559643, [1, 2, 4, 3], [1, 0, 1, 0], "one-servant minimizers, n=4"),
    row!(5, 1, 2.7144122731725724, [1, 4, 5, 3, 2], [1, 0, 1, 0, 0], "one-servant minimizers, n=5"),
    row!(6, 1, 2.8660253779249727, [1, 2, 6, 3, 5, 4], [1, 0, 1, 0, 1, 0], "one-servant minimizers, n=6"),
    row!(7, 1, 2.95125017805582, [1, 2, 3, 7, 4, 6, 5], [0, 1, 1, 0, 1, 0, 1], "one-servant minimizers, n=7"),
    row!(8, 1, 3.003207375377086, [1, 2, 3, 8, 4, 6, 5, 7], [0, 1, 1, 0, 1, 0, 1, 0], "one-servant minimizers, n=8"),
    row!(9, 1, 3.218913730099321, [1, 2, 9, 3, 8, 4, 7, 5, 6], [1, 0, 1, 0, 1, 0, 1, 0, 1], "one-servant minimizers, n=9"),
    row!(10, 1, 3.1871244937949434, [1, 2, 10, 3, 9, 4, 8, 6, 7, 5], [1, 0, 1, 0, 1, 0, 1, 0, 1, 0], "one-servant minimizers, n=10"),
    row!(11, 1, 3.3557769107573536, [1, 2, 3, 11, 10, 4, 9, 5, 8, 6, 7], [1, 0, 0, 1, 1, 0, 1, 0, 1, 0, 0], "one-servant minimizers, n=11"),
    row!(12, 1, 3.3848655006886306, [1, 2, 3, 12, 4, 11, 10, 5, 9, 8, 6, 7], [1, 0, 0, 1, 0, 1, 1, 0, 1, 1, 0, 1], "one-servant minimizers, n=12"),
    row!(13, 1, 3.3636191025088142, [1, 2, 13, 3, 4, 12, 5, 11, 6, 7, 9, 8, 10], [0, 1, 0, 1, 1, 0, 1, 0, 1, 1, 0, 1, 0], "one-servant minimizers, n=13"),
    row!(3, 2, 0.8660254037844386, [1, 2, 3], [1, 2, 0], "two-servant minimizers, n=3"),
    row!(4, 2, 1.7071067811865475, [1, 2, 3, 4], [1, 2, 0, 0], "two-servant minimizers, n=4"),
    row!(5, 2, 1.9021130325903068, [1, 2, 3, 5, 4], [1, 2, 0, 1, 2], "two-servant minimizers, n=5"),
    row!(6, 2, 1.9999999999999993, [1, 3, 5, 4, 2, 6], [1, 2, 0, 2, 1, 0], "two-servant minimizers, n=6"),
    row!(7, 2, 2.0834826998207037, [1, 3, 7, 2, 6, 4, 5], [1, 0, 2, 1, 2, 0, 2], "two-servant minimizers, n=7"),
    row!(8, 2, 2.2378405106469064, [1, 3, 2, 8, 4, 5, 7, 6], [1, 2, 0, 1, 2, 2, 1, 0], "two-servant minimizers, n=8"),
    row!(9, 2, 2.3528883263148823, [1, 2, 5, 3, 9, 6, 4, 8, 7], [1, 2, 0, 2, 1, 0, 2, 1, 1], "two-servant minimizers, n=9"),
    row!(10, 2, 2.3781074994199956, [1, 5, 2, 3, 10, 6, 9, 4, 7, 8], [1, 0, 2, 2, 1, 0, 1, 2, 0, 1], "two-servant minimizers, n=10"),
    row!(11, 2, 2.4629185509183094, [1, 2, 9, 3, 11, 8, 10, 4, 6, 5, 7], [1, 2, 0, 2, 1, 0, 1, 2, 0, 2, 0], "two-servant minimizers, n=11"),
    row!(3, 3, 0.8660254037844386, [1, 2, 3], [1, 2, 0], "three-servant minimizers, n=3"),
    row!(4, 3, 1.0, [1, 2, 3, 4], [1, 2, 3, 0], "three-servant minimizers, n=4"),
    row!(5, 3, 1.5388417685876266, [1, 2, 5, 4, 3], [1, 2, 3, 0, 2], "three-servant minimizers, n=5"),
    row!(6, 3, 1.866025403784437, [1, 3, 5, 4, 6, 2], [1, 2, 3, 2, 3, 1], "three-servant minimizers, n=6"),
    row!(7, 3, 1.8426953904169392, [1, 3, 6, 2, 4, 7, 5], [1, 2, 3, 1, 2, 3, 2], "three-servant minimizers, n=7"),
    row!(8, 3, 1.9134171618254483, [1, 5, 3, 8, 4, 2, 7, 6], [1, 2, 3, 1, 2, 3, 1, 0], "three-servant minimizers, n=8"),
    row!(9, 3, 1.8508331567966465, [1, 2, 4, 6, 5, 3, 9, 8, 7], [1, 2, 3, 0, 3, 2, 1, 1, 0], "three-servant minimizers, n=9"),
    row!(3, 4, 0.8660254037844386, [1, 2, 3], [1, 2, 0], "four-servant minimizers, n=3"),
    row!(4, 4, 1.0, [1, 2, 3, 4], [1, 2, 3, 0], "four-servant minimizers, n=4"),
    row!(5, 4, 0.9510565162951532, [1, 2, 5, 4, 3], [1, 2, 3, 4, 0], "four-servant minimizers, n=5"),
    row!(6, 4, 1.4999999999999991, [1, 4, 6, 5, 2, 3], [1, 2, 3, 4, 1, 2], "four-servant minimizers, n=6"),
    row!(7, 4, 1.6495989607031372, [1, 3, 7, 2, 5, 4, 6], [1, 2, 3, 4, 0, 2, 3], "four-servant minimizers, n=7"),
    row!(8, 4, 1.6892463972414653, [1, 3, 8, 6, 5, 2, 7, 4], [1, 2, 3, 4, 4, 2, 3, 4], "four-servant minimizers, n=8"),
    row!(9, 4, 1.6688480396635432, [1, 3, 5, 9, 4, 2, 8, 6, 7], [1, 2, 3, 4, 2, 1, 4, 3, 3], "four-servant minimizers, n=9"),
    row!(10, 4, 1.618033988749892, [1, 4, 5, 9, 3, 6, 10, 2, 7, 8], [1, 2, 3, 4, 2, 3, 4, 1, 3, 0], "four-servant minimizers, n=10"),
];

pub fn argmin_row(n: usize, k: usize) -> Option<&'static ArgminRow> {
    ARGMIN_ROWS.iter().find(|r| r.n == n && r.k == k)
}

/// One cell pair of the summary table: upper and lower bound, 5 printed digits.
#[derive(Debug, Clone, Copy)]
pub struct SummaryEntry {
    pub n: usize,
    pub k: usize,
    pub upper: Option<f64>,
    pub lower: Option<f64>,
    pub source: &'static str,
}

const fn se(n: usize, k: usize, u: f64, l: f64) -> SummaryEntry {
    SummaryEntry { n, k, upper: Some(u), lower: Some(l), source: "bounds summary" }
}

const fn na(n: usize, k: usize) -> SummaryEntry {
    SummaryEntry { n, k, upper: None, lower: None, source: "bounds summary (NA)" }
}

pub const SUMMARY: &[SummaryEntry] = &[
    se(3, 1, 1.73205, 1.73205),
    se(4, 1, 2.14626, 2.12132),
    se(5, 1, 2.71441, 2.71441),
    se(6, 1, 2.86603, 2.86602),
    se(7, 1, 2.97391, 2.95125),
    se(8, 1, 3.02649, 3.00320),
    se(9, 1, 3.21891, 3.21891),
    se(10, 1, 3.21549, 3.18712),
    se(11, 1, 3.35919, 3.35577),
    se(12, 1, 3.38511, 3.38486),
    se(13, 1, 3.36362, 3.36361),
    se(3, 2, 1.00000, 1.00000),
    se(4, 2, 1.70711, 1.70710),
    se(5, 2, 1.90211, 1.90211),
    se(6, 2, 2.00000, 2.00000),
    se(7, 2, 2.14027, 2.08348),
    se(8, 2, 2.25951, 2.23784),
    se(9, 2, 2.37176, 2.35288),
    se(10, 2, 2.38956, 2.37810),
    se(11, 2, 2.50211, 2.46291),
    se(3, 3, 1.00000, 1.00000),
    se(4, 3, 1.00000, 1.00000),
    se(5, 3, 1.55017, 1.53884),
    se(6, 3, 2.00000, 1.86602),
    se(7, 3, 1.86777, 1.84269),
    se(8, 3, 1.91342, 1.91341),
    se(9, 3, 1.91362, 1.85083),
    na(10, 3),
    na(11, 3),
    se(3, 4, 1.00000, 1.00000),
    se(4, 4, 1.00000, 1.00000),
    se(5, 4, 1.00000, 1.00000),
    se(6, 4, 1.50000, 1.50000),
    se(7, 4, 1.64960, 1.64959),
    se(8, 4, 1.76537, 1.68924),
    se(9, 4, 1.68404, 1.66884),
    se(10, 4, 1.65153, 1.61803),
    na(11, 4),
];

pub fn summary(n: usize, k: usize) -> Option<&'static SummaryEntry> {
    SUMMARY.iter().find(|e| e.n == n && e.k == k)
}

/// Disk lower bounds derived from polygon bounds; `None` marks an NA cell.
#[derive(Debug, Clone, Copy)]
pub struct DiskEntry {
    pub n: usize,
    pub k: usize,
    pub value: Option<f64>,
}

const fn de(n: usize, k: usize, v: f64) -> DiskEntry {
    DiskEntry { n, k, value: Some(v) }
}

const fn dna(n: usize, k: usize) -> DiskEntry {
    DiskEntry { n, k, value: None }
}

pub const DISK_TABLE: &[DiskEntry] = &[
    de(6, 1, 4.38962),
    de(7, 1, 4.40005),
    de(8, 1, 4.3959),
    de(9, 1, 4.56798),
    de(10, 1, 4.50128),
    de(11, 1, 4.64138),
    de(12, 1, 4.64666),
    de(13, 1, 4.60528),
    de(6, 2, 3.34907),
    de(7, 2, 3.38268),
    de(8, 2, 3.49964),
    de(9, 2, 3.5856),
    de(10, 2, 3.58755),
    de(11, 2, 3.65332),
    dna(12, 2),
    dna(13, 2),
    de(6, 3, 3.12782),
    de(7, 3, 3.06709),
    de(8, 3, 3.10977),
    de(9, 3, 3.02537),
    de(10, 3, 3.10814),
    dna(11, 3),
    dna(12, 3),
    dna(13, 3),
    de(6, 4, 2.70944),
    de(7, 4, 2.82912),
    de(8, 4, 2.84633),
    de(9, 4, 2.80847),
    de(10, 4, 2.74369),
    dna(11, 4),
    dna(12, 4),
    dna(13, 4),
];

/// Best disk lower bounds per k (k=1, k=2).
pub const BEST_DISK: &[(usize, usize, f64)] = &[(1, 12, 4.64666), (2, 11, 3.65332)];

/// Previously known disk bounds, for report context only: (k, upper, lower).
pub const PRIOR_DISK: &[(usize, f64, f64)] =
    &[(1, 4.81854, 4.56798), (2, 3.8327, 3.6307), (3, 3.3738, 3.2017), (4, 3.30129, 2.91322)];
