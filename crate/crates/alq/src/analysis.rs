//! Distribution analytics on top of the trace and dimension engines: the
//! root-number bias, perfect-equidistribution detection, sign-pattern bias
//! and occurrence counts, Galois-orbit lower bounds, and the scan driver
//! behind the CLI reports.

use num_rational::Rational64;
use num_traits::Signed;
use rayon::prelude::*;

use crate::arith::{divisors, factorize, is_squarefree, odd_part, omega, kronecker, phi};
use crate::dimensions::{breakdown, dim_plus_minus, SignPattern};
use crate::error::{Error, Result};
use crate::quadratic::{class_number, field_discriminant};
use crate::report::{Cell, Table};
use crate::traces::{b_coeff, new_trace_bound, TraceQuery};

/// The plus/minus split at a single (N, k), with the class-number term that
/// controls its defect.
#[derive(Debug, Clone)]
pub struct BiasReport {
    pub level: i64,
    pub weight: i64,
    pub dim_plus: i64,
    pub dim_minus: i64,
    pub defect: i64,
    /// c_N = b(N, 1)/2, one of 1/2, 1, 2; the defect is c_N h(D_N) for k >= 4.
    pub c_n: Rational64,
    pub class_number: i64,
}

pub fn bias_report(n: i64, k: i64) -> Result<BiasReport> {
    let (dim_plus, dim_minus) = dim_plus_minus(n, k)?;
    let defect = dim_plus - dim_minus;
    if defect < 0 {
        return Err(Error::Internal(format!(
            "minus space larger than plus space at N={n}, k={k}"
        )));
    }
    let c_n = Rational64::new(b_coeff(n, false), 2);
    let h = class_number(field_discriminant(n)?);
    if k >= 4 && n > 3 && Rational64::from_integer(defect) != c_n * Rational64::from_integer(h) {
        return Err(Error::Internal(format!(
            "defect {defect} != c_N h = {} at N={n}, k={k}",
            c_n * Rational64::from_integer(h)
        )));
    }
    Ok(BiasReport {
        level: n,
        weight: k,
        dim_plus,
        dim_minus,
        defect,
        c_n,
        class_number: h,
    })
}

/// True when both root numbers occur equally often in S_k^new(N).
pub fn perfect_equidistribution(n: i64, k: i64) -> Result<bool> {
    let (p, m) = dim_plus_minus(n, k)?;
    Ok(p == m)
}

/// Outcome of checking the all-minus bias on a fixed space.
#[derive(Debug, Clone)]
pub struct PatternBiasOutcome {
    pub level: i64,
    pub weight: i64,
    pub modulus: i64,
    /// True when k/2 + omega(N) is even: the all-minus pattern is maximal;
    /// otherwise minimal.
    pub minus_is_max: bool,
    pub dims: Vec<(SignPattern, i64)>,
    /// Non-strict inequality against every other pattern.
    pub holds: bool,
    /// Strict against at least one pattern (only claimed when M = N).
    pub strict: bool,
}

/// Checks the bias toward (or away from) the all-minus pattern: for k >= 4
/// and odd squarefree M | N with M > 3, the all-minus subspace is largest
/// when k/2 + omega(N) is even and smallest when odd.
pub fn pattern_bias_check(n: i64, k: i64, m: i64) -> Result<PatternBiasOutcome> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::HypothesisNotSatisfied(format!("requires even k >= 4, got {k}")));
    }
    if n % 2 == 0 || m % 2 == 0 || m <= 3 || n % m != 0 || !is_squarefree(n) {
        return Err(Error::HypothesisNotSatisfied(format!(
            "requires odd squarefree M | N with M > 3, got M={m}, N={n}"
        )));
    }
    if m % 3 == 0
        && !factorize(odd_part(n / m))
            .primes()
            .any(|p| kronecker(-3, p) == 1)
    {
        return Err(Error::HypothesisNotSatisfied(format!(
            "3 | M and no odd p | {} with (-3/p) = 1",
            n / m
        )));
    }
    let minus_is_max = (k / 2 + omega(n) as i64) % 2 == 0;
    let b = breakdown(n, k, m)?;
    let minus_dim = b
        .entries
        .iter()
        .find(|(e, _)| e.is_all_minus())
        .map(|(_, d)| *d)
        .expect("all-minus pattern is always enumerated");
    let mut holds = true;
    let mut strict = false;
    for (eps, dim) in &b.entries {
        if eps.is_all_minus() {
            continue;
        }
        let ok = if minus_is_max {
            minus_dim >= *dim
        } else {
            minus_dim <= *dim
        };
        holds &= ok;
        strict |= minus_dim != *dim;
    }
    if m == n {
        strict &= holds;
    } else {
        strict = false;
    }
    Ok(PatternBiasOutcome {
        level: n,
        weight: k,
        modulus: m,
        minus_is_max,
        dims: b.entries,
        holds,
        strict,
    })
}

/// True when the primes of N/M force perfect equidistribution of sign
/// patterns for M: every divisor d > 1 of M has (D_d/p) = 1 for some odd
/// prime p | N/M, and additionally (-4/p) = 1 for some such p when M is
/// even. When true, all 2^omega(M) pattern dimensions coincide.
pub fn equidistributing_primes_check(n: i64, k: i64, m: i64) -> Result<bool> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::InvalidInput(format!("requires even k >= 4, got {k}")));
    }
    if m <= 1 || n % m != 0 {
        return Err(Error::InvalidInput(format!("M={m} must divide N={n} with M > 1")));
    }
    let witnesses: Vec<i64> = factorize(odd_part(n / m)).primes().collect();
    for d in divisors(m) {
        if d == 1 {
            continue;
        }
        let delta_d = field_discriminant(d)?;
        if !witnesses.iter().any(|&p| kronecker(delta_d.value(), p) == 1) {
            return Ok(false);
        }
    }
    if m % 2 == 0 && !witnesses.iter().any(|&p| kronecker(-4, p) == 1) {
        return Ok(false);
    }
    Ok(true)
}

/// Sign-pattern occurrence count at modulus N, with the weight threshold
/// above which every pattern is guaranteed to occur.
#[derive(Debug, Clone)]
pub struct OrbitBound {
    pub level: i64,
    pub weight: i64,
    /// Number of sign patterns with a nonzero subspace; a lower bound on
    /// the number of Galois orbits.
    pub patterns_occurring: i64,
    pub max_patterns: i64,
    pub k_threshold: Rational64,
    pub h_max: i64,
}

/// H_M = max h(D_d) over divisors d > 1 of M.
pub fn max_class_number(m: i64) -> Result<i64> {
    divisors(m)
        .into_iter()
        .filter(|&d| d > 1)
        .map(|d| Ok(class_number(field_discriminant(d)?)))
        .try_fold(0i64, |acc, h: Result<i64>| Ok(acc.max(h?)))
}

/// K_{N,M} = (24 (3^omega(N) - 2^omega(N_odd)) H_M + 10 * 2^omega(N)) / phi(N) + 1.
pub fn k_threshold(n: i64, m: i64) -> Result<Rational64> {
    if n <= 1 || !is_squarefree(n) || m <= 1 || n % m != 0 {
        return Err(Error::InvalidInput(format!(
            "k_threshold requires squarefree N > 1 and M | N with M > 1, got N={n}, M={m}"
        )));
    }
    let h = max_class_number(m)?;
    let three_pow = 3i64.pow(omega(n));
    let two_pow_odd = 1i64 << omega(odd_part(n));
    let two_pow = 1i64 << omega(n);
    Ok(Rational64::new(24 * (three_pow - two_pow_odd) * h + 10 * two_pow, phi(n))
        + Rational64::from_integer(1))
}

pub fn patterns_occurring(n: i64, k: i64) -> Result<OrbitBound> {
    let b = breakdown(n, k, n)?;
    let occurring = b.entries.iter().filter(|(_, d)| *d > 0).count() as i64;
    Ok(OrbitBound {
        level: n,
        weight: k,
        patterns_occurring: occurring,
        max_patterns: 1i64 << omega(n),
        k_threshold: k_threshold(n, n)?,
        h_max: max_class_number(n)?,
    })
}

/// True when both Atkin-Lehner signs occur in S_k^new(p) for prime p.
pub fn prime_sign_occurrence(p: i64, k: i64) -> Result<bool> {
    if factorize(p).factors() != [(p, 1)] {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let (plus, minus) = dim_plus_minus(p, k)?;
    Ok(plus > 0 && minus > 0)
}

/// Exact bound on |dim_sign_pattern - dim_new / 2^omega(M)|:
/// 2^{-omega(M)} times the sum of the trace bounds over 1 < d | M.
pub fn pattern_defect_bound(n: i64, k: i64, m: i64) -> Result<Rational64> {
    let mut sum = 0i64;
    for d in divisors(m) {
        if d == 1 {
            continue;
        }
        sum += new_trace_bound(&TraceQuery::new(n, d, k)?)?;
    }
    Ok(Rational64::new(sum, 1i64 << omega(m)))
}

/// Which modulus the scan uses at each level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MMode {
    /// M = N at every level.
    Full,
    /// A fixed M; levels not divisible by M are skipped.
    Fixed(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportKind {
    Dims,
    Bias,
    Equidist,
    Orbits,
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub levels: (i64, i64),
    pub weights: (i64, i64),
    pub m_mode: MMode,
    pub report: ReportKind,
}

/// Runs a scan over the requested ranges and assembles the report table.
/// Rows are ordered by level, then weight, then pattern, independent of
/// how many workers evaluate the cells.
pub fn scan(cfg: &ScanConfig) -> Result<Table> {
    let (lo_n, hi_n) = cfg.levels;
    let (lo_k, hi_k) = cfg.weights;
    if lo_n > hi_n || lo_k > hi_k {
        return Err(Error::InvalidInput(format!(
            "empty scan range: levels {lo_n}..{hi_n}, weights {lo_k}..{hi_k}"
        )));
    }
    let levels: Vec<i64> = (lo_n.max(2)..=hi_n)
        .filter(|&n| is_squarefree(n))
        .filter(|&n| match cfg.m_mode {
            MMode::Full => true,
            MMode::Fixed(m) => n % m == 0,
        })
        .collect();
    let weights: Vec<i64> = (lo_k..=hi_k).filter(|k| k % 2 == 0 && *k >= 2).collect();
    if weights.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no even weights >= 2 in {lo_k}..{hi_k}"
        )));
    }
    let cells: Vec<(i64, i64)> = levels
        .iter()
        .flat_map(|&n| weights.iter().map(move |&k| (n, k)))
        .collect();

    let headers = match cfg.report {
        ReportKind::Dims => vec!["level", "weight", "m", "pattern", "dim", "main_term", "defect"],
        ReportKind::Bias => vec![
            "level",
            "weight",
            "dim_plus",
            "dim_minus",
            "defect",
            "c_n",
            "class_number",
            "perfect",
        ],
        ReportKind::Equidist => vec![
            "level", "weight", "m", "pattern", "dim", "main_term", "defect", "predicted_equal",
        ],
        ReportKind::Orbits => vec![
            "level",
            "weight",
            "patterns_occurring",
            "max_patterns",
            "both_signs",
            "k_threshold",
            "h_max",
        ],
    };

    let chunks: Vec<Result<Vec<Vec<Cell>>>> = cells
        .par_iter()
        .map(|&(n, k)| scan_cell(cfg, n, k))
        .collect();
    let mut rows = Vec::new();
    for chunk in chunks {
        rows.extend(chunk?);
    }
    Ok(Table { headers, rows })
}

fn scan_cell(cfg: &ScanConfig, n: i64, k: i64) -> Result<Vec<Vec<Cell>>> {
    let m = match cfg.m_mode {
        MMode::Full => n,
        MMode::Fixed(m) => m,
    };
    match cfg.report {
        ReportKind::Dims | ReportKind::Equidist => {
            let b = breakdown(n, k, m)?;
            let main_term = Rational64::new((k - 1) * phi(n), (1i64 << omega(m)) * 12);
            let share = Rational64::new(b.total, 1i64 << omega(m));
            let bound = pattern_defect_bound(n, k, m)?;
            let predicted = if cfg.report == ReportKind::Equidist && k >= 4 {
                Some(equidistributing_primes_check(n, k, m)?)
            } else {
                None
            };
            let mut rows = Vec::with_capacity(b.entries.len());
            for (eps, dim) in &b.entries {
                let defect = Rational64::from_integer(*dim) - share;
                if defect.abs() > bound {
                    return Err(Error::Internal(format!(
                        "defect {defect} exceeds bound {bound} at N={n}, k={k}, eps={eps}"
                    )));
                }
                if predicted == Some(true) && *dim != b.entries[0].1 {
                    return Err(Error::Internal(format!(
                        "predicted equidistribution fails at N={n}, k={k}, M={m}"
                    )));
                }
                let mut row = vec![
                    Cell::Int(n),
                    Cell::Int(k),
                    Cell::Int(m),
                    Cell::Str(eps.to_string()),
                    Cell::Int(*dim),
                    Cell::Rat(main_term),
                    Cell::Rat(defect),
                ];
                if cfg.report == ReportKind::Equidist {
                    row.push(Cell::Bool(predicted.unwrap_or(false)));
                }
                rows.push(row);
            }
            Ok(rows)
        }
        ReportKind::Bias => {
            let r = bias_report(n, k)?;
            Ok(vec![vec![
                Cell::Int(n),
                Cell::Int(k),
                Cell::Int(r.dim_plus),
                Cell::Int(r.dim_minus),
                Cell::Int(r.defect),
                Cell::Rat(r.c_n),
                Cell::Int(r.class_number),
                Cell::Bool(r.defect == 0),
            ]])
        }
        ReportKind::Orbits => {
            let ob = patterns_occurring(n, k)?;
            let (plus, minus) = dim_plus_minus(n, k)?;
            Ok(vec![vec![
                Cell::Int(n),
                Cell::Int(k),
                Cell::Int(ob.patterns_occurring),
                Cell::Int(ob.max_patterns),
                Cell::Bool(plus > 0 && minus > 0),
                Cell::Rat(ob.k_threshold),
                Cell::Int(ob.h_max),
            ]])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bias_report_examples() {
        assert_eq!(bias_report(37, 2).unwrap().defect, 0);
        assert_eq!(bias_report(37, 4).unwrap().defect, 1);
        for k in [4, 6, 10, 20] {
            for n in [5, 6, 7, 10, 13, 22, 37, 58] {
                assert_eq!(bias_report(n, k).unwrap().defect, 1, "N={n} k={k}");
            }
        }
    }

    #[test]
    fn perfect_equidistribution_examples() {
        assert!(perfect_equidistribution(2, 12).unwrap());
        assert!(perfect_equidistribution(3, 10).unwrap());
        assert!(perfect_equidistribution(58, 2).unwrap());
        assert!(!perfect_equidistribution(58, 4).unwrap());
    }

    #[test]
    fn pattern_bias_level_35() {
        let out = pattern_bias_check(35, 4, 35).unwrap();
        assert!(out.minus_is_max && out.holds && out.strict);
        let minus = out.dims.iter().find(|(e, _)| e.is_all_minus()).unwrap();
        assert_eq!(minus.1, 3);

        let out6 = pattern_bias_check(35, 6, 35).unwrap();
        assert!(!out6.minus_is_max && out6.holds && out6.strict);
        let minus6 = out6.dims.iter().find(|(e, _)| e.is_all_minus()).unwrap();
        assert_eq!(minus6.1, 1);

        let out105 = pattern_bias_check(105, 4, 35).unwrap();
        assert!(out105.holds);

        assert!(pattern_bias_check(35, 2, 35).is_err());
        assert!(pattern_bias_check(70, 4, 35).is_err());
    }

    #[test]
    fn equidistributing_primes_examples() {
        assert!(equidistributing_primes_check(390, 4, 10).unwrap());
        assert!(!equidistributing_primes_check(10, 4, 10).unwrap());
        assert!(!equidistributing_primes_check(30, 4, 10).unwrap());
        // The even-M witness for (-4/p): without a 1 mod 4 prime in N/M the
        // M = 2 correction term survives even though (D_2/3) = 1.
        assert!(!equidistributing_primes_check(6, 4, 2).unwrap());
        let b = breakdown(6, 4, 2).unwrap();
        assert_ne!(b.entries[0].1, b.entries[1].1);
    }

    #[test]
    fn orbit_counts() {
        assert_eq!(patterns_occurring(35, 6).unwrap().patterns_occurring, 4);
        assert_eq!(patterns_occurring(35, 4).unwrap().patterns_occurring, 3);
        let ob17 = patterns_occurring(17, 6).unwrap();
        assert_eq!((ob17.patterns_occurring, ob17.max_patterns), (2, 2));
    }

    #[test]
    fn k_threshold_values() {
        assert_eq!(k_threshold(5, 5).unwrap(), Rational64::from_integer(18));
        let h35 = max_class_number(35).unwrap();
        assert_eq!(
            k_threshold(35, 35).unwrap(),
            Rational64::new(24 * 5 * h35 + 40, 24) + Rational64::from_integer(1)
        );
    }

    #[test]
    fn prime_sign_occurrence_examples() {
        assert!(prime_sign_occurrence(5, 8).unwrap());
        assert!(!prime_sign_occurrence(5, 6).unwrap());
        assert!(!prime_sign_occurrence(71, 2).unwrap());
        assert!(prime_sign_occurrence(73, 2).unwrap());
        assert!(prime_sign_occurrence(37, 2).unwrap());
        assert!(prime_sign_occurrence(4, 2).is_err());
    }

    #[test]
    fn scan_rejects_empty_ranges() {
        let cfg = ScanConfig {
            levels: (10, 2),
            weights: (2, 20),
            m_mode: MMode::Full,
            report: ReportKind::Dims,
        };
        assert!(scan(&cfg).is_err());
        let cfg2 = ScanConfig {
            levels: (2, 10),
            weights: (3, 3),
            m_mode: MMode::Full,
            report: ReportKind::Dims,
        };
        assert!(scan(&cfg2).is_err());
    }

    #[test]
    fn scan_single_cell_reproduces_breakdown() {
        let cfg = ScanConfig {
            levels: (35, 35),
            weights: (4, 4),
            m_mode: MMode::Full,
            report: ReportKind::Dims,
        };
        let table = scan(&cfg).unwrap();
        let dims: Vec<(String, i64)> = table
            .rows
            .iter()
            .map(|r| {
                let Cell::Str(p) = &r[3] else { panic!() };
                let Cell::Int(d) = r[4] else { panic!() };
                (p.clone(), d)
            })
            .collect();
        assert_eq!(
            dims,
            vec![
                ("++".into(), 2),
                ("+-".into(), 1),
                ("-+".into(), 0),
                ("--".into(), 3)
            ]
        );
    }
}
