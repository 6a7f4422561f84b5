//! Refined dimension formulas for the new subspace of squarefree level:
//! total dimension, the split by global root number, and the subspaces cut
//! out by Atkin-Lehner sign patterns.

use num_rational::Rational64;
use num_traits::Zero;

use crate::arith::{divisors, factorize, is_squarefree, kronecker, mu, odd_part, omega, omega_odd, phi};
use crate::error::{Error, Result};
use crate::quadratic::{field_discriminant, h_prime};
use crate::traces::{b_coeff, new_trace, TraceQuery};

/// An assignment of +-1 to each prime of a squarefree modulus M > 1,
/// extended multiplicatively to the divisors of M.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern {
    modulus: i64,
    primes: Vec<i64>,
    signs: Vec<i8>,
}

impl SignPattern {
    pub fn new(modulus: i64, signs: Vec<i8>) -> Result<Self> {
        if modulus <= 1 || !is_squarefree(modulus) {
            return Err(Error::InvalidInput(format!(
                "sign-pattern modulus must be squarefree and > 1, got {modulus}"
            )));
        }
        let primes: Vec<i64> = factorize(modulus).primes().collect();
        if signs.len() != primes.len() || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidInput(format!(
                "need one sign of +-1 per prime of {modulus} ({} primes)",
                primes.len()
            )));
        }
        Ok(SignPattern {
            modulus,
            primes,
            signs,
        })
    }

    /// Parse a '+'/'-' string indexed by the ascending primes of M.
    pub fn parse(s: &str, modulus: i64) -> Result<Self> {
        let signs: Vec<i8> = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(Error::InvalidInput(format!(
                    "pattern must consist of '+' and '-', got {s:?}"
                ))),
            })
            .collect::<Result<_>>()?;
        SignPattern::new(modulus, signs)
    }

    /// All 2^omega(M) patterns in a fixed order: '+' before '-' at each
    /// position, most significant position first ("++", "+-", "-+", "--").
    pub fn all_for_modulus(modulus: i64) -> Result<Vec<SignPattern>> {
        let probe = SignPattern::new(modulus, vec![1; omega(modulus) as usize])?;
        let w = probe.primes.len();
        let mut out = Vec::with_capacity(1 << w);
        for bits in 0..1u32 << w {
            let signs = (0..w)
                .map(|i| if bits >> (w - 1 - i) & 1 == 0 { 1 } else { -1 })
                .collect();
            out.push(SignPattern::new(modulus, signs)?);
        }
        Ok(out)
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    /// Multiplicative extension: eps(d) for d | M.
    pub fn eval(&self, d: i64) -> i64 {
        assert!(d >= 1 && self.modulus % d == 0, "eval: d must divide M");
        self.primes
            .iter()
            .zip(&self.signs)
            .filter(|(p, _)| d % **p == 0)
            .map(|(_, &s)| s as i64)
            .product()
    }

    pub fn is_all_minus(&self) -> bool {
        self.signs.iter().all(|&s| s == -1)
    }
}

impl std::fmt::Display for SignPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &s in &self.signs {
            write!(f, "{}", if s == 1 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

/// Per-pattern dimensions of S_k^new(N) for a fixed sign modulus M.
#[derive(Debug, Clone)]
pub struct DimensionBreakdown {
    pub level: i64,
    pub weight: i64,
    pub modulus: i64,
    pub entries: Vec<(SignPattern, i64)>,
    pub total: i64,
}

fn validate_level_weight(n: i64, k: i64) -> Result<()> {
    if n <= 1 || !is_squarefree(n) {
        return Err(Error::InvalidInput(format!(
            "level must be squarefree and > 1, got {n}"
        )));
    }
    if k < 2 || k % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "weight must be even and >= 2, got {k}"
        )));
    }
    Ok(())
}

/// dim S_k^new(N) for squarefree N > 1 and even k >= 2.
pub fn dim_new(n: i64, k: i64) -> Result<i64> {
    validate_level_weight(n, k)?;
    let mut total = Rational64::new((k - 1) * phi(n), 12);
    let c4 = Rational64::new(1, 4) + Rational64::from_integer(k / 4) - Rational64::new(k, 4);
    let prod4: i64 = factorize(n).primes().map(|p| kronecker(-4, p) - 1).product();
    total += c4 * Rational64::from_integer(prod4);
    let c3 = Rational64::new(1, 3) + Rational64::from_integer(k / 3) - Rational64::new(k, 3);
    let prod3: i64 = factorize(n).primes().map(|p| kronecker(p, 3) - 1).product();
    total += c3 * Rational64::from_integer(prod3);
    if k == 2 {
        total += Rational64::from_integer(mu(n));
    }
    let dim = crate::traces::require_integer(total, "dim S_k^new(N)")?;
    if dim < 0 {
        return Err(Error::Internal(format!("negative dimension {dim} at N={n}, k={k}")));
    }
    Ok(dim)
}

/// Global root number: (-1)^{k/2} times the W_N eigenvalue.
pub fn root_number(k: i64, eps_n: i64) -> i64 {
    assert!(k % 2 == 0);
    assert!(eps_n == 1 || eps_n == -1);
    if (k / 2) % 2 == 0 {
        eps_n
    } else {
        -eps_n
    }
}

/// Dimensions of the subspaces with root number +1 and -1:
/// (1/2)(dim +- (-1)^{k/2} tr W_N).
pub fn dim_plus_minus(n: i64, k: i64) -> Result<(i64, i64)> {
    let total = dim_new(n, k)?;
    let tr = new_trace(&TraceQuery::new(n, n, k)?)?;
    let signed = root_number(k, 1) * tr;
    if (total + signed) % 2 != 0 {
        return Err(Error::Internal(format!(
            "dimension {total} and trace {tr} have mismatched parity at N={n}, k={k}"
        )));
    }
    let plus = (total + signed) / 2;
    let minus = (total - signed) / 2;
    if plus < 0 || minus < 0 {
        return Err(Error::Internal(format!(
            "negative signed dimension ({plus}, {minus}) at N={n}, k={k}"
        )));
    }
    Ok((plus, minus))
}

/// dim of the subspace with Atkin-Lehner signs eps(p) for p | M:
/// 2^{-omega(M)} sum over d | M of eps(d) tr W_d (d = 1 giving the identity).
pub fn dim_sign_pattern(n: i64, k: i64, eps: &SignPattern) -> Result<i64> {
    validate_level_weight(n, k)?;
    let m = eps.modulus();
    if n % m != 0 {
        return Err(Error::InvalidInput(format!(
            "sign modulus {m} must divide the level {n}"
        )));
    }
    let mut sum = dim_new(n, k)?;
    for d in divisors(m) {
        if d == 1 {
            continue;
        }
        sum += eps.eval(d) * new_trace(&TraceQuery::new(n, d, k)?)?;
    }
    let denom = 1i64 << omega(m);
    if sum % denom != 0 || sum < 0 {
        return Err(Error::Internal(format!(
            "sign-pattern dimension sum {sum} not a nonnegative multiple of {denom} at N={n}, k={k}, eps={eps}"
        )));
    }
    Ok(sum / denom)
}

/// Closed-form evaluation of `dim_sign_pattern`, valid under the simplifying
/// hypotheses: (i) 2 does not divide M, or (-4/p) = 1 for some p | N/M;
/// (ii) 3 does not divide M, or (-3/p) = 1 for some odd p | N/M.
pub fn dim_sign_pattern_closed(n: i64, k: i64, eps: &SignPattern) -> Result<i64> {
    validate_level_weight(n, k)?;
    let m = eps.modulus();
    if n % m != 0 {
        return Err(Error::InvalidInput(format!(
            "sign modulus {m} must divide the level {n}"
        )));
    }
    let cof = n / m;
    if m % 2 == 0 && !factorize(cof).primes().any(|p| kronecker(-4, p) == 1) {
        return Err(Error::HypothesisNotSatisfied(format!(
            "2 | M and no p | {cof} with (-4/p) = 1"
        )));
    }
    if m % 3 == 0 && !factorize(odd_part(cof)).primes().any(|p| kronecker(-3, p) == 1) {
        return Err(Error::HypothesisNotSatisfied(format!(
            "3 | M and no odd p | {cof} with (-3/p) = 1"
        )));
    }

    let mut sum = Rational64::zero();
    for d in divisors(m) {
        if d == 1 {
            continue;
        }
        // S: divisors d of M inert at every odd prime of N/d.
        let delta_d = field_discriminant(d)?;
        let in_s = factorize(odd_part(n / d))
            .primes()
            .all(|p| kronecker(delta_d.value(), p) == -1);
        if !in_s {
            continue;
        }
        let w = omega_odd(n / d);
        let term = Rational64::from_integer(eps.eval(d))
            * h_prime(delta_d)
            * Rational64::from_integer(b_coeff(d, (n / d) % 2 == 0))
            * Rational64::from_integer((-2i64).pow(w));
        sum += term;
    }
    let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
    let mut total = Rational64::from_integer(dim_new(n, k)?) + Rational64::new(sign, 2) * sum;
    if k == 2 {
        let prod: i64 = factorize(m).primes().map(|p| 1 - eps.eval(p)).product();
        let sgn = if omega(n) % 2 == 0 { 1 } else { -1 };
        total += Rational64::from_integer(sgn * (prod - 1));
    }
    total /= Rational64::from_integer(1i64 << omega(m));
    let dim = crate::traces::require_integer(total, "closed-form sign-pattern dimension")?;
    if dim < 0 {
        return Err(Error::Internal(format!(
            "negative closed-form dimension {dim} at N={n}, k={k}, eps={eps}"
        )));
    }
    Ok(dim)
}

/// Full breakdown of S_k^new(N) by sign pattern for modulus M | N.
pub fn breakdown(n: i64, k: i64, m: i64) -> Result<DimensionBreakdown> {
    let total = dim_new(n, k)?;
    let mut entries = Vec::new();
    let mut sum = 0;
    for eps in SignPattern::all_for_modulus(m)? {
        if n % m != 0 {
            return Err(Error::InvalidInput(format!("M={m} must divide N={n}")));
        }
        let dim = dim_sign_pattern(n, k, &eps)?;
        sum += dim;
        entries.push((eps, dim));
    }
    if sum != total {
        return Err(Error::Internal(format!(
            "pattern dimensions sum to {sum}, expected {total} at N={n}, k={k}, M={m}"
        )));
    }
    Ok(DimensionBreakdown {
        level: n,
        weight: k,
        modulus: m,
        entries,
        total,
    })
}
