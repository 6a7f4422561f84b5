//! Elementary multiplicative number theory: factorization, the standard
//! arithmetic functions omega/mu/phi, divisor enumeration, and the full
//! Kronecker symbol.

/// Prime factorization of a positive integer, with exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: i64,
    /// (prime, exponent) pairs, primes strictly increasing.
    factors: Vec<(i64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn factors(&self) -> &[(i64, u32)] {
        &self.factors
    }

    /// Distinct prime factors, ascending.
    pub fn primes(&self) -> impl Iterator<Item = i64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }
}

/// Exact prime factorization of `n >= 1`. Trial division up to 10^6,
/// Pollard rho beyond that.
pub fn factorize(n: i64) -> Factorization {
    assert!(n >= 1, "factorize: n must be positive, got {n}");
    let mut factors = Vec::new();
    let mut rem = n as u64;
    let mut p: u64 = 2;
    while p <= 1_000_000 && p * p <= rem {
        if rem % p == 0 {
            let mut e = 0;
            while rem % p == 0 {
                rem /= p;
                e += 1;
            }
            factors.push((p as i64, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rem > 1 {
        if rem <= 1_000_000_000_000 || is_prime_u64(rem) {
            // After trial division to 10^6, a remainder below 10^12 is prime.
            factors.push((rem as i64, 1));
        } else {
            let mut large = Vec::new();
            split_composite(rem, &mut large);
            large.sort_unstable();
            let mut i = 0;
            while i < large.len() {
                let q = large[i];
                let mut e = 0;
                while i < large.len() && large[i] == q {
                    e += 1;
                    i += 1;
                }
                factors.push((q as i64, e));
            }
        }
    }
    Factorization { n, factors }
}

fn split_composite(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_composite(d, out);
    split_composite(n / d, out);
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for u64 (standard 7-base set).
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Number of distinct prime divisors.
pub fn omega(n: i64) -> u32 {
    factorize(n).omega()
}

/// omega of the odd part.
pub fn omega_odd(n: i64) -> u32 {
    omega(odd_part(n))
}

pub fn odd_part(n: i64) -> i64 {
    assert!(n >= 1);
    let mut n = n;
    while n % 2 == 0 {
        n /= 2;
    }
    n
}

/// Moebius function.
pub fn mu(n: i64) -> i64 {
    let f = factorize(n);
    if !f.is_squarefree() {
        return 0;
    }
    if f.omega() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler totient.
pub fn phi(n: i64) -> i64 {
    let mut result = n;
    for p in factorize(n).primes() {
        result = result / p * (p - 1);
    }
    result
}

pub fn is_squarefree(n: i64) -> bool {
    n >= 1 && factorize(n).is_squarefree()
}

/// All positive divisors of `n >= 1`, ascending.
pub fn divisors(n: i64) -> Vec<i64> {
    let f = factorize(n);
    let mut divs = vec![1i64];
    for &(p, e) in f.factors() {
        let prev = divs.clone();
        let mut pe = 1i64;
        for _ in 0..e {
            pe *= p;
            divs.extend(prev.iter().map(|d| d * pe));
        }
    }
    divs.sort_unstable();
    divs
}

/// Full Kronecker symbol (a/n), with the usual conventions for n <= 0.
pub fn kronecker(a: i64, n: i64) -> i64 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut sign = 1i64;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    // Pull out the factor of 2 from n: (a/2) depends on a mod 8.
    let mut two_count = 0;
    while n % 2 == 0 {
        n /= 2;
        two_count += 1;
    }
    if two_count > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if two_count % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
    }
    // Now n is odd and positive: Jacobi symbol via reciprocity.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}
