//! Small number-theoretic helpers shared across the crate.
//!
//! All routines are exact `u64`/`u128` arithmetic; sizes stay modest (the largest
//! numbers factored are of order `p² − 1` for primes up to a few thousand), so
//! trial division is fine.

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Least common multiple; panics on overflow (never reached at the scales used).
pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    let g = gcd(a, b);
    let wide = (a / g) as u128 * b as u128;
    u64::try_from(wide).expect("lcm overflow")
}

/// Deterministic primality test by trial division (inputs are ≤ ~10⁹ in practice).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut f = 5u64;
    while f.saturating_mul(f) <= n {
        if n % f == 0 || n % (f + 2) == 0 {
            return false;
        }
        f += 6;
    }
    true
}

/// Prime factorization `n = Π pᵏ` as `(p, k)` pairs in increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, k: u32| {
        if k > 0 {
            out.push((p, k));
        }
    };
    for p in [2u64, 3] {
        let mut k = 0;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        push(p, k);
    }
    let mut f = 5u64;
    while f.saturating_mul(f) <= n {
        for p in [f, f + 2] {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            push(p, k);
        }
        f += 6;
    }
    if n > 1 {
        push(n, 1);
    }
    out
}

/// All primes `≤ n` by sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    out
}

/// `b^e mod m` for `m ≥ 1`.
pub fn mod_pow(b: u64, mut e: u64, m: u64) -> u64 {
    assert!(m >= 1);
    let mut acc: u128 = 1;
    let m128 = m as u128;
    let mut b128 = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b128 % m128;
        }
        b128 = b128 * b128 % m128;
        e >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m` (requires `gcd(a, m) = 1`).
pub fn mod_inv(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    assert!(old_r == 1, "mod_inv of non-unit");
    (old_s.rem_euclid(m as i128)) as u64
}

/// Merge the factorization of `n` into `acc` with multiplicity `sign` per prime power.
///
/// Used to factor products like `p²q²(p² − 1)(q² − 1)/d` piecewise without ever
/// factoring the (possibly ~10¹⁷-sized) product itself.
pub fn accumulate_factors(acc: &mut std::collections::BTreeMap<u64, i64>, n: u64, sign: i64) {
    for (p, k) in factorize(n) {
        *acc.entry(p).or_insert(0) += sign * k as i64;
    }
}

/// Finalize an exponent map produced by [`accumulate_factors`], asserting all
/// exponents are non-negative (i.e. the implied division was exact).
pub fn finish_factors(acc: std::collections::BTreeMap<u64, i64>) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for (p, k) in acc {
        assert!(k >= 0, "non-integral factorization");
        if k > 0 {
            out.push((p, k as u32));
        }
    }
    out
}
