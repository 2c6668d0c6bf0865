use crate::error::{Error, Result};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A normalized lens-space parameter pair: `p >= 1`, `0 <= q < p`,
/// `gcd(p, q) = 1`. Same-space tests go through [`lens_equal`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct LensSpec {
    pub p: u64,
    pub q: u64,
}

impl LensSpec {
    pub fn new(p: u64, q: u64) -> Result<LensSpec> {
        if p == 0 {
            return Err(Error::LensParameters("p must be at least 1".into()));
        }
        let q = q % p;
        if p > 1 && gcd(p, q) != 1 {
            return Err(Error::LensParameters(format!("gcd({p},{q}) != 1")));
        }
        Ok(LensSpec { p, q })
    }

    /// The equivalent parameters `{±q^{±1}} mod p`, ascending.
    pub fn equivalent_q(&self) -> Vec<u64> {
        if self.p <= 2 {
            return vec![self.q];
        }
        let p = self.p;
        let q = self.q;
        let inv = mod_inverse(q, p).expect("q invertible mod p");
        let mut set = vec![q % p, (p - q % p) % p, inv, (p - inv) % p];
        set.sort_unstable();
        set.dedup();
        set
    }
}

impl std::fmt::Display for LensSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "L({},{})", self.p, self.q)
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let quotient = r / new_r;
        (t, new_t) = (new_t, t - quotient * new_t);
        (r, new_r) = (new_r, r - quotient * new_r);
    }
    if r > 1 {
        return None;
    }
    Some(((t % m as i128 + m as i128) % m as i128) as u64)
}

/// The classical classification test: `L(p1,q1) = L(p2,q2)` iff `p1 = p2`
/// and `q1 q2^{±1} ≡ ±1 (mod p1)`.
pub fn lens_equal(a: &LensSpec, b: &LensSpec) -> bool {
    if a.p != b.p {
        return false;
    }
    let p = a.p;
    if p <= 2 {
        return true; // S^3, S^2 x S^1-free range: q is forced
    }
    let prod = (a.q as u128 * b.q as u128 % p as u128) as u64;
    let diff_zero = a.q % p == b.q % p;
    let sum_zero = (a.q + b.q) % p == 0;
    prod == 1 || prod == p - 1 || diff_zero || sum_zero
}

/// Number of steps in the subtraction form of the Euclidean algorithm from
/// the unordered pair `{p, q}` down to `{1, 0}`.
pub fn euclid_steps(p: u64, q: u64) -> Result<u64> {
    let (mut a, mut b) = (p.max(q), p.min(q));
    if gcd(a.max(1), b) != 1 && !(a == 1 && b == 0) {
        return Err(Error::LensParameters(format!("gcd({p},{q}) != 1")));
    }
    if a == 0 {
        return Err(Error::LensParameters("E(0,0) undefined".into()));
    }
    let mut steps = 0;
    while !(a == 1 && b == 0) {
        if b == 0 {
            return Err(Error::LensParameters(format!("E({p},{q}) undefined: gcd != 1")));
        }
        // batch the repeated subtractions a -> a - b
        let take = if a % b == 0 { a / b - 1 } else { a / b };
        steps += take;
        let r = a - take * b;
        a = b.max(r);
        b = b.min(r);
        if a == 1 && b == 1 {
            // (1,1) -> (1,0) in one more step
            steps += 1;
            b = 0;
        }
    }
    Ok(steps)
}

/// Continued fraction `p/q = [n0; n1, n2, ...]` with all partial
/// denominators positive. For `q = 0` (only `p = 1` is accepted) the
/// expansion is empty.
pub fn continued_fraction(p: u64, q: u64) -> Result<Vec<u64>> {
    if q == 0 {
        if p == 1 {
            return Ok(Vec::new());
        }
        return Err(Error::LensParameters("q = 0 requires p = 1".into()));
    }
    if p <= q {
        return Err(Error::LensParameters(format!("need p > q, got {p}/{q}")));
    }
    if gcd(p, q) != 1 {
        return Err(Error::LensParameters(format!("gcd({p},{q}) != 1")));
    }
    let (mut a, mut b) = (p, q);
    let mut out = Vec::new();
    while b > 0 {
        out.push(a / b);
        (a, b) = (b, a % b);
    }
    Ok(out)
}

/// The four families of lens spaces built from two solid tori sharing a
/// tetrahedron, in the listed order. Parameters are the first match in a
/// deterministic scan; see [`family_memberships`] for all of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Family {
    Family1 { s: u64, t: u64 },
    Family2 { s: u64, t: u64 },
    Family3 { s: u64, t: u64 },
    Family4 { t: u64 },
}

/// Every family membership of a lens space:
/// 1. `L(s+t+3, 1)`, `t >= s >= 1`;
/// 2. `L((s+2)(t+1)+1, t+1)`, `t > s > 1`;
/// 3. `L((s+1)(t+2)+1, t+2)`, `t > s > 1`;
/// 4. `L((t+1)(t+2)+1, t+2)`, `t >= 2`.
///
/// Memberships are tested with [`lens_equal`], so any equivalent `q`
/// parameter counts.
pub fn family_memberships(lens: &LensSpec) -> Vec<Family> {
    let mut out = Vec::new();
    let p = lens.p;
    let mut push = |fam: Family, rep_q: u64| {
        if let Ok(rep) = LensSpec::new(p, rep_q) {
            if lens_equal(lens, &rep) && !out.contains(&fam) {
                out.push(fam);
            }
        }
    };
    // family 1: q ~ 1, p = s + t + 3 >= 5
    if p >= 5 {
        push(Family::Family1 { s: 1, t: p - 4 }, 1);
    }
    // families 2-4: p - 1 = a * b for ordered factor pairs (a, b)
    let m = p - 1;
    for a in 2..=m {
        if a * a > m {
            break;
        }
        if m % a != 0 {
            continue;
        }
        for (a, b) in [(a, m / a), (m / a, a)] {
            // family 2: a = s + 2, b = t + 1; t > s > 1 ⇔ a >= 4, b >= a
            if a >= 4 && b >= a {
                push(Family::Family2 { s: a - 2, t: b - 1 }, b);
            }
            // family 3: a = s + 1, b = t + 2; t > s > 1 ⇔ a >= 3, b >= a + 2
            if a >= 3 && b >= a + 2 {
                push(Family::Family3 { s: a - 1, t: b - 2 }, b);
            }
            // family 4: consecutive factors a = t + 1, b = t + 2, t >= 2
            if b == a + 1 && a >= 3 {
                push(Family::Family4 { t: a - 1 }, b);
            }
        }
    }
    out.sort_by_key(family_order);
    out
}

fn family_order(f: &Family) -> (u8, u64, u64) {
    match *f {
        Family::Family1 { s, t } => (1, s, t),
        Family::Family2 { s, t } => (2, s, t),
        Family::Family3 { s, t } => (3, s, t),
        Family::Family4 { t } => (4, t, 0),
    }
}

/// First family membership in the listed order, or `None`.
pub fn classify_family(lens: &LensSpec) -> Option<Family> {
    family_memberships(lens).into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclid_small_values() {
        assert_eq!(euclid_steps(1, 0).unwrap(), 0);
        assert_eq!(euclid_steps(2, 1).unwrap(), 2);
        assert_eq!(euclid_steps(3, 1).unwrap(), 3);
        assert_eq!(euclid_steps(5, 2).unwrap(), 4);
        assert_eq!(euclid_steps(2, 5).unwrap(), 4); // unordered
        for n in 2..=10u64 {
            assert_eq!(euclid_steps(2 * n, 1).unwrap(), 2 * n);
        }
    }

    #[test]
    fn continued_fraction_sums_to_euclid() {
        for p in 2..=120u64 {
            for q in 1..p {
                if gcd(p, q) != 1 {
                    continue;
                }
                let cf = continued_fraction(p, q).unwrap();
                assert!(cf.iter().all(|&n| n > 0));
                assert_eq!(cf.iter().sum::<u64>(), euclid_steps(p, q).unwrap(), "p={p} q={q}");
            }
        }
    }

    #[test]
    fn worked_example_continued_fractions() {
        for s in [2u64, 4, 6] {
            let p = 41 * s + 58;
            let q = 12 * s + 17;
            assert_eq!(continued_fraction(p, q).unwrap(), vec![3, 2, 2, 2, s + 1]);
            assert_eq!(euclid_steps(p, q).unwrap(), s + 10);
        }
    }

    #[test]
    fn lens_equality() {
        let l = |p, q| LensSpec::new(p, q).unwrap();
        assert!(lens_equal(&l(7, 2), &l(7, 3))); // 2*3 = 6 ≡ -1 (7)
        assert!(!lens_equal(&l(5, 1), &l(5, 2)));
        for p in 3..40u64 {
            for q in 1..p {
                if gcd(p, q) != 1 {
                    continue;
                }
                assert!(lens_equal(&l(p, q), &l(p, p - q)));
                for q2 in LensSpec::new(p, q).unwrap().equivalent_q() {
                    assert!(lens_equal(&l(p, q), &l(p, q2)));
                }
            }
        }
    }

    #[test]
    fn family_examples() {
        let l = |p, q| LensSpec::new(p, q).unwrap();
        assert_eq!(classify_family(&l(6, 1)), Some(Family::Family1 { s: 1, t: 2 }));
        let m26 = family_memberships(&l(26, 5));
        assert!(m26.contains(&Family::Family2 { s: 3, t: 4 }), "{m26:?}");
        let m16 = family_memberships(&l(16, 5));
        assert!(m16.contains(&Family::Family3 { s: 2, t: 3 }), "{m16:?}");
        assert_eq!(classify_family(&l(7, 1)), Some(Family::Family1 { s: 1, t: 3 }));
        assert_eq!(classify_family(&l(4, 1)), None);
    }
}
