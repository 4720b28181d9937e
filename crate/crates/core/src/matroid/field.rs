//! Exact linear algebra over the prime field GF(2^31 - 1).

pub const MODULUS: u64 = (1 << 31) - 1;

pub fn reduce(x: u64) -> u64 {
    x % MODULUS
}

fn mul(a: u64, b: u64) -> u64 {
    a * b % MODULUS
}

fn sub(a: u64, b: u64) -> u64 {
    (a + MODULUS - b) % MODULUS
}

pub fn pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    base %= MODULUS;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

pub fn inverse(a: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(MODULUS));
    pow(a, MODULUS - 2)
}

/// Rank of a set of vectors (entries already reduced mod the modulus), by
/// incremental Gaussian elimination against an echelon basis.
pub fn rank<'a, I>(vectors: I) -> usize
where
    I: IntoIterator<Item = &'a [u64]>,
{
    // (pivot column, normalised row with 1 at pivot)
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for v in vectors {
        let mut row = v.to_vec();
        for (pivot, b) in &basis {
            let c = row[*pivot];
            if c != 0 {
                for (x, &y) in row.iter_mut().zip(b) {
                    *x = sub(*x, mul(c, y));
                }
            }
        }
        if let Some(pivot) = row.iter().position(|&x| x != 0) {
            let inv = inverse(row[pivot]);
            for x in row.iter_mut() {
                *x = mul(*x, inv);
            }
            basis.push((pivot, row));
        }
    }
    basis.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        for a in [1, 2, 3, 12345, MODULUS - 1] {
            assert_eq!(mul(a, inverse(a)), 1);
        }
    }

    #[test]
    fn dependent_columns() {
        let a = [1, 2, 3];
        let b = [2, 4, 6];
        let c = [0, 1, 0];
        assert_eq!(rank([&a[..], &b[..]]), 1);
        assert_eq!(rank([&a[..], &b[..], &c[..]]), 2);
        assert_eq!(rank(std::iter::empty::<&[u64]>()), 0);
    }

    #[test]
    fn wraparound_dependence() {
        // (1, M-1) and (M-1, 1) are negatives of each other.
        let a = [1, MODULUS - 1];
        let b = [MODULUS - 1, 1];
        assert_eq!(rank([&a[..], &b[..]]), 1);
    }
}
