//! Algebraic normal form via the GF(2) Möbius transform.

/// Monomials (as variable bitmasks) with coefficient 1 in the ANF of a
/// Boolean function given by its `2^k` table. Variable `i` is bit `i` of the
/// table index. The result is sorted.
pub fn anf(table: &[bool]) -> Vec<u32> {
    let coeffs = anf_coefficients(table);
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c)
        .map(|(m, _)| m as u32)
        .collect()
}

/// Dense Möbius transform: `out[S]` is the coefficient of monomial `S`.
pub fn anf_coefficients(table: &[bool]) -> Vec<bool> {
    let n = table.len();
    assert!(n.is_power_of_two(), "table length must be a power of two");
    let mut t = table.to_vec();
    let mut step = 1;
    while step < n {
        for m in 0..n {
            if m & step != 0 {
                t[m] ^= t[m ^ step];
            }
        }
        step <<= 1;
    }
    t
}

/// Evaluates an ANF at `input`.
pub fn anf_eval(monomials: &[u32], input: u32) -> bool {
    monomials
        .iter()
        .fold(false, |acc, &m| acc ^ (input & m == m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_zero_is_empty() {
        assert!(anf(&[false; 8]).is_empty());
    }

    #[test]
    fn and_and_or() {
        assert_eq!(anf(&[false, false, false, true]), vec![0b11]);
        assert_eq!(anf(&[false, true, true, true]), vec![0b01, 0b10, 0b11]);
    }

    #[test]
    fn reconstruction_is_exact() {
        for idx in 0u32..256 {
            let table: Vec<bool> = (0..8).map(|i| idx >> i & 1 == 1).collect();
            let mons = anf(&table);
            for (i, &b) in table.iter().enumerate() {
                assert_eq!(anf_eval(&mons, i as u32), b);
            }
        }
    }
}
