//! Integer monodromy data for the two families.

/// Integer 2x2 matrix, row major.
pub type IMat2 = [[i64; 2]; 2];

pub const IDENTITY: IMat2 = [[1, 0], [0, 1]];
pub const MINUS_IDENTITY: IMat2 = [[-1, 0], [0, -1]];

/// Picard-Lefschetz generators for the Weierstrass family.
pub const SL2Z_A1: IMat2 = [[1, 0], [1, 1]];
pub const SL2Z_A2: IMat2 = [[1, -1], [0, 1]];
/// `A2^-1 A1^-1 A2^-1` and `A1^-1 A2^-1`.
pub const SL2Z_G1: IMat2 = [[0, 1], [-1, 0]];
pub const SL2Z_G2: IMat2 = [[1, 1], [-1, 0]];

/// Generators of the monodromy of the root family, around `t_{i-1} = t_{i+1}`.
pub const GAMMA2_GENERATORS: [IMat2; 3] = [[[1, 0], [2, 1]], [[1, -2], [0, 1]], [[-1, -2], [2, 3]]];

pub fn imat_mul(a: &IMat2, b: &IMat2) -> IMat2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

pub fn imat_det(a: &IMat2) -> i64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Inverse of a determinant-one matrix.
pub fn imat_inverse(a: &IMat2) -> IMat2 {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

pub fn imat_pow(a: &IMat2, n: u32) -> IMat2 {
    (0..n).fold(IDENTITY, |acc, _| imat_mul(&acc, a))
}

/// `a == I` modulo 2.
pub fn congruent_identity_mod2(a: &IMat2) -> bool {
    (0..2).all(|i| (0..2).all(|j| (a[i][j] - IDENTITY[i][j]).rem_euclid(2) == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_relations() {
        let a1i = imat_inverse(&SL2Z_A1);
        let a2i = imat_inverse(&SL2Z_A2);
        assert_eq!(imat_mul(&imat_mul(&a2i, &a1i), &a2i), SL2Z_G1);
        assert_eq!(imat_mul(&a1i, &a2i), SL2Z_G2);
        assert_eq!(imat_pow(&SL2Z_G1, 2), MINUS_IDENTITY);
        assert_eq!(imat_pow(&SL2Z_G2, 3), MINUS_IDENTITY);
    }

    #[test]
    fn gamma2_generators_are_level_two() {
        for g in &GAMMA2_GENERATORS {
            assert_eq!(imat_det(g), 1);
            assert!(congruent_identity_mod2(g));
        }
        assert!(!congruent_identity_mod2(&SL2Z_A1));
    }
}
