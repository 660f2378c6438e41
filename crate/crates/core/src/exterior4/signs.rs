//! Frozen sign tables for the exterior algebra of a 4-dimensional space.
//!
//! Basis conventions (dual coordinate covectors `e0..e3`):
//!
//! | degree | order |
//! |--------|-------|
//! | 1 | `e0, e1, e2, e3` |
//! | 2 | `e0^e1, e0^e2, e0^e3, e2^e3, e3^e1, e1^e2` |
//! | 3 | `e1^e2^e3, e0^e2^e3, e0^e1^e3, e0^e1^e2` |
//! | 4 | `e0^e1^e2^e3` |
//!
//! The 2-form order makes `a^b` a sign-free sum of products:
//! `(a^b)/dvol = a01 b23 + a02 b31 + a03 b12 + a23 b01 + a31 b02 + a12 b03`.
//!
//! Each entry is `(index, sign)`; a zero sign means the product vanishes.
//! The tables are regenerated by permutation enumeration in the unit tests.

/// Index sets of the stored 2-form basis, in storage order.
pub const BASIS2: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [2, 3], [3, 1], [1, 2]];

/// Index sets of the stored 3-form basis, in storage order.
pub const BASIS3: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];

/// `e_i ^ e_j` as a 2-form basis element.
pub const WEDGE_1_1: [[(usize, i8); 4]; 4] = [
    [(0, 0), (0, 1), (1, 1), (2, 1)],
    [(0, -1), (0, 0), (5, 1), (4, -1)],
    [(1, -1), (5, -1), (0, 0), (3, 1)],
    [(2, -1), (4, 1), (3, -1), (0, 0)],
];

/// `e_i ^ b_a` for a 2-form basis element `b_a`, as a 3-form basis element.
pub const WEDGE_1_2: [[(usize, i8); 6]; 4] = [
    [(0, 0), (0, 0), (0, 0), (1, 1), (2, -1), (3, 1)],
    [(0, 0), (3, -1), (2, -1), (0, 1), (0, 0), (0, 0)],
    [(3, 1), (0, 0), (1, -1), (0, 0), (0, 1), (0, 0)],
    [(2, 1), (1, 1), (0, 0), (0, 0), (0, 0), (0, 1)],
];

/// `e_i ^ c_b` for a 3-form basis element `c_b`, as a multiple of `dvol`.
pub const WEDGE_1_3: [[i8; 4]; 4] = [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]];

/// `b_a ^ b_c` for 2-form basis elements, as a multiple of `dvol`.
pub const WEDGE_2_2: [[i8; 6]; 6] = [
    [0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 1],
    [1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0],
];

/// `iota(d_i) b_a` for a 2-form basis element, as a 1-form basis element.
pub const INTERIOR_2: [[(usize, i8); 6]; 4] = [
    [(1, 1), (2, 1), (3, 1), (0, 0), (0, 0), (0, 0)],
    [(0, -1), (0, 0), (0, 0), (0, 0), (3, -1), (2, 1)],
    [(0, 0), (0, -1), (0, 0), (3, 1), (0, 0), (1, -1)],
    [(0, 0), (0, 0), (0, -1), (2, -1), (1, 1), (0, 0)],
];

/// `iota(d_i) c_b` for a 3-form basis element, as a 2-form basis element.
pub const INTERIOR_3: [[(usize, i8); 4]; 4] = [
    [(0, 0), (3, 1), (4, -1), (5, 1)],
    [(3, 1), (0, 0), (2, -1), (1, -1)],
    [(4, 1), (2, -1), (0, 0), (0, 1)],
    [(5, 1), (1, 1), (0, 1), (0, 0)],
];

/// `iota(d_i) dvol` as a 3-form basis element.
pub const INTERIOR_4: [(usize, i8); 4] = [(0, 1), (1, -1), (2, 1), (3, -1)];

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(k: usize) -> Vec<Vec<usize>> {
        match k {
            0 => vec![vec![]],
            1 => (0..4).map(|i| vec![i]).collect(),
            2 => BASIS2.iter().map(|b| b.to_vec()).collect(),
            3 => BASIS3.iter().map(|b| b.to_vec()).collect(),
            4 => vec![vec![0, 1, 2, 3]],
            _ => unreachable!(),
        }
    }

    /// Sorts an index list by adjacent swaps, returning the sign, or `None`
    /// when an index repeats.
    fn sort_sign(idx: &[usize]) -> Option<(Vec<usize>, i8)> {
        let mut v = idx.to_vec();
        let mut s = 1i8;
        for i in 0..v.len() {
            for j in 0..v.len() - 1 - i {
                if v[j] == v[j + 1] {
                    return None;
                }
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    s = -s;
                }
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((v, s))
    }

    fn lookup(k: usize, idx: &[usize]) -> (usize, i8) {
        let Some((sorted, s)) = sort_sign(idx) else {
            return (0, 0);
        };
        for (n, b) in basis(k).iter().enumerate() {
            let (bs, sb) = sort_sign(b).unwrap();
            if bs == sorted {
                return (n, s * sb);
            }
        }
        unreachable!()
    }

    fn wedge(p: usize, q: usize, a: usize, b: usize) -> (usize, i8) {
        let mut idx = basis(p)[a].clone();
        idx.extend(basis(q)[b].iter());
        lookup(p + q, &idx)
    }

    fn interior(k: usize, i: usize, b: usize) -> (usize, i8) {
        let e = &basis(k)[b];
        match e.iter().position(|&x| x == i) {
            None => (0, 0),
            Some(pos) => {
                let mut rest = e.clone();
                rest.remove(pos);
                let (n, s) = lookup(k - 1, &rest);
                (n, if pos % 2 == 0 { s } else { -s })
            }
        }
    }

    #[test]
    fn tables_match_permutation_enumeration() {
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(WEDGE_1_1[i][j], wedge(1, 1, i, j), "w11 {i} {j}");
            }
            for a in 0..6 {
                assert_eq!(WEDGE_1_2[i][a], wedge(1, 2, i, a), "w12 {i} {a}");
                assert_eq!(INTERIOR_2[i][a], interior(2, i, a), "i2 {i} {a}");
            }
            for b in 0..4 {
                assert_eq!(WEDGE_1_3[i][b], wedge(1, 3, i, b).1, "w13 {i} {b}");
                assert_eq!(INTERIOR_3[i][b], interior(3, i, b), "i3 {i} {b}");
            }
            assert_eq!(INTERIOR_4[i], interior(4, i, 0));
        }
        for a in 0..6 {
            for c in 0..6 {
                assert_eq!(WEDGE_2_2[a][c], wedge(2, 2, a, c).1, "w22 {a} {c}");
            }
        }
    }

    #[test]
    fn basis_tables_are_consistent() {
        for (a, b) in BASIS2.iter().enumerate() {
            assert_eq!(WEDGE_1_1[b[0]][b[1]], (a, 1));
        }
    }
}
