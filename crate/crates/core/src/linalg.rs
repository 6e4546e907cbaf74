//! Exact Gaussian elimination over Q(ζ_N).

use crate::arith::CycloNum;

/// Basis of the right kernel of `rows` (each row has `ncols` entries).
///
/// Each basis vector has a 1 in one free column and zeros in the other free columns.
pub fn nullspace(rows: &[Vec<CycloNum>], ncols: usize, zero: &CycloNum) -> Vec<Vec<CycloNum>> {
    let mut m: Vec<Vec<CycloNum>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].invert().expect("pivot is nonzero");
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..ncols {
                    let t = &f * &m[row][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let one = {
        let f = zero.field();
        f.one()
    };
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); ncols];
        v[free] = one.clone();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&m[r][free];
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::CycloField;

    #[test]
    fn kernel_of_rank_one_matrix() {
        let f = CycloField::new(1);
        let rows = vec![
            vec![f.from_int(1), f.from_int(2), f.from_int(3)],
            vec![f.from_int(2), f.from_int(4), f.from_int(6)],
        ];
        let k = nullspace(&rows, 3, &f.zero());
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot = &(&rows[0][0] * &v[0]) + &(&(&rows[0][1] * &v[1]) + &(&rows[0][2] * &v[2]));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let f = CycloField::new(4);
        let i = f.root_of_unity(1);
        let rows = vec![vec![f.one(), i.clone()], vec![i.clone(), f.one()]];
        assert!(nullspace(&rows, 2, &f.zero()).is_empty());
    }
}
