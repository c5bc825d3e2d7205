//! Dense linear algebra over `F_q`.

use crate::field::{Fe, Field};

/// Row-reduces `rows` in place to reduced row echelon form and returns the pivot columns.
pub fn rref(field: &Field, rows: &mut Vec<Vec<Fe>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        for v in rows[r].iter_mut() {
            *v = field.mul(*v, inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let k = rows[i][c];
                for j in c..ncols {
                    let t = field.mul(k, rows[r][j]);
                    rows[i][j] = field.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : M x = 0}` for an `nrows x ncols` matrix given by rows.
pub fn nullspace(field: &Field, m: &[Vec<Fe>], ncols: usize) -> Vec<Vec<Fe>> {
    let mut rows: Vec<Vec<Fe>> = m.to_vec();
    let pivots = if rows.is_empty() { Vec::new() } else { rref(field, &mut rows) };
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Fe::ZERO; ncols];
            v[fc] = Fe::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(rows[r][fc]);
            }
            v
        })
        .collect()
}

/// Reduces a spanning set of vectors to the canonical echelon basis where column
/// `ncols - 1` is the most significant: one vector per distinct top index, top entry 1,
/// and every top index of one vector cleared in all others.
pub fn top_echelon(field: &Field, vecs: Vec<Vec<Fe>>, ncols: usize) -> Vec<Vec<Fe>> {
    let mut rows: Vec<Vec<Fe>> = vecs.into_iter().map(|mut v| {
        v.resize(ncols, Fe::ZERO);
        v.reverse();
        v
    }).collect();
    if rows.is_empty() {
        return rows;
    }
    rref(field, &mut rows);
    let mut out: Vec<Vec<Fe>> = rows
        .into_iter()
        .map(|mut v| {
            v.reverse();
            v
        })
        .collect();
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_rank_one() {
        let f = Field::prime(3).unwrap();
        let m = vec![vec![Fe(1), Fe(2), Fe(0)]];
        let ns = nullspace(&f, &m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let s = f.add(v[0], f.mul(Fe(2), v[1]));
            assert!(s.is_zero());
        }
    }

    #[test]
    fn top_echelon_orders_by_top_index() {
        let f = Field::prime(3).unwrap();
        let vs = vec![vec![Fe(1), Fe(1), Fe(1)], vec![Fe(2), Fe(1), Fe(0)]];
        let e = top_echelon(&f, vs, 3);
        assert_eq!(e.len(), 2);
        assert_eq!(e[0], vec![Fe(2), Fe(1), Fe(0)]);
        assert_eq!(e[1][2], Fe(1));
        assert_eq!(e[1][1], Fe(0));
    }
}
