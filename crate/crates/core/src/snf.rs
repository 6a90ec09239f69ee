//! Smith normal form of small dense integer matrices.

/// Diagonal of the Smith normal form, `d[0] | d[1] | ...`, all entries
/// nonnegative. Only the invariant factors are returned; the unimodular
/// transforms are not tracked.
pub fn smith_diagonal(mut m: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let size = rows.min(cols);
    for t in 0..size {
        // pivot: smallest nonzero absolute value in the trailing block
        loop {
            let Some((pi, pj)) = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| (m[i][j].abs(), i, j))
            else {
                return finish(&m, size);
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let f = m[i][t] / p;
                for j in t..cols {
                    m[i][j] -= f * m[t][j];
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let f = m[t][j] / p;
                for i in t..rows {
                    m[i][j] -= f * m[i][t];
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| m[i][j] % p != 0);
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        m[t][j] += m[i][j];
                    }
                }
                None => break,
            }
        }
    }
    finish(&m, size)
}

fn finish(m: &[Vec<i64>], size: usize) -> Vec<i64> {
    (0..size).map(|k| m[k][k].abs()).collect()
}
