//! Shared test oracles, independent of the library's implementation paths.

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
/// Returns None for a singular system.
pub fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .expect("finite pivots")
        })?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            let (pivot_rows, rest) = a.split_at_mut(row);
            let pivot_row = &pivot_rows[col];
            for (x, p) in rest[0][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in (row + 1)..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Brute-force output speeds of the six-differential constraint graph.
///
/// Three two-output stages D1..D3 share one input; each side gear meshes
/// with a side gear of an adjacent two-input stage T1..T3, whose rings
/// drive the outputs. Unknowns are the six side-gear speeds plus the demand
/// scale `lambda`:
///
/// ```text
/// x = [s1r, s1l, s2r, s2l, s3r, s3l, lambda]
/// ring sums:  s_ir + s_il           = 2 w_u / k     (i = 1..3)
/// outputs:    j (s1r + s2l) / 2     = lambda d1
///             j (s2r + s3l) / 2     = lambda d2
///             j (s3r + s1l) / 2     = lambda d3
/// gauge:      s1r - s1l             = 0             (internal circulation)
/// ```
///
/// The gauge row pins the one-dimensional circulation mode that moves no
/// output. Returns the three output speeds `lambda * d`.
pub fn six_differential_outputs(
    ratio_j: f64,
    ratio_k: f64,
    input_rpm: f64,
    demands: [f64; 3],
) -> Option<[f64; 3]> {
    let mut a = vec![vec![0.0; 7]; 7];
    let mut b = vec![0.0; 7];
    for i in 0..3 {
        a[i][2 * i] = 1.0;
        a[i][2 * i + 1] = 1.0;
        b[i] = 2.0 * input_rpm / ratio_k;
    }
    let half_j = ratio_j / 2.0;
    // T1 joins D1-right and D2-left
    a[3][0] = half_j;
    a[3][3] = half_j;
    a[3][6] = -demands[0];
    // T2 joins D2-right and D3-left
    a[4][2] = half_j;
    a[4][5] = half_j;
    a[4][6] = -demands[1];
    // T3 joins D3-right and D1-left
    a[5][4] = half_j;
    a[5][1] = half_j;
    a[5][6] = -demands[2];
    // gauge
    a[6][0] = 1.0;
    a[6][1] = -1.0;

    let x = solve_linear(a, b)?;
    let lambda = x[6];
    Some([
        lambda * demands[0],
        lambda * demands[1],
        lambda * demands[2],
    ])
}

#[allow(dead_code)]
pub fn rel_err(actual: f64, expected: f64) -> f64 {
    if expected == 0.0 {
        actual.abs()
    } else {
        ((actual - expected) / expected).abs()
    }
}
