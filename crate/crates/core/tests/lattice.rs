use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use subtori_core::arrangement::positive_system_for_columns;
use subtori_core::intlat::{hermite_row_form, left_kernel, smith_normal_form, IntMatrix};

fn matrix(max_dim: usize, entry: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-entry..=entry, r * c).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(c).map(|x| x.to_vec()).collect();
            IntMatrix::from_rows(c, &rows)
        })
    })
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det_i128(&minor)
        })
        .sum()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// gcd of all k×k minors.
fn minor_gcd(a: &IntMatrix, k: usize) -> BigInt {
    let small: Vec<Vec<i128>> = (0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .map(|x| x.to_string().parse().unwrap())
                .collect()
        })
        .collect();
    let mut g = BigInt::zero();
    for rs in combinations(a.rows(), k) {
        for cs in combinations(a.cols(), k) {
            let sub: Vec<Vec<i128>> = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| small[i][j]).collect())
                .collect();
            g = g.gcd(&BigInt::from(det_i128(&sub)));
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_decomposition(a in matrix(4, 6)) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.left.mul(&a).mul(&snf.right), snf.diagonal.clone());
        prop_assert!(snf.left.det().abs().is_one());
        prop_assert!(snf.right.det().abs().is_one());
        let n = a.rows().min(a.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    prop_assert!(snf.diagonal.get(i, j).is_zero());
                }
            }
        }
        let diag: Vec<BigInt> = (0..n).map(|i| snf.diagonal.get(i, i).clone()).collect();
        let mut prod = BigInt::one();
        for k in 1..=n {
            prop_assert!(!diag[k - 1].is_negative());
            if k < n && !diag[k].is_zero() {
                prop_assert!(diag[k].is_multiple_of(&diag[k - 1]));
            }
            prod *= &diag[k - 1];
            prop_assert_eq!(&prod, &minor_gcd(&a, k));
        }
    }

    #[test]
    fn hermite_form(a in matrix(4, 6)) {
        let hf = hermite_row_form(&a);
        prop_assert_eq!(hf.transform.mul(&a), hf.form.clone());
        prop_assert!(hf.transform.det().abs().is_one());
        prop_assert_eq!(hf.rank, a.rank());
        for (i, &p) in hf.pivots.iter().enumerate() {
            let piv = hf.form.get(i, p);
            prop_assert!(piv.is_positive());
            for j in 0..p {
                prop_assert!(hf.form.get(i, j).is_zero());
            }
            for k in 0..i {
                let x = hf.form.get(k, p);
                prop_assert!(!x.is_negative() && x < piv);
            }
        }
        for i in hf.rank..a.rows() {
            prop_assert!(hf.form.row(i).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn left_kernel_is_saturated(a in matrix(4, 4)) {
        let k = left_kernel(&a);
        prop_assert_eq!(k.rows() + a.rank(), a.rows());
        prop_assert!(k.mul(&a).is_zero());
        if k.rows() > 0 {
            let g = (1..=k.rows()).fold(BigInt::zero(), |_, r| if r == k.rows() { minor_gcd(&k, r) } else { BigInt::zero() });
            prop_assert!(g.is_one());
        }
    }

    #[test]
    fn positive_systems(a in (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| {
        prop::collection::vec(-9i64..=9, r * c).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(c).map(|x| x.to_vec()).collect();
            IntMatrix::from_rows(c, &rows)
        })
    }).prop_filter("nonzero columns", |a| (0..a.cols()).all(|j| (0..a.rows()).any(|i| !a.get(i, j).is_zero())))) {
        let ps = positive_system_for_columns(&a);
        prop_assert!(ps.change_of_basis.det().abs().is_one());
        prop_assert_eq!(ps.change_of_basis.rows(), a.rows());
        let ua = ps.change_of_basis.mul(&a);
        for j in 0..ps.columns.cols() {
            let same = (0..a.rows()).all(|i| ua.get(i, j) == ps.columns.get(i, j));
            let flipped = (0..a.rows()).all(|i| -ua.get(i, j) == *ps.columns.get(i, j));
            prop_assert!(same || flipped);
            let col: Vec<&BigInt> = (0..ps.columns.rows()).map(|i| ps.columns.get(i, j)).collect();
            prop_assert!(col.iter().all(|x| !x.is_negative()));
            prop_assert!(col.iter().any(|x| x.is_positive()));
        }
    }
}

#[test]
fn positive_system_example() {
    let ps = positive_system_for_columns(&IntMatrix::from_rows(1, &[vec![1], vec![-3]]));
    assert_eq!(
        ps.change_of_basis,
        IntMatrix::from_rows(2, &[vec![1, 1], vec![0, 1]])
    );
}
