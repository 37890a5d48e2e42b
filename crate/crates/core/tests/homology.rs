use num_bigint::BigInt;
use subtori_core::intlat::TorsionData;
use subtori_core::topo::{homology_in_degree, reduced_homology, SimplicialComplex};

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

#[test]
fn simplex_boundaries_are_spheres() {
    for n in 1..=5 {
        let cx = SimplicialComplex::from_facets(n + 1, combinations(n + 1, n));
        let h = reduced_homology(&cx);
        for s in -1..=n as i64 {
            let want = if s == n as i64 - 1 {
                TorsionData::free(1)
            } else {
                TorsionData::default()
            };
            assert_eq!(homology_in_degree(&h, s), want, "n = {n}, s = {s}");
        }
    }
}

#[test]
fn full_simplex_is_acyclic() {
    for n in 0..=5 {
        let cx = SimplicialComplex::from_facets(n + 1, vec![(0..=n).collect()]);
        assert!(reduced_homology(&cx).iter().all(|g| g.group.is_zero()));
    }
}

#[test]
fn projective_plane() {
    let facets = vec![
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 4],
        vec![0, 4, 5],
        vec![0, 5, 1],
        vec![1, 2, 4],
        vec![2, 3, 5],
        vec![3, 4, 1],
        vec![4, 5, 2],
        vec![5, 1, 3],
    ];
    let h = reduced_homology(&SimplicialComplex::from_facets(6, facets));
    assert!(homology_in_degree(&h, 0).is_zero());
    assert_eq!(
        homology_in_degree(&h, 1),
        TorsionData {
            free_rank: 0,
            invariant_factors: vec![BigInt::from(2)]
        }
    );
    assert!(homology_in_degree(&h, 2).is_zero());
}

#[test]
fn wedge_of_circles_and_degenerate_complexes() {
    // Three edges on two vertices' worth of cycles: a theta graph.
    let theta = SimplicialComplex::from_facets(
        4,
        vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![0, 3], vec![3, 2]],
    );
    assert_eq!(
        homology_in_degree(&reduced_homology(&theta), 1),
        TorsionData::free(2)
    );
    let two_points = SimplicialComplex::from_facets(2, vec![vec![0], vec![1]]);
    assert_eq!(
        homology_in_degree(&reduced_homology(&two_points), 0),
        TorsionData::free(1)
    );
    assert_eq!(
        homology_in_degree(&reduced_homology(&SimplicialComplex::empty()), -1),
        TorsionData::free(1)
    );
    assert_eq!(
        homology_in_degree(&reduced_homology(&SimplicialComplex::void()), -2),
        TorsionData::free(1)
    );
}
