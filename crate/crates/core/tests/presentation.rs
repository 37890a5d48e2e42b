use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subtori_core::addcoh::{cohomology_groups, poincare_polynomial};
use subtori_core::arrangement::{build_layer_poset, AtomSpec, Character, LayerPoset, UnityRoot};
use subtori_core::ospres::{integral_conjecture_check, JConvention, Presentation};

fn random_divisorial(
    rng: &mut ChaCha8Rng,
    max_rank: usize,
    max_atoms: usize,
    max_entry: i64,
) -> (usize, LayerPoset) {
    loop {
        let d = rng.gen_range(1..=max_rank);
        let n = rng.gen_range(0..=max_atoms);
        let atoms: Vec<AtomSpec> = (0..n)
            .map(|_| {
                let chi = loop {
                    let v: Vec<i64> = (0..d)
                        .map(|_| rng.gen_range(-max_entry..=max_entry))
                        .collect();
                    if v.iter().any(|&x| x != 0) {
                        break v;
                    }
                };
                let q = rng.gen_range(1..=2);
                let p = rng.gen_range(0..q);
                AtomSpec::new(vec![Character::from_i64(&chi)], vec![UnityRoot::new(p, q)])
            })
            .collect();
        if let Ok(p) = build_layer_poset(d, atoms) {
            return (d, p);
        }
    }
}

#[test]
fn nbc_dimensions_match_additive_betti() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let (d, poset) = random_divisorial(&mut rng, 3, 5, 3);
        let mut additive = poincare_polynomial(&poset);
        additive.resize(d + 1, 0);
        let mut dims = Vec::new();
        for j in [JConvention::Min, JConvention::Max] {
            let p = Presentation::new(&poset, j).unwrap();
            let nbc = p
                .nbc_basis_and_dimensions(d)
                .unwrap_or_else(|e| panic!("{e} on {:?}", poset.arrangement.specs));
            assert_eq!(nbc.dimensions, additive, "{:?}", poset.arrangement.specs);
            assert_eq!(nbc.poincare[..=d], additive[..]);
            dims.push(nbc.dimensions);
        }
        assert_eq!(dims[0], dims[1]);
    }
}

#[test]
fn integral_probe_on_unimodular_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut unimodular = 0;
    for _ in 0..30 {
        let (d, poset) = random_divisorial(&mut rng, 3, 4, 2);
        let p = Presentation::new(&poset, JConvention::Min).unwrap();
        let report = integral_conjecture_check(&p, &cohomology_groups(&poset), d);
        assert_eq!(report.degrees.len(), d + 1);
        if report.unimodular {
            unimodular += 1;
            assert!(
                report.all_match(),
                "{report:?} on {:?}",
                poset.arrangement.specs
            );
        }
    }
    assert!(unimodular > 0);
}

mod properties {
    use num_rational::BigRational;
    use proptest::prelude::*;
    use subtori_core::arrangement::{build_layer_poset, AtomSpec, Character, UnityRoot};
    use subtori_core::ospres::{Element, ExteriorElement, JConvention, Presentation};

    fn arrangement() -> impl Strategy<Value = (usize, Vec<(Vec<i64>, i64)>)> {
        (1usize..=2).prop_flat_map(|d| {
            (
                Just(d),
                prop::collection::vec((prop::collection::vec(-2i64..=2, d), 0i64..2), 1..=4),
            )
        })
    }

    fn one() -> BigRational {
        BigRational::from_integer(1.into())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn graded_commutative_on_basis((d, atoms) in arrangement(), picks in prop::collection::vec((0usize..64, 0usize..64), 6)) {
            let specs: Vec<AtomSpec> = atoms
                .iter()
                .filter(|(c, _)| c.iter().any(|&x| x != 0))
                .map(|(c, p)| AtomSpec::new(vec![Character::from_i64(c)], vec![UnityRoot::new(*p, 2)]))
                .collect();
            let Ok(poset) = build_layer_poset(d, specs) else { return Ok(()) };
            let p = Presentation::new(&poset, JConvention::Min).unwrap();
            let basis = p.nbc_basis();
            for (i, j) in picks {
                let (g, s) = basis[i % basis.len()];
                let (h, t) = basis[j % basis.len()];
                let a = Element::term(g, ExteriorElement::monomial(s, one()));
                let b = Element::term(h, ExteriorElement::monomial(t, one()));
                let da = p.generators[g].degree() + s.count_ones() as usize;
                let db = p.generators[h].degree() + t.count_ones() as usize;
                if da + db > d {
                    continue;
                }
                let ab = p.reduce_to_basis(&p.multiply(&a, &b)).unwrap();
                let sign = if da * db % 2 == 1 { -one() } else { one() };
                let ba = p.reduce_to_basis(&p.multiply(&b, &a).scale(&sign)).unwrap();
                prop_assert_eq!(ab, ba);
            }
        }

        #[test]
        fn products_are_associative((d, atoms) in arrangement(), picks in prop::collection::vec(0usize..64, 3)) {
            let specs: Vec<AtomSpec> = atoms
                .iter()
                .filter(|(c, _)| c.iter().any(|&x| x != 0))
                .map(|(c, p)| AtomSpec::new(vec![Character::from_i64(c)], vec![UnityRoot::new(*p, 2)]))
                .collect();
            let Ok(poset) = build_layer_poset(d, specs) else { return Ok(()) };
            let p = Presentation::new(&poset, JConvention::Min).unwrap();
            let n = p.generators.len();
            let e: Vec<Element> = picks.iter().map(|&i| Element::generator(i % n)).collect();
            let left = p.multiply(&p.multiply(&e[0], &e[1]), &e[2]);
            let right = p.multiply(&e[0], &p.multiply(&e[1], &e[2]));
            prop_assert_eq!(left, right);
        }
    }
}
