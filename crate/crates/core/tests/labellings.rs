use std::collections::{BTreeMap, BTreeSet, VecDeque};

use billiard::grid::{neg_root, ALPHA, BETA, GAMMA};
use billiard::random::{self, rng};
use billiard::{loc, DeltaGrid, EdgeLabelling, FieldContext, Location, Scalar, SpanningTree, ValueFunction, Vector};
use proptest::prelude::*;

fn fields() -> [FieldContext; 3] {
    [FieldContext::Rationals, FieldContext::prime(101).unwrap(), FieldContext::RationalFunctions]
}

fn bfs_tree(g: &DeltaGrid, root: Location) -> SpanningTree {
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    let mut edges = Vec::new();
    while let Some(x) = queue.pop_front() {
        for y in g.neighbors(&x) {
            if seen.insert(y) {
                edges.push((x, y));
                queue.push_back(y);
            }
        }
    }
    SpanningTree::new(g, edges).unwrap()
}

#[test]
fn values_survive_the_labelling_round_trip() {
    for ctx in fields() {
        for n in 2..=5 {
            let mut r = rng(n as u64);
            let psi = random::value_function(n, ctx, &mut r).unwrap();
            let el = EdgeLabelling::from_values_canonical(&psi).unwrap();
            assert_eq!(el.value_function().unwrap(), psi);
            let cba = el.reconstruct_standard().unwrap();
            assert!(cba.verify().is_ok());
            assert_eq!(cba.value_function().unwrap(), psi);
            assert_eq!(EdgeLabelling::from_concrete(&cba).unwrap(), el);
        }
    }
}

#[test]
fn closed_form_agrees_with_the_recursion() {
    // Row r = 0 holds the boundary vectors; each black clique then determines
    // its top vertex as −β_{λμ} 𝓑_μ − β_{λν} 𝓑_ν.
    for ctx in fields() {
        for n in 2..=5 {
            let mut r = rng(100 + n as u64);
            let el = random::labelling(n, ctx, &mut r).unwrap();
            let m = random::invertible_matrix(ctx, n + 1, &mut r).unwrap();
            let boundary = m.columns();
            let mut b: BTreeMap<Location, Vector> = (0..=n).map(|i| (loc(0, n - i, i), boundary[i].clone())).collect();
            for row in 1..=n {
                for s in 0..=n - row {
                    let t = n - row - s;
                    let (lam, mu, nu) = (loc(row, s, t), loc(row - 1, s + 1, t), loc(row - 1, s, t + 1));
                    let v = Vector::combination(
                        ctx,
                        n + 1,
                        &[(el.label(&lam, &mu).unwrap().neg(), &b[&mu]), (el.label(&lam, &nu).unwrap().neg(), &b[&nu])],
                    );
                    b.insert(lam, v);
                }
            }
            let cba = el.reconstruct(&boundary).unwrap();
            for (l, v) in cba.iter() {
                assert_eq!(v, &b[l], "at {l}");
            }
            assert!(cba.verify().is_ok());
        }
    }
}

#[test]
fn coefficient_matrices_have_rank_one() {
    for ctx in fields() {
        for n in 1..=5 {
            let el = random::labelling(n, ctx, &mut rng(7)).unwrap();
            for c in el.grid().black_cliques() {
                assert_eq!(el.coefficient_matrix(&c).unwrap().rank(), 1);
            }
        }
    }
}

#[test]
fn other_spanning_trees_give_similar_labellings() {
    for ctx in fields() {
        for n in 2..=5 {
            let psi = random::value_function(n, ctx, &mut rng(3)).unwrap();
            let g = DeltaGrid::new(n);
            let a = EdgeLabelling::from_values_canonical(&psi).unwrap();
            let b = EdgeLabelling::from_values(&psi, &bfs_tree(&g, loc(n, 0, 0)), None).unwrap();
            assert_eq!(b.value_function().unwrap(), psi);
            let kappa = a.similarity_witness(&b).unwrap().expect("similar");
            for ((x, y), c) in a.labels() {
                assert_eq!(c * &kappa[x], b.label(x, y).unwrap() * &kappa[y]);
            }
        }
    }
}

#[test]
fn tree_values_are_respected() {
    let ctx = FieldContext::Rationals;
    let n = 3;
    let g = DeltaGrid::new(n);
    let tree = g.canonical_spanning_tree().unwrap();
    let mut r = rng(5);
    let tv: BTreeMap<_, _> = tree.edges().iter().map(|e| (*e, random::nonzero_scalar(ctx, &mut r))).collect();
    let psi = random::value_function(n, ctx, &mut r).unwrap();
    let el = EdgeLabelling::from_values(&psi, &tree, Some(&tv)).unwrap();
    for ((a, b), c) in &tv {
        assert_eq!(el.label(a, b).unwrap(), c);
    }
    assert_eq!(el.value_function().unwrap(), psi);
    assert!(el.is_similar(&EdgeLabelling::from_values_canonical(&psi).unwrap()).unwrap());
}

#[test]
fn hexagon_walk_collects_the_three_white_values() {
    for ctx in fields() {
        for n in 3..=5 {
            let psi = random::value_function(n, ctx, &mut rng(11)).unwrap();
            let el = EdgeLabelling::from_values_canonical(&psi).unwrap();
            for lam in el.grid().locations().iter().filter(|l| l.r > 0 && l.s > 0 && l.t > 0) {
                let steps = [ALPHA, neg_root(GAMMA), BETA, neg_root(ALPHA), GAMMA, neg_root(BETA)];
                let mut walk: Vec<Location> = steps.iter().map(|d| lam.offset(*d).unwrap()).collect();
                walk.push(walk[0]);
                let (r, s, t) = (lam.r, lam.s, lam.t);
                let expected = [loc(r, s - 1, t - 1), loc(r - 1, s, t - 1), loc(r - 1, s - 1, t)]
                    .iter()
                    .fold(ctx.one(), |acc, b| &acc * psi.get(b).unwrap());
                assert_eq!(el.walk_value(&walk).unwrap(), expected);
            }
        }
    }
}

#[test]
fn boundary_walk_collects_every_value() {
    for ctx in fields() {
        for n in 2..=5 {
            let psi = random::value_function(n, ctx, &mut rng(12)).unwrap();
            let el = EdgeLabelling::from_values_canonical(&psi).unwrap();
            let mut walk = vec![loc(0, 0, n)];
            for d in [neg_root(GAMMA), neg_root(ALPHA), neg_root(BETA)] {
                for _ in 0..n {
                    let next = walk.last().unwrap().offset(d).unwrap();
                    walk.push(next);
                }
            }
            assert_eq!(walk.last(), Some(&loc(0, 0, n)));
            let all = psi.iter().fold(ctx.one(), |acc, (_, c)| &acc * c);
            assert_eq!(el.walk_value(&walk).unwrap(), all);
        }
    }
}

#[test]
fn geodesic_sums_match_path_enumeration() {
    let ctx = FieldContext::Rationals;
    for n in 1..=4 {
        let el = random::labelling(n, ctx, &mut rng(13)).unwrap();
        let g = el.grid().clone();
        for a in g.locations() {
            for b in g.locations() {
                let brute = g
                    .geodesic_paths(a, b)
                    .unwrap()
                    .iter()
                    .fold(ctx.zero(), |acc, p| &acc + &el.walk_value(p).unwrap());
                assert_eq!(el.geodesic_sum(a, b).unwrap(), brute);
            }
        }
    }
}

#[test]
fn dependent_boundary_vectors_break_the_array() {
    let ctx = FieldContext::prime(101).unwrap();
    let n = 3;
    let el = random::labelling(n, ctx, &mut rng(2)).unwrap();
    let mut boundary: Vec<Vector> = (0..=n).map(|i| Vector::unit(ctx, n + 1, i)).collect();
    boundary[2] = boundary[0].add(&boundary[1]).unwrap();
    assert!(!el.reconstruct(&boundary).unwrap().verify().is_ok());
}

#[test]
fn small_diameters_and_constants() {
    let ctx = FieldContext::RationalFunctions;
    let a = EdgeLabelling::all_ones(1, ctx);
    let mut r = rng(4);
    let b = random::concrete_array(1, ctx, true, &mut r).unwrap();
    let b = EdgeLabelling::from_concrete(&b).unwrap();
    assert!(a.is_similar(&b).unwrap());

    let q = ctx.q().unwrap();
    let one = EdgeLabelling::from_values_canonical(&ValueFunction::constant(3, &ctx.one()).unwrap()).unwrap();
    let qs = EdgeLabelling::from_values_canonical(&ValueFunction::constant(3, &q).unwrap()).unwrap();
    assert!(!one.is_similar(&qs).unwrap());
    assert!(one.similarity_witness(&qs).unwrap().is_none());
}

#[test]
fn invalid_labellings_are_rejected() {
    let ctx = FieldContext::Rationals;
    let el = random::labelling(2, ctx, &mut rng(1)).unwrap();
    let mut bad = el.labels().clone();
    let (e, c) = bad.iter().next().map(|(e, c)| (*e, c.clone())).unwrap();
    bad.insert(e, &c * &ctx.int(2));
    assert!(EdgeLabelling::new(2, ctx, bad).is_err());
    let mut off = el.labels().clone();
    off.insert((loc(0, 0, 2), loc(2, 0, 0)), ctx.one());
    assert!(EdgeLabelling::new(2, ctx, off).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rescaled_arrays_keep_their_class(n in 2usize..5, seed in any::<u64>()) {
        let ctx = FieldContext::prime(101).unwrap();
        let mut r = rng(seed);
        let cba = random::concrete_array(n, ctx, false, &mut r).unwrap();
        let kappa: BTreeMap<Location, Scalar> =
            cba.grid().locations().iter().map(|l| (*l, random::nonzero_scalar(ctx, &mut r))).collect();
        let other = cba.rescale(&kappa).unwrap();
        let a = EdgeLabelling::from_concrete(&cba).unwrap();
        let b = EdgeLabelling::from_concrete(&other).unwrap();
        prop_assert!(a.is_similar(&b).unwrap());
        prop_assert_eq!(a.value_function().unwrap(), b.value_function().unwrap());
    }

    #[test]
    fn values_determine_the_class(n in 2usize..5, s1 in any::<u64>(), s2 in any::<u64>()) {
        let ctx = FieldContext::prime(101).unwrap();
        let p = random::value_function(n, ctx, &mut rng(s1)).unwrap();
        let q = random::value_function(n, ctx, &mut rng(s2)).unwrap();
        let a = EdgeLabelling::from_values_canonical(&p).unwrap();
        let b = EdgeLabelling::from_values_canonical(&q).unwrap();
        prop_assert_eq!(a.is_similar(&b).unwrap(), p == q);
    }
}
