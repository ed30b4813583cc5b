use num_bigint::BigInt;
use proptest::prelude::*;

use graphjac::genjac::ModulusContext;
use graphjac::graph::{build_graph, Graph, Modulus};
use graphjac::jacobian::JacobianContext;
use graphjac::morphisms::functoriality_suite;
use graphjac::random::{random_covers, RandomConfig};

/// A connected graph: a random spanning tree plus arbitrary extra edges
/// (loops and parallel edges included).
fn graph() -> impl Strategy<Value = Graph> {
    (1usize..=6)
        .prop_flat_map(|n| {
            let parents: Vec<_> = (1..n).map(|v| 0..v).collect();
            (
                Just(n),
                parents,
                prop::collection::vec((0..n, 0..n), 0..7),
                any::<bool>(),
            )
        })
        .prop_map(|(n, parents, extra, flip)| {
            let names: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
            let mut edges: Vec<(usize, usize)> = parents
                .iter()
                .enumerate()
                .map(|(i, &p)| (p, i + 1))
                .collect();
            edges.extend(extra);
            let specs: Vec<(String, String, String)> = edges
                .iter()
                .enumerate()
                .map(|(k, &(a, b))| {
                    let (a, b) = if flip { (b, a) } else { (a, b) };
                    (format!("e{k}"), names[a].clone(), names[b].clone())
                })
                .collect();
            build_graph(&names, &specs).unwrap()
        })
}

fn graph_with_modulus() -> impl Strategy<Value = (Graph, Modulus)> {
    graph().prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), prop::collection::vec(0..n, 1..=4)).prop_map(|(g, pts)| {
            let m = Modulus::from_indices(&g, pts).unwrap();
            (g, m)
        })
    })
}

fn reduced_laplacian_det(ctx: &JacobianContext) -> BigInt {
    let keep: Vec<usize> = (1..ctx.graph().vertex_count()).collect();
    ctx.complex()
        .laplacian0()
        .select_rows(&keep)
        .select_columns(&keep)
        .det()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn jacobian_order_is_reduced_laplacian_det(g in graph()) {
        let ctx = JacobianContext::new(&g).unwrap();
        prop_assert!(ctx.verify_abel().is_ok());
        prop_assert_eq!(ctx.jac().order(), Some(reduced_laplacian_det(&ctx)));
        prop_assert!(ctx.jac().isomorphic_to(ctx.cl0()));
    }

    #[test]
    fn groups_do_not_depend_on_orientation((g, m) in graph_with_modulus(), mask in any::<u16>()) {
        let flipped: Vec<String> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, e)| e.id.clone())
            .collect();
        let h = g.reverse_edges(&flipped).unwrap();
        let a = ModulusContext::new(&g, &m).unwrap();
        let b = ModulusContext::new(&h, &Modulus::from_indices(&h, m.points().to_vec()).unwrap()).unwrap();
        prop_assert_eq!(a.jm().summary(), b.jm().summary());
        prop_assert_eq!(a.pm().summary(), b.pm().summary());
        prop_assert_eq!(a.base().pic().summary(), b.base().pic().summary());
    }

    #[test]
    fn generalized_abel_holds((g, m) in graph_with_modulus()) {
        let ctx = ModulusContext::new(&g, &m).unwrap();
        prop_assert!(ctx.verify_abel_m().is_ok());
        prop_assert_eq!(ctx.jm().free_rank() + 1, m.len());
        let r = ctx.verify_diagram_m();
        prop_assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn torsion_of_jm_divides_jacobian_order((g, m) in graph_with_modulus()) {
        let ctx = ModulusContext::new(&g, &m).unwrap();
        let order = ctx.base().jac().order().unwrap();
        let torsion: BigInt = ctx.jm().invariant_factors().iter().product();
        prop_assert_eq!(order % torsion, BigInt::from(0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn covers_are_functorial(seed in any::<u64>()) {
        let config = RandomConfig::default();
        let cover = random_covers(seed, 1, &config).unwrap().remove(0);
        let r = functoriality_suite(
            &cover.morphism,
            Some(&cover.source_modulus),
            Some(&cover.target_modulus),
        )
        .unwrap();
        prop_assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}
