//! Complex of groups, from JSON to development.

use relhyp_core::complex::{
    all_maximal_trees, fixtures, fundamental_presentation, maximal_tree, tietze_simplify, validate_cog,
    SimpleComplexOfGroups,
};
use relhyp_core::development::{develop, Backend, BackendKind, DEFAULT_MAX_SIMPLICES};
use relhyp_core::group::todd_coxeter;

/// C2 on both vertices and on the edge, glued by isomorphisms; the
/// fundamental group is C2 and the development is the edge itself.
fn glued_c2(with_pi1: bool) -> String {
    let pi1 = if with_pi1 {
        r#", "pi1": {"group": {"kind": "cyclic", "order": 2},
                    "local": {"0": {"images": ["a"], "subgroup": [1]},
                              "1": {"images": ["a"], "subgroup": [1]},
                              "2": {"images": ["a"], "subgroup": [1]}}}"#
    } else {
        ""
    };
    format!(
        r#"{{"complex": {{"vertices": [0, 1], "simplices": [[0], [1], [0, 1]]}},
            "groups": {{"0": {{"generators": ["x"], "relators": ["aa"]}},
                       "1": {{"generators": ["y"], "relators": ["aa"]}},
                       "2": {{"generators": ["z"], "relators": ["aa"]}}}},
            "maps": {{"0,2": {{"z": "a"}}, "1,2": {{"z": "a"}}}}{pi1}}}"#
    )
}

#[test]
fn backends_agree_on_a_finite_group() {
    let table = SimpleComplexOfGroups::from_json(&glued_c2(false)).unwrap();
    let supplied = SimpleComplexOfGroups::from_json(&glued_c2(true)).unwrap();
    let bt = Backend::from_cog(&table, 1000).unwrap();
    let bs = Backend::from_cog(&supplied, 1000).unwrap();
    assert_eq!(bt.kind, BackendKind::CosetTable);
    assert_eq!(bs.kind, BackendKind::Supplied);
    for radius in 0..4 {
        let dt = develop(&table, &bt, radius, DEFAULT_MAX_SIMPLICES, 1000).unwrap();
        let ds = develop(&supplied, &bs, radius, DEFAULT_MAX_SIMPLICES, 1000).unwrap();
        assert_eq!(dt.fibers(), ds.fibers());
    }
    let d = develop(&table, &bt, 3, DEFAULT_MAX_SIMPLICES, 1000).unwrap();
    assert_eq!(d.fibers(), vec![1, 1, 1]);
}

#[test]
fn faces_project_to_faces() {
    for (name, radius) in [("dinfty", 4), ("s3_amalgam", 2), ("z_dinfty", 2)] {
        let text = fixtures::ALL.iter().find(|(n, _)| *n == name).unwrap().1;
        let c = SimpleComplexOfGroups::from_json(text).unwrap();
        let b = Backend::from_cog(&c, 1000).unwrap();
        let d = develop(&c, &b, radius, DEFAULT_MAX_SIMPLICES, 1000).unwrap();
        for (i, s) in d.simplices.iter().enumerate() {
            for &f in &d.faces[i] {
                assert!(c.complex.is_proper_face(d.simplices[f].simplex, s.simplex), "{name}: {i} -> {f}");
            }
            let want = c.complex.simplex(s.simplex).len();
            assert_eq!(s.vertices.len(), want);
        }
    }
}

#[test]
fn compiled_fixtures_have_the_expected_orders() {
    // finite fundamental groups: single vertex C2, trivial triangle
    for (text, order) in [(fixtures::SINGLE_VERTEX, 2), (fixtures::TRIVIAL_TRIANGLE, 1)] {
        let c = SimpleComplexOfGroups::from_json(text).unwrap();
        assert!(validate_cog(&c).ok);
        for tree in all_maximal_trees(&c.scwol, 8) {
            let p = fundamental_presentation(&c, &tree).unwrap().presentation;
            let t = todd_coxeter(&p, &[], 1000).unwrap();
            assert!(t.is_complete());
            assert_eq!(t.len(), order);
            let t = todd_coxeter(&tietze_simplify(&p, 100), &[], 1000).unwrap();
            assert_eq!(t.len(), order);
        }
    }
}

#[test]
fn edge_generators_die_after_simplification() {
    let c = SimpleComplexOfGroups::from_json(fixtures::S3_AMALGAM).unwrap();
    let compiled = fundamental_presentation(&c, &maximal_tree(&c.scwol).unwrap()).unwrap();
    assert!(compiled.counts.tree > 0);
    let q = tietze_simplify(&compiled.presentation, 1000);
    assert!(q.generator_names().iter().all(|n| n.starts_with('s')), "{:?}", q.generator_names());
}
