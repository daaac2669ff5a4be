use fusion_core::conjugacy::is_conjugate;
use fusion_core::diagram::all_labelings;
use fusion_core::epattern::{epattern_fuse, epattern_fuse_with, find_pattern, PatternConfig};
use fusion_core::oracle::{signature_fuse, AdjointOracle, SignatureMatch, SignatureTable};
use fusion_core::weight::weight_fuse;
use fusion_core::{DynkinDiagram, Family, Fuser, LabeledDiagram, Method};

fn check_sparse(n: u32) {
    let d = DynkinDiagram::new(Family::E, n).unwrap();
    let oracle = AdjointOracle::new(&d).unwrap();
    let table = SignatureTable::build(&d).unwrap();
    for x in all_labelings(&d, true) {
        let w = weight_fuse(&x).unwrap();
        let e = epattern_fuse(&x).unwrap();
        let SignatureMatch::Unique(o) = signature_fuse(&x, &oracle, &table).unwrap() else {
            panic!("{x}: ambiguous signature");
        };
        assert!(is_conjugate(&d, w, o), "{x}: weight {w}, oracle {o}");
        assert!(is_conjugate(&d, e, o), "{x}: epattern {e}, oracle {o}");
    }
}

#[test]
fn e6_sparse_methods_agree() {
    check_sparse(6);
}

#[test]
fn e7_sparse_methods_agree() {
    check_sparse(7);
}

#[test]
fn relaxed_pattern_four_changes_nothing_on_e7() {
    let d = DynkinDiagram::new(Family::E, 7).unwrap();
    let relaxed = PatternConfig { relaxed4: true };
    for x in all_labelings(&d, true) {
        let strict = epattern_fuse(&x).unwrap();
        assert!(is_conjugate(&d, strict, epattern_fuse_with(&x, &relaxed).unwrap()), "{x}");
    }
}

#[test]
fn every_mixed_connected_e8_labeling_has_a_pattern() {
    let d = DynkinDiagram::new(Family::E, 8).unwrap();
    for x in all_labelings(&d, false) {
        let single_sign = x.plus().is_empty() || x.minus().is_empty();
        assert_eq!(find_pattern(&x).unwrap().is_none(), single_sign, "{x}");
    }
}

#[test]
fn signature_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = DynkinDiagram::new(Family::E, 6).unwrap();
    let built = SignatureTable::load_or_build(&d, Some(dir.path())).unwrap();
    let path = SignatureTable::cache_path(dir.path(), Family::E, 6);
    assert!(path.exists());
    assert_eq!(SignatureTable::load_or_build(&d, Some(dir.path())).unwrap(), built);
    assert_eq!(built.entries.len(), 17);

    std::fs::write(&path, "not json").unwrap();
    assert_eq!(SignatureTable::load_or_build(&d, Some(dir.path())).unwrap(), built);
}

#[test]
fn fuser_cache_dir_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let fuser = Fuser::new(Some(dir.path().to_path_buf()));
    let x = LabeledDiagram::from_lists(Family::E, 7, &[1, 2, 3], &[4, 5, 6, 7]).unwrap();
    let auto = fuser.fuse(&x, Method::Auto).unwrap();
    let oracle = fuser.fuse(&x, Method::Oracle).unwrap();
    assert!(oracle.admits(x.diagram(), auto.j));
    assert!(SignatureTable::cache_path(dir.path(), Family::E, 7).exists());
}
