use proptest::prelude::*;
use smallq::semiinf::{Direction, ResolutionChoice, TorOptions, is_induced};
use smallq::tensorcat::TensorWord;
use smallq::uq::{Engine, ModuleMap};

fn eng() -> Engine {
    Engine::sl2(5)
}

#[test]
fn methods_agree_on_small_inputs() {
    let e = eng();
    let b = e.unit_right();
    let inputs = [
        ("B", e.unit()),
        ("L(8)", e.simple(8).unwrap()),
        ("P(0)", e.projective_cover(0).unwrap()),
        ("P(2)", e.projective_cover(2).unwrap()),
        ("M+(2)", e.coverma(2).unwrap()),
    ];
    for (name, n) in &inputs {
        let one = e.tor_semiinf(&b, n, (-2, 2)).unwrap();
        let two = e.tor_semiinf_twosided(&b, n, (-2, 2)).unwrap();
        let pert = e
            .tor_semiinf_with(&b, n, (-2, 2), &TorOptions { resolution: ResolutionChoice::Perturbed, ..TorOptions::default() })
            .unwrap();
        assert_eq!(one.degrees, two.degrees, "{name}");
        assert_eq!(one.degrees, pert.degrees, "{name}");
    }
}

#[test]
fn known_profiles() {
    let e = eng();
    let b = e.unit_right();
    let sup = |n| e.tor_semiinf(&b, &n, (-3, 3)).unwrap().support();
    assert!(sup(e.unit()).is_empty());
    assert!(sup(e.simple(2).unwrap()).is_empty());
    assert_eq!(sup(e.coverma(0).unwrap()), [(0, 1)].into_iter().collect());
    assert_eq!(sup(e.coverma(2).unwrap()), [(1, 1)].into_iter().collect());
    for lam in [-8, -2, 0, 3] {
        assert!(sup(e.verma(lam).unwrap()).is_empty(), "M({lam})");
    }
}

#[test]
fn projective_summands_direct_vs_tower() {
    let e = eng();
    let b = e.unit_right();
    for n in [e.projective_cover(0).unwrap(), e.projective_cover(2).unwrap(), e.simple(4).unwrap(), e.coverma(-2).unwrap()] {
        let t = e.tor_semiinf(&b, &n, (-3, 3)).unwrap();
        let d = e.tor_direct(&b, &n, (-3, 3)).unwrap();
        assert_eq!(t.degrees, d.degrees);
    }
}

#[test]
fn split_matches_whole_word() {
    let e = eng();
    let word = TensorWord::new(vec![e.simple(1).unwrap(), e.simple(1).unwrap(), e.simple(8).unwrap()]).unwrap();
    let dec = e.decompose_word(&word).unwrap();
    let b = e.unit_right();
    let whole = e.tor_semiinf(&b, &word.module, (-1, 1)).unwrap();
    let split = e.tor_semiinf_split(&b, &dec, (-1, 1), &TorOptions::default()).unwrap();
    assert_eq!(whole.degrees, split.degrees);
}

#[test]
fn ext_is_tor_against_the_dual() {
    let e = eng();
    let m = e.unit();
    let n = e.projective_cover(0).unwrap();
    let ext = e.ext_semiinf(&m, &n, (-1, 1)).unwrap();
    assert_eq!(ext[&0], 1);
}

#[test]
fn induced_maps_are_functorial() {
    let e = eng();
    let b = e.unit_right();
    let n = e.projective_cover(0).unwrap();
    let c = e.zeta(2);
    let f = ModuleMap::scalar(&n, &c);
    let g = ModuleMap::scalar(&n, &e.zeta(3));
    let tf = e.induced_map_on_tor(&b, &f, &n, &n, (0, 0)).unwrap();
    let tg = e.induced_map_on_tor(&b, &g, &n, &n, (0, 0)).unwrap();
    let tgf = e.induced_map_on_tor(&b, &g.compose(&f), &n, &n, (0, 0)).unwrap();
    assert_eq!(tg[&0].matmul(&tf[&0]), tgf[&0]);
}

#[test]
fn ordinary_tor_and_uminus() {
    let e = eng();
    let b = e.unit_right();
    assert_eq!(e.tor_c(&b, &e.unit(), 0).unwrap()[&0], 1);
    let p0 = e.tor_c(&b, &e.projective_cover(0).unwrap(), 3).unwrap();
    assert_eq!(p0.values().sum::<usize>(), 1);
    assert_eq!(e.uminus_homology(&e.unit(), 0)[&0], 1);
    assert_eq!(e.uminus_homology(&e.unit(), -2)[&1], 1);
}

#[test]
fn tower_truncations() {
    let e = eng();
    for n in 1..=4 {
        assert!(e.k_tower_check(n).unwrap().holds(), "n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shapiro(lam in -6i64..=6, w in 0i64..=8) {
        let e = eng();
        let m = e.simple(w).unwrap();
        prop_assert!(e.shapiro_check(&m, lam).unwrap());
    }

    #[test]
    fn down_left_resolutions_are_exact(w in 0i64..=8, depth in 1usize..=3) {
        let e = eng();
        let v = e.simple(w).unwrap();
        let r = e.induced_resolution(&v, Direction::DownLeft, depth).unwrap();
        let c = &r.complex;
        prop_assert!(c.check());
        prop_assert!(c.terms.iter().all(|t| is_induced(t, false)));
        prop_assert!(r.augmentation.is_intertwiner(c.term(0).unwrap(), &v));
        for k in c.lo + 1..c.hi() {
            prop_assert!(c.is_exact_at(k));
        }
    }

    #[test]
    fn stable_under_larger_cap(w in 0i64..=8) {
        let e = eng();
        let b = e.unit_right();
        let n = e.simple(w).unwrap();
        let small = e.tor_semiinf(&b, &n, (-1, 1)).unwrap();
        let opts = TorOptions { cap: 8, ..TorOptions::default() };
        let big = e.tor_semiinf_with(&b, &n, (-1, 1), &opts).unwrap();
        prop_assert_eq!(small.degrees, big.degrees);
    }
}
