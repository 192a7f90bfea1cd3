//! Generation of the symbol set below the 5/2 cutoff and its negative
//! sector.

use std::time::Instant;
use wz_core::homogeneity::Homogeneity;
use wz_core::symbols::{generate_w, names, standard_cutoff, Symbol};

#[test]
fn negative_sector_is_the_eleven_known_symbols() {
    let start = Instant::now();
    let w = generate_w(standard_cutoff());

    let negatives: Vec<&Symbol> = w
        .iter()
        .filter(|s| s.homogeneity().unwrap().is_negative())
        .collect();
    assert_eq!(negatives.len(), 11, "negative sector size");

    let expected: Vec<(Symbol, Homogeneity)> = vec![
        (names::xi(), Homogeneity::with_kappa(-3, 2, -1, 1)),
        (names::xi2(), Homogeneity::with_kappa(-1, 1, -2, 1)),
        (names::xi3(), Homogeneity::with_kappa(-1, 2, -3, 1)),
        (names::xi3b(), Homogeneity::with_kappa(-1, 2, -3, 1)),
        (names::xi_x(), Homogeneity::with_kappa(-1, 2, -1, 1)),
        (names::xi4(), Homogeneity::with_kappa(0, 1, -4, 1)),
        (names::xi4b(), Homogeneity::with_kappa(0, 1, -4, 1)),
        (names::xi4c(), Homogeneity::with_kappa(0, 1, -4, 1)),
        (names::xi4e(), Homogeneity::with_kappa(0, 1, -4, 1)),
        (names::xi2x(), Homogeneity::with_kappa(0, 1, -2, 1)),
        (names::x_xi2(), Homogeneity::with_kappa(0, 1, -2, 1)),
    ];
    for (sym, expected_h) in &expected {
        assert!(negatives.contains(&sym), "missing negative symbol {sym}");
        assert_eq!(
            sym.homogeneity().unwrap(),
            *expected_h,
            "homogeneity of {sym}"
        );
    }

    assert!(
        start.elapsed().as_secs_f64() < 1.0,
        "generation and table check must finish within a second, took {:?}",
        start.elapsed()
    );
}

#[test]
fn contains_generators_and_core_set() {
    let w = generate_w(standard_cutoff());
    assert!(w.contains(&Symbol::one()));
    assert!(w.contains(&Symbol::x0()));
    assert!(w.contains(&Symbol::x1()));
    for (name, sym) in names::core_set() {
        assert!(w.contains(&sym), "core symbol {name} missing");
    }
}

#[test]
fn minimum_homogeneity_is_attained_only_by_the_noise() {
    let w = generate_w(standard_cutoff());
    let min = w
        .iter()
        .map(|s| s.homogeneity().unwrap())
        .min()
        .unwrap();
    assert_eq!(min, Homogeneity::with_kappa(-3, 2, -1, 1));
    let attaining: Vec<&Symbol> = w
        .iter()
        .filter(|s| s.homogeneity().unwrap() == min)
        .collect();
    assert_eq!(attaining, vec![&names::xi()]);
}

#[test]
fn everything_respects_the_cutoff() {
    let cutoff = standard_cutoff();
    let w = generate_w(cutoff);
    for s in &w {
        assert!(s.homogeneity().unwrap() <= cutoff, "{s} above cutoff");
    }
    // a borderline element: homogeneity 5/2 - 9k sits below (5/2, 0)
    let deep = wz_core::symbols::parse_symbol(
        "Xi I(Xi) I(Xi) I(Xi) I(Xi) I(Xi) I(Xi) I(Xi) I(Xi)",
    )
    .unwrap();
    assert_eq!(
        deep.homogeneity().unwrap(),
        Homogeneity::with_kappa(5, 2, -9, 1)
    );
    assert!(w.contains(&deep));
}

#[test]
fn smaller_cutoff_nests() {
    let small = generate_w(Homogeneity::zero());
    let big = generate_w(standard_cutoff());
    assert!(small.iter().all(|s| big.contains(s)));
    assert!(small.contains(&Symbol::one()));
    assert!(!small.contains(&Symbol::x1()));
}
