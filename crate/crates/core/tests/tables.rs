use cvdecomp::solver::{library, refine_first_step, table, verify_scheme, Family};

#[test]
fn first_step_tables_refine_close_to_printed_values() {
    for name in ["I", "II", "IV", "V"] {
        let t = table(name).unwrap();
        let r = refine_first_step(&t).unwrap();
        println!("table {name}: drift {:.3e} residual {:.3e}", r.drift, r.residual);
        assert!(r.residual < 1e-12, "table {name}");
        assert!(r.drift < 1e-4, "table {name} drift {}", r.drift);
        let rep = verify_scheme(&r.scheme);
        assert!(rep.max_residual < 1e-10, "table {name}: {rep:?}");
    }
}

#[test]
fn library_orders_and_counts() {
    let lib = library();
    let c: Vec<(usize, u32)> = lib.commutator.iter().map(|s| (s.gate_count(), s.order)).collect();
    let n: Vec<(usize, u32)> = lib.nested.iter().map(|s| (s.gate_count(), s.order)).collect();
    println!("{c:?} {n:?}");
    assert_eq!(c, vec![(4, 2), (10, 4), (16, 5), (144, 9)]);
    assert_eq!(n, vec![(9, 4), (15, 5), (25, 6), (120, 9)]);
    for s in lib.family(Family::Commutator).iter().chain(lib.family(Family::Nested)) {
        let rep = verify_scheme(s);
        assert!(rep.max_residual < 1e-8, "{}: {:.3e}", s.name, rep.max_residual);
    }
}
