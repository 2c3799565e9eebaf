use proptest::prelude::*;
use recoupler_core::io::{
    read_program, read_sign_matrix, read_system, write_program, write_sign_matrix, write_system,
    SystemDocument,
};
use recoupler_core::{emit, Purpose, SignMatrix, SpinSystem, Topology};

fn purpose() -> impl Strategy<Value = Purpose> {
    prop_oneof![
        Just(Purpose::Decouple),
        Just(Purpose::DecoupleZeemanFree),
        Just(Purpose::Recouple { i: 1, j: 2 }),
        Just(Purpose::KnnDecouple { k: 1 }),
        Just(Purpose::KnnRecouple { k: 1, i: 1, j: 2 }),
    ]
}

fn sign_matrix() -> impl Strategy<Value = SignMatrix> {
    (2usize..=9, 1usize..=70, purpose()).prop_flat_map(|(n, m, p)| {
        proptest::collection::vec(proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], m), n)
            .prop_map(move |e| SignMatrix::from_signs(&e, p).unwrap())
    })
}

proptest! {
    #[test]
    fn sign_matrices_round_trip(s in sign_matrix()) {
        let text = write_sign_matrix(&s);
        let back = read_sign_matrix(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(write_sign_matrix(&back), text);
    }

    #[test]
    fn programs_round_trip_bit_exactly(s in sign_matrix(), bits in 1u64..0x7fef_ffff_ffff_ffff) {
        let t = f64::from_bits(bits);
        prop_assume!(t.is_finite() && t > 0.0);
        let p = emit(&s, t).unwrap();
        let text = write_program(&p);
        let back = read_program(&text).unwrap();
        prop_assert_eq!(back.interval_duration().to_bits(), t.to_bits());
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(write_program(&back), text);
    }

    #[test]
    fn systems_round_trip(
        n in 2usize..=8,
        zeeman in proptest::collection::vec(-1e9f64..1e9, 8),
        g in proptest::collection::vec(-500.0f64..500.0, 28),
        chain in any::<bool>(),
    ) {
        let pairs = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j)));
        let couplings: Vec<_> = pairs
            .zip(&g)
            .filter(|&((i, j), _)| !chain || j - i <= 1)
            .map(|((i, j), &g)| (i, j, g))
            .collect();
        let doc = SystemDocument {
            system: SpinSystem::new(zeeman[..n].to_vec(), couplings).unwrap(),
            topology: chain.then(|| Topology::chain(n, 1)),
        };
        let text = write_system(&doc);
        let back = read_system(&text).unwrap();
        prop_assert_eq!(write_system(&back), text);
        prop_assert_eq!(back.topology, doc.topology);
        for i in 1..=n {
            let (a, b) = (back.system.zeeman(i), doc.system.zeeman(i));
            prop_assert!((a - b).abs() <= 1e-15 * b.abs());
        }
    }
}
