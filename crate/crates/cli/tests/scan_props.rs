use degen_cli::config::{RadiiSpec, RunConfig};
use degen_cli::scan::{read_csv, run_scan, write_csv};
use degen_cli::setup::{FamilyKind, SectionKind};
use proptest::prelude::*;

fn arb_config() -> impl Strategy<Value = RunConfig> {
    let family = prop_oneof![
        (Just((FamilyKind::Power, SectionKind::A)), 1u32..400),
        (Just((FamilyKind::Rotation, SectionKind::A)), 1u32..20),
        (Just((FamilyKind::Quadratic, SectionKind::A)), 1u32..20),
        (Just((FamilyKind::Quadratic, SectionKind::V)), 1u32..20),
    ];
    (family, 0.1f64..0.45, 2usize..4, 1usize..4, 8usize..24, prop::sample::select(vec![512u32, 640])).prop_map(
        |(((kind, section), end_exp), start, count, angles, depth, prec)| {
            let radii = RadiiSpec::parse(&format!("{start}:1e-{end_exp}:{count}"), prec).unwrap();
            let mut c = RunConfig::new(kind, section, radii, prec);
            c.angles = angles;
            c.depth = depth;
            c
        },
    )
}

fn csv_bytes(config: &RunConfig) -> Vec<u8> {
    let mut out = Vec::new();
    write_csv(&run_scan(config).unwrap().rows, &mut out).unwrap();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn emitted_csv_survives_a_round_trip(config in arb_config()) {
        let first = csv_bytes(&config);
        let mut second = Vec::new();
        write_csv(&read_csv(first.as_slice()).unwrap(), &mut second).unwrap();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn identical_configs_give_identical_csv(config in arb_config()) {
        prop_assert_eq!(csv_bytes(&config), csv_bytes(&config.clone()));
    }
}
