//! Named words used by the verification suites and the CLI.

use super::{GeneratorKind, Partition, WordGeneratorSpec};
use crate::rotation::Angle;

pub const CATALOG_NAMES: [&str; 5] = [
    "fibonacci",
    "tribonacci",
    "periodic-12",
    "periodic-123",
    "rotation-ternary",
];

fn exact(s: &str) -> Angle {
    s.parse().expect("catalog constant")
}

/// `None` for unknown names.
pub fn catalog_spec(name: &str, prefix_length: usize) -> Option<WordGeneratorSpec> {
    let kind = match name {
        "fibonacci" => GeneratorKind::Substitution {
            morphism: "0:01,1:0".parse().expect("valid"),
            seed: '0',
        },
        "tribonacci" => GeneratorKind::Substitution {
            morphism: "1:12,2:13,3:1".parse().expect("valid"),
            seed: '1',
        },
        "periodic-12" => GeneratorKind::Periodic {
            pattern: "12".into(),
        },
        "periodic-123" => GeneratorKind::Periodic {
            pattern: "123".into(),
        },
        // Interval lengths √2−1, √3−√2, 2−√3 are rationally independent.
        "rotation-ternary" => GeneratorKind::RotationTernary {
            alpha: exact("sqrt2-1"),
            x: exact("0"),
            cut1: exact("sqrt2-1"),
            cut2: exact("sqrt3-1"),
            symbols: ['1', '2', '3'],
        },
        "fibonacci-rotation" => GeneratorKind::RotationBinary {
            alpha: exact("2-phi"),
            x: exact("2-phi"),
            partition: Partition::A,
            symbols: ['0', '1'],
        },
        _ => return None,
    };
    Some(WordGeneratorSpec::new(kind, prefix_length))
}

pub fn default_catalog(prefix_length: usize) -> Vec<(String, WordGeneratorSpec)> {
    CATALOG_NAMES
        .iter()
        .map(|&n| (n.to_string(), catalog_spec(n, prefix_length).expect("known name")))
        .collect()
}
