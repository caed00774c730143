use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::{Alphabet, FiniteWord, WordError};
use crate::rotation::{Angle, OrbitCoder};

pub use crate::rotation::Partition;

/// A letter-to-word substitution over its own key set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    images: BTreeMap<char, String>,
}

impl Morphism {
    pub fn new(images: impl IntoIterator<Item = (char, String)>) -> Result<Self, WordError> {
        let images: BTreeMap<char, String> = images.into_iter().collect();
        if images.is_empty() {
            return Err(WordError::InvalidParameter("empty morphism".into()));
        }
        for (k, img) in &images {
            if img.is_empty() {
                return Err(WordError::InvalidParameter(format!("image of {k:?} is empty")));
            }
            if let Some(c) = img.chars().find(|c| !images.contains_key(c)) {
                return Err(WordError::InvalidParameter(format!(
                    "image of {k:?} uses {c:?}, which has no image"
                )));
            }
        }
        Ok(Morphism { images })
    }

    /// Sorted domain letters.
    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.images.keys().copied()).expect("distinct nonempty keys")
    }

    pub fn image(&self, c: char) -> Option<&str> {
        self.images.get(&c).map(String::as_str)
    }

    pub fn apply(&self, w: &FiniteWord) -> Result<FiniteWord, WordError> {
        let alphabet = w.alphabet_arc().clone();
        let mut out = String::new();
        for i in 0..w.len() {
            let c = w.symbol_at(i);
            out.push_str(self.image(c).ok_or(WordError::UnknownSymbol(c))?);
        }
        FiniteWord::from_str_with(alphabet, &out)
    }

    /// `m[i][j] = |σ(j)|_i` in alphabet order.
    pub fn incidence_matrix(&self) -> Vec<Vec<u64>> {
        let alphabet = self.alphabet();
        let d = alphabet.len();
        let mut m = vec![vec![0u64; d]; d];
        for (j, img) in self.images.values().enumerate() {
            for c in img.chars() {
                let i = alphabet.index_of(c).expect("closed morphism") as usize;
                m[i][j] += 1;
            }
        }
        m
    }
}

/// Parses `0:01,1:0`.
impl FromStr for Morphism {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, WordError> {
        let mut images = Vec::new();
        for rule in s.split(',').map(str::trim).filter(|r| !r.is_empty()) {
            let (k, v) = rule
                .split_once(':')
                .or_else(|| rule.split_once("->"))
                .ok_or_else(|| WordError::InvalidParameter(format!("bad rule {rule:?}")))?;
            let mut ks = k.trim().chars();
            let (Some(key), None) = (ks.next(), ks.next()) else {
                return Err(WordError::InvalidParameter(format!("bad letter in rule {rule:?}")));
            };
            images.push((key, v.trim().to_string()));
        }
        Morphism::new(images)
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rules: Vec<String> = self.images.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        write!(f, "{}", rules.join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorKind {
    Periodic {
        pattern: String,
    },
    Substitution {
        morphism: Morphism,
        seed: char,
    },
    /// Codes `[0, 1−α)` as `symbols[0]` and `[1−α, 1)` as `symbols[1]`
    /// (closed sides swapped under partition B).
    RotationBinary {
        alpha: Angle,
        x: Angle,
        partition: Partition,
        symbols: [char; 2],
    },
    /// Codes `[0,cut1)`, `[cut1,cut2)`, `[cut2,1)` as the three symbols.
    RotationTernary {
        alpha: Angle,
        x: Angle,
        cut1: Angle,
        cut2: Angle,
        symbols: [char; 3],
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordGeneratorSpec {
    pub kind: GeneratorKind,
    pub prefix_length: usize,
}

impl WordGeneratorSpec {
    pub fn new(kind: GeneratorKind, prefix_length: usize) -> Self {
        WordGeneratorSpec {
            kind,
            prefix_length,
        }
    }

    pub fn with_length(&self, prefix_length: usize) -> Self {
        WordGeneratorSpec {
            kind: self.kind.clone(),
            prefix_length,
        }
    }

    pub fn alphabet(&self) -> Result<Alphabet, WordError> {
        match &self.kind {
            GeneratorKind::Periodic { pattern } => Alphabet::inferred(pattern),
            GeneratorKind::Substitution { morphism, .. } => Ok(morphism.alphabet()),
            GeneratorKind::RotationBinary { symbols, .. } => Alphabet::new(symbols.iter().copied()),
            GeneratorKind::RotationTernary { symbols, .. } => Alphabet::new(symbols.iter().copied()),
        }
    }

    /// Parses a `key=value` block (one pair per line or `;`-separated):
    ///
    /// ```text
    /// kind=substitution
    /// morphism=0:01,1:0
    /// seed=0
    /// len=34
    /// ```
    ///
    /// Rotation kinds take `alpha`, `x`, optional `partition` (A|B),
    /// `cut1`/`cut2` (ternary) and optional `symbols`.
    pub fn from_kv(text: &str) -> Result<Self, WordError> {
        let mut kv = BTreeMap::new();
        for item in text.split(['\n', ';']).map(str::trim) {
            if item.is_empty() || item.starts_with('#') {
                continue;
            }
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| WordError::InvalidParameter(format!("expected key=value, got {item:?}")))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| {
            kv.get(k)
                .cloned()
                .ok_or_else(|| WordError::InvalidParameter(format!("missing key {k:?}")))
        };
        let angle = |k: &str| -> Result<Angle, WordError> {
            get(k)?
                .parse()
                .map_err(|e| WordError::InvalidParameter(format!("{k}: {e}")))
        };
        let len: usize = get("len")?
            .parse()
            .map_err(|_| WordError::InvalidParameter("len must be a positive integer".into()))?;
        let kind = match get("kind")?.as_str() {
            "periodic" => GeneratorKind::Periodic {
                pattern: get("pattern")?,
            },
            "substitution" => {
                let seed = get("seed")?;
                let mut cs = seed.chars();
                let (Some(seed), None) = (cs.next(), cs.next()) else {
                    return Err(WordError::InvalidParameter("seed must be one letter".into()));
                };
                GeneratorKind::Substitution {
                    morphism: get("morphism")?.parse()?,
                    seed,
                }
            }
            "rotation-binary" => GeneratorKind::RotationBinary {
                alpha: angle("alpha")?,
                x: angle("x")?,
                partition: match kv.get("partition") {
                    Some(p) => p.parse().map_err(WordError::InvalidParameter)?,
                    None => Partition::A,
                },
                symbols: symbols_from(kv.get("symbols"), ['0', '1'])?,
            },
            "rotation-ternary" => GeneratorKind::RotationTernary {
                alpha: angle("alpha")?,
                x: angle("x")?,
                cut1: angle("cut1")?,
                cut2: angle("cut2")?,
                symbols: symbols_from(kv.get("symbols"), ['1', '2', '3'])?,
            },
            other => return Err(WordError::InvalidParameter(format!("unknown kind {other:?}"))),
        };
        Ok(WordGeneratorSpec::new(kind, len))
    }
}

fn symbols_from<const N: usize>(given: Option<&String>, default: [char; N]) -> Result<[char; N], WordError> {
    match given {
        None => Ok(default),
        Some(s) => {
            let v: Vec<char> = s.chars().collect();
            v.try_into()
                .map_err(|_| WordError::InvalidParameter(format!("symbols must have {N} letters")))
        }
    }
}

/// Materializes the length-`prefix_length` prefix of the specified word.
pub fn generate(spec: &WordGeneratorSpec) -> Result<FiniteWord, WordError> {
    let n = spec.prefix_length;
    if n == 0 {
        return Err(WordError::InvalidParameter("prefix length must be positive".into()));
    }
    let alphabet = Arc::new(spec.alphabet()?);
    let data = match &spec.kind {
        GeneratorKind::Periodic { pattern } => {
            let idx: Vec<u8> = pattern
                .chars()
                .map(|c| alphabet.index_of(c).expect("inferred alphabet"))
                .collect();
            idx.iter().copied().cycle().take(n).collect()
        }
        GeneratorKind::Substitution { morphism, seed } => fixed_point(morphism, *seed, &alphabet, n)?,
        GeneratorKind::RotationBinary {
            alpha,
            x,
            partition,
            ..
        } => {
            let cut = match alpha {
                Angle::Exact(a) => Angle::Exact(&crate::exact::ExactReal::one() - a),
                Angle::Inexact(a) => Angle::Inexact(1.0 - a),
            };
            let degenerate = match alpha {
                Angle::Exact(a) => a.is_zero(),
                Angle::Inexact(a) => *a == 0.0,
            };
            // α = 0 leaves no interior cut: the orbit stays in the low interval
            let cuts = if degenerate { vec![] } else { vec![cut] };
            code_orbit(&OrbitCoder::new(alpha, x, &cuts, *partition)?, n)?
        }
        GeneratorKind::RotationTernary {
            alpha, x, cut1, cut2, ..
        } => code_orbit(
            &OrbitCoder::new(alpha, x, &[cut1.clone(), cut2.clone()], Partition::A)?,
            n,
        )?,
    };
    FiniteWord::from_indices(alphabet, data)
}

fn code_orbit(coder: &OrbitCoder, n: usize) -> Result<Vec<u8>, WordError> {
    (0..n as u64)
        .map(|k| coder.interval_at(k).map(|i| i as u8).map_err(WordError::from))
        .collect()
}

fn fixed_point(m: &Morphism, seed: char, alphabet: &Alphabet, n: usize) -> Result<Vec<u8>, WordError> {
    let seed_img = m.image(seed).ok_or(WordError::UnknownSymbol(seed))?;
    if !seed_img.starts_with(seed) || seed_img.chars().count() < 2 {
        return Err(WordError::NonProlongableMorphism(seed));
    }
    let images: Vec<Vec<u8>> = alphabet
        .symbols()
        .iter()
        .map(|&c| {
            m.image(c)
                .expect("closed morphism")
                .chars()
                .map(|s| alphabet.index_of(s).expect("closed morphism"))
                .collect()
        })
        .collect();
    let s = alphabet.index_of(seed).expect("seed in alphabet") as usize;
    let mut out = images[s].clone();
    let mut i = 1;
    while out.len() < n {
        let next = out[i] as usize;
        out.extend_from_slice(&images[next]);
        i += 1;
    }
    out.truncate(n);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactReal;

    const FIBONACCI_34: &str = "0100101001001010010100100101001001";

    fn fib(n: usize) -> WordGeneratorSpec {
        WordGeneratorSpec::new(
            GeneratorKind::Substitution {
                morphism: "0:01,1:0".parse().unwrap(),
                seed: '0',
            },
            n,
        )
    }

    #[test]
    fn fibonacci_prefix() {
        assert_eq!(generate(&fib(34)).unwrap().to_string(), FIBONACCI_34);
    }

    #[test]
    fn periodic_pattern() {
        let spec = WordGeneratorSpec::new(GeneratorKind::Periodic { pattern: "12".into() }, 6);
        assert_eq!(generate(&spec).unwrap().to_string(), "121212");
    }

    #[test]
    fn rational_rotation() {
        let spec = WordGeneratorSpec::new(
            GeneratorKind::RotationBinary {
                alpha: "1/4".parse().unwrap(),
                x: "0".parse().unwrap(),
                partition: Partition::A,
                symbols: ['0', '1'],
            },
            8,
        );
        assert_eq!(generate(&spec).unwrap().to_string(), "00010001");
    }

    #[test]
    fn golden_rotation_matches_substitution() {
        let alpha = Angle::Exact("2-phi".parse::<ExactReal>().unwrap());
        let spec = WordGeneratorSpec::new(
            GeneratorKind::RotationBinary {
                alpha: alpha.clone(),
                x: alpha,
                partition: Partition::A,
                symbols: ['0', '1'],
            },
            1000,
        );
        assert_eq!(generate(&spec).unwrap(), generate(&fib(1000)).unwrap());
    }

    #[test]
    fn non_prolongable_and_bad_morphisms() {
        let spec = WordGeneratorSpec::new(
            GeneratorKind::Substitution {
                morphism: "0:10,1:0".parse().unwrap(),
                seed: '0',
            },
            10,
        );
        assert_eq!(generate(&spec), Err(WordError::NonProlongableMorphism('0')));
        let spec = WordGeneratorSpec::new(
            GeneratorKind::Substitution {
                morphism: "0:0,1:0".parse().unwrap(),
                seed: '0',
            },
            10,
        );
        assert_eq!(generate(&spec), Err(WordError::NonProlongableMorphism('0')));
        assert!("0:01,1:2".parse::<Morphism>().is_err());
        assert!("0:01,1:".parse::<Morphism>().is_err());
        assert!("01:0".parse::<Morphism>().is_err());
    }

    #[test]
    fn inexact_rotation_reports_boundary() {
        let spec = WordGeneratorSpec::new(
            GeneratorKind::RotationBinary {
                alpha: Angle::Inexact(0.25),
                x: Angle::Inexact(0.5),
                partition: Partition::A,
                symbols: ['0', '1'],
            },
            8,
        );
        assert_eq!(generate(&spec), Err(WordError::BoundaryAmbiguity { position: 1 }));
        let bad = WordGeneratorSpec::new(
            GeneratorKind::RotationTernary {
                alpha: "sqrt2-1".parse().unwrap(),
                x: "0".parse().unwrap(),
                cut1: "1/2".parse().unwrap(),
                cut2: "1/3".parse().unwrap(),
                symbols: ['1', '2', '3'],
            },
            8,
        );
        assert!(matches!(generate(&bad), Err(WordError::InvalidParameter(_))));
    }

    #[test]
    fn telescoping_substitution() {
        let m: Morphism = "1:12,2:13,3:1".parse().unwrap();
        let spec = WordGeneratorSpec::new(GeneratorKind::Substitution { morphism: m.clone(), seed: '1' }, 300);
        let short = generate(&spec.with_length(200)).unwrap();
        let image = m.apply(&short).unwrap();
        let long = generate(&spec.with_length(image.len().min(300))).unwrap();
        assert_eq!(image.prefix(long.len()), long);
        assert_eq!(m.incidence_matrix(), vec![vec![1, 1, 1], vec![1, 0, 0], vec![0, 1, 0]]);
    }

    #[test]
    fn rational_rotation_period_divides_denominator() {
        for (p, q) in [(1, 5), (2, 7), (3, 8), (5, 12)] {
            let spec = WordGeneratorSpec::new(
                GeneratorKind::RotationBinary {
                    alpha: Angle::Exact(ExactReal::ratio(p, q)),
                    x: Angle::Exact(ExactReal::ratio(1, 3)),
                    partition: Partition::B,
                    symbols: ['0', '1'],
                },
                400,
            );
            let w = generate(&spec).unwrap();
            let q = q as usize;
            assert!((0..w.len() - q).all(|i| w.indices()[i] == w.indices()[i + q]));
        }
    }

    #[test]
    fn kv_block() {
        let spec = WordGeneratorSpec::from_kv("kind=substitution\nmorphism=0:01,1:0\nseed=0\nlen=34").unwrap();
        assert_eq!(generate(&spec).unwrap().to_string(), FIBONACCI_34);
        let spec = WordGeneratorSpec::from_kv("kind=rotation-binary; alpha=1/4; x=0; len=8").unwrap();
        assert_eq!(generate(&spec).unwrap().to_string(), "00010001");
        let spec = WordGeneratorSpec::from_kv("kind=rotation-ternary; alpha=sqrt2-1; x=0; cut1=sqrt2-1; cut2=sqrt3-1; len=5").unwrap();
        assert_eq!(generate(&spec).unwrap().len(), 5);
        assert!(WordGeneratorSpec::from_kv("kind=nope; len=3").is_err());
        assert!(WordGeneratorSpec::from_kv("kind=periodic").is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = WordGeneratorSpec::from_kv("kind=rotation-ternary; alpha=sqrt2-1; x=1/7; cut1=1/3; cut2=sqrt3-1; len=3000").unwrap();
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
    }
}
