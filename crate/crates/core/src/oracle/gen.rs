use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::OracleError;
use crate::affordance::{AffordanceStructure, Sort, SortSet, Triple};
use crate::bitset::BitSet;
use crate::model::{AttributeTable, ValueAtom};

/// Bounds for random structures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_objects_per_sort: usize,
    pub max_attributes: usize,
    pub max_atoms_per_attribute: usize,
    pub phi_density: f64,
    /// Adds a key column so every partition is discrete.
    pub distinct_rows: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_objects_per_sort: 5,
            max_attributes: 3,
            max_atoms_per_attribute: 3,
            phi_density: 0.5,
            distinct_rows: false,
        }
    }
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        let bad = |what: &str| Err(OracleError::InvalidConfig(what.to_owned()));
        if self.max_objects_per_sort == 0 {
            return bad("max objects per sort must be at least 1");
        }
        if self.max_attributes == 0 {
            return bad("max attributes must be at least 1");
        }
        if self.max_atoms_per_attribute == 0 {
            return bad("max atoms per attribute must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.phi_density) {
            return bad("phi density must lie in [0, 1]");
        }
        Ok(())
    }

    /// The config for trial `i`, seeded independently of the other trials.
    pub fn for_trial(&self, i: u64) -> Self {
        Self {
            seed: trial_seed(self.seed, i),
            ..*self
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_seed(master: u64, i: u64) -> u64 {
    splitmix64(master ^ splitmix64(i))
}

const TABLE_NAMES: [&str; 3] = ["actors", "objects", "environments"];
const ID_PREFIX: [char; 3] = ['a', 'o', 'e'];

fn attribute_name(k: usize) -> String {
    match k {
        0 => "p".into(),
        1 => "q".into(),
        2 => "r".into(),
        _ => format!("p{k}"),
    }
}

fn random_table(rng: &mut ChaCha8Rng, cfg: &GenConfig, sort: Sort) -> AttributeTable {
    let i = sort.index();
    let n = rng.gen_range(1..=cfg.max_objects_per_sort);
    let k = rng.gen_range(0..=cfg.max_attributes);
    let atoms: Vec<usize> = (0..k)
        .map(|_| rng.gen_range(1..=cfg.max_atoms_per_attribute))
        .collect();
    let mut attributes: Vec<String> = (0..k).map(attribute_name).collect();
    if cfg.distinct_rows {
        attributes.push("key".into());
    }
    let rows = (0..n)
        .map(|x| {
            let mut row: Vec<ValueAtom> = atoms
                .iter()
                .map(|&m| atom(&format!("v{}", rng.gen_range(0..m))))
                .collect();
            if cfg.distinct_rows {
                row.push(atom(&format!("k{x}")));
            }
            (format!("{}{}", ID_PREFIX[i], x + 1), row)
        })
        .collect();
    AttributeTable::new(TABLE_NAMES[i], attributes, rows)
        .expect("generated ids and arities are consistent")
}

fn atom(s: &str) -> ValueAtom {
    ValueAtom::new(s).expect("generated atoms are non-empty")
}

/// A random structure, fully determined by `cfg`.
///
/// Few atoms per attribute make equal rows, and so non-trivial classes,
/// common. Panics on an invalid config.
pub fn generate(cfg: &GenConfig) -> AffordanceStructure {
    if let Err(e) = cfg.validate() {
        panic!("{e}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let [a, o, e] = Sort::ALL.map(|s| random_table(&mut rng, cfg, s));
    let dims = [a.len(), o.len(), e.len()];
    let mut phi = Vec::new();
    for x in 0..dims[0] {
        for y in 0..dims[1] {
            for z in 0..dims[2] {
                if rng.gen_bool(cfg.phi_density) {
                    phi.push(Triple::new(x, y, z));
                }
            }
        }
    }
    AffordanceStructure::new(a, o, e, phi, Some("gen".into()))
}

/// Subsets of `sort` to test against.
///
/// Every subset when the sort has at most four elements; otherwise the
/// empty set, the full set and sixteen random ones.
pub fn sample_subsets(s: &AffordanceStructure, sort: Sort, rng: &mut ChaCha8Rng) -> Vec<SortSet> {
    let n = s.size(sort);
    if n <= 4 {
        return (0..1u64 << n)
            .map(|m| SortSet::new(sort, BitSet::from_mask(n, m)))
            .collect();
    }
    let mut out = vec![s.empty_set(sort), s.full_set(sort)];
    for _ in 0..16 {
        let bits = BitSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5)));
        out.push(SortSet::new(sort, bits));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::bundle_text;

    #[test]
    fn deterministic() {
        let cfg = GenConfig::with_seed(7);
        assert_eq!(bundle_text(&generate(&cfg)), bundle_text(&generate(&cfg)));
        assert_ne!(
            bundle_text(&generate(&cfg)),
            bundle_text(&generate(&cfg.for_trial(1)))
        );
    }

    #[test]
    fn density_extremes() {
        for seed in 0..20 {
            let mut cfg = GenConfig::with_seed(seed);
            cfg.phi_density = 0.0;
            assert!(generate(&cfg).phi().is_empty());
            cfg.phi_density = 1.0;
            let s = generate(&cfg);
            assert_eq!(s.phi().len(), s.dims().iter().product::<usize>());
        }
    }

    #[test]
    fn bounds_respected() {
        for i in 0..50 {
            let s = generate(&GenConfig::with_seed(3).for_trial(i));
            for sort in Sort::ALL {
                let t = s.table(sort);
                assert!((1..=5).contains(&t.len()));
                assert!(t.attributes().len() <= 3);
            }
        }
    }

    #[test]
    fn duplicates_appear_unless_distinct() {
        let nontrivial = |cfg: GenConfig| {
            (0..40).any(|i| {
                let s = generate(&cfg.for_trial(i));
                Sort::ALL
                    .iter()
                    .any(|&so| s.partition(so).block_count() < s.size(so))
            })
        };
        assert!(nontrivial(GenConfig::default()));
        let distinct = GenConfig {
            distinct_rows: true,
            ..GenConfig::default()
        };
        assert!(!nontrivial(distinct));
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = GenConfig {
            phi_density: 1.5,
            ..GenConfig::default()
        };
        assert!(cfg.validate().is_err());
        cfg = GenConfig {
            max_objects_per_sort: 0,
            ..GenConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn subset_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = crate::affordance::tests::two_actors(false);
        assert_eq!(sample_subsets(&s, Sort::A, &mut rng).len(), 4);
        assert_eq!(sample_subsets(&s, Sort::O, &mut rng).len(), 2);
    }
}
