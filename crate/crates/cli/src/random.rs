//! Seeded random arrangements within size caps.

use rand::Rng;
use subtori_core::arrangement::Arrangement;

use crate::input::{ArrangementFile, AtomEntry};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_rank: usize,
    pub max_atoms: usize,
    pub max_entry: i64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_rank: 3,
            max_atoms: 5,
            max_entry: 3,
        }
    }
}

fn random_root<R: Rng>(rng: &mut R) -> String {
    let q = rng.gen_range(1..=3);
    let p = rng.gen_range(0..q);
    if p == 0 {
        "0".into()
    } else {
        format!("{p}/{q}")
    }
}

fn random_atom<R: Rng>(rng: &mut R, d: usize, codim: usize, max_entry: i64) -> AtomEntry {
    let characters = (0..codim)
        .map(|_| loop {
            let v: Vec<i64> = (0..d)
                .map(|_| rng.gen_range(-max_entry..=max_entry))
                .collect();
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        })
        .collect();
    AtomEntry {
        characters,
        constants: (0..codim).map(|_| random_root(rng)).collect(),
    }
}

/// A valid arrangement file; atoms that would be invalid or nested are
/// redrawn a bounded number of times and otherwise dropped.
pub fn random_arrangement<R: Rng>(rng: &mut R, caps: Caps, divisorial: bool) -> ArrangementFile {
    let d = rng.gen_range(1..=caps.max_rank.max(1));
    let target = rng.gen_range(1..=caps.max_atoms.max(1));
    let mut file = ArrangementFile {
        name: None,
        ambient_rank: d,
        atoms: Vec::new(),
    };
    let mut tries = 0;
    while file.atoms.len() < target && tries < 20 * target {
        tries += 1;
        let codim = if divisorial || d == 1 {
            1
        } else {
            rng.gen_range(1..=d.min(2))
        };
        let atom = random_atom(rng, d, codim, caps.max_entry);
        file.atoms.push(atom);
        let ok = file
            .specs()
            .ok()
            .is_some_and(|specs| Arrangement::new(d, specs).is_ok());
        if !ok {
            file.atoms.pop();
        }
    }
    file
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn valid_and_deterministic() {
        let caps = Caps::default();
        let mut a = ChaCha8Rng::seed_from_u64(1);
        let mut b = ChaCha8Rng::seed_from_u64(1);
        for i in 0..20 {
            let f = random_arrangement(&mut a, caps, i % 2 == 0);
            assert_eq!(f, random_arrangement(&mut b, caps, i % 2 == 0));
            assert!(f.ambient_rank <= 3 && f.atoms.len() <= 5);
            let arr = f.arrangement().unwrap();
            if i % 2 == 0 {
                assert!(arr.is_divisorial());
            }
        }
    }
}
