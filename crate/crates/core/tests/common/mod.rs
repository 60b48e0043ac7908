#![allow(dead_code)]

use contact_schwarzian::corpus::{corpus, sample_points, MapKind};
use contact_schwarzian::{ContactMap64, Dimensions, Form64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn form(n: usize) -> Form64 {
    Form64::standard(Dimensions::new(n).unwrap())
}

pub struct Sampled {
    pub kind: MapKind,
    pub map: ContactMap64,
    pub points: Vec<Vec<f64>>,
}

/// `count` corpus maps with `points` admissible sample points each.
pub fn sampled_corpus(n: usize, seed: u64, count: usize, points: usize) -> Vec<Sampled> {
    let form = form(n);
    let mut rng = rng(seed);
    corpus(&form, &mut rng, count)
        .into_iter()
        .map(|(kind, map)| {
            let points = sample_points(&form, &mut rng, &[&map], points).unwrap();
            Sampled { kind, map, points }
        })
        .collect()
}
