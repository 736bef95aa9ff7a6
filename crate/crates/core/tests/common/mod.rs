#![allow(dead_code)]

use std::path::PathBuf;

use famdim::model::validate;
use famdim::orbifold::OrbifoldBase;
use famdim::{Geometry, JsjVertex, ManifoldDescription, Mat2Z, PrimePiece, SeifertData};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Deserialize;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

#[derive(Debug, Deserialize)]
pub struct Golden {
    pub entries: Vec<GoldenEntry>,
}

#[derive(Debug, Deserialize)]
pub struct GoldenEntry {
    pub file: String,
    pub group: String,
    pub k2: u32,
    pub k3plus: u32,
    #[serde(default)]
    pub focus: Vec<Focus>,
}

/// Expected value of one piece or JSJ vertex inside a corpus file.
#[derive(Debug, Deserialize)]
pub struct Focus {
    pub pointer: String,
    pub k2: u32,
    pub k3plus: u32,
}

pub fn golden() -> Golden {
    let text = std::fs::read_to_string(corpus_dir().join("golden.json")).expect("corpus/golden.json");
    serde_json::from_str(&text).expect("golden manifest parses")
}

pub fn load(file: &str) -> ManifoldDescription {
    let text = std::fs::read_to_string(corpus_dir().join(file)).unwrap_or_else(|e| panic!("{file}: {e}"));
    ManifoldDescription::from_json(&text).unwrap_or_else(|e| panic!("{file}: {e}"))
}

pub fn load_raw(file: &str) -> serde_json::Value {
    let text = std::fs::read_to_string(corpus_dir().join(file)).unwrap_or_else(|e| panic!("{file}: {e}"));
    serde_json::from_str(&text).unwrap()
}

fn random_base<R: Rng>(rng: &mut R, boundary: u32) -> OrbifoldBase {
    let orientable = rng.gen_bool(0.7);
    let genus = if orientable { rng.gen_range(0..=2) } else { rng.gen_range(1..=2) };
    let cones = rng.gen_range(0..=4);
    let cone_orders = (0..cones).map(|_| rng.gen_range(2..=7)).collect();
    OrbifoldBase { genus, orientable, boundary_count: boundary, cone_orders }
}

fn random_seifert_closed<R: Rng>(rng: &mut R) -> SeifertData {
    let base = random_base(rng, 0);
    let cone_pairs = base
        .cone_orders
        .iter()
        .map(|&a| {
            let units: Vec<i64> = (1..i64::from(a)).filter(|&b| num_integer::gcd(b, i64::from(a)) == 1).collect();
            (a, *units.choose(rng).unwrap())
        })
        .collect();
    SeifertData { base, cone_pairs, b: Some(rng.gen_range(-2..=2)) }
}

pub fn random_matrix<R: Rng>(rng: &mut R, pool: &[Mat2Z]) -> Mat2Z {
    *pool.choose(rng).unwrap()
}

pub fn random_piece<R: Rng>(rng: &mut R, pool: &[Mat2Z]) -> PrimePiece {
    match rng.gen_range(0..7) {
        0 => PrimePiece::Spherical { pi1_order: rng.gen_range(1..=12) },
        1 => PrimePiece::Geometric { geometry: *Geometry::ALL.choose(rng).unwrap() },
        2 => PrimePiece::TorusBundle { monodromy: random_matrix(rng, pool) },
        3 => PrimePiece::KleinDouble,
        4 => PrimePiece::SeifertClosed { seifert: random_seifert_closed(rng) },
        5 => PrimePiece::Jsj { vertices: vec![JsjVertex::HyperbolicCusped { cusps: 2 }], edges: vec![(0, 0)], monodromy: None },
        _ => {
            let seifert = SeifertData::bounded(random_base(rng, 1));
            PrimePiece::Jsj {
                vertices: vec![JsjVertex::HyperbolicCusped { cusps: 1 }, JsjVertex::SeifertBounded { seifert }],
                edges: vec![(0, 1)],
                monodromy: None,
            }
        }
    }
}

/// A random description that passes validation.
pub fn random_description<R: Rng>(rng: &mut R, pool: &[Mat2Z], max_pieces: usize) -> ManifoldDescription {
    loop {
        let n = rng.gen_range(1..=max_pieces);
        let pieces = (0..n).map(|_| random_piece(rng, pool)).collect();
        let d = ManifoldDescription::new("random", pieces);
        if validate(&d).is_valid() {
            return d;
        }
    }
}
