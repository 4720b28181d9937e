//! Built-in random instance generators.
//!
//! A generator spec is `matroid+objective[+shift]`, each part a name with an
//! optional `(key=value, ...)` argument list:
//!
//! ```text
//! uniform(n=12,k=3)+coverage(universe=20)
//! partition(n=20,classes=4)+maxweight
//! graphic(n=10,vertices=6)+cut(density=0.4)+shift(offset=1.5)
//! ```
//!
//! Matroids: `uniform(n,k)`, `partition(n,classes,cap)`,
//! `laminar(n,blocks,k)`, `graphic(n,vertices)`,
//! `transversal(n,right,degree)`, `linear(n,rows,sparsity)`.
//! Objectives: `coverage(universe,size,weighted)`, `linear(max)`,
//! `maxweight(max)`, `cut(density)`, `weighted-rank(rank)`.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::HarnessError;
use crate::instance::{GroundDoc, Instance, InstanceDoc};
use crate::matroid::{LaminarSet, MatroidSpec};
use crate::objective::ObjectiveSpec;

const FIELD_PRIME: u64 = (1 << 31) - 1;

struct Part {
    name: String,
    args: BTreeMap<String, f64>,
}

impl Part {
    fn parse(text: &str) -> Result<Part, HarnessError> {
        let text = text.trim();
        let (name, rest) = match text.find('(') {
            Some(i) => {
                let inner = text[i + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| HarnessError::BadGenerator(format!("unbalanced parentheses in {text:?}")))?;
                (&text[..i], inner)
            }
            None => (text, ""),
        };
        let mut args = BTreeMap::new();
        for kv in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| HarnessError::BadGenerator(format!("expected key=value, got {kv:?}")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| HarnessError::BadGenerator(format!("{k} = {v:?} is not a number")))?;
            args.insert(k.trim().to_string(), v);
        }
        Ok(Part { name: name.trim().to_string(), args })
    }

    fn num(&self, key: &str, default: f64) -> f64 {
        self.args.get(key).copied().unwrap_or(default)
    }

    fn count(&self, key: &str, default: usize) -> Result<usize, HarnessError> {
        match self.args.get(key) {
            None => Ok(default),
            Some(&v) if v >= 0.0 && v.fract() == 0.0 => Ok(v as usize),
            Some(v) => Err(HarnessError::BadGenerator(format!("{}: {key} = {v} is not a count", self.name))),
        }
    }
}

/// Generates the instance document for `spec` and `seed`.
pub fn generate_doc(spec: &str, seed: u64) -> Result<InstanceDoc, HarnessError> {
    let parts: Vec<&str> = spec.split('+').collect();
    if parts.len() < 2 || parts.len() > 3 {
        return Err(HarnessError::BadGenerator(format!("expected matroid+objective[+shift], got {spec:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = Part::parse(parts[0])?;
    let n = m
        .args
        .contains_key("n")
        .then(|| m.count("n", 0))
        .transpose()?
        .ok_or_else(|| HarnessError::BadGenerator(format!("{}: missing n", m.name)))?;
    let matroid = matroid(&m, n, &mut rng)?;
    let mut objective = objective(&Part::parse(parts[1])?, n, &mut rng)?;
    if let Some(shift) = parts.get(2) {
        let s = Part::parse(shift)?;
        if s.name != "shift" {
            return Err(HarnessError::UnknownGenerator(s.name));
        }
        objective = ObjectiveSpec::Shifted { base: Box::new(objective), offset: s.num("offset", 1.0) };
    }
    Ok(InstanceDoc { name: format!("{spec}#{seed}"), ground: GroundDoc { n }, matroid, objective: Some(objective) })
}

/// Generates and compiles the instance for `spec` and `seed`.
pub fn generate_instance(spec: &str, seed: u64) -> Result<Instance, HarnessError> {
    Ok(generate_doc(spec, seed)?.build()?)
}

fn matroid(p: &Part, n: usize, rng: &mut ChaCha8Rng) -> Result<MatroidSpec, HarnessError> {
    Ok(match p.name.as_str() {
        "uniform" => MatroidSpec::Uniform { k: p.count("k", 2)? },
        "partition" => {
            let classes = p.count("classes", 4)?.max(1);
            let cap = p.count("cap", 1)?;
            let mut class_of: Vec<usize> = (0..n).map(|u| u % classes).collect();
            class_of.shuffle(rng);
            MatroidSpec::Partition { class_of, capacities: (cap != 1).then(|| vec![cap; classes]) }
        }
        "laminar" => {
            let blocks = p.count("blocks", 3)?.max(1);
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            let mut family = vec![LaminarSet { elements: (0..n).collect(), capacity: p.count("k", 3)? }];
            let chunk = n.div_ceil(blocks).max(1);
            for block in order.chunks(chunk) {
                let mut elements = block.to_vec();
                elements.sort_unstable();
                if elements.len() >= 4 {
                    let mut half = elements[..elements.len() / 2].to_vec();
                    half.sort_unstable();
                    family.push(LaminarSet { elements: half, capacity: 1 });
                }
                family.push(LaminarSet { elements, capacity: rng.random_range(1..=2) });
            }
            MatroidSpec::Laminar { family }
        }
        "graphic" => {
            let vertices = p.count("vertices", n / 2 + 1)?.max(2);
            let edges = (0..n)
                .map(|_| {
                    let pair = sample(rng, vertices, 2);
                    [pair.index(0), pair.index(1)]
                })
                .collect();
            MatroidSpec::Graphic { vertices: Some(vertices), edges }
        }
        "transversal" => {
            let right = p.count("right", (n / 3).max(1))?.max(1);
            let degree = p.count("degree", 2)?.clamp(1, right);
            let adjacency = (0..n)
                .map(|_| {
                    let mut adj = sample(rng, right, degree).into_vec();
                    adj.sort_unstable();
                    adj
                })
                .collect();
            MatroidSpec::Transversal { adjacency }
        }
        "linear" => {
            let rows = p.count("rows", 4)?.max(1);
            let sparsity = p.count("sparsity", 2)?.clamp(1, rows);
            let columns = (0..n)
                .map(|_| {
                    let mut col = vec![0u64; rows];
                    for r in sample(rng, rows, sparsity) {
                        col[r] = rng.random_range(1..FIELD_PRIME);
                    }
                    col
                })
                .collect();
            MatroidSpec::LinearSparse { sparsity, columns }
        }
        _ => return Err(HarnessError::UnknownGenerator(p.name.clone())),
    })
}

fn objective(p: &Part, n: usize, rng: &mut ChaCha8Rng) -> Result<ObjectiveSpec, HarnessError> {
    let weights = |rng: &mut ChaCha8Rng, max: f64| (0..n).map(|_| rng.random::<f64>() * max).collect::<Vec<_>>();
    Ok(match p.name.as_str() {
        "coverage" => {
            let universe = p.count("universe", (2 * n).max(1))?.max(1);
            let size = p.count("size", 3)?.clamp(1, universe);
            let covers = (0..n)
                .map(|_| {
                    let take = rng.random_range(1..=size);
                    let mut items = sample(rng, universe, take).into_vec();
                    items.sort_unstable();
                    items
                })
                .collect();
            let item_weights =
                (p.num("weighted", 0.0) != 0.0).then(|| (0..universe).map(|_| rng.random_range(0.5..2.0)).collect());
            ObjectiveSpec::Coverage { covers, item_weights }
        }
        "linear" => ObjectiveSpec::Linear { weights: weights(rng, p.num("max", 10.0)) },
        "maxweight" => ObjectiveSpec::MaxWeight { weights: weights(rng, p.num("max", 10.0)) },
        "cut" => {
            let density = p.num("density", 0.4);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.random_bool(density.clamp(0.0, 1.0)) {
                        edges.push((a, b, rng.random_range(0.5..2.0)));
                    }
                }
            }
            ObjectiveSpec::Cut { edges }
        }
        "weighted-rank" => ObjectiveSpec::WeightedRank {
            matroid: MatroidSpec::Uniform { k: p.count("rank", 2)? },
            weights: weights(rng, p.num("max", 10.0)),
        },
        _ => return Err(HarnessError::UnknownGenerator(p.name.clone())),
    })
}
