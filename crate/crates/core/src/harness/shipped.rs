//! The instance corpus shipped under `instances/`.

use super::{generate_doc, HarnessError};
use crate::instance::{Instance, InstanceDoc};

/// `(file name, generator spec, seed)` for every shipped instance.
pub const SHIPPED: &[(&str, &str, u64)] = &[
    ("uniform_coverage.json", "uniform(n=10,k=3)+coverage(universe=16)", 1),
    ("rank_one_weighted_coverage.json", "uniform(n=8,k=1)+coverage(universe=12,weighted=1)", 2),
    ("partition_cut.json", "partition(n=12,classes=4)+cut(density=0.4)", 3),
    ("partition_shifted_coverage.json", "partition(n=12,classes=4)+coverage(universe=18)+shift(offset=1)", 4),
    ("laminar_maxweight.json", "laminar(n=10,blocks=3,k=4)+maxweight", 5),
    ("graphic_coverage.json", "graphic(n=10,vertices=6)+coverage(universe=14)", 6),
    ("transversal_weighted_rank.json", "transversal(n=10,right=4,degree=2)+weighted-rank(rank=3)", 7),
    ("linear_shifted_cut.json", "linear(n=9,rows=4,sparsity=2)+cut(density=0.5)+shift(offset=0.5)", 8),
    ("uniform_linear.json", "uniform(n=12,k=4)+linear", 9),
];

/// Documents of the shipped corpus, in [`SHIPPED`] order.
pub fn shipped_docs() -> Result<Vec<(&'static str, InstanceDoc)>, HarnessError> {
    SHIPPED.iter().map(|&(file, spec, seed)| Ok((file, generate_doc(spec, seed)?))).collect()
}

pub fn shipped_instances() -> Result<Vec<Instance>, HarnessError> {
    shipped_docs()?.into_iter().map(|(_, doc)| Ok(doc.build()?)).collect()
}
