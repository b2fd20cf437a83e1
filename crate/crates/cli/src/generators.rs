//! Generator strings: `kind` or `kind:key=value,key=value`.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};

use fraccolor::graph::{self, Graph, GridSpec, SubdivisionSpec};

struct Spec<'a> {
    kind: &'a str,
    params: BTreeMap<&'a str, &'a str>,
}

impl<'a> Spec<'a> {
    fn parse(text: &'a str) -> Result<Self> {
        let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
        let mut params = BTreeMap::new();
        for pair in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = pair.split_once('=').ok_or_else(|| anyhow!("expected key=value, got {pair:?}"))?;
            params.insert(k.trim(), v.trim());
        }
        Ok(Spec { kind: kind.trim(), params })
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::error::Error + Send + Sync + 'static,
    {
        let raw = self.params.get(key).ok_or_else(|| anyhow!("generator {:?} needs {key}=", self.kind))?;
        raw.parse().with_context(|| format!("bad value for {key}: {raw:?}"))
    }

    fn get_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::error::Error + Send + Sync + 'static,
    {
        if self.params.contains_key(key) {
            self.get(key)
        } else {
            Ok(default)
        }
    }

    fn sides(&self) -> Result<Vec<usize>> {
        let raw = self.params.get("sides").ok_or_else(|| anyhow!("generator {:?} needs sides=", self.kind))?;
        raw.split('x').map(|s| s.parse().with_context(|| format!("bad side {s:?}"))).collect()
    }
}

fn named_base(name: &str) -> Result<Graph> {
    if name == "petersen" {
        return Ok(graph::petersen());
    }
    if let Some(k) = name.strip_prefix("complete") {
        return Ok(graph::complete(k.parse().context("complete<N>")?));
    }
    if let Some(k) = name.strip_prefix("cycle") {
        return Ok(graph::cycle(k.parse().context("cycle<N>")?)?);
    }
    bail!("unknown base graph {name:?} (petersen, complete<N>, cycle<N>)")
}

/// Build the graph named by `text`. Seeded generators and the random
/// identifiers both use `seed`; grids keep identifiers `1..n`.
pub fn build(text: &str, seed: u64) -> Result<Graph> {
    let spec = Spec::parse(text)?;
    let g = match spec.kind {
        "regular" => graph::generate_random_regular(spec.get("n")?, spec.get("delta")?, seed)?,
        "cycle" => graph::cycle(spec.get("n")?)?,
        "path" => graph::path(spec.get("n")?),
        "complete" => graph::complete(spec.get("n")?),
        "empty" => graph::empty(spec.get("n")?),
        "petersen" => graph::petersen(),
        "tree" => graph::random_tree(spec.get("n")?, seed),
        "gnp" => graph::gnp(spec.get("n")?, spec.get("p")?, seed),
        "bipartite" => graph::random_bipartite(spec.get("a")?, spec.get("b")?, spec.get("p")?, seed),
        "grid" | "torus" => {
            let sides = spec.sides()?;
            let wrap = vec![spec.kind == "torus"; sides.len()];
            return Ok(graph::generate_grid(&GridSpec::new(sides, wrap)?)?);
        }
        "subdivided" => {
            let base = named_base(spec.params.get("base").copied().unwrap_or("petersen"))?;
            graph::subdivide_edges(&SubdivisionSpec { k: spec.get_or("k", 1)?, base: &base })?
        }
        other => bail!(
            "unknown generator {other:?}; expected one of regular, cycle, path, complete, empty, petersen, tree, gnp, bipartite, grid, torus, subdivided"
        ),
    };
    Ok(g.with_random_ids(seed, 2)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_generators() {
        assert_eq!(build("regular:n=20,delta=3", 1).unwrap().max_degree(), 3);
        assert_eq!(build("torus:sides=4x5", 0).unwrap().n(), 20);
        assert_eq!(build("subdivided:base=complete3,k=1", 0).unwrap().n(), 9);
        assert!(build("regular:n=20", 1).is_err());
        assert!(build("moebius:n=3", 1).is_err());
        assert!(build("cycle:n=x", 1).is_err());
    }
}
