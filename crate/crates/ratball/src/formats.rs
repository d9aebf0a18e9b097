//! JSON file formats for trees, surgery specs and witnesses.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use ratball_core::cabling::{CableTower, Plumbing, Role, SurgerySpec};
use ratball_core::lattice::EmbeddingMatrix;
use ratball_core::plumbing::{VertexId, WeightedTree};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: u32,
    pub weight: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeFile {
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<[u32; 2]>,
}

impl TreeFile {
    pub fn from_tree(t: &WeightedTree) -> Self {
        TreeFile {
            vertices: t.vertices().map(|(v, w)| VertexEntry { id: v.0, weight: w, role: None }).collect(),
            edges: t.edges().map(|(a, b)| [a.0, b.0]).collect(),
        }
    }

    pub fn from_plumbing(p: &Plumbing) -> Self {
        let mut f = TreeFile::from_tree(&p.tree);
        for v in &mut f.vertices {
            v.role = p.role(VertexId(v.id)).map(|r| r.to_string());
        }
        f
    }

    pub fn to_tree(&self) -> Result<WeightedTree> {
        let vs = self.vertices.iter().map(|v| (VertexId(v.id), v.weight));
        let es = self.edges.iter().map(|[a, b]| (VertexId(*a), VertexId(*b)));
        WeightedTree::new(vs, es).map_err(|e| anyhow!("invalid tree: {}", e))
    }

    /// Roles are kept only when every vertex has one.
    pub fn to_plumbing(&self) -> Result<Option<Plumbing>> {
        let tree = self.to_tree()?;
        let mut roles = std::collections::BTreeMap::new();
        for v in &self.vertices {
            match &v.role {
                Some(r) => {
                    roles.insert(VertexId(v.id), parse_role(r)?);
                }
                None => return Ok(None),
            }
        }
        Ok(Some(Plumbing { tree, roles }))
    }
}

pub fn parse_role(s: &str) -> Result<Role> {
    if s == "tail" {
        return Ok(Role::Tail);
    }
    let split = s.find(|c: char| c.is_ascii_digit()).ok_or_else(|| anyhow!("unknown role {:?}", s))?;
    let (name, idx) = s.split_at(split);
    let i: usize = idx.parse().with_context(|| format!("unknown role {:?}", s))?;
    Ok(match name {
        "torso" => Role::Torso(i),
        "leg" => Role::Leg(i),
        "node" => Role::Node(i),
        "connective" => Role::Connective(i),
        _ => bail!("unknown role {:?}", s),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecFile {
    pub pairs: Vec<[u64; 2]>,
    pub n: i64,
}

impl SpecFile {
    pub fn from_spec(s: &SurgerySpec) -> Self {
        SpecFile { pairs: s.knot().pairs().iter().map(|&(p, a)| [p, a]).collect(), n: s.n() }
    }

    pub fn to_spec(&self) -> Result<SurgerySpec> {
        let knot = CableTower::new(self.pairs.iter().map(|[p, a]| (*p, *a)).collect())
            .map_err(|e| anyhow!("invalid cable: {}", e))?;
        SurgerySpec::new(knot, self.n).map_err(|e| anyhow!("invalid surgery: {}", e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub rank: usize,
    pub vectors: Vec<Vec<i64>>,
}

impl WitnessFile {
    pub fn from_matrix(m: &EmbeddingMatrix) -> Self {
        WitnessFile { rank: m.rank(), vectors: m.vectors().to_vec() }
    }

    pub fn to_matrix(&self) -> Result<EmbeddingMatrix> {
        EmbeddingMatrix::new(self.rank, self.vectors.clone()).map_err(|e| anyhow!("invalid witness: {}", e))
    }
}

/// Either kind of graph input accepted by `embed`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GraphInput {
    Tree(TreeFile),
    Spec(SpecFile),
}

/// `2,3,2,17` as [(2,3),(2,17)].
pub fn parse_pairs(s: &str) -> Result<Vec<(u64, u64)>> {
    let nums: Vec<u64> = s
        .split(',')
        .map(|x| x.trim().parse::<u64>().with_context(|| format!("bad number {:?} in pairs", x)))
        .collect::<Result<_>>()?;
    if nums.is_empty() || !nums.len().is_multiple_of(2) {
        bail!("pairs need an even number of entries, got {}", nums.len());
    }
    Ok(nums.chunks(2).map(|c| (c[0], c[1])).collect())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, to_json_string(value)).with_context(|| format!("writing {}", path.display()))
}
