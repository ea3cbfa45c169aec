//! Text file formats: TOML model files (plain snc, Kulikov type II/III),
//! block-homomorphism files and orbit-data files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::abelian::{BlockHom, KunnemannOrbitData, OrbitRecord};
use crate::error::{Error, Result};
use crate::kulikov::{KulikovData, TypeIIData, TypeIIIData, DEFAULT_MIDDLE_LABEL};
use crate::matrix::{IntMatrix, RatMatrix};
use crate::ring::VarElement;
use crate::snc::{ComponentId, Face, SncModel};
use crate::term::MAX_DIM;

pub const EMPTY: &str = "empty";

/// Component ids may be written as TOML integers or strings.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawId {
    Int(u64),
    Str(String),
}

impl RawId {
    fn id(&self) -> Result<ComponentId> {
        match self {
            RawId::Int(n) => ComponentId::new(n.to_string()),
            RawId::Str(s) => ComponentId::new(s.as_str()),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComponent {
    id: RawId,
    multiplicity: u32,
    class: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSnc {
    #[allow(dead_code)]
    kind: Option<String>,
    generic_dim: u32,
    components: Vec<RawComponent>,
    #[serde(default)]
    strata: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTypeII {
    #[allow(dead_code)]
    kind: String,
    r: u32,
    end_eulers: (i64, i64),
    #[serde(default = "default_elliptic")]
    elliptic_label: String,
    #[serde(default = "default_middle")]
    middle_label: String,
}

fn default_elliptic() -> String {
    "E".into()
}

fn default_middle() -> String {
    DEFAULT_MIDDLE_LABEL.into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVertex {
    id: RawId,
    euler: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTypeIII {
    #[allow(dead_code)]
    kind: String,
    vertices: Vec<RawVertex>,
    #[serde(default)]
    edges: Vec<(RawId, RawId)>,
    #[serde(default)]
    faces: Vec<(RawId, RawId, RawId)>,
}

/// Any of the three model-file kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelFile {
    Snc(SncModel),
    Kulikov(KulikovData),
}

fn toml_err(e: toml::de::Error) -> Error {
    Error::parse(format!("model file: {}", e.message()))
}

/// Parses a model file of any kind; the `kind` key defaults to `snc`.
pub fn parse_model_file(text: &str) -> Result<ModelFile> {
    let table: toml::Table = text.parse().map_err(toml_err)?;
    let kind = match table.get("kind") {
        None => "snc",
        Some(toml::Value::String(s)) => s.as_str(),
        Some(_) => return Err(Error::parse("model file: kind must be a string")),
    };
    match kind {
        "snc" => parse_snc(text).map(ModelFile::Snc),
        "kulikov-ii" => {
            let raw: RawTypeII = toml::from_str(text).map_err(toml_err)?;
            if raw.r > MAX_DIM {
                return Err(Error::parse("model file: chain length out of range"));
            }
            Ok(ModelFile::Kulikov(KulikovData::II(TypeIIData {
                r: raw.r,
                end_eulers: raw.end_eulers,
                elliptic_label: raw.elliptic_label,
                middle_label: raw.middle_label,
            })))
        }
        "kulikov-iii" => {
            let raw: RawTypeIII = toml::from_str(text).map_err(toml_err)?;
            let vertices = raw
                .vertices
                .iter()
                .map(|v| Ok((v.id.id()?, v.euler)))
                .collect::<Result<_>>()?;
            let edges = raw
                .edges
                .iter()
                .map(|(a, b)| Ok((a.id()?, b.id()?)))
                .collect::<Result<_>>()?;
            let faces = raw
                .faces
                .iter()
                .map(|(a, b, c)| Ok((a.id()?, b.id()?, c.id()?)))
                .collect::<Result<_>>()?;
            Ok(ModelFile::Kulikov(KulikovData::III(TypeIIIData {
                vertices,
                edges,
                faces,
            })))
        }
        other => Err(Error::parse(format!("model file: unknown kind {other:?}"))),
    }
}

/// Parses a plain snc model file.
pub fn parse_snc(text: &str) -> Result<SncModel> {
    let raw: RawSnc = toml::from_str(text).map_err(toml_err)?;
    if raw.generic_dim > MAX_DIM {
        return Err(Error::parse("model file: generic_dim out of range"));
    }
    let mut comps = Vec::with_capacity(raw.components.len());
    let mut classes = BTreeMap::new();
    for c in &raw.components {
        let id = c.id.id()?;
        let class: VarElement = c.class.parse()?;
        classes.insert(id.clone(), class.clone());
        comps.push((id, c.multiplicity, class));
    }
    let mut strata = BTreeMap::new();
    for (key, value) in &raw.strata {
        let face: Face = key.parse()?;
        let value = value.trim();
        if face.len() == 1 {
            let id = face.ids().next().expect("singleton");
            let declared = classes
                .get(id)
                .ok_or_else(|| Error::parse(format!("stratum {{{face}}} names no component")))?;
            if value == EMPTY || value.parse::<VarElement>()? != *declared {
                return Err(Error::parse(format!(
                    "stratum {{{face}}} disagrees with the class of component {id}"
                )));
            }
            continue;
        }
        if strata.contains_key(&face) {
            return Err(Error::parse(format!("stratum {{{face}}} listed twice")));
        }
        if value == EMPTY {
            continue;
        }
        strata.insert(face, value.parse::<VarElement>()?);
    }
    Ok(SncModel::new(raw.generic_dim, comps, strata))
}

#[derive(Serialize)]
struct OutComponent {
    id: String,
    multiplicity: u32,
    class: String,
}

#[derive(Serialize)]
struct OutSnc {
    generic_dim: u32,
    components: Vec<OutComponent>,
}

/// Writes a model in the plain snc file format.
pub fn write_snc(model: &SncModel) -> String {
    let components = model
        .components()
        .iter()
        .map(|c| OutComponent {
            id: c.id.to_string(),
            multiplicity: c.multiplicity,
            class: model
                .stratum(&Face::singleton(c.id.clone()))
                .map(ToString::to_string)
                .unwrap_or_else(|| "0".into()),
        })
        .collect();
    let head = OutSnc {
        generic_dim: model.generic_dim(),
        components,
    };
    let mut out = toml::to_string(&head).expect("model serializes");
    // written by hand so keys follow face order ("2" before "10")
    out.push_str("\n[strata]\n");
    for (face, class) in model.strata().filter(|(f, _)| f.len() >= 2) {
        let _ = writeln!(out, "\"{face}\" = \"{class}\"");
    }
    out
}

/// Parses a block-homomorphism file: sections `ALPHA`, `BETA`, `GAMMA`,
/// `DELTA`, each followed by a matrix in the dense format.
pub fn parse_block_hom(text: &str) -> Result<BlockHom> {
    const NAMES: [&str; 4] = ["ALPHA", "BETA", "GAMMA", "DELTA"];
    let mut sections: BTreeMap<&str, String> = BTreeMap::new();
    let mut current: Option<&str> = None;
    for line in text.lines() {
        let t = line.trim();
        if let Some(&name) = NAMES.iter().find(|n| **n == t) {
            if sections.insert(name, String::new()).is_some() {
                return Err(Error::parse(format!("section {name} repeated")));
            }
            current = Some(name);
            continue;
        }
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        match current {
            Some(name) => {
                let s = sections.get_mut(name).expect("open section");
                s.push_str(line);
                s.push('\n');
            }
            None => return Err(Error::parse("content before the first section")),
        }
    }
    let mut mats = Vec::with_capacity(4);
    for name in NAMES {
        let body = sections
            .get(name)
            .ok_or_else(|| Error::parse(format!("missing section {name}")))?;
        let m = RatMatrix::parse(body)
            .and_then(|m| m.to_integer())
            .map_err(|e| Error::parse(format!("section {name}: {e}")))?;
        mats.push(m);
    }
    let mut it = mats.into_iter();
    let mut next = || it.next().expect("four sections");
    BlockHom::new(next(), next(), next(), next())
}

/// Writes a block-homomorphism file.
pub fn write_block_hom(f: &BlockHom) -> String {
    let mut out = String::new();
    for (name, m) in [
        ("ALPHA", &f.alpha),
        ("BETA", &f.beta),
        ("GAMMA", &f.gamma),
        ("DELTA", &f.delta),
    ] {
        let _ = write!(out, "{name}\n{m}");
    }
    out
}

/// Parses an integer matrix file.
pub fn parse_int_matrix(text: &str) -> Result<IntMatrix> {
    RatMatrix::parse(text)?.to_integer()
}

/// Parses an orbit-data file: `key = value` header lines for `torus_rank`,
/// `abelian_label` and `good_reduction`, then one `cone_dim f0 f1 ...` line
/// per orbit.
pub fn parse_orbits(text: &str) -> Result<KunnemannOrbitData> {
    let mut torus_rank = None;
    let mut abelian_label = None;
    let mut good_reduction = None;
    let mut orbits = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| Error::parse(format!("line {}: {msg}", n + 1));
        if let Some((key, value)) = line.split_once('=') {
            if !orbits.is_empty() {
                return Err(at("header after orbit lines".into()));
            }
            let value = value.trim();
            let dup = match key.trim() {
                "torus_rank" => torus_rank
                    .replace(
                        value
                            .parse::<u32>()
                            .map_err(|_| at(format!("bad rank {value:?}")))?,
                    )
                    .is_some(),
                "abelian_label" => {
                    if !crate::term::valid_label_name(value) {
                        return Err(at(format!("bad label {value:?}")));
                    }
                    abelian_label.replace(value.to_string()).is_some()
                }
                "good_reduction" => good_reduction
                    .replace(match value {
                        "true" => true,
                        "false" => false,
                        _ => return Err(at(format!("bad flag {value:?}"))),
                    })
                    .is_some(),
                other => return Err(at(format!("unknown key {other:?}"))),
            };
            if dup {
                return Err(at(format!("key {} repeated", key.trim())));
            }
            continue;
        }
        let mut nums = line.split_whitespace().map(|t| {
            if !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(at(format!("bad number {t:?}")));
            }
            t.parse::<u64>()
                .map_err(|_| at(format!("bad number {t:?}")))
        });
        let cone_dim = nums.next().expect("nonempty line")?;
        let cone_dim =
            u32::try_from(cone_dim).map_err(|_| at("cone dimension too large".into()))?;
        let f_vector = nums.collect::<Result<Vec<u64>>>()?;
        orbits.push(OrbitRecord { cone_dim, f_vector });
    }
    Ok(KunnemannOrbitData {
        torus_rank: torus_rank.ok_or_else(|| Error::parse("missing torus_rank"))?,
        abelian_label: abelian_label.ok_or_else(|| Error::parse("missing abelian_label"))?,
        good_reduction: good_reduction.unwrap_or(false),
        orbits,
    })
}

/// Writes an orbit-data file.
pub fn write_orbits(d: &KunnemannOrbitData) -> String {
    let mut out = format!(
        "torus_rank = {}\nabelian_label = {}\ngood_reduction = {}\n",
        d.torus_rank, d.abelian_label, d.good_reduction
    );
    for o in &d.orbits {
        out.push_str(&o.cone_dim.to_string());
        for f in &o.f_vector {
            let _ = write!(out, " {f}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::tate_ngon_orbits;
    use crate::catalog::Catalog;
    use crate::random::{random_model, rng};
    use crate::snc::ngon_model;

    const NODE: &str = r#"
generic_dim = 1

[[components]]
id = 1
multiplicity = 1
class = "1 + L"

[[components]]
id = "2"
multiplicity = 1
class = "1 + L"

[strata]
"1,2" = "2"
"#;

    #[test]
    fn parse_node() {
        let m = parse_snc(NODE).unwrap();
        assert_eq!(m, ngon_model(2));
        assert!(m.validate(&Catalog::default_catalog()).is_ok());
    }

    #[test]
    fn roundtrip_random_models() {
        for seed in 0..50 {
            let m = random_model(&mut rng(seed), 5);
            let text = write_snc(&m);
            assert_eq!(parse_snc(&text).unwrap(), m, "{text}");
        }
        let big = ngon_model(12);
        assert_eq!(parse_snc(&write_snc(&big)).unwrap(), big);
    }

    #[test]
    fn singleton_keys_must_agree() {
        let ok = format!("{NODE}\"1\" = \"L + 1\"\n");
        assert!(parse_snc(&ok).is_ok());
        let bad = format!("{NODE}\"1\" = \"L\"\n");
        assert!(parse_snc(&bad).unwrap_err().is_parse());
        let bad = format!("{NODE}\"2\" = \"empty\"\n");
        assert!(parse_snc(&bad).unwrap_err().is_parse());
    }

    #[test]
    fn empty_and_duplicate_keys() {
        let text = NODE.replace("\"1,2\" = \"2\"", "\"1,2\" = \"empty\"");
        let m = parse_snc(&text).unwrap();
        assert!(m.stratum(&"1,2".parse().unwrap()).is_none());
        let dup = format!("{NODE}\"2,1\" = \"2\"\n");
        assert!(parse_snc(&dup).unwrap_err().is_parse());
    }

    #[test]
    fn kulikov_files() {
        let ii = "kind = \"kulikov-ii\"\nr = 2\nend_eulers = [12, 12]\n";
        match parse_model_file(ii).unwrap() {
            ModelFile::Kulikov(KulikovData::II(d)) => assert_eq!(d, TypeIIData::new(2, 12, 12)),
            other => panic!("{other:?}"),
        }
        let iii = r#"
kind = "kulikov-iii"
vertices = [{ id = 1, euler = 3 }, { id = 2, euler = 3 }, { id = 3, euler = 3 }]
edges = [[1, 2], [2, 3], [1, 3]]
faces = [[1, 2, 3]]
"#;
        match parse_model_file(iii).unwrap() {
            ModelFile::Kulikov(KulikovData::III(d)) => {
                assert_eq!(d.vertices.len(), 3);
                assert_eq!(d.faces.len(), 1);
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_model_file("kind = \"nope\"").unwrap_err().is_parse());
        assert!(parse_model_file("kind = 3").unwrap_err().is_parse());
    }

    #[test]
    fn block_hom_roundtrip() {
        let f = BlockHom::identity(2);
        assert_eq!(parse_block_hom(&write_block_hom(&f)).unwrap(), f);
        assert!(parse_block_hom("ALPHA\n1 1\n1\n").unwrap_err().is_parse());
        assert!(parse_block_hom("2 2\n1 0 0 1\n").unwrap_err().is_parse());
        assert!(
            parse_block_hom("ALPHA\n1 1\n1/2\nBETA\n1 1\n0\nGAMMA\n1 1\n0\nDELTA\n1 1\n1\n")
                .unwrap_err()
                .is_parse()
        );
    }

    #[test]
    fn orbit_roundtrip() {
        let d = tate_ngon_orbits(3, "Ep");
        assert_eq!(parse_orbits(&write_orbits(&d)).unwrap(), d);
        assert!(parse_orbits("abelian_label = pt\n1 1 2\n")
            .unwrap_err()
            .is_parse());
        assert!(parse_orbits("torus_rank = 1\nabelian_label = pt\n1 x\n")
            .unwrap_err()
            .is_parse());
        assert!(
            parse_orbits("torus_rank = 1\ntorus_rank = 1\nabelian_label = pt\n")
                .unwrap_err()
                .is_parse()
        );
    }
}
