//! Loading structures and named sets from disk.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rough_afford::format::{parse_phi, parse_sets, parse_sets_for_table, parse_table};
use rough_afford::{AffordanceStructure, AttributeTable, BitSet, NamedSets, Sort};
use serde::{Deserialize, Serialize};

pub const MANIFEST_NAME: &str = "manifest.toml";

/// Paths are relative to the manifest's directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub actors: PathBuf,
    pub objects: PathBuf,
    pub environments: PathBuf,
    pub phi: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<PathBuf>,
}

pub struct Bundle {
    pub structure: AffordanceStructure,
    pub sets: NamedSets,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn manifest_path(path: &Path) -> PathBuf {
    if path.is_dir() {
        path.join(MANIFEST_NAME)
    } else {
        path.to_path_buf()
    }
}

fn table(path: &Path) -> Result<AttributeTable> {
    parse_table(&read(path)?).with_context(|| path.display().to_string())
}

fn sets_file(s: &AffordanceStructure, path: &Path) -> Result<NamedSets> {
    parse_sets(&read(path)?, s).with_context(|| path.display().to_string())
}

/// Loads a bundle. `sets` replaces the manifest's named-set file.
pub fn load(path: &Path, sets: Option<&Path>) -> Result<Bundle> {
    let path = manifest_path(path);
    let manifest: Manifest = toml::from_str(&read(&path)?)
        .with_context(|| format!("{}: invalid manifest", path.display()))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let structure = {
        let phi = dir.join(&manifest.phi);
        parse_phi(
            &read(&phi)?,
            table(&dir.join(&manifest.actors))?,
            table(&dir.join(&manifest.objects))?,
            table(&dir.join(&manifest.environments))?,
        )
        .with_context(|| phi.display().to_string())?
    };
    let sets_path = match sets {
        Some(p) => Some(p.to_path_buf()),
        None => manifest.sets.as_ref().map(|p| dir.join(p)),
    };
    let sets = match sets_path {
        Some(p) => sets_file(&structure, &p)?,
        None => NamedSets::new(),
    };
    Ok(Bundle { structure, sets })
}

/// One table with the named sets of `sort` from an optional file.
pub fn load_table(
    path: &Path,
    sets: Option<&Path>,
    sort: Sort,
) -> Result<(AttributeTable, Vec<(String, BitSet)>)> {
    let t = table(path)?;
    let named = match sets {
        Some(p) => {
            parse_sets_for_table(&read(p)?, &t, sort).with_context(|| p.display().to_string())?
        }
        None => Vec::new(),
    };
    Ok((t, named))
}

/// Writes the structure's tables, relation and a manifest into `dir`.
pub fn write(s: &AffordanceStructure, dir: &Path) -> Result<()> {
    use rough_afford::format::{write_phi, write_table};

    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let manifest = Manifest {
        actors: "actors.tsv".into(),
        objects: "objects.tsv".into(),
        environments: "environments.tsv".into(),
        phi: "phi.tsv".into(),
        sets: None,
    };
    let files = [
        (&manifest.actors, write_table(s.table(Sort::A))),
        (&manifest.objects, write_table(s.table(Sort::O))),
        (&manifest.environments, write_table(s.table(Sort::E))),
        (&manifest.phi, write_phi(s)),
        (&PathBuf::from(MANIFEST_NAME), toml::to_string(&manifest)?),
    ];
    for (name, text) in files {
        let p = dir.join(name);
        fs::write(&p, text).with_context(|| format!("cannot write {}", p.display()))?;
    }
    Ok(())
}
