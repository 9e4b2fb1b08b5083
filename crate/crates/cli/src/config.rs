//! Study configuration: a plain-text `key = value` file plus overrides.

use std::fmt;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};

use divdiv::{mesh_from_spec, structured_unit_square, TriMesh};

/// Where the meshes of a study come from.
#[derive(Clone, Debug, PartialEq)]
pub enum MeshFamily {
    /// `square`: each level is the grid size `n` of `square:n`.
    Square,
    /// A mesh file; each level is a number of uniform refinements.
    File(PathBuf),
}

impl MeshFamily {
    pub fn mesh(&self, level: usize) -> Result<TriMesh> {
        match self {
            MeshFamily::Square => Ok(structured_unit_square(level)?),
            MeshFamily::File(path) => {
                let mut m = mesh_from_spec(&path.to_string_lossy())?;
                for _ in 0..level {
                    m = m.refine_uniform();
                }
                Ok(m)
            }
        }
    }

    pub fn label(&self, level: usize) -> String {
        match self {
            MeshFamily::Square => format!("square:{level}"),
            MeshFamily::File(p) => format!("{} refined {level}x", p.display()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig {
    pub l: usize,
    pub k: usize,
    pub mesh: MeshFamily,
    pub levels: Vec<usize>,
    pub hybrid: bool,
    pub postprocess: bool,
    pub compare_hybrid: bool,
    pub complexes: bool,
    pub output: PathBuf,
    pub seed: u64,
    /// Worker threads; `1` gives bit-identical reruns.
    pub threads: usize,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            l: 3,
            k: 3,
            mesh: MeshFamily::Square,
            levels: vec![4, 8, 16],
            hybrid: false,
            postprocess: true,
            compare_hybrid: false,
            complexes: false,
            output: PathBuf::from("study-output"),
            seed: 1,
            threads: 1,
        }
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => bail!("`{key}` expects true or false, got `{value}`"),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| anyhow::anyhow!("`{key}` expects a non-negative integer, got `{value}`"))
}

impl StudyConfig {
    /// Parses a config file body. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            cfg.apply(line).with_context(|| format!("config line {}", i + 1))?;
        }
        Ok(cfg)
    }

    /// Applies one `key = value` assignment.
    pub fn apply(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .with_context(|| format!("expected `key = value`, got `{assignment}`"))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "l" => self.l = parse_num(key, value)?,
            "k" => self.k = parse_num(key, value)?,
            "mesh" => {
                self.mesh = if value == "square" {
                    MeshFamily::Square
                } else {
                    MeshFamily::File(PathBuf::from(value))
                }
            }
            "levels" => {
                self.levels = value
                    .split(',')
                    .map(|s| parse_num(key, s.trim()))
                    .collect::<Result<_>>()?
            }
            "hybrid" => self.hybrid = parse_bool(key, value)?,
            "postprocess" => self.postprocess = parse_bool(key, value)?,
            "compare_hybrid" => self.compare_hybrid = parse_bool(key, value)?,
            "complexes" => self.complexes = parse_bool(key, value)?,
            "output" => self.output = PathBuf::from(value),
            "seed" => self.seed = parse_num(key, value)?,
            "threads" => self.threads = parse_num(key, value)?,
            _ => bail!("unknown key `{key}`"),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 3 {
            bail!("k must be at least 3, got {}", self.k);
        }
        if self.l + 1 < self.k {
            bail!("l must be at least k - 1, got l = {}, k = {}", self.l, self.k);
        }
        if self.levels.len() < 2 {
            bail!("at least two levels are needed for rates, got {}", self.levels.len());
        }
        if self.mesh == MeshFamily::Square && self.levels.contains(&0) {
            bail!("square levels are grid sizes and must be positive");
        }
        if self.compare_hybrid && !self.hybrid {
            bail!("compare_hybrid requires hybrid = true");
        }
        if self.threads == 0 {
            bail!("threads must be at least 1");
        }
        Ok(())
    }
}

/// Canonical `key = value` form, as echoed into the manifest.
impl fmt::Display for StudyConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mesh = match &self.mesh {
            MeshFamily::Square => "square".to_string(),
            MeshFamily::File(p) => p.display().to_string(),
        };
        let levels: Vec<String> = self.levels.iter().map(|l| l.to_string()).collect();
        writeln!(f, "l = {}", self.l)?;
        writeln!(f, "k = {}", self.k)?;
        writeln!(f, "mesh = {mesh}")?;
        writeln!(f, "levels = {}", levels.join(", "))?;
        writeln!(f, "hybrid = {}", self.hybrid)?;
        writeln!(f, "postprocess = {}", self.postprocess)?;
        writeln!(f, "compare_hybrid = {}", self.compare_hybrid)?;
        writeln!(f, "complexes = {}", self.complexes)?;
        writeln!(f, "output = {}", self.output.display())?;
        writeln!(f, "seed = {}", self.seed)?;
        write!(f, "threads = {}", self.threads)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_with_comments() {
        let cfg = StudyConfig::parse(
            "# element\nl = 2\nk = 3\n\nlevels = 2, 4,8  # grid sizes\nhybrid = yes\ncompare_hybrid = true\n",
        )
        .unwrap();
        assert_eq!((cfg.l, cfg.k), (2, 3));
        assert_eq!(cfg.levels, vec![2, 4, 8]);
        assert!(cfg.hybrid && cfg.compare_hybrid);
        cfg.validate().unwrap();
    }

    #[test]
    fn display_round_trips() {
        let mut cfg = StudyConfig::default();
        cfg.apply("mesh = meshes/l.txt").unwrap();
        cfg.apply("seed=42").unwrap();
        let back = StudyConfig::parse(&cfg.to_string()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(StudyConfig::parse("colour = blue").is_err());
        assert!(StudyConfig::parse("l 3").is_err());
        assert!(StudyConfig::parse("hybrid = maybe").is_err());
        for bad in ["l = 1\nk = 3", "k = 2", "levels = 4", "compare_hybrid = true", "threads = 0"] {
            assert!(StudyConfig::parse(bad).unwrap().validate().is_err(), "{bad}");
        }
    }
}
