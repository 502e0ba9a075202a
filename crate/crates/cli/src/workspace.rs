use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use sha2::{Digest, Sha256};

use obk_core::formats::FileRef;

/// Resolves input paths, falling back to the preset directory.
pub struct Workspace {
    preset_dir: PathBuf,
}

impl Workspace {
    pub fn from_env() -> Self {
        let preset_dir = std::env::var_os("OBK_PRESET_DIR")
            .map(PathBuf::from)
            .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presets"));
        Workspace { preset_dir }
    }

    /// `path` as given if it exists (relative to `base` when relative),
    /// otherwise the file of that name in the preset directory.
    pub fn resolve(&self, path: &Path, base: Option<&Path>) -> PathBuf {
        let direct = match base {
            Some(b) if path.is_relative() => b.join(path),
            _ => path.to_path_buf(),
        };
        if direct.exists() || path.is_absolute() {
            return direct;
        }
        let preset = self.preset_dir.join(path);
        if preset.exists() {
            preset
        } else {
            direct
        }
    }

    pub fn read(&self, path: &Path) -> Result<(PathBuf, String)> {
        let p = self.resolve(path, None);
        let text = fs::read_to_string(&p).with_context(|| format!("cannot read {}", p.display()))?;
        Ok((p, text))
    }

    /// Reads a file referenced from a document in `base`, checking its hash.
    pub fn read_ref(&self, r: &FileRef, base: &Path) -> Result<(PathBuf, String)> {
        let p = self.resolve(Path::new(&r.path), Some(base));
        let bytes = fs::read(&p).with_context(|| format!("cannot read {}", p.display()))?;
        if let Some(want) = &r.sha256 {
            let got = sha256_hex(&bytes);
            if !got.eq_ignore_ascii_case(want) {
                bail!("sha256 mismatch for {}: expected {want}, found {got}", p.display());
            }
        }
        let text = String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", p.display()))?;
        Ok((p, text))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
