//! On-disk spectrum cache.
//!
//! One JSON file per class of quadrilaterals sharing the same coupling
//! sequence: the gauge-fixed representative, whether the diagonals were
//! swapped to reach it, the representation and the tool version. Readers
//! never see partial files: writes go to a temporary file that is renamed
//! into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use recoupling::volume::{SpectrumRecord, VolumeSpectrum, TOOL_VERSION};
use recoupling::{canonicalize, Quadrilateral, Representation};

pub struct SpectrumCache {
    dir: PathBuf,
}

impl SpectrumCache {
    /// Creates the directory if needed; `None` when it is not writable.
    pub fn open(dir: &Path) -> Option<Self> {
        if let Err(e) = fs::create_dir_all(dir) {
            eprintln!("warning: cache disabled, cannot create {}: {e}", dir.display());
            return None;
        }
        let probe = dir.join(format!(".probe-{}", std::process::id()));
        match fs::write(&probe, b"") {
            Ok(()) => {
                let _ = fs::remove_file(&probe);
                Some(SpectrumCache { dir: dir.to_path_buf() })
            }
            Err(e) => {
                eprintln!("warning: cache disabled, {} is not writable: {e}", dir.display());
                None
            }
        }
    }

    pub fn path_for(&self, q: &Quadrilateral, rep: Representation) -> anyhow::Result<PathBuf> {
        let (c, record) = canonicalize(q)?;
        let [a, b, cc, d] = c.twice();
        let swap = if record.swaps_diagonals { "x" } else { "s" };
        Ok(self
            .dir
            .join(format!("spectrum-v{TOOL_VERSION}-{rep}-{a}_{b}_{cc}_{d}-{swap}.json")))
    }

    /// A cached spectrum for `q`, restamped with `q` itself. Entries whose
    /// couplings differ from `q`'s, whose tolerance differs, or that fail to
    /// parse are ignored.
    pub fn load(&self, q: &Quadrilateral, rep: Representation, tol: f64, alpha: &[f64]) -> Option<VolumeSpectrum> {
        let path = self.path_for(q, rep).ok()?;
        let text = fs::read(&path).ok()?;
        let mut record: SpectrumRecord = serde_json::from_slice(&text).ok()?;
        if record.representation != rep || record.tol != tol || record.alpha != alpha {
            return None;
        }
        record.quadrilateral = q.twice();
        record.into_spectrum().ok()
    }

    pub fn store(&self, s: &VolumeSpectrum) -> anyhow::Result<()> {
        let path = self.path_for(&s.quad, s.rep)?;
        let bytes = serde_json::to_vec(&s.to_record())?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
            f.write_all(&bytes)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path).with_context(|| format!("renaming into {}", path.display()))?;
        Ok(())
    }
}
