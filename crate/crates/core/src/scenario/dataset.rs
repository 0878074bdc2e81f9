use std::fs;
use std::path::{Path, PathBuf};

use crate::dsp::{wav, AudioClip};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledClip {
    pub clip: AudioClip,
    pub label: usize,
}

/// Labeled clips plus the name of every class.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    class_names: Vec<String>,
    clips: Vec<LabeledClip>,
}

impl Dataset {
    pub fn new(class_names: Vec<String>, clips: Vec<LabeledClip>) -> Result<Self> {
        if let Some(c) = clips.iter().find(|c| c.label >= class_names.len()) {
            return Err(Error::invalid(format!(
                "label {} out of range for {} classes",
                c.label,
                class_names.len()
            )));
        }
        Ok(Self { class_names, clips })
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn clips(&self) -> &[LabeledClip] {
        &self.clips
    }

    pub fn len(&self) -> usize {
        self.clips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clips.is_empty()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_classes()];
        for c in &self.clips {
            counts[c.label] += 1;
        }
        counts
    }

    /// Indices of the clips of one class, in dataset order.
    pub fn indices_of(&self, label: usize) -> Vec<usize> {
        (0..self.clips.len())
            .filter(|&i| self.clips[i].label == label)
            .collect()
    }

    /// Writes `dir/<class name>/<index>.wav`, 16-bit mono.
    pub fn write_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        for name in &self.class_names {
            fs::create_dir_all(dir.join(name))?;
        }
        let mut next = vec![0usize; self.num_classes()];
        for c in &self.clips {
            let path = dir
                .join(&self.class_names[c.label])
                .join(format!("{:04}.wav", next[c.label]));
            next[c.label] += 1;
            wav::write_wav_file(&c.clip, path)?;
        }
        Ok(())
    }

    /// One class per subdirectory, labeled in sorted name order; every
    /// `.wav` file inside is a clip. Other entries are ignored.
    pub fn read_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let mut class_dirs: Vec<PathBuf> = fs::read_dir(dir)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<Vec<_>>>()?
            .into_iter()
            .filter(|p| p.is_dir())
            .collect();
        class_dirs.sort();
        if class_dirs.is_empty() {
            return Err(Error::invalid(format!(
                "no class directories in {}",
                dir.display()
            )));
        }
        let mut class_names = Vec::with_capacity(class_dirs.len());
        let mut clips = Vec::new();
        for (label, class_dir) in class_dirs.iter().enumerate() {
            let mut files: Vec<PathBuf> = fs::read_dir(class_dir)?
                .map(|e| e.map(|e| e.path()))
                .collect::<std::io::Result<Vec<_>>>()?
                .into_iter()
                .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("wav")))
                .collect();
            files.sort();
            for f in files {
                let clip = wav::read_wav_file(&f)
                    .map_err(|e| Error::invalid(format!("{}: {e}", f.display())))?;
                clips.push(LabeledClip { clip, label });
            }
            let name = class_dir
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            class_names.push(name);
        }
        Self::new(class_names, clips)
    }
}
