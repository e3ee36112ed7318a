#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use opacity_cli::files::{to_canonical_json, AnnouncementFile, EnvironmentFile};
use opacity_core::gen::full_strict_domain;
use opacity_core::{Announcement, Environment, OutcomeId};

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> serde_json::Value {
        serde_json::from_str(&self.stdout)
            .unwrap_or_else(|e| panic!("stdout is not JSON ({e}):\n{}", self.stdout))
    }
}

fn finish(out: Output) -> Run {
    Run {
        code: out.status.code().expect("terminated by signal"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn audit(args: &[&str]) -> Run {
    audit_with_env(args, &[])
}

pub fn audit_with_env(args: &[&str], vars: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_opacity-audit"));
    cmd.args(args).env_remove("OPACITY_AUDIT_CAP");
    for (k, v) in vars {
        cmd.env(k, v);
    }
    finish(cmd.output().expect("binary runs"))
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

pub fn full_strict_env(individuals: usize, outcomes: usize) -> Arc<Environment> {
    Arc::new(
        Environment::with_default_labels(full_strict_domain(individuals, outcomes).unwrap())
            .unwrap(),
    )
}

pub fn write_environment(dir: &Path, name: &str, env: &Environment) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, to_canonical_json(&EnvironmentFile::from_environment(env))).unwrap();
    path
}

pub fn write_announcement(dir: &Path, name: &str, a: &Announcement) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, to_canonical_json(&AnnouncementFile::from_announcement(a))).unwrap();
    path
}

/// Singleton images choosing the outcome at `pick(profile index)`, with `wide`
/// profiles widened to `extra` as well.
pub fn announcement_with(
    env: &Arc<Environment>,
    pick: impl Fn(usize) -> usize,
    wide: &[(usize, usize)],
) -> Announcement {
    let images = (0..env.domain().len())
        .map(|p| {
            let mut image = vec![OutcomeId(pick(p))];
            for &(q, extra) in wide {
                if q == p {
                    image.push(OutcomeId(extra));
                }
            }
            image
        })
        .collect();
    Announcement::new(env.clone(), images).unwrap()
}
