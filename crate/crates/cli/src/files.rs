//! JSON interchange files for environments and announcements.
//!
//! Labels are the external vocabulary; indices never appear in these files.
//! Canonical form lists each indifference class in outcome-table order and
//! each image in outcome-table order, pretty-printed with LF line endings.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use opacity_core::{
    Announcement, Domain, Environment, ModelError, OutcomeId, Profile, Ranking,
};
use serde::{Deserialize, Serialize};

/// An input problem located by file and field.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}", located(.location, .message))]
pub struct InputError {
    pub location: String,
    pub message: String,
}

impl InputError {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            location: location.into(),
            message: message.into(),
        }
    }

    fn within(mut self, path: &Path) -> Self {
        self.location = if self.location.is_empty() {
            path.display().to_string()
        } else {
            format!("{}: {}", path.display(), self.location)
        };
        self
    }
}

fn located(location: &str, message: &str) -> String {
    if location.is_empty() {
        message.to_owned()
    } else {
        format!("{location}: {message}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentFile {
    pub outcomes: Vec<String>,
    pub individuals: Vec<String>,
    /// profiles[k][i] is individual i's ranking: a list of indifference classes.
    pub profiles: Vec<Vec<Vec<Vec<String>>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EnvironmentSource {
    Inline(EnvironmentFile),
    /// Path relative to the announcement file's directory.
    Path(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnouncementFile {
    pub environment: EnvironmentSource,
    /// Parallel to the environment's `profiles`.
    pub images: Vec<Vec<String>>,
}

/// Pretty JSON with a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("file types always serialize");
    out.push('\n');
    out
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| {
        InputError::new(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path)
        .map_err(|e| InputError::new(path.display().to_string(), format!("cannot read: {e}")))
}

fn model_message(e: &ModelError, outcomes: &[String]) -> String {
    match e {
        ModelError::MissingOutcome(x) => format!("ranking omits outcome {:?}", outcomes[x.0]),
        ModelError::DuplicateOutcome(x) => {
            format!("outcome {:?} appears more than once", outcomes[x.0])
        }
        ModelError::EmptyClass { class } => format!("indifference class {class} is empty"),
        other => other.to_string(),
    }
}

fn unique_labels(labels: &[String], field: &str) -> Result<(), InputError> {
    for (k, label) in labels.iter().enumerate() {
        if labels[..k].contains(label) {
            return Err(InputError::new(
                format!("{field}[{k}]"),
                format!("duplicate label {label:?}"),
            ));
        }
    }
    Ok(())
}

impl EnvironmentFile {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        parse_json(text)
    }

    pub fn to_environment(&self) -> Result<Environment, InputError> {
        unique_labels(&self.outcomes, "outcomes")?;
        unique_labels(&self.individuals, "individuals")?;
        if self.outcomes.len() < 2 {
            return Err(InputError::new("outcomes", "at least 2 outcomes are required"));
        }
        if self.individuals.is_empty() {
            return Err(InputError::new("individuals", "at least 1 individual is required"));
        }
        if self.profiles.is_empty() {
            return Err(InputError::new("profiles", "at least 1 profile is required"));
        }
        let outcome = |label: &str| self.outcomes.iter().position(|l| l == label).map(OutcomeId);
        let mut profiles: Vec<Profile> = Vec::with_capacity(self.profiles.len());
        for (k, rankings) in self.profiles.iter().enumerate() {
            if rankings.len() != self.individuals.len() {
                return Err(InputError::new(
                    format!("profiles[{k}]"),
                    format!(
                        "expected {} rankings (one per individual), found {}",
                        self.individuals.len(),
                        rankings.len()
                    ),
                ));
            }
            let mut parsed = Vec::with_capacity(rankings.len());
            for (i, classes) in rankings.iter().enumerate() {
                let mut ids = Vec::with_capacity(classes.len());
                for (c, class) in classes.iter().enumerate() {
                    let mut class_ids = Vec::with_capacity(class.len());
                    for label in class {
                        class_ids.push(outcome(label).ok_or_else(|| {
                            InputError::new(
                                format!("profiles[{k}][{i}][{c}]"),
                                format!("unknown outcome {label:?}"),
                            )
                        })?);
                    }
                    ids.push(class_ids);
                }
                let ranking = Ranking::new(ids, self.outcomes.len()).map_err(|e| {
                    InputError::new(format!("profiles[{k}][{i}]"), model_message(&e, &self.outcomes))
                })?;
                parsed.push(ranking);
            }
            let profile = Profile::new(parsed).expect("rankings share the outcome table");
            if let Some(j) = profiles.iter().position(|p| *p == profile) {
                return Err(InputError::new(
                    format!("profiles[{k}]"),
                    format!("duplicates profiles[{j}]"),
                ));
            }
            profiles.push(profile);
        }
        let domain = Domain::new(profiles).map_err(|e| InputError::new("profiles", e.to_string()))?;
        Environment::new(self.outcomes.clone(), self.individuals.clone(), domain)
            .map_err(|e| InputError::new("", e.to_string()))
    }

    pub fn from_environment(env: &Environment) -> Self {
        let label = |x: &OutcomeId| env.outcome_label(*x).to_owned();
        Self {
            outcomes: env.outcome_labels().to_vec(),
            individuals: env.individual_labels().to_vec(),
            profiles: env
                .domain()
                .profiles()
                .iter()
                .map(|p| {
                    p.rankings()
                        .iter()
                        .map(|r| {
                            r.classes()
                                .iter()
                                .map(|class| class.iter().map(label).collect())
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Environment, InputError> {
        let text = read(path)?;
        Self::parse(&text)
            .and_then(|f| f.to_environment())
            .map_err(|e| e.within(path))
    }
}

impl AnnouncementFile {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        parse_json(text)
    }

    /// Resolves the environment (reading it relative to `base_dir` when given
    /// by path) and the images.
    pub fn to_announcement(&self, base_dir: &Path) -> Result<Announcement, InputError> {
        let env = match &self.environment {
            EnvironmentSource::Inline(file) => file.to_environment().map_err(|mut e| {
                e.location = if e.location.is_empty() {
                    "environment".into()
                } else {
                    format!("environment.{}", e.location)
                };
                e
            })?,
            EnvironmentSource::Path(rel) => {
                let path: PathBuf = base_dir.join(rel);
                EnvironmentFile::load(&path)?
            }
        };
        let env = Arc::new(env);
        self.images_for(&env)
    }

    fn images_for(&self, env: &Arc<Environment>) -> Result<Announcement, InputError> {
        if self.images.len() != env.domain().len() {
            return Err(InputError::new(
                "images",
                format!(
                    "expected {} images (one per profile), found {}",
                    env.domain().len(),
                    self.images.len()
                ),
            ));
        }
        let mut images = Vec::with_capacity(self.images.len());
        for (k, image) in self.images.iter().enumerate() {
            if image.is_empty() {
                return Err(InputError::new(format!("images[{k}]"), "image is empty"));
            }
            let mut ids: Vec<OutcomeId> = Vec::with_capacity(image.len());
            for label in image {
                let x = env.outcome(label).ok_or_else(|| {
                    InputError::new(format!("images[{k}]"), format!("unknown outcome {label:?}"))
                })?;
                if ids.contains(&x) {
                    return Err(InputError::new(
                        format!("images[{k}]"),
                        format!("outcome {label:?} listed twice"),
                    ));
                }
                ids.push(x);
            }
            images.push(ids);
        }
        Announcement::new(env.clone(), images).map_err(|e| InputError::new("images", e.to_string()))
    }

    /// Self-contained file with the environment inline.
    pub fn from_announcement(announcement: &Announcement) -> Self {
        let env = announcement.environment();
        Self {
            environment: EnvironmentSource::Inline(EnvironmentFile::from_environment(env)),
            images: announcement
                .images()
                .iter()
                .map(|img| img.iter().map(|&x| env.outcome_label(x).to_owned()).collect())
                .collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Announcement, InputError> {
        let text = read(path)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text)
            .and_then(|f| f.to_announcement(base))
            .map_err(|e| e.within(path))
    }
}

/// Either kind of input file, told apart by the presence of `images`.
pub enum InputFile {
    Environment(Environment),
    Announcement(Announcement),
}

pub fn load_any(path: &Path) -> Result<InputFile, InputError> {
    let text = read(path)?;
    let value: serde_json::Value = parse_json(&text).map_err(|e| e.within(path))?;
    if value.get("images").is_some() {
        AnnouncementFile::load(path).map(InputFile::Announcement)
    } else {
        EnvironmentFile::load(path).map(InputFile::Environment)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INTRO: &str = r#"{
  "outcomes": ["x", "y"],
  "individuals": ["A", "B"],
  "profiles": [
    [[["x"], ["y"]], [["x"], ["y"]]],
    [[["x"], ["y"]], [["y"], ["x"]]],
    [[["y"], ["x"]], [["x"], ["y"]]],
    [[["y"], ["x"]], [["y"], ["x"]]]
  ]
}"#;

    #[test]
    fn parses_intro_environment() {
        let env = EnvironmentFile::parse(INTRO).unwrap().to_environment().unwrap();
        assert_eq!(env.domain().len(), 4);
        assert_eq!(env.individual_label(opacity_core::IndividualId(1)), "B");
    }

    #[test]
    fn missing_outcome_is_located() {
        let text = INTRO.replace(r#"[[["x"], ["y"]], [["y"], ["x"]]],"#, r#"[[["x"]], [["y"], ["x"]]],"#);
        let err = EnvironmentFile::parse(&text).unwrap().to_environment().unwrap_err();
        assert_eq!(err.location, "profiles[1][0]");
        assert!(err.message.contains("omits outcome \"y\""));
    }

    #[test]
    fn unknown_labels_and_duplicates_are_located() {
        let text = INTRO.replacen(r#"[["y"], ["x"]]]"#, r#"[["z"], ["x"]]]"#, 1);
        let err = EnvironmentFile::parse(&text).unwrap().to_environment().unwrap_err();
        assert_eq!(err.location, "profiles[1][1][0]");

        let text = INTRO.replace(r#"[[["y"], ["x"]], [["y"], ["x"]]]"#, r#"[[["x"], ["y"]], [["x"], ["y"]]]"#);
        let err = EnvironmentFile::parse(&text).unwrap().to_environment().unwrap_err();
        assert_eq!(err.message, "duplicates profiles[0]");
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let err = EnvironmentFile::parse("{\n  \"outcomes\": [\"x\",\n}").unwrap_err();
        assert!(err.location.starts_with("line 3"), "{}", err.location);
        let err = EnvironmentFile::parse(r#"{"outcomes": [], "individuals": [], "profiles": [], "extra": 1}"#)
            .unwrap_err();
        assert!(err.message.contains("unknown field"));
    }

    #[test]
    fn canonical_round_trip_is_byte_stable() {
        let file = EnvironmentFile::parse(INTRO).unwrap();
        let canonical = to_canonical_json(&EnvironmentFile::from_environment(&file.to_environment().unwrap()));
        let again = EnvironmentFile::parse(&canonical).unwrap().to_environment().unwrap();
        assert_eq!(canonical, to_canonical_json(&EnvironmentFile::from_environment(&again)));
        assert!(!canonical.contains('\r'));
        assert!(canonical.ends_with("}\n"));
    }

    #[test]
    fn announcement_images_are_validated() {
        let env = EnvironmentFile::parse(INTRO).unwrap();
        let mut file = AnnouncementFile {
            environment: EnvironmentSource::Inline(env),
            images: vec![vec!["x".into()], vec!["x".into(), "y".into()], vec!["y".into(), "x".into()], vec!["y".into()]],
        };
        let a = file.to_announcement(Path::new(".")).unwrap();
        assert_eq!(a.selection_count(), 4u32.into());
        // canonical output sorts images by outcome order
        let canonical = AnnouncementFile::from_announcement(&a);
        assert_eq!(canonical.images[2], vec!["x".to_string(), "y".to_string()]);

        file.images[3] = vec![];
        assert_eq!(file.to_announcement(Path::new(".")).unwrap_err().location, "images[3]");
        file.images.pop();
        assert_eq!(file.to_announcement(Path::new(".")).unwrap_err().location, "images");
    }
}
