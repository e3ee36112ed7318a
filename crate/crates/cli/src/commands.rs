//! Subcommand implementations. Each returns what to print and the exit code;
//! `Err` is always an input problem (exit 2).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use opacity_core::constructs::{
    build_intro_example, build_two_outcome_announcement, build_wmm_announcement, ImageChoice,
    ImageRule,
};
use opacity_core::gen::{run_transparency_campaign, run_transparency_campaign_on, DomainKind, GenConfig};
use opacity_core::props::WitnessError;
use opacity_core::{
    check_no_universal_indifference, check_richness, guarantee_bruteforce, guarantee_pairwise,
    manipulation_witness, AnnounceError, Announcement, Environment, GuaranteeReport, PropertyKind,
    DEFAULT_SELECTION_CAP,
};

use crate::files::{load_any, to_canonical_json, AnnouncementFile, EnvironmentFile, InputError, InputFile};
use crate::report::{
    verdict_str, CampaignJson, CheckJson, CheckVerdictJson, IndifferenceJson, ManipulationJson,
    MethodJson, RichnessGapJson, ValidateJson, WitnessJson,
};

/// Environment variable overriding the default enumeration cap.
pub const CAP_ENV_VAR: &str = "OPACITY_AUDIT_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    /// Not guaranteed, or a campaign anomaly.
    Failure = 1,
    Input = 2,
    /// Pairwise and brute-force verdicts differ, or a witness could not be confirmed.
    Disagreement = 3,
    CapExceeded = 4,
}

#[derive(Debug)]
pub struct CommandOutput {
    pub stdout: String,
    pub stderr: String,
    pub exit: Exit,
}

impl CommandOutput {
    fn ok(stdout: String, exit: Exit) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            exit,
        }
    }

    fn err(stderr: String, exit: Exit) -> Self {
        Self {
            stdout: String::new(),
            stderr,
            exit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMethod {
    Pairwise,
    BruteForce,
    Both,
}

impl CheckMethod {
    fn as_str(self) -> &'static str {
        match self {
            CheckMethod::Pairwise => "pairwise",
            CheckMethod::BruteForce => "bruteforce",
            CheckMethod::Both => "both",
        }
    }
}

/// `--cap` if given, else `OPACITY_AUDIT_CAP`, else 2^20.
pub fn resolve_cap(flag: Option<u64>) -> Result<u64, InputError> {
    if let Some(cap) = flag {
        return positive_cap(cap, "--cap");
    }
    match std::env::var(CAP_ENV_VAR) {
        Ok(raw) => {
            let cap = raw.trim().parse::<u64>().map_err(|_| {
                InputError::new(CAP_ENV_VAR, format!("not a non-negative integer: {raw:?}"))
            })?;
            positive_cap(cap, CAP_ENV_VAR)
        }
        Err(_) => Ok(DEFAULT_SELECTION_CAP),
    }
}

fn positive_cap(cap: u64, source: &str) -> Result<u64, InputError> {
    if cap == 0 {
        Err(InputError::new(source, "cap must be positive"))
    } else {
        Ok(cap)
    }
}

fn json_line<T: serde::Serialize>(value: &T) -> String {
    to_canonical_json(value)
}

pub fn validate(paths: &[PathBuf], json: bool) -> Result<CommandOutput, InputError> {
    let mut reports = Vec::new();
    for path in paths {
        let (env, selection_count, kind) = match load_any(path)? {
            InputFile::Environment(env) => (Arc::new(env), None, "environment"),
            InputFile::Announcement(a) => (
                a.environment().clone(),
                Some(a.selection_count().to_string()),
                "announcement",
            ),
        };
        let domain = env.domain();
        let nui = check_no_universal_indifference(domain);
        let rich = check_richness(domain);
        reports.push(ValidateJson {
            path: path.display().to_string(),
            kind,
            profiles: domain.len(),
            individuals: env.num_individuals(),
            outcomes: env.num_outcomes(),
            no_universal_indifference: CheckVerdictJson {
                pass: nui.is_pass(),
                counterexample: nui.failure().map(|u| IndifferenceJson::new(u, &env)),
            },
            richness: CheckVerdictJson {
                pass: rich.is_pass(),
                counterexample: rich.failure().map(|g| RichnessGapJson::new(g, &env)),
            },
            selection_count,
        });
    }
    let stdout = if json {
        json_line(&reports)
    } else {
        let mut out = String::new();
        for r in &reports {
            let _ = writeln!(
                out,
                "{} ({}): {} profiles, {} individuals, {} outcomes",
                r.path, r.kind, r.profiles, r.individuals, r.outcomes
            );
            let _ = match &r.no_universal_indifference.counterexample {
                None => writeln!(out, "no-universal-indifference: pass"),
                Some(c) => writeln!(
                    out,
                    "no-universal-indifference: fail (profile {}: everyone indifferent between {} and {})",
                    c.profile, c.x, c.y
                ),
            };
            let _ = match &r.richness.counterexample {
                None => writeln!(out, "richness: pass"),
                Some(c) => writeln!(
                    out,
                    "richness: fail (profile {}: {} ranks {} over {} but has no alternative report keeping {}'s lower contour)",
                    c.profile, c.individual, c.x, c.y, c.x
                ),
            };
            if let Some(count) = &r.selection_count {
                let _ = writeln!(out, "selections: {count}");
            }
        }
        out
    };
    Ok(CommandOutput::ok(stdout, Exit::Success))
}

fn method_json(report: &GuaranteeReport, brute: bool) -> MethodJson {
    MethodJson {
        verdict: verdict_str(report.is_guaranteed()),
        pairs_checked: report.stats.pairs_checked,
        selections_enumerated: brute.then_some(report.stats.selections_enumerated),
        skipped: None,
    }
}

pub fn check(
    path: &Path,
    property: PropertyKind,
    method: CheckMethod,
    cap: u64,
    json: bool,
) -> Result<CommandOutput, InputError> {
    let announcement = AnnouncementFile::load(path)?;
    check_announcement(&announcement, property, method, cap, json)
}

pub fn check_announcement(
    announcement: &Announcement,
    property: PropertyKind,
    method: CheckMethod,
    cap: u64,
    json: bool,
) -> Result<CommandOutput, InputError> {
    let pairwise = (method != CheckMethod::BruteForce).then(|| guarantee_pairwise(announcement, property));
    let mut skipped = None;
    let brute = if method == CheckMethod::Pairwise {
        None
    } else {
        match guarantee_bruteforce(announcement, property, cap) {
            Ok(report) => Some(report),
            Err(AnnounceError::CapExceeded { count, cap }) => {
                let msg = format!("{count} selections exceed the enumeration cap of {cap}");
                if method == CheckMethod::BruteForce {
                    return Ok(CommandOutput::err(
                        format!("error: {msg}; use --method pairwise or raise --cap\n"),
                        Exit::CapExceeded,
                    ));
                }
                skipped = Some(msg);
                None
            }
            Err(other) => return Err(InputError::new("", other.to_string())),
        }
    };
    let agreement = match (&pairwise, &brute) {
        (Some(p), Some(b)) => Some(p.verdict == b.verdict),
        _ => None,
    };
    let primary = pairwise.as_ref().or(brute.as_ref()).expect("at least one method ran");
    let guaranteed = primary.is_guaranteed();
    let exit = if agreement == Some(false) {
        Exit::Disagreement
    } else if guaranteed {
        Exit::Success
    } else {
        Exit::Failure
    };

    let report = CheckJson {
        property: property.as_str(),
        method: method.as_str(),
        verdict: verdict_str(guaranteed),
        selection_count: announcement.selection_count().to_string(),
        opaque: announcement.is_opaque(),
        pairwise: pairwise.as_ref().map(|r| method_json(r, false)),
        bruteforce: match (&brute, skipped) {
            (Some(r), _) => Some(method_json(r, true)),
            (None, Some(msg)) => Some(MethodJson {
                verdict: "skipped",
                pairs_checked: 0,
                selections_enumerated: None,
                skipped: Some(msg),
            }),
            (None, None) => None,
        },
        agreement,
        witness: primary.witness.as_ref().map(WitnessJson::new),
    };

    let stdout = if json {
        json_line(&report)
    } else {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{}: {} ({} selections)",
            report.property, report.verdict, report.selection_count
        );
        for (name, m) in [("pairwise", &report.pairwise), ("bruteforce", &report.bruteforce)] {
            if let Some(m) = m {
                match (&m.skipped, m.selections_enumerated) {
                    (Some(msg), _) => {
                        let _ = writeln!(out, "  {name}: skipped ({msg})");
                    }
                    (None, Some(n)) => {
                        let _ = writeln!(
                            out,
                            "  {name}: {} ({n} selections, {} pairs checked)",
                            m.verdict, m.pairs_checked
                        );
                    }
                    (None, None) => {
                        let _ = writeln!(out, "  {name}: {} ({} pairs checked)", m.verdict, m.pairs_checked);
                    }
                }
            }
        }
        if agreement == Some(false) {
            let _ = writeln!(out, "  DISAGREEMENT between pairwise and brute-force verdicts");
        }
        if let Some(w) = &report.witness {
            let _ = writeln!(out, "  witness: {}", w.violation.description);
            out.push_str(&json_line(w));
        }
        out
    };
    Ok(CommandOutput::ok(stdout, exit))
}

pub fn witness(path: &Path) -> Result<CommandOutput, InputError> {
    let announcement = AnnouncementFile::load(path)?;
    Ok(match manipulation_witness(&announcement) {
        Ok(w) => CommandOutput::ok(json_line(&ManipulationJson::new(&w)), Exit::Success),
        Err(e @ (WitnessError::BranchGap { .. } | WitnessError::Unconfirmed)) => {
            CommandOutput::err(format!("internal error: {}: {e}\n", e.code()), Exit::Disagreement)
        }
        Err(e) => CommandOutput::err(
            format!("precondition failed: {}: {e}\n", e.code()),
            Exit::Input,
        ),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Intro,
    Thm2,
    Thm3,
}

#[derive(Debug, Clone, Default)]
pub struct TwoOutcomeArgs {
    pub environment: Option<PathBuf>,
    pub x: Option<String>,
    pub y: Option<String>,
    pub rule: Option<String>,
}

/// `both`, `x`, `y`, or a comma-separated list of `x`, `y`, `xy` per profile.
pub fn parse_rule(raw: &str) -> Result<ImageRule, InputError> {
    let choice = |s: &str| match s.trim() {
        "x" => Ok(ImageChoice::X),
        "y" => Ok(ImageChoice::Y),
        "xy" | "both" => Ok(ImageChoice::Both),
        other => Err(InputError::new("--rule", format!("unknown image choice {other:?}"))),
    };
    if raw.contains(',') {
        raw.split(',').map(choice).collect::<Result<_, _>>().map(ImageRule::PerProfile)
    } else {
        choice(raw).map(ImageRule::Uniform)
    }
}

pub fn build(
    construction: Construction,
    n: Option<usize>,
    two: &TwoOutcomeArgs,
    out: Option<&Path>,
) -> Result<CommandOutput, InputError> {
    let announcement = match construction {
        Construction::Intro => build_intro_example().1,
        Construction::Thm2 => {
            let n = n.ok_or_else(|| InputError::new("--n", "thm2 needs --n N"))?;
            build_wmm_announcement(n)
                .map_err(|e| InputError::new("--n", e.to_string()))?
                .announcement
        }
        Construction::Thm3 => {
            let path = two
                .environment
                .as_ref()
                .ok_or_else(|| InputError::new("--environment", "thm3 needs an environment file"))?;
            let env = Arc::new(EnvironmentFile::load(path)?);
            let outcome = |flag: &str, label: &Option<String>| {
                let label = label
                    .as_deref()
                    .ok_or_else(|| InputError::new(flag, "missing outcome label"))?;
                env.outcome(label)
                    .ok_or_else(|| InputError::new(flag, format!("unknown outcome {label:?}")))
            };
            let x = outcome("--x", &two.x)?;
            let y = outcome("--y", &two.y)?;
            let rule = parse_rule(two.rule.as_deref().unwrap_or("both"))?;
            build_two_outcome_announcement(&env, x, y, &rule).map_err(|e| describe_construct_error(e, &env))?
        }
    };
    let file = AnnouncementFile::from_announcement(&announcement);
    match out {
        None => Ok(CommandOutput::ok(to_canonical_json(&file), Exit::Success)),
        Some(dir) => {
            fs::create_dir_all(dir)
                .map_err(|e| InputError::new(dir.display().to_string(), e.to_string()))?;
            let env_path = dir.join("environment.json");
            let ann_path = dir.join("announcement.json");
            let env_file = EnvironmentFile::from_environment(announcement.environment());
            for (path, text) in [
                (&env_path, to_canonical_json(&env_file)),
                (&ann_path, to_canonical_json(&file)),
            ] {
                fs::write(path, text)
                    .map_err(|e| InputError::new(path.display().to_string(), e.to_string()))?;
            }
            Ok(CommandOutput::ok(
                format!("wrote {}\nwrote {}\n", env_path.display(), ann_path.display()),
                Exit::Success,
            ))
        }
    }
}

fn describe_construct_error(e: opacity_core::constructs::ConstructError, env: &Environment) -> InputError {
    use opacity_core::constructs::ConstructError;
    match e {
        ConstructError::NotStrictlyRanked {
            profile,
            individual,
        } => InputError::new(
            format!("profiles[{}]", profile.0),
            format!(
                "individual {} does not strictly rank the two outcomes",
                env.individual_label(individual)
            ),
        ),
        other => InputError::new("", other.to_string()),
    }
}

#[derive(Debug, Clone)]
pub struct CampaignArgs {
    pub seed: u64,
    pub trials: u64,
    pub outcomes: usize,
    pub individuals: usize,
    pub domain: DomainKind,
    pub environment: Option<PathBuf>,
    pub opacity_rate: f64,
    pub max_image_size: Option<usize>,
}

pub fn campaign(args: &CampaignArgs, json: bool) -> Result<CommandOutput, InputError> {
    let explicit = match (args.domain, &args.environment) {
        (DomainKind::Explicit, Some(path)) => Some(Arc::new(EnvironmentFile::load(path)?)),
        (DomainKind::Explicit, None) => {
            return Err(InputError::new("--environment", "explicit domains need an environment file"))
        }
        (_, Some(_)) => {
            return Err(InputError::new("--environment", "only valid with --domain explicit"))
        }
        _ => None,
    };
    let outcomes = explicit.as_ref().map_or(args.outcomes, |e| e.num_outcomes());
    let cfg = GenConfig {
        seed: args.seed,
        outcomes,
        individuals: explicit.as_ref().map_or(args.individuals, |e| e.num_individuals()),
        domain_kind: args.domain,
        opacity_rate: args.opacity_rate,
        max_image_size: args.max_image_size.unwrap_or(outcomes),
    };
    let report = match &explicit {
        Some(env) => run_transparency_campaign_on(env, &cfg, args.trials),
        None => run_transparency_campaign(&cfg, args.trials),
    }
    .map_err(|e| InputError::new("campaign", e.to_string()))?;
    let exit = if report.is_clean() {
        Exit::Success
    } else {
        Exit::Failure
    };
    let summary = CampaignJson::new(&report, args.domain.as_str(), cfg.opacity_rate, cfg.max_image_size);
    let stdout = if json {
        json_line(&summary)
    } else {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "campaign seed {} on {} domain ({} profiles, {} individuals, {} outcomes), {} trials",
            summary.seed,
            summary.domain,
            summary.domain_size,
            summary.individuals,
            summary.outcomes,
            summary.trials
        );
        let _ = writeln!(
            out,
            "opaque: {} (not guaranteed: {}, witnesses validated: {}, constructive witnesses: {})",
            summary.opaque,
            summary.opaque_not_guaranteed,
            summary.witnesses_validated,
            summary.constructive_witnesses
        );
        let _ = writeln!(
            out,
            "transparent: {} (strategy-proof: {})",
            summary.transparent, summary.transparent_sp
        );
        let _ = writeln!(
            out,
            "opacity: {} non-singleton images, total excess {}, max excess {}",
            summary.non_singleton_images, summary.total_excess, summary.max_excess
        );
        let _ = writeln!(out, "anomalies: {}", summary.anomalies.len());
        for a in &summary.anomalies {
            let _ = writeln!(out, "  trial {}: {}", a.trial, a.detail);
        }
        out
    };
    Ok(CommandOutput::ok(stdout, exit))
}
