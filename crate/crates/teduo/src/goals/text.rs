//! Canonical instruction rendering and deterministic paraphrasing.
//!
//! Canonical renderings use the original benchmark template wording.
//! Paraphrases substitute an alternative formulation plus object and color
//! synonyms, drawn uniformly (seeded) from the closed substitution tables, so
//! tests stay hermetic. [`canonicalize_text`] inverts the substitutions back
//! to canonical vocabulary for split-disjointness checks.

use rand::Rng;

use super::{Goal, GoalKind, ObjectSpec, TargetKind};
use crate::grid::Color;
use crate::seeding;

/// A rendered goal instruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalText {
    pub text: String,
    pub variant: Variant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Canonical,
    Paraphrase { seed: u64 },
}

const FORMS_GO_TO_TILE: [&str; 3] = [
    "Move to the location at the coordinate {}",
    "Reach the position at {}",
    "Navigate to the point {}",
];
const FORMS_PICK_UP: [&str; 3] = ["Grab a {}", "Acquire a {}", "collect a {}"];
const FORMS_GO_TO: [&str; 3] = ["Move to a {}", "Reach a {}", "Naviguate to a {}"];
const FORMS_OPEN: [&str; 2] = ["Push a {} open", "Swing open a {}"];
const FORMS_PUT_NEXT: [&str; 3] = [
    "Set a {1} and a {2} next to each other",
    "Position a {1} alongside a {2}",
    "Place a {1} beside a {2}",
];

const OBJECT_SYNONYMS: [(&str, [&str; 3]); 4] = [
    ("box", ["container", "crate", "chest"]),
    ("key", ["passcode", "lock-opener", "unlocker"]),
    ("ball", ["sphere", "globe", "orb"]),
    ("door", ["portal", "gate", "hatch"]),
];

const COLOR_SYNONYMS: [(&str, [&str; 3]); 6] = [
    ("blue", ["azure", "cobalt", "navy"]),
    ("red", ["scarlet", "crimson", "ruby"]),
    ("green", ["emerald", "jade", "lime"]),
    ("yellow", ["golden", "amber", "canary"]),
    ("purple", ["violet", "lavender", "mauve"]),
    ("grey", ["ash", "charcoal", "silver"]),
];

fn object_synonym(word: &str, rng: &mut impl Rng) -> String {
    for (original, synonyms) in OBJECT_SYNONYMS {
        if original == word {
            return synonyms[rng.gen_range(0..synonyms.len())].to_string();
        }
    }
    word.to_string()
}

fn color_synonym(color: Color, rng: &mut impl Rng) -> String {
    for (original, synonyms) in COLOR_SYNONYMS {
        if original == color.word() {
            return synonyms[rng.gen_range(0..synonyms.len())].to_string();
        }
    }
    color.word().to_string()
}

/// Canonical noun phrase with article: "the blue key" / "a key".
fn canonical_phrase(color: &Option<Color>, word: &str) -> String {
    match color {
        Some(c) => format!("the {} {}", c.word(), word),
        None => format!("a {word}"),
    }
}

/// Paraphrase noun phrase (no article; the formulation supplies "a").
fn paraphrase_phrase(color: &Option<Color>, word: &str, rng: &mut impl Rng) -> String {
    let object = object_synonym(word, rng);
    match color {
        Some(c) => format!("{} {}", color_synonym(*c, rng), object),
        None => object,
    }
}

fn spec_word(spec: &ObjectSpec) -> &'static str {
    spec.shape.word()
}

/// Renders a goal instruction in the requested variant. Deterministic:
/// identical `(goal, seed)` pairs produce identical paraphrases.
pub fn render(goal: &Goal, variant: Variant) -> GoalText {
    let text = match variant {
        Variant::Canonical => match &goal.kind {
            GoalKind::GoToTile { tile } => format!("go to the tile {tile}"),
            GoalKind::GoToObject { color, target } => {
                format!("go to {}", canonical_phrase(color, target.word()))
            }
            GoalKind::PickUp { color, shape } => {
                format!("pick up {}", canonical_phrase(color, shape.word()))
            }
            GoalKind::OpenDoor { color } => {
                format!("open {}", canonical_phrase(color, "door"))
            }
            GoalKind::PutNext { moved, anchor } => format!(
                "put {} next to {}",
                canonical_phrase(&moved.color, spec_word(moved)),
                canonical_phrase(&anchor.color, spec_word(anchor))
            ),
        },
        Variant::Paraphrase { seed } => {
            let mut rng = seeding::rng(seeding::derive_seed(seed, &goal.id));
            match &goal.kind {
                GoalKind::GoToTile { tile } => {
                    let form = FORMS_GO_TO_TILE[rng.gen_range(0..FORMS_GO_TO_TILE.len())];
                    form.replace("{}", &tile.to_string())
                }
                GoalKind::GoToObject { color, target } => {
                    let form = FORMS_GO_TO[rng.gen_range(0..FORMS_GO_TO.len())];
                    form.replace("{}", &paraphrase_phrase(color, target.word(), &mut rng))
                }
                GoalKind::PickUp { color, shape } => {
                    let form = FORMS_PICK_UP[rng.gen_range(0..FORMS_PICK_UP.len())];
                    form.replace("{}", &paraphrase_phrase(color, shape.word(), &mut rng))
                }
                GoalKind::OpenDoor { color } => {
                    let form = FORMS_OPEN[rng.gen_range(0..FORMS_OPEN.len())];
                    form.replace("{}", &paraphrase_phrase(color, "door", &mut rng))
                }
                GoalKind::PutNext { moved, anchor } => {
                    let form = FORMS_PUT_NEXT[rng.gen_range(0..FORMS_PUT_NEXT.len())];
                    let first = paraphrase_phrase(&moved.color, spec_word(moved), &mut rng);
                    let second = paraphrase_phrase(&anchor.color, spec_word(anchor), &mut rng);
                    form.replace("{1}", &first).replace("{2}", &second)
                }
            }
        }
    };
    GoalText { text, variant }
}

/// Reduces an instruction to a normalized canonical-vocabulary form:
/// formulations are rewritten to the original templates, synonyms inverted,
/// case lowered, and articles normalized to "a". Two instructions denote the
/// same goal exactly when their canonicalizations are equal.
pub fn canonicalize_text(text: &str) -> String {
    let mut s = text.to_lowercase().trim().to_string();

    // Formulation skeletons, longest first.
    let rewrites: [(&str, &str); 9] = [
        ("move to the location at the coordinate", "go to the tile"),
        ("navigate to the point", "go to the tile"),
        ("reach the position at", "go to the tile"),
        ("grab a", "pick up a"),
        ("acquire a", "pick up a"),
        ("collect a", "pick up a"),
        ("naviguate to a", "go to a"),
        ("move to a", "go to a"),
        ("reach a", "go to a"),
    ];
    for (from, to) in rewrites {
        if let Some(rest) = s.strip_prefix(from) {
            s = format!("{to}{rest}");
            break;
        }
    }
    if let Some(inner) = s.strip_prefix("push a ").and_then(|r| r.strip_suffix(" open")) {
        s = format!("open a {inner}");
    } else if let Some(inner) = s.strip_prefix("swing open a ") {
        s = format!("open a {inner}");
    } else if let Some(inner) = s
        .strip_prefix("set a ")
        .and_then(|r| r.strip_suffix(" next to each other"))
    {
        if let Some((first, second)) = inner.split_once(" and a ") {
            s = format!("put a {first} next to a {second}");
        }
    } else if let Some(inner) = s.strip_prefix("position a ") {
        if let Some((first, second)) = inner.split_once(" alongside a ") {
            s = format!("put a {first} next to a {second}");
        }
    } else if let Some(inner) = s.strip_prefix("place a ") {
        if let Some((first, second)) = inner.split_once(" beside a ") {
            s = format!("put a {first} next to a {second}");
        }
    }

    // Token-level synonym inversion and article normalization.
    let invert = |word: &str| -> String {
        for (original, synonyms) in OBJECT_SYNONYMS {
            if synonyms.contains(&word) {
                return original.to_string();
            }
        }
        for (original, synonyms) in COLOR_SYNONYMS {
            if synonyms.contains(&word) {
                return original.to_string();
            }
        }
        if word == "the" {
            return "a".to_string();
        }
        word.to_string()
    };
    s.split_whitespace()
        .map(invert)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Every substitution token the paraphraser may emit, for closure tests.
#[cfg(test)]
pub(crate) fn substitution_vocabulary() -> Vec<&'static str> {
    let mut vocabulary = Vec::new();
    for (_, synonyms) in OBJECT_SYNONYMS {
        vocabulary.extend(synonyms);
    }
    for (_, synonyms) in COLOR_SYNONYMS {
        vocabulary.extend(synonyms);
    }
    vocabulary
}
