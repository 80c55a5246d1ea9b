//! Textualization of grid states and the exact inverse parser.
//!
//! The format is a numbered feature list: interior wall tiles first, then
//! boxes, doors, keys, and balls (each group in `(col,row)` order), then the
//! inventory, agent tile, and agent facing. The grid dimensions are not part
//! of the text; prompts carry them in a separate header line, so the parser
//! takes them as arguments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{CellContent, Color, Dir, DoorState, GridState, Object, Shape, Tile};

/// Header line used when embedding a state into a prompt.
pub fn state_header(state: &GridState) -> String {
    format!(
        "It is a {} by {} tiles grid. The features of the environment are:",
        state.width(),
        state.height()
    )
}

fn object_phrase(object: &Object) -> String {
    match object.shape {
        // Boxes carry a fixed "open" state word in the textual format.
        Shape::Box => format!("open {} box", object.color.word()),
        Shape::Key => format!("{} key", object.color.word()),
        Shape::Ball => format!("{} ball", object.color.word()),
    }
}

/// Renders the numbered-feature text of a state.
pub fn textualize(state: &GridState) -> String {
    let mut features: Vec<String> = Vec::new();

    let mut wall_line = String::from("The following tiles are wall:");
    for tile in state.walls() {
        let _ = write!(wall_line, " {tile}");
    }
    features.push(wall_line);

    for shape in [Shape::Box, Shape::Key, Shape::Ball] {
        // Doors are listed between boxes and keys.
        if shape == Shape::Key {
            for (tile, color, door_state) in state.doors() {
                features.push(format!(
                    "A {} {} door is on tile {}",
                    door_state.word(),
                    color.word(),
                    tile
                ));
            }
        }
        for (tile, object) in state.objects().filter(|(_, o)| o.shape == shape) {
            features.push(format!("A {} is on tile {}", object_phrase(&object), tile));
        }
    }

    match state.inventory() {
        None => features.push("Inventory : []".to_string()),
        Some(object) => features.push(format!("Inventory : [a {}]", object_phrase(&object))),
    }
    features.push(format!(
        "The agent is currently at the following tile: {}",
        state.agent_pos()
    ));
    features.push(format!("The agent is facing {}", state.agent_dir().word()));

    let mut out = String::new();
    for (i, feature) in features.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = write!(out, "{i}. {feature}");
    }
    out
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TextParseError {
    #[error("line {0}: expected numbered feature, got {1:?}")]
    BadLine(usize, String),
    #[error("line {0}: bad tile coordinate in {1:?}")]
    BadTile(usize, String),
    #[error("missing feature line: {0}")]
    Missing(&'static str),
    #[error("duplicate content on tile {0}")]
    DuplicateTile(Tile),
    #[error("state invariant violated: {0}")]
    Invalid(#[from] super::StateError),
}

fn parse_tiles(s: &str, line_no: usize) -> Result<Vec<Tile>, TextParseError> {
    let mut tiles = Vec::new();
    for token in s.split_whitespace() {
        let inner = token
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| TextParseError::BadTile(line_no, token.to_string()))?;
        let (c, r) = inner
            .split_once(',')
            .ok_or_else(|| TextParseError::BadTile(line_no, token.to_string()))?;
        let col = c
            .parse::<u8>()
            .map_err(|_| TextParseError::BadTile(line_no, token.to_string()))?;
        let row = r
            .parse::<u8>()
            .map_err(|_| TextParseError::BadTile(line_no, token.to_string()))?;
        tiles.push(Tile::new(col, row));
    }
    Ok(tiles)
}

fn parse_object_phrase(phrase: &str) -> Option<Object> {
    let words: Vec<&str> = phrase.split_whitespace().collect();
    match words.as_slice() {
        // "open red box" / "closed red box": the state word is fixed cosmetics.
        [state, color, "box"] if *state == "open" || *state == "closed" => {
            Some(Object::new(Color::from_word(color)?, Shape::Box))
        }
        [color, shape] => Some(Object::new(
            Color::from_word(color)?,
            Shape::from_word(shape)?,
        )),
        _ => None,
    }
}

/// Parses the numbered-feature text back into a state. Exact inverse of
/// [`textualize`] on all valid states with the same dimensions.
pub fn parse_textualized(
    text: &str,
    width: u8,
    height: u8,
) -> Result<GridState, TextParseError> {
    let mut cells: BTreeMap<Tile, CellContent> = BTreeMap::new();
    let mut inventory: Option<Option<Object>> = None;
    let mut agent_pos: Option<Tile> = None;
    let mut agent_dir: Option<Dir> = None;

    let mut insert = |tile: Tile, content: CellContent| -> Result<(), TextParseError> {
        if cells.insert(tile, content).is_some() {
            return Err(TextParseError::DuplicateTile(tile));
        }
        Ok(())
    };

    for (line_no, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim_end();
        if line.is_empty() {
            continue;
        }
        let body = match line.split_once(". ") {
            Some((n, rest)) if n.trim().parse::<usize>().is_ok() => rest,
            _ => {
                // Tolerate the bare wall line with no trailing list.
                match line.split_once('.') {
                    Some((n, rest)) if n.trim().parse::<usize>().is_ok() => rest.trim_start(),
                    _ => return Err(TextParseError::BadLine(line_no, line.to_string())),
                }
            }
        };

        if let Some(rest) = body.strip_prefix("The following tiles are wall:") {
            for tile in parse_tiles(rest, line_no)? {
                insert(tile, CellContent::Wall)?;
            }
        } else if let Some(rest) = body.strip_prefix("Inventory : ") {
            let inner = rest
                .trim()
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| TextParseError::BadLine(line_no, line.to_string()))?;
            if inner.is_empty() {
                inventory = Some(None);
            } else {
                let phrase = inner.strip_prefix("a ").unwrap_or(inner);
                let object = parse_object_phrase(phrase)
                    .ok_or_else(|| TextParseError::BadLine(line_no, line.to_string()))?;
                inventory = Some(Some(object));
            }
        } else if let Some(rest) =
            body.strip_prefix("The agent is currently at the following tile: ")
        {
            agent_pos = parse_tiles(rest, line_no)?.first().copied();
        } else if let Some(rest) = body.strip_prefix("The agent is facing ") {
            agent_dir = Dir::from_word(rest.trim());
            if agent_dir.is_none() {
                return Err(TextParseError::BadLine(line_no, line.to_string()));
            }
        } else if let Some(rest) = body.strip_prefix("A ") {
            let (phrase, tile_part) = rest
                .split_once(" is on tile ")
                .ok_or_else(|| TextParseError::BadLine(line_no, line.to_string()))?;
            let tile = parse_tiles(tile_part, line_no)?
                .first()
                .copied()
                .ok_or_else(|| TextParseError::BadTile(line_no, tile_part.to_string()))?;
            if let Some(door_phrase) = phrase.strip_suffix(" door") {
                let (state_word, color_word) = door_phrase
                    .split_once(' ')
                    .ok_or_else(|| TextParseError::BadLine(line_no, line.to_string()))?;
                let door_state = match state_word {
                    "open" => DoorState::Open,
                    "closed" => DoorState::Closed,
                    "locked" => DoorState::Locked,
                    _ => return Err(TextParseError::BadLine(line_no, line.to_string())),
                };
                let color = Color::from_word(color_word)
                    .ok_or_else(|| TextParseError::BadLine(line_no, line.to_string()))?;
                insert(
                    tile,
                    CellContent::Door {
                        color,
                        state: door_state,
                    },
                )?;
            } else {
                let object = parse_object_phrase(phrase)
                    .ok_or_else(|| TextParseError::BadLine(line_no, line.to_string()))?;
                insert(tile, CellContent::Object(object))?;
            }
        } else {
            return Err(TextParseError::BadLine(line_no, line.to_string()));
        }
    }

    let inventory = inventory.ok_or(TextParseError::Missing("Inventory"))?;
    let agent_pos = agent_pos.ok_or(TextParseError::Missing("agent tile"))?;
    let agent_dir = agent_dir.ok_or(TextParseError::Missing("agent facing"))?;
    Ok(GridState::new(
        width, height, cells, agent_pos, agent_dir, inventory,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Dir, GridState};
    use std::collections::BTreeMap;

    #[test]
    fn renders_the_documented_feature_lines() {
        let mut cells = BTreeMap::new();
        cells.insert(
            Tile::new(5, 3),
            CellContent::Object(Object::new(Color::Grey, Shape::Key)),
        );
        cells.insert(
            Tile::new(2, 1),
            CellContent::Door {
                color: Color::Blue,
                state: DoorState::Closed,
            },
        );
        cells.insert(Tile::new(3, 3), CellContent::Wall);
        let s = GridState::new(8, 8, cells, Tile::new(1, 1), Dir::Up, None).unwrap();
        let text = textualize(&s);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "0. The following tiles are wall: (3,3)");
        assert_eq!(lines[1], "1. A closed blue door is on tile (2,1)");
        assert_eq!(lines[2], "2. A grey key is on tile (5,3)");
        assert_eq!(lines[3], "3. Inventory : []");
        assert_eq!(
            lines[4],
            "4. The agent is currently at the following tile: (1,1)"
        );
        assert_eq!(lines[5], "5. The agent is facing up");
    }

    #[test]
    fn empty_single_room_has_bare_wall_line() {
        let s = GridState::new(8, 8, BTreeMap::new(), Tile::new(1, 1), Dir::Up, None).unwrap();
        let text = textualize(&s);
        assert!(text.starts_with("0. The following tiles are wall:\n"));
        assert!(text.contains("Inventory : []"));
        let parsed = parse_textualized(&text, 8, 8).unwrap();
        assert_eq!(parsed, s);
    }

    #[test]
    fn boxes_render_with_open_prefix_and_round_trip() {
        let mut cells = BTreeMap::new();
        cells.insert(
            Tile::new(4, 2),
            CellContent::Object(Object::new(Color::Purple, Shape::Box)),
        );
        let s = GridState::new(
            8,
            8,
            cells,
            Tile::new(2, 2),
            Dir::Left,
            Some(Object::new(Color::Red, Shape::Ball)),
        )
        .unwrap();
        let text = textualize(&s);
        assert!(text.contains("A open purple box is on tile (4,2)"));
        assert!(text.contains("Inventory : [a red ball]"));
        assert_eq!(parse_textualized(&text, 8, 8).unwrap(), s);
    }

    #[test]
    fn header_carries_dimensions() {
        let s = GridState::new(22, 22, BTreeMap::new(), Tile::new(1, 1), Dir::Up, None)
            .unwrap();
        assert_eq!(
            state_header(&s),
            "It is a 22 by 22 tiles grid. The features of the environment are:"
        );
    }
}
