//! Deterministic BabyAI-style symbolic grid environment.
//!
//! States are immutable values: [`step`] returns a fresh state plus a
//! validity flag and never mutates its input. Coordinates are `(col,row)`
//! with `(0,0)` at the top-left; facing `up` decreases the row. The outer
//! boundary of the grid is always a solid wall ring and is kept implicit:
//! only interior walls are stored and textualized.

mod gen;
mod step;
mod text;

pub use gen::{generate_env, DistractorSpec, DoorPlacement, DoorPlan, EnvSpec, GenError};
pub use step::step;
pub use text::{parse_textualized, state_header, textualize, TextParseError};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A grid coordinate, `(col, row)`, 0-based, rendered as `(col,row)`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct Tile {
    pub col: u8,
    pub row: u8,
}

impl Tile {
    pub fn new(col: u8, row: u8) -> Self {
        Tile { col, row }
    }

    /// Manhattan distance to another tile.
    pub fn manhattan(&self, other: &Tile) -> u16 {
        let dc = (self.col as i16 - other.col as i16).unsigned_abs();
        let dr = (self.row as i16 - other.row as i16).unsigned_abs();
        dc + dr
    }
}

impl fmt::Display for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.col, self.row)
    }
}

/// Object and door colors (closed vocabulary).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    Blue,
    Red,
    Green,
    Yellow,
    Purple,
    Grey,
}

impl Color {
    pub const ALL: [Color; 6] = [
        Color::Blue,
        Color::Red,
        Color::Green,
        Color::Yellow,
        Color::Purple,
        Color::Grey,
    ];

    pub fn word(&self) -> &'static str {
        match self {
            Color::Blue => "blue",
            Color::Red => "red",
            Color::Green => "green",
            Color::Yellow => "yellow",
            Color::Purple => "purple",
            Color::Grey => "grey",
        }
    }

    pub fn from_word(word: &str) -> Option<Color> {
        Color::ALL.iter().copied().find(|c| c.word() == word)
    }
}

/// Movable object shapes (doors are not objects; they live on wall lines).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Box,
    Key,
    Ball,
}

impl Shape {
    pub const ALL: [Shape; 3] = [Shape::Box, Shape::Key, Shape::Ball];

    pub fn word(&self) -> &'static str {
        match self {
            Shape::Box => "box",
            Shape::Key => "key",
            Shape::Ball => "ball",
        }
    }

    pub fn from_word(word: &str) -> Option<Shape> {
        Shape::ALL.iter().copied().find(|s| s.word() == word)
    }
}

/// A movable object: a colored box, key, or ball.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct Object {
    pub shape: Shape,
    pub color: Color,
}

impl Object {
    pub fn new(color: Color, shape: Shape) -> Self {
        Object { shape, color }
    }
}

/// Door state. A locked door toggles open only with a matching-color key in
/// the inventory; the key is not consumed.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum DoorState {
    Open,
    Closed,
    Locked,
}

impl DoorState {
    pub fn word(&self) -> &'static str {
        match self {
            DoorState::Open => "open",
            DoorState::Closed => "closed",
            DoorState::Locked => "locked",
        }
    }
}

/// Content of a single grid cell. Empty cells are not stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CellContent {
    Wall,
    Door { color: Color, state: DoorState },
    Object(Object),
}

/// Agent facing. Turning right cycles up → right → down → left.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Dir {
    Up,
    Right,
    Down,
    Left,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::Up, Dir::Right, Dir::Down, Dir::Left];

    pub fn turn_right(self) -> Self {
        match self {
            Dir::Up => Dir::Right,
            Dir::Right => Dir::Down,
            Dir::Down => Dir::Left,
            Dir::Left => Dir::Up,
        }
    }

    pub fn turn_left(self) -> Self {
        match self {
            Dir::Up => Dir::Left,
            Dir::Left => Dir::Down,
            Dir::Down => Dir::Right,
            Dir::Right => Dir::Up,
        }
    }

    /// `(dcol, drow)` of one forward step.
    pub fn delta(self) -> (i16, i16) {
        match self {
            Dir::Up => (0, -1),
            Dir::Right => (1, 0),
            Dir::Down => (0, 1),
            Dir::Left => (-1, 0),
        }
    }

    pub fn word(&self) -> &'static str {
        match self {
            Dir::Up => "up",
            Dir::Right => "right",
            Dir::Down => "down",
            Dir::Left => "left",
        }
    }

    pub fn from_word(word: &str) -> Option<Dir> {
        Dir::ALL.iter().copied().find(|d| d.word() == word)
    }
}

/// The seven environment actions with stable integer codes.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(into = "u8", try_from = "u8")]
#[repr(u8)]
pub enum Action {
    Left = 0,
    Right = 1,
    Forward = 2,
    Pickup = 3,
    Drop = 4,
    Toggle = 5,
    Done = 6,
}

impl Action {
    pub const ALL: [Action; 7] = [
        Action::Left,
        Action::Right,
        Action::Forward,
        Action::Pickup,
        Action::Drop,
        Action::Toggle,
        Action::Done,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }
}

impl From<Action> for u8 {
    fn from(a: Action) -> u8 {
        a as u8
    }
}

impl TryFrom<u8> for Action {
    type Error = StateError;

    fn try_from(code: u8) -> Result<Self, Self::Error> {
        Action::ALL
            .get(code as usize)
            .copied()
            .ok_or(StateError::BadActionCode(code))
    }
}

/// Structural errors raised when a state violates its invariants.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum StateError {
    #[error("grid must be at least 3x3, got {0}x{1}")]
    GridTooSmall(u8, u8),
    #[error("cell {0} is outside the grid interior")]
    CellOutOfBounds(Tile),
    #[error("agent at {0} stands on a non-walkable cell")]
    AgentOnBlockedCell(Tile),
    #[error("invalid action code {0} (expected 0..=6)")]
    BadActionCode(u8),
}

/// Full symbolic observation: grid contents, agent pose, and inventory.
///
/// The outer boundary ring is an implicit wall; `cells` holds only interior
/// content. The single inventory slot matches the pickup/drop semantics.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridState {
    width: u8,
    height: u8,
    cells: BTreeMap<Tile, CellContent>,
    agent_pos: Tile,
    agent_dir: Dir,
    inventory: Option<Object>,
}

impl GridState {
    pub fn new(
        width: u8,
        height: u8,
        cells: BTreeMap<Tile, CellContent>,
        agent_pos: Tile,
        agent_dir: Dir,
        inventory: Option<Object>,
    ) -> Result<Self, StateError> {
        let state = GridState {
            width,
            height,
            cells,
            agent_pos,
            agent_dir,
            inventory,
        };
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<(), StateError> {
        if self.width < 3 || self.height < 3 {
            return Err(StateError::GridTooSmall(self.width, self.height));
        }
        for tile in self.cells.keys() {
            if !self.in_interior(*tile) {
                return Err(StateError::CellOutOfBounds(*tile));
            }
        }
        if !self.is_walkable(self.agent_pos) {
            return Err(StateError::AgentOnBlockedCell(self.agent_pos));
        }
        Ok(())
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn height(&self) -> u8 {
        self.height
    }

    pub fn agent_pos(&self) -> Tile {
        self.agent_pos
    }

    pub fn agent_dir(&self) -> Dir {
        self.agent_dir
    }

    pub fn inventory(&self) -> Option<Object> {
        self.inventory
    }

    /// Interior cells with content, in canonical `(col,row)` order.
    pub fn cells(&self) -> &BTreeMap<Tile, CellContent> {
        &self.cells
    }

    pub fn content_at(&self, tile: Tile) -> Option<&CellContent> {
        self.cells.get(&tile)
    }

    pub fn object_at(&self, tile: Tile) -> Option<Object> {
        match self.cells.get(&tile) {
            Some(CellContent::Object(o)) => Some(*o),
            _ => None,
        }
    }

    pub fn door_at(&self, tile: Tile) -> Option<(Color, DoorState)> {
        match self.cells.get(&tile) {
            Some(CellContent::Door { color, state }) => Some((*color, *state)),
            _ => None,
        }
    }

    /// True for tiles strictly inside the boundary ring.
    pub fn in_interior(&self, tile: Tile) -> bool {
        tile.col >= 1
            && tile.row >= 1
            && tile.col + 1 < self.width
            && tile.row + 1 < self.height
    }

    /// True if the tile is a wall: outside the interior or a stored wall cell.
    pub fn is_wall(&self, tile: Tile) -> bool {
        !self.in_interior(tile) || matches!(self.cells.get(&tile), Some(CellContent::Wall))
    }

    /// True if the agent may stand on the tile (empty floor or open door).
    pub fn is_walkable(&self, tile: Tile) -> bool {
        if !self.in_interior(tile) {
            return false;
        }
        match self.cells.get(&tile) {
            None => true,
            Some(CellContent::Door {
                state: DoorState::Open,
                ..
            }) => true,
            Some(_) => false,
        }
    }

    /// True if the tile is empty floor (drop target).
    pub fn is_empty_floor(&self, tile: Tile) -> bool {
        self.in_interior(tile) && !self.cells.contains_key(&tile)
    }

    /// The tile directly in front of the agent, if it exists on the grid.
    pub fn facing_tile(&self) -> Option<Tile> {
        let (dc, dr) = self.agent_dir.delta();
        let col = self.agent_pos.col as i16 + dc;
        let row = self.agent_pos.row as i16 + dr;
        if col < 0 || row < 0 || col >= self.width as i16 || row >= self.height as i16 {
            None
        } else {
            Some(Tile::new(col as u8, row as u8))
        }
    }

    /// All objects on the grid, in canonical tile order.
    pub fn objects(&self) -> impl Iterator<Item = (Tile, Object)> + '_ {
        self.cells.iter().filter_map(|(t, c)| match c {
            CellContent::Object(o) => Some((*t, *o)),
            _ => None,
        })
    }

    /// All doors on the grid, in canonical tile order.
    pub fn doors(&self) -> impl Iterator<Item = (Tile, Color, DoorState)> + '_ {
        self.cells.iter().filter_map(|(t, c)| match c {
            CellContent::Door { color, state } => Some((*t, *color, *state)),
            _ => None,
        })
    }

    /// Interior wall tiles, in canonical order.
    pub fn walls(&self) -> impl Iterator<Item = Tile> + '_ {
        self.cells.iter().filter_map(|(t, c)| match c {
            CellContent::Wall => Some(*t),
            _ => None,
        })
    }

    /// Multiset of all objects on the grid plus the inventory, sorted.
    /// Pickup/drop move exactly one object between the two; everything else
    /// leaves this list unchanged.
    pub fn object_multiset(&self) -> Vec<Object> {
        let mut all: Vec<Object> = self.objects().map(|(_, o)| o).collect();
        if let Some(o) = self.inventory {
            all.push(o);
        }
        all.sort();
        all
    }

    /// Columns and rows that form full interior wall lines (room separators),
    /// treating door tiles as part of the line. Pure function of the state.
    pub fn wall_lines(&self) -> (Vec<u8>, Vec<u8>) {
        let is_line_cell = |t: Tile| {
            matches!(
                self.cells.get(&t),
                Some(CellContent::Wall) | Some(CellContent::Door { .. })
            )
        };
        let cols = (1..self.width - 1)
            .filter(|&c| (1..self.height - 1).all(|r| is_line_cell(Tile::new(c, r))))
            .collect();
        let rows = (1..self.height - 1)
            .filter(|&r| (1..self.width - 1).all(|c| is_line_cell(Tile::new(c, r))))
            .collect();
        (cols, rows)
    }

    /// Bounding rectangle (inclusive, wall ring included) of the room
    /// containing `tile`, or `None` when `tile` lies on a wall line.
    pub fn room_rect(&self, tile: Tile) -> Option<(Tile, Tile)> {
        let (cols, rows) = self.wall_lines();
        if cols.contains(&tile.col) || rows.contains(&tile.row) {
            return None;
        }
        let left = cols
            .iter()
            .copied()
            .filter(|&c| c < tile.col)
            .max()
            .unwrap_or(0);
        let right = cols
            .iter()
            .copied()
            .filter(|&c| c > tile.col)
            .min()
            .unwrap_or(self.width - 1);
        let top = rows
            .iter()
            .copied()
            .filter(|&r| r < tile.row)
            .max()
            .unwrap_or(0);
        let bottom = rows
            .iter()
            .copied()
            .filter(|&r| r > tile.row)
            .min()
            .unwrap_or(self.height - 1);
        Some((Tile::new(left, top), Tile::new(right, bottom)))
    }

    pub(crate) fn cells_mut(&mut self) -> &mut BTreeMap<Tile, CellContent> {
        &mut self.cells
    }

    pub(crate) fn set_agent(&mut self, pos: Tile, dir: Dir) {
        self.agent_pos = pos;
        self.agent_dir = dir;
    }

    pub(crate) fn set_inventory(&mut self, inv: Option<Object>) {
        self.inventory = inv;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn empty_room(size: u8) -> GridState {
        GridState::new(
            size,
            size,
            BTreeMap::new(),
            Tile::new(1, 1),
            Dir::Up,
            None,
        )
        .unwrap()
    }

    #[test]
    fn boundary_ring_is_implicit_wall() {
        let s = empty_room(5);
        assert!(s.is_wall(Tile::new(0, 0)));
        assert!(s.is_wall(Tile::new(4, 2)));
        assert!(!s.is_wall(Tile::new(2, 2)));
        assert!(s.is_walkable(Tile::new(3, 3)));
        assert!(!s.is_walkable(Tile::new(0, 3)));
    }

    #[test]
    fn agent_cannot_start_on_a_wall() {
        let err = GridState::new(
            5,
            5,
            BTreeMap::new(),
            Tile::new(0, 1),
            Dir::Up,
            None,
        )
        .unwrap_err();
        assert_eq!(err, StateError::AgentOnBlockedCell(Tile::new(0, 1)));
    }

    #[test]
    fn wall_lines_detect_room_separators() {
        // 7x5: wall column at col 3 with a door at (3,2).
        let mut cells = BTreeMap::new();
        cells.insert(Tile::new(3, 1), CellContent::Wall);
        cells.insert(
            Tile::new(3, 2),
            CellContent::Door {
                color: Color::Red,
                state: DoorState::Closed,
            },
        );
        cells.insert(Tile::new(3, 3), CellContent::Wall);
        let s = GridState::new(7, 5, cells, Tile::new(1, 1), Dir::Up, None).unwrap();
        assert_eq!(s.wall_lines(), (vec![3], vec![]));
        assert_eq!(
            s.room_rect(Tile::new(1, 1)),
            Some((Tile::new(0, 0), Tile::new(3, 4)))
        );
        assert_eq!(
            s.room_rect(Tile::new(5, 2)),
            Some((Tile::new(3, 0), Tile::new(6, 4)))
        );
        assert_eq!(s.room_rect(Tile::new(3, 2)), None);
    }
}
