//! Layout generation: room grids, door placement, distractors.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{CellContent, Color, Dir, DoorState, GridState, Object, Shape, Tile};
use crate::seeding;

/// One distractor request: `count` objects of the given shape, each with the
/// fixed color or (when `color` is `None`) a color drawn per instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistractorSpec {
    pub shape: Shape,
    pub color: Option<Color>,
    pub count: u16,
    /// Restrict placement to the given room (room-grid coordinates).
    pub room: Option<(u8, u8)>,
}

/// An explicitly placed door. The tile must lie on an internal wall line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoorPlacement {
    pub tile: Tile,
    pub color: Color,
    pub state: DoorState,
}

/// Door layout policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DoorPlan {
    /// No doors at all (single-room layouts).
    None,
    /// A random spanning tree over the room graph guarantees connectivity;
    /// additional wall segments receive a door with probability `extra_prob`.
    /// Spanning-tree doors are never locked, so every locked door has an
    /// alternative route and its matching key stays reachable.
    Random {
        extra_prob: f64,
        open_frac: f64,
        locked_frac: f64,
    },
    /// Exact placements, used by the scenario presets.
    Explicit(Vec<DoorPlacement>),
}

/// Layout specification. Generation is a pure function of `(spec, seed)`;
/// `layout_seed` is the seed the pipeline uses by default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvSpec {
    pub rooms_x: u8,
    pub rooms_y: u8,
    /// Tiles per room side; the grid is
    /// `rooms_x*(room_size+1)+1` by `rooms_y*(room_size+1)+1`.
    pub room_size: u8,
    pub distractors: Vec<DistractorSpec>,
    pub doors: DoorPlan,
    /// Restrict the agent's start room (scenario presets).
    pub agent_room: Option<(u8, u8)>,
    pub layout_seed: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("room grid {0}x{1} with room size {2} is not a valid layout")]
    BadGeometry(u8, u8, u8),
    #[error("door tile {0} is not on an internal wall segment")]
    BadDoorTile(Tile),
    #[error("distractor count exceeds free cells (placed {placed}, requested {requested})")]
    Capacity { placed: usize, requested: usize },
    #[error("no free cell available for the agent")]
    NoAgentCell,
}

impl EnvSpec {
    pub fn width(&self) -> u8 {
        self.rooms_x * (self.room_size + 1) + 1
    }

    pub fn height(&self) -> u8 {
        self.rooms_y * (self.room_size + 1) + 1
    }

    /// Generates the layout with this spec's own `layout_seed`.
    pub fn generate(&self) -> Result<GridState, GenError> {
        generate_env(self, self.layout_seed)
    }

    /// Multi-room layout in the style of the 22x22, 9-room benchmark grids:
    /// mixed distractor boxes, keys, and balls, doors mostly closed.
    pub fn synth(layout_seed: u64) -> Self {
        EnvSpec {
            rooms_x: 3,
            rooms_y: 3,
            room_size: 6,
            distractors: vec![
                DistractorSpec {
                    shape: Shape::Box,
                    color: None,
                    count: 7,
                    room: None,
                },
                DistractorSpec {
                    shape: Shape::Key,
                    color: None,
                    count: 3,
                    room: None,
                },
                DistractorSpec {
                    shape: Shape::Ball,
                    color: None,
                    count: 8,
                    room: None,
                },
            ],
            doors: DoorPlan::Random {
                extra_prob: 0.25,
                open_frac: 0.1,
                locked_frac: 0.1,
            },
            agent_room: None,
            layout_seed,
        }
    }

    /// A smaller multi-room variant for desk-scale runs.
    pub fn synth_small(layout_seed: u64) -> Self {
        EnvSpec {
            rooms_x: 2,
            rooms_y: 2,
            room_size: 5,
            distractors: vec![
                DistractorSpec {
                    shape: Shape::Box,
                    color: None,
                    count: 3,
                    room: None,
                },
                DistractorSpec {
                    shape: Shape::Key,
                    color: None,
                    count: 2,
                    room: None,
                },
                DistractorSpec {
                    shape: Shape::Ball,
                    color: None,
                    count: 3,
                    room: None,
                },
            ],
            doors: DoorPlan::Random {
                extra_prob: 0.25,
                open_frac: 0.1,
                locked_frac: 0.0,
            },
            agent_room: None,
            layout_seed,
        }
    }

    /// Scenario type A: a single room containing one box, no door.
    pub fn type_a(layout_seed: u64) -> Self {
        EnvSpec {
            rooms_x: 1,
            rooms_y: 1,
            room_size: 6,
            distractors: vec![DistractorSpec {
                shape: Shape::Box,
                color: None,
                count: 1,
                room: None,
            }],
            doors: DoorPlan::None,
            agent_room: None,
            layout_seed,
        }
    }

    /// Scenario type B: two rooms joined by one closed door, no box.
    pub fn type_b(layout_seed: u64) -> Self {
        EnvSpec {
            rooms_x: 2,
            rooms_y: 1,
            room_size: 6,
            distractors: vec![],
            doors: DoorPlan::Random {
                extra_prob: 0.0,
                open_frac: 0.0,
                locked_frac: 0.0,
            },
            agent_room: Some((0, 0)),
            layout_seed,
        }
    }

    /// Scenario type C: the agent starts in the first room, a closed door
    /// leads to a second room containing one box.
    pub fn type_c(layout_seed: u64) -> Self {
        EnvSpec {
            rooms_x: 2,
            rooms_y: 1,
            room_size: 6,
            distractors: vec![DistractorSpec {
                shape: Shape::Box,
                color: None,
                count: 1,
                room: Some((1, 0)),
            }],
            doors: DoorPlan::Random {
                extra_prob: 0.0,
                open_frac: 0.0,
                locked_frac: 0.0,
            },
            agent_room: Some((0, 0)),
            layout_seed,
        }
    }
}

/// Inclusive interior tile range of room `(rx, ry)`.
fn room_tiles(spec: &EnvSpec, rx: u8, ry: u8) -> Vec<Tile> {
    let stride = spec.room_size + 1;
    let c0 = rx * stride + 1;
    let r0 = ry * stride + 1;
    let mut tiles = Vec::new();
    for col in c0..c0 + spec.room_size {
        for row in r0..r0 + spec.room_size {
            tiles.push(Tile::new(col, row));
        }
    }
    tiles
}

/// Internal wall segments: each is the list of candidate door tiles between
/// two adjacent rooms, keyed by the room pair.
fn wall_segments(spec: &EnvSpec) -> Vec<(((u8, u8), (u8, u8)), Vec<Tile>)> {
    let stride = spec.room_size + 1;
    let mut segments = Vec::new();
    for rx in 0..spec.rooms_x {
        for ry in 0..spec.rooms_y {
            if rx + 1 < spec.rooms_x {
                let col = (rx + 1) * stride;
                let tiles = (ry * stride + 1..ry * stride + 1 + spec.room_size)
                    .map(|row| Tile::new(col, row))
                    .collect();
                segments.push((((rx, ry), (rx + 1, ry)), tiles));
            }
            if ry + 1 < spec.rooms_y {
                let row = (ry + 1) * stride;
                let tiles = (rx * stride + 1..rx * stride + 1 + spec.room_size)
                    .map(|col| Tile::new(col, row))
                    .collect();
                segments.push((((rx, ry), (rx, ry + 1)), tiles));
            }
        }
    }
    segments
}

/// Generates a layout. Reproducible: identical `(spec, seed)` gives identical
/// states.
pub fn generate_env(spec: &EnvSpec, seed: u64) -> Result<GridState, GenError> {
    if spec.rooms_x == 0 || spec.rooms_y == 0 || spec.room_size < 2 {
        return Err(GenError::BadGeometry(
            spec.rooms_x,
            spec.rooms_y,
            spec.room_size,
        ));
    }
    let width = spec.width();
    let height = spec.height();
    let stride = spec.room_size + 1;
    let mut cells: BTreeMap<Tile, CellContent> = BTreeMap::new();

    // Interior wall lines between rooms (junction tiles included).
    for k in 1..spec.rooms_x {
        let col = k * stride;
        for row in 1..height - 1 {
            cells.insert(Tile::new(col, row), CellContent::Wall);
        }
    }
    for k in 1..spec.rooms_y {
        let row = k * stride;
        for col in 1..width - 1 {
            cells.insert(Tile::new(col, row), CellContent::Wall);
        }
    }

    let mut rng = seeding::rng(seed);
    let mut locked_colors: Vec<Color> = Vec::new();

    match &spec.doors {
        DoorPlan::None => {}
        DoorPlan::Explicit(placements) => {
            for placement in placements {
                if !matches!(cells.get(&placement.tile), Some(CellContent::Wall)) {
                    return Err(GenError::BadDoorTile(placement.tile));
                }
                cells.insert(
                    placement.tile,
                    CellContent::Door {
                        color: placement.color,
                        state: placement.state,
                    },
                );
                if placement.state == DoorState::Locked {
                    locked_colors.push(placement.color);
                }
            }
        }
        DoorPlan::Random {
            extra_prob,
            open_frac,
            locked_frac,
        } => {
            // Random spanning tree over rooms, then extra doors.
            let mut segments = wall_segments(spec);
            segments.shuffle(&mut rng);
            let room_index =
                |r: (u8, u8)| -> usize { r.1 as usize * spec.rooms_x as usize + r.0 as usize };
            let mut component: Vec<usize> =
                (0..spec.rooms_x as usize * spec.rooms_y as usize).collect();
            fn find(component: &mut Vec<usize>, i: usize) -> usize {
                if component[i] != i {
                    let root = find(component, component[i]);
                    component[i] = root;
                }
                component[i]
            }
            for ((room_a, room_b), tiles) in segments {
                let (a, b) = (room_index(room_a), room_index(room_b));
                let (ra, rb) = (find(&mut component, a), find(&mut component, b));
                let on_tree = ra != rb;
                if on_tree {
                    component[ra] = rb;
                } else if !rng.gen_bool(*extra_prob) {
                    continue;
                }
                let tile = *tiles.choose(&mut rng).expect("room_size >= 2");
                let color = *Color::ALL.choose(&mut rng).expect("non-empty");
                let state = if !on_tree && rng.gen_bool(*locked_frac) {
                    locked_colors.push(color);
                    DoorState::Locked
                } else if rng.gen_bool(*open_frac) {
                    DoorState::Open
                } else {
                    DoorState::Closed
                };
                cells.insert(tile, CellContent::Door { color, state });
            }
        }
    }

    let free_in = |cells: &BTreeMap<Tile, CellContent>, tiles: &[Tile]| -> Vec<Tile> {
        tiles
            .iter()
            .copied()
            .filter(|t| !cells.contains_key(t))
            .collect()
    };
    let all_room_tiles: Vec<Tile> = (0..spec.rooms_x)
        .flat_map(|rx| (0..spec.rooms_y).flat_map(move |ry| room_tiles(spec, rx, ry)))
        .collect();

    // Matching keys for locked doors, placed anywhere free.
    for color in locked_colors {
        let mut free = free_in(&cells, &all_room_tiles);
        if free.is_empty() {
            return Err(GenError::Capacity {
                placed: 0,
                requested: 1,
            });
        }
        free.sort();
        let tile = *free.choose(&mut rng).expect("non-empty");
        cells.insert(
            tile,
            CellContent::Object(Object::new(color, Shape::Key)),
        );
    }

    // Distractors.
    let requested: usize = spec.distractors.iter().map(|d| d.count as usize).sum();
    let mut placed = 0usize;
    for distractor in &spec.distractors {
        let pool: Vec<Tile> = match distractor.room {
            Some((rx, ry)) => room_tiles(spec, rx, ry),
            None => all_room_tiles.clone(),
        };
        for _ in 0..distractor.count {
            let free = free_in(&cells, &pool);
            if free.is_empty() {
                return Err(GenError::Capacity { placed, requested });
            }
            let tile = *free.choose(&mut rng).expect("non-empty");
            let color = distractor
                .color
                .unwrap_or_else(|| *Color::ALL.choose(&mut rng).expect("non-empty"));
            cells.insert(
                tile,
                CellContent::Object(Object::new(color, distractor.shape)),
            );
            placed += 1;
        }
    }

    // Agent pose.
    let agent_pool: Vec<Tile> = match spec.agent_room {
        Some((rx, ry)) => room_tiles(spec, rx, ry),
        None => all_room_tiles,
    };
    let free = free_in(&cells, &agent_pool);
    if free.is_empty() {
        return Err(GenError::NoAgentCell);
    }
    let agent_pos = *free.choose(&mut rng).expect("non-empty");
    let agent_dir = *Dir::ALL.choose(&mut rng).expect("non-empty");

    Ok(GridState::new(width, height, cells, agent_pos, agent_dir, None)
        .expect("generated layout satisfies the state invariants"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synth_spec_yields_a_22x22_grid() {
        let spec = EnvSpec::synth(0);
        assert_eq!((spec.width(), spec.height()), (22, 22));
        let state = spec.generate().unwrap();
        assert_eq!((state.width(), state.height()), (22, 22));
        // 3x3 rooms need at least 8 doors for connectivity.
        assert!(state.doors().count() >= 8);
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = EnvSpec::synth(42);
        assert_eq!(spec.generate().unwrap(), spec.generate().unwrap());
        assert_ne!(
            spec.generate().unwrap(),
            generate_env(&spec, 43).unwrap()
        );
    }

    #[test]
    fn type_c_has_one_closed_door_and_a_box_in_the_second_room() {
        for seed in 0..5 {
            let state = EnvSpec::type_c(seed).generate().unwrap();
            let doors: Vec<_> = state.doors().collect();
            assert_eq!(doors.len(), 1);
            assert_eq!(doors[0].2, DoorState::Closed);
            let boxes: Vec<_> = state
                .objects()
                .filter(|(_, o)| o.shape == Shape::Box)
                .collect();
            assert_eq!(boxes.len(), 1);
            // Box is in the right-hand room, agent in the left one.
            assert!(boxes[0].0.col > 7);
            assert!(state.agent_pos().col < 7);
        }
    }

    #[test]
    fn capacity_error_when_distractors_exceed_free_cells() {
        let mut spec = EnvSpec::type_a(1);
        spec.distractors = vec![DistractorSpec {
            shape: Shape::Ball,
            color: Some(Color::Red),
            count: 200,
            room: None,
        }];
        assert!(matches!(
            spec.generate(),
            Err(GenError::Capacity { .. })
        ));
    }

    #[test]
    fn room_grid_sizes_scale() {
        for (rx, ry) in [(1, 1), (2, 2), (3, 2), (3, 3), (4, 4), (5, 5), (7, 7)] {
            let spec = EnvSpec {
                rooms_x: rx,
                rooms_y: ry,
                room_size: 3,
                distractors: vec![],
                doors: DoorPlan::Random {
                    extra_prob: 0.0,
                    open_frac: 0.0,
                    locked_frac: 0.0,
                },
                agent_room: None,
                layout_seed: 9,
            };
            let state = spec.generate().unwrap();
            assert_eq!(state.width(), rx * 4 + 1);
            assert_eq!(state.height(), ry * 4 + 1);
        }
    }
}
