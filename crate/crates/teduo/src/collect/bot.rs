//! Goal-oriented data-collection bot.
//!
//! A uniform-cost search over `(position, direction)` nodes of the
//! deterministic simulator plans the next subtask: navigate to the target
//! (toggling doors, fetching keys for locked ones), then execute the final
//! verb. The bot replans from scratch at every step, so multi-phase tasks
//! (drop held item, pick up key, cross door, pick up target) emerge from
//! repeated one-phase plans.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use crate::goals::{is_goal_state, Goal, GoalKind, ObjectSpec, TargetKind};
use crate::grid::{Action, Color, Dir, DoorState, GridState, Shape, Tile};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BotError {
    #[error("no plan exists for the goal in this layout")]
    Unreachable,
}

/// A goal-seeking planner policy over the deterministic simulator.
#[derive(Debug, Clone)]
pub struct Bot {
    goal: Goal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NavTarget {
    /// Stand on any of the tiles (any facing).
    StandOn,
    /// Stand next to a tile, facing it.
    Face,
}

impl Bot {
    pub fn new(goal: Goal) -> Self {
        Bot { goal }
    }

    pub fn goal(&self) -> &Goal {
        &self.goal
    }

    /// The next action along the freshly recomputed shortest plan.
    pub fn act(&self, state: &GridState) -> Result<Action, BotError> {
        Ok(self.plan(state)?[0])
    }

    /// Plans the current subtask. Emits `[Done]` when the goal is already
    /// achieved.
    pub fn plan(&self, state: &GridState) -> Result<Vec<Action>, BotError> {
        if is_goal_state(state, &self.goal) {
            return Ok(vec![Action::Done]);
        }
        match &self.goal.kind {
            GoalKind::GoToTile { tile } => {
                navigate(state, &BTreeSet::from([*tile]), NavTarget::StandOn)
                    .ok_or(BotError::Unreachable)
            }
            GoalKind::GoToObject { color, target } => {
                let tiles = target_tiles(state, color, target);
                if tiles.is_empty() {
                    return Err(BotError::Unreachable);
                }
                let mut stand: BTreeSet<Tile> = BTreeSet::new();
                for tile in &tiles {
                    if state.is_walkable(*tile) {
                        stand.insert(*tile);
                    }
                    for neighbor in neighbors(state, *tile) {
                        stand.insert(neighbor);
                    }
                }
                navigate(state, &stand, NavTarget::StandOn).ok_or(BotError::Unreachable)
            }
            GoalKind::PickUp { color, shape } => self.plan_pickup(
                state,
                &ObjectSpec {
                    color: *color,
                    shape: *shape,
                },
            ),
            GoalKind::OpenDoor { color } => {
                let doors: BTreeSet<Tile> = state
                    .doors()
                    .filter(|(_, c, s)| {
                        color.map_or(true, |want| want == *c) && *s != DoorState::Open
                    })
                    .map(|(t, _, _)| t)
                    .collect();
                if doors.is_empty() {
                    return Err(BotError::Unreachable);
                }
                // Prefer a door we can toggle outright; otherwise fetch the
                // key for a locked one.
                if let Some(mut plan) = navigate_toggleable(state, &doors) {
                    plan.push(Action::Toggle);
                    return Ok(plan);
                }
                self.fetch_key_for_locked(state, &doors)
            }
            GoalKind::PutNext { moved, anchor } => self.plan_put_next(state, moved, anchor),
        }
    }

    fn plan_pickup(&self, state: &GridState, spec: &ObjectSpec) -> Result<Vec<Action>, BotError> {
        let targets: BTreeSet<Tile> = state
            .objects()
            .filter(|(_, o)| spec.matches(o))
            .map(|(t, _)| t)
            .collect();
        if targets.is_empty() {
            return Err(BotError::Unreachable);
        }
        // Already facing a target?
        if let Some(facing) = state.facing_tile() {
            if targets.contains(&facing) {
                return match state.inventory() {
                    None => Ok(vec![Action::Pickup]),
                    // Hands full: put the held item down next to us first.
                    Some(_) => drop_held(state, Some(facing)).ok_or(BotError::Unreachable),
                };
            }
        }
        match navigate(state, &targets, NavTarget::Face) {
            Some(plan) => Ok(plan),
            None => self.unlock_towards(state, &targets),
        }
    }

    fn plan_put_next(
        &self,
        state: &GridState,
        moved: &ObjectSpec,
        anchor: &ObjectSpec,
    ) -> Result<Vec<Action>, BotError> {
        let holding_moved = state.inventory().is_some_and(|o| moved.matches(&o));
        let anchor_tiles: BTreeSet<Tile> = state
            .objects()
            .filter(|(_, o)| anchor.matches(o))
            .map(|(t, _)| t)
            .collect();
        if holding_moved {
            if anchor_tiles.is_empty() {
                return Err(BotError::Unreachable);
            }
            // Face an empty floor tile adjacent to an anchor and drop.
            let spots: BTreeSet<Tile> = anchor_tiles
                .iter()
                .flat_map(|t| neighbors(state, *t))
                .filter(|t| state.is_empty_floor(*t))
                .collect();
            if let Some(facing) = state.facing_tile() {
                if spots.contains(&facing) {
                    return Ok(vec![Action::Drop]);
                }
            }
            return match navigate(state, &spots, NavTarget::Face) {
                Some(mut plan) => {
                    plan.push(Action::Drop);
                    Ok(plan)
                }
                None => self.unlock_towards(state, &spots),
            };
        }
        if state.inventory().is_some() && anchor_tiles.is_empty() {
            // The only anchor instance is in our hands; free it first.
            return drop_held(state, None).ok_or(BotError::Unreachable);
        }
        self.plan_pickup(state, moved)
    }

    /// Fallback when a target is unreachable: fetch the key of some locked
    /// door so the next replanning round sees more of the grid.
    fn unlock_towards(
        &self,
        state: &GridState,
        _targets: &BTreeSet<Tile>,
    ) -> Result<Vec<Action>, BotError> {
        let locked: BTreeSet<Tile> = state
            .doors()
            .filter(|(_, _, s)| *s == DoorState::Locked)
            .map(|(t, _, _)| t)
            .collect();
        if locked.is_empty() {
            return Err(BotError::Unreachable);
        }
        self.fetch_key_for_locked(state, &locked)
    }

    fn fetch_key_for_locked(
        &self,
        state: &GridState,
        doors: &BTreeSet<Tile>,
    ) -> Result<Vec<Action>, BotError> {
        let colors: BTreeSet<Color> = doors
            .iter()
            .filter_map(|t| state.door_at(*t))
            .filter(|(_, s)| *s == DoorState::Locked)
            .map(|(c, _)| c)
            .collect();
        for color in colors {
            let key = ObjectSpec {
                color: Some(color),
                shape: Shape::Key,
            };
            if state.inventory().is_some_and(|o| key.matches(&o)) {
                // Key in hand: walk to the door and toggle.
                let matching: BTreeSet<Tile> = doors
                    .iter()
                    .copied()
                    .filter(|t| {
                        state.door_at(*t).is_some_and(|(c, s)| {
                            c == color && s == DoorState::Locked
                        })
                    })
                    .collect();
                if let Some(mut plan) = navigate(state, &matching, NavTarget::Face) {
                    plan.push(Action::Toggle);
                    return Ok(plan);
                }
                continue;
            }
            if state.inventory().is_some() {
                if let Some(plan) = drop_held(state, None) {
                    return Ok(plan);
                }
                continue;
            }
            let keys: BTreeSet<Tile> = state
                .objects()
                .filter(|(_, o)| key.matches(o))
                .map(|(t, _)| t)
                .collect();
            if keys.is_empty() {
                continue;
            }
            if let Some(facing) = state.facing_tile() {
                if keys.contains(&facing) {
                    return Ok(vec![Action::Pickup]);
                }
            }
            if let Some(plan) = navigate(state, &keys, NavTarget::Face) {
                return Ok(plan);
            }
        }
        Err(BotError::Unreachable)
    }
}

/// Plan to free the inventory: face the nearest empty floor tile (avoiding
/// `keep_facing`, the tile we eventually want to face) and drop.
fn drop_held(state: &GridState, avoid: Option<Tile>) -> Option<Vec<Action>> {
    let spots: BTreeSet<Tile> = (1..state.width() - 1)
        .flat_map(|col| (1..state.height() - 1).map(move |row| Tile::new(col, row)))
        .filter(|t| state.is_empty_floor(*t) && Some(*t) != avoid)
        .collect();
    let mut plan = navigate(state, &spots, NavTarget::Face)?;
    plan.push(Action::Drop);
    Some(plan)
}

/// Walkable orthogonal neighbors of a tile.
fn neighbors(state: &GridState, tile: Tile) -> Vec<Tile> {
    let mut out = Vec::new();
    for (dc, dr) in [(0i16, -1i16), (1, 0), (0, 1), (-1, 0)] {
        let col = tile.col as i16 + dc;
        let row = tile.row as i16 + dr;
        if col < 0 || row < 0 || col >= state.width() as i16 || row >= state.height() as i16 {
            continue;
        }
        let t = Tile::new(col as u8, row as u8);
        if state.is_walkable(t) {
            out.push(t);
        }
    }
    out
}

fn target_tiles(state: &GridState, color: &Option<Color>, target: &TargetKind) -> Vec<Tile> {
    match target.as_shape() {
        Some(shape) => {
            let spec = ObjectSpec {
                color: *color,
                shape,
            };
            state
                .objects()
                .filter(|(_, o)| spec.matches(o))
                .map(|(t, _)| t)
                .collect()
        }
        None => state
            .doors()
            .filter(|(_, c, _)| color.map_or(true, |want| want == *c))
            .map(|(t, _, _)| t)
            .collect(),
    }
}

/// Action cost of traversing into `tile`, with the actions to emit, given the
/// current inventory. `None` when blocked.
fn enter_cost(state: &GridState, tile: Tile) -> Option<(u32, &'static [Action])> {
    const FORWARD: &[Action] = &[Action::Forward];
    const TOGGLE_FORWARD: &[Action] = &[Action::Toggle, Action::Forward];
    if state.is_walkable(tile) {
        return Some((1, FORWARD));
    }
    match state.door_at(tile) {
        Some((_, DoorState::Closed)) => Some((2, TOGGLE_FORWARD)),
        Some((color, DoorState::Locked)) => {
            let has_key = state
                .inventory()
                .is_some_and(|o| o.shape == Shape::Key && o.color == color);
            has_key.then_some((2, TOGGLE_FORWARD))
        }
        _ => None,
    }
}

/// Uniform-cost search over `(tile, dir)`. Returns the cheapest action
/// sequence reaching a target node, deterministic under ties.
fn navigate(state: &GridState, targets: &BTreeSet<Tile>, mode: NavTarget) -> Option<Vec<Action>> {
    if targets.is_empty() {
        return None;
    }
    let start = (state.agent_pos(), state.agent_dir());
    let hit = |pos: Tile, dir: Dir| -> bool {
        match mode {
            NavTarget::StandOn => targets.contains(&pos),
            NavTarget::Face => {
                let (dc, dr) = dir.delta();
                let col = pos.col as i16 + dc;
                let row = pos.row as i16 + dr;
                col >= 0
                    && row >= 0
                    && targets.contains(&Tile::new(col as u8, row as u8))
            }
        }
    };

    let mut best: HashMap<(Tile, Dir), u32> = HashMap::new();
    let mut parent: HashMap<(Tile, Dir), ((Tile, Dir), &'static [Action])> = HashMap::new();
    let mut heap: BinaryHeap<Reverse<(u32, Tile, Dir)>> = BinaryHeap::new();
    best.insert(start, 0);
    heap.push(Reverse((0, start.0, start.1)));

    while let Some(Reverse((cost, pos, dir))) = heap.pop() {
        if best.get(&(pos, dir)).copied() != Some(cost) {
            continue;
        }
        if hit(pos, dir) {
            let mut actions: Vec<&'static [Action]> = Vec::new();
            let mut node = (pos, dir);
            while node != start {
                let (prev, edge) = parent[&node];
                actions.push(edge);
                node = prev;
            }
            return Some(actions.into_iter().rev().flatten().copied().collect());
        }
        const TURNS: [(Action, &[Action]); 2] = [
            (Action::Left, &[Action::Left]),
            (Action::Right, &[Action::Right]),
        ];
        for (turn, edge) in TURNS {
            let new_dir = match turn {
                Action::Left => dir.turn_left(),
                _ => dir.turn_right(),
            };
            relax(&mut best, &mut parent, &mut heap, (pos, dir), (pos, new_dir), 1, edge, cost);
        }
        let (dc, dr) = dir.delta();
        let col = pos.col as i16 + dc;
        let row = pos.row as i16 + dr;
        if col >= 0 && row >= 0 && col < state.width() as i16 && row < state.height() as i16 {
            let ahead = Tile::new(col as u8, row as u8);
            if let Some((edge_cost, edge)) = enter_cost(state, ahead) {
                relax(
                    &mut best,
                    &mut parent,
                    &mut heap,
                    (pos, dir),
                    (ahead, dir),
                    edge_cost,
                    edge,
                    cost,
                );
            }
        }
    }
    None
}

/// Like [`navigate`] with `Face` targets, but also accepts locked doors we
/// cannot unlock (used to rank candidate doors before key fetching).
fn navigate_toggleable(state: &GridState, doors: &BTreeSet<Tile>) -> Option<Vec<Action>> {
    let unlockable: BTreeSet<Tile> = doors
        .iter()
        .copied()
        .filter(|t| match state.door_at(*t) {
            Some((_, DoorState::Closed)) => true,
            Some((color, DoorState::Locked)) => state
                .inventory()
                .is_some_and(|o| o.shape == Shape::Key && o.color == color),
            _ => false,
        })
        .collect();
    navigate(state, &unlockable, NavTarget::Face)
}

#[allow(clippy::too_many_arguments)]
fn relax(
    best: &mut HashMap<(Tile, Dir), u32>,
    parent: &mut HashMap<(Tile, Dir), ((Tile, Dir), &'static [Action])>,
    heap: &mut BinaryHeap<Reverse<(u32, Tile, Dir)>>,
    from: (Tile, Dir),
    to: (Tile, Dir),
    edge_cost: u32,
    edge: &'static [Action],
    cost: u32,
) {
    let new_cost = cost + edge_cost;
    if best.get(&to).map_or(true, |&c| new_cost < c) {
        best.insert(to, new_cost);
        parent.insert(to, (from, edge));
        heap.push(Reverse((new_cost, to.0, to.1)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{step, CellContent, EnvSpec, Object};
    use std::collections::BTreeMap;

    fn run_bot(bot: &Bot, mut state: GridState, cap: usize) -> (GridState, usize) {
        for t in 0..cap {
            if is_goal_state(&state, bot.goal()) {
                return (state, t);
            }
            let action = bot.act(&state).expect("plan exists");
            if action == Action::Done {
                return (state, t);
            }
            let (next, valid) = step(&state, action);
            assert!(valid, "bot emitted an invalid action {action:?}");
            state = next;
        }
        (state, cap)
    }

    #[test]
    fn plan_length_matches_turn_plus_move_distance() {
        // Agent at (1,1) facing up; target (4,1): one turn right + 3 forward.
        let state =
            GridState::new(8, 8, BTreeMap::new(), Tile::new(1, 1), Dir::Up, None).unwrap();
        let goal = Goal::new(GoalKind::GoToTile {
            tile: Tile::new(4, 1),
        });
        let plan = Bot::new(goal).plan(&state).unwrap();
        assert_eq!(plan.len(), 4);
        assert_eq!(plan[0], Action::Right);
        assert!(plan[1..].iter().all(|a| *a == Action::Forward));
    }

    #[test]
    fn already_achieved_emits_done() {
        let state =
            GridState::new(8, 8, BTreeMap::new(), Tile::new(3, 3), Dir::Up, None).unwrap();
        let goal = Goal::new(GoalKind::GoToTile {
            tile: Tile::new(3, 3),
        });
        assert_eq!(Bot::new(goal).plan(&state).unwrap(), vec![Action::Done]);
    }

    #[test]
    fn plans_toggle_for_goal_behind_closed_door() {
        // Type B layout: two rooms, one closed door.
        let layout = EnvSpec::type_b(5).generate().unwrap();
        let (door_tile, _, _) = layout.doors().next().unwrap();
        // Goal: reach a tile in the far room.
        let goal = Goal::new(GoalKind::GoToTile {
            tile: Tile::new(layout.width() - 2, 1),
        });
        let bot = Bot::new(goal.clone());
        let plan = bot.plan(&layout).unwrap();
        assert!(
            plan.contains(&Action::Toggle),
            "plan {plan:?} must toggle the door at {door_tile}"
        );
        let (end, _) = run_bot(&bot, layout, 200);
        assert!(is_goal_state(&end, &goal));
    }

    #[test]
    fn picks_up_object_and_handles_occupied_hands() {
        let mut cells = BTreeMap::new();
        cells.insert(
            Tile::new(4, 4),
            CellContent::Object(Object::new(Color::Red, Shape::Ball)),
        );
        let state = GridState::new(
            8,
            8,
            cells,
            Tile::new(1, 1),
            Dir::Down,
            Some(Object::new(Color::Blue, Shape::Key)),
        )
        .unwrap();
        let goal = Goal::new(GoalKind::PickUp {
            color: Some(Color::Red),
            shape: Shape::Ball,
        });
        let bot = Bot::new(goal.clone());
        let (end, _) = run_bot(&bot, state, 100);
        assert!(is_goal_state(&end, &goal));
        // The key was dropped somewhere on the grid, not destroyed.
        assert!(end
            .objects()
            .any(|(_, o)| o == Object::new(Color::Blue, Shape::Key)));
    }

    #[test]
    fn fetches_key_for_locked_door() {
        let mut cells = BTreeMap::new();
        for row in 1..7 {
            cells.insert(Tile::new(4, row), CellContent::Wall);
        }
        cells.insert(
            Tile::new(4, 3),
            CellContent::Door {
                color: Color::Grey,
                state: DoorState::Locked,
            },
        );
        cells.insert(
            Tile::new(2, 5),
            CellContent::Object(Object::new(Color::Grey, Shape::Key)),
        );
        let state = GridState::new(8, 8, cells, Tile::new(1, 1), Dir::Up, None).unwrap();
        let goal = Goal::new(GoalKind::GoToTile {
            tile: Tile::new(6, 3),
        });
        let bot = Bot::new(goal.clone());
        let (end, steps) = run_bot(&bot, state, 200);
        assert!(is_goal_state(&end, &goal), "stopped after {steps} steps");
    }

    #[test]
    fn put_next_delivers_the_object() {
        let mut cells = BTreeMap::new();
        cells.insert(
            Tile::new(2, 2),
            CellContent::Object(Object::new(Color::Green, Shape::Box)),
        );
        cells.insert(
            Tile::new(6, 6),
            CellContent::Object(Object::new(Color::Grey, Shape::Ball)),
        );
        let state = GridState::new(9, 9, cells, Tile::new(4, 4), Dir::Up, None).unwrap();
        let goal = Goal::new(GoalKind::PutNext {
            moved: ObjectSpec {
                color: Some(Color::Green),
                shape: Shape::Box,
            },
            anchor: ObjectSpec {
                color: Some(Color::Grey),
                shape: Shape::Ball,
            },
        });
        let bot = Bot::new(goal.clone());
        let (end, _) = run_bot(&bot, state, 200);
        assert!(is_goal_state(&end, &goal));
    }

    #[test]
    fn unreachable_goal_is_signalled() {
        let state =
            GridState::new(8, 8, BTreeMap::new(), Tile::new(1, 1), Dir::Up, None).unwrap();
        let goal = Goal::new(GoalKind::PickUp {
            color: Some(Color::Red),
            shape: Shape::Ball,
        });
        assert_eq!(Bot::new(goal).act(&state), Err(BotError::Unreachable));
    }
}
