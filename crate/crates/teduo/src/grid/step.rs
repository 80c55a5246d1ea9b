//! The deterministic transition function.

use super::{Action, CellContent, DoorState, GridState};

/// Applies one action. Returns the successor state and a validity flag.
///
/// `valid == false` exactly when the action was blocked and the state is
/// returned unchanged: forward into a wall, closed door, or object; pickup
/// with nothing pickable in front or a full inventory; drop onto a non-empty
/// cell (open-door tiles count as non-empty); toggle facing nothing
/// togglable, or a locked door without the matching key. `Done` is always a
/// valid no-op; episode termination is the harness's concern.
pub fn step(state: &GridState, action: Action) -> (GridState, bool) {
    let invalid = || (state.clone(), false);
    match action {
        Action::Left => {
            let mut next = state.clone();
            next.set_agent(state.agent_pos(), state.agent_dir().turn_left());
            (next, true)
        }
        Action::Right => {
            let mut next = state.clone();
            next.set_agent(state.agent_pos(), state.agent_dir().turn_right());
            (next, true)
        }
        Action::Forward => {
            let Some(target) = state.facing_tile() else {
                return invalid();
            };
            if !state.is_walkable(target) {
                return invalid();
            }
            let mut next = state.clone();
            next.set_agent(target, state.agent_dir());
            (next, true)
        }
        Action::Pickup => {
            if state.inventory().is_some() {
                return invalid();
            }
            let Some(target) = state.facing_tile() else {
                return invalid();
            };
            let Some(object) = state.object_at(target) else {
                return invalid();
            };
            let mut next = state.clone();
            next.cells_mut().remove(&target);
            next.set_inventory(Some(object));
            (next, true)
        }
        Action::Drop => {
            let Some(object) = state.inventory() else {
                return invalid();
            };
            let Some(target) = state.facing_tile() else {
                return invalid();
            };
            if !state.is_empty_floor(target) {
                return invalid();
            }
            let mut next = state.clone();
            next.cells_mut().insert(target, CellContent::Object(object));
            next.set_inventory(None);
            (next, true)
        }
        Action::Toggle => {
            let Some(target) = state.facing_tile() else {
                return invalid();
            };
            let Some((color, door_state)) = state.door_at(target) else {
                return invalid();
            };
            let new_state = match door_state {
                DoorState::Closed => DoorState::Open,
                DoorState::Open => DoorState::Closed,
                DoorState::Locked => {
                    let has_key = state.inventory().is_some_and(|o| {
                        o.shape == super::Shape::Key && o.color == color
                    });
                    if !has_key {
                        return invalid();
                    }
                    DoorState::Open
                }
            };
            let mut next = state.clone();
            next.cells_mut().insert(
                target,
                CellContent::Door {
                    color,
                    state: new_state,
                },
            );
            (next, true)
        }
        Action::Done => (state.clone(), true),
    }
}
