//! A single total model packaging several finite models as isolated
//! sub-universes with a distinguished ⊥ per sort. Any application whose
//! arguments span two members, touch ⊥, or hit an undefined point of a
//! member yields ⊥; restricted to one member's elements, every function
//! and relation agrees with that member. Used for SyGuS emission, where
//! constraints from different models must be phrased over one domain.

use super::{FiniteModel, Value};
use crate::logic::LogicError;

/// A value of the combined universe.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UValue {
    /// Foreground element, already offset into the shared index space.
    Elem(usize),
    Int(i64),
    Bool(bool),
    Set(std::collections::BTreeSet<i64>),
    /// The absorbing undefined value (one per sort conceptually; a
    /// single marker suffices here).
    Bot,
}

#[derive(Debug, Clone)]
pub struct UniversalModel {
    pub members: Vec<FiniteModel>,
    /// Starting index of each member's elements in the shared space.
    pub offsets: Vec<usize>,
    /// Total number of foreground elements including ⊥.
    pub fg_size: usize,
    /// Index of the foreground ⊥ element (the last one).
    pub bot_elem: usize,
}

impl UniversalModel {
    pub fn build(members: Vec<FiniteModel>) -> Result<UniversalModel, LogicError> {
        if members.is_empty() {
            return Err(LogicError::Invalid(
                "universal model needs at least one member".into(),
            ));
        }
        let mut offsets = Vec::with_capacity(members.len());
        let mut next = 0usize;
        for m in &members {
            offsets.push(next);
            next += m.fg_size;
        }
        Ok(UniversalModel {
            members,
            offsets,
            fg_size: next + 1,
            bot_elem: next,
        })
    }

    /// Map a member-local value into the shared space.
    pub fn lift(&self, member: usize, v: &Value) -> UValue {
        match v {
            Value::Elem(e) => UValue::Elem(self.offsets[member] + e),
            Value::Int(n) => UValue::Int(*n),
            Value::Bool(b) => UValue::Bool(*b),
            Value::Set(s) => UValue::Set(s.clone()),
            Value::SetBottom => UValue::Bot,
        }
    }

    /// Which member a shared foreground element belongs to; ⊥ belongs
    /// to none.
    pub fn member_of(&self, elem: usize) -> Option<(usize, usize)> {
        if elem >= self.bot_elem {
            return None;
        }
        for (i, off) in self.offsets.iter().enumerate().rev() {
            if elem >= *off {
                return Some((i, elem - off));
            }
        }
        None
    }

    /// The member every foreground argument of a tuple belongs to, if
    /// there is exactly one and no ⊥ is involved. Background values
    /// belong to every member.
    fn tuple_member(&self, args: &[UValue]) -> Option<usize> {
        let mut member = None;
        for a in args {
            match a {
                UValue::Bot => return None,
                UValue::Elem(e) => {
                    let (m, _) = self.member_of(*e)?;
                    match member {
                        None => member = Some(m),
                        Some(prev) if prev == m => {}
                        Some(_) => return None,
                    }
                }
                _ => {}
            }
        }
        member
    }

    fn lower(&self, member: usize, v: &UValue) -> Option<Value> {
        match v {
            UValue::Elem(e) => {
                let (m, local) = self.member_of(*e)?;
                if m == member {
                    Some(Value::Elem(local))
                } else {
                    None
                }
            }
            UValue::Int(n) => Some(Value::Int(*n)),
            UValue::Bool(b) => Some(Value::Bool(*b)),
            UValue::Set(s) => Some(Value::Set(s.clone())),
            UValue::Bot => None,
        }
    }

    /// Apply a function symbol per the case split: all arguments inside
    /// one member gives that member's value, everything else (mixed
    /// members, ⊥ arguments, undefined member points) gives ⊥.
    pub fn apply_func(&self, f: &str, args: &[UValue]) -> UValue {
        let Some(member) = self.tuple_member_total(args) else {
            return UValue::Bot;
        };
        let lowered: Option<Vec<Value>> =
            args.iter().map(|a| self.lower(member, a)).collect();
        let Some(lowered) = lowered else {
            return UValue::Bot;
        };
        match self.members[member].funcs.get(f).and_then(|g| g.get(&lowered)) {
            Some(v) => self.lift(member, v),
            None => UValue::Bot,
        }
    }

    /// Evaluate a relation atom; ⊥ for relations reads as false so the
    /// combined model stays total.
    pub fn eval_rel(&self, r: &str, args: &[UValue]) -> bool {
        let Some(member) = self.tuple_member_total(args) else {
            return false;
        };
        let lowered: Option<Vec<Value>> =
            args.iter().map(|a| self.lower(member, a)).collect();
        let Some(lowered) = lowered else {
            return false;
        };
        self.members[member]
            .rels
            .get(r)
            .and_then(|g| g.get(&lowered))
            .copied()
            .unwrap_or(false)
    }

    /// Constant interpretation per member, ⊥ when the members disagree
    /// is not a concern: constants are evaluated inside a chosen member
    /// context by the emitter, so this returns the member's value.
    pub fn const_in(&self, member: usize, c: &str) -> UValue {
        match self.members[member].consts.get(c) {
            Some(v) => self.lift(member, v),
            None => UValue::Bot,
        }
    }

    /// Like [`Self::tuple_member`], but a tuple with no foreground
    /// component defaults to member 0 so ground background applications
    /// stay evaluable.
    fn tuple_member_total(&self, args: &[UValue]) -> Option<usize> {
        if args.iter().any(|a| matches!(a, UValue::Bot)) {
            return None;
        }
        if args
            .iter()
            .all(|a| !matches!(a, UValue::Elem(_)))
        {
            return Some(0);
        }
        self.tuple_member(args)
    }

    /// All shared foreground elements except ⊥, in member order.
    pub fn member_elements(&self) -> Vec<UValue> {
        (0..self.bot_elem).map(UValue::Elem).collect()
    }
}
