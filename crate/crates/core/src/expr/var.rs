//! Interned variables shared by every polynomial in the process.
//!
//! A variable is either a plain symbol (coordinate or parameter) or one half
//! of a trigonometric pair `sin(u)` / `cos(u)`. Trig atoms remember their
//! argument so that differentiation can apply the chain rule, and their
//! partner so that `cos(u)^2` can be rewritten as `1 - sin(u)^2`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Mutex, OnceLock};

use super::ratfunc::RatFunc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigKind {
    Sin,
    Cos,
}

#[derive(Debug)]
pub struct TrigInfo {
    pub kind: TrigKind,
    pub arg: RatFunc,
    partner: OnceLock<Var>,
}

impl TrigInfo {
    pub fn partner(&self) -> Var {
        *self
            .partner
            .get()
            .expect("trig partner is set at interning time")
    }
}

#[derive(Debug)]
pub struct VarData {
    name: &'static str,
    key: &'static str,
    trig: Option<TrigInfo>,
}

/// Interned variable handle. Equality is identity; ordering is by a
/// case-folded name so that printed output does not depend on the order in
/// which variables were first seen.
#[derive(Clone, Copy)]
pub struct Var(&'static VarData);

fn interner() -> &'static Mutex<HashMap<String, Var>> {
    static INTERNER: OnceLock<Mutex<HashMap<String, Var>>> = OnceLock::new();
    INTERNER.get_or_init(|| Mutex::new(HashMap::new()))
}

fn leak(name: &str, trig: Option<TrigInfo>) -> Var {
    let name: &'static str = Box::leak(name.to_owned().into_boxed_str());
    let key: &'static str = Box::leak(name.to_lowercase().into_boxed_str());
    Var(Box::leak(Box::new(VarData { name, key, trig })))
}

impl Var {
    /// Plain symbol with the given name.
    pub fn symbol(name: &str) -> Var {
        let mut table = interner().lock().unwrap();
        if let Some(v) = table.get(name) {
            return *v;
        }
        let v = leak(name, None);
        table.insert(name.to_owned(), v);
        v
    }

    /// Looks up an already interned variable by name.
    pub fn lookup(name: &str) -> Option<Var> {
        interner().lock().unwrap().get(name).copied()
    }

    /// The `(sin(u), cos(u))` pair for a canonical argument `u`.
    pub fn trig_pair(arg: &RatFunc) -> (Var, Var) {
        let printed = arg.to_string();
        let sin_name = format!("sin({printed})");
        let cos_name = format!("cos({printed})");
        let mut table = interner().lock().unwrap();
        if let (Some(s), Some(c)) = (table.get(&sin_name), table.get(&cos_name)) {
            return (*s, *c);
        }
        let info = |kind| TrigInfo {
            kind,
            arg: arg.clone(),
            partner: OnceLock::new(),
        };
        let s = leak(&sin_name, Some(info(TrigKind::Sin)));
        let c = leak(&cos_name, Some(info(TrigKind::Cos)));
        let _ = s.0.trig.as_ref().unwrap().partner.set(c);
        let _ = c.0.trig.as_ref().unwrap().partner.set(s);
        table.insert(sin_name, s);
        table.insert(cos_name, c);
        (s, c)
    }

    pub fn name(self) -> &'static str {
        self.0.name
    }

    pub fn trig(self) -> Option<&'static TrigInfo> {
        self.0.trig.as_ref()
    }

    pub fn is_cos(self) -> bool {
        matches!(self.trig(), Some(t) if t.kind == TrigKind::Cos)
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for Var {}

impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.0 as *const VarData as usize).hash(state);
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.0
            .key
            .cmp(other.0.key)
            .then_with(|| self.0.name.cmp(other.0.name))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0.name)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_idempotent() {
        assert_eq!(Var::symbol("X2"), Var::symbol("X2"));
        assert_ne!(Var::symbol("X2"), Var::symbol("X3"));
    }

    #[test]
    fn ordering_is_case_folded() {
        assert!(Var::symbol("b") < Var::symbol("X2"));
        assert!(Var::symbol("a") < Var::symbol("b"));
    }

    #[test]
    fn trig_pairs_know_each_other() {
        let arg = RatFunc::from_var(Var::symbol("X3"));
        let (s, c) = Var::trig_pair(&arg);
        assert_eq!(s.name(), "sin(X3)");
        assert_eq!(c.trig().unwrap().partner(), s);
        assert_eq!(Var::trig_pair(&arg), (s, c));
        assert!(c.is_cos() && !s.is_cos());
    }
}
