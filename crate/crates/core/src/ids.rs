//! Interned-ish names for agents and atoms.

use std::borrow::Borrow;
use std::fmt;
use std::sync::Arc;

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(name: impl AsRef<str>) -> Self {
                Self(Arc::from(name.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:?}", &*self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self::new(s)
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }
    };
}

name_type!(
    /// An agent of the workspace.
    Agent
);
name_type!(
    /// A propositional variable.
    Atom
);

/// Letters, digits and underscore. Used for agent names.
pub fn is_agent_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Token class accepted by the formula lexer for atoms, events, states and
/// update names.
pub fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(is_ident_continue)
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '*' | '+')
}

/// Atom names additionally exclude the two constant keywords.
pub fn is_atom_name(s: &str) -> bool {
    is_ident(s) && s != "true" && s != "false"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn name_classes() {
        assert!(is_agent_name("a_1"));
        assert!(!is_agent_name("a*b"));
        assert!(!is_agent_name(""));
        assert!(is_ident("s1*pe"));
        assert!(is_ident("U1+U4"));
        assert!(!is_ident("*x"));
        assert!(!is_atom_name("true"));
        assert!(is_atom_name("p"));
    }

    #[test]
    fn ordering_follows_text() {
        let mut v = vec![Atom::new("q"), Atom::new("p"), Atom::new("r")];
        v.sort();
        assert_eq!(v, vec![Atom::new("p"), Atom::new("q"), Atom::new("r")]);
    }
}
