//! Structured element tokens.
//!
//! Every carrier in the library is a finite set of [`Elem`]s. Apexes of
//! iterated pullbacks are pairs of pairs and free-monoid elements are lists,
//! so both are first-class constructors rather than encoded strings.

use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

/// An atom, a pair, or a finite list of elements.
///
/// The derived order is lexicographic on structure (atoms before pairs before
/// lists) and is the canonical order used by every set in the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elem {
    Atom(String),
    Pair(Box<Elem>, Box<Elem>),
    List(Vec<Elem>),
}

impl Elem {
    pub fn atom(name: impl Into<String>) -> Self {
        Elem::Atom(name.into())
    }

    pub fn pair(a: Elem, b: Elem) -> Self {
        Elem::Pair(Box::new(a), Box::new(b))
    }

    pub fn list(items: impl IntoIterator<Item = Elem>) -> Self {
        Elem::List(items.into_iter().collect())
    }

    pub fn as_pair(&self) -> Option<(&Elem, &Elem)> {
        match self {
            Elem::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Elem]> {
        match self {
            Elem::List(items) => Some(items),
            _ => None,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Elem::Atom(s) => Some(s),
            _ => None,
        }
    }
}

impl From<&str> for Elem {
    fn from(s: &str) -> Self {
        Elem::atom(s)
    }
}

impl From<String> for Elem {
    fn from(s: String) -> Self {
        Elem::Atom(s)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Atom(s) => write!(f, "{s}"),
            Elem::Pair(a, b) => write!(f, "({a}, {b})"),
            Elem::List(items) => {
                write!(f, "[")?;
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Wire format: "a" | {"pair": [t, t]} | {"list": [t, ...]}

impl Serialize for Elem {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Elem::Atom(s) => serializer.serialize_str(s),
            Elem::Pair(a, b) => {
                let mut map = serializer.serialize_map(Some(1))?;
                map.serialize_entry("pair", &(a.as_ref(), b.as_ref()))?;
                map.end()
            }
            Elem::List(items) => {
                let mut map = serializer.serialize_map(Some(1))?;
                map.serialize_entry("list", items)?;
                map.end()
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Token {
    Atom(String),
    Pair(PairToken),
    List(ListToken),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairToken {
    pair: (Elem, Elem),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ListToken {
    list: Vec<Elem>,
}

impl<'de> Deserialize<'de> for Elem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match Token::deserialize(deserializer) {
            Ok(Token::Atom(s)) => Ok(Elem::Atom(s)),
            Ok(Token::Pair(p)) => Ok(Elem::pair(p.pair.0, p.pair.1)),
            Ok(Token::List(l)) => Ok(Elem::List(l.list)),
            Err(_) => Err(de::Error::custom("expected an element token: string, {\"pair\": [..]} or {\"list\": [..]}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_structural() {
        let a = Elem::atom("a");
        let b = Elem::atom("b");
        assert!(a < b);
        assert!(b < Elem::pair(a.clone(), a.clone()));
        assert!(Elem::pair(a.clone(), b.clone()) < Elem::pair(b.clone(), a.clone()));
        assert!(Elem::list([]) < Elem::list([a.clone()]));
        assert!(Elem::list([a.clone(), b.clone()]) < Elem::list([b]));
    }

    #[test]
    fn token_round_trip() {
        let e = Elem::pair(Elem::atom("g"), Elem::list([Elem::atom("f"), Elem::atom("h")]));
        let text = serde_json::to_string(&e).unwrap();
        assert_eq!(text, r#"{"pair":["g",{"list":["f","h"]}]}"#);
        let back: Elem = serde_json::from_str(&text).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn rejects_unknown_token() {
        assert!(serde_json::from_str::<Elem>(r#"{"triple":["a","b","c"]}"#).is_err());
        assert!(serde_json::from_str::<Elem>("3").is_err());
    }
}
