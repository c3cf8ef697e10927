//! Which suite owns each statement.
//!
//! A statement whose split and Chow halves are checked separately appears twice, with the
//! half in `part`; the pair `(label, part)` is the statement id and is listed once.

use crate::cli::Suite;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Applies {
    Always,
    AtLeast16,
    Only8,
}

impl Applies {
    pub fn at(self, n: u32) -> bool {
        match self {
            Applies::Always => true,
            Applies::AtLeast16 => n >= 16,
            Applies::Only8 => n == 8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Statement {
    pub label: &'static str,
    pub part: Option<&'static str>,
    pub suite: Suite,
    pub applies: Applies,
}

impl Statement {
    pub fn id(&self) -> String {
        match self.part {
            Some(p) => format!("{} [{p}]", self.label),
            None => self.label.to_string(),
        }
    }
}

const fn s(label: &'static str, part: Option<&'static str>, suite: Suite, applies: Applies) -> Statement {
    Statement { label, part, suite, applies }
}

use Applies::*;
use Suite::*;

pub const STATEMENTS: &[Statement] = &[
    s("dfn:KOG", None, AppendixPieri, Always),
    s("ex:KOGT", None, AppendixPieri, Always),
    s("pieriformulaktheory", None, AppendixPieri, Always),
    s("ktheorysquaresbarek", None, AppendixPieri, Always),
    s("ktheoryproductsbarek", None, AppendixPieri, Always),
    s("ktheorysquaresckcommas", None, AppendixPieri, Always),
    s("ktheoryproductsckcommas", None, AppendixPieri, Always),
    s("ktheorycommasckproducts", None, AppendixPieri, Always),
    s("ktheorysquaresckproducts", None, AppendixPieri, Always),
    s("krelationinbar", None, AppendixPieri, Always),
    s("krelationinbarlargeimodsquare", None, AppendixPieri, Always),
    s("krelationinbarmodi", None, AppendixPieri, Always),
    s("relationinbar", None, AppendixPieri, Always),
    s("lemK:eij", Some("K"), Rees, Always),
    s("lemK:eij", Some("CH"), Chow, Always),
    s("lemK:eijIthree", None, Rees, Always),
    s("lemK:eonenj", Some("K"), Rees, Always),
    s("lemK:eonenj", Some("CH"), Chow, Always),
    s("propK:eoneeIthree", Some("K"), Rees, Always),
    s("propK:eoneeIthree", Some("CH"), Chow, Always),
    s("cor:fonepower", None, Rees, Always),
    s("lem:eonepower", None, Chow, Always),
    s("lemK:ijmultisubsetnew", Some("K"), Rees, Always),
    s("lemK:ijmultisubsetnew", Some("CH"), Chow, Always),
    s("lemK:indXplus1", None, Rees, AtLeast16),
    s("lem:indXplus1", None, Chow, AtLeast16),
    s("lemK:indXplus1n8", None, Rees, Only8),
    s("lem:indXplus1n8", None, Chow, Only8),
    s("lem:eonenjtorsioncor", None, Chow, Always),
    s("morphismpsi", None, Rees, Always),
    s("eq:steenrodshortenedformula", None, Chow, Always),
    s("eq:shat23", None, Chow, Always),
    s("eq:rescitwoe", None, Chow, Always),
    s("eq:setJcases", None, MainTheorem, Always),
    s("eq:sizeofJset", None, MainTheorem, Always),
    s("eq:elementx", None, MainTheorem, Always),
    s("torsionindex", None, MainTheorem, Always),
    s("prop:GK", None, MainTheorem, Always),
    s("rem:proofKpart", None, MainTheorem, Always),
    s("prop:chow", None, MainTheorem, Always),
    s("mainthm", None, MainTheorem, Always),
];

/// Label used by property checks, which test engine invariants rather than statements.
pub const PROPERTY_LABEL: &str = "property";

/// The statement label a `paper_ref` starts with.
pub fn label_of(paper_ref: &str) -> &str {
    paper_ref.split_whitespace().next().unwrap_or("").trim_end_matches([':', ','])
}

/// Statements a suite owns at rank `n`.
pub fn statements_for(suite: Suite, n: u32) -> impl Iterator<Item = &'static Statement> {
    STATEMENTS.iter().filter(move |st| st.suite == suite && st.applies.at(n))
}
