//! One formula AST for the propositional, predicate and bounded-infinitary languages.
//!
//! ```text
//! iff     --> imp {'<->' imp}
//! imp     --> disj ['->' imp]
//! disj    --> conj {'|' conj}
//! conj    --> unary {'&' unary}
//! unary   --> '~' unary | '[]' unary | '<>' unary
//!           | 'A' var '.' unary | 'E' var '.' unary
//!           | 'T' | 'F' | ident | ident '(' var {',' var} ')'
//!           | '/\{' iff {',' iff} '}' | '\/{' iff {',' iff} '}'
//!           | '/\_w{' ident '}' | '(' iff ')'
//! ```
//!
//! Binary `&`/`|` build two-element lists and associate to the left; the
//! braced forms build lists of any positive length. The printer writes
//! two-element lists infix and every other length braced, always with
//! parentheses around binary connectives, so `parse(print(φ)) == φ`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    Top,
    Bot,
    Prop(String),
    Pred(String, Vec<String>),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Diamond(Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    /// The schematic conjunction `⋀_{i∈ω} stem_i` over propositions `stem_0, stem_1, …`.
    OmegaAnd(String),
}

impl Formula {
    pub fn prop(name: &str) -> Self {
        Formula::Prop(name.to_string())
    }

    pub fn pred(name: &str, vars: &[&str]) -> Self {
        Formula::Pred(name.to_string(), vars.iter().map(|v| v.to_string()).collect())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(vec![a, b])
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(vec![a, b])
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn boxed(f: Formula) -> Self {
        Formula::Box(Box::new(f))
    }

    pub fn diamond(f: Formula) -> Self {
        Formula::Diamond(Box::new(f))
    }

    pub fn forall(x: &str, f: Formula) -> Self {
        Formula::Forall(x.to_string(), Box::new(f))
    }

    pub fn exists(x: &str, f: Formula) -> Self {
        Formula::Exists(x.to_string(), Box::new(f))
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Top | Formula::Bot | Formula::Prop(_) | Formula::Pred(..) | Formula::OmegaAnd(_) => {
                vec![]
            }
            Formula::Not(f) | Formula::Box(f) | Formula::Diamond(f) => vec![f],
            Formula::Forall(_, f) | Formula::Exists(_, f) => vec![f],
            Formula::And(fs) | Formula::Or(fs) => fs.iter().collect(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => vec![a, b],
        }
    }

    /// No predicate atoms or quantifiers.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Pred(..) | Formula::Forall(..) | Formula::Exists(..) => false,
            _ => self.children().into_iter().all(Formula::is_propositional),
        }
    }

    /// No propositional variables or schematic conjunctions.
    pub fn is_predicate_language(&self) -> bool {
        match self {
            Formula::Prop(_) | Formula::OmegaAnd(_) => false,
            _ => self.children().into_iter().all(Formula::is_predicate_language),
        }
    }

    pub fn has_schematic(&self) -> bool {
        matches!(self, Formula::OmegaAnd(_)) || self.children().into_iter().any(Formula::has_schematic)
    }

    /// Propositional variable names, sorted.
    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<String>) {
        if let Formula::Prop(p) = self {
            out.insert(p.clone());
        }
        for c in self.children() {
            c.collect_props(out);
        }
    }

    /// Number of connectives, atoms and constants.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    /// Greatest nesting of `[]`/`<>`.
    pub fn modal_depth(&self) -> usize {
        let inner = self.children().into_iter().map(Formula::modal_depth).max().unwrap_or(0);
        match self {
            Formula::Box(_) | Formula::Diamond(_) => inner + 1,
            _ => inner,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, open: &str, fs: &[Formula]| -> fmt::Result {
            write!(f, "{open}{{")?;
            for (i, x) in fs.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")
        };
        match self {
            Formula::Top => write!(f, "T"),
            Formula::Bot => write!(f, "F"),
            Formula::Prop(p) => write!(f, "{p}"),
            Formula::Pred(p, vars) => write!(f, "{p}({})", vars.join(",")),
            Formula::Not(x) => write!(f, "~{x}"),
            Formula::Box(x) => write!(f, "[]{x}"),
            Formula::Diamond(x) => write!(f, "<>{x}"),
            Formula::Forall(v, x) => write!(f, "A {v}. {x}"),
            Formula::Exists(v, x) => write!(f, "E {v}. {x}"),
            Formula::And(fs) if fs.len() == 2 => write!(f, "({} & {})", fs[0], fs[1]),
            Formula::Or(fs) if fs.len() == 2 => write!(f, "({} | {})", fs[0], fs[1]),
            Formula::And(fs) => list(f, "/\\", fs),
            Formula::Or(fs) => list(f, "\\/", fs),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <-> {b})"),
            Formula::OmegaAnd(stem) => write!(f, "/\\_w{{{stem}}}"),
        }
    }
}

/// Renders a formula in the ASCII grammar.
pub fn print(f: &Formula) -> String {
    f.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Top,
    Bot,
    Ident(String),
    Not,
    Box,
    Diamond,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    BigAnd,
    BigOr,
    OmegaAnd,
    Forall,
    Exists,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Top => "`T`".into(),
            Tok::Bot => "`F`".into(),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Not => "`~`".into(),
            Tok::Box => "`[]`".into(),
            Tok::Diamond => "`<>`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::BigAnd => "`/\\`".into(),
            Tok::BigOr => "`\\/`".into(),
            Tok::OmegaAnd => "`/\\_w`".into(),
            Tok::Forall => "`A`".into(),
            Tok::Exists => "`E`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let at = |i: usize| chars.get(i).map(|&(_, c)| c);
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 4)].iter().map(|&(_, c)| c).collect();
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") {
            (Tok::Implies, 2)
        } else if rest.starts_with("<>") {
            (Tok::Diamond, 2)
        } else if rest.starts_with("[]") {
            (Tok::Box, 2)
        } else if rest.starts_with("/\\_w") {
            (Tok::OmegaAnd, 4)
        } else if rest.starts_with("/\\") {
            (Tok::BigAnd, 2)
        } else if rest.starts_with("\\/") {
            (Tok::BigOr, 2)
        } else {
            match c {
                '~' => (Tok::Not, 1),
                '&' => (Tok::And, 1),
                '|' => (Tok::Or, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '{' => (Tok::LBrace, 1),
                '}' => (Tok::RBrace, 1),
                ',' => (Tok::Comma, 1),
                '.' => (Tok::Dot, 1),
                c if is_ident_start(c) => {
                    let mut j = i;
                    while at(j).is_some_and(is_ident_char) {
                        j += 1;
                    }
                    let word: String = chars[i..j].iter().map(|&(_, c)| c).collect();
                    let tok = match word.as_str() {
                        "T" => Tok::Top,
                        "F" => Tok::Bot,
                        "A" => Tok::Forall,
                        "E" => Tok::Exists,
                        _ => Tok::Ident(word),
                    };
                    (tok, j - i)
                }
                other => {
                    return Err(Error::Syntax {
                        position: pos,
                        expected: vec!["a formula token".into()],
                        found: format!("character {other:?}"),
                    })
                }
            }
        };
        out.push((pos, tok));
        i += len;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

const UNARY_START: &[&str] = &[
    "`~`", "`[]`", "`<>`", "`A`", "`E`", "`T`", "`F`", "identifier", "`(`", "`/\\`", "`\\/`", "`/\\_w`",
];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T> {
        let (position, tok) = &self.toks[self.pos];
        Err(Error::Syntax {
            position: *position,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: tok.describe(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&[&tok.describe()])
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail(&["identifier"]),
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.disj()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula> {
        let mut lhs = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conj()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn braced_list(&mut self) -> Result<Vec<Formula>> {
        self.expect(Tok::LBrace)?;
        let mut items = vec![self.iff()?];
        loop {
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                    items.push(self.iff()?);
                }
                Tok::RBrace => {
                    self.bump();
                    return Ok(items);
                }
                _ => return self.fail(&["`,`", "`}`"]),
            }
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Box => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Tok::Diamond => {
                self.bump();
                Ok(Formula::diamond(self.unary()?))
            }
            Tok::Forall | Tok::Exists => {
                let universal = self.bump() == Tok::Forall;
                let var = self.ident()?;
                self.expect(Tok::Dot)?;
                let body = self.unary()?;
                Ok(if universal {
                    Formula::Forall(var, Box::new(body))
                } else {
                    Formula::Exists(var, Box::new(body))
                })
            }
            Tok::Top => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Ok(Formula::Prop(name));
                }
                self.bump();
                let mut vars = vec![self.ident()?];
                loop {
                    match self.peek() {
                        Tok::Comma => {
                            self.bump();
                            vars.push(self.ident()?);
                        }
                        Tok::RParen => {
                            self.bump();
                            return Ok(Formula::Pred(name, vars));
                        }
                        _ => return self.fail(&["`,`", "`)`"]),
                    }
                }
            }
            Tok::BigAnd => {
                self.bump();
                Ok(Formula::And(self.braced_list()?))
            }
            Tok::BigOr => {
                self.bump();
                Ok(Formula::Or(self.braced_list()?))
            }
            Tok::OmegaAnd => {
                self.bump();
                self.expect(Tok::LBrace)?;
                let stem = self.ident()?;
                self.expect(Tok::RBrace)?;
                Ok(Formula::OmegaAnd(stem))
            }
            Tok::LParen => {
                self.bump();
                let f = self.iff()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => self.fail(UNARY_START),
        }
    }
}

/// Parses the ASCII grammar described in the module docs.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.iff()?;
    if *p.peek() != Tok::End {
        return p.fail(&["`&`", "`|`", "`->`", "`<->`", "end of input"]);
    }
    Ok(f)
}

/// Subformulas in post-order (children before parents), without repeats.
pub fn subformulas_ordered(f: &Formula) -> Vec<Formula> {
    fn walk(f: &Formula, seen: &mut BTreeSet<Formula>, out: &mut Vec<Formula>) {
        for c in f.children() {
            walk(c, seen, out);
        }
        if seen.insert(f.clone()) {
            out.push(f.clone());
        }
    }
    let mut out = Vec::new();
    walk(f, &mut BTreeSet::new(), &mut out);
    out
}

/// The subformula set. A schematic conjunction contributes only itself.
pub fn subformulas(f: &Formula) -> BTreeSet<Formula> {
    subformulas_ordered(f).into_iter().collect()
}

pub fn free_vars(f: &Formula) -> BTreeSet<String> {
    match f {
        Formula::Pred(_, vars) => vars.iter().cloned().collect(),
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let mut vs = free_vars(body);
            vs.remove(x);
            vs
        }
        _ => f.children().into_iter().flat_map(free_vars).collect(),
    }
}

fn all_vars(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Pred(_, vars) => out.extend(vars.iter().cloned()),
        Formula::Forall(x, _) | Formula::Exists(x, _) => {
            out.insert(x.clone());
        }
        _ => {}
    }
    for c in f.children() {
        all_vars(c, out);
    }
}

/// Replaces free occurrences of `x` by `y`, renaming binders that would capture `y`.
pub fn substitute(f: &Formula, x: &str, y: &str) -> Formula {
    if x == y {
        return f.clone();
    }
    let sub = |g: &Formula| substitute(g, x, y);
    match f {
        Formula::Top | Formula::Bot | Formula::Prop(_) | Formula::OmegaAnd(_) => f.clone(),
        Formula::Pred(p, vars) => Formula::Pred(
            p.clone(),
            vars.iter()
                .map(|v| if v == x { y.to_string() } else { v.clone() })
                .collect(),
        ),
        Formula::Not(g) => Formula::not(sub(g)),
        Formula::Box(g) => Formula::boxed(sub(g)),
        Formula::Diamond(g) => Formula::diamond(sub(g)),
        Formula::And(gs) => Formula::And(gs.iter().map(sub).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(sub).collect()),
        Formula::Implies(a, b) => Formula::implies(sub(a), sub(b)),
        Formula::Iff(a, b) => Formula::iff(sub(a), sub(b)),
        Formula::Forall(z, body) | Formula::Exists(z, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let rebuild = |v: String, b: Formula| {
                if universal {
                    Formula::Forall(v, Box::new(b))
                } else {
                    Formula::Exists(v, Box::new(b))
                }
            };
            if z == x || !free_vars(body).contains(x) {
                return f.clone();
            }
            if z != y {
                return rebuild(z.clone(), sub(body));
            }
            let mut used = BTreeSet::new();
            all_vars(body, &mut used);
            used.insert(x.to_string());
            used.insert(y.to_string());
            let mut fresh = format!("{z}'");
            while used.contains(&fresh) {
                fresh.push('\'');
            }
            let renamed = substitute(body, z, &fresh);
            rebuild(fresh, sub(&renamed))
        }
    }
}

/// Arity of every predicate symbol across `formulas`; inconsistent use is an error.
pub fn predicate_arities<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Result<BTreeMap<String, usize>> {
    fn walk(f: &Formula, out: &mut BTreeMap<String, usize>) -> Result<()> {
        if let Formula::Pred(p, vars) = f {
            match out.get(p) {
                Some(&n) if n != vars.len() => {
                    return Err(Error::Arity {
                        name: p.clone(),
                        expected: n,
                        found: vars.len(),
                    })
                }
                _ => {
                    out.insert(p.clone(), vars.len());
                }
            }
        }
        if let Formula::And(fs) | Formula::Or(fs) = f {
            if fs.is_empty() {
                return Err(Error::Language("empty conjunction or disjunction".into()));
            }
        }
        f.children().into_iter().try_for_each(|c| walk(c, out))
    }
    let mut out = BTreeMap::new();
    for f in formulas {
        walk(f, &mut out)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn parses_the_monotonicity_schema() {
        let pq = Formula::and(Formula::prop("p"), Formula::prop("q"));
        let want = Formula::implies(
            Formula::boxed(pq),
            Formula::and(Formula::boxed(Formula::prop("p")), Formula::boxed(Formula::prop("q"))),
        );
        assert_eq!(p("[](p & q) -> ([]p & []q)"), want);
    }

    #[test]
    fn parses_quantifiers_and_lists() {
        assert_eq!(p("A x. P(x)"), Formula::forall("x", Formula::pred("P", &["x"])));
        assert_eq!(
            p("/\\{p0, p1, p2}"),
            Formula::And(vec![Formula::prop("p0"), Formula::prop("p1"), Formula::prop("p2")])
        );
        assert_eq!(p("/\\_w{p}"), Formula::OmegaAnd("p".into()));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("p | q & r"), p("(p | (q & r))"));
        assert_eq!(p("p -> q -> r"), p("(p -> (q -> r))"));
        assert_eq!(p("p <-> q -> r"), p("(p <-> (q -> r))"));
        assert_eq!(p("~p & q"), p("((~p) & q)"));
        assert_eq!(p("p & q & r"), p("((p & q) & r)"));
        assert_eq!(p("A x. []P(x) -> []A x. P(x)"), p("((A x. [](P(x))) -> [](A x. P(x)))"));
    }

    #[test]
    fn syntax_errors_report_position_and_expectations() {
        match parse("(p & )") {
            Err(Error::Syntax { position, expected, found }) => {
                assert_eq!(position, 5);
                assert!(expected.iter().any(|e| e.contains("identifier")));
                assert_eq!(found, "`)`");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("p q").is_err());
        assert!(parse("/\\{}").is_err());
        assert!(parse("p $ q").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "[](p & q) -> ([]p & []q)",
            "A x. P(x)",
            "/\\{p0, p1, p2}",
            "\\/{p}",
            "<>~p <-> ~[]p",
            "E y. A x. R(x,y) -> A x. E y. R(x,y)",
            "/\\_w{p} -> T | F",
        ] {
            let f = p(s);
            let printed = print(&f);
            assert_eq!(parse(&printed).unwrap(), f, "{s} printed as {printed}");
            assert_eq!(print(&parse(&printed).unwrap()), printed);
        }
    }

    #[test]
    fn subformula_examples() {
        let bp = p("[]p");
        assert_eq!(subformulas(&bp), [bp.clone(), p("p")].into_iter().collect());
        let conj = p("/\\{p, q}");
        assert_eq!(subformulas(&conj), [conj.clone(), p("p"), p("q")].into_iter().collect());
        assert_eq!(subformulas(&p("p")), [p("p")].into_iter().collect());
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(substitute(&p("P(x)"), "x", "y"), p("P(y)"));
        assert_eq!(substitute(&p("A x. P(x)"), "x", "y"), p("A x. P(x)"));
        assert_eq!(substitute(&p("A y. Q(x,y)"), "x", "y"), p("A y'. Q(y,y')"));
        assert_eq!(substitute(&p("A y. Q(x,y')"), "x", "y"), p("A y''. Q(y,y')"));
    }

    #[test]
    fn free_variables() {
        let f = p("A x. R(x,y) & P(z)");
        assert_eq!(free_vars(&f), ["y", "z"].iter().map(|s| s.to_string()).collect());
        assert!(free_vars(&p("A x. E y. R(x,y)")).is_empty());
    }

    #[test]
    fn arity_consistency() {
        let a = p("P(x) & P(y)");
        assert_eq!(predicate_arities([&a]).unwrap()["P"], 1);
        let b = p("P(x) & P(x,y)");
        assert!(matches!(predicate_arities([&b]), Err(Error::Arity { .. })));
    }

    #[test]
    fn language_predicates() {
        assert!(p("[]p -> p").is_propositional());
        assert!(!p("A x. P(x)").is_propositional());
        assert!(p("A x. P(x)").is_predicate_language());
        assert!(!p("p & P(x)").is_predicate_language());
        assert_eq!(p("[][]p & []q").modal_depth(), 2);
    }
}
