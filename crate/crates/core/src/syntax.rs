//! Formula algebra over a declared signature: construction, parsing,
//! printing, variable extraction, substitution.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Characters allowed in punctuation-style connective symbols.
const OP_CHARS: &str = "!$%&*+-./:<=>@^|~#";

/// Reserved for rule lines in logic-definition files; never a connective.
pub const TURNSTILE: &str = "|-";

pub type Token = Arc<str>;
pub type VarSet = BTreeSet<Token>;
pub type FormulaSet = BTreeSet<Formula>;

fn is_var_token(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_word_symbol(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_punct_symbol(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| OP_CHARS.contains(c))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("duplicate connective symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("invalid connective symbol `{0}`: must be a punctuation token or start with an uppercase letter")]
    InvalidSymbol(String),
    #[error("`|-` is reserved and cannot be declared as a connective")]
    ReservedSymbol,
}

/// A finite set of connectives, each with a fixed arity.
///
/// Symbols are either punctuation tokens (`&`, `->`, `~`) or identifiers
/// starting with an uppercase letter (`Box`, `T`); both classes are disjoint
/// from variable tokens, which match `[a-z][a-zA-Z0-9_]*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    decls: Vec<(Token, usize)>,
    arities: HashMap<Token, usize>,
    // punctuation symbols sorted longest-first, for greedy lexing
    punct: Vec<Token>,
}

impl Signature {
    pub fn new<I, S>(connectives: I) -> Result<Signature, SignatureError>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: AsRef<str>,
    {
        let mut decls: Vec<(Token, usize)> = Vec::new();
        let mut arities = HashMap::new();
        for (sym, arity) in connectives {
            let sym = sym.as_ref();
            if sym == TURNSTILE {
                return Err(SignatureError::ReservedSymbol);
            }
            if !is_punct_symbol(sym) && !is_word_symbol(sym) {
                return Err(SignatureError::InvalidSymbol(sym.to_string()));
            }
            let tok: Token = Arc::from(sym);
            if arities.insert(tok.clone(), arity).is_some() {
                return Err(SignatureError::DuplicateSymbol(sym.to_string()));
            }
            decls.push((tok, arity));
        }
        let mut punct: Vec<Token> = decls
            .iter()
            .map(|(s, _)| s.clone())
            .filter(|s| is_punct_symbol(s))
            .collect();
        punct.sort_by_key(|s| std::cmp::Reverse(s.len()));
        Ok(Signature { decls, arities, punct })
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.arities.get(symbol).copied()
    }

    pub fn connectives(&self) -> impl Iterator<Item = (&str, usize)> {
        self.decls.iter().map(|(s, a)| (s.as_ref(), *a))
    }
}

/// A formula: a variable, a metavariable (`?A`, only inside rule schemata),
/// or a connective applied to argument formulas.
///
/// Structural equality is the only equality; no normalization is performed.
/// Argument lists are shared (`Arc`), so clones are cheap and large generated
/// universes reuse subtrees.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Var(Token),
    Meta(Token),
    App(Token, Arc<[Formula]>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(Arc::from(name))
    }

    pub fn meta(name: &str) -> Formula {
        Formula::Meta(Arc::from(name))
    }

    pub fn app(symbol: &str, args: Vec<Formula>) -> Formula {
        Formula::App(Arc::from(symbol), args.into())
    }

    /// The set of object variables occurring in the formula, `var(α)`.
    pub fn vars(&self) -> VarSet {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut VarSet) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Meta(_) => {}
            Formula::App(_, args) => {
                for a in args.iter() {
                    a.collect_vars(out);
                }
            }
        }
    }

    /// Metavariables occurring in the formula (patterns only).
    pub fn metavars(&self) -> VarSet {
        let mut out = BTreeSet::new();
        self.collect_metavars(&mut out);
        out
    }

    fn collect_metavars(&self, out: &mut VarSet) {
        match self {
            Formula::Var(_) => {}
            Formula::Meta(m) => {
                out.insert(m.clone());
            }
            Formula::App(_, args) => {
                for a in args.iter() {
                    a.collect_metavars(out);
                }
            }
        }
    }

    /// True when the formula contains no metavariables.
    pub fn is_ground(&self) -> bool {
        match self {
            Formula::Var(_) => true,
            Formula::Meta(_) => false,
            Formula::App(_, args) => args.iter().all(Formula::is_ground),
        }
    }

    /// Connective nesting depth: variables have depth 0, an application is
    /// one deeper than its deepest argument.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Meta(_) => 0,
            Formula::App(_, args) => 1 + args.iter().map(Formula::depth).max().unwrap_or(0),
        }
    }
}

/// `var(Δ) = ⋃_{α∈Δ} var(α)`.
pub fn vars_set<'a, I: IntoIterator<Item = &'a Formula>>(formulas: I) -> VarSet {
    let mut out = BTreeSet::new();
    for f in formulas {
        f.collect_vars(&mut out);
    }
    out
}

/// A finite map from variable tokens to formulas; identity elsewhere.
/// Extends to the unique endomorphism of the formula algebra.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Token, Formula>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Substitution
    where
        I: IntoIterator<Item = (S, Formula)>,
        S: AsRef<str>,
    {
        Substitution {
            map: pairs
                .into_iter()
                .map(|(v, f)| (Arc::from(v.as_ref()), f))
                .collect(),
        }
    }

    pub fn insert(&mut self, var: &str, f: Formula) {
        self.map.insert(Arc::from(var), f);
    }

    pub fn get(&self, var: &str) -> Option<&Formula> {
        self.map.get(var)
    }

    /// Homomorphic replacement of mapped variables; metavariables are fixed.
    pub fn apply(&self, f: &Formula) -> Formula {
        match f {
            Formula::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| f.clone()),
            Formula::Meta(_) => f.clone(),
            Formula::App(sym, args) => {
                let new_args: Vec<Formula> = args.iter().map(|a| self.apply(a)).collect();
                Formula::App(sym.clone(), new_args.into())
            }
        }
    }
}

impl fmt::Display for Formula {
    /// Canonical text: atoms bare, unary connectives prefix, binary infix
    /// with mandatory parentheses, arity ≥3 functional. `parse` of the
    /// output yields an equal formula.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => write!(f, "{v}"),
            Formula::Meta(m) => write!(f, "?{m}"),
            Formula::App(sym, args) => match args.len() {
                0 => write!(f, "{sym}"),
                1 => {
                    if is_word_symbol(sym) {
                        write!(f, "{sym} {}", args[0])
                    } else {
                        write!(f, "{sym}{}", args[0])
                    }
                }
                2 => write!(f, "({} {sym} {})", args[0], args[1]),
                _ => {
                    write!(f, "{sym}(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")
                }
            },
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty input")]
    EmptyInput,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("arity mismatch for `{symbol}`: expected {expected} argument(s), found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("unbalanced parenthesis")]
    UnbalancedParenthesis,
    #[error("unexpected token `{0}`")]
    UnexpectedToken(String),
    #[error("metavariable `?{0}` not allowed in a ground formula")]
    MetavariableNotAllowed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Meta(String),
    Op(String),
    LParen,
    RParen,
    Comma,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Op(s) => write!(f, "{s}"),
            Tok::Meta(s) => write!(f, "?{s}"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::Comma => write!(f, ","),
        }
    }
}

fn lex(text: &str, sig: &Signature) -> Result<Vec<Tok>, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' {
            toks.push(Tok::LParen);
            i += 1;
        } else if c == ')' {
            toks.push(Tok::RParen);
            i += 1;
        } else if c == ',' {
            toks.push(Tok::Comma);
            i += 1;
        } else if c == '?' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            if j == start || !chars[start].is_ascii_alphabetic() {
                return Err(ParseError::UnknownSymbol("?".to_string()));
            }
            toks.push(Tok::Meta(chars[start..j].iter().collect()));
            i = j;
        } else if c.is_ascii_alphabetic() {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            toks.push(Tok::Ident(chars[i..j].iter().collect()));
            i = j;
        } else if OP_CHARS.contains(c) {
            let mut j = i;
            while j < chars.len() && OP_CHARS.contains(chars[j]) {
                j += 1;
            }
            let run: String = chars[i..j].iter().collect();
            // greedy longest-match split of the run into declared symbols
            let mut rest = run.as_str();
            while !rest.is_empty() {
                let hit = sig.punct.iter().find(|s| rest.starts_with(s.as_ref()));
                match hit {
                    Some(sym) => {
                        toks.push(Tok::Op(sym.to_string()));
                        rest = &rest[sym.len()..];
                    }
                    None => return Err(ParseError::UnknownSymbol(rest.to_string())),
                }
            }
            i = j;
        } else {
            return Err(ParseError::UnknownSymbol(c.to_string()));
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    depth: usize,
    sig: &'a Signature,
    allow_meta: bool,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        let t = self.toks.get(self.pos).cloned().ok_or({
            // running out of tokens inside parentheses is an imbalance
            if self.depth > 0 {
                ParseError::UnbalancedParenthesis
            } else {
                ParseError::EmptyInput
            }
        })?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        let got = self.next()?;
        if &got == want {
            Ok(())
        } else {
            Err(ParseError::UnexpectedToken(got.to_string()))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.next()? {
            Tok::Ident(name) => {
                if let Some(arity) = self.sig.arity(&name) {
                    self.application(&name, arity)
                } else if is_var_token(&name) {
                    Ok(Formula::var(&name))
                } else {
                    Err(ParseError::UnknownSymbol(name))
                }
            }
            Tok::Meta(name) => {
                if self.allow_meta {
                    Ok(Formula::meta(&name))
                } else {
                    Err(ParseError::MetavariableNotAllowed(name))
                }
            }
            Tok::Op(sym) => {
                let arity = self
                    .sig
                    .arity(&sym)
                    .ok_or_else(|| ParseError::UnknownSymbol(sym.clone()))?;
                self.application(&sym, arity)
            }
            Tok::LParen => {
                self.depth += 1;
                let left = self.formula()?;
                let sym = match self.next()? {
                    Tok::Op(s) | Tok::Ident(s) if self.sig.arity(&s) == Some(2) => s,
                    Tok::RParen => return Err(ParseError::UnexpectedToken(")".to_string())),
                    other => return Err(ParseError::UnexpectedToken(other.to_string())),
                };
                let right = self.formula()?;
                match self.next()? {
                    Tok::RParen => {
                        self.depth -= 1;
                        Ok(Formula::app(&sym, vec![left, right]))
                    }
                    other => Err(ParseError::UnexpectedToken(other.to_string())),
                }
            }
            Tok::RParen => Err(ParseError::UnbalancedParenthesis),
            Tok::Comma => Err(ParseError::UnexpectedToken(",".to_string())),
        }
    }

    fn application(&mut self, sym: &str, arity: usize) -> Result<Formula, ParseError> {
        match arity {
            0 => Ok(Formula::app(sym, vec![])),
            1 => {
                let arg = self.formula()?;
                Ok(Formula::app(sym, vec![arg]))
            }
            2 => Err(ParseError::UnexpectedToken(sym.to_string())),
            _ => {
                self.expect(&Tok::LParen)?;
                self.depth += 1;
                let mut args = vec![self.formula()?];
                loop {
                    match self.next()? {
                        Tok::Comma => args.push(self.formula()?),
                        Tok::RParen => break,
                        other => return Err(ParseError::UnexpectedToken(other.to_string())),
                    }
                }
                self.depth -= 1;
                if args.len() != arity {
                    return Err(ParseError::ArityMismatch {
                        symbol: sym.to_string(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                Ok(Formula::app(sym, args))
            }
        }
    }
}

fn parse_with(text: &str, sig: &Signature, allow_meta: bool) -> Result<Formula, ParseError> {
    let toks = lex(text, sig)?;
    if toks.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        depth: 0,
        sig,
        allow_meta,
    };
    let f = p.formula()?;
    match p.peek() {
        None => Ok(f),
        Some(Tok::RParen) => Err(ParseError::UnbalancedParenthesis),
        Some(t) => Err(ParseError::UnexpectedToken(t.to_string())),
    }
}

/// Parse a ground formula.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    parse_with(text, sig, false)
}

/// Parse a rule-schema pattern; metavariables `?A` are admitted.
pub fn parse_pattern(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    parse_with(text, sig, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new([("&", 2), ("|", 2), ("~", 1)]).unwrap()
    }

    #[test]
    fn parse_binary() {
        let f = parse("(p & q)", &sig()).unwrap();
        assert_eq!(f, Formula::app("&", vec![Formula::var("p"), Formula::var("q")]));
    }

    #[test]
    fn parse_atom() {
        assert_eq!(parse("p", &sig()).unwrap(), Formula::var("p"));
    }

    #[test]
    fn parse_unbalanced() {
        assert_eq!(parse("(p |", &sig()), Err(ParseError::UnbalancedParenthesis));
    }

    #[test]
    fn parse_empty() {
        assert_eq!(parse("", &sig()), Err(ParseError::EmptyInput));
        assert_eq!(parse("   ", &sig()), Err(ParseError::EmptyInput));
    }

    #[test]
    fn parse_unknown_symbol() {
        assert_eq!(
            parse("(p > q)", &sig()),
            Err(ParseError::UnknownSymbol(">".to_string()))
        );
        assert_eq!(
            parse("Box p", &sig()),
            Err(ParseError::UnknownSymbol("Box".to_string()))
        );
    }

    #[test]
    fn parse_functional_arity() {
        let s = Signature::new([("Ite", 3)]).unwrap();
        let f = parse("Ite(p,q,r)", &s).unwrap();
        assert_eq!(
            f,
            Formula::app("Ite", vec![Formula::var("p"), Formula::var("q"), Formula::var("r")])
        );
        assert_eq!(
            parse("Ite(p,q)", &s),
            Err(ParseError::ArityMismatch {
                symbol: "Ite".to_string(),
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn parse_constant() {
        let s = Signature::new([("T", 0), ("&", 2)]).unwrap();
        assert_eq!(parse("T", &s).unwrap(), Formula::app("T", vec![]));
        assert_eq!(
            parse("(p & T)", &s).unwrap(),
            Formula::app("&", vec![Formula::var("p"), Formula::app("T", vec![])])
        );
    }

    #[test]
    fn parse_nested_prefix() {
        let f = parse("~~(p & ~q)", &sig()).unwrap();
        assert_eq!(f.to_string(), "~~(p & ~q)");
    }

    #[test]
    fn parse_rejects_stray_meta() {
        assert_eq!(
            parse("?A", &sig()),
            Err(ParseError::MetavariableNotAllowed("A".to_string()))
        );
        let p = parse_pattern("(?A & ?B)", &sig()).unwrap();
        assert_eq!(p, Formula::app("&", vec![Formula::meta("A"), Formula::meta("B")]));
    }

    #[test]
    fn parse_trailing_input() {
        assert!(matches!(parse("p q", &sig()), Err(ParseError::UnexpectedToken(_))));
        assert_eq!(parse("(p)", &sig()), Err(ParseError::UnexpectedToken(")".to_string())));
    }

    #[test]
    fn signature_validation() {
        assert_eq!(
            Signature::new([("&", 2), ("&", 2)]),
            Err(SignatureError::DuplicateSymbol("&".to_string()))
        );
        assert_eq!(
            Signature::new([("box", 1)]),
            Err(SignatureError::InvalidSymbol("box".to_string()))
        );
        assert_eq!(Signature::new([("|-", 2)]), Err(SignatureError::ReservedSymbol));
        assert!(Signature::new([("Box", 1), ("->", 2)]).is_ok());
    }

    #[test]
    fn vars_examples() {
        let s = sig();
        let pq = parse("(p & q)", &s).unwrap();
        let vars = pq.vars();
        let names: Vec<&str> = vars.iter().map(|v| v.as_ref()).collect();
        assert_eq!(names, vec!["p", "q"]);
        assert_eq!(Formula::var("p").vars().len(), 1);
        let c = Signature::new([("T", 0)]).unwrap();
        assert!(parse("T", &c).unwrap().vars().is_empty());
    }

    #[test]
    fn vars_set_examples() {
        let s = sig();
        let a = parse("(p & q)", &s).unwrap();
        let b = parse("r", &s).unwrap();
        let got = vars_set([&a, &b]);
        let names: Vec<&str> = got.iter().map(|v| v.as_ref()).collect();
        assert_eq!(names, vec!["p", "q", "r"]);
        assert!(vars_set([]).is_empty());
        let c = parse("(p | p)", &s).unwrap();
        let d = parse("p", &s).unwrap();
        assert_eq!(vars_set([&c, &d]).len(), 1);
    }

    #[test]
    fn substitute_examples() {
        let s = sig();
        let f = parse("(p | p)", &s).unwrap();
        let sub = Substitution::from_pairs([("p", parse("(q & r)", &s).unwrap())]);
        assert_eq!(sub.apply(&f), parse("((q & r) | (q & r))", &s).unwrap());

        let id = Substitution::new();
        assert_eq!(id.apply(&f), f);

        let sub2 = Substitution::from_pairs([("p", Formula::var("q"))]);
        assert_eq!(sub2.apply(&Formula::var("r")), Formula::var("r"));
    }

    #[test]
    fn word_connective_round_trip() {
        let s = Signature::new([("Box", 1), ("&", 2)]).unwrap();
        let f = parse("Box (p & Box q)", &s).unwrap();
        assert_eq!(f.to_string(), "Box (p & Box q)");
        assert_eq!(parse(&f.to_string(), &s).unwrap(), f);
    }
}
