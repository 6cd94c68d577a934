//! The logic-definition file format: a signature block, an optional
//! variables block, and exactly one backend block (rules | matrix |
//! extensional). Lines starting with `#` are comments.

use std::fmt;

use relatio::{
    parse, parse_pattern, Formula, FormulaSet, Matrix, RuleSchema, Signature,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{path}:{line}:{column}: {message}")]
pub struct LogicFileError {
    pub path: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug)]
pub enum BackendDef {
    Rules(Vec<RuleSchema>),
    Matrix(Matrix),
    Extensional {
        universe: Vec<Formula>,
        pairs: Vec<(FormulaSet, Formula)>,
    },
}

impl fmt::Display for BackendDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackendDef::Rules(r) => write!(f, "rules ({} schemata)", r.len()),
            BackendDef::Matrix(m) => write!(f, "matrix ({})", m.name()),
            BackendDef::Extensional { universe, pairs } => {
                write!(f, "extensional ({} formulas, {} pairs)", universe.len(), pairs.len())
            }
        }
    }
}

/// A parsed logic-definition file.
#[derive(Clone, Debug)]
pub struct LogicDefinition {
    pub name: String,
    pub signature: Signature,
    pub variables: Vec<String>,
    pub backend: BackendDef,
}

struct Cursor<'a> {
    path: &'a str,
    line_no: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn err(&self, fragment: &str, message: String) -> LogicFileError {
        let column = self.text.find(fragment).map_or(1, |i| i + 1);
        LogicFileError {
            path: self.path.to_string(),
            line: self.line_no,
            column,
            message,
        }
    }
}

enum Block {
    None,
    Signature,
    Variables,
    Rules,
    Matrix,
    Extensional,
}

pub fn parse_logic_file(path: &str, text: &str) -> Result<LogicDefinition, LogicFileError> {
    let name = std::path::Path::new(path)
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "logic".to_string());

    let mut sig_decls: Vec<(String, usize)> = Vec::new();
    let mut saw_signature = false;
    let mut variables: Vec<String> = Vec::new();
    let mut rule_lines: Vec<(usize, String)> = Vec::new();
    let mut matrix_lines: Vec<(usize, String)> = Vec::new();
    let mut ext_lines: Vec<(usize, String)> = Vec::new();
    let mut backend_kinds: Vec<&'static str> = Vec::new();

    let mut block = Block::None;
    for (idx, raw) in text.lines().enumerate() {
        let cur = Cursor {
            path,
            line_no: idx + 1,
            text: raw,
        };
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match block {
            Block::None => match line {
                "signature" => {
                    saw_signature = true;
                    block = Block::Signature;
                }
                "variables" => block = Block::Variables,
                "rules" => {
                    backena_blocks += 1;
                    block = Block::Rules;
                }
                "matrix" => {
                    backena_blocks += 1;
                    block = Block::Matrix;
                }
                "extensional" => {
                    backena_blocks += 1;
                    block = Block::Extensional;
                }
                other => {
                    return Err(cur.err(
                        other,
                        format!("expected a block keyword (signature, variables, rules, matrix, extensional), found `{other}`"),
                    ));
                }
            },
            Block::Signature => {
                if line == "end" {
                    block = Block::None;
                    continue;
                }
                let mut words = line.split_whitespace();
                let sym = words.next().unwrap();
                let arity: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| {
                        cur.err(sym, format!("connective `{sym}` needs a numeric arity"))
                    })?;
                if words.next().is_some() {
                    return Err(cur.err(sym, "too many fields on signature line".to_string()));
                }
                sig_decls.push((sym.to_string(), arity));
            }
            Block::Variables => {
                if line == "end" {
                    block = Block::None;
                    continue;
                }
                for word in line.split_whitespace() {
                    variables.push(word.to_string());
                }
            }
            Block::Rules => {
                if line == "end" {
                    block = Block::None;
                    continue;
                }
                rule_lines.push((idx + 1, line.to_string()));
            }
            Block::Matrix => {
                if line == "end" {
                    block = Block::None;
                    continue;
                }
                matrix_lines.push((idx + 1, line.to_string()));
            }
            Block::Extensional => {
                if line == "end" {
                    block = Block::None;
                    continue;
                }
                ext_lines.push((idx + 1, line.to_string()));
            }
        }
    }
    if !matches!(block, Block::None) {
        return Err(LogicFileError {
            path: path.to_string(),
            line: text.lines().count(),
            column: 1,
            message: "unterminated block: missing `end`".to_string(),
        });
    }
    if !saw_signature {
        return Err(LogicFileError {
            path: path.to_string(),
            line: 1,
            column: 1,
            message: "missing signature block".to_string(),
        });
    }
    if backena_blocks != 1 {
        return Err(LogicFileError {
            path: path.to_string(),
            line: 1,
            column: 1,
            message: format!(
                "expected exactly one backend block (rules | matrix | extensional), found {backena_blocks}"
            ),
        });
    }

    let signature = Signature::new(sig_decls.iter().map(|(s, a)| (s.clone(), *a))).map_err(
        |e| LogicFileError {
            path: path.to_string(),
            line: 1,
            column: 1,
            message: e.to_string(),
        },
    )?;

    for var in &variables {
        if parse(var, &signature) != Ok(Formula::var(var)) {
            return Err(LogicFileError {
                path: path.to_string(),
                line: 1,
                column: 1,
                message: format!("`{var}` is not a variable token"),
            });
        }
    }

    let backend = if !rule_lines.is_empty() || matches!(count_nonempty(&rule_lines, &matrix_lines, &ext_lines), 0) {
        BackendDef::Rules(parse_rules(path, &signature, &rule_lines)?)
    } else if !matrix_lines.is_empty() {
        BackendDef::Matrix(parse_matrix(path, &name, &signature, &matrix_lines)?)
    } else {
        BackendDef::Extensional(parse_extensional(path, &signature, &ext_lines)?).into_backend()
    };

    Ok(LogicDefinition {
        name,
        signature,
        variables,
        backend,
    })
}

fn count_nonempty(
    rules: &[(usize, String)],
    matrix: &[(usize, String)],
    ext: &[(usize, String)],
) -> usize {
    usize::from(!rules.is_empty()) + usize::from(!matrix.is_empty()) + usize::from(!ext.is_empty())
}

struct ExtParts {
    universe: Vec<Formula>,
    pairs: Vec<(FormulaSet, Formula)>,
}

impl ExtParts {
    fn into_backend(self) -> BackendDef {
        BackendDef::Extensional {
            universe: self.universe,
            pairs: self.pairs,
        }
    }
}

trait IntoBackend {
    fn into_backend(self) -> BackendDef;
}

impl IntoBackend for ExtParts {
    fn into_backend(self) -> BackendDef {
        BackendDef::Extensional {
            universe: self.universe,
            pairs: self.pairs,
        }
    }
}

fn file_err(path: &str, line: usize, column: usize, message: String) -> LogicFileError {
    LogicFileError {
        path: path.to_string(),
        line,
        column,
        message,
    }
}

fn parse_rules(
    path: &str,
    sig: &Signature,
    lines: &[(usize, String)],
) -> Result<Vec<RuleSchema>, LogicFileError> {
    let mut out = Vec::new();
    for (line_no, line) in lines {
        let colon = line.find(':').ok_or_else(|| {
            file_err(path, *line_no, 1, "rule line needs `name: premises |- conclusion`".to_string())
        })?;
        let name = line[..colon].trim();
        if name.is_empty() {
            return Err(file_err(path, *line_no, 1, "rule needs a name".to_string()));
        }
        let body = &line[colon + 1..];
        let turnstiles: Vec<usize> = body.match_indices(" |- ").map(|(i, _)| i).collect();
        let sep = match turnstiles.as_slice() {
            [one] => *one,
            [] if body.trim_start().starts_with("|-") => {
                // axiom written as `name: |- conclusion`
                body.find("|-").unwrap()
            }
            [] => {
                return Err(file_err(
                    path,
                    *line_no,
                    colon + 2,
                    "rule line needs a ` |- ` separator".to_string(),
                ));
            }
            _ => {
                return Err(file_err(
                    path,
                    *line_no,
                    colon + 2,
                    "rule line has more than one ` |- ` separator".to_string(),
                ));
            }
        };
        let premise_text = &body[..sep];
        let conclusion_text = &body[sep..].trim_start().trim_start_matches("|-");
        let mut premises = Vec::new();
        for chunk in premise_text.split(';') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let pattern = parse_pattern(chunk, sig).map_err(|e| {
                let column = line.find(chunk).map_or(1, |i| i + 1);
                file_err(path, *line_no, column, format!("bad premise pattern: {e}"))
            })?;
            premises.push(pattern);
        }
        let conclusion_text = conclusion_text.trim();
        let conclusion = parse_pattern(conclusion_text, sig).map_err(|e| {
            let column = line.find(conclusion_text).map_or(1, |i| i + 1);
            file_err(path, *line_no, column, format!("bad conclusion pattern: {e}"))
        })?;
        out.push(RuleSchema::new(name, premises, conclusion));
    }
    Ok(out)
}

fn parse_matrix(
    path: &str,
    name: &str,
    sig: &Signature,
    lines: &[(usize, String)],
) -> Result<Matrix, LogicFileError> {
    let mut values: Option<Vec<String>> = None;
    let mut designated: Option<Vec<String>> = None;
    let mut table_lines: Vec<(usize, String)> = Vec::new();
    for (line_no, line) in lines {
        let mut words = line.split_whitespace();
        match words.next() {
            Some("values") => values = Some(words.map(str::to_string).collect()),
            Some("designated") => designated = Some(words.map(str::to_string).collect()),
            Some("table") => table_lines.push((*line_no, line.clone())),
            Some(other) => {
                return Err(file_err(
                    path,
                    *line_no,
                    1,
                    format!("unknown matrix field `{other}` (expected values, designated, table)"),
                ));
            }
            None => {}
        }
    }
    let values = values.ok_or_else(|| file_err(path, 1, 1, "matrix needs a values line".to_string()))?;
    let designated =
        designated.ok_or_else(|| file_err(path, 1, 1, "matrix needs a designated line".to_string()))?;
    let value_refs: Vec<&str> = values.iter().map(String::as_str).collect();
    let designated_refs: Vec<&str> = designated.iter().map(String::as_str).collect();
    let mut matrix = Matrix::new(name, &value_refs, &designated_refs)
        .map_err(|e| file_err(path, 1, 1, e.to_string()))?;
    for (sym, arity) in sig.connectives() {
        matrix.declare_table(sym, arity);
    }
    for (line_no, line) in &table_lines {
        // table <sym> <in>... = <out>
        let rest = line.trim_start_matches("table").trim();
        let eq = rest.find('=').ok_or_else(|| {
            file_err(path, *line_no, 1, "table line needs `= <output>`".to_string())
        })?;
        let output = rest[eq + 1..].trim();
        let mut fields = rest[..eq].split_whitespace();
        let sym = fields
            .next()
            .ok_or_else(|| file_err(path, *line_no, 1, "table line needs a connective".to_string()))?;
        let inputs: Vec<&str> = fields.collect();
        matrix
            .set_entry(sym, &inputs, output)
            .map_err(|e| file_err(path, *line_no, 1, e.to_string()))?;
    }
    matrix
        .validate()
        .map_err(|e| file_err(path, 1, 1, e.to_string()))?;
    Ok(matrix)
}

fn parse_extensional(
    path: &str,
    sig: &Signature,
    lines: &[(usize, String)],
) -> Result<ExtParts, LogicFileError> {
    let mut universe = Vec::new();
    let mut pairs = Vec::new();
    for (line_no, line) in lines {
        if let Some(rest) = line.strip_prefix("universe") {
            for chunk in rest.split(';') {
                let chunk = chunk.trim();
                if chunk.is_empty() {
                    continue;
                }
                let f = parse(chunk, sig).map_err(|e| {
                    let column = line.find(chunk).map_or(1, |i| i + 1);
                    file_err(path, *line_no, column, format!("bad universe formula: {e}"))
                })?;
                universe.push(f);
            }
        } else if let Some(rest) = line.strip_prefix("pair") {
            let sep = rest.find("|-").ok_or_else(|| {
                file_err(path, *line_no, 1, "pair line needs `|-`".to_string())
            })?;
            let mut delta = FormulaSet::new();
            for chunk in rest[..sep].split(';') {
                let chunk = chunk.trim();
                if chunk.is_empty() {
                    continue;
                }
                let f = parse(chunk, sig).map_err(|e| {
                    let column = line.find(chunk).map_or(1, |i| i + 1);
                    file_err(path, *line_no, column, format!("bad premise formula: {e}"))
                })?;
                delta.insert(f);
            }
            let goal_text = rest[sep + 2..].trim();
            let alpha = parse(goal_text, sig).map_err(|e| {
                let column = line.find(goal_text).map_or(1, |i| i + 1);
                file_err(path, *line_no, column, format!("bad conclusion formula: {e}"))
            })?;
            pairs.push((delta, alpha));
        } else {
            return Err(file_err(
                path,
                *line_no,
                1,
                "extensional lines start with `universe` or `pair`".to_string(),
            ));
        }
    }
    Ok(ExtParts { universe, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rule_logic() {
        let text = "\
# a two-rule system
signature
  & 2
  | 2
end
variables
  p q
end
rules
  r1: (?A & ?B) |- ?A
  r2: ?A |- (?A | ?B)
end
";
        let def = parse_logic_file("s1.logic", text).unwrap();
        assert_eq!(def.name, "s1");
        assert_eq!(def.variables, vec!["p", "q"]);
        match def.backend {
            BackendDef::Rules(rules) => {
                assert_eq!(rules.len(), 2);
                assert_eq!(rules[0].name.as_ref(), "r1");
            }
            other => panic!("expected rules, got {other}"),
        }
    }

    #[test]
    fn parses_axiom_rule() {
        let text = "signature\n | 2\nend\nrules\n ax: |- (?A | ?A)\nend\n";
        let def = parse_logic_file("ax.logic", text).unwrap();
        match def.backend {
            BackendDef::Rules(rules) => {
                assert!(rules[0].premises.is_empty());
            }
            other => panic!("expected rules, got {other}"),
        }
    }

    #[test]
    fn parses_matrix_logic() {
        let text = "\
signature
  ~ 1
end
variables
  p
end
matrix
  values 0 1
  designated 1
  table ~ 0 = 1
  table ~ 1 = 0
end
";
        let def = parse_logic_file("neg.logic", text).unwrap();
        assert!(matches!(def.backend, BackendDef::Matrix(_)));
    }

    #[test]
    fn parses_extensional_logic() {
        let text = "\
signature
  & 2
end
extensional
  universe p ; q ; (p & q)
  pair p |- p
  pair p ; q |- (p & q)
  pair |- p
end
";
        let def = parse_logic_file("ext.logic", text).unwrap();
        match def.backend {
            BackendDef::Extensional { universe, pairs } => {
                assert_eq!(universe.len(), 3);
                assert_eq!(pairs.len(), 3);
                assert!(pairs.iter().any(|(d, _)| d.is_empty()));
            }
            other => panic!("expected extensional, got {other}"),
        }
    }

    #[test]
    fn error_carries_line_and_column() {
        let text = "signature\n & 2\nend\nrules\n r1: (?A && ?B) |- ?A\nend\n";
        let err = parse_logic_file("bad.logic", text).unwrap_err();
        assert_eq!(err.line, 5);
        assert!(err.column > 1);
        assert!(err.message.contains("bad premise pattern"));
    }

    #[test]
    fn rejects_two_backends() {
        let text = "signature\n & 2\nend\nrules\n r1: ?A |- ?A\nend\nmatrix\n values 0 1\n designated 1\nend\n";
        let err = parse_logic_file("two.logic", text).unwrap_err();
        assert!(err.message.contains("exactly one backend"));
    }

    #[test]
    fn rejects_missing_end() {
        let text = "signature\n & 2\n";
        let err = parse_logic_file("open.logic", text).unwrap_err();
        assert!(err.message.contains("missing `end`"));
    }
}
