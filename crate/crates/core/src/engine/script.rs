//! Line-oriented proof-script grammar.
//!
//! Arguments are whitespace separated; an argument that is an expression
//! must not contain spaces (`a-4`, `binom(a+3,3)`). `let` and `when`
//! conditions take the rest of the line.

use std::collections::BTreeMap;

use super::graph::{FactTag, Relation};
use super::ScriptError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(i64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

impl Expr {
    pub fn eval(&self, env: &BTreeMap<String, i64>) -> Result<i64, String> {
        Ok(match self {
            Expr::Num(n) => *n,
            Expr::Var(v) => *env.get(v).ok_or_else(|| format!("unbound name `{v}`"))?,
            Expr::Neg(e) => -e.eval(env)?,
            Expr::Add(a, b) => a.eval(env)? + b.eval(env)?,
            Expr::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            Expr::Mul(a, b) => a.eval(env)? * b.eval(env)?,
            Expr::Call(f, args) => {
                let v: Vec<i64> = args.iter().map(|a| a.eval(env)).collect::<Result<_, _>>()?;
                match (f.as_str(), v.as_slice()) {
                    ("binom", [n, k]) => crate::chern::binomial(*n, *k),
                    ("min", [x, rest @ ..]) => rest.iter().fold(*x, |m, y| m.min(*y)),
                    ("max", [x, rest @ ..]) => rest.iter().fold(*x, |m, y| m.max(*y)),
                    _ => return Err(format!("unknown function {f}/{}", v.len())),
                }
            }
        })
    }

    pub fn parse(src: &str) -> Result<Expr, String> {
        let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = ExprParser { s: &chars, i: 0 };
        let e = p.sum()?;
        if p.i != chars.len() {
            return Err(format!("trailing input in `{src}`"));
        }
        Ok(e)
    }
}

struct ExprParser<'a> {
    s: &'a [char],
    i: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<char> {
        self.s.get(self.i).copied()
    }

    fn sum(&mut self) -> Result<Expr, String> {
        let mut lhs = self.product()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.i += 1;
            let rhs = self.product()?;
            lhs = if c == '+' { Expr::Add(Box::new(lhs), Box::new(rhs)) } else { Expr::Sub(Box::new(lhs), Box::new(rhs)) };
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, String> {
        let mut lhs = self.unary()?;
        while self.peek() == Some('*') {
            self.i += 1;
            let rhs = self.unary()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, String> {
        if self.peek() == Some('-') {
            self.i += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, String> {
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.i;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.i += 1;
                }
                let text: String = self.s[start..self.i].iter().collect();
                text.parse().map(Expr::Num).map_err(|e| format!("{text}: {e}"))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.i;
                while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                    self.i += 1;
                }
                let name: String = self.s[start..self.i].iter().collect();
                if self.peek() == Some('(') {
                    self.i += 1;
                    let mut args = vec![self.sum()?];
                    while self.peek() == Some(',') {
                        self.i += 1;
                        args.push(self.sum()?);
                    }
                    self.expect(')')?;
                    Ok(Expr::Call(name, args))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            other => Err(format!("unexpected {other:?} in expression")),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        if self.peek() == Some(c) {
            self.i += 1;
            Ok(())
        } else {
            Err(format!("expected `{c}`"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    fn parse(s: &str) -> Option<Cmp> {
        Some(match s {
            "=" | "==" => Cmp::Eq,
            "!=" => Cmp::Ne,
            "<" => Cmp::Lt,
            "<=" => Cmp::Le,
            ">" => Cmp::Gt,
            ">=" => Cmp::Ge,
            _ => return None,
        })
    }

    pub fn holds(self, a: i64, b: i64) -> bool {
        match self {
            Cmp::Eq => a == b,
            Cmp::Ne => a != b,
            Cmp::Lt => a < b,
            Cmp::Le => a <= b,
            Cmp::Gt => a > b,
            Cmp::Ge => a >= b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeSpec {
    P3,
    Quadric(Expr, Expr),
    Lines(Expr),
    Conics(Expr),
    Points(Expr),
    Ideal(String),
    Structure(String),
    PointSet(String),
    Sheaf,
    /// Locally free; optionally a Serre extension `0 → L → F → I_Y(shift) → 0`.
    Bundle { serre: Option<(String, Expr)> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChernSpec {
    Classes([Expr; 4]),
    Tensor((String, Expr), (String, Expr)),
    Sym2(String, Expr),
    Wedge2(String, Expr),
}

pub type Part = (String, Expr);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    Param(Vec<String>),
    Let(String, Expr),
    Config { name: String, kind: String, args: Vec<Expr> },
    Node { id: String, spec: NodeSpec },
    Chern { id: String, spec: ChernSpec },
    Dual { id: String, shift: Expr },
    Sum { id: String, parts: Vec<Part> },
    Triple { name: String, parts: [Part; 3] },
    Twist { name: String, t: Expr },
    Annotate { tag: FactTag, triple: Part, connecting: u8 },
    Diagram { name: String, bottom: Part, left: Part, middle: Part, right: Part },
    Compose { whole: Part, first: Part, second: Part },
    Fact { tag: FactTag, degree: u8, id: String, t: Expr, value: Option<(Relation, Expr)> },
    Instance { id: String, t: Expr },
    Assert { degree: u8, id: String, t: Expr, relation: Relation, value: Expr },
    When { lhs: Expr, cmp: Cmp, rhs: Expr, body: Box<StmtKind> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stmt {
    pub line: usize,
    pub text: String,
    pub kind: StmtKind,
}

pub fn parse_script(src: &str) -> Result<Vec<Stmt>, ScriptError> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let kind = parse_stmt(text).map_err(|message| ScriptError::Parse { line, message })?;
        out.push(Stmt { line, text: text.to_string(), kind });
    }
    Ok(out)
}

fn expr(tok: Option<&&str>) -> Result<Expr, String> {
    Expr::parse(tok.ok_or("missing argument")?)
}

fn name(tok: Option<&&str>) -> Result<String, String> {
    let t = tok.ok_or("missing name")?;
    if t.chars().all(|c| c.is_alphanumeric() || "_.'".contains(c)) {
        Ok(t.to_string())
    } else {
        Err(format!("bad name `{t}`"))
    }
}

fn degree(tok: Option<&&str>) -> Result<u8, String> {
    let t = tok.ok_or("missing degree")?;
    match t.strip_prefix('h').and_then(|d| d.parse::<u8>().ok()) {
        Some(d) if d <= 3 => Ok(d),
        _ => Err(format!("expected h0..h3, got `{t}`")),
    }
}

fn part(toks: &[&str], at: usize) -> Result<Part, String> {
    Ok((name(toks.get(at))?, expr(toks.get(at + 1))?))
}

fn relation(tok: Option<&&str>) -> Result<Relation, String> {
    match tok.copied() {
        Some("=") => Ok(Relation::Eq),
        Some("<=") => Ok(Relation::Le),
        other => Err(format!("expected `=` or `<=`, got {other:?}")),
    }
}

fn arity(toks: &[&str], n: usize) -> Result<(), String> {
    if toks.len() == n {
        Ok(())
    } else {
        Err(format!("`{}` takes {} arguments, got {}", toks[0], n - 1, toks.len() - 1))
    }
}

fn parse_stmt(text: &str) -> Result<StmtKind, String> {
    if let Some(rest) = text.strip_prefix("when ") {
        let (cond, body) = rest.split_once(':').ok_or("`when` needs `:`")?;
        let ct: Vec<&str> = cond.split_whitespace().collect();
        let pos = ct.iter().position(|t| Cmp::parse(t).is_some()).ok_or("`when` needs a comparison")?;
        return Ok(StmtKind::When {
            lhs: Expr::parse(&ct[..pos].join(""))?,
            cmp: Cmp::parse(ct[pos]).unwrap(),
            rhs: Expr::parse(&ct[pos + 1..].join(""))?,
            body: Box::new(parse_stmt(body.trim())?),
        });
    }
    let toks: Vec<&str> = text.split_whitespace().collect();
    match toks[0] {
        "param" => Ok(StmtKind::Param(toks[1..].iter().map(|t| name(Some(t))).collect::<Result<_, _>>()?)),
        "let" => {
            let (lhs, rhs) = text[3..].split_once('=').ok_or("`let` needs `=`")?;
            Ok(StmtKind::Let(name(Some(&lhs.trim()))?, Expr::parse(rhs)?))
        }
        "config" => Ok(StmtKind::Config {
            name: name(toks.get(1))?,
            kind: toks.get(2).ok_or("missing config kind")?.to_string(),
            args: toks[3..].iter().map(|t| Expr::parse(t)).collect::<Result<_, _>>()?,
        }),
        "node" => {
            let id = name(toks.get(1))?;
            let kind = *toks.get(2).ok_or("missing node kind")?;
            let spec = match kind {
                "p3" => NodeSpec::P3,
                "quadric" => NodeSpec::Quadric(expr(toks.get(3))?, expr(toks.get(4))?),
                "lines" => NodeSpec::Lines(expr(toks.get(3))?),
                "conics" => NodeSpec::Conics(expr(toks.get(3))?),
                "points" => NodeSpec::Points(expr(toks.get(3))?),
                "ideal" => NodeSpec::Ideal(name(toks.get(3))?),
                "structure" => NodeSpec::Structure(name(toks.get(3))?),
                "pointset" => NodeSpec::PointSet(name(toks.get(3))?),
                "sheaf" => NodeSpec::Sheaf,
                "bundle" => match toks.get(3).copied() {
                    None => NodeSpec::Bundle { serre: None },
                    Some("serre") => NodeSpec::Bundle { serre: Some((name(toks.get(4))?, expr(toks.get(5))?)) },
                    Some(other) => return Err(format!("unexpected `{other}` after bundle")),
                },
                other => return Err(format!("unknown node kind `{other}`")),
            };
            Ok(StmtKind::Node { id, spec })
        }
        "chern" => {
            let id = name(toks.get(1))?;
            let spec = match toks.get(2).copied() {
                Some("tensor") => {
                    arity(&toks, 7)?;
                    ChernSpec::Tensor(part(&toks, 3)?, part(&toks, 5)?)
                }
                Some("sym2") => {
                    arity(&toks, 5)?;
                    ChernSpec::Sym2(name(toks.get(3))?, expr(toks.get(4))?)
                }
                Some("wedge2") => {
                    arity(&toks, 5)?;
                    ChernSpec::Wedge2(name(toks.get(3))?, expr(toks.get(4))?)
                }
                _ => {
                    arity(&toks, 6)?;
                    ChernSpec::Classes([expr(toks.get(2))?, expr(toks.get(3))?, expr(toks.get(4))?, expr(toks.get(5))?])
                }
            };
            Ok(StmtKind::Chern { id, spec })
        }
        "dual" => {
            arity(&toks, 3)?;
            Ok(StmtKind::Dual { id: name(toks.get(1))?, shift: expr(toks.get(2))? })
        }
        "sum" => {
            if toks.len() < 4 || !toks.len().is_multiple_of(2) {
                return Err("`sum <id> X tX Y tY ...`".into());
            }
            let parts = (2..toks.len()).step_by(2).map(|i| part(&toks, i)).collect::<Result<_, _>>()?;
            Ok(StmtKind::Sum { id: name(toks.get(1))?, parts })
        }
        "triple" => {
            arity(&toks, 8)?;
            Ok(StmtKind::Triple { name: name(toks.get(1))?, parts: [part(&toks, 2)?, part(&toks, 4)?, part(&toks, 6)?] })
        }
        "twist" => {
            arity(&toks, 3)?;
            Ok(StmtKind::Twist { name: name(toks.get(1))?, t: expr(toks.get(2))? })
        }
        "annotate" => {
            let tag: FactTag = toks.get(1).ok_or("missing tag")?.parse()?;
            let triple = part(&toks, 2)?;
            let connecting = match toks.get(4).copied() {
                Some("h0-surjective") if toks.len() == 5 => 0,
                Some("connecting-zero") if toks.len() == 6 => match toks[5].parse::<u8>() {
                    Ok(i) if i <= 2 => i,
                    _ => return Err("connecting-zero takes 0, 1 or 2".into()),
                },
                _ => return Err("annotate <TAG> <triple> <t> h0-surjective | connecting-zero <i>".into()),
            };
            Ok(StmtKind::Annotate { tag, triple, connecting })
        }
        "diagram" => {
            arity(&toks, 10)?;
            Ok(StmtKind::Diagram {
                name: name(toks.get(1))?,
                bottom: part(&toks, 2)?,
                left: part(&toks, 4)?,
                middle: part(&toks, 6)?,
                right: part(&toks, 8)?,
            })
        }
        "compose" => {
            arity(&toks, 7)?;
            Ok(StmtKind::Compose { whole: part(&toks, 1)?, first: part(&toks, 3)?, second: part(&toks, 5)? })
        }
        "fact" => {
            let tag: FactTag = toks.get(1).ok_or("missing tag")?.parse()?;
            let value = match toks.len() {
                5 if tag == FactTag::Oracle => None,
                7 => Some((relation(toks.get(5))?, expr(toks.get(6))?)),
                _ => return Err("fact <TAG> h<i> <id> <t> (= | <=) <v>".into()),
            };
            Ok(StmtKind::Fact { tag, degree: degree(toks.get(2))?, id: name(toks.get(3))?, t: expr(toks.get(4))?, value })
        }
        "instance" => {
            arity(&toks, 3)?;
            Ok(StmtKind::Instance { id: name(toks.get(1))?, t: expr(toks.get(2))? })
        }
        "assert" => {
            arity(&toks, 6)?;
            Ok(StmtKind::Assert {
                degree: degree(toks.get(1))?,
                id: name(toks.get(2))?,
                t: expr(toks.get(3))?,
                relation: relation(toks.get(4))?,
                value: expr(toks.get(5))?,
            })
        }
        other => Err(format!("unknown command `{other}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions() {
        let env: BTreeMap<String, i64> = [("a".to_string(), 5), ("m".to_string(), 1)].into();
        assert_eq!(Expr::parse("a-4").unwrap().eval(&env), Ok(1));
        assert_eq!(Expr::parse("-a-4+1").unwrap().eval(&env), Ok(-8));
        assert_eq!(Expr::parse("2*(m+1)").unwrap().eval(&env), Ok(4));
        assert_eq!(Expr::parse("binom(a+3,3)").unwrap().eval(&env), Ok(56));
        assert_eq!(Expr::parse("max(0,m-a,2)").unwrap().eval(&env), Ok(2));
        assert!(Expr::parse("a+").is_err());
        assert!(Expr::parse("q").unwrap().eval(&env).is_err());
    }

    #[test]
    fn statements() {
        let s = parse_script("# c\nnode E1 bundle serre Y 1\nassert h1 E1 a = 0\nwhen a >= 12 : fact ASSUMED h2 E1 -a = 0\n").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].line, 2);
        assert!(matches!(s[2].kind, StmtKind::When { cmp: Cmp::Ge, .. }));
        assert!(parse_script("assert h4 E 0 = 0").is_err());
        assert!(parse_script("frobnicate").is_err());
        assert!(parse_script("annotate ASSUMED T 0 h0-surjective").is_ok());
    }
}
