//! System definitions and their line-oriented text format:
//!
//! ```text
//! system P1
//! note First Painlevé equation
//! var q q weight 2
//! var p p weight 3
//! var z z weight 4
//! ham H degree 6 = 1/2*p^2 - 2*q^3 - z*q
//! end
//! ```
//!
//! `#` starts a comment. Roles are `q`, `p`, `z` and `param`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::parser::{parse_ast, parse_ast_at};
use crate::algebra::{MultiPoly, Vars};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Q,
    P,
    Z,
    Param,
}

impl Role {
    pub fn keyword(self) -> &'static str {
        match self {
            Role::Q => "q",
            Role::P => "p",
            Role::Z => "z",
            Role::Param => "param",
        }
    }

    fn parse(s: &str) -> Option<Role> {
        Some(match s {
            "q" => Role::Q,
            "p" => Role::P,
            "z" => Role::Z,
            "param" => Role::Param,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarDef {
    pub name: String,
    pub role: Role,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamDef {
    pub name: String,
    pub expr: String,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDef {
    pub id: String,
    pub variables: Vec<VarDef>,
    pub hamiltonians: Vec<HamDef>,
    pub notes: String,
}

/// Pairing index of a coordinate/momentum name: its trailing digits, or 1
/// when there are none (`q` pairs with `p`, `y2` with `x2`).
pub fn pair_index(name: &str) -> usize {
    let digits: String = name
        .chars()
        .rev()
        .take_while(char::is_ascii_digit)
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    digits.parse().unwrap_or(1)
}

impl SystemDef {
    pub fn var(&self, name: &str) -> Option<&VarDef> {
        self.variables.iter().find(|v| v.name == name)
    }

    fn of_role(&self, role: Role) -> Vec<&VarDef> {
        let mut v: Vec<&VarDef> = self.variables.iter().filter(|v| v.role == role).collect();
        if role != Role::Param {
            v.sort_by_key(|d| pair_index(&d.name));
        }
        v
    }

    /// Variables in canonical order: coordinates and momenta by pairing
    /// index, then independent variables by index, then parameters in
    /// declaration order.
    pub fn ordered_vars(&self) -> Vec<&VarDef> {
        [Role::Q, Role::P, Role::Z, Role::Param]
            .into_iter()
            .flat_map(|r| self.of_role(r))
            .collect()
    }

    pub fn vars(&self) -> Vars {
        let names: Vec<&str> = self.ordered_vars().iter().map(|v| v.name.as_str()).collect();
        Vars::new(&names)
    }

    pub fn hamiltonian_polys(&self, vars: &Vars) -> Result<Vec<MultiPoly>> {
        self.hamiltonians
            .iter()
            .map(|h| parse_ast(&h.expr)?.to_poly(vars))
            .collect()
    }

    /// Checks names, roles and q/p pairing, and that every Hamiltonian parses
    /// over the declared variables.
    pub fn validate(&self) -> Result<()> {
        if self.variables.is_empty() {
            return Err(Error::InvalidSystem(format!("`{}`: no variables", self.id)));
        }
        let mut seen = BTreeSet::new();
        for v in &self.variables {
            if !valid_name(&v.name) {
                return Err(Error::InvalidSystem(format!(
                    "`{}`: invalid variable name `{}`",
                    self.id, v.name
                )));
            }
            if !seen.insert(v.name.as_str()) {
                return Err(Error::InvalidSystem(format!(
                    "`{}`: duplicate variable `{}`",
                    self.id, v.name
                )));
            }
        }
        let qs: BTreeMap<usize, &str> = self
            .of_role(Role::Q)
            .iter()
            .map(|v| (pair_index(&v.name), v.name.as_str()))
            .collect();
        let ps: BTreeMap<usize, &str> = self
            .of_role(Role::P)
            .iter()
            .map(|v| (pair_index(&v.name), v.name.as_str()))
            .collect();
        if qs.len() != self.of_role(Role::Q).len() || ps.len() != self.of_role(Role::P).len() {
            return Err(Error::InvalidSystem(format!(
                "`{}`: two coordinates or momenta share a pairing index",
                self.id
            )));
        }
        if qs.is_empty() {
            return Err(Error::InvalidSystem(format!("`{}`: no coordinates", self.id)));
        }
        for (i, q) in &qs {
            if !ps.contains_key(i) {
                return Err(Error::InvalidSystem(format!(
                    "`{}`: unpaired coordinate `{q}`",
                    self.id
                )));
            }
        }
        for (i, p) in &ps {
            if !qs.contains_key(i) {
                return Err(Error::InvalidSystem(format!(
                    "`{}`: unpaired momentum `{p}`",
                    self.id
                )));
            }
        }
        if self.hamiltonians.is_empty() {
            return Err(Error::InvalidSystem(format!("`{}`: no Hamiltonians", self.id)));
        }
        let vars = self.vars();
        self.hamiltonian_polys(&vars)?;
        Ok(())
    }

    /// Serializes into the text format read by [`parse_systems`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "system {}", self.id).unwrap();
        for line in self.notes.lines() {
            writeln!(s, "note {line}").unwrap();
        }
        for v in &self.variables {
            writeln!(s, "var {} {} weight {}", v.name, v.role.keyword(), v.weight).unwrap();
        }
        for h in &self.hamiltonians {
            writeln!(s, "ham {} degree {} = {}", h.name, h.degree, h.expr).unwrap();
        }
        s.push_str("end\n");
        s
    }

    /// Autonomous reduction: drops independent variables, parameters and
    /// every monomial that involves them.
    pub fn autonomous(&self, id: &str) -> Result<SystemDef> {
        let vars = self.vars();
        let keep: Vec<bool> = self
            .ordered_vars()
            .iter()
            .map(|v| matches!(v.role, Role::Q | Role::P))
            .collect();
        let kept: Vec<VarDef> = self
            .variables
            .iter()
            .filter(|v| matches!(v.role, Role::Q | Role::P))
            .cloned()
            .collect();
        let mut out = SystemDef {
            id: id.to_string(),
            variables: kept,
            hamiltonians: Vec::new(),
            notes: format!("autonomous part of {}", self.id),
        };
        let small = out.vars();
        let map: Vec<Option<usize>> = vars.names().iter().map(|n| small.index_of(n)).collect();
        for (h, poly) in self.hamiltonians.iter().zip(self.hamiltonian_polys(&vars)?) {
            let pruned = poly.filter_terms(|m| m.0.iter().zip(&keep).all(|(&e, &k)| k || e == 0));
            out.hamiltonians.push(HamDef {
                name: h.name.clone(),
                expr: pruned.rebase(&small, &map)?.to_string(),
                degree: h.degree,
            });
        }
        Ok(out)
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Parses every `system ... end` block in `src`.
pub fn parse_systems(src: &str) -> Result<Vec<SystemDef>> {
    let mut out = Vec::new();
    let mut current: Option<SystemDef> = None;
    for (ln, raw) in src.lines().enumerate() {
        let line_no = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - trimmed.len();
        let (kw, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let words: Vec<&str> = rest.split_whitespace().collect();
        match kw {
            "system" => {
                if current.is_some() {
                    return Err(syntax(line_no, 1, "nested `system` (missing `end`)"));
                }
                let [id] = words[..] else {
                    return Err(syntax(line_no, 1, "expected `system <id>`"));
                };
                current = Some(SystemDef {
                    id: id.to_string(),
                    variables: Vec::new(),
                    hamiltonians: Vec::new(),
                    notes: String::new(),
                });
            }
            "end" => {
                let sys = current
                    .take()
                    .ok_or_else(|| syntax(line_no, 1, "`end` without `system`"))?;
                sys.validate()?;
                out.push(sys);
            }
            "note" => {
                let sys = current
                    .as_mut()
                    .ok_or_else(|| syntax(line_no, 1, "`note` outside a system block"))?;
                if !sys.notes.is_empty() {
                    sys.notes.push('\n');
                }
                sys.notes.push_str(rest.trim());
            }
            "var" => {
                let sys = current
                    .as_mut()
                    .ok_or_else(|| syntax(line_no, 1, "`var` outside a system block"))?;
                let [name, role, "weight", w] = words[..] else {
                    return Err(syntax(
                        line_no,
                        1,
                        "expected `var <name> <q|p|z|param> weight <int>`",
                    ));
                };
                let role =
                    Role::parse(role).ok_or_else(|| syntax(line_no, 1, format!("unknown role `{role}`")))?;
                let weight = w
                    .parse()
                    .map_err(|_| syntax(line_no, 1, format!("weight `{w}` is not an integer")))?;
                sys.variables.push(VarDef {
                    name: name.to_string(),
                    role,
                    weight,
                });
            }
            "ham" => {
                let sys = current
                    .as_mut()
                    .ok_or_else(|| syntax(line_no, 1, "`ham` outside a system block"))?;
                let Some(eq) = content.find('=') else {
                    return Err(syntax(line_no, 1, "expected `ham <name> degree <int> = <expr>`"));
                };
                let head: Vec<&str> = content[..eq].split_whitespace().collect();
                let ["ham", name, "degree", d] = head[..] else {
                    return Err(syntax(line_no, 1, "expected `ham <name> degree <int> = <expr>`"));
                };
                let degree = d
                    .parse()
                    .map_err(|_| syntax(line_no, 1, format!("degree `{d}` is not an integer")))?;
                let expr = &content[eq + 1..];
                parse_ast_at(expr, line_no, eq + 2)?;
                sys.hamiltonians.push(HamDef {
                    name: name.to_string(),
                    expr: expr.trim().to_string(),
                    degree,
                });
            }
            other => {
                return Err(syntax(line_no, indent + 1, format!("unknown keyword `{other}`")));
            }
        }
    }
    if current.is_some() {
        return Err(Error::InvalidSystem("missing `end`".into()));
    }
    Ok(out)
}

/// Parses text holding exactly one system block.
pub fn parse_system(src: &str) -> Result<SystemDef> {
    let mut all = parse_systems(src)?;
    match all.len() {
        0 => Err(Error::InvalidSystem(
            "no variables: input holds no system block".into(),
        )),
        1 => Ok(all.remove(0)),
        n => Err(Error::InvalidSystem(format!(
            "expected one system block, found {n}"
        ))),
    }
}

pub fn load_system_file(path: impl AsRef<Path>) -> Result<SystemDef> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_system(&src)
}
