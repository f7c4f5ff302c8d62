//! Parser for the group-spec mini-language.
//!
//! ```text
//! spec     := chain
//! chain    := primary ( 'x' primary action? | 'x' chain )?
//! primary  := 'C(' int ')' | 'Q8' | 'Q16' | 'T*(' int ')' | 'O*(' int ')' | '(' chain ')'
//! action   := '[' ( letter '=' int ( ',' letter '=' int )* )? ']'
//! letter   := 'u' | 'v' | 'w'
//! ```
//!
//! `C(a)xH[...]` is the semidirect product `Z/a x| H`; any other `x` is a
//! direct product, associating to the right. Letters left out of an action
//! default to 1. Whitespace between tokens is ignored. Printing a parsed spec
//! with `Display` gives the canonical form.

use std::fmt;

use spaceform_core::derivations::Family;
use spaceform_core::spaceforms::{FamilyParams, GridCell};
use spaceform_core::{Action, GroupSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
    pub input: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "parse error at column {}: {}",
            self.position + 1,
            self.message
        )?;
        writeln!(f, "  {}", self.input)?;
        write!(f, "  {}^", " ".repeat(self.position))
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Self {
            input,
            bytes: input.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, position: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            position,
            message: message.into(),
            input: self.input.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.input[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(self.pos, format!("expected '{token}'")))
        }
    }

    fn int(&mut self) -> Result<(u64, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(start, "expected a non-negative integer"));
        }
        self.input[start..self.pos]
            .parse()
            .map(|v| (v, start))
            .map_err(|_| self.error(start, "integer out of range"))
    }

    fn height(&mut self) -> Result<u32, ParseError> {
        let (n, at) = self.int()?;
        if n == 0 {
            return Err(self.error(at, "tower height n must be at least 1"));
        }
        u32::try_from(n)
            .ok()
            .filter(|&n| n <= 40)
            .ok_or_else(|| self.error(at, "tower height too large"))
    }

    fn primary(&mut self) -> Result<GroupSpec, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.eat("C(") {
            let (m, at) = self.int()?;
            if m == 0 {
                return Err(self.error(at, "cyclic order must be at least 1"));
            }
            self.expect(")")?;
            Ok(GroupSpec::Cyclic(m))
        } else if self.eat("Q16") {
            Ok(GroupSpec::Q16)
        } else if self.eat("Q8") {
            Ok(GroupSpec::Q8)
        } else if self.eat("T*(") {
            let n = self.height()?;
            self.expect(")")?;
            Ok(GroupSpec::TStar(n))
        } else if self.eat("O*(") {
            let n = self.height()?;
            self.expect(")")?;
            Ok(GroupSpec::OStar(n))
        } else if self.eat("(") {
            let inner = self.chain()?;
            self.expect(")")?;
            Ok(inner)
        } else {
            Err(self.error(
                start,
                "unknown group family; expected C(m), Q8, Q16, T*(n), O*(n) or '('",
            ))
        }
    }

    fn action(&mut self, a: u64) -> Result<Action, ParseError> {
        self.expect("[")?;
        let mut values: [Option<u64>; 3] = [None; 3];
        if !self.eat("]") {
            loop {
                self.skip_ws();
                let at = self.pos;
                let slot = match self.bytes.get(self.pos) {
                    Some(b'u') => 0,
                    Some(b'v') => 1,
                    Some(b'w') => 2,
                    _ => return Err(self.error(at, "expected one of u, v, w")),
                };
                self.pos += 1;
                if values[slot].is_some() {
                    return Err(self.error(at, "action letter given twice"));
                }
                self.expect("=")?;
                values[slot] = Some(self.int()?.0);
                if self.eat("]") {
                    break;
                }
                self.expect(",")?;
            }
        }
        let [u, v, w] = values.map(|x| x.unwrap_or(1));
        Ok(Action::new(a, u, v, w))
    }

    fn chain(&mut self) -> Result<GroupSpec, ParseError> {
        let left_at = {
            self.skip_ws();
            self.pos
        };
        let left = self.primary()?;
        self.chain_from(left, left_at)
    }

    fn chain_from(&mut self, left: GroupSpec, left_at: usize) -> Result<GroupSpec, ParseError> {
        if !self.eat("x") {
            return Ok(left);
        }
        self.skip_ws();
        let right_at = self.pos;
        let right = self.primary()?;
        if self.peek() == Some(b'[') {
            let bracket = self.pos;
            let GroupSpec::Cyclic(a) = left else {
                return Err(self.error(left_at, "the normal factor of a semidirect product must be C(a)"));
            };
            let action = self.action(a)?;
            let spec = GroupSpec::semidirect(right, action);
            spec.validate()
                .map_err(|e| self.error(bracket, e.to_string()))?;
            if self.peek() == Some(b'x') {
                return Err(self.error(self.pos, "parenthesize a semidirect product before multiplying it"));
            }
            return Ok(spec);
        }
        let rest = self.chain_from(right, right_at)?;
        Ok(GroupSpec::direct(left, rest))
    }
}

pub fn parse_group_spec(text: &str) -> Result<GroupSpec, ParseError> {
    let mut p = Parser::new(text);
    let spec = p.chain()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error(p.pos, "unexpected trailing input"));
    }
    spec.validate().map_err(|e| p.error(0, e.to_string()))?;
    Ok(spec)
}

/// Reads a headline family `C(a)x(C(b)xT*(n))[u,v]` or `C(a)x(C(b)xO*(n))[u,w]`.
pub fn family_of(spec: &GroupSpec, k: u64) -> Result<FamilyParams, String> {
    let shape = || format!("{spec} is not of the form C(a)x(C(b)xT*(n))[..] or C(a)x(C(b)xO*(n))[..]");
    let GroupSpec::Semidirect {
        a,
        complement,
        action,
    } = spec
    else {
        return Err(shape());
    };
    let GroupSpec::Direct(l, r) = complement.as_ref() else {
        return Err(shape());
    };
    let GroupSpec::Cyclic(b) = l.as_ref() else {
        return Err(shape());
    };
    let (family, n) = match r.as_ref() {
        GroupSpec::TStar(n) => (Family::T, *n),
        GroupSpec::OStar(n) => (Family::O, *n),
        _ => return Err(shape()),
    };
    FamilyParams::new(family, *a, *b, n, *action, k).map_err(|e| e.to_string())
}

/// One grid line: a spec followed by `k=K`. A cyclic spec `C(m)` is a lens cell.
pub fn parse_grid_line(line: &str) -> Result<GridCell, String> {
    let (spec_text, k_text) = line
        .rsplit_once("k=")
        .ok_or_else(|| format!("missing k= in grid line '{line}'"))?;
    let k: u64 = k_text
        .trim()
        .parse()
        .map_err(|_| format!("bad k in grid line '{line}'"))?;
    if k == 0 {
        return Err(format!("k must be at least 1 in grid line '{line}'"));
    }
    let spec = parse_group_spec(spec_text.trim()).map_err(|e| e.to_string())?;
    match spec {
        GroupSpec::Cyclic(m) => Ok(GridCell::Lens { m, k }),
        other => family_of(&other, k).map(GridCell::Family),
    }
}

/// Parses a grid file; blank lines and `#` comments are skipped. Errors carry
/// the 1-based line number.
pub fn parse_grid(text: &str) -> Result<Vec<GridCell>, String> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| parse_grid_line(l).map_err(|e| format!("line {}: {e}", i + 1)))
        .collect()
}

/// Inverse of [`parse_grid_line`].
pub fn grid_line(cell: &GridCell) -> String {
    match cell {
        GridCell::Lens { m, k } => format!("C({m}) k={k}"),
        GridCell::Family(p) => format!("{} k={}", p.spec(), p.k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(parse_group_spec("T*(2)").unwrap(), GroupSpec::TStar(2));
        let s = parse_group_spec("C(5)x(C(7)xT*(3))[u=2,v=1]").unwrap();
        assert_eq!(
            s,
            GroupSpec::semidirect(
                GroupSpec::direct(GroupSpec::Cyclic(7), GroupSpec::TStar(3)),
                Action::new(5, 2, 1, 1)
            )
        );
        assert_eq!(s.to_string(), "C(5)x(C(7)xT*(3))[u=2,v=1]");
        // 2 has order 4 mod 5, so the relation check fails only at build time.
        assert!(s.check_action_orders().is_err());
        let e = parse_group_spec("T*(0)").unwrap_err();
        assert_eq!(e.position, 3);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_group_spec("Z(5)").unwrap_err().position, 0);
        assert_eq!(parse_group_spec("C(7)xC(4)[u=14]").unwrap_err().position, 9);
        assert_eq!(parse_group_spec("C(5)xC(4)[u=2,u=2]").unwrap_err().position, 14);
        assert_eq!(parse_group_spec("C(5)xQ8[v=2]").unwrap_err().position, 7);
        assert_eq!(parse_group_spec("Q8 Q8").unwrap_err().position, 3);
        assert!(parse_group_spec("C(6)xC(4)[u=5]").is_err());
        assert!(parse_group_spec("C(5)xC(4)[u=2]xC(3)").is_err());
    }

    #[test]
    fn canonical_forms() {
        for text in [
            "C(5)xC(7)xT*(3)",
            "(C(5)xC(7))xT*(3)",
            "C(3)x(C(5)xC(4)[u=2])",
            "(C(5)xC(4)[u=2])xC(3)",
            "C(11)x(C(5)xO*(2))[u=1,w=10]",
            "C(7)xQ8[]",
            "C(1)x(C(1)xT*(1))[u=0,v=0]",
        ] {
            let s = parse_group_spec(text).unwrap();
            assert_eq!(s.to_string(), text);
        }
        assert_eq!(
            parse_group_spec(" C(5) x ( C(7) x T*(3) ) [ v=1 , u=2 ] ")
                .unwrap()
                .to_string(),
            "C(5)x(C(7)xT*(3))[u=2,v=1]"
        );
    }

    #[test]
    fn grid_lines() {
        let cells = parse_grid("# comment\nC(5) k=2\n\nC(7)x(C(1)xT*(3))[u=1,v=2] k=1\n").unwrap();
        assert_eq!(cells.len(), 2);
        assert_eq!(cells[0], GridCell::Lens { m: 5, k: 2 });
        for c in &cells {
            assert_eq!(&parse_grid_line(&grid_line(c)).unwrap(), c);
        }
        assert!(parse_grid("Q8 k=1").unwrap_err().starts_with("line 1"));
        assert!(parse_grid("C(3)x(C(1)xT*(1))[] k=1").is_err());
    }
}
