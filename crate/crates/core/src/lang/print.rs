use std::fmt::{self, Write as _};

use super::ast::Process;

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_group(self, &mut out);
        f.write_str(&out)
    }
}

// Prints `p` as a complete group: `new` may extend to the end.
fn write_group(p: &Process, out: &mut String) {
    match p {
        Process::Par(children) if children.is_empty() => out.push('0'),
        Process::Par(children) if children.len() == 1 => write_group(&children[0], out),
        Process::Par(children) => {
            let last = children.len() - 1;
            for (i, child) in children.iter().enumerate() {
                if i > 0 {
                    out.push_str(" || ");
                }
                let needs_parens = match child {
                    Process::Par(grand) => grand.len() > 1,
                    Process::New(..) => i != last,
                    _ => false,
                };
                if needs_parens {
                    out.push('(');
                    write_group(child, out);
                    out.push(')');
                } else {
                    write_group(child, out);
                }
            }
        }
        Process::New(c, body) => {
            let _ = write!(out, "new {c}. ");
            write_group(body, out);
        }
        Process::Stop => out.push('0'),
        Process::Distribute(a, targets) => {
            let _ = write!(out, "{a} => [");
            for (i, t) in targets.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{t}");
            }
            out.push(']');
        }
        Process::Bridge(a, b) => {
            let _ = write!(out, "{a} -> {b}");
        }
        Process::Lose(a) => {
            let _ = write!(out, "?{a}");
        }
        Process::Dup(a) => {
            let _ = write!(out, "+{a}");
        }
        Process::Duplose(a) => {
            let _ = write!(out, "*{a}");
        }
    }
}

/// Reintroduces sugar for display: unary distributors become bridges,
/// empty ones losers, `a => [a, a]` duplicators, and a loser/duplicator
/// pair on the same channel within one `Par` a duploser.
pub fn resugar(p: &Process) -> Process {
    match p {
        Process::Distribute(a, targets) => match targets.as_slice() {
            [] => Process::Lose(a.clone()),
            [b] => Process::Bridge(a.clone(), b.clone()),
            [x, y] if x == a && y == a => Process::Dup(a.clone()),
            _ => p.clone(),
        },
        Process::New(c, body) => Process::New(c.clone(), Box::new(resugar(body))),
        Process::Par(children) => {
            let mut items = Vec::new();
            for child in children.iter().map(resugar) {
                match child {
                    Process::Par(inner) => items.extend(inner),
                    other => items.push(other),
                }
            }
            let mut merged = Vec::with_capacity(items.len());
            while !items.is_empty() {
                let item = items.remove(0);
                if let Process::Lose(a) = &item {
                    if let Some(j) = items.iter().position(|q| matches!(q, Process::Dup(b) if b == a)) {
                        items.remove(j);
                        merged.push(Process::Duplose(a.clone()));
                        continue;
                    }
                }
                if let Process::Dup(a) = &item {
                    if let Some(j) = items.iter().position(|q| matches!(q, Process::Lose(b) if b == a)) {
                        items.remove(j);
                        merged.push(Process::Duplose(a.clone()));
                        continue;
                    }
                }
                merged.push(item);
            }
            Process::Par(merged)
        }
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{desugar, parse};

    #[test]
    fn prints_in_concrete_syntax() {
        let p = parse("new m. (*m || s0 -> m || m => [r0, r1])").unwrap();
        assert_eq!(p.to_string(), "new m. *m || s0 -> m || m => [r0, r1]");
        assert_eq!(parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn restricted_child_gets_parens_unless_last() {
        let p = Process::par([
            Process::new_channel("a", Process::lose("a")),
            Process::bridge("a", "b"),
        ]);
        assert_eq!(p.to_string(), "(new a. ?a) || a -> b");
        assert_eq!(parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn resugar_inverts_desugar_on_sugar_atoms() {
        let p = parse("*m || ?a || +b || a -> b || c => [d, e]").unwrap();
        assert_eq!(resugar(&desugar(&p)), resugar(&p));
        assert_eq!(resugar(&desugar(&p)).to_string(), "*m || ?a || +b || a -> b || c => [d, e]");
    }

    #[test]
    fn empty_par_prints_as_stop() {
        assert_eq!(Process::Par(vec![]).to_string(), "0");
        assert_eq!(Process::Stop.to_string(), "0");
    }
}
