use std::fmt::{self, Display, Formatter, Write};

use super::{BraneAction, MembraneProcess, SystemTerm};

/// Prints a term in the concrete grammar accepted by [`super::parse`].
pub fn pretty(term: &SystemTerm) -> String {
    term.to_string()
}

impl Display for BraneAction {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        use BraneAction::*;
        match self {
            Mate(n) => write!(f, "mate({n})"),
            CoMate(n) => write!(f, "comate({n})"),
            Bud(n) => write!(f, "bud({n})"),
            CoBud(n, rho) => write!(f, "cobud({n}, {rho})"),
            Drip(rho) => write!(f, "drip({rho})"),
            Phago(n) => write!(f, "phago({n})"),
            CoPhago(n, rho) => write!(f, "cophago({n}, {rho})"),
            Exo(n) => write!(f, "exo({n})"),
            CoExo(n) => write!(f, "coexo({n})"),
            Pino(rho) => write!(f, "pino({rho})"),
        }
    }
}

// Precedence levels: 0 admits a top-level `|` / `||`, 1 does not.
fn write_process(f: &mut impl Write, p: &MembraneProcess, level: u8) -> fmt::Result {
    match p {
        MembraneProcess::Zero => f.write_char('0'),
        MembraneProcess::Par(a, b) => {
            if level > 0 {
                f.write_char('(')?;
            }
            write_process(f, a, 0)?;
            f.write_str(" | ")?;
            write_process(f, b, 1)?;
            if level > 0 {
                f.write_char(')')?;
            }
            Ok(())
        }
        MembraneProcess::Bang(a) => {
            f.write_char('!')?;
            write_process(f, a, 1)
        }
        MembraneProcess::Seq(a, k) => {
            write!(f, "{a}")?;
            if **k != MembraneProcess::Zero {
                f.write_char('.')?;
                write_process(f, k, 1)?;
            }
            Ok(())
        }
    }
}

impl Display for MembraneProcess {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_process(f, self, 0)
    }
}

fn write_system(f: &mut impl Write, t: &SystemTerm, level: u8) -> fmt::Result {
    match t {
        SystemTerm::Diamond => f.write_str("zero"),
        SystemTerm::Compose(a, b) => {
            if level > 0 {
                f.write_char('(')?;
            }
            write_system(f, a, 0)?;
            f.write_str(" || ")?;
            write_system(f, b, 1)?;
            if level > 0 {
                f.write_char(')')?;
            }
            Ok(())
        }
        SystemTerm::Bang(a) => {
            f.write_char('!')?;
            write_system(f, a, 1)
        }
        SystemTerm::Membrane {
            process,
            content,
            label,
        } => {
            // A bare `!` in front of a membrane means system replication, so
            // replicated and parallel membrane processes get parentheses.
            match process {
                MembraneProcess::Par(..) | MembraneProcess::Bang(_) => {
                    f.write_char('(')?;
                    write_process(f, process, 0)?;
                    f.write_char(')')?;
                }
                _ => write_process(f, process, 1)?,
            }
            f.write_char('<')?;
            if **content != SystemTerm::Diamond {
                write_system(f, content, 0)?;
            }
            write!(f, ">@{label}")
        }
    }
}

impl Display for SystemTerm {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_system(f, self, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{ChannelName, MembraneId};

    #[test]
    fn diamond_prints_as_zero() {
        assert_eq!(pretty(&SystemTerm::Diamond), "zero");
    }

    #[test]
    fn empty_membrane() {
        let t = SystemTerm::membrane(MembraneProcess::Zero, SystemTerm::Diamond, MembraneId::new("m1"));
        assert_eq!(pretty(&t), "0<>@m1");
    }

    #[test]
    fn nested_precedence() {
        let n = ChannelName::new("n");
        let p = MembraneProcess::par(
            MembraneProcess::prefix(BraneAction::Mate(n.clone())),
            MembraneProcess::bang(MembraneProcess::prefix(BraneAction::CoMate(n))),
        );
        let t = SystemTerm::bang(SystemTerm::compose(
            SystemTerm::membrane(p, SystemTerm::Diamond, MembraneId::new("a")),
            SystemTerm::Diamond,
        ));
        assert_eq!(pretty(&t), "!((mate(n) | !comate(n))<>@a || zero)");
    }
}
