use super::lex::is_ident_char;
use crate::nat::NatTerm;
use crate::word::{Alphabet, WordTerm};

fn quote(s: &str, q: char) -> String {
    let mut out = String::from(q);
    for c in s.chars() {
        if c == q || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push(q);
    out
}

fn sym(c: char) -> String {
    quote(&c.to_string(), '\'')
}

fn det_name(name: &str) -> String {
    let plain = !name.is_empty() && name.chars().all(is_ident_char) && !name.starts_with(|c: char| c.is_ascii_digit());
    if plain {
        name.to_string()
    } else {
        quote(name, '"')
    }
}

fn list(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(", ")
}

/// Canonical text of a natural-number term, on one line.
pub fn print_nat(t: &NatTerm) -> String {
    match t {
        NatTerm::Zero => "z".into(),
        NatTerm::Succ => "s".into(),
        NatTerm::Coin => "coin".into(),
        NatTerm::I2p => "i2p".into(),
        NatTerm::Proj(n, m) => format!("proj {n} {m}"),
        NatTerm::Comp(f, gs) => format!("comp {} ({})", nat_operand(f), list(gs.iter().map(print_nat))),
        NatTerm::PrimRec(f, g) => format!("primrec {} {}", nat_operand(f), nat_operand(g)),
        NatTerm::Mu(f) => format!("mu {}", nat_operand(f)),
        NatTerm::Det(f) => format!("det {}", det_name(f.name())),
    }
}

fn nat_operand(t: &NatTerm) -> String {
    match t {
        NatTerm::Zero | NatTerm::Succ | NatTerm::Coin | NatTerm::I2p => print_nat(t),
        _ => format!("({})", print_nat(t)),
    }
}

/// Canonical text of a word term, on one line.
pub fn print_word(t: &WordTerm) -> String {
    let arms = |m: &std::collections::BTreeMap<char, WordTerm>| {
        list(m.iter().map(|(a, t)| format!("{} -> {}", sym(*a), print_word(t))))
    };
    match t {
        WordTerm::Eps => "eps".into(),
        WordTerm::Cons(a) => format!("cons {}", sym(*a)),
        WordTerm::RandCons(a) => format!("rcons {}", sym(*a)),
        WordTerm::Proj(n, m) => format!("proj {n} {m}"),
        WordTerm::Comp(f, gs) => format!("comp {} ({})", word_operand(f), list(gs.iter().map(print_word))),
        WordTerm::Case(b, m) => format!("case {} ({})", word_operand(b), arms(m)),
        WordTerm::Rec(b, m) => format!("rec {} ({})", word_operand(b), arms(m)),
        WordTerm::SimRec { index, bases, steps } => format!(
            "simrec {index} [{}] [{}]",
            list(bases.iter().map(print_word)),
            list(steps.iter().map(|((j, a), t)| format!("({j}, {}) -> {}", sym(*a), print_word(t))))
        ),
        WordTerm::Det(f) => format!("det {}", det_name(f.name())),
    }
}

fn word_operand(t: &WordTerm) -> String {
    match t {
        WordTerm::Eps => "eps".into(),
        _ => format!("({})", print_word(t)),
    }
}

/// A complete word term file.
pub fn print_word_file(alphabet: &Alphabet, t: &WordTerm) -> String {
    let s: String = alphabet.symbols().iter().collect();
    format!("alphabet {}\n{}\n", quote(&s, '"'), print_word(t))
}
