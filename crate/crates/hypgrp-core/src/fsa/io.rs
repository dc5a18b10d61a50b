//! Text serialization of automata (`fsa v1`).
//!
//! ```text
//! fsa v1
//! arity: 2
//! alphabet: a A b B
//! padding: _
//! states: 3
//! initial: 1
//! accepting: 1 3
//! 1 a,a 2
//! 2 b,_ 3
//! ```
//!
//! States are written 1-based in canonical order; transitions are listed
//! per state in label order, so writing a canonically numbered automaton
//! and re-reading it round-trips byte for byte. Only deterministic
//! automata are serialized (the format has one `initial` line and no ε).

use super::{Automaton, Builder, PairLabels};
use crate::error::Error;
use std::fmt::Write as _;
use std::path::Path;

pub fn write_string(m: &Automaton) -> Result<String, Error> {
    if !m.is_deterministic() {
        return Err(Error::Precondition(
            "only deterministic automata are serialized".into(),
        ));
    }
    let mut s = String::new();
    s.push_str("fsa v1\n");
    writeln!(s, "arity: {}", m.arity()).unwrap();
    writeln!(s, "alphabet: {}", m.letters().join(" ")).unwrap();
    s.push_str("padding: _\n");
    writeln!(s, "states: {}", m.n_states()).unwrap();
    writeln!(s, "initial: {}", m.initial() + 1).unwrap();
    let acc: Vec<String> = m.accepting_states().map(|a| (a + 1).to_string()).collect();
    writeln!(s, "accepting: {}", acc.join(" ")).unwrap();
    for st in 0..m.n_states() as u32 {
        for e in m.edges_from(st) {
            writeln!(s, "{} {} {}", st + 1, format_label(m, e.label), e.to + 1).unwrap();
        }
    }
    Ok(s)
}

pub fn write_file(m: &Automaton, path: &Path) -> Result<(), Error> {
    let s = write_string(m)?;
    std::fs::write(path, s).map_err(|e| Error::from(e).with_path(path))
}

fn format_label(m: &Automaton, label: u16) -> String {
    if m.arity() == 1 {
        m.letters()[label as usize].clone()
    } else {
        let (x, y) = m.pair_labels().decode(label);
        let show = |c: Option<u8>| match c {
            Some(l) => m.letters()[l as usize].clone(),
            None => "_".to_string(),
        };
        format!("{},{}", show(x), show(y))
    }
}

pub fn read_file(path: &Path) -> Result<Automaton, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).with_path(path))?;
    read_string(&text).map_err(|e| e.with_path(path))
}

pub fn read_string(text: &str) -> Result<Automaton, Error> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "empty automaton file"))?;
    if header != "fsa v1" {
        return Err(Error::parse(ln, format!("expected `fsa v1`, found `{header}`")));
    }

    let mut arity: Option<u8> = None;
    let mut alphabet: Option<Vec<String>> = None;
    let mut n_states: Option<usize> = None;
    let mut initial: Option<u32> = None;
    let mut accepting: Option<Vec<u32>> = None;
    let mut transitions: Vec<(usize, u32, String, u32)> = Vec::new();

    for (ln, line) in lines {
        if let Some((key, value)) = line.split_once(':') {
            let value = value.trim();
            match key.trim() {
                "arity" => {
                    let a: u8 = value
                        .parse()
                        .map_err(|_| Error::parse(ln, "arity must be 1 or 2"))?;
                    if a != 1 && a != 2 {
                        return Err(Error::parse(ln, "arity must be 1 or 2"));
                    }
                    arity = Some(a);
                }
                "alphabet" => {
                    alphabet = Some(value.split_whitespace().map(str::to_string).collect());
                }
                "padding" => {
                    if value != "_" {
                        return Err(Error::parse(ln, "padding symbol must be `_`"));
                    }
                }
                "states" => {
                    n_states = Some(
                        value
                            .parse()
                            .map_err(|_| Error::parse(ln, "invalid state count"))?,
                    );
                }
                "initial" => {
                    initial = Some(parse_state(value, ln)?);
                }
                "accepting" => {
                    accepting = Some(
                        value
                            .split_whitespace()
                            .map(|v| parse_state(v, ln))
                            .collect::<Result<_, _>>()?,
                    );
                }
                other => {
                    return Err(Error::parse(ln, format!("unknown key `{other}`")));
                }
            }
        } else {
            let mut parts = line.split_whitespace();
            let (Some(from), Some(label), Some(to), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(Error::parse(ln, format!("malformed transition `{line}`")));
            };
            transitions.push((
                ln,
                parse_state(from, ln)?,
                label.to_string(),
                parse_state(to, ln)?,
            ));
        }
    }

    let arity = arity.ok_or_else(|| Error::parse(0, "missing `arity`"))?;
    let alphabet = alphabet.ok_or_else(|| Error::parse(0, "missing `alphabet`"))?;
    let n_states = n_states.ok_or_else(|| Error::parse(0, "missing `states`"))?;
    let initial = initial.ok_or_else(|| Error::parse(0, "missing `initial`"))?;
    let accepting = accepting.ok_or_else(|| Error::parse(0, "missing `accepting`"))?;

    let letter_index = |name: &str, ln: usize| {
        alphabet
            .iter()
            .position(|l| l == name)
            .map(|i| i as u8)
            .ok_or_else(|| Error::parse(ln, format!("unknown letter `{name}`")))
    };
    let check_state = |s: u32, ln: usize| {
        if (s as usize) < n_states {
            Ok(s)
        } else {
            Err(Error::parse(ln, format!("state {} out of range", s + 1)))
        }
    };

    let mut b = Builder::new(arity, &alphabet);
    for _ in 0..n_states {
        b.add_state();
    }
    b.add_initial(check_state(initial, 0)?);
    for a in accepting {
        b.set_accepting(check_state(a, 0)?, true);
    }
    let pl = PairLabels::new(alphabet.len());
    for (ln, from, label, to) in transitions {
        let encoded = if arity == 1 {
            letter_index(&label, ln)? as u16
        } else {
            let (x, y) = label
                .split_once(',')
                .ok_or_else(|| Error::parse(ln, format!("pair label `{label}` needs a comma")))?;
            if x == "_" && y == "_" {
                return Err(Error::parse(ln, "the pair label `_,_` is unrepresentable"));
            }
            let xc = if x == "_" { None } else { Some(letter_index(x, ln)?) };
            let yc = if y == "_" { None } else { Some(letter_index(y, ln)?) };
            pl.encode(xc, yc)
        };
        b.add_edge(check_state(from, ln)?, encoded, check_state(to, ln)?);
    }
    let m = b.build();
    if !m.is_deterministic() {
        return Err(Error::parse(0, "automaton is not deterministic"));
    }
    Ok(m)
}

fn parse_state(s: &str, ln: usize) -> Result<u32, Error> {
    let v: u32 = s
        .parse()
        .map_err(|_| Error::parse(ln, format!("invalid state number `{s}`")))?;
    if v == 0 {
        return Err(Error::parse(ln, "states are numbered from 1"));
    }
    Ok(v - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsa::{Builder, DetOptions};

    #[test]
    fn round_trip_is_byte_identical() {
        let letters: Vec<String> = ["a", "A"].iter().map(|s| s.to_string()).collect();
        let mut b = Builder::new(1, &letters);
        let s0 = b.add_state();
        let s1 = b.add_state();
        b.add_edge(s0, 0, s1);
        b.add_edge(s1, 1, s0);
        b.set_accepting(s0, true);
        b.add_initial(s0);
        let m = b.build();
        let text = write_string(&m).unwrap();
        let m2 = read_string(&text).unwrap();
        assert_eq!(write_string(&m2).unwrap(), text);
        assert_eq!(m, m2);
    }

    #[test]
    fn pair_labels_round_trip() {
        let letters: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let pl = PairLabels::new(2);
        let mut b = Builder::new(2, &letters);
        let s0 = b.add_state();
        let s1 = b.add_state();
        b.add_edge(s0, pl.encode(Some(0), Some(1)), s1);
        b.add_edge(s1, pl.encode(None, Some(0)), s1);
        b.set_accepting(s1, true);
        b.add_initial(s0);
        let m = b.build();
        let text = write_string(&m).unwrap();
        assert!(text.contains("1 a,b 2"));
        assert!(text.contains("2 _,a 2"));
        let m2 = read_string(&text).unwrap();
        assert_eq!(write_string(&m2).unwrap(), text);
    }

    #[test]
    fn nondeterministic_automata_are_refused() {
        let letters: Vec<String> = vec!["a".into()];
        let mut b = Builder::new(1, &letters);
        let s0 = b.add_state();
        let s1 = b.add_state();
        b.add_edge(s0, 0, s0);
        b.add_edge(s0, 0, s1);
        b.set_accepting(s1, true);
        b.add_initial(s0);
        let m = b.build();
        assert!(write_string(&m).is_err());
        assert!(write_string(&m.determinize(&DetOptions::default()).unwrap()).is_ok());
    }

    #[test]
    fn bad_headers_are_rejected() {
        assert!(read_string("fsa v2\narity: 1\n").is_err());
        assert!(read_string("fsa v1\narity: 3\n").is_err());
        let text = "fsa v1\narity: 2\nalphabet: a\npadding: _\nstates: 1\ninitial: 1\naccepting: 1\n1 _,_ 1\n";
        assert!(read_string(text).is_err());
    }
}
