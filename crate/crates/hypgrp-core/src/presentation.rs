//! Group presentation files (`hgp v1`).
//!
//! A presentation file names the generators, assigns each generator an
//! inverse letter (implicitly added to the alphabet), optionally fixes the
//! letter order used by short-lex, and lists relators as words over the full
//! alphabet. Format:
//!
//! ```text
//! hgp v1
//! # genus-2 surface group
//! generators: a b c d
//! inverses: a=A b=B c=C d=D
//! relator: ABabCDcd
//! ```
//!
//! Letter names are single characters. When no `order:` line is present the
//! letters are ordered with each generator immediately followed by its
//! inverse (`a A b B ...`).

use crate::alphabet::{Alphabet, Letter, Word};
use crate::error::Error;
use std::path::Path;

/// A finite group presentation over an inverse-closed, ordered alphabet.
#[derive(Debug, Clone)]
pub struct Presentation {
    /// Optional name, taken from the file stem when read from disk.
    pub name: String,
    /// The ordered alphabet (generators and their inverses).
    pub alphabet: Alphabet,
    /// Relators as words over the alphabet; each equals the identity.
    pub relators: Vec<Word>,
}

impl Presentation {
    /// Read a presentation from a file, using the file stem as its name.
    pub fn read_file(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::parse(&text, &name).map_err(|e| e.with_path(&path.display().to_string()))
    }

    /// Parse presentation text. `name` is used only for diagnostics.
    pub fn parse(text: &str, name: &str) -> Result<Self, Error> {
        let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
            let line = raw.split('#').next().unwrap_or("").trim();
            (!line.is_empty()).then_some((i + 1, line))
        });

        let (line_no, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "empty presentation file"))?;
        if header != "hgp v1" {
            return Err(Error::parse(
                line_no,
                format!("expected header \"hgp v1\", found \"{header}\""),
            ));
        }

        let mut generators: Vec<String> = Vec::new();
        let mut inverse_of: Vec<String> = Vec::new();
        let mut order: Option<Vec<String>> = None;
        let mut relator_texts: Vec<(usize, String)> = Vec::new();

        for (ln, line) in lines {
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(ln, format!("expected \"key: value\", found \"{line}\"")))?;
            let rest = rest.trim();
            match key.trim() {
                "generators" => {
                    if !generators.is_empty() {
                        return Err(Error::parse(ln, "duplicate generators line"));
                    }
                    for tok in rest.split_whitespace() {
                        validate_letter_name(ln, tok)?;
                        if generators.iter().any(|g| g == tok) {
                            return Err(Error::parse(ln, format!("duplicate generator '{tok}'")));
                        }
                        generators.push(tok.to_string());
                    }
                    if generators.is_empty() {
                        return Err(Error::parse(ln, "generators line lists no generators"));
                    }
                }
                "inverses" => {
                    if generators.is_empty() {
                        return Err(Error::parse(ln, "inverses line before generators line"));
                    }
                    if !inverse_of.is_empty() {
                        return Err(Error::parse(ln, "duplicate inverses line"));
                    }
                    inverse_of = vec![String::new(); generators.len()];
                    for tok in rest.split_whitespace() {
                        let (g, inv) = tok.split_once('=').ok_or_else(|| {
                            Error::parse(ln, format!("expected g=G pair, found \"{tok}\""))
                        })?;
                        validate_letter_name(ln, inv)?;
                        let idx = generators
                            .iter()
                            .position(|name| name == g)
                            .ok_or_else(|| Error::parse(ln, format!("unknown generator '{g}'")))?;
                        if !inverse_of[idx].is_empty() {
                            return Err(Error::parse(ln, format!("generator '{g}' paired twice")));
                        }
                        inverse_of[idx] = inv.to_string();
                    }
                }
                "order" => {
                    if order.is_some() {
                        return Err(Error::parse(ln, "duplicate order line"));
                    }
                    order = Some(rest.split_whitespace().map(str::to_string).collect());
                }
                "relator" => relator_texts.push((ln, rest.to_string())),
                other => {
                    return Err(Error::parse(ln, format!("unknown key \"{other}\"")));
                }
            }
        }

        if generators.is_empty() {
            return Err(Error::parse(0, "missing generators line"));
        }
        if inverse_of.is_empty() || inverse_of.iter().any(String::is_empty) {
            return Err(Error::parse(0, "every generator needs an inverses entry"));
        }
        for (i, inv) in inverse_of.iter().enumerate() {
            let clashes = generators.iter().enumerate().any(|(j, g)| j != i && g == inv)
                || inverse_of.iter().enumerate().any(|(j, h)| j != i && h == inv);
            if clashes {
                return Err(Error::parse(
                    0,
                    format!("inverse letter '{inv}' assigned to more than one letter"),
                ));
            }
        }

        // Default order interleaves each generator with its inverse.
        let default_order: Vec<String> = generators
            .iter()
            .zip(&inverse_of)
            .flat_map(|(g, inv)| {
                if g == inv {
                    vec![g.clone()]
                } else {
                    vec![g.clone(), inv.clone()]
                }
            })
            .collect();
        let order = order.unwrap_or(default_order);

        // The ordered alphabet must be exactly the generators plus inverses.
        let mut expected: Vec<&String> = generators.iter().chain(&inverse_of).collect();
        expected.sort();
        expected.dedup();
        let mut got: Vec<&String> = order.iter().collect();
        got.sort();
        if got.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::parse(0, "order line repeats a letter"));
        }
        if got != expected {
            return Err(Error::parse(
                0,
                "order line must list each generator and inverse exactly once",
            ));
        }

        let pos = |name: &str| order.iter().position(|n| n == name).unwrap() as Letter;
        let mut inv_table = vec![0; order.len()];
        for (g, invname) in generators.iter().zip(&inverse_of) {
            let gi = pos(g);
            let ii = pos(invname);
            inv_table[gi as usize] = ii;
            inv_table[ii as usize] = gi;
        }
        let alphabet = Alphabet::new(order, inv_table)?;

        let mut relators = Vec::with_capacity(relator_texts.len());
        for (ln, text) in relator_texts {
            let w = alphabet
                .parse_word(&text)
                .map_err(|e| Error::parse(ln, e.to_string()))?;
            if w.is_empty() {
                return Err(Error::parse(ln, "empty relator"));
            }
            relators.push(w);
        }

        Ok(Presentation {
            name: name.to_string(),
            alphabet,
            relators,
        })
    }
}

fn validate_letter_name(line: usize, name: &str) -> Result<(), Error> {
    let mut chars = name.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if !c.is_whitespace() && c != '_' && c != '#' && c != '=' && c != ',' => {
            Ok(())
        }
        _ => Err(Error::parse(
            line,
            format!("letter names must be a single character, found \"{name}\""),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_surface_group_with_default_order() {
        let text = "hgp v1\n# genus 2\ngenerators: a b c d\ninverses: a=A b=B c=C d=D\nrelator: ABabCDcd\n";
        let p = Presentation::parse(text, "g1").unwrap();
        let names: Vec<&str> = p.alphabet.names().iter().map(|s| s.as_str()).collect();
        assert_eq!(names, ["a", "A", "b", "B", "c", "C", "d", "D"]);
        assert_eq!(p.relators.len(), 1);
        assert_eq!(p.alphabet.format_word(&p.relators[0]), "ABabCDcd");
        assert_eq!(p.alphabet.inverse(p.alphabet.letter("c").unwrap()), p.alphabet.letter("C").unwrap());
    }

    #[test]
    fn explicit_order_overrides_default() {
        let text = "hgp v1\ngenerators: a b\ninverses: a=A b=B\norder: a b A B\nrelator: abAB\n";
        let p = Presentation::parse(text, "t").unwrap();
        let names: Vec<&str> = p.alphabet.names().iter().map(|s| s.as_str()).collect();
        assert_eq!(names, ["a", "b", "A", "B"]);
    }

    #[test]
    fn rejects_bad_header_and_unknown_letters() {
        assert!(Presentation::parse("hgp v2\ngenerators: a\ninverses: a=A\n", "t").is_err());
        let text = "hgp v1\ngenerators: a\ninverses: a=A\nrelator: ab\n";
        assert!(Presentation::parse(text, "t").is_err());
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "hgp v1\n\n# comment\ngenerators: a # trailing\ninverses: a=A\n";
        let p = Presentation::parse(text, "z").unwrap();
        assert_eq!(p.relators.len(), 0);
        assert_eq!(p.alphabet.len(), 2);
    }
}
