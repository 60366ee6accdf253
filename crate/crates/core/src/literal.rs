//! Text literals for elements of `W̃`.
//!
//! A literal is a product of factors joined by `*` (or `@`):
//!
//! * `t[c1,...,cr]`: a translation, in fundamental-coweight coordinates;
//! * `s<i>`: an affine simple reflection, `s0` being the affine node;
//! * `w[i0 i1 ... ik]`: a word in affine simple reflections;
//! * `tau^m` or `tau`: the `m`-th element of the canonical Ω listing;
//! * `e`, `1`, `unit`: the identity.
//!
//! For example `t[2]*s1`, `w[0 1 0]`, and `w[1 2] @ tau^2`.

use crate::affine_weyl::{AffineWeylGroup, ExtAffElt};
use crate::error::{Error, Result};

fn parse_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

fn split_factors(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for c in s.chars() {
        match c {
            '[' => {
                depth += 1;
                cur.push(c);
            }
            ']' => {
                if depth == 0 {
                    return parse_err(format!("unbalanced ']' in {s:?}"));
                }
                depth -= 1;
                cur.push(c);
            }
            '*' | '@' if depth == 0 => out.push(std::mem::take(&mut cur)),
            c if c.is_whitespace() && depth == 0 => {}
            c if c.is_whitespace() => cur.push(' '),
            c => cur.push(c),
        }
    }
    if depth != 0 {
        return parse_err(format!("unbalanced '[' in {s:?}"));
    }
    out.push(cur);
    Ok(out)
}

fn bracket_body<'a>(factor: &'a str, head: &str) -> Option<&'a str> {
    factor.strip_prefix(head)?.strip_prefix('[')?.strip_suffix(']')
}

impl AffineWeylGroup {
    /// Parses a literal. With `strict_reduced`, every maximal run of
    /// consecutive reflection factors must be a reduced expression.
    pub fn parse_literal(&self, s: &str, strict_reduced: bool) -> Result<ExtAffElt> {
        let factors = split_factors(s)?;
        let mut acc = self.identity();
        let mut run = self.identity();
        let mut letters = 0usize;
        let close_run = |run: &mut ExtAffElt, letters: &mut usize| -> Result<()> {
            if strict_reduced && *letters > self.length(run) {
                return parse_err(format!(
                    "{s:?} spells {letters} reflections for an element of length {}",
                    self.length(run)
                ));
            }
            *run = self.identity();
            *letters = 0;
            Ok(())
        };
        for raw in &factors {
            let f = raw.trim();
            if f.is_empty() {
                return parse_err(format!("empty factor in {s:?}"));
            }
            let x = if let Some(body) = bracket_body(f, "t") {
                close_run(&mut run, &mut letters)?;
                let mu = body
                    .split(',')
                    .map(|c| {
                        c.trim()
                            .parse::<i64>()
                            .map_err(|_| Error::Parse(format!("bad coordinate {c:?} in {f:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if mu.len() != self.rank() {
                    return parse_err(format!(
                        "translation {f:?} has {} coordinates, type {} has rank {}",
                        mu.len(),
                        self.datum().label(),
                        self.rank()
                    ));
                }
                self.translation(&mu)
            } else if let Some(body) = bracket_body(f, "w") {
                let word = body
                    .split([' ', ','])
                    .filter(|t| !t.is_empty())
                    .map(|t| self.parse_label(t, f))
                    .collect::<Result<Vec<_>>>()?;
                letters += word.len();
                let x = self.from_word(&word, 0);
                run = self.multiply(&run, &x);
                x
            } else if let Some(rest) = f.strip_prefix("tau") {
                close_run(&mut run, &mut letters)?;
                let m: i64 = match rest.strip_prefix('^') {
                    Some(m) => m
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {f:?}")))?,
                    None if rest.is_empty() => 1,
                    None => return parse_err(format!("unrecognized factor {f:?}")),
                };
                let n = self.omega().len() as i64;
                self.omega()[m.rem_euclid(n) as usize].clone()
            } else if let Some(idx) = f.strip_prefix('s') {
                letters += 1;
                let a = self.parse_label(idx, f)?;
                run = self.right_mul_simple(&run, a);
                self.simple(a).clone()
            } else if matches!(f, "e" | "1" | "unit" | "id") {
                self.identity()
            } else {
                return parse_err(format!("unrecognized factor {f:?}"));
            };
            acc = self.multiply(&acc, &x);
        }
        close_run(&mut run, &mut letters)?;
        Ok(acc)
    }

    fn parse_label(&self, t: &str, context: &str) -> Result<usize> {
        match t.trim().parse::<usize>() {
            Ok(a) if a < self.num_labels() => Ok(a),
            _ => parse_err(format!("bad simple reflection index {t:?} in {context:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::affine_weyl::AffineWeylGroup;
    use crate::error::Error;
    use crate::root_data::RootDatum;

    #[test]
    fn parse_forms_agree() {
        let g = AffineWeylGroup::new(RootDatum::build("A1").unwrap());
        let a = g.parse_literal("w[0 1 0]", false).unwrap();
        let b = g.parse_literal("s0 * s1 * s0", false).unwrap();
        let c = g.parse_literal("t[4]*s1", false).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(g.literal(&a), "t[4]*s1");
        let tau = g.parse_literal("tau", false).unwrap();
        assert_eq!(tau, g.omega()[1]);
        assert_eq!(g.parse_literal("tau^2", false).unwrap(), g.identity());
        assert_eq!(g.parse_literal("w[] @ tau^1", false).unwrap(), tau);
        assert_eq!(g.parse_literal("unit", false).unwrap(), g.identity());
        assert_eq!(g.parse_literal(" t[ -2 ] * s1 ", false).unwrap().mu, vec![-2]);
    }

    #[test]
    fn round_trip_through_literal() {
        for label in ["A2", "C2", "G2"] {
            let g = AffineWeylGroup::new(RootDatum::build(label).unwrap());
            for x in g.elements_up_to(5) {
                let lit = g.literal(&x);
                assert_eq!(g.parse_literal(&lit, true).unwrap(), x, "{lit}");
                let rw = g.reduced_word(&x);
                let words: Vec<String> = rw.word.iter().map(|a| a.to_string()).collect();
                let alt = format!("w[{}] @ tau^{}", words.join(" "), rw.tau);
                assert_eq!(g.parse_literal(&alt, true).unwrap(), x, "{alt}");
            }
        }
    }

    #[test]
    fn rejects_malformed_input() {
        let g = AffineWeylGroup::new(RootDatum::build("A2").unwrap());
        for bad in ["t[1]", "s3", "q", "t[1,2", "w[0 9]", "tau^x", "s1**s2", ""] {
            assert!(matches!(g.parse_literal(bad, false), Err(Error::Parse(_))), "{bad}");
        }
        assert!(g.parse_literal("s1*s1", false).is_ok());
        assert!(matches!(g.parse_literal("s1*s1", true), Err(Error::Parse(_))));
    }
}
