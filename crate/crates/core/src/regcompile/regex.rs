//! Regular expressions over `{0,1}`: Thompson construction, subset
//! construction, minimization.

use std::collections::{BTreeSet, HashMap};

use super::dfa::Dfa;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("regex syntax error at {pos}: {message}")]
pub struct RegexError {
    pub pos: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Re {
    Eps,
    Lit(usize),
    Cat(Box<Re>, Box<Re>),
    Alt(Box<Re>, Box<Re>),
    Star(Box<Re>),
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    i: usize,
    _src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.i).map_or(self._src.len(), |&(p, _)| p)
    }

    fn alt(&mut self) -> Result<Re, RegexError> {
        let mut lhs = self.cat()?;
        while self.peek() == Some('|') {
            self.i += 1;
            let rhs = self.cat()?;
            lhs = Re::Alt(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn cat(&mut self) -> Result<Re, RegexError> {
        let mut acc: Option<Re> = None;
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            let r = self.star()?;
            acc = Some(match acc {
                None => r,
                Some(l) => Re::Cat(Box::new(l), Box::new(r)),
            });
        }
        Ok(acc.unwrap_or(Re::Eps))
    }

    fn star(&mut self) -> Result<Re, RegexError> {
        let mut r = self.atom()?;
        while self.peek() == Some('*') {
            self.i += 1;
            r = Re::Star(Box::new(r));
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Re, RegexError> {
        let pos = self.pos();
        match self.peek() {
            Some('0') => {
                self.i += 1;
                Ok(Re::Lit(0))
            }
            Some('1') => {
                self.i += 1;
                Ok(Re::Lit(1))
            }
            Some('e') => {
                self.i += 1;
                Ok(Re::Eps)
            }
            Some('(') => {
                self.i += 1;
                let r = self.alt()?;
                if self.peek() != Some(')') {
                    return Err(RegexError { pos: self.pos(), message: "expected `)`".into() });
                }
                self.i += 1;
                Ok(r)
            }
            Some(c) => Err(RegexError { pos, message: format!("unexpected `{c}`") }),
            None => Err(RegexError { pos, message: "unexpected end of regex".into() }),
        }
    }
}

#[derive(Default)]
struct Nfa {
    eps: Vec<Vec<usize>>,
    step: Vec<[Vec<usize>; 2]>,
}

impl Nfa {
    fn state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.step.push([Vec::new(), Vec::new()]);
        self.eps.len() - 1
    }

    /// Thompson fragment with one entry and one exit.
    fn build(&mut self, re: &Re) -> (usize, usize) {
        match re {
            Re::Eps => {
                let s = self.state();
                let t = self.state();
                self.eps[s].push(t);
                (s, t)
            }
            Re::Lit(c) => {
                let s = self.state();
                let t = self.state();
                self.step[s][*c].push(t);
                (s, t)
            }
            Re::Cat(a, b) => {
                let (s1, t1) = self.build(a);
                let (s2, t2) = self.build(b);
                self.eps[t1].push(s2);
                (s1, t2)
            }
            Re::Alt(a, b) => {
                let s = self.state();
                let (s1, t1) = self.build(a);
                let (s2, t2) = self.build(b);
                let t = self.state();
                self.eps[s].extend([s1, s2]);
                self.eps[t1].push(t);
                self.eps[t2].push(t);
                (s, t)
            }
            Re::Star(a) => {
                let s = self.state();
                let (s1, t1) = self.build(a);
                let t = self.state();
                self.eps[s].extend([s1, t]);
                self.eps[t1].extend([s1, t]);
                (s, t)
            }
        }
    }

    fn closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &t in &self.eps[q] {
                if set.insert(t) {
                    stack.push(t);
                }
            }
        }
    }
}

/// Minimal complete DFA of the language of `src`. The empty regex denotes
/// `{e}`; `e` is the empty word.
pub fn regex_to_dfa(src: &str) -> Result<Dfa, RegexError> {
    let chars: Vec<(usize, char)> = src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut p = Parser { chars, i: 0, _src: src };
    let re = p.alt()?;
    if p.peek().is_some() {
        return Err(RegexError { pos: p.pos(), message: "unbalanced `)`".into() });
    }
    let mut nfa = Nfa::default();
    let (s, t) = nfa.build(&re);

    let mut start = BTreeSet::from([s]);
    nfa.closure(&mut start);
    let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut subsets = vec![start];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        let mut row = [0; 2];
        for (c, slot) in row.iter_mut().enumerate() {
            let mut next: BTreeSet<usize> =
                subsets[i].iter().flat_map(|&q| nfa.step[q][c].iter().copied()).collect();
            nfa.closure(&mut next);
            let n = subsets.len();
            *slot = *index.entry(next.clone()).or_insert_with(|| {
                subsets.push(next);
                n
            });
        }
        delta.push(row);
        i += 1;
    }
    let accept = subsets.iter().map(|set| set.contains(&t)).collect();
    let d = Dfa::new(0, accept, delta).expect("subset construction is complete");
    Ok(d.minimize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regcompile::dfa::words_up_to;

    #[test]
    fn all_strings() {
        let d = regex_to_dfa("(0|1)*").unwrap();
        assert_eq!(d.len(), 1);
        assert!(d.accept[0]);
    }

    #[test]
    fn odd_number_of_ones() {
        let d = regex_to_dfa("0*10*(10*10*)*").unwrap();
        assert_eq!(d.len(), 2);
        for w in words_up_to(8) {
            assert_eq!(d.run(&w), w.matches('1').count() % 2 == 1, "{w}");
        }
    }

    #[test]
    fn empty_regex_is_epsilon() {
        let d = regex_to_dfa("").unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.run(""));
        assert!(!d.run("0"));
        assert!(!d.run("1"));
        assert_eq!(regex_to_dfa("e").unwrap(), d);
    }

    #[test]
    fn contains_11() {
        let d = regex_to_dfa("(0|1)*11(0|1)*").unwrap();
        assert_eq!(d.len(), 3);
        for w in words_up_to(8) {
            assert_eq!(d.run(&w), w.contains("11"));
        }
    }

    #[test]
    fn syntax_errors() {
        assert!(regex_to_dfa("(0|1").is_err());
        assert!(regex_to_dfa("0)").is_err());
        assert!(regex_to_dfa("2").is_err());
    }
}
