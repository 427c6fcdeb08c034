//! Context-free grammar with per-production compression rules, plus the
//! sentence-specific grammar generator.

use crate::error::{Error, Result};
use crate::tagger::Tag;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// Right-hand-side symbol: a nonterminal/tag reference or a literal word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Sym {
    Ref(String),
    Word(String),
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Ref(s) => f.write_str(s),
            Sym::Word(w) => write!(f, "\"{}\"", w),
        }
    }
}

/// One production with its compression-rule vector (one label in {0,1,2} per
/// right-hand-side symbol).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Production {
    pub lhs: String,
    pub rhs: Vec<Sym>,
    pub rule: Vec<u8>,
}

impl Production {
    pub fn new(lhs: &str, rhs: Vec<Sym>, rule: Vec<u8>) -> Result<Production> {
        let p = Production {
            lhs: lhs.to_string(),
            rhs,
            rule,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rhs.is_empty() {
            return Err(Error::Grammar(format!("production {} has an empty rhs", self.lhs)));
        }
        if self.rule.len() != self.rhs.len() {
            return Err(Error::Grammar(format!(
                "production {} -> {} has {} rule labels for {} symbols",
                self.lhs,
                self.rhs.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "),
                self.rule.len(),
                self.rhs.len()
            )));
        }
        if self.rule.iter().any(|r| *r > 2) {
            return Err(Error::Grammar(format!(
                "production {} has a rule label outside {{0,1,2}}",
                self.lhs
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        for s in &self.rhs {
            write!(f, " {}", s)?;
        }
        write!(f, " :")?;
        for r in &self.rule {
            write!(f, " {}", r)?;
        }
        Ok(())
    }
}

/// Ordered production list; order is the first-parse disambiguation policy.
#[derive(Debug, Clone)]
pub struct CfgGrammar {
    pub productions: Vec<Production>,
    pub start: String,
    by_lhs: HashMap<String, Vec<usize>>,
}

impl CfgGrammar {
    pub fn new(productions: Vec<Production>, start: &str) -> Result<CfgGrammar> {
        for p in &productions {
            p.validate()?;
        }
        let mut by_lhs: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, p) in productions.iter().enumerate() {
            by_lhs.entry(p.lhs.clone()).or_default().push(i);
        }
        Ok(CfgGrammar {
            productions,
            start: start.to_string(),
            by_lhs,
        })
    }

    pub fn productions_for(&self, sym: &str) -> &[usize] {
        self.by_lhs.get(sym).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn has_productions(&self, sym: &str) -> bool {
        !self.productions_for(sym).is_empty()
    }

    /// Parses the grammar file format, one `LHS -> SYMS : RULE` per line.
    /// The start symbol is the first production's left-hand side.
    pub fn parse_str(src: &str) -> Result<CfgGrammar> {
        let mut productions = Vec::new();
        for (lineno, raw) in src.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |m: &str| Error::Grammar(format!("line {}: {}", lineno + 1, m));
            let (lhs, rest) = line.split_once("->").ok_or_else(|| bad("missing `->`"))?;
            let (rhs_part, rule_part) = rest.split_once(':').ok_or_else(|| bad("missing `:`"))?;
            let lhs = lhs.trim();
            if lhs.is_empty() {
                return Err(bad("empty left-hand side"));
            }
            let mut rhs = Vec::new();
            for tok in rhs_part.split_whitespace() {
                if let Some(word) = tok.strip_prefix('"').and_then(|t| t.strip_suffix('"')) {
                    rhs.push(Sym::Word(word.to_string()));
                } else {
                    rhs.push(Sym::Ref(tok.to_string()));
                }
            }
            let mut rule = Vec::new();
            for tok in rule_part.split_whitespace() {
                rule.push(tok.parse::<u8>().map_err(|_| bad("rule labels must be 0, 1 or 2"))?);
            }
            productions.push(
                Production::new(lhs, rhs, rule).map_err(|e| bad(&e.to_string()))?,
            );
        }
        if productions.is_empty() {
            return Err(Error::Grammar("no productions".into()));
        }
        let start = productions[0].lhs.clone();
        CfgGrammar::new(productions, &start)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.productions {
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }

    /// The default statement grammar shipped with the crate.
    pub fn default_statements() -> CfgGrammar {
        CfgGrammar::parse_str(include_str!("../data/grammar_statements.txt"))
            .expect("embedded grammar is well-formed")
    }
}

/// Builds the sentence-specific grammar: template productions whose expansion
/// can touch the observed tags, plus one pass-through lexical production
/// `TAG -> "word"` per token.
pub fn generate_grammar(tags: &[Tag], tokens: &[String], templates: &[Production]) -> Result<CfgGrammar> {
    if tags.len() != tokens.len() {
        return Err(Error::Config(format!(
            "{} tags for {} tokens",
            tags.len(),
            tokens.len()
        )));
    }
    let tag_set: BTreeSet<&str> = tags.iter().map(|t| t.as_str()).collect();
    let word_set: BTreeSet<&str> = tokens.iter().map(|t| t.as_str()).collect();

    let mut lexical: Vec<Production> = Vec::new();
    let mut seen = BTreeSet::new();
    for (tok, tag) in tokens.iter().zip(tags) {
        let key = (tag.as_str(), tok.as_str());
        if seen.insert(key) {
            let dup = templates
                .iter()
                .any(|p| p.lhs == tag.as_str() && p.rhs == [Sym::Word(tok.clone())]);
            if !dup {
                lexical.push(Production {
                    lhs: tag.as_str().to_string(),
                    rhs: vec![Sym::Word(tok.clone())],
                    rule: vec![1],
                });
            }
        }
    }

    // Viability fixpoint: a production survives if every rhs symbol can match
    // something in this sentence, directly or through surviving productions.
    let all: Vec<&Production> = templates.iter().chain(lexical.iter()).collect();
    let mut viable_syms: BTreeSet<&str> = BTreeSet::new();
    let mut viable_prod = vec![false; all.len()];
    let has_prods: BTreeSet<&str> = all.iter().map(|p| p.lhs.as_str()).collect();
    loop {
        let mut changed = false;
        for (i, p) in all.iter().enumerate() {
            if viable_prod[i] {
                continue;
            }
            let ok = p.rhs.iter().all(|s| match s {
                Sym::Word(w) => word_set.contains(w.as_str()),
                Sym::Ref(r) => {
                    if has_prods.contains(r.as_str()) {
                        viable_syms.contains(r.as_str())
                    } else {
                        tag_set.contains(r.as_str())
                    }
                }
            });
            if ok {
                viable_prod[i] = true;
                changed = true;
                viable_syms.insert(p.lhs.as_str());
            }
        }
        if !changed {
            break;
        }
    }

    let mut productions: Vec<Production> = Vec::new();
    for (i, p) in templates.iter().enumerate() {
        if viable_prod[i] {
            productions.push(p.clone());
        }
    }
    for (i, p) in lexical.iter().enumerate() {
        if viable_prod[templates.len() + i] {
            productions.push(p.clone());
        }
    }
    let start = templates
        .first()
        .map(|p| p.lhs.clone())
        .unwrap_or_else(|| "S".to_string());
    CfgGrammar::new(productions, &start)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        let g = CfgGrammar::parse_str("S -> NP VP : 1 1\nNP -> \"dog\" : 1\n").unwrap();
        assert_eq!(g.start, "S");
        assert_eq!(g.productions.len(), 2);
        assert_eq!(g.productions[1].rhs, vec![Sym::Word("dog".into())]);
        let round = CfgGrammar::parse_str(&g.to_text()).unwrap();
        assert_eq!(round.productions, g.productions);
    }

    #[test]
    fn rejects_bad_rule_vectors() {
        assert!(CfgGrammar::parse_str("S -> NP VP : 1\n").is_err());
        assert!(CfgGrammar::parse_str("S -> NP : 3\n").is_err());
        assert!(CfgGrammar::parse_str("S -> : \n").is_err());
    }

    #[test]
    fn default_grammar_loads() {
        let g = CfgGrammar::default_statements();
        assert_eq!(g.start, "S");
        assert!(g.has_productions("NP"));
        assert!(g.has_productions("QP"));
        for p in &g.productions {
            assert_eq!(p.rule.len(), p.rhs.len());
        }
    }

    #[test]
    fn lexical_productions_added() {
        let g = generate_grammar(
            &[Tag::Dt, Tag::N],
            &["the".into(), "dog".into()],
            &CfgGrammar::default_statements().productions,
        )
        .unwrap();
        assert!(g
            .productions
            .iter()
            .any(|p| p.lhs == "DT" && p.rhs == [Sym::Word("the".into())] && p.rule == [1]));
        assert!(g
            .productions
            .iter()
            .any(|p| p.lhs == "N" && p.rhs == [Sym::Word("dog".into())]));
        // nothing verb-related can touch these tags
        assert!(!g.has_productions("VP"));
    }

    #[test]
    fn empty_templates_give_lexical_only() {
        let g = generate_grammar(&[Tag::N], &["telescope".into()], &[]).unwrap();
        assert_eq!(g.productions.len(), 1);
        assert_eq!(g.start, "S");
        assert!(!g.has_productions("S"));
    }
}
