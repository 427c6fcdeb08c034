//! Part-of-speech tagging over the closed tagset, via a bigram HMM with
//! add-one smoothing and Viterbi decoding.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::io::{BufRead, Write};

/// The closed set of word-level tags, in table row order. The row order is
/// also the Viterbi tie-breaking order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Adj,
    Adv,
    Cc,
    Cd,
    Dt,
    Ex,
    In,
    N,
    P,
    Sym,
    To,
    V,
    Wdt,
    Wp,
    Wrb,
}

pub const TAG_COUNT: usize = 15;

impl Tag {
    pub const ALL: [Tag; TAG_COUNT] = [
        Tag::Adj,
        Tag::Adv,
        Tag::Cc,
        Tag::Cd,
        Tag::Dt,
        Tag::Ex,
        Tag::In,
        Tag::N,
        Tag::P,
        Tag::Sym,
        Tag::To,
        Tag::V,
        Tag::Wdt,
        Tag::Wp,
        Tag::Wrb,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Adj => "ADJ",
            Tag::Adv => "ADV",
            Tag::Cc => "CC",
            Tag::Cd => "CD",
            Tag::Dt => "DT",
            Tag::Ex => "EX",
            Tag::In => "IN",
            Tag::N => "N",
            Tag::P => "P",
            Tag::Sym => "SYM",
            Tag::To => "TO",
            Tag::V => "V",
            Tag::Wdt => "WDT",
            Tag::Wp => "WP",
            Tag::Wrb => "WRB",
        }
    }

    pub fn parse(s: &str) -> Option<Tag> {
        Tag::ALL.iter().copied().find(|t| t.as_str() == s)
    }

    fn index(self) -> usize {
        Tag::ALL.iter().position(|&t| t == self).unwrap()
    }
}

impl std::fmt::Display for Tag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Phrase-level labels used by the grammar on top of the word tags.
pub const PHRASE_LABELS: [&str; 14] = [
    "ADJP", "ADVC", "ADVP", "ATTC", "CONJP", "NP", "OC", "PP", "QP", "S", "SBAR", "SC", "TOP",
    "VP",
];

/// Maps a Penn Treebank tag onto the closed tagset. WP is kept on its own row
/// rather than folded into P, so that WH-pronoun productions stay reachable.
pub fn penn_to_tag(penn: &str) -> Option<Tag> {
    match penn {
        "JJ" | "JJR" | "JJS" => Some(Tag::Adj),
        "RB" | "RBR" | "RBS" => Some(Tag::Adv),
        "CC" => Some(Tag::Cc),
        "CD" => Some(Tag::Cd),
        "DT" => Some(Tag::Dt),
        "EX" => Some(Tag::Ex),
        "IN" => Some(Tag::In),
        "NN" | "NNP" | "NNPS" | "NNS" => Some(Tag::N),
        "PRP" | "PRP$" | "WP$" => Some(Tag::P),
        "." | "," | "!" | "?" | ";" | ":" => Some(Tag::Sym),
        "TO" => Some(Tag::To),
        "MD" | "VB" | "VBD" | "VBG" | "VBN" | "VBP" | "VBZ" => Some(Tag::V),
        "WDT" => Some(Tag::Wdt),
        "WP" => Some(Tag::Wp),
        "WRB" => Some(Tag::Wrb),
        _ => None,
    }
}

/// Fallback tag for words never seen in training.
pub fn shape_tag(word: &str) -> Tag {
    if !word.is_empty() && word.chars().all(|c| c.is_ascii_punctuation()) {
        Tag::Sym
    } else if word.chars().any(|c| c.is_ascii_digit()) {
        Tag::Cd
    } else {
        // capitalized and unshaped words both fall back to noun
        Tag::N
    }
}

#[derive(Debug, Clone)]
pub struct TaggerModel {
    emissions: BTreeMap<String, [u64; TAG_COUNT]>,
    transitions: [[u64; TAG_COUNT]; TAG_COUNT],
    initials: [u64; TAG_COUNT],
    tag_totals: [u64; TAG_COUNT],
    sentence_count: u64,
    /// Training tokens dropped because their tag was not mappable.
    skipped_tags: u64,
}

/// Trains the HMM from (word, tag) sequences. Tags may be Penn Treebank tags
/// (mapped through `penn_to_tag`) or already members of the closed set;
/// anything else is skipped and counted.
pub fn train_tagger(corpus: &[Vec<(String, String)>]) -> Result<TaggerModel> {
    if corpus.is_empty() {
        return Err(Error::Config("tagged corpus is empty".into()));
    }
    let mut m = TaggerModel {
        emissions: BTreeMap::new(),
        transitions: [[0; TAG_COUNT]; TAG_COUNT],
        initials: [0; TAG_COUNT],
        tag_totals: [0; TAG_COUNT],
        sentence_count: 0,
        skipped_tags: 0,
    };
    let mut mapped_tokens = 0u64;
    for sentence in corpus {
        let mut prev: Option<usize> = None;
        let mut first = true;
        for (word, raw_tag) in sentence {
            let tag = match penn_to_tag(raw_tag).or_else(|| Tag::parse(raw_tag)) {
                Some(t) => t,
                None => {
                    m.skipped_tags += 1;
                    continue;
                }
            };
            let ti = tag.index();
            mapped_tokens += 1;
            m.emissions.entry(word.clone()).or_insert([0; TAG_COUNT])[ti] += 1;
            m.tag_totals[ti] += 1;
            if first {
                m.initials[ti] += 1;
                m.sentence_count += 1;
                first = false;
            }
            if let Some(p) = prev {
                m.transitions[p][ti] += 1;
            }
            prev = Some(ti);
        }
    }
    if mapped_tokens == 0 {
        return Err(Error::Config("no mappable tokens in tagged corpus".into()));
    }
    Ok(m)
}

impl TaggerModel {
    pub fn skipped_tags(&self) -> u64 {
        self.skipped_tags
    }

    fn log_initial(&self, t: usize) -> f64 {
        ((self.initials[t] + 1) as f64 / (self.sentence_count + TAG_COUNT as u64) as f64).ln()
    }

    fn log_transition(&self, from: usize, to: usize) -> f64 {
        ((self.transitions[from][to] + 1) as f64
            / (self.tag_totals[from] + TAG_COUNT as u64) as f64)
            .ln()
    }

    fn log_emission(&self, counts: &[u64; TAG_COUNT], t: usize) -> f64 {
        let vocab = self.emissions.len() as u64;
        ((counts[t] + 1) as f64 / (self.tag_totals[t] + vocab + 1) as f64).ln()
    }

    /// One tag per token, by Viterbi decoding. Unknown words are forced to
    /// their shape-class tag. Ties resolve to the earliest tag in row order.
    pub fn tag(&self, tokens: &[String]) -> Vec<Tag> {
        if tokens.is_empty() {
            return Vec::new();
        }
        let n = tokens.len();
        // allowed[i] is None for known words (any tag, scored by emission)
        let allowed: Vec<Option<usize>> = tokens
            .iter()
            .map(|w| {
                if self.emissions.contains_key(w) {
                    None
                } else {
                    Some(shape_tag(w).index())
                }
            })
            .collect();

        let mut score = vec![[f64::NEG_INFINITY; TAG_COUNT]; n];
        let mut back = vec![[0usize; TAG_COUNT]; n];
        for t in 0..TAG_COUNT {
            let emit = match allowed[0] {
                Some(forced) if forced != t => continue,
                Some(_) => 0.0,
                None => self.log_emission(&self.emissions[&tokens[0]], t),
            };
            score[0][t] = self.log_initial(t) + emit;
        }
        for i in 1..n {
            for t in 0..TAG_COUNT {
                let emit = match allowed[i] {
                    Some(forced) if forced != t => continue,
                    Some(_) => 0.0,
                    None => self.log_emission(&self.emissions[&tokens[i]], t),
                };
                let mut best = f64::NEG_INFINITY;
                let mut arg = 0;
                for p in 0..TAG_COUNT {
                    if score[i - 1][p] == f64::NEG_INFINITY {
                        continue;
                    }
                    let cand = score[i - 1][p] + self.log_transition(p, t);
                    if cand > best {
                        best = cand;
                        arg = p;
                    }
                }
                score[i][t] = best + emit;
                back[i][t] = arg;
            }
        }
        let mut last = 0;
        let mut best = f64::NEG_INFINITY;
        for t in 0..TAG_COUNT {
            if score[n - 1][t] > best {
                best = score[n - 1][t];
                last = t;
            }
        }
        let mut path = vec![last; n];
        for i in (1..n).rev() {
            path[i - 1] = back[i][path[i]];
        }
        path.into_iter().map(|t| Tag::ALL[t]).collect()
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "tagger-model v1")?;
        writeln!(w, "S {}", self.sentence_count)?;
        writeln!(w, "K {}", self.skipped_tags)?;
        for (t, c) in self.initials.iter().enumerate() {
            if *c > 0 {
                writeln!(w, "I {} {}", Tag::ALL[t].as_str(), c)?;
            }
        }
        for (a, row) in self.transitions.iter().enumerate() {
            for (b, c) in row.iter().enumerate() {
                if *c > 0 {
                    writeln!(w, "T {} {} {}", Tag::ALL[a].as_str(), Tag::ALL[b].as_str(), c)?;
                }
            }
        }
        for (word, counts) in &self.emissions {
            for (t, c) in counts.iter().enumerate() {
                if *c > 0 {
                    writeln!(w, "E {} {} {}", word, Tag::ALL[t].as_str(), c)?;
                }
            }
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<TaggerModel> {
        let mut lines = r.lines();
        match lines.next() {
            Some(Ok(h)) if h.trim() == "tagger-model v1" => {}
            _ => return Err(Error::Format("bad tagger model header".into())),
        }
        let mut m = TaggerModel {
            emissions: BTreeMap::new(),
            transitions: [[0; TAG_COUNT]; TAG_COUNT],
            initials: [0; TAG_COUNT],
            tag_totals: [0; TAG_COUNT],
            sentence_count: 0,
            skipped_tags: 0,
        };
        let bad = |n: usize| Error::Format(format!("bad tagger model line {}", n + 2));
        for (n, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(' ').collect();
            match parts.as_slice() {
                ["S", c] => m.sentence_count = c.parse().map_err(|_| bad(n))?,
                ["K", c] => m.skipped_tags = c.parse().map_err(|_| bad(n))?,
                ["I", tag, c] => {
                    let t = Tag::parse(tag).ok_or_else(|| bad(n))?.index();
                    m.initials[t] = c.parse().map_err(|_| bad(n))?;
                }
                ["T", a, b, c] => {
                    let a = Tag::parse(a).ok_or_else(|| bad(n))?.index();
                    let b = Tag::parse(b).ok_or_else(|| bad(n))?.index();
                    m.transitions[a][b] = c.parse().map_err(|_| bad(n))?;
                }
                ["E", word, tag, c] => {
                    let t = Tag::parse(tag).ok_or_else(|| bad(n))?.index();
                    m.emissions.entry(word.to_string()).or_insert([0; TAG_COUNT])[t] =
                        c.parse().map_err(|_| bad(n))?;
                }
                _ => return Err(bad(n)),
            }
        }
        for counts in m.emissions.values() {
            for (t, c) in counts.iter().enumerate() {
                m.tag_totals[t] += c;
            }
        }
        Ok(m)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_to(&mut f)
    }

    pub fn load(path: &std::path::Path) -> Result<TaggerModel> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        TaggerModel::read_from(f)
    }
}

/// Parses `word/TAG` tokens (tags from the closed set). Used both for
/// pre-tagged sentences that bypass the tagger and, with Penn tags, for
/// training corpora.
pub fn parse_pretagged(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        let (word, tag) = tok
            .rsplit_once('/')
            .ok_or_else(|| Error::Format(format!("token `{}` is not word/TAG", tok)))?;
        if word.is_empty() {
            return Err(Error::Format(format!("token `{}` has an empty word", tok)));
        }
        out.push((word.to_string(), tag.to_string()));
    }
    if out.is_empty() {
        return Err(Error::Format("empty pre-tagged sentence".into()));
    }
    Ok(out)
}

/// Interprets pre-tagged input with closed-set tags.
pub fn pretagged_sentence(text: &str) -> Result<(Vec<String>, Vec<Tag>)> {
    let pairs = parse_pretagged(text)?;
    let mut words = Vec::with_capacity(pairs.len());
    let mut tags = Vec::with_capacity(pairs.len());
    for (w, t) in pairs {
        let tag = Tag::parse(&t)
            .ok_or_else(|| Error::Format(format!("`{}` is not a tag of the closed set", t)))?;
        words.push(w);
        tags.push(tag);
    }
    Ok((words, tags))
}
