//! Order-3 language model with interpolated Kneser-Ney smoothing.
//!
//! Counts are raw n-gram occurrences over sentences padded with the start and
//! end markers. Queries interpolate trigram -> bigram -> unigram and bottom
//! out at the uniform floor 1/(|V|+1), so every returned probability is
//! strictly positive. The highest order of a query uses raw counts; lower
//! orders use continuation (type) counts, as usual for interpolated KN.

use crate::error::{Error, Result};
use crate::tokens::{TokenSeq, END_MARKER, START_MARKER};
use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

#[derive(Debug, Clone)]
pub struct NgramModel {
    discount: f64,
    uni: BTreeMap<String, u64>,
    bi: BTreeMap<(String, String), u64>,
    tri: BTreeMap<(String, String, String), u64>,

    vocab: BTreeSet<String>,
    // Kneser-Ney statistics derived from the count tables.
    bigram_types: u64,                              // N1+(. .)
    cont_uni: BTreeMap<String, u64>,                // N1+(. w)
    cont_bi: BTreeMap<(String, String), u64>,       // N1+(. w2 w3)
    mid_types: BTreeMap<String, u64>,               // N1+(. w2 .)
    mid_follow_types: BTreeMap<String, u64>,        // #{w3 : N1+(. w2 w3) > 0}
    follow_types_tri: BTreeMap<(String, String), u64>, // N1+(w1 w2 .)
    start_follow_types: u64,                        // #{w : c(start, w) > 0}
}

impl NgramModel {
    pub fn start_marker(&self) -> &'static str {
        START_MARKER
    }

    pub fn end_marker(&self) -> &'static str {
        END_MARKER
    }

    pub fn discount(&self) -> f64 {
        self.discount
    }

    pub fn vocab(&self) -> &BTreeSet<String> {
        &self.vocab
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn unigram_count(&self, w: &str) -> u64 {
        self.uni.get(w).copied().unwrap_or(0)
    }

    pub fn bigram_count(&self, w1: &str, w2: &str) -> u64 {
        self.bi.get(&(w1.to_string(), w2.to_string())).copied().unwrap_or(0)
    }

    pub fn trigram_count(&self, w1: &str, w2: &str, w3: &str) -> u64 {
        self.tri
            .get(&(w1.to_string(), w2.to_string(), w3.to_string()))
            .copied()
            .unwrap_or(0)
    }

    /// Smoothed P(w | start), a bigram query with raw counts at the top level.
    pub fn prob_start(&self, w: &str) -> Result<f64> {
        reject_marker(w, "word")?;
        let c_start = self.unigram_count(START_MARKER) as f64;
        let c = self.bigram_count(START_MARKER, w) as f64;
        let d = self.discount;
        let lambda = d * self.start_follow_types as f64;
        Ok(((c - d).max(0.0) + lambda * self.p_uni(w)) / c_start)
    }

    /// Smoothed P(w3 | w1, w2). `w1` may be the start marker (contexts that
    /// begin a compression); `w2` and `w3` must be real words or, for `w3`,
    /// the end marker.
    pub fn prob_trigram(&self, w1: &str, w2: &str, w3: &str) -> Result<f64> {
        if w1 == END_MARKER {
            return Err(Error::InvalidQuery("end marker cannot open a context".into()));
        }
        reject_marker(w2, "context word")?;
        if w3 == START_MARKER {
            return Err(Error::InvalidQuery("start marker cannot be predicted".into()));
        }
        let cc = self.bigram_count(w1, w2) as f64;
        if cc == 0.0 {
            return Ok(self.p_cont_bi(w2, w3));
        }
        let c = self.trigram_count(w1, w2, w3) as f64;
        let follow = self
            .follow_types_tri
            .get(&(w1.to_string(), w2.to_string()))
            .copied()
            .unwrap_or(0) as f64;
        let d = self.discount;
        Ok(((c - d).max(0.0) + d * follow * self.p_cont_bi(w2, w3)) / cc)
    }

    /// Smoothed P(end | w1, w2).
    pub fn prob_end(&self, w1: &str, w2: &str) -> Result<f64> {
        self.prob_trigram(w1, w2, END_MARKER)
    }

    /// Continuation-count bigram estimate used below the trigram level.
    fn p_cont_bi(&self, w2: &str, w3: &str) -> f64 {
        let denom = self.mid_types.get(w2).copied().unwrap_or(0) as f64;
        if denom == 0.0 {
            return self.p_uni(w3);
        }
        let c = self
            .cont_bi
            .get(&(w2.to_string(), w3.to_string()))
            .copied()
            .unwrap_or(0) as f64;
        let follow = self.mid_follow_types.get(w2).copied().unwrap_or(0) as f64;
        let d = self.discount;
        ((c - d).max(0.0) + d * follow * self.p_uni(w3)) / denom
    }

    /// Continuation-count unigram estimate interpolated with the uniform
    /// floor 1/(|V|+1) over V plus the end marker.
    fn p_uni(&self, w: &str) -> f64 {
        let t = self.bigram_types as f64;
        let c = self.cont_uni.get(w).copied().unwrap_or(0) as f64;
        let types = self.cont_uni.len() as f64;
        let uniform = 1.0 / (self.vocab.len() as f64 + 1.0);
        ((c - self.discount).max(0.0) + self.discount * types * uniform) / t
    }
}

fn reject_marker(w: &str, role: &str) -> Result<()> {
    if w == START_MARKER || w == END_MARKER {
        return Err(Error::InvalidQuery(format!("reserved marker used as {}", role)));
    }
    Ok(())
}

/// Trains the model: raw n-gram counts over marker-padded sentences plus the
/// derived Kneser-Ney statistics.
pub fn train(corpus: &[TokenSeq], discount: f64) -> Result<NgramModel> {
    if corpus.is_empty() {
        return Err(Error::Config("training corpus is empty".into()));
    }
    if !(discount > 0.0 && discount < 1.0) {
        return Err(Error::Config(format!("discount must be in (0,1), got {}", discount)));
    }
    let mut uni = BTreeMap::new();
    let mut bi = BTreeMap::new();
    let mut tri = BTreeMap::new();
    for sent in corpus {
        let mut padded = Vec::with_capacity(sent.len() + 2);
        padded.push(START_MARKER.to_string());
        padded.extend(sent.tokens().iter().cloned());
        padded.push(END_MARKER.to_string());
        for w in &padded {
            *uni.entry(w.clone()).or_insert(0) += 1;
        }
        for w in padded.windows(2) {
            *bi.entry((w[0].clone(), w[1].clone())).or_insert(0) += 1;
        }
        for w in padded.windows(3) {
            *tri.entry((w[0].clone(), w[1].clone(), w[2].clone())).or_insert(0) += 1;
        }
    }
    Ok(finish(uni, bi, tri, discount))
}

fn finish(
    uni: BTreeMap<String, u64>,
    bi: BTreeMap<(String, String), u64>,
    tri: BTreeMap<(String, String, String), u64>,
    discount: f64,
) -> NgramModel {
    let vocab: BTreeSet<String> = uni
        .keys()
        .filter(|w| w.as_str() != START_MARKER && w.as_str() != END_MARKER)
        .cloned()
        .collect();

    let mut cont_uni: BTreeMap<String, u64> = BTreeMap::new();
    let mut start_follow_types = 0;
    for (w1, w2) in bi.keys() {
        *cont_uni.entry(w2.clone()).or_insert(0) += 1;
        if w1 == START_MARKER {
            start_follow_types += 1;
        }
    }
    let bigram_types = bi.len() as u64;

    let mut cont_bi: BTreeMap<(String, String), u64> = BTreeMap::new();
    let mut follow_types_tri: BTreeMap<(String, String), u64> = BTreeMap::new();
    for (w1, w2, w3) in tri.keys() {
        *cont_bi.entry((w2.clone(), w3.clone())).or_insert(0) += 1;
        *follow_types_tri.entry((w1.clone(), w2.clone())).or_insert(0) += 1;
    }
    let mut mid_types: BTreeMap<String, u64> = BTreeMap::new();
    let mut mid_follow_types: BTreeMap<String, u64> = BTreeMap::new();
    for ((w2, _w3), c) in &cont_bi {
        *mid_types.entry(w2.clone()).or_insert(0) += c;
        *mid_follow_types.entry(w2.clone()).or_insert(0) += 1;
    }

    NgramModel {
        discount,
        uni,
        bi,
        tri,
        vocab,
        bigram_types,
        cont_uni,
        cont_bi,
        mid_types,
        mid_follow_types,
        follow_types_tri,
        start_follow_types,
    }
}

impl NgramModel {
    /// Line-oriented text format: header, then `<n>\t<tokens>\t<count>`.
    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "ngram-model v1 discount={}", self.discount)?;
        for (tok, c) in &self.uni {
            writeln!(w, "1\t{}\t{}", tok, c)?;
        }
        for ((t1, t2), c) in &self.bi {
            writeln!(w, "2\t{} {}\t{}", t1, t2, c)?;
        }
        for ((t1, t2, t3), c) in &self.tri {
            writeln!(w, "3\t{} {} {}\t{}", t1, t2, t3, c)?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<NgramModel> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty model file".into()))??;
        let discount = header
            .strip_prefix("ngram-model v1 discount=")
            .and_then(|s| s.trim().parse::<f64>().ok())
            .ok_or_else(|| Error::Format("bad model header".into()))?;
        let mut uni = BTreeMap::new();
        let mut bi = BTreeMap::new();
        let mut tri = BTreeMap::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split('\t');
            let bad = || Error::Format(format!("bad model line {}", lineno + 2));
            let order: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let toks: Vec<&str> = parts.next().ok_or_else(bad)?.split(' ').collect();
            let count: u64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if toks.len() != order {
                return Err(bad());
            }
            match order {
                1 => {
                    uni.insert(toks[0].to_string(), count);
                }
                2 => {
                    bi.insert((toks[0].to_string(), toks[1].to_string()), count);
                }
                3 => {
                    tri.insert(
                        (toks[0].to_string(), toks[1].to_string(), toks[2].to_string()),
                        count,
                    );
                }
                _ => return Err(bad()),
            }
        }
        if uni.is_empty() {
            return Err(Error::Format("model has no unigram counts".into()));
        }
        Ok(finish(uni, bi, tri, discount))
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_to(&mut f)
    }

    pub fn load(path: &std::path::Path) -> Result<NgramModel> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        NgramModel::read_from(f)
    }
}

/// Reads a plain-text corpus, one sentence per line, skipping blank lines.
pub fn corpus_from_text(text: &str) -> Result<Vec<TokenSeq>> {
    let mut out = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        out.push(TokenSeq::parse(line)?);
    }
    if out.is_empty() {
        return Err(Error::Config("corpus has no sentences".into()));
    }
    Ok(out)
}
