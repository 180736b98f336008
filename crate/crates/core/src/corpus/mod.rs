//! Corpus ingestion: images and transcripts become bags of color-bin and
//! vocabulary tokens.

mod basis;
pub mod porter;
pub mod stopwords;
mod synthetic;
mod text;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use basis::{
    bin_representative, counts_to_tokens, decode_image, image_histogram, image_to_color_tokens, parse_histogram_csv,
    quantize_color, quantize_color_checked, tokens_to_counts, ColorBasis, BINS_PER_CHANNEL, RASTER_HEIGHT,
    RASTER_WIDTH, TOKENS_PER_IMAGE, TOTAL_BINS,
};
pub use synthetic::{block_of, generate_synthetic_corpus, SyntheticConfig, SyntheticCorpus};
pub use text::{month_to_season, normalize_piece, normalize_word, tokenize};

/// One design: a bag of color-bin tokens and a bag of word tokens.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "DocumentRecord", try_from = "DocumentRecord")]
pub struct Document {
    pub id: String,
    pub title: String,
    pub genre: String,
    pub categories: Vec<String>,
    /// Color-bin indices, sorted.
    pub color_tokens: Vec<u16>,
    /// Vocabulary indices in transcript order.
    pub word_tokens: Vec<u32>,
}

impl Document {
    pub fn new(id: impl Into<String>, color_tokens: Vec<u16>, word_tokens: Vec<u32>) -> Self {
        Self {
            id: id.into(),
            title: String::new(),
            genre: String::new(),
            categories: Vec::new(),
            color_tokens,
            word_tokens,
        }
    }

    pub fn num_colors(&self) -> usize {
        self.color_tokens.len()
    }

    pub fn num_words(&self) -> usize {
        self.word_tokens.len()
    }

    pub fn is_trainable(&self) -> bool {
        !self.color_tokens.is_empty() && !self.word_tokens.is_empty()
    }

    pub fn color_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; TOTAL_BINS];
        for &c in &self.color_tokens {
            counts[c as usize] += 1;
        }
        counts
    }
}

/// Sparse on-disk form of a document; colors stored as `(bin, count)` pairs.
#[derive(Serialize, Deserialize)]
struct DocumentRecord {
    id: String,
    #[serde(default)]
    title: String,
    #[serde(default)]
    genre: String,
    #[serde(default)]
    categories: Vec<String>,
    colors: Vec<(u16, u64)>,
    words: Vec<u32>,
}

impl From<Document> for DocumentRecord {
    fn from(doc: Document) -> Self {
        let mut colors: BTreeMap<u16, u64> = BTreeMap::new();
        for c in doc.color_tokens {
            *colors.entry(c).or_default() += 1;
        }
        Self {
            id: doc.id,
            title: doc.title,
            genre: doc.genre,
            categories: doc.categories,
            colors: colors.into_iter().collect(),
            words: doc.word_tokens,
        }
    }
}

impl TryFrom<DocumentRecord> for Document {
    type Error = Error;

    fn try_from(rec: DocumentRecord) -> Result<Self> {
        let mut color_tokens = Vec::new();
        for (bin, count) in rec.colors {
            if bin as usize >= TOTAL_BINS {
                return Err(Error::input(format!("document {}: color bin {bin} out of range", rec.id)));
            }
            color_tokens.extend(std::iter::repeat_n(bin, count as usize));
        }
        color_tokens.sort_unstable();
        Ok(Self {
            id: rec.id,
            title: rec.title,
            genre: rec.genre,
            categories: rec.categories,
            color_tokens,
            word_tokens: rec.words,
        })
    }
}

/// Ordered set of normalized word tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<String>", into = "Vec<String>")]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: HashMap<String, u32>,
}

impl Vocabulary {
    /// Builds a vocabulary keeping the first occurrence of each token, in order.
    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut vocab = Self::default();
        for t in tokens {
            let t = t.into();
            if !vocab.index.contains_key(&t) {
                vocab.index.insert(t.clone(), vocab.tokens.len() as u32);
                vocab.tokens.push(t);
            }
        }
        vocab
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }
}

impl From<Vec<String>> for Vocabulary {
    fn from(tokens: Vec<String>) -> Self {
        Self::from_tokens(tokens)
    }
}

impl From<Vocabulary> for Vec<String> {
    fn from(v: Vocabulary) -> Self {
        v.tokens
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub vocabulary: Vocabulary,
    #[serde(default)]
    pub basis: ColorBasis,
    /// Ids of entries dropped because no word survived normalization.
    #[serde(default)]
    pub excluded: Vec<String>,
}

impl Corpus {
    pub fn num_colors(&self) -> usize {
        TOTAL_BINS
    }

    pub fn num_words(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let corpus: Corpus = serde_json::from_str(&text)?;
        corpus.validate()?;
        Ok(corpus)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(self)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn validate(&self) -> Result<()> {
        let w = self.vocabulary.len();
        for doc in &self.documents {
            if let Some(&t) = doc.word_tokens.iter().find(|&&t| t as usize >= w) {
                return Err(Error::input(format!(
                    "document {}: word index {t} outside vocabulary of size {w}",
                    doc.id
                )));
            }
        }
        Ok(())
    }
}

/// Corpus manifest: `{entries:[{id,title,genre,image|histogram,transcript,categories[]}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub genre: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram: Option<PathBuf>,
    pub transcript: PathBuf,
    #[serde(default)]
    pub categories: Vec<String>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

struct Ingested {
    entry: ManifestEntry,
    colors: Vec<u16>,
    words: Vec<String>,
}

fn ingest_entry(entry: &ManifestEntry, base_dir: &Path) -> Result<Ingested> {
    let fail = |reason: String| Error::Ingestion { entry: entry.id.clone(), reason };
    let read = |p: &Path| {
        let full = base_dir.join(p);
        std::fs::read(&full).map_err(|e| fail(format!("{}: {e}", full.display())))
    };
    let counts = match (&entry.image, &entry.histogram) {
        (Some(image), _) => {
            let bytes = read(image)?;
            let img = decode_image(&bytes).map_err(|e| fail(e.to_string()))?;
            image_histogram(&img).map_err(|e| fail(e.to_string()))?
        }
        (None, Some(hist)) => {
            let bytes = read(hist)?;
            let text = String::from_utf8(bytes).map_err(|e| fail(e.to_string()))?;
            parse_histogram_csv(&text).map_err(|e| fail(e.to_string()))?
        }
        (None, None) => return Err(fail("neither `image` nor `histogram` given".into())),
    };
    let transcript = read(&entry.transcript)?;
    let transcript = String::from_utf8(transcript).map_err(|e| fail(e.to_string()))?;
    let mut words = tokenize(&transcript);
    for cat in &entry.categories {
        words.extend(tokenize(cat));
    }
    let colors = counts_to_tokens(&counts).into_iter().map(|b| b as u16).collect();
    Ok(Ingested { entry: entry.clone(), colors, words })
}

/// Ingest every entry, build the vocabulary from the union of surviving
/// tokens (sorted), and tokenize each document against it.
///
/// Relative paths in entries resolve against `base_dir`. Entries are ingested
/// on worker threads; vocabulary construction is a serial merge.
pub fn build_corpus(entries: &[ManifestEntry], base_dir: &Path) -> Result<Corpus> {
    if entries.is_empty() {
        return Err(Error::input("manifest has no entries"));
    }
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(entries.len());
    let chunk = entries.len().div_ceil(workers);
    let ingested: Vec<Ingested> = std::thread::scope(|s| {
        let handles: Vec<_> = entries
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|e| ingest_entry(e, base_dir)).collect::<Result<Vec<_>>>()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("ingestion worker panicked")).collect::<Result<Vec<Vec<_>>>>()
    })?
    .into_iter()
    .flatten()
    .collect();

    let all: BTreeSet<&str> = ingested.iter().flat_map(|i| i.words.iter().map(String::as_str)).collect();
    let vocabulary = Vocabulary::from_tokens(all);

    let mut documents = Vec::new();
    let mut excluded = Vec::new();
    for item in ingested {
        if item.words.is_empty() || item.colors.is_empty() {
            log::warn!(
                "entry `{}` has no surviving {} tokens; excluded from training",
                item.entry.id,
                if item.words.is_empty() { "word" } else { "color" }
            );
            excluded.push(item.entry.id);
            continue;
        }
        let word_tokens =
            item.words.iter().map(|w| vocabulary.get(w).expect("vocabulary built from these words")).collect();
        documents.push(Document {
            id: item.entry.id,
            title: item.entry.title,
            genre: item.entry.genre,
            categories: item.entry.categories,
            color_tokens: item.colors,
            word_tokens,
        });
    }
    Ok(Corpus { documents, vocabulary, basis: ColorBasis, excluded })
}

/// Load a manifest file and build its corpus; paths resolve against the manifest's directory.
pub fn ingest_manifest(path: &Path) -> Result<Corpus> {
    let manifest = Manifest::load(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    build_corpus(&manifest.entries, base)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, contents: &[u8]) -> PathBuf {
        std::fs::write(dir.join(name), contents).unwrap();
        PathBuf::from(name)
    }

    fn hist_csv(bins: &[(usize, u64)]) -> Vec<u8> {
        let mut h = vec![0u64; TOTAL_BINS];
        for &(b, c) in bins {
            h[b] = c;
        }
        h.iter().map(u64::to_string).collect::<Vec<_>>().join(",").into_bytes()
    }

    fn entry(id: &str, hist: PathBuf, transcript: PathBuf, cats: &[&str]) -> ManifestEntry {
        ManifestEntry {
            id: id.into(),
            title: format!("{id} title"),
            genre: "Nature".into(),
            image: None,
            histogram: Some(hist),
            transcript,
            categories: cats.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn stems_collide_into_one_vocabulary_entry() {
        let dir = tempfile::tempdir().unwrap();
        let h = write(dir.path(), "h.csv", &hist_csv(&[(3, 10)]));
        let t = write(dir.path(), "t.txt", b"garden gardens");
        let corpus = build_corpus(&[entry("a", h, t, &[])], dir.path()).unwrap();
        assert_eq!(corpus.vocabulary.len(), 1);
        assert_eq!(corpus.documents[0].num_words(), 2);
        assert_eq!(corpus.documents[0].num_colors(), 10);
    }

    #[test]
    fn category_tags_enter_vocabulary() {
        let dir = tempfile::tempdir().unwrap();
        let h = write(dir.path(), "h.csv", &hist_csv(&[(3, 10)]));
        let t = write(dir.path(), "t.txt", b"garden");
        let corpus = build_corpus(&[entry("a", h, t, &["fashion"])], dir.path()).unwrap();
        assert!(corpus.vocabulary.get("fashion").is_some());
    }

    #[test]
    fn empty_transcripts_are_excluded() {
        let dir = tempfile::tempdir().unwrap();
        let h = write(dir.path(), "h.csv", &hist_csv(&[(3, 10)]));
        let t1 = write(dir.path(), "t1.txt", b"the of and");
        let t2 = write(dir.path(), "t2.txt", b"garden");
        let corpus = build_corpus(&[entry("a", h.clone(), t1, &[]), entry("b", h, t2, &[])], dir.path()).unwrap();
        assert_eq!(corpus.excluded, vec!["a"]);
        assert_eq!(corpus.documents.len(), 1);
    }

    #[test]
    fn missing_file_names_the_entry() {
        let dir = tempfile::tempdir().unwrap();
        let h = write(dir.path(), "h.csv", &hist_csv(&[(3, 10)]));
        let err = build_corpus(&[entry("cover-7", h, "nope.txt".into(), &[])], dir.path()).unwrap_err();
        match err {
            Error::Ingestion { entry, .. } => assert_eq!(entry, "cover-7"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(build_corpus(&[], dir.path()).is_err());
    }

    #[test]
    fn vocabulary_has_no_stop_words() {
        let dir = tempfile::tempdir().unwrap();
        let h = write(dir.path(), "h.csv", &hist_csv(&[(3, 10)]));
        let t =
            write(dir.path(), "t.txt", b"The BEST tips for your Garden: 10 exclusive well-being secrets in January!");
        let corpus = build_corpus(&[entry("a", h, t, &["Home & Garden"])], dir.path()).unwrap();
        for tok in corpus.vocabulary.tokens() {
            assert!(!stopwords::is_stop_word(tok), "{tok}");
            assert!(tok.chars().all(|c| c.is_ascii_lowercase()), "{tok}");
        }
        assert!(corpus.vocabulary.get("winter").is_some());
    }

    #[test]
    fn corpus_json_round_trip() {
        let mut doc = Document::new("x", vec![0, 0, 5, 511], vec![1, 0, 1]);
        doc.title = "T".into();
        let corpus = Corpus {
            documents: vec![doc],
            vocabulary: Vocabulary::from_tokens(["a", "b"]),
            basis: ColorBasis,
            excluded: vec![],
        };
        let text = serde_json::to_string(&corpus).unwrap();
        assert!(text.contains("[[0,2],[5,1],[511,1]]"));
        let back: Corpus = serde_json::from_str(&text).unwrap();
        assert_eq!(back, corpus);
    }
}
