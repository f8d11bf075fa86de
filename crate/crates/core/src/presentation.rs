//! Presentations of finite two-dimensional complexes: k circles wedged at a
//! point plus r two-cells attached along words in the circles.
//!
//! Text format, one statement per line, `#` starts a comment:
//!
//! ```text
//! circles a b
//! cell D = a b a^- b^-
//! ```
//!
//! A letter is a circle name or a circle name followed by `^-` for the
//! inverse.  Attaching words are kept verbatim: they are not freely reduced,
//! because the chain-level coproduct depends on the actual word.

use num::bigint::BigInt;
use num::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlinalg::{smith_normal_form, SparseMatrix};

/// One letter of an attaching word: a circle traversed forward or backward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    /// 0-based circle index.
    pub circle: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn sign(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// An attaching word, possibly empty (a two-cell glued onto the basepoint).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AttachingWord {
    pub letters: Vec<Letter>,
}

impl AttachingWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        AttachingWord { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// A finite two-complex: named circles and named two-cells with words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexPresentation {
    circle_names: Vec<String>,
    cell_names: Vec<String>,
    words: Vec<AttachingWord>,
}

impl ComplexPresentation {
    /// Validates name uniqueness and that every letter refers to a declared
    /// circle.  The point complex (no circles, no cells) is allowed.
    pub fn new(circle_names: Vec<String>, cells: Vec<(String, AttachingWord)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for name in &circle_names {
            if !seen.insert(name.clone()) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate circle name {name:?}"
                )));
            }
        }
        let mut cell_names = Vec::new();
        let mut words = Vec::new();
        for (name, word) in cells {
            if !seen.insert(name.clone()) {
                return Err(Error::InvalidParameter(format!("duplicate name {name:?}")));
            }
            for l in &word.letters {
                if l.circle >= circle_names.len() {
                    return Err(Error::InvalidParameter(format!(
                        "cell {name:?} refers to circle index {} out of range",
                        l.circle
                    )));
                }
            }
            cell_names.push(name);
            words.push(word);
        }
        Ok(ComplexPresentation {
            circle_names,
            cell_names,
            words,
        })
    }

    pub fn circle_count(&self) -> usize {
        self.circle_names.len()
    }

    pub fn cell_count(&self) -> usize {
        self.words.len()
    }

    pub fn circle_names(&self) -> &[String] {
        &self.circle_names
    }

    pub fn cell_names(&self) -> &[String] {
        &self.cell_names
    }

    pub fn word(&self, cell: usize) -> &AttachingWord {
        &self.words[cell]
    }

    pub fn words(&self) -> &[AttachingWord] {
        &self.words
    }

    /// Signed letter counts of the word of one cell: the boundary of the
    /// two-cell in cellular homology.
    pub fn abelianized_word(&self, cell: usize) -> Vec<i64> {
        abelianize(&self.words[cell], self.circle_count())
    }

    /// Text rendering; `parse_presentation` of the output reproduces self.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if !self.circle_names.is_empty() {
            out.push_str("circles");
            for n in &self.circle_names {
                out.push(' ');
                out.push_str(n);
            }
            out.push('\n');
        }
        for (name, word) in self.cell_names.iter().zip(&self.words) {
            out.push_str("cell ");
            out.push_str(name);
            out.push_str(" =");
            for l in &word.letters {
                out.push(' ');
                out.push_str(&self.circle_names[l.circle]);
                if l.inverse {
                    out.push_str("^-");
                }
            }
            out.push('\n');
        }
        out
    }

    /// JSON rendering for machine output.  Word letters use 1-based circle
    /// indices paired with exponent +1 or -1.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct CellJson<'a> {
            name: &'a str,
            word: Vec<(usize, i64)>,
        }
        #[derive(Serialize)]
        struct PresJson<'a> {
            circles: &'a [String],
            cells: Vec<CellJson<'a>>,
        }
        let cells = self
            .cell_names
            .iter()
            .zip(&self.words)
            .map(|(name, w)| CellJson {
                name,
                word: w.letters.iter().map(|l| (l.circle + 1, l.sign())).collect(),
            })
            .collect();
        serde_json::to_value(PresJson {
            circles: &self.circle_names,
            cells,
        })
        .expect("presentation serializes")
    }
}

fn valid_name(tok: &str) -> bool {
    let mut chars = tok.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses the line-based text format.  Errors carry 1-based line and column.
pub fn parse_presentation(text: &str) -> Result<ComplexPresentation> {
    let mut circle_names: Vec<String> = Vec::new();
    let mut circle_index = std::collections::HashMap::new();
    let mut cells: Vec<(String, AttachingWord)> = Vec::new();
    let mut all_names = std::collections::HashSet::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        // Tokens with 1-based character columns.
        let mut tokens: Vec<(usize, &str)> = Vec::new();
        let mut col = 0usize;
        let mut start: Option<(usize, usize)> = None; // (col, byte)
        for (byte, ch) in content.char_indices() {
            col += 1;
            if ch.is_whitespace() {
                if let Some((c0, b0)) = start.take() {
                    tokens.push((c0, &content[b0..byte]));
                }
            } else if start.is_none() {
                start = Some((col, byte));
            }
        }
        if let Some((c0, b0)) = start {
            tokens.push((c0, &content[b0..]));
        }
        if tokens.is_empty() {
            continue;
        }

        match tokens[0].1 {
            "circles" => {
                if tokens.len() == 1 {
                    return Err(Error::parse(
                        line,
                        tokens[0].0,
                        "expected at least one circle name",
                    ));
                }
                for &(c, name) in &tokens[1..] {
                    if !valid_name(name) {
                        return Err(Error::parse(
                            line,
                            c,
                            format!("invalid circle name {name:?}"),
                        ));
                    }
                    if !all_names.insert(name.to_string()) {
                        return Err(Error::parse(line, c, format!("duplicate name {name:?}")));
                    }
                    circle_index.insert(name.to_string(), circle_names.len());
                    circle_names.push(name.to_string());
                }
            }
            "cell" => {
                if tokens.len() < 2 {
                    return Err(Error::parse(line, tokens[0].0, "expected cell name"));
                }
                let (name_col, name) = tokens[1];
                if !valid_name(name) {
                    return Err(Error::parse(
                        line,
                        name_col,
                        format!("invalid cell name {name:?}"),
                    ));
                }
                if tokens.len() < 3 || tokens[2].1 != "=" {
                    let col = tokens.get(2).map_or(name_col + name.len(), |t| t.0);
                    return Err(Error::parse(line, col, "expected '=' after cell name"));
                }
                if !all_names.insert(name.to_string()) {
                    return Err(Error::parse(
                        line,
                        name_col,
                        format!("duplicate name {name:?}"),
                    ));
                }
                let mut letters = Vec::new();
                for &(c, tok) in &tokens[3..] {
                    let (base, inverse) = match tok.strip_suffix("^-") {
                        Some(b) => (b, true),
                        None => (tok, false),
                    };
                    if base.contains('^') || !valid_name(base) {
                        return Err(Error::parse(
                            line,
                            c,
                            format!("malformed letter {tok:?}; expected name or name^-"),
                        ));
                    }
                    let Some(&idx) = circle_index.get(base) else {
                        return Err(Error::parse(
                            line,
                            c,
                            format!("unknown circle name {base:?}"),
                        ));
                    };
                    letters.push(Letter {
                        circle: idx,
                        inverse,
                    });
                }
                cells.push((name.to_string(), AttachingWord::new(letters)));
            }
            other => {
                return Err(Error::parse(
                    line,
                    tokens[0].0,
                    format!("unknown statement {other:?}; expected 'circles' or 'cell'"),
                ));
            }
        }
    }

    ComplexPresentation::new(circle_names, cells)
}

/// Signed letter counts of a word over k circles.
pub fn abelianize(word: &AttachingWord, k: usize) -> Vec<i64> {
    let mut counts = vec![0i64; k];
    for l in &word.letters {
        counts[l.circle] += l.sign();
    }
    counts
}

/// Built-in complexes used throughout the verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedComplex {
    /// One two-cell on the basepoint: the two-sphere.
    Sphere,
    /// One circle, two cells attached by a and a^-: also the two-sphere.
    SphereTwoCells,
    /// Orientable surface of genus g >= 1: product of g commutators.
    OrientableSurface(u32),
    /// Non-orientable surface of genus g >= 1: word a1 a1 a2 a2 ... ag ag.
    NonorientableSurface(u32),
    /// One circle with one cell attached by a^m, m >= 1.
    LensAttach(u32),
    /// k circles, no cells; k = 0 is the point.
    Bouquet(u32),
    /// Moore space M(Z/m, 1), m >= 2; same presentation as LensAttach(m).
    Moore(u32),
}

impl NamedComplex {
    pub fn build(self) -> Result<ComplexPresentation> {
        match self {
            NamedComplex::Sphere => {
                ComplexPresentation::new(vec![], vec![("D".into(), AttachingWord::default())])
            }
            NamedComplex::SphereTwoCells => {
                let a = |inverse| Letter { circle: 0, inverse };
                ComplexPresentation::new(
                    vec!["a".into()],
                    vec![
                        ("D1".into(), AttachingWord::new(vec![a(false)])),
                        ("D2".into(), AttachingWord::new(vec![a(true)])),
                    ],
                )
            }
            NamedComplex::OrientableSurface(g) => {
                if g == 0 {
                    return Err(Error::InvalidParameter(
                        "orientable genus must be at least 1 (genus 0 is the sphere)".into(),
                    ));
                }
                let g = g as usize;
                let names = (1..=2 * g).map(|i| format!("a{i}")).collect();
                let mut letters = Vec::new();
                for i in 0..g {
                    // Commutator [a_i, a_{i+g}].
                    letters.push(Letter {
                        circle: i,
                        inverse: false,
                    });
                    letters.push(Letter {
                        circle: i + g,
                        inverse: false,
                    });
                    letters.push(Letter {
                        circle: i,
                        inverse: true,
                    });
                    letters.push(Letter {
                        circle: i + g,
                        inverse: true,
                    });
                }
                ComplexPresentation::new(names, vec![("D".into(), AttachingWord::new(letters))])
            }
            NamedComplex::NonorientableSurface(g) => {
                if g == 0 {
                    return Err(Error::InvalidParameter(
                        "non-orientable genus must be at least 1".into(),
                    ));
                }
                let g = g as usize;
                let names = (1..=g).map(|i| format!("a{i}")).collect();
                let mut letters = Vec::new();
                for i in 0..g {
                    letters.push(Letter {
                        circle: i,
                        inverse: false,
                    });
                    letters.push(Letter {
                        circle: i,
                        inverse: false,
                    });
                }
                ComplexPresentation::new(names, vec![("D".into(), AttachingWord::new(letters))])
            }
            NamedComplex::LensAttach(m) => {
                if m == 0 {
                    return Err(Error::InvalidParameter(
                        "attaching degree must be at least 1".into(),
                    ));
                }
                let letters = (0..m)
                    .map(|_| Letter {
                        circle: 0,
                        inverse: false,
                    })
                    .collect();
                ComplexPresentation::new(
                    vec!["a".into()],
                    vec![("D".into(), AttachingWord::new(letters))],
                )
            }
            NamedComplex::Bouquet(k) => {
                ComplexPresentation::new((1..=k).map(|i| format!("a{i}")).collect(), vec![])
            }
            NamedComplex::Moore(m) => {
                if m < 2 {
                    return Err(Error::InvalidParameter(
                        "Moore space order must be at least 2".into(),
                    ));
                }
                NamedComplex::LensAttach(m).build()
            }
        }
    }
}

impl std::str::FromStr for NamedComplex {
    type Err = Error;

    /// Names used on the command line: `sphere`, `sphere2`, `surface:g`,
    /// `nonorientable:g`, `lens:m`, `bouquet:k`, `moore:m`, and the aliases
    /// `torus`, `rp2`, `klein`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (head, param) = match t.split_once(':') {
            Some((h, p)) => (h, Some(p)),
            None => (t, None),
        };
        let parse_param = |what: &str| -> Result<u32> {
            let p = param.ok_or_else(|| {
                Error::InvalidParameter(format!("{head} needs a parameter, e.g. {head}:{what}"))
            })?;
            p.parse()
                .map_err(|_| Error::InvalidParameter(format!("bad parameter {p:?} for {head}")))
        };
        let no_param = |v: NamedComplex| -> Result<NamedComplex> {
            if param.is_some() {
                Err(Error::InvalidParameter(format!(
                    "{head} takes no parameter"
                )))
            } else {
                Ok(v)
            }
        };
        match head {
            "sphere" => no_param(NamedComplex::Sphere),
            "sphere2" | "sphere_two_cells" | "sphere-two-cells" => {
                no_param(NamedComplex::SphereTwoCells)
            }
            "surface" | "orientable" => Ok(NamedComplex::OrientableSurface(parse_param("2")?)),
            "nonorientable" => Ok(NamedComplex::NonorientableSurface(parse_param("2")?)),
            "lens" => Ok(NamedComplex::LensAttach(parse_param("3")?)),
            "bouquet" => Ok(NamedComplex::Bouquet(parse_param("3")?)),
            "moore" => Ok(NamedComplex::Moore(parse_param("3")?)),
            "torus" => no_param(NamedComplex::OrientableSurface(1)),
            "rp2" => no_param(NamedComplex::NonorientableSurface(1)),
            "klein" => no_param(NamedComplex::NonorientableSurface(2)),
            other => Err(Error::InvalidParameter(format!(
                "unknown named complex {other:?}"
            ))),
        }
    }
}

/// The homotopy-invariant shape of H_1 and H_2 of the complex itself:
/// H_1 = Z^a + Z/n_1 + ... + Z/n_r (invariant factors, each >= 2) and
/// H_2 = Z^b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyShape {
    pub free_rank_deg1: usize,
    pub free_rank_deg2: usize,
    pub torsion_coefficients: Vec<BigUint>,
}

/// Reads off the Moore decomposition from the abelianized boundary matrix:
/// its Smith form gives H_1 and H_2 of the complex.
pub fn moore_decomposition(p: &ComplexPresentation) -> HomologyShape {
    let k = p.circle_count();
    let r = p.cell_count();
    let mut m = SparseMatrix::<BigInt>::new(k, r);
    for j in 0..r {
        for (i, c) in p.abelianized_word(j).into_iter().enumerate() {
            if c != 0 {
                m.set(i, j, BigInt::from(c));
            }
        }
    }
    let snf = smith_normal_form(&m);
    let rank = snf.rank();
    let torsion = snf
        .torsion_factors()
        .into_iter()
        .map(|d| d.to_biguint().expect("factors are positive"))
        .collect();
    HomologyShape {
        free_rank_deg1: k - rank,
        free_rank_deg2: r - rank,
        torsion_coefficients: torsion,
    }
}
