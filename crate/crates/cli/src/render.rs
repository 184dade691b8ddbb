//! CSV rows and unicode text renderings of the reports.

use std::fmt::Write;

use serde::Serialize;

use pdcalc::complex::ComplexSummary;
use pdcalc::formal_group::{AxiomReport, LawReport};
use pdcalc::invariant::{InvariantFormsResult, ScanResult};
use pdcalc::linalg::MatrixReport;
use pdcalc::poincare::PoincareReport;

#[derive(Clone, Debug, Serialize)]
pub struct Term {
    pub label: String,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaColumn {
    pub form: String,
    /// The image on the box basis of `omega^2`.
    pub image: Vec<Term>,
    /// The image reduced modulo the relations of `omega^2`.
    pub reduced: Vec<Term>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaTable {
    pub group: String,
    pub p: u64,
    pub m: u32,
    pub ring: String,
    #[serde(rename = "D")]
    pub d: u32,
    pub columns: Vec<DeltaColumn>,
    pub matrix: MatrixReport,
}

const BAR: char = '\u{0304}';

/// `t^{j}` becomes `t̄^{{j}}`; other text is left alone.
pub fn bar_powers(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let starts_word = i == 0 || !chars[i - 1].is_alphanumeric();
        if c.is_ascii_alphabetic() && starts_word && chars.get(i + 1) == Some(&'^') && chars.get(i + 2) == Some(&'{') {
            if let Some(close) = chars[i + 3..].iter().position(|&x| x == '}') {
                let exp: String = chars[i + 3..i + 3 + close].iter().collect();
                if exp.chars().all(|x| x.is_ascii_digit()) {
                    write!(out, "{c}{BAR}^{{{{{exp}}}}}").unwrap();
                    i += 4 + close;
                    continue;
                }
            }
        }
        out.push(c);
        i += 1;
    }
    out.replace("lambda", "λ")
}

/// `z1^{a}@s1*z1^{b}@s2` becomes `z̄^{{a}} ⊗ z̄^{{b}}`.
pub fn tensor_label(label: &str, slots: usize) -> String {
    let mut per_slot = vec![Vec::new(); slots];
    let mut base = Vec::new();
    for part in label.split('*').filter(|p| *p != "1") {
        match part.split_once("@s") {
            Some((var, slot)) => {
                let s: usize = slot.parse().unwrap_or(1);
                let (name, exp) = var.split_once('^').unwrap_or((var, ""));
                let letter = name.trim_end_matches(|c: char| c.is_ascii_digit());
                let index = &name[letter.len()..];
                let index = if index == "1" { "" } else { index };
                let exp = exp.trim_matches(|c| c == '{' || c == '}');
                if s >= 1 && s <= slots {
                    per_slot[s - 1].push(format!("{letter}{BAR}{index}^{{{{{exp}}}}}"));
                }
            }
            None => base.push(part.to_string()),
        }
    }
    let tensor = per_slot
        .iter()
        .map(|f| if f.is_empty() { "1".to_string() } else { f.join("·") })
        .collect::<Vec<_>>()
        .join(" ⊗ ");
    if base.is_empty() {
        tensor
    } else {
        format!("{} {tensor}", base.join("·"))
    }
}

fn coefficient(c: &str) -> String {
    let c = c.replace("lambda", "λ");
    if c.contains(' ') {
        format!("({c})")
    } else {
        c
    }
}

fn linear_combination<'a>(terms: impl IntoIterator<Item = (&'a str, String)>) -> String {
    let parts: Vec<String> = terms
        .into_iter()
        .map(|(c, mono)| if c == "1" { mono } else { format!("{}·{mono}", coefficient(c)) })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn letter(group: &str) -> &'static str {
    match group {
        "ga" => "t",
        "gm" => "s",
        _ => "z",
    }
}

fn form(letter: &str, coefficients: &[String]) -> String {
    linear_combination(
        coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| *c != "0")
            .map(|(j, c)| (c.as_str(), format!("{letter}{BAR}^{{{{{}}}}}", j + 1))),
    )
}

pub fn invariant_text(r: &InvariantFormsResult) -> String {
    let l = letter(&r.group);
    let mut s = String::new();
    writeln!(s, "ω^({})_0 of {} over {}, p = {}, D = {}", r.m, r.group, r.ring, r.p, r.d).unwrap();
    writeln!(s, "generators:").unwrap();
    for g in &r.generators {
        match &g.annihilator {
            Some(a) => writeln!(s, "  {}    (order {a})", form(l, &g.coefficients)).unwrap(),
            None => writeln!(s, "  {}", form(l, &g.coefficients)).unwrap(),
        }
    }
    writeln!(s, "Hodge filtration:").unwrap();
    for step in &r.fil {
        let size = match step.rank {
            Some(rank) => format!("rank {rank}"),
            None => format!("length {}", step.length),
        };
        let gens: Vec<String> = step.generators.iter().map(|g| form(l, &g.coefficients)).collect();
        writeln!(s, "  Fil^{}: {size}  [{}]", step.k, gens.join(", ")).unwrap();
        if !step.invariant_factors.is_empty() {
            writeln!(s, "          invariant factors {}", step.invariant_factors.join(", ")).unwrap();
        }
    }
    writeln!(s, "kernel of δ equals kernel of d: {}", if r.kernel_matches_d { "yes" } else { "no" }).unwrap();
    if let Some(c) = &r.naive_comparison {
        writeln!(s, "without relations the kernel has length {} instead of {}", c.naive_length, c.presented_length).unwrap();
    }
    if !r.scan.is_empty() {
        s.push_str(&scan_table(&r.scan));
    }
    s
}

#[derive(Serialize)]
pub struct FilRow {
    k: u32,
    rank: Option<usize>,
    length: u32,
    invariant_factors: String,
    generators: String,
}

pub fn fil_rows(r: &InvariantFormsResult) -> Vec<FilRow> {
    r.fil
        .iter()
        .map(|f| FilRow {
            k: f.k,
            rank: f.rank,
            length: f.length,
            invariant_factors: f.invariant_factors.join(" "),
            generators: f.generators.iter().map(|g| g.text.as_str()).collect::<Vec<_>>().join("; "),
        })
        .collect()
}

#[derive(Serialize)]
pub struct ScanCsvRow<'a> {
    lambda: &'a str,
    rank: usize,
    supersingular: bool,
    generators: String,
}

pub fn scan_rows(r: &ScanResult) -> Vec<ScanCsvRow<'_>> {
    r.points
        .iter()
        .map(|p| ScanCsvRow {
            lambda: &p.lambda,
            rank: p.rank,
            supersingular: p.supersingular,
            generators: p.generators.join("; "),
        })
        .collect()
}

fn scan_table(points: &[pdcalc::invariant::ScanRow]) -> String {
    let mut s = String::new();
    let width = points.iter().map(|p| p.lambda.chars().count()).max().unwrap_or(1).max(1);
    for p in points {
        let flag = if p.supersingular { "  supersingular" } else { "" };
        let gens: Vec<String> = p.generators.iter().map(|g| bar_powers(g)).collect();
        writeln!(s, "  λ = {:width$}  rank {}  [{}]{flag}", p.lambda, p.rank, gens.join(", ")).unwrap();
    }
    s
}

pub fn scan_text(r: &ScanResult) -> String {
    let mut s = String::new();
    let gens: Vec<String> = r.generic_generators.iter().map(|g| bar_powers(g)).collect();
    writeln!(s, "Legendre family, p = {}, m = {}, generic rank {} [{}]", r.p, r.m, r.generic_rank, gens.join(", ")).unwrap();
    writeln!(s, "points of F_{}:", r.p.pow(r.ext)).unwrap();
    s.push_str(&scan_table(&r.points));
    s
}

pub fn law_text(law: &LawReport, axioms: &AxiomReport) -> String {
    let mut s = String::new();
    writeln!(s, "{} over {}, precision {}", law.provenance.replace("lambda", "λ"), law.ring, law.precision).unwrap();
    let terms = law.coefficients.iter().map(|c| {
        let mono = match (c.i, c.j) {
            (0, j) => format!("z₂^{j}"),
            (i, 0) => format!("z₁^{i}"),
            (i, j) => format!("z₁^{i}z₂^{j}"),
        };
        (c.coeff.as_str(), mono.replace("^1", ""))
    });
    writeln!(s, "F(z₁, z₂) = {} + O(deg {})", linear_combination(terms), law.precision).unwrap();
    let inv = law.inverse.iter().map(|c| (c.coeff.as_str(), format!("z^{}", c.k).replace("^1", "")));
    writeln!(s, "i(z) = {} + O(deg {})", linear_combination(inv), law.precision).unwrap();
    for c in &axioms.checks {
        match &c.witness {
            Some(w) => writeln!(s, "{}: fails at {w}", c.axiom).unwrap(),
            None => writeln!(s, "{}: holds", c.axiom).unwrap(),
        }
    }
    s
}

pub fn delta_text(t: &DeltaTable) -> String {
    let mut s = String::new();
    writeln!(s, "δ on ω^({}) of {} over {}, p = {}, D = {}", t.m, t.group, t.ring, t.p, t.d).unwrap();
    let render = |terms: &[Term]| linear_combination(terms.iter().map(|x| (x.coeff.as_str(), tensor_label(&x.label, 2))));
    for c in &t.columns {
        writeln!(s, "δ({}) = {}", bar_powers(&c.form), render(&c.reduced)).unwrap();
    }
    writeln!(s, "before reduction by the relations:").unwrap();
    for c in &t.columns {
        writeln!(s, "  δ({}) = {}", bar_powers(&c.form), render(&c.image)).unwrap();
    }
    s
}

#[derive(Serialize)]
pub struct DeltaRow<'a> {
    form: &'a str,
    term: &'a str,
    coeff: &'a str,
    reduced: bool,
}

pub fn delta_rows(t: &DeltaTable) -> Vec<DeltaRow<'_>> {
    let mut rows = Vec::new();
    for c in &t.columns {
        for (terms, reduced) in [(&c.reduced, true), (&c.image, false)] {
            for x in terms {
                rows.push(DeltaRow { form: &c.form, term: &x.label, coeff: &x.coeff, reduced });
            }
        }
    }
    rows
}

pub fn poincare_text(r: &PoincareReport) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "{:?} complex, p = {}, m = {}, n = {}, over {}, D = {}, band k ≤ {}",
        r.complex, r.p, r.m, r.n, r.ring, r.d, r.band
    )
    .unwrap();
    writeln!(s, "d∘d = 0: {}", if r.d_squared_zero { "yes" } else { "no" }).unwrap();
    for c in &r.checks {
        let verdict = if c.exact { "exact".to_string() } else { format!("homology of length {}", c.homology) };
        write!(s, "  Fil^{} position {}: {verdict}", c.k, c.position).unwrap();
        if let Some(w) = &c.witness {
            write!(s, "  (witness {w})").unwrap();
        }
        s.push('\n');
    }
    writeln!(s, "all exact: {}", if r.all_exact { "yes" } else { "no" }).unwrap();
    s
}

#[derive(Serialize)]
pub struct DescribeRow {
    r: usize,
    generators: usize,
    relations: usize,
    length: u32,
    fil_lengths: String,
}

pub fn describe_rows(c: &ComplexSummary) -> Vec<DescribeRow> {
    c.degrees
        .iter()
        .map(|d| DescribeRow {
            r: d.r,
            generators: d.generators,
            relations: d.relations,
            length: d.length,
            fil_lengths: d.fil.iter().map(|f| f.length.to_string()).collect::<Vec<_>>().join(" "),
        })
        .collect()
}

pub fn describe_text(c: &ComplexSummary) -> String {
    let mut s = String::new();
    writeln!(s, "{} complex, p = {}, m = {}, n = {}, over {}, D = {}", c.shape, c.p, c.m, c.n, c.ring, c.d).unwrap();
    for d in &c.degrees {
        let fil: Vec<String> = d.fil.iter().map(|f| f.length.to_string()).collect();
        writeln!(
            s,
            "  degree {}: {} generators, {} relations, length {}, Fil lengths [{}]",
            d.r,
            d.generators,
            d.relations,
            d.length,
            fil.join(", ")
        )
        .unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bars_exponents() {
        assert_eq!(bar_powers("1 * z^{3}"), "1 * z\u{304}^{{3}}");
        assert_eq!(bar_powers("lambda^{2}"), "λ^{2}");
    }

    #[test]
    fn tensors_two_slots() {
        assert_eq!(tensor_label("z1^{1}@s1*z1^{2}@s2", 2), "z\u{304}^{{1}} ⊗ z\u{304}^{{2}}");
        assert_eq!(tensor_label("z1^{3}@s2", 2), "1 ⊗ z\u{304}^{{3}}");
    }
}
