//! Branch-structure files (`.bs`).
//!
//! Line oriented; `#` starts a comment; points are numbered from 1 and
//! permutations use cycle notation. A file either lists a structure
//! explicitly:
//!
//! ```text
//! name   a5_wreath_c2ext
//! points 5
//! q      (1,2,3,4,5)
//! q      (1,2,3)
//! b_degree 2
//! b      (1,2)
//! bplus  (1,2) () () () () | () -> (1,2)
//! bplus  () () () () () | (1,2,3,4,5) -> ()
//! ```
//!
//! where a `bplus` line gives the sections of a generator of `B+` on the
//! points, its top permutation and its image under `phi`; or it gives a
//! wreath recursion from which the structure is derived:
//!
//! ```text
//! name   grigorchuk
//! points 2
//! gen a (1,2) = 1, 1
//! gen b ()    = a, c
//! gen c ()    = a, d
//! gen d ()    = 1, b
//! kernel a b a b
//! levels 6
//! ```
//!
//! Sections and kernel generators are words: space separated generator
//! names with optional integer exponents (`a^-1`), `1` for the identity.

use std::fmt::Write as _;

use repzeta_core::branch::{derive_branch_from_recursion, BranchSpec, WreathGen, WreathRecursion, Word};
use repzeta_core::perm::Perm;
use repzeta_core::{Error, Result};

pub const DEFAULT_LEVELS: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub enum BranchFile {
    Explicit(BranchSpec),
    Recursion { rec: WreathRecursion, levels: usize },
}

impl BranchFile {
    pub fn name(&self) -> &str {
        match self {
            BranchFile::Explicit(s) => &s.name,
            BranchFile::Recursion { rec, .. } => &rec.name,
        }
    }

    pub fn to_spec(&self) -> Result<BranchSpec> {
        match self {
            BranchFile::Explicit(s) => Ok(s.clone()),
            BranchFile::Recursion { rec, levels } => derive_branch_from_recursion(rec, *levels),
        }
    }
}

fn bad(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Validation(format!("line {line}: {msg}"))
}

pub fn parse(text: &str) -> Result<BranchFile> {
    let mut name = None;
    let mut points: Option<usize> = None;
    let mut b_degree: Option<usize> = None;
    let mut q_gens = Vec::new();
    let mut b_gens = Vec::new();
    let mut bplus = Vec::new();
    let mut gens: Vec<(usize, String, String, String)> = Vec::new();
    let mut kernel = Vec::new();
    let mut levels = None;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "name" => name = Some(rest.to_string()),
            "points" => points = Some(rest.parse().map_err(|_| bad(ln, "points must be a positive integer"))?),
            "b_degree" => b_degree = Some(rest.parse().map_err(|_| bad(ln, "b_degree must be a positive integer"))?),
            "levels" => levels = Some(rest.parse().map_err(|_| bad(ln, "levels must be a positive integer"))?),
            "q" => q_gens.push((ln, rest.to_string())),
            "b" => b_gens.push((ln, rest.to_string())),
            "bplus" => bplus.push((ln, rest.to_string())),
            "kernel" => kernel.push((ln, rest.to_string())),
            "gen" => {
                let (head, secs) = rest.split_once('=').ok_or_else(|| bad(ln, "expected `gen NAME PERM = SECTIONS`"))?;
                let (g, top) = head.trim().split_once(char::is_whitespace).ok_or_else(|| bad(ln, "missing top permutation"))?;
                gens.push((ln, g.to_string(), top.trim().to_string(), secs.trim().to_string()));
            }
            _ => return Err(bad(ln, format!("unknown key {key:?}"))),
        }
    }
    let name = name.ok_or_else(|| Error::Validation("missing `name`".into()))?;
    let x = points.ok_or_else(|| Error::Validation("missing `points`".into()))?;
    if x == 0 {
        return Err(Error::Validation("`points` must be positive".into()));
    }
    if !gens.is_empty() {
        if !q_gens.is_empty() || !b_gens.is_empty() || !bplus.is_empty() || b_degree.is_some() {
            return Err(Error::Validation("a file gives either `gen` lines or an explicit structure, not both".into()));
        }
        let gen_names: Vec<String> = gens.iter().map(|g| g.1.clone()).collect();
        let mut tops = Vec::new();
        let mut sections = Vec::new();
        for (ln, _, top, secs) in &gens {
            tops.push(Perm::parse(top, x).map_err(|e| bad(*ln, e))?);
            let ws: Vec<Word> = secs.split(',').map(|w| parse_word(w, &gen_names).map_err(|e| bad(*ln, e))).collect::<Result<_>>()?;
            if ws.len() != x {
                return Err(bad(*ln, format!("{} sections for {x} points", ws.len())));
            }
            sections.push(ws);
        }
        let kernel_words =
            kernel.iter().map(|(ln, w)| parse_word(w, &gen_names).map_err(|e| bad(*ln, e))).collect::<Result<_>>()?;
        let rec = WreathRecursion { name, x, gen_names, tops, sections, kernel_words };
        return Ok(BranchFile::Recursion { rec, levels: levels.unwrap_or(DEFAULT_LEVELS) });
    }
    let bd = b_degree.ok_or_else(|| Error::Validation("missing `b_degree`".into()))?;
    let q_gens = q_gens.iter().map(|(ln, p)| Perm::parse(p, x).map_err(|e| bad(*ln, e))).collect::<Result<_>>()?;
    let b_gens = b_gens.iter().map(|(ln, p)| Perm::parse(p, bd).map_err(|e| bad(*ln, e))).collect::<Result<_>>()?;
    let mut bplus_gens = Vec::new();
    let mut phi_images = Vec::new();
    for (ln, l) in &bplus {
        let (lhs, img) = l.split_once("->").ok_or_else(|| bad(*ln, "expected `SECTIONS | TOP -> IMAGE`"))?;
        let (secs, top) = lhs.split_once('|').ok_or_else(|| bad(*ln, "expected `SECTIONS | TOP -> IMAGE`"))?;
        let sections: Vec<Perm> =
            split_perms(secs).iter().map(|p| Perm::parse(p, bd).map_err(|e| bad(*ln, e))).collect::<Result<_>>()?;
        if sections.len() != x {
            return Err(bad(*ln, format!("{} sections for {x} points", sections.len())));
        }
        let top = Perm::parse(top.trim(), x).map_err(|e| bad(*ln, e))?;
        bplus_gens.push(WreathGen { sections, top });
        phi_images.push(Perm::parse(img.trim(), bd).map_err(|e| bad(*ln, e))?);
    }
    Ok(BranchFile::Explicit(BranchSpec { name, x, q_gens, b_degree: bd, b_gens, bplus_gens, phi_images }))
}

/// Split `(1,2) () (3,4)(5,6)` into one string per permutation.
fn split_perms(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth -= 1;
                cur.push(c);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_word(s: &str, names: &[String]) -> Result<Word> {
    let mut w = Word::new();
    for tok in s.split_whitespace() {
        if tok == "1" {
            continue;
        }
        let (g, e) = match tok.split_once('^') {
            Some((g, e)) => (g, e.parse::<i64>().map_err(|_| Error::Validation(format!("bad exponent in {tok:?}")))?),
            None => (tok, 1),
        };
        let i = names.iter().position(|n| n == g).ok_or_else(|| Error::Validation(format!("unknown generator {g:?}")))?;
        w.push((i, e));
    }
    Ok(w)
}

fn write_word(w: &Word, names: &[String]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let parts: Vec<String> =
        w.iter().map(|&(g, e)| if e == 1 { names[g].clone() } else { format!("{}^{e}", names[g]) }).collect();
    parts.join(" ")
}

pub fn serialize(f: &BranchFile) -> String {
    let mut out = String::new();
    match f {
        BranchFile::Explicit(s) => {
            writeln!(out, "name {}", s.name).unwrap();
            writeln!(out, "points {}", s.x).unwrap();
            for q in &s.q_gens {
                writeln!(out, "q {q}").unwrap();
            }
            writeln!(out, "b_degree {}", s.b_degree).unwrap();
            for b in &s.b_gens {
                writeln!(out, "b {b}").unwrap();
            }
            for (g, img) in s.bplus_gens.iter().zip(&s.phi_images) {
                let secs: Vec<String> = g.sections.iter().map(|p| p.to_string()).collect();
                writeln!(out, "bplus {} | {} -> {img}", secs.join(" "), g.top).unwrap();
            }
        }
        BranchFile::Recursion { rec, levels } => {
            writeln!(out, "name {}", rec.name).unwrap();
            writeln!(out, "points {}", rec.x).unwrap();
            for (i, g) in rec.gen_names.iter().enumerate() {
                let secs: Vec<String> = rec.sections[i].iter().map(|w| write_word(w, &rec.gen_names)).collect();
                writeln!(out, "gen {g} {} = {}", rec.tops[i], secs.join(", ")).unwrap();
            }
            for k in &rec.kernel_words {
                writeln!(out, "kernel {}", write_word(k, &rec.gen_names)).unwrap();
            }
            writeln!(out, "levels {levels}").unwrap();
        }
    }
    out
}
