use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Complexity, ComplexityModel};
use crate::error::{Error, Result};

/// One row of a description system: `code` run on `cond` prints `out`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub code: String,
    pub cond: Option<usize>,
    pub out: usize,
}

/// On-disk form of a [`DescriptionSystem`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SystemFile {
    pub strings: Vec<String>,
    pub programs: Vec<ProgramEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ProgramEntry {
    pub code: String,
    pub cond: Option<String>,
    pub out: String,
}

/// A finite table of programs defining `C(x|c)` as the shortest matching code.
///
/// `(code, condition)` pairs are unique, so at most `2^L` programs of length
/// `L` share a condition.
#[derive(Clone, Debug)]
pub struct DescriptionSystem {
    strings: Vec<String>,
    lookup: HashMap<String, usize>,
    programs: Vec<Program>,
    codes: HashSet<(Option<usize>, String)>,
    // (n + 1) x n; row 0 is the empty condition, row c + 1 is condition c
    shortest: Vec<Complexity>,
}

impl DescriptionSystem {
    pub fn new<I, S>(strings: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let strings: Vec<String> = strings.into_iter().map(Into::into).collect();
        let mut lookup = HashMap::with_capacity(strings.len());
        for (i, s) in strings.iter().enumerate() {
            if lookup.insert(s.clone(), i).is_some() {
                return Err(Error::DuplicateString(s.clone()));
            }
        }
        let n = strings.len();
        Ok(DescriptionSystem {
            strings,
            lookup,
            programs: Vec::new(),
            codes: HashSet::new(),
            shortest: vec![Complexity::Infinite; (n + 1) * n],
        })
    }

    pub fn strings(&self) -> &[String] {
        &self.strings
    }

    pub fn programs(&self) -> &[Program] {
        &self.programs
    }

    pub fn add_program(&mut self, code: &str, cond: Option<&str>, out: &str) -> Result<()> {
        let cond = cond.map(|c| self.lookup_string(c)).transpose()?;
        let out = self.lookup_string(out)?;
        self.add_program_by_index(code, cond, out)
    }

    pub fn add_program_by_index(&mut self, code: &str, cond: Option<usize>, out: usize) -> Result<()> {
        if !code.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::BadCode(code.to_string()));
        }
        for i in cond.into_iter().chain([out]) {
            if i >= self.strings.len() {
                return Err(Error::UnknownItem(i));
            }
        }
        if !self.codes.insert((cond, code.to_string())) {
            return Err(Error::DuplicateProgram {
                code: code.to_string(),
                cond: cond.map(|c| self.strings[c].clone()),
            });
        }
        let slot = self.slot(out, cond);
        let len = Complexity::Bits(code.len() as u32);
        if len < self.shortest[slot] {
            self.shortest[slot] = len;
        }
        self.programs.push(Program {
            code: code.to_string(),
            cond,
            out,
        });
        Ok(())
    }

    /// Whether `code` is already taken under `cond`.
    pub fn has_code(&self, code: &str, cond: Option<usize>) -> bool {
        self.codes.contains(&(cond, code.to_string()))
    }

    fn lookup_string(&self, s: &str) -> Result<usize> {
        self.lookup
            .get(s)
            .copied()
            .ok_or_else(|| Error::UnknownString(s.to_string()))
    }

    fn slot(&self, out: usize, cond: Option<usize>) -> usize {
        cond.map_or(0, |c| c + 1) * self.strings.len() + out
    }

    pub fn from_file_format(file: &SystemFile) -> Result<Self> {
        let mut sys = DescriptionSystem::new(file.strings.iter().cloned())?;
        for p in &file.programs {
            sys.add_program(&p.code, p.cond.as_deref(), &p.out)?;
        }
        Ok(sys)
    }

    pub fn to_file_format(&self) -> SystemFile {
        SystemFile {
            strings: self.strings.clone(),
            programs: self
                .programs
                .iter()
                .map(|p| ProgramEntry {
                    code: p.code.clone(),
                    cond: p.cond.map(|c| self.strings[c].clone()),
                    out: self.strings[p.out].clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SystemFile = serde_json::from_str(text)?;
        Self::from_file_format(&file)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file_format())?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

impl ComplexityModel for DescriptionSystem {
    fn len(&self) -> usize {
        self.strings.len()
    }

    fn label(&self, item: usize) -> String {
        self.strings[item].clone()
    }

    fn index_of(&self, label: &str) -> Option<usize> {
        self.lookup.get(label).copied()
    }

    fn complexity(&self, x: usize, given: Option<usize>) -> Complexity {
        self.shortest[self.slot(x, given)]
    }
}

/// `C(x | condition)` in a description system, by string name.
pub fn table_complexity(x: &str, condition: Option<&str>, system: &DescriptionSystem) -> Result<Complexity> {
    let x = system.lookup_string(x)?;
    let cond = condition.map(|c| system.lookup_string(c)).transpose()?;
    Ok(system.complexity(x, cond))
}
