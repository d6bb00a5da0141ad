//! JSON and binary file formats.
//!
//! Field elements are residue lists in the power basis, constant term first.
//! Every `to_*` conversion validates what it reads (irreducible modulus,
//! primitive γ, admissible parameters); certificates are *not* verified on
//! load, that is the job of `IsotopismCert::verify`.

use std::io::{Read, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use semifield_core::census::ClassCensus;
use semifield_core::{BhParams, BiForm, FieldElement, FieldSpec, IsotopismCert, Level, MulTable, NucleusReport, PLinearMap};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error(transparent)]
    Core(#[from] semifield_core::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("bad table file: {0}")]
    Table(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, FormatError>;

pub fn element_to_json(f: &FieldSpec, x: &FieldElement) -> Vec<u64> {
    f.residues(x)
}

pub fn element_from_json(f: &FieldSpec, c: &[u64]) -> Result<FieldElement> {
    if c.len() != f.degree() {
        return Err(FormatError::Invalid(format!(
            "element needs {} residues, got {}",
            f.degree(),
            c.len()
        )));
    }
    Ok(f.from_residues(c)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpecJson {
    pub p: u64,
    pub h: u32,
    pub l: u32,
    /// n + 1 entries, constant term first, monic.
    pub modulus: Vec<u64>,
    pub gamma: Vec<u64>,
}

impl FieldSpecJson {
    pub fn from_spec(f: &FieldSpec) -> Self {
        FieldSpecJson {
            p: f.p(),
            h: f.h(),
            l: f.l(),
            modulus: f.modulus().iter().map(|&c| c as u64).collect(),
            gamma: f.residues(&f.gamma()),
        }
    }

    pub fn to_spec(&self) -> Result<Arc<FieldSpec>> {
        Ok(FieldSpec::with_modulus(self.p, self.h, self.l, &self.modulus, &self.gamma)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PLinearMapJson {
    pub coeffs: Vec<Vec<u64>>,
}

impl PLinearMapJson {
    pub fn from_map(m: &PLinearMap) -> Self {
        let f = m.spec();
        PLinearMapJson {
            coeffs: m.coeffs().iter().map(|c| element_to_json(f, c)).collect(),
        }
    }

    pub fn to_map(&self, f: &Arc<FieldSpec>) -> Result<PLinearMap> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| element_from_json(f, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(PLinearMap::new(f.clone(), coeffs)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub i: u32,
    pub j: u32,
    pub c: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiFormJson {
    pub terms: Vec<TermJson>,
}

impl BiFormJson {
    pub fn from_form(b: &BiForm) -> Self {
        let f = b.spec();
        BiFormJson {
            terms: b
                .terms()
                .map(|(i, j, c)| TermJson {
                    i: i as u32,
                    j: j as u32,
                    c: element_to_json(f, &c),
                })
                .collect(),
        }
    }

    pub fn to_form(&self, f: &Arc<FieldSpec>) -> Result<BiForm> {
        let n = f.degree() as u32;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.i >= n || t.j >= n {
                return Err(FormatError::Invalid(format!("exponent pair ({}, {}) out of range", t.i, t.j)));
            }
            terms.push((t.i as i64, t.j as i64, element_from_json(f, &t.c)?));
        }
        Ok(BiForm::from_terms(f, terms))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BhParamsJson {
    pub field: FieldSpecJson,
    pub d: u64,
    pub beta: Vec<u64>,
    pub omega: Vec<u64>,
}

impl BhParamsJson {
    pub fn from_params(p: &BhParams) -> Self {
        let f = p.spec();
        BhParamsJson {
            field: FieldSpecJson::from_spec(f),
            d: p.d(),
            beta: element_to_json(f, p.beta()),
            omega: element_to_json(f, p.omega()),
        }
    }

    pub fn to_params(&self) -> Result<BhParams> {
        self.to_params_in(&self.field.to_spec()?)
    }

    /// Reads the parameters over an already built field, which must match
    /// the embedded field description.
    pub fn to_params_in(&self, f: &Arc<FieldSpec>) -> Result<BhParams> {
        if FieldSpecJson::from_spec(f) != self.field {
            return Err(semifield_core::Error::SpecMismatch.into());
        }
        let beta = element_from_json(f, &self.beta)?;
        let omega = element_from_json(f, &self.omega)?;
        Ok(BhParams::new(f.clone(), self.d, beta, omega)?)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelJson {
    #[default]
    Presemifield,
    Semifield,
}

impl From<Level> for LevelJson {
    fn from(l: Level) -> Self {
        match l {
            Level::Presemifield => LevelJson::Presemifield,
            Level::Semifield => LevelJson::Semifield,
        }
    }
}

impl From<LevelJson> for Level {
    fn from(l: LevelJson) -> Self {
        match l {
            LevelJson::Presemifield => Level::Presemifield,
            LevelJson::Semifield => Level::Semifield,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertJson {
    pub src: BhParamsJson,
    pub dst: BhParamsJson,
    #[serde(rename = "M")]
    pub m: PLinearMapJson,
    #[serde(rename = "N")]
    pub n: PLinearMapJson,
    #[serde(rename = "L")]
    pub l: PLinearMapJson,
    pub strong: bool,
    /// Absent means presemifield level.
    #[serde(default)]
    pub level: LevelJson,
}

impl CertJson {
    pub fn from_cert(c: &IsotopismCert) -> Self {
        CertJson {
            src: BhParamsJson::from_params(c.src()),
            dst: BhParamsJson::from_params(c.dst()),
            m: PLinearMapJson::from_map(c.m()),
            n: PLinearMapJson::from_map(c.n()),
            l: PLinearMapJson::from_map(c.l()),
            strong: c.strong(),
            level: c.level().into(),
        }
    }

    /// Rebuilds the (unverified) certificate. Source and target must share a
    /// field, otherwise this is a `SpecMismatch`.
    pub fn to_cert(&self) -> Result<IsotopismCert> {
        let f = self.src.field.to_spec()?;
        let src = self.src.to_params_in(&f)?;
        let dst = self.dst.to_params_in(&f)?;
        Ok(IsotopismCert::from_parts(
            src,
            dst,
            self.m.to_map(&f)?,
            self.n.to_map(&f)?,
            self.l.to_map(&f)?,
            self.strong,
            self.level.into(),
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaEntryJson {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub alpha: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NucleusReportJson {
    pub params: BhParamsJson,
    pub center_size: usize,
    pub middle_size: usize,
    pub center: Vec<Vec<u64>>,
    pub middle: Vec<Vec<u64>>,
    pub kappa_index: Vec<KappaEntryJson>,
    pub xi: Vec<u64>,
    pub exhaustive: bool,
}

impl NucleusReportJson {
    pub fn from_report(params: &BhParams, r: &NucleusReport) -> Self {
        let f = params.spec();
        let enc = |x: &FieldElement| element_to_json(f, x);
        NucleusReportJson {
            params: BhParamsJson::from_params(params),
            center_size: r.center.len(),
            middle_size: r.middle.len(),
            center: r.center.iter().map(enc).collect(),
            middle: r.middle.iter().map(enc).collect(),
            kappa_index: r
                .kappa_index
                .iter()
                .map(|((a, b), alpha)| KappaEntryJson {
                    a: enc(a),
                    b: enc(b),
                    alpha: enc(alpha),
                })
                .collect(),
            xi: enc(&r.xi),
            exhaustive: r.exhaustive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusJson {
    pub q: u64,
    pub l: u64,
    pub valid_d: Vec<u64>,
    pub classes: Vec<Vec<u64>>,
    pub representatives: Vec<u64>,
    pub count: u64,
    pub formula_value: u64,
}

impl From<&ClassCensus> for CensusJson {
    fn from(c: &ClassCensus) -> Self {
        CensusJson {
            q: c.q,
            l: c.l,
            valid_d: c.valid_d.clone(),
            classes: c.classes.clone(),
            representatives: c.representatives(),
            count: c.count,
            formula_value: c.formula_value,
        }
    }
}

pub const TABLE_MAGIC: &[u8; 4] = b"BHTB";
pub const TABLE_VERSION: u8 = 1;

/// 8-byte header (magic, version, p as u16, n as u8), then row-major entries,
/// u16 when p^n ≤ 65535 and u32 otherwise, all little-endian.
pub fn write_table(w: &mut impl Write, t: &MulTable) -> Result<()> {
    let p = u16::try_from(t.p()).map_err(|_| FormatError::Table("p does not fit in u16".into()))?;
    let n = u8::try_from(t.degree()).map_err(|_| FormatError::Table("n does not fit in u8".into()))?;
    let mut header = [0u8; 8];
    header[..4].copy_from_slice(TABLE_MAGIC);
    header[4] = TABLE_VERSION;
    header[5..7].copy_from_slice(&p.to_le_bytes());
    header[7] = n;
    w.write_all(&header)?;
    let narrow = t.order() <= u16::MAX as u64;
    let entries = t.entries();
    let mut buf = Vec::with_capacity(entries.len() * if narrow { 2 } else { 4 });
    for e in entries {
        if narrow {
            buf.extend_from_slice(&(e as u16).to_le_bytes());
        } else {
            buf.extend_from_slice(&e.to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_table(r: &mut impl Read) -> Result<MulTable> {
    let mut header = [0u8; 8];
    r.read_exact(&mut header)?;
    if &header[..4] != TABLE_MAGIC {
        return Err(FormatError::Table("bad magic".into()));
    }
    if header[4] != TABLE_VERSION {
        return Err(FormatError::Table(format!("unsupported version {}", header[4])));
    }
    let p = u16::from_le_bytes([header[5], header[6]]) as u64;
    let n = header[7] as usize;
    let order = p
        .checked_pow(n as u32)
        .ok_or_else(|| FormatError::Table("p^n overflows".into()))?;
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    let width = if order <= u16::MAX as u64 { 2 } else { 4 };
    let expected = (order as u128) * (order as u128) * width as u128;
    if body.len() as u128 != expected {
        return Err(FormatError::Table(format!(
            "expected {expected} bytes of entries, found {}",
            body.len()
        )));
    }
    let entries: Vec<u32> = if width == 2 {
        body.chunks_exact(2).map(|c| u16::from_le_bytes([c[0], c[1]]) as u32).collect()
    } else {
        body.chunks_exact(4)
            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect()
    };
    Ok(MulTable::from_entries(p, n, entries)?)
}

pub fn to_json<T: Serialize>(value: &T, pretty: bool) -> Result<String> {
    Ok(if pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    })
}
