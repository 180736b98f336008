use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of word-cloud display slots; the "none of the above" option sits after them.
pub const DISPLAY_SLOTS: usize = 3;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Respondent {
    pub gender: String,
    pub country: String,
    pub designer: bool,
    pub age: Option<u32>,
}

/// One survey question: a palette, three word clouds in display order and
/// which of them were ticked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyTrial {
    pub set_id: u8,
    pub palette: usize,
    pub clouds: [usize; DISPLAY_SLOTS],
    pub selected: [bool; DISPLAY_SLOTS],
    pub selected_none: bool,
    pub respondent: Respondent,
}

impl SurveyTrial {
    pub fn validate(&self, k: usize) -> Result<()> {
        if self.palette >= k {
            return Err(Error::input(format!("palette {} out of range for K={k}", self.palette)));
        }
        if let Some(c) = self.clouds.iter().find(|&&c| c >= k) {
            return Err(Error::input(format!("cloud {c} out of range for K={k}")));
        }
        let [a, b, c] = self.clouds;
        if a == b || a == c || b == c {
            return Err(Error::input(format!("clouds {:?} are not distinct", self.clouds)));
        }
        if !self.clouds.contains(&self.palette) {
            return Err(Error::input(format!(
                "clouds {:?} do not include the palette's own cloud {}",
                self.clouds, self.palette
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct TrialRecord {
    set_id: u8,
    palette: usize,
    cloud_pos1: usize,
    cloud_pos2: usize,
    cloud_pos3: usize,
    sel1: u8,
    sel2: u8,
    sel3: u8,
    sel_none: u8,
    gender: String,
    country: String,
    designer: u8,
    age: Option<u32>,
}

fn flag(v: u8, column: &str) -> Result<bool> {
    match v {
        0 => Ok(false),
        1 => Ok(true),
        _ => Err(Error::input(format!("column {column} must be 0 or 1, got {v}"))),
    }
}

impl TryFrom<TrialRecord> for SurveyTrial {
    type Error = Error;

    fn try_from(r: TrialRecord) -> Result<Self> {
        Ok(SurveyTrial {
            set_id: r.set_id,
            palette: r.palette,
            clouds: [r.cloud_pos1, r.cloud_pos2, r.cloud_pos3],
            selected: [flag(r.sel1, "sel1")?, flag(r.sel2, "sel2")?, flag(r.sel3, "sel3")?],
            selected_none: flag(r.sel_none, "sel_none")?,
            respondent: Respondent {
                gender: r.gender,
                country: r.country,
                designer: flag(r.designer, "designer")?,
                age: r.age,
            },
        })
    }
}

impl From<&SurveyTrial> for TrialRecord {
    fn from(t: &SurveyTrial) -> Self {
        TrialRecord {
            set_id: t.set_id,
            palette: t.palette,
            cloud_pos1: t.clouds[0],
            cloud_pos2: t.clouds[1],
            cloud_pos3: t.clouds[2],
            sel1: t.selected[0] as u8,
            sel2: t.selected[1] as u8,
            sel3: t.selected[2] as u8,
            sel_none: t.selected_none as u8,
            gender: t.respondent.gender.clone(),
            country: t.respondent.country.clone(),
            designer: t.respondent.designer as u8,
            age: t.respondent.age,
        }
    }
}

pub fn read_trials<R: Read>(reader: R) -> Result<Vec<SurveyTrial>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    rdr.deserialize::<TrialRecord>().map(|rec| SurveyTrial::try_from(rec?)).collect()
}

pub fn write_trials<W: Write>(writer: W, trials: &[SurveyTrial]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    for t in trials {
        wtr.serialize(TrialRecord::from(t))?;
    }
    wtr.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn load_trials(path: impl AsRef<Path>) -> Result<Vec<SurveyTrial>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_trials(std::io::BufReader::new(file))
}

pub fn save_trials(path: impl AsRef<Path>, trials: &[SurveyTrial]) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_trials(std::io::BufWriter::new(file), trials)
}
