use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use qdslow::scenario::{Dataset, Value};
use serde_json::Value as Json;

/// 17 significant digits.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{x:.16e}")
}

fn cell(v: &Value) -> String {
    match v {
        Value::Num(x) => format_number(*x),
        Value::Text(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Missing => String::new(),
    }
}

pub fn write_csv<W: Write>(d: &Dataset, w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(&d.columns)?;
    for row in &d.rows {
        out.write_record(row.values.iter().map(cell))?;
    }
    out.flush()
}

/// Writes `<id>.csv` and `<id>.meta.json` into `dir`.
pub fn write(d: &Dataset, dir: &Path, input: Option<Json>, run: Json) -> io::Result<Vec<PathBuf>> {
    let csv_path = dir.join(format!("{}.csv", d.id));
    let meta_path = dir.join(format!("{}.meta.json", d.id));
    write_csv(d, BufWriter::new(File::create(&csv_path)?))?;
    let mut meta = d.metadata.clone();
    if let Json::Object(m) = &mut meta {
        m.insert("config_input".into(), input.unwrap_or(Json::Null));
        m.insert("run".into(), run);
    }
    let mut f = BufWriter::new(File::create(&meta_path)?);
    serde_json::to_writer_pretty(&mut f, &meta)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(vec![csv_path, meta_path])
}
