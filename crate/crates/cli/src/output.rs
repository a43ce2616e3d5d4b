use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

/// Buffered destination for a command's results: a file or stdout.
pub struct Sink {
    inner: Box<dyn Write>,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> io::Result<Self> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Self { inner })
    }

    pub fn json_line<T: Serialize>(&mut self, value: &T) -> io::Result<()> {
        serde_json::to_writer(&mut self.inner, value)?;
        self.inner.write_all(b"\n")
    }

    pub fn json_pretty<T: Serialize>(&mut self, value: &T) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut self.inner, value)?;
        self.inner.write_all(b"\n")
    }

    pub fn csv(&mut self) -> csv::Writer<&mut dyn Write> {
        csv::Writer::from_writer(&mut *self.inner)
    }

    pub fn finish(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

/// 17 significant digits in scientific notation, independent of locale.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}
