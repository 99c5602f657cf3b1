//! Result emission. Every float is written with 17 significant digits so
//! bundles round-trip exactly.

use std::io;
use std::path::Path;

use holotrans::brownian_sim::TrendReport;
use holotrans::entropy_bound::BoundReport;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::CliError;

/// `{:.16e}` for a finite float.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pretty JSON with floats in fixed-precision scientific notation.
struct SciFormatter<'a>(PrettyFormatter<'a>);

macro_rules! forward {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(w $(, $arg)*)
            }
        )*
    };
}

impl Formatter for SciFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    forward! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter(PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// Columns `R, S, area_over_4, margin`.
pub fn write_bound_csv(path: &Path, rep: &BoundReport) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["R", "S", "area_over_4", "margin"])?;
    for i in 0..rep.radius_grid.len() {
        w.write_record([rep.radius_grid[i], rep.lhs[i], rep.rhs[i], rep.margin[i]].map(format_float))?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `b, p_inner, p_outer, stderr, censored`.
pub fn write_trend_csv(path: &Path, rep: &TrendReport) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["b", "p_inner", "p_outer", "stderr", "censored"])?;
    for row in &rep.rows {
        w.write_record([
            format_float(row.outer),
            format_float(row.p_inner),
            format_float(row.stats.p_outer),
            format_float(row.stats.stderr),
            row.stats.censored.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
