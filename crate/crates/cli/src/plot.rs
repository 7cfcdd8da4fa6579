//! Gnuplot scripts drawing trajectory files as step plots. Steps are drawn
//! horizontal-then-vertical: a path holds its value until the next grid
//! point and then jumps.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use fracdiff::Error;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Axes {
    /// Parent process `x = Y(t*)`.
    #[value(name = "t_star,x")]
    TStarX,
    /// Leading process `t = T(t*)`.
    #[value(name = "t_star,t")]
    TStarT,
    /// Process in physical time `x = X(t)`.
    #[value(name = "t,x")]
    TX,
}

impl Axes {
    pub const ALL: [Axes; 3] = [Axes::TStarX, Axes::TStarT, Axes::TX];

    fn columns(self) -> (&'static str, &'static str) {
        match self {
            Axes::TStarX => ("t_star", "x"),
            Axes::TStarT => ("t_star", "t"),
            Axes::TX => ("t", "x"),
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Axes::TStarX => "t_star_x",
            Axes::TStarT => "t_star_t",
            Axes::TX => "t_x",
        }
    }

    fn title(self) -> &'static str {
        match self {
            Axes::TStarX => "parent process x = Y(t*)",
            Axes::TStarT => "leading process t = T(t*)",
            Axes::TX => "subordinated process x = X(t)",
        }
    }

    fn labels(self) -> (&'static str, &'static str) {
        match self {
            Axes::TStarX => ("operational time t*", "x"),
            Axes::TStarT => ("operational time t*", "physical time t"),
            Axes::TX => ("physical time t", "x"),
        }
    }
}

const HEADERS: [&str; 2] = ["n,t_star,t,x", "n,t,x"];

/// 1-based gnuplot column numbers of the two axes in a trajectory file.
fn column_numbers(file: &Path, axes: Axes) -> Result<(usize, usize)> {
    let handle = fs::File::open(file).with_context(|| format!("opening {}", file.display()))?;
    let mut header = String::new();
    BufReader::new(handle).read_line(&mut header)?;
    let header = header.trim_end();
    if !HEADERS.contains(&header) {
        return Err(Error::Format(format!("{}: unexpected header {header:?}", file.display())).into());
    }
    let names: Vec<&str> = header.split(',').collect();
    let (a, b) = axes.columns();
    let find = |c: &str| names.iter().position(|n| *n == c).map(|i| i + 1);
    match (find(a), find(b)) {
        (Some(i), Some(j)) => Ok((i, j)),
        _ => Err(Error::Format(format!("{}: header {header:?} has no {a},{b} columns", file.display())).into()),
    }
}

fn quote(path: &Path) -> String {
    format!("'{}'", path.display().to_string().replace('\'', "''"))
}

/// Write `plot_<axes>.gp` into `out_dir` plotting every `stride`-th row of
/// each file; the script renders `plot_<axes>.png` next to itself.
pub fn emit_plot_script(files: &[PathBuf], axes: Axes, stride: usize, out_dir: &Path) -> Result<PathBuf> {
    if files.is_empty() {
        return Err(Error::Format("no trajectory files to plot".into()).into());
    }
    let stride = stride.max(1);
    let mut plots = Vec::with_capacity(files.len());
    for f in files {
        let (i, j) = column_numbers(f, axes)?;
        let name = f.file_name().map(PathBuf::from).unwrap_or_else(|| f.clone());
        plots.push(format!("{} skip 1 every {stride} using {i}:{j} with steps lw 1", quote(&name)));
    }
    let (xl, yl) = axes.labels();
    let mut s = String::new();
    writeln!(s, "# {}", axes.title()).unwrap();
    writeln!(s, "set terminal pngcairo size 960,600").unwrap();
    writeln!(s, "set output 'plot_{}.png'", axes.tag()).unwrap();
    writeln!(s, "set datafile separator ','").unwrap();
    writeln!(s, "set key off").unwrap();
    writeln!(s, "set title '{}'", axes.title()).unwrap();
    writeln!(s, "set xlabel '{xl}'").unwrap();
    writeln!(s, "set ylabel '{yl}'").unwrap();
    writeln!(s, "plot {}", plots.join(", \\\n     ")).unwrap();
    fs::create_dir_all(out_dir)?;
    let out = out_dir.join(format!("plot_{}.gp", axes.tag()));
    fs::write(&out, s)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn scripts_for_each_axes_choice() {
        let dir = tempfile::tempdir().unwrap();
        let f = write(dir.path(), "path.csv", "n,t_star,t,x\n0,0.0,0.0,0.0\n1,0.5,0.7,1.0\n");
        for (axes, cols) in [(Axes::TStarX, "2:4"), (Axes::TStarT, "2:3"), (Axes::TX, "3:4")] {
            let out = emit_plot_script(std::slice::from_ref(&f), axes, 1, dir.path()).unwrap();
            let text = fs::read_to_string(out).unwrap();
            assert!(text.contains(&format!("using {cols} with steps")), "{text}");
        }
    }

    #[test]
    fn ctrw_files_only_have_physical_axes() {
        let dir = tempfile::tempdir().unwrap();
        let f = write(dir.path(), "walk.csv", "n,t,x\n0,0.0,0.0\n");
        let text = fs::read_to_string(emit_plot_script(std::slice::from_ref(&f), Axes::TX, 10, dir.path()).unwrap()).unwrap();
        assert!(text.contains("every 10 using 2:3"));
        let err = emit_plot_script(&[f], Axes::TStarX, 1, dir.path()).unwrap_err();
        assert_eq!(err.downcast_ref::<Error>().map(Error::kind), Some("FormatError"));
    }

    #[test]
    fn bad_header_is_format_error() {
        let dir = tempfile::tempdir().unwrap();
        let f = write(dir.path(), "bad.csv", "a,b,c\n1,2,3\n");
        let err = emit_plot_script(&[f], Axes::TX, 1, dir.path()).unwrap_err();
        assert_eq!(err.downcast_ref::<Error>().map(Error::kind), Some("FormatError"));
    }
}
