//! Report assembly: aligned `key: value` lines for people, versioned
//! `key=value` lines with 17 significant digits for machines.

use std::fmt::Write as _;

use fockmodel::Cx;

pub const MACHINE_HEADER: &str = "# fockmodel-report v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

pub struct Out {
    machine: bool,
    buf: String,
}

pub fn fmt_cx(c: Cx) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    let (re, im) = (clean(c.re), clean(c.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => format!("{re}"),
        (true, false) => format!("{im}i"),
        (false, false) if im < 0.0 => format!("{re}-{}i", -im),
        _ => format!("{re}+{im}i"),
    }
}

fn fmt_cx_short(c: Cx) -> String {
    let round = |x: f64| (x * 1e9).round() / 1e9;
    fmt_cx(Cx::new(round(c.re), round(c.im)))
}

impl Out {
    pub fn new(format: Format, command: &str) -> Self {
        let machine = format == Format::Machine;
        let mut buf = String::new();
        if machine {
            let _ = writeln!(buf, "{MACHINE_HEADER}");
            let _ = writeln!(buf, "command={command}");
        }
        Out { machine, buf }
    }

    pub fn is_machine(&self) -> bool {
        self.machine
    }

    pub fn real(&mut self, key: &str, v: f64) {
        if self.machine {
            let _ = writeln!(self.buf, "{key}={v:.16e}");
        } else {
            let _ = writeln!(self.buf, "{key:<24} {v:.10}");
        }
    }

    pub fn cx(&mut self, key: &str, v: Cx) {
        if self.machine {
            let _ = writeln!(self.buf, "{key}={:.16e},{:.16e}", v.re, v.im);
        } else {
            let _ = writeln!(self.buf, "{key:<24} {}", fmt_cx_short(v));
        }
    }

    pub fn int(&mut self, key: &str, v: usize) {
        if self.machine {
            let _ = writeln!(self.buf, "{key}={v}");
        } else {
            let _ = writeln!(self.buf, "{key:<24} {v}");
        }
    }

    pub fn text(&mut self, key: &str, v: &str) {
        if self.machine {
            let _ = writeln!(self.buf, "{key}={v}");
        } else {
            let _ = writeln!(self.buf, "{key:<24} {v}");
        }
    }

    /// Free-form line shown only in human mode.
    pub fn note(&mut self, line: &str) {
        if !self.machine {
            let _ = writeln!(self.buf, "{line}");
        }
    }

    pub fn status(&mut self, passed: bool) {
        let s = if passed { "PASS" } else { "FAIL" };
        if self.machine {
            let _ = writeln!(self.buf, "status={s}");
        } else {
            let _ = writeln!(self.buf, "{s}");
        }
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub fn fmt_point(p: &[Cx]) -> String {
    if p.len() == 1 {
        fmt_cx_short(p[0])
    } else {
        let parts: Vec<String> = p.iter().map(|c| fmt_cx_short(*c)).collect();
        format!("({})", parts.join(", "))
    }
}

pub fn fmt_index(a: &fockmodel::MultiIndex) -> String {
    let parts: Vec<String> = a.as_slice().iter().map(|k| k.to_string()).collect();
    format!("({})", parts.join(","))
}
