use arena_core::harness::{run_suite, SuiteConfig, SUITES};

use crate::args::VerifyArgs;
use crate::Exit;

pub fn run(a: VerifyArgs) -> Result<(), Exit> {
    let mut cfg = SuiteConfig::new(&a.suite)
        .map_err(|e| Exit::usage(format!("{e}; registered suites: {}", SUITES.join(", "))))?;
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(h) = a.horizon {
        cfg.horizon = h;
    }
    if let Some(t) = a.trials {
        cfg.trials = t;
    }
    if let Some(d) = a.depth {
        cfg.depth = d;
    }
    if let Some(w) = a.width {
        cfg.width = w;
    }
    let report = run_suite(&cfg).map_err(|e| Exit::failure(e.to_string()))?;
    let text = report.render();
    print!("{text}");
    if let Some(path) = &a.out {
        std::fs::write(path, &text).map_err(|e| Exit::failure(format!("cannot write {}: {e}", path.display())))?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Exit::failure(format!("{} check(s) failed", report.failures())))
    }
}
