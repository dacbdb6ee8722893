//! Writes per-step residual traces as `step,res` CSV files.
//!
//! Every solver records the true residual ‖Axₖ − b‖₂ at each step,
//! starting from the initial guess, and a report serializes that history
//! with the exact header `step,res`.  The batch runner emits one file per
//! (wind, ν, mesh) combination with a deterministic name, so repeated
//! runs produce byte-identical traces.

use normalkit::xprmt::{history_file_name, run_history, Wind};

fn main() {
    let dir = std::env::temp_dir().join("normalkit-history-example");
    std::fs::create_dir_all(&dir).unwrap();

    let written = run_history(&dir, Wind::Diagonal, &[32, 64], &[2.5e-3, 1e-2]).unwrap();
    for (path, report) in &written {
        println!(
            "{}  steps={} final={:.3e}",
            path.file_name().unwrap().to_string_lossy(),
            report.iterations,
            report.final_residual()
        );
        assert!(report.converged);
        assert_eq!(report.residual_history.len(), report.iterations + 1);
    }

    let first = dir.join(history_file_name(Wind::Diagonal, 2.5e-3, 32));
    let text = std::fs::read_to_string(&first).unwrap();
    println!("\nhead of {}:", first.file_name().unwrap().to_string_lossy());
    for line in text.lines().take(4) {
        println!("  {line}");
    }
    assert!(text.starts_with("step,res\n"));

    std::fs::remove_dir_all(&dir).ok();
}
