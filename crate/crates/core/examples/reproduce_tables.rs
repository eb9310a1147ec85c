//! Regenerates the three reference tables and compares them cell by cell.

use fracorder::orderest::PipelineOptions;
use fracorder::tables::{configured_threads, table_sweep, TableId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let threads = configured_threads()?;
    for id in TableId::ALL {
        let rows = table_sweep(id, PipelineOptions::table_presets(), threads)?;
        let mut within = (0, 0);
        println!("table {}", id.number());
        println!("  nu0  noise  eps    ratio   (ref)     log     (ref)");
        for r in &rows {
            let ratio = r.nu_ratio.unwrap_or(f64::NAN);
            let log = r.nu_log.unwrap_or(f64::NAN);
            let ok_r = (ratio - r.ref_ratio).abs() <= 0.02;
            let ok_l = (log - r.ref_log).abs() <= 0.03;
            within.0 += usize::from(ok_r);
            within.1 += usize::from(ok_l);
            println!(
                "  {:.1}  {:<5}  {:<5}  {:.4} ({:.4}){}  {:.4} ({:.4}){}",
                r.nu_true,
                r.noise.label(),
                r.epsilon,
                ratio,
                r.ref_ratio,
                if ok_r { ' ' } else { '*' },
                log,
                r.ref_log,
                if ok_l { ' ' } else { '*' },
            );
        }
        println!("  ratio within 0.02: {}/54, log within 0.03: {}/54", within.0, within.1);
    }
    Ok(())
}
