//! Every check family over the built-in groups, printed as a pass/fail table.

fn main() -> cagroups::Result<()> {
    let (_, checks) = cagroups::corpus::run_corpus(2, 0)?;
    for c in &checks.0 {
        println!("{} {}", if c.passed { "ok  " } else { "FAIL" }, c.name);
    }
    println!("{} checks, all passed: {}", checks.0.len(), checks.passed());
    Ok(())
}
