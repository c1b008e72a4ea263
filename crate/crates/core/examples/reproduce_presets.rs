//! Runs the command-line presets into a temporary directory.

fn main() {
    let out = std::env::temp_dir().join("specbound-presets");
    for target in ["critical", "fig1", "fig2", "fig3"] {
        let dir = out.join(target);
        let code = specbound::cli::run([
            "specbound",
            "reproduce",
            target,
            "--out-dir",
            dir.to_str().unwrap(),
            "--plot",
            "--no-timestamp",
        ]);
        println!("{target}: exit {code}, outputs in {}", dir.display());
    }
}
