//! Runs the command line in process and prints a markdown grid report.

fn main() {
    let args = ["idforge", "verify", "--all", "--k-max", "8", "--n-max", "8", "--format", "markdown"];
    let code = idforge::cli::run(args, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
