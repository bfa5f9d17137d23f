use blowup_atlas::{run, thread_cap, Cli};
use clap::Parser;

fn main() {
    let cli = Cli::parse();
    if let Some(n) = thread_cap() {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let code = run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
