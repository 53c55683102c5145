use std::io::Write;

fn main() {
    if let Some(n) = std::env::var("WFORGE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = wforge::cli::run(std::env::args_os(), &mut out, &mut std::io::stderr());
    let _ = out.flush();
    std::process::exit(code);
}
