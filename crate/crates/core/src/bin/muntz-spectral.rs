fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    std::process::exit(muntz_spectral::cli::main_impl(&args));
}
