fn main() {
    let code = quenchlab::harness::cli(std::env::args_os());
    std::process::exit(code);
}
