fn main() {
    std::process::exit(hetgraph_core::cli::run(std::env::args_os()));
}
